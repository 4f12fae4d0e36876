"""mmw: a metamathematics workbench for self-referential arithmetic sentences."""

import sys

# formulas built by the arithmetization are deep trees
sys.setrecursionlimit(max(sys.getrecursionlimit(), 200_000))

__version__ = "0.1.0"
