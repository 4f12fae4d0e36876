"""The closed registry of metatheoretic assumptions a claim may rest on."""

from __future__ import annotations

from typing import Dict

CON_PA = "Con(PA)"
K_FALSE = "K false in ℕ"
PAK_OMEGA_CON = "PA+K ω-consistent"
ADEQUACY = "arithmetization adequacy"
DERIVABILITY = "derivability conditions"
GL_SOUNDNESS = "GL arithmetical soundness"
TEXTBOOK_DIAGONAL = "textbook diagonal lemma"

REGISTRY: Dict[str, str] = {
    CON_PA: "Con(PA) is true in ℕ: PA is consistent, hence (second incompleteness theorem) "
            "PA does not prove Con(PA) and PA+¬Con(PA) is consistent.",
    K_FALSE: "The shipped K, the negation of the formalized ω-consistency of PA, "
             "is false in the standard model; equivalent to PA being ω-consistent.",
    PAK_OMEGA_CON: "PA+K is ω-consistent: K is one of the false Σ3 sentences "
                   "whose addition to PA preserves ω-consistency (Isaacson).",
    ADEQUACY: "The arithmetized proof predicate holds of (p, #s) in ℕ exactly when p "
              "is a proof string of s; checker proofs translate into proof strings.",
    DERIVABILITY: "Hilbert-Bernays-Löb derivability conditions for the shipped "
                  "provability predicate of the theory, including D1 read in ℕ: "
                  "if T proves s then T proves Pr_T(#s).",
    GL_SOUNDNESS: "Arithmetical soundness of GL (Solovay): every GL theorem is provable in T "
                  "under every realization of its atoms by sentences.",
    TEXTBOOK_DIAGONAL: "The diagonal lemma as proved in textbooks, used in place of a "
                       "machine-checked certificate when certificates are switched off.",
}


class UnknownAssumption(ValueError):
    pass


def require(name: str) -> str:
    if name not in REGISTRY:
        raise UnknownAssumption(f"{name!r} is not a registered assumption")
    return name
