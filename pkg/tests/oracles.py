"""Independent reference implementations used by the test-suite.

Deliberately naive: plain recursion over the expanded syntax, no compilation,
no caching, no shared code with the package beyond the AST classes.
"""

from mmw.syntax import (
    Add, And, Eq, Exists, ForAll, Iff, Imp, Mul, Not, Num, Or, Succ, Var, Zero,
)


def expand_numeral(n):
    """num(n) as an explicit S/*/0 tree, built from the definition."""
    if n == 0:
        return ("0",)
    if n <= 2:
        return ("S", expand_numeral(n - 1))
    if n % 2:
        return ("S", expand_numeral(n - 1))
    return ("*", ("S", ("S", ("0",))), expand_numeral(n // 2))


def value_of_tree(t):
    if t[0] == "0":
        return 0
    if t[0] == "S":
        return value_of_tree(t[1]) + 1
    return value_of_tree(t[1]) * value_of_tree(t[2])


def term_value(t, env):
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Num):
        return value_of_tree(expand_numeral(t.value))
    if isinstance(t, Var):
        return env[t.index]
    if isinstance(t, Succ):
        return term_value(t.arg, env) + 1
    if isinstance(t, Add):
        return term_value(t.left, env) + term_value(t.right, env)
    if isinstance(t, Mul):
        return term_value(t.left, env) * term_value(t.right, env)
    raise TypeError(t)


def truth(f, env=None):
    """Tarskian truth for formulas whose quantifiers are all bounded."""
    env = dict(env or {})
    if isinstance(f, Eq):
        return term_value(f.left, env) == term_value(f.right, env)
    if isinstance(f, Not):
        return not truth(f.arg, env)
    if isinstance(f, And):
        return truth(f.left, env) and truth(f.right, env)
    if isinstance(f, Or):
        return truth(f.left, env) or truth(f.right, env)
    if isinstance(f, Imp):
        return (not truth(f.left, env)) or truth(f.right, env)
    if isinstance(f, Iff):
        return truth(f.left, env) == truth(f.right, env)
    if isinstance(f, (ForAll, Exists)):
        if f.bound is None:
            raise ValueError("oracle only handles bounded quantifiers")
        n = term_value(f.bound, env)
        results = []
        for v in range(n):
            inner = dict(env)
            inner[f.var] = v
            results.append(truth(f.body, inner))
        return all(results) if isinstance(f, ForAll) else any(results)
    raise TypeError(f)


def expanded_tokens(x):
    """Prefix token list of the fully expanded tree, computed without the encoder."""
    from mmw import coding as C

    out = []

    def term(t):
        if isinstance(t, tuple):
            if t[0] == "0":
                out.append(C.ZERO)
            elif t[0] == "S":
                out.append(C.SUCC)
                term(t[1])
            else:
                out.append(C.MUL)
                term(t[1])
                term(t[2])
        elif isinstance(t, Zero):
            out.append(C.ZERO)
        elif isinstance(t, Num):
            term(expand_numeral(t.value))
        elif isinstance(t, Var):
            var(t.index)
        elif isinstance(t, Succ):
            out.append(C.SUCC)
            term(t.arg)
        else:
            out.append(C.ADD if isinstance(t, Add) else C.MUL)
            term(t.left)
            term(t.right)

    def var(i):
        out.append(C.VAR)
        if i:
            out.extend(C.BIT1 if b == "1" else C.BIT0 for b in bin(i)[2:])
        out.append(C.END)

    def formula(f):
        if isinstance(f, Eq):
            out.append(C.EQ)
            term(f.left)
            term(f.right)
        elif isinstance(f, Not):
            out.append(C.NOT)
            formula(f.arg)
        elif isinstance(f, (And, Or, Imp, Iff)):
            out.append({And: C.AND, Or: C.OR, Imp: C.IMP, Iff: C.IFF}[type(f)])
            formula(f.left)
            formula(f.right)
        else:
            if f.bound is None:
                out.append(C.FORALL if isinstance(f, ForAll) else C.EXISTS)
                var(f.var)
            else:
                out.append(C.BFORALL if isinstance(f, ForAll) else C.BEXISTS)
                var(f.var)
                term(f.bound)
            formula(f.body)

    if isinstance(x, (Zero, Num, Var, Succ, Add, Mul)):
        term(x)
    else:
        formula(x)
    return out


def delta0_sentences(max_size, max_const=3, nvars=2):
    """Every Δ0 sentence of AST size <= max_size over x0..x{nvars-1} and constants <= max_const.

    Size counts nodes; a constant or variable is one node, a bounded quantifier
    counts one plus its bound and body.  A bound may not mention the variable
    it bounds (``forall x0 < x0`` is not a bounded quantifier).
    """
    from functools import lru_cache

    from mmw.syntax import free_vars, numeral

    @lru_cache(maxsize=None)
    def terms_of(n):
        if n == 1:
            return tuple([numeral(k) for k in range(max_const + 1)] + [Var(i) for i in range(nvars)])
        out = [Succ(t) for t in terms_of(n - 1)]
        for a in range(1, n - 1):
            for l in terms_of(a):
                for r in terms_of(n - 1 - a):
                    out.append(Add(l, r))
                    out.append(Mul(l, r))
        return tuple(out)

    @lru_cache(maxsize=None)
    def formulas_of(n):
        out = []
        for a in range(1, n - 1):
            for l in terms_of(a):
                for r in terms_of(n - 1 - a):
                    out.append(Eq(l, r))
        if n > 1:
            out.extend(Not(f) for f in formulas_of(n - 1))
        for a in range(1, n - 1):
            for l in formulas_of(a):
                for r in formulas_of(n - 1 - a):
                    for op in (And, Or, Imp, Iff):
                        out.append(op(l, r))
        for a in range(1, n - 1):
            for bound in terms_of(a):
                for body in formulas_of(n - 1 - a):
                    for v in range(nvars):
                        if v in free_vars(bound):
                            continue
                        out.append(ForAll(v, body, bound))
                        out.append(Exists(v, body, bound))
        return tuple(out)

    for n in range(1, max_size + 1):
        for f in formulas_of(n):
            if not free_vars(f):
                yield f


def propositional_tautology(f):
    """Truth-table check; atoms are the maximal subformulas that are not connectives."""
    import itertools

    atoms = []

    def collect(g):
        if isinstance(g, Not):
            collect(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            collect(g.left)
            collect(g.right)
        elif g not in atoms:
            atoms.append(g)

    def value(g, val):
        if isinstance(g, Not):
            return not value(g.arg, val)
        if isinstance(g, And):
            return value(g.left, val) and value(g.right, val)
        if isinstance(g, Or):
            return value(g.left, val) or value(g.right, val)
        if isinstance(g, Imp):
            return (not value(g.left, val)) or value(g.right, val)
        if isinstance(g, Iff):
            return value(g.left, val) == value(g.right, val)
        return val[atoms.index(g)]

    collect(f)
    if len(atoms) > 16:
        raise ValueError("too many atoms for the reference check")
    return all(value(f, bits) for bits in itertools.product((False, True), repeat=len(atoms)))


def closed_true_delta0(f):
    """Reference for the Compute rule: a sentence, every quantifier properly bounded, true."""
    from mmw.syntax import free_vars, subformulas

    if free_vars(f):
        return False
    for s in subformulas(f):
        if isinstance(s, (ForAll, Exists)) and (s.bound is None or s.var in free_vars(s.bound)):
            return False
    return truth(f)


# -- modal

def modal_formulas(max_size, leaves=(("p", 0), ("p", 1), ("bot",))):
    """Every modal formula of size <= max_size over ``leaves``, by size."""
    tab = {1: list(leaves)}
    for k in range(2, max_size + 1):
        out = []
        for a in tab[k - 1]:
            out.append(("~", a))
            out.append(("[]", a))
        for i in range(1, k - 1):
            for a in tab[i]:
                for b in tab[k - 1 - i]:
                    for op in ("&", "|", "->", "<->"):
                        out.append((op, a, b))
        tab[k] = out
    return [f for k in sorted(tab) for f in tab[k]]


def _rooted_trees(n):
    """Parent arrays of rooted trees on worlds 0..n-1 (0 the root, parents earlier)."""
    if n == 1:
        yield ()
        return
    for par in _rooted_trees(n - 1):
        for q in range(n - 1):
            yield par + (q,)


def tree_models(max_worlds, natoms=2):
    """Transitive closures of all small rooted trees, with every valuation.

    Yields (successors, valuation) where successors[w] is the set of proper
    descendants of w.  Duplicated shapes are harmless for an oracle.
    """
    for n in range(1, max_worlds + 1):
        for par in _rooted_trees(n):
            parent = (None,) + par
            desc = [set() for _ in range(n)]
            for w in range(1, n):
                q = parent[w]
                while q is not None:
                    desc[q].add(w)
                    q = parent[q]
            for code in range((1 << natoms) ** n):
                val = []
                for _ in range(n):
                    val.append({i for i in range(natoms) if code >> i & 1})
                    code >>= natoms
                yield desc, val


def forces(succ, val, w, f):
    k = f[0]
    if k == "p":
        return f[1] in val[w]
    if k == "bot":
        return False
    if k == "~":
        return not forces(succ, val, w, f[1])
    if k == "[]":
        return all(forces(succ, val, v, f[1]) for v in succ[w])
    a, b = forces(succ, val, w, f[1]), forces(succ, val, w, f[2])
    return {"&": a and b, "|": a or b, "->": (not a) or b, "<->": a == b}[k]


# -- seeded random syntax (for the large roundtrip batches)

def random_term(rng, depth=3, nvars=13, max_num=2 ** 80):
    from mmw.syntax import Add, Mul, Succ, Var, numeral
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.5:
            return Var(rng.randrange(nvars))
        return numeral(rng.randrange(max_num) if rng.random() < 0.3 else rng.randrange(20))
    k = rng.randrange(3)
    if k == 0:
        return Succ(random_term(rng, depth - 1, nvars, max_num))
    cls = Add if k == 1 else Mul
    return cls(random_term(rng, depth - 1, nvars, max_num), random_term(rng, depth - 1, nvars, max_num))


def random_formula(rng, depth=4, nvars=13, max_num=2 ** 80):
    from mmw.syntax import And, Eq, Exists, ForAll, Iff, Imp, Not, Or
    if depth == 0 or rng.random() < 0.25:
        return Eq(random_term(rng, 2, nvars, max_num), random_term(rng, 2, nvars, max_num))
    k = rng.randrange(4)
    sub = lambda: random_formula(rng, depth - 1, nvars, max_num)  # noqa: E731
    if k == 0:
        return Not(sub())
    if k == 1:
        return rng.choice([And, Or, Imp, Iff])(sub(), sub())
    q = rng.choice([ForAll, Exists])
    if k == 2:
        return q(rng.randrange(nvars), sub())
    return q(rng.randrange(nvars), sub(), random_term(rng, 2, nvars, max_num))
