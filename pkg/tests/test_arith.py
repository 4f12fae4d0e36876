"""Base-4 (and base-8) brute force of the Δ0 string primitives against plain Python."""

from hypothesis import given, settings
from hypothesis import strategies as st

from mmw.arith import Builder
from mmw.coding import BIT0, BIT1
from mmw.semantics import compiled
from mmw.syntax import Var

K, W = 4, 4 ** 4
X, Y, Z = Var(0), Var(1), Var(2)


def digits(x, base=K):
    out = []
    while x:
        out.append(x % base)
        x //= base
    return out[::-1]


def is_string(x, base=K):
    return 0 not in digits(x, base)


def env(base=K, top=W, **vals):
    e = {8: top, 9: base}
    e.update({int(k[1:]): v for k, v in vals.items()})
    return e


strings = st.integers(0, 63).filter(is_string)


def test_lh():
    g = compiled(Builder(K).lh(X, Y))
    for x in range(64):
        for q in range(W + 1):
            assert g(env(x0=x, x1=q)) == (q == K ** len(digits(x))), (x, q)


def test_pow2_and_powk():
    b = Builder(K)
    p2, pk = compiled(b.pow2(X)), compiled(b.powk(X))
    for q in range(W + 1):
        assert p2(env(x0=q)) == (q > 0 and q & (q - 1) == 0)
        assert pk(env(x0=q)) == (q in (1, 4, 16, 64, 256))


def test_digit():
    b = Builder(K)
    gs = {e: compiled(b.digit(X, Y, e)) for e in range(K)}
    for x in range(128):
        for q in (1, 4, 16, 64):
            for e, g in gs.items():
                assert g(env(x0=x, x1=q)) == ((x // q) % K == e), (x, q, e)


def test_is_str():
    g = compiled(Builder(K).is_str(X))
    for x in range(W):
        assert g(env(x0=x)) == is_string(x), x


@settings(max_examples=200)
@given(strings, strings, st.integers(0, 63), st.booleans())
def test_concat(a, c, w, honest):
    b = Builder(K)
    g = compiled(b.concat(X, [Y, Z]))
    joined = a * K ** len(digits(c)) + c
    if honest:
        w = joined
    if joined >= 64:
        return
    assert g(env(top=64, x0=w, x1=a, x2=c)) == (w == joined)


def test_occurs():
    # nested string quantifiers are cubic in W; two-digit strings keep this quick
    g = compiled(Builder(K).occurs(X, Y))
    small = [x for x in range(16) if is_string(x)]
    for a in small:
        for s in small:
            da, ds = "".join(map(str, digits(a))), "".join(map(str, digits(s)))
            assert g(env(top=16, x0=a, x1=s)) == (da in ds), (a, s)


def test_binary_base8():
    base, top = 8, 8 ** 3
    b = Builder(base)
    g = compiled(b.binary(X, Y))
    for n in range(1, 8):
        spelled = 0
        for bit in bin(n)[2:]:
            spelled = spelled * base + (BIT1 if bit == "1" else BIT0)
        for cand in {spelled, spelled + 1, spelled - 1, BIT1, BIT1 * base + BIT0, 0}:
            if 0 <= cand < top:
                assert g(env(base, top, x0=n, x1=cand)) == (cand == spelled), (n, cand)


def test_builder_rejects_bad_base():
    import pytest
    for base in (2, 6, 10):
        with pytest.raises(ValueError):
            Builder(base)
