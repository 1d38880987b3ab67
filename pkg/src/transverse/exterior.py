"""Elements of the Koszul exterior algebra with polynomial coefficients.

An element of K (x) R/Q is a dict mapping sorted index tuples (exterior
basis subsets) to polynomial coefficients over the quotient ring.  These
are the cycles, wedges, and Massey values that the Golod and obstruction
machinery manipulates.
"""

from __future__ import annotations

from .poly import Polynomial, Ring

KElement = dict  # tuple[int, ...] -> Polynomial


def wedge_subsets(S: tuple, T: tuple):
    """Merge sign and union for e_S ^ e_T, or None when they overlap."""
    if set(S) & set(T):
        return None
    inversions = sum(1 for s in S for t in T if s > t)
    sign = -1 if inversions % 2 else 1
    return sign, tuple(sorted(S + T))


def k_add(x: KElement, y: KElement) -> KElement:
    out = dict(x)
    for S, p in y.items():
        q = out.get(S)
        s = p if q is None else q + p
        if s.is_zero:
            out.pop(S, None)
        else:
            out[S] = s
    return out


def k_scale(x: KElement, c) -> KElement:
    out = {}
    for S, p in x.items():
        q = p.scale(c) if not isinstance(c, Polynomial) else p * c
        if not q.is_zero:
            out[S] = q
    return out


def k_neg(x: KElement) -> KElement:
    return {S: -p for S, p in x.items()}

def k_is_zero(x: KElement) -> bool:
    return not x


def k_wedge(x: KElement, y: KElement) -> KElement:
    out: KElement = {}
    for S, p in x.items():
        for T, q in y.items():
            st = wedge_subsets(S, T)
            if st is None:
                continue
            sign, U = st
            term = (p * q).scale(sign)
            if term.is_zero:
                continue
            cur = out.get(U)
            s = term if cur is None else cur + term
            if s.is_zero:
                out.pop(U, None)
            else:
                out[U] = s
    return out


def _var_monomial(ring: Ring, j: int):
    exps = [0] * ring.nvars
    exps[j] = 1
    from .poly import Monomial

    return Monomial(tuple(exps))


def k_diff(ring: Ring, x: KElement) -> KElement:
    """Koszul differential with d(e_i) = x_i, extended as an antiderivation:
    d(p e_{j1..jr}) = sum_l (-1)^(l+1) x_{jl} p e_{S minus jl}."""
    out: KElement = {}
    for S, p in x.items():
        for pos, j in enumerate(S):
            rest = tuple(v for v in S if v != j)
            sign = 1 if pos % 2 == 0 else -1
            term = p.mul_monomial(_var_monomial(ring, j)).scale(sign)
            if term.is_zero:
                continue
            cur = out.get(rest)
            s = term if cur is None else cur + term
            if s.is_zero:
                out.pop(rest, None)
            else:
                out[rest] = s
    return out


def k_with_ring(x: KElement, ring: Ring) -> KElement:
    out = {}
    for S, p in x.items():
        q = p.with_ring(ring)
        if not q.is_zero:
            out[S] = q
    return out


def k_to_strand_vector(x: KElement, index: dict) -> dict:
    """Coordinates of ``x`` in a strand basis {(subset, monomial): column}.

    Raises KeyError if some term lies outside the strand (wrong degree)."""
    vec = {}
    for S, p in x.items():
        for mono, coeff in p.term_dict().items():
            col = index[(S, mono)]
            cur = vec.get(col, 0)
            s = cur + coeff
            if s:
                vec[col] = s
            else:
                vec.pop(col, None)
    return vec


def k_from_strand_vector(vec: dict, basis: list, ring: Ring) -> KElement:
    """Inverse of :func:`k_to_strand_vector` for basis [(subset, monomial)]."""
    acc: dict = {}
    for col, coeff in vec.items():
        S, mono = basis[col]
        acc.setdefault(S, {})[mono] = coeff
    return {S: Polynomial(ring, terms) for S, terms in acc.items()}
