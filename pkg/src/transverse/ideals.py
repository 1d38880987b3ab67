"""Monomial ideals and the transversality predicates.

All ideal arithmetic here is exact lcm/divisibility combinatorics on
minimal generating sets; no Groebner machinery is needed for monomial
ideals, and that covers every construction in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import DomainError, RingMismatchError
from .poly import Monomial, Ring, minimal_monomials, monomials_of_degree


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal, stored by its minimal generators in canonical order.

    The zero ideal is the empty generator list; the unit ideal is generated
    by 1.
    """

    ring: Ring
    gens: tuple[Monomial, ...]

    def __post_init__(self):
        for g in self.gens:
            if len(g.exps) != self.ring.nvars:
                raise DomainError("generator has wrong variable count")
        object.__setattr__(self, "gens", minimal_monomials(self.gens))

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return any(g.is_one for g in self.gens)

    @property
    def is_proper(self) -> bool:
        return not self.is_unit

    def contains(self, m: Monomial) -> bool:
        return any(g.divides(m) for g in self.gens)

    def max_gen_degree(self) -> int:
        return max((g.degree for g in self.gens), default=0)

    def quotient_ring(self) -> Ring:
        return self.ring.quotient(self.gens)

    def with_ring(self, ring: Ring) -> "MonomialIdeal":
        return MonomialIdeal(ring, self.gens)

    def __str__(self):
        if not self.gens:
            return "(0)"
        return "(" + ", ".join(self.ring.format_monomial(g) for g in self.gens) + ")"


def minimalize_generators(ring: Ring, gens) -> MonomialIdeal:
    return MonomialIdeal(ring, tuple(gens))


def _check_rings(I: MonomialIdeal, J: MonomialIdeal):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def ideal_product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_rings(I, J)
    return MonomialIdeal(I.ring, tuple(g * h for g in I.gens for h in J.gens))


def ideal_intersection(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Intersection via pairwise lcms — exact for monomial ideals."""
    _check_rings(I, J)
    return MonomialIdeal(I.ring, tuple(g.lcm(h) for g in I.gens for h in J.gens))


def is_transverse(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """True iff the intersection and the product have the same minimal
    generators (the generating sets are canonical, so set equality decides)."""
    _check_rings(I, J)
    for K in (I, J):
        if K.is_zero or K.is_unit:
            raise DomainError("transversality needs nonzero proper ideals")
    return ideal_intersection(I, J).gens == ideal_product(I, J).gens


def transversality_witness(I: MonomialIdeal, J: MonomialIdeal):
    """A minimal generator of the intersection outside the product, if any."""
    prod = ideal_product(I, J)
    for m in ideal_intersection(I, J).gens:
        if not prod.contains(m):
            return m
    return None


def is_sequentially_transverse(ideals) -> bool:
    ideals = list(ideals)
    if len(ideals) < 2:
        raise DomainError("need at least two ideals")
    prefix = ideals[0]
    for nxt in ideals[1:]:
        if not is_transverse(prefix, nxt):
            return False
        prefix = ideal_product(prefix, nxt)
    return True


def product_of(ideals) -> MonomialIdeal:
    return reduce(ideal_product, ideals)


def degree_basis_mod_ideal(I: MonomialIdeal, t: int) -> list[Monomial]:
    """Monomial k-basis of (R/I)_t, canonically ordered."""
    if t < 0:
        raise DomainError("degree must be nonnegative")
    return monomials_of_degree(I.ring, t, I.gens)
