"""Multiplicative structures on resolutions.

A product is stored as an explicit table on basis pairs with values in the
target term; all identities (Leibniz, square-zero, commutativity,
associativity) are certified exactly on basis pairs/triples by matrix
arithmetic.  Square-zero is a quadratic identity, so it is certified on
the spanning set of generators (diagonal plus S_1 squares), which is
exactly what the iterated star construction consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .complexes import (
    GradedFreeComplex,
    star_basis,
    star_product,
    strand_basis,
    strand_matrix,
)
from .errors import CertificationError, DomainError
from .exterior import wedge_subsets
from .ideals import MonomialIdeal
from .poly import Monomial, Polynomial
from .resolutions import koszul_complex, lift_comparison_map, taylor_complex

Vec = dict  # generator index -> Polynomial


def _vec_add(ring, x: Vec, y: Vec) -> Vec:
    out = dict(x)
    for k, p in y.items():
        s = out.get(k, Polynomial.zero(ring)) + p
        if s.is_zero:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _vec_scale(x: Vec, p: Polynomial) -> Vec:
    out = {}
    for k, q in x.items():
        s = p * q
        if not s.is_zero:
            out[k] = s
    return out


def _vec_is_zero(x: Vec) -> bool:
    return not x


def _diff_column(C: GradedFreeComplex, i: int, v: int) -> Vec:
    return {r: p for (r, c), p in C.diff(i).entries.items() if c == v}


def _apply_diff(C: GradedFreeComplex, i: int, vec: Vec) -> Vec:
    out: Vec = {}
    ring = C.ring
    for v, p in vec.items():
        for r, q in _diff_column(C, i, v).items():
            s = out.get(r, Polynomial.zero(ring)) + q * p
            if s.is_zero:
                out.pop(r, None)
            else:
                out[r] = s
    return out


class DegreeOneProduct:
    """A product C_1 (x) C_j -> C_{j+1} given by tables on basis pairs."""

    def __init__(self, complex: GradedFreeComplex, tables: dict):
        self.complex = complex
        self.tables = tables  # j -> {(u, v): Vec}

    def value(self, j: int, u: int, v: int) -> Vec:
        return self.tables.get(j, {}).get((u, v), {})

    def apply(self, j: int, left: Vec, right: Vec) -> Vec:
        """Bilinear extension with polynomial coefficients on both slots."""
        ring = self.complex.ring
        out: Vec = {}
        for u, p in left.items():
            for v, q in right.items():
                val = self.value(j, u, v)
                if not val:
                    continue
                out = _vec_add(ring, out, _vec_scale(val, p * q))
        return out

    def to_json(self) -> dict:
        """Tables as triple lists: [left index, right index, result vector]."""
        return {
            str(j): [
                [u, v, {str(w): str(p) for w, p in sorted(val.items())}]
                for (u, v), val in sorted(tab.items())
            ]
            for j, tab in sorted(self.tables.items())
        }


class FullProduct:
    """A product on all bidegrees C_i (x) C_j -> C_{i+j}."""

    def __init__(self, complex: GradedFreeComplex, tables: dict):
        self.complex = complex
        self.tables = tables  # (i, j) -> {(u, v): Vec}

    def value(self, i: int, j: int, u: int, v: int) -> Vec:
        return self.tables.get((i, j), {}).get((u, v), {})

    def apply(self, i: int, j: int, left: Vec, right: Vec) -> Vec:
        ring = self.complex.ring
        out: Vec = {}
        for u, p in left.items():
            for v, q in right.items():
                val = self.value(i, j, u, v)
                if not val:
                    continue
                out = _vec_add(ring, out, _vec_scale(val, p * q))
        return out

    def degree_one(self) -> DegreeOneProduct:
        tables = {}
        for (i, j), tab in self.tables.items():
            if i == 1:
                tables[j] = dict(tab)
        return DegreeOneProduct(self.complex, tables)

    def to_json(self) -> dict:
        return {
            f"{i},{j}": [
                [u, v, {str(w): str(p) for w, p in sorted(val.items())}]
                for (u, v), val in sorted(tab.items())
            ]
            for (i, j), tab in sorted(self.tables.items())
        }


@dataclass
class ProductCertificate:
    leibniz_failures: list = field(default_factory=list)
    square_failures: list = field(default_factory=list)
    commutativity_failures: list = field(default_factory=list)
    associativity_failures: list = field(default_factory=list)
    checked_pairs: int = 0
    checked_triples: int = 0

    @property
    def ok(self) -> bool:
        return not (
            self.leibniz_failures
            or self.square_failures
            or self.commutativity_failures
            or self.associativity_failures
        )


# ---------------------------------------------------------------------------
# exterior-type products on Koszul and Taylor complexes


def _exterior_full_product(C: GradedFreeComplex, lcms=None) -> FullProduct:
    """e_S . e_T = sign(S,T) c(S,T) e_{S u T} on a subset-indexed complex;
    the coefficient is 1 for Koszul and lcm_S lcm_T / lcm_{S u T} for Taylor."""
    subsets = C.meta["subsets"]
    index = [
        {S: k for k, S in enumerate(subsets[i])} for i in range(len(subsets))
    ]
    ring = C.ring
    tables: dict = {}
    top = C.length
    for i in range(0, top + 1):
        for j in range(0, top - i + 1):
            tab = {}
            for u, S in enumerate(subsets[i]):
                for v, T in enumerate(subsets[j]):
                    st = wedge_subsets(S, T)
                    if st is None:
                        continue
                    sign, U = st
                    if lcms is None:
                        coeff = Polynomial.constant(ring, sign)
                    else:
                        mono = (lcms[i][S] * lcms[j][T]).divide(lcms[i + j][U])
                        coeff = Polynomial.from_monomial(
                            ring, mono, ring.field.from_int(sign)
                        )
                    tab[(u, v)] = {index[i + j][U]: coeff}
            tables[(i, j)] = tab
    return FullProduct(C, tables)


def koszul_dg_product(K: GradedFreeComplex) -> FullProduct:
    """The exterior-algebra product on a Koszul complex."""
    if "subsets" not in K.meta:
        raise DomainError("expected a complex built by koszul_complex")
    return _exterior_full_product(K)


def taylor_dg_product(I: MonomialIdeal, C: GradedFreeComplex | None = None) -> FullProduct:
    """The classical associative DG product on the Taylor complex of I,
    certified in full (Leibniz, graded commutativity, associativity, odd
    squares) before being returned."""
    C = C or taylor_complex(I)
    prod = _exterior_full_product(C, C.meta["lcms"])
    cert = certify_full_dg(prod)
    if not cert.ok:
        raise CertificationError(
            f"Taylor product failed certification: "
            f"leibniz {cert.leibniz_failures[:2]}, "
            f"assoc {cert.associativity_failures[:2]}"
        )
    return prod


def certify_full_dg(prod: FullProduct) -> ProductCertificate:
    """All four DG-algebra axioms plus associativity, exhaustively on basis
    pairs and triples."""
    C = prod.complex
    ring = C.ring
    cert = ProductCertificate()
    top = C.length
    one = Polynomial.one(ring)
    for i in range(0, top + 1):
        for j in range(0, top - i + 1):
            for u in range(C.rank(i)):
                for v in range(C.rank(j)):
                    cert.checked_pairs += 1
                    uv = prod.value(i, j, u, v)
                    # Leibniz: d(xy) = dx.y + (-1)^i x.dy
                    lhs = _apply_diff(C, i + j, uv) if i + j >= 1 else {}
                    rhs: Vec = {}
                    if i >= 1:
                        rhs = prod.apply(i - 1, j, _diff_column(C, i, u), {v: one})
                    if j >= 1:
                        term = prod.apply(i, j - 1, {u: one}, _diff_column(C, j, v))
                        if i % 2:
                            term = {k: -p for k, p in term.items()}
                        rhs = _vec_add(ring, rhs, term)
                    if not _vec_is_zero(_vec_add(ring, lhs, {k: -p for k, p in rhs.items()})):
                        cert.leibniz_failures.append((i, j, u, v))
                    # graded commutativity: xy = (-1)^(ij) yx
                    vu = prod.value(j, i, v, u)
                    if (i * j) % 2:
                        vu = {k: -p for k, p in vu.items()}
                    if not _vec_is_zero(
                        _vec_add(ring, dict(uv), {k: -p for k, p in vu.items()})
                    ):
                        cert.commutativity_failures.append((i, j, u, v))
            if i % 2 and i == j:
                for u in range(C.rank(i)):
                    if prod.value(i, i, u, u):
                        cert.square_failures.append((i, u))
    for i in range(1, top + 1):
        for j in range(1, top - i + 1):
            for k in range(1, top - i - j + 1):
                for u in range(C.rank(i)):
                    for v in range(C.rank(j)):
                        for w in range(C.rank(k)):
                            cert.checked_triples += 1
                            left = prod.apply(
                                i + j, k, prod.value(i, j, u, v), {w: one}
                            )
                            right = prod.apply(
                                i, j + k, {u: one}, prod.value(j, k, v, w)
                            )
                            if not _vec_is_zero(
                                _vec_add(
                                    ring, left, {x: -p for x, p in right.items()}
                                )
                            ):
                                cert.associativity_failures.append(
                                    (i, j, k, u, v, w)
                                )
    return cert


def certify_degree_one(prod: DegreeOneProduct) -> ProductCertificate:
    """The two degree-one identities, exhaustively on basis pairs:
    (a) d(f1.fj) = d(f1) fj - f1.d(fj), and (b) f1.(f1.fj) = 0, together
    with the degree-one squares f1.f1 = 0 that iterated constructions need."""
    C = prod.complex
    ring = C.ring
    cert = ProductCertificate()
    one = Polynomial.one(ring)
    if C.rank(0) != 1:
        raise DomainError("degree-one certification expects C_0 = R")
    for j in sorted(set(prod.tables) | set(range(1, C.length + 1))):
        if j < 1 or j > C.length:
            continue
        for u in range(C.rank(1)):
            alpha = C.diff(1).entry(0, u)
            for v in range(C.rank(j)):
                cert.checked_pairs += 1
                uv = prod.value(j, u, v)
                lhs = _apply_diff(C, j + 1, uv)
                rhs = {v: alpha}
                if j == 1:
                    beta = C.diff(1).entry(0, v)
                    rhs = _vec_add(ring, rhs, {u: -beta})
                else:
                    term = prod.apply(j - 1, {u: one}, _diff_column(C, j, v))
                    rhs = _vec_add(ring, rhs, {k: -p for k, p in term.items()})
                if not _vec_is_zero(
                    _vec_add(ring, lhs, {k: -p for k, p in rhs.items()})
                ):
                    cert.leibniz_failures.append(("leibniz", j, u, v))
                sq = prod.apply(j + 1, {u: one}, uv)
                if not _vec_is_zero(sq):
                    cert.square_failures.append(("square", j, u, v))
        if j == 1:
            for u in range(C.rank(1)):
                if prod.value(1, u, u):
                    cert.square_failures.append(("self-square", u))
    return cert


# ---------------------------------------------------------------------------
# the degree-one product on star products


def star_degree_one_product(
    F: GradedFreeComplex,
    G: GradedFreeComplex,
    prodF: DegreeOneProduct | FullProduct,
    prodG: DegreeOneProduct | FullProduct,
    certify: bool = True,
) -> DegreeOneProduct:
    """The two-case degree-one product on F*G:

    (f1 (x) g1) . (fa (x) gb) = (-1)^a d(f1) fa (x) g1.gb,  plus
    d(gb) f1.fa (x) g1 when b = 1.

    Inputs must satisfy the degree-one identities; the output is certified
    the same way (exhaustively on basis pairs) before being returned.
    """
    if isinstance(prodF, FullProduct):
        prodF = prodF.degree_one()
    if isinstance(prodG, FullProduct):
        prodG = prodG.degree_one()
    if certify:
        for name, pr in (("left", prodF), ("right", prodG)):
            c = certify_degree_one(pr)
            if not c.ok:
                raise CertificationError(
                    f"{name} input product fails the degree-one identities"
                )
    S = star_product(F, G)
    ring = S.ring
    bases = {n: star_basis(F, G, n) for n in range(1, S.length + 1)}
    index = {n: {key: k for k, key in enumerate(bases[n])} for n in bases}
    tables: dict = {}
    for j in range(1, S.length + 1):
        tab: dict = {}
        target = index.get(j + 1, {})
        for p_idx, (_, _, uf, ug) in enumerate(bases[1]):
            alpha = F.diff(1).entry(0, uf)
            for x_idx, (a, b, fa, gb) in enumerate(bases[j]):
                out: Vec = {}
                sign = -1 if a % 2 else 1
                for w, q in prodG.value(b, ug, gb).items():
                    key = (a, b + 1, fa, w)
                    if key in target:
                        s = out.get(target[key], Polynomial.zero(ring)) + (
                            alpha * q
                        ).scale(sign)
                        if s.is_zero:
                            out.pop(target[key], None)
                        else:
                            out[target[key]] = s
                if b == 1:
                    beta = G.diff(1).entry(0, gb)
                    for w, q in prodF.value(a, uf, fa).items():
                        key = (a + 1, 1, w, ug)
                        if key in target:
                            s = out.get(
                                target[key], Polynomial.zero(ring)
                            ) + beta * q
                            if s.is_zero:
                                out.pop(target[key], None)
                            else:
                                out[target[key]] = s
                if out:
                    tab[(p_idx, x_idx)] = out
        tables[j] = tab
    prod = DegreeOneProduct(S, tables)
    if certify:
        cert = certify_degree_one(prod)
        if not cert.ok:
            raise CertificationError(
                f"star degree-one product failed: "
                f"{(cert.leibniz_failures + cert.square_failures)[:3]}"
            )
    return prod


# ---------------------------------------------------------------------------
# DG-module structure over a Koszul complex


@dataclass
class ActionCertificate:
    leibniz_failures: list = field(default_factory=list)
    relation_failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not (self.leibniz_failures or self.relation_failures)


@dataclass
class ModuleAction:
    """A DG-module action of a Koszul complex on a resolution."""

    koszul: GradedFreeComplex
    complex: GradedFreeComplex
    phi: list
    tables: dict  # (i, j) -> {(subset, v): Vec}
    certificate: ActionCertificate

    def act(self, i: int, j: int, S: tuple, vec: Vec) -> Vec:
        ring = self.complex.ring
        out: Vec = {}
        tab = self.tables.get((i, j), {})
        for v, p in vec.items():
            val = tab.get((S, v))
            if val:
                out = _vec_add(ring, out, _vec_scale(val, p))
        return out


def koszul_module_action(
    C: GradedFreeComplex, prod: DegreeOneProduct | FullProduct, elements: list
) -> ModuleAction:
    """Make C a DG-module over the Koszul complex on a monomial regular
    sequence contained in the resolved ideal: lift a comparison map phi, act
    by k1 * f = phi_1(k1) . f, and extend through the exterior algebra.

    The extension is certified: the action kills the exterior relations on a
    spanning set (diagonal and polarized degree-one pairs) and satisfies the
    module Leibniz rule on all basis pairs.
    """
    if isinstance(prod, FullProduct):
        prod = prod.degree_one()
    ring = C.ring
    polys = []
    for a in elements:
        if isinstance(a, Monomial):
            a = Polynomial.from_monomial(ring, a)
        if len(a.term_dict()) != 1:
            raise DomainError("regular sequence elements must be monomials")
        polys.append(a)
    supports = [next(iter(p.term_dict())).support() for p in polys]
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if supports[i] & supports[j]:
                raise DomainError(
                    "regular sequence needs pairwise disjoint supports"
                )
    d1_entries = [p for (_, _), p in sorted(C.diff(1).entries.items())]
    d1_monos = [
        next(iter(p.term_dict()))
        for p in d1_entries
        if len(p.term_dict()) == 1
    ]
    if len(d1_monos) == len(d1_entries):
        for p in polys:
            m = next(iter(p.term_dict()))
            if not any(g.divides(m) for g in d1_monos):
                raise DomainError(f"{p} is not in the resolved ideal")
    K = koszul_complex(polys)
    phi = lift_comparison_map(K, C)
    phi1_cols = [
        {r: q for (r, c), q in phi[1].entries.items() if c == s}
        for s in range(len(polys))
    ]

    def act1(s: int, j: int, vec: Vec) -> Vec:
        return prod.apply(j, phi1_cols[s], vec)

    subsets = K.meta["subsets"]
    one = Polynomial.one(ring)

    # e_S acting on 1 in C_0: the iterated product of the phi_1 images
    scalar_act: dict = {(): {0: one}}
    for i in range(1, K.length + 1):
        for S in subsets[i]:
            if i == 1:
                scalar_act[S] = dict(phi1_cols[S[0]])
            else:
                scalar_act[S] = act1(S[0], i - 1, scalar_act[S[1:]])

    tables: dict = {}
    for i in range(1, K.length + 1):
        for j in range(1, C.length + 1):
            tab = {}
            for S in subsets[i]:
                for v in range(C.rank(j)):
                    vec: Vec = {v: one}
                    jj = j
                    for s in reversed(S):
                        vec = act1(s, jj, vec)
                        jj += 1
                    if vec:
                        tab[(S, v)] = vec
            if tab:
                tables[(i, j)] = tab
    cert = ActionCertificate()
    # exterior relations on the spanning set: s.(s'.f) + s'.(s.f) = 0
    for s in range(len(polys)):
        for s2 in range(s, len(polys)):
            for j in range(1, C.length + 1):
                for v in range(C.rank(j)):
                    cert.checked += 1
                    a = act1(s, j + 1, act1(s2, j, {v: one}))
                    if s == s2:
                        if not _vec_is_zero(a):
                            cert.relation_failures.append((s, s2, j, v))
                        continue
                    b = act1(s2, j + 1, act1(s, j, {v: one}))
                    if not _vec_is_zero(_vec_add(ring, a, b)):
                        cert.relation_failures.append((s, s2, j, v))
    # module Leibniz: d(e_S * f) = d(e_S) * f + (-1)^|S| e_S * d(f)
    action = ModuleAction(K, C, phi, tables, cert)
    for i in range(1, K.length + 1):
        for j in range(1, C.length + 1):
            if i + j > C.length + 1:
                continue
            tab = tables.get((i, j), {})
            for Sidx, S in enumerate(subsets[i]):
                dS = _diff_column(K, i, Sidx)
                for v in range(C.rank(j)):
                    cert.checked += 1
                    lhs = _apply_diff(C, i + j, tab.get((S, v), {}))
                    rhs: Vec = {}
                    for r, q in dS.items():
                        Sr = subsets[i - 1][r]
                        if i - 1 == 0:
                            rhs = _vec_add(ring, rhs, {v: q})
                        else:
                            rhs = _vec_add(
                                ring,
                                rhs,
                                _vec_scale(
                                    action.act(i - 1, j, Sr, {v: one}), q
                                ),
                            )
                    if j == 1:
                        # d(f) lands in C_0 = R: e_S acts through its
                        # iterated product on the unit
                        beta = C.diff(1).entry(0, v)
                        term = _vec_scale(scalar_act[S], beta)
                    else:
                        term = action.act(i, j - 1, S, _diff_column(C, j, v))
                    if i % 2:
                        term = {k: -p for k, p in term.items()}
                    rhs = _vec_add(ring, rhs, term)
                    if not _vec_is_zero(
                        _vec_add(ring, lhs, {k: -p for k, p in rhs.items()})
                    ):
                        cert.leibniz_failures.append((i, j, S, v))
    return action


# ---------------------------------------------------------------------------
# experimental associativity probe


@dataclass
class ProbeStage:
    n: int
    blocks: list
    variables: int
    assoc_enforced: bool
    leibniz_unsolvable: list


@dataclass
class ProbeReport:
    """Findings of the experimental extension attempt; never a claim.

    ``extension_found`` records whether Leibniz-compatible products exist in
    every requested bidegree; ``associative`` whether the canonical choice
    also has vanishing associators on all tested basis triples.
    """

    bound: int
    stages: list
    tested_triples: int = 0
    residual_triples: list = field(default_factory=list)

    @property
    def extension_found(self) -> bool:
        return all(not s.leibniz_unsolvable for s in self.stages)

    @property
    def associative(self) -> bool:
        return self.extension_found and not self.residual_triples


def associativity_probe(
    C: GradedFreeComplex, prod: DegreeOneProduct | FullProduct, bound=None
) -> ProbeReport:
    """Try to extend a degree-one product to C_i (x) C_j -> C_{i+j} for
    i + j <= bound by solving the Leibniz constraints strand by strand,
    preferring solutions that also satisfy the associativity constraints
    that are linear at each stage; then report associator residuals on all
    basis triples.  Report-only: the outcome is data, not a theorem.
    """
    if isinstance(prod, FullProduct):
        prod = prod.degree_one()
    if bound is None:
        bound = C.length + 1
    if bound <= 0:
        return ProbeReport(bound=bound, stages=[])
    ring = C.ring
    field_ = ring.field
    one = Polynomial.one(ring)
    known: dict = {}
    for j, tab in prod.tables.items():
        known[(1, j)] = dict(tab)

    def mul(i: int, j: int, left: Vec, right: Vec) -> Vec:
        if i == 0:
            p = left.get(0, Polynomial.zero(ring))
            return _vec_scale(right, p)
        if j == 0:
            p = right.get(0, Polynomial.zero(ring))
            return _vec_scale(left, p)
        tab = known.get((i, j), {})
        out: Vec = {}
        for u, p in left.items():
            for v, q in right.items():
                val = tab.get((u, v))
                if val:
                    out = _vec_add(ring, out, _vec_scale(val, p * q))
        return out

    stages = []
    for n in range(3, bound + 1):
        blocks = [(i, n - i) for i in range(2, n) if n - i >= 1]
        blocks = [
            (i, j) for (i, j) in blocks if C.rank(i) and C.rank(j)
        ]
        var_index: dict = {}
        var_meta = []
        strand_cache: dict = {}

        def strand(level, t):
            key = (level, t)
            if key not in strand_cache:
                basis = strand_basis(C, level, t)
                strand_cache[key] = (basis, {bm: k for k, bm in enumerate(basis)})
            return strand_cache[key]

        for (i, j) in blocks:
            for u in range(C.rank(i)):
                for v in range(C.rank(j)):
                    t = C.degs(i)[u] + C.degs(j)[v]
                    basis, _ = strand(n, t)
                    for c in range(len(basis)):
                        var_index[((i, j), (u, v), c)] = len(var_meta)
                        var_meta.append(((i, j), (u, v), c))
        nvars = len(var_meta)
        leibniz_rows: list = []
        leibniz_rhs: dict = {}
        unsolvable = []

        def vec_to_coords(vec: Vec, level, t):
            _, idx = strand(level, t)
            out = {}
            for g, p in vec.items():
                for mono, coeff in p.term_dict().items():
                    k = idx[(g, mono)]
                    s = out.get(k, 0) + coeff
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            return out

        def emit_unknown(rowmap, block, pair, t_pair, coeff_poly, level_t, sign):
            """Add sign * coeff_poly * m_block(pair) into rowmap coordinates."""
            basis_src, _ = strand(n, t_pair)
            _, idx_out = strand(n, level_t)
            for c, (g, m) in enumerate(basis_src):
                var = var_index.get((block, pair, c))
                if var is None:
                    continue
                for mono, sc in coeff_poly.term_dict().items():
                    mm = m * mono
                    if ring.kills(mm):
                        continue
                    k = idx_out[(g, mm)]
                    rowmap.setdefault(k, {})
                    s = rowmap[k].get(var, 0) + (sc if sign > 0 else -sc)
                    if s:
                        rowmap[k][var] = s
                    else:
                        rowmap[k].pop(var, None)

        # Leibniz constraints per block and basis pair
        for (i, j) in blocks:
            for u in range(C.rank(i)):
                for v in range(C.rank(j)):
                    t = C.degs(i)[u] + C.degs(j)[v]
                    basis_n, _ = strand(n, t)
                    basis_lo, idx_lo = strand(n - 1, t)
                    rhs_vec = mul(i - 1, j, _diff_column(C, i, u), {v: one})
                    term = mul(i, j - 1, {u: one}, _diff_column(C, j, v))
                    if i % 2:
                        term = {k: -p for k, p in term.items()}
                    rhs_vec = _vec_add(ring, rhs_vec, term)
                    rhs_coords = vec_to_coords(rhs_vec, n - 1, t)
                    if not basis_n:
                        if rhs_coords:
                            unsolvable.append(((i, j), (u, v)))
                        continue
                    rows_mat = strand_matrix(C, n, t, (), basis_n, basis_lo)
                    base = len(leibniz_rows)
                    for k in range(len(basis_lo)):
                        row = {}
                        for c, val in rows_mat[k].items():
                            var = var_index[((i, j), (u, v), c)]
                            row[var] = val
                        if row or k in rhs_coords:
                            leibniz_rows.append(row)
                            if k in rhs_coords:
                                leibniz_rhs[len(leibniz_rows) - 1] = rhs_coords[k]

        # associativity constraints that are linear at this stage
        assoc_rows: list = []
        assoc_rhs: dict = {}
        for a in range(1, n - 1):
            for b in range(1, n - a):
                c_deg = n - a - b
                if c_deg < 1:
                    continue
                if not (C.rank(a) and C.rank(b) and C.rank(c_deg)):
                    continue
                for x in range(C.rank(a)):
                    for y in range(C.rank(b)):
                        xy = mul(a, b, {x: one}, {y: one})
                        for z in range(C.rank(c_deg)):
                            t_total = (
                                C.degs(a)[x] + C.degs(b)[y] + C.degs(c_deg)[z]
                            )
                            rowmap: dict = {}
                            const: Vec = {}
                            # left: m_{a+b,c}(m_ab(x,y), z) - unknown block
                            for w, p in xy.items():
                                t_pair = C.degs(a + b)[w] + C.degs(c_deg)[z]
                                emit_unknown(
                                    rowmap, (a + b, c_deg), (w, z), t_pair,
                                    p, t_total, +1,
                                )
                            # right: m_{a,b+c}(x, m_bc(y,z))
                            yz = mul(b, c_deg, {y: one}, {z: one})
                            if a == 1:
                                const = mul(1, b + c_deg, {x: one}, yz)
                            else:
                                for w, p in yz.items():
                                    t_pair = C.degs(a)[x] + C.degs(b + c_deg)[w]
                                    emit_unknown(
                                        rowmap, (a, b + c_deg), (x, w), t_pair,
                                        p, t_total, -1,
                                    )
                            const_coords = vec_to_coords(const, n, t_total)
                            for k in set(rowmap) | set(const_coords):
                                row = rowmap.get(k, {})
                                if row or k in const_coords:
                                    assoc_rows.append(row)
                                    if k in const_coords:
                                        assoc_rhs[len(assoc_rows) - 1] = (
                                            const_coords[k]
                                        )

        sol = None
        assoc_enforced = False
        if nvars or leibniz_rows or assoc_rows:
            all_rows = leibniz_rows + assoc_rows
            all_rhs = dict(leibniz_rhs)
            for r, v in assoc_rhs.items():
                all_rhs[len(leibniz_rows) + r] = v
            sol = linalg.solve(all_rows, nvars, all_rhs, field_)
            if sol is not None:
                assoc_enforced = True
            else:
                sol = linalg.solve(leibniz_rows, nvars, leibniz_rhs, field_)
                if sol is None:
                    unsolvable.append(("stage", n))
        if sol is None:
            sol = {}
        # install solved tables
        per_block: dict = {}
        for var, val in sol.items():
            block, pair, c = var_meta[var]
            per_block.setdefault(block, {}).setdefault(pair, {})[c] = val
        for (i, j) in blocks:
            tab: dict = {}
            got = per_block.get((i, j), {})
            for u in range(C.rank(i)):
                for v in range(C.rank(j)):
                    coords = got.get((u, v))
                    if not coords:
                        continue
                    t = C.degs(i)[u] + C.degs(j)[v]
                    basis_n, _ = strand(n, t)
                    acc: dict = {}
                    for c, val in coords.items():
                        g, m = basis_n[c]
                        acc.setdefault(g, {})[m] = val
                    vec = {
                        g: Polynomial(ring, terms) for g, terms in acc.items()
                    }
                    vec = {g: p for g, p in vec.items() if not p.is_zero}
                    if vec:
                        tab[(u, v)] = vec
            known[(i, j)] = tab
        stages.append(
            ProbeStage(n, blocks, nvars, assoc_enforced, unsolvable)
        )

    report = ProbeReport(bound=bound, stages=stages)
    for a in range(1, bound - 1):
        for b in range(1, bound - a):
            for c_deg in range(1, bound - a - b + 1):
                for x in range(C.rank(a)):
                    for y in range(C.rank(b)):
                        xy = mul(a, b, {x: one}, {y: one})
                        for z in range(C.rank(c_deg)):
                            report.tested_triples += 1
                            left = mul(a + b, c_deg, xy, {z: one})
                            yz = mul(b, c_deg, {y: one}, {z: one})
                            right = mul(a, b + c_deg, {x: one}, yz)
                            res = _vec_add(
                                ring, left, {k: -p for k, p in right.items()}
                            )
                            if not _vec_is_zero(res):
                                report.residual_triples.append(
                                    ((a, b, c_deg), (x, y, z))
                                )
    return report
