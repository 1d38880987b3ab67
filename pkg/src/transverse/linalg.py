"""Exact sparse Gaussian elimination over the rationals and prime fields.

Rows are sparse dicts ``{column: scalar}``.  The rational path clears
denominators and runs fraction-free integer elimination with gcd
normalization, so the hot loop never touches ``Fraction``; unit pivots are
restored only when the reduced echelon form is assembled.  Pivot columns
are always the leading (smallest) columns, which makes every output the
unique RREF of the row space — canonical and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .fields import FpElement, PrimeField, QQ


@dataclass
class EchelonForm:
    """Reduced row echelon form: unit pivots, pivot columns ascending."""

    ncols: int
    pivots: list[int]
    rows: list[dict]  # rows[k][pivots[k]] == 1, fully reduced
    field: object

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        """Subtract the projection of ``vec`` onto the row space."""
        v = dict(vec)
        for p, row in zip(self.pivots, self.rows):
            c = v.get(p)
            if not c:
                continue
            for col, val in row.items():
                s = v.get(col, 0) - c * val
                if s:
                    v[col] = s
                else:
                    v.pop(col, None)
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def _int_row(row: dict) -> dict[int, int]:
    """Clear denominators and divide by the content."""
    if not row:
        return {}
    denom = 1
    for v in row.values():
        if isinstance(v, Fraction):
            denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = {c: int(v * denom) if isinstance(v, Fraction) else v * denom
            for c, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return {c: v for c, v in ints.items() if v}


def _axpy_int(a: int, row: dict, b: int, piv: dict) -> dict:
    """a*row - b*piv over the integers, then divide by the content."""
    out = dict()
    for c, v in row.items():
        out[c] = a * v
    for c, v in piv.items():
        s = out.get(c, 0) - b * v
        if s:
            out[c] = s
        else:
            out.pop(c, None)
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _forward_rational(rows) -> dict[int, dict]:
    pivrows: dict[int, dict] = {}
    for raw in rows:
        row = _int_row(raw)
        while row:
            c = min(row)
            piv = pivrows.get(c)
            if piv is None:
                pivrows[c] = row
                break
            row = _axpy_int(piv[c], row, row[c], piv)
    return pivrows


def _forward_prime(rows, p: int) -> dict[int, dict]:
    pivrows: dict[int, dict] = {}
    for raw in rows:
        row = {}
        for c, v in raw.items():
            iv = (v.value if isinstance(v, FpElement) else int(v)) % p
            if iv:
                row[c] = iv
        while row:
            c = min(row)
            piv = pivrows.get(c)
            if piv is None:
                inv = pow(row[c], p - 2, p)
                pivrows[c] = {k: (v * inv) % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                s = (row.get(k, 0) - f * v) % p
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return pivrows


def rank(rows, field=QQ) -> int:
    """Rank via forward elimination only."""
    if isinstance(field, PrimeField):
        return len(_forward_prime(rows, field.p))
    return len(_forward_rational(rows))


def echelon(rows, ncols: int, field=QQ) -> EchelonForm:
    """The unique RREF of the span of ``rows``."""
    if isinstance(field, PrimeField):
        p = field.p
        pivrows = _forward_prime(rows, p)
        pivots = sorted(pivrows)
        # back-reduce, descending pivot order
        for pc in reversed(pivots):
            row = pivrows[pc]
            for qc in sorted(k for k in row if k != pc and k in pivrows):
                f = row[qc]
                if not f:
                    continue
                for k, v in pivrows[qc].items():
                    s = (row.get(k, 0) - f * v) % p
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        out = [
            {c: FpElement(v, p) for c, v in pivrows[pc].items()} for pc in pivots
        ]
        return EchelonForm(ncols, pivots, out, field)

    pivrows = _forward_rational(rows)
    pivots = sorted(pivrows)
    for pc in reversed(pivots):
        row = pivrows[pc]
        for qc in sorted(k for k in row if k != pc and k in pivrows):
            if row.get(qc):
                row = _axpy_int(pivrows[qc][qc], row, row[qc], pivrows[qc])
        pivrows[pc] = row
    out = []
    for pc in pivots:
        row = pivrows[pc]
        lead = row[pc]
        out.append({c: Fraction(v, lead) for c, v in row.items()})
    return EchelonForm(ncols, pivots, out, field)


def kernel_basis(rows, ncols: int, field=QQ) -> list[dict]:
    """Canonical basis of the null space of the matrix whose rows are given.

    The standard free-column vectors are re-echelonized so the result is the
    RREF basis of the kernel.
    """
    ech = echelon(rows, ncols, field)
    pivset = set(ech.pivots)
    free = [c for c in range(ncols) if c not in pivset]
    one = field.one
    vecs = []
    for f in free:
        v = {f: one}
        for p, row in zip(ech.pivots, ech.rows):
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    if not vecs:
        return []
    canon = echelon(vecs, ncols, field)
    return canon.rows


def solve(rows, ncols: int, rhs: dict, field=QQ):
    """A particular solution of ``A x = rhs`` (rows of A given), or None.

    Free variables are set to zero; with leading-column pivoting this is the
    echelon-canonical solution.
    """
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        b = rhs.get(i)
        if b:
            r[ncols] = b
        aug.append(r)
    ech = echelon(aug, ncols + 1, field)
    if ncols in ech.pivots:
        return None
    sol = {}
    for p, row in zip(ech.pivots, ech.rows):
        v = row.get(ncols)
        if v:
            sol[p] = v
    return sol


def rows_from_columns(cols: list[dict], nrows: int) -> list[dict]:
    """Transpose a list of sparse column vectors into sparse rows."""
    rows: list[dict] = [dict() for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows[i][j] = v
    return rows


def image_basis(rows, nrows: int, ncols: int, field=QQ) -> list[dict]:
    """Canonical (RREF) basis of the column space."""
    cols: list[dict] = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return echelon(cols, nrows, field).rows


def scalar_rank(rows, nrows: int, ncols: int, field=QQ):
    """Rank together with canonical kernel and image bases."""
    kern = kernel_basis(rows, ncols, field)
    return ncols - len(kern), kern, image_basis(rows, nrows, ncols, field)
