"""Exact scalar arithmetic and sparse linear algebra over the rationals.

Everything downstream computes with these primitives: coefficients are
`fractions.Fraction` (never floats), deformation-parameter polynomials are
`HPoly`, and all rank/solve questions are answered by exact elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional

QQ = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class HPoly:
    """Polynomial in the formal deformation parameter, exact rational coefficients.

    Stored sparsely as {exponent: coefficient} with no zero coefficients.
    The parameter has grading degree 1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, Fraction]] = None):
        data = {}
        if coeffs:
            for k, c in coeffs.items():
                if k < 0:
                    raise ValueError("negative exponent in deformation polynomial")
                c = as_fraction(c)
                if c:
                    data[k] = c
        self.coeffs = data

    @classmethod
    def rational(cls, q) -> "HPoly":
        return cls({0: as_fraction(q)})

    @classmethod
    def hbar(cls, k: int = 1, coeff=1) -> "HPoly":
        return cls({k: as_fraction(coeff)})

    @classmethod
    def zero(cls) -> "HPoly":
        return cls()

    @classmethod
    def one(cls) -> "HPoly":
        return cls({0: ONE})

    def coeff(self, k: int) -> Fraction:
        return self.coeffs.get(k, ZERO)

    def constant_term(self) -> Fraction:
        """Value at hbar = 0."""
        return self.coeffs.get(0, ZERO)

    def degrees(self) -> set:
        return set(self.coeffs)

    def shift(self, k: int) -> "HPoly":
        """Multiply by hbar^k."""
        return HPoly({d + k: c for d, c in self.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, HPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == HPoly.rational(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other) -> "HPoly":
        other = _coerce_hpoly(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        res = HPoly.__new__(HPoly)
        res.coeffs = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "HPoly":
        res = HPoly.__new__(HPoly)
        res.coeffs = {k: -c for k, c in self.coeffs.items()}
        return res

    def __sub__(self, other) -> "HPoly":
        return self + (-_coerce_hpoly(other))

    def __rsub__(self, other) -> "HPoly":
        return _coerce_hpoly(other) + (-self)

    def __mul__(self, other) -> "HPoly":
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            if not q:
                return HPoly()
            res = HPoly.__new__(HPoly)
            res.coeffs = {k: c * q for k, c in self.coeffs.items()}
            return res
        if isinstance(other, HPoly):
            out = {}
            for k1, c1 in self.coeffs.items():
                for k2, c2 in other.coeffs.items():
                    k = k1 + k2
                    s = out.get(k, ZERO) + c1 * c2
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            res = HPoly.__new__(HPoly)
            res.coeffs = out
            return res
        return NotImplemented

    __rmul__ = __mul__

    def render(self) -> str:
        """Deterministic text form, e.g. ``1/2 + 3*hbar^2``."""
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                parts.append(str(c))
            else:
                power = "hbar" if k == 1 else f"hbar^{k}"
                if c == 1:
                    parts.append(power)
                elif c == -1:
                    parts.append(f"-{power}")
                else:
                    parts.append(f"{c}*{power}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"HPoly({self.render()})"


def _coerce_hpoly(value) -> HPoly:
    if isinstance(value, HPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return HPoly.rational(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to HPoly")


class SparseMatrix:
    """Sparse matrix over the rationals: {(row, col): nonzero Fraction}."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int,
                 entries: Optional[Mapping[tuple, Fraction]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    def __setitem__(self, key, value):
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"index {key} out of bounds")
        v = as_fraction(value)
        if v:
            self.entries[i, j] = v
        else:
            self.entries.pop((i, j), None)

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, ZERO)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        m = cls(len(rows), ncols)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                m[i, j] = v
        return m

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def row_dicts(self) -> list:
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def apply(self, vec: Mapping[int, Fraction]) -> dict:
        """Sparse matrix-vector product; vec maps column index to value."""
        out = {}
        for (i, j), v in self.entries.items():
            x = vec.get(j)
            if x:
                s = out.get(i, ZERO) + v * x
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def _scaled_integer_rows(rows: Iterable[Mapping[int, Fraction]]) -> list:
    """Clear denominators and strip common factors; drops empty rows."""
    out = []
    for row in rows:
        if not row:
            continue
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        ints = {j: int(v * denom) for j, v in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if g > 1:
            ints = {j: v // g for j, v in ints.items()}
        out.append(ints)
    return out


def _integer_row_rank(rows: list) -> int:
    """Exact rank of integer rows via sparse fraction-free elimination.

    Pivots are chosen to limit fill (fewest-entries column, then shortest
    row), with deterministic tie-breaking on indices.
    """
    rows = [dict(r) for r in rows if r]
    col_rows: dict = {}
    for rid, row in enumerate(rows):
        for j in row:
            col_rows.setdefault(j, set()).add(rid)
    rank = 0
    while col_rows:
        pc = min(col_rows, key=lambda c: (len(col_rows[c]), c))
        holders = col_rows[pc]
        pr = min(holders, key=lambda r: (len(rows[r]), r))
        pivot_row = rows[pr]
        p = pivot_row[pc]
        rank += 1
        for rid in list(holders):
            if rid == pr:
                continue
            row = rows[rid]
            q = row[pc]
            g = 0
            new_row = {}
            for j, v in row.items():
                w = v * p - pivot_row.get(j, 0) * q
                if w:
                    new_row[j] = w
                    g = gcd(g, w)
                else:
                    if j != pc:
                        col_rows[j].discard(rid)
            for j, v in pivot_row.items():
                if j not in row:
                    w = -v * q
                    new_row[j] = w
                    g = gcd(g, w)
                    col_rows.setdefault(j, set()).add(rid)
            if g > 1:
                new_row = {j: v // g for j, v in new_row.items()}
            rows[rid] = new_row
        for j in pivot_row:
            s = col_rows.get(j)
            if s is not None:
                s.discard(pr)
                if not s:
                    del col_rows[j]
        col_rows.pop(pc, None)
        rows[pr] = {}
    return rank


def rank(m: SparseMatrix) -> int:
    """Exact rank over the rationals."""
    return _integer_row_rank(_scaled_integer_rows(m.row_dicts()))


def rank_of_rows(rows: Iterable[Mapping[int, Fraction]]) -> int:
    """Rank of a collection of sparse rational row vectors."""
    return _integer_row_rank(_scaled_integer_rows(rows))


def solve(a: SparseMatrix, b: list) -> Optional[list]:
    """One exact solution of a*x = b, or None when inconsistent.

    Pivots scan columns left to right, taking the lowest remaining row with
    a nonzero entry, and free variables are set to zero, so repeated calls
    return identical solutions.
    """
    if len(b) != a.nrows:
        raise ValueError(f"dimension mismatch: matrix has {a.nrows} rows, "
                         f"vector has {len(b)}")
    rows = a.row_dicts()
    rhs = [as_fraction(v) for v in b]
    n = a.ncols
    pivots = []  # (col, row) in elimination order
    used = [False] * a.nrows
    for col in range(n):
        prow = None
        for i in range(a.nrows):
            if not used[i] and rows[i].get(col):
                prow = i
                break
        if prow is None:
            continue
        used[prow] = True
        pivots.append((col, prow))
        pval = rows[prow][col]
        for i in range(a.nrows):
            if i == prow or used[i]:
                continue
            f = rows[i].get(col)
            if not f:
                continue
            factor = f / pval
            ri = rows[i]
            for j, v in rows[prow].items():
                s = ri.get(j, ZERO) - factor * v
                if s:
                    ri[j] = s
                else:
                    ri.pop(j, None)
            rhs[i] -= factor * rhs[prow]
    for i in range(a.nrows):
        if not used[i] and rhs[i]:
            return None
    x = [ZERO] * n
    for col, prow in reversed(pivots):
        s = rhs[prow]
        row = rows[prow]
        for j, v in row.items():
            if j > col:
                s -= v * x[j]
        x[col] = s / row[col]
    return x


def kernel_basis(m: SparseMatrix) -> list:
    """Basis of the right kernel, built from the reduced row echelon form.

    Independent of the elimination used by :func:`rank`, so the two can
    cross-check each other.
    """
    rows = [r for r in m.row_dicts() if r]
    n = m.ncols
    pivots = {}  # col -> reduced row dict
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c in pivots:
                f = row[c]
                for j, v in pivots[c].items():
                    s = row.get(j, ZERO) - f * v
                    if s:
                        row[j] = s
                    else:
                        row.pop(j, None)
            else:
                lead = row[c]
                pivots[c] = {j: v / lead for j, v in row.items()}
                break
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2, row2 in pivots.items():
            if c2 == c:
                continue
            f = row2.get(c)
            if f:
                for j, v in prow.items():
                    s = row2.get(j, ZERO) - f * v
                    if s:
                        row2[j] = s
                    else:
                        row2.pop(j, None)
    basis = []
    for free in range(n):
        if free in pivots:
            continue
        vec = {free: ONE}
        for c, row in pivots.items():
            v = row.get(free)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def nullity(m: SparseMatrix) -> int:
    return len(kernel_basis(m))
