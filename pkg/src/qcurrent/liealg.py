"""Concrete simple Lie algebras of type A: root data, trace form, Casimir.

`build_sl(n)` realizes sl_n by matrix units: basis blocks are negative root
vectors, then Cartan elements t_i = E_ii - E_{i+1,i+1}, then positive root
vectors, each block ordered by root height then start index.  This total
order is the normal-ordering convention used for PBW monomials downstream.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exactnum import ONE, ZERO, as_fraction

NEGATIVE = "negative"
CARTAN = "cartan"
POSITIVE = "positive"


class RootDatum:
    """Bookkeeping for the root system of sl_n in the simple-root basis."""

    def __init__(self, n: int):
        self.n = n
        self.rank = n - 1
        self.index_set = list(range(1, n))
        # positive roots of type A_{n-1}: alpha_i + ... + alpha_{j-1} for i < j,
        # ordered by height then start index
        self.positive_roots: List[Tuple[int, ...]] = []
        self.root_spans: List[Tuple[int, int]] = []
        for height in range(1, n):
            for i in range(1, n - height + 1):
                j = i + height
                vec = tuple(1 if i <= k < j else 0 for k in range(1, n))
                self.positive_roots.append(vec)
                self.root_spans.append((i, j))
        self.cartan_matrix = [
            [2 if i == j else (-1 if abs(i - j) == 1 else 0)
             for j in range(self.rank)]
            for i in range(self.rank)
        ]

    def root_name(self, k: int) -> str:
        i, j = self.root_spans[k]
        return "".join(str(s) for s in range(i, j))


class LieElement:
    """Sparse vector in the Lie algebra: {basis index: Fraction}."""

    __slots__ = ("alg", "data")

    def __init__(self, alg: "LieAlgebraData", data: Optional[Dict[int, Fraction]] = None):
        self.alg = alg
        self.data = {}
        if data:
            for i, c in data.items():
                c = as_fraction(c)
                if c:
                    self.data[i] = c

    def __add__(self, other: "LieElement") -> "LieElement":
        assert self.alg is other.alg
        out = dict(self.data)
        for i, c in other.data.items():
            s = out.get(i, ZERO) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        res = LieElement(self.alg)
        res.data = out
        return res

    def __neg__(self) -> "LieElement":
        res = LieElement(self.alg)
        res.data = {i: -c for i, c in self.data.items()}
        return res

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, scalar) -> "LieElement":
        q = as_fraction(scalar)
        res = LieElement(self.alg)
        if q:
            res.data = {i: c * q for i, c in self.data.items()}
        return res

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.data == other.data

    def __bool__(self) -> bool:
        return bool(self.data)

    def __repr__(self):
        if not self.data:
            return "0"
        parts = [f"{c}*{self.alg.names[i]}" for i, c in sorted(self.data.items())]
        return " + ".join(parts)


class LieAlgebraData:
    """sl_n with precomputed structure constants, Gram matrix and Casimir pairs.

    Immutable after construction; holds the memo caches used by the PBW
    straightening engine so repeated normal-ordering is shared.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("sl_n needs n >= 2")
        self.n = n
        self.root_datum = RootDatum(n)
        r = self.root_datum.rank
        p = len(self.root_datum.positive_roots)
        self.rank = r
        self.dim = 2 * p + r
        self.num_positive = p

        # basis layout: negatives [0, p), cartan [p, p+r), positives [p+r, dim)
        self.neg_index = lambda k: k
        self.cartan_index = lambda i: p + i
        self.pos_index = lambda k: p + r + k

        self.block: List[str] = ([NEGATIVE] * p) + ([CARTAN] * r) + ([POSITIVE] * p)
        self.root_of: List[Optional[int]] = (
            list(range(p)) + [None] * r + list(range(p))
        )

        self.names: List[str] = (
            [f"f{self.root_datum.root_name(k)}" for k in range(p)]
            + [f"t{i + 1}" for i in range(r)]
            + [f"e{self.root_datum.root_name(k)}" for k in range(p)]
        )
        self.name_to_index: Dict[str, int] = {nm: i for i, nm in enumerate(self.names)}
        if n == 2:
            self.name_to_index.update({"f": 0, "h": 1, "e": 2})
            self.names = ["f", "h", "e"]

        mats = [self._basis_matrix(b) for b in range(self.dim)]
        self.bracket_table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for a in range(self.dim):
            for b in range(self.dim):
                if a == b:
                    continue
                comm = _mat_sub(_mat_mul(mats[a], mats[b], n), _mat_mul(mats[b], mats[a], n))
                coeffs = self._matrix_to_coords(comm)
                if coeffs:
                    self.bracket_table[a, b] = coeffs

        self.gram: Dict[Tuple[int, int], Fraction] = {}
        for a in range(self.dim):
            for b in range(a, self.dim):
                v = _mat_trace(_mat_mul(mats[a], mats[b], n), n)
                if v:
                    self.gram[a, b] = v
                    self.gram[b, a] = v

        # weight of each basis vector under ad(t_1..t_r)
        self.weights: List[Tuple[Fraction, ...]] = []
        for b in range(self.dim):
            w = []
            for i in range(r):
                br = self.bracket_table.get((self.cartan_index(i), b), {})
                w.append(br.get(b, ZERO))
            self.weights.append(tuple(w))

        # Casimir tensor as pure-tensor pairs (a, b, weight): dual bases of
        # the trace form; (e_alpha, f_alpha) = 1 pairs off-diagonal, the
        # Cartan block is the inverse Gram matrix of the t_i
        self.casimir_pairs: List[Tuple[int, int, Fraction]] = []
        for k in range(p):
            self.casimir_pairs.append((self.pos_index(k), self.neg_index(k), ONE))
            self.casimir_pairs.append((self.neg_index(k), self.pos_index(k), ONE))
        cart_gram = [[self.gram.get((self.cartan_index(i), self.cartan_index(j)), ZERO)
                      for j in range(r)] for i in range(r)]
        inv = _invert_dense(cart_gram)
        for i in range(r):
            for j in range(r):
                if inv[i][j]:
                    self.casimir_pairs.append(
                        (self.cartan_index(i), self.cartan_index(j), inv[i][j]))

        # memo caches shared by the enveloping-algebra layer
        self._pbw_cache: Dict[tuple, dict] = {}
        self._coproduct_cache: Dict[tuple, dict] = {}
        self._fm_cache: Dict[tuple, dict] = {}
        self._fm_push_cache: Dict[tuple, dict] = {}
        self._fm_coproduct_cache: Dict[tuple, dict] = {}
        self._casimir_eigenvalue: Optional[Fraction] = None
        self._current_envelope = None

    # --- matrix-unit realization -------------------------------------------------

    def _basis_matrix(self, b: int) -> Dict[Tuple[int, int], Fraction]:
        p = self.num_positive
        if self.block[b] == NEGATIVE:
            i, j = self.root_datum.root_spans[self.root_of[b]]
            return {(j - 1, i - 1): ONE}
        if self.block[b] == POSITIVE:
            i, j = self.root_datum.root_spans[self.root_of[b]]
            return {(i - 1, j - 1): ONE}
        i = b - p  # cartan t_{i+1} = E_ii - E_{i+1,i+1}
        return {(i, i): ONE, (i + 1, i + 1): -ONE}

    def _matrix_to_coords(self, m: Dict[Tuple[int, int], Fraction]) -> Dict[int, Fraction]:
        """Expand a traceless matrix in the chosen basis."""
        out = {}
        span_to_root = {sp: k for k, sp in enumerate(self.root_datum.root_spans)}
        for (a, b), v in m.items():
            if a == b:
                continue
            if a < b:
                out[self.pos_index(span_to_root[a + 1, b + 1])] = v
            else:
                out[self.neg_index(span_to_root[b + 1, a + 1])] = v
        running = ZERO
        for k in range(self.n - 1):
            running += m.get((k, k), ZERO)
            if running:
                out[self.cartan_index(k)] = running
        return out

    # --- public operations ----------------------------------------------------

    def basis_element(self, i: int) -> LieElement:
        return LieElement(self, {i: ONE})

    def element_by_name(self, name: str) -> LieElement:
        return self.basis_element(self.name_to_index[name])

    def cartan_generator(self, i: int) -> LieElement:
        """t_{i+1} for i in 0..rank-1."""
        return self.basis_element(self.cartan_index(i))

    def simple_pos_index(self, i: int) -> int:
        return self.pos_index(i)

    def simple_neg_index(self, i: int) -> int:
        return self.neg_index(i)

    def bracket_indices(self, a: int, b: int) -> Dict[int, Fraction]:
        return self.bracket_table.get((a, b), {})

    # letter-algebra protocol used by the PBW straightening engine
    def pbw_bracket(self, a: int, b: int) -> Dict[int, Fraction]:
        return self.bracket_table.get((a, b), {})

    def pbw_letter_name(self, i: int) -> str:
        return self.names[i]

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        assert x.alg is self and y.alg is self
        out: Dict[int, Fraction] = {}
        for a, ca in x.data.items():
            for b, cb in y.data.items():
                for z, cz in self.bracket_table.get((a, b), {}).items():
                    s = out.get(z, ZERO) + ca * cb * cz
                    if s:
                        out[z] = s
                    else:
                        out.pop(z, None)
        res = LieElement(self)
        res.data = out
        return res

    def form(self, x: LieElement, y: LieElement) -> Fraction:
        assert x.alg is self and y.alg is self
        total = ZERO
        for a, ca in x.data.items():
            for b, cb in y.data.items():
                g = self.gram.get((a, b))
                if g:
                    total += ca * cb * g
        return total

    def is_cartan(self, x: LieElement) -> bool:
        return all(self.block[i] == CARTAN for i in x.data)

    def root_value(self, root_k: int, h: LieElement) -> Fraction:
        """alpha(h) for the k-th positive root and h in the Cartan span."""
        e_idx = self.pos_index(root_k)
        total = ZERO
        for b, c in h.data.items():
            if self.block[b] != CARTAN:
                raise ValueError("root evaluation needs a Cartan element")
            total += c * self.weights[e_idx][b - self.num_positive]
        return total

    def simple_root_value(self, i: int, h: LieElement) -> Fraction:
        """alpha_i(h), i in 0..rank-1 (simple roots come first in the root list)."""
        return self.root_value(i, h)

    def simple_root_norm(self, i: int) -> Fraction:
        """(alpha_i, alpha_i) = alpha_i(t_i) in the trace-form normalization."""
        return self.root_value(i, self.cartan_generator(i))

    def type_label(self) -> str:
        return f"A{self.n - 1}"

    def __repr__(self):
        return f"LieAlgebraData(sl_{self.n})"


def build_sl(n: int) -> LieAlgebraData:
    """Construct sl_n (n >= 2) with all structure tables precomputed."""
    return LieAlgebraData(n)


def casimir_adjoint_eigenvalue(g: LieAlgebraData) -> Fraction:
    """Eigenvalue of the quadratic Casimir acting in the adjoint representation.

    Applies the Casimir to every basis vector by iterated brackets and
    insists the action is scalar; a non-scalar action signals a broken
    bracket table or bilinear form.
    """
    if g._casimir_eigenvalue is not None:
        return g._casimir_eigenvalue
    value: Optional[Fraction] = None
    for b in range(g.dim):
        x = g.basis_element(b)
        acc = LieElement(g)
        for (i, j, w) in g.casimir_pairs:
            acc = acc + w * g.bracket(g.basis_element(i),
                                      g.bracket(g.basis_element(j), x))
        expected = acc.data.get(b, ZERO)
        if acc.data != ({b: expected} if expected else {}):
            raise ValueError("Casimir does not act diagonally on the adjoint basis")
        if value is None:
            value = expected
        elif value != expected:
            raise ValueError("Casimir action on the adjoint is not scalar")
    g._casimir_eigenvalue = value
    return value


# --- small dense helpers (matrix-unit realization only) ---------------------------


def _mat_mul(a, b, n):
    out: Dict[Tuple[int, int], Fraction] = {}
    items_b: Dict[int, list] = {}
    for (i, j), v in b.items():
        items_b.setdefault(i, []).append((j, v))
    for (i, k), va in a.items():
        for j, vb in items_b.get(k, ()):  # (i,k)*(k,j)
            s = out.get((i, j), ZERO) + va * vb
            if s:
                out[i, j] = s
            else:
                out.pop((i, j), None)
    return out


def _mat_sub(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, ZERO) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _mat_trace(a, n):
    return sum((a.get((i, i), ZERO) for i in range(n)), ZERO)


def _invert_dense(m):
    """Exact inverse of a small dense rational matrix by Gauss-Jordan."""
    r = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(r)]
           for i, row in enumerate(m)]
    for col in range(r):
        piv = next(i for i in range(col, r) if aug[i][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for i in range(r):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
    return [row[r:] for row in aug]
