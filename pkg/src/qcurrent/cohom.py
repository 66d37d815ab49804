"""Lie-algebra cohomology, the cobar complex, their bicomplex, and the
constructive two-stage solver for the correction map.

All complexes are finite-dimensional here: the enveloping algebra enters
through its PBW filtration slice, which is closed under both the adjoint
action and the coproduct, so ranks and solves are exact with no truncation
error for data that fits in the slice.  Rank computations block-diagonalize
along Cartan weights whenever the module's Cartan action is diagonal.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from random import Random
from typing import Dict, List, Optional, Tuple

from .envelope import UElement, mono_coproduct_terms, normal_order
from .exactnum import ONE, ZERO, SparseMatrix, rank_of_rows, solve
from .liealg import LieAlgebraData
from .reports import Report, run_checks

Vector = Dict[int, Fraction]


class CocycleConditionError(ValueError):
    """A solver input violates one of its cocycle preconditions."""


class FiltrationError(ValueError):
    """No solution exists within the requested PBW filtration degree."""


# --- g-modules -----------------------------------------------------------------


class GModule:
    """Finite-dimensional g-module given by one action matrix per basis index.

    actions[x][col] = {row: coeff} describes x . b_col = sum coeff * b_row.
    """

    def __init__(self, g: LieAlgebraData, dim: int,
                 actions: List[Dict[int, Vector]], label: str = "module"):
        self.g = g
        self.dim = dim
        self.actions = actions
        self.label = label
        self._weights: Optional[List[tuple]] = self._diagonal_weights()

    def act(self, x: int, vec: Vector) -> Vector:
        out: Vector = {}
        cols = self.actions[x]
        for j, c in vec.items():
            for i, a in cols.get(j, {}).items():
                s = out.get(i, ZERO) + a * c
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def _diagonal_weights(self) -> Optional[List[tuple]]:
        g = self.g
        weights = [[ZERO] * g.rank for _ in range(self.dim)]
        for i in range(g.rank):
            cols = self.actions[g.cartan_index(i)]
            for j, col in cols.items():
                for row, c in col.items():
                    if row != j:
                        return None
                    weights[j][i] = c
        return [tuple(w) for w in weights]

    def weights(self) -> Optional[List[tuple]]:
        return self._weights

    def validate(self) -> None:
        """rho([x,y]) = rho(x)rho(y) - rho(y)rho(x) on all basis pairs."""
        g = self.g
        basis = [{k: ONE} for k in range(self.dim)]
        for a in range(g.dim):
            for b in range(g.dim):
                table = g.bracket_table.get((a, b), {})
                for k, vec in enumerate(basis):
                    lhs: Vector = {}
                    for z, c in table.items():
                        for i, v in self.act(z, vec).items():
                            s = lhs.get(i, ZERO) + c * v
                            if s:
                                lhs[i] = s
                            else:
                                lhs.pop(i, None)
                    rhs = self.act(a, self.act(b, vec))
                    for i, v in self.act(b, self.act(a, vec)).items():
                        s = rhs.get(i, ZERO) - v
                        if s:
                            rhs[i] = s
                        else:
                            rhs.pop(i, None)
                    if lhs != rhs:
                        raise ValueError(
                            f"not a g-module: pair ({g.names[a]}, {g.names[b]}) "
                            f"fails on basis vector {k} of {self.label}")


def trivial_module(g: LieAlgebraData, dim: int = 1) -> GModule:
    return GModule(g, dim, [dict() for _ in range(g.dim)], "trivial")


def adjoint_module(g: LieAlgebraData) -> GModule:
    actions = []
    for x in range(g.dim):
        cols: Dict[int, Vector] = {}
        for j in range(g.dim):
            col = g.bracket_table.get((x, j), {})
            if col:
                cols[j] = dict(col)
        actions.append(cols)
    return GModule(g, g.dim, actions, "adjoint")


def dual_module(m: GModule) -> GModule:
    """Contragredient action: rho*(x) = -rho(x)^T."""
    actions = []
    for x in range(m.g.dim):
        cols: Dict[int, Vector] = {}
        for j, col in m.actions[x].items():
            for i, c in col.items():
                cols.setdefault(i, {})[j] = -c
        actions.append(cols)
    return GModule(m.g, m.dim, actions, f"dual({m.label})")


def tensor_module(a: GModule, b: GModule) -> GModule:
    """rho(x) = rho_a(x) (x) 1 + 1 (x) rho_b(x) on the tensor product basis."""
    assert a.g is b.g
    dim = a.dim * b.dim
    actions = []
    for x in range(a.g.dim):
        cols: Dict[int, Vector] = {}
        ax, bx = a.actions[x], b.actions[x]
        for ja in range(a.dim):
            cola = ax.get(ja, {})
            for jb in range(b.dim):
                j = ja * b.dim + jb
                col: Vector = {}
                for ia, c in cola.items():
                    col[ia * b.dim + jb] = c
                for ib, c in bx.get(jb, {}).items():
                    k = ja * b.dim + ib
                    s = col.get(k, ZERO) + c
                    if s:
                        col[k] = s
                    else:
                        col.pop(k, None)
                if col:
                    cols[j] = col
        actions.append(cols)
    return GModule(a.g, dim, actions, f"{a.label} (x) {b.label}")


def u_slice_monomials(g: LieAlgebraData, bound: int) -> List[tuple]:
    """PBW monomials of length <= bound, in (length, lexicographic) order."""
    out: List[tuple] = []
    for length in range(bound + 1):
        out.extend(combinations_with_replacement(range(g.dim), length))
    return out


def u_slice_module(g: LieAlgebraData, bound: int) -> GModule:
    """The filtration slice of the enveloping algebra under the adjoint action."""
    monos = u_slice_monomials(g, bound)
    index = {m: k for k, m in enumerate(monos)}
    actions = []
    for x in range(g.dim):
        cols: Dict[int, Vector] = {}
        for j, mono in enumerate(monos):
            col: Vector = {}
            for m2, c in _ad_letter(g, x, mono).items():
                col[index[m2]] = c
            if col:
                cols[j] = col
        actions.append(cols)
    return GModule(g, len(monos), actions, f"U<= {bound}")


def _ad_letter(g: LieAlgebraData, x: int, mono: tuple) -> dict:
    """[x, mono] in PBW normal form; stays within the filtration slice."""
    cache = getattr(g, "_ad_cache", None)
    if cache is None:
        cache = {}
        g._ad_cache = cache
    key = (x, mono)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = dict(normal_order(g, (x,) + mono))
    for m2, c in normal_order(g, mono + (x,)).items():
        s = out.get(m2, ZERO) - c
        if s:
            out[m2] = s
        else:
            out.pop(m2, None)
    cache[key] = out
    return out


# --- Chevalley-Eilenberg complex -------------------------------------------------


class CEChain:
    """Alternating m-cochain valued in a GModule, stored on sorted tuples."""

    __slots__ = ("module", "m", "data")

    def __init__(self, module: GModule, m: int,
                 data: Optional[Dict[tuple, Vector]] = None):
        self.module = module
        self.m = m
        self.data = {}
        if data:
            for s, vec in data.items():
                vec = {k: v for k, v in vec.items() if v}
                if vec:
                    self.data[s] = vec

    def value(self, s: tuple) -> Vector:
        return self.data.get(s, {})

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        return isinstance(other, CEChain) and self.m == other.m and self.data == other.data

    def __sub__(self, other: "CEChain") -> "CEChain":
        out: Dict[tuple, Vector] = {s: dict(v) for s, v in self.data.items()}
        for s, vec in other.data.items():
            cur = out.setdefault(s, {})
            for k, v in vec.items():
                nv = cur.get(k, ZERO) - v
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
            if not cur:
                out.pop(s)
        return CEChain(self.module, self.m, out)


def _signed_insert(z: int, rest: tuple) -> Optional[Tuple[tuple, int]]:
    """Sort (z,) + rest (rest sorted); None when z repeats an entry."""
    if z in rest:
        return None
    pos = sum(1 for r in rest if r < z)
    return rest[:pos] + (z,) + rest[pos:], (-1) ** pos


def ce_differential(omega: CEChain, module: Optional[GModule] = None) -> CEChain:
    """The alternating-sum differential of Lie-algebra cohomology."""
    module = module or omega.module
    g = module.g
    m = omega.m
    out: Dict[tuple, Vector] = {}

    def add(s, vec, factor):
        if not vec:
            return
        cur = out.setdefault(s, {})
        for k, v in vec.items():
            nv = cur.get(k, ZERO) + factor * v
            if nv:
                cur[k] = nv
            else:
                cur.pop(k, None)
        if not cur:
            out.pop(s)

    for t in combinations(range(g.dim), m + 1):
        for i in range(m + 1):
            rest = t[:i] + t[i + 1:]
            vec = omega.value(rest)
            if vec:
                add(t, module.act(t[i], vec), (-1) ** i)
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                rest = tuple(x for k, x in enumerate(t) if k not in (i, j))
                sign_ij = (-1) ** (i + j)  # 0-based == 1-based (i+j)-2
                for z, c in g.bracket_table.get((t[i], t[j]), {}).items():
                    ins = _signed_insert(z, rest)
                    if ins is None:
                        continue
                    s, sgn = ins
                    add(t, omega.value(s), sign_ij * sgn * c)
    return CEChain(module, m + 1, out)


def random_ce_chain(module: GModule, m: int, rng: Random,
                    density: Fraction = Fraction(1, 3)) -> CEChain:
    g = module.g
    data: Dict[tuple, Vector] = {}
    for s in combinations(range(g.dim), m):
        vec: Vector = {}
        for k in range(module.dim):
            if rng.random() < density:
                c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if c:
                    vec[k] = c
        if vec:
            data[s] = vec
    return CEChain(module, m, data)


def _ce_matrix_rows(module: GModule, m: int):
    """Rows of the m-th differential, keyed by integer column ids
    (S-combination index * module dim + module coordinate)."""
    g = module.g
    s_index = {s: k for k, s in enumerate(combinations(range(g.dim), m))}
    mdim = module.dim
    rows = []
    row_tags = []
    for t in combinations(range(g.dim), m + 1):
        bracket_cols: List[Tuple[int, Fraction]] = []
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                rest = tuple(x for k, x in enumerate(t) if k not in (i, j))
                sign_ij = (-1) ** (i + j)
                for z, c in g.bracket_table.get((t[i], t[j]), {}).items():
                    ins = _signed_insert(z, rest)
                    if ins is None:
                        continue
                    s, sgn = ins
                    bracket_cols.append((s_index[s], sign_ij * sgn * c))
        action_cols: Dict[int, Dict[int, Fraction]] = {}
        for i in range(m + 1):
            rest = t[:i] + t[i + 1:]
            base = s_index[rest] * mdim
            sign = (-1) ** i
            for jcol, col in module.actions[t[i]].items():
                for irow, v in col.items():
                    tgt = action_cols.setdefault(irow, {})
                    key = base + jcol
                    nv = tgt.get(key, ZERO) + sign * v
                    if nv:
                        tgt[key] = nv
                    else:
                        tgt.pop(key, None)
        for kprime in range(mdim):
            row: Vector = dict(action_cols.get(kprime, {}))
            for sidx, c in bracket_cols:
                key = sidx * mdim + kprime
                nv = row.get(key, ZERO) + c
                if nv:
                    row[key] = nv
                else:
                    row.pop(key, None)
            if row:
                rows.append(row)
                row_tags.append((t, kprime))
    return rows, row_tags, s_index


def _blocked_rank(module: GModule, m: int, rows, row_tags, s_index) -> int:
    """Rank of the differential, split along Cartan-weight blocks when the
    module's Cartan action is diagonal."""
    weights = module.weights()
    if weights is None:
        return rank_of_rows(rows)
    g = module.g
    gw = g.weights
    mdim = module.dim
    col_weight: Dict[tuple, list] = {}
    for s, sidx in s_index.items():
        base = tuple(sum(ws) for ws in zip(*(gw[x] for x in s))) if s else (ZERO,) * g.rank
        for k in range(mdim):
            w = tuple(a - b for a, b in zip(weights[k], base))
            col_weight.setdefault(w, []).append(sidx * mdim + k)
    blocks: Dict[tuple, list] = {}
    col_maps: Dict[tuple, dict] = {
        w: {c: i for i, c in enumerate(cols)} for w, cols in col_weight.items()}
    for row, (t, kprime) in zip(rows, row_tags):
        base = tuple(sum(ws) for ws in zip(*(gw[x] for x in t)))
        w = tuple(a - b for a, b in zip(weights[kprime], base))
        cmap = col_maps.get(w)
        if cmap is None:
            raise AssertionError("differential row outside every weight block")
        blocks.setdefault(w, []).append({cmap[c]: v for c, v in row.items()})
    return sum(rank_of_rows(rs) for rs in blocks.values())


def ce_cohomology_dims(module: GModule, up_to: int) -> List[int]:
    """Exact dimensions of H^0 .. H^up_to via rank-nullity on the
    differential matrices."""
    g = module.g
    dims = []
    prev_rank = 0
    for m in range(up_to + 1):
        cm = comb(g.dim, m) * module.dim
        rows, tags, s_index = _ce_matrix_rows(module, m)
        r = _blocked_rank(module, m, rows, tags, s_index)
        dims.append(cm - r - prev_rank)
        prev_rank = r
    return dims


def whitehead_report(g: LieAlgebraData, bound: int = 2, jobs: int = 1) -> Report:
    """First and second cohomology vanish for the adjoint module and for
    dual(adjoint) (x) U-slice; invariants of the trivial module are 1-dim."""
    cache: Dict[str, List[int]] = {}

    def dims_of(name) -> List[int]:
        if name not in cache:
            if name == "adjoint":
                cache[name] = ce_cohomology_dims(adjoint_module(g), 2)
            else:
                mod = tensor_module(dual_module(adjoint_module(g)),
                                    u_slice_module(g, bound))
                cache[name] = ce_cohomology_dims(mod, 2)
        return cache[name]

    specs = [
        ("H0-trivial", "H^0(g, trivial) = 1",
         lambda: None if ce_cohomology_dims(trivial_module(g), 0)[0] == 1
         else "H^0(trivial) != 1"),
        ("H1-adjoint", "H^1(g, adjoint) = 0",
         lambda: None if dims_of("adjoint")[1] == 0
         else f"H^1 = {dims_of('adjoint')[1]}"),
        ("H2-adjoint", "H^2(g, adjoint) = 0",
         lambda: None if dims_of("adjoint")[2] == 0
         else f"H^2 = {dims_of('adjoint')[2]}"),
        ("H1-coefficient-module",
         f"H^1(g, dual(adjoint) (x) U<= {bound}) = 0",
         lambda: None if dims_of("big")[1] == 0 else f"H^1 = {dims_of('big')[1]}"),
        ("H2-coefficient-module",
         f"H^2(g, dual(adjoint) (x) U<= {bound}) = 0",
         lambda: None if dims_of("big")[2] == 0 else f"H^2 = {dims_of('big')[2]}"),
    ]
    return run_checks("whitehead", g.type_label(), specs, jobs=jobs)


# --- cobar complex of a symmetric coalgebra ---------------------------------------


def _sym_monomials(v_dim: int, degree: int) -> List[tuple]:
    """Exponent vectors of the given total degree, lexicographic order."""
    if v_dim == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for k in range(remaining + 1):
            rec(prefix + (k,), remaining - k, slots - 1)
    rec((), degree, v_dim)
    return out


def _sym_coproduct(mono: tuple) -> Dict[tuple, Fraction]:
    """Binomial splitting of a symmetric-algebra monomial."""
    keys = [((), ONE)]
    for a in mono:
        new = []
        for (prefix, c) in keys:
            for k in range(a + 1):
                new.append((prefix + ((k, a - k),), c * comb(a, k)))
        keys = new
    out: Dict[tuple, Fraction] = {}
    for prefix, c in keys:
        left = tuple(p[0] for p in prefix)
        right = tuple(p[1] for p in prefix)
        out[left, right] = out.get((left, right), ZERO) + c
    return out


class CobarChain:
    """Element of the n-fold tensor power of Sym(V) in one symmetric degree."""

    __slots__ = ("v_dim", "n", "degree", "data")

    def __init__(self, v_dim: int, n: int, degree: int,
                 data: Optional[Dict[tuple, Fraction]] = None):
        self.v_dim = v_dim
        self.n = n
        self.degree = degree
        self.data = {}
        if data:
            for k, c in data.items():
                if c:
                    self.data[k] = c

    def _accumulate(self, key, c):
        s = self.data.get(key, ZERO) + c
        if s:
            self.data[key] = s
        else:
            self.data.pop(key, None)

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        return (isinstance(other, CobarChain) and self.n == other.n
                and self.data == other.data)

    def __sub__(self, other):
        out = CobarChain(self.v_dim, self.n, self.degree, dict(self.data))
        for k, c in other.data.items():
            out._accumulate(k, -c)
        return out

    def __add__(self, other):
        out = CobarChain(self.v_dim, self.n, self.degree, dict(self.data))
        for k, c in other.data.items():
            out._accumulate(k, c)
        return out

    def scale(self, q):
        return CobarChain(self.v_dim, self.n, self.degree,
                          {k: c * q for k, c in self.data.items()})


def cobar_differential(y: CobarChain) -> CobarChain:
    """1 (x) y + alternating inner coproducts + (-1)^{n+1} y (x) 1."""
    n = y.n
    zero_mono = (0,) * y.v_dim
    out = CobarChain(y.v_dim, n + 1, y.degree)
    for key, c in y.data.items():
        out._accumulate((zero_mono,) + key, c)
        out._accumulate(key + (zero_mono,), c * ((-1) ** (n + 1)))
        for i in range(n):
            for (l, r), q in _sym_coproduct(key[i]).items():
                out._accumulate(key[:i] + (l, r) + key[i + 1:],
                                c * q * ((-1) ** (i + 1)))
    return out


def sigma_involution(y: CobarChain) -> CobarChain:
    """Reverse the tensor factors with the sign (-1)^{n(n+1)/2}."""
    sign = (-1) ** (y.n * (y.n + 1) // 2)
    out = CobarChain(y.v_dim, y.n, y.degree)
    for key, c in y.data.items():
        out._accumulate(tuple(reversed(key)), sign * c)
    return out


def sigma_split(y: CobarChain) -> Tuple[CobarChain, CobarChain]:
    """Eigenprojections (plus, minus) of the reversal involution."""
    s = sigma_involution(y)
    plus = (y + s).scale(Fraction(1, 2))
    minus = (y - s).scale(Fraction(1, 2))
    return plus, minus


def _tensor_basis(v_dim: int, n: int, degree: int) -> List[tuple]:
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            if remaining == 0:
                out.append(prefix)
            return
        for d in range(remaining + 1):
            for mono in _sym_monomials(v_dim, d):
                rec(prefix + (mono,), remaining - d, slots - 1)
    rec((), degree, n)
    return out


def _minus_basis(v_dim: int, n: int, degree: int) -> List[CobarChain]:
    """Basis of the minus eigenspace of the reversal involution."""
    sign = (-1) ** (n * (n + 1) // 2)
    seen = set()
    basis = []
    for key in _tensor_basis(v_dim, n, degree):
        rkey = tuple(reversed(key))
        if key == rkey:
            if sign == 1:
                continue  # sigma fixes it with +1: not in the minus part
            basis.append(CobarChain(v_dim, n, degree, {key: ONE}))
        else:
            pair = min(key, rkey)
            if pair in seen:
                continue
            seen.add(pair)
            basis.append(CobarChain(v_dim, n, degree,
                                    {key: ONE, rkey: -sign * ONE}))
    return basis


def minus_cohomology_dim(v_dim: int, n: int, degree: int) -> int:
    """dim H^n of the minus subcomplex of the cobar complex at one degree."""
    cur = _minus_basis(v_dim, n, degree)
    prev = _minus_basis(v_dim, n - 1, degree) if n >= 1 else []
    cur_index: Dict[tuple, int] = {}

    def flatten(chain: CobarChain, index: Dict[tuple, int]) -> Vector:
        row: Vector = {}
        for key, c in chain.data.items():
            row[index.setdefault(key, len(index))] = c
        return row

    up_index: Dict[tuple, int] = {}
    rank_out = rank_of_rows([flatten(cobar_differential(y), up_index) for y in cur])
    mid_index: Dict[tuple, int] = {}
    rank_in = rank_of_rows([flatten(cobar_differential(y), mid_index) for y in prev])
    return len(cur) - rank_out - rank_in


def solve_minus_coboundary(y: CobarChain) -> CobarChain:
    """Write a minus 2-cocycle as the differential of a 1-chain.

    Rejects inputs that are not in the minus eigenspace or not cocycles;
    this is the constructive face of the vanishing of H^2.
    """
    if y.n != 2:
        raise ValueError("expected a 2-chain")
    _, minus = sigma_split(y)
    if minus != y:
        raise CocycleConditionError("input is not in the minus eigenspace")
    if cobar_differential(y):
        raise CocycleConditionError("input is not a cocycle: delta(y) != 0")
    basis = _minus_basis(y.v_dim, 1, y.degree)
    col_index: Dict[tuple, int] = {}
    images = []
    for b in basis:
        images.append(cobar_differential(b))
        for key in images[-1].data:
            col_index.setdefault(key, len(col_index))
    for key in y.data:
        col_index.setdefault(key, len(col_index))
    mat = SparseMatrix(len(col_index), len(basis))
    for j, img in enumerate(images):
        for key, c in img.data.items():
            mat[col_index[key], j] = c
    rhs = [ZERO] * len(col_index)
    for key, c in y.data.items():
        rhs[col_index[key]] = c
    x = solve(mat, rhs)
    if x is None:
        raise FiltrationError("no preimage found; H^2 of the minus complex "
                              "should vanish, check the input degree")
    out = CobarChain(y.v_dim, 1, y.degree)
    for b, c in zip(basis, x):
        if c:
            for key, q in b.data.items():
                out._accumulate(key, c * q)
    return out


def cartier_check(v_dim: int, d_max: int, jobs: int = 1) -> Report:
    """H^2 of the minus cobar subcomplex vanishes in every symmetric degree
    up to d_max."""
    specs = []
    for d in range(d_max + 1):
        def chk(d=d):
            got = minus_cohomology_dim(v_dim, 2, d)
            return None if got == 0 else f"H^2 = {got} at degree {d}"
        specs.append((f"H2-minus-degree-{d}",
                      f"H^2(T_-(Sym(V)), delta) = 0 at symmetric degree {d}",
                      chk))
    return run_checks("cartier", f"V{v_dim}", specs, jobs=jobs)


# --- the bicomplex ---------------------------------------------------------------


class Cochain:
    """Element of Hom(Lambda^m g (x) g_ad, U^{(x) n}) within filtration D.

    data maps (sorted m-tuple, adjoint index) to a sparse tensor
    {(monomial, ..., monomial): Fraction} with total length <= D.
    """

    __slots__ = ("g", "m", "n", "bound", "data")

    def __init__(self, g: LieAlgebraData, m: int, n: int, bound: int,
                 data: Optional[dict] = None):
        self.g = g
        self.m = m
        self.n = n
        self.bound = bound
        self.data = {}
        if data:
            for key, tensor in data.items():
                tensor = {k: v for k, v in tensor.items() if v}
                if tensor:
                    for tkey in tensor:
                        if sum(len(mono) for mono in tkey) > bound:
                            raise FiltrationError(
                                f"cochain value exceeds filtration {bound}")
                    self.data[key] = tensor

    def value(self, s: tuple, v: int) -> dict:
        return self.data.get((s, v), {})

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and (self.m, self.n) == (other.m, other.n)
                and self.data == other.data)

    def _accumulate(self, key, tkey, c):
        tensor = self.data.setdefault(key, {})
        s = tensor.get(tkey, ZERO) + c
        if s:
            tensor[tkey] = s
        else:
            tensor.pop(tkey, None)
            if not tensor:
                self.data.pop(key, None)

    def __add__(self, other):
        assert (self.m, self.n) == (other.m, other.n)
        out = Cochain(self.g, self.m, self.n, max(self.bound, other.bound))
        out.data = {k: dict(t) for k, t in self.data.items()}
        for key, tensor in other.data.items():
            for tkey, c in tensor.items():
                out._accumulate(key, tkey, c)
        return out

    def __neg__(self):
        out = Cochain(self.g, self.m, self.n, self.bound)
        out.data = {k: {tk: -c for tk, c in t.items()} for k, t in self.data.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def swap_tensor(self) -> "Cochain":
        assert self.n == 2
        out = Cochain(self.g, self.m, self.n, self.bound)
        for key, tensor in self.data.items():
            for (a, b), c in tensor.items():
                out._accumulate(key, (b, a), c)
        return out

    def render(self) -> str:
        parts = []
        for (s, v) in sorted(self.data):
            names = ",".join(self.g.names[i] for i in s) or "-"
            tensor = self.data[s, v]
            terms = []
            for tkey in sorted(tensor):
                mono = " (x) ".join("*".join(self.g.names[i] for i in m) or "1"
                                    for m in tkey)
                terms.append(f"{tensor[tkey]}*[{mono}]")
            parts.append(f"({names}; {self.g.names[v]}) -> " + " + ".join(terms))
        return "; ".join(parts) if parts else "0"

    def to_json_dict(self) -> dict:
        """JSON-compatible nested map, deterministic ordering, names not
        indices, so fixtures stay readable and stable."""
        entries = []
        for (s, v) in sorted(self.data):
            tensor = self.data[s, v]
            entries.append({
                "args": [self.g.names[i] for i in s],
                "v": self.g.names[v],
                "tensor": [{"slots": [[self.g.names[i] for i in mono]
                                      for mono in tkey],
                            "coeff": str(tensor[tkey])}
                           for tkey in sorted(tensor)],
            })
        return {"m": self.m, "n": self.n, "bound": self.bound,
                "entries": entries}

    @classmethod
    def from_json_dict(cls, g: LieAlgebraData, payload: dict) -> "Cochain":
        out = cls(g, payload["m"], payload["n"], payload["bound"])
        for entry in payload["entries"]:
            s = tuple(g.name_to_index[n] for n in entry["args"])
            v = g.name_to_index[entry["v"]]
            for term in entry["tensor"]:
                tkey = tuple(tuple(g.name_to_index[n] for n in mono)
                             for mono in term["slots"])
                out._accumulate((s, v), tkey, Fraction(term["coeff"]))
        return out


def bicomplex_dh(w: Cochain) -> Cochain:
    """Horizontal differential: Chevalley-Eilenberg with the adjoint twist."""
    g = w.g
    m = w.m
    out = Cochain(g, m + 1, w.n, w.bound)
    for t in combinations(range(g.dim), m + 1):
        for v in range(g.dim):
            acc: dict = {}

            def add(tensor, factor):
                for tkey, c in tensor.items():
                    s = acc.get(tkey, ZERO) + factor * c
                    if s:
                        acc[tkey] = s
                    else:
                        acc.pop(tkey, None)

            for i in range(m + 1):
                rest = t[:i] + t[i + 1:]
                sign = (-1) ** i
                tensor = w.value(rest, v)
                if tensor:
                    add(_tensor_ad(g, t[i], tensor), sign)
                for z, c in g.bracket_table.get((t[i], v), {}).items():
                    tz = w.value(rest, z)
                    if tz:
                        add(tz, -sign * c)
            for i in range(m + 1):
                for j in range(i + 1, m + 1):
                    rest = tuple(x for k, x in enumerate(t) if k not in (i, j))
                    sign_ij = (-1) ** (i + j)
                    for z, c in g.bracket_table.get((t[i], t[j]), {}).items():
                        ins = _signed_insert(z, rest)
                        if ins is None:
                            continue
                        s, sgn = ins
                        tensor = w.value(s, v)
                        if tensor:
                            add(tensor, sign_ij * sgn * c)
            for tkey, c in acc.items():
                out._accumulate((t, v), tkey, c)
    return out


def _tensor_ad(g: LieAlgebraData, x: int, tensor: dict) -> dict:
    """Slotwise adjoint action of a Lie-algebra letter on a sparse tensor."""
    out: dict = {}
    for tkey, c in tensor.items():
        for slot in range(len(tkey)):
            for m2, q in _ad_letter(g, x, tkey[slot]).items():
                key = tkey[:slot] + (m2,) + tkey[slot + 1:]
                s = out.get(key, ZERO) + c * q
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return out


def _cobar_delta_tensor(g: LieAlgebraData, tensor: dict, n: int) -> dict:
    """The coalgebra differential applied to a sparse element of U^{(x) n}."""
    out: dict = {}

    def add(key, c):
        s = out.get(key, ZERO) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for tkey, c in tensor.items():
        add(((),) + tkey, c)
        add(tkey + ((),), c * ((-1) ** (n + 1)))
        for i in range(n):
            for (a, b), q in mono_coproduct_terms(g, tkey[i]).items():
                add(tkey[:i] + (a, b) + tkey[i + 1:], c * q * ((-1) ** (i + 1)))
    return out


def bicomplex_dv(w: Cochain) -> Cochain:
    """Vertical differential: the coalgebra differential on each value."""
    out = Cochain(w.g, w.m, w.n + 1, w.bound)
    for (s, v), tensor in w.data.items():
        for tkey, c in _cobar_delta_tensor(w.g, tensor, w.n).items():
            out._accumulate((s, v), tkey, c)
    return out


def tensor_slice_keys(g: LieAlgebraData, n: int, bound: int) -> List[tuple]:
    """All n-tuples of PBW monomials with total length <= bound."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(prefix)
            return
        for length in range(remaining + 1):
            for mono in combinations_with_replacement(range(g.dim), length):
                rec(prefix + (mono,), remaining - length, slots - 1)
    rec((), bound, n)
    return out


def random_cochain(g: LieAlgebraData, m: int, n: int, bound: int,
                   rng: Random, density: float = 0.25) -> Cochain:
    keys = tensor_slice_keys(g, n, bound)
    out = Cochain(g, m, n, bound)
    for s in combinations(range(g.dim), m):
        for v in range(g.dim):
            for tkey in keys:
                if rng.random() < density:
                    c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                    if c:
                        out._accumulate((s, v), tkey, c)
    return out


def bicomplex_report(g: LieAlgebraData, bound: int = 2, samples: int = 100,
                     seed: int = 0, jobs: int = 1) -> Report:
    """d_H^2 = d_V^2 = 0 and d_H d_V = d_V d_H on seeded random cochains at
    every bidegree (m, n) with m, n <= 2."""
    bidegrees = [(m, n) for m in range(3) for n in range(1, 3)]
    per = {bd: 0 for bd in bidegrees}
    rng = Random(seed)
    cochains = []
    for k in range(samples):
        bd = bidegrees[k % len(bidegrees)]
        per[bd] += 1
        cochains.append((bd, random_cochain(g, bd[0], bd[1], bound, rng)))
    specs = []
    for (m, n) in bidegrees:
        group = [w for bd, w in cochains if bd == (m, n)]

        def chk_hh(group=group):
            for idx, w in enumerate(group):
                if bicomplex_dh(bicomplex_dh(w)):
                    return f"sample {idx}: dH(dH(w)) != 0"
            return None
        specs.append((f"dh-squared-{m}{n}",
                      f"dH o dH = 0 at bidegree ({m},{n})", chk_hh))

        def chk_vv(group=group):
            for idx, w in enumerate(group):
                if bicomplex_dv(bicomplex_dv(w)):
                    return f"sample {idx}: dV(dV(w)) != 0"
            return None
        specs.append((f"dv-squared-{m}{n}",
                      f"dV o dV = 0 at bidegree ({m},{n})", chk_vv))

        def chk_comm(group=group):
            for idx, w in enumerate(group):
                if bicomplex_dv(bicomplex_dh(w)) - bicomplex_dh(bicomplex_dv(w)):
                    return f"sample {idx}: dH dV != dV dH"
            return None
        specs.append((f"dh-dv-commute-{m}{n}",
                      f"dH o dV = dV o dH at bidegree ({m},{n})", chk_comm))
    report = run_checks("bicomplex", g.type_label(), specs, jobs=jobs, seed=seed)
    return report


# --- the correction solver --------------------------------------------------------


def _k01_basis(g: LieAlgebraData, bound: int):
    monos = u_slice_monomials(g, bound)
    basis = [(v, mono) for v in range(g.dim) for mono in monos]
    return basis, {b: i for i, b in enumerate(basis)}


def _cochain01_from_coords(g, bound, coords: dict, basis) -> Cochain:
    out = Cochain(g, 0, 1, bound)
    for i, c in coords.items():
        v, mono = basis[i]
        if c:
            out._accumulate(((), v), (mono,), c)
    return out


def _flatten_cochain(w: Cochain, key_index: dict) -> dict:
    flat = {}
    for (s, v), tensor in w.data.items():
        for tkey, c in tensor.items():
            flat[key_index.setdefault((s, v, tkey), len(key_index))] = c
    return flat


def solve_correction(gamma: Cochain, eta: Cochain, bound: int,
                     fault: Optional[str] = None) -> Cochain:
    """Solve dH(phi) = gamma, dV(phi) = eta for phi in Hom(g_ad, U-slice).

    Stage one solves the horizontal equation; stage two corrects by a
    g-equivariant vertical preimage (equivariance imposed as the extra
    linear constraints dH(theta) = 0).  Both determinations use the
    deterministic pivot rule of the exact solver, and the returned cochain
    is re-substituted into both equations rather than trusted.

    `fault="noneq-theta"` adds a non-equivariant primitive-valued shift to
    theta after stage two; the re-substitution must then reject the result.
    """
    if (gamma.m, gamma.n) != (1, 1):
        raise ValueError("gamma must live at bidegree (1,1)")
    if (eta.m, eta.n) != (0, 2):
        raise ValueError("eta must live at bidegree (0,2)")
    g = gamma.g
    if bicomplex_dh(gamma):
        raise CocycleConditionError(
            "dH(gamma) != 0: gamma fails its cocycle equation "
            "(the bracket-compatibility identity)")
    if bicomplex_dv(eta):
        raise CocycleConditionError(
            "dV(eta) != 0: eta fails its coassociativity equation")
    if bicomplex_dv(gamma) - bicomplex_dh(eta):
        raise CocycleConditionError(
            "dV(gamma) != dH(eta): the mixed compatibility equation fails")
    if eta.swap_tensor() - eta:
        raise CocycleConditionError("eta != eta^21: eta must be symmetric")

    basis, _ = _k01_basis(g, bound)
    elems = [_cochain01_from_coords(g, bound, {i: ONE}, basis)
             for i in range(len(basis))]

    h_index: dict = {}
    h_cols = [_flatten_cochain(bicomplex_dh(e), h_index) for e in elems]
    gamma_flat = _flatten_cochain(gamma, h_index)
    mat_h = SparseMatrix(len(h_index), len(basis))
    for j, col in enumerate(h_cols):
        for i, c in col.items():
            mat_h[i, j] = c
    rhs = [ZERO] * len(h_index)
    for i, c in gamma_flat.items():
        rhs[i] = c
    psi_coords = solve(mat_h, rhs)
    if psi_coords is None:
        raise FiltrationError(
            f"no horizontal preimage within filtration degree {bound}; "
            "retry with a larger degree")
    psi = _cochain01_from_coords(
        g, bound, {i: c for i, c in enumerate(psi_coords) if c}, basis)

    eta1 = eta - bicomplex_dv(psi)
    if bicomplex_dh(eta1):
        raise CocycleConditionError("residual eta1 is not horizontally closed")
    if bicomplex_dv(eta1):
        raise CocycleConditionError("residual eta1 is not vertically closed")

    v_index: dict = {}
    v_cols = [_flatten_cochain(bicomplex_dv(e), v_index) for e in elems]
    eta1_flat = _flatten_cochain(eta1, v_index)
    n_v = len(v_index)
    n_h = len(h_index)
    stacked = SparseMatrix(n_v + n_h, len(basis))
    for j, col in enumerate(v_cols):
        for i, c in col.items():
            stacked[i, j] = c
    for j, col in enumerate(h_cols):
        for i, c in col.items():
            stacked[n_v + i, j] = c
    rhs2 = [ZERO] * (n_v + n_h)
    for i, c in eta1_flat.items():
        rhs2[i] = c
    theta_coords = solve(stacked, rhs2)
    if theta_coords is None:
        raise FiltrationError(
            f"no equivariant vertical preimage within filtration degree "
            f"{bound}; retry with a larger degree")
    theta = _cochain01_from_coords(
        g, bound, {i: c for i, c in enumerate(theta_coords) if c}, basis)

    if fault == "noneq-theta":
        shift = Cochain(g, 0, 1, bound)
        shift._accumulate(((), 0), ((g.cartan_index(0),),), ONE)
        theta = theta + shift

    phi = psi + theta
    bad_h = bicomplex_dh(phi) - gamma
    if bad_h:
        raise CocycleConditionError(
            "returned phi fails dH(phi) = gamma; residual: " + bad_h.render())
    bad_v = bicomplex_dv(phi) - eta
    if bad_v:
        raise CocycleConditionError(
            "returned phi fails dV(phi) = eta; residual: " + bad_v.render())
    return phi


def identity_shift_of(diff: Cochain) -> Optional[Fraction]:
    """The scalar lambda with diff = lambda * (v -> v), if one exists."""
    g = diff.g
    lam = None
    for v in range(g.dim):
        tensor = diff.value((), v)
        expected_key = ((v,),)
        for tkey, c in tensor.items():
            if tkey != expected_key:
                return None
        c = tensor.get(expected_key, ZERO)
        if lam is None:
            lam = c
        elif lam != c:
            return None
    return lam if lam is not None else ZERO


def solver_report(g: LieAlgebraData, bound: int = 2, runs: int = 20,
                  seed: int = 0, fault: Optional[str] = None,
                  jobs: int = 1) -> Report:
    """Round-trip the solver on seeded random data: gamma and eta are read
    off a random phi_0, and the solution must agree with phi_0 up to a
    rational multiple of the identity map."""
    rng = Random(seed)
    datasets = [random_cochain(g, 0, 1, bound, rng, density=0.6)
                for _ in range(runs)]
    specs = []

    def chk_zero():
        phi = solve_correction(Cochain(g, 1, 1, bound),
                               Cochain(g, 0, 2, bound), bound, fault=fault)
        return None if not phi else "expected the zero solution: " + phi.render()
    specs.append(("zero-data", "gamma = 0, eta = 0 -> phi = 0 under the "
                  "deterministic pivot rule", chk_zero))

    for k, phi0 in enumerate(datasets):
        def chk(phi0=phi0):
            gamma = bicomplex_dh(phi0)
            eta = bicomplex_dv(phi0)
            phi = solve_correction(gamma, eta, bound, fault=fault)
            lam = identity_shift_of(phi - phi0)
            if lam is None:
                return "phi - phi_0 is not a multiple of the identity: " \
                    + (phi - phi0).render()
            return None
        specs.append((f"roundtrip-{k}",
                      "solver output differs from phi_0 by lambda * id",
                      chk))

    def chk_model_lift():
        from .exactnum import HPoly
        from .freequant import lift_gamma_eta
        b_cochain = random_cochain(g, 0, 1, bound, rng, density=0.6)
        shift = {}
        for v in range(g.dim):
            shift[v] = UElement(g, {mono: HPoly.rational(c)
                                    for (mono,), c in b_cochain.value((), v).items()})
        gamma_map, eta_map = lift_gamma_eta(g, shift)
        gamma = Cochain(g, 1, 1, bound)
        for (a, b), val in gamma_map.items():
            for mono, c in val.hbar_coefficient(0).items():
                gamma._accumulate(((a,), b), (mono,), c)
        eta = Cochain(g, 0, 2, bound)
        for b, tensor in eta_map.items():
            for tkey, c in tensor.items():
                eta._accumulate(((), b), tkey, c)
        phi = solve_correction(gamma, eta, bound, fault=fault)
        lam = identity_shift_of(phi + b_cochain)
        if lam is None:
            return ("solver did not recover the model lift up to lambda * id: "
                    + (phi + b_cochain).render())
        return None
    specs.append(("model-lift",
                  "gamma, eta read off the lift J + hbar*I(B) are solved back "
                  "to -B up to lambda * id", chk_model_lift))
    return run_checks("solver", g.type_label(), specs, jobs=jobs, seed=seed)
