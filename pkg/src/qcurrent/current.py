"""The graded current Lie algebra g[u], its cobracket, and the degree-0/1
presentation checks.

Current elements are sparse maps (basis index, u-degree) -> Fraction.  The
cobracket is built directly from the Casimir pairs and lowers degree by one:
every output bidegree of delta(x u^n) sums to n - 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

from .exactnum import ONE, ZERO, as_fraction, rank_of_rows
from .liealg import LieAlgebraData, LieElement
from .reports import Report, run_checks, zero_or_residual

CurrentKey = Tuple[int, int]  # (basis index, u-degree)


class CurrentElement:
    """Sparse element of g[u]: {(basis index, u-degree): Fraction}."""

    __slots__ = ("alg", "data")

    def __init__(self, alg: LieAlgebraData,
                 data: Optional[Dict[CurrentKey, Fraction]] = None):
        self.alg = alg
        self.data = {}
        if data:
            for k, c in data.items():
                c = as_fraction(c)
                if c:
                    self.data[k] = c

    @classmethod
    def generator(cls, alg: LieAlgebraData, basis: int, degree: int) -> "CurrentElement":
        return cls(alg, {(basis, degree): ONE})

    @classmethod
    def from_lie(cls, x: LieElement, degree: int) -> "CurrentElement":
        return cls(x.alg, {(i, degree): c for i, c in x.data.items()})

    def __add__(self, other: "CurrentElement") -> "CurrentElement":
        assert self.alg is other.alg
        out = dict(self.data)
        for k, c in other.data.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        res = CurrentElement(self.alg)
        res.data = out
        return res

    def __neg__(self) -> "CurrentElement":
        res = CurrentElement(self.alg)
        res.data = {k: -c for k, c in self.data.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "CurrentElement":
        q = as_fraction(scalar)
        res = CurrentElement(self.alg)
        if q:
            res.data = {k: c * q for k, c in self.data.items()}
        return res

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        return isinstance(other, CurrentElement) and self.data == other.data

    def render(self) -> str:
        if not self.data:
            return "0"
        parts = []
        for (b, n) in sorted(self.data, key=lambda k: (k[1], k[0])):
            c = self.data[b, n]
            name = f"{self.alg.names[b]}*u^{n}"
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return self.render()


class CurrentTensor:
    """Element of (g x ... x g)[u_1, ..., u_n], sparse over tuples of
    (basis index, degree) pairs."""

    __slots__ = ("alg", "arity", "data")

    def __init__(self, alg: LieAlgebraData, arity: int = 2,
                 data: Optional[Dict[tuple, Fraction]] = None):
        self.alg = alg
        self.arity = arity
        self.data = {}
        if data:
            for k, c in data.items():
                c = as_fraction(c)
                if c:
                    self.data[k] = c

    def _accumulate(self, key, c: Fraction):
        s = self.data.get(key, ZERO) + c
        if s:
            self.data[key] = s
        else:
            self.data.pop(key, None)

    def __add__(self, other: "CurrentTensor") -> "CurrentTensor":
        assert self.alg is other.alg and self.arity == other.arity
        out = CurrentTensor(self.alg, self.arity)
        out.data = dict(self.data)
        for k, c in other.data.items():
            out._accumulate(k, c)
        return out

    def __neg__(self):
        out = CurrentTensor(self.alg, self.arity)
        out.data = {k: -c for k, c in self.data.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        q = as_fraction(scalar)
        out = CurrentTensor(self.alg, self.arity)
        if q:
            out.data = {k: c * q for k, c in self.data.items()}
        return out

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        return (isinstance(other, CurrentTensor) and self.arity == other.arity
                and self.data == other.data)

    def permute(self, perm: tuple) -> "CurrentTensor":
        out = CurrentTensor(self.alg, self.arity)
        for key, c in self.data.items():
            out._accumulate(tuple(key[perm[k]] for k in range(self.arity)), c)
        return out

    def swap(self) -> "CurrentTensor":
        assert self.arity == 2
        return self.permute((1, 0))

    def render(self) -> str:
        if not self.data:
            return "0"
        parts = []
        for key in sorted(self.data):
            c = self.data[key]
            text = " (x) ".join(f"{self.alg.names[b]}*u^{n}" for b, n in key)
            if c == 1:
                parts.append(text)
            elif c == -1:
                parts.append(f"-{text}")
            else:
                parts.append(f"{c}*{text}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return self.render()


def c_bracket(f: CurrentElement, g: CurrentElement) -> CurrentElement:
    """[x u^n, y u^m] = [x, y] u^{n+m}, extended bilinearly."""
    alg = f.alg
    assert g.alg is alg
    out = CurrentElement(alg)
    acc = out.data
    for (a, n), ca in f.data.items():
        for (b, m), cb in g.data.items():
            for z, cz in alg.bracket_table.get((a, b), {}).items():
                key = (z, n + m)
                s = acc.get(key, ZERO) + ca * cb * cz
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return out


def _omega_pairs(alg: LieAlgebraData, fault: Optional[str]):
    if fault == "omega":
        # flip the sign of one root pair: the tensor stays symmetric but is
        # no longer invariant, so the cocycle identity must break
        pairs = list(alg.casimir_pairs)
        pairs[0] = (pairs[0][0], pairs[0][1], -pairs[0][2])
        pairs[1] = (pairs[1][0], pairs[1][1], -pairs[1][2])
        return pairs
    return alg.casimir_pairs


def cobracket(f: CurrentElement, fault: Optional[str] = None) -> CurrentTensor:
    """delta(x u^n) = sum over a+b = n-1 of [x (x) 1, Omega] u^a v^b."""
    alg = f.alg
    out = CurrentTensor(alg, 2)
    pairs = _omega_pairs(alg, fault)
    for (x, n), cx in f.data.items():
        if n == 0:
            continue
        for (p, q, w) in pairs:
            for z, cz in alg.bracket_table.get((x, p), {}).items():
                c = cx * w * cz
                for a in range(n):
                    out._accumulate(((z, a), (q, n - 1 - a)), c)
    return out


def cobracket_slot(t: CurrentTensor, slot: int,
                   fault: Optional[str] = None) -> CurrentTensor:
    """Apply the cobracket to one tensor slot, raising arity by one."""
    alg = t.alg
    out = CurrentTensor(alg, t.arity + 1)
    pairs = _omega_pairs(alg, fault)
    for key, c in t.data.items():
        x, n = key[slot]
        if n == 0:
            continue
        for (p, q, w) in pairs:
            for z, cz in alg.bracket_table.get((x, p), {}).items():
                coeff = c * w * cz
                for a in range(n):
                    new_key = key[:slot] + ((z, a), (q, n - 1 - a)) + key[slot + 1:]
                    out._accumulate(new_key, coeff)
    return out


def adjoint_coaction_bracket(t: CurrentTensor, w: CurrentElement) -> CurrentTensor:
    """[t, w(u) (x) 1 + 1 (x) w(v)]: the two-variable adjoint action on a
    2-tensor, acting in each slot with that slot's variable."""
    alg = t.alg
    out = CurrentTensor(alg, 2)
    for ((x1, a), (x2, b)), c in t.data.items():
        for (y, m), cy in w.data.items():
            for z, cz in alg.bracket_table.get((x1, y), {}).items():
                out._accumulate(((z, a + m), (x2, b)), c * cy * cz)
            for z, cz in alg.bracket_table.get((x2, y), {}).items():
                out._accumulate(((x1, a), (z, b + m)), c * cy * cz)
    return out


def cleared_cobracket_identity(f: CurrentElement,
                               fault: Optional[str] = None) -> CurrentTensor:
    """(u - v)*delta(f) - [f(u) (x) 1 + 1 (x) f(v), Omega], which must vanish.

    This is the denominator-cleared form of the closed cobracket formula and
    cross-checks the summation form degree by degree.
    """
    alg = f.alg
    delta = cobracket(f, fault=fault)
    out = CurrentTensor(alg, 2)
    for ((x1, a), (x2, b)), c in delta.data.items():
        out._accumulate(((x1, a + 1), (x2, b)), c)
        out._accumulate(((x1, a), (x2, b + 1)), -c)
    pairs = _omega_pairs(alg, fault)
    for (x, n), cx in f.data.items():
        for (p, q, w) in pairs:
            for z, cz in alg.bracket_table.get((x, p), {}).items():
                out._accumulate(((z, n), (q, 0)), -cx * w * cz)
            for z, cz in alg.bracket_table.get((x, q), {}).items():
                out._accumulate(((p, 0), (z, n)), -cx * w * cz)
    return out


def verify_bialgebra(g: LieAlgebraData, max_degree: int,
                     fault: Optional[str] = None, jobs: int = 1) -> Report:
    """Antisymmetry, cocycle, and co-Jacobi identities for the cobracket on
    all basis currents up to the given u-degree."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    basis = [(b, n) for n in range(max_degree + 1) for b in range(g.dim)]
    specs = []

    def chk_antisym():
        for (b, n) in basis:
            xi = CurrentElement.generator(g, b, n)
            d = cobracket(xi, fault=fault)
            bad = d + d.swap()
            if bad:
                return f"at {g.names[b]}*u^{n}: " + bad.render()
        return None
    specs.append(("antisymmetry", "delta + delta^21 = 0", chk_antisym))

    def chk_cocycle():
        for (a, n) in basis:
            fa = CurrentElement.generator(g, a, n)
            dfa = cobracket(fa, fault=fault)
            for (b, m) in basis:
                fb = CurrentElement.generator(g, b, m)
                dfb = cobracket(fb, fault=fault)
                lhs = cobracket(c_bracket(fa, fb), fault=fault)
                rhs = (adjoint_coaction_bracket(dfa, fb)
                       - adjoint_coaction_bracket(dfb, fa))
                bad = lhs - rhs
                if bad:
                    return (f"at ({g.names[a]}*u^{n}, {g.names[b]}*u^{m}): "
                            + bad.render())
        return None
    specs.append(("cocycle",
                  "delta([f,g]) = [delta(f), D(g)] + [D(f), delta(g)] with "
                  "D(w) = w(u) (x) 1 + 1 (x) w(v)", chk_cocycle))

    def chk_cojacobi():
        cyc = (1, 2, 0)
        cyc2 = (2, 0, 1)
        for (b, n) in basis:
            xi = CurrentElement.generator(g, b, n)
            t = cobracket_slot(cobracket(xi, fault=fault), 0, fault=fault)
            total = t + t.permute(cyc) + t.permute(cyc2)
            if total:
                return f"at {g.names[b]}*u^{n}: " + total.render()
        return None
    specs.append(("co-jacobi",
                  "(Id + (123) + (132)) o (delta (x) Id) o delta = 0",
                  chk_cojacobi))

    def chk_degree():
        for (b, n) in basis:
            d = cobracket(CurrentElement.generator(g, b, n), fault=fault)
            for ((_, a), (_, bb)) in d.data:
                if a + bb != n - 1:
                    return f"bidegree ({a},{bb}) from u-degree {n}"
        return None
    specs.append(("cobracket-degree", "deg(delta) = -1 exactly", chk_degree))

    def chk_closed_form():
        for (b, n) in basis:
            bad = cleared_cobracket_identity(
                CurrentElement.generator(g, b, n), fault=fault)
            if bad:
                return f"at {g.names[b]}*u^{n}: " + bad.render()
        return None
    specs.append(("closed-form",
                  "(u - v)*delta(f) = [f(u) (x) 1 + 1 (x) f(v), Omega]",
                  chk_closed_form))

    return run_checks("bialgebra", g.type_label(), specs, jobs=jobs)


def verify_min_presentation(g: LieAlgebraData, jobs: int = 1) -> Report:
    """The degree-0/1 defining relations hold under i(x) -> x u^0 and
    G(x) -> x u^1 inside g[u]."""
    specs = []

    def chk_lie_map():
        for a in range(g.dim):
            for b in range(g.dim):
                x, y = g.basis_element(a), g.basis_element(b)
                lhs = CurrentElement.from_lie(g.bracket(x, y), 0)
                rhs = c_bracket(CurrentElement.from_lie(x, 0),
                                CurrentElement.from_lie(y, 0))
                if lhs - rhs:
                    return f"at ({g.names[a]}, {g.names[b]})"
        return None
    specs.append(("iota-lie-map", "i([x,y]) = [i(x), i(y)]", chk_lie_map))

    def chk_equivariance():
        for a in range(g.dim):
            for b in range(g.dim):
                x, y = g.basis_element(a), g.basis_element(b)
                lhs = CurrentElement.from_lie(g.bracket(x, y), 1)
                rhs = c_bracket(CurrentElement.from_lie(x, 0),
                                CurrentElement.from_lie(y, 1))
                if lhs - rhs:
                    return f"at ({g.names[a]}, {g.names[b]})"
        return None
    specs.append(("G-equivariance", "G([x,y]) = [i(x), G(y)]", chk_equivariance))

    if g.rank >= 2:
        def chk_cartan():
            for i in range(g.rank):
                for j in range(g.rank):
                    ti = CurrentElement.from_lie(g.cartan_generator(i), 1)
                    tj = CurrentElement.from_lie(g.cartan_generator(j), 1)
                    bad = c_bracket(ti, tj)
                    if bad:
                        return f"[t{i + 1}*u, t{j + 1}*u] = " + bad.render()
            return None
        specs.append(("degree-2-relation", "[G(t_i), G(t_j)] = 0", chk_cartan))
    else:
        def chk_sl2():
            e = CurrentElement.generator(g, g.simple_pos_index(0), 1)
            f = CurrentElement.generator(g, g.simple_neg_index(0), 1)
            h = CurrentElement.from_lie(g.cartan_generator(0), 1)
            bad = c_bracket(c_bracket(e, f), h)
            return zero_or_residual(bad)
        specs.append(("degree-3-relation", "[[G(e), G(f)], G(h)] = 0", chk_sl2))

    return run_checks("min-presentation", g.type_label(), specs, jobs=jobs)


def verify_generation(g: LieAlgebraData, max_degree: int, jobs: int = 1) -> Report:
    """Iterated brackets of the degree-0 and degree-1 generators span the full
    algebra in every graded slice up to max_degree (rank check per slice)."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    specs = []
    slices: Dict[int, list] = {
        0: [{b: ONE} for b in range(g.dim)],
        1: [{b: ONE} for b in range(g.dim)],
    }

    def close_and_check(n):
        vectors = []
        for k in range(1, n):
            lower = slices.get(n - k)
            if lower is None:
                continue
            for va in slices[k]:
                for vb in lower:
                    out: Dict[int, Fraction] = {}
                    for a, ca in va.items():
                        for b, cb in vb.items():
                            for z, cz in g.bracket_table.get((a, b), {}).items():
                                s = out.get(z, ZERO) + ca * cb * cz
                                if s:
                                    out[z] = s
                                else:
                                    out.pop(z, None)
                    if out:
                        vectors.append(out)
            if vectors:
                break  # [slice 1, slice n-1] already spans; keep the basis lean
        slices[n] = vectors
        got = rank_of_rows(vectors)
        if got != g.dim:
            return f"graded slice u^{n} has dimension {got}, expected {g.dim}"
        return None

    for n in range(2, max_degree + 1):
        specs.append((f"slice-{n}",
                      f"brackets of degree-0/1 generators span g*u^{n}",
                      lambda n=n: close_and_check(n)))
    return run_checks("generation", g.type_label(), specs, jobs=jobs)


class CurrentEnvelope:
    """Letter algebra for the enveloping algebra of g[u].

    Letters encode (basis index, u-degree) as index + dim * degree, so the
    PBW order is by u-degree, then by the Lie-algebra basis order.
    """

    def __init__(self, g: LieAlgebraData):
        self.g = g
        self._pbw_cache: Dict[tuple, dict] = {}
        self._coproduct_cache: Dict[tuple, dict] = {}

    def letter(self, basis: int, degree: int) -> int:
        return basis + self.g.dim * degree

    def pbw_bracket(self, a: int, b: int) -> Dict[int, Fraction]:
        dim = self.g.dim
        xa, na = a % dim, a // dim
        xb, nb = b % dim, b // dim
        return {z + dim * (na + nb): c
                for z, c in self.g.bracket_table.get((xa, xb), {}).items()}

    def pbw_letter_name(self, i: int) -> str:
        return f"{self.g.names[i % self.g.dim]}*u^{i // self.g.dim}"


def current_envelope(g: LieAlgebraData) -> CurrentEnvelope:
    """Shared U(g[u]) letter algebra for g (memoization lives on it)."""
    if g._current_envelope is None:
        g._current_envelope = CurrentEnvelope(g)
    return g._current_envelope
