"""Enveloping algebras with PBW normal form, tensor powers, and the coproduct.

Elements are sparse maps from sorted monomials (tuples of letter indices) to
deformation polynomials.  Straightening applies the rewrite b*b' ->
b'*b + [b,b'] at the first descent, recursively; it terminates because each
step lowers (word length, inversion count) lexicographically, and results
are memoized per algebra so repeated suites share all subword work.

The same engine serves any "letter algebra" exposing `pbw_bracket`,
`pbw_letter_name` and a `_pbw_cache` dict, which is how the current-algebra
normal form reuses it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .exactnum import HPoly, ONE, ZERO
from .liealg import LieAlgebraData, LieElement
from .reports import Report, run_checks, zero_or_residual

Monomial = Tuple[int, ...]


def normal_order(ctx, word: Monomial) -> Dict[Monomial, Fraction]:
    """PBW normal form of an arbitrary word, as {sorted monomial: coefficient}."""
    cache = ctx._pbw_cache
    hit = cache.get(word)
    if hit is not None:
        return hit
    descent = None
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            descent = i
            break
    if descent is None:
        result = {word: ONE}
    else:
        a, b = word[descent], word[descent + 1]
        swapped = word[:descent] + (b, a) + word[descent + 2:]
        result = dict(normal_order(ctx, swapped))
        for letter, coeff in ctx.pbw_bracket(a, b).items():
            shorter = word[:descent] + (letter,) + word[descent + 2:]
            for mono, c in normal_order(ctx, shorter).items():
                s = result.get(mono, ZERO) + coeff * c
                if s:
                    result[mono] = s
                else:
                    result.pop(mono, None)
    cache[word] = result
    return result


class UElement:
    """PBW-normal-form element of the enveloping algebra over HPoly scalars."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: Optional[Dict[Monomial, HPoly]] = None):
        self.ctx = ctx
        self.data = {}
        if data:
            for m, p in data.items():
                if not isinstance(p, HPoly):
                    p = HPoly.rational(p)
                if p:
                    self.data[m] = p

    @classmethod
    def zero(cls, ctx) -> "UElement":
        return cls(ctx)

    @classmethod
    def unit(cls, ctx) -> "UElement":
        return cls(ctx, {(): HPoly.one()})

    @classmethod
    def letter(cls, ctx, i: int) -> "UElement":
        return cls(ctx, {(i,): HPoly.one()})

    @classmethod
    def from_lie(cls, g, x: LieElement) -> "UElement":
        return cls(g, {(i,): HPoly.rational(c) for i, c in x.data.items()})

    @classmethod
    def from_word(cls, ctx, word: Iterable[int]) -> "UElement":
        out = cls(ctx)
        for mono, c in normal_order(ctx, tuple(word)).items():
            out._accumulate(mono, HPoly.rational(c))
        return out

    def _accumulate(self, mono: Monomial, poly: HPoly):
        s = self.data.get(mono)
        s = poly if s is None else s + poly
        if s:
            self.data[mono] = s
        else:
            self.data.pop(mono, None)

    def __bool__(self) -> bool:
        return bool(self.data)

    def __eq__(self, other) -> bool:
        return isinstance(other, UElement) and self.data == other.data

    def __add__(self, other: "UElement") -> "UElement":
        assert self.ctx is other.ctx
        out = UElement(self.ctx)
        out.data = dict(self.data)
        for m, p in other.data.items():
            out._accumulate(m, p)
        return out

    def __neg__(self) -> "UElement":
        out = UElement(self.ctx)
        out.data = {m: -p for m, p in self.data.items()}
        return out

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def scale(self, scalar) -> "UElement":
        if isinstance(scalar, HPoly):
            poly = scalar
        else:
            poly = HPoly.rational(scalar)
        out = UElement(self.ctx)
        for m, p in self.data.items():
            q = p * poly
            if q:
                out.data[m] = q
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, HPoly)):
            return self.scale(other)
        assert self.ctx is other.ctx
        out = UElement(self.ctx)
        for m1, p1 in self.data.items():
            for m2, p2 in other.data.items():
                poly = p1 * p2
                if not poly:
                    continue
                for mono, c in normal_order(self.ctx, m1 + m2).items():
                    out._accumulate(mono, poly * c)
        return out

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def bracket(self, other: "UElement") -> "UElement":
        return self * other - other * self

    def hbar_coefficient(self, k: int) -> Dict[Monomial, Fraction]:
        out = {}
        for m, p in self.data.items():
            c = p.coeff(k)
            if c:
                out[m] = c
        return out

    def filtration_degree(self) -> int:
        return max((len(m) for m in self.data), default=0)

    def render(self) -> str:
        return _render_terms(sorted(self.data.items()),
                             lambda m: _mono_text(self.ctx, m))

    def __repr__(self):
        return self.render()


class TensorElement:
    """Element of the n-th tensor power, slotwise PBW-normal monomials."""

    __slots__ = ("ctx", "arity", "data")

    def __init__(self, ctx, arity: int,
                 data: Optional[Dict[Tuple[Monomial, ...], HPoly]] = None):
        self.ctx = ctx
        self.arity = arity
        self.data = {}
        if data:
            for key, p in data.items():
                if not isinstance(p, HPoly):
                    p = HPoly.rational(p)
                if p:
                    self.data[key] = p

    @classmethod
    def unit(cls, ctx, arity: int) -> "TensorElement":
        return cls(ctx, arity, {((),) * arity: HPoly.one()})

    @classmethod
    def pure(cls, factors: Iterable[UElement]) -> "TensorElement":
        from itertools import product
        factors = list(factors)
        out = cls(factors[0].ctx, len(factors))
        for combo in product(*(list(f.data.items()) for f in factors)):
            key = tuple(m for m, _ in combo)
            poly = HPoly.one()
            for _, p in combo:
                poly = poly * p
            out._accumulate(key, poly)
        return out

    def _accumulate(self, key, poly: HPoly):
        s = self.data.get(key)
        s = poly if s is None else s + poly
        if s:
            self.data[key] = s
        else:
            self.data.pop(key, None)

    def __bool__(self) -> bool:
        return bool(self.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorElement) and self.arity == other.arity
                and self.data == other.data)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        assert self.ctx is other.ctx and self.arity == other.arity
        out = TensorElement(self.ctx, self.arity)
        out.data = dict(self.data)
        for k, p in other.data.items():
            out._accumulate(k, p)
        return out

    def __neg__(self) -> "TensorElement":
        out = TensorElement(self.ctx, self.arity)
        out.data = {k: -p for k, p in self.data.items()}
        return out

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, scalar) -> "TensorElement":
        poly = scalar if isinstance(scalar, HPoly) else HPoly.rational(scalar)
        out = TensorElement(self.ctx, self.arity)
        for k, p in self.data.items():
            q = p * poly
            if q:
                out.data[k] = q
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, HPoly)):
            return self.scale(other)
        assert self.ctx is other.ctx
        if self.arity != other.arity:
            raise ValueError("tensor arity mismatch")
        out = TensorElement(self.ctx, self.arity)
        for k1, p1 in self.data.items():
            for k2, p2 in other.data.items():
                poly = p1 * p2
                if not poly:
                    continue
                slot_terms = [normal_order(self.ctx, a + b)
                              for a, b in zip(k1, k2)]
                _expand_slots(out, slot_terms, poly)
        return out

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def bracket(self, other: "TensorElement") -> "TensorElement":
        return self * other - other * self

    def permute(self, perm: Tuple[int, ...]) -> "TensorElement":
        """Tensor-factor permutation: slot k of the result is slot perm[k]."""
        out = TensorElement(self.ctx, self.arity)
        for key, p in self.data.items():
            out._accumulate(tuple(key[perm[k]] for k in range(self.arity)), p)
        return out

    def swap(self) -> "TensorElement":
        assert self.arity == 2
        return self.permute((1, 0))

    def multiply_slots(self) -> UElement:
        """Total multiplication map m: a1 (x) ... (x) an -> a1*...*an."""
        out = UElement(self.ctx)
        for key, p in self.data.items():
            word = tuple(letter for mono in key for letter in mono)
            for mono, c in normal_order(self.ctx, word).items():
                out._accumulate(mono, p * c)
        return out

    def render(self) -> str:
        def key_text(key):
            return " (x) ".join(_mono_text(self.ctx, m, wrap=True) for m in key)
        return _render_terms(sorted(self.data.items()), key_text)

    def __repr__(self):
        return self.render()


def _expand_slots(out: TensorElement, slot_terms, poly: HPoly):
    keys = [()]
    coeffs = [ONE]
    for terms in slot_terms:
        new_keys, new_coeffs = [], []
        for base, c in zip(keys, coeffs):
            for mono, c2 in terms.items():
                new_keys.append(base + (mono,))
                new_coeffs.append(c * c2)
        keys, coeffs = new_keys, new_coeffs
    for key, c in zip(keys, coeffs):
        out._accumulate(key, poly * c)


# --- rendering ---------------------------------------------------------------


def _mono_text(ctx, mono: Monomial, wrap: bool = False) -> str:
    if not mono:
        return "1"
    body = "*".join(ctx.pbw_letter_name(i) for i in mono)
    if wrap and len(mono) > 1:
        return f"({body})"
    return body


def _render_terms(items, key_text) -> str:
    if not items:
        return "0"
    parts = []
    for key, poly in items:
        mono = key_text(key)
        if len(poly.coeffs) == 1:
            ((k, c),) = poly.coeffs.items()
            pieces = []
            if c == -1:
                sign = "-"
            elif c == 1:
                sign = ""
            else:
                sign = ""
                pieces.append(str(c))
            if k:
                pieces.append("hbar" if k == 1 else f"hbar^{k}")
            if mono != "1" or not pieces:
                pieces.append(mono)
            text = sign + "*".join(pieces)
            if c == -1 and not pieces:
                text = "-1"
        else:
            text = f"({poly.render()})"
            if mono != "1":
                text += f"*{mono}"
        parts.append(text)
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# --- operations ---------------------------------------------------------------


def u_multiply(a: UElement, b: UElement) -> UElement:
    return a * b


def u_bracket(a: UElement, b: UElement) -> UElement:
    return a.bracket(b)


def t_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    return a * b


def t_bracket(a: TensorElement, b: TensorElement) -> TensorElement:
    return a.bracket(b)


def box_n(a: UElement, n: int) -> TensorElement:
    """Sum of a placed in each slot against units: the n-fold cocommutative box."""
    out = TensorElement(a.ctx, n)
    for mono, p in a.data.items():
        for slot in range(n):
            key = tuple(mono if k == slot else () for k in range(n))
            out._accumulate(key, p)
    return out


def mono_coproduct_terms(ctx, mono: Monomial) -> dict:
    """Cached expansion of Delta on one PBW monomial, rational coefficients."""
    cache = ctx._coproduct_cache
    terms = cache.get(mono)
    if terms is None:
        terms = {((), ()): ONE}
        for letter in mono:
            new: Dict[Tuple[Monomial, Monomial], Fraction] = {}
            for (m1, m2), c in terms.items():
                for mm, c2 in normal_order(ctx, m1 + (letter,)).items():
                    key = (mm, m2)
                    s = new.get(key, ZERO) + c * c2
                    if s:
                        new[key] = s
                    else:
                        new.pop(key, None)
                for mm, c2 in normal_order(ctx, m2 + (letter,)).items():
                    key = (m1, mm)
                    s = new.get(key, ZERO) + c * c2
                    if s:
                        new[key] = s
                    else:
                        new.pop(key, None)
            terms = new
        cache[mono] = terms
    return terms


def coproduct(a: UElement) -> TensorElement:
    """Algebra morphism with every letter primitive; slots stay normal-ordered."""
    out = TensorElement(a.ctx, 2)
    for mono, poly in a.data.items():
        for key, c in mono_coproduct_terms(a.ctx, mono).items():
            out._accumulate(key, poly * c)
    return out


def adjoint_action(x: LieElement, a: UElement) -> UElement:
    """x . a = [x, a], the adjoint action of the Lie algebra on its envelope."""
    return UElement.from_lie(a.ctx, x).bracket(a)


def nu(g: LieAlgebraData, h: LieElement) -> UElement:
    """The half-sum over positive roots of alpha(h) x^-_alpha x^+_alpha.

    Already PBW-ordered: negative letters precede positive ones.
    """
    if not g.is_cartan(h):
        raise ValueError("nu is defined on the Cartan subalgebra only")
    out = UElement(g)
    half = Fraction(1, 2)
    for k in range(g.num_positive):
        val = g.root_value(k, h)
        if val:
            out._accumulate((g.neg_index(k), g.pos_index(k)),
                            HPoly.rational(half * val))
    return out


def w_element(g: LieAlgebraData, i: int, sign: int) -> UElement:
    """w_i^+- = +-(alpha_i, alpha_i)^{-1} [nu(t_i), x_i^+-]."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t_i = g.cartan_generator(i)
    x = UElement.letter(g, g.simple_pos_index(i) if sign == 1 else g.simple_neg_index(i))
    norm = g.simple_root_norm(i)
    return nu(g, t_i).bracket(x).scale(Fraction(sign, 1) / norm)


def casimir_tensor(g: LieAlgebraData) -> TensorElement:
    """Casimir 2-tensor from dual bases of the invariant form."""
    out = TensorElement(g, 2)
    for a, b, wgt in g.casimir_pairs:
        out._accumulate(((a,), (b,)), HPoly.rational(wgt))
    return out


def quadratic_casimir(g: LieAlgebraData) -> UElement:
    """C = m(Omega), checked central on the generators."""
    c = casimir_tensor(g).multiply_slots()
    for b in range(g.dim):
        if c.bracket(UElement.letter(g, b)):
            raise ValueError("quadratic Casimir fails to be central")
    return c


def kappa(g: LieAlgebraData) -> UElement:
    """Half the quadratic Casimir of sl_2 in its customary normal form."""
    if g.n != 2:
        raise ValueError("kappa is specific to sl_2")
    f, h, e = 0, 1, 2
    out = UElement(g, {
        (h, h): HPoly.rational(Fraction(1, 4)),
        (h,): HPoly.rational(Fraction(1, 2)),
        (f, e): HPoly.one(),
    })
    for b in range(g.dim):
        if out.bracket(UElement.letter(g, b)):
            raise ValueError("kappa fails to be central")
    return out


def lie_tensor_bracket_with_slot1(g: LieAlgebraData, x: LieElement) -> TensorElement:
    """[x (x) 1, Omega] as a tensor with single-letter slots."""
    omega = casimir_tensor(g)
    left = TensorElement(g, 2,
                         {((i,), ()): HPoly.rational(c) for i, c in x.data.items()})
    return left.bracket(omega)


def verify_gnw(g: LieAlgebraData, fault: Optional[str] = None,
               jobs: int = 1) -> Report:
    """Check the nu / w commutator identities and the coproduct defect of
    [nu(h1), nu(h2)] against the double Casimir bracket, exactly.

    `fault="nu"` perturbs the nu builder (adding its Cartan argument) in the
    constructed elements; the pairing targets use the clean formula, so the
    w-pairing family must fail.  Perturbing both sides would self-heal: the
    shift propagates to w_i^+- and cancels.
    """
    def nu_of(h: LieElement) -> UElement:
        base = nu(g, h)
        if fault == "nu":
            base = base + UElement.from_lie(g, h)
        return base

    def w_of(i: int, sign: int) -> UElement:
        t_i = g.cartan_generator(i)
        x = UElement.letter(g, g.simple_pos_index(i) if sign == 1 else g.simple_neg_index(i))
        return nu_of(t_i).bracket(x).scale(Fraction(sign, 1) / g.simple_root_norm(i))

    specs = []
    r = g.rank
    for j in range(r):
        h = g.cartan_generator(j)
        for i in range(r):
            for sign, tag in ((1, "+"), (-1, "-")):
                def chk(h=h, i=i, sign=sign):
                    lhs = nu_of(h).bracket(UElement.letter(
                        g, g.simple_pos_index(i) if sign == 1 else g.simple_neg_index(i)))
                    rhs = w_of(i, sign).scale(sign * g.simple_root_value(i, h))
                    return zero_or_residual(lhs - rhs)
                specs.append((f"commutator-nu-t{j + 1}-x{i + 1}{tag}",
                              f"[nu(t{j + 1}), x{i + 1}^{tag}] = "
                              f"{'+' if sign == 1 else '-'}alpha_{i + 1}(t{j + 1})*w{i + 1}^{tag}",
                              chk))
    for i in range(r):
        for j in range(r):
            def chk_pair(i=i, j=j):
                t_i = g.cartan_generator(i)
                target = UElement(g)
                if i == j:
                    ti_sq = UElement.from_lie(g, t_i) * UElement.from_lie(g, t_i)
                    target = nu(g, t_i) - ti_sq.scale(Fraction(1, 2))
                lhs1 = w_of(i, 1).bracket(UElement.letter(g, g.simple_neg_index(j)))
                lhs2 = UElement.letter(g, g.simple_pos_index(i)).bracket(w_of(j, -1))
                bad = (lhs1 - target) or (lhs2 - target)
                return zero_or_residual(bad) if bad else None
            specs.append((f"w-pairing-{i + 1}{j + 1}",
                          f"[w{i + 1}^+, x{j + 1}^-] = [x{i + 1}^+, w{j + 1}^-] = "
                          f"delta_{i + 1}{j + 1}*(nu(t{i + 1}) - (1/2)*t{i + 1}^2)",
                          chk_pair))
    for i in range(r):
        for j in range(r):
            def chk_cop(i=i, j=j):
                n1, n2 = nu_of(g.cartan_generator(i)), nu_of(g.cartan_generator(j))
                comm = n1.bracket(n2)
                lhs = coproduct(comm) - box_n(comm, 2)
                b1 = lie_tensor_bracket_with_slot1(g, g.cartan_generator(i))
                b2 = lie_tensor_bracket_with_slot1(g, g.cartan_generator(j))
                rhs = b1.bracket(b2).scale(Fraction(1, 4))
                return zero_or_residual(lhs + rhs)
            specs.append((f"coproduct-nu-{i + 1}{j + 1}",
                          f"Delta([nu(t{i + 1}), nu(t{j + 1})]) - box(...) "
                          f"+ (1/4)*[[t{i + 1} (x) 1, Omega], [t{j + 1} (x) 1, Omega]] = 0",
                          chk_cop))
    return run_checks("gnw", g.type_label(), specs, jobs=jobs)
