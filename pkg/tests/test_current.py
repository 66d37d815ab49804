from fractions import Fraction as F
from random import Random

import pytest

from qcurrent.current import (CurrentElement, CurrentTensor, c_bracket,
                              cleared_cobracket_identity, cobracket,
                              cobracket_slot, current_envelope,
                              verify_bialgebra, verify_generation,
                              verify_min_presentation)
from qcurrent.envelope import UElement


def cur(g, name, deg):
    return CurrentElement.generator(g, g.name_to_index[name], deg)


def test_bracket_embeds_g(sl2):
    assert c_bracket(cur(sl2, "e", 0), cur(sl2, "f", 0)) == cur(sl2, "h", 0)


def test_bracket_cartan_degrees(sl2):
    assert not c_bracket(cur(sl2, "h", 1), cur(sl2, "h", 2))


def test_bracket_adds_degrees(sl2):
    assert c_bracket(cur(sl2, "e", 1), cur(sl2, "f", 2)) == cur(sl2, "h", 3)


def test_cobracket_degree_zero_vanishes(sl3):
    for b in range(sl3.dim):
        assert not cobracket(CurrentElement.generator(sl3, b, 0))


def test_cobracket_degree_one(sl2):
    d = cobracket(cur(sl2, "e", 1))
    # [e (x) 1, Omega] at bidegree (0, 0): h (x) e - e (x) h
    h, e = sl2.name_to_index["h"], sl2.name_to_index["e"]
    assert d.data == {((h, 0), (e, 0)): F(1), ((e, 0), (h, 0)): F(-1)}


def test_cobracket_degree_two_spreads(sl2):
    d = cobracket(cur(sl2, "e", 2))
    bidegrees = {(a, b) for ((_, a), (_, b)) in d.data}
    assert bidegrees == {(0, 1), (1, 0)}


def test_cobracket_degree_minus_one(sl3):
    for b in range(sl3.dim):
        for n in (1, 2, 3):
            d = cobracket(CurrentElement.generator(sl3, b, n))
            assert all(a + c == n - 1 for ((_, a), (_, c)) in d.data)


def test_cobracket_antisymmetric(sl3):
    for b in range(sl3.dim):
        d = cobracket(CurrentElement.generator(sl3, b, 2))
        assert d + d.swap() == CurrentTensor(sl3, 2)


def test_current_jacobi_random(sl3):
    rng = Random(77)
    for _ in range(15):
        xs = []
        for _ in range(3):
            el = CurrentElement(sl3)
            for _ in range(2):
                el = el + CurrentElement.generator(
                    sl3, rng.randrange(sl3.dim), rng.randint(0, 2)) * \
                    F(rng.randint(-3, 3), 1)
            xs.append(el)
        x, y, z = xs
        total = (c_bracket(c_bracket(x, y), z)
                 + c_bracket(c_bracket(y, z), x)
                 + c_bracket(c_bracket(z, x), y))
        assert not total


def test_closed_form_cross_check(sl3):
    for b in range(sl3.dim):
        for n in range(4):
            assert not cleared_cobracket_identity(
                CurrentElement.generator(sl3, b, n))


def test_verify_bialgebra(sl2, sl3):
    assert verify_bialgebra(sl2, 3).passed
    assert verify_bialgebra(sl3, 2).passed


def test_verify_bialgebra_rejects_bad_degree(sl2):
    with pytest.raises(ValueError):
        verify_bialgebra(sl2, 0)


def test_bialgebra_fault_breaks_cocycle(sl2):
    report = verify_bialgebra(sl2, 2, fault="omega")
    assert not report.passed
    failed = {c.id for c in report.checks if not c.passed}
    assert "cocycle" in failed


def test_cojacobi_slot_arity(sl2):
    t = cobracket_slot(cobracket(cur(sl2, "e", 2)), 0)
    assert t.arity == 3


def test_verify_min_presentation(sl2, sl3):
    r2 = verify_min_presentation(sl2)
    assert r2.passed
    assert {c.id for c in r2.checks} == {"iota-lie-map", "G-equivariance",
                                         "degree-3-relation"}
    r3 = verify_min_presentation(sl3)
    assert r3.passed
    assert "degree-2-relation" in {c.id for c in r3.checks}


def test_verify_generation(sl2, sl3):
    assert verify_generation(sl2, 4).passed
    assert verify_generation(sl3, 3).passed


def test_generation_trivial_degree(sl2):
    assert verify_generation(sl2, 1).passed  # generators already present


def test_current_envelope_normal_form(sl2):
    ce = current_envelope(sl2)
    eu = UElement.letter(ce, ce.letter(sl2.name_to_index["e"], 1))
    fu = UElement.letter(ce, ce.letter(sl2.name_to_index["f"], 1))
    hu = UElement.letter(ce, ce.letter(sl2.name_to_index["h"], 1))
    assert not eu.bracket(fu).bracket(hu)
    hu2 = UElement.letter(ce, ce.letter(sl2.name_to_index["h"], 2))
    assert eu.bracket(fu) == hu2


def test_current_render(sl2):
    el = cur(sl2, "h", 2) - cur(sl2, "e", 0) * F(1, 2)
    assert el.render() == "-1/2*e*u^0 + h*u^2"
