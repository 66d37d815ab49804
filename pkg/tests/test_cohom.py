from fractions import Fraction as F
from random import Random

import pytest

from qcurrent.cohom import (CEChain, CobarChain, Cochain,
                            CocycleConditionError, adjoint_module,
                            bicomplex_dh, bicomplex_dv, bicomplex_report,
                            cartier_check, ce_cohomology_dims,
                            ce_differential, cobar_differential, dual_module,
                            identity_shift_of, minus_cohomology_dim,
                            random_ce_chain, random_cochain, sigma_involution,
                            sigma_split, solve_correction,
                            solve_minus_coboundary, solver_report,
                            tensor_module, trivial_module, u_slice_module,
                            whitehead_report)
from qcurrent.exactnum import ONE


# --- modules ---------------------------------------------------------------


def test_module_constructors_validate(sl2):
    adjoint_module(sl2).validate()
    dual_module(adjoint_module(sl2)).validate()
    u_slice_module(sl2, 2).validate()
    tensor_module(adjoint_module(sl2), adjoint_module(sl2)).validate()
    trivial_module(sl2).validate()


def test_sl3_adjoint_module_validates(sl3):
    adjoint_module(sl3).validate()


def test_module_weights_detected(sl2):
    big = tensor_module(dual_module(adjoint_module(sl2)), u_slice_module(sl2, 2))
    assert big.weights() is not None
    assert big.dim == 3 * 10


# --- Chevalley-Eilenberg ------------------------------------------------------


def test_ce_differential_degree_zero_is_action(sl2):
    mod = adjoint_module(sl2)
    v = CEChain(mod, 0, {(): {0: ONE}})  # the basis vector f
    d = ce_differential(v)
    for x in range(sl2.dim):
        assert d.value((x,)) == mod.act(x, {0: ONE})


def test_ce_differential_squares_to_zero(sl2, sl3):
    rng = Random(17)
    for g in (sl2, sl3):
        mod = tensor_module(adjoint_module(g), adjoint_module(g))
        for m in (0, 1):
            w = random_ce_chain(mod, m, rng)
            assert not ce_differential(ce_differential(w))


def test_ce_coboundary_is_closed(sl2):
    rng = Random(23)
    mod = adjoint_module(sl2)
    w = random_ce_chain(mod, 0, rng)
    assert not ce_differential(ce_differential(w))


def test_whitehead_dims(sl2):
    assert ce_cohomology_dims(adjoint_module(sl2), 2) == [0, 0, 0]
    assert ce_cohomology_dims(trivial_module(sl2), 0) == [1]
    big = tensor_module(dual_module(adjoint_module(sl2)), u_slice_module(sl2, 2))
    assert ce_cohomology_dims(big, 2) == [1, 0, 0]


def test_whitehead_adjoint_tensor_adjoint(sl2, sl3):
    for g in (sl2, sl3):
        mod = tensor_module(adjoint_module(g), adjoint_module(g))
        assert ce_cohomology_dims(mod, 2)[1:] == [0, 0]


def test_whitehead_deeper_slice(sl2):
    big = tensor_module(dual_module(adjoint_module(sl2)), u_slice_module(sl2, 3))
    assert ce_cohomology_dims(big, 2) == [2, 0, 0]


def test_whitehead_report(sl2):
    report = whitehead_report(sl2)
    assert report.passed
    assert len(report.checks) == 5


def test_whitehead_report_sl3(sl3):
    assert whitehead_report(sl3).passed


def test_trivial_module_full_cohomology(sl2):
    # H^* (g, trivial) = exterior invariants: 1, 0, 0, 1 for sl_2
    assert ce_cohomology_dims(trivial_module(sl2), 3) == [1, 0, 0, 1]


# --- cobar -----------------------------------------------------------------


def test_primitives_are_cocycles():
    for v_dim in (1, 2, 3):
        for k in range(v_dim):
            mono = tuple(1 if i == k else 0 for i in range(v_dim))
            y = CobarChain(v_dim, 1, 1, {(mono,): ONE})
            assert not cobar_differential(y)


def _random_cobar(v_dim, n, degree, rng):
    from qcurrent.cohom import _tensor_basis
    data = {}
    for key in _tensor_basis(v_dim, n, degree):
        if rng.random() < 0.4:
            c = F(rng.randint(-3, 3), rng.randint(1, 2))
            if c:
                data[key] = c
    return CobarChain(v_dim, n, degree, data)


def test_cobar_differential_squares_to_zero():
    rng = Random(6)
    for _ in range(10):
        y = _random_cobar(2, rng.randint(1, 2), rng.randint(0, 3), rng)
        assert not cobar_differential(cobar_differential(y))


def test_sigma_commutes_with_differential():
    rng = Random(8)
    for _ in range(10):
        y = _random_cobar(2, 2, rng.randint(0, 3), rng)
        assert cobar_differential(sigma_involution(y)) == \
            sigma_involution(cobar_differential(y))


def test_sigma_split_properties():
    rng = Random(10)
    y = _random_cobar(3, 2, 3, rng)
    plus, minus = sigma_split(y)
    assert plus + minus == y
    assert sigma_involution(plus) == plus
    assert sigma_involution(minus) == minus.scale(-1)
    assert sigma_involution(sigma_involution(y)) == y


def test_minus_part_at_n2_is_symmetric():
    y = CobarChain(2, 2, 1, {((1, 0), (0, 0)): ONE})
    _, minus = sigma_split(y)
    assert minus.data == {((1, 0), (0, 0)): F(1, 2), ((0, 0), (1, 0)): F(1, 2)}


def test_cartier_dimensions():
    for v_dim in (1, 2, 3):
        for d in range(5):
            assert minus_cohomology_dim(v_dim, 2, d) == 0


def test_cartier_check_report():
    assert cartier_check(3, 4).passed


def test_solve_minus_coboundary_roundtrip():
    rng = Random(4)
    from qcurrent.cohom import _minus_basis
    for d in (1, 2, 3):
        chain = CobarChain(2, 1, d)
        for b in _minus_basis(2, 1, d):
            if rng.random() < 0.6:
                chain = chain + b.scale(F(rng.randint(-2, 2)))
        y = cobar_differential(chain)
        x = solve_minus_coboundary(y)
        assert cobar_differential(x) == y


def test_solve_minus_coboundary_rejects_non_cocycle():
    # symmetric (so in the minus part at n = 2) but not closed
    bad = CobarChain(2, 2, 1, {((1, 0), (0, 0)): ONE, ((0, 0), (1, 0)): ONE})
    assert cobar_differential(bad)  # genuinely not a cocycle
    with pytest.raises(CocycleConditionError, match="cocycle"):
        solve_minus_coboundary(bad)


def test_solve_minus_coboundary_rejects_plus_part():
    y = CobarChain(2, 2, 1, {((1, 0), (0, 0)): ONE, ((0, 0), (1, 0)): -ONE})
    with pytest.raises(CocycleConditionError):
        solve_minus_coboundary(y)


# --- bicomplex -----------------------------------------------------------------


def test_dh_at_00_is_intertwiner_defect(sl2):
    w = Cochain(sl2, 0, 1, 2)
    w._accumulate(((), 0), ((0,),), ONE)  # v = f maps to the monomial f
    d = bicomplex_dh(w)
    for x in range(sl2.dim):
        for v in range(sl2.dim):
            tensor = d.value((x,), v)
            from qcurrent.cohom import _ad_letter
            expected = {}
            if v == 0:
                expected = {(m,): c for m, c in _ad_letter(sl2, x, (0,)).items()}
            for z, c in sl2.bracket_table.get((x, v), {}).items():
                if z == 0:
                    for key in [((0,),)]:
                        expected[key] = expected.get(key, F(0)) - c
            expected = {k: v2 for k, v2 in expected.items() if v2}
            assert tensor == expected


def test_identity_map_is_horizontal_cocycle(sl2):
    w = Cochain(sl2, 0, 1, 2)
    for v in range(sl2.dim):
        w._accumulate(((), v), ((v,),), ONE)
    assert not bicomplex_dh(w)


def test_dh_kernel_iff_intertwiner(sl2):
    """Both directions at bidegree (0, 1): the kernel of dH consists exactly
    of the equivariant maps."""
    from qcurrent.cohom import (_cochain01_from_coords, _flatten_cochain,
                                _k01_basis)
    from qcurrent.exactnum import SparseMatrix, kernel_basis
    basis, _ = _k01_basis(sl2, 2)
    index = {}
    cols = []
    for i in range(len(basis)):
        elem = _cochain01_from_coords(sl2, 2, {i: ONE}, basis)
        cols.append(_flatten_cochain(bicomplex_dh(elem), index))
    mat = SparseMatrix(len(index), len(basis))
    for j, col in enumerate(cols):
        for i, c in col.items():
            mat[i, j] = c
    kern = kernel_basis(mat)
    # dim Hom_g(g_ad, U<=2) = 1 for sl2 (the inclusion, up to scale)
    assert len(kern) == 1
    vec = kern[0]
    w = _cochain01_from_coords(sl2, 2, vec, basis)
    for x in range(sl2.dim):
        for v in range(sl2.dim):
            lhs = {}
            from qcurrent.cohom import _tensor_ad
            for tkey, c in w.value((), v).items():
                for k2, c2 in _tensor_ad(sl2, x, {tkey: c}).items():
                    s = lhs.get(k2, F(0)) + c2
                    if s:
                        lhs[k2] = s
                    else:
                        lhs.pop(k2, None)
            rhs = {}
            for z, c in sl2.bracket_table.get((x, v), {}).items():
                for tkey, c2 in w.value((), z).items():
                    s = rhs.get(tkey, F(0)) + c * c2
                    if s:
                        rhs[tkey] = s
                    else:
                        rhs.pop(tkey, None)
            assert lhs == rhs
    # and a visibly non-equivariant map fails dH = 0
    bad = Cochain(sl2, 0, 1, 2)
    bad._accumulate(((), 0), ((1,),), ONE)
    assert bicomplex_dh(bad)


def test_dv_at_01_is_box_minus_delta(sl2):
    rng = Random(12)
    psi = random_cochain(sl2, 0, 1, 2, rng)
    d = bicomplex_dv(psi)
    from qcurrent.envelope import mono_coproduct_terms
    for v in range(sl2.dim):
        expected = {}
        for (mono,), c in psi.value((), v).items():
            for key in (((), mono), (mono, ())):
                expected[key] = expected.get(key, F(0)) + c
            for key, q in mono_coproduct_terms(sl2, mono).items():
                expected[key] = expected.get(key, F(0)) - c * q
        expected = {k: val for k, val in expected.items() if val}
        assert d.value((), v) == expected


def test_bicomplex_identities_random(sl2):
    rng = Random(2)
    for m in range(3):
        for n in (1, 2):
            w = random_cochain(sl2, m, n, 2, rng)
            assert not bicomplex_dh(bicomplex_dh(w))
            assert not bicomplex_dv(bicomplex_dv(w))
            assert bicomplex_dv(bicomplex_dh(w)) == bicomplex_dh(bicomplex_dv(w))


def test_bicomplex_report(sl2):
    assert bicomplex_report(sl2, samples=18, seed=5).passed


def test_cochain_filtration_guard(sl2):
    with pytest.raises(Exception):
        Cochain(sl2, 0, 1, 1, {((), 0): {((0, 0, 0),): ONE}})


# --- solver --------------------------------------------------------------------


def test_solver_zero_data(sl2):
    phi = solve_correction(Cochain(sl2, 1, 1, 2), Cochain(sl2, 0, 2, 2), 2)
    assert not phi


def test_solver_roundtrip_and_uniqueness(sl2):
    rng = Random(100)
    for _ in range(4):
        phi0 = random_cochain(sl2, 0, 1, 2, rng, density=0.7)
        gamma = bicomplex_dh(phi0)
        eta = bicomplex_dv(phi0)
        phi = solve_correction(gamma, eta, 2)
        assert bicomplex_dh(phi) == gamma
        assert bicomplex_dv(phi) == eta
        lam = identity_shift_of(phi - phi0)
        assert lam is not None


def test_solver_sl3(sl3):
    rng = Random(41)
    phi0 = random_cochain(sl3, 0, 1, 2, rng, density=0.2)
    phi = solve_correction(bicomplex_dh(phi0), bicomplex_dv(phi0), 2)
    assert identity_shift_of(phi - phi0) is not None


def test_solver_rejects_bad_gamma(sl2):
    rng = Random(33)
    gamma = random_cochain(sl2, 1, 1, 2, rng)
    while not bicomplex_dh(gamma):
        gamma = random_cochain(sl2, 1, 1, 2, rng)
    with pytest.raises(CocycleConditionError, match="gamma"):
        solve_correction(gamma, Cochain(sl2, 0, 2, 2), 2)


def test_solver_rejects_asymmetric_eta(sl2):
    phi0 = Cochain(sl2, 0, 1, 2)
    eta = Cochain(sl2, 0, 2, 2)
    eta._accumulate(((), 0), ((0,), (1,)), ONE)  # f (x) h minus nothing
    eta._accumulate(((), 0), ((), ()), ONE)
    with pytest.raises(CocycleConditionError):
        solve_correction(bicomplex_dh(phi0), eta, 2)


def test_solver_rejects_mixed_equation_violation(sl2):
    phi0 = Cochain(sl2, 0, 1, 2)
    phi0._accumulate(((), 0), ((0, 2),), ONE)
    gamma = bicomplex_dh(phi0)
    other = Cochain(sl2, 0, 1, 2)
    other._accumulate(((), 1), ((1, 1),), ONE)
    eta = bicomplex_dv(other)
    if bicomplex_dv(gamma) - bicomplex_dh(eta):
        with pytest.raises(CocycleConditionError, match="mixed"):
            solve_correction(gamma, eta, 2)


def test_solver_fault_detected(sl2):
    rng = Random(55)
    phi0 = random_cochain(sl2, 0, 1, 2, rng, density=0.6)
    with pytest.raises(CocycleConditionError):
        solve_correction(bicomplex_dh(phi0), bicomplex_dv(phi0), 2,
                         fault="noneq-theta")


def test_solver_report_with_lift(sl2):
    report = solver_report(sl2, runs=2, seed=9)
    assert report.passed
    assert any(c.id == "model-lift" for c in report.checks)


def test_cochain_json_roundtrip(sl2):
    import json
    rng = Random(64)
    w = random_cochain(sl2, 1, 2, 2, rng)
    payload = json.loads(json.dumps(w.to_json_dict(), sort_keys=True))
    back = Cochain.from_json_dict(sl2, payload)
    assert back == w
    # serialization is deterministic
    assert (json.dumps(w.to_json_dict(), sort_keys=True)
            == json.dumps(back.to_json_dict(), sort_keys=True))
