from fractions import Fraction as F
from itertools import combinations

import pytest

from qcurrent.exactnum import SparseMatrix, nullity, rank
from qcurrent.liealg import build_sl, casimir_adjoint_eigenvalue


def test_build_sl2_shape(sl2):
    assert sl2.dim == 3
    assert sl2.num_positive == 1
    assert sl2.names == ["f", "h", "e"]  # negative < cartan < positive


def test_build_sl3_shape(sl3):
    assert sl3.dim == 8
    assert sl3.num_positive == 3


def test_build_sl_rejects_small_n():
    with pytest.raises(ValueError):
        build_sl(1)


def test_sl2_bracket_values(sl2):
    e, f, h = (sl2.element_by_name(n) for n in "efh")
    assert sl2.bracket(e, f) == h
    assert sl2.bracket(h, e) == 2 * e
    assert sl2.bracket(h, f) == -2 * f
    assert not sl2.bracket(e, e)


def test_sl2_form_values(sl2):
    e, f, h = (sl2.element_by_name(n) for n in "efh")
    assert sl2.form(e, f) == 1
    assert sl2.form(h, h) == 2
    assert not sl2.form(e, e)


def test_root_count_matches_type_A():
    for n in (2, 3, 4):
        g = build_sl(n)
        assert g.num_positive == n * (n - 1) // 2


def test_cartan_generators_are_brackets(sl3):
    for i in range(sl3.rank):
        t = sl3.bracket(sl3.basis_element(sl3.simple_pos_index(i)),
                        sl3.basis_element(sl3.simple_neg_index(i)))
        assert t == sl3.cartan_generator(i)


def test_simple_root_pairs_normalized(sl3):
    for i in range(sl3.rank):
        assert sl3.form(sl3.basis_element(sl3.simple_pos_index(i)),
                        sl3.basis_element(sl3.simple_neg_index(i))) == 1


def test_jacobi_all_basis_triples(sl3):
    for a, b, c in combinations(range(sl3.dim), 3):
        x, y, z = (sl3.basis_element(i) for i in (a, b, c))
        total = (sl3.bracket(sl3.bracket(x, y), z)
                 + sl3.bracket(sl3.bracket(y, z), x)
                 + sl3.bracket(sl3.bracket(z, x), y))
        assert not total


def test_form_invariance(sl3):
    for a in range(sl3.dim):
        for b in range(sl3.dim):
            for c in range(sl3.dim):
                x, y, z = (sl3.basis_element(i) for i in (a, b, c))
                assert sl3.form(sl3.bracket(x, y), z) == sl3.form(x, sl3.bracket(y, z))


def test_form_nondegenerate(sl3):
    gram = SparseMatrix(sl3.dim, sl3.dim, dict(
        ((a, b), v) for (a, b), v in sl3.gram.items()))
    assert rank(gram) == sl3.dim


def test_cartan_pairing_reproduces_roots(sl3):
    # (h, t_i) = alpha_i(h) for h ranging over the Cartan generators
    for i in range(sl3.rank):
        t_i = sl3.cartan_generator(i)
        for j in range(sl3.rank):
            h = sl3.cartan_generator(j)
            assert sl3.form(h, t_i) == sl3.simple_root_value(i, h)


def test_casimir_pairs_symmetric(sl3):
    weights = {}
    for a, b, w in sl3.casimir_pairs:
        weights[a, b] = weights.get((a, b), F(0)) + w
    for (a, b), w in weights.items():
        assert weights.get((b, a)) == w


def test_casimir_adjoint_eigenvalues():
    assert casimir_adjoint_eigenvalue(build_sl(2)) == 4
    assert casimir_adjoint_eigenvalue(build_sl(3)) == 6
    assert casimir_adjoint_eigenvalue(build_sl(4)) == 8


def test_casimir_bracket_map_injective(sl3):
    """The kernel step: [x (x) 1, Omega] = 0 forces x = 0."""
    coords = {}
    for col in range(sl3.dim):
        for (p, q, w) in sl3.casimir_pairs:
            for z, cz in sl3.bracket_table.get((col, p), {}).items():
                key = (z, q)
                coords[key, col] = coords.get((key, col), F(0)) + w * cz
    pairs = sorted({k for (k, _) in coords})
    index = {k: i for i, k in enumerate(pairs)}
    m = SparseMatrix(len(pairs), sl3.dim)
    for (key, col), v in coords.items():
        if v:
            m[index[key], col] = v
    assert nullity(m) == 0
    assert rank(m) == sl3.dim


def test_root_value_requires_cartan(sl2):
    with pytest.raises(ValueError):
        sl2.root_value(0, sl2.element_by_name("e"))


def test_names_resolve_with_aliases(sl2):
    assert sl2.name_to_index["e"] == sl2.name_to_index["e1"]
    assert sl2.name_to_index["h"] == sl2.name_to_index["t1"]
