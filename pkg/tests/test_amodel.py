"""Unit tests for the Catalan, dessin, and lattice recursions."""

from fractions import Fraction

import pytest

from tqftrec.amodel import (
    CatalanTable,
    LatticeTable,
    MissingBaseCaseError,
    catalan,
    default_lattice_bases,
    dessin_02,
    lattice_twisted,
    twisted_catalan,
    twisted_dessin,
)
from tqftrec.cellgraph import count_arrowed_graphs, count_lattice_points
from tqftrec.frobenius import omega_tqft, trivial_algebra
from tqftrec.groups import load_group, orbifold_frobenius


def z2_algebra():
    return orbifold_frobenius(load_group("builtin:Z2"))


def test_catalan_pinned_values():
    assert catalan(0, 1, (2,)) == 1
    assert catalan(0, 1, (4,)) == 2
    assert catalan(0, 1, (6,)) == 5
    assert catalan(1, 1, (4,)) == 1
    assert catalan(0, 3, (1, 1, 2)) == 2
    assert catalan(0, 1, (0,)) == 1
    assert catalan(1, 1, (0,)) == 0


def test_catalan_odd_total_vanishes():
    assert catalan(0, 2, (1, 2)) == 0
    assert catalan(1, 1, (5,)) == 0


def test_catalan_is_symmetric():
    table = CatalanTable(canonicalize=False)
    for mu in ((2, 4), (4, 2)):
        assert table.untwisted(0, mu) == catalan(0, 2, (2, 4))
    for mu in ((1, 2, 3), (3, 2, 1), (2, 1, 3)):
        assert table.untwisted(0, mu) == catalan(0, 3, (1, 2, 3))


def test_catalan_matches_enumeration_sample():
    for (g, mu) in [(0, (2, 2)), (0, (3, 3)), (1, (2, 2)), (0, (1, 1, 2))]:
        assert catalan(g, len(mu), mu) == count_arrowed_graphs(g, len(mu), mu)


def test_profile_validation():
    with pytest.raises(ValueError):
        catalan(-1, 1, (2,))
    with pytest.raises(ValueError):
        catalan(0, 2, (2,))
    with pytest.raises(ValueError):
        catalan(0, 1, (-2,))


def test_twisted_reduces_to_scalar_for_trivial_algebra():
    A = trivial_algebra()
    v = A.basis(0)
    for (g, mu) in [(0, (6,)), (1, (4,)), (0, (2, 4)), (2, (2,))]:
        assert twisted_catalan(g, len(mu), mu, A, [v] * len(mu)) == catalan(
            g, len(mu), mu
        )


def test_twisted_factorizes_spot():
    A = z2_algebra()
    for idx in ((0,), (1,)):
        vs = [A.basis(i) for i in idx]
        assert twisted_catalan(1, 1, (4,), A, vs) == catalan(1, 1, (4,)) * omega_tqft(
            A, 1, 1, vs
        )
    assert twisted_catalan(1, 1, (4,), A, [A.basis(0)]) == 2


def test_twisted_is_multilinear():
    A = z2_algebra()
    v = A.element([Fraction(2), Fraction(-3)])
    direct = twisted_catalan(1, 1, (4,), A, [v])
    expanded = 2 * twisted_catalan(1, 1, (4,), A, [A.basis(0)]) - 3 * twisted_catalan(
        1, 1, (4,), A, [A.basis(1)]
    )
    assert direct == expanded


def test_canonicalization_flag_agrees():
    A = z2_algebra()
    plain = CatalanTable(A, canonicalize=False)
    canon = CatalanTable(A)
    for mu in ((2, 4), (4, 2)):
        for idx in ((0, 1), (1, 0), (1, 1)):
            vs = [A.basis(i) for i in idx]
            assert plain.twisted(0, mu, vs) == canon.twisted(0, mu, vs)


def test_dessin_02_convention():
    assert dessin_02(1, 1) == count_arrowed_graphs(0, 2, (1, 1))
    assert dessin_02(2, 2) == Fraction(count_arrowed_graphs(0, 2, (2, 2)), 4)
    with pytest.raises(ValueError):
        dessin_02(0, 1)


def test_twisted_dessin_divides_by_degrees():
    A = z2_algebra()
    vs = [A.basis(0)]
    assert twisted_dessin(1, 1, (4,), A, vs) == twisted_catalan(
        1, 1, (4,), A, vs
    ) / 4


def test_lattice_pinned_values():
    A = trivial_algebra()
    v = A.basis(0)
    assert lattice_twisted(1, 1, (4,), A, [v]) == Fraction(1, 4)
    assert lattice_twisted(1, 1, (6,), A, [v]) == Fraction(2, 3)
    assert lattice_twisted(0, 3, (1, 1, 2), A, [v] * 3) == 1


def test_lattice_matches_catalog():
    A = trivial_algebra()
    v = A.basis(0)
    for mu in ((2,), (4,), (6,), (8,)):
        assert lattice_twisted(1, 1, mu, A, [v]) == count_lattice_points(1, 1, mu)
    for mu in ((1, 1, 2), (2, 2, 2), (1, 2, 3)):
        assert lattice_twisted(0, 3, mu, A, [v] * 3) == count_lattice_points(0, 3, mu)


def test_lattice_missing_base_case():
    A = trivial_algebra()
    table = LatticeTable(A, base_cases={}, canonicalize=True)
    # remove the shipped (0,2) base and force the recursion to need it
    table.base_cases.pop((0, 2))
    with pytest.raises(MissingBaseCaseError):
        table.value(0, (1, 1, 2), [A.basis(0)] * 3)


def test_default_lattice_base_is_delta_over_length():
    base = default_lattice_bases()[(0, 2)]
    assert base((3, 3)) == Fraction(1, 3)
    assert base((3, 4)) == 0


def test_table_export_round_trip():
    table = CatalanTable()
    table.untwisted(0, (4,))
    data = table.to_json()
    fresh = CatalanTable()
    assert fresh.load_scalar_entries(data) >= 1
    assert fresh.untwisted(0, (4,)) == 2
    csv_text = table.to_csv()
    assert csv_text.splitlines()[0] == "g,n,mu,decor,value"
