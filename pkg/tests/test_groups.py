"""Unit tests for finite groups, conjugacy data, and the brute-force oracle."""

from fractions import Fraction

import pytest

from tqftrec.exact import BudgetError
from tqftrec.groups import (
    BUILTIN_GROUPS,
    GroupAxiomError,
    conjugacy,
    group_from_permutations,
    load_group,
    omega_brute,
    orbifold_frobenius,
)


def test_builtin_catalog():
    assert set(BUILTIN_GROUPS) == {
        "trivial", "Z2", "Z3", "Z4", "Z2xZ2", "S3", "Q8"
    }
    for name in BUILTIN_GROUPS:
        G = load_group("builtin:" + name)
        assert G.order >= 1


def test_unknown_builtin_rejected():
    with pytest.raises((KeyError, ValueError)):
        load_group("builtin:nosuch")


def test_group_from_permutation_generators():
    G = group_from_permutations(["(1 2)", "(1 2 3)"])
    assert G.order == 6
    cd = conjugacy(G)
    assert len(cd.classes) == 3
    assert sorted(len(c) for c in cd.classes) == [1, 2, 3]


def test_bad_cayley_table_rejected():
    # not a latin square: no inverses
    with pytest.raises(GroupAxiomError):
        load_group({"order": 2, "table": [[0, 0], [0, 0]]})


def test_s3_conjugacy_data():
    G = load_group("builtin:S3")
    cd = conjugacy(G)
    assert len(cd.classes) == 3
    # centralizer orders multiply with class sizes to the group order
    for idx, cls in enumerate(cd.classes):
        assert len(cls) * cd.centralizer_orders[idx] == G.order
    # identity class is named "1" and is self-inverse
    assert cd.class_names[0] == "[1]"
    assert cd.inverse_class[0] == 0


def test_q8_has_five_classes():
    cd = conjugacy(load_group("builtin:Q8"))
    assert len(cd.classes) == 5
    assert sorted(cd.centralizer_orders, reverse=True) == [8, 8, 4, 4, 4]


def test_orbifold_pairing_matches_centralizers():
    G = load_group("builtin:S3")
    cd = conjugacy(G)
    A = orbifold_frobenius(G, cd)
    for i in range(A.dim):
        for j in range(A.dim):
            expected = (
                Fraction(1, cd.centralizer_orders[i])
                if cd.inverse_class[i] == j
                else Fraction(0)
            )
            assert A.pairing[i][j] == expected


def test_omega_brute_pinned_values():
    G = load_group("builtin:Z2")
    # genus 1, one puncture at the identity class: counts pairs with
    # [a,b] = 1 over |G|, times class weights
    assert omega_brute(G, 1, (0,)) == 2
    T = load_group("builtin:trivial")
    assert omega_brute(T, 0, (0,)) == 1
    assert omega_brute(T, 3, (0,)) == 1


def test_omega_brute_budget_gate():
    G = load_group("builtin:Q8")
    with pytest.raises(BudgetError):
        omega_brute(G, 2, (0, 0, 0), budget=100)


def test_formula_equals_brute_spot_checks():
    from tqftrec.frobenius import omega_tqft

    G = load_group("builtin:S3")
    cd = conjugacy(G)
    A = orbifold_frobenius(G, cd)
    for g in (0, 1):
        for idx in ((0,), (1,), (2,)):
            vs = [A.basis(i) for i in idx]
            assert omega_tqft(A, g, 1, vs) == omega_brute(G, g, idx, cd=cd)
