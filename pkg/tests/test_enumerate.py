import itertools
import random

import numpy as np
import pytest

import oracles
from partsemi import core
from partsemi.core import BudgetExceeded, Family, Product, domain_data, in_family, inverse
from partsemi.enumerate import (
    GeneratorSet,
    check_single_generators,
    check_inverse_item_generation,
    check_irreducibility,
    check_maximal_subsemigroups,
    check_rank_factorization,
    closure,
    closure_idx,
    double_coset,
    enumerate_family,
    family_elements,
    is_closed_idx,
    maximal_item_sets,
    maximal_subsemigroups_bruteforce,
    resolve_family,
    set_partitions,
)
from partsemi.universe import EquivRelation

# -- family sizes ---------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pistar_sizes(n):
    assert len(family_elements(Family.PISTAR, n)) == oracles.size_pistar(n)


def test_pistar_small_sizes():
    assert len(family_elements(Family.PISTAR, 1)) == 2
    assert len(family_elements(Family.PISTAR, 2)) == 12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_istar_sizes(n):
    assert len(family_elements(Family.ISTAR, n)) == oracles.size_istar(n)
    assert len(family_elements(Family.ISTAR, 3)) == 25


@pytest.mark.parametrize("n", [1, 2, 3])
def test_other_sizes(n):
    assert len(family_elements(Family.C, n)) == oracles.bell(2 * n)
    assert len(family_elements(Family.I, n)) == oracles.size_partial_injections(n)
    assert len(family_elements(Family.S, n)) == len(core.permutations(n))


@pytest.mark.parametrize("family", list(Family))
def test_elements_distinct_and_in_family(family):
    elems = family_elements(family, 3)
    assert len(set(elems)) == len(elems)
    assert all(in_family(a, family) for a in elems)


def test_pistar3_matches_brute_force_filter():
    # keep the bipartitions of 6 points whose blocks are points or generalised lines
    pts = [1, 2, 3, -1, -2, -3]
    found = set()
    for part in oracles.all_set_partitions(pts):
        a = core.from_blocks([list(b) for b in part], 3)
        if in_family(a, Family.PISTAR):
            found.add(a)
    assert found == set(family_elements(Family.PISTAR, 3))


def test_set_partitions():
    assert len(list(set_partitions(range(4)))) == 15
    assert list(set_partitions([])) == [[]]


def test_resolve_family():
    assert resolve_family("wpistar") == (Family.PISTAR, Product.CIRC)
    assert resolve_family("istar") == (Family.ISTAR, Product.NATURAL)
    with pytest.raises(ValueError):
        resolve_family("nope")


def test_degree_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_family("pistar", 9)
    with pytest.raises(BudgetExceeded):
        enumerate_family("pistar", 0)


# -- closure --------------------------------------------------------------


def test_closure_of_identity():
    u = closure(GeneratorSet(Product.STAR, [core.identity(3)]))
    assert u.elements == [core.identity(3)]


@pytest.mark.parametrize("n", [2, 3])
def test_pistar_generated_by_units_and_gamma(n):
    g = core.gamma_xy(n, 1, 2)
    u = closure(GeneratorSet(Product.STAR, core.permutations(n) + [g, inverse(g)]))
    assert set(u.elements) == set(family_elements(Family.PISTAR, n))


def test_istar3_generated_by_units_and_xi():
    u = closure(GeneratorSet(Product.NATURAL, core.permutations(3) + [core.xi_xyz(3, 1, 2, 3)]))
    assert len(u) == 25
    assert set(u.elements) == set(family_elements(Family.ISTAR, 3))


def test_closure_with_inverses():
    g = core.gamma_xy(3, 1, 2)
    u = closure(GeneratorSet(Product.STAR, core.permutations(3) + [g], with_inverses=True))
    assert len(u) == 128


def test_closure_is_closed():
    u = closure(GeneratorSet(Product.STAR, [core.gamma_xy(3, 1, 2), core.perm([2, 3, 1])]))
    members = set(u.elements)
    assert all(u.mul(a, b) in members for a in u.elements for b in u.elements)


def test_closure_budget():
    g = core.gamma_xy(3, 1, 2)
    with pytest.raises(BudgetExceeded):
        closure(GeneratorSet(Product.STAR, core.permutations(3) + [g, inverse(g)]), budget=50)


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet(Product.STAR, [])
    with pytest.raises(core.DegreeMismatch):
        GeneratorSet(Product.STAR, [core.identity(2), core.identity(3)])
    with pytest.raises(core.FamilyError):
        GeneratorSet(Product.STAR, [core.parse("[[1,2],[-1,-2]]")])


def test_closure_idx_is_monotone_and_idempotent():
    u = enumerate_family("pistar", 3)
    t = u.table
    rng = random.Random(7)
    for _ in range(40):
        A = set(rng.sample(range(len(u)), 3))
        B = A | set(rng.sample(range(len(u)), 2))
        cA, cB = closure_idx(t, A), closure_idx(t, B)
        assert cA[sorted(A)].all()
        assert not (cA & ~cB).any()
        assert (closure_idx(t, np.flatnonzero(cA)) == cA).all()
        assert is_closed_idx(t, np.flatnonzero(cA))


def test_double_coset():
    n = 3
    a = core.alpha_x(n, 1)
    perms = core.permutations(n)
    expected = {core.star_mul(core.star_mul(p, a), q) for p in perms for q in perms}
    assert double_coset(a, n) == expected
    # one point on each row, with a matching of the other two
    assert len(expected) == 3 * 3 * 2
    assert {core.alpha_x(n, x) for x in (1, 2, 3)} <= expected


# -- generation and maximality -------------------------------------------


def test_rank_factorization_examples():
    n = 3
    g23 = core.gamma_xy(n, 2, 3)
    assert core.gamma_xy(n, 1, 2) in double_coset(g23, n)
    a2 = core.alpha_x(n, 2)
    t = core.perm([2, 1, 3])
    assert core.star_mul(core.star_mul(t, a2), t) == core.alpha_x(n, 1)


@pytest.mark.parametrize("n", [3, 4])
def test_rank_factorization(n):
    v = check_rank_factorization(n)
    assert v.ok
    assert v.details["checked"] == sum(1 for a in family_elements(Family.PISTAR, n) if a.rank == n - 1)


@pytest.mark.parametrize("n, closure_size, item1", [(3, 104, 110), (4, 1690, 1956)])
def test_irreducibility(n, closure_size, item1):
    v = check_irreducibility(n)
    assert v.ok
    assert v.details["closure_size"] == closure_size
    assert v.details["item1_size"] == item1
    assert v.details["gamma_inside"] and v.details["gamma_inv_outside"]


def test_single_generators():
    v = check_single_generators(3)
    assert v.ok
    assert v.details["checked"] == 122
    assert v.details["generating"] == v.details["predicted"] == 36


def _generates(n, u):
    els = core.permutations(n) + [u]
    return len(closure(GeneratorSet(Product.STAR, els, with_inverses=True))) == oracles.size_pistar(n)


def test_generating_examples():
    assert _generates(3, core.gamma_xy(3, 1, 2))
    assert not _generates(3, core.xi_xyz(3, 1, 2, 3))
    assert not _generates(3, core.alpha_x(3, 1))
    xi_closure = closure(GeneratorSet(Product.STAR, core.permutations(3) + [core.xi_xyz(3, 1, 2, 3)], with_inverses=True))
    assert all(in_family(a, Family.ISTAR) for a in xi_closure.elements)


def test_maximal_subsemigroups():
    v = check_maximal_subsemigroups(3)
    assert v.ok
    assert v.details["items"]["item1"]["size"] == 110
    assert all(item["maximal"] for item in v.details["inverse_items"].values())


def test_adding_gamma_inverse_to_item1_regenerates():
    items, _ = maximal_item_sets(3)
    gens = sorted(items["item1"]) + [inverse(core.gamma_xy(3, 1, 2))]
    assert len(closure(GeneratorSet(Product.STAR, gens))) == 128


def test_maximal_bruteforce_on_pistar1_and_istar2():
    u = enumerate_family("pistar", 1)
    # PI*_1 = {id, 0}: both singletons are maximal
    assert sorted(maximal_subsemigroups_bruteforce(u), key=sorted) == [frozenset({0}), frozenset({1})]
    u = enumerate_family("istar", 2)
    found = maximal_subsemigroups_bruteforce(u)
    # I*_2 = {τ_N, id, (12)}: maximal subsemigroups are {τ_N, id} and {id, (12)}
    assert sorted(len(m) for m in found) == [2, 2]


@pytest.mark.parametrize("n, generated, item", [(3, 80, 92), (4, 1280, 1812)])
def test_inverse_item_is_not_generated_by_istar_and_i(n, generated, item):
    v = check_inverse_item_generation(n)
    assert not v.ok
    d = v.details
    assert (d["generated_size"], d["item_size"]) == (generated, item)
    assert d["generated_inside_item"] and d["gap_is_one_sided_points"]


def test_points_on_both_rows_or_neither_is_preserved():
    gens = family_elements(Family.ISTAR, 3) + family_elements(Family.I, 3)
    for a, b in itertools.product(gens, gens):
        d = domain_data(core.star_mul(a, b))
        assert bool(d.codom) == bool(d.coran)


# -- equivalence relations ------------------------------------------------


def test_equiv_relation_operations():
    a = EquivRelation.from_labels("aabbc")
    b = EquivRelation.from_labels("xyyzz")
    assert a.num_classes == 3 and a.class_sizes() == [2, 2, 1]
    assert a.meet(b) == EquivRelation.identity(5)
    assert a.join(b) == EquivRelation.universal(5)
    assert EquivRelation.identity(5).refines(a) and not a.refines(b)
    assert EquivRelation.from_classes([[0, 4]], 5).related(0, 4)
    assert a.restrict([0, 1, 4]) == EquivRelation.from_labels("aab")


def test_equiv_relation_congruence_check():
    u = enumerate_family("istar", 2)
    assert EquivRelation.identity(3).is_congruence(u.table)
    assert EquivRelation.universal(3).is_congruence(u.table)
    units = [u.index[p] for p in core.permutations(2)]
    assert EquivRelation.from_classes([units], 3).is_congruence(u.table)
    zero = u.index[core.tau_Y(2, {1, 2})]
    assert not EquivRelation.from_classes([[zero, units[0]]], 3).is_congruence(u.table)
