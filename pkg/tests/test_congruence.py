import itertools
import random
from math import comb

import numpy as np
import pytest

from partsemi import congruence, core, green, groups
from partsemi.congruence import CongruencePair, RhoSpec
from partsemi.core import Family, Product
from partsemi.enumerate import closure_idx, enumerate_family, family_elements, set_partitions
from partsemi.universe import EquivRelation, SemigroupUniverse


def universe(kind, n):
    return enumerate_family(kind, n)


def brute_congruences(u):
    """Every equivalence that is left and right compatible, checked pair by pair."""
    size = len(u)
    t = u.table
    out = set()
    for part in set_partitions(range(size)):
        rel = EquivRelation.from_classes(part, size)
        ok = all(
            rel.related(int(t[a, s]), int(t[b, s])) and rel.related(int(t[s, a]), int(t[s, b]))
            for cl in part
            for a, b in itertools.combinations(cl, 2)
            for s in range(size)
        )
        if ok:
            out.add(rel)
    return out


def all_subsets(size):
    for mask in range(1, 1 << size):
        yield frozenset(i for i in range(size) if mask >> i & 1)


def closed(t, T):
    return all(int(t[a, b]) in T for a in T for b in T)


def brute_completely_isolated(u):
    t = u.table
    return {
        T
        for T in all_subsets(len(u))
        if closed(t, T) and all(a in T or b in T for a in range(len(u)) for b in range(len(u)) if int(t[a, b]) in T)
    }


def brute_isolated(u):
    t = u.table
    powers = {}
    for a in range(len(u)):
        seen, x = [], a
        while x not in seen:
            seen.append(x)
            x = int(t[x, a])
        powers[a] = seen
    return {T for T in all_subsets(len(u)) if closed(t, T) and all(a in T for a in range(len(u)) if set(powers[a]) & T)}


SMALL = [("istar", 2), ("pistar", 1), ("i", 2), ("s", 3)]


# -- lattice --------------------------------------------------------------


def test_two_element_semilattice():
    u = SemigroupUniverse([core.identity(1), core.zero(1)], Product.STAR)
    assert len(congruence.enumerate_congruences(u)) == 2


@pytest.mark.parametrize("kind, n", SMALL)
def test_lattice_matches_brute_force(kind, n):
    u = universe(kind, n)
    assert set(congruence.enumerate_congruences(u)) == brute_congruences(u)


def test_istar2_has_three_congruences():
    u = universe("istar", 2)
    lattice = congruence.enumerate_congruences(u)
    assert len(lattice) == 3
    units = [u.index[p] for p in core.permutations(2)]
    assert set(lattice) == {
        EquivRelation.identity(3),
        EquivRelation.from_classes([units], 3),
        EquivRelation.universal(3),
    }


@pytest.mark.parametrize("kind, n", [("istar", 3), ("pistar", 2), ("wpistar", 2)])
def test_lattice_closed_under_meet_and_join(kind, n):
    u = universe(kind, n)
    lattice = set(congruence.enumerate_congruences(u))
    size = len(u)
    assert EquivRelation.identity(size) in lattice and EquivRelation.universal(size) in lattice
    for a, b in itertools.combinations(lattice, 2):
        assert a.join(b) in lattice
        assert a.meet(b) in lattice
    assert all(r.is_congruence(u.table) for r in lattice)


def test_pistar2_and_wpistar2_lattices_coincide():
    v = congruence.check_coincidence(universe("pistar", 2), universe("wpistar", 2))
    assert v.ok and v.details["sizes"] == [4, 4]


def test_coincidence_needs_same_order():
    with pytest.raises(ValueError):
        congruence.check_coincidence(universe("pistar", 2), universe("istar", 2))


def test_enumeration_budget():
    with pytest.raises(core.BudgetExceeded):
        congruence.enumerate_congruences(universe("pistar", 3), budget=100)


def test_generating_set_generates():
    for kind, n in [("pistar", 3), ("wpistar", 3), ("istar", 3)]:
        u = universe(kind, n)
        assert closure_idx(u.table, congruence.generating_set(u)).all()


# -- ρ_{k,A} ---------------------------------------------------------------


def spec(k, A):
    return RhoSpec(k, frozenset(A))


def test_rho_examples_on_istar2():
    u = universe("istar", 2)
    # k = n: universal for every normal A of S_{n+1}
    for A in groups.normal_subgroups(3):
        assert congruence.build_rho(u, RhoSpec(2, A)) == EquivRelation.universal(3)
    assert congruence.build_rho(u, spec(1, [groups.identity(2)])) == EquivRelation.identity(3)
    units = [u.index[p] for p in core.permutations(2)]
    assert congruence.build_rho(u, spec(1, groups.symmetric_group(2))) == EquivRelation.from_classes([units], 3)


def test_rho_spec_rejects_non_normal():
    with pytest.raises(ValueError):
        spec(2, [groups.identity(3), (1, 0, 2)])
    with pytest.raises(ValueError):
        spec(1, [groups.identity(3)])


def test_rho_family_counts():
    assert len(congruence.rho_family(universe("istar", 2), Family.ISTAR)) == 3
    assert len(congruence.rho_family(universe("istar", 3), Family.ISTAR)) == 6
    assert len(congruence.rho_family(universe("pistar", 2), Family.PISTAR)) == 4


@pytest.mark.parametrize("kind, n, family, count", [
    ("istar", 2, Family.ISTAR, 3),
    ("istar", 3, Family.ISTAR, 6),
    ("pistar", 2, Family.PISTAR, 4),
])
def test_rho_classification(kind, n, family, count):
    v = congruence.check_rho_classification(universe(kind, n), family)
    assert v.ok and v.details["lattice_size"] == count


def test_istar3_class_counts():
    v = congruence.check_rho_classification(universe("istar", 3), Family.ISTAR)
    assert v.details["class_counts"] == [1, 2, 3, 7, 16, 25]


def test_every_rho_is_a_congruence():
    u = universe("pistar", 2)
    for rho in congruence.rho_family(u, Family.PISTAR):
        assert rho.is_congruence(u.table)


# -- congruence pairs and Λ -----------------------------------------------


@pytest.mark.parametrize("kind, n", [("istar", 2), ("istar", 3), ("pistar", 2)])
def test_pairs_rebuild_their_congruences(kind, n):
    u = universe(kind, n)
    for rho in congruence.enumerate_congruences(u):
        pair = CongruencePair.of(u, rho)
        assert pair.is_pair(u)
        assert pair.relation(u) == rho


def test_bad_pair_is_rejected():
    u = universe("istar", 2)
    idem = u.idempotents
    # K = E only, but Λ glues all idempotents: τ_N·(12) = τ_N ∈ K while (12) ∉ K
    pair = CongruencePair(frozenset(idem), EquivRelation.universal(len(idem)))
    assert not pair.is_pair(u)


@pytest.mark.parametrize("kind, n, family", [
    ("istar", 2, Family.ISTAR), ("istar", 3, Family.ISTAR),
    ("pistar", 2, Family.PISTAR), ("pistar", 3, Family.PISTAR),
])
def test_lambda_classification(kind, n, family):
    v = congruence.check_lambda_classification(universe(kind, n), family)
    assert v.ok


def test_normal_congruences_on_E_of_istar3():
    u = universe("istar", 3)
    idem, found = congruence.normal_congruences_on_E(u)
    assert len(idem) == 5 and len(found) == 3


# -- completely isolated --------------------------------------------------


@pytest.mark.parametrize("kind, n", [("istar", 2), ("pistar", 2), ("wpistar", 2), ("i", 2)])
def test_completely_isolated_matches_brute_force(kind, n):
    u = universe(kind, n)
    assert set(congruence.completely_isolated(u)) == brute_completely_isolated(u)


@pytest.mark.parametrize("kind, n", [("istar", 3), ("pistar", 2), ("pistar", 3), ("wpistar", 2), ("wpistar", 3)])
def test_completely_isolated_are_the_three(kind, n):
    u = universe(kind, n)
    found = congruence.completely_isolated(u)
    assert set(found) == congruence.expected_completely_isolated(u)
    assert congruence.units_split_check(u, found).ok


def test_permutation_part_is_completely_isolated():
    u = universe("wpistar", 3)
    G = congruence.permutation_part(u)
    assert len(G) == 6 and congruence.is_completely_isolated(u, G)


# -- isolated -------------------------------------------------------------


@pytest.mark.parametrize("kind, n", [("istar", 2), ("pistar", 2), ("wpistar", 2), ("i", 2)])
def test_isolated_matches_brute_force(kind, n):
    u = universe(kind, n)
    assert set(congruence.isolated(u)) == brute_isolated(u)


@pytest.mark.parametrize("kind, n", [("istar", 2), ("istar", 3), ("pistar", 2), ("wpistar", 2), ("wpistar", 3)])
def test_completely_isolated_are_isolated(kind, n):
    u = universe(kind, n)
    assert set(congruence.completely_isolated(u)) <= set(congruence.isolated(u))


def test_isolated_istar3():
    u = universe("istar", 3)
    found = set(congruence.isolated(u))
    assert len(found) == 3 + comb(3, 2)
    assert found == congruence.expected_isolated(u, "istar")


@pytest.mark.parametrize("n, count", [(2, 6), (3, 13)])
def test_isolated_wpistar(n, count):
    u = universe("wpistar", n)
    found = set(congruence.isolated(u))
    assert found == congruence.expected_isolated(u, "wpistar") and len(found) == count
    for e in u.idempotents:
        if congruence._corank(u.elements[e]) <= 1:
            assert green.subgroup_G(u, u.elements[e]) in found


def test_listed_groups_are_isolated_groups():
    u = universe("istar", 3)
    t = u.table
    powers = congruence.power_matrix(t)
    for e in u.idempotents:
        if u.elements[e].rank != 2:
            continue
        G = green.subgroup_G(u, u.elements[e])
        assert G == green.h_class(u, e) and green.is_group(u, G)
        for a in range(len(u)):
            if a not in G:
                assert not any(powers[a, x] for x in G)


def test_closure_operator_properties():
    u = universe("pistar", 3)
    cl = congruence.IsolatedClosure(u)
    rng = random.Random(2024)
    size = len(u)
    for _ in range(30):
        A = np.zeros(size, dtype=bool)
        A[rng.sample(range(size), rng.randint(1, 4))] = True
        B = A.copy()
        B[rng.sample(range(size), 3)] = True
        cA, cB = cl(A), cl(B)
        assert (cA | A == cA).all()  # extensive
        assert (cl(cA) == cA).all()  # idempotent
        assert not (cA & ~cB).any()  # monotone
        assert congruence.is_isolated(u, set(np.flatnonzero(cA).tolist()))


def test_units_split_on_istar3():
    u = universe("istar", 3)
    assert congruence.units_split_check(u, congruence.completely_isolated(u)).ok
    # the pairing is about completely isolated lists; the isolated list has groups G(e) with G(e) ∪ S_3 not isolated
    assert not congruence.units_split_check(u, congruence.isolated(u)).ok


def test_istar_minus_point_is_istar2_copy():
    u = universe("pistar", 3)
    sub = congruence._istar_minus_point(u, 3)
    assert len(sub) == len(family_elements(Family.ISTAR, 2))
    for i in sub:
        assert core.restrict(u.elements[i], {1, 2}) in family_elements(Family.ISTAR, 2)
