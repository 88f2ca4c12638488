"""Congruences, congruence pairs and (completely) isolated subsemigroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import groups
from .core import BudgetExceeded, Family, in_family
from .enumerate import closure_idx
from .green import subgroup_G
from .universe import EquivRelation, Verdict

CONGRUENCE_BUDGET = 200
SEARCH_BUDGET = 200_000


# -- generators -----------------------------------------------------------


def generating_set(u):
    """A small generating set picked greedily: largest rank first, then canonical order."""
    table = u.table
    order = sorted(range(len(u)), key=lambda i: (-u.elements[i].rank, u.elements[i].sort_key()))
    mask = np.zeros(len(u), dtype=bool)
    gens = []
    for i in order:
        if mask[i]:
            continue
        gens.append(i)
        mask = closure_idx(table, gens)
        if mask.all():
            break
    return gens


# -- congruence lattice ---------------------------------------------------


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        a, b = self.find(x), self.find(y)
        if a == b:
            return False
        self.parent[max(a, b)] = min(a, b)
        return True


def principal_congruence(table, gens, a, b):
    """Smallest congruence relating ``a`` and ``b``.

    Each merged edge is pushed through left and right translation by the
    generators; the equivalence closure of a translation-stable edge set is
    a congruence.
    """
    size = table.shape[0]
    uf = _UnionFind(size)
    if not uf.union(a, b):
        return EquivRelation.identity(size)
    edges = [(a, b)]
    while edges:
        x, y = edges.pop()
        for g in gens:
            for p, q in ((table[x, g], table[y, g]), (table[g, x], table[g, y])):
                p, q = int(p), int(q)
                if uf.union(p, q):
                    edges.append((p, q))
    return EquivRelation.from_labels([uf.find(i) for i in range(size)])


def enumerate_congruences(u, budget=CONGRUENCE_BUDGET, gens=None):
    """Every congruence of ``u``: principal ones, closed under joins, plus ι."""
    size = len(u)
    if size > budget:
        raise BudgetExceeded(f"congruence enumeration limited to {budget} elements, got {size}")
    table = u.table
    gens = generating_set(u) if gens is None else list(gens)
    principal = set()
    for a, b in itertools.combinations(range(size), 2):
        principal.add(principal_congruence(table, gens, a, b))
    lattice = set(principal)
    frontier = list(principal)
    while frontier:
        nxt = []
        for x in frontier:
            for p in principal:
                j = x.join(p)
                if j not in lattice:
                    lattice.add(j)
                    nxt.append(j)
        frontier = nxt
    lattice.add(EquivRelation.identity(size))
    return sorted(lattice, key=lambda r: (r.num_classes * -1, r.ids))


def congruences_of_subsemigroup(u, indices):
    """Congruences of the subsemigroup on ``indices`` (used for the idempotents)."""
    idx = sorted(indices)
    pos = {v: k for k, v in enumerate(idx)}
    sub = u.table[np.ix_(idx, idx)]
    local = np.vectorize(pos.__getitem__)(sub).astype(np.int32)
    size = len(idx)
    principal = {principal_congruence(local, range(size), a, b) for a, b in itertools.combinations(range(size), 2)}
    lattice = set(principal)
    frontier = list(principal)
    while frontier:
        nxt = []
        for x in frontier:
            for p in principal:
                j = x.join(p)
                if j not in lattice:
                    lattice.add(j)
                    nxt.append(j)
        frontier = nxt
    lattice.add(EquivRelation.identity(size))
    return idx, lattice


# -- ρ_{k,A} ---------------------------------------------------------------


@dataclass(frozen=True)
class RhoSpec:
    """Glue everything of rank <= k and refine rank k+1 by A ⊴ S_{k+1}."""

    k: int
    A: frozenset

    def __post_init__(self):
        m = self.k + 1
        if not self.A or any(len(p) != m for p in self.A):
            raise ValueError(f"A must be a set of permutations of {m} points")
        if not (groups.is_subgroup(self.A, m) and groups.is_normal(self.A, m)):
            raise ValueError(f"A is not a normal subgroup of S_{m}")


def rho_specs(n, family):
    """All (k, A). For PI* we also allow k = 0, which gives ι."""
    lo = 0 if family is Family.PISTAR else 1
    out = []
    for k in range(lo, n + 1):
        m = k + 1
        normals = groups.hardcoded_normal_subgroups(m) if m <= 4 else groups.normal_subgroups(m)
        out.extend(RhoSpec(k, A) for A in normals)
    return out


def block_permutation(e, x):
    """For x in the H-class of idempotent e: the permutation of e's lines that x induces."""
    tops = sorted((sorted(t) for t, _ in e.lines()))
    index = {frozenset(t): i for i, t in enumerate(tops)}
    images = [0] * len(tops)
    for top, bot in x.lines():
        images[index[top]] = index[bot]
    return tuple(images)


def normal_part(u, spec):
    """N_{k+1}(A): group elements of rank k+1 whose line permutation lies in A."""
    out = set()
    inv = u.inverses
    for i, x in enumerate(u.elements):
        if x.rank != spec.k + 1:
            continue
        e = u.mul_idx(i, int(inv[i]))
        # x is a group element iff x x⁻¹ = x⁻¹ x
        if e != u.mul_idx(int(inv[i]), i):
            continue
        if block_permutation(u.elements[e], x) in spec.A:
            out.add(i)
    return out


def build_rho(u, spec):
    """ρ_{k,A} = ι ∪ F_k(A) ∪ (rank<=k)²; verified to be a congruence."""
    n = u.degree
    if not 0 <= spec.k <= n:
        raise ValueError(f"k must lie in 0..{n}")
    inv = u.inverses
    ranks = u.ranks
    N = normal_part(u, spec)
    labels = list(range(len(u)))
    low = [i for i in range(len(u)) if ranks[i] <= spec.k]
    for i in low:
        labels[i] = -1
    # F_k(A): x H y and x y⁻¹ ∈ N
    top = [i for i in range(len(u)) if ranks[i] == spec.k + 1]
    uf = _UnionFind(len(u))
    for x, y in itertools.combinations(top, 2):
        if u.mul_idx(x, int(inv[x])) != u.mul_idx(y, int(inv[y])):
            continue
        if u.mul_idx(int(inv[x]), x) != u.mul_idx(int(inv[y]), y):
            continue
        if u.mul_idx(x, int(inv[y])) in N:
            uf.union(x, y)
    for i in top:
        labels[i] = len(u) + uf.find(i)
    rho = EquivRelation.from_labels(labels)
    if not rho.is_congruence(u.table):
        raise AssertionError(f"ρ for k={spec.k}, |A|={len(spec.A)} is not a congruence")
    return rho


def rho_family(u, family):
    """Distinct ρ_{k,A}, each with the specs that produce it."""
    out = {}
    for spec in rho_specs(u.degree, family):
        out.setdefault(build_rho(u, spec), []).append(spec)
    return out


# -- normal congruences on E and congruence pairs ---------------------------


def is_normal_on_E(u, idem, rel):
    """eΛf implies s⁻¹es Λ s⁻¹fs for every s (rel indexed like ``idem``)."""
    table, inv = u.table, u.inverses
    pos = {v: k for k, v in enumerate(idem)}
    idem_arr = np.array(idem)
    for s in range(len(u)):
        conj = table[table[int(inv[s]), idem_arr], s]
        image = [rel.ids[pos[int(c)]] for c in conj]
        if not EquivRelation.from_labels(list(zip(rel.ids, image))).num_classes == rel.num_classes:
            return False
    return True


def normal_congruences_on_E(u):
    idem, lattice = congruences_of_subsemigroup(u, u.idempotents)
    return idem, [r for r in lattice if is_normal_on_E(u, idem, r)]


def expected_lambdas(u, family):
    """ι ∪ (E^(k) × E^(k)), k in 1..n (0..n for PI*)."""
    idem = u.idempotents
    ranks = u.ranks
    lo = 0 if family is Family.PISTAR else 1
    out = set()
    for k in range(lo, u.degree + 1):
        labels = [-1 if ranks[e] <= k else e for e in idem]
        out.add(EquivRelation.from_labels(labels))
    return idem, out


@dataclass(frozen=True)
class CongruencePair:
    K: frozenset
    Lambda: EquivRelation  # indexed like u.idempotents

    @classmethod
    def of(cls, u, rho):
        """Kernel (classes meeting E) and trace (ρ restricted to E)."""
        idem = u.idempotents
        classes = {rho.ids[e] for e in idem}
        K = frozenset(i for i in range(len(u)) if rho.ids[i] in classes)
        return cls(K, rho.restrict(idem))

    def relation(self, u):
        """ρ_(K,Λ): a ~ b iff a⁻¹a Λ b⁻¹b and ab⁻¹ ∈ K."""
        inv = u.inverses
        pos = {v: k for k, v in enumerate(u.idempotents)}
        lam = self.Lambda.ids
        size = len(u)
        uf = _UnionFind(size)
        right = [lam[pos[u.mul_idx(int(inv[a]), a)]] for a in range(size)]
        for a, b in itertools.combinations(range(size), 2):
            if right[a] == right[b] and u.mul_idx(a, int(inv[b])) in self.K:
                uf.union(a, b)
        return EquivRelation.from_labels([uf.find(i) for i in range(size)])

    def is_pair(self, u):
        table, inv = u.table, u.inverses
        idem = u.idempotents
        pos = {v: k for k, v in enumerate(idem)}
        lam = self.Lambda
        if not set(idem) <= self.K:
            return False
        for s in range(len(u)):
            if any(int(table[table[int(inv[s]), k], s]) not in self.K for k in self.K):
                return False
        if not is_normal_on_E(u, idem, lam):
            return False
        for a in range(len(u)):
            ra = pos[u.mul_idx(int(inv[a]), a)]
            if a in self.K:
                continue
            for e in idem:
                if lam.related(pos[e], ra) and u.mul_idx(a, e) in self.K:
                    return False
        for k in self.K:
            if not lam.related(pos[u.mul_idx(k, int(inv[k]))], pos[u.mul_idx(int(inv[k]), k)]):
                return False
        return True


def check_rho_classification(u, family):
    """Brute-force lattice equals the deduplicated ρ_{k,A} family."""
    lattice = set(enumerate_congruences(u))
    rhos = rho_family(u, family)
    missing = [r for r in lattice if r not in rhos]
    extra = [r for r in rhos if r not in lattice]
    pairs_ok = all(
        CongruencePair.of(u, r).relation(u) == r and CongruencePair.of(u, r).is_pair(u) for r in lattice
    )
    return Verdict(
        f"congruences of {u.name}",
        not missing and not extra and pairs_ok,
        {
            "lattice_size": len(lattice),
            "rho_count": len(rhos),
            "specs": len(rho_specs(u.degree, family)),
            "class_counts": sorted(r.num_classes for r in lattice),
            "pairs_ok": pairs_ok,
        },
        [r.class_sizes() for r in missing + extra],
    )


def check_lambda_classification(u, family):
    idem, found = normal_congruences_on_E(u)
    _, expected = expected_lambdas(u, family)
    return Verdict(
        f"normal congruences on E({u.name})",
        set(found) == expected,
        {"idempotents": len(idem), "normal_congruences": len(found), "expected": len(expected)},
    )


def check_coincidence(u, w):
    """The congruence lattices of two multiplications on one carrier coincide."""
    if u.elements != w.elements:
        raise ValueError("universes must share the element order")
    a, b = set(enumerate_congruences(u)), set(enumerate_congruences(w))
    return Verdict(
        f"{u.name} vs {w.name}",
        a == b,
        {"sizes": [len(a), len(b)], "common": len(a & b)},
    )


# -- completely isolated --------------------------------------------------


def completely_isolated(u, budget=SEARCH_BUDGET):
    """Subsemigroups T with T and S∖T both closed (S∖T may be empty).

    Two-colour backtracking: generators are decided first, and every
    assignment propagates "same colour factors force the product's colour"
    and "a product of colour c with one factor not c forces the other to c".
    """
    table = u.table
    size = len(u)
    preimages = [[] for _ in range(size)]
    for a in range(size):
        for b in range(size):
            preimages[int(table[a, b])].append((a, b))
    gens = generating_set(u)
    order = gens + [i for i in range(size) if i not in set(gens)]
    found = set()
    nodes = 0

    def assign(col, x, c):
        queue = [(x, c)]
        while queue:
            x, c = queue.pop()
            if col[x] == c:
                continue
            if col[x] != -1:
                return False
            col[x] = c
            for y in range(size):
                cy = col[y]
                for z in (int(table[x, y]), int(table[y, x])):
                    cz = col[z]
                    if cy == c:
                        queue.append((z, c))
                    if cz != -1 and cz != c:
                        queue.append((y, cz))
                    if cy != -1 and cy != c and cz != -1 and cz != c and cy != cz:
                        return False
            for a, b in preimages[x]:
                ca, cb = col[a], col[b]
                if ca != -1 and ca != c:
                    queue.append((b, c))
                if cb != -1 and cb != c:
                    queue.append((a, c))
        return True

    def search(col, pos):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"completely-isolated search exceeded {budget} nodes")
        while pos < size and col[order[pos]] != -1:
            pos += 1
        if pos == size:
            for c in (0, 1):
                T = frozenset(i for i in range(size) if col[i] == c)
                if T:
                    found.add(T)
            return
        x = order[pos]
        for c in (0, 1):
            trial = list(col)
            if assign(trial, x, c):
                search(trial, pos + 1)

    start = [-1] * size
    # colour 0 always holds the first generator, so each split is found once
    if assign(start, order[0], 0):
        search(start, 1)
    for T in found:
        assert _both_closed(table, T)
    return sorted(found, key=lambda T: (len(T), sorted(T)))


def _both_closed(table, T):
    size = table.shape[0]
    mask = np.zeros(size, dtype=bool)
    mask[list(T)] = True
    idx, rest = np.flatnonzero(mask), np.flatnonzero(~mask)
    ok = mask[table[np.ix_(idx, idx)]].all()
    if rest.size:
        ok = ok and (~mask[table[np.ix_(rest, rest)]]).all()
    return bool(ok)


def is_completely_isolated(u, T):
    return bool(T) and _both_closed(u.table, T)


def permutation_part(u):
    """Indices of the all-lines permutations.

    Under ∘ the identity diagram is not a two-sided identity (id ∘ τ = 0), so
    S_n is located by shape rather than as the table's group of units.
    """
    return _family_subset(u, Family.S)


def expected_completely_isolated(u):
    G = permutation_part(u)
    S = frozenset(range(len(u)))
    return {S, G, S - G}


# -- isolated -------------------------------------------------------------


def power_matrix(table):
    """P[a, b] is True when b = a^k for some k >= 1."""
    size = table.shape[0]
    P = np.zeros((size, size), dtype=bool)
    for a in range(size):
        x = a
        while not P[a, x]:
            P[a, x] = True
            x = int(table[x, a])
    return P


class IsolatedClosure:
    """Closure under products and roots; its closed sets are the isolated subsemigroups and ∅."""

    def __init__(self, u):
        self.table = u.table
        self.powers = power_matrix(self.table)

    def __call__(self, mask):
        mask = np.array(mask, dtype=bool)
        while True:
            idx = np.flatnonzero(mask)
            grown = mask.copy()
            if idx.size:
                grown[self.table[np.ix_(idx, idx)].ravel()] = True
                grown |= self.powers[:, grown].any(axis=1)
            if (grown == mask).all():
                return mask
            mask = grown


def isolated(u, budget=SEARCH_BUDGET):
    """Every isolated subsemigroup, by walking the lattice of closed sets from ∅."""
    cl = IsolatedClosure(u)
    size = len(u)
    empty = np.zeros(size, dtype=bool)
    seen = {frozenset()}
    frontier = [empty]
    steps = 0
    while frontier:
        nxt = []
        for mask in frontier:
            for x in np.flatnonzero(~mask):
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(f"isolated search exceeded {budget} closure steps")
                m = mask.copy()
                m[x] = True
                c = cl(m)
                key = frozenset(np.flatnonzero(c).tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(c)
        frontier = nxt
    seen.discard(frozenset())
    return sorted(seen, key=lambda T: (len(T), sorted(T)))


def is_isolated(u, T):
    if not T:
        return False
    mask = np.zeros(len(u), dtype=bool)
    mask[list(T)] = True
    cl = IsolatedClosure(u)
    return bool((cl(mask) == mask).all())


def _family_subset(u, family):
    return frozenset(i for i, a in enumerate(u.elements) if in_family(a, family))


def _groups_of(u, idempotents):
    return {subgroup_G(u, u.elements[e]) for e in idempotents}


def expected_isolated(u, kind):
    """The isolated subsemigroups predicted for ``kind`` in {istar, wpistar, pistar}."""
    S = frozenset(range(len(u)))
    G = permutation_part(u)
    n = u.degree
    idem = u.idempotents
    out = {S, G, S - G}
    if kind == "istar":
        out |= _groups_of(u, [e for e in idem if u.elements[e].rank == n - 1])
    elif kind == "wpistar":
        out |= _groups_of(u, [e for e in idem if _corank(u.elements[e]) <= 1])
    elif kind == "pistar":
        istar = _family_subset(u, Family.ISTAR)
        out |= {istar, istar - G}
        out |= _groups_of(u, [e for e in idem if e in istar and u.elements[e].rank == n - 1])
        for t in range(1, n + 1):
            sub = _istar_minus_point(u, t)
            SY = frozenset(i for i in sub if u.elements[i].rank == n - 1)
            out |= {sub, SY, sub - SY}
            out |= _groups_of(u, [e for e in idem if e in sub and u.elements[e].rank == n - 2])
    else:
        raise ValueError(kind)
    out.discard(frozenset())
    return out


def _corank(a):
    covered = set().union(*(t for t, _ in a.lines())) if a.lines() else set()
    return a.n - len(covered)


def _istar_minus_point(u, t):
    """I*_Y for Y = N∖{t}, embedded with t and t′ as points."""
    out = set()
    for i, a in enumerate(u.elements):
        rest = [b for b in a.blocks if b not in ((t,), (-t,))]
        if len(rest) == len(a.blocks) - 2 and all(b[0] > 0 and b[-1] < 0 for b in rest):
            out.add(i)
    return frozenset(out)


def units_split_check(u, found):
    """With G = S_n: G is listed, T ↦ T∪G maps the G-free members onto the members properly containing G."""
    G = permutation_part(u)
    found = set(found)
    disjoint = {T for T in found if not T & G}
    above = {T for T in found if G < T}
    image = {T | G for T in disjoint}
    return Verdict(
        f"units split on {u.name}",
        G in found and image == above and len(image) == len(disjoint),
        {"disjoint": len(disjoint), "above": len(above)},
    )
