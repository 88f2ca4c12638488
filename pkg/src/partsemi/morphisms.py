"""Automorphism search and effective transitive representations on ω-cosets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import core
from .core import BudgetExceeded, Bipartition, inverse, permutations
from .congruence import generating_set

AUT_BUDGET = 500_000


# -- automorphisms --------------------------------------------------------


@dataclass(frozen=True)
class AutMap:
    """A permutation of element indices of a universe."""

    universe: object
    images: tuple

    def __call__(self, a):
        u = self.universe
        return u.elements[self.images[u.index[a]]]

    def is_automorphism(self):
        t = self.universe.table
        img = np.asarray(self.images)
        if len(set(self.images)) != len(img):
            return False
        return bool((img[t] == t[np.ix_(img, img)]).all())

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))


def relabel(a, images):
    """Rename every point t (top and bottom) to images[t-1]; equals π⁻¹aπ under ⋆."""
    blocks = [[images[v - 1] if v > 0 else -images[-v - 1] for v in blk] for blk in a.blocks]
    return core.from_blocks(blocks, a.n)


def conjugation_aut(pi, u):
    """a ↦ π⁻¹ a π, with π given as 1-based images."""
    pi = list(pi)
    if sorted(pi) != list(range(1, u.degree + 1)):
        raise ValueError(f"not a permutation of 1..{u.degree}: {pi}")
    return AutMap(u, tuple(u.index[relabel(a, pi)] for a in u.elements))


def invariant_signature(table):
    """Per element: data any automorphism must preserve."""
    size = table.shape[0]
    ar = np.arange(size)
    idem = table[ar, ar] == ar
    right_fix = (table == ar[:, None]).sum(axis=1)
    left_fix = (table == ar[None, :]).sum(axis=0)
    right_ideal = [len(set(row.tolist())) for row in table]
    left_ideal = [len(set(col.tolist())) for col in table.T]
    sigs = []
    for a in range(size):
        # index and period of the monogenic subsemigroup
        seen = {}
        x, k = a, 1
        while x not in seen:
            seen[x] = k
            x, k = int(table[x, a]), k + 1
        index, period = seen[x], k - seen[x]
        sigs.append((bool(idem[a]), int(right_fix[a]), int(left_fix[a]), right_ideal[a], left_ideal[a], index, period))
    return sigs


def automorphisms(u, gens=None, budget=AUT_BUDGET):
    """All automorphisms, by backtracking on the images of a generating set.

    Each partial assignment is extended along x ↦ x·g over the subsemigroup
    generated so far; a clash with an earlier image, or two elements sharing
    an image, prunes the branch.
    """
    table = u.table
    size = len(u)
    gens = list(gens) if gens is not None else generating_set(u)
    sigs = invariant_signature(table)
    by_sig = {}
    for i, s in enumerate(sigs):
        by_sig.setdefault(s, []).append(i)
    found = []
    nodes = 0

    def extend(phi, used, assigned):
        # close phi over products with the assigned generators
        frontier = list(phi)
        while frontier:
            nxt = []
            for x in frontier:
                px = phi[x]
                for g in assigned:
                    y = int(table[x, g])
                    py = int(table[px, phi[g]])
                    have = phi.get(y)
                    if have is None:
                        if py in used:
                            return False
                        phi[y] = py
                        used.add(py)
                        nxt.append(y)
                    elif have != py:
                        return False
            frontier = nxt
        return True

    def search(k, phi, used):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"automorphism search exceeded {budget} nodes")
        if k == len(gens):
            if len(phi) == size:
                found.append(AutMap(u, tuple(phi[i] for i in range(size))))
            return
        g = gens[k]
        for cand in by_sig[sigs[g]]:
            if g in phi:
                if phi[g] != cand:
                    continue
            elif cand in used:
                continue
            new_phi, new_used = dict(phi), set(used)
            if g not in new_phi:
                new_phi[g] = cand
                new_used.add(cand)
            if extend(new_phi, new_used, gens[: k + 1]):
                search(k + 1, new_phi, new_used)

    search(0, {}, set())
    return found


def check_automorphisms(u):
    """Found automorphisms are exactly the n! conjugations."""
    auts = automorphisms(u)
    inner = {conjugation_aut([-b[1] for b in p.blocks], u).images for p in permutations(u.degree)}
    found = {a.images for a in auts}
    ok = found == inner and all(a.is_automorphism() for a in auts)
    return ok, {"automorphisms": len(found), "conjugations": len(inner)}


# -- natural order and cosets ---------------------------------------------


def order_matrix(u):
    """leq[a, b] iff a = (a a⁻¹) b."""
    t, inv = u.table, u.inverses
    ar = np.arange(len(u))
    e = t[ar, inv]
    return t[e, :] == ar[:, None]


def omega_closure(u, indices, leq=None):
    leq = order_matrix(u) if leq is None else leq
    idx = np.asarray(sorted(indices), dtype=np.int64)
    if idx.size == 0:
        return frozenset()
    return frozenset(np.flatnonzero(leq[idx].any(axis=0)).tolist())


def up_set(u, f):
    """fω = {b : f ≤ b}, computed with products only (works without a table)."""
    mul = u.mul
    ff = mul(f, inverse(f))
    return frozenset(i for i, b in enumerate(u.elements) if mul(ff, b) == f)


@dataclass
class CosetSpace:
    """Right ω-cosets (Hx)ω, xx⁻¹ ∈ H.

    ``keys[i]`` is the least element of coset i when H = fω (then the coset is
    (f x)ω and f x is its minimum); otherwise it is the coset itself.
    """

    universe: object
    H: frozenset
    keys: list
    f: Bipartition | None = None
    _sets: list | None = None

    def __len__(self):
        return len(self.keys)

    def index_of(self, key):
        return self._lookup[key]

    def __post_init__(self):
        self._lookup = {k: i for i, k in enumerate(self.keys)}

    @property
    def cosets(self):
        """The cosets as index sets (materialized on demand)."""
        if self._sets is None:
            u = self.universe
            self._sets = [up_set(u, c) for c in self.keys]
        return self._sets


def coset_space(u, H):
    """Cosets of a closed inverse subsemigroup.

    ``H`` is either an idempotent f (meaning H = fω) or an index set.  When H
    is fω the cosets are indexed by {c : c c⁻¹ = f}, since (Hx)ω = (f x)ω and
    f x ranges over exactly that R-class; otherwise cosets are built literally
    from the table.
    """
    if isinstance(H, Bipartition):
        f = H
        if u.mul(f, f) != f:
            raise ValueError(f"{f} is not idempotent")
        mul = u.mul
        keys = [c for c in u.elements if mul(c, inverse(c)) == f]
        return CosetSpace(u, up_set(u, f), keys, f=f)
    return literal_coset_space(u, H)


def literal_coset_space(u, H):
    """(Hx)ω for every x with xx⁻¹ ∈ H, straight from the definition."""
    H = frozenset(H)
    t, inv = u.table, u.inverses
    leq = order_matrix(u)
    if omega_closure(u, H, leq) != H:
        raise ValueError("H is not ω-closed")
    if any(int(inv[h]) not in H for h in H) or any(int(t[a, b]) not in H for a in H for b in H):
        raise ValueError("H is not an inverse subsemigroup")
    Hs = np.array(sorted(H))
    seen = {}
    for x in range(len(u)):
        if int(t[x, inv[x]]) not in H:
            continue
        coset = omega_closure(u, t[Hs, x].tolist(), leq)
        seen.setdefault(coset, len(seen))
    keys = sorted(seen, key=seen.get)
    return CosetSpace(u, H, keys, f=None, _sets=list(keys))


# -- the representation ---------------------------------------------------


def compose_partial(p, q):
    """Left-to-right composition of partial maps stored as tuples (-1 = undefined)."""
    return tuple(q[i] if i >= 0 else -1 for i in p)


def partial_to_element(p):
    """A partial injection on 0..m-1 as an I-family element of degree m."""
    m = len(p)
    return core.from_blocks([[i + 1, -(j + 1)] for i, j in enumerate(p) if j >= 0], m, fill_points=True)


@dataclass
class RepresentationMap:
    space: CosetSpace
    images: dict  # element index -> partial injection tuple

    @property
    def degree(self):
        return len(self.space)

    def __call__(self, s):
        return self.images[self.space.universe.index[s]]

    def as_element(self, s):
        return partial_to_element(self(s))

    def image_size(self):
        return len(set(self.images.values()))


def _act(space, s):
    """The partial map coset ↦ coset·s."""
    u = space.universe
    if space.f is not None:
        mul, f = u.mul, space.f
        out = []
        for c in space.keys:
            cs = mul(c, s)
            out.append(space.index_of(cs) if mul(cs, inverse(cs)) == f else -1)
        return tuple(out)
    t, inv = u.table, u.inverses
    si = u.index[s]
    H = space.H
    Hs = np.array(sorted(H))
    leq = order_matrix(u)
    out = []
    for coset in space.keys:
        # any representative x of the coset with xx⁻¹ ∈ H
        x = next(x for x in sorted(coset) if int(t[x, inv[x]]) in H and omega_closure(u, t[Hs, x].tolist(), leq) == coset)
        y = int(t[x, si])
        if int(t[y, inv[y]]) in H:
            out.append(space.index_of(omega_closure(u, t[Hs, y].tolist(), leq)))
        else:
            out.append(-1)
    return tuple(out)


def representation(u, H):
    space = H if isinstance(H, CosetSpace) else coset_space(u, H)
    return RepresentationMap(space, {i: _act(space, a) for i, a in enumerate(u.elements)})


def is_faithful(rep):
    return rep.image_size() == len(rep.images)


def collision(u, H):
    """Two distinct elements with the same image under φ_H, or None if φ_H is faithful.

    Elements are scanned by ascending rank and the scan stops at the first
    repeat, so a non-faithful representation is usually settled early.
    """
    space = H if isinstance(H, CosetSpace) else coset_space(u, H)
    seen = {}
    for a in sorted(u.elements, key=lambda a: (a.rank, a.sort_key())):
        img = _act(space, a)
        if img in seen:
            return seen[img], a
        seen[img] = a
    return None


def is_homomorphism(rep, gens=None):
    """φ(ab) = φ(a)φ(b).

    With ``gens`` only products x·g for generators g are checked; that
    already forces the full property, by induction on word length.
    """
    u = rep.space.universe
    imgs = rep.images
    others = range(len(u)) if gens is None else [u.index[g] for g in gens]
    for a in range(len(u)):
        for b in others:
            ab = u.mul_idx(a, b)
            if imgs[ab] != compose_partial(imgs[a], imgs[b]):
                return False
    return True


def representations_equivalent(u, H, K):
    """Is there a with a⁻¹Ha ⊆ K and aKa⁻¹ ⊆ H?

    For H = fω and K = gω this reduces to g ≤ a⁻¹fa and f ≤ a g a⁻¹
    (conjugation is monotone).  Candidates are tried in ascending rank.
    """
    order = sorted(u.elements, key=lambda a: (a.rank, a.sort_key()))
    mul = u.mul
    if isinstance(H, Bipartition) and isinstance(K, Bipartition):
        f, g = H, K
        for a in order:
            ai = inverse(a)
            if core.natural_order_leq(g, mul(mul(ai, f), a), u.product) and core.natural_order_leq(
                f, mul(mul(a, g), ai), u.product
            ):
                return True, a
        return False, None
    H, K = frozenset(H), frozenset(K)
    t, inv = u.table, u.inverses
    Hs, Ks = np.array(sorted(H)), np.array(sorted(K))
    for a in order:
        i = u.index[a]
        ai = int(inv[i])
        left = t[t[ai, Hs], i]
        right = t[t[i, Ks], ai]
        if set(left.tolist()) <= K and set(right.tolist()) <= H:
            return True, a
    return False, None


def rank_one_idempotents(n):
    return [
        core.epsilon_Y(n, Y)
        for r in range(1, n + 1)
        for Y in itertools.combinations(range(1, n + 1), r)
    ]
