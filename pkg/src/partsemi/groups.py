"""Small permutation-group utilities for S_m, m <= 5.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i`` (0-based).
Products compose left to right, matching the diagram products:
``mul(p, q)[i] == q[p[i]]``.
"""

import itertools


def identity(m):
    return tuple(range(m))


def mul(p, q):
    return tuple(q[i] for i in p)


def inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def symmetric_group(m):
    return [tuple(p) for p in itertools.permutations(range(m))]


def sign(p):
    s = 1
    seen = set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def cycle_type(p):
    seen = set()
    lengths = []
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def generate(gens, m):
    """Subgroup of S_m generated by ``gens``."""
    group = {identity(m)}
    frontier = list(group)
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(group)


def is_subgroup(H, m):
    H = set(H)
    return identity(m) in H and all(mul(a, b) in H for a in H for b in H)


def is_normal(H, m):
    return all(mul(mul(inv(g), h), g) in H for g in symmetric_group(m) for h in H)


def conjugacy_classes(m):
    classes = {}
    for p in symmetric_group(m):
        classes.setdefault(cycle_type(p), set()).add(p)
    return [frozenset(c) for c in classes.values()]


def normal_subgroups(m):
    """All normal subgroups of S_m, found as closed unions of conjugacy classes."""
    classes = conjugacy_classes(m)
    ident = identity(m)
    rest = [c for c in classes if ident not in c]
    found = set()
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            H = frozenset({ident}).union(*combo)
            if is_subgroup(H, m):
                found.add(H)
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def hardcoded_normal_subgroups(m):
    """{1}, A_m, S_m and, for m = 4, the Klein four-group."""
    if m > 4:
        raise ValueError("hardcoded list only covers m <= 4")
    full = frozenset(symmetric_group(m))
    alt = frozenset(p for p in full if sign(p) == 1)
    out = {frozenset({identity(m)}), alt, full}
    if m == 4:
        out.add(frozenset(p for p in full if cycle_type(p) in ((1, 1, 1, 1), (2, 2))))
    return sorted(out, key=lambda H: (len(H), sorted(H)))


def all_subgroups(m):
    """Brute force: every subgroup of S_m (m <= 4) is generated by at most two elements."""
    if m > 4:
        raise ValueError("brute-force subgroup search only for m <= 4")
    elems = symmetric_group(m)
    found = set()
    for a, b in itertools.combinations_with_replacement(elems, 2):
        found.add(generate([a, b], m))
    return found


def maximal_subgroups_bruteforce(m):
    full = frozenset(symmetric_group(m))
    proper = [H for H in all_subgroups(m) if H != full]
    return sorted(
        (H for H in proper if not any(H < K for K in proper)),
        key=lambda H: (len(H), sorted(H)),
    )


def hardcoded_maximal_subgroups(m):
    """Maximal subgroups of S_m for m <= 4: A_m, point stabilisers, and for m = 4
    the stabilisers of the three splittings into two pairs."""
    if m > 4:
        raise ValueError("hardcoded list only covers m <= 4")
    full = frozenset(symmetric_group(m))
    if m == 1:
        return []
    if m == 2:
        return [frozenset({identity(2)})]
    out = {frozenset(p for p in full if sign(p) == 1)}
    for i in range(m):
        out.add(frozenset(p for p in full if p[i] == i))
    if m == 4:
        for pairs in ({0, 1}, {0, 2}, {0, 3}):
            split = {frozenset(pairs), frozenset(set(range(4)) - pairs)}
            out.add(frozenset(p for p in full if {frozenset(p[i] for i in s) for s in split} == split))
    return sorted(out, key=lambda H: (len(H), sorted(H)))


def to_images(p):
    """1-based image list, as taken by :func:`partsemi.core.perm`."""
    return [i + 1 for i in p]
