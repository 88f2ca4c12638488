"""Green's relations, ideals, maximal subgroups and the congruence μ."""

from __future__ import annotations

import numpy as np

from .core import domain_data
from .universe import EquivRelation

RELATIONS = ("R", "L", "H", "D", "J")


def green_classes(u, which):
    """Green's relation read off dom, ran and rank."""
    data = [domain_data(a) for a in u.elements]
    if which == "R":
        labels = [d.dom for d in data]
    elif which == "L":
        labels = [d.ran for d in data]
    elif which == "H":
        labels = [(d.dom, d.ran) for d in data]
    elif which in ("D", "J"):
        labels = [d.rank for d in data]
    else:
        raise ValueError(f"unknown relation {which!r}")
    return EquivRelation.from_labels(labels)


def _right_ideals(table):
    return [frozenset(row.tolist()) | {i} for i, row in enumerate(table)]


def _left_ideals(table):
    return [frozenset(col.tolist()) | {i} for i, col in enumerate(table.T)]


def green_oracle(u, which):
    """Green's relation from principal one-sided and two-sided ideals of the table."""
    table = u.table
    if which == "R":
        return EquivRelation.from_labels(_right_ideals(table))
    if which == "L":
        return EquivRelation.from_labels(_left_ideals(table))
    if which == "H":
        return green_oracle(u, "R").meet(green_oracle(u, "L"))
    if which == "D":
        return green_oracle(u, "R").join(green_oracle(u, "L"))
    if which == "J":
        return EquivRelation.from_labels([frozenset(principal_ideal(u, i)) for i in range(len(u))])
    raise ValueError(f"unknown relation {which!r}")


def principal_ideal(u, i):
    """S¹ a S¹ as a set of indices."""
    table = u.table
    left = set(table[:, i].tolist()) | {i}
    left_arr = np.array(sorted(left))
    return set(table[left_arr, :].ravel().tolist()) | left


def ideal(u, xi):
    """J_ξ: all elements of rank < ξ."""
    n = u.degree
    if not 1 <= xi <= n + 1:
        raise ValueError(f"xi must lie in 1..{n + 1}")
    return frozenset(i for i, a in enumerate(u.elements) if a.rank < xi)


def is_ideal(u, indices):
    idx = np.array(sorted(indices))
    if idx.size == 0:
        return False
    table = u.table
    inside = np.zeros(len(u), dtype=bool)
    inside[idx] = True
    return bool(inside[table[idx, :]].all() and inside[table[:, idx]].all())


def all_ideals(u):
    """Every non-empty two-sided ideal, as unions of principal ideals."""
    principals = {frozenset(principal_ideal(u, i)) for i in range(len(u))}
    found = set(principals)
    frontier = list(principals)
    while frontier:
        nxt = []
        for a in frontier:
            for p in principals:
                b = a | p
                if b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return found


def h_class(u, i):
    table = u.table
    r = _right_ideals(table)
    l_ = _left_ideals(table)
    return frozenset(j for j in range(len(u)) if r[j] == r[i] and l_[j] == l_[i])


def is_group(u, indices):
    idx = sorted(indices)
    table = u.table
    sub = table[np.ix_(idx, idx)]
    members = set(idx)
    if not set(sub.ravel().tolist()) <= members:
        return False
    ident = [e for k, e in enumerate(idx) if (sub[k] == idx).all() and (sub[:, k] == idx).all()]
    if len(ident) != 1:
        return False
    e = ident[0]
    return all((sub[k] == e).any() for k in range(len(idx)))


def subgroup_G(u, e):
    """The maximal subgroup with identity ``e`` (its H-class)."""
    i = u.index[e]
    if u.mul_idx(i, i) != i:
        raise ValueError(f"{e} is not idempotent")
    return h_class(u, i)


def mu_congruence(u):
    """μ: a ~ b iff a⁻¹ e a = b⁻¹ e b for every idempotent e."""
    inv = u.inverses
    if inv is None:
        raise ValueError("μ needs an inverse semigroup")
    table = u.table
    idem = np.array(u.idempotents)
    labels = []
    for a in range(len(u)):
        left = table[inv[a], idem]
        labels.append(tuple(table[left, a].tolist()))
    return EquivRelation.from_labels(labels)


def is_fundamental(u):
    mu = mu_congruence(u)
    return mu.num_classes == len(u)


def mu_witness(u):
    """A pair of distinct μ-related elements, or None."""
    for cl in mu_congruence(u).classes():
        if len(cl) > 1:
            return u.elements[cl[0]], u.elements[cl[1]]
    return None
