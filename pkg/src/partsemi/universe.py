"""Finite semigroups of bipartitions with an indexed Cayley table."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BudgetExceeded, Family, Product, in_family, inverse, product_fn

TABLE_BUDGET = 600


class SemigroupUniverse:
    """A finite set of bipartitions closed under ``product``.

    Element indices are stable.  The Cayley table is materialized on first
    use and checked for closure; idempotents and inverses are cached with it.
    """

    def __init__(self, elements, product, name=None, table_budget=TABLE_BUDGET):
        self.elements = list(elements)
        self.product = product
        self.name = name or f"<{product.value} universe of {len(self.elements)}>"
        self.index = {a: i for i, a in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")
        self.table_budget = table_budget
        self._mul = product_fn(product)
        self._table = None
        self._inv = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        return a in self.index

    def __repr__(self):
        return f"SemigroupUniverse({self.name!r}, size={len(self)})"

    @property
    def degree(self):
        return self.elements[0].n

    def mul(self, a, b):
        return self._mul(a, b)

    @property
    def table(self):
        if self._table is None:
            size = len(self.elements)
            if size > self.table_budget:
                raise BudgetExceeded(
                    f"Cayley table of {size} elements exceeds budget {self.table_budget}"
                )
            t = np.empty((size, size), dtype=np.int32)
            mul, idx, els = self._mul, self.index, self.elements
            for i, a in enumerate(els):
                row = t[i]
                for j, b in enumerate(els):
                    c = mul(a, b)
                    k = idx.get(c)
                    if k is None:
                        raise ValueError(f"{self.name} is not closed: {a} * {b} = {c}")
                    row[j] = k
            self._table = t
        return self._table

    def has_table(self):
        return self._table is not None

    def mul_idx(self, i, j):
        if self._table is not None:
            return int(self._table[i, j])
        return self.index[self._mul(self.elements[i], self.elements[j])]

    @property
    def inverses(self):
        """Index of the mirror image of each element, or None outside PI*."""
        if self._inv is None:
            if not all(in_family(a, Family.PISTAR) for a in self.elements):
                return None
            self._inv = np.array([self.index[inverse(a)] for a in self.elements], dtype=np.int32)
        return self._inv

    @property
    def idempotents(self):
        t = self.table
        return [i for i in range(len(self)) if t[i, i] == i]

    @property
    def ranks(self):
        return np.array([a.rank for a in self.elements], dtype=np.int32)

    def units(self):
        """Indices of the group of units (empty if there is no identity)."""
        e = self.identity_index()
        if e is None:
            return []
        t = self.table
        return [i for i in range(len(self)) if (t[i] == e).any() and (t[:, i] == e).any()]

    def identity_index(self):
        t = self.table
        ar = np.arange(len(self))
        for i in range(len(self)):
            if (t[i] == ar).all() and (t[:, i] == ar).all():
                return i
        return None

    def subset(self, indices):
        return [self.elements[i] for i in sorted(indices)]

    def indices_of(self, elements):
        return frozenset(self.index[a] for a in elements)


@dataclass(frozen=True)
class EquivRelation:
    """An equivalence on ``range(size)`` stored as canonical class ids.

    Class ids are renumbered by first occurrence so equal relations compare
    equal as tuples.
    """

    ids: tuple

    @classmethod
    def from_labels(cls, labels):
        remap = {}
        return cls(tuple(remap.setdefault(x, len(remap)) for x in labels))

    @classmethod
    def identity(cls, size):
        return cls(tuple(range(size)))

    @classmethod
    def universal(cls, size):
        return cls((0,) * size)

    @classmethod
    def from_classes(cls, classes, size):
        labels = list(range(size))
        for k, cl in enumerate(classes):
            for i in cl:
                labels[i] = size + k
        return cls.from_labels(labels)

    def __len__(self):
        return len(self.ids)

    @property
    def num_classes(self):
        return max(self.ids, default=-1) + 1

    def classes(self):
        out = [[] for _ in range(self.num_classes)]
        for i, c in enumerate(self.ids):
            out[c].append(i)
        return out

    def related(self, i, j):
        return self.ids[i] == self.ids[j]

    def class_sizes(self):
        return sorted((len(c) for c in self.classes()), reverse=True)

    def refines(self, other):
        """True when every class of ``self`` lies inside a class of ``other``."""
        seen = {}
        for a, b in zip(self.ids, other.ids):
            if seen.setdefault(a, b) != b:
                return False
        return True

    def meet(self, other):
        return EquivRelation.from_labels(list(zip(self.ids, other.ids)))

    def join(self, other):
        parent = list(range(len(self)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for rel in (self, other):
            first = {}
            for i, c in enumerate(rel.ids):
                j = first.setdefault(c, i)
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return EquivRelation.from_labels([find(i) for i in range(len(self))])

    def is_congruence(self, table):
        """Left and right compatibility, checked over every related pair and every element."""
        ids = np.asarray(self.ids)
        for cl in self.classes():
            if len(cl) < 2:
                continue
            rows = ids[table[cl, :]]  # right multiplication by every s
            cols = ids[table[:, cl]].T  # left multiplication
            if (rows != rows[0]).any() or (cols != cols[0]).any():
                return False
        return True

    def restrict(self, indices):
        return EquivRelation.from_labels([self.ids[i] for i in indices])


@dataclass
class Verdict:
    """Outcome of a verification: a boolean plus whatever evidence was gathered."""

    name: str
    ok: bool
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "details": self.details, "witnesses": self.witnesses}


def product_for(family):
    """The multiplication a family name refers to in CLI and check contexts."""
    return {
        "c": Product.NATURAL,
        "istar": Product.NATURAL,
        "pistar": Product.STAR,
        "wpistar": Product.CIRC,
        "i": Product.STAR,
        "s": Product.STAR,
    }[family]
