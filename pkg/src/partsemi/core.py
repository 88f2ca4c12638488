"""Bipartitions of {1..n} ∪ {1'..n'} and the three multiplications on them.

Points are signed integers: ``v > 0`` is the top point ``v`` and ``v < 0`` is
the bottom point ``|v|'``.  The canonical order on points is
``1 < 2 < ... < n < 1' < ... < n'``; blocks are sorted internally by that
order and listed by their minimal point.
"""

from __future__ import annotations

import enum
import itertools
import json
import re
from dataclasses import dataclass


class PartitionError(ValueError):
    """Base class for errors raised by this package on bad input."""


class MalformedElement(PartitionError):
    pass


class DegreeMismatch(PartitionError):
    pass


class FamilyError(PartitionError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Product(enum.Enum):
    NATURAL = "natural"
    STAR = "star"
    CIRC = "circ"


class BlockKind(enum.Enum):
    POINT = "point"
    GENERALISED_LINE = "generalised-line"
    LINE = "line"
    OTHER = "other"


class Family(enum.Enum):
    C = "c"
    ISTAR = "istar"
    PISTAR = "pistar"
    I = "i"  # noqa: E741
    S = "s"


def _key(v, n):
    return v if v > 0 else n - v


class Bipartition:
    """An immutable partition of the 2n signed points into blocks."""

    __slots__ = ("n", "blocks", "_hash")

    def __init__(self, n, blocks):
        if n < 1:
            raise MalformedElement(f"degree must be positive, got {n}")
        seen = set()
        canon = []
        for block in blocks:
            block = list(block)
            if not block:
                raise MalformedElement("empty block")
            for v in block:
                if not isinstance(v, int) or v == 0 or abs(v) > n:
                    raise MalformedElement(f"point {v!r} out of range for degree {n}")
                if v in seen:
                    raise MalformedElement(f"point {v} appears twice")
                seen.add(v)
            canon.append(tuple(sorted(block, key=lambda v: _key(v, n))))
        if len(seen) != 2 * n:
            missing = sorted(set(range(-n, n + 1)) - seen - {0}, key=lambda v: _key(v, n))
            raise MalformedElement(f"points not covered: {missing}")
        canon.sort(key=lambda b: _key(b[0], n))
        self.n = n
        self.blocks = tuple(canon)
        self._hash = hash((n, self.blocks))

    @classmethod
    def _raw(cls, n, blocks):
        # blocks already canonical
        self = object.__new__(cls)
        self.n = n
        self.blocks = blocks
        self._hash = hash((n, blocks))
        return self

    def __eq__(self, other):
        if not isinstance(other, Bipartition):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.n, tuple(tuple(_key(v, self.n) for v in b) for b in self.blocks))

    def __repr__(self):
        return f"Bipartition({format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    # -- block inspection -------------------------------------------------

    def lines(self):
        """Generalised lines as ``(top, bottom)`` pairs of frozensets of 1..n."""
        out = []
        for b in self.blocks:
            top = frozenset(v for v in b if v > 0)
            bot = frozenset(-v for v in b if v < 0)
            if top and bot:
                out.append((top, bot))
        return out

    def kinds(self):
        return [block_kind(b) for b in self.blocks]

    @property
    def rank(self):
        return sum(1 for b in self.blocks if b[0] > 0 and b[-1] < 0)

    def is_identity(self):
        return all(len(b) == 2 and b[0] == -b[1] for b in self.blocks) and len(self.blocks) == self.n


def block_kind(block):
    has_top = block[0] > 0
    has_bot = block[-1] < 0
    if len(block) == 1:
        return BlockKind.POINT
    if has_top and has_bot:
        return BlockKind.LINE if len(block) == 2 else BlockKind.GENERALISED_LINE
    return BlockKind.OTHER


def in_family(a, family):
    if family is Family.C:
        return True
    if family is Family.ISTAR:
        return all(b[0] > 0 and b[-1] < 0 for b in a.blocks)
    if family is Family.PISTAR:
        return all(len(b) == 1 or (b[0] > 0 and b[-1] < 0) for b in a.blocks)
    if family is Family.I:
        return all(len(b) == 1 or (len(b) == 2 and b[0] > 0 > b[1]) for b in a.blocks)
    if family is Family.S:
        return a.is_identity() or (
            len(a.blocks) == a.n and all(len(b) == 2 and b[0] > 0 > b[1] for b in a.blocks)
        )
    raise ValueError(family)


def require_family(a, family):
    if not in_family(a, family):
        raise FamilyError(f"{a} is not in family {family.value}")


def _same_degree(a, b):
    if a.n != b.n:
        raise DegreeMismatch(f"degrees differ: {a.n} vs {b.n}")


# -- serialization --------------------------------------------------------

_TEXT_RE = re.compile(r"^\s*\[\s*(\[[^\[\]]*\]\s*(,\s*\[[^\[\]]*\]\s*)*)?\]\s*$")


def parse(text, degree=None, fill_points=False):
    """Parse ``[[1,2,-1],[3,-3],[-2]]`` into a canonical Bipartition.

    ``degree`` defaults to the largest absolute value present.  With
    ``fill_points`` every point not mentioned becomes a singleton block, so a
    partition in PI* can be written through its generalised lines alone.
    """
    if not _TEXT_RE.match(text):
        raise MalformedElement(f"cannot parse element text {text!r}")
    try:
        blocks = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedElement(str(exc)) from None
    if not all(isinstance(b, list) and all(isinstance(v, int) for v in b) for b in blocks):
        raise MalformedElement(f"blocks must be lists of integers: {text!r}")
    return from_blocks(blocks, degree, fill_points)


def from_blocks(blocks, degree=None, fill_points=False):
    if degree is None:
        degree = max((abs(v) for b in blocks for v in b), default=0)
        if degree == 0:
            raise MalformedElement("cannot infer degree of an empty element")
    if fill_points:
        present = {v for b in blocks for v in b}
        blocks = list(blocks) + [[v] for v in range(-degree, degree + 1) if v and v not in present]
    return Bipartition(degree, blocks)


def format_element(a):
    return "[" + ",".join("[" + ",".join(map(str, b)) + "]" for b in a.blocks) + "]"


def to_json(a):
    return {"n": a.n, "blocks": [list(b) for b in a.blocks]}


def from_json(obj):
    return from_blocks(obj["blocks"], obj["n"])


# -- products -------------------------------------------------------------


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, x, y):
    x = _find(parent, x)
    y = _find(parent, y)
    if x != y:
        if x < y:
            parent[y] = x
        else:
            parent[x] = y


def _stack(a, b, parent):
    # layers: top of a = 0..n-1, middle = n..2n-1, bottom of b = 2n..3n-1
    n = a.n
    for blk in a.blocks:
        r = blk[0] - 1 if blk[0] > 0 else n - blk[0] - 1
        for v in blk[1:]:
            _union(parent, r, v - 1 if v > 0 else n - v - 1)
    for blk in b.blocks:
        r = n + blk[0] - 1 if blk[0] > 0 else 2 * n - blk[0] - 1
        for v in blk[1:]:
            _union(parent, r, n + v - 1 if v > 0 else 2 * n - v - 1)


def _collect(n, parent, dead=None):
    groups = {}
    order = []
    singles = []
    for node in itertools.chain(range(n), range(2 * n, 3 * n)):
        v = node + 1 if node < n else -(node - 2 * n + 1)
        r = _find(parent, node)
        if r == dead:
            singles.append((v,))
            continue
        g = groups.get(r)
        if g is None:
            groups[r] = g = [v]
            order.append(g)
        else:
            g.append(v)
    blocks = [tuple(g) for g in order]
    if singles:
        blocks.extend(singles)
        blocks.sort(key=lambda b: _key(b[0], n))
    return tuple(blocks)


def natural_mul(a, b):
    """Stack ``a`` above ``b`` and take connected components."""
    _same_degree(a, b)
    n = a.n
    parent = list(range(3 * n))
    _stack(a, b, parent)
    return Bipartition._raw(n, _collect(n, parent))


def star_mul(a, b):
    """The ⋆ product: components touching a point of either factor dissolve into points."""
    _same_degree(a, b)
    require_family(a, Family.PISTAR)
    require_family(b, Family.PISTAR)
    n = a.n
    aux = 3 * n
    parent = list(range(3 * n + 1))
    _stack(a, b, parent)
    for blk in a.blocks:
        if len(blk) == 1:
            v = blk[0]
            _union(parent, aux, v - 1 if v > 0 else n - v - 1)
    for blk in b.blocks:
        if len(blk) == 1:
            v = blk[0]
            _union(parent, aux, n + v - 1 if v > 0 else 2 * n - v - 1)
    return Bipartition._raw(n, _collect(n, parent, dead=_find(parent, aux)))


def circ_mul(a, b):
    """The ∘ product: a line of ``a`` joins a line of ``b`` only on an exact bottom/top match."""
    _same_degree(a, b)
    require_family(a, Family.PISTAR)
    require_family(b, Family.PISTAR)
    tops = {}
    for top, bot in b.lines():
        tops[top] = bot
    blocks = []
    for top, bot in a.lines():
        match = tops.get(bot)
        if match is not None:
            blocks.append(list(top) + [-v for v in match])
    return from_blocks(blocks, a.n, fill_points=True)


def multiply(a, b, product):
    if product is Product.NATURAL:
        return natural_mul(a, b)
    if product is Product.STAR:
        return star_mul(a, b)
    if product is Product.CIRC:
        return circ_mul(a, b)
    raise ValueError(product)


def product_fn(product):
    return {Product.NATURAL: natural_mul, Product.STAR: star_mul, Product.CIRC: circ_mul}[product]


def inverse(a):
    """Mirror top and bottom rows."""
    require_family(a, Family.PISTAR)
    return from_blocks([[-v for v in b] for b in a.blocks], a.n)


# -- domain data ----------------------------------------------------------


@dataclass(frozen=True)
class DomainData:
    rank: int
    dom: frozenset  # frozenset of frozensets of top points
    ran: frozenset  # frozenset of frozensets of bottom points (as positive ints)
    codom: frozenset
    coran: frozenset

    @property
    def corank(self):
        return len(self.codom)


def domain_data(a):
    require_family(a, Family.PISTAR)
    lines = a.lines()
    dom = frozenset(t for t, _ in lines)
    ran = frozenset(b for _, b in lines)
    covered_top = set().union(*dom) if dom else set()
    covered_bot = set().union(*ran) if ran else set()
    everything = set(range(1, a.n + 1))
    return DomainData(
        rank=len(lines),
        dom=dom,
        ran=ran,
        codom=frozenset(everything - covered_top),
        coran=frozenset(everything - covered_bot),
    )


# -- named elements -------------------------------------------------------


def _check_points(n, *points):
    for p in points:
        if not 1 <= p <= n:
            raise ValueError(f"point {p} out of range 1..{n}")
    if len(set(points)) != len(points):
        raise ValueError(f"points must be distinct: {points}")


def _subset(n, Y, nonempty=True):
    Y = frozenset(Y)
    if nonempty and not Y:
        raise ValueError("subset must be non-empty")
    _check_points(n, *Y)
    return Y


def identity(n):
    return Bipartition._raw(n, tuple((t, -t) for t in range(1, n + 1)))


def zero(n):
    return Bipartition._raw(n, tuple((v,) for v in range(1, n + 1)) + tuple((-v,) for v in range(1, n + 1)))


def perm(images):
    """All-lines element sending top ``t`` to bottom ``images[t-1]'``."""
    n = len(images)
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {images}")
    return from_blocks([[t, -images[t - 1]] for t in range(1, n + 1)], n)


def _lines_rest(n, blocks, skip):
    return blocks + [[t, -t] for t in range(1, n + 1) if t not in skip]


def alpha_x(n, x):
    _check_points(n, x)
    return from_blocks(_lines_rest(n, [], {x}), n, fill_points=True)


def alpha_Y(n, Y):
    Y = _subset(n, Y, nonempty=False)
    return from_blocks(_lines_rest(n, [], Y), n, fill_points=True)


def tau_xy(n, x, y):
    _check_points(n, x, y)
    return from_blocks(_lines_rest(n, [[x, y, -x, -y]], {x, y}), n)


def tau_Y(n, Y):
    Y = _subset(n, Y)
    return from_blocks(_lines_rest(n, [sorted(Y) + [-t for t in Y]], Y), n)


def gamma_xy(n, x, y):
    _check_points(n, x, y)
    return from_blocks(_lines_rest(n, [[x, y, -x], [-y]], {x, y}), n)


def xi_xyz(n, x, y, z):
    _check_points(n, x, y, z)
    return from_blocks(_lines_rest(n, [[x, y, -x], [z, -y, -z]], {x, y, z}), n)


def epsilon_Y(n, Y):
    Y = _subset(n, Y)
    return from_blocks([sorted(Y) + [-t for t in Y]], n, fill_points=True)


def eta_Y(n, Y):
    Y = _subset(n, Y)
    rest = [t for t in range(1, n + 1) if t not in Y]
    blocks = [sorted(Y) + [-t for t in Y]]
    if rest:
        blocks.append(rest + [-t for t in rest])
    return from_blocks(blocks, n)


_NAMED = {
    "alpha_x": alpha_x,
    "alpha_Y": alpha_Y,
    "tau_xy": tau_xy,
    "tau_Y": tau_Y,
    "gamma_xy": gamma_xy,
    "xi_xyz": xi_xyz,
    "epsilon_Y": epsilon_Y,
    "eta_Y": eta_Y,
    "zero": zero,
    "identity": identity,
}


def make_named(kind, params, degree):
    if kind == "perm":
        p = perm(list(params))
        if p.n != degree:
            raise ValueError("permutation length must equal the degree")
        return p
    try:
        fn = _NAMED[kind]
    except KeyError:
        raise ValueError(f"unknown named element {kind!r}") from None
    if kind in ("zero", "identity"):
        return fn(degree)
    if kind.endswith("_Y"):
        return fn(degree, params)
    return fn(degree, *params)


def permutations(n):
    return [perm(list(p)) for p in itertools.permutations(range(1, n + 1))]


# -- natural partial order, restriction ----------------------------------


def natural_order_leq(a, b, product):
    """``a ≤ b`` iff ``a = (a a⁻¹) b`` under ``product``."""
    if product is Product.NATURAL:
        require_family(a, Family.ISTAR)
        require_family(b, Family.ISTAR)
    mul = product_fn(product)
    return mul(mul(a, inverse(a)), b) == a


def omega_up(a, elements, product):
    return {b for b in elements if natural_order_leq(a, b, product)}


def is_invariant(a, Y):
    Y = frozenset(Y)
    for blk in a.blocks:
        inside = [abs(v) in Y for v in blk]
        if any(inside) and not all(inside):
            return False
    return True


def restrict(a, Y):
    """Blocks of ``a`` inside ``Y ∪ Y'``, relabelled order-isomorphically onto 1..|Y|."""
    Y = sorted(set(Y))
    if not Y:
        raise ValueError("cannot restrict to the empty set")
    if not is_invariant(a, Y):
        raise ValueError(f"{set(Y)} is not invariant under {a}")
    relabel = {y: i + 1 for i, y in enumerate(Y)}
    blocks = [
        [relabel[v] if v > 0 else -relabel[-v] for v in blk]
        for blk in a.blocks
        if abs(blk[0]) in relabel
    ]
    return from_blocks(blocks, len(Y))


def extend_by_points(a, Y, n):
    """Embed an element on ``|Y|`` points into degree ``n`` along ``Y``; other points stay singletons."""
    Y = sorted(set(Y))
    if len(Y) != a.n:
        raise ValueError("|Y| must equal the degree of the element")
    blocks = [[Y[v - 1] if v > 0 else -Y[-v - 1] for v in blk] for blk in a.blocks]
    return from_blocks(blocks, n, fill_points=True)


def render_ascii(a):
    """Best-effort two-row sketch: each point is tagged by a block letter."""
    letters = {}
    for i, blk in enumerate(a.blocks):
        tag = chr(ord("a") + i % 26) if len(blk) > 1 else "."
        for v in blk:
            letters[v] = tag
    top = " ".join(letters[t] for t in range(1, a.n + 1))
    bot = " ".join(letters[-t] for t in range(1, a.n + 1))
    return top + "\n" + bot
