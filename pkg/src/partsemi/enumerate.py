"""Family enumeration, generator closure, and generation/maximality checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import core, groups
from .core import (
    Bipartition,
    BudgetExceeded,
    Family,
    Product,
    format_element,
    in_family,
    inverse,
    product_fn,
)
from .universe import SemigroupUniverse, Verdict

MAX_DEGREE = {Family.C: 4, Family.ISTAR: 5, Family.PISTAR: 4, Family.I: 5, Family.S: 6}
DEFAULT_PRODUCT = {
    Family.C: Product.NATURAL,
    Family.ISTAR: Product.NATURAL,
    Family.PISTAR: Product.STAR,
    Family.I: Product.STAR,
    Family.S: Product.STAR,
}
CLOSURE_BUDGET = 5000


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _partial_matchings(n, with_points):
    """Yield lists of blocks: generalised lines built from matched top/bottom partitions."""
    pts = list(range(1, n + 1))
    subsets = (
        [frozenset(c) for r in range(n + 1) for c in itertools.combinations(pts, r)]
        if with_points
        else [frozenset(pts)]
    )
    for top in subsets:
        top_parts = list(set_partitions(sorted(top)))
        for bot in subsets:
            bot_parts = list(set_partitions(sorted(bot)))
            for tp in top_parts:
                for bp in bot_parts:
                    if len(tp) != len(bp):
                        continue
                    for sigma in itertools.permutations(range(len(bp))):
                        yield [tp[i] + [-v for v in bp[sigma[i]]] for i in range(len(tp))]


def family_elements(family, n):
    """All elements of ``family`` at degree ``n``, built straight from the definitions."""
    if family is Family.C:
        signed = list(range(1, n + 1)) + [-v for v in range(1, n + 1)]
        out = [Bipartition(n, p) for p in set_partitions(signed)]
    elif family is Family.ISTAR:
        out = [core.from_blocks(b, n) for b in _partial_matchings(n, False)]
    elif family is Family.PISTAR:
        out = [core.from_blocks(b, n, fill_points=True) for b in _partial_matchings(n, True)]
    elif family is Family.I:
        out = []
        for r in range(n + 1):
            for dom in itertools.combinations(range(1, n + 1), r):
                for img in itertools.permutations(range(1, n + 1), r):
                    out.append(core.from_blocks([[d, -i] for d, i in zip(dom, img)], n, fill_points=True))
    elif family is Family.S:
        out = core.permutations(n)
    else:
        raise ValueError(family)
    return sorted(set(out))


def resolve_family(family):
    """Accept a Family or a CLI name (``wpistar`` means the PI* carrier under ∘)."""
    if isinstance(family, Family):
        return family, DEFAULT_PRODUCT[family]
    if family == "wpistar":
        return Family.PISTAR, Product.CIRC
    fam = Family(family)
    return fam, DEFAULT_PRODUCT[fam]


def enumerate_family(family, n, product=None, max_degree=None):
    fam, default_product = resolve_family(family)
    product = product or default_product
    limit = MAX_DEGREE[fam] if max_degree is None else max_degree
    if n < 1 or n > limit:
        raise BudgetExceeded(f"degree {n} outside 1..{limit} for family {fam.value}")
    name = family if isinstance(family, str) else fam.value
    return SemigroupUniverse(family_elements(fam, n), product, name=f"{name}_{n}")


@dataclass
class GeneratorSet:
    product: Product
    generators: list
    with_inverses: bool = False

    def __post_init__(self):
        if not self.generators:
            raise ValueError("need at least one generator")
        degrees = {g.n for g in self.generators}
        if len(degrees) != 1:
            raise core.DegreeMismatch(f"generators of several degrees: {sorted(degrees)}")
        if self.product is not Product.NATURAL or self.with_inverses:
            for g in self.generators:
                core.require_family(g, Family.PISTAR)

    def expanded(self):
        gens = list(self.generators)
        if self.with_inverses:
            gens += [inverse(g) for g in self.generators]
        return sorted(set(gens))


def closure(gens, budget=CLOSURE_BUDGET):
    """Smallest product-closed set containing the generators.

    Elements come out in BFS layers; each layer is sorted canonically, so the
    order does not depend on set iteration.
    """
    mul = product_fn(gens.product)
    start = gens.expanded()
    seen = set(start)
    order = list(start)
    frontier = list(start)
    while frontier:
        layer = set()
        for x in frontier:
            for g in start:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    layer.add(y)
        if len(seen) > budget:
            raise BudgetExceeded(f"closure exceeded {budget} elements")
        frontier = sorted(layer)
        order.extend(frontier)
    return SemigroupUniverse(order, gens.product, name=f"closure of {len(start)} generators")


def closure_idx(table, gens, inverses=None):
    """Table-based closure of an index set; returns a boolean mask."""
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    if inverses is not None:
        gens = np.unique(np.concatenate([gens, inverses[gens]]))
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[gens] = True
    frontier = gens
    while frontier.size:
        prods = table[np.ix_(frontier, gens)].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def is_closed_idx(table, indices):
    idx = np.asarray(sorted(indices), dtype=np.int64)
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[idx] = True
    return bool(mask[table[np.ix_(idx, idx)]].all())


def _units(n):
    return core.permutations(n)


def double_coset(u, n, product=Product.STAR):
    mul = product_fn(product)
    perms = _units(n)
    left = {mul(p, u) for p in perms}
    return {mul(x, q) for x in left for q in perms}


def named_rank_deficient(n):
    """The five rank n-1 representatives used for generation: τ, α, ξ, γ, γ⁻¹."""
    g = core.gamma_xy(n, 1, 2)
    return {
        "tau": core.tau_xy(n, 1, 2),
        "alpha": core.alpha_x(n, 1),
        "xi": core.xi_xyz(n, 1, 2, 3),
        "gamma": g,
        "gamma_inv": inverse(g),
    }


def check_rank_factorization(n):
    if n < 3:
        raise ValueError("needs n >= 3")
    targets = set(named_rank_deficient(n).values())
    perms = _units(n)
    witnesses = []
    failures = []
    for u in family_elements(Family.PISTAR, n):
        if u.rank != n - 1:
            continue
        found = None
        for p in perms:
            pu = core.star_mul(p, u)
            for q in perms:
                v = core.star_mul(pu, q)
                if v in targets:
                    found = (p, q, v)
                    break
            if found:
                break
        if found is None:
            failures.append(format_element(u))
        else:
            witnesses.append([format_element(u)] + [format_element(x) for x in found])
    return Verdict(
        "rank-factorization",
        not failures,
        {"n": n, "checked": len(witnesses) + len(failures), "failures": failures},
        witnesses[:10],
    )


def maximal_item_sets(n):
    """The candidate maximal (inverse) subsemigroups of PI*_n, as element sets."""
    everything = family_elements(Family.PISTAR, n)
    units = set(_units(n))
    low = {a for a in everything if a.rank < n - 1}
    named = named_rank_deficient(n)

    def cosets(*keys):
        out = set()
        for k in keys:
            out |= double_coset(named[k], n)
        return out

    items = {
        "item1": units | low | cosets("tau", "alpha", "gamma", "xi"),
        "item2": units | low | cosets("tau", "alpha", "gamma_inv", "xi"),
    }
    inverse_items = {"inverse-item1": units | low | cosets("tau", "alpha", "xi")}
    non_units = {a for a in everything if a.rank < n}
    for k, G in enumerate(groups.hardcoded_maximal_subgroups(n)):
        gset = {core.perm(groups.to_images(p)) for p in G}
        items[f"item3-G{k}"] = gset | non_units
        inverse_items[f"inverse-item2-G{k}"] = gset | non_units
    return items, inverse_items


def check_irreducibility(n):
    """γ⁻¹ lies outside ⟨S_n, γ, τ, ξ, α⟩.

    The closure sits inside the first maximal item; what it misses is exactly
    the elements of rank < n-1 with empty coran and non-empty codom.
    """
    if n < 3:
        raise ValueError("needs n >= 3")
    named = named_rank_deficient(n)
    gens = _units(n) + [named[k] for k in ("gamma", "tau", "xi", "alpha")]
    u = closure(GeneratorSet(Product.STAR, gens))
    items, _ = maximal_item_sets(n)
    members = set(u.elements)
    ok_out = named["gamma_inv"] not in members
    ok_in = named["gamma"] in members
    inside = members <= items["item1"]
    missing = items["item1"] - members
    expected_missing = {
        a
        for a in items["item1"]
        if a.rank < n - 1 and not core.domain_data(a).coran and core.domain_data(a).codom
    }
    return Verdict(
        "irreducibility",
        ok_out and ok_in and inside and missing == expected_missing,
        {
            "n": n,
            "closure_size": len(u),
            "item1_size": len(items["item1"]),
            "gamma_inv_outside": ok_out,
            "gamma_inside": ok_in,
            "inside_item1": inside,
            "missing_from_item1": len(missing),
            "missing_are_low_rank_full_range": missing == expected_missing,
        },
    )


def _universe_pistar(n):
    return enumerate_family(Family.PISTAR, n)


def check_single_generators(n, u=None):
    """For every non-unit u: ⟨S_n, u, u⁻¹⟩ is everything iff u ∈ S_n{γ, γ⁻¹}S_n."""
    if n < 3:
        raise ValueError("needs n >= 3")
    u = u or _universe_pistar(n)
    table, inv = u.table, u.inverses
    named = named_rank_deficient(n)
    predicted = double_coset(named["gamma"], n) | double_coset(named["gamma_inv"], n)
    unit_idx = [u.index[p] for p in _units(n)]
    mismatches = []
    generating = 0
    checked = 0
    for i, a in enumerate(u.elements):
        if i in unit_idx:
            continue
        checked += 1
        full = bool(closure_idx(table, unit_idx + [i], inv).all())
        generating += full
        if full != (a in predicted):
            mismatches.append(format_element(a))
    return Verdict(
        "single-generator",
        not mismatches,
        {"n": n, "checked": checked, "generating": generating, "predicted": len(predicted)},
        mismatches,
    )


def maximal_subsemigroups_bruteforce(u):
    """Every maximal subsemigroup by subset enumeration; only for tiny universes."""
    size = len(u)
    if size > 16:
        raise BudgetExceeded("subset enumeration needs |S| <= 16")
    table = u.table
    full = (1 << size) - 1
    closed = []
    for mask in range(1, full):
        idx = [i for i in range(size) if mask >> i & 1]
        if is_closed_idx(table, idx):
            closed.append(mask)
    maximal = [m for m in closed if not any(m != o and m & o == m for o in closed)]
    return [frozenset(i for i in range(size) if m >> i & 1) for m in maximal]


def check_maximal_subsemigroups(n, u=None):
    if n < 3:
        raise ValueError("the listed items need n >= 3")
    u = u or _universe_pistar(n)
    table, inv = u.table, u.inverses
    size = len(u)
    items, inverse_items = maximal_item_sets(n)
    details = {"n": n, "items": {}, "inverse_items": {}}
    ok = True

    for name, elems in items.items():
        idx = sorted(u.indices_of(elems))
        closed = is_closed_idx(table, idx)
        outside = [i for i in range(size) if i not in set(idx)]
        maximal = all(closure_idx(table, idx + [s]).all() for s in outside)
        details["items"][name] = {"size": len(idx), "closed": closed, "maximal": maximal}
        ok &= closed and maximal and len(idx) < size

    for name, elems in inverse_items.items():
        idx = sorted(u.indices_of(elems))
        closed = is_closed_idx(table, idx) and set(inv[idx].tolist()) <= set(idx)
        outside = [i for i in range(size) if i not in set(idx)]
        maximal = all(closure_idx(table, idx + [s], inv).all() for s in outside)
        details["inverse_items"][name] = {"size": len(idx), "inverse_closed": closed, "maximal": maximal}
        ok &= closed and maximal and len(idx) < size

    # Completeness: a maximal subsemigroup missing from the list would contain one
    # element outside every listed item; show every such choice generates everything.
    unit_idx = sorted(u.indices_of(_units(n)))
    unit_items = [k for k in items if k.startswith("item3")]
    unit_complements = [sorted(set(unit_idx) - u.indices_of(items[k])) for k in unit_items]
    unit_choices_generate = all(
        set(np.flatnonzero(closure_idx(table, pick)).tolist()) == set(unit_idx)
        for pick in itertools.product(*unit_complements)
    )
    c1 = sorted(set(range(size)) - u.indices_of(items["item1"]))
    c2 = sorted(set(range(size)) - u.indices_of(items["item2"]))
    disjoint_from_units = not (set(c1) | set(c2)) & set(unit_idx)
    pairs_generate = all(closure_idx(table, unit_idx + [x, y]).all() for x in c1 for y in c2)
    d1 = sorted(set(range(size)) - u.indices_of(inverse_items["inverse-item1"]))
    inverse_generate = all(closure_idx(table, unit_idx + [x], inv).all() for x in d1)
    details["completeness"] = {
        "unit_choices_generate_units": unit_choices_generate,
        "non_unit_complements_avoid_units": disjoint_from_units,
        "all_pairs_generate": pairs_generate,
        "all_inverse_choices_generate": inverse_generate,
        "pairs_checked": len(c1) * len(c2),
    }
    ok &= unit_choices_generate and disjoint_from_units and pairs_generate and inverse_generate
    return Verdict("maximal-subsemigroups", bool(ok), details)


def check_inverse_item_generation(n):
    """Is the first maximal inverse item equal to ⟨I*_n, I_n⟩ (closure under ⋆)?

    It is not: a product of two elements without points has no points, and a
    point of either factor leaves points on both rows of the product, so
    ⟨I*_n, I_n⟩ misses every low-rank element with points on one row only.
    The verdict reports the literal equality; the details say what the gap is.
    """
    if n < 3:
        raise ValueError("needs n >= 3")
    _, inverse_items = maximal_item_sets(n)
    target = inverse_items["inverse-item1"]
    gens = family_elements(Family.ISTAR, n) + family_elements(Family.I, n)
    generated = set(closure(GeneratorSet(Product.STAR, gens)).elements)
    gap = target - generated
    one_sided = {a for a in target if bool(core.domain_data(a).codom) != bool(core.domain_data(a).coran)}
    return Verdict(
        "inverse-item-generation",
        generated == target,
        {
            "n": n,
            "generated_size": len(generated),
            "item_size": len(target),
            "generated_inside_item": generated <= target,
            "gap_size": len(gap),
            "gap_is_one_sided_points": gap == one_sided,
        },
        [format_element(a) for a in sorted(gap)[:10]],
    )
