"""Exact computation in the finite partition semigroups C_n, I*_n, PI*_n, wPI*_n and I_n."""

from .core import (
    Bipartition,
    BlockKind,
    BudgetExceeded,
    DegreeMismatch,
    Family,
    FamilyError,
    MalformedElement,
    PartitionError,
    Product,
    circ_mul,
    domain_data,
    format_element,
    inverse,
    make_named,
    multiply,
    natural_mul,
    parse,
    star_mul,
)
from .enumerate import GeneratorSet, closure, enumerate_family
from .universe import EquivRelation, SemigroupUniverse, Verdict

__all__ = [
    "Bipartition",
    "BlockKind",
    "BudgetExceeded",
    "DegreeMismatch",
    "EquivRelation",
    "Family",
    "FamilyError",
    "GeneratorSet",
    "MalformedElement",
    "PartitionError",
    "Product",
    "SemigroupUniverse",
    "Verdict",
    "circ_mul",
    "closure",
    "domain_data",
    "enumerate_family",
    "format_element",
    "inverse",
    "make_named",
    "multiply",
    "natural_mul",
    "parse",
    "star_mul",
]
