"""Cayley tables, tuple arithmetic, structural probes, isotopies and the built-in catalog."""

from algebra.catalog import (
    block,
    block_of_cyclic,
    catalog,
    cyclic,
    direct_product,
    example1,
    example2,
    from_spec,
    random_latin,
    symmetric,
)
from algebra.cayley import CayleyTable, format_cayley, parse_cayley, validate_latin
from algebra.isotopy import Isotopy, apply_isotopy
from algebra.probes import StructureProbe, structure_probe
from algebra.tuples import (
    Permutation,
    TupleCode,
    coordinate_action,
    eval_iterated,
    multiply_tuples,
    pi_product,
    symbol_action,
)

__all__ = [
    "CayleyTable",
    "Isotopy",
    "Permutation",
    "StructureProbe",
    "TupleCode",
    "apply_isotopy",
    "block",
    "block_of_cyclic",
    "catalog",
    "coordinate_action",
    "cyclic",
    "direct_product",
    "eval_iterated",
    "example1",
    "example2",
    "format_cayley",
    "from_spec",
    "multiply_tuples",
    "parse_cayley",
    "pi_product",
    "random_latin",
    "structure_probe",
    "symbol_action",
    "symmetric",
    "validate_latin",
]
