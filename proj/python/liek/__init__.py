"""Kohn-Nirenberg quantization on 1-D model geometries.

Thin wrapper over the C++ core: build a model geometry, quantize registry
symbols to dense kernels, manipulate operators, recover symbols, and run the
verification suite.
"""

from ._core import (
    Geometry,
    Operator,
    add,
    adjoint,
    assemble,
    commutator,
    compose,
    conjugate_by_power,
    default_config,
    identity_operator,
    make_geometry,
    read_kernel_binary,
    recover_symbol,
    run_suite_json,
    subtract,
    write_kernel_binary,
    write_kernel_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Geometry",
    "Operator",
    "add",
    "adjoint",
    "assemble",
    "commutator",
    "compose",
    "conjugate_by_power",
    "default_config",
    "identity_operator",
    "make_geometry",
    "read_kernel_binary",
    "recover_symbol",
    "run_suite_json",
    "subtract",
    "write_kernel_binary",
    "write_kernel_csv",
]
