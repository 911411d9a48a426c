"""Exact lattice computations for isogenies of abelian varieties."""

from ._core import (
    DomainError,
    InputError,
    canonicalize,
    cli,
    compose,
    conjugate,
    contains,
    dual,
    gram_from_type,
    index_over_base,
    kernel_structure,
    lattice_from_kernel,
    list_scenarios,
    polarization_type,
    pullback,
    pushforward,
    required_precision,
    run_scenario,
)

__all__ = [
    "DomainError",
    "InputError",
    "canonicalize",
    "cli",
    "compose",
    "conjugate",
    "contains",
    "dual",
    "gram_from_type",
    "index_over_base",
    "kernel_structure",
    "lattice_from_kernel",
    "list_scenarios",
    "polarization_type",
    "pullback",
    "pushforward",
    "required_precision",
    "run_scenario",
]
