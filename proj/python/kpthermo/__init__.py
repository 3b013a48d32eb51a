"""Exact decision procedures for finite Kelvin-Planck theories.

The native module speaks exact rationals as "p/q" strings; the helpers here
convert measures and scales to and from fractions.Fraction so no precision
is lost on the Python side.
"""

from fractions import Fraction

from ._core import (  # noqa: F401
    Theory,
    builtin,
    builtin_names,
    cd_feasible,
    cd_pair_unique,
    check_kp,
    classify_scale,
    complete_to_cone,
    conjoin,
    density_witness,
    entropy_unique,
    example_d1_oracle,
    find_carnot,
    halfspace_equals,
    hotness_partition,
    hotter_than,
    is_kp,
    load_theory,
    make_halfspace,
    make_theory,
    member,
    order_report,
    q_set_coincides,
    reversible_connect,
    same_hotness,
    strongly_hotter,
    temp_unique,
    theory_from_json,
    validate,
    weakly_hotter,
)

__all__ = [name for name in dir() if not name.startswith("_")] + [
    "fractions_of",
    "strings_of",
    "carnot_ratio",
]


def fractions_of(mapping):
    """Convert a {key: "p/q"} mapping from the native layer to Fractions."""
    return {k: Fraction(v) for k, v in mapping.items()}


def strings_of(mapping):
    """Convert a {key: Fraction|int|str} mapping into native "p/q" strings."""
    return {k: str(Fraction(v)) for k, v in mapping.items()}


def carnot_ratio(theory, hotter, cooler):
    """T(hotter) / T(cooler) pinned by a Carnot element, or None."""
    found = find_carnot(theory, hotter, cooler)
    if found is None:
        return None
    c_prime, c = found
    return Fraction(c_prime) / Fraction(c)
