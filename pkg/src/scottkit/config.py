"""Budget configuration.

Budgets are plain values handed to the algorithms; nothing in the library
hard-codes them.  ``SCOTTKIT_BUDGET_PROFILE`` picks a preset.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

PROFILE_ENV = "SCOTTKIT_BUDGET_PROFILE"


@dataclass(frozen=True)
class Budgets:
    iso_size: int = 64
    aut_listing: int = 8
    orbit_tuples: int = 10**6
    bf_tuples: int = 200_000
    operator_input: int = 10_000
    fragment_elements: int = 200_000
    step_cap: int = 10_000
    tree_nodes: int = 100_000

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValueError(f"budget {name} must be positive, got {value}")


PROFILES = {
    "default": Budgets(),
    "small": Budgets(iso_size=32, orbit_tuples=10**5, bf_tuples=20_000,
                     fragment_elements=20_000, step_cap=2_000),
    "large": Budgets(iso_size=128, aut_listing=9, orbit_tuples=10**7,
                     bf_tuples=2_000_000, operator_input=100_000,
                     fragment_elements=2_000_000, step_cap=100_000),
}


def get_budgets(profile: str | None = None, **overrides) -> Budgets:
    """Return the preset named by ``profile`` (or the environment), with overrides applied."""
    name = profile or os.environ.get(PROFILE_ENV, "default")
    try:
        base = PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown budget profile {name!r}; choose from {sorted(PROFILES)}") from None
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(base, **overrides) if overrides else base
