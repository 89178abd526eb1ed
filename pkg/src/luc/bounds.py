"""Enumeration bounds shared by every checker, with named profiles."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from itertools import product as iproduct

from .fin import FinSet, FinFun, all_functions, atom, atoms, finfun, finset, pairv, tagv


@dataclass(frozen=True)
class Bounds:
    """One record of size limits; sigma pools are always exhaustive."""

    max_ctx: int = 3
    max_fiber: int = 2
    max_universe: int = 3
    telescope_depth: int = 2  # Frobenius premise-chain length in tests
    max_test_object: int = 2  # W in adjunction checks
    seed: int = 1789


PROFILES = {
    "smoke": Bounds(max_ctx=2, max_fiber=1, max_universe=2, telescope_depth=1, max_test_object=1),
    "default": Bounds(),
    "deep": Bounds(max_ctx=3, max_fiber=2, max_universe=4, telescope_depth=2, max_test_object=2),
}


def from_env(default: str = "default") -> Bounds:
    profile = os.environ.get("LUC_BOUNDS_PROFILE", default)
    if profile not in PROFILES:
        raise KeyError(f"unknown bounds profile {profile!r}")
    return PROFILES[profile]


def contexts(bounds: Bounds, prefix: str = "g") -> list[FinSet]:
    return [atoms(prefix, n) for n in range(bounds.max_ctx + 1)]


def substitutions(dom: FinSet, cod: FinSet) -> list[FinFun]:
    return list(all_functions(dom, cod))


def composable_pairs(bounds: Bounds):
    """All (sigma, tau) with tau: Theta -> Delta, sigma: Delta -> Gamma."""
    for gamma in contexts(bounds, "g"):
        for delta in contexts(bounds, "d"):
            for sigma in all_functions(delta, gamma):
                for theta in contexts(bounds, "t"):
                    for tau in all_functions(theta, delta):
                        yield sigma, tau


def universe_pool(model, bounds: Bounds, max_base: int | None = None, prefix: str = "u"):
    """Small (base, universe type) pairs for local-type enumeration."""
    out = []
    limit = bounds.max_universe if max_base is None else max_base
    for n in range(limit + 1):
        base = atoms(prefix, n)
        for t in model.types_over(base, bounds.max_fiber):
            out.append((base, t))
    return out
