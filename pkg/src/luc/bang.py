"""The split replacement of a backing comprehension category.

A type over a context is here a local universe (a base object with a
type over it) plus a name map picking out the family actually used; the
realization is the backing model's reindexing of the universe type along
the name.  Reindexing composes name maps and touches nothing else, which
makes the replacement split on the nose even when the backing cleaving
is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .comp import (
    CartesianLift,
    Section,
    TypeOver,
    enumerate_fiber_maps,
    fiber_map_over,
    section_pullback,
)
from .fin import FinFun, FinSet, finfun, identity, render
from .report import CheckReport


@dataclass(frozen=True)
class LocalType:
    """A local universe (base, total) with a name map from the context."""

    ctx: FinSet
    base: FinSet
    total: TypeOver
    name: FinFun

    def __post_init__(self):
        if self.total.ctx != self.base:
            raise ValueError("universe type must live over the universe base")
        if self.name.dom != self.ctx or self.name.cod != self.base:
            raise ValueError("name must map the context into the universe base")


def bang_reindex(a: LocalType, sigma: FinFun) -> LocalType:
    """Reindexing in the replacement: compose the name map, nothing else."""
    if sigma.cod != a.ctx:
        raise ValueError("substitution does not target the type's context")
    return LocalType(sigma.dom, a.base, a.total, a.name @ sigma)


def realize(model, a: LocalType) -> CartesianLift:
    """The backing reindexing of the universe type along the name."""
    return model.reindex(a.total, a.name)


def comprehension(model, a: LocalType) -> TypeOver:
    """The display map of the realization; its total is the extended context."""
    return realize(model, a).src


def bang_top(model, a: LocalType, sigma: FinFun) -> FinFun:
    """The canonical realization-level map [a[sigma]] -> [a] over sigma."""
    lift = realize(model, a)
    lifted = realize(model, bang_reindex(a, sigma))
    return finfun(
        lifted.src.total,
        lift.src.total,
        lambda e: lift.solve(sigma(lifted.src.display(e)), lifted.top(e)),
    )


def bang_lift(model, a: LocalType, sigma: FinFun) -> CartesianLift:
    """The chosen cartesian lift of the replacement, at realization level."""
    return CartesianLift(
        comprehension(model, bang_reindex(a, sigma)),
        comprehension(model, a),
        sigma,
        bang_top(model, a, sigma),
    )


def embed(ctx: FinSet, t: TypeOver) -> LocalType:
    """A backing type as a local-universe type: its own context as base."""
    if t.ctx != ctx:
        raise ValueError("type does not live over the given context")
    return LocalType(ctx, ctx, t, identity(ctx))


def local_section(model, a: LocalType, mapping) -> Section:
    return Section(comprehension(model, a), mapping)


def section_reindex(model, a: LocalType, sigma: FinFun, s: Section) -> Section:
    """Pull a section of a back along sigma, through the chosen lift."""
    return section_pullback(s, bang_lift(model, a, sigma))


@dataclass(frozen=True)
class LocalTypeMap:
    """A morphism of the replacement over sigma: a realization-level map."""

    src: LocalType
    dst: LocalType
    over: FinFun
    map: FinFun

    def validate(self, model) -> None:
        s = comprehension(model, self.src)
        d = comprehension(model, self.dst)
        if self.map.dom != s.total or self.map.cod != d.total:
            raise ValueError("map endpoints do not match the realizations")
        if (d.display @ self.map) != (self.over @ s.display):
            raise ValueError("map does not lie over the base substitution")


def check_split_laws(model, pool, report: CheckReport) -> None:
    """Both split-fibration laws on the nose, objects and chosen lifts.

    ``pool`` yields (a, sigma, tau) with sigma composable with a and tau
    composable with sigma.
    """
    for a, sigma, tau in pool:
        report.tick()
        if bang_reindex(a, identity(a.ctx)) != a:
            report.fail(f"identity law object: {render(a.name)}")
            continue
        if bang_top(model, a, identity(a.ctx)) != identity(comprehension(model, a).total):
            report.fail(f"identity law lift: {render(a.name)}")
            continue
        one_step = bang_reindex(a, sigma @ tau)
        two_step = bang_reindex(bang_reindex(a, sigma), tau)
        if one_step != two_step:
            report.fail(f"composition law object: {render(a.name)}")
            continue
        top_one = bang_top(model, a, sigma @ tau)
        top_two = bang_top(model, a, sigma) @ bang_top(model, bang_reindex(a, sigma), tau)
        if top_one != top_two:
            report.fail(f"composition law lift: {render(a.name)}")


def check_comprehension_cartesian(model, pool, report: CheckReport) -> None:
    """The replacement's comprehension sends chosen lifts to pullback squares."""
    for a, sigma, _ in pool:
        report.tick()
        if not bang_lift(model, a, sigma).is_pullback():
            report.fail(f"non-pullback comprehension square: {render(a.name)}")


def check_equivalence(model, ctxs, max_fiber: int, local_pool, drop=None) -> CheckReport:
    """Fiberwise equivalence with the backing category.

    Essential surjectivity: every backing type over a context is
    isomorphic over it to the realization of its embedding.  Full
    faithfulness: replacement morphisms between two local types over a
    shared context coincide with the maps between their realizations.
    ``drop`` is a negative-control hook filtering the replacement-side
    hom enumeration.
    """
    report = CheckReport("fiberwise-equivalence")
    for ctx in ctxs:
        for t in model.types_over(ctx, max_fiber):
            report.tick()
            realized = comprehension(model, embed(ctx, t))
            isos = [
                f
                for f in enumerate_fiber_maps(realized, t)
                if f.is_bijective()
            ]
            if not isos:
                report.fail(f"no iso onto embedding realization over {render(ctx)}")
    for a, b in local_pool:
        report.tick()
        ra = comprehension(model, a)
        rb = comprehension(model, b)
        bang_homs = [
            LocalTypeMap(b, a, identity(a.ctx), f)
            for f in enumerate_fiber_maps(rb, ra)
        ]
        if drop is not None:
            bang_homs = [h for h in bang_homs if not drop(h)]
        backing_homs = list(enumerate_fiber_maps(rb, ra))
        if len(bang_homs) != len(backing_homs) or {
            h.map for h in bang_homs
        } != set(backing_homs):
            report.fail(
                f"hom mismatch over {render(a.ctx)}: "
                f"{len(bang_homs)} vs {len(backing_homs)}"
            )
    return report
