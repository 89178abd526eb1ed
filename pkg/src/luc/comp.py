"""Comprehension-category kernel over finite sets.

A type over a context is a display map into it; a model supplies a
cleaving (chosen cartesian lifts) plus optional weakly stable constructor
providers.  Cartesian lifts are pullback squares here, so the pair
(fiber point, top image) pins down each element of a reindexed total
space; ``CartesianLift.solve`` and ``induce`` exploit that uniqueness and
are the workhorses for transporting maps between chosen reindexings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterator

from .fin import FinFun, FinSet, Val, finfun, finset, identity, render


@dataclass(frozen=True)
class TypeOver:
    """A type in the fiber over ``ctx``: its total space and display map."""

    ctx: FinSet
    total: FinSet
    display: FinFun
    _fibers: dict = field(init=False, repr=False, compare=False, hash=False)
    _h: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.display.dom != self.total or self.display.cod != self.ctx:
            raise ValueError("display must map total onto ctx")
        fibers: dict[Val, list] = {c: [] for c in self.ctx}
        for e in self.total:
            fibers[self.display(e)].append(e)
        object.__setattr__(self, "_fibers", {c: tuple(v) for c, v in fibers.items()})
        object.__setattr__(self, "_h", hash((self.ctx, self.total, self.display)))

    def __hash__(self):
        return self._h

    def fiber(self, c: Val) -> tuple[Val, ...]:
        return self._fibers[c]


def type_over(ctx: FinSet, total: FinSet, display: FinFun) -> TypeOver:
    return TypeOver(ctx, total, display)


@dataclass(frozen=True)
class Section:
    """A section of a display map: a point of the type over every context element."""

    of: TypeOver
    map: FinFun

    def __post_init__(self):
        if self.map.dom != self.of.ctx or self.map.cod != self.of.total:
            raise ValueError("section must map ctx into total")
        if any(self.of.display(self.map(c)) != c for c in self.of.ctx):
            raise ValueError("not a section of the display map")


def all_sections(t: TypeOver) -> Iterator[Section]:
    """Every section of t, in a deterministic order (lexicographic graphs)."""
    fibers = [t.fiber(c) for c in t.ctx]
    if any(not f for f in fibers):
        return
    for combo in iproduct(*fibers):
        yield Section(t, FinFun(t.ctx, t.total, tuple(zip(t.ctx.elements, combo))))


@dataclass(frozen=True)
class CartesianLift:
    """A chosen cartesian lift: src = dst reindexed along ``over``.

    The square (src.display, top) over (over, dst.display) must commute
    and be a pullback; ``solve`` inverts the square's joint injectivity.
    """

    src: TypeOver
    dst: TypeOver
    over: FinFun
    top: FinFun
    _solve: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = {(self.src.display(e), self.top(e)): e for e in self.src.total}
        if len(table) != len(self.src.total):
            raise ValueError("lift square is not jointly injective")
        object.__setattr__(self, "_solve", table)

    def __hash__(self):
        return hash((self.src, self.dst, self.over, self.top))

    def solve(self, base: Val, dst_elem: Val) -> Val:
        """The unique src element over ``base`` mapping to ``dst_elem``."""
        try:
            return self._solve[(base, dst_elem)]
        except KeyError:
            raise LookupError(
                f"no src element over {render(base)} hitting {render(dst_elem)}"
            ) from None

    def commutes(self) -> bool:
        return (self.dst.display @ self.top) == (self.over @ self.src.display)

    def is_pullback(self) -> bool:
        if not self.commutes():
            return False
        want = {
            (d, a)
            for d in self.over.dom
            for a in self.dst.total
            if self.over(d) == self.dst.display(a)
        }
        got = [(self.src.display(e), self.top(e)) for e in self.src.total]
        return len(got) == len(set(got)) and set(got) == want


def identity_lift(t: TypeOver) -> CartesianLift:
    return CartesianLift(t, t, identity(t.ctx), identity(t.total))


def paste(outer: CartesianLift, inner: CartesianLift) -> CartesianLift:
    """Compose lifts: inner reindexes outer.src further down."""
    if inner.dst != outer.src:
        raise ValueError("lifts do not compose")
    return CartesianLift(inner.src, outer.dst, outer.over @ inner.over, outer.top @ inner.top)


def induce(f: FinFun, src_lift: CartesianLift, dst_lift: CartesianLift, base: FinFun) -> FinFun:
    """Reindex a fiberwise map f: X -> Y along chosen lifts of X and Y.

    Given f over g (i.e. dst_of_Y.display . f = g . dst_of_X.display for
    the base map g implied by the lifts) the induced map src_X -> src_Y
    over ``base`` is the unique one commuting with both top maps.
    """
    if f.dom != src_lift.dst.total or f.cod != dst_lift.dst.total:
        raise ValueError("f does not match the given lifts")
    return finfun(
        src_lift.src.total,
        dst_lift.src.total,
        lambda e: dst_lift.solve(base(src_lift.src.display(e)), f(src_lift.top(e))),
    )


def canonical_iso(a: CartesianLift, b: CartesianLift) -> FinFun:
    """The unique iso a.src -> b.src between two lifts of the same map."""
    if a.dst != b.dst or a.over != b.over:
        raise ValueError("lifts are not of the same reindexing")
    return finfun(a.src.total, b.src.total, lambda e: b.solve(a.src.display(e), a.top(e)))


def present(model, e: TypeOver, n: FinFun, m: FinFun) -> CartesianLift:
    """Present E reindexed along n.m as a further reindexing along m of E
    reindexed along n.  The top map is the unique solution of its square."""
    outer = model.reindex(e, n)
    inner = model.reindex(e, n @ m)
    top = finfun(
        inner.src.total,
        outer.src.total,
        lambda x: outer.solve(m(inner.src.display(x)), inner.top(x)),
    )
    return CartesianLift(inner.src, outer.src, m, top)


def connecting(model, e: TypeOver, n: FinFun, m: FinFun) -> FinFun:
    """Canonical map from E reindexed along n.m to E reindexed along n."""
    return present(model, e, n, m).top


def section_pullback(s: Section, lift: CartesianLift) -> Section:
    """Reindex a section of lift.dst to a section of lift.src."""
    if s.of != lift.dst:
        raise ValueError("section does not belong to the lifted type")
    return Section(
        lift.src,
        finfun(lift.src.ctx, lift.src.total, lambda d: lift.solve(d, s.map(lift.over(d)))),
    )


def fiber_map_over(src: TypeOver, dst: TypeOver, m: FinFun) -> bool:
    """True when m: src.total -> dst.total lies over the shared context."""
    return (
        m.dom == src.total
        and m.cod == dst.total
        and (dst.display @ m) == src.display
    )


def enumerate_fiber_maps(src: TypeOver, dst: TypeOver) -> Iterator[FinFun]:
    """All maps src -> dst over the common context, deterministically."""
    if src.ctx != dst.ctx:
        raise ValueError("types live over different contexts")
    choices = []
    for e in src.total:
        cands = dst.fiber(src.display(e))
        if not cands:
            return
        choices.append([(e, c) for c in cands])
    if not choices:
        yield FinFun(src.total, dst.total, ())
        return
    for combo in iproduct(*choices):
        yield FinFun(src.total, dst.total, tuple(combo))
