"""Chosen finite limits and dependent exponentials in the category of finite sets.

Constructed objects always get freshly structured elements (pairv for
products, a "pb" tag for pullbacks, an "fn" tag for exponentials), so
iterating a construction is visibly different from taking it in one step.
That non-strictness is deliberate: it is what the splitting machinery in
the rest of the package has to repair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .fin import (
    FinFun,
    FinSet,
    Val,
    all_functions,
    atom,
    atoms,
    finfun,
    finset,
    fnval,
    pairv,
    render,
    tagv,
)
from .report import CheckReport


def product(x: FinSet, y: FinSet) -> tuple[FinSet, FinFun, FinFun]:
    """Binary product with elements pairv(a, b) and the two projections."""
    carrier = finset(pairv(a, b) for a in x for b in y)
    p1 = finfun(carrier, x, lambda e: e.left)
    p2 = finfun(carrier, y, lambda e: e.right)
    return carrier, p1, p2


def pairing(f: FinFun, g: FinFun) -> FinFun:
    """The mediating map <f, g> into the chosen product of the codomains."""
    if f.dom != g.dom:
        raise ValueError("pairing requires a common domain")
    carrier, _, _ = product(f.cod, g.cod)
    return finfun(f.dom, carrier, lambda w: pairv(f(w), g(w)))


@dataclass(frozen=True)
class SpanLimit:
    """Chosen pullback of a cospan: apex with its two legs."""

    apex: FinSet
    leg1: FinFun
    leg2: FinFun


def pullback(f: FinFun, g: FinFun) -> SpanLimit:
    """Pullback of f and g over their shared codomain.

    Apex elements are tagv("pb", pairv(x, y)) for the matching pairs; the
    construction is not strictly functorial (iterating it nests tags).
    """
    if f.cod != g.cod:
        raise ValueError("pullback requires a common codomain")
    matches = [(x, y) for x in f.dom for y in g.dom if f(x) == g(y)]
    apex = finset(tagv("pb", pairv(x, y)) for x, y in matches)
    leg1 = finfun(apex, f.dom, lambda e: e.payload.left)
    leg2 = finfun(apex, g.dom, lambda e: e.payload.right)
    return SpanLimit(apex, leg1, leg2)


@dataclass(frozen=True)
class DepExp:
    """Dependent exponential of g along f, with its evaluation map.

    ``proj`` is the exponential object as a map into f's codomain; the
    fiber over x is the set of sections of g over the f-fiber at x, each
    element tagv("fn", pairv(x, fnval(graph))).  ``eval`` is defined on the
    chosen pullback of proj against f and lands in g's domain.
    """

    base: FinSet
    proj: FinFun
    eval: FinFun

    @property
    def total(self) -> FinSet:
        return self.proj.dom


def sections_over(fiber: tuple[Val, ...], g: FinFun) -> list[tuple[tuple[Val, Val], ...]]:
    """All graphs of sections of g over the given elements of g's codomain."""
    choices = []
    for y in fiber:
        pre = g.preimage(y)
        if not pre:
            return []
        choices.append([(y, z) for z in pre])
    return [tuple(combo) for combo in iproduct(*choices)] if choices else [()]


def dep_exp(f: FinFun, g: FinFun) -> DepExp:
    """Exponential of g: Z -> Y along f: Y -> X, verified lazily by check_lf."""
    if g.cod != f.dom:
        raise ValueError("dep_exp requires cod(g) = dom(f)")
    x_set = f.cod
    elems = []
    for x in x_set:
        fiber = f.preimage(x)
        for graph in sections_over(fiber, g):
            elems.append(tagv("fn", pairv(x, fnval(graph))))
    total = finset(elems)
    proj = finfun(total, x_set, lambda e: e.payload.left)
    square = pullback(proj, f)
    ev_pairs = {}
    for e in square.apex:
        s, y = e.payload.left, e.payload.right
        graph = dict(s.payload.right.graph)
        ev_pairs[e] = graph[y]
    ev = finfun(square.apex, g.dom, ev_pairs)
    return DepExp(x_set, proj, ev)


def transpose(d: DepExp, f: FinFun, h: FinFun, k: FinFun) -> FinFun:
    """Send k: W -> total over h: W -> X to the corresponding W x_X Y -> Z.

    Inverse direction of the exponential adjunction; used by the checker.
    """
    square = pullback(h, f)
    out = {}
    for e in square.apex:
        w, y = e.payload.left, e.payload.right
        s = k(w)
        key = tagv("pb", pairv(s, y))
        out[e] = d.eval(key)
    return finfun(square.apex, d.eval.cod, out)


def untranspose(d: DepExp, f: FinFun, h: FinFun, m: FinFun, g: FinFun) -> FinFun:
    """Send m: W x_X Y -> Z over Y to the map W -> total it corresponds to."""
    out = {}
    for w in h.dom:
        x = h(w)
        graph = []
        for y in f.preimage(x):
            z = m(tagv("pb", pairv(w, y)))
            graph.append((y, z))
        out[w] = tagv("fn", pairv(x, fnval(graph)))
    return finfun(h.dom, d.total, out)


def check_adjunction(d: DepExp, f: FinFun, g: FinFun, w: FinSet, report: CheckReport) -> None:
    """Verify the exponential bijection for every map h: W -> X."""
    for h in all_functions(w, f.cod):
        # maps W -> total over h
        overs = [k for k in all_functions(w, d.total) if (d.proj @ k) == h]
        square = pullback(h, f)
        unders = [
            m
            for m in all_functions(square.apex, g.dom)
            if (g @ m) == finfun(square.apex, f.dom, lambda e: e.payload.right)
        ]
        report.tick()
        if len(overs) != len(unders):
            report.fail(
                f"hom counts differ ({len(overs)} vs {len(unders)}) for h={render(h)}"
            )
            continue
        seen = set()
        for k in overs:
            m = transpose(d, f, h, k)
            if m not in unders:
                report.fail(f"transpose of {render(k)} lands outside the hom set")
                break
            if untranspose(d, f, h, m, g) != k:
                report.fail(f"round trip failed for {render(k)}")
                break
            seen.add(m)
        else:
            if len(seen) != len(overs):
                report.fail(f"transpose not injective over h={render(h)}")


def check_lf(max_base: int = 2, max_fiber: int = 2, max_w: int = 2, dexp=dep_exp) -> CheckReport:
    """Exhaustively certify dependent exponentials within the given bounds.

    Enumerates all f: Y -> X with |X| <= max_base and fibers of size
    <= max_fiber, all g: Z -> Y likewise, and checks the adjunction
    bijection against every test object W with |W| <= max_w.  The ``dexp``
    hook lets negative-control tests inject a corrupted construction.
    """
    report = CheckReport("lf-certification")
    for nx in range(0, max_base + 1):
        x_set = atoms("x", nx)
        for y_sizes in iproduct(range(max_fiber + 1), repeat=nx):
            y_elems = {}
            for i, x in enumerate(x_set):
                for j in range(y_sizes[i]):
                    y_elems[tagv("y", pairv(x, atom(str(j))))] = x
            y_set = finset(y_elems)
            f = finfun(y_set, x_set, y_elems)
            for z_sizes in iproduct(range(max_fiber + 1), repeat=len(y_set)):
                z_elems = {}
                for i, y in enumerate(y_set):
                    for j in range(z_sizes[i]):
                        z_elems[tagv("z", pairv(y, atom(str(j))))] = y
                z_set = finset(z_elems)
                g = finfun(z_set, y_set, z_elems)
                d = dexp(f, g)
                for nw in range(0, max_w + 1):
                    check_adjunction(d, f, g, atoms("w", nw), report)
    return report
