"""Constructor witnesses: the data of one weakly stable instance each.

A witness packages a constructor's formation/introduction data over some
context.  Reindexing a witness along a substitution transports every
component through the model's cleaving; the induced maps are the unique
solutions of the corresponding pullback squares.
"""

from __future__ import annotations

from dataclasses import dataclass

from .comp import CartesianLift, TypeOver, induce, paste
from .fin import FinFun, FinSet, finfun, finset, identity, pairv


@dataclass(frozen=True)
class SumWitness:
    ctx: FinSet
    left: TypeOver
    right: TypeOver
    sum: TypeOver
    inl: FinFun  # left.total -> sum.total over ctx
    inr: FinFun


@dataclass(frozen=True)
class PiWitness:
    ctx: FinSet
    dom: TypeOver  # A over ctx
    cod: TypeOver  # B over dom.total
    pi: TypeOver  # over ctx
    weak: CartesianLift  # pi reindexed along dom.display
    app: FinFun  # weak.src.total -> cod.total over dom.total


@dataclass(frozen=True)
class SigmaWitness:
    ctx: FinSet
    dom: TypeOver
    cod: TypeOver
    sig: TypeOver
    pair: FinFun  # cod.total -> sig.total over ctx


@dataclass(frozen=True)
class IdWitness:
    ctx: FinSet
    base: TypeOver  # A over ctx
    weak: CartesianLift  # A along its own display; src total plays ctx.A.A
    ident: TypeOver  # over weak.src.total
    refl: FinFun  # base.total -> ident.total over the diagonal

    def diag(self, x):
        """The weak.src element representing (x, x)."""
        return self.weak.solve(x, x)


@dataclass(frozen=True)
class UnitWitness:
    ctx: FinSet
    unit: TypeOver
    tt: FinFun  # ctx -> unit.total, a section


@dataclass(frozen=True)
class ZeroWitness:
    ctx: FinSet
    zero: TypeOver


@dataclass(frozen=True)
class WWitness:
    """Well-founded trees: every total element decomposes as root + branches."""

    ctx: FinSet
    dom: TypeOver  # node labels, over ctx
    cod: TypeOver  # branching arity, over dom.total
    w: TypeOver  # over ctx
    root: FinFun  # w.total -> dom.total over ctx
    children: FinFun  # pairv(tree, branch) -> w.total

    def child(self, tree, branch):
        return self.children(pairv(tree, branch))


def reindex_sum(model, wt: SumWitness, sigma: FinFun) -> SumWitness:
    ll = model.reindex(wt.left, sigma)
    lr = model.reindex(wt.right, sigma)
    ls = model.reindex(wt.sum, sigma)
    one = identity(sigma.dom)
    return SumWitness(
        sigma.dom,
        ll.src,
        lr.src,
        ls.src,
        induce(wt.inl, ll, ls, one),
        induce(wt.inr, lr, ls, one),
    )


def reindex_pi(model, wt: PiWitness, sigma: FinFun) -> PiWitness:
    ld = model.reindex(wt.dom, sigma)
    lc = model.reindex(wt.cod, ld.top)
    lp = model.reindex(wt.pi, sigma)
    lw = model.reindex(wt.weak.src, ld.top)
    # weak': present lw.src as lp.src reindexed along the new display
    tall = paste(wt.weak, lw)  # lw.src over pi, along sigma . display'
    top2 = finfun(
        lw.src.total,
        lp.src.total,
        lambda e: lp.solve(ld.src.display(lw.src.display(e)), tall.top(e)),
    )
    weak2 = CartesianLift(lw.src, lp.src, ld.src.display, top2)
    app2 = induce(wt.app, lw, lc, ld.top)
    return PiWitness(sigma.dom, ld.src, lc.src, lp.src, weak2, app2)


def reindex_sigma(model, wt: SigmaWitness, sigma: FinFun) -> SigmaWitness:
    ld = model.reindex(wt.dom, sigma)
    lc = model.reindex(wt.cod, ld.top)
    ls = model.reindex(wt.sig, sigma)
    pair2 = finfun(
        lc.src.total,
        ls.src.total,
        lambda b: ls.solve(ld.src.display(lc.src.display(b)), wt.pair(lc.top(b))),
    )
    return SigmaWitness(sigma.dom, ld.src, lc.src, ls.src, pair2)


def reindex_id(model, wt: IdWitness, sigma: FinFun) -> IdWitness:
    la = model.reindex(wt.base, sigma)
    lw = model.reindex(wt.weak.src, la.top)
    tall = paste(wt.weak, lw)
    top2 = finfun(
        lw.src.total,
        la.src.total,
        lambda e: la.solve(la.src.display(lw.src.display(e)), tall.top(e)),
    )
    weak2 = CartesianLift(lw.src, la.src, la.src.display, top2)
    lid = model.reindex(wt.ident, lw.top)
    refl2 = finfun(
        la.src.total,
        lid.src.total,
        lambda a: lid.solve(weak2.solve(a, a), wt.refl(la.top(a))),
    )
    return IdWitness(sigma.dom, la.src, weak2, lid.src, refl2)


def reindex_unit(model, wt: UnitWitness, sigma: FinFun) -> UnitWitness:
    lu = model.reindex(wt.unit, sigma)
    tt2 = finfun(sigma.dom, lu.src.total, lambda d: lu.solve(d, wt.tt(sigma(d))))
    return UnitWitness(sigma.dom, lu.src, tt2)


def reindex_zero(model, wt: ZeroWitness, sigma: FinFun) -> ZeroWitness:
    lz = model.reindex(wt.zero, sigma)
    return ZeroWitness(sigma.dom, lz.src)


def reindex_w(model, wt: WWitness, sigma: FinFun) -> WWitness:
    ld = model.reindex(wt.dom, sigma)
    lc = model.reindex(wt.cod, ld.top)
    lw = model.reindex(wt.w, sigma)
    one = identity(sigma.dom)
    root2 = induce(wt.root, lw, ld, one)
    pair_dom = finset(
        pairv(t, b)
        for t in lw.src.total
        for b in lc.src.total
        if lc.src.display(b) == root2(t)
    )
    children2 = finfun(
        pair_dom,
        lw.src.total,
        lambda p: lw.solve(
            lw.src.display(p.left),
            wt.children(pairv(lw.top(p.left), lc.top(p.right))),
        ),
    )
    return WWitness(sigma.dom, ld.src, lc.src, lw.src, root2, children2)
