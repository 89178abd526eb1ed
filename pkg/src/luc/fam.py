"""Split semantics over the family oracle: direct pointwise constructors.

Types are family-form: total spaces of pairv(context element, value) with
first-projection displays.  Every constructor acts on fiber values only
and never mentions the context element, so all operations commute with
reindexing structurally.  This is the independent ground truth that the
split-replacement semantics is compared against.
"""

from __future__ import annotations

from itertools import product as iproduct

from .comp import Section, TypeOver, type_over
from .fin import (
    TERMINAL,
    FinFun,
    FinSet,
    atom,
    finfun,
    finset,
    fnval,
    pairv,
    tagv,
)
from .models import FamModel


class FamSemantics:
    """Context carriers are finite sets; types are family-form; terms are
    sections.  The interface matches the replacement semantics."""

    name = "fam"

    def __init__(self, model: FamModel | None = None):
        self.model = model or FamModel()

    # -- context and reindexing plumbing --------------------------------

    def terminal_ctx(self) -> FinSet:
        return TERMINAL

    def ext(self, a: TypeOver) -> FinSet:
        return a.total

    def ty_display(self, a: TypeOver) -> FinFun:
        return a.display

    def reindex_ty(self, a: TypeOver, f: FinFun) -> TypeOver:
        return self.model.reindex(a, f).src

    def ty_top(self, a: TypeOver, f: FinFun) -> FinFun:
        return self.model.reindex(a, f).top

    def reindex_tm(self, a: TypeOver, f: FinFun, t: Section) -> Section:
        lift = self.model.reindex(a, f)
        return Section(
            lift.src,
            finfun(f.dom, lift.src.total, lambda d: lift.solve(d, t.map(f(d)))),
        )

    def var0(self, a: TypeOver) -> Section:
        """The tautological section of a weakened over its own extension."""
        w = self.reindex_ty(a, a.display)
        return Section(w, finfun(a.total, w.total, lambda x: pairv(x, x.right)))

    def fiber_sizes(self, a: TypeOver) -> list[int]:
        return [len(a.fiber(c)) for c in a.ctx]

    # -- type formers -----------------------------------------------------

    def _fam(self, ctx: FinSet, values) -> TypeOver:
        return FamModel._fam(ctx, values)

    def unit(self, ctx: FinSet) -> TypeOver:
        return self._fam(ctx, lambda c: [atom("tt")])

    def zero(self, ctx: FinSet) -> TypeOver:
        return self._fam(ctx, lambda c: [])

    def sum(self, a: TypeOver, b: TypeOver) -> TypeOver:
        return self._fam(
            a.ctx,
            lambda c: [tagv("inl", x.right) for x in a.fiber(c)]
            + [tagv("inr", y.right) for y in b.fiber(c)],
        )

    def pi(self, a: TypeOver, b: TypeOver) -> TypeOver:
        def values(c):
            graphs = [[]]
            for x in a.fiber(c):
                opts = [w.right for w in b.fiber(x)]
                graphs = [g + [(x.right, w)] for g in graphs for w in opts] if opts else []
            return [fnval(g) for g in graphs]

        return self._fam(a.ctx, values)

    def sigma(self, a: TypeOver, b: TypeOver) -> TypeOver:
        return self._fam(
            a.ctx,
            lambda c: [pairv(x.right, y.right) for x in a.fiber(c) for y in b.fiber(x)],
        )

    def id_at(self, a: TypeOver, t: Section, u: Section) -> TypeOver:
        return self._fam(
            a.ctx,
            lambda c: [atom("refl")] if t.map(c) == u.map(c) else [],
        )

    # -- term formers -------------------------------------------------------

    def tt(self, ctx: FinSet) -> Section:
        un = self.unit(ctx)
        return Section(un, finfun(ctx, un.total, lambda c: pairv(c, atom("tt"))))

    def inl(self, a: TypeOver, b: TypeOver, t: Section) -> Section:
        sm = self.sum(a, b)
        return Section(
            sm,
            finfun(a.ctx, sm.total, lambda c: pairv(c, tagv("inl", t.map(c).right))),
        )

    def inr(self, a: TypeOver, b: TypeOver, t: Section) -> Section:
        sm = self.sum(a, b)
        return Section(
            sm,
            finfun(a.ctx, sm.total, lambda c: pairv(c, tagv("inr", t.map(c).right))),
        )

    def lam(self, a: TypeOver, b: TypeOver, t: Section) -> Section:
        """Abstraction of a section of b over the extension by a."""
        p = self.pi(a, b)
        def value(c):
            graph = [(x.right, t.map(x).right) for x in a.fiber(c)]
            return pairv(c, fnval(graph))
        return Section(p, finfun(a.ctx, p.total, value))

    def apply(self, a: TypeOver, b: TypeOver, f: Section, x: Section) -> Section:
        """Application of a product section to an argument section; lands
        in b reindexed along the argument's extension map."""
        sub = finfun(a.ctx, a.total, lambda c: x.map(c))
        bx = self.reindex_ty(b, sub)
        def value(c):
            graph = dict(f.map(c).right.graph)
            return pairv(c, graph[x.map(c).right])
        return Section(bx, finfun(a.ctx, bx.total, value))

    def pair(self, a: TypeOver, b: TypeOver, s: Section, t: Section) -> Section:
        """Pairing: s a section of a, t a section of b reindexed along s."""
        sg = self.sigma(a, b)
        return Section(
            sg,
            finfun(
                a.ctx,
                sg.total,
                lambda c: pairv(c, pairv(s.map(c).right, t.map(c).right)),
            ),
        )

    def case(self, a: TypeOver, b: TypeOver, c: TypeOver, d1: Section, d2: Section, s: Section) -> Section:
        """Sum elimination: c over the sum extension, d1/d2 sections of c
        reindexed along the inclusions, s the scrutinee; lands in c
        reindexed along s."""
        cs = self.reindex_ty(c, s.map)

        def value(g):
            v = s.map(g).right
            if v.tag == "inl":
                return pairv(g, d1.map(pairv(g, v.payload)).right)
            return pairv(g, d2.map(pairv(g, v.payload)).right)

        return Section(cs, finfun(s.of.ctx, cs.total, value))

    def split(self, a: TypeOver, b: TypeOver, c: TypeOver, d: Section, s: Section) -> Section:
        """Dependent-sum elimination; lands in c reindexed along s."""
        cs = self.reindex_ty(c, s.map)

        def value(g):
            v = s.map(g).right  # pairv(x value, y value)
            xe = pairv(g, v.left)
            ye = pairv(xe, v.right)
            return pairv(g, d.map(ye).right)

        return Section(cs, finfun(s.of.ctx, cs.total, value))

    def urec(self, c: TypeOver, d: Section, s: Section) -> Section:
        cs = self.reindex_ty(c, s.map)
        return Section(
            cs,
            finfun(s.of.ctx, cs.total, lambda g: pairv(g, d.map(g).right)),
        )

    def exfalso(self, c: TypeOver, s: Section) -> Section:
        # no context element can have a zero value; sections over the
        # inhabited part cannot exist, so the context must be empty there
        cs = self.reindex_ty(c, s.map)
        return Section(cs, finfun(s.of.ctx, cs.total, {}))

    def refl(self, a: TypeOver, t: Section) -> Section:
        ia = self.id_at(a, t, t)
        return Section(
            ia, finfun(a.ctx, ia.total, lambda c: pairv(c, atom("refl")))
        )

    def j_elim(self, a: TypeOver, c: TypeOver, d: Section, t: Section, u: Section, p: Section) -> Section:
        """Plain identity elimination at an instance.

        ``c`` lives over the doubled-plus-identity extension of a's
        context; ``d`` is a section of c reindexed along the reflexivity
        chain, over a's extension; lands in c reindexed along (t, u, p).
        Proof values only exist over agreeing endpoints, so transport
        along the reflexivity preimage is total.
        """
        refl_map = finfun(
            a.total, c.ctx, lambda x: pairv(pairv(x, x.right), atom("refl"))
        )
        lc = self.model.reindex(c, refl_map)
        sub = finfun(
            a.ctx,
            c.ctx,
            lambda g: pairv(pairv(t.map(g), u.map(g).right), p.map(g).right),
        )
        cs = self.reindex_ty(c, sub)
        return Section(
            cs,
            finfun(
                a.ctx,
                cs.total,
                lambda g: pairv(g, lc.top(d.map(t.map(g))).right),
            ),
        )
