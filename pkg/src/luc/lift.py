"""Strictly stable constructors on the split replacement.

Every constructor follows one discipline: fix the input universes, build
the representing object for the rest of the rule's premises, apply the
backing model's weakly stable structure once at the universal instance
over that object (memoized per structural universe key), and pull the
result back along the classifying map of the actual instance.  Context
data enters only through classification and map transport, both strictly
natural, so every operation commutes with reindexing on the nose.

All transports stay in one-step form: realized objects are single
reindexings of universe types along composed name maps, and comparison
maps are unique solutions of lift squares.  Two maps built by composing
the same names are therefore structurally identical, which is exactly
what the stability equations need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .bang import LocalType, bang_reindex, comprehension, realize
from .bounds import Bounds
from .comp import (
    CartesianLift,
    Section,
    TypeOver,
    connecting,
    enumerate_fiber_maps,
)
from .fin import (
    TERMINAL,
    FinFun,
    FinSet,
    atom,
    finfun,
    finset,
    identity,
    pairv,
    terminal_map,
)
from .limits import pairing, product
from .models import (
    apply_readout,
    copair,
    id_elim,
    lambda_abs,
    split_pair,
    unit_elim,
    w_fold as w_fold_elim,
    w_rec as w_rec_elim,
)
from .universes import Ref, Telescope, pull_chain
from .witness import IdWitness, PiWitness, SigmaWitness, SumWitness, UnitWitness, WWitness


# ----------------------------------------------------------------------
# stable classes of dependent products


@dataclass
class StableClassPi:
    """A chooser plus membership predicates for good products/abstractions."""

    name: str
    choose: Callable[[FinSet, TypeOver, TypeOver], PiWitness]
    good_pi: Callable[[PiWitness], bool]
    good_lambda: Callable[[PiWitness, Section, Section], bool]


def derive_stable_class(model, source: str = "weakly-stable", bounds: Bounds | None = None) -> StableClassPi:
    """Build a stable class from the model's structure.

    ``weakly-stable``: all weakly stable products count as good (checked
    by the brute-force property at small bounds) and the chooser returns
    the model's provider output.  ``pseudo-stable``: good means
    isomorphic to the canonical choice compatibly with application.
    """
    bounds = bounds or Bounds(max_ctx=1, max_fiber=1)

    if source == "weakly-stable":
        from .checks import check_weak_stability_pi

        return StableClassPi(
            "weakly-stable",
            model.pi_witness,
            lambda wt: check_weak_stability_pi(model, wt, bounds).passed,
            lambda wt, t, cand: apply_readout(wt, cand) == t,
        )

    if source == "pseudo-stable":

        def good_pi(wt: PiWitness) -> bool:
            canon = model.pi_witness(wt.ctx, wt.dom, wt.cod)
            for iso in enumerate_fiber_maps(wt.pi, canon.pi):
                if not iso.is_bijective():
                    continue
                if all(
                    canon.app(
                        canon.weak.solve(wt.weak.src.display(e), iso(wt.weak.top(e)))
                    )
                    == wt.app(e)
                    for e in wt.weak.src.total
                ):
                    return True
            return False

        return StableClassPi(
            "pseudo-stable",
            model.pi_witness,
            good_pi,
            lambda wt, t, cand: apply_readout(wt, cand) == t,
        )

    raise ValueError(f"unknown stable-class source {source!r}")


# ----------------------------------------------------------------------
# universal-instance records


@dataclass
class SumUniv:
    ea: TypeOver
    eb: TypeOver
    prod: FinSet
    p1: FinFun
    p2: FinFun
    wt: SumWitness


@dataclass
class ElimUniv:
    """A memoized universal eliminator: telescope, carrier data, section."""

    tele: Telescope
    pf: FinFun  # carrier -> the formation universe base
    cmap: FinFun  # universal motive name
    clift: CartesianLift  # motive universe reindexed along cmap
    phi: Section  # the universal elimination section
    chain: list[Ref]  # realized chain whose top carries phi's domain


@dataclass
class WedgeUniv:
    ea: TypeOver
    eb: TypeOver
    tele: Telescope
    carrier: FinSet
    pa: FinFun
    bmap: FinFun
    dom: TypeOver  # ea along pa
    cod: TypeOver  # eb along bmap


@dataclass
class PiUniv:
    wedge: WedgeUniv
    wt: PiWitness


@dataclass
class PiLambdaUniv:
    tele: Telescope
    pl: FinFun
    wt: PiWitness
    lam: Section
    ptop: FinFun


@dataclass
class SigmaUniv:
    wedge: WedgeUniv
    wt: SigmaWitness


@dataclass
class WUniv:
    wedge: WedgeUniv
    wt: WWitness


def nest_section(model, e: TypeOver, name: FinFun, f: FinFun, value: FinFun) -> Section:
    """Repackage a section of E[name.f] as a section of E[name][f] (nested)."""
    outer = model.reindex(e, name)
    nested = model.reindex(outer.src, f)
    one = model.reindex(e, name @ f)
    return Section(
        nested.src,
        finfun(
            f.dom,
            nested.src.total,
            lambda x: nested.solve(x, outer.solve(f(x), one.top(value(x)))),
        ),
    )


class StrictSuite:
    """The split replacement's chosen constructors over a backing model."""

    def __init__(self, model, stable_pi: StableClassPi | None = None, shortcut_copair: bool = False):
        self.model = model
        self.stable_pi = stable_pi or derive_stable_class(model, "weakly-stable")
        self.shortcut_copair = shortcut_copair
        self._memo: dict = {}

    def _cached(self, key, build):
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo.setdefault(key, build())
        return hit

    # -- shared helpers --------------------------------------------------

    def compr(self, a: LocalType) -> TypeOver:
        return comprehension(self.model, a)

    def _ctx_check(self, a: LocalType, b: LocalType) -> None:
        if a.ctx != b.ctx:
            raise ValueError("context mismatch")

    def _pullback_section(self, c: LocalType, k: FinFun, clift: CartesianLift, phi: Section) -> Section:
        """Pull a universal motive section back to the instance realization."""
        rc = realize(self.model, c)
        return Section(
            rc.src,
            finfun(
                rc.src.ctx,
                rc.src.total,
                lambda s: rc.solve(s, clift.top(phi.map(k(s)))),
            ),
        )

    # ==================================================================
    # binary sums

    def _sum_univ(self, a: LocalType, b: LocalType) -> SumUniv:
        def build():
            prod, p1, p2 = product(a.base, b.base)
            la = self.model.reindex(a.total, p1)
            lb = self.model.reindex(b.total, p2)
            wt = self.model.sum_witness(prod, la.src, lb.src)
            return SumUniv(a.total, b.total, prod, p1, p2, wt)

        return self._cached(("sum", a.base, a.total, b.base, b.total), build)

    def _sum_at(self, u: SumUniv, f: FinFun) -> SumWitness:
        """The universal sum witness transported to f's domain, one-step."""
        m = self.model
        ls = m.reindex(u.wt.sum, f)
        la = m.reindex(u.ea, u.p1 @ f)
        lb = m.reindex(u.eb, u.p2 @ f)
        ka = connecting(m, u.ea, u.p1, f)
        kb = connecting(m, u.eb, u.p2, f)
        inl = finfun(
            la.src.total,
            ls.src.total,
            lambda e: ls.solve(la.src.display(e), u.wt.inl(ka(e))),
        )
        inr = finfun(
            lb.src.total,
            ls.src.total,
            lambda e: ls.solve(lb.src.display(e), u.wt.inr(kb(e))),
        )
        return SumWitness(f.dom, la.src, lb.src, ls.src, inl, inr)

    def sum_form(self, a: LocalType, b: LocalType) -> LocalType:
        self._ctx_check(a, b)
        u = self._sum_univ(a, b)
        return LocalType(a.ctx, u.prod, u.wt.sum, pairing(a.name, b.name))

    def sum_inl(self, a: LocalType, b: LocalType) -> FinFun:
        u = self._sum_univ(a, b)
        return self._sum_at(u, self.sum_form(a, b).name).inl

    def sum_inr(self, a: LocalType, b: LocalType) -> FinFun:
        u = self._sum_univ(a, b)
        return self._sum_at(u, self.sum_form(a, b).name).inr

    def _sum_elim_univ(self, a: LocalType, b: LocalType, c: LocalType) -> ElimUniv:
        def build():
            m = self.model
            u = self._sum_univ(a, b)
            t = Telescope(m)
            t.pt(a.base)
            t.pt(b.base)
            assert t.carrier == u.prod
            hc = t.fam(c.base, [Ref(u.wt.sum, identity(u.prod))])
            pf3 = t.projections[2]
            w3 = self._sum_at(u, pf3)
            t.sect([Ref(u.ea, u.p1 @ pf3)], Ref(c.total, t.env[hc].value @ w3.inl))
            pf4 = pf3 @ t.projections[3]
            w4 = self._sum_at(u, pf4)
            t.sect([Ref(u.eb, u.p2 @ pf4)], Ref(c.total, t.env[hc].value @ w4.inr))
            pf = pf4 @ t.projections[4]
            wk = self._sum_at(u, pf)
            cmap = t.env[hc].value
            clift = m.reindex(c.total, cmap)
            t1 = nest_section(m, c.total, cmap, wk.inl, t.env[3].value)
            t2 = nest_section(m, c.total, cmap, wk.inr, t.env[4].value)
            phi = copair(m, wk, clift.src, t1, t2)
            return ElimUniv(t, pf, cmap, clift, phi, [Ref(u.wt.sum, pf)])

        key = ("sum-elim", a.base, a.total, b.base, b.total, c.base, c.total)
        return self._cached(key, build)

    def sum_copair(self, a: LocalType, b: LocalType, c: LocalType, d1: Section, d2: Section) -> Section:
        """The chosen copair: c lives over the sum's comprehension, d1/d2
        are sections of c reindexed (in the replacement) along the
        inclusions."""
        self._ctx_check(a, b)
        if self.shortcut_copair:
            # the tempting shortcut: eliminate over the instance context
            u = self._sum_univ(a, b)
            wg = self._sum_at(u, self.sum_form(a, b).name)
            rc = realize(self.model, c)
            t1 = nest_section(self.model, c.total, c.name, wg.inl, d1.map)
            t2 = nest_section(self.model, c.total, c.name, wg.inr, d2.map)
            return copair(self.model, wg, rc.src, t1, t2)
        e = self._sum_elim_univ(a, b, c)
        cls = e.tele.classify(a.ctx, [a.name, b.name, c.name, d1.map, d2.map])
        u = self._sum_univ(a, b)
        ks = connecting(self.model, u.wt.sum, e.pf, cls)
        return self._pullback_section(c, ks, e.clift, e.phi)

    # ==================================================================
    # the shared wedge (products, dependent sums, trees)

    def _wedge_univ(self, a: LocalType, b: LocalType) -> WedgeUniv:
        def build():
            m = self.model
            t = Telescope(m)
            t.pt(a.base)
            hb = t.fam(b.base, [Ref(a.total, identity(a.base))])
            pa = t.projections[1]
            bmap = t.env[hb].value
            dom = m.reindex(a.total, pa).src
            cod = m.reindex(b.total, bmap).src
            return WedgeUniv(a.total, b.total, t, t.carrier, pa, bmap, dom, cod)

        return self._cached(("wedge", a.base, a.total, b.base, b.total), build)

    def _pair_name(self, u: WedgeUniv, a: LocalType, b: LocalType) -> FinFun:
        return u.tele.classify(a.ctx, [a.name, b.name])

    def _family_args_check(self, a: LocalType, b: LocalType) -> None:
        if b.ctx != self.compr(a).total:
            raise ValueError("family must live over the comprehension of its index type")

    # ==================================================================
    # dependent products

    def _pi_univ(self, a: LocalType, b: LocalType) -> PiUniv:
        def build():
            u = self._wedge_univ(a, b)
            wt = self.stable_pi.choose(u.carrier, u.dom, u.cod)
            return PiUniv(u, wt)

        key = ("pi", self.stable_pi.name, a.base, a.total, b.base, b.total)
        return self._cached(key, build)

    def _pi_at(self, p: PiUniv, f: FinFun) -> PiWitness:
        """The chosen product witness transported to f's domain, one-step."""
        m = self.model
        u = p.wedge
        la = m.reindex(u.ea, u.pa @ f)
        ka = connecting(m, u.ea, u.pa, f)
        lb = m.reindex(u.eb, u.bmap @ ka)
        lp = m.reindex(p.wt.pi, f)
        lw = m.reindex(p.wt.pi, f @ la.src.display)
        weak = CartesianLift(
            lw.src,
            lp.src,
            la.src.display,
            finfun(
                lw.src.total,
                lp.src.total,
                lambda e: lp.solve(la.src.display(lw.src.display(e)), lw.top(e)),
            ),
        )
        cod_lift = m.reindex(u.eb, u.bmap)
        app = finfun(
            lw.src.total,
            lb.src.total,
            lambda e: lb.solve(
                lw.src.display(e),
                cod_lift.top(
                    p.wt.app(p.wt.weak.solve(ka(lw.src.display(e)), lw.top(e)))
                ),
            ),
        )
        return PiWitness(f.dom, la.src, lb.src, lp.src, weak, app)

    def pi_form(self, a: LocalType, b: LocalType) -> LocalType:
        self._family_args_check(a, b)
        p = self._pi_univ(a, b)
        return LocalType(a.ctx, p.wedge.carrier, p.wt.pi, self._pair_name(p.wedge, a, b))

    def pi_app(self, a: LocalType, b: LocalType) -> FinFun:
        """Application at the instance: weakened-product total to codomain total."""
        p = self._pi_univ(a, b)
        return self._pi_at(p, self.pi_form(a, b).name).app

    def _pi_lambda_univ(self, a: LocalType, b: LocalType) -> PiLambdaUniv:
        def build():
            m = self.model
            p = self._pi_univ(a, b)
            u = p.wedge
            t = Telescope(m)
            t.pt(a.base)
            t.fam(b.base, [Ref(a.total, identity(a.base))])
            assert t.carrier == u.carrier
            ht = t.sect([Ref(a.total, u.pa)], Ref(b.total, u.bmap))
            pl = t.projections[2]
            wt = self._pi_at(p, pl)
            lam = lambda_abs(wt, Section(wt.cod, t.env[ht].value))
            ptop = m.reindex(p.wt.pi, pl).top
            return PiLambdaUniv(t, pl, wt, lam, ptop)

        key = ("pi-lambda", self.stable_pi.name, a.base, a.total, b.base, b.total)
        return self._cached(key, build)

    def pi_lambda(self, a: LocalType, b: LocalType, t: Section) -> Section:
        """Abstraction of a section of the codomain family."""
        lu = self._pi_lambda_univ(a, b)
        cls = lu.tele.classify(a.ctx, [a.name, b.name, t.map])
        rpi = realize(self.model, self.pi_form(a, b))
        return Section(
            rpi.src,
            finfun(
                a.ctx,
                rpi.src.total,
                lambda g: rpi.solve(g, lu.ptop(lu.lam.map(cls(g)))),
            ),
        )

    # ==================================================================
    # dependent sums

    def _sigma_univ(self, a: LocalType, b: LocalType) -> SigmaUniv:
        def build():
            u = self._wedge_univ(a, b)
            wt = self.model.sigma_witness(u.carrier, u.dom, u.cod)
            return SigmaUniv(u, wt)

        return self._cached(("sigma", a.base, a.total, b.base, b.total), build)

    def _sigma_at(self, s: SigmaUniv, f: FinFun) -> SigmaWitness:
        m = self.model
        u = s.wedge
        la = m.reindex(u.ea, u.pa @ f)
        ka = connecting(m, u.ea, u.pa, f)
        lb = m.reindex(u.eb, u.bmap @ ka)
        kb = connecting(m, u.eb, u.bmap, ka)
        ls = m.reindex(s.wt.sig, f)
        pair = finfun(
            lb.src.total,
            ls.src.total,
            lambda y: ls.solve(la.src.display(lb.src.display(y)), s.wt.pair(kb(y))),
        )
        return SigmaWitness(f.dom, la.src, lb.src, ls.src, pair)

    def sigma_form(self, a: LocalType, b: LocalType) -> LocalType:
        self._family_args_check(a, b)
        s = self._sigma_univ(a, b)
        return LocalType(a.ctx, s.wedge.carrier, s.wt.sig, self._pair_name(s.wedge, a, b))

    def sigma_pair(self, a: LocalType, b: LocalType) -> FinFun:
        s = self._sigma_univ(a, b)
        return self._sigma_at(s, self.sigma_form(a, b).name).pair

    def _sigma_elim_univ(self, a: LocalType, b: LocalType, c: LocalType) -> ElimUniv:
        def build():
            m = self.model
            s = self._sigma_univ(a, b)
            u = s.wedge
            t = Telescope(m)
            t.pt(a.base)
            hb = t.fam(b.base, [Ref(a.total, identity(a.base))])
            assert t.carrier == u.carrier
            hc = t.fam(c.base, [Ref(s.wt.sig, identity(u.carrier))])
            pf3 = t.projections[2]
            w3 = self._sigma_at(s, pf3)
            chain = [Ref(a.total, u.pa @ pf3), Ref(b.total, t.env[hb].value)]
            t.sect(chain, Ref(c.total, t.env[hc].value @ w3.pair))
            pf = pf3 @ t.projections[3]
            wk = self._sigma_at(s, pf)
            cmap = t.env[hc].value
            clift = m.reindex(c.total, cmap)
            d = nest_section(m, c.total, cmap, wk.pair, t.env[3].value)
            phi = split_pair(m, wk, clift.src, d)
            return ElimUniv(t, pf, cmap, clift, phi, [Ref(s.wt.sig, pf)])

        key = ("sigma-elim", a.base, a.total, b.base, b.total, c.base, c.total)
        return self._cached(key, build)

    def sigma_split(self, a: LocalType, b: LocalType, c: LocalType, d: Section) -> Section:
        """Elimination: c over the sum's comprehension, d a section of c
        reindexed along the pairing."""
        e = self._sigma_elim_univ(a, b, c)
        cls = e.tele.classify(a.ctx, [a.name, b.name, c.name, d.map])
        s = self._sigma_univ(a, b)
        ks = connecting(self.model, s.wt.sig, e.pf, cls)
        return self._pullback_section(c, ks, e.clift, e.phi)

    # ==================================================================
    # unit and zero types (constant universes over the terminal object)

    def _unit_univ(self) -> UnitWitness:
        return self._cached(("unit",), lambda: self.model.unit_witness(TERMINAL))

    def unit_form(self, ctx: FinSet) -> LocalType:
        uw = self._unit_univ()
        return LocalType(ctx, TERMINAL, uw.unit, terminal_map(ctx))

    def unit_tt(self, ctx: FinSet) -> Section:
        uw = self._unit_univ()
        r = realize(self.model, self.unit_form(ctx))
        return Section(
            r.src, finfun(ctx, r.src.total, lambda g: r.solve(g, uw.tt(atom("*"))))
        )

    def _unit_at(self, f: FinFun) -> UnitWitness:
        uw = self._unit_univ()
        lu = self.model.reindex(uw.unit, f)
        tt = finfun(f.dom, lu.src.total, lambda g: lu.solve(g, uw.tt(atom("*"))))
        return UnitWitness(f.dom, lu.src, tt)

    def _unit_elim_univ(self, c: LocalType) -> ElimUniv:
        def build():
            m = self.model
            uw = self._unit_univ()
            t = Telescope(m)
            hc = t.fam(c.base, [Ref(uw.unit, identity(TERMINAL))])
            w1 = self._unit_at(t.projections[0])
            t.ext(Ref(c.total, t.env[hc].value @ w1.tt))
            uname = t.projections[0] @ t.projections[1]
            wk = self._unit_at(uname)
            cmap = t.env[hc].value
            clift = m.reindex(c.total, cmap)
            d = nest_section(m, c.total, cmap, wk.tt, t.env[1].value)
            phi = unit_elim(m, wk, clift.src, d)
            return ElimUniv(t, uname, cmap, clift, phi, [Ref(uw.unit, uname)])

        return self._cached(("unit-elim", c.base, c.total), build)

    def unit_urec(self, ctx: FinSet, c: LocalType, d: Section) -> Section:
        """Unit elimination: c over the unit comprehension, d a section of
        c reindexed along the point."""
        e = self._unit_elim_univ(c)
        cls = e.tele.classify(ctx, [c.name, d.map])
        uw = self._unit_univ()
        ku = connecting(self.model, uw.unit, e.pf, cls)
        return self._pullback_section(c, ku, e.clift, e.phi)

    def zero_form(self, ctx: FinSet) -> LocalType:
        zw = self._cached(("zero",), lambda: self.model.zero_witness(TERMINAL))
        return LocalType(ctx, TERMINAL, zw.zero, terminal_map(ctx))

    def zero_elim(self, ctx: FinSet, c: LocalType) -> Section:
        # the realization of anything over the empty extension is empty
        rc = realize(self.model, c)
        return Section(rc.src, finfun(rc.src.ctx, rc.src.total, {}))

    # ==================================================================
    # identity types (Frobenius form)

    def _id_univ(self, a: LocalType) -> IdWitness:
        return self._cached(
            ("id", a.base, a.total),
            lambda: self.model.id_witness(a.base, a.total),
        )

    def id_form(self, a: LocalType) -> LocalType:
        iw = self._id_univ(a)
        ra = realize(self.model, a)
        ra2 = realize(self.model, bang_reindex(a, ra.src.display))
        name = finfun(
            ra2.src.total,
            iw.weak.src.total,
            lambda y: iw.weak.solve(ra.top(ra2.src.display(y)), ra2.top(y)),
        )
        return LocalType(ra2.src.total, iw.weak.src.total, iw.ident, name)

    def id_refl(self, a: LocalType) -> FinFun:
        """Reflexivity at the instance: the domain extension into the
        identity extension, over the diagonal."""
        iw = self._id_univ(a)
        ra = realize(self.model, a)
        ra2 = realize(self.model, bang_reindex(a, ra.src.display))
        rid = realize(self.model, self.id_form(a))
        return finfun(
            ra.src.total,
            rid.src.total,
            lambda x: rid.solve(ra2.solve(x, ra.top(x)), iw.refl(ra.top(x))),
        )

    def _id_base_chain(self, a: LocalType, at: FinFun) -> list[Ref]:
        """The identity-extension chain over ``at``'s domain."""
        iw = self._id_univ(a)
        r1 = self.model.reindex(a.total, at)
        n2 = at @ r1.src.display
        r2 = self.model.reindex(a.total, n2)
        diag_top = finfun(
            r2.src.total,
            iw.weak.src.total,
            lambda y: iw.weak.solve(r1.top(r2.src.display(y)), r2.top(y)),
        )
        return [Ref(a.total, at), Ref(a.total, n2), Ref(iw.ident, diag_top)]

    def _id_rhat(self, a: LocalType, chain: list[Ref]):
        """Reflexivity embedding for a realized identity chain: the map
        from the domain extension into the identity extension, plus the
        three chain lifts."""
        m = self.model
        iw = self._id_univ(a)
        l1 = m.reindex(chain[0].univ, chain[0].name)
        l2 = m.reindex(chain[1].univ, chain[1].name)
        l3 = m.reindex(chain[2].univ, chain[2].name)
        rhat = finfun(
            l1.src.total,
            l3.src.total,
            lambda x: l3.solve(l2.solve(x, l1.top(x)), iw.refl(l1.top(x))),
        )
        return rhat, (l1, l2, l3)

    def _id_elim_univ(self, a: LocalType, bs: tuple[LocalType, ...], c: LocalType) -> ElimUniv:
        def build():
            m = self.model
            t = Telescope(m)
            t.pt(a.base)
            handles = []
            cur_chain = self._id_base_chain(a, identity(a.base))
            for b in bs:
                hb = t.fam(b.base, cur_chain)
                handles.append(hb)
                cur_chain = list(t.env[hb].chain) + [Ref(b.total, t.env[hb].value)]
            hc = t.fam(c.base, cur_chain)
            # the reflexivity-substituted premise chain at the current stage
            rhat, _ = self._id_rhat(a, t.env[hc].chain[:3])
            d_chain = [t.env[hc].chain[0]]
            rhats = [rhat]
            for i, b in enumerate(bs):
                bname = t.env[handles[i]].value @ rhats[-1]
                d_chain.append(Ref(b.total, bname))
                dl = m.reindex(b.total, bname)
                bl = m.reindex(b.total, t.env[handles[i]].value)
                rhats.append(
                    finfun(
                        dl.src.total,
                        bl.src.total,
                        lambda z, _d=dl, _b=bl, _r=rhats[-1]: _b.solve(
                            _r(_d.src.display(z)), _d.top(z)
                        ),
                    )
                )
            t.sect(d_chain, Ref(c.total, t.env[hc].value @ rhats[-1]))
            # final carrier: assemble the one-step witness
            final_chain = list(t.env[hc].chain)
            rhat_f, (l1, l2, l3) = self._id_rhat(a, final_chain[:3])
            weak = CartesianLift(
                l2.src,
                l1.src,
                l1.src.display,
                finfun(
                    l2.src.total,
                    l1.src.total,
                    lambda y: l1.solve(l1.src.display(l2.src.display(y)), l2.top(y)),
                ),
            )
            wt = IdWitness(t.carrier, l1.src, weak, l3.src, rhat_f)
            tele_lifts = [m.reindex(r.univ, r.name) for r in final_chain[3:]]
            # the substituted chain again, now at the final carrier
            rhats_f = [rhat_f]
            d_lifts = []
            for i, b in enumerate(bs):
                bname = final_chain[3 + i].name @ rhats_f[-1]
                dl = m.reindex(b.total, bname)
                d_lifts.append(dl)
                bl = tele_lifts[i]
                rhats_f.append(
                    finfun(
                        dl.src.total,
                        bl.src.total,
                        lambda z, _d=dl, _b=bl, _r=rhats_f[-1]: _b.solve(
                            _r(_d.src.display(z)), _d.top(z)
                        ),
                    )
                )
            # isomorphism onto the eliminator's nested substituted chain
            isos = [identity(l1.src.total)]
            nested_top = rhat_f
            for i in range(len(bs)):
                nested = m.reindex(tele_lifts[i].src, nested_top)
                isos.append(
                    finfun(
                        d_lifts[i].src.total,
                        nested.src.total,
                        lambda z, _n=nested, _i=isos[-1], _r=rhats_f[i + 1], _d=d_lifts[i]: _n.solve(
                            _i(_d.src.display(z)), _r(z)
                        ),
                    )
                )
                nested_top = nested.top
            cmap = t.env[hc].value
            clift = m.reindex(c.total, cmap)
            lc = m.reindex(clift.src, nested_top)
            one = m.reindex(c.total, cmap @ rhats_f[-1])
            val = t.env[-1].value
            inv = isos[-1].inverse()
            d_nested = Section(
                lc.src,
                finfun(
                    lc.src.ctx,
                    lc.src.total,
                    lambda w: lc.solve(
                        w,
                        clift.solve(rhats_f[-1](inv(w)), one.top(val(inv(w)))),
                    ),
                ),
            )
            phi = id_elim(m, wt, [tl.src for tl in tele_lifts], clift.src, d_nested)
            return ElimUniv(t, final_chain[2].name, cmap, clift, phi, final_chain)

        key = ("id-elim", a.base, a.total) + tuple(
            x for b in bs for x in (b.base, b.total)
        ) + (c.base, c.total)
        return self._cached(key, build)

    def id_subst_chain(self, a: LocalType, bs: list[LocalType]):
        """Instance-level reflexivity substitution.

        Returns (types, rhat): the substituted premise types over the
        successive extensions of the domain comprehension, and the map
        embedding the final substituted extension into the final identity
        extension.
        """
        rhat = self.id_refl(a)
        types = []
        m = self.model
        for b in bs:
            br = bang_reindex(b, rhat)
            types.append(br)
            dl = realize(m, br)
            bl = realize(m, b)
            rhat = finfun(
                dl.src.total,
                bl.src.total,
                lambda z, _d=dl, _b=bl, _r=rhat: _b.solve(_r(_d.src.display(z)), _d.top(z)),
            )
        return types, rhat

    def id_j(self, a: LocalType, bs: list[LocalType], c: LocalType, d: Section) -> Section:
        """Frobenius elimination: ``bs`` chains over the identity
        extension, ``c`` is the motive over the chain top, ``d`` a section
        of c reindexed along the reflexivity substitution."""
        e = self._id_elim_univ(a, tuple(bs), c)
        payloads = [a.name] + [b.name for b in bs] + [c.name, d.map]
        cls = e.tele.classify(a.ctx, payloads)
        _, conns = pull_chain(self.model, e.chain, cls)
        return self._pullback_section(c, conns[-1], e.clift, e.phi)

    # ==================================================================
    # trees over the chosen stable class of products

    def _w_univ(self, a: LocalType, b: LocalType) -> WUniv:
        def build():
            u = self._wedge_univ(a, b)
            wt = self.model.w_witness(u.carrier, u.dom, u.cod)
            return WUniv(u, wt)

        return self._cached(("w", a.base, a.total, b.base, b.total), build)

    def _w_at(self, w: WUniv, f: FinFun) -> WWitness:
        m = self.model
        u = w.wedge
        la = m.reindex(u.ea, u.pa @ f)
        ka = connecting(m, u.ea, u.pa, f)
        lb = m.reindex(u.eb, u.bmap @ ka)
        kb = connecting(m, u.eb, u.bmap, ka)
        lw = m.reindex(w.wt.w, f)
        dom_top = m.reindex(u.ea, u.pa).top
        root = finfun(
            lw.src.total,
            la.src.total,
            lambda t: la.solve(lw.src.display(t), dom_top(w.wt.root(lw.top(t)))),
        )
        pair_dom = finset(
            pairv(t, x)
            for t in lw.src.total
            for x in lb.src.total
            if lb.src.display(x) == root(t)
        )
        children = finfun(
            pair_dom,
            lw.src.total,
            lambda p: lw.solve(
                lw.src.display(p.left),
                w.wt.children(pairv(lw.top(p.left), kb(p.right))),
            ),
        )
        return WWitness(f.dom, la.src, lb.src, lw.src, root, children)

    def w_form(self, a: LocalType, b: LocalType) -> LocalType:
        self._family_args_check(a, b)
        w = self._w_univ(a, b)
        return LocalType(a.ctx, w.wedge.carrier, w.wt.w, self._pair_name(w.wedge, a, b))

    def w_frame(self, a: LocalType, b: LocalType):
        """Derived structure for tree introduction/elimination at an
        instance: (tree type, branch product, weakened arity family,
        subtree readout into the tree comprehension)."""
        m = self.model
        wl = self.w_form(a, b)
        ca = self.compr(a)
        cb = self.compr(b)
        wwk = bang_reindex(wl, ca.display @ cb.display)
        p = self.pi_form(b, wwk)
        cp = self.compr(p)
        bp = bang_reindex(b, cp.display)
        cbp = self.compr(bp)
        wg = self._pi_at(self._pi_univ(b, wwk), p.name)
        rb = realize(m, b)
        rbp = realize(m, bp)
        rwwk = realize(m, wwk)
        rw = realize(m, wl)

        def readout(e):
            pt = cbp.display(e)
            xb = rb.solve(cp.display(pt), rbp.top(e))
            sub = wg.app(wg.weak.solve(xb, pt))
            gamma = ca.display(cb.display(rwwk.src.display(sub)))
            return rw.solve(gamma, rwwk.top(sub))

        ev = finfun(cbp.total, rw.src.total, readout)
        return wl, p, bp, ev

    def _w_fold_univ(self, a: LocalType, b: LocalType):
        def build():
            m = self.model
            wu = self._w_univ(a, b)
            u = wu.wedge
            au = LocalType(u.carrier, a.base, a.total, u.pa)
            cau = self.compr(au)
            bu = LocalType(cau.total, b.base, b.total, u.bmap)
            wlu = self.w_form(au, bu)
            wwku = bang_reindex(wlu, cau.display @ self.compr(bu).display)
            pu = self.pi_form(bu, wwku)
            pg = self._pi_at(self._pi_univ(bu, wwku), pu.name)
            rwwku = realize(m, wwku)
            fold_u = w_fold_elim(wu.wt, pg, rwwku.top)
            return fold_u, pu

        key = ("w-fold", self.stable_pi.name, a.base, a.total, b.base, b.total)
        return self._cached(key, build)

    def w_fold(self, a: LocalType, b: LocalType) -> FinFun:
        """The structure map at the instance: branch-product extension to trees."""
        m = self.model
        fold_u, pu = self._w_fold_univ(a, b)
        wu = self._w_univ(a, b)
        wl = self.w_form(a, b)
        lam = connecting(m, a.total, wu.wedge.pa, wl.name)
        kp = connecting(m, pu.total, pu.name, lam)
        rw = realize(m, wl)
        ca = self.compr(a)
        cp = m.reindex(pu.total, pu.name @ lam).src
        return finfun(
            cp.total,
            rw.src.total,
            lambda x: rw.solve(ca.display(cp.display(x)), fold_u(kp(x))),
        )

    def _w_elim_univ(self, a: LocalType, b: LocalType, c: LocalType) -> ElimUniv:
        def build():
            m = self.model
            wu = self._w_univ(a, b)
            u = wu.wedge
            t = Telescope(m)
            t.pt(a.base)
            hb = t.fam(b.base, [Ref(a.total, identity(a.base))])
            assert t.carrier == u.carrier
            hc = t.fam(c.base, [Ref(wu.wt.w, identity(u.carrier))])
            # the premise chain at the stage-3 universal instance
            pf3 = t.projections[2]
            a3 = LocalType(t.carrier, a.base, a.total, u.pa @ pf3)
            b3 = LocalType(self.compr(a3).total, b.base, b.total, t.env[hb].value)
            wl3, p3, bp3, ev3 = self.w_frame(a3, b3)
            c3 = LocalType(self.compr(wl3).total, c.base, c.total, t.env[hc].value)
            fold3 = self.w_fold(a3, b3)
            p23 = self.pi_form(bp3, bang_reindex(c3, ev3))
            cp23 = self.compr(p23)
            dchain = [
                Ref(a.total, u.pa @ pf3),
                Ref(p3.total, p3.name),
                Ref(p23.total, p23.name),
            ]
            t.sect(dchain, Ref(c.total, t.env[hc].value @ (fold3 @ cp23.display)))
            # final stage: rebuild the frame and eliminate
            pf = pf3 @ t.projections[3]
            ak = LocalType(t.carrier, a.base, a.total, u.pa @ pf)
            bk = LocalType(self.compr(ak).total, b.base, b.total, t.env[hb].value)
            wlk, pk, bpk, evk = self.w_frame(ak, bk)
            ck = LocalType(self.compr(wlk).total, c.base, c.total, t.env[hc].value)
            foldk = self.w_fold(ak, bk)
            p2k = self.pi_form(bpk, bang_reindex(ck, evk))
            wtk = self._w_at(wu, pf)
            dd = self.compr(ak).display @ self.compr(bk).display
            wwkk = bang_reindex(wlk, dd)
            pgk = self._pi_at(self._pi_univ(bk, wwkk), pk.name)
            wtop = connecting(m, wu.wt.w, pf, dd)
            pg2k = self._pi_at(self._pi_univ(bpk, bang_reindex(ck, evk)), p2k.name)
            btop = connecting(m, b.total, bk.name, self.compr(pk).display)
            cmap = t.env[hc].value
            clift = m.reindex(c.total, cmap)
            ctop = connecting(m, c.total, cmap, evk)
            d_nested = nest_section(
                m, c.total, cmap, foldk @ self.compr(p2k).display, t.env[3].value
            )
            phi = w_rec_elim(
                m, wtk, pgk, wtop, foldk, pg2k, btop, ctop, clift.src, d_nested
            )
            return ElimUniv(t, pf, cmap, clift, phi, [Ref(wu.wt.w, pf)])

        key = (
            "w-elim",
            self.stable_pi.name,
            a.base,
            a.total,
            b.base,
            b.total,
            c.base,
            c.total,
        )
        return self._cached(key, build)

    def w_wrec(self, a: LocalType, b: LocalType, c: LocalType, d: Section) -> Section:
        """Tree recursion: c over the tree comprehension, d a section of c
        reindexed along the structure map over the full premise extension."""
        e = self._w_elim_univ(a, b, c)
        cls = e.tele.classify(a.ctx, [a.name, b.name, c.name, d.map])
        wu = self._w_univ(a, b)
        kw = connecting(self.model, wu.wt.w, e.pf, cls)
        return self._pullback_section(c, kw, e.clift, e.phi)
