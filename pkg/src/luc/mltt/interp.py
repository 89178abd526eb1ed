"""Interpretation of the annotated fragment into a split semantics.

Two semantics implement the same surface: the family oracle (direct
pointwise constructors) and the split replacement of a backing model
(through its strictly stable constructor suite).  Interpretation is
structural recursion; the headline property is that it commutes with
substitution on the nose, which the soundness harness checks pair by
pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..bang import LocalType, bang_reindex, bang_top, comprehension, realize, section_reindex
from ..comp import Section
from ..fin import TERMINAL, FinFun, FinSet, finfun, terminal_map
from ..report import CheckReport
from .check import infer
from .syntax import (
    App,
    Case,
    Exfalso,
    Id,
    Inl,
    Inr,
    J,
    Lam,
    PairTm,
    Pi,
    Refl,
    Sigma,
    SplitTm,
    Sum,
    TT,
    Tm,
    Ty,
    Unit,
    Urec,
    Var,
    Zero,
)


class BangSemantics:
    """The split replacement's interpretation surface."""

    name = "bang"

    def __init__(self, suite):
        self.suite = suite
        self.model = suite.model

    # -- plumbing ---------------------------------------------------------

    def terminal_ctx(self) -> FinSet:
        return TERMINAL

    def ext(self, a: LocalType) -> FinSet:
        return comprehension(self.model, a).total

    def ty_display(self, a: LocalType) -> FinFun:
        return comprehension(self.model, a).display

    def reindex_ty(self, a: LocalType, f: FinFun) -> LocalType:
        return bang_reindex(a, f)

    def ty_top(self, a: LocalType, f: FinFun) -> FinFun:
        return bang_top(self.model, a, f)

    def reindex_tm(self, a: LocalType, f: FinFun, t: Section) -> Section:
        return section_reindex(self.model, a, f, t)

    def var0(self, a: LocalType) -> Section:
        ra = realize(self.model, a)
        rw = realize(self.model, bang_reindex(a, ra.src.display))
        return Section(
            rw.src,
            finfun(ra.src.total, rw.src.total, lambda x: rw.solve(x, ra.top(x))),
        )

    def fiber_sizes(self, a: LocalType) -> list[int]:
        r = comprehension(self.model, a)
        return [len(r.fiber(c)) for c in r.ctx]

    def _transport(self, c: LocalType, sub: FinFun, phi: Section) -> Section:
        """Precompose a section of c with a context map into c's context."""
        moved = bang_reindex(c, sub)
        rm = realize(self.model, moved)
        rc = realize(self.model, c)
        return Section(
            rm.src,
            finfun(sub.dom, rm.src.total, lambda g: rm.solve(g, rc.top(phi.map(sub(g))))),
        )

    # -- type formers -------------------------------------------------------

    def unit(self, ctx: FinSet) -> LocalType:
        return self.suite.unit_form(ctx)

    def zero(self, ctx: FinSet) -> LocalType:
        return self.suite.zero_form(ctx)

    def sum(self, a: LocalType, b: LocalType) -> LocalType:
        return self.suite.sum_form(a, b)

    def pi(self, a: LocalType, b: LocalType) -> LocalType:
        return self.suite.pi_form(a, b)

    def sigma(self, a: LocalType, b: LocalType) -> LocalType:
        return self.suite.sigma_form(a, b)

    def id_at(self, a: LocalType, t: Section, u: Section) -> LocalType:
        idf = self.suite.id_form(a)
        ra = realize(self.model, a)
        ra2 = realize(self.model, bang_reindex(a, ra.src.display))
        pair_map = finfun(
            a.ctx,
            idf.ctx,
            lambda g: ra2.solve(t.map(g), ra.top(u.map(g))),
        )
        return bang_reindex(idf, pair_map)

    # -- term formers ---------------------------------------------------------

    def tt(self, ctx: FinSet) -> Section:
        return self.suite.unit_tt(ctx)

    def inl(self, a: LocalType, b: LocalType, t: Section) -> Section:
        sm = comprehension(self.model, self.suite.sum_form(a, b))
        m = self.suite.sum_inl(a, b)
        return Section(sm, finfun(a.ctx, sm.total, lambda g: m(t.map(g))))

    def inr(self, a: LocalType, b: LocalType, t: Section) -> Section:
        sm = comprehension(self.model, self.suite.sum_form(a, b))
        m = self.suite.sum_inr(a, b)
        return Section(sm, finfun(a.ctx, sm.total, lambda g: m(t.map(g))))

    def lam(self, a: LocalType, b: LocalType, t: Section) -> Section:
        return self.suite.pi_lambda(a, b, t)

    def apply(self, a: LocalType, b: LocalType, f: Section, x: Section) -> Section:
        pu = self.suite._pi_univ(a, b)
        wg = self.suite._pi_at(pu, self.suite.pi_form(a, b).name)
        bx = bang_reindex(b, x.map)
        rbx = realize(self.model, bx)
        rb = realize(self.model, b)
        return Section(
            rbx.src,
            finfun(
                a.ctx,
                rbx.src.total,
                lambda g: rbx.solve(
                    g, rb.top(wg.app(wg.weak.solve(x.map(g), f.map(g))))
                ),
            ),
        )

    def pair(self, a: LocalType, b: LocalType, s: Section, t: Section) -> Section:
        sg = comprehension(self.model, self.suite.sigma_form(a, b))
        pm = self.suite.sigma_pair(a, b)
        rbs = realize(self.model, bang_reindex(b, s.map))
        rb = realize(self.model, b)
        # t is a section of b[s]; land its value in b's extension, then pair
        return Section(
            sg,
            finfun(
                a.ctx,
                sg.total,
                lambda g: pm(rb.solve(s.map(g), rbs.top(t.map(g)))),
            ),
        )

    def case(self, a: LocalType, b: LocalType, c: LocalType, d1: Section, d2: Section, s: Section) -> Section:
        phi = self.suite.sum_copair(a, b, c, d1, d2)
        return self._transport(c, s.map, phi)

    def split(self, a: LocalType, b: LocalType, c: LocalType, d: Section, s: Section) -> Section:
        phi = self.suite.sigma_split(a, b, c, d)
        return self._transport(c, s.map, phi)

    def urec(self, c: LocalType, d: Section, s: Section) -> Section:
        phi = self.suite.unit_urec(s.of.ctx, c, d)
        return self._transport(c, s.map, phi)

    def exfalso(self, c: LocalType, s: Section) -> Section:
        phi = self.suite.zero_elim(s.of.ctx, c)
        return self._transport(c, s.map, phi)

    def refl(self, a: LocalType, t: Section) -> Section:
        ia = self.id_at(a, t, t)
        idf = self.suite.id_form(a)
        rm = realize(self.model, ia)
        rid = realize(self.model, idf)
        rf = self.suite.id_refl(a)
        return Section(
            rm.src,
            finfun(a.ctx, rm.src.total, lambda g: rm.solve(g, rid.top(rf(t.map(g))))),
        )

    def _double_point(self, a: LocalType, t: Section, u: Section) -> FinFun:
        """The map into the doubled extension picking out (t, u)."""
        ra = realize(self.model, a)
        ra2 = realize(self.model, bang_reindex(a, ra.src.display))
        return finfun(
            a.ctx, ra2.src.total, lambda g: ra2.solve(t.map(g), ra.top(u.map(g)))
        )

    def j_elim(self, a: LocalType, c: LocalType, d: Section, t: Section, u: Section, p: Section) -> Section:
        phi = self.suite.id_j(a, [], c, d)
        idf = self.suite.id_form(a)
        top = bang_top(self.model, idf, self._double_point(a, t, u))
        sub = finfun(
            a.ctx,
            comprehension(self.model, idf).total,
            lambda g: top(p.map(g)),
        )
        return self._transport(c, sub, phi)


@dataclass
class SemCtx:
    carrier: FinSet
    syn: tuple[Ty, ...]
    types: tuple  # semantic types, outermost first
    carriers: tuple[FinSet, ...]  # carrier before each extension


class Interp:
    """Structural interpretation of checked syntax into a semantics."""

    def __init__(self, sem):
        self.sem = sem

    def ctx(self, tys: tuple[Ty, ...]) -> SemCtx:
        carrier = self.sem.terminal_ctx()
        types = ()
        carriers = ()
        sc = SemCtx(carrier, (), (), ())
        for a in tys:
            sa = self.ty(sc, a)
            carriers = carriers + (sc.carrier,)
            types = types + (sa,)
            sc = SemCtx(self.sem.ext(sa), sc.syn + (a,), types, carriers)
        return sc

    def extend(self, sc: SemCtx, a_syn: Ty, sa) -> SemCtx:
        return SemCtx(
            self.sem.ext(sa),
            sc.syn + (a_syn,),
            sc.types + (sa,),
            sc.carriers + (sc.carrier,),
        )

    def ty(self, sc: SemCtx, a: Ty):
        sem = self.sem
        if isinstance(a, Unit):
            return sem.unit(sc.carrier)
        if isinstance(a, Zero):
            return sem.zero(sc.carrier)
        if isinstance(a, Sum):
            return sem.sum(self.ty(sc, a.left), self.ty(sc, a.right))
        if isinstance(a, (Pi, Sigma)):
            dom = self.ty(sc, a.dom)
            inner = self.extend(sc, a.dom, dom)
            cod = self.ty(inner, a.cod)
            return sem.pi(dom, cod) if isinstance(a, Pi) else sem.sigma(dom, cod)
        if isinstance(a, Id):
            ty = self.ty(sc, a.ty)
            return sem.id_at(ty, self.tm(sc, a.lhs), self.tm(sc, a.rhs))
        raise TypeError(f"not a type: {a!r}")

    def var(self, sc: SemCtx, i: int) -> Section:
        sem = self.sem
        k = len(sc.types) - 1 - i
        a = sc.types[k]
        s = sem.var0(a)
        aw = sem.reindex_ty(a, sem.ty_display(a))
        for j in range(k + 1, len(sc.types)):
            d = sem.ty_display(sc.types[j])
            s = sem.reindex_tm(aw, d, s)
            aw = sem.reindex_ty(aw, d)
        return s

    def tm(self, sc: SemCtx, t: Tm) -> Section:
        sem = self.sem
        if isinstance(t, Var):
            return self.var(sc, t.idx)
        if isinstance(t, TT):
            return sem.tt(sc.carrier)
        if isinstance(t, Lam):
            dom = self.ty(sc, t.dom)
            inner = self.extend(sc, t.dom, dom)
            body = self.tm(inner, t.body)
            cod = self.ty(inner, infer(inner.syn, t.body))
            return sem.lam(dom, cod, body)
        if isinstance(t, App):
            fty = infer(sc.syn, t.fn)
            dom = self.ty(sc, fty.dom)
            inner = self.extend(sc, fty.dom, dom)
            cod = self.ty(inner, fty.cod)
            return sem.apply(dom, cod, self.tm(sc, t.fn), self.tm(sc, t.arg))
        if isinstance(t, PairTm):
            dom = self.ty(sc, t.ann.dom)
            inner = self.extend(sc, t.ann.dom, dom)
            cod = self.ty(inner, t.ann.cod)
            return sem.pair(dom, cod, self.tm(sc, t.fst), self.tm(sc, t.snd))
        if isinstance(t, (Inl, Inr)):
            left = self.ty(sc, t.ann.left)
            right = self.ty(sc, t.ann.right)
            arg = self.tm(sc, t.tm)
            return (
                sem.inl(left, right, arg)
                if isinstance(t, Inl)
                else sem.inr(left, right, arg)
            )
        if isinstance(t, Case):
            sty = infer(sc.syn, t.scrut)
            left = self.ty(sc, sty.left)
            right = self.ty(sc, sty.right)
            sm = sem.sum(left, right)
            inner = self.extend(sc, sty, sm)
            motive = self.ty(inner, t.motive)
            l_inner = self.extend(sc, sty.left, left)
            r_inner = self.extend(sc, sty.right, right)
            d1 = self.tm(l_inner, t.left)
            d2 = self.tm(r_inner, t.right)
            return sem.case(left, right, motive, d1, d2, self.tm(sc, t.scrut))
        if isinstance(t, SplitTm):
            sty = infer(sc.syn, t.scrut)
            dom = self.ty(sc, sty.dom)
            d_inner = self.extend(sc, sty.dom, dom)
            cod = self.ty(d_inner, sty.cod)
            sg = sem.sigma(dom, cod)
            m_inner = self.extend(sc, sty, sg)
            motive = self.ty(m_inner, t.motive)
            b_inner = self.extend(d_inner, sty.cod, cod)
            body = self.tm(b_inner, t.body)
            return sem.split(dom, cod, motive, body, self.tm(sc, t.scrut))
        if isinstance(t, Urec):
            un = sem.unit(sc.carrier)
            inner = self.extend(sc, Unit(), un)
            motive = self.ty(inner, t.motive)
            return sem.urec(motive, self.tm(sc, t.body), self.tm(sc, t.scrut))
        if isinstance(t, Exfalso):
            ze = sem.zero(sc.carrier)
            inner = self.extend(sc, Zero(), ze)
            motive = self.ty(inner, t.motive)
            return sem.exfalso(motive, self.tm(sc, t.scrut))
        if isinstance(t, Refl):
            a_syn = infer(sc.syn, t.tm)
            return sem.refl(self.ty(sc, a_syn), self.tm(sc, t.tm))
        if isinstance(t, J):
            from .syntax import shift_ty

            pty = infer(sc.syn, t.proof)
            a_syn = pty.ty
            a = self.ty(sc, a_syn)
            sc_x = self.extend(sc, a_syn, a)
            aw_syn = shift_ty(a_syn, 1)
            sc_y = self.extend(sc_x, aw_syn, self.ty(sc_x, aw_syn))
            id_syn = Id(shift_ty(a_syn, 2), Var(1), Var(0))
            sc_p = self.extend(sc_y, id_syn, self.ty(sc_y, id_syn))
            motive = self.ty(sc_p, t.motive)
            z_inner = self.extend(sc, a_syn, a)
            body = self.tm(z_inner, t.body)
            return sem.j_elim(
                a,
                motive,
                body,
                self.tm(sc, pty.lhs),
                self.tm(sc, pty.rhs),
                self.tm(sc, t.proof),
            )
        raise TypeError(f"not a term: {t!r}")

    def sub(self, src: SemCtx, dst: SemCtx, s) -> FinFun:
        """Semantic context morphism of a componentwise substitution."""
        sem = self.sem
        f = terminal_map(src.carrier)
        for k, a in enumerate(dst.types):
            comp = self.tm(src, s[k])
            f = finfun(
                src.carrier,
                sem.ext(a),
                lambda g, _t=sem.ty_top(a, f), _c=comp: _t(_c.map(g)),
            )
        return f


def soundness_harness(interp: Interp, pool, report: CheckReport) -> None:
    """Interpretation commutes with substitution, on the nose.

    ``pool`` yields (src tys, dst tys, subst, judgement) where judgement
    is ("ty", A) or ("tm", t) over the dst context.
    """
    from .syntax import subst_tm, subst_ty

    for src_tys, dst_tys, s, (kind, it) in pool:
        report.tick()
        src = interp.ctx(src_tys)
        dst = interp.ctx(dst_tys)
        f = interp.sub(src, dst, s)
        if kind == "ty":
            lhs = interp.ty(src, subst_ty(it, s))
            rhs = interp.sem.reindex_ty(interp.ty(dst, it), f)
            if lhs != rhs:
                report.fail(f"type interpretation not natural: {it!r} along {s!r}")
        else:
            a_syn = infer(dst_tys, it)
            a_sem = interp.ty(dst, a_syn)
            lhs = interp.tm(src, subst_tm(it, s))
            rhs = interp.sem.reindex_tm(a_sem, f, interp.tm(dst, it))
            if lhs != rhs:
                report.fail(f"term interpretation not natural: {it!r} along {s!r}")
