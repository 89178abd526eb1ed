"""Brute-force checkers for the stability taxonomy.

Everything here is existence-by-enumeration within bounds: fibration
axioms, splitness of a cleaving, weak stability of constructor
witnesses, strict stability of chosen operations, the comparison-map
condition for identity types, and candidate functorial actions.
"""

from __future__ import annotations

from itertools import product as iproduct

from .bounds import Bounds, contexts, substitutions
from .comp import (
    CartesianLift,
    Section,
    TypeOver,
    all_sections,
    canonical_iso,
    enumerate_fiber_maps,
)
from .fin import FinFun, all_functions, finfun, identity, render
from .models import (
    InvalidWitness,
    apply_readout,
    id_elim,
    w_fold,
    w_rec,
)
from .report import CheckReport
from .witness import (
    IdWitness,
    PiWitness,
    SigmaWitness,
    SumWitness,
    UnitWitness,
    WWitness,
    ZeroWitness,
    reindex_id,
    reindex_pi,
    reindex_sigma,
    reindex_sum,
    reindex_unit,
    reindex_w,
    reindex_zero,
)


def check_fibration_axioms(model, bounds: Bounds, reindex=None) -> CheckReport:
    """Every chosen lift is a commuting pullback square; identities are normal.

    ``reindex`` overrides the model's cleaving (negative-control hook).
    """
    report = CheckReport(f"fibration-axioms[{model.name}]")
    re = reindex or model.reindex
    for gamma in contexts(bounds, "g"):
        for t in model.types_over(gamma, bounds.max_fiber):
            for delta in contexts(bounds, "d"):
                for sigma in substitutions(delta, gamma):
                    report.tick()
                    lift = re(t, sigma)
                    if not lift.commutes():
                        report.fail(f"non-commuting lift at {render(sigma)}")
                    elif not lift.is_pullback():
                        report.fail(f"non-pullback lift at {render(sigma)}")
            lift1 = re(t, identity(gamma))
            report.tick()
            if lift1.src != t or not lift1.top.is_identity():
                report.fail(f"identity lift not normal over {render(gamma)}")
    return report


def check_splitness(model, bounds: Bounds) -> CheckReport:
    """Both split-cleaving laws as structural equalities, with witnesses."""
    report = CheckReport(f"splitness[{model.name}]")
    for gamma in contexts(bounds, "g"):
        for t in model.types_over(gamma, bounds.max_fiber):
            report.tick()
            if model.reindex(t, identity(gamma)).src != t:
                report.fail(f"A[1] != A over {render(gamma)}")
                return report
            for delta in contexts(bounds, "d"):
                for sigma in substitutions(delta, gamma):
                    for theta in contexts(bounds, "t"):
                        for tau in substitutions(theta, delta):
                            report.tick()
                            once = model.reindex(t, sigma @ tau).src
                            twice = model.reindex(
                                model.reindex(t, sigma).src, tau
                            ).src
                            if once != twice:
                                report.fail(
                                    "A[sigma.tau] != A[sigma][tau]: "
                                    f"{render(once.total)} vs {render(twice.total)}"
                                )
                                return report
    return report


def check_fullness(model, bounds: Bounds) -> CheckReport:
    """Maps between comprehensions over a context are exactly fiber maps."""
    report = CheckReport(f"fullness[{model.name}]")
    for gamma in contexts(bounds, "g"):
        types = list(model.types_over(gamma, bounds.max_fiber))
        for a in types[: 6]:
            for b in types[: 6]:
                report.tick()
                over = [
                    f
                    for f in all_functions(b.total, a.total)
                    if (a.display @ f) == b.display
                ]
                fiber_maps = list(enumerate_fiber_maps(b, a))
                if len(over) != len(fiber_maps) or set(over) != set(fiber_maps):
                    report.fail(f"hom mismatch over {render(gamma)}")
    return report


def sigma_pool(bounds: Bounds, gamma) -> list[FinFun]:
    out = []
    for delta in contexts(bounds, "d"):
        out.extend(substitutions(delta, gamma))
    return out


# ----------------------------------------------------------------------
# weak stability: existence of eliminators after every substitution


def check_weak_stability_sum(model, wt: SumWitness, bounds: Bounds) -> CheckReport:
    """Brute-force copair existence for every reindexing of the witness."""
    report = CheckReport("weak-sum")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_sum(model, wt, sigma)
        for c in model.types_over(w.sum.total, bounds.max_fiber, tag="c"):
            c1 = model.reindex(c, w.inl)
            c2 = model.reindex(c, w.inr)
            for t1 in all_sections(c1.src):
                for t2 in all_sections(c2.src):
                    report.tick()
                    want = {}
                    ok = True
                    for x in w.left.total:
                        want[w.inl(x)] = c1.top(t1.map(x))
                    for y in w.right.total:
                        s = w.inr(y)
                        v = c2.top(t2.map(y))
                        if s in want and want[s] != v:
                            ok = False
                            break
                        want[s] = v
                    found = ok and any(
                        all(cand.map(s) == v for s, v in want.items())
                        for cand in all_sections(c)
                    )
                    if not found:
                        report.fail(
                            f"no copair after {render(sigma)} for C={render(c.total)}"
                        )
                        return report
    return report


def check_weak_stability_pi(model, wt: PiWitness, bounds: Bounds) -> CheckReport:
    """Existence of an abstraction with the beta equation for every t."""
    report = CheckReport("weak-pi")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_pi(model, wt, sigma)
        for t in all_sections(w.cod):
            report.tick()
            found = any(
                apply_readout(w, cand) == t for cand in all_sections(w.pi)
            )
            if not found:
                report.fail(f"no abstraction after {render(sigma)}")
                return report
    return report


def check_weak_stability_sigma(model, wt: SigmaWitness, bounds: Bounds) -> CheckReport:
    report = CheckReport("weak-sigma")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_sigma(model, wt, sigma)
        for c in model.types_over(w.sig.total, bounds.max_fiber, tag="c"):
            lp = model.reindex(c, w.pair)
            for d in all_sections(lp.src):
                report.tick()
                want = {w.pair(y): lp.top(d.map(y)) for y in w.cod.total}
                found = any(
                    all(cand.map(s) == v for s, v in want.items())
                    for cand in all_sections(c)
                )
                if not found:
                    report.fail(f"no split after {render(sigma)}")
                    return report
    return report


def check_weak_stability_id(model, wt: IdWitness, bounds: Bounds) -> CheckReport:
    """Frobenius elimination existence, with premise chains up to the bound."""
    report = CheckReport("weak-id")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_id(model, wt, sigma)
        chains: list[list[TypeOver]] = [[]]
        if bounds.telescope_depth >= 1:
            chains += [[b] for b in model.types_over(w.ident.total, 1, tag="b")]
        for tele in chains:
            chain_top = w.refl
            lifts = []
            ok_chain = True
            for b in tele:
                lb = model.reindex(b, chain_top)
                lifts.append(lb)
                chain_top = lb.top
            top_ctx = tele[-1].total if tele else w.ident.total
            for c in model.types_over(top_ctx, bounds.max_fiber, tag="c"):
                lc = model.reindex(c, chain_top)
                for d in all_sections(lc.src):
                    report.tick()
                    want = {
                        chain_top(x): lc.top(d.map(x)) for x in chain_top.dom
                    }
                    found = any(
                        all(cand.map(e) == v for e, v in want.items())
                        for cand in all_sections(c)
                    )
                    if not found:
                        report.fail(f"no elimination after {render(sigma)}")
                        return report
    return report


def check_weak_stability_unit(model, wt: UnitWitness, bounds: Bounds) -> CheckReport:
    report = CheckReport("weak-unit")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_unit(model, wt, sigma)
        for c in model.types_over(w.unit.total, bounds.max_fiber, tag="c"):
            lt = model.reindex(c, w.tt)
            for d in all_sections(lt.src):
                report.tick()
                want = {w.tt(g): lt.top(d.map(g)) for g in sigma.dom}
                found = any(
                    all(cand.map(u) == v for u, v in want.items())
                    for cand in all_sections(c)
                )
                if not found:
                    report.fail(f"no unit eliminator after {render(sigma)}")
                    return report
    return report


def check_weak_stability_zero(model, wt: ZeroWitness, bounds: Bounds) -> CheckReport:
    report = CheckReport("weak-zero")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_zero(model, wt, sigma)
        for c in model.types_over(w.zero.total, bounds.max_fiber, tag="c"):
            report.tick()
            if not any(True for _ in all_sections(c)):
                report.fail(f"no section over the empty type after {render(sigma)}")
                return report
    return report


def check_weak_stability_w(model, wt: WWitness, stable_pi, bounds: Bounds) -> CheckReport:
    """Structure-map and recursion existence for reindexed tree witnesses.

    Instantiates the good-product quantifier with the stable class's
    chosen member at the reindexed instance.
    """
    report = CheckReport("weak-w")
    for sigma in sigma_pool(bounds, wt.ctx):
        w = reindex_w(model, wt, sigma)
        wl = model.reindex(w.w, w.dom.display @ w.cod.display)
        p = stable_pi.choose(w.dom.total, w.cod, wl.src)
        try:
            fold = w_fold(w, p, wl.top)
        except InvalidWitness as exc:
            report.tick()
            report.fail(f"no structure map after {render(sigma)}: {exc}")
            return report
        for c in model.types_over(w.w.total, 1, tag="c"):
            # induction-hypothesis product over the fold domain
            bl = model.reindex(w.cod, p.pi.display)
            sub = finfun(
                bl.src.total,
                w.w.total,
                lambda e: wl.top(p.app(p.weak.solve(bl.top(e), bl.src.display(e)))),
            )
            lc = model.reindex(c, sub)
            p2 = stable_pi.choose(p.pi.total, bl.src, lc.src)
            ld = model.reindex(c, fold @ p2.pi.display)
            for d in all_sections(ld.src):
                report.tick()
                try:
                    rec = w_rec(
                        model, w, p, wl.top, fold, p2, bl.top, lc.top, c, d
                    )
                except InvalidWitness as exc:
                    report.fail(f"no recursion after {render(sigma)}: {exc}")
                    return report
                for g in p2.pi.total:
                    if rec.map(fold(p2.pi.display(g))) != ld.top(d.map(g)):
                        report.fail(f"recursion square fails after {render(sigma)}")
                        return report
    return report


# ----------------------------------------------------------------------
# strict stability of chosen operations (positive and negative controls)


def check_strict_stability_sum(suite, pool) -> CheckReport:
    """The sum-former equations on the nose for a chosen sum structure.

    ``suite`` adapts one choice of sums to a comparable form: it must
    provide ``transported_sum(a, b, sigma)`` (form first, reindex after)
    and ``fresh_sum(a, b, sigma)`` (reindex the inputs, form afresh),
    each returning a (type, inl, inr) triple in comparable
    representations, plus ``copair_cases(a, b, sigma)`` yielding
    (transported, fresh) section pairs.  ``pool`` yields (a, b, sigma).
    """
    report = CheckReport(f"strict-sum[{suite.name}]")
    for a, b, sigma in pool:
        report.tick()
        lhs = suite.transported_sum(a, b, sigma)
        rhs = suite.fresh_sum(a, b, sigma)
        for part, x, y in zip(("former", "inl", "inr"), lhs, rhs):
            if x != y:
                report.fail(f"sum {part} unstable at {render(sigma)}")
                break
        else:
            for moved, fresh in suite.copair_cases(a, b, sigma):
                report.tick()
                if moved != fresh:
                    report.fail(f"copair unstable at {render(sigma)}")
                    break
    return report


def check_beck_chevalley_id(model, make_fresh, wt: IdWitness, sigma: FinFun) -> bool:
    """The canonical comparison between a fresh and a reindexed identity
    type is a bijection on total spaces.

    ``make_fresh`` builds the model's identity witness for the reindexed
    base type.  Raises InvalidWitness when elimination is impossible.
    """
    wr = reindex_id(model, wt, sigma)
    la = model.reindex(wt.base, sigma)
    wf = make_fresh(sigma.dom, la.src)
    iso = canonical_iso(wf.weak, wr.weak)
    inv = iso.inverse()
    moved = TypeOver(wf.weak.src.total, wr.ident.total, inv @ wr.ident.display)
    wlift = model.reindex(moved, wf.ident.display)
    lc2 = model.reindex(wlift.src, wf.refl)
    d = Section(
        lc2.src,
        finfun(
            wf.base.total,
            lc2.src.total,
            lambda x: lc2.solve(x, wlift.solve(wf.refl(x), wr.refl(x))),
        ),
    )
    j = id_elim(model, wf, [], wlift.src, d)
    comparison = wlift.top @ j.map
    return comparison.is_bijective()


def check_pseudo_action(
    model, witnesses, action, bounds: Bounds, check_elim: bool = True
) -> CheckReport:
    """Laws of a candidate cartesian functorial action on identity types.

    ``witnesses`` assigns an IdWitness to (ctx, type); ``action`` maps a
    cartesian lift plus source and target witnesses to a candidate total
    map (or raises/returns None when it cannot even be written down).
    ``check_elim`` additionally demands commutation with elimination (off
    for the partially pseudo-stable variant, whose remaining coherences
    are out of scope here).
    """
    report = CheckReport("pseudo-action")
    for gamma in contexts(bounds, "g"):
        for t in model.types_over(gamma, bounds.max_fiber):
            w_dst = witnesses(gamma, t)
            for delta in contexts(bounds, "d"):
                for sigma in substitutions(delta, gamma):
                    report.tick()
                    lift = model.reindex(t, sigma)
                    w_src = witnesses(delta, lift.src)
                    try:
                        m = action(lift, w_src, w_dst)
                    except (LookupError, ValueError, KeyError):
                        report.fail(f"action undefined at {render(sigma)}")
                        continue
                    if m is None or m.dom != w_src.ident.total or m.cod != w_dst.ident.total:
                        report.fail(f"ill-typed action at {render(sigma)}")
                        continue
                    base = finfun(
                        w_src.weak.src.total,
                        w_dst.weak.src.total,
                        lambda e: w_dst.weak.solve(
                            lift.top(w_src.weak.src.display(e)),
                            lift.top(w_src.weak.top(e)),
                        ),
                    )
                    if (w_dst.ident.display @ m) != (base @ w_src.ident.display):
                        report.fail(f"action square fails at {render(sigma)}")
                        continue
                    for e in w_src.weak.src.total:
                        src_fib = w_src.ident.fiber(e)
                        dst_fib = w_dst.ident.fiber(base(e))
                        image = {m(x) for x in src_fib}
                        if len(image) != len(src_fib) or not image <= set(dst_fib) or len(
                            src_fib
                        ) != len(dst_fib):
                            report.fail(f"non-cartesian action at {render(sigma)}")
                            break
                    if (m @ w_src.refl) != (w_dst.refl @ lift.top):
                        report.fail(f"action ignores reflexivity at {render(sigma)}")
                        continue
                    if sigma.is_identity() and not m.is_identity():
                        report.fail("identity law fails")
                        continue
                    if check_elim and not _elim_commutes(
                        model, lift, w_src, w_dst, m
                    ):
                        report.fail(f"action ignores elimination at {render(sigma)}")
    return report


def _elim_commutes(
    model, lift: CartesianLift, w_src: IdWitness, w_dst: IdWitness, m: FinFun
) -> bool:
    """Elimination sections correspond under a candidate action (small pool)."""
    for c in model.types_over(w_dst.ident.total, 1, tag="c"):
        ld = model.reindex(c, w_dst.refl)
        pulled = model.reindex(c, m)
        ls = model.reindex(pulled.src, w_src.refl)
        for d in all_sections(ld.src):
            j_dst = id_elim(model, w_dst, [], c, d)
            d_src = Section(
                ls.src,
                finfun(
                    w_src.base.total,
                    ls.src.total,
                    lambda x: ls.solve(
                        x,
                        pulled.solve(
                            w_src.refl(x), ld.top(d.map(lift.top(x)))
                        ),
                    ),
                ),
            )
            j_src = id_elim(model, w_src, [], pulled.src, d_src)
            for e in w_src.ident.total:
                if pulled.top(j_src.map(e)) != j_dst.map(m(e)):
                    return False
    return True
