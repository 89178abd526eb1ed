"""Two backing comprehension categories over finite sets.

FamModel is the indexed-families oracle: strictly split, with canonical
pointwise constructors.  PullbackModel reindexes by the tagged pullback
(hence is not split) and its constructor providers seal every total space
with a fingerprint of the instance, so the provided structure is weakly
but demonstrably not strictly stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterator

from .comp import (
    CartesianLift,
    Section,
    TypeOver,
    identity_lift,
    type_over,
)
from .fin import (
    FinFun,
    FinSet,
    Pair,
    Val,
    atom,
    fingerprint,
    finfun,
    finset,
    fnval,
    pairv,
    render,
    tagv,
)
from .limits import pullback
from .witness import (
    IdWitness,
    PiWitness,
    SigmaWitness,
    SumWitness,
    UnitWitness,
    WWitness,
    ZeroWitness,
)


class InvalidWitness(Exception):
    """Raised when elimination data does not actually satisfy its contract."""


class WRegimeError(Exception):
    """Raised when a tree type would be infinite."""


@dataclass(frozen=True)
class AdversarialSeal:
    """Deterministic context fingerprint stamped into constructor outputs.

    Distinct instances get distinct tags, so a provider output can never
    accidentally coincide with one formed over another context; weak
    stability survives, strict stability observably fails.
    """

    salt: str = "adv"

    def tag(self, ctor: str, ctx: FinSet, *args) -> str:
        return f"{ctor}.{fingerprint(self.salt, ctor, ctx, *args)}"


class FamModel:
    """Indexed families: total spaces of pairv(ctx element, value)."""

    name = "fam"

    def __init__(self):
        self._memo: dict = {}

    def is_type(self, t: TypeOver) -> bool:
        return all(
            isinstance(e, Pair) and e.left == t.display(e) for e in t.total
        )

    def types_over(self, ctx: FinSet, max_fiber: int, tag: str = "v") -> Iterator[TypeOver]:
        for sizes in iproduct(range(max_fiber + 1), repeat=len(ctx)):
            elems = {}
            for c, n in zip(ctx, sizes):
                for i in range(n):
                    elems[pairv(c, atom(f"{tag}{i}"))] = c
            total = finset(elems)
            yield type_over(ctx, total, finfun(total, ctx, elems))

    def reindex(self, t: TypeOver, sigma: FinFun) -> CartesianLift:
        if sigma.cod != t.ctx:
            raise ValueError("substitution does not target the type's context")
        hit = self._memo.get((t, sigma))
        if hit is not None:
            return hit
        elems = {}
        for d in sigma.dom:
            for e in t.fiber(sigma(d)):
                elems[pairv(d, e.right)] = d
        total = finset(elems)
        src = type_over(sigma.dom, total, finfun(total, sigma.dom, elems))
        top = finfun(total, t.total, lambda e: pairv(sigma(e.left), e.right))
        return self._memo.setdefault((t, sigma), CartesianLift(src, t, sigma, top))

    @staticmethod
    def _fam(ctx: FinSet, values) -> TypeOver:
        """Family-form type from a per-context-element value assignment."""
        elems = {pairv(c, v): c for c in ctx for v in values(c)}
        total = finset(elems)
        return type_over(ctx, total, finfun(total, ctx, elems))

    # ------------------------------------------------------------------
    # canonical providers: pointwise constructions on fiber values, which
    # never mention the context element and so are strictly stable

    def sum_witness(self, ctx: FinSet, left: TypeOver, right: TypeOver) -> SumWitness:
        def values(c):
            return [tagv("inl", x.right) for x in left.fiber(c)] + [
                tagv("inr", y.right) for y in right.fiber(c)
            ]

        sm = self._fam(ctx, values)
        inl = finfun(left.total, sm.total, lambda x: pairv(x.left, tagv("inl", x.right)))
        inr = finfun(right.total, sm.total, lambda y: pairv(y.left, tagv("inr", y.right)))
        return SumWitness(ctx, left, right, sm, inl, inr)

    def pi_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> PiWitness:
        def values(c):
            graphs = [[]]
            for x in dom.fiber(c):
                opts = [w.right for w in cod.fiber(x)]
                graphs = [g + [(x.right, w)] for g in graphs for w in opts] if opts else []
            return [fnval(g) for g in graphs]

        pi = self._fam(ctx, values)
        weak = self.reindex(pi, dom.display)
        app = finfun(
            weak.src.total,
            cod.total,
            lambda e: pairv(e.left, dict(e.right.graph)[e.left.right]),
        )
        return PiWitness(ctx, dom, cod, pi, weak, app)

    def sigma_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> SigmaWitness:
        def values(c):
            return [
                pairv(x.right, y.right) for x in dom.fiber(c) for y in cod.fiber(x)
            ]

        sg = self._fam(ctx, values)
        pair = finfun(
            cod.total,
            sg.total,
            lambda y: pairv(y.left.left, pairv(y.left.right, y.right)),
        )
        return SigmaWitness(ctx, dom, cod, sg, pair)

    def id_witness(self, ctx: FinSet, base: TypeOver) -> IdWitness:
        weak = self.reindex(base, base.display)

        def values(e):
            return [atom("refl")] if e.left.right == e.right else []

        ident = self._fam(weak.src.total, values)
        refl = finfun(
            base.total,
            ident.total,
            lambda x: pairv(pairv(x, x.right), atom("refl")),
        )
        return IdWitness(ctx, base, weak, ident, refl)

    def unit_witness(self, ctx: FinSet) -> UnitWitness:
        un = self._fam(ctx, lambda c: [atom("tt")])
        tt = finfun(ctx, un.total, lambda c: pairv(c, atom("tt")))
        return UnitWitness(ctx, un, tt)

    def zero_witness(self, ctx: FinSet) -> ZeroWitness:
        return ZeroWitness(ctx, self._fam(ctx, lambda c: []))

    def w_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> WWitness:
        def values(c):
            labels = dom.fiber(c)
            leaves = [x for x in labels if not cod.fiber(x)]
            nodes = [x for x in labels if cod.fiber(x)]
            if leaves and nodes:
                raise WRegimeError(
                    f"tree type over {render(c)} is infinite (mixed arities)"
                )
            return [tagv("sup", pairv(x.right, fnval(()))) for x in leaves]

        w = self._fam(ctx, values)
        root = finfun(
            w.total, dom.total, lambda t: pairv(t.left, t.right.payload.left)
        )
        pair_dom = finset(
            pairv(t, b) for t in w.total for b in cod.fiber(root(t))
        )
        children = finfun(pair_dom, w.total, {})
        return WWitness(ctx, dom, cod, w, root, children)


class PullbackModel:
    """Types are arbitrary maps; reindexing is the chosen tagged pullback.

    The cleaving is normal (identity substitutions are lifted to
    identities) but not split: iterated reindexing nests "pb" tags while
    one-step reindexing along the composite does not.
    """

    name = "pullback"

    def __init__(self, seal: AdversarialSeal | None = None):
        self.seal = seal or AdversarialSeal()
        self._memo: dict = {}

    def is_type(self, t: TypeOver) -> bool:
        return True

    def types_over(self, ctx: FinSet, max_fiber: int, tag: str = "e") -> Iterator[TypeOver]:
        for sizes in iproduct(range(max_fiber + 1), repeat=len(ctx)):
            elems = {}
            for c, n in zip(ctx, sizes):
                for i in range(n):
                    elems[tagv(tag, pairv(c, atom(str(i))))] = c
            total = finset(elems)
            yield type_over(ctx, total, finfun(total, ctx, elems))

    def reindex(self, t: TypeOver, sigma: FinFun) -> CartesianLift:
        if sigma.cod != t.ctx:
            raise ValueError("substitution does not target the type's context")
        if sigma.is_identity():
            return identity_lift(t)
        hit = self._memo.get((t, sigma))
        if hit is not None:
            return hit
        sq = pullback(sigma, t.display)
        src = type_over(sigma.dom, sq.apex, sq.leg1)
        return self._memo.setdefault((t, sigma), CartesianLift(src, t, sigma, sq.leg2))

    # ------------------------------------------------------------------
    # weakly stable providers (every output sealed per instance)

    def sum_witness(self, ctx: FinSet, left: TypeOver, right: TypeOver) -> SumWitness:
        seal = self.seal.tag("sum", ctx, left, right)
        elems = {}
        for x in left.total:
            elems[tagv(seal, tagv("inl", x))] = left.display(x)
        for y in right.total:
            elems[tagv(seal, tagv("inr", y))] = right.display(y)
        total = finset(elems)
        sm = type_over(ctx, total, finfun(total, ctx, elems))
        inl = finfun(left.total, total, lambda x: tagv(seal, tagv("inl", x)))
        inr = finfun(right.total, total, lambda y: tagv(seal, tagv("inr", y)))
        return SumWitness(ctx, left, right, sm, inl, inr)

    def pi_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> PiWitness:
        seal = self.seal.tag("pi", ctx, dom, cod)
        elems = {}
        for c in ctx:
            fiber = dom.fiber(c)
            graphs = [[]]
            for x in fiber:
                opts = [e for e in cod.fiber(x)]
                graphs = [g + [(x, e)] for g in graphs for e in opts] if opts else []
            for g in graphs:
                elems[tagv(seal, pairv(c, fnval(g)))] = c
        total = finset(elems)
        pi = type_over(ctx, total, finfun(total, ctx, elems))
        weak = self.reindex(pi, dom.display)
        app_map = {}
        for e in weak.src.total:
            x = weak.src.display(e)
            graph = dict(weak.top(e).payload.right.graph)
            app_map[e] = graph[x]
        app = finfun(weak.src.total, cod.total, app_map)
        return PiWitness(ctx, dom, cod, pi, weak, app)

    def sigma_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> SigmaWitness:
        seal = self.seal.tag("sigma", ctx, dom, cod)
        elems = {tagv(seal, y): dom.display(cod.display(y)) for y in cod.total}
        total = finset(elems)
        sg = type_over(ctx, total, finfun(total, ctx, elems))
        pair = finfun(cod.total, total, lambda y: tagv(seal, y))
        return SigmaWitness(ctx, dom, cod, sg, pair)

    def id_witness(self, ctx: FinSet, base: TypeOver) -> IdWitness:
        seal = self.seal.tag("id", ctx, base)
        weak = self.reindex(base, base.display)
        elems = {tagv(seal, x): weak.solve(x, x) for x in base.total}
        total = finset(elems)
        ident = type_over(weak.src.total, total, finfun(total, weak.src.total, elems))
        refl = finfun(base.total, total, lambda x: tagv(seal, x))
        return IdWitness(ctx, base, weak, ident, refl)

    def unit_witness(self, ctx: FinSet) -> UnitWitness:
        seal = self.seal.tag("unit", ctx)
        elems = {tagv(seal, c): c for c in ctx}
        total = finset(elems)
        un = type_over(ctx, total, finfun(total, ctx, elems))
        tt = finfun(ctx, total, lambda c: tagv(seal, c))
        return UnitWitness(ctx, un, tt)

    def zero_witness(self, ctx: FinSet) -> ZeroWitness:
        empty = finset(())
        return ZeroWitness(ctx, type_over(ctx, empty, finfun(empty, ctx, {})))

    def w_witness(self, ctx: FinSet, dom: TypeOver, cod: TypeOver) -> WWitness:
        """Trees for label type ``dom`` and arity type ``cod`` over dom.total.

        Refuses instances whose tree set would be infinite: a fiber with
        both an empty-arity label (a leaf) and a nonempty-arity label
        admits unboundedly deep trees.
        """
        seal = self.seal.tag("w", ctx, dom, cod)
        elems = {}
        kids = {}
        for c in ctx:
            labels = dom.fiber(c)
            leaves = [x for x in labels if not cod.fiber(x)]
            nodes = [x for x in labels if cod.fiber(x)]
            if leaves and nodes:
                raise WRegimeError(
                    f"tree type over {render(c)} is infinite "
                    f"(mixed empty/nonempty arities)"
                )
            for x in leaves:
                t = tagv(seal, tagv("sup", pairv(x, fnval(()))))
                elems[t] = c
        total = finset(elems)
        w = type_over(ctx, total, finfun(total, ctx, elems))
        root = finfun(total, dom.total, lambda t: t.payload.payload.left)
        pair_dom = finset(
            pairv(t, b) for t in total for b in cod.fiber(root(t))
        )
        children = finfun(pair_dom, total, kids)
        return WWitness(ctx, dom, cod, w, root, children)


# ----------------------------------------------------------------------
# constructive eliminators for (possibly reindexed) witnesses


def copair(model, wt: SumWitness, c: TypeOver, t1: Section, t2: Section) -> Section:
    """The copair section for elimination data over a sum witness.

    ``c`` lives over wt.sum.total; ``t1``/``t2`` are sections of c
    reindexed along the inclusions (with the model's cleaving).  Found by
    case analysis on inclusion preimages.
    """
    l1 = model.reindex(c, wt.inl)
    l2 = model.reindex(c, wt.inr)
    if t1.of != l1.src or t2.of != l2.src:
        raise InvalidWitness("copair data not over the canonical reindexings")
    out = {}
    for s in wt.sum.total:
        from_l = wt.inl.preimage(s)
        from_r = wt.inr.preimage(s)
        if from_l:
            out[s] = l1.top(t1.map(from_l[0]))
        elif from_r:
            out[s] = l2.top(t2.map(from_r[0]))
        else:
            raise InvalidWitness(f"sum element {render(s)} hit by no inclusion")
    return Section(c, finfun(wt.sum.total, c.total, out))


def lambda_abs(wt: PiWitness, t: Section) -> Section:
    """Some abstraction of ``t``: a section of the product type whose
    pointwise application readout equals t.  First hit in fiber order."""
    if t.of != wt.cod:
        raise InvalidWitness("abstraction data is not a section of the codomain")
    out = {}
    for c in wt.ctx:
        found = None
        for p in wt.pi.fiber(c):
            if all(
                wt.app(wt.weak.solve(x, p)) == t.map(x) for x in wt.dom.fiber(c)
            ):
                found = p
                break
        if found is None:
            raise InvalidWitness(f"no abstraction over {render(c)}")
        out[c] = found
    return Section(wt.pi, finfun(wt.ctx, wt.pi.total, out))


def apply_readout(wt: PiWitness, s: Section) -> Section:
    """Pointwise application of a section of the product type: the beta
    observable used to compare abstractions."""
    out = {}
    for x in wt.dom.total:
        p = s.map(wt.dom.display(x))
        out[x] = wt.app(wt.weak.solve(x, p))
    return Section(wt.cod, finfun(wt.dom.total, wt.cod.total, out))


def split_pair(model, wt: SigmaWitness, c: TypeOver, d: Section) -> Section:
    """Eliminate a dependent-sum witness: transport d along pairing preimages."""
    lp = model.reindex(c, wt.pair)
    if d.of != lp.src:
        raise InvalidWitness("split data not over the canonical reindexing")
    out = {}
    for s in wt.sig.total:
        pre = wt.pair.preimage(s)
        if not pre:
            raise InvalidWitness(f"sum element {render(s)} not in pairing image")
        out[s] = lp.top(d.map(pre[0]))
    return Section(c, finfun(wt.sig.total, c.total, out))


def id_elim(model, wt: IdWitness, tele: list[TypeOver], c: TypeOver, d: Section) -> Section:
    """Frobenius elimination for an identity witness.

    ``tele`` is a chain of types: tele[0] over wt.ident.total, each next
    over the previous total; ``c`` lies over the last total (or the
    identity total when the chain is empty); ``d`` is a section of c
    reindexed along the whole reflexivity chain.  Works by transporting
    along the inverse of that chain, which is a bijection exactly when
    the witness is a valid identity type.
    """
    chain_top = wt.refl  # base.total -> ident.total
    lifts = []
    for b in tele:
        lb = model.reindex(b, chain_top)
        lifts.append(lb)
        chain_top = lb.top
    lc = model.reindex(c, chain_top)
    if d.of != lc.src:
        raise InvalidWitness("elimination data not over the reflexivity chain")
    if not chain_top.is_bijective():
        raise InvalidWitness("reflexivity chain is not a bijection")
    inv = chain_top.inverse()
    ctx = tele[-1].total if tele else wt.ident.total
    out = {e: lc.top(d.map(inv(e))) for e in ctx}
    return Section(c, finfun(ctx, c.total, out))


def unit_elim(model, wt: UnitWitness, c: TypeOver, d: Section) -> Section:
    lt = model.reindex(c, wt.tt)
    if d.of != lt.src:
        raise InvalidWitness("unit elimination data not over the tt reindexing")
    if not wt.tt.is_bijective():
        raise InvalidWitness("unit introduction is not a bijection")
    inv = wt.tt.inverse()
    out = {u: lt.top(d.map(inv(u))) for u in wt.unit.total}
    return Section(c, finfun(wt.unit.total, c.total, out))


def zero_elim(wt: ZeroWitness, c: TypeOver) -> Section:
    if wt.zero.total.elements:
        raise InvalidWitness("zero type is inhabited")
    return Section(c, finfun(wt.zero.total, c.total, {}))


def w_fold(wt: WWitness, p: PiWitness, wtop: FinFun) -> FinFun:
    """The structure map for a tree witness, relative to a product witness.

    ``p`` is a product type over dom.total with domain wt.cod and codomain
    a presentation of the weakened tree type; ``wtop`` maps that codomain
    into wt.w.total.  Returns the map sending (label, branches) to the
    unique tree with that decomposition.
    """
    out = {}
    for e in p.pi.total:
        a = p.pi.display(e)  # label in dom.total
        want = {}
        for b in p.dom.fiber(a):
            sub = p.app(p.weak.solve(b, e))
            want[b] = wtop(sub)
        found = None
        for t in wt.w.fiber(wt.dom.display(a)):
            if wt.root(t) == a and all(wt.child(t, b) == s for b, s in want.items()):
                found = t
                break
        if found is None:
            raise InvalidWitness(f"no tree decomposing as {render(a)}")
        out[e] = found
    return finfun(p.pi.total, wt.w.total, out)


def w_depth(wt: WWitness, t: Val) -> int:
    kids = [wt.child(t, b) for b in wt.cod.fiber(wt.root(t))]
    return 0 if not kids else 1 + max(w_depth(wt, k) for k in kids)


def w_branch_encoding(wt: WWitness, p: PiWitness, wtop: FinFun, t: Val) -> Val:
    """The product element whose application readout is t's branch map."""
    a = wt.root(t)
    for cand in p.pi.fiber(a):
        if all(
            wtop(p.app(p.weak.solve(b, cand))) == wt.child(t, b)
            for b in p.dom.fiber(a)
        ):
            return cand
    raise InvalidWitness(f"tree {render(t)} has no branch encoding")


def w_rec(
    model,
    wt: WWitness,
    p: PiWitness,
    wtop: FinFun,
    fold: FinFun,
    p2: PiWitness,
    btop: FinFun,
    ctop: FinFun,
    c: TypeOver,
    d: Section,
) -> Section:
    """Recursion for a tree witness, by structural recursion on depth.

    ``p2`` is the product over p.pi.total packaging induction hypotheses:
    its domain presents wt.cod weakened to p.pi.total (``btop`` maps it to
    cod.total) and its codomain presents c pulled along the subtree
    readout (``ctop`` maps it to c.total).  ``d`` is a section of c
    reindexed along fold . display, with domain p2.pi.total.
    """
    ldc = model.reindex(c, fold @ p2.pi.display)
    if d.of != ldc.src:
        raise InvalidWitness("recursion data not over the fold reindexing")
    order = sorted(wt.w.total, key=lambda t: w_depth(wt, t))
    out: dict[Val, Val] = {}
    for t in order:
        f = w_branch_encoding(wt, p, wtop, t)
        # the packaging of already-computed values at t's subtrees
        g = None
        for cand in p2.pi.fiber(f):
            ok = True
            for b2 in p2.dom.fiber(f):
                sub = wtop(p.app(p.weak.solve(btop(b2), f)))
                if ctop(p2.app(p2.weak.solve(b2, cand))) != out[sub]:
                    ok = False
                    break
            if ok:
                g = cand
                break
        if g is None:
            raise InvalidWitness("no induction-hypothesis packaging")
        out[t] = ldc.top(d.map(g))
    return Section(c, finfun(wt.w.total, c.total, out))
