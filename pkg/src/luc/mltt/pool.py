"""Deterministic judgement pools for the soundness runs.

The enumerated part generates well-typed terms up to tree height 5 over
small base contexts, with annotation types from a fixed alphabet.  It is
fully exhaustive through height 3; at heights 4 and 5 each combination
site keeps a fixed-size deterministic prefix of its candidate lists,
because the unrestricted product of application and branch sites grows
into the hundreds of thousands.  The randomized part adds deeper cases
from a seeded generator, so runs are reproducible from the recorded
seed.
"""

from __future__ import annotations

import random
from itertools import product as iproduct

from .check import CheckError, check_subst, infer, wf_ty
from .syntax import (
    App,
    Case,
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
    shift_ty,
    subst_ty,
)

B2 = Sum(Unit(), Unit())

BASE_CONTEXTS: tuple[tuple[Ty, ...], ...] = ((), (B2,), (B2, Unit()))

# annotation alphabets; closed, so branch typing stays syntax-directed
DOM_TYPES = (Unit(), B2)
SUM_TYPES = (B2,)
SIGMA_TYPES = (Sigma(Unit(), B2),)
MOTIVE_TYPES = (Unit(), B2)

# combination-site caps for heights above the exhaustive range
EXHAUSTIVE_HEIGHT = 3
CAP = 2

_BUCKETS: dict[tuple, dict[Ty, list[Tm]]] = {}


def term_height(t: Tm) -> int:
    kids = ()
    if isinstance(t, Lam):
        kids = (t.body,)
    elif isinstance(t, App):
        kids = (t.fn, t.arg)
    elif isinstance(t, PairTm):
        kids = (t.fst, t.snd)
    elif isinstance(t, SplitTm):
        kids = (t.scrut, t.body)
    elif isinstance(t, (Inl, Inr)):
        kids = (t.tm,)
    elif isinstance(t, Case):
        kids = (t.scrut, t.left, t.right)
    elif isinstance(t, Urec):
        kids = (t.body, t.scrut)
    elif isinstance(t, Refl):
        kids = (t.tm,)
    elif isinstance(t, J):
        kids = (t.body, t.proof)
    return 1 + max((term_height(k) for k in kids), default=0)


def terms_by_type(ctx: tuple[Ty, ...], height: int) -> dict[Ty, list[Tm]]:
    """Well-typed terms of tree height <= height, bucketed by type."""
    key = (ctx, height)
    if key in _BUCKETS:
        return _BUCKETS[key]
    if height <= 0:
        _BUCKETS[key] = {}
        return {}
    buckets: dict[Ty, list[Tm]] = {}
    prev = terms_by_type(ctx, height - 1) if height > 1 else {}
    seen: set[Tm] = set()
    for ts in prev.values():
        for t in ts:
            seen.add(t)
            buckets.setdefault(infer(ctx, t), []).append(t)

    def cap(items: list) -> list:
        return items if height <= EXHAUSTIVE_HEIGHT else items[:CAP]

    def add(t: Tm) -> None:
        if t in seen:
            return
        seen.add(t)
        buckets.setdefault(infer(ctx, t), []).append(t)

    if height == 1:
        add(TT())
        for i in range(len(ctx)):
            add(Var(i))
        _BUCKETS[key] = buckets
        return buckets

    layer = [t for ts in prev.values() for t in ts if term_height(t) == height - 1]
    for t in layer:
        ty = infer(ctx, t)
        for ann in SUM_TYPES:
            if ty == ann.left:
                add(Inl(ann, t))
            if ty == ann.right:
                add(Inr(ann, t))
        add(Refl(t))
    for dom in DOM_TYPES:
        inner = terms_by_type(ctx + (dom,), height - 1)
        for body in [t for ts in inner.values() for t in ts if term_height(t) == height - 1]:
            add(Lam(dom, body))
    for fty, fs in list(prev.items()):
        if not isinstance(fty, Pi):
            continue
        for f in cap(fs):
            for x in cap(prev.get(fty.dom, [])):
                if max(term_height(f), term_height(x)) == height - 1:
                    add(App(f, x))
    for ann in SIGMA_TYPES:
        for s in cap(prev.get(ann.dom, [])):
            for t in cap(prev.get(ann.cod, [])):
                if max(term_height(s), term_height(t)) == height - 1:
                    add(PairTm(ann, s, t))
    for motive in MOTIVE_TYPES:
        for sty, ss in list(prev.items()):
            if isinstance(sty, Sum):
                lefts = cap(terms_by_type(ctx + (sty.left,), height - 1).get(motive, []))
                rights = cap(terms_by_type(ctx + (sty.right,), height - 1).get(motive, []))
                for s in cap(ss):
                    for dl in lefts:
                        for dr in rights:
                            if max(term_height(s), term_height(dl), term_height(dr)) == height - 1:
                                add(Case(motive, s, dl, dr))
            elif isinstance(sty, Sigma):
                bodies = cap(
                    terms_by_type(ctx + (sty.dom, sty.cod), height - 1).get(motive, [])
                )
                for s in cap(ss):
                    for b in bodies:
                        if max(term_height(s), term_height(b)) == height - 1:
                            add(SplitTm(motive, s, b))
            elif isinstance(sty, Unit):
                for s in cap(ss):
                    for d in cap(prev.get(motive, [])):
                        if max(term_height(s), term_height(d)) == height - 1:
                            add(Urec(motive, d, s))
            elif isinstance(sty, Id):
                bodies = cap(terms_by_type(ctx + (sty.ty,), height - 1).get(motive, []))
                for s in cap(ss):
                    for b in bodies:
                        if max(term_height(s), term_height(b)) == height - 1:
                            add(J(motive, b, s))
    _BUCKETS[key] = buckets
    return buckets


def type_pool(ctx: tuple[Ty, ...]) -> list[Ty]:
    """Well-formed types over the context, term parts from small buckets."""
    out: list[Ty] = [Unit(), Zero(), B2, Sum(B2, Unit())]
    out += [Pi(d, c) for d in DOM_TYPES for c in (Unit(), B2)]
    out += [Sigma(d, c) for d in DOM_TYPES for c in (Unit(), B2)]
    out.append(Pi(B2, Sum(Unit(), Id(Sum(Unit(), Unit()), Var(0), Var(0)))))
    buckets = terms_by_type(ctx, 2)
    for ty, ts in buckets.items():
        if isinstance(ty, (Sum, Unit)):
            for t in ts[:3]:
                for u in ts[:3]:
                    out.append(Id(ty, t, u))
    checked: list[Ty] = []
    for a in out:
        try:
            wf_ty(ctx, a)
        except CheckError:
            continue
        if a not in checked:
            checked.append(a)
    return checked


def subst_pool(src: tuple[Ty, ...], dst: tuple[Ty, ...], height: int = 3, cap: int = 4) -> list[tuple]:
    """Well-typed substitutions src -> dst, built position by position."""
    buckets = terms_by_type(src, height)
    partials: list[tuple] = [()]
    for k, a in enumerate(dst):
        grown = []
        for prefix in partials:
            want = subst_ty(a, prefix)
            for t in buckets.get(want, [])[:cap]:
                grown.append(prefix + (t,))
        partials = grown[: cap * 4]
    out = []
    for s in partials:
        try:
            check_subst(src, dst, s)
        except CheckError:
            continue
        out.append(s)
        if len(out) >= cap:
            break
    return out


def judgement_pool(height: int = 5, subs_per_judgement: int = 2) -> list[tuple]:
    """(src ctx, dst ctx, substitution, judgement) quadruples.

    Every enumerated judgement appears with ``subs_per_judgement``
    substitutions, selected by cycling deterministically through the
    substitution pool for its context pair.
    """
    pool = []
    for src in BASE_CONTEXTS:
        for dst in BASE_CONTEXTS:
            subs = subst_pool(src, dst)
            if not subs:
                continue
            judgements = [("ty", a) for a in type_pool(dst)]
            buckets = terms_by_type(dst, height)
            judgements += [("tm", t) for ts in buckets.values() for t in ts]
            for i, j in enumerate(judgements):
                for k in range(min(subs_per_judgement, len(subs))):
                    pool.append((src, dst, subs[(i + k) % len(subs)], j))
    return pool


def seeded_cases(seed: int, count: int = 100) -> list[tuple]:
    """Deeper randomized term cases; deterministic in the seed."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 400:
        attempts += 1
        src = BASE_CONTEXTS[rng.randrange(len(BASE_CONTEXTS))]
        dst = BASE_CONTEXTS[rng.randrange(len(BASE_CONTEXTS))]
        subs = subst_pool(src, dst)
        if not subs:
            continue
        s = subs[rng.randrange(len(subs))]
        t = _random_term(rng, dst, depth=rng.randrange(5, 8))
        if t is None:
            continue
        try:
            infer(dst, t)
        except CheckError:
            continue
        out.append((src, dst, s, ("tm", t)))
    return out


def _random_term(rng: random.Random, ctx: tuple[Ty, ...], depth: int):
    if depth <= 1:
        leaves = [TT()] + [Var(i) for i in range(len(ctx))]
        return leaves[rng.randrange(len(leaves))]
    choice = rng.randrange(7)
    if choice == 0:
        dom = DOM_TYPES[rng.randrange(len(DOM_TYPES))]
        body = _random_term(rng, ctx + (dom,), depth - 1)
        return Lam(dom, body) if body is not None else None
    if choice == 1:
        ann = SUM_TYPES[0]
        arg = _random_term(rng, ctx, depth - 1)
        if arg is None:
            return None
        try:
            got = infer(ctx, arg)
        except CheckError:
            return None
        if got == ann.left:
            return Inl(ann, arg)
        if got == ann.right:
            return Inr(ann, arg)
        return None
    if choice == 2:
        arg = _random_term(rng, ctx, depth - 1)
        return Refl(arg) if arg is not None else None
    if choice == 3:
        scrut = _random_term(rng, ctx, depth - 1)
        if scrut is None:
            return None
        try:
            sty = infer(ctx, scrut)
        except CheckError:
            return None
        if not isinstance(sty, Sum):
            return None
        motive = MOTIVE_TYPES[rng.randrange(len(MOTIVE_TYPES))]
        dl = _random_term(rng, ctx + (sty.left,), depth - 1)
        dr = _random_term(rng, ctx + (sty.right,), depth - 1)
        if dl is None or dr is None:
            return None
        return Case(motive, scrut, dl, dr)
    if choice == 4:
        motive = MOTIVE_TYPES[rng.randrange(len(MOTIVE_TYPES))]
        d = _random_term(rng, ctx, depth - 1)
        s = _random_term(rng, ctx, depth - 1)
        if d is None or s is None:
            return None
        try:
            if infer(ctx, s) != Unit():
                return None
        except CheckError:
            return None
        return Urec(motive, d, s)
    if choice == 5:
        proof = _random_term(rng, ctx, depth - 1)
        if proof is None:
            return None
        try:
            pty = infer(ctx, proof)
        except CheckError:
            return None
        if not isinstance(pty, Id):
            return None
        motive = MOTIVE_TYPES[rng.randrange(len(MOTIVE_TYPES))]
        body = _random_term(rng, ctx + (pty.ty,), depth - 1)
        if body is None:
            return None
        return J(motive, body, proof)
    fn = _random_term(rng, ctx, depth - 1)
    arg = _random_term(rng, ctx, depth - 1)
    if fn is None or arg is None:
        return None
    return App(fn, arg)
