"""Syntax-directed checking for the fully annotated fragment.

Annotations make every term's type inferable; the only type equality
used anywhere is syntactic identity.
"""

from __future__ import annotations

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
    identity_subst,
    shift_ty,
    single_subst,
    subst_ty,
)

Ctx = tuple  # of Ty, outermost first


class CheckError(Exception):
    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual

    def __str__(self):
        base = super().__str__()
        if self.expected is not None:
            return f"{base} (expected {self.expected!r}, got {self.actual!r})"
        return base


def wf_ty(ctx: Ctx, a: Ty) -> None:
    if isinstance(a, (Unit, Zero)):
        return
    if isinstance(a, Sum):
        wf_ty(ctx, a.left)
        wf_ty(ctx, a.right)
        return
    if isinstance(a, (Pi, Sigma)):
        wf_ty(ctx, a.dom)
        wf_ty(ctx + (a.dom,), a.cod)
        return
    if isinstance(a, Id):
        wf_ty(ctx, a.ty)
        check(ctx, a.lhs, a.ty)
        check(ctx, a.rhs, a.ty)
        return
    raise CheckError(f"not a type: {a!r}")


def check(ctx: Ctx, t: Tm, want: Ty) -> None:
    got = infer(ctx, t)
    if got != want:
        raise CheckError("type mismatch", expected=want, actual=got)


def infer(ctx: Ctx, t: Tm) -> Ty:
    n = len(ctx)
    if isinstance(t, Var):
        if not (0 <= t.idx < n):
            raise CheckError(f"variable {t.idx} out of scope")
        return shift_ty(ctx[n - 1 - t.idx], t.idx + 1)
    if isinstance(t, Lam):
        wf_ty(ctx, t.dom)
        return Pi(t.dom, infer(ctx + (t.dom,), t.body))
    if isinstance(t, App):
        fty = infer(ctx, t.fn)
        if not isinstance(fty, Pi):
            raise CheckError("application head is not a function", actual=fty)
        check(ctx, t.arg, fty.dom)
        return subst_ty(fty.cod, single_subst(n, t.arg))
    if isinstance(t, PairTm):
        wf_ty(ctx, t.ann)
        if not isinstance(t.ann, Sigma):
            raise CheckError("pair annotation is not a dependent sum")
        check(ctx, t.fst, t.ann.dom)
        check(ctx, t.snd, subst_ty(t.ann.cod, single_subst(n, t.fst)))
        return t.ann
    if isinstance(t, SplitTm):
        sty = infer(ctx, t.scrut)
        if not isinstance(sty, Sigma):
            raise CheckError("split scrutinee is not a dependent pair", actual=sty)
        wf_ty(ctx + (sty,), t.motive)
        # motive under the pair binder, instantiated at pair(x, y)
        pair_sub = tuple(Var(n + 1 - i) for i in range(n)) + (
            PairTm(shift_ty(sty, 2), Var(1), Var(0)),
        )
        want = subst_ty(t.motive, pair_sub)
        body_ty = infer(ctx + (sty.dom, sty.cod), t.body)
        if body_ty != want:
            raise CheckError("split body mismatch", expected=want, actual=body_ty)
        return subst_ty(t.motive, single_subst(n, t.scrut))
    if isinstance(t, (Inl, Inr)):
        wf_ty(ctx, t.ann)
        if not isinstance(t.ann, Sum):
            raise CheckError("injection annotation is not a sum")
        side = t.ann.left if isinstance(t, Inl) else t.ann.right
        check(ctx, t.tm, side)
        return t.ann
    if isinstance(t, Case):
        sty = infer(ctx, t.scrut)
        if not isinstance(sty, Sum):
            raise CheckError("case scrutinee is not a sum", actual=sty)
        wf_ty(ctx + (sty,), t.motive)
        shifted = shift_ty(sty, 1)
        base = tuple(Var(n - i) for i in range(n))
        want_l = subst_ty(t.motive, base + (Inl(shifted, Var(0)),))
        got_l = infer(ctx + (sty.left,), t.left)
        if got_l != want_l:
            raise CheckError("case left branch mismatch", expected=want_l, actual=got_l)
        want_r = subst_ty(t.motive, base + (Inr(shifted, Var(0)),))
        got_r = infer(ctx + (sty.right,), t.right)
        if got_r != want_r:
            raise CheckError("case right branch mismatch", expected=want_r, actual=got_r)
        return subst_ty(t.motive, single_subst(n, t.scrut))
    if isinstance(t, TT):
        return Unit()
    if isinstance(t, Urec):
        check(ctx, t.scrut, Unit())
        wf_ty(ctx + (Unit(),), t.motive)
        want = subst_ty(t.motive, single_subst(n, TT()))
        got = infer(ctx, t.body)
        if got != want:
            raise CheckError("unit recursor mismatch", expected=want, actual=got)
        return subst_ty(t.motive, single_subst(n, t.scrut))
    if isinstance(t, Exfalso):
        check(ctx, t.scrut, Zero())
        wf_ty(ctx + (Zero(),), t.motive)
        return subst_ty(t.motive, single_subst(n, t.scrut))
    if isinstance(t, Refl):
        a = infer(ctx, t.tm)
        return Id(a, t.tm, t.tm)
    if isinstance(t, J):
        pty = infer(ctx, t.proof)
        if not isinstance(pty, Id):
            raise CheckError("elimination target is not an identity proof", actual=pty)
        a = pty.ty
        id_ctx = ctx + (a, shift_ty(a, 1), Id(shift_ty(a, 2), Var(1), Var(0)))
        wf_ty(id_ctx, t.motive)
        base = tuple(Var(n - i) for i in range(n))
        refl_sub = base + (Var(0), Var(0), Refl(Var(0)))
        want = subst_ty(t.motive, refl_sub)
        got = infer(ctx + (a,), t.body)
        if got != want:
            raise CheckError("identity eliminator mismatch", expected=want, actual=got)
        return subst_ty(
            t.motive, identity_subst(n) + (pty.lhs, pty.rhs, t.proof)
        )
    raise CheckError(f"not a term: {t!r}")


def check_subst(src: Ctx, dst: Ctx, s) -> None:
    """Componentwise well-typedness of a substitution src -> dst."""
    if len(s) != len(dst):
        raise CheckError(
            f"substitution has {len(s)} components for a {len(dst)}-entry context"
        )
    for k, comp in enumerate(s):
        expected = subst_ty(dst[k], s[:k]) if k else dst[0]
        check(src, comp, expected)
