"""Fully annotated core syntax with de Bruijn indices.

Simultaneous substitutions are tuples of terms, one per context entry,
innermost entry last (index 0 is the innermost binder).  Substitution is
capture-avoiding and strictly functorial: identity and composition laws
hold as syntactic equality, which the property tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass


class Ty:
    __slots__ = ()


class Tm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Unit(Ty):
    pass


@dataclass(frozen=True, slots=True)
class Zero(Ty):
    pass


@dataclass(frozen=True, slots=True)
class Sum(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True, slots=True)
class Pi(Ty):
    dom: Ty
    cod: Ty  # under one binder


@dataclass(frozen=True, slots=True)
class Sigma(Ty):
    dom: Ty
    cod: Ty  # under one binder


@dataclass(frozen=True, slots=True)
class Id(Ty):
    ty: Ty
    lhs: Tm
    rhs: Tm


@dataclass(frozen=True, slots=True)
class Var(Tm):
    idx: int


@dataclass(frozen=True, slots=True)
class Lam(Tm):
    dom: Ty
    body: Tm  # under one binder


@dataclass(frozen=True, slots=True)
class App(Tm):
    fn: Tm
    arg: Tm


@dataclass(frozen=True, slots=True)
class PairTm(Tm):
    ann: Sigma
    fst: Tm
    snd: Tm


@dataclass(frozen=True, slots=True)
class SplitTm(Tm):
    motive: Ty  # under one binder (the pair)
    scrut: Tm
    body: Tm  # under two binders (components)


@dataclass(frozen=True, slots=True)
class Inl(Tm):
    ann: Sum
    tm: Tm


@dataclass(frozen=True, slots=True)
class Inr(Tm):
    ann: Sum
    tm: Tm


@dataclass(frozen=True, slots=True)
class Case(Tm):
    motive: Ty  # under one binder (the scrutinee)
    scrut: Tm
    left: Tm  # under one binder
    right: Tm  # under one binder


@dataclass(frozen=True, slots=True)
class TT(Tm):
    pass


@dataclass(frozen=True, slots=True)
class Urec(Tm):
    motive: Ty  # under one binder
    body: Tm
    scrut: Tm


@dataclass(frozen=True, slots=True)
class Exfalso(Tm):
    motive: Ty  # under one binder
    scrut: Tm


@dataclass(frozen=True, slots=True)
class Refl(Tm):
    tm: Tm


@dataclass(frozen=True, slots=True)
class J(Tm):
    motive: Ty  # under three binders: lhs, rhs, proof
    body: Tm  # under one binder
    proof: Tm


Subst = tuple  # of Tm, innermost component last


def shift_tm(t: Tm, by: int, cutoff: int = 0) -> Tm:
    if isinstance(t, Var):
        return Var(t.idx + by) if t.idx >= cutoff else t
    if isinstance(t, Lam):
        return Lam(shift_ty(t.dom, by, cutoff), shift_tm(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(shift_tm(t.fn, by, cutoff), shift_tm(t.arg, by, cutoff))
    if isinstance(t, PairTm):
        return PairTm(
            shift_ty(t.ann, by, cutoff),
            shift_tm(t.fst, by, cutoff),
            shift_tm(t.snd, by, cutoff),
        )
    if isinstance(t, SplitTm):
        return SplitTm(
            shift_ty(t.motive, by, cutoff + 1),
            shift_tm(t.scrut, by, cutoff),
            shift_tm(t.body, by, cutoff + 2),
        )
    if isinstance(t, Inl):
        return Inl(shift_ty(t.ann, by, cutoff), shift_tm(t.tm, by, cutoff))
    if isinstance(t, Inr):
        return Inr(shift_ty(t.ann, by, cutoff), shift_tm(t.tm, by, cutoff))
    if isinstance(t, Case):
        return Case(
            shift_ty(t.motive, by, cutoff + 1),
            shift_tm(t.scrut, by, cutoff),
            shift_tm(t.left, by, cutoff + 1),
            shift_tm(t.right, by, cutoff + 1),
        )
    if isinstance(t, TT):
        return t
    if isinstance(t, Urec):
        return Urec(
            shift_ty(t.motive, by, cutoff + 1),
            shift_tm(t.body, by, cutoff),
            shift_tm(t.scrut, by, cutoff),
        )
    if isinstance(t, Exfalso):
        return Exfalso(shift_ty(t.motive, by, cutoff + 1), shift_tm(t.scrut, by, cutoff))
    if isinstance(t, Refl):
        return Refl(shift_tm(t.tm, by, cutoff))
    if isinstance(t, J):
        return J(
            shift_ty(t.motive, by, cutoff + 3),
            shift_tm(t.body, by, cutoff + 1),
            shift_tm(t.proof, by, cutoff),
        )
    raise TypeError(f"not a term: {t!r}")


def shift_ty(a: Ty, by: int, cutoff: int = 0) -> Ty:
    if isinstance(a, (Unit, Zero)):
        return a
    if isinstance(a, Sum):
        return Sum(shift_ty(a.left, by, cutoff), shift_ty(a.right, by, cutoff))
    if isinstance(a, Pi):
        return Pi(shift_ty(a.dom, by, cutoff), shift_ty(a.cod, by, cutoff + 1))
    if isinstance(a, Sigma):
        return Sigma(shift_ty(a.dom, by, cutoff), shift_ty(a.cod, by, cutoff + 1))
    if isinstance(a, Id):
        return Id(
            shift_ty(a.ty, by, cutoff),
            shift_tm(a.lhs, by, cutoff),
            shift_tm(a.rhs, by, cutoff),
        )
    raise TypeError(f"not a type: {a!r}")


def identity_subst(n: int) -> Subst:
    return tuple(Var(n - 1 - i) for i in range(n))


def lift_subst(s: Subst) -> Subst:
    """Push a substitution under one binder."""
    return tuple(shift_tm(t, 1) for t in s) + (Var(0),)


def subst_var(i: int, s: Subst) -> Tm:
    # component order: outermost first, so index 0 is the last component
    return s[len(s) - 1 - i]


def subst_tm(t: Tm, s: Subst) -> Tm:
    if isinstance(t, Var):
        return subst_var(t.idx, s)
    if isinstance(t, Lam):
        return Lam(subst_ty(t.dom, s), subst_tm(t.body, lift_subst(s)))
    if isinstance(t, App):
        return App(subst_tm(t.fn, s), subst_tm(t.arg, s))
    if isinstance(t, PairTm):
        return PairTm(subst_ty(t.ann, s), subst_tm(t.fst, s), subst_tm(t.snd, s))
    if isinstance(t, SplitTm):
        return SplitTm(
            subst_ty(t.motive, lift_subst(s)),
            subst_tm(t.scrut, s),
            subst_tm(t.body, lift_subst(lift_subst(s))),
        )
    if isinstance(t, Inl):
        return Inl(subst_ty(t.ann, s), subst_tm(t.tm, s))
    if isinstance(t, Inr):
        return Inr(subst_ty(t.ann, s), subst_tm(t.tm, s))
    if isinstance(t, Case):
        return Case(
            subst_ty(t.motive, lift_subst(s)),
            subst_tm(t.scrut, s),
            subst_tm(t.left, lift_subst(s)),
            subst_tm(t.right, lift_subst(s)),
        )
    if isinstance(t, TT):
        return t
    if isinstance(t, Urec):
        return Urec(
            subst_ty(t.motive, lift_subst(s)),
            subst_tm(t.body, s),
            subst_tm(t.scrut, s),
        )
    if isinstance(t, Exfalso):
        return Exfalso(subst_ty(t.motive, lift_subst(s)), subst_tm(t.scrut, s))
    if isinstance(t, Refl):
        return Refl(subst_tm(t.tm, s))
    if isinstance(t, J):
        return J(
            subst_ty(t.motive, lift_subst(lift_subst(lift_subst(s)))),
            subst_tm(t.body, lift_subst(s)),
            subst_tm(t.proof, s),
        )
    raise TypeError(f"not a term: {t!r}")


def subst_ty(a: Ty, s: Subst) -> Ty:
    if isinstance(a, (Unit, Zero)):
        return a
    if isinstance(a, Sum):
        return Sum(subst_ty(a.left, s), subst_ty(a.right, s))
    if isinstance(a, Pi):
        return Pi(subst_ty(a.dom, s), subst_ty(a.cod, lift_subst(s)))
    if isinstance(a, Sigma):
        return Sigma(subst_ty(a.dom, s), subst_ty(a.cod, lift_subst(s)))
    if isinstance(a, Id):
        return Id(subst_ty(a.ty, s), subst_tm(a.lhs, s), subst_tm(a.rhs, s))
    raise TypeError(f"not a type: {a!r}")


def compose_subst(s: Subst, t: Subst) -> Subst:
    """The substitution acting as s-then-t: components of s pushed through t."""
    return tuple(subst_tm(c, t) for c in s)


def single_subst(n: int, t: Tm) -> Subst:
    """Substitute t for the innermost variable of an (n+1)-entry context."""
    return identity_subst(n) + (t,)


def weaken_subst(n: int) -> Subst:
    """The projection substitution from an (n+1)-entry context to n entries."""
    return tuple(Var(n - i) for i in range(n))
