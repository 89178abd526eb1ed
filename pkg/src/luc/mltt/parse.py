"""S-expression surface syntax for declarations, types, and terms.

Grammar (one declaration per top-level form, ';' starts a line comment):

  (ctx NAME ((x TY) ...))
  (ty NAME CTXREF TY)
  (tm NAME CTXREF TM TY)
  (subst NAME SRCREF DSTREF (TM ...))

Types:  Unit | Zero | (Sum A B) | (Pi (x A) B) | (Sigma (x A) B)
      | (Id A t u)
Terms:  x | tt | (lam (x A) b) | (app f a) | (pair S s t)
      | (split ((w) C) s ((x y) d)) | (inl S t) | (inr S t)
      | (case ((w) C) s ((x) l) ((y) r)) | (urec ((u) C) d s)
      | (exfalso ((z) C) s) | (refl t)
      | (J ((x y p) C) ((z) d) q)

Binder blocks introduce names for de Bruijn conversion; shadowing is
allowed, the innermost binding wins.
"""

from __future__ import annotations

from dataclasses import dataclass

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


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Node:
    """A token or a parenthesized list, with its source position."""

    value: object  # str for atoms, tuple[Node, ...] for lists
    line: int
    col: int

    @property
    def is_atom(self) -> bool:
        return isinstance(self.value, str)


def _tokens(text: str) -> list[Node]:
    out = []
    line, col = 1, 0
    word = ""
    word_pos = (1, 0)
    in_comment = False
    for ch in text:
        col += 1
        if ch == "\n":
            in_comment = False
        if in_comment:
            continue
        if ch == ";":
            in_comment = True
            ch = " "
        if ch in "() \t\r\n":
            if word:
                out.append(Node(word, *word_pos))
                word = ""
            if ch in "()":
                out.append(Node(ch, line, col))
            if ch == "\n":
                line += 1
                col = 0
        else:
            if not word:
                word_pos = (line, col)
            word += ch
    if word:
        out.append(Node(word, *word_pos))
    return out


def parse_sexprs(text: str) -> list[Node]:
    """All top-level forms of a file, as Node trees."""
    stack: list[list[Node]] = [[]]
    positions = [(0, 0)]
    for tok in _tokens(text):
        if tok.value == "(":
            stack.append([])
            positions.append((tok.line, tok.col))
        elif tok.value == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", tok.line, tok.col)
            items = stack.pop()
            line, col = positions.pop()
            stack[-1].append(Node(tuple(items), line, col))
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        line, col = positions[-1]
        raise ParseError("unclosed '('", line, col)
    return stack[0]


def _expect_list(node: Node, arity: int | None = None, what: str = "form") -> tuple:
    if node.is_atom:
        raise ParseError(f"expected a {what}, found atom {node.value!r}", node.line, node.col)
    items = node.value
    if arity is not None and len(items) != arity:
        raise ParseError(
            f"{what} takes {arity} parts, found {len(items)}", node.line, node.col
        )
    return items


def _head(node: Node) -> str:
    items = _expect_list(node)
    if not items or not items[0].is_atom:
        raise ParseError("expected a keyword head", node.line, node.col)
    return items[0].value


def _binders(node: Node, count: int) -> list[str]:
    items = _expect_list(node, what="binder block")
    if len(items) != count or not all(b.is_atom for b in items):
        raise ParseError(f"expected {count} binder name(s)", node.line, node.col)
    return [b.value for b in items]


def parse_ty(node: Node, scope: tuple[str, ...]) -> Ty:
    if node.is_atom:
        if node.value == "Unit":
            return Unit()
        if node.value == "Zero":
            return Zero()
        raise ParseError(f"unknown type {node.value!r}", node.line, node.col)
    head = _head(node)
    items = node.value
    if head == "Sum":
        _expect_list(node, 3, "Sum")
        return Sum(parse_ty(items[1], scope), parse_ty(items[2], scope))
    if head in ("Pi", "Sigma"):
        _expect_list(node, 3, head)
        binder = _expect_list(items[1], 2, "binder")
        if not binder[0].is_atom:
            raise ParseError("binder name must be an atom", items[1].line, items[1].col)
        dom = parse_ty(binder[1], scope)
        cod = parse_ty(items[2], scope + (binder[0].value,))
        return Pi(dom, cod) if head == "Pi" else Sigma(dom, cod)
    if head == "Id":
        _expect_list(node, 4, "Id")
        return Id(
            parse_ty(items[1], scope),
            parse_tm(items[2], scope),
            parse_tm(items[3], scope),
        )
    raise ParseError(f"unknown type former {head!r}", node.line, node.col)


def parse_tm(node: Node, scope: tuple[str, ...]) -> Tm:
    if node.is_atom:
        if node.value == "tt":
            return TT()
        # innermost binding wins under shadowing
        for i in range(len(scope) - 1, -1, -1):
            if scope[i] == node.value:
                return Var(len(scope) - 1 - i)
        raise ParseError(f"unbound variable {node.value!r}", node.line, node.col)
    head = _head(node)
    items = node.value
    if head == "lam":
        _expect_list(node, 3, "lam")
        binder = _expect_list(items[1], 2, "binder")
        dom = parse_ty(binder[1], scope)
        return Lam(dom, parse_tm(items[2], scope + (binder[0].value,)))
    if head == "app":
        _expect_list(node, 3, "app")
        return App(parse_tm(items[1], scope), parse_tm(items[2], scope))
    if head == "pair":
        _expect_list(node, 4, "pair")
        ann = parse_ty(items[1], scope)
        if not isinstance(ann, Sigma):
            raise ParseError("pair annotation must be a Sigma type", node.line, node.col)
        return PairTm(ann, parse_tm(items[2], scope), parse_tm(items[3], scope))
    if head == "split":
        _expect_list(node, 4, "split")
        mot_items = _expect_list(items[1], 2, "motive block")
        (w,) = _binders(mot_items[0], 1)
        motive = parse_ty(mot_items[1], scope + (w,))
        scrut = parse_tm(items[2], scope)
        body_items = _expect_list(items[3], 2, "branch block")
        x, y = _binders(body_items[0], 2)
        body = parse_tm(body_items[1], scope + (x, y))
        return SplitTm(motive, scrut, body)
    if head in ("inl", "inr"):
        _expect_list(node, 3, head)
        ann = parse_ty(items[1], scope)
        if not isinstance(ann, Sum):
            raise ParseError("injection annotation must be a Sum type", node.line, node.col)
        tm = parse_tm(items[2], scope)
        return Inl(ann, tm) if head == "inl" else Inr(ann, tm)
    if head == "case":
        _expect_list(node, 5, "case")
        mot_items = _expect_list(items[1], 2, "motive block")
        (w,) = _binders(mot_items[0], 1)
        motive = parse_ty(mot_items[1], scope + (w,))
        scrut = parse_tm(items[2], scope)
        l_items = _expect_list(items[3], 2, "branch block")
        (x,) = _binders(l_items[0], 1)
        left = parse_tm(l_items[1], scope + (x,))
        r_items = _expect_list(items[4], 2, "branch block")
        (y,) = _binders(r_items[0], 1)
        right = parse_tm(r_items[1], scope + (y,))
        return Case(motive, scrut, left, right)
    if head == "urec":
        _expect_list(node, 4, "urec")
        mot_items = _expect_list(items[1], 2, "motive block")
        (u,) = _binders(mot_items[0], 1)
        motive = parse_ty(mot_items[1], scope + (u,))
        return Urec(motive, parse_tm(items[2], scope), parse_tm(items[3], scope))
    if head == "exfalso":
        _expect_list(node, 3, "exfalso")
        mot_items = _expect_list(items[1], 2, "motive block")
        (z,) = _binders(mot_items[0], 1)
        motive = parse_ty(mot_items[1], scope + (z,))
        return Exfalso(motive, parse_tm(items[2], scope))
    if head == "refl":
        _expect_list(node, 2, "refl")
        return Refl(parse_tm(items[1], scope))
    if head == "J":
        _expect_list(node, 4, "J")
        mot_items = _expect_list(items[1], 2, "motive block")
        x, y, p = _binders(mot_items[0], 3)
        motive = parse_ty(mot_items[1], scope + (x, y, p))
        body_items = _expect_list(items[2], 2, "body block")
        (z,) = _binders(body_items[0], 1)
        body = parse_tm(body_items[1], scope + (z,))
        return J(motive, body, parse_tm(items[3], scope))
    raise ParseError(f"unknown term former {head!r}", node.line, node.col)


@dataclass
class Declarations:
    ctxs: dict  # name -> (names tuple, Ty tuple)
    tys: dict  # name -> (ctx name, Ty)
    tms: dict  # name -> (ctx name, Tm, Ty)
    substs: dict  # name -> (src ctx name, dst ctx name, tuple of Tm)


def parse_file(text: str) -> Declarations:
    decls = Declarations({}, {}, {}, {})
    for node in parse_sexprs(text):
        head = _head(node)
        items = node.value
        if head == "ctx":
            _expect_list(node, 3, "ctx declaration")
            name = items[1].value
            entries = _expect_list(items[2], what="context entries")
            names: tuple[str, ...] = ()
            tys: tuple[Ty, ...] = ()
            for entry in entries:
                pair = _expect_list(entry, 2, "context entry")
                if not pair[0].is_atom:
                    raise ParseError("entry name must be an atom", entry.line, entry.col)
                tys = tys + (parse_ty(pair[1], names),)
                names = names + (pair[0].value,)
            decls.ctxs[name] = (names, tys)
        elif head == "ty":
            _expect_list(node, 4, "ty declaration")
            name, ctx_ref = items[1].value, items[2].value
            if ctx_ref not in decls.ctxs:
                raise ParseError(f"unknown context {ctx_ref!r}", items[2].line, items[2].col)
            scope = decls.ctxs[ctx_ref][0]
            decls.tys[name] = (ctx_ref, parse_ty(items[3], scope))
        elif head == "tm":
            _expect_list(node, 5, "tm declaration")
            name, ctx_ref = items[1].value, items[2].value
            if ctx_ref not in decls.ctxs:
                raise ParseError(f"unknown context {ctx_ref!r}", items[2].line, items[2].col)
            scope = decls.ctxs[ctx_ref][0]
            decls.tms[name] = (
                ctx_ref,
                parse_tm(items[3], scope),
                parse_ty(items[4], scope),
            )
        elif head == "subst":
            _expect_list(node, 5, "subst declaration")
            name, src_ref, dst_ref = items[1].value, items[2].value, items[3].value
            for ref, node_ref in ((src_ref, items[2]), (dst_ref, items[3])):
                if ref not in decls.ctxs:
                    raise ParseError(f"unknown context {ref!r}", node_ref.line, node_ref.col)
            scope = decls.ctxs[src_ref][0]
            comps = _expect_list(items[4], what="substitution components")
            decls.substs[name] = (
                src_ref,
                dst_ref,
                tuple(parse_tm(c, scope) for c in comps),
            )
        else:
            raise ParseError(f"unknown declaration {head!r}", node.line, node.col)
    return decls


def print_ty(a: Ty, scope: tuple[str, ...] = ()) -> str:
    fresh = f"x{len(scope)}"
    if isinstance(a, Unit):
        return "Unit"
    if isinstance(a, Zero):
        return "Zero"
    if isinstance(a, Sum):
        return f"(Sum {print_ty(a.left, scope)} {print_ty(a.right, scope)})"
    if isinstance(a, Pi):
        return f"(Pi ({fresh} {print_ty(a.dom, scope)}) {print_ty(a.cod, scope + (fresh,))})"
    if isinstance(a, Sigma):
        return f"(Sigma ({fresh} {print_ty(a.dom, scope)}) {print_ty(a.cod, scope + (fresh,))})"
    if isinstance(a, Id):
        return f"(Id {print_ty(a.ty, scope)} {print_tm(a.lhs, scope)} {print_tm(a.rhs, scope)})"
    raise TypeError(f"not a type: {a!r}")


def print_tm(t: Tm, scope: tuple[str, ...] = ()) -> str:
    fresh = f"x{len(scope)}"
    f2 = f"x{len(scope) + 1}"
    f3 = f"x{len(scope) + 2}"
    if isinstance(t, Var):
        return scope[len(scope) - 1 - t.idx]
    if isinstance(t, TT):
        return "tt"
    if isinstance(t, Lam):
        return f"(lam ({fresh} {print_ty(t.dom, scope)}) {print_tm(t.body, scope + (fresh,))})"
    if isinstance(t, App):
        return f"(app {print_tm(t.fn, scope)} {print_tm(t.arg, scope)})"
    if isinstance(t, PairTm):
        return f"(pair {print_ty(t.ann, scope)} {print_tm(t.fst, scope)} {print_tm(t.snd, scope)})"
    if isinstance(t, SplitTm):
        return (
            f"(split (({fresh}) {print_ty(t.motive, scope + (fresh,))}) "
            f"{print_tm(t.scrut, scope)} (({f2} {f3}) {print_tm(t.body, scope + (f2, f3))}))"
        )
    if isinstance(t, Inl):
        return f"(inl {print_ty(t.ann, scope)} {print_tm(t.tm, scope)})"
    if isinstance(t, Inr):
        return f"(inr {print_ty(t.ann, scope)} {print_tm(t.tm, scope)})"
    if isinstance(t, Case):
        return (
            f"(case (({fresh}) {print_ty(t.motive, scope + (fresh,))}) "
            f"{print_tm(t.scrut, scope)} (({f2}) {print_tm(t.left, scope + (f2,))}) "
            f"(({f3}) {print_tm(t.right, scope + (f3,))}))"
        )
    if isinstance(t, Urec):
        return (
            f"(urec (({fresh}) {print_ty(t.motive, scope + (fresh,))}) "
            f"{print_tm(t.body, scope)} {print_tm(t.scrut, scope)})"
        )
    if isinstance(t, Exfalso):
        return f"(exfalso (({fresh}) {print_ty(t.motive, scope + (fresh,))}) {print_tm(t.scrut, scope)})"
    if isinstance(t, Refl):
        return f"(refl {print_tm(t.tm, scope)})"
    if isinstance(t, J):
        return (
            f"(J (({fresh} {f2} {f3}) {print_ty(t.motive, scope + (fresh, f2, f3))}) "
            f"(({fresh}) {print_tm(t.body, scope + (fresh,))}) {print_tm(t.proof, scope)})"
        )
    raise TypeError(f"not a term: {t!r}")
