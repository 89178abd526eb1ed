"""Hereditarily finite values, finite sets, and total functions between them.

Every object anywhere in this package is built from these three types.
Equality is structural everywhere; a total canonical ordering on values
makes all set and function representations deterministic and bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import hashlib
from typing import Callable, Iterable, Iterator, Mapping


class Val:
    """Canonical value: atom, pair, tagged, or function graph.

    Values are hash-consed: always build them through atom/pairv/tagv/
    fnval, which intern structurally equal values to one object.  Equality
    and hashing are then by identity, which keeps the deeply nested
    structures cheap to compare.
    """

    __slots__ = ("_h",)

    def __hash__(self):
        return self._h

    def __repr__(self):
        return render(self)


class Atom(Val):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._h = hash(("atom", name))


class Pair(Val):
    __slots__ = ("left", "right")

    def __init__(self, left: Val, right: Val):
        self.left = left
        self.right = right
        self._h = hash(("pair", left, right))


class Tag(Val):
    __slots__ = ("tag", "payload")

    def __init__(self, tag: str, payload: Val):
        self.tag = tag
        self.payload = payload
        self._h = hash(("tag", tag, payload))


class Fn(Val):
    # graph is sorted by the canonical ordering of first components,
    # which must be pairwise distinct
    __slots__ = ("graph",)

    def __init__(self, graph: tuple[tuple[Val, Val], ...]):
        self.graph = graph
        self._h = hash(("fn", graph))


_INTERN: dict = {}


def _interned(key, make):
    hit = _INTERN.get(key)
    if hit is None:
        hit = _INTERN.setdefault(key, make())
    return hit


def atom(name: str) -> Atom:
    return _interned(("a", name), lambda: Atom(name))


def pairv(left: Val, right: Val) -> Pair:
    return _interned(("p", left, right), lambda: Pair(left, right))


def tagv(tag: str, payload: Val) -> Tag:
    return _interned(("t", tag, payload), lambda: Tag(tag, payload))


def fnval(pairs: Iterable[tuple[Val, Val]]) -> Fn:
    graph = tuple(sorted(pairs, key=lambda p: val_key(p[0])))
    firsts = [val_key(x) for x, _ in graph]
    if len(set(firsts)) != len(firsts):
        raise ValueError("fnval graph has duplicate first components")
    return _interned(("f", graph), lambda: Fn(graph))


# Constructor rank fixes atom < pairv < tagv < fnval.
@lru_cache(maxsize=None)
def val_key(v: Val):
    """Canonical sort key; total, antisymmetric, compatible with equality."""
    if isinstance(v, Atom):
        return (0, v.name)
    if isinstance(v, Pair):
        return (1, val_key(v.left), val_key(v.right))
    if isinstance(v, Tag):
        return (2, v.tag, val_key(v.payload))
    if isinstance(v, Fn):
        return (3, tuple((val_key(x), val_key(y)) for x, y in v.graph))
    raise TypeError(f"not a Val: {v!r}")


def val_compare(a: Val, b: Val) -> int:
    """-1, 0, or 1 per the canonical total order."""
    ka, kb = val_key(a), val_key(b)
    return -1 if ka < kb else (0 if ka == kb else 1)


def render(v) -> str:
    """Deterministic compact rendering (independent of hash seeds)."""
    if isinstance(v, Atom):
        return v.name
    if isinstance(v, Pair):
        return f"({render(v.left)},{render(v.right)})"
    if isinstance(v, Tag):
        return f"{v.tag}[{render(v.payload)}]"
    if isinstance(v, Fn):
        inner = " ".join(f"{render(x)}>{render(y)}" for x, y in v.graph)
        return "{" + inner + "}"
    if isinstance(v, FinSet):
        return "{" + ",".join(render(e) for e in v.elements) + "}"
    if isinstance(v, FinFun):
        return f"<{render(v.dom)}->{render(v.cod)}:{render(fnval(v.pairs))}>"
    if isinstance(v, tuple):
        return "(" + ";".join(render(x) for x in v) + ")"
    return repr(v)


def fingerprint(*parts) -> str:
    """Short stable digest of structural data; used for seals and witness ids."""
    h = hashlib.sha1()
    for p in parts:
        h.update(render(p).encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:8]


@dataclass(frozen=True)
class FinSet:
    """Finite set of values; elements sorted and duplicate-free."""

    elements: tuple[Val, ...]
    _index: frozenset = field(init=False, repr=False, compare=False, hash=False)
    _h: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(self.elements))
        object.__setattr__(self, "_h", hash(self.elements))

    def __contains__(self, v: Val) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[Val]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __hash__(self):
        return self._h


def finset(elements: Iterable[Val]) -> FinSet:
    seen = {}
    for e in elements:
        seen[val_key(e)] = e
    return FinSet(tuple(seen[k] for k in sorted(seen)))


EMPTY = finset(())
# Chosen terminal object; any singleton would do, this one is fixed once.
TERMINAL = finset((atom("*"),))


def atoms(prefix: str, n: int) -> FinSet:
    return finset(atom(f"{prefix}{i}") for i in range(n))


@dataclass(frozen=True)
class FinFun:
    """Total function between finite sets, stored as its sorted graph."""

    dom: FinSet
    cod: FinSet
    pairs: tuple[tuple[Val, Val], ...]
    _map: dict = field(init=False, repr=False, compare=False, hash=False)
    _h: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.pairs))
        object.__setattr__(self, "_h", hash((self.dom, self.cod, self.pairs)))

    def __call__(self, x: Val) -> Val:
        return self._map[x]

    def __hash__(self):
        return self._h

    def __matmul__(self, other: "FinFun") -> "FinFun":
        """(g @ f)(x) = g(f(x)); raises on a cod/dom mismatch."""
        if other.cod != self.dom:
            raise ValueError("composition mismatch")
        return FinFun(
            other.dom,
            self.cod,
            tuple((x, self._map[y]) for x, y in other.pairs),
        )

    def preimage(self, y: Val) -> tuple[Val, ...]:
        return tuple(x for x, fy in self.pairs if fy == y)

    def image(self) -> FinSet:
        return finset(y for _, y in self.pairs)

    def is_identity(self) -> bool:
        return self.dom == self.cod and all(x == y for x, y in self.pairs)

    def is_injective(self) -> bool:
        return len({val_key(y) for _, y in self.pairs}) == len(self.pairs)

    def is_surjective(self) -> bool:
        return self.image() == self.cod

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "FinFun":
        if not self.is_bijective():
            raise ValueError("not invertible")
        return FinFun(self.cod, self.dom, tuple(sorted(((y, x) for x, y in self.pairs), key=lambda p: val_key(p[0]))))

    def graph_val(self) -> Fn:
        return fnval(self.pairs)


def finfun(dom: FinSet, cod: FinSet, mapping: Mapping[Val, Val] | Callable[[Val], Val]) -> FinFun:
    get = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
    pairs = []
    for x in dom:
        y = get(x)
        if y not in cod:
            raise ValueError(f"image {render(y)} not in codomain {render(cod)}")
        pairs.append((x, y))
    return FinFun(dom, cod, tuple(pairs))


def identity(s: FinSet) -> FinFun:
    return finfun(s, s, lambda x: x)


def terminal_map(s: FinSet) -> FinFun:
    return finfun(s, TERMINAL, lambda _: atom("*"))


def all_functions(dom: FinSet, cod: FinSet) -> Iterator[FinFun]:
    """All total functions dom -> cod, in a deterministic order."""
    xs = dom.elements
    if not xs:
        yield FinFun(dom, cod, ())
        return
    if not cod.elements:
        return
    import itertools

    for choice in itertools.product(cod.elements, repeat=len(xs)):
        yield FinFun(dom, cod, tuple(zip(xs, choice)))
