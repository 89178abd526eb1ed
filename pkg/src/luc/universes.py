"""Manipulating local universes: representing objects for rule premises.

A telescope is an ordered list of premise slots over a backing model.
Realizing it produces a carrier object whose maps-in classify instances
of the premises; the carrier and every piece of universal data are
functions of the universes alone (no context parameter ever enters), so
classification is strictly natural and everything pulled back along a
classifier is strictly stable.

Slot kinds:

* ``pt(V)``            a point of a fixed object (a name map into V);
* ``fam(V, chain)``    a family valued in V over the realized extension
                       by ``chain`` (dependent exponential of a product
                       projection along the composite display);
* ``sect(chain, tgt)`` a dependent section of a realized type over the
                       extension (exponential of one display map along
                       another);
* ``ext(tgt)``         context extension by a realized type.

Chains and targets are (universe type, name map) pairs.  Realization is
always a single reindexing step of a universe type along a composed name
map, so any two realizations of equal names are structurally identical
and comparison maps are unique solutions of their lift squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .comp import CartesianLift, TypeOver
from .fin import (
    TERMINAL,
    FinFun,
    FinSet,
    Val,
    finfun,
    fnval,
    identity,
    pairv,
    render,
    tagv,
    terminal_map,
)
from .limits import dep_exp, product

PT, FAM, SECT, EXT = "pt", "fam", "sect", "ext"


@dataclass(frozen=True)
class Ref:
    """A universe type plus the name map realizing it over some object."""

    univ: TypeOver
    name: FinFun

    def __post_init__(self):
        if self.name.cod != self.univ.ctx:
            raise ValueError("name map does not target the universe context")


@dataclass
class Realized:
    """A chain of refs realized over a base: lifts plus composite display."""

    base: FinSet
    lifts: list[CartesianLift]

    @property
    def top_total(self) -> FinSet:
        return self.lifts[-1].src.total if self.lifts else self.base

    def composite_display(self) -> FinFun:
        disp = identity(self.base)
        for lift in self.lifts:
            disp = disp @ lift.src.display
        return disp


def realize_chain(model, base: FinSet, chain: list[Ref]) -> Realized:
    lifts = []
    cur = base
    for ref in chain:
        if ref.name.dom != cur:
            raise ValueError("chain ref name does not start at the current object")
        lift = model.reindex(ref.univ, ref.name)
        lifts.append(lift)
        cur = lift.src.total
    return Realized(base, lifts)


def pull_chain(model, chain: list[Ref], f: FinFun) -> tuple[list[Ref], list[FinFun]]:
    """Reindex a chain along f: refs over f.dom plus connecting maps.

    The k-th connecting map sends the pulled k-th total into the original
    one; each is the unique solution of its lift square.
    """
    refs: list[Ref] = []
    conns: list[FinFun] = []
    cur = f
    for ref in chain:
        new_name = ref.name @ cur
        refs.append(Ref(ref.univ, new_name))
        big = model.reindex(ref.univ, new_name)
        small = model.reindex(ref.univ, ref.name)
        conn = finfun(
            big.src.total,
            small.src.total,
            lambda x, _b=big, _s=small, _c=cur: _s.solve(_c(_b.src.display(x)), _b.top(x)),
        )
        conns.append(conn)
        cur = conn
    return refs, conns


@dataclass
class Slot:
    kind: str
    vset: Optional[FinSet]
    chain: list[Ref]  # defined over the pre-extension carrier
    target: Optional[Ref]


@dataclass
class SlotData:
    """Universal data of one slot, expressed over the current carrier."""

    kind: str
    value: FinFun
    chain: list[Ref]
    target: Optional[Ref]


class Telescope:
    """Incremental builder for a representing object over a backing model."""

    def __init__(self, model):
        self.model = model
        self.carrier: FinSet = TERMINAL
        self.slots: list[Slot] = []
        self.env: list[SlotData] = []
        self.projections: list[FinFun] = []  # projections[k]: carrier_k -> carrier_{k-1}

    # -- transport of universal data -------------------------------------

    def _pull_env(self, proj: FinFun) -> None:
        new_env = []
        for data in self.env:
            if data.kind == PT:
                new_env.append(SlotData(PT, data.value @ proj, [], None))
                continue
            refs, conns = pull_chain(self.model, data.chain, proj)
            link = conns[-1] if conns else proj
            if data.kind == FAM:
                new_env.append(SlotData(FAM, data.value @ link, refs, None))
                continue
            tgt = data.target
            base_link = link if data.kind == SECT else proj
            big = self.model.reindex(tgt.univ, tgt.name @ base_link)
            small = self.model.reindex(tgt.univ, tgt.name)
            value = finfun(
                base_link.dom,
                big.src.total,
                lambda x, _b=big, _s=small, _l=base_link, _v=data.value: _b.solve(
                    x, _s.top(_v(_l(x)))
                ),
            )
            new_env.append(
                SlotData(data.kind, value, refs, Ref(tgt.univ, tgt.name @ base_link))
            )
        self.env = new_env

    # -- slot constructors ------------------------------------------------

    def pt(self, vset: FinSet) -> int:
        if not self.slots and self.carrier == TERMINAL:
            proj = terminal_map(vset)
            value = identity(vset)
            self.carrier = vset
        else:
            carrier, p1, p2 = product(self.carrier, vset)
            proj, value = p1, p2
            self.carrier = carrier
        self._pull_env(proj)
        self.slots.append(Slot(PT, vset, [], None))
        self.env.append(SlotData(PT, value, [], None))
        self.projections.append(proj)
        return len(self.slots) - 1

    def fam(self, vset: FinSet, chain: list[Ref]) -> int:
        realized = realize_chain(self.model, self.carrier, chain)
        f = realized.composite_display()
        _, p1, _ = product(realized.top_total, vset)
        d = dep_exp(f, p1)
        proj = d.proj
        self.carrier = d.total
        self._pull_env(proj)
        refs, conns = pull_chain(self.model, chain, proj)
        link = conns[-1] if conns else proj
        graphs = {c: dict(c.payload.right.graph) for c in self.carrier}
        down = self._chain_display(refs)
        value = finfun(
            link.dom,
            vset,
            lambda y: graphs[down(y)][link(y)].right,
        )
        self.slots.append(Slot(FAM, vset, chain, None))
        self.env.append(SlotData(FAM, value, refs, None))
        self.projections.append(proj)
        return len(self.slots) - 1

    def sect(self, chain: list[Ref], target: Ref) -> int:
        realized = realize_chain(self.model, self.carrier, chain)
        if target.name.dom != realized.top_total:
            raise ValueError("sect target must be named over the chain top")
        f = realized.composite_display()
        tlift = self.model.reindex(target.univ, target.name)
        d = dep_exp(f, tlift.src.display)
        proj = d.proj
        self.carrier = d.total
        self._pull_env(proj)
        refs, conns = pull_chain(self.model, chain, proj)
        link = conns[-1] if conns else proj
        big = self.model.reindex(target.univ, target.name @ link)
        graphs = {c: dict(c.payload.right.graph) for c in self.carrier}
        down = self._chain_display(refs)
        value = finfun(
            link.dom,
            big.src.total,
            lambda y, _b=big, _s=tlift: _b.solve(y, _s.top(graphs[down(y)][link(y)])),
        )
        self.slots.append(Slot(SECT, None, chain, target))
        self.env.append(SlotData(SECT, value, refs, Ref(target.univ, target.name @ link)))
        self.projections.append(proj)
        return len(self.slots) - 1

    def ext(self, target: Ref) -> int:
        if target.name.dom != self.carrier:
            raise ValueError("ext target must be named over the carrier")
        tlift = self.model.reindex(target.univ, target.name)
        proj = tlift.src.display
        self.carrier = tlift.src.total
        self._pull_env(proj)
        big = self.model.reindex(target.univ, target.name @ proj)
        value = finfun(
            self.carrier,
            big.src.total,
            lambda c, _b=big, _s=tlift: _b.solve(c, _s.top(c)),
        )
        self.slots.append(Slot(EXT, None, [], target))
        self.env.append(SlotData(EXT, value, [], Ref(target.univ, target.name @ proj)))
        self.projections.append(proj)
        return len(self.slots) - 1

    def _chain_display(self, refs: list[Ref]) -> FinFun | None:
        """Composite display of a realized chain (or None for the empty one)."""
        if not refs:
            return lambda y: y  # identity on the base object
        realized = realize_chain(self.model, refs[0].name.dom, refs)
        comp = realized.composite_display()
        return comp

    # -- classification ---------------------------------------------------

    def classify(self, gamma: FinSet, data: list) -> FinFun:
        """The map gamma -> carrier classifying an instance of the premises.

        One payload per slot: a name map for pt; a family map for fam
        (its domain is the chain realized over gamma via the classifier
        built so far); a section map for sect; a section of the realized
        target for ext.  Payload domains are validated; payloads built by
        composing the same universe names land on identical objects.
        """
        if len(data) != len(self.slots):
            raise ValueError("payload count does not match slot count")
        cls: FinFun = terminal_map(gamma)
        for j, slot in enumerate(self.slots):
            payload = data[j]
            proj = self.projections[j]
            new_carrier, old_carrier = proj.dom, proj.cod
            if slot.kind == PT:
                if payload.dom != gamma or payload.cod != slot.vset:
                    raise ValueError(f"slot {j}: bad point payload")
                if j == 0 and old_carrier == TERMINAL and new_carrier == slot.vset:
                    cls = payload
                else:
                    cls = finfun(
                        gamma,
                        new_carrier,
                        lambda g, _c=cls, _p=payload: pairv(_c(g), _p(g)),
                    )
            elif slot.kind in (FAM, SECT):
                refs, conns = pull_chain(self.model, slot.chain, cls)
                link = conns[-1] if conns else cls
                stage = realize_chain(self.model, old_carrier, slot.chain)
                f_stage = stage.composite_display()
                gside = realize_chain(self.model, gamma, refs)
                f_gamma = gside.composite_display()
                inv = {(f_gamma(x), link(x)): x for x in link.dom}
                if slot.kind == FAM:
                    if payload.dom != link.dom or payload.cod != slot.vset:
                        raise ValueError(f"slot {j}: bad family payload")

                    def stage_value(x, y, _p=payload):
                        return pairv(y, _p(x))

                else:
                    tgt = slot.target
                    glift = self.model.reindex(tgt.univ, tgt.name @ link)
                    slift = self.model.reindex(tgt.univ, tgt.name)
                    if payload.dom != link.dom or payload.cod != glift.src.total:
                        raise ValueError(f"slot {j}: bad section payload")

                    def stage_value(x, y, _p=payload, _g=glift, _s=slift):
                        return _s.solve(y, _g.top(_p(x)))

                out = {}
                for g in gamma:
                    graph = []
                    for y in f_stage.preimage(cls(g)):
                        x = inv.get((g, y))
                        if x is None:
                            raise ValueError(
                                f"slot {j}: fiber mismatch over {render(g)}"
                            )
                        graph.append((y, stage_value(x, y)))
                    out[g] = tagv("fn", pairv(cls(g), fnval(graph)))
                cls = finfun(gamma, new_carrier, out)
            else:  # EXT
                tgt = slot.target
                glift = self.model.reindex(tgt.univ, tgt.name @ cls)
                slift = self.model.reindex(tgt.univ, tgt.name)
                if payload.dom != gamma or payload.cod != glift.src.total:
                    raise ValueError(f"slot {j}: bad extension payload")
                cls = finfun(
                    gamma,
                    new_carrier,
                    lambda g, _s=slift, _g=glift, _p=payload, _c=cls: _s.solve(
                        _c(g), _g.top(_p(g))
                    ),
                )
        return cls

    def universal_instance(self) -> list[FinFun]:
        """Per-slot payloads over the carrier; classifying them is the identity."""
        return [d.value for d in self.env]

    def identity_classifies(self) -> bool:
        return self.classify(self.carrier, self.universal_instance()) == identity(
            self.carrier
        )


def wedge(model, va: FinSet, ea: TypeOver, vb: FinSet):
    """The object of families of types in vb indexed by a type in va.

    Returns (telescope, slot handles); the carrier's maps-in correspond
    to pairs (name into va, family map into vb over the realized fiber).
    """
    t = Telescope(model)
    ha = t.pt(va)
    hb = t.fam(vb, [Ref(ea, identity(va))])
    return t, ha, hb
