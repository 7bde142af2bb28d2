"""Product-topological models with coordinate-wise knowledge modalities.

A model is a list of factor topologies, a set of surviving worlds (tuples
of factor points, one per factor) and a valuation on worlds.  A fresh model
has the full cartesian product as its world set; announcements restrict it.

Agent i's knowledge quantifies along coordinate i: K_i f holds at w when
some factor-i open around w_i keeps f true at every surviving variant of w
along that coordinate.  The quantifier is relativized to surviving worlds;
factor topologies are never rebuilt.  This is the update under which the
announcement/knowledge reduction law is sound, and it makes announcements
with non-rectangular extensions (the interesting ones) actually remove
worlds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from random import Random
from typing import Iterable, Mapping

from .formula import (
    And,
    Announce,
    Atom,
    Bot,
    Formula,
    Implies,
    KnowI,
    Not,
    Or,
    Top,
    UnsupportedOperator,
)
from .topology import Topology, bits, random_topology

World = tuple


@dataclass(frozen=True)
class ProductModel:
    factors: tuple[Topology, ...]
    worlds: frozenset[World]
    valuation: dict[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.factors)
        if n < 1:
            raise ValueError("at least one factor required")
        for world in self.worlds:
            if len(world) != n:
                raise ValueError(f"world {world!r} has wrong arity")
            for factor, label in zip(self.factors, world):
                factor.index(label)
        for atom, area in self.valuation.items():
            if not area <= self.worlds:
                raise ValueError(f"valuation of {atom!r} mentions non-surviving worlds")

    @classmethod
    def full(
        cls,
        factors: Iterable[Topology],
        valuation: Mapping[str, Iterable[World]] = (),
    ) -> "ProductModel":
        factors = tuple(factors)
        worlds = frozenset(cartesian(*(f.points for f in factors)))
        val = {atom: frozenset(map(tuple, area)) for atom, area in dict(valuation).items()}
        return cls(factors, worlds, val)

    @property
    def agent_count(self) -> int:
        return len(self.factors)

    def atom_set(self, name: str) -> frozenset:
        return self.valuation.get(name, frozenset())

    @property
    def is_empty(self) -> bool:
        return not self.worlds

    def variants(self, world: World, agent: int, open_mask: int):
        """Worlds obtained by moving coordinate `agent` through an open (1-based)."""
        factor = self.factors[agent - 1]
        prefix, suffix = world[: agent - 1], world[agent:]
        for i in bits(open_mask):
            yield prefix + (factor.points[i],) + suffix


class ProductEvaluator:
    """Batch evaluator for one model: formula -> set of satisfying worlds."""

    def __init__(self, model: ProductModel):
        self.model = model
        self._tables: dict[Formula, frozenset] = {}
        self._updates: dict[Formula, "ProductEvaluator"] = {}

    def updated(self, announced: Formula) -> "ProductEvaluator":
        cached = self._updates.get(announced)
        if cached is None:
            cached = ProductEvaluator(_restrict(self.model, self.table(announced)))
            self._updates[announced] = cached
        return cached

    def table(self, f: Formula) -> frozenset:
        result = self._tables.get(f)
        if result is None:
            result = self._compute(f)
            self._tables[f] = result
        return result

    def _compute(self, f: Formula) -> frozenset:
        model = self.model
        worlds = model.worlds
        match f:
            case Atom(name):
                return model.atom_set(name)
            case Top():
                return worlds
            case Bot():
                return frozenset()
            case Not(b):
                return worlds - self.table(b)
            case And(a, b):
                return self.table(a) & self.table(b)
            case Or(a, b):
                return self.table(a) | self.table(b)
            case Implies(a, b):
                return (worlds - self.table(a)) | self.table(b)
            case KnowI(agent, b):
                if agent > model.agent_count:
                    raise UnsupportedOperator(
                        f"agent {agent} out of range for {model.agent_count} factors"
                    )
                return knowledge_interior(model, self.table(b), agent)
            case Announce(a, b):
                ta = self.table(a)
                tb2 = self.updated(a).table(b)
                return (worlds - ta) | (ta & tb2)
        raise UnsupportedOperator(
            f"operator {type(f).__name__} has no product interpretation"
        )


def knowledge_interior(model: ProductModel, area: frozenset, agent: int) -> frozenset:
    """Worlds where agent i knows membership in the area.

    A world qualifies when some factor-i open around its i-th coordinate
    keeps every surviving variant along that coordinate inside the area.
    """
    factor = model.factors[agent - 1]
    result = set()
    for world in model.worlds:
        position = factor.index(world[agent - 1])
        for open_ in factor.opens:
            if not open_ >> position & 1:
                continue
            if all(
                v not in model.worlds or v in area
                for v in model.variants(world, agent, open_)
            ):
                result.add(world)
                break
    return frozenset(result)


def _restrict(model: ProductModel, surviving: frozenset) -> ProductModel:
    return ProductModel(
        model.factors,
        surviving,
        {atom: area & surviving for atom, area in model.valuation.items()},
    )


def update_product(model: ProductModel, f: Formula) -> ProductModel:
    """Announcement update: drop worlds where f fails; factors are untouched."""
    return _restrict(model, ProductEvaluator(model).table(f))


def satisfies_product(model: ProductModel, world: World, f: Formula) -> bool:
    world = tuple(world)
    if world not in model.worlds:
        raise ValueError(f"world {world!r} is not surviving in this model")
    return world in ProductEvaluator(model).table(f)


def h_open(model: ProductModel, area: Iterable[World], axis: int) -> bool:
    """Whether every member of the area has an axis-open slice inside it.

    Axis 1 is the classical horizontal direction for two factors; general n
    is handled by fixing all other coordinates.  The area is a subset of the
    raw cartesian product, not of the surviving worlds.
    """
    if not 1 <= axis <= model.agent_count:
        raise ValueError(f"axis {axis} out of range")
    area = frozenset(map(tuple, area))
    full = frozenset(cartesian(*(f.points for f in model.factors)))
    if not area <= full:
        raise ValueError("area is not a subset of the full product")
    factor = model.factors[axis - 1]
    for world in area:
        position = factor.index(world[axis - 1])
        if not any(
            open_ >> position & 1
            and all(v in area for v in model.variants(world, axis, open_))
            for open_ in factor.opens
        ):
            return False
    return True


def random_product_model(
    seed: int,
    max_factors: int = 3,
    max_points: int = 4,
    atoms: tuple[str, ...] = ("p", "q"),
) -> ProductModel:
    """Deterministic random model: 2..max_factors factors, full world set."""
    rng = Random(seed)
    count = rng.randint(2, max_factors)
    factors = tuple(
        random_topology(rng.randrange(1 << 30), rng.randint(1, max_points), rng.randint(0, 3))
        for _ in range(count)
    )
    worlds = frozenset(cartesian(*(f.points for f in factors)))
    ordered = sorted(worlds)
    valuation = {
        atom: frozenset(w for w in ordered if rng.random() < 0.5) for atom in atoms
    }
    return ProductModel(factors, worlds, valuation)
