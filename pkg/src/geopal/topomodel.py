"""Single-agent topological models and their announcement update.

Two evaluators are provided.  `extension` computes the truth set of a
formula bottom-up with bitmask operations and is the default everywhere.
`satisfies` spells out the quantifier clauses for the modalities
(exists-open-forall for interior, forall-open-exists for closure) and is
kept purely as a differential-testing oracle for `extension`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Hashable, Iterable, Mapping

from .formula import (
    And,
    Announce,
    Atom,
    Bot,
    Closure,
    Formula,
    Implies,
    Interior,
    Not,
    Or,
    Top,
    UnsupportedOperator,
)
from .topology import Topology, TopologyError, compress_mask, random_topology


@dataclass(frozen=True)
class TopoModel:
    """A topological space plus a valuation mapping atoms to point masks.

    Atoms absent from the valuation denote the empty set.  Treat instances
    as immutable: updates return fresh models.
    """

    space: Topology
    valuation: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        full = self.space.full_mask
        for atom, mask in self.valuation.items():
            if mask & ~full:
                raise TopologyError(f"valuation of {atom!r} not within the carrier")

    @classmethod
    def from_sets(
        cls,
        points: Iterable[Hashable],
        opens: Iterable[Iterable[Hashable]],
        valuation: Mapping[str, Iterable[Hashable]],
    ) -> "TopoModel":
        space = Topology.from_sets(points, opens)
        return cls(space, {atom: space.mask(area) for atom, area in valuation.items()})

    def atom_mask(self, name: str) -> int:
        return self.valuation.get(name, 0)

    @property
    def is_empty(self) -> bool:
        return not self.space.points


def extension(model: TopoModel, f: Formula) -> int:
    """Truth set of the formula as a mask over the model's points."""
    space = model.space
    full = space.full_mask
    match f:
        case Atom(name):
            return model.atom_mask(name)
        case Top():
            return full
        case Bot():
            return 0
        case Not(b):
            return full & ~extension(model, b)
        case And(a, b):
            return extension(model, a) & extension(model, b)
        case Or(a, b):
            return extension(model, a) | extension(model, b)
        case Implies(a, b):
            return (full & ~extension(model, a)) | extension(model, b)
        case Interior(b):
            return space.interior(extension(model, b))
        case Closure(b):
            return space.closure(extension(model, b))
        case Announce(a, b):
            announced = extension(model, a)
            updated = update(model, a, _announced=announced)
            inner = extension(updated, b)
            # Points failing the announcement satisfy it vacuously; surviving
            # points defer to the updated model, mapped back through labels.
            surviving_true = 0
            for packed_index, label in enumerate(updated.space.points):
                if inner >> packed_index & 1:
                    surviving_true |= 1 << space.index(label)
            return (full & ~announced) | surviving_true
    raise UnsupportedOperator(f"operator {type(f).__name__} has no topological interpretation")


def satisfies(model: TopoModel, point: Hashable, f: Formula) -> bool:
    """Quantifier-form evaluation at a single point (differential oracle)."""
    space = model.space
    s = space.index(point)
    match f:
        case Atom(name):
            return bool(model.atom_mask(name) >> s & 1)
        case Top():
            return True
        case Bot():
            return False
        case Not(b):
            return not satisfies(model, point, b)
        case And(a, b):
            return satisfies(model, point, a) and satisfies(model, point, b)
        case Or(a, b):
            return satisfies(model, point, a) or satisfies(model, point, b)
        case Implies(a, b):
            return not satisfies(model, point, a) or satisfies(model, point, b)
        case Interior(b):
            return any(
                open_ >> s & 1 and all(satisfies(model, space.points[t], b) for t in _bits(open_))
                for open_ in space.opens
            )
        case Closure(b):
            return all(
                not open_ >> s & 1 or any(satisfies(model, space.points[t], b) for t in _bits(open_))
                for open_ in space.opens
            )
        case Announce(a, b):
            if not satisfies(model, point, a):
                return True
            return satisfies(update(model, a), point, b)
    raise UnsupportedOperator(f"operator {type(f).__name__} has no topological interpretation")


def _bits(mask: int):
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def update(model: TopoModel, f: Formula, _announced: int | None = None) -> TopoModel:
    """Announcement update: restrict carrier, topology and valuation to (f)."""
    carrier = extension(model, f) if _announced is None else _announced
    space = model.space.restrict(carrier)
    valuation = {
        atom: compress_mask(mask & carrier, carrier)
        for atom, mask in model.valuation.items()
    }
    return TopoModel(space, valuation)


def random_topomodel(seed: int, n: int, k: int, atoms: tuple[str, ...] = ("p", "q")) -> TopoModel:
    """Deterministic random model: random topology plus random valuation."""
    space = random_topology(seed, n, k)
    rng = Random(seed ^ 0x5EED)
    valuation = {atom: rng.randrange(1 << n) for atom in atoms}
    return TopoModel(space, valuation)
