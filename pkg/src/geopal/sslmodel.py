"""Subset-space models: neighbourhood-situation semantics, announcement
update and persistence checking.

Truth lives on neighbourhood situations (s, U) with s in U in sigma.  The
collection sigma is any family of nonempty subsets of the carrier; it need
not be a topology.  Knowledge quantifies inside the current neighbourhood,
effort quantifies over its refinements in sigma.

The announcement update shrinks every neighbourhood individually:
U_f = {t in U : (t, U) satisfies f}, empty results dropped, and the carrier
becomes the set of points that still occur in a satisfying situation.  Two
neighbourhoods that shrink to the same point set merge, since the semantics
only ever consults the point set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Hashable, Iterable, Mapping, NamedTuple

from .formula import (
    And,
    Announce,
    Atom,
    Bot,
    Effort,
    EffortDual,
    Formula,
    Implies,
    Know,
    Not,
    Or,
    Possible,
    Top,
    UnsupportedOperator,
)


class Situation(NamedTuple):
    point: Hashable
    nbhd: frozenset


@dataclass(frozen=True)
class SSLModel:
    """Carrier, collection of observation sets, and valuation.

    sigma members must be nonempty subsets of the carrier; they are stored
    deduplicated in a canonical order (by size, then by point index).
    """

    points: tuple[Hashable, ...]
    sigma: tuple[frozenset, ...]
    valuation: dict[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        index = {label: i for i, label in enumerate(self.points)}
        if len(index) != len(self.points):
            raise ValueError("duplicate point labels")
        for member in self.sigma:
            if not member:
                raise ValueError("sigma members must be nonempty")
            if not all(p in index for p in member):
                raise ValueError(f"sigma member {set(member)!r} not within the carrier")
        canonical = sorted(
            {frozenset(m) for m in self.sigma},
            key=lambda m: (len(m), sorted(index[p] for p in m)),
        )
        object.__setattr__(self, "sigma", tuple(canonical))
        for atom, area in self.valuation.items():
            if not all(p in index for p in area):
                raise ValueError(f"valuation of {atom!r} not within the carrier")

    @classmethod
    def from_sets(
        cls,
        points: Iterable[Hashable],
        sigma: Iterable[Iterable[Hashable]],
        valuation: Mapping[str, Iterable[Hashable]] = (),
    ) -> "SSLModel":
        return cls(
            tuple(points),
            tuple(frozenset(m) for m in sigma),
            {atom: frozenset(area) for atom, area in dict(valuation).items()},
        )

    def atom_set(self, name: str) -> frozenset:
        return self.valuation.get(name, frozenset())

    @property
    def is_empty(self) -> bool:
        return not self.points


def situations(model: SSLModel) -> list[Situation]:
    """All neighbourhood situations, ordered by point then by sigma position."""
    return [
        Situation(point, member)
        for point in model.points
        for member in model.sigma
        if point in member
    ]


class SslEvaluator:
    """Batch evaluator for one model: formula -> set of satisfying situations.

    Tables are memoized per formula, announcement updates per announced
    formula, so repeated queries against the same model (as in the axiom
    harness) stay cheap.
    """

    def __init__(self, model: SSLModel):
        self.model = model
        self.situations = situations(model)
        self._all = frozenset(self.situations)
        self._tables: dict[Formula, frozenset] = {}
        self._updates: dict[Formula, tuple["SslEvaluator", dict[frozenset, frozenset]]] = {}
        self._refinements: dict[frozenset, tuple[frozenset, ...]] | None = None

    def _refine(self, nbhd: frozenset) -> tuple[frozenset, ...]:
        if self._refinements is None:
            self._refinements = {
                member: tuple(v for v in self.model.sigma if v <= member)
                for member in self.model.sigma
            }
        return self._refinements[nbhd]

    def updated(self, announced: Formula) -> tuple["SslEvaluator", dict[frozenset, frozenset]]:
        """Evaluator for the updated model, plus the old-to-new neighbourhood map."""
        cached = self._updates.get(announced)
        if cached is None:
            new_model, nbhd_map = apply_update(self.model, self.table(announced))
            cached = (SslEvaluator(new_model), nbhd_map)
            self._updates[announced] = cached
        return cached

    def table(self, f: Formula) -> frozenset:
        result = self._tables.get(f)
        if result is None:
            result = self._compute(f)
            self._tables[f] = result
        return result

    def _compute(self, f: Formula) -> frozenset:
        match f:
            case Atom(name):
                area = self.model.atom_set(name)
                return frozenset(sit for sit in self.situations if sit.point in area)
            case Top():
                return self._all
            case Bot():
                return frozenset()
            case Not(b):
                return self._all - self.table(b)
            case And(a, b):
                return self.table(a) & self.table(b)
            case Or(a, b):
                return self.table(a) | self.table(b)
            case Implies(a, b):
                return (self._all - self.table(a)) | self.table(b)
            case Know(b):
                tb = self.table(b)
                good = {member for member in self.model.sigma
                        if all(Situation(t, member) in tb for t in member)}
                return frozenset(sit for sit in self.situations if sit.nbhd in good)
            case Possible(b):
                tb = self.table(b)
                good = {member for member in self.model.sigma
                        if any(Situation(t, member) in tb for t in member)}
                return frozenset(sit for sit in self.situations if sit.nbhd in good)
            case Effort(b):
                tb = self.table(b)
                return frozenset(
                    sit for sit in self.situations
                    if all(Situation(sit.point, v) in tb
                           for v in self._refine(sit.nbhd) if sit.point in v)
                )
            case EffortDual(b):
                tb = self.table(b)
                return frozenset(
                    sit for sit in self.situations
                    if any(Situation(sit.point, v) in tb
                           for v in self._refine(sit.nbhd) if sit.point in v)
                )
            case Announce(a, b):
                ta = self.table(a)
                inner, nbhd_map = self.updated(a)
                tb2 = inner.table(b)
                vacuous = self._all - ta
                return vacuous | frozenset(
                    sit for sit in ta if Situation(sit.point, nbhd_map[sit.nbhd]) in tb2
                )
        raise UnsupportedOperator(
            f"operator {type(f).__name__} has no subset-space interpretation"
        )


def apply_update(model: SSLModel, satisfying: frozenset) -> tuple[SSLModel, dict[frozenset, frozenset]]:
    """Update from a precomputed satisfying-situation set.

    Returns the new model and the map from each old neighbourhood to its
    shrunk version (only for neighbourhoods that survive).
    """
    nbhd_map = {}
    new_sigma = []
    for member in model.sigma:
        shrunk = frozenset(t for t in member if Situation(t, member) in satisfying)
        if shrunk:
            nbhd_map[member] = shrunk
            new_sigma.append(shrunk)
    surviving = {sit.point for sit in satisfying}
    new_points = tuple(p for p in model.points if p in surviving)
    new_valuation = {atom: area & surviving for atom, area in model.valuation.items()}
    return SSLModel(new_points, tuple(new_sigma), new_valuation), nbhd_map


def update_ssl(model: SSLModel, f: Formula) -> SSLModel:
    """Announcement update of the whole model."""
    evaluator = SslEvaluator(model)
    updated, _ = apply_update(model, evaluator.table(f))
    return updated


def satisfies_ssl(model: SSLModel, situation: Situation, f: Formula) -> bool:
    point, nbhd = situation
    nbhd = frozenset(nbhd)
    if nbhd not in set(model.sigma) or point not in nbhd:
        raise ValueError(f"({point!r}, {set(nbhd)!r}) is not a neighbourhood situation of this model")
    return Situation(point, nbhd) in SslEvaluator(model).table(f)


@dataclass(frozen=True)
class PersistenceWitness:
    """A point where the formula holds on the larger set but not the smaller."""

    point: Hashable
    larger: frozenset
    smaller: frozenset


def is_persistent(model: SSLModel, f: Formula) -> PersistenceWitness | None:
    """None when truth of f survives every neighbourhood shrink, else a witness."""
    evaluator = SslEvaluator(model)
    table = evaluator.table(f)
    for point in model.points:
        for larger in model.sigma:
            if point not in larger or Situation(point, larger) not in table:
                continue
            for smaller in model.sigma:
                if smaller < larger and point in smaller and Situation(point, smaller) not in table:
                    return PersistenceWitness(point, larger, smaller)
    return None


@dataclass(frozen=True)
class ImmunityReport:
    checks: int
    violations: tuple[tuple[Situation, Formula], ...]

    @property
    def immune(self) -> bool:
        return not self.violations


def persistence_immunity_check(
    model: SSLModel, f: Formula, announcements: Iterable[Formula]
) -> ImmunityReport:
    """Verify that a persistent truth survives any public announcement.

    For every situation where f holds and every announcement in the list,
    [announcement] f must hold there too.  Requires f persistent in the
    model; violations are collected rather than raised (none are expected).
    """
    if is_persistent(model, f) is not None:
        raise ValueError("formula is not persistent in this model")
    evaluator = SslEvaluator(model)
    table = evaluator.table(f)
    checks = 0
    violations = []
    for chi in announcements:
        announced_table = evaluator.table(Announce(chi, f))
        for sit in table:
            checks += 1
            if sit not in announced_table:
                violations.append((sit, chi))
    return ImmunityReport(checks, tuple(violations))


def random_ssl_model(
    seed: int,
    max_points: int = 5,
    max_sets: int = 5,
    atoms: tuple[str, ...] = ("p", "q"),
) -> SSLModel:
    """Deterministic random model with integer point labels."""
    rng = Random(seed)
    n = rng.randint(1, max_points)
    points = tuple(range(n))
    sigma = []
    for _ in range(rng.randint(1, max_sets)):
        member = frozenset(p for p in points if rng.random() < 0.5)
        if member:
            sigma.append(member)
    if not sigma:
        sigma.append(frozenset(points))
    valuation = {
        atom: frozenset(p for p in points if rng.random() < 0.5) for atom in atoms
    }
    return SSLModel(points, tuple(sigma), valuation)
