"""Iterated announcements: limit models, truthful repetition, common
knowledge as a greatest fixpoint, and the muddy children scenario.

The limit of announcing f is the first model that announcing f again does
not change.  All models here are finite, so every limit is reached at a
finite stage: each effective update removes at least one point, situation
member or world.  Transfinite behaviour (limits reached only past stage
omega on infinite spaces) is out of reach of this implementation by
construction and is flagged as such in reports.

The muddy children protocol is run twice: on the product-topological model
(indiscrete factor per child: nobody sees their own forehead) and through
an independent partition-based oracle that never touches the topological
machinery.  The two runs must agree round for round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import And, Atom, Formula, KnowI, Not, Or
from .product import (
    ProductEvaluator,
    ProductModel,
    World,
    knowledge_interior,
    update_product,
)
from .sslmodel import SSLModel, Situation, SslEvaluator, apply_update, situations
from .topology import Topology
from .topomodel import TopoModel, extension, update


# ---------------------------------------------------------------------------
# Generic model plumbing

Model = TopoModel | SSLModel | ProductModel


def model_size(model: Model) -> int:
    """Strictly decreases under any update that changes the model."""
    if isinstance(model, TopoModel):
        return len(model.space.points)
    if isinstance(model, SSLModel):
        return len(model.points) + sum(len(u) for u in model.sigma)
    if isinstance(model, ProductModel):
        return len(model.worlds)
    raise TypeError(f"unsupported model {type(model).__name__}")


def update_any(model: Model, f: Formula) -> Model:
    if isinstance(model, TopoModel):
        return update(model, f)
    if isinstance(model, SSLModel):
        updated, _ = apply_update(model, SslEvaluator(model).table(f))
        return updated
    if isinstance(model, ProductModel):
        return update_product(model, f)
    raise TypeError(f"unsupported model {type(model).__name__}")


def is_empty_model(model: Model) -> bool:
    if isinstance(model, TopoModel):
        return not model.space.points
    if isinstance(model, SSLModel):
        return not model.points
    return not model.worlds


def valid_in(model: Model, f: Formula) -> bool:
    """True when f holds at every locus (point, situation or world)."""
    if isinstance(model, TopoModel):
        return extension(model, f) == model.space.full_mask
    if isinstance(model, SSLModel):
        return SslEvaluator(model).table(f) == frozenset(situations(model))
    return ProductEvaluator(model).table(f) == model.worlds


def _true_at(model: Model, locus, f: Formula) -> bool:
    if isinstance(model, TopoModel):
        return bool(extension(model, f) >> model.space.index(locus) & 1)
    if isinstance(model, SSLModel):
        return locus in SslEvaluator(model).table(f)
    return locus in ProductEvaluator(model).table(f)


# ---------------------------------------------------------------------------
# Announcement limits


@dataclass(frozen=True)
class LimitTrace:
    """Record of an iterated announcement run.

    `sizes` covers every stage; `stages` keeps full snapshots up to a cap.
    `stage_count` is the number of updates that changed the model.  For
    unpointed runs the outcome is "empty" or "stabilized-nonempty"; pointed
    runs may instead halt with outcome "halted-at-locus" when the
    announcement stops being true at the tracked locus.
    """

    sizes: tuple[int, ...]
    stages: tuple
    stage_count: int
    outcome: str
    limit: object
    announcement_valid_in_limit: bool | None = None
    final_locus: object = None


def limit_model(model: Model, f: Formula, snapshot_cap: int = 64) -> LimitTrace:
    """Announce f repeatedly until the model stops changing."""
    sizes = [model_size(model)]
    stages = [model]
    while True:
        updated = update_any(model, f)
        if updated == model:
            break
        model = updated
        sizes.append(model_size(model))
        if len(stages) <= snapshot_cap:
            stages.append(model)
    empty = is_empty_model(model)
    return LimitTrace(
        sizes=tuple(sizes),
        stages=tuple(stages),
        stage_count=len(sizes) - 1,
        outcome="empty" if empty else "stabilized-nonempty",
        limit=model,
        announcement_valid_in_limit=None if empty else valid_in(model, f),
    )


def announce_while_true(model: Model, locus, f: Formula, snapshot_cap: int = 64) -> LimitTrace:
    """Repeat the announcement only while it is true at the tracked locus.

    The locus survives every stage (it satisfies each announcement made);
    for subset-space models the tracked situation shrinks with its
    neighbourhood.  Stops when f fails at the locus or the model is stable.
    """
    if isinstance(model, SSLModel):
        locus = Situation(locus[0], frozenset(locus[1]))
        if locus not in situations(model):
            raise ValueError(f"{locus} is not a situation of the model")
    elif isinstance(model, ProductModel):
        locus = tuple(locus)
        if locus not in model.worlds:
            raise ValueError(f"world {locus!r} is not surviving")
    else:
        model.space.index(locus)
    sizes = [model_size(model)]
    stages = [model]
    while True:
        if not _true_at(model, locus, f):
            outcome = "halted-at-locus"
            break
        if isinstance(model, SSLModel):
            evaluator = SslEvaluator(model)
            updated, nbhd_map = apply_update(model, evaluator.table(f))
            next_locus = Situation(locus.point, nbhd_map[locus.nbhd])
        else:
            updated = update_any(model, f)
            next_locus = locus
        if updated == model:
            outcome = "stabilized-nonempty"
            break
        model, locus = updated, next_locus
        sizes.append(model_size(model))
        if len(stages) <= snapshot_cap:
            stages.append(model)
    return LimitTrace(
        sizes=tuple(sizes),
        stages=tuple(stages),
        stage_count=len(sizes) - 1,
        outcome=outcome,
        limit=model,
        announcement_valid_in_limit=valid_in(model, f) if outcome != "halted-at-locus" else None,
        final_locus=locus,
    )


# ---------------------------------------------------------------------------
# Common knowledge as a greatest fixpoint


@dataclass(frozen=True)
class CommonKnowledge:
    worlds: frozenset
    iterations: int


def common_knowledge_extension(model: ProductModel, f: Formula) -> CommonKnowledge:
    """Greatest fixpoint of E -> (f) meet every agent's knowledge of E.

    Computed by downward iteration from the extension of f; on a finite
    model the fixpoint arrives within |worlds| rounds.  `iterations` counts
    the rounds that strictly shrank the candidate set.
    """
    if not isinstance(model, ProductModel):
        raise TypeError("common knowledge extension is defined on product models")
    base = ProductEvaluator(model).table(f)
    current = base
    iterations = 0
    while True:
        refined = base
        for agent in range(1, model.agent_count + 1):
            refined &= knowledge_interior(model, current, agent)
        if refined == current:
            return CommonKnowledge(current, iterations)
        current = refined
        iterations += 1


# ---------------------------------------------------------------------------
# Muddy children

CHILD_NAMES = "abcdef"


def child_atom(child: str) -> Atom:
    return Atom(f"m_{child}")


def father_formula(n: int) -> Formula:
    """At least one child is muddy."""
    result: Formula = child_atom(CHILD_NAMES[0])
    for i in range(1, n):
        result = Or(result, child_atom(CHILD_NAMES[i]))
    return result


def ignorance_formula(n: int) -> Formula:
    """No child knows their own state (muddy or clean)."""
    conjuncts = []
    for i in range(n):
        atom = child_atom(CHILD_NAMES[i])
        conjuncts.append(And(Not(KnowI(i + 1, atom)), Not(KnowI(i + 1, Not(atom)))))
    result: Formula = conjuncts[0]
    for extra in conjuncts[1:]:
        result = And(result, extra)
    return result


def muddy_model(n: int, muddy: Iterable[str]) -> tuple[ProductModel, World]:
    """Product model for n children, plus the actual world.

    Each child is an indiscrete two-point factor (she cannot observe her
    own forehead); worlds are all bit tuples, m_<child> true where the
    child's coordinate is 1.
    """
    if not 1 <= n <= 6:
        raise ValueError("supported range is 1..6 children")
    names = CHILD_NAMES[:n]
    muddy = frozenset(muddy)
    unknown = muddy - set(names)
    if unknown:
        raise ValueError(f"unknown children {sorted(unknown)}, have {list(names)}")
    indiscrete = Topology.from_sets((0, 1), ((), (0, 1)))
    factors = (indiscrete,) * n
    model = ProductModel.full(factors)
    worlds = model.worlds
    valuation = {
        f"m_{name}": frozenset(w for w in worlds if w[i] == 1)
        for i, name in enumerate(names)
    }
    actual = tuple(1 if name in muddy else 0 for name in names)
    return ProductModel(factors, worlds, valuation), actual


_KNOWS_MUDDY = "knows-muddy"
_KNOWS_CLEAN = "knows-clean"
_UNKNOWN = "unknown"


def _knowledge_states(model: ProductModel, actual: World, n: int) -> dict[str, str]:
    evaluator = ProductEvaluator(model)
    states = {}
    for i in range(n):
        name = CHILD_NAMES[i]
        atom = child_atom(name)
        if actual in evaluator.table(KnowI(i + 1, atom)):
            states[name] = _KNOWS_MUDDY
        elif actual in evaluator.table(KnowI(i + 1, Not(atom))):
            states[name] = _KNOWS_CLEAN
        else:
            states[name] = _UNKNOWN
    return states


@dataclass(frozen=True)
class MuddyScenario:
    n: int
    muddy: frozenset
    actual: World
    rounds: tuple[frozenset, ...]
    """World sets: initial, after the father's announcement, then after each
    truthful ignorance round."""
    knowledge: tuple[dict, ...]
    """Per post-father stage: child -> knows-muddy | knows-clean | unknown."""
    ignorance_rounds: int
    stop_reason: str
    unpointed_sizes: tuple[int, ...]
    unpointed_outcome: str

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rounds)


def muddy_scenario(n: int, muddy: Iterable[str]) -> MuddyScenario:
    """Run the full protocol on the product-topological model."""
    muddy = frozenset(muddy)
    if not muddy:
        raise ValueError("at least one child must be muddy, or the announcement is false")
    model, actual = muddy_model(n, muddy)
    father = father_formula(n)
    after_father = update_product(model, father)
    pointed = announce_while_true(after_father, actual, ignorance_formula(n))
    rounds = (model.worlds,) + tuple(stage.worlds for stage in pointed.stages)
    knowledge = tuple(_knowledge_states(stage, actual, n) for stage in pointed.stages)
    unpointed = limit_model(after_father, ignorance_formula(n))
    return MuddyScenario(
        n=n,
        muddy=muddy,
        actual=actual,
        rounds=rounds,
        knowledge=knowledge,
        ignorance_rounds=pointed.stage_count,
        stop_reason=pointed.outcome,
        unpointed_sizes=unpointed.sizes,
        unpointed_outcome=unpointed.outcome,
    )


@dataclass(frozen=True)
class OracleTrace:
    rounds: tuple[frozenset, ...]
    knowledge: tuple[dict, ...]
    ignorance_rounds: int
    unpointed_sizes: tuple[int, ...]
    unpointed_outcome: str


def kripke_oracle(n: int, muddy: Iterable[str]) -> OracleTrace:
    """Muddy children on equivalence-class semantics, built from scratch.

    Agent i's accessibility identifies worlds differing only at coordinate
    i; announcements delete worlds.  Used purely as a differential oracle
    for the product-topological run.
    """
    if not 1 <= n <= 6:
        raise ValueError("supported range is 1..6 children")
    muddy = frozenset(muddy)
    names = CHILD_NAMES[:n]
    if not muddy:
        raise ValueError("at least one child must be muddy, or the announcement is false")
    if not muddy <= set(names):
        raise ValueError(f"unknown children {sorted(muddy - set(names))}")
    actual = tuple(1 if name in muddy else 0 for name in names)

    def flip(world: tuple, i: int, value: int) -> tuple:
        return world[:i] + (value,) + world[i + 1 :]

    def knows_own(world: tuple, i: int, alive: frozenset) -> bool:
        seen = {v[i] for b in (0, 1) for v in (flip(world, i, b),) if v in alive}
        return len(seen) == 1

    def ignorant_everywhere(world: tuple, alive: frozenset) -> bool:
        return all(not knows_own(world, i, alive) for i in range(n))

    def states(world: tuple, alive: frozenset) -> dict[str, str]:
        result = {}
        for i, name in enumerate(names):
            if knows_own(world, i, alive):
                result[name] = _KNOWS_MUDDY if world[i] == 1 else _KNOWS_CLEAN
            else:
                result[name] = _UNKNOWN
        return result

    everything = frozenset(
        tuple((index >> i) & 1 for i in range(n)) for index in range(1 << n)
    )
    after_father = frozenset(w for w in everything if any(w))
    rounds = [everything, after_father]
    knowledge = [states(actual, after_father)]
    alive = after_father
    ignorance_rounds = 0
    while ignorant_everywhere(actual, alive):
        shrunk = frozenset(w for w in alive if ignorant_everywhere(w, alive))
        if shrunk == alive:
            break
        alive = shrunk
        ignorance_rounds += 1
        rounds.append(alive)
        knowledge.append(states(actual, alive))

    unpointed_sizes = [len(after_father)]
    current = after_father
    while True:
        shrunk = frozenset(w for w in current if ignorant_everywhere(w, current))
        if shrunk == current:
            break
        current = shrunk
        unpointed_sizes.append(len(current))
    return OracleTrace(
        rounds=tuple(rounds),
        knowledge=tuple(knowledge),
        ignorance_rounds=ignorance_rounds,
        unpointed_sizes=tuple(unpointed_sizes),
        unpointed_outcome="empty" if not current else "stabilized-nonempty",
    )
