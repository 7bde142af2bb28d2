"""Backward induction on finite perfect-information games, and the same
solution recovered as the announcement limit of node rationality.

A node is rational when no move on the path from the root to it was
strictly dominated at its decision point.  Move a strictly dominates move b
for the mover when the worst payoff a can still lead to beats the best
payoff b can still lead to, both measured over currently surviving leaves.
Iterating "keep the rational nodes" must converge, on generic trees, to the
path backward induction selects; `bi_via_announcements` checks that against
the direct fold.

Payoff ties make backward induction ambiguous, so ties are flagged
(breaking toward the lowest child index) rather than silently resolved, and
the announcement/induction agreement is only promised for generic trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from random import Random
from typing import Iterable

from .dynamics import LimitTrace
from .topology import MAX_POINTS, Topology


@dataclass(frozen=True)
class GameNode:
    """Decision node (player plus children) or leaf (payoff vector)."""

    player: int | None = None
    payoffs: tuple[Fraction, ...] | None = None
    children: tuple["GameNode", ...] = ()

    def __post_init__(self):
        if self.payoffs is not None:
            object.__setattr__(self, "payoffs", tuple(Fraction(x) for x in self.payoffs))
            if self.player is not None or self.children:
                raise ValueError("a leaf carries only its payoff vector")
        else:
            if self.player is None or self.player < 1:
                raise ValueError("decision nodes need a player index >= 1")
            if not self.children:
                raise ValueError("decision nodes need at least one child")

    @classmethod
    def leaf(cls, *payoffs) -> "GameNode":
        return cls(payoffs=tuple(payoffs))

    @classmethod
    def decision(cls, player: int, children: Iterable["GameNode"]) -> "GameNode":
        return cls(player=player, children=tuple(children))

    @property
    def is_leaf(self) -> bool:
        return self.payoffs is not None


@dataclass(frozen=True)
class GameTree:
    """Finite game tree with nodes indexed in preorder."""

    root: GameNode

    @cached_property
    def nodes(self) -> tuple[GameNode, ...]:
        collected = []

        def visit(node):
            collected.append(node)
            for child in node.children:
                visit(child)

        visit(self.root)
        return tuple(collected)

    @cached_property
    def parent(self) -> tuple[int | None, ...]:
        parents = [None] * len(self.nodes)
        for nid, node in enumerate(self.nodes):
            for cid in self.children_ids[nid]:
                parents[cid] = nid
        return tuple(parents)

    @cached_property
    def children_ids(self) -> tuple[tuple[int, ...], ...]:
        result = [None] * len(self.nodes)

        def assign(node: GameNode, nid: int) -> int:
            """Fill result[nid]; return the next free preorder id."""
            ids = []
            counter = nid + 1
            for child in node.children:
                ids.append(counter)
                counter = assign(child, counter)
            result[nid] = tuple(ids)
            return counter

        assign(self.root, 0)
        return tuple(result)

    @cached_property
    def leaf_ids(self) -> frozenset[int]:
        return frozenset(nid for nid, node in enumerate(self.nodes) if node.is_leaf)

    @cached_property
    def subtree_leaves(self) -> tuple[frozenset[int], ...]:
        result = [None] * len(self.nodes)
        for nid in range(len(self.nodes) - 1, -1, -1):
            if self.nodes[nid].is_leaf:
                result[nid] = frozenset((nid,))
            else:
                acc = frozenset()
                for cid in self.children_ids[nid]:
                    acc |= result[cid]
                result[nid] = acc
        return tuple(result)

    @cached_property
    def player_count(self) -> int:
        lengths = {len(node.payoffs) for node in self.nodes if node.is_leaf}
        if len(lengths) != 1:
            raise ValueError("all payoff vectors must have the same length")
        count = lengths.pop()
        highest = max((node.player for node in self.nodes if not node.is_leaf), default=1)
        if highest > count:
            raise ValueError(f"player {highest} has no payoff coordinate")
        return count

    @cached_property
    def depth(self) -> int:
        def measure(node):
            if node.is_leaf:
                return 0
            return 1 + max(measure(child) for child in node.children)

        return measure(self.root)

    def path_to(self, nid: int) -> list[int]:
        path = [nid]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


MAX_TREE_OPENS = 1 << 20


def _down_set_count(tree: GameTree, nid: int = 0) -> int:
    kids = tree.children_ids[nid]
    if not kids:
        return 2
    product = 1
    for cid in kids:
        product = min(product * _down_set_count(tree, cid), MAX_TREE_OPENS + 1)
    return product + 1


def tree_topology(tree: GameTree, orientation: str = "descendant") -> Topology:
    """Topology on node ids whose opens are the descendant-closed node sets.

    Deeper information refines opens under this orientation; the
    "ancestor" orientation (complements) is available for experiments.
    The family is stored explicitly, so bushy trees whose down-set count
    exceeds MAX_TREE_OPENS are rejected outright.
    """
    count = len(tree.nodes)
    if count > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} nodes supported, got {count}")
    if orientation not in ("descendant", "ancestor"):
        raise ValueError(f"unknown orientation {orientation!r}")
    if _down_set_count(tree) > MAX_TREE_OPENS:
        raise ValueError(
            f"tree has more than {MAX_TREE_OPENS} descendant-closed sets; "
            "too many opens to store explicitly"
        )

    def down_sets(nid: int) -> list[int]:
        subtree_mask = 0
        for member in _subtree_ids(tree, nid):
            subtree_mask |= 1 << member
        combos = [0]
        for cid in tree.children_ids[nid]:
            child_sets = down_sets(cid)
            combos = [mask | extra for mask in combos for extra in child_sets]
        return combos + [subtree_mask]

    opens = down_sets(0)
    if orientation == "ancestor":
        full = (1 << count) - 1
        opens = [full ^ mask for mask in opens]
    return Topology(tuple(range(count)), tuple(opens))


def _subtree_ids(tree: GameTree, nid: int):
    yield nid
    for cid in tree.children_ids[nid]:
        yield from _subtree_ids(tree, cid)


@dataclass(frozen=True)
class BIResult:
    value: tuple[Fraction, ...]
    path: tuple[int, ...]
    surviving: frozenset[int]
    generic: bool
    tie_nodes: tuple[int, ...]


def backward_induction(tree: GameTree) -> BIResult:
    """Leaf-to-root fold; each mover takes the child maximizing her payoff.

    Ties are resolved toward the lowest child index and flagged as
    non-generic.
    """
    values: dict[int, tuple[Fraction, ...]] = {}
    choice: dict[int, int] = {}
    ties = []
    for nid in range(len(tree.nodes) - 1, -1, -1):
        node = tree.nodes[nid]
        if node.is_leaf:
            values[nid] = node.payoffs
            continue
        coordinate = node.player - 1
        best_id = None
        best_value = None
        tied = False
        for cid in tree.children_ids[nid]:
            value = values[cid][coordinate]
            if best_value is None or value > best_value:
                best_id, best_value, tied = cid, value, False
            elif value == best_value:
                tied = True
        if tied:
            ties.append(nid)
        choice[nid] = best_id
        values[nid] = values[best_id]
    path = [0]
    while not tree.nodes[path[-1]].is_leaf:
        path.append(choice[path[-1]])
    return BIResult(
        value=values[0],
        path=tuple(path),
        surviving=frozenset(path),
        generic=not ties,
        tie_nodes=tuple(ties),
    )


@dataclass(frozen=True)
class GameModel:
    """A tree plus the currently surviving node set.

    Survivors are closed toward the root: a node only survives together
    with its ancestors.
    """

    tree: GameTree
    surviving: frozenset[int]

    def __post_init__(self):
        if 0 not in self.surviving:
            raise ValueError("the root must survive")
        for nid in self.surviving:
            parent = self.tree.parent[nid]
            if parent is not None and parent not in self.surviving:
                raise ValueError(f"surviving node {nid} has a removed ancestor")

    @classmethod
    def fresh(cls, tree: GameTree) -> "GameModel":
        return cls(tree, frozenset(range(len(tree.nodes))))


def rational_extension(model: GameModel) -> frozenset[int]:
    """Nodes reached without any strictly dominated move along the way."""
    tree = model.tree
    alive = model.surviving

    def owner_span(cid: int, coordinate: int):
        payoffs = [
            tree.nodes[leaf].payoffs[coordinate]
            for leaf in tree.subtree_leaves[cid]
            if leaf in alive
        ]
        if not payoffs:
            return None
        return min(payoffs), max(payoffs)

    dominated_edges = set()
    for nid in alive:
        node = tree.nodes[nid]
        if node.is_leaf or len(tree.children_ids[nid]) < 2:
            continue
        coordinate = node.player - 1
        spans = {
            cid: owner_span(cid, coordinate)
            for cid in tree.children_ids[nid]
            if cid in alive
        }
        for cid, span in spans.items():
            worst_case = span[1] if span is not None else None
            for other, other_span in spans.items():
                if other == cid or other_span is None:
                    continue
                if worst_case is None or other_span[0] > worst_case:
                    dominated_edges.add(cid)
                    break
    result = set()
    for nid in alive:
        path = tree.path_to(nid)
        if all(step not in dominated_edges for step in path[1:]):
            result.add(nid)
    return frozenset(result)


@dataclass(frozen=True)
class BiAnnouncementResult:
    trace: LimitTrace
    surviving: frozenset[int]
    induction: BIResult
    matches_backward_induction: bool
    generic: bool


def bi_via_announcements(tree: GameTree, snapshot_cap: int = 64) -> BiAnnouncementResult:
    """Iterate the rationality announcement to its limit and compare with
    the backward induction fold."""
    model = GameModel.fresh(tree)
    sizes = [len(model.surviving)]
    stages = [model]
    while True:
        shrunk = rational_extension(model)
        if shrunk == model.surviving:
            break
        model = GameModel(tree, shrunk)
        sizes.append(len(shrunk))
        if len(stages) <= snapshot_cap:
            stages.append(model)
    induction = backward_induction(tree)
    surviving_leaves = model.surviving & tree.leaf_ids
    matches = surviving_leaves == frozenset((induction.path[-1],))
    trace = LimitTrace(
        sizes=tuple(sizes),
        stages=tuple(stages),
        stage_count=len(sizes) - 1,
        outcome="stabilized-nonempty",
        limit=model,
        announcement_valid_in_limit=True,
    )
    return BiAnnouncementResult(
        trace=trace,
        surviving=model.surviving,
        induction=induction,
        matches_backward_induction=matches,
        generic=induction.generic,
    )


def random_game_tree(
    seed: int,
    max_depth: int = 4,
    max_branching: int = 3,
    players: int = 2,
) -> GameTree:
    """Deterministic random generic tree: all payoffs distinct per player."""
    rng = Random(seed)

    def shape(depth: int) -> list | None:
        if depth == 0 or (depth < max_depth and rng.random() < 0.3):
            return None  # leaf
        return [shape(depth - 1) for _ in range(rng.randint(1, max_branching))]

    skeleton = shape(max_depth)
    if skeleton is None:
        skeleton = [None for _ in range(rng.randint(2, max_branching))]
    leaf_count = [0]

    def count(part):
        if part is None:
            leaf_count[0] += 1
        else:
            for sub in part:
                count(sub)

    count(skeleton)
    pools = [rng.sample(range(leaf_count[0] * 3), leaf_count[0]) for _ in range(players)]
    cursor = [0]

    def build(part) -> GameNode:
        if part is None:
            index = cursor[0]
            cursor[0] += 1
            return GameNode.leaf(*(Fraction(pool[index]) for pool in pools))
        return GameNode.decision(rng.randint(1, players), [build(sub) for sub in part])

    return GameTree(build(skeleton))
