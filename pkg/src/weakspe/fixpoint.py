"""Iterated label pruning: computes, per vertex, the payoffs of all
equilibrium subgame outcomes, and decides the constrained existence problem.

Every vertex starts labeled with the payoffs of all plays from it.  Then two
operations alternate: a removal step deletes one payoff p at a vertex v when
v's owner could switch to a successor whose every surviving payoff is
strictly better for them (over Boolean gains: owner gets 0 in p but 1 in
every label of the successor); an adjustment step then deletes p wherever no
play with payoff p survives that only visits vertices still labeled p.  The
process is monotone and stops when no removal applies; the surviving labels
at the initial vertex are exactly the equilibrium payoffs, provided no
reachable vertex ends up with an empty label set.

Requires prefix-independent objectives; route Reachability/Safety games
through :mod:`weakspe.reduction` first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EmptyLabelEncountered, InvalidGame, InvalidThresholds, ObjectiveNotPrefixIndependent
from .game import GameGraph, ObjectiveSet, Payoff
from .oracle import PathOracle

Event = tuple  # ("remove", k, vertex, Payoff) | ("adjust", k, Payoff, removed, emptied) | ("remove_noop", k)


@dataclass
class LabelTable:
    """Evolving map vertex -> set of payoffs, with a step counter and log.

    ``masks[i]`` is a bitset over payoff indices for the i-th vertex.  Label
    sets only ever shrink; ``history`` records one event per step (odd steps
    remove, even steps adjust).
    """

    game: GameGraph
    masks: list[int]
    step: int = 0
    history: list[Event] = field(default_factory=list)

    def payoffs(self, vertex: str) -> tuple[Payoff, ...]:
        """Labels of one vertex in ascending bitstring order."""
        n = self.game.player_count
        mask = self.masks[self.game.index[vertex]]
        return tuple(Payoff.from_index(i, n) for i in _bits(mask))

    def labels(self) -> dict[str, tuple[Payoff, ...]]:
        return {v: self.payoffs(v) for v in self.game.vertices}

    def has(self, vertex: str, payoff: Payoff) -> bool:
        return bool(self.masks[self.game.index[vertex]] >> payoff.index & 1)

    def copy(self) -> LabelTable:
        return LabelTable(self.game, list(self.masks), self.step, list(self.history))


@dataclass(frozen=True)
class FixpointResult:
    """Stable table plus the full step log; one more remove/adjust round
    would change nothing."""

    table: LabelTable
    steps_taken: int  # completed remove+adjust rounds
    trace: tuple[Event, ...]

    @property
    def fixpoint_step(self) -> int:
        """Odd step index whose removal attempt found nothing."""
        return self.table.step


def init_labels(game: GameGraph, objectives: ObjectiveSet, *, oracle: PathOracle | None = None) -> LabelTable:
    """Initial labeling: all payoffs realizable by some play from each vertex."""
    oracle = oracle or PathOracle(game, objectives)
    full = (1 << game.n) - 1
    masks = [0] * game.n
    for p_idx in range(1 << game.player_count):
        _, region = oracle.solve_mask(full, p_idx)
        for v in _bits(region):
            masks[v] |= 1 << p_idx
    for v, m in enumerate(masks):
        if m == 0:
            # Every vertex has a successor, hence a play, hence a payoff.
            raise EmptyLabelEncountered(f"no realizable payoff at {game.vertices[v]!r} (oracle bug)")
    return LabelTable(game, masks)


def remove_step(
    table: LabelTable, game: GameGraph | None = None, *, rng: random.Random | None = None
) -> tuple[str, Payoff] | None:
    """One removal, or None at the fixpoint.

    Canonical selection: smallest vertex index, then smallest payoff
    bitstring.  Passing ``rng`` picks uniformly among all admissible
    (vertex, payoff) pairs instead; the reached fixpoint is identical either
    way.  A successor with an empty label set never triggers a removal (it
    offers no surviving outcome to switch to).
    """
    g = table.game
    if game is not None and game is not table.game:
        raise InvalidGame("table belongs to a different game")
    players = g.player_count
    forced = [_and_bits(m) for m in table.masks]
    candidates: list[tuple[int, int]] = []
    for v in range(g.n):
        bitpos = players - g.owner_idx[v]
        if not any(table.masks[w] and forced[w] >> bitpos & 1 for w in g.succ[v]):
            continue
        for p_idx in _bits(table.masks[v]):
            if not p_idx >> bitpos & 1:
                if rng is None:
                    return _apply_removal(table, v, p_idx)
                candidates.append((v, p_idx))
    if candidates:
        return _apply_removal(table, *rng.choice(candidates))
    table.step += 1
    table.history.append(("remove_noop", table.step))
    return None


def _apply_removal(table: LabelTable, v: int, p_idx: int) -> tuple[str, Payoff]:
    table.masks[v] &= ~(1 << p_idx)
    table.step += 1
    payoff = Payoff.from_index(p_idx, table.game.player_count)
    name = table.game.vertices[v]
    table.history.append(("remove", table.step, name, payoff))
    return name, payoff


def adjust_step(
    table: LabelTable,
    game: GameGraph | None = None,
    objectives: ObjectiveSet | None = None,
    removed: Payoff | None = None,
    *,
    oracle: PathOracle | None = None,
) -> frozenset[str]:
    """Delete ``removed`` wherever no play with that payoff survives inside
    the vertices still labeled by it.  All vertices are judged against the
    same pre-step labeling; returns the set of adjusted vertices.
    """
    g = table.game
    if removed is None:
        raise InvalidGame("adjust_step needs the payoff removed by the preceding step")
    if oracle is None:
        if objectives is None:
            raise InvalidGame("adjust_step needs objectives or a prepared oracle")
        oracle = PathOracle(g, objectives)
    p_idx = removed.index
    p_bit = 1 << p_idx
    allowed = 0
    for v in range(g.n):
        if table.masks[v] & p_bit:
            allowed |= 1 << v
    _, region = oracle.solve_mask(allowed, p_idx)
    dropped: list[str] = []
    emptied: list[str] = []
    for v in _bits(allowed & ~region):
        table.masks[v] &= ~p_bit
        dropped.append(g.vertices[v])
        if table.masks[v] == 0:
            emptied.append(g.vertices[v])
    table.step += 1
    table.history.append(("adjust", table.step, removed, tuple(dropped), tuple(emptied)))
    return frozenset(dropped)


def fixpoint(
    game: GameGraph,
    objectives: ObjectiveSet,
    *,
    oracle: PathOracle | None = None,
    rng: random.Random | None = None,
) -> FixpointResult:
    """Alternate removal and adjustment until stable.

    The game is expected to be restricted to the vertices reachable from its
    initial vertex (see :func:`decide_constraint`, which does both).
    """
    if not objectives.prefix_independent:
        raise ObjectiveNotPrefixIndependent(
            f"{objectives.kind.value} objectives must be reduced before the fixpoint"
        )
    oracle = oracle or PathOracle(game, objectives)
    table = init_labels(game, objectives, oracle=oracle)
    bound = game.n * (1 << game.player_count)
    rounds = 0
    while True:
        hit = remove_step(table, rng=rng)
        if hit is None:
            break
        rounds += 1
        assert rounds <= bound, "more removal rounds than label entries"
        adjust_step(table, removed=hit[1], oracle=oracle)
    return FixpointResult(table=table, steps_taken=rounds, trace=tuple(table.history))


def decide_constraint(
    game: GameGraph,
    objectives: ObjectiveSet,
    v0: str | None = None,
    lower: Payoff | None = None,
    upper: Payoff | None = None,
    *,
    record: list | None = None,
) -> Payoff | None:
    """Smallest equilibrium payoff p with lower <= p <= upper, or None.

    Componentwise thresholds; ties resolved toward the smallest bitstring.
    None means no equilibrium fits the constraints (including the degenerate
    case of a reachable vertex with an empty stable label set).  ``record``
    is threaded into the internal path oracle for query auditing.
    """
    v0 = v0 if v0 is not None else game.initial
    if v0 not in game.index:
        raise InvalidGame(f"unknown initial vertex {v0!r}")
    n = game.player_count
    lower = lower if lower is not None else Payoff((0,) * n)
    upper = upper if upper is not None else Payoff((1,) * n)
    if len(lower) != n or len(upper) != n:
        raise InvalidThresholds("threshold arity differs from player count")
    if not lower <= upper:
        raise InvalidThresholds(f"{lower} is not componentwise below {upper}")
    reachable = game.reachable_set(v0)
    sub = game.restricted_to(reachable, initial=v0)
    sub_objectives = objectives.restricted_to(reachable)
    result = fixpoint(sub, sub_objectives, oracle=PathOracle(sub, sub_objectives, record=record))
    table = result.table
    if any(m == 0 for m in table.masks):
        return None
    for p_idx in _bits(table.masks[sub.index[v0]]):
        p = Payoff.from_index(p_idx, n)
        if lower <= p and p <= upper:
            return p
    return None


def _and_bits(mask: int) -> int:
    """AND of all payoff indices present in a label bitset (player bits)."""
    acc = -1
    for p_idx in _bits(mask):
        acc &= p_idx
    return 0 if acc == -1 else acc


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
