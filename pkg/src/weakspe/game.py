"""Arenas, objectives, payoffs, and lasso plays of multiplayer Boolean games.

A game is a finite directed graph without dead ends whose vertices are
partitioned among n players; the owner of the current vertex picks the next
edge.  Every player holds an objective of one common kind, and an infinite
play pays each player 1 or 0 depending on whether it satisfies that player's
objective.  Ultimately periodic plays are represented as lassoes (finite
prefix plus a repeated, not necessarily simple, cycle); the visited set and
the infinitely-visited set of a lasso determine every gain exactly, so gains
are computed exactly here, never approximated.

Vertex identifiers are arbitrary strings.  Internally vertices are mapped to
dense indices in the order they were declared; all reported values use the
original names.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import InvalidGame, InvalidLasso, ObjectiveNotPrefixIndependent


class ObjectiveKind(str, Enum):
    REACHABILITY = "Reachability"
    SAFETY = "Safety"
    BUCHI = "Buchi"
    CO_BUCHI = "CoBuchi"
    PARITY = "Parity"
    EXPLICIT_MULLER = "ExplicitMuller"
    MULLER = "Muller"
    RABIN = "Rabin"
    STREETT = "Streett"

    @property
    def prefix_independent(self) -> bool:
        return self not in (ObjectiveKind.REACHABILITY, ObjectiveKind.SAFETY)


@dataclass(frozen=True, eq=True)
class GameGraph:
    """Finite arena: directed graph, per-player vertex partition, initial vertex.

    Invariants enforced at construction: every vertex has at least one
    successor, the owner map is total with values in ``1..player_count``, and
    all edge endpoints and the initial vertex are declared vertices.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    owner: Mapping[str, int]
    player_count: int
    initial: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "owner", dict(self.owner))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InvalidGame("duplicate vertex identifiers")
        if not self.vertices:
            raise InvalidGame("empty vertex set")
        if self.player_count < 1:
            raise InvalidGame("player_count must be at least 1")
        if self.initial not in vs:
            raise InvalidGame(f"initial vertex {self.initial!r} not declared")
        for u, w in self.edges:
            if u not in vs or w not in vs:
                raise InvalidGame(f"edge ({u!r}, {w!r}) leaves the vertex set")
        if set(self.owner) != vs:
            raise InvalidGame("owner map must cover exactly the vertex set")
        for v, i in self.owner.items():
            if not 1 <= i <= self.player_count:
                raise InvalidGame(f"owner of {v!r} is {i}, not in 1..{self.player_count}")
        with_succ = {u for u, _ in self.edges}
        dead = vs - with_succ
        if dead:
            raise InvalidGame(f"vertices without successors: {sorted(dead)}")

    # --- indexed views (names stay the public currency) ---

    @cached_property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        """Successor indices per vertex index, ascending."""
        idx = self.index
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, w in self.edges:
            out[idx[u]].append(idx[w])
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, ws in enumerate(self.succ):
            for w in ws:
                out[w].append(u)
        return tuple(tuple(sorted(p)) for p in out)

    @cached_property
    def csr(self) -> tuple[array, array, array, array]:
        """(succ_flat, succ_off, pred_flat, pred_off) in compressed form."""
        return _csr(self.succ) + _csr(self.pred)

    @cached_property
    def owner_idx(self) -> tuple[int, ...]:
        return tuple(self.owner[v] for v in self.vertices)

    def successors(self, v: str) -> tuple[str, ...]:
        return tuple(self.vertices[w] for w in self.succ[self.index[v]])

    def has_edge(self, u: str, w: str) -> bool:
        return (u, w) in self.edges

    def reachable_set(self, start: str | None = None) -> frozenset[str]:
        """Vertices reachable from ``start`` (default: the initial vertex)."""
        src = self.index[start if start is not None else self.initial]
        seen = {src}
        stack = [src]
        while stack:
            for w in self.succ[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(self.vertices[k] for k in seen)

    def restricted_to(self, keep: Iterable[str], initial: str | None = None) -> GameGraph:
        """Sub-arena induced by ``keep``; declaration order is preserved."""
        keep_set = set(keep)
        vs = tuple(v for v in self.vertices if v in keep_set)
        return GameGraph(
            vertices=vs,
            edges=frozenset((u, w) for u, w in self.edges if u in keep_set and w in keep_set),
            owner={v: self.owner[v] for v in vs},
            player_count=self.player_count,
            initial=initial if initial is not None else self.initial,
        )


def _csr(adj: tuple[tuple[int, ...], ...]) -> tuple[array, array]:
    off = array("i", [0])
    flat = array("i")
    for row in adj:
        flat.extend(row)
        off.append(len(flat))
    return flat, off


@dataclass(frozen=True)
class Payoff:
    """Gain vector, one bit per player, player 1 first.

    Rich comparisons implement the componentwise partial order; to sort
    payoffs lexicographically use ``key=lambda p: p.bits`` (equivalently the
    numeric order of ``p.index``, player 1 most significant).
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits) or not self.bits:
            raise InvalidGame(f"payoff bits must be 0/1, got {self.bits}")

    @classmethod
    def from_bitstring(cls, s: str) -> Payoff:
        if not s or any(c not in "01" for c in s):
            raise InvalidGame(f"not a payoff bitstring: {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_index(cls, idx: int, players: int) -> Payoff:
        return cls(tuple((idx >> (players - 1 - k)) & 1 for k in range(players)))

    @property
    def index(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __le__(self, other: Payoff) -> bool:
        return all(a <= b for a, b in zip(self.bits, other.bits, strict=True))

    def __ge__(self, other: Payoff) -> bool:
        return other.__le__(self)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, player: int) -> int:
        """Gain of ``player`` (1-based)."""
        return self.bits[player - 1]

    def __str__(self) -> str:
        return self.bitstring()


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play: ``prefix`` then ``cycle`` repeated forever.

    The prefix may be empty; the cycle is nonempty and need not be simple.
    ``length`` counts the edges of the finite word prefix+cycle, matching the
    usual length measure of a lasso.
    """

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise InvalidLasso("lasso cycle must be nonempty")

    @property
    def first(self) -> str:
        return self.prefix[0] if self.prefix else self.cycle[0]

    @property
    def length(self) -> int:
        return len(self.prefix) + len(self.cycle) - 1

    @property
    def positions(self) -> tuple[str, ...]:
        """Vertices of prefix+cycle in order (one strategy-memory slot each)."""
        return self.prefix + self.cycle

    def validate_in(self, game: GameGraph) -> None:
        word = self.positions
        for v in word:
            if v not in game.index:
                raise InvalidLasso(f"unknown vertex {v!r}")
        for u, w in zip(word, word[1:]):
            if not game.has_edge(u, w):
                raise InvalidLasso(f"missing edge ({u!r}, {w!r})")
        if not game.has_edge(self.cycle[-1], self.cycle[0]):
            raise InvalidLasso(f"cycle does not close: ({self.cycle[-1]!r}, {self.cycle[0]!r})")

    def unroll(self, steps: int) -> Iterator[str]:
        """First ``steps`` vertices of the infinite play."""
        for k in range(steps):
            if k < len(self.prefix):
                yield self.prefix[k]
            else:
                yield self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def __str__(self) -> str:
        head = "".join(f"{v} " for v in self.prefix)
        return f"{head}({' '.join(self.cycle)})^w"


def occ(lasso: Lasso) -> frozenset[str]:
    """Set of vertices the play visits at least once."""
    return frozenset(lasso.prefix) | frozenset(lasso.cycle)


def inf(lasso: Lasso) -> frozenset[str]:
    """Set of vertices the play visits infinitely often."""
    return frozenset(lasso.cycle)


@dataclass(frozen=True)
class ObjectiveSet:
    """One objective of a shared kind per player.

    ``per_player`` holds the kind-specific payload, player 1 first:

    - Reachability/Safety/Buchi/CoBuchi: ``frozenset[str]`` (the set F),
    - Parity: ``dict[str, int]`` total coloring into ``1..d``,
    - ExplicitMuller: ``frozenset[frozenset[str]]`` family of vertex sets,
    - Muller: ``(dict[str, int], frozenset[frozenset[int]])`` coloring plus
      family of color sets,
    - Rabin/Streett: ``tuple[(frozenset[str], frozenset[str]), ...]`` pairs.

    Use the per-kind constructors below; they normalize the payloads.
    """

    kind: ObjectiveKind
    per_player: tuple[object, ...]

    @property
    def player_count(self) -> int:
        return len(self.per_player)

    @property
    def prefix_independent(self) -> bool:
        return self.kind.prefix_independent

    # --- constructors ---

    @classmethod
    def _vertex_sets(cls, kind: ObjectiveKind, sets: Iterable[Iterable[str]]) -> ObjectiveSet:
        return cls(kind, tuple(frozenset(s) for s in sets))

    @classmethod
    def reachability(cls, sets: Iterable[Iterable[str]]) -> ObjectiveSet:
        return cls._vertex_sets(ObjectiveKind.REACHABILITY, sets)

    @classmethod
    def safety(cls, sets: Iterable[Iterable[str]]) -> ObjectiveSet:
        return cls._vertex_sets(ObjectiveKind.SAFETY, sets)

    @classmethod
    def buchi(cls, sets: Iterable[Iterable[str]]) -> ObjectiveSet:
        return cls._vertex_sets(ObjectiveKind.BUCHI, sets)

    @classmethod
    def co_buchi(cls, sets: Iterable[Iterable[str]]) -> ObjectiveSet:
        return cls._vertex_sets(ObjectiveKind.CO_BUCHI, sets)

    @classmethod
    def parity(cls, colorings: Iterable[Mapping[str, int]]) -> ObjectiveSet:
        return cls(ObjectiveKind.PARITY, tuple(dict(c) for c in colorings))

    @classmethod
    def explicit_muller(cls, families: Iterable[Iterable[Iterable[str]]]) -> ObjectiveSet:
        return cls(
            ObjectiveKind.EXPLICIT_MULLER,
            tuple(frozenset(frozenset(s) for s in fam) for fam in families),
        )

    @classmethod
    def muller(
        cls,
        colorings: Iterable[Mapping[str, int]],
        families: Iterable[Iterable[Iterable[int]]],
    ) -> ObjectiveSet:
        payload = tuple(
            (dict(c), frozenset(frozenset(int(x) for x in s) for s in fam))
            for c, fam in zip(colorings, families, strict=True)
        )
        return cls(ObjectiveKind.MULLER, payload)

    @classmethod
    def _pair_lists(
        cls, kind: ObjectiveKind, pair_lists: Iterable[Iterable[tuple[Iterable[str], Iterable[str]]]]
    ) -> ObjectiveSet:
        return cls(
            kind,
            tuple(tuple((frozenset(g), frozenset(r)) for g, r in pairs) for pairs in pair_lists),
        )

    @classmethod
    def rabin(cls, pair_lists) -> ObjectiveSet:
        return cls._pair_lists(ObjectiveKind.RABIN, pair_lists)

    @classmethod
    def streett(cls, pair_lists) -> ObjectiveSet:
        return cls._pair_lists(ObjectiveKind.STREETT, pair_lists)

    # --- typed accessors (player is 1-based) ---

    def vertex_set(self, player: int) -> frozenset[str]:
        return self.per_player[player - 1]  # type: ignore[return-value]

    def coloring(self, player: int) -> dict[str, int]:
        if self.kind is ObjectiveKind.MULLER:
            return self.per_player[player - 1][0]  # type: ignore[index]
        return self.per_player[player - 1]  # type: ignore[return-value]

    def vertex_family(self, player: int) -> frozenset[frozenset[str]]:
        return self.per_player[player - 1]  # type: ignore[return-value]

    def color_family(self, player: int) -> frozenset[frozenset[int]]:
        return self.per_player[player - 1][1]  # type: ignore[index]

    def pairs(self, player: int) -> tuple[tuple[frozenset[str], frozenset[str]], ...]:
        return self.per_player[player - 1]  # type: ignore[return-value]

    def validate_for(self, game: GameGraph) -> None:
        """Check payload consistency against the arena."""
        vs = set(game.vertices)
        k = self.kind
        for p in range(1, self.player_count + 1):
            if k in (
                ObjectiveKind.REACHABILITY,
                ObjectiveKind.SAFETY,
                ObjectiveKind.BUCHI,
                ObjectiveKind.CO_BUCHI,
            ):
                extra = self.vertex_set(p) - vs
                if extra:
                    raise InvalidGame(f"player {p} target set leaves the arena: {sorted(extra)}")
            elif k in (ObjectiveKind.PARITY, ObjectiveKind.MULLER):
                coloring = self.coloring(p)
                if set(coloring) != vs:
                    raise InvalidGame(f"player {p} coloring is not total on the vertex set")
                if any(c < 1 for c in coloring.values()):
                    raise InvalidGame(f"player {p} colors must be positive")
                if k is ObjectiveKind.MULLER:
                    d = max(coloring.values())
                    for s in self.color_family(p):
                        if any(not 1 <= c <= d for c in s):
                            raise InvalidGame(f"player {p} family uses colors outside 1..{d}")
            elif k is ObjectiveKind.EXPLICIT_MULLER:
                for s in self.vertex_family(p):
                    if s - vs:
                        raise InvalidGame(f"player {p} family set leaves the arena")
            else:  # Rabin / Streett
                for g, r in self.pairs(p):
                    if (g | r) - vs:
                        raise InvalidGame(f"player {p} pair leaves the arena")

    def restricted_to(self, keep: Iterable[str]) -> ObjectiveSet:
        """Project all payloads onto a sub-arena.

        Family sets that mention removed vertices can never recur inside the
        sub-arena and are dropped.
        """
        keep_set = set(keep)
        k = self.kind
        if k in (
            ObjectiveKind.REACHABILITY,
            ObjectiveKind.SAFETY,
            ObjectiveKind.BUCHI,
            ObjectiveKind.CO_BUCHI,
        ):
            return ObjectiveSet(k, tuple(s & keep_set for s in self.per_player))
        if k is ObjectiveKind.PARITY:
            return ObjectiveSet(
                k, tuple({v: c for v, c in col.items() if v in keep_set} for col in self.per_player)
            )
        if k is ObjectiveKind.EXPLICIT_MULLER:
            return ObjectiveSet(
                k, tuple(frozenset(s for s in fam if s <= keep_set) for fam in self.per_player)
            )
        if k is ObjectiveKind.MULLER:
            return ObjectiveSet(
                k,
                tuple(
                    ({v: c for v, c in col.items() if v in keep_set}, fam)
                    for col, fam in self.per_player
                ),
            )
        return ObjectiveSet(
            k,
            tuple(tuple((g & keep_set, r & keep_set) for g, r in pairs) for pairs in self.per_player),
        )


def gain(lasso: Lasso, objectives: ObjectiveSet, player: int) -> int:
    """Exact gain of ``player`` on the infinite play of ``lasso``."""
    return _gain_from_sets(objectives, player, occ(lasso), inf(lasso))


def payoff_of(lasso: Lasso, objectives: ObjectiveSet) -> Payoff:
    o, i = occ(lasso), inf(lasso)
    return Payoff(tuple(_gain_from_sets(objectives, p, o, i) for p in range(1, objectives.player_count + 1)))


def payoff_from_inf(objectives: ObjectiveSet, recurring: frozenset[str]) -> Payoff:
    """Payoff of any play whose infinitely-visited set is ``recurring``.

    Only meaningful for prefix-independent kinds, where the recurrence set
    determines every gain.
    """
    if not objectives.prefix_independent:
        raise ObjectiveNotPrefixIndependent(
            f"{objectives.kind.value} gains depend on the whole visited set"
        )
    return Payoff(
        tuple(
            _gain_from_sets(objectives, p, recurring, recurring)
            for p in range(1, objectives.player_count + 1)
        )
    )


def _gain_from_sets(
    objectives: ObjectiveSet, player: int, visited: frozenset[str], recurring: frozenset[str]
) -> int:
    k = objectives.kind
    if k is ObjectiveKind.REACHABILITY:
        return int(bool(visited & objectives.vertex_set(player)))
    if k is ObjectiveKind.SAFETY:
        return int(not visited & objectives.vertex_set(player))
    if k is ObjectiveKind.BUCHI:
        return int(bool(recurring & objectives.vertex_set(player)))
    if k is ObjectiveKind.CO_BUCHI:
        return int(not recurring & objectives.vertex_set(player))
    if k is ObjectiveKind.PARITY:
        coloring = objectives.coloring(player)
        return int(max(coloring[v] for v in recurring) % 2 == 0)
    if k is ObjectiveKind.EXPLICIT_MULLER:
        return int(recurring in objectives.vertex_family(player))
    if k is ObjectiveKind.MULLER:
        coloring = objectives.coloring(player)
        return int(frozenset(coloring[v] for v in recurring) in objectives.color_family(player))
    if k is ObjectiveKind.RABIN:
        return int(any(recurring & g and not recurring & r for g, r in objectives.pairs(player)))
    # Streett
    return int(all(not recurring & g or recurring & r for g, r in objectives.pairs(player)))
