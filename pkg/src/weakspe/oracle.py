"""Exact-payoff path oracle over restricted sub-arenas.

Decides whether some infinite play from a vertex, confined to an allowed
vertex set, achieves an exact payoff vector, and extracts a short lasso
witness when it does.  A play confined to the restriction realizes
recurrence set S iff S is strongly connected in the induced subgraph, has at
least one edge, and is reachable from the start inside the restriction; the
payoff of the play is then fully determined by S (prefix-independent kinds
only).  Per objective kind the search for a suitable S is:

- Buchi / Co-Buchi / Parity: one conjunction of (G, R) pair constraints
  ("miss G or meet R"), solved by component decomposition,
- Rabin / Streett: a disjunction of such conjunctions, one branch per pair
  choice of every player whose condition must be satisfied nontrivially,
- Explicit Muller: candidate sets come straight from a winning player's
  family, or from a family-avoidance decomposition when everyone must lose,
- Muller: exhaustive enumeration of recurrence sets (capped).

Results are memoized per (restriction, payoff) because the fixpoint engine
repeats queries; the cache is only mutated with idempotent inserts, so
concurrent readers on an immutable game see sequential answers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from . import kernel
from .errors import (
    ArenaTooLarge,
    InvalidGame,
    NoSuchPlay,
    ObjectiveNotPrefixIndependent,
    VertexNotAllowed,
)
from .game import (
    GameGraph,
    Lasso,
    ObjectiveKind,
    ObjectiveSet,
    Payoff,
    payoff_from_inf,
    payoff_of,
)


@dataclass(frozen=True)
class ArenaRestriction:
    """Plays must stay inside ``allowed``, prefix and cycle alike."""

    allowed: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "allowed", frozenset(self.allowed))

    @classmethod
    def full(cls, game: GameGraph) -> ArenaRestriction:
        return cls(frozenset(game.vertices))


@dataclass(frozen=True)
class StreettSpec:
    """Conjunction of pair constraints: for every (G, R), miss G or meet R."""

    pairs: tuple[tuple[frozenset[str], frozenset[str]], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "pairs", tuple((frozenset(g), frozenset(r)) for g, r in self.pairs)
        )

    def satisfied_by(self, recurring: Iterable[str]) -> bool:
        s = frozenset(recurring)
        return all(not s & g or s & r for g, r in self.pairs)


class PathOracle:
    """Memoizing oracle bound to one game and one objective set."""

    def __init__(
        self,
        game: GameGraph,
        objectives: ObjectiveSet,
        *,
        enumeration_cap: int = 22,
        record: list | None = None,
    ) -> None:
        if objectives.player_count != game.player_count:
            raise InvalidGame("objective payload count differs from player count")
        objectives.validate_for(game)
        self.game = game
        self.objectives = objectives
        self.enumeration_cap = enumeration_cap
        self.record = record
        self._solved: dict[tuple[int, int], tuple[tuple[tuple[int, ...], ...], int]] = {}
        self._branches: dict[int, list[tuple[list[int], list[int], int]]] = {}
        self._feasible: dict[int, list[tuple[int, ...]]] = {}

    # --- vertex-set helpers (dense int bitmasks keyed by vertex index) ---

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.game.n) - 1

    @cached_property
    def _succ_bits(self) -> list[int]:
        out = []
        for ws in self.game.succ:
            m = 0
            for w in ws:
                m |= 1 << w
            out.append(m)
        return out

    @cached_property
    def _pred_bits(self) -> list[int]:
        out = []
        for us in self.game.pred:
            m = 0
            for u in us:
                m |= 1 << u
            out.append(m)
        return out

    def mask_of(self, names: Iterable[str]) -> int:
        idx = self.game.index
        m = 0
        for v in names:
            if v not in idx:
                raise InvalidGame(f"restriction mentions unknown vertex {v!r}")
            m |= 1 << idx[v]
        return m

    def names_of(self, mask: int) -> frozenset[str]:
        vs = self.game.vertices
        return frozenset(vs[k] for k in _bits(mask))

    # --- public queries ---

    def exists_play(self, restriction: ArenaRestriction, from_vertex: str, target: Payoff) -> bool:
        self._check_query(restriction, from_vertex, target)
        allowed = self.mask_of(restriction.allowed)
        src = self.game.index[from_vertex]
        if not allowed >> src & 1:
            raise VertexNotAllowed(f"{from_vertex!r} is outside the restriction")
        _, region = self.solve_mask(allowed, target.index)
        return bool(region >> src & 1)

    def winning_region(self, restriction: ArenaRestriction, target: Payoff) -> frozenset[str]:
        """All vertices of the restriction from which the payoff is realizable."""
        self._check_target(target)
        _, region = self.solve_mask(self.mask_of(restriction.allowed), target.index)
        return self.names_of(region)

    def extract_lasso(self, restriction: ArenaRestriction, from_vertex: str, target: Payoff) -> Lasso:
        """Short lasso witness: starts at ``from_vertex``, stays inside the
        restriction, payoff exactly ``target``, at most 2|V|^2 memory slots."""
        self._check_query(restriction, from_vertex, target)
        allowed = self.mask_of(restriction.allowed)
        src = self.game.index[from_vertex]
        if not allowed >> src & 1:
            raise VertexNotAllowed(f"{from_vertex!r} is outside the restriction")
        good, region = self.solve_mask(allowed, target.index)
        if not region >> src & 1:
            raise NoSuchPlay(f"no play with payoff {target} from {from_vertex!r} here")
        reach = _mask_from_ba(
            kernel.reach_from(self.game.n, *self.game.csr[:2], _ba_from_mask(allowed, self.game.n), src)
        )
        chosen = next(s for s in good if any(reach >> v & 1 for v in s))
        prefix_path = self._bfs_path(allowed, src, set(chosen))
        entry = prefix_path[-1]
        cycle = self._cover_walk(chosen, entry)
        vs = self.game.vertices
        lasso = Lasso(tuple(vs[v] for v in prefix_path[:-1]), tuple(vs[v] for v in cycle))
        assert payoff_of(lasso, self.objectives) == target
        assert len(lasso.positions) <= 2 * self.game.n * self.game.n
        return lasso

    def feasible_inf_sets(self, restriction: ArenaRestriction, from_vertex: str) -> Iterator[frozenset[str]]:
        """All realizable recurrence sets inside the restriction, reachable
        from ``from_vertex``; ascending cardinality, then lexicographic."""
        allowed = self.mask_of(restriction.allowed)
        src = self.game.index[from_vertex]
        if not allowed >> src & 1:
            raise VertexNotAllowed(f"{from_vertex!r} is outside the restriction")
        reach = _mask_from_ba(
            kernel.reach_from(self.game.n, *self.game.csr[:2], _ba_from_mask(allowed, self.game.n), src)
        )
        vs = self.game.vertices
        for combo in self._feasible_subsets(allowed):
            if reach >> combo[0] & 1 or any(reach >> v & 1 for v in combo):
                yield frozenset(vs[v] for v in combo)

    # --- core solve ---

    def solve_mask(self, allowed: int, target_idx: int) -> tuple[tuple[tuple[int, ...], ...], int]:
        """(good recurrence sets, realizability region) for a restriction mask.

        The region is the backward closure of the good sets inside the
        restriction: exactly the vertices admitting a play with the target
        payoff.
        """
        key = (allowed, target_idx)
        hit = self._solved.get(key)
        if hit is not None:
            return hit
        kind = self.objectives.kind
        if kind is ObjectiveKind.EXPLICIT_MULLER:
            good = self._em_good_sets(allowed, target_idx)
        elif kind is ObjectiveKind.MULLER:
            target = Payoff.from_index(target_idx, self.game.player_count)
            good = tuple(
                sorted(
                    combo
                    for combo in self._feasible_subsets(allowed)
                    if payoff_from_inf(
                        self.objectives, frozenset(self.game.vertices[v] for v in combo)
                    )
                    == target
                )
            )
        else:
            good = self._streett_good_sets(allowed, target_idx)
        nv = self.game.n
        seeds = sorted({v for s in good for v in s})
        region_ba = kernel.closure_to(nv, *self.game.csr[2:], _ba_from_mask(allowed, nv), seeds)
        result = (good, _mask_from_ba(region_ba))
        self._solved[key] = result
        if self.record is not None:
            self.record.append(
                (
                    self.names_of(allowed),
                    Payoff.from_index(target_idx, self.game.player_count),
                    self.names_of(result[1]),
                )
            )
        return result

    def _streett_good_sets(self, allowed: int, target_idx: int) -> tuple[tuple[int, ...], ...]:
        nv = self.game.n
        members = list(_bits(allowed))
        out: set[tuple[int, ...]] = set()
        for g_masks, r_masks, npairs in self._branches_for(target_idx):
            for comp in kernel.streett_good_sets(
                nv, *self.game.csr[:2], members, g_masks, r_masks, npairs
            ):
                out.add(tuple(comp))
        return tuple(sorted(out))

    def _branches_for(self, target_idx: int) -> list[tuple[list[int], list[int], int]]:
        hit = self._branches.get(target_idx)
        if hit is not None:
            return hit
        obj = self.objectives
        target = Payoff.from_index(target_idx, obj.player_count)
        everything = frozenset(self.game.vertices)
        empty: frozenset[str] = frozenset()
        per_player: list[list[list[tuple[frozenset[str], frozenset[str]]]]] = []
        for p in range(1, obj.player_count + 1):
            wins = bool(target[p])
            kind = obj.kind
            if kind is ObjectiveKind.BUCHI:
                f = obj.vertex_set(p)
                options = [[(everything, f)]] if wins else [[(f, empty)]]
            elif kind is ObjectiveKind.CO_BUCHI:
                f = obj.vertex_set(p)
                options = [[(f, empty)]] if wins else [[(everything, f)]]
            elif kind is ObjectiveKind.PARITY:
                # The maximum recurring color has the accepted parity iff for
                # every recurring color c of the other parity some color
                # above c also recurs.
                coloring = obj.coloring(p)
                by_color: dict[int, set[str]] = {}
                for v, c in coloring.items():
                    by_color.setdefault(c, set()).add(v)
                d = max(coloring.values())
                pairs = []
                for c in range(1, d + 1):
                    if (c % 2 == 0) == wins:
                        continue
                    g = by_color.get(c)
                    if not g:
                        continue
                    r = frozenset(v for v, cv in coloring.items() if cv > c)
                    pairs.append((frozenset(g), r))
                options = [pairs]
            elif kind is ObjectiveKind.RABIN:
                prs = obj.pairs(p)
                if wins:
                    options = [[(everything, g), (r, empty)] for g, r in prs]
                else:
                    options = [list(prs)]
            elif kind is ObjectiveKind.STREETT:
                prs = obj.pairs(p)
                if wins:
                    options = [list(prs)]
                else:
                    options = [[(everything, g), (r, empty)] for g, r in prs]
            else:
                raise ObjectiveNotPrefixIndependent(
                    f"{kind.value} objectives must be reduced before path queries"
                )
            per_player.append(options)
        branches = []
        for combo in itertools.product(*per_player):
            pairs = [pair for part in combo for pair in part]
            branches.append(self._masks_of_pairs(pairs))
        self._branches[target_idx] = branches
        return branches

    def _masks_of_pairs(self, pairs) -> tuple[list[int], list[int], int]:
        nv, idx = self.game.n, self.game.index
        g_masks = [0] * nv
        r_masks = [0] * nv
        for j, (g, r) in enumerate(pairs):
            bit = 1 << j
            for v in g:
                g_masks[idx[v]] |= bit
            for v in r:
                r_masks[idx[v]] |= bit
        return g_masks, r_masks, len(pairs)

    # --- Explicit Muller ---

    @cached_property
    def _families_idx(self) -> list[frozenset[frozenset[int]]]:
        idx = self.game.index
        return [
            frozenset(frozenset(idx[v] for v in s) for s in self.objectives.vertex_family(p))
            for p in range(1, self.game.player_count + 1)
        ]

    def _em_good_sets(self, allowed: int, target_idx: int) -> tuple[tuple[int, ...], ...]:
        target = Payoff.from_index(target_idx, self.game.player_count)
        fams = self._families_idx
        if any(target.bits):
            winner = target.bits.index(1)
            good = []
            for s in sorted(fams[winner], key=lambda s: tuple(sorted(s))):
                if any(not allowed >> v & 1 for v in s):
                    continue
                if any((s in fams[j]) != bool(target.bits[j]) for j in range(len(fams))):
                    continue
                if self._scc_with_edge(s):
                    good.append(tuple(sorted(s)))
            return tuple(sorted(set(good)))
        # Everyone loses: inside each component, peel vertices until a
        # strongly connected set outside every family appears.
        union_fams = frozenset().union(*fams) if fams else frozenset()
        nv = self.game.n
        members = list(_bits(allowed))
        memo: dict[tuple[int, ...], tuple[int, ...] | None] = {}

        def search(c: tuple[int, ...]) -> tuple[int, ...] | None:
            hit = memo.get(c, -1)
            if hit != -1:
                return hit
            result = None
            comps = kernel.sccs(nv, *self.game.csr[:2], list(c))
            if len(comps) == 1 and len(comps[0]) == len(c):
                if self._scc_has_edge(c):
                    if frozenset(c) not in union_fams:
                        result = c
                    else:
                        for v in c:
                            sub = tuple(x for x in c if x != v)
                            if sub:
                                result = search(sub)
                                if result is not None:
                                    break
            else:
                for comp in comps:
                    result = search(tuple(comp))
                    if result is not None:
                        break
            memo[c] = result
            return result

        good = []
        for comp in kernel.sccs(nv, *self.game.csr[:2], members):
            found = search(tuple(comp))
            if found is not None:
                good.append(found)
        return tuple(sorted(set(good)))

    def _scc_has_edge(self, c: tuple[int, ...]) -> bool:
        if len(c) > 1:
            return True
        v = c[0]
        return bool(self._succ_bits[v] >> v & 1)

    def _scc_with_edge(self, s: frozenset[int]) -> bool:
        combo = tuple(sorted(s))
        smask = 0
        for v in combo:
            smask |= 1 << v
        return self._connected_mask(smask, combo) and (
            len(combo) > 1 or self._succ_bits[combo[0]] >> combo[0] & 1
        )

    # --- Muller fallback: capped subset enumeration ---

    def _feasible_subsets(self, allowed: int) -> list[tuple[int, ...]]:
        hit = self._feasible.get(allowed)
        if hit is not None:
            return hit
        members = list(_bits(allowed))
        if len(members) > self.enumeration_cap:
            raise ArenaTooLarge(
                f"{len(members)} allowed vertices exceed the enumeration cap "
                f"({self.enumeration_cap}); raise it explicitly for larger sweeps"
            )
        out = []
        for size in range(1, len(members) + 1):
            for combo in itertools.combinations(members, size):
                smask = 0
                for v in combo:
                    smask |= 1 << v
                if size == 1 and not self._succ_bits[combo[0]] >> combo[0] & 1:
                    continue
                if self._connected_mask(smask, combo):
                    out.append(combo)
        self._feasible[allowed] = out
        return out

    def _connected_mask(self, smask: int, combo: tuple[int, ...]) -> bool:
        """Strong connectivity of the subgraph induced by the mask."""
        for bits in (self._succ_bits, self._pred_bits):
            reach = 1 << combo[0]
            frontier = reach
            while frontier:
                grown = 0
                f = frontier
                while f:
                    low = f & -f
                    grown |= bits[low.bit_length() - 1] & smask
                    f ^= low
                frontier = grown & ~reach
                reach |= frontier
            if reach != smask:
                return False
        return True

    # --- path construction ---

    def _bfs_path(self, allowed: int, src: int, targets: set[int]) -> list[int]:
        """Shortest path from src to the nearest target (ties: smallest
        vertex), inside the allowed mask.  Returns [src] when src is one."""
        if src in targets:
            return [src]
        succ = self.game.succ
        parent = {src: -1}
        layer = [src]
        while layer:
            nxt = []
            found = None
            for v in layer:
                for w in succ[v]:
                    if allowed >> w & 1 and w not in parent:
                        parent[w] = v
                        nxt.append(w)
                        if w in targets and (found is None or w < found):
                            found = w
            if found is not None:
                path = [found]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path[::-1]
            layer = nxt
        raise NoSuchPlay("target set unreachable inside the restriction")

    def _cover_walk(self, component: tuple[int, ...], entry: int) -> list[int]:
        """Closed walk inside the component, from entry, visiting every vertex."""
        smask = 0
        for v in component:
            smask |= 1 << v
        if len(component) == 1:
            return [entry]
        walk = [entry]
        remaining = set(component) - {entry}
        cur = entry
        while remaining:
            seg = self._bfs_path(smask, cur, remaining)
            walk.extend(seg[1:])
            remaining -= set(seg)
            cur = seg[-1]
        seg = self._bfs_path(smask, cur, {entry})
        walk.extend(seg[1:])
        return walk[:-1]

    # --- validation ---

    def _check_target(self, target: Payoff) -> None:
        if len(target) != self.game.player_count:
            raise InvalidGame(f"payoff arity {len(target)} differs from player count")
        if not self.objectives.prefix_independent:
            raise ObjectiveNotPrefixIndependent(
                f"{self.objectives.kind.value} objectives must be reduced before path queries"
            )

    def _check_query(self, restriction: ArenaRestriction, from_vertex: str, target: Payoff) -> None:
        self._check_target(target)
        if from_vertex not in self.game.index:
            raise InvalidGame(f"unknown vertex {from_vertex!r}")


def exists_play(
    game: GameGraph,
    objectives: ObjectiveSet,
    restriction: ArenaRestriction,
    from_vertex: str,
    target: Payoff,
) -> bool:
    return PathOracle(game, objectives).exists_play(restriction, from_vertex, target)


def extract_lasso(
    game: GameGraph,
    objectives: ObjectiveSet,
    restriction: ArenaRestriction,
    from_vertex: str,
    target: Payoff,
) -> Lasso:
    return PathOracle(game, objectives).extract_lasso(restriction, from_vertex, target)


def feasible_inf_sets(
    game: GameGraph,
    objectives: ObjectiveSet,
    restriction: ArenaRestriction,
    from_vertex: str,
    *,
    enumeration_cap: int = 22,
) -> Iterator[frozenset[str]]:
    oracle = PathOracle(game, objectives, enumeration_cap=enumeration_cap)
    return oracle.feasible_inf_sets(restriction, from_vertex)


def streett_nonempty(
    game: GameGraph,
    restriction: ArenaRestriction,
    from_vertex: str,
    spec: StreettSpec,
) -> frozenset[str] | None:
    """Witness set for a cycle satisfying the pair constraints, or None.

    The witness is strongly connected inside the restriction, has an edge,
    is reachable from ``from_vertex`` there, and misses G or meets R for
    every pair.  Among the maximal candidates the lexicographically first
    reachable one is returned.
    """
    idx = game.index
    if from_vertex not in idx:
        raise InvalidGame(f"unknown vertex {from_vertex!r}")
    allowed = 0
    for v in restriction.allowed:
        if v not in idx:
            raise InvalidGame(f"restriction mentions unknown vertex {v!r}")
        allowed |= 1 << idx[v]
    src = idx[from_vertex]
    if not allowed >> src & 1:
        raise VertexNotAllowed(f"{from_vertex!r} is outside the restriction")
    nv = game.n
    g_masks = [0] * nv
    r_masks = [0] * nv
    for j, (g, r) in enumerate(spec.pairs):
        for v in g:
            g_masks[idx[v]] |= 1 << j
        for v in r:
            r_masks[idx[v]] |= 1 << j
    good = kernel.streett_good_sets(
        nv, *game.csr[:2], list(_bits(allowed)), g_masks, r_masks, len(spec.pairs)
    )
    reach = _mask_from_ba(kernel.reach_from(nv, *game.csr[:2], _ba_from_mask(allowed, nv), src))
    for comp in good:
        if any(reach >> v & 1 for v in comp):
            return frozenset(game.vertices[v] for v in comp)
    return None


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _ba_from_mask(mask: int, nv: int) -> bytearray:
    ba = bytearray(nv)
    for v in _bits(mask):
        ba[v] = 1
    return ba


def _mask_from_ba(ba: bytearray) -> int:
    m = 0
    for v, flag in enumerate(ba):
        if flag:
            m |= 1 << v
    return m
