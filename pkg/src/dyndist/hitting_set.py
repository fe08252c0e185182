"""Low-recourse dynamic hitting sets for the neighbourhoods of heavy nodes.

A node is heavy when its degree is at least d.  The maintained set must
contain a neighbour of every heavy node after every update, stay within
``c_size * (n/d) * ln(n+2)`` nodes, and change by at most ``r_max`` nodes
per update.

Updates are grouped into phases of t updates, each split into five
subphases of t/5 updates:

1. snapshot the first d neighbours of every node into G' (a few per update)
2. run the static greedy on G' a few steps per update, producing A_new
3. report A_new into the output a few nodes per update
4. fix A_new on the endpoints touched since the snapshot, six per update
5. retire the nodes of A_old that are not in A_new

Throughout subphases 1-4 the old set A_old is repaired at both endpoints of
every update, and during subphases 4-5 the same is done for A_new.  At the
end of the phase the output equals A_new, which becomes the next A_old.
"""
from __future__ import annotations

import heapq
import math
from collections import Counter
from typing import Iterable, Iterator, Mapping

from .errors import ConfigError
from .graph import DynGraph


# ------------------------------------------------------------------ static greedy

def greedy_steps(lists: Mapping[int, Iterable[int]], out: list[int]) -> Iterator[int]:
    """Resumable greedy hitting set.

    ``lists`` maps each element to the candidates that would hit it.  Picked
    candidates are appended to ``out``; the generator yields the number of
    elementary steps done since the last yield, so callers can ration work.
    Picks the candidate hitting the most unhit elements, smallest id on ties.
    """
    hits: dict[int, list[int]] = {}
    count: Counter = Counter()
    steps = 0
    for w, cand in lists.items():
        for v in cand:
            hits.setdefault(v, []).append(w)
            count[v] += 1
            steps += 1
        if steps >= 64:
            yield steps
            steps = 0
    heap = [(-c, v) for v, c in count.items()]
    heapq.heapify(heap)
    steps += len(heap)
    hit: set[int] = set()
    while heap:
        c, v = heapq.heappop(heap)
        steps += 1
        if -c != count[v]:
            continue  # stale entry
        if c == 0:
            break
        out.append(v)
        for w in hits[v]:
            steps += 1
            if w in hit:
                continue
            hit.add(w)
            for x in lists[w]:
                steps += 1
                count[x] -= 1
                if x != v and count[x] > 0:
                    heapq.heappush(heap, (-count[x], x))
        count[v] = 0
        if steps >= 64:
            yield steps
            steps = 0
    yield steps


def greedy_work_bound(lists: Mapping[int, Iterable[int]]) -> int:
    """Upper bound on the total steps ``greedy_steps`` reports for ``lists``."""
    total = sum(len(list(c)) for c in lists.values())
    return 6 * total + 2 * len(lists) + 1


def greedy_hitting_set(lists: Mapping[int, Iterable[int]]) -> list[int]:
    lists = {w: list(c) for w, c in lists.items()}
    out: list[int] = []
    for _ in greedy_steps(lists, out):
        pass
    return out


def heavy_lists(G: DynGraph, d: int, nodes: Iterable[int] | None = None) -> dict[int, list[int]]:
    """First-d-neighbour lists of the heavy nodes."""
    nodes = range(G.n) if nodes is None else nodes
    return {w: G.first_neighbors(w, d) for w in nodes if G.degree(w) >= d}


def hs_static_greedy(G: DynGraph, d: int) -> set[int]:
    if d < 1:
        raise ConfigError("degree threshold must be positive")
    return set(greedy_hitting_set(heavy_lists(G, d)))


def is_covered(G: DynGraph, d: int, A: set[int], w: int) -> bool:
    return G.degree(w) < d or not G.adj[w].isdisjoint(A)


def uncovered(G: DynGraph, d: int, A: set[int]) -> list[int]:
    return [w for w in range(G.n) if not is_covered(G, d, A, w)]


# ------------------------------------------------------------------ dynamic

class DynamicHittingSet:
    """Hitting set with bounded recourse; owns (or shares) the graph G."""

    def __init__(self, G: DynGraph, d: int, c_t: float = 4.0, c_size: float = 8.0,
                 r_max: int = 12):
        if d < 1:
            raise ConfigError("degree threshold must be positive")
        self.G = G
        self.n = G.n
        self.d = d
        self.c_size = c_size
        self.r_max = r_max
        t = math.ceil(c_t * (self.n / d) * math.log(self.n + 2))
        self.degenerate = t < 5
        # subphases need equal integer lengths
        self.t = 5 * math.ceil(t / 5)
        self.sub_len = self.t // 5
        self.A: set[int] = hs_static_greedy(G, d)
        self.A_old: set[int] = set(self.A)
        self.A_new: set[int] = set()
        self.pos = 0
        self.phases = 0
        self.recourse_hist: Counter = Counter()
        self.max_size = len(self.A)
        self.last_changes: list[tuple[str, int]] = []
        self._start_phase()

    # -- bookkeeping
    @property
    def size_bound(self) -> float:
        return self.c_size * (self.n / self.d) * math.log(self.n + 2)

    @property
    def subphase(self) -> int:
        return self.pos // self.sub_len + 1

    def _start_phase(self):
        self.G_snap: dict[int, list[int]] = {}
        self._snap_next = 0
        self.U: list[int] = []
        self._U_seen: set[int] = set()
        self._U_next = 0
        self._greedy = None
        self._new_list: list[int] = []
        self._report_next = 0
        self._retire: list[int] | None = None
        self._retire_next = 0

    def _quota(self, total: int) -> int:
        return math.ceil(total / self.sub_len) if total else 0

    # -- fixing
    def _fix(self, target: set[int], w: int, changes: list) -> None:
        G, d = self.G, self.d
        if G.degree(w) < d:
            return
        first = G.first_neighbors(w, d)
        if any(x in target for x in first):
            return
        v = first[0]
        target.add(v)
        if v not in self.A:
            self.A.add(v)
            changes.append(("add", v))

    # -- subphase steps
    def _snapshot(self):
        q = self._quota(self.n)
        G, d = self.G, self.d
        end = min(self.n, self._snap_next + q)
        for w in range(self._snap_next, end):
            if G.degree(w) >= d:
                self.G_snap[w] = G.first_neighbors(w, d)
        self._snap_next = end

    def _advance_greedy(self, finish: bool = False):
        if self._greedy is None:
            self._greedy = greedy_steps(self.G_snap, self._new_list)
            self._greedy_quota = self._quota(greedy_work_bound(self.G_snap))
            self._greedy_done = False
        if self._greedy_done:
            return
        done = 0
        for s in self._greedy:
            done += s
            if done >= self._greedy_quota and not finish:
                break
        else:
            self._greedy_done = True

    def _report(self, changes: list):
        if self._report_next == 0:
            self.A_new = set()
        q = self._quota(len(self._new_list))
        end = min(len(self._new_list), self._report_next + q)
        for v in self._new_list[self._report_next:end]:
            self.A_new.add(v)
            if v not in self.A:
                self.A.add(v)
                changes.append(("add", v))
        self._report_next = end

    def _retire_step(self, changes: list):
        if self._retire is None:
            self._retire = sorted(v for v in self.A_old if v not in self.A_new)
        q = self._quota(len(self._retire))
        end = min(len(self._retire), self._retire_next + q)
        for v in self._retire[self._retire_next:end]:
            if v not in self.A_new and v in self.A:
                self.A.discard(v)
                changes.append(("remove", v))
        self._retire_next = end

    # -- update
    def update(self, op: str, u: int, v: int) -> list[tuple[str, int]]:
        """Apply an edge update; return the membership changes (adds first)."""
        self.G.apply(op, u, v)
        if self.degenerate:
            changes = self._recompute()
        else:
            changes = self._phase_step(u, v)
        changes.sort(key=lambda c: c[0] != "add")
        self.last_changes = changes
        self.recourse_hist[len(changes)] += 1
        self.max_size = max(self.max_size, len(self.A))
        return changes

    def _recompute(self) -> list:
        new = hs_static_greedy(self.G, self.d)
        changes = [("add", v) for v in sorted(new - self.A)]
        changes += [("remove", v) for v in sorted(self.A - new)]
        self.A = new
        self.A_old = set(new)
        return changes

    def _phase_step(self, u: int, v: int) -> list:
        changes: list = []
        sp = self.subphase
        if sp <= 4:
            self._fix(self.A_old, u, changes)
            self._fix(self.A_old, v, changes)
        if sp <= 3:
            for x in (u, v):
                if x not in self._U_seen:
                    self._U_seen.add(x)
                    self.U.append(x)
        if sp == 1:
            self._snapshot()
        elif sp == 2:
            last = self.pos == 2 * self.sub_len - 1
            self._advance_greedy(finish=last)
        elif sp == 3:
            self._report(changes)
        if sp >= 4:
            self._fix(self.A_new, u, changes)
            self._fix(self.A_new, v, changes)
        if sp == 4:
            end = min(len(self.U), self._U_next + 6)
            for x in self.U[self._U_next:end]:
                self._fix(self.A_new, x, changes)
            self._U_next = end
        elif sp == 5:
            self._retire_step(changes)
        self.pos += 1
        if self.pos == self.t:
            self._end_phase()
        return changes

    def _end_phase(self):
        # at the end of a phase the output is exactly A_new
        assert self.A == self.A_new, "phase handoff out of sync"
        self.A_old = set(self.A_new)
        self.A_new = set()
        self.pos = 0
        self.phases += 1
        self._start_phase()

    # -- audits
    def coverage_violations(self) -> list[int]:
        return uncovered(self.G, self.d, self.A)

    def snapshot_complete(self) -> bool:
        """True when G' holds every node's heavy list (end of subphase 1 onwards)."""
        return self._snap_next == self.n


def hs_init(G: DynGraph, d: int, **kw) -> DynamicHittingSet:
    return DynamicHittingSet(G, d, **kw)


def hs_update(state: DynamicHittingSet, op: str, u: int, v: int) -> list[tuple[str, int]]:
    return state.update(op, u, v)
