"""Independent brute-force oracles used by the test suite.

None of these import the solver modules they check; they work directly on
the instance cost matrix.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache


def _cost(inst, i, j):
    return inst.arc_cost(i, j)


def relaxation_optimum(inst) -> int | None:
    """Exhaustive optimum over integral arc vectors meeting both degree rows.

    Each trip picks its predecessor (a trip whose successor slot is free, or
    a depot with an unused vehicle); trips left without a successor are then
    sent to depots so that every depot receives exactly as many vehicles as
    it sent out.  Returns ``None`` when no degree-feasible vector exists.
    """
    m, n = inst.num_depots, inst.num_trips
    caps = inst.depot_capacity
    trips = list(range(m, m + n))
    states = {(0, (0,) * m): 0}
    for t in trips:
        nxt = {}
        for (mask, pulls), c in states.items():
            for u in trips:
                bit = 1 << (u - m)
                if mask & bit:
                    continue
                a = _cost(inst, u, t)
                if a is None:
                    continue
                key = (mask | bit, pulls)
                if c + a < nxt.get(key, math.inf):
                    nxt[key] = c + a
            for d in range(m):
                if pulls[d] >= caps[d]:
                    continue
                a = _cost(inst, d, t)
                if a is None:
                    continue
                p = list(pulls)
                p[d] += 1
                key = (mask, tuple(p))
                if c + a < nxt.get(key, math.inf):
                    nxt[key] = c + a
        states = nxt

    @lru_cache(maxsize=None)
    def tails(free: tuple[int, ...], need: tuple[int, ...]) -> float:
        if not free:
            return 0 if not any(need) else math.inf
        t, rest = free[0], free[1:]
        best = math.inf
        for d in range(m):
            if need[d] == 0:
                continue
            a = _cost(inst, t, d)
            if a is None:
                continue
            q = list(need)
            q[d] -= 1
            best = min(best, a + tails(rest, tuple(q)))
        return best

    best = math.inf
    for (mask, pulls), c in states.items():
        free = tuple(t for t in trips if not mask >> (t - m) & 1)
        best = min(best, c + tails(free, pulls))
    return None if best == math.inf else int(best)


def mdvsp_optimum(inst) -> int | None:
    """Exact optimum over all sets of same-depot blocks covering every trip.

    Held-Karp over trip subsets gives the cheapest block of each depot for
    each subset; a subset DP then splits the trips among depots and among at
    most ``r_d`` blocks per depot.
    """
    m, n = inst.num_depots, inst.num_trips
    full = (1 << n) - 1
    inf = math.inf
    block = []
    for d in range(m):
        f = {}
        for k in range(n):
            a = _cost(inst, d, m + k)
            if a is not None:
                f[(1 << k, k)] = a
        for mask in range(1, full + 1):
            for k in range(n):
                c = f.get((mask, k))
                if c is None:
                    continue
                for k2 in range(n):
                    if mask >> k2 & 1:
                        continue
                    a = _cost(inst, m + k, m + k2)
                    if a is None:
                        continue
                    key = (mask | 1 << k2, k2)
                    if c + a < f.get(key, inf):
                        f[key] = c + a
        best = [inf] * (full + 1)
        for (mask, k), c in f.items():
            a = _cost(inst, m + k, d)
            if a is not None and c + a < best[mask]:
                best[mask] = c + a
        block.append(best)

    def submasks(mask):
        sub = mask
        while True:
            yield sub
            if sub == 0:
                return
            sub = (sub - 1) & mask

    combined = None
    for d in range(m):
        limit = min(inst.depot_capacity[d], n)
        cover = [inf] * (full + 1)
        cover[0] = 0
        layer = [inf] * (full + 1)
        layer[0] = 0
        for _ in range(limit):
            new = list(layer)
            for mask in range(1, full + 1):
                low = mask & -mask
                rest = mask ^ low
                for sub in submasks(rest):
                    piece = sub | low
                    b = block[d][piece]
                    if b == inf:
                        continue
                    prev = layer[mask ^ piece]
                    if prev + b < new[mask]:
                        new[mask] = prev + b
            layer = new
        cover = layer
        if combined is None:
            combined = cover
        else:
            merged = [inf] * (full + 1)
            for mask in range(full + 1):
                best = inf
                for sub in submasks(mask):
                    v = combined[mask ^ sub] + cover[sub]
                    if v < best:
                        best = v
                merged[mask] = best
            combined = merged
    value = combined[full]
    return None if value == inf else int(value)


def pair_crossing_brute(inst, p1, p2):
    """Minimum cost change over all crossings of two compatible subtours.

    ``p1 = (i, trips, j)`` and ``p2 = (j, trips, i)``.  Every split point
    pair is rebuilt explicitly as two new tours and costed from scratch.
    """
    i, a, j = p1
    j2, b, i2 = p2
    assert (j2, i2) == (j, i)

    def tour_cost(start, trips, end):
        nodes = [start, *trips, end]
        if not trips:
            return 0 if start == end else None
        total = 0
        for u, v in zip(nodes, nodes[1:]):
            c = _cost(inst, u, v)
            if c is None:
                return None
            total += c
        return total

    old = tour_cost(i, a, j) + tour_cost(j, b, i)
    best = None
    for h in range(1, len(a) + 1):
        for k in range(1, len(b) + 1):
            first = tour_cost(i, a[:h] + b[k - 1:], i)
            second = tour_cost(j, b[:k - 1] + a[h:], j)
            if first is None or second is None:
                continue
            delta = first + second - old
            if best is None or delta < best[0]:
                best = (delta, h, k)
    return best


def matching_brute(weights) -> float:
    """Minimum over all permutations; ``math.inf`` entries are forbidden."""
    k = len(weights)
    best = math.inf
    for perm in itertools.permutations(range(k)):
        total = 0
        for r, c in enumerate(perm):
            w = weights[r][c]
            if w == math.inf:
                break
            total += w
        else:
            best = min(best, total)
    return best


def chain_cover_bestfit(start, end, deadhead) -> int:
    """Greedy chain cover: each trip joins the chain whose last trip ended latest."""
    order = sorted(range(len(start)), key=lambda t: (start[t], t))
    chains: list[int] = []
    for t in order:
        best = None
        for c, last in enumerate(chains):
            if last != t and end[last] + deadhead[last][t] <= start[t]:
                if best is None or end[last] > end[chains[best]]:
                    best = c
        if best is None:
            chains.append(t)
        else:
            chains[best] = t
    return len(chains)


def simple_depot_paths(inst, allowed):
    """All simple depot-to-other-depot paths through trips over ``allowed`` arcs."""
    m = inst.num_depots
    succ: dict[int, list[int]] = {}
    for (u, v) in allowed:
        succ.setdefault(u, []).append(v)
    out = []

    def walk(node, path, seen):
        for v in succ.get(node, []):
            if v < m:
                if v != path[0] and len(path) > 1:
                    out.append(path + [v])
                continue
            if v in seen:
                continue
            walk(v, path + [v], seen | {v})

    for d in range(m):
        walk(d, [d], set())
    return out
