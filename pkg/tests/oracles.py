"""Independent, deliberately naive reference implementations used by the tests."""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product

from dlattice import exact


def connected(n, edges):
    if n <= 1:
        return True
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x] - seen:
            seen.add(y)
            queue.append(y)
    return len(seen) == n


def cut_edges(n, edges):
    """Positions whose removal disconnects the graph."""
    return [p for p in range(len(edges))
            if not connected(n, edges[:p] + edges[p + 1:])]


def canonical_form(n, edges):
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return (n, best)


def all_connected_multigraphs(max_edges):
    """Canonical forms of every connected loopless multigraph, by generate-and-canonize."""
    out = {canonical_form(1, ())}
    for m in range(1, max_edges + 1):
        for n in range(2, m + 2):
            pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
            for edges in combinations_with_replacement(pairs, m):
                if connected(n, edges):
                    out.add(canonical_form(n, edges))
    return out


def scan_min_in_class(gram, c):
    """min |c + 2 lambda| by a box scan over lambda.

    A unit box around the real minimiser gives an upper bound first; the box for
    the full scan is then derived from that bound, so it stays small.
    """
    n = len(gram)
    if n == 0:
        return Fraction(0), [()]
    ginv = exact.inverse(gram)
    v = exact.matvec(ginv, c)
    centre = [-x / 2 for x in v]

    def chi(k):
        return tuple(a + 2 * b for a, b in zip(c, exact.matvec(gram, k)))

    near = product(*[range(int(x) - 1, int(x) + 2) for x in centre])
    bound = min(exact.quad(ginv, chi(k)) for k in near)
    ranges = []
    for i in range(n):
        # |x_i| <= sqrt(bound * ginv_ii) for x = v + 2k
        radius = float(bound * ginv[i][i]) ** 0.5 + 1
        lo = int((-radius - float(v[i])) // 2) - 1
        hi = int((radius - float(v[i])) // 2) + 1
        ranges.append(range(lo, hi + 1))
    # integer arithmetic: det * |x| = x^T adj(G) x
    det = exact.det(gram)
    adj = [[int(x * det) for x in row] for row in ginv]
    best, reps = None, []
    for k in product(*ranges):
        x = [a + 2 * sum(g * b for g, b in zip(row, k)) for a, row in zip(c, gram)]
        q = sum(xi * sum(a * xj for a, xj in zip(row, x)) for xi, row in zip(x, adj))
        if best is None or q < best:
            best, reps = q, [tuple(x)]
        elif q == best:
            reps.append(tuple(x))
    return Fraction(best, det), sorted(reps)


def orientation_indegree_search(n, edges, indeg):
    for signs in product((1, -1), repeat=len(edges)):
        got = [0] * n
        for (u, v), s in zip(edges, signs):
            got[v if s > 0 else u] += 1
        if got == list(indeg):
            return signs
    return None
