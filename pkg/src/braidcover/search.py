"""Vectorised search kernel for one fixed transposition sigma.

With sigma an involution the relations reduce to the following constraints,
where ``x^s`` denotes ``sigma x sigma``:

* every one of a1, a2, b1, b2 lies in the R2 candidate set X;
* b1 commutes with a1^s                      (R4a);
* a2 commutes with a1^s and b1^s             (R3a, R3d);
* b2 commutes with a1^s, b1^s and a2^s       (R3c, R3b, R4b);
* [a2, b2^-1] equals [a1, b1^-1]^-1 sigma^2  (TR).

All arrays hold 0-based images; ``compose(p, q) == q[p]``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

# full commuting matrix up to this many candidates (bytes = size**2; n = 9 needs ~0.9 GB)
DENSE_LIMIT = 32000


def all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def _compose_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise ``compose(p, q)`` for stacked permutations."""
    return np.take_along_axis(q, p, axis=1)


def r2_mask(perms: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Rows x with sigma^-1 x sigma^-1 x == x sigma^-1 x sigma^-1."""
    s_inv = np.broadcast_to(np.argsort(sigma), perms.shape)
    lhs = _compose_rows(_compose_rows(_compose_rows(s_inv, perms), s_inv), perms)
    rhs = _compose_rows(_compose_rows(_compose_rows(perms, s_inv), perms), s_inv)
    return (lhs == rhs).all(axis=1)


class SearchTables:
    """Candidate set and commuting data for one transposition sigma."""

    def __init__(self, sigma: tuple[int, ...]):
        self.sigma = np.array(sigma, dtype=np.intp)
        self.n = n = len(sigma)
        perms = all_permutations(n)
        self.X = perms[r2_mask(perms, self.sigma)]
        self.Xinv = np.argsort(self.X, axis=1)
        self.size = len(self.X)
        # conjugates x^s = sigma x sigma (sigma is an involution)
        self.Xs = self.sigma[self.X[:, self.sigma]]
        self.index = {tuple(row): i for i, row in enumerate(self.X.tolist())}
        self._dense = None
        if self.size <= DENSE_LIMIT:
            self._dense = np.empty((self.size, self.size), dtype=bool)
            for i in range(self.size):
                self._dense[i] = self._commute_row(i)
        self.tuples = [tuple(r) for r in self.X.tolist()]

    def _commute_row(self, i: int) -> np.ndarray:
        g = self.Xs[i]
        return (g[self.X] == self.X[:, g]).all(axis=1)

    def commuting(self, i: int) -> np.ndarray:
        """Mask of candidates commuting with the sigma-conjugate of candidate ``i``."""
        if self._dense is not None:
            return self._dense[i]
        return self._cached_row(i)

    @lru_cache(maxsize=4096)
    def _cached_row(self, i: int) -> np.ndarray:
        return self._commute_row(i)

    def b1_choices(self, a1: int) -> np.ndarray:
        return np.flatnonzero(self.commuting(a1))

    def solve_partition(
        self, a1: int, b1: int, transitive_only: bool = True
    ) -> list[tuple[int, int, int, int]]:
        """All (a1, a2, b1, b2) candidate-index tuples in the (a1, b1) subtree
        satisfying every relation, optionally keeping only transitive ones."""
        X, Xinv = self.X, self.Xinv
        a2s = np.flatnonzero(self.commuting(a1) & self.commuting(b1))
        if len(a2s) == 0:
            return []
        x, y = X[a1], X[b1]
        xi, yi = Xinv[a1], Xinv[b1]
        # c1 = [a1, b1^-1] = a1 b1^-1 a1^-1 b1, applied left to right
        c1 = y[xi[yi[x]]]
        sig2 = self.sigma[self.sigma]
        target = sig2[np.argsort(c1)]
        # b2 ranges over a2s as well; restrict the commuting data to that sublist
        if self._dense is not None:
            sub = self._dense[a2s][:, a2s]
        else:
            sub = np.array([self.commuting(int(a))[a2s] for a in a2s])
        ia, ib = np.nonzero(sub)
        if len(ia) == 0:
            return []
        a2_arr, b2_arr = a2s[ia], a2s[ib]
        # [a2, b2^-1] row-wise: a2, then b2^-1, then a2^-1, then b2
        t = np.take_along_axis(Xinv[b2_arr], X[a2_arr], axis=1)
        t = np.take_along_axis(Xinv[a2_arr], t, axis=1)
        t = np.take_along_axis(X[b2_arr], t, axis=1)
        ok = (t == target).all(axis=1)
        a2_arr, b2_arr = a2_arr[ok], b2_arr[ok]
        if len(a2_arr) == 0:
            return []
        if transitive_only:
            keep = self._transitive_mask(a1, b1, a2_arr, b2_arr)
            a2_arr, b2_arr = a2_arr[keep], b2_arr[keep]
        return [(a1, a2, b1, b2) for a2, b2 in zip(a2_arr.tolist(), b2_arr.tolist())]

    def _transitive_mask(self, a1: int, b1: int, a2s: np.ndarray, b2s: np.ndarray) -> np.ndarray:
        """Row-wise: do the five generators act transitively on the n points?

        Builds each row's point-adjacency matrix and squares it until paths of
        length n - 1 are covered.
        """
        m, n = len(a2s), self.n
        adj = np.zeros((m, n, n), dtype=np.float32)
        rows = np.arange(m)[:, None]
        cols = np.arange(n)[None, :]
        for g in (self.X[a1][None, :], self.X[b1][None, :], self.X[a2s], self.X[b2s], self.sigma[None, :]):
            adj[rows, cols, np.broadcast_to(g, (m, n))] = 1.0
        adj += adj.transpose(0, 2, 1)
        adj[:, cols[0], cols[0]] = 1.0
        span = 1
        while span < n - 1:
            adj = np.minimum(adj @ adj, 1.0)
            span *= 2
        return adj[:, 0, :].all(axis=1)

    def transitive(self, a1: int, a2: int, b1: int, b2: int) -> bool:
        gens = (self.tuples[a1], self.tuples[a2], self.tuples[b1], self.tuples[b2], tuple(self.sigma.tolist()))
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n


_TABLE_CACHE: dict[tuple[int, ...], SearchTables] = {}


def tables_for(sigma: tuple[int, ...]) -> SearchTables:
    t = _TABLE_CACHE.get(sigma)
    if t is None:
        t = _TABLE_CACHE[sigma] = SearchTables(sigma)
    return t


def sigma_tuple(n: int, i: int, j: int) -> tuple[int, ...]:
    """0-based image tuple of the transposition of 0-based points i and j."""
    s = list(range(n))
    s[i], s[j] = j, i
    return tuple(s)


def run_batch(sigma: tuple[int, ...], pairs: list[tuple[int, int]]):
    """Solve a batch of (a1, b1) partitions; returns one list of image 5-tuples per partition.

    Each solution is ``(sigma, a1, a2, b1, b2)`` as 0-based image tuples.
    """
    tab = tables_for(sigma)
    results = []
    for a1, b1 in pairs:
        sols = []
        ta = tab.tuples
        for q in tab.solve_partition(a1, b1):
            sols.append((sigma, ta[q[0]], ta[q[1]], ta[q[2]], ta[q[3]]))
        results.append(sols)
    return results
