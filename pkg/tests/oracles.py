"""Independent reference computations used by the tests.

Nothing here imports the code under test beyond the plain Hypergraph
container; every routine is a direct transcription of a definition.
"""

from itertools import permutations, product
from math import factorial

import numpy as np


def brute_force_odd_subsets(n, edges):
    """All V1 (as bitmasks) meeting every edge oddly, excluding empty and full."""
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for e in edges:
        em = sum(1 << (v - 1) for v in e)
        ok &= (np.bitwise_count(masks & em) & 1) == 1
    ok[0] = False
    ok[-1] = False
    return masks[ok]


def loop_adjacency(n, k, edges):
    """Adjacency tensor entry by entry over all n^k index tuples."""
    edge_sets = {frozenset(e) for e in edges}
    T = np.zeros((n,) * k)
    for idx in product(range(n), repeat=k):
        if len(set(idx)) == k and frozenset(i + 1 for i in idx) in edge_sets:
            T[idx] = 1.0 / factorial(k - 1)
    return T


def loop_apply(T, x):
    """(T x)_i by explicit summation over i2..im."""
    n, m = T.shape[0], T.ndim
    out = np.zeros(n)
    for idx in product(range(n), repeat=m):
        term = T[idx]
        for j in idx[1:]:
            term *= x[j]
        out[idx[0]] += term
    return out


def loop_general_product(A, B):
    n, m, k = A.shape[0], A.ndim, B.ndim
    out_order = (m - 1) * (k - 1) + 1
    C = np.zeros((n,) * out_order)
    for i in range(n):
        for alphas in product(product(range(n), repeat=k - 1), repeat=m - 1):
            total = 0.0
            for rest in product(range(n), repeat=m - 1):
                term = A[(i,) + rest]
                for ij, alpha in zip(rest, alphas):
                    term *= B[(ij,) + alpha]
                total += term
            C[(i,) + tuple(a for alpha in alphas for a in alpha)] = total
    return C


def loop_direct_product(A, B):
    n, m, k = A.shape[0], B.shape[0], A.ndim
    C = np.zeros((n * m,) * k)
    for iv in product(range(n), repeat=k):
        for jv in product(range(m), repeat=k):
            C[tuple(i * m + j for i, j in zip(iv, jv))] = A[iv] * B[jv]
    return C


def graph_matrices(n, edges):
    """Classical adjacency, Laplacian and signless Laplacian of a simple graph."""
    A = np.zeros((n, n))
    for u, v in edges:
        A[u - 1, v - 1] = A[v - 1, u - 1] = 1.0
    D = np.diag(A.sum(axis=1))
    return A, D - A, D + A


def is_symmetric(T):
    return all(np.array_equal(T, np.transpose(T, p)) for p in permutations(range(T.ndim)))
