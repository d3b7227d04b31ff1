"""Independent oracles used by the test suite.

These deliberately avoid the package's own code paths: the exponential is a
plain Taylor sum, the coherent state is built from its series definition,
the squeezed-vacuum distribution is the analytic closed form, and the cycle
enumerators are naive exhaustive searches.
"""

import itertools
import math

import numpy as np


def series_expm(a, tol=1e-30, max_terms=500):
    """exp(a) by direct Taylor summation (small norms only)."""
    a = np.asarray(a, dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    total = term.copy()
    for k in range(1, max_terms):
        term = term @ a / k
        total += term
        if np.max(np.abs(term)) < tol:
            break
    return total


def coherent_amplitudes(alpha, dim):
    """Series coherent state e^{-|a|^2/2} sum_n a^n/sqrt(n!) |n>."""
    amps = np.zeros(dim, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def squeezed_vacuum_prob(n, r):
    """Analytic squeezed-vacuum photon distribution (zero for odd n)."""
    if n % 2:
        return 0.0
    half = n // 2
    return (
        math.comb(n, half)
        * math.tanh(r) ** n
        / (4.0**half * math.cosh(r))
    )


def brute_force_cycles(nodes, edge_pairs):
    """Every simple cycle by subset + rotation enumeration; tiny graphs only.

    Cycles are canonicalized to start at their smallest node.
    """
    edges = set(edge_pairs)
    cycles = set()
    for size in range(1, len(nodes) + 1):
        for subset in itertools.combinations(sorted(nodes), size):
            first = subset[0]
            for perm in itertools.permutations(subset[1:]):
                seq = (first,) + perm
                if all(
                    (seq[i], seq[(i + 1) % size]) in edges for i in range(size)
                ):
                    cycles.add(seq)
    return cycles


def dfs_cycles(nodes, edge_pairs):
    """Exhaustive DFS cycle enumeration without Johnson's blocking.

    Feasible on mid-size sparse graphs where the subset oracle is not.
    """
    adj = {}
    for u, v in edge_pairs:
        adj.setdefault(u, []).append(v)
    order = {v: i for i, v in enumerate(sorted(nodes))}
    cycles = []

    def extend(start, path, onpath):
        for w in sorted(adj.get(path[-1], ())):
            if w == start:
                cycles.append(tuple(path))
            elif w not in onpath and order[w] > order[start]:
                path.append(w)
                onpath.add(w)
                extend(start, path, onpath)
                path.pop()
                onpath.discard(w)

    for s in sorted(nodes):
        if s in adj:
            extend(s, [s], {s})
    return sorted(cycles)
