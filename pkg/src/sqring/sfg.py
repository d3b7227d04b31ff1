"""Signal-flow-graph transfer functions via Mason's gain rule.

A graph is a set of nodes joined by complex-gain edges with one source node.
The transfer to a sink is computed two independent ways:

* :func:`mason_transfer` — enumerate forward paths and simple loops
  (Johnson-style depth-first search with blocking), build the graph
  determinant from non-touching loop products, and apply the gain rule.
* :func:`linear_solve_transfer` — solve (I - A) x = e_source directly.

The two agree whenever (I - A) is nonsingular, which the test suite checks
on large seeded ensembles.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SignalFlowGraph",
    "MasonDecomposition",
    "PathGain",
    "PoleError",
    "MasonOrderError",
    "enumerate_loops",
    "forward_paths",
    "nontouching_sets",
    "decompose",
    "mason_transfer",
    "linear_solve_transfer",
    "linear_solve_signals",
    "debug_dump",
]

_POLE_RTOL = 1e-13
_MAX_NONTOUCHING_ORDER = 8


class PoleError(ArithmeticError):
    """Graph determinant is (numerically) zero: the transfer has a pole."""

    def __init__(self, message, magnitude):
        super().__init__(f"{message} (|delta|={magnitude:.3e})")
        self.magnitude = magnitude


class MasonOrderError(RuntimeError):
    """More than the supported order of mutually non-touching loops."""


@dataclass(frozen=True)
class PathGain:
    """A node sequence (loops stored without the closing repeat) and its gain."""

    nodes: tuple
    gain: complex


@dataclass(frozen=True)
class MasonDecomposition:
    forward_paths: tuple
    loops: tuple
    nontouching_sets: tuple  # index tuples into loops, order >= 2
    delta: complex
    path_deltas: tuple  # delta restricted to loops not touching each path


class SignalFlowGraph:
    """Directed gain graph; parallel edges are summed on construction."""

    def __init__(self, nodes, edges, source, sinks=()):
        self.nodes = tuple(sorted(set(nodes)))
        node_set = set(self.nodes)
        gains = {}
        for u, v, gain in edges:
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge ({u!r}, {v!r}) references unknown node")
            key = (u, v)
            gains[key] = gains.get(key, 0j) + complex(gain)
        self.gains = gains
        if source not in node_set:
            raise ValueError(f"source {source!r} is not a node")
        self.source = source
        self.sinks = frozenset(sinks)
        if not self.sinks <= node_set:
            raise ValueError("sinks must be nodes")
        succ = defaultdict(list)
        for u, v in gains:
            succ[u].append(v)
        self._succ = {u: sorted(vs) for u, vs in succ.items()}

    def successors(self, v):
        return self._succ.get(v, ())

    def gain(self, u, v):
        return self.gains[(u, v)]

    def edge_list(self):
        return sorted(self.gains.items())


def _path_gain(g, nodes, close=False):
    gain = 1 + 0j
    for u, v in zip(nodes, nodes[1:]):
        gain *= g.gain(u, v)
    if close:
        gain *= g.gain(nodes[-1], nodes[0])
    return gain


def _scc_of(start, nodes, succ):
    """Tarjan SCC of the induced subgraph; returns the component holding start."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    counter = [0]
    result = [None]

    def strongconnect(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        for w in succ(v):
            if w not in nodes:
                continue
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in onstack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                onstack.discard(w)
                comp.add(w)
                if w == v:
                    break
            if start in comp:
                result[0] = comp

    strongconnect(start)
    return result[0] or {start}


def enumerate_loops(g: SignalFlowGraph):
    """All simple cycles, once each, rotated to start at their smallest node.

    Johnson-style search: for each start node s (ascending), circuits through
    s are enumerated inside the strongly connected component of the subgraph
    on nodes >= s, with the blocked-set bookkeeping that prevents revisits.
    """
    loops = []
    for v in g.nodes:
        if (v, v) in g.gains:
            loops.append(PathGain((v,), g.gain(v, v)))

    position = {v: i for i, v in enumerate(g.nodes)}
    for s in g.nodes:
        allowed = {v for v in g.nodes if position[v] >= position[s]}
        comp = _scc_of(s, allowed, g.successors)
        if len(comp) < 2:
            continue
        blocked = set()
        bmap = defaultdict(set)
        path = [s]

        def unblock(v):
            stack = [v]
            while stack:
                u = stack.pop()
                if u in blocked:
                    blocked.discard(u)
                    stack.extend(bmap[u])
                    bmap[u].clear()

        def circuit(v):
            found = False
            blocked.add(v)
            for w in g.successors(v):
                if w not in comp or w == v:
                    continue
                if w == s:
                    loops.append(PathGain(tuple(path), _path_gain(g, path, close=True)))
                    found = True
                elif w not in blocked:
                    path.append(w)
                    if circuit(w):
                        found = True
                    path.pop()
            if found:
                unblock(v)
            else:
                for w in g.successors(v):
                    if w in comp and w != v:
                        bmap[w].add(v)
            return found

        circuit(s)

    loops.sort(key=lambda lp: lp.nodes)
    return loops


def forward_paths(g: SignalFlowGraph, sink):
    """Simple paths source -> sink in deterministic (sorted-successor) order."""
    if sink not in set(g.nodes):
        raise ValueError(f"sink {sink!r} is not a node")
    paths = []
    path = [g.source]
    seen = {g.source}

    def walk(v):
        if v == sink:
            paths.append(PathGain(tuple(path), _path_gain(g, path)))
            return
        for w in g.successors(v):
            if w not in seen:
                seen.add(w)
                path.append(w)
                walk(w)
                path.pop()
                seen.discard(w)

    walk(g.source)
    return paths


def nontouching_sets(loop_node_sets, max_order=_MAX_NONTOUCHING_ORDER):
    """Index tuples of mutually node-disjoint loops, order 2..max_order.

    Built by incremental extension of independent sets; raises
    :class:`MasonOrderError` if an order beyond the cap exists.
    """
    n = len(loop_node_sets)
    sets = []
    frontier = [((i,), loop_node_sets[i]) for i in range(n)]
    for order in range(2, max_order + 2):
        grown = []
        for idxs, used in frontier:
            for j in range(idxs[-1] + 1, n):
                if used.isdisjoint(loop_node_sets[j]):
                    grown.append((idxs + (j,), used | loop_node_sets[j]))
        if not grown:
            break
        if order > max_order:
            raise MasonOrderError(
                f"non-touching loop sets beyond order {max_order} present"
            )
        sets.extend(idxs for idxs, _ in grown)
        frontier = grown
    return tuple(sets)


def _delta(loop_gains, singleton_indices, sets):
    total = 1 + 0j
    for i in singleton_indices:
        total -= loop_gains[i]
    for idxs in sets:
        prod = 1 + 0j
        for i in idxs:
            prod *= loop_gains[i]
        total += prod if len(idxs) % 2 == 0 else -prod
    return total


def decompose(g: SignalFlowGraph, sink) -> MasonDecomposition:
    """Forward paths, loops, non-touching sets, and the Mason determinants."""
    paths = tuple(forward_paths(g, sink))
    loops = tuple(enumerate_loops(g))
    loop_nodes = [frozenset(lp.nodes) for lp in loops]
    loop_gains = [lp.gain for lp in loops]
    sets = nontouching_sets(loop_nodes)
    delta = _delta(loop_gains, range(len(loops)), sets)

    path_deltas = []
    for p in paths:
        pset = set(p.nodes)
        keep = frozenset(
            i for i, ln in enumerate(loop_nodes) if pset.isdisjoint(ln)
        )
        sub_sets = [s for s in sets if all(i in keep for i in s)]
        path_deltas.append(_delta(loop_gains, sorted(keep), sub_sets))

    return MasonDecomposition(
        forward_paths=paths,
        loops=loops,
        nontouching_sets=sets,
        delta=delta,
        path_deltas=tuple(path_deltas),
    )


def _check_pole(delta, loops):
    scale = 1.0 + sum(abs(lp.gain) for lp in loops)
    if abs(delta) < _POLE_RTOL * scale:
        raise PoleError("graph determinant vanishes", abs(delta))


def mason_transfer(g: SignalFlowGraph, sink) -> complex:
    """Source-to-sink transfer by the gain rule; 0 if the sink is unreachable."""
    dec = decompose(g, sink)
    _check_pole(dec.delta, dec.loops)
    num = sum(
        (p.gain * dk for p, dk in zip(dec.forward_paths, dec.path_deltas)),
        start=0j,
    )
    return num / dec.delta


def _system_matrix(g: SignalFlowGraph):
    idx = {v: i for i, v in enumerate(g.nodes)}
    n = len(g.nodes)
    a = np.zeros((n, n), dtype=complex)
    for (u, v), gain in g.gains.items():
        a[idx[v], idx[u]] += gain
    return idx, np.eye(n, dtype=complex) - a


def linear_solve_signals(g: SignalFlowGraph):
    """Node amplitudes from (I - A) x = e_source, as a node -> complex dict."""
    idx, m = _system_matrix(g)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > 1e13:
        raise PoleError("system matrix (I - A) is singular", float(1.0 / max(cond, 1.0)))
    rhs = np.zeros(len(g.nodes), dtype=complex)
    rhs[idx[g.source]] = 1.0
    x = np.linalg.solve(m, rhs)
    return {v: complex(x[i]) for v, i in idx.items()}


def linear_solve_transfer(g: SignalFlowGraph, sink) -> complex:
    """Independent oracle for :func:`mason_transfer` by direct linear solve."""
    if sink not in set(g.nodes):
        raise ValueError(f"sink {sink!r} is not a node")
    return linear_solve_signals(g)[sink]


def _c2list(z):
    return [z.real, z.imag]


def debug_dump(g: SignalFlowGraph, sink) -> dict:
    """JSON-ready decomposition dump: paths, loops, delta, transfer."""
    dec = decompose(g, sink)
    _check_pole(dec.delta, dec.loops)
    num = sum(
        (p.gain * dk for p, dk in zip(dec.forward_paths, dec.path_deltas)),
        start=0j,
    )
    return {
        "paths": [
            {"nodes": list(p.nodes), "gain": _c2list(p.gain)}
            for p in dec.forward_paths
        ],
        "loops": [
            {"nodes": list(lp.nodes), "gain": _c2list(lp.gain)} for lp in dec.loops
        ],
        "delta": _c2list(dec.delta),
        "transfer": _c2list(num / dec.delta),
    }
