"""Lower ring circuits to signal-flow graphs and sweep their spectra.

Each coupler becomes a 2x2 junction (through gain t = sqrt(1-kappa), cross
gain i sqrt(kappa)); each waveguide arc of length L becomes an edge with gain
a * exp(i theta), theta = 2 pi n_eff L / lambda and a the dB/cm loss over L.
A ring's couplers split its circumference into equal arcs in declaration
order; bus segments carry no length (only ring paths hold resonant phase).

The sweep evaluates Mason's rule per wavelength from a single topological
decomposition (the graph's structure does not depend on lambda), and the
squeezing report turns on-resonance field enhancement into a squeeze
parameter through the lowest-order parametric-gain model r = gamma P L M.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .fock import (
    FockSpace,
    OscillatorFrame,
    SqueezeSpec,
    required_dim,
    squeezed_coherent_state,
    variances,
)
from .netlist import Diagnostic, RingCircuit, validate
from .sfg import PoleError, SignalFlowGraph, decompose, linear_solve_signals

__all__ = [
    "SweepSpec",
    "SpectralResponse",
    "FwmPump",
    "ResonanceReport",
    "lower_to_sfg",
    "sweep",
    "find_resonances",
    "fwm_squeeze_parameter",
    "squeezing_report",
]

_POLE_RTOL = 1e-13
_MAX_REPORT_DIM = 512


@dataclass(frozen=True)
class SweepSpec:
    lambda_start_um: float
    lambda_stop_um: float
    points: int

    def __post_init__(self):
        if not 0.0 < self.lambda_start_um < self.lambda_stop_um:
            raise ValueError(
                f"need 0 < start < stop, got [{self.lambda_start_um}, {self.lambda_stop_um}]"
            )
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points}")

    def lambdas(self) -> np.ndarray:
        return np.linspace(self.lambda_start_um, self.lambda_stop_um, self.points)


@dataclass(frozen=True)
class SpectralResponse:
    """Per-wavelength complex through/drop transfers; poles recorded as NaN."""

    lambdas: np.ndarray
    through: np.ndarray
    drop: np.ndarray
    pole_points: tuple = ()


@dataclass(frozen=True)
class FwmPump:
    """Pump parameters of the phenomenological parametric-gain model."""

    pump_power: float = 0.0  # W
    gamma_nl: float = 0.0  # 1/(W m)
    interaction_length: float = 0.0  # m
    round_trips: float = 1.0  # effective field-enhancement count

    def __post_init__(self):
        for name in ("pump_power", "gamma_nl", "interaction_length", "round_trips"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ResonanceReport:
    lambda_res_um: float
    enhancement: float
    r: float
    var_x: float
    var_p: float
    product: float
    near_pole: bool = False


def fwm_squeeze_parameter(pump: FwmPump) -> float:
    """Squeeze magnitude r = gamma_nl * pump_power * interaction_length * round_trips."""
    return pump.gamma_nl * pump.pump_power * pump.interaction_length * pump.round_trips


# --- lowering -------------------------------------------------------------


def _require_valid(circuit: RingCircuit):
    errors = [d for d in validate(circuit) if d.severity == "error"]
    if errors:
        raise ValueError("invalid circuit: " + "; ".join(d.message for d in errors))


def _port_node(role):
    return f"port.{role}"


def _coupler_nodes(c, side):
    return f"{c.name}.a{side}", f"{c.name}.b{side}"


class _Template:
    """Lambda-independent lowering: nodes plus constant/arc edge descriptors."""

    def __init__(self, circuit: RingCircuit):
        _require_valid(circuit)
        self.circuit = circuit
        self.nodes = set()
        self.const_edges = {}  # (u, v) -> complex gain
        self.arc_edges = {}  # (u, v) -> length_um
        self.ring_nodes = set()

        for c in circuit.couplers:
            t = math.sqrt(1.0 - c.kappa)
            x = 1j * math.sqrt(c.kappa)
            a1, b1 = _coupler_nodes(c, 1)
            a2, b2 = _coupler_nodes(c, 2)
            self.nodes.update((a1, b1, a2, b2))
            self._const(a1, b1, t)
            self._const(a2, b2, t)
            self._const(a1, b2, x)
            self._const(a2, b1, x)

        for ring in circuit.rings:
            ends = []
            for c in circuit.couplers:
                if c.element_a == ring.name:
                    ends.append(_coupler_nodes(c, 1))
                if c.element_b == ring.name:
                    ends.append(_coupler_nodes(c, 2))
            if not ends:
                continue
            arc_len = ring.circumference_um / len(ends)
            for i, (_, out_node) in enumerate(ends):
                in_next = ends[(i + 1) % len(ends)][0]
                self._arc(out_node, in_next, arc_len)
            for a, b in ends:
                self.ring_nodes.update((a, b))

        layout = {b.name: [] for b in circuit.buses}
        for c in circuit.couplers:
            if c.element_a in layout:
                layout[c.element_a].append((c, 1))
            if c.element_b in layout:
                layout[c.element_b].append((c, 2))

        ports_by_bus = {b.name: {"entry": None, "exit": None} for b in circuit.buses}
        for p in circuit.ports():
            kind = "entry" if p.role in ("input", "add") else "exit"
            ports_by_bus[p.bus][kind] = p

        for bus in circuit.buses:
            entry = ports_by_bus[bus.name]["entry"]
            exit_ = ports_by_bus[bus.name]["exit"]
            if entry is not None:
                start = entry.end
            elif exit_ is not None:
                start = "right" if exit_.end == "left" else "left"
            else:
                start = "left"
            chain = layout[bus.name]
            if start == "right":
                chain = list(reversed(chain))

            prev_out = None
            if entry is not None:
                prev_out = _port_node(entry.role)
                self.nodes.add(prev_out)
            for c, side in chain:
                a, b = _coupler_nodes(c, side)
                if prev_out is not None:
                    self._const(prev_out, a, 1.0)
                prev_out = b
            if exit_ is not None:
                exit_node = _port_node(exit_.role)
                self.nodes.add(exit_node)
                if prev_out is not None:
                    self._const(prev_out, exit_node, 1.0)

        self.source = _port_node("input")
        self.sink_nodes = {
            p.role: _port_node(p.role)
            for p in circuit.ports()
            if p.role in ("through", "drop")
        }

    def _const(self, u, v, gain):
        self.nodes.update((u, v))
        key = (u, v)
        self.const_edges[key] = self.const_edges.get(key, 0j) + complex(gain)

    def _arc(self, u, v, length_um):
        self.nodes.update((u, v))
        self.arc_edges[(u, v)] = self.arc_edges.get((u, v), 0.0) + length_um

    def arc_gain(self, length_um, lambda_um):
        g = self.circuit.globals
        theta = 2.0 * math.pi * g.n_eff * length_um / lambda_um
        amp = 10.0 ** (-g.loss_db_per_cm * (length_um * 1e-4) / 20.0)
        return amp * complex(math.cos(theta), math.sin(theta))

    def graph(self, lambda_um) -> SignalFlowGraph:
        edges = [(u, v, gain) for (u, v), gain in self.const_edges.items()]
        edges += [
            (u, v, self.arc_gain(length, lambda_um))
            for (u, v), length in self.arc_edges.items()
        ]
        return SignalFlowGraph(
            nodes=self.nodes,
            edges=edges,
            source=self.source,
            sinks=set(self.sink_nodes.values()),
        )


def lower_to_sfg(circuit: RingCircuit, lambda_um: float) -> SignalFlowGraph:
    """Materialize the circuit's signal-flow graph at one wavelength."""
    if not lambda_um > 0.0:
        raise ValueError(f"wavelength must be positive, got {lambda_um}")
    return _Template(circuit).graph(lambda_um)


# --- sweeping ---------------------------------------------------------------


def _edge_gain_arrays(tpl: _Template, lambdas: np.ndarray):
    g = tpl.circuit.globals
    arrays = {}
    for key, gain in tpl.const_edges.items():
        arrays[key] = np.full(lambdas.shape, gain, dtype=complex)
    for key, length in tpl.arc_edges.items():
        theta = 2.0 * np.pi * g.n_eff * length / lambdas
        amp = 10.0 ** (-g.loss_db_per_cm * (length * 1e-4) / 20.0)
        arrays[key] = amp * np.exp(1j * theta)
    return arrays


def _seq_gain(arrays, nodes, npts, close=False):
    out = np.ones(npts, dtype=complex)
    for u, v in zip(nodes, nodes[1:]):
        out = out * arrays[(u, v)]
    if close:
        out = out * arrays[(nodes[-1], nodes[0])]
    return out


def _vector_delta(loop_arrays, singles, sets, npts):
    d = np.ones(npts, dtype=complex)
    for i in singles:
        d = d - loop_arrays[i]
    for s in sets:
        prod = loop_arrays[s[0]].copy()
        for i in s[1:]:
            prod = prod * loop_arrays[i]
        d = d + prod if len(s) % 2 == 0 else d - prod
    return d


def sweep(circuit: RingCircuit, spec: SweepSpec) -> SpectralResponse:
    """Through/drop transfer over a uniform wavelength grid (endpoints included).

    Per-point poles (resonant lossless graphs) are recorded in
    ``pole_points`` and reported as NaN transfers rather than raised.
    """
    tpl = _Template(circuit)
    lambdas = spec.lambdas()
    npts = lambdas.shape[0]
    arrays = _edge_gain_arrays(tpl, lambdas)

    mid_graph = tpl.graph(float(lambdas[npts // 2]))
    results = {}
    pole_mask = np.zeros(npts, dtype=bool)
    loop_cache = None

    for role in ("through", "drop"):
        sink = tpl.sink_nodes.get(role)
        if sink is None:
            results[role] = np.zeros(npts, dtype=complex)
            continue
        dec = decompose(mid_graph, sink)
        if loop_cache is None:
            loop_arrays = [
                _seq_gain(arrays, lp.nodes, npts, close=True) for lp in dec.loops
            ]
            loop_nodes = [frozenset(lp.nodes) for lp in dec.loops]
            delta = _vector_delta(
                loop_arrays, range(len(loop_arrays)), dec.nontouching_sets, npts
            )
            scale = 1.0 + sum(np.abs(arr) for arr in loop_arrays) if loop_arrays else 1.0
            pole_mask = np.abs(delta) < _POLE_RTOL * scale
            loop_cache = (loop_arrays, loop_nodes, delta, dec.nontouching_sets)
        loop_arrays, loop_nodes, delta, all_sets = loop_cache

        num = np.zeros(npts, dtype=complex)
        for p in dec.forward_paths:
            pset = set(p.nodes)
            keep = frozenset(
                i for i, ln in enumerate(loop_nodes) if pset.isdisjoint(ln)
            )
            sub_sets = [s for s in all_sets if all(i in keep for i in s)]
            dk = _vector_delta(loop_arrays, sorted(keep), sub_sets, npts)
            num = num + _seq_gain(arrays, p.nodes, npts) * dk

        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(pole_mask, np.nan + 1j * np.nan, num / np.where(pole_mask, 1.0, delta))
        results[role] = t

    return SpectralResponse(
        lambdas=lambdas,
        through=results["through"],
        drop=results["drop"],
        pole_points=tuple(int(i) for i in np.nonzero(pole_mask)[0]),
    )


def find_resonances(response: SpectralResponse) -> list:
    """Indices of through-port minima at least 3 dB below the median."""
    m2 = np.abs(response.through) ** 2
    m2 = np.where(np.isfinite(m2), m2, np.inf)
    finite = m2[np.isfinite(m2)]
    if finite.size == 0:
        return []
    threshold = float(np.median(finite)) * 10.0 ** (-0.3)
    out = []
    for i in range(1, len(m2) - 1):
        if m2[i] <= m2[i - 1] and m2[i] <= m2[i + 1] and m2[i] <= threshold:
            if m2[i] == m2[i - 1]:  # plateau: keep the smallest wavelength
                continue
            out.append(i)
    return out


def _report_dim(r: float) -> FockSpace:
    dim = max(64, required_dim(0.0, r))
    while dim < _MAX_REPORT_DIM:
        v1 = variances(
            squeezed_coherent_state(FockSpace(dim), SqueezeSpec(0j, r, 0.0), force=True)
        ).var_x
        v2 = variances(
            squeezed_coherent_state(
                FockSpace(2 * dim), SqueezeSpec(0j, r, 0.0), force=True
            )
        ).var_x
        if abs(v1 - v2) < 1e-9:
            return FockSpace(2 * dim)
        dim *= 2
    return FockSpace(_MAX_REPORT_DIM)


def squeezing_report(
    circuit: RingCircuit,
    pump: FwmPump,
    spec: SweepSpec,
    frame: OscillatorFrame = OscillatorFrame(),
) -> list:
    """Per-resonance squeezing report.

    At each through-port resonance the circulating field enhancement is read
    off the solved node amplitudes (input normalized to one), the effective
    round-trip count is enhancement**2, and the resulting squeeze parameter
    is pushed through the Fock engine for quadrature variances.
    """
    tpl = _Template(circuit)
    response = sweep(circuit, spec)
    idxs = find_resonances(response)
    if not idxs:
        warnings.warn("no resonances found in the sweep window", stacklevel=2)
        return []

    pole_set = set(response.pole_points)
    reports = []
    for i in idxs:
        lam = float(response.lambdas[i])
        near_pole = bool({i - 1, i, i + 1} & pole_set)
        try:
            signals = linear_solve_signals(tpl.graph(lam))
            enhancement = max(abs(signals[n]) for n in tpl.ring_nodes)
        except PoleError:
            near_pole = True
            enhancement = float("nan")
        if not math.isfinite(enhancement):
            reports.append(
                ResonanceReport(lam, float("nan"), float("nan"), float("nan"),
                                float("nan"), float("nan"), True)
            )
            continue
        if enhancement**2 > 1e12:
            near_pole = True
        r = fwm_squeeze_parameter(replace(pump, round_trips=enhancement**2))
        if r == 0.0:
            var_x = frame.hbar / (2.0 * frame.m * frame.omega)
            var_p = frame.m * frame.hbar * frame.omega / 2.0
            product = frame.hbar / 2.0
        else:
            state = squeezed_coherent_state(
                _report_dim(r), SqueezeSpec(0j, r, 0.0), force=True
            )
            rep = variances(state, frame)
            var_x, var_p, product = rep.var_x, rep.var_p, rep.product
        reports.append(
            ResonanceReport(
                lambda_res_um=lam,
                enhancement=enhancement,
                r=r,
                var_x=var_x,
                var_p=var_p,
                product=product,
                near_pole=near_pole,
            )
        )
    return reports
