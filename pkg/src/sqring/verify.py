"""Built-in invariant suite behind the ``verify`` CLI command.

Every check is deterministic (fixed seeds), self-contained, and returns a
pass/fail with a short numeric detail string.  The checks mirror the module
invariants: operator algebra and closed-form variances (at dimensions large
enough for the truncated tails to be negligible), squeezed-vacuum photon
statistics against the analytic distribution, Mason/linear-solve agreement
on a seeded graph ensemble, add-drop filter physics, the wave-packet
contracts, and netlist round-tripping.
"""

import io
import math
from dataclasses import dataclass

import numpy as np

from . import circuit as circuit_mod
from . import fock, netlist, sfg, wavepacket
from .fock import FockSpace, OscillatorFrame, SqueezeSpec

__all__ = ["CheckResult", "run_all", "CHECKS", "random_graph"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _worst(*pairs):
    """Format 'label=value' for the largest magnitude entries."""
    return ", ".join(f"{k}={v:.3e}" for k, v in pairs)


# --- graph ensemble shared with the tests ---------------------------------


def random_graph(rng):
    """Seeded random gain graph, <= 8 nodes, spectral radius < 0.9."""
    n = int(rng.integers(3, 9))
    names = [f"n{i}" for i in range(n)]
    p = float(rng.uniform(0.15, 0.35))
    edges = []
    a = np.zeros((n, n), dtype=complex)
    for u in range(n):
        for v in range(n):
            if rng.random() < p:
                g = complex(rng.normal(), rng.normal())
                edges.append([u, v, g])
                a[v, u] += g
    if edges:
        radius = float(np.max(np.abs(np.linalg.eigvals(a))))
        if radius > 0.0:
            scale = float(rng.uniform(0.2, 0.9)) / radius
            for e in edges:
                e[2] *= scale
    graph = sfg.SignalFlowGraph(
        names,
        [(names[u], names[v], g) for u, v, g in edges],
        source=names[0],
        sinks={names[-1]},
    )
    sink = names[int(rng.integers(0, n))]
    return graph, sink


# --- fock checks ------------------------------------------------------------


def check_commutator():
    worst = 0.0
    for dim in (16, 64, 128):
        space = FockSpace(dim)
        a = fock.annihilation(space).matrix
        comm = a @ a.conj().T - a.conj().T @ a
        block = comm[: dim - 1, : dim - 1] - np.eye(dim - 1)
        worst = max(worst, float(np.max(np.abs(block))))
        corner = comm[dim - 1, dim - 1]
        if abs(corner + (dim - 1)) > 1e-9:
            return False, f"corner artifact {corner} != -(dim-1) at dim={dim}"
    return worst < 1e-12, _worst(("max_block_err", worst))


def check_unitarity_composition():
    worst_u = worst_c = 0.0
    for dim in (16, 64, 128):
        space = FockSpace(dim)
        eye = np.eye(dim)
        alpha, xi = 0.5, 0.5 * np.exp(0.3j)
        d = fock.displacement(space, alpha).matrix
        s = fock.squeeze(space, xi).matrix
        for u in (d, s):
            worst_u = max(worst_u, float(np.max(np.abs(u.conj().T @ u - eye))))
        dinv = fock.displacement(space, -alpha).matrix
        sinv = fock.squeeze(space, -xi).matrix
        worst_c = max(worst_c, float(np.max(np.abs(d @ dinv - eye))))
        worst_c = max(worst_c, float(np.max(np.abs(s @ sinv - eye))))
    ok = worst_u < 1e-10 and worst_c < 1e-10
    return ok, _worst(("unitarity", worst_u), ("composition", worst_c))


def check_minimum_uncertainty():
    space = FockSpace(256)
    frame = OscillatorFrame()
    worst = 0.0
    for r in (0.0, 0.25, 0.5, 1.0, 1.5):
        for alpha in (0.0, 1.0, 2.0):
            state = fock.squeezed_coherent_state(space, SqueezeSpec(alpha, r, 0.0))
            rep = fock.variances(state, frame)
            worst = max(worst, abs(rep.product - 0.5))
    return worst < 1e-6, _worst(("max|prod-hbar/2|", worst))


def check_variance_closed_forms():
    space = FockSpace(256)
    frame = OscillatorFrame(hbar=1.0, m=1.0, omega=1.0)
    worst = 0.0
    for r in (0.0, 0.25, 0.5, 1.0, 1.5):
        state = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, r, 0.0))
        rep = fock.variances(state, frame)
        worst = max(worst, abs(rep.var_x * 2.0 - math.exp(-2 * r)) / math.exp(-2 * r))
        worst = max(worst, abs(rep.var_p * 2.0 - math.exp(2 * r)) / math.exp(2 * r))
    return worst < 1e-6, _worst(("max_rel_err", worst))


def squeezed_vacuum_even_probability(n_pairs: int, r: float) -> float:
    """Analytic squeezed-vacuum P(2n): C(2n, n) tanh^{2n}(r) / (4^n cosh r)."""
    return (
        math.comb(2 * n_pairs, n_pairs)
        * math.tanh(r) ** (2 * n_pairs)
        / (4.0**n_pairs * math.cosh(r))
    )


def check_photon_statistics():
    worst_even = worst_odd = 0.0
    for r in (0.25, 0.5, 1.0):
        space = FockSpace(160)
        state = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, r, 0.0))
        probs = fock.photon_distribution(state)
        worst_odd = max(worst_odd, float(np.max(probs[1::2])))
        for n in range(0, 20):
            worst_even = max(
                worst_even, abs(probs[2 * n] - squeezed_vacuum_even_probability(n, r))
            )
    ok = worst_odd < 1e-12 and worst_even < 1e-8
    return ok, _worst(("odd", worst_odd), ("even_err", worst_even))


def check_coherent_poisson():
    space = FockSpace(64)
    state = fock.squeezed_coherent_state(space, SqueezeSpec(1.0, 0.0, 0.0))
    probs = fock.photon_distribution(state)
    worst = 0.0
    for n in range(20):
        worst = max(worst, abs(probs[n] - math.exp(-1.0) / math.factorial(n)))
    return worst < 1e-8, _worst(("poisson_err", worst))


def check_dim_convergence():
    worst = 0.0
    for r in (0.25, 0.5, 1.0):
        v = [
            fock.variances(
                fock.squeezed_coherent_state(FockSpace(dim), SqueezeSpec(0.0, r, 0.0))
            ).var_x
            for dim in (160, 320)
        ]
        worst = max(worst, abs(v[0] - v[1]))
    return worst < 1e-8, _worst(("max_var_x_shift", worst))


def check_wigner():
    frame = OscillatorFrame()
    space = FockSpace(96)
    grid = np.linspace(-6.0, 6.0, 161)
    vac = fock.vacuum(space)
    w = fock.wigner(vac, frame, grid, grid, check_coverage=True)
    i0 = len(grid) // 2
    err_origin = abs(w[i0, i0] - 1.0 / math.pi)

    state = fock.squeezed_coherent_state(space, SqueezeSpec(0.0, 0.5, 0.0))
    ws = fock.wigner(state, frame, grid, grid, check_coverage=True)
    mass = np.trapezoid(np.trapezoid(ws, grid, axis=1), grid)
    xs = grid[:, None]
    ps = grid[None, :]
    var_x = float(np.trapezoid(np.trapezoid(ws * xs**2, grid, axis=1), grid) / mass)
    var_p = float(np.trapezoid(np.trapezoid(ws * ps**2, grid, axis=1), grid) / mass)
    rep = fock.variances(state, frame)
    err_m = max(abs(var_x - rep.var_x), abs(var_p - rep.var_p))
    sym = float(np.max(np.abs(ws - ws[::-1, ::-1])))
    ok = err_origin < 1e-6 and err_m < 1e-3 and sym < 1e-12
    return ok, _worst(("origin", err_origin), ("moments", err_m), ("sym", sym))


# --- sfg checks -------------------------------------------------------------


def check_mason_vs_linear(n_graphs=1000, seed=20240214):
    rng = np.random.default_rng(seed)
    worst_t = worst_d = 0.0
    for _ in range(n_graphs):
        graph, sink = random_graph(rng)
        dec = sfg.decompose(graph, sink)
        try:
            t_mason = sfg.mason_transfer(graph, sink)
            t_lin = sfg.linear_solve_transfer(graph, sink)
        except sfg.PoleError:
            continue
        worst_t = max(worst_t, abs(t_mason - t_lin))
        idx = {v: i for i, v in enumerate(graph.nodes)}
        a = np.zeros((len(idx), len(idx)), dtype=complex)
        for (u, v), g in graph.gains.items():
            a[idx[v], idx[u]] += g
        det = complex(np.linalg.det(np.eye(len(idx)) - a))
        worst_d = max(worst_d, abs(dec.delta - det) / max(abs(det), 1e-30))
    ok = worst_t < 1e-10 and worst_d < 1e-10
    return ok, _worst(("max|mason-linear|", worst_t), ("max_rel_det", worst_d))


def check_loop_determinism():
    rng = np.random.default_rng(7)
    graph, _ = random_graph(rng)
    first = sfg.enumerate_loops(graph)
    second = sfg.enumerate_loops(graph)
    ok = [lp.nodes for lp in first] == [lp.nodes for lp in second]
    return ok, f"{len(first)} loops"


# --- circuit checks ---------------------------------------------------------


def _resonant_lambda(circumference_um, n_eff, near_um):
    m = round(n_eff * circumference_um / near_um)
    return n_eff * circumference_um / m


def check_add_drop_physics():
    text = netlist.bundled_netlist("add_drop")
    circ = netlist.parse(text)
    ring = circ.rings[0]
    lam_res = _resonant_lambda(ring.circumference_um, circ.globals.n_eff, 1.55)
    graph = circuit_mod.lower_to_sfg(circ, lam_res)
    t_null = abs(sfg.mason_transfer(graph, "port.through"))
    t_drop = abs(sfg.mason_transfer(graph, "port.drop"))

    spec = circuit_mod.SweepSpec(1.54, 1.56, 2000)
    resp = circuit_mod.sweep(circ, spec)
    total = np.abs(resp.through) ** 2 + np.abs(resp.drop) ** 2
    pass_err = float(np.max(np.abs(total - 1.0)))

    idxs = circuit_mod.find_resonances(resp)
    fsr_err = math.inf
    if len(idxs) >= 2:
        lams = resp.lambdas[idxs]
        measured = float(np.min(np.diff(lams)))
        lam_mid = float(lams[0])
        predicted = lam_mid**2 / (circ.globals.n_g * ring.circumference_um)
        fsr_err = abs(measured - predicted) / predicted
    ok = t_null < 1e-10 and abs(t_drop - 1.0) < 1e-10 and pass_err < 1e-9 and fsr_err < 0.02
    return ok, _worst(
        ("null", t_null), ("drop-1", abs(t_drop - 1.0)),
        ("passivity", pass_err), ("fsr_rel", fsr_err),
    )


def check_sweep_oracle():
    circ = netlist.parse(netlist.bundled_netlist("three_ring"))
    spec = circuit_mod.SweepSpec(1.548, 1.552, 60)
    resp = circuit_mod.sweep(circ, spec)
    worst = 0.0
    for i, lam in enumerate(resp.lambdas):
        graph = circuit_mod.lower_to_sfg(circ, float(lam))
        for role, arr in (("through", resp.through), ("drop", resp.drop)):
            ref = sfg.linear_solve_transfer(graph, f"port.{role}")
            worst = max(worst, abs(arr[i] - ref))
    return worst < 1e-10, _worst(("max_sweep_err", worst))


def check_three_ring_pipeline():
    circ = netlist.parse(netlist.bundled_netlist("three_ring"))
    spec = circuit_mod.SweepSpec(1.54, 1.56, 2000)
    frame = OscillatorFrame()

    quiet = circuit_mod.FwmPump(pump_power=0.0, gamma_nl=100.0,
                                interaction_length=2e-5)
    reports0 = circuit_mod.squeezing_report(circ, quiet, spec, frame)
    if not reports0:
        return False, "no resonances found"
    if any(rep.r != 0.0 or abs(rep.product - 0.5) > 1e-12 for rep in reports0):
        return False, "zero pump did not give vacuum variances"

    pump = circuit_mod.FwmPump(pump_power=0.05, gamma_nl=100.0,
                               interaction_length=2e-5)
    reports = circuit_mod.squeezing_report(circ, pump, spec, frame)
    worst = 0.0
    for rep in reports:
        if rep.near_pole or not rep.r > 0.0:
            return False, f"resonance at {rep.lambda_res_um} gave r={rep.r}"
        target = 0.5 * math.exp(-2.0 * rep.r)
        worst = max(worst, abs(rep.var_x - target) / target)
    return worst < 1e-6, _worst(("n_res", float(len(reports))), ("var_rel", worst))


# --- wavepacket / netlist / determinism -------------------------------------


def check_wavepacket():
    params = wavepacket.WavePacketParams()  # C=5, x0=5, w0=1, p0=0
    grid = wavepacket.DisplacementGrid()  # [0, 10] x 1001
    dens = wavepacket.density_profile(params, grid)
    xs = grid.xs()
    peak_ok = abs(dens[np.argmax(dens)] - 25.0) < 1e-12 and xs[np.argmax(dens)] == 5.0
    shifted = wavepacket.density_profile(
        wavepacket.WavePacketParams(p0=10.0), grid
    )
    p0_ok = np.array_equal(dens, shifted)

    cnorm = wavepacket.normalization_amplitude(1.0)
    nparams = wavepacket.WavePacketParams(C=cnorm, x0=5.0, w0=1.0)
    integral = float(np.trapezoid(wavepacket.density_profile(nparams, grid), xs))
    norm_ok = abs(integral - 1.0) < 1e-6

    wide = wavepacket.WavePacketParams(C=cnorm, x0=5.0, w0=1.0)
    narrow = wavepacket.squeezed_width(wide, 0.5)
    fine = wavepacket.DisplacementGrid(-5.0, 15.0, 8001)
    xs_f = fine.xs()

    def second_moment(p):
        d = wavepacket.density_profile(p, fine)
        mass = np.trapezoid(d, xs_f)
        return float(np.trapezoid(d * (xs_f - p.x0) ** 2, xs_f) / mass)

    ratio = second_moment(narrow) / second_moment(wide)
    width_ok = abs(ratio - math.exp(-1.0)) / math.exp(-1.0) < 1e-6
    ok = peak_ok and p0_ok and norm_ok and width_ok
    return ok, _worst(("integral_err", abs(integral - 1.0)),
                      ("width_rel", abs(ratio - math.exp(-1.0)) / math.exp(-1.0)))


def check_netlist_roundtrip():
    for name in ("add_drop", "three_ring"):
        circ = netlist.parse(netlist.bundled_netlist(name))
        if netlist.parse(netlist.render(circ)) != circ:
            return False, f"round-trip mismatch for {name}"
        if any(d.severity == "error" for d in netlist.validate(circ)):
            return False, f"bundled {name} has validation errors"
    bad = netlist.bundled_netlist("add_drop").replace("kappa=0.2", "kappa=1.2", 1)
    try:
        netlist.parse(bad)
        return False, "kappa=1.2 accepted"
    except netlist.NetlistSemanticError:
        pass
    return True, "round-trip + range rejection"


def check_determinism():
    circ = netlist.parse(netlist.bundled_netlist("add_drop"))
    spec = circuit_mod.SweepSpec(1.54, 1.56, 200)

    def run_once():
        resp = circuit_mod.sweep(circ, spec)
        buf = io.StringIO()
        for i in range(len(resp.lambdas)):
            buf.write(
                f"{resp.lambdas[i]:.17g},{resp.through[i].real:.17g},"
                f"{resp.through[i].imag:.17g},{resp.drop[i].real:.17g},"
                f"{resp.drop[i].imag:.17g}\n"
            )
        return buf.getvalue()

    ok = run_once() == run_once()
    return ok, "sweep bytes reproducible"


CHECKS = (
    ("fock.commutator_block", check_commutator),
    ("fock.unitarity_composition", check_unitarity_composition),
    ("fock.minimum_uncertainty_scan", check_minimum_uncertainty),
    ("fock.variance_closed_forms", check_variance_closed_forms),
    ("fock.squeezed_vacuum_statistics", check_photon_statistics),
    ("fock.coherent_poisson", check_coherent_poisson),
    ("fock.dim_convergence", check_dim_convergence),
    ("fock.wigner_sanity", check_wigner),
    ("sfg.mason_vs_linear_1000", check_mason_vs_linear),
    ("sfg.loop_determinism", check_loop_determinism),
    ("circuit.add_drop_physics", check_add_drop_physics),
    ("circuit.sweep_equals_linear_solve", check_sweep_oracle),
    ("circuit.three_ring_pipeline", check_three_ring_pipeline),
    ("wavepacket.contracts", check_wavepacket),
    ("netlist.round_trip", check_netlist_roundtrip),
    ("determinism.sweep_bytes", check_determinism),
)


def run_all():
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, ok=ok, detail=detail))
    return results
