"""Line-oriented netlist parser for ring circuits.

Grammar (one statement per line, ``#`` starts a comment, keywords are
case-sensitive, statements ordered globals / elements / ports / couplers)::

    globals neff=<float> ng=<float> loss_db_cm=<float>
    ring  <name> radius_um=<float>
    bus   <name>
    port  <input|through|drop|add> on <bus-name>.<left|right>
    coupler <name> <elemA> <elemB> kappa=<float in [0,1]>

Lengths are um, fixed by the field name.  Couplers are lossless 2x2
junctions: through amplitude sqrt(1-kappa), cross amplitude i*sqrt(kappa).
"""

import re
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "OpticalGlobals",
    "RingSpec",
    "BusSpec",
    "Port",
    "CouplerSpec",
    "RingCircuit",
    "Diagnostic",
    "NetlistError",
    "NetlistSyntaxError",
    "NetlistSemanticError",
    "parse",
    "validate",
    "render",
    "bundled_netlist",
]

PORT_ROLES = ("input", "through", "drop", "add")
BUS_ENDS = ("left", "right")
_ENTRY_ROLES = ("input", "add")

DEFAULT_GLOBALS = None  # set after OpticalGlobals is defined


class NetlistError(Exception):
    pass


class NetlistSyntaxError(NetlistError):
    def __init__(self, line, column, expected, found):
        super().__init__(
            f"line {line}, column {column}: expected {expected}, found {found!r}"
        )
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class NetlistSemanticError(NetlistError):
    def __init__(self, message, line=None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str


@dataclass(frozen=True)
class OpticalGlobals:
    n_eff: float = 3.47
    n_g: float = 3.6
    loss_db_per_cm: float = 3.0


DEFAULT_GLOBALS = OpticalGlobals()


@dataclass(frozen=True)
class RingSpec:
    name: str
    radius_um: float

    @property
    def circumference_um(self) -> float:
        return 2.0 * 3.141592653589793 * self.radius_um


@dataclass(frozen=True)
class BusSpec:
    name: str


@dataclass(frozen=True)
class Port:
    role: str
    bus: str
    end: str


@dataclass(frozen=True)
class CouplerSpec:
    name: str
    element_a: str
    element_b: str
    kappa: float
    lossless: bool = True


@dataclass(frozen=True)
class RingCircuit:
    rings: tuple = ()
    buses: tuple = ()
    couplers: tuple = ()
    input_port: Port | None = None
    through_port: Port | None = None
    drop_port: Port | None = None
    add_port: Port | None = None
    globals: OpticalGlobals = field(default_factory=OpticalGlobals)

    def ports(self):
        return tuple(
            p
            for p in (self.input_port, self.through_port, self.drop_port, self.add_port)
            if p is not None
        )

    def ring(self, name):
        for r in self.rings:
            if r.name == name:
                return r
        raise KeyError(name)

    def element_names(self):
        return {r.name for r in self.rings} | {b.name for b in self.buses}


_TOKEN_RE = re.compile(r"\S+")

_STAGES = {"globals": 0, "ring": 1, "bus": 1, "port": 2, "coupler": 3}
_STAGE_NAMES = {0: "globals", 1: "element (ring/bus)", 2: "port", 3: "coupler"}


def _tokens(text_line):
    return [(m.start() + 1, m.group()) for m in _TOKEN_RE.finditer(text_line)]


def _kv_float(tok, col, key, lineno):
    head, sep, tail = tok.partition("=")
    if head != key or not sep:
        raise NetlistSyntaxError(lineno, col, f"{key}=<float>", tok)
    try:
        return float(tail)
    except ValueError:
        raise NetlistSyntaxError(
            lineno, col + len(key) + 1, "a floating-point value", tail
        ) from None


def _expect_count(toks, count, what, lineno):
    if len(toks) != count:
        col = toks[-1][0] + len(toks[-1][1]) if len(toks) > count else 1
        raise NetlistSyntaxError(lineno, col, what, f"{len(toks) - 1} argument(s)")


def parse(text: str) -> RingCircuit:
    """Parse netlist text into a validated :class:`RingCircuit`.

    Raises :class:`NetlistSyntaxError` with line/column for grammar errors
    and :class:`NetlistSemanticError` for reference/range/topology errors.
    """
    globals_ = None
    rings, buses, couplers = [], [], []
    ports = {}
    stage = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col0, keyword = toks[0]
        if keyword not in _STAGES:
            raise NetlistSyntaxError(
                lineno, col0, "one of globals/ring/bus/port/coupler", keyword
            )
        kstage = _STAGES[keyword]
        if kstage < stage:
            raise NetlistSyntaxError(
                lineno,
                col0,
                f"a {_STAGE_NAMES[stage]} statement or later "
                "(order is globals, elements, ports, couplers)",
                keyword,
            )
        stage = kstage

        if keyword == "globals":
            _expect_count(toks, 4, "globals neff=<f> ng=<f> loss_db_cm=<f>", lineno)
            if globals_ is not None:
                raise NetlistSemanticError("duplicate globals statement", lineno)
            globals_ = OpticalGlobals(
                n_eff=_kv_float(toks[1][1], toks[1][0], "neff", lineno),
                n_g=_kv_float(toks[2][1], toks[2][0], "ng", lineno),
                loss_db_per_cm=_kv_float(toks[3][1], toks[3][0], "loss_db_cm", lineno),
            )
        elif keyword == "ring":
            _expect_count(toks, 3, "ring <name> radius_um=<float>", lineno)
            name = toks[1][1]
            radius = _kv_float(toks[2][1], toks[2][0], "radius_um", lineno)
            if any(r.name == name for r in rings) or any(b.name == name for b in buses):
                raise NetlistSemanticError(f"duplicate element name {name!r}", lineno)
            rings.append(RingSpec(name=name, radius_um=radius))
        elif keyword == "bus":
            _expect_count(toks, 2, "bus <name>", lineno)
            name = toks[1][1]
            if any(r.name == name for r in rings) or any(b.name == name for b in buses):
                raise NetlistSemanticError(f"duplicate element name {name!r}", lineno)
            buses.append(BusSpec(name=name))
        elif keyword == "port":
            _expect_count(toks, 4, "port <role> on <bus>.<end>", lineno)
            role = toks[1][1]
            if role not in PORT_ROLES:
                raise NetlistSyntaxError(
                    lineno, toks[1][0], "one of input/through/drop/add", role
                )
            if toks[2][1] != "on":
                raise NetlistSyntaxError(lineno, toks[2][0], "'on'", toks[2][1])
            target = toks[3][1]
            bus_name, sep, end = target.partition(".")
            if not sep or end not in BUS_ENDS:
                raise NetlistSyntaxError(
                    lineno, toks[3][0], "<bus>.<left|right>", target
                )
            if role in ports:
                raise NetlistSemanticError(f"duplicate {role} port", lineno)
            ports[role] = Port(role=role, bus=bus_name, end=end)
        else:  # coupler
            _expect_count(toks, 5, "coupler <name> <elemA> <elemB> kappa=<float>", lineno)
            name = toks[1][1]
            if any(c.name == name for c in couplers):
                raise NetlistSemanticError(f"duplicate coupler name {name!r}", lineno)
            kappa = _kv_float(toks[4][1], toks[4][0], "kappa", lineno)
            couplers.append(
                CouplerSpec(
                    name=name,
                    element_a=toks[2][1],
                    element_b=toks[3][1],
                    kappa=kappa,
                )
            )

    circuit = RingCircuit(
        rings=tuple(rings),
        buses=tuple(buses),
        couplers=tuple(couplers),
        input_port=ports.get("input"),
        through_port=ports.get("through"),
        drop_port=ports.get("drop"),
        add_port=ports.get("add"),
        globals=globals_ if globals_ is not None else DEFAULT_GLOBALS,
    )
    errors = [d for d in validate(circuit) if d.severity == "error"]
    if errors:
        raise NetlistSemanticError("; ".join(d.message for d in errors))
    return circuit


def _bus_port_layout(circuit):
    """Per-bus {end: [ports]} split into entry (input/add) and exit roles."""
    layout = {b.name: {"entry": [], "exit": []} for b in circuit.buses}
    for p in circuit.ports():
        if p.bus in layout:
            kind = "entry" if p.role in _ENTRY_ROLES else "exit"
            layout[p.bus][kind].append(p)
    return layout


def validate(circuit: RingCircuit) -> list:
    """All invariant checks; empty list iff the circuit is fully valid.

    Errors make the circuit unusable; warnings flag odd but legal values.
    """
    out = []
    err = lambda m: out.append(Diagnostic("error", m))
    warn = lambda m: out.append(Diagnostic("warning", m))

    names = circuit.element_names()
    if len(names) != len(circuit.rings) + len(circuit.buses):
        err("element names are not unique")

    for r in circuit.rings:
        if not r.radius_um > 0.0:
            err(f"ring {r.name!r}: radius must be positive, got {r.radius_um}")
    g = circuit.globals
    if not g.n_eff > 0.0:
        err(f"globals: n_eff must be positive, got {g.n_eff}")
    if not g.n_g > 0.0:
        err(f"globals: n_g must be positive, got {g.n_g}")
    if g.loss_db_per_cm < 0.0:
        err(f"globals: loss_db_cm must be >= 0, got {g.loss_db_per_cm}")
    elif g.loss_db_per_cm == 0.0:
        warn("globals: loss is zero (ideal lossless propagation)")

    for c in circuit.couplers:
        for el in (c.element_a, c.element_b):
            if el not in names:
                err(f"coupler {c.name!r}: unknown element {el!r}")
        if c.element_a == c.element_b:
            err(f"coupler {c.name!r}: endpoints must be two distinct elements")
        if not 0.0 <= c.kappa <= 1.0:
            err(
                f"coupler {c.name!r}: kappa={c.kappa} outside the allowed "
                "power-coupling range [0, 1]"
            )
        elif c.kappa == 0.0:
            warn(f"coupler {c.name!r}: kappa=0, element optically isolated")

    if circuit.input_port is None:
        err("exactly one input port is required")
    bus_names = {b.name for b in circuit.buses}
    for p in circuit.ports():
        if p.bus not in bus_names:
            err(f"port {p.role}: unknown bus {p.bus!r}")
    for bus, kinds in _bus_port_layout(circuit).items():
        if len(kinds["entry"]) > 1:
            err(f"bus {bus!r}: more than one entry port (input/add)")
        if len(kinds["exit"]) > 1:
            err(f"bus {bus!r}: more than one exit port (through/drop)")
        if kinds["entry"] and kinds["exit"]:
            if kinds["entry"][0].end == kinds["exit"][0].end:
                err(
                    f"bus {bus!r}: entry and exit ports must sit on opposite ends"
                )

    # couplers seen per element, for reference and reachability checks
    attached = {n: [] for n in names}
    for c in circuit.couplers:
        if c.element_a in attached and c.element_b in attached:
            attached[c.element_a].append(c)
            attached[c.element_b].append(c)

    for r in circuit.rings:
        if not attached.get(r.name):
            err(f"ring {r.name!r} is referenced by no coupler (disconnected)")

    ring_names = {r.name for r in circuit.rings}
    bus_coupled = {
        n
        for n in ring_names
        if any(
            (c.element_a in bus_names or c.element_b in bus_names)
            for c in attached.get(n, ())
        )
    }
    for c in circuit.couplers:
        if (
            c.element_a in ring_names
            and c.element_b in ring_names
            and c.element_a not in bus_coupled
            and c.element_b not in bus_coupled
        ):
            warn(
                f"coupler {c.name!r} joins two inner rings "
                f"({c.element_a!r}, {c.element_b!r}); usually avoided by gap design"
            )

    if circuit.input_port is not None and circuit.input_port.bus in names:
        reachable = {circuit.input_port.bus}
        frontier = [circuit.input_port.bus]
        while frontier:
            el = frontier.pop()
            for c in attached.get(el, ()):
                for other in (c.element_a, c.element_b):
                    if other in names and other not in reachable:
                        reachable.add(other)
                        frontier.append(other)
        for n in sorted(names - reachable):
            err(f"element {n!r} is not connected to the input port")

    return out


def render(circuit: RingCircuit) -> str:
    """Canonical netlist text; parse(render(c)) == c."""
    g = circuit.globals
    lines = [f"globals neff={g.n_eff!r} ng={g.n_g!r} loss_db_cm={g.loss_db_per_cm!r}"]
    for r in circuit.rings:
        lines.append(f"ring {r.name} radius_um={r.radius_um!r}")
    for b in circuit.buses:
        lines.append(f"bus {b.name}")
    for p in circuit.ports():
        lines.append(f"port {p.role} on {p.bus}.{p.end}")
    for c in circuit.couplers:
        lines.append(f"coupler {c.name} {c.element_a} {c.element_b} kappa={c.kappa!r}")
    return "\n".join(lines) + "\n"


def bundled_netlist(name: str) -> str:
    """Text of a netlist shipped with the package ('add_drop', 'three_ring')."""
    return (
        resources.files("sqring.netlists").joinpath(f"{name}.net").read_text("utf-8")
    )
