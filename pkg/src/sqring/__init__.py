"""Squeezed-light microring toolkit.

Truncated-Fock quantum optics (displacement/squeeze operators, variances,
photon statistics, Wigner maps), a Mason's-rule signal-flow engine for
coupled-ring spectra, a Gaussian wave-packet evaluator, and the netlist/CLI
front end tying them together.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .circuit import (
    FwmPump,
    ResonanceReport,
    SpectralResponse,
    SweepSpec,
    find_resonances,
    fwm_squeeze_parameter,
    lower_to_sfg,
    squeezing_report,
    sweep,
)
from .expm import ExpmError, expm
from .fock import (
    FockOperator,
    FockSpace,
    OscillatorFrame,
    QuantumState,
    SqueezeSpec,
    TruncationError,
    VarianceReport,
    WignerCoverageError,
    annihilation,
    creation,
    displacement,
    number_operator,
    parity_operator,
    photon_distribution,
    quadratures,
    required_dim,
    squeeze,
    squeezed_coherent_state,
    vacuum,
    variances,
    wigner,
)
from .netlist import (
    CouplerSpec,
    Diagnostic,
    NetlistError,
    NetlistSemanticError,
    NetlistSyntaxError,
    OpticalGlobals,
    RingCircuit,
    RingSpec,
    bundled_netlist,
    parse,
    render,
    validate,
)
from .sfg import (
    MasonDecomposition,
    PoleError,
    SignalFlowGraph,
    debug_dump,
    decompose,
    enumerate_loops,
    forward_paths,
    linear_solve_transfer,
    mason_transfer,
)
from .wavepacket import (
    DisplacementGrid,
    WavePacketParams,
    angular_frequency,
    density_profile,
    evaluate_psi,
    normalization_amplitude,
    squeezed_width,
)
