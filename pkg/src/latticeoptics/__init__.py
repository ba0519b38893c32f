"""Triangular multiport interferometers: generators, synthesis and decomposition."""
from .exceptions import (
    CapacityError,
    ClosureError,
    ConsistencyError,
    LatticeError,
    NotHermitianError,
    NotUnitaryError,
    PreconditionError,
)
from .generators import (
    FockBasis,
    GeneratorSet,
    ParticleSpec,
    build_generator_set,
    diag_z,
    eta,
    fock_basis,
    ggm_x,
    ggm_y,
    parse_spec,
    phase_projector,
    spin_x,
    spin_y,
    su3_check,
    swap_permutation,
)
from .lattice import (
    LatticeParams,
    ReflectivityGrid,
    assemble_unitary,
    path_count,
    recursion_build,
    synthesize,
)
from .matrix import direct_sum, expm_hermitian, expm_taylor, is_hermitian, is_unitary, kron
from .solver import DecompositionResult, decompose, verify_roundtrip
from .targets import (
    Scenario,
    bell_scattering,
    boson_bs_oracle,
    dft,
    hom_3port_simulation,
    path_assignment_oracle,
    wigner_d,
)

__version__ = "0.1.0"


def __getattr__(name):
    # keeps scikit-learn an import-time cost only for estimator users
    if name == "TriangularInterferometer":
        from .estimator import TriangularInterferometer

        return TriangularInterferometer
    raise AttributeError(name)
