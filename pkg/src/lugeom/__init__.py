"""Local unitary equivalence and symplectic orbit geometry of multipartite pure states."""
from .equivalence import (
    bipartite_equiv,
    decide,
    diagonal_phase_match,
    spectra_match,
    three_qubit_equiv,
    zero_moment_equiv,
)
from .errors import LUGeomError
from .lie import LocalGenerator, TangentVector, commutator, embed, fundamental_field, su_basis
from .moment import (
    MomentImage,
    SortedTraceForm,
    in_cartan,
    moment_image,
    moment_pairing,
    reduced_density,
    sorted_trace_form,
)
from .oracle import optimizer_oracle
from .orbits import (
    MultiplicityProfile,
    OrbitReport,
    bipartite_dims,
    classify,
    coadjoint_dim,
    degeneracy,
    fs_form,
    kks_form,
    orbit_tangent,
)
from .state import (
    MultiIndex,
    PureState,
    SchmidtDecomposition,
    ghz,
    make_state,
    overlap,
    projective_distance,
    random_state,
    schmidt,
)
from .verdict import Certificate, EquivalenceVerdict
from .verifiers import (
    ObstructionResult,
    SDirection,
    appendix_a_matrix,
    ghz_fiber_check,
    obstruction,
    s_generator,
)

__version__ = "0.1.0"
