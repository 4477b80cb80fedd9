"""Lower-bound machinery for the restricted isometry property of subsampled
finite-field Fourier matrices: shattering tests, kernel certificates, exact
probability bounds and Monte Carlo checks."""

from .bounds import (
    BoundValue,
    claim2_lower,
    claim3_upper,
    coupon_exact,
    coupon_exact_rational,
    family_threshold,
    subspace_count,
    theorem_chain,
    theorem_chain_paper_ell,
)
from .family import SubspaceFamily, build_family, random_subspace, verify_family
from .field import (
    FieldError,
    FieldParams,
    Subspace,
    enumerate_subspace,
    intersection_dim,
    rref,
    signature,
    subspace_from_spanning,
)
from .fourier import RipEstimate, apply, fourier_submatrix, rip_epsilon
from .montecarlo import (
    ExperimentConfig,
    TrialSummary,
    mc_boost_split,
    mc_family_failure,
    mc_pair_subspaces,
    mc_single_subspace,
)
from .shattering import SampleSeq, ShatterReport, SparseCertificate, kernel_certificate, shatters

__version__ = "0.1.0"
