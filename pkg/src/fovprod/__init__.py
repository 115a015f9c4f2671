"""Numerical ranges, product sets W(A)W(B), and rank-one witnesses for spectral containment."""

from .errors import (
    ConvergenceFailure,
    FovError,
    HypothesisNotMet,
    Inconclusive,
    InvalidMatrix,
    NonHermitianInput,
    NonUnitary,
    NotNormalized,
    NotRadialoid,
    PeakNotAttained,
    ZeroVector,
)
from .matcore import (
    EigenPair,
    SpectrumSet,
    direct_sum,
    eig_general,
    eig_hermitian,
    hermitian_part,
    rank_one,
    unitary_conjugate,
)
from .numrange import RadiiReport, RangeApprox, Verdict, compute_range, contains_point, corner_support_lines, radii, support_value
from .productset import (
    ContainmentReport,
    ProductSet,
    ProductVerdict,
    containment_check,
    product_convexity_probe,
    product_membership,
    sample_product_set,
)
from .classify import (
    ClassificationReport,
    Decomposition,
    check_lemma_disk,
    decompose_at_peak,
    is_psd_multiple,
    radialoid_check,
    theorem_hypotheses,
)
from .witness import (
    WitnessCertificate,
    falsify,
    random_rank_one_search,
    witness_corner,
    witness_lemma_disk,
)
from .repro import ReproResult, run_repro

__version__ = "0.1.0"
