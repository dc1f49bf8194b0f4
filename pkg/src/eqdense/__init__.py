"""Expected density and number of internal equilibria of random
multi-player multi-strategy evolutionary games.

The package computes the equilibrium density f_{n,d} in several independent
formulations, integrates it into expected counts E(n, d), verifies the
closed-form identities, bounds, and monotonicity properties those quantities
satisfy, and cross-validates everything against Monte Carlo sampling of
random games with exact real-root counting.
"""

from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateSystemError,
    NumericalDegeneracyError,
    VerificationFailure,
)
from .poly_core import (
    GameDims,
    LegendreValue,
    UniPoly,
    WeightedMoments,
    legendre_eval,
    legendre_identity_residual,
    m_poly,
    multinomial,
    weighted_moments,
)
from .density import (
    DensityBounds,
    DensityPoint,
    density_bounds,
    f2d,
    f2d_closed,
    f2d_via_G,
    f2d_via_legendre,
    f2d_via_legendre_pair,
    f_elliptic,
    fn2,
    fn2_bounds,
    fnd_general,
    g2d,
)
from .expectation import (
    ExpectationResult,
    QuadratureConfig,
    asymptotic_ratio,
    bernstein_expected,
    elliptic_expected,
    expected_count_2d,
    expected_count_nd,
    lower_bound_E2,
    stable_expected_2d,
    upper_bound_E2,
)
from .realroots import (
    BiPoly,
    RootBox,
    Stability,
    SturmChain,
    classify_stability_2,
    count_positive_roots,
    count_positive_system_roots,
    isolate_positive_roots,
    positive_system_roots,
    squarefree,
    sturm_chain,
    sylvester_resultant,
    verify_m_factorization,
)
from .montecarlo import (
    Histogram,
    IndependentBeta,
    MCConfig,
    MCResult,
    PayoffAlpha,
    count_sample_2,
    count_sample_3,
    equilibria_histogram,
    run_mc,
    sample_game,
)

__version__ = "0.1.0"
