"""PXP-chain toolkit: constrained-space operators, forward-scattering and
Lanczos chains, spread complexity, and revival optimization."""

from .analytic import (QFit, beta3_z2, beta_vacuum, beta_vacuum_perturbed,
                       delta3_z2, error3_vacuum, fit_q, qnumber, su2_beta)
from .dynamics import (ConvergenceTable, EigenSystem, TimeSeries,
                       complexity_convergence, cross_correlation,
                       diagonal_ensemble, eigendecompose, expectation_series,
                       return_probability, return_probability_lanczos,
                       spread_complexity, time_grid)
from .errors import (CapacityError, ConfigurationError, DomainError, FitError,
                     InputError, PxpError, SizeError)
from .hilbert import (ConstrainedBasis, SpinConfiguration, StateVector,
                      count_sector, enumerate_basis, hamming_from_vacuum,
                      special_state, translate)
from .krylov import (FsaData, KrylovData, TridiagonalHamiltonian, fsa,
                     fsa_error_profile, lanczos, tridiagonal)
from .operators import (LadderPair, ModelConfig, SparseHamiltonian,
                        algebra_defect, assemble, build_pxp, build_term,
                        free_paramagnet, ladder_split, matvec,
                        next_nearest_pair_density, up_density)
from .optimize import (Objective, OptimResult, optimize_vector, revival_height,
                       scan_1d)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
