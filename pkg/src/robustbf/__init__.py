"""Robust Capon beamforming: covariance-uncertainty-aware weight solvers,
unbalanced diagonal loading for DoA spectra, and a seeded Monte-Carlo harness."""

from .array_model import (ArrayGeometry, SnapshotSet, Source, SourceScenario, generate_snapshots,
                          interference_noise_covariance, mvdr_weights, output_sinr, paper_scenario,
                          steering_matrix, steering_vector, true_covariance)
from .beamformers import (Beamformer, LoadingSolution, QuadraticRegularized, Singleton,
                          SpectrumGrid, beamformer_power, capon_spectrum, capon_weights,
                          default_grid, globally_robust_loading, music_pseudospectrum,
                          quartic_objective, quartic_regularized_weights,
                          regularized_constraint_weights, udl_loaded_covariance, udl_spectrum,
                          worst_case_power)
from .covariance import (EigenDecomposition, GammaSpec, SubspacePartition, bayesian_combine,
                         diagonal_load, eigen_threshold, eigendecompose, gamma_matrix,
                         partition_subspaces, sample_covariance, sample_interval_member)
from .errors import (BeamformingError, ConvergenceError, InfeasibleConstraintError,
                     SingularCovarianceError)
from .experiment import (Bayesian, Capon, CaponDL, CaponUDL, ConstraintSpec, EigThreshold,
                         ExperimentConfig, GloballyRobust, MonteCarloResult, Music, PriorSpec,
                         RunRecord, paper_config, run_monte_carlo, table_config, trial_seed)
from .metrics import (PatternEnsemble, dispersion, dispersion_contributions, find_peaks,
                      normalize_pattern, one_sided_robustness_measure, resolution_check)

__version__ = "0.1.0"
