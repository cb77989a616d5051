"""Post-selected weak-measurement metrology laboratory.

Library layout:

- ``states``      two-level system, selection geometry, weak values
- ``densities``   tabulated readout densities and quadrature oracles
- ``estimators``  closed-form moments, difference estimator, SNR, Fisher info
- ``noise``       technical-noise models for both readout bases
- ``mc``          particle-level Monte Carlo engine and oracle comparison
- ``sweep``       parameter sweeps, figure presets, CSV/JSON emission
- ``plotting``    figure rendering for sweep outputs
"""

from .errors import (
    AllTrialsSingular,
    ConfigError,
    DegenerateModification,
    GridTooNarrow,
    OrthogonalPostSelection,
    SingularCombination,
    UnknownPreset,
    WvmetroError,
)
from .states import (
    Basis,
    Branch,
    MeterConfig,
    SpinState,
    SystemConfig,
    branch_amplitudes,
    complement,
    imaginary_weak_value_config,
    overlap,
    real_weak_value_config,
    selection_probabilities,
    weak_value,
)
from .densities import GridSpec, PdfGrid, difference_pdf, pdf_p, pdf_x
from .estimators import (
    ConditionalMoments,
    DcsvEstimate,
    FisherReport,
    Scheme,
    analytic_dcsv,
    conditional_mean_x,
    conditional_moments_p,
    conditional_moments_x,
    conditional_variance_x,
    dcsv_balanced_limit,
    dcsv_combine,
    effective_fi,
    expected_partition,
    fisher_information,
    fisher_report,
    snr,
    snr_cm,
)
from .noise import (
    NoiseKind,
    NoiseSpec,
    NoisyMoments,
    find_critical_jp,
    noisy_dcsv,
    noisy_moments_p_p0,
    noisy_moments_p_x0,
    noisy_moments_x,
    noisy_pdf,
    noisy_selection_probabilities,
    noisy_snr_jwm,
)
from .mc import (
    ComparisonReport,
    EnsembleStats,
    SamplerTable,
    TrialResult,
    oracle_compare,
    run_ensemble,
    run_trial,
    sample_particle,
)
from .sweep import (
    Axis,
    FixedParams,
    Mode,
    Quantity,
    SeriesSpec,
    SweepConfig,
    SweepResult,
    emit_config,
    figure_preset,
    load_config,
    parse_config,
    preset_names,
    run_compare,
    run_sweep,
    write_result,
)
from .plotting import figure_path_for, render_figure

__version__ = "0.1.0"
