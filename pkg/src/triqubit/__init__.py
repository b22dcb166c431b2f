"""Entanglement dynamics of two qubits coupled pairwise to a probe qubit.

Simulates three-qubit evolution under pairwise Hamiltonians on pairs (1,3)
and (2,3), detects whether the pair Hamiltonians commute, extracts the
canonical commuting form, and tracks concurrence, tangle, entanglement of
formation and the residual three-way tangle of the non-interacting pair.
"""

from .evolution import (
    EvolutionPlan,
    KrausPair,
    MeasurementOutcome,
    NoFastpathError,
    NonFactorizedInitialStateError,
    evolve,
    evolve_commuting_closed_form,
    evolve_exact,
    evolve_fastpath,
    factor_probe,
    kraus_pair,
    make_plan,
    measure_probe,
    reduced_state_12,
    v_operators,
)
from .hamiltonians import (
    CommutingForm,
    NotCommutingError,
    NotRankOneError,
    PauliPairHamiltonian,
    canonical_commuting_form,
    commutes,
    heisenberg_chain,
    qnd_zz,
    split_local_and_entangling,
)
from .measures import (
    EntanglementReport,
    concurrence,
    eof_from_tangle,
    report,
    residual_tangle_ckw_oracle,
    residual_tangle_lambda,
    residual_tangle_poly,
    tangle,
    wootters_lambdas,
)
from .scenarios import (
    ConfigError,
    ScenarioConfig,
    SweepResult,
    emit_csv,
    load_config,
    parse_config,
    property_suite,
    residual_periodicity_check,
    run_sweep,
    suite_names,
)
from .states import (
    LocalRotation,
    apply_local,
    axis_eigenbasis,
    bipartite_12,
    bipartite_13,
    bipartite_23,
    fully_separable,
    ghz_general,
    raw_amplitudes,
    triple,
    zrt,
)

__version__ = "0.1.0"
