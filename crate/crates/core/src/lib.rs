//! Entanglement-production lower bounds on the entanglement cost of
//! two-qubit orthogonal measurements.
//!
//! Attach auxiliary qubits C,D to the measured pair A,B in the probe state
//! `½ Σᵢ |ψᵢ⟩_AB |φᵢ⟩_CD`. Measuring A,B collapses C,D onto a detector state,
//! and since LOCC cannot raise entanglement on average, the mean detector
//! entanglement minus the initial `AC:BD` entanglement bounds the cost of the
//! measurement from below. The crate evaluates that bound, maximizes its gap
//! above the entropy bound over detector states, and sweeps the canonical
//! parameter space of two-qubit orthonormal bases.
//!
//! The bound also holds per pair when the same measurement is applied to many
//! pairs at once, since both entanglements scale with the number of pairs; no
//! many-copy construction is built here.

pub mod bound;
pub mod config;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod output;
pub mod par;
pub mod random;
pub mod search;
pub mod sweep;
pub mod tolerance;

pub use bound::{chi_state, cut_entanglement, lower_bound, BoundReport, Detector, Probe, PAIRINGS};
pub use error::{Error, Result};
pub use linalg::{
    concurrence, entropy_of_entanglement, inner_product, permute_subsystems, schmidt_spectrum,
    tensor, BipartiteSplit, SchmidtSpectrum, StateVec, C64,
};
pub use measurement::{
    apply_local_unitary, build_basis, entropy_bound, special_basis, special_basis_by_name,
    validate_orthonormal, CanonicalParams, OrthoBasis, OrthoCheck, SpecialBasis, Unitary2,
};
pub use output::{read_csv, scatter_svg, write_csv, write_scatter_svg, CSV_HEADER};
pub use par::Execution;
pub use search::{
    classify, detector_candidates, maximize_delta, maximize_delta_in, maximize_delta_seeded,
    Classification, DetectorCandidates, GridSpec, SearchMode, SearchResult,
};
pub use sweep::{
    run_sweep, search_params, sweep_records, verify_special_cases, SpecialCaseReport, SweepRecord,
    SweepSummary,
};
