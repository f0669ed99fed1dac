//! Measurement sweeps and the exceptional-case check.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bound::BoundReport;
use crate::error::Result;
use crate::measurement::{
    apply_local_unitary, build_basis, entropy_bound, special_basis, CanonicalParams, OrthoBasis,
    SpecialBasis,
};
use crate::output::write_csv;
use crate::par::{self, Execution};
use crate::random::haar_unitary;
use crate::search::{detector_candidates, maximize_delta_seeded, GridSpec, SearchResult};
use crate::tolerance::DELTA_TOL;

/// One row of sweep output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub measurement_params: CanonicalParams,
    pub entropy_bound: f64,
    pub best_cl: f64,
    pub delta: f64,
    pub positive: bool,
    pub evaluations: u64,
}

impl SweepRecord {
    fn from_result(params: CanonicalParams, result: &SearchResult) -> Self {
        SweepRecord {
            measurement_params: params,
            entropy_bound: result.best.entropy_bound,
            best_cl: result.best.lower_bound,
            delta: result.best.delta,
            positive: result.positive,
            evaluations: result.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub n_points: usize,
    pub n_strict: usize,
    pub max_delta: f64,
    pub runtime: Duration,
}

/// Searches detectors for the measurement with canonical parameters `p`.
///
/// Besides the configured candidates, the detectors with all phases of `p`
/// negated are refined as well: they form the complex-conjugate basis, which
/// meets the entropy bound exactly and is a good place to climb from.
pub fn search_params(
    p: &CanonicalParams,
    det_spec: &GridSpec,
    exec: Execution,
) -> Result<SearchResult> {
    maximize_delta_seeded(&build_basis(p), det_spec, &[p.mirrored()], exec)
}

/// One record per measurement candidate of `meas_spec`, in candidate order.
///
/// The output is independent of `workers`.
pub fn sweep_records(
    meas_spec: &GridSpec,
    det_spec: &GridSpec,
    workers: usize,
) -> Result<Vec<SweepRecord>> {
    let points = detector_candidates(meas_spec)?;
    det_spec.validate()?;
    let n = usize::try_from(points.len())
        .map_err(|_| crate::Error::Spec("measurement grid too large".into()))?;
    let exec = if workers <= 1 {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let results = par::with_workers(workers, || {
        par::map_indexed(exec, n, |i| {
            let p = points.get(i as u64);
            search_params(&p, det_spec, Execution::Sequential)
                .map(|r| SweepRecord::from_result(p, &r))
        })
    });
    results.into_iter().collect()
}

/// Runs the sweep and writes its CSV to `out`.
pub fn run_sweep(
    meas_spec: &GridSpec,
    det_spec: &GridSpec,
    workers: usize,
    out: &Path,
) -> Result<(Vec<SweepRecord>, SweepSummary)> {
    let start = Instant::now();
    let records = sweep_records(meas_spec, det_spec, workers)?;
    write_csv(&records, out)?;
    let summary = SweepSummary {
        n_points: records.len(),
        n_strict: records.iter().filter(|r| r.delta > DELTA_TOL).count(),
        max_delta: records
            .iter()
            .map(|r| r.delta)
            .fold(f64::NEG_INFINITY, f64::max),
        runtime: start.elapsed(),
    };
    Ok((records, summary))
}

/// Result for one exceptional basis or one of its local-unitary images.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialCaseOutcome {
    pub basis: SpecialBasis,
    /// `None` for the basis itself, `Some(k)` for the k-th random image.
    pub image: Option<usize>,
    pub best: BoundReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialCaseReport {
    pub outcomes: Vec<SpecialCaseOutcome>,
}

impl SpecialCaseReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Number of random local-unitary images checked per exceptional basis.
pub const LOCAL_IMAGES: usize = 5;

/// Tolerance on the attained bound for the product and Bell bases.
pub const SPECIAL_CL_TOL: f64 = 1e-6;

/// Maximizes the gap for the product, Bell and case-(iii) bases and
/// [`LOCAL_IMAGES`] random local-unitary images of each.
///
/// Every case must have `δ ≤ DELTA_TOL`; additionally the product basis must
/// reach `C_L = 0`, the Bell basis `C_L = 1`, and case (iii) must have entropy
/// bound `0.5`.
pub fn verify_special_cases(det_spec: &GridSpec, seed: u64) -> Result<SpecialCaseReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs: Vec<(SpecialBasis, Option<usize>, OrthoBasis)> = Vec::new();
    for which in SpecialBasis::ALL {
        let base = special_basis(which);
        jobs.push((which, None, base.clone()));
        for k in 0..LOCAL_IMAGES {
            let (ua, ub) = (haar_unitary(&mut rng), haar_unitary(&mut rng));
            jobs.push((which, Some(k), apply_local_unitary(&base, &ua, &ub)));
        }
    }
    let results = par::map_indexed(Execution::default(), jobs.len(), |i| {
        let r = crate::search::maximize_delta_in(&jobs[i].2, det_spec, Execution::Sequential)?;
        Ok::<_, crate::Error>((r, entropy_bound(&jobs[i].2)))
    });
    let mut outcomes = Vec::with_capacity(jobs.len());
    for ((which, image, _), res) in jobs.into_iter().zip(results) {
        let (r, eb) = res?;
        let best = r.best;
        let passed = best.delta <= DELTA_TOL
            && match which {
                SpecialBasis::Product => best.lower_bound.abs() <= SPECIAL_CL_TOL,
                SpecialBasis::Bell => (best.lower_bound - 1.0).abs() <= SPECIAL_CL_TOL,
                SpecialBasis::CaseIii => (eb - 0.5).abs() <= 1e-12,
            };
        outcomes.push(SpecialCaseOutcome {
            basis: which,
            image,
            best,
            passed,
        });
    }
    Ok(SpecialCaseReport { outcomes })
}
