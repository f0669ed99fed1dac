//! Maximization of the bound's gap over detector bases.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bound::{BoundReport, Detector, Probe, PAIRINGS};
use crate::error::{Error, Result};
use crate::measurement::{CanonicalParams, OrthoBasis};
use crate::par::{self, Execution};
use crate::random::random_params;
use crate::tolerance::DELTA_TOL;

/// How candidate parameter points are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Cartesian grid over all eight parameters.
    FullGrid,
    /// `n_samples` uniform draws from a seeded generator.
    Random { n_samples: usize, seed: u64 },
    /// Cartesian grid followed by coordinate-descent refinement of the best
    /// grid points.
    GridThenRefine,
}

impl SearchMode {
    pub fn tag(&self) -> &'static str {
        match self {
            SearchMode::FullGrid => "full_grid",
            SearchMode::Random { .. } => "random",
            SearchMode::GridThenRefine => "grid_then_refine",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Step sizes and strategy for enumerating canonical parameters.
///
/// `angle_step` applies to `a, c, u`; `phase_step` to `b, d, v, y`; `x_step`
/// to `x`. Angle axes include both endpoints of `[0, π/2]`, phase axes are
/// `0, step, 2·step, …` strictly below `2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub angle_step: f64,
    pub phase_step: f64,
    pub x_step: f64,
    pub mode: SearchMode,
    /// Coordinate-descent rounds.
    pub refine_iters: usize,
    /// Step multiplier applied after each round, in `(0, 1)`.
    pub refine_shrink: f64,
    /// How many of the best grid points seed an independent refinement.
    pub refine_starts: usize,
}

impl GridSpec {
    /// Measurement grid of the original study: `π/24` for `a, c, u`, `π/12`
    /// for the phases and `π/16` for `x`.
    pub fn fine_measurement() -> Self {
        GridSpec {
            angle_step: PI / 24.0,
            phase_step: PI / 12.0,
            x_step: PI / 16.0,
            mode: SearchMode::FullGrid,
            refine_iters: 0,
            refine_shrink: 0.5,
            refine_starts: 1,
        }
    }

    /// Detector grid of the original study: half the measurement steps.
    /// Far too large to enumerate; kept for subset runs.
    pub fn fine_detector() -> Self {
        let m = Self::fine_measurement();
        GridSpec {
            angle_step: m.angle_step / 2.0,
            phase_step: m.phase_step / 2.0,
            x_step: m.x_step / 2.0,
            ..m
        }
    }

    /// Desk-scale measurement sweep: 3³·4⁴·3 = 20736 points.
    pub fn desk_measurement() -> Self {
        GridSpec {
            angle_step: PI / 4.0,
            phase_step: PI / 2.0,
            x_step: PI / 4.0,
            mode: SearchMode::FullGrid,
            refine_iters: 0,
            refine_shrink: 0.5,
            refine_starts: 1,
        }
    }

    /// Desk-scale detector search: a coarse grid (1296 points, each under all
    /// 24 pairings) refined by coordinate descent from its best points.
    pub fn desk_detector() -> Self {
        GridSpec {
            angle_step: PI / 4.0,
            phase_step: PI,
            x_step: PI / 4.0,
            mode: SearchMode::GridThenRefine,
            refine_iters: 40,
            refine_shrink: 0.5,
            refine_starts: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, step: f64, range: f64| {
            if !(step.is_finite() && step > 0.0 && step <= range) {
                Err(Error::Spec(format!(
                    "{name} = {step} must lie in (0, {range}]"
                )))
            } else {
                Ok(())
            }
        };
        check("angle_step", self.angle_step, FRAC_PI_2)?;
        check("phase_step", self.phase_step, TAU)?;
        check("x_step", self.x_step, FRAC_PI_2)?;
        if let SearchMode::Random { n_samples: 0, .. } = self.mode {
            return Err(Error::Spec("random mode needs n_samples >= 1".into()));
        }
        if self.mode == SearchMode::GridThenRefine {
            if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
                return Err(Error::Spec(format!(
                    "refine_shrink = {} must lie in (0, 1)",
                    self.refine_shrink
                )));
            }
            if self.refine_starts == 0 {
                return Err(Error::Spec("refine_starts must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Grid step for parameter `k` in `a, b, c, d, u, v, x, y` order.
    pub fn step_for(&self, k: usize) -> f64 {
        match k {
            1 | 3 | 5 | 7 => self.phase_step,
            6 => self.x_step,
            _ => self.angle_step,
        }
    }

    /// Values taken by parameter `k` on the grid.
    pub fn axis(&self, k: usize) -> Vec<f64> {
        let step = self.step_for(k);
        if CanonicalParams::is_phase_index(k) {
            let n = ((TAU / step) - 1e-9).ceil().max(1.0) as usize;
            (0..n)
                .map(|i| i as f64 * step)
                .filter(|&v| v < TAU)
                .collect()
        } else {
            let n = ((FRAC_PI_2 / step) + 1e-9).floor() as usize + 1;
            (0..n).map(|i| (i as f64 * step).min(FRAC_PI_2)).collect()
        }
    }
}

/// A finite, indexable sequence of parameter points.
#[derive(Debug, Clone)]
pub struct DetectorCandidates {
    source: CandidateSource,
}

#[derive(Debug, Clone)]
enum CandidateSource {
    Grid { axes: [Vec<f64>; 8], len: u64 },
    Listed(Vec<CanonicalParams>),
}

impl DetectorCandidates {
    pub fn len(&self) -> u64 {
        match &self.source {
            CandidateSource::Grid { len, .. } => *len,
            CandidateSource::Listed(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point number `index`; grid points are in lexicographic order with `a`
    /// varying slowest.
    pub fn get(&self, index: u64) -> CanonicalParams {
        match &self.source {
            CandidateSource::Grid { axes, .. } => {
                let mut rem = index;
                let mut values = [0.0; 8];
                for k in (0..8).rev() {
                    let n = axes[k].len() as u64;
                    values[k] = axes[k][(rem % n) as usize];
                    rem /= n;
                }
                CanonicalParams::from_array(values).expect("grid axes stay in range")
            }
            CandidateSource::Listed(v) => v[index as usize],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CanonicalParams> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// Enumerates candidate parameters for `spec`: the grid for the grid modes,
/// `n_samples` seeded uniform draws for random mode.
pub fn detector_candidates(spec: &GridSpec) -> Result<DetectorCandidates> {
    spec.validate()?;
    let source = match spec.mode {
        SearchMode::Random { n_samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            CandidateSource::Listed((0..n_samples).map(|_| random_params(&mut rng)).collect())
        }
        SearchMode::FullGrid | SearchMode::GridThenRefine => {
            let axes: [Vec<f64>; 8] = std::array::from_fn(|k| spec.axis(k));
            let len = axes
                .iter()
                .try_fold(1u64, |acc, ax| acc.checked_mul(ax.len() as u64));
            let len = len.ok_or_else(|| Error::Spec("grid has more than 2^64 points".into()))?;
            CandidateSource::Grid { axes, len }
        }
    };
    Ok(DetectorCandidates { source })
}

/// Best detector found for one measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub best: BoundReport,
    /// Number of (detector point, pairing) evaluations performed.
    pub evaluations: u64,
    pub strategy: SearchMode,
    /// `best.delta > DELTA_TOL`.
    pub positive: bool,
}

impl SearchResult {
    pub fn detector_params(&self) -> Option<(CanonicalParams, [usize; 4])> {
        match self.best.detector {
            Detector::Canonical { params, pairing } => Some((params, pairing)),
            Detector::Explicit => None,
        }
    }
}

/// Whether the bound is strictly above the entropy bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Strict,
    Boundary,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Strict => "strict",
            Classification::Boundary => "boundary",
        })
    }
}

/// Candidate ranked by gap, ties going to the lower index.
#[derive(Debug, Clone, Copy)]
struct Ranked {
    report: BoundReport,
    index: u64,
}

impl Ranked {
    fn beats(&self, other: &Ranked) -> bool {
        self.report.delta > other.report.delta
            || (self.report.delta == other.report.delta && self.index < other.index)
    }
}

/// Keeps the `k` best entries, best first.
fn push_top(top: &mut Vec<Ranked>, k: usize, item: Ranked) {
    let pos = top.iter().position(|t| item.beats(t)).unwrap_or(top.len());
    if pos < k {
        top.insert(pos, item);
        top.truncate(k);
    }
}

fn merge_top(mut a: Vec<Ranked>, b: Vec<Ranked>, k: usize) -> Vec<Ranked> {
    for item in b {
        push_top(&mut a, k, item);
    }
    a
}

/// Maximizes the gap over detector bases with the default execution mode.
pub fn maximize_delta(meas: &OrthoBasis, spec: &GridSpec) -> Result<SearchResult> {
    maximize_delta_in(meas, spec, Execution::default())
}

/// [`maximize_delta`] with an explicit execution mode. The result does not
/// depend on `exec`.
pub fn maximize_delta_in(
    meas: &OrthoBasis,
    spec: &GridSpec,
    exec: Execution,
) -> Result<SearchResult> {
    maximize_delta_seeded(meas, spec, &[], exec)
}

/// [`maximize_delta_in`] with extra refinement starting points. Seeds are
/// evaluated under every pairing and, in refine mode, refined after the grid
/// incumbents.
pub fn maximize_delta_seeded(
    meas: &OrthoBasis,
    spec: &GridSpec,
    seeds: &[CanonicalParams],
    exec: Execution,
) -> Result<SearchResult> {
    let candidates = detector_candidates(spec)?;
    let probe = Probe::new(meas);
    let keep = match spec.mode {
        SearchMode::GridThenRefine => spec.refine_starts,
        _ => 1,
    };

    let top = par::fold_reduce(
        exec,
        candidates.len(),
        Vec::new,
        |mut top, i| {
            let report = probe.evaluate_best_pairing(&candidates.get(i));
            push_top(&mut top, keep, Ranked { report, index: i });
            top
        },
        |a, b| merge_top(a, b, keep),
    );
    let mut evaluations = (candidates.len() + seeds.len() as u64) * PAIRINGS.len() as u64;
    let mut best = top.first().expect("candidate set is non-empty").report;
    let mut starts: Vec<BoundReport> = top.iter().map(|t| t.report).collect();
    for seed in seeds {
        let report = probe.evaluate_best_pairing(seed);
        if report.delta > best.delta {
            best = report;
        }
        starts.push(report);
    }

    if spec.mode == SearchMode::GridThenRefine && spec.refine_iters > 0 {
        let refined = par::map_indexed(exec, starts.len(), |s| refine(&probe, spec, &starts[s]));
        for (report, evals) in refined {
            evaluations += evals;
            if report.delta > best.delta {
                best = report;
            }
        }
    }

    Ok(SearchResult {
        best,
        evaluations,
        strategy: spec.mode,
        positive: best.delta > DELTA_TOL,
    })
}

/// Coordinate descent from `start`.
///
/// Each round visits the eight parameters in order, trying offsets of
/// `±1, ±½, ±¼` times the current step and keeping the best strict
/// improvement, then re-chooses the pairing at the incumbent. Steps start at
/// the grid steps and shrink by `refine_shrink` per round.
fn refine(probe: &Probe, spec: &GridSpec, start: &BoundReport) -> (BoundReport, u64) {
    const OFFSETS: [f64; 6] = [1.0, -1.0, 0.5, -0.5, 0.25, -0.25];
    let Detector::Canonical { params, pairing } = start.detector else {
        return (*start, 0);
    };
    let (mut params, mut pairing) = (params, pairing);
    let mut best = *start;
    let mut evaluations = 0u64;
    let mut scale = 1.0;
    for _ in 0..spec.refine_iters {
        for k in 0..8 {
            let step = spec.step_for(k) * scale;
            let mut round_best: Option<BoundReport> = None;
            for off in OFFSETS {
                let trial = params.with_folded(k, params.get(k) + off * step);
                if trial == params {
                    continue;
                }
                let r = probe.evaluate(&trial, pairing);
                evaluations += 1;
                if r.delta > round_best.map_or(best.delta, |b| b.delta) {
                    round_best = Some(r);
                }
            }
            if let Some(r) = round_best {
                best = r;
                if let Detector::Canonical { params: p, .. } = r.detector {
                    params = p;
                }
            }
        }
        let repaired = probe.evaluate_best_pairing(&params);
        evaluations += PAIRINGS.len() as u64;
        if repaired.delta > best.delta {
            best = repaired;
            if let Detector::Canonical { pairing: p, .. } = repaired.detector {
                pairing = p;
            }
        }
        scale *= spec.refine_shrink;
    }
    (best, evaluations)
}

/// `Strict` when the maximized gap is unambiguously positive.
pub fn classify(meas: &OrthoBasis, spec: &GridSpec) -> Result<Classification> {
    Ok(if maximize_delta(meas, spec)?.positive {
        Classification::Strict
    } else {
        Classification::Boundary
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::lower_bound;
    use crate::measurement::{build_basis, special_basis, SpecialBasis};
    use approx::assert_abs_diff_eq;

    fn coarse() -> GridSpec {
        GridSpec {
            angle_step: PI / 4.0,
            phase_step: PI,
            x_step: PI / 4.0,
            mode: SearchMode::FullGrid,
            refine_iters: 0,
            refine_shrink: 0.5,
            refine_starts: 1,
        }
    }

    fn random(n_samples: usize, seed: u64) -> GridSpec {
        GridSpec {
            mode: SearchMode::Random { n_samples, seed },
            ..coarse()
        }
    }

    fn generic_meas() -> OrthoBasis {
        build_basis(&CanonicalParams::new(0.4, 1.3, 1.1, 4.0, 0.7, 2.5, 0.3, 5.5).unwrap())
    }

    #[test]
    fn grid_point_count() {
        let c = detector_candidates(&coarse()).unwrap();
        assert_eq!(c.len(), 3 * 3 * 3 * 2 * 2 * 2 * 2 * 3);
        assert_eq!(c.len(), 1296);
        assert_eq!(c.get(0), CanonicalParams::zero());
        assert_eq!(c.iter().count(), 1296);
        assert_eq!(
            detector_candidates(&GridSpec::desk_measurement())
                .unwrap()
                .len(),
            20736
        );
        let fine = detector_candidates(&GridSpec::fine_measurement()).unwrap();
        assert_eq!(fine.len(), 13u64.pow(3) * 24u64.pow(4) * 9);
    }

    #[test]
    fn grid_is_lexicographic() {
        let c = detector_candidates(&coarse()).unwrap();
        // y is the fastest axis, then x
        assert_eq!(c.get(1).get(7), PI);
        assert_eq!(c.get(2).get(6), PI / 4.0);
        assert_eq!(c.get(2).get(7), 0.0);
        assert_eq!(
            c.get(c.len() - 1).as_array(),
            &[FRAC_PI_2, PI, FRAC_PI_2, PI, FRAC_PI_2, PI, FRAC_PI_2, PI]
        );
        let all: Vec<_> = c.iter().map(|p| *p.as_array()).collect();
        for w in all.windows(2) {
            assert!(w[0].partial_cmp(&w[1]) == Some(std::cmp::Ordering::Less));
        }
    }

    #[test]
    fn axes_cover_ranges() {
        let spec = GridSpec::fine_measurement();
        let a = spec.axis(0);
        assert_eq!(a.len(), 13);
        assert_eq!(*a.last().unwrap(), FRAC_PI_2);
        let b = spec.axis(1);
        assert_eq!(b.len(), 24);
        assert!(*b.last().unwrap() < TAU);
        assert_eq!(spec.axis(6).len(), 9);
    }

    #[test]
    fn random_candidates_are_reproducible_and_in_range() {
        let x: Vec<_> = detector_candidates(&random(10, 7))
            .unwrap()
            .iter()
            .collect();
        let y: Vec<_> = detector_candidates(&random(10, 7))
            .unwrap()
            .iter()
            .collect();
        assert_eq!(x, y);
        assert_eq!(x.len(), 10);
        let z: Vec<_> = detector_candidates(&random(10, 8))
            .unwrap()
            .iter()
            .collect();
        assert_ne!(x, z);
        for p in detector_candidates(&random(500, 1)).unwrap().iter() {
            assert!(CanonicalParams::from_array(*p.as_array()).is_ok());
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            GridSpec {
                angle_step: 0.0,
                ..coarse()
            },
            GridSpec {
                angle_step: 2.0,
                ..coarse()
            },
            GridSpec {
                phase_step: f64::NAN,
                ..coarse()
            },
            GridSpec {
                x_step: -1.0,
                ..coarse()
            },
            random(0, 1),
            GridSpec {
                mode: SearchMode::GridThenRefine,
                refine_shrink: 1.0,
                ..coarse()
            },
            GridSpec {
                mode: SearchMode::GridThenRefine,
                refine_starts: 0,
                ..coarse()
            },
        ];
        for spec in bad {
            assert!(
                matches!(detector_candidates(&spec), Err(Error::Spec(_))),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn product_measurement_stays_on_the_entropy_bound() {
        let r = maximize_delta(&special_basis(SpecialBasis::Product), &coarse()).unwrap();
        assert!(r.best.delta.abs() <= DELTA_TOL);
        assert!(!r.positive);
        assert_eq!(r.evaluations, 1296 * 24);
        assert_eq!(r.strategy, SearchMode::FullGrid);
        assert_eq!(
            classify(&special_basis(SpecialBasis::Product), &coarse()).unwrap(),
            Classification::Boundary
        );
    }

    #[test]
    fn result_is_sound() {
        let meas = generic_meas();
        let r = maximize_delta(&meas, &GridSpec::desk_detector()).unwrap();
        let (params, pairing) = r.detector_params().unwrap();
        let again = lower_bound(&meas, &build_basis(&params).permuted(pairing).unwrap());
        assert_abs_diff_eq!(again.delta, r.best.delta, epsilon = 1e-9);
    }

    #[test]
    fn execution_mode_does_not_change_results() {
        let meas = generic_meas();
        let spec = GridSpec::desk_detector();
        let seq = maximize_delta_in(&meas, &spec, Execution::Sequential).unwrap();
        let par = maximize_delta_in(&meas, &spec, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.best.delta.to_bits(), par.best.delta.to_bits());
    }

    #[test]
    fn more_candidates_never_hurt() {
        let meas = generic_meas();
        let mut prev = f64::NEG_INFINITY;
        for n in [1, 10, 100, 1000] {
            let d = maximize_delta(&meas, &random(n, 3)).unwrap().best.delta;
            assert!(d >= prev);
            prev = d;
        }
        let mut prev = f64::NEG_INFINITY;
        for iters in [0, 1, 5, 20, 40] {
            let spec = GridSpec {
                refine_iters: iters,
                ..GridSpec::desk_detector()
            };
            let d = maximize_delta(&meas, &spec).unwrap().best.delta;
            assert!(d >= prev, "{iters} rounds: {d} < {prev}");
            prev = d;
        }
        // halving the phase step keeps every old grid point
        let fine = GridSpec {
            phase_step: PI / 2.0,
            ..coarse()
        };
        let d_coarse = maximize_delta(&meas, &coarse()).unwrap().best.delta;
        let d_fine = maximize_delta(&meas, &fine).unwrap().best.delta;
        assert!(d_fine >= d_coarse);
    }

    #[test]
    fn top_k_keeps_best_first_with_index_ties() {
        let mk = |delta: f64, index: u64| Ranked {
            report: BoundReport {
                delta,
                ..lower_bound(&generic_meas(), &generic_meas())
            },
            index,
        };
        let mut top = Vec::new();
        for (d, i) in [(0.1, 5), (0.3, 2), (0.3, 1), (0.2, 0), (0.3, 9)] {
            push_top(&mut top, 3, mk(d, i));
        }
        let got: Vec<_> = top.iter().map(|r| (r.report.delta, r.index)).collect();
        assert_eq!(got, vec![(0.3, 1), (0.3, 2), (0.3, 9)]);
        let merged = merge_top(vec![mk(0.5, 7)], top, 2);
        assert_eq!(
            merged.iter().map(|r| r.index).collect::<Vec<_>>(),
            vec![7, 1]
        );
    }
}
