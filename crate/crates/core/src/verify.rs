//! The invariant battery run by `kmask verify`.
//!
//! Each check reports how many cases it ran, how many failed and the worst error seen.
//! Tolerances are fields of [`VerifyConfig`] so that callers can tighten them (an
//! unattainable tolerance must make the corresponding checks fail).

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alias::{clamp_reconstruct, masked_image, verify_alias_identity};
use crate::dft::{dft_forward, dft_inverse, dft_reference, fftshift, Direction, Signal};
use crate::error::Result;
use crate::mask::{
    default_negative_offset, equispaced_mask, offset_mask_irregular, random_mask, shift_mask, Layout, SamplingMask,
};
use crate::phantom::{make_phantom, PhantomKind, PhantomSpec};
use crate::symmetry::{measurement_matrix, numeric_rank, redundancy_report, retained_frequencies};

pub const ALIAS_ACCELERATIONS: [usize; 5] = [2, 3, 4, 5, 8];
pub const ALIAS_WIDTHS: [usize; 6] = [8, 12, 16, 24, 60, 64];
pub const CLAMP_WIDTHS: [usize; 3] = [8, 64, 320];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Alias identity bound relative to `max|x|`.
    pub alias_tol: f64,
    /// Relative bound for fast transform vs reference.
    pub dft_tol: f64,
    pub svd_tol: f64,
    /// Elementwise bound for clamp recovery.
    pub clamp_tol: f64,
    pub signals_per_case: usize,
    pub random_masks: usize,
    pub clamp_phantoms: usize,
    pub seed: u64,
    /// Replaces the negative-half offset in the irregular-mask check (fault injection).
    pub negative_offset_override: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            alias_tol: 1e-10,
            dft_tol: 1e-11,
            svd_tol: crate::symmetry::DEFAULT_SVD_TOL,
            clamp_tol: 1e-9,
            signals_per_case: 20,
            random_masks: 500,
            clamp_phantoms: 50,
            seed: 0,
            negative_offset_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub max_error: Option<f64>,
    pub seconds: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    max_error: Option<f64>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failures: 0, max_error: None, notes: Vec::new() }
    }

    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < 5 {
                self.notes.push(note());
            }
        }
    }

    fn error(&mut self, err: f64) {
        self.max_error = Some(self.max_error.map_or(err, |m: f64| m.max(err)));
    }

    fn finish(self, name: &str, started: Instant, summary: String) -> CheckResult {
        let detail = if self.notes.is_empty() { summary } else { format!("{summary}; {}", self.notes.join("; ")) };
        CheckResult {
            name: name.to_string(),
            passed: self.failures == 0 && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            max_error: self.max_error,
            seconds: started.elapsed().as_secs_f64(),
            detail,
        }
    }
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize, real: bool) -> Signal<f64> {
    let samples = (0..n)
        .map(|_| {
            let re = rng.random_range(-1.0..1.0);
            let im = if real { 0.0 } else { rng.random_range(-1.0..1.0) };
            Complex::new(re, im)
        })
        .collect();
    Signal::new(samples).expect("finite samples")
}

fn errored(name: &str, started: Instant, err: crate::Error) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: false,
        cases: 0,
        failures: 1,
        max_error: None,
        seconds: started.elapsed().as_secs_f64(),
        detail: format!("error: {err}"),
    }
}

fn guarded(name: &str, body: impl FnOnce(Instant) -> Result<CheckResult>) -> CheckResult {
    let started = Instant::now();
    body(started).unwrap_or_else(|e| errored(name, started, e))
}

/// Fast transforms against the quadratic reference, plus the round trip.
pub fn check_dft(cfg: &VerifyConfig) -> CheckResult {
    guarded("dft_reference_agreement", |started| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut t = Tally::new();
        for trial in 0..200 {
            let n = 1 + trial % 64;
            let x = random_signal(&mut rng, n, false);
            let fwd = dft_forward(&x);
            let fwd_ref = dft_reference(&x, Direction::Forward);
            let inv = dft_inverse(&x);
            let inv_ref = dft_reference(&x, Direction::Inverse);
            let round = dft_inverse(&fwd);
            let errs = [
                fwd.max_abs_diff(&fwd_ref) / fwd_ref.max_abs().max(f64::MIN_POSITIVE),
                inv.max_abs_diff(&inv_ref) / inv_ref.max_abs().max(f64::MIN_POSITIVE),
                round.max_abs_diff(&x) / x.max_abs().max(f64::MIN_POSITIVE),
            ];
            let worst = errs.iter().copied().fold(0.0, f64::max);
            t.error(worst);
            t.record(worst < cfg.dft_tol, || format!("N={n} relative error {worst:e}"));
        }
        Ok(t.finish("dft_reference_agreement", started, format!("200 random signals, tol {:e}", cfg.dft_tol)))
    })
}

/// Masked image against the shifted-copies prediction over the full (N, R, offset) grid.
pub fn check_alias_identity(cfg: &VerifyConfig) -> CheckResult {
    guarded("alias_identity", |started| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa11a5);
        let mut t = Tally::new();
        for &r in &ALIAS_ACCELERATIONS {
            for &n in ALIAS_WIDTHS.iter().filter(|&&n| n % r == 0) {
                for offset in 0..r {
                    for _ in 0..cfg.signals_per_case {
                        let x = random_signal(&mut rng, n, false);
                        let rel = verify_alias_identity(&x, r, offset)? / x.max_abs();
                        t.error(rel);
                        t.record(rel < cfg.alias_tol, || format!("N={n} R={r} offset={offset} relative error {rel:e}"));
                    }
                }
            }
        }
        Ok(t.finish("alias_identity", started, format!("relative tol {:e}", cfg.alias_tol)))
    })
}

/// Irregular construction with the default negative offset reproduces the naive offset-1
/// mask whenever R divides N, and the N=13, R=4 mask carries frequencies {1, 5, -3}.
pub fn check_irregular_mask(cfg: &VerifyConfig) -> CheckResult {
    guarded("irregular_mask_equivalence", |started| {
        let mut t = Tally::new();
        for r in [2usize, 3, 4, 8] {
            let neg = cfg.negative_offset_override.unwrap_or_else(|| default_negative_offset(r));
            if neg >= r {
                continue;
            }
            for n in (r..=128).step_by(r) {
                let ok = match offset_mask_irregular(n, r, 1, neg) {
                    Ok(m) => m.bits() == equispaced_mask(n, r, 1)?.bits(),
                    Err(_) => false,
                };
                t.record(ok, || format!("N={n} R={r} negative offset {neg} differs from naive offset-1"));
            }
        }
        let neg = cfg.negative_offset_override.unwrap_or(2);
        let odd = offset_mask_irregular(13, 4, 1, neg)?;
        t.record(odd.indices() == [1, 5, 10], || format!("N=13 mask {:?}", odd.indices()));
        let freqs = retained_frequencies(&odd)?;
        t.record(freqs == [1, 5, -3], || format!("N=13 frequencies {freqs:?}"));
        Ok(t.finish("irregular_mask_equivalence", started, "R in {2,3,4,8}, N multiples up to 128".into()))
    })
}

/// The N=12, R=4 accounting from the memory-layout argument.
pub fn check_retained_frequencies(_cfg: &VerifyConfig) -> CheckResult {
    guarded("retained_frequencies_n12", |started| {
        let mut t = Tally::new();
        for (offset, freqs, classes, dof) in [(0, vec![0, 4, -4], 2, 3), (1, vec![1, 5, -3], 3, 6)] {
            let mask = equispaced_mask(12, 4, offset)?;
            let got = retained_frequencies(&mask)?;
            t.record(got == freqs, || format!("offset {offset} retained {got:?}"));
            let report = redundancy_report(&mask)?;
            t.record(report.unique_classes == classes && report.real_dof == dof, || {
                format!("offset {offset} classes {} dof {}", report.unique_classes, report.real_dof)
            });
        }
        Ok(t.finish("retained_frequencies_n12", started, "retained [0,4,-4] vs [1,5,-3]".into()))
    })
}

fn rank_matches(mask: &SamplingMask, tol: f64) -> Result<(bool, usize, usize)> {
    let dof = redundancy_report(mask)?.real_dof;
    let rank = numeric_rank(&measurement_matrix::<f64>(mask, mask.len())?, tol)?;
    Ok((dof == rank, dof, rank))
}

/// Operator rank equals the counted real degrees of freedom.
pub fn check_rank_dof(cfg: &VerifyConfig) -> CheckResult {
    guarded("rank_equals_dof", |started| {
        let mut t = Tally::new();
        for n in 1..=16 {
            for r in 2..=n.max(2) {
                for offset in 0..r {
                    let Ok(mask) = equispaced_mask(n, r, offset) else { continue };
                    let (ok, dof, rank) = rank_matches(&mask, cfg.svd_tol)?;
                    t.record(ok, || format!("equispaced({n},{r},{offset}) dof {dof} rank {rank}"));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
        for _ in 0..cfg.random_masks {
            let r = rng.random_range(2..=8);
            let center = rng.random_range(0..=(64 / r).min(8));
            let mask = random_mask(64, r, rng.random(), center)?;
            let (ok, dof, rank) = rank_matches(&mask, cfg.svd_tol)?;
            t.record(ok, || format!("random N=64 R={r} dof {dof} rank {rank}"));
        }
        Ok(t.finish(
            "rank_equals_dof",
            started,
            format!("all equispaced masks N<=16 and {} random masks at N=64", cfg.random_masks),
        ))
    })
}

/// Offset 1 doubles the real degrees of freedom of offset 0 at R = 4.
pub fn check_offset_advantage(_cfg: &VerifyConfig) -> CheckResult {
    guarded("offset_advantage", |started| {
        let mut t = Tally::new();
        for n in (8..=64).step_by(4) {
            let d0 = redundancy_report(&equispaced_mask(n, 4, 0)?)?.real_dof;
            let d1 = redundancy_report(&equispaced_mask(n, 4, 1)?)?.real_dof;
            t.record(d1 == 2 * d0, || format!("N={n} dof {d1} vs {d0}"));
        }
        Ok(t.finish("offset_advantage", started, "N in {8,12,...,64}".into()))
    })
}

/// Layout round trips and the masking/shift commutation.
pub fn check_shift(cfg: &VerifyConfig) -> CheckResult {
    guarded("shift_handling", |started| {
        let mut t = Tally::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5417);
        for n in 2..=41 {
            let mask = random_mask(n, 2, rng.random(), 0)?;
            t.record(shift_mask(&shift_mask(&mask)) == mask, || format!("N={n} round trip"));
        }
        for n in [12usize, 13] {
            for offset in 0..4 {
                let mask = equispaced_mask(n, 4, offset)?;
                for _ in 0..cfg.signals_per_case {
                    let x = random_signal(&mut rng, n, false);
                    let direct = fftshift(&crate::alias::apply_mask(&x, Layout::Unshifted, &mask)?);
                    let shifted = crate::alias::apply_mask(&fftshift(&x), Layout::Shifted, &shift_mask(&mask))?;
                    t.record(direct == shifted, || format!("N={n} offset {offset} commutation"));
                }
            }
        }
        Ok(t.finish("shift_handling", started, "exact equality".into()))
    })
}

/// Phantoms used by the clamp check: real, non-negative, support at most N/2 in one
/// cyclic window at a random position.
pub fn clamp_phantoms(n: usize, count: usize, seed: u64) -> Vec<PhantomSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    let kinds = [PhantomKind::Box, PhantomKind::SmoothBumps, PhantomKind::RandomSmooth];
    (0..count)
        .map(|i| {
            let width = rng.random_range(1..=n / 2);
            PhantomSpec {
                start: rng.random_range(0..n),
                ..PhantomSpec::real(n, kinds[i % kinds.len()], width as f64 / n as f64, rng.random())
            }
        })
        .collect()
}

/// Clamping the offset-1 image recovers half-FOV phantoms; offset 0 does not.
pub fn check_clamp(cfg: &VerifyConfig) -> CheckResult {
    guarded("clamp_recovery", |started| {
        let mut t = Tally::new();
        for &n in &CLAMP_WIDTHS {
            let one = equispaced_mask(n, 4, 1)?;
            let zero = equispaced_mask(n, 4, 0)?;
            for spec in clamp_phantoms(n, cfg.clamp_phantoms, cfg.seed) {
                let x = make_phantom::<f64>(&spec)?;
                let truth = x.re();
                let rec = clamp_reconstruct(&masked_image(&x, &one)?, 4);
                let err = rec.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                t.error(err);
                t.record(err < cfg.clamp_tol, || format!("N={n} offset 1 error {err:e}"));
                let rec0 = clamp_reconstruct(&masked_image(&x, &zero)?, 4);
                let mse0 = rec0.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n as f64;
                t.record(mse0 > 0.0, || format!("N={n} offset 0 reconstructed exactly"));
            }
        }
        Ok(t.finish("clamp_recovery", started, format!("elementwise tol {:e}", cfg.clamp_tol)))
    })
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifySummary {
    let checks = vec![
        check_dft(cfg),
        check_alias_identity(cfg),
        check_retained_frequencies(cfg),
        check_irregular_mask(cfg),
        check_rank_dof(cfg),
        check_offset_advantage(cfg),
        check_shift(cfg),
        check_clamp(cfg),
    ];
    VerifySummary { passed: checks.iter().all(|c| c.passed), checks }
}
