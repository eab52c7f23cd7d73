//! Monte-Carlo comparison of masks by least-squares reconstruction error.
//!
//! Each trial draws a seeded phantom, measures the retained lines of its spectrum and
//! reconstructs the minimum-norm real signal consistent with them. Masks that keep more
//! non-redundant coefficients leave less of the signal unexplained.

use serde::Serialize;

use crate::dft::dft_forward;
use crate::error::{invalid, Result};
use crate::mask::{random_mask, MaskSpec};
use crate::phantom::{make_phantom, PhantomKind, PhantomSpec, PhaseModel};
use crate::symmetry::{mse, redundancy_report, LeastSquares};

const RANDOM_MASK_SALT: u64 = 0xd1b5_4a32_d192_ed03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arm {
    Equispaced {
        offset: usize,
    },
    /// A fresh uniform random mask per trial.
    Random,
}

impl Arm {
    pub fn label(&self) -> String {
        match self {
            Arm::Equispaced { offset } => format!("offset{offset}"),
            Arm::Random => "random".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconConfig {
    pub n: usize,
    pub acceleration: usize,
    pub trials: usize,
    pub seed: u64,
    pub center_lines: usize,
    pub arms: Vec<Arm>,
    pub phantom: PhantomKind,
    pub support_fraction: f64,
    pub noise_sigma: f64,
    /// Peak phase deviations to sweep; 0 means a real phantom.
    pub phase_amplitudes: Vec<f64>,
    pub svd_tol: f64,
}

impl ReconConfig {
    pub fn new(n: usize, acceleration: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            acceleration,
            trials,
            seed,
            center_lines: 0,
            arms: vec![Arm::Equispaced { offset: 0 }, Arm::Equispaced { offset: 1 }, Arm::Random],
            phantom: PhantomKind::RandomSmooth,
            support_fraction: 0.5,
            noise_sigma: 0.0,
            phase_amplitudes: vec![0.0],
            svd_tol: crate::symmetry::DEFAULT_SVD_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmResult {
    pub arm: String,
    pub phase_amplitude: f64,
    pub trials: usize,
    pub mean_mse: f64,
    pub std_mse: f64,
    pub min_mse: f64,
    pub max_mse: f64,
    /// Real degrees of freedom averaged over the masks used.
    pub mean_real_dof: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconReport {
    pub config: ReconConfig,
    pub results: Vec<ArmResult>,
}

impl ReconReport {
    pub fn result(&self, arm: &str, phase_amplitude: f64) -> Option<&ArmResult> {
        self.results.iter().find(|r| r.arm == arm && r.phase_amplitude == phase_amplitude)
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Per-trial MSE values for one arm, ordered by trial index.
pub fn arm_errors(cfg: &ReconConfig, arm: Arm, phase_amplitude: f64) -> Result<(Vec<f64>, f64)> {
    let fixed = match arm {
        Arm::Equispaced { offset } => {
            let mask =
                MaskSpec::equispaced(cfg.n, cfg.acceleration, offset).with_center_lines(cfg.center_lines).build()?;
            let dof = redundancy_report(&mask)?.real_dof as f64;
            Some((LeastSquares::<f64>::new(&mask, cfg.svd_tol)?, dof))
        }
        Arm::Random => None,
    };
    let mut errors = Vec::with_capacity(cfg.trials);
    let mut dof_total = 0.0;
    for t in 0..cfg.trials {
        let seed = trial_seed(cfg.seed, t);
        let phase = if phase_amplitude == 0.0 {
            PhaseModel::None
        } else {
            PhaseModel::RandomSmooth { amplitude: phase_amplitude }
        };
        let spec = PhantomSpec {
            phase,
            noise_sigma: cfg.noise_sigma,
            ..PhantomSpec::real(cfg.n, cfg.phantom, cfg.support_fraction, seed)
        };
        let truth = make_phantom::<f64>(&spec)?;
        let spectrum = dft_forward(&truth);
        let estimate = match &fixed {
            Some((ls, dof)) => {
                dof_total += dof;
                ls.reconstruct(&spectrum)?
            }
            None => {
                let mask = random_mask(cfg.n, cfg.acceleration, seed ^ RANDOM_MASK_SALT, cfg.center_lines)?;
                dof_total += redundancy_report(&mask)?.real_dof as f64;
                LeastSquares::new(&mask, cfg.svd_tol)?.reconstruct(&spectrum)?
            }
        };
        errors.push(mse(&estimate, &truth));
    }
    Ok((errors, dof_total / cfg.trials as f64))
}

pub fn run_recon(cfg: &ReconConfig) -> Result<ReconReport> {
    if cfg.trials == 0 {
        return invalid("at least one trial is required");
    }
    if cfg.arms.is_empty() {
        return invalid("at least one mask arm is required");
    }
    if cfg.phase_amplitudes.is_empty() {
        return invalid("phase sweep needs at least one amplitude");
    }
    let mut results = Vec::new();
    for &amp in &cfg.phase_amplitudes {
        for &arm in &cfg.arms {
            let (errors, mean_real_dof) = arm_errors(cfg, arm, amp)?;
            let count = errors.len() as f64;
            let mean = errors.iter().sum::<f64>() / count;
            let var = if errors.len() > 1 {
                errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1.0)
            } else {
                0.0
            };
            results.push(ArmResult {
                arm: arm.label(),
                phase_amplitude: amp,
                trials: errors.len(),
                mean_mse: mean,
                std_mse: var.sqrt(),
                min_mse: errors.iter().copied().fold(f64::INFINITY, f64::min),
                max_mse: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_real_dof,
            });
        }
    }
    Ok(ReconReport { config: cfg.clone(), results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_ordered() {
        let cfg = ReconConfig { trials: 3, ..ReconConfig::new(16, 4, 3, 11) };
        let a = run_recon(&cfg).unwrap();
        assert_eq!(a, run_recon(&cfg).unwrap());
        let labels: Vec<&str> = a.results.iter().map(|r| r.arm.as_str()).collect();
        assert_eq!(labels, vec!["offset0", "offset1", "random"]);
        assert_eq!(a.result("offset1", 0.0).unwrap().mean_real_dof, 8.0);
        assert_eq!(a.result("offset0", 0.0).unwrap().mean_real_dof, 4.0);
    }

    #[test]
    fn rejects_empty_runs() {
        assert!(run_recon(&ReconConfig::new(16, 4, 0, 1)).is_err());
        let cfg = ReconConfig { arms: vec![], ..ReconConfig::new(16, 4, 1, 1) };
        assert!(run_recon(&cfg).is_err());
    }

    #[test]
    fn phase_sweep_rows() {
        let cfg = ReconConfig { phase_amplitudes: vec![0.0, 0.5], ..ReconConfig::new(16, 4, 2, 5) };
        let report = run_recon(&cfg).unwrap();
        assert_eq!(report.results.len(), 6);
        assert!(report.result("offset1", 0.5).is_some());
    }
}
