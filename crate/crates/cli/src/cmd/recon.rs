use std::fmt::Write as _;

use kmask::experiment::{run_recon, Arm, ReconConfig, ReconReport};

use crate::args::ReconCmd;
use crate::error::{CliError, CliResult};
use crate::io::{check_output, write_bytes, write_json};

pub fn run(cmd: &ReconCmd) -> CliResult {
    for path in [&cmd.out, &cmd.csv].into_iter().flatten() {
        check_output(path)?;
    }
    let mut arms: Vec<Arm> = cmd.offsets.iter().map(|&offset| Arm::Equispaced { offset }).collect();
    if !cmd.no_random {
        arms.push(Arm::Random);
    }
    let cfg = ReconConfig {
        center_lines: cmd.center,
        arms,
        phantom: cmd.phantom.into(),
        support_fraction: cmd.support,
        noise_sigma: cmd.noise,
        phase_amplitudes: cmd.phase_sweep.clone(),
        svd_tol: cmd.svd_tol,
        ..ReconConfig::new(cmd.n, cmd.accel, cmd.trials, cmd.seed)
    };
    if !(cfg.svd_tol > 0.0 && cfg.svd_tol < 1.0) {
        return Err(CliError::Usage(format!("--svd-tol {} must lie in (0, 1)", cfg.svd_tol)));
    }
    let report = run_recon(&cfg)?;
    if let Some(path) = &cmd.out {
        write_json(path, &report)?;
    }
    if let Some(path) = &cmd.csv {
        write_bytes(path, csv(&report).as_bytes())?;
    }
    print!("{}", table(&report));
    Ok(())
}

pub fn csv(report: &ReconReport) -> String {
    let mut out = String::from("arm,phase_amplitude,trials,mean_mse,std_mse,min_mse,max_mse,mean_real_dof\n");
    for r in &report.results {
        writeln!(
            out,
            "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.arm, r.phase_amplitude, r.trials, r.mean_mse, r.std_mse, r.min_mse, r.max_mse, r.mean_real_dof
        )
        .expect("writing to a String");
    }
    out
}

fn table(report: &ReconReport) -> String {
    let c = &report.config;
    let mut out = format!(
        "N = {}  R = {}  trials = {}  seed = {}  center = {}  support = {}\n",
        c.n, c.acceleration, c.trials, c.seed, c.center_lines, c.support_fraction
    );
    out.push_str(&format!("{:<10} {:>6} {:>13} {:>13} {:>8}\n", "arm", "phase", "mean_mse", "std_mse", "dof"));
    for r in &report.results {
        out.push_str(&format!(
            "{:<10} {:>6.3} {:>13.6e} {:>13.6e} {:>8.2}\n",
            r.arm, r.phase_amplitude, r.mean_mse, r.std_mse, r.mean_real_dof
        ));
    }
    out
}
