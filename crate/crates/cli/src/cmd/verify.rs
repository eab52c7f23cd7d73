use kmask::verify::{run_verify, VerifyConfig};

use crate::args::VerifyCmd;
use crate::error::{CliError, CliResult};
use crate::io::{check_output, print_json, write_json};

pub fn run(cmd: &VerifyCmd) -> CliResult {
    if let Some(path) = &cmd.out {
        check_output(path)?;
    }
    for (flag, value) in [("--tol", cmd.tol), ("--dft-tol", cmd.dft_tol), ("--clamp-tol", cmd.clamp_tol)] {
        if value.is_nan() || value < 0.0 {
            return Err(CliError::Usage(format!("{flag} {value} must be non-negative")));
        }
    }
    if !(cmd.svd_tol > 0.0 && cmd.svd_tol < 1.0) {
        return Err(CliError::Usage(format!("--svd-tol {} must lie in (0, 1)", cmd.svd_tol)));
    }
    let cfg = VerifyConfig {
        alias_tol: cmd.tol,
        dft_tol: cmd.dft_tol,
        clamp_tol: cmd.clamp_tol,
        svd_tol: cmd.svd_tol,
        seed: cmd.seed,
        negative_offset_override: cmd.neg_offset,
        ..VerifyConfig::default()
    };
    let summary = run_verify(&cfg);
    for check in &summary.checks {
        eprintln!(
            "{} {:<24} {:>6} cases {:>4} failures {:>8.3} s  {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.cases,
            check.failures,
            check.seconds,
            check.detail
        );
    }
    // wall-clock times would make otherwise identical runs differ
    let mut value = serde_json::to_value(&summary).map_err(|e| CliError::Usage(e.to_string()))?;
    if !cmd.timings {
        if let Some(checks) = value.get_mut("checks").and_then(|c| c.as_array_mut()) {
            for check in checks {
                check.as_object_mut().map(|o| o.remove("seconds"));
            }
        }
    }
    match &cmd.out {
        Some(path) => write_json(path, &value)?,
        None => print_json(&value)?,
    }
    if summary.passed {
        Ok(())
    } else {
        Err(CliError::Verify(summary.failed().join(", ")))
    }
}
