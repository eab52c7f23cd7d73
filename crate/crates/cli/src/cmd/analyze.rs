use kmask::mask::{sampling_fraction, shift_mask};
use kmask::symmetry::{frequency_of_index, measurement_matrix, numeric_rank, redundancy_report, RedundancyReport};
use kmask::Layout;
use serde::Serialize;

use super::report_warning;
use crate::args::AnalyzeCmd;
use crate::error::{CliError, CliResult};
use crate::io::{check_input, check_output, print_json, read_mask, write_json};

#[derive(Debug, Serialize)]
struct Analysis {
    #[serde(flatten)]
    report: RedundancyReport,
    sampled_lines: usize,
    /// Sampled lines over N, reduced.
    sampling_fraction: String,
    rank: usize,
    svd_tol: f64,
}

pub fn run(cmd: &AnalyzeCmd) -> CliResult {
    if let Some(path) = &cmd.out {
        check_output(path)?;
    }
    if !(cmd.svd_tol > 0.0 && cmd.svd_tol < 1.0) {
        return Err(CliError::Usage(format!("--svd-tol {} must lie in (0, 1)", cmd.svd_tol)));
    }
    let mut mask = match (&cmd.mask, cmd.n) {
        (Some(path), _) => {
            check_input(path)?;
            read_mask(path)?
        }
        (None, Some(n)) => cmd.mask_args.spec(n, cmd.seed).build()?,
        (None, None) => return Err(CliError::Usage("either --mask or --n is required".into())),
    };
    if mask.layout() == Layout::Shifted {
        mask = shift_mask(&mask);
    }
    report_warning(&mask);
    let report = redundancy_report(&mask)?;
    let rank = numeric_rank(&measurement_matrix::<f64>(&mask, mask.len())?, cmd.svd_tol)?;
    let fraction = sampling_fraction(&mask);
    let analysis = Analysis {
        sampled_lines: mask.count(),
        sampling_fraction: format!("{}/{}", fraction.numer(), fraction.denom()),
        rank,
        svd_tol: cmd.svd_tol,
        report,
    };
    if let Some(path) = &cmd.out {
        write_json(path, &analysis)?;
    }
    if cmd.json {
        print_json(&analysis)
    } else {
        print!("{}", table(&analysis, &mask.indices()));
        Ok(())
    }
}

fn table(a: &Analysis, indices: &[usize]) -> String {
    let r = &a.report;
    let mut out = format!(
        "N = {}  sampled = {} ({})  unique classes = {}  real dof = {}  rank = {}  redundant pairs = {}\n",
        r.n, a.sampled_lines, a.sampling_fraction, r.unique_classes, r.real_dof, a.rank, r.redundant_pairs
    );
    out.push_str(&format!("{:>7}  {:>9}  {:>5}  {:<10}  {:>3}\n", "index", "frequency", "|f|", "class", "dof"));
    for &k in indices {
        let f = frequency_of_index(k, r.n).expect("index below N");
        let class = r.classes.iter().find(|c| c.contains(&f)).expect("every retained frequency has a class");
        let members = class.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        // the class's degrees of freedom are listed on its first member only
        let dof = if class[0] == f {
            let self_conjugate = f == 0 || (r.n.is_multiple_of(2) && f.unsigned_abs() as usize == r.n / 2);
            if self_conjugate {
                "1"
            } else {
                "2"
            }
        } else {
            "-"
        };
        out.push_str(&format!("{k:>7}  {f:>9}  {:>5}  {:<10}  {dof:>3}\n", f.abs(), format!("{{{members}}}")));
    }
    out
}
