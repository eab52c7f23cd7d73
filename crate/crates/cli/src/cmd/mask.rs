use kmask::format::encode_pgm;
use kmask::mask::shift_mask;

use super::report_warning;
use crate::args::MaskCmd;
use crate::error::CliResult;
use crate::io::{check_output, print_json, write_bytes, write_json};

pub fn run(cmd: &MaskCmd) -> CliResult {
    for path in [&cmd.out, &cmd.csv, &cmd.pgm].into_iter().flatten() {
        check_output(path)?;
    }
    if cmd.rows == 0 {
        return Err(crate::error::CliError::Usage("--rows must be at least 1".into()));
    }
    let mut mask = cmd.mask.spec(cmd.n, cmd.seed).build()?;
    report_warning(&mask);
    if cmd.shifted {
        mask = shift_mask(&mask);
    }
    let record = mask.to_json();
    match &cmd.out {
        Some(path) => write_json(path, &record)?,
        None => print_json(&record)?,
    }
    if let Some(path) = &cmd.csv {
        write_bytes(path, mask.to_csv().as_bytes())?;
    }
    if let Some(path) = &cmd.pgm {
        let row: Vec<f64> = mask.bits().iter().map(|&b| f64::from(u8::from(b))).collect();
        let field: Vec<f64> = row.iter().cycle().take(row.len() * cmd.rows).copied().collect();
        let (bytes, _) = encode_pgm(mask.len(), cmd.rows, &field)?;
        write_bytes(path, &bytes)?;
    }
    Ok(())
}
