//! File plumbing. Each output file is written exactly once, by one call.

use std::fs;
use std::path::{Path, PathBuf};

use kmask::format::{decode_raw, encode_pgm, encode_raw, to_json_string, PgmBounds, Sidecar};
use kmask::mask::MaskJson;
use kmask::{Complex64, Layout, SamplingMask};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write_json<S: Serialize + ?Sized>(path: &Path, value: &S) -> CliResult {
    let mut text = to_json_string(value).map_err(|e| CliError::data(path, e))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

pub fn print_json<S: Serialize + ?Sized>(value: &S) -> CliResult {
    let text = to_json_string(value).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

/// Creates the directory if needed so later writes only fail on real I/O problems.
pub fn prepare_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })
}

/// Parent directory of an output file must exist before any work is done.
pub fn check_output(path: &Path) -> CliResult {
    match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() && !parent.is_dir() => Err(CliError::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "parent directory does not exist"),
        }),
        _ => Ok(()),
    }
}

pub fn check_input(path: &Path) -> CliResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
        })
    }
}

pub fn sidecar_path(raw: &Path) -> PathBuf {
    raw.with_extension("json")
}

/// Reads `<name>.bin` together with its `<name>.json` sidecar.
pub fn read_raw(path: &Path) -> CliResult<(Sidecar, Vec<Complex64>)> {
    let side_path = sidecar_path(path);
    let sidecar: Sidecar = serde_json::from_str(&read_text(&side_path)?).map_err(|e| CliError::data(&side_path, e))?;
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    let samples = decode_raw(&bytes, &sidecar).map_err(|e| CliError::data(path, e))?;
    Ok((sidecar, samples))
}

/// Writes `<stem>.bin` + `<stem>.json` and, for each `(channel, values)`, a PGM
/// `<stem>_<channel>.pgm` of `height` rows whose bounds land in the sidecar.
pub fn write_raw(
    dir: &Path,
    stem: &str,
    shape: Vec<usize>,
    samples: &[Complex64],
    renderings: &[(&str, Vec<f64>)],
    strip_rows: usize,
) -> CliResult {
    let mut sidecar = Sidecar::new(shape.clone());
    let (height, width) = match shape[..] {
        [n] => (strip_rows, n),
        [h, w] => (h, w),
        _ => unreachable!("shapes are [N] or [h, w]"),
    };
    for (channel, values) in renderings {
        let field: Vec<f64> = if shape.len() == 1 {
            values.iter().cycle().take(width * height).copied().collect()
        } else {
            values.clone()
        };
        let (bytes, bounds): (Vec<u8>, PgmBounds) = encode_pgm(width, height, &field)?;
        write_bytes(&dir.join(format!("{stem}_{channel}.pgm")), &bytes)?;
        sidecar.renderings.insert((*channel).to_string(), bounds);
    }
    write_bytes(&dir.join(format!("{stem}.bin")), &encode_raw(samples))?;
    write_json(&dir.join(format!("{stem}.json")), &sidecar)
}

/// Accepts the canonical JSON record or, for `.csv` files, plain 0/1 values.
pub fn read_mask(path: &Path) -> CliResult<SamplingMask> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return SamplingMask::from_csv(&text, Layout::Unshifted).map_err(|e| CliError::data(path, e));
    }
    let record: MaskJson = serde_json::from_str(&text).map_err(|e| CliError::data(path, e))?;
    SamplingMask::from_json(&record).map_err(|e| CliError::data(path, e))
}
