//! Acceptance battery. Runs every criterion, prints one PASS/FAIL line each and exits
//! non-zero if any failed. Runtime limits are part of each criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use kmask::alias::{clamp_reconstruct, masked_image, predicted_alias_image};
use kmask::dft::{dft_reference, fftshift, Direction, Signal};
use kmask::mask::{
    default_negative_offset, equispaced_mask, offset_mask_irregular, random_mask, shift_mask, SamplingMask,
};
use kmask::phantom::make_phantom;
use kmask::symmetry::{measurement_matrix, numeric_rank, redundancy_report, retained_frequencies};
use kmask::verify::clamp_phantoms;
use kmask::{Complex64, Layout};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KMASK: &str = env!("CARGO_BIN_EXE_kmask");

type Check = Result<String, String>;

/// Identifier, name, runtime limit and body of one criterion.
type Criterion<'a> = (u32, &'static str, Option<Duration>, Box<dyn Fn() -> Check + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Signal<f64> {
    Signal::new((0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .expect("finite samples")
}

fn c1_alias_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cases, mut worst) = (0usize, 0.0f64);
    for r in [2usize, 3, 4, 5, 8] {
        for n in [8usize, 12, 16, 24, 60, 64] {
            if n % r != 0 {
                continue;
            }
            for offset in 0..r {
                let mask = equispaced_mask(n, r, offset).map_err(|e| e.to_string())?;
                for _ in 0..20 {
                    let x = random_signal(&mut rng, n);
                    let y = masked_image(&x, &mask).map_err(|e| e.to_string())?;
                    let p = predicted_alias_image(&x, r, offset).map_err(|e| e.to_string())?;
                    let rel = y.max_abs_diff(&p.predicted) / x.max_abs();
                    worst = worst.max(rel);
                    cases += 1;
                    ensure(rel < 1e-10, || format!("N={n} R={r} offset={offset}: relative error {rel:e}"))?;
                }
            }
        }
    }
    Ok(format!("{cases} signals, worst relative error {worst:.3e} < 1e-10"))
}

fn c2_retained_frequencies() -> Check {
    let f0 = retained_frequencies(&equispaced_mask(12, 4, 0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let f1 = retained_frequencies(&equispaced_mask(12, 4, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(f0 == [0, 4, -4], || format!("offset 0 retained {f0:?}"))?;
    ensure(f1 == [1, 5, -3], || format!("offset 1 retained {f1:?}"))?;
    Ok(format!("offset 0 -> {f0:?}, offset 1 -> {f1:?}"))
}

/// Rank of the real measurement operator through nalgebra's SVD, same relative cutoff.
fn oracle_rank(mask: &SamplingMask) -> usize {
    let op = measurement_matrix::<f64>(mask, mask.len()).expect("unshifted mask");
    let s = DMatrix::from_row_slice(op.rows(), op.cols(), op.data()).singular_values();
    let cutoff = 1e-9 * s.max();
    s.iter().filter(|&&v| v > cutoff).count()
}

fn rank_matches(mask: &SamplingMask, label: &str) -> Result<(), String> {
    let report = redundancy_report(mask).map_err(|e| e.to_string())?;
    let rank = numeric_rank(&measurement_matrix::<f64>(mask, mask.len()).map_err(|e| e.to_string())?, 1e-9)
        .map_err(|e| e.to_string())?;
    let oracle = oracle_rank(mask);
    ensure(rank == report.real_dof && oracle == rank, || {
        format!("{label}: real_dof {} rank {rank} oracle rank {oracle}", report.real_dof)
    })
}

fn c3_conjugate_symmetry() -> Check {
    let r0 = redundancy_report(&equispaced_mask(12, 4, 0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r1 = redundancy_report(&equispaced_mask(12, 4, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure((r0.unique_classes, r1.unique_classes) == (2, 3), || {
        format!("unique classes {} vs {}", r0.unique_classes, r1.unique_classes)
    })?;
    ensure((r0.real_dof, r1.real_dof) == (3, 6), || format!("real dof {} vs {}", r0.real_dof, r1.real_dof))?;
    let mut exhaustive = 0;
    for n in 1..=16usize {
        for r in 1..=n {
            for offset in 0..r {
                let Ok(mask) = equispaced_mask(n, r, offset) else { continue };
                rank_matches(&mask, &format!("equispaced N={n} R={r} offset={offset}"))?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..500 {
        let r = rng.random_range(2..=8);
        let center = rng.random_range(0..=64 / r);
        let mask = random_mask(64, r, rng.random(), center).map_err(|e| e.to_string())?;
        rank_matches(&mask, &format!("random mask {i} R={r} center={center}"))?;
    }
    Ok(format!(
        "classes 2 vs 3, dof 3 vs 6; rank == dof == nalgebra rank on {exhaustive} equispaced masks and 500 random masks"
    ))
}

/// Masked image through the quadratic-time transform, independent of the FFT path.
fn reference_masked_image(x: &Signal<f64>, mask: &SamplingMask) -> Signal<f64> {
    let spectrum = dft_reference(x, Direction::Forward);
    let kept: Vec<Complex64> =
        spectrum.as_slice().iter().zip(mask.bits()).map(|(&v, &b)| if b { v } else { Complex64::default() }).collect();
    dft_reference(&Signal::new(kept).expect("finite"), Direction::Inverse)
}

fn c4_clamp() -> Check {
    let (mut worst, mut min_mse0) = (0.0f64, f64::INFINITY);
    for n in [8usize, 64, 320] {
        let one = equispaced_mask(n, 4, 1).map_err(|e| e.to_string())?;
        let zero = equispaced_mask(n, 4, 0).map_err(|e| e.to_string())?;
        for (i, spec) in clamp_phantoms(n, 50, 4).into_iter().enumerate() {
            let x = make_phantom::<f64>(&spec).map_err(|e| e.to_string())?;
            ensure(x.as_slice().iter().all(|c| c.im == 0.0 && c.re >= 0.0), || {
                format!("N={n} phantom {i} not real non-negative")
            })?;
            ensure(spec.support_width() <= n / 2, || format!("N={n} phantom {i} support {}", spec.support_width()))?;
            let truth = x.re();
            let y = masked_image(&x, &one).map_err(|e| e.to_string())?;
            let y_ref = reference_masked_image(&x, &one);
            let route_gap = y.max_abs_diff(&y_ref);
            ensure(route_gap < 1e-11, || {
                format!("N={n} phantom {i}: FFT and reference masking differ by {route_gap:e}")
            })?;
            let rec = clamp_reconstruct(&y, 4);
            let err = rec.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(err);
            ensure(err < 1e-9, || format!("N={n} phantom {i} ({:?}): offset 1 error {err:e}", spec.kind))?;
            let rec0 = clamp_reconstruct(&reference_masked_image(&x, &zero), 4);
            let mse0 = rec0.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n as f64;
            min_mse0 = min_mse0.min(mse0);
            ensure(mse0 > 0.0, || format!("N={n} phantom {i}: offset 0 reconstructed exactly"))?;
        }
    }
    Ok(format!("150 phantoms, worst offset-1 error {worst:.3e} < 1e-9; smallest offset-0 MSE {min_mse0:.3e} > 0"))
}

fn c5_irregular_width() -> Check {
    let mut cases = 0;
    for r in [2usize, 3, 4, 8] {
        for n in (r..=128).step_by(r) {
            let a = offset_mask_irregular(n, r, 1, default_negative_offset(r)).map_err(|e| e.to_string())?;
            let b = equispaced_mask(n, r, 1).map_err(|e| e.to_string())?;
            ensure(a.bits() == b.bits(), || format!("N={n} R={r}: {:?} vs {:?}", a.indices(), b.indices()))?;
            cases += 1;
        }
    }
    let odd = offset_mask_irregular(13, 4, 1, default_negative_offset(4)).map_err(|e| e.to_string())?;
    let freqs = retained_frequencies(&odd).map_err(|e| e.to_string())?;
    ensure(odd.indices() == [1, 5, 10], || format!("N=13 indices {:?}", odd.indices()))?;
    ensure(freqs == [1, 5, -3], || format!("N=13 frequencies {freqs:?}"))?;
    Ok(format!("{cases} widths match naive offset 1; N=13 -> indices [1, 5, 10], frequencies {freqs:?}"))
}

fn c6_recon(dir: &Path) -> Check {
    let out = dir.join("recon.json");
    let status = Command::new(KMASK)
        .args(["recon", "--n", "64", "--accel", "4", "--center", "0", "--trials", "200", "--phantom", "random-smooth"])
        .args(["--offsets", "0,1", "--seed", "0", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || format!("recon exited with {}", status.status))?;
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mean = |arm: &str| {
        report["results"]
            .as_array()
            .and_then(|rs| rs.iter().find(|r| r["arm"] == arm))
            .and_then(|r| r["mean_mse"].as_f64())
            .ok_or_else(|| format!("arm {arm} missing from report"))
    };
    let (m0, m1, mr) = (mean("offset0")?, mean("offset1")?, mean("random")?);
    ensure(m1 < m0, || format!("offset1 {m1:.6e} not below offset0 {m0:.6e}"))?;
    Ok(format!("mean MSE offset0 {m0:.6e}, offset1 {m1:.6e}, random {mr:.6e}"))
}

fn c7_shift() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    for n in [12usize, 13] {
        let mut masks = vec![offset_mask_irregular(n, 4, 1, 2).map_err(|e| e.to_string())?];
        for offset in 0..4 {
            masks.push(equispaced_mask(n, 4, offset).map_err(|e| e.to_string())?);
        }
        for seed in 0..4 {
            masks.push(random_mask(n, 3, seed, 2).map_err(|e| e.to_string())?);
        }
        for mask in &masks {
            for _ in 0..25 {
                let x = random_signal(&mut rng, n);
                let direct =
                    fftshift(&kmask::alias::apply_mask(&x, Layout::Unshifted, mask).map_err(|e| e.to_string())?);
                let shifted = kmask::alias::apply_mask(&fftshift(&x), Layout::Shifted, &shift_mask(mask))
                    .map_err(|e| e.to_string())?;
                ensure(direct == shifted, || format!("N={n} mask {:?} differs", mask.indices()))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} masked spectra equal bit for bit"))
}

fn c8_verify(dir: &Path) -> Check {
    let out = dir.join("verify.json");
    let run = Command::new(KMASK).args(["verify", "--out"]).arg(&out).output().map_err(|e| e.to_string())?;
    ensure(run.status.success(), || {
        format!("verify exited with {}: {}", run.status, String::from_utf8_lossy(&run.stderr))
    })?;
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let checks = summary["checks"].as_array().map_or(0, Vec::len);
    ensure(summary["passed"] == true, || "summary reports a failed check".into())?;
    Ok(format!("{checks} checks passed"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<Criterion> = vec![
        (1, "alias identity grid", Some(Duration::from_secs(10)), Box::new(c1_alias_identity)),
        (2, "retained frequencies N=12", None, Box::new(c2_retained_frequencies)),
        (3, "conjugate-symmetry rank", Some(Duration::from_secs(30)), Box::new(c3_conjugate_symmetry)),
        (4, "ideal clamp reconstruction", None, Box::new(c4_clamp)),
        (5, "irregular-width consistency", None, Box::new(c5_irregular_width)),
        (6, "least-squares offset ordering", Some(Duration::from_secs(60)), Box::new(|| c6_recon(dir.path()))),
        (7, "shift handling", None, Box::new(c7_shift)),
        (8, "verify suite end to end", Some(Duration::from_secs(120)), Box::new(|| c8_verify(dir.path()))),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in &criteria {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > *limit => {
                Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
            }
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {id} ({name}): {detail} [{:.2} s]", elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
