use kmask::phantom::{make_phantom, make_phantom_image};

use crate::args::PhantomCmd;
use crate::error::{CliError, CliResult};
use crate::io::{prepare_dir, write_json, write_raw};

pub fn run(cmd: &PhantomCmd) -> CliResult {
    if cmd.height == 0 || cmd.rows == 0 {
        return Err(CliError::Usage("--height and --rows must be at least 1".into()));
    }
    let spec = cmd.phantom.spec(cmd.n, cmd.seed);
    spec.validate()?;
    prepare_dir(&cmd.out_dir)?;
    let (shape, samples) = if cmd.height == 1 {
        (vec![cmd.n], make_phantom::<f64>(&spec)?.into_vec())
    } else {
        let image = make_phantom_image::<f64>(&spec, cmd.height)?;
        (vec![cmd.height, cmd.n], image.as_slice().to_vec())
    };
    let re = samples.iter().map(|c| c.re).collect();
    let im = samples.iter().map(|c| c.im).collect();
    write_raw(&cmd.out_dir, "phantom", shape, &samples, &[("real", re), ("imag", im)], cmd.rows)?;
    write_json(&cmd.out_dir.join("phantom_spec.json"), &spec)
}
