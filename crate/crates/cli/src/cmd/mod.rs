pub mod analyze;
pub mod mask;
pub mod phantom;
pub mod recon;
pub mod simulate;
pub mod verify;

use kmask::mask::MaskWarning;
use kmask::SamplingMask;

pub(crate) fn report_warning(mask: &SamplingMask) {
    if mask.warning() == Some(MaskWarning::NonMultipleWidth) {
        eprintln!(
            "warning: width {} is not a multiple of R = {}; aliased copies fall between pixels",
            mask.len(),
            mask.spec().acceleration
        );
    }
}
