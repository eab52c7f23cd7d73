//! Cartesian k-space subsampling masks and the image-space aliasing they induce.
//!
//! The crate is organised bottom-up:
//!
//! * [`dft`]: exact discrete Fourier transforms, layout shifts and the 2D extension.
//! * [`mask`]: equispaced, irregular-width, random and center-augmented line masks.
//! * [`alias`]: masked images, the analytic shifted-copies prediction, clamp reconstruction.
//! * [`symmetry`]: conjugate-symmetry accounting, measurement-operator rank and
//!   least-squares reconstruction.
//! * [`phantom`]: seeded synthetic magnetization profiles.
//! * [`experiment`] and [`verify`]: the Monte-Carlo comparison and invariant battery
//!   driven by the command-line tool.
//! * [`format`]: raw complex binary, sidecars and PGM encoding.
//!
//! The numerical core is generic over [`Scalar`]; the aliases below fix it to `f64`,
//! which is what the command-line tool and all stated tolerances use.

pub mod alias;
pub mod dft;
pub mod error;
pub mod experiment;
pub mod format;
pub mod linalg;
pub mod mask;
pub mod phantom;
pub mod scalar;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use mask::{Layout, MaskKind, MaskSpec, SamplingMask};

/// Length-N vector of double-precision complex samples.
pub type ComplexSignal = dft::Signal<f64>;
/// h×w row-major grid of double-precision complex samples.
pub type ComplexImage = dft::Image<f64>;
/// Analytic aliasing prediction in double precision.
pub type AliasPrediction = alias::AliasPrediction<f64>;
/// Real measurement operator in double precision.
pub type MeasurementOperator = symmetry::MeasurementOperator<f64>;
pub use phantom::PhantomSpec;
/// Double-precision complex number.
pub type Complex64 = num_complex::Complex<f64>;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
