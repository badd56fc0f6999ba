//! A digital-signal-processing workbench built around classroom-scale
//! exercises: spectral transforms and their identity algebra, FFT-domain
//! audio compression and steganography, biosignal rate estimation,
//! ideal-spectrum convolution in closed form, and EEG seizure-feature
//! extraction. Every numeric path is paired with an independent brute-force
//! oracle somewhere in the test suite.
//!
//! Start with the runnable examples (`cargo run --example <name>`) or the
//! `dspwb` binary, which exposes one subcommand per exercise family.

pub mod audio;
pub mod biosignal;
pub mod cli;
pub mod eeg;
pub mod error;
pub mod filters;
pub mod ideal;
pub mod io;
pub mod properties;
pub mod signal;
pub mod transform;

pub use error::{Error, Result};
pub use signal::Signal;
pub use transform::{DtftGrid, Spectrum};
