//! Exact and numeric integrability thresholds for toric plurisubharmonic models.
//!
//! A toric model is a germ at the origin of the form
//! `φ = Σⱼ λⱼ log Σᵢ |z^{a_{ji}}|` with positive rational weights and
//! nonnegative rational exponent vectors. The crate provides
//!
//! * [`model`]: the model types, Newton valuations, Lelong numbers, the
//!   divisorial split along coordinate hyperplanes and the blow-up pullback;
//! * [`threshold`]: exact monomial thresholds `c*(a)` (dimension 2), monomial
//!   spectra, multiplier-ideal staircases and the cluster table of the
//!   truncated two-variable series;
//! * [`oracle`]: an independent shell-decomposed quadrature that classifies
//!   `∫|z^a|² e^{-2cφ}` as convergent or divergent and brackets thresholds;
//! * [`equi`]: the one-variable profile calculus used to decide whether
//!   `e^{-2u₁} - e^{-2u₂}` is integrable, and the blow-up obstruction pipeline.

pub mod equi;
pub mod error;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod sample;
pub mod threshold;
pub mod verify;

pub use error::{Error, Result};
pub use model::{LogSumTerm, Monomial, SeriesConfig, ToricModel};
pub use rational::Q;
