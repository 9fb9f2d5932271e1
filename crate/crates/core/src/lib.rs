//! Sampling and reconstruction in de Branges spaces `H(E)`.
//!
//! The crate works with Hermite–Biehler functions of the closed form
//! `E(z) = c · e^{-iaz} · ∏ (z - w_k)` with every `w_k` in the open lower
//! half-plane. On top of exact evaluation it provides reproducing kernels,
//! phase-equation node solvers, Parseval frame reconstructions for the
//! embedding `H(E) → H(EF)`, a two-signal multiplexer, and an independent
//! quadrature inner product used as a cross-check.
//!
//! Series over node windows are evaluated term-by-term in parallel when the
//! `parallel` feature (default) is enabled; every reduction is performed
//! sequentially in index order so results do not depend on thread count.

pub mod error;
pub mod frames;
pub mod hb;
pub mod kernel;
pub mod linalg;
pub mod multiplex;
pub mod nodes;
pub mod par;
pub mod presets;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use frames::FrameSystem;
pub use hb::{HermiteBiehlerFunction, PhaseValue};
pub use kernel::KernelCombination;
pub use multiplex::MultiplexedStream;
pub use nodes::NodeSet;
pub use num_complex::Complex64;
pub use space::{QuadratureResult, QuadratureSpec};
