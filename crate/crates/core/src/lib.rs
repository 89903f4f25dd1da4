//! Kernels of multipliers of the Schrödinger operator with inverse square
//! potential on the half-line, together with the special functions and
//! quadrature oracles needed to evaluate and cross-check them.
//!
//! The operator `L_ν = d²/dx² − (ν² − 1/4)/x²` is diagonalised by the Hankel
//! transform of order `ν`, so every multiplier `φ(√(−L_ν))` has the kernel
//! `(x x′)^{1/2} ∫₀^∞ J_ν(ωx) J_ν(ωx′) φ(ω) ω dω`. The [`kernels`] module
//! evaluates the closed forms of the heat, weighted heat, Schrödinger,
//! resolvent, weighted resolvent and generalized resolvent kernels; the
//! [`quad`] module evaluates the same objects from their integral
//! representations.

pub mod bessel;
pub mod dd;
pub mod error;
pub mod hyper;
pub mod kernels;
pub mod numerics;
pub mod quad;

pub use error::{Error, Result};
pub use numerics::{ComplexScalar, EvalPath, SeriesResult};
