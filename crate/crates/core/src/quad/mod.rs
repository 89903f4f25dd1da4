//! Quadrature oracles: adaptive Gauss-Kronrod integration, tanh-sinh for
//! endpoint singularities, Laplace transforms, and the oscillatory Bessel
//! integrals behind the spectral kernel representation and the Hankel
//! transform.

mod gk;
mod laplace;
mod oscillatory;
mod spectral;
mod tanh_sinh;

use num_complex::Complex64;

pub use gk::{integrate_adaptive, integrate_adaptive_breakpoints, MAX_PANELS};
pub use laplace::{laplace_transform, psi2_negative_quadrature};
pub use oscillatory::{partition_extrapolate, AITKEN_DEPTH};
pub use spectral::{
    hankel_transform, hankel_transform_tabulated, spectral_kernel_quadrature, MultiplierSpec,
};
pub use tanh_sinh::integrate_tanh_sinh;

/// How an integration finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadStatus {
    Converged,
    MaxSubdivisions,
    AcceleratedTail,
    TruncatedTail,
}

impl QuadStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            QuadStatus::Converged => "converged",
            QuadStatus::MaxSubdivisions => "max_subdivisions",
            QuadStatus::AcceleratedTail => "accelerated_tail",
            QuadStatus::TruncatedTail => "truncated_tail",
        }
    }

    /// Worst of two statuses, for results assembled from several pieces.
    pub(crate) fn combine(self, other: QuadStatus) -> QuadStatus {
        fn rank(s: QuadStatus) -> u8 {
            match s {
                QuadStatus::Converged => 0,
                QuadStatus::AcceleratedTail => 1,
                QuadStatus::TruncatedTail => 2,
                QuadStatus::MaxSubdivisions => 3,
            }
        }
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// Value of an integral with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub status: QuadStatus,
}

impl QuadratureResult {
    pub fn is_converged(&self) -> bool {
        self.status == QuadStatus::Converged
    }

    /// Sum of two pieces of one integral.
    pub(crate) fn join(self, other: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
            status: self.status.combine(other.status),
        }
    }

    pub(crate) fn scaled(mut self, factor: Complex64) -> QuadratureResult {
        self.value *= factor;
        self.abs_error_estimate *= factor.norm();
        self
    }

    /// Marks the result converged or not according to the requested tolerance.
    pub(crate) fn settle(mut self, tol: f64) -> QuadratureResult {
        if self.status == QuadStatus::Converged && self.abs_error_estimate > tol {
            self.status = QuadStatus::MaxSubdivisions;
        }
        self
    }
}
