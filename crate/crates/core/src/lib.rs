//! Metric Clifford algebras built as gauge deformations of the Euclidean
//! geometric algebra of `R^n`.
//!
//! Multivectors are dense coefficient arrays of length `2^n` indexed by blade
//! bitmask: bit `i-1` set means `e_i` is a factor, factors in increasing index
//! order. Index 0 is the scalar, index `2^n − 1` the pseudoscalar
//! `e_1 ∧ … ∧ e_n`.

pub mod blade;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod extensor;
pub mod frame;
pub mod gauge;
pub mod golden;
pub mod metric;
pub mod multivector;
pub mod ortho;
pub mod random;

pub use eigen::EigenDecomposition;
pub use error::{GaError, Result};
pub use extensor::Extensor;
pub use frame::{
    deform_frame, gauge_bases, reciprocal, tetrad_bases, tetrad_components, transform_tensor2,
    transform_vector, Frame, GaugeBases, TetradComponents, TetradFrame, Variance,
};
pub use gauge::{factor_gauge, reconstruct, synth_metric, twist_gauge, GaugeFactorization};
pub use golden::{verify_golden, DeformedAlgebra, GoldenReport};
pub use metric::{MetricExtensor, Product, Signature};
pub use multivector::{Multivector, Scalar};
pub use ortho::{eta_basis_vector, eta_composite, eta_general, is_lorentz, OrthoMetric};
