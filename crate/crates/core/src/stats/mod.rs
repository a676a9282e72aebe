//! Numerical statistics layer: quadrature, the skew normal family, empirical
//! distributions, Kolmogorov-Smirnov distance, and stochastic dominance.

pub mod empirical;
pub mod quadrature;
pub mod skew_normal;
pub mod special;

pub use empirical::{
    cdf_gaps, dkw_epsilon, dominates, ks_distance, ks_distance_precomputed, CdfSketch, Dominance,
    EmpiricalError, EmpiricalWelfare, InvalidAlpha, SampleMeta, SKETCH_BINS, SKETCH_TOL,
};
pub use quadrature::{integrate, integrate_with_splits, QuadratureError, MAX_DEPTH};
pub use skew_normal::{
    sn_cdf, sn_cdf_monotone_check, sn_mean, sn_pdf, InvalidShape, MonotoneReport, SkewNormal,
};
pub use special::{normal_cdf, normal_pdf, regularized_incomplete_beta};
