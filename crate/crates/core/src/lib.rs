//! Polynomial approximation of activation functions under weighted Sobolev
//! least-squares costs.
//!
//! Given a target `f` (piecewise polynomial, or sampled and replaced by a
//! high-degree least-squares surrogate), [`fit`] finds the polynomial `p` of
//! a fixed low degree minimizing
//!
//! ```text
//! Σ_s Σ_k λ_{s,k} ∫_{segment s} (f^(k) - p^(k))² dx
//! ```
//!
//! so that slopes (and optionally higher derivatives) are matched alongside
//! values. With only order-0 weights this is ordinary continuous least squares.
//!
//! ```
//! use sobofit::{fit, relu_target, SobolevObjective, WeightTable};
//!
//! let objective = SobolevObjective::new(
//!     relu_target(-8.0, 8.0)?,
//!     WeightTable::per_order(vec![1.0, 1.0])?,
//!     2,
//! )?;
//! let result = fit(&objective)?;
//! let c = result.poly.coeffs();
//! assert!((c[0] - 0.7974683544).abs() < 1e-8);
//! assert!((c[1] - 0.5).abs() < 1e-12);
//! assert!((c[2] - 0.0563686709).abs() < 1e-8);
//! # Ok::<(), sobofit::Error>(())
//! ```
//!
//! Grid-heavy work (discrete fits over many samples, L∞ grids, batches of
//! fits) runs on rayon when the default `parallel` feature is enabled. Both
//! modes split work into the same chunks and give bit-identical results.

pub mod error;
pub mod exec;
pub mod fit;
pub mod linalg;
pub mod metrics;
pub mod polynomial;
pub mod scaling;
pub mod target;

pub use error::{Error, Result};
pub use exec::Execution;
pub use fit::{
    assemble, cost_value, fit, fit_final, fit_final_with, fit_many, solve, Assembly, FitResult,
    QuadraticForm, SobolevObjective, WeightTable,
};
pub use metrics::{
    compare, compare_with, error_report, error_report_with, ErrorReport, DEFAULT_GRID_POINTS,
};
pub use polynomial::Polynomial;
pub use scaling::AffineMap;
pub use target::{
    abs_target, default_surrogate_degree, discrete_polyfit, discrete_polyfit_with, relu_target,
    surrogate, PiecewiseTarget, SampleSet, Segment, SURROGATE_DEGREE_CAP,
};
