//! Approximation quality: closed-form per-order L2 residuals, a grid-based
//! L∞ error and the weighted total cost.

use crate::exec::Execution;
use crate::fit::{residual_energy, WeightTable};
use crate::polynomial::Polynomial;
use crate::target::PiecewiseTarget;

pub const DEFAULT_GRID_POINTS: usize = 4001;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// `l2_sq_by_order[k] = Σ_s ∫ (D^k f_s - D^k p)² dx`, unweighted.
    pub l2_sq_by_order: Vec<f64>,
    /// Largest `|f - p|` seen on the grid; a lower bound on the true L∞ error.
    pub linf_grid: f64,
    pub linf_argmax: f64,
    /// Grid points per segment.
    pub grid_points: usize,
    pub total_weighted_cost: f64,
}

pub fn error_report(
    target: &PiecewiseTarget,
    p: &Polynomial,
    weights: &WeightTable,
    grid_points: usize,
) -> ErrorReport {
    error_report_with(target, p, weights, grid_points, Execution::default())
}

/// Orders 0 and 1 are always reported, plus any higher order with a weight.
pub fn error_report_with(
    target: &PiecewiseTarget,
    p: &Polynomial,
    weights: &WeightTable,
    grid_points: usize,
    exec: Execution,
) -> ErrorReport {
    let grid_points = grid_points.max(2);
    let orders = weights.max_order().max(1);
    let mut l2_sq_by_order = vec![0.0; orders + 1];
    let mut total_weighted_cost = 0.0;
    for (s, seg) in target.segments().iter().enumerate() {
        for (k, slot) in l2_sq_by_order.iter_mut().enumerate() {
            let e = residual_energy(seg.poly(), p, seg.lo(), seg.hi(), k);
            *slot += e;
            let w = weights.weight(s, k);
            if w > 0.0 {
                total_weighted_cost += w * e;
            }
        }
    }
    let (linf_grid, linf_argmax) = linf_on_grid(target, p, grid_points, exec);
    ErrorReport { l2_sq_by_order, linf_grid, linf_argmax, grid_points, total_weighted_cost }
}

/// Point `j` of an `n`-point uniform grid on `[lo, hi]`. Grids whose sizes
/// satisfy `n' - 1 = m (n - 1)` share every point of the coarser grid.
pub fn grid_point(lo: f64, hi: f64, n: usize, j: usize) -> f64 {
    if j + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (j as f64 / (n - 1) as f64)
    }
}

fn linf_on_grid(
    target: &PiecewiseTarget,
    p: &Polynomial,
    n: usize,
    exec: Execution,
) -> (f64, f64) {
    let segs = target.segments();
    let total = segs.len() * n;
    let partial = exec.map_chunk_ranges(total, |range| {
        let mut best = (-1.0f64, f64::NAN);
        for idx in range {
            let seg = &segs[idx / n];
            let x = grid_point(seg.lo(), seg.hi(), n, idx % n);
            let err = (seg.poly().eval(x) - p.eval(x)).abs();
            if err > best.0 {
                best = (err, x);
            }
        }
        best
    });
    partial
        .into_iter()
        .fold((-1.0f64, f64::NAN), |best, cand| if cand.0 > best.0 { cand } else { best })
}

/// One report per labelled fit, in input order.
pub fn compare(
    target: &PiecewiseTarget,
    fits: &[(String, Polynomial)],
    weights: &WeightTable,
    grid_points: usize,
) -> Vec<(String, ErrorReport)> {
    compare_with(target, fits, weights, grid_points, Execution::default())
}

pub fn compare_with(
    target: &PiecewiseTarget,
    fits: &[(String, Polynomial)],
    weights: &WeightTable,
    grid_points: usize,
    exec: Execution,
) -> Vec<(String, ErrorReport)> {
    // grid evaluation inside each report is already chunked; fan out across fits too
    exec.map_slice(fits, |(label, p)| {
        (label.clone(), error_report_with(target, p, weights, grid_points, exec))
    })
}
