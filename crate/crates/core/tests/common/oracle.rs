//! Test-only reference computations. Nothing here calls the fitting or
//! assembly code; only `Polynomial` evaluation/differentiation and the
//! target/weight containers are shared with the library.
#![allow(dead_code)]

use rand::Rng;
use sobofit::{PiecewiseTarget, Polynomial, Segment, SobolevObjective, WeightTable};

/// Composite Simpson rule with `panels` double-intervals.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// `∫ (D^k f - D^k p)²` over a segment by Simpson quadrature.
pub fn residual_energy_simpson(seg: &Segment, p: &Polynomial, k: usize, panels: usize) -> f64 {
    let fk = seg.poly().derivative(k);
    let pk = p.derivative(k);
    simpson(
        |x| {
            let r = fk.eval(x) - pk.eval(x);
            r * r
        },
        seg.lo(),
        seg.hi(),
        panels,
    )
}

/// Weighted cost by quadrature.
pub fn cost_simpson(obj: &SobolevObjective, p: &Polynomial, panels: usize) -> f64 {
    let w = obj.weights();
    let orders = w.max_order();
    obj.target()
        .segments()
        .iter()
        .enumerate()
        .flat_map(|(s, seg)| (0..=orders).map(move |k| (s, seg, k)))
        .filter(|&(s, _, k)| w.weight(s, k) > 0.0)
        .map(|(s, seg, k)| w.weight(s, k) * residual_energy_simpson(seg, p, k, panels))
        .sum()
}

/// Central-difference gradient.
pub fn central_gradient(f: impl Fn(&[f64]) -> f64, at: &[f64], step: f64) -> Vec<f64> {
    (0..at.len())
        .map(|i| {
            let mut plus = at.to_vec();
            let mut minus = at.to_vec();
            plus[i] += step;
            minus[i] -= step;
            (f(&plus) - f(&minus)) / (2.0 * step)
        })
        .collect()
}

/// Dense Gaussian elimination with partial pivoting, independent of the library solver.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expands `Σ_j a_j ((x - center)/scale)^j` into monomials of `x`.
pub fn expand_centered(a: &[f64], center: f64, scale: f64) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (j, &aj) in a.iter().enumerate() {
        let s = aj / scale.powi(j as i32);
        for i in 0..=j {
            out[i] += s * binomial(j, i) * (-center).powi((j - i) as i32);
        }
    }
    out
}

/// Discrete Sobolev least squares on a dense grid: trapezoid-weighted
/// residuals at `points` uniform nodes per segment, in the basis
/// `((x - c)/h)^j` of the objective's domain. Returns monomial coefficients in `x`.
pub fn dense_grid_fit(obj: &SobolevObjective, points: usize) -> Vec<f64> {
    let m = obj.degree() + 1;
    let (dlo, dhi) = obj.target().domain();
    let (c, h) = (0.5 * (dlo + dhi), 0.5 * (dhi - dlo));
    let weights = obj.weights();
    let orders = weights.max_order();
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    let mut basis = vec![0.0; m];
    for (s, seg) in obj.target().segments().iter().enumerate() {
        let dx = (seg.hi() - seg.lo()) / (points - 1) as f64;
        for k in 0..=orders {
            let lambda = weights.weight(s, k);
            if lambda == 0.0 {
                continue;
            }
            let fk = seg.poly().derivative(k);
            for i in 0..points {
                let x = seg.lo() + i as f64 * dx;
                let trap = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
                let w = lambda * trap * dx;
                let u = (x - c) / h;
                for (j, bj) in basis.iter_mut().enumerate() {
                    *bj = if j < k {
                        0.0
                    } else {
                        let ff: f64 = ((j + 1 - k)..=j).map(|v| v as f64).product();
                        ff * u.powi((j - k) as i32) / h.powi(k as i32)
                    };
                }
                let y = fk.eval(x);
                for p in 0..m {
                    b[p] += w * basis[p] * y;
                    for q in 0..m {
                        a[p][q] += w * basis[p] * basis[q];
                    }
                }
            }
        }
    }
    expand_centered(&gauss_solve(a, b), c, h)
}

/// Brute-force version of the surrogate-then-fit pipeline: minimizes
/// `Σ_grid (s - p)² Δx + Σ_grid (s' - p')² Δx` (weights per order) against
/// a given surrogate polynomial `s`, via raw monomial normal equations.
pub fn grid_sobolev_fit_raw(
    surrogate: &Polynomial,
    lo: f64,
    hi: f64,
    degree: usize,
    order_weights: &[f64],
    points: usize,
) -> Vec<f64> {
    let m = degree + 1;
    let dx = (hi - lo) / (points - 1) as f64;
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    for (k, &lambda) in order_weights.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let sk = surrogate.derivative(k);
        for i in 0..points {
            let x = lo + i as f64 * dx;
            let phi: Vec<f64> = (0..m)
                .map(|j| {
                    if j < k {
                        0.0
                    } else {
                        let ff: f64 = ((j + 1 - k)..=j).map(|v| v as f64).product();
                        ff * x.powi((j - k) as i32)
                    }
                })
                .collect();
            let y = sk.eval(x);
            for p in 0..m {
                b[p] += lambda * dx * phi[p] * y;
                for q in 0..m {
                    a[p][q] += lambda * dx * phi[p] * phi[q];
                }
            }
        }
    }
    gauss_solve(a, b)
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize, bound: f64) -> Polynomial {
    let d = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=d).map(|_| rng.gen_range(-bound..bound)).collect()).unwrap()
}

/// Sorted, non-overlapping segments inside `[-span, span]`, with occasional gaps.
pub fn random_target(rng: &mut impl Rng, span: f64) -> PiecewiseTarget {
    let n = rng.gen_range(1..=3usize);
    let width = 2.0 * span / n as f64;
    let segments = (0..n)
        .map(|i| {
            let cell_lo = -span + i as f64 * width;
            let lo = if rng.gen_bool(0.5) { cell_lo } else { cell_lo + rng.gen_range(0.0..0.3) * width };
            let hi = cell_lo + width - if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.3) * width };
            Segment::new(lo, hi, random_poly(rng, 5, 2.0)).unwrap()
        })
        .collect();
    PiecewiseTarget::new(segments).unwrap()
}

fn weight_row(rng: &mut impl Rng, orders: usize) -> Vec<f64> {
    (0..=orders).map(|_| rng.gen_range(0.0..2.0)).collect()
}

/// A valid objective: degree ≤ `max_degree`, derivative orders ≤ min(M, 3),
/// some order-0 weight ≥ 0.1.
pub fn random_objective(rng: &mut impl Rng, max_degree: usize, span: f64) -> SobolevObjective {
    let target = random_target(rng, span);
    let degree = rng.gen_range(0..=max_degree);
    let orders = rng.gen_range(0..=degree.min(3));
    let weights = if rng.gen_bool(0.5) {
        let mut w = weight_row(rng, orders);
        w[0] = w[0].max(0.1);
        WeightTable::per_order(w).unwrap()
    } else {
        let mut rows: Vec<Vec<f64>> = (0..target.len()).map(|_| weight_row(rng, orders)).collect();
        rows[0][0] = rows[0][0].max(0.1);
        WeightTable::per_segment(rows).unwrap()
    };
    SobolevObjective::new(target, weights, degree).unwrap()
}

/// Discrete least squares in the monomial basis of `t = (x - c)/h`, solved
/// through dense normal equations. Returns monomial coefficients in `x`.
pub fn monomial_lsq(xs: &[f64], ys: &[f64], lo: f64, hi: f64, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![0.0; m];
    let mut pow = vec![0.0; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let t = (x - c) / h;
        pow[0] = 1.0;
        for j in 1..m {
            pow[j] = pow[j - 1] * t;
        }
        for p in 0..m {
            b[p] += pow[p] * y;
            for q in 0..m {
                a[p][q] += pow[p] * pow[q];
            }
        }
    }
    expand_centered(&gauss_solve(a, b), c, h)
}
