//! Weighted Sobolev least-squares fitting.
//!
//! The cost of a candidate polynomial `p` against a piecewise target `f` is
//!
//! ```text
//! F(p) = Σ_s Σ_k λ_{s,k} ∫_{segment s} (D^k f_s - D^k p)² dx
//! ```
//!
//! which is a quadratic `cᵀGc - 2cᵀr + s` in the coefficients `c` of `p`.
//! The Gram matrix, right-hand side and constant are assembled in closed
//! form from monomial integrals, and the minimizer solves `G c = r`.
//!
//! Assembly and solve happen in a variable rescaled so the objective's
//! domain maps onto `[-1, 1]`; the minimizer is mapped back afterwards.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{solve_symmetric, Matrix, SolveMethod};
use crate::polynomial::{falling_factorial, Polynomial};
use crate::scaling::AffineMap;
use crate::target::{surrogate_with, PiecewiseTarget, SampleSet, Segment};

/// Nonnegative weights `λ_{s,k}` indexed by segment and derivative order.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightTable {
    /// One weight per derivative order, shared by every segment.
    PerOrder(Vec<f64>),
    /// `rows[s][k]` is the weight of order `k` on segment `s`.
    PerSegment(Vec<Vec<f64>>),
}

impl WeightTable {
    pub fn per_order(weights: Vec<f64>) -> Result<Self> {
        check_weights(0, &weights, true)?;
        Ok(WeightTable::PerOrder(weights))
    }

    pub fn per_segment(rows: Vec<Vec<f64>>) -> Result<Self> {
        for (s, row) in rows.iter().enumerate() {
            check_weights(s, row, false)?;
        }
        Ok(WeightTable::PerSegment(rows))
    }

    /// Weight of order `order` on segment `segment`; missing entries are zero.
    pub fn weight(&self, segment: usize, order: usize) -> f64 {
        let row = match self {
            WeightTable::PerOrder(w) => Some(w),
            WeightTable::PerSegment(rows) => rows.get(segment),
        };
        row.and_then(|r| r.get(order)).copied().unwrap_or(0.0)
    }

    /// Largest order carrying a positive weight (0 when none do).
    pub fn max_order(&self) -> usize {
        let row_max = |row: &Vec<f64>| row.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        match self {
            WeightTable::PerOrder(w) => row_max(w),
            WeightTable::PerSegment(rows) => rows.iter().map(row_max).max().unwrap_or(0),
        }
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let scale = |row: &Vec<f64>| row.iter().map(|w| w * factor).collect::<Vec<_>>();
        match self {
            WeightTable::PerOrder(w) => Self::per_order(scale(w)),
            WeightTable::PerSegment(rows) => Self::per_segment(rows.iter().map(scale).collect()),
        }
    }
}

fn check_weights(segment: usize, row: &[f64], shared: bool) -> Result<()> {
    for (order, &value) in row.iter().enumerate() {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidWeight {
                segment: if shared { 0 } else { segment },
                order,
                value,
            });
        }
    }
    Ok(())
}

/// A target, a weight table and the requested output degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevObjective {
    target: PiecewiseTarget,
    weights: WeightTable,
    degree: usize,
}

impl SobolevObjective {
    pub fn new(target: PiecewiseTarget, weights: WeightTable, degree: usize) -> Result<Self> {
        if let WeightTable::PerSegment(rows) = &weights {
            if rows.len() != target.len() {
                return Err(Error::InvalidObjective(format!(
                    "weight table has {} segment rows but the target has {} segments",
                    rows.len(),
                    target.len()
                )));
            }
        }
        let max_order = weights.max_order();
        if max_order > degree {
            return Err(Error::InvalidObjective(format!(
                "derivative order {max_order} has a positive weight but the fit degree is {degree}"
            )));
        }
        if !(0..target.len()).any(|s| weights.weight(s, 0) > 0.0) {
            return Err(Error::InvalidObjective("all order-0 weights are zero".into()));
        }
        Ok(Self { target, weights, degree })
    }

    pub fn target(&self) -> &PiecewiseTarget {
        &self.target
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The same objective with every weight multiplied by `factor > 0`.
    pub fn with_scaled_weights(&self, factor: f64) -> Result<Self> {
        Self::new(self.target.clone(), self.weights.scaled(factor)?, self.degree)
    }

    fn weighted_terms(&self) -> impl Iterator<Item = (&Segment, usize, f64)> + '_ {
        let orders = self.weights.max_order();
        self.target.segments().iter().enumerate().flat_map(move |(s, seg)| {
            (0..=orders).filter_map(move |k| {
                let w = self.weights.weight(s, k);
                (w > 0.0).then_some((seg, k, w))
            })
        })
    }
}

/// `F(c) = cᵀGc - 2cᵀr + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub gram: Matrix,
    pub rhs: Vec<f64>,
    pub constant: f64,
}

impl QuadraticForm {
    pub fn evaluate(&self, c: &[f64]) -> f64 {
        let linear: f64 = c.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        self.gram.quadratic(c) - 2.0 * linear + self.constant
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

/// The objective's quadratic form in the raw monomial basis of `x` and in
/// the rescaled variable `t = map.to_unit(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub raw: QuadraticForm,
    pub scaled: QuadraticForm,
    pub map: AffineMap,
}

pub fn assemble(obj: &SobolevObjective) -> Assembly {
    let (lo, hi) = obj.target.domain();
    let map = AffineMap::onto_unit(lo, hi);
    Assembly {
        raw: assemble_in(obj, AffineMap::identity()),
        scaled: assemble_in(obj, map),
        map,
    }
}

fn monomial_integral(power: usize, lo: f64, hi: f64) -> f64 {
    let n = power as i32 + 1;
    (hi.powi(n) - lo.powi(n)) / n as f64
}

/// Assembles the form for coefficients of `q` where `p(x) = q(map.to_unit(x))`.
pub fn assemble_in(obj: &SobolevObjective, map: AffineMap) -> QuadraticForm {
    let m = obj.degree + 1;
    let mut gram = Matrix::zeros(m);
    let mut rhs = vec![0.0; m];
    let mut constant = 0.0;

    for (seg, k, lambda) in obj.weighted_terms() {
        let w = lambda * map.order_factor(k);
        let (tlo, thi) = (map.to_unit(seg.lo()), map.to_unit(seg.hi()));
        let target_k = map.poly_to_unit(seg.poly()).derivative(k);

        for i in k..m {
            let fi = falling_factorial(i, k);
            for j in i..m {
                let fj = falling_factorial(j, k);
                gram[(i, j)] += w * fi * fj * monomial_integral(i + j - 2 * k, tlo, thi);
            }
            let basis_k = Polynomial::monomial(i).derivative(k);
            rhs[i] += w * (&target_k * &basis_k).definite_integral(tlo, thi);
        }
        constant += w * (&target_k * &target_k).definite_integral(tlo, thi);
    }
    for i in 0..m {
        for j in 0..i {
            gram[(i, j)] = gram[(j, i)];
        }
    }
    QuadraticForm { gram, rhs, constant }
}

#[derive(Debug, Clone)]
pub struct Minimizer {
    pub coeffs: Vec<f64>,
    pub condition_estimate: f64,
    pub method: SolveMethod,
}

/// Solves the first-order conditions `G c = r`.
pub fn solve(form: &QuadraticForm) -> Result<Minimizer> {
    let sol = solve_symmetric(&form.gram, &form.rhs)?;
    Ok(Minimizer {
        condition_estimate: sol.condition_estimate(),
        coeffs: sol.x,
        method: sol.method,
    })
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub poly: Polynomial,
    pub cost: f64,
    pub gram_condition_estimate: f64,
    pub method: SolveMethod,
    pub form: Assembly,
}

impl FitResult {
    /// Coefficients of the fitted polynomial in the rescaled variable.
    pub fn scaled_coeffs(&self) -> Vec<f64> {
        let mut c = self.form.map.poly_to_unit(&self.poly).into_coeffs();
        c.resize(self.form.scaled.dim().max(c.len()), 0.0);
        c
    }
}

pub fn fit(obj: &SobolevObjective) -> Result<FitResult> {
    let form = assemble(obj);
    let minimizer = solve(&form.scaled)?;
    let in_unit = Polynomial::new(minimizer.coeffs)?;
    let poly = Polynomial::new(form.map.poly_from_unit(&in_unit).into_coeffs())?;
    let cost = cost_value(obj, &poly);
    Ok(FitResult {
        poly,
        cost,
        gram_condition_estimate: minimizer.condition_estimate,
        method: minimizer.method,
        form,
    })
}

/// Fits many objectives, results in input order.
pub fn fit_many(objs: &[SobolevObjective], exec: Execution) -> Vec<Result<FitResult>> {
    exec.map_slice(objs, fit)
}

/// `∫_lo^hi (D^k (f - p))² dx`, computed on `[-1, 1]` after rescaling the segment.
pub fn residual_energy(target: &Polynomial, p: &Polynomial, lo: f64, hi: f64, k: usize) -> f64 {
    let map = AffineMap::onto_unit(lo, hi);
    let d = map.poly_to_unit(&target.sub(p)).derivative(k);
    let value = (&d * &d).definite_integral(-1.0, 1.0) * map.order_factor(k);
    value.max(0.0)
}

/// Exact value of the weighted cost for any candidate polynomial.
pub fn cost_value(obj: &SobolevObjective, p: &Polynomial) -> f64 {
    obj.weighted_terms()
        .map(|(seg, k, w)| w * residual_energy(seg.poly(), p, seg.lo(), seg.hi(), k))
        .sum()
}

/// Surrogate-then-fit: replaces sampled data by a degree-`surrogate_degree`
/// least-squares polynomial and fits a degree-`degree` Sobolev approximation to it.
pub fn fit_final(
    samples: &SampleSet,
    degree: usize,
    surrogate_degree: usize,
    weights: WeightTable,
) -> Result<FitResult> {
    fit_final_with(samples, degree, surrogate_degree, weights, Execution::default())
}

pub fn fit_final_with(
    samples: &SampleSet,
    degree: usize,
    surrogate_degree: usize,
    weights: WeightTable,
    exec: Execution,
) -> Result<FitResult> {
    if surrogate_degree < degree {
        return Err(Error::InvalidObjective(format!(
            "surrogate degree {surrogate_degree} is below the output degree {degree}"
        )));
    }
    let target = surrogate_with(samples, surrogate_degree, exec)?;
    fit(&SobolevObjective::new(target, weights, degree)?)
}
