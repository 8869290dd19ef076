//! Functions to approximate: piecewise-polynomial targets, sampled data,
//! and the high-degree least-squares surrogate that stands in for sampled
//! smooth functions.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{Cholesky, Matrix};
use crate::polynomial::Polynomial;
use crate::scaling::AffineMap;

/// Largest degree accepted for discrete fits and surrogates.
pub const SURROGATE_DEGREE_CAP: usize = 24;

/// Surrogate degree used when none is requested: `max(3M, M + 10)`, capped.
pub fn default_surrogate_degree(output_degree: usize) -> usize {
    (3 * output_degree)
        .max(output_degree + 10)
        .min(SURROGATE_DEGREE_CAP)
}

/// An interval together with the target's polynomial restriction on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    lo: f64,
    hi: f64,
    poly: Polynomial,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, poly: Polynomial) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidDomain { lo, hi, reason: "endpoints must be finite" });
        }
        if !(lo < hi) {
            return Err(Error::InvalidDomain { lo, hi, reason: "lo must be below hi" });
        }
        Ok(Self { lo, hi, poly })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Ordered, non-overlapping segments. Gaps between segments are allowed and
/// simply do not contribute to any cost.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseTarget {
    segments: Vec<Segment>,
}

impl PiecewiseTarget {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidTarget("at least one segment is required".into()));
        }
        for (i, pair) in segments.windows(2).enumerate() {
            if pair[0].hi > pair[1].lo {
                return Err(Error::InvalidTarget(format!(
                    "segments {i} and {} overlap or are out of order ([{}, {}] then [{}, {}])",
                    i + 1,
                    pair[0].lo,
                    pair[0].hi,
                    pair[1].lo,
                    pair[1].hi
                )));
            }
        }
        Ok(Self { segments })
    }

    /// One segment carrying a single polynomial.
    pub fn single(lo: f64, hi: f64, poly: Polynomial) -> Result<Self> {
        Self::new(vec![Segment::new(lo, hi, poly)?])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Smallest interval containing every segment.
    pub fn domain(&self) -> (f64, f64) {
        (self.segments[0].lo, self.segments[self.segments.len() - 1].hi)
    }

    /// Value of the target at `x`, or `None` in a gap or outside all segments.
    ///
    /// Segments own their left endpoint. A right endpoint belongs to its
    /// segment unless the next segment starts exactly there.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let idx = self.segments.partition_point(|s| s.lo <= x);
        if idx == 0 {
            return None;
        }
        let seg = &self.segments[idx - 1];
        (x <= seg.hi).then(|| seg.poly.eval(x))
    }

    /// Intersects the target with a set of windows, keeping only the parts
    /// of segments that fall inside them.
    pub fn restrict(&self, windows: &[(f64, f64)]) -> Result<Self> {
        let mut windows = windows.to_vec();
        windows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = Vec::new();
        for &(wlo, whi) in &windows {
            for seg in &self.segments {
                let lo = seg.lo.max(wlo);
                let hi = seg.hi.min(whi);
                if lo < hi {
                    out.push(Segment::new(lo, hi, seg.poly.clone())?);
                }
            }
        }
        Self::new(out)
    }
}

fn check_straddles_zero(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < 0.0 && 0.0 < hi) {
        return Err(Error::InvalidDomain { lo, hi, reason: "domain must satisfy lo < 0 < hi" });
    }
    Ok(())
}

/// `max(0, x)` on `[lo, hi]`, split at the kink.
pub fn relu_target(lo: f64, hi: f64) -> Result<PiecewiseTarget> {
    check_straddles_zero(lo, hi)?;
    PiecewiseTarget::new(vec![
        Segment::new(lo, 0.0, Polynomial::zero())?,
        Segment::new(0.0, hi, Polynomial::monomial(1))?,
    ])
}

/// `|x|` on `[lo, hi]`, split at the kink.
pub fn abs_target(lo: f64, hi: f64) -> Result<PiecewiseTarget> {
    check_straddles_zero(lo, hi)?;
    PiecewiseTarget::new(vec![
        Segment::new(lo, 0.0, Polynomial::from_vec(vec![0.0, -1.0]))?,
        Segment::new(0.0, hi, Polynomial::monomial(1))?,
    ])
}

/// Sampled values of a function on a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
    domain_lo: f64,
    domain_hi: f64,
}

impl SampleSet {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, domain_lo: f64, domain_hi: f64) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSamples(format!(
                "{} x values but {} y values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidSamples("at least two samples are required".into()));
        }
        if !(domain_lo.is_finite() && domain_hi.is_finite() && domain_lo < domain_hi) {
            return Err(Error::InvalidDomain {
                lo: domain_lo,
                hi: domain_hi,
                reason: "sample domain must be finite with lo < hi",
            });
        }
        if let Some(i) = xs.iter().chain(&ys).position(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(format!("sample value {i} is not finite")));
        }
        if let Some(i) = xs.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSamples(format!(
                "x values must be strictly increasing (index {})",
                i + 1
            )));
        }
        if xs[0] < domain_lo || xs[xs.len() - 1] > domain_hi {
            return Err(Error::InvalidSamples(format!(
                "samples extend outside the domain [{domain_lo}, {domain_hi}]"
            )));
        }
        Ok(Self { xs, ys, domain_lo, domain_hi })
    }

    /// Uses the extreme sample positions as the domain.
    pub fn from_points(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let lo = xs.first().copied().unwrap_or(f64::NAN);
        let hi = xs.last().copied().unwrap_or(f64::NAN);
        if xs.len() < 2 {
            return Err(Error::InvalidSamples("at least two samples are required".into()));
        }
        Self::new(xs, ys, lo, hi)
    }

    /// `n` uniform samples of `f` on `[lo, hi]`, endpoints included.
    pub fn uniform(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSamples("at least two samples are required".into()));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
            .collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys, lo, hi)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_lo, self.domain_hi)
    }
}

/// Writes `P_0(t) .. P_{len-1}(t)` (Legendre) into `out`.
fn legendre_values(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = t;
    }
    for j in 1..out.len().saturating_sub(1) {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0) * t * out[j] - jf * out[j - 1]) / (jf + 1.0);
    }
}

/// Monomial expansions of `P_0 .. P_degree`.
fn legendre_polynomials(degree: usize) -> Vec<Polynomial> {
    let mut polys = vec![Polynomial::constant(1.0)];
    if degree >= 1 {
        polys.push(Polynomial::monomial(1));
    }
    let t = Polynomial::monomial(1);
    for j in 1..degree {
        let jf = j as f64;
        let next = (&t * &polys[j])
            .scale(2.0 * jf + 1.0)
            .sub(&polys[j - 1].scale(jf))
            .scale(1.0 / (jf + 1.0));
        polys.push(next);
    }
    polys
}

/// Discrete least-squares polynomial fit, `min Σ (y_i - p(x_i))²`.
pub fn discrete_polyfit(samples: &SampleSet, degree: usize) -> Result<Polynomial> {
    discrete_polyfit_with(samples, degree, Execution::default())
}

/// [`discrete_polyfit`] with an explicit execution mode.
///
/// The samples are mapped onto `[-1, 1]` and fitted in the Legendre basis,
/// whose normal equations stay well conditioned on dense grids; the result
/// is expanded back into monomials of the original variable.
pub fn discrete_polyfit_with(
    samples: &SampleSet,
    degree: usize,
    exec: Execution,
) -> Result<Polynomial> {
    if degree > SURROGATE_DEGREE_CAP {
        return Err(Error::DegreeTooHigh { degree, cap: SURROGATE_DEGREE_CAP });
    }
    let m = degree + 1;
    if samples.len() < m {
        return Err(Error::InsufficientSamples { degree, needed: m, got: samples.len() });
    }
    let (lo, hi) = samples.domain();
    let map = AffineMap::onto_unit(lo, hi);

    let partials = exec.map_chunk_ranges(samples.len(), |chunk| {
        let mut gram = vec![0.0; m * m];
        let mut rhs = vec![0.0; m];
        let mut basis = vec![0.0; m];
        for i in chunk {
            legendre_values(map.to_unit(samples.xs[i]), &mut basis);
            let y = samples.ys[i];
            for a in 0..m {
                rhs[a] += basis[a] * y;
                for b in a..m {
                    gram[a * m + b] += basis[a] * basis[b];
                }
            }
        }
        (gram, rhs)
    });

    let mut gram = Matrix::zeros(m);
    let mut rhs = vec![0.0; m];
    for (g, r) in &partials {
        for a in 0..m {
            rhs[a] += r[a];
            for b in a..m {
                gram[(a, b)] += g[a * m + b];
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }

    let chol = Cholesky::factor(&gram).map_err(|e| match e {
        Error::SingularSystem { pivot } => Error::SingularFit { index: pivot },
        other => other,
    })?;
    let legendre_coeffs = chol.solve(&rhs);

    let in_unit = legendre_polynomials(degree)
        .iter()
        .zip(&legendre_coeffs)
        .fold(Polynomial::zero(), |acc, (p, &c)| acc.add(&p.scale(c)));
    let fitted = map.poly_from_unit(&in_unit);
    Polynomial::new(fitted.into_coeffs())
}

/// High-degree least-squares surrogate over the whole sample domain,
/// returned as a single-segment target.
pub fn surrogate(samples: &SampleSet, degree: usize) -> Result<PiecewiseTarget> {
    surrogate_with(samples, degree, Execution::default())
}

pub fn surrogate_with(
    samples: &SampleSet,
    degree: usize,
    exec: Execution,
) -> Result<PiecewiseTarget> {
    let poly = discrete_polyfit_with(samples, degree, exec)?;
    let (lo, hi) = samples.domain();
    PiecewiseTarget::single(lo, hi, poly)
}
