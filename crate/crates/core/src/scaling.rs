use crate::polynomial::Polynomial;

/// Affine map between an interval `[lo, hi]` in `x` and `[-1, 1]` in `t`,
/// `x = center + half_width * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub center: f64,
    pub half_width: f64,
}

impl AffineMap {
    pub fn onto_unit(lo: f64, hi: f64) -> Self {
        Self { center: 0.5 * (lo + hi), half_width: 0.5 * (hi - lo) }
    }

    /// The identity map, used to express forms in the raw monomial basis.
    pub fn identity() -> Self {
        Self { center: 0.0, half_width: 1.0 }
    }

    pub fn to_unit(&self, x: f64) -> f64 {
        (x - self.center) / self.half_width
    }

    pub fn from_unit(&self, t: f64) -> f64 {
        self.center + self.half_width * t
    }

    /// Re-expresses `p(x)` as a polynomial in `t`.
    pub fn poly_to_unit(&self, p: &Polynomial) -> Polynomial {
        if *self == Self::identity() {
            return p.clone();
        }
        p.compose_affine(self.center, self.half_width)
    }

    /// Re-expresses `q(t)` as a polynomial in `x`.
    pub fn poly_from_unit(&self, q: &Polynomial) -> Polynomial {
        if *self == Self::identity() {
            return q.clone();
        }
        q.compose_affine(-self.center / self.half_width, 1.0 / self.half_width)
    }

    /// Factor `half_width^(1-2k)` that converts `∫ (D_t^k g)² dt` into `∫ (D_x^k g)² dx`.
    pub fn order_factor(&self, k: usize) -> f64 {
        self.half_width.powi(1 - 2 * k as i32)
    }
}
