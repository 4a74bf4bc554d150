use super::LieAlgebra;
use crate::{Error, Result};

/// Radial bump: 1 on |x| ≤ r0, 0 on |x| ≥ r1, smooth in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub r0: f64,
    pub r1: f64,
}

fn bump_tail(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

impl Cutoff {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(Error::InvalidParam(format!("cutoff needs 0 < r0 < r1 < ∞, got ({r0}, {r1})")));
        }
        Ok(Cutoff { r0, r1 })
    }

    /// Primary cutoff: (0.2, 0.35) of the injectivity radius, or (1.25, 2.2) when it is infinite.
    pub fn primary(g: &LieAlgebra) -> Self {
        Self::fraction(g, 0.2, 0.35, (1.25, 2.2))
    }

    /// Composition cutoff χ′, ≡ 1 on supp χ ∗ supp χ for the primary χ.
    pub fn secondary(g: &LieAlgebra) -> Self {
        Self::fraction(g, 0.75, 0.95, (4.7, 6.0))
    }

    fn fraction(g: &LieAlgebra, a: f64, b: f64, fallback: (f64, f64)) -> Self {
        if g.injectivity_radius.is_finite() {
            Cutoff { r0: a * g.injectivity_radius, r1: b * g.injectivity_radius }
        } else {
            Cutoff { r0: fallback.0, r1: fallback.1 }
        }
    }

    pub fn profile(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.r0 {
            1.0
        } else if r >= self.r1 {
            0.0
        } else {
            let t = (r - self.r0) / (self.r1 - self.r0);
            let a = bump_tail(1.0 - t);
            a / (a + bump_tail(t))
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.profile(LieAlgebra::norm(x))
    }
}
