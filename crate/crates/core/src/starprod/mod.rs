//! Star products: the coefficient expansion of e^{i{x,y}·ζ}, the bidifferential
//! operators ⋆ʲ, the exact numeric ⋆_h and the asymptotic-expansion residuals.

mod bch;
mod numeric;

pub use bch::BchSeries;
pub use numeric::{expansion_residual, star_numeric, ExpansionRow, ExpansionTable, StarNumeric, StarNumericOptions};

use crate::liecore::LieAlgebra;
use crate::poly::Poly;
use crate::symbols::Symbol;
use crate::{Error, Result, C64};

/// One tuple (α, β, γ, c) of a ⋆ʲ b = Σ c ζ^γ ∂^α a ∂^β b.
#[derive(Debug, Clone, PartialEq)]
pub struct StarTerm {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: Vec<u32>,
    pub c: C64,
}

impl StarTerm {
    pub fn grading(&self) -> i64 {
        let s = |v: &[u32]| v.iter().sum::<u32>() as i64;
        s(&self.alpha) + s(&self.beta) - s(&self.gamma)
    }

    /// |α|+|β|−|γ| = j, |γ| ≤ min(|α|,|β|), max(|α|,|β|) ≤ j.
    pub fn satisfies_support(&self, j: usize) -> bool {
        let s = |v: &[u32]| v.iter().sum::<u32>() as i64;
        let (a, b, g) = (s(&self.alpha), s(&self.beta), s(&self.gamma));
        a + b - g == j as i64 && g <= a.min(b) && a.max(b) <= j as i64
    }
}

#[derive(Debug, Clone)]
pub struct StarCoefficients {
    pub dim: usize,
    /// Index j holds the tuples of grading j.
    pub by_order: Vec<Vec<StarTerm>>,
}

pub const MAX_STAR_ORDER: usize = 4;

/// Expand e^{i{x,y}·ζ} = Σ C x^α y^β ζ^γ through grading J and convert to
/// derivative form: c = C·(−i)^{|α|+|β|}.
pub fn star_coefficients(g: &LieAlgebra, order: usize) -> Result<StarCoefficients> {
    if order > MAX_STAR_ORDER {
        return Err(Error::InvalidParam(format!("star coefficients limited to J ≤ {MAX_STAR_ORDER}")));
    }
    let n = g.dim();
    let nv = 3 * n;
    let series = BchSeries::new(g, (order + 1).max(2));
    let b = series.symbolic(nv, 0, n, order + 1)?;
    let grading = |e: &[u32]| -> i64 {
        e[..2 * n].iter().sum::<u32>() as i64 - e[2 * n..].iter().sum::<u32>() as i64
    };
    let keep = |e: &[u32]| grading(e) <= order as i64;
    let mut s = Poly::zero(nv);
    for (k, bk) in b.iter().enumerate() {
        s = s.add(&bk.mul(&Poly::var(nv, 2 * n + k)).scale(C64::new(0.0, 1.0)));
    }
    let mut total = Poly::one(nv);
    let mut term = Poly::one(nv);
    for m in 1..=order {
        term = term.mul_filtered(&s, keep).scale(C64::new(1.0 / m as f64, 0.0));
        total = total.add(&term);
    }
    let mut by_order = vec![vec![]; order + 1];
    for (e, c) in total.terms() {
        if c.norm() < 1e-15 {
            continue;
        }
        let j = grading(e);
        let alpha = e[..n].to_vec();
        let beta = e[n..2 * n].to_vec();
        let gamma = e[2 * n..].to_vec();
        let k = (alpha.iter().sum::<u32>() + beta.iter().sum::<u32>()) as i32;
        let cc = c * C64::new(0.0, -1.0).powi(k);
        let t = StarTerm { alpha, beta, gamma, c: cc };
        if !t.satisfies_support(j as usize) {
            return Err(Error::Inconsistency(format!("star tuple violates support constraints: {t:?}")));
        }
        by_order[j as usize].push(t);
    }
    Ok(StarCoefficients { dim: n, by_order })
}

/// a ⋆ʲ b as a symbol (closed form for Gaussian and polynomial families).
pub fn star_j(coeffs: &StarCoefficients, a: &Symbol, b: &Symbol, j: usize) -> Result<Symbol> {
    let terms = coeffs
        .by_order
        .get(j)
        .ok_or_else(|| Error::InvalidParam(format!("coefficients computed only through j = {}", coeffs.by_order.len() - 1)))?;
    let n = coeffs.dim;
    let mut acc: Option<Symbol> = None;
    for t in terms {
        let da = a.derivative(&t.alpha)?;
        let db = b.derivative(&t.beta)?;
        let zeta = Symbol::polynomial(Poly::monomial(t.gamma.clone(), t.c));
        let piece = da.mul(&db)?.mul(&zeta)?;
        acc = Some(match acc {
            None => piece,
            Some(s) => s.add(&piece)?,
        });
    }
    match acc {
        Some(s) => Ok(s),
        None => a.mul(b).map(|s| s.scale(C64::new(0.0, 0.0))).or_else(|_| Ok(Symbol::constant(n, C64::new(0.0, 0.0)))),
    }
}

/// The j = 1 coefficients as a multiple λ of the Lie-Poisson bracket
/// {a, b}(ζ) = Σ c[i][j][k] ζₖ ∂ᵢa ∂ⱼb. Returns λ and the worst deviation.
pub fn poisson_multiple(g: &LieAlgebra, coeffs: &StarCoefficients) -> (C64, f64) {
    let n = g.dim();
    let unit = |i: usize| {
        let mut v = vec![0u32; n];
        v[i] = 1;
        v
    };
    let mut lambda: Option<C64> = None;
    let mut worst: f64 = 0.0;
    let lookup = |i: usize, j: usize, k: usize| -> C64 {
        coeffs.by_order[1]
            .iter()
            .filter(|t| t.alpha == unit(i) && t.beta == unit(j) && t.gamma == unit(k))
            .map(|t| t.c)
            .sum()
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let pb = g.c(i, j, k);
                let c = lookup(i, j, k);
                if pb != 0.0 {
                    let l = c / pb;
                    match lambda {
                        None => lambda = Some(l),
                        Some(l0) => worst = worst.max((l - l0).norm()),
                    }
                }
            }
        }
    }
    // every j = 1 tuple must be of the form (eᵢ, eⱼ, eₖ)
    let n_pb: usize = coeffs.by_order[1].len();
    let expected = (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).filter(|&(i, j, k)| g.c(i, j, k) != 0.0).count();
    if n_pb != expected {
        worst = f64::INFINITY;
    }
    let l = lambda.unwrap_or_default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((lookup(i, j, k) - l * g.c(i, j, k)).norm());
            }
        }
    }
    (l, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_order_is_pointwise_product() {
        let g = LieAlgebra::su2();
        let c = star_coefficients(&g, 2).unwrap();
        assert_eq!(c.by_order[0].len(), 1);
        assert_eq!(c.by_order[0][0].c, C64::new(1.0, 0.0));
        let a = Symbol::gaussian(&[0.0, 0.0, 1.0], 0.6).unwrap();
        let b = Symbol::gaussian(&[0.3, 0.0, 0.9], 0.8).unwrap();
        let p = star_j(&c, &a, &b, 0).unwrap();
        let z = [0.1, 0.2, 0.8];
        assert!((p.eval(&z) - a.eval(&z) * b.eval(&z)).norm() < 1e-14);
    }

    #[test]
    fn support_constraints_hold() {
        for g in [LieAlgebra::su2(), LieAlgebra::heisenberg()] {
            let c = star_coefficients(&g, 3).unwrap();
            for (j, ts) in c.by_order.iter().enumerate() {
                assert!(ts.iter().all(|t| t.satisfies_support(j)));
            }
        }
        assert!(star_coefficients(&LieAlgebra::su2(), 5).is_err());
    }

    #[test]
    fn abelian_has_no_corrections() {
        let c = star_coefficients(&LieAlgebra::abelian(3), 3).unwrap();
        assert!(c.by_order[1..].iter().all(|v| v.is_empty()));
    }

    #[test]
    fn first_order_is_a_fixed_multiple_of_poisson() {
        let mut lambdas = vec![];
        for g in [LieAlgebra::su2(), LieAlgebra::so3(), LieAlgebra::heisenberg(), LieAlgebra::sl2r(), LieAlgebra::so_n(4).unwrap()] {
            let c = star_coefficients(&g, 1).unwrap();
            let (l, dev) = poisson_multiple(&g, &c);
            assert!(dev < 1e-14, "{}: {dev}", g.name);
            lambdas.push(l);
        }
        for l in &lambdas {
            assert!((l - C64::new(0.0, -0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_kills_first_order() {
        let g = LieAlgebra::su2();
        let c = star_coefficients(&g, 1).unwrap();
        let a = Symbol::gaussian(&[0.0, 0.0, 1.0], 0.6).unwrap();
        let one = Symbol::constant(3, C64::new(1.0, 0.0));
        let s = star_j(&c, &a, &one, 1).unwrap();
        assert!(s.eval(&[0.1, 0.0, 0.9]).norm() == 0.0);
    }

    #[test]
    fn heisenberg_linear_symbols() {
        // hand expansion: ξ1 ⋆¹ ξ2 = c_{e1,e2,e3}·ζ3 = −(i/2) ζ3
        let g = LieAlgebra::heisenberg();
        let c = star_coefficients(&g, 2).unwrap();
        let a = Symbol::polynomial(Poly::var(3, 0));
        let b = Symbol::polynomial(Poly::var(3, 1));
        let s = star_j(&c, &a, &b, 1).unwrap();
        let z = [0.4, -0.7, 1.3];
        assert!((s.eval(&z) - C64::new(0.0, -0.5 * 1.3)).norm() < 1e-15);
        assert!(star_j(&c, &a, &b, 2).unwrap().eval(&z).norm() < 1e-15);
    }

    #[test]
    fn formal_associativity_through_second_order() {
        // Σ_{i+k=m} (a⋆ⁱb)⋆ᵏc = Σ_{i+k=m} a⋆ⁱ(b⋆ᵏc) for m ≤ 2
        let g = LieAlgebra::su2();
        let co = star_coefficients(&g, 2).unwrap();
        let a = Symbol::gaussian(&[0.0, 0.3, 1.0], 0.7).unwrap();
        let b = Symbol::gaussian_poly(&[0.2, 0.0, 0.9], &[0.8; 3], Poly::var(3, 0)).unwrap();
        let c = Symbol::gaussian(&[-0.1, 0.1, 1.1], 0.9).unwrap();
        let pts = [[0.1, 0.2, 1.0], [0.0, 0.0, 0.8], [-0.3, 0.4, 1.2]];
        for m in 0..=2 {
            for z in &pts {
                let mut l = C64::new(0.0, 0.0);
                let mut r = C64::new(0.0, 0.0);
                for i in 0..=m {
                    let k = m - i;
                    l += star_j(&co, &star_j(&co, &a, &b, i).unwrap(), &c, k).unwrap().eval(z);
                    r += star_j(&co, &a, &star_j(&co, &b, &c, k).unwrap(), i).unwrap().eval(z);
                }
                assert!((l - r).norm() < 1e-10, "m={m}: {l} vs {r}");
            }
        }
    }
}
