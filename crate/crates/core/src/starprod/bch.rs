//! The BCH remainder {x, y} = x∗y − x − y as a Lie series.
//!
//! log(eˣeʸ) is expanded in the free associative algebra on {X, Y}; the degree-n part
//! is a Lie element, so it equals (1/n)·Σ c_w [w] with [w] the left-normed bracket
//! of the word w (Dynkin-Specht-Wever).

use crate::liecore::LieAlgebra;
use crate::poly::Poly;
use crate::{Error, Result, C64};
use std::collections::BTreeMap;

type Free = BTreeMap<Vec<u8>, f64>;

fn free_mul(a: &Free, b: &Free, max: usize) -> Free {
    let mut out = Free::new();
    for (u, cu) in a {
        for (v, cv) in b {
            if u.len() + v.len() > max {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_default() += cu * cv;
        }
    }
    out
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Lie terms of log(eˣeʸ) by degree: entry n holds (coefficient, word) with [w] left-normed.
fn dynkin_terms(max: usize) -> Vec<Vec<(f64, Vec<u8>)>> {
    let mut p = Free::new();
    for a in 0..=max {
        for b in 0..=max - a {
            if a + b == 0 {
                continue;
            }
            let mut w = vec![0u8; a];
            w.extend(std::iter::repeat_n(1u8, b));
            p.insert(w, 1.0 / (fact(a) * fact(b)));
        }
    }
    let mut log = Free::new();
    let mut pow = p.clone();
    for m in 1..=max {
        let s = if m % 2 == 1 { 1.0 } else { -1.0 } / m as f64;
        for (w, c) in &pow {
            *log.entry(w.clone()).or_default() += s * c;
        }
        pow = free_mul(&pow, &p, max);
    }
    let mut by_deg = vec![vec![]; max + 1];
    for (w, c) in log {
        let n = w.len();
        // [X, X, …] = 0: left-normed brackets starting with a repeated letter vanish
        if c.abs() < 1e-17 || (n >= 2 && w[0] == w[1]) {
            continue;
        }
        by_deg[n].push((c / n as f64, w));
    }
    by_deg
}

#[derive(Debug, Clone)]
pub struct BchSeries {
    pub algebra: LieAlgebra,
    pub max_order: usize,
    terms: Vec<Vec<(f64, Vec<u8>)>>,
}

impl BchSeries {
    pub fn new(algebra: &LieAlgebra, max_order: usize) -> Self {
        BchSeries { algebra: algebra.clone(), max_order, terms: dynkin_terms(max_order.max(2)) }
    }

    /// Degree-n Lie terms (coefficient, word over {0 = X, 1 = Y}).
    pub fn lie_terms(&self, n: usize) -> &[(f64, Vec<u8>)] {
        &self.terms[n]
    }

    /// Truncated {x, y} through total degree `order`.
    pub fn eval(&self, x: &[f64], y: &[f64], order: usize) -> Result<Vec<f64>> {
        let g = &self.algebra;
        crate::error::check_dim(g.dim(), x.len())?;
        crate::error::check_dim(g.dim(), y.len())?;
        if order > self.max_order {
            return Err(Error::InvalidParam(format!("order {order} exceeds series order {}", self.max_order)));
        }
        if LieAlgebra::norm(x) >= g.injectivity_radius || LieAlgebra::norm(y) >= g.injectivity_radius {
            return Err(Error::Precondition("arguments outside the exponential chart".into()));
        }
        let mut out = vec![0.0; g.dim()];
        for n in 2..=order {
            for (c, w) in &self.terms[n] {
                let pick = |l: u8| if l == 0 { x } else { y };
                let mut v = pick(w[0]).to_vec();
                for &l in &w[1..] {
                    v = g.bracket_unchecked(&v, pick(l));
                }
                for k in 0..out.len() {
                    out[k] += c * v[k];
                }
            }
        }
        Ok(out)
    }

    /// Components of {x, y} through degree `max_degree` as polynomials in `nvars`
    /// variables, x occupying indices x_off.. and y occupying y_off...
    pub fn symbolic(&self, nvars: usize, x_off: usize, y_off: usize, max_degree: usize) -> Result<Vec<Poly>> {
        if max_degree > self.max_order {
            return Err(Error::InvalidParam("degree exceeds series order".into()));
        }
        let g = &self.algebra;
        let n = g.dim();
        let xs: Vec<Poly> = (0..n).map(|k| Poly::var(nvars, x_off + k)).collect();
        let ys: Vec<Poly> = (0..n).map(|k| Poly::var(nvars, y_off + k)).collect();
        let bracket = |u: &[Poly], v: &[Poly]| -> Vec<Poly> {
            let mut out = vec![Poly::zero(nvars); n];
            for i in 0..n {
                for j in 0..n {
                    if u[i].is_zero() || v[j].is_zero() {
                        continue;
                    }
                    let prod = u[i].mul(&v[j]);
                    for (k, o) in out.iter_mut().enumerate() {
                        let c = g.c(i, j, k);
                        if c != 0.0 {
                            *o = o.add(&prod.scale(C64::new(c, 0.0)));
                        }
                    }
                }
            }
            out
        };
        let mut out = vec![Poly::zero(nvars); n];
        for deg in 2..=max_degree {
            for (c, w) in &self.terms[deg] {
                let pick = |l: u8| if l == 0 { &xs } else { &ys };
                let mut v = pick(w[0]).clone();
                for &l in &w[1..] {
                    v = bracket(&v, pick(l));
                }
                for k in 0..n {
                    out[k] = out[k].add(&v[k].scale(C64::new(*c, 0.0)));
                }
            }
        }
        Ok(out.into_iter().map(|p| p.prune(1e-15)).collect())
    }

    /// The (p, q)-homogeneous part of {x, y} in 2·dim variables (x first).
    pub fn bidegree(&self, p: usize, q: usize) -> Result<Vec<Poly>> {
        let n = self.algebra.dim();
        let full = self.symbolic(2 * n, 0, n, p + q)?;
        Ok(full
            .into_iter()
            .map(|poly| {
                Poly::from_terms(
                    2 * n,
                    poly.terms()
                        .filter(|(e, _)| {
                            e[..n].iter().sum::<u32>() as usize == p && e[n..].iter().sum::<u32>() as usize == q
                        })
                        .map(|(e, c)| (e.clone(), *c)),
                )
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn low_order_coefficients() {
        let t = dynkin_terms(3);
        let lookup2 = |w: &[u8]| t[2].iter().filter(|p| p.1 == w).map(|p| p.0).sum::<f64>();
        // ½[X, Y], spread over XY and YX = −XY
        assert!((lookup2(&[0, 1]) - lookup2(&[1, 0]) - 0.5).abs() < 1e-15);
        // 1/12 [X,[X,Y]] − 1/12 [Y,[X,Y]] in left-normed words: [[X,Y],Y]/12 − [[X,Y],X]/12
        let lookup = |w: &[u8]| t[3].iter().filter(|p| p.1 == w).map(|p| p.0).sum::<f64>();
        let xy_y = lookup(&[0, 1, 1]) - lookup(&[1, 0, 1]);
        let xy_x = lookup(&[0, 1, 0]) - lookup(&[1, 0, 0]);
        assert!((xy_y - 1.0 / 12.0).abs() < 1e-15);
        assert!((xy_x + 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn abelian_and_heisenberg_exact() {
        let a = BchSeries::new(&LieAlgebra::abelian(3), 8);
        assert_eq!(a.eval(&[1.0, 2.0, 3.0], &[0.5, 0.1, -1.0], 8).unwrap(), vec![0.0; 3]);
        let h = LieAlgebra::heisenberg();
        let s = BchSeries::new(&h, 8);
        let v = s.eval(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 8).unwrap();
        assert!((v[2] - 0.5).abs() < 1e-15 && v[0] == 0.0 && v[1] == 0.0);
        let (x, y) = ([0.3, -1.2, 0.7], [2.0, 0.4, -0.1]);
        let m = h.compose_matrix(&x, &y).unwrap();
        let r = s.eval(&x, &y, 8).unwrap();
        for k in 0..3 {
            assert!((m[k] - x[k] - y[k] - r[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn su2_series_matches_matrix_log() {
        let g = LieAlgebra::su2();
        let s = BchSeries::new(&g, 8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-0.05..0.05)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-0.05..0.05)).collect();
            let m = g.compose_matrix(&x, &y).unwrap();
            let r = s.eval(&x, &y, 8).unwrap();
            for k in 0..3 {
                assert!((m[k] - x[k] - y[k] - r[k]).abs() < 1e-10);
            }
            // {x, 0} = {0, y} = 0
            assert!(s.eval(&x, &[0.0; 3], 8).unwrap().iter().all(|v| *v == 0.0));
            assert!(s.eval(&[0.0; 3], &y, 8).unwrap().iter().all(|v| *v == 0.0));
        }
        assert!(s.eval(&[0.0; 3], &[0.0; 3], 9).is_err());
    }

    #[test]
    fn symbolic_agrees_with_numeric() {
        let g = LieAlgebra::su2();
        let s = BchSeries::new(&g, 6);
        let polys = s.symbolic(6, 0, 3, 5).unwrap();
        let (x, y) = ([0.2, -0.1, 0.3], [0.05, 0.25, -0.2]);
        let v = s.eval(&x, &y, 5).unwrap();
        let pt = [x[0], x[1], x[2], y[0], y[1], y[2]];
        for k in 0..3 {
            assert!((polys[k].eval(&pt).re - v[k]).abs() < 1e-14);
        }
        let b11 = s.bidegree(1, 1).unwrap();
        // ½[x,y]₃ = ½(x1y2 − x2y1)
        assert!((b11[2].coeff(&[1, 0, 0, 0, 1, 0]).re - 0.5).abs() < 1e-15);
    }
}
