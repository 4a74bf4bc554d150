//! Sparse multivariate polynomials with complex coefficients.

use crate::C64;
use std::collections::BTreeMap;

pub type Exps = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, C64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C64::new(1.0, 0.0))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C64::new(1.0, 0.0))
    }

    pub fn monomial(exps: Exps, c: C64) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, C64)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> C64 {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exps, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let v = self.terms.entry(e.clone()).or_default();
        *v += c;
        if *v == C64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of each variable.
    pub fn max_exps(&self) -> Exps {
        let mut m = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (k, &v) in e.iter().enumerate() {
                m[k] = m[k].max(v);
            }
        }
        m
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), *c);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        self.mul_filtered(o, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered(&self, o: &Poly, keep: impl Fn(&[u32]) -> bool) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if keep(&e) {
                    p.add_term(e, c1 * c2);
                }
            }
        }
        p
    }

    pub fn conj(&self) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.conj());
        }
        p
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = e.clone();
                f[var] -= 1;
                p.add_term(f, c * e[var] as f64);
            }
        }
        p
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    m *= x[k].powi(p as i32);
                }
            }
            s += c * m;
        }
        s
    }

    pub fn eval_c(&self, x: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = C64::new(1.0, 0.0);
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    m *= x[k].powi(p as i32);
                }
            }
            s += c * m;
        }
        s
    }

    /// p(x) ↦ p(x + shift).
    pub fn shift(&self, shift: &[f64]) -> Poly {
        let subs: Vec<Poly> = (0..self.nvars)
            .map(|k| Poly::var(self.nvars, k).add(&Poly::constant(self.nvars, C64::new(shift[k], 0.0))))
            .collect();
        self.substitute(&subs)
    }

    /// p(x) ↦ p(s₁x₁, …, sₙxₙ).
    pub fn scale_vars(&self, s: &[f64]) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let f: f64 = e.iter().zip(s).map(|(&k, &sk)| sk.powi(k as i32)).product();
            p.add_term(e.clone(), c * f);
        }
        p
    }

    /// p(x) ↦ p(M x) for a real square matrix given row-major.
    pub fn linear_subst(&self, m: &[Vec<f64>]) -> Poly {
        let n = self.nvars;
        let subs: Vec<Poly> = (0..n)
            .map(|i| {
                let mut q = Poly::zero(n);
                for j in 0..n {
                    q = q.add(&Poly::var(n, j).scale(C64::new(m[i][j], 0.0)));
                }
                q
            })
            .collect();
        self.substitute(&subs)
    }

    /// Compose with polynomials for every variable (all in a common variable set).
    pub fn substitute(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(nv);
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(nv), s.clone()]).collect();
        for (e, c) in &self.terms {
            let mut m = Poly::constant(nv, *c);
            for (k, &p) in e.iter().enumerate() {
                while powers[k].len() <= p as usize {
                    let next = powers[k].last().unwrap().mul(&subs[k]);
                    powers[k].push(next);
                }
                if p > 0 {
                    m = m.mul(&powers[k][p as usize]);
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// Drop coefficients with modulus below `tol`.
    pub fn prune(&self, tol: f64) -> Poly {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if c.norm() > tol {
                p.add_term(e.clone(), *c);
            }
        }
        p
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn multi_factorial(e: &[u32]) -> f64 {
    e.iter().map(|&k| (1..=k).map(|i| i as f64).product::<f64>()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn shift_then_eval() {
        // (x+2y)^2 shifted by (1,-1) evaluated at (0.3,0.2)
        let p = Poly::var(2, 0).add(&Poly::var(2, 1).scale(c(2.0)));
        let q = p.mul(&p);
        let s = q.shift(&[1.0, -1.0]);
        let direct = ((0.3 + 1.0) + 2.0 * (0.2 - 1.0)) as f64;
        assert!((s.eval(&[0.3, 0.2]).re - direct * direct).abs() < 1e-13);
    }

    #[test]
    fn derivative_and_substitution() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).mul(&y);
        assert_eq!(p.derivative(0), x.mul(&y).scale(c(2.0)));
        let r = p.linear_subst(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(r, y.mul(&y).mul(&x));
    }
}
