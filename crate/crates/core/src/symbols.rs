//! Symbols on the dual: evaluation, inverse Fourier transforms, rescaling, products,
//! derivatives and seminorm diagnostics.
//!
//! Fourier conventions (self-dual, dx = dξ = Lebesgue/(2π)^{n/2}):
//! a^∨(x) = ∫ a(ξ) e^{−i x·ξ} dξ and a(ξ) = ∫ a^∨(x) e^{i x·ξ} dx.

use crate::linalg::RMat;
use crate::poly::Poly;
use crate::quadrature::Rule;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(i32),
    NegInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    GaussianPoly,
    Polynomial,
    GridSampled,
}

/// P(ξ − ω)·exp(−Σ (ξₖ − ωₖ)²/(2sₖ²)), with P in the shifted variable η = ξ − ω.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussTerm {
    pub center: Vec<f64>,
    pub widths: Vec<f64>,
    pub poly: Poly,
}

/// Samples on a tensor grid, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSymbol {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Gaussian(Vec<GaussTerm>),
    Polynomial(Poly),
    Grid(GridSymbol),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub kind: Kind,
    pub order: Order,
    pub delta: f64,
}

impl GaussTerm {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn envelope(&self, xi: &[f64]) -> f64 {
        let q: f64 = (0..self.dim())
            .map(|k| (xi[k] - self.center[k]).powi(2) / (2.0 * self.widths[k] * self.widths[k]))
            .sum();
        (-q).exp()
    }

    fn eval(&self, xi: &[f64]) -> C64 {
        let eta: Vec<f64> = (0..self.dim()).map(|k| xi[k] - self.center[k]).collect();
        self.poly.eval(&eta) * self.envelope(xi)
    }

    fn derivative(&self, k: usize) -> GaussTerm {
        let n = self.dim();
        let s2 = self.widths[k] * self.widths[k];
        let p = self.poly.derivative(k).sub(&self.poly.mul(&Poly::var(n, k)).scale(C64::new(1.0 / s2, 0.0)));
        GaussTerm { center: self.center.clone(), widths: self.widths.clone(), poly: p }
    }

    fn product(&self, o: &GaussTerm) -> GaussTerm {
        let n = self.dim();
        let mut center = vec![0.0; n];
        let mut widths = vec![0.0; n];
        let mut log_c = 0.0;
        for k in 0..n {
            let (a, b) = (self.widths[k].powi(2), o.widths[k].powi(2));
            let s2 = a * b / (a + b);
            widths[k] = s2.sqrt();
            center[k] = s2 * (self.center[k] / a + o.center[k] / b);
            log_c -= (self.center[k] - o.center[k]).powi(2) / (2.0 * (a + b));
        }
        let d1: Vec<f64> = (0..n).map(|k| center[k] - self.center[k]).collect();
        let d2: Vec<f64> = (0..n).map(|k| center[k] - o.center[k]).collect();
        let poly = self.poly.shift(&d1).mul(&o.poly.shift(&d2)).scale(C64::new(log_c.exp(), 0.0));
        GaussTerm { center, widths, poly }
    }

    fn times_poly(&self, p: &Poly) -> GaussTerm {
        GaussTerm {
            center: self.center.clone(),
            widths: self.widths.clone(),
            poly: self.poly.mul(&p.shift(&self.center)),
        }
    }
}

impl Symbol {
    pub fn gaussian(center: &[f64], width: f64) -> Result<Self> {
        Self::gaussian_poly(center, &vec![width; center.len()], Poly::one(center.len()))
    }

    pub fn gaussian_poly(center: &[f64], widths: &[f64], poly: Poly) -> Result<Self> {
        if center.is_empty() || widths.len() != center.len() || poly.nvars() != center.len() {
            return Err(Error::InvalidParam("center, widths and polynomial must share the dimension".into()));
        }
        if widths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParam("widths must be positive and finite".into()));
        }
        Ok(Symbol {
            kind: Kind::Gaussian(vec![GaussTerm { center: center.to_vec(), widths: widths.to_vec(), poly }]),
            order: Order::NegInf,
            delta: 0.0,
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        let d = p.degree() as i32;
        Symbol { kind: Kind::Polynomial(p), order: Order::Finite(d), delta: 0.0 }
    }

    /// ⟨ξ⟩² = 1 + |ξ|².
    pub fn japanese_sq(dim: usize) -> Self {
        let mut p = Poly::one(dim);
        for k in 0..dim {
            p = p.add(&Poly::var(dim, k).mul(&Poly::var(dim, k)));
        }
        Self::polynomial(p)
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        Self::polynomial(Poly::constant(dim, c))
    }

    pub fn grid(axes: Vec<Vec<f64>>, values: Vec<C64>) -> Result<Self> {
        let n: usize = axes.iter().map(|a| a.len()).product();
        if axes.is_empty() || n != values.len() || axes.iter().any(|a| a.len() < 2) {
            return Err(Error::InvalidParam("grid axes and values disagree".into()));
        }
        Ok(Symbol { kind: Kind::Grid(GridSymbol { axes, values }), order: Order::NegInf, delta: 0.0 })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn family(&self) -> Family {
        match self.kind {
            Kind::Gaussian(_) => Family::GaussianPoly,
            Kind::Polynomial(_) => Family::Polynomial,
            Kind::Grid(_) => Family::GridSampled,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            Kind::Gaussian(t) => t[0].dim(),
            Kind::Polynomial(p) => p.nvars(),
            Kind::Grid(g) => g.axes.len(),
        }
    }

    pub fn terms(&self) -> Option<&[GaussTerm]> {
        match &self.kind {
            Kind::Gaussian(t) => Some(t),
            _ => None,
        }
    }

    pub fn eval(&self, xi: &[f64]) -> C64 {
        match &self.kind {
            Kind::Gaussian(ts) => ts.iter().map(|t| t.eval(xi)).sum(),
            Kind::Polynomial(p) => p.eval(xi),
            Kind::Grid(g) => g.interpolate(xi),
        }
    }

    /// Multiply a polynomial by exp(−|ξ|²/(2W²)); Gaussian symbols are returned unchanged.
    pub fn regularize(&self, width: f64) -> Result<Self> {
        match &self.kind {
            Kind::Polynomial(p) => {
                let n = p.nvars();
                let g = Self::gaussian(&vec![0.0; n], width)?;
                g.mul(self)
            }
            Kind::Gaussian(_) => Ok(self.clone()),
            Kind::Grid(_) => Err(Error::Unsupported("regularizing grid symbols".into())),
        }
    }

    pub fn fourier_inverse(&self) -> Result<FourierInverse> {
        match &self.kind {
            Kind::Gaussian(ts) => Ok(FourierInverse::Gaussian(ts.iter().map(PreparedTerm::new).collect())),
            Kind::Polynomial(_) => Err(Error::Unsupported(
                "polynomial symbols have distributional Fourier transforms; quantize them by symmetrization".into(),
            )),
            Kind::Grid(g) => Ok(FourierInverse::Grid(g.clone())),
        }
    }

    /// a_h(ξ) = a(hξ).
    pub fn rescale(&self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParam(format!("rescale needs h > 0, got {h}")));
        }
        let kind = match &self.kind {
            Kind::Gaussian(ts) => Kind::Gaussian(
                ts.iter()
                    .map(|t| GaussTerm {
                        center: t.center.iter().map(|c| c / h).collect(),
                        widths: t.widths.iter().map(|w| w / h).collect(),
                        poly: t.poly.scale_vars(&vec![h; t.dim()]),
                    })
                    .collect(),
            ),
            Kind::Polynomial(p) => Kind::Polynomial(p.scale_vars(&vec![h; p.nvars()])),
            Kind::Grid(g) => Kind::Grid(GridSymbol {
                axes: g.axes.iter().map(|a| a.iter().map(|v| v / h).collect()).collect(),
                values: g.values.clone(),
            }),
        };
        Ok(Symbol { kind, order: self.order, delta: self.delta })
    }

    pub fn conj(&self) -> Self {
        let kind = match &self.kind {
            Kind::Gaussian(ts) => Kind::Gaussian(
                ts.iter()
                    .map(|t| GaussTerm { center: t.center.clone(), widths: t.widths.clone(), poly: t.poly.conj() })
                    .collect(),
            ),
            Kind::Polynomial(p) => Kind::Polynomial(p.conj()),
            Kind::Grid(g) => {
                Kind::Grid(GridSymbol { axes: g.axes.clone(), values: g.values.iter().map(|v| v.conj()).collect() })
            }
        };
        Symbol { kind, order: self.order, delta: self.delta }
    }

    pub fn scale(&self, c: C64) -> Self {
        let kind = match &self.kind {
            Kind::Gaussian(ts) => Kind::Gaussian(
                ts.iter()
                    .map(|t| GaussTerm { center: t.center.clone(), widths: t.widths.clone(), poly: t.poly.scale(c) })
                    .collect(),
            ),
            Kind::Polynomial(p) => Kind::Polynomial(p.scale(c)),
            Kind::Grid(g) => Kind::Grid(GridSymbol { axes: g.axes.clone(), values: g.values.iter().map(|v| v * c).collect() }),
        };
        Symbol { kind, order: self.order, delta: self.delta }
    }

    pub fn add(&self, o: &Symbol) -> Result<Self> {
        crate::error::check_dim(self.dim(), o.dim())?;
        match (&self.kind, &o.kind) {
            (Kind::Gaussian(a), Kind::Gaussian(b)) => Ok(Symbol {
                kind: Kind::Gaussian(a.iter().chain(b).cloned().collect()),
                order: Order::NegInf,
                delta: self.delta.max(o.delta),
            }),
            (Kind::Polynomial(a), Kind::Polynomial(b)) => Ok(Self::polynomial(a.add(b))),
            _ => Err(Error::Unsupported("sum of symbols from different families".into())),
        }
    }

    /// Pointwise product (closed form for Gaussian and polynomial families).
    pub fn mul(&self, o: &Symbol) -> Result<Self> {
        crate::error::check_dim(self.dim(), o.dim())?;
        let delta = self.delta.max(o.delta);
        match (&self.kind, &o.kind) {
            (Kind::Gaussian(a), Kind::Gaussian(b)) => Ok(Symbol {
                kind: Kind::Gaussian(a.iter().flat_map(|s| b.iter().map(move |t| s.product(t))).collect()),
                order: Order::NegInf,
                delta,
            }),
            (Kind::Gaussian(a), Kind::Polynomial(p)) | (Kind::Polynomial(p), Kind::Gaussian(a)) => Ok(Symbol {
                kind: Kind::Gaussian(a.iter().map(|t| t.times_poly(p)).collect()),
                order: Order::NegInf,
                delta,
            }),
            (Kind::Polynomial(p), Kind::Polynomial(q)) => Ok(Self::polynomial(p.mul(q))),
            _ => Err(Error::Unsupported("products involving grid symbols".into())),
        }
    }

    /// ∂^α a in closed form.
    pub fn derivative(&self, alpha: &[u32]) -> Result<Self> {
        crate::error::check_dim(self.dim(), alpha.len())?;
        match &self.kind {
            Kind::Gaussian(ts) => {
                let mut out = ts.clone();
                for (k, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        out = out.iter().map(|t| t.derivative(k)).collect();
                    }
                }
                Ok(Symbol { kind: Kind::Gaussian(out), order: Order::NegInf, delta: self.delta })
            }
            Kind::Polynomial(p) => {
                let mut q = p.clone();
                for (k, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        q = q.derivative(k);
                    }
                }
                Ok(Self::polynomial(q))
            }
            Kind::Grid(_) => Err(Error::Unsupported("closed-form derivatives of grid symbols".into())),
        }
    }

    /// Coadjoint translate (g·a)(ξ) = a(R⁻¹ξ) for an orthogonal coadjoint matrix R.
    pub fn act(&self, r: &RMat) -> Result<Self> {
        let n = self.dim();
        if r.shape() != (n, n) {
            return Err(Error::Dim { expected: n, got: r.nrows() });
        }
        let orth = (r.transpose() * r - RMat::identity(n, n)).norm();
        if orth > 1e-10 {
            return Err(Error::Unsupported("coadjoint action only for orthogonal coadjoint matrices".into()));
        }
        let rinv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| r[(j, i)]).collect()).collect();
        let kind = match &self.kind {
            Kind::Gaussian(ts) => {
                let mut out = vec![];
                for t in ts {
                    if t.widths.iter().any(|w| (w - t.widths[0]).abs() > 1e-14 * t.widths[0]) {
                        return Err(Error::Unsupported("coadjoint action on anisotropic Gaussians".into()));
                    }
                    out.push(GaussTerm {
                        center: (0..n).map(|i| (0..n).map(|j| r[(i, j)] * t.center[j]).sum()).collect(),
                        widths: t.widths.clone(),
                        poly: t.poly.linear_subst(&rinv),
                    });
                }
                Kind::Gaussian(out)
            }
            Kind::Polynomial(p) => Kind::Polynomial(p.linear_subst(&rinv)),
            Kind::Grid(_) => return Err(Error::Unsupported("coadjoint action on grid symbols".into())),
        };
        Ok(Symbol { kind, order: self.order, delta: self.delta })
    }

    /// sup over the grid of |∂^α a(ξ)|·⟨ξ⟩^{|α|−m}.
    pub fn seminorm_estimate(&self, alpha: &[u32], grid: &[Vec<f64>], m: f64) -> Result<f64> {
        if grid.is_empty() {
            return Err(Error::InvalidParam("seminorm grid is empty".into()));
        }
        let k: u32 = alpha.iter().sum();
        if k > 4 {
            return Err(Error::InvalidParam("seminorm estimates need |α| ≤ 4".into()));
        }
        let da = match self.kind {
            Kind::Grid(_) => None,
            _ => Some(self.derivative(alpha)?),
        };
        let mut worst: f64 = 0.0;
        for xi in grid {
            let jb = (1.0 + xi.iter().map(|v| v * v).sum::<f64>()).sqrt();
            let v = match &da {
                Some(d) => d.eval(xi).norm(),
                None => self.finite_difference(alpha, xi, 1e-4 * jb).norm(),
            };
            worst = worst.max(v * jb.powf(k as f64 - m));
        }
        Ok(worst)
    }

    fn finite_difference(&self, alpha: &[u32], xi: &[f64], step: f64) -> C64 {
        match alpha.iter().position(|&a| a > 0) {
            None => self.eval(xi),
            Some(k) => {
                let mut a2 = alpha.to_vec();
                a2[k] -= 1;
                let mut p = xi.to_vec();
                let mut q = xi.to_vec();
                p[k] += step;
                q[k] -= step;
                (self.finite_difference(&a2, &p, step) - self.finite_difference(&a2, &q, step)) / (2.0 * step)
            }
        }
    }
}

impl GridSymbol {
    fn interpolate(&self, xi: &[f64]) -> C64 {
        let n = self.axes.len();
        let mut lo = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for k in 0..n {
            let a = &self.axes[k];
            let (first, last) = (a[0], a[a.len() - 1]);
            if xi[k] < first || xi[k] > last {
                return C64::new(0.0, 0.0);
            }
            let mut i = a.partition_point(|&v| v <= xi[k]).saturating_sub(1);
            if i >= a.len() - 1 {
                i = a.len() - 2;
            }
            lo[k] = i;
            frac[k] = (xi[k] - a[i]) / (a[i + 1] - a[i]);
        }
        let mut acc = C64::new(0.0, 0.0);
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut idx = 0usize;
            for k in 0..n {
                let bit = (corner >> k) & 1;
                w *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
                idx = idx * self.axes[k].len() + lo[k] + bit;
            }
            if w != 0.0 {
                acc += self.values[idx] * w;
            }
        }
        acc
    }

    fn points(&self) -> impl Iterator<Item = (Vec<f64>, C64, f64)> + '_ {
        let n = self.axes.len();
        let cell: f64 = self.axes.iter().map(|a| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64).product();
        self.values.iter().enumerate().map(move |(flat, v)| {
            let mut rem = flat;
            let mut xi = vec![0.0; n];
            let mut w = cell;
            for k in (0..n).rev() {
                let len = self.axes[k].len();
                let i = rem % len;
                rem /= len;
                xi[k] = self.axes[k][i];
                if i == 0 || i == len - 1 {
                    w *= 0.5;
                }
            }
            (xi, *v, w)
        })
    }
}

/// Prepared a^∨ for a Gaussian-polynomial term:
/// e^{−i x·ω} Σ c_α ∏ₖ sₖ(−i sₖ)^{αₖ} He_{αₖ}(sₖxₖ) e^{−sₖ²xₖ²/2}.
#[derive(Debug, Clone)]
pub struct PreparedTerm {
    center: Vec<f64>,
    widths: Vec<f64>,
    coeffs: Vec<(Vec<u32>, C64)>,
    max_deg: Vec<u32>,
}

impl PreparedTerm {
    fn new(t: &GaussTerm) -> Self {
        let coeffs = t
            .poly
            .terms()
            .map(|(e, c)| {
                let mut f = *c;
                for (k, &a) in e.iter().enumerate() {
                    let s = t.widths[k];
                    f *= C64::new(0.0, -s).powi(a as i32) * s;
                }
                (e.clone(), f)
            })
            .collect();
        PreparedTerm { center: t.center.clone(), widths: t.widths.clone(), coeffs, max_deg: t.poly.max_exps() }
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        let n = x.len();
        let mut q = 0.0;
        let mut phase = 0.0;
        let mut he: Vec<Vec<f64>> = Vec::with_capacity(n);
        for k in 0..n {
            let u = self.widths[k] * x[k];
            q += 0.5 * u * u;
            phase -= x[k] * self.center[k];
            he.push(hermite_he(self.max_deg[k] as usize, u));
        }
        let mut s = C64::new(0.0, 0.0);
        for (e, c) in &self.coeffs {
            let mut m = 1.0;
            for k in 0..n {
                m *= he[k][e[k] as usize];
            }
            s += c * m;
        }
        s * C64::from_polar((-q).exp(), phase)
    }

    /// Gauss-Hermite discretization of ∫ a^∨(x) f(x) dx as Σ W·f(x) over tensor nodes
    /// x = u/s; nodes with |W| ≤ `drop` are skipped.
    pub fn hermite_nodes(&self, rule: &Rule, drop: f64) -> Vec<(Vec<f64>, C64)> {
        let n = self.center.len();
        let m = rule.len();
        let norm = 1.0 / (2.0 * PI).sqrt();
        let smul: f64 = self.widths.iter().product();
        let he: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|k| rule.nodes.iter().map(|&u| hermite_he(self.max_deg[k] as usize, u)).collect())
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let mut w = 1.0 / smul;
            let mut phase = 0.0;
            let mut x = vec![0.0; n];
            for k in 0..n {
                w *= rule.weights[idx[k]] * norm;
                x[k] = rule.nodes[idx[k]] / self.widths[k];
                phase -= x[k] * self.center[k];
            }
            let mut p = C64::new(0.0, 0.0);
            for (e, c) in &self.coeffs {
                let mut v = 1.0;
                for k in 0..n {
                    v *= he[k][idx[k]][e[k] as usize];
                }
                p += c * v;
            }
            let wt = p * C64::from_polar(w, phase);
            if wt.norm() > drop {
                out.push((x, wt));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < m {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        out
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// Radius beyond which this term is below e^{-40} of its scale.
    pub fn support_radius(&self) -> f64 {
        let smin = self.widths.iter().cloned().fold(f64::INFINITY, f64::min);
        let deg = self.max_deg.iter().sum::<u32>() as f64;
        (80f64.sqrt() + deg.sqrt() * 1.5) / smin
    }
}

/// Probabilists' Hermite polynomials He_0..He_n at u.
pub fn hermite_he(n: usize, u: f64) -> Vec<f64> {
    let mut h = vec![1.0; n + 1];
    if n >= 1 {
        h[1] = u;
    }
    for k in 1..n {
        h[k + 1] = u * h[k] - k as f64 * h[k - 1];
    }
    h
}

#[derive(Debug, Clone)]
pub enum FourierInverse {
    Gaussian(Vec<PreparedTerm>),
    Grid(GridSymbol),
}

impl FourierInverse {
    pub fn eval(&self, x: &[f64]) -> C64 {
        match self {
            FourierInverse::Gaussian(ts) => ts.iter().map(|t| t.eval(x)).sum(),
            FourierInverse::Grid(g) => {
                let n = g.axes.len() as f64;
                let norm = (2.0 * PI).powf(-n / 2.0);
                g.points()
                    .map(|(xi, v, w)| {
                        let ph: f64 = -xi.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
                        v * C64::from_polar(w * norm, ph)
                    })
                    .sum()
            }
        }
    }

    /// Radius outside which a^∨ is negligible (infinite for grid transforms).
    pub fn support_radius(&self) -> f64 {
        match self {
            FourierInverse::Gaussian(ts) => ts.iter().map(|t| t.support_radius()).fold(0.0, f64::max),
            FourierInverse::Grid(_) => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::hermite_prob;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    /// a(ξ) = ∫ a^∨(x) e^{ixξ} dx by tensor Gauss-Hermite in x (oracle for the closed form).
    fn forward(f: &FourierInverse, xi: &[f64], scale: f64) -> C64 {
        let r = hermite_prob(60);
        let n = xi.len();
        let mut acc = C64::new(0.0, 0.0);
        let total = r.len().pow(n as u32);
        for flat in 0..total {
            let mut rem = flat;
            let mut x = vec![0.0; n];
            let mut w = 1.0;
            for k in 0..n {
                let i = rem % r.len();
                rem /= r.len();
                x[k] = r.nodes[i] * scale;
                w *= r.weights[i] * scale * (0.5 * r.nodes[i] * r.nodes[i]).exp() / (2.0 * PI).sqrt();
            }
            let ph: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            acc += f.eval(&x) * C64::from_polar(w, ph);
        }
        acc
    }

    #[test]
    fn standard_gaussian_is_self_dual() {
        let a = Symbol::gaussian(&[0.0, 0.0, 0.0], 1.0).unwrap();
        let f = a.fourier_inverse().unwrap();
        for x in [[0.0, 0.0, 0.0], [0.3, -1.0, 2.0], [1.5, 0.5, 0.0]] {
            let want = (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
            assert!((f.eval(&x) - c(want)).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_gaussian_transform() {
        // a = ξ1 e^{−|ξ|²/2} → a^∨(x) = −i x1 e^{−|x|²/2}
        let a = Symbol::gaussian_poly(&[0.0, 0.0], &[1.0, 1.0], Poly::var(2, 0)).unwrap();
        let f = a.fourier_inverse().unwrap();
        let x = [0.7, -0.4];
        let want = C64::new(0.0, -0.7) * (-0.5 * (0.49 + 0.16f64)).exp();
        assert!((f.eval(&x) - want).norm() < 1e-14);
        // and equals the closed-form derivative of the plain Gaussian, up to sign
        let g = Symbol::gaussian(&[0.0, 0.0], 1.0).unwrap().derivative(&[1, 0]).unwrap();
        assert!((g.eval(&[0.3, 0.2]) + a.eval(&[0.3, 0.2])).norm() < 1e-15);
    }

    #[test]
    fn round_trip_through_forward_transform() {
        let p = Poly::from_terms(2, [(vec![0, 0], c(1.0)), (vec![2, 1], C64::new(0.5, -0.2)), (vec![0, 3], c(0.1))]);
        let a = Symbol::gaussian_poly(&[0.4, -0.3], &[0.8, 1.3], p).unwrap();
        let f = a.fourier_inverse().unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..25 {
            let xi = [-1.5 + 0.13 * k as f64, 0.9 - 0.07 * k as f64];
            worst = worst.max((forward(&f, &xi, 1.0) - a.eval(&xi)).norm());
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn rescale_is_an_action_and_scales_the_transform() {
        let p = Poly::from_terms(3, [(vec![0, 0, 0], c(1.0)), (vec![1, 0, 1], c(2.0))]);
        let a = Symbol::gaussian_poly(&[0.2, 0.0, 1.0], &[0.5, 0.7, 0.6], p).unwrap();
        let xi = [0.3, -0.1, 0.8];
        assert_eq!(a.rescale(1.0).unwrap(), a);
        let two = a.rescale(0.5).unwrap().rescale(4.0).unwrap();
        assert!((two.eval(&xi) - a.rescale(2.0).unwrap().eval(&xi)).norm() < 1e-14);
        assert!((a.rescale(2.0).unwrap().eval(&xi) - a.eval(&[0.6, -0.2, 1.6])).norm() < 1e-14);
        // a_h^∨(x) = h^{−n} a^∨(x/h)
        let h = 2.0;
        let x = [0.1, 0.4, -0.3];
        let lhs = a.rescale(h).unwrap().fourier_inverse().unwrap().eval(&x);
        let rhs = a.fourier_inverse().unwrap().eval(&x.map(|v| v / h)) / h.powi(3);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(a.rescale(0.0).is_err());
    }

    #[test]
    fn products_and_derivatives_pointwise() {
        let a = Symbol::gaussian_poly(&[0.5, 0.0], &[0.7, 1.1], Poly::var(2, 1)).unwrap();
        let b = Symbol::gaussian(&[-0.2, 0.3], 0.9).unwrap();
        let p = Symbol::japanese_sq(2);
        let xi = [0.1, 0.45];
        assert!((a.mul(&b).unwrap().eval(&xi) - a.eval(&xi) * b.eval(&xi)).norm() < 1e-14);
        assert!((a.mul(&p).unwrap().eval(&xi) - a.eval(&xi) * p.eval(&xi)).norm() < 1e-14);
        let d = a.derivative(&[1, 2]).unwrap();
        let fd = a.finite_difference(&[1, 2], &xi, 1e-3);
        assert!((d.eval(&xi) - fd).norm() < 1e-5);
    }

    #[test]
    fn polynomial_transform_refused() {
        assert!(matches!(Symbol::japanese_sq(3).fourier_inverse(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn grid_transform_matches_closed_form() {
        let a = Symbol::gaussian(&[0.3], 0.8).unwrap();
        let axis: Vec<f64> = (0..201).map(|k| 0.3 - 8.0 + 16.0 * k as f64 / 200.0).collect();
        let vals = axis.iter().map(|&x| a.eval(&[x])).collect();
        let g = Symbol::grid(vec![axis], vals).unwrap();
        assert!((g.eval(&[0.31]) - a.eval(&[0.31])).norm() < 1e-3);
        let (fa, fg) = (a.fourier_inverse().unwrap(), g.fourier_inverse().unwrap());
        for x in [0.0, 0.5, -1.7] {
            assert!((fa.eval(&[x]) - fg.eval(&[x])).norm() < 1e-10);
        }
    }

    #[test]
    fn seminorms() {
        let k = Symbol::constant(2, c(-3.0));
        assert_eq!(k.seminorm_estimate(&[0, 0], &[vec![1.0, 2.0]], 0.0).unwrap(), 3.0);
        let j = Symbol::japanese_sq(1);
        let grid = |r: f64| (0..50).map(|i| vec![-r + 2.0 * r * i as f64 / 49.0]).collect::<Vec<_>>();
        for a in 0..3u32 {
            assert!(j.seminorm_estimate(&[a], &grid(1e3), 2.0).unwrap() < 3.0);
        }
        let g1 = j.seminorm_estimate(&[0], &grid(10.0), 1.0).unwrap();
        let g2 = j.seminorm_estimate(&[0], &grid(1e3), 1.0).unwrap();
        assert!(g2 > 50.0 * g1);
        assert!(j.seminorm_estimate(&[0], &[], 1.0).is_err());
        // localized Gaussian of width h^δ: first-derivative seminorm ∝ h^{−δ}
        let delta = 0.4;
        let hs = [0.5, 0.25, 0.125, 0.0625];
        let vals: Vec<f64> = hs
            .iter()
            .map(|h: &f64| {
                let a = Symbol::gaussian(&[1.0], h.powf(delta)).unwrap();
                let grid: Vec<Vec<f64>> = (0..400).map(|i| vec![1.0 - 3.0 + 6.0 * i as f64 / 399.0]).collect();
                a.seminorm_estimate(&[1], &grid, 1.0).unwrap()
            })
            .collect();
        let slope = crate::fit::loglog_slope(&hs, &vals).unwrap();
        assert!((slope + delta).abs() < 0.02, "{slope}");
    }

    #[test]
    fn coadjoint_translate() {
        let g = crate::liecore::LieAlgebra::su2();
        let x = [0.3, -0.8, 0.5];
        let el = g.group_exp(&x).matrix;
        let r = g.coadjoint_matrix(&el).unwrap();
        let a = Symbol::gaussian_poly(&[0.0, 0.0, 1.0], &[0.5; 3], Poly::var(3, 0)).unwrap();
        let ga = a.act(&r).unwrap();
        let xi = [0.2, 0.1, 0.7];
        let back = g.coadjoint(&g.group_exp(&x.map(|v| -v)).matrix, &xi).unwrap();
        assert!((ga.eval(&xi) - a.eval(&back)).norm() < 1e-13);
    }
}
