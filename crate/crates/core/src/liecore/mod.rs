//! Lie algebras given by structure constants and a faithful matrix embedding,
//! their local group laws, adjoint and coadjoint actions, and the Jacobian of exp.
//!
//! Coordinates on the dual are taken against the basis dual to `matrix_basis`, so
//! the pairing xξ = i·Σ xₖξₖ is stored as its imaginary part.

mod cutoff;
mod rep;
mod symmetrize;

pub use cutoff::Cutoff;
pub use rep::{rep_catalog, FiniteRep, WeightBasis};
pub use symmetrize::{evaluate_words, symmetrize, Word};

use crate::linalg::{cplx, expm, fro, logm, CMat, RMat, I};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// How x∗y = log(exp x exp y) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupLaw {
    Abelian,
    /// x + y + ½[x, y]; valid for 2-step nilpotent algebras.
    TwoStep,
    /// Unit quaternions; requires [Xa, Xb] = ε_abc Xc.
    Quaternion,
    /// Matrix exponential and logarithm in the embedding.
    Matrix,
}

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    c: Vec<f64>,
    pub matrix_basis: Vec<CMat>,
    pub invariant_form: RMat,
    pub injectivity_radius: f64,
    pub law: GroupLaw,
    /// Index of the designated torus generator, when there is one.
    pub torus: Option<usize>,
    gram_inv: RMat,
}

#[derive(Debug, Clone)]
pub struct GroupElement {
    pub matrix: CMat,
    pub chart_exceeded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianJ {
    pub value: f64,
    pub chart_exceeded: bool,
}

fn frob_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

impl LieAlgebra {
    /// Build from a matrix basis; structure constants are read off the commutators.
    pub fn from_matrices(
        name: &str,
        labels: Vec<String>,
        basis: Vec<CMat>,
        injectivity_radius: f64,
        law: GroupLaw,
        torus: Option<usize>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 || labels.len() != n {
            return Err(Error::InvalidParam("basis and labels must be nonempty and of equal length".into()));
        }
        let gram = RMat::from_fn(n, n, |i, j| frob_inner(&basis[i], &basis[j]));
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::InvalidParam("matrix basis is linearly dependent".into()))?;
        let invariant_form = RMat::from_fn(n, n, |i, j| (&basis[i] * &basis[j]).trace().re);
        let mut alg = LieAlgebra {
            name: name.to_string(),
            labels,
            c: vec![0.0; n * n * n],
            matrix_basis: basis,
            invariant_form,
            injectivity_radius,
            law,
            torus,
            gram_inv,
        };
        for i in 0..n {
            for j in 0..n {
                let m = crate::linalg::commutator(&alg.matrix_basis[i], &alg.matrix_basis[j]);
                let x = alg.coords(&m);
                for k in 0..n {
                    alg.c[(i * n + j) * n + k] = if x[k].abs() < 1e-14 { 0.0 } else { x[k] };
                }
            }
        }
        let res = alg.structure_residual();
        if res > 1e-12 {
            return Err(Error::InvalidParam(format!("matrix basis not closed under bracket (residual {res:e})")));
        }
        if law == GroupLaw::Quaternion && !alg.is_epsilon() {
            return Err(Error::InvalidParam("quaternion law needs [Xa,Xb] = ε_abc Xc".into()));
        }
        Ok(alg)
    }

    /// su(2) with X = (i/2)(σ₁, −σ₂, σ₃), so [X₁, X₂] = X₃ cyclically.
    pub fn su2() -> Self {
        let z = C64::new(0.0, 0.0);
        let h = C64::new(0.0, 0.5);
        let x1 = CMat::from_row_slice(2, 2, &[z, h, h, z]);
        let x2 = CMat::from_row_slice(2, 2, &[z, C64::new(-0.5, 0.0), C64::new(0.5, 0.0), z]);
        let x3 = CMat::from_row_slice(2, 2, &[h, z, z, -h]);
        Self::from_matrices("su2", labels("X", 3), vec![x1, x2, x3], 2.0 * PI, GroupLaw::Quaternion, Some(2))
            .expect("su2 basis")
    }

    /// so(3) with (Lₖ)ᵢⱼ = −ε_kij.
    pub fn so3() -> Self {
        let basis = (0..3)
            .map(|k| RMat::from_fn(3, 3, |i, j| -levi_civita(k, i, j)))
            .map(|m| cplx(&m))
            .collect();
        Self::from_matrices("so3", labels("L", 3), basis, PI, GroupLaw::Quaternion, Some(2)).expect("so3 basis")
    }

    /// Heisenberg algebra in 3×3 strictly upper triangular matrices: X = E₁₂, Y = E₂₃, Z = E₁₃.
    pub fn heisenberg() -> Self {
        let e = |r: usize, c: usize| {
            let mut m = CMat::zeros(3, 3);
            m[(r, c)] = C64::new(1.0, 0.0);
            m
        };
        Self::from_matrices(
            "heisenberg",
            vec!["X".into(), "Y".into(), "Z".into()],
            vec![e(0, 1), e(1, 2), e(0, 2)],
            f64::INFINITY,
            GroupLaw::TwoStep,
            None,
        )
        .expect("heisenberg basis")
    }

    /// ℝⁿ, embedded as imaginary diagonal matrices.
    pub fn abelian(n: usize) -> Self {
        let basis = (0..n)
            .map(|k| {
                let mut m = CMat::zeros(n, n);
                m[(k, k)] = I;
                m
            })
            .collect();
        Self::from_matrices(&format!("abelian{n}"), labels("T", n), basis, f64::INFINITY, GroupLaw::Abelian, Some(0))
            .expect("abelian basis")
    }

    /// so(n): Eᵢⱼ − Eⱼᵢ for i < j.
    pub fn so_n(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParam("so(n) needs n ≥ 2".into()));
        }
        let mut basis = vec![];
        let mut names = vec![];
        for i in 0..n {
            for j in i + 1..n {
                let mut m = CMat::zeros(n, n);
                m[(i, j)] = C64::new(1.0, 0.0);
                m[(j, i)] = C64::new(-1.0, 0.0);
                basis.push(m);
                names.push(format!("L{}{}", i + 1, j + 1));
            }
        }
        let law = if n == 2 { GroupLaw::Abelian } else { GroupLaw::Matrix };
        Self::from_matrices(&format!("so{n}"), names, basis, PI, law, None)
    }

    /// u(n) with a Frobenius-orthonormal basis.
    pub fn u_n(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("u(n) needs n ≥ 1".into()));
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis = vec![];
        let mut names = vec![];
        for k in 0..n {
            let mut m = CMat::zeros(n, n);
            m[(k, k)] = I;
            basis.push(m);
            names.push(format!("D{}", k + 1));
        }
        for k in 0..n {
            for l in k + 1..n {
                let mut a = CMat::zeros(n, n);
                a[(k, l)] = C64::new(r, 0.0);
                a[(l, k)] = C64::new(-r, 0.0);
                let mut s = CMat::zeros(n, n);
                s[(k, l)] = C64::new(0.0, r);
                s[(l, k)] = C64::new(0.0, r);
                basis.push(a);
                basis.push(s);
                names.push(format!("A{}{}", k + 1, l + 1));
                names.push(format!("S{}{}", k + 1, l + 1));
            }
        }
        let law = if n == 1 { GroupLaw::Abelian } else { GroupLaw::Matrix };
        Self::from_matrices(&format!("u{n}"), names, basis, PI, law, Some(0))
    }

    /// gl(n, ℝ) with the elementary matrices.
    pub fn gl_n(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("gl(n) needs n ≥ 1".into()));
        }
        let mut basis = vec![];
        let mut names = vec![];
        for i in 0..n {
            for j in 0..n {
                let mut m = CMat::zeros(n, n);
                m[(i, j)] = C64::new(1.0, 0.0);
                basis.push(m);
                names.push(format!("E{}{}", i + 1, j + 1));
            }
        }
        let law = if n == 1 { GroupLaw::Abelian } else { GroupLaw::Matrix };
        Self::from_matrices(&format!("gl{n}"), names, basis, PI, law, None)
    }

    /// sl(2, ℝ) with trace form diag(½, ½, −½): coadjoint orbits are x² + y² − z² = c.
    pub fn sl2r() -> Self {
        let r = |v: [f64; 4]| CMat::from_row_slice(2, 2, &v.map(|t| C64::new(t, 0.0)));
        Self::from_matrices(
            "sl2r",
            labels("X", 3),
            vec![r([0.5, 0.0, 0.0, -0.5]), r([0.0, 0.5, 0.5, 0.0]), r([0.0, 0.5, -0.5, 0.0])],
            PI,
            GroupLaw::Matrix,
            Some(2),
        )
        .expect("sl2r basis")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        let (base, arg) = match name.find(|c: char| c.is_ascii_digit()) {
            Some(p) if !name.starts_with("su2") && !name.starts_with("so3") && !name.starts_with("sl2") => {
                (&name[..p], name[p..].parse::<usize>().ok())
            }
            _ => (name, None),
        };
        match (base, arg) {
            ("su2", _) => Ok(Self::su2()),
            ("so3", _) => Ok(Self::so3()),
            ("sl2r", _) => Ok(Self::sl2r()),
            ("heisenberg", _) => Ok(Self::heisenberg()),
            ("abelian", Some(n)) => Ok(Self::abelian(n)),
            ("so", Some(n)) => Self::so_n(n),
            ("u", Some(n)) => Self::u_n(n),
            ("gl", Some(n)) => Self::gl_n(n),
            _ => Err(Error::Unknown(format!("algebra {name}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Structure constant c[i][j][k].
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.c[(i * n + j) * n + k]
    }

    fn is_epsilon(&self) -> bool {
        self.dim() == 3
            && (0..3).all(|i| (0..3).all(|j| (0..3).all(|k| (self.c(i, j, k) - levi_civita(i, j, k)).abs() < 1e-14)))
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        crate::error::check_dim(self.dim(), x.len())?;
        crate::error::check_dim(self.dim(), y.len())?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let s = x[i] * y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += s * self.c[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    /// Matrix of ad_x: (ad_x)_{kj} = Σᵢ xᵢ c[i][j][k].
    pub fn ad(&self, x: &[f64]) -> RMat {
        let n = self.dim();
        RMat::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.c(i, j, k)).sum())
    }

    pub fn embed(&self, x: &[f64]) -> CMat {
        let (r, c) = self.matrix_basis[0].shape();
        let mut m = CMat::zeros(r, c);
        for (xi, b) in x.iter().zip(&self.matrix_basis) {
            if *xi != 0.0 {
                m += b * C64::new(*xi, 0.0);
            }
        }
        m
    }

    /// Coordinates of a matrix in the span of the basis (least squares).
    pub fn coords(&self, m: &CMat) -> Vec<f64> {
        let n = self.dim();
        let b: Vec<f64> = self.matrix_basis.iter().map(|x| frob_inner(x, m)).collect();
        (0..n).map(|i| (0..n).map(|j| self.gram_inv[(i, j)] * b[j]).sum()).collect()
    }

    pub fn norm(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn group_exp(&self, x: &[f64]) -> GroupElement {
        GroupElement {
            matrix: expm(&self.embed(x)),
            chart_exceeded: Self::norm(x) >= self.injectivity_radius,
        }
    }

    /// x∗y = log(exp x · exp y) by the algebra's group law.
    pub fn compose(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        match self.law {
            GroupLaw::Abelian => Ok(x.iter().zip(y).map(|(a, b)| a + b).collect()),
            GroupLaw::TwoStep => {
                let b = self.bracket_unchecked(x, y);
                Ok((0..x.len()).map(|k| x[k] + y[k] + 0.5 * b[k]).collect())
            }
            GroupLaw::Quaternion => {
                let q = quat_mul(quat_exp(x), quat_exp(y));
                Ok(quat_log(q).to_vec())
            }
            GroupLaw::Matrix => self.compose_matrix(x, y),
        }
    }

    /// Oracle path: log(exp x exp y) through the matrix embedding.
    pub fn compose_matrix(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let g = expm(&self.embed(x)) * expm(&self.embed(y));
        Ok(self.coords(&logm(&g)?))
    }

    /// Matrix of Ad(g) on the basis.
    pub fn adjoint_matrix(&self, g: &CMat) -> Result<RMat> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParam("group element not invertible".into()))?;
        let n = self.dim();
        let mut m = RMat::zeros(n, n);
        for (j, b) in self.matrix_basis.iter().enumerate() {
            let x = self.coords(&(g * b * &gi));
            for i in 0..n {
                m[(i, j)] = x[i];
            }
        }
        Ok(m)
    }

    /// Matrix of the coadjoint action: (g·ξ)(x) = ξ(Ad(g⁻¹)x), i.e. Ad(g⁻¹)ᵀ.
    pub fn coadjoint_matrix(&self, g: &CMat) -> Result<RMat> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParam("group element not invertible".into()))?;
        Ok(self.adjoint_matrix(&gi)?.transpose())
    }

    pub fn coadjoint(&self, g: &CMat, xi: &[f64]) -> Result<Vec<f64>> {
        let m = self.coadjoint_matrix(g)?;
        Ok((0..self.dim()).map(|i| (0..self.dim()).map(|j| m[(i, j)] * xi[j]).sum()).collect())
    }

    /// Infinitesimal coadjoint action ad*_y ξ, (ad*_y ξ)(x) = ξ([x, y]).
    pub fn coad_inf(&self, y: &[f64], xi: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| y[j] * (0..n).map(|k| self.c(i, j, k) * xi[k]).sum::<f64>()).sum())
            .collect()
    }

    /// j(x) = det((1 − e^{−ad x})/ad x).
    pub fn jacobian_j(&self, x: &[f64]) -> JacobianJ {
        match self.law {
            GroupLaw::Abelian | GroupLaw::TwoStep => JacobianJ { value: 1.0, chart_exceeded: false },
            GroupLaw::Quaternion => {
                let t = Self::norm(x);
                JacobianJ { value: sinc_half(t).powi(2), chart_exceeded: t >= 2.0 * PI - 1e-9 }
            }
            GroupLaw::Matrix => self.jacobian_j_spectral(x),
        }
    }

    /// Spectral evaluation of j, valid for every algebra.
    pub fn jacobian_j_spectral(&self, x: &[f64]) -> JacobianJ {
        let ev = crate::linalg::eigenvalues(&cplx(&self.ad(x))).unwrap_or_default();
        let mut prod = C64::new(1.0, 0.0);
        let mut exceeded = false;
        for z in ev {
            if z.im.abs() >= 2.0 * PI - 1e-9 {
                exceeded = true;
            }
            prod *= if z.norm() < 1e-6 {
                C64::new(1.0, 0.0) - z / 2.0 + z * z / 6.0 - z * z * z / 24.0
            } else {
                (C64::new(1.0, 0.0) - (-z).exp()) / z
            };
        }
        JacobianJ { value: prod.re, chart_exceeded: exceeded }
    }

    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for k in 0..n {
                            s += self.c(a, b, k) * self.c(k, d, m)
                                + self.c(b, d, k) * self.c(k, a, m)
                                + self.c(d, a, k) * self.c(k, b, m);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// max ‖[Xi, Xj] − Σ c[i][j][k] Xk‖ over the matrix basis.
    pub fn structure_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let lhs = crate::linalg::commutator(&self.matrix_basis[i], &self.matrix_basis[j]);
                let mut rhs = lhs.clone() * C64::new(0.0, 0.0);
                for k in 0..n {
                    rhs += &self.matrix_basis[k] * C64::new(self.c(i, j, k), 0.0);
                }
                worst = worst.max(fro(&(lhs - rhs)));
            }
        }
        worst
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        worst
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim()).all(|i| {
            let mut e = vec![0.0; self.dim()];
            e[i] = 1.0;
            self.ad(&e).trace().abs() < 1e-12
        })
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    if i == j || j == k || i == k {
        0.0
    } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1.0
    } else {
        -1.0
    }
}

/// sin(t/2)/(t/2).
pub fn sinc_half(t: f64) -> f64 {
    let u = 0.5 * t;
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0 + u.powi(4) / 120.0
    } else {
        u.sin() / u
    }
}

/// Unit quaternion (w, v) for exp(Σ xₖXₖ) when [Xa, Xb] = ε_abc Xc: cos(t/2) + sin(t/2)·x̂.
pub fn quat_exp(x: &[f64]) -> [f64; 4] {
    let t = LieAlgebra::norm(x);
    let s = 0.5 * sinc_half(t);
    [(0.5 * t).cos(), s * x[0], s * x[1], s * x[2]]
}

pub fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] + a[2] * b[0] + a[3] * b[1] - a[1] * b[3],
        a[0] * b[3] + a[3] * b[0] + a[1] * b[2] - a[2] * b[1],
    ]
}

/// Principal logarithm on the chart of radius 2π.
pub fn quat_log(q: [f64; 4]) -> [f64; 3] {
    let vn = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let half = vn.atan2(q[0]);
    let f = if vn < 1e-300 { 2.0 } else { 2.0 * half / vn };
    // for small vn with q0 > 0, 2·half/vn → 2/q0·(1 + …); atan2 keeps this accurate
    let f = if vn < 1e-8 && q[0] > 0.0 { 2.0 / q[0] } else { f };
    [f * q[1], f * q[2], f * q[3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro;
    use rand::{Rng, SeedableRng};

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(7)
    }

    fn rand_vec(r: &mut impl Rng, n: usize, s: f64) -> Vec<f64> {
        (0..n).map(|_| r.random_range(-s..s)).collect()
    }

    #[test]
    fn su2_bracket_is_cyclic() {
        let g = LieAlgebra::su2();
        assert_eq!(g.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(g.bracket(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let x = [0.3, -0.2, 0.9];
        assert!(LieAlgebra::norm(&g.bracket(&x, &x).unwrap()) == 0.0);
        assert!(g.bracket(&x, &[1.0]).is_err());
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let g = LieAlgebra::abelian(2);
        assert_eq!(g.bracket(&[1.0, 2.0], &[-3.0, 0.5]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn catalog_algebras_satisfy_invariants() {
        for g in [
            LieAlgebra::su2(),
            LieAlgebra::so3(),
            LieAlgebra::heisenberg(),
            LieAlgebra::abelian(3),
            LieAlgebra::so_n(4).unwrap(),
            LieAlgebra::u_n(3).unwrap(),
            LieAlgebra::gl_n(3).unwrap(),
            LieAlgebra::sl2r(),
        ] {
            assert!(g.jacobi_residual() <= 1e-12, "{}", g.name);
            assert!(g.structure_residual() <= 1e-12, "{}", g.name);
            assert!(g.antisymmetry_residual() == 0.0, "{}", g.name);
        }
    }

    #[test]
    fn exp_of_pi_x3_is_half_turn() {
        // Rodrigues: in SO(3), exp(π L3) rotates by π about e3
        let g = LieAlgebra::so3();
        let r = g.group_exp(&[0.0, 0.0, PI]).matrix;
        let expect = CMat::from_fn(3, 3, |i, j| {
            C64::new(
                match (i, j) {
                    (0, 0) | (1, 1) => -1.0,
                    (2, 2) => 1.0,
                    _ => 0.0,
                },
                0.0,
            )
        });
        assert!(fro(&(r - expect)) < 1e-12);
        // in SU(2) the same element is −1 at t = 2π and a half turn acts by Ad as above
        let s = LieAlgebra::su2();
        let ad = s.adjoint_matrix(&s.group_exp(&[0.0, 0.0, PI]).matrix).unwrap();
        assert!((ad[(0, 0)] + 1.0).abs() < 1e-12 && (ad[(2, 2)] - 1.0).abs() < 1e-12);
        assert!(!s.group_exp(&[0.0, 0.0, PI]).chart_exceeded);
        assert!(s.group_exp(&[0.0, 0.0, 7.0]).chart_exceeded);
    }

    #[test]
    fn nilpotent_exp_terminates() {
        let g = LieAlgebra::heisenberg();
        let m = g.group_exp(&[1.0, 2.0, 3.0]).matrix;
        assert!((m[(0, 2)] - C64::new(3.0 + 1.0, 0.0)).norm() < 1e-13);
        assert!((m[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn coadjoint_is_left_action_and_isometric() {
        let g = LieAlgebra::su2();
        let mut r = rng();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let g1 = g.group_exp(&rand_vec(&mut r, 3, 2.0)).matrix;
            let g2 = g.group_exp(&rand_vec(&mut r, 3, 2.0)).matrix;
            let xi = rand_vec(&mut r, 3, 3.0);
            let a = g.coadjoint(&(&g1 * &g2), &xi).unwrap();
            let b = g.coadjoint(&g1, &g.coadjoint(&g2, &xi).unwrap()).unwrap();
            worst = worst.max(LieAlgebra::norm(&a.iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>()));
            assert!((LieAlgebra::norm(&a) - LieAlgebra::norm(&xi)).abs() < 1e-12);
        }
        assert!(worst <= 1e-10);
        let id = CMat::identity(2, 2);
        assert_eq!(g.coadjoint(&id, &[1.0, 2.0, 3.0]).unwrap().iter().map(|v| v.round()).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn infinitesimal_coadjoint_is_cross_product_on_su2() {
        let g = LieAlgebra::su2();
        let y = [0.2, -1.0, 0.5];
        let xi = [1.0, 0.3, -0.7];
        let v = g.coad_inf(&y, &xi);
        let cross = [y[1] * xi[2] - y[2] * xi[1], y[2] * xi[0] - y[0] * xi[2], y[0] * xi[1] - y[1] * xi[0]];
        for k in 0..3 {
            assert!((v[k] - cross[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobian_closed_form_and_spectral_agree() {
        let g = LieAlgebra::su2();
        assert_eq!(g.jacobian_j(&[0.0; 3]).value, 1.0);
        let mut r = rng();
        for _ in 0..100 {
            let x = rand_vec(&mut r, 3, 3.0);
            let a = g.jacobian_j(&x).value;
            let b = g.jacobian_j_spectral(&x).value;
            let t = LieAlgebra::norm(&x);
            assert!((a - ((t / 2.0).sin() / (t / 2.0)).powi(2)).abs() < 1e-13);
            assert!((a - b).abs() < 1e-10);
            let mx: Vec<f64> = x.iter().map(|v| -v).collect();
            assert!((g.jacobian_j_spectral(&mx).value - b).abs() < 1e-10);
        }
        assert!((LieAlgebra::heisenberg().jacobian_j_spectral(&[1.0, 2.0, 3.0]).value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobian_matches_determinant_of_series() {
        // oracle: det Σ (−ad x)^k/(k+1)!
        let g = LieAlgebra::so_n(4).unwrap();
        let mut r = rng();
        let x = rand_vec(&mut r, g.dim(), 0.8);
        let ad = g.ad(&x);
        let n = g.dim();
        let mut term = RMat::identity(n, n);
        let mut acc = RMat::identity(n, n);
        for k in 1..40 {
            term = -&term * &ad / (k as f64 + 1.0);
            acc += &term;
        }
        assert!((acc.determinant() - g.jacobian_j(&x).value).abs() < 1e-10);
    }

    #[test]
    fn group_laws_match_matrix_logarithm() {
        let mut r = rng();
        for g in [LieAlgebra::su2(), LieAlgebra::so3(), LieAlgebra::heisenberg()] {
            for _ in 0..20 {
                let x = rand_vec(&mut r, 3, 0.9);
                let y = rand_vec(&mut r, 3, 0.9);
                let a = g.compose(&x, &y).unwrap();
                let b = g.compose_matrix(&x, &y).unwrap();
                for k in 0..3 {
                    assert!((a[k] - b[k]).abs() < 1e-11, "{}", g.name);
                }
            }
        }
    }

    #[test]
    fn su2_is_unimodular_and_j_is_even() {
        assert!(LieAlgebra::su2().is_unimodular());
        assert!(LieAlgebra::heisenberg().is_unimodular());
    }
}
