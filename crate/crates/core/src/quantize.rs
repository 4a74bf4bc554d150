//! Op_h(a, χ) = ∫ χ(hx) a^∨(x) π(exp hx) dx as a dense matrix, and its checks.
//!
//! In y = hx the operator is ∫ Φ_a(y) π(e^y) dy over Lebesgue measure with
//! Φ_a(y) = (2π)^{−n/2} h^{−n} χ(y) a^∨(y/h). The integral is done in polar coordinates:
//! for each direction u the radial part only needs the spectrum of iπ(u).

use crate::linalg::{fro, herm_eig, op_norm, CMat};
use crate::liecore::{evaluate_words, symmetrize, Cutoff, FiniteRep, LieAlgebra};
use crate::orbits::{orbit_integral, OrbitChart};
use crate::poly::Poly;
use crate::quadrature::{hermite_prob, legendre, periodic, sphere_directions};
use crate::symbols::{FourierInverse, Kind, Symbol};
use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpQuadrature {
    pub radial: usize,
    pub polar: usize,
    /// Kept even so the node set is symmetric under y ↦ −y.
    pub azimuthal: usize,
}

impl Default for OpQuadrature {
    fn default() -> Self {
        OpQuadrature { radial: 32, polar: 32, azimuthal: 64 }
    }
}

#[derive(Debug, Clone)]
pub struct QuantizationContext {
    pub rep: FiniteRep,
    pub cutoff: Cutoff,
    /// χ′ for composition targets.
    pub secondary: Cutoff,
    pub h: f64,
    pub quad: OpQuadrature,
    /// max |1 − χ′(x∗y)| over sampled x, y ∈ supp χ.
    pub chi_prime_deviation: f64,
}

impl QuantizationContext {
    pub fn new(rep: &FiniteRep, h: f64) -> Result<Self> {
        let g = &rep.algebra;
        Self::with_cutoffs(rep, h, Cutoff::primary(g), Cutoff::secondary(g))
    }

    pub fn with_cutoffs(rep: &FiniteRep, h: f64, cutoff: Cutoff, secondary: Cutoff) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParam(format!("h must be positive, got {h}")));
        }
        let dev = chi_prime_deviation(&rep.algebra, &cutoff, &secondary)?;
        Ok(QuantizationContext { rep: rep.clone(), cutoff, secondary, h, quad: OpQuadrature::default(), chi_prime_deviation: dev })
    }

    pub fn with_quadrature(mut self, quad: OpQuadrature) -> Self {
        self.quad = OpQuadrature { azimuthal: quad.azimuthal + quad.azimuthal % 2, ..quad };
        self
    }

    pub fn with_h(&self, h: f64) -> Self {
        QuantizationContext { h, ..self.clone() }
    }

    fn dim(&self) -> usize {
        self.rep.algebra.dim()
    }

    fn spin(&self) -> Option<f64> {
        self.rep.spin.filter(|_| self.dim() == 3)
    }

    /// Φ_a and the radius outside which it vanishes.
    fn density(&self, a: &Symbol) -> Result<(FourierInverse, f64)> {
        crate::error::check_dim(self.dim(), a.dim())?;
        let f = a.fourier_inverse()?;
        let r = (self.h * f.support_radius()).min(self.cutoff.r1);
        Ok((f, r))
    }

    fn phi(&self, f: &FourierInverse, y: &[f64]) -> C64 {
        let n = y.len() as f64;
        let c = self.cutoff.eval(y);
        if c == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let x: Vec<f64> = y.iter().map(|v| v / self.h).collect();
        f.eval(&x) * (c * (2.0 * PI).powf(-n / 2.0) * self.h.powf(-n))
    }

    /// Op_h(a). Polynomials go through π(sym(p)) at scale h.
    pub fn opp(&self, a: &Symbol) -> Result<CMat> {
        if let Kind::Polynomial(p) = &a.kind {
            crate::error::check_dim(self.dim(), p.nvars())?;
            return Ok(polynomial_opp(&self.rep, &p.scale_vars(&vec![self.h; p.nvars()])));
        }
        let (f, r) = self.density(a)?;
        self.assemble(&|y: &[f64]| self.phi(&f, y), r)
    }

    /// ∫ density(y) π(e^y) dy over |y| ≤ radius.
    pub fn assemble(&self, density: &dyn Fn(&[f64]) -> C64, radius: f64) -> Result<CMat> {
        match self.spin() {
            Some(j) => Ok(self.assemble_spin(density, radius, j, false)),
            None => self.assemble_generic(density, radius),
        }
    }

    fn assemble_generic(&self, density: &dyn Fn(&[f64]) -> C64, radius: f64) -> Result<CMat> {
        let n = self.dim();
        let dirs = sphere_directions(n, self.quad.polar, self.quad.azimuthal)
            .ok_or_else(|| Error::Unsupported(format!("Op quadrature implemented for dim ≤ 3, not {n}")))?;
        let rad = legendre(self.quad.radial, 0.0, radius);
        let d = self.rep.dim();
        let mut out = CMat::zeros(d, d);
        for (u, wu) in &dirs {
            let (lam, e) = herm_eig(&(self.rep.pi(u) * C64::new(0.0, 1.0)));
            let mut g = vec![C64::new(0.0, 0.0); d];
            let mut any = false;
            for (r, wr) in rad.iter() {
                let y: Vec<f64> = u.iter().map(|c| c * r).collect();
                let f = density(&y) * (wu * wr * r.powi(n as i32 - 1));
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                any = true;
                for q in 0..d {
                    g[q] += f * C64::from_polar(1.0, -lam[q] * r);
                }
            }
            if any {
                let mut eg = e.clone();
                for q in 0..d {
                    eg.column_mut(q).scale_mut(1.0);
                    let col = eg.column(q) * g[q];
                    eg.set_column(q, &col);
                }
                out += eg * e.adjoint();
            }
        }
        Ok(out)
    }

    /// Spin-j reps: π(e^{r u(θ,φ)}) = D_φ E_θ e^{−iΛr} E_θ† D_φ⁻¹ with D_φ = diag(e^{imφ}),
    /// so the φ-integral becomes a Fourier coefficient in m − m′.
    fn assemble_spin(&self, density: &dyn Fn(&[f64]) -> C64, radius: f64, j: f64, diag_only: bool) -> CMat {
        let d = self.rep.dim();
        let span = 2 * (d - 1) + 1;
        let pol = legendre(self.quad.polar, -1.0, 1.0);
        let az = periodic(self.quad.azimuthal);
        let rad = legendre(self.quad.radial, 0.0, radius);
        let m: Vec<f64> = (0..d).map(|k| j - k as f64).collect();
        let mut out = CMat::zeros(d, d);
        for (c, wc) in pol.iter() {
            let s = (1.0 - c * c).max(0.0).sqrt();
            let (lam, e) = herm_eig(&(self.rep.pi(&[s, 0.0, c]) * C64::new(0.0, 1.0)));
            // g[q][Δ + d − 1]
            let mut g = vec![vec![C64::new(0.0, 0.0); span]; d];
            let mut sq = vec![C64::new(0.0, 0.0); d];
            for (p, wp) in az.iter() {
                sq.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
                let u = [s * p.cos(), s * p.sin(), c];
                let mut any = false;
                for (r, wr) in rad.iter() {
                    let f = density(&[u[0] * r, u[1] * r, u[2] * r]) * (wr * r * r);
                    if f == C64::new(0.0, 0.0) {
                        continue;
                    }
                    any = true;
                    for q in 0..d {
                        sq[q] += f * C64::from_polar(1.0, -lam[q] * r);
                    }
                }
                if !any {
                    continue;
                }
                let w = wc * wp;
                if diag_only {
                    for q in 0..d {
                        g[q][d - 1] += sq[q] * w;
                    }
                } else {
                    let step = C64::from_polar(1.0, p);
                    let mut ph = C64::from_polar(1.0, -(d as f64 - 1.0) * p);
                    for k in 0..span {
                        for q in 0..d {
                            g[q][k] += sq[q] * ph * w;
                        }
                        ph *= step;
                    }
                }
            }
            for a in 0..d {
                for b in 0..d {
                    if diag_only && a != b {
                        continue;
                    }
                    let k = (m[a] - m[b]).round() as i64 + d as i64 - 1;
                    let mut acc = C64::new(0.0, 0.0);
                    for q in 0..d {
                        acc += e[(a, q)] * e[(b, q)].conj() * g[q][k as usize];
                    }
                    out[(a, b)] += acc;
                }
            }
        }
        out
    }

    /// tr Op_h(a); spin reps integrate against the character sin((2j+1)r/2)/sin(r/2).
    pub fn trace(&self, a: &Symbol) -> Result<C64> {
        let Some(j) = self.spin() else {
            return Ok(self.opp(a)?.trace());
        };
        if let Kind::Polynomial(_) = a.kind {
            return Ok(self.opp(a)?.trace());
        }
        let (f, radius) = self.density(a)?;
        let dirs = sphere_directions(3, self.quad.polar, self.quad.azimuthal).expect("dim 3");
        let rad = legendre(self.quad.radial, 0.0, radius);
        let mut acc = C64::new(0.0, 0.0);
        for (r, wr) in rad.iter() {
            let chi = if r < 1e-8 { 2.0 * j + 1.0 } else { ((2.0 * j + 1.0) * r / 2.0).sin() / (r / 2.0).sin() };
            let mut ang = C64::new(0.0, 0.0);
            for (u, wu) in &dirs {
                ang += self.phi(&f, &[u[0] * r, u[1] * r, u[2] * r]) * *wu;
            }
            acc += ang * (wr * r * r * chi);
        }
        Ok(acc)
    }

    /// Diagonal ⟨Op_h(a) eₙ, eₙ⟩ in the rep's basis.
    pub fn diagonal(&self, a: &Symbol) -> Result<Vec<C64>> {
        match (self.spin(), &a.kind) {
            (Some(j), Kind::Gaussian(_)) | (Some(j), Kind::Grid(_)) => {
                let (f, r) = self.density(a)?;
                let m = self.assemble_spin(&|y: &[f64]| self.phi(&f, y), r, j, true);
                Ok(m.diagonal().iter().cloned().collect())
            }
            _ => Ok(self.opp(a)?.diagonal().iter().cloned().collect()),
        }
    }

    /// ‖Op_h(a)† − Op_h(ā)‖.
    pub fn adjoint_residual(&self, a: &Symbol) -> Result<f64> {
        Ok(op_norm(&(self.opp(a)?.adjoint() - self.opp(&a.conj())?)))
    }

    /// ‖Op_h(a)Op_h(b) − Op(a ⋆_h b, χ′)‖. The right side is assembled from the
    /// Fourier-side density of a ⋆_h b, the pushforward of Φ_a ⊗ Φ_b under (x, y) ↦ x∗y:
    /// Ψ(z) = j(z) ∫ Φ_a(x) Φ_b((−x)∗z) / j((−x)∗z) dx.
    pub fn compose_residual(&self, a: &Symbol, b: &Symbol, inner: usize) -> Result<ComposeResidual> {
        if self.chi_prime_deviation > 1e-14 {
            return Err(Error::Precondition(format!(
                "χ′ is not ≡ 1 on supp χ ∗ supp χ (deviation {:.2e})",
                self.chi_prime_deviation
            )));
        }
        let lhs = self.opp(a)? * self.opp(b)?;
        let (fa, ra) = self.density(a)?;
        let (fb, rb) = self.density(b)?;
        let (FourierInverse::Gaussian(ta), FourierInverse::Gaussian(tb)) = (&fa, &fb) else {
            return Err(Error::Unsupported("composition check needs Gaussian-polynomial symbols".into()));
        };
        let g = &self.rep.algebra;
        let n = self.dim();
        let rule = hermite_prob(inner);
        let h = self.h;
        let norm = (2.0 * PI).powf(-(n as f64) / 2.0) * h.powf(-(n as f64));
        let chi = self.cutoff;
        let psi = |z: &[f64]| -> C64 {
            let cz = self.secondary.eval(z);
            if cz == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let jz = g.jacobian_j(z).value;
            let mut total = C64::new(0.0, 0.0);
            for pa in ta {
                for pb in tb {
                    let (sa, sb) = (pa.widths(), pb.widths());
                    let mut mid = vec![0.0; n];
                    let mut tau = vec![0.0; n];
                    for k in 0..n {
                        let (va, vb) = ((h / sa[k]).powi(2), (h / sb[k]).powi(2));
                        mid[k] = z[k] * va / (va + vb);
                        tau[k] = (va * vb / (va + vb)).sqrt();
                    }
                    let mut idx = vec![0usize; n];
                    loop {
                        let mut w = 1.0;
                        let mut x = vec![0.0; n];
                        for k in 0..n {
                            let u = rule.nodes[idx[k]];
                            w *= rule.weights[idx[k]] * (0.5 * u * u).exp() * tau[k];
                            x[k] = mid[k] + tau[k] * u;
                        }
                        let cx = chi.eval(&x);
                        if cx > 0.0 {
                            let mx: Vec<f64> = x.iter().map(|v| -v).collect();
                            if let Ok(y) = g.compose(&mx, z) {
                                let cy = chi.eval(&y);
                                if cy > 0.0 {
                                    let xs: Vec<f64> = x.iter().map(|v| v / h).collect();
                                    let ys: Vec<f64> = y.iter().map(|v| v / h).collect();
                                    let jy = g.jacobian_j(&y).value;
                                    total += pa.eval(&xs) * pb.eval(&ys) * (w * cx * cy / jy);
                                }
                            }
                        }
                        let mut k = 0;
                        while k < n {
                            idx[k] += 1;
                            if idx[k] < rule.len() {
                                break;
                            }
                            idx[k] = 0;
                            k += 1;
                        }
                        if k == n {
                            break;
                        }
                    }
                }
            }
            total * (norm * norm * jz * cz)
        };
        let rhs = self.assemble(&psi, (ra + rb).min(self.secondary.r1))?;
        let residual = op_norm(&(&lhs - &rhs));
        Ok(ComposeResidual { residual, scale: op_norm(&lhs) })
    }

    /// h^d tr Op_h(a) against ∫_{hO} a dω.
    pub fn kirillov_residual(&self, a: &Symbol, chart: &OrbitChart) -> Result<KirillovResidual> {
        let lhs = self.trace(a)? * self.h.powi(chart.half_dim as i32);
        let rhs = orbit_integral(chart, a)?.value;
        Ok(KirillovResidual { lhs, rhs, diff: (lhs - rhs).norm() })
    }

    /// ‖π(g) Op_h(a) π(g)⁻¹ − Op_h(g·a)‖ for g = exp(x).
    pub fn equivariance_residual(&self, x: &[f64], a: &Symbol) -> Result<f64> {
        let g = &self.rep.algebra;
        let ge = g.group_exp(x);
        let ad = g.adjoint_matrix(&ge.matrix)?;
        let n = g.dim();
        if (ad.transpose() * &ad - crate::linalg::RMat::identity(n, n)).norm() > 1e-10 {
            return Err(Error::Precondition("Ad(g) does not preserve the cutoff norm".into()));
        }
        let pg = self.rep.group(x);
        let lhs = &pg * self.opp(a)? * pg.adjoint();
        let moved = a.act(&g.coadjoint_matrix(&ge.matrix)?)?;
        Ok(op_norm(&(lhs - self.opp(&moved)?)))
    }

    /// ⟨Op_h(a_ω) eₙ, eₙ⟩ for each symbol of a localized family.
    pub fn microlocal_support(&self, n: usize, family: &[Symbol]) -> Result<Vec<f64>> {
        if self.rep.weight_basis.is_none() {
            return Err(Error::Precondition("microlocal profiles need a weight basis".into()));
        }
        if n >= self.rep.dim() {
            return Err(Error::InvalidParam(format!("basis index {n} out of range")));
        }
        family.iter().map(|a| Ok(self.diagonal(a)?[n].re)).collect()
    }
}

/// Symbols that, up to a broad lateral envelope, depend only on ξ₃: one Gaussian band per centre.
pub fn band_family(centers: &[f64], width: f64, lateral: f64) -> Result<Vec<Symbol>> {
    centers
        .iter()
        .map(|&z| Symbol::gaussian_poly(&[0.0, 0.0, z], &[lateral, lateral, width], Poly::one(3)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposeResidual {
    pub residual: f64,
    /// ‖Op_h(a)Op_h(b)‖, for scale.
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KirillovResidual {
    pub lhs: C64,
    pub rhs: C64,
    pub diff: f64,
}

/// max |1 − χ′(x∗y)| over a deterministic sample of x, y with |x|, |y| ≤ r₁.
pub fn chi_prime_deviation(g: &LieAlgebra, chi: &Cutoff, chi2: &Cutoff) -> Result<f64> {
    let n = g.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let unit = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let l = LieAlgebra::norm(&v);
            if l > 0.1 && l <= 1.0 {
                return v.iter().map(|c| c / l).collect();
            }
        }
    };
    for k in 0..400 {
        let (ra, rb) = if k % 4 == 0 { (chi.r1, chi.r1) } else { (chi.r1 * rng.random::<f64>(), chi.r1 * rng.random::<f64>()) };
        let ua = unit(&mut rng);
        let ub = if k % 8 == 0 { ua.clone() } else { unit(&mut rng) };
        let x: Vec<f64> = ua.iter().map(|c| c * ra).collect();
        let y: Vec<f64> = ub.iter().map(|c| c * rb).collect();
        let z = g.compose(&x, &y)?;
        worst = worst.max((1.0 - chi2.eval(&z)).abs());
    }
    Ok(worst)
}

/// Op(p) = π(sym(p(−iX))): ξ^α ↦ (−i)^{|α|} sym(X^α).
pub fn polynomial_opp(rep: &FiniteRep, p: &Poly) -> CMat {
    let terms: Vec<(C64, Vec<u32>)> = p
        .terms()
        .map(|(e, c)| (c * C64::new(0.0, -1.0).powi(e.iter().sum::<u32>() as i32), e.clone()))
        .collect();
    evaluate_words(rep, &symmetrize(&terms))
}

/// The symbol ξ ↦ i·x·ξ of a Lie algebra element x.
pub fn linear_symbol(x: &[f64]) -> Symbol {
    let n = x.len();
    let mut p = Poly::zero(n);
    for (k, v) in x.iter().enumerate() {
        p = p.add(&Poly::var(n, k).scale(C64::new(0.0, *v)));
    }
    Symbol::polynomial(p)
}

/// Frobenius distance, re-exported for report code.
pub fn distance(a: &CMat, b: &CMat) -> f64 {
    fro(&(a - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;

    fn gauss(c: &[f64], s: f64) -> Symbol {
        Symbol::gaussian(c, s).unwrap()
    }

    #[test]
    fn secondary_cutoff_covers_products() {
        let rep = FiniteRep::su2_spin(1.0).unwrap();
        let ctx = QuantizationContext::new(&rep, 0.5).unwrap();
        assert!(ctx.chi_prime_deviation <= 1e-14);
    }

    #[test]
    fn sharpening_gaussian_gives_identity() {
        let rep = FiniteRep::su2_spin(10.0).unwrap();
        let h = 1.0 / 10.5;
        let ctx = QuantizationContext::new(&rep, h).unwrap();
        let a = gauss(&[0.0; 3], 8.0 / h);
        let op = ctx.opp(&a).unwrap();
        let id = CMat::identity(21, 21);
        assert!(op_norm(&(op - id)) <= 1e-4);
    }

    #[test]
    fn fast_path_matches_generic_path() {
        let rep = FiniteRep::su2_spin(1.5).unwrap();
        let ctx = QuantizationContext::new(&rep, 0.4).unwrap().with_quadrature(OpQuadrature { radial: 16, polar: 12, azimuthal: 16 });
        let a = Symbol::gaussian_poly(&[0.3, -0.2, 0.6], &[0.9; 3], Poly::var(3, 1).scale(C64::new(0.5, 0.2))).unwrap();
        let (f, r) = ctx.density(&a).unwrap();
        let fast = ctx.assemble_spin(&|y: &[f64]| ctx.phi(&f, y), r, 1.5, false);
        let slow = ctx.assemble_generic(&|y: &[f64]| ctx.phi(&f, y), r).unwrap();
        assert!(op_norm(&(&fast - &slow)) < 1e-12);
        let diag = ctx.diagonal(&a).unwrap();
        let tr = ctx.trace(&a).unwrap();
        for k in 0..4 {
            assert!((diag[k] - fast[(k, k)]).norm() < 1e-12);
        }
        assert!((tr - fast.trace()).norm() < 1e-12);
    }

    #[test]
    fn real_symbols_give_hermitian_operators() {
        let rep = FiniteRep::su2_spin(2.0).unwrap();
        let ctx = QuantizationContext::new(&rep, 0.4).unwrap();
        let a = gauss(&[0.2, 0.1, 0.8], 1.1);
        let op = ctx.opp(&a).unwrap();
        assert!(op_norm(&(&op - op.adjoint())) < 1e-12);
        let b = Symbol::gaussian_poly(&[0.2, 0.1, 0.8], &[1.0; 3], Poly::var(3, 0).scale(C64::new(0.3, 1.0))).unwrap();
        assert!(ctx.adjoint_residual(&b).unwrap() < 1e-12);
    }

    #[test]
    fn top_weight_concentration() {
        let rep = FiniteRep::su2_spin(10.0).unwrap();
        let ctx = QuantizationContext::new(&rep, 1.0 / 10.5).unwrap();
        let a = gauss(&[0.0, 0.0, 1.0], 0.25);
        let d: Vec<f64> = ctx.diagonal(&a).unwrap().iter().map(|v| v.re).collect();
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[d.len() / 2];
        assert!(d[0] >= 10.0 * median.abs());
    }

    #[test]
    fn polynomial_lemma() {
        let rep = FiniteRep::su2_spin(2.0).unwrap();
        let japanese = Symbol::japanese_sq(3);
        let Kind::Polynomial(p) = &japanese.kind else { panic!() };
        let delta = rep.delta();
        assert!(fro(&(polynomial_opp(&rep, p) - &delta)) < 1e-12);
        assert!(fro(&(polynomial_opp(&rep, &Poly::one(3)) - CMat::identity(5, 5))) == 0.0);
        // regularized limit at width 8/h with h = 1/16, Op at scale 1
        let h = 1.0 / 16.0;
        let ctx = QuantizationContext::new(&rep, 1.0).unwrap();
        let reg = japanese.regularize(8.0 / h).unwrap();
        let op = ctx.opp(&reg).unwrap();
        assert!(op_norm(&(op - &delta)) / op_norm(&delta) <= 1e-3);
    }

    #[test]
    fn linear_symbols_are_rescaled_generators() {
        let rep = FiniteRep::su2_spin(1.5).unwrap();
        let h = 0.2;
        let x = [0.3, -0.7, 0.5];
        let ctx = QuantizationContext::new(&rep, h).unwrap();
        let exact = ctx.opp(&linear_symbol(&x)).unwrap() * C64::new(1.0 / h, 0.0);
        assert!(fro(&(&exact - rep.pi(&x))) < 1e-12);
        let reg = linear_symbol(&x).regularize(8.0 / h).unwrap();
        let approx = ctx.opp(&reg).unwrap() * C64::new(1.0 / h, 0.0);
        assert!(op_norm(&(&approx - rep.pi(&x))) / op_norm(&rep.pi(&x)) <= 1e-3);
    }

    #[test]
    fn composition_identity_spin() {
        let rep = FiniteRep::su2_spin(5.0).unwrap();
        let ctx = QuantizationContext::new(&rep, 1.0 / 5.5).unwrap();
        let a = gauss(&[0.0, 0.3, 0.9], 1.0);
        let b = gauss(&[0.4, 0.0, 0.8], 1.1);
        let r = ctx.compose_residual(&a, &b, 6).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");
        assert!(r.scale > 1e-2);
        // the product does not commute, so the check is not vacuous
        let c = commutator(&ctx.opp(&a).unwrap(), &ctx.opp(&b).unwrap());
        assert!(op_norm(&c) > 1e-3);
    }

    #[test]
    fn composition_identity_torus() {
        let rep = FiniteRep::torus_characters(&[vec![0.0, 1.0], vec![2.0, -1.0], vec![1.0, 1.0]]).unwrap();
        let ctx = QuantizationContext::new(&rep, 0.2).unwrap().with_quadrature(OpQuadrature { radial: 40, polar: 1, azimuthal: 64 });
        let a = gauss(&[0.5, 0.5], 1.2);
        let b = gauss(&[0.4, 0.0], 1.0);
        let r = ctx.compose_residual(&a, &b, 12).unwrap();
        assert!(r.residual <= 1e-10, "{r:?}");
        // diagonal entries are a(hw)
        let op = ctx.opp(&a).unwrap();
        assert!((op[(1, 1)] - a.eval(&[0.4, -0.2])).norm() < 1e-10);
    }

    #[test]
    fn equivariance() {
        let rep = FiniteRep::su2_spin(2.0).unwrap();
        let ctx = QuantizationContext::new(&rep, 0.4).unwrap();
        let a = gauss(&[0.2, 0.4, 0.7], 1.0);
        assert!(ctx.equivariance_residual(&[0.0; 3], &a).unwrap() < 1e-14);
        assert!(ctx.equivariance_residual(&[0.4, -1.1, 0.6], &a).unwrap() < 1e-6);
        let inv = gauss(&[0.0, 0.0, 0.7], 1.0);
        assert!(ctx.equivariance_residual(&[0.0, 0.0, 1.3], &inv).unwrap() < 1e-10);
    }

    #[test]
    fn kirillov_unit_and_far_symbols() {
        let j = 10.0;
        let h = 1.0 / (j + 0.5);
        let rep = FiniteRep::su2_spin(j).unwrap();
        let ctx = QuantizationContext::new(&rep, h).unwrap();
        let g = LieAlgebra::su2();
        let chart = OrbitChart::sphere_default(&g, h * (j + 0.5)).unwrap();
        let far = gauss(&[0.0, 0.0, 6.0], 0.6);
        // a^∨ oscillates at frequency |ω|/h, so the far symbol needs a finer rule
        let fine = ctx.clone().with_quadrature(OpQuadrature { radial: 96, polar: 96, azimuthal: 128 });
        let r = fine.kirillov_residual(&far, &chart).unwrap();
        assert!(r.lhs.norm() < 1e-6 && r.rhs.norm() < 1e-6, "{r:?}");
        // a ≈ 1 on the orbit: h·dim versus the mass 2h(j+½)
        let one = gauss(&[0.0; 3], 8.0 / h);
        let r = ctx.kirillov_residual(&one, &chart).unwrap();
        assert!((r.lhs.re - h * (2.0 * j + 1.0)).abs() < 1e-3);
        assert!((r.rhs.re - 2.0 * h * (j + 0.5)).abs() < 1e-3);
    }

    #[test]
    fn top_weight_profile_over_bands() {
        let j = 10.0;
        let h = 1.0 / (j + 0.5);
        let rep = FiniteRep::su2_spin(j).unwrap();
        let strips = crate::orbits::strips(&rep.algebra, j + 0.5).unwrap();
        let centers: Vec<f64> = strips.iter().map(|s| 0.5 * (s.z_lo + s.z_hi) * h).collect();
        let family = band_family(&centers, 0.5 * h, 3.0).unwrap();
        let ctx = QuantizationContext::new(&rep, h).unwrap();
        let p = ctx.microlocal_support(0, &family).unwrap();
        let total: f64 = p.iter().sum();
        let top = p.len() - 1;
        let peak = (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        assert_eq!(peak, top);
        assert!((p[top] + p[top - 1] + p[top - 2]) / total >= 0.9);
    }
}
