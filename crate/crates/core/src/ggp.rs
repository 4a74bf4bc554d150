//! Gross–Prasad pairs (G, H) = (G(V), G(V_H)): eigenvalue multisets, stability and its three
//! characterizations, fibers over (λ, μ) and the disintegration of orbit integrals.
//!
//! Orthogonal pairs act on V = ℂᴺ with the identity form and e = e_N. Unitary and linear pairs
//! use the split model V = V⁺ ⊕ V⁻, form [[0, I], [I, 0]], x̃ = diag(x, −xᵀ) and
//! e = e⁺_N + e⁻_N, so an element of g is just an N×N matrix acting on V⁺.

use crate::linalg::{eigenvalues, fro, nullspace, CMat, CVec};
use crate::liecore::LieAlgebra;
use crate::orbits::{orbit_integral, OrbitChart};
use crate::quadrature::{legendre, periodic};
use crate::symbols::Symbol;
use crate::{Error, Result, C64};
use rand::Rng;
use std::f64::consts::PI;

/// Relative tolerance for eigenvalue coincidence.
pub const STABILITY_RTOL: f64 = 1e-8;
/// Width of the borderline band, in units of the tolerance.
pub const BORDERLINE_FACTOR: f64 = 10.0;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Orthogonal,
    Unitary,
    Linear,
}

#[derive(Debug, Clone)]
pub struct GgpPair {
    pub case: Case,
    /// dim V for orthogonal pairs, dim V⁺ otherwise.
    pub n: usize,
    pub form: CMat,
    pub e: CVec,
    /// Projector onto V_H.
    pub proj: CMat,
    /// Bases of g and h as operators on V.
    pub g_basis: Vec<CMat>,
    pub h_basis: Vec<CMat>,
}

fn embed_top_left(m: &CMat, n: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    out.view_mut((0, 0), m.shape()).copy_from(m);
    out
}

impl GgpPair {
    /// so(n−1) ⊂ so(n).
    pub fn orthogonal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParam("orthogonal pairs need n ≥ 2".into()));
        }
        let g = LieAlgebra::so_n(n)?.matrix_basis;
        let h = if n >= 3 { LieAlgebra::so_n(n - 1)?.matrix_basis } else { vec![] };
        let mut e = CVec::zeros(n);
        e[n - 1] = c(1.0);
        let mut proj = CMat::identity(n, n);
        proj[(n - 1, n - 1)] = c(0.0);
        Ok(GgpPair {
            case: Case::Orthogonal,
            n,
            form: CMat::identity(n, n),
            e,
            proj,
            g_basis: g,
            h_basis: h.iter().map(|m| embed_top_left(m, n)).collect(),
        })
    }

    /// u(n−1) ⊂ u(n) in the split model.
    pub fn unitary(n: usize) -> Result<Self> {
        Self::split(Case::Unitary, n)
    }

    /// gl(n−1) ⊂ gl(n) in the split model.
    pub fn linear(n: usize) -> Result<Self> {
        Self::split(Case::Linear, n)
    }

    fn split(case: Case, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("split pairs need n ≥ 1".into()));
        }
        let basis = |k: usize| -> Result<Vec<CMat>> {
            if k == 0 {
                return Ok(vec![]);
            }
            Ok(match case {
                Case::Unitary => LieAlgebra::u_n(k)?.matrix_basis,
                _ => LieAlgebra::gl_n(k)?.matrix_basis,
            })
        };
        let d = 2 * n;
        let mut form = CMat::zeros(d, d);
        for i in 0..n {
            form[(i, n + i)] = c(1.0);
            form[(n + i, i)] = c(1.0);
        }
        let mut e = CVec::zeros(d);
        e[n - 1] = c(1.0);
        e[d - 1] = c(1.0);
        let mut proj = CMat::identity(d, d);
        proj[(n - 1, n - 1)] = c(0.0);
        proj[(d - 1, d - 1)] = c(0.0);
        let g = basis(n)?.iter().map(|m| split_lift(m)).collect();
        let h = basis(n - 1)?.iter().map(|m| split_lift(&embed_top_left(m, n))).collect();
        Ok(GgpPair { case, n, form, e, proj, g_basis: g, h_basis: h })
    }

    /// Catalog names: "so3_so2", "so4_so3", "u2_u1", "gl2_gl1", "gl3_gl2".
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "so3_so2" => Self::orthogonal(3),
            "so4_so3" => Self::orthogonal(4),
            "u2_u1" => Self::unitary(2),
            "u3_u2" => Self::unitary(3),
            "gl2_gl1" => Self::linear(2),
            "gl3_gl2" => Self::linear(3),
            _ => Err(Error::Unknown(name.into())),
        }
    }

    pub fn is_split(&self) -> bool {
        self.case != Case::Orthogonal
    }

    pub fn v_dim(&self) -> usize {
        self.form.nrows()
    }

    /// Rank of k₁e: 2 in the split model, 1 otherwise.
    pub fn e_rank(&self) -> usize {
        if self.is_split() {
            2
        } else {
            1
        }
    }

    /// The pair one step down, (H, H ∩ stabilizer).
    pub fn h_pair(&self) -> Result<Self> {
        match self.case {
            Case::Orthogonal if self.n > 2 => Self::orthogonal(self.n - 1),
            Case::Orthogonal => Err(Error::Unsupported("so(1) has no subpair".into())),
            _ if self.n > 1 => Self::split(self.case, self.n - 1),
            _ => Err(Error::Unsupported("trivial H".into())),
        }
    }

    fn bilinear(&self, u: &CVec, v: &CVec) -> C64 {
        (u.transpose() * &self.form * v)[(0, 0)]
    }

    /// Check that x ∈ g and return the operator it induces on V.
    pub fn lift(&self, x: &CMat) -> Result<CMat> {
        crate::error::check_dim(self.n, x.nrows())?;
        crate::error::check_dim(self.n, x.ncols())?;
        let scale = fro(x).max(1.0);
        let skew = match self.case {
            Case::Orthogonal => fro(&(x + x.transpose())),
            Case::Unitary => fro(&(x + x.adjoint())),
            Case::Linear => 0.0,
        };
        if skew > 1e-10 * scale {
            return Err(Error::Precondition(format!("x is not in g (skewness residual {skew:.2e})")));
        }
        Ok(if self.is_split() { split_lift(x) } else { x.clone() })
    }

    /// Largest violation of the structural invariants of the pair.
    pub fn invariant_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        let p = &self.proj;
        r = r.max(fro(&(p * p - p)));
        r = r.max(fro(&(p.transpose() * &self.form - &self.form * p)));
        r = r.max((p * &self.e).norm());
        r = r.max((1.0 - self.bilinear(&self.e, &self.e).norm().min(1.0)).max(0.0));
        let rank = (0..self.v_dim()).filter(|&i| p[(i, i)].re > 0.5).count();
        if rank + self.e_rank() != self.v_dim() {
            r = r.max(1.0);
        }
        for x in &self.g_basis {
            r = r.max(fro(&(x.transpose() * &self.form + &self.form * x)));
        }
        for y in &self.h_basis {
            r = r.max(fro(&(y * p - p * y)));
            r = r.max((y * &self.e).norm());
        }
        r
    }
}

fn split_lift(x: &CMat) -> CMat {
    let n = x.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(x);
    out.view_mut((n, n), (n, n)).copy_from(&(-x.transpose()));
    out
}

/// x_H: the compression E x E, written as an element of h (the top-left block).
pub fn restrict_h(pair: &GgpPair, x: &CMat) -> Result<CMat> {
    pair.lift(x)?;
    let m = pair.n - 1;
    Ok(x.view((0, 0), (m, m)).into_owned())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenMultiset {
    pub entries: Vec<C64>,
    pub case: Case,
    pub zero_removed: bool,
}

fn multiset(case: Case, size: usize, m: &CMat) -> Result<EigenMultiset> {
    let mut entries = eigenvalues(m)?;
    let odd_orth = case == Case::Orthogonal && size % 2 == 1;
    if odd_orth && !entries.is_empty() {
        let k = (0..entries.len()).min_by(|&a, &b| entries[a].norm().total_cmp(&entries[b].norm())).unwrap();
        entries.remove(k);
    }
    Ok(EigenMultiset { entries, case, zero_removed: odd_orth })
}

/// ev(x): eigenvalues on V⁺ (split) or V, less one zero for odd orthogonal V.
pub fn ev(pair: &GgpPair, x: &CMat) -> Result<EigenMultiset> {
    pair.lift(x)?;
    multiset(pair.case, pair.n, x)
}

/// ev(x_H) for x_H ∈ h given as an (n−1)×(n−1) block.
pub fn ev_h(pair: &GgpPair, xh: &CMat) -> Result<EigenMultiset> {
    crate::error::check_dim(pair.n - 1, xh.nrows())?;
    multiset(pair.case, pair.n - 1, xh)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stability {
    pub stable: bool,
    pub borderline: bool,
    /// Smallest |λ_i − μ_j|.
    pub min_gap: f64,
    pub tolerance: f64,
    /// Pairs closer than the tolerance.
    pub matches: Vec<(C64, C64)>,
}

/// Emptiness of ev(λ) ∩ ev(μ) up to a relative tolerance.
pub fn is_stable_pair(lambda: &[C64], mu: &[C64]) -> Stability {
    let scale = lambda.iter().chain(mu).map(|z| z.norm()).fold(1.0, f64::max);
    let tol = STABILITY_RTOL * scale;
    let mut gap = f64::INFINITY;
    let mut matches = vec![];
    for &l in lambda {
        for &m in mu {
            let d = (l - m).norm();
            gap = gap.min(d);
            if d <= tol {
                matches.push((l, m));
            }
        }
    }
    Stability {
        stable: gap > tol,
        borderline: gap > tol / BORDERLINE_FACTOR && gap <= tol * BORDERLINE_FACTOR,
        min_gap: gap,
        tolerance: tol,
        matches,
    }
}

pub fn is_stable(pair: &GgpPair, x: &CMat) -> Result<Stability> {
    let l = ev(pair, x)?;
    let m = ev_h(pair, &restrict_h(pair, x)?)?;
    Ok(is_stable_pair(&l.entries, &m.entries))
}

/// An isotropic eigenvector v ∈ V_H, a dual isotropic partner w ∈ V_H with ⟨w, v⟩ = 1, and the
/// defect of the grading V₁ = ⟨v⟩, V₋₁ = ⟨w⟩, V₀ = ⟨v, w⟩^⊥ as an x-stable filtration.
#[derive(Debug, Clone)]
pub struct HmWitness {
    pub eigenvalue: C64,
    pub vector: CVec,
    pub partner: CVec,
    /// ‖x̃ components from V_i into V_j, j < i‖ plus the failure of γ to fix e, relative to ‖x̃‖.
    pub filtration_residual: f64,
}

fn isotropic_in(pair: &GgpPair, basis: &CMat) -> Option<CVec> {
    let tol = 1e-8;
    let k = basis.ncols();
    if k == 0 {
        return None;
    }
    let v1: CVec = basis.column(0).into_owned();
    let q11 = pair.bilinear(&v1, &v1);
    if q11.norm() <= tol {
        return Some(v1);
    }
    if k == 1 {
        return None;
    }
    let v2: CVec = basis.column(1).into_owned();
    let q12 = pair.bilinear(&v1, &v2);
    let q22 = pair.bilinear(&v2, &v2);
    // q11 a² + 2 q12 a + q22 = 0
    let a = (-q12 + (q12 * q12 - q11 * q22).sqrt()) / q11;
    let v = v1 * a + v2;
    let nv = v.norm();
    Some(v / c(nv))
}

fn filtration_residual(pair: &GgpPair, xt: &CMat, v: &CVec, w: &CVec) -> f64 {
    let d = pair.v_dim();
    let fv = &pair.form * v;
    let fw = &pair.form * w;
    let p1 = v * fw.transpose();
    let pm = w * fv.transpose();
    let p0 = CMat::identity(d, d) - &p1 - &pm;
    let scale = fro(xt).max(1e-300);
    let leak = fro(&(&pm * xt * &p0)) + fro(&(&pm * xt * &p1)) + fro(&(&p0 * xt * &p1));
    let fixes_e = (&p0 * &pair.e - &pair.e).norm();
    leak / scale + fixes_e
}

/// Search for an isotropic eigenvector of x̃ inside V_H, over the eigenvalues of x̃_H.
pub fn hm_witness(pair: &GgpPair, x: &CMat) -> Result<Option<HmWitness>> {
    let xt = pair.lift(x)?;
    let xh = restrict_h(pair, x)?;
    let mut candidates = eigenvalues(&xh)?;
    if pair.is_split() {
        let neg: Vec<C64> = candidates.iter().map(|z| -z).collect();
        candidates.extend(neg);
    }
    let d = pair.v_dim();
    let fe = &pair.form * &pair.e;
    let scale = fro(&xt).max(1.0);
    for cand in candidates {
        let mut m = CMat::zeros(d + 1, d);
        m.view_mut((0, 0), (d, d)).copy_from(&(&xt - CMat::identity(d, d) * cand));
        for j in 0..d {
            m[(d, j)] = fe[j] * c(scale);
        }
        let (ns, _) = nullspace(&m, STABILITY_RTOL);
        let Some(v) = isotropic_in(pair, &ns) else { continue };
        let w0 = &pair.form * v.map(|z| z.conj());
        let s = pair.bilinear(&w0, &v);
        if s.norm() < 1e-12 {
            continue;
        }
        let w = w0 / s;
        let res = filtration_residual(pair, &xt, &v, &w);
        return Ok(Some(HmWitness { eigenvalue: cand, vector: v, partner: w, filtration_residual: res }));
    }
    Ok(None)
}

/// Dimension of the Krylov space of `v` under `a`, by Arnoldi with a breakdown threshold.
/// Returns the dimension and the smallest accepted/rejected residual ratio.
fn krylov_dim(a: &CMat, v: &CVec, rtol: f64) -> (usize, f64) {
    let d = a.nrows();
    let scale = fro(a).max(1e-300);
    let mut q: Vec<CVec> = vec![v / c(v.norm())];
    let mut closest = f64::INFINITY;
    while q.len() < d {
        let mut w = a * q.last().unwrap();
        for _ in 0..2 {
            for b in &q {
                let p = b.dotc(&w);
                w -= b * p;
            }
        }
        let r = w.norm() / scale;
        closest = closest.min((r / rtol).ln().abs());
        if r <= rtol {
            break;
        }
        let nw = w.norm();
        q.push(w / c(nw));
    }
    (q.len(), closest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicVerdict {
    pub stable: bool,
    /// Some Arnoldi residual fell within a decade of the threshold.
    pub ambiguous: bool,
    /// Krylov dimensions: [V] (orthogonal) or [V⁺, V⁻] (split).
    pub ranks: Vec<usize>,
}

/// Stability read off the k₁[x]-module generated by e.
pub fn cyclic_criterion(pair: &GgpPair, x: &CMat) -> Result<CyclicVerdict> {
    let xt = pair.lift(x)?;
    let n = pair.n;
    let rtol = STABILITY_RTOL;
    let band = std::f64::consts::LN_10;
    if pair.is_split() {
        let mut en = CVec::zeros(n);
        en[n - 1] = c(1.0);
        let (rp, ap) = krylov_dim(x, &en, rtol);
        let (rm, am) = krylov_dim(&(-x.transpose()), &en, rtol);
        return Ok(CyclicVerdict { stable: rp == n && rm == n, ambiguous: ap.min(am) < band, ranks: vec![rp, rm] });
    }
    let (r, amb) = krylov_dim(&xt, &pair.e, rtol);
    let mut stable = r + 1 >= n;
    let mut ambiguous = amb < band;
    if stable && r < n {
        // nondegeneracy of the form on the span
        let mut k = CMat::zeros(n, r);
        let mut v = pair.e.clone();
        for j in 0..r {
            let nv = v.norm();
            k.set_column(j, &(&v / c(nv)));
            v = &xt * &k.column(j).into_owned();
        }
        let (ortho, _) = (k.clone().qr().q(), ());
        let gram = ortho.transpose() * &pair.form * &ortho;
        let sv = gram.svd(false, false).singular_values;
        let smin = sv.min();
        stable = smin > rtol;
        ambiguous |= smin > rtol / 10.0 && smin < rtol * 10.0;
    }
    Ok(CyclicVerdict { stable, ambiguous, ranks: vec![r] })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regularity {
    pub regular: bool,
    /// Eigenvalue clusters too close to separate reliably.
    pub ill_conditioned: bool,
}

/// Regularity in the sense of the pair: every isotropic subspace on which x acts by a scalar is
/// at most a line (in particular ker x has dimension ≤ 2 for orthogonal V).
pub fn regular_test(pair: &GgpPair, x: &CMat) -> Result<Regularity> {
    pair.lift(x)?;
    let vals = eigenvalues(x)?;
    let scale = vals.iter().map(|z| z.norm()).fold(fro(x), f64::max).max(1e-300);
    let ctol = 1e-5 * scale;
    let mut clusters: Vec<Vec<C64>> = vec![];
    let mut ill = false;
    for v in vals {
        if let Some(cl) = clusters.iter_mut().find(|cl| (cl[0] - v).norm() <= ctol) {
            cl.push(v);
        } else {
            clusters.push(vec![v]);
        }
    }
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            if (a[0] - b[0]).norm() < 1e-3 * scale {
                ill = true;
            }
        }
    }
    let n = pair.n;
    let mut regular = true;
    for cl in &clusters {
        let m: C64 = cl.iter().sum::<C64>() / c(cl.len() as f64);
        let (ns, _) = nullspace(&(x - CMat::identity(n, n) * m), 1e-7);
        let k = ns.ncols();
        if pair.case == Case::Orthogonal && m.norm() <= ctol {
            if k > 2 {
                regular = false;
            } else if k == 2 {
                let gram = ns.transpose() * &ns;
                if gram.svd(false, false).singular_values.min() < 1e-8 {
                    regular = false;
                }
            }
        } else if k > 1 {
            regular = false;
        }
    }
    Ok(Regularity { regular, ill_conditioned: ill })
}

/// Families used for the random consistency sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gl3Gl2,
    So4So3,
    So3So2,
    U2U1,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Gl3Gl2, Family::So4So3, Family::So3So2, Family::U2U1];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Gl3Gl2 => "gl3_gl2",
            Family::So4So3 => "so4_so3",
            Family::So3So2 => "so3_so2",
            Family::U2U1 => "u2_u1",
        }
    }

    pub fn pair(&self) -> GgpPair {
        GgpPair::by_name(self.name()).expect("catalog pair")
    }

    /// A random element of g; with `unstable` it is built with an eigenvector inside V_H.
    pub fn sample<R: Rng>(&self, rng: &mut R, unstable: bool) -> CMat {
        let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
        match self {
            Family::Gl3Gl2 => {
                let mut x = CMat::from_fn(3, 3, |_, _| c(u(-1.0, 1.0)));
                if unstable {
                    let mut v = CVec::from_fn(3, |_, _| c(u(-1.0, 1.0)));
                    v[2] = c(0.0);
                    let v = &v / c(v.norm());
                    let ev = c(u(-1.0, 1.0));
                    let left = u(0.0, 1.0) < 0.5;
                    if left {
                        // wᵀx = c wᵀ
                        let r = v.transpose() * ev - v.transpose() * &x;
                        x += &v * r;
                    } else {
                        let r = &v * ev - &x * &v;
                        x += r * v.transpose();
                    }
                }
                x
            }
            Family::So3So2 => {
                let xi: Vec<f64> = if unstable {
                    vec![0.0, 0.0, u(-1.5, 1.5)]
                } else {
                    (0..3).map(|_| u(-1.0, 1.0)).collect()
                };
                hat(&xi)
            }
            Family::So4So3 => {
                if !unstable {
                    let a = CMat::from_fn(4, 4, |_, _| c(u(-1.0, 1.0)));
                    return &a - a.transpose();
                }
                let (t1, t2) = (u(-1.5, 1.5), u(-1.5, 1.5));
                let mut d = CMat::zeros(4, 4);
                d[(1, 0)] = c(t1);
                d[(0, 1)] = c(-t1);
                d[(3, 2)] = c(t2);
                d[(2, 3)] = c(-t2);
                let g = CMat::from_fn(3, 3, |_, _| c(u(-1.0, 1.0)));
                let q = g.qr().q();
                let r = embed_top_left(&q, 4) + {
                    let mut m = CMat::zeros(4, 4);
                    m[(3, 3)] = c(1.0);
                    m
                };
                &r * d * r.transpose()
            }
            Family::U2U1 => {
                if !unstable {
                    let a = CMat::from_fn(2, 2, |_, _| C64::new(u(-1.0, 1.0), u(-1.0, 1.0)));
                    return &a - a.adjoint();
                }
                // unitary with first column in V_H⁺ = ⟨e₁⟩
                let ph = C64::from_polar(1.0, u(0.0, 2.0 * PI));
                let mut q = CMat::zeros(2, 2);
                q[(0, 0)] = ph;
                q[(1, 1)] = C64::from_polar(1.0, u(0.0, 2.0 * PI));
                let d = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(0.0, u(-1.5, 1.5)), C64::new(0.0, u(-1.5, 1.5))]));
                &q * d * q.adjoint()
            }
        }
    }
}

/// Cross-product matrix of ξ ∈ ℝ³, the so(3) element with coordinates ξ.
pub fn hat(xi: &[f64]) -> CMat {
    let (a, b, z) = (xi[0], xi[1], xi[2]);
    CMat::from_row_slice(3, 3, &[c(0.0), c(-z), c(b), c(z), c(0.0), c(-a), c(-b), c(a), c(0.0)])
}

/// Invariant-coordinate form of (λ, μ) for so(3) ⊃ so(2): radius r and slice height z.
pub fn so3_invariants(r: f64, z: f64) -> (Vec<C64>, Vec<C64>) {
    (vec![C64::new(0.0, r), C64::new(0.0, -r)], vec![C64::new(0.0, z), C64::new(0.0, -z)])
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fiber {
    Point(CMat),
    Empty,
    Undetermined(String),
}

/// Greedy matching distance between two multisets of equal size.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut rest: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for &x in a {
        let k = (0..rest.len()).min_by(|&i, &j| (rest[i] - x).norm().total_cmp(&(rest[j] - x).norm())).unwrap();
        worst = worst.max((rest[k] - x).norm());
        rest.remove(k);
    }
    worst
}

/// max(d(ev(x), λ), d(ev(x_H), μ)).
pub fn fiber_residual(pair: &GgpPair, x: &CMat, lambda: &[C64], mu: &[C64]) -> Result<f64> {
    let l = ev(pair, x)?;
    let m = ev_h(pair, &restrict_h(pair, x)?)?;
    Ok(multiset_distance(&l.entries, lambda).max(multiset_distance(&m.entries, mu)))
}

fn so3_height(lambda: &[C64], mu: &[C64]) -> (f64, f64) {
    let r = lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // μ = {iz, −iz}: the sign of z is read from the first entry
    let z = mu.first().map(|z| z.im).unwrap_or(0.0);
    (r, z)
}

/// Bordered companion point: x = [[diag μ, b], [cᵀ, d]] with c_i b_i fixed by the
/// characteristic polynomial, d = Σλ − Σμ.
pub fn bordered_point(lambda: &[C64], mu: &[C64], b: &[C64]) -> Result<CMat> {
    let n = lambda.len();
    if mu.len() + 1 != n || b.len() != mu.len() {
        return Err(Error::Dim { expected: n - 1, got: mu.len() });
    }
    for i in 0..mu.len() {
        for k in 0..i {
            if (mu[i] - mu[k]).norm() < 1e-10 * mu[i].norm().max(1.0) {
                return Err(Error::Unsupported("bordered ansatz needs distinct μ".into()));
            }
        }
    }
    let mut x = CMat::zeros(n, n);
    for i in 0..n - 1 {
        x[(i, i)] = mu[i];
        x[(i, n - 1)] = b[i];
        let num: C64 = lambda.iter().map(|&l| l - mu[i]).product();
        let den: C64 = (0..n - 1).filter(|&k| k != i).map(|k| mu[k] - mu[i]).product();
        x[(n - 1, i)] = -num / (den * b[i]);
    }
    x[(n - 1, n - 1)] = lambda.iter().sum::<C64>() - mu.iter().sum::<C64>();
    Ok(x)
}

/// A point of O^{λ,μ}: closed-form slice for so(3) ⊃ so(2), bordered companion for gl.
pub fn fiber_basepoint(pair: &GgpPair, lambda: &[C64], mu: &[C64]) -> Result<Fiber> {
    let st = is_stable_pair(lambda, mu);
    if !st.stable {
        return Err(Error::Precondition("(λ, μ) is not stable".into()));
    }
    match (pair.case, pair.n) {
        (Case::Orthogonal, 3) => {
            let (r, z) = so3_height(lambda, mu);
            if z.abs() > r {
                return Ok(Fiber::Empty);
            }
            Ok(Fiber::Point(hat(&[(r * r - z * z).sqrt(), 0.0, z])))
        }
        (Case::Linear, _) => {
            let x = match bordered_point(lambda, mu, &vec![c(1.0); mu.len()]) {
                Ok(x) => x,
                Err(e) => return Ok(Fiber::Undetermined(e.to_string())),
            };
            let res = fiber_residual(pair, &x, lambda, mu)?;
            let scale = lambda.iter().chain(mu).map(|z| z.norm()).fold(1.0, f64::max);
            if res <= 1e-8 * scale {
                Ok(Fiber::Point(x))
            } else {
                Ok(Fiber::Undetermined(format!("invariant residual {res:.2e}")))
            }
        }
        _ => Err(Error::Unsupported(format!("no fiber construction for {:?} n={}", pair.case, pair.n))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsorReport {
    pub samples: usize,
    /// Worst ‖h·p − q‖ / ‖q‖.
    pub transport_residual: f64,
    /// Worst spread of the solutions over random starts.
    pub dispersion: f64,
}

fn rot_z(t: f64) -> [[f64; 3]; 3] {
    let (s, co) = t.sin_cos();
    [[co, -s, 0.0], [s, co, 0.0], [0.0, 0.0, 1.0]]
}

fn apply3(m: &[[f64; 3]; 3], v: &[f64]) -> [f64; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

fn xi_of(x: &CMat) -> [f64; 3] {
    [x[(2, 1)].re, x[(0, 2)].re, x[(1, 0)].re]
}

/// Gauss–Newton for the rotation angle with R_θ p = q.
fn solve_angle(p: &[f64; 3], q: &[f64; 3], start: f64) -> f64 {
    let mut t = start;
    for _ in 0..60 {
        let rp = apply3(&rot_z(t), p);
        let jac = [-rp[1], rp[0], 0.0];
        let r = [rp[0] - q[0], rp[1] - q[1], rp[2] - q[2]];
        let jj = jac[0] * jac[0] + jac[1] * jac[1];
        if jj < 1e-300 {
            break;
        }
        let step = ((jac[0] * r[0] + jac[1] * r[1]) / jj).clamp(-1.0, 1.0);
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    t.rem_euclid(2.0 * PI)
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Solve diag(h, 1)·p = q·diag(h, 1) for h from several random starts.
fn solve_conjugator<R: Rng>(p: &CMat, q: &CMat, starts: usize, rng: &mut R) -> (Vec<CMat>, f64) {
    let n = p.nrows();
    let m = n - 1;
    let lift = |h: &CVec| -> CMat {
        let mut t = CMat::identity(n, n);
        for i in 0..m {
            for j in 0..m {
                t[(i, j)] = h[i * m + j];
            }
        }
        t
    };
    let f = |h: &CVec| -> CVec {
        let t = lift(h);
        let r = &t * p - q * &t;
        CVec::from_iterator(n * n, r.iter().cloned())
    };
    let zero = CVec::zeros(m * m);
    let f0 = f(&zero);
    let mut a = CMat::zeros(n * n, m * m);
    for k in 0..m * m {
        let mut ek = zero.clone();
        ek[k] = c(1.0);
        a.set_column(k, &(f(&ek) - &f0));
    }
    let svd = a.clone().svd(true, true);
    let mut sols = vec![];
    let mut worst: f64 = 0.0;
    for _ in 0..starts {
        let s = CVec::from_fn(m * m, |_, _| C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let r = f(&s);
        let step = svd.solve(&r, 1e-12).unwrap_or_else(|_| CVec::zeros(m * m));
        let h = s - step;
        let res = fro(&(&lift(&h) * p - q * &lift(&h))) / fro(q).max(1e-300);
        worst = worst.max(res);
        sols.push(lift(&h));
    }
    (sols, worst)
}

/// Transport between fiber points by H, with uniqueness probed from random starts.
pub fn torsor_check<R: Rng>(pair: &GgpPair, lambda: &[C64], mu: &[C64], samples: usize, rng: &mut R) -> Result<TorsorReport> {
    let base = match fiber_basepoint(pair, lambda, mu)? {
        Fiber::Point(x) => x,
        other => return Err(Error::Precondition(format!("no basepoint: {other:?}"))),
    };
    let mut rep = TorsorReport { samples, transport_residual: 0.0, dispersion: 0.0 };
    match pair.case {
        Case::Orthogonal => {
            let p = xi_of(&base);
            let (r, z) = so3_height(lambda, mu);
            let rho = (r * r - z * z).sqrt();
            for s in 0..samples {
                let q: [f64; 3] = if s % 2 == 0 {
                    apply3(&rot_z(rng.random_range(0.0..2.0 * PI)), &p)
                } else {
                    let a: f64 = rng.random_range(0.0..2.0 * PI);
                    [rho * a.cos(), rho * a.sin(), z]
                };
                let sols: Vec<f64> = (0..8).map(|_| solve_angle(&p, &q, rng.random_range(0.0..2.0 * PI))).collect();
                for &t in &sols {
                    let rp = apply3(&rot_z(t), &p);
                    let d = ((rp[0] - q[0]).powi(2) + (rp[1] - q[1]).powi(2) + (rp[2] - q[2]).powi(2)).sqrt();
                    rep.transport_residual = rep.transport_residual.max(d / r.max(1e-300));
                    rep.dispersion = rep.dispersion.max(circ_dist(t, sols[0]));
                }
            }
        }
        Case::Linear => {
            let m = pair.n - 1;
            for s in 0..samples {
                let q = if s % 2 == 0 {
                    let h0 = CMat::from_fn(m, m, |i, j| c(rng.random_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }));
                    let t = embed_top_left(&h0, pair.n) + unit_corner(pair.n);
                    let ti = t.clone().try_inverse().ok_or_else(|| Error::Numerical("singular sample".into()))?;
                    &t * &base * ti
                } else {
                    let b: Vec<C64> = (0..m).map(|_| c(rng.random_range(0.5..2.0))).collect();
                    bordered_point(lambda, mu, &b)?
                };
                let (sols, res) = solve_conjugator(&base, &q, 8, rng);
                rep.transport_residual = rep.transport_residual.max(res);
                for h in &sols {
                    rep.dispersion = rep.dispersion.max(fro(&(h - &sols[0])) / fro(&sols[0]).max(1e-300));
                }
            }
        }
        Case::Unitary => return Err(Error::Unsupported("unitary fibers".into())),
    }
    if rep.dispersion > 1e-6 {
        return Err(Error::Inconsistency(format!("non-unique transport, spread {:.2e}", rep.dispersion)));
    }
    Ok(rep)
}

fn unit_corner(n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(n - 1, n - 1)] = c(1.0);
    m
}

fn so3_only(pair: &GgpPair) -> Result<()> {
    if pair.case == Case::Orthogonal && pair.n == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported("only so(3) ⊃ so(2) is implemented here".into()))
    }
}

/// ∫_H a(s·x₀) ds with unit-mass Haar on SO(2), evaluated on the slice circle (r, z).
/// Zero when (λ, μ) is unstable.
pub fn orbital_integral(pair: &GgpPair, r: f64, z: f64, a: &Symbol) -> Result<C64> {
    so3_only(pair)?;
    crate::error::check_dim(3, a.dim())?;
    let (l, m) = so3_invariants(r, z);
    if !is_stable_pair(&l, &m).stable || z.abs() >= r {
        return Ok(c(0.0));
    }
    let rho = (r * r - z * z).sqrt();
    let rule = periodic(160);
    Ok(rule.iter().map(|(t, w)| a.eval(&[rho * t.cos(), rho * t.sin(), z]) * (w / (2.0 * PI))).sum())
}

/// ∏_{α>0} ⟨μ, α^∨⟩ with the Lebesgue/√(2π) convention per torus coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMeasure {
    pub rank: usize,
    pub positive_coroots: Vec<Vec<f64>>,
}

impl AffineMeasure {
    pub fn for_algebra(name: &str) -> Result<Self> {
        match name {
            "so2" | "u1" => Ok(AffineMeasure { rank: 1, positive_coroots: vec![] }),
            "su2" | "so3" => Ok(AffineMeasure { rank: 1, positive_coroots: vec![vec![1.0]] }),
            _ => Err(Error::Unknown(name.into())),
        }
    }

    pub fn density(&self, mu: &[f64]) -> f64 {
        let roots: f64 = self
            .positive_coroots
            .iter()
            .map(|a| a.iter().zip(mu).map(|(x, y)| x * y).sum::<f64>().abs())
            .product();
        (2.0 * PI).powf(-(self.rank as f64) / 2.0) * roots
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disintegration {
    pub lhs: C64,
    /// ∫ (orbital integral) dγ before calibration.
    pub rhs_raw: C64,
    pub calibration: f64,
    pub residual: f64,
}

fn fibered_side(pair: &GgpPair, r: f64, a: &Symbol) -> Result<C64> {
    let gamma = AffineMeasure::for_algebra("so2")?;
    let mut s = c(0.0);
    for (z, w) in legendre(120, -r, r).iter() {
        s += orbital_integral(pair, r, z, a)? * (w * gamma.density(&[z]));
    }
    Ok(s)
}

/// The global constant linking unit Haar on H and the affine measure to ω on O^λ, from a ≡ 1.
pub fn disintegration_calibration(pair: &GgpPair, r: f64) -> Result<f64> {
    let one = Symbol::constant(3, c(1.0));
    let chart = OrbitChart::sphere_default(&LieAlgebra::so3(), r)?;
    let lhs = orbit_integral(&chart, &one)?.value;
    Ok(lhs.re / fibered_side(pair, r, &one)?.re)
}

/// |∫_{O^λ} a dω − κ ∫ (∫_{O^{λ,μ}} a) dγ(μ)| on independent quadratures.
pub fn disintegration_residual(pair: &GgpPair, r: f64, a: &Symbol, calibration: f64) -> Result<Disintegration> {
    so3_only(pair)?;
    let chart = OrbitChart::sphere_default(&LieAlgebra::so3(), r)?;
    let lhs = orbit_integral(&chart, a)?.value;
    let raw = fibered_side(pair, r, a)?;
    Ok(Disintegration { lhs, rhs_raw: raw, calibration, residual: (lhs - raw * calibration).norm() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatakeView {
    pub entries: Vec<C64>,
    pub contains_zero: bool,
    pub stable: bool,
}

/// ev(λ) + ev(−μ), doubled with a sign in the unitary case; stable iff 0 is absent.
pub fn satake_view(lambda: &[C64], mu: &[C64], unitary: bool) -> SatakeView {
    let mut entries = vec![];
    for &l in lambda {
        for &m in mu {
            entries.push(l + (-m));
            if unitary {
                entries.push(-(l - m));
            }
        }
    }
    let scale = lambda.iter().chain(mu).map(|z| z.norm()).fold(1.0, f64::max);
    let zero = entries.iter().any(|z| z.norm() <= STABILITY_RTOL * scale);
    SatakeView { entries, contains_zero: zero, stable: !zero }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2(a: f64, b: f64, cc: f64, d: f64) -> CMat {
        CMat::from_row_slice(2, 2, &[c(a), c(b), c(cc), c(d)])
    }

    #[test]
    fn pair_invariants() {
        for name in ["so3_so2", "so4_so3", "u2_u1", "gl2_gl1", "gl3_gl2"] {
            let p = GgpPair::by_name(name).unwrap();
            assert!(p.invariant_residual() < 1e-12, "{name}");
        }
    }

    #[test]
    fn restriction_examples() {
        let p = GgpPair::linear(2).unwrap();
        assert_eq!(restrict_h(&p, &m2(1.0, 2.0, 3.0, 4.0)).unwrap()[(0, 0)], c(1.0));
        let so = GgpPair::orthogonal(3).unwrap();
        let x = hat(&[0.0, 0.0, 0.7]);
        let xh = restrict_h(&so, &x).unwrap();
        assert!(fro(&(xh - x.view((0, 0), (2, 2)).into_owned())) == 0.0);
        assert!(restrict_h(&so, &CMat::identity(3, 3)).is_err());
    }

    #[test]
    fn ev_zero_removal() {
        let so = GgpPair::orthogonal(3).unwrap();
        let e = ev(&so, &hat(&[0.0, 0.0, 0.8])).unwrap();
        assert_eq!(e.entries.len(), 2);
        assert!(multiset_distance(&e.entries, &[C64::new(0.0, 0.8), C64::new(0.0, -0.8)]) < 1e-12);
        let gl = GgpPair::linear(3).unwrap();
        assert_eq!(ev(&gl, &CMat::zeros(3, 3)).unwrap().entries.len(), 3);
    }

    #[test]
    fn stability_examples() {
        let p = GgpPair::linear(2).unwrap();
        assert!(is_stable(&p, &m2(0.0, 1.0, 1.0, 0.0)).unwrap().stable);
        let nil = m2(0.0, 1.0, 0.0, 0.0);
        assert!(!is_stable(&p, &nil).unwrap().stable);
        let w = hm_witness(&p, &nil).unwrap().expect("witness");
        assert!(w.filtration_residual < 1e-12);
        // the kernel vector sits in V_H⁺
        assert!(w.vector[0].norm() > 0.99);
        assert!(!cyclic_criterion(&p, &nil).unwrap().stable);
        assert!(cyclic_criterion(&p, &m2(0.0, 1.0, 1.0, 0.0)).unwrap().stable);
        assert!(!is_stable_pair(&[c(0.0)], &[c(0.0)]).stable);
    }

    #[test]
    fn so3_poles_are_unstable() {
        let p = GgpPair::orthogonal(3).unwrap();
        for (xi, stable) in [([0.3, 0.4, 0.2], true), ([0.0, 0.0, 0.5], false), ([0.5, 0.0, 0.0], true)] {
            let x = hat(&xi);
            assert_eq!(is_stable(&p, &x).unwrap().stable, stable);
            assert_eq!(hm_witness(&p, &x).unwrap().is_none(), stable);
            assert_eq!(cyclic_criterion(&p, &x).unwrap().stable, stable);
        }
        assert!(!cyclic_criterion(&p, &CMat::zeros(3, 3)).unwrap().stable);
    }

    #[test]
    fn two_by_two_off_diagonal_nonzero() {
        let p = GgpPair::linear(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut n = 0;
        while n < 1000 {
            let x = Family::Gl3Gl2.sample(&mut rng, false).view((0, 0), (2, 2)).into_owned();
            let s = is_stable(&p, &x).unwrap();
            if s.stable && !s.borderline {
                assert!((x[(0, 1)] * x[(1, 0)]).norm() > 0.0);
                n += 1;
            }
        }
    }

    #[test]
    fn three_characterizations_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for fam in Family::ALL {
            let pair = fam.pair();
            let hp = pair.h_pair().ok();
            for k in 0..400 {
                let x = fam.sample(&mut rng, k % 2 == 1);
                let s = is_stable(&pair, &x).unwrap();
                let cy = cyclic_criterion(&pair, &x).unwrap();
                if s.borderline || cy.ambiguous {
                    continue;
                }
                let w = hm_witness(&pair, &x).unwrap();
                assert_eq!(s.stable, cy.stable, "{} cyclic {x}", fam.name());
                assert_eq!(s.stable, w.is_none(), "{} witness {x}", fam.name());
                if let Some(w) = w {
                    assert!(w.filtration_residual < 1e-8, "{}", fam.name());
                }
                if s.stable {
                    assert!(regular_test(&pair, &x).unwrap().regular, "{} regular {x}", fam.name());
                    if let Some(hp) = &hp {
                        let xh = restrict_h(&pair, &x).unwrap();
                        assert!(regular_test(hp, &xh).unwrap().regular);
                    }
                }
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let so = GgpPair::orthogonal(3).unwrap();
        assert!(!regular_test(&so, &CMat::zeros(3, 3)).unwrap().regular);
        assert!(regular_test(&so, &hat(&[0.1, 0.2, 0.3])).unwrap().regular);
        let gl = GgpPair::linear(3).unwrap();
        let mut j = CMat::zeros(3, 3);
        j[(0, 1)] = c(1.0);
        j[(1, 2)] = c(1.0);
        assert!(regular_test(&gl, &j).unwrap().regular);
        j[(1, 2)] = c(0.0);
        assert!(!regular_test(&gl, &j).unwrap().regular);
    }

    #[test]
    fn gl3_fiber_and_torsor() {
        let pair = GgpPair::linear(3).unwrap();
        let l = [c(1.3), c(-0.4), c(2.1)];
        let m = [c(0.5), c(-1.2)];
        let Fiber::Point(x) = fiber_basepoint(&pair, &l, &m).unwrap() else { panic!() };
        assert!(fiber_residual(&pair, &x, &l, &m).unwrap() < 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rep = torsor_check(&pair, &l, &m, 10, &mut rng).unwrap();
        assert!(rep.transport_residual < 1e-8 && rep.dispersion < 1e-6, "{rep:?}");
        // p = q gives the identity
        let (sols, _) = solve_conjugator(&x, &x, 3, &mut rng);
        assert!(fro(&(&sols[0] - CMat::identity(3, 3))) < 1e-10);
    }

    #[test]
    fn so3_fiber_and_torsor() {
        let pair = GgpPair::orthogonal(3).unwrap();
        let (l, m) = so3_invariants(1.5, 0.6);
        let Fiber::Point(x) = fiber_basepoint(&pair, &l, &m).unwrap() else { panic!() };
        let xi = xi_of(&x);
        assert!((xi[0] - (1.5f64 * 1.5 - 0.36).sqrt()).abs() < 1e-14 && xi[2] == 0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rep = torsor_check(&pair, &l, &m, 20, &mut rng).unwrap();
        assert!(rep.transport_residual < 1e-8 && rep.dispersion < 1e-6);
        let (l2, m2) = so3_invariants(1.0, 2.0);
        assert_eq!(fiber_basepoint(&pair, &l2, &m2).unwrap(), Fiber::Empty);
        let (l3, m3) = so3_invariants(1.0, 1.0);
        assert!(torsor_check(&pair, &l3, &m3, 2, &mut rng).is_err());
    }

    #[test]
    fn orbital_integral_conventions() {
        let pair = GgpPair::orthogonal(3).unwrap();
        let one = Symbol::constant(3, c(1.0));
        assert!((orbital_integral(&pair, 1.0, 0.3, &one).unwrap() - c(1.0)).norm() < 1e-14);
        assert_eq!(orbital_integral(&pair, 1.0, 1.0, &one).unwrap(), c(0.0));
        let zc = Symbol::polynomial(crate::poly::Poly::var(3, 2));
        assert!((orbital_integral(&pair, 1.0, 0.3, &zc).unwrap() - c(0.3)).norm() < 1e-14);
        // invariance under moving the basepoint around the circle
        let a = Symbol::gaussian(&[0.4, 0.2, 0.3], 0.5).unwrap();
        let v = orbital_integral(&pair, 1.0, 0.3, &a).unwrap();
        let rot = a.act(&crate::linalg::RMat::from_fn(3, 3, |i, j| rot_z(0.77)[i][j])).unwrap();
        assert!((orbital_integral(&pair, 1.0, 0.3, &rot).unwrap() - v).norm() < 1e-8);
    }

    #[test]
    fn disintegration() {
        let pair = GgpPair::orthogonal(3).unwrap();
        let r = 1.2;
        let kappa = disintegration_calibration(&pair, r).unwrap();
        assert!((kappa - (2.0 * PI).sqrt()).abs() < 1e-10, "{kappa}");
        let one = Symbol::constant(3, c(1.0));
        let d = disintegration_residual(&pair, r, &one, kappa).unwrap();
        assert!((d.lhs.re - 2.0 * r).abs() < 1e-10 && d.residual < 1e-6);
        let zc = Symbol::polynomial(crate::poly::Poly::var(3, 2));
        let d = disintegration_residual(&pair, r, &zc, kappa).unwrap();
        assert!(d.lhs.norm() < 1e-12 && d.rhs_raw.norm() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ratios: Vec<f64> = (0..10)
            .map(|_| {
                let ctr: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                let a = Symbol::gaussian(&ctr, rng.random_range(0.4..0.9)).unwrap();
                let d = disintegration_residual(&pair, r, &a, kappa).unwrap();
                d.lhs.re / d.rhs_raw.re
            })
            .collect();
        let mean = ratios.iter().sum::<f64>() / 10.0;
        let sd = (ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 10.0).sqrt();
        assert!(sd < 1e-6, "{sd}");
    }

    #[test]
    fn affine_density_homogeneity() {
        let a = AffineMeasure::for_algebra("su2").unwrap();
        assert!((a.density(&[2.0]) - 2.0 * a.density(&[1.0])).abs() < 1e-15);
        let t = AffineMeasure::for_algebra("so2").unwrap();
        assert_eq!(t.density(&[0.3]), t.density(&[5.0]));
    }

    #[test]
    fn satake_matches_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let i = C64::new(0.0, 1.0);
        assert!(!satake_view(&[i, -i], &[i], true).stable);
        for k in 0..1000 {
            let l: Vec<C64> = (0..3).map(|_| c(rng.random_range(-2..3) as f64)).collect();
            let mut m: Vec<C64> = (0..2).map(|_| c(rng.random_range(-2..3) as f64 + 0.5)).collect();
            if k % 2 == 0 {
                m[0] = l[1];
            }
            assert_eq!(satake_view(&l, &m, false).stable, is_stable_pair(&l, &m).stable);
        }
    }

    #[test]
    fn stable_locus_is_open() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let pair = GgpPair::linear(3).unwrap();
        for _ in 0..50 {
            let x = Family::Gl3Gl2.sample(&mut rng, false);
            let s = is_stable(&pair, &x).unwrap();
            if s.min_gap < 1e-3 {
                continue;
            }
            let dx = CMat::from_fn(3, 3, |_, _| c(rng.random_range(-1.0..1.0)));
            let y = &x + &dx * c(1e-6 / fro(&dx));
            assert!(is_stable(&pair, &y).unwrap().stable);
        }
    }
}
