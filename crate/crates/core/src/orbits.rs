//! Coadjoint orbits: sphere charts with the normalized symplectic measure, orbit integrals,
//! homogeneity, invariant coordinates, equal-volume strips and nilcone rescaling.

use crate::fit::loglog_slope;
use crate::linalg::{CMat, RMat};
use crate::liecore::LieAlgebra;
use crate::quadrature::{legendre, periodic};
use crate::symbols::Symbol;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

pub use crate::ggp::{regular_test, Regularity};

/// σ_ξ(ad*_x ξ, ad*_y ξ) = [x, y]ξ / i = Σₖ [x, y]ₖ ξₖ.
pub fn symplectic_form_at(g: &LieAlgebra, xi: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    crate::error::check_dim(g.dim(), xi.len())?;
    let b = g.bracket(x, y)?;
    Ok(b.iter().zip(xi).map(|(p, q)| p * q).sum())
}

fn is_rotation_algebra(g: &LieAlgebra) -> bool {
    g.dim() == 3
        && (0..3).all(|i| (0..3).all(|j| (0..3).all(|k| (g.c(i, j, k) - crate::liecore::levi_civita(i, j, k)).abs() < 1e-12)))
}

/// A quadrature chart on a compact coadjoint orbit.
#[derive(Debug, Clone)]
pub struct OrbitChart {
    pub algebra: LieAlgebra,
    pub basepoint: Vec<f64>,
    /// Sphere radius (0 for the point orbit).
    pub radius: f64,
    pub half_dim: usize,
    /// (point ξ on the orbit, ω-weight).
    pub nodes: Vec<(Vec<f64>, f64)>,
    pub resolution: (usize, usize),
}

impl OrbitChart {
    /// Sphere |ξ| = radius for algebras with [Xa, Xb] = ε_abc Xc. Parameterized by
    /// (z, φ), Gauss-Legendre in z and uniform in φ; dω = dz dφ / 2π.
    pub fn sphere(g: &LieAlgebra, radius: f64, nz: usize, nphi: usize) -> Result<Self> {
        if !is_rotation_algebra(g) {
            return Err(Error::Unsupported(format!("sphere charts need ε structure constants, not {}", g.name)));
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParam(format!("radius must be ≥ 0, got {radius}")));
        }
        if radius == 0.0 {
            return Ok(OrbitChart {
                algebra: g.clone(),
                basepoint: vec![0.0; 3],
                radius,
                half_dim: 0,
                nodes: vec![(vec![0.0; 3], 1.0)],
                resolution: (1, 1),
            });
        }
        let zr = legendre(nz, -radius, radius);
        let pr = periodic(nphi);
        let mut nodes = Vec::with_capacity(nz * nphi);
        for (z, wz) in zr.iter() {
            let rho = (radius * radius - z * z).max(0.0).sqrt();
            for (p, wp) in pr.iter() {
                nodes.push((vec![rho * p.cos(), rho * p.sin(), z], wz * wp / (2.0 * PI)));
            }
        }
        Ok(OrbitChart { algebra: g.clone(), basepoint: vec![0.0, 0.0, radius], radius, half_dim: 1, nodes, resolution: (nz, nphi) })
    }

    /// Default resolution, adequate for Gaussians of width ≳ radius/20.
    pub fn sphere_default(g: &LieAlgebra, radius: f64) -> Result<Self> {
        Self::sphere(g, radius, 96, 128)
    }

    pub fn refined(&self) -> Result<Self> {
        let (a, b) = self.resolution;
        Self::sphere(&self.algebra, self.radius, a + a / 2, b + b / 2)
    }

    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.1).sum()
    }

    /// Max |invariants(node) − invariants(basepoint)|.
    pub fn on_orbit_residual(&self) -> f64 {
        let base = infinitesimal_character(&self.algebra, &self.basepoint).unwrap_or_default();
        self.nodes
            .iter()
            .map(|(p, _)| {
                let v = infinitesimal_character(&self.algebra, p).unwrap_or_default();
                v.iter().zip(&base).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Max deviation of the chart density dz dφ/2π from σ(∂_z, ∂_φ)/2π, with σ evaluated
    /// through the structure constants at a subsample of nodes.
    pub fn density_residual(&self) -> f64 {
        if self.half_dim == 0 {
            return 0.0;
        }
        let g = &self.algebra;
        let mut worst: f64 = 0.0;
        for (p, _) in self.nodes.iter().step_by(7) {
            let (x, y, z) = (p[0], p[1], p[2]);
            let rho = (x * x + y * y).sqrt();
            if rho < 1e-8 {
                continue;
            }
            let (c, s) = (x / rho, y / rho);
            let dz = [-z / rho * c, -z / rho * s, 1.0];
            let dphi = [-y, x, 0.0];
            let pre = |u: &[f64; 3]| -> Option<Vec<f64>> {
                let a = RMat::from_fn(3, 3, |i, j| (0..3).map(|k| g.c(i, j, k) * p[k]).sum());
                let sol = a.svd(true, true).solve(&nalgebra::DVector::from_row_slice(u), 1e-12).ok()?;
                Some(sol.iter().cloned().collect())
            };
            let (Some(a), Some(b)) = (pre(&dz), pre(&dphi)) else { return f64::INFINITY };
            let sigma = symplectic_form_at(g, p, &a, &b).unwrap_or(f64::NAN);
            worst = worst.max((sigma.abs() - 1.0).abs() / (2.0 * PI));
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitIntegral {
    pub value: C64,
    pub refinement_delta: f64,
    pub converged: bool,
}

fn raw_integral(chart: &OrbitChart, a: &Symbol) -> C64 {
    chart.nodes.iter().map(|(p, w)| a.eval(p) * *w).sum()
}

/// ∫_O a dω, with a refinement check at 1.5× the resolution.
pub fn orbit_integral(chart: &OrbitChart, a: &Symbol) -> Result<OrbitIntegral> {
    crate::error::check_dim(chart.algebra.dim(), a.dim())?;
    let v = raw_integral(chart, a);
    let delta = if chart.half_dim == 0 { 0.0 } else { (raw_integral(&chart.refined()?, a) - v).norm() };
    Ok(OrbitIntegral { value: v, refinement_delta: delta, converged: delta <= 1e-8 * v.norm().max(1.0) })
}

/// Sum over the components of a multiorbit.
pub fn multiorbit_integral(charts: &[OrbitChart], a: &Symbol) -> Result<OrbitIntegral> {
    let mut out = OrbitIntegral { value: C64::new(0.0, 0.0), refinement_delta: 0.0, converged: true };
    for c in charts {
        let r = orbit_integral(c, a)?;
        out.value += r.value;
        out.refinement_delta += r.refinement_delta;
        out.converged &= r.converged;
    }
    Ok(out)
}

/// |∫_O a dω − t^{−d} ∫_{tO} a(t⁻¹·) dω|, the two sides on independent grids.
pub fn homogeneity_residual(chart: &OrbitChart, a: &Symbol, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("t must be positive, got {t}")));
    }
    let lhs = raw_integral(chart, a);
    let (nz, np) = chart.resolution;
    let big = OrbitChart::sphere(&chart.algebra, t * chart.radius, nz + 11, np + 10)?;
    let at = a.rescale(1.0 / t)?;
    let rhs = raw_integral(&big, &at) * t.powi(-(chart.half_dim as i32));
    Ok((lhs - rhs).norm())
}

/// Fitted exponent of total mass against t over the scale list.
pub fn mass_exponent(g: &LieAlgebra, radius: f64, ts: &[f64]) -> Result<f64> {
    let masses: Vec<f64> = ts.iter().map(|t| OrbitChart::sphere(g, t * radius, 16, 8).map(|c| c.mass())).collect::<Result<_>>()?;
    loglog_slope(ts, &masses).ok_or_else(|| Error::Numerical("degenerate mass fit".into()))
}

/// Characteristic-polynomial coefficients of M/i, where ξ ↦ M through the trace form
/// tr(M Xₖ) = ξₖ; the Pfaffian of M is appended for real antisymmetric even-size M.
pub fn infinitesimal_character(g: &LieAlgebra, xi: &[f64]) -> Result<Vec<C64>> {
    crate::error::check_dim(g.dim(), xi.len())?;
    let n = g.dim();
    let b = RMat::from_fn(n, n, |i, j| (g.matrix_basis[i].clone() * &g.matrix_basis[j]).trace().re);
    let lu = b.lu();
    let c = lu
        .solve(&nalgebra::DVector::from_row_slice(xi))
        .ok_or_else(|| Error::Unsupported(format!("trace form degenerate on {}", g.name)))?;
    let d = g.matrix_basis[0].nrows();
    let mut m = CMat::zeros(d, d);
    for (k, ck) in c.iter().enumerate() {
        m += &g.matrix_basis[k] * C64::new(*ck, 0.0);
    }
    let mi = &m * C64::new(0.0, -1.0);
    let mut out = charpoly(&mi);
    let real_antisym = m.iter().all(|v| v.im.abs() < 1e-14) && (&m + m.transpose()).norm() < 1e-12;
    if d % 2 == 0 && real_antisym && g.name.starts_with("so") {
        out.push(C64::new(pfaffian(&m.map(|v| v.re)), 0.0));
    }
    Ok(out)
}

/// Coefficients c₁..c_d of det(t − A) = tᵈ + c₁tᵈ⁻¹ + … (Faddeev-LeVerrier).
fn charpoly(a: &CMat) -> Vec<C64> {
    let d = a.nrows();
    let mut out = Vec::with_capacity(d);
    let mut mk = CMat::zeros(d, d);
    let mut c = C64::new(1.0, 0.0);
    for k in 1..=d {
        mk = a * (&mk + CMat::identity(d, d) * c);
        c = -mk.trace() / k as f64;
        out.push(c);
    }
    out
}

/// Pfaffian of a real antisymmetric matrix by Parlett-Reid style elimination.
fn pfaffian(a: &RMat) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k < n - 1 {
        let (p, _) = (k + 1..n).map(|i| (i, a[(k, i)].abs())).fold((k + 1, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if p != k + 1 {
            a.swap_rows(k + 1, p);
            a.swap_columns(k + 1, p);
            pf = -pf;
        }
        let piv = a[(k, k + 1)];
        if piv == 0.0 {
            return 0.0;
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|i| a[(k, i)] / piv).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let v = a[(i, j)] + tau[ii] * a[(j, k + 1)] - a[(i, k + 1)] * tau[jj];
                    a[(i, j)] = v;
                }
            }
        }
        k += 2;
    }
    pf
}

/// One band of the sphere between two z-levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    pub z_lo: f64,
    pub z_hi: f64,
    pub mass: f64,
}

/// Cut the sphere of the given radius into strips of unit ω-mass by inverting the
/// cumulative z-mass at the integers, then integrate each strip on its own grid.
pub fn strips(g: &LieAlgebra, radius: f64) -> Result<Vec<Strip>> {
    let chart = OrbitChart::sphere(g, radius, 32, 8)?;
    let total = chart.mass();
    let count = total.round() as usize;
    if count == 0 || (total - count as f64).abs() > 1e-9 {
        return Err(Error::Precondition(format!("orbit mass {total} is not a positive integer")));
    }
    let cumulative = |z: f64| -> f64 {
        if z <= -radius {
            return 0.0;
        }
        let r = legendre(8, -radius, z.min(radius));
        let rule = periodic(8);
        r.iter().map(|(_, wz)| rule.weights.iter().map(|wp| wz * wp / (2.0 * PI)).sum::<f64>()).sum()
    };
    let mut edges = vec![-radius];
    for k in 1..count {
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cumulative(mid) < k as f64 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        edges.push(0.5 * (lo + hi));
    }
    edges.push(radius);
    let rule_phi = periodic(16);
    Ok(edges
        .windows(2)
        .map(|e| {
            let mass = legendre(12, e[0], e[1])
                .iter()
                .map(|(_, wz)| rule_phi.weights.iter().map(|wp| wz * wp / (2.0 * PI)).sum::<f64>())
                .sum();
            Strip { z_lo: e[0], z_hi: e[1], mass }
        })
        .collect())
}

/// One rescaled orbit h·O clipped to the window.
#[derive(Debug, Clone)]
pub struct NilconeFrame {
    pub h: f64,
    pub invariant: f64,
    pub points: Vec<[f64; 3]>,
    /// One-sided Hausdorff distance from the clipped points to the cone ρ = |z|.
    pub hausdorff: f64,
}

/// sl(2,ℝ) one-sheeted hyperboloids x² + y² − z² = c rescaled by h, in the coordinates
/// where the invariant form is diag(½, ½, −½). Points are sampled on a (z, φ) grid.
pub fn nilcone_rescaling(c: f64, h_list: &[f64], window: f64, samples: usize) -> Result<Vec<NilconeFrame>> {
    if !(c > 0.0) || !(window > 0.0) || samples < 2 {
        return Err(Error::InvalidParam("need c > 0, window > 0 and at least two samples".into()));
    }
    let mut out = vec![];
    for &h in h_list {
        let inv = h * h * c;
        let mut points = vec![];
        let mut dist: f64 = 0.0;
        for i in 0..samples {
            let z = -window + 2.0 * window * i as f64 / (samples - 1) as f64;
            let rho = (z * z + inv).sqrt();
            if rho > window {
                continue;
            }
            dist = dist.max((rho - z.abs()) / 2f64.sqrt());
            for k in 0..samples {
                let p = 2.0 * PI * k as f64 / samples as f64;
                points.push([rho * p.cos(), rho * p.sin(), z]);
            }
        }
        out.push(NilconeFrame { h, invariant: inv, points, hausdorff: dist });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn symplectic_form_basics() {
        let g = LieAlgebra::su2();
        let xi = [0.0, 0.0, 2.5];
        assert_eq!(symplectic_form_at(&g, &xi, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((symplectic_form_at(&g, &xi, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap() - 2.5).abs() < 1e-15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let v = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> { (0..3).map(|_| r.random_range(-1.0..1.0)).collect() };
        let (x1, x2, y) = (v(&mut rng), v(&mut rng), v(&mut rng));
        let (a, b) = (0.7, -1.3);
        let comb: Vec<f64> = (0..3).map(|k| a * x1[k] + b * x2[k]).collect();
        let lhs = symplectic_form_at(&g, &xi, &comb, &y).unwrap();
        let rhs = a * symplectic_form_at(&g, &xi, &x1, &y).unwrap() + b * symplectic_form_at(&g, &xi, &x2, &y).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn sphere_mass_is_dimension() {
        let g = LieAlgebra::su2();
        for twice in 2..=40 {
            let j = twice as f64 / 2.0;
            let c = OrbitChart::sphere(&g, j + 0.5, 8, 4).unwrap();
            assert!((c.mass() - (2.0 * j + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_is_on_orbit_with_verified_density() {
        let g = LieAlgebra::su2();
        let c = OrbitChart::sphere(&g, 3.5, 20, 16).unwrap();
        assert!(c.on_orbit_residual() < 1e-10);
        assert!(c.density_residual() < 1e-10);
    }

    #[test]
    fn integrals_vanish_off_orbit_and_for_odd_symbols() {
        let g = LieAlgebra::su2();
        let c = OrbitChart::sphere_default(&g, 2.0).unwrap();
        let far = Symbol::gaussian(&[0.0, 0.0, 9.0], 0.5).unwrap();
        assert!(orbit_integral(&c, &far).unwrap().value.norm() < 1e-12);
        let odd = Symbol::gaussian_poly(&[0.0; 3], &[1.5; 3], crate::poly::Poly::var(3, 2)).unwrap();
        assert!(orbit_integral(&c, &odd).unwrap().value.norm() < 1e-12);
    }

    #[test]
    fn homogeneity_and_mass_exponent() {
        let g = LieAlgebra::su2();
        let c = OrbitChart::sphere_default(&g, 1.5).unwrap();
        let a = Symbol::gaussian(&[0.3, 0.0, 1.2], 0.6).unwrap();
        assert!(homogeneity_residual(&c, &a, 1.0).unwrap() < 1e-12);
        assert!(homogeneity_residual(&c, &a, 2.0).unwrap() < 1e-8);
        assert!((mass_exponent(&g, 1.5, &[0.5, 1.0, 2.0, 4.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orbit_integral_is_coadjoint_invariant() {
        let g = LieAlgebra::su2();
        let c = OrbitChart::sphere_default(&g, 2.5).unwrap();
        let a = Symbol::gaussian(&[0.5, -0.2, 2.0], 0.7).unwrap();
        let base = orbit_integral(&c, &a).unwrap();
        assert!(base.converged);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let r = g.coadjoint_matrix(&g.group_exp(&x).matrix).unwrap();
            let moved = orbit_integral(&c, &a.act(&r).unwrap()).unwrap();
            assert!((moved.value - base.value).norm() < 1e-8);
        }
    }

    #[test]
    fn invariants_su2_and_conjugation() {
        let g = LieAlgebra::su2();
        assert!(infinitesimal_character(&g, &[0.0; 3]).unwrap().iter().all(|c| c.norm() == 0.0));
        let r = |xi: &[f64]| infinitesimal_character(&g, xi).unwrap();
        // single invariant proportional to r²
        let a = r(&[0.0, 0.0, 1.0]);
        let b = r(&[0.6, 0.0, 0.8]);
        let c = r(&[0.0, 0.0, 2.0]);
        assert!(a[0].norm() < 1e-14 && (a[1] - b[1]).norm() < 1e-14 && (c[1] - a[1] * 4.0).norm() < 1e-13);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for gname in ["su2", "so4", "u3", "gl3", "sl2r"] {
            let g = LieAlgebra::by_name(gname).unwrap();
            let n = g.dim();
            let xi: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let base = infinitesimal_character(&g, &xi).unwrap();
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.8..0.8)).collect();
                let m = g.coadjoint_matrix(&g.group_exp(&x).matrix).unwrap();
                let moved: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] * xi[j]).sum()).collect();
                let v = infinitesimal_character(&g, &moved).unwrap();
                let dev = v.iter().zip(&base).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
                assert!(dev < 1e-10, "{gname}: {dev}");
            }
        }
        // Pfaffian present for so(4)
        let so4 = LieAlgebra::so_n(4).unwrap();
        assert_eq!(infinitesimal_character(&so4, &[1.0; 6]).unwrap().len(), 5);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut a = RMat::zeros(6, 6);
        for i in 0..6 {
            for j in i + 1..6 {
                let v = rng.random_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
        let p = pfaffian(&a);
        assert!((p * p - a.determinant()).abs() < 1e-12);
    }

    #[test]
    fn strips_have_unit_mass() {
        let g = LieAlgebra::su2();
        let s = strips(&g, 5.5).unwrap();
        assert_eq!(s.len(), 11);
        assert!(s.iter().all(|t| (t.mass - 1.0).abs() < 1e-9));
    }

    #[test]
    fn nilcone_distance_shrinks_linearly() {
        let hs = [1.0, 0.5, 0.25, 0.125];
        let f = nilcone_rescaling(1.0, &hs, 3.0, 201).unwrap();
        assert!((f[0].invariant - 1.0).abs() < 1e-15);
        let d: Vec<f64> = f.iter().map(|x| x.hausdorff).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]));
        assert!((loglog_slope(&hs, &d).unwrap() - 1.0).abs() < 0.3);
    }
}
