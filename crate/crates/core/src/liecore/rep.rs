use super::LieAlgebra;
use crate::linalg::{commutator, exp_skew, fro, CMat, I};
use crate::{Error, Result, C64};

/// The standard basis diagonalizes the torus generator: π(X_torus) eₖ = i·weights[k]·eₖ.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightBasis {
    pub torus: usize,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FiniteRep {
    pub algebra: LieAlgebra,
    pub label: String,
    pub generators: Vec<CMat>,
    pub weight_basis: Option<WeightBasis>,
    /// Spin j when the rep is the spin-j rep of su(2)/so(3) in the standard weight basis.
    pub spin: Option<f64>,
    /// Truncated models satisfy the commutation relations only on a leading block.
    pub exact_block: Option<usize>,
}

impl FiniteRep {
    pub fn new(algebra: LieAlgebra, label: &str, generators: Vec<CMat>) -> Result<Self> {
        let rep = FiniteRep {
            algebra,
            label: label.to_string(),
            generators,
            weight_basis: None,
            spin: None,
            exact_block: None,
        };
        rep.validate()?;
        Ok(rep)
    }

    /// The embedding itself, as a representation.
    pub fn defining(algebra: &LieAlgebra) -> Self {
        let gens = algebra.matrix_basis.clone();
        FiniteRep::new(algebra.clone(), &format!("{}_defining", algebra.name), gens).expect("defining rep")
    }

    fn validate(&self) -> Result<()> {
        if self.generators.len() != self.algebra.dim() {
            return Err(Error::Dim { expected: self.algebra.dim(), got: self.generators.len() });
        }
        let d = self.dim();
        if self.generators.iter().any(|g| g.shape() != (d, d)) {
            return Err(Error::InvalidParam("generators must be square of a common size".into()));
        }
        // generator entries grow with the highest weight, so compare relative to their size
        let scale = self.generators.iter().map(|g| fro(g) * fro(g)).fold(1.0, f64::max);
        let sk = self.skew_residual();
        if sk > 1e-12 * scale.sqrt() {
            return Err(Error::InvalidParam(format!("generators not skew-Hermitian ({sk:e})")));
        }
        let cr = self.commutator_residual();
        if cr > 1e-12 * scale {
            return Err(Error::InvalidParam(format!("commutation relations fail ({cr:e})")));
        }
        if let Some(wb) = &self.weight_basis {
            let t = &self.generators[wb.torus];
            let diag = CMat::from_diagonal(&crate::linalg::CVec::from_iterator(
                d,
                wb.weights.iter().map(|w| I * *w),
            ));
            if fro(&(t - diag)) > 1e-12 {
                return Err(Error::InvalidParam("weight basis does not diagonalize the torus".into()));
            }
            if wb.weights.iter().any(|w| ((2.0 * w).round() - 2.0 * w).abs() > 1e-12) {
                return Err(Error::InvalidParam("weights must be integers or half-integers".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map(|g| g.nrows()).unwrap_or(0)
    }

    pub fn skew_residual(&self) -> f64 {
        self.generators.iter().map(|g| fro(&(g + g.adjoint()))).fold(0.0, f64::max)
    }

    /// max ‖[π(Xi), π(Xj)] − Σ c[i][j][k] π(Xk)‖, restricted to the exact block if any.
    pub fn commutator_residual(&self) -> f64 {
        let n = self.algebra.dim();
        let d = self.dim();
        let b = self.exact_block.unwrap_or(d);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut m = commutator(&self.generators[i], &self.generators[j]);
                for k in 0..n {
                    let c = self.algebra.c(i, j, k);
                    if c != 0.0 {
                        m -= &self.generators[k] * C64::new(c, 0.0);
                    }
                }
                worst = worst.max(fro(&m.view((0, 0), (b, b)).into_owned()));
            }
        }
        worst
    }

    /// π(x) = Σ xₖ π(Xₖ).
    pub fn pi(&self, x: &[f64]) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (xk, g) in x.iter().zip(&self.generators) {
            if *xk != 0.0 {
                m += g * C64::new(*xk, 0.0);
            }
        }
        m
    }

    /// π(exp x).
    pub fn group(&self, x: &[f64]) -> CMat {
        exp_skew(&self.pi(x))
    }

    /// Δ = 1 − Σ π(Xi)².
    pub fn delta(&self) -> CMat {
        let d = self.dim();
        let mut m = CMat::identity(d, d);
        for g in &self.generators {
            m -= g * g;
        }
        m
    }

    /// Orthogonal projector onto the weight-n space.
    pub fn weight_projector(&self, n: f64) -> Result<CMat> {
        let wb = self
            .weight_basis
            .as_ref()
            .ok_or_else(|| Error::Precondition("representation has no weight basis".into()))?;
        let d = self.dim();
        Ok(CMat::from_fn(d, d, |i, j| {
            if i == j && (wb.weights[i] - n).abs() < 1e-9 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// spin-j rep of su(2): π(X1) = iJ1, π(X2) = −iJ2, π(X3) = iJ3, basis ordered m = j, j−1, …, −j.
    pub fn su2_spin(j: f64) -> Result<Self> {
        Self::spin_on(LieAlgebra::su2(), j, &format!("su2_spin({})", fmt_half(j)))
    }

    /// spin-l rep of so(3) in the same weight basis.
    pub fn so3_l(l: usize) -> Result<Self> {
        Self::spin_on(LieAlgebra::so3(), l as f64, &format!("so3_l({l})"))
    }

    fn spin_on(algebra: LieAlgebra, j: f64, label: &str) -> Result<Self> {
        let twice = 2.0 * j;
        if !(j >= 0.0) || (twice.round() - twice).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!("spin must be a non-negative half-integer, got {j}")));
        }
        let (j1, j2, j3) = spin_matrices(j);
        let gens = vec![&j1 * I, &j2 * (-I), &j3 * I];
        let weights: Vec<f64> = (0..j3.nrows()).map(|k| j - k as f64).collect();
        let mut rep = FiniteRep::new(algebra, label, gens)?;
        rep.weight_basis = Some(WeightBasis { torus: 2, weights });
        rep.spin = Some(j);
        rep.validate()?;
        Ok(rep)
    }

    /// Standard rep of so(N) on ℂᴺ.
    pub fn so_n_std(n: usize) -> Result<Self> {
        let g = LieAlgebra::so_n(n)?;
        let gens = g.matrix_basis.clone();
        FiniteRep::new(g, &format!("soN_std({n})"), gens)
    }

    /// Standard rep of u(N) on ℂᴺ.
    pub fn u_n_std(n: usize) -> Result<Self> {
        let g = LieAlgebra::u_n(n)?;
        let gens = g.matrix_basis.clone();
        FiniteRep::new(g, &format!("uN_std({n})"), gens)
    }

    /// Schrödinger model of the Heisenberg algebra truncated to the lowest `levels`
    /// oscillator states: X = i√ħ(a+a†)/√2, Y = √ħ(a−a†)/√2, Z = −iħ.
    /// [X, Y] = Z holds except in the last row and column.
    pub fn heisenberg_truncated(levels: usize, hbar: f64) -> Result<Self> {
        if levels < 2 || !(hbar > 0.0) {
            return Err(Error::InvalidParam("need levels ≥ 2 and ħ > 0".into()));
        }
        let mut a = CMat::zeros(levels, levels);
        for k in 1..levels {
            a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
        }
        let ad = a.adjoint();
        let s = (hbar / 2.0).sqrt();
        let x = (&a + &ad) * (I * s);
        let y = (&a - &ad) * C64::new(s, 0.0);
        let z = CMat::identity(levels, levels) * (-I * hbar);
        let mut rep = FiniteRep {
            algebra: LieAlgebra::heisenberg(),
            label: format!("heisenberg_schrodinger_truncated({levels})"),
            generators: vec![x, y, z],
            weight_basis: None,
            spin: None,
            exact_block: Some(levels - 1),
        };
        rep.validate()?;
        rep.exact_block = Some(levels - 1);
        Ok(rep)
    }

    /// Characters of ℝᵏ: the m-th basis vector transforms by exp(i·⟨w_m, x⟩).
    pub fn torus_characters(weights: &[Vec<f64>]) -> Result<Self> {
        let k = weights.first().map(|w| w.len()).unwrap_or(0);
        if k == 0 || weights.iter().any(|w| w.len() != k) {
            return Err(Error::InvalidParam("weights must be nonempty vectors of equal length".into()));
        }
        let d = weights.len();
        let gens = (0..k)
            .map(|t| CMat::from_fn(d, d, |i, j| if i == j { I * weights[i][t] } else { C64::new(0.0, 0.0) }))
            .collect();
        FiniteRep::new(LieAlgebra::abelian(k), &format!("torus_characters({d})"), gens)
    }
}

fn fmt_half(j: f64) -> String {
    if j.fract() == 0.0 {
        format!("{}", j as i64)
    } else {
        format!("{}/2", (2.0 * j) as i64)
    }
}

/// Hermitian spin matrices J1, J2, J3 in the basis m = j, j−1, …, −j.
pub fn spin_matrices(j: f64) -> (CMat, CMat, CMat) {
    let d = (2.0 * j).round() as usize + 1;
    let m = |k: usize| j - k as f64;
    let mut jp = CMat::zeros(d, d);
    for k in 1..d {
        // J+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits at index k−1
        let mk = m(k);
        jp[(k - 1, k)] = C64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * C64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    let j3 = CMat::from_fn(d, d, |r, c| if r == c { C64::new(m(r), 0.0) } else { C64::new(0.0, 0.0) });
    (j1, j2, j3)
}

/// Catalog lookup by name; parameters are numeric.
pub fn rep_catalog(name: &str, params: &[f64]) -> Result<FiniteRep> {
    let p = |k: usize| {
        params
            .get(k)
            .cloned()
            .ok_or_else(|| Error::InvalidParam(format!("{name}: missing parameter {k}")))
    };
    let as_usize = |v: f64| -> Result<usize> {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(Error::InvalidParam(format!("{name}: expected a non-negative integer, got {v}")))
        }
    };
    match name {
        "su2_spin" => FiniteRep::su2_spin(p(0)?),
        "so3_l" => FiniteRep::so3_l(as_usize(p(0)?)?),
        "soN_std" => FiniteRep::so_n_std(as_usize(p(0)?)?),
        "uN_std" => FiniteRep::u_n_std(as_usize(p(0)?)?),
        "heisenberg_schrodinger_truncated" => {
            FiniteRep::heisenberg_truncated(as_usize(p(0)?)?, params.get(1).cloned().unwrap_or(1.0))
        }
        "torus_characters" => {
            let k = as_usize(p(0)?)?;
            let rest = &params[1..];
            if k == 0 || rest.is_empty() || rest.len() % k != 0 {
                return Err(Error::InvalidParam("torus_characters: [k, w11, …, w1k, w21, …]".into()));
            }
            FiniteRep::torus_characters(&rest.chunks(k).map(|c| c.to_vec()).collect::<Vec<_>>())
        }
        _ => Err(Error::Unknown(format!("representation {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_eig;

    #[test]
    fn spin_half_is_the_embedding() {
        let r = FiniteRep::su2_spin(0.5).unwrap();
        for k in 0..3 {
            assert!(fro(&(&r.generators[k] - &r.algebra.matrix_basis[k])) < 1e-15);
        }
        // Δ = (1 + 3/4)·I on spin ½
        let d = r.delta();
        assert!(fro(&(d - CMat::identity(2, 2) * C64::new(1.75, 0.0))) < 1e-14);
    }

    #[test]
    fn catalog_reps_pass_invariants() {
        for (name, params) in [
            ("su2_spin", vec![0.0]),
            ("su2_spin", vec![2.5]),
            ("su2_spin", vec![7.0]),
            ("so3_l", vec![3.0]),
            ("soN_std", vec![4.0]),
            ("uN_std", vec![3.0]),
            ("heisenberg_schrodinger_truncated", vec![6.0]),
            ("torus_characters", vec![2.0, 1.0, 0.0, -1.0, 2.0]),
        ] {
            let r = rep_catalog(name, &params).unwrap();
            assert!(r.skew_residual() <= 1e-12 && r.commutator_residual() <= 1e-12, "{name}");
            assert!(r.algebra.jacobi_residual() <= 1e-12);
        }
        assert_eq!(rep_catalog("su2_spin", &[3.5]).unwrap().dim(), 8);
        assert!(matches!(rep_catalog("su2_spin", &[0.3]), Err(Error::InvalidParam(_))));
        assert!(matches!(rep_catalog("e8", &[]), Err(Error::Unknown(_))));
    }

    #[test]
    fn so3_l1_matches_defining_spectra() {
        let a = FiniteRep::so3_l(1).unwrap();
        let d = FiniteRep::defining(&LieAlgebra::so3());
        let mut rng = 0.37f64;
        for _ in 0..10 {
            let x: Vec<f64> = (0..3)
                .map(|_| {
                    rng = (rng * 9301.0 + 0.49297).fract();
                    2.0 * rng - 1.0
                })
                .collect();
            let (ea, _) = herm_eig(&(a.pi(&x) * I));
            let (eb, _) = herm_eig(&(d.pi(&x) * I));
            for k in 0..3 {
                assert!((ea[k] - eb[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn delta_is_casimir_on_su2() {
        let r = FiniteRep::su2_spin(3.0).unwrap();
        let d = r.delta();
        let c = 1.0 + 3.0 * 4.0;
        assert!(fro(&(&d - CMat::identity(7, 7) * C64::new(c, 0.0))) < 1e-11);
        let g = r.group(&[0.4, -1.1, 0.3]);
        assert!(fro(&(&d * &g - &g * &d)) < 1e-10);
        let (ev, _) = herm_eig(&FiniteRep::so_n_std(4).unwrap().delta());
        assert!(ev.iter().all(|&e| e >= 1.0 - 1e-12));
        let triv = FiniteRep::su2_spin(0.0).unwrap();
        assert!(fro(&(triv.delta() - CMat::identity(1, 1))) == 0.0);
    }

    #[test]
    fn weight_projectors_resolve_identity() {
        let r = FiniteRep::su2_spin(2.5).unwrap();
        let mut s = CMat::zeros(6, 6);
        for w in &r.weight_basis.as_ref().unwrap().weights {
            s += r.weight_projector(*w).unwrap();
        }
        assert!(fro(&(s - CMat::identity(6, 6))) < 1e-15);
    }
}
