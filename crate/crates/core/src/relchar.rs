//! Relative characters for SO(2) ⊂ SO(3): H_σ(T) = ∫_H tr(π(s)T) σ(s)⁻¹ ds on spin
//! representations, and the comparison of H_σ(Op_h(a)) with the integral of a over the
//! rescaled fiber hO_{π,σ}.

use crate::fit::loglog_slope;
use crate::ggp::{orbital_integral, GgpPair};
use crate::linalg::{fro, CMat};
use crate::liecore::FiniteRep;
use crate::quadrature::periodic;
use crate::quantize::QuantizationContext;
use crate::symbols::Symbol;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// A spin representation of SU(2) restricted to the torus generated by X₃.
#[derive(Debug, Clone)]
pub struct CompactBranching {
    pub pair: GgpPair,
    pub rep: FiniteRep,
    /// Characters of Ĥ occurring in π, in basis order.
    pub characters: Vec<f64>,
    pub haar_mass: f64,
}

impl CompactBranching {
    pub fn new(rep: FiniteRep) -> Result<Self> {
        let wb = rep
            .weight_basis
            .clone()
            .ok_or_else(|| Error::Precondition("representation has no weight basis".into()))?;
        if rep.algebra.dim() != 3 || wb.torus != 2 {
            return Err(Error::Unsupported("branching needs an su(2)/so(3) rep graded by X₃".into()));
        }
        Ok(CompactBranching { pair: GgpPair::orthogonal(3)?, rep, characters: wb.weights, haar_mass: 1.0 })
    }

    pub fn spin(j: f64) -> Result<Self> {
        Self::new(FiniteRep::su2_spin(j)?)
    }

    pub fn j(&self) -> f64 {
        self.rep.spin.unwrap_or_else(|| 0.5 * (self.rep.dim() as f64 - 1.0))
    }

    /// max(‖Σ P_n − I‖, max ‖P_n P_m − δ P_n‖).
    pub fn projector_residual(&self) -> Result<f64> {
        let d = self.rep.dim();
        let ps: Vec<CMat> = self.distinct().iter().map(|&n| self.rep.weight_projector(n)).collect::<Result<_>>()?;
        let mut sum = CMat::zeros(d, d);
        let mut worst: f64 = 0.0;
        for (a, pa) in ps.iter().enumerate() {
            sum += pa;
            for (b, pb) in ps.iter().enumerate() {
                let want = if a == b { pa.clone() } else { CMat::zeros(d, d) };
                worst = worst.max(fro(&(pa * pb - want)));
            }
        }
        Ok(worst.max(fro(&(sum - CMat::identity(d, d)))))
    }

    fn distinct(&self) -> Vec<f64> {
        let mut out: Vec<f64> = vec![];
        for &w in &self.characters {
            if !out.iter().any(|&u| (u - w).abs() < 1e-9) {
                out.push(w);
            }
        }
        out
    }
}

/// haar_mass · ∫ tr(π(θ)T) e^{−inθ} dθ over the torus, as an exact trapezoid sum.
pub fn hermitian_form(br: &CompactBranching, t: &CMat, n: f64) -> Result<C64> {
    let d = br.rep.dim();
    crate::error::check_dim(d, t.nrows())?;
    // half-integral weights live on the double cover: integrate θ over [0, 4π)
    let top = br.characters.iter().map(|w| (w - n).abs()).fold(0.0, f64::max);
    let m = 4 * (top.ceil() as usize + 1);
    let rule = periodic(m);
    let mut acc = C64::new(0.0, 0.0);
    for (phi, w) in rule.iter() {
        let theta = 2.0 * phi;
        let mut tr = C64::new(0.0, 0.0);
        for k in 0..d {
            tr += C64::from_polar(1.0, br.characters[k] * theta) * t[(k, k)];
        }
        acc += tr * C64::from_polar(1.0, -n * theta) * (w / (2.0 * PI));
    }
    Ok(acc * br.haar_mass)
}

/// haar_mass · tr(P_n T).
pub fn weight_trace(br: &CompactBranching, t: &CMat, n: f64) -> Result<C64> {
    Ok((br.rep.weight_projector(n)? * t).trace() * br.haar_mass)
}

/// |tr T − Σ_n H_n(T)|.
pub fn plancherel_check(br: &CompactBranching, t: &CMat) -> Result<f64> {
    let mut s = C64::new(0.0, 0.0);
    for n in br.distinct() {
        s += hermitian_form(br, t, n)?;
    }
    Ok((t.trace() - s).norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelcharResidual {
    pub lhs: C64,
    pub rhs: C64,
    pub diff: f64,
}

/// Radius of the rescaled orbit hO_π and the height of the fiber of character n.
pub fn fiber_circle(br: &CompactBranching, h: f64, n: f64) -> (f64, f64) {
    (h * (br.j() + 0.5), h * n)
}

/// Refuse symbols whose Gaussian terms come within 3.5 widths of the poles of the rescaled sphere.
fn check_support(a: &Symbol, radius: f64) -> Result<()> {
    let terms = a
        .terms()
        .ok_or_else(|| Error::Precondition("symbol must be a Gaussian family with localized support".into()))?;
    for t in terms {
        let w = t.widths.iter().cloned().fold(0.0, f64::max);
        for pole in [radius, -radius] {
            let d = (t.center[0].powi(2) + t.center[1].powi(2) + (t.center[2] - pole).powi(2)).sqrt();
            if d < 3.5 * w {
                return Err(Error::Precondition(format!(
                    "symbol support reaches the unstable locus (distance {d:.3} to a pole, width {w:.3})"
                )));
            }
        }
    }
    Ok(())
}

fn orbital_rhs(br: &CompactBranching, a: &Symbol, h: f64, n: f64) -> Result<C64> {
    let (r, z) = fiber_circle(br, h, n);
    // the circle average is the pushforward of unit Haar, so rescale by haar_mass
    Ok(orbital_integral(&br.pair, r, z, a)? * br.haar_mass)
}

/// H_n(Op_h(a)) against the average of a over the circle at height hn on the sphere of
/// radius h(j + ½).
pub fn relchar_residual(br: &CompactBranching, a: &Symbol, h: f64, n: f64) -> Result<RelcharResidual> {
    let (r, _) = fiber_circle(br, h, n);
    check_support(a, r)?;
    let ctx = QuantizationContext::new(&br.rep, h)?;
    let diag = ctx.diagonal(a)?;
    // H_n(T) = tr(P_n T) only sees the diagonal in the weight basis
    let mut lhs = C64::new(0.0, 0.0);
    for (k, &w) in br.characters.iter().enumerate() {
        if (w - n).abs() < 1e-9 {
            lhs += diag[k];
        }
    }
    lhs *= br.haar_mass;
    let rhs = orbital_rhs(br, a, h, n)?;
    Ok(RelcharResidual { lhs, rhs, diff: (lhs - rhs).norm() })
}

/// H_n(Op_h(a₁)⋯Op_h(a_k)) against the circle average of a₁⋯a_k.
pub fn relchar_multi_residual(br: &CompactBranching, symbols: &[Symbol], h: f64, n: f64) -> Result<RelcharResidual> {
    let first = symbols.first().ok_or_else(|| Error::InvalidParam("need at least one symbol".into()))?;
    if symbols.len() == 1 {
        return relchar_residual(br, first, h, n);
    }
    let (r, _) = fiber_circle(br, h, n);
    let ctx = QuantizationContext::new(&br.rep, h)?;
    let d = br.rep.dim();
    let mut t = CMat::identity(d, d);
    let mut prod: Option<Symbol> = None;
    for a in symbols {
        if a.terms().is_some() {
            check_support(a, r)?;
        }
        t = t * ctx.opp(a)?;
        prod = Some(match prod {
            None => a.clone(),
            Some(p) => p.mul(a)?,
        });
    }
    let lhs = hermitian_form(br, &t, n)?;
    let rhs = orbital_rhs(br, prod.as_ref().unwrap(), h, n)?;
    Ok(RelcharResidual { lhs, rhs, diff: (lhs - rhs).norm() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelcharRow {
    pub j: f64,
    pub n: f64,
    pub h: f64,
    pub residual: RelcharResidual,
}

/// h = 1/(j + ½) and character n = n_of(j) for each j; returns the rows and the fitted log-log
/// slope of diff against h.
pub fn relchar_sweep(a: &[Symbol], js: &[f64], n_of: &dyn Fn(f64) -> f64) -> Result<(Vec<RelcharRow>, Option<f64>)> {
    if js.is_empty() {
        return Err(Error::InvalidParam("empty j list".into()));
    }
    let mut rows = vec![];
    for &j in js {
        let br = CompactBranching::spin(j)?;
        let h = 1.0 / (j + 0.5);
        let n = n_of(j);
        let residual = relchar_multi_residual(&br, a, h, n)?;
        rows.push(RelcharRow { j, n, h, residual });
    }
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.residual.diff).collect();
    Ok((rows, loglog_slope(&hs, &ds)))
}
