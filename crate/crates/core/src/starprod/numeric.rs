//! The exact star product a ⋆_h b by quadrature, and the expansion study.
//!
//! (a ⋆_h b)(ζ) = ∫∫ a^∨(x) b^∨(y) χ(hx) χ(hy) e^{i ((hx)∗(hy))·ζ / h} dx dy.
//! a^∨ and b^∨ are Gaussian-polynomial transforms, so each factor is discretized by a
//! tensor Gauss-Hermite rule in its own scaled variable.

use super::{star_coefficients, star_j};
use crate::fit::loglog_slope;
use crate::liecore::{quat_exp, quat_log, quat_mul, Cutoff, GroupLaw, LieAlgebra};
use crate::quadrature::hermite_prob;
use crate::symbols::{FourierInverse, Kind, Symbol};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy)]
pub struct StarNumericOptions {
    /// Gauss-Hermite points per axis.
    pub nodes: usize,
    /// Extra points per axis for the refinement check.
    pub refine_by: usize,
    /// Node weights below this fraction of the largest are dropped.
    pub prune: f64,
    pub tolerance: f64,
}

impl Default for StarNumericOptions {
    fn default() -> Self {
        StarNumericOptions { nodes: 16, refine_by: 4, prune: 1e-13, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct StarNumeric {
    /// Grid-sampled a ⋆_h b on the requested tensor axes.
    pub symbol: Symbol,
    pub refinement_delta: f64,
    pub converged: bool,
}

fn nodes_of(s: &Symbol, n: usize, drop_rel: f64) -> Result<Vec<(Vec<f64>, C64)>> {
    if !matches!(s.kind, Kind::Gaussian(_)) {
        return Err(Error::Unsupported("star_numeric needs Gaussian-polynomial symbols".into()));
    }
    let FourierInverse::Gaussian(terms) = s.fourier_inverse()? else { unreachable!() };
    let rule = hermite_prob(n);
    let mut all: Vec<(Vec<f64>, C64)> = terms.iter().flat_map(|t| t.hermite_nodes(&rule, 0.0)).collect();
    let big = all.iter().map(|p| p.1.norm()).fold(0.0, f64::max);
    all.retain(|p| p.1.norm() > drop_rel * big);
    Ok(all)
}

fn tensor_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![]];
    for ax in axes {
        pts = pts.into_iter().flat_map(|p| ax.iter().map(move |&v| { let mut q = p.clone(); q.push(v); q })).collect();
    }
    pts
}

fn evaluate(g: &LieAlgebra, a: &Symbol, b: &Symbol, h: f64, chi: &Cutoff, axes: &[Vec<f64>], nodes: usize, prune: f64) -> Result<Vec<C64>> {
    let na = nodes_of(a, nodes, prune)?;
    let nb = nodes_of(b, nodes, prune)?;
    let n = g.dim();
    let total: usize = axes.iter().map(|a| a.len()).product();
    let mut out = vec![C64::new(0.0, 0.0); total];
    let hx_of = |x: &[f64]| x.iter().map(|v| h * v).collect::<Vec<f64>>();
    let nb: Vec<(Vec<f64>, C64)> = nb
        .into_iter()
        .filter_map(|(y, w)| {
            let c = chi.eval(&hx_of(&y));
            (c > 0.0).then(|| (hx_of(&y), w * c))
        })
        .collect();
    // e^{i z·ζ/h} factorizes over the tensor axes
    let mut cis: Vec<Vec<C64>> = axes.iter().map(|a| vec![C64::new(0.0, 0.0); a.len()]).collect();
    let mut acc = vec![C64::new(0.0, 0.0); total];
    let quat = g.law == GroupLaw::Quaternion;
    let qb: Vec<[f64; 4]> = if quat { nb.iter().map(|p| quat_exp(&p.0)).collect() } else { vec![] };
    let mut z = vec![0.0; n];
    for (x, wa) in &na {
        let hx = hx_of(x);
        let ca = chi.eval(&hx);
        if ca == 0.0 {
            continue;
        }
        let wa = wa * ca;
        let qa = if quat { quat_exp(&hx) } else { [0.0; 4] };
        for (ib, (hy, wb)) in nb.iter().enumerate() {
            if quat {
                z.copy_from_slice(&quat_log(quat_mul(qa, qb[ib])));
            } else {
                z = g.compose(&hx, hy)?;
            }
            for k in 0..n {
                for (c, &v) in cis[k].iter_mut().zip(&axes[k]) {
                    *c = C64::from_polar(1.0, z[k] * v / h);
                }
            }
            acc[0] = wa * wb;
            let mut len = 1;
            for ck in &cis {
                // expand the partial products by one axis, last axis fastest
                for i in (0..len).rev() {
                    let base = acc[i];
                    for (j, c) in ck.iter().enumerate() {
                        acc[i * ck.len() + j] = base * c;
                    }
                }
                len *= ck.len();
            }
            for (o, v) in out.iter_mut().zip(&acc) {
                *o += v;
            }
        }
    }
    Ok(out)
}

/// a ⋆_h b sampled on the tensor grid `axes`, with a refinement check at nodes + refine_by.
pub fn star_numeric(
    g: &LieAlgebra,
    a: &Symbol,
    b: &Symbol,
    h: f64,
    chi: &Cutoff,
    axes: &[Vec<f64>],
    opts: &StarNumericOptions,
) -> Result<StarNumeric> {
    crate::error::check_dim(g.dim(), a.dim())?;
    crate::error::check_dim(g.dim(), b.dim())?;
    crate::error::check_dim(g.dim(), axes.len())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParam(format!("h must be positive, got {h}")));
    }
    let v = evaluate(g, a, b, h, chi, axes, opts.nodes, opts.prune)?;
    let mut delta = 0.0;
    if opts.refine_by > 0 {
        let v2 = evaluate(g, a, b, h, chi, axes, opts.nodes + opts.refine_by, opts.prune)?;
        delta = v.iter().zip(&v2).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    }
    Ok(StarNumeric {
        symbol: Symbol::grid(axes.to_vec(), v)?,
        refinement_delta: delta,
        converged: delta <= opts.tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionRow {
    pub h: f64,
    pub residual: f64,
    pub fitted_order_so_far: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExpansionTable {
    pub rows: Vec<ExpansionRow>,
    /// Least-squares slope of log residual against log h; `None` when degenerate.
    pub order: Option<f64>,
}

/// Residuals below this are treated as the cutoff-tail floor.
pub const RESIDUAL_FLOOR: f64 = 1e-10;

/// Evaluation grid for the residual: 3 points per axis at 0, ±0.8 widths around the
/// centre of the leading product term.
pub fn residual_axes(a: &Symbol, b: &Symbol) -> Result<Vec<Vec<f64>>> {
    let p = a.mul(b)?;
    let t = p.terms().and_then(|t| t.first()).ok_or_else(|| Error::Unsupported("residual grid needs Gaussian symbols".into()))?;
    Ok(t.center.iter().zip(&t.widths).map(|(&c, &w)| vec![c - 0.8 * w, c, c + 0.8 * w]).collect())
}

/// sup over the residual grid of |a ⋆_h b − Σ_{j<J} hʲ a⋆ʲb| for each h.
pub fn expansion_residual(
    g: &LieAlgebra,
    a: &Symbol,
    b: &Symbol,
    h_list: &[f64],
    order: usize,
    opts: &StarNumericOptions,
) -> Result<ExpansionTable> {
    if order == 0 || order > super::MAX_STAR_ORDER {
        return Err(Error::InvalidParam(format!("expansion order must be in 1..={}", super::MAX_STAR_ORDER)));
    }
    let coeffs = star_coefficients(g, order - 1)?;
    let terms: Vec<Symbol> = (0..order).map(|j| star_j(&coeffs, a, b, j)).collect::<Result<_>>()?;
    let axes = residual_axes(a, b)?;
    let pts = tensor_points(&axes);
    let chi = Cutoff::primary(g);
    let mut rows = vec![];
    let mut hs = vec![];
    let mut rs = vec![];
    for &h in h_list {
        let s = star_numeric(g, a, b, h, &chi, &axes, opts)?;
        if !s.converged {
            return Err(Error::Numerical(format!("star quadrature not converged at h = {h}: Δ = {:.3e}", s.refinement_delta)));
        }
        let mut worst: f64 = 0.0;
        for p in &pts {
            let mut approx = C64::new(0.0, 0.0);
            for (j, t) in terms.iter().enumerate() {
                approx += t.eval(p) * h.powi(j as i32);
            }
            worst = worst.max((s.symbol.eval(p) - approx).norm());
        }
        hs.push(h);
        rs.push(worst);
        let fitted = if rs.iter().all(|&r| r > RESIDUAL_FLOOR) { loglog_slope(&hs, &rs) } else { None };
        rows.push(ExpansionRow { h, residual: worst, fitted_order_so_far: fitted });
    }
    let order = rows.last().and_then(|r| r.fitted_order_so_far);
    Ok(ExpansionTable { rows, order })
}
