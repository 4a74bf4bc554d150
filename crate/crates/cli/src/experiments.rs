//! One runner per experiment kind.

use crate::config::{ConfigError, ExperimentConfig, SymbolDecl};
use crate::report::{CriterionResult, RunReport, Threshold};
use orbitlab::fit::loglog_slope;
use orbitlab::ggp::{
    cyclic_criterion, disintegration_calibration, disintegration_residual, hm_witness, is_stable, is_stable_pair,
    regular_test, restrict_h, satake_view, so3_invariants, torsor_check, Family, GgpPair,
};
use orbitlab::linalg::{fro, op_norm, CMat};
use orbitlab::liecore::{FiniteRep, LieAlgebra};
use orbitlab::orbits::{nilcone_rescaling, orbit_integral, strips, OrbitChart};
use orbitlab::quantize::{band_family, QuantizationContext};
use orbitlab::relchar::{plancherel_check, relchar_residual, relchar_sweep, CompactBranching};
use orbitlab::starprod::{expansion_residual, StarNumericOptions};
use orbitlab::symbols::{Kind, Symbol};
use orbitlab::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Core(orbitlab::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error at {e}"),
            RunError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<orbitlab::Error> for RunError {
    fn from(e: orbitlab::Error) -> Self {
        RunError::Core(e)
    }
}

type Res<T> = Result<T, RunError>;

fn cfg_err(path: &str, msg: &str) -> RunError {
    RunError::Config(ConfigError { path: path.into(), message: msg.into() })
}

fn gaussian(d: &SymbolDecl) -> Res<Symbol> {
    Ok(Symbol::gaussian(&d.center, d.width)?)
}

fn symbols(cfg: &ExperimentConfig, at_least: usize) -> Res<Vec<Symbol>> {
    if cfg.symbols.len() < at_least {
        return Err(cfg_err("symbols", &format!("need at least {at_least} symbol declarations")));
    }
    cfg.symbols.iter().map(gaussian).collect()
}

fn random_gaussian(rng: &mut ChaCha8Rng, radius: f64, widths: (f64, f64)) -> Symbol {
    let c: Vec<f64> = (0..3).map(|_| rng.random_range(-radius..radius)).collect();
    Symbol::gaussian(&c, rng.random_range(widths.0..widths.1)).expect("valid gaussian")
}

fn slope_or_nan(x: &[f64], y: &[f64]) -> f64 {
    loglog_slope(x, y).unwrap_or(f64::NAN)
}

pub fn kirillov(cfg: &ExperimentConfig, rep: &mut RunReport) -> Res<()> {
    let su2 = LieAlgebra::su2();
    match cfg.mode_or("trace_order") {
        "dimension" => {
            let js = cfg.j_list.clone().unwrap_or_else(|| (1..=20).map(|j| j as f64).collect());
            let tol = cfg.threshold.unwrap_or(1e-6);
            let one = Symbol::constant(3, C64::new(1.0, 0.0));
            let mut worst: f64 = 0.0;
            for j in js {
                let chart = OrbitChart::sphere_default(&su2, j + 0.5)?;
                let v = orbit_integral(&chart, &one)?.value;
                let e = (v - C64::new(2.0 * j + 1.0, 0.0)).norm();
                rep.row(format!("j={j}"), "mass_error", e, Some(tol));
                worst = worst.max(e);
            }
            rep.criteria.push(CriterionResult::new("1", worst, Threshold::AtMost(tol)));
        }
        "trace_order" => {
            let js = cfg.require("j_list", &cfg.j_list)?;
            let a = symbols(cfg, 1)?.remove(0);
            let range = cfg.range.unwrap_or([0.7, 1.3]);
            let (mut hs, mut ds) = (vec![], vec![]);
            for j in js {
                let h = 1.0 / (j + 0.5);
                let r = FiniteRep::su2_spin(j)?;
                let ctx = QuantizationContext::new(&r, h)?;
                let chart = OrbitChart::sphere_default(&su2, h * (j + 0.5))?;
                let k = ctx.kirillov_residual(&a, &chart)?;
                let cell = format!("j={j}");
                rep.row(cell.clone(), "lhs", k.lhs.re, None);
                rep.row(cell.clone(), "rhs", k.rhs.re, None);
                rep.row(cell, "diff", k.diff, None);
                hs.push(h);
                ds.push(k.diff);
            }
            let s = slope_or_nan(&hs, &ds);
            rep.row("fit", "order", s, None);
            rep.criteria.push(CriterionResult::new("2", s, Threshold::Within(range)));
        }
        m => return Err(cfg_err("mode", &format!("unknown kirillov mode {m:?}"))),
    }
    Ok(())
}

pub fn star(cfg: &ExperimentConfig, rep: &mut RunReport) -> Res<()> {
    let algebras = if cfg.algebras.is_empty() { vec!["su2".to_string(), "heisenberg".to_string()] } else { cfg.algebras.clone() };
    let orders = cfg.orders.clone().unwrap_or_else(|| vec![1, 2]);
    let tols = cfg.tolerances.clone().unwrap_or_else(|| vec![0.2, 0.3]);
    if tols.len() != orders.len() {
        return Err(cfg_err("tolerances", "needs one entry per order"));
    }
    let hs = cfg.h_list.clone().unwrap_or_else(|| vec![0.25, 0.125, 0.0625]);
    let syms = symbols(cfg, 2)?;
    for name in &algebras {
        let g = LieAlgebra::by_name(name)?;
        for (&order, &tol) in orders.iter().zip(&tols) {
            let id = format!("6.{name}.J{order}");
            let j = order as f64;
            match expansion_residual(&g, &syms[0], &syms[1], &hs, order, &StarNumericOptions::default()) {
                Ok(t) => {
                    for r in &t.rows {
                        rep.row(format!("{name}.J{order}.h={}", r.h), "residual", r.residual, None);
                    }
                    let o = t.order.unwrap_or(f64::NAN);
                    rep.row(format!("{name}.J{order}"), "order", o, Some(tol));
                    rep.criteria.push(CriterionResult::new(id, o, Threshold::Within([j - tol, j + tol])));
                }
                Err(e) => {
                    rep.failures.push(format!("{id}: {e}"));
                    rep.criteria.push(CriterionResult::new(id, f64::NAN, Threshold::Within([j - tol, j + tol])));
                }
            }
        }
    }
    Ok(())
}

pub fn compose(cfg: &ExperimentConfig, rep: &mut RunReport, seed: u64) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cfg.mode_or("composition") {
        "composition" => {
            let j = cfg.spin.unwrap_or(5.0);
            let h = cfg.h.unwrap_or(1.0 / (j + 0.5));
            let tol = cfg.threshold.unwrap_or(1e-6);
            let r = FiniteRep::su2_spin(j)?;
            let ctx = QuantizationContext::new(&r, h)?;
            let syms = if cfg.symbols.is_empty() {
                (0..2 * cfg.samples.unwrap_or(5)).map(|_| random_gaussian(&mut rng, 0.8, (0.9, 1.3))).collect()
            } else {
                symbols(cfg, 2)?
            };
            let mut worst: f64 = 0.0;
            for (k, pair) in syms.chunks(2).enumerate() {
                if pair.len() < 2 {
                    break;
                }
                match ctx.compose_residual(&pair[0], &pair[1], cfg.inner_nodes.unwrap_or(6)) {
                    Ok(c) => {
                        rep.row(format!("pair{k}"), "residual", c.residual, Some(tol));
                        rep.row(format!("pair{k}"), "scale", c.scale, None);
                        worst = worst.max(c.residual);
                    }
                    Err(e) => {
                        rep.failures.push(format!("pair{k}: {e}"));
                        worst = f64::NAN;
                    }
                }
            }
            rep.criteria.push(CriterionResult::new("3", worst, Threshold::AtMost(tol)));
        }
        "adjoint" => {
            let j = cfg.spin.unwrap_or(5.0);
            let h = cfg.h.unwrap_or(1.0 / (j + 0.5));
            let tol = cfg.threshold.unwrap_or(1e-8);
            let r = FiniteRep::su2_spin(j)?;
            let ctx = QuantizationContext::new(&r, h)?;
            let mut worst: f64 = 0.0;
            for k in 0..cfg.samples.unwrap_or(20) {
                let phase = C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU));
                let a = random_gaussian(&mut rng, 1.0, (0.4, 1.2)).scale(phase);
                let e = ctx.adjoint_residual(&a)?;
                rep.row(format!("symbol{k}"), "adjoint_residual", e, Some(tol));
                worst = worst.max(e);
            }
            rep.criteria.push(CriterionResult::new("4", worst, Threshold::AtMost(tol)));
        }
        "polynomial" => {
            let j = cfg.spin.unwrap_or(2.0);
            let h = cfg.h.unwrap_or(1.0 / 16.0);
            let tol = cfg.threshold.unwrap_or(1e-3);
            let r = FiniteRep::su2_spin(j)?;
            let delta = r.delta();
            let japanese = Symbol::japanese_sq(3);
            let ctx = QuantizationContext::new(&r, 1.0)?;
            let reg = japanese.regularize(8.0 / h)?;
            let rel = op_norm(&(ctx.opp(&reg)? - &delta)) / op_norm(&delta);
            let exact = match &japanese.kind {
                Kind::Polynomial(_) => fro(&(ctx.opp(&japanese)? - &delta)),
                _ => f64::NAN,
            };
            rep.row("regularized", "relative_error", rel, Some(tol));
            rep.row("exact", "error", exact, Some(1e-12));
            rep.criteria.push(CriterionResult::new("5.regularized", rel, Threshold::AtMost(tol)));
            rep.criteria.push(CriterionResult::new("5.exact", exact, Threshold::AtMost(1e-12)));
        }
        m => return Err(cfg_err("mode", &format!("unknown compose mode {m:?}"))),
    }
    Ok(())
}

fn x_hash(x: &CMat) -> String {
    let mut h = DefaultHasher::new();
    for z in x.iter() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    format!("{:016x}", h.finish())
}

pub fn stability(cfg: &ExperimentConfig, rep: &mut RunReport, seed: u64) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cfg.mode_or("agreement") {
        "agreement" => {
            let per = cfg.samples.unwrap_or(1000);
            let (mut agree, mut judged) = (0usize, 0usize);
            for fam in Family::ALL {
                let pair = fam.pair();
                let hp = pair.h_pair().ok();
                let (mut fa, mut fj, mut border, mut irregular) = (0usize, 0usize, 0usize, 0usize);
                for k in 0..per {
                    let x = fam.sample(&mut rng, k % 2 == 1);
                    let s = is_stable(&pair, &x)?;
                    let cy = cyclic_criterion(&pair, &x)?;
                    let w = hm_witness(&pair, &x)?;
                    let excluded = s.borderline || cy.ambiguous;
                    let witness_ok = w.as_ref().map(|w| w.filtration_residual <= 1e-8).unwrap_or(true);
                    let ok = s.stable == cy.stable && s.stable == w.is_none() && witness_ok;
                    if s.stable {
                        let mut reg = regular_test(&pair, &x)?.regular;
                        if let Some(hp) = &hp {
                            reg &= regular_test(hp, &restrict_h(&pair, &x)?)?.regular;
                        }
                        irregular += usize::from(!reg);
                    }
                    rep.records.push(serde_json::json!({
                        "case": fam.name(),
                        "n": pair.n,
                        "x_hash": x_hash(&x),
                        "verdicts": [s.stable, w.is_none(), cy.stable],
                        "margin": s.min_gap,
                        "borderline": excluded,
                    }));
                    if excluded {
                        border += 1;
                        continue;
                    }
                    fj += 1;
                    fa += usize::from(ok);
                }
                rep.row(fam.name(), "agreement", fa as f64 / fj.max(1) as f64, Some(0.0));
                rep.row(fam.name(), "judged", fj as f64, None);
                rep.row(fam.name(), "borderline", border as f64, None);
                rep.row(fam.name(), "stable_but_irregular", irregular as f64, Some(0.0));
                agree += fa;
                judged += fj;
                if irregular > 0 {
                    rep.failures.push(format!("{}: {irregular} stable samples failed the regularity test", fam.name()));
                }
            }
            let frac = agree as f64 / judged.max(1) as f64;
            rep.criteria.push(CriterionResult::new("9", frac, Threshold::AtLeast(1.0)));
        }
        "satake" => {
            let n = cfg.samples.unwrap_or(1000);
            let mut agree = 0;
            for k in 0..n {
                let l: Vec<C64> = (0..3).map(|_| C64::new(rng.random_range(-3..4) as f64, 0.0)).collect();
                let mut m: Vec<C64> = (0..2).map(|_| C64::new(rng.random_range(-3..4) as f64 + 0.5, 0.0)).collect();
                if k % 2 == 0 {
                    m[0] = l[rng.random_range(0..3)];
                }
                let unitary = k % 3 == 0;
                let (l, m) = if unitary {
                    (l.iter().map(|z| z * C64::new(0.0, 1.0)).collect::<Vec<_>>(), m.iter().map(|z| z * C64::new(0.0, 1.0)).collect())
                } else {
                    (l, m)
                };
                agree += usize::from(satake_view(&l, &m, unitary).stable == is_stable_pair(&l, &m).stable);
            }
            let frac = agree as f64 / n as f64;
            rep.row("satake", "agreement", frac, Some(0.0));
            rep.criteria.push(CriterionResult::new("12", frac, Threshold::AtLeast(1.0)));
        }
        m => return Err(cfg_err("mode", &format!("unknown stability mode {m:?}"))),
    }
    Ok(())
}

pub fn torsor(cfg: &ExperimentConfig, rep: &mut RunReport, seed: u64) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let so3 = GgpPair::orthogonal(3)?;
    let gl3 = GgpPair::linear(3)?;
    let (mut res, mut disp): (f64, f64) = (0.0, 0.0);
    let mut note = |rep: &mut RunReport, cell: String, r: Result<orbitlab::ggp::TorsorReport, orbitlab::Error>| match r {
        Ok(t) => {
            rep.row(cell.clone(), "transport_residual", t.transport_residual, Some(1e-8));
            rep.row(cell, "dispersion", t.dispersion, Some(1e-6));
            res = res.max(t.transport_residual);
            disp = disp.max(t.dispersion);
        }
        Err(e) => {
            rep.failures.push(format!("{cell}: {e}"));
            res = f64::NAN;
        }
    };
    for k in 0..cfg.samples.unwrap_or(50) {
        let r: f64 = rng.random_range(0.5..2.0);
        let z = r * rng.random_range(-0.9..0.9);
        let (l, m) = so3_invariants(r, z);
        let out = torsor_check(&so3, &l, &m, 4, &mut rng);
        note(rep, format!("so3.{k}"), out);
    }
    let mut k = 0;
    while k < cfg.secondary_samples.unwrap_or(10) {
        let l: Vec<C64> = (0..3).map(|_| C64::new(rng.random_range(-2.0..2.0), 0.0)).collect();
        let m: Vec<C64> = (0..2).map(|_| C64::new(rng.random_range(-2.0..2.0), 0.0)).collect();
        let sep = is_stable_pair(&l, &m).min_gap.min((m[0] - m[1]).norm());
        if sep < 0.05 {
            continue;
        }
        let out = torsor_check(&gl3, &l, &m, 4, &mut rng);
        note(rep, format!("gl3.{k}"), out);
        k += 1;
    }
    rep.criteria.push(CriterionResult::new("10.transport", res, Threshold::AtMost(1e-8)));
    rep.criteria.push(CriterionResult::new("10.uniqueness", disp, Threshold::AtMost(1e-6)));
    Ok(())
}

pub fn disintegrate(cfg: &ExperimentConfig, rep: &mut RunReport, seed: u64) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = GgpPair::orthogonal(3)?;
    let r = cfg.radius.unwrap_or(1.2);
    let tol = cfg.threshold.unwrap_or(1e-6);
    let kappa = disintegration_calibration(&pair, r)?;
    rep.row("calibration", "kappa", kappa, None);
    let mut table = vec![];
    let mut worst: f64 = 0.0;
    let mut ratios = vec![];
    for k in 0..cfg.samples.unwrap_or(10) {
        let a = random_gaussian(&mut rng, 1.0, (0.4, 0.9));
        let d = disintegration_residual(&pair, r, &a, kappa)?;
        let ratio = d.lhs.re / d.rhs_raw.re;
        table.push(vec![format!("g{k}"), format!("{:e}", d.lhs.re), format!("{:e}", d.rhs_raw.re * kappa), format!("{ratio:e}")]);
        rep.row(format!("g{k}"), "residual", d.residual, Some(tol));
        worst = worst.max(d.residual);
        ratios.push(ratio);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let sd = (ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / ratios.len() as f64).sqrt();
    rep.row("ratios", "std_dev", sd, Some(tol));
    rep.tables.push((
        "disintegration.csv".into(),
        vec!["symbol_id".into(), "lhs".into(), "rhs".into(), "ratio".into()],
        table,
    ));
    rep.criteria.push(CriterionResult::new("11.residual", worst, Threshold::AtMost(tol)));
    rep.criteria.push(CriterionResult::new("11.dispersion", sd, Threshold::AtMost(tol)));
    Ok(())
}

pub fn relchar(cfg: &ExperimentConfig, rep: &mut RunReport, seed: u64) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cfg.mode_or("order") {
        "order" => {
            let js = cfg.require("j_list", &cfg.j_list)?;
            let n = cfg.n_list.as_ref().map(|l| l[0]).unwrap_or(3.0);
            let syms = symbols(cfg, 1)?;
            let range = cfg.range.unwrap_or([0.7, 1.3]);
            for &j in &js {
                if n.abs() / (j + 0.5) > 0.6 {
                    return Err(cfg_err("n_list", &format!("|n/(j+½)| must be ≤ 0.6 (j = {j})")));
                }
            }
            let (rows, slope) = relchar_sweep(&syms, &js, &|_| n)?;
            for r in &rows {
                let cell = format!("j={}.n={}", r.j, r.n);
                rep.row(cell.clone(), "lhs", r.residual.lhs.re, None);
                rep.row(cell.clone(), "rhs", r.residual.rhs.re, None);
                rep.row(cell, "diff", r.residual.diff, None);
            }
            let s = slope.unwrap_or(f64::NAN);
            rep.row("fit", "order", s, None);
            rep.criteria.push(CriterionResult::new("8.order", s, Threshold::Within(range)));
            // characters outside the weight range have empty fibers
            let mut worst: f64 = 0.0;
            for &j in &js {
                let br = CompactBranching::spin(j)?;
                let r = relchar_residual(&br, &syms[0], 1.0 / (j + 0.5), j + 1.0)?;
                rep.row(format!("j={j}.n={}", j + 1.0), "empty_lhs", r.lhs.norm(), Some(1e-8));
                worst = worst.max(r.lhs.norm()).max(r.rhs.norm());
            }
            rep.criteria.push(CriterionResult::new("8.empty", worst, Threshold::AtMost(1e-8)));
        }
        "plancherel" => {
            let j = cfg.spin.unwrap_or(5.0);
            let h = cfg.h.unwrap_or(1.0 / (j + 0.5));
            let tol = cfg.threshold.unwrap_or(1e-10);
            let br = CompactBranching::spin(j)?;
            let ctx = QuantizationContext::new(&br.rep, h)?;
            let d = br.rep.dim();
            let mut worst: f64 = 0.0;
            for k in 0..cfg.samples.unwrap_or(50) {
                let t = if k % 2 == 0 {
                    ctx.opp(&random_gaussian(&mut rng, 1.0, (0.4, 1.2)))?
                } else {
                    CMat::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                };
                let e = plancherel_check(&br, &t)?;
                rep.row(format!("T{k}"), "plancherel_residual", e, Some(tol));
                worst = worst.max(e);
            }
            rep.criteria.push(CriterionResult::new("7", worst, Threshold::AtMost(tol)));
        }
        m => return Err(cfg_err("mode", &format!("unknown relchar mode {m:?}"))),
    }
    Ok(())
}

pub fn nilcone(cfg: &ExperimentConfig, rep: &mut RunReport) -> Res<()> {
    let j = cfg.spin.unwrap_or(5.0);
    let su2 = LieAlgebra::su2();
    let st = strips(&su2, j + 0.5)?;
    let tol = cfg.threshold.unwrap_or(1e-6);
    let mut worst: f64 = 0.0;
    let mut strip_rows = vec![];
    for (k, s) in st.iter().enumerate() {
        rep.row(format!("strip{k:02}"), "mass", s.mass, Some(tol));
        worst = worst.max((s.mass - 1.0).abs());
        strip_rows.push(vec![k.to_string(), format!("{:e}", s.z_lo), format!("{:e}", s.z_hi), format!("{:e}", s.mass)]);
    }
    rep.row("strips", "count", st.len() as f64, None);
    rep.criteria.push(CriterionResult::new("13.strips", worst, Threshold::AtMost(tol)));
    let hs = cfg.h_list.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25, 0.125]);
    let frames = nilcone_rescaling(1.0, &hs, 2.0, 41)?;
    let mut increases = 0;
    for (k, f) in frames.iter().enumerate() {
        rep.row(format!("h={}", f.h), "hausdorff", f.hausdorff, None);
        if k > 0 && f.hausdorff >= frames[k - 1].hausdorff {
            increases += 1;
        }
    }
    rep.criteria.push(CriterionResult::new("13.nilcone", increases as f64, Threshold::AtMost(0.0)));
    // figure data: strips, slice circles on the sphere and on a hyperboloid, nilcone frames
    rep.figures.push(("strips.csv".into(), vec!["k".into(), "z_lo".into(), "z_hi".into(), "mass".into()], strip_rows));
    let r = j + 0.5;
    let mut fib = vec![];
    for i in 0..=10 {
        let z = -r + 2.0 * r * i as f64 / 10.0;
        for (surface, rho) in [("sphere", (r * r - z * z).max(0.0).sqrt()), ("hyperboloid", (1.0 + z * z).sqrt())] {
            for k in 0..48 {
                let p = 2.0 * std::f64::consts::PI * k as f64 / 48.0;
                fib.push(vec![surface.into(), format!("{z:e}"), format!("{:e}", rho * p.cos()), format!("{:e}", rho * p.sin())]);
            }
        }
    }
    rep.figures.push(("fibers.csv".into(), vec!["surface".into(), "z".into(), "x".into(), "y".into()], fib));
    let mut pts = vec![];
    for f in &frames {
        for p in &f.points {
            pts.push(vec![format!("{}", f.h), format!("{:e}", p[0]), format!("{:e}", p[1]), format!("{:e}", p[2])]);
        }
    }
    rep.figures.push(("nilcone_frames.csv".into(), vec!["h".into(), "x".into(), "y".into(), "z".into()], pts));
    Ok(())
}

pub fn microlocal(cfg: &ExperimentConfig, rep: &mut RunReport) -> Res<()> {
    let j = cfg.spin.unwrap_or(10.0);
    let h = 1.0 / (j + 0.5);
    let r = FiniteRep::su2_spin(j)?;
    let st = strips(&r.algebra, j + 0.5)?;
    let centers: Vec<f64> = st.iter().map(|s| 0.5 * (s.z_lo + s.z_hi) * h).collect();
    let family = band_family(&centers, 0.5 * h, 3.0)?;
    let ctx = QuantizationContext::new(&r, h)?;
    let mut heat = vec![];
    let mut profile = vec![];
    for (b, a) in family.iter().enumerate() {
        let d = ctx.diagonal(a)?;
        for (k, v) in d.iter().enumerate() {
            heat.push(vec![k.to_string(), b.to_string(), format!("{:e}", v.re)]);
        }
        profile.push(d[0].re);
    }
    let total: f64 = profile.iter().sum();
    let abs_total: f64 = profile.iter().map(|v| v.abs()).sum();
    let top = profile.len() - 1;
    let peak = (0..profile.len()).max_by(|&a, &b| profile[a].total_cmp(&profile[b])).unwrap_or(0);
    let frac = profile[top.saturating_sub(2)..].iter().sum::<f64>() / total;
    rep.row("top_weight", "peak_band", peak as f64, None);
    rep.row("top_weight", "top3_fraction", frac, Some(0.9));
    rep.row("top_weight", "top3_abs_fraction", profile[top.saturating_sub(2)..].iter().map(|v| v.abs()).sum::<f64>() / abs_total, None);
    rep.criteria.push(CriterionResult::new("microlocal.peak", if peak == top { 1.0 } else { 0.0 }, Threshold::AtLeast(1.0)));
    rep.criteria.push(CriterionResult::new("microlocal.band", frac, Threshold::AtLeast(0.9)));
    rep.figures.push(("microlocal.csv".into(), vec!["basis_index".into(), "band".into(), "value".into()], heat));
    Ok(())
}
