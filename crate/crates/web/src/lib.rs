//! wasm-bindgen exports used by `www/index.html`.
//!
//! Every export returns a flat `Vec<f64>` (a `Float64Array` on the JS side) or a
//! string, so the page needs no glue beyond the generated bindings.

use orbitlab::ggp::{is_stable_pair, satake_view};
use orbitlab::liecore::LieAlgebra;
use orbitlab::orbits::{orbit_integral, OrbitChart};
use orbitlab::relchar::{relchar_residual, CompactBranching};
use orbitlab::symbols::Symbol;
use orbitlab::C64;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// `[∫_O exp(-|ξ-c|²/2w²) dω, orbit mass, 2j+1]` on the su(2) orbit of radius j+½.
#[wasm_bindgen]
pub fn kirillov_mass(j: f64, cx: f64, cy: f64, cz: f64, w: f64) -> Result<Vec<f64>, JsValue> {
    if j < 0.0 || (2.0 * j).fract() != 0.0 {
        return Err(js_err("j must be a non-negative half-integer"));
    }
    let chart = OrbitChart::sphere_default(&LieAlgebra::su2(), j + 0.5).map_err(js_err)?;
    let a = Symbol::gaussian(&[cx, cy, cz], w).map_err(js_err)?;
    let one = Symbol::constant(3, C64::new(1.0, 0.0));
    let v = orbit_integral(&chart, &a).map_err(js_err)?.value.re;
    let m = orbit_integral(&chart, &one).map_err(js_err)?.value.re;
    Ok(vec![v, m, 2.0 * j + 1.0])
}

/// Stability of a (λ, μ) pair given as comma separated reals.
/// Returns a short human readable verdict.
#[wasm_bindgen]
pub fn stability(lambda: &str, mu: &str, unitary: bool) -> Result<String, JsValue> {
    let parse = |s: &str| -> Result<Vec<C64>, JsValue> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<f64>().map(|x| if unitary { C64::new(0.0, x) } else { C64::new(x, 0.0) }).map_err(js_err))
            .collect()
    };
    let (l, m) = (parse(lambda)?, parse(mu)?);
    if l.len() != m.len() + 1 {
        return Err(js_err("need one more eigenvalue for λ than for μ"));
    }
    let s = is_stable_pair(&l, &m);
    let sat = satake_view(&l, &m, unitary);
    let mut out = format!(
        "{}  (min gap {:.3e}{})\nSatake view: {} zero {} the combined multiset",
        if s.stable { "stable" } else { "unstable" },
        s.min_gap,
        if s.borderline { ", borderline" } else { "" },
        if sat.stable { "stable," } else { "unstable," },
        if sat.contains_zero { "in" } else { "not in" },
    );
    for (a, b) in &s.matches {
        out.push_str(&format!("\n  shared eigenvalue {a} ~ {b}"));
    }
    Ok(out)
}

/// `[lhs, rhs, diff, h]` for the relative character of SO(2) weight n in spin j.
#[wasm_bindgen]
pub fn relative_character(j: f64, n: f64, cx: f64, cy: f64, cz: f64, w: f64) -> Result<Vec<f64>, JsValue> {
    let br = CompactBranching::spin(j).map_err(js_err)?;
    let h = 1.0 / (j + 0.5);
    let a = Symbol::gaussian(&[cx, cy, cz], w).map_err(js_err)?;
    let r = relchar_residual(&br, &a, h, n).map_err(js_err)?;
    Ok(vec![r.lhs.re, r.rhs.re, r.diff, h])
}
