//! One-dimensional rules and the product rules built from them.

use gauss_quad::{GaussHermite, GaussLegendre};
use std::f64::consts::PI;
use std::num::NonZeroUsize;

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().cloned().zip(self.weights.iter().cloned())
    }
}

fn nz(n: usize) -> NonZeroUsize {
    NonZeroUsize::new(n.max(1)).unwrap()
}

/// Gauss-Legendre on [a, b], nodes ascending.
pub fn legendre(n: usize, a: f64, b: f64) -> Rule {
    let gl = GaussLegendre::new(nz(n));
    let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    Rule {
        nodes: pairs.iter().map(|p| m + r * p.0).collect(),
        weights: pairs.iter().map(|p| r * p.1).collect(),
    }
}

/// Gauss-Hermite for the weight exp(-u²/2) on the real line (weights sum to √(2π)).
pub fn hermite_prob(n: usize) -> Rule {
    let gh = GaussHermite::new(nz(n));
    let mut pairs: Vec<(f64, f64)> = gh.as_node_weight_pairs().to_vec();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let s = std::f64::consts::SQRT_2;
    Rule {
        nodes: pairs.iter().map(|p| s * p.0).collect(),
        weights: pairs.iter().map(|p| s * p.1).collect(),
    }
}

/// Uniform periodic rule on [0, 2π).
pub fn periodic(n: usize) -> Rule {
    let n = n.max(1);
    Rule {
        nodes: (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect(),
        weights: vec![2.0 * PI / n as f64; n],
    }
}

/// Directions on the unit sphere S^{dim-1} with weights summing to its area.
///
/// dim 1: {±1}; dim 2: uniform circle; dim 3: Gauss-Legendre in cos θ times uniform φ.
/// Every rule is invariant under u ↦ -u when `azimuthal` is even.
pub fn sphere_directions(dim: usize, polar: usize, azimuthal: usize) -> Option<Vec<(Vec<f64>, f64)>> {
    match dim {
        1 => Some(vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]),
        2 => Some(
            periodic(azimuthal)
                .iter()
                .map(|(p, w)| (vec![p.cos(), p.sin()], w))
                .collect(),
        ),
        3 => {
            let ct = legendre(polar, -1.0, 1.0);
            let ph = periodic(azimuthal);
            let mut out = Vec::with_capacity(ct.len() * ph.len());
            for (c, wc) in ct.iter() {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for (p, wp) in ph.iter() {
                    out.push((vec![s * p.cos(), s * p.sin(), c], wc * wp));
                }
            }
            Some(out)
        }
        _ => None,
    }
}

/// Area of the unit sphere S^{dim-1}.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let d = dim as f64;
            2.0 * PI.powf(d / 2.0) / gamma_half_int(dim)
        }
    }
}

fn gamma_half_int(dim: usize) -> f64 {
    // Γ(dim/2)
    if dim % 2 == 0 {
        (1..dim / 2).map(|k| k as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < dim as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = legendre(8, 0.0, 2.0);
        let v: f64 = r.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((v - 2f64.powi(8) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_moments() {
        let r = hermite_prob(10);
        let m0: f64 = r.weights.iter().sum();
        let m4: f64 = r.iter().map(|(x, w)| w * x.powi(4)).sum();
        let s = (2.0 * PI).sqrt();
        assert!((m0 - s).abs() < 1e-12);
        assert!((m4 - 3.0 * s).abs() < 1e-11);
    }

    #[test]
    fn sphere_rule_area_and_symmetry() {
        let d = sphere_directions(3, 6, 8).unwrap();
        let a: f64 = d.iter().map(|p| p.1).sum();
        assert!((a - sphere_area(3)).abs() < 1e-12);
        let z2: f64 = d.iter().map(|p| p.1 * p.0[2] * p.0[2]).sum();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
