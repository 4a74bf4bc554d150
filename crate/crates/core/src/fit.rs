//! Log-log slope fits for convergence orders.

/// Least-squares slope of ln(y) against ln(x). `None` when fewer than two usable points.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

/// Fitted constant C in y ≈ C·x^p for a given order p (geometric mean of y/x^p).
pub fn constant_for_order(x: &[f64], y: &[f64], p: f64) -> f64 {
    let logs: Vec<f64> = x.iter().zip(y).map(|(a, b)| (b / a.powf(p)).ln()).collect();
    (logs.iter().sum::<f64>() / logs.len() as f64).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [0.1, 0.05, 0.025, 0.0125];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        assert!((loglog_slope(&x, &y).unwrap() - 2.0).abs() < 1e-12);
        assert!((constant_for_order(&x, &y, 2.0) - 3.0).abs() < 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_none());
    }
}
