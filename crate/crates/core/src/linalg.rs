//! Small dense linear-algebra helpers on top of nalgebra.

use crate::{Error, Result, C64};
use nalgebra::{DMatrix, DVector};

pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn cplx(m: &RMat) -> CMat {
    m.map(|v| C64::new(v, 0.0))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and unitary columns.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let e = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&k| e.eigenvalues[k]).collect();
    let vecs = CMat::from_fn(m.nrows(), idx.len(), |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// exp of a skew-Hermitian matrix via the spectral decomposition of iA.
pub fn exp_skew(a: &CMat) -> CMat {
    let h = a * crate::linalg::I;
    let (vals, v) = herm_eig(&h);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::from_polar(1.0, -l)),
    ));
    &v * d * v.adjoint()
}

/// General matrix exponential (Padé, scaling and squaring).
pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|k| t[(k, k)]).collect())
}

/// Principal logarithm of a matrix with spectrum away from the negative real axis.
///
/// Inverse scaling and squaring: Denman-Beavers square roots until close to the
/// identity, then the Gregory series for log((1+z)/(1-z)).
pub fn logm(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let mut y = a.clone();
    let mut k = 0u32;
    while fro(&(&y - &id)) > 0.25 {
        y = sqrt_db(&y)?;
        k += 1;
        if k > 60 {
            return Err(Error::Numerical("matrix log: square roots did not approach identity".into()));
        }
    }
    let num = &y - &id;
    let den = &y + &id;
    let z = den
        .clone()
        .lu()
        .solve(&num)
        .ok_or_else(|| Error::Numerical("matrix log: singular Cayley factor".into()))?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut acc = z.clone();
    for m in 1..60 {
        term = &term * &z2;
        let add = &term * C64::new(1.0 / (2 * m + 1) as f64, 0.0);
        acc += &add;
        if fro(&add) < 1e-18 * (1.0 + fro(&acc)) {
            break;
        }
    }
    Ok(acc * C64::new(2.0 * 2f64.powi(k as i32), 0.0))
}

fn sqrt_db(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CMat::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::Numerical("singular iterate".into()))?;
        let yn = (&y + zi) * C64::new(0.5, 0.0);
        let zn = (&z + yi) * C64::new(0.5, 0.0);
        let delta = fro(&(&yn - &y));
        y = yn;
        z = zn;
        if delta < 1e-15 * fro(&y) {
            break;
        }
    }
    Ok(y)
}

/// Orthonormal basis of the numerical null space, with the singular values used.
pub fn nullspace(m: &CMat, rel_tol: f64) -> (CMat, Vec<f64>) {
    let (r, c) = m.shape();
    // pad with zero rows so the SVD exposes all right singular vectors
    let mut a = CMat::zeros(r.max(c), c);
    a.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let cols: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] <= rel_tol * smax || smax < 1e-14).collect();
    let mut out = CMat::zeros(c, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        for i in 0..c {
            out[(i, j)] = vt[(k, i)].conj();
        }
    }
    (out, sv)
}

/// Numerical rank with a relative singular value threshold.
pub fn rank(m: &CMat, rel_tol: f64) -> (usize, Vec<f64>) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0, vec![]);
    }
    let sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let r = sv.iter().filter(|&&s| s > rel_tol * smax.max(1.0)).count();
    (r, sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_inverts_exp() {
        let a = CMat::from_fn(3, 3, |i, j| C64::new(0.1 * (i as f64 - j as f64), 0.05 * (i + 2 * j) as f64));
        let l = logm(&expm(&a)).unwrap();
        assert!(fro(&(l - a)) < 1e-12);
    }

    #[test]
    fn skew_exponential_matches_pade() {
        let a = CMat::from_fn(4, 4, |i, j| C64::new((i as f64) - (j as f64), (i * j) as f64 * 0.3));
        let a = &a - a.adjoint();
        assert!(fro(&(exp_skew(&a) - expm(&a))) < 1e-11);
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let m = CMat::from_fn(3, 3, |i, j| if j >= i { C64::new((i + 1) as f64, j as f64) } else { C64::new(0.0, 0.0) });
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((ev[2] - C64::new(3.0, 2.0)).norm() < 1e-12);
    }
}
