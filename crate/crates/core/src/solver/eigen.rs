//! Dense complex eigen-decomposition: balancing, complex Schur form, and
//! eigenvectors by back-substitution on the triangular factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::solver::SolverError;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

/// Diagonal similarity `D^-1 A D` equalising row and column norms (powers of two).
fn balance(a: &mut DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    let mut scale = vec![1.0f64; n];
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if (cc + rr) < 0.95 * total {
                converged = false;
                scale[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    scale
}

/// All eigenpairs of a square matrix, eigenvectors scaled to unit 2-norm.
pub fn eigen_decompose(a: &[Vec<Complex64>]) -> Result<Vec<EigenPair>, SolverError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if a.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let mut m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let scale = balance(&mut m);
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 1000 * n.max(10)).ok_or(SolverError::NoConvergence)?;
    let (q, t) = schur.unpack();

    let norm = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * norm;
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        // solve (T - lambda I) y = 0 with y_k = 1, y_i = 0 for i > k
        let mut y = DVector::from_element(n, Complex64::new(0.0, 0.0));
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            y[i] = -s / denom;
        }
        let mut w = &q * y;
        for (wi, si) in w.iter_mut().zip(&scale) {
            *wi *= *si;
        }
        let wn = w.norm();
        let vector = w.iter().map(|z| z / wn).collect();
        pairs.push(EigenPair { value: lambda, vector });
    }
    Ok(pairs)
}
