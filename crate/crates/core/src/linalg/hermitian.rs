use super::tridiag::{ql_implicit, sort_ascending};
use super::{EigenDecomposition, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{czero, creal, Complex, Real};

/// Square complex matrix checked to be Hermitian on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: Matrix<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Accepts `m` if `|m[i][j] - conj(m[j][i])| <= 1e-12 * max(1, max|m|)`.
    /// The stored matrix is the exact Hermitian part of `m`.
    pub fn new(m: Matrix<Complex<T>>) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::InvalidInput(format!("matrix is {}x{}, not square", n, m.cols())));
        }
        if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        let scale = m.as_slice().iter().map(|z| z.norm()).fold(T::one(), T::max);
        let tol = T::tol(1e-12) * scale;
        for i in 0..n {
            for j in i..n {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                if dev > tol {
                    return Err(Error::NotHermitian { row: i, col: j, deviation: dev.as_f64() });
                }
            }
        }
        let half = T::lit(0.5);
        let inner = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                creal(m[(i, i)].re)
            } else {
                (m[(i, j)] + m[(j, i)].conj()).scale(half)
            }
        });
        Ok(Self { inner })
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<Complex<T>> {
        &self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> T {
        self.inner.as_slice().iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }
}

pub fn eig_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Result<EigenDecomposition<T, Complex<T>>> {
    let n = m.dim();
    let mut a = m.inner.clone();
    let mut q = Matrix::identity(n);
    let (mut d, mut e, phases) = tridiagonalize(&mut a, Some(&mut q));
    let mut z = Matrix::identity(n);
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    sort_ascending(&mut d, Some(&mut z));
    // eigenvectors of m are Q * diag(phases) * Z
    let vectors = Matrix::from_fn(n, n, |r, k| {
        let mut acc = czero();
        for i in 0..n {
            acc = acc + q[(r, i)] * phases[i].scale(z[(i, k)]);
        }
        acc
    });
    Ok(EigenDecomposition { values: d, vectors })
}

pub fn eigvals_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Result<Vec<T>> {
    let mut a = m.inner.clone();
    let (mut d, mut e, _) = tridiagonalize(&mut a, None);
    ql_implicit(&mut d, &mut e, None)?;
    sort_ascending(&mut d, None);
    Ok(d)
}

/// Householder reduction `A = Q T Q^H` followed by the unitary diagonal
/// `P` with `P^H T P` real. Returns (diagonal, padded off-diagonal, P).
#[allow(clippy::type_complexity)]
fn tridiagonalize<T: Real>(
    a: &mut Matrix<Complex<T>>,
    mut q: Option<&mut Matrix<Complex<T>>>,
) -> (Vec<T>, Vec<T>, Vec<Complex<T>>) {
    let n = a.rows();
    let mut v = vec![czero::<T>(); n];
    let mut p = vec![czero::<T>(); n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let tail_norm2: T = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail_norm2 == T::zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let xnorm = (tail_norm2 + x0.norm_sqr()).sqrt();
        let x0abs = x0.norm();
        let phase = if x0abs > T::zero() { x0.unscale(x0abs) } else { creal(T::one()) };
        let alpha = -phase.scale(xnorm);

        v[0] = x0 - alpha;
        for i in 1..len {
            v[i] = a[(k + 1 + i, k)];
        }
        let vnorm2: T = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let tau = T::lit(2.0) / vnorm2;

        // p = tau * B v over the trailing block B = a[k+1.., k+1..]
        for i in 0..len {
            let mut acc = czero();
            for j in 0..len {
                acc = acc + a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = acc.scale(tau);
        }
        let vp: Complex<T> = (0..len).fold(czero(), |acc, i| acc + v[i].conj() * p[i]);
        let kk = vp.re * tau * T::lit(0.5);
        for i in 0..len {
            p[i] = p[i] - v[i].scale(kk);
        }
        // B <- B - v w^H - w v^H with w stored in p
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] = a[(k + 1 + i, k + 1 + j)] - upd;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = czero();
            a[(k, i)] = czero();
        }

        if let Some(q) = q.as_deref_mut() {
            // Q <- Q H, H = I - tau v v^H acting on columns k+1..
            for r in 0..n {
                let mut qv = czero();
                for j in 0..len {
                    qv = qv + q[(r, k + 1 + j)] * v[j];
                }
                let qv = qv.scale(tau);
                for j in 0..len {
                    q[(r, k + 1 + j)] = q[(r, k + 1 + j)] - qv * v[j].conj();
                }
            }
        }
    }

    let d: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![T::zero(); n];
    let mut phases = vec![creal(T::one()); n];
    for k in 0..n.saturating_sub(1) {
        let sub = a[(k + 1, k)];
        let mag = sub.norm();
        e[k] = mag;
        phases[k + 1] = if mag > T::zero() { phases[k] * sub.unscale(mag) } else { phases[k] };
    }
    (d, e, phases)
}
