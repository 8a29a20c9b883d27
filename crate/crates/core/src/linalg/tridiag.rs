use super::{EigenDecomposition, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> SymTridiag<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput("tridiagonal matrix must be at least 1x1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "off-diagonal length {} does not match diagonal length {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("tridiagonal entries must be finite".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                T::zero()
            }
        })
    }

    /// Max-abs row sum, used to scale residual tolerances.
    pub fn norm_inf(&self) -> T {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(T::zero(), T::max)
    }
}

/// Full eigendecomposition. Eigenvalues ascend; each eigenvector has its first
/// non-negligible component positive.
pub fn eig_sym_tridiag<T: Real>(m: &SymTridiag<T>) -> Result<EigenDecomposition<T>> {
    let n = m.dim();
    let mut d = m.diag.clone();
    let mut e = off_padded(m);
    let mut z = Matrix::identity(n);
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    sort_ascending(&mut d, Some(&mut z));
    fix_signs(&mut z);
    Ok(EigenDecomposition { values: d, vectors: z })
}

pub fn eigvals_sym_tridiag<T: Real>(m: &SymTridiag<T>) -> Result<Vec<T>> {
    let mut d = m.diag.clone();
    let mut e = off_padded(m);
    ql_implicit(&mut d, &mut e, None)?;
    sort_ascending(&mut d, None);
    Ok(d)
}

fn off_padded<T: Real>(m: &SymTridiag<T>) -> Vec<T> {
    let mut e = m.offdiag.clone();
    e.push(T::zero());
    e
}

/// Implicit-shift QL iteration (tql2 lineage). `e[i]` couples rows `i` and
/// `i + 1`; `e[n - 1]` must be zero. On return `d` holds the eigenvalues in
/// no particular order and the columns of `z` have been rotated accordingly.
pub(crate) fn ql_implicit<T: Real>(
    d: &mut [T],
    e: &mut [T],
    mut z: Option<&mut Matrix<T>>,
) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    if n <= 1 {
        return Ok(());
    }
    let cap = 50 * n;
    let mut iterations = 0usize;
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            loop {
                iterations += 1;
                if iterations > cap {
                    return Err(Error::NoConvergence(cap));
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..z.rows() {
                            let zk1 = z[(k, i + 1)];
                            let zk = z[(k, i)];
                            z[(k, i + 1)] = s * zk + c * zk1;
                            z[(k, i)] = c * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

pub(crate) fn sort_ascending<T: Real>(d: &mut [T], mut z: Option<&mut Matrix<T>>) {
    let n = d.len();
    for i in 0..n {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(z) = z.as_deref_mut() {
                z.swap_columns(i, k);
            }
        }
    }
}

fn fix_signs<T: Real>(z: &mut Matrix<T>) {
    let threshold = T::tol(1e-10);
    for j in 0..z.cols() {
        let first = (0..z.rows()).map(|i| z[(i, j)]).find(|v| v.abs() > threshold);
        if matches!(first, Some(v) if v < T::zero()) {
            for i in 0..z.rows() {
                z[(i, j)] = -z[(i, j)];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &SymTridiag<f64>, dec: &EigenDecomposition<f64>) -> f64 {
        let a = m.to_dense();
        let n = m.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[(i, j)] * dec.vectors[(j, k)]).sum();
                worst = worst.max((av - dec.values[k] * dec.vectors[(i, k)]).abs());
            }
        }
        worst
    }

    #[test]
    fn one_by_one() {
        let m = SymTridiag::new(vec![0.0f64], vec![]).unwrap();
        let dec = eig_sym_tridiag(&m).unwrap();
        assert_eq!(dec.values, vec![0.0]);
        assert_eq!(dec.vector(0), vec![1.0]);
    }

    #[test]
    fn equal_diagonal_two_by_two() {
        let m = SymTridiag::new(vec![1.0f64, 1.0], vec![100.0]).unwrap();
        let dec = eig_sym_tridiag(&m).unwrap();
        assert!((dec.values[0] + 99.0).abs() < 1e-12);
        assert!((dec.values[1] - 101.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((dec.vectors[(0, 0)] - h).abs() < 1e-14);
        assert!((dec.vectors[(1, 0)] + h).abs() < 1e-14);
        assert!(residual(&m, &dec) < 1e-10 * 101.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(SymTridiag::new(vec![1.0f64, 2.0], vec![]).is_err());
        assert!(SymTridiag::<f64>::new(vec![], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = SymTridiag::new(vec![3.0f64, -1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let dec = eig_sym_tridiag(&m).unwrap();
        assert_eq!(dec.values, vec![-1.0, 2.0, 3.0]);
        assert_eq!(dec.vector(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn degenerate_spectrum() {
        // Decoupled identical 2x2 blocks give doubly degenerate eigenvalues.
        let m = SymTridiag::new(vec![1.0f64, 1.0, 1.0, 1.0], vec![2.0, 0.0, 2.0]).unwrap();
        let dec = eig_sym_tridiag(&m).unwrap();
        assert!((dec.values[0] + 1.0).abs() < 1e-12 && (dec.values[1] + 1.0).abs() < 1e-12);
        assert!((dec.values[2] - 3.0).abs() < 1e-12 && (dec.values[3] - 3.0).abs() < 1e-12);
        assert!(residual(&m, &dec) < 1e-12);
    }

    #[test]
    fn single_precision() {
        let m = SymTridiag::new(vec![1.0f32, 1.0], vec![100.0]).unwrap();
        let vals = eigvals_sym_tridiag(&m).unwrap();
        assert!((vals[0] + 99.0).abs() < 1e-3 && (vals[1] - 101.0).abs() < 1e-3);
    }
}
