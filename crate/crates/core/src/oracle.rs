//! Brute-force reference routines. They share no code with the production
//! eigensolvers or the block-spectral evolution and exist to cross-check them
//! in tests and in the `selftest` battery.

use crate::linalg::{HermitianMatrix, Matrix, SymTridiag};
use crate::scalar::{Complex, Real};

/// Number of eigenvalues of `m` strictly below `x` (Sturm sequence count).
pub fn sturm_count<T: Real>(m: &SymTridiag<T>, x: T) -> usize {
    let d = m.diag();
    let e = m.offdiag();
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = d[0] - x;
    if q < T::zero() {
        count += 1;
    }
    for i in 1..d.len() {
        let qq = if q.abs() < tiny { tiny } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / qq;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// All eigenvalues by bisection on the Sturm count, ascending.
pub fn bisection_eigenvalues<T: Real>(m: &SymTridiag<T>) -> Vec<T> {
    let n = m.dim();
    let d = m.diag();
    let e = m.offdiag();
    // Gershgorin interval
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let mut r = T::zero();
        if i > 0 {
            r += e[i - 1].abs();
        }
        if i + 1 < n {
            r += e[i].abs();
        }
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = T::one() + (hi - lo).abs();
    lo = lo - pad * T::epsilon() * T::lit(8.0) - T::epsilon();
    hi = hi + pad * T::epsilon() * T::lit(8.0) + T::epsilon();
    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = (a + b) * T::lit(0.5);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(m, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            (a + b) * T::lit(0.5)
        })
        .collect()
}

/// Cyclic Jacobi eigensolver for a dense real symmetric matrix. Returns
/// ascending eigenvalues and the eigenvector matrix (columns).
pub fn jacobi_eigen<T: Real>(a: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::<T>::identity(n);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let scale: T = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum::<T>() + off;
        if off <= T::epsilon() * T::epsilon() * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix via the real `2n x 2n` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `m` with every value
/// doubled. Returns one copy of each, ascending.
pub fn embedded_hermitian_eigenvalues<T: Real>(m: &HermitianMatrix<T>) -> Vec<T> {
    let n = m.dim();
    let big = Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let z: Complex<T> = m.get(i % n, j % n);
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (vals, _) = jacobi_eigen(&big);
    vals.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_on_two_by_two() {
        let m = SymTridiag::new(vec![1.0f64, 1.0], vec![100.0]).unwrap();
        let v = bisection_eigenvalues(&m);
        assert!((v[0] + 99.0).abs() < 1e-12 && (v[1] - 101.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = Matrix::from_row_major(3, 3, vec![2.0f64, 1.0, 0.5, 1.0, 3.0, -1.0, 0.5, -1.0, 1.0]);
        let (vals, v) = jacobi_eigen(&a);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[(i, j)] * v[(j, k)]).sum();
                assert!((av - vals[k] * v[(i, k)]).abs() < 1e-12);
            }
        }
    }
}
