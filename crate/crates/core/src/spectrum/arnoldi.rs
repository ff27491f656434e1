//! Shift-invert Arnoldi iteration for the eigenvalues of smallest magnitude
//! of a real (generalized) eigenproblem. The caller supplies the inverted
//! operator `x -> A^{-1} B x`; Ritz values of the Krylov Hessenberg matrix
//! approximate `1/lambda`, so the dominant ones give the wanted eigenvalues.

use crate::scalar::{Cplx, Real};
use nalgebra::{DMatrix, RealField};
use rand::{Rng, SeedableRng};

/// Returns up to `n_eigs` eigenvalues of smallest `|lambda|`, sorted by
/// magnitude. `apply` must compute `y = A^{-1} B x`; `m` is the Krylov
/// dimension (clamped to the problem size).
pub fn smallest_eigenvalues<T, F>(mut apply: F, n: usize, m: usize, n_eigs: usize) -> Vec<Cplx<T>>
where
    T: Real + RealField + Copy,
    F: FnMut(&[T], &mut [T]),
{
    let m = m.min(n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v0: Vec<T> = (0..n).map(|_| T::c(rng.gen_range(-1.0..1.0))).collect();
    let norm0 = norm(&v0);
    for x in v0.iter_mut() {
        *x = *x / norm0;
    }

    let mut basis: Vec<Vec<T>> = vec![v0];
    let mut h = DMatrix::<T>::zeros(m + 1, m);
    let mut m_eff = m;
    let mut work = vec![T::zero(); n];

    for j in 0..m {
        apply(&basis[j], &mut work);
        // modified Gram-Schmidt, twice for orthogonality at scale
        for _pass in 0..2 {
            for (i, vi) in basis.iter().enumerate() {
                let c = dot(vi, &work);
                h[(i, j)] = h[(i, j)] + c;
                for k in 0..n {
                    work[k] = work[k] - c * vi[k];
                }
            }
        }
        let beta = norm(&work);
        h[(j + 1, j)] = beta;
        if beta < T::c(1e-300) {
            m_eff = j + 1;
            break;
        }
        let mut next = work.clone();
        for x in next.iter_mut() {
            *x = *x / beta;
        }
        basis.push(next);
    }

    let hm = h.view((0, 0), (m_eff, m_eff)).into_owned();
    let mus = hm.complex_eigenvalues();
    let mut lambdas: Vec<Cplx<T>> = mus
        .iter()
        .filter(|mu| mu.norm() > T::c(1e-300))
        .map(|mu| {
            let inv = Cplx::new(T::one(), T::zero()) / Cplx::new(mu.re, mu.im);
            inv
        })
        .collect();
    lambdas.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    lambdas.truncate(n_eigs);
    lambdas
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_smallest_eigenvalues_of_diagonal_operator() {
        // A = diag(1..n), B = I: apply = x / diag
        let n = 50;
        let diag: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let eigs = smallest_eigenvalues(
            |x: &[f64], y: &mut [f64]| {
                for i in 0..n {
                    y[i] = x[i] / diag[i];
                }
            },
            n,
            30,
            4,
        );
        for (k, e) in eigs.iter().enumerate() {
            assert!((e.re - (k + 1) as f64).abs() < 1e-8, "eig {k} = {e}");
            assert!(e.im.abs() < 1e-10);
        }
    }

    #[test]
    fn finds_complex_pair() {
        // 2x2 rotation-ish block + heavy diagonal tail
        let n = 20;
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        a[(0, 0)] = 0.1;
        a[(0, 1)] = -1.0;
        a[(1, 0)] = 1.0;
        a[(1, 1)] = 0.1;
        for i in 2..n {
            a[(i, i)] = 5.0 + i as f64;
        }
        let lu = a.clone().lu();
        let eigs = smallest_eigenvalues(
            |x: &[f64], y: &mut [f64]| {
                let sol = lu.solve(&nalgebra::DVector::from_column_slice(x)).unwrap();
                y.copy_from_slice(sol.as_slice());
            },
            n,
            20,
            2,
        );
        assert_eq!(eigs.len(), 2);
        for e in &eigs {
            assert!((e.re - 0.1).abs() < 1e-8);
            assert!((e.im.abs() - 1.0).abs() < 1e-8);
        }
    }
}
