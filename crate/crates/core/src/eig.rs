//! Cyclic Jacobi eigensolver for small symmetric matrices, generic over
//! the scalar (f64 for speed, double-double for verification).

use crate::dd::{Dd, Real};

/// Eigenvalues of the symmetric n x n matrix `a` (row-major, full storage),
/// sorted ascending.  Classic cyclic-by-row Jacobi; for the matrix sizes
/// used here (n <= 64) it converges in a handful of sweeps.
pub fn symmetric_eigenvalues<T: Real>(a: &[T], n: usize) -> Vec<T> {
    assert_eq!(a.len(), n * n, "matrix storage must be n*n");
    let mut m: Vec<T> = a.to_vec();
    // Symmetrize defensively: Jacobi assumes exact symmetry.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (m[i * n + j] + m[j * n + i]) / T::from_f64(2.0);
            m[i * n + j] = avg;
            m[j * n + i] = avg;
        }
    }
    let one = T::one();
    for _sweep in 0..60 {
        // Off-diagonal magnitude relative to the diagonal scale.
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag + m[i * n + i].abs();
            for j in (i + 1)..n {
                off = off + m[i * n + j].abs();
            }
        }
        let scale = diag.to_f64().max(1e-300);
        if off.to_f64() <= scale * T::epsilon() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs().to_f64() <= scale * T::epsilon() * 1e-2 {
                    continue;
                }
                // Rotation angle from tau = cot(2 theta).
                let tau = (m[q * n + q] - m[p * n + p]) / (T::from_f64(2.0) * apq);
                let t = {
                    let root = (tau * tau + one).sqrt();
                    if tau.to_f64() >= 0.0 {
                        one / (tau + root)
                    } else {
                        -(one / (root - tau))
                    }
                };
                let c = one / (t * t + one).sqrt();
                let s = t * c;
                // Update the p/q rows and columns.
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = T::zero();
                m[q * n + p] = T::zero();
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    let new_ip = c * aip - s * aiq;
                    let new_iq = s * aip + c * aiq;
                    m[i * n + p] = new_ip;
                    m[p * n + i] = new_ip;
                    m[i * n + q] = new_iq;
                    m[q * n + i] = new_iq;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Smallest eigenvalue of a symmetric f64 matrix.
pub fn min_eigenvalue(a: &[f64], n: usize) -> f64 {
    symmetric_eigenvalues(a, n)[0]
}

/// Smallest eigenvalue recomputed in double-double from the same f64
/// entries.  Distinguishes a genuine negative eigenvalue from f64
/// eigensolver rounding (entry rounding is bounded separately by callers).
pub fn min_eigenvalue_dd(a: &[f64], n: usize) -> f64 {
    let add: Vec<Dd> = a.iter().map(|&x| Dd::from_f64(x)).collect();
    symmetric_eigenvalues(&add, n)[0].to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let a = [2.0, 1.0, 1.0, 2.0];
        let ev = symmetric_eigenvalues(&a, 2);
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diag_plus_rank_one() {
        // I + v v^T with |v|^2 = 3: eigenvalues {1, 1, 4} for n = 3, v = (1,1,1).
        let n = 3;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = if i == j { 2.0 } else { 1.0 };
            }
        }
        let ev = symmetric_eigenvalues(&a, n);
        assert!((ev[0] - 1.0).abs() < 1e-13);
        assert!((ev[1] - 1.0).abs() < 1e-13);
        assert!((ev[2] - 4.0).abs() < 1e-13);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        // Random-ish fixed symmetric matrix: spectrum must preserve trace
        // and the sum of squares (Frobenius norm of a symmetric matrix).
        let n = 5;
        let mut a = vec![0.0; n * n];
        let mut v = 0.37f64;
        for i in 0..n {
            for j in 0..=i {
                v = (v * 997.0 + 0.1).fract();
                a[i * n + j] = v - 0.5;
                a[j * n + i] = v - 0.5;
            }
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let frob2: f64 = a.iter().map(|x| x * x).sum();
        let ev = symmetric_eigenvalues(&a, n);
        let tr2: f64 = ev.iter().sum();
        let fr2: f64 = ev.iter().map(|x| x * x).sum();
        assert!((trace - tr2).abs() < 1e-12);
        assert!((frob2 - fr2).abs() < 1e-12);
    }

    #[test]
    fn dd_agrees_with_f64_on_well_conditioned_input() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.25, 0.5, 0.25, 2.0];
        let e1 = min_eigenvalue(&a, 3);
        let e2 = min_eigenvalue_dd(&a, 3);
        assert!((e1 - e2).abs() < 1e-13, "f64 {e1} vs dd {e2}");
    }

    #[test]
    fn dd_resolves_tiny_negative_eigenvalue() {
        // diag(1, eps) - small coupling: min eigenvalue ~ eps - c^2 for
        // coupling c; choose values where f64 Jacobi is near its floor.
        let eps = 1e-13;
        let c = 1e-7;
        let a = [1.0, c, c, eps];
        // Exact: with T = 1 + eps, D = eps - c^2 = 9e-14, the small root is
        // D/T + D^2/T^3 + O(D^3) = 9e-14 (1 - 1e-14) to well below f64 ulp.
        // Evaluating (T - sqrt(T^2 - 4D))/2 in f64 would itself be off by
        // ~1e-17 from cancellation; the dd solve must beat that.
        let exact_min = 9.0e-14 * (1.0 - 1.0e-14);
        let got = min_eigenvalue_dd(&a, 2);
        assert!(
            (got - exact_min).abs() < 1e-26,
            "got {got} exact {exact_min}"
        );
    }
}
