use super::C64;

const JACOBI_THRESHOLD: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian `n × n` matrix (row-major), ascending.
///
/// 2×2 matrices use the closed form. Larger ones are embedded as the real
/// symmetric matrix `[[A, -B], [B, A]]` (with `H = A + iB`), whose spectrum
/// is that of `H` with every eigenvalue doubled, and diagonalized by cyclic
/// Jacobi rotations.
pub(crate) fn hermitian_eigenvalues(m: &[C64], n: usize) -> Vec<f64> {
    debug_assert_eq!(m.len(), n * n);
    match n {
        0 => Vec::new(),
        1 => vec![m[0].re],
        2 => {
            let a = m[0].re;
            let d = m[3].re;
            let b = m[1];
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - radius, mean + radius]
        }
        _ => {
            let size = 2 * n;
            let mut s = vec![0.0; size * size];
            for r in 0..n {
                for c in 0..n {
                    let z = m[r * n + c];
                    s[r * size + c] = z.re;
                    s[(r + n) * size + c + n] = z.re;
                    s[r * size + c + n] = -z.im;
                    s[(r + n) * size + c] = z.im;
                }
            }
            let mut ev = jacobi_symmetric(&mut s, size);
            ev.sort_by(|a, b| a.total_cmp(b));
            ev.into_iter().step_by(2).collect()
        }
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix in place.
/// Returns the diagonal once the off-diagonal norm drops below the threshold.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_THRESHOLD {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
