//! Small dense helpers for the reduced-space analysis.

/// Eigenvalues of a symmetric `n x n` row-major matrix by cyclic Jacobi
/// rotations, in no particular order.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    let scale: f64 = a.iter().map(|v| v * v).sum::<f64>();
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= scale * 1e-32 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
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

/// Largest singular value of a row-major `rows x cols` matrix.
///
/// Works on the Gram matrix of the shorter side.
pub fn spectral_norm(matrix: &[f64], rows: usize, cols: usize) -> f64 {
    assert_eq!(matrix.len(), rows * cols, "matrix must be rows x cols");
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let (n, gram) = if rows <= cols {
        let mut g = vec![0.0; rows * rows];
        for i in 0..rows {
            for j in i..rows {
                let ri = &matrix[i * cols..(i + 1) * cols];
                let rj = &matrix[j * cols..(j + 1) * cols];
                let v: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                g[i * rows + j] = v;
                g[j * rows + i] = v;
            }
        }
        (rows, g)
    } else {
        let mut g = vec![0.0; cols * cols];
        for i in 0..cols {
            for j in i..cols {
                let v: f64 = (0..rows)
                    .map(|r| matrix[r * cols + i] * matrix[r * cols + j])
                    .sum();
                g[i * cols + j] = v;
                g[j * cols + i] = v;
            }
        }
        (cols, g)
    };
    symmetric_eigenvalues(&gram, n)
        .into_iter()
        .fold(0.0f64, f64::max)
        .sqrt()
}
