//! Brute-force dense algebra on plain nested vectors.

pub type Mat = Vec<Vec<f64>>;

pub const LN_2PI: f64 = 1.8378770664093453;

pub fn se(a: &[f64], b: &[f64], ls: &[f64], signal: f64) -> f64 {
    let r2: f64 = a.iter().zip(b).zip(ls).map(|((x, y), l)| ((x - y) / l).powi(2)).sum();
    signal * (-0.5 * r2).exp()
}

pub fn gram(xs: &[Vec<f64>], ls: &[f64], signal: f64, diag: f64) -> Mat {
    let n = xs.len();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            k[i][j] = se(&xs[i], &xs[j], ls, signal);
        }
        k[i][i] += diag;
    }
    k
}

pub fn column(xs: &[Vec<f64>], x: &[f64], ls: &[f64], signal: f64) -> Vec<f64> {
    xs.iter().map(|xi| se(xi, x, ls, signal)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn matvec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Gauss–Jordan elimination with partial pivoting.
pub fn inverse(a: &Mat) -> Mat {
    let n = a.len();
    let mut m: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty");
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// log|A| from LU with partial pivoting; A must have positive determinant.
pub fn log_det(a: &Mat) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut out = 0.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty");
        m.swap(col, piv);
        let p = m[col][col];
        out += p.abs().ln();
        for r in col + 1..n {
            let f = m[r][col] / p;
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    out
}

/// Gaussian log density of `v` under N(0, S).
pub fn gaussian_log_density(v: &[f64], s: &Mat) -> f64 {
    let inv = inverse(s);
    -0.5 * dot(v, &matvec(&inv, v)) - 0.5 * log_det(s) - 0.5 * v.len() as f64 * LN_2PI
}
