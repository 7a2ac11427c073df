//! Coordinate-geometry and quadrature oracles shared by the integration tests.
#![allow(dead_code)]

use feec::linalg::RatMatrix;
use feec::rational::{rat, to_f64, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Vec64 = Vec<f64>;

pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let pts: Vec<Vec<Rational>> =
            (0..=n).map(|_| (0..n).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=5))).collect()).collect();
        let rows: Vec<Vec<Rational>> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
        let det = to_f64(&RatMatrix::from_rows(rows).det()).abs();
        if det > 0.5 {
            return pts;
        }
    }
}

pub fn f64_points(pts: &[Vec<Rational>]) -> Vec<Vec64> {
    pts.iter().map(|p| p.iter().map(to_f64).collect()).collect()
}

/// Inverse of a small dense matrix by Gauss-Jordan with partial pivoting.
pub fn invert(mut a: Vec<Vec64>) -> Vec<Vec64> {
    let n = a.len();
    let mut inv: Vec<Vec64> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] -= f * a[c][j];
                    inv[i][j] -= f * inv[c][j];
                }
            }
        }
    }
    inv
}

/// Gradients of the barycentric coordinates: rows of the inverse of the
/// affine matrix [1 x_j]ᵀ.
pub fn gradients(pts: &[Vec64]) -> Vec<Vec64> {
    let n = pts.len() - 1;
    let m: Vec<Vec64> = (0..=n).map(|r| (0..=n).map(|j| if r == 0 { 1.0 } else { pts[j][r - 1] }).collect()).collect();
    let inv = invert(m);
    (0..=n).map(|i| (1..=n).map(|r| inv[i][r]).collect()).collect()
}

pub fn volume(pts: &[Vec64]) -> f64 {
    let n = pts.len() - 1;
    let rows: Vec<Vec64> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    let mut a = rows;
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det.abs() / (1..=n).map(|x| x as f64).product::<f64>()
}

/// Grundmann-Möller rule of degree 2s+1 on the n-simplex, as barycentric
/// nodes and weights relative to the volume.
pub fn grundmann_moller(n: usize, s: usize) -> Vec<(Vec64, f64)> {
    let d = 2 * s + 1;
    let fact = |m: usize| (1..=m).map(|x| x as f64).product::<f64>();
    let mut out = Vec::new();
    for i in 0..=s {
        let denom = (d + n - 2 * i) as f64;
        let w = (-1f64).powi(i as i32) * 2f64.powi(-(2 * s as i32)) * denom.powi(d as i32) / (fact(i) * fact(d + n - i))
            * fact(n);
        for beta in compositions(n + 1, s - i) {
            let x: Vec64 = beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect();
            out.push((x, w));
        }
    }
    out
}

pub fn compositions(len: usize, total: usize) -> Vec<Vec<usize>> {
    if len == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(len - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Whitney 1-form λᵢ∇λⱼ − λⱼ∇λᵢ at a barycentric point, in coordinates.
pub fn whitney_edge(grads: &[Vec64], i: usize, j: usize, x: &[f64]) -> Vec64 {
    grads[j].iter().zip(&grads[i]).map(|(gj, gi)| x[i] * gj - x[j] * gi).collect()
}

