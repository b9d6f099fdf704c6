//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rcx_core::complexes::ColoredComplex;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense color-1 adjacency matrix of a `d = 2` complex.
pub fn adjacency(cx: &ColoredComplex) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; cx.n()]; cx.n()];
    for (u, v, m) in cx.edges(1) {
        a[u][v] += m as f64;
    }
    a
}

/// `sum_j 2 cos(2 pi s j / m)`, with a jump of `m/2` contributing `(-1)^s`.
pub fn circulant_eigenvalues(m: usize, jumps: &[usize]) -> Vec<f64> {
    (0..m)
        .map(|s| {
            jumps
                .iter()
                .map(|&j| {
                    if 2 * j == m {
                        if s % 2 == 0 { 1.0 } else { -1.0 }
                    } else {
                        2.0 * (std::f64::consts::TAU * (s * j) as f64 / m as f64).cos()
                    }
                })
                .sum()
        })
        .collect()
}

/// Largest pairing distance between two equally long sorted lists.
pub fn sorted_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// A complex whose operators are circulants: `A_k` has first row `rows[k-1]`
/// and `A_{d-k} = A_k^T`, so the family is normal and commuting.
pub fn circulant_family(d: usize, q: u64, n: usize, seed: u64) -> ColoredComplex {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cx = ColoredComplex::new(d, q, n).unwrap();
    for k in 1..=d / 2 {
        let mut row = vec![0u32; n];
        for _ in 0..rng.random_range(1..6) {
            row[rng.random_range(0..n)] += rng.random_range(1..4);
        }
        if 2 * k == d {
            for j in 0..n {
                let m = row[j].max(row[(n - j) % n]);
                row[j] = m;
                row[(n - j) % n] = m;
            }
        }
        for u in 0..n {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    let v = (u + j) % n;
                    cx.add_edge(k, u, v, m).unwrap();
                    if 2 * k != d {
                        cx.add_edge(d - k, v, u, m).unwrap();
                    }
                }
            }
        }
    }
    cx
}

/// Random 3-regular multigraph on `n` (even) vertices: a union of three
/// uniformly random perfect matchings.
pub fn random_cubic_multigraph(n: usize, seed: u64) -> ColoredComplex {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cx = ColoredComplex::new(2, 2, n).unwrap();
    for _ in 0..3 {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        for pair in p.chunks(2) {
            cx.add_edge(1, pair[0], pair[1], 1).unwrap();
            cx.add_edge(1, pair[1], pair[0], 1).unwrap();
        }
    }
    cx
}
