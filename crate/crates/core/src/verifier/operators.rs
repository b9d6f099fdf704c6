//! Colored adjacency operators of a finite complex and their joint spectrum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complexes::ColoredComplex;
use crate::error::{Error, Result};
use crate::spectrum::EigenTuple;

/// Sparse integer matrix, rows sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    fn from_triples(n: usize, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut rows = vec![Vec::new(); n];
        for (u, v, m) in triples {
            rows[u].push((v, m));
        }
        for r in rows.iter_mut() {
            r.sort_unstable();
        }
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        Self::from_triples(
            self.n,
            self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, m)| (j, i, m))),
        )
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = vec![0i64; self.n];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.n);
        for r in &self.rows {
            for &(j, a) in r {
                for &(l, b) in &other.rows[j] {
                    if acc[l] == 0 {
                        touched.push(l);
                    }
                    acc[l] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let row: Vec<(usize, i64)> =
                touched.iter().filter(|&&l| acc[l] != 0).map(|&l| (l, acc[l])).collect();
            for &l in &touched {
                acc[l] = 0;
            }
            touched.clear();
            rows.push(row);
        }
        Self { n: self.n, rows }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, a) in r {
                m[(i, j)] = Complex64::new(a as f64, 0.0);
            }
        }
        m
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, a)| f[j] * a as f64).sum()).collect()
    }
}

/// Exact structural properties of the operator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralFlags {
    pub normal: bool,
    pub pairwise_commuting: bool,
    pub adjoint_paired: bool,
}

impl StructuralFlags {
    pub fn all(&self) -> bool {
        self.normal && self.pairwise_commuting && self.adjoint_paired
    }
}

/// The operators `A_1, ..., A_{d-1}` with `A_k[x][y]` the multiplicity of
/// the color-`k` edge `x -> y`.
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    d: usize,
    ops: Vec<SparseMatrix>,
    flags: StructuralFlags,
}

pub fn build_operators(cx: &ColoredComplex) -> OperatorFamily {
    let n = cx.n();
    let d = cx.d();
    let ops: Vec<SparseMatrix> = (1..d)
        .map(|k| SparseMatrix::from_triples(n, cx.edges(k).map(|(u, v, m)| (u, v, m as i64))))
        .collect();
    let transposes: Vec<SparseMatrix> = ops.iter().map(SparseMatrix::transpose).collect();
    let normal = ops.iter().zip(&transposes).all(|(a, at)| a.mul(at) == at.mul(a));
    let pairwise_commuting = (0..ops.len())
        .all(|i| (i + 1..ops.len()).all(|j| ops[i].mul(&ops[j]) == ops[j].mul(&ops[i])));
    let adjoint_paired = (0..ops.len()).all(|i| ops[d - 2 - i] == transposes[i]);
    OperatorFamily { d, ops, flags: StructuralFlags { normal, pairwise_commuting, adjoint_paired } }
}

impl OperatorFamily {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.ops.first().map_or(0, SparseMatrix::n)
    }

    pub fn flags(&self) -> StructuralFlags {
        self.flags
    }

    /// `A_k`, 1-based.
    pub fn op(&self, k: usize) -> &SparseMatrix {
        &self.ops[k - 1]
    }
}

/// A joint eigenvalue tuple with its eigenvector residual
/// `max_k |A_k v - lambda_k v|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralTuple {
    pub tuple: EigenTuple,
    pub residual: f64,
    /// Unit joint eigenvector.
    #[serde(skip)]
    pub vector: Vec<Complex64>,
}

/// Attempts beyond the first when the residual check fails.
const RETRIES: usize = 5;

/// Joint spectrum with multiplicity, sorted.
///
/// An orthonormal eigenbasis of the Hermitian matrix `N + N^*` with
/// `N = sum_k w_k A_k` for random unit complex `w_k` simultaneously
/// diagonalizes the family unless two distinct joint eigenvalues collide
/// under the combination; residuals catch that case and trigger a retry.
/// Every vector must satisfy `|A_k v - lambda_k v| <= tol (1 + |A_k|)`.
pub fn joint_spectrum(fam: &OperatorFamily, tol: f64, seed: u64) -> Result<Vec<SpectralTuple>> {
    let n = fam.n();
    let d = fam.d;
    if n == 0 {
        return Ok(Vec::new());
    }
    let dense: Vec<DMatrix<Complex64>> = fam.ops.iter().map(SparseMatrix::to_dense).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_seen = f64::INFINITY;
    for _ in 0..=RETRIES {
        let mut nmat = DMatrix::<Complex64>::zeros(n, n);
        for a in &dense {
            let w = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            nmat += a * w;
        }
        let h = &nmat + nmat.adjoint();
        let eig = nalgebra::SymmetricEigen::new(h);
        let vecs = eig.eigenvectors;

        let mut tuples = Vec::with_capacity(n);
        let mut residuals = Vec::with_capacity(n);
        let av: Vec<DMatrix<Complex64>> = dense.iter().map(|a| a * &vecs).collect();
        for c in 0..n {
            let v = vecs.column(c);
            let mut lam = Vec::with_capacity(d - 1);
            let mut res = Vec::with_capacity(d - 1);
            for a_v in &av {
                let col = a_v.column(c);
                let l = v.dotc(&col);
                res.push((col - v * l).norm());
                lam.push(l);
            }
            tuples.push(lam);
            residuals.push(res);
        }
        let norms: Vec<f64> = (0..d - 1)
            .map(|k| tuples.iter().map(|t| t[k].norm()).fold(0.0, f64::max))
            .collect();
        let worst = residuals
            .iter()
            .map(|r| r.iter().zip(&norms).map(|(x, nk)| x / (1.0 + nk)).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if worst <= tol {
            let mut out: Vec<SpectralTuple> = tuples
                .into_iter()
                .zip(residuals)
                .enumerate()
                .map(|(c, (t, r))| SpectralTuple {
                    tuple: EigenTuple(t),
                    residual: r.into_iter().fold(0.0, f64::max),
                    vector: vecs.column(c).iter().copied().collect(),
                })
                .collect();
            out.sort_by(|a, b| tuple_order(&a.tuple, &b.tuple));
            return Ok(out);
        }
        worst_seen = worst_seen.min(worst);
    }
    Err(Error::Diagonalization { worst: worst_seen })
}

/// Descending by real part, then imaginary part, component by component.
pub(crate) fn tuple_order(a: &EigenTuple, b: &EigenTuple) -> std::cmp::Ordering {
    for (x, y) in a.values().iter().zip(b.values()) {
        let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}
