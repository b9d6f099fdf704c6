//! Square matrices over `O = F_q[[t]]` and their canonical forms.
//!
//! Both canonical forms are computed in `O / t^N` where `N` exceeds the
//! `t`-adic valuation of the determinant. The lattice spanned by the columns
//! then contains `t^N O^d`, so working modulo `t^N` loses nothing: the Hermite
//! form's entries have degree below `N` and the elementary divisors are
//! all smaller than `N`.

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldElem};
use super::poly::LocalPoly;
use crate::error::{Error, Result};

/// A `d x d` matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OMatrix {
    d: usize,
    entries: Vec<LocalPoly>,
}

impl OMatrix {
    pub fn new(d: usize, entries: Vec<LocalPoly>) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::Dimension(format!(
                "expected {} entries for d = {d}, got {}",
                d * d,
                entries.len()
            )));
        }
        Ok(Self { d, entries })
    }

    pub fn zero(d: usize) -> Self {
        Self { d, entries: vec![LocalPoly::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        Self::diag_t_powers(&vec![0; d])
    }

    /// `diag(t^{e_1}, ..., t^{e_d})`.
    pub fn diag_t_powers(exps: &[u32]) -> Self {
        let d = exps.len();
        let mut m = Self::zero(d);
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, i, LocalPoly::t_pow(e as usize));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &LocalPoly {
        &self.entries[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LocalPoly) {
        self.entries[i * self.d + j] = v;
    }

    pub fn entries(&self) -> &[LocalPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        assert_eq!(self.d, other.d, "dimension mismatch in OMatrix::mul");
        let d = self.d;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = LocalPoly::zero();
                for k in 0..d {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b, f), f);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Smallest valuation over all entries (`None` for the zero matrix).
    pub fn min_valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(LocalPoly::valuation).min()
    }

    /// Divides every entry by `t^e`; all entries must be divisible.
    pub fn div_t_pow(&self, e: usize) -> Self {
        Self { d: self.d, entries: self.entries.iter().map(|p| p.div_t_pow(e)).collect() }
    }

    /// Diagonal exponents of an upper-triangular matrix whose diagonal
    /// entries are powers of `t`.
    pub fn diag_exponents(&self) -> Vec<u32> {
        (0..self.d)
            .map(|i| self.get(i, i).valuation().expect("nonzero diagonal") as u32)
            .collect()
    }

    /// Whether the matrix already has the shape produced by
    /// [`OMatrix::hermite_canonical`].
    pub fn is_hermite_canonical(&self) -> bool {
        let d = self.d;
        for i in 0..d {
            let diag = self.get(i, i);
            let Some(e) = diag.valuation() else { return false };
            if *diag != LocalPoly::t_pow(e) {
                return false;
            }
            for j in 0..d {
                let x = self.get(i, j);
                if j < i && !x.is_zero() {
                    return false;
                }
                if j > i && x.degree().is_some_and(|deg| deg >= e) {
                    return false;
                }
            }
        }
        true
    }

    /// Upper bound for `deg det` plus one: sum of column degrees.
    fn working_precision(&self) -> Result<usize> {
        let mut total = 0;
        for j in 0..self.d {
            let deg = (0..self.d)
                .filter_map(|i| self.get(i, j).degree())
                .max()
                .ok_or(Error::Singular)?;
            total += deg;
        }
        Ok(total + 1)
    }

    /// The unique upper-triangular `H` with `H GL_d(O) = M GL_d(O)`, diagonal
    /// `t^{e_i}` and each entry right of the diagonal in row `i` of degree
    /// below `e_i`.
    pub fn hermite_canonical(&self, f: &Field) -> Result<Self> {
        let d = self.d;
        let n = self.working_precision()?;
        let ring = Trunc { f, n };
        // cols[j][i] is entry (i, j).
        let mut cols: Vec<Vec<Vec<FieldElem>>> = (0..d)
            .map(|j| (0..d).map(|i| ring.lift(self.get(i, j))).collect())
            .collect();
        let mut exps = vec![0usize; d];

        for i in (0..d).rev() {
            let (jp, v) = (0..=i)
                .filter_map(|j| ring.val(&cols[j][i]).map(|v| (j, v)))
                .min_by_key(|&(j, v)| (v, std::cmp::Reverse(j)))
                .ok_or(Error::Singular)?;
            cols.swap(jp, i);
            let unit_inv = ring.unit_inv(&ring.shift_down(&cols[i][i], v))?;
            for x in cols[i].iter_mut() {
                *x = ring.mul(x, &unit_inv);
            }
            let pivot_col = cols[i].clone();
            for col in cols.iter_mut().take(i) {
                if ring.val(&col[i]).is_some() {
                    let c = ring.shift_down(&col[i], v);
                    ring.sub_mul_vec(col, &c, &pivot_col);
                }
            }
            exps[i] = v;
        }
        if exps.iter().sum::<usize>() >= n {
            return Err(Error::Singular);
        }

        for j in 0..d {
            for i in (0..j).rev() {
                let c = ring.shift_down(&cols[j][i], exps[i]);
                if ring.val(&c).is_some() {
                    let pivot_col = cols[i].clone();
                    ring.sub_mul_vec(&mut cols[j], &c, &pivot_col);
                }
            }
        }

        let mut out = Self::zero(d);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                out.set(i, j, LocalPoly::new(x.clone()));
            }
        }
        debug_assert!(out.is_hermite_canonical());
        Ok(out)
    }

    /// Exponents `l_1 >= ... >= l_d` with `M = U diag(t^{l_i}) V`,
    /// `U, V` in `GL_d(O)`.
    pub fn elementary_divisors(&self, f: &Field) -> Result<Vec<u32>> {
        let d = self.d;
        let n = self.working_precision()?;
        let ring = Trunc { f, n };
        let mut a: Vec<Vec<Vec<FieldElem>>> = (0..d)
            .map(|i| (0..d).map(|j| ring.lift(self.get(i, j))).collect())
            .collect();
        let mut out = Vec::with_capacity(d);
        for s in 0..d {
            let (pi, pj, v) = (s..d)
                .flat_map(|i| (s..d).map(move |j| (i, j)))
                .filter_map(|(i, j)| ring.val(&a[i][j]).map(|v| (i, j, v)))
                .min_by_key(|&(_, _, v)| v)
                .ok_or(Error::Singular)?;
            a.swap(s, pi);
            for row in a.iter_mut() {
                row.swap(s, pj);
            }
            let unit_inv = ring.unit_inv(&ring.shift_down(&a[s][s], v))?;
            let pivot_row = a[s].clone();
            for row in a.iter_mut().skip(s + 1) {
                if ring.val(&row[s]).is_some() {
                    let c = ring.mul(&ring.shift_down(&row[s], v), &unit_inv);
                    ring.sub_mul_vec(row, &c, &pivot_row);
                }
            }
            for j in s + 1..d {
                if ring.val(&a[s][j]).is_some() {
                    let c = ring.mul(&ring.shift_down(&a[s][j], v), &unit_inv);
                    for i in 0..d {
                        let prod = ring.mul(&c, &a[i][s]);
                        a[i][j] = ring.sub(&a[i][j], &prod);
                    }
                }
            }
            out.push(v as u32);
        }
        if out.iter().map(|&x| x as usize).sum::<usize>() >= n {
            return Err(Error::Singular);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    /// `t`-adic valuation of the determinant.
    pub fn det_valuation(&self, f: &Field) -> Result<u32> {
        Ok(self.elementary_divisors(f)?.iter().sum())
    }

    /// Entries as strings, row by row.
    pub fn format_rows(&self, f: &Field) -> Vec<Vec<String>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.get(i, j).format(f)).collect())
            .collect()
    }
}

/// Arithmetic in `F_q[t] / t^n` on dense coefficient vectors of length `n`.
struct Trunc<'a> {
    f: &'a Field,
    n: usize,
}

impl Trunc<'_> {
    fn lift(&self, p: &LocalPoly) -> Vec<FieldElem> {
        (0..self.n).map(|i| p.coeff(i)).collect()
    }

    fn val(&self, a: &[FieldElem]) -> Option<usize> {
        a.iter().position(|c| !c.is_zero())
    }

    fn shift_down(&self, a: &[FieldElem], e: usize) -> Vec<FieldElem> {
        (0..self.n).map(|i| a.get(i + e).copied().unwrap_or(FieldElem::ZERO)).collect()
    }

    fn mul(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.f;
        let mut out = vec![FieldElem::ZERO; self.n];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().take(self.n - i).enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }

    fn sub(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().zip(b).map(|(&x, &y)| self.f.sub(x, y)).collect()
    }

    /// `dst -= c * src`, entrywise.
    fn sub_mul_vec(&self, dst: &mut [Vec<FieldElem>], c: &[FieldElem], src: &[Vec<FieldElem>]) {
        for (x, y) in dst.iter_mut().zip(src) {
            if self.val(y).is_some() {
                let prod = self.mul(c, y);
                *x = self.sub(x, &prod);
            }
        }
    }

    fn unit_inv(&self, u: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let inv = LocalPoly::new(u.to_vec()).unit_inverse(self.n, self.f)?;
        Ok(self.lift(&inv))
    }
}
