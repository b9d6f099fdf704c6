//! Spectral algebra of the colored Hecke operators `A_1, ..., A_{d-1}`.
//!
//! A spherical representation with Satake parameters `z_1, ..., z_d`
//! (`z_1 ... z_d = 1`) has Hecke eigenvalues
//! `lambda_k = q^{k(d-k)/2} sigma_k(z)`. The simultaneous spectrum of the
//! building is the image of the unit torus under this map, so membership of
//! a tuple reduces to locating the roots of
//! `P(z) = sum_k (-1)^k e_k z^{d-k}` with `e_k = q^{-k(d-k)/2} lambda_k`.

mod region;
mod roots;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use region::{boundary_curve, in_sdk, CurveSample, SdkRegion, DEFAULT_REGION_SAMPLES};
pub use roots::monic_roots;

use crate::error::{Error, Result};

/// Default tolerance for unit-circle membership.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Number of `k`-dimensional subspaces of `F_q^d`. For `q = 1` this is the
/// ordinary binomial coefficient.
///
/// Panics on `u128` overflow.
pub fn gaussian_binomial(d: usize, k: usize, q: u64) -> u128 {
    if k > d {
        return 0;
    }
    let q = q as u128;
    let pow = |e: usize| -> u128 { q.checked_pow(e as u32).expect("gaussian binomial overflow") };
    let mut acc: u128 = 1;
    for i in 1..=k {
        if q == 1 {
            acc = acc * (d - i + 1) as u128 / i as u128;
        } else {
            let num = pow(d - i + 1) - 1;
            let den = pow(i) - 1;
            acc = acc.checked_mul(num).expect("gaussian binomial overflow") / den;
        }
    }
    acc
}

/// Elementary symmetric polynomials `sigma_0..=sigma_n` of `z`.
pub fn elementary_symmetric(z: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); z.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, &zi) in z.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k] + e[k - 1] * zi;
        }
    }
    e
}

fn hecke_scale(d: usize, k: usize, q: f64) -> f64 {
    q.powf((k * (d - k)) as f64 / 2.0)
}

/// A point `(lambda_1, ..., lambda_{d-1})` of a joint Hecke spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenTuple(pub Vec<Complex64>);

impl EigenTuple {
    pub fn d(&self) -> usize {
        self.0.len() + 1
    }

    /// `lambda_k`, 1-based.
    pub fn get(&self, k: usize) -> Complex64 {
        self.0[k - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `max_k |lambda_{d-k} - conj(lambda_k)| / (1 + |lambda_k|)`.
    pub fn conjugacy_defect(&self) -> f64 {
        let d = self.d();
        (1..d)
            .map(|k| (self.get(d - k) - self.get(k).conj()).norm() / (1.0 + self.get(k).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest componentwise distance, scaled by `1 + |lambda_k|`.
    pub fn relative_distance(&self, other: &EigenTuple) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm() / (1.0 + a.norm()))
            .fold(0.0, f64::max)
    }
}

/// Satake parameters of a spherical representation of `PGL_d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatakeVector(Vec<Complex64>);

impl SatakeVector {
    /// Checks `z_1 ... z_d = 1` within `tol`.
    pub fn new(z: Vec<Complex64>, tol: f64) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidArgument("need at least two Satake parameters".into()));
        }
        let prod: Complex64 = z.iter().product();
        if (prod - 1.0).norm() > tol {
            return Err(Error::InvalidArgument(format!(
                "Satake parameters multiply to {prod}, not 1"
            )));
        }
        Ok(Self(z))
    }

    /// `z_j = exp(i theta_j)` for `j < d-1`, last entry fixed by the product.
    pub fn from_angles(angles: &[f64]) -> Self {
        let mut z: Vec<Complex64> = angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        let s: f64 = angles.iter().sum();
        z.push(Complex64::from_polar(1.0, -s));
        Self(z)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }
}

/// `lambda_k = q^{k(d-k)/2} sigma_k(z)` for `k = 1..d`.
pub fn lambda_from_satake(q: f64, z: &SatakeVector) -> EigenTuple {
    lambda_from_params(q, z.values())
}

fn lambda_from_params(q: f64, z: &[Complex64]) -> EigenTuple {
    let d = z.len();
    let e = elementary_symmetric(z);
    EigenTuple((1..d).map(|k| e[k] * hecke_scale(d, k, q)).collect())
}

/// Outcome of a membership test for the simultaneous spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVerdict {
    pub member: bool,
    /// Recovered Satake parameters.
    pub roots: Vec<Complex64>,
    /// `max_i ||z_i| - 1|`.
    pub max_modulus_deviation: f64,
    /// Distance in eigenvalue space from the tuple to the image of the
    /// radially projected roots.
    pub backward_error: f64,
    pub conjugacy_defect: f64,
}

/// Tests `(lambda_1, ..., lambda_{d-1})` for membership in the simultaneous
/// spectrum of the building.
///
/// A tuple is a member when it passes the conjugacy screen
/// `lambda_{d-k} = conj(lambda_k)` and either every recovered root lies
/// within `tol` of the unit circle or projecting the roots onto the circle
/// moves the tuple by at most `tol`. The second route keeps multiple roots
/// on the circle (whose numerical splitting is of order `tol^{1/m}`)
/// from being rejected.
pub fn in_sd(d: usize, q: f64, lambda: &EigenTuple, tol: f64) -> Result<SpectrumVerdict> {
    if lambda.0.len() + 1 != d {
        return Err(Error::Dimension(format!(
            "expected {} eigenvalues for d = {d}, got {}",
            d - 1,
            lambda.0.len()
        )));
    }
    let conjugacy_defect = lambda.conjugacy_defect();

    // e_0 = e_d = 1; coefficient of z^j is (-1)^{d-j} e_{d-j}.
    let mut e = vec![Complex64::new(1.0, 0.0); d + 1];
    for k in 1..d {
        e[k] = lambda.get(k) / hecke_scale(d, k, q);
    }
    let lower: Vec<Complex64> = (0..d)
        .map(|j| if (d - j).is_multiple_of(2) { e[d - j] } else { -e[d - j] })
        .collect();
    let roots = monic_roots(&lower)?;
    let max_modulus_deviation = roots.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);

    let mut proj: Vec<Complex64> = roots
        .iter()
        .map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) })
        .collect();
    let phase = proj.iter().product::<Complex64>().arg();
    let fix = Complex64::from_polar(1.0, -phase / d as f64);
    for z in proj.iter_mut() {
        *z *= fix;
    }
    let image = lambda_from_params(q, &proj);
    let backward_error = lambda
        .0
        .iter()
        .zip(&image.0)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let member = conjugacy_defect <= tol && (max_modulus_deviation <= tol || backward_error <= tol);
    Ok(SpectrumVerdict { member, roots, max_modulus_deviation, backward_error, conjugacy_defect })
}

/// A trivial eigenvalue tuple, attached to a `d/t`-th root of unity `zeta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialTuple {
    /// `zeta = exp(2 pi i index / order)`.
    pub index: usize,
    pub order: usize,
    pub zeta: Complex64,
    pub tuple: EigenTuple,
}

/// Trivial tuples `zeta^k q^{k(d-k)/2} sigma_k(q^{-(d-1)/2}, ..., q^{(d-1)/2})`
/// for every `zeta` with `zeta^{d/t} = 1`. With `t_index = 1` all `d`-th
/// roots of unity are included.
pub fn trivial_tuples(d: usize, q: f64, t_index: usize) -> Result<Vec<TrivialTuple>> {
    if t_index == 0 || !d.is_multiple_of(t_index) {
        return Err(Error::BadTIndex { t: t_index, d });
    }
    let order = d / t_index;
    let params: Vec<Complex64> = (0..d)
        .map(|i| Complex64::new(q.powf((2.0 * i as f64 - (d as f64 - 1.0)) / 2.0), 0.0))
        .collect();
    let base = lambda_from_params(q, &params);
    Ok((0..order)
        .map(|j| {
            let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / order as f64);
            let tuple =
                EigenTuple((1..d).map(|k| base.get(k) * zeta.powu(k as u32)).collect());
            TrivialTuple { index: j, order, zeta, tuple }
        })
        .collect())
}

/// The `zeta = 1` trivial eigenvalue of `A_k` in exact integer arithmetic:
/// `sum over k-subsets S of {0..d} of q^{k(2d-k-1)/2 - sum(S)}`.
pub fn trivial_eigenvalue_exact(d: usize, k: usize, q: u64) -> u128 {
    let top = k * (2 * d - k - 1) / 2;
    let mut total: u128 = 0;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let s: usize = subset.iter().sum();
        total += (q as u128).pow((top - s) as u32);
        let Some(pos) = (0..k).rev().find(|&i| subset[i] < d - k + i) else { break };
        subset[pos] += 1;
        for i in pos + 1..k {
            subset[i] = subset[i - 1] + 1;
        }
    }
    total
}

/// Uniform bound on `|lambda_k|` for nontrivial eigenvalues when `d >= 3`:
/// `q^{k(d-k)/2} sigma_k(q^{(d-2)/2}, q^{(d-4)/2}, ..., q^{(2-d)/2}, 1)`.
pub fn nontrivial_bound(d: usize, q: f64, k: usize) -> Result<f64> {
    if d == 2 {
        return Err(Error::NoGapForDTwo);
    }
    if d < 2 || k == 0 || k >= d {
        return Err(Error::ColorOutOfRange { k, max: d.saturating_sub(1) });
    }
    let mut params: Vec<Complex64> = (0..d - 1)
        .map(|j| Complex64::new(q.powf((d as f64 - 2.0) / 2.0 - j as f64), 0.0))
        .collect();
    params.push(Complex64::new(1.0, 0.0));
    Ok(elementary_symmetric(&params)[k].re * hecke_scale(d, k, q))
}
