//! Roots of complex polynomials: companion-matrix eigenvalues followed by
//! Newton polishing.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Backward-error threshold below which a root counts as converged.
const CONVERGENCE_TOL: f64 = 1e-12;

/// Evaluates `z^n + lower[n-1] z^{n-1} + ... + lower[0]` and its derivative.
fn eval_monic(lower: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in lower.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)| / sum |a_i| |z|^i`, the relative backward error of a root.
fn backward_error(lower: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale = lower.iter().rev().fold(1.0, |acc, c| acc * r + c.norm());
    let scale = scale.max(r.powi(lower.len() as i32));
    eval_monic(lower, z).0.norm() / scale.max(f64::MIN_POSITIVE)
}

const SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (0.0917, 0.0433), (-0.1213, 0.0771), (0.2719, -0.1638)];

fn companion_eigenvalues(lower: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = lower.len();
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for (i, &c) in lower.iter().enumerate() {
        companion[(i, n - 1)] = -c;
    }
    let schur = nalgebra::Schur::try_new(companion, f64::EPSILON, 10_000)?;
    Some(schur.eigenvalues()?.iter().copied().collect())
}

/// Lower coefficients of the monic `p(w + s)`.
fn taylor_shift(lower: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let n = lower.len();
    let mut c: Vec<Complex64> = lower.to_vec();
    c.push(Complex64::new(1.0, 0.0));
    for i in 0..n {
        for j in (i..n).rev() {
            let hi = c[j + 1];
            c[j] += s * hi;
        }
    }
    c.truncate(n);
    c
}

/// All roots (with multiplicity) of the monic polynomial whose lower
/// coefficients are `lower[0..n]`, sorted by argument then modulus.
pub fn monic_roots(lower: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = lower.len();
    let fail = || Error::RootFinding(lower.iter().map(|c| (c.re, c.im)).collect());
    if n == 0 {
        return Ok(Vec::new());
    }
    // QR iteration can stall on companion matrices that are permutations
    // (e.g. z^n - 1); recentering the polynomial breaks the symmetry.
    let mut roots = None;
    for shift in SHIFTS {
        let shift = Complex64::new(shift.0, shift.1);
        if let Some(r) = companion_eigenvalues(&taylor_shift(lower, shift)) {
            roots = Some(r.into_iter().map(|w| w + shift).collect::<Vec<_>>());
            break;
        }
    }
    let mut roots = roots.ok_or_else(fail)?;

    for z in roots.iter_mut() {
        let mut best = backward_error(lower, *z);
        for _ in 0..8 {
            let (p, dp) = eval_monic(lower, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *z - p / dp;
            let err = backward_error(lower, cand);
            if !(err < best) {
                break;
            }
            *z = cand;
            best = err;
        }
        if !(best <= CONVERGENCE_TOL) {
            return Err(fail());
        }
    }
    roots.sort_by(|a, b| {
        a.arg()
            .partial_cmp(&b.arg())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(roots)
}
