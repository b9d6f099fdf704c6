//! Ramanujan and pseudo-Ramanujan verdicts for finite colored complexes.

mod operators;

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use operators::{
    build_operators, joint_spectrum, OperatorFamily, SparseMatrix, SpectralTuple, StructuralFlags,
};

use crate::algebra::field::prime_power;
use crate::complexes::{Closure, ColoredComplex, LoadOptions};
use crate::error::Result;
use crate::spectrum::{in_sd, trivial_tuples, EigenTuple, SdkRegion, DEFAULT_REGION_SAMPLES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Unit-circle tolerance for spectrum membership.
    pub tol: f64,
    /// Relative tolerance for matching trivial tuples and grouping.
    pub match_tol: f64,
    /// Residual bound, relative to `1 + |A_k|`.
    pub residual_tol: f64,
    /// `t` in `zeta^{d/t} = 1`; 1 admits every `d`-th root of unity.
    pub t_index: usize,
    /// Check for `A_{d-k} = A_k^*` on the edges as written.
    pub strict: bool,
    pub treat_trivial_as_nontrivial: bool,
    pub region_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            match_tol: 1e-6,
            residual_tol: 1e-8,
            t_index: 1,
            strict: false,
            treat_trivial_as_nontrivial: false,
            region_samples: DEFAULT_REGION_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TupleClass {
    /// Matches the trivial tuple at `zeta = exp(2 pi i index / order)`.
    Trivial { index: usize, order: usize, zeta: Complex64 },
    NontrivialInSd,
    NontrivialOutside,
}

impl TupleClass {
    pub fn label(&self) -> String {
        match self {
            Self::Trivial { index, order, .. } => format!("trivial({index}/{order})"),
            Self::NontrivialInSd => "nontrivial-in-Sd".into(),
            Self::NontrivialOutside => "nontrivial-outside".into(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Trivial { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedTuple {
    pub tuple: EigenTuple,
    pub multiplicity: usize,
    pub residual: f64,
    pub class: TupleClass,
    /// Componentwise membership in the projected regions.
    pub in_sdk: Vec<bool>,
    /// `max | |z_i| - 1 |` over the recovered Satake parameters.
    pub max_modulus_deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ramanujan,
    PseudoRamanujan,
    Neither,
    /// Not a building-quotient-like complex.
    Structural,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ramanujan => 0,
            Self::PseudoRamanujan => 1,
            Self::Neither => 2,
            Self::Structural => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub d: usize,
    pub q: u64,
    pub n: usize,
    pub flags: StructuralFlags,
    pub tuples: Vec<ClassifiedTuple>,
    pub ramanujan: bool,
    pub pseudo_ramanujan: bool,
    pub verdict: Verdict,
    /// The nontrivial tuple furthest from the spectrum, if any lies outside.
    pub offender: Option<ClassifiedTuple>,
    pub notes: Vec<String>,
}

impl VerifierReport {
    /// One row per distinct tuple: `re_k,im_k` per color, residual,
    /// multiplicity, class.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for k in 1..self.d {
            let _ = write!(s, "re{k},im{k},");
        }
        s.push_str("residual,multiplicity,class\n");
        for t in &self.tuples {
            for l in t.tuple.values() {
                let _ = write!(s, "{:.12e},{:.12e},", l.re, l.im);
            }
            let _ = writeln!(s, "{:.3e},{},{}", t.residual, t.multiplicity, t.class.label());
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "d={} q={} n={}: {}\n",
            self.d,
            self.q,
            self.n,
            match self.verdict {
                Verdict::Ramanujan => "Ramanujan",
                Verdict::PseudoRamanujan => "pseudo-Ramanujan (not Ramanujan)",
                Verdict::Neither => "not Ramanujan",
                Verdict::Structural => "not a building-quotient-like complex",
            }
        );
        let f = self.flags;
        let _ = writeln!(
            s,
            "  normal={} commuting={} adjoint_paired={}",
            f.normal, f.pairwise_commuting, f.adjoint_paired
        );
        if let Some(o) = &self.offender {
            let vals: Vec<String> = o.tuple.values().iter().map(|l| format!("{l:.9}")).collect();
            let _ = writeln!(s, "  offender: ({}) |lambda_1| = {:.9}", vals.join(", "), o.tuple.get(1).norm());
        }
        for note in &self.notes {
            let _ = writeln!(s, "  note: {note}");
        }
        s
    }
}

/// Groups a sorted spectrum into distinct tuples.
fn group(spec: Vec<SpectralTuple>, tol: f64) -> Vec<(EigenTuple, usize, f64)> {
    let mut out: Vec<(EigenTuple, usize, f64)> = Vec::new();
    for s in spec {
        if let Some(g) = out.iter_mut().find(|g| g.0.relative_distance(&s.tuple) <= tol) {
            g.1 += 1;
            g.2 = g.2.max(s.residual);
        } else {
            out.push((s.tuple, 1, s.residual));
        }
    }
    out
}

/// Classifies a joint spectrum of `cx`.
pub fn classify(cx: &ColoredComplex, spec: Vec<SpectralTuple>, flags: StructuralFlags, opts: &VerifyOptions) -> Result<VerifierReport> {
    let (d, q) = (cx.d(), cx.q());
    let mut notes = Vec::new();
    if prime_power(q).is_none() {
        notes.push(format!("q = {q} is not a prime power; used as a formal parameter"));
    }
    let components = cx.components();
    if components > 1 {
        notes.push(format!("disconnected: {components} components"));
    }
    if !flags.all() {
        return Ok(VerifierReport {
            d,
            q,
            n: cx.n(),
            flags,
            tuples: Vec::new(),
            ramanujan: false,
            pseudo_ramanujan: false,
            verdict: Verdict::Structural,
            offender: None,
            notes,
        });
    }

    let qf = q as f64;
    let trivial = trivial_tuples(d, qf, opts.t_index)?;
    let regions: Vec<SdkRegion> =
        (1..d).map(|k| SdkRegion::new(d, qf, k, opts.region_samples)).collect::<Result<_>>()?;

    let mut tuples = Vec::new();
    for (tuple, multiplicity, residual) in group(spec, opts.match_tol) {
        let verdict = in_sd(d, qf, &tuple, opts.tol)?;
        let in_sdk: Vec<bool> = regions
            .iter()
            .zip(tuple.values())
            .map(|(r, &l)| r.contains(l, opts.tol * (1.0 + l.norm())))
            .collect();
        let matched = trivial.iter().find(|t| t.tuple.relative_distance(&tuple) <= opts.match_tol);
        let class = match matched {
            Some(t) if !opts.treat_trivial_as_nontrivial => {
                if verdict.member {
                    notes.push(format!(
                        "tuple matching trivial zeta = exp(2 pi i {}/{}) also lies in S_d",
                        t.index, t.order
                    ));
                }
                TupleClass::Trivial { index: t.index, order: t.order, zeta: t.zeta }
            }
            _ if verdict.member => TupleClass::NontrivialInSd,
            _ => TupleClass::NontrivialOutside,
        };
        tuples.push(ClassifiedTuple {
            tuple,
            multiplicity,
            residual,
            class,
            in_sdk,
            max_modulus_deviation: verdict.max_modulus_deviation,
        });
    }

    let nontrivial: Vec<&ClassifiedTuple> = tuples.iter().filter(|t| !t.class.is_trivial()).collect();
    if nontrivial.is_empty() {
        notes.push("no nontrivial spectrum".into());
    }
    let ramanujan = nontrivial.iter().all(|t| t.class == TupleClass::NontrivialInSd);
    let pseudo_ramanujan = nontrivial
        .iter()
        .all(|t| t.class == TupleClass::NontrivialInSd || t.in_sdk.iter().all(|&b| b));
    let offender = nontrivial
        .iter()
        .filter(|t| t.class == TupleClass::NontrivialOutside)
        .max_by(|a, b| a.max_modulus_deviation.total_cmp(&b.max_modulus_deviation))
        .map(|t| (*t).clone());
    let verdict = if ramanujan {
        Verdict::Ramanujan
    } else if pseudo_ramanujan {
        Verdict::PseudoRamanujan
    } else {
        Verdict::Neither
    };
    Ok(VerifierReport { d, q, n: cx.n(), flags, tuples, ramanujan, pseudo_ramanujan, verdict, offender, notes })
}

/// Builds the operators, computes the joint spectrum and classifies it.
pub fn verify_complex(cx: &ColoredComplex, opts: &VerifyOptions) -> Result<VerifierReport> {
    let fam = build_operators(cx);
    let flags = fam.flags();
    let spec = if flags.all() {
        joint_spectrum(&fam, opts.residual_tol, opts.seed)?
    } else {
        Vec::new()
    };
    classify(cx, spec, flags, opts)
}

/// Loads an `.rcx` file and verifies it. In strict mode the edges are taken
/// as written, so a missing reversed edge surfaces as a structural failure.
pub fn verify(path: impl AsRef<Path>, opts: &VerifyOptions) -> Result<VerifierReport> {
    let cx = ColoredComplex::load(path, load_options(opts))?;
    verify_complex(&cx, opts)
}

pub fn load_options(opts: &VerifyOptions) -> LoadOptions {
    LoadOptions { closure: if opts.strict { Closure::AsIs } else { Closure::AutoComplete } }
}
