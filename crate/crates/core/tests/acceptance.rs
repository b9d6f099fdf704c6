//! Acceptance criteria: one PASS/FAIL line each; exits nonzero on failure.

mod common;

use std::time::{Duration, Instant};

use common::{adjacency, circulant_family, jacobi_eigenvalues, random_cubic_multigraph};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcx_core::algebra::Field;
use rcx_core::building::{Building, BuildingBall, BuildingParams};
use rcx_core::complexes::{gen_circulant, gen_complete, ColoredComplex};
use rcx_core::spectrum::{
    gaussian_binomial, in_sd, lambda_from_satake, nontrivial_bound, trivial_eigenvalue_exact,
    trivial_tuples, EigenTuple, SatakeVector,
};
use rcx_core::verifier::{build_operators, joint_spectrum, verify_complex, Verdict, VerifyOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ball(d: usize, q: u64, r: u32) -> BuildingBall {
    let f = Field::for_q(q).unwrap();
    Building::new(BuildingParams::new(d, f.params().clone()).unwrap())
        .unwrap()
        .build_ball(r, 1_000_000)
        .unwrap()
}

fn building_regularity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (d, q, r) in [(2, 2, 4), (2, 3, 3), (3, 2, 2), (3, 3, 2), (4, 2, 1)] {
        let b = ball(d, q, r);
        for k in 1..d {
            let want = gaussian_binomial(d, k, q) as u64;
            let deg = b.out_degrees(k);
            for i in (0..b.len()).filter(|&i| b.is_interior(i)) {
                ensure(deg[i] == want, || format!("(d,q,r)=({d},{q},{r}) k={k} vertex {i}: {} != {want}", deg[i]))?;
                checked += 1;
            }
        }
    }
    ensure(gaussian_binomial(3, 1, 2) == 7 && gaussian_binomial(4, 2, 2) == 35, || "degree values".into())?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{checked} interior vertex/color degrees exact, {t:.2?}"))
}

fn type_census() -> Outcome {
    let b = ball(3, 2, 3);
    let mut counts = Vec::new();
    for n in 1..=3u32 {
        let c = b.count_types(n).map_err(|e| e.to_string())?.len();
        ensure(c == n as usize + 1, || format!("distance {n}: {c} types, want {}", n + 1))?;
        counts.push(c);
    }
    Ok(format!("types at distance 1,2,3: {counts:?}"))
}

fn exact_commutation() -> Outcome {
    let b = ball(3, 2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let f: Vec<i64> = (0..b.len())
            .map(|i| if b.distance(i) <= 1 { rng.random_range(-50..=50) } else { 0 })
            .collect();
        let run = |first: usize, second: usize| -> Result<Vec<i64>, String> {
            let g = b.apply_hecke(first, &f).map_err(|e| e.to_string())?;
            b.apply_hecke(second, &g).map_err(|e| e.to_string())
        };
        let (a12, a21) = (run(2, 1)?, run(1, 2)?);
        ensure(a12 == a21, || format!("trial {trial}: A1A2f != A2A1f"))?;
    }
    Ok(format!("100 functions on {} vertices, exact", b.len()))
}

fn s2_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tol = 1e-9;
    let mut members = 0;
    for i in 0..1000 {
        let q = [2.0, 3.0, 4.0, 5.0, 7.0, 8.0, 9.0][i % 7];
        let edge = 2.0 * f64::sqrt(q);
        let lam = match i % 4 {
            0 => Complex64::new(rng.random_range(-1.5 * edge..1.5 * edge), 0.0),
            1 => Complex64::new(rng.random_range(-1.5 * edge..1.5 * edge), rng.random_range(-2.0..2.0)),
            2 => {
                let rel: f64 = rng.random_range(-1e-3..1e-3);
                Complex64::new(edge * (1.0 + rel) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
            }
            _ => Complex64::new(rng.random_range(-edge..edge), rng.random_range(-1e-6..1e-6)),
        };
        let oracle = lam.im == 0.0 && lam.norm() <= edge;
        let got = in_sd(2, q, &EigenTuple(vec![lam]), tol).map_err(|e| e.to_string())?.member;
        ensure(got == oracle, || format!("q={q} lambda={lam}: got {got}, oracle {oracle}"))?;
        members += usize::from(got);
    }
    Ok(format!("1000 points agree ({members} members)"))
}

fn match_roots(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut left = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (i, dist) = left
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(dist);
        left.swap_remove(i);
    }
    worst
}

fn satake_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let d = 2 + i % 6;
        let q = [2.0, 3.0, 5.0, 9.0][i % 4];
        let angles: Vec<f64> = (0..d - 1).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let z = SatakeVector::from_angles(&angles);
        let v = in_sd(d, q, &lambda_from_satake(q, &z), 1e-6).map_err(|e| e.to_string())?;
        ensure(v.member, || format!("d={d} q={q}: torus point rejected"))?;
        let dist = match_roots(z.values(), &v.roots);
        ensure(dist <= 1e-8, || format!("d={d} q={q}: roots off by {dist:e}"))?;
        worst = worst.max(dist);
    }
    Ok(format!("500 vectors, worst root error {worst:.1e}"))
}

fn trivial_geometry() -> Outcome {
    for d in 2..=4usize {
        for q in [2u64, 3] {
            let t = &trivial_tuples(d, q as f64, 1).map_err(|e| e.to_string())?[0];
            for k in 1..d {
                let deg = gaussian_binomial(d, k, q);
                ensure(trivial_eigenvalue_exact(d, k, q) == deg, || format!("d={d} q={q} k={k}: exact sum"))?;
                ensure((t.tuple.get(k) - Complex64::new(deg as f64, 0.0)).norm() <= 1e-9 * deg as f64, || {
                    format!("d={d} q={q} k={k}: {} vs {deg}", t.tuple.get(k))
                })?;
            }
            let v = in_sd(d, q as f64, &t.tuple, 1e-6).map_err(|e| e.to_string())?;
            ensure(!v.member, || format!("d={d} q={q}: trivial tuple accepted"))?;
            let want: Vec<Complex64> = (1..=d)
                .map(|i| Complex64::new((q as f64).powf((d as f64 - 2.0 * i as f64 + 1.0) / 2.0), 0.0))
                .collect();
            let dist = match_roots(&want, &v.roots);
            ensure(dist <= 1e-8, || format!("d={d} q={q}: roots off by {dist:e}"))?;
        }
    }
    Ok("degree tuples exact, roots q^((d-2i+1)/2) within 1e-8".into())
}

fn verifier_verdicts() -> Outcome {
    let opts = VerifyOptions::default();
    let timed = |cx: &ColoredComplex| -> Result<(rcx_core::verifier::VerifierReport, Duration), String> {
        let start = Instant::now();
        let r = verify_complex(cx, &opts).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
        Ok((r, t))
    };
    let (k4, _) = timed(&gen_complete(4).unwrap())?;
    ensure(k4.verdict.exit_code() == 0, || format!("K_4: {:?}", k4.verdict))?;
    let (c24, _) = timed(&gen_circulant(24, &[1, 12], Some(2)).unwrap())?;
    ensure(c24.verdict.exit_code() == 2, || format!("C_24(1,12): {:?}", c24.verdict))?;
    // Closed form over s: the largest nontrivial |lambda_s| is at s = 11, 13.
    let want = common::circulant_eigenvalues(24, &[1, 12])
        .into_iter()
        .filter(|x| (x.abs() - 3.0).abs() > 1e-9)
        .map(f64::abs)
        .fold(0.0, f64::max);
    ensure((want - (2.0 * (std::f64::consts::PI / 12.0).cos() + 1.0)).abs() < 1e-12, || "closed form".into())?;
    let off = c24.offender.as_ref().ok_or("no offender")?.tuple.get(1).norm();
    ensure((off - want).abs() <= 1e-9, || format!("offender {off} vs {want}"))?;
    let (c6, _) = timed(&gen_circulant(6, &[1, 3], Some(2)).unwrap())?;
    ensure(c6.verdict == Verdict::Ramanujan, || format!("C_6(1,3): {:?}", c6.verdict))?;
    Ok(format!("K_4 exit 0, C_24(1,12) exit 2 with |offender| = {off:.12}, C_6(1,3) Ramanujan"))
}

fn d2_oracle() -> Outcome {
    let bound = 2.0 * 2f64.sqrt();
    let tol = 1e-6;
    let mut ramanujan = 0;
    for seed in 0..200u64 {
        let n = 2 * (2 + (seed as usize * 7) % 31);
        let cx = random_cubic_multigraph(n, 1000 + seed);
        let oracle = jacobi_eigenvalues(adjacency(&cx))
            .into_iter()
            .filter(|x| (x.abs() - 3.0).abs() > tol)
            .all(|x| x.abs() <= bound + tol);
        let r = verify_complex(&cx, &VerifyOptions { tol, seed, ..Default::default() }).map_err(|e| e.to_string())?;
        ensure(r.ramanujan == oracle, || format!("seed {seed} n={n}: verifier {} oracle {oracle}", r.ramanujan))?;
        ramanujan += usize::from(oracle);
    }
    Ok(format!("200 graphs, 0 disagreements ({ramanujan} Ramanujan)"))
}

fn gap_property() -> Outcome {
    let mut count = 0;
    for d in 3..=8 {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for k in 1..d {
                let b = nontrivial_bound(d, q as f64, k).map_err(|e| e.to_string())?;
                let deg = gaussian_binomial(d, k, q) as f64;
                ensure(b < deg, || format!("d={d} q={q} k={k}: {b} >= {deg}"))?;
                count += 1;
            }
        }
    }
    let s2 = 2f64.sqrt();
    let b = nontrivial_bound(3, 2.0, 1).map_err(|e| e.to_string())?;
    ensure((b - 2.0 * (s2 + 1.0 / s2 + 1.0)).abs() <= 1e-12, || format!("d=3 q=2 k=1: {b}"))?;
    Ok(format!("{count} (d,q,k) triples below the degree; d=3 q=2 bound {b:.12}"))
}

/// Spectral norm of a circulant: the largest modulus of its DFT.
fn circulant_norm(cx: &ColoredComplex, k: usize) -> f64 {
    let n = cx.n();
    let row: Vec<(usize, u32)> = cx.edges(k).filter(|e| e.0 == 0).map(|e| (e.1, e.2)).collect();
    (0..n)
        .map(|s| {
            row.iter()
                .map(|&(j, m)| Complex64::from_polar(m as f64, std::f64::consts::TAU * (s * j) as f64 / n as f64))
                .sum::<Complex64>()
                .norm()
        })
        .fold(0.0, f64::max)
}

fn joint_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut tuples = 0;
    for trial in 0..50u64 {
        let d = rng.random_range(2..=5usize);
        let n = rng.random_range(8..=128usize);
        let cx = circulant_family(d, 2, n, trial);
        let fam = build_operators(&cx);
        ensure(fam.flags().all(), || format!("trial {trial}: structural flags"))?;
        let spec = joint_spectrum(&fam, 1e-8, trial).map_err(|e| e.to_string())?;
        ensure(spec.len() == n, || format!("trial {trial}: {} tuples for n={n}", spec.len()))?;
        let norms: Vec<f64> = (1..d).map(|k| circulant_norm(&cx, k)).collect();
        for s in &spec {
            for k in 1..d {
                // Recompute A_k v - lambda_k v from the edge list.
                let mut av = vec![Complex64::new(0.0, 0.0); n];
                for (u, v, m) in cx.edges(k) {
                    av[u] += s.vector[v] * m as f64;
                }
                let lam = s.tuple.get(k);
                let res = av.iter().zip(&s.vector).map(|(a, x)| (a - x * lam).norm_sqr()).sum::<f64>().sqrt();
                let rel = res / (1.0 + norms[k - 1]);
                ensure(rel <= 1e-8, || format!("trial {trial} k={k}: residual {res:e}"))?;
                worst = worst.max(rel);
                let pair = (s.tuple.get(d - k) - lam.conj()).norm();
                ensure(pair <= 1e-8, || format!("trial {trial} k={k}: conjugate pairing off by {pair:e}"))?;
            }
            tuples += 1;
        }
    }
    Ok(format!("50 families, {tuples} tuples, worst relative residual {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("building regularity", building_regularity),
        ("type census", type_census),
        ("exact commutation", exact_commutation),
        ("S_2 oracle", s2_oracle),
        ("Satake round trip", satake_round_trip),
        ("trivial-tuple geometry", trivial_geometry),
        ("verifier verdicts", verifier_verdicts),
        ("d=2 oracle equivalence", d2_oracle),
        ("gap property", gap_property),
        ("joint-spectrum residuals", joint_residuals),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
