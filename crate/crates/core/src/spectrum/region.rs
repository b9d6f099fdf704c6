//! The region of the complex plane containing the `k`-th coordinate of the
//! simultaneous spectrum, bounded by the curve
//! `theta -> q^{k(d-k)/2} sigma_k(e^{i theta}, ..., e^{i theta}, e^{-(d-1) i theta})`.
//!
//! For `d >= 5` and `2 <= k <= d-2` the sampled curve crosses itself, so the
//! region is taken to be the curve together with every bounded component of
//! its complement: the polygon bounding the unbounded face of the sampled
//! curve's planar arrangement.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_REGION_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub theta: f64,
    pub value: Complex64,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_color(d: usize, k: usize) -> Result<()> {
    if d < 2 || k == 0 || k >= d {
        return Err(Error::ColorOutOfRange { k, max: d.saturating_sub(1) });
    }
    Ok(())
}

/// Closed form of the boundary curve at `theta`.
fn curve_point(d: usize, q: f64, k: usize, theta: f64) -> Complex64 {
    let scale = q.powf((k * (d - k)) as f64 / 2.0);
    let a = binomial(d - 1, k) * Complex64::from_polar(1.0, k as f64 * theta);
    let b = binomial(d - 1, k - 1) * Complex64::from_polar(1.0, (k as f64 - d as f64) * theta);
    (a + b) * scale
}

/// `m` samples of the boundary curve at `theta_j = 2 pi j / m`.
pub fn boundary_curve(d: usize, q: f64, k: usize, m: usize) -> Result<Vec<CurveSample>> {
    check_color(d, k)?;
    if m < 16 {
        return Err(Error::InvalidArgument(format!("need at least 16 samples, got {m}")));
    }
    Ok((0..m)
        .map(|j| {
            let theta = TAU * j as f64 / m as f64;
            CurveSample { theta, value: curve_point(d, q, k, theta) }
        })
        .collect())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
enum Shape {
    /// `[-radius, radius]` on the real axis.
    Interval { radius: f64 },
    Polygon { outer: Vec<Complex64> },
}

/// Precomputed membership region for one color `k`.
#[derive(Clone, Debug)]
pub struct SdkRegion {
    d: usize,
    q: f64,
    k: usize,
    shape: Shape,
    simple: bool,
    sag: f64,
}

impl SdkRegion {
    pub fn new(d: usize, q: f64, k: usize, samples: usize) -> Result<Self> {
        check_color(d, k)?;
        if samples < 1024 {
            return Err(Error::InvalidArgument(format!(
                "need at least 1024 samples, got {samples}"
            )));
        }
        if 2 * k == d {
            let radius = q.powf((k * k) as f64 / 2.0) * 2.0 * binomial(d - 1, k);
            return Ok(Self { d, q, k, shape: Shape::Interval { radius }, simple: true, sag: 0.0 });
        }
        // One period of the curve.
        let period = TAU / gcd(k, d) as f64;
        let pts: Vec<Complex64> = (0..samples)
            .map(|j| curve_point(d, q, k, period * j as f64 / samples as f64))
            .collect();
        let n = pts.len();
        let sag = (0..n)
            .map(|j| (pts[(j + n - 1) % n] - 2.0 * pts[j] + pts[(j + 1) % n]).norm() / 4.0)
            .fold(0.0, f64::max);
        let crossings = self_intersections(&pts);
        let simple = crossings.is_empty();
        let outer = if simple { pts } else { outer_boundary(&pts, &crossings) };
        Ok(Self { d, q, k, shape: Shape::Polygon { outer }, simple, sag })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Whether the sampled curve has no self-intersections.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// Upper bound on the distance between the curve and its sampled polygon.
    pub fn chord_sag(&self) -> f64 {
        self.sag
    }

    /// Vertices of the boundary polygon (empty for an interval region).
    pub fn boundary(&self) -> &[Complex64] {
        match &self.shape {
            Shape::Interval { .. } => &[],
            Shape::Polygon { outer } => outer,
        }
    }

    pub fn contains(&self, lambda: Complex64, tol: f64) -> bool {
        match &self.shape {
            Shape::Interval { radius } => lambda.im.abs() <= tol && lambda.re.abs() <= radius + tol,
            Shape::Polygon { outer } => {
                winding_number(outer, lambda) != 0
                    || polygon_distance(outer, lambda) <= tol + self.sag
            }
        }
    }
}

/// One-shot membership test; build an [`SdkRegion`] to test many points.
pub fn in_sdk(d: usize, q: f64, k: usize, lambda: Complex64, m: usize, tol: f64) -> Result<bool> {
    Ok(SdkRegion::new(d, q, k, m)?.contains(lambda, tol))
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn winding_number(poly: &[Complex64], p: Complex64) -> i64 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let side = cross(b - a, p - a);
        if a.im <= p.im {
            if b.im > p.im && side > 0.0 {
                w += 1;
            }
        } else if b.im <= p.im && side < 0.0 {
            w -= 1;
        }
    }
    w
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 { 0.0 } else { ((p - a).re * ab.re + (p - a).im * ab.im) / len2 };
    (a + ab * t.clamp(0.0, 1.0) - p).norm()
}

fn polygon_distance(poly: &[Complex64], p: Complex64) -> f64 {
    let n = poly.len();
    (0..n).map(|i| segment_distance(poly[i], poly[(i + 1) % n], p)).fold(f64::INFINITY, f64::min)
}

/// A proper crossing of segments `i` and `j` at parameters `s` and `t`.
#[derive(Clone, Copy, Debug)]
struct Crossing {
    i: usize,
    j: usize,
    s: f64,
    t: f64,
    at: Complex64,
}

/// Crossings among the closed polyline's segments, adjacent pairs excluded.
fn self_intersections(pts: &[Complex64]) -> Vec<Crossing> {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| seg(i).0.re.min(seg(i).1.re);
    let xmax = |i: usize| seg(i).0.re.max(seg(i).1.re);
    order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)));
    let mut out = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let (a0, a1) = seg(i);
        let (ylo, yhi) = (a0.im.min(a1.im), a0.im.max(a1.im));
        for &j in &order[pos + 1..] {
            if xmin(j) > xmax(i) {
                break;
            }
            if (i + 1) % n == j || (j + 1) % n == i {
                continue;
            }
            let (b0, b1) = seg(j);
            if b0.im.max(b1.im) < ylo || b0.im.min(b1.im) > yhi {
                continue;
            }
            let r = a1 - a0;
            let s_dir = b1 - b0;
            let denom = cross(r, s_dir);
            if denom == 0.0 {
                continue;
            }
            let s = cross(b0 - a0, s_dir) / denom;
            let t = cross(b0 - a0, r) / denom;
            if (0.0..1.0).contains(&s) && (0.0..1.0).contains(&t) {
                let (i, j, s, t) = if i < j { (i, j, s, t) } else { (j, i, t, s) };
                out.push(Crossing { i, j, s, t, at: a0 + r * s });
            }
        }
    }
    out
}

/// Traces the unbounded face of the arrangement of the closed polyline.
fn outer_boundary(pts: &[Complex64], crossings: &[Crossing]) -> Vec<Complex64> {
    let n = pts.len();
    // Nodes: sample points, then one per crossing.
    let mut pos: Vec<Complex64> = pts.to_vec();
    let mut on_segment: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for c in crossings {
        let id = pos.len();
        pos.push(c.at);
        on_segment[c.i].push((c.s, id));
        on_segment[c.j].push((c.t, id));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); pos.len()];
    for (i, cuts) in on_segment.iter_mut().enumerate() {
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut chain = vec![i];
        for &(s, id) in cuts.iter() {
            // A crossing at a segment's start coincides with the sample point.
            if s <= 0.0 {
                pos[id] = pts[i];
            }
            chain.push(id);
        }
        chain.push((i + 1) % n);
        for w in chain.windows(2) {
            if w[0] != w[1] && pos[w[0]] != pos[w[1]] {
                adj[w[0]].push(w[1]);
                adj[w[1]].push(w[0]);
            }
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }

    let start = (0..pos.len())
        .filter(|&v| !adj[v].is_empty())
        .min_by(|&a, &b| pos[a].re.total_cmp(&pos[b].re).then(pos[a].im.total_cmp(&pos[b].im)))
        .expect("non-empty curve");
    let ccw_from = |back: f64, v: usize, w: usize| {
        let ang = (pos[w] - pos[v]).arg();
        let mut delta = (ang - back).rem_euclid(TAU);
        if delta <= 1e-15 {
            delta = TAU;
        }
        delta
    };
    let next = |back: f64, v: usize| {
        adj[v]
            .iter()
            .copied()
            .min_by(|&a, &b| ccw_from(back, v, a).total_cmp(&ccw_from(back, v, b)))
            .expect("connected node")
    };

    let first = next(std::f64::consts::PI, start);
    let mut outer = vec![pos[start]];
    let (mut prev, mut cur) = (start, first);
    let limit = 4 * adj.iter().map(Vec::len).sum::<usize>() + 8;
    for _ in 0..limit {
        if prev == start && cur == first && outer.len() > 1 {
            outer.pop();
            return outer;
        }
        outer.push(pos[cur]);
        let back = (pos[prev] - pos[cur]).arg();
        let nxt = next(back, cur);
        prev = cur;
        cur = nxt;
    }
    // Tracing did not close; fall back to the full polyline.
    pts.to_vec()
}
