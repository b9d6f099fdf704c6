//! Balls of the Bruhat-Tits building `B_d(F_q((t)))` around the standard
//! lattice.
//!
//! A vertex is the homothety class of a full-rank `O`-lattice. It is stored
//! through the Hermite canonical form of a basis matrix (columns span the
//! lattice), scaled by a power of `t` so that the lattice lies in `O^d` but
//! not in `t O^d`. The color of a vertex is the `t`-valuation of the
//! determinant modulo `d`.
//!
//! The color-`k` neighbors of `g GL_d(O)` are `g m GL_d(O)` for `m` running over
//! the upper-triangular coset representatives returned by [`omega_matrices`].

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldElem, FieldParams, LocalPoly, OMatrix};
use crate::error::{Error, Result};
use crate::spectrum::gaussian_binomial;

/// Default cap on the number of vertices in a ball.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingParams {
    pub d: usize,
    pub field: FieldParams,
}

impl BuildingParams {
    pub fn new(d: usize, field: FieldParams) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
        }
        Ok(Self { d, field })
    }
}

/// The double-coset type `(l_1 >= ... >= l_d = 0)` of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexType(pub Vec<u32>);

impl VertexType {
    /// Graph distance from the standard vertex.
    pub fn distance(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }
}

/// A building vertex: normalized Hermite representative of a lattice class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeClass {
    rep: OMatrix,
    exps: Vec<u32>,
}

impl LatticeClass {
    /// Class of the lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &OMatrix, f: &Field) -> Result<Self> {
        let h = m.hermite_canonical(f)?;
        let shift = h.min_valuation().unwrap_or(0);
        let rep = if shift > 0 { h.div_t_pow(shift) } else { h };
        let exps = rep.diag_exponents();
        Ok(Self { rep, exps })
    }

    pub fn rep(&self) -> &OMatrix {
        &self.rep
    }

    /// Diagonal exponents of the Hermite representative.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// `log_q [L_0 : L] mod d` for the normalized representative `L`.
    pub fn color(&self) -> usize {
        let d = self.exps.len();
        self.exps.iter().map(|&e| e as usize).sum::<usize>() % d
    }
}

/// Upper-triangular representatives of the color-`k` neighbors of the
/// standard vertex: one family per `k`-subset `C` of `{0..d}`, with `t` on
/// the diagonal at `C`, `1` elsewhere, and an arbitrary constant at each
/// position `(i, j)`, `i < j`, `i` in `C`, `j` not in `C`.
pub fn omega_matrices(d: usize, k: usize, f: &Field) -> Result<Vec<OMatrix>> {
    if k == 0 || k >= d {
        return Err(Error::ColorOutOfRange { k, max: d.saturating_sub(1) });
    }
    let mut out = Vec::new();
    for subset in k_subsets(d, k) {
        let in_c: Vec<bool> = (0..d).map(|i| subset.contains(&i)).collect();
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .filter(|&(i, j)| in_c[i] && !in_c[j])
            .collect();
        let mut base = OMatrix::zero(d);
        for i in 0..d {
            base.set(i, i, LocalPoly::t_pow(usize::from(in_c[i])));
        }
        let q = f.q() as u64;
        let count = q.pow(free.len() as u32);
        for idx in 0..count {
            let mut m = base.clone();
            let mut x = idx;
            for &(i, j) in &free {
                m.set(i, j, LocalPoly::constant(FieldElem((x % q) as u32)));
                x /= q;
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Lexicographically ordered `k`-subsets of `{0..n}`.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

/// The building together with its residue field and cached coset matrices.
#[derive(Clone, Debug)]
pub struct Building {
    params: BuildingParams,
    field: Field,
    omegas: Vec<Vec<OMatrix>>,
}

impl Building {
    pub fn new(params: BuildingParams) -> Result<Self> {
        let field = Field::new(params.field.clone());
        let omegas = (1..params.d)
            .map(|k| omega_matrices(params.d, k, &field))
            .collect::<Result<_>>()?;
        Ok(Self { params, field, omegas })
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> &BuildingParams {
        &self.params
    }

    /// The class of the standard lattice `O^d`.
    pub fn base_vertex(&self) -> LatticeClass {
        let rep = OMatrix::identity(self.params.d);
        let exps = vec![0; self.params.d];
        LatticeClass { rep, exps }
    }

    pub fn omega(&self, k: usize) -> Result<&[OMatrix]> {
        self.check_color(k)?;
        Ok(&self.omegas[k - 1])
    }

    fn check_color(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.params.d {
            return Err(Error::ColorOutOfRange { k, max: self.params.d - 1 });
        }
        Ok(())
    }

    /// Color-`k` neighbors of `v`, one per coset matrix (with multiplicity).
    pub fn neighbors(&self, v: &LatticeClass, k: usize) -> Result<Vec<LatticeClass>> {
        self.omega(k)?
            .iter()
            .map(|m| LatticeClass::from_matrix(&v.rep.mul(m, &self.field), &self.field))
            .collect()
    }

    pub fn vertex_type(&self, v: &LatticeClass) -> VertexType {
        let mut ell = v
            .rep
            .elementary_divisors(&self.field)
            .expect("vertex representatives are nonsingular");
        let last = *ell.last().expect("d >= 2");
        for x in ell.iter_mut() {
            *x -= last;
        }
        VertexType(ell)
    }

    pub fn distance(&self, v: &LatticeClass) -> u32 {
        self.vertex_type(v).distance()
    }

    /// Exact vertex count of the radius-`r` ball, as a float.
    pub fn ball_size_estimate(&self, r: u32) -> f64 {
        (0..=r)
            .flat_map(|n| types_at_distance(self.params.d, n))
            .map(|t| type_class_size(self.q(), &t))
            .sum()
    }

    pub fn build_ball(&self, radius: u32, cap: usize) -> Result<BuildingBall> {
        let estimate = self.ball_size_estimate(radius);
        if estimate > cap as f64 {
            return Err(Error::CapExceeded { estimate, cap });
        }
        let d = self.params.d;
        let base = self.base_vertex();
        let mut ball = BuildingBall {
            params: self.params.clone(),
            radius,
            index: HashMap::from([(base.rep.clone(), 0)]),
            colors: vec![0],
            types: vec![VertexType(vec![0; d])],
            vertices: vec![base],
            edges: vec![Vec::new(); d - 1],
        };
        let mut next = 0;
        while next < ball.vertices.len() {
            let src = next;
            next += 1;
            if ball.types[src].distance() >= radius {
                continue;
            }
            for k in 1..d {
                let nbrs = self.neighbors(&ball.vertices[src], k)?;
                let mut targets = Vec::with_capacity(nbrs.len());
                for nb in nbrs {
                    let idx = match ball.index.get(&nb.rep) {
                        Some(&i) => i,
                        None => {
                            let ty = self.vertex_type(&nb);
                            debug_assert!(ty.distance() <= radius);
                            let i = ball.vertices.len();
                            ball.index.insert(nb.rep.clone(), i);
                            ball.colors.push(nb.color());
                            ball.types.push(ty);
                            ball.vertices.push(nb);
                            i
                        }
                    };
                    targets.push(idx);
                }
                targets.sort_unstable();
                if targets.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::DuplicateNeighbor(src));
                }
                ball.edges[k - 1].extend(targets.into_iter().map(|t| (src as u32, t as u32, 1)));
            }
        }
        Ok(ball)
    }
}

/// Weakly decreasing tuples `(n = l_1 >= ... >= l_d = 0)`.
pub fn types_at_distance(d: usize, n: u32) -> Vec<VertexType> {
    fn rec(prefix: &mut Vec<u32>, remaining: usize, max: u32, out: &mut Vec<VertexType>) {
        if remaining == 0 {
            let mut t = prefix.clone();
            t.push(0);
            out.push(VertexType(t));
            return;
        }
        for x in (0..=max).rev() {
            prefix.push(x);
            rec(prefix, remaining - 1, x, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![VertexType(vec![0; d])];
    }
    let mut out = Vec::new();
    let mut prefix = vec![n];
    rec(&mut prefix, d - 2, n, &mut out);
    out
}

/// Number of vertices of a given type,
/// `q^{sum_{i<j} (l_i - l_j)} [d]!_{1/q} / prod_m [m]!_{1/q}` where `m` runs
/// over the multiplicities of the distinct parts.
pub fn type_class_size(q: u64, ty: &VertexType) -> f64 {
    let x = 1.0 / q as f64;
    let qfact = |m: usize| -> f64 {
        (1..=m).map(|i| (1..i).map(|j| x.powi(j as i32)).sum::<f64>() + 1.0).product()
    };
    let ell = &ty.0;
    let d = ell.len();
    let exponent: u64 = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .map(|(i, j)| (ell[i] - ell[j]) as u64)
        .sum();
    let mut denom = 1.0;
    let mut i = 0;
    while i < d {
        let j = (i..d).find(|&j| ell[j] != ell[i]).unwrap_or(d);
        denom *= qfact(j - i);
        i = j;
    }
    (q as f64).powi(exponent as i32) * qfact(d) / denom
}

/// A finite ball of the building with colored directed adjacency.
///
/// Vertex `0` is the standard vertex and indices follow BFS discovery order.
/// Edges are recorded for every source at distance below the radius.
#[derive(Clone, Debug)]
pub struct BuildingBall {
    params: BuildingParams,
    radius: u32,
    vertices: Vec<LatticeClass>,
    index: HashMap<OMatrix, usize>,
    colors: Vec<usize>,
    types: Vec<VertexType>,
    /// `edges[k - 1]` holds `(source, target, multiplicity)` for color `k`.
    edges: Vec<Vec<(u32, u32, u32)>>,
}

impl BuildingBall {
    pub fn params(&self) -> &BuildingParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &LatticeClass {
        &self.vertices[i]
    }

    pub fn index_of(&self, rep: &OMatrix) -> Option<usize> {
        self.index.get(rep).copied()
    }

    pub fn color(&self, i: usize) -> usize {
        self.colors[i]
    }

    pub fn vertex_type(&self, i: usize) -> &VertexType {
        &self.types[i]
    }

    pub fn distance(&self, i: usize) -> u32 {
        self.types[i].distance()
    }

    /// Whether the full neighborhood of `i` was recorded.
    pub fn is_interior(&self, i: usize) -> bool {
        self.distance(i) < self.radius
    }

    pub fn edges(&self, k: usize) -> &[(u32, u32, u32)] {
        &self.edges[k - 1]
    }

    /// Out-degree per vertex for color `k`, counted with multiplicity.
    pub fn out_degrees(&self, k: usize) -> Vec<u64> {
        let mut deg = vec![0u64; self.len()];
        for &(s, _, m) in self.edges(k) {
            deg[s as usize] += m as u64;
        }
        deg
    }

    /// Vertex counts per type at distance `n`.
    pub fn count_types(&self, n: u32) -> Result<BTreeMap<VertexType, usize>> {
        if n > self.radius {
            return Err(Error::BeyondRadius { n, radius: self.radius });
        }
        let mut out = BTreeMap::new();
        for ty in self.types.iter().filter(|t| t.distance() == n) {
            *out.entry(ty.clone()).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// `(A_k f)(x) = sum over color-k edges x -> y of f(y)`, evaluated on
    /// the whole ball. Incoming color-`k` edges of `y` are read off the
    /// recorded color-`(d-k)` out-edges of `y`, so `f` must vanish outside
    /// the interior.
    pub fn apply_hecke(&self, k: usize, f: &[i64]) -> Result<Vec<i64>> {
        let d = self.d();
        if k == 0 || k >= d {
            return Err(Error::ColorOutOfRange { k, max: d - 1 });
        }
        if f.len() != self.len() {
            return Err(Error::Dimension(format!(
                "function has {} values for {} vertices",
                f.len(),
                self.len()
            )));
        }
        if let Some(bad) = (0..self.len()).find(|&i| f[i] != 0 && !self.is_interior(i)) {
            return Err(Error::SupportOutsideInterior(bad));
        }
        let mut out = vec![0i64; self.len()];
        for &(y, x, m) in self.edges(d - k) {
            out[x as usize] += f[y as usize] * m as i64;
        }
        Ok(out)
    }

    /// Serializable summary with polynomial-string representatives.
    pub fn to_document(&self) -> BallDocument {
        let field = Field::new(self.params.field.clone());
        BallDocument {
            d: self.params.d,
            q: self.params.field.q(),
            p: self.params.field.p,
            n: self.params.field.n,
            modulus: self.params.field.modulus.clone(),
            radius: self.radius,
            vertex_count: self.len(),
            degrees: (1..self.params.d)
                .map(|k| gaussian_binomial(self.params.d, k, self.params.field.q()))
                .collect(),
            vertices: (0..self.len())
                .map(|i| VertexRecord {
                    index: i,
                    color: self.colors[i],
                    vertex_type: self.types[i].0.clone(),
                    distance: self.distance(i),
                    rep: self.vertices[i].rep.format_rows(&field),
                })
                .collect(),
            edges: (1..self.params.d)
                .map(|k| ColorEdges { color: k, edges: self.edges(k).to_vec() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallDocument {
    pub d: usize,
    pub q: u64,
    pub p: u32,
    pub n: u32,
    pub modulus: Option<Vec<u32>>,
    pub radius: u32,
    pub vertex_count: usize,
    /// Gaussian binomial `[d, k]_q` for `k = 1..d`.
    pub degrees: Vec<u128>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<ColorEdges>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexRecord {
    pub index: usize,
    pub color: usize,
    #[serde(rename = "type")]
    pub vertex_type: Vec<u32>,
    pub distance: u32,
    pub rep: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorEdges {
    pub color: usize,
    pub edges: Vec<(u32, u32, u32)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn building(d: usize, q: u64) -> Building {
        Building::new(BuildingParams::new(d, FieldParams::for_q(q).unwrap()).unwrap()).unwrap()
    }

    fn class_of(b: &Building, rows: &[&[i64]]) -> LatticeClass {
        let f = b.field();
        let entries = rows
            .iter()
            .map(|c| LocalPoly::new(c.iter().map(|&x| f.from_int(x)).collect()))
            .collect();
        LatticeClass::from_matrix(&OMatrix::new(b.d(), entries).unwrap(), f).unwrap()
    }

    #[test]
    fn base_vertex_is_identity() {
        for (d, q) in [(2, 2), (3, 2), (4, 3)] {
            let b = building(d, q);
            let v = b.base_vertex();
            assert_eq!(v.rep(), &OMatrix::identity(d));
            assert_eq!(v.color(), 0);
            assert_eq!(b.vertex_type(&v), VertexType(vec![0; d]));
            assert_eq!(b.distance(&v), 0);
        }
    }

    #[test]
    fn omega_d2_q2() {
        let b = building(2, 2);
        let f = b.field();
        let got = b.omega(1).unwrap();
        let want: Vec<OMatrix> = [
            [&[0, 1][..], &[][..], &[][..], &[1][..]],
            [&[0, 1], &[1], &[], &[1]],
            [&[1], &[], &[], &[0, 1]],
        ]
        .iter()
        .map(|rows| {
            OMatrix::new(
                2,
                rows.iter()
                    .map(|c| LocalPoly::new(c.iter().map(|&x| f.from_int(x)).collect()))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
        assert_eq!(got, want.as_slice());
    }

    #[test]
    fn omega_counts() {
        // Per-subset family sizes for d = 4, k = 2, q = 2 follow the six
        // starred patterns: C = {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}.
        let f = Field::for_q(2).unwrap();
        let all = omega_matrices(4, 2, &f).unwrap();
        assert_eq!(all.len(), 35);
        let sizes: Vec<usize> = k_subsets(4, 2)
            .iter()
            .map(|c| {
                all.iter()
                    .filter(|m| (0..4).all(|i| (m.get(i, i).degree() == Some(1)) == c.contains(&i)))
                    .count()
            })
            .collect();
        assert_eq!(sizes, vec![16, 8, 4, 4, 2, 1]);

        let f3 = Field::for_q(3).unwrap();
        assert_eq!(omega_matrices(3, 2, &f3).unwrap().len(), 13);
        assert!(matches!(omega_matrices(3, 3, &f3), Err(Error::ColorOutOfRange { .. })));
        assert!(matches!(omega_matrices(3, 0, &f3), Err(Error::ColorOutOfRange { .. })));
    }

    #[test]
    fn base_neighbors() {
        let b = building(2, 2);
        let nb = b.neighbors(&b.base_vertex(), 1).unwrap();
        assert_eq!(nb.len(), 3);
        let reps: Vec<&OMatrix> = nb.iter().map(|v| v.rep()).collect();
        assert_eq!(reps, b.omega(1).unwrap().iter().collect::<Vec<_>>());

        let b = building(3, 2);
        let nb = b.neighbors(&b.base_vertex(), 1).unwrap();
        assert_eq!(nb.len(), 7);
        let mut reps: Vec<_> = nb.iter().map(|v| v.rep().clone()).collect();
        reps.sort();
        reps.dedup();
        assert_eq!(reps.len(), 7);
        assert!(nb.iter().all(|v| v.color() == 1));
    }

    #[test]
    fn neighbor_of_diag_returns_to_base() {
        let b = building(3, 2);
        let v = class_of(&b, &[&[0, 1], &[], &[], &[], &[1], &[], &[], &[], &[1]]);
        assert_eq!(v.color(), 1);
        let nb = b.neighbors(&v, 2).unwrap();
        assert_eq!(nb.len(), 7);
        assert!(nb.contains(&b.base_vertex()));
        assert!(nb.iter().all(|w| w.color() == 0));
    }

    #[test]
    fn homothety_normalization_keeps_unit_entries() {
        // [[t^2, 1], [0, t]] has e = (2, 1) but is not divisible by t.
        let b = building(2, 2);
        let v = class_of(&b, &[&[0, 0, 1], &[1], &[], &[0, 1]]);
        assert_eq!(v.exponents(), &[2, 1]);
        assert_eq!(b.vertex_type(&v), VertexType(vec![3, 0]));
        let w = class_of(&b, &[&[0, 0, 1], &[], &[], &[0, 1]]);
        assert_eq!(w.exponents(), &[1, 0]);
    }

    #[test]
    fn types_of_small_vertices() {
        let b = building(3, 2);
        let v = class_of(&b, &[&[0, 0, 1], &[], &[], &[], &[0, 1], &[], &[], &[], &[1]]);
        assert_eq!(b.vertex_type(&v), VertexType(vec![2, 1, 0]));
        assert_eq!(b.distance(&v), 2);

        let b = building(2, 2);
        for nb in b.neighbors(&b.base_vertex(), 1).unwrap() {
            assert_eq!(b.vertex_type(&nb), VertexType(vec![1, 0]));
        }
    }

    #[test]
    fn small_balls() {
        let b = building(2, 2);
        assert_eq!(b.build_ball(0, DEFAULT_VERTEX_CAP).unwrap().len(), 1);
        assert_eq!(b.build_ball(2, DEFAULT_VERTEX_CAP).unwrap().len(), 10);
        let b = building(3, 2);
        let ball = b.build_ball(1, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(ball.len(), 15);
        let by_color = |c| (0..ball.len()).filter(|&i| ball.color(i) == c).count();
        assert_eq!((by_color(1), by_color(2)), (7, 7));
    }

    #[test]
    fn cap_is_enforced() {
        let b = building(3, 3);
        match b.build_ball(3, 100) {
            Err(Error::CapExceeded { estimate, cap }) => {
                assert_eq!(cap, 100);
                assert!(estimate > 100.0);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn type_enumeration_counts() {
        assert_eq!(
            types_at_distance(3, 1),
            vec![VertexType(vec![1, 1, 0]), VertexType(vec![1, 0, 0])]
        );
        assert_eq!(types_at_distance(3, 2).len(), 3);
        assert_eq!(types_at_distance(2, 3), vec![VertexType(vec![3, 0])]);
        assert_eq!(types_at_distance(4, 0), vec![VertexType(vec![0; 4])]);
    }

    #[test]
    fn count_types_beyond_radius() {
        let b = building(2, 2);
        let ball = b.build_ball(1, DEFAULT_VERTEX_CAP).unwrap();
        assert!(matches!(ball.count_types(2), Err(Error::BeyondRadius { .. })));
    }

    #[test]
    fn tree_type_counts() {
        let b = building(2, 2);
        let ball = b.build_ball(3, DEFAULT_VERTEX_CAP).unwrap();
        let c = ball.count_types(3).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&VertexType(vec![3, 0])], 12);
    }

    #[test]
    fn apply_hecke_rejects_boundary_support() {
        let b = building(2, 3);
        let ball = b.build_ball(1, DEFAULT_VERTEX_CAP).unwrap();
        let mut f = vec![0; ball.len()];
        f[1] = 1;
        assert!(matches!(ball.apply_hecke(1, &f), Err(Error::SupportOutsideInterior(1))));
        f[1] = 0;
        f[0] = 2;
        let g = ball.apply_hecke(1, &f).unwrap();
        assert_eq!(g[0], 0);
        assert!(g[1..].iter().all(|&x| x == 2));
    }
}
