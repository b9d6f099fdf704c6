//! Finite colored complexes and their `.rcx` text format.
//!
//! ```text
//! rcx 1
//! d 3
//! q 2
//! n 27
//! l 0 origin
//! e <k> <u> <v> [mult]
//! ```
//!
//! Lines starting with `#` are comments. `l` lines attach an optional label
//! to a vertex.

mod generators;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generators::{gen_cayley, gen_circulant, gen_complete, gen_voltage_cover, Voltage};

use crate::error::{Error, Result};

/// How the `A_{d-k} = A_k^*` pairing is enforced when loading.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// Add missing reversed edges: `M_k(u,v) := max(M_k(u,v), M_{d-k}(v,u))`.
    #[default]
    AutoComplete,
    /// Reject files whose edges are not reverse-closed.
    Strict,
    /// Keep the edges exactly as written.
    AsIs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub closure: Closure,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: expected header `rcx 1`")]
    Header { line: usize },
    #[error("line {line}: missing `{field}` line")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: bad number `{token}`")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: {msg}")]
    BadParameter { line: usize, msg: String },
    #[error("line {line}: color must be in 1..d-1 (got {k})")]
    Color { line: usize, k: usize },
    #[error("line {line}: vertex {v} out of range 0..{n}")]
    Vertex { line: usize, v: usize, n: usize },
    #[error("line {line}: multiplicity must be at least 1")]
    Multiplicity { line: usize },
    #[error("line {line}: unrecognized line `{text}`")]
    Unrecognized { line: usize, text: String },
    #[error("line {line}: edge {u}->{v} of color {k} has no reversed color-{rk} partner")]
    ReverseClosure { line: usize, k: usize, u: usize, v: usize, rk: usize },
}

impl FormatError {
    /// Stable short identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Header { .. } => "E_HEADER",
            Self::MissingField { .. } => "E_MISSING",
            Self::BadNumber { .. } => "E_NUMBER",
            Self::BadParameter { .. } => "E_PARAM",
            Self::Color { .. } => "E_COLOR",
            Self::Vertex { .. } => "E_VERTEX",
            Self::Multiplicity { .. } => "E_MULT",
            Self::Unrecognized { .. } => "E_SYNTAX",
            Self::ReverseClosure { .. } => "E_CLOSURE",
        }
    }

    pub fn line(&self) -> usize {
        match self {
            Self::Header { line }
            | Self::MissingField { line, .. }
            | Self::BadNumber { line, .. }
            | Self::BadParameter { line, .. }
            | Self::Color { line, .. }
            | Self::Vertex { line, .. }
            | Self::Multiplicity { line }
            | Self::Unrecognized { line, .. }
            | Self::ReverseClosure { line, .. } => *line,
        }
    }
}

/// A directed colored edge with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub k: usize,
    pub u: usize,
    pub v: usize,
    pub mult: u32,
}

/// A finite complex with colored directed edges, the input of the verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredComplex {
    d: usize,
    q: u64,
    n: usize,
    /// `edges[k-1][(u, v)]` is the multiplicity of `u -> v` in color `k`.
    edges: Vec<BTreeMap<(usize, usize), u32>>,
    labels: BTreeMap<usize, String>,
}

impl ColoredComplex {
    pub fn new(d: usize, q: u64, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
        }
        if q < 1 {
            return Err(Error::InvalidArgument("q must be at least 1".into()));
        }
        Ok(Self { d, q, n, edges: vec![BTreeMap::new(); d - 1], labels: BTreeMap::new() })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, k: usize, u: usize, v: usize) -> Result<()> {
        if k == 0 || k >= self.d {
            return Err(Error::ColorOutOfRange { k, max: self.d - 1 });
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge {u}->{v} out of range for {} vertices",
                self.n
            )));
        }
        Ok(())
    }

    /// Adds `mult` copies of `u -> v` in color `k`.
    pub fn add_edge(&mut self, k: usize, u: usize, v: usize, mult: u32) -> Result<()> {
        self.check(k, u, v)?;
        if mult > 0 {
            *self.edges[k - 1].entry((u, v)).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn multiplicity(&self, k: usize, u: usize, v: usize) -> u32 {
        self.edges.get(k.wrapping_sub(1)).and_then(|m| m.get(&(u, v)).copied()).unwrap_or(0)
    }

    /// Edges of color `k` as `(u, v, mult)`, sorted.
    pub fn edges(&self, k: usize) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges[k - 1].iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn all_edges(&self) -> Vec<Edge> {
        (1..self.d)
            .flat_map(|k| self.edges(k).map(move |(u, v, mult)| Edge { k, u, v, mult }))
            .collect()
    }

    pub fn edge_count(&self, k: usize) -> u64 {
        self.edges(k).map(|e| e.2 as u64).sum()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        self.labels.insert(v, label.into());
        Ok(())
    }

    /// Color-`k` out-degree of every vertex, with multiplicity.
    pub fn out_degrees(&self, k: usize) -> Vec<u64> {
        let mut deg = vec![0; self.n];
        for (u, _, m) in self.edges(k) {
            deg[u] += m as u64;
        }
        deg
    }

    /// The first edge (in sorted order) lacking its reversed partner.
    pub fn reverse_closure_violation(&self) -> Option<Edge> {
        self.all_edges()
            .into_iter()
            .find(|e| self.multiplicity(self.d - e.k, e.v, e.u) != e.mult)
    }

    pub fn is_reverse_closed(&self) -> bool {
        self.reverse_closure_violation().is_none()
    }

    /// Raises multiplicities so that `M_{d-k}(v,u) = M_k(u,v)`.
    pub fn complete_reverse(&mut self) {
        let d = self.d;
        let mut merged = self.edges.clone();
        for k in 1..d {
            for (&(u, v), &m) in &self.edges[k - 1] {
                let slot = merged[d - k - 1].entry((v, u)).or_insert(0);
                *slot = (*slot).max(m);
            }
        }
        self.edges = merged;
    }

    /// Number of connected components of the underlying undirected graph.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.all_edges() {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
        (0..self.n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Renames vertex `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
        }
        let mut out = Self::new(self.d, self.q, self.n)?;
        for e in self.all_edges() {
            out.add_edge(e.k, perm[e.u], perm[e.v], e.mult)?;
        }
        for (&v, l) in &self.labels {
            out.labels.insert(perm[v], l.clone());
        }
        Ok(out)
    }

    /// Canonical `.rcx` text: edges sorted, multiplicity omitted when 1.
    pub fn to_rcx_string(&self) -> String {
        let mut s = format!("rcx 1\nd {}\nq {}\nn {}\n", self.d, self.q, self.n);
        for (v, l) in &self.labels {
            let _ = writeln!(s, "l {v} {l}");
        }
        for e in self.all_edges() {
            if e.mult == 1 {
                let _ = writeln!(s, "e {} {} {}", e.k, e.u, e.v);
            } else {
                let _ = writeln!(s, "e {} {} {} {}", e.k, e.u, e.v, e.mult);
            }
        }
        s
    }

    pub fn parse(text: &str, opts: LoadOptions) -> std::result::Result<Self, FormatError> {
        parse_rcx(text, opts)
    }

    pub fn load(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text, opts)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_rcx_string())?;
        Ok(())
    }
}

pub(crate) fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn parse_rcx(text: &str, opts: LoadOptions) -> std::result::Result<ColoredComplex, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let last_line = text.lines().count().max(1);

    let num = |line: usize, tok: &str| -> std::result::Result<usize, FormatError> {
        tok.parse::<usize>().map_err(|_| FormatError::BadNumber { line, token: tok.to_string() })
    };
    let mut header_field = |field: &'static str| -> std::result::Result<(usize, usize), FormatError> {
        let Some((line, l)) = lines.next() else {
            return Err(FormatError::MissingField { line: last_line, field });
        };
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [f, v] if *f == field => Ok((line, num(line, v)?)),
            _ if field == "rcx" => Err(FormatError::Header { line }),
            _ => Err(FormatError::MissingField { line, field }),
        }
    };

    let (line, version) = header_field("rcx")?;
    if version != 1 {
        return Err(FormatError::Header { line });
    }
    let (dline, d) = header_field("d")?;
    if d < 2 {
        return Err(FormatError::BadParameter { line: dline, msg: format!("d must be at least 2, got {d}") });
    }
    let (qline, q) = header_field("q")?;
    if q < 1 {
        return Err(FormatError::BadParameter { line: qline, msg: "q must be at least 1".into() });
    }
    let (_, n) = header_field("n")?;

    let mut cx = ColoredComplex::new(d, q as u64, n).expect("validated parameters");
    let mut first_line: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first().copied() {
            Some("e") if toks.len() == 4 || toks.len() == 5 => {
                let k = num(line, toks[1])?;
                let u = num(line, toks[2])?;
                let v = num(line, toks[3])?;
                let mult = match toks.get(4) {
                    Some(t) => num(line, t)?,
                    None => 1,
                };
                if k == 0 || k >= d {
                    return Err(FormatError::Color { line, k });
                }
                for x in [u, v] {
                    if x >= n {
                        return Err(FormatError::Vertex { line, v: x, n });
                    }
                }
                if mult == 0 {
                    return Err(FormatError::Multiplicity { line });
                }
                let mult = u32::try_from(mult)
                    .map_err(|_| FormatError::BadNumber { line, token: toks[4].to_string() })?;
                cx.add_edge(k, u, v, mult).expect("validated edge");
                first_line.entry((k, u, v)).or_insert(line);
            }
            Some("l") if toks.len() >= 3 => {
                let v = num(line, toks[1])?;
                if v >= n {
                    return Err(FormatError::Vertex { line, v, n });
                }
                let label = l[1..].trim_start()[toks[1].len()..].trim().to_string();
                cx.labels.insert(v, label);
            }
            _ => return Err(FormatError::Unrecognized { line, text: l.to_string() }),
        }
    }

    match opts.closure {
        Closure::AutoComplete => cx.complete_reverse(),
        Closure::Strict => {
            if let Some(e) = cx.reverse_closure_violation() {
                let line = first_line
                    .get(&(e.k, e.u, e.v))
                    .or_else(|| first_line.get(&(d - e.k, e.v, e.u)))
                    .copied()
                    .unwrap_or(0);
                return Err(FormatError::ReverseClosure { line, k: e.k, u: e.u, v: e.v, rk: d - e.k });
            }
        }
        Closure::AsIs => {}
    }
    Ok(cx)
}
