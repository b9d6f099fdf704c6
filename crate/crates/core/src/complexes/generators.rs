//! Generators of sample complexes.

use std::collections::{BTreeMap, BTreeSet};

use super::{is_permutation, ColoredComplex};
use crate::error::{Error, Result};

/// The complete graph `K_m` as a `d = 2` complex with `q = m - 2`.
pub fn gen_complete(m: usize) -> Result<ColoredComplex> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("complete graph needs m >= 3, got {m}")));
    }
    let mut cx = ColoredComplex::new(2, (m - 2) as u64, m)?;
    for u in 0..m {
        for v in 0..m {
            if u != v {
                cx.add_edge(1, u, v, 1)?;
            }
        }
    }
    Ok(cx)
}

/// The circulant graph `C_m(jumps)` as a `d = 2` complex. Without an explicit
/// `q` the graph is read as `(q+1)`-regular.
pub fn gen_circulant(m: usize, jumps: &[usize], q: Option<u64>) -> Result<ColoredComplex> {
    if m == 0 {
        return Err(Error::InvalidArgument("circulant needs m >= 1".into()));
    }
    let mut seen = BTreeSet::new();
    for &j in jumps {
        if j == 0 || 2 * j > m {
            return Err(Error::InvalidArgument(format!("jump {j} outside 1..={}", m / 2)));
        }
        if !seen.insert(j) {
            return Err(Error::InvalidArgument(format!("duplicate jump {j}")));
        }
    }
    let degree: u64 = jumps.iter().map(|&j| if 2 * j == m { 1 } else { 2 }).sum();
    let q = q.unwrap_or_else(|| degree.saturating_sub(1).max(1));
    let mut cx = ColoredComplex::new(2, q, m)?;
    for s in 0..m {
        for &j in jumps {
            cx.add_edge(1, s, (s + j) % m, 1)?;
            if 2 * j != m {
                cx.add_edge(1, s, (s + m - j) % m, 1)?;
            }
        }
    }
    Ok(cx)
}

/// Color-`k` edges `x -> g(x)` for each generator `(k, g)`, together with
/// the color-`(d-k)` edges of `g^{-1}`. An involution in a self-paired color
/// (`2k = d`) contributes its edges once.
pub fn gen_cayley(d: usize, q: u64, m: usize, gens: &[(usize, Vec<usize>)]) -> Result<ColoredComplex> {
    let mut cx = ColoredComplex::new(d, q, m)?;
    for (k, g) in gens {
        let k = *k;
        if k == 0 || k >= d {
            return Err(Error::ColorOutOfRange { k, max: d - 1 });
        }
        if g.len() != m || !is_permutation(g) {
            return Err(Error::InvalidArgument(format!("generator is not a permutation of 0..{m}")));
        }
        let involution = (0..m).all(|x| g[g[x]] == x);
        for x in 0..m {
            cx.add_edge(k, x, g[x], 1)?;
            if !(2 * k == d && involution) {
                cx.add_edge(d - k, g[x], x, 1)?;
            }
        }
    }
    Ok(cx)
}

/// A voltage in `Z_m` on the directed base edge `u -> v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Voltage {
    pub u: usize,
    pub v: usize,
    pub value: i64,
}

/// The `m`-fold cyclic cover of a `d = 2` complex: vertex `(x, a)` is
/// `x * m + a`, and `(x, a) -> (y, a + voltage(x, y))`.
///
/// Voltages given on one orientation are negated on the other; missing
/// voltages are 0. A loop of multiplicity `c` with voltage `a` splits into
/// `c/2` copies of `a` and `c/2` of `-a`, so `c` must be even unless
/// `2a = 0` in `Z_m`.
pub fn gen_voltage_cover(base: &ColoredComplex, m: usize, voltages: &[Voltage]) -> Result<ColoredComplex> {
    if base.d() != 2 {
        return Err(Error::InvalidArgument("voltage covers need a d = 2 base".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("cover degree must be at least 1".into()));
    }
    let mi = m as i64;
    let mut volt: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for w in voltages {
        if base.multiplicity(1, w.u, w.v) == 0 {
            return Err(Error::InvalidArgument(format!("no base edge {}->{}", w.u, w.v)));
        }
        for (key, val) in [((w.u, w.v), w.value.rem_euclid(mi)), ((w.v, w.u), (-w.value).rem_euclid(mi))] {
            if w.u == w.v && key == (w.v, w.u) && val != w.value.rem_euclid(mi) {
                // Loops carry both signs; checked below.
                continue;
            }
            match volt.insert(key, val) {
                Some(old) if old != val => {
                    return Err(Error::InvalidArgument(format!(
                        "conflicting voltages on edge {}->{}",
                        key.0, key.1
                    )));
                }
                _ => {}
            }
        }
    }

    let mut cx = ColoredComplex::new(2, base.q(), base.n() * m)?;
    for (x, y, c) in base.edges(1) {
        let a = volt.get(&(x, y)).copied().unwrap_or(0);
        let split = x == y && (2 * a) % mi != 0;
        if split && c % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "loop at {x} has odd multiplicity and voltage {a} of order > 2"
            )));
        }
        for s in 0..m {
            let src = x * m + s;
            if split {
                let up = y * m + ((s as i64 + a).rem_euclid(mi)) as usize;
                let down = y * m + ((s as i64 - a).rem_euclid(mi)) as usize;
                cx.add_edge(1, src, up, c / 2)?;
                cx.add_edge(1, src, down, c / 2)?;
            } else {
                let dst = y * m + ((s as i64 + a).rem_euclid(mi)) as usize;
                cx.add_edge(1, src, dst, c)?;
            }
        }
    }
    Ok(cx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(m: usize) -> Vec<usize> {
        (0..m).map(|x| (x + 1) % m).collect()
    }

    #[test]
    fn complete_graphs() {
        for m in 3..7 {
            let cx = gen_complete(m).unwrap();
            assert_eq!(cx.q(), m as u64 - 2);
            assert!(cx.out_degrees(1).iter().all(|&d| d == m as u64 - 1));
            assert!(cx.is_reverse_closed());
        }
        assert!(gen_complete(2).is_err());
    }

    #[test]
    fn circulants() {
        let c = gen_circulant(24, &[1, 12], None).unwrap();
        assert_eq!(c.q(), 2);
        assert!(c.out_degrees(1).iter().all(|&d| d == 3));
        assert!(c.is_reverse_closed());
        let e = gen_circulant(5, &[], None).unwrap();
        assert_eq!(e.edge_count(1), 0);
        assert!(gen_circulant(6, &[1, 1], None).is_err());
        assert!(gen_circulant(6, &[4], None).is_err());
        // C_2(1): the single jump is m/2.
        assert_eq!(gen_circulant(2, &[1], None).unwrap().out_degrees(1), vec![1, 1]);
    }

    #[test]
    fn cayley_examples() {
        let c = gen_cayley(2, 1, 5, &[(1, cycle(5))]).unwrap();
        assert!(c.out_degrees(1).iter().all(|&d| d == 2));
        assert_eq!(c.multiplicity(1, 0, 1), 1);
        assert_eq!(c.multiplicity(1, 0, 4), 1);

        let c = gen_cayley(3, 2, 3, &[(1, cycle(3))]).unwrap();
        assert_eq!(c.multiplicity(1, 0, 1), 1);
        assert_eq!(c.multiplicity(2, 1, 0), 1);
        assert!(c.is_reverse_closed());

        let swap = vec![1, 0, 3, 2];
        let c = gen_cayley(2, 1, 4, &[(1, swap)]).unwrap();
        assert!(c.out_degrees(1).iter().all(|&d| d == 1));

        assert_eq!(gen_cayley(3, 2, 4, &[]).unwrap().all_edges().len(), 0);
        assert!(gen_cayley(3, 2, 3, &[(3, cycle(3))]).is_err());
        assert!(gen_cayley(3, 2, 3, &[(1, vec![0, 0, 1])]).is_err());
    }

    #[test]
    fn covers() {
        let k4 = gen_complete(4).unwrap();
        assert_eq!(gen_voltage_cover(&k4, 1, &[]).unwrap(), k4);
        let two = gen_voltage_cover(&k4, 2, &[]).unwrap();
        assert_eq!(two.n(), 8);
        assert_eq!(two.components(), 2);
        assert!(two.out_degrees(1).iter().all(|&d| d == 3));

        let one = [Voltage { u: 0, v: 1, value: 1 }];
        let c = gen_voltage_cover(&k4, 3, &one).unwrap();
        assert!(c.is_reverse_closed());
        assert_eq!(c.multiplicity(1, 0, 4), 1);
        assert_eq!(c.multiplicity(1, 3, 2), 1);
        assert_eq!(c.components(), 1);

        let clash = [Voltage { u: 0, v: 1, value: 1 }, Voltage { u: 1, v: 0, value: 1 }];
        assert!(gen_voltage_cover(&k4, 3, &clash).is_err());
        let agree = [Voltage { u: 0, v: 1, value: 1 }, Voltage { u: 1, v: 0, value: 2 }];
        assert!(gen_voltage_cover(&k4, 3, &agree).is_ok());
    }

    #[test]
    fn loop_voltages() {
        let mut base = ColoredComplex::new(2, 1, 1).unwrap();
        base.add_edge(1, 0, 0, 2).unwrap();
        let c = gen_voltage_cover(&base, 5, &[Voltage { u: 0, v: 0, value: 1 }]).unwrap();
        assert!(c.is_reverse_closed());
        assert!(c.out_degrees(1).iter().all(|&d| d == 2));
        assert_eq!(c.components(), 1);

        let mut odd = ColoredComplex::new(2, 1, 1).unwrap();
        odd.add_edge(1, 0, 0, 1).unwrap();
        assert!(gen_voltage_cover(&odd, 5, &[Voltage { u: 0, v: 0, value: 1 }]).is_err());
        assert!(gen_voltage_cover(&odd, 4, &[Voltage { u: 0, v: 0, value: 2 }]).is_ok());
    }
}
