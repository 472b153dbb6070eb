//! Finite back-and-forth matching between two enumerated dense sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub ia: usize,
    pub ib: usize,
    pub a: f64,
    pub b: f64,
}

/// The rationals of `(0, 1)` in breadth-first Stern–Brocot order:
/// `1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, …`.
pub fn stern_brocot_prefix(count: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(count);
    let mut row: Vec<(u64, u64)> = vec![(0, 1), (1, 1)];
    while out.len() < count {
        let mut next = Vec::with_capacity(row.len() * 2);
        for w in row.windows(2) {
            let m = (w[0].0 + w[1].0, w[0].1 + w[1].1);
            next.push(w[0]);
            next.push(m);
            if out.len() < count {
                out.push(m);
            }
        }
        next.push(*row.last().expect("nonempty"));
        row = next;
    }
    out
}

/// `frac(q + √2)`, a dense set of irrationals in `(0, 1)`.
pub fn sqrt2_shifted(values: &[f64]) -> Vec<f64> {
    values.iter().map(|q| (q + std::f64::consts::SQRT_2).fract()).collect()
}

fn extend(
    pairs: &[MatchPair],
    used: &[bool],
    point: f64,
    side_a: bool,
    other: &[f64],
) -> Result<usize> {
    let (mut below, mut above) = (f64::NEG_INFINITY, f64::INFINITY);
    for p in pairs {
        let (mine, theirs) = if side_a { (p.a, p.b) } else { (p.b, p.a) };
        if mine < point {
            below = below.max(theirs);
        } else if mine > point {
            above = above.min(theirs);
        }
    }
    other
        .iter()
        .enumerate()
        .find(|&(i, &v)| !used[i] && below < v && v < above)
        .map(|(i, _)| i)
        .ok_or(Error::NoCompatiblePoint { searched: other.len() })
}

/// Alternates forth (even rounds, from `a`) and back (odd rounds, from `b`),
/// each time matching the least-index unmatched point on the active side
/// with the least-index order-compatible point on the other.
pub fn back_and_forth(a: &[f64], b: &[f64], steps: usize) -> Result<Vec<MatchPair>> {
    let mut pairs: Vec<MatchPair> = Vec::with_capacity(steps);
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    for round in 0..steps {
        let forth = round % 2 == 0;
        let (src, used_src) = if forth { (a, &used_a) } else { (b, &used_b) };
        let is = used_src
            .iter()
            .position(|u| !u)
            .ok_or(Error::NoCompatiblePoint { searched: src.len() })?;
        let pair = if forth {
            let ib = extend(&pairs, &used_b, a[is], true, b)?;
            MatchPair { ia: is, ib, a: a[is], b: b[ib] }
        } else {
            let ia = extend(&pairs, &used_a, b[is], false, a)?;
            MatchPair { ia, ib: is, a: a[ia], b: b[is] }
        };
        used_a[pair.ia] = true;
        used_b[pair.ib] = true;
        pairs.push(pair);
    }
    Ok(pairs)
}
