//! Reference implementations that share no code with the library: plain
//! expansions to machine integers and brute-force searches over them.

#![allow(dead_code)]

use std::cmp::Ordering;

use num_traits::ToPrimitive;
use splitline::completion::{CPoint, IntervalBound, IntervalSpec};
use splitline::zseq::ZSeq;

pub fn to_i128(x: &num_bigint::BigInt) -> i128 {
    x.to_i128().expect("test values stay small")
}

/// `head ⌢ block ⌢ (block + inc) ⌢ (block + 2 inc) ⌢ …`, first `n` entries.
pub fn expand_raw(head: &[i128], block: &[i128], inc: i128, n: usize) -> Vec<i128> {
    let mut out = Vec::with_capacity(n);
    out.extend(head.iter().take(n));
    let mut rep = 0i128;
    while out.len() < n {
        for b in block {
            if out.len() == n {
                break;
            }
            out.push(b + inc * rep);
        }
        rep += 1;
    }
    out
}

pub fn expand(u: &ZSeq, n: usize) -> Vec<i128> {
    let head: Vec<i128> = u.head().iter().map(to_i128).collect();
    let block: Vec<i128> = u.block().iter().map(to_i128).collect();
    expand_raw(&head, &block, to_i128(u.inc()), n)
}

/// Lexicographic order read off the first `depth` entries.
pub fn prefix_order(u: &ZSeq, v: &ZSeq, depth: usize) -> Ordering {
    expand(u, depth).cmp(&expand(v, depth))
}

/// Some shifts `a, b ≤ max_shift` with `u[a..]` and `v[b..]` agreeing on
/// `depth` entries.
pub fn shift_search(u: &ZSeq, v: &ZSeq, max_shift: usize, depth: usize) -> Option<(usize, usize)> {
    let (x, y) = (expand(u, max_shift + depth), expand(v, max_shift + depth));
    for a in 0..=max_shift {
        for b in 0..=max_shift {
            if x[a..a + depth] == y[b..b + depth] {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn add_const(u: &ZSeq, k: i128, n: usize) -> Vec<i128> {
    expand(u, n).into_iter().map(|e| e + k).collect()
}

/// `u ~ u + k̄` for some `0 < |k| ≤ 8`, by shift search on expansions.
pub fn k_search(u: &ZSeq) -> bool {
    let (max_shift, depth) = (64, 128);
    let x = expand(u, max_shift + depth);
    (-8i128..=8).filter(|k| *k != 0).any(|k| {
        let y = add_const(u, k, max_shift + depth);
        (0..=max_shift).any(|a| (0..=max_shift).any(|b| x[a..a + depth] == y[b..b + depth]))
    })
}

/// Completion order on expansions: first difference decides, and a finite
/// point sits just above all of its extensions.
pub fn cpoint_order(x: &CPoint, y: &CPoint, depth: usize) -> Ordering {
    let ex = |p: &CPoint| -> (Vec<i128>, bool) {
        match p {
            CPoint::Fin(r) => (r.iter().map(to_i128).collect(), true),
            CPoint::Seq(u) => (expand(u, depth), false),
        }
    };
    let ((a, fa), (b, fb)) = (ex(x), ex(y));
    for (p, q) in a.iter().zip(&b) {
        if p != q {
            return p.cmp(q);
        }
    }
    match (fa, fb) {
        (true, true) => b.len().cmp(&a.len()),
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => Ordering::Equal,
    }
}

pub fn inside(spec: &IntervalSpec, u: &ZSeq, depth: usize) -> bool {
    let p = CPoint::Seq(u.clone());
    let above = match spec.lo() {
        IntervalBound::MinusInf => true,
        IntervalBound::PlusInf => false,
        IntervalBound::At(lo) => cpoint_order(lo, &p, depth) == Ordering::Less,
    };
    let below = match spec.hi() {
        IntervalBound::PlusInf => true,
        IntervalBound::MinusInf => false,
        IntervalBound::At(hi) => cpoint_order(&p, hi, depth) == Ordering::Less,
    };
    above && below
}

/// `ω`-merge image written out from the definition: points whose first
/// nonzero entry is negative stay in copy 0 untouched; otherwise a leading
/// zero is dropped (copy 0) or the first entry becomes the copy index.
pub enum OmegaImage {
    Copy(i128, Vec<i128>),
}

pub fn omega_closed_form(u: &ZSeq, depth: usize) -> OmegaImage {
    let x = expand(u, depth + 1);
    let m = x.iter().take_while(|e| **e == 0).count();
    if m == x.len() || x[m] < 0 {
        OmegaImage::Copy(0, x[..depth].to_vec())
    } else if m == 0 {
        OmegaImage::Copy(x[0], x[1..].to_vec())
    } else {
        OmegaImage::Copy(0, x[1..].to_vec())
    }
}

/// Plain iteration of `f` on a real, `n` times.
pub fn iterate(f: impl Fn(f64) -> f64, mut x: f64, n: usize) -> f64 {
    for _ in 0..n {
        x = f(x);
    }
    x
}
