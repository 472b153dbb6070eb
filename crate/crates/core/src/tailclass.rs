//! Tail-equivalence, meeting representations and the A/B/C classification.
//!
//! Two sequences are tail-equivalent when they agree after dropping finitely
//! many entries from each. For a normalized sequence `h ⌢ t ⌢ (t+k) ⌢ …`
//! the possible tails are `t′ ⌢ (t′+k) ⌢ …` with `t′` ranging over the
//! rotations-with-carry `ρ(t) = (t_1, …, t_{L-1}, t_0 + k)` of the block, so
//! a canonical choice among those is a complete invariant.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::zseq::{FinSeq, ZSeq};

/// Prefixes longer than this are refused by [`meeting_rep`].
pub const MEETING_OFFSET_CAP: usize = 10_000_000;

/// Canonical tail data of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TailSignature {
    #[serde(serialize_with = "json::serialize_ints", deserialize_with = "json::deserialize_ints")]
    block: Vec<BigInt>,
    #[serde(serialize_with = "json::serialize_int", deserialize_with = "json::deserialize_int")]
    inc: BigInt,
}

impl TailSignature {
    pub fn block(&self) -> &[BigInt] {
        &self.block
    }

    pub fn inc(&self) -> &BigInt {
        &self.inc
    }

    /// First entry of the canonical block.
    pub fn anchor(&self) -> &BigInt {
        &self.block[0]
    }

    /// The periodic tail this signature stands for.
    pub fn tail(&self) -> ZSeq {
        ZSeq::new(FinSeq::empty(), FinSeq::new(self.block.clone()), self.inc.clone()).expect("nonempty block")
    }
}

impl fmt::Display for TailSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tail())
    }
}

/// `ρ^n(t)` for `n ∈ Z`, using `ρ^L(t) = t + k`.
fn rotate_with_carry(t: &[BigInt], k: &BigInt, n: &BigInt) -> Vec<BigInt> {
    let len = t.len();
    let (q, r) = n.div_mod_floor(&BigInt::from(len));
    let r = r.to_usize().expect("remainder below block length");
    let lift = k * &q;
    (0..len)
        .map(|i| {
            let j = i + r;
            if j < len {
                &t[j] + &lift
            } else {
                &t[j - len] + &lift + k
            }
        })
        .collect()
}

/// The exponent `n` with `ρ^n(t)` canonical, and that canonical block.
///
/// With `k = 0` the rotations form a cycle of length `L` and the canonical one
/// is the lexicographically least. With `k ≠ 0` each rotation moves the entry
/// sum by `k`, so exactly one `ρ^n(t)` has its sum in `[0, |k|)`.
fn canonical_exponent(t: &[BigInt], k: &BigInt) -> (BigInt, Vec<BigInt>) {
    if k.is_zero() {
        let len = t.len();
        let best = (0..len)
            .min_by(|&a, &b| {
                let ra = t[a..].iter().chain(&t[..a]);
                let rb = t[b..].iter().chain(&t[..b]);
                ra.cmp(rb)
            })
            .expect("nonempty block");
        let mut block = t[best..].to_vec();
        block.extend_from_slice(&t[..best]);
        return (BigInt::from(best), block);
    }
    let sum: BigInt = t.iter().sum();
    let n = if k.is_positive() { -sum.div_floor(k) } else { sum.div_floor(&-k) };
    let block = rotate_with_carry(t, k, &n);
    (n, block)
}

pub fn signature(u: &ZSeq) -> TailSignature {
    let (_, block) = canonical_exponent(u.block(), u.inc());
    TailSignature { block, inc: u.inc().clone() }
}

pub fn tail_equivalent(u: &ZSeq, v: &ZSeq) -> bool {
    signature(u) == signature(v)
}

/// `u = r ⌢ common_tail` and `v = s ⌢ common_tail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetingRep {
    pub r: FinSeq,
    pub s: FinSeq,
    pub common_tail: ZSeq,
}

/// Meeting representation with the shortest prefixes.
///
/// Among all offset pairs `(a, b)` with `u` shifted by `a` equal to `v`
/// shifted by `b`, picks the one with least `a + b`, breaking ties toward the
/// shorter `s`.
pub fn meeting_rep(u: &ZSeq, v: &ZSeq) -> Result<MeetingRep> {
    if !tail_equivalent(u, v) {
        return Err(Error::NotTailEquivalent);
    }
    let (eu, _) = canonical_exponent(u.block(), u.inc());
    let (ev, _) = canonical_exponent(v.block(), v.inc());
    let hu = BigInt::from(u.head().len());
    let hv = BigInt::from(v.head().len());

    let to_offset = |x: BigInt| -> Result<usize> {
        x.to_usize().filter(|&n| n <= MEETING_OFFSET_CAP).ok_or(Error::DepthCapExceeded { cap: MEETING_OFFSET_CAP })
    };

    let (a, b) = if u.inc().is_zero() {
        // One alignment per residue of a - b modulo L.
        let len = u.block().len();
        let base_a = to_offset(hu + eu)?;
        let base_b = to_offset(hv + ev)?;
        let reach = (base_a + base_b) / len + 2;
        let mut best: Option<(usize, usize)> = None;
        for j in 0..reach {
            for (a, b) in [(base_a + j * len, base_b), (base_a, base_b + j * len)] {
                let cand = zip_back(u, v, a, b);
                let better = match best {
                    None => true,
                    Some((ba, bb)) => (cand.0 + cand.1, cand.1) < (ba + bb, bb),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        best.expect("at least one alignment")
    } else {
        // A single alignment: ρ^{n_u}(t_u) = ρ^{n_v}(t_v) iff n_u - e_u = n_v - e_v.
        let m = std::cmp::max(-&eu, -&ev);
        let a = to_offset(hu + &eu + &m)?;
        let b = to_offset(hv + &ev + &m)?;
        zip_back(u, v, a, b)
    };
    Ok(MeetingRep { r: u.prefix(a), s: v.prefix(b), common_tail: u.tail_shift(a) })
}

fn zip_back(u: &ZSeq, v: &ZSeq, mut a: usize, mut b: usize) -> (usize, usize) {
    while a > 0 && b > 0 && u.entry(a - 1) == v.entry(b - 1) {
        a -= 1;
        b -= 1;
    }
    (a, b)
}

/// Membership in the union of orbits that meet themselves: `u ~ u + k̄` for
/// some `k ≠ 0`. On this fragment that happens exactly when `inc ≠ 0`.
#[allow(non_snake_case)]
pub fn in_C(u: &ZSeq) -> bool {
    !u.inc().is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    A,
    B,
    C,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::A => "A",
            Classification::B => "B",
            Classification::C => "C",
        })
    }
}

/// `C` for self-meeting orbits, otherwise the parity of the signature anchor.
pub fn classify(u: &ZSeq) -> Classification {
    if in_C(u) {
        return Classification::C;
    }
    if signature(u).anchor().is_even() {
        Classification::A
    } else {
        Classification::B
    }
}

/// Signatures of `u + k̄` for `k_lo ≤ k ≤ k_hi`.
pub fn orbit_signatures(u: &ZSeq, k_lo: i64, k_hi: i64) -> Vec<TailSignature> {
    (k_lo..=k_hi).map(|k| signature(&u.add_const(&BigInt::from(k)))).collect()
}
