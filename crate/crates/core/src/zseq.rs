//! Eventually arithmetic-periodic integer sequences.
//!
//! A [`ZSeq`] stores a finite `head`, a nonempty generator `block` and an
//! increment `inc`, and denotes
//!
//! ```text
//! head ⌢ block ⌢ (block + inc) ⌢ (block + 2·inc) ⌢ …
//! ```
//!
//! where `block + m` adds `m` to every entry. Values are always kept in
//! normal form (primitive block, minimal head), so two values denote the
//! same infinite sequence exactly when they are structurally equal. The
//! fragment is closed under prepending, dropping, pointwise addition and
//! negation, and its lexicographic order is decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json;

/// Default expansion cap for [`lex_compare`].
pub const DEFAULT_COMPARE_CAP: usize = 1_000_000;

/// A finite integer sequence, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSeq(Vec<BigInt>);

impl FinSeq {
    pub fn new(entries: Vec<BigInt>) -> Self {
        FinSeq(entries)
    }

    pub fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        FinSeq(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn push(&mut self, x: BigInt) {
        self.0.push(x);
    }

    /// `self ⌢ other`.
    pub fn join(&self, other: &[BigInt]) -> FinSeq {
        let mut out = self.0.clone();
        out.extend_from_slice(other);
        FinSeq(out)
    }

    /// Copy of `self` with `delta` added to the last entry.
    ///
    /// With `delta = -1` this is the left endpoint `r′` of the standard
    /// interval labelled `r`.
    pub fn bump_last(&self, delta: i64) -> Option<FinSeq> {
        let mut out = self.0.clone();
        let last = out.last_mut()?;
        *last += delta;
        Some(FinSeq(out))
    }

    pub fn is_prefix_of(&self, other: &[BigInt]) -> bool {
        other.len() >= self.0.len() && other[..self.0.len()] == self.0[..]
    }
}

impl Deref for FinSeq {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for FinSeq {
    fn from(v: Vec<BigInt>) -> Self {
        FinSeq(v)
    }
}

impl From<&[i64]> for FinSeq {
    fn from(v: &[i64]) -> Self {
        FinSeq::from_i64s(v)
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_ints(f, &self.0)?;
        f.write_str(")")
    }
}

impl Serialize for FinSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::serialize_ints(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for FinSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        json::deserialize_ints(d).map(FinSeq)
    }
}

/// A normalized eventually arithmetic-periodic element of `Z^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZSeq {
    head: Vec<BigInt>,
    block: Vec<BigInt>,
    inc: BigInt,
}

impl ZSeq {
    /// Builds the normal form of `head ⌢ block ⌢ (block+inc) ⌢ …`.
    pub fn new(head: FinSeq, block: FinSeq, inc: BigInt) -> Result<ZSeq> {
        if block.is_empty() {
            return Err(Error::EmptyBlock);
        }
        Ok(Self::normalized(head.0, block.0, inc))
    }

    /// The constant sequence `k̄ = (k, k, k, …)`.
    pub fn constant(k: impl Into<BigInt>) -> ZSeq {
        ZSeq { head: Vec::new(), block: vec![k.into()], inc: BigInt::zero() }
    }

    /// The periodic sequence `block ⌢ block ⌢ …`; panics on an empty block.
    pub fn periodic(block: &[i64]) -> ZSeq {
        ZSeq::new(FinSeq::empty(), FinSeq::from_i64s(block), BigInt::zero()).expect("nonempty block")
    }

    /// Convenience constructor from machine integers.
    pub fn from_parts(head: &[i64], block: &[i64], inc: i64) -> Result<ZSeq> {
        ZSeq::new(FinSeq::from_i64s(head), FinSeq::from_i64s(block), BigInt::from(inc))
    }

    pub fn head(&self) -> &[BigInt] {
        &self.head
    }

    pub fn block(&self) -> &[BigInt] {
        &self.block
    }

    pub fn inc(&self) -> &BigInt {
        &self.inc
    }

    fn normalized(mut head: Vec<BigInt>, mut block: Vec<BigInt>, mut inc: BigInt) -> ZSeq {
        reduce_block(&mut block, &mut inc);
        // Absorb head entries that already continue the arithmetic pattern
        // backwards: x ⌢ (b0 … b_{L-1}) with x = b_{L-1} - inc.
        while let Some(last) = head.last() {
            let expected = block.last().expect("nonempty block") - &inc;
            if *last != expected {
                break;
            }
            let x = head.pop().expect("checked nonempty");
            block.pop();
            block.insert(0, x);
        }
        ZSeq { head, block, inc }
    }

    /// True when the stored fields are in normal form.
    pub fn check_invariants(&self) -> bool {
        if self.block.is_empty() {
            return false;
        }
        let renorm = Self::normalized(self.head.clone(), self.block.clone(), self.inc.clone());
        renorm == *self
    }

    /// The `i`-th entry.
    pub fn entry(&self, i: usize) -> BigInt {
        if i < self.head.len() {
            return self.head[i].clone();
        }
        let (m, p) = (i - self.head.len()).div_rem(&self.block.len());
        &self.block[p] + &self.inc * BigInt::from(m)
    }

    /// Infinite iterator over the entries.
    pub fn iter(&self) -> Entries<'_> {
        self.iter_from(0)
    }

    /// Infinite iterator over the entries starting at index `start`.
    pub fn iter_from(&self, start: usize) -> Entries<'_> {
        // `next` adds `inc` on entering each block after the first, so start
        // one block short when `start` sits exactly on a block boundary.
        let offset = if start <= self.head.len() {
            BigInt::zero()
        } else {
            &self.inc * BigInt::from((start - self.head.len() - 1) / self.block.len())
        };
        Entries { seq: self, pos: start, offset }
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> FinSeq {
        FinSeq(self.iter().take(n).collect())
    }

    /// Entries `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Vec<BigInt> {
        self.iter_from(start).take(end.saturating_sub(start)).collect()
    }

    /// Length of a prefix after which the two sequences must have differed,
    /// if they differ at all.
    fn difference_horizon(&self, other: &ZSeq) -> usize {
        let h = self.head.len().max(other.head.len());
        h + self.block.len().lcm(&other.block.len()) + 1
    }

    /// Least index where the two sequences differ, or `None` if equal.
    ///
    /// Fails with [`Error::DepthCapExceeded`] if no difference shows up within
    /// `cap` entries.
    pub fn first_difference(&self, other: &ZSeq, cap: usize) -> Result<Option<usize>> {
        if self == other {
            return Ok(None);
        }
        for (i, (a, b)) in self.iter().zip(other.iter()).take(cap).enumerate() {
            if a != b {
                return Ok(Some(i));
            }
        }
        Err(Error::DepthCapExceeded { cap })
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ZSeq) -> ZSeq {
        let h = self.head.len().max(other.head.len());
        let period = self.block.len().lcm(&other.block.len());
        let (ha, ba, ia) = self.widen(h, period);
        let (hb, bb, ib) = other.widen(h, period);
        let head = ha.iter().zip(&hb).map(|(a, b)| a + b).collect();
        let block = ba.iter().zip(&bb).map(|(a, b)| a + b).collect();
        Self::normalized(head, block, ia + ib)
    }

    /// Re-expresses `self` with a head of length `h` and a block of length
    /// `period` (a multiple of the current block length).
    fn widen(&self, h: usize, period: usize) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
        let head = self.slice(0, h);
        let block = self.slice(h, h + period);
        let inc = &self.inc * BigInt::from(period / self.block.len());
        (head, block, inc)
    }

    /// `self + k̄`.
    pub fn add_const(&self, k: &BigInt) -> ZSeq {
        ZSeq {
            head: self.head.iter().map(|x| x + k).collect(),
            block: self.block.iter().map(|x| x + k).collect(),
            inc: self.inc.clone(),
        }
    }

    /// Pointwise negation.
    pub fn neg(&self) -> ZSeq {
        ZSeq {
            head: self.head.iter().map(|x| -x).collect(),
            block: self.block.iter().map(|x| -x).collect(),
            inc: -&self.inc,
        }
    }

    /// `r ⌢ self`.
    pub fn prepend(&self, r: &[BigInt]) -> ZSeq {
        if r.is_empty() {
            return self.clone();
        }
        let mut head = r.to_vec();
        head.extend_from_slice(&self.head);
        Self::normalized(head, self.block.clone(), self.inc.clone())
    }

    /// Drops the first `m` entries.
    pub fn tail_shift(&self, m: usize) -> ZSeq {
        if m <= self.head.len() {
            return ZSeq { head: self.head[m..].to_vec(), block: self.block.clone(), inc: self.inc.clone() };
        }
        let block = self.slice(m, m + self.block.len());
        Self::normalized(Vec::new(), block, self.inc.clone())
    }

    /// If `r` is a prefix of `self`, the remainder after it.
    pub fn strip_prefix(&self, r: &[BigInt]) -> Option<ZSeq> {
        let matches = self.iter().take(r.len()).zip(r).all(|(a, b)| a == *b);
        matches.then(|| self.tail_shift(r.len()))
    }

    /// True if the sequence begins with `r`.
    pub fn starts_with(&self, r: &[BigInt]) -> bool {
        self.iter().take(r.len()).zip(r).all(|(a, b)| a == *b)
    }
}

/// Replaces `block` by its shortest arithmetic sub-period, if any.
fn reduce_block(block: &mut Vec<BigInt>, inc: &mut BigInt) {
    let len = block.len();
    for d in 1..len {
        if !len.is_multiple_of(d) {
            continue;
        }
        let scaled = &*inc * BigInt::from(d);
        let (step, rem) = scaled.div_rem(&BigInt::from(len));
        if !rem.is_zero() {
            continue;
        }
        if (0..len - d).all(|i| block[i + d] == &block[i] + &step) {
            block.truncate(d);
            *inc = step;
            return;
        }
    }
}

/// Checked constructor; same as [`ZSeq::new`].
pub fn make_zseq(head: FinSeq, block: FinSeq, inc: BigInt) -> Result<ZSeq> {
    ZSeq::new(head, block, inc)
}

/// Lexicographic comparison with the default expansion cap.
pub fn lex_compare(u: &ZSeq, v: &ZSeq) -> Result<Ordering> {
    lex_compare_capped(u, v, DEFAULT_COMPARE_CAP)
}

pub fn lex_compare_capped(u: &ZSeq, v: &ZSeq, cap: usize) -> Result<Ordering> {
    match u.first_difference(v, cap)? {
        None => Ok(Ordering::Equal),
        Some(i) => Ok(u.entry(i).cmp(&v.entry(i))),
    }
}

impl Ord for ZSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        // Distinct normal forms differ before the horizon, so this never trips.
        let cap = self.difference_horizon(other);
        lex_compare_capped(self, other, cap).expect("normal forms differ within the horizon")
    }
}

impl PartialOrd for ZSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Iterator over the entries of a [`ZSeq`]; never ends.
pub struct Entries<'a> {
    seq: &'a ZSeq,
    pos: usize,
    offset: BigInt,
}

impl Iterator for Entries<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let seq = self.seq;
        let i = self.pos;
        self.pos += 1;
        if i < seq.head.len() {
            return Some(seq.head[i].clone());
        }
        let j = i - seq.head.len();
        let p = j % seq.block.len();
        if p == 0 && j > 0 {
            self.offset += &seq.inc;
        }
        Some(&seq.block[p] + &self.offset)
    }
}

fn write_ints(f: &mut fmt::Formatter<'_>, xs: &[BigInt]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Literal form `[h0,h1,…|b0,b1,…;+k]` (or `;-k`).
impl fmt::Display for ZSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_ints(f, &self.head)?;
        f.write_str("|")?;
        write_ints(f, &self.block)?;
        if self.inc.is_negative() {
            write!(f, ";-{}]", self.inc.abs())
        } else {
            write!(f, ";+{}]", self.inc)
        }
    }
}

impl FromStr for ZSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<ZSeq> {
        parse_zseq_literal(text)
    }
}

/// Parses the literal grammar `[h…|b…;±k]` into a normalized value.
pub fn parse_zseq_literal(text: &str) -> Result<ZSeq> {
    let mut p = LiteralParser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    p.expect(b'[')?;
    let head = p.int_list(b'|')?;
    p.expect(b'|')?;
    let block = p.int_list(b';')?;
    p.expect(b';')?;
    p.skip_ws();
    let sign = match p.peek() {
        Some(b'+') => 1,
        Some(b'-') => -1,
        _ => return Err(p.error("expected `+` or `-` before the increment")),
    };
    p.pos += 1;
    let magnitude = p.int()?;
    p.skip_ws();
    p.expect(b']')?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after literal"));
    }
    if block.is_empty() {
        return Err(Error::Parse { pos: p.pos, msg: "generator block must be nonempty".into() });
    }
    ZSeq::new(FinSeq(head), FinSeq(block), magnitude * sign)
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LiteralParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        digits.parse::<BigInt>().map_err(|_| Error::Parse { pos: start, msg: "expected an integer".into() })
    }

    fn int_list(&mut self, terminator: u8) -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(terminator) {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == terminator => return Ok(out),
                _ => return Err(self.error(&format!("expected `,` or `{}`", terminator as char))),
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ZSeqJson {
    #[serde(serialize_with = "json::serialize_ints", deserialize_with = "json::deserialize_ints")]
    head: Vec<BigInt>,
    #[serde(serialize_with = "json::serialize_ints", deserialize_with = "json::deserialize_ints")]
    block: Vec<BigInt>,
    #[serde(serialize_with = "json::serialize_int", deserialize_with = "json::deserialize_int")]
    inc: BigInt,
}

impl Serialize for ZSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ZSeqJson { head: self.head.clone(), block: self.block.clone(), inc: self.inc.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ZSeqJson::deserialize(d)?;
        ZSeq::new(FinSeq(raw.head), FinSeq(raw.block), raw.inc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(head: &[i64], block: &[i64], inc: i64) -> ZSeq {
        ZSeq::from_parts(head, block, inc).unwrap()
    }

    fn ints(xs: &[i64]) -> FinSeq {
        FinSeq::from_i64s(xs)
    }

    /// Unnormalized expansion straight from the defining formula.
    fn raw_prefix(head: &[i64], block: &[i64], inc: i64, n: usize) -> Vec<i64> {
        (0..n)
            .map(|i| {
                if i < head.len() {
                    head[i]
                } else {
                    let j = i - head.len();
                    block[j % block.len()] + inc * (j / block.len()) as i64
                }
            })
            .collect()
    }

    #[test]
    fn period_reduction() {
        let u = z(&[], &[0, 0], 0);
        assert_eq!(u.block(), &[BigInt::from(0)]);
        assert!(u.head().is_empty());
        assert_eq!(*u.inc(), BigInt::zero());
    }

    #[test]
    fn head_absorption_preserves_denotation() {
        let u = z(&[7], &[7], 0);
        assert_eq!(u, ZSeq::constant(7));
        assert_eq!(u.prefix(16), ints(&raw_prefix(&[7], &[7], 0, 16).to_vec()));
    }

    #[test]
    fn already_normal_is_unchanged() {
        let u = z(&[5], &[0], 0);
        assert_eq!(u.head(), &[BigInt::from(5)]);
        assert_eq!(u.block(), &[BigInt::from(0)]);
    }

    #[test]
    fn arithmetic_block_reduction() {
        // (0,1,2,3,…) written with a two-entry block.
        let u = z(&[], &[0, 1], 2);
        assert_eq!(u, z(&[], &[0], 1));
        // absorption with an increment: -1 continues (0,1,2,…) backwards
        let v = z(&[-1], &[0], 1);
        assert_eq!(v, z(&[], &[-1], 1));
    }

    #[test]
    fn empty_block_rejected() {
        assert_eq!(ZSeq::new(ints(&[1]), FinSeq::empty(), BigInt::zero()), Err(Error::EmptyBlock));
    }

    #[test]
    fn iteration_from_any_start() {
        for u in [z(&[], &[0], 1), z(&[4], &[1, 5, 2], -3), z(&[1, 2], &[7], 0)] {
            let all = u.prefix(40);
            for start in 0..30 {
                assert_eq!(u.slice(start, start + 10), all[start..start + 10].to_vec(), "{u} from {start}");
            }
        }
        assert_eq!(z(&[], &[0], 1).tail_shift(1), z(&[], &[1], 1));
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(ZSeq::constant(0).prefix(3), ints(&[0, 0, 0]));
        assert_eq!(z(&[], &[1], 1).prefix(4), ints(&[1, 2, 3, 4]));
        assert_eq!(z(&[2], &[0, 1], 0).prefix(5), ints(&[2, 0, 1, 0, 1]));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(lex_compare(&ZSeq::constant(0), &ZSeq::constant(1)), Ok(Ordering::Less));
        let u = z(&[3], &[1, 2], 1);
        assert_eq!(lex_compare(&u, &u), Ok(Ordering::Equal));
        assert_eq!(lex_compare(&z(&[0], &[0, 1], 0), &z(&[], &[0, 1], 0)), Ok(Ordering::Less));
    }

    #[test]
    fn compare_cap_is_reported() {
        let u = z(&[], &[0], 0);
        let v = z(&[0, 0, 0, 0, 0, 1], &[0], 0);
        assert_eq!(lex_compare_capped(&u, &v, 4), Err(Error::DepthCapExceeded { cap: 4 }));
        assert_eq!(lex_compare_capped(&u, &v, 6), Ok(Ordering::Less));
    }

    #[test]
    fn add_examples() {
        let v = z(&[4, -2], &[1, 3], 2);
        assert_eq!(ZSeq::constant(0).add(&v), v);
        assert_eq!(ZSeq::constant(1).add(&ZSeq::constant(1)), ZSeq::constant(2));
        assert_eq!(z(&[], &[0, 1], 0).add(&z(&[], &[1, 0], 0)), ZSeq::constant(1));
    }

    #[test]
    fn add_const_examples() {
        let one = BigInt::from(1);
        assert_eq!(ZSeq::constant(0).add_const(&one), ZSeq::constant(1));
        let u = z(&[9, 2], &[1, 5, 2], -3);
        assert_eq!(u.add_const(&BigInt::zero()), u);
        assert_eq!(u.add_const(&one).add_const(&-one), u);
    }

    #[test]
    fn concat_and_shift() {
        let u = z(&[1, 1], &[0, 2], 1);
        assert_eq!(u.prepend(&[]), u);
        assert_eq!(ZSeq::constant(0).prepend(&ints(&[1])), z(&[1], &[0], 0));
        let r = ints(&[4, -1, 0]);
        assert_eq!(u.prepend(&r).tail_shift(r.len()), u);
        assert_eq!(ZSeq::constant(0).tail_shift(5), ZSeq::constant(0));
        assert_eq!(z(&[], &[1, 2], 3).tail_shift(1), z(&[], &[2, 4], 3));
    }

    #[test]
    fn strip_prefix_checks_membership() {
        let u = z(&[3, 4], &[0], 0);
        assert_eq!(u.strip_prefix(&ints(&[3])), Some(z(&[4], &[0], 0)));
        assert_eq!(u.strip_prefix(&ints(&[4])), None);
        assert_eq!(u.strip_prefix(&ints(&[3, 4, 0, 0])), Some(ZSeq::constant(0)));
    }

    #[test]
    fn literal_round_trip() {
        assert_eq!("[|0;+0]".parse::<ZSeq>(), Ok(ZSeq::constant(0)));
        assert_eq!("[5|0;+0]".parse::<ZSeq>(), Ok(z(&[5], &[0], 0)));
        let u = z(&[-3, 12], &[1, -7], -2);
        assert_eq!(u.to_string(), "[-3,12|1,-7;-2]");
        assert_eq!(u.to_string().parse::<ZSeq>(), Ok(u));
        assert_eq!(" [ 1 , 2 | 3 ; + 4 ] ".parse::<ZSeq>(), Ok(z(&[1, 2], &[3], 4)));
    }

    #[test]
    fn literal_errors_carry_position() {
        assert!(matches!("[1|;+0]".parse::<ZSeq>(), Err(Error::Parse { .. })));
        assert!(matches!("[1|2;0]".parse::<ZSeq>(), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!("[1|2;+0]x".parse::<ZSeq>(), Err(Error::Parse { pos: 8, .. })));
        assert!(matches!("1|2;+0]".parse::<ZSeq>(), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn json_round_trip_with_huge_entries() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let u = ZSeq::new(FinSeq::new(vec![big.clone()]), ints(&[0, 1]), -big).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert_eq!(text, r#"{"head":[123456789012345678901234567890],"block":[0,1],"inc":-123456789012345678901234567890}"#);
        let back: ZSeq = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn json_rejects_fractions() {
        assert!(serde_json::from_str::<ZSeq>(r#"{"head":[1.5],"block":[0],"inc":0}"#).is_err());
        assert!(serde_json::from_str::<ZSeq>(r#"{"head":[],"block":[],"inc":0}"#).is_err());
    }

    mod props {
        use super::super::*;
        use crate::testgen;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

            #[test]
            fn compare_is_antisymmetric(u in testgen::zseq(), v in testgen::zseq()) {
                let a = lex_compare(&u, &v).unwrap();
                prop_assert_eq!(a.reverse(), lex_compare(&v, &u).unwrap());
                prop_assert_eq!(a == Ordering::Equal, u == v);
            }

            #[test]
            fn compare_is_transitive(u in testgen::zseq(), v in testgen::zseq(), w in testgen::zseq()) {
                let mut xs = [u, v, w];
                xs.sort();
                prop_assert!(xs[0] <= xs[2]);
                prop_assert!(xs[0] <= xs[1] && xs[1] <= xs[2]);
            }

            #[test]
            fn compare_agrees_with_long_prefixes(u in testgen::zseq(), v in testgen::zseq()) {
                let expected = u.prefix(2000).cmp(&v.prefix(2000));
                prop_assert_eq!(lex_compare(&u, &v).unwrap(), expected);
            }

            #[test]
            fn normal_form_keeps_denotation(
                h in prop::collection::vec(-4i64..=4, 0..5),
                b in prop::collection::vec(-4i64..=4, 1..7),
                k in -3i64..=3,
            ) {
                let u = ZSeq::from_parts(&h, &b, k).unwrap();
                prop_assert!(u.check_invariants());
                let raw: Vec<BigInt> = (0..500)
                    .map(|i| {
                        if i < h.len() {
                            BigInt::from(h[i])
                        } else {
                            let j = i - h.len();
                            BigInt::from(b[j % b.len()] + k * (j / b.len()) as i64)
                        }
                    })
                    .collect();
                prop_assert_eq!(u.prefix(500).into_entries(), raw);
            }

            #[test]
            fn group_laws(u in testgen::zseq(), v in testgen::zseq(), w in testgen::zseq()) {
                prop_assert_eq!(u.add(&v).add(&w), u.add(&v.add(&w)));
                prop_assert_eq!(u.add(&ZSeq::constant(0)), u.clone());
                prop_assert_eq!(u.add(&u.neg()), ZSeq::constant(0));
                prop_assert_eq!(u.add(&v), v.add(&u));
            }

            #[test]
            fn addition_preserves_order(u in testgen::zseq(), v in testgen::zseq(), w in testgen::zseq()) {
                prop_assert_eq!(lex_compare(&u.add(&w), &v.add(&w)).unwrap(), lex_compare(&u, &v).unwrap());
            }

            #[test]
            fn operations_stay_normal(u in testgen::zseq(), v in testgen::zseq(), r in testgen::prefix(), m in 0usize..9) {
                for out in [u.add(&v), u.neg(), u.prepend(&r), u.tail_shift(m), u.add_const(&BigInt::from(3))] {
                    prop_assert!(out.check_invariants(), "{}", out);
                }
                prop_assert_eq!(u.prepend(&r).strip_prefix(&r), Some(u.clone()));
            }

            #[test]
            fn text_and_json_round_trip(u in testgen::zseq()) {
                prop_assert_eq!(u.to_string().parse::<ZSeq>().unwrap(), u.clone());
                let json = serde_json::to_string(&u).unwrap();
                prop_assert_eq!(serde_json::from_str::<ZSeq>(&json).unwrap(), u);
            }
        }
    }
}
