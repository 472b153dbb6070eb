//! The completion `R = Z^ω ∪ Z^{<ω}`.
//!
//! A finite sequence `r` sits immediately above every infinite sequence that
//! extends it, so the standard interval `I_r` (all extensions of `r`) is the
//! open interval `(r′, r)` where `r′` decrements the last entry of `r`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zseq::{lex_compare, FinSeq, ZSeq};

/// A point of the completion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CPoint {
    Seq(ZSeq),
    Fin(FinSeq),
}

impl CPoint {
    /// Checked constructor for finite points.
    pub fn fin(r: FinSeq) -> Result<CPoint> {
        if r.is_empty() {
            return Err(Error::EmptyFinitePoint);
        }
        Ok(CPoint::Fin(r))
    }

    pub fn fin_i64s(r: &[i64]) -> CPoint {
        assert!(!r.is_empty(), "finite point must be nonempty");
        CPoint::Fin(FinSeq::from_i64s(r))
    }

    /// Entry `i`, if the point has one.
    pub fn entry(&self, i: usize) -> Option<BigInt> {
        match self {
            CPoint::Seq(u) => Some(u.entry(i)),
            CPoint::Fin(r) => r.get(i).cloned(),
        }
    }

    /// Number of entries, `None` for infinite points.
    pub fn len(&self) -> Option<usize> {
        match self {
            CPoint::Seq(_) => None,
            CPoint::Fin(r) => Some(r.len()),
        }
    }

    /// First `n` entries (fewer for a short finite point).
    pub fn prefix(&self, n: usize) -> Vec<BigInt> {
        match self {
            CPoint::Seq(u) => u.prefix(n).into_entries(),
            CPoint::Fin(r) => r.iter().take(n).cloned().collect(),
        }
    }

    /// Drops the first `m` entries; `None` when nothing would remain of a
    /// finite point.
    pub fn tail(&self, m: usize) -> Option<CPoint> {
        match self {
            CPoint::Seq(u) => Some(CPoint::Seq(u.tail_shift(m))),
            CPoint::Fin(r) if r.len() > m => Some(CPoint::Fin(FinSeq::new(r[m..].to_vec()))),
            CPoint::Fin(_) => None,
        }
    }

    pub fn starts_with(&self, p: &[BigInt]) -> bool {
        match self {
            CPoint::Seq(u) => u.starts_with(p),
            CPoint::Fin(r) => FinSeq::new(p.to_vec()).is_prefix_of(r),
        }
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CPoint::Seq(u) => write!(f, "{u}"),
            CPoint::Fin(r) => write!(f, "{r}"),
        }
    }
}

/// Parses `(1,2,3)` as a finite point or a `[h|b;+k]` literal as an infinite one.
impl FromStr for CPoint {
    type Err = Error;

    fn from_str(text: &str) -> Result<CPoint> {
        let t = text.trim();
        if t.starts_with('[') {
            return t.parse::<ZSeq>().map(CPoint::Seq);
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected `(…)` or `[…]`".into() })?;
        let entries = parse_int_list(inner)?;
        CPoint::fin(FinSeq::new(entries))
    }
}

pub(crate) fn parse_int_list(text: &str) -> Result<Vec<BigInt>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut pos = 0;
    let mut out = Vec::new();
    for part in text.split(',') {
        let v = part
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse { pos, msg: format!("expected an integer, found `{}`", part.trim()) })?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

/// Order on the completion: first difference decides; otherwise a proper
/// extension of a finite sequence lies below it.
pub fn cpoint_compare(x: &CPoint, y: &CPoint) -> Result<Ordering> {
    match (x, y) {
        (CPoint::Seq(u), CPoint::Seq(v)) => lex_compare(u, v),
        (CPoint::Fin(r), CPoint::Seq(u)) => Ok(fin_vs_seq(r, u)),
        (CPoint::Seq(u), CPoint::Fin(r)) => Ok(fin_vs_seq(r, u).reverse()),
        (CPoint::Fin(r), CPoint::Fin(s)) => {
            for (a, b) in r.iter().zip(s.iter()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    other => return Ok(other),
                }
            }
            // one extends the other: the longer one is smaller
            Ok(s.len().cmp(&r.len()))
        }
    }
}

fn fin_vs_seq(r: &FinSeq, u: &ZSeq) -> Ordering {
    for (a, b) in r.iter().zip(u.iter()) {
        match a.cmp(&b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Greater
}

/// Interval bound: a point of the completion or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntervalBound {
    MinusInf,
    PlusInf,
    At(CPoint),
}

impl IntervalBound {
    pub fn point(&self) -> Option<&CPoint> {
        match self {
            IntervalBound::At(p) => Some(p),
            _ => None,
        }
    }
}

pub fn bound_compare(a: &IntervalBound, b: &IntervalBound) -> Result<Ordering> {
    use IntervalBound::*;
    Ok(match (a, b) {
        (MinusInf, MinusInf) | (PlusInf, PlusInf) => Ordering::Equal,
        (MinusInf, _) | (_, PlusInf) => Ordering::Less,
        (_, MinusInf) | (PlusInf, _) => Ordering::Greater,
        (At(x), At(y)) => cpoint_compare(x, y)?,
    })
}

impl fmt::Display for IntervalBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalBound::MinusInf => f.write_str("-inf"),
            IntervalBound::PlusInf => f.write_str("+inf"),
            IntervalBound::At(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for IntervalBound {
    type Err = Error;

    fn from_str(text: &str) -> Result<IntervalBound> {
        match text.trim() {
            "-inf" => Ok(IntervalBound::MinusInf),
            "+inf" | "inf" => Ok(IntervalBound::PlusInf),
            other => other.parse().map(IntervalBound::At),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoundRepr {
    Inf(String),
    Point(CPoint),
}

impl Serialize for IntervalBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IntervalBound::MinusInf => s.serialize_str("-inf"),
            IntervalBound::PlusInf => s.serialize_str("+inf"),
            IntervalBound::At(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for IntervalBound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match BoundRepr::deserialize(d)? {
            BoundRepr::Inf(s) if s == "-inf" => Ok(IntervalBound::MinusInf),
            BoundRepr::Inf(s) if s == "+inf" => Ok(IntervalBound::PlusInf),
            BoundRepr::Inf(s) => Err(serde::de::Error::custom(format!("unknown bound `{s}`"))),
            BoundRepr::Point(p) => Ok(IntervalBound::At(p)),
        }
    }
}

/// An open interval of `Z^ω` described by bounds in the completion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalSpec {
    lo: IntervalBound,
    hi: IntervalBound,
}

impl IntervalSpec {
    /// Fails with [`Error::EmptyInterval`] unless `lo < hi`.
    pub fn new(lo: IntervalBound, hi: IntervalBound) -> Result<IntervalSpec> {
        for b in [&lo, &hi] {
            if matches!(b, IntervalBound::At(CPoint::Fin(r)) if r.is_empty()) {
                return Err(Error::EmptyFinitePoint);
            }
        }
        if bound_compare(&lo, &hi)? != Ordering::Less || lo == IntervalBound::PlusInf || hi == IntervalBound::MinusInf {
            return Err(Error::EmptyInterval);
        }
        Ok(IntervalSpec { lo, hi })
    }

    pub fn whole() -> IntervalSpec {
        IntervalSpec { lo: IntervalBound::MinusInf, hi: IntervalBound::PlusInf }
    }

    pub fn lo(&self) -> &IntervalBound {
        &self.lo
    }

    pub fn hi(&self) -> &IntervalBound {
        &self.hi
    }

    pub fn is_whole(&self) -> bool {
        self.lo == IntervalBound::MinusInf && self.hi == IntervalBound::PlusInf
    }

    /// Strict membership of a completion point.
    pub fn contains_point(&self, x: &CPoint) -> Result<bool> {
        let x = IntervalBound::At(x.clone());
        Ok(bound_compare(&self.lo, &x)? == Ordering::Less && bound_compare(&x, &self.hi)? == Ordering::Less)
    }

    pub fn contains(&self, u: &ZSeq) -> Result<bool> {
        self.contains_point(&CPoint::Seq(u.clone()))
    }

    /// If this is a standard interval `(r′, r)`, its label `r`.
    pub fn standard_label(&self) -> Option<FinSeq> {
        match (&self.lo, &self.hi) {
            (IntervalBound::At(CPoint::Fin(lo)), IntervalBound::At(CPoint::Fin(hi))) => {
                (hi.bump_last(-1).as_ref() == Some(lo)).then(|| hi.clone())
            }
            _ => None,
        }
    }
}

impl<'de> Deserialize<'de> for IntervalSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: IntervalBound,
            hi: IntervalBound,
        }
        let raw = Raw::deserialize(d)?;
        IntervalSpec::new(raw.lo, raw.hi).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The standard interval `I_r = (r′, r)`.
pub fn std_interval(r: &FinSeq) -> Result<IntervalSpec> {
    let lo = r.bump_last(-1).ok_or(Error::EmptyLabel)?;
    Ok(IntervalSpec { lo: IntervalBound::At(CPoint::Fin(lo)), hi: IntervalBound::At(CPoint::Fin(r.clone())) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitResult {
    /// Candidate limit together with the number of leading coordinates the
    /// terms certify as settled.
    Stabilized { point: CPoint, depth: usize },
    Unbounded,
    Inconclusive { depth: usize },
}

/// Reads off the limit of a finite run of strictly monotone terms.
///
/// For each consecutive pair the index of the first difference is the
/// coordinate that moved. Over the trailing half of the run (at least two
/// steps):
///
/// * the same coordinate `s` moving at every step means it diverges; the limit
///   is the finite point made of the settled coordinates `0..s` (with its
///   last entry decremented for decreasing runs), or the run is unbounded
///   when `s = 0`;
/// * strictly advancing coordinates mean every coordinate settles; the
///   settled prefix is extended to the shortest arithmetic-periodic sequence
///   it fits, and that candidate is accepted only if it lies strictly beyond
///   every term;
/// * anything else is inconclusive.
pub fn monotone_limit(terms: &[ZSeq], direction: Direction) -> Result<LimitResult> {
    let label = match direction {
        Direction::Increasing => "increasing",
        Direction::Decreasing => "decreasing",
    };
    let mut moved = Vec::with_capacity(terms.len().saturating_sub(1));
    for pair in terms.windows(2) {
        let i = pair[0].first_difference(&pair[1], crate::zseq::DEFAULT_COMPARE_CAP)?;
        let i = i.ok_or(Error::NotMonotone { direction: label })?;
        let step = pair[0].entry(i).cmp(&pair[1].entry(i));
        let expected = match direction {
            Direction::Increasing => Ordering::Less,
            Direction::Decreasing => Ordering::Greater,
        };
        if step != expected {
            return Err(Error::NotMonotone { direction: label });
        }
        moved.push(i);
    }
    if moved.len() < 2 {
        return Ok(LimitResult::Inconclusive { depth: moved.first().copied().unwrap_or(0) });
    }
    let window_len = moved.len().div_ceil(2).max(2);
    let window = &moved[moved.len() - window_len..];
    let settled = *window.iter().min().expect("nonempty window");
    let last = terms.last().expect("at least two terms");

    if window.iter().all(|&i| i == settled) {
        if settled == 0 {
            return Ok(LimitResult::Unbounded);
        }
        let prefix = last.prefix(settled);
        let point = match direction {
            Direction::Increasing => prefix,
            Direction::Decreasing => prefix.bump_last(-1).expect("nonempty prefix"),
        };
        return Ok(LimitResult::Stabilized { point: CPoint::Fin(point), depth: settled });
    }

    if window.windows(2).all(|w| w[0] < w[1]) {
        let depth = window[window.len() - 1] + 1;
        let candidate = extrapolate(&last.prefix(depth));
        let beyond = terms.iter().all(|t| match direction {
            Direction::Increasing => candidate > *t,
            Direction::Decreasing => candidate < *t,
        });
        if beyond {
            return Ok(LimitResult::Stabilized { point: CPoint::Seq(candidate), depth });
        }
    }
    Ok(LimitResult::Inconclusive { depth: settled })
}

/// Shortest arithmetic-periodic sequence (by head plus block length) whose
/// prefix is `p`.
fn extrapolate(p: &FinSeq) -> ZSeq {
    let d = p.len();
    for size in 1..=d {
        for h in 0..size {
            let period = size - h;
            let step = if h + period < d { &p[h + period] - &p[h] } else { BigInt::zero() };
            if (h..d - period).all(|i| p[i + period] == &p[i] + &step) {
                let head = FinSeq::new(p[..h].to_vec());
                let block = FinSeq::new(p[h..h + period].to_vec());
                return ZSeq::new(head, block, step).expect("nonempty block");
            }
        }
    }
    unreachable!("the whole prefix is always a valid block")
}

/// Exact rational enclosure of a point inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    /// True when `self` lies entirely at or below `other`.
    pub fn precedes(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }
}

/// `ψ̂(n) = (n/(1+|n|) + 1)/2`, an increasing bijection of `Z` onto a
/// discrete subset of `(0, 1)`.
pub fn psi_hat(n: &BigInt) -> BigRational {
    let one = BigInt::one();
    let denom = &one + n.abs();
    let frac = BigRational::new(n.clone(), denom);
    (frac + BigRational::one()) / BigRational::from_integer(BigInt::from(2))
}

/// Nested-interval enclosure of `x` after `depth` coordinates.
///
/// Coordinate value `n` selects the sub-interval `(ψ̂(n), ψ̂(n+1))` of the
/// current interval. A finite point is the supremum of its standard
/// interval's image and is returned exactly as a degenerate enclosure.
pub fn embed_enclosure(x: &CPoint, depth: usize) -> Enclosure {
    let depth = depth.max(1);
    let refine = |coords: &mut dyn Iterator<Item = BigInt>| {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::one();
        for c in coords {
            let width = &hi - &lo;
            let next = &c + BigInt::one();
            let new_lo = &lo + &width * psi_hat(&c);
            hi = &lo + &width * psi_hat(&next);
            lo = new_lo;
        }
        (lo, hi)
    };
    match x {
        CPoint::Seq(u) => {
            let (lo, hi) = refine(&mut u.iter().take(depth));
            Enclosure { lo, hi }
        }
        CPoint::Fin(r) => {
            let (_, hi) = refine(&mut r.iter().cloned());
            Enclosure { lo: hi.clone(), hi }
        }
    }
}
