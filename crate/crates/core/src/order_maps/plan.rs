//! Decomposition of an interval of `Z^ω` into sums of standard intervals,
//! and the isomorphism `Z^ω → I` it induces.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::{builders, OrderMap, SpacePoint};
use crate::completion::{CPoint, IntervalBound, IntervalSpec};
use crate::error::{Error, Result};
use crate::json;
use crate::zseq::{FinSeq, ZSeq, DEFAULT_COMPARE_CAP};

/// Largest split index materialized when locating a component of a
/// sequence-endpoint sum.
pub const SPLIT_INDEX_CAP: usize = 1_000_000;

/// Labels of the components of an infinite sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SumRule {
    /// Standard intervals `I_{prefix ⌢ (c)}` for consecutive `c` moving away
    /// from `pivot`; the component nearest the pivot is `pivot ± offset`.
    Labels {
        prefix: FinSeq,
        #[serde(serialize_with = "json::serialize_int")]
        pivot: BigInt,
        offset: u32,
    },
    /// Split by the coordinate where a point first leaves `point`.
    Splits { point: ZSeq },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecompositionPlan {
    Whole,
    StdLeaf {
        label: FinSeq,
    },
    /// `I_(lo) + I_(lo+1) + … + I_(hi)`, realized by halving.
    Range {
        #[serde(serialize_with = "json::serialize_int")]
        lo: BigInt,
        #[serde(serialize_with = "json::serialize_int")]
        hi: BigInt,
    },
    FinSum {
        parts: Vec<DecompositionPlan>,
    },
    OmegaSum {
        rule: SumRule,
    },
    OmegaStarSum {
        rule: SumRule,
    },
    Prefixed {
        prefix: FinSeq,
        inner: Box<DecompositionPlan>,
    },
}

use DecompositionPlan as Plan;

fn omega() -> &'static OrderMap {
    static MAP: OnceLock<OrderMap> = OnceLock::new();
    MAP.get_or_init(builders::omega_iso)
}

fn omega_star() -> &'static OrderMap {
    static MAP: OnceLock<OrderMap> = OnceLock::new();
    MAP.get_or_init(builders::omega_star_iso)
}

fn two() -> &'static OrderMap {
    static MAP: OnceLock<OrderMap> = OnceLock::new();
    MAP.get_or_init(builders::f2)
}

fn split(map: &OrderMap, u: &ZSeq) -> Result<(BigInt, ZSeq)> {
    match map.apply(&SpacePoint::Plain(u.clone()))? {
        SpacePoint::Tagged { index, inner } => match *inner {
            SpacePoint::Plain(w) => Ok((index, w)),
            other => Err(Error::IllFormedMap(format!("expected a plain component, got {other}"))),
        },
        other => Err(Error::IllFormedMap(format!("expected a tagged point, got {other}"))),
    }
}

fn join(map: &OrderMap, index: BigInt, w: ZSeq) -> Result<Option<ZSeq>> {
    let p = SpacePoint::Tagged { index, inner: Box::new(SpacePoint::Plain(w)) };
    Ok(map.try_unapply(&p)?.and_then(|q| q.as_plain().cloned()))
}

fn label_with(prefix: &[BigInt], last: BigInt) -> FinSeq {
    let mut v = prefix.to_vec();
    v.push(last);
    FinSeq::new(v)
}

fn split_index(k: &BigInt) -> Result<usize> {
    k.to_usize().filter(|&n| n <= SPLIT_INDEX_CAP).ok_or(Error::DepthCapExceeded { cap: SPLIT_INDEX_CAP })
}

impl SumRule {
    /// Component `i` of an ω-sum (`ascending`) or an ω*-sum.
    fn component(&self, ascending: bool, i: &BigInt) -> Result<Plan> {
        match (self, ascending) {
            (SumRule::Labels { prefix, pivot, offset }, true) => {
                Ok(Plan::StdLeaf { label: label_with(prefix, pivot + BigInt::from(*offset) + i) })
            }
            (SumRule::Labels { prefix, pivot, offset }, false) => {
                Ok(Plan::StdLeaf { label: label_with(prefix, pivot - BigInt::from(*offset) + 1u32 + i) })
            }
            (SumRule::Splits { point }, true) => {
                let k = split_index(i)?;
                Ok(Plan::OmegaStarSum {
                    rule: SumRule::Labels { prefix: point.prefix(k), pivot: point.entry(k), offset: 1 },
                })
            }
            (SumRule::Splits { point }, false) => {
                let k = split_index(&(-i - 1u32))?;
                Ok(Plan::OmegaSum { rule: SumRule::Labels { prefix: point.prefix(k), pivot: point.entry(k), offset: 1 } })
            }
        }
    }

    /// Index of the component holding `z`, if any.
    fn locate(&self, ascending: bool, z: &ZSeq) -> Result<Option<BigInt>> {
        match self {
            SumRule::Labels { prefix, pivot, offset } => {
                if !z.starts_with(prefix) {
                    return Ok(None);
                }
                let y = z.entry(prefix.len());
                let off = BigInt::from(*offset);
                let i = if ascending { y - pivot - off } else { y - pivot + off - 1u32 };
                let ok = if ascending { !i.is_negative() } else { i.is_negative() };
                Ok(ok.then_some(i))
            }
            SumRule::Splits { point } => {
                let Some(d) = z.first_difference(point, DEFAULT_COMPARE_CAP)? else { return Ok(None) };
                let above = z.entry(d) > point.entry(d);
                match (ascending, above) {
                    // (−∞, u): components by the coordinate where z drops below u
                    (true, false) => Ok(Some(BigInt::from(d))),
                    // (u, ∞): the deeper the split, the closer to u
                    (false, true) => Ok(Some(-BigInt::from(d) - 1u32)),
                    _ => Ok(None),
                }
            }
        }
    }
}

impl DecompositionPlan {
    /// The isomorphism `Z^ω → I` described by this plan.
    pub fn apply(&self, u: &ZSeq) -> Result<ZSeq> {
        match self {
            Plan::Whole => Ok(u.clone()),
            Plan::StdLeaf { label } => Ok(u.prepend(label)),
            Plan::Prefixed { prefix, inner } => Ok(inner.apply(u)?.prepend(prefix)),
            Plan::Range { lo, hi } => {
                if lo == hi {
                    return Ok(u.prepend(std::slice::from_ref(lo)));
                }
                let mid = (lo + hi).div_floor(&BigInt::from(2));
                let (j, w) = split(two(), u)?;
                if j.is_one() {
                    Plan::Range { lo: mid + 1u32, hi: hi.clone() }.apply(&w)
                } else {
                    Plan::Range { lo: lo.clone(), hi: mid }.apply(&w)
                }
            }
            Plan::FinSum { parts } => {
                if parts.len() == 1 {
                    return parts[0].apply(u);
                }
                let (i, w) = split(&builders::fin_sum_iso(parts.len())?, u)?;
                let i = i.to_usize().expect("index below part count");
                parts[i].apply(&w)
            }
            Plan::OmegaSum { rule } => {
                let (i, w) = split(omega(), u)?;
                rule.component(true, &i)?.apply(&w)
            }
            Plan::OmegaStarSum { rule } => {
                let (i, w) = split(omega_star(), u)?;
                rule.component(false, &i)?.apply(&w)
            }
        }
    }

    /// Preimage of `z`, or `None` when `z` is outside the interval.
    pub fn unapply(&self, z: &ZSeq) -> Result<Option<ZSeq>> {
        match self {
            Plan::Whole => Ok(Some(z.clone())),
            Plan::StdLeaf { label } => Ok(z.strip_prefix(label)),
            Plan::Prefixed { prefix, inner } => match z.strip_prefix(prefix) {
                Some(rest) => inner.unapply(&rest),
                None => Ok(None),
            },
            Plan::Range { lo, hi } => {
                let first = z.entry(0);
                if first < *lo || first > *hi {
                    return Ok(None);
                }
                if lo == hi {
                    return Ok(Some(z.tail_shift(1)));
                }
                let mid = (lo + hi).div_floor(&BigInt::from(2));
                let (j, half) = if first > mid {
                    (BigInt::one(), Plan::Range { lo: mid + 1u32, hi: hi.clone() })
                } else {
                    (BigInt::from(0), Plan::Range { lo: lo.clone(), hi: mid })
                };
                match half.unapply(z)? {
                    Some(w) => join(two(), j, w),
                    None => Ok(None),
                }
            }
            Plan::FinSum { parts } => {
                for (i, part) in parts.iter().enumerate() {
                    if let Some(w) = part.unapply(z)? {
                        if parts.len() == 1 {
                            return Ok(Some(w));
                        }
                        return join(&builders::fin_sum_iso(parts.len())?, BigInt::from(i), w);
                    }
                }
                Ok(None)
            }
            Plan::OmegaSum { rule } | Plan::OmegaStarSum { rule } => {
                let ascending = matches!(self, Plan::OmegaSum { .. });
                let Some(i) = rule.locate(ascending, z)? else { return Ok(None) };
                let Some(w) = rule.component(ascending, &i)?.unapply(z)? else { return Ok(None) };
                join(if ascending { omega() } else { omega_star() }, i, w)
            }
        }
    }

    /// Labels of the standard intervals in the plan, in increasing order,
    /// taking at most `per_rule` components from each infinite sum.
    pub fn leaves(&self, per_rule: usize) -> Result<Vec<FinSeq>> {
        let mut out = Vec::new();
        self.collect_leaves(per_rule, &[], &mut out)?;
        Ok(out)
    }

    fn collect_leaves(&self, per_rule: usize, prefix: &[BigInt], out: &mut Vec<FinSeq>) -> Result<()> {
        match self {
            Plan::Whole => {}
            Plan::StdLeaf { label } => out.push(FinSeq::new(prefix.to_vec()).join(label)),
            Plan::Prefixed { prefix: p, inner } => {
                let mut full = prefix.to_vec();
                full.extend_from_slice(p);
                inner.collect_leaves(per_rule, &full, out)?;
            }
            Plan::Range { lo, hi } => {
                let mut m = lo.clone();
                let mut taken = 0;
                while m <= *hi && taken < per_rule {
                    out.push(label_with(prefix, m.clone()));
                    m += 1u32;
                    taken += 1;
                }
            }
            Plan::FinSum { parts } => {
                for part in parts {
                    part.collect_leaves(per_rule, prefix, out)?;
                }
            }
            Plan::OmegaSum { rule } => {
                for i in 0..per_rule {
                    rule.component(true, &BigInt::from(i))?.collect_leaves(per_rule, prefix, out)?;
                }
            }
            Plan::OmegaStarSum { rule } => {
                for i in (1..=per_rule).rev() {
                    rule.component(false, &-BigInt::from(i))?.collect_leaves(per_rule, prefix, out)?;
                }
            }
        }
        Ok(())
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match self {
            Plan::Whole => writeln!(f, "{pad}whole"),
            Plan::StdLeaf { label } => writeln!(f, "{pad}std {label}"),
            Plan::Range { lo, hi } => writeln!(f, "{pad}std (m) for {lo} <= m <= {hi}"),
            Plan::FinSum { parts } => {
                writeln!(f, "{pad}fin-sum of {}", parts.len())?;
                parts.iter().try_for_each(|p| p.write_tree(f, depth + 1))
            }
            Plan::OmegaSum { rule } => writeln!(f, "{pad}omega-sum {}", RuleText(rule, true)),
            Plan::OmegaStarSum { rule } => writeln!(f, "{pad}omega-star-sum {}", RuleText(rule, false)),
            Plan::Prefixed { prefix, inner } => {
                writeln!(f, "{pad}prefix {prefix}")?;
                inner.write_tree(f, depth + 1)
            }
        }
    }
}

struct RuleText<'a>(&'a SumRule, bool);

impl fmt::Display for RuleText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SumRule::Labels { prefix, pivot, offset } => {
                f.write_str("of std (")?;
                for x in prefix.iter() {
                    write!(f, "{x},")?;
                }
                if self.1 {
                    write!(f, "{}+i) for i >= 0", pivot + BigInt::from(*offset))
                } else {
                    write!(f, "{}-i) for i >= 0", pivot - BigInt::from(*offset))
                }
            }
            SumRule::Splits { point } if self.1 => write!(f, "split where points drop below {point}"),
            SumRule::Splits { point } => write!(f, "split where points rise above {point}"),
        }
    }
}

/// Indented tree, one node per line.
impl fmt::Display for DecompositionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// Splits `I` into sums of standard intervals.
///
/// * `(r, ∞)` with `r = (u_0, …, u_n)` finite: for each `j` the points that
///   first exceed `r` at coordinate `j` form an ω-sum of `I_{(u_0, …, u_j + i)}`,
///   `i ≥ 1`; there are `n + 1` such parts, deeper `j` first.
/// * `(u, ∞)` with `u` infinite: the same parts for every `j`, an ω*-sum.
/// * `(−∞, r)` and `(−∞, u)` mirror these; the deepest part of `(−∞, r)`
///   also holds `I_r` itself.
/// * A bounded interval is cut at the first coordinate where its ends differ
///   into a left piece, whole standard intervals in between, and a right piece.
pub fn decompose_interval(spec: &IntervalSpec) -> Result<DecompositionPlan> {
    if spec.is_whole() {
        return Ok(Plan::Whole);
    }
    if let Some(label) = spec.standard_label() {
        return Ok(Plan::StdLeaf { label });
    }
    Ok(simplify(decompose(spec.lo(), spec.hi())?))
}

fn decompose(lo: &IntervalBound, hi: &IntervalBound) -> Result<Plan> {
    use IntervalBound::*;
    Ok(match (lo, hi) {
        (MinusInf, PlusInf) => Plan::Whole,
        (At(CPoint::Fin(r)), PlusInf) => {
            let n = r.len() - 1;
            let parts = (0..=n)
                .rev()
                .map(|j| Plan::OmegaSum {
                    rule: SumRule::Labels { prefix: FinSeq::new(r[..j].to_vec()), pivot: r[j].clone(), offset: 1 },
                })
                .collect();
            Plan::FinSum { parts }
        }
        (At(CPoint::Seq(u)), PlusInf) => Plan::OmegaStarSum { rule: SumRule::Splits { point: u.clone() } },
        (MinusInf, At(CPoint::Fin(r))) => {
            let n = r.len() - 1;
            let parts = (0..=n)
                .map(|j| Plan::OmegaStarSum {
                    rule: SumRule::Labels {
                        prefix: FinSeq::new(r[..j].to_vec()),
                        pivot: r[j].clone(),
                        offset: if j == n { 0 } else { 1 },
                    },
                })
                .collect();
            Plan::FinSum { parts }
        }
        (MinusInf, At(CPoint::Seq(u))) => Plan::OmegaSum { rule: SumRule::Splits { point: u.clone() } },
        (At(x), At(y)) => bounded(x, y)?,
        _ => return Err(Error::EmptyInterval),
    })
}

fn bounded(x: &CPoint, y: &CPoint) -> Result<Plan> {
    // (x, s) with x extending s: everything lies inside I_s, past x.
    if let CPoint::Fin(s) = y {
        if x.starts_with(s) {
            let rest = x.tail(s.len()).ok_or(Error::EmptyInterval)?;
            let inner = decompose(&IntervalBound::At(rest), &IntervalBound::PlusInf)?;
            return Ok(prefixed(s.clone(), inner));
        }
    }
    let mut k = 0;
    loop {
        match (x.entry(k), y.entry(k)) {
            (Some(a), Some(b)) if a == b => k += 1,
            (Some(a), Some(b)) if a < b => break,
            _ => return Err(Error::EmptyInterval),
        }
        if k > DEFAULT_COMPARE_CAP {
            return Err(Error::DepthCapExceeded { cap: DEFAULT_COMPARE_CAP });
        }
    }
    let a = x.entry(k).expect("checked");
    let b = y.entry(k).expect("checked");
    let mut parts = Vec::new();
    if let Some(rest) = x.tail(k + 1) {
        let inner = decompose(&IntervalBound::At(rest), &IntervalBound::PlusInf)?;
        parts.push(prefixed(FinSeq::new(vec![a.clone()]), inner));
    }
    if &b - &a >= BigInt::from(2) {
        parts.push(Plan::Range { lo: &a + 1u32, hi: &b - 1u32 });
    }
    match y.tail(k + 1) {
        None => parts.push(Plan::StdLeaf { label: FinSeq::new(vec![b]) }),
        Some(rest) => {
            let inner = decompose(&IntervalBound::MinusInf, &IntervalBound::At(rest))?;
            parts.push(prefixed(FinSeq::new(vec![b]), inner));
        }
    }
    let body = if parts.len() == 1 { parts.pop().expect("one part") } else { Plan::FinSum { parts } };
    Ok(prefixed(FinSeq::new(x.prefix(k)), body))
}

fn prefixed(prefix: FinSeq, inner: Plan) -> Plan {
    if prefix.is_empty() {
        inner
    } else {
        Plan::Prefixed { prefix, inner: Box::new(inner) }
    }
}

fn simplify(plan: Plan) -> Plan {
    match plan {
        Plan::Prefixed { prefix, inner } => match simplify(*inner) {
            Plan::StdLeaf { label } => Plan::StdLeaf { label: prefix.join(&label) },
            Plan::Prefixed { prefix: p2, inner } => Plan::Prefixed { prefix: prefix.join(&p2), inner },
            other => Plan::Prefixed { prefix, inner: Box::new(other) },
        },
        Plan::Range { lo, hi } if lo == hi => Plan::StdLeaf { label: FinSeq::new(vec![lo]) },
        Plan::FinSum { parts } => Plan::FinSum { parts: parts.into_iter().map(simplify).collect() },
        other => other,
    }
}
