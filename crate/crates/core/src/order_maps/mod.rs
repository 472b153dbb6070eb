//! Invertible order-preserving maps between `Z^ω`, its intervals and its
//! ordered sums.
//!
//! A sum `S·X` over an index shape `S` is represented by tagged points
//! `(i, x)` ordered lexicographically. Maps are expression trees; every node
//! knows its domain and codomain and can be applied in both directions.

mod builders;
mod plan;
mod sexpr;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::completion::{bound_compare, IntervalSpec};
use crate::error::{Error, Result};
use crate::json;
use crate::zseq::{lex_compare, FinSeq, ZSeq};

pub use builders::{
    everywhere_iso, f2, fin_sum_iso, flatten, flatten_shape, interval_iso, lindenbaum_merge, omega_iso,
    omega_star_iso, project, z_iso,
};
pub use plan::{decompose_interval, DecompositionPlan, SumRule};
pub use sexpr::{parse_map, parse_point, parse_space};

/// Default bound on chain-tracing steps in a merge.
pub const DEFAULT_STEP_CAP: usize = 10_000;

/// Index set of an ordered sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `{0, …, n-1}`
    Fin(usize),
    /// `{0, 1, 2, …}`
    Omega,
    /// `{…, -2, -1}`
    OmegaStar,
    Zee,
}

impl Shape {
    pub fn contains(&self, i: &BigInt) -> bool {
        match self {
            Shape::Fin(n) => !i.is_negative() && i < &BigInt::from(*n),
            Shape::Omega => !i.is_negative(),
            Shape::OmegaStar => i.is_negative(),
            Shape::Zee => true,
        }
    }

    /// Inclusive index range, `None` standing for an infinite end.
    pub fn range(&self) -> (Option<BigInt>, Option<BigInt>) {
        match self {
            Shape::Fin(n) => (Some(BigInt::zero()), Some(BigInt::from(*n) - 1)),
            Shape::Omega => (Some(BigInt::zero()), None),
            Shape::OmegaStar => (None, Some(-BigInt::one())),
            Shape::Zee => (None, None),
        }
    }

    /// The shape whose index set is exactly `[lo, hi]`, if there is one.
    pub fn from_range(lo: &Option<BigInt>, hi: &Option<BigInt>) -> Option<Shape> {
        match (lo, hi) {
            (None, None) => Some(Shape::Zee),
            (Some(l), None) if l.is_zero() => Some(Shape::Omega),
            (None, Some(h)) if *h == -BigInt::one() => Some(Shape::OmegaStar),
            (Some(l), Some(h)) if l.is_zero() && !h.is_negative() => (h + 1u32).to_usize().map(Shape::Fin),
            _ => None,
        }
    }

    pub fn is_subshape_of(&self, other: &Shape) -> bool {
        let (lo_a, hi_a) = self.range();
        let (lo_b, hi_b) = other.range();
        let lo_ok = match (&lo_a, &lo_b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a >= b,
        };
        let hi_ok = match (&hi_a, &hi_b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Fin(n) => write!(f, "(fin {n})"),
            Shape::Omega => f.write_str("omega"),
            Shape::OmegaStar => f.write_str("omega-star"),
            Shape::Zee => f.write_str("zee"),
        }
    }
}

/// A linear order built from `Z^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    ZOmega,
    StdInt(FinSeq),
    SubInt(IntervalSpec),
    Sum { shape: Shape, component: Box<Space> },
}

impl Space {
    pub fn sum(shape: Shape, component: Space) -> Space {
        Space::Sum { shape, component: Box::new(component) }
    }

    pub fn contains(&self, p: &SpacePoint) -> Result<bool> {
        match (self, p) {
            (Space::ZOmega, SpacePoint::Plain(_)) => Ok(true),
            (Space::StdInt(r), SpacePoint::Plain(u)) => Ok(u.starts_with(r)),
            (Space::SubInt(spec), SpacePoint::Plain(u)) => spec.contains(u),
            (Space::Sum { shape, component }, SpacePoint::Tagged { index, inner }) => {
                Ok(shape.contains(index) && component.contains(inner)?)
            }
            _ => Ok(false),
        }
    }

    /// The interval of `Z^ω` a plain space occupies.
    fn as_interval(&self) -> Option<IntervalSpec> {
        match self {
            Space::ZOmega => Some(IntervalSpec::whole()),
            Space::StdInt(r) => crate::completion::std_interval(r).ok(),
            Space::SubInt(spec) => Some(spec.clone()),
            Space::Sum { .. } => None,
        }
    }

    /// Conservative inclusion test used when chaining maps.
    pub fn is_subspace_of(&self, other: &Space) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            (Space::Sum { shape: sa, component: ca }, Space::Sum { shape: sb, component: cb }) => {
                sa.is_subshape_of(sb) && ca.is_subspace_of(cb)
            }
            (Space::Sum { .. }, _) | (_, Space::Sum { .. }) => false,
            _ => match (self.as_interval(), other.as_interval()) {
                (Some(a), Some(b)) => interval_within(&a, &b).unwrap_or(false),
                _ => false,
            },
        }
    }
}

fn interval_within(a: &IntervalSpec, b: &IntervalSpec) -> Result<bool> {
    Ok(bound_compare(b.lo(), a.lo())? != Ordering::Greater && bound_compare(a.hi(), b.hi())? != Ordering::Greater)
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::ZOmega => f.write_str("zomega"),
            Space::StdInt(r) => {
                f.write_str("(std")?;
                for x in r.iter() {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            Space::SubInt(spec) => write!(f, "(sub {} {})", sexpr::bound_text(spec.lo()), sexpr::bound_text(spec.hi())),
            Space::Sum { shape, component } => write!(f, "(sum {shape} {component})"),
        }
    }
}

/// A point of a [`Space`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacePoint {
    Plain(ZSeq),
    Tagged {
        #[serde(serialize_with = "json::serialize_int", deserialize_with = "json::deserialize_int")]
        index: BigInt,
        inner: Box<SpacePoint>,
    },
}

impl SpacePoint {
    pub fn tagged(index: impl Into<BigInt>, inner: SpacePoint) -> SpacePoint {
        SpacePoint::Tagged { index: index.into(), inner: Box::new(inner) }
    }

    pub fn as_plain(&self) -> Option<&ZSeq> {
        match self {
            SpacePoint::Plain(u) => Some(u),
            SpacePoint::Tagged { .. } => None,
        }
    }

    /// Index and inner point of a tagged point.
    pub fn as_tagged(&self) -> Option<(&BigInt, &SpacePoint)> {
        match self {
            SpacePoint::Tagged { index, inner } => Some((index, inner)),
            SpacePoint::Plain(_) => None,
        }
    }
}

impl From<ZSeq> for SpacePoint {
    fn from(u: ZSeq) -> Self {
        SpacePoint::Plain(u)
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Plain(u) => write!(f, "{u}"),
            SpacePoint::Tagged { index, inner } => write!(f, "({index} {inner})"),
        }
    }
}

/// Lexicographic order on points of the same space.
pub fn space_point_compare(a: &SpacePoint, b: &SpacePoint) -> Result<Ordering> {
    match (a, b) {
        (SpacePoint::Plain(u), SpacePoint::Plain(v)) => lex_compare(u, v),
        (SpacePoint::Tagged { index: i, inner: x }, SpacePoint::Tagged { index: j, inner: y }) => match i.cmp(j) {
            Ordering::Equal => space_point_compare(x, y),
            other => Ok(other),
        },
        _ => Err(Error::NotInDomain(format!("cannot compare {a} with {b}"))),
    }
}

/// One branch of a [`OrderMap::Piecewise`] map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Case {
    /// Inclusive bounds on the first index; `None` is unbounded.
    pub lo: Option<BigInt>,
    pub hi: Option<BigInt>,
    pub target: usize,
    pub map: OrderMap,
}

impl Case {
    fn admits(&self, i: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|l| i >= l) && self.hi.as_ref().is_none_or(|h| i <= h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderMap {
    Identity(Space),
    /// `u ↦ r ⌢ u`
    Project(FinSeq),
    /// `(z, u) ↦ z ⌢ u`
    Flatten(Shape),
    /// `x ↦ (index, x)`
    Tag { shape: Shape, index: BigInt, component: Space },
    /// `u ↦ u + k̄`
    Shift(BigInt),
    Inverse(Box<OrderMap>),
    /// Applied right to left, like function composition.
    Compose(Vec<OrderMap>),
    /// `(i, x) ↦ (target, map(i, x))` for the case whose range holds `i`.
    Piecewise(Vec<Case>),
    /// Bijection glued from `f: X → Y` and `g: Y → X` by chain tracing.
    Lindenbaum { f: Box<OrderMap>, g: Box<OrderMap>, step_cap: usize },
    SumMap { shape: Shape, map: Box<OrderMap> },
    /// `n·Z^ω → (n+1)·Z^ω`: splits the last copy in two with `map`.
    SpliceLast { n: usize, map: Box<OrderMap> },
    IntervalIso { spec: IntervalSpec, plan: DecompositionPlan },
}

impl OrderMap {
    pub fn domain(&self) -> Space {
        match self {
            OrderMap::Identity(s) => s.clone(),
            OrderMap::Project(_) | OrderMap::Shift(_) | OrderMap::IntervalIso { .. } => Space::ZOmega,
            OrderMap::Flatten(shape) => Space::sum(shape.clone(), Space::ZOmega),
            OrderMap::Tag { component, .. } => component.clone(),
            OrderMap::Inverse(m) => m.codomain(),
            OrderMap::Compose(ms) => ms.last().map_or(Space::ZOmega, OrderMap::domain),
            OrderMap::Piecewise(cases) => {
                let shape = piecewise_shape(cases).unwrap_or(Shape::Zee);
                let component = cases.first().map_or(Space::ZOmega, |c| sum_component(&c.map.domain()));
                Space::sum(shape, component)
            }
            OrderMap::Lindenbaum { f, .. } => f.domain(),
            OrderMap::SumMap { shape, map } => Space::sum(shape.clone(), map.domain()),
            OrderMap::SpliceLast { n, .. } => Space::sum(Shape::Fin(*n), Space::ZOmega),
        }
    }

    pub fn codomain(&self) -> Space {
        match self {
            OrderMap::Identity(s) => s.clone(),
            OrderMap::Project(r) => Space::StdInt(r.clone()),
            OrderMap::Shift(_) | OrderMap::Flatten(_) => Space::ZOmega,
            OrderMap::IntervalIso { spec, .. } => Space::SubInt(spec.clone()),
            OrderMap::Tag { shape, component, .. } => Space::sum(shape.clone(), component.clone()),
            OrderMap::Inverse(m) => m.domain(),
            OrderMap::Compose(ms) => ms.first().map_or(Space::ZOmega, OrderMap::codomain),
            OrderMap::Piecewise(cases) => {
                let component = cases.first().map_or(Space::ZOmega, |c| c.map.codomain());
                Space::sum(Shape::Fin(cases.len()), component)
            }
            OrderMap::Lindenbaum { f, .. } => f.codomain(),
            OrderMap::SumMap { shape, map } => Space::sum(shape.clone(), map.codomain()),
            OrderMap::SpliceLast { n, .. } => Space::sum(Shape::Fin(n + 1), Space::ZOmega),
        }
    }

    /// Checks that every node is well formed and that compositions chain.
    pub fn validate(&self) -> Result<()> {
        let ill = |msg: String| Err(Error::IllFormedMap(msg));
        match self {
            OrderMap::Identity(_) | OrderMap::Shift(_) | OrderMap::Flatten(_) => Ok(()),
            OrderMap::Project(r) => {
                if r.is_empty() {
                    return Err(Error::EmptyLabel);
                }
                Ok(())
            }
            OrderMap::Tag { shape, index, .. } => {
                if !shape.contains(index) {
                    return ill(format!("tag index {index} is outside {shape}"));
                }
                Ok(())
            }
            OrderMap::Inverse(m) => m.validate(),
            OrderMap::Compose(ms) => {
                if ms.is_empty() {
                    return ill("empty composition".into());
                }
                for m in ms {
                    m.validate()?;
                }
                for pair in ms.windows(2) {
                    let (outer, inner) = (&pair[0], &pair[1]);
                    if !inner.codomain().is_subspace_of(&outer.domain()) {
                        return ill(format!(
                            "composition does not chain: {} is not inside {}",
                            inner.codomain(),
                            outer.domain()
                        ));
                    }
                }
                Ok(())
            }
            OrderMap::Piecewise(cases) => {
                if cases.is_empty() {
                    return ill("piecewise map without cases".into());
                }
                piecewise_shape(cases).ok_or_else(|| {
                    Error::IllFormedMap("case ranges must tile a sum shape without overlap".into())
                })?;
                let mut targets: Vec<usize> = cases.iter().map(|c| c.target).collect();
                targets.sort_unstable();
                if targets != (0..cases.len()).collect::<Vec<_>>() {
                    return ill("case targets must be 0..n, each once".into());
                }
                // targets must follow the order of the ranges
                let mut by_range: Vec<&Case> = cases.iter().collect();
                by_range.sort_by(|a, b| range_start_cmp(&a.lo, &b.lo));
                if by_range.iter().enumerate().any(|(i, c)| c.target != i) {
                    return ill("case targets must increase with the index ranges".into());
                }
                let codomain = cases[0].map.codomain();
                for c in cases {
                    c.map.validate()?;
                    if !shape_range_inside(&c.lo, &c.hi, &c.map.domain()) {
                        return ill(format!("case map domain {} does not cover its index range", c.map.domain()));
                    }
                    if c.map.codomain() != codomain {
                        return ill("case maps must share a codomain".into());
                    }
                }
                Ok(())
            }
            OrderMap::Lindenbaum { f, g, step_cap } => {
                f.validate()?;
                g.validate()?;
                if *step_cap == 0 {
                    return ill("step cap must be positive".into());
                }
                if !f.codomain().is_subspace_of(&g.domain()) || !g.codomain().is_subspace_of(&f.domain()) {
                    return ill(format!(
                        "merge needs f: X → Y and g: Y → X, got f: {} → {} and g: {} → {}",
                        f.domain(),
                        f.codomain(),
                        g.domain(),
                        g.codomain()
                    ));
                }
                Ok(())
            }
            OrderMap::SumMap { map, .. } => map.validate(),
            OrderMap::SpliceLast { n, map } => {
                map.validate()?;
                if *n == 0 {
                    return ill("splice needs at least one copy".into());
                }
                let expected = Space::sum(Shape::Fin(2), Space::ZOmega);
                if !map.codomain().is_subspace_of(&expected) || !Space::ZOmega.is_subspace_of(&map.domain()) {
                    return ill(format!("splice map must send zomega into {expected}"));
                }
                Ok(())
            }
            OrderMap::IntervalIso { .. } => Ok(()),
        }
    }

    pub fn inverse(self) -> OrderMap {
        match self {
            OrderMap::Inverse(m) => *m,
            other => OrderMap::Inverse(Box::new(other)),
        }
    }

    /// Forward image of `p`.
    pub fn apply(&self, p: &SpacePoint) -> Result<SpacePoint> {
        let outside = || Error::NotInDomain(format!("{p} is not in {}", self.domain()));
        match self {
            OrderMap::Identity(s) => {
                if !s.contains(p)? {
                    return Err(outside());
                }
                Ok(p.clone())
            }
            OrderMap::Project(r) => {
                let u = p.as_plain().ok_or_else(outside)?;
                Ok(SpacePoint::Plain(u.prepend(r)))
            }
            OrderMap::Flatten(shape) => match p {
                SpacePoint::Tagged { index, inner } if shape.contains(index) => {
                    let u = inner.as_plain().ok_or_else(outside)?;
                    Ok(SpacePoint::Plain(u.prepend(std::slice::from_ref(index))))
                }
                _ => Err(outside()),
            },
            OrderMap::Tag { index, component, .. } => {
                if !component.contains(p)? {
                    return Err(outside());
                }
                Ok(SpacePoint::Tagged { index: index.clone(), inner: Box::new(p.clone()) })
            }
            OrderMap::Shift(k) => {
                let u = p.as_plain().ok_or_else(outside)?;
                Ok(SpacePoint::Plain(u.add_const(k)))
            }
            OrderMap::Inverse(m) => m.unapply(p),
            OrderMap::Compose(ms) => {
                let mut cur = p.clone();
                for m in ms.iter().rev() {
                    cur = m.apply(&cur)?;
                }
                Ok(cur)
            }
            OrderMap::Piecewise(cases) => {
                let (index, _) = p.as_tagged().ok_or_else(outside)?;
                let case = cases.iter().find(|c| c.admits(index)).ok_or_else(outside)?;
                Ok(SpacePoint::tagged(case.target, case.map.apply(p)?))
            }
            OrderMap::Lindenbaum { f, g, step_cap } => merge_forward(f, g, *step_cap, p),
            OrderMap::SumMap { shape, map } => match p {
                SpacePoint::Tagged { index, inner } if shape.contains(index) => {
                    Ok(SpacePoint::Tagged { index: index.clone(), inner: Box::new(map.apply(inner)?) })
                }
                _ => Err(outside()),
            },
            OrderMap::SpliceLast { n, map } => {
                let (index, inner) = p.as_tagged().ok_or_else(outside)?;
                let last = BigInt::from(n - 1);
                if index.is_negative() || *index > last {
                    return Err(outside());
                }
                if *index < last {
                    return Ok(p.clone());
                }
                let split = map.apply(inner)?;
                let (j, v) = split
                    .as_tagged()
                    .ok_or_else(|| Error::IllFormedMap("splice map must produce a tagged point".into()))?;
                Ok(SpacePoint::Tagged { index: last + j, inner: Box::new(v.clone()) })
            }
            OrderMap::IntervalIso { plan, .. } => {
                let u = p.as_plain().ok_or_else(outside)?;
                Ok(SpacePoint::Plain(plan.apply(u)?))
            }
        }
    }

    /// Preimage of `q`, or `None` when `q` is outside the image.
    pub fn try_unapply(&self, q: &SpacePoint) -> Result<Option<SpacePoint>> {
        match self {
            OrderMap::Identity(s) => Ok(s.contains(q)?.then(|| q.clone())),
            OrderMap::Project(r) => Ok(q.as_plain().and_then(|v| v.strip_prefix(r)).map(SpacePoint::Plain)),
            OrderMap::Flatten(shape) => {
                let Some(v) = q.as_plain() else { return Ok(None) };
                let first = v.entry(0);
                if !shape.contains(&first) {
                    return Ok(None);
                }
                Ok(Some(SpacePoint::Tagged { index: first, inner: Box::new(SpacePoint::Plain(v.tail_shift(1))) }))
            }
            OrderMap::Tag { index, component, .. } => match q {
                SpacePoint::Tagged { index: i, inner } if i == index && component.contains(inner)? => {
                    Ok(Some((**inner).clone()))
                }
                _ => Ok(None),
            },
            OrderMap::Shift(k) => Ok(q.as_plain().map(|v| SpacePoint::Plain(v.add_const(&-k)))),
            OrderMap::Inverse(m) => match m.apply(q) {
                Ok(p) => Ok(Some(p)),
                Err(Error::NotInDomain(_)) => Ok(None),
                Err(e) => Err(e),
            },
            OrderMap::Compose(ms) => {
                let mut cur = q.clone();
                for m in ms {
                    match m.try_unapply(&cur)? {
                        Some(p) => cur = p,
                        None => return Ok(None),
                    }
                }
                Ok(Some(cur))
            }
            OrderMap::Piecewise(cases) => {
                let Some((target, inner)) = q.as_tagged() else { return Ok(None) };
                let Some(case) = cases.iter().find(|c| BigInt::from(c.target) == *target) else {
                    return Ok(None);
                };
                let Some(p) = case.map.try_unapply(inner)? else { return Ok(None) };
                Ok(p.as_tagged().is_some_and(|(i, _)| case.admits(i)).then_some(p))
            }
            OrderMap::Lindenbaum { f, g, step_cap } => merge_backward(f, g, *step_cap, q),
            OrderMap::SumMap { shape, map } => match q {
                SpacePoint::Tagged { index, inner } if shape.contains(index) => Ok(map
                    .try_unapply(inner)?
                    .map(|p| SpacePoint::Tagged { index: index.clone(), inner: Box::new(p) })),
                _ => Ok(None),
            },
            OrderMap::SpliceLast { n, map } => {
                let Some((index, inner)) = q.as_tagged() else { return Ok(None) };
                let last = BigInt::from(n - 1);
                if index.is_negative() || *index > &last + 1u32 {
                    return Ok(None);
                }
                if *index < last {
                    return Ok(Some(q.clone()));
                }
                let local = SpacePoint::Tagged { index: index - &last, inner: Box::new(inner.clone()) };
                Ok(map.try_unapply(&local)?.map(|u| SpacePoint::Tagged { index: last, inner: Box::new(u) }))
            }
            OrderMap::IntervalIso { plan, .. } => match q.as_plain() {
                Some(v) => Ok(plan.unapply(v)?.map(SpacePoint::Plain)),
                None => Ok(None),
            },
        }
    }

    /// Preimage of `q`; fails with [`Error::NotInInterval`] outside the image.
    pub fn unapply(&self, q: &SpacePoint) -> Result<SpacePoint> {
        self.try_unapply(q)?.ok_or_else(|| Error::NotInInterval(format!("{q} is not in the image of this map")))
    }

    /// [`OrderMap::apply`] on plain points.
    pub fn apply_seq(&self, u: &ZSeq) -> Result<ZSeq> {
        expect_plain(self.apply(&SpacePoint::Plain(u.clone()))?)
    }

    /// [`OrderMap::unapply`] on plain points.
    pub fn unapply_seq(&self, v: &ZSeq) -> Result<ZSeq> {
        expect_plain(self.unapply(&SpacePoint::Plain(v.clone()))?)
    }
}

fn expect_plain(p: SpacePoint) -> Result<ZSeq> {
    match p {
        SpacePoint::Plain(u) => Ok(u),
        other => Err(Error::NotInDomain(format!("expected a plain point, got {other}"))),
    }
}

fn sum_component(space: &Space) -> Space {
    match space {
        Space::Sum { component, .. } => (**component).clone(),
        other => other.clone(),
    }
}

fn range_start_cmp(a: &Option<BigInt>, b: &Option<BigInt>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// True when the index range `[lo, hi]` lies inside the shape of `space`.
fn shape_range_inside(lo: &Option<BigInt>, hi: &Option<BigInt>, space: &Space) -> bool {
    let Space::Sum { shape, .. } = space else { return false };
    let (slo, shi) = shape.range();
    let lo_ok = match (lo, &slo) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a >= b,
    };
    let hi_ok = match (hi, &shi) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    };
    lo_ok && hi_ok
}

/// The shape tiled by the case ranges, if they tile one without gaps.
fn piecewise_shape(cases: &[Case]) -> Option<Shape> {
    let mut ranges: Vec<(&Option<BigInt>, &Option<BigInt>)> = cases.iter().map(|c| (&c.lo, &c.hi)).collect();
    ranges.sort_by(|a, b| range_start_cmp(a.0, b.0));
    for pair in ranges.windows(2) {
        let next_start = pair[1].0.as_ref()?;
        let this_end = pair[0].1.as_ref()?;
        if *next_start != this_end + 1u32 {
            return None;
        }
    }
    for (lo, hi) in &ranges {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return None;
            }
        }
    }
    Shape::from_range(ranges[0].0, ranges[ranges.len() - 1].1)
}

/// Forward chain tracing for a merged map.
///
/// From `x` walk back through `g` and `f` alternately. Hitting a point of `X`
/// outside `g`'s image means `x` belongs to the `f` side; hitting a point of
/// `Y` outside `f`'s image means it belongs to the `g⁻¹` side. A repeated
/// state is a chain without start and goes to the `f` side.
fn merge_forward(f: &OrderMap, g: &OrderMap, cap: usize, x0: &SpacePoint) -> Result<SpacePoint> {
    let mut seen = HashSet::new();
    let mut x = x0.clone();
    let mut first_y = None;
    for _ in 0..cap {
        if !seen.insert(x.clone()) {
            return f.apply(x0);
        }
        let Some(y) = g.try_unapply(&x)? else {
            return f.apply(x0);
        };
        if first_y.is_none() {
            first_y = Some(y.clone());
        }
        match f.try_unapply(&y)? {
            None => return Ok(first_y.expect("set on the first step")),
            Some(next) => x = next,
        }
    }
    Err(Error::StepCapExceeded { cap })
}

/// Inverse of [`merge_forward`], tracing the chain of `y0` in `Y`.
fn merge_backward(f: &OrderMap, g: &OrderMap, cap: usize, y0: &SpacePoint) -> Result<Option<SpacePoint>> {
    let mut seen = HashSet::new();
    let mut y = y0.clone();
    for _ in 0..cap {
        if !seen.insert(y.clone()) {
            return f.try_unapply(y0);
        }
        let Some(x) = f.try_unapply(&y)? else {
            return match g.apply(y0) {
                Ok(x) => Ok(Some(x)),
                Err(Error::NotInDomain(_)) => Ok(None),
                Err(e) => Err(e),
            };
        };
        match g.try_unapply(&x)? {
            None => return f.try_unapply(y0),
            Some(next) => y = next,
        }
    }
    Err(Error::StepCapExceeded { cap })
}

#[cfg(test)]
mod tests;
