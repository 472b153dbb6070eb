//! Constructors for the concrete isomorphisms.

use num_bigint::BigInt;

use super::{plan, Case, OrderMap, Shape, Space, DEFAULT_STEP_CAP};
use crate::completion::IntervalSpec;
use crate::error::{Error, Result};
use crate::zseq::FinSeq;

/// `f_r(u) = r ⌢ u`, an isomorphism of `Z^ω` onto `I_r`.
pub fn project(r: &FinSeq) -> Result<OrderMap> {
    if r.is_empty() {
        return Err(Error::EmptyLabel);
    }
    Ok(OrderMap::Project(r.clone()))
}

/// `(z, u) ↦ z ⌢ u` on `Z·Z^ω`.
pub fn flatten() -> OrderMap {
    OrderMap::Flatten(Shape::Zee)
}

/// [`flatten`] restricted to a sub-shape of `Z`.
pub fn flatten_shape(shape: Shape) -> OrderMap {
    OrderMap::Flatten(shape)
}

/// Glues `f: X → Y` and `g: Y → X` into a bijection `X → Y`.
pub fn lindenbaum_merge(f: OrderMap, g: OrderMap, step_cap: usize) -> Result<OrderMap> {
    let m = OrderMap::Lindenbaum { f: Box::new(f), g: Box::new(g), step_cap };
    m.validate()?;
    Ok(m)
}

fn tag(shape: Shape, index: i64) -> OrderMap {
    OrderMap::Tag { shape, index: BigInt::from(index), component: Space::ZOmega }
}

/// `Z^ω → ω·Z^ω`: `Z^ω` sits as the first copy and `ω·Z^ω` flattens onto
/// the points with nonnegative first entry.
pub fn omega_iso() -> OrderMap {
    lindenbaum_merge(tag(Shape::Omega, 0), flatten_shape(Shape::Omega), DEFAULT_STEP_CAP).expect("well formed")
}

/// `Z^ω → ω*·Z^ω`, the mirror of [`omega_iso`] using the last copy.
pub fn omega_star_iso() -> OrderMap {
    lindenbaum_merge(tag(Shape::OmegaStar, -1), flatten_shape(Shape::OmegaStar), DEFAULT_STEP_CAP)
        .expect("well formed")
}

/// `Z^ω → Z·Z^ω`, splitting off the first coordinate.
pub fn z_iso() -> OrderMap {
    flatten().inverse()
}

/// `Z^ω → 2·Z^ω`: view `Z·Z^ω` as `ω*·Z^ω + ω·Z^ω` and collapse each half.
pub fn f2() -> OrderMap {
    let cases = vec![
        Case { lo: None, hi: Some(BigInt::from(-1)), target: 0, map: omega_star_iso().inverse() },
        Case { lo: Some(BigInt::from(0)), hi: None, target: 1, map: omega_iso().inverse() },
    ];
    OrderMap::Compose(vec![OrderMap::Piecewise(cases), z_iso()])
}

/// `Z^ω → n·Z^ω`, splitting the last copy repeatedly.
pub fn fin_sum_iso(n: usize) -> Result<OrderMap> {
    match n {
        0 => Err(Error::IllFormedMap("a sum needs at least one copy".into())),
        1 => Ok(tag(Shape::Fin(1), 0)),
        2 => Ok(f2()),
        _ => {
            let mut maps = Vec::with_capacity(n - 1);
            for k in (2..n).rev() {
                maps.push(OrderMap::SpliceLast { n: k, map: Box::new(f2()) });
            }
            maps.push(f2());
            Ok(OrderMap::Compose(maps))
        }
    }
}

/// `f_I: Z^ω → I`.
pub fn interval_iso(spec: &IntervalSpec) -> Result<OrderMap> {
    if spec.is_whole() {
        return Ok(OrderMap::Identity(Space::ZOmega));
    }
    if let Some(r) = spec.standard_label() {
        return project(&r);
    }
    let plan = plan::decompose_interval(spec)?;
    Ok(OrderMap::IntervalIso { spec: spec.clone(), plan })
}

/// `g_I = f_I ∘ g ∘ f_I⁻¹` with `g(u) = u + 1̄`, an automorphism of `I`
/// exchanging the two parity classes.
pub fn everywhere_iso(spec: &IntervalSpec) -> Result<OrderMap> {
    let shift = OrderMap::Shift(BigInt::from(1));
    if spec.is_whole() {
        return Ok(shift);
    }
    let f = interval_iso(spec)?;
    Ok(OrderMap::Compose(vec![f.clone(), shift, f.inverse()]))
}
