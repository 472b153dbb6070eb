use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::completion::{std_interval, IntervalBound};
use crate::tailclass::{classify, in_C};
use crate::testgen;

fn z(text: &str) -> ZSeq {
    text.parse().unwrap()
}

fn plain(text: &str) -> SpacePoint {
    SpacePoint::Plain(z(text))
}

fn tagged(i: i64, inner: ZSeq) -> SpacePoint {
    SpacePoint::tagged(i, SpacePoint::Plain(inner))
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn interval(lo: &str, hi: &str) -> IntervalSpec {
    IntervalSpec::new(lo.parse().unwrap(), hi.parse().unwrap()).unwrap()
}

/// Hand-derived form of the ω merge: strip the leading zeros and look at
/// the first nonzero entry.
fn omega_closed_form(x: &ZSeq) -> SpacePoint {
    let zero = BigInt::from(0);
    let m = x.iter().take(10_000).take_while(|e| *e == zero).count();
    if m == 10_000 {
        return tagged(0, x.clone());
    }
    let w0 = x.entry(m);
    if w0 < zero {
        tagged(0, x.clone())
    } else if m == 0 {
        SpacePoint::Tagged { index: w0, inner: Box::new(SpacePoint::Plain(x.tail_shift(1))) }
    } else {
        tagged(0, x.tail_shift(1))
    }
}

#[test]
fn project_examples() {
    let p = project(&FinSeq::from_i64s(&[0])).unwrap();
    assert_eq!(p.apply(&plain("[|0;+0]")).unwrap(), plain("[0|0;+0]"));
    assert_eq!(p.unapply(&plain("[0,3|1;+0]")).unwrap(), plain("[3|1;+0]"));
    assert!(matches!(p.unapply(&plain("[1|0;+0]")), Err(Error::NotInInterval(_))));
    assert_eq!(project(&FinSeq::empty()), Err(Error::EmptyLabel));
}

#[test]
fn flatten_examples() {
    let fl = flatten();
    assert_eq!(fl.apply(&tagged(5, ZSeq::constant(0))).unwrap(), plain("[5|0;+0]"));
    assert_eq!(fl.unapply(&plain("[-2,7|1;+0]")).unwrap(), tagged(-2, z("[7|1;+0]")));
    // restricted to ω the image is the final segment of nonnegative first entries
    let half = flatten_shape(Shape::Omega);
    assert!(half.try_unapply(&plain("[-1|0;+0]")).unwrap().is_none());
    assert!(half.try_unapply(&plain("[0|0;+0]")).unwrap().is_some());
}

#[test]
fn merge_examples() {
    let h = omega_iso();
    assert_eq!(h.apply(&plain("[5,1|2;+0]")).unwrap(), tagged(5, z("[1|2;+0]")));
    assert_eq!(h.apply(&plain("[-3|4;+0]")).unwrap(), tagged(0, z("[-3|4;+0]")));
    assert_eq!(h.apply(&plain("[|0;+0]")).unwrap(), tagged(0, ZSeq::constant(0)));
    assert_eq!(h.apply(&plain("[0,0,3|1;+0]")).unwrap(), tagged(0, z("[0,3|1;+0]")));
}

#[test]
fn omega_star_merge_examples() {
    let h = omega_star_iso();
    assert_eq!(h.apply(&plain("[2|0;+0]")).unwrap(), tagged(-1, z("[2|0;+0]")));
    assert_eq!(h.apply(&plain("[-4|0;+0]")).unwrap(), tagged(-4, ZSeq::constant(0)));
    assert_eq!(h.apply(&plain("[|-1;+0]")).unwrap(), tagged(-1, ZSeq::constant(-1)));
    // chain ends at a point with nonnegative first entry: f side
    assert_eq!(h.apply(&plain("[-1,-1,5|0;+0]")).unwrap(), tagged(-1, z("[-1,-1,5|0;+0]")));
    // chain ends at a tagged point with index below -1: g side
    assert_eq!(h.apply(&plain("[-1,-3|0;+0]")).unwrap(), tagged(-1, z("[-3|0;+0]")));
}

#[test]
fn merge_step_cap() {
    let capped = OrderMap::Lindenbaum {
        f: Box::new(OrderMap::Tag { shape: Shape::Omega, index: 0.into(), component: Space::ZOmega }),
        g: Box::new(flatten_shape(Shape::Omega)),
        step_cap: 3,
    };
    let deep = plain("[0,0,0,0,0,0|1;+0]");
    assert_eq!(capped.apply(&deep), Err(Error::StepCapExceeded { cap: 3 }));
    assert!(omega_iso().apply(&deep).is_ok());
}

#[test]
fn merge_rejects_mismatched_maps() {
    let bad = lindenbaum_merge(OrderMap::Shift(1.into()), flatten_shape(Shape::Omega), 10);
    assert!(matches!(bad, Err(Error::IllFormedMap(_))));
}

#[test]
fn fin_sum_examples() {
    let f = fin_sum_iso(2).unwrap();
    assert_eq!(f.apply(&plain("[-3|0;+0]")).unwrap(), tagged(0, z("[-3|0;+0]")));
    let f3 = fin_sum_iso(3).unwrap();
    assert_eq!(f3.domain(), Space::ZOmega);
    assert_eq!(f3.codomain(), Space::sum(Shape::Fin(3), Space::ZOmega));
    assert!(f3.validate().is_ok());
    assert!(fin_sum_iso(0).is_err());
}

#[test]
fn omega_index_coverage() {
    let h = omega_iso();
    let mut seen = std::collections::BTreeSet::new();
    for a in -3..=6i64 {
        for b in -2..=2i64 {
            let p = h.apply(&SpacePoint::Plain(ZSeq::from_parts(&[a, b], &[0], 0).unwrap())).unwrap();
            seen.insert(p.as_tagged().unwrap().0.clone());
        }
    }
    for k in 0..=6 {
        assert!(seen.contains(&BigInt::from(k)), "index {k} not reached");
    }
}

#[test]
fn interval_iso_special_cases() {
    assert_eq!(interval_iso(&IntervalSpec::whole()).unwrap(), OrderMap::Identity(Space::ZOmega));
    let r = FinSeq::from_i64s(&[2, -1]);
    assert_eq!(interval_iso(&std_interval(&r).unwrap()).unwrap(), OrderMap::Project(r));
}

#[test]
fn everywhere_examples() {
    let g = everywhere_iso(&IntervalSpec::whole()).unwrap();
    assert_eq!(g.apply(&plain("[|0;+0]")).unwrap(), plain("[|1;+0]"));
    let g0 = everywhere_iso(&std_interval(&FinSeq::from_i64s(&[0])).unwrap()).unwrap();
    let u = z("[0|0;+0]");
    let v = g0.apply_seq(&u).unwrap();
    assert_eq!(v, z("[0|1;+0]"));
    assert_eq!(classify(&u), crate::Classification::A);
    assert_eq!(classify(&v), crate::Classification::B);
    assert_eq!(g0.unapply_seq(&v).unwrap(), u);
}

#[test]
fn json_forms() {
    let p = SpacePoint::tagged(3, SpacePoint::Plain(ZSeq::constant(0)));
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(text, r#"{"tagged":{"index":3,"inner":{"plain":{"head":[],"block":[0],"inc":0}}}}"#);
    assert_eq!(serde_json::from_str::<SpacePoint>(&text).unwrap(), p);
}

#[test]
fn subspace_rules() {
    let i0 = Space::StdInt(FinSeq::from_i64s(&[0]));
    let i01 = Space::StdInt(FinSeq::from_i64s(&[0, 1]));
    assert!(i01.is_subspace_of(&i0));
    assert!(!i0.is_subspace_of(&i01));
    assert!(i0.is_subspace_of(&Space::ZOmega));
    assert!(i0.is_subspace_of(&Space::SubInt(interval("-inf", "(0)"))));
    assert!(Space::sum(Shape::Fin(2), Space::ZOmega).is_subspace_of(&Space::sum(Shape::Omega, Space::ZOmega)));
    assert!(!Space::sum(Shape::Zee, Space::ZOmega).is_subspace_of(&Space::sum(Shape::Omega, Space::ZOmega)));
}

fn sample_intervals() -> Vec<IntervalSpec> {
    [
        ("(0)", "+inf"),
        ("(1,-2,3)", "+inf"),
        ("-inf", "(4,0)"),
        ("-inf", "(0)"),
        ("[|0;+0]", "+inf"),
        ("[2|-1;+0]", "+inf"),
        ("-inf", "[1|2,3;+0]"),
        ("-inf", "[|0;+1]"),
        ("(1,7)", "(5)"),
        ("(-3)", "(40)"),
        ("[|0,1;+0]", "(0,2)"),
        ("(0,3)", "[0,4|-1;+1]"),
        ("(3,1,1)", "(3,1)"),
        ("[|0;+0]", "[|1;+0]"),
        ("[2|0;+0]", "(2)"),
    ]
    .iter()
    .map(|(lo, hi)| interval(lo, hi))
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn omega_iso_matches_closed_form(x in testgen::zseq()) {
        prop_assert_eq!(omega_iso().apply(&SpacePoint::Plain(x.clone())).unwrap(), omega_closed_form(&x));
    }

    #[test]
    fn project_composes(r in testgen::prefix(), s in testgen::prefix(), u in testgen::zseq()) {
        prop_assume!(!r.is_empty() && !s.is_empty());
        let (r, s) = (FinSeq::new(r), FinSeq::new(s));
        let both = OrderMap::Compose(vec![project(&r).unwrap(), project(&s).unwrap()]);
        let joined = project(&r.join(&s)).unwrap();
        prop_assert_eq!(both.apply_seq(&u).unwrap(), joined.apply_seq(&u).unwrap());
        prop_assert_eq!(classify(&joined.apply_seq(&u).unwrap()), classify(&u));
    }

    #[test]
    fn isomorphisms_round_trip_and_preserve_order(u in testgen::zseq(), v in testgen::zseq()) {
        let maps = [omega_iso(), omega_star_iso(), z_iso(), fin_sum_iso(2).unwrap(), fin_sum_iso(4).unwrap()];
        for m in &maps {
            let (pu, pv) = (SpacePoint::Plain(u.clone()), SpacePoint::Plain(v.clone()));
            let (iu, iv) = (m.apply(&pu).unwrap(), m.apply(&pv).unwrap());
            prop_assert_eq!(m.unapply(&iu).unwrap(), pu.clone());
            prop_assert_eq!(space_point_compare(&iu, &iv).unwrap(), u.cmp(&v), "{}", m);
            prop_assert!(m.codomain().contains(&iu).unwrap());
            if !in_C(&u) {
                let mut inner = &iu;
                while let Some((_, next)) = inner.as_tagged() {
                    inner = next;
                }
                prop_assert_eq!(classify(inner.as_plain().unwrap()), classify(&u));
            }
        }
    }

    #[test]
    fn interval_isos_land_inside(u in testgen::zseq(), v in testgen::zseq()) {
        for spec in sample_intervals() {
            let f = interval_iso(&spec).unwrap();
            let (fu, fv) = (f.apply_seq(&u).unwrap(), f.apply_seq(&v).unwrap());
            prop_assert!(spec.contains(&fu).unwrap(), "{} -> {} not in {}", u, fu, spec);
            prop_assert_eq!(fu.cmp(&fv), u.cmp(&v));
            prop_assert_eq!(f.unapply_seq(&fu).unwrap(), u.clone());
            if !in_C(&u) {
                prop_assert_eq!(classify(&fu), classify(&u));
            }
        }
    }

    #[test]
    fn everywhere_isos_swap_parity(u in testgen::periodic()) {
        for spec in sample_intervals() {
            let f = interval_iso(&spec).unwrap();
            let g = everywhere_iso(&spec).unwrap();
            let x = f.apply_seq(&u).unwrap();
            let y = g.apply_seq(&x).unwrap();
            prop_assert!(spec.contains(&y).unwrap());
            prop_assert_ne!(classify(&x), classify(&y));
            prop_assert_eq!(g.unapply_seq(&y).unwrap(), x);
        }
    }

    #[test]
    fn unapply_outside_interval_is_rejected(u in testgen::zseq()) {
        for spec in sample_intervals() {
            if !spec.contains(&u).unwrap() {
                let f = interval_iso(&spec).unwrap();
                prop_assert!(matches!(f.unapply_seq(&u), Err(Error::NotInInterval(_))));
            }
        }
    }
}

#[test]
fn unbounded_side_checks() {
    let spec = IntervalSpec::new(IntervalBound::MinusInf, "(0)".parse().unwrap()).unwrap();
    let f = interval_iso(&spec).unwrap();
    let img = f.apply_seq(&ZSeq::constant(7)).unwrap();
    assert_eq!(lex_compare(&img, &z("[0|0;+0]")).unwrap(), Ordering::Greater);
    assert!(img.starts_with(&ints(&[0])));
}
