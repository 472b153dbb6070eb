//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::zseq::ZSeq;

/// EAP sequences with small entries; `inc` drawn from `incs`.
pub fn zseq_with(incs: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = ZSeq> {
    (
        prop::collection::vec(-6i64..=6, 0..4),
        prop::collection::vec(-6i64..=6, 1..4),
        incs,
    )
        .prop_map(|(h, b, k)| ZSeq::from_parts(&h, &b, k).expect("nonempty block"))
}

pub fn zseq() -> impl Strategy<Value = ZSeq> {
    prop_oneof![3 => zseq_with(0..=0), 1 => zseq_with(-2..=2)]
}

pub fn periodic() -> impl Strategy<Value = ZSeq> {
    zseq_with(0..=0)
}

pub fn prefix() -> impl Strategy<Value = Vec<num_bigint::BigInt>> {
    prop::collection::vec(-6i64..=6, 0..4).prop_map(|v| v.into_iter().map(Into::into).collect())
}
