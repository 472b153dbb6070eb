//! Exact arithmetic on eventually arithmetic-periodic points of `Z^ω` under
//! the lexicographic order, the A/B/C tail classification, isomorphisms
//! between `Z^ω` and its open intervals, and a numeric collision engine on
//! the real line.

pub mod collision;
pub mod completion;
pub mod error;
mod json;
pub mod order_maps;
pub mod sample;
pub mod tailclass;
#[cfg(test)]
mod testgen;
pub mod verify;
pub mod zseq;

pub use collision::{
    back_and_forth, collision_point, crossing_index, find_even_n, irreducible_check, iterate_orbit, theorem1_witness,
    Auto1D, RealInterval, WitnessReport,
};
pub use completion::{
    cpoint_compare, embed_enclosure, monotone_limit, std_interval, CPoint, Direction, Enclosure, IntervalBound,
    IntervalSpec, LimitResult,
};
pub use error::{Error, Result};
pub use order_maps::{everywhere_iso, interval_iso, OrderMap, Shape, Space, SpacePoint};
pub use tailclass::{
    classify, in_C, meeting_rep, orbit_signatures, signature, tail_equivalent, Classification, MeetingRep,
    TailSignature,
};
pub use verify::{run_verify, VerifyReport};
pub use zseq::{lex_compare, make_zseq, parse_zseq_literal, FinSeq, ZSeq};
