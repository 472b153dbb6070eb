//! Seeded generators for the verification suites, the benches and the CLI.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collision::Auto1D;
use crate::completion::{CPoint, IntervalBound, IntervalSpec};
use crate::order_maps::{Space, SpacePoint};
use crate::tailclass::in_C;
use crate::zseq::{FinSeq, ZSeq};

/// Mixes a base seed with a stream tag and a case index.
pub fn case_seed(seed: u64, stream: u64, case: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn ints(&mut self, len: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..len).map(|_| self.int(lo, hi)).collect()
    }

    pub fn prefix(&mut self, max_len: usize) -> FinSeq {
        let len = self.rng.gen_range(0..=max_len);
        FinSeq::from_i64s(&self.ints(len, -6, 6))
    }

    pub fn nonempty_prefix(&mut self, max_len: usize) -> FinSeq {
        let len = self.rng.gen_range(1..=max_len.max(1));
        FinSeq::from_i64s(&self.ints(len, -6, 6))
    }

    pub fn zseq_with_inc(&mut self, inc: i64) -> ZSeq {
        let hl = self.rng.gen_range(0..4);
        let bl = self.rng.gen_range(1..4);
        let head = self.ints(hl, -6, 6);
        let block = self.ints(bl, -6, 6);
        ZSeq::from_parts(&head, &block, inc).expect("nonempty block")
    }

    /// Eventually periodic, hence outside `C`.
    pub fn periodic(&mut self) -> ZSeq {
        self.zseq_with_inc(0)
    }

    /// Mostly periodic, one in four with a nonzero increment.
    pub fn zseq(&mut self) -> ZSeq {
        if self.chance(0.25) {
            let k = *[-3i64, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
            self.zseq_with_inc(k)
        } else {
            self.periodic()
        }
    }

    /// A sequence agreeing with `u` on a random prefix, then diverging.
    pub fn near(&mut self, u: &ZSeq) -> ZSeq {
        let m = self.rng.gen_range(0..24);
        let mut r = u.prefix(m).into_entries();
        if self.chance(0.8) {
            r.push(u.entry(m) + BigInt::from(self.int(-2, 2)));
        }
        self.zseq().prepend(&r)
    }

    /// Unnormalized generator triple whose denotation is easy to expand.
    pub fn raw_parts(&mut self) -> (Vec<i64>, Vec<i64>, i64) {
        let hl = self.rng.gen_range(0..5);
        let head = self.ints(hl, -4, 4);
        let bl = self.rng.gen_range(1..4);
        let base = self.ints(bl, -4, 4);
        let reps = self.rng.gen_range(1..4);
        let inc = if self.chance(0.6) { 0 } else { self.int(-2, 2) };
        let mut block = Vec::with_capacity(bl * reps);
        for r in 0..reps {
            block.extend(base.iter().map(|b| b + inc * r as i64));
        }
        (head, block, inc * reps as i64)
    }

    pub fn cpoint(&mut self) -> CPoint {
        if self.chance(0.4) {
            CPoint::Fin(self.nonempty_prefix(4))
        } else {
            CPoint::Seq(self.zseq())
        }
    }

    fn cpoint_near(&mut self, p: &CPoint) -> CPoint {
        let len = p.len().unwrap_or(6);
        let m = self.rng.gen_range(0..len.min(6));
        let mut r = p.prefix(m);
        let base = p.entry(m).unwrap_or_default();
        r.push(base + BigInt::from(self.int(-3, 3)));
        if self.chance(0.4) {
            CPoint::Fin(FinSeq::new(r))
        } else {
            CPoint::Seq(self.zseq().prepend(&r))
        }
    }

    /// A nonempty open interval with a mix of finite, sequence and infinite
    /// endpoints.
    pub fn interval(&mut self) -> IntervalSpec {
        loop {
            let p = self.cpoint();
            let spec = match self.rng.gen_range(0..6) {
                0 => IntervalSpec::new(IntervalBound::MinusInf, IntervalBound::At(p)),
                1 => IntervalSpec::new(IntervalBound::At(p), IntervalBound::PlusInf),
                2 | 3 => {
                    let q = self.cpoint_near(&p);
                    ordered(p, q)
                }
                _ => {
                    let q = self.cpoint();
                    ordered(p, q)
                }
            };
            if let Ok(spec) = spec {
                return spec;
            }
        }
    }

    /// A point outside `C` inside `spec`, found by perturbing the endpoints;
    /// `None` if rejection sampling gives up.
    pub fn point_in(&mut self, spec: &IntervalSpec) -> Option<ZSeq> {
        let ends: Vec<CPoint> = [spec.lo(), spec.hi()].iter().filter_map(|b| b.point().cloned()).collect();
        for _ in 0..4000 {
            let candidate = match ends.choose(&mut self.rng) {
                Some(e) if self.chance(0.85) => {
                    let len = e.len().unwrap_or(8);
                    let m = self.rng.gen_range(0..=len.min(8));
                    let mut r = e.prefix(m);
                    if m < len || self.chance(0.5) {
                        let base = e.entry(m).unwrap_or_default();
                        r.push(base + BigInt::from(self.int(-3, 3)));
                    }
                    self.periodic().prepend(&r)
                }
                _ => self.periodic(),
            };
            if !in_C(&candidate) && spec.contains(&candidate).unwrap_or(false) {
                return Some(candidate);
            }
        }
        None
    }

    /// A point of `space`, or `None` when an interval resists sampling.
    pub fn space_point(&mut self, space: &Space) -> Option<SpacePoint> {
        Some(match space {
            Space::ZOmega => SpacePoint::Plain(self.zseq()),
            Space::StdInt(r) => SpacePoint::Plain(self.zseq().prepend(r.entries())),
            Space::SubInt(spec) => SpacePoint::Plain(self.point_in(spec)?),
            Space::Sum { shape, component } => {
                let index = match shape.range() {
                    (Some(lo), Some(hi)) => lo.clone() + BigInt::from(self.int(0, (hi - lo).to_i64().unwrap_or(0).min(8))),
                    (Some(lo), None) => lo + BigInt::from(self.int(0, 8)),
                    (None, Some(hi)) => hi - BigInt::from(self.int(0, 8)),
                    (None, None) => BigInt::from(self.int(-8, 8)),
                };
                SpacePoint::tagged(index, self.space_point(component)?)
            }
        })
    }

    /// A built-in automorphism of `R` or of a bounded interval.
    pub fn automorphism(&mut self) -> Auto1D {
        match self.rng.gen_range(0..3) {
            0 => {
                let a: f64 = self.rng.gen_range(0.2..3.0);
                Auto1D::translation(if self.chance(0.5) { a } else { -a }).expect("nonzero shift")
            }
            1 => {
                let lo: f64 = self.rng.gen_range(-5.0..5.0);
                let w: f64 = self.rng.gen_range(0.5..6.0);
                let a: f64 = self.rng.gen_range(0.2..2.0);
                Auto1D::conjugated_translation(lo, lo + w, if self.chance(0.5) { a } else { -a }).expect("valid")
            }
            _ => {
                let d: f64 = self.rng.gen_range(0.2..2.0);
                let mut points = vec![(0.0, d)];
                for i in 1..4 {
                    let (_, py) = points[i - 1];
                    let x = i as f64;
                    let y = (py + self.rng.gen_range(0.1..3.0)).max(x + d / 4.0);
                    points.push((x, y));
                }
                Auto1D::piecewise_linear(points).expect("valid")
            }
        }
    }
}

fn ordered(p: CPoint, q: CPoint) -> crate::Result<IntervalSpec> {
    match crate::completion::cpoint_compare(&p, &q)? {
        std::cmp::Ordering::Less => IntervalSpec::new(IntervalBound::At(p), IntervalBound::At(q)),
        std::cmp::Ordering::Greater => IntervalSpec::new(IntervalBound::At(q), IntervalBound::At(p)),
        std::cmp::Ordering::Equal => Err(crate::Error::EmptyInterval),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a: Vec<String> = {
            let mut s = Sampler::new(9);
            (0..20).map(|_| s.zseq().to_string()).collect()
        };
        let b: Vec<String> = {
            let mut s = Sampler::new(9);
            (0..20).map(|_| s.zseq().to_string()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(case_seed(1, 2, 3), case_seed(1, 2, 4));
    }

    #[test]
    fn intervals_admit_points() {
        let mut s = Sampler::new(3);
        for _ in 0..40 {
            let spec = s.interval();
            let u = s.point_in(&spec).expect("a point");
            assert!(spec.contains(&u).unwrap());
            assert!(!in_C(&u));
        }
    }

    #[test]
    fn raw_parts_expand_consistently() {
        let mut s = Sampler::new(5);
        for _ in 0..50 {
            let (h, b, k) = s.raw_parts();
            let z = ZSeq::from_parts(&h, &b, k).unwrap();
            for i in 0..40 {
                let expect = if i < h.len() {
                    h[i]
                } else {
                    let j = i - h.len();
                    b[j % b.len()] + k * (j / b.len()) as i64
                };
                assert_eq!(z.entry(i), BigInt::from(expect));
            }
        }
    }

    #[test]
    fn space_points_belong() {
        let mut s = Sampler::new(1);
        let spaces = [
            Space::ZOmega,
            Space::StdInt(FinSeq::from_i64s(&[2, -1])),
            Space::sum(crate::order_maps::Shape::Fin(3), Space::ZOmega),
            Space::sum(crate::order_maps::Shape::OmegaStar, Space::sum(crate::order_maps::Shape::Zee, Space::ZOmega)),
        ];
        for space in &spaces {
            for _ in 0..20 {
                let p = s.space_point(space).unwrap();
                assert!(space.contains(&p).unwrap(), "{p} not in {space}");
            }
        }
    }

    #[test]
    fn automorphisms_build() {
        let mut s = Sampler::new(0);
        for _ in 0..30 {
            s.automorphism().check().unwrap();
        }
    }
}
