//! Fixed inputs shared by the benchmarks.

use splitline::completion::IntervalSpec;
use splitline::sample::Sampler;
use splitline::zseq::ZSeq;

/// Pairs that agree on a long prefix, so comparison has to walk.
pub fn close_pairs(count: usize, seed: u64) -> Vec<(ZSeq, ZSeq)> {
    let mut s = Sampler::new(seed);
    (0..count)
        .map(|_| {
            let u = s.zseq();
            let v = s.near(&u);
            (u, v)
        })
        .collect()
}

/// Unnormalized generator triples.
pub fn raw_triples(count: usize, seed: u64) -> Vec<(Vec<i64>, Vec<i64>, i64)> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.raw_parts()).collect()
}

/// Intervals paired with points inside them.
pub fn interval_points(count: usize, seed: u64) -> Vec<(IntervalSpec, ZSeq)> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let spec = s.interval();
        if let Some(u) = s.point_in(&spec) {
            out.push((spec, u));
        }
    }
    out
}
