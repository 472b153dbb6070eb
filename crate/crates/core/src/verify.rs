//! Seeded property suites, runnable from the command line.

use std::cmp::Ordering;
use std::thread;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::collision::{theorem1_witness, Auto1D};
use crate::completion::{cpoint_compare, embed_enclosure, CPoint, IntervalBound, IntervalSpec};
use crate::error::{Error, Result};
use crate::order_maps::{
    everywhere_iso, f2, fin_sum_iso, interval_iso, omega_iso, omega_star_iso, parse_map, project,
    space_point_compare, z_iso, OrderMap, SpacePoint,
};
use crate::sample::{case_seed, Sampler};
use crate::tailclass::{classify, in_C, meeting_rep, tail_equivalent, Classification};
use crate::zseq::{lex_compare, make_zseq, FinSeq, ZSeq};

pub const SUITES: [&str; 7] = ["order-laws", "tailrel", "classify", "maps", "everywhere", "collision", "embed"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub case_seed: u64,
    pub input: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

/// Outcome of [`run_verify`]. Wall-clock time is left to the caller so the
/// report itself is reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failure_count: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

#[derive(Default)]
struct Ctx {
    input: String,
    checks: usize,
    failures: Vec<(String, String)>,
}

impl Ctx {
    fn input(&mut self, s: impl Into<String>) {
        self.input = s.into();
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push((self.input.clone(), detail()));
        }
    }

    fn ok<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{what}: {e}"));
                None
            }
        }
    }
}

type CaseFn = fn(usize, &mut Sampler, &mut Ctx);

fn suite_table(name: &str) -> Option<(usize, u64, CaseFn)> {
    Some(match name {
        "order-laws" => (1000, 1, order_laws as CaseFn),
        "tailrel" => (500, 2, tailrel),
        "classify" => (1000, 3, classify_suite),
        "maps" => (500, 4, maps),
        "everywhere" => (50, 5, everywhere),
        "collision" => (20, 6, collision),
        "embed" => (500, 7, embed),
        _ => return None,
    })
}

/// Runs one suite, or all of them for `"all"`.
pub fn run_verify(suite: &str, seed: u64) -> Result<VerifyReport> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if suite_table(suite).is_some() {
        vec![suite]
    } else {
        return Err(Error::UnknownSuite(suite.to_string()));
    };
    let suites: Vec<SuiteReport> = names.iter().map(|n| run_suite(n, seed)).collect();
    Ok(VerifyReport {
        suite: suite.to_string(),
        seed,
        cases: suites.iter().map(|s| s.cases).sum(),
        checks: suites.iter().map(|s| s.checks).sum(),
        failure_count: suites.iter().map(|s| s.failures.len()).sum(),
        suites,
    })
}

fn run_suite(name: &str, seed: u64) -> SuiteReport {
    let (cases, stream, f) = suite_table(name).expect("known suite");
    let run = |case: usize| -> (usize, Vec<Failure>) {
        let cs = case_seed(seed, stream, case as u64);
        let mut sampler = Sampler::new(cs);
        let mut ctx = Ctx::default();
        f(case, &mut sampler, &mut ctx);
        let failures = ctx
            .failures
            .into_iter()
            .map(|(input, detail)| Failure { case, case_seed: cs, input, detail })
            .collect();
        (ctx.checks, failures)
    };
    let shards = thread::available_parallelism().map_or(1, |n| n.get()).min(cases).max(1);
    let per = cases.div_ceil(shards);
    let results: Vec<(usize, Vec<Failure>)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|s| {
                let run = &run;
                scope.spawn(move || (s * per..((s + 1) * per).min(cases)).map(run).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite shard panicked")).collect()
    });
    SuiteReport {
        suite: name.to_string(),
        cases,
        checks: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

fn expand_raw(head: &[i64], block: &[i64], inc: i64, n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|i| {
            if i < head.len() {
                BigInt::from(head[i])
            } else {
                let j = i - head.len();
                BigInt::from(block[j % block.len()]) + BigInt::from(inc) * BigInt::from(j / block.len())
            }
        })
        .collect()
}

fn order_laws(case: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let u = s.zseq();
    let v = if s.chance(0.7) { s.near(&u) } else { s.zseq() };
    let w = if s.chance(0.7) { s.near(&v) } else { s.zseq() };
    ctx.input(format!("{u} {v} {w}"));
    let (Some(uv), Some(vu), Some(vw), Some(uw)) = (
        ctx.ok(lex_compare(&u, &v), "compare"),
        ctx.ok(lex_compare(&v, &u), "compare"),
        ctx.ok(lex_compare(&v, &w), "compare"),
        ctx.ok(lex_compare(&u, &w), "compare"),
    ) else {
        return;
    };
    ctx.check(uv == vu.reverse(), || format!("antisymmetry: {uv:?} vs {vu:?}"));
    ctx.check((uv == Ordering::Equal) == (u == v), || "equality disagrees with the normal form".into());
    let oracle = u.prefix(2000).entries().cmp(v.prefix(2000).entries());
    ctx.check(oracle == uv, || format!("depth-2000 prefixes give {oracle:?}, compare gives {uv:?}"));
    if uv != Ordering::Greater && vw != Ordering::Greater {
        let expect = if uv == Ordering::Less || vw == Ordering::Less { Ordering::Less } else { Ordering::Equal };
        ctx.check(uw == expect, || format!("transitivity: {uv:?}, {vw:?} but {uw:?}"));
    }
    if uv != Ordering::Less && vw != Ordering::Less {
        let expect = if uv == Ordering::Greater || vw == Ordering::Greater { Ordering::Greater } else { Ordering::Equal };
        ctx.check(uw == expect, || format!("transitivity: {uv:?}, {vw:?} but {uw:?}"));
    }
    if case < 500 {
        let (h, b, k) = s.raw_parts();
        ctx.input(format!("head {h:?} block {b:?} inc {k}"));
        let Some(z) = ctx.ok(make_zseq(FinSeq::from_i64s(&h), FinSeq::from_i64s(&b), BigInt::from(k)), "normalize")
        else {
            return;
        };
        let raw = expand_raw(&h, &b, k, 500);
        ctx.check(z.prefix(500).entries() == &raw[..], || format!("{z} changes the first 500 entries"));
        let again = make_zseq(FinSeq::new(z.head().to_vec()), FinSeq::new(z.block().to_vec()), z.inc().clone());
        ctx.check(again.as_ref() == Ok(&z), || format!("normalizing {z} again gives {again:?}"));
    }
}

fn small_window(u: &ZSeq, n: usize) -> Vec<i64> {
    u.iter().take(n).map(|e| e.to_i64().unwrap_or(i64::MAX)).collect()
}

/// Some `a, b ≤ max_shift` with `u` from `a` and `v` from `b` agreeing on
/// `depth` entries.
fn shift_search(u: &ZSeq, v: &ZSeq, max_shift: usize, depth: usize) -> bool {
    let (x, y) = (small_window(u, max_shift + depth), small_window(v, max_shift + depth));
    (0..=max_shift).any(|a| (0..=max_shift).any(|b| x[a..a + depth] == y[b..b + depth]))
}

fn related(s: &mut Sampler, u: &ZSeq) -> ZSeq {
    let a = s.int(0, 6) as usize;
    let r = s.prefix(4);
    u.tail_shift(a).prepend(r.entries())
}

fn tailrel(_: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let u = s.zseq();
    let v = match s.int(0, 3) {
        0 | 1 => related(s, &u),
        2 => u.add_const(&BigInt::from(s.int(1, 3))),
        _ => s.zseq(),
    };
    let w = if s.chance(0.6) { related(s, &v) } else { s.zseq() };
    ctx.input(format!("{u} {v} {w}"));
    let (uv, vu, vw, uw) = (tail_equivalent(&u, &v), tail_equivalent(&v, &u), tail_equivalent(&v, &w), tail_equivalent(&u, &w));
    ctx.check(tail_equivalent(&u, &u), || "not reflexive".into());
    ctx.check(uv == vu, || "not symmetric".into());
    ctx.check(!(uv && vw) || uw, || "not transitive".into());
    let oracle = shift_search(&u, &v, 64, 512);
    ctx.check(oracle == uv, || format!("shift search says {oracle}, tail_equivalent says {uv}"));
    for (x, y, eq) in [(&u, &v, uv), (&v, &w, vw)] {
        if eq {
            if let Some(m) = ctx.ok(meeting_rep(x, y), "meeting_rep") {
                ctx.check(m.common_tail.prepend(m.r.entries()) == *x, || format!("r ⌢ t differs from {x}"));
                ctx.check(m.common_tail.prepend(m.s.entries()) == *y, || format!("s ⌢ t differs from {y}"));
            }
        }
    }
}

fn flip(c: Classification) -> Classification {
    match c {
        Classification::A => Classification::B,
        Classification::B => Classification::A,
        Classification::C => Classification::C,
    }
}

fn classify_suite(case: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let u = s.periodic();
    ctx.input(u.to_string());
    let c = classify(&u);
    ctx.check(c != Classification::C, || "periodic point classified C".into());
    let c1 = classify(&u.add_const(&BigInt::from(1)));
    ctx.check(c1 == flip(c), || format!("{c} became {c1} after adding 1"));
    let c2 = classify(&u.add_const(&BigInt::from(2)));
    ctx.check(c2 == c, || format!("{c} became {c2} after adding 2"));
    for _ in 0..50 {
        let r = s.prefix(5);
        let cr = classify(&u.prepend(r.entries()));
        ctx.check(cr == c, || format!("{c} became {cr} after prepending {r}"));
    }
    if case < 200 {
        let v = s.zseq();
        ctx.input(v.to_string());
        let oracle = (-8i64..=8).filter(|k| *k != 0).any(|k| shift_search(&v, &v.add_const(&BigInt::from(k)), 64, 64));
        let got = in_C(&v);
        ctx.check(oracle == got, || format!("k-search says {oracle}, in_C says {got}"));
    }
}

/// The ω merge written out by hand: strip leading zeros and look at the
/// first nonzero entry.
fn omega_closed_form(x: &ZSeq) -> SpacePoint {
    let zero = BigInt::from(0);
    let m = x.iter().take(10_000).take_while(|e| *e == zero).count();
    let first = if m == 10_000 { zero.clone() } else { x.entry(m) };
    if m == 10_000 || first < zero {
        SpacePoint::tagged(0, SpacePoint::Plain(x.clone()))
    } else if m == 0 {
        SpacePoint::tagged(first, SpacePoint::Plain(x.tail_shift(1)))
    } else {
        SpacePoint::tagged(0, SpacePoint::Plain(x.tail_shift(1)))
    }
}

fn check_map(ctx: &mut Ctx, map: &OrderMap, lo: &ZSeq, hi: &ZSeq) {
    let (p, q) = (SpacePoint::Plain(lo.clone()), SpacePoint::Plain(hi.clone()));
    let (Some(fp), Some(fq)) = (ctx.ok(map.apply(&p), "apply"), ctx.ok(map.apply(&q), "apply")) else {
        return;
    };
    let back = map.unapply(&fp);
    ctx.check(back.as_ref() == Ok(&p), || format!("round trip of {lo} gives {back:?}"));
    let cmp = space_point_compare(&fp, &fq);
    ctx.check(cmp == Ok(Ordering::Less), || format!("images of {lo} < {hi} compare as {cmp:?}"));
}

fn ordered_pair(s: &mut Sampler, draw: &mut dyn FnMut(&mut Sampler) -> Option<ZSeq>) -> Option<(ZSeq, ZSeq)> {
    for _ in 0..50 {
        let (a, b) = (draw(s)?, draw(s)?);
        match lex_compare(&a, &b).ok()? {
            Ordering::Less => return Some((a, b)),
            Ordering::Greater => return Some((b, a)),
            Ordering::Equal => {}
        }
    }
    None
}

fn maps(_: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let x = s.zseq();
    ctx.input(x.to_string());
    let got = omega_iso().apply(&SpacePoint::Plain(x.clone()));
    ctx.check(got == Ok(omega_closed_form(&x)), || format!("omega_iso gives {got:?}"));

    let kind = s.int(0, 8);
    let spec = s.interval();
    let map = match kind {
        0 => project(&s.nonempty_prefix(4)),
        1 => Ok(omega_iso()),
        2 => Ok(omega_star_iso()),
        3 => Ok(f2()),
        4 => fin_sum_iso(s.int(1, 5) as usize),
        5 => Ok(z_iso()),
        6 => interval_iso(&spec),
        7 => everywhere_iso(&spec),
        _ => interval_iso(&spec).and_then(|m| parse_map(&m.to_string())),
    };
    ctx.input(format!("kind {kind} on {spec}"));
    let Some(map) = ctx.ok(map, "build") else {
        return;
    };
    let pair = if kind == 7 {
        ordered_pair(s, &mut |s| s.point_in(&spec))
    } else {
        ordered_pair(s, &mut |s| {
            let u = s.zseq();
            Some(if s.chance(0.5) { s.near(&u) } else { u })
        })
    };
    if let Some((lo, hi)) = pair {
        ctx.input(format!("kind {kind} on {spec}: {lo} < {hi}"));
        check_map(ctx, &map, &lo, &hi);
    }
}

fn inside(spec: &IntervalSpec, y: &ZSeq) -> Result<bool> {
    let p = CPoint::Seq(y.clone());
    let above = match spec.lo() {
        IntervalBound::MinusInf => true,
        IntervalBound::PlusInf => false,
        IntervalBound::At(lo) => cpoint_compare(lo, &p)? == Ordering::Less,
    };
    let below = match spec.hi() {
        IntervalBound::PlusInf => true,
        IntervalBound::MinusInf => false,
        IntervalBound::At(hi) => cpoint_compare(&p, hi)? == Ordering::Less,
    };
    Ok(above && below)
}

fn everywhere(_: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let spec = s.interval();
    ctx.input(spec.to_string());
    let Some(g) = ctx.ok(everywhere_iso(&spec), "build") else {
        return;
    };
    let mut points = Vec::with_capacity(50);
    for _ in 0..50 {
        match s.point_in(&spec) {
            Some(u) => points.push(u),
            None => ctx.check(false, || "no sample point found".into()),
        }
    }
    let mut pairs: Vec<(ZSeq, ZSeq)> = Vec::with_capacity(points.len());
    for u in points {
        ctx.input(format!("{spec} at {u}"));
        let Some(img) = ctx.ok(g.apply_seq(&u), "apply") else {
            continue;
        };
        let inside = inside(&spec, &img);
        ctx.check(inside == Ok(true), || format!("image {img} is not inside: {inside:?}"));
        let (cu, ci) = (classify(&u), classify(&img));
        ctx.check(ci == flip(cu) && cu != Classification::C, || format!("class {cu} went to {ci}"));
        pairs.push((u, img));
    }
    pairs.sort_by(|a, b| lex_compare(&a.0, &b.0).expect("comparable"));
    pairs.dedup_by(|a, b| a.0 == b.0);
    ctx.input(spec.to_string());
    for w in pairs.windows(2) {
        let cmp = lex_compare(&w[0].1, &w[1].1);
        ctx.check(cmp == Ok(Ordering::Less), || format!("images of {} < {} compare as {cmp:?}", w[0].0, w[1].0));
    }
}

fn collision(case: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let f = s.automorphism();
    let seed = s.int(0, 1 << 20) as u64;
    ctx.input(format!("{f} seed {seed}"));
    let Some(r) = ctx.ok(theorem1_witness(&f, f.domain(), seed, 1e-9), "witness") else {
        return;
    };
    let bad = r.violations();
    ctx.check(bad.is_empty(), || format!("violated: {}", bad.join(", ")));
    let Some(g) = ctx.ok(r.g.parse::<Auto1D>(), "reparse g") else {
        return;
    };
    let fw = if r.used_inverse { f.inverse() } else { f };
    let gn = g.iterate(r.c, r.big_n as i64).unwrap_or(f64::NAN);
    let residual = (fw.apply(r.c) - gn).abs();
    ctx.check(residual <= 1e-9, || format!("recomputed residual {residual:e}"));
    let (below, above) = (g.iterate(r.x, r.n as i64), g.iterate(r.x, r.n as i64 + 1));
    let fx = fw.apply(r.x);
    ctx.check(below.is_ok_and(|b| b < fx) && above.is_ok_and(|a| fx <= a), || format!("case {case}: n = {} does not bracket f(x)", r.n));
}

fn embed(_: usize, s: &mut Sampler, ctx: &mut Ctx) {
    let (x, y) = loop {
        let x = s.cpoint();
        let y = if s.chance(0.6) {
            match &x {
                CPoint::Seq(u) => CPoint::Seq(s.near(u)),
                CPoint::Fin(r) => {
                    let mut r = r.entries().to_vec();
                    r.extend(s.prefix(3).into_entries());
                    if s.chance(0.5) {
                        CPoint::Seq(s.zseq().prepend(&r))
                    } else {
                        CPoint::Fin(FinSeq::new(r))
                    }
                }
            }
        } else {
            s.cpoint()
        };
        match cpoint_compare(&x, &y) {
            Ok(Ordering::Less) => break (x, y),
            Ok(Ordering::Greater) => break (y, x),
            _ => {}
        }
    };
    ctx.input(format!("{x} < {y}"));
    let separated = |d: usize| embed_enclosure(&x, d).hi < embed_enclosure(&y, d).lo;
    ctx.check(separated(40) || separated(80), || "enclosures overlap at depth 40 and 80".into());
    let wrong = embed_enclosure(&y, 80).hi < embed_enclosure(&x, 80).lo;
    ctx.check(!wrong, || "enclosures are in the wrong order".into());
}
