//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use splitline::collision::{theorem1_witness, theorem1_witness_with, Auto1D, DEFAULT_ITERATION_CAP, MAX_BISECTION_STEPS};
use splitline::completion::{cpoint_compare, embed_enclosure, CPoint, IntervalBound, IntervalSpec};
use splitline::order_maps::{
    everywhere_iso, f2, fin_sum_iso, flatten, interval_iso, omega_iso, omega_star_iso, project, space_point_compare,
    z_iso, OrderMap, SpacePoint,
};
use splitline::sample::Sampler;
use splitline::tailclass::{classify, in_C, meeting_rep, tail_equivalent, Classification};
use splitline::verify::run_verify;
use splitline::zseq::{lex_compare, make_zseq, FinSeq, ZSeq};

use common::*;

const ORDER_PAIRS: usize = 1000;
const ORDER_TRIPLES: usize = 1000;
const ORDER_ORACLE_DEPTH: usize = 2000;
const ORDER_TIME_LIMIT: Duration = Duration::from_secs(10);
const NORMALIZE_SAMPLES: usize = 500;
const NORMALIZE_DEPTH: usize = 500;
const TAIL_TRIPLES: usize = 500;
const TAIL_PAIRS: usize = 500;
const TAIL_MAX_SHIFT: usize = 64;
const TAIL_DEPTH: usize = 512;
const CLASSIFY_SAMPLES: usize = 1000;
const CLASSIFY_PREFIXES: usize = 50;
const IN_C_SAMPLES: usize = 200;
const MAP_SAMPLES: usize = 500;
const EVERYWHERE_INTERVALS: usize = 50;
const EVERYWHERE_POINTS: usize = 50;
const EVERYWHERE_TIME_LIMIT: Duration = Duration::from_secs(30);
const WITNESS_CONFIGS: u64 = 20;
const WITNESS_TOL: f64 = 1e-9;
const WITNESS_TIME_LIMIT: Duration = Duration::from_secs(5);
const EMBED_PAIRS: usize = 500;
const EMBED_DEPTH: usize = 40;
const EMBED_REFINED: usize = 80;
const VERIFY_SEED: u64 = 42;
const VERIFY_TIME_LIMIT: Duration = Duration::from_secs(60);

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(name: &str, t: &Tally, elapsed: Duration, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = t.failures.is_empty() && in_time;
    let limit_text = limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
    println!(
        "{} {name}: {} checks, {} failures, {:.2} s{limit_text}",
        if pass { "PASS" } else { "FAIL" },
        t.checks,
        t.failures.len(),
        elapsed.as_secs_f64()
    );
    for f in t.failures.iter().take(5) {
        println!("     {f}");
    }
    pass
}

fn order_laws() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(101);
    for _ in 0..ORDER_PAIRS {
        let u = s.zseq();
        let v = if s.chance(0.7) { s.near(&u) } else { s.zseq() };
        let (uv, vu) = (lex_compare(&u, &v).unwrap(), lex_compare(&v, &u).unwrap());
        t.check(uv == vu.reverse(), || format!("antisymmetry fails on {u} {v}"));
        t.check((uv == Ordering::Equal) == (u == v), || format!("totality fails on {u} {v}"));
        let oracle = prefix_order(&u, &v, ORDER_ORACLE_DEPTH);
        t.check(oracle == uv, || format!("{u} vs {v}: oracle {oracle:?}, got {uv:?}"));
    }
    for _ in 0..ORDER_TRIPLES {
        let u = s.zseq();
        let v = s.near(&u);
        let w = if s.chance(0.5) { s.near(&v) } else { s.near(&u) };
        let mut xs = [u, v, w];
        xs.sort_by(|a, b| lex_compare(a, b).unwrap());
        let ok = lex_compare(&xs[0], &xs[2]).unwrap() != Ordering::Greater
            && prefix_order(&xs[0], &xs[1], ORDER_ORACLE_DEPTH) != Ordering::Greater
            && prefix_order(&xs[1], &xs[2], ORDER_ORACLE_DEPTH) != Ordering::Greater;
        t.check(ok, || format!("transitivity fails on {} {} {}", xs[0], xs[1], xs[2]));
        let strict = lex_compare(&xs[0], &xs[1]).unwrap() == Ordering::Less
            && lex_compare(&xs[1], &xs[2]).unwrap() == Ordering::Less;
        if strict {
            t.check(lex_compare(&xs[0], &xs[2]).unwrap() == Ordering::Less, || "strict transitivity".into());
        }
    }
    report("order laws", &t, start.elapsed(), Some(ORDER_TIME_LIMIT))
}

fn normalization() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(102);
    for _ in 0..NORMALIZE_SAMPLES {
        let (h, b, k) = s.raw_parts();
        let z = make_zseq(FinSeq::from_i64s(&h), FinSeq::from_i64s(&b), BigInt::from(k)).unwrap();
        let wide = |xs: &[i64]| xs.iter().map(|x| *x as i128).collect::<Vec<_>>();
        let raw = expand_raw(&wide(&h), &wide(&b), k as i128, NORMALIZE_DEPTH);
        t.check(expand(&z, NORMALIZE_DEPTH) == raw, || format!("{h:?} {b:?} {k} normalizes to {z}"));
        let again = make_zseq(FinSeq::new(z.head().to_vec()), FinSeq::new(z.block().to_vec()), z.inc().clone()).unwrap();
        t.check(again == z, || format!("not idempotent on {z}"));
    }
    report("normalization", &t, start.elapsed(), None)
}

fn related(s: &mut Sampler, u: &ZSeq) -> ZSeq {
    let a = s.int(0, 6) as usize;
    let r = s.prefix(4);
    u.tail_shift(a).prepend(r.entries())
}

fn tail_equivalence() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(103);
    for _ in 0..TAIL_TRIPLES {
        let u = s.zseq();
        let v = if s.chance(0.7) { related(&mut s, &u) } else { s.zseq() };
        let w = if s.chance(0.7) { related(&mut s, &v) } else { s.zseq() };
        t.check(tail_equivalent(&u, &u), || format!("not reflexive at {u}"));
        t.check(tail_equivalent(&u, &v) == tail_equivalent(&v, &u), || format!("not symmetric at {u} {v}"));
        if tail_equivalent(&u, &v) && tail_equivalent(&v, &w) {
            t.check(tail_equivalent(&u, &w), || format!("not transitive at {u} {v} {w}"));
        }
    }
    let mut equivalent = 0;
    for _ in 0..TAIL_PAIRS {
        let u = s.zseq();
        let v = match s.int(0, 3) {
            0 | 1 => related(&mut s, &u),
            2 => u.add_const(&BigInt::from(s.int(1, 3))),
            _ => s.zseq(),
        };
        let got = tail_equivalent(&u, &v);
        let oracle = shift_search(&u, &v, TAIL_MAX_SHIFT, TAIL_DEPTH).is_some();
        t.check(got == oracle, || format!("{u} ~ {v}: oracle {oracle}, got {got}"));
        if got {
            equivalent += 1;
            let m = meeting_rep(&u, &v).unwrap();
            t.check(m.common_tail.prepend(m.r.entries()) == u, || format!("r ⌢ t != {u}"));
            t.check(m.common_tail.prepend(m.s.entries()) == v, || format!("s ⌢ t != {v}"));
        }
    }
    t.check(equivalent >= TAIL_PAIRS / 4, || format!("only {equivalent} equivalent pairs sampled"));
    report("tail equivalence", &t, start.elapsed(), None)
}

fn flip(c: Classification) -> Classification {
    match c {
        Classification::A => Classification::B,
        Classification::B => Classification::A,
        Classification::C => Classification::C,
    }
}

fn classification() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(104);
    for _ in 0..CLASSIFY_SAMPLES {
        let u = s.periodic();
        let c = classify(&u);
        t.check(c != Classification::C, || format!("{u} is periodic but classified C"));
        t.check(classify(&u.add_const(&BigInt::from(1))) == flip(c), || format!("no flip under +1 at {u}"));
        t.check(classify(&u.add_const(&BigInt::from(2))) == c, || format!("changed under +2 at {u}"));
        for _ in 0..CLASSIFY_PREFIXES {
            let r = s.prefix(5);
            t.check(classify(&u.prepend(r.entries())) == c, || format!("changed by prefix {r} at {u}"));
        }
    }
    let mut in_c = 0;
    for _ in 0..IN_C_SAMPLES {
        let u = s.zseq();
        let (got, oracle) = (in_C(&u), k_search(&u));
        in_c += got as usize;
        t.check(got == oracle, || format!("{u}: k-search {oracle}, in_C {got}"));
    }
    t.check(in_c > 0 && in_c < IN_C_SAMPLES, || format!("degenerate in_C sample ({in_c} in C)"));
    report("classification", &t, start.elapsed(), None)
}

fn sample_intervals(s: &mut Sampler, n: usize) -> Vec<IntervalSpec> {
    let fixed = [("(0)", "+inf"), ("-inf", "[|0;+1]"), ("(1,7)", "(5)"), ("[|0,1;+0]", "(0,2)"), ("(3,1,1)", "(3,1)")];
    let mut out: Vec<IntervalSpec> = fixed
        .iter()
        .map(|(lo, hi)| IntervalSpec::new(lo.parse::<IntervalBound>().unwrap(), hi.parse().unwrap()).unwrap())
        .collect();
    while out.len() < n {
        out.push(s.interval());
    }
    out
}

fn map_algebra() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(105);
    let mut maps: Vec<(String, OrderMap)> = vec![
        ("project (2,-1)".into(), project(&FinSeq::from_i64s(&[2, -1])).unwrap()),
        ("flatten".into(), flatten()),
        ("z_iso".into(), z_iso()),
        ("omega_iso".into(), omega_iso()),
        ("omega_star_iso".into(), omega_star_iso()),
        ("f2".into(), f2()),
    ];
    for n in 1..=5 {
        maps.push((format!("fin_sum_iso {n}"), fin_sum_iso(n).unwrap()));
    }
    for spec in sample_intervals(&mut s, 15) {
        maps.push((format!("interval_iso {spec}"), interval_iso(&spec).unwrap()));
        maps.push((format!("everywhere_iso {spec}"), everywhere_iso(&spec).unwrap()));
    }
    for (name, m) in &maps {
        let dom = m.domain();
        let mut pts: Vec<(SpacePoint, SpacePoint)> = Vec::with_capacity(MAP_SAMPLES);
        for _ in 0..MAP_SAMPLES {
            let Some(p) = s.space_point(&dom) else {
                t.check(false, || format!("{name}: could not sample {dom}"));
                break;
            };
            let q = m.apply(&p).unwrap();
            let back = m.unapply(&q).unwrap();
            t.check(back == p, || format!("{name}: {p} returns as {back}"));
            pts.push((p, q));
        }
        pts.sort_by(|a, b| space_point_compare(&a.0, &b.0).unwrap());
        pts.dedup_by(|a, b| a.0 == b.0);
        for w in pts.windows(2) {
            let ok = space_point_compare(&w[0].1, &w[1].1).unwrap() == Ordering::Less;
            t.check(ok, || format!("{name}: order lost between {} and {}", w[0].0, w[1].0));
        }
    }
    let om = omega_iso();
    for _ in 0..MAP_SAMPLES {
        let u = s.zseq();
        let u = if s.chance(0.3) { u.prepend(&[BigInt::from(0), BigInt::from(0)]) } else { u };
        let got = om.apply(&SpacePoint::Plain(u.clone())).unwrap();
        let OmegaImage::Copy(i, inner) = omega_closed_form(&u, 64);
        let ok = match got.as_tagged() {
            Some((j, SpacePoint::Plain(w))) => to_i128(j) == i && expand(w, 64) == inner,
            _ => false,
        };
        t.check(ok, || format!("omega_iso({u}) = {got}, closed form copy {i}"));
    }
    report("map algebra", &t, start.elapsed(), None)
}

fn everywhere() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(106);
    let mut kinds = [0usize; 3];
    for _ in 0..EVERYWHERE_INTERVALS {
        let spec = s.interval();
        for b in [spec.lo(), spec.hi()] {
            kinds[match b {
                IntervalBound::At(CPoint::Fin(_)) => 0,
                IntervalBound::At(CPoint::Seq(_)) => 1,
                _ => 2,
            }] += 1;
        }
        let g = everywhere_iso(&spec).unwrap();
        let mut pairs = Vec::with_capacity(EVERYWHERE_POINTS);
        for _ in 0..EVERYWHERE_POINTS {
            let Some(u) = s.point_in(&spec) else {
                t.check(false, || format!("no point found in {spec}"));
                continue;
            };
            let img = g.apply_seq(&u).unwrap();
            let p = CPoint::Seq(img.clone());
            let above = match spec.lo() {
                IntervalBound::At(lo) => cpoint_compare(lo, &p).unwrap() == Ordering::Less,
                _ => true,
            };
            let below = match spec.hi() {
                IntervalBound::At(hi) => cpoint_compare(&p, hi).unwrap() == Ordering::Less,
                _ => true,
            };
            t.check(above && below && inside(&spec, &img, 4096), || format!("{spec}: {u} maps outside to {img}"));
            let (cu, ci) = (classify(&u), classify(&img));
            t.check(cu != Classification::C && ci == flip(cu), || format!("{spec}: {u} is {cu}, image {img} is {ci}"));
            pairs.push((u, img));
        }
        pairs.sort_by(|a, b| lex_compare(&a.0, &b.0).unwrap());
        pairs.dedup_by(|a, b| a.0 == b.0);
        for w in pairs.windows(2) {
            t.check(lex_compare(&w[0].1, &w[1].1).unwrap() == Ordering::Less, || format!("{spec}: order lost"));
        }
    }
    t.check(kinds.iter().all(|k| *k > 0), || format!("bound kinds not mixed: {kinds:?}"));
    report("everywhere isomorphism", &t, start.elapsed(), Some(EVERYWHERE_TIME_LIMIT))
}

fn witness_engine() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(107);
    for seed in 0..WITNESS_CONFIGS {
        let f = s.automorphism();
        let supplied = seed % 4 == 3;
        let r = if supplied {
            // g chosen first; its interval fixes x and y
            let probe = theorem1_witness(&f, f.domain(), seed, WITNESS_TOL).unwrap();
            let g: Auto1D = format!("conjtrans:{},{},{}", probe.i.lo, probe.i.hi, 0.3 + seed as f64 / 10.0).parse().unwrap();
            theorem1_witness_with(&f, f.domain(), seed, WITNESS_TOL, Some(&g), DEFAULT_ITERATION_CAP)
        } else {
            theorem1_witness(&f, f.domain(), seed, WITNESS_TOL)
        };
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                t.check(false, || format!("{f} seed {seed}: {e}"));
                continue;
            }
        };
        let fw = if r.used_inverse { f.inverse() } else { f.clone() };
        let g: Auto1D = r.g.parse().unwrap();
        let ff = |x: f64| fw.apply(x);
        let gg = |x: f64| g.apply(x);
        let gn = |x: f64, n: usize| iterate(gg, x, n);
        let name = format!("{f} seed {seed}");
        t.check(r.big_n.is_multiple_of(2), || format!("{name}: N = {} is odd", r.big_n));
        t.check(r.bisection_steps <= MAX_BISECTION_STEPS, || format!("{name}: {} steps", r.bisection_steps));
        let residual = (ff(r.c) - gn(r.c, r.big_n)).abs();
        t.check(residual <= WITNESS_TOL, || format!("{name}: residual {residual:e}"));
        t.check(fw.unapply(r.x) < r.y && r.y < r.x, || format!("{name}: y outside (f^-1(x), x)"));
        t.check(r.i.lo == r.y && r.i.hi == ff(ff(r.x)), || format!("{name}: I != (y, f^2(x))"));
        let fx = ff(r.x);
        t.check(gn(r.x, r.n) < fx && fx <= gn(r.x, r.n + 1), || format!("{name}: n = {} does not bracket", r.n));
        t.check(r.j.lo == gn(r.x, r.n) && r.j.hi == fx, || format!("{name}: J endpoints"));
        t.check(gn(r.j.lo, r.big_n) > ff(r.j.lo), || format!("{name}: left(g^N J) <= left(f J)"));
        t.check(gn(r.j.hi, r.big_n) < ff(r.j.hi), || format!("{name}: right(g^N J) >= right(f J)"));
        if r.big_n > 2 {
            let n2 = r.big_n - 2;
            t.check(gn(r.j.lo, n2) <= ff(r.j.lo), || format!("{name}: N = {} is not least", r.big_n));
        }
        t.check(r.j.lo < r.c && r.c < r.j.hi, || format!("{name}: c not interior"));
        t.check(ff(r.j.lo) - gn(r.j.lo, r.big_n) < 0.0 && ff(r.j.hi) - gn(r.j.hi, r.big_n) > 0.0, || {
            format!("{name}: sign pattern")
        });
        t.check(!r.parity_note.is_empty(), || format!("{name}: empty parity note"));
    }
    report("collision witness engine", &t, start.elapsed(), Some(WITNESS_TIME_LIMIT))
}

fn embedding() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut s = Sampler::new(108);
    let mut refined = 0;
    let mut done = 0;
    while done < EMBED_PAIRS {
        let x = s.cpoint();
        let y = match (&x, s.chance(0.6)) {
            (CPoint::Seq(u), true) => CPoint::Seq(s.near(u)),
            (CPoint::Fin(r), true) => {
                let mut r = r.entries().to_vec();
                r.extend(s.prefix(3).into_entries());
                if s.chance(0.5) {
                    CPoint::Seq(s.zseq().prepend(&r))
                } else {
                    CPoint::Fin(FinSeq::new(r))
                }
            }
            _ => s.cpoint(),
        };
        let order = cpoint_order(&x, &y, 4096);
        if order == Ordering::Equal {
            continue;
        }
        done += 1;
        let (lo, hi) = if order == Ordering::Less { (&x, &y) } else { (&y, &x) };
        if let (CPoint::Seq(a), CPoint::Seq(b)) = (lo, hi) {
            t.check(lex_compare(a, b).unwrap() == Ordering::Less, || format!("lex_compare disagrees on {a} {b}"));
        }
        t.check(cpoint_compare(lo, hi).unwrap() == Ordering::Less, || format!("cpoint_compare disagrees on {lo} {hi}"));
        let sep = |d: usize| embed_enclosure(lo, d).hi < embed_enclosure(hi, d).lo;
        let ok = if sep(EMBED_DEPTH) {
            true
        } else {
            refined += 1;
            sep(EMBED_REFINED)
        };
        t.check(ok, || format!("enclosures of {lo} < {hi} not separated at depth {EMBED_REFINED}"));
        let (a, b) = (embed_enclosure(lo, EMBED_REFINED), embed_enclosure(hi, EMBED_REFINED));
        t.check(a.lo <= a.hi && b.lo <= b.hi && !(b.hi < a.lo), || format!("misordered enclosures for {lo} {hi}"));
    }
    let ok = report("embedding consistency", &t, start.elapsed(), None);
    println!("     {refined} pairs needed the refinement to depth {EMBED_REFINED}");
    ok
}

fn determinism() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let a = serde_json::to_string(&run_verify("all", VERIFY_SEED).unwrap()).unwrap();
    let first = start.elapsed();
    let report_a: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b = serde_json::to_string(&run_verify("all", VERIFY_SEED).unwrap()).unwrap();
    t.check(a == b, || "reports differ between runs".into());
    t.check(report_a["failure_count"] == 0, || format!("verify all reports {} failures", report_a["failure_count"]));
    t.check(first <= VERIFY_TIME_LIMIT, || format!("one run took {:.1} s", first.as_secs_f64()));
    report("end-to-end determinism", &t, start.elapsed(), Some(VERIFY_TIME_LIMIT * 2))
}

fn main() {
    let results = [
        order_laws(),
        normalization(),
        tail_equivalence(),
        classification(),
        map_algebra(),
        everywhere(),
        witness_engine(),
        embedding(),
        determinism(),
    ];
    let failed = results.iter().filter(|r| !**r).count();
    println!("{} of {} acceptance criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
