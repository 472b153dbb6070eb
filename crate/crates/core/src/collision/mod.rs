//! Numeric run of the refutation argument on concrete automorphisms of `R`,
//! plus a finite back-and-forth matcher and an irreducibility probe.

mod auto;
mod cantor;

pub use auto::{Auto1D, Family, RealInterval};
pub use cantor::{back_and_forth, sqrt2_shifted, stern_brocot_prefix, MatchPair};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ITERATION_CAP: usize = 1_000_000;
pub const MAX_BISECTION_STEPS: usize = 200;

/// `[f^k(x) : lo ≤ k ≤ hi]`.
pub fn iterate_orbit(f: &Auto1D, x: f64, lo: i64, hi: i64) -> Result<Vec<f64>> {
    if !f.domain().contains(x) {
        return Err(Error::NotInDomain(x.to_string()));
    }
    if lo > hi {
        return Err(Error::EmptyInterval);
    }
    let start = f.iterate(x, lo)?;
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    out.push(start);
    let mut cur = start;
    for k in lo + 1..=hi {
        cur = f.apply(cur);
        if !f.domain().contains(cur) {
            return Err(Error::DomainEscape { step: k });
        }
        out.push(cur);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub k: i64,
    pub value: f64,
    /// `even` or `odd`: which side of a swapped partition the point falls on,
    /// relative to the starting point.
    pub side: String,
}

/// [`iterate_orbit`] with each iterate tagged by the parity of `k`.
pub fn labelled_orbit(f: &Auto1D, x: f64, lo: i64, hi: i64) -> Result<Vec<OrbitEntry>> {
    let values = iterate_orbit(f, x, lo, hi)?;
    Ok(values
        .into_iter()
        .zip(lo..)
        .map(|(value, k)| OrbitEntry { k, value, side: if k.rem_euclid(2) == 0 { "even" } else { "odd" }.into() })
        .collect())
}

/// The `n` with `g^n(x) < target ≤ g^{n+1}(x)`.
pub fn crossing_index(g: &Auto1D, x: f64, target: f64, cap: usize) -> Result<usize> {
    if !(x < target) {
        return Err(Error::NotInInterval(format!("start {x} is not below target {target}")));
    }
    let mut cur = x;
    for n in 0..cap {
        let next = g.apply(cur);
        if !g.domain().contains(next) {
            return Err(Error::DomainEscape { step: n as i64 + 1 });
        }
        if next >= target {
            return Ok(n);
        }
        if next <= cur {
            return Err(Error::InvalidAutomorphism(format!("iterate at {cur} does not move right")));
        }
        cur = next;
    }
    Err(Error::IterationCapExceeded { cap })
}

fn apply_n(g: &Auto1D, x: f64, n: usize) -> Result<f64> {
    g.iterate(x, n as i64)
}

/// Least even `N ≥ 2` with `g^N(J.lo) > f(J.lo)`.
pub fn find_even_n(f: &Auto1D, g: &Auto1D, j: RealInterval, cap: usize) -> Result<usize> {
    let target = f.apply(j.lo);
    let mut cur = apply_n(g, j.lo, 2)?;
    let mut n = 2;
    while cur <= target {
        if n + 2 > cap {
            return Err(Error::IterationCapExceeded { cap });
        }
        cur = apply_n(g, cur, 2)?;
        n += 2;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub c: f64,
    pub residual: f64,
    pub steps: usize,
}

/// Bisects `f − g^N` on `J`, which must be negative at the left end and
/// positive at the right.
pub fn collision_point(f: &Auto1D, g: &Auto1D, j: RealInterval, n: usize, tol: f64) -> Result<Collision> {
    let h = |t: f64| -> Result<f64> { Ok(f.apply(t) - apply_n(g, t, n)?) };
    let (mut a, mut b) = (j.lo, j.hi);
    let (left, right) = (h(a)?, h(b)?);
    if !(left < 0.0 && right > 0.0) {
        return Err(Error::NoSignChange { left, right });
    }
    let mut best = (a, left.abs());
    for steps in 1..=MAX_BISECTION_STEPS {
        let mid = a + (b - a) / 2.0;
        if mid <= a || mid >= b {
            return Err(Error::ToleranceUnreachable { tol, steps, residual: best.1 });
        }
        let hm = h(mid)?;
        if hm.abs() < best.1 {
            best = (mid, hm.abs());
        }
        if hm.abs() <= tol {
            return Ok(Collision { c: mid, residual: hm.abs(), steps });
        }
        if hm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::ToleranceUnreachable { tol, steps: MAX_BISECTION_STEPS, residual: best.1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub f: String,
    pub g: String,
    pub seed: u64,
    pub tol: f64,
    /// True when `f` moved points left and its inverse was used instead.
    pub used_inverse: bool,
    pub x: f64,
    pub f_inv_x: f64,
    pub y: f64,
    pub f_x: f64,
    pub f2_x: f64,
    #[serde(rename = "I")]
    pub i: RealInterval,
    pub n: usize,
    pub g_n_x: f64,
    pub g_n1_x: f64,
    #[serde(rename = "J")]
    pub j: RealInterval,
    #[serde(rename = "fJ")]
    pub f_j: RealInterval,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "gNJ")]
    pub g_big_n_j: RealInterval,
    pub c: f64,
    pub f_c: f64,
    #[serde(rename = "gN_c")]
    pub g_big_n_c: f64,
    pub residual: f64,
    pub bisection_steps: usize,
    pub orbit: Vec<OrbitEntry>,
    pub parity_note: String,
}

impl WitnessReport {
    /// The stated inequalities that fail on the recorded numbers.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut need = |ok: bool, what: &str| {
            if !ok {
                out.push(what.to_string());
            }
        };
        need(self.f_inv_x < self.y && self.y < self.x, "y in (f^-1(x), x)");
        need(self.i.lo == self.y && self.i.hi == self.f2_x, "I = (y, f^2(x))");
        need(self.g_n_x < self.f_x && self.f_x <= self.g_n1_x, "g^n(x) < f(x) <= g^(n+1)(x)");
        need(self.j.lo == self.g_n_x && self.j.hi == self.f_x, "J = [g^n(x), f(x)]");
        need(self.big_n.is_multiple_of(2) && self.big_n >= 2, "N even");
        need(self.g_big_n_j.lo > self.f_j.lo, "left(g^N J) > left(f J)");
        need(self.g_big_n_j.hi < self.f_j.hi, "right(g^N J) < right(f J)");
        need(self.j.lo < self.c && self.c < self.j.hi, "c interior to J");
        need(self.residual <= self.tol, "residual within tolerance");
        need(self.bisection_steps <= MAX_BISECTION_STEPS, "bisection step bound");
        need(!self.parity_note.is_empty(), "parity note present");
        out
    }
}

/// Picks `x ∈ K` from the seed and a point strictly inside `K`.
fn pick_x(k: RealInterval, u: f64) -> f64 {
    match (k.lo.is_finite(), k.hi.is_finite()) {
        (true, true) => k.lo + (k.hi - k.lo) * (0.3 + 0.4 * u),
        (false, false) => -5.0 + 10.0 * u,
        (true, false) => k.lo + 1.0 + 5.0 * u,
        (false, true) => k.hi - 1.0 - 5.0 * u,
    }
}

/// Runs the whole construction with a seeded conjugated translation as `g`.
pub fn theorem1_witness(f: &Auto1D, k: RealInterval, seed: u64, tol: f64) -> Result<WitnessReport> {
    theorem1_witness_with(f, k, seed, tol, None, DEFAULT_ITERATION_CAP)
}

/// As [`theorem1_witness`]. A supplied `g` fixes `I`, so `x = f^-2(sup I)`
/// and `y = inf I`; these must satisfy `f^-1(x) < y < x`.
pub fn theorem1_witness_with(
    f: &Auto1D,
    k: RealInterval,
    seed: u64,
    tol: f64,
    g: Option<&Auto1D>,
    cap: usize,
) -> Result<WitnessReport> {
    if !k.is_within(&f.domain()) {
        return Err(Error::InvalidAutomorphism(format!("K = {k} is not inside the domain {} of f", f.domain())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, lambda, shift): (f64, f64, f64) = (rng.gen(), rng.gen_range(0.2..0.8), rng.gen_range(0.5..1.5));

    let probe = match g {
        Some(g) => f.iterate(g.domain().hi, -2).unwrap_or(g.domain().hi),
        None => pick_x(k, u),
    };
    let used_inverse = f.direction_at(probe) < 0;
    let f = if used_inverse { f.inverse() } else { f.clone() };

    let (x, y, g) = match g {
        None => {
            let x = pick_x(k, u);
            let f_inv_x = f.unapply(x);
            let y = f_inv_x + lambda * (x - f_inv_x);
            let f2_x = f.iterate(x, 2)?;
            (x, y, Auto1D::conjugated_translation(y, f2_x, shift)?)
        }
        Some(g) => {
            let dom = g.domain();
            let x = f.iterate(dom.hi, -2)?;
            let g = if g.direction_at(x) < 0 { g.inverse() } else { g.clone() };
            (x, dom.lo, g)
        }
    };
    if !k.contains(x) {
        return Err(Error::NotInDomain(format!("x = {x} is not in K = {k}")));
    }
    let f_inv_x = f.unapply(x);
    let f_x = f.apply(x);
    let f2_x = f.apply(f_x);
    if !(f_inv_x < y && y < x) {
        return Err(Error::InvalidAutomorphism(format!(
            "g lives on ({y}, {f2_x}) but y must lie strictly between f^-1(x) = {f_inv_x} and x = {x}"
        )));
    }
    let i = RealInterval::new(y, f2_x)?;
    if g.domain() != i {
        return Err(Error::InvalidAutomorphism(format!("g acts on {} rather than I = {i}", g.domain())));
    }

    let n = crossing_index(&g, x, f_x, cap)?;
    let g_n_x = apply_n(&g, x, n)?;
    let g_n1_x = g.apply(g_n_x);
    let j = RealInterval::new(g_n_x, f_x)?;
    let big_n = find_even_n(&f, &g, j, cap)?;
    let f_j = RealInterval { lo: f.apply(j.lo), hi: f.apply(j.hi) };
    let g_big_n_j = RealInterval { lo: apply_n(&g, j.lo, big_n)?, hi: apply_n(&g, j.hi, big_n)? };
    let hit = collision_point(&f, &g, j, big_n, tol)?;
    let f_c = f.apply(hit.c);
    let g_big_n_c = apply_n(&g, hit.c, big_n)?;
    let orbit = labelled_orbit(&g, x, 0, n as i64 + 1)?;

    let parity_note = format!(
        "Suppose A and B partition the line with both f and g exchanging them. \
Then f(c) lies on the other side from c. Since N = {big_n} is even, g^N(c) lies on the same side as c. \
Yet f(c) = {f_c} and g^N(c) = {g_big_n_c} agree to within {:e}, so no such partition restricts to \
isomorphic halves on every interval.",
        hit.residual
    );

    Ok(WitnessReport {
        f: f.to_string(),
        g: g.to_string(),
        seed,
        tol,
        used_inverse,
        x,
        f_inv_x,
        y,
        f_x,
        f2_x,
        i,
        n,
        g_n_x,
        g_n1_x,
        j,
        f_j,
        big_n,
        g_big_n_j,
        c: hit.c,
        f_c,
        g_big_n_c,
        residual: hit.residual,
        bisection_steps: hit.steps,
        orbit,
        parity_note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleReport {
    pub irreducible: bool,
    pub samples: usize,
    /// Most steps any sampled forward orbit needed to leave the window.
    pub max_forward_steps: usize,
    pub max_backward_steps: usize,
    pub diagnostic: Option<String>,
}

/// Probes whether `f` is irreducible on `window`: no sampled fixed point,
/// and sampled orbits leave the window in the direction of motion going
/// forward and the opposite direction going backward, within `cap` steps.
pub fn irreducible_check(f: &Auto1D, window: RealInterval, cap: usize) -> IrreducibleReport {
    let mut report =
        IrreducibleReport { irreducible: false, samples: 0, max_forward_steps: 0, max_backward_steps: 0, diagnostic: None };
    let grid = window.sample_grid(257);
    let disp: Vec<f64> = grid.iter().map(|&x| f.apply(x) - x).collect();
    let sign = disp.first().copied().unwrap_or(0.0).signum();
    for (i, d) in disp.iter().enumerate() {
        if *d == 0.0 || d.signum() != sign || d.is_nan() {
            let at = if i == 0 { grid[0] } else { grid[i - 1] };
            report.diagnostic = Some(format!("displacement changes sign between {at} and {}", grid[i]));
            return report;
        }
    }
    let rightward = sign > 0.0;
    let probes = window.sample_grid(17);
    report.samples = probes.len();
    for &x in &probes {
        for forward in [true, false] {
            let exit_right = forward == rightward;
            let mut cur = x;
            let mut steps = 0;
            loop {
                if exit_right && cur >= window.hi || !exit_right && cur <= window.lo {
                    break;
                }
                if steps == cap || !cur.is_finite() {
                    let which = if forward { "forward" } else { "backward" };
                    report.diagnostic = Some(format!("{which} orbit of {x} stayed in {window} for {steps} steps"));
                    return report;
                }
                cur = if forward { f.apply(cur) } else { f.unapply(cur) };
                steps += 1;
            }
            if forward {
                report.max_forward_steps = report.max_forward_steps.max(steps);
            } else {
                report.max_backward_steps = report.max_backward_steps.max(steps);
            }
        }
    }
    report.irreducible = true;
    report
}
