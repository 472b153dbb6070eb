//! Increasing automorphisms of open real intervals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open real interval; either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyInterval);
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn whole() -> Self {
        RealInterval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.lo < x && x < self.hi
    }

    pub fn is_within(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Representative interior points, denser towards infinite ends.
    pub fn sample_grid(&self, count: usize) -> Vec<f64> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let s = (i as f64 + 0.5) / count as f64;
                match (self.lo.is_finite(), self.hi.is_finite()) {
                    (true, true) => self.lo + (self.hi - self.lo) * s,
                    (false, false) => -50.0 + 100.0 * s,
                    (true, false) => self.lo + 50.0 * s,
                    (false, true) => self.hi - 50.0 * (1.0 - s),
                }
            })
            .filter(|x| self.contains(*x))
            .collect()
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Parametric description of an [`Auto1D`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `x ↦ x + a` on `R`.
    Translation(f64),
    /// `φ ∘ (t ↦ t + a) ∘ φ⁻¹` where `φ: R → (lo, hi)` is an affine arctangent.
    ConjugatedTranslation { lo: f64, hi: f64, a: f64 },
    /// Linear interpolation through the points, slope 1 beyond them.
    PiecewiseLinear(Vec<(f64, f64)>),
    Custom(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Translation(a) => write!(f, "translate:{a}"),
            Family::ConjugatedTranslation { lo, hi, a } => write!(f, "conjtrans:{lo},{hi},{a}"),
            Family::PiecewiseLinear(points) => {
                write!(f, "pwl:")?;
                for (i, (x, y)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x},{y}")?;
                }
                Ok(())
            }
            Family::Custom(name) => write!(f, "{name}"),
        }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An increasing bijection of an open interval onto itself, with its inverse.
#[derive(Clone)]
pub struct Auto1D {
    family: Family,
    domain: RealInterval,
    forward: RealFn,
    inverse: RealFn,
}

impl fmt::Debug for Auto1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Auto1D").field("family", &self.family).field("domain", &self.domain).finish()
    }
}

impl fmt::Display for Auto1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family.fmt(f)
    }
}

/// `φ(t) = lo + (hi − lo)(atan(t)/π + 1/2)`, evaluated without cancellation
/// near either end.
fn arctan_to(lo: f64, hi: f64, t: f64) -> f64 {
    let w = hi - lo;
    if t < 0.0 {
        lo + w * ((-1.0 / t).atan() / PI)
    } else if t > 0.0 {
        hi - w * ((1.0 / t).atan() / PI)
    } else {
        lo + w / 2.0
    }
}

fn arctan_from(lo: f64, hi: f64, x: f64) -> f64 {
    let w = hi - lo;
    let s = (x - lo) / w;
    if s < 0.5 {
        -1.0 / (PI * s).tan()
    } else {
        1.0 / (PI * ((hi - x) / w)).tan()
    }
}

fn pwl_eval(points: &[(f64, f64)], x: f64) -> f64 {
    let (x0, y0) = points[0];
    if x <= x0 {
        return y0 + (x - x0);
    }
    let (xn, yn) = points[points.len() - 1];
    if x >= xn {
        return yn + (x - xn);
    }
    let i = points.partition_point(|p| p.0 <= x);
    let (xa, ya) = points[i - 1];
    let (xb, yb) = points[i];
    ya + (yb - ya) * (x - xa) / (xb - xa)
}

impl Auto1D {
    pub fn translation(a: f64) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return Err(Error::InvalidAutomorphism(format!("translation amount must be finite and nonzero, got {a}")));
        }
        let auto = Auto1D {
            family: Family::Translation(a),
            domain: RealInterval::whole(),
            forward: Arc::new(move |x| x + a),
            inverse: Arc::new(move |x| x - a),
        };
        auto.check()?;
        Ok(auto)
    }

    pub fn conjugated_translation(lo: f64, hi: f64, a: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidAutomorphism(format!("target interval ({lo}, {hi}) must be finite and nonempty")));
        }
        if !a.is_finite() || a == 0.0 {
            return Err(Error::InvalidAutomorphism(format!("shift must be finite and nonzero, got {a}")));
        }
        let auto = Auto1D {
            family: Family::ConjugatedTranslation { lo, hi, a },
            domain: RealInterval { lo, hi },
            forward: Arc::new(move |x| arctan_to(lo, hi, arctan_from(lo, hi, x) + a)),
            inverse: Arc::new(move |x| arctan_to(lo, hi, arctan_from(lo, hi, x) - a)),
        };
        auto.check()?;
        Ok(auto)
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidAutomorphism("piecewise-linear map needs at least one point".into()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidAutomorphism("breakpoints must be finite".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                return Err(Error::InvalidAutomorphism("breakpoints must increase in both coordinates".into()));
            }
        }
        let positive = points[0].1 > points[0].0;
        if points.iter().any(|(x, y)| (y - x == 0.0) || ((y > x) != positive)) {
            return Err(Error::InvalidAutomorphism("displacement must keep one strict sign at every breakpoint".into()));
        }
        let fwd = points.clone();
        let inv: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (y, x)).collect();
        let auto = Auto1D {
            family: Family::PiecewiseLinear(points),
            domain: RealInterval::whole(),
            forward: Arc::new(move |x| pwl_eval(&fwd, x)),
            inverse: Arc::new(move |x| pwl_eval(&inv, x)),
        };
        auto.check()?;
        Ok(auto)
    }

    /// Wraps arbitrary callables. Nothing is checked; see [`Auto1D::check`].
    pub fn custom(
        name: impl Into<String>,
        domain: RealInterval,
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Auto1D { family: Family::Custom(name.into()), domain, forward: Arc::new(forward), inverse: Arc::new(inverse) }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> RealInterval {
        self.domain
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn unapply(&self, x: f64) -> f64 {
        (self.inverse)(x)
    }

    /// `f^k(x)`, with negative `k` meaning the inverse. Fails when an iterate
    /// is not finite or falls out of the domain.
    pub fn iterate(&self, x: f64, k: i64) -> Result<f64> {
        let mut cur = x;
        for step in 1..=k.unsigned_abs() {
            cur = if k >= 0 { self.apply(cur) } else { self.unapply(cur) };
            if !self.domain.contains(cur) {
                return Err(Error::DomainEscape { step: if k >= 0 { step as i64 } else { -(step as i64) } });
            }
        }
        Ok(cur)
    }

    /// `+1` if points move right, `-1` if they move left, judged at `x`.
    pub fn direction_at(&self, x: f64) -> i32 {
        let d = self.apply(x) - x;
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn inverse(&self) -> Auto1D {
        let family = match &self.family {
            Family::Translation(a) => Family::Translation(-a),
            Family::ConjugatedTranslation { lo, hi, a } => Family::ConjugatedTranslation { lo: *lo, hi: *hi, a: -a },
            Family::PiecewiseLinear(points) => Family::PiecewiseLinear(points.iter().map(|&(x, y)| (y, x)).collect()),
            Family::Custom(name) => Family::Custom(format!("inverse({name})")),
        };
        Auto1D { family, domain: self.domain, forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// Sampled checks: strictly increasing, no fixed point, and the inverse
    /// undoes the forward map to within `1e-12` relative error.
    pub fn check(&self) -> Result<()> {
        let grid = self.domain.sample_grid(129);
        let mut prev: Option<(f64, f64)> = None;
        let mut sign = 0.0;
        for &x in &grid {
            let y = self.apply(x);
            if !self.domain.contains(y) {
                return Err(Error::InvalidAutomorphism(format!("image of {x} is {y}, outside {}", self.domain)));
            }
            if let Some((px, py)) = prev {
                if !(py < y) {
                    return Err(Error::InvalidAutomorphism(format!("not increasing between {px} and {x}")));
                }
            }
            prev = Some((x, y));
            let d = y - x;
            if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
                return Err(Error::InvalidAutomorphism(format!("displacement vanishes or changes sign near {x}")));
            }
            sign = d.signum();
            let back = self.unapply(y);
            if (back - x).abs() > 1e-12 * x.abs().max(1.0) {
                return Err(Error::InvalidAutomorphism(format!("inverse returns {back} for {x}")));
            }
        }
        Ok(())
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidAutomorphism(format!("cannot read {what} from `{s}`")))
}

impl FromStr for Auto1D {
    type Err = Error;

    /// `translate:A`, `conjtrans:LO,HI,A` or `pwl:X0,Y0;X1,Y1;…`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidAutomorphism(format!("expected FAMILY:PARAMS, got `{s}`")))?;
        match kind.trim() {
            "translate" => Auto1D::translation(parse_f64(args, "shift")?),
            "conjtrans" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::InvalidAutomorphism("conjtrans takes LO,HI,A".into()));
                }
                Auto1D::conjugated_translation(
                    parse_f64(parts[0], "lower end")?,
                    parse_f64(parts[1], "upper end")?,
                    parse_f64(parts[2], "shift")?,
                )
            }
            "pwl" => {
                let mut points = Vec::new();
                for pair in args.split(';').filter(|p| !p.trim().is_empty()) {
                    let (x, y) = pair
                        .split_once(',')
                        .ok_or_else(|| Error::InvalidAutomorphism(format!("breakpoint `{pair}` is not X,Y")))?;
                    points.push((parse_f64(x, "breakpoint")?, parse_f64(y, "breakpoint")?));
                }
                Auto1D::piecewise_linear(points)
            }
            other => Err(Error::InvalidAutomorphism(format!("unknown family `{other}`"))),
        }
    }
}
