//! Text form of maps, spaces and points.
//!
//! ```text
//! (compose (project 0) (flatten omega) (lindenbaum (tag omega 0) (flatten omega)))
//! (piecewise (case -inf -1 0 (inverse (omega-star-iso))) (case 0 +inf 1 (inverse (omega-iso))))
//! (interval-iso (fin 0 1) (seq [2|0;+0]))
//! ```
//!
//! Sequence literals `[h|b;+k]` are single atoms. Points of sum spaces are
//! written `(index point)`.

use std::fmt;

use num_bigint::BigInt;

use super::{builders, Case, OrderMap, Shape, Space, SpacePoint, DEFAULT_STEP_CAP};
use crate::completion::{CPoint, IntervalBound, IntervalSpec};
use crate::error::{Error, Result};
use crate::zseq::{FinSeq, ZSeq};

#[derive(Debug)]
enum Sx {
    Atom(String, usize),
    List(Vec<Sx>, usize),
}

impl Sx {
    fn pos(&self) -> usize {
        match self {
            Sx::Atom(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

fn read(text: &str) -> Result<Sx> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let sx = read_one(&chars, &mut i, text.len())?;
    skip_ws(&chars, &mut i);
    if i < chars.len() {
        return err(chars[i].0, "unexpected trailing input");
    }
    Ok(sx)
}

fn skip_ws(chars: &[(usize, char)], i: &mut usize) {
    while *i < chars.len() && chars[*i].1.is_whitespace() {
        *i += 1;
    }
}

fn read_one(chars: &[(usize, char)], i: &mut usize, end: usize) -> Result<Sx> {
    skip_ws(chars, i);
    let Some(&(pos, c)) = chars.get(*i) else { return err(end, "unexpected end of input") };
    match c {
        '(' => {
            *i += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(chars, i);
                match chars.get(*i) {
                    None => return err(end, "unclosed `(`"),
                    Some((_, ')')) => {
                        *i += 1;
                        return Ok(Sx::List(items, pos));
                    }
                    Some(_) => items.push(read_one(chars, i, end)?),
                }
            }
        }
        ')' => err(pos, "unexpected `)`"),
        '[' => {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.get(*i) {
                s.push(ch);
                *i += 1;
                if ch == ']' {
                    return Ok(Sx::Atom(s, pos));
                }
            }
            err(end, "unclosed `[`")
        }
        _ => {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.get(*i) {
                if ch.is_whitespace() || ch == '(' || ch == ')' {
                    break;
                }
                s.push(ch);
                *i += 1;
            }
            Ok(Sx::Atom(s, pos))
        }
    }
}

fn head(sx: &Sx) -> Option<(&str, &[Sx])> {
    match sx {
        Sx::List(items, _) => match items.split_first() {
            Some((Sx::Atom(name, _), rest)) => Some((name.as_str(), rest)),
            _ => None,
        },
        Sx::Atom(..) => None,
    }
}

fn int(sx: &Sx) -> Result<BigInt> {
    match sx {
        Sx::Atom(a, p) => a.parse().or_else(|_| err(*p, format!("expected an integer, found `{a}`"))),
        Sx::List(_, p) => err(*p, "expected an integer"),
    }
}

fn count(sx: &Sx) -> Result<usize> {
    match sx {
        Sx::Atom(a, p) => a.parse().or_else(|_| err(*p, format!("expected a count, found `{a}`"))),
        Sx::List(_, p) => err(*p, "expected a count"),
    }
}

fn literal(sx: &Sx) -> Result<ZSeq> {
    match sx {
        Sx::Atom(a, p) if a.starts_with('[') => a.parse().map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: p + pos, msg },
            other => other,
        }),
        other => err(other.pos(), "expected a sequence literal `[h|b;+k]`"),
    }
}

fn arity(rest: &[Sx], lo: usize, hi: usize, name: &str, pos: usize) -> Result<()> {
    if rest.len() < lo || rest.len() > hi {
        return err(pos, format!("`{name}` takes {lo}..={hi} arguments, got {}", rest.len()));
    }
    Ok(())
}

fn shape(sx: &Sx) -> Result<Shape> {
    match sx {
        Sx::Atom(a, p) => match a.as_str() {
            "omega" => Ok(Shape::Omega),
            "omega-star" => Ok(Shape::OmegaStar),
            "zee" => Ok(Shape::Zee),
            other => err(*p, format!("unknown shape `{other}`")),
        },
        Sx::List(..) => match head(sx) {
            Some(("fin", [n])) => Ok(Shape::Fin(count(n)?)),
            _ => err(sx.pos(), "expected a shape: omega, omega-star, zee or (fin N)"),
        },
    }
}

fn space(sx: &Sx) -> Result<Space> {
    if let Sx::Atom(a, p) = sx {
        return if a == "zomega" { Ok(Space::ZOmega) } else { err(*p, format!("unknown space `{a}`")) };
    }
    match head(sx) {
        Some(("std", labels)) => {
            let r = labels.iter().map(int).collect::<Result<Vec<_>>>()?;
            if r.is_empty() {
                return Err(Error::EmptyLabel);
            }
            Ok(Space::StdInt(FinSeq::new(r)))
        }
        Some(("sub", [lo, hi])) => Ok(Space::SubInt(IntervalSpec::new(bound(lo)?, bound(hi)?)?)),
        Some(("sum", [s, c])) => Ok(Space::sum(shape(s)?, space(c)?)),
        _ => err(sx.pos(), "expected a space: zomega, (std …), (sub LO HI) or (sum SHAPE SPACE)"),
    }
}

fn bound(sx: &Sx) -> Result<IntervalBound> {
    if let Sx::Atom(a, p) = sx {
        return match a.as_str() {
            "-inf" => Ok(IntervalBound::MinusInf),
            "+inf" => Ok(IntervalBound::PlusInf),
            s if s.starts_with('[') => Ok(IntervalBound::At(CPoint::Seq(literal(sx)?))),
            other => err(*p, format!("expected a bound, found `{other}`")),
        };
    }
    match head(sx) {
        Some(("fin", entries)) => {
            let r = entries.iter().map(int).collect::<Result<Vec<_>>>()?;
            Ok(IntervalBound::At(CPoint::fin(FinSeq::new(r))?))
        }
        Some(("seq", [lit])) => Ok(IntervalBound::At(CPoint::Seq(literal(lit)?))),
        _ => err(sx.pos(), "expected a bound: -inf, +inf, (fin …) or (seq [...])"),
    }
}

fn case_end(sx: &Sx, infinite: &str) -> Result<Option<BigInt>> {
    match sx {
        Sx::Atom(a, _) if a == infinite => Ok(None),
        other => int(other).map(Some),
    }
}

fn map(sx: &Sx) -> Result<OrderMap> {
    let Some((name, rest)) = head(sx) else { return err(sx.pos(), "expected a map form `(name …)`") };
    let pos = sx.pos();
    let m = match name {
        "identity" => {
            arity(rest, 0, 1, name, pos)?;
            OrderMap::Identity(rest.first().map(space).transpose()?.unwrap_or(Space::ZOmega))
        }
        "project" => {
            let r = rest.iter().map(int).collect::<Result<Vec<_>>>()?;
            builders::project(&FinSeq::new(r))?
        }
        "flatten" => {
            arity(rest, 0, 1, name, pos)?;
            OrderMap::Flatten(rest.first().map(shape).transpose()?.unwrap_or(Shape::Zee))
        }
        "tag" => {
            arity(rest, 2, 3, name, pos)?;
            let component = rest.get(2).map(space).transpose()?.unwrap_or(Space::ZOmega);
            OrderMap::Tag { shape: shape(&rest[0])?, index: int(&rest[1])?, component }
        }
        "shift" => {
            arity(rest, 1, 1, name, pos)?;
            OrderMap::Shift(int(&rest[0])?)
        }
        "inverse" => {
            arity(rest, 1, 1, name, pos)?;
            OrderMap::Inverse(Box::new(map(&rest[0])?))
        }
        "compose" => OrderMap::Compose(rest.iter().map(map).collect::<Result<_>>()?),
        "piecewise" => {
            let mut cases = Vec::new();
            for c in rest {
                match head(c) {
                    Some(("case", [lo, hi, target, m])) => cases.push(Case {
                        lo: case_end(lo, "-inf")?,
                        hi: case_end(hi, "+inf")?,
                        target: count(target)?,
                        map: map(m)?,
                    }),
                    _ => return err(c.pos(), "expected (case LO HI TARGET MAP)"),
                }
            }
            OrderMap::Piecewise(cases)
        }
        "lindenbaum" => {
            arity(rest, 2, 3, name, pos)?;
            let cap = rest.get(2).map(count).transpose()?.unwrap_or(DEFAULT_STEP_CAP);
            OrderMap::Lindenbaum { f: Box::new(map(&rest[0])?), g: Box::new(map(&rest[1])?), step_cap: cap }
        }
        "summap" => {
            arity(rest, 2, 2, name, pos)?;
            OrderMap::SumMap { shape: shape(&rest[0])?, map: Box::new(map(&rest[1])?) }
        }
        "splice-last" => {
            arity(rest, 2, 2, name, pos)?;
            OrderMap::SpliceLast { n: count(&rest[0])?, map: Box::new(map(&rest[1])?) }
        }
        "interval-iso" | "everywhere-iso" => {
            arity(rest, 2, 2, name, pos)?;
            let spec = IntervalSpec::new(bound(&rest[0])?, bound(&rest[1])?)?;
            if name == "interval-iso" {
                let plan = super::plan::decompose_interval(&spec)?;
                OrderMap::IntervalIso { spec, plan }
            } else {
                builders::everywhere_iso(&spec)?
            }
        }
        "omega-iso" => builders::omega_iso(),
        "omega-star-iso" => builders::omega_star_iso(),
        "z-iso" => builders::z_iso(),
        "f2" => builders::f2(),
        "fin-sum-iso" => {
            arity(rest, 1, 1, name, pos)?;
            builders::fin_sum_iso(count(&rest[0])?)?
        }
        other => return err(pos, format!("unknown map `{other}`")),
    };
    Ok(m)
}

fn point(sx: &Sx) -> Result<SpacePoint> {
    match sx {
        Sx::Atom(..) => literal(sx).map(SpacePoint::Plain),
        Sx::List(items, p) => match items.as_slice() {
            [index, inner] => Ok(SpacePoint::Tagged { index: int(index)?, inner: Box::new(point(inner)?) }),
            _ => err(*p, "expected a point `[h|b;+k]` or `(index point)`"),
        },
    }
}

/// Parses and validates a map.
pub fn parse_map(text: &str) -> Result<OrderMap> {
    let m = map(&read(text)?)?;
    m.validate()?;
    Ok(m)
}

pub fn parse_space(text: &str) -> Result<Space> {
    space(&read(text)?)
}

pub fn parse_point(text: &str) -> Result<SpacePoint> {
    point(&read(text)?)
}

pub(crate) fn bound_text(b: &IntervalBound) -> String {
    match b {
        IntervalBound::MinusInf => "-inf".into(),
        IntervalBound::PlusInf => "+inf".into(),
        IntervalBound::At(CPoint::Fin(r)) => {
            let entries: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("(fin {})", entries.join(" "))
        }
        IntervalBound::At(CPoint::Seq(u)) => format!("(seq {u})"),
    }
}

fn case_end_text(end: &Option<BigInt>, infinite: &str) -> String {
    end.as_ref().map_or_else(|| infinite.to_string(), |x| x.to_string())
}

impl fmt::Display for OrderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderMap::Identity(s) => write!(f, "(identity {s})"),
            OrderMap::Project(r) => {
                f.write_str("(project")?;
                for x in r.iter() {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            OrderMap::Flatten(shape) => write!(f, "(flatten {shape})"),
            OrderMap::Tag { shape, index, component } => {
                if *component == Space::ZOmega {
                    write!(f, "(tag {shape} {index})")
                } else {
                    write!(f, "(tag {shape} {index} {component})")
                }
            }
            OrderMap::Shift(k) => write!(f, "(shift {k})"),
            OrderMap::Inverse(m) => write!(f, "(inverse {m})"),
            OrderMap::Compose(ms) => {
                f.write_str("(compose")?;
                for m in ms {
                    write!(f, " {m}")?;
                }
                f.write_str(")")
            }
            OrderMap::Piecewise(cases) => {
                f.write_str("(piecewise")?;
                for c in cases {
                    write!(
                        f,
                        " (case {} {} {} {})",
                        case_end_text(&c.lo, "-inf"),
                        case_end_text(&c.hi, "+inf"),
                        c.target,
                        c.map
                    )?;
                }
                f.write_str(")")
            }
            OrderMap::Lindenbaum { f: fm, g, step_cap } => {
                if *step_cap == DEFAULT_STEP_CAP {
                    write!(f, "(lindenbaum {fm} {g})")
                } else {
                    write!(f, "(lindenbaum {fm} {g} {step_cap})")
                }
            }
            OrderMap::SumMap { shape, map } => write!(f, "(summap {shape} {map})"),
            OrderMap::SpliceLast { n, map } => write!(f, "(splice-last {n} {map})"),
            OrderMap::IntervalIso { spec, .. } => {
                write!(f, "(interval-iso {} {})", bound_text(spec.lo()), bound_text(spec.hi()))
            }
        }
    }
}
