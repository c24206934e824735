use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::klattice::KClass;

/// Indecomposable building block of a global object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GlobalSummand {
    /// Fibre `O_{π⁻¹(y)}` over a point `y` away from the branch locus.
    Fiber,
    /// `ζ^twist ⊗ O_{m p_point}`.
    Torsion { point: usize, m: u32, twist: bool },
    /// `O(Σ_{i∈points} p_i) ⊗ π*M` with `deg M = deg`.
    LineBundle { deg: i64, points: Vec<usize> },
}

impl GlobalSummand {
    pub fn class(&self, n: usize) -> KClass {
        match self {
            Self::Fiber => KClass::fiber(n),
            Self::Torsion { point, m, twist } => KClass::torsion(n, *point, *m, *twist),
            Self::LineBundle { deg, points } => KClass::line_bundle(n, *deg, points),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let bad =
            |i: usize| Error::Precondition(format!("point index {} out of range 1..={n}", i + 1));
        match self {
            Self::Torsion { point, m, .. } => {
                if *point >= n {
                    return Err(bad(*point));
                }
                if *m == 0 {
                    return Err(Error::Precondition(
                        "torsion length must be positive".into(),
                    ));
                }
            }
            Self::LineBundle { points, .. } => {
                if let Some(&i) = points.iter().find(|&&i| i >= n) {
                    return Err(bad(i));
                }
                let mut sorted = points.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != points.len() {
                    return Err(Error::Precondition(
                        "repeated point in a line-bundle twist".into(),
                    ));
                }
            }
            Self::Fiber => {}
        }
        Ok(())
    }
}

/// `mult · summand[shift]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlobalTerm {
    pub mult: u32,
    pub summand: GlobalSummand,
    pub shift: i64,
}

/// Finite direct sum of shifted building blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GlobalObject {
    pub terms: Vec<GlobalTerm>,
}

impl GlobalObject {
    pub fn single(summand: GlobalSummand) -> Self {
        Self {
            terms: vec![GlobalTerm {
                mult: 1,
                summand,
                shift: 0,
            }],
        }
    }

    pub fn torsion(point: usize, m: u32, twist: bool) -> Self {
        Self::single(GlobalSummand::Torsion { point, m, twist })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.terms.iter().try_for_each(|t| t.summand.check(n))
    }

    pub fn class(&self, n: usize) -> Result<KClass> {
        self.validate(n)?;
        Ok(self.terms.iter().fold(KClass::zero(n), |acc, t| {
            let sign = if t.shift.rem_euclid(2) == 0 { 1 } else { -1 };
            &acc + &t.summand.class(n).scale(sign * t.mult as i64)
        }))
    }
}

impl fmt::Display for GlobalSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fiber => write!(f, "Fiber"),
            Self::Torsion { point, m, twist } => write!(
                f,
                "Torsion({},{m},{})",
                point + 1,
                if *twist { "zeta" } else { "plain" }
            ),
            Self::LineBundle { deg, points } => {
                let pts: Vec<String> = points.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "LineBundle({deg},[{}])", pts.join(","))
            }
        }
    }
}

impl fmt::Display for GlobalObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mult = if t.mult == 1 {
                    String::new()
                } else {
                    format!("{}*", t.mult)
                };
                let shift = if t.shift == 0 {
                    String::new()
                } else {
                    format!("[{}]", t.shift)
                };
                format!("{mult}{}{shift}", t.summand)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..k]);
                start = k + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn parse_index(s: &str) -> Result<usize> {
    let i: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad point index '{s}'")))?;
    i.checked_sub(1)
        .ok_or_else(|| Error::Parse("point indices are 1-based".into()))
}

fn parse_summand(body: &str) -> Result<GlobalSummand> {
    let body = body.trim();
    if body == "Fiber" {
        return Ok(GlobalSummand::Fiber);
    }
    let (name, rest) = body
        .split_once('(')
        .ok_or_else(|| Error::Parse(format!("unknown object '{body}'")))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unclosed argument list in '{body}'")))?;
    let args = split_top_level(args, ',');
    match (name.trim(), args.as_slice()) {
        ("Torsion", [p, m]) => parse_summand(&format!("Torsion({p},{m},plain)")),
        ("Torsion", [p, m, tw]) => {
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad torsion length '{m}'")))?;
            let twist = match tw.trim() {
                "zeta" | "1" | "true" => true,
                "plain" | "0" | "false" | "" => false,
                other => return Err(Error::Parse(format!("bad twist flag '{other}'"))),
            };
            Ok(GlobalSummand::Torsion {
                point: parse_index(p)?,
                m,
                twist,
            })
        }
        ("LineBundle", [d, pts]) => {
            let deg: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree '{d}'")))?;
            let inner = pts
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("point list '{pts}' must be bracketed")))?;
            let points = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(parse_index)
                .collect::<Result<Vec<_>>>()?;
            Ok(GlobalSummand::LineBundle { deg, points })
        }
        ("LineBundle", [d]) => {
            let deg: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree '{d}'")))?;
            Ok(GlobalSummand::LineBundle {
                deg,
                points: vec![],
            })
        }
        _ => Err(Error::Parse(format!("unknown object '{body}'"))),
    }
}

fn parse_term(text: &str) -> Result<GlobalTerm> {
    let mut text = text.trim();
    let mut mult = 1;
    if let Some((k, rest)) = text.split_once('*') {
        mult = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity '{k}'")))?;
        if mult == 0 {
            return Err(Error::Parse("multiplicity must be positive".into()));
        }
        text = rest.trim();
    }
    let mut shift = 0;
    if let Some(stripped) = text.strip_suffix(']') {
        if let Some(open) = stripped.rfind('[') {
            let candidate = &stripped[open + 1..];
            if let Ok(k) = candidate.trim().parse::<i64>() {
                if !stripped[..open].ends_with(',') {
                    shift = k;
                    text = &stripped[..open];
                }
            }
        }
    }
    Ok(GlobalTerm {
        mult,
        summand: parse_summand(text)?,
        shift,
    })
}

impl FromStr for GlobalObject {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let terms = split_top_level(text, '+')
            .into_iter()
            .filter(|t| !t.trim().is_empty())
            .map(parse_term)
            .collect::<Result<Vec<_>>>()?;
        if terms.is_empty() {
            return Err(Error::Parse("empty object".into()));
        }
        Ok(Self { terms })
    }
}
