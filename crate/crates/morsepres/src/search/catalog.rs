//! Named presentation families.

use std::fmt;
use std::str::FromStr;

use crate::presentation::{parse_presentation, Presentation};
use crate::words::{Letter, Word};

use super::SearchError;

/// The default word for `MS(n)`.
pub const MS_DEFAULT_WORD: &str = "y^-1*x*y*x^-1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `<x,y | xyx(yxy)⁻¹, xⁿy^-(n+1)>`
    Ak(i64),
    /// `<x,y | x⁻¹yⁿxy^-(n+1), x·w⁻¹>`
    Ms(i64, String),
    /// `<x,y | x·[xᵐ,yⁿ]⁻¹, y·[yᵖ,x^q]⁻¹>` with parameters `(n, m, p, q)`
    G(i64, i64, i64, i64),
    /// `<x,y | x⁻²y⁻¹xy, y⁻¹x^(1-k)yx⁻¹y⁻¹>`
    Gtilde(i64),
    BarmakB,
    BarmakBprime,
}

pub const FAMILIES: [&str; 6] = ["AK", "MS", "G", "Gtilde", "BarmakB", "BarmakBprime"];

fn int(s: &str) -> Result<i64, SearchError> {
    s.trim().parse().map_err(|_| SearchError::BadParams(format!("`{s}` is not an integer")))
}

impl Family {
    /// `name` with its parameters as separate strings, e.g. `("G", ["-1","-1","-1","-2"])`.
    pub fn from_parts<S: AsRef<str>>(name: &str, params: &[S]) -> Result<Family, SearchError> {
        let p: Vec<&str> = params.iter().map(AsRef::as_ref).collect();
        let arity = |k: usize| {
            if p.len() == k {
                Ok(())
            } else {
                Err(SearchError::BadParams(format!("{name} takes {k} parameter(s), got {}", p.len())))
            }
        };
        let fam = match name {
            "AK" => {
                arity(1)?;
                Family::Ak(int(p[0])?)
            }
            "MS" => match p.len() {
                1 => Family::Ms(int(p[0])?, MS_DEFAULT_WORD.to_string()),
                _ => {
                    arity(2)?;
                    Family::Ms(int(p[0])?, p[1].trim().to_string())
                }
            },
            "G" => {
                arity(4)?;
                Family::G(int(p[0])?, int(p[1])?, int(p[2])?, int(p[3])?)
            }
            "Gtilde" => {
                arity(1)?;
                Family::Gtilde(int(p[0])?)
            }
            "BarmakB" => {
                arity(0)?;
                Family::BarmakB
            }
            "BarmakBprime" => {
                arity(0)?;
                Family::BarmakBprime
            }
            other => return Err(SearchError::UnknownFamily(other.to_string())),
        };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::BadParams(m.to_string()));
        match self {
            Family::Ak(n) if *n < 1 => bad("AK(n) needs n >= 1"),
            Family::Ms(n, _) if *n < 1 => bad("MS(n, w) needs n >= 1"),
            Family::Gtilde(k) if *k < 1 => bad("Gtilde(k) needs k >= 1"),
            Family::Ak(n) | Family::Ms(n, _) | Family::Gtilde(n) if n.abs() > 1000 => bad("parameter too large"),
            Family::G(a, b, c, d) if [a, b, c, d].iter().any(|v| v.abs() > 1000) => bad("parameter too large"),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Presentation, SearchError> {
        let text = match self {
            Family::Ak(n) => format!("<x,y | x*y*x*y^-1*x^-1*y^-1, x^{n}*y^{}>", -(n + 1)),
            Family::Ms(n, w) => {
                let w = parse_presentation(&format!("<x,y | {w}>"))
                    .map_err(|e| SearchError::BadParams(format!("MS word: {e}")))?;
                let w = w.relators().first().cloned().unwrap_or_default();
                let r2 = Word::from(vec![Letter::pos(0)]).mul(&w.inverse());
                let r1 = parse_presentation(&format!("<x,y | x^-1*y^{n}*x*y^{}>", -(n + 1)))
                    .expect("family text parses")
                    .relators()[0]
                    .clone();
                let p = Presentation::new(vec!["x", "y"], vec![r1, r2]).expect("two generators");
                return Ok(p.with_origin(self.to_string()));
            }
            Family::G(n, m, p, q) => format!("<x,y | x*[x^{m},y^{n}]^-1, y*[y^{p},x^{q}]^-1>"),
            Family::Gtilde(k) => format!("<x,y | x^-2*y^-1*x*y, y^-1*x^{}*y*x^-1*y^-1>", 1 - k),
            Family::BarmakB => "<x,y | [x,y], 1>".to_string(),
            Family::BarmakBprime => {
                "<x,y | [x,[x,y^-1]]^2*y*[y^-1,x]*y^-1, [x,[[y^-1,x],x]]>".to_string()
            }
        };
        let p = parse_presentation(&text).expect("family text parses");
        Ok(p.with_origin(self.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Ak(n) => write!(f, "AK({n})"),
            Family::Ms(n, w) => write!(f, "MS({n},{w})"),
            Family::G(n, m, p, q) => write!(f, "G({n},{m},{p},{q})"),
            Family::Gtilde(k) => write!(f, "Gtilde({k})"),
            Family::BarmakB => write!(f, "BarmakB"),
            Family::BarmakBprime => write!(f, "BarmakBprime"),
        }
    }
}

/// `AK(2)`, `MS(3,y^-1*x*y*x^-1)`, `G(-1,-1,-1,-2)`, `BarmakB`, ...
impl FromStr for Family {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Family, SearchError> {
        let s = s.trim();
        match s.split_once('(') {
            None => Family::from_parts::<&str>(s, &[]),
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| SearchError::BadParams(format!("missing `)` in `{s}`")))?;
                let params: Vec<&str> = if inner.trim().is_empty() { Vec::new() } else { inner.split(',').collect() };
                Family::from_parts(name.trim(), &params)
            }
        }
    }
}

pub fn catalog(name: &str, params: &[&str]) -> Result<Presentation, SearchError> {
    Family::from_parts(name, params)?.build()
}
