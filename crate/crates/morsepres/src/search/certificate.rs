//! Search certificates: the matching is the witness, everything else is
//! recomputed on replay.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::CellId;
use crate::matching::{critical_counts, is_acyclic, Matching};
use crate::presentation::{parse_presentation, Presentation};
use crate::simplify::SimplifyConfig;

use super::{Family, SearchConfig, SearchContext, SearchError, Target, TrialOutcome};

pub const FORMAT_VERSION: u32 = 1;

/// Text form:
///
/// ```text
/// format-version: 1
/// catalog: AK(2)
/// presentation: <x,y | x*y*x*y^-1*x^-1*y^-1, x^2*y^-3>
/// seed: 42
/// trial: 3
/// target: empty
/// critical: 1 6 6
/// allow-duplicate-deletion: true
/// duplicate-deletion: false
/// pair: v:g:x e:g:x:1
/// ...
/// result: < | >
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    /// Catalog name of the input, when it came from the catalog.
    pub catalog: Option<String>,
    pub presentation: String,
    pub seed: u64,
    pub trial: u64,
    pub target: String,
    /// Critical cells by dimension.
    pub critical: [usize; 3],
    pub allow_duplicate_deletion: bool,
    /// Whether simplification deleted a duplicate or trivial relator.
    pub duplicate_deletion: bool,
    /// Matched pairs `(lower, upper)`, sorted.
    pub pairs: Vec<(CellId, CellId)>,
    pub result: String,
}

impl Certificate {
    pub(crate) fn from_trial(ctx: &SearchContext, cfg: &SearchConfig, t: &TrialOutcome) -> Self {
        let p = &ctx.presentation;
        let catalog = p.origin().and_then(|o| o.parse::<Family>().ok()).map(|f| f.to_string());
        Certificate {
            format_version: FORMAT_VERSION,
            catalog,
            presentation: p.to_string(),
            seed: cfg.seed,
            trial: t.trial,
            target: cfg.target.to_string(),
            critical: t.critical,
            allow_duplicate_deletion: cfg.simplify.allow_duplicate_deletion,
            duplicate_deletion: t.used_duplicate_deletion,
            pairs: t.matching.id_pairs(&ctx.poset),
            result: t.result.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SearchError> {
        serde_json::from_str(s).map_err(|e| SearchError::CertificateSyntax { line: e.line(), msg: e.to_string() })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format-version: {}", self.format_version)?;
        writeln!(f, "catalog: {}", self.catalog.as_deref().unwrap_or("-"))?;
        writeln!(f, "presentation: {}", self.presentation)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "trial: {}", self.trial)?;
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "critical: {} {} {}", self.critical[0], self.critical[1], self.critical[2])?;
        writeln!(f, "allow-duplicate-deletion: {}", self.allow_duplicate_deletion)?;
        writeln!(f, "duplicate-deletion: {}", self.duplicate_deletion)?;
        for (l, u) in &self.pairs {
            writeln!(f, "pair: {l} {u}")?;
        }
        writeln!(f, "result: {}", self.result)
    }
}

impl FromStr for Certificate {
    type Err = SearchError;

    fn from_str(text: &str) -> Result<Self, SearchError> {
        let mut fields: Vec<(&str, Option<String>)> = [
            "format-version",
            "catalog",
            "presentation",
            "seed",
            "trial",
            "target",
            "critical",
            "allow-duplicate-deletion",
            "duplicate-deletion",
            "result",
        ]
        .into_iter()
        .map(|k| (k, None))
        .collect();
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| SearchError::CertificateSyntax { line: line_no, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| err("expected `key: value`".into()))?;
            let value = value.trim();
            if key == "pair" {
                let mut it = value.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some(l), Some(u), None) => pairs.push((CellId::new(l), CellId::new(u))),
                    _ => return Err(err("a pair needs two cell ids".into())),
                }
                continue;
            }
            let slot = fields
                .iter_mut()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| err(format!("unknown key `{key}`")))?;
            if slot.1.replace(value.to_string()).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        let get = |key: &str| -> Result<String, SearchError> {
            fields
                .iter()
                .find(|(k, _)| *k == key)
                .and_then(|(_, v)| v.clone())
                .ok_or_else(|| SearchError::CertificateSyntax { line: 0, msg: format!("missing key `{key}`") })
        };
        let num = |key: &str| -> Result<u64, SearchError> {
            get(key)?
                .parse()
                .map_err(|_| SearchError::CertificateSyntax { line: 0, msg: format!("`{key}` is not a number") })
        };
        let flag = |key: &str| -> Result<bool, SearchError> {
            get(key)?
                .parse()
                .map_err(|_| SearchError::CertificateSyntax { line: 0, msg: format!("`{key}` is not true/false") })
        };
        let format_version = num("format-version")?;
        if format_version != u64::from(FORMAT_VERSION) {
            return Err(SearchError::StaleCertificate(format!(
                "format version {format_version}, expected {FORMAT_VERSION}"
            )));
        }
        let critical: Vec<usize> = get("critical")?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| SearchError::CertificateSyntax { line: 0, msg: "bad `critical` counts".into() })?;
        let critical: [usize; 3] = critical
            .try_into()
            .map_err(|_| SearchError::CertificateSyntax { line: 0, msg: "`critical` needs three counts".into() })?;
        let catalog = get("catalog")?;
        Ok(Certificate {
            format_version: FORMAT_VERSION,
            catalog: (catalog != "-").then_some(catalog),
            presentation: get("presentation")?,
            seed: num("seed")?,
            trial: num("trial")?,
            target: get("target")?,
            critical,
            allow_duplicate_deletion: flag("allow-duplicate-deletion")?,
            duplicate_deletion: flag("duplicate-deletion")?,
            pairs,
            result: get("result")?,
        })
    }
}

/// Checks passed by a successful replay, in order, and the recomputed result.
#[derive(Clone, Debug)]
pub struct ReplayReport {
    pub checks: Vec<&'static str>,
    pub result: Presentation,
}

pub const REPLAY_CHECKS: [&str; 10] = [
    "presentation",
    "cell-ids",
    "matching",
    "acyclic",
    "critical-count",
    "critical-vertex",
    "morse",
    "result",
    "duplicate-deletion",
    "target",
];

fn fail(check: &str, detail: impl Into<String>) -> SearchError {
    SearchError::ValidationFailure { check: check.to_string(), detail: detail.into() }
}

/// Rebuild the poset, validate the stored matching, recompute the Morse
/// presentation and its simplification, and compare with the stored result.
pub fn replay(cert: &Certificate) -> Result<ReplayReport, SearchError> {
    if cert.format_version != FORMAT_VERSION {
        return Err(SearchError::StaleCertificate(format!(
            "format version {}, expected {FORMAT_VERSION}",
            cert.format_version
        )));
    }
    let p = match &cert.catalog {
        Some(name) => name.parse::<Family>()?.build()?,
        None => parse_presentation(&cert.presentation)?,
    };
    if p.to_string() != cert.presentation {
        return Err(fail("presentation", format!("rebuilt `{p}` differs from `{}`", cert.presentation)));
    }
    let ctx = SearchContext::new(&p)?;
    let x = &ctx.poset;
    for id in cert.pairs.iter().flat_map(|(l, u)| [l, u]) {
        if id.canonical_dim().is_none() || x.find(id.as_str()).is_none() {
            return Err(SearchError::StaleCertificate(format!("cell id `{id}` is not in the complex")));
        }
    }
    let m = Matching::from_ids(x, &cert.pairs).map_err(|e| fail("matching", e.to_string()))?;
    if !is_acyclic(x, &m) {
        return Err(fail("acyclic", "the matching has a cycle"));
    }
    let critical = critical_counts(x, &m);
    if critical != cert.critical {
        return Err(fail("critical-count", format!("{critical:?}, certificate says {:?}", cert.critical)));
    }
    if critical[0] != 1 {
        return Err(fail("critical-vertex", format!("{} critical vertices", critical[0])));
    }
    let cfg = SimplifyConfig { allow_duplicate_deletion: cert.allow_duplicate_deletion, ..SimplifyConfig::default() };
    let t = ctx.evaluate(cert.trial, m, &cfg).map_err(|e| fail("morse", e.to_string()))?;
    if t.result.to_string() != cert.result {
        return Err(fail("result", format!("recomputed `{}`, certificate says `{}`", t.result, cert.result)));
    }
    if t.used_duplicate_deletion != cert.duplicate_deletion {
        return Err(fail("duplicate-deletion", format!("recomputed {}", t.used_duplicate_deletion)));
    }
    let target = Target::parse(&cert.target).map_err(|e| fail("target", e.to_string()))?;
    if !target.is_met(&t.result) {
        return Err(fail("target", format!("`{}` does not meet `{target}`", t.result)));
    }
    Ok(ReplayReport { checks: REPLAY_CHECKS.to_vec(), result: t.result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::run_search;

    fn sample() -> Certificate {
        let p = "AK(2)".parse::<Family>().unwrap().build().unwrap();
        let out = run_search(&p, &SearchConfig::new(3, 50, Target::Gens(100))).unwrap();
        out.certificate.unwrap()
    }

    #[test]
    fn text_and_json_round_trip() {
        let c = sample();
        assert_eq!(c.to_string().parse::<Certificate>().unwrap(), c);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(c.catalog.as_deref(), Some("AK(2)"));
    }

    #[test]
    fn replay_passes() {
        let r = replay(&sample()).unwrap();
        assert_eq!(r.checks.len(), REPLAY_CHECKS.len());
    }

    #[test]
    fn format_errors() {
        let text = sample().to_string();
        let stale = text.replace("format-version: 1", "format-version: 0");
        assert!(matches!(stale.parse::<Certificate>(), Err(SearchError::StaleCertificate(_))));
        let missing = text.replace("seed:", "# seed:");
        assert!(matches!(missing.parse::<Certificate>(), Err(SearchError::CertificateSyntax { .. })));
        let unknown = format!("{text}colour: red\n");
        assert!(matches!(unknown.parse::<Certificate>(), Err(SearchError::CertificateSyntax { .. })));
    }

    #[test]
    fn renamed_cells_are_stale() {
        let mut c = sample();
        c.pairs[0].1 = CellId::new("e:q:7");
        assert!(matches!(replay(&c), Err(SearchError::StaleCertificate(_))));
    }
}
