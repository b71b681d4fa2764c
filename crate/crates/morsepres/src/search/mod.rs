//! Seeded randomized matching search, certificates and replay.

mod catalog;
mod certificate;

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{presentation_complex, Complex2, ComplexError, FacePoset};
use crate::matching::{critical_counts, spanning_matching, Matching};
use crate::morse::{morse_presentation_in, MorseError};
use crate::presentation::{canonical_equivalence, parse_presentation, AbelianInvariants, Presentation, PresentationError};
use crate::simplify::{simplified, SimplifyConfig};

pub use catalog::{catalog, Family, FAMILIES, MS_DEFAULT_WORD};
pub use certificate::{replay, Certificate, ReplayReport, FORMAT_VERSION, REPLAY_CHECKS};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("invariant violated in trial {trial}: {msg}")]
    InvariantViolation { trial: u64, msg: String },
    #[error("stale certificate: {0}")]
    StaleCertificate(String),
    #[error("certificate check `{check}` failed: {detail}")]
    ValidationFailure { check: String, detail: String },
    #[error("certificate line {line}: {msg}")]
    CertificateSyntax { line: usize, msg: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// What counts as a successful trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Empty,
    /// At most this many generators.
    Gens(usize),
    /// Equal to this presentation up to canonical equivalence.
    Equiv(Presentation),
}

impl Target {
    pub fn is_met(&self, q: &Presentation) -> bool {
        match self {
            Target::Empty => q.is_empty(),
            Target::Gens(k) => q.num_generators() <= *k,
            // too large to compare exhaustively: not a match
            Target::Equiv(t) => canonical_equivalence(q, t).unwrap_or(false),
        }
    }

    /// `empty`, `gens:k`, or `equiv:` followed by presentation text.
    pub fn parse(s: &str) -> Result<Target, SearchError> {
        let s = s.trim();
        if s == "empty" {
            return Ok(Target::Empty);
        }
        if let Some(k) = s.strip_prefix("gens:") {
            return k
                .trim()
                .parse()
                .map(Target::Gens)
                .map_err(|_| SearchError::Config(format!("bad generator bound `{k}`")));
        }
        if let Some(p) = s.strip_prefix("equiv:") {
            return Ok(Target::Equiv(parse_presentation(p)?));
        }
        Err(SearchError::Config(format!("unknown target `{s}`")))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Empty => write!(f, "empty"),
            Target::Gens(k) => write!(f, "gens:{k}"),
            Target::Equiv(p) => write!(f, "equiv:{p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_trials: u64,
    pub target: Target,
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    pub simplify: SimplifyConfig,
}

impl SearchConfig {
    pub fn new(seed: u64, max_trials: u64, target: Target) -> Self {
        SearchConfig { seed, max_trials, target, jobs: 1, simplify: SimplifyConfig::default() }
    }
}

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream of trial `trial`: ChaCha8 seeded with
/// `splitmix64(seed ^ splitmix64(trial))`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub trials_run: u64,
    pub occurrence_violations: u64,
    pub best_gens: Option<usize>,
    /// Generator count after simplification -> number of trials.
    pub histogram: BTreeMap<usize, u64>,
    pub duplicate_deletions: u64,
}

impl SearchStats {
    fn record(&mut self, t: &TrialOutcome) {
        self.trials_run += 1;
        let g = t.result.num_generators();
        *self.histogram.entry(g).or_default() += 1;
        self.best_gens = Some(self.best_gens.map_or(g, |b| b.min(g)));
        self.duplicate_deletions += u64::from(t.used_duplicate_deletion);
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
}

/// Everything one trial produces.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub trial: u64,
    pub matching: Matching,
    pub critical: [usize; 3],
    pub morse: Presentation,
    pub result: Presentation,
    pub used_duplicate_deletion: bool,
}

/// The input presentation with its complex, poset and invariants, shared by all trials.
pub struct SearchContext {
    pub presentation: Presentation,
    pub complex: Complex2,
    pub poset: FacePoset,
    invariants: AbelianInvariants,
}

impl SearchContext {
    pub fn new(p: &Presentation) -> Result<Self, SearchError> {
        let complex = presentation_complex(p)?;
        let poset = complex.face_poset();
        let invariants = p.abelian_invariants()?;
        Ok(SearchContext { presentation: p.clone(), complex, poset, invariants })
    }

    /// Morse presentation and simplification for `m`, checking the count
    /// contract and abelianization invariants.
    pub fn evaluate(&self, trial: u64, m: Matching, cfg: &SimplifyConfig) -> Result<TrialOutcome, SearchError> {
        let violation = |msg: String| SearchError::InvariantViolation { trial, msg };
        let critical = critical_counts(&self.poset, &m);
        let mp = morse_presentation_in(&self.presentation, &self.complex, &self.poset, &m)
            .map_err(|e: MorseError| violation(e.to_string()))?;
        let morse = mp.presentation;
        if morse.num_generators() != critical[1] || morse.num_relators() != critical[2] {
            return Err(violation(format!(
                "{} generators and {} relators for {} critical edges and {} critical faces",
                morse.num_generators(),
                morse.num_relators(),
                critical[1],
                critical[2]
            )));
        }
        let inv = morse.abelian_invariants().map_err(|e| violation(e.to_string()))?;
        if inv != self.invariants {
            return Err(violation(format!("abelianization changed from {:?} to {inv:?}", self.invariants)));
        }
        let report = simplified(&morse, cfg);
        Ok(TrialOutcome {
            trial,
            matching: m,
            critical,
            morse,
            result: report.result,
            used_duplicate_deletion: report.used_duplicate_deletion,
        })
    }

    pub fn run_trial(&self, seed: u64, trial: u64, cfg: &SimplifyConfig) -> Result<TrialOutcome, SearchError> {
        let m = spanning_matching(&self.poset, &mut trial_rng(seed, trial));
        self.evaluate(trial, m, cfg)
    }
}

/// Trials per parallel batch and worker.
const BATCH_PER_JOB: u64 = 16;

/// Run trials `0..max_trials` and return the first success by trial index.
/// Statistics cover exactly the trials up to and including that one, so the
/// outcome does not depend on `jobs`.
pub fn run_search(p: &Presentation, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if cfg.max_trials == 0 {
        return Err(SearchError::Config("max_trials must be at least 1".into()));
    }
    let ctx = SearchContext::new(p)?;
    let jobs = cfg.jobs.max(1);
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| SearchError::Config(e.to_string()))?,
        )
    } else {
        None
    };
    let batch = if jobs > 1 { jobs as u64 * BATCH_PER_JOB } else { 1 };
    let mut stats = SearchStats::default();
    let mut start = 0;
    while start < cfg.max_trials {
        let end = cfg.max_trials.min(start + batch);
        let outcomes: Vec<Result<TrialOutcome, SearchError>> = match &pool {
            Some(pool) => pool.install(|| {
                (start..end).into_par_iter().map(|t| ctx.run_trial(cfg.seed, t, &cfg.simplify)).collect()
            }),
            None => (start..end).map(|t| ctx.run_trial(cfg.seed, t, &cfg.simplify)).collect(),
        };
        for outcome in outcomes {
            let t = outcome?;
            stats.record(&t);
            if cfg.target.is_met(&t.result) {
                let cert = Certificate::from_trial(&ctx, cfg, &t);
                return Ok(SearchOutcome { certificate: Some(cert), stats });
            }
        }
        start = end;
    }
    Ok(SearchOutcome { certificate: None, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference generator seeded with 0
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        let s = 0x9e37_79b9_7f4a_7c15u64;
        assert_eq!(splitmix64(s), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn trial_streams_differ() {
        let a = trial_rng(7, 0).next_u64();
        let b = trial_rng(7, 1).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(7, 0).next_u64());
    }

    #[test]
    fn target_round_trip() {
        for s in ["empty", "gens:1", "equiv:<x,y | x*y*x^-1*y^-1>"] {
            assert_eq!(Target::parse(s).unwrap().to_string(), s);
        }
        assert!(Target::parse("gens:x").is_err());
        assert!(Target::parse("nothing").is_err());
    }

    #[test]
    fn impossible_target_exhausts() {
        let p = parse_presentation("<x,y | x^2, x*y^-2>").unwrap();
        let cfg = SearchConfig::new(1, 5, Target::Gens(0));
        let out = run_search(&p, &cfg).unwrap();
        assert!(out.certificate.is_none());
        assert_eq!(out.stats.trials_run, 5);
        assert_eq!(out.stats.histogram.values().sum::<u64>(), 5);
        assert_eq!(out.stats.occurrence_violations, 0);
        assert!(out.stats.best_gens.is_some());
    }

    #[test]
    fn zero_trials_rejected() {
        let p = parse_presentation("<x | x>").unwrap();
        assert!(matches!(run_search(&p, &SearchConfig::new(0, 0, Target::Empty)), Err(SearchError::Config(_))));
    }
}
