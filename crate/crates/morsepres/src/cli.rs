//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::complex::{parse_complex, presentation_complex};
use crate::matching::{critical_counts, spanning_matching, Matching};
use crate::morse::{morse_presentation_in, CombinatorialState, MorseError};
use crate::presentation::{parse_presentation, smith_normal_form, Presentation};
use crate::search::{
    replay, run_search, trial_rng, Certificate, Family, SearchConfig, SearchError, Target, REPLAY_CHECKS,
};
use crate::simplify::{simplified, SimplifyConfig};
use crate::Error;

/// The 2x2 torus with its spanning matching, used by `torus-demo`.
pub const TORUS_FIXTURE: &str = include_str!("../fixtures/torus.cx");

/// Vertex-edge pairs of the torus matching.
pub const TORUS_TREE: [(&str, &str); 3] = [("v2", "x2"), ("v3", "x3"), ("v5", "x5")];

/// Edge-face pairs of the torus matching, in collapse order.
pub const TORUS_COLLAPSES: [(&str, &str); 3] = [("x9", "e9"), ("x8", "e8"), ("x7", "e7")];

#[derive(Parser, Debug)]
#[command(name = "morsepres", version, about = "Discrete Morse matchings on presentation complexes")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a catalog presentation, e.g. `catalog AK 2` or `catalog "MS(3)"`.
    Catalog {
        family: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Generators, relators, length, deficiency, invariant factors and cell count.
    Stats { input: String },
    /// Cell counts of the presentation complex.
    Complex {
        input: String,
        /// Write the complex in line format to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run the greedy simplifier.
    Simplify {
        input: String,
        #[arg(long)]
        log_moves: bool,
        /// Never delete duplicate or trivial relators.
        #[arg(long)]
        no_duplicate_deletion: bool,
    },
    /// Morse presentation for a matching given as a pair file or `seed:trial`.
    Morse {
        input: String,
        #[arg(long)]
        matching: String,
    },
    /// Randomized matching search.
    Search {
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_trials: u64,
        /// `empty`, `gens:<k>` or `equiv:<file or presentation>`.
        #[arg(long, default_value = "empty")]
        target: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_duplicate_deletion: bool,
    },
    /// Verify a certificate.
    Replay { certificate: PathBuf },
    /// Collapse the torus fixture step by step.
    TorusDemo,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] Error),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::InvariantViolation { .. } => CliError::Invariant(e.to_string()),
            SearchError::ValidationFailure { .. } | SearchError::StaleCertificate(_) => {
                CliError::Failed(e.to_string())
            }
            other => CliError::Input(other.into()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(Error::Io(path.display().to_string(), e.to_string()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// Inline `<...>` text, a presentation file, or a catalog entry such as `AK(2)`.
fn load_presentation(input: &str) -> Result<Presentation, CliError> {
    let input = input.trim();
    if input.starts_with('<') {
        return Ok(parse_presentation(input).map_err(Error::from)?);
    }
    let path = Path::new(input);
    if path.is_file() {
        return Ok(parse_presentation(read(path)?.trim()).map_err(Error::from)?);
    }
    match input.parse::<Family>() {
        Ok(f) => Ok(f.build()?),
        Err(SearchError::UnknownFamily(_)) => Err(CliError::Usage(format!(
            "`{input}` is neither a presentation, a file, nor a catalog entry"
        ))),
        Err(e) => Err(e.into()),
    }
}

/// Pairs `lower upper`, one per line; `pair:` prefixes are accepted and other
/// `key: value` lines skipped, so a certificate also works as a matching file.
fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        let line = line.strip_prefix("pair:").unwrap_or(line).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.as_slice() {
            [key, ..] if key.ends_with(':') => continue,
            [l, u] => pairs.push((l.to_string(), u.to_string())),
            _ => return Err(CliError::Usage(format!("matching line {}: expected two cell ids", n + 1))),
        }
    }
    Ok(pairs)
}

struct Output<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Output<'_> {
    fn text(&mut self, s: impl AsRef<str>) {
        if !self.json {
            let _ = writeln!(self.out, "{}", s.as_ref());
        }
    }

    fn value(&mut self, v: impl Serialize) {
        if self.json {
            let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
}

/// One rewritten face in the torus demo.
#[derive(Clone, Debug, Serialize)]
pub struct DemoStep {
    pub step: String,
    pub face: String,
    pub raw: String,
    pub word: String,
}

/// Collapse the torus fixture pair by pair, then contract the spanning tree.
pub fn torus_demo() -> Result<Vec<DemoStep>, Error> {
    let c = parse_complex(TORUS_FIXTURE)?;
    let idx = |s: &str| c.find(s).expect("fixture cell");
    let mut state = CombinatorialState::new(&c);
    let mut steps = Vec::new();
    for (e, f) in TORUS_COLLAPSES {
        let report = state.collapse(idx(e), idx(f))?;
        for (face, raw) in &report.rewritten {
            steps.push(DemoStep {
                step: format!("collapse {e} {f}"),
                face: c.id(*face).to_string(),
                raw: state.render_raw(raw),
                word: state.render(state.face_word(*face).expect("alive face")),
            });
        }
    }
    let tree: Vec<usize> = TORUS_TREE.iter().map(|(_, e)| idx(e)).collect();
    state.contract_edges(&tree)?;
    let names: Vec<&str> = TORUS_TREE.iter().map(|(_, e)| *e).collect();
    for (face, w) in state.faces() {
        let word = state.render(w);
        steps.push(DemoStep {
            step: format!("contract {}", names.join(" ")),
            face: c.id(face).to_string(),
            raw: word.clone(),
            word,
        });
    }
    Ok(steps)
}

fn run_command(cmd: Command, o: &mut Output<'_>, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Catalog { family, params } => {
            let fam = if params.is_empty() {
                family.parse::<Family>()?
            } else {
                Family::from_parts(&family, &params)?
            };
            let p = fam.build()?;
            o.text(p.to_string());
            o.value(json!({ "name": fam.to_string(), "presentation": p.to_string() }));
        }
        Command::Stats { input } => {
            let p = load_presentation(&input)?;
            let s = p.stats();
            let factors = smith_normal_form(&p.abelianization_matrix()).map_err(Error::from)?;
            let inv = p.abelian_invariants().map_err(Error::from)?;
            let cells = presentation_complex(&p).map_err(Error::from)?.len();
            o.text(format!("generators: {}", s.n));
            o.text(format!("relators: {}", s.m));
            o.text(format!("length: {}", s.l));
            o.text(format!("deficiency: {}", s.deficiency));
            let f: Vec<String> = factors.iter().map(u64::to_string).collect();
            o.text(format!("invariant factors: {}", f.join(" ")));
            o.text(format!("free rank: {}", inv.free_rank));
            o.text(format!("cells: {cells}"));
            o.value(json!({
                "generators": s.n, "relators": s.m, "length": s.l, "deficiency": s.deficiency,
                "invariant_factors": factors, "torsion": inv.torsion, "free_rank": inv.free_rank,
                "cells": cells,
            }));
        }
        Command::Complex { input, dump } => {
            let p = load_presentation(&input)?;
            let c = presentation_complex(&p).map_err(Error::from)?;
            let (v, e, f) = c.counts();
            let covers = c.face_poset().num_covers();
            if let Some(path) = &dump {
                std::fs::write(path, c.to_text()).map_err(|e| io_err(path, e))?;
            }
            o.text(format!("vertices: {v}"));
            o.text(format!("edges: {e}"));
            o.text(format!("faces: {f}"));
            o.text(format!("cells: {}", c.len()));
            o.text(format!("euler characteristic: {}", c.euler_characteristic()));
            o.text(format!("covers: {covers}"));
            o.value(json!({
                "vertices": v, "edges": e, "faces": f, "cells": c.len(),
                "euler_characteristic": c.euler_characteristic(), "covers": covers,
            }));
        }
        Command::Simplify { input, log_moves, no_duplicate_deletion } => {
            let p = load_presentation(&input)?;
            let cfg = SimplifyConfig { allow_duplicate_deletion: !no_duplicate_deletion, log_moves, ..Default::default() };
            let r = simplified(&p, &cfg);
            let (a, b) = (p.stats(), r.result.stats());
            o.text(format!("input: {p}"));
            o.text(format!("result: {}", r.result));
            o.text(format!("generators: {} -> {}", a.n, b.n));
            o.text(format!("relators: {} -> {}", a.m, b.m));
            o.text(format!("length: {} -> {}", a.l, b.l));
            o.text(format!("trivialized: {}", r.trivialized));
            o.text(format!("duplicate deletion: {}", r.used_duplicate_deletion));
            let moves = if log_moves { Some(r.moves.render(&p).map_err(Error::from)?) } else { None };
            if let Some(m) = &moves {
                o.text(format!("moves: {}", r.moves.len()));
                o.text(m.trim_end());
            }
            o.value(json!({
                "input": p.to_string(), "result": r.result.to_string(),
                "before": a, "after": b, "trivialized": r.trivialized,
                "duplicate_deletion": r.used_duplicate_deletion,
                "moves": moves.map(|m| m.lines().map(str::to_string).collect::<Vec<_>>()),
            }));
        }
        Command::Morse { input, matching } => {
            let p = load_presentation(&input)?;
            let c = presentation_complex(&p).map_err(Error::from)?;
            let x = c.face_poset();
            let m = match matching.split_once(':').and_then(|(s, t)| Some((s.parse().ok()?, t.parse().ok()?))) {
                Some((seed, trial)) if !Path::new(&matching).exists() => {
                    spanning_matching(&x, &mut trial_rng(seed, trial))
                }
                _ => {
                    let pairs = parse_pairs(&read(Path::new(&matching))?)?;
                    Matching::from_ids(&x, &pairs).map_err(Error::from)?
                }
            };
            let crit = critical_counts(&x, &m);
            let mp = morse_presentation_in(&p, &c, &x, &m).map_err(|e| match e {
                MorseError::OccurrenceViolation { .. } => CliError::Invariant(e.to_string()),
                other => CliError::Input(other.into()),
            })?;
            let q = mp.presentation;
            o.text(format!("critical: {} {} {}", crit[0], crit[1], crit[2]));
            o.text(q.to_string());
            let cells = |v: &[crate::CellId]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            o.value(json!({
                "critical": crit, "presentation": q.to_string(),
                "generator_cells": cells(&mp.generator_cells), "relator_cells": cells(&mp.relator_cells),
            }));
        }
        Command::Search { input, seed, max_trials, target, jobs, out, no_duplicate_deletion } => {
            let p = load_presentation(&input)?;
            let target = match target.strip_prefix("equiv:") {
                Some(t) if !t.trim_start().starts_with('<') => Target::Equiv(load_presentation(t)?),
                _ => Target::parse(&target)?,
            };
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            if max_trials == 0 {
                return Err(CliError::Usage("--max-trials must be at least 1".into()));
            }
            let mut cfg = SearchConfig::new(seed, max_trials, target);
            cfg.jobs = jobs;
            cfg.simplify.allow_duplicate_deletion = !no_duplicate_deletion;
            let _ = writeln!(err, "searching {} trials of {p} with seed {seed}", max_trials);
            let res = run_search(&p, &cfg)?;
            let s = &res.stats;
            o.text(format!("trials: {}", s.trials_run));
            o.text(format!("occurrence violations: {}", s.occurrence_violations));
            if let Some(b) = s.best_gens {
                o.text(format!("best generator count: {b}"));
            }
            let hist: Vec<String> = s.histogram.iter().map(|(g, n)| format!("{g}:{n}")).collect();
            o.text(format!("histogram: {}", hist.join(" ")));
            if let (Some(cert), Some(path)) = (&res.certificate, &out) {
                let body = if o.json { cert.to_json() } else { cert.to_string() };
                std::fs::write(path, body).map_err(|e| io_err(path, e))?;
            }
            match &res.certificate {
                Some(c) => {
                    o.text(format!("found at trial {}: {}", c.trial, c.result));
                    if out.is_none() {
                        o.text(c.to_string().trim_end());
                    }
                }
                None => o.text("target not reached"),
            }
            o.value(json!({ "stats": s, "certificate": res.certificate }));
            if res.certificate.is_none() {
                return Ok(1);
            }
        }
        Command::Replay { certificate } => {
            let text = read(&certificate)?;
            let cert = if text.trim_start().starts_with('{') {
                Certificate::from_json(&text)?
            } else {
                text.parse::<Certificate>()?
            };
            match replay(&cert) {
                Ok(r) => {
                    for c in &r.checks {
                        o.text(format!("ok {c}"));
                    }
                    o.text(format!("result: {}", r.result));
                    o.value(json!({ "passed": true, "checks": r.checks, "result": r.result.to_string() }));
                }
                Err(SearchError::ValidationFailure { check, detail }) => {
                    let passed: Vec<&str> = REPLAY_CHECKS.iter().copied().take_while(|c| *c != check).collect();
                    for c in &passed {
                        o.text(format!("ok {c}"));
                    }
                    o.text(format!("FAIL {check}: {detail}"));
                    o.value(json!({ "passed": false, "checks": passed, "failed": check, "detail": detail }));
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::TorusDemo => {
            let steps = torus_demo()?;
            for s in &steps {
                if s.raw == s.word {
                    o.text(format!("{}: {} = {}", s.step, s.face, s.word));
                } else {
                    o.text(format!("{}: {} = {}  (reduced: {})", s.step, s.face, s.raw, s.word));
                }
            }
            o.value(&steps);
        }
    }
    Ok(0)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut o = Output { out, json: cli.json };
    match run_command(cli.command, &mut o, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
