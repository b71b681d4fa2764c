//! Greedy presentation simplification: substring replacement and generator
//! elimination, alternated until nothing applies.

use crate::presentation::eliminate_in_place;
use crate::presentation::{Move, MoveLog, Presentation, Recorder};
use crate::words::{GenId, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifyConfig {
    pub max_passes: usize,
    /// Delete empty relators and relators duplicating another one up to
    /// rotation and inversion. This changes the homotopy type in general.
    pub allow_duplicate_deletion: bool,
    pub log_moves: bool,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig { max_passes: 1000, allow_duplicate_deletion: true, log_moves: false }
    }
}

#[derive(Clone, Debug)]
pub struct SimplifyReport {
    pub result: Presentation,
    pub moves: MoveLog,
    pub used_duplicate_deletion: bool,
    pub trivialized: bool,
}

/// Best replacement found so far: `v` of length `len` starts at `a` in the
/// first relator and at `b` in the second (inverted when `inv`).
#[derive(Clone, Copy, Debug)]
struct Candidate {
    len: usize,
    i: usize,
    a: usize,
    j: usize,
    b: usize,
    inv: bool,
}

fn cyclic_duplicate(r: &Word, s: &Word) -> bool {
    r.rotation_to(s).is_some() || r.inverse().rotation_to(s).is_some()
}

fn find_candidate(rels: &[Word]) -> Option<Candidate> {
    let invs: Vec<Word> = rels.iter().map(Word::inverse).collect();
    let m = rels.len();
    let mut dup = vec![false; m * m];
    for i in 0..m {
        for j in i + 1..m {
            if rels[i].len() == rels[j].len() && cyclic_duplicate(&rels[i], &rels[j]) {
                dup[i * m + j] = true;
                dup[j * m + i] = true;
            }
        }
    }
    let mut best: Option<Candidate> = None;
    for i in 0..m {
        let r1 = rels[i].letters();
        let n1 = r1.len();
        for a in 0..n1 {
            for j in 0..m {
                if j == i || dup[i * m + j] {
                    continue;
                }
                let n2 = rels[j].len();
                let cap = n1.min(n2);
                let floor = (n1 / 2 + 1).max(best.map_or(0, |c| c.len + 1));
                if cap < floor {
                    continue;
                }
                for b in 0..n2 {
                    for inv in [false, true] {
                        let r2 = if inv { invs[j].letters() } else { rels[j].letters() };
                        let mut len = 0;
                        while len < cap && r1[(a + len) % n1] == r2[(b + len) % n2] {
                            len += 1;
                        }
                        if len >= floor && best.is_none_or(|c| len > c.len) {
                            best = Some(Candidate { len, i, a, j, b, inv });
                        }
                    }
                }
            }
        }
    }
    best
}

fn cyclically_reduce_all(rec: &mut Recorder<'_>) -> bool {
    let mut changed = false;
    for i in 0..rec.p.num_relators() {
        changed |= rec.cyclically_reduce(i).expect("index in range");
    }
    changed
}

fn search_rec(rec: &mut Recorder<'_>) -> bool {
    let mut changed = cyclically_reduce_all(rec);
    while let Some(c) = find_candidate(rec.p.relators()) {
        let n1 = rec.p.relators()[c.i].len();
        let n2 = rec.p.relators()[c.j].len();
        let k1 = (c.a + c.len) % n1;
        let moves = [
            c.inv.then_some(Move::InvertRelator(c.j)),
            Some(Move::RotateRelator(c.j, (c.b + c.len) % n2)),
            Some(Move::RotateRelator(c.i, k1)),
            Some(Move::InvertRelator(c.i)),
            Some(Move::MultiplyRelator(c.j, c.i)),
            Some(Move::InvertRelator(c.i)),
            Some(Move::RotateRelator(c.i, (n1 - k1) % n1)),
        ];
        for m in moves.into_iter().flatten() {
            rec.apply(m).expect("search move indices are valid");
        }
        rec.cyclically_reduce(c.j).expect("index in range");
        changed = true;
    }
    changed
}

fn elimination_rec(rec: &mut Recorder<'_>) -> bool {
    let mut changed = false;
    loop {
        let mut pick: Option<(usize, usize, u32)> = None;
        for (i, r) in rec.p.relators().iter().enumerate() {
            for g in 0..rec.p.num_generators() as u32 {
                if r.occurrences(GenId(g)) == 1 {
                    let key = (r.len(), i, g);
                    if pick.is_none_or(|p| key < p) {
                        pick = Some(key);
                    }
                }
            }
        }
        let Some((_, i, g)) = pick else { break };
        eliminate_in_place(rec, GenId(g), i).expect("single occurrence was checked");
        cyclically_reduce_all(rec);
        changed = true;
    }
    changed
}

/// Delete empty relators and cyclic duplicates. Returns whether anything was removed.
fn drop_trivial_and_duplicates(rec: &mut Recorder<'_>) -> bool {
    let mut changed = false;
    loop {
        if let Some(i) = rec.p.relators().iter().position(Word::is_empty) {
            rec.apply(Move::RemoveTrivialRelator(i)).expect("relator is empty");
            changed = true;
            continue;
        }
        let rels = rec.p.relators();
        let found = (0..rels.len()).find_map(|j| {
            (0..j).find_map(|i| {
                let (ri, rj) = (rels[i].cyclic_reduce(), rels[j].cyclic_reduce());
                if ri.len() != rj.len() {
                    return None;
                }
                if let Some(k) = ri.rotation_to(&rj) {
                    return Some((i, j, false, k));
                }
                ri.inverse().rotation_to(&rj).map(|k| (i, j, true, k))
            })
        });
        let Some((i, j, inverted, k)) = found else { break };
        rec.cyclically_reduce(i).expect("index in range");
        rec.cyclically_reduce(j).expect("index in range");
        let n = rec.p.relators()[j].len();
        // r_j becomes r_i (or r_i⁻¹), then r_j·r_i⁻¹ (or r_j·r_i) is empty
        rec.apply(Move::RotateRelator(j, (n - k) % n.max(1))).expect("valid");
        if !inverted {
            rec.apply(Move::InvertRelator(i)).expect("valid");
        }
        rec.apply(Move::MultiplyRelator(j, i)).expect("valid");
        if !inverted {
            rec.apply(Move::InvertRelator(i)).expect("valid");
        }
        debug_assert!(rec.p.relators()[j].is_empty());
        rec.apply(Move::RemoveTrivialRelator(j)).expect("relator is empty");
        changed = true;
    }
    changed
}

/// Replace long shared substrings until no replacement shortens a relator.
pub fn search_phase(p: &Presentation) -> (Presentation, bool) {
    let mut q = p.clone();
    let changed = search_rec(&mut Recorder::new(&mut q, None));
    (q, changed)
}

/// Eliminate generators occurring exactly once in some relator until none do.
pub fn elimination_phase(p: &Presentation) -> (Presentation, bool) {
    let mut q = p.clone();
    let changed = elimination_rec(&mut Recorder::new(&mut q, None));
    (q, changed)
}

pub fn simplified(p: &Presentation, cfg: &SimplifyConfig) -> SimplifyReport {
    let mut q = p.clone();
    let mut log = MoveLog::new();
    let mut used_duplicate_deletion = false;
    {
        let mut rec = Recorder::new(&mut q, cfg.log_moves.then_some(&mut log));
        for _ in 0..cfg.max_passes.max(1) {
            let mut changed = false;
            if cfg.allow_duplicate_deletion && drop_trivial_and_duplicates(&mut rec) {
                used_duplicate_deletion = true;
                changed = true;
            }
            changed |= search_rec(&mut rec);
            if cfg.allow_duplicate_deletion && drop_trivial_and_duplicates(&mut rec) {
                used_duplicate_deletion = true;
                changed = true;
            }
            changed |= elimination_rec(&mut rec);
            if !changed {
                break;
            }
        }
    }
    let trivialized = q.is_empty();
    if let Some(o) = p.origin() {
        q = q.with_origin(format!("simplified({o})"));
    }
    SimplifyReport { result: q, moves: log, used_duplicate_deletion, trivialized }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn search_examples() {
        let (q, changed) = search_phase(&pres("<x | x>"));
        assert!(!changed);
        assert_eq!(q, pres("<x | x>"));
        let (q, changed) = search_phase(&pres("<a,b,c,z | a*b*c, z*b*c>"));
        assert!(changed);
        assert_eq!(q, pres("<a,b,c,z | a*b*c, z*a^-1>"));
    }

    #[test]
    fn search_replaces_in_gordon_relator() {
        let p = pres("<x,y | x*[x^-1,y^-1]^-1, y*[y^-1,x^-2]^-1>");
        let (q, changed) = search_phase(&p);
        assert!(changed);
        assert!(q.total_length() < p.total_length());
    }

    #[test]
    fn elimination_examples() {
        let (q, changed) = elimination_phase(&pres("<x,y | x*y*x*y^-1*x^-1*y^-1, x*y^-2>"));
        assert!(changed);
        assert!(q.is_empty());
        let (q, changed) = elimination_phase(&pres("<x,y | [x,y]>"));
        assert!(!changed);
        assert_eq!(q, pres("<x,y | [x,y]>"));
        let (q, _) = elimination_phase(&pres("<a,b | a*b^-1, a*b>"));
        assert_eq!(q, pres("<b | b^2>"));
    }

    #[test]
    fn simple_trivializations() {
        let r = simplified(&pres("<x,y | x, y>"), &SimplifyConfig::default());
        assert!(r.trivialized);
        assert!(!r.used_duplicate_deletion);
    }

    #[test]
    fn duplicate_rule_is_flagged() {
        let p = pres("<x,y | [x,y], y*x*y^-1*x^-1>");
        let on = simplified(&p, &SimplifyConfig::default());
        assert!(on.used_duplicate_deletion);
        assert_eq!(on.result.num_relators(), 1);
        let off = simplified(&p, &SimplifyConfig { allow_duplicate_deletion: false, ..Default::default() });
        assert!(!off.used_duplicate_deletion);
        assert_eq!(off.result.num_relators(), 2);
        let b = simplified(&pres("<x,y | [x,y], 1>"), &SimplifyConfig::default());
        assert!(b.used_duplicate_deletion);
        assert_eq!(b.result, pres("<x,y | [x,y]>"));
    }

    #[test]
    fn logged_moves_replay() {
        let p = pres("<x,y | x*y*x*y^-1*x^-1*y^-1, x^2*y^-3>");
        let cfg = SimplifyConfig { log_moves: true, ..Default::default() };
        for text in [
            "<x,y | x*y*x*y^-1*x^-1*y^-1, x^2*y^-3>",
            "<a,b,c | a*b*c*a^-1*b, b*c*b*a^-1*c, a^2*b*c^-3*b*a^-1>",
        ] {
            let p = pres(text);
            let r = simplified(&p, &cfg);
            assert_eq!(r.moves.replay(&p).unwrap(), r.result);
        }
        let r = simplified(&p, &cfg);
        assert_eq!(r.moves.replay(&p).unwrap(), r.result);
    }

    #[test]
    fn idempotent() {
        let p = pres("<a,b,c | a*b*c*a^-1*b, b*c*b*a^-1*c, a^2*b*c^-3*b*a^-1>");
        let r = simplified(&p, &SimplifyConfig::default());
        let again = simplified(&r.result, &SimplifyConfig { log_moves: true, ..Default::default() });
        assert_eq!(again.result, r.result);
        assert!(again.moves.is_empty());
    }
}
