//! Exhaustive comparison up to renaming, generator inversion and relator symmetries.

use crate::words::{GenId, Letter, Word};

use super::{Presentation, PresentationError};

const MAX_GENERATORS: usize = 4;

/// Smallest letter sequence among the rotations of `w` and of `w⁻¹`.
fn cyclic_class(w: &Word) -> Vec<Letter> {
    let c = w.cyclic_reduce();
    let n = c.len();
    let mut best: Option<Vec<Letter>> = None;
    for base in [c.clone(), c.inverse()] {
        let l = base.letters();
        for k in 0..n.max(1) {
            let rot: Vec<Letter> = (0..n).map(|i| l[(k + i) % n]).collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn classes(relators: impl Iterator<Item = Word>) -> Vec<Vec<Letter>> {
    let mut v: Vec<_> = relators.map(|r| cyclic_class(&r)).collect();
    v.sort();
    v
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for g in 0..n as u32 {
            if !prefix.contains(&g) {
                prefix.push(g);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// True iff `q` arises from `p` by renaming and/or inverting generators,
/// reordering relators, inverting relators and rotating them cyclically.
/// Relators are compared after cyclic reduction.
pub fn canonical_equivalence(p: &Presentation, q: &Presentation) -> Result<bool, PresentationError> {
    let n = p.num_generators().max(q.num_generators());
    if n > MAX_GENERATORS {
        return Err(PresentationError::TooLarge(n));
    }
    if p.num_generators() != q.num_generators()
        || p.num_relators() != q.num_relators()
        || classes(p.relators().iter().cloned()).iter().map(Vec::len).ne(classes(q.relators().iter().cloned()).iter().map(Vec::len))
    {
        return Ok(false);
    }
    let target = classes(q.relators().iter().cloned());
    for perm in permutations(n) {
        for flips in 0u32..(1 << n) {
            let mapped = p.relators().iter().map(|r| {
                Word::from(
                    r.letters()
                        .iter()
                        .map(|l| Letter {
                            gen: GenId(perm[l.gen.index()]),
                            inverse: l.inverse ^ (flips >> l.gen.0 & 1 == 1),
                        })
                        .collect::<Vec<_>>(),
                )
            });
            if classes(mapped) == target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
