//! Elementary moves on presentations and their logs.

use std::fmt;

use crate::words::{free_reduce, GenId, Letter, Word};

use super::{Presentation, PresentationError};

/// One elementary move. Relator and generator indices refer to positions at
/// the time the move is applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// `r_i <- r_i⁻¹`
    InvertRelator(usize),
    /// `r_i <- r_i r_j`, `i != j`
    MultiplyRelator(usize, usize),
    /// `r_i <- w r_i w⁻¹`
    ConjugateRelator(usize, Word),
    /// `r_i <- ` rotation of `r_i` starting at letter `k`
    RotateRelator(usize, usize),
    /// New last generator `g` with new last relator `g`.
    AddGeneratorAndRelator(String),
    /// Drop generator `g` and relator `r_i`, where `g` occurs exactly once
    /// overall and that occurrence is in `r_i`. Higher generators shift down.
    RemoveGeneratorAndRelator(GenId, usize),
    AddTrivialRelator,
    RemoveTrivialRelator(usize),
}

impl Move {
    /// False for the two moves that add or delete a relator `1`.
    pub fn preserves_homotopy_type(&self) -> bool {
        !matches!(self, Move::AddTrivialRelator | Move::RemoveTrivialRelator(_))
    }

    pub fn apply(&self, p: &mut Presentation) -> Result<(), PresentationError> {
        match self {
            Move::InvertRelator(i) => {
                let r = p.relator(*i)?.inverse();
                p.relators_mut()[*i] = r;
            }
            Move::MultiplyRelator(i, j) => {
                if i == j {
                    return Err(PresentationError::SelfMultiply(*i));
                }
                let r = p.relator(*i)?.mul(p.relator(*j)?);
                p.relators_mut()[*i] = r;
            }
            Move::ConjugateRelator(i, w) => {
                if let Some(l) = w.letters().iter().find(|l| l.gen.index() >= p.num_generators()) {
                    return Err(PresentationError::BadGenerator(l.gen.0));
                }
                let r = w.mul(p.relator(*i)?).mul(&w.inverse());
                p.relators_mut()[*i] = r;
            }
            Move::RotateRelator(i, k) => {
                let r = p.relator(*i)?.rotate(*k);
                p.relators_mut()[*i] = r;
            }
            Move::AddGeneratorAndRelator(name) => {
                if !super::valid_name(name) {
                    return Err(PresentationError::InvalidName(name.clone()));
                }
                if p.gen(name).is_some() {
                    return Err(PresentationError::DuplicateGenerator(name.clone()));
                }
                let g = p.num_generators() as u32;
                p.gens_mut().push(name.clone());
                p.relators_mut().push(Word::from(vec![Letter::pos(g)]));
            }
            Move::RemoveGeneratorAndRelator(g, i) => {
                if g.index() >= p.num_generators() {
                    return Err(PresentationError::BadGenerator(g.0));
                }
                p.relator(*i)?;
                let isolated = p.relators().iter().enumerate().all(|(j, r)| {
                    r.occurrences(*g) == usize::from(j == *i)
                });
                if !isolated {
                    return Err(PresentationError::NotIsolated { gen: g.0, relator: *i });
                }
                p.relators_mut().remove(*i);
                p.gens_mut().remove(g.index());
                for r in p.relators_mut().iter_mut() {
                    *r = r.map_gens(|h| if h > *g { GenId(h.0 - 1) } else { h });
                }
            }
            Move::AddTrivialRelator => p.relators_mut().push(Word::empty()),
            Move::RemoveTrivialRelator(i) => {
                if !p.relator(*i)?.is_empty() {
                    return Err(PresentationError::NotTrivial(*i));
                }
                p.relators_mut().remove(*i);
            }
        }
        Ok(())
    }

    /// Human-readable form using the generator names current when the move applies.
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            Move::InvertRelator(i) => format!("invert r{}", i + 1),
            Move::MultiplyRelator(i, j) => format!("multiply r{} by r{}", i + 1, j + 1),
            Move::ConjugateRelator(i, w) => format!("conjugate r{} by {}", i + 1, w.display(names)),
            Move::RotateRelator(i, k) => format!("rotate r{} by {}", i + 1, k),
            Move::AddGeneratorAndRelator(n) => format!("add generator {n} with relator {n}"),
            Move::RemoveGeneratorAndRelator(g, i) => {
                let n = names.get(g.index()).cloned().unwrap_or_else(|| format!("#{}", g.0));
                format!("remove generator {n} with r{}", i + 1)
            }
            Move::AddTrivialRelator => "add relator 1".to_string(),
            Move::RemoveTrivialRelator(i) => format!("remove trivial r{}", i + 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveLog(Vec<Move>);

impl MoveLog {
    pub fn new() -> Self {
        MoveLog(Vec::new())
    }

    pub fn push(&mut self, m: Move) {
        self.0.push(m);
    }

    pub fn extend(&mut self, other: MoveLog) {
        self.0.extend(other.0);
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn replay(&self, source: &Presentation) -> Result<Presentation, PresentationError> {
        let mut p = source.clone();
        for m in &self.0 {
            m.apply(&mut p)?;
        }
        Ok(p)
    }

    /// One line per move, with names resolved against the evolving presentation.
    pub fn render(&self, source: &Presentation) -> Result<String, PresentationError> {
        let mut p = source.clone();
        let mut out = String::new();
        for m in &self.0 {
            out.push_str(&m.describe(p.generators()));
            out.push('\n');
            m.apply(&mut p)?;
        }
        Ok(out)
    }
}

impl fmt::Display for MoveLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            writeln!(f, "{m:?}")?;
        }
        Ok(())
    }
}

/// Applies moves to a presentation, optionally logging them.
pub struct Recorder<'a> {
    pub p: &'a mut Presentation,
    log: Option<&'a mut MoveLog>,
}

impl<'a> Recorder<'a> {
    pub fn new(p: &'a mut Presentation, log: Option<&'a mut MoveLog>) -> Self {
        Recorder { p, log }
    }

    pub fn apply(&mut self, m: Move) -> Result<(), PresentationError> {
        m.apply(self.p)?;
        if let Some(log) = self.log.as_deref_mut() {
            log.push(m);
        }
        Ok(())
    }

    /// Conjugate relator `i` so that it becomes exactly `target`, which must be
    /// conjugate to it in the free group.
    pub(crate) fn conjugate_to(&mut self, i: usize, target: &Word) -> Result<(), PresentationError> {
        let current = self.p.relator(i)?.clone();
        if current == *target {
            return Ok(());
        }
        let w = conjugator(&current, target).expect("relator is not conjugate to its target");
        self.apply(Move::ConjugateRelator(i, w))
    }

    /// Cyclically reduce relator `i` by a conjugation.
    pub(crate) fn cyclically_reduce(&mut self, i: usize) -> Result<bool, PresentationError> {
        let (prefix, _) = self.p.relator(i)?.cyclic_split();
        if prefix.is_empty() {
            return Ok(false);
        }
        self.apply(Move::ConjugateRelator(i, prefix.inverse()))?;
        Ok(true)
    }
}

/// Some `w` with `w·from·w⁻¹ = to` in the free group.
pub(crate) fn conjugator(from: &Word, to: &Word) -> Option<Word> {
    let (p1, c1) = from.cyclic_split();
    let (p2, c2) = to.cyclic_split();
    let k = c1.rotation_to(&c2)?;
    // c2 = a⁻¹ c1 a with a = the first k letters of c1
    let a = free_reduce(c1.letters()[..k].iter().copied());
    Some(p2.mul(&a.inverse()).mul(&p1.inverse()))
}

/// Remove `g` together with relator `i`, substituting the equivalent expression
/// of `g` read from `r_i` into every other relator.
pub fn eliminate_generator(
    p: &Presentation,
    g: GenId,
    i: usize,
) -> Result<(Presentation, MoveLog), PresentationError> {
    let mut q = p.clone();
    let mut log = MoveLog::new();
    eliminate_in_place(&mut Recorder::new(&mut q, Some(&mut log)), g, i)?;
    Ok((q, log))
}

pub(crate) fn eliminate_in_place(
    rec: &mut Recorder<'_>,
    g: GenId,
    i: usize,
) -> Result<(), PresentationError> {
    if g.index() >= rec.p.num_generators() {
        return Err(PresentationError::BadGenerator(g.0));
    }
    let r = rec.p.relator(i)?.clone();
    let expr = r.equivalent_expression(g)?;
    let targets: Vec<(usize, Word)> = rec
        .p
        .relators()
        .iter()
        .enumerate()
        .filter(|&(j, w)| j != i && w.contains(g))
        .map(|(j, w)| Ok((j, w.substitute(g, &expr)?)))
        .collect::<Result<_, PresentationError>>()?;

    // Bring r_i to the form g^e·t.
    let pos = r.letters().iter().position(|l| l.gen == g).unwrap();
    rec.apply(Move::RotateRelator(i, pos))?;
    let e_sign = rec.p.relator(i)?.letters()[0].sign();
    let mut front_sign = e_sign;

    for (j, target) in targets {
        while let Some(pos) = rec.p.relators()[j].letters().iter().position(|l| l.gen == g) {
            rec.apply(Move::RotateRelator(j, pos + 1))?;
            let rj = &rec.p.relators()[j];
            let last = *rj.letters().last().unwrap();
            if last.gen != g {
                continue;
            }
            // r_i must start with the inverse of that last letter
            if front_sign != -last.sign() {
                let len = rec.p.relator(i)?.len();
                rec.apply(Move::InvertRelator(i))?;
                rec.apply(Move::RotateRelator(i, len - 1))?;
                front_sign = -front_sign;
            }
            rec.apply(Move::MultiplyRelator(j, i))?;
        }
        rec.conjugate_to(j, &target)?;
    }
    rec.apply(Move::RemoveGeneratorAndRelator(g, i))
}
