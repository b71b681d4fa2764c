//! Free-group words over indexed generators.

use std::fmt;

use thiserror::Error;

/// Index of a generator inside some naming context (a presentation or a complex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A signed generator occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: u32) -> Letter {
        Letter { gen: GenId(gen), inverse: false }
    }

    pub fn neg(gen: u32) -> Letter {
        Letter { gen: GenId(gen), inverse: true }
    }

    pub fn signed(gen: GenId, sign: i32) -> Letter {
        Letter { gen, inverse: sign < 0 }
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("generator {gen} occurs {count} times, expected exactly once")]
    GeneratorNotUnique { gen: u32, count: usize },
    #[error("replacement for generator {0} mentions the generator itself")]
    SelfReference(u32),
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

/// Freely reduce an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        match out.last() {
            Some(&last) if last.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gen_power(gen: GenId, exp: i64) -> Word {
        let l = Letter::signed(gen, if exp < 0 { -1 } else { 1 });
        Word(vec![l; exp.unsigned_abs() as usize])
    }

    /// Product of two words, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        free_reduce(std::iter::repeat_n(base.0.iter().copied(), n).flatten())
    }

    /// Split `self = p · c · p⁻¹` with `c` cyclically reduced; returns `(p, c)`.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].cancels(self.0[n - 1 - k]) {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    pub fn cyclic_reduce(&self) -> Word {
        self.cyclic_split().1
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) if self.0.len() > 1 => !a.cancels(*b),
            _ => true,
        }
    }

    /// Cyclic rotation starting at position `k`, freely reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        free_reduce(self.0[k..].iter().chain(self.0[..k].iter()).copied())
    }

    pub fn occurrences(&self, g: GenId) -> usize {
        self.0.iter().filter(|l| l.gen == g).count()
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.0.iter().any(|l| l.gen == g)
    }

    pub fn exponent_sum(&self, g: GenId) -> i64 {
        self.0.iter().filter(|l| l.gen == g).map(|l| l.sign() as i64).sum()
    }

    /// The replacement for `g` read off the single occurrence of `g` in `self`.
    ///
    /// The word is rotated so that `g^e` comes first, `g^e · w`, and the result is
    /// `w⁻¹` for `e = +1` and `w` for `e = -1`.
    pub fn equivalent_expression(&self, g: GenId) -> Result<Word, WordError> {
        let count = self.occurrences(g);
        if count != 1 {
            return Err(WordError::GeneratorNotUnique { gen: g.0, count });
        }
        let k = self.0.iter().position(|l| l.gen == g).unwrap();
        let rest = free_reduce(self.0[k + 1..].iter().chain(self.0[..k].iter()).copied());
        Ok(if self.0[k].inverse { rest } else { rest.inverse() })
    }

    /// Replace every `g` by `repl` and every `g⁻¹` by `repl⁻¹`, without reducing.
    pub fn substitute_raw(&self, g: GenId, repl: &Word) -> Result<Vec<Letter>, WordError> {
        if repl.contains(g) {
            return Err(WordError::SelfReference(g.0));
        }
        let inv = repl.inverse();
        let mut out = Vec::with_capacity(self.0.len() + repl.len());
        for l in &self.0 {
            if l.gen == g {
                out.extend_from_slice(if l.inverse { &inv.0 } else { &repl.0 });
            } else {
                out.push(*l);
            }
        }
        Ok(out)
    }

    pub fn substitute(&self, g: GenId, repl: &Word) -> Result<Word, WordError> {
        Ok(free_reduce(self.substitute_raw(g, repl)?))
    }

    /// Rewrite generator indices; `f` must not create cancellations.
    pub fn map_gens(&self, mut f: impl FnMut(GenId) -> GenId) -> Word {
        free_reduce(self.0.iter().map(|l| Letter { gen: f(l.gen), inverse: l.inverse }))
    }

    /// Offset `k` such that `self.rotate(k) == other`, if any. Both words must be
    /// cyclically reduced for this to mean cyclic conjugacy.
    pub fn rotation_to(&self, other: &Word) -> Option<usize> {
        let n = self.0.len();
        if n != other.0.len() {
            return None;
        }
        if n == 0 {
            return Some(0);
        }
        (0..n).find(|&k| (0..n).all(|i| self.0[(k + i) % n] == other.0[i]))
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names, spaced: false }
    }

    /// Letter-by-letter rendering, e.g. `x6 x4 x6^-1 x4^-1`.
    pub fn display_spaced<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names, spaced: true }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Word {
        free_reduce(v)
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
    spaced: bool,
}

fn name_of<S: AsRef<str>>(names: &[S], g: GenId) -> String {
    names
        .get(g.index())
        .map(|s| s.as_ref().to_string())
        .unwrap_or_else(|| format!("?{}", g.0))
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spaced {
            return fmt_letters(f, self.word.letters(), self.names);
        }
        let letters = &self.word.0;
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let exp = (j - i) as i64 * letters[i].sign() as i64;
            write!(f, "{}", name_of(self.names, letters[i].gen))?;
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Write raw letters separated by spaces; the empty sequence prints as `1`.
pub fn fmt_letters<S: AsRef<str>>(
    f: &mut fmt::Formatter<'_>,
    letters: &[Letter],
    names: &[S],
) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{}", name_of(names, l.gen))?;
        if l.inverse {
            write!(f, "^-1")?;
        }
    }
    Ok(())
}

/// Space-separated rendering of an unreduced letter sequence.
pub fn letters_to_string<S: AsRef<str>>(letters: &[Letter], names: &[S]) -> String {
    struct D<'a, S>(&'a [Letter], &'a [S]);
    impl<S: AsRef<str>> fmt::Display for D<'_, S> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_letters(f, self.0, self.1)
        }
    }
    D(letters, names).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: u32 = 0;
    const Y: u32 = 1;

    fn w(letters: &[(u32, i32)]) -> Word {
        free_reduce(letters.iter().map(|&(g, s)| Letter::signed(GenId(g), s)))
    }

    #[test]
    fn cancellation() {
        assert!(w(&[(X, 1), (X, -1)]).is_empty());
        // y² y y² y⁻¹ y⁻² y⁻¹ = y
        let raw = [(Y, 1), (Y, 1), (Y, 1), (Y, 1), (Y, 1), (Y, -1), (Y, -1), (Y, -1), (Y, -1)];
        assert_eq!(w(&raw), w(&[(Y, 1)]));
    }

    #[test]
    fn inversion() {
        assert_eq!(w(&[(X, 1), (Y, -1)]).inverse(), w(&[(Y, 1), (X, -1)]));
        assert!(Word::empty().inverse().is_empty());
        let c = w(&[(X, 1), (Y, 1), (X, -1), (Y, -1)]);
        assert_eq!(c.inverse(), w(&[(Y, 1), (X, 1), (Y, -1), (X, -1)]));
    }

    #[test]
    fn cyclic() {
        assert_eq!(w(&[(X, -1), (Y, 1), (X, 1)]).cyclic_reduce(), w(&[(Y, 1)]));
        let r = w(&[(X, 1), (Y, 1), (X, 1), (Y, -1), (X, -1), (Y, -1)]);
        assert_eq!(r.cyclic_reduce(), r);
        assert!(Word::empty().cyclic_reduce().is_empty());
        let (p, c) = w(&[(X, 1), (Y, 1), (Y, 1), (X, -1)]).cyclic_split();
        assert_eq!(p, w(&[(X, 1)]));
        assert_eq!(c, w(&[(Y, 1), (Y, 1)]));
    }

    #[test]
    fn counting() {
        assert_eq!(w(&[(X, 1), (Y, -1), (Y, -1)]).occurrences(GenId(X)), 1);
        assert_eq!(Word::empty().occurrences(GenId(X)), 0);
        let r = w(&[(X, 1), (Y, 1), (X, 1), (Y, -1), (X, -1), (Y, -1)]);
        assert_eq!(r.occurrences(GenId(X)), 3);
    }

    #[test]
    fn rewriting_rule_examples() {
        let r = w(&[(X, 1), (Y, -1), (Y, -1)]);
        assert_eq!(r.equivalent_expression(GenId(X)).unwrap(), w(&[(Y, 1), (Y, 1)]));
        assert!(w(&[(X, 1)]).equivalent_expression(GenId(X)).unwrap().is_empty());
        // a x⁻¹ b -> b a
        let (a, x, b) = (0, 1, 2);
        let r = w(&[(a, 1), (x, -1), (b, 1)]);
        let e = r.equivalent_expression(GenId(x)).unwrap();
        assert_eq!(e, w(&[(b, 1), (a, 1)]));
        assert!(r.substitute(GenId(x), &e).unwrap().is_empty());
        assert_eq!(
            w(&[(X, 1), (X, 1)]).equivalent_expression(GenId(X)),
            Err(WordError::GeneratorNotUnique { gen: X, count: 2 })
        );
    }

    #[test]
    fn substitution() {
        // xyxy⁻¹x⁻¹y⁻¹ with x := y² reduces to y
        let r = w(&[(X, 1), (Y, 1), (X, 1), (Y, -1), (X, -1), (Y, -1)]);
        let s = r.substitute(GenId(X), &w(&[(Y, 1), (Y, 1)])).unwrap();
        assert_eq!(s, w(&[(Y, 1)]));
        let free = w(&[(Y, 1), (Y, 1)]);
        assert_eq!(free.substitute(GenId(X), &w(&[(Y, -1)])).unwrap(), free);
        assert_eq!(
            r.substitute(GenId(X), &w(&[(X, 1)])),
            Err(WordError::SelfReference(X))
        );
    }

    #[test]
    fn formatting() {
        let names = ["x", "y"];
        let r = w(&[(X, 1), (X, 1), (Y, -1), (Y, -1), (Y, -1), (X, 1)]);
        assert_eq!(r.display(&names).to_string(), "x^2*y^-3*x");
        assert_eq!(Word::empty().display(&names).to_string(), "1");
        assert_eq!(w(&[(X, 1), (Y, -1)]).display_spaced(&names).to_string(), "x y^-1");
    }

    #[test]
    fn rotation_lookup() {
        let r = w(&[(X, 1), (Y, 1), (X, -1), (Y, -1)]);
        let s = r.rotate(2);
        assert_eq!(r.rotation_to(&s), Some(2));
        assert_eq!(r.rotation_to(&r.inverse()), None);
    }
}
