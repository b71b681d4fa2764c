use crate::words::{free_reduce, Letter, Word};

use super::{valid_name, Presentation, PresentationError};

const MAX_WORD_LEN: usize = 1 << 22;

/// Parse `<x,y | x*y*x^-1*y^-1, [x,y]^2, 1>`.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, gens: Vec::new() };
    p.expect(b'<')?;
    p.skip_ws();
    if p.peek() != Some(b'|') {
        loop {
            let start = p.pos;
            let name = p.ident()?;
            if p.gens.contains(&name) {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            if !valid_name(&name) {
                return Err(p.err_at(start, "invalid generator name"));
            }
            p.gens.push(name);
            p.skip_ws();
            if p.peek() == Some(b',') {
                p.pos += 1;
                continue;
            }
            break;
        }
    }
    p.expect(b'|')?;
    let mut relators = Vec::new();
    p.skip_ws();
    if p.peek() != Some(b'>') {
        loop {
            relators.push(p.word()?);
            p.skip_ws();
            if p.peek() == Some(b',') {
                p.pos += 1;
                continue;
            }
            break;
        }
    }
    p.expect(b'>')?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Presentation::new(p.gens, relators)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    gens: Vec<String>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PresentationError {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: &str) -> PresentationError {
        PresentationError::Syntax { pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), PresentationError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return Err(self.err("expected identifier"));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<i64, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err_at(start, "exponent out of range"))
    }

    fn word(&mut self) -> Result<Word, PresentationError> {
        self.skip_ws();
        if self.peek() == Some(b'1')
            && !matches!(self.src.get(self.pos + 1), Some(c) if c.is_ascii_digit())
        {
            self.pos += 1;
            return Ok(Word::empty());
        }
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                break;
            }
            self.pos += 1;
            acc = acc.mul(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        let atom = if self.peek() == Some(b'[') {
            self.pos += 1;
            let u = self.word()?;
            self.expect(b',')?;
            let v = self.word()?;
            self.expect(b']')?;
            free_reduce(
                u.letters()
                    .iter()
                    .chain(v.letters())
                    .copied()
                    .chain(u.inverse().letters().iter().copied())
                    .chain(v.inverse().letters().iter().copied()),
            )
        } else {
            let name = self.ident()?;
            let g = self
                .gens
                .iter()
                .position(|n| *n == name)
                .ok_or(PresentationError::UnknownGenerator(name))?;
            Word::from(vec![Letter::pos(g as u32)])
        };
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            if atom.len() as u128 * k.unsigned_abs() as u128 > MAX_WORD_LEN as u128 {
                return Err(self.err_at(start, "power too large"));
            }
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(p: &Presentation, i: usize) -> Vec<(u32, i32)> {
        p.relators()[i].letters().iter().map(|l| (l.gen.0, l.sign())).collect()
    }

    #[test]
    fn commutator_and_unit() {
        let p = parse_presentation("<x,y | [x,y], 1>").unwrap();
        assert_eq!(p.generators(), ["x", "y"]);
        assert_eq!(letters(&p, 0), vec![(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert!(p.relators()[1].is_empty());
    }

    #[test]
    fn powers() {
        let p = parse_presentation("<x | x^4>").unwrap();
        assert_eq!(letters(&p, 0), vec![(0, 1); 4]);
        let p = parse_presentation("<x,y | [x,y]^-1>").unwrap();
        assert_eq!(letters(&p, 0), vec![(1, 1), (0, 1), (1, -1), (0, -1)]);
    }

    #[test]
    fn literal_two_relator_example_round_trips() {
        let text = "<x,y | x^-1*y^3*x*y^-4, x*y*x^-1*y^-1*x>";
        let p = parse_presentation(text).unwrap();
        assert_eq!(letters(&p, 0), vec![(0, -1), (1, 1), (1, 1), (1, 1), (0, 1), (1, -1), (1, -1), (1, -1), (1, -1)]);
        assert_eq!(letters(&p, 1), vec![(0, 1), (1, 1), (0, -1), (1, -1), (0, 1)]);
        let again = parse_presentation(&p.to_string()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn nested_commutators() {
        // [x,[x,y]] = x (x y x⁻¹ y⁻¹) x⁻¹ (y x y⁻¹ x⁻¹)
        let p = parse_presentation("<x,y | [x,[x,y]]>").unwrap();
        assert_eq!(
            letters(&p, 0),
            vec![(0, 1), (0, 1), (1, 1), (0, -1), (1, -1), (0, -1), (1, 1), (0, 1), (1, -1), (0, -1)]
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_presentation("<x | y>"),
            Err(PresentationError::UnknownGenerator(n)) if n == "y"
        ));
        assert!(matches!(parse_presentation("<x | x"), Err(PresentationError::Syntax { .. })));
        assert!(matches!(parse_presentation("<x | x^>"), Err(PresentationError::Syntax { .. })));
        assert!(matches!(
            parse_presentation("<x,x | x>"),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        let e = parse_presentation("<x | x*>").unwrap_err();
        assert_eq!(e, PresentationError::Syntax { pos: 7, msg: "expected identifier".into() });
    }

    #[test]
    fn empty_forms() {
        assert!(parse_presentation("< | >").unwrap().is_empty());
        assert!(parse_presentation("<|>").unwrap().is_empty());
        let p = parse_presentation("<a | >").unwrap();
        assert_eq!(p.num_generators(), 1);
        assert_eq!(p.num_relators(), 0);
    }
}
