//! Regular 2-complexes, their face posets, and the subdivided presentation complex.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("cell `{cell}` is not regular: {reason}")]
    RegularityViolation { cell: String, reason: String },
    #[error("relator {0} is empty and has no regular subdivision")]
    EmptyRelator(usize),
}

/// Cell name. Presentation complexes use the canonical scheme
/// `v:o`, `v:g:<gen>`, `v:r<i>`, `e:<gen>:1`, `e:<gen>:2`, `e:r<i>:t<t>`, `f:r<i>:t<t>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(String);

impl CellId {
    pub fn new(s: impl Into<String>) -> Self {
        CellId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Dimension read from the tag of a canonical id.
    pub fn canonical_dim(&self) -> Option<usize> {
        match self.0.split_once(':')?.0 {
            "v" => Some(0),
            "e" => Some(1),
            "f" => Some(2),
            _ => None,
        }
    }
}

impl AsRef<str> for CellId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A signed edge in a boundary path; `inverse` means traversed target to source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub edge: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellKind {
    Vertex,
    Edge { src: usize, dst: usize },
    Face { boundary: Vec<BoundaryEdge> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: CellId,
    pub kind: CellKind,
}

impl Cell {
    pub fn dim(&self) -> usize {
        match self.kind {
            CellKind::Vertex => 0,
            CellKind::Edge { .. } => 1,
            CellKind::Face { .. } => 2,
        }
    }
}

/// A validated regular 2-complex. Cells are addressed by dense indices.
#[derive(Clone, Debug)]
pub struct Complex2 {
    cells: Vec<Cell>,
    index: HashMap<CellId, usize>,
}

#[derive(Default)]
pub struct ComplexBuilder {
    cells: Vec<Cell>,
    index: HashMap<CellId, usize>,
}

impl ComplexBuilder {
    fn insert(&mut self, id: CellId, kind: CellKind) -> Result<usize, ComplexError> {
        if self.index.contains_key(&id) {
            return Err(ComplexError::DuplicateId(id.0));
        }
        let k = self.cells.len();
        self.index.insert(id.clone(), k);
        self.cells.push(Cell { id, kind });
        Ok(k)
    }

    fn lookup(&self, id: &str, dim: usize) -> Result<usize, ComplexError> {
        match self.index.get(&CellId::new(id)) {
            Some(&k) if self.cells[k].dim() == dim => Ok(k),
            _ => Err(ComplexError::UnknownCell(id.to_string())),
        }
    }

    pub fn vertex(&mut self, id: &str) -> Result<usize, ComplexError> {
        self.insert(CellId::new(id), CellKind::Vertex)
    }

    pub fn edge(&mut self, id: &str, src: &str, dst: &str) -> Result<usize, ComplexError> {
        let (s, d) = (self.lookup(src, 0)?, self.lookup(dst, 0)?);
        if s == d {
            return Err(ComplexError::RegularityViolation { cell: id.into(), reason: "loop edge".into() });
        }
        self.insert(CellId::new(id), CellKind::Edge { src: s, dst: d })
    }

    /// `boundary` lists edge ids with a traversal sign.
    pub fn face(&mut self, id: &str, boundary: &[(&str, bool)]) -> Result<usize, ComplexError> {
        let b = boundary
            .iter()
            .map(|&(e, inverse)| Ok(BoundaryEdge { edge: self.lookup(e, 1)?, inverse }))
            .collect::<Result<Vec<_>, ComplexError>>()?;
        self.check_face(id, &b)?;
        self.insert(CellId::new(id), CellKind::Face { boundary: b })
    }

    fn ends(&self, b: BoundaryEdge) -> (usize, usize) {
        match self.cells[b.edge].kind {
            CellKind::Edge { src, dst } if b.inverse => (dst, src),
            CellKind::Edge { src, dst } => (src, dst),
            _ => unreachable!("boundary entries are edges"),
        }
    }

    fn check_face(&self, id: &str, b: &[BoundaryEdge]) -> Result<(), ComplexError> {
        let bad = |reason: &str| ComplexError::RegularityViolation { cell: id.into(), reason: reason.into() };
        if b.len() < 2 {
            return Err(bad("boundary needs at least two edges"));
        }
        let mut seen_v = Vec::with_capacity(b.len());
        for (k, &e) in b.iter().enumerate() {
            if b[..k].iter().any(|o| o.edge == e.edge) {
                return Err(bad("edge repeated in boundary"));
            }
            let (s, t) = self.ends(e);
            let (next_s, _) = self.ends(b[(k + 1) % b.len()]);
            if t != next_s {
                return Err(bad("boundary path is not closed"));
            }
            if seen_v.contains(&s) {
                return Err(bad("boundary revisits a vertex"));
            }
            seen_v.push(s);
        }
        Ok(())
    }

    pub fn build(self) -> Complex2 {
        Complex2 { cells: self.cells, index: self.index }
    }
}

impl Complex2 {
    pub fn builder() -> ComplexBuilder {
        ComplexBuilder::default()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> &Cell {
        &self.cells[k]
    }

    pub fn id(&self, k: usize) -> &CellId {
        &self.cells[k].id
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.index.get(&CellId::new(id)).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.cells[k].dim()
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(move |&k| self.cells[k].dim() == d)
    }

    /// `(vertices, edges, faces)`
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = [0usize; 3];
        for cell in &self.cells {
            c[cell.dim()] += 1;
        }
        (c[0], c[1], c[2])
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.counts();
        v as i64 - e as i64 + f as i64
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        match self.cells[edge].kind {
            CellKind::Edge { src, dst } => (src, dst),
            _ => panic!("cell {} is not an edge", self.cells[edge].id),
        }
    }

    pub fn boundary(&self, face: usize) -> &[BoundaryEdge] {
        match &self.cells[face].kind {
            CellKind::Face { boundary } => boundary,
            _ => panic!("cell {} is not a face", self.cells[face].id),
        }
    }

    pub fn face_poset(&self) -> FacePoset {
        face_poset(self)
    }

    /// Serialize in the line format accepted by [`parse_complex`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            match &c.kind {
                CellKind::Vertex => out.push_str(&format!("v {}\n", c.id)),
                CellKind::Edge { src, dst } => {
                    out.push_str(&format!("e {} {} {}\n", c.id, self.cells[*src].id, self.cells[*dst].id))
                }
                CellKind::Face { boundary } => {
                    out.push_str(&format!("f {}", c.id));
                    for b in boundary {
                        let s = if b.inverse { '-' } else { '+' };
                        out.push_str(&format!(" {s}{}", self.cells[b.edge].id));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Parse `v <id>` / `e <id> <src> <dst>` / `f <id> <±edge> ...` lines; `#` starts a comment.
pub fn parse_complex(text: &str) -> Result<Complex2, ComplexError> {
    let mut b = Complex2::builder();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| ComplexError::Parse { line: n + 1, msg: msg.to_string() };
        let tok: Vec<&str> = line.split_whitespace().collect();
        match (tok[0], tok.len()) {
            ("v", 2) => {
                b.vertex(tok[1])?;
            }
            ("e", 4) => {
                b.edge(tok[1], tok[2], tok[3])?;
            }
            ("f", k) if k >= 3 => {
                let bd = tok[2..]
                    .iter()
                    .map(|t| match t.split_at(1) {
                        ("+", e) if !e.is_empty() => Ok((e, false)),
                        ("-", e) if !e.is_empty() => Ok((e, true)),
                        _ => Err(err("boundary entries must be +edge or -edge")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                b.face(tok[1], &bd)?;
            }
            _ => return Err(err("expected `v id`, `e id src dst` or `f id ±edge...`")),
        }
    }
    Ok(b.build())
}

pub fn load_complex(path: &std::path::Path) -> Result<Complex2, crate::Error> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Io(path.display().to_string(), e.to_string()))?;
    Ok(parse_complex(&text)?)
}

/// The subdivided presentation complex: one base vertex, a barycenter per
/// generator splitting its loop into two half-edges, and a cone over each
/// relator's subdivided circle.
pub fn presentation_complex(p: &Presentation) -> Result<Complex2, ComplexError> {
    if let Some(i) = p.relators().iter().position(|r| r.is_empty()) {
        return Err(ComplexError::EmptyRelator(i + 1));
    }
    let names = p.generators();
    let mut b = Complex2::builder();
    b.vertex("v:o")?;
    for g in names {
        b.vertex(&format!("v:g:{g}"))?;
    }
    for i in 1..=p.num_relators() {
        b.vertex(&format!("v:r{i}"))?;
    }
    for g in names {
        b.edge(&format!("e:{g}:1"), "v:o", &format!("v:g:{g}"))?;
        b.edge(&format!("e:{g}:2"), &format!("v:g:{g}"), "v:o")?;
    }
    for (i, r) in p.relators().iter().enumerate() {
        let i = i + 1;
        for (k, l) in r.letters().iter().enumerate() {
            let g = &names[l.gen.index()];
            b.edge(&format!("e:r{i}:t{}", 2 * k), &format!("v:r{i}"), "v:o")?;
            b.edge(&format!("e:r{i}:t{}", 2 * k + 1), &format!("v:r{i}"), &format!("v:g:{g}"))?;
        }
    }
    for (i, r) in p.relators().iter().enumerate() {
        let i = i + 1;
        let corners = 2 * r.len();
        for (k, l) in r.letters().iter().enumerate() {
            let g = &names[l.gen.index()];
            let halves = if l.inverse {
                [(format!("e:{g}:2"), true), (format!("e:{g}:1"), true)]
            } else {
                [(format!("e:{g}:1"), false), (format!("e:{g}:2"), false)]
            };
            for (h, (half, inv)) in halves.iter().enumerate() {
                let t = 2 * k + h;
                let radial_in = format!("e:r{i}:t{t}");
                let radial_out = format!("e:r{i}:t{}", (t + 1) % corners);
                b.face(
                    &format!("f:r{i}:t{t}"),
                    &[(radial_in.as_str(), false), (half.as_str(), *inv), (radial_out.as_str(), true)],
                )?;
            }
        }
    }
    Ok(b.build())
}

/// Cells of a complex ordered by the face relation, stored through its covers.
#[derive(Clone, Debug)]
pub struct FacePoset {
    ids: Vec<CellId>,
    dims: Vec<u8>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    index: HashMap<CellId, usize>,
}

pub fn face_poset(c: &Complex2) -> FacePoset {
    let n = c.len();
    let mut down = vec![Vec::new(); n];
    let mut up = vec![Vec::new(); n];
    for (k, cell) in c.cells().iter().enumerate() {
        let below: Vec<usize> = match &cell.kind {
            CellKind::Vertex => Vec::new(),
            CellKind::Edge { src, dst } => vec![*src, *dst],
            CellKind::Face { boundary } => boundary.iter().map(|b| b.edge).collect(),
        };
        for &lower in &below {
            up[lower].push(k);
        }
        down[k] = below;
    }
    FacePoset {
        ids: c.cells().iter().map(|x| x.id.clone()).collect(),
        dims: c.cells().iter().map(|x| x.dim() as u8).collect(),
        down,
        up,
        index: c.index.clone(),
    }
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, k: usize) -> &CellId {
        &self.ids[k]
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.index.get(&CellId::new(id)).copied()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k] as usize
    }

    /// Cells covered by `k`.
    pub fn down(&self, k: usize) -> &[usize] {
        &self.down[k]
    }

    /// Cells covering `k`.
    pub fn up(&self, k: usize) -> &[usize] {
        &self.up[k]
    }

    pub fn is_cover(&self, lower: usize, upper: usize) -> bool {
        upper < self.len() && self.down[upper].contains(&lower)
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&k| self.dim(k) == d)
    }

    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.down[u].iter().map(move |&l| (l, u)))
    }

    pub fn num_covers(&self) -> usize {
        self.down.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|&d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pc(s: &str) -> Complex2 {
        presentation_complex(&parse_presentation(s).unwrap()).unwrap()
    }

    #[test]
    fn cell_counts() {
        let c = pc("<x,y | x^2, x*y^-2>");
        assert_eq!(c.counts(), (5, 14, 10));
        assert_eq!(c.len(), 29);
        assert_eq!(c.euler_characteristic(), 1);
        assert_eq!(pc("<x | x>").len(), 9);
        assert_eq!(pc("< | >").len(), 1);
    }

    #[test]
    fn canonical_ids() {
        let c = pc("<x | x^-1>");
        let ids: Vec<&str> = c.cells().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(
            ids,
            ["v:o", "v:g:x", "v:r1", "e:x:1", "e:x:2", "e:r1:t0", "e:r1:t1", "f:r1:t0", "f:r1:t1"]
        );
        let f0 = c.find("f:r1:t0").unwrap();
        let b: Vec<(&str, bool)> =
            c.boundary(f0).iter().map(|b| (c.id(b.edge).as_str(), b.inverse)).collect();
        assert_eq!(b, [("e:r1:t0", false), ("e:x:2", true), ("e:r1:t1", true)]);
        assert_eq!(c.id(5).canonical_dim(), Some(1));
    }

    #[test]
    fn poset_covers() {
        let c = pc("<x | x>");
        let x = c.face_poset();
        for f in x.cells_of_dim(2) {
            assert_eq!(x.down(f).len(), 3);
        }
        for e in x.cells_of_dim(1) {
            assert_eq!(x.down(e).len(), 2);
        }
        let c = pc("<x,y | x^2, x*y^-2>");
        let x = c.face_poset();
        for e in x.cells_of_dim(1) {
            if x.id(e).as_str().starts_with("e:r") {
                assert_eq!(x.up(e).len(), 2, "{}", x.id(e));
            }
        }
        assert_eq!(x.num_covers(), 14 * 2 + 10 * 3);
        let single = Complex2::builder();
        let mut single = single;
        single.vertex("p").unwrap();
        let s = single.build().face_poset();
        assert_eq!((s.len(), s.num_covers()), (1, 0));
    }

    #[test]
    fn empty_relator_rejected() {
        let p = parse_presentation("<x,y | [x,y], 1>").unwrap();
        assert_eq!(presentation_complex(&p).unwrap_err(), ComplexError::EmptyRelator(2));
    }

    #[test]
    fn regularity_checks() {
        let open = "v a\nv b\nv c\ne p a b\ne q b c\nf F +p +q\n";
        assert!(matches!(parse_complex(open), Err(ComplexError::RegularityViolation { .. })));
        let revisit = "v a\nv b\nv c\ne p a b\ne q b a\ne r a c\ne s c a\nf F +p +q +r +s\n";
        assert!(matches!(parse_complex(revisit), Err(ComplexError::RegularityViolation { .. })));
        assert!(matches!(parse_complex("v a\ne l a a\n"), Err(ComplexError::RegularityViolation { .. })));
        assert!(matches!(parse_complex("v a\nq\n"), Err(ComplexError::Parse { line: 2, .. })));
    }

    #[test]
    fn text_round_trip() {
        let c = pc("<x,y | x*y*x^-1*y^-1>");
        let d = parse_complex(&c.to_text()).unwrap();
        assert_eq!(c.cells(), d.cells());
    }
}
