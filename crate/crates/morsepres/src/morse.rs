//! Internal collapses: from a complex and an acyclic matching to the Morse
//! complex and its presentation.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{presentation_complex, CellId, Complex2, ComplexError, FacePoset};
use crate::matching::{critical_counts, is_acyclic, Matching, MatchingError};
use crate::presentation::{valid_name, Presentation};
use crate::words::{free_reduce, letters_to_string, GenId, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("matched vertex-edge pairs do not form a spanning tree")]
    NotASpanningTree,
    #[error("edge `{edge}` occurs {count} times in face `{face}`, expected once")]
    OccurrenceViolation { edge: String, face: String, count: usize },
    #[error("cell `{0}` was already removed")]
    Removed(String),
    #[error("matching has {0} critical vertices, expected 1")]
    CriticalVertices(usize),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One internal collapse: `edge` and `face` removed, `edge := expr` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseRecord {
    pub edge: usize,
    pub face: usize,
    pub expr: Word,
}

/// Faces rewritten by one collapse, with their words before free reduction.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub record: CollapseRecord,
    pub rewritten: Vec<(usize, Vec<Letter>)>,
}

/// Alive edges and faces of a partially collapsed complex. Face words use the
/// edge's cell index as generator.
#[derive(Clone, Debug)]
pub struct CombinatorialState<'c> {
    complex: &'c Complex2,
    names: Vec<String>,
    alive_edge: Vec<bool>,
    faces: BTreeMap<usize, Word>,
    log: Vec<CollapseRecord>,
}

impl<'c> CombinatorialState<'c> {
    /// Every edge alive; every face attached along its boundary path.
    pub fn new(complex: &'c Complex2) -> Self {
        let mut alive_edge = vec![false; complex.len()];
        for e in complex.cells_of_dim(1) {
            alive_edge[e] = true;
        }
        let faces = complex
            .cells_of_dim(2)
            .map(|f| {
                let w = free_reduce(complex.boundary(f).iter().map(|b| Letter {
                    gen: GenId(b.edge as u32),
                    inverse: b.inverse,
                }));
                (f, w)
            })
            .collect();
        CombinatorialState {
            complex,
            names: complex.cells().iter().map(|c| c.id.to_string()).collect(),
            alive_edge,
            faces,
            log: Vec::new(),
        }
    }

    pub fn complex(&self) -> &Complex2 {
        self.complex
    }

    /// Cell ids indexed by cell, for rendering face words.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn face_word(&self, face: usize) -> Option<&Word> {
        self.faces.get(&face)
    }

    pub fn faces(&self) -> impl Iterator<Item = (usize, &Word)> {
        self.faces.iter().map(|(&f, w)| (f, w))
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive_edge.len()).filter(|&e| self.alive_edge[e])
    }

    pub fn log(&self) -> &[CollapseRecord] {
        &self.log
    }

    pub fn render(&self, w: &Word) -> String {
        w.display_spaced(&self.names).to_string()
    }

    pub fn render_raw(&self, letters: &[Letter]) -> String {
        letters_to_string(letters, &self.names)
    }

    /// Collapse a tree edge into its vertex: its letters become trivial.
    pub fn contract_edges(&mut self, edges: &[usize]) -> Result<(), MorseError> {
        for &e in edges {
            if !self.alive_edge[e] {
                return Err(MorseError::Removed(self.names[e].clone()));
            }
            self.alive_edge[e] = false;
        }
        for w in self.faces.values_mut() {
            if w.letters().iter().any(|l| edges.contains(&l.gen.index())) {
                *w = free_reduce(w.letters().iter().copied().filter(|l| !edges.contains(&l.gen.index())));
            }
        }
        Ok(())
    }

    /// Remove the matched pair `(edge, face)` and rewrite every other face.
    pub fn collapse(&mut self, edge: usize, face: usize) -> Result<StepReport, MorseError> {
        if !self.alive_edge[edge] {
            return Err(MorseError::Removed(self.names[edge].clone()));
        }
        let Some(word) = self.faces.get(&face) else {
            return Err(MorseError::Removed(self.names[face].clone()));
        };
        let g = GenId(edge as u32);
        let count = word.occurrences(g);
        if count != 1 {
            return Err(MorseError::OccurrenceViolation {
                edge: self.names[edge].clone(),
                face: self.names[face].clone(),
                count,
            });
        }
        let expr = word.equivalent_expression(g)?;
        self.faces.remove(&face);
        self.alive_edge[edge] = false;
        let mut rewritten = Vec::new();
        for (&f, w) in self.faces.iter_mut() {
            if w.contains(g) {
                let raw = w.substitute_raw(g, &expr)?;
                *w = free_reduce(raw.iter().copied());
                rewritten.push((f, raw));
            }
        }
        let record = CollapseRecord { edge, face, expr };
        self.log.push(record.clone());
        Ok(StepReport { record, rewritten })
    }

    /// Presentation on the alive edges (ordered by id) with one relator per
    /// alive face (ordered by id).
    pub fn to_presentation(&self) -> MorsePresentation {
        let c = self.complex;
        let mut edges: Vec<usize> = self.alive_edges().collect();
        edges.sort_by(|&a, &b| c.id(a).cmp(c.id(b)));
        let mut faces: Vec<usize> = self.faces.keys().copied().collect();
        faces.sort_by(|&a, &b| c.id(a).cmp(c.id(b)));
        let mut slot = vec![u32::MAX; c.len()];
        for (k, &e) in edges.iter().enumerate() {
            slot[e] = k as u32;
        }
        let names: Vec<String> = edges.iter().enumerate().map(|(k, &e)| generator_name(c.id(e), k)).collect();
        let relators = faces.iter().map(|f| self.faces[f].map_gens(|g| GenId(slot[g.index()]))).collect();
        let presentation = Presentation::new(names, relators).expect("edge names are valid and distinct");
        MorsePresentation {
            presentation,
            generator_cells: edges.iter().map(|&e| c.id(e).clone()).collect(),
            relator_cells: faces.iter().map(|&f| c.id(f).clone()).collect(),
        }
    }
}

/// `e:x:1` becomes `x_1`, `e:r2:t5` becomes `r2_t5`; other valid names are kept.
fn generator_name(id: &CellId, k: usize) -> String {
    if let Some(rest) = id.as_str().strip_prefix("e:") {
        let s = rest.replace(':', "_");
        if valid_name(&s) {
            return s;
        }
    }
    if valid_name(id.as_str()) {
        return id.as_str().to_string();
    }
    format!("a{k}")
}

/// A Morse presentation and the critical cells its generators and relators
/// come from.
#[derive(Clone, Debug)]
pub struct MorsePresentation {
    pub presentation: Presentation,
    pub generator_cells: Vec<CellId>,
    pub relator_cells: Vec<CellId>,
}

/// Quotient by the spanning tree given by the vertex-edge pairs.
pub fn tree_quotient<'c>(
    c: &'c Complex2,
    vertex_pairs: &[(usize, usize)],
) -> Result<(CombinatorialState<'c>, Presentation), MorseError> {
    let (v, _, _) = c.counts();
    if vertex_pairs.len() + 1 != v {
        return Err(MorseError::NotASpanningTree);
    }
    let mut parent: Vec<usize> = (0..c.len()).collect();
    fn root(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for &(vx, e) in vertex_pairs {
        if c.dim(vx) != 0 || c.dim(e) != 1 {
            return Err(MorseError::NotASpanningTree);
        }
        let (s, t) = c.endpoints(e);
        if vx != s && vx != t {
            return Err(MorseError::NotASpanningTree);
        }
        let (a, b) = (root(&mut parent, s), root(&mut parent, t));
        if a == b {
            return Err(MorseError::NotASpanningTree);
        }
        parent[a] = b;
    }
    let mut state = CombinatorialState::new(c);
    let tree: Vec<usize> = vertex_pairs.iter().map(|&(_, e)| e).collect();
    state.contract_edges(&tree)?;
    let q0 = state.to_presentation().presentation;
    Ok((state, q0))
}

type Pairs = Vec<(usize, usize)>;

/// Check the matching; returns its vertex-edge pairs and its edge-face pairs
/// in ascending edge id order.
fn prepare(c: &Complex2, x: &FacePoset, m: &Matching) -> Result<(Pairs, Pairs), MorseError> {
    let crit = critical_counts(x, m);
    if crit[0] != 1 {
        return Err(MorseError::CriticalVertices(crit[0]));
    }
    if !is_acyclic(x, m) {
        return Err(MatchingError::CyclicMatching.into());
    }
    let m0: Vec<(usize, usize)> = m.pairs_of_dim(x, 0).collect();
    let mut m1: Vec<(usize, usize)> = m.pairs_of_dim(x, 1).collect();
    m1.sort_by(|a, b| c.id(a.0).cmp(c.id(b.0)));
    Ok((m0, m1))
}

/// Tree quotient followed by the internal collapses of `m`, in ascending edge
/// id order, or in `order` when given (which must list exactly the edge-face pairs).
pub fn collapse_matching<'c>(
    c: &'c Complex2,
    x: &FacePoset,
    m: &Matching,
    order: Option<&[(usize, usize)]>,
) -> Result<CombinatorialState<'c>, MorseError> {
    let (m0, m1) = prepare(c, x, m)?;
    let (mut state, _) = tree_quotient(c, &m0)?;
    for &(e, f) in order.unwrap_or(&m1) {
        state.collapse(e, f)?;
    }
    Ok(state)
}

/// Critical edges and final words of the critical faces.
#[derive(Clone, Debug)]
pub struct MorseComplex {
    pub critical_edges: Vec<CellId>,
    pub faces: Vec<(CellId, Word)>,
    pub names: Vec<String>,
}

impl fmt::Display for MorseComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<&str> = self.critical_edges.iter().map(CellId::as_str).collect();
        writeln!(f, "critical edges: {}", edges.join(" "))?;
        for (id, w) in &self.faces {
            writeln!(f, "{id}: {}", w.display_spaced(&self.names))?;
        }
        Ok(())
    }
}

pub fn morse_complex(c: &Complex2, x: &FacePoset, m: &Matching) -> Result<MorseComplex, MorseError> {
    let state = collapse_matching(c, x, m, None)?;
    let mut critical_edges: Vec<CellId> = state.alive_edges().map(|e| c.id(e).clone()).collect();
    critical_edges.sort();
    Ok(MorseComplex {
        critical_edges,
        faces: state.faces().map(|(f, w)| (c.id(f).clone(), w.clone())).collect(),
        names: state.names().to_vec(),
    })
}

/// Morse presentation of `p` for a matching on the face poset of its complex.
pub fn morse_presentation_in(
    p: &Presentation,
    c: &Complex2,
    x: &FacePoset,
    m: &Matching,
) -> Result<MorsePresentation, MorseError> {
    let state = collapse_matching(c, x, m, None)?;
    let mut out = state.to_presentation();
    let src = p.origin().map_or_else(|| p.to_string(), str::to_string);
    out.presentation = out.presentation.with_origin(format!("morse({src})"));
    Ok(out)
}

pub fn morse_presentation(p: &Presentation, m: &Matching) -> Result<Presentation, MorseError> {
    let c = presentation_complex(p)?;
    let x = c.face_poset();
    Ok(morse_presentation_in(p, &c, &x, m)?.presentation)
}
