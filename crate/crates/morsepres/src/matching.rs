//! Acyclic matchings on face posets.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::complex::{CellId, FacePoset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("`{0}` < `{1}` is not a cover relation")]
    NotACover(String, String),
    #[error("cell `{0}` occurs in two pairs")]
    Repeated(String),
    #[error("matching is not acyclic")]
    CyclicMatching,
}

/// A set of disjoint cover pairs `(lower, upper)`, by poset index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<usize>>,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn empty(x: &FacePoset) -> Self {
        Matching { partner: vec![None; x.len()], pairs: Vec::new() }
    }

    pub fn from_pairs(
        x: &FacePoset,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatchingError> {
        let mut m = Matching::empty(x);
        for (l, u) in pairs {
            if l >= x.len() || !x.is_cover(l, u) {
                let name = |k: usize| if k < x.len() { x.id(k).to_string() } else { format!("#{k}") };
                return Err(MatchingError::NotACover(name(l), name(u)));
            }
            for k in [l, u] {
                if m.partner[k].is_some() {
                    return Err(MatchingError::Repeated(x.id(k).to_string()));
                }
            }
            m.add(l, u);
        }
        Ok(m)
    }

    pub fn from_ids<S: AsRef<str>>(x: &FacePoset, pairs: &[(S, S)]) -> Result<Self, MatchingError> {
        let find = |s: &str| x.find(s).ok_or_else(|| MatchingError::UnknownCell(s.to_string()));
        let idx = pairs
            .iter()
            .map(|(l, u)| Ok((find(l.as_ref())?, find(u.as_ref())?)))
            .collect::<Result<Vec<_>, MatchingError>>()?;
        Matching::from_pairs(x, idx)
    }

    fn add(&mut self, l: usize, u: usize) {
        self.partner[l] = Some(u);
        self.partner[u] = Some(l);
        self.pairs.push((l, u));
    }

    pub fn partner(&self, k: usize) -> Option<usize> {
        self.partner[k]
    }

    pub fn is_matched(&self, k: usize) -> bool {
        self.partner[k].is_some()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs whose lower cell has dimension `d`.
    pub fn pairs_of_dim<'a>(&'a self, x: &'a FacePoset, d: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.pairs.iter().copied().filter(move |&(l, _)| x.dim(l) == d)
    }

    /// Pairs by id, sorted.
    pub fn id_pairs(&self, x: &FacePoset) -> Vec<(CellId, CellId)> {
        let mut v: Vec<_> = self.pairs.iter().map(|&(l, u)| (x.id(l).clone(), x.id(u).clone())).collect();
        v.sort();
        v
    }

    /// Same pairs, possibly inserted in a different order.
    pub fn same_pairs(&self, other: &Matching) -> bool {
        self.partner == other.partner
    }
}

/// Arcs of the Hasse digraph with matched covers reversed.
fn out_arcs<'a>(x: &'a FacePoset, m: &'a Matching, k: usize) -> impl Iterator<Item = usize> + 'a {
    let up = x.up(k).iter().copied().filter(move |&u| m.partner(k) != Some(u));
    let down = m.partner(k).filter(|&p| x.is_cover(p, k));
    up.chain(down)
}

pub fn is_acyclic(x: &FacePoset, m: &Matching) -> bool {
    let n = x.len();
    let mut indeg = vec![0usize; n];
    for k in 0..n {
        for t in out_arcs(x, m, k) {
            indeg[t] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
    let mut seen = 0;
    while let Some(k) = queue.pop_front() {
        seen += 1;
        for t in out_arcs(x, m, k) {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    seen == n
}

/// Unmatched cells grouped by dimension.
pub fn critical_cells(x: &FacePoset, m: &Matching) -> [Vec<usize>; 3] {
    let mut out: [Vec<usize>; 3] = Default::default();
    for k in 0..x.len() {
        if !m.is_matched(k) {
            out[x.dim(k)].push(k);
        }
    }
    out
}

pub fn critical_counts(x: &FacePoset, m: &Matching) -> [usize; 3] {
    let c = critical_cells(x, m);
    [c[0].len(), c[1].len(), c[2].len()]
}

/// Would adding the unmatched pair `(edge, face)` close a cycle?
///
/// Such a cycle must leave `edge` upward through another face and come back
/// down through matched faces, so it stays within dimensions one and two.
struct CycleProbe {
    mark: Vec<u32>,
    stamp: u32,
    stack: Vec<usize>,
}

impl CycleProbe {
    fn new(n: usize) -> Self {
        CycleProbe { mark: vec![0; n], stamp: 0, stack: Vec::new() }
    }

    fn closes_cycle(&mut self, x: &FacePoset, m: &Matching, edge: usize, face: usize) -> bool {
        self.stamp += 1;
        self.stack.clear();
        self.stack.push(edge);
        self.mark[edge] = self.stamp;
        while let Some(e) = self.stack.pop() {
            for &g in x.up(e) {
                if m.partner(e) == Some(g) || (e == edge && g == face) {
                    continue;
                }
                if g == face {
                    return true;
                }
                if let Some(z) = m.partner(g) {
                    if self.mark[z] != self.stamp {
                        self.mark[z] = self.stamp;
                        self.stack.push(z);
                    }
                }
            }
        }
        false
    }
}

/// Random acyclic matching with exactly one critical vertex on a connected
/// complex: a randomized depth-first spanning tree rooted at a random vertex,
/// then faces in random order, each paired with a random boundary edge when
/// that keeps the matching acyclic.
pub fn spanning_matching<R: Rng + ?Sized>(x: &FacePoset, rng: &mut R) -> Matching {
    let mut m = Matching::empty(x);
    let vertices: Vec<usize> = x.cells_of_dim(0).collect();
    if vertices.is_empty() {
        return m;
    }
    let root = vertices[rng.gen_range(0..vertices.len())];
    let mut visited = vec![false; x.len()];
    visited[root] = true;
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, shuffled(x.up(root), rng))];
    while let Some((v, edges)) = stack.last_mut() {
        let v = *v;
        match edges.pop() {
            Some(e) => {
                let w = x.down(e).iter().copied().find(|&w| w != v).unwrap_or(v);
                if !visited[w] {
                    visited[w] = true;
                    m.add(w, e);
                    let next = shuffled(x.up(w), rng);
                    stack.push((w, next));
                }
            }
            None => {
                stack.pop();
            }
        }
    }

    let mut faces: Vec<usize> = x.cells_of_dim(2).collect();
    faces.shuffle(rng);
    let mut probe = CycleProbe::new(x.len());
    let mut candidates = Vec::new();
    for f in faces {
        candidates.clear();
        candidates.extend(x.down(f).iter().copied().filter(|&e| !m.is_matched(e)));
        candidates.shuffle(rng);
        if let Some(&e) = candidates.iter().find(|&&e| !probe.closes_cycle(x, &m, e, f)) {
            m.add(e, f);
        }
    }
    m
}

fn shuffled<R: Rng + ?Sized>(s: &[usize], rng: &mut R) -> Vec<usize> {
    let mut v = s.to_vec();
    v.shuffle(rng);
    v
}

/// Vertex-edge matching induced by a spanning tree: every vertex except the
/// root is paired with the edge towards its parent.
pub fn tree_matching(x: &FacePoset, tree_edges: &[usize], root: usize) -> Result<Matching, MatchingError> {
    let mut parent_edge = vec![None; x.len()];
    let mut seen = vec![false; x.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut pairs = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &e in x.up(v) {
            if !tree_edges.contains(&e) || parent_edge[v] == Some(e) {
                continue;
            }
            let Some(w) = x.down(e).iter().copied().find(|&w| w != v) else { continue };
            if seen[w] {
                continue;
            }
            seen[w] = true;
            parent_edge[w] = Some(e);
            pairs.push((w, e));
            queue.push_back(w);
        }
    }
    Matching::from_pairs(x, pairs)
}

/// Do the matched vertex-edge pairs, as a graph on all vertices, form a spanning tree?
pub fn vertex_pairs_span_tree(x: &FacePoset, m: &Matching) -> bool {
    let vertices: Vec<usize> = x.cells_of_dim(0).collect();
    let edges: Vec<usize> = m.pairs_of_dim(x, 0).map(|(_, e)| e).collect();
    if edges.len() + 1 != vertices.len() {
        return false;
    }
    let mut parent: Vec<usize> = (0..x.len()).collect();
    fn root(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for e in edges {
        let d = x.down(e);
        let (a, b) = (root(&mut parent, d[0]), root(&mut parent, d[1]));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Labels from a linear extension of the modified Hasse digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseLabeling(Vec<u32>);

impl MorseLabeling {
    pub fn label(&self, k: usize) -> u32 {
        self.0[k]
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    /// Matched pairs share a label; every other cover strictly increases it.
    pub fn is_valid(&self, x: &FacePoset, m: &Matching) -> bool {
        x.covers().all(|(l, u)| {
            if m.partner(l) == Some(u) {
                self.0[l] == self.0[u]
            } else {
                self.0[l] < self.0[u]
            }
        })
    }

    /// Cells whose label no other cell carries.
    pub fn unshared(&self) -> Vec<usize> {
        let mut count = std::collections::HashMap::new();
        for &l in &self.0 {
            *count.entry(l).or_insert(0usize) += 1;
        }
        (0..self.0.len()).filter(|&k| count[&self.0[k]] == 1).collect()
    }
}

/// Morse function from a matching. Matched pairs are merged into one class
/// and classes are numbered from 1 in a topological order; classes made of
/// vertices and edges come before those containing faces, ties broken by id.
pub fn morse_labeling(x: &FacePoset, m: &Matching) -> Result<MorseLabeling, MatchingError> {
    let n = x.len();
    let class_of = |k: usize| m.partner(k).map_or(k, |p| p.min(k));
    let mut indeg = vec![0usize; n];
    for (l, u) in x.covers() {
        if m.partner(l) != Some(u) {
            indeg[class_of(u)] += 1;
        }
    }
    let key = |c: usize| {
        let upper = m.partner(c).map_or(c, |p| p.max(c));
        Reverse((u8::from(x.dim(upper) == 2), x.id(c).clone(), c))
    };
    let mut heap: BinaryHeap<_> =
        (0..n).filter(|&k| class_of(k) == k && indeg[k] == 0).map(key).collect();
    let mut label = vec![0u32; n];
    let mut next = 1u32;
    while let Some(Reverse((_, _, c))) = heap.pop() {
        let members = [Some(c), m.partner(c)];
        for k in members.into_iter().flatten() {
            label[k] = next;
        }
        next += 1;
        for k in members.into_iter().flatten() {
            for &u in x.up(k) {
                if m.partner(k) == Some(u) {
                    continue;
                }
                let cu = class_of(u);
                indeg[cu] -= 1;
                if indeg[cu] == 0 {
                    heap.push(key(cu));
                }
            }
        }
    }
    if label.contains(&0) {
        return Err(MatchingError::CyclicMatching);
    }
    Ok(MorseLabeling(label))
}
