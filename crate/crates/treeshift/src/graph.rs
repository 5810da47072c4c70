//! Extended directed graph representation of a TSFT.
//!
//! Convergent edges stand for blocks with equal children, divergent edges
//! for blocks with distinct children. The intrinsic graph keeps only the
//! convergent edges; strong connectivity of the reduced intrinsic graph is
//! what the decision procedures test.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::tsft::{Alphabet, AllowableSet, OneBlock, SymbolId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("divergent edge ({0}, {1}, {2}) has equal children")]
    EqualChildren(usize, usize, usize),
    #[error("graph has no vertices")]
    EmptyGraph,
}

/// The triple (vertices, convergent edges, divergent edges).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtGraph {
    alphabet: Alphabet,
    convergent: BTreeSet<(SymbolId, SymbolId)>,
    divergent: BTreeSet<(SymbolId, SymbolId, SymbolId)>,
}

impl ExtGraph {
    pub fn new(
        alphabet: Alphabet,
        convergent: impl IntoIterator<Item = (SymbolId, SymbolId)>,
        divergent: impl IntoIterator<Item = (SymbolId, SymbolId, SymbolId)>,
    ) -> Result<Self, GraphError> {
        let convergent: BTreeSet<_> = convergent.into_iter().collect();
        let divergent: BTreeSet<_> = divergent.into_iter().collect();
        for &(a, b) in &convergent {
            for id in [a, b] {
                if !alphabet.contains(id) {
                    return Err(GraphError::UnknownVertex(id.0));
                }
            }
        }
        for &(a, b, c) in &divergent {
            for id in [a, b, c] {
                if !alphabet.contains(id) {
                    return Err(GraphError::UnknownVertex(id.0));
                }
            }
            if b == c {
                return Err(GraphError::EqualChildren(a.0, b.0, c.0));
            }
        }
        Ok(ExtGraph {
            alphabet,
            convergent,
            divergent,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = SymbolId> {
        self.alphabet.ids()
    }

    pub fn convergent(&self) -> &BTreeSet<(SymbolId, SymbolId)> {
        &self.convergent
    }

    pub fn divergent(&self) -> &BTreeSet<(SymbolId, SymbolId, SymbolId)> {
        &self.divergent
    }

    pub fn has_convergent(&self, from: SymbolId, to: SymbolId) -> bool {
        self.convergent.contains(&(from, to))
    }

    pub fn with_convergent(&self, edge: (SymbolId, SymbolId)) -> ExtGraph {
        let mut next = self.clone();
        next.convergent.insert(edge);
        next
    }

    pub fn without_divergent(&self, edge: (SymbolId, SymbolId, SymbolId)) -> ExtGraph {
        let mut next = self.clone();
        next.divergent.remove(&edge);
        next
    }

    /// The plain directed graph of the convergent edges.
    pub fn intrinsic(&self) -> IntrinsicGraph {
        IntrinsicGraph {
            alphabet: self.alphabet.clone(),
            edges: self.convergent.clone(),
        }
    }
}

/// A plain directed graph over an alphabet of vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntrinsicGraph {
    alphabet: Alphabet,
    edges: BTreeSet<(SymbolId, SymbolId)>,
}

impl IntrinsicGraph {
    pub fn new(
        alphabet: Alphabet,
        edges: impl IntoIterator<Item = (SymbolId, SymbolId)>,
    ) -> Result<Self, GraphError> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(a, b) in &edges {
            for id in [a, b] {
                if !alphabet.contains(id) {
                    return Err(GraphError::UnknownVertex(id.0));
                }
            }
        }
        Ok(IntrinsicGraph { alphabet, edges })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn edges(&self) -> &BTreeSet<(SymbolId, SymbolId)> {
        &self.edges
    }

    pub fn out_neighbors(&self, v: SymbolId) -> impl Iterator<Item = SymbolId> + '_ {
        self.edges
            .range((v, SymbolId(0))..=(v, SymbolId(usize::MAX)))
            .map(|&(_, to)| to)
    }

    /// Reachability with the reflexive convention: a vertex reaches itself
    /// without an edge.
    pub fn reachable(&self, from: SymbolId, to: SymbolId) -> Result<bool, GraphError> {
        for id in [from, to] {
            if !self.alphabet.contains(id) {
                return Err(GraphError::UnknownVertex(id.0));
            }
        }
        Ok(self.path(from, to).is_some())
    }

    /// Lexicographically-first shortest path from `from` to `to`, as a vertex
    /// sequence. `Some([v])` when `from == to`.
    pub fn path(&self, from: SymbolId, to: SymbolId) -> Option<Vec<SymbolId>> {
        if from == to {
            return Some(vec![from]);
        }
        let n = self.alphabet.len();
        let mut pred: Vec<Option<SymbolId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[from.0] = true;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for w in self.out_neighbors(v) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    pred[w.0] = Some(v);
                    if w == to {
                        let mut path = vec![w];
                        let mut cur = w;
                        while let Some(p) = pred[cur.0] {
                            path.push(p);
                            cur = p;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Strongly connected components, in topological order of the
    /// condensation (sources first). Members are sorted canonically.
    pub fn scc(&self) -> Vec<Vec<SymbolId>> {
        let n = self.alphabet.len();
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|v| self.out_neighbors(SymbolId(v)).map(|w| w.0).collect())
            .collect();
        let mut state = TarjanState {
            index: 0,
            stack: Vec::new(),
            on_stack: vec![false; n],
            idx: vec![None; n],
            low: vec![0; n],
            comps: Vec::new(),
        };
        for v in 0..n {
            if state.idx[v].is_none() {
                strongconnect(v, &adjacency, &mut state);
            }
        }
        // Tarjan emits components in reverse topological order.
        state.comps.reverse();
        state
            .comps
            .into_iter()
            .map(|mut comp| {
                comp.sort_unstable();
                comp.into_iter().map(SymbolId).collect()
            })
            .collect()
    }

    pub fn is_strongly_connected(&self) -> Result<bool, GraphError> {
        if self.alphabet.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        Ok(self.scc().len() == 1)
    }

    /// The graph with every edge reversed.
    pub fn reversed(&self) -> IntrinsicGraph {
        IntrinsicGraph {
            alphabet: self.alphabet.clone(),
            edges: self.edges.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }
}

struct TarjanState {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

fn strongconnect(v: usize, adjacency: &[Vec<usize>], state: &mut TarjanState) {
    state.idx[v] = Some(state.index);
    state.low[v] = state.index;
    state.index += 1;
    state.stack.push(v);
    state.on_stack[v] = true;

    for &w in &adjacency[v] {
        if state.idx[w].is_none() {
            strongconnect(w, adjacency, state);
            state.low[v] = state.low[v].min(state.low[w]);
        } else if state.on_stack[w] {
            state.low[v] = state.low[v].min(state.idx[w].unwrap());
        }
    }

    if state.low[v] == state.idx[v].unwrap() {
        let mut comp = Vec::new();
        loop {
            let w = state.stack.pop().expect("stack underflow");
            state.on_stack[w] = false;
            comp.push(w);
            if w == v {
                break;
            }
        }
        state.comps.push(comp);
    }
}

/// Builds the extended directed graph of an allowable set: vertex per
/// symbol, convergent edge per equal-children block, divergent edge per
/// distinct-children block.
pub fn graph_of(b: &AllowableSet) -> ExtGraph {
    let mut convergent = BTreeSet::new();
    let mut divergent = BTreeSet::new();
    for block in b.blocks() {
        if block.is_convergent() {
            convergent.insert((block.parent, block.left));
        } else {
            divergent.insert((block.parent, block.left, block.right));
        }
    }
    ExtGraph {
        alphabet: b.alphabet().clone(),
        convergent,
        divergent,
    }
}

/// Inverse of [`graph_of`]: the allowable set whose graph is `g`.
pub fn shift_of(g: &ExtGraph) -> AllowableSet {
    let blocks = g
        .convergent
        .iter()
        .map(|&(a, b)| OneBlock::new(a, b, b))
        .chain(
            g.divergent
                .iter()
                .map(|&(a, b, c)| OneBlock::new(a, b, c)),
        );
    AllowableSet::new(g.alphabet.clone(), blocks)
        .expect("graph vertices come from the same alphabet")
}

fn dot_escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering: solid convergent edges; each divergent edge drawn as two
/// dashed edges sharing a group label.
pub fn to_dot(g: &ExtGraph) -> String {
    let mut out = String::from("digraph extgraph {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  \"{}\";", dot_escape(g.alphabet.name(v)));
    }
    for &(a, b) in g.convergent() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            dot_escape(g.alphabet.name(a)),
            dot_escape(g.alphabet.name(b))
        );
    }
    for (i, &(a, b, c)) in g.divergent().iter().enumerate() {
        for child in [b, c] {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [style=dashed, label=\"d{}\"];",
                dot_escape(g.alphabet.name(a)),
                dot_escape(g.alphabet.name(child)),
                i
            );
        }
    }
    out.push_str("}\n");
    out
}
