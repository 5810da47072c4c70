//! (d,c)-reduction of extended directed graphs, its enhanced variant, the
//! fixpoint closure, and the strongly-connected-component grouping route.
//!
//! A divergent edge (α,β,γ) together with a convergent path from β to γ
//! justifies adding the convergent edge (α,γ). The canonical step finder
//! scans divergent edges in canonical order and always walks from the left
//! child to the right one, which makes the fixpoint a closure under a
//! monotone operator: its convergent-edge set does not depend on scan order.
//! Steps witnessing a path from the right child to the left one are equally
//! valid and are accepted by the step validators, but never emitted.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{ExtGraph, GraphError};
use crate::tsft::{Alphabet, SymbolId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("divergent edge ({0}, {1}, {2}) is not in the graph")]
    UnknownDivergentEdge(usize, usize, usize),
    #[error("added edge does not match the divergent edge and orientation")]
    WrongAddedEdge,
    #[error("witness path is broken in the current intrinsic graph")]
    BrokenWitnessPath,
    #[error("convergent edge ({0}, {1}) is already present")]
    EdgeAlreadyPresent(usize, usize),
}

/// Which child of the divergent edge the witness path starts from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// Path from the left child β to the right child γ; adds (α,γ).
    LeftToRight,
    /// Path from the right child γ to the left child β; adds (α,β).
    RightToLeft,
}

/// One reduction step: the divergent edge used, the orientation of the
/// witness path, the convergent edge added, and the path itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionStep {
    pub divergent: (SymbolId, SymbolId, SymbolId),
    pub orientation: Orientation,
    pub added: (SymbolId, SymbolId),
    pub path: Vec<SymbolId>,
}

impl ReductionStep {
    /// `add (α,γ) from divergent (α,β,γ) via path β→…→γ` with symbol names.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let name = |s: SymbolId| alphabet.name(s).to_string();
        let path = self
            .path
            .iter()
            .map(|&v| name(v))
            .collect::<Vec<_>>()
            .join("→");
        format!(
            "add ({},{}) from divergent ({},{},{}) via path {}",
            name(self.added.0),
            name(self.added.1),
            name(self.divergent.0),
            name(self.divergent.1),
            name(self.divergent.2),
            path
        )
    }
}

/// First applicable reduction step in canonical divergent-edge order, or
/// `None` when the graph is (d,c)-irreducible.
pub fn find_dc_reduction(g: &ExtGraph) -> Option<ReductionStep> {
    let intrinsic = g.intrinsic();
    for &(parent, left, right) in g.divergent() {
        if !g.has_convergent(parent, right) {
            if let Some(path) = intrinsic.path(left, right) {
                return Some(ReductionStep {
                    divergent: (parent, left, right),
                    orientation: Orientation::LeftToRight,
                    added: (parent, right),
                    path,
                });
            }
        }
    }
    None
}

pub fn is_dc_irreducible(g: &ExtGraph) -> bool {
    find_dc_reduction(g).is_none()
}

/// Checks a step against the current graph: the divergent edge must be
/// present, the witness path must run along current convergent edges between
/// the endpoints the orientation claims, and the added edge must be new.
pub fn validate_step(g: &ExtGraph, step: &ReductionStep) -> Result<(), ReductionError> {
    let (parent, left, right) = step.divergent;
    if !g.divergent().contains(&step.divergent) {
        return Err(ReductionError::UnknownDivergentEdge(
            parent.0, left.0, right.0,
        ));
    }
    let (source, target) = match step.orientation {
        Orientation::LeftToRight => (left, right),
        Orientation::RightToLeft => (right, left),
    };
    if step.added != (parent, target) {
        return Err(ReductionError::WrongAddedEdge);
    }
    if step.path.first() != Some(&source) || step.path.last() != Some(&target) {
        return Err(ReductionError::BrokenWitnessPath);
    }
    for pair in step.path.windows(2) {
        if !g.has_convergent(pair[0], pair[1]) {
            return Err(ReductionError::BrokenWitnessPath);
        }
    }
    if g.has_convergent(parent, target) {
        return Err(ReductionError::EdgeAlreadyPresent(parent.0, target.0));
    }
    Ok(())
}

/// Applies a step: the convergent edges grow by exactly the added edge.
pub fn dc_reduce_step(g: &ExtGraph, step: &ReductionStep) -> Result<ExtGraph, ReductionError> {
    validate_step(g, step)?;
    Ok(g.with_convergent(step.added))
}

/// Applies a step and retires the divergent edge that justified it.
pub fn enhanced_reduce_step(
    g: &ExtGraph,
    step: &ReductionStep,
) -> Result<ExtGraph, ReductionError> {
    validate_step(g, step)?;
    Ok(g.with_convergent(step.added).without_divergent(step.divergent))
}

/// Closes the graph under reduction steps. Returns the (d,c)-irreducible
/// limit and the step trace; at most |V|² steps fire and the limit's
/// convergent-edge set is independent of scan order.
pub fn dc_fixpoint(g: &ExtGraph) -> (ExtGraph, Vec<ReductionStep>) {
    let mut current = g.clone();
    let mut trace = Vec::new();
    while let Some(step) = find_dc_reduction(&current) {
        current = current.with_convergent(step.added);
        trace.push(step);
    }
    (current, trace)
}

/// Fixpoint under a seeded random scan order: every round collects all
/// applicable steps and applies one at random. Exists to exercise the
/// scan-order independence of the limit.
pub fn dc_fixpoint_shuffled(g: &ExtGraph, seed: u64) -> (ExtGraph, Vec<ReductionStep>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = g.clone();
    let mut trace = Vec::new();
    loop {
        let intrinsic = current.intrinsic();
        let mut candidates = Vec::new();
        for &(parent, left, right) in current.divergent() {
            if !current.has_convergent(parent, right) {
                if let Some(path) = intrinsic.path(left, right) {
                    candidates.push(ReductionStep {
                        divergent: (parent, left, right),
                        orientation: Orientation::LeftToRight,
                        added: (parent, right),
                        path,
                    });
                }
            }
        }
        let Some(step) = candidates.choose(&mut rng).cloned() else {
            return (current, trace);
        };
        current = current.with_convergent(step.added);
        trace.push(step);
    }
}

/// Fixpoint of enhanced steps: each divergent edge fires at most once and is
/// then removed.
pub fn enhanced_fixpoint(g: &ExtGraph) -> (ExtGraph, Vec<ReductionStep>) {
    let mut current = g.clone();
    let mut trace = Vec::new();
    while let Some(step) = find_dc_reduction(&current) {
        current = current
            .with_convergent(step.added)
            .without_divergent(step.divergent);
        trace.push(step);
    }
    (current, trace)
}

/// Quotient of an extended graph by the strongly connected components of its
/// intrinsic graph, together with the membership map back to the vertices of
/// the graph it was built from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupedGraph {
    pub graph: ExtGraph,
    /// For each original vertex index, the component index it belongs to.
    pub membership: Vec<usize>,
    /// Component members in terms of the original vertices, in component
    /// order.
    pub components: Vec<Vec<SymbolId>>,
}

/// Groups a graph by the SCCs of its intrinsic graph. A block edge with both
/// children in one component becomes a convergent component edge; an edge
/// splitting across two components stays divergent.
pub fn grouping(g: &ExtGraph) -> Result<GroupedGraph, GraphError> {
    if g.vertex_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let components = g.intrinsic().scc();
    let mut membership = vec![usize::MAX; g.vertex_count()];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            membership[v.0] = ci;
        }
    }
    let alphabet = Alphabet::new((0..components.len()).map(|i| format!("C{}", i)))
        .expect("component names are distinct");
    let mut convergent = Vec::new();
    let mut divergent = Vec::new();
    for &(a, b) in g.convergent() {
        convergent.push((SymbolId(membership[a.0]), SymbolId(membership[b.0])));
    }
    for &(a, b, c) in g.divergent() {
        let (ca, cb, cc) = (membership[a.0], membership[b.0], membership[c.0]);
        if cb == cc {
            convergent.push((SymbolId(ca), SymbolId(cb)));
        } else {
            divergent.push((SymbolId(ca), SymbolId(cb), SymbolId(cc)));
        }
    }
    let graph = ExtGraph::new(alphabet, convergent, divergent)
        .expect("component edges index the component alphabet");
    Ok(GroupedGraph {
        graph,
        membership,
        components,
    })
}

/// One grouping round of the grouped fixpoint: the partition that round saw
/// (in terms of the original vertices) and the reduction steps applied to
/// the grouped graph (in terms of that round's components).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupedRound {
    pub partition: Vec<Vec<SymbolId>>,
    pub steps: Vec<ReductionStep>,
}

impl fmt::Display for GroupedRound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "round with {} components", self.partition.len())
    }
}

/// Alternates grouping and reduction until the grouped graph is
/// (d,c)-irreducible. The returned membership maps the vertices of the input
/// graph to the final components.
pub fn grouped_fixpoint(g: &ExtGraph) -> Result<(GroupedGraph, Vec<GroupedRound>), GraphError> {
    let mut membership: Vec<usize> = (0..g.vertex_count()).collect();
    let mut current = g.clone();
    let mut rounds = Vec::new();
    loop {
        let grouped = grouping(&current)?;
        membership = membership
            .iter()
            .map(|&v| grouped.membership[v])
            .collect();
        let mut partition = vec![Vec::new(); grouped.components.len()];
        for (orig, &comp) in membership.iter().enumerate() {
            partition[comp].push(SymbolId(orig));
        }
        let (reduced, steps) = dc_fixpoint(&grouped.graph);
        let done = steps.is_empty();
        rounds.push(GroupedRound {
            partition: partition.clone(),
            steps,
        });
        if done {
            return Ok((
                GroupedGraph {
                    graph: reduced,
                    membership,
                    components: partition,
                },
                rounds,
            ));
        }
        current = reduced;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_of;
    use crate::tsft::tests_support::{six_symbol_example, three_symbol_example};

    fn sym(i: usize) -> SymbolId {
        SymbolId(i)
    }

    #[test]
    fn step_on_three_vertex_graph() {
        let g = graph_of(&three_symbol_example());
        let step = find_dc_reduction(&g).unwrap();
        assert_eq!(step.divergent, (sym(0), sym(1), sym(2)));
        assert_eq!(step.orientation, Orientation::LeftToRight);
        assert_eq!(step.added, (sym(0), sym(2)));
        assert_eq!(step.path, vec![sym(1), sym(2)]);

        let reduced = dc_reduce_step(&g, &step).unwrap();
        assert_eq!(reduced.convergent().len(), g.convergent().len() + 1);
        assert!(reduced.has_convergent(sym(0), sym(2)));
        assert_eq!(reduced.divergent(), g.divergent());
        assert!(is_dc_irreducible(&reduced));

        assert_eq!(
            dc_reduce_step(&reduced, &step),
            Err(ReductionError::EdgeAlreadyPresent(0, 2))
        );
    }

    #[test]
    fn no_step_without_divergent_edges() {
        let g = graph_of(&three_symbol_example());
        let bare = ExtGraph::new(
            g.alphabet().clone(),
            g.convergent().iter().copied(),
            vec![],
        )
        .unwrap();
        assert!(find_dc_reduction(&bare).is_none());
    }

    #[test]
    fn fixpoint_of_six_symbol_example_adds_two_edges() {
        let g = graph_of(&six_symbol_example());
        let (limit, trace) = dc_fixpoint(&g);
        let added: Vec<_> = trace.iter().map(|s| s.added).collect();
        assert_eq!(added, vec![(sym(0), sym(2)), (sym(5), sym(2))]);
        assert!(is_dc_irreducible(&limit));
        assert_eq!(limit.divergent(), g.divergent());
        assert!(limit.intrinsic().is_strongly_connected().unwrap());
    }

    #[test]
    fn fixpoint_is_identity_on_irreducible_graphs() {
        let g = graph_of(&three_symbol_example());
        let (limit, _) = dc_fixpoint(&g);
        let (again, trace) = dc_fixpoint(&limit);
        assert!(trace.is_empty());
        assert_eq!(again, limit);
    }

    #[test]
    fn shuffled_fixpoint_reaches_the_same_limit() {
        let g = graph_of(&six_symbol_example());
        let (limit, _) = dc_fixpoint(&g);
        for seed in 0..10 {
            let (shuffled, _) = dc_fixpoint_shuffled(&g, seed);
            assert_eq!(shuffled.convergent(), limit.convergent());
        }
    }

    #[test]
    fn enhanced_step_retires_the_divergent_edge() {
        let g = graph_of(&three_symbol_example());
        let step = find_dc_reduction(&g).unwrap();
        let reduced = enhanced_reduce_step(&g, &step).unwrap();
        assert!(reduced.divergent().is_empty());
        assert!(reduced.has_convergent(sym(0), sym(2)));
        assert_eq!(reduced.convergent().len(), 4);
    }

    #[test]
    fn validate_rejects_stale_and_mismatched_steps() {
        let g = graph_of(&three_symbol_example());
        let step = find_dc_reduction(&g).unwrap();

        let mut broken = step.clone();
        broken.path = vec![sym(1), sym(0), sym(2)];
        assert_eq!(
            validate_step(&g, &broken),
            Err(ReductionError::BrokenWitnessPath)
        );

        let mut wrong = step.clone();
        wrong.added = (sym(0), sym(1));
        assert_eq!(validate_step(&g, &wrong), Err(ReductionError::WrongAddedEdge));

        let mut missing = step;
        missing.divergent = (sym(1), sym(0), sym(2));
        missing.added = (sym(1), sym(2));
        missing.path = vec![sym(0), sym(1), sym(2)];
        assert_eq!(
            validate_step(&g, &missing),
            Err(ReductionError::UnknownDivergentEdge(1, 0, 2))
        );
    }

    #[test]
    fn right_to_left_steps_validate() {
        // Divergent (0,2,1) with a path 1→2 justifies adding (0,2).
        let alphabet = Alphabet::new(["0", "1", "2"]).unwrap();
        let g = ExtGraph::new(
            alphabet,
            vec![(sym(1), sym(2))],
            vec![(sym(0), sym(2), sym(1))],
        )
        .unwrap();
        let step = ReductionStep {
            divergent: (sym(0), sym(2), sym(1)),
            orientation: Orientation::RightToLeft,
            added: (sym(0), sym(2)),
            path: vec![sym(1), sym(2)],
        };
        let reduced = dc_reduce_step(&g, &step).unwrap();
        assert!(reduced.has_convergent(sym(0), sym(2)));
    }

    #[test]
    fn grouping_of_six_symbol_example() {
        let g = graph_of(&six_symbol_example());
        let grouped = grouping(&g).unwrap();
        assert_eq!(
            grouped.components,
            vec![
                vec![sym(0), sym(1), sym(2)],
                vec![sym(3), sym(4)],
                vec![sym(5)],
            ]
        );
        // The split edges (0;1,2) and (5;1,2) both land inside C0, so the
        // grouped graph has no divergent edges and C2 points back at C0.
        assert!(grouped.graph.divergent().is_empty());
        assert!(grouped.graph.has_convergent(sym(2), sym(0)));
        assert!(grouped.graph.has_convergent(sym(0), sym(1)));
        assert!(grouped.graph.has_convergent(sym(1), sym(2)));
    }

    #[test]
    fn grouping_single_component() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let g = ExtGraph::new(
            alphabet,
            vec![(sym(0), sym(1)), (sym(1), sym(0))],
            vec![],
        )
        .unwrap();
        let grouped = grouping(&g).unwrap();
        assert_eq!(grouped.components.len(), 1);
        assert!(grouped.graph.divergent().is_empty());
        assert!(grouped.graph.has_convergent(sym(0), sym(0)));
    }

    #[test]
    fn grouped_fixpoint_matches_direct_verdict_on_examples() {
        let six = graph_of(&six_symbol_example());
        let (grouped, rounds) = grouped_fixpoint(&six).unwrap();
        assert!(grouped.graph.intrinsic().is_strongly_connected().unwrap());
        assert_eq!(rounds.len(), 1);

        let three = graph_of(&three_symbol_example());
        let (grouped, _) = grouped_fixpoint(&three).unwrap();
        assert!(!grouped.graph.intrinsic().is_strongly_connected().unwrap());
    }

    #[test]
    fn grouping_rejects_empty_graphs() {
        let g = ExtGraph::new(Alphabet::new(Vec::<String>::new()).unwrap(), vec![], vec![])
            .unwrap();
        assert_eq!(grouping(&g).unwrap_err(), GraphError::EmptyGraph);
    }
}
