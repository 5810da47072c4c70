//! Top-level decision procedures with checkable certificates.
//!
//! Both routes essentialize the instance, build its extended graph, close it
//! under (d,c)-reduction (directly, or interleaved with SCC grouping), and
//! read the verdict off strong connectivity of the reduced intrinsic graph.
//! The certificate carries the reduction trace plus connectivity evidence
//! that can be re-checked without re-running the procedure: a pair of
//! spanning trees through a root vertex for connected verdicts, a pair with
//! no connecting path for disconnected ones, and the elimination order for
//! empty ones.

use std::fmt;

use crate::graph::{graph_of, ExtGraph, IntrinsicGraph};
use crate::reduction::{
    dc_fixpoint, grouped_fixpoint, grouping, validate_step, GroupedRound, ReductionStep,
};
use crate::tsft::{AllowableSet, OneBlock, SymbolId, Verdict};

/// Connectivity evidence over the final reduced graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Evidence {
    /// Root vertex plus two spanning trees in the reduced intrinsic graph:
    /// `out_parent[v]` is the predecessor of `v` on a path root⇝v, and
    /// `in_next[v]` is the successor of `v` on a path v⇝root. Together they
    /// connect every ordered pair through the root.
    StronglyConnected {
        root: SymbolId,
        out_parent: Vec<Option<SymbolId>>,
        in_next: Vec<Option<SymbolId>>,
    },
    /// An ordered pair with no path in the reduced intrinsic graph.
    Disconnected { from: SymbolId, to: SymbolId },
    /// Essentialization removed every symbol, in this order.
    Empty { eliminated: Vec<String> },
}

/// Which flowchart produced the certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Route {
    Direct {
        steps: Vec<ReductionStep>,
    },
    Grouped {
        rounds: Vec<GroupedRound>,
        /// Essential symbol index → final component index.
        membership: Vec<usize>,
    },
}

/// A verdict together with everything needed to audit it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    /// The essentialized instance the graph algebra ran on.
    pub essential: AllowableSet,
    pub route: Route,
    pub evidence: Evidence,
}

fn connectivity_evidence(intrinsic: &IntrinsicGraph) -> (Verdict, Evidence) {
    let n = intrinsic.vertex_count();
    debug_assert!(n > 0);
    if intrinsic.scc().len() > 1 {
        // First ordered pair, in canonical order, with no connecting path.
        for from in intrinsic.alphabet().ids() {
            for to in intrinsic.alphabet().ids() {
                if intrinsic.path(from, to).is_none() {
                    return (
                        Verdict::NotCpcIrreducible,
                        Evidence::Disconnected { from, to },
                    );
                }
            }
        }
        unreachable!("a graph with several components has a disconnected pair");
    }
    let root = SymbolId(0);
    let out_parent = bfs_parents(intrinsic, root);
    let in_next = bfs_parents(&intrinsic.reversed(), root);
    (
        Verdict::CpcIrreducible,
        Evidence::StronglyConnected {
            root,
            out_parent,
            in_next,
        },
    )
}

fn bfs_parents(g: &IntrinsicGraph, root: SymbolId) -> Vec<Option<SymbolId>> {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[root.0] = true;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for w in g.out_neighbors(v) {
            if !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some(v);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Upper flowchart: reduce the extended graph to its fixpoint, then test
/// strong connectivity of the intrinsic graph.
pub fn decide_direct(b: &AllowableSet) -> Certificate {
    let traced = b.essentialize_traced();
    if traced.allowable.alphabet().is_empty() {
        return Certificate {
            verdict: Verdict::Empty,
            essential: traced.allowable,
            route: Route::Direct { steps: Vec::new() },
            evidence: Evidence::Empty {
                eliminated: traced.eliminated,
            },
        };
    }
    let graph = graph_of(&traced.allowable);
    let (limit, steps) = dc_fixpoint(&graph);
    let (verdict, evidence) = connectivity_evidence(&limit.intrinsic());
    Certificate {
        verdict,
        essential: traced.allowable,
        route: Route::Direct { steps },
        evidence,
    }
}

/// Lower flowchart: interleave SCC grouping with reduction; the verdict and
/// evidence live on the final grouped graph.
pub fn decide_grouped(b: &AllowableSet) -> Certificate {
    let traced = b.essentialize_traced();
    if traced.allowable.alphabet().is_empty() {
        return Certificate {
            verdict: Verdict::Empty,
            essential: traced.allowable,
            route: Route::Grouped {
                rounds: Vec::new(),
                membership: Vec::new(),
            },
            evidence: Evidence::Empty {
                eliminated: traced.eliminated,
            },
        };
    }
    let graph = graph_of(&traced.allowable);
    let (grouped, rounds) =
        grouped_fixpoint(&graph).expect("essentialized nonempty instances have vertices");
    let (verdict, evidence) = connectivity_evidence(&grouped.graph.intrinsic());
    Certificate {
        verdict,
        essential: traced.allowable,
        route: Route::Grouped {
            rounds,
            membership: grouped.membership,
        },
        evidence,
    }
}

/// Re-checks a certificate against an instance from scratch: the
/// essentialization must match, every reduction step must validate against
/// the graph it was applied to, and the evidence must hold in the final
/// graph. Malformed certificates simply fail.
pub fn check_certificate(b: &AllowableSet, certificate: &Certificate) -> bool {
    check_inner(b, certificate).is_some()
}

fn check_inner(b: &AllowableSet, certificate: &Certificate) -> Option<()> {
    let traced = b.essentialize_traced();
    if traced.allowable != certificate.essential {
        return None;
    }

    if let Evidence::Empty { eliminated } = &certificate.evidence {
        if certificate.verdict != Verdict::Empty {
            return None;
        }
        return check_elimination(b, eliminated);
    }
    if certificate.essential.alphabet().is_empty() {
        return None;
    }

    let final_intrinsic = match &certificate.route {
        Route::Direct { steps } => {
            let mut graph = graph_of(&certificate.essential);
            for step in steps {
                validate_step(&graph, step).ok()?;
                graph = graph.with_convergent(step.added);
            }
            graph.intrinsic()
        }
        Route::Grouped { rounds, membership } => {
            check_grouped_rounds(&certificate.essential, rounds, membership)?
        }
    };

    match &certificate.evidence {
        Evidence::StronglyConnected {
            root,
            out_parent,
            in_next,
        } => {
            if certificate.verdict != Verdict::CpcIrreducible {
                return None;
            }
            check_tree(&final_intrinsic, *root, out_parent, true)?;
            check_tree(&final_intrinsic, *root, in_next, false)?;
            Some(())
        }
        Evidence::Disconnected { from, to } => {
            if certificate.verdict != Verdict::NotCpcIrreducible {
                return None;
            }
            if !final_intrinsic.alphabet().contains(*from)
                || !final_intrinsic.alphabet().contains(*to)
            {
                return None;
            }
            if final_intrinsic.path(*from, *to).is_some() {
                return None;
            }
            Some(())
        }
        Evidence::Empty { .. } => None,
    }
}

/// Replays an elimination order: each removed symbol must have no usable
/// outgoing block at its removal point, and nothing may survive.
fn check_elimination(b: &AllowableSet, eliminated: &[String]) -> Option<()> {
    let n = b.alphabet().len();
    let mut alive = vec![true; n];
    for name in eliminated {
        let id = b.alphabet().id_of(name)?;
        if !alive[id.0] {
            return None;
        }
        let has_usable = b.blocks_with_parent(id).any(|blk: &OneBlock| {
            alive[blk.parent.0] && alive[blk.left.0] && alive[blk.right.0]
        });
        if has_usable {
            return None;
        }
        alive[id.0] = false;
    }
    if alive.iter().any(|&a| a) {
        return None;
    }
    Some(())
}

fn check_grouped_rounds(
    essential: &AllowableSet,
    rounds: &[GroupedRound],
    membership: &[usize],
) -> Option<IntrinsicGraph> {
    if rounds.is_empty() {
        return None;
    }
    let mut current = graph_of(essential);
    let mut composed: Vec<usize> = (0..current.vertex_count()).collect();
    let mut final_graph: Option<ExtGraph> = None;
    for round in rounds {
        let grouped = grouping(&current).ok()?;
        composed = composed.iter().map(|&v| grouped.membership[v]).collect();
        let mut partition = vec![Vec::new(); grouped.components.len()];
        for (orig, &comp) in composed.iter().enumerate() {
            partition[comp].push(SymbolId(orig));
        }
        if partition != round.partition {
            return None;
        }
        let mut graph = grouped.graph;
        for step in &round.steps {
            validate_step(&graph, step).ok()?;
            graph = graph.with_convergent(step.added);
        }
        final_graph = Some(graph.clone());
        current = graph;
    }
    if composed != membership {
        return None;
    }
    Some(final_graph?.intrinsic())
}

/// Validates one spanning tree of the evidence: every non-root vertex must
/// point along a real edge (outward from the root for `outward`, toward it
/// otherwise) and reach the root in at most |V| hops.
fn check_tree(
    g: &IntrinsicGraph,
    root: SymbolId,
    pointers: &[Option<SymbolId>],
    outward: bool,
) -> Option<()> {
    let n = g.vertex_count();
    if !g.alphabet().contains(root) || pointers.len() != n || pointers[root.0].is_some() {
        return None;
    }
    for v in 0..n {
        if v == root.0 {
            continue;
        }
        let next = pointers[v]?;
        if !g.alphabet().contains(next) {
            return None;
        }
        let (from, to) = if outward {
            (next, SymbolId(v))
        } else {
            (SymbolId(v), next)
        };
        if !g.edges().contains(&(from, to)) {
            return None;
        }
    }
    for v in 0..n {
        let mut cur = SymbolId(v);
        let mut hops = 0;
        while cur != root {
            cur = pointers[cur.0]?;
            hops += 1;
            if hops > n {
                return None;
            }
        }
    }
    Some(())
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        let names: Vec<&str> = self.essential.alphabet().names().collect();
        writeln!(f, "essential-alphabet: {}", names.join(" "))?;
        match &self.route {
            Route::Direct { steps } => {
                writeln!(f, "route: direct")?;
                writeln!(f, "steps: {}", steps.len())?;
                for step in steps {
                    writeln!(f, "  {}", step.render(self.essential.alphabet()))?;
                }
            }
            Route::Grouped { rounds, membership } => {
                writeln!(f, "route: grouped")?;
                writeln!(f, "rounds: {}", rounds.len())?;
                for (i, round) in rounds.iter().enumerate() {
                    let parts: Vec<String> = round
                        .partition
                        .iter()
                        .map(|comp| {
                            let members: Vec<&str> = comp
                                .iter()
                                .map(|&s| self.essential.alphabet().name(s))
                                .collect();
                            format!("{{{}}}", members.join(","))
                        })
                        .collect();
                    writeln!(f, "  round {}: partition {}", i, parts.join(" "))?;
                    let comp_alphabet = component_alphabet(round.partition.len());
                    for step in &round.steps {
                        writeln!(f, "    {}", step.render(&comp_alphabet))?;
                    }
                }
                let pairs: Vec<String> = membership
                    .iter()
                    .enumerate()
                    .map(|(s, &c)| {
                        format!("{}→C{}", self.essential.alphabet().name(SymbolId(s)), c)
                    })
                    .collect();
                writeln!(f, "membership: {}", pairs.join(" "))?;
            }
        }
        match &self.evidence {
            Evidence::StronglyConnected {
                root,
                out_parent,
                in_next,
            } => {
                let name = |s: SymbolId| self.evidence_name(s);
                writeln!(f, "evidence: strongly-connected")?;
                writeln!(f, "  root: {}", name(*root))?;
                let fmt_tree = |ptrs: &[Option<SymbolId>]| {
                    ptrs.iter()
                        .enumerate()
                        .filter_map(|(v, p)| {
                            p.map(|p| format!("{}←{}", name(SymbolId(v)), name(p)))
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                writeln!(f, "  out-tree: {}", fmt_tree(out_parent))?;
                writeln!(f, "  in-tree: {}", fmt_tree(in_next))?;
            }
            Evidence::Disconnected { from, to } => {
                writeln!(f, "evidence: disconnected")?;
                writeln!(
                    f,
                    "  no-path: {} to {}",
                    self.evidence_name(*from),
                    self.evidence_name(*to)
                )?;
            }
            Evidence::Empty { eliminated } => {
                writeln!(f, "evidence: empty")?;
                writeln!(f, "  eliminated: {}", eliminated.join(" "))?;
            }
        }
        Ok(())
    }
}

fn component_alphabet(count: usize) -> crate::tsft::Alphabet {
    crate::tsft::Alphabet::new((0..count).map(|i| format!("C{}", i)))
        .expect("component names are distinct")
}

impl Certificate {
    /// Evidence vertices live on the essential alphabet for the direct route
    /// and on the final components for the grouped one.
    fn evidence_name(&self, s: SymbolId) -> String {
        match &self.route {
            Route::Direct { .. } => self.essential.alphabet().name(s).to_string(),
            Route::Grouped { .. } => format!("C{}", s.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsft::tests_support::{six_symbol_example, three_symbol_example};
    use crate::tsft::Alphabet;

    fn sym(i: usize) -> SymbolId {
        SymbolId(i)
    }

    fn self_loop() -> AllowableSet {
        AllowableSet::new(
            Alphabet::new(["a"]).unwrap(),
            vec![OneBlock::new(sym(0), sym(0), sym(0))],
        )
        .unwrap()
    }

    #[test]
    fn direct_verdicts_on_worked_examples() {
        let cert = decide_direct(&six_symbol_example());
        assert_eq!(cert.verdict, Verdict::CpcIrreducible);
        let Route::Direct { steps } = &cert.route else {
            panic!("direct route expected")
        };
        assert_eq!(steps.len(), 2);

        let cert = decide_direct(&three_symbol_example());
        assert_eq!(cert.verdict, Verdict::NotCpcIrreducible);
        assert_eq!(
            cert.evidence,
            Evidence::Disconnected {
                from: sym(1),
                to: sym(0)
            }
        );

        assert_eq!(decide_direct(&self_loop()).verdict, Verdict::CpcIrreducible);
    }

    #[test]
    fn empty_instances_report_their_elimination_order() {
        let b = AllowableSet::new(
            Alphabet::new(["a", "b"]).unwrap(),
            vec![OneBlock::new(sym(0), sym(1), sym(1))],
        )
        .unwrap();
        let cert = decide_direct(&b);
        assert_eq!(cert.verdict, Verdict::Empty);
        assert_eq!(
            cert.evidence,
            Evidence::Empty {
                eliminated: vec!["b".to_string(), "a".to_string()]
            }
        );
        assert!(check_certificate(&b, &cert));
        assert_eq!(decide_grouped(&b).verdict, Verdict::Empty);
    }

    #[test]
    fn grouped_route_agrees_on_worked_examples() {
        for b in [six_symbol_example(), three_symbol_example(), self_loop()] {
            assert_eq!(decide_grouped(&b).verdict, decide_direct(&b).verdict);
        }
    }

    #[test]
    fn grouped_certificate_shape_for_six_symbol_example() {
        let cert = decide_grouped(&six_symbol_example());
        assert_eq!(cert.verdict, Verdict::CpcIrreducible);
        let Route::Grouped { rounds, membership } = &cert.route else {
            panic!("grouped route expected")
        };
        assert_eq!(rounds.len(), 1);
        assert_eq!(
            rounds[0].partition,
            vec![
                vec![sym(0), sym(1), sym(2)],
                vec![sym(3), sym(4)],
                vec![sym(5)],
            ]
        );
        assert_eq!(membership, &vec![0, 0, 0, 1, 1, 2]);
    }

    #[test]
    fn certificates_check_against_their_instances() {
        for b in [six_symbol_example(), three_symbol_example(), self_loop()] {
            assert!(check_certificate(&b, &decide_direct(&b)));
            assert!(check_certificate(&b, &decide_grouped(&b)));
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let b = six_symbol_example();
        let cert = decide_direct(&b);

        let mut dropped = cert.clone();
        if let Route::Direct { steps } = &mut dropped.route {
            steps[0].path.remove(1);
        }
        assert!(!check_certificate(&b, &dropped));

        let mut flipped = cert.clone();
        flipped.verdict = Verdict::NotCpcIrreducible;
        assert!(!check_certificate(&b, &flipped));

        // Certificate of one instance against another: vertex mismatch.
        assert!(!check_certificate(&three_symbol_example(), &cert));
    }

    #[test]
    fn certificate_rendering_is_stable() {
        let text = decide_direct(&six_symbol_example()).to_string();
        assert!(text.contains("verdict: CPC-IRREDUCIBLE"));
        assert!(text.contains("add (0,2) from divergent (0,1,2) via path 1→2"));
        assert!(text.contains("add (5,2) from divergent (5,1,2) via path 1→2"));
        let again = decide_direct(&six_symbol_example()).to_string();
        assert_eq!(text, again);
    }
}
