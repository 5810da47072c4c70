//! Independent fixed-point decision for CPC-connectedness.
//!
//! Symbol α is CPC-connected to β when some locally allowable pattern of
//! depth at least one roots at α and carries β on every node of its CPC
//! boundary. For a fixed target β this is the least fixed point of
//!
//! ```text
//! T[α] = ∃ (α; δ₁, δ₂) ∈ B :  U[δ₁] ∧ U[δ₂],        U[δ] = (δ = β) ∨ T[δ]
//! ```
//!
//! iterated from all-false; each round corresponds to one more level of
//! witness depth, so the iteration settles within |A| rounds. The shift is
//! CPC-irreducible exactly when every ordered pair of symbols is connected,
//! which makes this module a full decision procedure independent of the
//! graph-reduction route. A depth-bounded exhaustive pattern search backs
//! the fixed point itself.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tsft::{AllowableSet, OneBlock, Pattern, SymbolId, Verdict};
use crate::words::{Branch, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("symbol id {0} is not in the alphabet")]
    UnknownSymbol(usize),
    #[error("allowable set is not essential; essentialize before querying")]
    NotEssential,
    #[error("allowable set is empty")]
    EmptyAllowableSet,
    #[error("search depth {depth} exceeds bound {bound}")]
    DepthOverBound { depth: usize, bound: usize },
}

/// Least-fixed-point table for one target symbol: which symbols root a
/// depth-≥1 pattern whose boundary is constantly the target.
#[derive(Clone, Debug)]
pub struct ConnTable {
    target: SymbolId,
    fired: Vec<bool>,
    /// Per symbol: the justifying block and the round it first fired in.
    justification: Vec<Option<(OneBlock, usize)>>,
    rounds: usize,
}

impl ConnTable {
    /// Runs the iteration for one target. Rounds are Jacobi-style: a block
    /// justifies a symbol in round r only through children settled before
    /// round r, so the round number bounds the minimal witness depth.
    pub fn compute(b: &AllowableSet, target: SymbolId) -> Result<Self, OracleError> {
        check_essential(b)?;
        if !b.alphabet().contains(target) {
            return Err(OracleError::UnknownSymbol(target.0));
        }
        let n = b.alphabet().len();
        let mut fired = vec![false; n];
        let mut justification: Vec<Option<(OneBlock, usize)>> = vec![None; n];
        let mut rounds = 0;
        loop {
            let settled = |s: SymbolId| s == target || fired[s.0];
            let mut newly = Vec::new();
            for alpha in b.alphabet().ids() {
                if fired[alpha.0] {
                    continue;
                }
                if let Some(block) = b
                    .blocks_with_parent(alpha)
                    .find(|blk| settled(blk.left) && settled(blk.right))
                {
                    newly.push((alpha, *block));
                }
            }
            if newly.is_empty() {
                return Ok(ConnTable {
                    target,
                    fired,
                    justification,
                    rounds,
                });
            }
            rounds += 1;
            for (alpha, block) in newly {
                fired[alpha.0] = true;
                justification[alpha.0] = Some((block, rounds));
            }
        }
    }

    pub fn target(&self) -> SymbolId {
        self.target
    }

    pub fn connected_from(&self, alpha: SymbolId) -> bool {
        self.fired[alpha.0]
    }

    pub fn rounds_fired(&self) -> usize {
        self.rounds
    }

    /// Replays the justifications into a minimal-depth witness pattern:
    /// root α, all boundary nodes labeled with the target, every two-level
    /// subtree allowable.
    pub fn witness(&self, alpha: SymbolId) -> Option<Pattern> {
        if !self.fired[alpha.0] {
            return None;
        }
        let mut labels = BTreeMap::new();
        labels.insert(Word::empty(), alpha);
        self.expand(&Word::empty(), alpha, &mut labels);
        Some(Pattern::new(labels).expect("witness supports are grown prefix-closed"))
    }

    fn expand(&self, node: &Word, symbol: SymbolId, labels: &mut BTreeMap<Word, SymbolId>) {
        let (block, _) = self.justification[symbol.0]
            .expect("expanded symbols fired during the iteration");
        for branch in Branch::BOTH {
            let child_sym = block.child(branch);
            let child_node = node.child(branch);
            labels.insert(child_node.clone(), child_sym);
            if child_sym != self.target {
                self.expand(&child_node, child_sym, labels);
            }
        }
    }
}

fn check_essential(b: &AllowableSet) -> Result<(), OracleError> {
    if b.alphabet().is_empty() {
        return Err(OracleError::EmptyAllowableSet);
    }
    if !b.is_essential() {
        return Err(OracleError::NotEssential);
    }
    Ok(())
}

/// True iff `alpha` is CPC-connected to `beta` in the shift of the essential
/// allowable set `b`.
pub fn cpc_connected(
    b: &AllowableSet,
    alpha: SymbolId,
    beta: SymbolId,
) -> Result<bool, OracleError> {
    if !b.alphabet().contains(alpha) {
        return Err(OracleError::UnknownSymbol(alpha.0));
    }
    Ok(ConnTable::compute(b, beta)?.connected_from(alpha))
}

/// A minimal-depth connectedness witness, or `None` when the pair is not
/// connected.
pub fn cpc_witness(
    b: &AllowableSet,
    alpha: SymbolId,
    beta: SymbolId,
) -> Result<Option<Pattern>, OracleError> {
    if !b.alphabet().contains(alpha) {
        return Err(OracleError::UnknownSymbol(alpha.0));
    }
    Ok(ConnTable::compute(b, beta)?.witness(alpha))
}

/// Full oracle decision: essentialize, then demand connectedness of every
/// ordered pair over the essential alphabet.
pub fn decide_oracle(b: &AllowableSet) -> Verdict {
    let essential = b.essentialize();
    if essential.alphabet().is_empty() {
        return Verdict::Empty;
    }
    for beta in essential.alphabet().ids() {
        let table = ConnTable::compute(&essential, beta)
            .expect("essentialized sets pass the essentiality check");
        if !essential.alphabet().ids().all(|alpha| table.connected_from(alpha)) {
            return Verdict::NotCpcIrreducible;
        }
    }
    Verdict::CpcIrreducible
}

/// Outcome of the depth-bounded exhaustive search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BruteResult {
    Connected,
    Unknown,
}

/// Largest depth accepted by [`brute_connected`].
pub const MAX_BRUTE_DEPTH: usize = 6;

/// Exhaustive search for a connectedness witness whose boundary lies within
/// `depth` levels. `Connected` implies [`cpc_connected`]; conversely a
/// connected pair is found whenever `depth ≥ |A|`, since fixed-point rounds
/// bound the minimal witness depth.
pub fn brute_connected(
    b: &AllowableSet,
    alpha: SymbolId,
    beta: SymbolId,
    depth: usize,
) -> Result<BruteResult, OracleError> {
    if depth > MAX_BRUTE_DEPTH {
        return Err(OracleError::DepthOverBound {
            depth,
            bound: MAX_BRUTE_DEPTH,
        });
    }
    for id in [alpha, beta] {
        if !b.alphabet().contains(id) {
            return Err(OracleError::UnknownSymbol(id.0));
        }
    }
    if depth == 0 {
        return Ok(BruteResult::Unknown);
    }
    let mut memo: BTreeMap<(SymbolId, usize), bool> = BTreeMap::new();
    let found = b.blocks_with_parent(alpha).any(|blk| {
        subtree_all_beta(b, blk.left, beta, depth - 1, &mut memo)
            && subtree_all_beta(b, blk.right, beta, depth - 1, &mut memo)
    });
    Ok(if found {
        BruteResult::Connected
    } else {
        BruteResult::Unknown
    })
}

/// Can a pattern rooted at `symbol` close off with an all-`beta` boundary
/// within `budget` further levels? A node may stop exactly when it carries
/// `beta`.
fn subtree_all_beta(
    b: &AllowableSet,
    symbol: SymbolId,
    beta: SymbolId,
    budget: usize,
    memo: &mut BTreeMap<(SymbolId, usize), bool>,
) -> bool {
    if symbol == beta {
        return true;
    }
    if budget == 0 {
        return false;
    }
    if let Some(&known) = memo.get(&(symbol, budget)) {
        return known;
    }
    let result = b.blocks_with_parent(symbol).any(|blk| {
        subtree_all_beta(b, blk.left, beta, budget - 1, memo)
            && subtree_all_beta(b, blk.right, beta, budget - 1, memo)
    });
    memo.insert((symbol, budget), result);
    result
}
