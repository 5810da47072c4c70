//! Alphabets, one-blocks, allowable sets, and finite labeled patterns.
//!
//! A 1-step tree shift of finite type is presented by an [`AllowableSet`]:
//! the one-blocks `(parent; left, right)` that may appear anywhere in a
//! labeled tree. Essentialization trims symbols that cannot root any
//! configuration, after which every locally allowable finite pattern extends
//! to a full labeled tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::words::{boundary, is_cpc, Branch, TreeRegion, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TsftError {
    #[error("duplicate symbol '{0}'")]
    DuplicateSymbol(String),
    #[error("symbol name '{0}' is empty or contains whitespace")]
    InvalidSymbolName(String),
    #[error("symbol id {0} is not in the alphabet")]
    UnknownSymbol(usize),
    #[error("pattern support is not prefix-closed")]
    SupportNotPrefixClosed,
    #[error("allowable set is not essential")]
    NotEssential,
    #[error("allowable set is empty")]
    EmptyAllowableSet,
    #[error("pattern is not locally allowable")]
    NotAllowable,
    #[error("block ({0}) is not in the allowable set")]
    BlockNotPresent(String),
    #[error("block ({0}) is convergent; replacement needs distinct children")]
    BlockNotDivergent(String),
    #[error("block depth {depth} exceeds bound {bound}")]
    DepthOverBound { depth: usize, bound: usize },
}

/// Index of a symbol within an [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymbolId(pub usize);

/// An ordered finite set of labels. Declaration order fixes the canonical
/// order of every symbol iteration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, TsftError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for name in &symbols {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(TsftError::InvalidSymbolName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(TsftError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0]
    }

    pub fn id_of(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == name).map(SymbolId)
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len()).map(SymbolId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn contains(&self, id: SymbolId) -> bool {
        id.0 < self.symbols.len()
    }
}

/// A labeling of the two-level subtree: parent at the root, one label per
/// child.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OneBlock {
    pub parent: SymbolId,
    pub left: SymbolId,
    pub right: SymbolId,
}

impl OneBlock {
    pub fn new(parent: SymbolId, left: SymbolId, right: SymbolId) -> Self {
        OneBlock {
            parent,
            left,
            right,
        }
    }

    pub fn is_convergent(&self) -> bool {
        self.left == self.right
    }

    pub fn child(&self, branch: Branch) -> SymbolId {
        match branch {
            Branch::Left => self.left,
            Branch::Right => self.right,
        }
    }
}

/// Which child a divergent block keeps when it is replaced by a convergent
/// one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Keep {
    Left,
    Right,
}

/// Outcome of a decision procedure.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Verdict {
    CpcIrreducible,
    NotCpcIrreducible,
    /// Essentialization eliminated every symbol; the shift has no point.
    Empty,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::CpcIrreducible => 0,
            Verdict::NotCpcIrreducible => 1,
            Verdict::Empty => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Verdict::CpcIrreducible => "CPC-IRREDUCIBLE",
            Verdict::NotCpcIrreducible => "NOT-CPC-IRREDUCIBLE",
            Verdict::Empty => "EMPTY",
        };
        write!(f, "{}", text)
    }
}

/// An alphabet together with its set of allowable one-blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AllowableSet {
    alphabet: Alphabet,
    blocks: BTreeSet<OneBlock>,
}

impl AllowableSet {
    pub fn new(
        alphabet: Alphabet,
        blocks: impl IntoIterator<Item = OneBlock>,
    ) -> Result<Self, TsftError> {
        let blocks: BTreeSet<OneBlock> = blocks.into_iter().collect();
        for block in &blocks {
            for id in [block.parent, block.left, block.right] {
                if !alphabet.contains(id) {
                    return Err(TsftError::UnknownSymbol(id.0));
                }
            }
        }
        Ok(AllowableSet { alphabet, blocks })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn blocks(&self) -> &BTreeSet<OneBlock> {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, block: &OneBlock) -> bool {
        self.blocks.contains(block)
    }

    /// Blocks with the given parent, in canonical (parent, left, right)
    /// order.
    pub fn blocks_with_parent(&self, parent: SymbolId) -> impl Iterator<Item = &OneBlock> {
        let lo = OneBlock::new(parent, SymbolId(0), SymbolId(0));
        let hi = OneBlock::new(parent, SymbolId(usize::MAX), SymbolId(usize::MAX));
        self.blocks.range(lo..=hi)
    }

    /// Every symbol has at least one outgoing block.
    pub fn is_essential(&self) -> bool {
        self.alphabet
            .ids()
            .all(|s| self.blocks_with_parent(s).next().is_some())
    }

    /// Iteratively removes symbols with no outgoing block and every block
    /// mentioning them, until stable. May empty the alphabet.
    pub fn essentialize(&self) -> AllowableSet {
        self.essentialize_traced().allowable
    }

    pub fn essentialize_traced(&self) -> Essentialization {
        let n = self.alphabet.len();
        let mut alive = vec![true; n];
        let mut eliminated = Vec::new();
        loop {
            let usable = |b: &OneBlock| alive[b.parent.0] && alive[b.left.0] && alive[b.right.0];
            let dying: Vec<usize> = (0..n)
                .filter(|&s| {
                    alive[s]
                        && !self
                            .blocks
                            .iter()
                            .any(|b| b.parent.0 == s && usable(b))
                })
                .collect();
            if dying.is_empty() {
                break;
            }
            for s in dying {
                alive[s] = false;
                eliminated.push(self.alphabet.symbols[s].clone());
            }
        }
        let survivors: Vec<String> = (0..n)
            .filter(|&s| alive[s])
            .map(|s| self.alphabet.symbols[s].clone())
            .collect();
        let mut remap = vec![usize::MAX; n];
        let mut next = 0usize;
        for (s, &keep) in alive.iter().enumerate() {
            if keep {
                remap[s] = next;
                next += 1;
            }
        }
        let alphabet = Alphabet::new(survivors).expect("surviving symbols stay distinct");
        let blocks: BTreeSet<OneBlock> = self
            .blocks
            .iter()
            .filter(|b| alive[b.parent.0] && alive[b.left.0] && alive[b.right.0])
            .map(|b| {
                OneBlock::new(
                    SymbolId(remap[b.parent.0]),
                    SymbolId(remap[b.left.0]),
                    SymbolId(remap[b.right.0]),
                )
            })
            .collect();
        Essentialization {
            allowable: AllowableSet { alphabet, blocks },
            eliminated,
        }
    }

    /// The complement of the allowable set inside all |A|³ one-blocks.
    pub fn forbidden(&self) -> BTreeSet<OneBlock> {
        let mut out = BTreeSet::new();
        for p in self.alphabet.ids() {
            for l in self.alphabet.ids() {
                for r in self.alphabet.ids() {
                    let block = OneBlock::new(p, l, r);
                    if !self.blocks.contains(&block) {
                        out.insert(block);
                    }
                }
            }
        }
        out
    }
}

/// Result of essentialization: the trimmed allowable set and the symbols
/// removed, in elimination order.
#[derive(Clone, Debug)]
pub struct Essentialization {
    pub allowable: AllowableSet,
    pub eliminated: Vec<String>,
}

/// Builds the allowable set complementary to a forbidden set.
pub fn from_forbidden(
    alphabet: Alphabet,
    forbidden: &BTreeSet<OneBlock>,
) -> Result<AllowableSet, TsftError> {
    for block in forbidden {
        for id in [block.parent, block.left, block.right] {
            if !alphabet.contains(id) {
                return Err(TsftError::UnknownSymbol(id.0));
            }
        }
    }
    let mut blocks = BTreeSet::new();
    for p in alphabet.ids() {
        for l in alphabet.ids() {
            for r in alphabet.ids() {
                let block = OneBlock::new(p, l, r);
                if !forbidden.contains(&block) {
                    blocks.insert(block);
                }
            }
        }
    }
    Ok(AllowableSet { alphabet, blocks })
}

/// Removes the divergent block `d` and inserts the convergent block that
/// repeats the kept child.
pub fn replace_block(
    b: &AllowableSet,
    d: &OneBlock,
    keep: Keep,
) -> Result<AllowableSet, TsftError> {
    let describe = |blk: &OneBlock| {
        format!(
            "{};{},{}",
            b.alphabet.name(blk.parent),
            b.alphabet.name(blk.left),
            b.alphabet.name(blk.right)
        )
    };
    if !b.blocks.contains(d) {
        return Err(TsftError::BlockNotPresent(describe(d)));
    }
    if d.is_convergent() {
        return Err(TsftError::BlockNotDivergent(describe(d)));
    }
    let kept = match keep {
        Keep::Left => d.left,
        Keep::Right => d.right,
    };
    let mut blocks = b.blocks.clone();
    blocks.remove(d);
    blocks.insert(OneBlock::new(d.parent, kept, kept));
    Ok(AllowableSet {
        alphabet: b.alphabet.clone(),
        blocks,
    })
}

/// A labeling of a finite prefix-closed set of nodes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Pattern {
    labels: BTreeMap<Word, SymbolId>,
}

impl Pattern {
    pub fn new(labels: BTreeMap<Word, SymbolId>) -> Result<Self, TsftError> {
        for node in labels.keys() {
            if let Some(parent) = node.parent() {
                if !labels.contains_key(&parent) {
                    return Err(TsftError::SupportNotPrefixClosed);
                }
            }
        }
        Ok(Pattern { labels })
    }

    /// The one-node pattern labeling the root.
    pub fn singleton(symbol: SymbolId) -> Self {
        let mut labels = BTreeMap::new();
        labels.insert(Word::empty(), symbol);
        Pattern { labels }
    }

    pub fn labels(&self) -> &BTreeMap<Word, SymbolId> {
        &self.labels
    }

    pub fn label(&self, node: &Word) -> Option<SymbolId> {
        self.labels.get(node).copied()
    }

    pub fn support(&self) -> TreeRegion {
        TreeRegion::new(self.labels.keys().cloned().collect())
            .expect("pattern support is prefix-closed by construction")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.labels.keys().map(Word::len).max().unwrap_or(0)
    }

    /// True iff `self` agrees with `seed` on all of `seed`'s support.
    pub fn restricts_to(&self, seed: &Pattern) -> bool {
        seed.labels
            .iter()
            .all(|(node, &sym)| self.label(node) == Some(sym))
    }

    /// One `node-word label` line per node in canonical order, with symbol
    /// names resolved through the alphabet.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for (node, &sym) in &self.labels {
            out.push_str(&format!("{} {}\n", node, alphabet.name(sym)));
        }
        out
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (node, sym) in &self.labels {
            if !first {
                writeln!(f)?;
            }
            write!(f, "{} {}", node, sym.0)?;
            first = false;
        }
        Ok(())
    }
}

/// A pattern is locally allowable when its boundary is a CPC and every fully
/// present two-level subtree inside it carries an allowable block.
pub fn pattern_is_locally_allowable(u: &Pattern, b: &AllowableSet) -> bool {
    if u.labels().values().any(|&s| !b.alphabet().contains(s)) {
        return false;
    }
    let support = u.support();
    if !is_cpc(&boundary(&support)) {
        return false;
    }
    for (node, &sym) in u.labels() {
        let left = node.child(Branch::Left);
        let right = node.child(Branch::Right);
        match (u.label(&left), u.label(&right)) {
            (Some(l), Some(r)) => {
                if !b.contains(&OneBlock::new(sym, l, r)) {
                    return false;
                }
            }
            (None, None) => {}
            // One-sided children already fail the boundary CPC check.
            _ => return false,
        }
    }
    true
}

/// Extends a locally allowable pattern by `levels` rounds, growing every
/// boundary node by the first allowable block (canonical order) below its
/// label. The result restricts to `u` and stays locally allowable.
pub fn extend_pattern(
    u: &Pattern,
    b: &AllowableSet,
    levels: usize,
) -> Result<Pattern, TsftError> {
    if b.alphabet().is_empty() || b.is_empty() {
        return Err(TsftError::EmptyAllowableSet);
    }
    if !b.is_essential() {
        return Err(TsftError::NotEssential);
    }
    if !pattern_is_locally_allowable(u, b) {
        return Err(TsftError::NotAllowable);
    }
    let mut labels = u.labels().clone();
    for _ in 0..levels {
        let support = TreeRegion::new(labels.keys().cloned().collect())
            .expect("extension keeps the support prefix-closed");
        for node in boundary(&support) {
            let sym = labels[&node];
            let block = b
                .blocks_with_parent(sym)
                .next()
                .expect("essential sets have an outgoing block for every symbol");
            labels.insert(node.child(Branch::Left), block.left);
            labels.insert(node.child(Branch::Right), block.right);
        }
    }
    Ok(Pattern { labels })
}

/// Largest depth accepted by [`enumerate_nblocks`].
pub const MAX_NBLOCK_DEPTH: usize = 4;

/// All labelings of the full depth-`n` subtree whose two-level subtrees are
/// all allowable. The set is computed over the essentialized alphabet so
/// that every returned block extends to a configuration.
pub fn enumerate_nblocks(b: &AllowableSet, n: usize) -> Result<Vec<Pattern>, TsftError> {
    if n > MAX_NBLOCK_DEPTH {
        return Err(TsftError::DepthOverBound {
            depth: n,
            bound: MAX_NBLOCK_DEPTH,
        });
    }
    let essential = b.essentialize();
    let back: Vec<SymbolId> = essential
        .alphabet()
        .names()
        .map(|name| b.alphabet().id_of(name).expect("essential symbols come from b"))
        .collect();

    let mut partial: Vec<BTreeMap<Word, SymbolId>> = essential
        .alphabet()
        .ids()
        .map(|s| {
            let mut m = BTreeMap::new();
            m.insert(Word::empty(), s);
            m
        })
        .collect();
    for level in 0..n {
        let frontier = words_of_length(level);
        let mut grown = Vec::new();
        for labels in &partial {
            expand_frontier(labels, &frontier, 0, &essential, &mut grown);
        }
        partial = grown;
    }

    let mut out: Vec<Pattern> = partial
        .into_iter()
        .map(|labels| Pattern {
            labels: labels
                .into_iter()
                .map(|(w, s)| (w, back[s.0]))
                .collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

fn words_of_length(len: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for _ in 0..len {
        words = words
            .iter()
            .flat_map(|w| Branch::BOTH.iter().map(move |&b| w.child(b)))
            .collect();
    }
    words
}

fn expand_frontier(
    labels: &BTreeMap<Word, SymbolId>,
    frontier: &[Word],
    idx: usize,
    b: &AllowableSet,
    out: &mut Vec<BTreeMap<Word, SymbolId>>,
) {
    if idx == frontier.len() {
        out.push(labels.clone());
        return;
    }
    let node = &frontier[idx];
    let sym = labels[node];
    for block in b.blocks_with_parent(sym) {
        let mut next = labels.clone();
        next.insert(node.child(Branch::Left), block.left);
        next.insert(node.child(Branch::Right), block.right);
        expand_frontier(&next, frontier, idx + 1, b, out);
    }
}

/// Worked instances shared by the unit tests of several modules.
#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    fn blk(p: usize, l: usize, r: usize) -> OneBlock {
        OneBlock::new(SymbolId(p), SymbolId(l), SymbolId(r))
    }

    /// Nine allowable blocks over {0,..,5} whose reduction demonstrates a
    /// CPC-irreducible shift.
    pub fn six_symbol_example() -> AllowableSet {
        AllowableSet::new(
            Alphabet::new(["0", "1", "2", "3", "4", "5"]).unwrap(),
            vec![
                blk(0, 1, 1),
                blk(0, 1, 2),
                blk(1, 2, 2),
                blk(2, 0, 0),
                blk(2, 4, 4),
                blk(3, 4, 4),
                blk(3, 5, 5),
                blk(4, 3, 3),
                blk(5, 1, 2),
            ],
        )
        .unwrap()
    }

    /// Four blocks over {0,1,2}: reduction adds one edge and the shift stays
    /// reducible.
    pub fn three_symbol_example() -> AllowableSet {
        AllowableSet::new(
            Alphabet::new(["0", "1", "2"]).unwrap(),
            vec![blk(0, 1, 1), blk(1, 2, 2), blk(2, 1, 1), blk(0, 1, 2)],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    fn blk(p: usize, l: usize, r: usize) -> OneBlock {
        OneBlock::new(SymbolId(p), SymbolId(l), SymbolId(r))
    }

    fn six_symbol_example() -> AllowableSet {
        tests_support::six_symbol_example()
    }

    #[test]
    fn from_forbidden_complements() {
        let a1 = alpha(&["a"]);
        let b = from_forbidden(a1.clone(), &BTreeSet::new()).unwrap();
        assert_eq!(b.blocks().len(), 1);
        assert!(b.contains(&blk(0, 0, 0)));

        let mut all = BTreeSet::new();
        all.insert(blk(0, 0, 0));
        let empty = from_forbidden(a1, &all).unwrap();
        assert!(empty.is_empty());

        let a2 = alpha(&["0", "1"]);
        let forbidden: BTreeSet<OneBlock> = [
            blk(0, 0, 0),
            blk(0, 0, 1),
            blk(0, 1, 0),
            blk(1, 0, 0),
            blk(1, 0, 1),
            blk(1, 1, 0),
        ]
        .into_iter()
        .collect();
        let b2 = from_forbidden(a2, &forbidden).unwrap();
        assert_eq!(b2.len(), 8 - 6);
        assert_eq!(b2.len() + b2.forbidden().len(), 8);
    }

    #[test]
    fn essentialize_keeps_self_loop() {
        let b = AllowableSet::new(alpha(&["a"]), vec![blk(0, 0, 0)]).unwrap();
        let e = b.essentialize();
        assert_eq!(e, b);
    }

    #[test]
    fn essentialize_cascades_to_empty() {
        let b = AllowableSet::new(alpha(&["a", "b"]), vec![blk(0, 1, 1)]).unwrap();
        let traced = b.essentialize_traced();
        assert!(traced.allowable.alphabet().is_empty());
        assert_eq!(traced.eliminated, vec!["b".to_string(), "a".to_string()]);
    }

    #[test]
    fn essentialize_is_idempotent_on_example() {
        let b = six_symbol_example();
        assert!(b.is_essential());
        assert_eq!(b.essentialize(), b);
    }

    #[test]
    fn local_allowability() {
        let b = AllowableSet::new(alpha(&["a", "b"]), vec![blk(0, 1, 1), blk(1, 0, 0)]).unwrap();
        assert!(pattern_is_locally_allowable(&Pattern::singleton(SymbolId(0)), &b));

        let mut good = BTreeMap::new();
        good.insert(Word::empty(), SymbolId(0));
        good.insert("1".parse().unwrap(), SymbolId(1));
        good.insert("2".parse().unwrap(), SymbolId(1));
        assert!(pattern_is_locally_allowable(&Pattern::new(good).unwrap(), &b));

        let mut bad = BTreeMap::new();
        bad.insert(Word::empty(), SymbolId(0));
        bad.insert("1".parse().unwrap(), SymbolId(0));
        bad.insert("2".parse().unwrap(), SymbolId(0));
        assert!(!pattern_is_locally_allowable(&Pattern::new(bad).unwrap(), &b));
    }

    #[test]
    fn extension_uses_first_canonical_block() {
        let b = six_symbol_example();
        let seed = Pattern::singleton(SymbolId(3));
        let extended = extend_pattern(&seed, &b, 2).unwrap();
        let expect: Vec<(&str, usize)> = vec![
            ("", 3),
            ("1", 4),
            ("2", 4),
            ("11", 3),
            ("12", 3),
            ("21", 3),
            ("22", 3),
        ];
        for (node, sym) in expect {
            assert_eq!(
                extended.label(&node.parse().unwrap()),
                Some(SymbolId(sym)),
                "node {}",
                node
            );
        }
        assert_eq!(extended.len(), 7);
        assert!(pattern_is_locally_allowable(&extended, &b));
        assert!(extended.restricts_to(&seed));
    }

    #[test]
    fn extension_identity_and_tower() {
        let b = six_symbol_example();
        let seed = Pattern::singleton(SymbolId(0));
        assert_eq!(extend_pattern(&seed, &b, 0).unwrap(), seed);
        let two = extend_pattern(&seed, &b, 2).unwrap();
        let three = extend_pattern(&seed, &b, 3).unwrap();
        assert!(three.restricts_to(&two));
    }

    #[test]
    fn extension_rejects_bad_inputs() {
        let b = AllowableSet::new(alpha(&["a", "b"]), vec![blk(0, 1, 1)]).unwrap();
        let seed = Pattern::singleton(SymbolId(0));
        assert_eq!(
            extend_pattern(&seed, &b, 1),
            Err(TsftError::NotEssential)
        );
        let loops = AllowableSet::new(alpha(&["a", "b"]), vec![blk(0, 0, 0), blk(1, 1, 1)]).unwrap();
        let mut bad = BTreeMap::new();
        bad.insert(Word::empty(), SymbolId(0));
        bad.insert("1".parse().unwrap(), SymbolId(1));
        bad.insert("2".parse().unwrap(), SymbolId(1));
        assert_eq!(
            extend_pattern(&Pattern::new(bad).unwrap(), &loops, 1),
            Err(TsftError::NotAllowable)
        );
    }

    #[test]
    fn replace_block_examples() {
        let b = AllowableSet::new(
            alpha(&["0", "1", "2"]),
            vec![blk(0, 1, 2), blk(1, 1, 1), blk(2, 2, 2)],
        )
        .unwrap();
        let kept_right = replace_block(&b, &blk(0, 1, 2), Keep::Right).unwrap();
        assert!(!kept_right.contains(&blk(0, 1, 2)));
        assert!(kept_right.contains(&blk(0, 2, 2)));

        let kept_left = replace_block(&b, &blk(0, 1, 2), Keep::Left).unwrap();
        assert!(kept_left.contains(&blk(0, 1, 1)));

        assert!(matches!(
            replace_block(&b, &blk(0, 2, 1), Keep::Left),
            Err(TsftError::BlockNotPresent(_))
        ));
        assert!(matches!(
            replace_block(&b, &blk(1, 1, 1), Keep::Left),
            Err(TsftError::BlockNotDivergent(_))
        ));
    }

    #[test]
    fn nblock_enumeration() {
        let single = AllowableSet::new(alpha(&["a"]), vec![blk(0, 0, 0)]).unwrap();
        assert_eq!(enumerate_nblocks(&single, 2).unwrap().len(), 1);

        let fig4 = AllowableSet::new(
            alpha(&["0", "1", "2"]),
            vec![blk(0, 1, 1), blk(1, 2, 2), blk(2, 1, 1), blk(0, 1, 2)],
        )
        .unwrap();
        assert_eq!(enumerate_nblocks(&fig4, 0).unwrap().len(), 3);
        assert_eq!(enumerate_nblocks(&fig4, 1).unwrap().len(), 4);
        assert!(matches!(
            enumerate_nblocks(&fig4, MAX_NBLOCK_DEPTH + 1),
            Err(TsftError::DepthOverBound { .. })
        ));
    }

    #[test]
    fn nblocks_avoid_forbidden_blocks() {
        let b = six_symbol_example();
        for pattern in enumerate_nblocks(&b, 2).unwrap() {
            assert!(pattern_is_locally_allowable(&pattern, &b));
        }
    }
}
