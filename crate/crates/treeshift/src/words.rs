//! Finite binary words, prefix codes, and complete prefix codes (CPCs).
//!
//! Words are nodes of the infinite dyadic tree: the empty word is the root
//! and appending a branch direction steps to a child. A complete prefix code
//! is a finite antichain that every sufficiently long word passes through
//! exactly once; such codes are the cross-sections along which tree-shift
//! patterns are glued.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("invalid word character {0:?} (expected '1' or '2')")]
    InvalidChar(char),
    #[error("set is not prefix-free")]
    NotPrefixFree,
    #[error("prefix code is not complete")]
    NotComplete,
    #[error("set is not prefix-closed")]
    NotPrefixClosed,
    #[error("node '{node}' lies outside the region of the code")]
    NodeOutsideRegion { node: String },
    #[error("enumeration depth {depth} exceeds bound {bound}")]
    DepthOverBound { depth: usize, bound: usize },
}

/// One of the two branch directions below a node of the dyadic tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Left, Branch::Right];

    fn as_char(self) -> char {
        match self {
            Branch::Left => '1',
            Branch::Right => '2',
        }
    }
}

/// A node of the dyadic tree: a finite word over the two branch directions.
///
/// Words order by length first, then lexicographically; every set iteration
/// and every serialized listing in the crate follows this order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Branch>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_branches(branches: impl IntoIterator<Item = Branch>) -> Self {
        Word(branches.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.0
    }

    pub fn child(&self, branch: Branch) -> Word {
        let mut next = self.0.clone();
        next.push(branch);
        Word(next)
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn concat(&self, tail: &Word) -> Word {
        let mut joined = self.0.clone();
        joined.extend_from_slice(&tail.0);
        Word(joined)
    }

    /// True iff `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The remainder `h` with `self = prefix · h`, when `prefix` prefixes `self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        if prefix.is_prefix_of(self) {
            Some(Word(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }

    /// All prefixes of the word, from the empty word up to the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |k| Word(self.0[..k].to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "\"ε\"")
        } else {
            write!(f, "\"{}\"", self)
        }
    }
}

impl FromStr for Word {
    type Err = WordsError;

    fn from_str(s: &str) -> Result<Self, WordsError> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(Branch::Left),
                '2' => Ok(Branch::Right),
                other => Err(WordsError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// True iff `g` is a (not necessarily proper) prefix of `h`.
pub fn is_prefix(g: &Word, h: &Word) -> bool {
    g.is_prefix_of(h)
}

/// True iff no word of the set is a proper prefix of another.
pub fn is_prefix_code(words: &BTreeSet<Word>) -> bool {
    for g in words {
        for h in words {
            if g != h && g.is_prefix_of(h) {
                return false;
            }
        }
    }
    true
}

/// Definitional completeness check: the set is a prefix code and every word
/// of the maximal member length extends through it. The empty set is not a
/// CPC; `{ε}` is.
///
/// Independent of [`kraft_sum`]; the two must agree on prefix-free sets.
pub fn is_cpc(words: &BTreeSet<Word>) -> bool {
    if words.is_empty() {
        return false;
    }
    if !is_prefix_code(words) {
        return false;
    }
    let max_len = words.iter().map(Word::len).max().unwrap();
    covers_to_depth(words, &Word::empty(), max_len)
}

/// Every word of length `depth` extending `node` has a prefix in `words`.
fn covers_to_depth(words: &BTreeSet<Word>, node: &Word, depth: usize) -> bool {
    if words.contains(node) {
        return true;
    }
    if node.len() == depth {
        return false;
    }
    Branch::BOTH
        .iter()
        .all(|&b| covers_to_depth(words, &node.child(b), depth))
}

/// Exact Kraft sum `Σ 2^(−|g|)` of a word set.
pub fn kraft_sum(words: &BTreeSet<Word>) -> BigRational {
    let mut sum = BigRational::zero();
    for g in words {
        let denom = BigInt::from(2).pow(g.len() as u32);
        sum += BigRational::new(BigInt::one(), denom);
    }
    sum
}

/// A finite prefix-free set of words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PrefixCode {
    words: BTreeSet<Word>,
}

impl PrefixCode {
    pub fn new(words: BTreeSet<Word>) -> Result<Self, WordsError> {
        if !is_prefix_code(&words) {
            return Err(WordsError::NotPrefixFree);
        }
        Ok(PrefixCode { words })
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    /// Kraft-sum completeness, the arithmetic route.
    pub fn is_complete(&self) -> bool {
        kraft_sum(&self.words).is_one()
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_word_set(f, &self.words)
    }
}

fn display_word_set(f: &mut fmt::Formatter<'_>, words: &BTreeSet<Word>) -> fmt::Result {
    let mut first = true;
    for w in words {
        if !first {
            write!(f, " ")?;
        }
        write!(f, "{}", w)?;
        first = false;
    }
    Ok(())
}

/// A complete prefix code.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Cpc(PrefixCode);

impl Cpc {
    pub fn new(words: BTreeSet<Word>) -> Result<Self, WordsError> {
        let code = PrefixCode::new(words)?;
        if !code.is_complete() {
            return Err(WordsError::NotComplete);
        }
        Ok(Cpc(code))
    }

    /// The one-word code `{ε}`.
    pub fn root() -> Self {
        let mut words = BTreeSet::new();
        words.insert(Word::empty());
        Cpc(PrefixCode { words })
    }

    /// The code `{s1, s2}` one level below the root.
    pub fn both_children() -> Self {
        let mut words = BTreeSet::new();
        words.insert(Word::empty().child(Branch::Left));
        words.insert(Word::empty().child(Branch::Right));
        Cpc(PrefixCode { words })
    }

    pub fn as_prefix_code(&self) -> &PrefixCode {
        &self.0
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        self.0.words()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.0.contains(word)
    }

    pub fn max_depth(&self) -> usize {
        self.iter().map(Word::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Cpc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite prefix-closed set of nodes; contains the root when nonempty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeRegion {
    nodes: BTreeSet<Word>,
}

impl TreeRegion {
    pub fn new(nodes: BTreeSet<Word>) -> Result<Self, WordsError> {
        for node in &nodes {
            if let Some(parent) = node.parent() {
                if !nodes.contains(&parent) {
                    return Err(WordsError::NotPrefixClosed);
                }
            }
        }
        Ok(TreeRegion { nodes })
    }

    fn new_unchecked(nodes: BTreeSet<Word>) -> Self {
        debug_assert!(TreeRegion::new(nodes.clone()).is_ok());
        TreeRegion { nodes }
    }

    pub fn nodes(&self) -> &BTreeSet<Word> {
        &self.nodes
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.nodes.contains(word)
    }
}

impl fmt::Display for TreeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_word_set(f, &self.nodes)
    }
}

/// `R(S)`: all prefixes of members of the code, members included.
pub fn region_of(code: &PrefixCode) -> TreeRegion {
    let mut nodes = BTreeSet::new();
    for word in code.iter() {
        nodes.extend(word.prefixes());
    }
    TreeRegion::new_unchecked(nodes)
}

/// Members of the region with no child inside it.
pub fn boundary(region: &TreeRegion) -> BTreeSet<Word> {
    region
        .iter()
        .filter(|g| Branch::BOTH.iter().all(|&b| !region.contains(&g.child(b))))
        .cloned()
        .collect()
}

/// The CPC seen from `at` inside the region of `code`: the boundary of
/// `A = {h : at·h ∈ R(code)}`.
pub fn localize(code: &Cpc, at: &Word) -> Result<Cpc, WordsError> {
    let region = region_of(code.as_prefix_code());
    if !region.contains(at) {
        return Err(WordsError::NodeOutsideRegion {
            node: at.to_string(),
        });
    }
    let sub: BTreeSet<Word> = region.iter().filter_map(|g| g.strip_prefix(at)).collect();
    let sub_region = TreeRegion::new_unchecked(sub);
    Cpc::new(boundary(&sub_region))
}

/// Replaces the subtree of `s1` below `at` with `at·s2`.
pub fn substitute(s1: &Cpc, at: &Word, s2: &Cpc) -> Result<Cpc, WordsError> {
    let region = region_of(s1.as_prefix_code());
    if !region.contains(at) {
        return Err(WordsError::NodeOutsideRegion {
            node: at.to_string(),
        });
    }
    let words: BTreeSet<Word> = s1
        .iter()
        .filter(|g| !at.is_prefix_of(g))
        .cloned()
        .chain(s2.iter().map(|h| at.concat(h)))
        .collect();
    Cpc::new(words)
}

/// The grafted region: `R(s1)` with its subtree below `at` replaced by
/// `at·R(s2)`. Prefix-closed with a CPC boundary.
pub fn graft_region(s1: &Cpc, at: &Word, s2: &Cpc) -> Result<TreeRegion, WordsError> {
    let region1 = region_of(s1.as_prefix_code());
    if !region1.contains(at) {
        return Err(WordsError::NodeOutsideRegion {
            node: at.to_string(),
        });
    }
    let region2 = region_of(s2.as_prefix_code());
    let nodes: BTreeSet<Word> = region1
        .iter()
        .filter(|g| !at.is_prefix_of(g))
        .cloned()
        .chain(region2.iter().map(|h| at.concat(h)))
        .collect();
    Ok(TreeRegion::new_unchecked(nodes))
}

/// The product code `{g·h : g ∈ s, h ∈ p}`, of size `|s|·|p|`.
pub fn concatenate(s: &Cpc, p: &Cpc) -> Cpc {
    let words: BTreeSet<Word> = s
        .iter()
        .flat_map(|g| p.iter().map(move |h| g.concat(h)))
        .collect();
    Cpc::new(words).expect("product of complete prefix codes is complete")
}

/// Largest depth accepted by [`enumerate_cpcs`]. The count of CPCs of depth
/// at most `d` satisfies `c(d) = 1 + c(d−1)²`, so depth 6 already exceeds
/// 10¹¹ codes.
pub const MAX_ENUM_DEPTH: usize = 5;

/// Streams every CPC whose words all have length at most `max_depth`,
/// exactly once, in canonical order.
pub fn enumerate_cpcs(max_depth: usize) -> Result<CpcEnumeration, WordsError> {
    if max_depth > MAX_ENUM_DEPTH {
        return Err(WordsError::DepthOverBound {
            depth: max_depth,
            bound: MAX_ENUM_DEPTH,
        });
    }
    let level = if max_depth == 0 {
        Rc::new(Vec::new())
    } else {
        Rc::new(cpc_level(max_depth - 1))
    };
    Ok(CpcEnumeration::over(level))
}

fn cpc_level(depth: usize) -> Vec<Cpc> {
    let level = if depth == 0 {
        Rc::new(Vec::new())
    } else {
        Rc::new(cpc_level(depth - 1))
    };
    CpcEnumeration::over(level).collect()
}

/// `s1·left ∪ s2·right`: the CPC whose two subtrees are the given codes.
pub fn graft_children(left: &Cpc, right: &Cpc) -> Cpc {
    let words: BTreeSet<Word> = left
        .iter()
        .map(|w| {
            let mut branches = vec![Branch::Left];
            branches.extend_from_slice(w.branches());
            Word::from_branches(branches)
        })
        .chain(right.iter().map(|w| {
            let mut branches = vec![Branch::Right];
            branches.extend_from_slice(w.branches());
            Word::from_branches(branches)
        }))
        .collect();
    Cpc::new(words).expect("grafting complete codes onto both children stays complete")
}

/// Iterator over CPCs up to a depth bound, in canonical set order. `{ε}`
/// comes first; every other code is a graft of two codes one level
/// shallower. For a fixed left subcode the grafts are monotone in the right
/// subcode, so a k-way merge over one stream per left subcode emits the
/// grafts sorted.
pub struct CpcEnumeration {
    level: Rc<Vec<Cpc>>,
    /// Min-heap of (next code of stream i, i); stream i holds grafts with
    /// left subcode `level[i]`.
    heap: BinaryHeap<Reverse<(Cpc, usize)>>,
    /// Per stream: index of the right subcode to emit next.
    cursor: Vec<usize>,
    root_emitted: bool,
}

impl CpcEnumeration {
    fn over(level: Rc<Vec<Cpc>>) -> Self {
        let mut heap = BinaryHeap::new();
        let mut cursor = Vec::with_capacity(level.len());
        for (i, left) in level.iter().enumerate() {
            heap.push(Reverse((graft_children(left, &level[0]), i)));
            cursor.push(1);
        }
        CpcEnumeration {
            level,
            heap,
            cursor,
            root_emitted: false,
        }
    }
}

impl Iterator for CpcEnumeration {
    type Item = Cpc;

    fn next(&mut self) -> Option<Cpc> {
        if !self.root_emitted {
            self.root_emitted = true;
            return Some(Cpc::root());
        }
        let Reverse((item, i)) = self.heap.pop()?;
        let j = self.cursor[i];
        if j < self.level.len() {
            self.cursor[i] = j + 1;
            self.heap
                .push(Reverse((graft_children(&self.level[i], &self.level[j]), i)));
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(words: &[&str]) -> BTreeSet<Word> {
        words.iter().map(|s| w(s)).collect()
    }

    fn cpc(words: &[&str]) -> Cpc {
        Cpc::new(set(words)).unwrap()
    }

    #[test]
    fn prefix_relation() {
        assert!(is_prefix(&w(""), &w("12")));
        assert!(!is_prefix(&w("1"), &w("21")));
        assert!(is_prefix(&w("12"), &w("12")));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut words = vec![w("21"), w(""), w("2"), w("11"), w("1")];
        words.sort();
        assert_eq!(words, vec![w(""), w("1"), w("2"), w("11"), w("21")]);
    }

    #[test]
    fn prefix_code_recognition() {
        assert!(is_prefix_code(&set(&["1", "21", "22"])));
        assert!(!is_prefix_code(&set(&["1", "12"])));
        assert!(is_prefix_code(&BTreeSet::new()));
    }

    #[test]
    fn cpc_recognition() {
        assert!(is_cpc(&set(&[""])));
        assert!(is_cpc(&set(&["1", "21", "22"])));
        assert!(!is_cpc(&set(&["1"])));
        assert!(!is_cpc(&BTreeSet::new()));
    }

    #[test]
    fn regions_and_boundaries() {
        assert_eq!(
            region_of(cpc(&[""]).as_prefix_code()).nodes(),
            &set(&[""])
        );
        assert_eq!(
            region_of(cpc(&["1", "21", "22"]).as_prefix_code()).nodes(),
            &set(&["", "1", "2", "21", "22"])
        );
        assert!(region_of(&PrefixCode::new(BTreeSet::new()).unwrap()).is_empty());

        assert_eq!(boundary(&TreeRegion::new(set(&[""])).unwrap()), set(&[""]));
        assert_eq!(
            boundary(&TreeRegion::new(set(&["", "1", "2"])).unwrap()),
            set(&["1", "2"])
        );
        let code = cpc(&["1", "21", "22"]);
        assert_eq!(
            boundary(&region_of(code.as_prefix_code())),
            code.words().clone()
        );
    }

    #[test]
    fn kraft_sums() {
        assert!(kraft_sum(&set(&[""])).is_one());
        assert!(kraft_sum(&set(&["1", "21", "22"])).is_one());
        assert_eq!(
            kraft_sum(&set(&["1"])),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn localize_examples() {
        let code = cpc(&["1", "21", "22"]);
        assert_eq!(localize(&code, &w("2")).unwrap(), cpc(&["1", "2"]));
        assert_eq!(localize(&code, &w("1")).unwrap(), Cpc::root());
        assert_eq!(localize(&code, &w("")).unwrap(), code);
        assert!(matches!(
            localize(&code, &w("11")),
            Err(WordsError::NodeOutsideRegion { .. })
        ));
    }

    #[test]
    fn substitute_examples() {
        let two = Cpc::both_children();
        assert_eq!(
            substitute(&two, &w("2"), &two).unwrap(),
            cpc(&["1", "21", "22"])
        );
        assert_eq!(
            substitute(&cpc(&["1", "21", "22"]), &w("2"), &Cpc::root()).unwrap(),
            cpc(&["1", "2"])
        );
        assert_eq!(
            substitute(&Cpc::root(), &w(""), &cpc(&["1", "21", "22"])).unwrap(),
            cpc(&["1", "21", "22"])
        );
    }

    #[test]
    fn substitute_then_localize_recovers_inner_code() {
        let s1 = cpc(&["1", "21", "22"]);
        let s2 = cpc(&["11", "12", "2"]);
        for at in ["2", "21", "1"] {
            let combined = substitute(&s1, &w(at), &s2).unwrap();
            assert_eq!(localize(&combined, &w(at)).unwrap(), s2);
        }
    }

    #[test]
    fn graft_region_examples() {
        let two = Cpc::both_children();
        assert_eq!(
            graft_region(&two, &w("2"), &two).unwrap().nodes(),
            &set(&["", "1", "2", "21", "22"])
        );
        let target = cpc(&["1", "21", "22"]);
        assert_eq!(
            graft_region(&two, &w(""), &target).unwrap(),
            region_of(target.as_prefix_code())
        );
        let grafted = graft_region(&target, &w("21"), &two).unwrap();
        assert!(is_cpc(&boundary(&grafted)));
    }

    #[test]
    fn concatenate_examples() {
        let two = Cpc::both_children();
        assert_eq!(concatenate(&two, &Cpc::root()), two);
        let deep = cpc(&["1", "21", "22"]);
        assert_eq!(concatenate(&Cpc::root(), &deep), deep);
        assert_eq!(
            concatenate(&two, &two),
            cpc(&["11", "12", "21", "22"])
        );
        assert_eq!(concatenate(&deep, &two).len(), deep.len() * two.len());
    }

    #[test]
    fn enumeration_counts_match_recursion() {
        // c(d) = 1 + c(d-1)^2
        let mut expected = 1usize;
        for depth in 0..=4 {
            let got = enumerate_cpcs(depth).unwrap().count();
            assert_eq!(got, expected, "depth {}", depth);
            expected = 1 + expected * expected;
        }
    }

    #[test]
    fn enumeration_first_levels() {
        let d0: Vec<_> = enumerate_cpcs(0).unwrap().collect();
        assert_eq!(d0, vec![Cpc::root()]);
        let d1: Vec<_> = enumerate_cpcs(1).unwrap().collect();
        assert_eq!(d1, vec![Cpc::root(), Cpc::both_children()]);
        assert!(matches!(
            enumerate_cpcs(MAX_ENUM_DEPTH + 1),
            Err(WordsError::DepthOverBound { .. })
        ));
    }

    #[test]
    fn enumeration_is_canonical_and_duplicate_free() {
        for depth in 0..=4 {
            let all: Vec<_> = enumerate_cpcs(depth).unwrap().collect();
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(all, sorted, "depth {}", depth);
        }
    }

    #[test]
    fn enumerated_codes_satisfy_both_completeness_routes() {
        for code in enumerate_cpcs(4).unwrap() {
            assert!(is_prefix_code(code.words()));
            assert!(is_cpc(code.words()));
            assert!(kraft_sum(code.words()).is_one());
            assert_eq!(
                boundary(&region_of(code.as_prefix_code())),
                code.words().clone()
            );
        }
    }

    #[test]
    fn word_parsing_round_trip() {
        for text in ["", "1", "2", "121", "2211"] {
            assert_eq!(w(text).to_string(), text);
        }
        assert!(matches!("13".parse::<Word>(), Err(WordsError::InvalidChar('3'))));
    }
}
