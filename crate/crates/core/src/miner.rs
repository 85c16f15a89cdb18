//! Pattern mining over the walk transaction database.
//!
//! Walk tuples are interned to dense token ids; every node document becomes
//! one transaction. Two vocabulary constructions are supported:
//!
//! * **Tuple k-grams** — contiguous token runs of length `1..=k` within a
//!   single walk (n-grams never span two walks), ranked by document
//!   frequency with the top `d` kept as embedding columns.
//! * **FP-Growth itemsets** — each transaction reduced to its unique token
//!   set; all itemsets occurring in at least `support` documents are mined
//!   from an fp-tree, with no size cap.
//!
//! Both constructions are deterministic: ranking ties break on
//! lexicographic token-id order, and the fp-tree orders items by
//! descending global frequency with token-id tie-break.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::documents::{DocumentSet, WalkTuple};
use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Dense id of an interned walk tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenId(pub u32);

impl TokenId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The transaction database: one interned document per sampled node.
#[derive(Debug, Clone)]
pub struct TransactionDb {
    node_names: Vec<String>,
    start_nodes: Vec<NodeId>,
    /// Per document, per walk, interned token sequence.
    sequences: Vec<Vec<Vec<TokenId>>>,
    /// Token id -> original tuple.
    token_tuples: Vec<WalkTuple>,
}

impl TransactionDb {
    /// Interns a document set. Tokens are assigned ids in first-occurrence
    /// order scanning documents by node index, which keeps the mapping
    /// deterministic.
    pub fn build(set: &DocumentSet) -> Result<TransactionDb> {
        if set.docs.is_empty() {
            return Err(Error::validation(
                "cannot build a transaction database from zero documents",
            ));
        }
        let mut token_ids: HashMap<WalkTuple, TokenId> = HashMap::new();
        let mut token_tuples: Vec<WalkTuple> = Vec::new();
        let mut sequences = Vec::with_capacity(set.docs.len());
        let mut start_nodes = Vec::with_capacity(set.docs.len());
        for doc in &set.docs {
            start_nodes.push(doc.start);
            let mut walks = Vec::with_capacity(doc.walks.len());
            for walk in &doc.walks {
                let mut seq = Vec::with_capacity(walk.len());
                for &tuple in walk {
                    let id = match token_ids.entry(tuple) {
                        Entry::Occupied(e) => *e.get(),
                        Entry::Vacant(e) => {
                            let id = TokenId(token_tuples.len() as u32);
                            token_tuples.push(tuple);
                            *e.insert(id)
                        }
                    };
                    seq.push(id);
                }
                walks.push(seq);
            }
            sequences.push(walks);
        }
        Ok(TransactionDb {
            node_names: set.node_names.clone(),
            start_nodes,
            sequences,
            token_tuples,
        })
    }

    pub fn num_docs(&self) -> usize {
        self.sequences.len()
    }

    pub fn num_tokens(&self) -> usize {
        self.token_tuples.len()
    }

    /// Start node of transaction `doc`.
    pub fn start_node(&self, doc: usize) -> NodeId {
        self.start_nodes[doc]
    }

    pub fn start_nodes(&self) -> &[NodeId] {
        &self.start_nodes
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        &self.node_names[n.index()]
    }

    /// Token sequences (one per walk) of transaction `doc`.
    pub fn doc_sequences(&self, doc: usize) -> &[Vec<TokenId>] {
        &self.sequences[doc]
    }

    pub fn tuple_of(&self, t: TokenId) -> WalkTuple {
        self.token_tuples[t.index()]
    }

    /// Human-readable `(node_name,order)` form of a token.
    pub fn token_label(&self, t: TokenId) -> String {
        let tuple = self.tuple_of(t);
        format!("({},{})", self.node_names[tuple.node.index()], tuple.order)
    }

    /// Sorted unique token ids of transaction `doc` (the itemset view).
    pub fn doc_unique_tokens(&self, doc: usize) -> Vec<TokenId> {
        let mut items: Vec<TokenId> = self.sequences[doc]
            .iter()
            .flatten()
            .copied()
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    }
}

/// Whether a pattern is an ordered k-gram or an unordered itemset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Kgram,
    Itemset,
}

/// One mined pattern. For k-grams `tokens` is the contiguous sequence; for
/// itemsets it is strictly sorted. `frequency` is the number of documents
/// containing the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub tokens: Vec<TokenId>,
    pub kind: PatternKind,
    pub frequency: u64,
}

/// Parameters a vocabulary was mined with, echoed into run reports.
#[derive(Debug, Clone, PartialEq)]
pub enum MiningParams {
    Kgram { k: usize, d: usize },
    FpGrowth {
        support: u64,
        min_size: Option<usize>,
        max_size: Option<usize>,
    },
}

/// The selected patterns serving as embedding dimensions; the position of a
/// pattern is its column index.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternVocabulary {
    pub kind: PatternKind,
    pub patterns: Vec<Pattern>,
    pub params: MiningParams,
}

impl PatternVocabulary {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Longest pattern, in tokens.
    pub fn max_pattern_len(&self) -> usize {
        self.patterns.iter().map(|p| p.tokens.len()).max().unwrap_or(0)
    }

    /// `(name,order);(name,order)` description of column `col`.
    pub fn describe(&self, col: usize, db: &TransactionDb) -> String {
        self.patterns[col]
            .tokens
            .iter()
            .map(|&t| db.token_label(t))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Mines the top-`d` tuple k-grams by document frequency.
///
/// N-grams of every order `1..=k` are enumerated over each document's walks
/// in sampling order; a walk boundary always breaks an n-gram. Ties in
/// document frequency are broken by lexicographic token-id order.
pub fn mine_kgrams(db: &TransactionDb, k: usize, d: usize) -> Result<PatternVocabulary> {
    if k < 1 {
        return Err(Error::validation("k-gram order k must be >= 1"));
    }
    if d < 1 {
        return Err(Error::validation("vocabulary size d must be >= 1"));
    }
    let mut doc_freq: HashMap<Vec<TokenId>, u64> = HashMap::new();
    let mut seen: HashSet<Vec<TokenId>> = HashSet::new();
    for doc in 0..db.num_docs() {
        seen.clear();
        for seq in db.doc_sequences(doc) {
            for n in 1..=k.min(seq.len()) {
                for gram in seq.windows(n) {
                    if seen.insert(gram.to_vec()) {
                        *doc_freq.entry(gram.to_vec()).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    let mut ranked: Vec<(Vec<TokenId>, u64)> = doc_freq.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    if ranked.len() < d {
        log::warn!(
            "only {} distinct k-grams exist; requested d = {d}",
            ranked.len()
        );
    }
    ranked.truncate(d);
    let patterns = ranked
        .into_iter()
        .map(|(tokens, frequency)| Pattern {
            tokens,
            kind: PatternKind::Kgram,
            frequency,
        })
        .collect();
    Ok(PatternVocabulary {
        kind: PatternKind::Kgram,
        patterns,
        params: MiningParams::Kgram { k, d },
    })
}

/// Mines every itemset with document frequency >= `support` using an
/// fp-tree. Transaction multiplicities are ignored (each document counts
/// once). Singletons are included; `min_size`/`max_size` optionally filter
/// the result.
pub fn mine_fpgrowth(
    db: &TransactionDb,
    support: u64,
    min_size: Option<usize>,
    max_size: Option<usize>,
) -> Result<PatternVocabulary> {
    if support < 1 {
        return Err(Error::validation("support must be >= 1"));
    }
    let params = MiningParams::FpGrowth {
        support,
        min_size,
        max_size,
    };
    if support > db.num_docs() as u64 {
        log::warn!(
            "support {support} exceeds the {} available documents; vocabulary is empty",
            db.num_docs()
        );
        return Ok(PatternVocabulary {
            kind: PatternKind::Itemset,
            patterns: Vec::new(),
            params,
        });
    }

    // Global document frequency per token.
    let mut counts = vec![0u64; db.num_tokens()];
    let transactions: Vec<Vec<TokenId>> = (0..db.num_docs())
        .map(|doc| {
            let items = db.doc_unique_tokens(doc);
            for &t in &items {
                counts[t.index()] += 1;
            }
            items
        })
        .collect();

    // Frequent items ordered by (frequency desc, token id asc); the rank is
    // the item's position in every tree.
    let mut frequent: Vec<TokenId> = (0..db.num_tokens() as u32)
        .map(TokenId)
        .filter(|t| counts[t.index()] >= support)
        .collect();
    frequent.sort_unstable_by(|a, b| {
        counts[b.index()]
            .cmp(&counts[a.index()])
            .then(a.0.cmp(&b.0))
    });
    let mut rank_of: Vec<Option<u32>> = vec![None; db.num_tokens()];
    for (rank, &t) in frequent.iter().enumerate() {
        rank_of[t.index()] = Some(rank as u32);
    }

    let mut tree = FpTree::new(frequent.len());
    for items in &transactions {
        let mut ranked: Vec<u32> = items
            .iter()
            .filter_map(|t| rank_of[t.index()])
            .collect();
        ranked.sort_unstable();
        tree.insert(&ranked, 1);
    }

    let mut found: Vec<(Vec<TokenId>, u64)> = Vec::new();
    let mut suffix: Vec<u32> = Vec::new();
    mine_tree(&tree, support, &mut suffix, &frequent, &mut found);

    found.retain(|(tokens, _)| {
        min_size.is_none_or(|lo| tokens.len() >= lo)
            && max_size.is_none_or(|hi| tokens.len() <= hi)
    });
    for (tokens, _) in found.iter_mut() {
        tokens.sort_unstable();
    }
    found.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let patterns = found
        .into_iter()
        .map(|(tokens, frequency)| Pattern {
            tokens,
            kind: PatternKind::Itemset,
            frequency,
        })
        .collect();
    Ok(PatternVocabulary {
        kind: PatternKind::Itemset,
        patterns,
        params,
    })
}

/// Prefix tree over rank-sorted transactions. Node 0 is the root; each
/// other node carries one item rank and the count of transactions passing
/// through it.
struct FpTree {
    items: Vec<u32>,
    counts: Vec<u64>,
    parents: Vec<usize>,
    children: Vec<Vec<(u32, usize)>>,
    /// Node list per item rank.
    headers: Vec<Vec<usize>>,
    /// Total count per item rank in this tree.
    item_totals: Vec<u64>,
}

impl FpTree {
    fn new(num_items: usize) -> Self {
        FpTree {
            items: vec![u32::MAX],
            counts: vec![0],
            parents: vec![0],
            children: vec![Vec::new()],
            headers: vec![Vec::new(); num_items],
            item_totals: vec![0; num_items],
        }
    }

    fn insert(&mut self, ranked_items: &[u32], count: u64) {
        let mut current = 0usize;
        for &item in ranked_items {
            self.item_totals[item as usize] += count;
            current = match self.children[current]
                .iter()
                .find(|&&(i, _)| i == item)
                .map(|&(_, n)| n)
            {
                Some(next) => {
                    self.counts[next] += count;
                    next
                }
                None => {
                    let node = self.items.len();
                    self.items.push(item);
                    self.counts.push(count);
                    self.parents.push(current);
                    self.children.push(Vec::new());
                    self.children[current].push((item, node));
                    self.headers[item as usize].push(node);
                    node
                }
            };
        }
    }

    /// Paths (rank-sorted prefixes) ending just above each occurrence of
    /// `item`, with their counts.
    fn prefix_paths(&self, item: u32) -> Vec<(Vec<u32>, u64)> {
        let mut paths = Vec::new();
        for &node in &self.headers[item as usize] {
            let count = self.counts[node];
            let mut path = Vec::new();
            let mut cur = self.parents[node];
            while cur != 0 {
                path.push(self.items[cur]);
                cur = self.parents[cur];
            }
            path.reverse();
            paths.push((path, count));
        }
        paths
    }
}

fn mine_tree(
    tree: &FpTree,
    support: u64,
    suffix: &mut Vec<u32>,
    token_of_rank: &[TokenId],
    out: &mut Vec<(Vec<TokenId>, u64)>,
) {
    // Least frequent first: each item closes a suffix whose conditional
    // tree only contains lower ranks.
    for item in (0..tree.headers.len() as u32).rev() {
        let total = tree.item_totals[item as usize];
        if total < support {
            continue;
        }
        suffix.push(item);
        out.push((
            suffix.iter().map(|&r| token_of_rank[r as usize]).collect(),
            total,
        ));

        let paths = tree.prefix_paths(item);
        let mut cond_counts = vec![0u64; item as usize];
        for (path, count) in &paths {
            for &p in path {
                cond_counts[p as usize] += count;
            }
        }
        if cond_counts.iter().any(|&c| c >= support) {
            let mut cond = FpTree::new(item as usize);
            for (path, count) in &paths {
                let kept: Vec<u32> = path
                    .iter()
                    .copied()
                    .filter(|&p| cond_counts[p as usize] >= support)
                    .collect();
                if !kept.is_empty() {
                    cond.insert(&kept, *count);
                }
            }
            mine_tree(&cond, support, suffix, token_of_rank, out);
        }
        suffix.pop();
    }
}

/// Writes the vocabulary as `column_index<TAB>freq<TAB>(name,order)[;...]`
/// lines — the symbolic description of every embedding dimension.
pub fn write_vocabulary(
    vocab: &PatternVocabulary,
    db: &TransactionDb,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let werr = |e: std::io::Error| Error::io(path, e);
    for (col, pattern) in vocab.patterns.iter().enumerate() {
        writeln!(
            w,
            "{col}\t{}\t{}",
            pattern.frequency,
            vocab.describe(col, db)
        )
        .map_err(werr)?;
    }
    w.flush().map_err(werr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::documents::{DocumentSet, NodeDocument};

    fn tuple(n: u32, o: u16) -> WalkTuple {
        WalkTuple::new(NodeId(n), o)
    }

    /// Builds a document set whose i-th doc has the given walks.
    fn set_of(walks_per_doc: Vec<Vec<Vec<WalkTuple>>>) -> DocumentSet {
        let max_node = walks_per_doc
            .iter()
            .flatten()
            .flatten()
            .map(|t| t.node.0)
            .max()
            .unwrap_or(0)
            .max(walks_per_doc.len() as u32 - 1);
        DocumentSet {
            node_names: (0..=max_node).map(|i| format!("n{i}")).collect(),
            include_start: false,
            docs: walks_per_doc
                .into_iter()
                .enumerate()
                .map(|(i, walks)| NodeDocument {
                    start: NodeId(i as u32),
                    walks,
                })
                .collect(),
        }
    }

    #[test]
    fn interning_is_dense_and_complete() {
        let set = set_of(vec![
            vec![vec![tuple(1, 1), tuple(1, 1)]],
            vec![vec![tuple(1, 1), tuple(2, 2)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        assert_eq!(db.num_tokens(), 2);
        assert_eq!(db.num_docs(), 2);
        assert_eq!(db.tuple_of(TokenId(0)), tuple(1, 1));
        assert_eq!(db.token_label(TokenId(1)), "(n2,2)");
    }

    #[test]
    fn empty_docs_are_a_valid_db() {
        let set = set_of(vec![vec![], vec![]]);
        let db = TransactionDb::build(&set).unwrap();
        assert_eq!(db.num_tokens(), 0);
        let vocab = mine_kgrams(&db, 2, 10).unwrap();
        assert!(vocab.is_empty());
    }

    #[test]
    fn no_documents_is_an_error() {
        let set = DocumentSet {
            node_names: vec!["a".into()],
            include_start: false,
            docs: vec![],
        };
        assert!(matches!(
            TransactionDb::build(&set),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn single_walk_exhaustive_kgrams() {
        let set = set_of(vec![vec![vec![tuple(1, 1), tuple(2, 2)]]]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_kgrams(&db, 2, 10).unwrap();
        let grams: Vec<Vec<TokenId>> =
            vocab.patterns.iter().map(|p| p.tokens.clone()).collect();
        assert_eq!(grams.len(), 3);
        assert!(grams.contains(&vec![TokenId(0)]));
        assert!(grams.contains(&vec![TokenId(1)]));
        assert!(grams.contains(&vec![TokenId(0), TokenId(1)]));
        assert!(vocab.patterns.iter().all(|p| p.frequency == 1));
    }

    #[test]
    fn kgram_ranking_prefers_shared_tokens() {
        // doc0 and doc1 share (1,1); only doc1 has (2,1).
        let set = set_of(vec![
            vec![vec![tuple(1, 1)]],
            vec![vec![tuple(1, 1)], vec![tuple(2, 1)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_kgrams(&db, 1, 1).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.patterns[0].tokens, vec![TokenId(0)]);
        assert_eq!(vocab.patterns[0].frequency, 2);
    }

    #[test]
    fn kgrams_do_not_span_walks() {
        // The pair (a then b) only ever occurs across a walk boundary.
        let set = set_of(vec![vec![vec![tuple(1, 1)], vec![tuple(2, 1)]]]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_kgrams(&db, 2, 10).unwrap();
        assert!(vocab.patterns.iter().all(|p| p.tokens.len() == 1));
    }

    #[test]
    fn kgram_frequency_is_per_document_presence() {
        // Token appears 3 times in one doc: document frequency is still 1.
        let set = set_of(vec![vec![vec![tuple(1, 1), tuple(1, 1)], vec![tuple(1, 1)]]]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_kgrams(&db, 1, 10).unwrap();
        assert_eq!(vocab.patterns[0].frequency, 1);
    }

    #[test]
    fn fpgrowth_worked_example() {
        // Transactions {A,B}, {B,C}, {A,B,C}, support 2.
        let set = set_of(vec![
            vec![vec![tuple(0, 1), tuple(1, 1)]],
            vec![vec![tuple(1, 1), tuple(2, 1)]],
            vec![vec![tuple(0, 1), tuple(1, 1), tuple(2, 1)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_fpgrowth(&db, 2, None, None).unwrap();
        let mut got: Vec<(Vec<u32>, u64)> = vocab
            .patterns
            .iter()
            .map(|p| (p.tokens.iter().map(|t| t.0).collect(), p.frequency))
            .collect();
        got.sort();
        // Token ids: A=0, B=1, C=2 (first-occurrence order).
        let mut want: Vec<(Vec<u32>, u64)> = vec![
            (vec![0], 2),
            (vec![1], 3),
            (vec![2], 2),
            (vec![0, 1], 2),
            (vec![1, 2], 2),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn fpgrowth_support_one_keeps_singletons() {
        let set = set_of(vec![vec![vec![tuple(0, 1)]], vec![vec![tuple(1, 1)]]]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_fpgrowth(&db, 1, None, None).unwrap();
        let mut got: Vec<(Vec<u32>, u64)> = vocab
            .patterns
            .iter()
            .map(|p| (p.tokens.iter().map(|t| t.0).collect(), p.frequency))
            .collect();
        got.sort();
        assert_eq!(got, vec![(vec![0], 1), (vec![1], 1)]);
    }

    #[test]
    fn fpgrowth_support_above_doc_count_is_empty() {
        let set = set_of(vec![
            vec![vec![tuple(0, 1)]],
            vec![vec![tuple(0, 1)]],
            vec![vec![tuple(0, 1)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_fpgrowth(&db, 4, None, None).unwrap();
        assert!(vocab.is_empty());
    }

    #[test]
    fn fpgrowth_ignores_multiplicity() {
        let set = set_of(vec![
            vec![vec![tuple(0, 1), tuple(0, 1), tuple(0, 1)]],
            vec![vec![tuple(0, 1)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_fpgrowth(&db, 2, None, None).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.patterns[0].frequency, 2);
    }

    #[test]
    fn fpgrowth_size_filters() {
        let set = set_of(vec![
            vec![vec![tuple(0, 1), tuple(1, 1)]],
            vec![vec![tuple(0, 1), tuple(1, 1)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_fpgrowth(&db, 1, Some(2), None).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.patterns[0].tokens.len(), 2);
        let vocab = mine_fpgrowth(&db, 1, None, Some(1)).unwrap();
        assert!(vocab.patterns.iter().all(|p| p.tokens.len() == 1));
    }

    #[test]
    fn mining_is_deterministic() {
        let set = set_of(vec![
            vec![vec![tuple(0, 1), tuple(1, 2)], vec![tuple(2, 1)]],
            vec![vec![tuple(2, 1), tuple(1, 2)]],
            vec![vec![tuple(0, 1)], vec![tuple(1, 2), tuple(2, 3)]],
        ]);
        let db = TransactionDb::build(&set).unwrap();
        let a = mine_fpgrowth(&db, 1, None, None).unwrap();
        let b = mine_fpgrowth(&db, 1, None, None).unwrap();
        assert_eq!(a, b);
        let ka = mine_kgrams(&db, 3, 50).unwrap();
        let kb = mine_kgrams(&db, 3, 50).unwrap();
        assert_eq!(ka, kb);
    }

    #[test]
    fn vocabulary_export_format() {
        let set = set_of(vec![vec![vec![tuple(1, 1), tuple(2, 2)]]]);
        let db = TransactionDb::build(&set).unwrap();
        let vocab = mine_kgrams(&db, 2, 10).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vocab.tsv");
        write_vocabulary(&vocab, &db, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        let fields: Vec<&str> = first.split('\t').collect();
        assert_eq!(fields[0], "0");
        assert_eq!(fields[1], "1");
        assert!(fields[2].starts_with('('));
        assert_eq!(text.lines().count(), vocab.len());
    }
}
