//! Walk documents: the per-node output of neighborhood sampling.
//!
//! A walk stores (node, step) tuples; a node document collects all walks
//! started at one node, in sampling order. The multiset view used for
//! pattern presence and the debug dump is derived from the stored walks.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// One visited node together with the step index at which it was visited
/// (1-based). Step 0 is reserved for the optional start-node self-token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WalkTuple {
    pub node: NodeId,
    pub order: u16,
}

impl WalkTuple {
    pub fn new(node: NodeId, order: u16) -> Self {
        WalkTuple { node, order }
    }
}

/// All walks sampled from a single start node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDocument {
    pub start: NodeId,
    /// Token sequences in sampling order. For random-walk sampling each
    /// entry is one walk; for deterministic BFS sampling there is a single
    /// sequence sorted by (order, node).
    pub walks: Vec<Vec<WalkTuple>>,
}

impl NodeDocument {
    pub fn empty(start: NodeId) -> Self {
        NodeDocument {
            start,
            walks: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.walks.iter().all(|w| w.is_empty())
    }

    pub fn total_tuples(&self) -> usize {
        self.walks.iter().map(|w| w.len()).sum()
    }

    /// Multiset view: tuple -> multiplicity.
    pub fn tuple_counts(&self) -> BTreeMap<WalkTuple, u64> {
        let mut counts = BTreeMap::new();
        for walk in &self.walks {
            for &t in walk {
                *counts.entry(t).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Deduplicated tuples, the FP-Growth transaction view.
    pub fn unique_tuples(&self) -> BTreeSet<WalkTuple> {
        self.walks.iter().flatten().copied().collect()
    }
}

/// A collection of node documents plus the name table needed to interpret
/// them, self-contained for the downstream embedding stage.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentSet {
    /// Name per node index of the graph the documents were sampled from.
    pub node_names: Vec<String>,
    /// Whether walks were prefixed with a (start, 0) self-token.
    pub include_start: bool,
    /// Documents sorted by start node index.
    pub docs: Vec<NodeDocument>,
}

const DOC_MAGIC: &[u8; 4] = b"SGED";
const DOC_VERSION: u32 = 1;

impl DocumentSet {
    pub fn name_of(&self, n: NodeId) -> &str {
        &self.node_names[n.index()]
    }

    /// Writes the versioned little-endian documents file.
    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let werr = |e: std::io::Error| Error::io(path, e);

        w.write_all(DOC_MAGIC).map_err(werr)?;
        w.write_all(&DOC_VERSION.to_le_bytes()).map_err(werr)?;
        w.write_all(&[self.include_start as u8]).map_err(werr)?;
        w.write_all(&(self.node_names.len() as u64).to_le_bytes()).map_err(werr)?;
        for name in &self.node_names {
            w.write_all(&(name.len() as u32).to_le_bytes()).map_err(werr)?;
            w.write_all(name.as_bytes()).map_err(werr)?;
        }
        w.write_all(&(self.docs.len() as u64).to_le_bytes()).map_err(werr)?;
        for doc in &self.docs {
            w.write_all(&doc.start.0.to_le_bytes()).map_err(werr)?;
            w.write_all(&(doc.walks.len() as u32).to_le_bytes()).map_err(werr)?;
            for walk in &doc.walks {
                w.write_all(&(walk.len() as u32).to_le_bytes()).map_err(werr)?;
                for t in walk {
                    w.write_all(&t.node.0.to_le_bytes()).map_err(werr)?;
                    w.write_all(&t.order.to_le_bytes()).map_err(werr)?;
                }
            }
        }
        w.flush().map_err(werr)
    }

    /// Reads a documents file written by [`DocumentSet::write`].
    pub fn read(path: &Path) -> Result<DocumentSet> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = BufReader::new(file);
        let rerr = |e: std::io::Error| Error::io(path, e);

        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(rerr)?;
        if &magic != DOC_MAGIC {
            return Err(Error::validation(format!(
                "{} is not a walk documents file (bad magic)",
                path.display()
            )));
        }
        let version = read_u32(&mut r).map_err(rerr)?;
        if version != DOC_VERSION {
            return Err(Error::validation(format!(
                "{}: unsupported documents version {version}",
                path.display()
            )));
        }
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag).map_err(rerr)?;
        let include_start = flag[0] != 0;
        let name_count = read_u64(&mut r).map_err(rerr)? as usize;
        let mut node_names = Vec::with_capacity(name_count);
        for _ in 0..name_count {
            let len = read_u32(&mut r).map_err(rerr)? as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf).map_err(rerr)?;
            node_names.push(String::from_utf8(buf).map_err(|_| {
                Error::validation(format!("{}: non-UTF-8 node name", path.display()))
            })?);
        }
        let doc_count = read_u64(&mut r).map_err(rerr)? as usize;
        let mut docs = Vec::with_capacity(doc_count);
        for _ in 0..doc_count {
            let start = NodeId(read_u32(&mut r).map_err(rerr)?);
            let walk_count = read_u32(&mut r).map_err(rerr)? as usize;
            let mut walks = Vec::with_capacity(walk_count);
            for _ in 0..walk_count {
                let len = read_u32(&mut r).map_err(rerr)? as usize;
                let mut walk = Vec::with_capacity(len);
                for _ in 0..len {
                    let node = NodeId(read_u32(&mut r).map_err(rerr)?);
                    let order = read_u16(&mut r).map_err(rerr)?;
                    walk.push(WalkTuple { node, order });
                }
                walks.push(walk);
            }
            docs.push(NodeDocument { start, walks });
        }
        let set = DocumentSet {
            node_names,
            include_start,
            docs,
        };
        for doc in &set.docs {
            if doc.start.index() >= set.node_names.len() {
                return Err(Error::validation(format!(
                    "{}: document start node out of range",
                    path.display()
                )));
            }
        }
        Ok(set)
    }

    /// Plain-text multiset dump for debugging: one line per node,
    /// `name<TAB>(neighbor,order):multiplicity ...`, tuples sorted by
    /// (order, node index).
    pub fn write_debug_dump(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let werr = |e: std::io::Error| Error::io(path, e);
        for doc in &self.docs {
            write!(w, "{}", self.name_of(doc.start)).map_err(werr)?;
            let mut counts: Vec<(WalkTuple, u64)> = doc.tuple_counts().into_iter().collect();
            counts.sort_unstable_by_key(|&(t, _)| (t.order, t.node));
            let mut sep = '\t';
            for (t, mult) in counts {
                write!(w, "{sep}({},{}):{mult}", self.name_of(t.node), t.order).map_err(werr)?;
                sep = ' ';
            }
            writeln!(w).map_err(werr)?;
        }
        w.flush().map_err(werr)
    }
}

fn read_u16<R: Read>(r: &mut R) -> std::io::Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(n: u32, o: u16) -> WalkTuple {
        WalkTuple::new(NodeId(n), o)
    }

    fn sample_set() -> DocumentSet {
        DocumentSet {
            node_names: vec!["a".into(), "b".into(), "c".into()],
            include_start: false,
            docs: vec![
                NodeDocument {
                    start: NodeId(0),
                    walks: vec![vec![tuple(1, 1), tuple(2, 2)], vec![tuple(1, 1)]],
                },
                NodeDocument::empty(NodeId(1)),
                NodeDocument {
                    start: NodeId(2),
                    walks: vec![vec![tuple(0, 1)]],
                },
            ],
        }
    }

    #[test]
    fn multiset_view_counts_multiplicities() {
        let set = sample_set();
        let counts = set.docs[0].tuple_counts();
        assert_eq!(counts[&tuple(1, 1)], 2);
        assert_eq!(counts[&tuple(2, 2)], 1);
        assert_eq!(set.docs[0].total_tuples(), 3);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("walks.sgw");
        let set = sample_set();
        set.write(&path).unwrap();
        let back = DocumentSet::read(&path).unwrap();
        assert_eq!(set, back);
    }

    #[test]
    fn debug_dump_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dump.txt");
        sample_set().write_debug_dump(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a\t(b,1):2 (c,2):1\nb\nc\t(a,1):1\n");
    }

    #[test]
    fn rejects_non_document_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk");
        std::fs::write(&path, b"garbage bytes").unwrap();
        assert!(DocumentSet::read(&path).is_err());
    }
}
