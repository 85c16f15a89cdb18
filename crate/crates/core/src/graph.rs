//! Typed directed multigraph with compressed adjacency.
//!
//! Nodes are identified externally by unique string names and internally by
//! dense indices. Indices are assigned by sorted name order, so loading the
//! same edge set in any line order produces an identical graph.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense node index, contiguous in `0..num_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sparse class assignment over graph nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSet {
    /// Sorted by node index; each node appears at most once.
    assignments: Vec<(NodeId, u16)>,
    class_names: Vec<String>,
}

impl LabelSet {
    /// Builds a label set from (node, class id) pairs.
    ///
    /// Requires at least 2 classes and class ids contiguous in
    /// `0..class_names.len()`.
    pub fn new(mut assignments: Vec<(NodeId, u16)>, class_names: Vec<String>) -> Result<Self> {
        if class_names.len() < 2 {
            return Err(Error::validation(format!(
                "label set needs at least 2 classes, got {}",
                class_names.len()
            )));
        }
        assignments.sort_unstable();
        for w in assignments.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::validation(format!(
                    "node {} labeled more than once",
                    w[0].0
                )));
            }
        }
        for &(n, c) in &assignments {
            if (c as usize) >= class_names.len() {
                return Err(Error::validation(format!(
                    "node {n} has class id {c} outside 0..{}",
                    class_names.len()
                )));
            }
        }
        Ok(LabelSet {
            assignments,
            class_names,
        })
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_of(&self, node: NodeId) -> Option<u16> {
        self.assignments
            .binary_search_by_key(&node, |&(n, _)| n)
            .ok()
            .map(|i| self.assignments[i].1)
    }

    /// Labeled (node, class) pairs in node-index order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u16)> + '_ {
        self.assignments.iter().copied()
    }
}

/// Immutable directed multigraph with CSR adjacency, string-interned node
/// names, per-node type tags, and an optional sparse label set.
///
/// Safe to share across threads once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    names: Vec<String>,
    name_lookup: HashMap<String, NodeId>,
    /// CSR offsets, length `num_nodes + 1`, monotone non-decreasing.
    offsets: Vec<usize>,
    /// Out-neighbor targets, sorted within each node's slice. Parallel
    /// edges are retained.
    targets: Vec<NodeId>,
    node_types: Vec<u16>,
    type_names: Vec<String>,
    /// Edge type tags aligned with `targets`; provenance only, never used
    /// by sampling.
    edge_types: Option<(Vec<u16>, Vec<String>)>,
    labels: Option<LabelSet>,
}

impl Graph {
    /// Builds a graph from explicit names and index pairs. Names must be
    /// unique; every edge endpoint must be `< names.len()`.
    pub fn from_edge_list(names: Vec<String>, edges: &[(u32, u32)]) -> Result<Graph> {
        let n = names.len();
        let mut name_lookup = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name_lookup.insert(name.clone(), NodeId(i as u32)).is_some() {
                return Err(Error::validation(format!("duplicate node name '{name}'")));
            }
        }
        for &(s, t) in edges {
            if s as usize >= n || t as usize >= n {
                return Err(Error::validation(format!(
                    "edge ({s}, {t}) references a node >= {n}"
                )));
            }
        }
        let (offsets, targets, _) = build_csr(n, edges, None);
        Ok(Graph {
            names,
            name_lookup,
            offsets,
            targets,
            node_types: vec![0; n],
            type_names: vec![String::new()],
            edge_types: None,
            labels: None,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len() as u32).map(NodeId)
    }

    /// Out-neighbors of `n` as a slice: O(1), possibly empty, repeated
    /// entries for parallel edges.
    ///
    /// Panics if `n` is out of range; see [`Graph::try_out_neighbors`].
    #[inline]
    pub fn out_neighbors(&self, n: NodeId) -> &[NodeId] {
        self.try_out_neighbors(n)
            .unwrap_or_else(|| panic!("node index {} out of range 0..{}", n.0, self.num_nodes()))
    }

    #[inline]
    pub fn try_out_neighbors(&self, n: NodeId) -> Option<&[NodeId]> {
        let i = n.index();
        if i >= self.num_nodes() {
            return None;
        }
        Some(&self.targets[self.offsets[i]..self.offsets[i + 1]])
    }

    pub fn out_degree(&self, n: NodeId) -> usize {
        self.out_neighbors(n).len()
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.name_lookup.get(name).copied()
    }

    pub fn node_type_name(&self, n: NodeId) -> &str {
        &self.type_names[self.node_types[n.index()] as usize]
    }

    pub fn type_names(&self) -> &[String] {
        &self.type_names
    }

    pub fn labels(&self) -> Option<&LabelSet> {
        self.labels.as_ref()
    }

    pub fn set_labels(&mut self, labels: LabelSet) -> Result<()> {
        for (n, _) in labels.iter() {
            if n.index() >= self.num_nodes() {
                return Err(Error::validation(format!(
                    "label references node index {} outside the graph",
                    n.0
                )));
            }
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// One-line summary for run reports.
    pub fn summary(&self) -> String {
        let labeled = self.labels.as_ref().map_or(0, |l| l.len());
        format!(
            "{} nodes, {} edges, {} node types, {} labeled nodes",
            self.num_nodes(),
            self.num_edges(),
            self.type_names.iter().filter(|t| !t.is_empty()).count().max(1),
            labeled
        )
    }
}

fn build_csr(
    num_nodes: usize,
    edges: &[(u32, u32)],
    edge_types: Option<&[u16]>,
) -> (Vec<usize>, Vec<NodeId>, Option<Vec<u16>>) {
    let mut offsets = vec![0usize; num_nodes + 1];
    for &(s, _) in edges {
        offsets[s as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut cursor = offsets.clone();
    let mut targets = vec![NodeId(0); edges.len()];
    let mut tslots = edge_types.map(|_| vec![0u16; edges.len()]);
    for (k, &(s, t)) in edges.iter().enumerate() {
        let slot = cursor[s as usize];
        targets[slot] = NodeId(t);
        if let (Some(ts), Some(et)) = (tslots.as_mut(), edge_types) {
            ts[slot] = et[k];
        }
        cursor[s as usize] += 1;
    }
    // Sort each adjacency slice by target, keeping edge types aligned.
    for i in 0..num_nodes {
        let (lo, hi) = (offsets[i], offsets[i + 1]);
        match tslots.as_mut() {
            None => targets[lo..hi].sort_unstable(),
            Some(ts) => {
                let mut pairs: Vec<(NodeId, u16)> = targets[lo..hi]
                    .iter()
                    .copied()
                    .zip(ts[lo..hi].iter().copied())
                    .collect();
                pairs.sort_unstable();
                for (j, (tgt, ety)) in pairs.into_iter().enumerate() {
                    targets[lo + j] = tgt;
                    ts[lo + j] = ety;
                }
            }
        }
    }
    (offsets, targets, tslots)
}

/// Options for [`load_graph`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Add the reverse of every edge. The edge file is otherwise taken
    /// literally as directed.
    pub symmetrize: bool,
}

/// Loads a graph from a tab-separated edge list plus optional node-type and
/// label files.
///
/// Edge lines are `src <tab> dst [<tab> edge_type]`; node-type lines are
/// `name <tab> type`; label lines are `name <tab> class`. Lines starting
/// with `#` and blank lines are skipped in all three. Node indices are
/// assigned by sorted name order. Labels naming unknown nodes are rejected;
/// type rows for unknown nodes are skipped with a warning.
pub fn load_graph(
    edge_path: &Path,
    node_type_path: Option<&Path>,
    label_path: Option<&Path>,
    opts: &LoadOptions,
) -> Result<Graph> {
    let mut intern: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut edge_type_ids: Vec<u16> = Vec::new();
    let mut edge_type_names: Vec<String> = Vec::new();
    let mut edge_type_lookup: HashMap<String, u16> = HashMap::new();
    let mut saw_edge_type = false;

    let mut intern_name = |s: &str, names: &mut Vec<String>| -> u32 {
        if let Some(&id) = intern.get(s) {
            return id;
        }
        let id = names.len() as u32;
        names.push(s.to_string());
        intern.insert(s.to_string(), id);
        id
    };

    for_each_data_line(edge_path, |lineno, line| {
        let mut fields = line.split('\t');
        let src = fields.next().filter(|f| !f.is_empty());
        let dst = fields.next().filter(|f| !f.is_empty());
        let (src, dst) = match (src, dst) {
            (Some(s), Some(d)) => (s, d),
            _ => {
                return Err(Error::parse(
                    edge_path,
                    lineno,
                    "expected `src<TAB>dst[<TAB>edge_type]`",
                ))
            }
        };
        let s = intern_name(src, &mut names);
        let d = intern_name(dst, &mut names);
        edges.push((s, d));
        match fields.next() {
            Some(et) if !et.is_empty() => {
                saw_edge_type = true;
                let id = *edge_type_lookup.entry(et.to_string()).or_insert_with(|| {
                    edge_type_names.push(et.to_string());
                    (edge_type_names.len() - 1) as u16
                });
                edge_type_ids.push(id);
            }
            _ => edge_type_ids.push(u16::MAX),
        }
        if fields.next().is_some() {
            return Err(Error::parse(edge_path, lineno, "too many fields"));
        }
        Ok(())
    })?;

    if edges.is_empty() {
        return Err(Error::validation(format!(
            "edge file {} contains no edges",
            edge_path.display()
        )));
    }

    // Remap interned ids to sorted-name order so loading is independent of
    // line order.
    let mut order: Vec<u32> = (0..names.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| names[a as usize].cmp(&names[b as usize]));
    let mut remap = vec![0u32; names.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        remap[old_id as usize] = new_id as u32;
    }
    let mut sorted_names = vec![String::new(); names.len()];
    for (old_id, name) in names.into_iter().enumerate() {
        sorted_names[remap[old_id] as usize] = name;
    }
    for e in edges.iter_mut() {
        *e = (remap[e.0 as usize], remap[e.1 as usize]);
    }

    if opts.symmetrize {
        let orig = edges.len();
        for k in 0..orig {
            let (s, d) = edges[k];
            edges.push((d, s));
            if saw_edge_type {
                let et = edge_type_ids[k];
                edge_type_ids.push(et);
            }
        }
    }

    let mut graph = {
        let etypes = if saw_edge_type {
            // Untyped edges in a typed file get a reserved empty tag.
            if edge_type_ids.iter().any(|&t| t == u16::MAX) {
                let blank = edge_type_names.len() as u16;
                edge_type_names.push(String::new());
                for t in edge_type_ids.iter_mut() {
                    if *t == u16::MAX {
                        *t = blank;
                    }
                }
            }
            Some(edge_type_ids.as_slice())
        } else {
            None
        };
        let (offsets, targets, tslots) = build_csr(sorted_names.len(), &edges, etypes);
        let name_lookup = sorted_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId(i as u32)))
            .collect();
        let n = sorted_names.len();
        Graph {
            names: sorted_names,
            name_lookup,
            offsets,
            targets,
            node_types: vec![0; n],
            type_names: vec![String::new()],
            edge_types: tslots.map(|t| (t, edge_type_names)),
            labels: None,
        }
    };

    if let Some(tp) = node_type_path {
        apply_node_types(&mut graph, tp)?;
    }
    if let Some(lp) = label_path {
        let labels = load_labels_for(&graph, lp)?;
        graph.labels = Some(labels);
    }

    log::info!("loaded graph: {}", graph.summary());
    Ok(graph)
}

fn apply_node_types(graph: &mut Graph, path: &Path) -> Result<()> {
    let mut pairs: Vec<(NodeId, String)> = Vec::new();
    let mut skipped = 0usize;
    for_each_data_line(path, |lineno, line| {
        let (name, ty) = split_pair(line)
            .ok_or_else(|| Error::parse(path, lineno, "expected `name<TAB>type`"))?;
        match graph.node_by_name(name) {
            Some(id) => pairs.push((id, ty.to_string())),
            None => skipped += 1,
        }
        Ok(())
    })?;
    if skipped > 0 {
        log::warn!(
            "{}: {skipped} type rows name nodes absent from the edge list; skipped",
            path.display()
        );
    }
    let mut type_names: Vec<String> = pairs.iter().map(|(_, t)| t.clone()).collect();
    type_names.sort_unstable();
    type_names.dedup();
    // Untyped nodes keep the reserved empty tag at id 0.
    type_names.insert(0, String::new());
    let lookup: HashMap<&str, u16> = type_names
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i as u16))
        .collect();
    let mut node_types = vec![0u16; graph.num_nodes()];
    for (node, ty) in &pairs {
        let id = lookup[ty.as_str()];
        let prev = node_types[node.index()];
        if prev != 0 && prev != id {
            return Err(Error::validation(format!(
                "node '{}' assigned two different types ('{}' and '{ty}')",
                graph.name(*node),
                type_names[prev as usize],
            )));
        }
        node_types[node.index()] = id;
    }
    graph.node_types = node_types;
    graph.type_names = type_names;
    Ok(())
}

/// Parses a label file into raw (node name, class name) pairs without
/// resolving against a graph. Used by the evaluation CLI, which works from
/// an exported embedding rather than a loaded graph.
pub fn parse_label_file(path: &Path) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for_each_data_line(path, |lineno, line| {
        let (name, class) = split_pair(line)
            .ok_or_else(|| Error::parse(path, lineno, "expected `name<TAB>class`"))?;
        pairs.push((name.to_string(), class.to_string()));
        Ok(())
    })?;
    Ok(pairs)
}

/// Resolves a label file against a graph. Every labeled name must exist.
pub fn load_labels_for(graph: &Graph, path: &Path) -> Result<LabelSet> {
    let pairs = parse_label_file(path)?;
    let mut class_names: Vec<String> = pairs.iter().map(|(_, c)| c.clone()).collect();
    class_names.sort_unstable();
    class_names.dedup();
    let lookup: HashMap<&str, u16> = class_names
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i as u16))
        .collect();
    let mut assignments = Vec::with_capacity(pairs.len());
    for (name, class) in &pairs {
        let node = graph.node_by_name(name).ok_or_else(|| {
            Error::validation(format!(
                "label file {} names node '{name}' absent from the edge list",
                path.display()
            ))
        })?;
        assignments.push((node, lookup[class.as_str()]));
    }
    LabelSet::new(assignments, class_names)
}

fn split_pair(line: &str) -> Option<(&str, &str)> {
    let mut fields = line.split('\t');
    let a = fields.next().filter(|f| !f.is_empty())?;
    let b = fields.next().filter(|f| !f.is_empty())?;
    if fields.next().is_some() {
        return None;
    }
    Some((a, b))
}

fn for_each_data_line(
    path: &Path,
    mut f: impl FnMut(usize, &str) -> Result<()>,
) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        f(i + 1, trimmed)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Binary cache
// ---------------------------------------------------------------------------

const CACHE_MAGIC: &[u8; 4] = b"SGEG";
const CACHE_VERSION: u32 = 1;

impl Graph {
    /// Writes the interned graph to a versioned little-endian binary cache.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let werr = |e: std::io::Error| Error::io(path, e);

        w.write_all(CACHE_MAGIC).map_err(werr)?;
        w.write_all(&CACHE_VERSION.to_le_bytes()).map_err(werr)?;
        w.write_all(&(self.num_nodes() as u64).to_le_bytes()).map_err(werr)?;
        w.write_all(&(self.num_edges() as u64).to_le_bytes()).map_err(werr)?;
        for &off in &self.offsets {
            w.write_all(&(off as u64).to_le_bytes()).map_err(werr)?;
        }
        for &t in &self.targets {
            w.write_all(&t.0.to_le_bytes()).map_err(werr)?;
        }
        for name in &self.names {
            write_str(&mut w, name).map_err(werr)?;
        }
        w.write_all(&(self.type_names.len() as u16).to_le_bytes()).map_err(werr)?;
        for t in &self.type_names {
            write_str(&mut w, t).map_err(werr)?;
        }
        for &t in &self.node_types {
            w.write_all(&t.to_le_bytes()).map_err(werr)?;
        }
        match &self.edge_types {
            None => w.write_all(&[0u8]).map_err(werr)?,
            Some((ids, names)) => {
                w.write_all(&[1u8]).map_err(werr)?;
                w.write_all(&(names.len() as u16).to_le_bytes()).map_err(werr)?;
                for n in names {
                    write_str(&mut w, n).map_err(werr)?;
                }
                for &id in ids {
                    w.write_all(&id.to_le_bytes()).map_err(werr)?;
                }
            }
        }
        match &self.labels {
            None => w.write_all(&[0u8]).map_err(werr)?,
            Some(l) => {
                w.write_all(&[1u8]).map_err(werr)?;
                w.write_all(&(l.class_names.len() as u16).to_le_bytes()).map_err(werr)?;
                for c in &l.class_names {
                    write_str(&mut w, c).map_err(werr)?;
                }
                w.write_all(&(l.assignments.len() as u64).to_le_bytes()).map_err(werr)?;
                for &(n, c) in &l.assignments {
                    w.write_all(&n.0.to_le_bytes()).map_err(werr)?;
                    w.write_all(&c.to_le_bytes()).map_err(werr)?;
                }
            }
        }
        w.flush().map_err(werr)
    }

    /// Reads a graph written by [`Graph::write_cache`].
    pub fn read_cache(path: &Path) -> Result<Graph> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = BufReader::new(file);
        let rerr = |e: std::io::Error| Error::io(path, e);

        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(rerr)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::validation(format!(
                "{} is not a graph cache (bad magic)",
                path.display()
            )));
        }
        let version = read_u32(&mut r).map_err(rerr)?;
        if version != CACHE_VERSION {
            return Err(Error::validation(format!(
                "{}: unsupported cache version {version}",
                path.display()
            )));
        }
        let n = read_u64(&mut r).map_err(rerr)? as usize;
        let m = read_u64(&mut r).map_err(rerr)? as usize;
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(read_u64(&mut r).map_err(rerr)? as usize);
        }
        let mut targets = Vec::with_capacity(m);
        for _ in 0..m {
            targets.push(NodeId(read_u32(&mut r).map_err(rerr)?));
        }
        let mut names = Vec::with_capacity(n);
        for _ in 0..n {
            names.push(read_str(&mut r).map_err(rerr)?);
        }
        let tn = read_u16(&mut r).map_err(rerr)? as usize;
        let mut type_names = Vec::with_capacity(tn);
        for _ in 0..tn {
            type_names.push(read_str(&mut r).map_err(rerr)?);
        }
        let mut node_types = Vec::with_capacity(n);
        for _ in 0..n {
            node_types.push(read_u16(&mut r).map_err(rerr)?);
        }
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag).map_err(rerr)?;
        let edge_types = if flag[0] == 1 {
            let en = read_u16(&mut r).map_err(rerr)? as usize;
            let mut enames = Vec::with_capacity(en);
            for _ in 0..en {
                enames.push(read_str(&mut r).map_err(rerr)?);
            }
            let mut ids = Vec::with_capacity(m);
            for _ in 0..m {
                ids.push(read_u16(&mut r).map_err(rerr)?);
            }
            Some((ids, enames))
        } else {
            None
        };
        r.read_exact(&mut flag).map_err(rerr)?;
        let labels = if flag[0] == 1 {
            let cn = read_u16(&mut r).map_err(rerr)? as usize;
            let mut class_names = Vec::with_capacity(cn);
            for _ in 0..cn {
                class_names.push(read_str(&mut r).map_err(rerr)?);
            }
            let an = read_u64(&mut r).map_err(rerr)? as usize;
            let mut assignments = Vec::with_capacity(an);
            for _ in 0..an {
                let node = NodeId(read_u32(&mut r).map_err(rerr)?);
                let class = read_u16(&mut r).map_err(rerr)?;
                assignments.push((node, class));
            }
            Some(LabelSet::new(assignments, class_names)?)
        } else {
            None
        };

        let name_lookup = names
            .iter()
            .enumerate()
            .map(|(i, nm)| (nm.clone(), NodeId(i as u32)))
            .collect();
        let g = Graph {
            names,
            name_lookup,
            offsets,
            targets,
            node_types,
            type_names,
            edge_types,
            labels,
        };
        g.validate()?;
        Ok(g)
    }

    /// True if the file starts with the graph-cache magic.
    pub fn is_cache_file(path: &Path) -> bool {
        let mut magic = [0u8; 4];
        File::open(path)
            .and_then(|mut f| f.read_exact(&mut magic))
            .map(|_| &magic == CACHE_MAGIC)
            .unwrap_or(false)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_nodes();
        if self.offsets.len() != n + 1 || self.offsets[0] != 0 {
            return Err(Error::validation("corrupt cache: bad offsets".into()));
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::validation(
                "corrupt cache: offsets not monotone".into(),
            ));
        }
        if *self.offsets.last().unwrap() != self.targets.len() {
            return Err(Error::validation("corrupt cache: edge count mismatch".into()));
        }
        if self.targets.iter().any(|t| t.index() >= n) {
            return Err(Error::validation("corrupt cache: target out of range".into()));
        }
        Ok(())
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_str<R: Read>(r: &mut R) -> std::io::Result<String> {
    let len = read_u32(r)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf)
        .map_err(|_| std::io::Error::new(std::io::ErrorKind::InvalidData, "non-UTF-8 string"))
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
