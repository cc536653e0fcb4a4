use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// Reserved byte used to separate node labels in the concatenated node text.
/// It is rejected in every parsed label and query sequence.
pub const DELIMITER: u8 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Gfa,
    Tsv,
}

/// A node-labeled DAG with non-empty labels.
///
/// Node ids are densified to `0..node_count()` in input order; the original
/// string ids are kept for all external I/O. The structure is immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDag {
    names: Vec<String>,
    labels: Vec<Vec<u8>>,
    /// Edges in input order, used for canonical serialization.
    edge_list: Vec<(u32, u32)>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    topo: Vec<u32>,
    rank: Vec<u32>,
}

impl LabeledDag {
    /// Builds and validates a DAG from original-id nodes and edges.
    pub fn new(nodes: Vec<(String, Vec<u8>)>, edges: Vec<(String, String)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Invalid("graph must have at least one node".into()));
        }
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut names = Vec::with_capacity(nodes.len());
        let mut labels = Vec::with_capacity(nodes.len());
        for (name, label) in nodes {
            if label.is_empty() {
                return Err(Error::EmptyLabel(name));
            }
            if label.contains(&DELIMITER) {
                return Err(Error::DelimiterInInput(format!("label of node {name}")));
            }
            if index.insert(name.clone(), names.len() as u32).is_some() {
                return Err(Error::DuplicateSegment(name));
            }
            names.push(name);
            labels.push(label);
        }
        let mut edge_list = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (from, to) in edges {
            let &u = index
                .get(&from)
                .ok_or_else(|| Error::UnknownNode(from.clone()))?;
            let &v = index
                .get(&to)
                .ok_or_else(|| Error::UnknownNode(to.clone()))?;
            if u == v {
                return Err(Error::SelfLoop(from));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(from, to));
            }
            edge_list.push((u, v));
        }
        let n = names.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &edge_list {
            out[u as usize].push(v);
            inn[v as usize].push(u);
        }
        for adj in out.iter_mut().chain(inn.iter_mut()) {
            adj.sort_unstable();
        }
        let topo = toposort(n, &out, &inn)?;
        let mut rank = vec![0u32; n];
        for (pos, &v) in topo.iter().enumerate() {
            rank[v as usize] = pos as u32;
        }
        Ok(LabeledDag {
            names,
            labels,
            edge_list,
            out,
            inn,
            topo,
            rank,
        })
    }

    /// Parses a graph from text in the given format.
    pub fn parse(text: &str, format: GraphFormat) -> Result<Self> {
        match format {
            GraphFormat::Gfa => parse_gfa(text),
            GraphFormat::Tsv => parse_tsv(text),
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn label(&self, v: u32) -> &[u8] {
        &self.labels[v as usize]
    }

    pub fn label_len(&self, v: u32) -> usize {
        self.labels[v as usize].len()
    }

    pub fn total_label_len(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.inn[v as usize]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edge_list
    }

    /// Nodes in topological order; ties are broken by ascending node id.
    pub fn topological_order(&self) -> &[u32] {
        &self.topo
    }

    pub fn topo_rank(&self, v: u32) -> u32 {
        self.rank[v as usize]
    }

    /// Canonical TSV serialization: `N <id> <label>` lines in id order, then
    /// `E <from> <to>` lines in input order.
    pub fn to_canonical_tsv(&self) -> String {
        let mut s = String::new();
        for (name, label) in self.names.iter().zip(&self.labels) {
            s.push_str("N\t");
            s.push_str(name);
            s.push('\t');
            s.push_str(&String::from_utf8_lossy(label));
            s.push('\n');
        }
        for &(u, v) in &self.edge_list {
            s.push_str("E\t");
            s.push_str(&self.names[u as usize]);
            s.push('\t');
            s.push_str(&self.names[v as usize]);
            s.push('\n');
        }
        s
    }
}

/// Kahn's algorithm with a min-heap so equal-depth ties resolve to the
/// smallest node id.
fn toposort(n: usize, out: &[Vec<u32>], inn: &[Vec<u32>]) -> Result<Vec<u32>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut indeg: Vec<usize> = inn.iter().map(|e| e.len()).collect();
    let mut heap: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&v| indeg[v as usize] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &out[v as usize] {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() != n {
        return Err(Error::CycleDetected);
    }
    Ok(order)
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_gfa(text: &str) -> Result<LabeledDag> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line);
        let err = |msg: String| Error::Parse {
            file: "<gfa>".into(),
            line: no + 1,
            msg,
        };
        match fields[0] {
            "S" => {
                if fields.len() != 3 {
                    return Err(err(format!(
                        "S line must have 3 fields, got {}",
                        fields.len()
                    )));
                }
                nodes.push((fields[1].to_string(), fields[2].as_bytes().to_vec()));
            }
            "L" => {
                if fields.len() != 6 {
                    return Err(err(format!(
                        "L line must have 6 fields, got {}",
                        fields.len()
                    )));
                }
                if fields[2] != "+" || fields[4] != "+" {
                    return Err(err("only '+' orientations are supported".into()));
                }
                if fields[5] != "0M" {
                    return Err(err("only 0M overlaps are supported".into()));
                }
                edges.push((fields[1].to_string(), fields[3].to_string()));
            }
            other => {
                return Err(err(format!("unsupported record type '{other}'")));
            }
        }
    }
    LabeledDag::new(nodes, edges)
}

fn parse_tsv(text: &str) -> Result<LabeledDag> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line);
        let err = |msg: String| Error::Parse {
            file: "<tsv>".into(),
            line: no + 1,
            msg,
        };
        match fields[0] {
            "N" => {
                if fields.len() == 2 {
                    // Node line without a label field.
                    return Err(Error::EmptyLabel(fields[1].to_string()));
                }
                if fields.len() != 3 {
                    return Err(err(format!(
                        "N line must have 3 fields, got {}",
                        fields.len()
                    )));
                }
                nodes.push((fields[1].to_string(), fields[2].as_bytes().to_vec()));
            }
            "E" => {
                if fields.len() != 3 {
                    return Err(err(format!(
                        "E line must have 3 fields, got {}",
                        fields.len()
                    )));
                }
                edges.push((fields[1].to_string(), fields[2].to_string()));
            }
            other => {
                return Err(err(format!("unsupported record type '{other}'")));
            }
        }
    }
    LabeledDag::new(nodes, edges)
}

/// A named query sequence. The sequence never contains the delimiter byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub name: String,
    pub seq: Vec<u8>,
}

impl Query {
    pub fn new(name: impl Into<String>, seq: impl Into<Vec<u8>>) -> Result<Self> {
        let name = name.into();
        let seq = seq.into();
        if seq.is_empty() {
            return Err(Error::Invalid(format!("query {name} has empty sequence")));
        }
        if seq.contains(&DELIMITER) {
            return Err(Error::DelimiterInInput(format!("query {name}")));
        }
        Ok(Query { name, seq })
    }
}

/// Parses FASTA: `>` header lines start a record, sequence lines concatenate.
pub fn parse_fasta(text: &str) -> Result<Vec<Query>> {
    let mut queries = Vec::new();
    let mut name: Option<String> = None;
    let mut seq: Vec<u8> = Vec::new();
    let mut flush = |name: &mut Option<String>, seq: &mut Vec<u8>| -> Result<()> {
        if let Some(n) = name.take() {
            queries.push(Query::new(n, std::mem::take(seq))?);
        }
        Ok(())
    };
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if let Some(header) = line.strip_prefix('>') {
            flush(&mut name, &mut seq)?;
            name = Some(header.split_whitespace().next().unwrap_or("").to_string());
        } else if !line.trim().is_empty() {
            if name.is_none() {
                return Err(Error::Parse {
                    file: "<fasta>".into(),
                    line: no + 1,
                    msg: "sequence data before first header".into(),
                });
            }
            seq.extend(line.trim().bytes());
        }
    }
    flush(&mut name, &mut seq)?;
    Ok(queries)
}

/// A substring of the graph: offsets are 1-based, the path is a sequence of
/// dense node ids joined by edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSubstring {
    pub start: u32,
    pub path: Vec<u32>,
    pub end: u32,
}

impl GraphSubstring {
    pub fn validate(&self, dag: &LabeledDag) -> Result<()> {
        if self.path.is_empty() {
            return Err(Error::InvalidOffsets);
        }
        let first = self.path[0];
        let last = *self.path.last().unwrap();
        if self.start < 1
            || self.start as usize > dag.label_len(first)
            || self.end < 1
            || self.end as usize > dag.label_len(last)
        {
            return Err(Error::InvalidOffsets);
        }
        if self.path.len() == 1 && self.start > self.end {
            return Err(Error::InvalidOffsets);
        }
        for w in self.path.windows(2) {
            if !dag.out_neighbors(w[0]).contains(&w[1]) {
                return Err(Error::InvalidOffsets);
            }
        }
        Ok(())
    }

    /// The label spelled by this graph substring.
    pub fn spell(&self, dag: &LabeledDag) -> Vec<u8> {
        let mut s = Vec::new();
        for (idx, &v) in self.path.iter().enumerate() {
            let label = dag.label(v);
            let lo = if idx == 0 { self.start as usize - 1 } else { 0 };
            let hi = if idx + 1 == self.path.len() {
                self.end as usize
            } else {
                label.len()
            };
            s.extend_from_slice(&label[lo..hi]);
        }
        s
    }
}

/// Left and right extensions of a graph substring: the symbols that can
/// immediately precede (follow) it over all incident paths. Either set may be
/// empty at a source (sink).
pub fn extensions(dag: &LabeledDag, gs: &GraphSubstring) -> Result<(BTreeSet<u8>, BTreeSet<u8>)> {
    gs.validate(dag)?;
    let first = gs.path[0];
    let last = *gs.path.last().unwrap();
    let left = if gs.start > 1 {
        std::iter::once(dag.label(first)[gs.start as usize - 2]).collect()
    } else {
        dag.in_neighbors(first)
            .iter()
            .map(|&u| *dag.label(u).last().unwrap())
            .collect()
    };
    let right = if (gs.end as usize) < dag.label_len(last) {
        std::iter::once(dag.label(last)[gs.end as usize]).collect()
    } else {
        dag.out_neighbors(last)
            .iter()
            .map(|&v| dag.label(v)[0])
            .collect()
    };
    Ok((left, right))
}
