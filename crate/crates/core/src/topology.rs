//! Heavy-hex coupling graphs and hammer neighborhoods.
//!
//! A hammer centre is a degree-2 connector qubit whose two neighbors are
//! both row-middle qubits, i.e. each has exactly two lateral row neighbors
//! besides the centre, numbered one below and one above it. The two rows `(left, middle, right)` around such a
//! centre carry the hammer gates.

use std::collections::BTreeSet;
use std::path::Path;

use thiserror::Error;

/// Qubit index on the device.
pub type Qubit = usize;

const EAGLE127: &str = include_str!("../data/eagle127.edges");

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("unknown device map `{0}`")]
    UnknownMap(String),
    #[error("failed to read edge list {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: malformed edge `{text}`")]
    Malformed { line: usize, text: String },
    #[error("self-loop on qubit {0}")]
    SelfLoop(Qubit),
    #[error("line {line}: self-loop on qubit {qubit}")]
    SelfLoopAt { line: usize, qubit: Qubit },
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(Qubit, Qubit),
    #[error("qubit {qubit} out of range for a {count}-qubit device")]
    OutOfRange { qubit: Qubit, count: usize },
    #[error("qubit {qubit} has degree {degree}, heavy-hex allows at most 3")]
    DegreeTooHigh { qubit: Qubit, degree: usize },
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("qubit {0} is not a hammer centre")]
    NotACentre(Qubit),
    #[error("rows overlap on qubit {0}")]
    OverlappingRows(Qubit),
}

/// Undirected device connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    qubit_count: usize,
    edges: BTreeSet<(Qubit, Qubit)>,
    adjacency: Vec<Vec<Qubit>>,
}

impl CouplingGraph {
    /// Builds a validated graph. Edges may be given in either orientation,
    /// but each unordered pair only once.
    pub fn new(
        qubit_count: usize,
        pairs: impl IntoIterator<Item = (Qubit, Qubit)>,
    ) -> Result<Self, TopologyError> {
        let mut edges = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                return Err(TopologyError::SelfLoop(a));
            }
            for q in [a, b] {
                if q >= qubit_count {
                    return Err(TopologyError::OutOfRange {
                        qubit: q,
                        count: qubit_count,
                    });
                }
            }
            let key = (a.min(b), a.max(b));
            if !edges.insert(key) {
                return Err(TopologyError::DuplicateEdge(key.0, key.1));
            }
        }

        let mut adjacency = vec![Vec::new(); qubit_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        if let Some((qubit, list)) = adjacency.iter().enumerate().find(|(_, l)| l.len() > 3) {
            return Err(TopologyError::DegreeTooHigh {
                qubit,
                degree: list.len(),
            });
        }

        let graph = Self {
            qubit_count,
            edges,
            adjacency,
        };
        if !graph.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(graph)
    }

    /// Parses the edge-list text format: one `a b` pair per line, `#` comments.
    /// The qubit count is one more than the largest id mentioned.
    pub fn from_edge_list(text: &str) -> Result<Self, TopologyError> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.starts_with('#') || trimmed.trim().is_empty() {
                continue;
            }
            let malformed = || TopologyError::Malformed {
                line,
                text: trimmed.to_string(),
            };
            let (a, b) = trimmed.split_once(' ').ok_or_else(malformed)?;
            let a: Qubit = parse_id(a).ok_or_else(malformed)?;
            let b: Qubit = parse_id(b).ok_or_else(malformed)?;
            if a == b {
                return Err(TopologyError::SelfLoopAt { line, qubit: a });
            }
            pairs.push((a, b));
        }
        let count = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::new(count, pairs)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Qubit, Qubit)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: Qubit, b: Qubit) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted neighbor list; empty for out-of-range ids.
    pub fn neighbors(&self, q: Qubit) -> &[Qubit] {
        self.adjacency.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, q: Qubit) -> usize {
        self.neighbors(q).len()
    }

    /// Hop distance between two qubits, `None` if unreachable.
    pub fn distance(&self, from: Qubit, to: Qubit) -> Option<usize> {
        if from >= self.qubit_count || to >= self.qubit_count {
            return None;
        }
        let mut dist = vec![usize::MAX; self.qubit_count];
        let mut queue = std::collections::VecDeque::from([from]);
        dist[from] = 0;
        while let Some(q) = queue.pop_front() {
            if q == to {
                return Some(dist[q]);
            }
            for &n in &self.adjacency[q] {
                if dist[n] == usize::MAX {
                    dist[n] = dist[q] + 1;
                    queue.push_back(n);
                }
            }
        }
        None
    }

    fn is_connected(&self) -> bool {
        if self.qubit_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.qubit_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut visited = 1;
        while let Some(q) = stack.pop() {
            for &n in &self.adjacency[q] {
                if !seen[n] {
                    seen[n] = true;
                    visited += 1;
                    stack.push(n);
                }
            }
        }
        visited == self.qubit_count
    }

    /// Row triple `(left, middle, right)` hanging off `centre` through
    /// `middle`, if `middle` has exactly two lateral neighbors and they are
    /// its row neighbors. Heavy-hex maps number each row with consecutive
    /// ids, which is what tells a row apart from a connector; the lattice
    /// alone is locally symmetric.
    fn row_through(&self, centre: Qubit, middle: Qubit) -> Option<[Qubit; 3]> {
        let lateral: Vec<Qubit> = self
            .neighbors(middle)
            .iter()
            .copied()
            .filter(|&n| n != centre)
            .collect();
        match lateral[..] {
            [left, right]
                if left + 1 == middle
                    && right == middle + 1
                    && !self.has_edge(left, centre)
                    && !self.has_edge(right, centre) =>
            {
                Some([left, middle, right])
            }
            _ => None,
        }
    }
}

fn parse_id(s: &str) -> Option<Qubit> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Loads a shipped map by name (`eagle127`) or an edge-list file by path.
pub fn load_device_map(name: &str) -> Result<CouplingGraph, TopologyError> {
    match name {
        "eagle127" => CouplingGraph::from_edge_list(EAGLE127),
        _ => {
            let path = Path::new(name);
            if !path.is_file() {
                return Err(TopologyError::UnknownMap(name.to_string()));
            }
            let text = std::fs::read_to_string(path).map_err(|e| TopologyError::Io {
                path: name.to_string(),
                reason: e.to_string(),
            })?;
            CouplingGraph::from_edge_list(&text)
        }
    }
}

/// A centre qubit and the two row triples around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HammerNeighborhood {
    pub center: Qubit,
    pub top_row: [Qubit; 3],
    pub bottom_row: [Qubit; 3],
}

impl HammerNeighborhood {
    /// The six hammer qubits, top row then bottom row, left to right.
    pub fn qubits(&self) -> [Qubit; 6] {
        let [a, b, c] = self.top_row;
        let [d, e, f] = self.bottom_row;
        [a, b, c, d, e, f]
    }

    pub fn middles(&self) -> [Qubit; 2] {
        [self.top_row[1], self.bottom_row[1]]
    }

    pub fn row_edges(&self) -> [Qubit; 4] {
        [
            self.top_row[0],
            self.top_row[2],
            self.bottom_row[0],
            self.bottom_row[2],
        ]
    }
}

/// Extracts the hammer neighborhood of `center`. The top row is the one
/// whose middle qubit has the lower id; rows are ordered by ascending id.
pub fn get_nodes(
    graph: &CouplingGraph,
    center: Qubit,
) -> Result<HammerNeighborhood, TopologyError> {
    let not_centre = || TopologyError::NotACentre(center);
    let &[m1, m2] = graph.neighbors(center) else {
        return Err(not_centre());
    };
    let top = graph.row_through(center, m1).ok_or_else(not_centre)?;
    let bottom = graph.row_through(center, m2).ok_or_else(not_centre)?;

    let mut all: Vec<Qubit> = top.iter().chain(&bottom).copied().collect();
    all.push(center);
    all.sort_unstable();
    all.dedup();
    if all.len() != 7 {
        return Err(not_centre());
    }
    Ok(HammerNeighborhood {
        center,
        top_row: top,
        bottom_row: bottom,
    })
}

/// All qubits that pass the hammer-centre test, ascending.
pub fn enumerate_centers(graph: &CouplingGraph) -> Vec<Qubit> {
    (0..graph.qubit_count())
        .filter(|&q| get_nodes(graph, q).is_ok())
        .collect()
}

/// Directed CX pairs for the 30-gate configuration: top-row pairs, then
/// bottom-row pairs, then top→bottom and finally bottom→top cross pairs.
/// Each block is lexicographic by (source, target).
pub fn get_nodes_combination(
    top: [Qubit; 3],
    bottom: [Qubit; 3],
) -> Result<Vec<(Qubit, Qubit)>, TopologyError> {
    if let Some(&q) = top.iter().find(|q| bottom.contains(q)) {
        return Err(TopologyError::OverlappingRows(q));
    }
    for row in [top, bottom] {
        if row[0] == row[1] || row[1] == row[2] || row[0] == row[2] {
            let dup = if row[0] == row[1] || row[0] == row[2] {
                row[0]
            } else {
                row[1]
            };
            return Err(TopologyError::OverlappingRows(dup));
        }
    }

    let same_row = |row: [Qubit; 3]| {
        let mut sorted = row;
        sorted.sort_unstable();
        let mut pairs = Vec::with_capacity(6);
        for &a in &sorted {
            for &b in &sorted {
                if a != b {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    };
    let cross = |src: [Qubit; 3], dst: [Qubit; 3]| {
        let (mut src, mut dst) = (src, dst);
        src.sort_unstable();
        dst.sort_unstable();
        src.iter()
            .flat_map(|&a| dst.iter().map(move |&b| (a, b)))
            .collect::<Vec<_>>()
    };

    let mut pairs = same_row(top);
    pairs.extend(same_row(bottom));
    pairs.extend(cross(top, bottom));
    pairs.extend(cross(bottom, top));
    Ok(pairs)
}
