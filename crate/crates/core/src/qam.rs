//! Static device model: physical qubits, undirected coupling graph, gate
//! durations and the all-pairs hop-distance matrix.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::commute::{CommutationTable, ExtraEntry, TableError};
use crate::gate::GateKind;

#[derive(Debug, Clone, PartialEq)]
pub enum QamError {
    NoQubits,
    DisconnectedGraph,
    BadEdge(usize, usize),
    MissingDuration(GateKind),
    NonPositiveDuration(GateKind),
    Commutation(TableError),
}

impl fmt::Display for QamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QamError::NoQubits => f.write_str("architecture has no qubits"),
            QamError::DisconnectedGraph => f.write_str("coupling graph is disconnected"),
            QamError::BadEdge(a, b) => write!(f, "invalid coupling edge ({a}, {b})"),
            QamError::MissingDuration(k) => write!(f, "no duration configured for `{k}`"),
            QamError::NonPositiveDuration(k) => write!(f, "duration of `{k}` must be positive"),
            QamError::Commutation(e) => write!(f, "commutation table: {e}"),
        }
    }
}

impl core::error::Error for QamError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    num_qubits: usize,
    /// Normalized `(min, max)` pairs, sorted and deduplicated.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    /// Builds the graph, rejecting self-loops and out-of-range endpoints.
    /// Connectivity is checked separately by [`all_pairs_distances`].
    pub fn new(
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, QamError> {
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a == b || a >= num_qubits || b >= num_qubits {
                return Err(QamError::BadEdge(a, b));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &norm {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(CouplingGraph {
            num_qubits,
            edges: norm,
            adjacency,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }
}

/// Gate kind to duration in cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationMap(BTreeMap<GateKind, u64>);

impl DurationMap {
    pub fn empty() -> Self {
        DurationMap(BTreeMap::new())
    }

    pub fn with(mut self, kind: GateKind, cycles: u64) -> Self {
        self.0.insert(kind, cycles);
        self
    }

    pub fn set(&mut self, kind: GateKind, cycles: u64) {
        self.0.insert(kind, cycles);
    }

    pub fn get(&self, kind: GateKind) -> Option<u64> {
        self.0.get(&kind).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, u64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// Checks that CX and SWAP are present and that every entry except
    /// BARRIER is positive.
    pub fn check(&self) -> Result<(), QamError> {
        for kind in [GateKind::Cx, GateKind::Swap] {
            if self.get(kind).is_none() {
                return Err(QamError::MissingDuration(kind));
            }
        }
        for (kind, cycles) in self.iter() {
            if cycles == 0 && kind != GateKind::Barrier {
                return Err(QamError::NonPositiveDuration(kind));
            }
        }
        Ok(())
    }

    /// Fills kinds that have no entry from the default table.
    pub fn fill_defaults(mut self) -> Self {
        for (kind, cycles) in DurationMap::default().iter() {
            self.0.entry(kind).or_insert(cycles);
        }
        self
    }
}

/// Single-qubit gates and MEASURE 1 cycle, CX 2, SWAP 6 (three CX), BARRIER 0.
impl Default for DurationMap {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for kind in GateKind::ALL {
            let cycles = match kind {
                GateKind::Cx => 2,
                GateKind::Swap => 6,
                GateKind::Barrier => 0,
                _ => 1,
            };
            map.insert(kind, cycles);
        }
        DurationMap(map)
    }
}

/// Hop distances between physical qubits, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.data[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.data[a * self.n..(a + 1) * self.n]
    }
}

/// BFS from every vertex. Fails if any pair is unreachable.
pub fn all_pairs_distances(graph: &CouplingGraph) -> Result<DistanceMatrix, QamError> {
    let n = graph.num_qubits();
    let mut data = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for src in 0..n {
        let row = &mut data[src * n..(src + 1) * n];
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in graph.neighbors(u) {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        if row.contains(&u32::MAX) {
            return Err(QamError::DisconnectedGraph);
        }
    }
    Ok(DistanceMatrix { n, data })
}

/// The immutable device description handed to the router.
#[derive(Debug, Clone, PartialEq)]
pub struct Architecture {
    pub name: String,
    pub graph: CouplingGraph,
    pub durations: DurationMap,
    pub distances: DistanceMatrix,
    pub commutation: CommutationTable,
    extra: Vec<ExtraEntry>,
}

impl Architecture {
    pub fn new(
        name: impl Into<String>,
        graph: CouplingGraph,
        durations: DurationMap,
    ) -> Result<Self, QamError> {
        if graph.num_qubits() == 0 {
            return Err(QamError::NoQubits);
        }
        durations.check()?;
        let distances = all_pairs_distances(&graph)?;
        Ok(Architecture {
            name: name.into(),
            graph,
            durations,
            distances,
            commutation: CommutationTable::baseline(),
            extra: Vec::new(),
        })
    }

    /// Merges extra commutation entries after checking each against the
    /// operator definitions.
    pub fn with_commutation_extra(mut self, extra: Vec<ExtraEntry>) -> Result<Self, QamError> {
        let mut table = CommutationTable::baseline();
        for e in &extra {
            table.insert_checked(*e).map_err(QamError::Commutation)?;
        }
        self.commutation = table;
        self.extra = extra;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn duration_of(&self, kind: GateKind) -> Result<u64, QamError> {
        self.durations
            .get(kind)
            .ok_or(QamError::MissingDuration(kind))
    }

    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.distances.get(a, b)
    }

    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.graph.has_edge(a, b)
    }

    /// Serializable description from which [`load_architecture`] rebuilds `self`.
    pub fn to_config(&self) -> ArchitectureConfig {
        ArchitectureConfig {
            name: self.name.clone(),
            num_qubits: self.num_qubits(),
            edges: self.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            durations: self.durations.iter().map(|(k, v)| (k, v as i64)).collect(),
            commutation_extra: self.extra.clone(),
        }
    }
}

/// The on-disk architecture document.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArchitectureConfig {
    pub name: String,
    pub num_qubits: usize,
    pub edges: Vec<[usize; 2]>,
    pub durations: BTreeMap<GateKind, i64>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub commutation_extra: Vec<ExtraEntry>,
}

/// Validates a config and computes its distance matrix. Kinds absent from
/// the duration table take their default, except CX and SWAP which must be
/// given explicitly.
pub fn load_architecture(config: &ArchitectureConfig) -> Result<Architecture, QamError> {
    let mut durations = DurationMap::empty();
    for (&kind, &cycles) in &config.durations {
        if cycles < 0 || (cycles == 0 && kind != GateKind::Barrier) {
            return Err(QamError::NonPositiveDuration(kind));
        }
        durations.set(kind, cycles as u64);
    }
    durations.check()?;
    let graph = CouplingGraph::new(config.num_qubits, config.edges.iter().map(|e| (e[0], e[1])))?;
    Architecture::new(config.name.clone(), graph, durations.fill_defaults())?
        .with_commutation_extra(config.commutation_extra.clone())
}

/// `rows x cols` nearest-neighbour grid; qubit `r * cols + c` sits at row `r`, column `c`.
pub fn grid_architecture(
    rows: usize,
    cols: usize,
    durations: DurationMap,
) -> Result<Architecture, QamError> {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if c + 1 < cols {
                edges.push((q, q + 1));
            }
            if r + 1 < rows {
                edges.push((q, q + cols));
            }
        }
    }
    let graph = CouplingGraph::new(rows * cols, edges)?;
    Architecture::new(format!("grid:{rows}x{cols}"), graph, durations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_config() -> ArchitectureConfig {
        ArchitectureConfig {
            name: "fig2-square".into(),
            num_qubits: 4,
            edges: vec![[0, 1], [0, 2], [1, 3], [2, 3]],
            durations: [(GateKind::T, 1), (GateKind::Cx, 2), (GateKind::Swap, 6)]
                .into_iter()
                .collect(),
            commutation_extra: Vec::new(),
        }
    }

    #[test]
    fn loads_square_and_computes_distances() {
        let arch = load_architecture(&square_config()).unwrap();
        assert_eq!(arch.name, "fig2-square");
        assert_eq!(arch.distance(0, 3), 2);
        assert_eq!(arch.distance(0, 1), 1);
        assert_eq!(arch.distance(1, 2), 2);
        assert!(!arch.is_coupled(0, 3));
        assert!(arch.is_coupled(3, 1));
        assert_eq!(arch.duration_of(GateKind::T), Ok(1));
        assert_eq!(arch.duration_of(GateKind::Cx), Ok(2));
        assert_eq!(arch.duration_of(GateKind::Swap), Ok(6));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = square_config();
        c.edges.push([0, 0]);
        assert_eq!(load_architecture(&c), Err(QamError::BadEdge(0, 0)));

        let mut c = square_config();
        c.edges.push([0, 9]);
        assert_eq!(load_architecture(&c), Err(QamError::BadEdge(0, 9)));

        let mut c = square_config();
        c.durations.remove(&GateKind::Swap);
        assert_eq!(
            load_architecture(&c),
            Err(QamError::MissingDuration(GateKind::Swap))
        );

        let mut c = square_config();
        c.durations.insert(GateKind::H, 0);
        assert_eq!(
            load_architecture(&c),
            Err(QamError::NonPositiveDuration(GateKind::H))
        );

        let mut c = square_config();
        c.edges = vec![[0, 1], [2, 3]];
        assert_eq!(load_architecture(&c), Err(QamError::DisconnectedGraph));
    }

    #[test]
    fn grid_edge_counts() {
        let g = grid_architecture(6, 6, DurationMap::default()).unwrap();
        assert_eq!(g.num_qubits(), 36);
        assert_eq!(g.graph.edges().len(), 60);
        assert_eq!(g.distance(0, 35), 10);

        let g = grid_architecture(2, 8, DurationMap::default()).unwrap();
        assert_eq!(g.num_qubits(), 16);
        assert_eq!(g.graph.edges().len(), 22);

        let g = grid_architecture(1, 1, DurationMap::default()).unwrap();
        assert_eq!(g.num_qubits(), 1);
        assert!(g.graph.edges().is_empty());
    }

    #[test]
    fn path_distances() {
        let g = CouplingGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let d = all_pairs_distances(&g).unwrap();
        assert_eq!(d.get(0, 2), 2);
        for i in 0..3 {
            assert_eq!(d.get(i, i), 0);
        }
    }

    #[test]
    fn default_durations() {
        let d = DurationMap::default();
        assert_eq!(d.get(GateKind::H), Some(1));
        assert_eq!(d.get(GateKind::Measure), Some(1));
        assert_eq!(d.get(GateKind::Cx), Some(2));
        assert_eq!(d.get(GateKind::Swap), Some(6));
        assert_eq!(d.get(GateKind::Barrier), Some(0));
    }

    #[test]
    fn config_round_trip() {
        let arch = load_architecture(&square_config()).unwrap();
        let again = load_architecture(&arch.to_config()).unwrap();
        assert_eq!(arch, again);
    }
}
