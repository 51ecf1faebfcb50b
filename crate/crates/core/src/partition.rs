//! Splitting a graph into role-tagged partitions.
//!
//! The specialized strategy assigns the lowest-degree vertices to the
//! accelerator partitions (round-robin, up to a per-partition arc capacity)
//! and everything else to the host, so the host ends up owning the
//! high-degree vertices. Neighbor references inside a partition carry the
//! owning partition ID so a kernel can tell local from remote targets.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::io::Write;
use std::path::Path;

const LOCAL_BITS: u32 = 48;
const LOCAL_MASK: u64 = (1 << LOCAL_BITS) - 1;

/// (partition_id, local_index) packed into a u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodedVertexId(u64);

impl EncodedVertexId {
    #[inline]
    pub fn new(partition: usize, local: usize) -> Self {
        debug_assert!(partition < (1 << 16));
        debug_assert!((local as u64) <= LOCAL_MASK);
        EncodedVertexId(((partition as u64) << LOCAL_BITS) | local as u64)
    }

    #[inline]
    pub fn partition(self) -> usize {
        (self.0 >> LOCAL_BITS) as usize
    }

    #[inline]
    pub fn local(self) -> usize {
        (self.0 & LOCAL_MASK) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionRole {
    Host,
    Accelerator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionStrategy {
    Specialized,
    Random,
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionSpec {
    pub strategy: PartitionStrategy,
    pub accelerator_count: usize,
    /// Maximum arcs per accelerator partition; proxies accelerator memory.
    pub accelerator_capacity: u64,
    pub seed: u64,
}

impl PartitionSpec {
    pub fn host_only() -> Self {
        PartitionSpec {
            strategy: PartitionStrategy::Specialized,
            accelerator_count: 0,
            accelerator_capacity: 0,
            seed: 0,
        }
    }

    pub fn specialized(accelerator_count: usize, accelerator_capacity: u64) -> Self {
        PartitionSpec {
            strategy: PartitionStrategy::Specialized,
            accelerator_count,
            accelerator_capacity,
            seed: 0,
        }
    }

    pub fn random(accelerator_count: usize, accelerator_capacity: u64, seed: u64) -> Self {
        PartitionSpec {
            strategy: PartitionStrategy::Random,
            accelerator_count,
            accelerator_capacity,
            seed,
        }
    }
}

/// One partition: a local CSR slice whose neighbor entries are encoded IDs.
#[derive(Clone, Debug)]
pub struct Partition {
    pub role: PartitionRole,
    offsets: Vec<u64>,
    neighbors: Vec<EncodedVertexId>,
    local_to_global: Vec<usize>,
    boundary_arcs: u64,
}

impl Partition {
    #[inline]
    pub fn local_vertex_count(&self) -> usize {
        self.local_to_global.len()
    }

    #[inline]
    pub fn arc_count(&self) -> u64 {
        self.neighbors.len() as u64
    }

    pub fn boundary_arcs(&self) -> u64 {
        self.boundary_arcs
    }

    #[inline]
    pub fn local_degree(&self, local: usize) -> usize {
        (self.offsets[local + 1] - self.offsets[local]) as usize
    }

    #[inline]
    pub fn neighbors(&self, local: usize) -> &[EncodedVertexId] {
        let start = self.offsets[local] as usize;
        let end = self.offsets[local + 1] as usize;
        &self.neighbors[start..end]
    }

    #[inline]
    pub fn global_of(&self, local: usize) -> usize {
        self.local_to_global[local]
    }

    pub fn globals(&self) -> &[usize] {
        &self.local_to_global
    }
}

/// A partitioned graph: partition 0 is the host, the rest are accelerators.
#[derive(Clone, Debug)]
pub struct PartitionedGraph {
    partitions: Vec<Partition>,
    global_to_encoded: Vec<EncodedVertexId>,
    total_arcs: u64,
}

impl PartitionedGraph {
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition_count(&self) -> usize {
        self.partitions.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.global_to_encoded.len()
    }

    pub fn total_arcs(&self) -> u64 {
        self.total_arcs
    }

    #[inline]
    pub fn encode(&self, global: usize) -> EncodedVertexId {
        self.global_to_encoded[global]
    }

    #[inline]
    pub fn decode(&self, id: EncodedVertexId) -> usize {
        self.partitions[id.partition()].local_to_global[id.local()]
    }

    /// Degree of a global vertex; every arc of a vertex lives in its owner
    /// partition, so the local degree is the global degree.
    #[inline]
    pub fn global_degree(&self, global: usize) -> usize {
        let enc = self.global_to_encoded[global];
        self.partitions[enc.partition()].local_degree(enc.local())
    }

    /// CSV dump "global_id,partition_id,local_index", for debugging.
    pub fn write_partition_map(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| {
            Error::Io {
                path: path.display().to_string(),
                source: e,
            }
        })?);
        writeln!(w, "global_id,partition_id,local_index").ok();
        for (g, enc) in self.global_to_encoded.iter().enumerate() {
            writeln!(w, "{g},{},{}", enc.partition(), enc.local()).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
        }
        Ok(())
    }
}

/// Assign every vertex to a partition per `spec` and build the local CSRs.
pub fn partition(graph: &Graph, spec: &PartitionSpec) -> Result<PartitionedGraph> {
    if spec.accelerator_count > 0 && spec.accelerator_capacity == 0 {
        return Err(Error::InvalidPartitionSpec(
            "accelerator_capacity must be > 0 when accelerator_count > 0".into(),
        ));
    }
    if spec.accelerator_count >= (1 << 16) {
        return Err(Error::InvalidPartitionSpec("too many partitions".into()));
    }

    let n = graph.vertex_count();
    let part_count = spec.accelerator_count + 1;
    let assignment = match spec.strategy {
        PartitionStrategy::Specialized => assign_specialized(graph, spec),
        PartitionStrategy::Random => assign_random(graph, spec),
    };

    // local IDs within a partition follow ascending global ID
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); part_count];
    for v in 0..n {
        members[assignment[v] as usize].push(v);
    }
    for (p, m) in members.iter().enumerate().skip(1) {
        if m.is_empty() {
            eprintln!("warning: accelerator partition {p} is empty (capacity too small)");
        }
    }

    let mut global_to_encoded = vec![EncodedVertexId::new(0, 0); n];
    for (p, m) in members.iter().enumerate() {
        for (local, &g) in m.iter().enumerate() {
            global_to_encoded[g] = EncodedVertexId::new(p, local);
        }
    }

    let mut partitions = Vec::with_capacity(part_count);
    for (p, m) in members.iter().enumerate() {
        let mut offsets = Vec::with_capacity(m.len() + 1);
        offsets.push(0u64);
        let mut neighbors = Vec::new();
        let mut boundary_arcs = 0u64;
        for &g in m {
            for u in graph.neighbors(g) {
                let enc = global_to_encoded[u];
                if enc.partition() != p {
                    boundary_arcs += 1;
                }
                neighbors.push(enc);
            }
            offsets.push(neighbors.len() as u64);
        }
        partitions.push(Partition {
            role: if p == 0 {
                PartitionRole::Host
            } else {
                PartitionRole::Accelerator
            },
            offsets,
            neighbors,
            local_to_global: m.clone(),
            boundary_arcs,
        });
    }

    Ok(PartitionedGraph {
        partitions,
        global_to_encoded,
        total_arcs: graph.arc_count() as u64,
    })
}

fn assign_specialized(graph: &Graph, spec: &PartitionSpec) -> Vec<u16> {
    let n = graph.vertex_count();
    let mut assignment = vec![0u16; n];
    if spec.accelerator_count == 0 {
        return assignment;
    }

    // ascending (degree, global id); degree-0 vertices fill first for free
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&v| (graph.degree_unchecked(v), v));

    let mut arcs = vec![0u64; spec.accelerator_count];
    let mut rr = 0usize;
    for v in order {
        let deg = graph.degree_unchecked(v) as u64;
        let mut placed = false;
        for step in 0..spec.accelerator_count {
            let p = (rr + step) % spec.accelerator_count;
            if arcs[p] + deg <= spec.accelerator_capacity {
                arcs[p] += deg;
                assignment[v] = (p + 1) as u16;
                rr = (p + 1) % spec.accelerator_count;
                placed = true;
                break;
            }
        }
        if !placed {
            // degrees only grow from here on, so everything left is host
            break;
        }
    }
    assignment
}

fn assign_random(graph: &Graph, spec: &PartitionSpec) -> Vec<u16> {
    let n = graph.vertex_count();
    let mut assignment = vec![0u16; n];
    if spec.accelerator_count == 0 {
        return assignment;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut arcs = vec![0u64; spec.accelerator_count];
    for v in 0..n {
        let p = rng.gen_range(0..=spec.accelerator_count);
        if p > 0 {
            let deg = graph.degree_unchecked(v) as u64;
            if arcs[p - 1] + deg <= spec.accelerator_capacity {
                arcs[p - 1] += deg;
                assignment[v] = p as u16;
            }
            // over capacity: falls back to host
        }
    }
    assignment
}

/// Permute the local IDs of partition `pid` to descending local degree
/// (stable). Neighbor references in every partition are rewritten through the
/// permutation; the structure is unchanged up to relabeling.
pub fn reorder_local_vertices(pg: &mut PartitionedGraph, pid: usize) {
    let part = &pg.partitions[pid];
    let m = part.local_vertex_count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&l| Reverse(part.local_degree(l)));
    // order[new] = old
    let mut old_to_new = vec![0usize; m];
    for (new, &old) in order.iter().enumerate() {
        old_to_new[old] = new;
    }

    let part = &mut pg.partitions[pid];
    let mut offsets = Vec::with_capacity(m + 1);
    offsets.push(0u64);
    let mut neighbors = Vec::with_capacity(part.neighbors.len());
    let mut local_to_global = Vec::with_capacity(m);
    for &old in &order {
        neighbors.extend_from_slice(part.neighbors(old));
        offsets.push(neighbors.len() as u64);
        local_to_global.push(part.local_to_global[old]);
    }
    part.offsets = offsets;
    part.neighbors = neighbors;
    part.local_to_global = local_to_global;

    for p in &mut pg.partitions {
        for nbr in &mut p.neighbors {
            if nbr.partition() == pid {
                *nbr = EncodedVertexId::new(pid, old_to_new[nbr.local()]);
            }
        }
    }
    for enc in &mut pg.global_to_encoded {
        if enc.partition() == pid {
            *enc = EncodedVertexId::new(pid, old_to_new[enc.local()]);
        }
    }
}

pub fn reorder_all_partitions(pg: &mut PartitionedGraph) {
    for pid in 0..pg.partition_count() {
        reorder_local_vertices(pg, pid);
    }
}

/// Sort every adjacency list by descending global degree of the target, ties
/// by ascending global ID. Shortens bottom-up scans: high-degree neighbors
/// are the most likely to already sit in the frontier.
pub fn sort_adjacency_by_degree(pg: &mut PartitionedGraph) {
    let mut global_degree = vec![0u32; pg.vertex_count()];
    for part in &pg.partitions {
        for (local, &g) in part.local_to_global.iter().enumerate() {
            global_degree[g] = part.local_degree(local) as u32;
        }
    }
    let decode: Vec<Vec<usize>> = pg
        .partitions
        .iter()
        .map(|p| p.local_to_global.clone())
        .collect();
    for part in &mut pg.partitions {
        for l in 0..part.local_vertex_count() {
            let start = part.offsets[l] as usize;
            let end = part.offsets[l + 1] as usize;
            part.neighbors[start..end].sort_unstable_by_key(|&enc| {
                let g = decode[enc.partition()][enc.local()];
                (Reverse(global_degree[g]), g)
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Graph {
        Graph::build_csr(&[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)], 6).unwrap()
    }

    fn members(pg: &PartitionedGraph, p: usize) -> Vec<usize> {
        pg.partitions()[p].globals().to_vec()
    }

    #[test]
    fn g1_specialized_one_accelerator() {
        let pg = partition(&g1(), &PartitionSpec::specialized(1, 3)).unwrap();
        assert_eq!(pg.partition_count(), 2);
        assert_eq!(members(&pg, 0), vec![0, 3, 4]);
        assert_eq!(members(&pg, 1), vec![1, 2, 5]);
        assert_eq!(pg.partitions()[1].arc_count(), 3);
        assert_eq!(pg.partitions()[0].role, PartitionRole::Host);
        assert_eq!(pg.partitions()[1].role, PartitionRole::Accelerator);
    }

    #[test]
    fn zero_accelerators_is_single_partition() {
        let pg = partition(&g1(), &PartitionSpec::host_only()).unwrap();
        assert_eq!(pg.partition_count(), 1);
        assert_eq!(pg.partitions()[0].local_vertex_count(), 6);
        assert_eq!(pg.partitions()[0].arc_count(), 10);
        assert_eq!(pg.partitions()[0].boundary_arcs(), 0);
    }

    #[test]
    fn mappings_are_mutual_inverses() {
        let pg = partition(&g1(), &PartitionSpec::specialized(2, 2)).unwrap();
        for g in 0..6 {
            assert_eq!(pg.decode(pg.encode(g)), g);
        }
        let total: u64 = pg.partitions().iter().map(|p| p.arc_count()).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn degree_boundary_property() {
        let pg = partition(&g1(), &PartitionSpec::specialized(1, 3)).unwrap();
        let max_accel = pg.partitions()[1]
            .globals()
            .iter()
            .map(|&g| pg.global_degree(g))
            .max()
            .unwrap();
        let min_host = pg.partitions()[0]
            .globals()
            .iter()
            .map(|&g| pg.global_degree(g))
            .min()
            .unwrap();
        assert!(max_accel <= min_host);
    }

    #[test]
    fn random_respects_capacity() {
        let g = g1();
        let pg = partition(&g, &PartitionSpec::random(2, 3, 99)).unwrap();
        for p in &pg.partitions()[1..] {
            assert!(p.arc_count() <= 3);
        }
        let mut all: Vec<usize> = pg
            .partitions()
            .iter()
            .flat_map(|p| p.globals().iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let g = g1();
        let a = partition(&g, &PartitionSpec::random(2, 4, 7)).unwrap();
        let b = partition(&g, &PartitionSpec::random(2, 4, 7)).unwrap();
        for p in 0..a.partition_count() {
            assert_eq!(members(&a, p), members(&b, p));
        }
    }

    #[test]
    fn reorder_sorts_by_descending_degree() {
        let mut pg = partition(&g1(), &PartitionSpec::specialized(1, 3)).unwrap();
        reorder_local_vertices(&mut pg, 0);
        // host {0,3,4} has degrees 3,2,2; stable sort keeps [0,3,4]
        assert_eq!(members(&pg, 0), vec![0, 3, 4]);
        let degs: Vec<usize> = (0..3).map(|l| pg.partitions()[0].local_degree(l)).collect();
        assert_eq!(degs, vec![3, 2, 2]);
        for g in 0..6 {
            assert_eq!(pg.decode(pg.encode(g)), g);
        }
    }

    #[test]
    fn reorder_single_vertex_partition_unchanged() {
        let g = Graph::build_csr(&[(0, 1)], 2).unwrap();
        let mut pg = partition(&g, &PartitionSpec::specialized(1, 1)).unwrap();
        let before = members(&pg, 1);
        reorder_local_vertices(&mut pg, 1);
        assert_eq!(members(&pg, 1), before);
    }

    #[test]
    fn reorder_preserves_degree_multiset() {
        let mut pg = partition(&g1(), &PartitionSpec::specialized(1, 3)).unwrap();
        let mut before: Vec<usize> = (0..3).map(|l| pg.partitions()[0].local_degree(l)).collect();
        reorder_local_vertices(&mut pg, 0);
        let mut after: Vec<usize> = (0..3).map(|l| pg.partitions()[0].local_degree(l)).collect();
        before.sort_unstable();
        after.sort_unstable();
        assert_eq!(before, after);
    }

    #[test]
    fn adjacency_sort_orders_by_global_degree() {
        let mut pg = partition(&g1(), &PartitionSpec::host_only()).unwrap();
        sort_adjacency_by_degree(&mut pg);
        let part = &pg.partitions()[0];
        // vertex 4: neighbors {3 (deg 2), 5 (deg 1)} -> [3, 5]
        let v4 = pg.encode(4).local();
        let nbrs: Vec<usize> = part.neighbors(v4).iter().map(|&e| pg.decode(e)).collect();
        assert_eq!(nbrs, vec![3, 5]);
        // vertex 1: singleton list stays [0]
        let v1 = pg.encode(1).local();
        let nbrs: Vec<usize> = part.neighbors(v1).iter().map(|&e| pg.decode(e)).collect();
        assert_eq!(nbrs, vec![0]);
    }

    #[test]
    fn adjacency_sort_is_non_increasing_everywhere() {
        let edges: Vec<(usize, usize)> = (0..50).map(|i| (i % 10, (i * 7 + 3) % 40)).collect();
        let g = Graph::build_csr(&edges, 40).unwrap();
        let mut pg = partition(&g, &PartitionSpec::specialized(2, 20)).unwrap();
        sort_adjacency_by_degree(&mut pg);
        for part in pg.partitions() {
            for l in 0..part.local_vertex_count() {
                let degs: Vec<usize> = part
                    .neighbors(l)
                    .iter()
                    .map(|&e| pg.global_degree(pg.decode(e)))
                    .collect();
                for w in degs.windows(2) {
                    assert!(w[0] >= w[1]);
                }
            }
        }
    }

    #[test]
    fn rejects_zero_capacity_with_accelerators() {
        let err = partition(&g1(), &PartitionSpec::specialized(1, 0)).unwrap_err();
        assert!(matches!(err, Error::InvalidPartitionSpec(_)));
    }
}
