//! Direction-optimized BFS over a partitioned graph, bulk-synchronous.
//!
//! Per level the coordinator (the host partition) picks top-down or
//! bottom-up, every partition runs its kernel, and frontiers are exchanged:
//! top-down pushes newly discovered remote bits to their owners, bottom-up
//! pulls every owner's freshly built frontier before scanning. Parents are
//! kept in per-partition records during the traversal and assembled once at
//! the end.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::partition::{EncodedVertexId, PartitionedGraph};
use crate::{NO_PARENT, UNREACHED};
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepType {
    TopDown,
    BottomUp,
}

impl std::fmt::Display for StepType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepType::TopDown => write!(f, "top-down"),
            StepType::BottomUp => write!(f, "bottom-up"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForceMode {
    /// Never switch; classic top-down BFS.
    TopDownOnly,
    /// Switch to bottom-up once the given level is reached, regardless of
    /// the frontier estimate.
    BottomUpAfterLevel(u32),
}

/// Parameters governing the top-down/bottom-up switches.
#[derive(Clone, Copy, Debug)]
pub struct DirectionPolicy {
    /// Switch to bottom-up when the estimated out-edges of the frontier
    /// reach this fraction of all arcs.
    pub alpha_fraction: f64,
    /// Levels spent bottom-up before permanently returning to top-down.
    pub bottom_up_steps: u32,
    pub force_mode: Option<ForceMode>,
}

impl Default for DirectionPolicy {
    fn default() -> Self {
        DirectionPolicy {
            alpha_fraction: 0.05,
            bottom_up_steps: 3,
            force_mode: None,
        }
    }
}

impl DirectionPolicy {
    pub fn top_down_only() -> Self {
        DirectionPolicy {
            force_mode: Some(ForceMode::TopDownOnly),
            ..Default::default()
        }
    }
}

/// Per-level counters emitted alongside the result.
#[derive(Clone, Debug, Serialize)]
pub struct LevelMetrics {
    pub level: u32,
    pub step_type: StepType,
    pub time_ms: f64,
    /// Neighbor inspections performed by the kernels at this level.
    pub edges_inspected: u64,
    /// Vertices in the frontier processed at this level.
    pub frontier_size: u64,
    /// Mean degree of the frontier vertices at this level.
    pub avg_frontier_degree: f64,
    pub bits_pushed: u64,
    pub bits_pulled: u64,
    /// Degree sum of host-owned vertices in this level's frontier: the
    /// coordinator's switch estimate.
    pub host_frontier_degree_sum: u64,
    /// Degree sum of the whole frontier: the exact estimate, for comparison
    /// against the host-only one.
    pub global_frontier_degree_sum: u64,
}

#[derive(Clone, Debug)]
pub struct BfsOutput {
    /// BFS distance per global vertex, `UNREACHED` if never visited.
    pub levels: Vec<u32>,
    /// BFS tree parent per global vertex (the source is its own parent),
    /// `NO_PARENT` if never visited.
    pub parents: Vec<usize>,
    pub per_level: Vec<LevelMetrics>,
    /// First level executed bottom-up, if any.
    pub switch_level: Option<u32>,
    /// Total time spent in kernels, communication, init, and aggregation.
    pub total_time_ms: f64,
}

impl BfsOutput {
    pub fn total_edges_inspected(&self) -> u64 {
        self.per_level.iter().map(|m| m.edges_inspected).sum()
    }

    pub fn reached_count(&self) -> usize {
        self.levels.iter().filter(|&&l| l != UNREACHED).count()
    }
}

const NO_RECORD: u64 = u64::MAX;

/// Mutable per-partition traversal state. A kernel only ever writes its own
/// `PartitionState`; cross-partition writes happen in the push phase, and
/// cross-partition reads in the pull phase.
pub struct PartitionState {
    pid: usize,
    /// Authoritative visited bits for vertices this partition owns.
    visited: Bitmap,
    /// Dedup cache of remote vertices this partition has already pushed,
    /// indexed by owning partition. Entry `pid` is unused (own vertices go
    /// through `visited`).
    remote_seen: Vec<Bitmap>,
    /// View of each partition's current frontier. `frontier[pid]` is always
    /// authoritative for the owner; remote entries are refreshed by pull.
    frontier: Vec<Bitmap>,
    /// Discoveries of this level, indexed by owning partition.
    next_frontier: Vec<Bitmap>,
    /// Parent records: `parent_records[p][local]` is the encoded ID of the
    /// vertex through which this partition discovered vertex (p, local).
    parent_records: Vec<Vec<u64>>,
    /// Level per owned vertex.
    level_of: Vec<u32>,
    inspections: u64,
    kernel_time_ms: f64,
}

impl PartitionState {
    fn new(pg: &PartitionedGraph, pid: usize) -> Self {
        let sizes: Vec<usize> = pg
            .partitions()
            .iter()
            .map(|p| p.local_vertex_count())
            .collect();
        let own = sizes[pid];
        PartitionState {
            pid,
            visited: Bitmap::new(own),
            remote_seen: sizes.iter().map(|&s| Bitmap::new(s)).collect(),
            frontier: sizes.iter().map(|&s| Bitmap::new(s)).collect(),
            next_frontier: sizes.iter().map(|&s| Bitmap::new(s)).collect(),
            parent_records: sizes.iter().map(|&s| vec![NO_RECORD; s]).collect(),
            level_of: vec![UNREACHED; own],
            inspections: 0,
            kernel_time_ms: 0.0,
        }
    }

    pub fn frontier(&self, p: usize) -> &Bitmap {
        &self.frontier[p]
    }

    pub fn next_frontier(&self, p: usize) -> &Bitmap {
        &self.next_frontier[p]
    }

    pub fn visited(&self) -> &Bitmap {
        &self.visited
    }
}

/// Expand the local frontier: inspect every neighbor of every frontier
/// vertex, mark unvisited ones (locally for owned vertices, in the dedup
/// cache for remote ones) and record the discovering parent.
pub fn top_down_step(pg: &PartitionedGraph, st: &mut PartitionState, level: u32) -> u64 {
    let part = &pg.partitions()[st.pid];
    let mut inspections = 0u64;
    for v in st.frontier[st.pid].iter_ones().collect::<Vec<_>>() {
        let parent = EncodedVertexId::new(st.pid, v);
        for &nbr in part.neighbors(v) {
            inspections += 1;
            let (p, l) = (nbr.partition(), nbr.local());
            if p == st.pid {
                if !st.visited.get(l) {
                    st.visited.set(l);
                    st.level_of[l] = level + 1;
                    st.next_frontier[p].set(l);
                    st.parent_records[p][l] = encode_raw(parent);
                }
            } else if !st.remote_seen[p].get(l) {
                st.remote_seen[p].set(l);
                st.next_frontier[p].set(l);
                st.parent_records[p][l] = encode_raw(parent);
            }
        }
    }
    st.inspections += inspections;
    inspections
}

/// Scan unvisited local vertices against the (pulled) global frontier; a
/// vertex joins the next frontier at the first neighbor found in the
/// frontier and stops scanning there.
pub fn bottom_up_step(pg: &PartitionedGraph, st: &mut PartitionState, level: u32) -> u64 {
    let part = &pg.partitions()[st.pid];
    let pid = st.pid;
    let mut inspections = 0u64;
    for v in 0..part.local_vertex_count() {
        if st.visited.get(v) {
            continue;
        }
        for &nbr in part.neighbors(v) {
            inspections += 1;
            if st.frontier[nbr.partition()].get(nbr.local()) {
                st.visited.set(v);
                st.level_of[v] = level + 1;
                st.next_frontier[pid].set(v);
                st.parent_records[pid][v] = encode_raw(nbr);
                break;
            }
        }
    }
    st.inspections += inspections;
    inspections
}

#[inline]
fn encode_raw(id: EncodedVertexId) -> u64 {
    ((id.partition() as u64) << 48) | id.local() as u64
}

#[inline]
fn decode_raw(raw: u64) -> EncodedVertexId {
    EncodedVertexId::new((raw >> 48) as usize, (raw & ((1 << 48) - 1)) as usize)
}

/// OR-merge the pusher's remote discoveries into the owner's frontier and
/// visited bits. Bits the owner has already visited are dropped so a vertex
/// can only ever enter one frontier. Returns the bit count transferred.
pub fn push_frontiers(
    states: &mut [PartitionState],
    src: usize,
    dst: usize,
    level: u32,
) -> u64 {
    debug_assert_ne!(src, dst);
    // split_at_mut to hold both states
    let (a, b) = if src < dst {
        let (lo, hi) = states.split_at_mut(dst);
        (&mut lo[src], &mut hi[0])
    } else {
        let (lo, hi) = states.split_at_mut(src);
        (&mut hi[0], &mut lo[dst])
    };
    let (pusher, owner) = (a, b);
    let transferred = pusher.next_frontier[dst].count_ones() as u64;
    for l in pusher.next_frontier[dst].iter_ones() {
        if !owner.visited.get(l) {
            owner.visited.set(l);
            owner.level_of[l] = level + 1;
            owner.frontier[dst].set(l);
        }
    }
    transferred
}

/// Overwrite this partition's view of `remote`'s frontier with the frontier
/// `remote` built last level. Returns the bit count transferred.
pub fn pull_frontiers(states: &mut [PartitionState], pid: usize, remote: usize) -> u64 {
    debug_assert_ne!(pid, remote);
    let (a, b) = if pid < remote {
        let (lo, hi) = states.split_at_mut(remote);
        (&mut lo[pid], &hi[0])
    } else {
        let (lo, hi) = states.split_at_mut(pid);
        (&mut hi[0], &lo[remote])
    };
    let (puller, owner) = (a, b);
    puller.frontier[remote].copy_from(&owner.next_frontier[remote]);
    owner.next_frontier[remote].count_ones() as u64
}

/// Coordinator inputs: host-local information only.
#[derive(Clone, Copy, Debug)]
pub struct CoordinatorState {
    /// Degree sum of host-owned vertices in the current frontier.
    pub host_frontier_degree_sum: u64,
    pub total_arcs: u64,
    /// Bottom-up levels run so far.
    pub bottom_up_levels_run: u32,
    /// Set once the traversal has returned to top-down; no re-switch.
    pub returned_to_top_down: bool,
}

/// Pick the step type for the upcoming level. Host-local estimate only: in
/// top-down mode, switch when the host frontier degree sum reaches
/// `alpha_fraction` of all arcs; in bottom-up mode, return to top-down
/// permanently after `bottom_up_steps` levels.
pub fn decide_direction(
    coord: &CoordinatorState,
    policy: &DirectionPolicy,
    current: StepType,
    level: u32,
) -> StepType {
    match policy.force_mode {
        Some(ForceMode::TopDownOnly) => return StepType::TopDown,
        Some(ForceMode::BottomUpAfterLevel(k)) => {
            if coord.returned_to_top_down {
                return StepType::TopDown;
            }
            if level >= k {
                return if coord.bottom_up_levels_run < policy.bottom_up_steps {
                    StepType::BottomUp
                } else {
                    StepType::TopDown
                };
            }
            return StepType::TopDown;
        }
        None => {}
    }
    if coord.returned_to_top_down {
        return StepType::TopDown;
    }
    match current {
        StepType::TopDown => {
            let threshold = policy.alpha_fraction * coord.total_arcs as f64;
            if coord.host_frontier_degree_sum as f64 >= threshold
                && coord.host_frontier_degree_sum > 0
            {
                StepType::BottomUp
            } else {
                StepType::TopDown
            }
        }
        StepType::BottomUp => {
            if coord.bottom_up_levels_run < policy.bottom_up_steps {
                StepType::BottomUp
            } else {
                StepType::TopDown
            }
        }
    }
}

/// Assemble the global parent array from the per-partition discovery
/// records. A vertex discovered by several partitions at the same level gets
/// the record with the lowest (discovering partition, parent global ID).
pub fn aggregate_parents(
    pg: &PartitionedGraph,
    states: &[PartitionState],
    levels: &[u32],
    source: usize,
) -> Result<Vec<usize>> {
    let mut parents = vec![NO_PARENT; pg.vertex_count()];
    parents[source] = source;
    for (owner_pid, owner) in pg.partitions().iter().enumerate() {
        for local in 0..owner.local_vertex_count() {
            let v = owner.global_of(local);
            if v == source || levels[v] == UNREACHED {
                continue;
            }
            let mut best: Option<(usize, usize)> = None; // (discoverer, parent global)
            for (discoverer, st) in states.iter().enumerate() {
                let raw = st.parent_records[owner_pid][local];
                if raw == NO_RECORD {
                    continue;
                }
                let parent = pg.decode(decode_raw(raw));
                // stale records from late re-discoveries are filtered here
                if levels[parent] != levels[v] - 1 {
                    continue;
                }
                let cand = (discoverer, parent);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
            match best {
                Some((_, parent)) => parents[v] = parent,
                None => {
                    return Err(Error::Internal(format!(
                        "reached vertex {v} (level {}) has no parent record",
                        levels[v]
                    )))
                }
            }
        }
    }
    Ok(parents)
}

/// Run kernels for all partitions, possibly across worker threads. Each
/// partition is processed by exactly one worker, so counters stay
/// deterministic regardless of the worker count.
fn run_kernels(
    pg: &PartitionedGraph,
    states: &mut [PartitionState],
    step: StepType,
    level: u32,
    workers: usize,
) {
    let kernel = |st: &mut PartitionState| {
        let t = Instant::now();
        match step {
            StepType::TopDown => top_down_step(pg, st, level),
            StepType::BottomUp => bottom_up_step(pg, st, level),
        };
        st.kernel_time_ms = t.elapsed().as_secs_f64() * 1e3;
    };
    if workers <= 1 || states.len() <= 1 {
        states.iter_mut().for_each(kernel);
    } else {
        let chunk = states.len().div_ceil(workers);
        std::thread::scope(|s| {
            for group in states.chunks_mut(chunk) {
                s.spawn(move || group.iter_mut().for_each(kernel));
            }
        });
    }
}

/// Direction-optimized BFS from `source`. `workers` bounds the number of
/// concurrent partition workers; it affects timing only, never results.
pub fn bfs_with_workers(
    pg: &PartitionedGraph,
    source: usize,
    policy: &DirectionPolicy,
    workers: usize,
) -> Result<BfsOutput> {
    let n = pg.vertex_count();
    if source >= n {
        return Err(Error::VertexOutOfRange {
            index: source,
            vertex_count: n,
        });
    }

    let t_total = Instant::now();
    let part_count = pg.partition_count();
    let mut states: Vec<PartitionState> =
        (0..part_count).map(|p| PartitionState::new(pg, p)).collect();

    // seed the source into its owner's frontier
    let src_enc = pg.encode(source);
    {
        let st = &mut states[src_enc.partition()];
        st.visited.set(src_enc.local());
        st.level_of[src_enc.local()] = 0;
        st.frontier[src_enc.partition()].set(src_enc.local());
        // keep next_frontier consistent so a level-0 pull would see it
        st.next_frontier[src_enc.partition()].set(src_enc.local());
    }

    let mut per_level = Vec::new();
    let mut step = StepType::TopDown;
    let mut coord = CoordinatorState {
        host_frontier_degree_sum: 0,
        total_arcs: pg.total_arcs(),
        bottom_up_levels_run: 0,
        returned_to_top_down: false,
    };
    let mut switch_level = None;
    let mut level = 0u32;

    loop {
        // frontier profile of the level about to run; the host share doubles
        // as the coordinator's switch estimate
        let mut frontier_size = 0u64;
        let mut global_degree_sum = 0u64;
        let mut host_degree_sum = 0u64;
        for (p, st) in states.iter().enumerate() {
            for l in st.frontier[p].iter_ones() {
                frontier_size += 1;
                let deg = pg.partitions()[p].local_degree(l) as u64;
                global_degree_sum += deg;
                if p == 0 {
                    host_degree_sum += deg;
                }
            }
        }
        if frontier_size == 0 {
            break;
        }
        coord.host_frontier_degree_sum = host_degree_sum;

        let next = decide_direction(&coord, policy, step, level);
        if next == StepType::BottomUp {
            if switch_level.is_none() {
                switch_level = Some(level);
            }
            coord.bottom_up_levels_run += 1;
        } else if step == StepType::BottomUp {
            coord.returned_to_top_down = true;
        }
        step = next;

        let mut bits_pushed = 0u64;
        let mut bits_pulled = 0u64;

        if step == StepType::BottomUp {
            // pull: every partition collects the global frontier
            for pid in 0..part_count {
                for remote in 0..part_count {
                    if remote != pid {
                        bits_pulled += pull_frontiers(&mut states, pid, remote);
                    }
                }
            }
            // barrier; pulls consumed last level's next_frontier, safe to reset
            for st in states.iter_mut() {
                let pid = st.pid;
                st.next_frontier[pid].clear();
            }
        } else {
            for st in states.iter_mut() {
                for nf in st.next_frontier.iter_mut() {
                    nf.clear();
                }
            }
        }

        run_kernels(pg, &mut states, step, level, workers);
        let kernel_ms = states
            .iter()
            .map(|s| s.kernel_time_ms)
            .fold(0.0f64, f64::max);
        let edges_inspected: u64 = {
            let so_far: u64 = per_level.iter().map(|m: &LevelMetrics| m.edges_inspected).sum();
            states.iter().map(|s| s.inspections).sum::<u64>() - so_far
        };

        let t_comm = Instant::now();
        // consolidate: the processed frontier is consumed, the owner's new
        // frontier is its own discoveries plus anything pushed to it
        for st in states.iter_mut() {
            let pid = st.pid;
            st.frontier[pid].clear();
            let nf = st.next_frontier[pid].clone();
            st.frontier[pid].union_with(&nf);
        }
        if step == StepType::TopDown {
            for src in 0..part_count {
                for dst in 0..part_count {
                    if src != dst {
                        bits_pushed += push_frontiers(&mut states, src, dst, level);
                    }
                }
            }
        }
        // owner's next_frontier mirrors the complete new frontier so the
        // next level's pull sees pushed bits too
        for st in states.iter_mut() {
            let pid = st.pid;
            let f = st.frontier[pid].clone();
            st.next_frontier[pid].copy_from(&f);
        }
        let comm_ms = t_comm.elapsed().as_secs_f64() * 1e3;

        per_level.push(LevelMetrics {
            level,
            step_type: step,
            time_ms: kernel_ms + comm_ms,
            edges_inspected,
            frontier_size,
            avg_frontier_degree: global_degree_sum as f64 / frontier_size as f64,
            bits_pushed,
            bits_pulled,
            host_frontier_degree_sum: host_degree_sum,
            global_frontier_degree_sum: global_degree_sum,
        });
        level += 1;
    }

    // assemble global levels then parents
    let mut levels = vec![UNREACHED; n];
    for (p, st) in states.iter().enumerate() {
        for (local, &lv) in st.level_of.iter().enumerate() {
            if lv != UNREACHED {
                levels[pg.partitions()[p].global_of(local)] = lv;
            }
        }
    }
    let parents = aggregate_parents(pg, &states, &levels, source)?;

    Ok(BfsOutput {
        levels,
        parents,
        per_level,
        switch_level,
        total_time_ms: t_total.elapsed().as_secs_f64() * 1e3,
    })
}

/// Single-worker direction-optimized BFS.
pub fn bfs(pg: &PartitionedGraph, source: usize, policy: &DirectionPolicy) -> Result<BfsOutput> {
    bfs_with_workers(pg, source, policy, 1)
}
