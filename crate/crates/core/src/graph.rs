//! Compressed-sparse-row graph. Each undirected edge is stored as two
//! directed arcs, so `degree(v)` counts incident arcs and the degree sum is
//! twice the undirected edge count.

use crate::error::{Error, Result};

/// Neighbor storage, 32- or 64-bit per entry depending on vertex count.
#[derive(Clone, Debug)]
enum NeighborStore {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

impl NeighborStore {
    #[inline]
    fn get(&self, i: usize) -> usize {
        match self {
            NeighborStore::Narrow(v) => v[i] as usize,
            NeighborStore::Wide(v) => v[i] as usize,
        }
    }

    fn len(&self) -> usize {
        match self {
            NeighborStore::Narrow(v) => v.len(),
            NeighborStore::Wide(v) => v.len(),
        }
    }
}

/// Immutable undirected graph in CSR form.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    arc_offsets: Vec<u64>,
    neighbors: NeighborStore,
}

impl Graph {
    /// Build a CSR graph from unordered vertex pairs. Each pair {u, v}
    /// contributes arcs u->v and v->u (a self-loop contributes two identical
    /// arcs). Duplicate edges are retained; adjacency order within a vertex
    /// is the input encounter order.
    pub fn build_csr(edges: &[(usize, usize)], vertex_count: usize) -> Result<Graph> {
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::EndpointOutOfRange { u, v, vertex_count });
            }
        }

        let arc_count = edges.len().checked_mul(2).expect("arc count overflow");
        let mut degrees = vec![0u64; vertex_count];
        for &(u, v) in edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }

        let mut arc_offsets = vec![0u64; vertex_count + 1];
        for v in 0..vertex_count {
            arc_offsets[v + 1] = arc_offsets[v] + degrees[v];
        }

        let narrow = vertex_count <= u32::MAX as usize;
        let mut cursor: Vec<u64> = arc_offsets[..vertex_count].to_vec();
        let neighbors = if narrow {
            let mut nbrs = vec![0u32; arc_count];
            for &(u, v) in edges {
                nbrs[cursor[u] as usize] = v as u32;
                cursor[u] += 1;
                nbrs[cursor[v] as usize] = u as u32;
                cursor[v] += 1;
            }
            NeighborStore::Narrow(nbrs)
        } else {
            let mut nbrs = vec![0u64; arc_count];
            for &(u, v) in edges {
                nbrs[cursor[u] as usize] = v as u64;
                cursor[u] += 1;
                nbrs[cursor[v] as usize] = u as u64;
                cursor[v] += 1;
            }
            NeighborStore::Wide(nbrs)
        };

        Ok(Graph {
            vertex_count,
            arc_offsets,
            neighbors,
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of stored arcs (2x the undirected edge count).
    #[inline]
    pub fn arc_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Number of undirected edges.
    #[inline]
    pub fn undirected_edge_count(&self) -> usize {
        self.arc_count() / 2
    }

    pub fn arc_offsets(&self) -> &[u64] {
        &self.arc_offsets
    }

    /// Incident arc count of `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.vertex_count {
            return Err(Error::VertexOutOfRange {
                index: v,
                vertex_count: self.vertex_count,
            });
        }
        Ok((self.arc_offsets[v + 1] - self.arc_offsets[v]) as usize)
    }

    /// Like `degree` but panics on out-of-range; for hot loops.
    #[inline]
    pub fn degree_unchecked(&self, v: usize) -> usize {
        (self.arc_offsets[v + 1] - self.arc_offsets[v]) as usize
    }

    /// Neighbors of `v` in storage order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.arc_offsets[v] as usize;
        let end = self.arc_offsets[v + 1] as usize;
        (start..end).map(move |i| self.neighbors.get(i))
    }
}
