//! Sequential BFS oracle and Graph500-style BFS tree validation.
//!
//! The oracle runs on the unpartitioned graph and shares no code with the
//! engine, so it qualifies as an independent check.

use crate::engine::BfsOutput;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::{NO_PARENT, UNREACHED};
use serde::Serialize;
use std::collections::VecDeque;

/// Textbook queue-based BFS levels; unreached vertices get `UNREACHED`.
pub fn sequential_bfs(graph: &Graph, source: usize) -> Result<Vec<u32>> {
    let n = graph.vertex_count();
    if source >= n {
        return Err(Error::VertexOutOfRange {
            index: source,
            vertex_count: n,
        });
    }
    let mut levels = vec![UNREACHED; n];
    levels[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for u in graph.neighbors(v) {
            if levels[u] == UNREACHED {
                levels[u] = levels[v] + 1;
                queue.push_back(u);
            }
        }
    }
    Ok(levels)
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationFailure {
    pub rule: &'static str,
    pub vertex: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            return write!(f, "validation passed");
        }
        writeln!(f, "validation FAILED ({} failures)", self.failures.len())?;
        for fail in &self.failures {
            writeln!(f, "  [{}] vertex {}: {}", fail.rule, fail.vertex, fail.detail)?;
        }
        Ok(())
    }
}

const MAX_FAILURES: usize = 64;

/// Validate a BFS output against the graph and the sequential oracle:
/// root conventions, tree edges exist, parent levels are consistent, levels
/// equal true BFS distances, and unreached vertices carry sentinels.
pub fn validate_tree(graph: &Graph, source: usize, output: &BfsOutput) -> Result<ValidationReport> {
    let n = graph.vertex_count();
    let mut failures = Vec::new();
    let fail = |rule: &'static str, vertex: usize, detail: String, failures: &mut Vec<_>| {
        if failures.len() < MAX_FAILURES {
            failures.push(ValidationFailure { rule, vertex, detail });
        }
    };

    if output.levels.len() != n || output.parents.len() != n {
        return Err(Error::Internal(format!(
            "output arrays sized {}/{}, graph has {n} vertices",
            output.levels.len(),
            output.parents.len()
        )));
    }

    // rule 1: root conventions
    if output.levels[source] != 0 {
        fail("root-level", source, format!("levels[source] = {}", output.levels[source]), &mut failures);
    }
    if output.parents[source] != source {
        fail("root-parent", source, format!("parents[source] = {}", output.parents[source]), &mut failures);
    }

    for v in 0..n {
        let lv = output.levels[v];
        let pv = output.parents[v];
        if lv == UNREACHED {
            // rule 5: sentinel consistency
            if pv != NO_PARENT {
                fail("unreached-parent", v, format!("unreached vertex has parent {pv}"), &mut failures);
            }
            continue;
        }
        if v == source {
            continue;
        }
        if pv == NO_PARENT {
            fail("missing-parent", v, "reached vertex has no parent".into(), &mut failures);
            continue;
        }
        // rule 2: (parent, v) must be an edge
        if !graph.neighbors(pv).any(|u| u == v) {
            fail("tree-edge", v, format!("({pv}, {v}) is not an edge"), &mut failures);
        }
        // rule 3: parent one level up
        let lp = output.levels[pv];
        if lp == UNREACHED || lp + 1 != lv {
            fail(
                "parent-level",
                v,
                format!("levels[{v}] = {lv} but levels[parent {pv}] = {lp}"),
                &mut failures,
            );
        }
    }

    // rule 4: exact distances against the oracle
    let oracle = sequential_bfs(graph, source)?;
    for v in 0..n {
        if output.levels[v] != oracle[v] {
            fail(
                "oracle-distance",
                v,
                format!("level {} != oracle {}", output.levels[v], oracle[v]),
                &mut failures,
            );
        }
    }

    Ok(ValidationReport {
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{bfs, DirectionPolicy};
    use crate::partition::{partition, PartitionSpec};

    fn g1() -> Graph {
        Graph::build_csr(&[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)], 6).unwrap()
    }

    #[test]
    fn oracle_levels_on_g1() {
        let g = g1();
        assert_eq!(sequential_bfs(&g, 0).unwrap(), vec![0, 1, 1, 1, 2, 3]);
        assert_eq!(sequential_bfs(&g, 5).unwrap(), vec![3, 4, 4, 2, 1, 0]);
    }

    #[test]
    fn oracle_on_edgeless_graph() {
        let g = Graph::build_csr(&[], 4).unwrap();
        let levels = sequential_bfs(&g, 2).unwrap();
        assert_eq!(levels, vec![UNREACHED, UNREACHED, 0, UNREACHED]);
        assert!(sequential_bfs(&g, 9).is_err());
    }

    fn correct_output() -> (Graph, BfsOutput) {
        let g = g1();
        let pg = partition(&g, &PartitionSpec::specialized(1, 3)).unwrap();
        let out = bfs(&pg, 0, &DirectionPolicy::default()).unwrap();
        (g, out)
    }

    #[test]
    fn correct_output_passes() {
        let (g, out) = correct_output();
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn corrupted_parent_rejected() {
        let (g, mut out) = correct_output();
        out.parents[4] = 5;
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.rule == "parent-level" && f.vertex == 4));
    }

    #[test]
    fn false_unreached_rejected() {
        let (g, mut out) = correct_output();
        out.levels[5] = UNREACHED;
        out.parents[5] = NO_PARENT;
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.rule == "oracle-distance" && f.vertex == 5));
    }

    #[test]
    fn wrong_level_rejected() {
        let (g, mut out) = correct_output();
        out.levels[2] = 2;
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.rule == "oracle-distance"));
    }

    #[test]
    fn false_reached_rejected() {
        let g = Graph::build_csr(&[(0, 1)], 3).unwrap();
        let pg = partition(&g, &PartitionSpec::host_only()).unwrap();
        let mut out = bfs(&pg, 0, &DirectionPolicy::default()).unwrap();
        out.levels[2] = 5;
        out.parents[2] = 1;
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn non_edge_parent_rejected() {
        let (g, mut out) = correct_output();
        // keep levels consistent but point the parent at a non-neighbor
        out.parents[5] = 0;
        let report = validate_tree(&g, 0, &out).unwrap();
        assert!(report.failures.iter().any(|f| f.rule == "tree-edge" && f.vertex == 5));
    }

    #[test]
    fn report_serializes_both_ways() {
        let (g, mut out) = correct_output();
        out.parents[4] = 5;
        let report = validate_tree(&g, 0, &out).unwrap();
        let text = format!("{report}");
        assert!(text.contains("FAILED"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["passed"], false);
    }
}
