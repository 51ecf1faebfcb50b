//! Synthetic Kronecker (RMAT) edge-list generator, Graph500 style:
//! 2^scale vertices, edgefactor * 2^scale undirected edges, skewed quadrant
//! probabilities, and a final random relabeling of vertex IDs.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Graph500 reference initiator probabilities.
pub const DEFAULT_INITIATOR: (f64, f64, f64, f64) = (0.57, 0.19, 0.19, 0.05);

/// Graph500 reference edge factor.
pub const DEFAULT_EDGEFACTOR: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub scale: u32,
    pub edgefactor: usize,
    pub seed: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GeneratorSpec {
    pub fn new(scale: u32, edgefactor: usize, seed: u64) -> Self {
        let (a, b, c, d) = DEFAULT_INITIATOR;
        GeneratorSpec { scale, edgefactor, seed, a, b, c, d }
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.scale
    }

    pub fn edge_count(&self) -> usize {
        self.edgefactor << self.scale
    }

    fn validate(&self) -> Result<()> {
        if self.scale == 0 {
            return Err(Error::InvalidGeneratorSpec("scale must be >= 1".into()));
        }
        if self.edgefactor == 0 {
            return Err(Error::InvalidGeneratorSpec("edgefactor must be >= 1".into()));
        }
        let sum = self.a + self.b + self.c + self.d;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidGeneratorSpec(format!(
                "initiator probabilities sum to {sum}, expected 1"
            )));
        }
        if [self.a, self.b, self.c, self.d].iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidGeneratorSpec(
                "initiator probabilities must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Generate exactly `edgefactor * 2^scale` unordered pairs over
/// `[0, 2^scale)`. Edge i is drawn from an RNG stream keyed on (seed, i), so
/// the output is deterministic and independent of evaluation order. Vertex
/// labels are permuted afterwards with the same seed.
pub fn generate_kronecker(spec: &GeneratorSpec) -> Result<Vec<(usize, usize)>> {
    spec.validate()?;
    // capacity check before any allocation
    if spec.scale >= usize::BITS - 1 {
        return Err(Error::ScaleTooLarge { scale: spec.scale });
    }
    let n = 1usize << spec.scale;
    let edge_count = spec
        .edgefactor
        .checked_shl(spec.scale)
        .filter(|&e| e >> spec.scale == spec.edgefactor)
        .ok_or(Error::ScaleTooLarge { scale: spec.scale })?;

    let ab = spec.a + spec.b;
    let a_frac = spec.a / ab.max(f64::MIN_POSITIVE);
    let cd = spec.c + spec.d;
    let c_frac = spec.c / cd.max(f64::MIN_POSITIVE);

    let mut edges = Vec::with_capacity(edge_count);
    for i in 0..edge_count {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i as u64 + 1);
        let mut u = 0usize;
        let mut v = 0usize;
        for _ in 0..spec.scale {
            let r: f64 = rng.gen();
            let (ub, vb) = if r < ab {
                (0, if rng.gen::<f64>() < a_frac { 0 } else { 1 })
            } else {
                (1, if rng.gen::<f64>() < c_frac { 0 } else { 1 })
            };
            u = (u << 1) | ub;
            v = (v << 1) | vb;
        }
        edges.push((u, v));
    }

    // Graph500 convention: permute vertex labels so that vertex ID carries no
    // information about degree.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perm_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    perm.shuffle(&mut perm_rng);
    for e in &mut edges {
        *e = (perm[e.0], perm[e.1]);
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_and_range() {
        let spec = GeneratorSpec::new(1, 1, 42);
        let edges = generate_kronecker(&spec).unwrap();
        assert_eq!(edges.len(), spec.edge_count());
        assert!(edges.iter().all(|&(u, v)| u < 2 && v < 2));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = GeneratorSpec::new(10, 16, 7);
        let a = generate_kronecker(&spec).unwrap();
        let b = generate_kronecker(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16 << 10);
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_kronecker(&GeneratorSpec::new(10, 16, 1)).unwrap();
        let b = generate_kronecker(&GeneratorSpec::new(10, 16, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn heavy_tailed_degree_distribution() {
        let spec = GeneratorSpec::new(16, 16, 1);
        let edges = generate_kronecker(&spec).unwrap();
        let n = spec.vertex_count();
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let max = *deg.iter().max().unwrap();
        let mut sorted = deg.clone();
        sorted.sort_unstable();
        let median = sorted[n / 2];
        assert!(
            max > 100 * median.max(1),
            "max degree {max} not heavy-tailed vs median {median}"
        );
    }

    #[test]
    fn rejects_bad_spec() {
        let mut spec = GeneratorSpec::new(4, 4, 0);
        spec.a = 0.9;
        assert!(matches!(
            generate_kronecker(&spec),
            Err(Error::InvalidGeneratorSpec(_))
        ));
        assert!(matches!(
            generate_kronecker(&GeneratorSpec::new(usize::BITS - 1, 1, 0)),
            Err(Error::ScaleTooLarge { .. })
        ));
    }
}
