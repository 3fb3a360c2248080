use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::TemporalGraph;
use crate::error::{Error, Result};

/// Random temporal graph: every unordered pair is active at every time-step
/// independently with probability `p`. Deterministic in `seed`.
pub fn generate_random(n: usize, tau: usize, p: f64, seed: u64) -> Result<TemporalGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if tau == 0 {
        return Err(Error::InvalidArgument("tau must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let labels: Vec<usize> = (1..=tau).filter(|_| rng.gen_bool(p)).collect();
            if !labels.is_empty() {
                edges.push((u, v, labels));
            }
        }
    }
    TemporalGraph::new(n, tau, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let empty = generate_random(5, 3, 0.0, 1).unwrap();
        assert!(empty.edges().is_empty());
        let full = generate_random(5, 3, 1.0, 1).unwrap();
        assert_eq!(full.edges().len(), 10);
        assert!(full.edges().iter().all(|e| e.labels == vec![1, 2, 3]));
    }

    #[test]
    fn same_seed_same_graph() {
        let a = generate_random(8, 4, 0.4, 99).unwrap();
        let b = generate_random(8, 4, 0.4, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_random(8, 4, 0.4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(generate_random(5, 3, 1.5, 0).is_err());
        assert!(generate_random(5, 3, -0.1, 0).is_err());
        assert!(generate_random(0, 3, 0.5, 0).is_err());
        assert!(generate_random(5, 0, 0.5, 0).is_err());
    }
}
