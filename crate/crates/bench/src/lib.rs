//! Shared helpers for the benchmark targets.

use nkstar_core::{GraphParams, NodeId, NodeLabel, SplitMix64};

/// Draws `count` distinct ordered pairs with the deterministic sampler.
pub fn sample_pairs(params: &GraphParams, count: usize, seed: u64) -> Vec<(NodeLabel, NodeLabel)> {
    let node_count = params.node_count().expect("desk-scale instance");
    let mut rng = SplitMix64::new(seed);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let s = (rng.next_u64() % node_count as u64) as usize;
        let t = (rng.next_u64() % node_count as u64) as usize;
        if s != t {
            pairs.push((
                params.unrank(NodeId(s)).unwrap(),
                params.unrank(NodeId(t)).unwrap(),
            ));
        }
    }
    pairs
}
