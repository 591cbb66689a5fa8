//! Benchmark fixtures.

use alnrepair_core::{generate_instance, GeneratorParams, Instance};

/// Broad tree with sparse cross-links and many wrong mappings; yields a few
/// hundred conflict sets at 10k classes per side.
pub fn conflict_heavy(classes_per_side: usize, mappings: usize) -> Instance {
    generate_instance(&GeneratorParams {
        classes_per_side,
        max_depth: 8,
        branching: 3.0,
        disjoint_pairs: 35,
        mapping_count: mappings,
        noise_rate: 0.5,
        multi_parent_rate: 0.002,
        seed: 1,
    })
    .expect("valid generator parameters")
}

/// Long chains with few conflicts, where fragment extraction dominates.
pub fn chain_heavy(classes_per_side: usize) -> Instance {
    generate_instance(&GeneratorParams {
        classes_per_side,
        max_depth: 200,
        branching: 1.05,
        disjoint_pairs: 50,
        mapping_count: 200,
        noise_rate: 0.2,
        multi_parent_rate: 0.05,
        seed: 1,
    })
    .expect("valid generator parameters")
}
