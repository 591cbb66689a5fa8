#![allow(dead_code)]

use alnrepair_core::{
    generate_instance, random_instance, Alignment, GeneratorParams, Instance, MappingId, MappingSet, Ontology,
    RandomParams, Relation,
};
use proptest::prelude::*;

/// Small instances of both generator families.
pub fn small_instance() -> impl Strategy<Value = Instance> {
    prop_oneof![
        (4usize..=30, 0usize..=4, 0usize..=10, any::<u64>()).prop_map(|(n, d, m, seed)| {
            random_instance(&RandomParams {
                classes_per_side: n,
                disjoint_pairs: d,
                mappings: m,
                seed,
            })
            .unwrap()
        }),
        (10usize..=40, 1usize..=4, 2usize..=10, any::<u64>()).prop_map(|(n, d, m, seed)| {
            generate_instance(&GeneratorParams {
                classes_per_side: n,
                max_depth: 4,
                branching: 2.0,
                disjoint_pairs: d,
                mapping_count: m,
                noise_rate: 0.5,
                multi_parent_rate: 0.2,
                seed,
            })
            .unwrap()
        }),
    ]
}

/// Every subset of an alignment when small, else `count` pseudo-random ones
/// (always including the empty and the full subset).
pub fn subsets(al: &Alignment, count: usize, seed: u64) -> Vec<MappingSet> {
    let n = al.len();
    if n <= 10 {
        return (0u32..1 << n)
            .map(|mask| MappingSet::from_ids(n, (0..n as u32).filter(|i| mask >> i & 1 == 1).map(MappingId)))
            .collect();
    }
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut out = vec![MappingSet::empty(n), MappingSet::full(n)];
    while out.len() < count {
        let bits = next();
        out.push(MappingSet::from_ids(
            n,
            (0..n as u32).filter(|i| bits >> i & 1 == 1).map(MappingId),
        ));
    }
    out
}

/// Independent closure: names of both ontologies (sorted jointly), boolean
/// matrix, Floyd–Warshall.
pub struct Closure {
    pub names: Vec<String>,
    pub reach: Vec<Vec<bool>>,
}

impl Closure {
    pub fn new(o1: &Ontology, o2: &Ontology, al: &Alignment, subset: &MappingSet) -> Closure {
        let mut names: Vec<String> = o1.classes().iter().chain(o2.classes()).cloned().collect();
        names.sort();
        let n = names.len();
        let pos = |s: &str| names.binary_search_by(|x| x.as_str().cmp(s)).unwrap();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for o in [o1, o2] {
            for (c, p) in o.subclass_edges() {
                reach[pos(c)][pos(p)] = true;
            }
        }
        for (id, m) in al.iter() {
            if !subset.contains(id) {
                continue;
            }
            let (s, t) = (pos(&m.source), pos(&m.target));
            match m.relation {
                Relation::Equivalent => {
                    reach[s][t] = true;
                    reach[t][s] = true;
                }
                Relation::SubsumedBy => reach[s][t] = true,
                Relation::Subsumes => reach[t][s] = true,
            }
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (cell, &r) in row.iter_mut().zip(&via) {
                    *cell |= r;
                }
            }
        }
        Closure { names, reach }
    }
}

/// Alignment of `confs.len()` unrelated mappings, used for abstract conflict
/// lists that never touch a graph.
pub fn abstract_alignment(confs: &[f64]) -> Alignment {
    Alignment::new(
        confs
            .iter()
            .enumerate()
            .map(|(i, &c)| alnrepair_core::Mapping::new(format!("m{i:02}"), "t", Relation::Equivalent, c))
            .collect(),
    )
    .unwrap()
}

/// Abstract conflict list over at most `max_mappings` mappings with grid
/// confidences.
pub fn abstract_conflicts(
    max_mappings: usize,
    max_sets: usize,
) -> impl Strategy<Value = (Alignment, alnrepair_core::ConflictList)> {
    (2..=max_mappings).prop_flat_map(move |n| {
        let confs = prop::collection::vec(prop::sample::select(vec![0.3, 0.5, 0.6, 0.7, 0.9]), n);
        let sets = prop::collection::vec(prop::collection::btree_set(0..n as u32, 1..=4.min(n)), 1..=max_sets);
        (confs, sets).prop_map(|(confs, sets)| {
            let list = alnrepair_core::ConflictList::from_sets(
                sets.into_iter()
                    .map(|s| s.into_iter().map(MappingId).collect::<Vec<_>>()),
            );
            (abstract_alignment(&confs), list)
        })
    })
}
