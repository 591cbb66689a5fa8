mod common;

use alnrepair_core::oracle::exhaustive_incoherence_with;
use alnrepair_core::{
    disjoint_conflict_clusters, extract_core_fragments, find_conflict_sets, ConflictConfig, MappingSet, MergedGraph,
};
use common::{small_instance, subsets};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn conflict_sets_are_sound_and_minimal(inst in small_instance()) {
        let (o1, o2, al) = (&inst.onto1, &inst.onto2, &inst.alignment);
        let frag = extract_core_fragments(o1, o2, al).unwrap();
        let list = find_conflict_sets(&frag, &ConflictConfig::default()).unwrap();
        let n = al.len();
        for s in list.iter() {
            let set = MappingSet::from_ids(n, s.mappings().iter().copied());
            prop_assert!(!exhaustive_incoherence_with(o1, o2, al, &set).is_empty());
            let w = s.witness().unwrap();
            let g = MergedGraph::with_subset(o1, o2, al, &set).unwrap();
            prop_assert!(g.entails(w.class, w.pair.0) && g.entails(w.class, w.pair.1));
            for &m in s.mappings() {
                let mut less = set.clone();
                less.remove(m);
                prop_assert!(exhaustive_incoherence_with(o1, o2, al, &less).is_empty());
            }
        }
    }

    #[test]
    fn every_incoherent_subset_contains_a_conflict_set(inst in small_instance(), seed in any::<u64>()) {
        let (o1, o2, al) = (&inst.onto1, &inst.onto2, &inst.alignment);
        let frag = extract_core_fragments(o1, o2, al).unwrap();
        let list = find_conflict_sets(&frag, &ConflictConfig::default()).unwrap();
        for sub in subsets(al, 50, seed) {
            let incoherent = !exhaustive_incoherence_with(o1, o2, al, &sub).is_empty();
            prop_assert_eq!(incoherent, list.any_contained_in(&sub));
            // Removing a hitting set of all conflicts leaves a coherent alignment.
            let hit = list.iter().all(|s| s.mappings().iter().any(|&m| !sub.contains(m)));
            prop_assert_eq!(hit, !incoherent);
        }
    }

    #[test]
    fn clusters_partition_sets_without_shared_mappings(inst in small_instance()) {
        let frag = extract_core_fragments(&inst.onto1, &inst.onto2, &inst.alignment).unwrap();
        let list = find_conflict_sets(&frag, &ConflictConfig::default()).unwrap();
        let clusters = disjoint_conflict_clusters(&list);
        let mut seen = vec![0; list.len()];
        for c in &clusters {
            for &i in &c.sets {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        for (a, ca) in clusters.iter().enumerate() {
            for cb in &clusters[a + 1..] {
                for &i in &ca.sets {
                    for &j in &cb.sets {
                        let (si, sj) = (&list.sets()[i], &list.sets()[j]);
                        prop_assert!(si.mappings().iter().all(|&m| !sj.contains(m)));
                    }
                }
            }
        }
        prop_assert_eq!(list.stats().clusters, clusters.len());
    }
}
