mod common;

use alnrepair_core::{ClassIdx, MappingSet, MergedGraph};
use common::{small_instance, Closure};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn entailment_matches_brute_force_closure(inst in small_instance()) {
        let (o1, o2, al) = (&inst.onto1, &inst.onto2, &inst.alignment);
        let g = MergedGraph::new(o1, o2, al).unwrap();
        let cl = Closure::new(o1, o2, al, &al.all());
        prop_assert_eq!(g.classes().iter().map(|c| c.name.clone()).collect::<Vec<_>>(), cl.names.clone());
        for a in 0..g.len() {
            for b in 0..g.len() {
                prop_assert_eq!(g.entails(ClassIdx(a as u32), ClassIdx(b as u32)), cl.reach[a][b]);
            }
        }
    }

    #[test]
    fn direct_superclasses_are_covers(inst in small_instance()) {
        let g = MergedGraph::new(&inst.onto1, &inst.onto2, &inst.alignment).unwrap();
        let n = g.len() as u32;
        for a in (0..n).map(ClassIdx) {
            let direct = g.direct_superclasses_of(a);
            for &b in &direct {
                prop_assert!(g.entails(a, b) && !g.entails(b, a));
                for c in (0..n).map(ClassIdx) {
                    if g.scc_of(c) == g.scc_of(a) || g.scc_of(c) == g.scc_of(b) {
                        continue;
                    }
                    prop_assert!(!(g.entails(a, c) && g.entails(c, b)));
                }
            }
            // Conversely every strict superclass lies above some cover.
            for b in (0..n).map(ClassIdx) {
                if g.entails(a, b) && !g.entails(b, a) {
                    prop_assert!(direct.iter().any(|&d| g.entails(d, b)));
                }
            }
        }
    }

    #[test]
    fn unaligned_view_is_per_ontology_reachability(inst in small_instance()) {
        let (o1, o2) = (&inst.onto1, &inst.onto2);
        let g = MergedGraph::unaligned(o1, o2).unwrap();
        prop_assert_eq!(g.scc_count(), g.len());
        let empty = alnrepair_core::Alignment::empty();
        let c1 = Closure::new(o1, &empty_like(o2), &empty, &MappingSet::empty(0));
        for (i, a) in c1.names.iter().enumerate() {
            for (j, b) in c1.names.iter().enumerate() {
                prop_assert_eq!(g.entails_subclass(a, b).unwrap(), c1.reach[i][j]);
            }
        }
        for a in o1.classes() {
            for b in o2.classes() {
                prop_assert!(!g.entails_subclass(a, b).unwrap());
                prop_assert!(!g.entails_subclass(b, a).unwrap());
            }
        }
    }

    #[test]
    fn removing_a_mapping_never_adds_entailments(inst in small_instance(), pick in any::<prop::sample::Index>()) {
        let (o1, o2, al) = (&inst.onto1, &inst.onto2, &inst.alignment);
        prop_assume!(!al.is_empty());
        let full = MergedGraph::new(o1, o2, al).unwrap();
        let mut less = al.all();
        less.remove(alnrepair_core::MappingId(pick.index(al.len()) as u32));
        let g = MergedGraph::with_subset(o1, o2, al, &less).unwrap();
        let n = g.len() as u32;
        for a in (0..n).map(ClassIdx) {
            for b in (0..n).map(ClassIdx) {
                prop_assert!(!g.entails(a, b) || full.entails(a, b));
            }
        }
    }
}

/// An ontology with no classes, used to restrict the closure to one side.
fn empty_like(_o: &alnrepair_core::Ontology) -> alnrepair_core::Ontology {
    alnrepair_core::Ontology::build(alnrepair_core::Side::Second, &[]).unwrap()
}
