use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::alignment::{Alignment, MappingId, MappingSet, Relation};
use super::ontology::{ClassId, Ontology};
use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::scc;

/// Index of a class in a [`MergedGraph`]. Indices follow the lexicographic
/// order of class names across both ontologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassIdx(pub u32);

impl ClassIdx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Directed subsumption edge `from ⊑ to`, labelled with the mapping that
/// contributed it (`None` for ontology edges).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub to: ClassIdx,
    pub via: Option<MappingId>,
}

/// Subsumption graph of `O1 ∪ O2 ∪ M` with its SCC condensation and a
/// precomputed reachability closure over the condensation.
#[derive(Clone, Debug)]
pub struct MergedGraph {
    classes: Vec<ClassId>,
    index: HashMap<String, ClassIdx>,
    out: Vec<Vec<Edge>>,
    disjoint: Vec<(ClassIdx, ClassIdx)>,
    comp: Vec<u32>,
    members: Vec<Vec<ClassIdx>>,
    comp_parents: Vec<Vec<u32>>,
    closure: BitMatrix,
}

impl MergedGraph {
    /// Merges both ontologies with every mapping of `align`.
    pub fn new(o1: &Ontology, o2: &Ontology, align: &Alignment) -> Result<Self> {
        Self::with_subset(o1, o2, align, &align.all())
    }

    /// Merges both ontologies without any mapping.
    pub fn unaligned(o1: &Ontology, o2: &Ontology) -> Result<Self> {
        Self::with_subset(o1, o2, &Alignment::empty(), &MappingSet::empty(0))
    }

    /// Merges both ontologies with the mappings of `align` selected by
    /// `active`. Mapping edges keep the ids of `align`.
    pub fn with_subset(o1: &Ontology, o2: &Ontology, align: &Alignment, active: &MappingSet) -> Result<Self> {
        let mut classes: Vec<ClassId> = o1
            .classes()
            .iter()
            .map(|n| ClassId {
                name: n.clone(),
                side: o1.side(),
            })
            .chain(o2.classes().iter().map(|n| ClassId {
                name: n.clone(),
                side: o2.side(),
            }))
            .collect();
        classes.sort_by(|a, b| a.name.cmp(&b.name));
        if let Some(w) = classes.windows(2).find(|w| w[0].name == w[1].name) {
            return Err(Error::DuplicateClass(w[0].name.clone()));
        }
        let index: HashMap<String, ClassIdx> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.clone(), ClassIdx(i as u32)))
            .collect();
        let idx = |name: &str| index[name];

        let n = classes.len();
        let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
        let mut disjoint = Vec::new();
        for onto in [o1, o2] {
            for (c, p) in onto.subclass_edges() {
                out[idx(c).index()].push(Edge { to: idx(p), via: None });
            }
            for (a, b) in onto.disjoint_pairs() {
                let (a, b) = (idx(a), idx(b));
                disjoint.push((a.min(b), a.max(b)));
            }
        }
        disjoint.sort_unstable();

        for (id, m) in align.iter() {
            if !o1.contains(&m.source) {
                return Err(Error::DanglingMapping(m.source.clone()));
            }
            if !o2.contains(&m.target) {
                return Err(Error::DanglingMapping(m.target.clone()));
            }
            if !active.contains(id) {
                continue;
            }
            let (s, t) = (idx(&m.source), idx(&m.target));
            let via = Some(id);
            match m.relation {
                Relation::Equivalent => {
                    out[s.index()].push(Edge { to: t, via });
                    out[t.index()].push(Edge { to: s, via });
                }
                Relation::SubsumedBy => out[s.index()].push(Edge { to: t, via }),
                Relation::Subsumes => out[t.index()].push(Edge { to: s, via }),
            }
        }

        let comps = scc::tarjan(n, |v| out[v].iter().map(|e| e.to.index()));
        let mut members = vec![Vec::new(); comps.count];
        for (v, &c) in comps.comp.iter().enumerate() {
            members[c as usize].push(ClassIdx(v as u32));
        }
        let mut comp_parents = vec![Vec::new(); comps.count];
        for (v, edges) in out.iter().enumerate() {
            let cv = comps.comp[v];
            for e in edges {
                let cw = comps.comp[e.to.index()];
                if cw != cv {
                    comp_parents[cv as usize].push(cw);
                }
            }
        }
        for ps in &mut comp_parents {
            ps.sort_unstable();
            ps.dedup();
        }

        // Parents always carry smaller component numbers, so one ascending
        // sweep completes every row before it is read.
        let mut closure = BitMatrix::new(comps.count, comps.count);
        for (c, parents) in comp_parents.iter().enumerate() {
            closure.set(c, c);
            for &p in parents {
                debug_assert!((p as usize) < c);
                closure.union_rows(c, p as usize);
            }
        }

        Ok(MergedGraph {
            classes,
            index,
            out,
            disjoint,
            comp: comps.comp,
            members,
            comp_parents,
            closure,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn class(&self, c: ClassIdx) -> &ClassId {
        &self.classes[c.index()]
    }

    pub fn name(&self, c: ClassIdx) -> &str {
        &self.classes[c.index()].name
    }

    pub fn get(&self, name: &str) -> Option<ClassIdx> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<ClassIdx> {
        self.get(name).ok_or_else(|| Error::UnknownClass(name.to_owned()))
    }

    pub fn out_edges(&self, c: ClassIdx) -> &[Edge] {
        &self.out[c.index()]
    }

    /// Disjointness axioms of both ontologies, each pair ordered `(low, high)`.
    pub fn disjoint_pairs(&self) -> &[(ClassIdx, ClassIdx)] {
        &self.disjoint
    }

    pub fn scc_count(&self) -> usize {
        self.members.len()
    }

    pub fn scc_of(&self, c: ClassIdx) -> usize {
        self.comp[c.index()] as usize
    }

    /// Members of an SCC in index order.
    pub fn scc_members(&self, scc: usize) -> &[ClassIdx] {
        &self.members[scc]
    }

    /// Direct successors of an SCC in the condensation DAG.
    pub fn scc_parents(&self, scc: usize) -> &[u32] {
        &self.comp_parents[scc]
    }

    /// `a ⊑ b` (reflexive, transitive).
    #[inline]
    pub fn entails(&self, a: ClassIdx, b: ClassIdx) -> bool {
        self.closure
            .get(self.comp[a.index()] as usize, self.comp[b.index()] as usize)
    }

    #[inline]
    pub fn scc_entails(&self, a: usize, b: usize) -> bool {
        self.closure.get(a, b)
    }

    pub fn entails_subclass(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.entails(self.lookup(a)?, self.lookup(b)?))
    }

    /// SCCs covering `scc` in the condensation: its immediate strict
    /// superclasses with nothing strictly in between.
    pub fn covers(&self, scc: usize) -> Vec<usize> {
        let parents = &self.comp_parents[scc];
        parents
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| {
                !parents
                    .iter()
                    .any(|&q| q as usize != p && self.closure.get(q as usize, p))
            })
            .collect()
    }

    /// Representatives (lowest-index member) of the SCCs covering `a`'s SCC,
    /// in index order.
    pub fn direct_superclasses_of(&self, a: ClassIdx) -> Vec<ClassIdx> {
        let mut reps: Vec<ClassIdx> = self
            .covers(self.scc_of(a))
            .into_iter()
            .map(|s| self.members[s][0])
            .collect();
        reps.sort_unstable();
        reps
    }

    pub fn direct_superclasses(&self, a: &str) -> Result<Vec<ClassId>> {
        let a = self.lookup(a)?;
        Ok(self
            .direct_superclasses_of(a)
            .into_iter()
            .map(|c| self.class(c).clone())
            .collect())
    }

    /// Whether `a` is subsumed by both members of some disjointness axiom.
    pub fn is_incoherent(&self, a: ClassIdx) -> bool {
        self.violated_pairs(a).next().is_some()
    }

    pub fn violated_pairs(&self, a: ClassIdx) -> impl Iterator<Item = (ClassIdx, ClassIdx)> + '_ {
        self.disjoint
            .iter()
            .copied()
            .filter(move |&(b, c)| self.entails(a, b) && self.entails(a, c))
    }

    /// Approximate heap footprint of the reachability closure in bytes.
    pub fn closure_bytes(&self) -> usize {
        self.closure.heap_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &MergedGraph, v: &[ClassIdx]) -> Vec<String> {
        v.iter().map(|&c| g.name(c).to_owned()).collect()
    }

    #[test]
    fn f1_equivalence_forms_scc() {
        let (o1, o2, al) = fixtures::f1();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        assert_eq!(g.len(), 6);
        let a1 = g.lookup("A1").unwrap();
        let a2 = g.lookup("A2").unwrap();
        assert_eq!(g.scc_of(a1), g.scc_of(a2));
        assert_eq!(g.scc_count(), 5);
    }

    #[test]
    fn f1_unaligned_is_all_singletons() {
        let (o1, o2, al) = fixtures::f1_with(false, false);
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        assert_eq!(g.scc_count(), g.len());
    }

    #[test]
    fn f1_only_m2() {
        let (o1, o2, al) = fixtures::f1_with(false, true);
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        assert_eq!(g.scc_count(), 6);
        let a2 = g.lookup("A2").unwrap();
        let c1 = g.lookup("C1").unwrap();
        assert!(g
            .out_edges(a2)
            .iter()
            .any(|e| e.to == c1 && e.via == Some(MappingId(0))));
    }

    #[test]
    fn f1_entailment() {
        let (o1, o2, al) = fixtures::f1();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        assert!(g.entails_subclass("A2", "B1").unwrap());
        assert!(g.entails_subclass("A2", "A2").unwrap());
        assert!(!g.entails_subclass("B1", "A2").unwrap());
        assert_eq!(
            g.entails_subclass("A2", "nope").unwrap_err(),
            Error::UnknownClass("nope".into())
        );
    }

    #[test]
    fn direct_superclasses() {
        let (o1, o2, al) = fixtures::f3();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        let d = g.lookup("D").unwrap();
        assert_eq!(names(&g, &g.direct_superclasses_of(d)), ["B", "C"]);

        let (o1, o2, al) = fixtures::chain();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        let sup = g.direct_superclasses("A").unwrap();
        assert_eq!(sup.len(), 1);
        assert_eq!(sup[0].name, "B");

        let (o1, o2, al) = fixtures::f1();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        let a2 = g.lookup("A2").unwrap();
        assert_eq!(names(&g, &g.direct_superclasses_of(a2)), ["B1", "C1", "X2"]);
    }

    #[test]
    fn dangling_and_duplicate_classes() {
        let (o1, o2, _) = fixtures::f1();
        let bad = Alignment::new(vec![super::super::Mapping::new("A1", "Q", Relation::Equivalent, 1.0)]).unwrap();
        assert_eq!(
            MergedGraph::new(&o1, &o2, &bad).unwrap_err(),
            Error::DanglingMapping("Q".into())
        );
        let o2_dup = fixtures::ontology(crate::Side::Second, &["A1"], &[], &[]);
        assert_eq!(
            MergedGraph::unaligned(&o1, &o2_dup).unwrap_err(),
            Error::DuplicateClass("A1".into())
        );
    }
}
