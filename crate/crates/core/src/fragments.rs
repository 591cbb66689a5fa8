//! Core fragments: the reduced sub-ontologies over which every
//! disjointness-driven conflict can still be found.
//!
//! Core classes are the disjointness endpoints, the mapping endpoints and the
//! checkset (⊑-minimal classes with two or more direct superclasses). Among
//! core classes, subsumption through ontology edges is kept as reduced edges,
//! so that for every subset of the alignment, reachability between core
//! classes is the same in the fragments as in the full merged graph.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Alignment, ClassId, ClassIdx, MappingId, MappingSet, MergedGraph, Ontology, Relation};

/// Classes satisfying the multi-parent minimality condition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Checkset {
    classes: Vec<ClassIdx>,
}

impl Checkset {
    pub fn classes(&self) -> &[ClassIdx] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: ClassIdx) -> bool {
        self.classes.binary_search(&c).is_ok()
    }
}

/// The ⊑-minimal classes with at least two direct superclasses.
///
/// Evaluated per SCC: every member of a qualifying SCC is included, and an
/// SCC is disqualified as soon as any strictly lower SCC has two covers.
pub fn compute_checkset(view: &MergedGraph) -> Checkset {
    let n = view.scc_count();
    let multi: Vec<bool> = (0..n).map(|s| view.covers(s).len() >= 2).collect();
    let mut below = vec![false; n];
    // Children always carry larger component numbers than their parents.
    for c in (0..n).rev() {
        let flag = multi[c] || below[c];
        if flag {
            for &p in view.scc_parents(c) {
                below[p as usize] = true;
            }
        }
    }
    let mut classes: Vec<ClassIdx> = (0..n)
        .filter(|&s| multi[s] && !below[s])
        .flat_map(|s| view.scc_members(s).iter().copied())
        .collect();
    classes.sort_unstable();
    Checkset { classes }
}

/// A reduced subclass edge between two core classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedEdge {
    pub from: ClassIdx,
    pub to: ClassIdx,
    /// True when the edge stands for a longer path through dropped classes.
    pub abbreviated: bool,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LocalEdge {
    pub to: u32,
    pub via: Option<MappingId>,
}

#[derive(Clone, Debug)]
pub struct CoreFragments {
    classes: Vec<ClassId>,
    core: Vec<ClassIdx>,
    local: Vec<u32>,
    reduced: Vec<ReducedEdge>,
    out: Vec<Vec<LocalEdge>>,
    inc: Vec<Vec<LocalEdge>>,
    disjoint: Vec<(ClassIdx, ClassIdx)>,
    checkset: Checkset,
    unaligned_checkset: Checkset,
    mapping_universe: usize,
}

const NOT_CORE: u32 = u32::MAX;

/// Builds the merged views and extracts the core fragments.
pub fn extract_core_fragments(o1: &Ontology, o2: &Ontology, align: &Alignment) -> Result<CoreFragments> {
    let view = MergedGraph::new(o1, o2, align)?;
    let unaligned = MergedGraph::unaligned(o1, o2)?;
    Ok(CoreFragments::from_views(&view, &unaligned, align))
}

impl CoreFragments {
    /// `view` must merge the full `align`; `unaligned` the same ontologies
    /// without mappings.
    ///
    /// Besides the checkset of `view`, the core keeps the checkset of the
    /// mapping-free graph: a class can have two direct superclasses under a
    /// subset of the alignment while a multi-parent class sits below it only
    /// through mappings outside that subset.
    pub fn from_views(view: &MergedGraph, unaligned: &MergedGraph, align: &Alignment) -> CoreFragments {
        let n = view.len();
        let checkset = compute_checkset(view);
        let unaligned_checkset = compute_checkset(unaligned);

        let mut is_core = vec![false; n];
        for &(a, b) in view.disjoint_pairs() {
            is_core[a.index()] = true;
            is_core[b.index()] = true;
        }
        for (_, m) in align.iter() {
            is_core[view.lookup(&m.source).expect("validated").index()] = true;
            is_core[view.lookup(&m.target).expect("validated").index()] = true;
        }
        for &c in checkset.classes().iter().chain(unaligned_checkset.classes()) {
            is_core[c.index()] = true;
        }

        let core: Vec<ClassIdx> = (0..n as u32).map(ClassIdx).filter(|c| is_core[c.index()]).collect();
        let mut local = vec![NOT_CORE; n];
        for (i, c) in core.iter().enumerate() {
            local[c.index()] = i as u32;
        }

        // Walk ontology edges upward from each core class, stopping at the
        // first core class on every path.
        let mut reduced = Vec::new();
        let mut stamp = vec![u32::MAX; n];
        let mut stack = Vec::new();
        for (i, &u) in core.iter().enumerate() {
            let mark = i as u32;
            stamp[u.index()] = mark;
            let mut found = Vec::new();
            stack.clear();
            stack.push(u);
            while let Some(v) = stack.pop() {
                for e in view.out_edges(v) {
                    if e.via.is_some() || stamp[e.to.index()] == mark {
                        continue;
                    }
                    stamp[e.to.index()] = mark;
                    if is_core[e.to.index()] {
                        found.push(e.to);
                    } else {
                        stack.push(e.to);
                    }
                }
            }
            found.sort_unstable();
            for to in found {
                let direct = view.out_edges(u).iter().any(|e| e.via.is_none() && e.to == to);
                reduced.push(ReducedEdge {
                    from: u,
                    to,
                    abbreviated: !direct,
                });
            }
        }

        let mut out = vec![Vec::new(); core.len()];
        for e in &reduced {
            out[local[e.from.index()] as usize].push(LocalEdge {
                to: local[e.to.index()],
                via: None,
            });
        }
        for (id, m) in align.iter() {
            let s = local[view.lookup(&m.source).expect("validated").index()];
            let t = local[view.lookup(&m.target).expect("validated").index()];
            let via = Some(id);
            match m.relation {
                Relation::Equivalent => {
                    out[s as usize].push(LocalEdge { to: t, via });
                    out[t as usize].push(LocalEdge { to: s, via });
                }
                Relation::SubsumedBy => out[s as usize].push(LocalEdge { to: t, via }),
                Relation::Subsumes => out[t as usize].push(LocalEdge { to: s, via }),
            }
        }
        let mut inc = vec![Vec::new(); core.len()];
        for (from, edges) in out.iter().enumerate() {
            for e in edges {
                inc[e.to as usize].push(LocalEdge {
                    to: from as u32,
                    via: e.via,
                });
            }
        }

        CoreFragments {
            classes: core.iter().map(|&c| view.class(c).clone()).collect(),
            core,
            local,
            reduced,
            out,
            inc,
            disjoint: view.disjoint_pairs().to_vec(),
            checkset,
            unaligned_checkset,
            mapping_universe: align.len(),
        }
    }

    /// Core classes in index order.
    pub fn core_classes(&self) -> &[ClassIdx] {
        &self.core
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    pub fn is_core(&self, c: ClassIdx) -> bool {
        self.local.get(c.index()).is_some_and(|&l| l != NOT_CORE)
    }

    /// Identity of a core class.
    pub fn class(&self, c: ClassIdx) -> Option<&ClassId> {
        let l = *self.local.get(c.index())?;
        (l != NOT_CORE).then(|| &self.classes[l as usize])
    }

    /// Number of classes in the merged graph the fragments were taken from.
    pub fn total_classes(&self) -> usize {
        self.local.len()
    }

    pub fn reduced_edges(&self) -> &[ReducedEdge] {
        &self.reduced
    }

    pub fn disjoint_pairs(&self) -> &[(ClassIdx, ClassIdx)] {
        &self.disjoint
    }

    /// Checkset of the merged graph with the full alignment.
    pub fn checkset(&self) -> &Checkset {
        &self.checkset
    }

    /// Checkset of the merged graph without mappings.
    pub fn unaligned_checkset(&self) -> &Checkset {
        &self.unaligned_checkset
    }

    pub fn mapping_universe(&self) -> usize {
        self.mapping_universe
    }

    pub(crate) fn local_of(&self, c: ClassIdx) -> Option<u32> {
        let l = *self.local.get(c.index())?;
        (l != NOT_CORE).then_some(l)
    }

    pub(crate) fn global_of(&self, l: u32) -> ClassIdx {
        self.core[l as usize]
    }

    pub(crate) fn local_out(&self, l: u32) -> &[LocalEdge] {
        &self.out[l as usize]
    }

    fn require_core(&self, c: ClassIdx) -> Result<u32> {
        self.local_of(c).ok_or_else(|| Error::NotCoreClass(format!("#{}", c.0)))
    }

    /// Local indices reachable from `start` using reduced edges and the
    /// mapping edges selected by `subset`.
    fn reach(&self, start: u32, subset: &MappingSet, forward: bool) -> Vec<bool> {
        let adj = if forward { &self.out } else { &self.inc };
        let mut seen = vec![false; self.core.len()];
        seen[start as usize] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for e in &adj[v as usize] {
                if e.via.is_some_and(|m| !subset.contains(m)) || seen[e.to as usize] {
                    continue;
                }
                seen[e.to as usize] = true;
                queue.push_back(e.to);
            }
        }
        seen
    }

    /// `a ⊑ b` in the fragments plus the mappings of `subset`.
    pub fn entails(&self, subset: &MappingSet, a: ClassIdx, b: ClassIdx) -> Result<bool> {
        let la = self.require_core(a)?;
        let lb = self.require_core(b)?;
        Ok(la == lb || self.reach(la, subset, true)[lb as usize])
    }

    /// Core classes subsumed by both members of some disjointness axiom in
    /// the fragments plus `subset`, in index order.
    pub fn incoherent_classes(&self, subset: &MappingSet) -> Vec<ClassIdx> {
        let mut bad = vec![false; self.core.len()];
        for &(b, c) in &self.disjoint {
            let under_b = self.reach(
                self.local_of(b).expect("disjointness endpoints are core"),
                subset,
                false,
            );
            let under_c = self.reach(
                self.local_of(c).expect("disjointness endpoints are core"),
                subset,
                false,
            );
            for (i, flag) in bad.iter_mut().enumerate() {
                *flag |= under_b[i] && under_c[i];
            }
        }
        (0..self.core.len()).filter(|&i| bad[i]).map(|i| self.core[i]).collect()
    }

    pub fn stats(&self) -> FragmentStats {
        let total = self.total_classes();
        FragmentStats {
            total_classes: total,
            core_classes: self.len(),
            core_percent: percent(self.len(), total),
            checkset: self.checkset.len(),
            checkset_percent: percent(self.checkset.len(), total),
            unaligned_checkset: self.unaligned_checkset.len(),
            reduced_edges: self.reduced.len(),
            abbreviated_edges: self.reduced.iter().filter(|e| e.abbreviated).count(),
        }
    }
}

/// `100 · part / total`, rounded to one decimal; 0 when `total` is 0.
pub fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    (1000.0 * part as f64 / total as f64).round() / 10.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FragmentStats {
    pub total_classes: usize,
    pub core_classes: usize,
    pub core_percent: f64,
    pub checkset: usize,
    pub checkset_percent: f64,
    pub unaligned_checkset: usize,
    pub reduced_edges: usize,
    pub abbreviated_edges: usize,
}
