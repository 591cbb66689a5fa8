//! Minimal conflict sets of mappings, their clusters, and incoherent-class
//! counting.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fragments::CoreFragments;
use crate::model::{ClassIdx, MappingId, MappingSet, MergedGraph};

/// The incoherence a conflict set produces: `class ⊑ pair.0 ∧ class ⊑ pair.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Witness {
    pub class: ClassIdx,
    pub pair: (ClassIdx, ClassIdx),
}

/// A minimal set of mappings whose presence makes some class incoherent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictSet {
    mappings: Vec<MappingId>,
    witness: Option<Witness>,
}

impl ConflictSet {
    pub fn mappings(&self) -> &[MappingId] {
        &self.mappings
    }

    /// `None` for conflict lists built directly from mapping sets.
    pub fn witness(&self) -> Option<Witness> {
        self.witness
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn contains(&self, m: MappingId) -> bool {
        self.mappings.binary_search(&m).is_ok()
    }
}

/// Conflict sets forming an antichain under inclusion, ordered by their
/// sorted mapping lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConflictList {
    sets: Vec<ConflictSet>,
}

impl ConflictList {
    /// Normalizes arbitrary mapping sets into a conflict list: each set is
    /// sorted, duplicates and supersets of other sets are dropped, empty sets
    /// are ignored.
    pub fn from_sets<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = MappingId>,
    {
        let raw = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<MappingId> = s.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                (v, None)
            })
            .filter(|(v, _)| !v.is_empty())
            .collect();
        Self::minimize(raw)
    }

    fn minimize(mut raw: Vec<(Vec<MappingId>, Option<Witness>)>) -> Self {
        raw.sort_unstable_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
        raw.dedup_by(|later, earlier| later.0 == earlier.0);

        // Sets arrive by nondecreasing size, so any kept subset of a
        // candidate is already indexed when the candidate is examined.
        let mut by_mapping: HashMap<MappingId, Vec<u32>> = HashMap::new();
        let mut kept: Vec<(Vec<MappingId>, Option<Witness>)> = Vec::new();
        let mut hits: HashMap<u32, usize> = HashMap::new();
        for (set, witness) in raw {
            hits.clear();
            let mut dominated = false;
            'scan: for m in &set {
                if let Some(list) = by_mapping.get(m) {
                    for &k in list {
                        let h = hits.entry(k).or_insert(0);
                        *h += 1;
                        if *h == kept[k as usize].0.len() {
                            dominated = true;
                            break 'scan;
                        }
                    }
                }
            }
            if dominated {
                continue;
            }
            let k = kept.len() as u32;
            for &m in &set {
                by_mapping.entry(m).or_default().push(k);
            }
            kept.push((set, witness));
        }
        kept.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        ConflictList {
            sets: kept
                .into_iter()
                .map(|(mappings, witness)| ConflictSet { mappings, witness })
                .collect(),
        }
    }

    /// Keeps the sets accepted by `keep`; the result is still an antichain
    /// in canonical order.
    pub fn select(&self, mut keep: impl FnMut(&ConflictSet) -> bool) -> ConflictList {
        ConflictList {
            sets: self.sets.iter().filter(|s| keep(s)).cloned().collect(),
        }
    }

    /// Mapping lists of all sets, in list order.
    pub fn as_slices(&self) -> Vec<&[MappingId]> {
        self.sets.iter().map(|s| s.mappings.as_slice()).collect()
    }

    pub fn sets(&self) -> &[ConflictSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConflictSet> {
        self.sets.iter()
    }

    /// Distinct mappings occurring in any set, in id order.
    pub fn mappings(&self) -> Vec<MappingId> {
        let mut all: Vec<MappingId> = self.sets.iter().flat_map(|s| s.mappings.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Whether some set lies entirely inside `subset`.
    pub fn any_contained_in(&self, subset: &MappingSet) -> bool {
        self.sets.iter().any(|s| s.mappings.iter().all(|&m| subset.contains(m)))
    }

    pub fn stats(&self) -> ConflictStats {
        let mut histogram = BTreeMap::new();
        for s in &self.sets {
            *histogram.entry(s.len()).or_insert(0) += 1;
        }
        let clusters = disjoint_conflict_clusters(self);
        ConflictStats {
            conflict_sets: self.len(),
            clusters: clusters.len(),
            largest_cluster: clusters.iter().map(Cluster::len).max().unwrap_or(0),
            distinct_mappings: self.mappings().len(),
            size_histogram: histogram,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConflictStats {
    pub conflict_sets: usize,
    pub clusters: usize,
    pub largest_cluster: usize,
    pub distinct_mappings: usize,
    /// Number of conflict sets per set size.
    pub size_histogram: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug)]
pub struct ConflictConfig {
    /// Upper bound on candidate combinations per witness, and on mapping-set
    /// labels created while exploring from one start class.
    pub max_candidates: usize,
    /// Upper bound on label elements scanned while exploring from one start
    /// class or combining labels for one witness; keeps pathological inputs
    /// from running for hours before the candidate cap is reached.
    pub max_label_work: u64,
}

impl Default for ConflictConfig {
    fn default() -> Self {
        ConflictConfig {
            max_candidates: 1_000_000,
            max_label_work: 4_000_000_000,
        }
    }
}

type Labels = SmallVec<[MappingId; 4]>;

fn is_subset(small: &[MappingId], big: &[MappingId]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

fn union(a: &[MappingId], b: &[MappingId]) -> Labels {
    let mut out = Labels::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Inserts `set` into an antichain unless an existing member is a subset.
/// `work` accumulates an estimate of the label elements scanned.
fn antichain_insert(chain: &mut Vec<Labels>, set: &Labels, work: &mut u64) -> bool {
    let scan = (chain.len() * (set.len() + 1)) as u64;
    *work += scan;
    if chain.iter().any(|t| is_subset(t, set)) {
        return false;
    }
    *work += scan;
    chain.retain(|t| !is_subset(set, t));
    chain.push(set.clone());
    true
}

/// Conflict candidates emitted so far, indexed by mapping. Any label that
/// contains one of them can only produce non-minimal or duplicate sets.
#[derive(Default)]
struct Known {
    sets: Vec<Labels>,
    by_mapping: HashMap<MappingId, Vec<u32>>,
}

impl Known {
    fn add(&mut self, set: &Labels) {
        let idx = self.sets.len() as u32;
        for &m in set {
            self.by_mapping.entry(m).or_default().push(idx);
        }
        self.sets.push(set.clone());
    }

    fn covers(&self, label: &[MappingId]) -> bool {
        label.iter().any(|m| {
            self.by_mapping
                .get(m)
                .is_some_and(|ids| ids.iter().any(|&i| is_subset(&self.sets[i as usize], label)))
        })
    }
}

/// Per-start scratch space, reused across start classes.
struct Explorer<'a> {
    frag: &'a CoreFragments,
    rev: Vec<Vec<u32>>,
    labels: Vec<Vec<Labels>>,
    touched: Vec<u32>,
    seen: Vec<u32>,
    relevant: Vec<u32>,
    epoch: u32,
    known: Known,
}

impl<'a> Explorer<'a> {
    fn new(frag: &'a CoreFragments) -> Self {
        let mut rev = vec![Vec::new(); frag.len()];
        for v in 0..frag.len() as u32 {
            for e in frag.local_out(v) {
                rev[e.to as usize].push(v);
            }
        }
        for r in &mut rev {
            r.sort_unstable();
            r.dedup();
        }
        Explorer {
            frag,
            rev,
            labels: vec![Vec::new(); frag.len()],
            touched: Vec::new(),
            seen: vec![u32::MAX; frag.len()],
            relevant: vec![u32::MAX; frag.len()],
            epoch: 0,
            known: Known::default(),
        }
    }

    /// Marks everything reachable from `start` with all mappings present.
    fn plain_reach(&mut self, start: u32) {
        self.epoch += 1;
        let epoch = self.epoch;
        self.seen[start as usize] = epoch;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for e in self.frag.local_out(v) {
                if self.seen[e.to as usize] != epoch {
                    self.seen[e.to as usize] = epoch;
                    stack.push(e.to);
                }
            }
        }
    }

    fn reached(&self, l: u32) -> bool {
        self.seen[l as usize] == self.epoch
    }

    /// Restricts the reached region to nodes that lead to one of `targets`.
    fn mark_relevant(&mut self, targets: impl IntoIterator<Item = u32>) {
        let epoch = self.epoch;
        let mut stack = Vec::new();
        for t in targets {
            if self.relevant[t as usize] != epoch {
                self.relevant[t as usize] = epoch;
                stack.push(t);
            }
        }
        while let Some(v) = stack.pop() {
            for &u in &self.rev[v as usize] {
                if self.seen[u as usize] == epoch && self.relevant[u as usize] != epoch {
                    self.relevant[u as usize] = epoch;
                    stack.push(u);
                }
            }
        }
    }

    /// For every node above `start`, the minimal sets of mappings whose
    /// edges suffice to reach it.
    fn propagate(&mut self, start: u32, cfg: &ConflictConfig) -> Result<()> {
        let cap = cfg.max_candidates;
        for &t in &self.touched {
            self.labels[t as usize].clear();
        }
        self.touched.clear();

        let mut created = 0usize;
        let mut work = 0u64;
        let empty = Labels::new();
        self.labels[start as usize].push(empty.clone());
        self.touched.push(start);
        let mut queue = VecDeque::from([(start, empty)]);
        while let Some((v, set)) = queue.pop_front() {
            work += (self.labels[v as usize].len() * (set.len() + 1)) as u64;
            if !self.labels[v as usize].contains(&set) {
                continue;
            }
            for e in self.frag.local_out(v) {
                if self.relevant[e.to as usize] != self.epoch {
                    continue;
                }
                let next = match e.via {
                    None => set.clone(),
                    Some(m) if set.contains(&m) => set.clone(),
                    Some(m) => {
                        let next = union(&set, &[m]);
                        if self.known.covers(&next) {
                            continue;
                        }
                        next
                    }
                };
                let chain = &mut self.labels[e.to as usize];
                if chain.is_empty() {
                    self.touched.push(e.to);
                }
                let inserted = antichain_insert(chain, &next, &mut work);
                if work > cfg.max_label_work {
                    return Err(self.cap_error(start, cfg.max_label_work as usize));
                }
                if inserted {
                    created += 1;
                    if created > cap {
                        return Err(self.cap_error(start, cap));
                    }
                    queue.push_back((e.to, next));
                }
            }
        }
        Ok(())
    }

    fn cap_error(&self, start: u32, cap: usize) -> Error {
        let class = self.frag.global_of(start);
        Error::EnumerationCap {
            class: self.frag.class(class).map(|c| c.name.clone()).unwrap_or_default(),
            cap,
        }
    }
}

/// Enumerates every minimal conflict set over the core fragments.
///
/// Every core class is a potential start; classes that are coherent even
/// with the whole alignment are skipped since removing mappings never adds
/// subsumptions.
pub fn find_conflict_sets(frag: &CoreFragments, cfg: &ConflictConfig) -> Result<ConflictList> {
    let cap = cfg.max_candidates;
    let mut explorer = Explorer::new(frag);
    let pairs: Vec<(u32, u32, (ClassIdx, ClassIdx))> = frag
        .disjoint_pairs()
        .iter()
        .map(|&(b, c)| {
            (
                frag.local_of(b).expect("disjointness endpoints are core"),
                frag.local_of(c).expect("disjointness endpoints are core"),
                (b, c),
            )
        })
        .collect();

    let mut raw: Vec<(Vec<MappingId>, Option<Witness>)> = Vec::new();
    for start in 0..frag.len() as u32 {
        explorer.plain_reach(start);
        let violated: Vec<_> = pairs
            .iter()
            .filter(|(b, c, _)| explorer.reached(*b) && explorer.reached(*c))
            .collect();
        if violated.is_empty() {
            continue;
        }
        explorer.mark_relevant(violated.iter().flat_map(|(b, c, _)| [*b, *c]));
        explorer.propagate(start, cfg)?;
        let class = frag.global_of(start);
        for &&(b, c, pair) in &violated {
            let to_b = &explorer.labels[b as usize];
            let to_c = &explorer.labels[c as usize];
            if to_b.len().saturating_mul(to_c.len()) > cap {
                return Err(explorer.cap_error(start, cap));
            }
            let mut candidates: Vec<Labels> = Vec::new();
            let mut work = 0u64;
            for sb in to_b {
                for sc in to_c {
                    antichain_insert(&mut candidates, &union(sb, sc), &mut work);
                }
                if work > cfg.max_label_work {
                    return Err(explorer.cap_error(start, cfg.max_label_work as usize));
                }
            }
            let witness = Some(Witness { class, pair });
            for s in &candidates {
                explorer.known.add(s);
            }
            raw.extend(candidates.into_iter().map(|s| (s.into_vec(), witness)));
        }
    }
    Ok(ConflictList::minimize(raw))
}

/// A maximal group of conflict sets connected through shared mappings,
/// given by indices into the originating list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub sets: Vec<usize>,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Partitions set indices into components of the "shares a mapping"
/// relation. Components are ordered by their smallest index.
pub(crate) fn cluster_indices<S: AsRef<[MappingId]>>(sets: &[S]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..sets.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<MappingId, usize> = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for &m in s.as_ref() {
            match owner.get(&m) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
                None => {
                    owner.insert(m, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..sets.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

pub fn disjoint_conflict_clusters(list: &ConflictList) -> Vec<Cluster> {
    let sets: Vec<&[MappingId]> = list.sets.iter().map(|s| s.mappings.as_slice()).collect();
    cluster_indices(&sets)
        .into_iter()
        .map(|sets| Cluster { sets })
        .collect()
}

/// Classes of the merged graph subsumed by both members of a disjointness
/// axiom, in index order.
pub fn count_incoherent_classes(view: &MergedGraph) -> (usize, Vec<ClassIdx>) {
    let classes: Vec<ClassIdx> = (0..view.len() as u32)
        .map(ClassIdx)
        .filter(|&c| view.is_incoherent(c))
        .collect();
    (classes.len(), classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, ontology};
    use crate::fragments::extract_core_fragments;
    use crate::model::{Alignment, Mapping, Relation, Side};

    fn ids(v: &[u32]) -> Vec<MappingId> {
        v.iter().copied().map(MappingId).collect()
    }

    fn f2() -> ConflictList {
        ConflictList::from_sets(fixtures::F2_SETS.iter().map(|s| ids(s)))
    }

    #[test]
    fn f1_single_conflict() {
        let (o1, o2, al) = fixtures::f1();
        let f = extract_core_fragments(&o1, &o2, &al).unwrap();
        let list = find_conflict_sets(&f, &ConflictConfig::default()).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list.sets()[0].mappings(), ids(&[0, 1]));
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        let w = list.sets()[0].witness().unwrap();
        assert_eq!(g.name(w.class), "A1");
        assert_eq!((g.name(w.pair.0), g.name(w.pair.1)), ("B1", "C1"));
    }

    #[test]
    fn f1_without_m2_has_no_conflicts() {
        let (o1, o2, al) = fixtures::f1_with(true, false);
        let f = extract_core_fragments(&o1, &o2, &al).unwrap();
        assert!(find_conflict_sets(&f, &ConflictConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn shared_mapping_two_sets() {
        // disjoint(B1, C1), D1 ⊑ C1; A2 ⊑ B1 (m1), A2 ⊑ C1 (m2), A2 ⊑ D1 (m3).
        let o1 = ontology(Side::First, &["B1", "C1", "D1"], &[("D1", "C1")], &[("B1", "C1")]);
        let o2 = ontology(Side::Second, &["A2"], &[], &[]);
        let al = Alignment::new(vec![
            Mapping::new("B1", "A2", Relation::Subsumes, 0.9),
            Mapping::new("C1", "A2", Relation::Subsumes, 0.8),
            Mapping::new("D1", "A2", Relation::Subsumes, 0.7),
        ])
        .unwrap();
        let f = extract_core_fragments(&o1, &o2, &al).unwrap();
        let list = find_conflict_sets(&f, &ConflictConfig::default()).unwrap();
        let got: Vec<_> = list.iter().map(|s| s.mappings().to_vec()).collect();
        assert_eq!(got, vec![ids(&[0, 1]), ids(&[0, 2])]);
    }

    #[test]
    fn cap_is_reported() {
        let (o1, o2, al) = fixtures::f1();
        let f = extract_core_fragments(&o1, &o2, &al).unwrap();
        let err = find_conflict_sets(
            &f,
            &ConflictConfig {
                max_candidates: 1,
                ..ConflictConfig::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { cap: 1, .. }));
    }

    #[test]
    fn label_work_budget_is_reported() {
        let (o1, o2, al) = fixtures::f1();
        let f = extract_core_fragments(&o1, &o2, &al).unwrap();
        let cfg = ConflictConfig {
            max_label_work: 0,
            ..ConflictConfig::default()
        };
        let err = find_conflict_sets(&f, &cfg).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { cap: 0, .. }));
    }

    #[test]
    fn from_sets_normalizes() {
        let list = ConflictList::from_sets([ids(&[2, 1]), ids(&[1, 2, 3]), ids(&[1, 2]), vec![], ids(&[4])]);
        let got: Vec<_> = list.iter().map(|s| s.mappings().to_vec()).collect();
        assert_eq!(got, vec![ids(&[1, 2]), ids(&[4])]);
    }

    #[test]
    fn clusters() {
        let c = disjoint_conflict_clusters(&f2());
        assert_eq!(c, vec![Cluster { sets: vec![0, 1] }, Cluster { sets: vec![2] }]);

        let single = ConflictList::from_sets([ids(&[0, 1])]);
        assert_eq!(disjoint_conflict_clusters(&single).len(), 1);

        let chain = ConflictList::from_sets([ids(&[1, 2]), ids(&[2, 3]), ids(&[3, 4])]);
        let c = disjoint_conflict_clusters(&chain);
        assert_eq!(c, vec![Cluster { sets: vec![0, 1, 2] }]);
    }

    #[test]
    fn incoherent_class_counts() {
        let (o1, o2, al) = fixtures::f1();
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        let (n, classes) = count_incoherent_classes(&g);
        assert_eq!(n, 2);
        let names: Vec<_> = classes.iter().map(|&c| g.name(c)).collect();
        assert_eq!(names, ["A1", "A2"]);

        let (o1, o2, al) = fixtures::f1_with(true, false);
        let g = MergedGraph::new(&o1, &o2, &al).unwrap();
        assert_eq!(count_incoherent_classes(&g).0, 0);
        let g = MergedGraph::unaligned(&o1, &o2).unwrap();
        assert_eq!(count_incoherent_classes(&g).0, 0);
    }

    #[test]
    fn stats_histogram() {
        let s = f2().stats();
        assert_eq!(s.conflict_sets, 3);
        assert_eq!(s.clusters, 2);
        assert_eq!(s.largest_cluster, 2);
        assert_eq!(s.distinct_mappings, 5);
        assert_eq!(s.size_histogram, BTreeMap::from([(2, 3)]));
    }
}
