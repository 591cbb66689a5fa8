//! Ground truth for tests and evaluation: an exhaustive incoherence check
//! that shares no code with the merged graph, an exact minimum hitting set
//! by enumeration, and precision/recall scoring.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::conflicts::ConflictList;
use crate::error::{Error, Result};
use crate::model::{Alignment, ClassId, MappingId, MappingKey, MappingSet, Ontology, Relation};

/// Every named class subsumed by both members of some disjointness axiom in
/// `O1 ∪ O2 ∪ align`, sorted by name.
pub fn exhaustive_incoherence(o1: &Ontology, o2: &Ontology, align: &Alignment) -> Vec<ClassId> {
    exhaustive_incoherence_with(o1, o2, align, &align.all())
}

/// As [`exhaustive_incoherence`], using only the mappings in `subset`.
pub fn exhaustive_incoherence_with(
    o1: &Ontology,
    o2: &Ontology,
    align: &Alignment,
    subset: &MappingSet,
) -> Vec<ClassId> {
    let mut names: Vec<ClassId> = Vec::with_capacity(o1.len() + o2.len());
    for onto in [o1, o2] {
        names.extend(onto.classes().iter().filter_map(|n| onto.class_id(n)));
    }
    let pos: HashMap<&str, usize> = names.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();

    // Reverse adjacency: parent -> children.
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    let mut add = |child: &str, parent: &str| below[pos[parent]].push(pos[child]);
    for onto in [o1, o2] {
        for (c, p) in onto.subclass_edges() {
            add(c, p);
        }
    }
    for (id, m) in align.iter() {
        if !subset.contains(id) {
            continue;
        }
        match m.relation {
            Relation::Equivalent => {
                add(&m.source, &m.target);
                add(&m.target, &m.source);
            }
            Relation::SubsumedBy => add(&m.source, &m.target),
            Relation::Subsumes => add(&m.target, &m.source),
        }
    }

    let under = |root: usize| -> Vec<bool> {
        let mut seen = vec![false; names.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &c in &below[v] {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        seen
    };

    let mut bad = vec![false; names.len()];
    for onto in [o1, o2] {
        for (a, b) in onto.disjoint_pairs() {
            let (ua, ub) = (under(pos[a]), under(pos[b]));
            for i in 0..names.len() {
                bad[i] |= ua[i] && ub[i];
            }
        }
    }
    let mut out: Vec<ClassId> = names.into_iter().zip(bad).filter_map(|(c, b)| b.then_some(c)).collect();
    out.sort();
    out
}

pub const HITTING_SET_CAP: usize = 24;

/// Minimum-cardinality set of mappings intersecting every conflict set.
/// Among minimum solutions the one with the lowest total confidence wins,
/// then the lexicographically smallest id list.
pub fn brute_force_min_hitting_set(conflicts: &ConflictList, align: &Alignment) -> Result<Vec<MappingId>> {
    brute_force_min_hitting_set_capped(conflicts, align, HITTING_SET_CAP)
}

pub fn brute_force_min_hitting_set_capped(
    conflicts: &ConflictList,
    align: &Alignment,
    cap: usize,
) -> Result<Vec<MappingId>> {
    let universe = conflicts.mappings();
    if universe.len() > cap.min(63) {
        return Err(Error::OracleCap {
            cap,
            found: universe.len(),
        });
    }
    let bit: HashMap<MappingId, u32> = universe.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let masks: Vec<u64> = conflicts
        .iter()
        .map(|s| s.mappings().iter().fold(0u64, |acc, m| acc | 1 << bit[m]))
        .collect();
    let n = universe.len();

    for size in 0..=n {
        let mut best: Option<(f64, Vec<MappingId>)> = None;
        for_each_combination(n, size, |chosen| {
            let mask = chosen.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if masks.iter().all(|&s| s & mask != 0) {
                let ids: Vec<MappingId> = chosen.iter().map(|&i| universe[i]).collect();
                let weight: f64 = ids.iter().map(|&m| align.confidence(m)).sum();
                let better = match &best {
                    None => true,
                    Some((w, b)) => weight < *w || (weight == *w && ids < *b),
                };
                if better {
                    best = Some((weight, ids));
                }
            }
        });
        if let Some((_, ids)) = best {
            return Ok(ids);
        }
    }
    unreachable!("the full universe hits every set")
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Incoherent classes of the produced alignment, when ontologies are known.
    pub incoherent_count: Option<usize>,
    /// Mappings of the pre-repair alignment missing from the produced one,
    /// when the pre-repair alignment is known.
    pub removed_count: Option<usize>,
}

/// Scores `produced` against `reference`; confidences are ignored. An empty
/// produced alignment has precision 1, an empty reference recall 1.
pub fn precision_recall_fmeasure(produced: &Alignment, reference: &Alignment) -> EvalReport {
    let reference_keys: HashSet<MappingKey> = reference.mappings().iter().map(|m| m.key()).collect();
    let correct = produced
        .mappings()
        .iter()
        .filter(|m| reference_keys.contains(&m.key()))
        .count() as f64;
    let precision = if produced.is_empty() {
        1.0
    } else {
        correct / produced.len() as f64
    };
    let recall = if reference.is_empty() {
        1.0
    } else {
        correct / reference.len() as f64
    };
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    EvalReport {
        precision,
        recall,
        f_measure,
        incoherent_count: None,
        removed_count: None,
    }
}
