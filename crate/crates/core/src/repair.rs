//! Greedy repair: confidence-interval filtering, cluster decomposition and
//! worst-mapping removal with depth-limited lookahead on ties.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::conflicts::{cluster_indices, ConflictList};
use crate::error::{Error, Result};
use crate::model::{Alignment, MappingId, MappingSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairConfig {
    /// Confidence interval for the initial filter; negative disables it.
    pub epsilon: f64,
    /// Extra simulated removals when breaking ties between worst candidates.
    pub search_depth: usize,
    /// Split conflict sets into independent clusters.
    pub use_clusters: bool,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig {
            epsilon: -1.0,
            search_depth: 2,
            use_clusters: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalCause {
    Filtered,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub mapping: MappingId,
    pub cause: RemovalCause,
    /// Conflict sets still unresolved at removal time that contain the mapping.
    pub resolved: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RepairStats {
    pub input_mappings: usize,
    pub conflict_sets: usize,
    pub initial_clusters: usize,
    pub clusters_processed: usize,
    /// Greedy steps where more than one candidate remained after the count
    /// and confidence criteria.
    pub lookahead_ties: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepairResult {
    pub kept: Alignment,
    /// Removed mappings in removal order; ids refer to the input alignment.
    pub removed: Vec<Removal>,
    pub resolved_conflicts: usize,
    pub stats: RepairStats,
}

impl RepairResult {
    pub fn removed_set(&self, universe: usize) -> MappingSet {
        MappingSet::from_ids(universe, self.removed.iter().map(|r| r.mapping))
    }
}

/// Single ordered pass of the confidence-interval filter.
///
/// Sets are visited by descending maximum confidence (ties in list order).
/// In each set not yet resolved, the lowest-confidence mapping is removed
/// when `c1 + ε < c2 − ε`, `c1` and `c2` being the lowest and second-lowest
/// confidences. A one-mapping set has no second value and always loses its
/// mapping.
pub fn filter_conflicts(list: &ConflictList, align: &Alignment, epsilon: f64) -> (ConflictList, Vec<MappingId>) {
    let conf = |m: MappingId| align.confidence(m);
    let sets = list.as_slices();
    let max_conf = |s: &[MappingId]| s.iter().map(|&m| conf(m)).fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| max_conf(sets[b]).total_cmp(&max_conf(sets[a])));

    let mut gone = MappingSet::empty(align.len());
    let mut removed = Vec::new();
    for i in order {
        let set = sets[i];
        if set.iter().any(|&m| gone.contains(m)) {
            continue;
        }
        // Lowest confidence, ties to the canonically first mapping.
        let lowest = *set
            .iter()
            .min_by(|&&a, &&b| conf(a).total_cmp(&conf(b)).then(a.cmp(&b)))
            .expect("conflict sets are nonempty");
        let c1 = conf(lowest);
        let second = set
            .iter()
            .filter(|&&m| m != lowest)
            .map(|&m| conf(m))
            .min_by(f64::total_cmp);
        let clear_winner = match second {
            Some(c2) => c1 + epsilon < c2 - epsilon,
            None => true,
        };
        if clear_winner {
            gone.insert(lowest);
            removed.push(lowest);
        }
    }
    let remaining = list.select(|s| !s.mappings().iter().any(|&m| gone.contains(m)));
    (remaining, removed)
}

/// Sets that do not contain `m`.
pub fn remove_mapping<'a>(sets: &[&'a [MappingId]], m: MappingId) -> Vec<&'a [MappingId]> {
    sets.iter().copied().filter(|s| !s.contains(&m)).collect()
}

/// Mappings with the highest occurrence count and, among those, the lowest
/// confidence. Sorted by id.
fn worst_candidates(sets: &[&[MappingId]], align: &Alignment) -> Vec<MappingId> {
    let mut count: HashMap<MappingId, usize> = HashMap::new();
    for s in sets {
        for &m in *s {
            *count.entry(m).or_insert(0) += 1;
        }
    }
    let Some(&max_count) = count.values().max() else {
        return Vec::new();
    };
    let top: Vec<MappingId> = count
        .iter()
        .filter(|&(_, &c)| c == max_count)
        .map(|(&m, _)| m)
        .collect();
    let min_conf = top.iter().map(|&m| align.confidence(m)).fold(f64::INFINITY, f64::min);
    let mut worst: Vec<MappingId> = top.into_iter().filter(|&m| align.confidence(m) == min_conf).collect();
    worst.sort_unstable();
    worst
}

/// Number of sets resolved by removing `m`, plus the best follow-up over
/// `depth` further removals, each chosen among the residual worst
/// candidates.
pub fn resolved_conflicts(sets: &[&[MappingId]], m: MappingId, depth: usize, align: &Alignment) -> usize {
    let direct = sets.iter().filter(|s| s.contains(&m)).count();
    if depth == 0 {
        return direct;
    }
    let residual = remove_mapping(sets, m);
    if residual.is_empty() {
        return direct;
    }
    direct
        + worst_candidates(&residual, align)
            .into_iter()
            .map(|c| resolved_conflicts(&residual, c, depth - 1, align))
            .max()
            .unwrap_or(0)
}

/// Picks the mapping to remove from a group of conflict sets; the flag
/// reports whether the lookahead had to choose between several candidates.
fn select_worst(sets: &[&[MappingId]], align: &Alignment, depth: usize) -> Result<(MappingId, bool)> {
    let candidates = worst_candidates(sets, align);
    match candidates.as_slice() {
        [] => Err(Error::EmptyCluster),
        [only] => Ok((*only, false)),
        _ => {
            let mut best = candidates[0];
            let mut best_score = 0;
            for &m in &candidates {
                let score = resolved_conflicts(sets, m, depth, align);
                if score > best_score {
                    best = m;
                    best_score = score;
                }
            }
            Ok((best, true))
        }
    }
}

/// The mapping to remove next: highest count, then lowest confidence, then
/// most conflicts resolved with lookahead, then lowest id.
pub fn worst_mapping(sets: &[&[MappingId]], align: &Alignment, search_depth: usize) -> Result<MappingId> {
    select_worst(sets, align, search_depth).map(|(m, _)| m)
}

pub fn repair(conflicts: &ConflictList, align: &Alignment, cfg: &RepairConfig) -> Result<RepairResult> {
    let mut removed: Vec<Removal> = Vec::new();
    let mut stats = RepairStats {
        input_mappings: align.len(),
        conflict_sets: conflicts.len(),
        ..RepairStats::default()
    };

    let filtered;
    let work = if cfg.epsilon >= 0.0 {
        let (remaining, gone) = filter_conflicts(conflicts, align, cfg.epsilon);
        let all = conflicts.as_slices();
        let mut seen = MappingSet::empty(align.len());
        for m in gone {
            // A filtered mapping resolves the sets that no earlier filtered
            // mapping already resolved.
            let resolved = all
                .iter()
                .filter(|s| s.contains(&m) && !s.iter().any(|&x| seen.contains(x)))
                .count();
            seen.insert(m);
            removed.push(Removal {
                mapping: m,
                cause: RemovalCause::Filtered,
                resolved,
            });
        }
        filtered = remaining;
        &filtered
    } else {
        conflicts
    };

    let sets = work.as_slices();
    let greedy = |group: Vec<usize>, stats: &mut RepairStats, removed: &mut Vec<Removal>| -> Result<()> {
        // Pending clusters keyed by their smallest set index.
        let mut pending: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        pending.insert(group[0], group);
        while let Some((_, members)) = pending.pop_first() {
            stats.clusters_processed += 1;
            let slices: Vec<&[MappingId]> = members.iter().map(|&i| sets[i]).collect();
            let (w, tie) = select_worst(&slices, align, cfg.search_depth)?;
            stats.lookahead_ties += usize::from(tie);
            let residue: Vec<usize> = members.into_iter().filter(|&i| !sets[i].contains(&w)).collect();
            removed.push(Removal {
                mapping: w,
                cause: RemovalCause::Greedy,
                resolved: slices.len() - residue.len(),
            });
            if residue.is_empty() {
                continue;
            }
            if cfg.use_clusters {
                let residue_slices: Vec<&[MappingId]> = residue.iter().map(|&i| sets[i]).collect();
                for part in cluster_indices(&residue_slices) {
                    let part: Vec<usize> = part.into_iter().map(|j| residue[j]).collect();
                    pending.insert(part[0], part);
                }
            } else {
                pending.insert(residue[0], residue);
            }
        }
        Ok(())
    };

    if !sets.is_empty() {
        if cfg.use_clusters {
            let clusters = cluster_indices(&sets);
            stats.initial_clusters = clusters.len();
            for c in clusters {
                greedy(c, &mut stats, &mut removed)?;
            }
        } else {
            stats.initial_clusters = 1;
            greedy((0..sets.len()).collect(), &mut stats, &mut removed)?;
        }
    }

    let gone = MappingSet::from_ids(align.len(), removed.iter().map(|r| r.mapping));
    let keep = MappingSet::from_ids(align.len(), align.ids().filter(|&m| !gone.contains(m)));
    Ok(RepairResult {
        kept: align.restrict(&keep),
        resolved_conflicts: removed.iter().map(|r| r.resolved).sum(),
        removed,
        stats,
    })
}
