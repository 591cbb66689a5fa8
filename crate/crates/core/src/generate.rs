//! Seeded synthetic matching problems.
//!
//! Both ontologies are copies of one base hierarchy: a breadth-first forest
//! with extra parents ("cross-links") pointing to earlier classes. The second
//! copy keeps every tree edge and about half of the cross-links. Disjointness
//! axioms join siblings or cousins without a common descendant in the base,
//! so any alignment that only relates corresponding classes is coherent. The
//! produced alignment adds wrong mappings with depressed confidences.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Alignment, Mapping, Ontology, Relation, Side, Statement};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub classes_per_side: usize,
    pub max_depth: usize,
    /// Mean number of children per class; 1.0 yields plain chains.
    pub branching: f64,
    pub disjoint_pairs: usize,
    pub mapping_count: usize,
    /// Fraction of the produced mappings that are wrong.
    pub noise_rate: f64,
    /// Probability that a class receives an extra parent.
    pub multi_parent_rate: f64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            classes_per_side: 100,
            max_depth: 6,
            branching: 3.0,
            disjoint_pairs: 4,
            mapping_count: 30,
            noise_rate: 0.2,
            multi_parent_rate: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub onto1: Ontology,
    pub onto2: Ontology,
    /// Reference plus noise.
    pub alignment: Alignment,
    pub reference: Alignment,
}

struct Base {
    depth: Vec<usize>,
    tree_parent: Vec<Option<usize>>,
    tree_children: Vec<Vec<usize>>,
    cross: Vec<(usize, usize)>,
    children: Vec<Vec<usize>>,
}

impl Base {
    fn build(p: &GeneratorParams, rng: &mut ChaCha8Rng) -> Base {
        let n = p.classes_per_side;
        let mut depth = Vec::with_capacity(n);
        let mut tree_parent = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        let whole = p.branching.floor() as usize;
        let frac = p.branching - p.branching.floor();
        while depth.len() < n {
            let Some(v) = queue.pop_front() else {
                depth.push(0);
                tree_parent.push(None);
                queue.push_back(depth.len() - 1);
                continue;
            };
            if depth[v] >= p.max_depth {
                continue;
            }
            let kids = whole + usize::from(rng.gen::<f64>() < frac);
            for _ in 0..kids {
                if depth.len() == n {
                    break;
                }
                depth.push(depth[v] + 1);
                tree_parent.push(Some(v));
                queue.push_back(depth.len() - 1);
            }
        }

        let mut tree_children = vec![Vec::new(); n];
        for (c, par) in tree_parent.iter().enumerate() {
            if let Some(par) = par {
                tree_children[*par].push(c);
            }
        }
        // Extra parents always point to earlier classes, which keeps the
        // hierarchy acyclic.
        let mut cross = Vec::new();
        for (k, &parent) in tree_parent.iter().enumerate().skip(1) {
            if rng.gen::<f64>() < p.multi_parent_rate {
                let j = rng.gen_range(0..k);
                if parent != Some(j) {
                    cross.push((k, j));
                }
            }
        }
        cross.sort_unstable();
        cross.dedup();
        let mut children = tree_children.clone();
        for &(c, par) in &cross {
            children[par].push(c);
        }
        Base {
            depth,
            tree_parent,
            tree_children,
            cross,
            children,
        }
    }

    fn descendants(&self, root: usize, mark: &mut [u32], epoch: u32) {
        let mut stack = vec![root];
        mark[root] = epoch;
        while let Some(v) = stack.pop() {
            for &c in &self.children[v] {
                if mark[c] != epoch {
                    mark[c] = epoch;
                    stack.push(c);
                }
            }
        }
    }

    fn share_descendant(&self, a: usize, b: usize, mark: &mut [u32], epoch: u32) -> bool {
        self.descendants(a, mark, epoch);
        let mut stack = vec![b];
        let mut seen = HashSet::from([b]);
        while let Some(v) = stack.pop() {
            if mark[v] == epoch {
                return true;
            }
            for &c in &self.children[v] {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        false
    }

    /// A sibling or cousin of `x`, if any.
    fn relative(&self, x: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
        let parent = self.tree_parent[x]?;
        let mut pool: Vec<usize> = self.tree_children[parent].iter().copied().filter(|&y| y != x).collect();
        if let Some(grand) = self.tree_parent[parent] {
            for &uncle in &self.tree_children[grand] {
                if uncle != parent {
                    pool.extend(self.tree_children[uncle].iter().copied());
                }
            }
        }
        pool.choose(rng).copied()
    }
}

fn validate(p: &GeneratorParams) -> Result<()> {
    let fail = |m: &str| Err(Error::Generator(m.to_owned()));
    if !(0.0..=1.0).contains(&p.noise_rate) {
        return fail("noise_rate must lie in [0, 1]");
    }
    if !(0.0..=1.0).contains(&p.multi_parent_rate) {
        return fail("multi_parent_rate must lie in [0, 1]");
    }
    if !(p.branching >= 1.0 && p.branching.is_finite()) {
        return fail("branching must be at least 1");
    }
    if p.classes_per_side > 1 && p.max_depth == 0 {
        return fail("max_depth must be positive");
    }
    let noise = noise_count(p);
    if p.mapping_count - noise > p.classes_per_side {
        return fail("more correct mappings requested than classes per side");
    }
    let n = p.classes_per_side as u128;
    if noise as u128 > 3 * n * n.saturating_sub(1) {
        return fail("not enough distinct wrong mappings available");
    }
    Ok(())
}

fn noise_count(p: &GeneratorParams) -> usize {
    (p.mapping_count as f64 * p.noise_rate).round() as usize
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

pub fn generate_instance(p: &GeneratorParams) -> Result<Instance> {
    validate(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let base = Base::build(p, &mut rng);
    let n = p.classes_per_side;
    let width = n.saturating_sub(1).max(1).to_string().len();
    let name = |side: Side, k: usize| match side {
        Side::First => format!("a{k:0width$}"),
        Side::Second => format!("b{k:0width$}"),
    };

    // Disjointness, alternating sides, biased towards the upper levels so
    // that axioms cover sizeable subtrees.
    let top = base.depth.iter().copied().max().unwrap_or(0);
    let shallow = (top / 3).max(1);
    let upper: Vec<usize> = (0..n).filter(|&k| (1..=shallow).contains(&base.depth[k])).collect();
    let anywhere: Vec<usize> = (0..n).filter(|&k| base.depth[k] >= 1).collect();
    let mut pairs: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(), BTreeSet::new()];
    let mut mark = vec![0u32; n];
    let mut epoch = 0u32;
    let mut attempts = 0usize;
    let max_attempts = 200 * p.disjoint_pairs + 100;
    let mut placed = 0usize;
    while placed < p.disjoint_pairs {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Generator(format!(
                "could only place {placed} of {} coherent disjointness axioms",
                p.disjoint_pairs
            )));
        }
        let pool = if attempts.is_multiple_of(4) || upper.is_empty() {
            &anywhere
        } else {
            &upper
        };
        let Some(&x) = pool.choose(&mut rng) else {
            continue;
        };
        let Some(y) = base.relative(x, &mut rng) else {
            continue;
        };
        let key = (x.min(y), x.max(y));
        let side = placed % 2;
        if pairs[side].contains(&key) {
            continue;
        }
        epoch += 1;
        if base.share_descendant(x, y, &mut mark, epoch) {
            continue;
        }
        pairs[side].insert(key);
        placed += 1;
    }

    let mut kept_cross = Vec::new();
    for &edge in &base.cross {
        if rng.gen::<bool>() {
            kept_cross.push(edge);
        }
    }

    let build = |side: Side, cross: &[(usize, usize)], disjoint: &BTreeSet<(usize, usize)>| {
        let mut st: Vec<Statement> = (0..n).map(|k| Statement::Class(name(side, k))).collect();
        for (k, par) in base.tree_parent.iter().enumerate() {
            if let Some(par) = par {
                st.push(Statement::SubClass {
                    child: name(side, k),
                    parent: name(side, *par),
                });
            }
        }
        for &(c, par) in cross {
            st.push(Statement::SubClass {
                child: name(side, c),
                parent: name(side, par),
            });
        }
        for &(a, b) in disjoint {
            st.push(Statement::Disjoint(name(side, a), name(side, b)));
        }
        Ontology::build(side, &st)
    };
    let onto1 = build(Side::First, &base.cross, &pairs[0])?;
    let onto2 = build(Side::Second, &kept_cross, &pairs[1])?;

    let noise = noise_count(p);
    let correct = p.mapping_count - noise;
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(&mut rng);
    slots.truncate(correct);
    slots.sort_unstable();
    let mut reference = Vec::with_capacity(correct);
    let mut used = HashSet::new();
    for k in slots {
        let confidence = round3(rng.gen_range(0.6..=1.0));
        // A few correct mappings point at the tree parent's counterpart.
        let m = match base.tree_parent[k] {
            Some(par) if rng.gen::<f64>() < 0.1 => Mapping::new(
                name(Side::First, k),
                name(Side::Second, par),
                Relation::SubsumedBy,
                confidence,
            ),
            _ => Mapping::new(
                name(Side::First, k),
                name(Side::Second, k),
                Relation::Equivalent,
                confidence,
            ),
        };
        used.insert(m.key());
        reference.push(m);
    }

    let mut produced = reference.clone();
    let relations = [Relation::Equivalent, Relation::SubsumedBy, Relation::Subsumes];
    let mut wrong = 0;
    while wrong < noise {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let relation = *relations.choose(&mut rng).expect("nonempty");
        let confidence = round3(rng.gen_range(0.05..=0.7));
        if i == j {
            continue;
        }
        let m = Mapping::new(name(Side::First, i), name(Side::Second, j), relation, confidence);
        if used.insert(m.key()) {
            produced.push(m);
            wrong += 1;
        }
    }

    Ok(Instance {
        onto1,
        onto2,
        alignment: Alignment::new(produced)?,
        reference: Alignment::new(reference)?,
    })
}

/// Parameters for unstructured random instances: arbitrary DAGs with up to
/// three parents per class, random disjointness and random mappings of every
/// relation kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomParams {
    pub classes_per_side: usize,
    pub disjoint_pairs: usize,
    pub mappings: usize,
    pub seed: u64,
}

/// Confidences are drawn from a coarse grid so that ties occur.
const CONFIDENCE_GRID: [f64; 5] = [0.3, 0.5, 0.6, 0.7, 0.9];

pub fn random_instance(p: &RandomParams) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.classes_per_side;
    let width = n.saturating_sub(1).max(1).to_string().len();
    let mut sides = Vec::new();
    let mut want = [p.disjoint_pairs.div_ceil(2), p.disjoint_pairs / 2];
    if rng.gen::<bool>() {
        want.swap(0, 1);
    }
    for (side, prefix, want) in [(Side::First, "p", want[0]), (Side::Second, "q", want[1])] {
        let name = |k: usize| format!("{prefix}{k:0width$}");
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, ps) in parents.iter_mut().enumerate().skip(1) {
            let count = *[0usize, 1, 1, 1, 2, 2, 3].choose(&mut rng).expect("nonempty");
            for _ in 0..count {
                ps.push(rng.gen_range(0..k));
            }
            ps.sort_unstable();
            ps.dedup();
        }
        let mut children = vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for &par in ps {
                children[par].push(c);
            }
        }
        let below = |root: usize| {
            let mut seen = vec![false; n];
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(v) = stack.pop() {
                for &c in &children[v] {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            seen
        };
        let mut disjoint = BTreeSet::new();
        let mut attempts = 0;
        while disjoint.len() < want && attempts < 500 && n >= 2 {
            attempts += 1;
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b {
                continue;
            }
            let (da, db) = (below(a), below(b));
            if (0..n).any(|i| da[i] && db[i]) {
                continue;
            }
            disjoint.insert((a.min(b), a.max(b)));
        }
        let mut st: Vec<Statement> = (0..n).map(|k| Statement::Class(name(k))).collect();
        for (c, ps) in parents.iter().enumerate() {
            for &par in ps {
                st.push(Statement::SubClass {
                    child: name(c),
                    parent: name(par),
                });
            }
        }
        for &(a, b) in &disjoint {
            st.push(Statement::Disjoint(name(a), name(b)));
        }
        sides.push(Ontology::build(side, &st)?);
    }
    let onto2 = sides.pop().expect("two sides");
    let onto1 = sides.pop().expect("two sides");

    let relations = [Relation::Equivalent, Relation::SubsumedBy, Relation::Subsumes];
    let mut used = HashSet::new();
    let mut maps = Vec::new();
    let limit = 3 * n * n;
    while maps.len() < p.mappings.min(limit) {
        let m = Mapping::new(
            onto1.classes()[rng.gen_range(0..n)].clone(),
            onto2.classes()[rng.gen_range(0..n)].clone(),
            *relations.choose(&mut rng).expect("nonempty"),
            *CONFIDENCE_GRID.choose(&mut rng).expect("nonempty"),
        );
        if used.insert(m.key()) {
            maps.push(m);
        }
    }
    Ok(Instance {
        onto1,
        onto2,
        alignment: Alignment::new(maps)?,
        reference: Alignment::empty(),
    })
}
