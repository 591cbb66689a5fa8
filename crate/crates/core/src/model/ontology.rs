use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scc;

/// Which of the two matched ontologies a class comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::First => f.write_str("1"),
            Side::Second => f.write_str("2"),
        }
    }
}

/// A named class together with the ontology it was loaded from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassId {
    pub name: String,
    pub side: Side,
}

/// One declaration of the ontology input language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Class(String),
    SubClass { child: String, parent: String },
    Disjoint(String, String),
}

/// A validated, acyclic and coherent class hierarchy with disjointness axioms.
///
/// Classes are stored in lexicographic order; local indices refer to that
/// order.
#[derive(Clone, Debug)]
pub struct Ontology {
    side: Side,
    names: Vec<String>,
    index: HashMap<String, u32>,
    parents: Vec<Vec<u32>>,
    children: Vec<Vec<u32>>,
    disjoint: Vec<(u32, u32)>,
    disjoint_with: Vec<Vec<u32>>,
}

impl Ontology {
    /// Builds and validates an ontology. Statements may appear in any order;
    /// repeated edges and disjointness pairs collapse to one.
    pub fn build(side: Side, statements: &[Statement]) -> Result<Self> {
        let mut declared = BTreeSet::new();
        for st in statements {
            if let Statement::Class(name) = st {
                declared.insert(name.as_str());
            }
        }
        let names: Vec<String> = declared.into_iter().map(str::to_owned).collect();
        let index: HashMap<String, u32> = names.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        let lookup = |name: &str| -> Result<u32> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UndeclaredClass(name.to_owned()))
        };

        let mut edges = BTreeSet::new();
        let mut disjoint = BTreeSet::new();
        for st in statements {
            match st {
                Statement::Class(_) => {}
                Statement::SubClass { child, parent } => {
                    let (c, p) = (lookup(child)?, lookup(parent)?);
                    if c == p {
                        return Err(Error::SubclassCycle(child.clone()));
                    }
                    edges.insert((c, p));
                }
                Statement::Disjoint(a, b) => {
                    let (a_i, b_i) = (lookup(a)?, lookup(b)?);
                    if a_i == b_i {
                        return Err(Error::SelfDisjoint(a.clone()));
                    }
                    disjoint.insert((a_i.min(b_i), a_i.max(b_i)));
                }
            }
        }

        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(c, p) in &edges {
            parents[c as usize].push(p);
            children[p as usize].push(c);
        }
        let mut disjoint_with = vec![Vec::new(); n];
        for &(a, b) in &disjoint {
            disjoint_with[a as usize].push(b);
            disjoint_with[b as usize].push(a);
        }

        let onto = Ontology {
            side,
            names,
            index,
            parents,
            children,
            disjoint: disjoint.into_iter().collect(),
            disjoint_with,
        };
        onto.check_acyclic()?;
        onto.check_coherent()?;
        Ok(onto)
    }

    fn check_acyclic(&self) -> Result<()> {
        let comps = scc::tarjan(self.len(), |v| self.parents[v].iter().map(|&p| p as usize));
        if comps.count == self.len() {
            return Ok(());
        }
        let mut size = vec![0usize; comps.count];
        for &c in &comps.comp {
            size[c as usize] += 1;
        }
        let culprit = (0..self.len())
            .find(|&v| size[comps.comp[v] as usize] > 1)
            .expect("some component has more than one member");
        Err(Error::SubclassCycle(self.names[culprit].clone()))
    }

    fn check_coherent(&self) -> Result<()> {
        let mut below_first = vec![false; self.len()];
        for &(a, b) in &self.disjoint {
            below_first.iter_mut().for_each(|m| *m = false);
            for d in self.descendants(a) {
                below_first[d as usize] = true;
            }
            if let Some(x) = self
                .descendants(b)
                .into_iter()
                .filter(|&d| below_first[d as usize])
                .min()
            {
                return Err(Error::IncoherentInput {
                    class: self.names[x as usize].clone(),
                    first: self.names[a as usize].clone(),
                    second: self.names[b as usize].clone(),
                });
            }
        }
        Ok(())
    }

    /// Reflexive descendants of a local class index.
    fn descendants(&self, root: u32) -> Vec<u32> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root as usize] = true;
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &c in &self.children[v as usize] {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    queue.push_back(c);
                }
            }
        }
        out
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Class names in lexicographic order.
    pub fn classes(&self) -> &[String] {
        &self.names
    }

    pub fn class_id(&self, name: &str) -> Option<ClassId> {
        self.contains(name).then(|| ClassId {
            name: name.to_owned(),
            side: self.side,
        })
    }

    /// Subclass edges as `(child, parent)` name pairs, sorted.
    pub fn subclass_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.parents.iter().enumerate().flat_map(move |(c, ps)| {
            ps.iter()
                .map(move |&p| (self.names[c].as_str(), self.names[p as usize].as_str()))
        })
    }

    /// Disjointness axioms as sorted name pairs.
    pub fn disjoint_pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.disjoint
            .iter()
            .map(|&(a, b)| (self.names[a as usize].as_str(), self.names[b as usize].as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn parents_of(&self, name: &str) -> Option<impl Iterator<Item = &str> + '_> {
        let i = *self.index.get(name)?;
        Some(
            self.parents[i as usize]
                .iter()
                .map(|&p| self.names[p as usize].as_str()),
        )
    }

    pub fn children_of(&self, name: &str) -> Option<impl Iterator<Item = &str> + '_> {
        let i = *self.index.get(name)?;
        Some(
            self.children[i as usize]
                .iter()
                .map(|&c| self.names[c as usize].as_str()),
        )
    }

    pub fn disjoint_with(&self, name: &str) -> Option<impl Iterator<Item = &str> + '_> {
        let i = *self.index.get(name)?;
        Some(
            self.disjoint_with[i as usize]
                .iter()
                .map(|&d| self.names[d as usize].as_str()),
        )
    }

    /// Re-emits the ontology as declarations (classes, then edges, then
    /// disjointness), in canonical order.
    pub fn statements(&self) -> Vec<Statement> {
        let mut out: Vec<Statement> = self.names.iter().cloned().map(Statement::Class).collect();
        out.extend(self.subclass_edges().map(|(c, p)| Statement::SubClass {
            child: c.to_owned(),
            parent: p.to_owned(),
        }));
        out.extend(
            self.disjoint_pairs()
                .map(|(a, b)| Statement::Disjoint(a.to_owned(), b.to_owned())),
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: &str) -> Statement {
        Statement::Class(n.into())
    }
    fn sub(c: &str, p: &str) -> Statement {
        Statement::SubClass {
            child: c.into(),
            parent: p.into(),
        }
    }
    fn disj(a: &str, b: &str) -> Statement {
        Statement::Disjoint(a.into(), b.into())
    }

    #[test]
    fn f1_first_ontology() {
        let o = Ontology::build(
            Side::First,
            &[
                class("A1"),
                class("B1"),
                class("C1"),
                class("D1"),
                sub("A1", "B1"),
                disj("B1", "C1"),
            ],
        )
        .unwrap();
        assert_eq!(o.len(), 4);
        assert_eq!(o.edge_count(), 1);
        assert_eq!(o.disjoint_pairs().collect::<Vec<_>>(), vec![("B1", "C1")]);
        assert_eq!(o.class_id("D1").unwrap().side, Side::First);
    }

    #[test]
    fn cycles_are_rejected() {
        let err = Ontology::build(Side::First, &[class("X"), class("Y"), sub("X", "Y"), sub("Y", "X")]).unwrap_err();
        assert!(matches!(err, Error::SubclassCycle(_)));
        let err = Ontology::build(Side::First, &[class("X"), sub("X", "X")]).unwrap_err();
        assert_eq!(err, Error::SubclassCycle("X".into()));
    }

    #[test]
    fn incoherent_input_is_rejected() {
        let err = Ontology::build(
            Side::First,
            &[
                class("A"),
                class("B"),
                class("C"),
                sub("A", "B"),
                sub("A", "C"),
                disj("B", "C"),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::IncoherentInput {
                class: "A".into(),
                first: "B".into(),
                second: "C".into()
            }
        );
    }

    #[test]
    fn disjoint_with_own_subclass_is_incoherent() {
        let err = Ontology::build(Side::First, &[class("A"), class("B"), sub("A", "B"), disj("A", "B")]).unwrap_err();
        assert!(matches!(err, Error::IncoherentInput { .. }));
    }

    #[test]
    fn bad_references() {
        assert_eq!(
            Ontology::build(Side::First, &[class("a"), sub("a", "b")]).unwrap_err(),
            Error::UndeclaredClass("b".into())
        );
        assert_eq!(
            Ontology::build(Side::First, &[class("a"), disj("a", "a")]).unwrap_err(),
            Error::SelfDisjoint("a".into())
        );
    }

    #[test]
    fn duplicates_collapse() {
        let o = Ontology::build(
            Side::Second,
            &[
                class("a"),
                class("b"),
                class("c"),
                class("a"),
                sub("a", "b"),
                sub("a", "b"),
                disj("c", "b"),
                disj("b", "c"),
            ],
        )
        .unwrap();
        assert_eq!(o.len(), 3);
        assert_eq!(o.edge_count(), 1);
        assert_eq!(o.disjoint_pairs().count(), 1);
    }
}
