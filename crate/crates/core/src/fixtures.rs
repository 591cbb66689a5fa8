//! Small hand-built instances shared by unit tests, integration tests and
//! the CLI tests.

use crate::model::{Alignment, Mapping, Ontology, Relation, Side, Statement};

fn classes(names: &[&str]) -> Vec<Statement> {
    names.iter().map(|n| Statement::Class((*n).into())).collect()
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

/// Builds an ontology from `(child, parent)` edges and disjoint pairs.
pub fn ontology(side: Side, names: &[&str], edges: &[(&str, &str)], disjoint: &[(&str, &str)]) -> Ontology {
    let mut st = classes(names);
    st.extend(edges.iter().map(|(c, p)| sub(c, p)));
    st.extend(disjoint.iter().map(|(a, b)| disj(a, b)));
    Ontology::build(side, &st).expect("fixture ontology is valid")
}

/// F1: `A1 ⊑ B1`, `disjoint(B1, C1)` on the first side; `A2 ⊑ X2` on the
/// second; `m1 = A1 ≡ A2 (0.9)`, `m2 = A2 ⊑ C1 (0.5)`.
///
/// Mappings always go from the first ontology to the second, so `m2` is
/// stored as `C1 ⊒ A2`.
pub fn f1() -> (Ontology, Ontology, Alignment) {
    f1_with(true, true)
}

pub fn f1_with(m1: bool, m2: bool) -> (Ontology, Ontology, Alignment) {
    let o1 = ontology(Side::First, &["A1", "B1", "C1", "D1"], &[("A1", "B1")], &[("B1", "C1")]);
    let o2 = ontology(Side::Second, &["A2", "X2"], &[("A2", "X2")], &[]);
    let mut maps = Vec::new();
    if m1 {
        maps.push(f1_m1());
    }
    if m2 {
        maps.push(f1_m2());
    }
    (o1, o2, Alignment::new(maps).unwrap())
}

pub fn f1_m1() -> Mapping {
    Mapping::new("A1", "A2", Relation::Equivalent, 0.9)
}

pub fn f1_m2() -> Mapping {
    Mapping::new("C1", "A2", Relation::Subsumes, 0.5)
}

/// F3: `B ⊑ A, C ⊑ A, D ⊑ B, D ⊑ C, E ⊑ D, E ⊑ F`, no alignment.
pub fn f3() -> (Ontology, Ontology, Alignment) {
    let o1 = ontology(
        Side::First,
        &["A", "B", "C", "D", "E", "F"],
        &[("B", "A"), ("C", "A"), ("D", "B"), ("D", "C"), ("E", "D"), ("E", "F")],
        &[],
    );
    let o2 = ontology(Side::Second, &[], &[], &[]);
    (o1, o2, Alignment::empty())
}

/// Chain `A ⊑ B ⊑ C` on the first side, nothing else.
pub fn chain() -> (Ontology, Ontology, Alignment) {
    let o1 = ontology(Side::First, &["A", "B", "C"], &[("A", "B"), ("B", "C")], &[]);
    let o2 = ontology(Side::Second, &[], &[], &[]);
    (o1, o2, Alignment::empty())
}

/// F2 mapping confidences `m1..m5` for the abstract conflict sets
/// `S1 = {m1, m2}`, `S2 = {m1, m3}`, `S3 = {m4, m5}`.
pub const F2_CONFIDENCES: [f64; 5] = [0.6, 0.7, 0.8, 0.4, 0.9];

/// An alignment whose mapping ids `0..5` are F2's `m1..m5`.
pub fn f2_alignment() -> Alignment {
    let maps = F2_CONFIDENCES
        .iter()
        .enumerate()
        .map(|(i, &c)| Mapping::new(format!("m{}", i + 1), "t", Relation::Equivalent, c))
        .collect();
    Alignment::new(maps).unwrap()
}

/// F2 conflict sets as mapping-id lists (0-based).
pub const F2_SETS: [&[u32]; 3] = [&[0, 1], &[0, 2], &[3, 4]];
