//! Line-oriented ontology files and tab-separated alignment files.
//!
//! Ontology grammar, one statement per line:
//!
//! ```text
//! CLASS <id>
//! SUBCLASS <child> <parent>
//! DISJOINT <a> <b>
//! ```
//!
//! Alignment lines are `source<TAB>target<TAB>relation[<TAB>confidence]`
//! with relation one of `=`, `<` (source ⊑ target) or `>` (source ⊒ target);
//! a missing confidence means 1.0. In both formats `#` starts a comment and
//! blank lines are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Alignment, Mapping, Ontology, Relation, Side, Statement};

fn content(line: &str) -> &str {
    let line = line.strip_suffix('\r').unwrap_or(line);
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_statements(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = content(raw).split_whitespace().collect();
        let st = match tokens.as_slice() {
            [] => continue,
            ["CLASS", id] => Statement::Class((*id).to_owned()),
            ["SUBCLASS", child, parent] => Statement::SubClass {
                child: (*child).to_owned(),
                parent: (*parent).to_owned(),
            },
            ["DISJOINT", a, b] => Statement::Disjoint((*a).to_owned(), (*b).to_owned()),
            [kw @ ("CLASS" | "SUBCLASS" | "DISJOINT"), ..] => {
                return Err(syntax(line_no, format!("wrong number of arguments for {kw}")));
            }
            [other, ..] => return Err(syntax(line_no, format!("unknown statement `{other}`"))),
        };
        out.push(st);
    }
    Ok(out)
}

pub fn parse_ontology(text: &str, side: Side) -> Result<Ontology> {
    Ontology::build(side, &parse_statements(text)?)
}

pub fn write_ontology(onto: &Ontology) -> String {
    let mut s = String::new();
    for st in onto.statements() {
        match st {
            Statement::Class(c) => writeln!(s, "CLASS {c}"),
            Statement::SubClass { child, parent } => writeln!(s, "SUBCLASS {child} {parent}"),
            Statement::Disjoint(a, b) => writeln!(s, "DISJOINT {a} {b}"),
        }
        .expect("writing to a String cannot fail");
    }
    s
}

pub fn parse_alignment(text: &str) -> Result<Alignment> {
    let mut maps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = content(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(syntax(
                line_no,
                format!("expected 3 or 4 tab-separated fields, got {}", fields.len()),
            ));
        }
        let (source, target) = (fields[0].trim(), fields[1].trim());
        if source.is_empty()
            || target.is_empty()
            || source.contains(char::is_whitespace)
            || target.contains(char::is_whitespace)
        {
            return Err(syntax(line_no, "class ids must be nonempty and free of whitespace"));
        }
        let relation = Relation::from_symbol(fields[2].trim())
            .ok_or_else(|| syntax(line_no, format!("unknown relation `{}`", fields[2].trim())))?;
        let confidence = match fields.get(3) {
            None => 1.0,
            Some(c) => c
                .trim()
                .parse::<f64>()
                .map_err(|_| syntax(line_no, format!("bad confidence `{}`", c.trim())))?,
        };
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::ConfidenceOutOfRange(confidence));
        }
        maps.push(Mapping::new(source, target, relation, confidence));
    }
    Alignment::new(maps)
}

/// Up to six decimals, trailing zeros trimmed but at least one decimal kept.
pub fn format_confidence(c: f64) -> String {
    let mut s = format!("{c:.6}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}

/// Canonical serialization: mappings in canonical order, always with an
/// explicit confidence.
pub fn write_alignment(align: &Alignment) -> String {
    let mut s = String::new();
    for m in align.mappings() {
        writeln!(
            s,
            "{}\t{}\t{}\t{}",
            m.source,
            m.target,
            m.relation,
            format_confidence(m.confidence)
        )
        .expect("writing to a String cannot fail");
    }
    s
}
