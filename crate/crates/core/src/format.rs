//! Text formats: TOML documents for algebras and posets, and a DOT subset
//! (`graph { a -- b; c; }`) for graphs.
//!
//! An algebra file:
//!
//! ```toml
//! size = 3
//! leq = [[0, 1], [1, 2]]
//! star = [2, 0, 0]
//! zero = 0
//! one = 2
//! labels = ["0", "e", "1"]
//!
//! [constants]
//! ebar = 1
//! ```
//!
//! `leq` may list any pairs generating the order; the reflexive-transitive
//! closure is taken. Files are written with the covering pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{FinitePAlgebra, RawAlgebra};
use crate::encodings::Graph;
use crate::error::{Error, Result};
use crate::poset::FinitePoset;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    size: usize,
    leq: Vec<[usize; 2]>,
    star: Vec<usize>,
    zero: usize,
    one: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    constants: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetFile {
    size: usize,
    leq: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn toml_error(what: &str, e: toml::de::Error) -> Error {
    let location = match e.span() {
        Some(span) => format!("{what} byte {}", span.start),
        None => what.to_string(),
    };
    Error::parse(location, e.message().trim().to_string())
}

pub fn parse_algebra(text: &str) -> Result<FinitePAlgebra> {
    let file: AlgebraFile = toml::from_str(text).map_err(|e| toml_error("algebra file", e))?;
    let order = FinitePoset::from_generators(
        file.size,
        file.leq.iter().map(|&[p, q]| (p, q)),
        None,
    )?;
    let raw = RawAlgebra {
        size: file.size,
        leq: (0..file.size)
            .flat_map(|p| order.up(p).ones().map(move |q| (p, q)))
            .collect(),
        star: file.star,
        zero: file.zero,
        one: file.one,
        constants: file.constants,
        labels: file.labels,
    };
    FinitePAlgebra::new(&raw)
}

pub fn write_algebra(a: &FinitePAlgebra) -> String {
    let file = AlgebraFile {
        size: a.size(),
        leq: a.order().covers().into_iter().map(|(p, q)| [p, q]).collect(),
        star: a.elements().map(|x| a.star(x)).collect(),
        zero: a.zero(),
        one: a.one(),
        labels: a.labels().map(|l| l.to_vec()),
        constants: a.constants().clone(),
    };
    toml::to_string(&file).expect("algebra files serialise")
}

pub fn parse_poset(text: &str) -> Result<FinitePoset> {
    let file: PosetFile = toml::from_str(text).map_err(|e| toml_error("poset file", e))?;
    FinitePoset::from_generators(file.size, file.leq.iter().map(|&[p, q]| (p, q)), file.labels)
}

pub fn write_poset(p: &FinitePoset) -> String {
    let file = PosetFile {
        size: p.size(),
        leq: p.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        labels: p.labels().map(|l| l.to_vec()),
    };
    toml::to_string(&file).expect("poset files serialise")
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Parses `graph { a -- b; c; }`, ignoring `//` comments. Vertices are
/// numbered in sorted name order. Loops and repeated edges are rejected.
pub fn parse_dot(text: &str) -> Result<Graph> {
    let err = |m: &str| Error::parse("graph file", m.to_string());
    let stripped: Vec<&str> = text.lines().map(|l| l.split("//").next().unwrap_or("")).collect();
    let joined = stripped.join("\n");
    let t = joined.trim();
    let rest = t.strip_prefix("graph").ok_or_else(|| err("expected `graph {`"))?;
    let rest = rest.trim_start();
    let body = rest
        .strip_prefix('{')
        .and_then(|r| r.trim_end().strip_suffix('}'))
        .ok_or_else(|| err("expected a body in braces"))?;
    let mut names = BTreeSet::new();
    let mut pairs = Vec::new();
    for stmt in body.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = stmt.split("--").map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty() || !p.chars().all(is_id_char)) {
            return Err(err(&format!("unsupported statement `{stmt}`")));
        }
        match parts.as_slice() {
            [v] => {
                names.insert(v.to_string());
            }
            [a, b] => {
                names.insert(a.to_string());
                names.insert(b.to_string());
                pairs.push((a.to_string(), b.to_string()));
            }
            _ => return Err(err(&format!("edge chains are not supported: `{stmt}`"))),
        }
    }
    let labels: Vec<String> = names.into_iter().collect();
    let index = |v: &str| labels.iter().position(|l| l == v).expect("collected above");
    let edges: Vec<(usize, usize)> = pairs.iter().map(|(a, b)| (index(a), index(b))).collect();
    Graph::new(labels.clone(), edges)
}

/// Writes the DOT subset. Names that are not plain identifiers become
/// `v0, v1, ..`, with a comment recording the original name.
pub fn write_dot(g: &Graph) -> String {
    let plain = g
        .labels()
        .iter()
        .all(|l| !l.is_empty() && l.chars().all(is_id_char));
    let names: Vec<String> = if plain {
        g.labels().to_vec()
    } else {
        (0..g.vertex_count()).map(|i| format!("v{i}")).collect()
    };
    let mut out = String::from("graph {\n");
    for (i, l) in names.iter().enumerate() {
        if plain {
            out.push_str(&format!("  {l};\n"));
        } else {
            out.push_str(&format!("  {l}; // {}\n", g.labels()[i]));
        }
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!("  {} -- {};\n", names[a], names[b]));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_bnalg;

    #[test]
    fn b1_file() {
        let text = write_algebra(&make_bnalg(1).unwrap());
        assert_eq!(
            text,
            "size = 3\nleq = [[0, 1], [1, 2]]\nstar = [2, 0, 0]\nzero = 0\none = 2\nlabels = [\"0\", \"e\", \"1\"]\n"
        );
        assert_eq!(parse_algebra(&text).unwrap(), make_bnalg(1).unwrap());
    }

    #[test]
    fn constants_section() {
        let a = make_bnalg(1).unwrap().with_constant("ebar", 1).unwrap();
        let text = write_algebra(&a);
        assert!(text.contains("[constants]\nebar = 1"), "{text}");
        assert_eq!(parse_algebra(&text).unwrap(), a);
    }

    #[test]
    fn bad_algebra_files() {
        let wrong_star = "size = 3\nleq = [[0, 1], [1, 2]]\nstar = [2, 0, 1]\nzero = 0\none = 2\n";
        assert!(matches!(parse_algebra(wrong_star), Err(Error::InvalidAlgebra(_))));
        assert!(matches!(parse_algebra("size = 3"), Err(Error::Parse { .. })));
        let cycle = "size = 2\nleq = [[0, 1], [1, 0]]\nstar = [1, 0]\nzero = 0\none = 1\n";
        assert!(matches!(parse_algebra(cycle), Err(Error::InvalidPoset(_))));
        let extra = "size = 1\nleq = []\nstar = [0]\nzero = 0\none = 0\ncolour = 3\n";
        assert!(parse_algebra(extra).is_err());
    }

    #[test]
    fn poset_roundtrip() {
        let p = FinitePoset::from_generators(3, [(0, 2), (1, 2)], Some(vec!["a".into(), "b".into(), "c".into()]))
            .unwrap();
        let text = write_poset(&p);
        assert_eq!(parse_poset(&text).unwrap(), p);
    }

    #[test]
    fn dot_subset() {
        let g = parse_dot("graph { u -- v; w; }").unwrap();
        assert_eq!(g.labels(), ["u", "v", "w"]);
        assert!(g.has_edge(0, 1));
        assert_eq!(parse_dot(&write_dot(&g)).unwrap(), g);
        assert!(parse_dot("graph { a -- a; }").is_err());
        assert!(parse_dot("graph { a -- b; b -- a; }").is_err());
        assert!(parse_dot("digraph { a -> b; }").is_err());
        assert!(parse_dot("graph { a -- b -- c; }").is_err());
        assert!(parse_dot("graph { a [color=red]; }").is_err());
        assert_eq!(parse_dot("graph {}").unwrap().vertex_count(), 0);
        let odd = Graph::new(vec!["{x}".into(), "{y}".into()], [(0, 1)]).unwrap();
        let text = write_dot(&odd);
        assert!(text.contains("v0; // {x}"), "{text}");
        let back = parse_dot(&text).unwrap();
        assert_eq!(back.labels(), ["v0", "v1"]);
        assert!(back.has_edge(0, 1));
    }
}
