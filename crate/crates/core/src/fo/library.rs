use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::parser::parse_definition;
use super::syntax::Formula;
use crate::error::{Error, Result};

/// A named formula with parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Formula,
}

/// Predicate definitions. A definition may only use predicates defined
/// before it, so expansion always terminates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Library {
    defs: BTreeMap<String, Definition>,
    order: Vec<String>,
}

const STANDARD: &str = "
atom(x) := x != 0 & A y. (y <= x -> y = 0 | y = x)
join_irreducible(x) := x != 0 & A y. (y <= x -> A z. (z <= x -> (x = y | z -> x = y | x = z)))
covers(x, y) := x <= y & x != y & A z. (z <= y -> (x <= z -> z = x | z = y))
vertex(x) := join_irreducible(x) & E a. (a <= x & atom(a) & covers(a, x))
unique_atom := E x. (atom(x) & A y. (atom(y) -> y = x))
edge(x, y) := vertex(x) & vertex(y) & x != y & E! z. (x <= z & y <= z & join_irreducible(z))
boolean_law := A x. x | x* = 1
inC(x) := E y. x = y | ebar
inC0(x) := E y. x = y** | ebar
";

fn predicates_used(f: &Formula, out: &mut Vec<(String, usize)>) {
    match f {
        Formula::Pred(name, args) => out.push((name.clone(), args.len())),
        Formula::Not(g) | Formula::Quant(_, _, g) => predicates_used(g, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) => {
            predicates_used(g, out);
            predicates_used(h, out);
        }
        _ => {}
    }
}

impl Library {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a definition written as `name(x, ..) := body`.
    pub fn define(&mut self, text: &str) -> Result<()> {
        let (name, params, body) = parse_definition(text)?;
        self.insert(Definition { name, params, body })
    }

    pub fn insert(&mut self, def: Definition) -> Result<()> {
        let loc = || format!("definition of {}", def.name);
        if self.defs.contains_key(&def.name) {
            return Err(Error::parse(loc(), "already defined"));
        }
        for v in def.body.free_vars() {
            if !def.params.contains(&v) {
                return Err(Error::parse(loc(), format!("free variable `{v}` is not a parameter")));
            }
        }
        let mut used = Vec::new();
        predicates_used(&def.body, &mut used);
        for (name, arity) in used {
            if self.get(&name).map(|d| d.params.len()) != Some(arity) {
                return Err(Error::UnknownPredicate { name, arity });
            }
        }
        self.order.push(def.name.clone());
        self.defs.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.get(name)
    }

    /// Definitions in the order they were added.
    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.order.iter().map(|n| &self.defs[n])
    }
}

/// `atom`, `join_irreducible`, `covers`, `vertex`, `unique_atom`, `edge`,
/// `boolean_law`, `inC` and `inC0`.
pub fn library_formulas() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(|| {
        let mut lib = Library::new();
        for line in STANDARD.lines().filter(|l| !l.trim().is_empty()) {
            lib.define(line).expect("standard definitions parse");
        }
        lib
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_names() {
        let names: Vec<&str> = library_formulas().definitions().map(|d| d.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "atom",
                "join_irreducible",
                "covers",
                "vertex",
                "unique_atom",
                "edge",
                "boolean_law",
                "inC",
                "inC0"
            ]
        );
    }

    #[test]
    fn definitions_are_checked() {
        let mut lib = Library::new();
        assert!(lib.define("p(x) := x = y").is_err());
        assert!(lib.define("p(x) := q(x)").is_err());
        lib.define("p(x) := x = 0").unwrap();
        assert!(lib.define("p(y) := y = 1").is_err());
        lib.define("q(x, y) := p(x) & p(y)").unwrap();
        assert!(lib.define("r(x) := q(x)").is_err());
    }
}
