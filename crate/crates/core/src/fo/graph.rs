use std::collections::BTreeMap;

use super::eval::{eval, satisfiers, Compiled, Env};
use super::library::library_formulas;
use super::parser::parse_formula;
use super::syntax::{Formula, Term};
use crate::algebra::FinitePAlgebra;
use crate::encodings::Graph;
use crate::error::{Error, Result};

fn var_of(t: &Term) -> Result<&str> {
    match t {
        Term::Var(v) => Ok(v),
        other => Err(Error::OutOfFragment(format!("term `{other}` is not a variable"))),
    }
}

/// Truth of a formula in the graph signature: variables range over vertices,
/// `E(x, y)` is adjacency and `=` is equality.
pub fn eval_graph(g: &Graph, phi: &Formula, env: &BTreeMap<String, usize>) -> Result<bool> {
    let mut env = env.clone();
    eval_graph_in(g, phi, &mut env)
}

fn eval_graph_in(g: &Graph, phi: &Formula, env: &mut BTreeMap<String, usize>) -> Result<bool> {
    let lookup = |t: &Term, env: &BTreeMap<String, usize>| -> Result<usize> {
        let v = var_of(t)?;
        env.get(v).copied().ok_or_else(|| Error::UnboundVariable(v.to_string()))
    };
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => lookup(a, env)? == lookup(b, env)?,
        Formula::Pred(name, args) if name == "E" && args.len() == 2 => {
            g.has_edge(lookup(&args[0], env)?, lookup(&args[1], env)?)
        }
        Formula::Pred(name, args) => {
            return Err(Error::UnknownPredicate {
                name: name.clone(),
                arity: args.len(),
            })
        }
        Formula::Leq(..) => return Err(Error::OutOfFragment("`<=` in a graph formula".into())),
        Formula::Not(f) => !eval_graph_in(g, f, env)?,
        Formula::And(f, h) => eval_graph_in(g, f, env)? && eval_graph_in(g, h, env)?,
        Formula::Or(f, h) => eval_graph_in(g, f, env)? || eval_graph_in(g, h, env)?,
        Formula::Implies(f, h) => !eval_graph_in(g, f, env)? || eval_graph_in(g, h, env)?,
        Formula::Quant(q, v, f) => {
            let saved = env.get(v).copied();
            let mut count = 0;
            for x in 0..g.vertex_count() {
                env.insert(v.clone(), x);
                if eval_graph_in(g, f, env)? {
                    count += 1;
                }
            }
            match saved {
                Some(x) => env.insert(v.clone(), x),
                None => env.remove(v),
            };
            match q {
                super::Quantifier::Forall => count == g.vertex_count(),
                super::Quantifier::Exists => count > 0,
                super::Quantifier::ExistsUnique => count == 1,
            }
        }
    })
}

/// Rewrites a graph formula into the p-algebra language: quantifiers are
/// relativised to `vertex` and `E` becomes `edge`.
pub fn translate_graph_sentence(phi: &Formula) -> Result<Formula> {
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Eq(a, b) => {
            var_of(a)?;
            var_of(b)?;
            phi.clone()
        }
        Formula::Pred(name, args) if name == "E" && args.len() == 2 => {
            Formula::pred("edge", &[var_of(&args[0])?, var_of(&args[1])?])
        }
        Formula::Pred(name, _) => {
            return Err(Error::OutOfFragment(format!("predicate `{name}`")))
        }
        Formula::Leq(..) => return Err(Error::OutOfFragment("`<=`".into())),
        Formula::Not(f) => Formula::not(translate_graph_sentence(f)?),
        Formula::And(f, g) => Formula::and(translate_graph_sentence(f)?, translate_graph_sentence(g)?),
        Formula::Or(f, g) => Formula::or(translate_graph_sentence(f)?, translate_graph_sentence(g)?),
        Formula::Implies(f, g) => {
            Formula::implies(translate_graph_sentence(f)?, translate_graph_sentence(g)?)
        }
        Formula::Quant(q, v, f) => {
            let body = translate_graph_sentence(f)?;
            let guard = Formula::pred("vertex", &[v]);
            let body = match q {
                super::Quantifier::Forall => Formula::implies(guard, body),
                _ => Formula::and(guard, body),
            };
            Formula::Quant(*q, v.clone(), Box::new(body))
        }
    })
}

/// Named graph sentences: an edge exists, an isolated vertex exists, a
/// triangle exists, one vertex dominates all others.
pub fn graph_battery() -> Vec<(&'static str, Formula)> {
    [
        ("edge", "E x. E y. E(x, y)"),
        ("isolated", "E x. A y. !E(x, y)"),
        ("triangle", "E x. E y. E z. (E(x, y) & E(y, z) & E(x, z))"),
        ("dominating", "E x. A y. (x = y | E(x, y))"),
    ]
    .into_iter()
    .map(|(name, text)| (name, parse_formula(text).expect("battery parses")))
    .collect()
}

/// The graph defined by the `vertex` and `edge` formulas.
pub fn fo_recover_graph(a: &FinitePAlgebra) -> Result<Graph> {
    if !eval(a, &Formula::pred("unique_atom", &[]), &Env::new())? {
        let atoms = satisfiers(a, &Formula::pred("atom", &["x"]), "x")?;
        return Err(Error::AtomCount(atoms.len()));
    }
    let vertices = satisfiers(a, &Formula::pred("vertex", &["x"]), "x")?;
    let mut edge = Compiled::new(
        a,
        &Formula::pred("edge", &["x", "y"]),
        &["x".to_string(), "y".to_string()],
        library_formulas(),
    )?;
    let mut edges = Vec::new();
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate().skip(i + 1) {
            if edge.evaluate(&[x, y]) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(vertices.iter().map(|&x| a.label(x)).collect(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_bnalg;
    use crate::encodings::{graph_encode, recover_graph};
    use crate::Limits;

    fn example_graph() -> Graph {
        Graph::new(vec!["u".into(), "v".into(), "w".into()], [(0, 1)]).unwrap()
    }

    #[test]
    fn battery_on_the_example() {
        let g = example_graph();
        let enc = graph_encode(&g, &Limits::default()).unwrap();
        let expect = [true, true, false, false];
        for ((name, phi), want) in graph_battery().into_iter().zip(expect) {
            assert_eq!(eval_graph(&g, &phi, &BTreeMap::new()).unwrap(), want, "{name}");
            let t = translate_graph_sentence(&phi).unwrap();
            assert_eq!(eval(&enc.algebra, &t, &Env::new()).unwrap(), want, "{name}");
        }
    }

    #[test]
    fn symmetry_holds_on_both_sides() {
        let phi = parse_formula("A x. A y. (E(x, y) -> E(y, x))").unwrap();
        let g = example_graph();
        assert!(eval_graph(&g, &phi, &BTreeMap::new()).unwrap());
        let enc = graph_encode(&g, &Limits::default()).unwrap();
        let t = translate_graph_sentence(&phi).unwrap();
        assert!(eval(&enc.algebra, &t, &Env::new()).unwrap());
    }

    #[test]
    fn out_of_fragment() {
        for text in ["A x. x <= x", "E x. atom(x)", "A x. x* = x", "E x. E(x, 0)"] {
            let phi = parse_formula(text).unwrap();
            assert!(translate_graph_sentence(&phi).is_err(), "{text}");
        }
    }

    #[test]
    fn vertex_and_edge_on_the_example() {
        let enc = graph_encode(&example_graph(), &Limits::default()).unwrap();
        let a = &enc.algebra;
        let vs = satisfiers(a, &Formula::pred("vertex", &["x"]), "x").unwrap();
        assert_eq!(vs.len(), 3);
        let labels: Vec<String> = vs.iter().map(|&x| a.label(x)).collect();
        let find = |name: &str| vs[labels.iter().position(|l| l.contains(name)).unwrap()];
        let (u, v, w) = (find("{u}"), find("{v}"), find("{w}"));
        let mut edge = Compiled::new(
            a,
            &Formula::pred("edge", &["x", "y"]),
            &["x".into(), "y".into()],
            library_formulas(),
        )
        .unwrap();
        assert!(edge.evaluate(&[u, v]));
        assert!(!edge.evaluate(&[u, w]));
        assert!(eval(a, &Formula::pred("unique_atom", &[]), &Env::new()).unwrap());
        let fo = fo_recover_graph(a).unwrap();
        assert_eq!(fo, recover_graph(a).unwrap());
    }

    #[test]
    fn b1_is_a_single_vertex() {
        let g = fo_recover_graph(&make_bnalg(1).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edges().len()), (1, 0));
        assert_eq!(
            fo_recover_graph(&make_bnalg(2).unwrap()),
            Err(Error::AtomCount(2))
        );
    }
}
