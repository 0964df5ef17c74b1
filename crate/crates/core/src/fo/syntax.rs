use std::collections::BTreeSet;
use std::fmt;

/// Terms over `0`, `1`, named constants, `&`, `|` and postfix `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Const(String),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
    ExistsUnique,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Leq(Term, Term),
    /// A named predicate, expanded from a library at evaluation time.
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn star(a: Term) -> Term {
        Term::Star(Box::new(a))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One | Term::Const(_) => {}
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Star(a) => a.vars(out),
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, v.to_string(), Box::new(f))
    }

    pub fn pred(name: &str, args: &[&str]) -> Formula {
        Formula::Pred(name.to_string(), args.iter().map(|a| Term::var(a)).collect())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |t: &Term, bound: &Vec<String>| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Leq(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| add(t, bound)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Quant(_, v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Meet(a, b) => write!(f, "({a} & {b})"),
            Term::Join(a, b) => write!(f, "({a} | {b})"),
            Term::Star(a) => write!(f, "{a}*"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Leq(a, b) => write!(f, "{a} <= {b}"),
            Formula::Pred(name, args) if args.is_empty() => f.write_str(name),
            Formula::Pred(name, args) => {
                let parts: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
            Formula::Not(g) => write!(f, "!({g})"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Or(g, h) => write!(f, "({g} | {h})"),
            Formula::Implies(g, h) => write!(f, "({g} -> {h})"),
            Formula::Quant(q, v, g) => {
                let q = match q {
                    Quantifier::Forall => "A",
                    Quantifier::Exists => "E",
                    Quantifier::ExistsUnique => "E!",
                };
                write!(f, "({q} {v}. {g})")
            }
        }
    }
}
