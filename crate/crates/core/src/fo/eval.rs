//! Evaluation by compiling a formula into slot-addressed nodes.
//!
//! Predicates are inlined. Every bound variable gets its own slot, so a
//! quantifier node whose body mentions at most one outer slot has a value
//! that depends on that slot alone and is cached per value. A quantifier whose
//! body is guarded by `v <= t` (or `t <= v`) ranges over the down-set (up-set)
//! of `t` only.

use std::collections::{BTreeMap, BTreeSet};

use super::library::{library_formulas, Library};
use super::syntax::{Formula, Quantifier, Term};
use crate::algebra::FinitePAlgebra;
use crate::error::{Error, Result};

/// Values of free variables.
pub type Env = BTreeMap<String, usize>;

#[derive(Clone, Debug)]
enum CTerm {
    Slot(usize),
    Elem(usize),
    Meet(Box<CTerm>, Box<CTerm>),
    Join(Box<CTerm>, Box<CTerm>),
    Star(Box<CTerm>),
}

impl CTerm {
    fn slots(&self, out: &mut BTreeSet<usize>) {
        match self {
            CTerm::Slot(s) => {
                out.insert(*s);
            }
            CTerm::Elem(_) => {}
            CTerm::Meet(a, b) | CTerm::Join(a, b) => {
                a.slots(out);
                b.slots(out);
            }
            CTerm::Star(a) => a.slots(out),
        }
    }
}

#[derive(Clone, Debug)]
enum Range {
    All,
    Below(CTerm),
    Above(CTerm),
}

#[derive(Clone, Debug)]
struct QuantNode {
    kind: Quantifier,
    slot: usize,
    range: Range,
    body: Node,
    /// Cache index and the one slot the value depends on, if any.
    memo: Option<(usize, Option<usize>)>,
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Eq(CTerm, CTerm),
    Leq(CTerm, CTerm),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Quant(Box<QuantNode>),
}

#[derive(Clone)]
enum Binding {
    Slot(usize),
    Term(CTerm),
}

struct Compiler<'a> {
    algebra: &'a FinitePAlgebra,
    library: &'a Library,
    slots: usize,
    memos: Vec<usize>,
}

fn conjuncts(n: &Node) -> Vec<&Node> {
    match n {
        Node::And(parts) => parts.iter().flat_map(conjuncts).collect(),
        other => vec![other],
    }
}

fn guard_for(slot: usize, n: &Node) -> Range {
    let free_of = |t: &CTerm| {
        let mut s = BTreeSet::new();
        t.slots(&mut s);
        !s.contains(&slot)
    };
    for c in conjuncts(n) {
        if let Node::Leq(a, b) = c {
            match (a, b) {
                (CTerm::Slot(s), t) if *s == slot && free_of(t) => return Range::Below(t.clone()),
                (t, CTerm::Slot(s)) if *s == slot && free_of(t) => return Range::Above(t.clone()),
                _ => {}
            }
        }
    }
    Range::All
}

impl<'a> Compiler<'a> {
    fn term(&self, t: &Term, scope: &[(String, Binding)]) -> Result<CTerm> {
        Ok(match t {
            Term::Var(v) => match scope.iter().rev().find(|(name, _)| name == v) {
                Some((_, Binding::Slot(s))) => CTerm::Slot(*s),
                Some((_, Binding::Term(ct))) => ct.clone(),
                None => return Err(Error::UnboundVariable(v.clone())),
            },
            Term::Zero => CTerm::Elem(self.algebra.zero()),
            Term::One => CTerm::Elem(self.algebra.one()),
            Term::Const(name) => CTerm::Elem(
                self.algebra
                    .constant(name)
                    .ok_or_else(|| Error::UnknownConstant(name.clone()))?,
            ),
            Term::Meet(a, b) => CTerm::Meet(Box::new(self.term(a, scope)?), Box::new(self.term(b, scope)?)),
            Term::Join(a, b) => CTerm::Join(Box::new(self.term(a, scope)?), Box::new(self.term(b, scope)?)),
            Term::Star(a) => CTerm::Star(Box::new(self.term(a, scope)?)),
        })
    }

    /// The compiled node and the slots it reads.
    fn formula(&mut self, f: &Formula, scope: &mut Vec<(String, Binding)>) -> Result<(Node, BTreeSet<usize>)> {
        let pair = |s: &Self, a: &Term, b: &Term, scope: &[(String, Binding)]| -> Result<_> {
            let (x, y) = (s.term(a, scope)?, s.term(b, scope)?);
            let mut free = BTreeSet::new();
            x.slots(&mut free);
            y.slots(&mut free);
            Ok((x, y, free))
        };
        Ok(match f {
            Formula::True => (Node::Const(true), BTreeSet::new()),
            Formula::False => (Node::Const(false), BTreeSet::new()),
            Formula::Eq(a, b) => {
                let (x, y, free) = pair(self, a, b, scope)?;
                (Node::Eq(x, y), free)
            }
            Formula::Leq(a, b) => {
                let (x, y, free) = pair(self, a, b, scope)?;
                (Node::Leq(x, y), free)
            }
            Formula::Pred(name, args) => {
                let def = self
                    .library
                    .get(name)
                    .filter(|d| d.params.len() == args.len())
                    .ok_or_else(|| Error::UnknownPredicate {
                        name: name.clone(),
                        arity: args.len(),
                    })?;
                let mut inner = Vec::with_capacity(args.len());
                for (p, t) in def.params.iter().zip(args) {
                    inner.push((p.clone(), Binding::Term(self.term(t, scope)?)));
                }
                self.formula(&def.body, &mut inner)?
            }
            Formula::Not(g) => {
                let (n, free) = self.formula(g, scope)?;
                (Node::Not(Box::new(n)), free)
            }
            Formula::And(g, h) | Formula::Or(g, h) => {
                let (a, mut free) = self.formula(g, scope)?;
                let (b, fb) = self.formula(h, scope)?;
                free.extend(fb);
                let mut parts = Vec::new();
                let is_and = matches!(f, Formula::And(..));
                for n in [a, b] {
                    match (n, is_and) {
                        (Node::And(ps), true) | (Node::Or(ps), false) => parts.extend(ps),
                        (n, _) => parts.push(n),
                    }
                }
                (if is_and { Node::And(parts) } else { Node::Or(parts) }, free)
            }
            Formula::Implies(g, h) => {
                let (a, mut free) = self.formula(g, scope)?;
                let (b, fb) = self.formula(h, scope)?;
                free.extend(fb);
                (Node::Implies(Box::new(a), Box::new(b)), free)
            }
            Formula::Quant(kind, v, g) => {
                let slot = self.slots;
                self.slots += 1;
                scope.push((v.clone(), Binding::Slot(slot)));
                let body = self.formula(g, scope);
                scope.pop();
                let (body, mut free) = body?;
                free.remove(&slot);
                let range = match (kind, &body) {
                    (Quantifier::Forall, Node::Implies(ante, _)) => guard_for(slot, ante),
                    (Quantifier::Forall, _) => Range::All,
                    _ => guard_for(slot, &body),
                };
                let memo = (free.len() <= 1).then(|| {
                    let key = free.iter().next().copied();
                    self.memos.push(if key.is_some() { self.algebra.size() } else { 1 });
                    (self.memos.len() - 1, key)
                });
                let node = QuantNode {
                    kind: *kind,
                    slot,
                    range,
                    body,
                    memo,
                };
                (Node::Quant(Box::new(node)), free)
            }
        })
    }
}

/// A formula compiled against one algebra, with cached quantifier values
/// kept across calls.
pub struct Compiled {
    algebra: FinitePAlgebra,
    root: Node,
    free: Vec<String>,
    slots: Vec<usize>,
    memo: Vec<Vec<u8>>,
}

impl Compiled {
    /// `free` lists the free variables in the order their values are passed
    /// to [`Compiled::evaluate`].
    pub fn new(a: &FinitePAlgebra, phi: &Formula, free: &[String], library: &Library) -> Result<Self> {
        let mut c = Compiler {
            algebra: a,
            library,
            slots: free.len(),
            memos: Vec::new(),
        };
        let mut scope: Vec<(String, Binding)> = free
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Binding::Slot(i)))
            .collect();
        let (root, _) = c.formula(phi, &mut scope)?;
        Ok(Compiled {
            algebra: a.clone(),
            root,
            free: free.to_vec(),
            slots: vec![0; c.slots],
            memo: c.memos.iter().map(|&n| vec![0; n]).collect(),
        })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Truth value under the given values of the free variables.
    ///
    /// Panics if `values` has the wrong length or holds an element outside
    /// the algebra.
    pub fn evaluate(&mut self, values: &[usize]) -> bool {
        assert_eq!(values.len(), self.free.len(), "one value per free variable");
        assert!(values.iter().all(|&v| v < self.algebra.size()), "value outside the algebra");
        self.slots[..values.len()].copy_from_slice(values);
        let mut m = Machine {
            a: &self.algebra,
            slots: &mut self.slots,
            memo: &mut self.memo,
        };
        m.eval(&self.root)
    }
}

struct Machine<'a> {
    a: &'a FinitePAlgebra,
    slots: &'a mut [usize],
    memo: &'a mut [Vec<u8>],
}

impl Machine<'_> {
    fn term(&self, t: &CTerm) -> usize {
        match t {
            CTerm::Slot(s) => self.slots[*s],
            CTerm::Elem(x) => *x,
            CTerm::Meet(a, b) => self.a.meet(self.term(a), self.term(b)),
            CTerm::Join(a, b) => self.a.join(self.term(a), self.term(b)),
            CTerm::Star(a) => self.a.star(self.term(a)),
        }
    }

    fn eval(&mut self, n: &Node) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::Eq(x, y) => self.term(x) == self.term(y),
            Node::Leq(x, y) => self.a.leq(self.term(x), self.term(y)),
            Node::Not(g) => !self.eval(g),
            Node::And(ps) => ps.iter().all(|p| self.eval(p)),
            Node::Or(ps) => ps.iter().any(|p| self.eval(p)),
            Node::Implies(g, h) => !self.eval(g) || self.eval(h),
            Node::Quant(q) => {
                let Some((id, key)) = q.memo else {
                    return self.quantify(q);
                };
                let k = key.map_or(0, |s| self.slots[s]);
                match self.memo[id][k] {
                    1 => false,
                    2 => true,
                    _ => {
                        let v = self.quantify(q);
                        self.memo[id][k] = 1 + v as u8;
                        v
                    }
                }
            }
        }
    }

    fn quantify(&mut self, q: &QuantNode) -> bool {
        let a = self.a;
        let candidates: Box<dyn Iterator<Item = usize>> = match &q.range {
            Range::All => Box::new(a.elements()),
            Range::Below(t) => Box::new(a.down_set(self.term(t)).ones()),
            Range::Above(t) => Box::new(a.up_set(self.term(t)).ones()),
        };
        let saved = self.slots[q.slot];
        let mut count = 0;
        let mut result = matches!(q.kind, Quantifier::Forall);
        for x in candidates {
            self.slots[q.slot] = x;
            let v = self.eval(&q.body);
            match q.kind {
                Quantifier::Forall if !v => {
                    result = false;
                    break;
                }
                Quantifier::Exists if v => {
                    result = true;
                    break;
                }
                Quantifier::ExistsUnique if v => {
                    count += 1;
                    if count > 1 {
                        break;
                    }
                }
                _ => {}
            }
        }
        if q.kind == Quantifier::ExistsUnique {
            result = count == 1;
        }
        self.slots[q.slot] = saved;
        result
    }
}

fn check_env(a: &FinitePAlgebra, phi: &Formula, env: &Env) -> Result<()> {
    for v in phi.free_vars() {
        match env.get(&v) {
            None => return Err(Error::UnboundVariable(v)),
            Some(&x) if x >= a.size() => {
                return Err(Error::UnboundVariable(format!("{v} = {x} is outside the algebra")))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Truth of `phi` in `a` under `env`, with the standard predicate library.
pub fn eval(a: &FinitePAlgebra, phi: &Formula, env: &Env) -> Result<bool> {
    eval_with_library(a, phi, env, library_formulas())
}

pub fn eval_with_library(a: &FinitePAlgebra, phi: &Formula, env: &Env, library: &Library) -> Result<bool> {
    check_env(a, phi, env)?;
    let (names, values): (Vec<String>, Vec<usize>) = env.iter().map(|(k, &v)| (k.clone(), v)).unzip();
    Ok(Compiled::new(a, phi, &names, library)?.evaluate(&values))
}

/// Elements satisfying a formula in one free variable, ascending.
pub fn satisfiers(a: &FinitePAlgebra, phi: &Formula, var: &str) -> Result<Vec<usize>> {
    let mut c = Compiled::new(a, phi, &[var.to_string()], library_formulas())?;
    Ok(a.elements().filter(|&x| c.evaluate(&[x])).collect())
}

/// A truth value, with the values of the leading block of like quantifiers
/// that decide it: a counterexample for a false universal, an instance for a
/// true existential. Assignments are tried from the greatest carrier index
/// down, so on an upset algebra the reported witness is as high as possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: bool,
    pub witness: Vec<(String, usize)>,
}

pub fn eval_with_witness(a: &FinitePAlgebra, phi: &Formula, env: &Env) -> Result<Evaluation> {
    check_env(a, phi, env)?;
    let mut block = Vec::new();
    let mut body = phi;
    let mut kind = None;
    while let Formula::Quant(q, v, g) = body {
        if *q == Quantifier::ExistsUnique || kind.is_some_and(|k| k != *q) {
            break;
        }
        kind = Some(*q);
        block.push(v.clone());
        body = g;
    }
    let Some(kind) = kind else {
        return Ok(Evaluation {
            value: eval(a, phi, env)?,
            witness: Vec::new(),
        });
    };
    let mut names: Vec<String> = env.keys().cloned().collect();
    let mut values: Vec<usize> = env.values().copied().collect();
    let base = names.len();
    names.extend(block.iter().cloned());
    let n = a.size();
    values.resize(names.len(), n - 1);
    let mut c = Compiled::new(a, body, &names, library_formulas())?;
    let want = kind == Quantifier::Exists;
    loop {
        if c.evaluate(&values) == want {
            let witness = block.iter().cloned().zip(values[base..].iter().copied()).collect();
            return Ok(Evaluation { value: want, witness });
        }
        // odometer counting down over the block, last variable fastest
        let mut k = names.len();
        loop {
            if k == base {
                return Ok(Evaluation {
                    value: !want,
                    witness: Vec::new(),
                });
            }
            k -= 1;
            if values[k] > 0 {
                values[k] -= 1;
                break;
            }
            values[k] = n - 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_bnalg, powerset_algebra};
    use crate::fo::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn boolean_law() {
        let law = f("A x. x | x* = 1");
        assert!(eval(&make_bnalg(0).unwrap(), &law, &Env::new()).unwrap());
        let b1 = make_bnalg(1).unwrap();
        let r = eval_with_witness(&b1, &law, &Env::new()).unwrap();
        assert!(!r.value);
        assert_eq!(r.witness, [("x".to_string(), 1)]);
        assert_eq!(b1.label(1), "e");
    }

    #[test]
    fn free_variables_and_errors() {
        let b1 = make_bnalg(1).unwrap();
        let env: Env = [("x".to_string(), 1)].into();
        assert!(eval(&b1, &f("x* = 0"), &env).unwrap());
        assert_eq!(
            eval(&b1, &f("y = 0"), &env),
            Err(Error::UnboundVariable("y".into()))
        );
        assert_eq!(
            eval(&b1, &f("x = ebar"), &env),
            Err(Error::UnknownConstant("ebar".into()))
        );
        assert!(matches!(
            eval(&b1, &f("nope(x)"), &env),
            Err(Error::UnknownPredicate { .. })
        ));
        let bad: Env = [("x".to_string(), 7)].into();
        assert!(eval(&b1, &f("x = x"), &bad).is_err());
    }

    #[test]
    fn unique_existence() {
        let b2 = powerset_algebra(2).unwrap();
        assert!(!eval(&b2, &f("E! x. atom(x)"), &Env::new()).unwrap());
        assert!(eval(&b2, &f("E! x. A y. y <= x"), &Env::new()).unwrap());
        assert!(eval(&make_bnalg(2).unwrap(), &f("E! x. x* = 1"), &Env::new()).unwrap());
    }

    #[test]
    fn predicate_arguments_are_terms() {
        let b2 = powerset_algebra(2).unwrap();
        // atom(y*) for the atom y = a0 holds since its complement is the other atom
        let env: Env = [("y".to_string(), 1)].into();
        assert!(eval(&b2, &f("atom(y*)"), &env).unwrap());
        assert!(!eval(&b2, &f("atom(y | y*)"), &env).unwrap());
    }

    #[test]
    fn shadowing() {
        let b1 = make_bnalg(1).unwrap();
        let env: Env = [("x".to_string(), 0)].into();
        assert!(eval(&b1, &f("E x. x = 1"), &env).unwrap());
        assert!(eval(&b1, &f("x = 0 & E x. x = 1"), &env).unwrap());
    }

    #[test]
    fn guards_do_not_change_meaning() {
        // unguarded and guarded spellings of the same sentences
        let a = make_bnalg(2).unwrap();
        let pairs = [
            ("A x. A y. (y <= x -> y & x = y)", "A x. A y. (y & x = y | !(y <= x))"),
            ("E x. (0 <= x & x* = 0 & x != 1)", "E x. (x* = 0 & !(x = 1))"),
            ("A x. E! y. (x <= y & y* = x*)", "A x. E! y. (y* = x* & x <= y)"),
        ];
        for (g, u) in pairs {
            assert_eq!(
                eval(&a, &f(g), &Env::new()).unwrap(),
                eval(&a, &f(u), &Env::new()).unwrap(),
                "{g}"
            );
        }
    }

    #[test]
    fn witness_for_existential_block() {
        let b2 = make_bnalg(2).unwrap();
        let r = eval_with_witness(&b2, &f("E x. E y. x & y = 0 & x != 0 & y != 0"), &Env::new()).unwrap();
        assert!(r.value);
        assert_eq!(r.witness, [("x".to_string(), 2), ("y".to_string(), 1)]);
        let r = eval_with_witness(&b2, &f("A x. x <= 1"), &Env::new()).unwrap();
        assert_eq!((r.value, r.witness.len()), (true, 0));
    }
}
