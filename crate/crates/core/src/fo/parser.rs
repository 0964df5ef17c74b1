//! Text syntax: `&`, `|`, `->`, `!`, `!=`, postfix `*`, `<=`, `=`, quantifiers
//! `A x.`, `E x.`, `E! x.`, constants `0`, `1`, `ebar`, and predicate calls
//! `name(t, ..)`. Quantifier bodies extend as far right as possible.
//!
//! `&` and `|` serve both as lattice operations and as connectives. Inside
//! the right-hand side of a comparison, an operator whose right operand is
//! itself followed by a comparison is read as a connective, so
//! `x = y | x = z` means `(x = y) | (x = z)` while `x | y = z` compares the
//! join.

use super::syntax::{Formula, Quantifier, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Amp,
    Bar,
    Arrow,
    Bang,
    Neq,
    Star,
    Leq,
    Eq,
    LParen,
    RParen,
    Comma,
    Dot,
    Define,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '!' if next == Some('=') => (Tok::Neq, 2),
            '!' => (Tok::Bang, 1),
            '*' => (Tok::Star, 1),
            '<' if next == Some('=') => (Tok::Leq, 2),
            '=' => (Tok::Eq, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            ':' if next == Some('=') => (Tok::Define, 2),
            '0' | '1' if !next.is_some_and(|d| d.is_alphanumeric() || d == '_') => {
                (if c == '0' { Tok::Zero } else { Tok::One }, 1)
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                out.push((Tok::Ident(word), col));
                i = j;
                continue;
            }
            other => return Err(Error::parse(format!("column {col}"), format!("unexpected `{other}`"))),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

const RESERVED: [&str; 5] = ["A", "E", "true", "false", "ebar"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end_col: text.chars().count() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let col = self.toks.get(self.pos).map_or(self.end_col, |&(_, c)| c);
        Error::parse(format!("column {col}"), message)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(name)) if !RESERVED.contains(&name.as_str()) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error("expected a variable name")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(Tok::Ident(word)) = self.peek() {
            let q = match (word.as_str(), self.peek_at(1)) {
                ("A", _) => Some((Quantifier::Forall, 1)),
                ("E", Some(Tok::Bang)) => Some((Quantifier::ExistsUnique, 2)),
                ("E", Some(Tok::LParen)) => None,
                ("E", _) => Some((Quantifier::Exists, 1)),
                _ => None,
            };
            if let Some((q, skip)) = q {
                self.pos += skip;
                let v = self.ident()?;
                self.expect(&Tok::Dot, "`.` after the bound variable")?;
                let body = self.formula()?;
                return Ok(Formula::Quant(q, v, Box::new(body)));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        match self.comparison() {
            Ok(f) => Ok(f),
            Err(e) => {
                self.pos = start;
                let fallback = self.atom_other();
                if fallback.is_err() && self.pos == start {
                    return Err(e);
                }
                fallback
            }
        }
    }

    fn atom_other(&mut self) -> Result<Formula> {
        let start = self.pos;
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(word)) if word == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(word)) if word == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) if name != "A" && name != "ebar" => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.term(false)?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(&Tok::Comma, "`,` or `)`")?;
                        }
                    }
                } else if name == "E" {
                    self.pos = start;
                    return Err(self.error("expected a bound variable after `E`"));
                }
                Ok(Formula::Pred(name, args))
            }
            _ => Err(self.error("expected a formula")),
        }
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.term(false)?;
        let op = self.peek().cloned();
        match op {
            Some(Tok::Eq) | Some(Tok::Neq) | Some(Tok::Leq) => self.pos += 1,
            _ => return Err(self.error("expected `=`, `!=` or `<=`")),
        }
        let rhs = self.term(true)?;
        Ok(match op {
            Some(Tok::Eq) => Formula::Eq(lhs, rhs),
            Some(Tok::Neq) => Formula::not(Formula::Eq(lhs, rhs)),
            _ => Formula::Leq(lhs, rhs),
        })
    }

    fn at_comparison(&self) -> bool {
        matches!(self.peek(), Some(Tok::Eq) | Some(Tok::Neq) | Some(Tok::Leq))
    }

    /// With `rhs`, stops before an operator that turns out to be a connective.
    fn term(&mut self, rhs: bool) -> Result<Term> {
        let mut t = self.meet_term(rhs)?;
        loop {
            let save = self.pos;
            if !self.eat(&Tok::Bar) {
                return Ok(t);
            }
            match self.meet_term(rhs) {
                Ok(u) if !(rhs && self.at_comparison()) => t = Term::join(t, u),
                Err(e) if !rhs => return Err(e),
                _ => {
                    self.pos = save;
                    return Ok(t);
                }
            }
        }
    }

    fn meet_term(&mut self, rhs: bool) -> Result<Term> {
        let mut t = self.postfix()?;
        loop {
            let save = self.pos;
            if !self.eat(&Tok::Amp) {
                return Ok(t);
            }
            match self.postfix() {
                Ok(u) if !(rhs && self.at_comparison()) => t = Term::meet(t, u),
                Err(e) if !rhs => return Err(e),
                _ => {
                    self.pos = save;
                    return Ok(t);
                }
            }
        }
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.primary()?;
        while self.eat(&Tok::Star) {
            t = Term::star(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(Tok::Ident(w)) if w == "ebar" => {
                self.pos += 1;
                Ok(Term::Const(w))
            }
            Some(Tok::Ident(w)) if !RESERVED.contains(&w.as_str()) => {
                if self.peek_at(1) == Some(&Tok::LParen) {
                    return Err(self.error("predicate call where a term was expected"));
                }
                self.pos += 1;
                Ok(Term::Var(w))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term(false)?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term(false)?;
    p.finish()?;
    Ok(t)
}

/// `name(x, y) := body`, or `name := body` for a sentence.
pub(crate) fn parse_definition(text: &str) -> Result<(String, Vec<String>, Formula)> {
    let mut p = Parser::new(text)?;
    let name = p.ident()?;
    let mut params = Vec::new();
    if p.eat(&Tok::LParen) && !p.eat(&Tok::RParen) {
        loop {
            params.push(p.ident()?);
            if p.eat(&Tok::RParen) {
                break;
            }
            p.expect(&Tok::Comma, "`,` or `)`")?;
        }
    }
    p.expect(&Tok::Define, "`:=`")?;
    let body = p.formula()?;
    p.finish()?;
    Ok((name, params, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn connective_after_comparison() {
        let f = parse_formula("x = y | x = z").unwrap();
        assert_eq!(
            f,
            Formula::or(Formula::Eq(v("x"), v("y")), Formula::Eq(v("x"), v("z")))
        );
    }

    #[test]
    fn join_on_the_left() {
        let f = parse_formula("A x. x | x* = 1").unwrap();
        assert_eq!(
            f,
            Formula::forall("x", Formula::Eq(Term::join(v("x"), Term::star(v("x"))), Term::One))
        );
    }

    #[test]
    fn join_on_the_right_before_arrow() {
        let f = parse_formula("x = y | z -> x = y | x = z").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::Eq(v("x"), Term::join(v("y"), v("z"))),
                Formula::or(Formula::Eq(v("x"), v("y")), Formula::Eq(v("x"), v("z")))
            )
        );
    }

    #[test]
    fn meet_binds_tighter() {
        let f = parse_formula("x = a | b & c = d").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::Eq(v("x"), Term::join(v("a"), v("b"))),
                Formula::Eq(v("c"), v("d"))
            )
        );
    }

    #[test]
    fn quantifiers_and_predicates() {
        let f = parse_formula("E! z. x <= z & join_irreducible(z)").unwrap();
        let Formula::Quant(q, var, body) = f else { panic!() };
        assert_eq!((q, var.as_str()), (Quantifier::ExistsUnique, "z"));
        assert_eq!(
            *body,
            Formula::and(Formula::Leq(v("x"), v("z")), Formula::pred("join_irreducible", &["z"]))
        );
        let g = parse_formula("E x. A y. !E(x,y)").unwrap();
        assert_eq!(
            g,
            Formula::exists("x", Formula::forall("y", Formula::not(Formula::pred("E", &["x", "y"]))))
        );
        assert_eq!(parse_formula("unique_atom").unwrap(), Formula::pred("unique_atom", &[]));
    }

    #[test]
    fn constants_and_stars() {
        let f = parse_formula("E y. x = y** | ebar").unwrap();
        let expected = Formula::exists(
            "y",
            Formula::Eq(
                v("x"),
                Term::join(Term::star(Term::star(v("y"))), Term::Const("ebar".into())),
            ),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_term("(a | b)* & 0").unwrap().to_string(), "((a | b)* & 0)");
    }

    #[test]
    fn parenthesised_formula_versus_term() {
        let f = parse_formula("(x & y) = x & (y <= x -> true)").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::Eq(Term::meet(v("x"), v("y")), v("x")),
                Formula::implies(Formula::Leq(v("y"), v("x")), Formula::True)
            )
        );
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_formula("x = ").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        assert!(parse_formula("A . x = x").is_err());
        assert!(parse_formula("x = y )").is_err());
        assert!(parse_formula("x # y").is_err());
        assert!(parse_formula("E x x = x").is_err());
    }

    #[test]
    fn display_reparses() {
        for text in [
            "A x. x | x* = 1",
            "x != 0 & A y. (y <= x -> y = 0 | y = x)",
            "E! z. x <= z & y <= z & join_irreducible(z)",
            "!(a = b) -> (c & d)* <= ebar",
            "E x. A y. !E(x, y)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn definitions() {
        let (name, params, _) = parse_definition("covers(x, y) := x <= y & x != y").unwrap();
        assert_eq!((name.as_str(), params), ("covers", vec!["x".to_string(), "y".to_string()]));
        let (name, params, _) = parse_definition("law := A x. x <= 1").unwrap();
        assert_eq!((name.as_str(), params.len()), ("law", 0));
    }
}
