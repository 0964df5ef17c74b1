//! Congruences of finite p-algebras: principal congruences by fixpoint, the
//! full congruence lattice for small carriers, and subdirect irreducibility.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::FinitePAlgebra;
use crate::error::{Error, Result};
use crate::Limits;

/// An operation-compatible equivalence relation. Each element is mapped to the
/// least element of its block.
#[derive(Clone, PartialEq, Eq)]
pub struct Congruence {
    algebra: FinitePAlgebra,
    rep: Vec<usize>,
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Congruence{}", self.describe())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; the smaller root survives. Returns whether anything changed.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = (rx.min(ry), rx.max(ry));
        self.parent[hi] = lo;
        true
    }

    fn reps(mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// First compatibility failure of a partition (given by block representatives).
fn compatibility_violation(a: &FinitePAlgebra, rep: &[usize]) -> Option<String> {
    for x in a.elements() {
        for y in a.elements() {
            if rep[x] != rep[y] {
                continue;
            }
            if rep[a.star(x)] != rep[a.star(y)] {
                return Some(format!("{} ~ {} but their stars are not", a.label(x), a.label(y)));
            }
            for z in a.elements() {
                if rep[a.meet(x, z)] != rep[a.meet(y, z)] || rep[a.join(x, z)] != rep[a.join(y, z)]
                {
                    return Some(format!(
                        "{} ~ {} is not preserved by combining with {}",
                        a.label(x),
                        a.label(y),
                        a.label(z)
                    ));
                }
            }
        }
    }
    None
}

impl Congruence {
    /// Validates a partition given as blocks.
    pub fn new(algebra: &FinitePAlgebra, blocks: &[Vec<usize>]) -> Result<Self> {
        let n = algebra.size();
        let mut rep = vec![usize::MAX; n];
        for block in blocks {
            let Some(&least) = block.iter().min() else {
                continue;
            };
            for &x in block {
                if x >= n || rep[x] != usize::MAX {
                    return Err(Error::NotHomomorphism(format!(
                        "blocks do not partition the carrier (element {x})"
                    )));
                }
                rep[x] = least;
            }
        }
        if rep.contains(&usize::MAX) {
            return Err(Error::NotHomomorphism("blocks do not cover the carrier".into()));
        }
        if let Some(why) = compatibility_violation(algebra, &rep) {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(Congruence {
            algebra: algebra.clone(),
            rep,
        })
    }

    pub fn identity(a: &FinitePAlgebra) -> Self {
        Congruence {
            algebra: a.clone(),
            rep: a.elements().collect(),
        }
    }

    pub fn full(a: &FinitePAlgebra) -> Self {
        Congruence {
            algebra: a.clone(),
            rep: vec![0; a.size()],
        }
    }

    pub fn algebra(&self) -> &FinitePAlgebra {
        &self.algebra
    }

    /// Least element of the block of `x`.
    pub fn representative(&self, x: usize) -> usize {
        self.rep[x]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in self.algebra.elements() {
            out.entry(self.rep[x]).or_default().push(x);
        }
        out.into_values().collect()
    }

    pub fn block_count(&self) -> usize {
        self.algebra.elements().filter(|&x| self.rep[x] == x).count()
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.algebra.size()
    }

    pub fn is_full(&self) -> bool {
        self.block_count() <= 1
    }

    /// Whether `self ⊆ other`.
    pub fn is_below(&self, other: &Congruence) -> bool {
        self.algebra
            .elements()
            .all(|x| other.related(x, self.rep[x]))
    }

    /// The join in the congruence lattice: the transitive closure of the union.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.algebra.size());
        for x in self.algebra.elements() {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        Congruence {
            algebra: self.algebra.clone(),
            rep: uf.reps(),
        }
    }

    /// Whether the relation is still a congruence for an extra binary operation.
    /// Returns a witness `(a, b, c, d)` with `a ~ b`, `c ~ d`, but `op(a, c) ≁ op(b, d)`.
    pub fn binary_violation(&self, table: &[Vec<usize>]) -> Option<(usize, usize, usize, usize)> {
        let n = self.algebra.size();
        for a in 0..n {
            for b in 0..n {
                if !self.related(a, b) {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        if self.related(c, d) && !self.related(table[a][c], table[b][d]) {
                            return Some((a, b, c, d));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn describe(&self) -> String {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<String> = b.iter().map(|&x| self.algebra.label(x)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        blocks.join("")
    }
}

/// `θ(x, y)`, the least congruence identifying `x` and `y`.
pub fn principal_congruence(a: &FinitePAlgebra, x: usize, y: usize) -> Congruence {
    let mut uf = UnionFind::new(a.size());
    let mut pending = Vec::new();
    if uf.union(x, y) {
        pending.push((x, y));
    }
    while let Some((u, v)) = pending.pop() {
        let mut push = |p: usize, q: usize, uf: &mut UnionFind| {
            if uf.union(p, q) {
                pending.push((p, q));
            }
        };
        push(a.star(u), a.star(v), &mut uf);
        for w in a.elements() {
            push(a.meet(u, w), a.meet(v, w), &mut uf);
            push(a.join(u, w), a.join(v, w), &mut uf);
        }
    }
    Congruence {
        algebra: a.clone(),
        rep: uf.reps(),
    }
}

/// The lattice of all congruences, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    congruences: Vec<Congruence>,
    below: Vec<Vec<bool>>,
}

impl CongruenceLattice {
    /// Congruences sorted from finest to coarsest (then by representative table).
    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn is_below(&self, i: usize, j: usize) -> bool {
        self.below[i][j]
    }

    pub fn position(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|d| d.rep == c.rep)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.congruences.len() - 1
    }

    fn upper_covers(&self, i: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&j| {
                j != i
                    && self.below[i][j]
                    && !(0..n).any(|k| k != i && k != j && self.below[i][k] && self.below[k][j])
            })
            .collect()
    }

    /// Minimal nontrivial congruences.
    pub fn atoms(&self) -> Vec<usize> {
        let id = self.identity_index();
        self.upper_covers(id)
    }

    /// Congruences other than the full one with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| i != self.full_index() && self.upper_covers(i).len() == 1)
            .collect()
    }

    /// Meet-irreducible congruences with no meet-irreducible strictly below.
    pub fn minimal_meet_irreducibles(&self) -> Vec<usize> {
        let mi = self.meet_irreducibles();
        mi.iter()
            .copied()
            .filter(|&i| !mi.iter().any(|&j| j != i && self.below[j][i]))
            .collect()
    }
}

/// All congruences of `a`, generated by closing the principal congruences under join.
pub fn all_congruences(a: &FinitePAlgebra, limits: &Limits) -> Result<CongruenceLattice> {
    if a.size() > limits.max_congruence {
        return Err(Error::cap(
            "carrier size for the congruence lattice",
            limits.max_congruence,
            a.size(),
        ));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(Congruence::identity(a).rep);
    for x in a.elements() {
        for y in x + 1..a.size() {
            found.insert(principal_congruence(a, x, y).rep);
        }
    }
    loop {
        let current: Vec<Congruence> = found
            .iter()
            .map(|rep| Congruence {
                algebra: a.clone(),
                rep: rep.clone(),
            })
            .collect();
        let mut grew = false;
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                if found.insert(current[i].join(&current[j]).rep) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut congruences: Vec<Congruence> = found
        .into_iter()
        .map(|rep| Congruence {
            algebra: a.clone(),
            rep,
        })
        .collect();
    congruences.sort_by(|c, d| {
        d.block_count()
            .cmp(&c.block_count())
            .then_with(|| c.rep.cmp(&d.rep))
    });
    let below = congruences
        .iter()
        .map(|c| congruences.iter().map(|d| c.is_below(d)).collect())
        .collect();
    Ok(CongruenceLattice { congruences, below })
}

/// Why an algebra is, or is not, subdirectly irreducible.
#[derive(Clone, Debug)]
pub enum Irreducibility {
    /// The least nontrivial congruence.
    Monolith(Congruence),
    /// Two distinct minimal nontrivial congruences.
    Incomparable(Congruence, Congruence),
    /// The one-element algebra has no nontrivial congruence.
    Trivial,
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Monolith(_))
    }
}

/// Decides subdirect irreducibility from the principal congruences alone:
/// every nontrivial congruence contains one, so a monolith exists iff there is
/// exactly one minimal principal congruence.
pub fn subdirect_irreducibility(a: &FinitePAlgebra, limits: &Limits) -> Result<Irreducibility> {
    if a.size() > limits.max_si_size {
        return Err(Error::cap(
            "carrier size for subdirect irreducibility",
            limits.max_si_size,
            a.size(),
        ));
    }
    let mut principals: Vec<Congruence> = Vec::new();
    for x in a.elements() {
        for y in x + 1..a.size() {
            let c = principal_congruence(a, x, y);
            if !principals.iter().any(|d| d.rep == c.rep) {
                principals.push(c);
            }
        }
    }
    let minimal: Vec<&Congruence> = principals
        .iter()
        .filter(|c| !principals.iter().any(|d| d.rep != c.rep && d.is_below(c)))
        .collect();
    Ok(match minimal.as_slice() {
        [] => Irreducibility::Trivial,
        [m] => Irreducibility::Monolith((*m).clone()),
        [m1, m2, ..] => Irreducibility::Incomparable((*m1).clone(), (*m2).clone()),
    })
}

pub fn is_subdirectly_irreducible(a: &FinitePAlgebra, limits: &Limits) -> Result<bool> {
    Ok(subdirect_irreducibility(a, limits)?.is_irreducible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_bnalg, power};

    #[test]
    fn principal_on_three_chain() {
        let b1 = make_bnalg(1).unwrap();
        let t = principal_congruence(&b1, 1, 2);
        assert_eq!(t.blocks(), vec![vec![0], vec![1, 2]]);
        assert!(principal_congruence(&b1, 0, 2).is_full());
    }

    #[test]
    fn zero_one_collapses_everything() {
        for i in 0..4 {
            let b = make_bnalg(i).unwrap();
            assert!(principal_congruence(&b, b.zero(), b.one()).is_full());
        }
    }

    #[test]
    fn b0_has_two_congruences() {
        let b0 = make_bnalg(0).unwrap();
        let con = all_congruences(&b0, &Limits::default()).unwrap();
        assert_eq!(con.len(), 2);
        assert!(con.congruences()[0].is_identity());
        assert!(con.congruences()[1].is_full());
    }

    #[test]
    fn b2_has_a_monolith() {
        let b2 = make_bnalg(2).unwrap();
        let con = all_congruences(&b2, &Limits::default()).unwrap();
        assert_eq!(con.atoms().len(), 1);
        assert!(is_subdirectly_irreducible(&b2, &Limits::default()).unwrap());
    }

    #[test]
    fn square_of_b1_is_not_irreducible() {
        let l = Limits::default();
        let sq = power(&make_bnalg(1).unwrap(), 2, &l).unwrap();
        match subdirect_irreducibility(&sq, &l).unwrap() {
            Irreducibility::Incomparable(c, d) => {
                assert!(!c.is_below(&d) && !d.is_below(&c));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_algebra_is_not_irreducible() {
        let t = crate::algebra::trivial_algebra().unwrap();
        assert!(matches!(
            subdirect_irreducibility(&t, &Limits::default()).unwrap(),
            Irreducibility::Trivial
        ));
    }

    #[test]
    fn every_lattice_member_is_compatible() {
        let b3 = make_bnalg(3).unwrap();
        let con = all_congruences(&b3, &Limits::default()).unwrap();
        for c in con.congruences() {
            assert!(Congruence::new(&b3, &c.blocks()).is_ok());
        }
    }

    #[test]
    fn congruence_cap() {
        let l = Limits {
            max_congruence: 4,
            ..Limits::default()
        };
        assert!(matches!(
            all_congruences(&make_bnalg(2).unwrap(), &l),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn rejects_incompatible_partition() {
        let b1 = make_bnalg(1).unwrap();
        // {0, e} {1}: e* = 0 and 0* = 1 would have to be related
        assert!(Congruence::new(&b1, &[vec![0, 1], vec![2]]).is_err());
    }
}
