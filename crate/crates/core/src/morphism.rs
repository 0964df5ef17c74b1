//! Homomorphisms between finite p-algebras and the backtracking searches for
//! embeddings and isomorphisms.

use std::fmt;

use crate::algebra::FinitePAlgebra;
use crate::error::{Error, Result};

/// A map between finite p-algebras preserving `&`, `|`, `*`, `0`, `1` and the
/// named constants the two algebras share.
#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FinitePAlgebra,
    target: FinitePAlgebra,
    map: Vec<usize>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("source_size", &self.source.size())
            .field("target_size", &self.target.size())
            .field("map", &self.map)
            .finish()
    }
}

/// First way in which `map` fails to be a homomorphism, or `None`.
pub fn homomorphism_violation(
    source: &FinitePAlgebra,
    target: &FinitePAlgebra,
    map: &[usize],
) -> Option<String> {
    if map.len() != source.size() {
        return Some(format!(
            "map has {} entries for {} elements",
            map.len(),
            source.size()
        ));
    }
    if let Some((x, &y)) = map.iter().enumerate().find(|&(_, &y)| y >= target.size()) {
        return Some(format!("{x} maps to {y}, outside the target"));
    }
    if map[source.zero()] != target.zero() {
        return Some("zero not preserved".into());
    }
    if map[source.one()] != target.one() {
        return Some("one not preserved".into());
    }
    for (name, &c) in source.constants() {
        if let Some(d) = target.constant(name) {
            if map[c] != d {
                return Some(format!("constant {name} not preserved"));
            }
        }
    }
    for x in source.elements() {
        if map[source.star(x)] != target.star(map[x]) {
            return Some(format!("star not preserved at {}", source.label(x)));
        }
        for y in source.elements() {
            if map[source.meet(x, y)] != target.meet(map[x], map[y]) {
                return Some(format!(
                    "meet not preserved at ({}, {})",
                    source.label(x),
                    source.label(y)
                ));
            }
            if map[source.join(x, y)] != target.join(map[x], map[y]) {
                return Some(format!(
                    "join not preserved at ({}, {})",
                    source.label(x),
                    source.label(y)
                ));
            }
        }
    }
    None
}

impl Homomorphism {
    pub fn new(source: &FinitePAlgebra, target: &FinitePAlgebra, map: Vec<usize>) -> Result<Self> {
        if let Some(why) = homomorphism_violation(source, target, &map) {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(a: &FinitePAlgebra) -> Self {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            map: a.elements().collect(),
        }
    }

    pub fn source(&self) -> &FinitePAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FinitePAlgebra {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        Homomorphism::new(
            &self.source,
            &other.target,
            self.map.iter().map(|&x| other.map[x]).collect(),
        )
    }
}

enum Constraint {
    Meet(usize, usize, usize),
    Join(usize, usize, usize),
    Star(usize, usize),
}

struct Search<'a> {
    a: &'a FinitePAlgebra,
    b: &'a FinitePAlgebra,
    candidates: Vec<Vec<usize>>,
    /// Constraints whose largest involved element is the index.
    triggers: Vec<Vec<Constraint>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FinitePAlgebra, b: &'a FinitePAlgebra, candidates: Vec<Vec<usize>>) -> Self {
        let n = a.size();
        let mut triggers: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
        for u in 0..n {
            let s = a.star(u);
            triggers[u.max(s)].push(Constraint::Star(u, s));
            for v in u + 1..n {
                if a.leq(u, v) || a.leq(v, u) {
                    // implied by the order check
                    continue;
                }
                let w = a.meet(u, v);
                triggers[u.max(v).max(w)].push(Constraint::Meet(u, v, w));
                let w = a.join(u, v);
                triggers[u.max(v).max(w)].push(Constraint::Join(u, v, w));
            }
        }
        Search {
            a,
            b,
            candidates,
            triggers,
            map: vec![usize::MAX; n],
            used: vec![false; b.size()],
        }
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        let (a, b, h) = (self.a, self.b, &self.map);
        for z in 0..x {
            if a.leq(z, x) != b.leq(h[z], y) || a.leq(x, z) != b.leq(y, h[z]) {
                return false;
            }
        }
        let img = |e: usize| if e == x { y } else { h[e] };
        self.triggers[x].iter().all(|c| match *c {
            Constraint::Meet(u, v, w) => img(w) == b.meet(img(u), img(v)),
            Constraint::Join(u, v, w) => img(w) == b.join(img(u), img(v)),
            Constraint::Star(u, s) => img(s) == b.star(img(u)),
        })
    }

    fn run(&mut self, x: usize) -> bool {
        if x == self.map.len() {
            return true;
        }
        for i in 0..self.candidates[x].len() {
            let y = self.candidates[x][i];
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            if self.run(x + 1) {
                return true;
            }
            self.used[y] = false;
        }
        self.map[x] = usize::MAX;
        false
    }
}

fn fixed_points(a: &FinitePAlgebra, b: &FinitePAlgebra) -> Vec<Option<usize>> {
    let mut fixed = vec![None; a.size()];
    fixed[a.zero()] = Some(b.zero());
    fixed[a.one()] = Some(b.one());
    for (name, &c) in a.constants() {
        if let Some(d) = b.constant(name) {
            fixed[c] = Some(d);
        }
    }
    fixed
}

/// Whether the forced images (bounds, shared constants) are mutually consistent.
fn fixed_consistent(a: &FinitePAlgebra, b: &FinitePAlgebra) -> bool {
    let mut forced = vec![(a.zero(), b.zero()), (a.one(), b.one())];
    for (name, &c) in a.constants() {
        if let Some(d) = b.constant(name) {
            forced.push((c, d));
        }
    }
    forced
        .iter()
        .all(|&(x, y)| forced.iter().all(|&(u, v)| (x == u) == (y == v)))
}

/// The lexicographically least injective homomorphism `a -> b`, searching
/// images in ascending index order.
pub fn find_embedding(a: &FinitePAlgebra, b: &FinitePAlgebra) -> Option<Homomorphism> {
    if a.size() > b.size() || !fixed_consistent(a, b) {
        return None;
    }
    let fixed = fixed_points(a, b);
    let candidates = fixed
        .iter()
        .map(|f| match f {
            Some(y) => vec![*y],
            None => b.elements().collect(),
        })
        .collect();
    let mut search = Search::new(a, b, candidates);
    search.run(0).then(|| Homomorphism {
        source: a.clone(),
        target: b.clone(),
        map: search.map,
    })
}

type Fingerprint = (usize, usize, usize, usize, usize, bool);

fn fingerprints(a: &FinitePAlgebra) -> Vec<Fingerprint> {
    let order = a.order();
    let height = order.heights();
    let depth = order.dual().heights();
    a.elements()
        .map(|x| {
            let s = a.star(x);
            (
                height[x],
                depth[x],
                a.down_set(x).count_ones(..),
                a.up_set(x).count_ones(..),
                height[s],
                a.star(s) == x,
            )
        })
        .collect()
}

/// An isomorphism `a -> b`, if one exists. Shared named constants must correspond.
pub fn is_isomorphic(a: &FinitePAlgebra, b: &FinitePAlgebra) -> Option<Homomorphism> {
    if a.size() != b.size() || !fixed_consistent(a, b) {
        return None;
    }
    let fa = fingerprints(a);
    let fb = fingerprints(b);
    let (mut sa, mut sb) = (fa.clone(), fb.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let fixed = fixed_points(a, b);
    let candidates = a
        .elements()
        .map(|x| match fixed[x] {
            Some(y) => vec![y],
            None => b.elements().filter(|&y| fa[x] == fb[y]).collect(),
        })
        .collect();
    let mut search = Search::new(a, b, candidates);
    search.run(0).then(|| Homomorphism {
        source: a.clone(),
        target: b.clone(),
        map: search.map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_bnalg, power, product};
    use crate::Limits;

    /// Every injective map fixing the bounds, checked exhaustively.
    fn brute_force_embeds(a: &FinitePAlgebra, b: &FinitePAlgebra) -> bool {
        let n = a.size();
        let mut map = vec![usize::MAX; n];
        fn go(a: &FinitePAlgebra, b: &FinitePAlgebra, x: usize, map: &mut Vec<usize>) -> bool {
            if x == map.len() {
                return homomorphism_violation(a, b, map).is_none();
            }
            let choices: Vec<usize> = if x == a.zero() {
                vec![b.zero()]
            } else if x == a.one() {
                vec![b.one()]
            } else {
                b.elements().collect()
            };
            for y in choices {
                if map[..x].contains(&y) {
                    continue;
                }
                map[x] = y;
                if go(a, b, x + 1, map) {
                    return true;
                }
            }
            false
        }
        go(a, b, 0, &mut map)
    }

    #[test]
    fn b1_into_powers_of_b0_is_absent() {
        let b0 = make_bnalg(0).unwrap();
        let b1 = make_bnalg(1).unwrap();
        for k in 1..=3 {
            let p = power(&b0, k, &Limits::default()).unwrap();
            assert!(find_embedding(&b1, &p).is_none());
            assert!(!brute_force_embeds(&b1, &p));
        }
    }

    #[test]
    fn embedding_agrees_with_brute_force() {
        let l = Limits::default();
        let b0 = make_bnalg(0).unwrap();
        let b1 = make_bnalg(1).unwrap();
        let b2 = make_bnalg(2).unwrap();
        let cube = power(&b1, 3, &l).unwrap();
        let sq = product(&[b1.clone(), b0.clone()], &l).unwrap();
        let mut pairs = Vec::new();
        for a in [&b0, &b1, &b2] {
            for b in [&b0, &b1, &b2, &sq, &cube] {
                pairs.push((a, b));
            }
        }
        pairs.push((&sq, &sq));
        pairs.push((&sq, &b2));
        {
            for (a, b) in pairs {
                let found = find_embedding(a, b);
                assert_eq!(found.is_some(), brute_force_embeds(a, b), "{a:?} -> {b:?}");
                if let Some(h) = found {
                    assert!(h.is_injective());
                    assert!(homomorphism_violation(a, b, h.map()).is_none());
                }
            }
        }
    }

    #[test]
    fn isomorphism_cases() {
        let l = Limits::default();
        let b1 = make_bnalg(1).unwrap();
        let by_hand = FinitePAlgebra::from_lattice_order(&crate::poset::FinitePoset::chain(3)).unwrap();
        assert!(is_isomorphic(&b1, &by_hand).is_some());
        let sq = power(&b1, 2, &l).unwrap();
        assert!(is_isomorphic(&sq, &make_bnalg(2).unwrap()).is_none());
        let iso = is_isomorphic(&sq, &sq).unwrap();
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn homomorphism_rejects_bad_maps() {
        let b1 = make_bnalg(1).unwrap();
        // e |-> 0 breaks star: e* = 0 but 0* = 1
        assert!(Homomorphism::new(&b1, &b1, vec![0, 0, 2]).is_err());
        // collapsing e and 1 is the quotient by a congruence
        assert!(Homomorphism::new(&b1, &b1, vec![0, 2, 2]).is_ok());
        assert!(Homomorphism::new(&b1, &b1, vec![0, 1]).is_err());
        let id = Homomorphism::identity(&b1);
        assert!(id.is_isomorphism());
        assert_eq!(id.then(&id).unwrap().map(), &[0, 1, 2]);
    }
}
