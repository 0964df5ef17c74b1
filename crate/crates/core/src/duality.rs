//! The finite, topology-free duality between p-algebras and posets.
//!
//! A poset `P` gives the p-algebra `Up(P)` of its upsets with
//! `X* = P \ ↓X`; an algebra `A` gives the poset `J(A)` of its join-irreducible
//! elements under the reversed order. Order-preserving maps `f` with
//! `f(max ↑p) = max ↑f(p)` (pp-morphisms) dualize to homomorphisms by preimage.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::algebra::FinitePAlgebra;
use crate::error::{Error, Result};
use crate::morphism::Homomorphism;
use crate::poset::{bitset, FinitePoset};
use crate::Limits;

/// Largest `n` accepted by [`enumerate_posets`].
pub const MAX_ENUMERATED_POSET: usize = 6;

/// An upward-closed subset of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Upset {
    members: FixedBitSet,
}

impl Upset {
    pub fn new(poset: &FinitePoset, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = FixedBitSet::with_capacity(poset.size());
        for p in members {
            if p >= poset.size() {
                return Err(Error::InvalidPoset(format!("element {p} out of range")));
            }
            set.insert(p);
        }
        if !poset.is_upset(&set) {
            return Err(Error::InvalidPoset("set is not upward closed".into()));
        }
        Ok(Upset { members: set })
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }
}

/// Orders bit sets by the number they encode (bit `p` has weight `2^p`).
fn numeric_cmp(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    let mut xa: Vec<usize> = a.ones().collect();
    let mut xb: Vec<usize> = b.ones().collect();
    xa.reverse();
    xb.reverse();
    xa.cmp(&xb)
}

/// All upsets of `p`, sorted by (size, numeric value of the bit mask).
pub fn upsets(p: &FinitePoset, limits: &Limits) -> Result<Vec<Upset>> {
    Ok(upset_sets(p, limits)?
        .into_iter()
        .map(|members| Upset { members })
        .collect())
}

fn upset_sets(p: &FinitePoset, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    let n = p.size();
    let mut order = p.linear_extension();
    order.reverse();
    let strict_up: Vec<FixedBitSet> = (0..n)
        .map(|x| {
            let mut s = p.up(x).clone();
            s.set(x, false);
            s
        })
        .collect();
    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);

    fn go(
        k: usize,
        order: &[usize],
        strict_up: &[FixedBitSet],
        current: &mut FixedBitSet,
        out: &mut Vec<FixedBitSet>,
        cap: usize,
    ) -> bool {
        if k == order.len() {
            out.push(current.clone());
            return out.len() <= cap;
        }
        let x = order[k];
        if !go(k + 1, order, strict_up, current, out, cap) {
            return false;
        }
        if strict_up[x].is_subset(current) {
            current.insert(x);
            let ok = go(k + 1, order, strict_up, current, out, cap);
            current.set(x, false);
            return ok;
        }
        true
    }

    if !go(0, &order, &strict_up, &mut current, &mut out, limits.max_size) {
        return Err(Error::cap("number of upsets", limits.max_size, out.len()));
    }
    out.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| numeric_cmp(a, b))
    });
    Ok(out)
}

fn set_label(p: &FinitePoset, set: &FixedBitSet) -> String {
    let names: Vec<String> = set.ones().map(|x| p.label(x)).collect();
    format!("{{{}}}", names.join(","))
}

/// `Up(P)` together with the upset behind each element.
pub(crate) fn upset_algebra_parts(p: &FinitePoset, limits: &Limits) -> Result<(FinitePAlgebra, Vec<FixedBitSet>)> {
    let sets = upset_sets(p, limits)?;
    let m = sets.len();
    let index: HashMap<&FixedBitSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let up = sets
        .iter()
        .map(|x| bitset(m, (0..m).filter(|&j| x.is_subset(&sets[j]))))
        .collect();
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    for i in 0..m {
        for j in i..m {
            let mut s = sets[i].clone();
            s.intersect_with(&sets[j]);
            let v = index[&s] as u32;
            meet[i * m + j] = v;
            meet[j * m + i] = v;
            let mut s = sets[i].clone();
            s.union_with(&sets[j]);
            let v = index[&s] as u32;
            join[i * m + j] = v;
            join[j * m + i] = v;
        }
    }
    let star = sets
        .iter()
        .map(|x| {
            let mut s = p.down_closure(x);
            s.toggle_range(..);
            index[&s] as u32
        })
        .collect();
    let labels = sets.iter().map(|s| set_label(p, s)).collect();
    let algebra = FinitePAlgebra::from_trusted(up, meet, join, star, 0, m - 1, Some(labels));
    Ok((algebra, sets))
}

/// `Up(P)`: upsets ordered by inclusion, with `X* = P \ ↓X`. Element `i` is
/// `upsets(p)[i]`; zero is the empty set and one is `P`.
pub fn upset_algebra(p: &FinitePoset, limits: &Limits) -> Result<FinitePAlgebra> {
    Ok(upset_algebra_parts(p, limits)?.0)
}

/// `J(A)`: the join-irreducible elements under the reversed order. Point `k`
/// of the result is `a.join_irreducible_elements()[k]`.
pub fn join_irreducibles(a: &FinitePAlgebra) -> FinitePoset {
    let ji = a.join_irreducible_elements();
    let k = ji.len();
    let labels = ji.iter().map(|&x| a.label(x)).collect();
    FinitePoset::from_relation(
        k,
        (0..k).flat_map(|i| {
            let ji = &ji;
            (0..k).filter(move |&j| a.leq(ji[j], ji[i])).map(move |j| (i, j))
        }),
        Some(labels),
    )
    .expect("reversed lattice order restricted to a subset is a partial order")
}

/// The canonical isomorphism `x ↦ {j ∈ J(A) : j <= x}` from `a` onto `Up(J(a))`.
pub fn duality_roundtrip(a: &FinitePAlgebra, limits: &Limits) -> Result<Homomorphism> {
    let ji = a.join_irreducible_elements();
    let jp = join_irreducibles(a);
    let (up, sets) = upset_algebra_parts(&jp, limits)?;
    let index: HashMap<&FixedBitSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut map = Vec::with_capacity(a.size());
    for x in a.elements() {
        let below = bitset(ji.len(), (0..ji.len()).filter(|&k| a.leq(ji[k], x)));
        match index.get(&below) {
            Some(&i) => map.push(i),
            None => {
                return Err(Error::NotDistributive(format!(
                    "{} has no upset image",
                    a.label(x)
                )))
            }
        }
    }
    let h = Homomorphism::new(a, &up, map).map_err(|e| Error::NotDistributive(e.to_string()))?;
    if !h.is_isomorphism() {
        return Err(Error::NotDistributive(format!(
            "{} elements against {} upsets",
            a.size(),
            up.size()
        )));
    }
    Ok(h)
}

/// Why a map fails to be a pp-morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PPViolation {
    WrongLength { expected: usize, found: usize },
    OutOfRange { p: usize, image: usize },
    NotOrderPreserving { p: usize, q: usize },
    /// `f(max ↑p) != max ↑f(p)`.
    MaximalElements { p: usize },
}

impl fmt::Display for PPViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PPViolation::WrongLength { expected, found } => {
                write!(f, "map has {found} entries for {expected} elements")
            }
            PPViolation::OutOfRange { p, image } => write!(f, "{p} maps to {image}, out of range"),
            PPViolation::NotOrderPreserving { p, q } => {
                write!(f, "{p} <= {q} but their images are not ordered")
            }
            PPViolation::MaximalElements { p } => {
                write!(f, "image of the maximal elements above {p} is not max ↑f({p})")
            }
        }
    }
}

pub fn check_pp_morphism(
    source: &FinitePoset,
    target: &FinitePoset,
    map: &[usize],
) -> std::result::Result<(), PPViolation> {
    if map.len() != source.size() {
        return Err(PPViolation::WrongLength {
            expected: source.size(),
            found: map.len(),
        });
    }
    if let Some((p, &image)) = map.iter().enumerate().find(|&(_, &y)| y >= target.size()) {
        return Err(PPViolation::OutOfRange { p, image });
    }
    for (p, q) in source.strict_pairs() {
        if !target.leq(map[p], map[q]) {
            return Err(PPViolation::NotOrderPreserving { p, q });
        }
    }
    for p in 0..source.size() {
        let image = bitset(target.size(), source.max_above(p).ones().map(|q| map[q]));
        if &image != target.max_above(map[p]) {
            return Err(PPViolation::MaximalElements { p });
        }
    }
    Ok(())
}

/// An order-preserving map with `f(max ↑p) = max ↑f(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPMorphism {
    source: FinitePoset,
    target: FinitePoset,
    map: Vec<usize>,
}

impl PPMorphism {
    pub fn new(source: &FinitePoset, target: &FinitePoset, map: Vec<usize>) -> Result<Self> {
        check_pp_morphism(source, target, &map).map_err(Error::NotPPMorphism)?;
        Ok(PPMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(p: &FinitePoset) -> Self {
        PPMorphism {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.size()).collect(),
        }
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &q in &self.map {
            hit[q] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        self.map.iter().all(|&q| !std::mem::replace(&mut hit[q], true))
    }

    /// Preimage of a set of target points.
    pub fn preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        bitset(
            self.source.size(),
            (0..self.source.size()).filter(|&p| set.contains(self.map[p])),
        )
    }
}

/// The dual homomorphism `Up(target) -> Up(source)`, `X ↦ f⁻¹(X)`.
pub fn dual_homomorphism(f: &PPMorphism, limits: &Limits) -> Result<Homomorphism> {
    let (up_t, sets_t) = upset_algebra_parts(f.target(), limits)?;
    let (up_s, sets_s) = upset_algebra_parts(f.source(), limits)?;
    let index: HashMap<&FixedBitSet, usize> =
        sets_s.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let map = sets_t
        .iter()
        .map(|x| index[&f.preimage(x)])
        .collect();
    Homomorphism::new(&up_t, &up_s, map)
}

/// Disjoint union; component `k`'s elements follow those of components `< k`
/// and are labelled `k:label`.
pub fn disjoint_union(ps: &[FinitePoset]) -> FinitePoset {
    let total: usize = ps.iter().map(|p| p.size()).sum();
    let mut pairs = Vec::new();
    let mut labels = Vec::with_capacity(total);
    let mut offset = 0;
    for (k, p) in ps.iter().enumerate() {
        for (x, y) in p.strict_pairs() {
            pairs.push((offset + x, offset + y));
        }
        labels.extend((0..p.size()).map(|x| format!("{k}:{}", p.label(x))));
        offset += p.size();
    }
    FinitePoset::from_generators(total, pairs, Some(labels)).expect("disjoint union of posets")
}

/// All posets on `n` unlabelled elements, one per isomorphism class.
///
/// Every poset arises from a smaller one by adding a maximal element above a
/// down-set, so classes are grown one element at a time and deduplicated by
/// isomorphism.
pub fn enumerate_posets(n: usize) -> Result<Vec<FinitePoset>> {
    if n > MAX_ENUMERATED_POSET {
        return Err(Error::cap("poset enumeration size", MAX_ENUMERATED_POSET, n));
    }
    let limits = Limits::default();
    let mut level = vec![FinitePoset::empty()];
    for k in 1..=n {
        let mut next: Vec<FinitePoset> = Vec::new();
        let mut buckets: HashMap<Vec<(usize, usize)>, Vec<usize>> = HashMap::new();
        for p in &level {
            for up in upset_sets(p, &limits)? {
                // the new element k-1 sits above the complement of `up`
                let mut pairs = p.strict_pairs();
                pairs.extend((0..k - 1).filter(|&x| !up.contains(x)).map(|x| (x, k - 1)));
                let q = FinitePoset::from_generators(k, pairs, None)?;
                let mut key: Vec<(usize, usize)> = (0..k)
                    .map(|x| (q.down(x).count_ones(..), q.up(x).count_ones(..)))
                    .collect();
                key.sort_unstable();
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|&i| next[i].is_isomorphic(&q)) {
                    continue;
                }
                bucket.push(next.len());
                next.push(q);
            }
        }
        level = next;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_bnalg, verify_p_algebra};
    use crate::morphism::is_isomorphic;

    #[test]
    fn up_of_two_chain_is_b1() {
        let up = upset_algebra(&FinitePoset::chain(2), &Limits::default()).unwrap();
        assert_eq!(up.size(), 3);
        assert!(is_isomorphic(&up, &make_bnalg(1).unwrap()).is_some());
    }

    #[test]
    fn up_of_two_antichain_is_boolean() {
        let up = upset_algebra(&FinitePoset::antichain(2), &Limits::default()).unwrap();
        assert_eq!(up.size(), 4);
        assert!(up.is_boolean());
        // {0} and {1} are each other's complement
        assert_eq!(up.star(1), 2);
        assert!(verify_p_algebra(&up.to_raw()).is_ok());
    }

    #[test]
    fn upsets_are_sorted_and_capped() {
        let p = FinitePoset::antichain(3);
        let sets = upsets(&p, &Limits::default()).unwrap();
        let sizes: Vec<usize> = sets.iter().map(|u| u.len()).collect();
        assert_eq!(sizes, vec![0, 1, 1, 1, 2, 2, 2, 3]);
        assert!(sets[1].contains(0) && sets[2].contains(1));
        let tight = Limits {
            max_size: 7,
            ..Limits::default()
        };
        assert!(matches!(upset_algebra(&p, &tight), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn upset_constructor_checks_closure() {
        let c = FinitePoset::chain(2);
        assert!(Upset::new(&c, [1]).is_ok());
        assert!(Upset::new(&c, [0]).is_err());
    }

    #[test]
    fn join_irreducibles_of_small_algebras() {
        let j1 = join_irreducibles(&make_bnalg(1).unwrap());
        assert!(j1.is_isomorphic(&FinitePoset::chain(2)));
        let j0 = join_irreducibles(&make_bnalg(0).unwrap());
        assert_eq!(j0.size(), 1);
    }

    #[test]
    fn roundtrip_on_trivial_algebra() {
        let t = crate::algebra::trivial_algebra().unwrap();
        assert_eq!(join_irreducibles(&t).size(), 0);
        let h = duality_roundtrip(&t, &Limits::default()).unwrap();
        assert_eq!(h.target().size(), 1);
    }

    #[test]
    fn pp_examples() {
        let c = FinitePoset::chain(2);
        assert!(check_pp_morphism(&c, &c, &[0, 1]).is_ok());
        assert_eq!(
            check_pp_morphism(&c, &c, &[0, 0]),
            Err(PPViolation::MaximalElements { p: 0 })
        );
        // collapsing a chain onto its top is pp
        assert!(check_pp_morphism(&c, &c, &[1, 1]).is_ok());
    }

    #[test]
    fn dual_of_identity_is_identity() {
        let p = FinitePoset::from_generators(3, [(0, 1), (0, 2)], None).unwrap();
        let h = dual_homomorphism(&PPMorphism::identity(&p), &Limits::default()).unwrap();
        assert!(h.map().iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn disjoint_union_with_empty() {
        let c = FinitePoset::chain(2);
        let u = disjoint_union(&[c.clone(), FinitePoset::empty()]);
        assert!(u.is_isomorphic(&c));
        let four = disjoint_union(&vec![c; 4]);
        assert_eq!(four.size(), 8);
        assert_eq!(four.covers().len(), 4);
    }

    #[test]
    fn small_poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
        assert!(enumerate_posets(7).is_err());
    }
}
