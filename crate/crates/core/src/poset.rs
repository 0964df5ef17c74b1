//! Finite partially ordered sets, the objects on the dual side.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite poset on the elements `0..size`.
///
/// The order is stored twice, as up-rows and down-rows of the full relation,
/// together with the maximal elements above each point.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    max_above: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitePoset")
            .field("size", &self.size())
            .field("covers", &self.covers())
            .field("labels", &self.labels)
            .finish()
    }
}

pub(crate) fn bitset(size: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(size);
    s.extend(members);
    s
}

impl FinitePoset {
    /// Builds a poset from a full order relation given as a matrix.
    pub fn from_matrix(leq: &[Vec<bool>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = leq.len();
        if let Some(row) = leq.iter().find(|row| row.len() != n) {
            return Err(Error::InvalidPoset(format!(
                "relation matrix row has length {} instead of {n}",
                row.len()
            )));
        }
        for p in 0..n {
            if !leq[p][p] {
                return Err(Error::InvalidPoset(format!("not reflexive at {p}")));
            }
        }
        for p in 0..n {
            for q in 0..n {
                if p != q && leq[p][q] && leq[q][p] {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric: {p} <= {q} <= {p}"
                    )));
                }
                if !leq[p][q] {
                    continue;
                }
                for r in 0..n {
                    if leq[q][r] && !leq[p][r] {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive: {p} <= {q} <= {r} but not {p} <= {r}"
                        )));
                    }
                }
            }
        }
        let up = (0..n)
            .map(|p| bitset(n, (0..n).filter(|&q| leq[p][q])))
            .collect();
        Self::from_up_rows(up, labels)
    }

    /// Builds a poset from a full order relation given as a list of pairs `(p, q)` meaning `p <= q`.
    pub fn from_relation(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut m = vec![vec![false; size]; size];
        for (p, q) in pairs {
            if p >= size || q >= size {
                return Err(Error::InvalidPoset(format!("pair ({p}, {q}) out of range")));
            }
            m[p][q] = true;
        }
        Self::from_matrix(&m, labels)
    }

    /// Builds the reflexive-transitive closure of the given pairs; fails if it is not antisymmetric.
    pub fn from_generators(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut up: Vec<FixedBitSet> = (0..size).map(|p| bitset(size, [p])).collect();
        for (p, q) in pairs {
            if p >= size || q >= size {
                return Err(Error::InvalidPoset(format!("pair ({p}, {q}) out of range")));
            }
            up[p].insert(q);
        }
        // Warshall, row-wise.
        for k in 0..size {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for p in 0..size {
            for q in up[p].ones() {
                if q != p && up[q].contains(p) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric: {p} <= {q} <= {p}"
                    )));
                }
            }
        }
        Self::from_up_rows(up, labels)
    }

    fn from_up_rows(up: Vec<FixedBitSet>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = up.len();
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidPoset(format!(
                    "{} labels for {n} elements",
                    l.len()
                )));
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (p, row) in up.iter().enumerate() {
            for q in row.ones() {
                down[q].insert(p);
            }
        }
        let maximal: Vec<bool> = (0..n).map(|p| up[p].count_ones(..) == 1).collect();
        let max_above = up
            .iter()
            .map(|row| bitset(n, row.ones().filter(|&q| maximal[q])))
            .collect();
        Ok(FinitePoset {
            up,
            down,
            max_above,
            labels,
        })
    }

    pub fn empty() -> Self {
        Self::antichain(0)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_generators(n, (1..n).map(|i| (i - 1, i)), None).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_generators(n, [], None).expect("antichain is a poset")
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p].contains(q)
    }

    /// `↑p`, the elements above `p`.
    pub fn up(&self, p: usize) -> &FixedBitSet {
        &self.up[p]
    }

    /// `↓p`, the elements below `p`.
    pub fn down(&self, p: usize) -> &FixedBitSet {
        &self.down[p]
    }

    /// Maximal elements of `↑p`.
    pub fn max_above(&self, p: usize) -> &FixedBitSet {
        &self.max_above[p]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, p: usize) -> String {
        match &self.labels {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::InvalidPoset(format!(
                "{} labels for {} elements",
                labels.len(),
                self.size()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&p| self.up[p].count_ones(..) == 1)
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&p| self.down[p].count_ones(..) == 1)
            .collect()
    }

    /// Covering pairs `(p, q)`: `p < q` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.size() {
            for q in self.up[p].ones() {
                if q == p {
                    continue;
                }
                let between = self.up[p]
                    .ones()
                    .any(|r| r != p && r != q && self.leq(r, q));
                if !between {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Strict order pairs `p < q`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .flat_map(|p| self.up[p].ones().filter(move |&q| q != p).map(move |q| (p, q)))
            .collect()
    }

    pub fn up_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for p in set.ones() {
            out.union_with(&self.up[p]);
        }
        out
    }

    pub fn down_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for p in set.ones() {
            out.union_with(&self.down[p]);
        }
        out
    }

    pub fn is_upset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|p| self.up[p].is_subset(set))
    }

    /// Elements sorted so that `p < q` implies `p` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&p| (self.down[p].count_ones(..), p));
        order
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.size()];
        for p in self.linear_extension() {
            h[p] = self.down[p]
                .ones()
                .filter(|&q| q != p)
                .map(|q| h[q] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Order dual.
    pub fn dual(&self) -> Self {
        FinitePoset::from_up_rows(self.down.clone(), self.labels.clone()).expect("dual of a poset")
    }

    /// Cartesian product with the componentwise order; element `(i, j)` has index `i * other.size() + j`.
    pub fn product(&self, other: &FinitePoset) -> Self {
        let (n, m) = (self.size(), other.size());
        let up = (0..n * m)
            .map(|x| {
                let (i, j) = (x / m, x % m);
                bitset(
                    n * m,
                    self.up[i]
                        .ones()
                        .flat_map(|k| other.up[j].ones().map(move |l| k * m + l)),
                )
            })
            .collect();
        let labels = (0..n * m)
            .map(|x| format!("<{},{}>", self.label(x / m), other.label(x % m)))
            .collect();
        FinitePoset::from_up_rows(up, Some(labels)).expect("product of posets")
    }

    fn fingerprints(&self) -> Vec<(usize, usize, usize)> {
        let h = self.heights();
        (0..self.size())
            .map(|p| (self.down[p].count_ones(..), self.up[p].count_ones(..), h[p]))
            .collect()
    }

    /// An order isomorphism onto `other`, as an element table, if one exists.
    pub fn isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        let n = self.size();
        if n != other.size() {
            return None;
        }
        let fa = self.fingerprints();
        let fb = other.fingerprints();
        let (mut sa, mut sb) = (fa.clone(), fb.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: &FinitePoset,
            b: &FinitePoset,
            fa: &[(usize, usize, usize)],
            fb: &[(usize, usize, usize)],
            p: usize,
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if p == map.len() {
                return true;
            }
            for q in 0..map.len() {
                if used[q] || fa[p] != fb[q] {
                    continue;
                }
                let consistent = (0..p).all(|r| {
                    a.leq(r, p) == b.leq(map[r], q) && a.leq(p, r) == b.leq(q, map[r])
                });
                if !consistent {
                    continue;
                }
                map[p] = q;
                used[q] = true;
                if go(a, b, fa, fb, p + 1, map, used) {
                    return true;
                }
                used[q] = false;
            }
            map[p] = usize::MAX;
            false
        }
        go(self, other, &fa, &fb, 0, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        self.isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_antichain() {
        let c = FinitePoset::chain(3);
        assert!(c.leq(0, 2));
        assert!(!c.leq(2, 0));
        assert_eq!(c.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(c.maximal_elements(), vec![2]);
        let a = FinitePoset::antichain(3);
        assert_eq!(a.maximal_elements(), vec![0, 1, 2]);
        assert!(a.covers().is_empty());
        assert!(!c.is_isomorphic(&a));
    }

    #[test]
    fn rejects_non_orders() {
        assert!(FinitePoset::from_generators(2, [(0, 1), (1, 0)], None).is_err());
        assert!(FinitePoset::from_relation(2, [(0, 0)], None).is_err());
        assert!(FinitePoset::from_relation(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)], None)
            .is_err());
        assert!(FinitePoset::from_relation(1, [(0, 3)], None).is_err());
    }

    #[test]
    fn empty_poset_is_allowed() {
        let e = FinitePoset::empty();
        assert_eq!(e.size(), 0);
        assert!(e.is_isomorphic(&FinitePoset::antichain(0)));
    }

    #[test]
    fn max_above_in_a_vee() {
        // 0 below both 1 and 2
        let p = FinitePoset::from_generators(3, [(0, 1), (0, 2)], None).unwrap();
        assert_eq!(p.max_above(0).ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(p.max_above(1).ones().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn product_of_chain_and_antichain_is_disjoint_chains() {
        let u = FinitePoset::chain(2).product(&FinitePoset::antichain(3));
        assert_eq!(u.size(), 6);
        assert_eq!(u.covers().len(), 3);
        assert_eq!(u.maximal_elements().len(), 3);
    }

    #[test]
    fn isomorphism_respects_order() {
        let p = FinitePoset::from_generators(3, [(2, 0), (2, 1)], None).unwrap();
        let q = FinitePoset::from_generators(3, [(0, 1), (0, 2)], None).unwrap();
        let map = p.isomorphism(&q).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(p.leq(x, y), q.leq(map[x], map[y]));
            }
        }
        assert!(!p.is_isomorphic(&q.dual()));
    }
}
