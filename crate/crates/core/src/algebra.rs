//! Finite p-algebras: bounded distributive lattices with a pseudocomplement.
//!
//! Elements are the dense indices `0..size`. The order is kept as bit rows;
//! meet and join tables are computed once when the algebra is built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::morphism::Homomorphism;
use crate::poset::{bitset, FinitePoset};
use crate::Limits;

/// Largest number of atoms accepted by [`powerset_algebra`] and [`make_bnalg`].
pub const MAX_ATOMS: usize = 12;

/// A candidate algebra as it comes from a file or a hand-built table. Nothing
/// here is checked until it goes through [`verify_p_algebra`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawAlgebra {
    pub size: usize,
    /// The full order relation as pairs `(x, y)` meaning `x <= y`.
    pub leq: Vec<(usize, usize)>,
    pub star: Vec<usize>,
    pub zero: usize,
    pub one: usize,
    pub constants: BTreeMap<String, usize>,
    pub labels: Option<Vec<String>>,
}

/// The first condition a candidate algebra fails, with a witnessing tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { what: String, index: usize },
    NotReflexive { x: usize },
    NotAntisymmetric { x: usize, y: usize },
    NotTransitive { x: usize, y: usize, z: usize },
    NoMeet { x: usize, y: usize },
    NoJoin { x: usize, y: usize },
    /// `x & (y | z) != (x & y) | (x & z)`
    NotDistributive { x: usize, y: usize, z: usize },
    ZeroNotLeast { x: usize },
    OneNotGreatest { x: usize },
    /// `x & y = 0` but `y` is not below `x*`.
    StarTooSmall { x: usize, y: usize },
    /// `y <= x*` but `x & y != 0`.
    StarTooLarge { x: usize, y: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            IndexOutOfRange { what, index } => write!(f, "{what} index {index} out of range"),
            NotReflexive { x } => write!(f, "order not reflexive at {x}"),
            NotAntisymmetric { x, y } => write!(f, "order not antisymmetric: {x} <= {y} <= {x}"),
            NotTransitive { x, y, z } => {
                write!(f, "order not transitive: {x} <= {y} <= {z} but not {x} <= {z}")
            }
            NoMeet { x, y } => write!(f, "no greatest lower bound of {x} and {y}"),
            NoJoin { x, y } => write!(f, "no least upper bound of {x} and {y}"),
            NotDistributive { x, y, z } => {
                write!(f, "not distributive: {x} & ({y} | {z}) != ({x} & {y}) | ({x} & {z})")
            }
            ZeroNotLeast { x } => write!(f, "zero is not below {x}"),
            OneNotGreatest { x } => write!(f, "one is not above {x}"),
            StarTooSmall { x, y } => {
                write!(f, "pseudocomplement law: {x} & {y} = 0 but {y} is not <= {x}*")
            }
            StarTooLarge { x, y } => {
                write!(f, "pseudocomplement law: {y} <= {x}* but {x} & {y} != 0")
            }
        }
    }
}

struct Inner {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    star: Vec<u32>,
    zero: usize,
    one: usize,
    constants: BTreeMap<String, usize>,
    labels: Option<Vec<String>>,
}

/// A finite p-algebra. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FinitePAlgebra {
    inner: Arc<Inner>,
}

impl PartialEq for FinitePAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.up == other.inner.up
                && self.inner.star == other.inner.star
                && self.inner.zero == other.inner.zero
                && self.inner.one == other.inner.one
                && self.inner.constants == other.inner.constants
                && self.inner.labels == other.inner.labels)
    }
}

impl Eq for FinitePAlgebra {}

impl fmt::Debug for FinitePAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitePAlgebra")
            .field("size", &self.size())
            .field("star", &self.inner.star)
            .field("zero", &self.inner.zero)
            .field("one", &self.inner.one)
            .field("constants", &self.inner.constants)
            .field("labels", &self.inner.labels)
            .finish()
    }
}

/// Greatest element of `set`: the member whose down-set has as many elements
/// as `set` (members of `set` lie inside it when `set` is a down-set).
fn greatest_in(set: &FixedBitSet, down_count: &[usize]) -> Option<usize> {
    let k = set.count_ones(..);
    set.ones().find(|&m| down_count[m] == k)
}

/// Meet and join tables of a partial order, or the first pair without one.
fn lattice_tables(
    up: &[FixedBitSet],
    down: &[FixedBitSet],
) -> std::result::Result<(Vec<u32>, Vec<u32>), Violation> {
    let n = up.len();
    let down_count: Vec<usize> = down.iter().map(|d| d.count_ones(..)).collect();
    let up_count: Vec<usize> = up.iter().map(|u| u.count_ones(..)).collect();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for x in 0..n {
        for y in x..n {
            let mut lower = down[x].clone();
            lower.intersect_with(&down[y]);
            let m = greatest_in(&lower, &down_count).ok_or(Violation::NoMeet { x, y })?;
            let mut upper = up[x].clone();
            upper.intersect_with(&up[y]);
            // least element of `upper`: the one whose up-row is all of it
            let k = upper.count_ones(..);
            let j = upper
                .ones()
                .find(|&j| up_count[j] == k)
                .ok_or(Violation::NoJoin { x, y })?;
            meet[x * n + y] = m as u32;
            meet[y * n + x] = m as u32;
            join[x * n + y] = j as u32;
            join[y * n + x] = j as u32;
        }
    }
    Ok((meet, join))
}

/// Join-irreducible elements of a lattice given by its tables: elements whose
/// strict down-set is nonempty and has a join strictly below them.
fn join_irreducible_mask(down: &[FixedBitSet], join: &[u32]) -> Vec<bool> {
    let n = down.len();
    (0..n)
        .map(|x| {
            let mut acc: Option<usize> = None;
            for y in down[x].ones().filter(|&y| y != x) {
                acc = Some(match acc {
                    None => y,
                    Some(a) => join[a * n + y] as usize,
                });
            }
            matches!(acc, Some(a) if a != x)
        })
        .collect()
}

fn check_distributive(
    down: &[FixedBitSet],
    join: &[u32],
) -> std::result::Result<(), Violation> {
    let n = down.len();
    let ji = join_irreducible_mask(down, join);
    let ji_below: Vec<FixedBitSet> = down
        .iter()
        .map(|d| bitset(n, d.ones().filter(|&j| ji[j])))
        .collect();
    for x in 0..n {
        for y in x + 1..n {
            let j = join[x * n + y] as usize;
            let mut both = ji_below[x].clone();
            both.union_with(&ji_below[y]);
            if both != ji_below[j] {
                let w = ji_below[j]
                    .difference(&both)
                    .next()
                    .expect("union is contained in the join's set");
                return Err(Violation::NotDistributive { x: w, y: x, z: y });
            }
        }
    }
    Ok(())
}

/// Checks every p-algebra axiom on a candidate, reporting the first violation.
///
/// Checks run in a fixed order: indices, order axioms, existence of meets and
/// joins, distributivity, bounds, the pseudocomplement law.
pub fn verify_p_algebra(raw: &RawAlgebra) -> std::result::Result<(), Violation> {
    build_inner(raw).map(|_| ())
}

fn build_inner(raw: &RawAlgebra) -> std::result::Result<Inner, Violation> {
    let n = raw.size;
    let oob = |what: &str, index: usize| Violation::IndexOutOfRange {
        what: what.to_string(),
        index,
    };
    if raw.zero >= n {
        return Err(oob("zero", raw.zero));
    }
    if raw.one >= n {
        return Err(oob("one", raw.one));
    }
    if raw.star.len() != n {
        return Err(oob("star table length", raw.star.len()));
    }
    if let Some(&s) = raw.star.iter().find(|&&s| s >= n) {
        return Err(oob("star", s));
    }
    if let Some(&c) = raw.constants.values().find(|&&c| c >= n) {
        return Err(oob("constant", c));
    }
    if let Some(l) = &raw.labels {
        if l.len() != n {
            return Err(oob("labels length", l.len()));
        }
    }
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for &(x, y) in &raw.leq {
        if x >= n {
            return Err(oob("leq", x));
        }
        if y >= n {
            return Err(oob("leq", y));
        }
        up[x].insert(y);
    }
    for x in 0..n {
        if !up[x].contains(x) {
            return Err(Violation::NotReflexive { x });
        }
    }
    for x in 0..n {
        for y in up[x].ones() {
            if y != x && up[y].contains(x) {
                return Err(Violation::NotAntisymmetric { x, y });
            }
        }
    }
    for x in 0..n {
        for y in up[x].ones() {
            if let Some(z) = up[y].difference(&up[x]).next() {
                return Err(Violation::NotTransitive { x, y, z });
            }
        }
    }
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    for (x, row) in up.iter().enumerate() {
        for y in row.ones() {
            down[y].insert(x);
        }
    }
    let (meet, join) = lattice_tables(&up, &down)?;
    check_distributive(&down, &join)?;
    if let Some(x) = (0..n).find(|&x| !up[raw.zero].contains(x)) {
        return Err(Violation::ZeroNotLeast { x });
    }
    if let Some(x) = (0..n).find(|&x| !down[raw.one].contains(x)) {
        return Err(Violation::OneNotGreatest { x });
    }
    for x in 0..n {
        let sx = raw.star[x];
        for y in 0..n {
            let disjoint = meet[x * n + y] as usize == raw.zero;
            let below = up[y].contains(sx);
            if disjoint && !below {
                return Err(Violation::StarTooSmall { x, y });
            }
            if below && !disjoint {
                return Err(Violation::StarTooLarge { x, y });
            }
        }
    }
    Ok(Inner {
        up,
        down,
        meet,
        join,
        star: raw.star.iter().map(|&s| s as u32).collect(),
        zero: raw.zero,
        one: raw.one,
        constants: raw.constants.clone(),
        labels: raw.labels.clone(),
    })
}

impl FinitePAlgebra {
    /// Validates a candidate and builds the algebra.
    pub fn new(raw: &RawAlgebra) -> Result<Self> {
        let inner = build_inner(raw).map_err(Error::InvalidAlgebra)?;
        Ok(FinitePAlgebra {
            inner: Arc::new(inner),
        })
    }

    /// Builds the algebra whose lattice is `order`, with the pseudocomplement
    /// read off the order as `max{y : x & y = 0}`.
    pub fn from_lattice_order(order: &FinitePoset) -> Result<Self> {
        let n = order.size();
        if n == 0 {
            return Err(Error::InvalidAlgebra(Violation::IndexOutOfRange {
                what: "zero".into(),
                index: 0,
            }));
        }
        let up: Vec<FixedBitSet> = (0..n).map(|x| order.up(x).clone()).collect();
        let down: Vec<FixedBitSet> = (0..n).map(|x| order.down(x).clone()).collect();
        let (meet, _) = lattice_tables(&up, &down).map_err(Error::InvalidAlgebra)?;
        let minimal = order.minimal_elements();
        let maximal = order.maximal_elements();
        let (zero, one) = (minimal[0], maximal[0]);
        let down_count: Vec<usize> = down.iter().map(|d| d.count_ones(..)).collect();
        let mut star = Vec::with_capacity(n);
        for x in 0..n {
            let disjoint = bitset(n, (0..n).filter(|&y| meet[x * n + y] as usize == zero));
            // the largest element disjoint from x exists iff the set is a principal down-set
            let s = greatest_in(&disjoint, &down_count).ok_or(Error::InvalidAlgebra(
                Violation::StarTooSmall {
                    x,
                    y: disjoint.maximum().unwrap_or(zero),
                },
            ))?;
            star.push(s);
        }
        FinitePAlgebra::new(&RawAlgebra {
            size: n,
            leq: order
                .strict_pairs()
                .into_iter()
                .chain((0..n).map(|x| (x, x)))
                .collect(),
            star,
            zero,
            one,
            constants: BTreeMap::new(),
            labels: order.labels().map(|l| l.to_vec()),
        })
    }

    /// Builds from tables the caller guarantees are correct.
    pub(crate) fn from_trusted(
        up: Vec<FixedBitSet>,
        meet: Vec<u32>,
        join: Vec<u32>,
        star: Vec<u32>,
        zero: usize,
        one: usize,
        labels: Option<Vec<String>>,
    ) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        let a = FinitePAlgebra {
            inner: Arc::new(Inner {
                up,
                down,
                meet,
                join,
                star,
                zero,
                one,
                constants: BTreeMap::new(),
                labels,
            }),
        };
        debug_assert!(
            n > 64 || verify_p_algebra(&a.to_raw()).is_ok(),
            "trusted construction produced an invalid algebra"
        );
        a
    }

    pub fn to_raw(&self) -> RawAlgebra {
        let n = self.size();
        RawAlgebra {
            size: n,
            leq: (0..n)
                .flat_map(|x| self.inner.up[x].ones().map(move |y| (x, y)))
                .collect(),
            star: self.inner.star.iter().map(|&s| s as usize).collect(),
            zero: self.inner.zero,
            one: self.inner.one,
            constants: self.inner.constants.clone(),
            labels: self.inner.labels.clone(),
        }
    }

    pub fn size(&self) -> usize {
        self.inner.up.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn zero(&self) -> usize {
        self.inner.zero
    }

    pub fn one(&self) -> usize {
        self.inner.one
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.inner.up[x].contains(y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.inner.meet[x * self.size() + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.inner.join[x * self.size() + y] as usize
    }

    #[inline]
    pub fn star(&self, x: usize) -> usize {
        self.inner.star[x] as usize
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.inner.up[x]
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.inner.down[x]
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.inner.constants
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.inner.constants.get(name).copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.inner.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.inner.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Element carrying `label`, if labels are present.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.inner.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Adds (or replaces) a named constant.
    pub fn with_constant(&self, name: &str, x: usize) -> Result<Self> {
        let mut raw = self.to_raw();
        if x >= raw.size {
            return Err(Error::InvalidAlgebra(Violation::IndexOutOfRange {
                what: "constant".into(),
                index: x,
            }));
        }
        raw.constants.insert(name.to_string(), x);
        Ok(self.replace_meta(raw.constants, raw.labels))
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::InvalidAlgebra(Violation::IndexOutOfRange {
                what: "labels length".into(),
                index: labels.len(),
            }));
        }
        Ok(self.replace_meta(self.inner.constants.clone(), Some(labels)))
    }

    fn replace_meta(&self, constants: BTreeMap<String, usize>, labels: Option<Vec<String>>) -> Self {
        let i = &self.inner;
        FinitePAlgebra {
            inner: Arc::new(Inner {
                up: i.up.clone(),
                down: i.down.clone(),
                meet: i.meet.clone(),
                join: i.join.clone(),
                star: i.star.clone(),
                zero: i.zero,
                one: i.one,
                constants,
                labels,
            }),
        }
    }

    /// The lattice order as a poset.
    pub fn order(&self) -> FinitePoset {
        let n = self.size();
        FinitePoset::from_generators(
            n,
            (0..n).flat_map(|x| self.inner.up[x].ones().map(move |y| (x, y))),
            self.inner.labels.clone(),
        )
        .expect("lattice order is a partial order")
    }

    /// An element `x` with `x | x* != 1`, or `None` when the algebra is Boolean.
    pub fn non_boolean_witness(&self) -> Option<usize> {
        self.elements()
            .find(|&x| self.join(x, self.star(x)) != self.one())
    }

    pub fn is_boolean(&self) -> bool {
        self.non_boolean_witness().is_none()
    }

    /// Atoms: the covers of zero.
    pub fn atoms(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.zero() && self.down_set(x).count_ones(..) == 2)
            .collect()
    }

    /// Whether `y` covers `x`.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        x != y
            && self.leq(x, y)
            && self
                .up_set(x)
                .ones()
                .all(|z| z == x || z == y || !self.leq(z, y))
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        join_irreducible_mask(&self.inner.down, &self.inner.join)[x]
    }

    /// Join-irreducible elements in ascending index order.
    pub fn join_irreducible_elements(&self) -> Vec<usize> {
        join_irreducible_mask(&self.inner.down, &self.inner.join)
            .into_iter()
            .enumerate()
            .filter_map(|(x, ji)| ji.then_some(x))
            .collect()
    }

    /// Whether `set` contains the constants and is closed under the operations;
    /// returns a description of the first escape otherwise.
    pub fn subuniverse_violation(&self, set: &BTreeSet<usize>) -> Option<String> {
        for (name, &c) in self.constants() {
            if !set.contains(&c) {
                return Some(format!("constant {name} = {} missing", self.label(c)));
            }
        }
        for (what, c) in [("zero", self.zero()), ("one", self.one())] {
            if !set.contains(&c) {
                return Some(format!("{what} missing"));
            }
        }
        for &x in set {
            if !set.contains(&self.star(x)) {
                return Some(format!("{}* = {} escapes", self.label(x), self.label(self.star(x))));
            }
            for &y in set {
                let m = self.meet(x, y);
                if !set.contains(&m) {
                    return Some(format!(
                        "{} & {} = {} escapes",
                        self.label(x),
                        self.label(y),
                        self.label(m)
                    ));
                }
                let j = self.join(x, y);
                if !set.contains(&j) {
                    return Some(format!(
                        "{} | {} = {} escapes",
                        self.label(x),
                        self.label(y),
                        self.label(j)
                    ));
                }
            }
        }
        None
    }

    /// The subalgebra on a subuniverse, with elements in ascending index order,
    /// and its inclusion.
    pub fn subalgebra(&self, set: &BTreeSet<usize>) -> Result<(FinitePAlgebra, Homomorphism)> {
        if let Some(&x) = set.iter().find(|&&x| x >= self.size()) {
            return Err(Error::NotSubuniverse(format!("element {x} out of range")));
        }
        if let Some(why) = self.subuniverse_violation(set) {
            return Err(Error::NotSubuniverse(why));
        }
        let members: Vec<usize> = set.iter().copied().collect();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in members.iter().enumerate() {
            index[x] = i;
        }
        let k = members.len();
        let up = members
            .iter()
            .map(|&x| bitset(k, members.iter().enumerate().filter(|&(_, &y)| self.leq(x, y)).map(|(j, _)| j)))
            .collect();
        let mut meet = vec![0u32; k * k];
        let mut join = vec![0u32; k * k];
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                meet[i * k + j] = index[self.meet(x, y)] as u32;
                join[i * k + j] = index[self.join(x, y)] as u32;
            }
        }
        let star = members.iter().map(|&x| index[self.star(x)] as u32).collect();
        let labels = self
            .labels()
            .map(|l| members.iter().map(|&x| l[x].clone()).collect());
        let mut sub = FinitePAlgebra::from_trusted(
            up,
            meet,
            join,
            star,
            index[self.zero()],
            index[self.one()],
            labels,
        );
        for (name, &c) in self.constants() {
            sub = sub.with_constant(name, index[c])?;
        }
        let inclusion = Homomorphism::new(&sub, self, members)?;
        Ok((sub, inclusion))
    }
}

/// The Boolean algebra of all subsets of an `n_atoms`-element set, with
/// set complement as star. Element `i` is the subset with bitmask `i`; the top
/// is labelled `e`.
pub fn powerset_algebra(n_atoms: usize) -> Result<FinitePAlgebra> {
    if n_atoms > MAX_ATOMS {
        return Err(Error::cap("number of atoms", MAX_ATOMS, n_atoms));
    }
    let n = 1usize << n_atoms;
    let full = n - 1;
    let up = (0..n)
        .map(|x| bitset(n, (0..n).filter(|&y| x & y == x)))
        .collect();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            meet[x * n + y] = (x & y) as u32;
            join[x * n + y] = (x | y) as u32;
        }
    }
    let star = (0..n).map(|x| (full & !x) as u32).collect();
    let labels = (0..n)
        .map(|x| {
            if x == 0 {
                "0".to_string()
            } else if x == full {
                "e".to_string()
            } else {
                let atoms: Vec<String> = (0..n_atoms)
                    .filter(|b| x >> b & 1 == 1)
                    .map(|b| format!("a{b}"))
                    .collect();
                atoms.join("+")
            }
        })
        .collect();
    Ok(FinitePAlgebra::from_trusted(
        up,
        meet,
        join,
        star,
        0,
        full,
        Some(labels),
    ))
}

/// Adjoins a new top `1` to a Boolean algebra; star is the old complement on
/// nonzero elements, `0* = 1` and `1* = 0`.
pub fn stacked_algebra(b: &FinitePAlgebra) -> Result<FinitePAlgebra> {
    if let Some(x) = b.non_boolean_witness() {
        return Err(Error::NotBoolean { x });
    }
    let n = b.size();
    let top = n;
    let m = n + 1;
    let mut up: Vec<FixedBitSet> = (0..n)
        .map(|x| {
            let mut row = b.up_set(x).clone();
            row.grow(m);
            row.insert(top);
            row
        })
        .collect();
    up.push(bitset(m, [top]));
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    for x in 0..m {
        for y in 0..m {
            let (mt, jn) = match (x == top, y == top) {
                (true, _) => (y, top),
                (_, true) => (x, top),
                _ => (b.meet(x, y), b.join(x, y)),
            };
            meet[x * m + y] = mt as u32;
            join[x * m + y] = jn as u32;
        }
    }
    let star = (0..m)
        .map(|x| {
            if x == top {
                b.zero()
            } else if x == b.zero() {
                top
            } else {
                b.star(x)
            }
        } as u32)
        .collect();
    let mut labels: Vec<String> = (0..n).map(|x| b.label(x)).collect();
    labels.push("1".into());
    let mut out =
        FinitePAlgebra::from_trusted(up, meet, join, star, b.zero(), top, Some(labels));
    for (name, &c) in b.constants() {
        out = out.with_constant(name, c)?;
    }
    Ok(out)
}

/// `B̄ᵢ`: the `2^i`-element Boolean algebra with a new top; `2^i + 1` elements.
pub fn make_bnalg(i: usize) -> Result<FinitePAlgebra> {
    stacked_algebra(&powerset_algebra(i)?)
}

/// Direct product with componentwise operations. Tuples are indexed in
/// mixed radix with the first factor most significant.
pub fn product(factors: &[FinitePAlgebra], limits: &Limits) -> Result<FinitePAlgebra> {
    if factors.is_empty() {
        return Err(Error::InvalidAlgebra(Violation::IndexOutOfRange {
            what: "product factor list".into(),
            index: 0,
        }));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let mut n: usize = 1;
    for &s in &sizes {
        n = n.saturating_mul(s);
    }
    if n > limits.max_size {
        return Err(Error::cap("product size", limits.max_size, n));
    }
    let decode = |mut x: usize| -> Vec<usize> {
        let mut digits = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            digits[k] = x % sizes[k];
            x /= sizes[k];
        }
        digits
    };
    let encode = |digits: &[usize]| -> usize {
        digits
            .iter()
            .zip(&sizes)
            .fold(0, |acc, (&d, &s)| acc * s + d)
    };
    let tuples: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let up = tuples
        .iter()
        .map(|t| {
            bitset(
                n,
                (0..n).filter(|&y| {
                    tuples[y]
                        .iter()
                        .zip(t)
                        .zip(factors)
                        .all(|((&b, &a), f)| f.leq(a, b))
                }),
            )
        })
        .collect();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    let mut buf = vec![0; sizes.len()];
    for x in 0..n {
        for y in 0..n {
            for (k, f) in factors.iter().enumerate() {
                buf[k] = f.meet(tuples[x][k], tuples[y][k]);
            }
            meet[x * n + y] = encode(&buf) as u32;
            for (k, f) in factors.iter().enumerate() {
                buf[k] = f.join(tuples[x][k], tuples[y][k]);
            }
            join[x * n + y] = encode(&buf) as u32;
        }
    }
    let star = tuples
        .iter()
        .map(|t| {
            let s: Vec<usize> = t.iter().zip(factors).map(|(&a, f)| f.star(a)).collect();
            encode(&s) as u32
        })
        .collect();
    let zero = encode(&factors.iter().map(|f| f.zero()).collect::<Vec<_>>());
    let one = encode(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().zip(factors).map(|(&a, f)| f.label(a)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut out = FinitePAlgebra::from_trusted(up, meet, join, star, zero, one, Some(labels));
    for name in factors[0].constants().keys() {
        let parts: Option<Vec<usize>> = factors.iter().map(|f| f.constant(name)).collect();
        if let Some(parts) = parts {
            out = out.with_constant(name, encode(&parts))?;
        }
    }
    Ok(out)
}

/// `a^k`.
pub fn power(a: &FinitePAlgebra, k: usize, limits: &Limits) -> Result<FinitePAlgebra> {
    if k == 0 {
        return trivial_algebra();
    }
    product(&vec![a.clone(); k], limits)
}

/// The one-element algebra (`zero = one`).
pub fn trivial_algebra() -> Result<FinitePAlgebra> {
    powerset_algebra(0)
}

/// Least subuniverse containing `gens`, the bounds and the named constants.
pub fn generated_subalgebra(
    a: &FinitePAlgebra,
    gens: &[usize],
) -> Result<(FinitePAlgebra, Homomorphism)> {
    if let Some(&x) = gens.iter().find(|&&x| x >= a.size()) {
        return Err(Error::NotSubuniverse(format!("generator {x} out of range")));
    }
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    set.insert(a.zero());
    set.insert(a.one());
    set.extend(a.constants().values().copied());
    let mut frontier: Vec<usize> = set.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let mut fresh = Vec::new();
        fresh.push(a.star(x));
        for &y in &set {
            fresh.push(a.meet(x, y));
            fresh.push(a.join(x, y));
        }
        for z in fresh {
            if set.insert(z) {
                frontier.push(z);
            }
        }
    }
    a.subalgebra(&set)
}

/// The relative pseudocomplement table `x -> y = max{z : x & z <= y}`, as
/// rows indexed by `x`, or `None` if some maximum fails to exist.
pub fn heyting_implication(a: &FinitePAlgebra) -> Option<Vec<Vec<usize>>> {
    let n = a.size();
    let down_count: Vec<usize> = a.elements().map(|x| a.down_set(x).count_ones(..)).collect();
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let candidates = bitset(n, (0..n).filter(|&z| a.leq(a.meet(x, z), y)));
            table[x][y] = greatest_in(&candidates, &down_count)?;
        }
    }
    Some(table)
}
