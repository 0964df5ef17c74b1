use std::collections::{BTreeMap, BTreeSet};

use super::{index_tuple, tuple_index, tuple_label, Three};
use crate::algebra::{make_bnalg, power, FinitePAlgebra};
use crate::error::{Error, Result};
use crate::report::{CheckItem, CheckReport};
use crate::Limits;

/// Largest index set for which `P(B, B₀)` is built.
pub const MAX_INDEX: usize = 5;

/// A Boolean algebra of subsets of `{0, .., index_size-1}` with a Boolean
/// subalgebra. Subsets are bit masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanPair {
    index_size: usize,
    big: BTreeSet<u32>,
    small: BTreeSet<u32>,
}

fn field_violation(n: usize, fam: &BTreeSet<u32>) -> Option<String> {
    let full = full_mask(n);
    if let Some(x) = fam.iter().find(|&&x| x & !full != 0) {
        return Some(format!("{x:#b} is not a subset of the index set"));
    }
    if !fam.contains(&0) || !fam.contains(&full) {
        return Some("missing the empty set or the index set".into());
    }
    for &x in fam {
        if !fam.contains(&(full & !x)) {
            return Some(format!("complement of {} missing", mask_label(x)));
        }
        for &y in fam {
            if !fam.contains(&(x | y)) {
                return Some(format!("union of {} and {} missing", mask_label(x), mask_label(y)));
            }
        }
    }
    None
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

fn mask_label(x: u32) -> String {
    let members: Vec<String> = (0..32).filter(|i| x >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", members.join(","))
}

/// All unions of the given blocks.
fn field_of(blocks: &[u32]) -> BTreeSet<u32> {
    (0u32..1 << blocks.len())
        .map(|pick| {
            blocks
                .iter()
                .enumerate()
                .filter(|&(k, _)| pick >> k & 1 == 1)
                .fold(0, |acc, (_, &b)| acc | b)
        })
        .collect()
}

impl BooleanPair {
    pub fn new(index_size: usize, big: BTreeSet<u32>, small: BTreeSet<u32>) -> Result<Self> {
        if index_size > MAX_INDEX {
            return Err(Error::cap("Boolean pair index set", MAX_INDEX, index_size));
        }
        if let Some(why) = field_violation(index_size, &big) {
            return Err(Error::InvalidBooleanPair(format!("B: {why}")));
        }
        if let Some(why) = field_violation(index_size, &small) {
            return Err(Error::InvalidBooleanPair(format!("B0: {why}")));
        }
        if let Some(x) = small.difference(&big).next() {
            return Err(Error::InvalidBooleanPair(format!(
                "{} lies in B0 but not in B",
                mask_label(*x)
            )));
        }
        Ok(BooleanPair {
            index_size,
            big,
            small,
        })
    }

    /// The pair of fields generated by two partitions of the index set, given
    /// as block masks.
    pub fn from_partitions(index_size: usize, big: &[u32], small: &[u32]) -> Result<Self> {
        Self::new(index_size, field_of(big), field_of(small))
    }

    pub fn index_size(&self) -> usize {
        self.index_size
    }

    pub fn big(&self) -> &BTreeSet<u32> {
        &self.big
    }

    pub fn small(&self) -> &BTreeSet<u32> {
        &self.small
    }

    pub fn full(&self) -> u32 {
        full_mask(self.index_size)
    }
}

/// All partitions of `{0, .., n-1}`, each as a list of block masks.
pub fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for k in 0..blocks.len() {
            blocks[k] |= 1 << i;
            go(i + 1, n, blocks, out);
            blocks[k] &= !(1 << i);
        }
        blocks.push(1 << i);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every Boolean pair over an `n`-element index set: each field of subsets is
/// generated by a partition, and `B₀ ⊆ B` exactly when the partition of `B`
/// refines that of `B₀`.
pub fn all_boolean_pairs(n: usize) -> Result<Vec<BooleanPair>> {
    let parts = set_partitions(n);
    let mut out = Vec::new();
    for fine in &parts {
        for coarse in &parts {
            let refines = fine.iter().all(|&b| coarse.iter().any(|&c| b & !c == 0));
            if refines {
                out.push(BooleanPair::from_partitions(n, fine, coarse)?);
            }
        }
    }
    Ok(out)
}

/// `χ_X`: `1` on members of `X`, `e` elsewhere.
pub fn chi(index_size: usize, x: u32) -> Vec<Three> {
    (0..index_size)
        .map(|i| if x >> i & 1 == 1 { Three::One } else { Three::E })
        .collect()
}

fn preimage(t: &[Three], v: Three) -> u32 {
    t.iter()
        .enumerate()
        .filter(|&(_, &x)| x == v)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// `P(B, B₀)` as a subalgebra of `B̄₁^I` expanded by `ebar`, the constant-`e`
/// tuple.
#[derive(Clone, Debug)]
pub struct PairAlgebra {
    pub algebra: FinitePAlgebra,
    /// The tuple behind each element, in ascending order.
    pub tuples: Vec<Vec<Three>>,
}

impl PairAlgebra {
    pub fn element(&self, t: &[Three]) -> Option<usize> {
        let key = tuple_index(t);
        self.tuples
            .binary_search_by_key(&key, |u| tuple_index(u))
            .ok()
    }

    pub fn ebar(&self) -> usize {
        self.algebra.constant("ebar").expect("pair algebras carry ebar")
    }
}

/// `{f ∈ {0,e,1}^I : f⁻¹(0) ∈ B₀, f⁻¹(1) ∈ B}`, checked to be a subuniverse.
pub fn boolean_pair_subuniverse(bp: &BooleanPair, limits: &Limits) -> Result<PairAlgebra> {
    let n = bp.index_size();
    let cube = power(&make_bnalg(1)?, n, limits)?;
    let cube = cube.with_constant("ebar", tuple_index(&vec![Three::E; n]))?;
    let members: BTreeSet<usize> = cube
        .elements()
        .filter(|&x| {
            let t = index_tuple(x, n);
            bp.small().contains(&preimage(&t, Three::Zero))
                && bp.big().contains(&preimage(&t, Three::One))
        })
        .collect();
    let (algebra, _) = cube.subalgebra(&members)?;
    let tuples = members.iter().map(|&x| index_tuple(x, n)).collect();
    Ok(PairAlgebra { algebra, tuples })
}

fn set_detail(pa: &PairAlgebra, set: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = set.iter().map(|&x| tuple_label(&pa.tuples[x])).collect();
    parts.join(" ")
}

/// Checks that `C = {f | ebar}` and `C₀ = {f** | ebar}` are the images of `B`
/// and `B₀` under `χ`, and that `χ` is an isomorphism of Boolean pairs.
pub fn verify_definability(bp: &BooleanPair, limits: &Limits) -> Result<CheckReport> {
    let pa = boolean_pair_subuniverse(bp, limits)?;
    let a = &pa.algebra;
    let n = bp.index_size();
    let e = pa.ebar();
    let mut report = CheckReport::new("definability");

    let chi_elem = |x: u32| pa.element(&chi(n, x));
    let image = |fam: &BTreeSet<u32>| -> Option<BTreeSet<usize>> {
        fam.iter().map(|&x| chi_elem(x)).collect()
    };
    let c: BTreeSet<usize> = a.elements().map(|f| a.join(f, e)).collect();
    let c0: BTreeSet<usize> = a.elements().map(|f| a.join(a.star(a.star(f)), e)).collect();
    for (id, computed, fam) in [("a", &c, bp.big()), ("b", &c0, bp.small())] {
        match image(fam) {
            Some(img) if &img == computed => {
                report.push(CheckItem::pass(id, format!("{} elements", img.len())))
            }
            Some(img) => report.push(CheckItem::fail(
                id,
                format!("chi image {} but computed {}", set_detail(&pa, &img), set_detail(&pa, computed)),
            )),
            None => report.push(CheckItem::fail(id, "some chi(X) lies outside P(B,B0)")),
        }
    }

    // (c): the interval [ebar, 1] operations on C, and C0 inside it
    let mut complement = BTreeMap::new();
    let mut problem = None;
    'outer: for &x in &c {
        for &y in &c {
            if !c.contains(&a.meet(x, y)) || !c.contains(&a.join(x, y)) {
                problem = Some(format!(
                    "C not closed at {} and {}",
                    tuple_label(&pa.tuples[x]),
                    tuple_label(&pa.tuples[y])
                ));
                break 'outer;
            }
        }
        let comps: Vec<usize> = c
            .iter()
            .copied()
            .filter(|&y| a.meet(x, y) == e && a.join(x, y) == a.one())
            .collect();
        if comps.len() != 1 {
            problem = Some(format!(
                "{} has {} complements in C",
                tuple_label(&pa.tuples[x]),
                comps.len()
            ));
            break;
        }
        complement.insert(x, comps[0]);
    }
    if problem.is_none() {
        if !c0.contains(&e) || !c0.contains(&a.one()) || !c0.is_subset(&c) {
            problem = Some("C0 is not a subset of C containing the bounds".into());
        } else if let Some(&x) = c0.iter().find(|&&x| {
            !c0.contains(&complement[&x])
                || c0
                    .iter()
                    .any(|&y| !c0.contains(&a.meet(x, y)) || !c0.contains(&a.join(x, y)))
        }) {
            problem = Some(format!("C0 not closed at {}", tuple_label(&pa.tuples[x])));
        }
    }
    if problem.is_none() {
        let masks = |s: &BTreeSet<usize>| -> BTreeSet<u32> {
            s.iter().map(|&x| preimage(&pa.tuples[x], Three::One)).collect()
        };
        if let Err(err) = BooleanPair::new(n, masks(&c), masks(&c0)) {
            problem = Some(err.to_string());
        }
    }
    report.push(match &problem {
        None => CheckItem::pass("c", "C with bottom ebar is a Boolean algebra, C0 a subalgebra"),
        Some(why) => CheckItem::fail("c", why.clone()),
    });

    // (d): chi as an isomorphism (B, B0) -> (C, C0)
    let d = if problem.is_some() {
        Err("skipped: (c) failed".to_string())
    } else {
        let full = bp.full();
        let mut result = Ok(());
        'd: for &x in bp.big() {
            let (Some(cx), Some(cnx)) = (chi_elem(x), chi_elem(full & !x)) else {
                result = Err(format!("chi({}) missing", mask_label(x)));
                break;
            };
            if complement[&cx] != cnx {
                result = Err(format!("complement of {} not preserved", mask_label(x)));
                break;
            }
            for &y in bp.big() {
                let cy = chi_elem(y).expect("checked above");
                if chi_elem(x & y) != Some(a.meet(cx, cy)) || chi_elem(x | y) != Some(a.join(cx, cy)) {
                    result = Err(format!(
                        "operations not preserved at {} and {}",
                        mask_label(x),
                        mask_label(y)
                    ));
                    break 'd;
                }
            }
        }
        let distinct: BTreeSet<Option<usize>> = bp.big().iter().map(|&x| chi_elem(x)).collect();
        if result.is_ok() && distinct.len() != bp.big().len() {
            result = Err("chi is not injective".into());
        }
        result
    };
    report.push(match d {
        Ok(()) => CheckItem::pass("d", "chi is an isomorphism of Boolean pairs"),
        Err(why) => CheckItem::fail("d", why),
    });
    Ok(report)
}
