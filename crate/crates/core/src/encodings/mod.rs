//! Concrete encodings into powers of the three-element chain `B̄₁ = {0, e, 1}`:
//! Boolean pairs, the six-element algebra `N`, and finite graphs.

mod boolean_pair;
mod graph;
mod n_algebra;

pub use boolean_pair::{
    all_boolean_pairs, boolean_pair_subuniverse, chi, set_partitions, verify_definability,
    BooleanPair, PairAlgebra,
};
pub use graph::{
    enumerate_graphs, graph_encode, graph_isomorphism, graph_to_poset, recover_graph, Graph,
    GraphEncoding, PowerEmbedding,
};
pub use n_algebra::{make_n, verify_lemma2, LEMMA2_TUPLES};

use std::fmt;

/// An element of `B̄₁`. The discriminants are the element indices of
/// [`make_bnalg(1)`](crate::algebra::make_bnalg).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Three {
    Zero = 0,
    E = 1,
    One = 2,
}

impl Three {
    pub fn from_index(i: usize) -> Option<Three> {
        match i {
            0 => Some(Three::Zero),
            1 => Some(Three::E),
            2 => Some(Three::One),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn meet(self, other: Three) -> Three {
        self.min(other)
    }

    pub fn join(self, other: Three) -> Three {
        self.max(other)
    }

    pub fn star(self) -> Three {
        match self {
            Three::Zero => Three::One,
            _ => Three::Zero,
        }
    }
}

impl fmt::Display for Three {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Three::Zero => "0",
            Three::E => "e",
            Three::One => "1",
        })
    }
}

/// `(a,b,c)` rendering of a tuple.
pub fn tuple_label(t: &[Three]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Index of a tuple in `power(B̄₁, t.len())` (first coordinate most significant).
pub(crate) fn tuple_index(t: &[Three]) -> usize {
    t.iter().fold(0, |acc, &x| acc * 3 + x.index())
}

/// Inverse of [`tuple_index`].
pub(crate) fn index_tuple(mut x: usize, len: usize) -> Vec<Three> {
    let mut t = vec![Three::Zero; len];
    for k in (0..len).rev() {
        t[k] = Three::from_index(x % 3).expect("digit below 3");
        x /= 3;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_bnalg;

    #[test]
    fn three_matches_b1() {
        let b1 = make_bnalg(1).unwrap();
        let all = [Three::Zero, Three::E, Three::One];
        for x in all {
            assert_eq!(b1.star(x.index()), x.star().index());
            for y in all {
                assert_eq!(b1.meet(x.index(), y.index()), x.meet(y).index());
                assert_eq!(b1.join(x.index(), y.index()), x.join(y).index());
            }
        }
        assert_eq!(b1.label(Three::E.index()), "e");
    }

    #[test]
    fn tuple_index_roundtrip() {
        for x in 0..81 {
            assert_eq!(tuple_index(&index_tuple(x, 4)), x);
        }
        assert_eq!(tuple_index(&[Three::One, Three::E]), 7);
    }
}
