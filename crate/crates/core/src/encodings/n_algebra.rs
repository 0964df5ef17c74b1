use std::collections::BTreeSet;

use super::{tuple_index, Three};
use crate::algebra::{generated_subalgebra, make_bnalg, power, FinitePAlgebra};
use crate::error::Result;
use crate::morphism::{find_embedding, is_isomorphic, Homomorphism};
use crate::poset::FinitePoset;
use crate::report::{CheckItem, CheckReport};
use crate::Limits;

use Three::{One as I, Zero as O, E};

/// The six tuples of `B̄₁³` forming a copy of `N`, listed in the order of the
/// elements `0, a, b, c, e, 1` of [`make_n`].
pub const LEMMA2_TUPLES: [[Three; 3]; 6] = [
    [O, O, O],
    [E, E, E],
    [I, E, E],
    [E, E, I],
    [I, E, I],
    [I, I, I],
];

/// `N`: the lattice `0 < a < b, c < e < 1` with `b`, `c` incomparable; star is
/// read off the order.
pub fn make_n() -> FinitePAlgebra {
    let labels = ["0", "a", "b", "c", "e", "1"].map(String::from).to_vec();
    let order = FinitePoset::from_generators(
        6,
        [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)],
        Some(labels),
    )
    .expect("N is a poset");
    FinitePAlgebra::from_lattice_order(&order).expect("N is a p-algebra")
}

/// The three facts behind `N ∈ Q(B̄₁)`: `B̄₁` embeds in `N` on `{0, e, 1}`,
/// the listed tuples are a subuniverse of `B̄₁³` isomorphic to `N`, and they
/// are generated by `(1,e,e)` and `(e,e,1)`.
pub fn verify_lemma2(limits: &Limits) -> Result<CheckReport> {
    let b1 = make_bnalg(1)?;
    let n = make_n();
    let cube = power(&b1, 3, limits)?;
    let mut report = CheckReport::new("lemma2");

    let on_0e1 = [n.zero(), n.element("e").expect("N has e"), n.one()];
    let a = match (find_embedding(&b1, &n), Homomorphism::new(&b1, &n, on_0e1.to_vec())) {
        (Some(found), Ok(_)) => CheckItem::pass(
            "a",
            format!(
                "B1 embeds in N on {{0,e,1}}; least embedding has image {{{}}}",
                found.image().iter().map(|&x| n.label(x)).collect::<Vec<_>>().join(",")
            ),
        ),
        (None, _) => CheckItem::fail("a", "no embedding of B1 into N"),
        (_, Err(e)) => CheckItem::fail("a", format!("{{0,e,1}} is not a subalgebra: {e}")),
    };
    report.push(a);

    let listed: BTreeSet<usize> = LEMMA2_TUPLES.iter().map(|t| tuple_index(t)).collect();
    let b = match cube.subalgebra(&listed) {
        Err(e) => CheckItem::fail("b", e.to_string()),
        Ok((sub, _)) => {
            // the listed correspondence itself, not just some isomorphism
            let map: Vec<usize> = listed
                .iter()
                .map(|&x| {
                    let k = LEMMA2_TUPLES.iter().position(|t| tuple_index(t) == x);
                    k.expect("member of the listed set")
                })
                .collect();
            match Homomorphism::new(&sub, &n, map) {
                Ok(h) if h.is_isomorphism() => CheckItem::pass("b", "six tuples closed and isomorphic to N"),
                Ok(_) => CheckItem::fail("b", "listed correspondence is not bijective"),
                Err(e) => match is_isomorphic(&sub, &n) {
                    Some(_) => CheckItem::fail("b", format!("isomorphic, but not via the listing: {e}")),
                    None => CheckItem::fail("b", format!("subuniverse not isomorphic to N: {e}")),
                },
            }
        }
    };
    report.push(b);

    let gens = [tuple_index(&[I, E, E]), tuple_index(&[E, E, I])];
    let (generated, inclusion) = generated_subalgebra(&cube, &gens)?;
    let carrier: BTreeSet<usize> = inclusion.image().into_iter().collect();
    report.push(if carrier == listed {
        CheckItem::pass("c", format!("generated subalgebra has the {} listed elements", generated.size()))
    } else {
        CheckItem::fail(
            "c",
            format!(
                "generated {}",
                carrier
                    .iter()
                    .map(|&x| cube.label(x))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        )
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verify_p_algebra;

    #[test]
    fn n_shape() {
        let n = make_n();
        assert_eq!(n.size(), 6);
        assert!(verify_p_algebra(&n.to_raw()).is_ok());
        let el = |s: &str| n.element(s).unwrap();
        assert_eq!(n.join(el("b"), el("c")), el("e"));
        assert_eq!(n.meet(el("b"), el("c")), el("a"));
        assert_eq!(n.star(el("0")), el("1"));
        for x in ["a", "b", "c", "e", "1"] {
            assert_eq!(n.star(el(x)), el("0"));
        }
    }

    #[test]
    fn lemma2_report() {
        let r = verify_lemma2(&Limits::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.items.len(), 3);
    }

    #[test]
    fn least_embedding_of_b1() {
        let n = make_n();
        let h = find_embedding(&make_bnalg(1).unwrap(), &n).unwrap();
        assert_eq!(h.map(), [0, 1, 5]);
    }
}
