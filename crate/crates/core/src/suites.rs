//! The verification suites run by `palg check`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    heyting_implication, make_bnalg, powerset_algebra, product, verify_p_algebra, FinitePAlgebra,
    RawAlgebra,
};
use crate::congruence::{all_congruences, principal_congruence, subdirect_irreducibility};
use crate::duality::{duality_roundtrip, enumerate_posets, join_irreducibles, upset_algebra};
use crate::encodings::{
    all_boolean_pairs, boolean_pair_subuniverse, chi, enumerate_graphs, graph_encode,
    graph_isomorphism, make_n, recover_graph, verify_definability, verify_lemma2, Graph,
};
use crate::error::{Error, Result};
use crate::fo::{
    eval, eval_graph, eval_with_witness, fo_recover_graph, graph_battery, satisfiers,
    translate_graph_sentence, Env, Formula,
};
use crate::morphism::is_isomorphic;
use crate::poset::FinitePoset;
use crate::report::{CheckItem, CheckReport};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Duality,
    Lemma1,
    Lemma2,
    Lemma3,
    Si,
    CongruencesN,
    ThreeElement,
    BooleanBoundary,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "axioms",
        "duality",
        "lemma1",
        "lemma2",
        "lemma3",
        "si",
        "congruences-N",
        "three-element",
        "boolean-boundary",
        "all",
    ];

    const ALL: [Suite; 10] = [
        Suite::Axioms,
        Suite::Duality,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Si,
        Suite::CongruencesN,
        Suite::ThreeElement,
        Suite::BooleanBoundary,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|&s| s == self).expect("listed")]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| Error::parse("suite name", format!("unknown suite `{s}`")))
    }
}

/// Bounds for the exhaustive parts of the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Largest index set for Boolean pairs.
    pub max_index: usize,
    /// Largest poset for the duality checks.
    pub max_poset: usize,
    /// Largest poset for the subdirect irreducibility check.
    pub max_si_poset: usize,
    /// Largest graph for the encoding round trip.
    pub max_vertices: usize,
    /// Seed for the sampled graphs; `None` skips them.
    pub seed: Option<u64>,
    pub limits: Limits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_index: 3,
            max_poset: 5,
            max_si_poset: 4,
            max_vertices: 5,
            seed: None,
            limits: Limits::default(),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<CheckReport> {
    match suite {
        Suite::Axioms => axioms(opts),
        Suite::Duality => duality(opts),
        Suite::Lemma1 => lemma1(opts),
        Suite::Lemma2 => verify_lemma2(&opts.limits),
        Suite::Lemma3 => lemma3(opts),
        Suite::Si => si(opts),
        Suite::CongruencesN => congruences_n(opts),
        Suite::ThreeElement => three_element(),
        Suite::BooleanBoundary => boolean_boundary(),
        Suite::All => {
            let mut all = CheckReport::new("all");
            for s in &Suite::ALL[..Suite::ALL.len() - 1] {
                for mut item in run_suite(*s, opts)?.items {
                    item.id = format!("{s}/{}", item.id);
                    all.push(item);
                }
            }
            Ok(all)
        }
    }
}

fn describe_poset(p: &FinitePoset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    format!("poset on {} points [{}]", p.size(), covers.join(" "))
}

/// The algebras used for the representation checks, by name.
pub fn catalogue(limits: &Limits) -> Result<Vec<(String, FinitePAlgebra)>> {
    let mut out = Vec::new();
    for i in 0..=3 {
        out.push((format!("B{i}bar"), make_bnalg(i)?));
    }
    out.push(("N".into(), make_n()));
    let b1 = make_bnalg(1)?;
    out.push(("B1bar^2".into(), product(&[b1.clone(), b1], limits)?));
    out.push(("Up(P_G)".into(), example_encoding(limits)?.algebra));
    Ok(out)
}

/// The graph with an edge `u -- v` and an isolated vertex `w`.
pub fn example_graph() -> Graph {
    Graph::new(vec!["u".into(), "v".into(), "w".into()], [(0, 1)]).expect("valid graph")
}

fn example_encoding(limits: &Limits) -> Result<crate::encodings::GraphEncoding> {
    graph_encode(&example_graph(), limits)
}

fn axioms(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("axioms");
    for n in 0..=opts.max_poset {
        let posets = enumerate_posets(n)?;
        let mut failure = None;
        for p in &posets {
            let up = upset_algebra(p, &opts.limits)?;
            if let Err(v) = verify_p_algebra(&up.to_raw()) {
                failure = Some(format!("Up of {}: {v}", describe_poset(p)));
                break;
            }
            if !join_irreducibles(&up).is_isomorphic(p) {
                failure = Some(format!("J(Up(P)) not isomorphic to {}", describe_poset(p)));
                break;
            }
        }
        report.push(match failure {
            None => CheckItem::pass(format!("posets-{n}"), format!("{} posets", posets.len())),
            Some(why) => CheckItem::fail(format!("posets-{n}"), why),
        });
    }
    for (name, a) in catalogue(&opts.limits)? {
        report.push(CheckItem::from_result(
            format!("verify-{name}"),
            format!("{} elements", a.size()),
            verify_p_algebra(&a.to_raw()),
        ));
    }
    Ok(report)
}

fn duality(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("duality");
    for (name, a) in catalogue(&opts.limits)? {
        let item = match duality_roundtrip(&a, &opts.limits) {
            Ok(h) => CheckItem::pass(
                format!("roundtrip-{name}"),
                format!("{} elements, {} join-irreducibles", h.source().size(), join_irreducibles(&a).size()),
            ),
            Err(e) => CheckItem::fail(format!("roundtrip-{name}"), e.to_string()),
        };
        report.push(item);
    }
    Ok(report)
}

fn lemma1(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("lemma1");
    let in_c = Formula::pred("inC", &["x"]);
    let in_c0 = Formula::pred("inC0", &["x"]);
    for n in 1..=opts.max_index {
        let pairs = all_boolean_pairs(n)?;
        let mut failure = None;
        for bp in &pairs {
            let r = verify_definability(bp, &opts.limits)?;
            if let Some(bad) = r.failures().next() {
                failure = Some(format!("{bp:?}: ({}) {}", bad.id, bad.detail));
                break;
            }
            let pa = boolean_pair_subuniverse(bp, &opts.limits)?;
            let expect = |fam: &BTreeSet<u32>| -> Vec<usize> {
                let mut v: Vec<usize> = fam
                    .iter()
                    .map(|&x| pa.element(&chi(n, x)).expect("checked by (a)"))
                    .collect();
                v.sort_unstable();
                v
            };
            if satisfiers(&pa.algebra, &in_c, "x")? != expect(bp.big())
                || satisfiers(&pa.algebra, &in_c0, "x")? != expect(bp.small())
            {
                failure = Some(format!("{bp:?}: inC or inC0 defines the wrong set"));
                break;
            }
        }
        report.push(match failure {
            None => CheckItem::pass(format!("index-{n}"), format!("{} Boolean pairs", pairs.len())),
            Some(why) => CheckItem::fail(format!("index-{n}"), why),
        });
    }
    Ok(report)
}

/// Runs every round-trip check on one graph; `Err` carries the first failure.
pub fn check_graph(g: &Graph, limits: &Limits) -> Result<std::result::Result<(), String>> {
    let enc = graph_encode(g, limits)?;
    if !enc.cover.is_surjective() {
        return Ok(Err("cover is not surjective".into()));
    }
    if let Err(why) = enc.embedding.verify(&enc.algebra) {
        return Ok(Err(format!("embedding: {why}")));
    }
    if let Some((_, h)) = &enc.explicit {
        if !h.is_injective() {
            return Ok(Err("explicit embedding is not injective".into()));
        }
    }
    let recovered = recover_graph(&enc.algebra)?;
    if graph_isomorphism(&recovered, g).is_none() {
        return Ok(Err("recovered graph is not isomorphic to the input".into()));
    }
    if fo_recover_graph(&enc.algebra)? != recovered {
        return Ok(Err("first-order recovery disagrees".into()));
    }
    for (name, phi) in graph_battery() {
        let lhs = eval_graph(g, &phi, &BTreeMap::new())?;
        let rhs = eval(&enc.algebra, &translate_graph_sentence(&phi)?, &Env::new())?;
        if lhs != rhs {
            return Ok(Err(format!("sentence {name}: graph {lhs}, algebra {rhs}")));
        }
    }
    Ok(Ok(()))
}

fn describe_graph(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|&(a, b)| format!("{}-{}", g.labels()[a], g.labels()[b]))
        .collect();
    format!("graph on {} vertices [{}]", g.vertex_count(), edges.join(" "))
}

/// Random graph on `n` vertices with `m` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    Graph::unlabelled(n, pairs).expect("distinct pairs")
}

fn lemma3(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("lemma3");
    let enc = example_encoding(&opts.limits)?;
    let ji = enc.algebra.join_irreducible_elements().len();
    report.push(CheckItem::new(
        "example",
        enc.algebra.size() == 11 && ji == 5 && enc.index_labels.len() == 4,
        format!(
            "{} elements, {ji} join-irreducibles, |I| = {}",
            enc.algebra.size(),
            enc.index_labels.len()
        ),
    ));
    for n in 1..=opts.max_vertices {
        let graphs = enumerate_graphs(n)?;
        let mut failure = None;
        for g in &graphs {
            if let Err(why) = check_graph(g, &opts.limits)? {
                failure = Some(format!("{}: {why}", describe_graph(g)));
                break;
            }
        }
        report.push(match failure {
            None => CheckItem::pass(format!("graphs-{n}"), format!("{} graphs", graphs.len())),
            Some(why) => CheckItem::fail(format!("graphs-{n}"), why),
        });
    }
    if let Some(seed) = opts.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failure = None;
        for _ in 0..3 {
            let g = random_graph(&mut rng, 6, 4);
            if let Err(why) = check_graph(&g, &opts.limits)? {
                failure = Some(format!("{}: {why}", describe_graph(&g)));
                break;
            }
        }
        report.push(match failure {
            None => CheckItem::pass("random", format!("3 graphs on 6 vertices, seed {seed}")),
            Some(why) => CheckItem::fail("random", why),
        });
    }
    Ok(report)
}

fn si(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("si");
    // Up(P) of a stacked algebra B̄ᵢ has a poset of i + 1 points
    let stacked: Vec<FinitePAlgebra> = (0..opts.max_si_poset.max(1))
        .map(make_bnalg)
        .collect::<Result<_>>()?;
    for n in 0..=opts.max_si_poset {
        let posets = enumerate_posets(n)?;
        let mut failure = None;
        let mut irreducible = 0;
        for p in &posets {
            let up = upset_algebra(p, &opts.limits)?;
            let si = subdirect_irreducibility(&up, &opts.limits)?.is_irreducible();
            let is_stacked = stacked.iter().any(|b| is_isomorphic(&up, b).is_some());
            irreducible += si as usize;
            if si != is_stacked {
                failure = Some(format!(
                    "{}: irreducible {si}, stacked Boolean {is_stacked}",
                    describe_poset(p)
                ));
                break;
            }
        }
        report.push(match failure {
            None => CheckItem::pass(
                format!("posets-{n}"),
                format!("{} posets, {irreducible} irreducible", posets.len()),
            ),
            Some(why) => CheckItem::fail(format!("posets-{n}"), why),
        });
    }
    Ok(report)
}

fn congruences_n(opts: &SuiteOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("congruences-N");
    let n = make_n();
    let el = |s: &str| n.element(s).expect("N element");
    let lattice = all_congruences(&n, &opts.limits)?;
    let named = [("b", "1"), ("c", "1"), ("a", "e")];
    let thetas: Vec<_> = named
        .iter()
        .map(|&(x, y)| principal_congruence(&n, el(x), el(y)))
        .collect();
    let minimal: BTreeSet<usize> = lattice.minimal_meet_irreducibles().into_iter().collect();
    let expected: Option<BTreeSet<usize>> = thetas.iter().map(|t| lattice.position(t)).collect();
    let describe = |ix: &BTreeSet<usize>| -> String {
        ix.iter()
            .map(|&i| lattice.congruences()[i].describe())
            .collect::<Vec<_>>()
            .join(" ; ")
    };
    report.push(CheckItem::new(
        "minimal-meet-irreducibles",
        expected.as_ref() == Some(&minimal),
        format!("{} congruences; minimal meet-irreducibles {}", lattice.len(), describe(&minimal)),
    ));
    let si = subdirect_irreducibility(&n, &opts.limits)?;
    report.push(CheckItem::new("not-si", !si.is_irreducible(), format!("{si:?}").chars().take(120).collect::<String>()));
    report.push(CheckItem::new(
        "theta-a-e-separates-0-1",
        !thetas[2].related(n.zero(), n.one()),
        thetas[2].describe(),
    ));
    let imp = heyting_implication(&n).ok_or_else(|| Error::NotDistributive("N has no implication".into()))?;
    for ((x, y), t) in named.iter().zip(&thetas) {
        let violation = t.binary_violation(&imp);
        let want_compatible = *x != "a";
        let detail = match violation {
            None => "compatible with ->".to_string(),
            Some((p, q, r, s)) => format!(
                "{} ~ {} and {} ~ {} but {}->{} = {} vs {}->{} = {}",
                n.label(p),
                n.label(q),
                n.label(r),
                n.label(s),
                n.label(p),
                n.label(r),
                n.label(imp[p][r]),
                n.label(q),
                n.label(s),
                n.label(imp[q][s])
            ),
        };
        report.push(CheckItem::new(
            format!("heyting-theta-{x}-{y}"),
            violation.is_none() == want_compatible,
            detail,
        ));
    }
    Ok(report)
}

/// Every p-algebra on `{0, 1, 2}`: all reflexive relations, star tables and
/// bounds, filtered by the axioms.
pub fn three_element_algebras() -> Vec<FinitePAlgebra> {
    let off: Vec<(usize, usize)> = (0..3)
        .flat_map(|p| (0..3).filter(move |&q| q != p).map(move |q| (p, q)))
        .collect();
    let mut out = Vec::new();
    for rel in 0u32..1 << off.len() {
        let mut leq: Vec<(usize, usize)> = (0..3).map(|p| (p, p)).collect();
        leq.extend((0..off.len()).filter(|k| rel >> k & 1 == 1).map(|k| off[k]));
        for st in 0..27 {
            let star = vec![st % 3, st / 3 % 3, st / 9];
            for zero in 0..3 {
                for one in 0..3 {
                    let raw = RawAlgebra {
                        size: 3,
                        leq: leq.clone(),
                        star: star.clone(),
                        zero,
                        one,
                        ..RawAlgebra::default()
                    };
                    if verify_p_algebra(&raw).is_ok() {
                        out.push(FinitePAlgebra::new(&raw).expect("verified"));
                    }
                }
            }
        }
    }
    out
}

fn three_element() -> Result<CheckReport> {
    let mut report = CheckReport::new("three-element");
    let candidates = three_element_algebras();
    let mut classes: Vec<FinitePAlgebra> = Vec::new();
    for a in &candidates {
        if !classes.iter().any(|c| is_isomorphic(c, a).is_some()) {
            classes.push(a.clone());
        }
    }
    let b1 = make_bnalg(1)?;
    report.push(CheckItem::new(
        "unique",
        classes.len() == 1 && is_isomorphic(&classes[0], &b1).is_some(),
        format!("{} labelled algebras, {} isomorphism classes", candidates.len(), classes.len()),
    ));
    Ok(report)
}

fn boolean_boundary() -> Result<CheckReport> {
    let mut report = CheckReport::new("boolean-boundary");
    let law = Formula::pred("boolean_law", &[]);
    let law_expanded = crate::fo::parse_formula("A x. x | x* = 1")?;
    report.push(CheckItem::new(
        "B0bar",
        eval(&make_bnalg(0)?, &law, &Env::new())?,
        "law holds",
    ));
    for k in 0..=4 {
        report.push(CheckItem::new(
            format!("powerset-{k}"),
            eval(&powerset_algebra(k)?, &law, &Env::new())?,
            "law holds",
        ));
    }
    for i in 1..=4 {
        let a = make_bnalg(i)?;
        let r = eval_with_witness(&a, &law_expanded, &Env::new())?;
        let e = a.element("e").expect("stacked algebras label the old top e");
        let witness: Vec<String> = r.witness.iter().map(|(v, x)| format!("{v} = {}", a.label(*x))).collect();
        report.push(CheckItem::new(
            format!("B{i}bar"),
            !r.value && r.witness == [("x".to_string(), e)],
            format!("law false, witness {}", witness.join(", ")),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("lemma9".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let opts = SuiteOptions {
            max_index: 2,
            max_poset: 3,
            max_si_poset: 3,
            max_vertices: 3,
            seed: Some(7),
            ..SuiteOptions::default()
        };
        for s in [
            Suite::Axioms,
            Suite::Duality,
            Suite::Lemma1,
            Suite::Lemma2,
            Suite::Lemma3,
            Suite::Si,
            Suite::CongruencesN,
            Suite::ThreeElement,
            Suite::BooleanBoundary,
        ] {
            let r = run_suite(s, &opts).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn random_graphs_follow_the_seed() {
        let a = random_graph(&mut ChaCha8Rng::seed_from_u64(3), 6, 4);
        let b = random_graph(&mut ChaCha8Rng::seed_from_u64(3), 6, 4);
        assert_eq!(a, b);
        assert_eq!(a.edges().len(), 4);
    }
}
