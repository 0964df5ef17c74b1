use std::collections::{BTreeMap, BTreeSet};

use super::{tuple_index, Three};
use crate::algebra::{make_bnalg, power, FinitePAlgebra};
use crate::duality::{dual_homomorphism, upset_algebra_parts, PPMorphism};
use crate::error::{Error, Result};
use crate::morphism::Homomorphism;
use crate::poset::FinitePoset;
use crate::Limits;

/// Largest vertex count for [`enumerate_graphs`].
pub const MAX_ENUMERATED_GRAPH: usize = 6;

/// A finite simple graph. Edges are stored as `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Rejects loops, repeated edges (in either orientation) and repeated labels.
    pub fn new(labels: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidGraph("repeated vertex name".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at {}", labels[a])));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!(
                    "repeated edge {} -- {}",
                    labels[a], labels[b]
                )));
            }
        }
        Ok(Graph { labels, edges: set })
    }

    /// Vertices named `v0, v1, ..`.
    pub fn unlabelled(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|i| format!("v{i}")).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All simple graphs on `n` unlabelled vertices, one per isomorphism class.
/// An edge set is kept when its bit mask is the least among its relabellings.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUMERATED_GRAPH {
        return Err(Error::cap("graph enumeration size", MAX_ENUMERATED_GRAPH, n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let slot: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let relabel: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|perm| {
            pairs
                .iter()
                .map(|&(a, b)| slot[&(perm[a].min(perm[b]), perm[a].max(perm[b]))])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canonical = relabel.iter().all(|r| {
            let image = (0..pairs.len())
                .filter(|&k| mask >> k & 1 == 1)
                .fold(0u32, |acc, k| acc | 1 << r[k]);
            image >= mask
        });
        if canonical {
            let edges = (0..pairs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| pairs[k]);
            out.push(Graph::unlabelled(n, edges)?);
        }
    }
    Ok(out)
}

/// A vertex bijection `g -> h` carrying edges onto edges, if one exists.
pub fn graph_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edges().len() != h.edges().len() {
        return None;
    }
    let dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut sg = dg.clone();
    let mut sh = dh.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }
    fn go(
        v: usize,
        g: &Graph,
        h: &Graph,
        dg: &[usize],
        dh: &[usize],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        if v == dg.len() {
            return true;
        }
        for w in 0..dh.len() {
            if used[w] || dg[v] != dh[w] {
                continue;
            }
            if (0..v).any(|u| g.has_edge(u, v) != h.has_edge(map[u], w)) {
                continue;
            }
            used[w] = true;
            map.push(w);
            if go(v + 1, g, h, dg, dh, map, used) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    go(0, g, h, &dg, &dh, &mut map, &mut vec![false; n]).then_some(map)
}

/// `P_G`: the empty set, the singletons and the edges under reverse
/// inclusion. Point 0 is the top `{}`, points `1..=|V|` the singletons, then
/// the edges in sorted order.
pub fn graph_to_poset(g: &Graph) -> FinitePoset {
    let nv = g.vertex_count();
    let mut labels = vec!["{}".to_string()];
    labels.extend(g.labels().iter().map(|l| format!("{{{l}}}")));
    let mut pairs: Vec<(usize, usize)> = (1..=nv).map(|v| (v, 0)).collect();
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        let p = 1 + nv + k;
        labels.push(format!("{{{},{}}}", g.labels()[a], g.labels()[b]));
        pairs.push((p, 1 + a));
        pairs.push((p, 1 + b));
    }
    FinitePoset::from_generators(labels.len(), pairs, Some(labels)).expect("P_G is a poset")
}

/// An injective homomorphism into `B̄₁^k`, stored coordinate-wise so the
/// power never has to be built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerEmbedding {
    pub exponent: usize,
    /// `coords[x]` is the image of element `x`.
    pub coords: Vec<Vec<Three>>,
}

impl PowerEmbedding {
    /// Checks injectivity and preservation of the operations pointwise.
    pub fn verify(&self, a: &FinitePAlgebra) -> std::result::Result<(), String> {
        if self.coords.len() != a.size() || self.coords.iter().any(|c| c.len() != self.exponent) {
            return Err("coordinate table has the wrong shape".into());
        }
        let distinct: BTreeSet<&Vec<Three>> = self.coords.iter().collect();
        if distinct.len() != a.size() {
            return Err("not injective".into());
        }
        let k = self.exponent;
        if self.coords[a.zero()] != vec![Three::Zero; k] || self.coords[a.one()] != vec![Three::One; k] {
            return Err("bounds not preserved".into());
        }
        for x in a.elements() {
            let cx = &self.coords[x];
            let cs = &self.coords[a.star(x)];
            if (0..k).any(|i| cs[i] != cx[i].star()) {
                return Err(format!("star not preserved at {}", a.label(x)));
            }
            for y in a.elements() {
                let cy = &self.coords[y];
                let cm = &self.coords[a.meet(x, y)];
                let cj = &self.coords[a.join(x, y)];
                if (0..k).any(|i| cm[i] != cx[i].meet(cy[i]) || cj[i] != cx[i].join(cy[i])) {
                    return Err(format!(
                        "operations not preserved at {} and {}",
                        a.label(x),
                        a.label(y)
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Everything built from a graph: `P_G`, the cover `f : 2×I -> P_G`, the
/// algebra `Up(P_G)` and its embedding into `B̄₁^I`.
#[derive(Clone, Debug)]
pub struct GraphEncoding {
    pub graph: Graph,
    pub poset: FinitePoset,
    /// `I`: vertices, then edges.
    pub index_labels: Vec<String>,
    /// `2×I`; point `2i` is `<0,i>` and `2i+1` is `<1,i>`.
    pub index_poset: FinitePoset,
    pub cover: PPMorphism,
    pub algebra: FinitePAlgebra,
    pub embedding: PowerEmbedding,
    /// The power and the embedding as a [`Homomorphism`], when `3^|I|` is
    /// within the size cap.
    pub explicit: Option<(FinitePAlgebra, Homomorphism)>,
}

/// Builds the encoding of a graph with at least one vertex. With no vertices
/// `2×I` is empty and cannot cover the top of `P_G`.
pub fn graph_encode(g: &Graph, limits: &Limits) -> Result<GraphEncoding> {
    let nv = g.vertex_count();
    if nv == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let poset = graph_to_poset(g);
    let m = poset.size() - 1;
    let index_labels: Vec<String> = (1..=m).map(|p| poset.label(p)).collect();
    let u_labels = index_labels
        .iter()
        .flat_map(|l| [format!("<0,{l}>"), format!("<1,{l}>")])
        .collect();
    let index_poset =
        FinitePoset::from_generators(2 * m, (0..m).map(|i| (2 * i, 2 * i + 1)), Some(u_labels))?;
    let map = (0..m).flat_map(|i| [1 + i, 0]).collect();
    let cover = PPMorphism::new(&index_poset, &poset, map)?;
    if !cover.is_surjective() {
        return Err(Error::InvalidGraph("cover is not surjective".into()));
    }
    let (algebra, sets) = upset_algebra_parts(&poset, limits)?;
    let chain_tuple = |pre: &fixedbitset::FixedBitSet| -> Vec<Three> {
        (0..m)
            .map(|i| {
                let c = pre.contains(2 * i) as usize + pre.contains(2 * i + 1) as usize;
                Three::from_index(c).expect("at most two points per chain")
            })
            .collect()
    };
    let coords = sets.iter().map(|x| chain_tuple(&cover.preimage(x))).collect();
    let embedding = PowerEmbedding { exponent: m, coords };

    let explicit = if 3usize.saturating_pow(m as u32) <= limits.max_size {
        let pow = power(&make_bnalg(1)?, m, limits)?;
        let dual = dual_homomorphism(&cover, limits)?;
        let (up_u, sets_u) = upset_algebra_parts(&index_poset, limits)?;
        let iso_map = sets_u.iter().map(|s| tuple_index(&chain_tuple(s))).collect();
        let iso = Homomorphism::new(&up_u, &pow, iso_map)?;
        let h = dual.then(&iso)?;
        Some((pow, h))
    } else {
        None
    };
    Ok(GraphEncoding {
        graph: g.clone(),
        poset,
        index_labels,
        index_poset,
        cover,
        algebra,
        embedding,
        explicit,
    })
}

/// Reads a graph off an algebra with exactly one atom: the vertices are the
/// join-irreducible covers of the atom, and two of them are adjacent when
/// exactly one join-irreducible lies above both.
pub fn recover_graph(a: &FinitePAlgebra) -> Result<Graph> {
    let atoms = a.atoms();
    if atoms.len() != 1 {
        return Err(Error::AtomCount(atoms.len()));
    }
    let atom = atoms[0];
    let ji = a.join_irreducible_elements();
    let vertices: Vec<usize> = ji.iter().copied().filter(|&x| a.covers(atom, x)).collect();
    let mut edges = Vec::new();
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate().skip(i + 1) {
            let above = ji.iter().filter(|&&z| a.leq(x, z) && a.leq(y, z)).count();
            if above == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(vertices.iter().map(|&x| a.label(x)).collect(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_bnalg;
    use crate::duality::join_irreducibles;
    use crate::morphism::is_isomorphic;

    fn example_graph() -> Graph {
        Graph::new(vec!["u".into(), "v".into(), "w".into()], [(0, 1)]).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::unlabelled(2, [(0, 0)]).is_err());
        assert!(Graph::unlabelled(2, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::unlabelled(2, [(0, 2)]).is_err());
        assert!(Graph::new(vec!["a".into(), "a".into()], []).is_err());
    }

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 11, 34]);
    }

    #[test]
    fn isomorphism_of_paths() {
        let p = Graph::unlabelled(3, [(0, 1), (1, 2)]).unwrap();
        let q = Graph::unlabelled(3, [(0, 2), (2, 1)]).unwrap();
        let map = graph_isomorphism(&p, &q).unwrap();
        for &(a, b) in p.edges() {
            assert!(q.has_edge(map[a], map[b]));
        }
        let t = Graph::unlabelled(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(graph_isomorphism(&p, &t).is_none());
    }

    #[test]
    fn poset_sizes() {
        assert_eq!(graph_to_poset(&example_graph()).size(), 5);
        let single = graph_to_poset(&Graph::unlabelled(1, []).unwrap());
        assert!(single.is_isomorphic(&FinitePoset::chain(2)));
        let triangle = Graph::unlabelled(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(graph_to_poset(&triangle).size(), 7);
    }

    #[test]
    fn edge_points_lie_below_their_endpoints() {
        let p = graph_to_poset(&example_graph());
        // 0 = {}, 1..=3 = {u},{v},{w}, 4 = {u,v}
        assert_eq!(p.maximal_elements(), [0]);
        let above_edge: Vec<usize> = p.up(4).ones().collect();
        assert_eq!(above_edge, [0, 1, 2, 4]);
    }

    #[test]
    fn example_encoding() {
        let enc = graph_encode(&example_graph(), &Limits::default()).unwrap();
        assert_eq!(enc.index_labels.len(), 4);
        assert_eq!(enc.algebra.size(), 11);
        assert_eq!(enc.algebra.join_irreducible_elements().len(), 5);
        assert!(join_irreducibles(&enc.algebra).is_isomorphic(&enc.poset));
        assert!(enc.cover.is_surjective());
        enc.embedding.verify(&enc.algebra).unwrap();
        let (pow, h) = enc.explicit.as_ref().unwrap();
        assert_eq!(pow.size(), 81);
        assert!(h.is_injective());
        for x in enc.algebra.elements() {
            assert_eq!(h.apply(x), tuple_index(&enc.embedding.coords[x]));
        }
        let back = recover_graph(&enc.algebra).unwrap();
        assert!(graph_isomorphism(&back, &example_graph()).is_some());
        assert_eq!(back.edges().len(), 1);
    }

    #[test]
    fn single_vertex_is_b1() {
        let enc = graph_encode(&Graph::unlabelled(1, []).unwrap(), &Limits::default()).unwrap();
        assert!(is_isomorphic(&enc.algebra, &make_bnalg(1).unwrap()).is_some());
        let g = recover_graph(&make_bnalg(1).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edges().len()), (1, 0));
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(graph_encode(&Graph::unlabelled(0, []).unwrap(), &Limits::default()).is_err());
    }

    #[test]
    fn recover_needs_one_atom() {
        let b2 = crate::algebra::powerset_algebra(2).unwrap();
        assert_eq!(recover_graph(&b2), Err(Error::AtomCount(2)));
    }

    #[test]
    fn implicit_mode_on_larger_graphs() {
        let k4 = Graph::unlabelled(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let enc = graph_encode(&k4, &Limits::default()).unwrap();
        assert!(enc.explicit.is_none());
        enc.embedding.verify(&enc.algebra).unwrap();
        assert!(graph_isomorphism(&recover_graph(&enc.algebra).unwrap(), &k4).is_some());
    }
}
