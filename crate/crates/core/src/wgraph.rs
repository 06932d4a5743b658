//! Weighted directed graphs with at most one edge per ordered pair of
//! vertices, and their correspondence with evolution algebras.
//!
//! An edge `i -> j` with weight `w` records that `e_j` appears in `e_i^2` with
//! coefficient `w`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, EvolutionAlgebra};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

/// Default vertex cap for automorphism enumeration.
pub const DEFAULT_AUT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("edge {0} -> {1} has zero weight")]
    ZeroWeight(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("graph has {0} vertices, automorphism enumeration is capped at {1}")]
    TooLarge(usize, usize),
    #[error("permutation is not an automorphism of the underlying graph")]
    NotAGraphAutomorphism,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    field: FieldSpec,
    labels: Vec<String>,
    edges: BTreeMap<(usize, usize), Scalar>,
}

impl WeightedGraph {
    pub fn new(field: FieldSpec, labels: Vec<String>) -> Result<Self, GraphError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        Ok(WeightedGraph {
            field,
            labels,
            edges: BTreeMap::new(),
        })
    }

    /// Graph on `n` vertices labelled `e1..en` with the given weighted edges.
    pub fn from_edges(
        field: FieldSpec,
        n: usize,
        edges: &[(usize, usize, Scalar)],
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(field, crate::algebra::default_labels(n))?;
        for (s, t, w) in edges {
            g.add_edge(*s, *t, w.clone())?;
        }
        Ok(g)
    }

    fn label(&self, v: usize) -> String {
        self.labels
            .get(v)
            .cloned()
            .unwrap_or_else(|| format!("#{}", v + 1))
    }

    /// Adds an edge; a second edge between the same ordered pair is rejected.
    pub fn add_edge(&mut self, src: usize, dst: usize, weight: Scalar) -> Result<(), GraphError> {
        let n = self.labels.len();
        for v in [src, dst] {
            if v >= n {
                return Err(GraphError::UnknownVertex(self.label(v)));
            }
        }
        self.field.check(&weight)?;
        if weight.is_zero() {
            return Err(GraphError::ZeroWeight(self.label(src), self.label(dst)));
        }
        if self.edges.contains_key(&(src, dst)) {
            return Err(GraphError::DuplicateEdge(self.label(src), self.label(dst)));
        }
        self.edges.insert((src, dst), weight);
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges with weights, in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.edges.iter().map(|(&(s, t), w)| (s, t, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<&Scalar> {
        self.edges.get(&(src, dst))
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.edges.contains_key(&(src, dst))
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..(v + 1, 0)).map(|(&(_, t), _)| t)
    }

    /// At most one edge per ordered pair; holds by construction.
    pub fn satisfies_sing(&self) -> bool {
        let pairs: HashSet<(usize, usize)> = self.edges.keys().copied().collect();
        pairs.len() == self.edges.len() && self.edges.values().all(|w| !w.is_zero())
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut adj = vec![vec![false; n]; n];
        for &(s, t) in self.edges.keys() {
            adj[s][t] = true;
        }
        adj
    }
}

/// The graph of an algebra: edge `i -> j` with weight `w_ji` whenever
/// `w_ji != 0`.
pub fn algebra_to_wgraph(algebra: &EvolutionAlgebra) -> WeightedGraph {
    let n = algebra.dim();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let w = algebra.omega(j, i);
            if !w.is_zero() {
                edges.insert((i, j), w.clone());
            }
        }
    }
    let g = WeightedGraph {
        field: algebra.field().clone(),
        labels: algebra.labels().to_vec(),
        edges,
    };
    debug_assert!(g.satisfies_sing());
    g
}

/// The algebra with `e_i^2 = sum over edges i -> j of w * e_j`.
pub fn wgraph_to_algebra(
    graph: &WeightedGraph,
    field: &FieldSpec,
) -> Result<EvolutionAlgebra, GraphError> {
    let n = graph.vertex_count();
    let mut matrix = vec![vec![field.zero(); n]; n];
    for (s, t, w) in graph.edges() {
        field.check(w)?;
        matrix[t][s] = w.clone();
    }
    Ok(EvolutionAlgebra::new(
        field.clone(),
        graph.labels().to_vec(),
        matrix,
    )?)
}

/// Vertices reachable from `sources` along directed paths, sources included.
pub fn tree_of(graph: &WeightedGraph, sources: &[usize]) -> Result<BTreeSet<usize>, GraphError> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if s >= graph.vertex_count() {
            return Err(GraphError::UnknownVertex(format!("#{}", s + 1)));
        }
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for t in graph.out_neighbors(v) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    Ok(seen)
}

/// Vertex permutation `v -> sigma[v]` preserving adjacency (weights ignored).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphAutomorphism {
    pub sigma: Vec<usize>,
}

impl GraphAutomorphism {
    pub fn identity(n: usize) -> Self {
        GraphAutomorphism {
            sigma: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        GraphAutomorphism {
            sigma: other.sigma.iter().map(|&v| self.sigma[v]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphAutomorphism {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s] = i;
        }
        GraphAutomorphism { sigma: inv }
    }

    pub fn is_automorphism_of(&self, graph: &WeightedGraph) -> bool {
        is_graph_isomorphism(graph, graph, &self.sigma)
    }
}

/// Whether `map` is a bijection `V(g) -> V(h)` carrying edges exactly onto
/// edges (weights ignored).
pub fn is_graph_isomorphism(g: &WeightedGraph, h: &WeightedGraph, map: &[usize]) -> bool {
    let n = g.vertex_count();
    if map.len() != n || h.vertex_count() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &m in map {
        if m >= n || hit[m] {
            return false;
        }
        hit[m] = true;
    }
    g.edge_count() == h.edge_count() && g.edges().all(|(s, t, _)| h.has_edge(map[s], map[t]))
}

impl fmt::Display for GraphAutomorphism {
    /// Cycle notation, 1-based; `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.sigma[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push((v + 1).to_string());
                v = self.sigma[v];
            }
            write!(f, "({})", cycle.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("id")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct VertexInvariant {
    out_degree: usize,
    in_degree: usize,
    has_loop: bool,
}

/// Every adjacency-preserving permutation, sorted lexicographically by
/// image word (identity first).
pub fn enumerate_graph_automorphisms(
    graph: &WeightedGraph,
    cap: usize,
) -> Result<Vec<GraphAutomorphism>, GraphError> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(GraphError::TooLarge(n, cap));
    }
    let adj = graph.adjacency();
    let inv: Vec<VertexInvariant> = (0..n)
        .map(|v| VertexInvariant {
            out_degree: adj[v].iter().filter(|&&b| b).count(),
            in_degree: (0..n).filter(|&u| adj[u][v]).count(),
            has_loop: adj[v][v],
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        inv[a]
            .cmp(&inv[b])
            .then_with(|| graph.labels[a].cmp(&graph.labels[b]))
    });

    let mut search = Backtrack {
        adj: &adj,
        inv: &inv,
        order: &order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        out: Vec::new(),
    };
    search.run(0);
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct Backtrack<'a> {
    adj: &'a [Vec<bool>],
    inv: &'a [VertexInvariant],
    order: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
    out: Vec<GraphAutomorphism>,
}

impl Backtrack<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.out.push(GraphAutomorphism {
                sigma: self.image.clone(),
            });
            return;
        }
        let v = self.order[depth];
        for c in 0..self.order.len() {
            if self.used[c] || self.inv[c] != self.inv[v] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                let iu = self.image[u];
                self.adj[u][v] == self.adj[iu][c] && self.adj[v][u] == self.adj[c][iu]
            });
            if !consistent {
                continue;
            }
            self.image[v] = c;
            self.used[c] = true;
            self.run(depth + 1);
            self.used[c] = false;
            self.image[v] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    pub(crate) fn cycle_with_ear(field: &FieldSpec) -> WeightedGraph {
        let edges: Vec<(usize, usize, Scalar)> = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 0)]
            .iter()
            .map(|&(s, t)| (s, t, field.one()))
            .collect();
        WeightedGraph::from_edges(field.clone(), 5, &edges).unwrap()
    }

    #[test]
    fn algebra_graph_examples() {
        let a = EvolutionAlgebra::from_square_ints(q(), &[&[1, 0], &[0, 0]]).unwrap();
        let g = algebra_to_wgraph(&a);
        assert_eq!(
            g.edges()
                .map(|(s, t, w)| (s, t, w.clone()))
                .collect::<Vec<_>>(),
            vec![(0, 0, q().one())]
        );

        let b = EvolutionAlgebra::from_square_ints(q(), &[&[1, 1], &[2, 1]]).unwrap();
        let g = algebra_to_wgraph(&b);
        let edges: Vec<(usize, usize, Scalar)> =
            g.edges().map(|(s, t, w)| (s, t, w.clone())).collect();
        assert_eq!(
            edges,
            vec![
                (0, 0, q().one()),
                (0, 1, q().one()),
                (1, 0, q().from_i64(2)),
                (1, 1, q().one())
            ]
        );

        let z =
            EvolutionAlgebra::from_square_ints(q(), &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]).unwrap();
        let g = algebra_to_wgraph(&z);
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 0));
    }

    #[test]
    fn graph_to_algebra() {
        let mut g = WeightedGraph::new(q(), vec!["v".into()]).unwrap();
        g.add_edge(0, 0, q().one()).unwrap();
        let a = wgraph_to_algebra(&g, &q()).unwrap();
        assert_eq!(a.square_of_basis(0).0, vec![q().one()]);

        let a = wgraph_to_algebra(&cycle_with_ear(&q()), &q()).unwrap();
        let sq = |i| {
            a.square_of_basis(i)
                .0
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(sq(0), "0,1,0,0,1");
        assert_eq!(sq(1), "0,0,1,0,0");
        assert_eq!(sq(2), "0,0,0,1,0");
        assert_eq!(sq(3), "1,0,0,0,0");
        assert_eq!(sq(4), "1,0,0,0,0");
        assert_eq!(algebra_to_wgraph(&a), cycle_with_ear(&q()));

        let f5 = FieldSpec::prime(5).unwrap();
        assert!(matches!(
            wgraph_to_algebra(&cycle_with_ear(&q()), &f5),
            Err(GraphError::Scalar(_))
        ));
    }

    #[test]
    fn condition_sing_enforced() {
        let mut g = WeightedGraph::new(q(), vec!["a".into(), "b".into()]).unwrap();
        g.add_edge(0, 1, q().one()).unwrap();
        assert!(matches!(
            g.add_edge(0, 1, q().from_i64(2)),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            g.add_edge(1, 0, q().zero()),
            Err(GraphError::ZeroWeight(..))
        ));
        assert!(matches!(
            g.add_edge(2, 0, q().one()),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(g.satisfies_sing());
        assert!(WeightedGraph::new(q(), vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn trees() {
        let g = cycle_with_ear(&q());
        assert_eq!(tree_of(&g, &[0]).unwrap(), (0..5).collect());
        let empty = WeightedGraph::from_edges(q(), 3, &[]).unwrap();
        assert_eq!(tree_of(&empty, &[1]).unwrap(), [1].into_iter().collect());
        let chain =
            WeightedGraph::from_edges(q(), 3, &[(0, 1, q().one()), (1, 2, q().one())]).unwrap();
        assert_eq!(tree_of(&chain, &[1]).unwrap(), [1, 2].into_iter().collect());
        assert!(matches!(
            tree_of(&chain, &[3]),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    fn brute_automorphisms(g: &WeightedGraph) -> Vec<GraphAutomorphism> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut out: Vec<GraphAutomorphism> = perms(g.vertex_count())
            .into_iter()
            .map(|sigma| GraphAutomorphism { sigma })
            .filter(|a| a.is_automorphism_of(g))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn automorphism_examples() {
        let b = EvolutionAlgebra::from_square_ints(q(), &[&[1, 1], &[2, 1]]).unwrap();
        let auts = enumerate_graph_automorphisms(&algebra_to_wgraph(&b), DEFAULT_AUT_CAP).unwrap();
        assert_eq!(
            auts,
            vec![
                GraphAutomorphism::identity(2),
                GraphAutomorphism { sigma: vec![1, 0] }
            ]
        );

        let g = cycle_with_ear(&q());
        let auts = enumerate_graph_automorphisms(&g, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(auts, brute_automorphisms(&g));
        assert!(auts[0].is_identity());

        let empty = WeightedGraph::from_edges(q(), 3, &[]).unwrap();
        let auts = enumerate_graph_automorphisms(&empty, DEFAULT_AUT_CAP).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(auts[0].is_identity());

        let big = WeightedGraph::from_edges(q(), 13, &[]).unwrap();
        assert_eq!(
            enumerate_graph_automorphisms(&big, DEFAULT_AUT_CAP),
            Err(GraphError::TooLarge(13, 12))
        );
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(
            GraphAutomorphism {
                sigma: vec![1, 2, 0]
            }
            .to_string(),
            "(1 2 3)"
        );
        assert_eq!(
            GraphAutomorphism {
                sigma: vec![1, 0, 2, 3]
            }
            .to_string(),
            "(1 2)"
        );
        assert_eq!(GraphAutomorphism::identity(3).to_string(), "id");
        let s = GraphAutomorphism {
            sigma: vec![1, 2, 0],
        };
        assert_eq!(s.compose(&s.inverse()), GraphAutomorphism::identity(3));
        assert_eq!(s.compose(&s).sigma, vec![2, 0, 1]);
    }
}
