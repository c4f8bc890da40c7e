//! The edge complex of a graph, its pointed GF(2) cochain complex
//! `C⁰ → C¹ → C²`, and the groups `Z¹`, `B¹`, `H¹` with explicit bases.
//!
//! Simplices are sorted sets of edge indices; edges are sorted pairs of
//! vertices, indexed in lexicographic order. All coordinate systems list
//! simplices lexicographically, so every matrix is reproducible bit for bit.

mod coefficients;
pub mod gf2;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
pub use coefficients::{
    brute_force_stabilizer, coefficient_group, coefficient_system, CoefficientError, CoefficientGroup, CrossCheckMode,
    DEFAULT_ORDER_BUDGET,
};
use gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("graph is disconnected ({components} components with edges) and strict mode is on")]
    Disconnected { components: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// A simple undirected graph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges may be given in any order and orientation; they are stored
    /// as sorted pairs in lexicographic order.
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut sorted = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= vertices {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v,
                        count: vertices,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            sorted.push((a.min(b), a.max(b)));
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Graph {
            vertices,
            edges: sorted,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph::new(n, &edges).expect("complete graph is simple")
    }

    /// Star `K_{1,k}` with hub `0`.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..=k).map(|b| (0, b)).collect();
        Graph::new(k + 1, &edges).expect("star is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|b| (b - 1, b)).collect();
        Graph::new(n, &edges).expect("path is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Indices of the edges at `v`, ascending.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident(v).len()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut n: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        n.sort_unstable();
        n
    }

    /// Connected components (isolated vertices included), each sorted,
    /// ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices];
        let mut out = Vec::new();
        for start in 0..self.vertices {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Number of components that contain at least one edge.
    pub fn edge_components(&self) -> usize {
        self.components().iter().filter(|c| c.len() > 1).count()
    }

    /// Vertices with at least one incident edge.
    pub fn non_isolated(&self) -> usize {
        (0..self.vertices).filter(|&v| self.degree(v) > 0).count()
    }
}

/// A simplex of the edge complex: sorted edge indices, size 1 to 3.
pub type Simplex = Vec<usize>;

/// The complex `E(Δ)`: all sets of at most three edges, plus the pointed
/// simplices whose edges share a common vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    graph: Graph,
    simplices: Vec<Simplex>,
    pointed: [Vec<Simplex>; 3],
}

/// Enumerates `F` (ordered by size, then lexicographically) and `F_•^r`.
pub fn build_complex(g: &Graph) -> SimplicialComplex {
    let m = g.edges().len();
    let mut simplices: Vec<Simplex> = (0..m).map(|e| vec![e]).collect();
    for a in 0..m {
        for b in a + 1..m {
            simplices.push(vec![a, b]);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                simplices.push(vec![a, b, c]);
            }
        }
    }
    let mut pointed: [Vec<Simplex>; 3] = Default::default();
    for s in &simplices {
        if !common_vertices(g, s).is_empty() {
            pointed[s.len() - 1].push(s.clone());
        }
    }
    SimplicialComplex {
        graph: g.clone(),
        simplices,
        pointed,
    }
}

/// `⋂_{e∈σ} e` as a sorted vertex list.
pub fn common_vertices(g: &Graph, simplex: &[usize]) -> Vec<usize> {
    let Some((&first, rest)) = simplex.split_first() else {
        return Vec::new();
    };
    let (a, b) = g.edges()[first];
    [a, b]
        .into_iter()
        .filter(|&v| rest.iter().all(|&e| g.edges()[e].0 == v || g.edges()[e].1 == v))
        .collect()
}

impl SimplicialComplex {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// All nonempty simplices, by size then lexicographically.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// `F_•^r` for `r = 0, 1, 2`.
    pub fn pointed(&self, r: usize) -> &[Simplex] {
        &self.pointed[r]
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.simplices.iter().position(|s| s == simplex)
    }

    pub fn common_vertices(&self, simplex: &[usize]) -> Vec<usize> {
        common_vertices(&self.graph, simplex)
    }

    /// Proper nonempty faces of `simplex`, in complex order.
    pub fn faces(&self, simplex: &[usize]) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| s.len() < simplex.len() && s.iter().all(|e| simplex.contains(e)))
            .cloned()
            .collect()
    }

    /// Simplices strictly containing `simplex`.
    pub fn cofaces(&self, simplex: &[usize]) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| s.len() > simplex.len() && simplex.iter().all(|e| s.contains(e)))
            .cloned()
            .collect()
    }

    fn pointed_index(&self, r: usize) -> HashMap<&Simplex, usize> {
        self.pointed[r].iter().enumerate().map(|(i, s)| (s, i)).collect()
    }

    /// Coordinate vector in `C¹` with ones at the given pointed pairs.
    pub fn c1_vector<'a>(&self, pairs: impl IntoIterator<Item = &'a Simplex>) -> BitVector {
        let index = self.pointed_index(1);
        BitVector::from_ones(self.pointed[1].len(), pairs.into_iter().map(|p| index[p]))
    }
}

/// Matrix of `d^r : C^r → C^{r+1}`; columns indexed by `F_•^r`, rows by
/// `F_•^{r+1}`, entry 1 iff the column simplex is a face of the row simplex.
pub fn coboundary_matrix(c: &SimplicialComplex, r: usize) -> BitMatrix {
    assert!(r <= 1, "only d0 and d1 exist");
    let cols = c.pointed_index(r);
    let mut m = BitMatrix::zeros(c.pointed[r + 1].len(), c.pointed[r].len());
    for (row, tau) in c.pointed[r + 1].iter().enumerate() {
        for skip in 0..tau.len() {
            let mut face = tau.clone();
            face.remove(skip);
            m.set(row, cols[&face], true);
        }
    }
    m
}

/// `rank_gf2`, exposed under its contract name.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    m.kernel_basis()
}

pub fn image_basis(m: &BitMatrix) -> BitMatrix {
    m.image_basis()
}

/// A non-tree edge `e_j = {o_j, t_j}` with `o_j` the smaller endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NonTreeEdge {
    pub edge: usize,
    pub origin: usize,
    pub terminus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    /// Tree edge indices, ascending.
    pub tree_edges: Vec<usize>,
    /// Non-tree edges `e_1, …, e_n`, lexicographic.
    pub non_tree: Vec<NonTreeEdge>,
}

/// Breadth-first spanning tree from the smallest vertex, neighbours visited
/// in ascending order. Errors on disconnected graphs.
pub fn spanning_tree(g: &Graph) -> Result<SpanningTree, CohomologyError> {
    let comps = g.components();
    if comps.len() > 1 {
        return Err(CohomologyError::Disconnected {
            components: comps.len(),
        });
    }
    Ok(spanning_forest(g))
}

/// Spanning forest: one breadth-first tree per component.
pub fn spanning_forest(g: &Graph) -> SpanningTree {
    let n = g.vertex_count();
    let edge_index: HashMap<(usize, usize), usize> = g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; g.edges().len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[edge_index[&(v.min(w), v.max(w))]] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let tree_edges = (0..in_tree.len()).filter(|&e| in_tree[e]).collect();
    let non_tree = (0..in_tree.len())
        .filter(|&e| !in_tree[e])
        .map(|e| NonTreeEdge {
            edge: e,
            origin: g.edges()[e].0,
            terminus: g.edges()[e].1,
        })
        .collect();
    SpanningTree { tree_edges, non_tree }
}

/// The star subcomplex at a vertex: its edges `E_i` and the blocks
/// `d⁰_i`, `d¹_i` in the local lexicographic coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubcomplex {
    pub vertex: usize,
    pub edges: Vec<usize>,
    pub pairs: Vec<Simplex>,
    pub triples: Vec<Simplex>,
    pub d0: BitMatrix,
    pub d1: BitMatrix,
}

pub fn vertex_subcomplex(g: &Graph, vertex: usize) -> Result<VertexSubcomplex, CohomologyError> {
    if vertex >= g.vertex_count() {
        return Err(CohomologyError::VertexOutOfRange(vertex));
    }
    let edges = g.incident(vertex);
    let star = Graph::star(edges.len());
    let local = build_complex(&star);
    let relabel = |s: &Simplex| s.iter().map(|&k| edges[k]).collect::<Simplex>();
    Ok(VertexSubcomplex {
        vertex,
        pairs: local.pointed(1).iter().map(relabel).collect(),
        triples: local.pointed(2).iter().map(relabel).collect(),
        d0: coboundary_matrix(&local, 0),
        d1: coboundary_matrix(&local, 1),
        edges,
    })
}

/// Checks `C¹ = ⊕ C¹_i`, `C² = ⊕ C²_i` by coordinate partition and
/// `d¹ = Σ_i d¹_i` after embedding each block.
pub fn verify_vertex_decomposition(g: &Graph) -> Check {
    let c = build_complex(g);
    let name = "vertex_decomposition";
    for r in 1..=2 {
        for s in c.pointed(r) {
            let common = c.common_vertices(s);
            if common.len() != 1 {
                return Check::fail(name, format!("simplex {s:?} has common vertices {common:?}"));
            }
        }
    }
    let d1 = coboundary_matrix(&c, 1);
    let rows = c.pointed_index(2);
    let cols = c.pointed_index(1);
    let mut sum = BitMatrix::zeros(d1.nrows(), d1.ncols());
    for v in 0..g.vertex_count() {
        let sub = vertex_subcomplex(g, v).expect("vertex in range");
        for (r, t) in sub.triples.iter().enumerate() {
            for (k, p) in sub.pairs.iter().enumerate() {
                if sub.d1.get(r, k) {
                    let (i, j) = (rows[t], cols[p]);
                    let cur = sum.get(i, j);
                    sum.set(i, j, !cur);
                }
            }
        }
    }
    if sum == d1 {
        Check::pass(name)
    } else {
        Check::fail(name, "sum of vertex blocks differs from d1")
    }
}

/// `Z¹`, `B¹`, `H¹` of the pointed edge complex, with elimination results
/// cross-checked against the closed-form bases.
#[derive(Debug, Clone)]
pub struct CohomologyResult {
    pub dim_c0: usize,
    pub dim_c1: usize,
    pub dim_c2: usize,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    /// Components containing an edge.
    pub components: usize,
    /// Kernel of `d¹` by elimination.
    pub z1_elimination: BitMatrix,
    /// Image of `d⁰` by elimination.
    pub b1_elimination: BitMatrix,
    /// Closed-form basis `{d⁰_i(a_e) : v(i) ≥ 2, e ∈ E_i − {f_i}}`.
    pub z_basis: BitMatrix,
    /// Closed-form basis `{d⁰(a_e) : e ≠ e_0}` (one `e_0` per component).
    pub b_basis: BitMatrix,
    /// Cocycles `d⁰_{o_j}(a_{e_j})` representing a basis of `H¹`.
    pub h_representatives: BitMatrix,
    pub tree: SpanningTree,
    pub checks: Vec<Check>,
}

impl CohomologyResult {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// `d⁰_i(a_e)`: the pairs `{e,f}` with `f` another edge at `i`.
pub fn local_coboundary(c: &SimplicialComplex, vertex: usize, edge: usize) -> BitVector {
    let pairs: Vec<Simplex> = c
        .graph()
        .incident(vertex)
        .into_iter()
        .filter(|&f| f != edge)
        .map(|f| vec![edge.min(f), edge.max(f)])
        .collect();
    c.c1_vector(pairs.iter())
}

/// `d⁰(a_e)` as a `C¹` vector.
pub fn edge_coboundary(c: &SimplicialComplex, edge: usize) -> BitVector {
    let (a, b) = c.graph().edges()[edge];
    let mut v = local_coboundary(c, a, edge);
    v.xor_assign(&local_coboundary(c, b, edge));
    v
}

pub fn cohomology(g: &Graph, strict: bool) -> Result<CohomologyResult, CohomologyError> {
    let components = g.edge_components();
    if strict && !g.is_connected() {
        return Err(CohomologyError::Disconnected {
            components: g.components().len(),
        });
    }
    let c = build_complex(g);
    let d0 = coboundary_matrix(&c, 0);
    let d1 = coboundary_matrix(&c, 1);
    let z1 = d1.kernel_basis();
    let b1 = d0.image_basis();
    let (dim_z1, dim_b1) = (z1.nrows(), b1.nrows());
    let dim_c1 = c.pointed(1).len();
    let m = g.edges().len();
    let verts = g.non_isolated();
    let mut checks = Vec::new();

    checks.push(Check::from_witness(
        "d1_after_d0_is_zero",
        (!d1.mul(&d0).is_zero()).then(|| "d1·d0 has a nonzero entry".to_string()),
    ));

    let mut z_basis = BitMatrix::zeros(0, dim_c1);
    for v in 0..g.vertex_count() {
        let at = g.incident(v);
        if at.len() >= 2 {
            for &e in &at[1..] {
                z_basis.push_row(local_coboundary(&c, v, e));
            }
        }
    }

    let tree = spanning_forest(g);
    let mut b_basis = BitMatrix::zeros(0, dim_c1);
    for comp in g.components().iter().filter(|c| c.len() > 1) {
        let mut comp_edges: Vec<usize> = comp.iter().flat_map(|&v| g.incident(v)).collect();
        comp_edges.sort_unstable();
        comp_edges.dedup();
        for &e in &comp_edges[1..] {
            b_basis.push_row(edge_coboundary(&c, e));
        }
    }
    let mut h_representatives = BitMatrix::zeros(0, dim_c1);
    for nt in &tree.non_tree {
        h_representatives.push_row(local_coboundary(&c, nt.origin, nt.edge));
    }

    // every non-isolated vertex has an edge, so 2|E| ≥ |I'|
    checks.push(Check::expect_eq("dim_z1_formula", dim_z1, 2 * m - verts));
    checks.push(Check::expect_eq("dim_b1_formula", dim_b1, m - components));
    checks.push(Check::expect_eq(
        "dim_h1_formula",
        dim_z1 - dim_b1,
        m + components - verts,
    ));
    checks.push(Check::expect_eq("z_basis_rank", z_basis.rank(), dim_z1));
    checks.push(Check::from_witness(
        "z_basis_in_kernel",
        (!d1.mul(&z_basis.transpose()).is_zero()).then(|| "some closed-form vector is not a cocycle".to_string()),
    ));
    checks.push(Check::expect_eq("b_basis_rank", b_basis.rank(), dim_b1));
    checks.push(Check::expect_eq(
        "b_basis_in_image",
        b1.row_space_contains(&b_basis),
        true,
    ));
    checks.push(Check::from_witness(
        "h_representatives_are_cocycles",
        (!d1.mul(&h_representatives.transpose()).is_zero()).then(|| "representative not in kernel".to_string()),
    ));
    checks.push(Check::expect_eq(
        "h_representatives_independent_mod_b1",
        b_basis.vstack(&h_representatives).rank(),
        dim_b1 + tree.non_tree.len(),
    ));
    checks.push(Check::expect_eq(
        "h1_equals_non_tree_edges",
        dim_z1 - dim_b1,
        tree.non_tree.len(),
    ));
    checks.push(verify_vertex_decomposition(g));

    Ok(CohomologyResult {
        dim_c0: c.pointed(0).len(),
        dim_c1,
        dim_c2: c.pointed(2).len(),
        dim_z1,
        dim_b1,
        dim_h1: dim_z1 - dim_b1,
        components,
        z1_elimination: z1,
        b1_elimination: b1,
        z_basis,
        b_basis,
        h_representatives,
        tree,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::new(2, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn complex_examples() {
        let single = build_complex(&Graph::path(2));
        assert_eq!(single.simplices(), &[vec![0]]);
        assert_eq!(single.pointed(0), &[vec![0]]);
        assert!(single.pointed(1).is_empty());

        let star = build_complex(&Graph::star(3));
        assert_eq!(star.pointed(1).len(), 3);
        assert_eq!(star.pointed(2).len(), 1);

        let tri = build_complex(&triangle());
        assert_eq!(tri.pointed(1).len(), 3);
        assert_eq!(tri.pointed(2).len(), 0);
        assert_eq!(tri.simplices().len(), 7);
    }

    #[test]
    fn coboundary_examples() {
        let path = build_complex(&Graph::path(3));
        assert_eq!(coboundary_matrix(&path, 0).to_dense(), vec![vec![1, 1]]);

        let tri = build_complex(&triangle());
        let d0 = coboundary_matrix(&tri, 0);
        assert_eq!((d0.nrows(), d0.ncols()), (3, 3));
        for c in 0..3 {
            assert_eq!(d0.column(c).count_ones(), 2);
        }
        let d1 = coboundary_matrix(&tri, 1);
        assert_eq!((d1.nrows(), d1.ncols()), (0, 3));
        assert_eq!(rank_gf2(&d0), 2);
        assert_eq!(kernel_basis(&d0).to_dense(), vec![vec![1, 1, 1]]);

        let single = build_complex(&Graph::path(2));
        let d0 = coboundary_matrix(&single, 0);
        assert_eq!((d0.nrows(), d0.ncols()), (0, 1));
    }

    #[test]
    fn cohomology_examples() {
        let tree = cohomology(&Graph::path(3), true).unwrap();
        assert_eq!(tree.dim_h1, 0);
        assert!(tree.all_passed(), "{:?}", tree.checks);

        let tri = cohomology(&triangle(), true).unwrap();
        assert_eq!((tri.dim_z1, tri.dim_b1, tri.dim_h1), (3, 2, 1));
        assert!(tri.all_passed(), "{:?}", tri.checks);

        let k4 = cohomology(&Graph::complete(4), true).unwrap();
        assert_eq!((k4.dim_z1, k4.dim_b1, k4.dim_h1), (8, 5, 3));
        assert!(k4.all_passed(), "{:?}", k4.checks);
    }

    #[test]
    fn disconnected_graphs() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert!(matches!(
            cohomology(&g, true),
            Err(CohomologyError::Disconnected { .. })
        ));
        let r = cohomology(&g, false).unwrap();
        assert_eq!(r.components, 2);
        assert_eq!((r.dim_z1, r.dim_b1, r.dim_h1), (3, 2, 1));
        assert!(r.all_passed(), "{:?}", r.checks);
        assert!(spanning_tree(&g).is_err());
    }

    #[test]
    fn vertex_subcomplex_examples() {
        let hub = vertex_subcomplex(&Graph::star(3), 0).unwrap();
        assert_eq!((hub.d0.nrows(), hub.d0.ncols()), (3, 3));
        assert_eq!((hub.d1.nrows(), hub.d1.ncols()), (1, 3));
        let leaf = vertex_subcomplex(&Graph::star(3), 1).unwrap();
        assert_eq!((leaf.d0.nrows(), leaf.d0.ncols()), (0, 1));
        for v in 0..3 {
            let s = vertex_subcomplex(&triangle(), v).unwrap();
            assert_eq!((s.d0.nrows(), s.d0.ncols()), (1, 2));
        }
        assert!(verify_vertex_decomposition(&Graph::complete(5)).passed);
    }

    #[test]
    fn spanning_tree_examples() {
        assert!(spanning_tree(&Graph::path(4)).unwrap().non_tree.is_empty());
        let t = spanning_tree(&triangle()).unwrap();
        assert_eq!(t.tree_edges, vec![0, 1]);
        assert_eq!(
            t.non_tree,
            vec![NonTreeEdge {
                edge: 2,
                origin: 1,
                terminus: 2
            }]
        );
        assert_eq!(spanning_tree(&Graph::complete(4)).unwrap().non_tree.len(), 3);
    }

    #[test]
    fn stars_have_z1_equal_b1() {
        for k in 2..=6 {
            let r = cohomology(&Graph::star(k), true).unwrap();
            assert_eq!(r.dim_z1, r.dim_b1);
            assert_eq!(r.dim_z1, k - 1);
        }
    }
}
