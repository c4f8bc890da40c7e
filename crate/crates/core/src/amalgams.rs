//! Simplicial amalgams of the subloops `L_J = M(W_J, 2)` over the edge
//! complex, their twisted variants indexed by `δ ⊆ {1..n}` or by cocycles,
//! completions, and an exhaustive isomorphism test.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
use crate::cohomology::gf2::BitVector;
use crate::cohomology::{
    build_complex, coboundary_matrix, edge_coboundary, local_coboundary, spanning_forest, Simplex, SimplicialComplex,
    SpanningTree,
};
use crate::coxeter::{enumerate_group, recognize_spherical, underlying_graph, CoxeterDiagram, EnumerationError};
use crate::groups;
use crate::loop_core::{chein_loop, LoopTable};
use crate::morphisms::{
    automorphism_group, extend_from_generators, is_homomorphism, AutGroup, Morphism, MorphismError,
};
use crate::table::Magma;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("m_{{{i},{j}}} = inf; the amalgam needs every edge label finite")]
    InfiniteLabel { i: usize, j: usize },
    #[error("the underlying graph has no edges")]
    NoEdges,
    #[error("delta contains {j}, but there are only {n} non-tree edges")]
    DeltaOutOfRange { j: usize, n: usize },
    #[error("cocycle has {len} coordinates, C1 has dimension {dim}")]
    WrongLength { len: usize, dim: usize },
    #[error("vector is not a cocycle: d1 z is nonzero on pointed triple {0:?}")]
    NotACocycle(Simplex),
    #[error("amalgams are over different complexes or loops")]
    Incompatible,
    #[error("isomorphism search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// The loop `G_σ = L_J` attached to a simplex, `J = ⋂_{e∈σ} e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub simplex: Simplex,
    /// `J`, ascending (0-based diagram nodes).
    pub vertices: Vec<usize>,
    pub table: LoopTable,
    /// Elements `s_j` for `j ∈ J` in order, then `s_∞ = u`.
    pub generators: Vec<usize>,
}

impl Member {
    pub fn u(&self) -> usize {
        *self.generators.last().expect("u is always a generator")
    }

    /// Element `s_j`, for `j ∈ J`.
    pub fn s(&self, j: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == j).map(|p| self.generators[p])
    }
}

/// Rewrites local generator names `s1`, `s2` to the global `s_{J[k]+1}`.
fn relabel(label: &str, vertices: &[usize]) -> String {
    let mut out = String::new();
    let mut chars = label.chars().peekable();
    while let Some(c) = chars.next() {
        if c == 's' {
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let k: usize = digits.parse().expect("generator index");
            out.push_str(&format!("s{}", vertices[k - 1] + 1));
        } else {
            out.push(c);
        }
    }
    out
}

/// `L_J` with its generators `s_j (j ∈ J), u`.
pub fn subloop(d: &CoxeterDiagram, vertices: &[usize]) -> Result<(LoopTable, Vec<usize>), AmalgamError> {
    let w = if vertices.is_empty() {
        groups::cyclic(1)
    } else {
        let sub = d.restrict(vertices);
        let g = enumerate_group(&sub, crate::coxeter::DEFAULT_CAP)?;
        let labels = (0..g.order()).map(|x| relabel(&g.label(x), vertices)).collect();
        g.with_labels(labels)
    };
    let mut gens = w.generators().to_vec();
    gens.push(w.order());
    Ok((chein_loop(&w), gens))
}

/// `γ_S` on a member: `s_j ↦ s_j u` for `j ∈ S`, other generators fixed.
pub fn gamma(member: &Member, twisted: &[usize]) -> Morphism {
    let u = member.u();
    let images: Vec<usize> = member
        .vertices
        .iter()
        .zip(&member.generators)
        .map(|(j, &s)| if twisted.contains(j) { member.table.mul(s, u) } else { s })
        .chain([u])
        .collect();
    extend_from_generators(&member.table, &member.table, &member.generators, &images)
        .expect("gamma extends to an automorphism")
}

/// Homomorphism `src → dst` on generators: `s_j ↦ s_j` (or `s_j u` when
/// `j = twist`), `u ↦ u`.
fn embedding(src: &Member, dst: &Member, twist: Option<usize>) -> Morphism {
    let u = dst.u();
    let images: Vec<usize> = src
        .vertices
        .iter()
        .map(|&j| {
            let s = dst.s(j).expect("J of a coface is contained in J of the face");
            if twist == Some(j) {
                dst.table.mul(s, u)
            } else {
                s
            }
        })
        .chain([u])
        .collect();
    extend_from_generators(&src.table, &dst.table, &src.generators, &images).expect("subloop embedding")
}

/// A face map `ψ_τ^ρ : G_τ → G_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceMap {
    pub face: usize,
    pub coface: usize,
    pub map: Morphism,
}

/// `{G_σ, ψ_τ^ρ}` over the nonempty simplices of `E(Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    complex: SimplicialComplex,
    members: Vec<Member>,
    /// Keyed by `(face, coface)` simplex indices, proper faces only.
    maps: BTreeMap<(usize, usize), Morphism>,
}

impl Amalgam {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, simplex: usize) -> &Member {
        &self.members[simplex]
    }

    pub fn map(&self, face: usize, coface: usize) -> Option<&Morphism> {
        self.maps.get(&(face, coface))
    }

    pub fn face_maps(&self) -> impl Iterator<Item = FaceMap> + '_ {
        self.maps.iter().map(|(&(face, coface), map)| FaceMap {
            face,
            coface,
            map: map.clone(),
        })
    }

    /// Replaces one connecting map, for fault injection.
    pub fn with_map(&self, face: usize, coface: usize, map: Morphism) -> Amalgam {
        let mut out = self.clone();
        out.maps.insert((face, coface), map);
        out
    }

    pub fn summary(&self) -> AmalgamSummary {
        AmalgamSummary {
            simplices: self
                .members
                .iter()
                .map(|m| SimplexSummary {
                    simplex: m.simplex.clone(),
                    common_vertices: m.vertices.iter().map(|v| v + 1).collect(),
                    order: m.table.order(),
                })
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|(&(face, coface), f)| MapSummary {
                    face,
                    coface,
                    image: f.image().to_vec(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexSummary {
    pub simplex: Simplex,
    /// 1-based diagram nodes.
    pub common_vertices: Vec<usize>,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapSummary {
    pub face: usize,
    pub coface: usize,
    pub image: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamSummary {
    pub simplices: Vec<SimplexSummary>,
    pub maps: Vec<MapSummary>,
}

fn face_pairs(c: &SimplicialComplex) -> Vec<(usize, usize)> {
    let index: HashMap<&Simplex, usize> = c.simplices().iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = Vec::new();
    for (t, tau) in c.simplices().iter().enumerate() {
        for rho in c.faces(tau) {
            out.push((index[&rho], t));
        }
    }
    out.sort();
    out
}

fn members(d: &CoxeterDiagram) -> Result<(SimplicialComplex, Vec<Member>), AmalgamError> {
    let graph = underlying_graph(d);
    if graph.edges().is_empty() {
        return Err(AmalgamError::NoEdges);
    }
    if let Some(&(i, j)) = graph.edges().iter().find(|&&(i, j)| d.label(i, j).finite().is_none()) {
        return Err(AmalgamError::InfiniteLabel { i: i + 1, j: j + 1 });
    }
    let complex = build_complex(&graph);
    let mut cache: HashMap<Vec<usize>, (LoopTable, Vec<usize>)> = HashMap::new();
    let mut out = Vec::new();
    for s in complex.simplices() {
        let vertices = complex.common_vertices(s);
        if !cache.contains_key(&vertices) {
            cache.insert(vertices.clone(), subloop(d, &vertices)?);
        }
        let (table, generators) = cache[&vertices].clone();
        out.push(Member {
            simplex: s.clone(),
            vertices,
            table,
            generators,
        });
    }
    Ok((complex, out))
}

/// Builds an amalgam whose map `G_τ → G_{e}` is twisted at vertex `i` when
/// `twist(e, i)` holds; every other map is the natural inclusion.
fn assemble(d: &CoxeterDiagram, twist: impl Fn(usize, usize) -> bool) -> Result<Amalgam, AmalgamError> {
    let (complex, members) = members(d)?;
    let mut maps = BTreeMap::new();
    for (rho, tau) in face_pairs(&complex) {
        let (face, coface) = (&members[rho], &members[tau]);
        let t = match (face.simplex.as_slice(), coface.vertices.as_slice()) {
            (&[e], &[i]) if twist(e, i) => Some(i),
            _ => None,
        };
        maps.insert((rho, tau), embedding(coface, face, t));
    }
    Ok(Amalgam { complex, members, maps })
}

/// The amalgam `𝒢` of the subloops `L_J` of `M(W,2)` with inclusions.
pub fn standard_amalgam(d: &CoxeterDiagram) -> Result<Amalgam, AmalgamError> {
    assemble(d, |_, _| false)
}

/// Per-pair verification outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamReport {
    pub simplices: usize,
    pub face_pairs: usize,
    pub checks: Vec<Check>,
}

impl AmalgamReport {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

fn pair_name(a: &Amalgam, face: usize, coface: usize) -> String {
    format!("{:?} <= {:?}", a.members[face].simplex, a.members[coface].simplex)
}

/// Every map an injective homomorphism; `ψ_τ^ρ = ψ_σ^ρ ∘ ψ_τ^σ`.
pub fn verify_amalgam(a: &Amalgam) -> AmalgamReport {
    let mut bad_hom = None;
    for (&(face, coface), f) in &a.maps {
        let ok = f.domain_order() == a.members[coface].table.order()
            && f.codomain_order() == a.members[face].table.order()
            && f.is_injective()
            && is_homomorphism(f, &a.members[coface].table, &a.members[face].table);
        if !ok {
            bad_hom = Some(pair_name(a, face, coface));
            break;
        }
    }
    let mut bad_compose = None;
    'outer: for (&(rho, sigma), outer) in &a.maps {
        for (&(s2, tau), inner) in a.maps.range((sigma, 0)..(sigma + 1, 0)) {
            debug_assert_eq!(s2, sigma);
            let direct = &a.maps[&(rho, tau)];
            if inner.codomain_order() != outer.domain_order() || &outer.compose(inner) != direct {
                bad_compose = Some(format!(
                    "{:?} <= {:?} <= {:?}",
                    a.members[rho].simplex, a.members[sigma].simplex, a.members[tau].simplex
                ));
                break 'outer;
            }
        }
    }
    AmalgamReport {
        simplices: a.members.len(),
        face_pairs: a.maps.len(),
        checks: vec![
            Check::from_witness("maps_are_injective_homomorphisms", bad_hom),
            Check::from_witness("maps_compose", bad_compose),
        ],
    }
}

/// Same loops as `reference` and every connecting map has the same image.
pub fn verify_type(a: &Amalgam, reference: &Amalgam) -> Check {
    if a.complex != reference.complex || a.members != reference.members {
        return Check::fail("same_type", "different complex or loops");
    }
    let bad = a
        .maps
        .iter()
        .find(|(k, f)| f.image_set() != reference.maps[k].image_set())
        .map(|(&(face, coface), _)| pair_name(a, face, coface));
    Check::from_witness("same_type", bad)
}

/// A loop with homomorphisms `φ_σ : G_σ → target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub target: LoopTable,
    /// One map per simplex, in complex order.
    pub maps: Vec<Morphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub target_order: usize,
    pub non_collapsing: bool,
    pub checks: Vec<Check>,
}

impl CompletionReport {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Homomorphism per map and `φ_σ ∘ ψ_τ^σ = φ_τ` for every face pair.
pub fn verify_completion(a: &Amalgam, c: &Completion) -> CompletionReport {
    let mut checks = vec![Check::expect_eq("one_map_per_simplex", c.maps.len(), a.members.len())];
    if c.maps.len() == a.members.len() {
        let bad = c.maps.iter().enumerate().find(|(s, f)| {
            f.domain_order() != a.members[*s].table.order()
                || f.codomain_order() != c.target.order()
                || !is_homomorphism(f, &a.members[*s].table, &c.target)
        });
        checks.push(Check::from_witness(
            "maps_are_homomorphisms",
            bad.map(|(s, _)| format!("simplex {:?}", a.members[s].simplex)),
        ));
        let bad = a
            .maps
            .iter()
            .find(|(&(face, coface), psi)| {
                c.maps[face].domain_order() != psi.codomain_order() || c.maps[face].compose(psi) != c.maps[coface]
            })
            .map(|(&(face, coface), _)| pair_name(a, face, coface));
        checks.push(Check::from_witness("maps_commute", bad));
    }
    CompletionReport {
        target_order: c.target.order(),
        non_collapsing: c.maps.iter().any(|f| !f.is_trivial()),
        checks,
    }
}

/// `M(W,2)` with the identity embeddings `L_J ⊆ L`, if `W` is finite and
/// within `cap`.
pub fn standard_completion(a: &Amalgam, d: &CoxeterDiagram, cap: usize) -> Result<Option<Completion>, AmalgamError> {
    if !recognize_spherical(d).is_spherical() {
        return Ok(None);
    }
    let w = enumerate_group(d, cap)?;
    let target = chein_loop(&w);
    let u = w.order();
    let maps = a
        .members
        .iter()
        .map(|m| {
            let images: Vec<usize> = m.vertices.iter().map(|&j| w.generators()[j]).chain([u]).collect();
            extend_from_generators(&m.table, &target, &m.generators, &images).expect("subloop of M(W,2)")
        })
        .collect();
    Ok(Some(Completion { target, maps }))
}

/// `δ ⊆ {1..n}` relative to a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistSelection {
    pub tree: SpanningTree,
    /// 1-based non-tree edge indices, ascending.
    pub delta: Vec<usize>,
}

impl TwistSelection {
    pub fn new(tree: SpanningTree, mut delta: Vec<usize>) -> Result<Self, AmalgamError> {
        delta.sort_unstable();
        delta.dedup();
        let n = tree.non_tree.len();
        if let Some(&j) = delta.iter().find(|&&j| j == 0 || j > n) {
            return Err(AmalgamError::DeltaOutOfRange { j, n });
        }
        Ok(TwistSelection { tree, delta })
    }

    /// All `2ⁿ` selections; bit `j−1` of the index says `j ∈ δ`.
    pub fn all(tree: &SpanningTree) -> Vec<TwistSelection> {
        let n = tree.non_tree.len();
        (0u64..1 << n)
            .map(|mask| TwistSelection {
                tree: tree.clone(),
                delta: (1..=n).filter(|j| mask >> (j - 1) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let inner: Vec<String> = self.delta.iter().map(|j| j.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Spanning forest of the underlying graph of `d`.
pub fn diagram_tree(d: &CoxeterDiagram) -> SpanningTree {
    spanning_forest(&underlying_graph(d))
}

/// `𝓛^δ`: the map `L_{o_j} → L_{e_j}` is `s_{o_j} ↦ s_{o_j}s_∞`, `s_∞ ↦ s_∞`
/// for `j ∈ δ`; all other maps are inclusions.
pub fn twisted_amalgam(d: &CoxeterDiagram, tw: &TwistSelection) -> Result<Amalgam, AmalgamError> {
    let n = tw.tree.non_tree.len();
    if let Some(&j) = tw.delta.iter().find(|&&j| j == 0 || j > n) {
        return Err(AmalgamError::DeltaOutOfRange { j, n });
    }
    let twisted: Vec<(usize, usize)> = tw
        .delta
        .iter()
        .map(|&j| (tw.tree.non_tree[j - 1].edge, tw.tree.non_tree[j - 1].origin))
        .collect();
    assemble(d, |e, i| twisted.contains(&(e, i)))
}

/// `Σ_{j∈δ} d⁰_{o_j}(a_{e_j})` in `C¹` coordinates.
pub fn selection_cocycle(c: &SimplicialComplex, tw: &TwistSelection) -> BitVector {
    let mut z = BitVector::zeros(c.pointed(1).len());
    for &j in &tw.delta {
        let e = tw.tree.non_tree[j - 1];
        z.xor_assign(&local_coboundary(c, e.origin, e.edge));
    }
    z
}

/// The normalized amalgam `𝒢^[z]`. Edges are ordered with the non-tree
/// edges first; for `ρ ≤ τ` with `e = max ρ ≺ f = max τ` the map is
/// `(ψ_ρ^{e})⁻¹ ∘ ψ_{e,f}^{e} ∘ z_{e,f}⁻¹ ∘ ψ_τ^{e,f}`, where `z_{e,f}`
/// acts on `G_{e,f}` as `γ` at the common vertex of `e` and `f`.
pub fn cocycle_to_amalgam(d: &CoxeterDiagram, z: &BitVector) -> Result<Amalgam, AmalgamError> {
    let standard = standard_amalgam(d)?;
    let c = &standard.complex;
    let dim = c.pointed(1).len();
    if z.len() != dim {
        return Err(AmalgamError::WrongLength { len: z.len(), dim });
    }
    let d1 = coboundary_matrix(c, 1);
    let dz = d1.apply(z);
    if let Some(&t) = dz.ones().first() {
        return Err(AmalgamError::NotACocycle(c.pointed(2)[t].clone()));
    }
    let tree = diagram_tree(d);
    let mut order: Vec<usize> = tree.non_tree.iter().map(|e| e.edge).collect();
    order.extend(&tree.tree_edges);
    let mut rank = vec![0usize; order.len()];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    let max_edge = |s: &Simplex| *s.iter().max_by_key(|&&e| rank[e]).expect("nonempty simplex");
    let index = |s: &[usize]| c.index_of(s).expect("simplex of the complex");
    let pointed_pairs: HashMap<&Simplex, usize> = c.pointed(1).iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut maps = BTreeMap::new();
    for (&(rho, tau), psi) in &standard.maps {
        let e = max_edge(&standard.members[rho].simplex);
        let f = max_edge(&standard.members[tau].simplex);
        if e == f {
            maps.insert((rho, tau), psi.clone());
            continue;
        }
        let ef_simplex = vec![e.min(f), e.max(f)];
        let ef = index(&ef_simplex);
        let single = index(&[e]);
        let to_ef = if ef == tau {
            Morphism::identity(standard.members[tau].table.order())
        } else {
            standard.maps[&(ef, tau)].clone()
        };
        let zeta = pointed_pairs.get(&ef_simplex).is_some_and(|&p| z.get(p));
        let twist = if zeta {
            gamma(&standard.members[ef], &standard.members[ef].vertices)
        } else {
            Morphism::identity(standard.members[ef].table.order())
        };
        let into_e = standard.maps[&(single, ef)]
            .compose(&twist.inverse().expect("automorphism"))
            .compose(&to_ef);
        let map = if rho == single {
            into_e
        } else {
            let back = &standard.maps[&(single, rho)];
            let image = into_e
                .image()
                .iter()
                .map(|&y| back.preimage(y).expect("image lies in G_rho"))
                .collect();
            Morphism::new(standard.members[rho].table.order(), image)?
        };
        maps.insert((rho, tau), map);
    }
    Ok(Amalgam {
        complex: standard.complex,
        members: standard.members,
        maps,
    })
}

/// Outcome of an isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismResult {
    pub isomorphic: bool,
    /// Candidate automorphisms tried.
    pub nodes: u64,
    /// `θ_σ` for every simplex, in complex order, when isomorphic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Morphism>>,
}

/// Edges in breadth-first order of the line graph, smallest first.
fn line_graph_order(c: &SimplicialComplex) -> Vec<usize> {
    let g = c.graph();
    let m = g.edges().len();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            out.push(e);
            let (a, b) = g.edges()[e];
            let mut next: Vec<usize> = g.incident(a).into_iter().chain(g.incident(b)).collect();
            next.sort_unstable();
            for f in next {
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
    }
    out
}

struct IsoSearch<'a> {
    a: &'a Amalgam,
    b: &'a Amalgam,
    order: Vec<usize>,
    /// Simplex index of `{e}`.
    single: Vec<usize>,
    /// Simplices containing each edge, other than `{e}`.
    cofaces: Vec<Vec<usize>>,
    auts: Vec<AutGroup>,
    theta: Vec<Option<Morphism>>,
    nodes: u64,
    budget: u64,
}

impl IsoSearch<'_> {
    /// `θ_τ = (φ^b)⁻¹ ∘ θ_e ∘ φ^a` on `G_τ`, if `θ_e` maps the image of
    /// `G_τ` under `a` into that under `b`.
    fn derive(&self, e: usize, tau: usize, theta_e: &Morphism) -> Option<Morphism> {
        let s = self.single[e];
        let fa = &self.a.maps[&(s, tau)];
        let fb = &self.b.maps[&(s, tau)];
        let image: Option<Vec<usize>> = fa.image().iter().map(|&x| fb.preimage(theta_e.apply(x))).collect();
        Morphism::new(fa.domain_order(), image?).ok()
    }

    fn consistent(&self, e: usize, theta_e: &Morphism) -> bool {
        let edges_of = |t: usize| &self.a.members[t].simplex;
        for &tau in &self.cofaces[e] {
            let Some(mine) = self.derive(e, tau, theta_e) else {
                return false;
            };
            for &f in edges_of(tau) {
                if f == e {
                    continue;
                }
                if let Some(theta_f) = &self.theta[f] {
                    if self.derive(f, tau, theta_f).as_ref() != Some(&mine) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn descend(&mut self, k: usize) -> Result<bool, AmalgamError> {
        if k == self.order.len() {
            return Ok(true);
        }
        let e = self.order[k];
        let candidates = self.auts[e].elements().to_vec();
        for cand in candidates {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(AmalgamError::BudgetExceeded { budget: self.budget });
            }
            if self.consistent(e, &cand) {
                self.theta[e] = Some(cand);
                if self.descend(k + 1)? {
                    return Ok(true);
                }
                self.theta[e] = None;
            }
        }
        Ok(false)
    }
}

/// Searches for `{θ_σ ∈ Aut(G_σ)}` with `θ_ρ ∘ φ^a = φ^b ∘ θ_τ` for every
/// face pair `ρ ≤ τ`. Each `θ_τ` is determined by `θ_e` for any `e ∈ τ`, so
/// the search runs over the `θ_e` and checks agreement on shared cofaces.
pub fn amalgams_isomorphic(a: &Amalgam, b: &Amalgam, budget: u64) -> Result<IsomorphismResult, AmalgamError> {
    if a.complex != b.complex || a.members != b.members {
        return Err(AmalgamError::Incompatible);
    }
    let c = &a.complex;
    let m = c.graph().edges().len();
    let single: Vec<usize> = (0..m).map(|e| c.index_of(&[e]).expect("vertex simplex")).collect();
    let cofaces: Vec<Vec<usize>> = (0..m)
        .map(|e| {
            (0..c.simplices().len())
                .filter(|&t| c.simplices()[t].len() > 1 && c.simplices()[t].contains(&e))
                .collect()
        })
        .collect();
    let mut cache: HashMap<Vec<usize>, AutGroup> = HashMap::new();
    let mut auts = Vec::with_capacity(m);
    for &s in &single {
        let member = &a.members[s];
        if !cache.contains_key(&member.vertices) {
            cache.insert(member.vertices.clone(), automorphism_group(&member.table, budget)?);
        }
        auts.push(cache[&member.vertices].clone());
    }
    let mut search = IsoSearch {
        a,
        b,
        order: line_graph_order(c),
        single,
        cofaces,
        auts,
        theta: vec![None; m],
        nodes: 0,
        budget,
    };
    if !search.descend(0)? {
        return Ok(IsomorphismResult {
            isomorphic: false,
            nodes: search.nodes,
            witness: None,
        });
    }
    let witness: Vec<Morphism> = c
        .simplices()
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let e = s[0];
            let theta_e = search.theta[e].as_ref().expect("assigned");
            if s.len() == 1 {
                theta_e.clone()
            } else {
                search.derive(e, t, theta_e).expect("consistent family")
            }
        })
        .collect();
    debug_assert!(a
        .maps
        .iter()
        .all(|(&(rho, tau), fa)| witness[rho].compose(fa) == b.maps[&(rho, tau)].compose(&witness[tau])));
    Ok(IsomorphismResult {
        isomorphic: true,
        nodes: search.nodes,
        witness: Some(witness),
    })
}

/// Checks a claimed `θ`-family.
pub fn verify_isomorphism(a: &Amalgam, b: &Amalgam, theta: &[Morphism]) -> Check {
    if theta.len() != a.members.len() {
        return Check::fail("theta_family", "wrong number of maps");
    }
    if let Some(s) = (0..theta.len()).find(|&s| {
        theta[s].domain_order() != a.members[s].table.order()
            || !crate::morphisms::is_automorphism(&theta[s], &a.members[s].table)
    }) {
        return Check::fail(
            "theta_family",
            format!("theta on {:?} is not an automorphism", a.members[s].simplex),
        );
    }
    let bad = a
        .maps
        .iter()
        .find(|(&(rho, tau), fa)| theta[rho].compose(fa) != b.maps[&(rho, tau)].compose(&theta[tau]))
        .map(|(&(rho, tau), _)| pair_name(a, rho, tau));
    Check::from_witness("theta_family", bad)
}

/// One isomorphism class of twisted amalgams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamClass {
    /// Smallest `δ` in the class, as 1-based indices.
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub isomorphic: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tree: SpanningTree,
    pub non_tree_edges: usize,
    pub selections: usize,
    pub classes: Vec<AmalgamClass>,
    pub comparisons: Vec<Comparison>,
    /// Order of `M(W,2)` when the standard completion was checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion_order: Option<usize>,
    pub checks: Vec<Check>,
}

impl Classification {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Builds the `2ⁿ` twisted amalgams, sorts them into isomorphism classes
/// by exhaustive search, and cross-checks them against the cocycle
/// construction, coboundaries and (for finite `W` within `cap`) the
/// completion `M(W,2)`.
pub fn classify_amalgams(d: &CoxeterDiagram, budget: u64, cap: usize) -> Result<Classification, AmalgamError> {
    let standard = standard_amalgam(d)?;
    let c = standard.complex.clone();
    let tree = diagram_tree(d);
    let selections = TwistSelection::all(&tree);
    let mut checks = Vec::new();
    let mut amalgams = Vec::with_capacity(selections.len());
    let mut bad_valid = None;
    let mut bad_type = None;
    for tw in &selections {
        let a = twisted_amalgam(d, tw)?;
        if !verify_amalgam(&a).all_passed() {
            bad_valid.get_or_insert_with(|| tw.describe());
        }
        if !verify_type(&a, &standard).passed {
            bad_type.get_or_insert_with(|| tw.describe());
        }
        amalgams.push(a);
    }
    checks.push(Check::from_witness("twisted_amalgams_valid", bad_valid));
    checks.push(Check::from_witness("twisted_amalgams_of_type_g", bad_type));
    checks.push(Check::from_witness(
        "empty_delta_is_standard",
        (amalgams[0] != standard).then(|| "twisted amalgam for {} differs from the standard one".to_string()),
    ));

    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut comparisons = Vec::new();
    for (k, a) in amalgams.iter().enumerate() {
        let mut joined = false;
        for (rep, members) in classes.iter_mut() {
            let r = amalgams_isomorphic(&amalgams[*rep], a, budget)?;
            comparisons.push(Comparison {
                a: selections[*rep].delta.clone(),
                b: selections[k].delta.clone(),
                isomorphic: r.isomorphic,
                nodes: r.nodes,
            });
            if r.isomorphic {
                members.push(k);
                joined = true;
                break;
            }
        }
        if !joined {
            classes.push((k, vec![k]));
        }
    }
    checks.push(Check::expect_eq("class_count", classes.len(), selections.len()));

    let mut bad_cocycle = None;
    let mut bad_cohomologous = None;
    let first_edge = edge_coboundary(&c, 0);
    for (k, tw) in selections.iter().enumerate() {
        let z = selection_cocycle(&c, tw);
        let from_cocycle = cocycle_to_amalgam(d, &z)?;
        if !verify_amalgam(&from_cocycle).all_passed()
            || !amalgams_isomorphic(&amalgams[k], &from_cocycle, budget)?.isomorphic
        {
            bad_cocycle.get_or_insert_with(|| tw.describe());
        }
        let mut shifted = z.clone();
        shifted.xor_assign(&first_edge);
        let from_shifted = cocycle_to_amalgam(d, &shifted)?;
        if !amalgams_isomorphic(&amalgams[k], &from_shifted, budget)?.isomorphic {
            bad_cohomologous.get_or_insert_with(|| tw.describe());
        }
    }
    checks.push(Check::from_witness("cocycle_amalgam_matches_twist", bad_cocycle));
    checks.push(Check::from_witness(
        "cohomologous_cocycles_isomorphic",
        bad_cohomologous,
    ));

    let mut bad_coboundary = None;
    for e in 0..c.graph().edges().len() {
        let a = cocycle_to_amalgam(d, &edge_coboundary(&c, e))?;
        if !amalgams_isomorphic(&standard, &a, budget)?.isomorphic {
            bad_coboundary = Some(format!("d0(a_{e})"));
            break;
        }
    }
    checks.push(Check::from_witness("coboundaries_give_standard_class", bad_coboundary));

    let completion_order = match standard_completion(&standard, d, cap) {
        Ok(Some(comp)) => {
            let report = verify_completion(&standard, &comp);
            checks.push(Check::from_witness(
                "standard_completion",
                (!report.all_passed() || !report.non_collapsing).then(|| format!("{:?}", report.checks)),
            ));
            Some(comp.target.order())
        }
        Ok(None) | Err(AmalgamError::Enumeration(EnumerationError::CapExceeded { .. })) => None,
        Err(e) => return Err(e),
    };

    Ok(Classification {
        non_tree_edges: tree.non_tree.len(),
        selections: selections.len(),
        tree,
        classes: classes
            .into_iter()
            .map(|(rep, members)| AmalgamClass {
                representative: selections[rep].delta.clone(),
                members: members.into_iter().map(|k| selections[k].delta.clone()).collect(),
            })
            .collect(),
        comparisons,
        completion_order,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Label;
    use crate::morphisms::DEFAULT_BUDGET;

    fn triangle() -> CoxeterDiagram {
        CoxeterDiagram::from_edges(
            3,
            &[
                (0, 1, Label::Finite(3)),
                (0, 2, Label::Finite(3)),
                (1, 2, Label::Finite(3)),
            ],
        )
        .unwrap()
    }

    fn two_triangles() -> CoxeterDiagram {
        let e = |i, j| (i, j, Label::Finite(3));
        CoxeterDiagram::from_edges(4, &[e(0, 1), e(0, 2), e(1, 2), e(1, 3), e(2, 3)]).unwrap()
    }

    #[test]
    fn relabel_words() {
        assert_eq!(relabel("s1s2s1", &[1, 3]), "s2s4s2");
        assert_eq!(relabel("e", &[0]), "e");
    }

    #[test]
    fn a2_single_simplex() {
        let a = standard_amalgam(&CoxeterDiagram::type_a(2)).unwrap();
        assert_eq!(a.members().len(), 1);
        assert_eq!(a.member(0).table.order(), 12);
        assert_eq!(a.face_maps().count(), 0);
        assert!(verify_amalgam(&a).all_passed());
    }

    #[test]
    fn a3_members() {
        let a = standard_amalgam(&CoxeterDiagram::type_a(3)).unwrap();
        let orders: Vec<usize> = a.members().iter().map(|m| m.table.order()).collect();
        assert_eq!(orders, vec![12, 12, 4]);
        assert_eq!(a.member(2).vertices, vec![1]);
        assert_eq!(a.face_maps().count(), 2);
        assert!(verify_amalgam(&a).all_passed());
        let comp = standard_completion(&a, &CoxeterDiagram::type_a(3), 10_000)
            .unwrap()
            .unwrap();
        let r = verify_completion(&a, &comp);
        assert!(r.all_passed() && r.non_collapsing);
        assert_eq!(r.target_order, 48);
    }

    #[test]
    fn triangle_members() {
        let a = standard_amalgam(&triangle()).unwrap();
        let orders: Vec<usize> = a.members().iter().map(|m| m.table.order()).collect();
        assert_eq!(orders, vec![12, 12, 12, 4, 4, 4, 2]);
        assert!(verify_amalgam(&a).all_passed());
    }

    #[test]
    fn corrupted_map_is_named() {
        let a = standard_amalgam(&CoxeterDiagram::type_a(3)).unwrap();
        let bad = a.with_map(0, 2, Morphism::trivial(4, 12));
        let r = verify_amalgam(&bad);
        assert!(!r.all_passed());
        assert_eq!(r.checks[0].witness.as_deref(), Some("[0] <= [0, 1]"));
    }

    #[test]
    fn completion_faults() {
        let d = CoxeterDiagram::type_a(3);
        let a = standard_amalgam(&d).unwrap();
        let mut comp = standard_completion(&a, &d, 10_000).unwrap().unwrap();
        assert!(verify_completion(&a, &comp).all_passed());
        comp.maps[2] = comp.maps[2].compose(&gamma(a.member(2), &[1]));
        assert!(!verify_completion(&a, &comp).all_passed());

        let z2 = chein_loop(&groups::cyclic(1));
        let trivial = Completion {
            target: z2,
            maps: a
                .members()
                .iter()
                .map(|m| Morphism::trivial(m.table.order(), 2))
                .collect(),
        };
        let r = verify_completion(&a, &trivial);
        assert!(r.all_passed());
        assert!(!r.non_collapsing);
    }

    #[test]
    fn twisted_examples() {
        let d = triangle();
        let tree = diagram_tree(&d);
        assert_eq!(tree.non_tree.len(), 1);
        let standard = standard_amalgam(&d).unwrap();
        let none = TwistSelection::new(tree.clone(), vec![]).unwrap();
        assert_eq!(twisted_amalgam(&d, &none).unwrap(), standard);
        let one = TwistSelection::new(tree.clone(), vec![1]).unwrap();
        let t = twisted_amalgam(&d, &one).unwrap();
        assert!(verify_amalgam(&t).all_passed());
        assert!(verify_type(&t, &standard).passed);
        assert_ne!(t, standard);
        assert_eq!(
            TwistSelection::new(tree.clone(), vec![2]),
            Err(AmalgamError::DeltaOutOfRange { j: 2, n: 1 })
        );
        assert_eq!(TwistSelection::all(&diagram_tree(&two_triangles())).len(), 4);
    }

    #[test]
    fn infinite_label_rejected() {
        let d = CoxeterDiagram::dihedral(Label::Infinite).unwrap();
        assert_eq!(standard_amalgam(&d), Err(AmalgamError::InfiniteLabel { i: 1, j: 2 }));
    }

    #[test]
    fn cocycle_examples() {
        let d = triangle();
        let standard = standard_amalgam(&d).unwrap();
        let c = standard.complex().clone();
        let zero = BitVector::zeros(3);
        assert_eq!(cocycle_to_amalgam(&d, &zero).unwrap(), standard);
        let tree = diagram_tree(&d);
        let one = TwistSelection::new(tree, vec![1]).unwrap();
        let z = selection_cocycle(&c, &one);
        let a = cocycle_to_amalgam(&d, &z).unwrap();
        assert!(verify_amalgam(&a).all_passed());
        let t = twisted_amalgam(&d, &one).unwrap();
        let r = amalgams_isomorphic(&a, &t, DEFAULT_BUDGET).unwrap();
        assert!(r.isomorphic);
        assert!(verify_isomorphism(&a, &t, r.witness.as_ref().unwrap()).passed);
        let b = cocycle_to_amalgam(&d, &edge_coboundary(&c, 0)).unwrap();
        assert!(amalgams_isomorphic(&standard, &b, DEFAULT_BUDGET).unwrap().isomorphic);
        assert_eq!(
            cocycle_to_amalgam(&d, &BitVector::zeros(2)),
            Err(AmalgamError::WrongLength { len: 2, dim: 3 })
        );
    }

    #[test]
    fn non_cocycle_rejected() {
        let d = CoxeterDiagram::from_edges(
            4,
            &[
                (0, 1, Label::Finite(3)),
                (0, 2, Label::Finite(3)),
                (0, 3, Label::Finite(3)),
            ],
        )
        .unwrap();
        let z = BitVector::from_ones(3, [0]);
        assert!(matches!(cocycle_to_amalgam(&d, &z), Err(AmalgamError::NotACocycle(_))));
    }

    #[test]
    fn triangle_has_two_classes() {
        let r = classify_amalgams(&triangle(), DEFAULT_BUDGET, 10_000).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert_eq!(r.classes[0].representative, Vec::<usize>::new());
        assert_eq!(r.classes[1].representative, vec![1]);
        assert!(r.all_passed(), "{:?}", r.checks);
        assert_eq!(r.completion_order, None);
    }

    #[test]
    fn identity_family() {
        let a = standard_amalgam(&triangle()).unwrap();
        let r = amalgams_isomorphic(&a, &a, DEFAULT_BUDGET).unwrap();
        assert!(r.isomorphic);
        let w = r.witness.unwrap();
        assert!(w.iter().all(|f| *f == Morphism::identity(f.domain_order())));
    }
}
