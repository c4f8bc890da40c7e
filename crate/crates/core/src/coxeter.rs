//! Coxeter diagrams, spherical-type recognition and enumeration of the
//! Coxeter group as an explicit multiplication table.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::Graph;
use crate::table::{associativity_witness, check_identity_zero, check_latin, greedy_generators, Magma, TableError};

/// Default bound on the number of group elements produced by enumeration.
pub const DEFAULT_CAP: usize = 10_000;

/// An entry `m_ij` of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Label {
    Finite(u32),
    #[serde(serialize_with = "serialize_inf")]
    Infinite,
}

fn serialize_inf<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("inf")
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }

    /// `m ≥ 3`, with `∞` counting as large.
    pub fn is_edge(self) -> bool {
        match self {
            Label::Finite(m) => m >= 3,
            Label::Infinite => true,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => f.write_str("inf"),
        }
    }
}

impl From<u32> for Label {
    fn from(m: u32) -> Self {
        Label::Finite(m)
    }
}

/// Diagram validation errors. Node indices are 1-based, as in the diagram text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("diagram must have positive rank")]
    ZeroRank,
    #[error("row {row} has {len} entries, expected {rank}")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("diagonal entry ({0},{0}) must be 1")]
    Diagonal(usize),
    #[error("matrix is not symmetric at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("off-diagonal entry ({0},{1}) must be at least 2")]
    LabelTooSmall(usize, usize),
    #[error("node index {index} out of range for rank {rank}")]
    NodeOutOfRange { index: usize, rank: usize },
}

/// A validated symmetric Coxeter matrix over nodes `0..rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoxeterDiagram {
    rank: usize,
    labels: Vec<Label>,
}

/// Checks the Coxeter matrix axioms, returning the validated diagram.
pub fn validate_diagram(matrix: &[Vec<Label>]) -> Result<CoxeterDiagram, DiagramError> {
    let rank = matrix.len();
    if rank == 0 {
        return Err(DiagramError::ZeroRank);
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != rank {
            return Err(DiagramError::NotSquare {
                row: i + 1,
                len: row.len(),
                rank,
            });
        }
    }
    for (i, row) in matrix.iter().enumerate() {
        if row[i] != Label::Finite(1) {
            return Err(DiagramError::Diagonal(i + 1));
        }
        for (j, &l) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if l != matrix[j][i] {
                return Err(DiagramError::Asymmetric(i + 1, j + 1));
            }
            if matches!(l, Label::Finite(m) if m < 2) {
                return Err(DiagramError::LabelTooSmall(i + 1, j + 1));
            }
        }
    }
    Ok(CoxeterDiagram {
        rank,
        labels: matrix.iter().flatten().copied().collect(),
    })
}

impl CoxeterDiagram {
    /// Diagram with the given edges (0-based nodes); unlisted pairs get `m = 2`.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, Label)]) -> Result<Self, DiagramError> {
        if rank == 0 {
            return Err(DiagramError::ZeroRank);
        }
        let mut m = vec![vec![Label::Finite(2); rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(i, j, label) in edges {
            for index in [i, j] {
                if index >= rank {
                    return Err(DiagramError::NodeOutOfRange { index: index + 1, rank });
                }
            }
            m[i][j] = label;
            m[j][i] = label;
        }
        validate_diagram(&m)
    }

    /// Rank-2 diagram `I2(m)`.
    pub fn dihedral(m: Label) -> Result<Self, DiagramError> {
        Self::from_edges(2, &[(0, 1, m)])
    }

    /// Linear diagram `A_n`.
    pub fn type_a(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, Label::Finite(3))).collect();
        Self::from_edges(n, &edges).expect("A_n is a valid diagram")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[i * self.rank + j]
    }

    pub fn matrix(&self) -> Vec<Vec<Label>> {
        self.labels.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// All `m_ij` finite.
    pub fn is_two_spherical(&self) -> bool {
        self.labels.iter().all(|l| l.finite().is_some())
    }

    /// Subdiagram on the given nodes, renumbered in the given order.
    pub fn restrict(&self, nodes: &[usize]) -> CoxeterDiagram {
        let k = nodes.len();
        let labels = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| self.label(nodes[a], nodes[b]))
            .collect();
        CoxeterDiagram { rank: k, labels }
    }
}

/// Graph on `0..rank` with an edge `{i,j}` whenever `m_ij ≥ 3` (including `∞`).
pub fn underlying_graph(d: &CoxeterDiagram) -> Graph {
    let mut edges = Vec::new();
    for i in 0..d.rank {
        for j in i + 1..d.rank {
            if d.label(i, j).is_edge() {
                edges.push((i, j));
            }
        }
    }
    Graph::new(d.rank, &edges).expect("edges come from a valid diagram")
}

/// Irreducible finite Coxeter types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IrreducibleType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H3,
    H4,
    /// Dihedral `I2(m)` for `m ≥ 5`; `m = 3, 4` are reported as A2, B2.
    I2(u32),
}

impl IrreducibleType {
    pub fn order(self) -> u128 {
        fn factorial(n: usize) -> u128 {
            (1..=n as u128).fold(1, u128::saturating_mul)
        }
        let pow2 = |k: usize| 2u128.saturating_pow(k as u32);
        match self {
            IrreducibleType::A(n) => factorial(n + 1),
            IrreducibleType::B(n) => pow2(n).saturating_mul(factorial(n)),
            IrreducibleType::D(n) => pow2(n - 1).saturating_mul(factorial(n)),
            IrreducibleType::E(6) => 51_840,
            IrreducibleType::E(7) => 2_903_040,
            IrreducibleType::E(_) => 696_729_600,
            IrreducibleType::F4 => 1_152,
            IrreducibleType::H3 => 120,
            IrreducibleType::H4 => 14_400,
            IrreducibleType::I2(m) => 2 * m as u128,
        }
    }
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleType::A(n) => write!(f, "A{n}"),
            IrreducibleType::B(n) => write!(f, "B{n}"),
            IrreducibleType::D(n) => write!(f, "D{n}"),
            IrreducibleType::E(n) => write!(f, "E{n}"),
            IrreducibleType::F4 => f.write_str("F4"),
            IrreducibleType::H3 => f.write_str("H3"),
            IrreducibleType::H4 => f.write_str("H4"),
            IrreducibleType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sphericity {
    /// Component types listed by smallest node of each component.
    Spherical {
        components: Vec<IrreducibleType>,
        order: u128,
    },
    NonSpherical {
        reason: String,
    },
}

impl Sphericity {
    pub fn is_spherical(&self) -> bool {
        matches!(self, Sphericity::Spherical { .. })
    }

    pub fn predicted_order(&self) -> Option<u128> {
        match self {
            Sphericity::Spherical { order, .. } => Some(*order),
            Sphericity::NonSpherical { .. } => None,
        }
    }
}

/// Decides finiteness of `W` by matching each connected component of the
/// labelled graph (edges `m ≥ 3`) against the finite irreducible types.
pub fn recognize_spherical(d: &CoxeterDiagram) -> Sphericity {
    let graph = underlying_graph(d);
    let mut components = Vec::new();
    for comp in graph.components() {
        match classify_component(d, &comp) {
            Ok(t) => components.push(t),
            Err(reason) => return Sphericity::NonSpherical { reason },
        }
    }
    let order = components.iter().map(|t| t.order()).fold(1u128, u128::saturating_mul);
    Sphericity::Spherical { components, order }
}

fn classify_component(d: &CoxeterDiagram, nodes: &[usize]) -> Result<IrreducibleType, String> {
    let k = nodes.len();
    let mut edges = Vec::new();
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            match d.label(i, j) {
                Label::Infinite => return Err(format!("m({},{}) = inf", i + 1, j + 1)),
                Label::Finite(m) if m >= 3 => edges.push((i, j, m)),
                Label::Finite(_) => {}
            }
        }
    }
    let name = |nodes: &[usize]| nodes.iter().map(|n| (n + 1).to_string()).collect::<Vec<_>>().join(",");
    match k {
        1 => return Ok(IrreducibleType::A(1)),
        2 => {
            return Ok(match edges[0].2 {
                3 => IrreducibleType::A(2),
                4 => IrreducibleType::B(2),
                m => IrreducibleType::I2(m),
            })
        }
        _ => {}
    }
    if edges.len() != k - 1 {
        return Err(format!("component {{{}}} contains a cycle", name(nodes)));
    }
    if let Some(&(i, j, m)) = edges.iter().find(|e| e.2 > 5) {
        return Err(format!("m({},{}) = {m} inside a component of rank {k}", i + 1, j + 1));
    }
    let heavy: Vec<_> = edges.iter().filter(|e| e.2 > 3).collect();
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let max_degree = nodes.iter().map(|&v| degree(v)).max().unwrap_or(0);
    let unsupported = || Err(format!("component {{{}}} is not of finite type", name(nodes)));

    if heavy.is_empty() {
        if max_degree <= 2 {
            return Ok(IrreducibleType::A(k));
        }
        let branches: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();
        if branches.len() != 1 || max_degree != 3 {
            return unsupported();
        }
        let mut arms = arm_lengths(&edges, branches[0]);
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, _] => Ok(IrreducibleType::D(k)),
            [1, 2, 2] => Ok(IrreducibleType::E(6)),
            [1, 2, 3] => Ok(IrreducibleType::E(7)),
            [1, 2, 4] => Ok(IrreducibleType::E(8)),
            _ => unsupported(),
        };
    }
    if heavy.len() > 1 || max_degree > 2 {
        return unsupported();
    }
    let (i, j, m) = *heavy[0];
    let at_end = degree(i) == 1 || degree(j) == 1;
    match (m, at_end, k) {
        (4, true, _) => Ok(IrreducibleType::B(k)),
        (4, false, 4) => Ok(IrreducibleType::F4),
        (5, true, 3) => Ok(IrreducibleType::H3),
        (5, true, 4) => Ok(IrreducibleType::H4),
        _ => unsupported(),
    }
}

/// Lengths of the paths hanging off a branch node of a tree.
fn arm_lengths(edges: &[(usize, usize, u32)], center: usize) -> Vec<usize> {
    let neighbours = |v: usize| {
        edges.iter().filter_map(move |e| {
            if e.0 == v {
                Some(e.1)
            } else if e.1 == v {
                Some(e.0)
            } else {
                None
            }
        })
    };
    neighbours(center)
        .map(|start| {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            loop {
                let next: Vec<usize> = neighbours(cur).filter(|&w| w != prev).collect();
                if next.len() != 1 {
                    break len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("m({0},{1}) is infinite; the group cannot be enumerated")]
    InfiniteLabel(usize, usize),
    #[error("element cap {cap} exceeded after {reached} elements (diagram likely non-spherical)")]
    CapExceeded { cap: usize, reached: usize },
}

/// The right-multiplication action of the Coxeter generators on `W`, with
/// elements numbered breadth-first by shortlex word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGraph {
    rank: usize,
    /// `right[x * rank + i] = x · s_i`
    right: Vec<u32>,
    /// `(parent, generator)` of each non-identity element in the BFS tree.
    parent: Vec<(u32, u32)>,
}

impl CayleyGraph {
    pub fn order(&self) -> usize {
        self.right.len() / self.rank.max(1)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn right_mul(&self, x: usize, generator: usize) -> usize {
        self.right[x * self.rank + generator] as usize
    }

    /// Shortlex-minimal word of `x` as generator indices.
    pub fn word(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while x != 0 {
            let (p, g) = self.parent[x];
            w.push(g as usize);
            x = p as usize;
        }
        w.reverse();
        w
    }
}

/// Enumerates `W` by coset enumeration over the trivial subgroup.
pub fn enumerate_cayley_graph(d: &CoxeterDiagram, cap: usize) -> Result<CayleyGraph, EnumerationError> {
    let n = d.rank();
    let mut relators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = d
                .label(i, j)
                .finite()
                .ok_or(EnumerationError::InfiniteLabel(i + 1, j + 1))? as usize;
            relators.push([i, j].repeat(m));
        }
    }
    // Generators are involutions, which the coset table enforces by pairing
    // `c·s = d` with `d·s = c`; `s_i^2` needs no relator.
    let limit = cap.saturating_mul(2).saturating_add(64);
    let mut table = CosetTable::new(n, limit);
    table
        .enumerate(&relators)
        .map_err(|reached| EnumerationError::CapExceeded {
            cap,
            reached: reached.min(cap + 1),
        })?;
    let graph = table.into_cayley_graph();
    if graph.order() > cap {
        return Err(EnumerationError::CapExceeded {
            cap,
            reached: graph.order(),
        });
    }
    Ok(graph)
}

const UNDEF: usize = usize::MAX;

/// Todd-Coxeter (HLT) coset table for a group generated by involutions.
struct CosetTable {
    gens: usize,
    limit: usize,
    table: Vec<usize>,
    rep: Vec<usize>,
    live: usize,
}

impl CosetTable {
    fn new(gens: usize, limit: usize) -> Self {
        CosetTable {
            gens,
            limit,
            table: vec![UNDEF; gens],
            rep: vec![0],
            live: 1,
        }
    }

    fn len(&self) -> usize {
        self.rep.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.gens + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.gens + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.rep[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, usize> {
        if self.live >= self.limit {
            return Err(self.live);
        }
        let d = self.len();
        self.rep.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.gens));
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x, c);
        Ok(d)
    }

    fn find(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.rep[root] != root {
            root = self.rep[root];
        }
        while self.rep[c] != root {
            let next = self.rep[c];
            self.rep[c] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (keep, kill) = (a.min(b), a.max(b));
            self.rep[kill] = keep;
            self.live -= 1;
            queue.push(kill);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.gens {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                if self.get(f, x) == e {
                    self.set(f, x, UNDEF);
                }
                let (e1, f1) = (self.find(e), self.find(f));
                let g = self.get(e1, x);
                if g != UNDEF {
                    self.merge(f1, g, &mut queue);
                } else {
                    let h = self.get(f1, x);
                    if h != UNDEF {
                        self.merge(e1, h, &mut queue);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), usize> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize]) != UNDEF {
                b = self.get(b, w[j as usize]);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i], f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn enumerate(&mut self, relators: &[Vec<usize>]) -> Result<(), usize> {
        let mut c = 0;
        while c < self.len() {
            if self.is_live(c) {
                for r in relators {
                    self.scan_and_fill(c, r)?;
                    if !self.is_live(c) {
                        break;
                    }
                }
                for x in 0..self.gens {
                    if self.is_live(c) && self.get(c, x) == UNDEF {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Renumbers the live cosets breadth-first from the identity coset,
    /// trying generators in index order.
    fn into_cayley_graph(mut self) -> CayleyGraph {
        let n = self.gens;
        let mut number = vec![UNDEF; self.len()];
        let mut order = vec![0usize];
        let mut parent = vec![(0u32, 0u32)];
        number[0] = 0;
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in 0..n {
                let d = self.get(c, x);
                let d = self.find(d);
                if number[d] == UNDEF {
                    number[d] = order.len();
                    order.push(d);
                    parent.push((k as u32, x as u32));
                }
            }
            k += 1;
        }
        let mut right = Vec::with_capacity(order.len() * n);
        for &c in &order {
            for x in 0..n {
                let d = self.get(c, x);
                let d = self.find(d);
                right.push(number[d] as u32);
            }
        }
        CayleyGraph { rank: n, right, parent }
    }
}

/// A finite group given by its full multiplication table, identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    product: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Magma for GroupTable {
    fn order(&self) -> usize {
        self.order
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b] as usize
    }
}

impl GroupTable {
    /// Validates a group table (Latin square, identity `0`, associative). When
    /// `generators` is `None` a greedy generating set is chosen.
    pub fn from_rows(rows: &[Vec<usize>], generators: Option<Vec<usize>>) -> Result<Self, TableError> {
        let raw = crate::table::RawTable::from_rows(rows)?;
        Self::from_magma(&raw, generators)
    }

    pub(crate) fn from_magma<M: Magma>(m: &M, generators: Option<Vec<usize>>) -> Result<Self, TableError> {
        check_latin(m)?;
        check_identity_zero(m)?;
        if let Some((x, y, z)) = associativity_witness(m) {
            return Err(TableError::NotAssociative(x, y, z));
        }
        let order = m.order();
        let mut product = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                product.push(m.mul(a, b) as u32);
            }
        }
        let generators = match generators {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&x| x >= order) {
                    return Err(TableError::BadGenerator(bad));
                }
                let reached = crate::table::closure_trace(m, &g).members.len();
                if reached != order {
                    return Err(TableError::NotGenerating { reached, order });
                }
                g
            }
            None => greedy_generators(m),
        };
        Ok(Self::assemble(order, product, generators, None))
    }

    fn assemble(order: usize, product: Vec<u32>, generators: Vec<usize>, labels: Option<Vec<String>>) -> Self {
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let row = &product[x * order..(x + 1) * order];
            inverse[x] = row.iter().position(|&v| v == 0).expect("latin row contains identity") as u32;
        }
        GroupTable {
            order,
            product,
            inverse,
            generators,
            labels,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        crate::table::rows_of(self)
    }

    pub fn is_abelian(&self) -> bool {
        crate::table::is_commutative(self)
    }

    /// Order of `x` as a group element.
    pub fn element_order(&self, x: usize) -> usize {
        crate::table::power_order(self, x).expect("finite group elements have finite order")
    }

    /// Every element squares to the identity.
    pub fn is_elementary_abelian_2(&self) -> bool {
        (0..self.order).all(|x| self.mul(x, x) == 0)
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }
}

/// The Coxeter group of `d` as a full table, numbered breadth-first by
/// shortlex word with generators `s_1,…,s_n` listed in `generators()`.
pub fn enumerate_group(d: &CoxeterDiagram, cap: usize) -> Result<GroupTable, EnumerationError> {
    let graph = enumerate_cayley_graph(d, cap)?;
    Ok(table_from_cayley_graph(&graph))
}

pub(crate) fn table_from_cayley_graph(graph: &CayleyGraph) -> GroupTable {
    let order = graph.order();
    let mut product = vec![0u32; order * order];
    for x in 0..order {
        let row = &mut product[x * order..(x + 1) * order];
        row[0] = x as u32;
        for y in 1..order {
            let (p, g) = graph.parent[y];
            row[y] = graph.right_mul(row[p as usize] as usize, g as usize) as u32;
        }
    }
    let generators = (0..graph.rank()).map(|i| graph.right_mul(0, i)).collect();
    let labels = (0..order).map(|x| word_label(&graph.word(x))).collect();
    GroupTable::assemble(order, product, generators, Some(labels))
}

fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|g| format!("s{}", g + 1)).collect()
    }
}

/// A subgroup with its embedding into the ambient table.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: GroupTable,
    /// `embedding[x]` is the ambient index of subgroup element `x`.
    pub embedding: Vec<usize>,
}

/// The subgroup `W_J` generated by `{s_j : j ∈ J}` (0-based generator
/// positions), numbered breadth-first over the generators of `J` in order.
pub fn parabolic_subgroup(g: &GroupTable, subset: &[usize]) -> Subgroup {
    let gens: Vec<usize> = subset.iter().map(|&j| g.generators()[j]).collect();
    let mut local = vec![UNDEF; g.order()];
    let mut embedding = vec![0usize];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    local[0] = 0;
    let mut k = 0;
    while k < embedding.len() {
        let x = embedding[k];
        for (pos, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if local[y] == UNDEF {
                local[y] = embedding.len();
                embedding.push(y);
                let mut w = words[k].clone();
                w.push(subset[pos]);
                words.push(w);
            }
        }
        k += 1;
    }
    let order = embedding.len();
    let mut product = Vec::with_capacity(order * order);
    for &a in &embedding {
        for &b in &embedding {
            product.push(local[g.mul(a, b)] as u32);
        }
    }
    let generators = gens.iter().map(|&s| local[s]).collect();
    let labels = words.iter().map(|w| word_label(w)).collect();
    Subgroup {
        group: GroupTable::assemble(order, product, generators, Some(labels)),
        embedding,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(m: u32) -> Label {
        Label::Finite(m)
    }

    #[test]
    fn validate_examples() {
        assert!(validate_diagram(&[vec![f(1)]]).is_ok());
        assert!(validate_diagram(&[vec![f(1), f(3)], vec![f(3), f(1)]]).is_ok());
        assert_eq!(
            validate_diagram(&[vec![f(1), f(3)], vec![f(2), f(1)]]),
            Err(DiagramError::Asymmetric(1, 2))
        );
        assert_eq!(
            validate_diagram(&[vec![f(1), f(1)], vec![f(1), f(1)]]),
            Err(DiagramError::LabelTooSmall(1, 2))
        );
        assert_eq!(
            validate_diagram(&[vec![f(2), f(3)], vec![f(3), f(1)]]),
            Err(DiagramError::Diagonal(1))
        );
        assert!(matches!(
            validate_diagram(&[vec![f(1), f(3)], vec![f(3)]]),
            Err(DiagramError::NotSquare { row: 2, .. })
        ));
    }

    #[test]
    fn underlying_graph_examples() {
        assert_eq!(underlying_graph(&CoxeterDiagram::type_a(2)).edges(), &[(0, 1)]);
        let a1a1 = CoxeterDiagram::from_edges(2, &[]).unwrap();
        assert!(underlying_graph(&a1a1).edges().is_empty());
        let tri = CoxeterDiagram::from_edges(3, &[(0, 1, f(3)), (0, 2, f(3)), (1, 2, f(3))]).unwrap();
        assert_eq!(underlying_graph(&tri).edges(), &[(0, 1), (0, 2), (1, 2)]);
        let inf = CoxeterDiagram::dihedral(Label::Infinite).unwrap();
        assert_eq!(underlying_graph(&inf).edges().len(), 1);
    }

    #[test]
    fn spherical_recognition_examples() {
        let a2 = recognize_spherical(&CoxeterDiagram::type_a(2));
        assert_eq!(a2.predicted_order(), Some(6));
        let i27 = recognize_spherical(&CoxeterDiagram::dihedral(f(7)).unwrap());
        assert_eq!(
            i27,
            Sphericity::Spherical {
                components: vec![IrreducibleType::I2(7)],
                order: 14
            }
        );
        let tri = CoxeterDiagram::from_edges(3, &[(0, 1, f(3)), (0, 2, f(3)), (1, 2, f(3))]).unwrap();
        assert!(!recognize_spherical(&tri).is_spherical());
        assert!(!recognize_spherical(&CoxeterDiagram::dihedral(Label::Infinite).unwrap()).is_spherical());
    }

    #[test]
    fn named_types() {
        let d4 = CoxeterDiagram::from_edges(4, &[(0, 1, f(3)), (1, 2, f(3)), (1, 3, f(3))]).unwrap();
        assert_eq!(recognize_spherical(&d4).predicted_order(), Some(192));
        let f4 = CoxeterDiagram::from_edges(4, &[(0, 1, f(3)), (1, 2, f(4)), (2, 3, f(3))]).unwrap();
        assert_eq!(recognize_spherical(&f4).predicted_order(), Some(1152));
        let h4 = CoxeterDiagram::from_edges(4, &[(0, 1, f(5)), (1, 2, f(3)), (2, 3, f(3))]).unwrap();
        assert_eq!(recognize_spherical(&h4).predicted_order(), Some(14_400));
        let e8 = CoxeterDiagram::from_edges(
            8,
            &[
                (0, 1, f(3)),
                (1, 2, f(3)),
                (2, 3, f(3)),
                (3, 4, f(3)),
                (4, 5, f(3)),
                (5, 6, f(3)),
                (2, 7, f(3)),
            ],
        )
        .unwrap();
        assert_eq!(recognize_spherical(&e8).predicted_order(), Some(696_729_600));
        let a1a2 = CoxeterDiagram::from_edges(3, &[(1, 2, f(3))]).unwrap();
        assert_eq!(recognize_spherical(&a1a2).predicted_order(), Some(12));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_group(&CoxeterDiagram::type_a(1), 10).unwrap().order(), 2);
        assert_eq!(enumerate_group(&CoxeterDiagram::type_a(2), 10).unwrap().order(), 6);
        assert_eq!(
            enumerate_group(&CoxeterDiagram::dihedral(f(4)).unwrap(), 10)
                .unwrap()
                .order(),
            8
        );
        assert_eq!(enumerate_group(&CoxeterDiagram::type_a(4), 200).unwrap().order(), 120);
    }

    #[test]
    fn enumeration_numbering_is_shortlex() {
        let g = enumerate_group(&CoxeterDiagram::type_a(2), 10).unwrap();
        let labels: Vec<_> = g.labels().unwrap().to_vec();
        assert_eq!(labels, ["e", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]);
        assert_eq!(g.generators(), &[1, 2]);
    }

    #[test]
    fn cap_exceeded_reports_partial_count() {
        let tri = CoxeterDiagram::from_edges(3, &[(0, 1, f(3)), (0, 2, f(3)), (1, 2, f(3))]).unwrap();
        match enumerate_group(&tri, 500) {
            Err(EnumerationError::CapExceeded { cap: 500, reached }) => assert!(reached > 0),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            enumerate_group(&CoxeterDiagram::dihedral(Label::Infinite).unwrap(), 10),
            Err(EnumerationError::InfiniteLabel(1, 2))
        );
        assert!(matches!(
            enumerate_group(&CoxeterDiagram::type_a(3), 23),
            Err(EnumerationError::CapExceeded { .. })
        ));
    }

    #[test]
    fn parabolic_examples() {
        let a3 = enumerate_group(&CoxeterDiagram::type_a(3), 100).unwrap();
        assert_eq!(parabolic_subgroup(&a3, &[]).group.order(), 1);
        let sub = parabolic_subgroup(&a3, &[0, 1]);
        assert_eq!(sub.group.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(
                    sub.embedding[sub.group.mul(a, b)],
                    a3.mul(sub.embedding[a], sub.embedding[b])
                );
            }
        }
        assert_eq!(parabolic_subgroup(&a3, &[0, 1, 2]).group.order(), 24);
    }
}
