//! Homomorphisms between tables, brute-force automorphism groups, the
//! trichotomy for Chein loops, and the explicit automorphisms `φ_g`, `φ_ψ`,
//! `σ_i` and `Ψ_i(h)` checked against brute force.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
use crate::coxeter::GroupTable;
use crate::loop_core::{chein_loop, LoopTable};
use crate::table::{closure_trace, greedy_generators, power_order, Magma, SEED};

/// Default node budget for automorphism searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("image has {len} entries, domain has {domain}")]
    WrongLength { len: usize, domain: usize },
    #[error("image of {x} is {value}, outside codomain of order {codomain}")]
    OutOfRange { x: usize, value: usize, codomain: usize },
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("loop carries no group-part marker")]
    MissingGroupPart,
    #[error("element {0} is not in G")]
    NotInGroup(usize),
    #[error("map is not an automorphism of G: {0}")]
    NotAnAutomorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A total map `0..domain_order → 0..codomain_order`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Morphism {
    domain_order: usize,
    codomain_order: usize,
    image: Vec<usize>,
}

impl Morphism {
    pub fn new(codomain_order: usize, image: Vec<usize>) -> Result<Self, MorphismError> {
        if let Some((x, &value)) = image.iter().enumerate().find(|(_, &v)| v >= codomain_order) {
            return Err(MorphismError::OutOfRange {
                x,
                value,
                codomain: codomain_order,
            });
        }
        Ok(Morphism {
            domain_order: image.len(),
            codomain_order,
            image,
        })
    }

    pub fn identity(n: usize) -> Self {
        Morphism {
            domain_order: n,
            codomain_order: n,
            image: (0..n).collect(),
        }
    }

    /// Constant map onto the identity.
    pub fn trivial(domain_order: usize, codomain_order: usize) -> Self {
        Morphism {
            domain_order,
            codomain_order,
            image: vec![0; domain_order],
        }
    }

    pub fn domain_order(&self) -> usize {
        self.domain_order
    }

    pub fn codomain_order(&self) -> usize {
        self.codomain_order
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Morphism {
        assert_eq!(inner.codomain_order, self.domain_order, "composition mismatch");
        Morphism {
            domain_order: inner.domain_order,
            codomain_order: self.codomain_order,
            image: inner.image.iter().map(|&y| self.image[y]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain_order];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.domain_order == self.codomain_order && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.domain_order];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Some(Morphism {
            domain_order: self.codomain_order,
            codomain_order: self.domain_order,
            image: inv,
        })
    }

    /// Sorted image set.
    pub fn image_set(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.image.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.image.iter().all(|&y| y == 0)
    }

    /// Preimage of `y`, if `y` is in the image of an injective map.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.image.iter().position(|&v| v == y)
    }
}

/// First pair `(x, y)` with `f(xy) ≠ f(x)f(y)`, or `(0, 0)` when `f(e) ≠ e`.
pub fn homomorphism_witness<A: Magma, B: Magma>(f: &Morphism, a: &A, b: &B) -> Option<(usize, usize)> {
    assert_eq!(f.domain_order(), a.order());
    assert_eq!(f.codomain_order(), b.order());
    if f.apply(0) != 0 {
        return Some((0, 0));
    }
    let n = a.order();
    for x in 0..n {
        for y in 0..n {
            if f.apply(a.mul(x, y)) != b.mul(f.apply(x), f.apply(y)) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_homomorphism<A: Magma, B: Magma>(f: &Morphism, a: &A, b: &B) -> bool {
    f.domain_order() == a.order() && f.codomain_order() == b.order() && homomorphism_witness(f, a, b).is_none()
}

pub fn is_automorphism<A: Magma>(f: &Morphism, a: &A) -> bool {
    f.is_bijective() && is_homomorphism(f, a, a)
}

/// The homomorphism `a → b` sending `generators[k] ↦ images[k]`, if one
/// exists. The generators must generate `a`.
pub fn extend_from_generators<A: Magma, B: Magma>(
    a: &A,
    b: &B,
    generators: &[usize],
    images: &[usize],
) -> Option<Morphism> {
    assert_eq!(generators.len(), images.len());
    let trace = closure_trace(a, generators);
    if trace.members.len() != a.order() {
        return None;
    }
    let mut image = vec![usize::MAX; a.order()];
    image[0] = 0;
    for (&g, &h) in generators.iter().zip(images) {
        if image[g] != usize::MAX && image[g] != h {
            return None;
        }
        image[g] = h;
    }
    for &(y, p, q) in &trace.steps {
        if p != SEED {
            image[y] = b.mul(image[p], image[q]);
        }
    }
    let f = Morphism::new(b.order(), image).ok()?;
    is_homomorphism(&f, a, b).then_some(f)
}

/// All automorphisms of a table, sorted by image vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    elements: Vec<Morphism>,
}

impl AutGroup {
    pub fn from_elements(mut elements: Vec<Morphism>) -> Self {
        elements.sort();
        elements.dedup();
        AutGroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Morphism] {
        &self.elements
    }

    pub fn contains(&self, f: &Morphism) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    /// Closed under composition and inverses, and contains the identity.
    /// Checked by growing a generating set greedily: the set is a group
    /// exactly when every intermediate closure stays inside it and the last
    /// one exhausts it. Each new generator at least doubles the closure.
    pub fn is_group(&self) -> bool {
        let Some(first) = self.elements.first() else {
            return false;
        };
        if !self.elements.iter().all(Morphism::is_bijective) {
            return false;
        }
        let n = first.domain_order();
        let mut gens: Vec<Morphism> = Vec::new();
        let mut sub = BTreeSet::from([Morphism::identity(n)]);
        for f in &self.elements {
            if sub.contains(f) {
                continue;
            }
            gens.push(f.clone());
            sub = BTreeSet::from([Morphism::identity(n)]);
            let mut frontier = vec![Morphism::identity(n)];
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let h = g.compose(&x);
                    if !self.contains(&h) {
                        return false;
                    }
                    if sub.insert(h.clone()) {
                        frontier.push(h);
                    }
                }
            }
        }
        sub.len() == self.elements.len()
    }

    /// Members mapping `set` onto itself.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> AutGroup {
        let target: BTreeSet<usize> = set.iter().copied().collect();
        AutGroup::from_elements(
            self.elements
                .iter()
                .filter(|f| set.iter().map(|&x| f.apply(x)).collect::<BTreeSet<_>>() == target)
                .cloned()
                .collect(),
        )
    }
}

/// Closure of `generators` under composition.
pub fn generated_subgroup(generators: &[Morphism], n: usize) -> AutGroup {
    let mut found: BTreeSet<Morphism> = BTreeSet::from([Morphism::identity(n)]);
    let mut frontier = vec![Morphism::identity(n)];
    while let Some(f) = frontier.pop() {
        for g in generators {
            let h = g.compose(&f);
            if found.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    AutGroup::from_elements(found.into_iter().collect())
}

/// Backtracking over images of a greedy generating set. Candidate images are
/// tried in ascending index order and must share the power order of the
/// generator; every partial assignment is checked for injectivity and the
/// homomorphism law on the subloop it generates.
pub fn automorphism_group<M: Magma>(t: &M, budget: u64) -> Result<AutGroup, MorphismError> {
    let n = t.order();
    let gens = greedy_generators(t);
    let traces: Vec<_> = (1..=gens.len()).map(|k| closure_trace(t, &gens[..k])).collect();
    let orders: Vec<Option<usize>> = (0..n).map(|x| power_order(t, x)).collect();
    let mut search = AutSearch {
        t,
        gens: &gens,
        traces: &traces,
        orders: &orders,
        chosen: Vec::new(),
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    if gens.is_empty() {
        return Ok(AutGroup::from_elements(vec![Morphism::identity(n)]));
    }
    search.descend()?;
    Ok(AutGroup::from_elements(search.found))
}

struct AutSearch<'a, M: Magma> {
    t: &'a M,
    gens: &'a [usize],
    traces: &'a [crate::table::ClosureTrace],
    orders: &'a [Option<usize>],
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    found: Vec<Morphism>,
}

impl<M: Magma> AutSearch<'_, M> {
    fn descend(&mut self) -> Result<(), MorphismError> {
        let k = self.chosen.len();
        let g = self.gens[k];
        for candidate in 1..self.t.order() {
            if self.orders[candidate] != self.orders[g] || self.chosen.contains(&candidate) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(MorphismError::BudgetExceeded { budget: self.budget });
            }
            self.chosen.push(candidate);
            if let Some(partial) = self.extend(k) {
                if k + 1 == self.gens.len() {
                    let f = Morphism::new(self.t.order(), partial).expect("images in range");
                    self.found.push(f);
                } else {
                    self.descend()?;
                }
            }
            self.chosen.pop();
        }
        Ok(())
    }

    /// Map on the closure of the first `k + 1` generators, if consistent.
    fn extend(&self, k: usize) -> Option<Vec<usize>> {
        let t = self.t;
        let trace = &self.traces[k];
        let mut image = vec![usize::MAX; t.order()];
        image[0] = 0;
        for (j, &g) in self.gens[..=k].iter().enumerate() {
            image[g] = self.chosen[j];
        }
        let mut used = vec![false; t.order()];
        for &(y, p, q) in &trace.steps {
            if p != SEED {
                image[y] = t.mul(image[p], image[q]);
            }
            if std::mem::replace(&mut used[image[y]], true) {
                return None;
            }
        }
        for &x in &trace.members {
            for &y in &trace.members {
                if image[t.mul(x, y)] != t.mul(image[x], image[y]) {
                    return None;
                }
            }
        }
        Some(image)
    }
}

/// `H` of index 2 in `G`, abelian, with an involution `u' ∉ H` inverting
/// every element of `H`; then `G ≅ M(H,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheinDecomposition {
    /// Elements of `H`, ascending.
    pub subgroup: Vec<usize>,
    pub involution: usize,
}

impl CheinDecomposition {
    /// `H` as a group table, in the ascending order of `subgroup`.
    pub fn subgroup_table(&self, g: &GroupTable) -> GroupTable {
        let local = |x: usize| self.subgroup.binary_search(&x).expect("closed subgroup");
        let rows: Vec<Vec<usize>> = self
            .subgroup
            .iter()
            .map(|&a| self.subgroup.iter().map(|&b| local(g.mul(a, b))).collect())
            .collect();
        GroupTable::from_rows(&rows, None).expect("subgroup of a group")
    }
}

/// Index-2 subgroups as kernels of surjections onto `Z2`, ascending in
/// lexicographic order of their sorted element lists.
pub fn index_two_subgroups(g: &GroupTable) -> Vec<Vec<usize>> {
    let gens = greedy_generators(g);
    let z2 = crate::groups::cyclic(2);
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << gens.len()) {
        let images: Vec<usize> = (0..gens.len()).map(|k| (mask >> k & 1) as usize).collect();
        if let Some(f) = extend_from_generators(g, &z2, &gens, &images) {
            out.insert((0..g.order()).filter(|&x| f.apply(x) == 0).collect::<Vec<_>>());
        }
    }
    out.into_iter().collect()
}

/// Every Chein decomposition, ordered by subgroup then involution.
pub fn chein_decompositions(g: &GroupTable) -> Vec<CheinDecomposition> {
    let mut out = Vec::new();
    for h in index_two_subgroups(g) {
        let abelian = h.iter().all(|&a| h.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
        if !abelian {
            continue;
        }
        for u in (0..g.order()).filter(|x| h.binary_search(x).is_err()) {
            if g.mul(u, u) == 0 && h.iter().all(|&x| g.mul(g.mul(u, x), u) == g.inverse(x)) {
                out.push(CheinDecomposition {
                    subgroup: h.clone(),
                    involution: u,
                });
            }
        }
    }
    out
}

/// The smallest Chein decomposition of `g`, if any.
pub fn recognize_chein_decomposition(g: &GroupTable) -> Option<CheinDecomposition> {
    chein_decompositions(g).into_iter().next()
}

/// Which of the three mutually exclusive situations `L = M(G,2)` is in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Trichotomy {
    /// `L` is an elementary abelian 2-group.
    Case1,
    /// `G ≇ M(H,2)` for every group `H`.
    Case2,
    /// `G ≅ M(H,2)` with `H` abelian.
    Case3 { decomposition: CheinDecomposition },
}

pub fn classify_trichotomy(g: &GroupTable) -> Trichotomy {
    if g.is_elementary_abelian_2() {
        return Trichotomy::Case1;
    }
    match recognize_chein_decomposition(g) {
        None => Trichotomy::Case2,
        Some(decomposition) => Trichotomy::Case3 { decomposition },
    }
}

/// `φ_g`: fixes `G` pointwise and sends `g₁u ↦ (g g₁)u`.
pub fn build_phi_g(l: &LoopTable, g: usize) -> Result<Morphism, MorphismError> {
    let gp = l.group_part().ok_or(MorphismError::MissingGroupPart)?;
    if !gp.contains(g) {
        return Err(MorphismError::NotInGroup(g));
    }
    let n = gp.group_order;
    let image = (0..l.order())
        .map(|x| if x < n { x } else { gp.coset(l.mul(g, x - n)) })
        .collect();
    let f = Morphism::new(l.order(), image)?;
    debug_assert!(is_automorphism(&f, l));
    Ok(f)
}

/// `φ_ψ`: `g ↦ ψ(g)`, `gu ↦ ψ(g)u`, for `ψ ∈ Aut(G)`.
pub fn build_phi_psi(l: &LoopTable, psi: &Morphism) -> Result<Morphism, MorphismError> {
    let gp = l.group_part().ok_or(MorphismError::MissingGroupPart)?;
    let n = gp.group_order;
    let g = l.group_table().ok_or(MorphismError::MissingGroupPart)?;
    if psi.domain_order() != n || psi.codomain_order() != n {
        return Err(MorphismError::NotAnAutomorphism(format!(
            "expected a map on {n} elements, got {} → {}",
            psi.domain_order(),
            psi.codomain_order()
        )));
    }
    if !psi.is_bijective() {
        return Err(MorphismError::NotAnAutomorphism("not bijective".into()));
    }
    if let Some((x, y)) = homomorphism_witness(psi, &g, &g) {
        return Err(MorphismError::NotAnAutomorphism(format!("fails at ({x},{y})")));
    }
    let image = (0..l.order())
        .map(|x| {
            if x < n {
                psi.apply(x)
            } else {
                gp.coset(psi.apply(x - n))
            }
        })
        .collect();
    Morphism::new(l.order(), image)
}

/// Verification of an automorphism-group structure theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub loop_order: usize,
    pub brute_force_order: usize,
    pub formula_order: usize,
    pub constructed_order: usize,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

fn automorphism_check(name: &str, maps: &[Morphism], l: &LoopTable) -> Check {
    let bad = maps.iter().position(|f| !is_automorphism(f, l));
    Check::from_witness(
        name,
        bad.map(|i| format!("map {:?} is not an automorphism", maps[i].image())),
    )
}

/// Case 2: `Aut(M(G,2)) = {φ_g ∘ φ_ψ}`, a semidirect product `G ⋊ Aut(G)`.
pub fn verify_theorem_case2(g: &GroupTable, budget: u64) -> Result<TheoremReport, MorphismError> {
    match classify_trichotomy(g) {
        Trichotomy::Case2 => {}
        other => {
            return Err(MorphismError::Precondition(format!(
                "group is not in case 2 (classified as {other:?})"
            )))
        }
    }
    let l = chein_loop(g);
    let n = g.order();
    let gp = l.group_part().expect("chein loop");
    let aut_g = automorphism_group(g, budget)?;
    let brute = automorphism_group(&l, budget)?;
    let mut checks = Vec::new();

    let normal: Vec<Morphism> = (0..n).map(|x| build_phi_g(&l, x)).collect::<Result<_, _>>()?;
    let complement: Vec<Morphism> = aut_g
        .elements()
        .iter()
        .map(|psi| build_phi_psi(&l, psi))
        .collect::<Result<_, _>>()?;
    checks.push(automorphism_check("phi_g_are_automorphisms", &normal, &l));
    checks.push(automorphism_check("phi_psi_are_automorphisms", &complement, &l));

    let mut constructed = Vec::new();
    for f in &normal {
        for k in &complement {
            constructed.push(f.compose(k));
        }
    }
    let constructed = AutGroup::from_elements(constructed);
    checks.push(Check::expect_eq(
        "constructed_distinct",
        constructed.order(),
        n * aut_g.order(),
    ));
    checks.push(Check::from_witness(
        "constructed_equals_brute_force",
        (constructed != brute).then(|| {
            let missing = brute.elements().iter().find(|f| !constructed.contains(f));
            format!(
                "first brute-force automorphism not constructed: {:?}",
                missing.map(|f| f.image())
            )
        }),
    ));

    let mut conj = None;
    'outer: for (pi, psi) in aut_g.elements().iter().enumerate() {
        let phi_psi = &complement[pi];
        let phi_psi_inv = phi_psi.inverse().expect("bijective");
        for x in 0..n {
            let lhs = phi_psi.compose(&normal[x]).compose(&phi_psi_inv);
            if lhs != normal[psi.apply(x)] {
                conj = Some(format!("psi #{pi}, g = {x}"));
                break 'outer;
            }
        }
    }
    checks.push(Check::from_witness("conjugation_relation", conj));

    let mut chi = None;
    'chi: for a in 0..n {
        for b in 0..n {
            // φ_a ∘ φ_b sends u to (ab)u
            if normal[a].compose(&normal[b]).apply(gp.u()) != gp.coset(g.mul(a, b)) {
                chi = Some(format!("({a},{b})"));
                break 'chi;
            }
        }
    }
    checks.push(Check::from_witness("chi_is_homomorphism", chi));

    let normal_set = AutGroup::from_elements(normal.clone());
    let mut not_normal = None;
    'norm: for f in brute.elements() {
        let f_inv = f.inverse().expect("automorphism");
        for x in &normal {
            if !normal_set.contains(&f.compose(x).compose(&f_inv)) {
                not_normal = Some(format!("{:?}", f.image()));
                break 'norm;
            }
        }
    }
    checks.push(Check::from_witness("normal_subgroup", not_normal));
    let meet = complement.iter().filter(|k| normal_set.contains(k)).count();
    checks.push(Check::expect_eq("complement_meets_normal_trivially", meet, 1));

    let moves_g = brute
        .elements()
        .iter()
        .find(|f| (0..l.order()).any(|x| gp.contains(x) != gp.contains(f.apply(x))));
    checks.push(Check::from_witness(
        "g_is_characteristic",
        moves_g.map(|f| format!("{:?}", f.image())),
    ));
    checks.push(Check::expect_eq(
        "brute_force_matches_formula",
        brute.order(),
        n * aut_g.order(),
    ));

    Ok(TheoremReport {
        theorem: "case2: Aut(L) = G x| Aut(G)".to_string(),
        loop_order: l.order(),
        brute_force_order: brute.order(),
        formula_order: n * aut_g.order(),
        constructed_order: constructed.order(),
        checks,
    })
}

/// Case 3: for abelian `H` with no Chein decomposition and `G = M(H,2)`
/// nonabelian, `Aut(M(G,2)) ≅ (H × H) ⋊ (S_3 × Aut(H))`.
pub fn verify_theorem_case3(h: &GroupTable, budget: u64) -> Result<TheoremReport, MorphismError> {
    if !h.is_abelian() {
        return Err(MorphismError::Precondition("H is not abelian".into()));
    }
    if let Some(d) = recognize_chein_decomposition(h) {
        return Err(MorphismError::Precondition(format!(
            "H itself is a Chein loop (index-2 subgroup {:?}); this is the elementary abelian case",
            d.subgroup
        )));
    }
    let k = h.order();
    let g = chein_loop(h)
        .to_group(None)
        .map_err(|e| MorphismError::Precondition(format!("M(H,2) is not a group: {e}")))?;
    if g.is_abelian() {
        return Err(MorphismError::Precondition("G = M(H,2) is abelian".into()));
    }
    if recognize_chein_decomposition(&g).is_none() {
        return Err(MorphismError::Precondition("G has no Chein decomposition".into()));
    }
    let l = chein_loop(&g);
    let order = l.order();
    let (u1, u2) = (k, 2 * k);
    let u3 = l.mul(u1, u2);
    let us = [u1, u2, u3];
    // h·u_j
    let at = |x: usize, j: usize| l.mul(x, us[j - 1]);
    let mut checks = Vec::new();

    let klein = [0, u1, u2, u3];
    let klein_ok = klein
        .iter()
        .all(|&a| l.mul(a, a) == 0 && klein.iter().all(|&b| klein.contains(&l.mul(a, b))));
    checks.push(Check::from_witness(
        "klein_four_group",
        (!klein_ok).then(|| format!("{{1,u1,u2,u3}} = {klein:?} is not a Klein four group")),
    ));

    let mut coset_of = vec![0usize; order];
    for x in 0..k {
        for j in 1..=3 {
            coset_of[at(x, j)] = j;
        }
    }
    let partition_ok = (0..k).all(|x| (1..=3).all(|j| coset_of[at(x, j)] == j))
        && (0..order).filter(|&y| coset_of[y] == 0).count() == k;
    checks.push(Check::from_witness(
        "four_cosets_of_h",
        (!partition_ok).then(|| "L is not H ⊎ Hu1 ⊎ Hu2 ⊎ Hu3".to_string()),
    ));

    let build = |f: &dyn Fn(usize, usize) -> usize| -> Morphism {
        let mut image = vec![0usize; order];
        for x in 0..k {
            image[x] = f(x, 0);
            for j in 1..=3 {
                image[at(x, j)] = f(x, j);
            }
        }
        Morphism::new(order, image).expect("in range")
    };

    let sigma = |i: usize| {
        let other = 3 - i;
        build(&|x, j| match j {
            0 => x,
            j if j == i => at(x, i),
            j if j == other => at(x, 3),
            _ => at(x, other),
        })
    };
    let (sigma1, sigma2) = (sigma(1), sigma(2));
    checks.push(automorphism_check(
        "sigma_are_automorphisms",
        &[sigma1.clone(), sigma2.clone()],
        &l,
    ));
    let s = generated_subgroup(&[sigma1.clone(), sigma2.clone()], order);
    let s_nonabelian = sigma1.compose(&sigma2) != sigma2.compose(&sigma1);
    checks.push(Check::from_witness(
        "sigma_generate_s3",
        (s.order() != 6 || !s_nonabelian).then(|| format!("<sigma1, sigma2> has order {}", s.order())),
    ));

    let aut_h = automorphism_group(h, budget)?;
    let a: Vec<Morphism> = aut_h
        .elements()
        .iter()
        .map(|psi| build(&|x, j| if j == 0 { psi.apply(x) } else { at(psi.apply(x), j) }))
        .collect();
    checks.push(automorphism_check("aut_h_extensions_are_automorphisms", &a, &l));
    let commute = a
        .iter()
        .all(|p| [&sigma1, &sigma2].iter().all(|s| p.compose(s) == s.compose(p)));
    checks.push(Check::from_witness(
        "aut_h_commutes_with_s",
        (!commute).then(|| "some extension does not commute with sigma".to_string()),
    ));

    let psi_i = |i: usize, y: usize| {
        let other = 3 - i;
        build(&|x, j| match j {
            0 => x,
            j if j == i => at(h.mul(y, x), i),
            j if j == other => at(x, other),
            _ => at(h.mul(x, h.inverse(y)), 3),
        })
    };
    let mut kernel = Vec::new();
    let mut chi_bad = None;
    for y1 in 0..k {
        for y2 in 0..k {
            let f = psi_i(1, y1).compose(&psi_i(2, y2));
            if f.apply(u1) != at(y1, 1) || f.apply(u2) != at(y2, 2) {
                chi_bad.get_or_insert_with(|| format!("({y1},{y2})"));
            }
            kernel.push(f);
        }
    }
    checks.push(automorphism_check("kernel_maps_are_automorphisms", &kernel, &l));
    checks.push(Check::from_witness("chi_recovers_h_pair", chi_bad));
    let kernel = AutGroup::from_elements(kernel);
    checks.push(Check::expect_eq("kernel_is_h_squared", kernel.order(), k * k));

    let mut complement = Vec::new();
    for x in s.elements() {
        for y in &a {
            complement.push(x.compose(y));
        }
    }
    let complement = AutGroup::from_elements(complement);
    checks.push(Check::expect_eq(
        "complement_order",
        complement.order(),
        6 * aut_h.order(),
    ));

    let mut constructed = Vec::new();
    for x in kernel.elements() {
        for y in complement.elements() {
            constructed.push(x.compose(y));
        }
    }
    let constructed = AutGroup::from_elements(constructed);
    let brute = automorphism_group(&l, budget)?;
    let formula = k * k * 6 * aut_h.order();
    checks.push(Check::expect_eq("brute_force_matches_formula", brute.order(), formula));
    checks.push(Check::from_witness(
        "constructed_equals_brute_force",
        (constructed != brute).then(|| {
            let missing = brute.elements().iter().find(|f| !constructed.contains(f));
            format!(
                "constructed {} vs brute {}; first missing {:?}",
                constructed.order(),
                brute.order(),
                missing.map(|f| f.image())
            )
        }),
    ));

    let mut centralizer_bad = None;
    for x in 0..order {
        if power_order(&l, x).unwrap_or(0) > 2 {
            let c: Vec<usize> = (0..order).filter(|&y| l.mul(x, y) == l.mul(y, x)).collect();
            let expected: Vec<usize> = (0..k).collect();
            if c != expected {
                centralizer_bad = Some(format!("C_L({x}) has {} elements", c.len()));
                break;
            }
        }
    }
    checks.push(Check::from_witness(
        "h_is_centralizer_of_large_order_elements",
        centralizer_bad,
    ));

    Ok(TheoremReport {
        theorem: "case3: Aut(L) = (H x H) x| (S3 x Aut(H))".to_string(),
        loop_order: order,
        brute_force_order: brute.order(),
        formula_order: formula,
        constructed_order: constructed.order(),
        checks,
    })
}

/// `|GL_n(2)| = ∏_{i<n} (2ⁿ − 2ⁱ)`.
pub fn gl2_order(n: u32) -> u128 {
    (0..n).map(|i| (1u128 << n) - (1u128 << i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::table::RawTable;

    #[test]
    fn homomorphism_examples() {
        let q = groups::quaternion();
        assert!(is_homomorphism(&Morphism::identity(8), &q, &q));
        let s3 = groups::symmetric3();
        let l = chein_loop(&s3);
        let inclusion = Morphism::new(12, (0..6).collect()).unwrap();
        assert!(is_homomorphism(&inclusion, &s3, &l));
        let z4 = groups::cyclic(4);
        let shift = Morphism::new(4, vec![1, 2, 3, 0]).unwrap();
        assert!(!is_homomorphism(&shift, &z4, &z4));
    }

    #[test]
    fn aut_examples() {
        let v = groups::direct_product(&groups::cyclic(2), &groups::cyclic(2));
        let aut = automorphism_group(&v, DEFAULT_BUDGET).unwrap();
        assert_eq!(aut.order(), 6);
        assert!(aut.is_group());
        assert_eq!(
            automorphism_group(&groups::quaternion(), DEFAULT_BUDGET)
                .unwrap()
                .order(),
            24
        );
        assert_eq!(
            automorphism_group(&groups::cyclic(1), DEFAULT_BUDGET).unwrap().order(),
            1
        );
        let l = chein_loop(&groups::symmetric3());
        let aut = automorphism_group(&l, DEFAULT_BUDGET).unwrap();
        assert_eq!(aut.order(), 108);
        assert!(aut.is_group());
    }

    #[test]
    fn aut_budget() {
        let l = chein_loop(&groups::symmetric3());
        assert_eq!(
            automorphism_group(&l, 5),
            Err(MorphismError::BudgetExceeded { budget: 5 })
        );
    }

    #[test]
    fn aut_elements_sorted() {
        let aut = automorphism_group(&groups::cyclic(5), DEFAULT_BUDGET).unwrap();
        let images: Vec<_> = aut.elements().iter().map(|f| f.image().to_vec()).collect();
        let mut sorted = images.clone();
        sorted.sort();
        assert_eq!(images, sorted);
        assert_eq!(images[0], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn aut_of_non_group_loop() {
        let rows: Vec<Vec<usize>> = ["12345", "21453", "34512", "45231", "53124"]
            .iter()
            .map(|r| r.bytes().map(|b| (b - b'1') as usize).collect())
            .collect();
        let t = RawTable::from_rows(&rows).unwrap();
        let aut = automorphism_group(&t, DEFAULT_BUDGET).unwrap();
        assert!(aut.is_group());
        for f in aut.elements() {
            assert!(is_automorphism(f, &t));
        }
    }

    #[test]
    fn decomposition_examples() {
        let s3 = groups::symmetric3();
        let d = recognize_chein_decomposition(&s3).unwrap();
        assert_eq!(d.subgroup.len(), 3);
        assert_eq!(s3.element_order(d.involution), 2);
        assert!(recognize_chein_decomposition(&groups::quaternion()).is_none());
        let v = groups::direct_product(&groups::cyclic(2), &groups::cyclic(2));
        let d = recognize_chein_decomposition(&v).unwrap();
        assert_eq!(d.subgroup, vec![0, 1]);
        assert_eq!(d.involution, 2);
    }

    #[test]
    fn trichotomy_examples() {
        let v = groups::direct_product(&groups::cyclic(2), &groups::cyclic(2));
        assert_eq!(classify_trichotomy(&v), Trichotomy::Case1);
        assert_eq!(classify_trichotomy(&groups::quaternion()), Trichotomy::Case2);
        match classify_trichotomy(&groups::symmetric3()) {
            Trichotomy::Case3 { decomposition } => {
                let h = decomposition.subgroup_table(&groups::symmetric3());
                assert_eq!(h.order(), 3);
                assert!(h.is_abelian());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn phi_examples() {
        let q = groups::quaternion();
        let l = chein_loop(&q);
        assert_eq!(build_phi_g(&l, 0).unwrap(), Morphism::identity(16));
        for x in 0..8 {
            let f = build_phi_g(&l, x).unwrap();
            assert!(is_automorphism(&f, &l));
            let fixed_in_coset = (8..16).filter(|&y| f.apply(y) == y).count();
            assert_eq!(fixed_in_coset, if x == 0 { 8 } else { 0 });
            let order = (1..=16)
                .find(|&m| (0..m).fold(Morphism::identity(16), |acc, _| acc.compose(&f)) == Morphism::identity(16))
                .unwrap();
            assert_eq!(order, q.element_order(x));
        }
        assert_eq!(build_phi_g(&l, 8), Err(MorphismError::NotInGroup(8)));

        let s3 = groups::symmetric3();
        let l = chein_loop(&s3);
        for a in 0..6 {
            for b in 0..6 {
                let lhs = build_phi_g(&l, a).unwrap().compose(&build_phi_g(&l, b).unwrap());
                assert_eq!(lhs, build_phi_g(&l, s3.mul(a, b)).unwrap());
            }
        }
    }

    #[test]
    fn phi_psi_examples() {
        let q = groups::quaternion();
        let l = chein_loop(&q);
        assert_eq!(
            build_phi_psi(&l, &Morphism::identity(8)).unwrap(),
            Morphism::identity(16)
        );
        let aut = automorphism_group(&q, DEFAULT_BUDGET).unwrap();
        for psi in aut.elements() {
            let f = build_phi_psi(&l, psi).unwrap();
            assert!(is_automorphism(&f, &l));
            let f_inv = f.inverse().unwrap();
            for x in 0..8 {
                let lhs = f.compose(&build_phi_g(&l, x).unwrap()).compose(&f_inv);
                assert_eq!(lhs, build_phi_g(&l, psi.apply(x)).unwrap());
            }
        }
        let swap = Morphism::new(8, vec![0, 2, 1, 3, 4, 5, 6, 7]).unwrap();
        assert!(matches!(
            build_phi_psi(&l, &swap),
            Err(MorphismError::NotAnAutomorphism(_))
        ));
    }

    #[test]
    fn case2_q8() {
        let r = verify_theorem_case2(&groups::quaternion(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.brute_force_order, 192);
        assert!(r.all_passed(), "{:?}", r.checks);
    }

    #[test]
    fn case2_rejects_case3_groups() {
        assert!(matches!(
            verify_theorem_case2(&groups::symmetric3(), DEFAULT_BUDGET),
            Err(MorphismError::Precondition(_))
        ));
        assert!(matches!(
            verify_theorem_case2(&groups::dihedral(4), DEFAULT_BUDGET),
            Err(MorphismError::Precondition(_))
        ));
    }

    #[test]
    fn case3_examples() {
        let r = verify_theorem_case3(&groups::cyclic(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.brute_force_order, 108);
        assert!(r.all_passed(), "{:?}", r.checks);
        let r = verify_theorem_case3(&groups::cyclic(4), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.brute_force_order, 192);
        assert!(r.all_passed(), "{:?}", r.checks);
        assert!(matches!(
            verify_theorem_case3(&groups::cyclic(2), DEFAULT_BUDGET),
            Err(MorphismError::Precondition(_))
        ));
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl2_order(2), 6);
        assert_eq!(gl2_order(3), 168);
    }
}
