//! Loop tables, the Chein doubling `M(G,2)`, and exhaustive identity checks.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::GroupTable;
use crate::table::{
    associativity_witness, check_identity_zero, check_latin, closure_trace, Magma, RawTable, TableError,
};

/// Marks a loop built as `G ⊎ Gu`: elements `0..group_order` are `G` in
/// group numbering, element `group_order + g` is `g·u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupPart {
    pub group_order: usize,
}

impl GroupPart {
    pub fn u(&self) -> usize {
        self.group_order
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.group_order
    }

    /// Index of `g·u`.
    pub fn coset(&self, g: usize) -> usize {
        self.group_order + g
    }
}

/// A finite loop with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTable {
    order: usize,
    product: Vec<u32>,
    labels: Option<Vec<String>>,
    group_part: Option<GroupPart>,
}

impl Magma for LoopTable {
    fn order(&self) -> usize {
        self.order
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b] as usize
    }
}

impl LoopTable {
    /// Validates the quasigroup axiom and that `0` is a two-sided identity.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, TableError> {
        let raw = RawTable::from_rows(rows)?;
        Self::from_magma(&raw)
    }

    pub(crate) fn from_magma<M: Magma>(m: &M) -> Result<Self, TableError> {
        check_latin(m)?;
        check_identity_zero(m)?;
        Ok(Self::copy_unchecked(m))
    }

    fn copy_unchecked<M: Magma>(m: &M) -> Self {
        let order = m.order();
        let mut product = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                product.push(m.mul(a, b) as u32);
            }
        }
        LoopTable {
            order,
            product,
            labels: None,
            group_part: None,
        }
    }

    /// Every group is a loop.
    pub fn from_group(g: &GroupTable) -> Self {
        let mut t = Self::copy_unchecked(g);
        t.labels = g.labels().map(|l| l.to_vec());
        t
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        crate::table::rows_of(self)
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

    pub fn group_part(&self) -> Option<GroupPart> {
        self.group_part
    }

    /// Copy with entry `(x, y)` overwritten. The result may violate the loop
    /// axioms; used for fault injection.
    pub fn corrupted(&self, x: usize, y: usize, value: usize) -> LoopTable {
        let mut t = self.clone();
        t.product[x * self.order + y] = value as u32;
        t
    }

    /// The unique `y` with `x·y = e`.
    pub fn right_inverse(&self, x: usize) -> usize {
        (0..self.order)
            .find(|&y| self.mul(x, y) == 0)
            .expect("loop rows are permutations")
    }

    /// The table restricted to `G` when a group part is present.
    pub fn group_table(&self) -> Option<GroupTable> {
        let gp = self.group_part?;
        let n = gp.group_order;
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect();
        let mut g = GroupTable::from_rows(&rows, None).ok()?;
        if let Some(l) = &self.labels {
            g = g.with_labels(l[..n].to_vec());
        }
        Some(g)
    }

    /// Converts an associative loop into a group table.
    pub fn to_group(&self, generators: Option<Vec<usize>>) -> Result<GroupTable, TableError> {
        let g = GroupTable::from_magma(self, generators)?;
        Ok(match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        })
    }
}

/// `M(G,2)` on `G ⊎ Gu` with
/// `g₁(g₂u) = (g₂g₁)u`, `(g₁u)g₂ = (g₁g₂⁻¹)u`, `(g₁u)(g₂u) = g₂⁻¹g₁`.
pub fn chein_loop(g: &GroupTable) -> LoopTable {
    let n = g.order();
    let order = 2 * n;
    let mut product = vec![0u32; order * order];
    for a in 0..n {
        for b in 0..n {
            product[a * order + b] = g.mul(a, b) as u32;
            product[a * order + n + b] = (n + g.mul(b, a)) as u32;
            product[(n + a) * order + b] = (n + g.mul(a, g.inverse(b))) as u32;
            product[(n + a) * order + n + b] = g.mul(g.inverse(b), a) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| g.label(x))
        .chain((0..n).map(|x| {
            let l = g.label(x);
            if l == "e" {
                "u".to_string()
            } else {
                format!("{l}u")
            }
        }))
        .collect();
    LoopTable {
        order,
        product,
        labels: Some(labels),
        group_part: Some(GroupPart { group_order: n }),
    }
}

pub fn is_quasigroup<M: Magma>(t: &M) -> bool {
    crate::table::is_quasigroup(t)
}

pub fn is_loop<M: Magma>(t: &M) -> bool {
    crate::table::is_loop(t)
}

/// The identities the crate checks exhaustively. Arguments are element
/// indices of the loop in which the identity is evaluated; for the
/// group-based ones they are indices of `G ⊂ M(G,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `z(x(yx)) = ((zx)y)x` at `(x,y,z)`
    M1,
    /// `x(y(xz)) = ((xy)x)z` at `(x,y,z)`
    M2,
    /// `(xy)(zx) = (x(yz))x = x((yz)x)` at `(x,y,z)`
    M3,
    /// `(xy)z = x(yz)` at `(x,y,z)`
    Associativity,
    /// `g₁(g₂u) = (g₂g₁)u` at `(g₁,g₂)`
    C1,
    /// `(g₁u)g₂ = (g₁g₂⁻¹)u` at `(g₁,g₂)`
    C2,
    /// `(g₁u)(g₂u) = g₂⁻¹g₁` at `(g₁,g₂)`
    C3,
    /// `((g₁g₂)u)² = e` at `(g₁,g₂)`, `g₁,g₂ ∈ S ∪ {e}`
    RelatorSquares,
    /// `(uw)u = u(wu) = w⁻¹` at `(w)`
    UConjugationInverts,
    /// `C1` holds at `(g₁,g₂)` exactly when `C2` does
    C1IffC2,
    /// `s_iu = us_i⁻¹` at `(s_i, s_j)`
    GeneratorUInverse,
    /// `s_i(s_ju) = (s_js_i)u` at `(s_i, s_j)`
    GeneratorC1,
    /// `(s_iu)s_j = (s_is_j⁻¹)u` at `(s_i, s_j)`
    GeneratorC2,
    /// `(s_iu)(s_ju) = s_j⁻¹s_i` at `(s_i, s_j)`
    GeneratorC3,
    /// `(us_i)s_j = s_j⁻¹(us_i)` at `(s_i, s_j)`
    GeneratorUCommute,
    /// `u(s₁⋯s_k) = s₁⁻¹(u(s₂⋯s_k))` at the word `(s₁,…,s_k)`
    LeftPeeling,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant serializes");
        f.write_str(s.as_str().expect("string"))
    }
}

impl Identity {
    /// Evaluates the identity at `args` in `t`. Group-based identities need
    /// the group-part marker.
    pub fn holds_at(self, t: &LoopTable, args: &[usize]) -> bool {
        let m = |a, b| t.mul(a, b);
        let inv = |a| t.right_inverse(a);
        let u = || t.group_part().expect("identity requires M(G,2)").u();
        let gp = || t.group_part().expect("identity requires M(G,2)");
        match self {
            Identity::M1 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(z, m(x, m(y, x))) == m(m(m(z, x), y), x)
            }
            Identity::M2 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(x, m(y, m(x, z))) == m(m(m(x, y), x), z)
            }
            Identity::M3 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                let yz = m(y, z);
                let left = m(x, yz);
                let outer = m(left, x);
                m(m(x, y), m(z, x)) == outer && outer == m(x, m(yz, x))
            }
            Identity::Associativity => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(m(x, y), z) == m(x, m(y, z))
            }
            Identity::C1 | Identity::GeneratorC1 => {
                let (a, b) = (args[0], args[1]);
                m(a, gp().coset(b)) == gp().coset(m(b, a))
            }
            Identity::C2 | Identity::GeneratorC2 => {
                let (a, b) = (args[0], args[1]);
                m(gp().coset(a), b) == gp().coset(m(a, inv(b)))
            }
            Identity::C3 | Identity::GeneratorC3 => {
                let (a, b) = (args[0], args[1]);
                m(gp().coset(a), gp().coset(b)) == m(inv(b), a)
            }
            Identity::RelatorSquares => {
                let x = m(m(args[0], args[1]), u());
                m(x, x) == 0
            }
            Identity::UConjugationInverts => {
                let w = args[0];
                let target = inv(w);
                m(m(u(), w), u()) == target && m(u(), m(w, u())) == target
            }
            Identity::C1IffC2 => Identity::C1.holds_at(t, args) == Identity::C2.holds_at(t, args),
            Identity::GeneratorUInverse => {
                let s = args[0];
                m(s, u()) == m(u(), inv(s))
            }
            Identity::GeneratorUCommute => {
                let (si, sj) = (args[0], args[1]);
                let us = m(u(), si);
                m(us, sj) == m(inv(sj), us)
            }
            Identity::LeftPeeling => {
                let word = |ws: &[usize]| ws.iter().fold(0, |acc, &s| m(acc, s));
                let (first, rest) = args.split_first().expect("nonempty word");
                m(u(), word(args)) == m(inv(*first), m(u(), word(rest)))
            }
        }
    }
}

/// Result of checking one identity over its whole domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub holds: bool,
    /// Lexicographically smallest failing argument tuple.
    pub counterexample: Option<Vec<usize>>,
}

impl IdentityReport {
    fn from_search(identity: Identity, counterexample: Option<Vec<usize>>) -> Self {
        IdentityReport {
            identity,
            holds: counterexample.is_none(),
            counterexample,
        }
    }

    /// Re-evaluates the counterexample; `true` when it still fails.
    pub fn replay_fails(&self, t: &LoopTable) -> bool {
        match &self.counterexample {
            Some(args) => !self.identity.holds_at(t, args),
            None => false,
        }
    }

    pub fn to_check(&self) -> crate::check::Check {
        crate::check::Check::from_witness(
            self.identity.to_string(),
            self.counterexample.as_ref().map(|c| format!("{c:?}")),
        )
    }
}

fn search_triples(t: &LoopTable, id: Identity) -> IdentityReport {
    let n = t.order();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !id.holds_at(t, &[x, y, z]) {
                    return IdentityReport::from_search(id, Some(vec![x, y, z]));
                }
            }
        }
    }
    IdentityReport::from_search(id, None)
}

fn search_tuples(t: &LoopTable, id: Identity, domain: &[usize], arity: usize) -> IdentityReport {
    let mut idx = vec![0usize; arity];
    if domain.is_empty() {
        return IdentityReport::from_search(id, None);
    }
    loop {
        let args: Vec<usize> = idx.iter().map(|&i| domain[i]).collect();
        if !id.holds_at(t, &args) {
            return IdentityReport::from_search(id, Some(args));
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return IdentityReport::from_search(id, None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The three Moufang identities over all `|t|³` triples, each separately.
pub fn is_moufang(t: &LoopTable) -> [IdentityReport; 3] {
    [
        search_triples(t, Identity::M1),
        search_triples(t, Identity::M2),
        search_triples(t, Identity::M3),
    ]
}

pub fn is_associative(t: &LoopTable) -> IdentityReport {
    let witness = associativity_witness(t).map(|(x, y, z)| vec![x, y, z]);
    IdentityReport::from_search(Identity::Associativity, witness)
}

/// Smallest subloop containing `seeds`, ascending.
pub fn subloop_closure<M: Magma>(t: &M, seeds: &[usize]) -> Vec<usize> {
    let mut members = closure_trace(t, seeds).members;
    members.sort_unstable();
    members
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("loop carries no group-part marker")]
    MissingGroupPart,
}

/// `(c1)`, `(c2)`, `(c3)` for all pairs `g₁, g₂ ∈ G`.
pub fn verify_chein_identities(t: &LoopTable) -> Result<[IdentityReport; 3], LoopError> {
    let gp = t.group_part().ok_or(LoopError::MissingGroupPart)?;
    let group: Vec<usize> = (0..gp.group_order).collect();
    Ok([
        search_tuples(t, Identity::C1, &group, 2),
        search_tuples(t, Identity::C2, &group, 2),
        search_tuples(t, Identity::C3, &group, 2),
    ])
}

/// Longest generator word used by the left-peeling check.
pub const PEELING_WORD_LENGTH: usize = 4;

/// Builds `L = M(g,2)` and checks the identities derived from the Chein
/// relators on the generator set of `g`.
pub fn verify_section2_identities(g: &GroupTable) -> Vec<IdentityReport> {
    let l = chein_loop(g);
    let gens = g.generators().to_vec();
    let mut with_e = vec![0];
    with_e.extend(gens.iter().copied());
    let group: Vec<usize> = (0..g.order()).collect();

    let mut out = vec![
        search_tuples(&l, Identity::RelatorSquares, &with_e, 2),
        search_tuples(&l, Identity::UConjugationInverts, &group, 1),
        search_tuples(&l, Identity::C1, &group, 2),
        search_tuples(&l, Identity::C2, &group, 2),
        search_tuples(&l, Identity::C3, &group, 2),
        search_tuples(&l, Identity::C1IffC2, &group, 2),
        search_tuples(&l, Identity::GeneratorUInverse, &gens, 2),
        search_tuples(&l, Identity::GeneratorC1, &gens, 2),
        search_tuples(&l, Identity::GeneratorC2, &gens, 2),
        search_tuples(&l, Identity::GeneratorC3, &gens, 2),
        search_tuples(&l, Identity::GeneratorUCommute, &gens, 2),
    ];
    let mut peeling = IdentityReport::from_search(Identity::LeftPeeling, None);
    'len: for k in 1..=PEELING_WORD_LENGTH {
        let r = search_tuples(&l, Identity::LeftPeeling, &gens, k);
        if !r.holds {
            peeling = r;
            break 'len;
        }
    }
    out.push(peeling);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{enumerate_group, CoxeterDiagram};
    use crate::groups;

    #[test]
    fn trivial_group_doubles_to_z2() {
        let l = chein_loop(&groups::cyclic(1));
        assert_eq!(l.rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn z3_doubles_to_nonabelian_group() {
        let l = chein_loop(&groups::cyclic(3));
        assert_eq!(l.order(), 6);
        assert!(is_associative(&l).holds);
        assert!(!crate::table::is_commutative(&l));
    }

    #[test]
    fn s3_doubles_to_nonassociative_moufang_loop() {
        let l = chein_loop(&groups::symmetric3());
        assert_eq!(l.order(), 12);
        assert!(is_loop(&l));
        assert!(is_moufang(&l).iter().all(|r| r.holds));
        let a = is_associative(&l);
        assert!(!a.holds);
        assert!(a.replay_fails(&l));
    }

    #[test]
    fn order5_latin_square_is_not_moufang() {
        let rows: Vec<Vec<usize>> = ["12345", "21453", "34512", "45231", "53124"]
            .iter()
            .map(|r| r.bytes().map(|b| (b - b'1') as usize).collect())
            .collect();
        let t = LoopTable::from_rows(&rows).unwrap();
        let reports = is_moufang(&t);
        assert!(reports.iter().any(|r| !r.holds));
        for r in reports.iter().filter(|r| !r.holds) {
            assert!(r.replay_fails(&t));
        }
    }

    #[test]
    fn quasigroup_checks() {
        assert!(is_loop(&groups::quaternion()));
        let bad = RawTable::from_rows(&[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!is_quasigroup(&bad));
    }

    #[test]
    fn closure_examples() {
        let l = chein_loop(&groups::symmetric3());
        assert_eq!(subloop_closure(&l, &[]), vec![0]);
        let u = l.group_part().unwrap().u();
        assert_eq!(subloop_closure(&l, &[u]), vec![0, u]);

        let w = enumerate_group(&CoxeterDiagram::type_a(2), 100).unwrap();
        let l = chein_loop(&w);
        let mut seeds = w.generators().to_vec();
        seeds.push(l.group_part().unwrap().u());
        assert_eq!(subloop_closure(&l, &seeds).len(), 12);
    }

    #[test]
    fn chein_identities_and_fault_injection() {
        for g in [groups::cyclic(3), groups::symmetric3()] {
            let l = chein_loop(&g);
            assert!(verify_chein_identities(&l).unwrap().iter().all(|r| r.holds));
        }
        let l = chein_loop(&groups::symmetric3());
        let n = 6;
        // (g1 u)(g2 u) at g1 = 2, g2 = 4
        let bad = l.corrupted(n + 2, n + 4, 0);
        let [c1, c2, c3] = verify_chein_identities(&bad).unwrap();
        assert!(c1.holds && c2.holds);
        assert_eq!(c3.counterexample, Some(vec![2, 4]));
        assert!(c3.replay_fails(&bad));
        assert_eq!(
            verify_chein_identities(&LoopTable::from_group(&groups::cyclic(2))),
            Err(LoopError::MissingGroupPart)
        );
    }

    #[test]
    fn section2_identities_on_small_coxeter_groups() {
        for m in [3, 4, 5] {
            let w = enumerate_group(&CoxeterDiagram::dihedral(m.into()).unwrap(), 100).unwrap();
            let reports = verify_section2_identities(&w);
            assert_eq!(reports.len(), 12);
            assert!(reports.iter().all(|r| r.holds), "{reports:?}");
        }
    }
}
