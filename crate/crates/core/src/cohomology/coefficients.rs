//! The coefficient system `A_σ = ⋂_{ρ>σ} Stab_{Aut(G_σ)}(G_ρ)` of the
//! standard amalgam, in closed form and by brute force.

use serde::Serialize;
use thiserror::Error;

use crate::amalgams::{gamma, Amalgam};
use crate::check::Check;
use crate::morphisms::{automorphism_group, is_automorphism, AutGroup, Morphism, MorphismError};
use crate::table::Magma;

use super::Simplex;

/// Largest `|G_σ|` for which the brute-force stabilizer is computed.
pub const DEFAULT_ORDER_BUDGET: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheckMode {
    ClosedForm,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("G_sigma has order {order}, above the brute-force limit {limit}")]
    OrderBudget { order: usize, limit: usize },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientGroup {
    pub simplex: Simplex,
    /// `⋂_{e∈σ} e`, 1-based.
    pub common_vertices: Vec<usize>,
    pub loop_order: usize,
    /// `1` or `2`.
    pub closed_form_order: usize,
    /// The cofaces the closed form relies on are present: for `σ = {e}`,
    /// `e = {i,j}`, cofaces with common vertex sets `{i}`, `{j}` and `∅`;
    /// for `|J| = 1`, a coface with `J = ∅`.
    pub hypotheses_hold: bool,
    /// `γ_J`, when `J ≠ ∅`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<Morphism>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_order: Option<usize>,
    /// Why brute force was not run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub checks: Vec<Check>,
}

impl CoefficientGroup {
    pub fn all_passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

fn image_of(f: &Morphism) -> Vec<usize> {
    f.image_set()
}

/// Automorphisms of `G_σ` preserving the image of every coface.
pub fn brute_force_stabilizer(a: &Amalgam, simplex: usize, budget: u64) -> Result<AutGroup, MorphismError> {
    let c = a.complex();
    let sigma = &c.simplices()[simplex];
    let mut aut = automorphism_group(&a.member(simplex).table, budget)?;
    for rho in c.cofaces(sigma) {
        let r = c.index_of(&rho).expect("coface in complex");
        let f = a.map(simplex, r).expect("face map");
        aut = aut.setwise_stabilizer(&image_of(f));
    }
    Ok(aut)
}

/// `A_σ`: trivial when `J = ∅`, otherwise `⟨γ_J⟩ ≅ Z2` where `γ_J` sends
/// `s_j ↦ s_j s_∞` for `j ∈ J` and fixes `s_∞`. In brute-force mode the
/// stabilizer is computed from `Aut(G_σ)` and compared as a set.
pub fn coefficient_group(
    a: &Amalgam,
    simplex: usize,
    mode: CrossCheckMode,
    budget: u64,
) -> Result<CoefficientGroup, CoefficientError> {
    let member = a.member(simplex);
    let t = &member.table;
    let n = t.order();
    if mode == CrossCheckMode::BruteForce && n > DEFAULT_ORDER_BUDGET {
        return Err(CoefficientError::OrderBudget {
            order: n,
            limit: DEFAULT_ORDER_BUDGET,
        });
    }
    let c = a.complex();
    let sigma = c.simplices()[simplex].clone();
    let vertices = member.vertices.clone();
    let mut checks = Vec::new();
    let generator = (!vertices.is_empty()).then(|| gamma(member, &vertices));
    let generator_name = generator.as_ref().map(|_| {
        let idx: String = vertices.iter().map(|v| (v + 1).to_string()).collect();
        format!("gamma_{idx}")
    });
    let coface_sets: Vec<Vec<usize>> = c.cofaces(&sigma).iter().map(|rho| c.common_vertices(rho)).collect();
    let hypotheses_hold = match vertices.as_slice() {
        [] => true,
        &[i, j] => [vec![i], vec![j], vec![]].iter().all(|need| coface_sets.contains(need)),
        _ => coface_sets.iter().any(|s| s.is_empty()),
    };
    let identity = Morphism::identity(n);
    let mut closed = vec![identity.clone()];

    if let Some(g) = &generator {
        closed.push(g.clone());
        checks.push(Check::from_witness(
            "generator_is_automorphism",
            (!is_automorphism(g, t)).then(|| format!("{:?}", g.image())),
        ));
        checks.push(Check::expect_eq(
            "generator_is_involution",
            g.compose(g) == identity && *g != identity,
            true,
        ));
        let u = member.u();
        let mut action = Check::expect_eq("generator_fixes_u", g.apply(u), u);
        for (&j, &s) in vertices.iter().zip(&member.generators) {
            if g.apply(s) != t.mul(s, u) {
                action = Check::fail(
                    "generator_swaps_s_and_su",
                    format!("s{} maps to {}", j + 1, t.label(g.apply(s))),
                );
            }
        }
        checks.push(action);
        if let [si, sj, _] = member.generators[..] {
            checks.push(Check::expect_eq(
                "generator_inverts_h",
                g.apply(t.mul(si, sj)),
                t.mul(sj, si),
            ));
        }
        let moved = c.cofaces(&sigma).into_iter().find(|rho| {
            let f = a.map(simplex, c.index_of(rho).expect("coface")).expect("face map");
            let img = image_of(f);
            img.iter()
                .map(|&x| g.apply(x))
                .collect::<std::collections::BTreeSet<_>>()
                != img.iter().copied().collect()
        });
        checks.push(Check::from_witness(
            "generator_stabilizes_cofaces",
            moved.map(|rho| format!("moves G_{rho:?}")),
        ));
        let mut bad_restriction = None;
        for rho in c.cofaces(&sigma) {
            let r = c.index_of(&rho).expect("coface");
            let psi = a.map(simplex, r).expect("face map");
            let image: Option<Vec<usize>> = psi.image().iter().map(|&x| psi.preimage(g.apply(x))).collect();
            let expected = {
                let m = a.member(r);
                if m.vertices.is_empty() {
                    Morphism::identity(m.table.order())
                } else {
                    gamma(m, &m.vertices)
                }
            };
            if image.as_deref() != Some(expected.image()) {
                bad_restriction.get_or_insert_with(|| format!("restriction to G_{rho:?}"));
            }
        }
        checks.push(Check::from_witness("restriction_to_cofaces", bad_restriction));
    }

    let (brute_force_order, skipped) = match mode {
        CrossCheckMode::ClosedForm => (None, Some("cross-check disabled".to_string())),
        CrossCheckMode::BruteForce => {
            let stab = brute_force_stabilizer(a, simplex, budget)?;
            let expected = AutGroup::from_elements(closed.clone());
            let witness = (stab != expected).then(|| {
                let mut w = format!(
                    "brute-force A_sigma has order {}, closed form {}",
                    stab.order(),
                    expected.order()
                );
                if let Some(f) = stab.elements().iter().find(|f| !expected.contains(f)) {
                    w.push_str(&format!("; first extra element {:?}", f.image()));
                }
                w
            });
            checks.push(Check::from_witness("closed_form_equals_brute_force", witness));
            (Some(stab.order()), None)
        }
    };

    Ok(CoefficientGroup {
        simplex: sigma,
        common_vertices: vertices.iter().map(|v| v + 1).collect(),
        loop_order: n,
        closed_form_order: closed.len(),
        hypotheses_hold,
        generator,
        generator_name,
        brute_force_order,
        skipped,
        checks,
    })
}

/// `A_σ` for every simplex; loops above the order limit fall back to the
/// closed form with the reason recorded.
pub fn coefficient_system(
    a: &Amalgam,
    mode: CrossCheckMode,
    budget: u64,
) -> Result<Vec<CoefficientGroup>, CoefficientError> {
    (0..a.members().len())
        .map(|s| match coefficient_group(a, s, mode, budget) {
            Err(CoefficientError::OrderBudget { order, limit }) => {
                let mut g = coefficient_group(a, s, CrossCheckMode::ClosedForm, budget)?;
                g.skipped = Some(format!("loop order {order} exceeds brute-force limit {limit}"));
                Ok(g)
            }
            other => other,
        })
        .collect()
}
