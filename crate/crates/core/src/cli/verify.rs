//! The built-in verification corpus run by `verify` without an input.

use serde_json::{json, Value};

use super::{
    amalgam_section, aut_section, cohomology_section, loop_section, sphericity_value, RunConfig, RunError, Section,
};
use crate::amalgams::standard_amalgam;
use crate::check::Check;
use crate::cohomology::{coefficient_system, Graph};
use crate::coxeter::{enumerate_group, recognize_spherical, underlying_graph, CoxeterDiagram, Label};
use crate::groups::corpus;
use crate::table::Magma;

/// Largest `|W|` whose loop identities are checked exhaustively.
const LOOP_LIMIT: usize = 120;
/// Largest `|W|` whose loop automorphism group is searched.
const AUT_LIMIT: usize = 24;
/// Graphs on up to this many vertices are enumerated exhaustively.
const GRAPH_VERTICES: usize = 5;

fn diagram(rank: usize, edges: &[(usize, usize, u32)]) -> CoxeterDiagram {
    let edges: Vec<_> = edges.iter().map(|&(i, j, m)| (i, j, Label::Finite(m))).collect();
    CoxeterDiagram::from_edges(rank, &edges).expect("built-in diagram is valid")
}

pub(crate) fn builtin_diagrams() -> Vec<(&'static str, CoxeterDiagram)> {
    vec![
        ("A1", CoxeterDiagram::type_a(1)),
        ("A2", CoxeterDiagram::type_a(2)),
        ("A3", CoxeterDiagram::type_a(3)),
        ("A4", CoxeterDiagram::type_a(4)),
        ("B2", diagram(2, &[(0, 1, 4)])),
        ("B3", diagram(3, &[(0, 1, 4), (1, 2, 3)])),
        ("I2(5)", diagram(2, &[(0, 1, 5)])),
        ("I2(6)", diagram(2, &[(0, 1, 6)])),
        ("H3", diagram(3, &[(0, 1, 5), (1, 2, 3)])),
        ("triangle", diagram(3, &[(0, 1, 3), (0, 2, 3), (1, 2, 3)])),
        ("square", diagram(4, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (0, 3, 3)])),
        (
            "two_triangles",
            diagram(5, &[(0, 1, 3), (0, 2, 3), (1, 2, 3), (1, 3, 3), (2, 4, 3), (3, 4, 3)]),
        ),
    ]
}

/// Every simple graph on `n` labelled vertices, edges in lexicographic
/// order, indexed by bitmask.
pub(crate) fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::new(n, &edges).expect("valid graph")
    })
}

fn groups_section(cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    for (name, g) in corpus() {
        let mut sub = loop_section(&g, true);
        let aut = aut_section(&g, cfg.budget)?;
        sub.absorb("aut", aut);
        s.absorb(&name, sub);
    }
    Ok(s)
}

fn diagram_section(name: &str, d: &CoxeterDiagram, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    let sph = recognize_spherical(d);
    s.set("sphericity", sphericity_value(&sph));
    if let Some(order) = sph.predicted_order().filter(|&o| o <= cfg.cap as u128) {
        let g = enumerate_group(d, cfg.cap)?;
        s.checks.push(Check::expect_eq(
            "order_matches_classification",
            g.order() as u128,
            order,
        ));
        if g.order() <= LOOP_LIMIT {
            s.absorb("loop", loop_section(&g, false));
        }
        if g.order() <= AUT_LIMIT {
            s.absorb("aut", aut_section(&g, cfg.budget)?);
        }
    }
    let graph = underlying_graph(d);
    s.absorb("cohomology", cohomology_section(&graph, false));
    if d.is_two_spherical() && !graph.edges().is_empty() {
        s.absorb("amalgams", amalgam_section(d, cfg)?);
        let (coeff, findings) = coefficient_findings(name, d, cfg)?;
        s.absorb("coefficients", coeff);
        s.notes.extend(findings);
    }
    Ok(s)
}

/// Coefficient checks for the simplices whose cofaces support the closed
/// form; the others are reported as findings with both orders.
pub(crate) fn coefficient_findings(
    name: &str,
    d: &CoxeterDiagram,
    cfg: &RunConfig,
) -> Result<(Section, Vec<String>), RunError> {
    let mut s = Section::default();
    let mut findings = Vec::new();
    let a = standard_amalgam(d)?;
    let mut checked = 0;
    for g in coefficient_system(&a, cfg.mode(), cfg.budget)? {
        if g.hypotheses_hold {
            checked += 1;
            let key: Vec<String> = g.simplex.iter().map(|e| e.to_string()).collect();
            s.push(&format!("A[{}]", key.join(",")), g.checks);
        } else if let Some(b) = g.brute_force_order.filter(|&b| b != g.closed_form_order) {
            findings.push(format!(
                "{name}: A_sigma for simplex {:?} (J = {:?}) has brute-force order {b}, closed form {}; the cofaces the closed form needs are absent",
                g.simplex, g.common_vertices, g.closed_form_order
            ));
        }
    }
    s.set("checked_simplices", json!(checked));
    s.set("findings", json!(findings.len()));
    Ok((s, findings))
}

fn graphs_section() -> Section {
    let mut s = Section::default();
    let mut counts = serde_json::Map::new();
    for n in 1..=GRAPH_VERTICES {
        let mut failed = None;
        let mut total = 0;
        for g in all_graphs(n) {
            total += 1;
            let sub = cohomology_section(&g, false);
            if let Some(c) = sub.checks.iter().find(|c| !c.passed) {
                failed.get_or_insert_with(|| format!("{:?}: {}", g.edges(), c.name));
            }
        }
        counts.insert(n.to_string(), Value::from(total));
        s.checks
            .push(Check::from_witness(format!("all_graphs_on_{n}_vertices"), failed));
    }
    s.set("graphs", Value::Object(counts));
    s
}

pub(crate) fn builtin_suite(cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    s.absorb("groups", groups_section(cfg)?);
    let mut diagrams = Section::default();
    for (name, d) in builtin_diagrams() {
        diagrams.absorb(name, diagram_section(name, &d, cfg)?);
    }
    s.absorb("diagrams", diagrams);
    s.absorb("graphs", graphs_section());
    Ok(s)
}
