//! Command dispatch, reports and exit codes for the `coxeter-chein` binary.

mod parse;
mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use parse::{parse_input, Input, ParseError};

use crate::amalgams::{classify_amalgams, standard_amalgam, AmalgamError};
use crate::check::{all_passed, Check};
use crate::cohomology::gf2::BitMatrix;
use crate::cohomology::{coefficient_system, cohomology, CoefficientError, CohomologyError, CrossCheckMode, Graph};
use crate::coxeter::{
    enumerate_group, recognize_spherical, underlying_graph, CoxeterDiagram, EnumerationError, GroupTable, Label,
    Sphericity, DEFAULT_CAP,
};
use crate::loop_core::{
    chein_loop, is_associative, is_loop, is_moufang, verify_chein_identities, verify_section2_identities, LoopTable,
};
use crate::morphisms::{
    automorphism_group, classify_trichotomy, gl2_order, verify_theorem_case2, verify_theorem_case3, MorphismError,
    Trichotomy, DEFAULT_BUDGET,
};
use crate::table::Magma;

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Validate the input and echo it in normalized form.
    Parse,
    /// Enumerate W (or check a group table).
    Group,
    /// Build M(G,2) and check the loop, Moufang and Chein identities.
    Loop,
    /// Brute-force Aut(M(G,2)) and verify the matching structure theorem.
    Aut,
    /// GF(2) cohomology of the underlying graph.
    Cohomology,
    /// Classify the amalgams of type G by H^1.
    Amalgams,
    /// Run every applicable pipeline; the built-in corpus when no input is given.
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Parse => "parse",
            Command::Group => "group",
            Command::Loop => "loop",
            Command::Aut => "aut",
            Command::Cohomology => "cohomology",
            Command::Amalgams => "amalgams",
            Command::Verify => "verify",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Command as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` for stdin, otherwise a file path; ignored when text is supplied.
    pub input: Option<PathBuf>,
    pub cap: usize,
    pub budget: u64,
    pub strict: bool,
    pub cross_check: bool,
    pub json: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            cap: DEFAULT_CAP,
            budget: DEFAULT_BUDGET,
            strict: false,
            cross_check: true,
            json: false,
        }
    }

    fn mode(&self) -> CrossCheckMode {
        if self.cross_check {
            CrossCheckMode::BruteForce
        } else {
            CrossCheckMode::ClosedForm
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    Io(String),
    Parse(ParseError),
    /// Input parsed but is the wrong kind for the command.
    Unsupported(String),
    Resource(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => EXIT_IO,
            RunError::Parse(_) | RunError::Unsupported(_) => EXIT_PARSE,
            RunError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Io(m) => write!(f, "i/o error: {m}"),
            RunError::Parse(e) => write!(f, "parse error at {e}"),
            RunError::Unsupported(m) => write!(f, "unsupported input: {m}"),
            RunError::Resource(m) => write!(f, "resource limit: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<EnumerationError> for RunError {
    fn from(e: EnumerationError) -> Self {
        RunError::Resource(e.to_string())
    }
}

impl From<MorphismError> for RunError {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::BudgetExceeded { .. } => RunError::Resource(e.to_string()),
            other => RunError::Unsupported(other.to_string()),
        }
    }
}

impl From<AmalgamError> for RunError {
    fn from(e: AmalgamError) -> Self {
        match e {
            AmalgamError::BudgetExceeded { .. } => RunError::Resource(e.to_string()),
            AmalgamError::Morphism(m) => m.into(),
            AmalgamError::Enumeration(m) => m.into(),
            other => RunError::Unsupported(other.to_string()),
        }
    }
}

impl From<CoefficientError> for RunError {
    fn from(e: CoefficientError) -> Self {
        match e {
            CoefficientError::Morphism(m) => m.into(),
            other => RunError::Resource(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Hex SHA-256 of the input bytes; absent for the built-in corpus.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub cap: usize,
    pub budget: u64,
    pub strict: bool,
    pub cross_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Command,
    pub input: InputInfo,
    pub config: ConfigEcho,
    pub passed: bool,
    pub summary: Value,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.as_str());
        match (&self.input.kind, &self.input.sha256) {
            (Some(k), Some(h)) => {
                let _ = writeln!(out, "input: {k} (sha256 {h})");
            }
            _ => {
                let _ = writeln!(out, "input: built-in corpus");
            }
        }
        let _ = writeln!(out, "summary:");
        flatten(&self.summary, "", &mut out);
        if !self.notes.is_empty() {
            let _ = writeln!(out, "notes:");
            for n in &self.notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "checks: {} passed, {} failed", self.checks.len() - failed, failed);
        for c in &self.checks {
            match &c.witness {
                None => {
                    let _ = writeln!(out, "  PASS {}", c.name);
                }
                Some(w) => {
                    let _ = writeln!(out, "  {} {}: {w}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                }
            }
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(x, &key, out);
            }
        }
        other => {
            let _ = writeln!(out, "  {prefix}: {other}");
        }
    }
}

/// Summary, checks and notes of one pipeline.
#[derive(Debug, Clone, Default)]
pub(crate) struct Section {
    pub summary: serde_json::Map<String, Value>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Section {
    fn set(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    fn push(&mut self, prefix: &str, checks: impl IntoIterator<Item = Check>) {
        for mut c in checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    /// Nests `other` under `key`, prefixing its check names.
    fn absorb(&mut self, key: &str, other: Section) {
        self.summary.insert(key.to_string(), Value::Object(other.summary));
        self.push(key, other.checks);
        self.notes
            .extend(other.notes.into_iter().map(|n| format!("{key}: {n}")));
    }
}

/// Serializes `u128` orders as numbers when they fit, else as strings.
pub(crate) fn big(n: u128) -> Value {
    u64::try_from(n)
        .map(Value::from)
        .unwrap_or_else(|_| Value::from(n.to_string()))
}

fn label_value(l: Label) -> Value {
    match l {
        Label::Finite(m) => json!(m),
        Label::Infinite => json!("inf"),
    }
}

pub(crate) fn sphericity_value(s: &Sphericity) -> Value {
    match s {
        Sphericity::Spherical { components, order } => json!({
            "spherical": true,
            "components": components.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "order": big(*order),
        }),
        Sphericity::NonSpherical { reason } => json!({ "spherical": false, "reason": reason }),
    }
}

fn diagram_value(d: &CoxeterDiagram) -> Value {
    let mut edges = Vec::new();
    for i in 0..d.rank() {
        for j in i + 1..d.rank() {
            if d.label(i, j).is_edge() {
                edges.push(json!([i + 1, j + 1, label_value(d.label(i, j))]));
            }
        }
    }
    json!({ "rank": d.rank(), "edges": edges, "two_spherical": d.is_two_spherical() })
}

fn graph_value(g: &Graph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edges().iter().map(|&(a, b)| json!([a + 1, b + 1])).collect::<Vec<_>>(),
    })
}

fn bits(m: &BitMatrix) -> Value {
    Value::from(m.rows().iter().map(|r| r.to_string()).collect::<Vec<_>>())
}

fn non_spherical_note(d: &CoxeterDiagram) -> Option<String> {
    (d.is_two_spherical() && !recognize_spherical(d).is_spherical()).then(|| {
        "diagram is 2-spherical but not spherical: rank-2 parabolics are finite, W itself is infinite".to_string()
    })
}

/// The group behind a loop command: `W` for a diagram, the table itself for
/// an associative table, `None` for a non-associative loop table.
fn group_of(input: &Input, cfg: &RunConfig) -> Result<Option<GroupTable>, RunError> {
    match input {
        Input::Diagram(d) => Ok(Some(enumerate_group(d, cfg.cap)?)),
        Input::Table(t) => Ok(t.to_group(None).ok()),
        Input::Graph(_) => Err(RunError::Unsupported(format!(
            "`{}` needs a `coxeter v1` or `table v1` input, got a graph",
            cfg.command.as_str()
        ))),
    }
}

fn cmd_parse(input: &Input) -> Section {
    let mut s = Section::default();
    s.set("kind", json!(input.kind()));
    match input {
        Input::Diagram(d) => {
            s.set("diagram", diagram_value(d));
            s.set("sphericity", sphericity_value(&recognize_spherical(d)));
        }
        Input::Graph(g) => {
            s.set("graph", graph_value(g));
            s.set("connected", json!(g.is_connected()));
        }
        Input::Table(t) => {
            s.set("order", json!(t.order()));
            s.set("associative", json!(is_associative(t).holds));
            s.set("commutative", json!(crate::table::is_commutative(t)));
        }
    }
    s.checks.push(Check::pass("input_valid"));
    s
}

fn cmd_group(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    match input {
        Input::Diagram(d) => {
            let sph = recognize_spherical(d);
            s.set("sphericity", sphericity_value(&sph));
            let g = enumerate_group(d, cfg.cap)?;
            s.set("order", json!(g.order()));
            if let Some(p) = sph.predicted_order() {
                s.checks
                    .push(Check::expect_eq("order_matches_classification", g.order() as u128, p));
            }
            let mut bad = None;
            'rel: for i in 0..d.rank() {
                for j in 0..d.rank() {
                    let x = g.mul(g.generators()[i], g.generators()[j]);
                    let expected = d.label(i, j).finite().map(|m| m as usize);
                    if Some(g.element_order(x)) != expected {
                        bad = Some(format!("s{}s{} has order {}", i + 1, j + 1, g.element_order(x)));
                        break 'rel;
                    }
                }
            }
            s.checks.push(Check::from_witness("coxeter_relations", bad));
            if g.order() <= 64 {
                s.set(
                    "elements",
                    json!((0..g.order()).map(|x| g.label(x)).collect::<Vec<_>>()),
                );
            }
            s.set("abelian", json!(g.is_abelian()));
        }
        Input::Table(t) => {
            let assoc = is_associative(t);
            s.set("order", json!(t.order()));
            s.checks.push(assoc.to_check());
            if let Ok(g) = t.to_group(None) {
                s.set("abelian", json!(g.is_abelian()));
                s.set(
                    "element_orders",
                    json!((0..g.order()).map(|x| g.element_order(x)).collect::<Vec<_>>()),
                );
            }
        }
        Input::Graph(_) => {
            return Err(RunError::Unsupported(
                "`group` needs a `coxeter v1` or `table v1` input".into(),
            ));
        }
    }
    Ok(s)
}

/// Loop, Moufang and Chein identity checks on `M(G,2)`.
pub(crate) fn loop_section(g: &GroupTable, relations: bool) -> Section {
    let mut s = Section::default();
    let l = chein_loop(g);
    s.set("group_order", json!(g.order()));
    s.set("loop_order", json!(l.order()));
    s.checks.push(Check::expect_eq("is_loop", is_loop(&l), true));
    s.checks.extend(is_moufang(&l).iter().map(|r| r.to_check()));
    let chein = verify_chein_identities(&l).expect("chein loop carries its group part");
    s.checks.extend(chein.iter().map(|r| r.to_check()));
    let assoc = is_associative(&l);
    s.set("associative", json!(assoc.holds));
    if let Some(c) = &assoc.counterexample {
        s.set(
            "associativity_counterexample",
            json!(c.iter().map(|&x| l.label(x)).collect::<Vec<_>>()),
        );
    }
    s.checks.push(Check::from_witness(
        "associative_iff_abelian",
        (assoc.holds != g.is_abelian()).then(|| format!("associative = {}, abelian = {}", assoc.holds, g.is_abelian())),
    ));
    if relations {
        let mut sub = Section::default();
        sub.checks
            .extend(verify_section2_identities(g).iter().map(|r| r.to_check()));
        s.push("relations", sub.checks);
    }
    s
}

fn non_group_loop_section(t: &LoopTable) -> Section {
    let mut s = Section::default();
    s.set("loop_order", json!(t.order()));
    s.checks.push(Check::expect_eq("is_loop", is_loop(t), true));
    let moufang = is_moufang(t);
    s.set("moufang", json!(moufang.iter().all(|r| r.holds)));
    s.checks.extend(moufang.iter().map(|r| r.to_check()));
    s.set("associative", json!(false));
    s
}

fn cmd_loop(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = match group_of(input, cfg)? {
        Some(g) => loop_section(&g, true),
        None => match input {
            Input::Table(t) => {
                let mut s = non_group_loop_section(t);
                s.notes
                    .push("table is not associative, so the identities are checked on the table itself".into());
                s
            }
            _ => unreachable!("only tables can be non-associative"),
        },
    };
    if let Input::Diagram(d) = input {
        s.set("sphericity", sphericity_value(&recognize_spherical(d)));
    }
    Ok(s)
}

/// Brute-force `Aut(M(G,2))` with the matching theorem check.
pub(crate) fn aut_section(g: &GroupTable, budget: u64) -> Result<Section, RunError> {
    let mut s = Section::default();
    let l = chein_loop(g);
    let aut_g = automorphism_group(g, budget)?;
    let aut_l = automorphism_group(&l, budget)?;
    s.set("group_order", json!(g.order()));
    s.set("aut_group_order", json!(aut_g.order()));
    s.set("aut_loop_order", json!(aut_l.order()));
    s.checks
        .push(Check::expect_eq("aut_loop_is_group", aut_l.is_group(), true));
    match classify_trichotomy(g) {
        Trichotomy::Case1 => {
            s.set("case", json!("case1"));
            let n = l.order().trailing_zeros();
            s.checks
                .push(Check::expect_eq("aut_is_gl_n_2", aut_l.order() as u128, gl2_order(n)));
        }
        Trichotomy::Case2 => {
            s.set("case", json!("case2"));
            let r = verify_theorem_case2(g, budget)?;
            s.set("formula_order", json!(r.formula_order));
            s.set("constructed_order", json!(r.constructed_order));
            s.push("case2", r.checks);
        }
        Trichotomy::Case3 { decomposition } => {
            s.set("case", json!("case3"));
            let h = decomposition.subgroup_table(g);
            s.set("h_order", json!(h.order()));
            let r = verify_theorem_case3(&h, budget)?;
            s.set("formula_order", json!(r.formula_order));
            s.set("constructed_order", json!(r.constructed_order));
            s.checks.push(Check::expect_eq(
                "aut_loop_matches_formula",
                aut_l.order(),
                r.formula_order,
            ));
            s.push("case3", r.checks);
            s.notes
                .push("case 3 is verified on M(M(H,2),2), which is isomorphic to M(G,2)".into());
        }
    }
    Ok(s)
}

fn cmd_aut(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    match group_of(input, cfg)? {
        Some(g) => aut_section(&g, cfg.budget),
        None => {
            let Input::Table(t) = input else {
                unreachable!("only tables can be non-associative")
            };
            let mut s = Section::default();
            let aut = automorphism_group(t, cfg.budget)?;
            s.set("loop_order", json!(t.order()));
            s.set("aut_loop_order", json!(aut.order()));
            s.checks
                .push(Check::expect_eq("aut_loop_is_group", aut.is_group(), true));
            Ok(s)
        }
    }
}

pub(crate) fn cohomology_section(g: &Graph, strict: bool) -> Section {
    let mut s = Section::default();
    s.set("graph", graph_value(g));
    let r = match cohomology(g, strict) {
        Ok(r) => r,
        Err(CohomologyError::Disconnected { components }) => {
            s.checks.push(Check::fail(
                "connected",
                format!("{components} components with edges; strict mode requires a connected graph"),
            ));
            return s;
        }
        Err(e) => {
            s.checks.push(Check::fail("cohomology", e.to_string()));
            return s;
        }
    };
    s.set(
        "dims",
        json!({
            "c0": r.dim_c0, "c1": r.dim_c1, "c2": r.dim_c2,
            "z1": r.dim_z1, "b1": r.dim_b1, "h1": r.dim_h1,
        }),
    );
    s.set("components", json!(r.components));
    s.set("n", json!(r.tree.non_tree.len()));
    let edge = |e: usize| {
        let (a, b) = g.edges()[e];
        json!([a + 1, b + 1])
    };
    s.set(
        "tree_edges",
        Value::from(r.tree.tree_edges.iter().map(|&e| edge(e)).collect::<Vec<_>>()),
    );
    s.set(
        "non_tree_edges",
        Value::from(
            r.tree
                .non_tree
                .iter()
                .map(|e| json!({ "edge": edge(e.edge), "origin": e.origin + 1, "terminus": e.terminus + 1 }))
                .collect::<Vec<_>>(),
        ),
    );
    let complex = crate::cohomology::build_complex(g);
    s.set(
        "c1_coordinates",
        json!(complex
            .pointed(1)
            .iter()
            .map(|p| p.iter().map(|&e| edge(e)).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    s.set("z_basis", bits(&r.z_basis));
    s.set("b_basis", bits(&r.b_basis));
    s.set("h_representatives", bits(&r.h_representatives));
    if r.components > 1 {
        s.notes.push(format!(
            "graph has {} components with edges; per-component formulas dim B1 = |E| - c, dim H1 = |E| - |I'| + c",
            r.components
        ));
    }
    s.checks.extend(r.checks);
    s
}

fn cmd_cohomology(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    match input {
        Input::Diagram(d) => {
            let mut s = cohomology_section(&underlying_graph(d), cfg.strict);
            s.notes.extend(non_spherical_note(d));
            Ok(s)
        }
        Input::Graph(g) => Ok(cohomology_section(g, cfg.strict)),
        Input::Table(_) => Err(RunError::Unsupported(
            "`cohomology` needs a `coxeter v1` or `graph v1` input".into(),
        )),
    }
}

/// Coefficient system of the standard amalgam; every simplex with its
/// closed-form and (optionally) brute-force orders.
pub(crate) fn coefficient_section(d: &CoxeterDiagram, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    let a = standard_amalgam(d)?;
    let system = coefficient_system(&a, cfg.mode(), cfg.budget)?;
    let rows: Vec<Value> = system
        .iter()
        .map(|g| {
            json!({
                "simplex": g.simplex,
                "common_vertices": g.common_vertices,
                "loop_order": g.loop_order,
                "closed_form_order": g.closed_form_order,
                "brute_force_order": g.brute_force_order,
                "generator": g.generator_name,
                "hypotheses_hold": g.hypotheses_hold,
            })
        })
        .collect();
    s.set("simplices", Value::from(rows));
    for g in &system {
        let key: Vec<String> = g.simplex.iter().map(|e| e.to_string()).collect();
        s.push(&format!("A[{}]", key.join(",")), g.checks.clone());
        if !g.hypotheses_hold {
            s.notes.push(format!(
                "simplex {:?} lacks the cofaces the closed form relies on (brute-force order {})",
                g.simplex,
                g.brute_force_order
                    .map(|o| o.to_string())
                    .unwrap_or_else(|| "not computed".into())
            ));
        }
    }
    Ok(s)
}

pub(crate) fn amalgam_section(d: &CoxeterDiagram, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    let r = classify_amalgams(d, cfg.budget, cfg.cap)?;
    let standard = standard_amalgam(d)?;
    s.set(
        "simplices",
        Value::from(
            standard
                .summary()
                .simplices
                .iter()
                .map(|x| json!({ "simplex": x.simplex, "common_vertices": x.common_vertices, "order": x.order }))
                .collect::<Vec<_>>(),
        ),
    );
    s.set("n", json!(r.non_tree_edges));
    s.set("selections", json!(r.selections));
    s.set("class_count", json!(r.classes.len()));
    s.set(
        "classes",
        Value::from(
            r.classes
                .iter()
                .map(|c| json!({ "representative": c.representative, "members": c.members }))
                .collect::<Vec<_>>(),
        ),
    );
    s.set("comparisons", serde_json::to_value(&r.comparisons).expect("serializes"));
    s.set("completion_order", json!(r.completion_order));
    s.set(
        "non_tree_edges",
        Value::from(
            r.tree
                .non_tree
                .iter()
                .map(|e| json!({ "edge": e.edge, "origin": e.origin + 1, "terminus": e.terminus + 1 }))
                .collect::<Vec<_>>(),
        ),
    );
    s.checks.extend(r.checks);
    if r.completion_order.is_none() {
        s.notes
            .push("W is infinite or above the cap; completion into M(W,2) not checked".into());
    }
    Ok(s)
}

fn cmd_amalgams(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    let Input::Diagram(d) = input else {
        return Err(RunError::Unsupported("`amalgams` needs a `coxeter v1` input".into()));
    };
    let mut s = amalgam_section(d, cfg)?;
    let coeff = coefficient_section(d, cfg)?;
    s.absorb("coefficients", coeff);
    s.notes.extend(non_spherical_note(d));
    Ok(s)
}

fn cmd_verify_input(input: &Input, cfg: &RunConfig) -> Result<Section, RunError> {
    let mut s = Section::default();
    s.absorb("parse", cmd_parse(input));
    match input {
        Input::Diagram(d) => {
            if recognize_spherical(d).is_spherical() {
                s.absorb("group", cmd_group(input, cfg)?);
                s.absorb("loop", cmd_loop(input, cfg)?);
                s.absorb("aut", cmd_aut(input, cfg)?);
            } else {
                s.notes
                    .push("W is infinite; group, loop and aut pipelines skipped".into());
            }
            s.absorb("cohomology", cmd_cohomology(input, cfg)?);
            if d.is_two_spherical() && !underlying_graph(d).edges().is_empty() {
                s.absorb("amalgams", amalgam_section(d, cfg)?);
                let (coeff, findings) = verify::coefficient_findings("input", d, cfg)?;
                s.absorb("coefficients", coeff);
                s.notes.extend(findings);
            }
        }
        Input::Graph(_) => s.absorb("cohomology", cmd_cohomology(input, cfg)?),
        Input::Table(_) => {
            s.absorb("group", cmd_group(input, cfg)?);
            s.absorb("loop", cmd_loop(input, cfg)?);
            s.absorb("aut", cmd_aut(input, cfg)?);
        }
    }
    Ok(s)
}

/// Runs one command. `text` is the input contents (`None` only for
/// `verify`, which then runs the built-in corpus).
pub fn run(cfg: &RunConfig, text: Option<&str>) -> Result<Report, RunError> {
    if cfg.cap == 0 || cfg.budget == 0 {
        return Err(RunError::Unsupported("cap and budget must be at least 1".into()));
    }
    let (section, info) = match text {
        None if cfg.command == Command::Verify => (
            verify::builtin_suite(cfg)?,
            InputInfo {
                kind: None,
                sha256: None,
            },
        ),
        None => {
            return Err(RunError::Unsupported(format!(
                "`{}` needs an input",
                cfg.command.as_str()
            )))
        }
        Some(text) => {
            let input = parse_input(text).map_err(RunError::Parse)?;
            let section = match cfg.command {
                Command::Parse => cmd_parse(&input),
                Command::Group => cmd_group(&input, cfg)?,
                Command::Loop => cmd_loop(&input, cfg)?,
                Command::Aut => cmd_aut(&input, cfg)?,
                Command::Cohomology => cmd_cohomology(&input, cfg)?,
                Command::Amalgams => cmd_amalgams(&input, cfg)?,
                Command::Verify => cmd_verify_input(&input, cfg)?,
            };
            let digest = Sha256::digest(text.as_bytes());
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            (
                section,
                InputInfo {
                    kind: Some(input.kind().to_string()),
                    sha256: Some(hex),
                },
            )
        }
    };
    Ok(Report {
        schema: SCHEMA,
        command: cfg.command,
        input: info,
        config: ConfigEcho {
            cap: cfg.cap,
            budget: cfg.budget,
            strict: cfg.strict,
            cross_check: cfg.cross_check,
        },
        passed: all_passed(&section.checks),
        summary: Value::Object(section.summary),
        notes: section.notes,
        checks: section.checks,
    })
}

/// Coxeter-Chein loops: construction, verification and amalgam classification.
#[derive(Debug, Parser)]
#[command(name = "coxeter-chein", version)]
pub struct Args {
    /// Pipeline to run.
    #[arg(value_enum)]
    pub command: Command,
    /// Input file, or `-` for standard input. Optional for `verify`.
    pub input: Option<String>,
    /// Largest group order enumerated.
    #[arg(long, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Node budget for automorphism and isomorphism searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    pub json: bool,
    /// Reject disconnected graphs.
    #[arg(long)]
    pub strict: bool,
    /// Skip brute-force cross-checks of closed forms.
    #[arg(long)]
    pub no_cross_check: bool,
}

impl Args {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            command: self.command,
            input: self.input.as_deref().filter(|p| *p != "-").map(PathBuf::from),
            cap: usize::try_from(self.cap).unwrap_or(usize::MAX),
            budget: self.budget,
            strict: self.strict,
            cross_check: !self.no_cross_check,
            json: self.json,
        }
    }
}

/// Full CLI behaviour over explicit streams; returns the exit code.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let cfg = args.config();
    let text = match (&args.input, &cfg.input) {
        (None, _) => None,
        (Some(_), None) => {
            let mut s = String::new();
            if let Err(e) = stdin.read_to_string(&mut s) {
                let _ = writeln!(stderr, "error: reading standard input: {e}");
                return EXIT_IO;
            }
            Some(s)
        }
        (Some(_), Some(path)) => match std::fs::read_to_string(path) {
            Ok(s) => Some(s),
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return EXIT_IO;
            }
        },
    };
    match run(&cfg, text.as_deref()) {
        Ok(report) => {
            let out = if cfg.json { report.to_json() } else { report.to_text() };
            if stdout.write_all(out.as_bytes()).is_err() {
                return EXIT_IO;
            }
            report.exit_code()
        }
        Err(e) => {
            if cfg.json {
                let body = json!({ "schema": SCHEMA, "command": cfg.command.as_str(), "error": e.to_string(), "exit_code": e.exit_code() });
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&body).expect("serializes"));
            }
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(command: Command, text: &str) -> Report {
        run(&RunConfig::new(command), Some(text)).unwrap()
    }

    #[test]
    fn loop_on_a2() {
        let r = run_text(Command::Loop, "coxeter v1\nrank 2\nedge 1 2 3\n");
        assert!(r.passed);
        assert_eq!(r.summary["group_order"], 6);
        assert_eq!(r.summary["loop_order"], 12);
        for name in ["m1", "m2", "m3", "c1", "c2", "c3"] {
            assert!(r.checks.iter().any(|c| c.name == name && c.passed), "{name}");
        }
    }

    #[test]
    fn cohomology_on_triangle() {
        let r = run_text(Command::Cohomology, "graph v1\nedge 1 2\nedge 1 3\nedge 2 3\n");
        assert!(r.passed);
        assert_eq!(r.summary["dims"]["z1"], 3);
        assert_eq!(r.summary["dims"]["b1"], 2);
        assert_eq!(r.summary["dims"]["h1"], 1);
        assert_eq!(r.summary["n"], 1);
        assert_eq!(r.summary["non_tree_edges"][0]["origin"], 2);
    }

    #[test]
    fn amalgams_on_triangle() {
        let r = run_text(
            Command::Amalgams,
            "coxeter v1\nrank 3\nedge 1 2 3\nedge 1 3 3\nedge 2 3 3\n",
        );
        assert!(
            r.passed,
            "{:?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
        assert_eq!(r.summary["class_count"], 2);
        assert_eq!(r.summary["classes"][0]["representative"], json!([]));
        assert_eq!(r.summary["classes"][1]["representative"], json!([1]));
    }

    #[test]
    fn exit_codes() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut input: &[u8] = b"coxeter v1\nrank 2\nedge 1 2 2\n";
        assert_eq!(
            main_with(["cc", "parse", "-"], &mut input, &mut out, &mut err),
            EXIT_PARSE
        );
        let mut input: &[u8] = b"coxeter v1\nrank 3\nedge 1 2 3\nedge 1 3 3\nedge 2 3 3\n";
        assert_eq!(
            main_with(["cc", "group", "-", "--cap", "50"], &mut input, &mut out, &mut err),
            EXIT_RESOURCE
        );
        let mut input: &[u8] = b"coxeter v1\nrank 2\nedge 1 2 3\n";
        assert_eq!(
            main_with(["cc", "aut", "-", "--budget", "3"], &mut input, &mut out, &mut err),
            EXIT_RESOURCE
        );
        let mut input: &[u8] = b"graph v1\nedge 1 2\nedge 3 4\n";
        assert_eq!(
            main_with(["cc", "cohomology", "-", "--strict"], &mut input, &mut out, &mut err),
            EXIT_CHECK_FAILED
        );
        let mut input: &[u8] = b"";
        assert_eq!(
            main_with(["cc", "loop", "/nonexistent/file"], &mut input, &mut out, &mut err),
            EXIT_IO
        );
        assert_eq!(
            main_with(["cc", "loop", "-", "--cap", "0"], &mut input, &mut out, &mut err),
            EXIT_PARSE
        );
    }

    #[test]
    fn aut_on_a2() {
        let r = run_text(Command::Aut, "coxeter v1\nrank 2\nedge 1 2 3\n");
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.summary["aut_loop_order"], 108);
        assert_eq!(r.summary["case"], "case3");
    }

    #[test]
    fn non_group_table() {
        let t = "table v1 5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        let r = run_text(Command::Loop, t);
        assert!(!r.passed);
        assert!(r.checks.iter().any(|c| !c.passed && c.witness.is_some()));
    }
}
