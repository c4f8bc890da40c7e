//! Line-oriented input formats: `coxeter v1`, `graph v1` and `table v1 <n>`.

use std::fmt;

use crate::cohomology::Graph;
use crate::coxeter::{validate_diagram, CoxeterDiagram, Label};
use crate::loop_core::LoopTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Diagram(CoxeterDiagram),
    Graph(Graph),
    Table(LoopTable),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Diagram(_) => "coxeter",
            Input::Graph(_) => "graph",
            Input::Table(_) => "table",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn number(&self, what: &str) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

/// Nonblank lines with comments stripped, split into tokens.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (byte, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(byte),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..byte],
                        line: k + 1,
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

fn expect_arity(line: &[Token<'_>], n: usize, usage: &str) -> Result<(), ParseError> {
    if line.len() == n {
        Ok(())
    } else if line.len() > n {
        Err(line[n].error(format!("unexpected token; usage: {usage}")))
    } else {
        let last = line.last().expect("nonempty line");
        Err(ParseError {
            line: last.line,
            column: last.column + last.text.chars().count(),
            message: format!("missing argument; usage: {usage}"),
        })
    }
}

fn vertex(tok: &Token<'_>, bound: Option<usize>) -> Result<usize, ParseError> {
    let v = tok.number("a 1-based index")?;
    match bound {
        _ if v == 0 => Err(tok.error("indices are 1-based")),
        Some(n) if v > n => Err(tok.error(format!("index {v} out of range 1..={n}"))),
        _ => Ok(v - 1),
    }
}

pub fn parse_input(text: &str) -> Result<Input, ParseError> {
    let lines = tokenize(text);
    let Some(header) = lines.first() else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "empty input; expected a `coxeter v1`, `graph v1` or `table v1 <n>` header".into(),
        });
    };
    let body = &lines[1..];
    match (header[0].text, header.get(1).map(|t| t.text)) {
        ("coxeter", Some("v1")) => {
            expect_arity(header, 2, "coxeter v1")?;
            parse_diagram(header, body).map(Input::Diagram)
        }
        ("graph", Some("v1")) => {
            expect_arity(header, 2, "graph v1")?;
            parse_graph(header, body).map(Input::Graph)
        }
        ("table", Some("v1")) => {
            expect_arity(header, 3, "table v1 <order>")?;
            parse_table(header, body).map(Input::Table)
        }
        (_, Some(v)) if ["coxeter", "graph", "table"].contains(&header[0].text) => {
            Err(header[1].error(format!("unsupported version `{v}`; expected `v1`")))
        }
        _ => Err(header[0].error(format!(
            "unknown header `{}`; expected `coxeter v1`, `graph v1` or `table v1 <n>`",
            header[0].text
        ))),
    }
}

fn parse_diagram(header: &[Token<'_>], body: &[Vec<Token<'_>>]) -> Result<CoxeterDiagram, ParseError> {
    let mut rank: Option<usize> = None;
    let mut matrix: Vec<Vec<Label>> = Vec::new();
    let mut listed: Vec<Vec<bool>> = Vec::new();
    for line in body {
        match line[0].text {
            "rank" => {
                if rank.is_some() {
                    return Err(line[0].error("duplicate `rank` line"));
                }
                expect_arity(line, 2, "rank <n>")?;
                let n = line[1].number("a rank")?;
                if n == 0 {
                    return Err(line[1].error("rank must be at least 1"));
                }
                rank = Some(n);
                matrix = (0..n)
                    .map(|i| (0..n).map(|j| Label::Finite(if i == j { 1 } else { 2 })).collect())
                    .collect();
                listed = vec![vec![false; n]; n];
            }
            "edge" => {
                let Some(n) = rank else {
                    return Err(line[0].error("`edge` before `rank`"));
                };
                expect_arity(line, 4, "edge <i> <j> <m>")?;
                let i = vertex(&line[1], Some(n))?;
                let j = vertex(&line[2], Some(n))?;
                if i == j {
                    return Err(line[2].error("an edge needs two distinct nodes"));
                }
                if listed[i][j] {
                    return Err(line[0].error(format!("duplicate edge {{{},{}}}", i + 1, j + 1)));
                }
                let m = match line[3].text {
                    "inf" => Label::Infinite,
                    t => match t.parse::<u32>() {
                        Ok(m) if m >= 3 => Label::Finite(m),
                        Ok(_) => {
                            return Err(line[3]
                                .error("edge label must be >= 3 or `inf`; m = 2 is the default for unlisted pairs"))
                        }
                        Err(_) => return Err(line[3].error(format!("expected an integer label or `inf`, found `{t}`"))),
                    },
                };
                listed[i][j] = true;
                listed[j][i] = true;
                matrix[i][j] = m;
                matrix[j][i] = m;
            }
            other => {
                return Err(line[0].error(format!("unknown directive `{other}`; expected `rank` or `edge`")));
            }
        }
    }
    if rank.is_none() {
        return Err(header[0].error("missing `rank` line"));
    }
    validate_diagram(&matrix).map_err(|e| header[0].error(e.to_string()))
}

fn parse_graph(header: &[Token<'_>], body: &[Vec<Token<'_>>]) -> Result<Graph, ParseError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_vertex = 0;
    for line in body {
        match line[0].text {
            "vertices" => {
                if declared.is_some() {
                    return Err(line[0].error("duplicate `vertices` line"));
                }
                if !edges.is_empty() {
                    return Err(line[0].error("`vertices` must precede the edges"));
                }
                expect_arity(line, 2, "vertices <n>")?;
                declared = Some(line[1].number("a vertex count")?);
            }
            "edge" => {
                expect_arity(line, 3, "edge <i> <j>")?;
                let i = vertex(&line[1], declared)?;
                let j = vertex(&line[2], declared)?;
                if i == j {
                    return Err(line[2].error("self-loops are not allowed"));
                }
                let e = (i.min(j), i.max(j));
                if edges.contains(&e) {
                    return Err(line[0].error(format!("duplicate edge {{{},{}}}", e.0 + 1, e.1 + 1)));
                }
                max_vertex = max_vertex.max(e.1 + 1);
                edges.push(e);
            }
            other => {
                return Err(line[0].error(format!("unknown directive `{other}`; expected `vertices` or `edge`")));
            }
        }
    }
    Graph::new(declared.unwrap_or(max_vertex), &edges).map_err(|e| header[0].error(e.to_string()))
}

fn parse_table(header: &[Token<'_>], body: &[Vec<Token<'_>>]) -> Result<LoopTable, ParseError> {
    let n = header[2].number("a table order")?;
    if n == 0 {
        return Err(header[2].error("order must be at least 1"));
    }
    if body.len() != n {
        let at = body.get(n).map(|l| l[0]).unwrap_or(header[0]);
        return Err(at.error(format!("expected {n} rows, found {}", body.len())));
    }
    let mut rows = Vec::with_capacity(n);
    for line in body {
        if line.len() != n {
            let at = line.get(n).unwrap_or(&line[line.len() - 1]);
            return Err(at.error(format!("expected {n} entries, found {}", line.len())));
        }
        let mut row = Vec::with_capacity(n);
        for tok in line {
            let v = tok.number("a 0-based element index")?;
            if v >= n {
                return Err(tok.error(format!("entry {v} out of range 0..{n}")));
            }
            row.push(v);
        }
        rows.push(row);
    }
    LoopTable::from_rows(&rows).map_err(|e| header[0].error(format!("not a loop with identity 0: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Magma;

    #[test]
    fn a2() {
        let Input::Diagram(d) = parse_input("coxeter v1\nrank 2\nedge 1 2 3").unwrap() else {
            panic!()
        };
        assert_eq!(d, CoxeterDiagram::type_a(2));
    }

    #[test]
    fn label_two_rejected() {
        let e = parse_input("coxeter v1\nrank 2\nedge 1 2 2").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
        assert!(e.message.contains(">= 3"));
    }

    #[test]
    fn diagram_errors() {
        let e = parse_input("coxeter v1\nrank 2\nedge 1 3 3").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
        let e = parse_input("coxeter v1\nrank 3\nedge 1 2 3\nedge 2 1 4").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("duplicate"));
        let e = parse_input("coxeter v1\nrank 2\nedge 1 2 x").unwrap_err();
        assert!(e.message.contains("`x`"));
        let e = parse_input("coxeter v2\nrank 2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = parse_input("# comment\n\nfoo v1").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
    }

    #[test]
    fn comments_and_inf() {
        let Input::Diagram(d) = parse_input("# free product\ncoxeter v1 # header\nrank 2\n  edge 1 2 inf\n").unwrap()
        else {
            panic!()
        };
        assert_eq!(d.label(0, 1), Label::Infinite);
    }

    #[test]
    fn z2_table() {
        let Input::Table(t) = parse_input("table v1 2\n0 1\n1 0").unwrap() else {
            panic!()
        };
        assert_eq!(t.order(), 2);
        assert_eq!(t.mul(1, 1), 0);
        let e = parse_input("table v1 2\n0 1\n1 1").unwrap_err();
        assert!(e.message.contains("not a loop"));
        let e = parse_input("table v1 2\n0 1\n1 2").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
    }

    #[test]
    fn graphs() {
        let Input::Graph(g) = parse_input("graph v1\nedge 1 2\nedge 1 3\nedge 2 3").unwrap() else {
            panic!()
        };
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let Input::Graph(g) = parse_input("graph v1\nvertices 5\nedge 1 2").unwrap() else {
            panic!()
        };
        assert_eq!(g.vertex_count(), 5);
        assert!(parse_input("graph v1\nedge 1 1").is_err());
        assert!(parse_input("graph v1\nvertices 2\nedge 1 3").is_err());
        assert!(parse_input("graph v1\nedge 1 2\nedge 2 1").is_err());
    }
}
