//! Line-based input formats.
//!
//! Algebra files:
//!
//! ```text
//! field F7
//! basis e1 e2 e3
//! sq e1 = 1*e2 + 3*e3
//! sq e2 = e1 - 1/2*e3
//! ```
//!
//! Graph files:
//!
//! ```text
//! field Q
//! vertices a b c
//! edge a -> b w=2
//! ```
//!
//! `#` starts a comment. The `field` line is optional (default `Q`); an
//! omitted `sq` line means the square is zero, an omitted `w=` means weight 1.

use std::collections::HashMap;
use std::fmt;

use evoaut::scalar::ScalarError;
use evoaut::wgraph::{GraphError, WeightedGraph};
use evoaut::{EvolutionAlgebra, FieldSpec, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Algebra(EvolutionAlgebra),
    Graph(WeightedGraph),
}

impl Input {
    pub fn to_algebra(&self) -> EvolutionAlgebra {
        match self {
            Input::Algebra(a) => a.clone(),
            Input::Graph(g) => evoaut::wgraph::wgraph_to_algebra(g, g.field())
                .expect("graph weights lie in its field"),
        }
    }
}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn at(&self, t: &Token<'_>, message: impl Into<String>) -> ParseError {
        self.error(t.column, message)
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens = tokens(content);
            (!tokens.is_empty()).then(|| Line {
                number: i + 1,
                tokens,
                end_column: content.chars().count() + 1,
            })
        })
        .collect()
}

fn scalar_error(e: ScalarError) -> String {
    e.to_string()
}

/// Parses either format, telling them apart by the first keyword after the
/// optional `field` line. `field_override` replaces the file's field.
pub fn parse_input(text: &str, field_override: Option<&FieldSpec>) -> Result<Input, ParseError> {
    let ls = lines(text);
    let kind = ls.iter().map(|l| l.tokens[0].text).find(|&k| k != "field");
    match kind {
        Some("vertices") | Some("edge") => parse_graph_lines(&ls, field_override).map(Input::Graph),
        Some("basis") | Some("sq") => parse_algebra_lines(&ls, field_override).map(Input::Algebra),
        Some(_) => {
            let l = ls.iter().find(|l| l.tokens[0].text != "field").unwrap();
            Err(l.at(
                &l.tokens[0],
                format!("unknown keyword {:?}", l.tokens[0].text),
            ))
        }
        None => Err(ParseError {
            line: ls.last().map_or(1, |l| l.number),
            column: 1,
            message: "empty input".into(),
        }),
    }
}

pub fn parse_algebra(
    text: &str,
    field_override: Option<&FieldSpec>,
) -> Result<EvolutionAlgebra, ParseError> {
    parse_algebra_lines(&lines(text), field_override)
}

pub fn parse_graph(
    text: &str,
    field_override: Option<&FieldSpec>,
) -> Result<WeightedGraph, ParseError> {
    parse_graph_lines(&lines(text), field_override)
}

/// Reads an optional leading `field` line; returns the field and the index
/// of the first remaining line.
fn header(
    ls: &[Line<'_>],
    field_override: Option<&FieldSpec>,
) -> Result<(FieldSpec, usize), ParseError> {
    let Some(first) = ls.first().filter(|l| l.tokens[0].text == "field") else {
        return Ok((field_override.cloned().unwrap_or(FieldSpec::Rationals), 0));
    };
    let [_, tag] = first.tokens[..] else {
        return Err(first.error(first.end_column, "expected `field F<p>` or `field Q`"));
    };
    let parsed: FieldSpec = tag
        .text
        .parse()
        .map_err(|e| first.at(&tag, scalar_error(e)))?;
    Ok((field_override.cloned().unwrap_or(parsed), 1))
}

fn declare_labels(line: &Line<'_>, keyword: &str) -> Result<Vec<String>, ParseError> {
    if line.tokens.len() < 2 {
        return Err(line.error(
            line.end_column,
            format!("`{keyword}` needs at least one label"),
        ));
    }
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for t in &line.tokens[1..] {
        if !is_label(t.text) {
            return Err(line.at(t, format!("invalid label {:?}", t.text)));
        }
        if seen.insert(t.text, ()).is_some() {
            return Err(line.at(t, format!("duplicate label {:?}", t.text)));
        }
        out.push(t.text.to_string());
    }
    Ok(out)
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_algebra_lines(
    ls: &[Line<'_>],
    field_override: Option<&FieldSpec>,
) -> Result<EvolutionAlgebra, ParseError> {
    let (field, start) = header(ls, field_override)?;
    let Some(basis_line) = ls.get(start) else {
        return Err(ParseError {
            line: ls.last().map_or(1, |l| l.number),
            column: 1,
            message: "missing `basis` line".into(),
        });
    };
    if basis_line.tokens[0].text != "basis" {
        return Err(basis_line.at(&basis_line.tokens[0], "expected `basis`"));
    }
    let labels = declare_labels(basis_line, "basis")?;
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let n = labels.len();
    let mut matrix = vec![vec![field.zero(); n]; n];
    let mut defined = vec![false; n];
    for line in &ls[start + 1..] {
        let kw = &line.tokens[0];
        if kw.text != "sq" {
            return Err(line.at(kw, format!("expected `sq`, found {:?}", kw.text)));
        }
        let Some(target) = line.tokens.get(1) else {
            return Err(line.error(line.end_column, "expected a basis label"));
        };
        let &i = index
            .get(target.text)
            .ok_or_else(|| line.at(target, format!("undeclared label {:?}", target.text)))?;
        if std::mem::replace(&mut defined[i], true) {
            return Err(line.at(target, format!("square of {:?} given twice", target.text)));
        }
        match line.tokens.get(2) {
            Some(t) if t.text == "=" => {}
            Some(t) => return Err(line.at(t, "expected `=`")),
            None => return Err(line.error(line.end_column, "expected `=`")),
        }
        for (j, c) in parse_terms(line, &line.tokens[3..], &field, &index)? {
            matrix[j][i] = &matrix[j][i] + &c;
        }
    }
    EvolutionAlgebra::new(field, labels, matrix).map_err(|e| ParseError {
        line: basis_line.number,
        column: 1,
        message: e.to_string(),
    })
}

/// `[sign] term ([+|-] term)*` with `term = coeff*label | label`.
fn parse_terms(
    line: &Line<'_>,
    toks: &[Token<'_>],
    field: &FieldSpec,
    index: &HashMap<&str, usize>,
) -> Result<Vec<(usize, Scalar)>, ParseError> {
    if toks.is_empty() {
        return Err(line.error(
            line.end_column,
            "expected at least one term (omit the line for a zero square)",
        ));
    }
    let mut out = Vec::new();
    let mut k = 0;
    let mut negate = false;
    if toks[0].text == "-" || toks[0].text == "+" {
        negate = toks[0].text == "-";
        k = 1;
    }
    loop {
        let Some(t) = toks.get(k) else {
            return Err(line.error(line.end_column, "expected a term"));
        };
        let (coeff, label, label_col) = match t.text.rsplit_once('*') {
            Some((c, l)) => {
                let v = field
                    .parse_scalar(c)
                    .map_err(|e| line.at(t, scalar_error(e)))?;
                (v, l, t.column + c.chars().count() + 1)
            }
            None => match t.text.strip_prefix('-') {
                Some(l) => (-field.one(), l, t.column + 1),
                None => (field.one(), t.text, t.column),
            },
        };
        let &j = index
            .get(label)
            .ok_or_else(|| line.error(label_col, format!("undeclared label {label:?}")))?;
        out.push((j, if negate { -coeff } else { coeff }));
        k += 1;
        match toks.get(k) {
            None => return Ok(out),
            Some(op) if op.text == "+" || op.text == "-" => {
                negate = op.text == "-";
                k += 1;
            }
            Some(op) => {
                return Err(line.at(op, format!("expected `+` or `-`, found {:?}", op.text)))
            }
        }
    }
}

fn parse_graph_lines(
    ls: &[Line<'_>],
    field_override: Option<&FieldSpec>,
) -> Result<WeightedGraph, ParseError> {
    let (field, start) = header(ls, field_override)?;
    let Some(vline) = ls.get(start) else {
        return Err(ParseError {
            line: ls.last().map_or(1, |l| l.number),
            column: 1,
            message: "missing `vertices` line".into(),
        });
    };
    if vline.tokens[0].text != "vertices" {
        return Err(vline.at(&vline.tokens[0], "expected `vertices`"));
    }
    let labels = declare_labels(vline, "vertices")?;
    let index: HashMap<String, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();
    let mut graph =
        WeightedGraph::new(field.clone(), labels).map_err(|e| vline.error(1, e.to_string()))?;
    for line in &ls[start + 1..] {
        let kw = &line.tokens[0];
        if kw.text != "edge" {
            return Err(line.at(kw, format!("expected `edge`, found {:?}", kw.text)));
        }
        let vertex = |k: usize| -> Result<usize, ParseError> {
            let t = line
                .tokens
                .get(k)
                .ok_or_else(|| line.error(line.end_column, "expected a vertex label"))?;
            index
                .get(t.text)
                .copied()
                .ok_or_else(|| line.at(t, format!("undeclared vertex {:?}", t.text)))
        };
        let src = vertex(1)?;
        match line.tokens.get(2) {
            Some(t) if t.text == "->" => {}
            Some(t) => return Err(line.at(t, "expected `->`")),
            None => return Err(line.error(line.end_column, "expected `->`")),
        }
        let dst = vertex(3)?;
        let weight = match line.tokens.get(4) {
            None => field.one(),
            Some(t) => {
                let w = t
                    .text
                    .strip_prefix("w=")
                    .ok_or_else(|| line.at(t, "expected `w=<scalar>`"))?;
                field
                    .parse_scalar(w)
                    .map_err(|e| line.error(t.column + 2, scalar_error(e)))?
            }
        };
        if let Some(extra) = line.tokens.get(5) {
            return Err(line.at(extra, "unexpected trailing input"));
        }
        graph.add_edge(src, dst, weight).map_err(|e| match e {
            GraphError::DuplicateEdge(..) => line.at(kw, e.to_string()),
            _ => line.error(
                line.tokens.get(4).map_or(kw.column, |t| t.column),
                e.to_string(),
            ),
        })?;
    }
    Ok(graph)
}

/// Writes an algebra in the algebra file format.
pub fn render_algebra(a: &EvolutionAlgebra) -> String {
    let mut out = format!("field {}\nbasis {}\n", a.field(), a.labels().join(" "));
    for i in 0..a.dim() {
        let sq = a.square_of_basis(i);
        let terms: Vec<String> =
            sq.0.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{c}*{}", a.labels()[j]))
                .collect();
        if !terms.is_empty() {
            out.push_str(&format!("sq {} = {}\n", a.labels()[i], terms.join(" + ")));
        }
    }
    out
}

/// Writes a graph in the graph file format.
pub fn render_graph(g: &WeightedGraph) -> String {
    let mut out = format!("field {}\nvertices {}\n", g.field(), g.labels().join(" "));
    for (s, t, w) in g.edges() {
        out.push_str(&format!(
            "edge {} -> {} w={w}\n",
            g.labels()[s],
            g.labels()[t]
        ));
    }
    out
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Algebra(a) => f.write_str(&render_algebra(a)),
            Input::Graph(g) => f.write_str(&render_graph(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_format() {
        let text = "# three cycle\nfield Q\nbasis u1 u2 u3\nsq u1 = 1*u1 + 2*u2\nsq u2 = -u2 - u3\nsq u3 = 2*u3 - 8*u1\n";
        let a = parse_algebra(text, None).unwrap();
        let cols: Vec<String> = (0..3).map(|i| a.square_of_basis(i).to_string()).collect();
        assert_eq!(cols, ["(1, 2, 0)", "(0, -1, -1)", "(-8, 0, 2)"]);
        assert_eq!(parse_algebra(&render_algebra(&a), None).unwrap(), a);
    }

    #[test]
    fn graph_format() {
        let text = "vertices a b\nedge a -> b w=2\nedge b -> b\n";
        let g = parse_graph(text, Some(&FieldSpec::prime(5).unwrap())).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.field().to_string(), "F5");
        assert_eq!(parse_graph(&render_graph(&g), None).unwrap(), g);
    }

    #[test]
    fn detects_kind() {
        assert!(matches!(
            parse_input("field F7\nvertices a\n", None),
            Ok(Input::Graph(_))
        ));
        assert!(matches!(
            parse_input("basis a\n", None),
            Ok(Input::Algebra(_))
        ));
        let e = parse_input("field F7\nnodes a\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(parse_input("\n# nothing\n", None).is_err());
    }

    #[test]
    fn error_positions() {
        let e = parse_graph("vertices a b\nedge a -> b w=1\nedge a -> b w=3\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert!(e.message.contains("duplicate edge"));
        let e = parse_graph("vertices a b\nedge a -> c\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse_graph("vertices a b\nedge a -> b w=0\n", None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_algebra("basis x y\nsq x = 2*z\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        let e = parse_algebra("basis x y\nsq x = 1/0*y\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_algebra("field F6\nbasis x\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_algebra("basis x x\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = parse_algebra("basis x\nsq x = x x\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
    }
}
