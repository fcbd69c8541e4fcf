//! Text formats for instances, points and graphs.
//!
//! All formats are whitespace separated and allow `#` comments to the end of
//! the line. Writers produce the canonical form, which parses back to the
//! same value.

use std::fmt::{self, Write as _};

use thiserror::Error;
use zerohalf::matching::WeightedGraph;
use zerohalf::rational::{self, Rational};
use zerohalf::{IlpInstance, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    /// Position reported for errors at end of input.
    end: (usize, usize),
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut end = (1, 1);
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut offset = 0;
            for piece in line.split_whitespace() {
                let start = offset + line[offset..].find(piece).expect("piece is in line");
                tokens.push(Token {
                    text: piece,
                    line: k + 1,
                    column: line[..start].chars().count() + 1,
                });
                offset = start + piece.len();
            }
            end = (k + 1, raw.chars().count() + 1);
        }
        Tokens {
            tokens,
            pos: 0,
            end,
        }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self
            .tokens
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column));
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn error_at(token: &Token<'_>, message: impl Into<String>) -> ParseError {
        ParseError {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.error_here(format!("unexpected end of input, expected {what}"))),
        }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn keyword(&mut self, word: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text != word {
            return Err(Self::error_at(
                &t,
                format!("expected `{word}`, found `{}`", t.text),
            ));
        }
        Ok(t)
    }

    fn integer(&mut self, what: &str) -> Result<i64, ParseError> {
        let t = self.next(what)?;
        t.text
            .parse()
            .map_err(|_| Self::error_at(&t, format!("expected {what}, found `{}`", t.text)))
    }

    fn count(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.next(what)?;
        t.text
            .parse()
            .map_err(|_| Self::error_at(&t, format!("expected {what}, found `{}`", t.text)))
    }

    fn flag(&mut self) -> Result<bool, ParseError> {
        let t = self.next("flag 0 or 1")?;
        match t.text {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Self::error_at(&t, format!("expected flag 0 or 1, found `{other}`"))),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let t = self.next("a number")?;
        rational::parse(t.text)
            .ok_or_else(|| Self::error_at(&t, format!("expected integer or p/q, found `{}`", t.text)))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => Err(Self::error_at(t, format!("unexpected `{}` after end", t.text))),
            None => Ok(()),
        }
    }
}

fn positive(tokens: &mut Tokens<'_>, keyword: &str) -> Result<usize, ParseError> {
    tokens.keyword(keyword)?;
    let at = tokens.peek().cloned();
    let v = tokens.count(&format!("{keyword} count"))?;
    if v == 0 {
        let at = at.expect("count was read");
        return Err(Tokens::error_at(&at, format!("{keyword} must be at least 1")));
    }
    Ok(v)
}

/// Parses an instance file:
/// `ROWS m`, `COLS n`, `A` with one line per row, `B`, `LOWER`, `UPPER`,
/// optional `OBJ`, `END`.
pub fn parse_instance(text: &str) -> Result<IlpInstance, ParseError> {
    let mut t = Tokens::new(text);
    let m = positive(&mut t, "ROWS")?;
    let n = positive(&mut t, "COLS")?;
    let a_keyword = t.keyword("A")?;
    let mut a = Vec::with_capacity(m);
    let mut previous_line = a_keyword.line;
    for j in 0..m {
        let first = t
            .peek()
            .cloned()
            .ok_or_else(|| t.error_here(format!("unexpected end of input in row {} of A", j + 1)))?;
        if first.line == previous_line {
            return Err(Tokens::error_at(&first, format!("row {} of A must start on a new line", j + 1)));
        }
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let at = t.peek().cloned();
            if at.as_ref().is_some_and(|tok| tok.line != first.line) {
                return Err(Tokens::error_at(
                    at.as_ref().expect("checked"),
                    format!("row {} of A has {i} entries, expected {n}", j + 1),
                ));
            }
            row.push(t.integer("matrix entry")?);
        }
        if let Some(extra) = t.peek().filter(|tok| tok.line == first.line) {
            return Err(Tokens::error_at(extra, format!("row {} of A has more than {n} entries", j + 1)));
        }
        previous_line = first.line;
        a.push(row);
    }
    t.keyword("B")?;
    let b = (0..m)
        .map(|_| t.integer("right-hand side"))
        .collect::<Result<Vec<_>, _>>()?;
    t.keyword("LOWER")?;
    let lower = (0..n).map(|_| t.flag()).collect::<Result<Vec<_>, _>>()?;
    t.keyword("UPPER")?;
    let upper = (0..n).map(|_| t.flag()).collect::<Result<Vec<_>, _>>()?;
    let objective = if t.peek().is_some_and(|tok| tok.text == "OBJ") {
        t.keyword("OBJ")?;
        Some((0..n).map(|_| t.integer("objective coefficient")).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    let end = t.keyword("END")?;
    t.finish()?;
    IlpInstance::new(a, b, lower, upper, objective)
        .map_err(|e| Tokens::error_at(&end, format!("invalid instance: {e}")))
}

fn join<T: fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_instance(instance: &IlpInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ROWS {}", instance.rows());
    let _ = writeln!(out, "COLS {}", instance.cols());
    out.push_str("A\n");
    for row in instance.matrix() {
        let _ = writeln!(out, "{}", join(row));
    }
    let _ = writeln!(out, "B\n{}", join(instance.rhs()));
    let flags = |f: &[bool]| join(f.iter().map(|&b| u8::from(b)));
    let _ = writeln!(out, "LOWER\n{}", flags(instance.lower_present()));
    let _ = writeln!(out, "UPPER\n{}", flags(instance.upper_present()));
    if let Some(c) = instance.objective() {
        let _ = writeln!(out, "OBJ\n{}", join(c));
    }
    out.push_str("END\n");
    out
}

/// Parses `n` whitespace-separated numbers.
pub fn parse_point(text: &str, n: usize) -> Result<Point, ParseError> {
    let mut t = Tokens::new(text);
    let mut coords = Vec::with_capacity(n);
    for _ in 0..n {
        coords.push(t.rational()?);
    }
    t.finish()?;
    Ok(Point::new(coords))
}

pub fn write_point(point: &Point) -> String {
    format!("{}\n", rational::render_all(point.coords()))
}

/// Parses `NODES k`, `EDGES m`, then `m` lines `u v w` with 1-indexed nodes.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut t = Tokens::new(text);
    t.keyword("NODES")?;
    let nodes = t.count("node count")?;
    t.keyword("EDGES")?;
    let count = t.count("edge count")?;
    let mut edges = Vec::with_capacity(count);
    for _ in 0..count {
        let endpoint = |t: &mut Tokens<'_>| -> Result<usize, ParseError> {
            let at = t.peek().cloned();
            let v = t.count("node index")?;
            if v == 0 || v > nodes {
                let at = at.expect("index was read");
                return Err(Tokens::error_at(&at, format!("node {v} outside 1..={nodes}")));
            }
            Ok(v - 1)
        };
        let first = t.peek().cloned();
        let u = endpoint(&mut t)?;
        let v = endpoint(&mut t)?;
        let w = t.integer("edge weight")?;
        let first = first.expect("edge was read");
        edges.push(((u, v, w), first));
    }
    t.finish()?;
    let located: Vec<_> = edges.iter().map(|(_, tok)| tok.clone()).collect();
    WeightedGraph::new(nodes, edges.into_iter().map(|(e, _)| e).collect()).map_err(|e| {
        let edge = match e {
            zerohalf::matching::MatchingError::Loop { edge }
            | zerohalf::matching::MatchingError::ParallelEdge { edge, .. }
            | zerohalf::matching::MatchingError::NegativeWeight { edge, .. }
            | zerohalf::matching::MatchingError::EndpointOutOfRange { edge, .. } => edge,
            _ => 1,
        };
        Tokens::error_at(&located[edge - 1], format!("invalid graph: {e}"))
    })
}

pub fn write_graph(graph: &WeightedGraph) -> String {
    let mut out = format!("NODES {}\nEDGES {}\n", graph.node_count(), graph.edges().len());
    for &(u, v, w) in graph.edges() {
        let _ = writeln!(out, "{} {} {w}", u + 1, v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\
# triangle matching polytope
ROWS 3
COLS 3
A
1 1 0
1 0 1
0 1 1
B
1 1 1
LOWER
1 1 1
UPPER
1 1 1
OBJ
1 1 1
END
";

    #[test]
    fn round_trip() {
        let inst = parse_instance(TRIANGLE).unwrap();
        assert_eq!(inst.rows(), 3);
        assert_eq!(inst.objective(), Some(&[1, 1, 1][..]));
        let canonical = write_instance(&inst);
        assert_eq!(canonical, TRIANGLE.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
        assert_eq!(parse_instance(&canonical).unwrap(), inst);
    }

    #[test]
    fn objective_is_optional() {
        let text = TRIANGLE.replace("OBJ\n1 1 1\n", "");
        assert_eq!(parse_instance(&text).unwrap().objective(), None);
    }

    #[test]
    fn extra_matrix_line_is_reported() {
        let text = TRIANGLE.replace("ROWS 3", "ROWS 2");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!((err.line, err.column), (7, 1));
        assert!(err.message.contains("expected `B`"), "{err}");
    }

    #[test]
    fn short_row_is_reported() {
        let text = TRIANGLE.replace("1 0 1\n", "1 0\n");
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("row 2 of A has 2 entries"), "{err}");
    }

    #[test]
    fn bad_tokens() {
        let err = parse_instance(&TRIANGLE.replace("LOWER\n1 1 1", "LOWER\n1 2 1")).unwrap_err();
        assert_eq!((err.line, err.column), (11, 3));
        let err = parse_instance(&TRIANGLE.replace("COLS 3", "COLS x")).unwrap_err();
        assert_eq!((err.line, err.column), (3, 6));
        let err = parse_instance(&TRIANGLE.replace("END\n", "")).unwrap_err();
        assert!(err.message.contains("end of input"));
    }

    #[test]
    fn points() {
        let p = parse_point("1/2 1 # comment\n -3/6", 3).unwrap();
        assert_eq!(write_point(&p), "1/2 1 -1/2\n");
        assert!(parse_point("1 2", 3).is_err());
        assert!(parse_point("1 2 3 4", 3).is_err());
        let err = parse_point("1 1/0 2", 3).unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
    }

    #[test]
    fn graphs() {
        let text = "NODES 3\nEDGES 2\n1 2 5\n2 3 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 5), (1, 2, 1)]);
        assert_eq!(write_graph(&g), text);
        let err = parse_graph("NODES 3\nEDGES 2\n1 2 5\n2 1 1\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = parse_graph("NODES 3\nEDGES 1\n1 4 5\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 3));
    }
}
