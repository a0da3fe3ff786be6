//! Readers for the two external graph descriptions: the plain edge-list
//! format and the family expression grammar
//!
//! ```text
//! expr := K<int> | E<int> | C<int> | P<int>
//!       | join(expr, expr) | delete(expr, int) | minus_edge(expr, int, int)
//! ```
//!
//! Whitespace between tokens is ignored.

use std::fmt;

use thiserror::Error;

use super::{make_complete, make_cycle, make_empty, make_path, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing or malformed vertex-count header")]
    MalformedHeader,
    #[error("expected `u v` with 0 <= u < v, got {0:?}")]
    MalformedEdge(String),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("integer literal out of range")]
    IntegerOverflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ParseError {
    fn at(line: usize, column: usize, kind: impl Into<ParseErrorKind>) -> Self {
        ParseError { line, column, kind: kind.into() }
    }
}

/// Parses the edge-list format: a header line holding the vertex count,
/// then one `u v` pair per line. Blank lines and `#` comment lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(1, 1, ParseErrorKind::MalformedHeader))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| ParseError::at(hline, column_of(header), ParseErrorKind::MalformedHeader))?;
    let mut g = Graph::new(n).map_err(|e| ParseError::at(hline, column_of(header), e))?;

    for (lineno, line) in lines {
        let col = column_of(line);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let pair = match fields.as_slice() {
            [u, v] => u.parse::<usize>().ok().zip(v.parse::<usize>().ok()),
            _ => None,
        };
        let (u, v) = pair.ok_or_else(|| {
            ParseError::at(lineno, col, ParseErrorKind::MalformedEdge(line.trim().to_string()))
        })?;
        if u > v {
            return Err(ParseError::at(
                lineno,
                col,
                ParseErrorKind::MalformedEdge(line.trim().to_string()),
            ));
        }
        g.insert_edge(u, v).map_err(|e| ParseError::at(lineno, col, e))?;
    }
    Ok(g)
}

fn column_of(line: &str) -> usize {
    line.len() - line.trim_start().len() + 1
}

/// Syntax tree of a family expression. `Display` renders the canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyExpr {
    Complete(usize),
    Empty(usize),
    Cycle(usize),
    Path(usize),
    Join(Box<FamilyExpr>, Box<FamilyExpr>),
    Delete(Box<FamilyExpr>, usize),
    MinusEdge(Box<FamilyExpr>, usize, usize),
}

impl FamilyExpr {
    pub fn parse(text: &str) -> Result<FamilyExpr, ParseError> {
        parse_family(text).map(|(expr, _)| expr)
    }

    pub fn eval(&self) -> Result<Graph, GraphError> {
        Ok(match self {
            FamilyExpr::Complete(n) => make_complete(*n)?,
            FamilyExpr::Empty(n) => make_empty(*n)?,
            FamilyExpr::Cycle(n) => make_cycle(*n)?,
            FamilyExpr::Path(n) => make_path(*n)?,
            FamilyExpr::Join(a, b) => a.eval()?.join(&b.eval()?)?,
            FamilyExpr::Delete(a, x) => a.eval()?.delete_vertex(*x)?.0,
            FamilyExpr::MinusEdge(a, u, v) => a.eval()?.delete_edge(*u, *v)?,
        })
    }
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyExpr::Complete(n) => write!(f, "K{n}"),
            FamilyExpr::Empty(n) => write!(f, "E{n}"),
            FamilyExpr::Cycle(n) => write!(f, "C{n}"),
            FamilyExpr::Path(n) => write!(f, "P{n}"),
            FamilyExpr::Join(a, b) => write!(f, "join({a},{b})"),
            FamilyExpr::Delete(a, x) => write!(f, "delete({a},{x})"),
            FamilyExpr::MinusEdge(a, u, v) => write!(f, "minus_edge({a},{u},{v})"),
        }
    }
}

/// Parses and evaluates a family expression. Evaluation errors (a vertex
/// or edge that does not exist) are reported at the offending literal.
pub fn parse_family_expr(text: &str) -> Result<Graph, ParseError> {
    parse_family(text).map(|(_, g)| g)
}

fn parse_family(text: &str) -> Result<(FamilyExpr, Graph), ParseError> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let out = p.expr()?;
    let tok = p.peek();
    if tok.kind != Tok::End {
        return Err(tok.unexpected("end of input"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Other(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
}

impl Token {
    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = match &self.kind {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Int(n) => n.to_string(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Other(c) => format!("{c:?}"),
            Tok::End => "end of input".into(),
        };
        ParseError::at(self.line, self.column, ParseErrorKind::Unexpected { expected, found })
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphabetic() || **c == '_') {
                s.push(c);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut n: usize = 0;
            while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d as usize))
                    .ok_or_else(|| ParseError::at(tl, tc, ParseErrorKind::IntegerOverflow))?;
                chars.next();
                column += 1;
            }
            Tok::Int(n)
        } else {
            chars.next();
            column += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                other => Tok::Other(other),
            }
        };
        tokens.push(Token { kind, line: tl, column: tc });
    }
    tokens.push(Token { kind: Tok::End, line, column });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Tok, what: &'static str) -> Result<(), ParseError> {
        let t = self.next();
        if t.kind == kind {
            Ok(())
        } else {
            Err(t.unexpected(what))
        }
    }

    fn int(&mut self) -> Result<(usize, Token), ParseError> {
        let t = self.next();
        match t.kind {
            Tok::Int(n) => Ok((n, t)),
            _ => Err(t.unexpected("integer")),
        }
    }

    fn expr(&mut self) -> Result<(FamilyExpr, Graph), ParseError> {
        let t = self.next();
        let name = match &t.kind {
            Tok::Ident(s) => s.clone(),
            _ => return Err(t.unexpected("graph expression")),
        };
        let fail = |tok: &Token, e: GraphError| ParseError::at(tok.line, tok.column, e);
        match name.as_str() {
            "K" | "E" | "C" | "P" => {
                let (n, nt) = self.int()?;
                let (expr, built) = match name.as_str() {
                    "K" => (FamilyExpr::Complete(n), make_complete(n)),
                    "E" => (FamilyExpr::Empty(n), make_empty(n)),
                    "C" => (FamilyExpr::Cycle(n), make_cycle(n)),
                    _ => (FamilyExpr::Path(n), make_path(n)),
                };
                Ok((expr, built.map_err(|e| fail(&nt, e))?))
            }
            "join" => {
                self.expect(Tok::LParen, "'('")?;
                let (a, ga) = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let (b, gb) = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                let g = ga.join(&gb).map_err(|e| fail(&t, e))?;
                Ok((FamilyExpr::Join(Box::new(a), Box::new(b)), g))
            }
            "delete" => {
                self.expect(Tok::LParen, "'('")?;
                let (a, ga) = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let (x, xt) = self.int()?;
                self.expect(Tok::RParen, "')'")?;
                let (g, _) = ga.delete_vertex(x).map_err(|e| fail(&xt, e))?;
                Ok((FamilyExpr::Delete(Box::new(a), x), g))
            }
            "minus_edge" => {
                self.expect(Tok::LParen, "'('")?;
                let (a, ga) = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let (u, ut) = self.int()?;
                self.expect(Tok::Comma, "','")?;
                let (v, _) = self.int()?;
                self.expect(Tok::RParen, "')'")?;
                let g = ga.delete_edge(u, v).map_err(|e| fail(&ut, e))?;
                Ok((FamilyExpr::MinusEdge(Box::new(a), u, v), g))
            }
            _ => Err(ParseError::at(t.line, t.column, ParseErrorKind::UnknownFamily(name))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_empty};
    use proptest::prelude::*;

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, make_path(3).unwrap());
        let g = parse_edge_list("# a comment\n4\n\n# more\n0 3\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        let err = parse_edge_list("three\n").unwrap_err();
        assert_eq!((err.line, err.kind), (1, ParseErrorKind::MalformedHeader));
        let err = parse_edge_list("").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MalformedHeader);

        let err = parse_edge_list("3\n0 1\n  0 3\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 3));
        assert!(matches!(err.kind, ParseErrorKind::Graph(GraphError::VertexOutOfRange { .. })));

        let err = parse_edge_list("3\n0 1\n0 1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Graph(GraphError::DuplicateEdge(0, 1)));
        let err = parse_edge_list("3\n1 1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Graph(GraphError::SelfLoop(1)));
        let err = parse_edge_list("3\n2 1\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MalformedEdge(_)));
        let err = parse_edge_list("3\n0 1 2\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MalformedEdge(_)));
    }

    #[test]
    fn family_expressions() {
        let j = make_complete(3).unwrap().join(&make_empty(2).unwrap()).unwrap();
        assert_eq!(parse_family_expr("join(K3,E2)").unwrap(), j);
        assert_eq!(parse_family_expr(" join ( K 3 ,\n E2 ) ").unwrap(), j);
        let tight = parse_family_expr("minus_edge(join(K3,E2),0,3)").unwrap();
        assert_eq!(tight, j.delete_edge(0, 3).unwrap());
        assert_eq!(tight.edge_count(), 8);
        let d = parse_family_expr("delete(join(K3,E2),0)").unwrap();
        assert_eq!(d, make_complete(2).unwrap().join(&make_empty(2).unwrap()).unwrap());
    }

    #[test]
    fn family_errors() {
        let err = parse_family_expr("join(K3,Q2)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 9));
        assert_eq!(err.kind, ParseErrorKind::UnknownFamily("Q".into()));

        let err = parse_family_expr("delete(K3,5)").unwrap_err();
        assert_eq!(err.column, 11);
        assert!(matches!(err.kind, ParseErrorKind::Graph(GraphError::VertexOutOfRange { .. })));

        let err = parse_family_expr("minus_edge(E3,0,1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Graph(GraphError::NoSuchEdge(0, 1)));
        assert!(parse_family_expr("C2").is_err());
        assert!(parse_family_expr("K3)").is_err());
        assert!(parse_family_expr("join(K3,E2").is_err());
        assert!(parse_family_expr("").is_err());
        assert!(parse_family_expr("K99999999999999999999999").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = FamilyExpr> {
        let leaf = prop_oneof![
            (0usize..6).prop_map(FamilyExpr::Complete),
            (0usize..6).prop_map(FamilyExpr::Empty),
            (3usize..7).prop_map(FamilyExpr::Cycle),
            (0usize..6).prop_map(FamilyExpr::Path),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| FamilyExpr::Join(Box::new(a), Box::new(b))),
                (inner.clone(), 0usize..8).prop_map(|(a, x)| FamilyExpr::Delete(Box::new(a), x)),
                (inner, 0usize..8, 0usize..8)
                    .prop_map(|(a, u, v)| FamilyExpr::MinusEdge(Box::new(a), u, v)),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(expr in arb_expr()) {
            let text = expr.to_string();
            match expr.eval() {
                Ok(g) => {
                    prop_assert_eq!(FamilyExpr::parse(&text).unwrap(), expr);
                    prop_assert_eq!(parse_family_expr(&text).unwrap(), g);
                }
                Err(_) => prop_assert!(parse_family_expr(&text).is_err()),
            }
        }
    }
}
