//! Syntax of the basic modal language: the [`Formula`] tree, a recursive
//! descent parser for the ASCII concrete syntax, a printer that the parser
//! reads back, and the structural transformations (negation normal form,
//! modal depth, atom collection).
//!
//! Concrete syntax:
//!
//! ```text
//! formula := or
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "[]" unary | "<>" unary
//!          | atom | "true" | "false" | "(" formula ")"
//! ```
//!
//! `□ ◇ ¬ ∧ ∨` are accepted as aliases of `[] <> ~ & |`. Chains of `&` or
//! `|` are built right-nested, the same shape [`Formula::conj`] and
//! [`Formula::disj`] produce.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A finite set of atom identifiers.
pub type AtomSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    /// `□^n f`.
    pub fn box_power(n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// Right-nested conjunction; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        Self::fold_right(items, Formula::Top, Formula::and)
    }

    /// Right-nested disjunction; the empty disjunction is `false`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        Self::fold_right(items, Formula::Bot, Formula::or)
    }

    fn fold_right<I, F>(items: I, empty: Formula, op: F) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        F: Fn(Formula, Formula) -> Formula,
    {
        let mut items: Vec<Formula> = items.into_iter().collect();
        match items.pop() {
            None => empty,
            Some(last) => items.into_iter().rev().fold(last, |acc, f| op(f, acc)),
        }
    }

    /// Maximum nesting of `□`/`◇`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(l, r) | Formula::Or(l, r) => l.modal_depth().max(r.modal_depth()),
            Formula::Box(f) | Formula::Diamond(f) => f.modal_depth() + 1,
        }
    }

    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => f.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Negation normal form: negations are pushed down to atoms using the
    /// De Morgan laws and the modal dualities `¬□φ ≡ ◇¬φ`, `¬◇φ ≡ □¬φ`.
    pub fn to_nnf(&self) -> Formula {
        self.nnf(true)
    }

    fn nnf(&self, positive: bool) -> Formula {
        match (self, positive) {
            (Formula::Atom(p), true) => Formula::Atom(p.clone()),
            (Formula::Atom(p), false) => Formula::not(Formula::Atom(p.clone())),
            (Formula::Top, true) | (Formula::Bot, false) => Formula::Top,
            (Formula::Top, false) | (Formula::Bot, true) => Formula::Bot,
            (Formula::Not(f), _) => f.nnf(!positive),
            (Formula::And(l, r), true) => Formula::and(l.nnf(true), r.nnf(true)),
            (Formula::And(l, r), false) => Formula::or(l.nnf(false), r.nnf(false)),
            (Formula::Or(l, r), true) => Formula::or(l.nnf(true), r.nnf(true)),
            (Formula::Or(l, r), false) => Formula::and(l.nnf(false), r.nnf(false)),
            (Formula::Box(f), true) => Formula::boxed(f.nnf(true)),
            (Formula::Box(f), false) => Formula::diamond(f.nnf(false)),
            (Formula::Diamond(f), true) => Formula::diamond(f.nnf(true)),
            (Formula::Diamond(f), false) => Formula::boxed(f.nnf(false)),
        }
    }

    /// True if every `Not` node has an atom as its child.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf() && r.is_nnf(),
            Formula::Box(f) | Formula::Diamond(f) => f.is_nnf(),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// Binding strength used by the printer: 0 = or, 1 = and, 2 = unary/atomic.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 0,
        Formula::And(..) => 1,
        _ => 2,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => write!(out, "{p}"),
            Formula::Top => write!(out, "true"),
            Formula::Bot => write!(out, "false"),
            Formula::Not(f) => write_unary(out, "~", f),
            Formula::Box(f) => write_unary(out, "[]", f),
            Formula::Diamond(f) => write_unary(out, "<>", f),
            Formula::And(l, r) => write_binary(out, " & ", 1, l, r),
            Formula::Or(l, r) => write_binary(out, " | ", 0, l, r),
        }
    }
}

fn write_unary(out: &mut fmt::Formatter<'_>, op: &str, f: &Formula) -> fmt::Result {
    if precedence(f) < 2 {
        write!(out, "{op}({f})")
    } else {
        write!(out, "{op}{f}")
    }
}

fn write_binary(
    out: &mut fmt::Formatter<'_>,
    op: &str,
    level: u8,
    l: &Formula,
    r: &Formula,
) -> fmt::Result {
    // Chains nest to the right, so a left operand of the same level needs
    // parentheses and a right one does not.
    if precedence(l) <= level {
        write!(out, "({l})")?;
    } else {
        write!(out, "{l}")?;
    }
    out.write_str(op)?;
    if precedence(r) < level {
        write!(out, "({r})")
    } else {
        write!(out, "{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token {token:?} at column {column}")]
    UnknownToken { token: String, column: usize },
    #[error("unexpected {found} at column {column}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
        column: usize,
    },
    #[error("unexpected end of input at column {column}, expected {expected}")]
    UnexpectedEnd { expected: &'static str, column: usize },
}

impl ParseError {
    /// 1-based column of the offending character.
    pub fn column(&self) -> usize {
        match self {
            ParseError::UnknownToken { column, .. }
            | ParseError::Unexpected { column, .. }
            | ParseError::UnexpectedEnd { column, .. } => *column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Box,
    Diamond,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "atom {s:?}"),
            Token::True => f.write_str("\"true\""),
            Token::False => f.write_str("\"false\""),
            Token::Not => f.write_str("\"~\""),
            Token::And => f.write_str("\"&\""),
            Token::Or => f.write_str("\"|\""),
            Token::Box => f.write_str("\"[]\""),
            Token::Diamond => f.write_str("\"<>\""),
            Token::LParen => f.write_str("\"(\""),
            Token::RParen => f.write_str("\")\""),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let (token, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' => (Token::Not, 1),
            '&' | '∧' => (Token::And, 1),
            '|' | '∨' => (Token::Or, 1),
            '□' => (Token::Box, 1),
            '◇' => (Token::Diamond, 1),
            '(' => (Token::LParen, 1),
            ')' => (Token::RParen, 1),
            '[' if chars.get(i + 1) == Some(&']') => (Token::Box, 2),
            '<' if chars.get(i + 1) == Some(&'>') => (Token::Diamond, 2),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let end = chars[i..]
                    .iter()
                    .position(|c| !(c.is_ascii_alphanumeric() || *c == '_'))
                    .map_or(chars.len(), |n| i + n);
                let word: String = chars[i..end].iter().collect();
                let token = match word.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(word),
                };
                (token, end - i)
            }
            _ => {
                let token = match (c, chars.get(i + 1)) {
                    ('[' | '<', Some(next)) => format!("{c}{next}"),
                    _ => c.to_string(),
                };
                return Err(ParseError::UnknownToken { token, column });
            }
        };
        tokens.push((token, column));
        i += width;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self, expected: &'static str) -> Result<(Token, usize), ParseError> {
        match self.tokens.get(self.pos) {
            Some(tok) => {
                self.pos += 1;
                Ok(tok.clone())
            }
            None => Err(ParseError::UnexpectedEnd {
                expected,
                column: self.end_column,
            }),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut operands = vec![self.and()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            operands.push(self.and()?);
        }
        Ok(Formula::disj(operands))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut operands = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            operands.push(self.unary()?);
        }
        Ok(Formula::conj(operands))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "a formula";
        let (token, column) = self.next(EXPECTED)?;
        match token {
            Token::Not => Ok(Formula::not(self.unary()?)),
            Token::Box => Ok(Formula::boxed(self.unary()?)),
            Token::Diamond => Ok(Formula::diamond(self.unary()?)),
            Token::Ident(name) => Ok(Formula::Atom(name)),
            Token::True => Ok(Formula::Top),
            Token::False => Ok(Formula::Bot),
            Token::LParen => {
                let inner = self.or()?;
                match self.next("\")\"")? {
                    (Token::RParen, _) => Ok(inner),
                    (other, column) => Err(ParseError::Unexpected {
                        found: other.to_string(),
                        expected: "\")\"",
                        column,
                    }),
                }
            }
            other => Err(ParseError::Unexpected {
                found: other.to_string(),
                expected: EXPECTED,
                column,
            }),
        }
    }
}

/// Parses the concrete syntax described in the module documentation.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let f = parser.or()?;
    match parser.tokens.get(parser.pos) {
        None => Ok(f),
        Some((token, column)) => Err(ParseError::Unexpected {
            found: token.to_string(),
            expected: "end of input",
            column: *column,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::atom(name)
    }

    #[test]
    fn parses_box_of_conjunction() {
        assert_eq!(
            parse("[](p & ~q)").unwrap(),
            Formula::boxed(Formula::and(p("p"), Formula::not(p("q"))))
        );
    }

    #[test]
    fn parses_negated_box() {
        assert_eq!(parse("~[]p").unwrap(), Formula::not(Formula::boxed(p("p"))));
    }

    #[test]
    fn and_binds_tighter_than_or() {
        assert_eq!(
            parse("p & q | r").unwrap(),
            Formula::or(Formula::and(p("p"), p("q")), p("r"))
        );
        assert_eq!(
            parse("r | p & q").unwrap(),
            Formula::or(p("r"), Formula::and(p("p"), p("q")))
        );
    }

    #[test]
    fn chains_nest_right() {
        assert_eq!(
            parse("a | b | c").unwrap(),
            Formula::or(p("a"), Formula::or(p("b"), p("c")))
        );
        assert_eq!(
            parse("a & b & c").unwrap(),
            Formula::conj([p("a"), p("b"), p("c")])
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("□(p ∧ ¬q) ∨ ◇r").unwrap(), parse("[](p & ~q) | <>r").unwrap());
    }

    #[test]
    fn constants_and_whitespace() {
        assert_eq!(parse("  true ").unwrap(), Formula::Top);
        assert_eq!(parse("[][]false").unwrap(), Formula::box_power(2, Formula::Bot));
        assert_eq!(parse("truely").unwrap(), p("truely"));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        assert_eq!(
            parse("p & $").unwrap_err(),
            ParseError::UnknownToken {
                token: "$".into(),
                column: 5
            }
        );
        assert_eq!(parse("p &").unwrap_err().column(), 4);
        assert_eq!(parse("(p").unwrap_err().column(), 3);
        assert_eq!(parse("p q").unwrap_err().column(), 3);
        assert_eq!(parse("[p]").unwrap_err().column(), 1);
        assert_eq!(parse(")").unwrap_err().column(), 1);
        assert!(matches!(parse("").unwrap_err(), ParseError::UnexpectedEnd { column: 1, .. }));
    }

    #[test]
    fn printer_output() {
        assert_eq!(parse("~[]p").unwrap().to_nnf().to_string(), "<>~p");
        let f = Formula::and(Formula::and(p("a"), p("b")), Formula::or(p("c"), p("d")));
        assert_eq!(f.to_string(), "(a & b) & (c | d)");
        assert_eq!(Formula::not(Formula::and(p("a"), p("b"))).to_string(), "~(a & b)");
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(
            Formula::not(Formula::boxed(p("p"))).to_nnf(),
            Formula::diamond(Formula::not(p("p")))
        );
        assert_eq!(p("p").to_nnf(), p("p"));
        assert_eq!(Formula::not(Formula::not(p("p"))).to_nnf(), p("p"));
        assert_eq!(Formula::not(Formula::Top).to_nnf(), Formula::Bot);
        assert_eq!(Formula::not(Formula::Bot).to_nnf(), Formula::Top);
        assert_eq!(
            parse("~<>(p | ~q)").unwrap().to_nnf(),
            parse("[](~p & q)").unwrap()
        );
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(Formula::box_power(2, Formula::Bot).modal_depth(), 2);
        assert_eq!(p("p").modal_depth(), 0);
        let f = Formula::and(
            Formula::boxed(p("p")),
            Formula::diamond(Formula::boxed(p("q"))),
        );
        assert_eq!(f.modal_depth(), 2);
    }

    #[test]
    fn atoms_examples() {
        let f = Formula::and(p("p"), Formula::not(p("q")));
        assert_eq!(f.atoms(), ["p", "q"].map(String::from).into());
        assert!(Formula::Bot.atoms().is_empty());
        assert_eq!(Formula::boxed(p("p")).atoms(), ["p".to_string()].into());
    }

    #[test]
    fn empty_junctions() {
        assert_eq!(Formula::conj([]), Formula::Top);
        assert_eq!(Formula::disj([]), Formula::Bot);
        assert_eq!(Formula::disj([p("a")]), p("a"));
    }
}
