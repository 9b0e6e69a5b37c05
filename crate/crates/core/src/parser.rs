//! Surface syntax. Derived operators and negation are eliminated while
//! parsing, so the result is always in negation normal form.

use crate::formula::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Unary(UnOp),
    Binary(BinOp),
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnOp {
    X,
    Y,
    WY,
    F,
    G,
    O,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    U,
    W,
    R,
    M,
    S,
    WS,
    B,
    WB,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position, message: &str| ParseError {
        position,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '!' => {
                i += 1;
                Tok::Not
            }
            '&' => {
                i += if src[i..].starts_with("&&") { 2 } else { 1 };
                Tok::And
            }
            '|' => {
                i += if src[i..].starts_with("||") { 2 } else { 1 };
                Tok::Or
            }
            '-' if src[i..].starts_with("->") => {
                i += 2;
                Tok::Implies
            }
            '<' if src[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            'A'..='Z' => {
                i += 1;
                match c {
                    'X' => Tok::Unary(UnOp::X),
                    'Y' => Tok::Unary(UnOp::Y),
                    'F' => Tok::Unary(UnOp::F),
                    'G' => Tok::Unary(UnOp::G),
                    'O' => Tok::Unary(UnOp::O),
                    'H' => Tok::Unary(UnOp::H),
                    'U' => Tok::Binary(BinOp::U),
                    'W' => Tok::Binary(BinOp::W),
                    'R' => Tok::Binary(BinOp::R),
                    'M' => Tok::Binary(BinOp::M),
                    'S' => Tok::Binary(BinOp::S),
                    'B' => Tok::Binary(BinOp::B),
                    _ => return Err(err(start, &format!("unknown operator '{c}'"))),
                }
            }
            'a'..='z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "tt" => Tok::True,
                    "ff" => Tok::False,
                    "wY" => Tok::Unary(UnOp::WY),
                    "wS" => Tok::Binary(BinOp::WS),
                    "wB" => Tok::Binary(BinOp::WB),
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => return Err(err(start, &format!("unexpected character '{c}'"))),
        };
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

/// Unelaborated syntax, kept only long enough to push negations inward.
enum Ast {
    True,
    False,
    Prop(String),
    Not(Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    Implies(Box<Ast>, Box<Ast>),
    Iff(Box<Ast>, Box<Ast>),
    Unary(UnOp, Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.at(),
            message: message.to_string(),
        })
    }

    fn iff(&mut self) -> Result<Ast, ParseError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Ast::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Ast, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Ast::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Ast::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.binary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.binary()?;
            lhs = Ast::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn binary(&mut self) -> Result<Ast, ParseError> {
        let lhs = self.unary()?;
        if let Tok::Binary(op) = *self.peek() {
            self.bump();
            let rhs = self.binary()?;
            return Ok(Ast::Binary(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        let here = self.pos;
        match self.bump() {
            Tok::Not => Ok(Ast::Not(Box::new(self.unary()?))),
            Tok::Unary(op) => Ok(Ast::Unary(op, Box::new(self.unary()?))),
            Tok::True => Ok(Ast::True),
            Tok::False => Ok(Ast::False),
            Tok::Ident(name) => Ok(Ast::Prop(name)),
            Tok::LParen => {
                let inner = self.iff()?;
                let close = self.pos;
                if self.bump() != Tok::RParen {
                    self.pos = close;
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => {
                self.pos = here;
                self.error("expected an operand")
            }
        }
    }
}

fn elaborate(ast: &Ast, neg: bool) -> Formula {
    let e = elaborate;
    match ast {
        Ast::True => {
            if neg {
                Formula::ff()
            } else {
                Formula::tt()
            }
        }
        Ast::False => {
            if neg {
                Formula::tt()
            } else {
                Formula::ff()
            }
        }
        Ast::Prop(p) => {
            if neg {
                Formula::neg_prop(p)
            } else {
                Formula::prop(p)
            }
        }
        Ast::Not(a) => e(a, !neg),
        Ast::And(a, b) => {
            if neg {
                Formula::or(e(a, true), e(b, true))
            } else {
                Formula::and(e(a, false), e(b, false))
            }
        }
        Ast::Or(a, b) => {
            if neg {
                Formula::and(e(a, true), e(b, true))
            } else {
                Formula::or(e(a, false), e(b, false))
            }
        }
        Ast::Implies(a, b) => {
            if neg {
                Formula::and(e(a, false), e(b, true))
            } else {
                Formula::or(e(a, true), e(b, false))
            }
        }
        Ast::Iff(a, b) => {
            // (a -> b) & (b -> a), negated as (a & !b) | (b & !a)
            if neg {
                Formula::or(
                    Formula::and(e(a, false), e(b, true)),
                    Formula::and(e(b, false), e(a, true)),
                )
            } else {
                Formula::and(
                    Formula::or(e(a, true), e(b, false)),
                    Formula::or(e(b, true), e(a, false)),
                )
            }
        }
        Ast::Unary(op, a) => {
            let x = e(a, neg);
            match (op, neg) {
                (UnOp::X, _) => Formula::next(x),
                (UnOp::Y, false) | (UnOp::WY, true) => Formula::yesterday(x),
                (UnOp::Y, true) | (UnOp::WY, false) => Formula::weak_yesterday(x),
                (UnOp::F, false) | (UnOp::G, true) => Formula::eventually(x),
                (UnOp::F, true) | (UnOp::G, false) => Formula::globally(x),
                (UnOp::O, false) | (UnOp::H, true) => Formula::once(x),
                (UnOp::O, true) | (UnOp::H, false) => Formula::historically(x),
            }
        }
        Ast::Binary(op, a, b) => {
            let (x, y) = (e(a, neg), e(b, neg));
            use BinOp::*;
            match (op, neg) {
                (U, false) | (R, true) => Formula::until(x, y),
                (R, false) | (U, true) => Formula::release(x, y),
                (W, false) | (M, true) => Formula::weak_until(x, y),
                (M, false) | (W, true) => Formula::strong_release(x, y),
                (S, false) | (WB, true) => Formula::since(x, y),
                (WB, false) | (S, true) => Formula::weak_back(x, y),
                (WS, false) | (B, true) => Formula::weak_since(x, y),
                (B, false) | (WS, true) => Formula::back(x, y),
            }
        }
    }
}

/// Parses a formula and returns its NNF.
pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.iff()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(elaborate(&ast, false))
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_operators_are_eliminated() {
        let p = Formula::prop("p");
        assert_eq!(parse("F p").unwrap(), Formula::until(Formula::tt(), p.clone()));
        assert_eq!(parse("G p").unwrap(), Formula::weak_until(p.clone(), Formula::ff()));
        assert_eq!(parse("O p").unwrap(), Formula::since(Formula::tt(), p.clone()));
        assert_eq!(parse("H p").unwrap(), Formula::weak_since(p, Formula::ff()));
    }

    #[test]
    fn negation_is_pushed_to_leaves() {
        let f = parse("!(p S q)").unwrap();
        assert_eq!(f, parse("!p wB !q").unwrap());
        assert_eq!(parse("!Y p").unwrap(), parse("wY !p").unwrap());
        assert_eq!(parse("!G p").unwrap(), parse("F !p").unwrap());
    }

    #[test]
    fn temporal_binaries_are_right_associative_and_bind_tighter_than_and() {
        assert_eq!(parse("p U q U r").unwrap(), parse("p U (q U r)").unwrap());
        assert_eq!(parse("a & p U q").unwrap(), parse("a & (p U q)").unwrap());
        assert_eq!(parse("a | b & c").unwrap(), parse("a | (b & c)").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("p $ q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("(p").is_err());
        assert!(parse("p q").is_err());
    }

    #[test]
    fn weak_past_keywords() {
        assert_eq!(parse("wY p").unwrap(), Formula::weak_yesterday(Formula::prop("p")));
        assert_eq!(
            parse("p wS q").unwrap(),
            Formula::weak_since(Formula::prop("p"), Formula::prop("q"))
        );
        assert_eq!(parse("w").unwrap(), Formula::prop("w"));
    }
}
