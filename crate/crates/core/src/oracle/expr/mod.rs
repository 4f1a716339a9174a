//! Validity oracle for Python-style arithmetic expressions.
//!
//! A string is valid when it parses under the expression grammar below and
//! evaluates without error under exact integer/rational arithmetic within a
//! configurable budget. The grammar is the subset of Python 3 reachable from
//! the expression alphabet: binary `+ - * / % ** //`, chainable unary `+ -`,
//! chained comparisons `== != < > <= >=`, bit shifts `<< >>`, parentheses
//! (including the empty tuple `()`), and integer literals. Chained
//! comparisons short-circuit, so `1<0<1/0` is valid while `0<1<1/0` is not.

mod value;

pub use value::{EvalBudget, EvalError};

use value::{BinOp, CmpOp, Machine, Num, Value};

use num_bigint::BigInt;

use crate::oracle::{Validator, Verdict};

/// Validates a complete expression string.
pub fn eval_expression(text: &str, budget: EvalBudget) -> Verdict {
    match eval_to_value(text, budget) {
        Ok(_) => Verdict::valid(),
        Err(reason) => Verdict::invalid(reason),
    }
}

fn eval_to_value(text: &str, budget: EvalBudget) -> Result<Value, String> {
    let tokens = lex(text).map_err(|pos| format!("syntax error at {pos}"))?;
    let ast = Parser::new(&tokens)
        .parse()
        .map_err(|pos| format!("syntax error at {pos}"))?;
    let mut machine = Machine::new(budget);
    eval(&ast, &mut machine).map_err(|e| e.reason().to_string())
}

/// Expression validator with a fixed evaluation budget.
#[derive(Debug, Clone, Default)]
pub struct ExprValidator {
    pub budget: EvalBudget,
}

impl ExprValidator {
    pub fn new(budget: EvalBudget) -> Self {
        Self { budget }
    }
}

impl Validator for ExprValidator {
    fn check_text(&self, text: &str) -> Verdict {
        eval_expression(text, self.budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    DoubleStar,
    DoubleSlash,
    Shl,
    Shr,
    LParen,
    RParen,
    Cmp(CmpOp),
}

/// Maximal-munch scan; `Err(pos)` is the byte position of the offending char.
fn lex(text: &str) -> Result<Vec<Tok>, usize> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                // decimal literals may not have leading zeros unless all zero
                if digits.starts_with('0') && digits.bytes().any(|d| d != b'0') {
                    return Err(start);
                }
                out.push(Tok::Int(digits.to_string()));
                continue;
            }
            b'+' => out.push(Tok::Plus),
            b'-' => out.push(Tok::Minus),
            b'%' => out.push(Tok::Percent),
            b'(' => out.push(Tok::LParen),
            b')' => out.push(Tok::RParen),
            b'*' => {
                if bytes.get(i + 1) == Some(&b'*') {
                    out.push(Tok::DoubleStar);
                    i += 1;
                } else {
                    out.push(Tok::Star);
                }
            }
            b'/' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    out.push(Tok::DoubleSlash);
                    i += 1;
                } else {
                    out.push(Tok::Slash);
                }
            }
            b'<' => match bytes.get(i + 1) {
                Some(&b'<') => {
                    out.push(Tok::Shl);
                    i += 1;
                }
                Some(&b'=') => {
                    out.push(Tok::Cmp(CmpOp::Le));
                    i += 1;
                }
                _ => out.push(Tok::Cmp(CmpOp::Lt)),
            },
            b'>' => match bytes.get(i + 1) {
                Some(&b'>') => {
                    out.push(Tok::Shr);
                    i += 1;
                }
                Some(&b'=') => {
                    out.push(Tok::Cmp(CmpOp::Ge));
                    i += 1;
                }
                _ => out.push(Tok::Cmp(CmpOp::Gt)),
            },
            b'=' => {
                // '=' is only legal as part of '=='; assignment is not an expression
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Tok::Cmp(CmpOp::Eq));
                    i += 1;
                } else {
                    return Err(i);
                }
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Tok::Cmp(CmpOp::Ne));
                    i += 1;
                } else {
                    return Err(i);
                }
            }
            _ => return Err(i),
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Debug)]
enum Node {
    Int(BigInt),
    EmptyTuple,
    Unary(UnaryOp, Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    /// Chained comparison `a op1 b op2 c ...`; evaluation short-circuits.
    Compare(Box<Node>, Vec<(CmpOp, Node)>),
}

#[derive(Debug, Clone, Copy)]
enum UnaryOp {
    Pos,
    Neg,
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Tok]) -> Self {
        Self { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(mut self) -> Result<Node, usize> {
        let node = self.comparison()?;
        if self.pos != self.tokens.len() {
            return Err(self.pos);
        }
        Ok(node)
    }

    fn comparison(&mut self) -> Result<Node, usize> {
        let first = self.shift()?;
        let mut rest = Vec::new();
        while let Some(Tok::Cmp(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            rest.push((op, self.shift()?));
        }
        if rest.is_empty() {
            Ok(first)
        } else {
            Ok(Node::Compare(Box::new(first), rest))
        }
    }

    fn shift(&mut self) -> Result<Node, usize> {
        let mut node = self.arith()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Shl) => BinOp::Shl,
                Some(Tok::Shr) => BinOp::Shr,
                _ => break,
            };
            self.pos += 1;
            node = Node::Binary(op, Box::new(node), Box::new(self.arith()?));
        }
        Ok(node)
    }

    fn arith(&mut self) -> Result<Node, usize> {
        let mut node = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            node = Node::Binary(op, Box::new(node), Box::new(self.term()?));
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Node, usize> {
        let mut node = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                Some(Tok::DoubleSlash) => BinOp::FloorDiv,
                Some(Tok::Percent) => BinOp::Mod,
                _ => break,
            };
            self.pos += 1;
            node = Node::Binary(op, Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Node, usize> {
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
                Ok(Node::Unary(UnaryOp::Pos, Box::new(self.factor()?)))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Node::Unary(UnaryOp::Neg, Box::new(self.factor()?)))
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, usize> {
        let base = self.atom()?;
        if let Some(Tok::DoubleStar) = self.peek() {
            self.pos += 1;
            // the right operand of ** admits unary signs and binds right
            let exp = self.factor()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, usize> {
        let err = self.pos;
        match self.bump() {
            Some(Tok::Int(digits)) => Ok(Node::Int(digits.parse().expect("lexed digits"))),
            Some(Tok::LParen) => {
                if let Some(Tok::RParen) = self.peek() {
                    self.pos += 1;
                    return Ok(Node::EmptyTuple);
                }
                let inner = self.comparison()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.pos),
                }
            }
            _ => Err(err),
        }
    }
}

fn eval(node: &Node, m: &mut Machine) -> Result<Value, EvalError> {
    match node {
        Node::Int(v) => Ok(Value::Num(Num::int(v.clone()))),
        Node::EmptyTuple => Ok(Value::Tuple),
        Node::Unary(op, inner) => {
            let v = eval(inner, m)?;
            match op {
                UnaryOp::Pos => m.unary_pos(v),
                UnaryOp::Neg => m.unary_neg(v),
            }
        }
        Node::Binary(op, a, b) => {
            let a = eval(a, m)?;
            let b = eval(b, m)?;
            m.binary(*op, a, b)
        }
        Node::Compare(first, rest) => {
            let mut prev = eval(first, m)?;
            for (op, operand) in rest {
                let next = eval(operand, m)?;
                if !m.compare(*op, &prev, &next)? {
                    // later operands are never evaluated
                    return Ok(Value::bool(false));
                }
                prev = next;
            }
            Ok(Value::bool(true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(text: &str) -> bool {
        eval_expression(text, EvalBudget::default()).is_valid()
    }

    #[test]
    fn basic_arithmetic() {
        assert!(check("1+1"));
        assert!(check("9*9"));
        assert!(!check("1/0"));
        assert!(!check("1%0"));
        assert!(!check("1//0"));
    }

    #[test]
    fn unary_chains() {
        assert!(check("++1"));
        assert!(check("----1"));
        assert!(check("1--1"));
        assert!(!check("1+"));
    }

    #[test]
    fn chained_comparisons_short_circuit() {
        assert!(check("1<2<3"));
        assert!(check("1<0<1/0"));
        assert!(!check("0<1<1/0"));
        assert!(!check("3>2>1>0>1/0"));
    }

    #[test]
    fn assignment_is_not_an_expression() {
        assert!(!check("1=2"));
        assert!(check("1==2"));
        assert!(!check("1===2"));
    }

    #[test]
    fn empty_tuple_cases() {
        assert!(check("()"));
        assert!(check("()+()"));
        assert!(check("()*3"));
        assert!(!check("()*()"));
        assert!(!check("()+1"));
        assert!(!check("-()"));
        assert!(check("()==1<1/0")); // () == 1 is False, short-circuits
    }

    #[test]
    fn power_binds_right_and_past_unary() {
        // -2**2 == -(2**2)
        assert!(check("-2**2"));
        assert!(check("2**-1"));
        assert!(check("2**3**2"));
        assert!(!check("2***3"));
    }

    #[test]
    fn leading_zero_literals() {
        assert!(check("000"));
        assert!(!check("011"));
        assert!(check("0"));
        assert!(check("10"));
    }

    #[test]
    fn shifts_bind_between_additive_and_comparison() {
        assert!(check("1<<2"));
        assert!(check("2<<1>2"));
        assert!(check("1<<88-6"));
        assert!(check("-6>>-0"));
        assert!(!check("1<<-1"));
        assert!(!check("1<<(1/1)"));
        assert!(!check("()<<1"));
    }

    #[test]
    fn budget_flags_astronomical_powers() {
        let v = eval_expression("9**99999", EvalBudget::default());
        assert!(!v.is_valid());
        assert_eq!(v.reason(), Some("budget"));
    }
}
