//! Parser for the term grammar: products and quotients of `x!`, `(e)!`,
//! `binomial(e,e)`, `rf(e,e)`, `(q)^e` and rational functions, with
//! affine arguments. Positions in errors are 1-based character columns.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::linear::LinearForm;
use super::term::TermExpression;
use crate::error::Error;
use crate::exactalg::poly::{MultiPoly, Vars};
use crate::exactalg::ratfun::RationalFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Bang,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => n.to_string(),
        Tok::Ident(s) => alloc::format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Bang => "`!`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: alloc::format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((t, pos));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug)]
enum Node {
    Num(BigInt),
    Sym(String),
    Neg(Box<Ast>),
    Bin(Op, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Fact(Box<Ast>),
    Call(String, Vec<Ast>),
}

#[derive(Clone, Debug)]
struct Ast {
    node: Node,
    pos: usize,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), Error> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&alloc::format!("expected {}", describe(&t))))
        }
    }

    fn unexpected(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: alloc::format!("{msg}, found {}", describe(self.peek())),
        }
    }

    fn expr(&mut self) -> Result<Ast, Error> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Op::Add,
                Tok::Minus => Op::Sub,
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            lhs = Ast {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn term(&mut self) -> Result<Ast, Error> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => Op::Mul,
                Tok::Slash => Op::Div,
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.unary()?;
            lhs = Ast {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> Result<Ast, Error> {
        match self.peek() {
            Tok::Minus => {
                let (_, pos) = self.bump();
                let inner = self.unary()?;
                Ok(Ast {
                    node: Node::Neg(Box::new(inner)),
                    pos,
                })
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast, Error> {
        let base = self.postfix()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, pos) = self.bump();
        let exp = self.exponent()?;
        Ok(Ast {
            node: Node::Pow(Box::new(base), Box::new(exp)),
            pos,
        })
    }

    fn exponent(&mut self) -> Result<Ast, Error> {
        if *self.peek() == Tok::Minus {
            let (_, pos) = self.bump();
            let inner = self.exponent()?;
            return Ok(Ast {
                node: Node::Neg(Box::new(inner)),
                pos,
            });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Ast, Error> {
        let mut a = self.atom()?;
        while *self.peek() == Tok::Bang {
            let (_, pos) = self.bump();
            a = Ast {
                node: Node::Fact(Box::new(a)),
                pos,
            };
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Ast, Error> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Ast { node: Node::Num(n), pos })
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Ast {
                        node: Node::Sym(name),
                        pos,
                    });
                }
                self.bump();
                let mut args = Vec::new();
                loop {
                    args.push(self.expr()?);
                    match self.peek() {
                        Tok::Comma => {
                            self.bump();
                        }
                        Tok::RParen => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.unexpected("expected `,` or `)`")),
                    }
                }
                Ok(Ast {
                    node: Node::Call(name, args),
                    pos,
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("expected an expression")),
        }
    }
}

fn parse_ast(text: &str) -> Result<Ast, Error> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected an operator"));
    }
    Ok(e)
}

fn to_term(a: &Ast, vars: &Vars) -> Result<TermExpression, Error> {
    match &a.node {
        Node::Num(n) => Ok(TermExpression::constant(vars, BigRational::from_integer(n.clone()))),
        Node::Sym(s) => match vars.index_of(s) {
            Some(i) => Ok(TermExpression::from_poly(MultiPoly::var(vars, i))),
            None => Err(Error::UnknownSymbol {
                pos: a.pos,
                name: s.clone(),
            }),
        },
        Node::Neg(x) => Ok(to_term(x, vars)?.scale(&-BigRational::from_integer(1.into()))),
        Node::Bin(op, l, r) => {
            let lt = to_term(l, vars)?;
            let rt = to_term(r, vars)?;
            match op {
                Op::Mul => Ok(lt.mul(&rt)),
                Op::Div => {
                    if rt.is_zero() {
                        return Err(Error::Syntax {
                            pos: a.pos,
                            msg: "division by zero".into(),
                        });
                    }
                    lt.div(&rt)
                }
                Op::Add | Op::Sub => {
                    if !lt.is_rational() || !rt.is_rational() {
                        return Err(Error::Syntax {
                            pos: a.pos,
                            msg: "only rational factors may be added inside a term".into(),
                        });
                    }
                    let (x, y) = (lt.rational_factor(), rt.rational_factor());
                    let s = if *op == Op::Add { &x + &y } else { &x - &y };
                    Ok(TermExpression::from_ratfun(&s))
                }
            }
        }
        Node::Pow(b, e) => {
            let bt = to_term(b, vars)?;
            let et = to_term(e, vars)?;
            if et.is_rational() {
                if let Some(c) = et.rational_factor().constant_value() {
                    if !c.is_integer() {
                        return Err(Error::Syntax {
                            pos: e.pos,
                            msg: "constant exponents must be integers".into(),
                        });
                    }
                    let m = c.to_integer().to_i32().ok_or_else(|| Error::Syntax {
                        pos: e.pos,
                        msg: "exponent too large".into(),
                    })?;
                    if m < 0 && bt.is_zero() {
                        return Err(Error::Syntax {
                            pos: a.pos,
                            msg: "division by zero".into(),
                        });
                    }
                    return bt.pow(m);
                }
            }
            let exponent = affine(&et, e.pos)?;
            let base = if bt.is_rational() {
                bt.rational_factor().constant_value()
            } else {
                None
            };
            match base {
                Some(q) if !q.is_zero() => Ok(TermExpression::power(vars, q, exponent)),
                _ => Err(Error::BadPowerBase { pos: b.pos }),
            }
        }
        Node::Fact(x) => {
            let arg = affine(&to_term(x, vars)?, x.pos)?;
            Ok(TermExpression::factorial(vars, arg, 1))
        }
        Node::Call(name, args) => {
            let two = |what: &str| -> Result<(LinearForm, LinearForm), Error> {
                if args.len() != 2 {
                    return Err(Error::Syntax {
                        pos: a.pos,
                        msg: alloc::format!("{what} takes two arguments, got {}", args.len()),
                    });
                }
                Ok((
                    affine(&to_term(&args[0], vars)?, args[0].pos)?,
                    affine(&to_term(&args[1], vars)?, args[1].pos)?,
                ))
            };
            match name.as_str() {
                "binomial" => {
                    let (u, l) = two("binomial")?;
                    Ok(TermExpression::binomial(vars, u, l, 1))
                }
                "rf" => {
                    let (b, c) = two("rf")?;
                    Ok(TermExpression::rising(vars, b, c, 1))
                }
                "factorial" => {
                    if args.len() != 1 {
                        return Err(Error::Syntax {
                            pos: a.pos,
                            msg: "factorial takes one argument".into(),
                        });
                    }
                    let arg = affine(&to_term(&args[0], vars)?, args[0].pos)?;
                    Ok(TermExpression::factorial(vars, arg, 1))
                }
                _ => Err(Error::Syntax {
                    pos: a.pos,
                    msg: alloc::format!("unknown function `{name}`"),
                }),
            }
        }
    }
}

fn affine(t: &TermExpression, pos: usize) -> Result<LinearForm, Error> {
    let bad = || Error::NonAffine {
        pos,
        what: t.to_string(),
    };
    if !t.is_rational() {
        return Err(bad());
    }
    let r = t.rational_factor();
    let Some(d) = r.denom().constant_value() else {
        return Err(bad());
    };
    LinearForm::from_poly(&r.numer().scale(&d.recip())).ok_or_else(bad)
}

/// Parses a single term.
pub fn parse_term(text: &str, vars: &Vars) -> Result<TermExpression, Error> {
    to_term(&parse_ast(text)?, vars)
}

fn collect_summands<'a>(a: &'a Ast, sign: bool, out: &mut Vec<(bool, &'a Ast)>) {
    match &a.node {
        Node::Bin(Op::Add, l, r) => {
            collect_summands(l, sign, out);
            collect_summands(r, sign, out);
        }
        Node::Bin(Op::Sub, l, r) => {
            collect_summands(l, sign, out);
            collect_summands(r, !sign, out);
        }
        _ => out.push((sign, a)),
    }
}

/// Parses a sum of terms such as `2^n+1`. Purely rational summands are
/// combined into one term; zero terms are dropped.
pub fn parse_sum(text: &str, vars: &Vars) -> Result<Vec<TermExpression>, Error> {
    let ast = parse_ast(text)?;
    let mut parts = Vec::new();
    collect_summands(&ast, true, &mut parts);
    let mut rational = RationalFunction::zero(vars);
    let mut terms = Vec::new();
    for (sign, a) in parts {
        let mut t = to_term(a, vars)?;
        if !sign {
            t = t.scale(&-BigRational::from_integer(1.into()));
        }
        if t.is_rational() {
            rational = &rational + &t.rational_factor();
        } else if !t.is_zero() {
            terms.push(t);
        }
    }
    if !rational.is_zero() {
        terms.insert(0, TermExpression::from_ratfun(&rational));
    }
    Ok(terms)
}

/// Parses an affine expression.
pub fn parse_linear(text: &str, vars: &Vars) -> Result<LinearForm, Error> {
    let ast = parse_ast(text)?;
    affine(&to_term(&ast, vars)?, ast.pos)
}

/// Parses a rational function in the declared symbols.
pub fn parse_ratfun(text: &str, vars: &Vars) -> Result<RationalFunction, Error> {
    let ast = parse_ast(text)?;
    let t = to_term(&ast, vars)?;
    if !t.is_rational() {
        return Err(Error::Syntax {
            pos: ast.pos,
            msg: "expected a rational function".into(),
        });
    }
    Ok(t.rational_factor())
}

/// Parses a rational number such as `1/2` or `-3`.
pub fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let vars = Vars::new::<&str>(&[]);
    let ast = parse_ast(text)?;
    let t = to_term(&ast, &vars)?;
    t.is_rational()
        .then(|| t.rational_factor().constant_value())
        .flatten()
        .ok_or_else(|| Error::Syntax {
            pos: ast.pos,
            msg: "expected a rational number".into(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::q_int;

    fn vars() -> Vars {
        Vars::new(&["k", "n", "a", "b", "x", "z"])
    }

    #[test]
    fn two_binomials() {
        let t = parse_term("binomial(n,k)*binomial(a,k)", &vars()).unwrap();
        assert_eq!(t.binomials().len(), 2);
        assert!(t.factorials().is_empty() && t.rising_factorials().is_empty());
    }

    #[test]
    fn sign_rf_and_reciprocal_factorial() {
        let t = parse_term("(-1)^k*rf(a,k)/k!", &vars()).unwrap();
        assert_eq!(t.powers().len(), 1);
        assert_eq!(t.powers()[0].base, q_int(-1));
        assert_eq!(t.rising_factorials().len(), 1);
        assert_eq!(t.factorials().len(), 1);
        assert_eq!(t.factorials()[0].exp, -1);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("binomial(n,)", &vars()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_term("(n*k)!", &vars()), Err(Error::NonAffine { .. })));
        assert!(matches!(parse_term("n^k", &vars()), Err(Error::BadPowerBase { .. })));
        assert!(matches!(parse_term("q!", &vars()), Err(Error::UnknownSymbol { .. })));
    }

    #[test]
    fn rhs_sums() {
        let s = parse_sum("2^n+1", &vars()).unwrap();
        assert_eq!(s.len(), 2);
        let r = parse_sum("(a+b+n)!/a!/b!/n!", &vars()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].factorials().len(), 4);
        assert!(parse_sum("n-n", &vars()).unwrap().is_empty());
    }

    #[test]
    fn render_round_trips() {
        let v = vars();
        for s in [
            "binomial(n,k)*binomial(a,k)",
            "(-1)^k*binomial(a+b,a+k)*binomial(a+n,n+k)*binomial(b+n,b+k)",
            "rf(-2*n-1,k)*rf(x+2*n+2,k)*rf(x-z+1/2,k)/rf((x+1)/2,k)/rf(x/2+1,k)/k!",
            "(2*k-n-1)/(2*(n+1-k))*binomial(n,k)/2^n",
            "k*k!",
            "1/(k*(k+1))",
            "(1/2)^n*(n+a)!^2/(3*a)!",
        ] {
            let t = parse_term(s, &v).unwrap();
            let back = parse_term(&t.to_string(), &v).unwrap();
            assert_eq!(back, t, "{s} -> {t}");
        }
    }
}
