//! Text syntax for towers and tower equations.
//!
//! ```text
//! rational := int | int '/' int          (int may carry a leading '-')
//! atom     := rational | '(' product ')'
//! expr     := atom ('^' expr)? | atom '^^' nat
//! product  := expr ('*' expr)*
//! equation := product '=' product
//! ```
//!
//! `^` is right-associative and binds tighter than `*`, so `2^2^3` is
//! `2^8`. Literals are interpreted over a fixed base `B`: anything used as
//! a value (rather than as a coefficient inside an exponent) must be an
//! integer power of `B`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::equality::{verify_sides, EquationInstance, Verdict};
use crate::error::{Error, Result};
use crate::exact::{check_base, power_of_base, Rational};
use crate::tower::{ExpSum, PowNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxTree {
    Rational {
        value: Rational,
        text: String,
        pos: Pos,
    },
    Power(Box<SyntaxTree>, Box<SyntaxTree>),
    Tower(Box<SyntaxTree>, u32),
    Product(Vec<SyntaxTree>),
    Equation(Box<SyntaxTree>, Box<SyntaxTree>),
}

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxTree::Rational { value, .. } => write!(f, "{value}"),
            SyntaxTree::Power(a, b) => write!(f, "Power({a}, {b})"),
            SyntaxTree::Tower(a, h) => write!(f, "Tower({a}, {h})"),
            SyntaxTree::Product(xs) => {
                let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
                write!(f, "Product({})", parts.join(", "))
            }
            SyntaxTree::Equation(l, r) => write!(f, "Equation({l}, {r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt, String),
    Slash,
    Caret,
    CaretCaret,
    Star,
    Equals,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(_, s) => format!("'{s}'"),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::CaretCaret => "'^^'".into(),
            Tok::Star => "'*'".into(),
            Tok::Equals => "'='".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let pos = Pos { line, column: col };
        let ch = chars[i];
        let mut width = 1;
        let tok = match ch {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '/' => Some(Tok::Slash),
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Equals),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '^' if chars.get(i + 1) == Some(&'^') => {
                width = 2;
                Some(Tok::CaretCaret)
            }
            '^' => Some(Tok::Caret),
            c if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) =>
            {
                let start = i;
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                width = j - start;
                let s: String = chars[start..j].iter().collect();
                let v: BigInt = s.parse().expect("digits");
                Some(Tok::Int(v, s))
            }
            c => return Err(syntax(pos, format!("unexpected character '{c}'"))),
        };
        if let Some(t) = tok {
            out.push((t, pos));
        }
        i += width;
        col += width;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!(
                    "expected {}, found {}",
                    want.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn equation_or_product(&mut self) -> Result<SyntaxTree> {
        let lhs = self.product()?;
        let tree = if *self.peek() == Tok::Equals {
            self.bump();
            let rhs = self.product()?;
            SyntaxTree::Equation(Box::new(lhs), Box::new(rhs))
        } else {
            lhs
        };
        match self.peek() {
            Tok::End => Ok(tree),
            t => Err(syntax(self.pos(), format!("unexpected {}", t.describe()))),
        }
    }

    fn product(&mut self) -> Result<SyntaxTree> {
        let mut factors = vec![self.expr()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.expr()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            SyntaxTree::Product(factors)
        })
    }

    fn expr(&mut self) -> Result<SyntaxTree> {
        let atom = self.atom()?;
        match self.peek() {
            Tok::Caret => {
                self.bump();
                let rhs = self.expr()?;
                Ok(SyntaxTree::Power(Box::new(atom), Box::new(rhs)))
            }
            Tok::CaretCaret => {
                self.bump();
                let h = self.height()?;
                Ok(SyntaxTree::Tower(Box::new(atom), h))
            }
            _ => Ok(atom),
        }
    }

    fn height(&mut self) -> Result<u32> {
        let pos = self.pos();
        let height_error = |message: String| Error::Height {
            line: pos.line,
            column: pos.column,
            message,
        };
        match self.bump().0 {
            Tok::Int(v, s) => {
                if *self.peek() == Tok::Slash {
                    return Err(height_error(format!(
                        "tower height must be a natural number, got {s}/..."
                    )));
                }
                match v.to_u32() {
                    Some(h) if h >= 1 => Ok(h),
                    _ if v.is_positive() => {
                        Err(height_error(format!("tower height {s} is too large")))
                    }
                    _ => Err(height_error(format!(
                        "tower height must be at least 1, got {s}"
                    ))),
                }
            }
            Tok::End => Err(syntax(pos, "expected a tower height after '^^'")),
            t => Err(height_error(format!(
                "tower height must be a natural number literal, found {}",
                t.describe()
            ))),
        }
    }

    fn atom(&mut self) -> Result<SyntaxTree> {
        let pos = self.pos();
        match self.bump().0 {
            Tok::LParen => {
                let inner = self.product()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Int(n, s) => {
                if *self.peek() != Tok::Slash {
                    return Ok(SyntaxTree::Rational {
                        value: Rational::from_integer(n),
                        text: s,
                        pos,
                    });
                }
                self.bump();
                let dpos = self.pos();
                match self.bump().0 {
                    Tok::Int(d, ds) => {
                        let value =
                            Rational::new(n, d).map_err(|_| syntax(dpos, "zero denominator"))?;
                        Ok(SyntaxTree::Rational {
                            value,
                            text: format!("{s}/{ds}"),
                            pos,
                        })
                    }
                    t => Err(syntax(
                        dpos,
                        format!("expected a denominator, found {}", t.describe()),
                    )),
                }
            }
            t => Err(syntax(
                pos,
                format!("expected a number or '(', found {}", t.describe()),
            )),
        }
    }
}

/// Parses an expression or an equation.
pub fn parse(text: &str) -> Result<SyntaxTree> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    p.equation_or_product()
}

/// `r · B^e`; `r` stays separate so that coefficients inside exponents keep
/// their written form.
struct Value {
    r: Rational,
    e: ExpSum,
    text: String,
}

struct Lowerer {
    base: u64,
}

impl Lowerer {
    fn value(&self, t: &SyntaxTree) -> Result<Value> {
        match t {
            SyntaxTree::Rational { value, text, .. } => Ok(Value {
                r: value.clone(),
                e: ExpSum::zero(),
                text: text.clone(),
            }),
            SyntaxTree::Product(xs) => {
                let mut acc = Value {
                    r: Rational::one(),
                    e: ExpSum::zero(),
                    text: String::new(),
                };
                let mut texts = Vec::new();
                for x in xs {
                    let v = self.value(x)?;
                    acc.r = &acc.r * &v.r;
                    acc.e = acc.e.add(&v.e);
                    texts.push(v.text);
                }
                acc.e = acc.e.canonicalize(self.base);
                acc.text = texts.join("*");
                Ok(acc)
            }
            SyntaxTree::Power(a, b) => {
                let base_exp = self.pownum(a)?;
                let y = self.as_exponent(&self.value(b)?);
                Ok(Value {
                    r: Rational::one(),
                    e: base_exp.pow(&y).exponent().clone(),
                    text: t.to_string(),
                })
            }
            SyntaxTree::Tower(a, h) => Ok(Value {
                r: Rational::one(),
                e: self.pownum(a)?.tower(*h as i64)?.exponent().clone(),
                text: t.to_string(),
            }),
            SyntaxTree::Equation(..) => Err(Error::Lowering("an equation is not a value".into())),
        }
    }

    /// The real number `v` as an exponent-space sum.
    fn as_exponent(&self, v: &Value) -> ExpSum {
        if v.e.is_zero() || v.r.is_zero() {
            ExpSum::constant(v.r.clone())
        } else {
            ExpSum::chain(v.r.clone(), v.e.clone()).canonicalize(self.base)
        }
    }

    /// A value that must be a positive power `B^E`.
    fn pownum(&self, t: &SyntaxTree) -> Result<PowNum> {
        let v = self.value(t)?;
        match power_of_base(&v.r, self.base) {
            Some(z) => {
                PowNum::from_exponent(self.base, &v.e.add(&ExpSum::constant(Rational::from(z))))
            }
            None => Err(Error::AtomNotPowerOfBase {
                literal: if v.text.is_empty() {
                    v.r.to_string()
                } else {
                    v.text
                },
                base: self.base,
            }),
        }
    }
}

/// Lowers an expression tree to the number it denotes.
pub fn lower(tree: &SyntaxTree, base: u64) -> Result<PowNum> {
    check_base(base)?;
    Lowerer { base }.pownum(tree)
}

/// A lowered equation `lhs = rhs`, with its `(a, b, c, k, m, n)` form when
/// it has the shape `x^^k * y^^m = z^^n` over rational exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: PowNum,
    pub rhs: PowNum,
    pub instance: Option<EquationInstance>,
}

impl Equation {
    pub fn verify(&self, max_bits: u64) -> Verdict {
        verify_sides(
            self.lhs.exponent(),
            self.rhs.exponent(),
            self.lhs.base(),
            max_bits,
        )
    }
}

pub fn lower_equation(tree: &SyntaxTree, base: u64) -> Result<Equation> {
    let SyntaxTree::Equation(l, r) = tree else {
        return Err(Error::Lowering("expected an equation 'lhs = rhs'".into()));
    };
    let lhs = lower(l, base)?;
    let rhs = lower(r, base)?;
    let instance = instance_shape(l, r, base);
    Ok(Equation { lhs, rhs, instance })
}

fn instance_shape(l: &SyntaxTree, r: &SyntaxTree, base: u64) -> Option<EquationInstance> {
    let tower = |t: &SyntaxTree| -> Option<(Rational, i64)> {
        let SyntaxTree::Tower(x, h) = t else {
            return None;
        };
        let e = lower(x, base).ok()?;
        Some((e.exponent().as_constant()?.clone(), *h as i64))
    };
    let SyntaxTree::Product(xs) = l else {
        return None;
    };
    let [x, y] = xs.as_slice() else { return None };
    let (a, k) = tower(x)?;
    let (b, m) = tower(y)?;
    let (c, n) = tower(r)?;
    EquationInstance::new(base, a, b, c, k, m, n).ok()
}

pub fn parse_pownum(text: &str, base: u64) -> Result<PowNum> {
    lower(&parse(text)?, base)
}

pub fn parse_equation(text: &str, base: u64) -> Result<Equation> {
    lower_equation(&parse(text)?, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::Outcome;
    use crate::tower::print_canonical;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn atom(s: &str) -> PowNum {
        PowNum::atom(2, q(s)).unwrap()
    }

    #[test]
    fn parse_shapes() {
        let t = parse("2^^3 * 2^^3 = 4^^2").unwrap();
        assert_eq!(
            t.to_string(),
            "Equation(Product(Tower(2, 3), Tower(2, 3)), Tower(4, 2))"
        );
        let t = parse("(1/2)^((1/2)^(1/2))").unwrap();
        assert_eq!(t.to_string(), "Power(1/2, Power(1/2, 1/2))");
        assert!(matches!(
            parse("2^^"),
            Err(Error::Syntax {
                line: 1,
                column: 4,
                ..
            })
        ));
    }

    #[test]
    fn height_errors() {
        assert!(matches!(parse("2^^0"), Err(Error::Height { .. })));
        assert!(matches!(parse("2^^-1"), Err(Error::Height { .. })));
        assert!(matches!(parse("2^^3/2"), Err(Error::Height { .. })));
        assert!(matches!(parse("2^^(3)"), Err(Error::Height { .. })));
    }

    #[test]
    fn syntax_error_positions() {
        assert!(matches!(
            parse("2 *\n  * 3"),
            Err(Error::Syntax {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(parse("(2"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("2 $ 3"),
            Err(Error::Syntax { column: 3, .. })
        ));
        assert!(matches!(parse("1/0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn lower_examples() {
        assert_eq!(parse_pownum("1/4", 2).unwrap(), atom("-2"));
        assert_eq!(
            parse_pownum("3", 2).unwrap_err(),
            Error::AtomNotPowerOfBase {
                literal: "3".into(),
                base: 2
            }
        );
        assert_eq!(parse_pownum("2^(1/2)", 2).unwrap(), atom("1/2"));
        assert_eq!(parse_pownum("2^2^3", 2).unwrap(), atom("8"));
        assert_eq!(
            parse_pownum("(1/2)^^3", 2).unwrap(),
            atom("-1").tower(3).unwrap()
        );
        assert_eq!(
            parse_pownum("3^^2", 3).unwrap(),
            PowNum::atom(3, q("3")).unwrap()
        );
        // the height-3 tower of 1/2 written out
        let e = parse_pownum("(1/2)^((1/2)^(1/2))", 2).unwrap();
        assert_eq!(e, atom("-1").tower(3).unwrap());
    }

    #[test]
    fn three_identities_verify() {
        for text in [
            "2^^3 * 2^^3 = 4^^2",
            "(1/2)^^3 * (1/2)^^3 = (1/4)^^3",
            "(2^(-1/2))^^2 * (2^(-1/2))^^2 = (1/2)^^3",
        ] {
            let eq = parse_equation(text, 2).unwrap();
            assert!(eq.instance.is_some(), "{text}");
            let v = eq.verify(256);
            assert_eq!(v.outcome, Outcome::Equal, "{text}");
            assert!(v.method.is_exact());
        }
        let eq = parse_equation("2^^2 * 2^^2 = 4^^2", 2).unwrap();
        assert_eq!(eq.verify(256).outcome, Outcome::NotEqual);
    }

    #[test]
    fn round_trips() {
        let samples = [
            atom("-1/2").tower(3).unwrap(),
            atom("2").tower(3).unwrap(),
            atom("0").tower(2).unwrap(),
            atom("1/3")
                .tower(3)
                .unwrap()
                .mul(&atom("-2/5").tower(2).unwrap())
                .unwrap(),
            atom("5").tower(3).unwrap(),
            atom("-3/2").tower(4).unwrap(),
        ];
        for x in samples {
            let text = print_canonical(&x);
            assert_eq!(parse_pownum(&text, 2).unwrap(), x, "{text}");
        }
    }
}
