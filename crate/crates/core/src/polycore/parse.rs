use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{PolyError, Polynomial, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, PolyError> {
        let bytes: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                toks.push((Tok::Num(s.parse().expect("digits")), start));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(bytes[start..i].iter().collect()), start));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), i));
                i += 1;
            } else if c == '\u{2212}' {
                // unicode minus sign
                toks.push((Tok::Op('-'), i));
                i += 1;
            } else {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::End, bytes.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a, S> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let c = rhs.constant_term();
                    if rhs.num_terms() > 1 || (rhs.num_terms() == 1 && c.is_zero()) {
                        return Err(PolyError::Syntax {
                            pos,
                            msg: "division by a non-constant expression".into(),
                        });
                    }
                    if c.is_zero() {
                        return Err(PolyError::Syntax {
                            pos,
                            msg: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => {
                let e = n.to_u32().ok_or(PolyError::BadExponent { pos })?;
                Ok(base.pow(e))
            }
            Tok::Op('-') => Err(PolyError::BadExponent { pos }),
            Tok::Op('(') => {
                // allow a parenthesised integer exponent
                let inner = self.expr()?;
                if self.bump() != Tok::Op(')') {
                    return Err(PolyError::Syntax {
                        pos,
                        msg: "expected `)`".into(),
                    });
                }
                let c = inner.constant_term();
                if inner.num_terms() > 1 || (inner.num_terms() == 1 && c.is_zero()) {
                    return Err(PolyError::BadExponent { pos });
                }
                if !c.is_integer() {
                    return Err(PolyError::BadExponent { pos });
                }
                let e = c.to_integer().to_u32().ok_or(PolyError::BadExponent { pos })?;
                Ok(base.pow(e))
            }
            _ => Err(PolyError::BadExponent { pos }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Polynomial::constant(self.dim(), Rat::from_integer(n))),
            Tok::Ident(name) => match self.vars.iter().position(|v| v.as_ref() == name) {
                Some(j) => Ok(Polynomial::var(self.dim(), j)),
                None => Err(PolyError::UnknownVariable { name, pos }),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(PolyError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            Tok::Op(c) => Err(PolyError::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// Parses a `+ - * / ^` expression over the named variables into canonical
/// sparse form. Division is only allowed by nonzero constants, so
/// `3/4*Z1` and `Z1/2` are both fine.
pub fn parse_polynomial<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<Polynomial, PolyError> {
    let lexer = Lexer::new(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
        vars: variables,
    };
    let out = p.expr()?;
    if p.peek() != &Tok::End {
        return p.syntax("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;

    #[test]
    fn reports_positions() {
        let v = ["x", "y"];
        assert_eq!(
            parse_polynomial("x + * y", &v),
            Err(PolyError::Syntax {
                pos: 4,
                msg: "unexpected `*`".into()
            })
        );
        assert_eq!(
            parse_polynomial("x + w", &v),
            Err(PolyError::UnknownVariable {
                name: "w".into(),
                pos: 4
            })
        );
        assert_eq!(parse_polynomial("x^-1", &v), Err(PolyError::BadExponent { pos: 2 }));
        assert_eq!(parse_polynomial("x^y", &v), Err(PolyError::BadExponent { pos: 2 }));
        assert!(matches!(parse_polynomial("(x + y", &v), Err(PolyError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_polynomial("x / y", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x / 0", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x y", &v), Err(PolyError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn rational_literals_and_powers() {
        let v = ["x"];
        let p = parse_polynomial("(1 - x/2)^3", &v).unwrap();
        assert_eq!(p.to_text(&v), "1 - 3/2*x + 3/4*x^2 - 1/8*x^3");
        assert_eq!(p.coeff(&[2]), rat(3, 4));
        let q = parse_polynomial("x^(2)", &v).unwrap();
        assert_eq!(q.to_text(&v), "x^2");
    }
}
