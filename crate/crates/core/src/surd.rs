//! Tiny expression grammar for exact vector components such as `"-1/sqrt(2)"`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | atom
//! atom   := number | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurdError {
    #[error("unexpected end of expression in {0:?}")]
    UnexpectedEnd(String),
    #[error("unexpected character {found:?} at offset {pos} in {input:?}")]
    Unexpected {
        input: String,
        pos: usize,
        found: char,
    },
    #[error("square root of negative value in {0:?}")]
    NegativeSqrt(String),
    #[error("division by zero in {0:?}")]
    DivisionByZero(String),
}

pub fn eval(input: &str) -> Result<f64, SurdError> {
    let mut p = Parser {
        input,
        chars: input
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        pos: 0,
    };
    let v = p.expr()?;
    match p.peek() {
        None => Ok(v),
        Some((pos, found)) => Err(SurdError::Unexpected {
            input: input.to_string(),
            pos,
            found,
        }),
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn unexpected(&self) -> SurdError {
        match self.peek() {
            Some((pos, found)) => SurdError::Unexpected {
                input: self.input.to_string(),
                pos,
                found,
            },
            None => SurdError::UnexpectedEnd(self.input.to_string()),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), SurdError> {
        match self.peek() {
            Some((_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected()),
        }
    }

    fn expr(&mut self) -> Result<f64, SurdError> {
        let mut acc = self.term()?;
        while let Some((_, c @ ('+' | '-'))) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, SurdError> {
        let mut acc = self.unary()?;
        while let Some((_, c @ ('*' | '/'))) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc *= rhs;
            } else {
                if rhs == 0.0 {
                    return Err(SurdError::DivisionByZero(self.input.to_string()));
                }
                acc /= rhs;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, SurdError> {
        if let Some((_, '-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<f64, SurdError> {
        match self.peek() {
            Some((_, '(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some((_, 's')) => {
                for want in "sqrt".chars() {
                    self.expect(want)?;
                }
                self.expect('(')?;
                let v = self.expr()?;
                self.expect(')')?;
                if v < 0.0 {
                    return Err(SurdError::NegativeSqrt(self.input.to_string()));
                }
                Ok(v.sqrt())
            }
            Some((_, c)) if c.is_ascii_digit() || c == '.' => {
                let mut text = String::new();
                while let Some((_, c)) = self.peek() {
                    if c.is_ascii_digit() || c == '.' {
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                text.parse::<f64>().map_err(|_| self.unexpected())
            }
            _ => Err(self.unexpected()),
        }
    }
}
