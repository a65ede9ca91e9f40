//! Text syntax for cubic forms.
//!
//! A form is a sum of terms such as `x^3 + 5*w^3 - 1/2*x*y*z`. Variables are
//! `x, y, z, w` or `X0..X3` (either case), coefficients are integers or
//! fractions `a/b`, `*` between factors is optional and whitespace, including
//! newlines, is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{HomogeneousForm, Monomial, Rationals};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for c in self.chars.iter().take(pos) {
            if *c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location(pos);
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect::<String>().parse().unwrap())
    }

    /// Index of a variable name at the cursor.
    fn variable(&mut self) -> Result<Option<usize>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.chars.get(self.pos) else {
            return Ok(None);
        };
        let idx = match c {
            'x' | 'X' if self.chars.get(self.pos + 1).is_some_and(|d| d.is_ascii_digit()) => {
                self.pos += 1;
                let d = self.chars[self.pos];
                self.pos += 1;
                match d.to_digit(10) {
                    Some(i @ 0..=3) => i as usize,
                    _ => return Err(self.error_at(start, format!("unknown variable {c}{d}"))),
                }
            }
            'x' | 'X' => {
                self.pos += 1;
                0
            }
            'y' | 'Y' => {
                self.pos += 1;
                1
            }
            'z' | 'Z' => {
                self.pos += 1;
                2
            }
            'w' | 'W' => {
                self.pos += 1;
                3
            }
            _ => return Ok(None),
        };
        if self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric()) {
            return Err(self.error_at(start, "unknown variable name"));
        }
        Ok(Some(idx))
    }
}

/// A parsed form together with the set of variables it mentions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedForm {
    pub form: HomogeneousForm<BigRational>,
    pub used: [bool; 4],
}

/// Parses a homogeneous cubic in up to four variables.
pub fn parse_cubic(src: &str) -> Result<ParsedForm, ParseError> {
    let mut lx = Lexer::new(src);
    let mut form = HomogeneousForm::zero(4, 3);
    let mut used = [false; 4];
    let mut first = true;
    loop {
        let Some(c) = lx.peek() else {
            if first {
                return Err(lx.error_at(lx.pos, "empty input"));
            }
            break;
        };
        let mut negative = false;
        if c == '+' || c == '-' {
            negative = c == '-';
            lx.pos += 1;
        } else if !first {
            return Err(lx.error_at(lx.pos, format!("expected '+' or '-', found '{c}'")));
        }
        lx.skip_ws();
        let term_start = lx.pos;
        first = false;
        let mut coeff = BigRational::from_integer(1.into());
        let mut explicit_coeff = false;
        if let Some(n) = lx.integer() {
            explicit_coeff = true;
            let mut q = BigRational::from_integer(n);
            if lx.peek() == Some('/') {
                let slash = lx.pos;
                lx.pos += 1;
                let d = lx
                    .integer()
                    .ok_or_else(|| lx.error_at(slash + 1, "expected a denominator"))?;
                if d.is_zero() {
                    return Err(lx.error_at(slash + 1, "zero denominator"));
                }
                q /= BigRational::from_integer(d);
            }
            coeff = q;
        }
        let mut mono: Monomial = [0; 4];
        let mut factors = 0;
        loop {
            let save = lx.pos;
            let star = (factors > 0 || explicit_coeff) && lx.peek() == Some('*');
            if star {
                lx.pos += 1;
            }
            lx.skip_ws();
            let var_pos = lx.pos;
            match lx.variable()? {
                Some(i) => {
                    let mut e: u32 = 1;
                    if lx.peek() == Some('^') {
                        let caret = lx.pos;
                        lx.pos += 1;
                        let n = lx
                            .integer()
                            .ok_or_else(|| lx.error_at(caret + 1, "expected an exponent"))?;
                        e = u32::try_from(n).map_err(|_| lx.error_at(caret + 1, "exponent too large"))?;
                    }
                    let total = mono[i] as u32 + e;
                    if total > 3 {
                        return Err(lx.error_at(var_pos, "degree exceeds 3"));
                    }
                    mono[i] = total as u8;
                    used[i] = true;
                    factors += 1;
                }
                None if star => return Err(lx.error_at(var_pos, "expected a variable after '*'")),
                None => {
                    lx.pos = save;
                    break;
                }
            }
        }
        if factors == 0 && !explicit_coeff {
            let pos = lx.pos;
            return Err(match lx.peek() {
                Some(c) => lx.error_at(pos, format!("unexpected character '{c}'")),
                None => lx.error_at(pos, "expected a term"),
            });
        }
        let degree: u32 = mono.iter().map(|&e| e as u32).sum();
        if degree != 3 {
            return Err(lx.error_at(term_start, format!("term has degree {degree}, expected 3")));
        }
        if negative {
            coeff = -coeff;
        }
        form.add_term(&Rationals, mono, coeff);
    }
    Ok(ParsedForm { form, used })
}

/// Parses a quaternary cubic that involves all four variables.
pub fn parse_surface(src: &str) -> Result<HomogeneousForm<BigRational>, ParseError> {
    let parsed = parse_cubic(src)?;
    if parsed.form.is_zero() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "the form is zero".into(),
        });
    }
    if let Some(i) = parsed.used.iter().position(|u| !u) {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: format!(
                "expected a homogeneous cubic in 4 variables; variable {} does not occur",
                crate::arith::form::VAR_NAMES_4[i]
            ),
        });
    }
    Ok(parsed.form)
}

/// Parses a ternary cubic in `x, y, z`.
pub fn parse_plane_cubic(src: &str) -> Result<HomogeneousForm<BigRational>, ParseError> {
    let parsed = parse_cubic(src)?;
    if parsed.used[3] {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "a plane cubic may only use x, y, z".into(),
        });
    }
    Ok(HomogeneousForm::from_terms(
        &Rationals,
        3,
        3,
        parsed.form.terms().iter().map(|(m, c)| (*m, c.clone())),
    ))
}
