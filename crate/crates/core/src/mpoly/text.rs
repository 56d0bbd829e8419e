//! Canonical polynomial text: a deterministic printer and a parser that
//! round-trips it.
//!
//! Terms are sorted descending under the registry's natural weighted-graded
//! lexicographic order, so homogeneous polynomials come out sorted by
//! leading variable: `16*G2^4*G4 - 4*G2^3*G3^2 - 128*G2^2*G4^2 + ...`.
//! Unit coefficients are suppressed (`G2`, not `1*G2`), rational signs fold
//! into the `+`/`-` separators, and prime-field residues print as their
//! canonical representatives in `[0, p)` with no sign folding.

use super::{Mono, MonoOrder, MpolyError, MultiPoly, VarRegistry};
use crate::coeff::{Coeff, PrimeFieldElement, Rational};
use std::fmt;
use std::sync::Arc;

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let order = MonoOrder::graded(self.registry());
        for (idx, (m, c)) in self.sorted_terms(&order).into_iter().enumerate() {
            let (neg, mag) = match c.display_negative() {
                Some(mag) => (true, mag),
                None => (false, c.clone()),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono_text = m.text(self.registry());
            if mono_text.is_empty() {
                write!(f, "{}", mag.coeff_text())?;
            } else if mag.is_one_value() {
                write!(f, "{mono_text}")?;
            } else {
                write!(f, "{}*{mono_text}", mag.coeff_text())?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(String),
    Ident(String),
}

fn tokenize(s: &str) -> Result<Vec<Token>, MpolyError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            c if c.is_ascii_digit() => {
                let mut lit = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        lit.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(lit));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            other => {
                return Err(MpolyError::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a, C: Coeff> {
    tokens: Vec<Token>,
    pos: usize,
    reg: &'a Arc<VarRegistry>,
    // Turns an optional numerator/denominator literal pair into a
    // coefficient; `(None, _)` is the implicit 1.
    literal: &'a dyn Fn(Option<(&str, Option<&str>)>) -> Result<C, MpolyError>,
}

impl<'a, C: Coeff> Parser<'a, C> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<String, MpolyError> {
        match self.next() {
            Some(Token::Int(s)) => Ok(s),
            other => Err(MpolyError::Parse(format!("expected {what}, found {other:?}"))),
        }
    }

    /// term := [int ['/' int]] ('*'? ident ['^' int])*
    /// (a bare integer, a bare monomial, or coefficient '*' monomial)
    fn parse_term(&mut self) -> Result<(Mono, C), MpolyError> {
        let mut coeff_lit: Option<(String, Option<String>)> = None;
        if let Some(Token::Int(_)) = self.peek() {
            let num = self.expect_int("integer")?;
            let den = if matches!(self.peek(), Some(Token::Slash)) {
                self.next();
                Some(self.expect_int("denominator")?)
            } else {
                None
            };
            coeff_lit = Some((num, den));
        }
        let mut exps = vec![0u16; self.reg.arity()];
        let mut saw_var = false;
        loop {
            // optional '*' between factors
            let mut consumed_star = false;
            if matches!(self.peek(), Some(Token::Star)) {
                self.next();
                consumed_star = true;
            }
            match self.peek() {
                Some(Token::Ident(_)) => {
                    let name = match self.next() {
                        Some(Token::Ident(n)) => n,
                        _ => unreachable!(),
                    };
                    let idx = self
                        .reg
                        .index_of(&name)
                        .ok_or(MpolyError::UnknownVariable(name))?;
                    let e: u16 = if matches!(self.peek(), Some(Token::Caret)) {
                        self.next();
                        let lit = self.expect_int("exponent")?;
                        lit.parse()
                            .map_err(|_| MpolyError::Parse(format!("exponent {lit} out of range")))?
                    } else {
                        1
                    };
                    let sum = exps[idx] as u32 + e as u32;
                    if sum > u16::MAX as u32 {
                        return Err(MpolyError::Parse("exponent overflow".into()));
                    }
                    exps[idx] = sum as u16;
                    saw_var = true;
                }
                _ if consumed_star => {
                    return Err(MpolyError::Parse("dangling '*'".into()));
                }
                _ => break,
            }
        }
        if coeff_lit.is_none() && !saw_var {
            return Err(MpolyError::Parse("empty term".into()));
        }
        let c = (self.literal)(
            coeff_lit
                .as_ref()
                .map(|(n, d)| (n.as_str(), d.as_deref())),
        )?;
        Ok((Mono::from_exps(&exps), c))
    }

    fn parse_sum(&mut self) -> Result<MultiPoly<C>, MpolyError> {
        let mut poly = MultiPoly::zero(self.reg.clone());
        let mut first = true;
        loop {
            let negate = match self.peek() {
                None if first => return Err(MpolyError::Parse("empty input".into())),
                None => break,
                Some(Token::Minus) => {
                    self.next();
                    true
                }
                Some(Token::Plus) if !first => {
                    self.next();
                    false
                }
                Some(_) if first => false,
                Some(t) => {
                    return Err(MpolyError::Parse(format!("expected '+' or '-', found {t:?}")))
                }
            };
            if self.peek().is_none() {
                return Err(MpolyError::Parse("trailing sign".into()));
            }
            let (m, c) = self.parse_term()?;
            poly.add_term(m, if negate { c.neg_ref() } else { c });
            first = false;
        }
        Ok(poly)
    }
}

fn parse_with<C: Coeff>(
    reg: &Arc<VarRegistry>,
    s: &str,
    literal: &dyn Fn(Option<(&str, Option<&str>)>) -> Result<C, MpolyError>,
) -> Result<MultiPoly<C>, MpolyError> {
    let tokens = tokenize(s)?;
    if tokens.len() == 1 {
        if let Token::Int(lit) = &tokens[0] {
            if lit == "0" {
                return Ok(MultiPoly::zero(reg.clone()));
            }
        }
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        reg,
        literal,
    };
    p.parse_sum()
}

impl MultiPoly<Rational> {
    /// Parse canonical rational-coefficient text (`-1/3*G2`,
    /// `16*G2^4*G4 - 27*G3^4`, `kappa^2 - lambda`, `0`).
    pub fn parse(reg: &Arc<VarRegistry>, s: &str) -> Result<Self, MpolyError> {
        parse_with(reg, s, &|lit| match lit {
            None => Ok(Rational::one()),
            Some((num, den)) => {
                let text = match den {
                    None => num.to_string(),
                    Some(d) => format!("{num}/{d}"),
                };
                Ok(Rational::parse(&text)?)
            }
        })
    }
}

impl MultiPoly<PrimeFieldElement> {
    /// Parse canonical 𝔽_p text (integer literals only; residues reduce
    /// mod `p`).
    pub fn parse_mod(reg: &Arc<VarRegistry>, s: &str, p: u64) -> Result<Self, MpolyError> {
        parse_with(reg, s, &|lit| match lit {
            None => Ok(PrimeFieldElement::new(1, p)),
            Some((num, None)) => {
                let n: u128 = num
                    .parse()
                    .map_err(|_| MpolyError::Parse(format!("integer {num} out of range")))?;
                Ok(PrimeFieldElement::new((n % p as u128) as u64, p))
            }
            Some((_, Some(_))) => Err(MpolyError::Parse(
                "fraction literals are not canonical over a prime field".into(),
            )),
        })
    }
}
