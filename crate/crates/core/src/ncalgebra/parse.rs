//! Text syntax: `[scalar] * L^-2 * r1^-1 * x-1 * xi1 + ...`.
//!
//! Terms are separated by `+`, or by a `-` standing alone between spaces. A
//! scalar factor is written in brackets using the exact scalar syntax; a bare
//! integer or fraction is accepted too. Letters are `L`, `K`, `r<i>`, `x<i>`,
//! `xi<i>` and `xibar<i>`, each with an optional integer exponent `^e`.

use crate::scalar::Field;

use super::AlgebraError;

/// A letter of the text syntax, including the 1-form generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sym {
    Lambda,
    K,
    R(u8),
    X(i8),
    Xi(i8),
    XiBar(i8),
}

/// One parsed term: a coefficient times a product of letters, left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTerm<F: Field> {
    pub coeff: F,
    pub factors: Vec<(Sym, i32)>,
}

fn err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

/// Splits at top-level term separators; returns `(negated, text)` pairs.
fn split_terms(src: &str) -> Result<Vec<(bool, &str)>, AlgebraError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'+' if depth == 0 => {
                out.push((neg, &src[start..i]));
                neg = false;
                start = i + 1;
            }
            b'-' if depth == 0 => {
                let before = src[start..i].trim();
                let spaced_after = bytes.get(i + 1).is_none_or(|c| c.is_ascii_whitespace());
                if before.is_empty() {
                    neg = !neg;
                    start = i + 1;
                } else if i > 0 && bytes[i - 1].is_ascii_whitespace() && spaced_after {
                    out.push((neg, &src[start..i]));
                    neg = true;
                    start = i + 1;
                }
            }
            _ => {}
        }
        if depth < 0 {
            return Err(err("unbalanced ']'"));
        }
    }
    if depth != 0 {
        return Err(err("unbalanced '['"));
    }
    out.push((neg, &src[start..]));
    Ok(out)
}

fn parse_int(s: &str) -> Result<i32, AlgebraError> {
    s.trim().parse().map_err(|_| err(format!("bad integer '{s}'")))
}

fn parse_factor<F: Field>(f: &str) -> Result<Result<(Sym, i32), F>, AlgebraError> {
    let f = f.trim();
    if let Some(body) = f.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or_else(|| err(format!("unclosed scalar '{f}'")))?;
        return Ok(Err(F::parse_scalar(body)?));
    }
    if f.starts_with(|c: char| c.is_ascii_digit()) {
        let v = crate::scalar::GaussRat::parse_scalar(f)?;
        return Ok(Err(F::from_gauss(&v)));
    }
    let (name, exp) = match f.split_once('^') {
        Some((n, e)) => (n.trim(), parse_int(e)?),
        None => (f, 1),
    };
    let label = |rest: &str| -> Result<i8, AlgebraError> {
        let v = parse_int(rest)?;
        i8::try_from(v).map_err(|_| err(format!("label out of range in '{f}'")))
    };
    let sym = if name == "L" {
        Sym::Lambda
    } else if name == "K" {
        Sym::K
    } else if let Some(rest) = name.strip_prefix("xibar") {
        Sym::XiBar(label(rest)?)
    } else if let Some(rest) = name.strip_prefix("xi") {
        Sym::Xi(label(rest)?)
    } else if let Some(rest) = name.strip_prefix('x') {
        Sym::X(label(rest)?)
    } else if let Some(rest) = name.strip_prefix('r') {
        let v = parse_int(rest)?;
        Sym::R(u8::try_from(v).map_err(|_| err(format!("bad radius index in '{f}'")))?)
    } else {
        return Err(err(format!("unknown letter '{name}'")));
    };
    Ok(Ok((sym, exp)))
}

/// Parses a sum of products; `0` parses to the empty sum.
pub fn parse_terms<F: Field>(src: &str) -> Result<Vec<RawTerm<F>>, AlgebraError> {
    if src.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (neg, text) in split_terms(src)? {
        if text.trim().is_empty() {
            return Err(err("empty term"));
        }
        let mut coeff = if neg { -F::one() } else { F::one() };
        let mut factors = Vec::new();
        for f in split_factors(text) {
            match parse_factor::<F>(f)? {
                Ok(l) => factors.push(l),
                Err(c) => coeff = coeff * c,
            }
        }
        out.push(RawTerm { coeff, factors });
    }
    Ok(out)
}

fn split_factors(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}
