use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::gauss::{forward_owned, GaussRat};
use super::poly::Poly;
use super::ScalarError;

/// Element of `Q(i)(s)` in canonical form `s^shift * num / den`.
///
/// Invariants for a nonzero value: `num(0) != 0`, `den(0) != 0`, `den` monic
/// and `gcd(num, den) = 1`. Zero is `shift = 0, num = 0, den = 1`. Two equal
/// field elements therefore always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    shift: i32,
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { shift: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { shift: 0, num: Poly::constant(c), den: Poly::one() }
    }

    /// The indeterminate `s = q^{1/2}`.
    pub fn s() -> Self {
        Self::s_pow(1)
    }

    pub fn s_pow(e: i32) -> Self {
        RatFunc { shift: e, num: Poly::one(), den: Poly::one() }
    }

    /// `sum_e c_e s^e` for a Laurent polynomial given as (exponent, coefficient) pairs.
    pub fn laurent(terms: &[(i32, i64)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, &(e, c)| acc + Self::s_pow(e) * Self::constant(GaussRat::from_int(c)))
    }

    pub fn from_parts(shift: i32, num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(shift, num, den))
    }

    fn normalize(mut shift: i32, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        shift += vn as i32 - vd as i32;
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
        }
        let lead = den.lead().cloned().expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero lead");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial (denominator 1).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Returns the value as a Gaussian-rational constant, if it is one.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        (self.shift == 0 && self.num.degree() == Some(0) && self.den.is_one()).then(|| self.num.coeffs()[0].clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let lead = self.num.lead().expect("nonzero").inv().expect("nonzero lead");
        Some(RatFunc { shift: -self.shift, num: self.den.scale(&lead), den: self.num.scale(&lead) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    /// Exact evaluation at `s = s0`.
    pub fn eval(&self, s0: &GaussRat) -> Result<GaussRat, ScalarError> {
        if self.is_zero() {
            return Ok(GaussRat::zero());
        }
        let d = self.den.eval(s0);
        let p = s0.pow(self.shift as i64).ok_or(ScalarError::Pole)?;
        let n = self.num.eval(s0);
        n.checked_div(&d).map(|v| &v * &p).ok_or(ScalarError::Pole)
    }

    /// Complex conjugation of the coefficients, fixing `s`.
    pub fn conj(&self) -> Self {
        RatFunc { shift: self.shift, num: self.num.conj(), den: self.den.conj() }
    }

    pub fn pow(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + rhs.shift;
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { shift, num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() { (self.num.clone(), rhs.den.clone()) } else { (self.num.exact_div(&g1), rhs.den.exact_div(&g1)) };
        let (n2, d1) = if g2.is_one() { (rhs.num.clone(), self.den.clone()) } else { (rhs.num.exact_div(&g2), self.den.exact_div(&g2)) };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        // den is a product of monic factors, so only the leading normalization of num matters
        RatFunc { shift, num, den }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - shift) as usize);
        let b = rhs.num.shift_up((rhs.shift - shift) as usize);
        if self.den == rhs.den {
            return RatFunc::normalize(shift, a.add(&b), self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let da = self.den.exact_div(&g);
        let db = rhs.den.exact_div(&g);
        let num = a.mul(&db).add(&b.mul(&da));
        RatFunc::normalize(shift, num, da.mul(&rhs.den))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

forward_owned!(RatFunc);

fn fmt_coeff_term(out: &mut String, c: &GaussRat, e: i64, first: bool) {
    let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into()) {
        (true, -c)
    } else {
        (false, c.clone())
    };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let coeff = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
    match (mag.is_one(), e) {
        (_, 0) => out.push_str(&coeff),
        (true, 1) => out.push('s'),
        (true, _) => out.push_str(&format!("s^{e}")),
        (false, 1) => out.push_str(&format!("{coeff}*s")),
        (false, _) => out.push_str(&format!("{coeff}*s^{e}")),
    }
}

fn fmt_laurent(p: &Poly, shift: i64) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        fmt_coeff_term(&mut out, c, i as i64 + shift, first);
        first = false;
    }
    out
}

impl fmt::Display for RatFunc {
    /// Exact string form `(numerator)/(denominator)`, with the numerator
    /// written as a Laurent polynomial in `s`, e.g. `(s^2 - s^-2)/(1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", fmt_laurent(&self.num, self.shift as i64), fmt_laurent(&self.den, 0))
    }
}

/// Parses a Laurent polynomial such as `3/2*s^-2 - s + (1+2*i)`.
fn parse_laurent(src: &str) -> Result<RatFunc, ScalarError> {
    let bad = |m: &str| ScalarError::Parse(format!("{m} in '{src}'"));
    let text: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut acc = RatFunc::zero();
    if text == "0" {
        return Ok(acc);
    }
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        }
        // coefficient: parenthesized Gaussian or a plain rational
        let mut coeff = GaussRat::one();
        let mut has_coeff = false;
        if pos < bytes.len() && bytes[pos] == b'(' {
            let close = text[pos..].find(')').ok_or_else(|| bad("unclosed '('"))? + pos;
            coeff = text[pos + 1..close].parse()?;
            pos = close + 1;
            has_coeff = true;
        } else {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            if pos > start {
                coeff = text[start..pos].parse()?;
                has_coeff = true;
            }
        }
        let mut exp = 0i32;
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b's' {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                if pos < bytes.len() && bytes[pos] == b'-' {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = text[start..pos].parse().map_err(|_| bad("bad exponent"))?;
            }
        } else if !has_coeff {
            return Err(bad("expected term"));
        }
        let term = RatFunc::s_pow(exp) * RatFunc::constant(&coeff * &GaussRat::from_int(sign));
        acc = acc + term;
        if pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            return Err(bad("unexpected character"));
        }
    }
    Ok(acc)
}

impl FromStr for RatFunc {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let Some(split) = t.find(")/(") else {
            return parse_laurent(t);
        };
        let num = t[..split].strip_prefix('(').ok_or_else(|| ScalarError::Parse(format!("missing '(' in '{t}'")))?;
        let den = t[split + 3..].strip_suffix(')').ok_or_else(|| ScalarError::Parse(format!("missing ')' in '{t}'")))?;
        let n = parse_laurent(num)?;
        let d = parse_laurent(den)?;
        n.checked_div(&d).ok_or(ScalarError::DivisionByZero)
    }
}
