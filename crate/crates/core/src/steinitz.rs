//! Steinitz (supernatural) numbers.
//!
//! A Steinitz number is a formal product `∏ p^{r_p}` over all primes with
//! `r_p ∈ ℕ ∪ {∞}`. We store the finitely many primes whose exponent differs
//! from a default that applies to every other prime; the default is `0`
//! (ordinary numbers, `p^∞` patterns) or `∞` (the maximal number Ω).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime};

/// An exponent in `ℕ ∪ {∞}`. Finite values are unbounded naturals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(BigUint),
    Infinite,
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent::Finite(BigUint::zero())
    }

    pub fn finite(e: u64) -> Self {
        Exponent::Finite(BigUint::from(e))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Finite(e) if e.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl Add for &Exponent {
    type Output = Exponent;

    fn add(self, rhs: &Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SteinitzError {
    #[error("Steinitz numbers have no zero")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { divisor: String, dividend: String },
    #[error("empty operand list")]
    EmptyList,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// A supernatural number in canonical form.
///
/// Invariants: every key of `explicit` is prime and no explicit exponent
/// equals the default.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SteinitzNumber {
    explicit: BTreeMap<u64, Exponent>,
    default_infinite: bool,
}

impl Default for SteinitzNumber {
    fn default() -> Self {
        Self::one()
    }
}

impl SteinitzNumber {
    pub fn one() -> Self {
        SteinitzNumber {
            explicit: BTreeMap::new(),
            default_infinite: false,
        }
    }

    /// Ω, the product of `p^∞` over all primes.
    pub fn omega() -> Self {
        SteinitzNumber {
            explicit: BTreeMap::new(),
            default_infinite: true,
        }
    }

    pub fn from_integer(n: u64) -> Result<Self, SteinitzError> {
        if n == 0 {
            return Err(SteinitzError::Zero);
        }
        let explicit = factorize(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::finite(e as u64)))
            .collect();
        Ok(SteinitzNumber {
            explicit,
            default_infinite: false,
        })
    }

    pub fn prime_power(p: u64, e: Exponent) -> Result<Self, SteinitzError> {
        if !is_prime(p) {
            return Err(SteinitzError::NotPrime(p));
        }
        let mut explicit = BTreeMap::new();
        explicit.insert(p, e);
        Ok(Self::canonical(explicit, false))
    }

    fn canonical(mut explicit: BTreeMap<u64, Exponent>, default_infinite: bool) -> Self {
        explicit.retain(|_, e| {
            if default_infinite {
                !e.is_infinite()
            } else {
                !e.is_zero()
            }
        });
        SteinitzNumber {
            explicit,
            default_infinite,
        }
    }

    fn default_exponent(&self) -> Exponent {
        if self.default_infinite {
            Exponent::Infinite
        } else {
            Exponent::zero()
        }
    }

    /// The exponent of the prime `p`.
    pub fn exponent(&self, p: u64) -> Exponent {
        self.explicit
            .get(&p)
            .cloned()
            .unwrap_or_else(|| self.default_exponent())
    }

    /// Primes carrying an exponent other than the default, ascending.
    pub fn explicit(&self) -> impl Iterator<Item = (u64, &Exponent)> {
        self.explicit.iter().map(|(p, e)| (*p, e))
    }

    pub fn default_is_infinite(&self) -> bool {
        self.default_infinite
    }

    pub fn is_one(&self) -> bool {
        !self.default_infinite && self.explicit.is_empty()
    }

    /// True when the number is an ordinary positive integer.
    pub fn is_finite(&self) -> bool {
        !self.default_infinite && self.explicit.values().all(|e| !e.is_infinite())
    }

    /// The integer value, when finite and representable in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut acc = 1u64;
        for (p, e) in &self.explicit {
            let Exponent::Finite(e) = e else {
                return None;
            };
            let e = e.to_u32()?;
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        Some(acc)
    }

    /// The integer value as a big natural, when finite and below `2^max_bits`.
    pub fn to_biguint(&self, max_bits: u64) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        let mut bits = 0u64;
        for (p, e) in &self.explicit {
            let Exponent::Finite(e) = e else {
                return None;
            };
            let e = e.to_u64()?;
            bits = bits.checked_add(e.checked_mul(64 - p.leading_zeros() as u64)?)?;
            if bits > max_bits {
                return None;
            }
        }
        let mut acc = BigUint::one();
        for (p, e) in &self.explicit {
            if let Exponent::Finite(e) = e {
                acc *= BigUint::from(*p).pow(e.to_u32()?);
            }
        }
        Some(acc)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&Exponent, &Exponent) -> Exponent,
    ) -> Self {
        let mut explicit = BTreeMap::new();
        for p in self.explicit.keys().chain(other.explicit.keys()) {
            explicit
                .entry(*p)
                .or_insert_with(|| op(&self.exponent(*p), &other.exponent(*p)));
        }
        let default = op(&self.default_exponent(), &other.default_exponent());
        Self::canonical(explicit, default.is_infinite())
    }

    /// Exponentwise sum, `∞` absorbing.
    pub fn multiply(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// `self | other`: every exponent of `self` is at most the matching one of `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.default_exponent() <= other.default_exponent()
            && self
                .explicit
                .keys()
                .chain(other.explicit.keys())
                .all(|p| self.exponent(*p) <= other.exponent(*p))
    }

    /// Whether the positive integer `n` divides `self`.
    pub fn is_multiple_of(&self, n: u64) -> bool {
        match Self::from_integer(n) {
            Ok(d) => d.divides(self),
            Err(_) => false,
        }
    }

    /// A witness `q` with `self = divisor · q`. Where both exponents are
    /// infinite the witness is not unique; the maximal one (`∞`) is returned.
    pub fn quotient(&self, divisor: &Self) -> Result<Self, SteinitzError> {
        if !divisor.divides(self) {
            return Err(SteinitzError::NotDivisible {
                divisor: divisor.to_string(),
                dividend: self.to_string(),
            });
        }
        Ok(self.combine(divisor, |r, k| match (r, k) {
            (Exponent::Finite(r), Exponent::Finite(k)) => Exponent::Finite(r - k),
            _ => Exponent::Infinite,
        }))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.max(b).clone())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.min(b).clone())
    }

    /// Least common multiple of a nonempty list.
    pub fn lcm_all<'a>(
        items: impl IntoIterator<Item = &'a SteinitzNumber>,
    ) -> Result<Self, SteinitzError> {
        let mut it = items.into_iter();
        let first = it.next().ok_or(SteinitzError::EmptyList)?.clone();
        Ok(it.fold(first, |acc, s| acc.lcm(s)))
    }

    /// Greatest common divisor of a nonempty list.
    pub fn gcd_all<'a>(
        items: impl IntoIterator<Item = &'a SteinitzNumber>,
    ) -> Result<Self, SteinitzError> {
        let mut it = items.into_iter();
        let first = it.next().ok_or(SteinitzError::EmptyList)?.clone();
        Ok(it.fold(first, |acc, s| acc.gcd(s)))
    }

    pub fn parse(text: &str) -> Result<Self, SteinitzError> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let value = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(value)
    }
}

impl FromStr for SteinitzNumber {
    type Err = SteinitzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Ascending prime powers joined by `" * "`, `inf` for `∞`; `1` and `omega`
/// for the two extremes.
impl fmt::Display for SteinitzNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.default_infinite {
            // Every operation keeps default-∞ values equal to Ω.
            debug_assert!(self.explicit.is_empty());
            return f.write_str("omega");
        }
        if self.explicit.is_empty() {
            return f.write_str("1");
        }
        for (idx, (p, e)) in self.explicit.iter().enumerate() {
            if idx > 0 {
                f.write_str(" * ")?;
            }
            match e {
                Exponent::Finite(e) if e.is_one() => write!(f, "{p}")?,
                _ => write!(f, "{p}^{e}")?,
            }
        }
        Ok(())
    }
}

// Grammar (whitespace insignificant):
//   expr   := term ('*' term)*
//   term   := 'lcm' '(' expr (',' expr)* ')' | 'gcd' '(' ... ')' | factor
//   factor := INT | INT '^' (INT | 'inf') | 'omega'
// Plain INT factors may be composite; a base raised with '^' must be prime.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> SteinitzError {
        SteinitzError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if self.src.len() >= end && &self.src[self.pos..end] == word.as_bytes() {
            let next_is_ident = self
                .src
                .get(end)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if !next_is_ident {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn digits(&mut self) -> Result<&str, SteinitzError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        // ASCII digits are valid UTF-8.
        Ok(core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default())
    }

    fn expr(&mut self) -> Result<SteinitzNumber, SteinitzError> {
        let mut acc = self.term()?;
        while self.eat(b'*') {
            acc = acc.multiply(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SteinitzNumber, SteinitzError> {
        for (word, is_lcm) in [("lcm", true), ("gcd", false)] {
            if self.keyword(word) {
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let mut items = Vec::new();
                items.push(self.expr()?);
                while self.eat(b',') {
                    items.push(self.expr()?);
                }
                if !self.eat(b')') {
                    return Err(self.error("expected ',' or ')'"));
                }
                return if is_lcm {
                    SteinitzNumber::lcm_all(&items)
                } else {
                    SteinitzNumber::gcd_all(&items)
                };
            }
        }
        if self.keyword("omega") {
            return Ok(SteinitzNumber::omega());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<SteinitzNumber, SteinitzError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let base: u64 = self
            .digits()?
            .parse()
            .map_err(|_| SteinitzError::Syntax {
                pos: start,
                msg: "integer does not fit in 64 bits".to_string(),
            })?;
        if !self.eat(b'^') {
            return SteinitzNumber::from_integer(base).map_err(|_| SteinitzError::Syntax {
                pos: start,
                msg: "zero is not a Steinitz number".to_string(),
            });
        }
        if !is_prime(base) {
            return Err(SteinitzError::Syntax {
                pos: start,
                msg: alloc::format!("base {base} of a power is not prime"),
            });
        }
        let exp = if self.keyword("inf") {
            Exponent::Infinite
        } else {
            let digits = self.digits()?;
            Exponent::Finite(BigUint::parse_bytes(digits.as_bytes(), 10).unwrap_or_default())
        };
        SteinitzNumber::prime_power(base, exp)
    }
}
