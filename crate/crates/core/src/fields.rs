//! Exact fields: ℚ, GF(p) and GF(p^k) with characteristic at least 5.
//!
//! A [`Field`] is a cheap-to-clone arithmetic context. Matrices store raw
//! [`Value`]s and run every operation through their field; [`FieldElement`]
//! pairs a value with its field for the public element API and literals.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, mul_mod, pow_mod};
use crate::steinitz::SteinitzNumber;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (must be at least 5)")]
    SmallCharacteristic(u64),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("no built-in modulus for GF({p},{k}); supply one with ;mod=[...]")]
    NoDefaultModulus { p: u64, k: usize },
    #[error("the rationals have no nontrivial automorphisms")]
    FrobeniusOnRationals,
    #[error("root towers exist only over finite fields")]
    RationalTower,
    #[error("no root tower over {field} for index {index}")]
    NoTower { field: String, index: String },
    #[error("{n} does not divide the tower index {index}")]
    NDoesNotDivideIndex { n: u64, index: String },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("value out of field: {0}")]
    OutOfField(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rationals,
    Prime(u64),
    /// `modulus` is monic of degree `k`, coefficients ascending.
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

/// Descriptor of an exact field; equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field(Arc<Kind>);

/// A raw field value. Only meaningful together with the [`Field`] that made it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rational(BigRational),
    Residue(u64),
    /// Residue coefficients, ascending degree, always of length `k`.
    Poly(Vec<u64>),
}

/// Built-in moduli for GF(p^k), ascending coefficients.
const DEFAULT_MODULI: &[(u64, usize, &[u64])] = &[
    (5, 2, &[3, 0, 1]),
    (5, 3, &[1, 1, 0, 1]),
    (7, 2, &[4, 0, 1]),
    (7, 3, &[5, 0, 0, 1]),
    (11, 2, &[9, 0, 1]),
    (11, 3, &[1, 4, 0, 1]),
    (13, 2, &[11, 0, 1]),
    (13, 3, &[11, 0, 0, 1]),
];

fn default_modulus(p: u64, k: usize) -> Option<&'static [u64]> {
    DEFAULT_MODULI
        .iter()
        .find(|(q, d, _)| *q == p && *d == k)
        .map(|(_, _, m)| *m)
}

impl Field {
    pub fn rationals() -> Self {
        Field(Arc::new(Kind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p < 5 {
            return Err(FieldError::SmallCharacteristic(p));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// GF(p^k). With `modulus = None` the built-in table is consulted.
    /// `k = 1` yields the prime field.
    pub fn extension(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self, FieldError> {
        let base = Self::prime(p)?;
        if k == 0 {
            return Err(FieldError::BadModulus("degree must be positive".into()));
        }
        if k == 1 {
            return Ok(base);
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, k)
                .ok_or(FieldError::NoDefaultModulus { p, k })?
                .to_vec(),
        };
        if modulus.len() != k + 1 || modulus[k] != 1 {
            return Err(FieldError::BadModulus(alloc::format!(
                "expected a monic polynomial of degree {k}"
            )));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::BadModulus(alloc::format!(
                "coefficient {c} is not reduced mod {p}"
            )));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus("polynomial is reducible".into()));
        }
        Ok(Field(Arc::new(Kind::Extension { p, k, modulus })))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(*self.0, Kind::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rationals()
    }

    /// 0 for ℚ.
    pub fn characteristic(&self) -> u64 {
        match *self.0 {
            Kind::Rationals => 0,
            Kind::Prime(p) | Kind::Extension { p, .. } => p,
        }
    }

    /// Degree over the prime field (1 for ℚ and GF(p)).
    pub fn degree(&self) -> usize {
        match *self.0 {
            Kind::Extension { k, .. } => k,
            _ => 1,
        }
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Number of elements; `None` for ℚ.
    pub fn order(&self) -> Option<BigUint> {
        match *self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(BigUint::from(p)),
            Kind::Extension { p, k, .. } => Some(BigUint::from(p).pow(k as u32)),
        }
    }

    pub fn check_same(&self, other: &Field) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.to_string(), other.to_string()))
        }
    }

    pub fn zero(&self) -> Value {
        self.from_i64(0)
    }

    pub fn one(&self) -> Value {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Value {
        match &*self.0 {
            Kind::Rationals => Value::Rational(BigRational::from_integer(BigInt::from(n))),
            Kind::Prime(p) => Value::Residue(n.rem_euclid(*p as i64) as u64),
            Kind::Extension { p, k, .. } => {
                let mut c = vec![0; *k];
                c[0] = n.rem_euclid(*p as i64) as u64;
                Value::Poly(c)
            }
        }
    }

    /// A fixed element that generates the field over its prime field
    /// (the residue class of `t` for extensions, `2` otherwise).
    pub fn generator(&self) -> Value {
        match &*self.0 {
            Kind::Extension { k, .. } => {
                let mut c = vec![0; *k];
                c[1] = 1;
                Value::Poly(c)
            }
            _ => self.from_i64(2),
        }
    }

    pub fn is_zero(&self, x: &Value) -> bool {
        match x {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::Poly(c) => c.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, x: &Value) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &Value, y: &Value) -> Value {
        match (&*self.0, x, y) {
            (Kind::Rationals, Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Kind::Prime(p), Value::Residue(a), Value::Residue(b)) => Value::Residue(add_mod(*a, *b, *p)),
            (Kind::Extension { p, .. }, Value::Poly(a), Value::Poly(b)) => {
                Value::Poly(a.iter().zip(b).map(|(a, b)| add_mod(*a, *b, *p)).collect())
            }
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn neg(&self, x: &Value) -> Value {
        match (&*self.0, x) {
            (Kind::Rationals, Value::Rational(a)) => Value::Rational(-a),
            (Kind::Prime(p), Value::Residue(a)) => Value::Residue(neg_mod(*a, *p)),
            (Kind::Extension { p, .. }, Value::Poly(a)) => {
                Value::Poly(a.iter().map(|a| neg_mod(*a, *p)).collect())
            }
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn sub(&self, x: &Value, y: &Value) -> Value {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Value, y: &Value) -> Value {
        match (&*self.0, x, y) {
            (Kind::Rationals, Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Kind::Prime(p), Value::Residue(a), Value::Residue(b)) => Value::Residue(mul_mod(*a, *b, *p)),
            (Kind::Extension { p, modulus, .. }, Value::Poly(a), Value::Poly(b)) => {
                Value::Poly(poly::mul_reduce(a, b, modulus, *p))
            }
            _ => panic!("value does not belong to {self}"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: &Value) -> Option<Value> {
        if self.is_zero(x) {
            return None;
        }
        Some(match (&*self.0, x) {
            (Kind::Rationals, Value::Rational(a)) => Value::Rational(a.recip()),
            (Kind::Prime(p), Value::Residue(a)) => Value::Residue(pow_mod(*a, p - 2, *p)),
            _ => {
                let order = self.order().unwrap_or_default();
                self.pow(x, &(order - 2u32))
            }
        })
    }

    pub fn div(&self, x: &Value, y: &Value) -> Option<Value> {
        Some(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &Value, e: &BigUint) -> Value {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    pub fn pow_u64(&self, x: &Value, e: u64) -> Value {
        self.pow(x, &BigUint::from(e))
    }

    /// Integer power allowing negative exponents; `None` for `0^e`, `e < 0`.
    pub fn pow_signed(&self, x: &Value, e: &BigInt) -> Option<Value> {
        let base = if e.is_negative() { self.inv(x)? } else { x.clone() };
        Some(self.pow(&base, e.magnitude()))
    }

    /// `x ↦ x^(p^power)`, the `power`-th iterate of Frobenius; `power` is taken mod `k`.
    pub fn frobenius(&self, x: &Value, power: u64) -> Result<Value, FieldError> {
        match &*self.0 {
            Kind::Rationals if power == 0 => Ok(x.clone()),
            Kind::Rationals => Err(FieldError::FrobeniusOnRationals),
            Kind::Prime(_) => Ok(x.clone()),
            Kind::Extension { p, k, .. } => {
                let e = BigUint::from(*p).pow((power % *k as u64) as u32);
                Ok(self.pow(x, &e))
            }
        }
    }

    /// Multiplicative order of a nonzero element of a finite field.
    pub fn multiplicative_order(&self, x: &Value) -> Option<u64> {
        if self.is_zero(x) {
            return None;
        }
        let group = (self.order()? - 1u32).to_u64()?;
        let mut ord = group;
        for (r, _) in factorize(group) {
            while ord % r == 0 && self.is_one(&self.pow_u64(x, ord / r)) {
                ord /= r;
            }
        }
        Some(ord)
    }

    pub fn element(&self, value: Value) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    fn format_value(&self, x: &Value, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match x {
            Value::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Residue(r) => write!(f, "{r}"),
            Value::Poly(c) => {
                f.write_str("[")?;
                for (i, c) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }

    /// Parses a descriptor literal: `Q`, `GF(p)`, `GF(p,k)`, optionally
    /// followed by `;mod=[c0,...,ck]` for extensions.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut cur = Cursor::new(text);
        let field = cur.descriptor()?;
        cur.end()?;
        Ok(field)
    }

    /// Parses an element of this field, either as a full literal
    /// (`GF(5):3`) whose descriptor must match, or as a bare payload (`3`).
    pub fn parse_element(&self, text: &str) -> Result<Value, FieldError> {
        if text.contains(':') {
            let el = FieldElement::parse(text)?;
            self.check_same(&el.field)?;
            return Ok(el.value);
        }
        let mut cur = Cursor::new(text);
        let v = cur.payload(self)?;
        cur.end()?;
        Ok(v)
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Rationals => f.write_str("Q"),
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Extension { p, k, modulus } => {
                write!(f, "GF({p},{k})")?;
                if default_modulus(*p, *k) != Some(modulus.as_slice()) {
                    f.write_str(";mod=[")?;
                    for (i, c) in modulus.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str("]")?;
                }
                Ok(())
            }
        }
    }
}

/// A value together with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn lift(&self, other: &Self, op: impl Fn(&Field, &Value, &Value) -> Value) -> Result<Self, FieldError> {
        self.field.check_same(&other.field)?;
        Ok(self.field.element(op(&self.field, &self.value, &other.value)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.lift(other, Field::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.lift(other, Field::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.lift(other, Field::mul)
    }

    pub fn neg(&self) -> Self {
        self.field.element(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let v = self.field.inv(&self.value).ok_or(FieldError::DivisionByZero)?;
        Ok(self.field.element(v))
    }

    /// Power with an arbitrary-precision (possibly negative) exponent.
    pub fn pow(&self, e: &BigInt) -> Result<Self, FieldError> {
        let v = self
            .field
            .pow_signed(&self.value, e)
            .ok_or(FieldError::DivisionByZero)?;
        Ok(self.field.element(v))
    }

    pub fn frobenius(&self, power: u64) -> Result<Self, FieldError> {
        Ok(self.field.element(self.field.frobenius(&self.value, power)?))
    }

    /// Parses `Q:<int>[/<int>]`, `GF(<p>):<int>` or `GF(<p>,<k>)[;mod=[..]]:[c0,c1,...]`.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut cur = Cursor::new(text);
        let field = cur.descriptor()?;
        cur.expect(b':')?;
        let value = cur.payload(&field)?;
        cur.end()?;
        Ok(FieldElement { field, value })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.field)?;
        self.field.format_value(&self.value, f)
    }
}

/// Formats a bare value of `field` (no descriptor prefix).
pub struct DisplayValue<'a>(pub &'a Field, pub &'a Value);

impl fmt::Display for DisplayValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.format_value(self.1, f)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: impl Into<String>) -> FieldError {
        FieldError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), FieldError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected '{}'", b as char)))
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), FieldError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected '{word}'")))
        }
    }

    fn end(&mut self) -> Result<(), FieldError> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn integer(&mut self) -> Result<BigInt, FieldError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.error("expected an integer"));
        }
        BigInt::parse_bytes(&self.src[start..self.pos], 10).ok_or_else(|| self.error("bad integer"))
    }

    fn small(&mut self) -> Result<u64, FieldError> {
        let start = self.pos;
        self.integer()?.to_u64().ok_or(FieldError::Syntax {
            pos: start,
            msg: "expected a small nonnegative integer".into(),
        })
    }

    fn list(&mut self) -> Result<Vec<BigInt>, FieldError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            out.push(self.integer()?);
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn descriptor(&mut self) -> Result<Field, FieldError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.eat(b'Q') {
            return Ok(Field::rationals());
        }
        self.expect_word("GF")?;
        self.expect(b'(')?;
        let p = self.small()?;
        let k = if self.eat(b',') { self.small()? as usize } else { 1 };
        self.expect(b')')?;
        let modulus = if self.eat(b';') {
            self.expect_word("mod")?;
            self.expect(b'=')?;
            let at = self.pos;
            let coeffs = self.list()?;
            let coeffs = coeffs
                .iter()
                .map(|c| c.to_u64())
                .collect::<Option<Vec<_>>>()
                .ok_or(FieldError::Syntax {
                    pos: at,
                    msg: "modulus coefficients must be nonnegative".into(),
                })?;
            Some(coeffs)
        } else {
            None
        };
        if k == 1 && modulus.is_some() {
            return Err(FieldError::Syntax {
                pos: start,
                msg: "a prime field takes no modulus".into(),
            });
        }
        Field::extension(p, k, modulus)
    }

    fn payload(&mut self, field: &Field) -> Result<Value, FieldError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match &*field.0 {
            Kind::Rationals => {
                let num = self.integer()?;
                let den = if self.eat(b'/') { self.integer()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Value::Rational(BigRational::new(num, den)))
            }
            Kind::Prime(p) => {
                let v = self.integer()?;
                let p = BigInt::from(*p);
                if v.abs() >= p {
                    return Err(FieldError::OutOfField(alloc::format!(
                        "{v} at byte {start} is not a residue mod {p}"
                    )));
                }
                Ok(Value::Residue(v.mod_floor(&p).to_u64().unwrap_or_default()))
            }
            Kind::Extension { p, k, .. } => {
                let coeffs = self.list()?;
                if coeffs.len() > *k {
                    return Err(FieldError::OutOfField(alloc::format!(
                        "{} coefficients given for a degree-{k} extension",
                        coeffs.len()
                    )));
                }
                let mut out = vec![0u64; *k];
                for (slot, c) in out.iter_mut().zip(&coeffs) {
                    *slot = c
                        .to_u64()
                        .filter(|c| c < p)
                        .ok_or_else(|| FieldError::OutOfField(alloc::format!("coefficient {c} mod {p}")))?;
                }
                Ok(Value::Poly(out))
            }
        }
    }
}

/// Dense polynomials over GF(p), ascending coefficients.
mod poly {
    use super::{add_mod, mul_mod, neg_mod, pow_mod};
    use alloc::vec;
    use alloc::vec::Vec;

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        out
    }

    /// Remainder of `a` modulo a nonzero `m`.
    fn rem(a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a);
        let m = trim(m.to_vec());
        let d = m.len() - 1;
        let lead_inv = pow_mod(m[d], p - 2, p);
        while a.len() > d {
            let shift = a.len() - 1 - d;
            let c = mul_mod(*a.last().unwrap_or(&0), lead_inv, p);
            for (i, &mi) in m.iter().enumerate() {
                a[shift + i] = add_mod(a[shift + i], neg_mod(mul_mod(c, mi, p), p), p);
            }
            a = trim(a);
        }
        a
    }

    /// `a·b mod m` padded to length `deg m`.
    pub(super) fn mul_reduce(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = rem(mul(a, b, p), m, p);
        r.resize(m.len() - 1, 0);
        r
    }

    fn gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's criterion: a degree-`k` polynomial is irreducible iff it is
    /// coprime to `x^(p^i) - x` for every `1 ≤ i ≤ k/2`.
    pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let k = m.len() - 1;
        if k == 1 {
            return true;
        }
        let mut power = vec![0u64; k];
        power[1] = 1;
        for _ in 1..=k / 2 {
            // power <- power^p
            let mut acc = {
                let mut one = vec![0u64; k];
                one[0] = 1;
                one
            };
            let mut base = power.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_reduce(&acc, &base, m, p);
                }
                base = mul_reduce(&base, &base, m, p);
                e >>= 1;
            }
            power = acc;
            let mut diff = power.clone();
            diff[1] = add_mod(diff[1], p - 1, p);
            let g = gcd(m.to_vec(), diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// The compatible family of n-th root maps `τ_n` (n dividing the index)
/// over a finite field of order `q`, realised as `x ↦ x^(n⁻¹ mod (q−1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTower {
    field: Field,
    index: SteinitzNumber,
    group_order: BigUint,
}

/// Whether every prime with positive exponent in `s` is coprime to `q − 1`,
/// which makes `x ↦ x^n` bijective on `F*` for every finite `n | s`.
pub fn tower_exists(field: &Field, s: &SteinitzNumber) -> Result<bool, FieldError> {
    let order = field.order().ok_or(FieldError::RationalTower)?;
    let group = order - 1u32;
    if s.default_is_infinite() {
        // Only explicitly listed primes can have exponent zero.
        let Some(group) = group.to_u64() else {
            return Ok(false);
        };
        return Ok(factorize(group)
            .into_iter()
            .all(|(r, _)| s.exponent(r).is_zero()));
    }
    Ok(s
        .explicit()
        .all(|(p, e)| e.is_zero() || !(&group % p).is_zero()))
}

impl RootTower {
    pub fn new(field: Field, index: SteinitzNumber) -> Result<Self, FieldError> {
        if !tower_exists(&field, &index)? {
            return Err(FieldError::NoTower {
                field: field.to_string(),
                index: index.to_string(),
            });
        }
        let group_order = field.order().unwrap_or_default() - 1u32;
        Ok(RootTower {
            field,
            index,
            group_order,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn index(&self) -> &SteinitzNumber {
        &self.index
    }

    /// `τ_n(x)`, with `τ_n(0) = 0`.
    pub fn tau(&self, n: u64, x: &Value) -> Result<Value, FieldError> {
        if !self.index.is_multiple_of(n) {
            return Err(FieldError::NDoesNotDivideIndex {
                n,
                index: self.index.to_string(),
            });
        }
        if self.field.is_zero(x) {
            return Ok(x.clone());
        }
        let m = BigInt::from(self.group_order.clone());
        let ext = BigInt::from(n).extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let e = ext.x.mod_floor(&m);
        Ok(self.field.pow(x, e.magnitude()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn el(text: &str) -> FieldElement {
        FieldElement::parse(text).unwrap()
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = gf(5);
        assert_eq!(f.mul(&f.from_i64(2), &f.from_i64(3)), f.one());
        let x = f.from_i64(4);
        assert_eq!(f.mul(&x, &f.one()), x);
        assert_eq!(f.inv(&f.zero()), None);
        assert_eq!(f.neg(&f.from_i64(1)), f.from_i64(4));
    }

    #[test]
    fn rational_arithmetic() {
        let x = el("Q:-3/4");
        assert_eq!(x.inv().unwrap(), el("Q:-4/3"));
        assert_eq!(el("Q:6/-8"), x);
        assert_eq!(el("Q:0").inv(), Err(FieldError::DivisionByZero));
        assert_eq!(x.pow(&BigInt::from(-2)).unwrap(), el("Q:16/9"));
    }

    #[test]
    fn mixed_fields_rejected() {
        assert!(matches!(
            el("GF(5):1").add(&el("GF(7):1")),
            Err(FieldError::MixedFields(..))
        ));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::prime(3), Err(FieldError::SmallCharacteristic(3)));
        assert_eq!(Field::prime(2), Err(FieldError::SmallCharacteristic(2)));
        assert_eq!(Field::prime(9), Err(FieldError::NotPrime(9)));
        // t^2 - 1 = (t - 1)(t + 1)
        assert!(matches!(
            Field::extension(5, 2, Some(alloc::vec![4, 0, 1])),
            Err(FieldError::BadModulus(_))
        ));
        // (t^2 + 2)^2 has no roots but is reducible.
        let sq = alloc::vec![4, 0, 4, 0, 1];
        assert!(matches!(Field::extension(5, 4, Some(sq)), Err(FieldError::BadModulus(_))));
        assert!(matches!(
            Field::extension(17, 2, None),
            Err(FieldError::NoDefaultModulus { p: 17, k: 2 })
        ));
        assert_eq!(Field::extension(7, 1, None).unwrap(), gf(7));
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for (p, k, m) in DEFAULT_MODULI {
            assert!(poly::is_irreducible(m, *p), "GF({p},{k})");
            assert!(Field::extension(*p, *k, None).is_ok());
        }
    }

    #[test]
    fn frobenius_examples() {
        let t = el("GF(5,2):[0,1]");
        assert_eq!(t.frobenius(1).unwrap(), el("GF(5,2):[0,4]"));
        assert_eq!(t.frobenius(0).unwrap(), t);
        assert_eq!(t.frobenius(2).unwrap(), t);
        assert_eq!(el("GF(5):2").frobenius(1).unwrap(), el("GF(5):2"));
        assert_eq!(el("Q:2").frobenius(1), Err(FieldError::FrobeniusOnRationals));
        assert_eq!(el("Q:2").frobenius(0).unwrap(), el("Q:2"));
    }

    #[test]
    fn literals() {
        assert_eq!(el("GF(5):3").to_string(), "GF(5):3");
        assert_eq!(el("GF(5):-1").to_string(), "GF(5):4");
        assert_eq!(el("Q:-7/2").to_string(), "Q:-7/2");
        assert_eq!(el("Q:4/2").to_string(), "Q:2");
        let t = el("GF(5,2):[0,1]");
        assert_eq!(t.field().degree(), 2);
        assert_eq!(t.to_string(), "GF(5,2):[0,1]");
        assert_eq!(el("GF(5,2):[3]").to_string(), "GF(5,2):[3,0]");
        let custom = el("GF(5,2);mod=[2,0,1]:[1,1]");
        assert_eq!(custom.to_string(), "GF(5,2);mod=[2,0,1]:[1,1]");
        assert!(matches!(FieldElement::parse("GF(5):5"), Err(FieldError::OutOfField(_))));
        assert!(matches!(FieldElement::parse("GF(5,2):[0,0,1]"), Err(FieldError::OutOfField(_))));
        assert!(matches!(FieldElement::parse("GF(5:1"), Err(FieldError::Syntax { pos: 4, .. })));
        assert!(FieldElement::parse("Q:1/0").is_err());
        assert_eq!(Field::parse("GF(13,3)").unwrap().to_string(), "GF(13,3)");
        assert_eq!(gf(5).parse_element("3").unwrap(), Value::Residue(3));
        assert!(gf(5).parse_element("GF(7):3").is_err());
    }

    #[test]
    fn towers() {
        let s3 = SteinitzNumber::parse("3^inf").unwrap();
        assert!(tower_exists(&gf(5), &s3).unwrap());
        assert!(tower_exists(&gf(5), &SteinitzNumber::one()).unwrap());
        assert!(!tower_exists(&gf(7), &s3).unwrap());
        assert!(!tower_exists(&gf(5), &SteinitzNumber::omega()).unwrap());
        assert_eq!(
            tower_exists(&Field::rationals(), &s3),
            Err(FieldError::RationalTower)
        );
        // 26 - 1 = 24 is coprime to 5 and 7.
        let f25 = Field::extension(5, 2, None).unwrap();
        assert!(tower_exists(&f25, &SteinitzNumber::parse("5^inf * 7").unwrap()).unwrap());
    }

    #[test]
    fn tau_examples() {
        let f = gf(5);
        let tower = RootTower::new(f.clone(), SteinitzNumber::parse("3^inf").unwrap()).unwrap();
        assert_eq!(tower.tau(3, &f.from_i64(2)).unwrap(), f.from_i64(3));
        assert_eq!(f.pow_u64(&f.from_i64(3), 3), f.from_i64(2));
        assert_eq!(tower.tau(1, &f.from_i64(4)).unwrap(), f.from_i64(4));
        assert_eq!(tower.tau(9, &f.from_i64(2)).unwrap(), f.from_i64(2));
        assert_eq!(tower.tau(3, &f.zero()).unwrap(), f.zero());
        assert!(matches!(
            tower.tau(2, &f.one()),
            Err(FieldError::NDoesNotDivideIndex { n: 2, .. })
        ));
        assert!(matches!(
            RootTower::new(gf(7), SteinitzNumber::parse("3").unwrap()),
            Err(FieldError::NoTower { .. })
        ));
    }

    #[test]
    fn multiplicative_orders() {
        let f = gf(5);
        assert_eq!(f.multiplicative_order(&f.from_i64(2)), Some(4));
        assert_eq!(f.multiplicative_order(&f.from_i64(4)), Some(2));
        assert_eq!(f.multiplicative_order(&f.one()), Some(1));
        assert_eq!(f.multiplicative_order(&f.zero()), None);
        assert_eq!(Field::rationals().multiplicative_order(&Field::rationals().one()), None);
    }

    fn fields() -> Vec<Field> {
        alloc::vec![
            gf(5),
            gf(7),
            Field::extension(5, 2, None).unwrap(),
            Field::extension(7, 3, None).unwrap(),
            Field::rationals(),
        ]
    }

    fn arb_value(f: &Field) -> BoxedStrategy<Value> {
        match &*f.0 {
            Kind::Rationals => (-20i64..20, 1i64..10)
                .prop_map(|(n, d)| Value::Rational(BigRational::new(n.into(), d.into())))
                .boxed(),
            Kind::Prime(p) => (0..*p).prop_map(Value::Residue).boxed(),
            Kind::Extension { p, k, .. } => proptest::collection::vec(0..*p, *k)
                .prop_map(Value::Poly)
                .boxed(),
        }
    }

    fn arb_field_triple() -> impl Strategy<Value = (Field, Value, Value, Value)> {
        (0..fields().len()).prop_flat_map(|i| {
            let f = fields()[i].clone();
            (Just(f.clone()), arb_value(&f), arb_value(&f), arb_value(&f))
        })
    }

    proptest! {
        #[test]
        fn field_axioms((f, a, b, c) in arb_field_triple()) {
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
            if let Some(ai) = f.inv(&a) {
                prop_assert!(f.is_one(&f.mul(&a, &ai)));
            } else {
                prop_assert!(f.is_zero(&a));
            }
        }

        #[test]
        fn frobenius_is_an_automorphism((f, a, b, _c) in arb_field_triple()) {
            prop_assume!(f.is_finite());
            let fr = |x: &Value| f.frobenius(x, 1).unwrap();
            prop_assert_eq!(fr(&f.add(&a, &b)), f.add(&fr(&a), &fr(&b)));
            prop_assert_eq!(fr(&f.mul(&a, &b)), f.mul(&fr(&a), &fr(&b)));
            prop_assert_eq!(f.frobenius(&a, f.degree() as u64).unwrap(), a.clone());
            let base = f.from_i64(3);
            prop_assert_eq!(fr(&base), base);
        }

        #[test]
        fn tau_tower_conditions(x in 1u64..7, m in 1u32..4, k in 1u32..4) {
            let f = gf(7);
            let tower = RootTower::new(f.clone(), SteinitzNumber::parse("5^inf").unwrap()).unwrap();
            let x = f.from_i64(x as i64);
            let (m, k) = (5u64.pow(m), 5u64.pow(k));
            let n = m * k;
            let tn = tower.tau(n, &x).unwrap();
            prop_assert_eq!(f.pow_u64(&tn, n), x.clone());
            prop_assert_eq!(tn, tower.tau(k, &tower.tau(m, &x).unwrap()).unwrap());
            let y = f.from_i64(3);
            prop_assert_eq!(
                tower.tau(n, &f.mul(&x, &y)).unwrap(),
                f.mul(&tower.tau(n, &x).unwrap(), &tower.tau(n, &y).unwrap())
            );
        }

        #[test]
        fn literal_round_trip((f, a, _b, _c) in arb_field_triple()) {
            let e = f.element(a);
            prop_assert_eq!(FieldElement::parse(&e.to_string()).unwrap(), e);
        }
    }
}
