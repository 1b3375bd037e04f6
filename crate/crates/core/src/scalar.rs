//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields `Q(zeta_n)`.
//!
//! A [`Field`] is a cheap, shareable handle on the data of `Q(zeta_n)`
//! (the cyclotomic polynomial and the reduced powers of `zeta`). Every
//! [`Cyclotomic`] carries its field, so arithmetic never needs a context
//! argument. The rationals are the field of order 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical text form: `"p"` when the denominator is 1, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer polynomial coefficients, lowest degree first.
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

#[derive(Debug)]
struct FieldData {
    order: u32,
    /// Cyclotomic polynomial, monic, lowest degree first (length `degree + 1`).
    modulus: Vec<Rational>,
    /// `zeta^j` reduced to the power basis, for `j` in `0..order`.
    powers: Vec<Vec<Rational>>,
}

impl FieldData {
    fn build(order: u32) -> Self {
        let modulus: Vec<Rational> = cyclotomic_polynomial(order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce
            let mut next = vec![Rational::zero(); degree + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let top = next[degree].clone();
            if !top.is_zero() {
                for i in 0..degree {
                    next[i] -= &top * &modulus[i];
                }
            }
            next.truncate(degree);
            cur = next;
        }
        FieldData { order, modulus, powers }
    }

    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut poly: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - d;
            for i in 0..d {
                poly[shift + i] -= &top * &self.modulus[i];
            }
        }
        poly.resize(d, Rational::zero());
        poly
    }
}

/// Handle on the cyclotomic field `Q(zeta_n)`; `n = 1` is `Q`.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn field_cache() -> &'static Mutex<HashMap<u32, Field>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    pub fn cyclotomic(order: u32) -> Result<Field> {
        if order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        Ok(cache
            .entry(order)
            .or_insert_with(|| Field(Arc::new(FieldData::build(order))))
            .clone())
    }

    pub fn rationals() -> Field {
        Field::cyclotomic(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Dimension over `Q`, i.e. `phi(n)`.
    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    /// `"Q"` or `"Q(zeta<n>)"`.
    pub fn name(&self) -> String {
        if self.order() == 1 {
            "Q".to_string()
        } else {
            format!("Q(zeta{})", self.order())
        }
    }

    pub fn parse_name(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::rationals());
        }
        let inner = s
            .strip_prefix("Q(zeta")
            .and_then(|r| r.strip_suffix(')'))
            .map(|r| r.trim_start_matches('_'))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let n: u32 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field `{s}`")))?;
        Field::cyclotomic(n)
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Cyclotomic {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> Cyclotomic {
        self.from_rational(rational_int(n))
    }

    pub fn from_rational(&self, r: Rational) -> Cyclotomic {
        let mut c = self.zero();
        c.coeffs[0] = r;
        c
    }

    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> Result<Cyclotomic> {
        if coeffs.len() != self.degree() {
            return Err(Error::Parse(format!(
                "{} expects {} coefficients, got {}",
                self.name(),
                self.degree(),
                coeffs.len()
            )));
        }
        Ok(Cyclotomic {
            field: self.clone(),
            coeffs,
        })
    }

    /// `zeta_n^k` for this field's own `n`.
    pub fn zeta_pow(&self, k: i64) -> Cyclotomic {
        let n = self.order() as i64;
        let j = k.rem_euclid(n) as usize;
        Cyclotomic {
            field: self.clone(),
            coeffs: self.0.powers[j].clone(),
        }
    }

    pub fn contains_roots_of_unity(&self, m: u32) -> bool {
        m == 1
            || m == 2
            || (m > 0 && self.order().is_multiple_of(m))
            || (m > 0 && self.order() % 2 == 1 && (2 * self.order()).is_multiple_of(m))
    }

    /// `exp(2 pi i k / m)` inside this field.
    pub fn root_of_unity(&self, m: u32, k: i64) -> Result<Cyclotomic> {
        if !self.contains_roots_of_unity(m) {
            return Err(Error::MissingRootsOfUnity {
                field: self.name(),
                order: m,
            });
        }
        let n = self.order() as i64;
        let m = m as i64;
        if n % m == 0 {
            return Ok(self.zeta_pow(k * (n / m)));
        }
        // n odd and m | 2n: with j = 2nk/m the root is exp(2 pi i j / 2n)
        let j = 2 * n * k / m;
        if j % 2 == 0 {
            Ok(self.zeta_pow(j / 2))
        } else {
            Ok(-self.zeta_pow((j - n) / 2))
        }
    }

    /// The imaginary unit, when the field contains it.
    pub fn imaginary_unit(&self) -> Result<Cyclotomic> {
        self.root_of_unity(4, 1)
    }

    /// Embeds an element of a subfield `Q(zeta_m)`, `m | n`.
    pub fn embed(&self, x: &Cyclotomic) -> Result<Cyclotomic> {
        if x.field == *self {
            return Ok(x.clone());
        }
        let m = x.field.order();
        if !self.order().is_multiple_of(m) {
            return Err(Error::MissingRootsOfUnity {
                field: self.name(),
                order: m,
            });
        }
        let step = (self.order() / m) as i64;
        let mut out = self.zero();
        for (j, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += &(self.zeta_pow(j as i64 * step).scale(c));
            }
        }
        Ok(out)
    }
}

/// Element of `Q(zeta_n)` in the power basis `1, zeta, ..., zeta^(phi(n)-1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    field: Field,
    coeffs: Vec<Rational>,
}

/// Coefficient type used throughout the algebra engine.
pub type Scalar = Cyclotomic;

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl Cyclotomic {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn unify<'a>(a: &'a Cyclotomic, b: &'a Cyclotomic) -> (Field, Option<Cyclotomic>, Option<Cyclotomic>) {
        if a.field == b.field {
            return (a.field.clone(), None, None);
        }
        if a.order() == 1 {
            return (b.field.clone(), Some(b.field.from_rational(a.coeffs[0].clone())), None);
        }
        if b.order() == 1 {
            return (a.field.clone(), None, Some(a.field.from_rational(b.coeffs[0].clone())));
        }
        panic!("cyclotomic order mismatch: {} vs {}", a.field.name(), b.field.name());
    }

    fn mul_same(&self, other: &Cyclotomic) -> Cyclotomic {
        let d = self.field.degree();
        if d == 1 {
            return self.field.from_rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.field.0.reduce(prod),
        }
    }

    /// Product that reports an order mismatch instead of promoting.
    pub fn checked_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        if self.field != other.field {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(self.mul_same(other))
    }

    pub fn checked_add(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        if self.field != other.field {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(self + other)
    }

    /// Galois automorphism `zeta -> zeta^k` (`k` coprime to the order).
    pub fn galois(&self, k: i64) -> Cyclotomic {
        let mut out = self.field.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += &self.field.zeta_pow(j as i64 * k).scale(c);
            }
        }
        out
    }

    /// Complex conjugation `zeta -> zeta^(n-1)`.
    pub fn conj(&self) -> Cyclotomic {
        if self.order() <= 2 {
            return self.clone();
        }
        self.galois(self.order() as i64 - 1)
    }

    /// Multiplicative inverse via the product of the nontrivial Galois
    /// conjugates divided by the (rational) norm.
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(self.field.from_rational(r.recip()));
        }
        let n = self.order();
        let mut others = self.field.one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = others.mul_same(&self.galois(k as i64));
            }
        }
        let norm = self.mul_same(&others);
        let norm = norm.as_rational().expect("field norm is rational").clone();
        Some(others.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Cyclotomic) -> Option<Cyclotomic> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerical value as a complex number.
    pub fn to_complex(&self) -> num::complex::Complex64 {
        use num::ToPrimitive;
        let n = self.order() as f64;
        let mut z = num::complex::Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
            z += num::complex::Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(r));
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let z = match j {
                0 => String::new(),
                1 => format!("zeta{}", self.order()),
                _ => format!("zeta{}^{}", self.order(), j),
            };
            match (j, c.abs().is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{z}")?,
                _ => write!(f, "{mag}*{z}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (field, a, b) = Cyclotomic::unify(self, rhs);
        let a = a.as_ref().unwrap_or(self);
        let b = b.as_ref().unwrap_or(rhs);
        Cyclotomic {
            field,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (_, a, b) = Cyclotomic::unify(self, rhs);
        let a = a.as_ref().unwrap_or(self);
        let b = b.as_ref().unwrap_or(rhs);
        a.mul_same(b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.field == rhs.field {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.field == rhs.field {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

/// JSON form: a rational is the string `"p/q"`; anything else is
/// `{"order": n, "coeffs": [...]}`.
impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.order() == 1 {
            return s.serialize_str(&format_rational(&self.coeffs[0]));
        }
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("order", &self.order())?;
        let coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Cyclo { order: u32, coeffs: Vec<String> },
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Text(t) => parse_rational(&t)
                .map(|r| Field::rationals().from_rational(r))
                .map_err(D::Error::custom),
            ScalarRepr::Int(n) => Ok(Field::rationals().from_int(n)),
            ScalarRepr::Cyclo { order, coeffs } => {
                let field = Field::cyclotomic(order).map_err(D::Error::custom)?;
                let coeffs = coeffs
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                field.from_coeffs(coeffs).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Field {
        Field::cyclotomic(3).unwrap()
    }

    fn cyc(field: &Field, c: &[i64]) -> Cyclotomic {
        field.from_coeffs(c.iter().map(|&x| rational_int(x)).collect()).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| -> Vec<i64> { cyclotomic_polynomial(n).iter().map(|c| c.try_into().unwrap()).collect() };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn zeta_times_zeta_squared_is_one() {
        let f = q3();
        assert!((f.zeta_pow(1) * f.zeta_pow(2)).is_one());
    }

    #[test]
    fn zeta_squared_reduces() {
        let f = q3();
        let z2 = f.zeta_pow(1) * f.zeta_pow(1);
        assert_eq!(z2, cyc(&f, &[-1, -1]));
    }

    #[test]
    fn one_plus_zeta_times_one_plus_zeta_squared() {
        // (1+x)(1+x^2) = 1 + x + x^2 + x^3 = 1 + 0 + 1 mod x^3 - 1, then
        // mod x^2+x+1: x^2 + x + 1 -> 0, so the result is x^3 = 1.
        let f = q3();
        let a = cyc(&f, &[1, 1]);
        let b = f.one() + f.zeta_pow(2);
        assert!((a * b).is_one());
    }

    #[test]
    fn conjugation() {
        let f = q3();
        assert_eq!(f.zeta_pow(1).conj(), cyc(&f, &[-1, -1]));
        let r = f.from_rational(rational(5, 7));
        assert_eq!(r.conj(), r);
        let a = cyc(&f, &[1, 2]);
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = q3().zeta_pow(1);
        let b = Field::cyclotomic(4).unwrap().zeta_pow(1);
        assert!(matches!(a.checked_mul(&b), Err(Error::OrderMismatch { .. })));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn character_orthogonality_for_order_three() {
        let f = q3();
        let third = rational(1, 3);
        let s = (f.one() + f.zeta_pow(1) + f.zeta_pow(2)).scale(&third);
        assert!(s.is_zero());
        let t = (f.one() + f.one() + f.one()).scale(&third);
        assert!(t.is_one());
    }

    #[test]
    fn inverses_in_small_fields() {
        for n in [1u32, 2, 3, 4, 6, 12] {
            let f = Field::cyclotomic(n).unwrap();
            let d = f.degree();
            let a = f
                .from_coeffs((0..d).map(|j| rational(j as i64 * 2 + 1, 3)).collect())
                .unwrap();
            let inv = a.inv().unwrap();
            assert!((&a * &inv).is_one(), "order {n}");
        }
        assert!(q3().zero().inv().is_none());
    }

    #[test]
    fn roots_of_unity_inside_zeta12() {
        let f = Field::cyclotomic(12).unwrap();
        let i = f.imaginary_unit().unwrap();
        assert_eq!(&i * &i, f.from_int(-1));
        let z3 = f.root_of_unity(3, 1).unwrap();
        assert!(z3.pow(3).is_one());
        assert!(!z3.is_one());
        assert_eq!(z3.conj(), f.root_of_unity(3, 2).unwrap());
        assert_eq!(i.conj(), -&i);
        assert!(q3().imaginary_unit().is_err());
        // Q(zeta3) contains the sixth roots of unity
        let z6 = q3().root_of_unity(6, 1).unwrap();
        assert!(z6.pow(6).is_one() && !z6.pow(3).is_one());
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let f3 = q3();
        let f12 = Field::cyclotomic(12).unwrap();
        let a = cyc(&f3, &[2, -1]);
        let b = cyc(&f3, &[1, 3]);
        let ea = f12.embed(&a).unwrap();
        let eb = f12.embed(&b).unwrap();
        assert_eq!(f12.embed(&(&a * &b)).unwrap(), &ea * &eb);
        assert_eq!(f12.embed(&a.conj()).unwrap(), ea.conj());
        assert!(Field::cyclotomic(4).unwrap().embed(&a).is_err());
    }

    #[test]
    fn json_forms() {
        let r = Field::rationals().from_rational(rational(-3, 4));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/4\"");
        let z = q3().zeta_pow(2);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"order":3,"coeffs":["-1","-1"]}"#);
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let n: Cyclotomic = serde_json::from_str("7").unwrap();
        assert_eq!(n, Field::rationals().from_int(7));
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn complex_value() {
        let f = Field::cyclotomic(12).unwrap();
        let i = f.imaginary_unit().unwrap().to_complex();
        assert!((i.re).abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-8").unwrap()), "-8");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
