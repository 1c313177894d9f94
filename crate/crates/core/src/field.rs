//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Elements are encoded as integers in `0..q`: an element of GF(p^m) with
//! polynomial coefficients `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` (constant
//! first) is stored as `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. For a prime
//! field this is just the residue. Multiplication goes through discrete
//! log/exp tables built from a primitive element at construction time.
//!
//! Two handles are offered:
//!
//! - [`FieldElem`] carries the identity of its field, and the checked
//!   operations on [`Field`] refuse to mix elements of different fields.
//! - The `*_raw` methods work on bare encoded `u32` values. The geometry and
//!   closure code uses these in inner loops.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("no modulus supplied for GF({p}^{m}) and none is built in")]
    MissingModulus { p: u32, m: u32 },
    #[error("malformed modulus {0:?}: {1}")]
    BadModulus(Vec<u32>, &'static str),
    #[error("field order {0} is not supported (limit {MAX_FIELD_ORDER})")]
    UnsupportedOrder(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(FieldKey, FieldKey),
    #[error("value {value} is not an element of a field of order {order}")]
    OutOfRange { value: u64, order: u32 },
    #[error("cannot parse field descriptor {0:?}: {1}")]
    Descriptor(String, String),
}

/// Identity of a field: characteristic, degree and modulus.
///
/// Two fields built from the same parameters share a key, so their elements
/// interoperate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldKey {
    pub p: u32,
    pub m: u32,
    /// Modulus coefficients packed base `p` (constant first); 0 when m = 1.
    modulus_code: u64,
}

impl fmt::Display for FieldKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.m)
        }
    }
}

/// An element tagged with the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    key: FieldKey,
    value: u32,
}

impl FieldElem {
    /// Encoded value in `0..q`.
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn key(&self) -> FieldKey {
        self.key
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

/// Binary/unary operations exposed through [`Field::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

struct FieldInner {
    key: FieldKey,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..q-1 (duplicated once so log sums need no reduction).
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
    /// p^i for i in 0..m.
    pow_p: Vec<u32>,
}

/// A finite field GF(p^m). Cheap to clone; immutable.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.key)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.key)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.key == other.inner.key
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Built-in moduli (constant-first, monic) for the small prime powers used by
/// the net experiments.
pub fn builtin_modulus(p: u32, m: u32) -> Option<Vec<u32>> {
    let coeffs: &[u32] = match (p, m) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 2) => &[2, 1, 1],
        (7, 2) => &[1, 0, 1],
        _ => return None,
    };
    Some(coeffs.to_vec())
}

// Dense polynomial helpers over GF(p), constant-first, no trailing zeros
// unless the polynomial is zero (empty vec).

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_prime(a: u32, p: u32) -> u32 {
    // a^(p-2) mod p
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_prime(b[db], p) as u64;
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = (r[dr] as u64 * lead_inv) % p as u64;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn decode(v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut v = v;
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Schoolbook product reduced by the modulus; used only while building tables.
fn slow_mul(a: u32, b: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    if m == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let ca = decode(a, p, m);
    let cb = decode(b, p, m);
    let mut prod = vec![0u32; (2 * m - 1) as usize];
    for (i, &x) in ca.iter().enumerate() {
        for (j, &y) in cb.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m as usize, 0);
    encode(&r, p)
}

impl Field {
    /// Builds GF(p^m). For m > 1 the modulus defaults to the built-in table.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Field, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_ORDER as u64 {
            return Err(FieldError::UnsupportedOrder(q64));
        }
        let q = q64 as u32;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            let md = match modulus {
                Some(md) => md,
                None => builtin_modulus(p, m).ok_or(FieldError::MissingModulus { p, m })?,
            };
            if md.len() != m as usize + 1 {
                return Err(FieldError::BadModulus(md, "length must be degree + 1"));
            }
            if md.iter().any(|&c| c >= p) {
                return Err(FieldError::BadModulus(md, "coefficient out of range"));
            }
            if md[m as usize] != 1 {
                return Err(FieldError::BadModulus(md, "modulus must be monic"));
            }
            if !is_irreducible(&md, p) {
                return Err(FieldError::ReducibleModulus(md, p));
            }
            md
        };
        let modulus_code = if m == 1 {
            0
        } else {
            modulus.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64)
        };
        let key = FieldKey { p, m, modulus_code };

        let mut pow_p = Vec::with_capacity(m as usize);
        let mut acc = 1u32;
        for _ in 0..m {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }

        let (exp, log) = Self::build_tables(p, m, q, &modulus);
        Ok(Field {
            inner: Arc::new(FieldInner {
                key,
                q,
                modulus,
                exp,
                log,
                pow_p,
            }),
        })
    }

    /// Prime field GF(p).
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    fn build_tables(p: u32, m: u32, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
            exp[1] = 1;
            return (exp, log);
        }
        'candidates: for g in 2..q {
            let mut seen = vec![false; q as usize];
            let mut x = 1u32;
            for slot in exp.iter_mut().take(order) {
                if seen[x as usize] {
                    continue 'candidates;
                }
                seen[x as usize] = true;
                *slot = x;
                x = slow_mul(x, g, p, m, modulus);
            }
            break;
        }
        for i in 0..order {
            exp[i + order] = exp[i];
            log[exp[i] as usize] = i as u32;
        }
        (exp, log)
    }

    pub fn key(&self) -> FieldKey {
        self.inner.key
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.key.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.key.m
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients (constant first); empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Descriptor in the `p^m[:coeffs]` syntax understood by [`Field::from_str`].
    pub fn descriptor(&self) -> String {
        let k = self.inner.key;
        if k.m == 1 {
            format!("{}", k.p)
        } else {
            let coeffs: Vec<String> = self.inner.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}:{}", k.p, k.m, coeffs.join(","))
        }
    }

    // ---- element constructors ----

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// Element from its encoded value.
    pub fn elem(&self, value: u32) -> Result<FieldElem, FieldError> {
        if value >= self.inner.q {
            return Err(FieldError::OutOfRange {
                value: value as u64,
                order: self.inner.q,
            });
        }
        Ok(self.wrap(value))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(self.int_raw(n))
    }

    /// Element from polynomial coefficients (constant first, at most m of them).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        let k = self.inner.key;
        if coeffs.len() > k.m as usize || coeffs.iter().any(|&c| c >= k.p) {
            return Err(FieldError::OutOfRange {
                value: encode(coeffs, k.p) as u64,
                order: self.inner.q,
            });
        }
        Ok(self.wrap(encode(coeffs, k.p)))
    }

    /// Coefficients (constant first, length m) of an element.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        decode(a.value, self.inner.key.p, self.inner.key.m)
    }

    /// All elements in encoded order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.inner.q).map(move |v| self.wrap(v))
    }

    pub(crate) fn wrap(&self, value: u32) -> FieldElem {
        debug_assert!(value < self.inner.q);
        FieldElem {
            key: self.inner.key,
            value,
        }
    }

    fn check(&self, a: FieldElem) -> Result<u32, FieldError> {
        if a.key != self.inner.key {
            return Err(FieldError::FieldMismatch(self.inner.key, a.key));
        }
        Ok(a.value)
    }

    /// Whether `a` belongs to this field.
    pub fn owns(&self, a: FieldElem) -> bool {
        a.key == self.inner.key
    }

    // ---- checked arithmetic ----

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.add_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.sub_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        let inv = self.inv(b)?;
        self.mul(a, inv)
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.neg_raw(self.check(a)?)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        let v = self.check(a)?;
        if v == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.wrap(self.inv_raw(v)))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> Result<FieldElem, FieldError> {
        Ok(self.wrap(self.pow_raw(self.check(a)?, e)))
    }

    /// Dispatches a [`FieldOp`]. Unary operations ignore `b`; binary ones
    /// treat a missing `b` as zero.
    pub fn apply(
        &self,
        op: FieldOp,
        a: FieldElem,
        b: Option<FieldElem>,
    ) -> Result<FieldElem, FieldError> {
        let b = b.unwrap_or_else(|| self.zero());
        match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b),
            FieldOp::Neg => self.neg(a),
            FieldOp::Inv => self.inv(a),
        }
    }

    // ---- raw arithmetic on encoded values ----

    #[inline]
    pub fn int_raw(&self, n: i64) -> u32 {
        let p = self.inner.key.p as i64;
        n.rem_euclid(p) as u32
    }

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        let k = &self.inner.key;
        if k.m == 1 {
            let s = a + b;
            if s >= k.p {
                s - k.p
            } else {
                s
            }
        } else if k.p == 2 {
            a ^ b
        } else {
            let p = k.p;
            let mut out = 0;
            let (mut x, mut y) = (a, b);
            for &w in &self.inner.pow_p {
                let s = (x % p + y % p) % p;
                out += s * w;
                x /= p;
                y /= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        let k = &self.inner.key;
        if k.m == 1 {
            if a == 0 {
                0
            } else {
                k.p - a
            }
        } else if k.p == 2 {
            a
        } else {
            let p = k.p;
            let mut out = 0;
            let mut x = a;
            for &w in &self.inner.pow_p {
                let d = x % p;
                out += ((p - d) % p) * w;
                x /= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        if inner.key.m == 1 {
            return ((a as u64 * b as u64) % inner.key.p as u64) as u32;
        }
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    /// Inverse of a nonzero value. Returns 0 for 0.
    #[inline]
    pub fn inv_raw(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let order = inner.q - 1;
        if order == 1 {
            return 1;
        }
        let l = inner.log[a as usize];
        inner.exp[((order - l) % order) as usize]
    }

    pub fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let order = (inner.q - 1) as u64;
        let l = inner.log[a as usize] as u64;
        inner.exp[((l * (e % order)) % order) as usize]
    }

    /// Formats an element: an integer for prime-subfield elements,
    /// `(c0 c1 ...)` otherwise.
    pub fn format_raw(&self, v: u32) -> String {
        let k = self.inner.key;
        if k.m == 1 || v < k.p {
            v.to_string()
        } else {
            let c: Vec<String> = decode(v, k.p, k.m).iter().map(|d| d.to_string()).collect();
            format!("({})", c.join(" "))
        }
    }

    pub fn format(&self, a: FieldElem) -> String {
        self.format_raw(a.value)
    }

    /// Parses a coordinate: an integer (taken mod p for prime fields, or as an
    /// encoded value for extension fields, where a leading `-` negates) or a
    /// parenthesised coefficient list `(c0 c1 ...)`.
    pub fn parse_raw(&self, text: &str) -> Result<u32, FieldError> {
        let t = text.trim();
        let bad = |msg: &str| FieldError::Descriptor(t.to_string(), msg.to_string());
        if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let coeffs: Result<Vec<i64>, _> =
                inner.split_whitespace().map(|c| c.parse::<i64>()).collect();
            let coeffs = coeffs.map_err(|_| bad("bad coefficient"))?;
            if coeffs.len() > self.inner.key.m as usize {
                return Err(bad("too many coefficients"));
            }
            let reduced: Vec<u32> = coeffs.iter().map(|&c| self.int_raw(c)).collect();
            return Ok(encode(&reduced, self.inner.key.p));
        }
        let n: i64 = t.parse().map_err(|_| bad("not an integer"))?;
        if self.inner.key.m == 1 {
            Ok(self.int_raw(n))
        } else {
            let mag = n.unsigned_abs();
            if mag >= self.inner.q as u64 {
                return Err(FieldError::OutOfRange {
                    value: mag,
                    order: self.inner.q,
                });
            }
            let v = mag as u32;
            Ok(if n < 0 { self.neg_raw(v) } else { v })
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// `p`, `p^m`, or `p^m:c0,c1,...,cm` (modulus coefficients, constant first).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| FieldError::Descriptor(s.to_string(), msg.to_string());
        let (order, modulus) = match s.split_once(':') {
            Some((o, m)) => (o, Some(m)),
            None => (s, None),
        };
        let (p, m) = match order.split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u32>().map_err(|_| bad("bad characteristic"))?,
                m.trim().parse::<u32>().map_err(|_| bad("bad degree"))?,
            ),
            None => (order.trim().parse::<u32>().map_err(|_| bad("bad order"))?, 1),
        };
        let modulus = match modulus {
            Some(text) => Some(
                text.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("bad modulus coefficient"))?,
            ),
            None => None,
        };
        Field::new(p, m, modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::new(3, 2, Some(vec![1, 0, 1])).unwrap()
    }

    #[test]
    fn prime_field_order() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.characteristic(), 5);
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn gf9_from_x2_plus_1() {
        let f = gf9();
        assert_eq!(f.order(), 9);
        // x^2 + 1 has no root mod 3
        for x in 0..3u32 {
            assert_ne!((x * x + 1) % 3, 0);
        }
    }

    #[test]
    fn non_prime_characteristic() {
        assert_eq!(
            Field::new(4, 1, None).unwrap_err(),
            FieldError::NonPrimeCharacteristic(4)
        );
    }

    #[test]
    fn reducible_and_missing_modulus() {
        // x^2 + 2 = (x+1)(x+2) mod 3
        assert!(matches!(
            Field::new(3, 2, Some(vec![2, 0, 1])),
            Err(FieldError::ReducibleModulus(..))
        ));
        assert!(matches!(
            Field::new(11, 2, None),
            Err(FieldError::MissingModulus { p: 11, m: 2 })
        ));
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = Field::new(p, m, None).unwrap();
            assert_eq!(f.order(), p.pow(m));
        }
    }

    #[test]
    fn small_arithmetic() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.add(f5.from_int(2), f5.from_int(3)).unwrap(), f5.zero());
        let f = gf9();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x).unwrap(), f.from_int(2));
    }

    #[test]
    fn zero_inverse_and_mismatch() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.inv(f.zero()).unwrap_err(), FieldError::ZeroInverse);
        let g = Field::prime(5).unwrap();
        assert!(matches!(
            f.add(f.one(), g.one()),
            Err(FieldError::FieldMismatch(..))
        ));
        assert!(matches!(
            f.apply(FieldOp::Mul, g.one(), Some(f.one())),
            Err(FieldError::FieldMismatch(..))
        ));
    }

    #[test]
    fn same_parameters_share_identity() {
        let a = Field::prime(5).unwrap();
        let b = Field::prime(5).unwrap();
        assert_eq!(a, b);
        assert!(a.add(a.one(), b.one()).is_ok());
    }

    #[test]
    fn inverse_exhaustive_up_to_121() {
        let mut fields = Vec::new();
        for p in [2u32, 3, 5, 7, 11] {
            fields.push(Field::prime(p).unwrap());
        }
        for (p, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2)] {
            fields.push(Field::new(p, m, None).unwrap());
        }
        fields.push(Field::new(11, 2, Some(vec![1, 0, 1])).unwrap());
        fields.push(Field::prime(113).unwrap());
        for f in &fields {
            assert!(f.order() <= 121);
            for a in f.elements().skip(1) {
                let ia = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ia).unwrap(), f.one(), "{f:?} {a:?}");
            }
        }
    }

    #[test]
    fn axioms_exhaustive_up_to_9() {
        let fields = vec![
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::new(2, 2, None).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::new(2, 3, None).unwrap(),
            gf9(),
        ];
        for f in &fields {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.zero()).unwrap(), a);
                assert_eq!(f.mul(a, f.one()).unwrap(), a);
                assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), f.zero());
                for &b in &els {
                    assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                    assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                    assert_eq!(f.sub(f.add(a, b).unwrap(), b).unwrap(), a);
                    for &c in &els {
                        let ab_c = f.add(f.add(a, b).unwrap(), c).unwrap();
                        let a_bc = f.add(a, f.add(b, c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                        let m1 = f.mul(f.mul(a, b).unwrap(), c).unwrap();
                        let m2 = f.mul(a, f.mul(b, c).unwrap()).unwrap();
                        assert_eq!(m1, m2);
                        let d1 = f.mul(a, f.add(b, c).unwrap()).unwrap();
                        let d2 = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
                        assert_eq!(d1, d2);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for f in [gf9(), Field::new(5, 2, None).unwrap(), Field::new(2, 4, None).unwrap()] {
            let p = f.characteristic() as u64;
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    let lhs = f.pow(f.add(a, b).unwrap(), p).unwrap();
                    let rhs = f.add(f.pow(a, p).unwrap(), f.pow(b, p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f: Field = "3^2:1,0,1".parse().unwrap();
        assert_eq!(f, gf9());
        assert_eq!(f.descriptor(), "3^2:1,0,1");
        let g: Field = "7".parse().unwrap();
        assert_eq!(g.order(), 7);
        let h: Field = "2^2".parse().unwrap();
        assert_eq!(h.order(), 4);
        assert!("x^2".parse::<Field>().is_err());
    }

    #[test]
    fn parse_coordinates() {
        let f = gf9();
        assert_eq!(f.parse_raw("(0 1)").unwrap(), 3);
        assert_eq!(f.parse_raw("-1").unwrap(), 2);
        assert_eq!(f.format_raw(3), "(0 1)");
        let p = Field::prime(5).unwrap();
        assert_eq!(p.parse_raw("-1").unwrap(), 4);
        assert_eq!(p.parse_raw("7").unwrap(), 2);
    }
}
