use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GfError;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Reduction polynomials used when a binary extension field is requested
/// without an explicit modulus. Index is the extension degree `m`.
///
/// `m = 8` is the AES polynomial `x^8 + x^4 + x^3 + x + 1`, which is
/// irreducible but not primitive; the others are primitive trinomials or
/// pentanomials.
const DEFAULT_POLYS: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// Default reduction polynomial for `GF(2^m)`, `None` outside `2..=16`.
pub fn default_poly(m: u32) -> Option<u32> {
    DEFAULT_POLYS.get(m as usize).copied().filter(|&p| p != 0)
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of carry-less division `a mod b` over GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let d = degree(poly);
    for divisor in 2u32..(1 << (d / 2 + 1)) {
        if poly_rem(poly, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Carry-less product reduced modulo `poly` (degree `m`).
fn clmul_mod(mut a: u32, mut b: u32, poly: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

enum Arith {
    Prime,
    /// Log/antilog tables over a generator of the multiplicative group.
    /// `exp` is doubled in length so `exp[log a + log b]` never wraps.
    Binary { exp: Vec<u16>, log: Vec<u32> },
}

struct Inner {
    p: u32,
    m: u32,
    poly: u32,
    order: u32,
    arith: Arith,
}

/// A finite field `F_q`, either prime (`q = p`) or binary extension
/// (`q = 2^m`). Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl FieldSpec {
    /// `GF(p^m)` with the default reduction polynomial when `m > 1`.
    pub fn new(p: u32, m: u32) -> Result<Self, GfError> {
        if m > 1 && p == 2 {
            let poly = default_poly(m).ok_or(GfError::FieldTooLarge { p, m })?;
            return Self::with_poly(p, m, poly);
        }
        Self::with_poly(p, m, 0)
    }

    pub fn prime(p: u32) -> Result<Self, GfError> {
        Self::new(p, 1)
    }

    /// `GF(2^m)` reduced by `poly`. For prime fields `poly` is ignored.
    pub fn with_poly(p: u32, m: u32, poly: u32) -> Result<Self, GfError> {
        if m == 0 {
            return Err(GfError::UnsupportedExtension { p, m });
        }
        if !is_prime(p) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if m > 1 && p != 2 {
            return Err(GfError::UnsupportedExtension { p, m });
        }
        let order = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER as u64);
        let Some(order) = order else {
            return Err(GfError::FieldTooLarge { p, m });
        };
        let order = order as u32;
        if m == 1 {
            return Ok(FieldSpec(Arc::new(Inner { p, m, poly: 0, order, arith: Arith::Prime })));
        }
        if degree(poly) != m || !is_irreducible(poly) {
            return Err(GfError::ReducibleModulus { poly, m });
        }
        let (exp, log) = build_tables(poly, m, order);
        Ok(FieldSpec(Arc::new(Inner { p, m, poly, order, arith: Arith::Binary { exp, log } })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Reduction polynomial; 0 for prime fields.
    pub fn poly(&self) -> u32 {
        self.0.poly
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn contains(&self, v: u32) -> bool {
        v < self.0.order
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, GfError> {
        if !self.contains(value) {
            return Err(GfError::OutOfRange { value, order: self.order() });
        }
        Ok(FieldElement { value, field: self.clone() })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, field: self.clone() }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, field: self.clone() }
    }

    // Raw arithmetic on representatives in `[0, q)`. Callers guarantee range.

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(self.contains(a) && self.contains(b));
        match self.0.arith {
            Arith::Prime => {
                let s = a + b;
                if s >= self.0.p {
                    s - self.0.p
                } else {
                    s
                }
            }
            Arith::Binary { .. } => a ^ b,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.0.arith {
            Arith::Prime if a != 0 => self.0.p - a,
            _ => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.0.arith {
            Arith::Prime => ((a as u64 * b as u64) % self.0.p as u64) as u32,
            Arith::Binary { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize] as u32
                }
            }
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(match &self.0.arith {
            Arith::Prime => {
                // extended Euclid on (a, p)
                let (mut r0, mut r1) = (self.0.p as i64, a as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                t0.rem_euclid(self.0.p as i64) as u32
            }
            Arith::Binary { exp, log } => {
                let n = self.0.order - 1;
                exp[((n - log[a as usize]) % n) as usize] as u32
            }
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

fn build_tables(poly: u32, m: u32, order: u32) -> (Vec<u16>, Vec<u32>) {
    let n = (order - 1) as usize;
    // The default polynomials are not all primitive, so search for a
    // generator instead of assuming `x` is one.
    let generator = (2..order)
        .find(|&g| {
            let mut v = g;
            for _ in 1..n {
                if v == 1 {
                    return false;
                }
                v = clmul_mod(v, g, poly, m);
            }
            v == 1
        })
        .unwrap_or(1);
    let mut exp = vec![0u16; 2 * n.max(1)];
    let mut log = vec![0u32; order as usize];
    let mut v = 1u32;
    for i in 0..n {
        exp[i] = v as u16;
        exp[i + n] = v as u16;
        log[v as usize] = i as u32;
        v = clmul_mod(v, generator, poly, m);
    }
    (exp, log)
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.poly == other.0.poly)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF(2^{}; {:#x})", self.0.m, self.0.poly)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldRepr {
    p: u32,
    m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let poly = (self.0.m > 1).then_some(self.0.poly);
        FieldRepr { p: self.0.p, m: self.0.m, poly }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FieldRepr::deserialize(d)?;
        let f = match r.poly {
            Some(poly) if r.m > 1 => FieldSpec::with_poly(r.p, r.m, poly),
            _ => FieldSpec::new(r.p, r.m),
        };
        f.map_err(serde::de::Error::custom)
    }
}

/// An element of a specific field. Binary operations check that both
/// operands live in the same field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        Ok(())
    }

    fn with(&self, value: u32) -> Self {
        FieldElement { value, field: self.field.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.with(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        Ok(self.with(self.field.inv(self.value)?))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.value, self.field)
    }
}
