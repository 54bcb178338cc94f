//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! A value is a rational combination of the power basis
//! `1, ζ_n, …, ζ_n^{φ(n)-1}` after reduction modulo the `n`-th cyclotomic
//! polynomial, stored as integer numerators over one positive common
//! denominator. Binary operations lift both operands to the lcm order.
//! Minimizing the order (finding the smallest `m | n` with the value in
//! `Q(ζ_m)`) is done only for ordering, display and serialization.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn totient(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let div = cyclotomic_polynomial(d);
        let dd = div.len() - 1;
        let mut quot = vec![0i64; poly.len() - dd];
        let mut rem = poly.clone();
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd];
            quot[i] = c;
            if c != 0 {
                for (j, &dj) in div.iter().enumerate() {
                    rem[i + j] -= c * dj;
                }
            }
        }
        debug_assert!(rem.iter().all(|&r| r == 0));
        poly = quot;
    }
    let poly = Arc::new(poly);
    cache.write().unwrap().insert(n, Arc::clone(&poly));
    poly
}

/// An element of `Q(ζ_order)`.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

/// Reduces a polynomial in `ζ_n` (any length) modulo `Φ_n`.
fn reduce(n: u32, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    for i in (phi..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for (j, &pj) in phi_poly[..phi].iter().enumerate() {
            if pj != 0 {
                v[i - phi + j] -= &c * pj;
            }
        }
    }
    v.resize(phi, BigInt::zero());
    v
}

impl Cyclotomic {
    fn from_parts(order: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len(), totient(order) as usize);
        let mut c = Cyclotomic { order, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for x in &mut self.num {
                *x = -std::mem::take(x);
            }
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for x in &mut self.num {
                *x /= &g;
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic {
            order: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Cyclotomic {
            order: 1,
            num: vec![n],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_parts(1, vec![BigInt::from(num)], BigInt::from(den))
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "order must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigInt::zero(); n as usize];
        v[e] = BigInt::one();
        Self::from_parts(n, reduce(n, v), BigInt::one())
    }

    /// Builds `Σ_k mult[k] ζ_n^k` from integer multiplicities.
    pub fn from_exponent_counts(n: u32, mult: &[i64]) -> Self {
        let mut v = vec![BigInt::zero(); n as usize];
        for (k, &m) in mult.iter().enumerate() {
            v[k % n as usize] += m;
        }
        Self::from_parts(n, reduce(n, v), BigInt::one())
    }

    /// Order `n` of the ambient field `Q(ζ_n)` the value is currently stored in.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Integer value, if the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// Same value expressed in `Q(ζ_m)`; `m` must be a multiple of the order.
    pub fn embed(&self, m: u32) -> Self {
        assert!(m.is_multiple_of(self.order), "target order must be a multiple");
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut v = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Cyclotomic {
            order: m,
            num: reduce(m, v),
            den: self.den.clone(),
        }
    }

    fn aligned<'a>(
        a: &'a Cyclotomic,
        b: &'a Cyclotomic,
    ) -> (std::borrow::Cow<'a, Cyclotomic>, std::borrow::Cow<'a, Cyclotomic>) {
        use std::borrow::Cow;
        if a.order == b.order {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else if b.order == 1 {
            (Cow::Borrowed(a), Cow::Owned(b.embed(a.order)))
        } else if a.order == 1 {
            (Cow::Owned(a.embed(b.order)), Cow::Borrowed(b))
        } else {
            let m = lcm(a.order, b.order);
            (Cow::Owned(a.embed(m)), Cow::Owned(b.embed(m)))
        }
    }

    fn add_signed(&self, other: &Cyclotomic, negate: bool) -> Cyclotomic {
        let (a, b) = Self::aligned(self, other);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| {
                let lhs = x * &b.den;
                let rhs = y * &a.den;
                if negate {
                    lhs - rhs
                } else {
                    lhs + rhs
                }
            })
            .collect();
        Self::from_parts(a.order, num, &a.den * &b.den)
    }

    fn mul_impl(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 {
            return other.scale_parts(&self.num[0], &self.den);
        }
        if other.order == 1 {
            return self.scale_parts(&other.num[0], &other.den);
        }
        let (a, b) = Self::aligned(self, other);
        let n = a.order as usize;
        let mut acc = vec![BigInt::zero(); n];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let idx = (i + j) % n;
                acc[idx] += x * y;
            }
        }
        Self::from_parts(a.order, reduce(a.order, acc), &a.den * &b.den)
    }

    fn scale_parts(&self, num: &BigInt, den: &BigInt) -> Cyclotomic {
        Self::from_parts(
            self.order,
            self.num.iter().map(|x| x * num).collect(),
            &self.den * den,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        self.scale_parts(r.numer(), r.denom())
    }

    pub fn scale_int(&self, n: i64) -> Cyclotomic {
        self.scale_parts(&BigInt::from(n), &BigInt::one())
    }

    pub fn div_int(&self, n: i64) -> Cyclotomic {
        assert!(n != 0, "division by zero");
        self.scale_parts(&BigInt::one(), &BigInt::from(n))
    }

    pub fn div_bigint(&self, n: &BigInt) -> Cyclotomic {
        assert!(!n.is_zero(), "division by zero");
        self.scale_parts(&BigInt::one(), n)
    }

    /// Galois automorphism `ζ_n ↦ ζ_n^k`, `k` coprime to the order.
    pub fn galois(&self, k: i64) -> Cyclotomic {
        let n = self.order as i64;
        assert_eq!(k.gcd(&n), 1, "exponent must be a unit mod {n}");
        if n == 1 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            let e = (i as i64 * k).rem_euclid(n) as usize;
            v[e] += c;
        }
        Self::from_parts(self.order, reduce(self.order, v), self.den.clone())
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Value under `ζ_n = exp(2πi/n)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.num.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            re += c * theta.cos();
            im += c * theta.sin();
        }
        (re, im)
    }

    /// Coordinates in `Q(ζ_m)` (for `m | order`) if the value lies there.
    fn coordinates_in(&self, m: u32) -> Option<Vec<BigRational>> {
        let n = self.order;
        let phi_n = self.num.len();
        let phi_m = totient(m) as usize;
        let step = (n / m) as usize;
        // Columns: ζ_m^i as vectors in the power basis of Q(ζ_n).
        let cols: Vec<Vec<BigInt>> = (0..phi_m)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n as usize];
                v[i * step] = BigInt::one();
                reduce(n, v)
            })
            .collect();
        // Augmented system [cols | self] with phi_n rows.
        let mut rows: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|r| {
                let mut row: Vec<BigRational> = cols
                    .iter()
                    .map(|c| BigRational::from_integer(c[r].clone()))
                    .collect();
                row.push(BigRational::new(self.num[r].clone(), self.den.clone()));
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..phi_m {
            let Some(sel) = (pivot_row..phi_n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot_row, sel);
            let inv = rows[pivot_row][col].recip();
            for x in rows[pivot_row].iter_mut() {
                *x = &*x * &inv;
            }
            let prow = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x = &*x - &f * y;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|r| !r[phi_m].is_zero()) {
            return None;
        }
        let mut out = vec![BigRational::zero(); phi_m];
        for (r, &c) in pivots.iter().enumerate() {
            out[c] = rows[r][phi_m].clone();
        }
        Some(out)
    }

    /// The same value stored in the smallest cyclotomic field containing it.
    pub fn minimize(&self) -> Cyclotomic {
        if self.is_rational() {
            return Self::from_parts(1, vec![self.num[0].clone()], self.den.clone());
        }
        for m in divisors(self.order) {
            if m == self.order {
                break;
            }
            if let Some(coords) = self.coordinates_in(m) {
                let den = coords
                    .iter()
                    .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let num = coords
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect();
                return Self::from_parts(m, num, den);
            }
        }
        self.clone()
    }

    /// Rational coefficients in the current power basis.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Total order on values, via the minimized form.
    pub fn canonical_cmp(&self, other: &Cyclotomic) -> Ordering {
        let a = self.minimize();
        let b = other.minimize();
        a.order
            .cmp(&b.order)
            .then_with(|| a.coefficients().cmp(&b.coefficients()))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclotomic::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimize();
        if let Some(r) = m.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in m.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match i {
                0 => String::new(),
                1 => format!("z{}", m.order),
                _ => format!("z{}^{}", m.order, i),
            };
            if root.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{mag}*{root}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                let f: fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic = $body;
                f(self, rhs)
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_signed(b, false));
forward_binop!(Sub, sub, |a, b| a.add_signed(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| &acc + &x)
    }
}

/// JSON integer when it fits in `i64`, decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u32,
    coeffs: Vec<[IntRepr; 2]>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.minimize();
        let coeffs = m
            .coefficients()
            .iter()
            .map(|c| [IntRepr::from_big(c.numer()), IntRepr::from_big(c.denom())])
            .collect();
        CyclotomicRepr {
            order: m.order,
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = CyclotomicRepr::deserialize(d)?;
        if r.order == 0 || r.coeffs.len() != totient(r.order) as usize {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, got {}",
                r.order,
                totient(r.order.max(1)),
                r.coeffs.len()
            )));
        }
        let mut acc = Cyclotomic {
            order: r.order,
            num: vec![BigInt::zero(); r.coeffs.len()],
            den: BigInt::one(),
        };
        for (i, [n, dn]) in r.coeffs.iter().enumerate() {
            let n = n.to_big().map_err(D::Error::custom)?;
            let dn = dn.to_big().map_err(D::Error::custom)?;
            if dn.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let mut num = vec![BigInt::zero(); r.coeffs.len()];
            num[i] = n;
            acc = &acc + &Cyclotomic::from_parts(r.order, num, dn);
        }
        Ok(acc)
    }
}
