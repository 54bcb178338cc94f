//! Finite fields `F_{p^k}` at desk scale.
//!
//! Elements are stored as a dense base-`p` integer: the element
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` (reduced modulo the field's monic
//! irreducible modulus) is encoded as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! Prime-field constants therefore encode as themselves. Fields of order at
//! most `2^12` carry log/antilog and Zech tables; larger fields fall back to
//! polynomial arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Encoded field element, valid only together with its field.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const TABLE_LIMIT: u32 = 1 << 12;
const NO_ZECH: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the desk-scale bound 2^20")]
    TooLarge { p: u64, k: u32 },
    #[error("operands belong to different fields")]
    Mismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("-1 is not a square in F_{0} (need q = 1 mod 4)")]
    NoSqrtMinusOne(u64),
    #[error("F_{small} does not embed in F_{large}")]
    NoEmbedding { small: u32, large: u32 },
}

pub type Result<T> = std::result::Result<T, FieldError>;

struct Tables {
    exp: Vec<Elem>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// The field `F_{p^k}` with a fixed modulus and multiplicative generator.
pub struct PrimePowerField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    tables: Option<Tables>,
}

impl fmt::Debug for PrimePowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimePowerField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for PrimePowerField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for PrimePowerField {}

/// Serializable description of a field: enough to rebuild it and check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^k`, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        k += 1;
    }
    Some((p as u32, k))
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
        if c != 0 {
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                let sub = (c as u64 * mj as u64 % p as u64) as u32;
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
        }
        poly_trim(&mut r);
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return true;
    }
    // Any factorization has a monic factor of degree <= k/2.
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl PrimePowerField {
    /// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
    /// modulus (lower coefficients read as a base-`p` number).
    pub fn new(p: u32, k: u32) -> Result<Arc<Self>> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER);
        let Some(q) = q else {
            return Err(FieldError::TooLarge { p: p as u64, k });
        };
        let modulus = (0..q)
            .map(|low| {
                let mut f = Vec::with_capacity(k as usize + 1);
                let mut v = low;
                for _ in 0..k {
                    f.push((v % p as u64) as u32);
                    v /= p as u64;
                }
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut field = PrimePowerField {
            p,
            k,
            q: q as u32,
            modulus,
            generator: 1,
            tables: None,
        };
        field.generator = field.find_generator();
        if field.q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    /// Builds `F_q` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Arc<Self>> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Arc<Self>> {
        let f = Self::new(d.p, d.k)?;
        if f.modulus != d.modulus {
            return Err(FieldError::Mismatch);
        }
        Ok(f)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    fn find_generator(&self) -> Elem {
        let n = (self.q - 1) as u64;
        let factors = prime_factors(n);
        (1..self.q)
            .find(|&x| factors.iter().all(|&r| self.pow_poly(x, n / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.q as usize];
        let mut x: Elem = 1;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.mul_poly(x, self.generator);
        }
        let zech = (0..n)
            .map(|i| {
                let s = self.add_digits(1, exp[i]);
                if s == 0 {
                    NO_ZECH
                } else {
                    log[s as usize]
                }
            })
            .collect();
        Tables { exp, log, zech }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = x;
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        self.from_digits(&poly_rem(&prod, &self.modulus, self.p))
    }

    fn pow_poly(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let n = self.q - 1;
                let (la, lb) = (t.log[a as usize], t.log[b as usize]);
                let d = (lb + n - la) % n;
                let z = t.zech[d as usize];
                if z == NO_ZECH {
                    0
                } else {
                    t.exp[((la + z) % n) as usize]
                }
            }
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a == 0 {
            return a;
        }
        let mut v = a;
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.k {
            out += ((self.p - v % self.p) % self.p) * w;
            v /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let s = t.log[a as usize] + t.log[b as usize];
                t.exp[(s % (self.q - 1)) as usize]
            }
            None => self.mul_poly(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
            None => self.pow_poly(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let bi = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    /// `x^e` for a signed exponent; `0^e` is `0` for `e != 0`.
    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = (self.q - 1) as i64;
        let e = e.rem_euclid(n) as u64;
        match &self.tables {
            Some(t) => t.exp[((t.log[x as usize] as u64 * e) % n as u64) as usize],
            None => self.pow_poly(x, e),
        }
    }

    /// `x ↦ x^{p^m}`; `m` is taken modulo the extension degree.
    pub fn frobenius_power(&self, x: Elem, m: u32) -> Elem {
        let m = m % self.k;
        let mut y = x;
        for _ in 0..m {
            y = self.pow_p(y);
        }
        y
    }

    fn pow_p(&self, x: Elem) -> Elem {
        if x == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.q - 1) as u64;
                t.exp[((t.log[x as usize] as u64 * self.p as u64) % n) as usize]
            }
            None => self.pow_poly(x, self.p as u64),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Elem) -> u64 {
        assert!(x != 0, "zero has no multiplicative order");
        let mut n = (self.q - 1) as u64;
        for r in prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(x, (n / r) as i64) == 1 {
                n /= r;
            }
        }
        n
    }

    /// Absolute trace to the prime field, returned as an integer in `[0, p)`.
    pub fn trace_to_prime(&self, x: Elem) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.k {
            acc = self.add(acc, y);
            y = self.pow_p(y);
        }
        debug_assert!(acc < self.p);
        acc
    }

    pub fn is_square(&self, x: Elem) -> bool {
        if x == 0 || self.p == 2 {
            return true;
        }
        self.pow(x, ((self.q - 1) / 2) as i64) == 1
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as i64)))
    }
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone)]
pub struct FieldElement {
    pub field: Arc<PrimePowerField>,
    pub repr: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}({})", self.field.q, self.repr)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && *self.field == *other.field
    }
}

impl Eq for FieldElement {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Arc<PrimePowerField>, repr: Elem) -> Self {
        assert!(repr < field.q, "encoding out of range");
        FieldElement {
            field: Arc::clone(field),
            repr,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        FieldElement::new(&self.field, self.field.pow(self.repr, e))
    }

    pub fn frobenius_power(&self, m: u32) -> Self {
        FieldElement::new(&self.field, self.field.frobenius_power(self.repr, m))
    }
}

/// Checked binary field operation.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    if *a.field != *b.field {
        return Err(FieldError::Mismatch);
    }
    let f = &a.field;
    let r = match op {
        FieldOp::Add => f.add(a.repr, b.repr),
        FieldOp::Sub => f.sub(a.repr, b.repr),
        FieldOp::Mul => f.mul(a.repr, b.repr),
        FieldOp::Div => f.div(a.repr, b.repr)?,
    };
    Ok(FieldElement::new(f, r))
}

/// Embedding `F_{p^a} ↪ F_{p^b}`, realized by sending `x` to the smallest root
/// of the small field's modulus in the large field.
pub struct FieldEmbedding {
    pub small: Arc<PrimePowerField>,
    pub large: Arc<PrimePowerField>,
    image: Vec<Elem>,
}

impl FieldEmbedding {
    pub fn new(small: &Arc<PrimePowerField>, large: &Arc<PrimePowerField>) -> Result<Self> {
        let err = FieldError::NoEmbedding {
            small: small.q,
            large: large.q,
        };
        if small.p != large.p || !large.k.is_multiple_of(small.k) {
            return Err(err);
        }
        let root = large
            .elements()
            .find(|&x| large.eval_prime_poly(&small.modulus, x) == 0)
            .ok_or(err)?;
        let image = small
            .elements()
            .map(|x| large.eval_prime_poly(&small.digits(x), root))
            .collect();
        Ok(FieldEmbedding {
            small: Arc::clone(small),
            large: Arc::clone(large),
            image,
        })
    }

    pub fn map(&self, x: Elem) -> Elem {
        self.image[x as usize]
    }
}

/// The smallest `γ ∈ F_q` with `γ² = -1`.
pub fn sqrt_minus_one(q: u64) -> Result<FieldElement> {
    if q % 4 != 1 {
        return Err(FieldError::NoSqrtMinusOne(q));
    }
    let f = PrimePowerField::of_order(q)?;
    let minus_one = f.neg(1);
    let g = f
        .elements()
        .find(|&x| f.mul(x, x) == minus_one)
        .expect("q = 1 mod 4 guarantees a square root of -1");
    Ok(FieldElement::new(&f, g))
}

/// The smallest `t ∈ F_{q²}` with `t^{q+1} = -1`.
pub fn solve_norm_minus_one(q: u64) -> Result<FieldElement> {
    let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    let f = PrimePowerField::new(p, 2 * k)?;
    let minus_one = f.neg(1);
    let t = (1..f.order())
        .find(|&x| f.pow(x, q as i64 + 1) == minus_one)
        .expect("x^(q+1) + 1 splits over F_{q^2}");
    Ok(FieldElement::new(&f, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &PrimePowerField, x: Elem) -> u64 {
        let mut y = x;
        let mut n = 1;
        while y != 1 {
            y = f.mul(y, x);
            n += 1;
        }
        n
    }

    #[test]
    fn small_fields() {
        let f2 = PrimePowerField::new(2, 1).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![0, 1]);
        let f4 = PrimePowerField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = PrimePowerField::new(3, 2).unwrap();
        assert_eq!(brute_order(&f9, f9.generator()), 8);
        assert_eq!(f9.element_order(f9.generator()), 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(PrimePowerField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(
            PrimePowerField::new(2, 21),
            Err(FieldError::TooLarge { .. })
        ));
        assert_eq!(PrimePowerField::new(3, 0).unwrap_err(), FieldError::ZeroDegree);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = PrimePowerField::new(5, 1).unwrap();
        let a = FieldElement::new(&f5, 2);
        let b = FieldElement::new(&f5, 3);
        assert_eq!(field_arith(&a, &b, FieldOp::Add).unwrap().repr, 0);
        let f7 = PrimePowerField::new(7, 1).unwrap();
        assert_eq!(f7.inv(3), Some(5));
        let zero = FieldElement::new(&f7, 0);
        let three = FieldElement::new(&f7, 3);
        assert_eq!(
            field_arith(&three, &zero, FieldOp::Div).unwrap_err(),
            FieldError::DivisionByZero
        );
        assert_eq!(
            field_arith(&three, &a, FieldOp::Mul).unwrap_err(),
            FieldError::Mismatch
        );
        let f9 = PrimePowerField::new(3, 2).unwrap();
        let g4 = f9.pow(f9.generator(), 4);
        assert_eq!(g4, f9.neg(1));
        let twos: Vec<_> = (1..9).filter(|&x| f9.element_order(x) == 2).collect();
        assert_eq!(twos, vec![g4]);
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        // F_{2^13} is above the table limit; compare against F_{2^12}-style
        // checks on a sample by verifying field axioms directly.
        let big = PrimePowerField::new(2, 13).unwrap();
        assert!(big.tables.is_none());
        let g = big.generator();
        assert_eq!(big.pow(g, (big.order() - 1) as i64), 1);
        for x in [1u32, 2, 3, 77, 4095, 8000] {
            let xi = big.inv(x).unwrap();
            assert_eq!(big.mul(x, xi), 1);
        }
        let small = PrimePowerField::new(5, 3).unwrap();
        for a in (0..125).step_by(7) {
            for b in (0..125).step_by(11) {
                assert_eq!(small.mul(a, b), small.mul_poly(a, b));
                assert_eq!(small.add(a, b), small.add_digits(a, b));
            }
        }
    }

    #[test]
    fn lagrange_exhaustive() {
        for (p, k) in [(2, 1), (2, 4), (3, 2), (5, 2), (7, 1), (2, 10), (3, 5)] {
            let f = PrimePowerField::new(p, k).unwrap();
            let n = (f.order() - 1) as i64;
            assert!(f.elements().skip(1).all(|x| f.pow(x, n) == 1));
        }
    }

    #[test]
    fn frobenius() {
        let f4 = PrimePowerField::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.frobenius_power(w, 1), f4.mul(w, w));
        let f9 = PrimePowerField::new(3, 2).unwrap();
        for x in f9.elements() {
            assert_eq!(f9.frobenius_power(f9.frobenius_power(x, 1), 1), x);
            assert_eq!(f9.frobenius_power(x, 2), x);
        }
        // F_3 inside F_9 is fixed by x -> x^3.
        let f3 = PrimePowerField::new(3, 1).unwrap();
        let emb = FieldEmbedding::new(&f3, &f9).unwrap();
        for x in f3.elements() {
            let y = emb.map(x);
            assert_eq!(f9.frobenius_power(y, 1), y);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f4 = PrimePowerField::new(2, 2).unwrap();
        let f16 = PrimePowerField::new(2, 4).unwrap();
        let emb = FieldEmbedding::new(&f4, &f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(emb.map(f4.add(a, b)), f16.add(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(f4.mul(a, b)), f16.mul(emb.map(a), emb.map(b)));
            }
        }
        let f8 = PrimePowerField::new(2, 3).unwrap();
        assert!(FieldEmbedding::new(&f4, &f8).is_err());
    }

    #[test]
    fn sqrt_minus_one_examples() {
        let g = sqrt_minus_one(5).unwrap();
        assert!(g.repr == 2 || g.repr == 3);
        let f = &g.field;
        assert_eq!(f.mul(g.repr, g.repr), f.neg(1));
        let g13 = sqrt_minus_one(13).unwrap();
        let f13 = &g13.field;
        let brute: Vec<_> = (0..13).filter(|&x| (x * x + 1) % 13 == 0).collect();
        assert!(brute.contains(&g13.repr));
        assert_eq!(sqrt_minus_one(3).unwrap_err(), FieldError::NoSqrtMinusOne(3));
        assert_eq!(f13.add(f13.mul(g13.repr, g13.repr), 1), 0);
    }

    #[test]
    fn norm_minus_one_examples() {
        let t = solve_norm_minus_one(3).unwrap();
        let f9 = &t.field;
        assert_eq!(f9.order(), 9);
        assert_eq!(brute_order(f9, t.repr), 8);
        assert_eq!(f9.pow(t.repr, 4), f9.neg(1));
        // t^{-q} = -t for odd q.
        assert_eq!(f9.pow(t.repr, -3), f9.neg(t.repr));

        let t2 = solve_norm_minus_one(2).unwrap();
        assert_eq!(t2.repr, 1);

        let t5 = solve_norm_minus_one(5).unwrap();
        let f25 = &t5.field;
        assert_eq!(f25.pow(t5.repr, 6), f25.neg(1));
        let brute: Vec<_> = (1..25).filter(|&x| f25.pow(x, 6) == f25.neg(1)).collect();
        assert_eq!(brute[0], t5.repr);
        let beta = f25.mul(t5.repr, t5.repr);
        assert!(f25.is_square(beta));
        assert_eq!(f25.pow(beta, 12), 1);
    }

    #[test]
    fn trace_lands_in_prime_field() {
        let f = PrimePowerField::new(3, 2).unwrap();
        let mut hist = [0; 3];
        for x in f.elements() {
            hist[f.trace_to_prime(x) as usize] += 1;
        }
        assert_eq!(hist, [3, 3, 3]);
    }
}
