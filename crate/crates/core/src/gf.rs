//! Finite fields `GF(p^n)` with deterministic conventions.
//!
//! Elements are polynomials over `Z_p` modulo a fixed monic irreducible of
//! degree `n`. Internally an element is the integer code `Σ c_i p^i`.
//! The modulus and primitive element are both the smallest candidates in
//! *constant-term-first* lexicographic order (`c_0` compared first), so
//! every run produces identical tables.

use crate::arith::{factorize, is_prime};
use crate::{Error, Result};

/// Largest supported field order; log tables are built eagerly.
pub const MAX_ORDER: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    n: u32,
    order: u32,
    /// Monic modulus, constant term first, length `n + 1`.
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    /// `log[code]`; entry 0 is unused.
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (n >= 1)
            .then(|| p.checked_pow(n))
            .flatten()
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(Error::DegreeOutOfRange { p, n })?;
        let (p32, order) = (p as u32, order as u32);

        let modulus = smallest_irreducible(p32, n);
        let mut field = FiniteField { p: p32, n, order, modulus, generator: 0, exp: Vec::new(), log: Vec::new() };
        field.generator = field.find_generator();
        field.build_tables();
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement { field: self, code: 0 }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement { field: self, code: 1 }
    }

    /// Element from coefficients (constant term first); each is reduced mod `p`
    /// and missing high coefficients are zero.
    pub fn element(&self, coeffs: &[u64]) -> FieldElement<'_> {
        let code =
            coeffs.iter().take(self.n as usize).rev().fold(0u32, |acc, &c| acc * self.p + (c % self.p as u64) as u32);
        FieldElement { field: self, code }
    }

    pub fn from_code(&self, code: u32) -> FieldElement<'_> {
        assert!(code < self.order, "code {code} outside field");
        FieldElement { field: self, code }
    }

    /// Elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> {
        (0..self.order).map(|code| FieldElement { field: self, code })
    }

    /// The smallest element (constant-term-first order) of full
    /// multiplicative order.
    pub fn primitive_element(&self) -> FieldElement<'_> {
        FieldElement { field: self, code: self.generator }
    }

    /// Exponent `e` in `[0, order-1)` with `base^e = x`.
    pub fn discrete_log(&self, base: FieldElement<'_>, x: FieldElement<'_>) -> Result<u64> {
        if !std::ptr::eq(base.field, self) || !std::ptr::eq(x.field, self) {
            return Err(Error::FieldMismatch);
        }
        if x.code == 0 || base.code == 0 {
            return Err(Error::ZeroArgument);
        }
        let m = (self.order - 1) as u64;
        let lb = self.log[base.code as usize] as u64;
        let lx = self.log[x.code as usize] as u64;
        // base is primitive iff its log is a unit mod order-1
        let inv =
            crate::arith::inv_mod(lb, m).ok_or(Error::ConstraintViolated("logarithm base is not primitive".into()))?;
        Ok(if m == 1 { 0 } else { lx * inv % m })
    }

    // Raw code arithmetic for hot loops.

    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg_raw(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.order - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % m;
        self.exp[e as usize]
    }

    pub fn inv_raw(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| {
            let m = self.order - 1;
            self.exp[((m - self.log[a as usize]) % m) as usize]
        })
    }

    /// Logarithm to the primitive element; `None` for zero.
    #[inline]
    pub fn log_raw(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Primitive element raised to `e`.
    #[inline]
    pub fn exp_raw(&self, e: u64) -> u32 {
        self.exp[(e % (self.order as u64 - 1)) as usize]
    }

    fn digits(&self, mut code: u32) -> Vec<u32> {
        let mut d = vec![0; self.n as usize];
        for slot in d.iter_mut() {
            *slot = code % self.p;
            code /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Schoolbook multiplication used before the tables exist.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.digits(a), self.digits(b));
        let prod = poly_mul(&a, &b, self.p);
        self.undigits(&poly_rem(prod, &self.modulus, self.p))
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u32 {
        let m = (self.order - 1) as u64;
        let primes: Vec<u64> = factorize(m).into_iter().map(|(r, _)| r).collect();
        lex_codes(self.p, self.n)
            .filter(|&c| c != 0)
            .find(|&c| self.slow_pow(c, m) == 1 && primes.iter().all(|&r| self.slow_pow(c, m / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let m = self.order as usize - 1;
        let mut exp = Vec::with_capacity(m);
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for e in 0..m {
            exp.push(x);
            log[x as usize] = e as u32;
            x = self.slow_mul(x, self.generator);
        }
        debug_assert_eq!(x, 1);
        self.exp = exp;
        self.log = log;
    }
}

/// Codes in constant-term-first lexicographic order.
fn lex_codes(p: u32, n: u32) -> impl Iterator<Item = u32> {
    let order = p.pow(n);
    (0..order).map(move |key| {
        // key digit i (most significant first) is coefficient c_i
        let mut code = 0;
        let mut k = key;
        let mut place = p.pow(n - 1);
        for _ in 0..n {
            code += (k % p) * place;
            k /= p;
            place /= p;
        }
        code
    })
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    out.into_iter().map(|c| (c % p as u64) as u32).collect()
}

/// Remainder modulo a monic polynomial; result has length `deg(modulus)`.
fn poly_rem(mut a: Vec<u32>, modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    for i in (n..a.len()).rev() {
        let c = a[i];
        if c == 0 {
            continue;
        }
        a[i] = 0;
        for j in 0..n {
            let sub = (c as u64 * modulus[j] as u64 % p as u64) as u32;
            a[i - n + j] = (a[i - n + j] + p - sub) % p;
        }
    }
    a.resize(n, 0);
    a
}

fn is_zero_poly(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Exhaustive trial division by every monic polynomial of degree `1..=n/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() as u32 - 1;
    if n <= 1 {
        return true;
    }
    for deg in 1..=n / 2 {
        for low in 0..p.pow(deg) {
            let mut g = Vec::with_capacity(deg as usize + 1);
            let mut c = low;
            for _ in 0..deg {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if is_zero_poly(&poly_rem(f.to_vec(), &g, p)) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    lex_codes(p, n)
        .map(|code| {
            let mut f = Vec::with_capacity(n as usize + 1);
            let mut c = code;
            for _ in 0..n {
                f.push(c % p);
                c /= p;
            }
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// An element tied to the field it lives in.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FiniteField,
    code: u32,
}

impl std::fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})[{:?}]", self.field.p, self.field.n, self.coeffs())
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.code == other.code
    }
}
impl Eq for FieldElement<'_> {}

impl<'f> FieldElement<'f> {
    pub fn field(&self) -> &'f FiniteField {
        self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Coefficients, constant term first, length `n`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.field, other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, code: u32) -> Self {
        FieldElement { field: self.field, code }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.with(self.field.add_raw(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let neg = self.field.neg_raw(other.code);
        Ok(self.with(self.field.add_raw(self.code, neg)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg_raw(self.code))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.with(self.field.mul_raw(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.inv_raw(self.code).map(|c| self.with(c)).ok_or(Error::ZeroInverse)
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return self.with(1);
        }
        match self.field.log_raw(self.code) {
            None => self.with(0),
            Some(l) => {
                let m = self.field.order as u64 - 1;
                self.with(self.field.exp_raw(l as u64 * (e % m) % m))
            }
        }
    }

    /// Multiplicative order; zero for the zero element.
    pub fn multiplicative_order(&self) -> u64 {
        match self.field.log_raw(self.code) {
            None => 0,
            Some(l) => {
                let m = self.field.order as u64 - 1;
                m / crate::arith::gcd(l as u64, m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Evaluates a polynomial over `Z_p` at `x`.
    fn eval(f: &[u32], x: u32, p: u32) -> u32 {
        f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.primitive_element().code(), 1);
    }

    #[test]
    fn gf9_modulus_is_smallest_irreducible_quadratic() {
        let f = FiniteField::new(3, 2).unwrap();
        // Independent scan: a monic quadratic over Z_3 is irreducible iff it
        // has no root. Walk (c0, c1) with c0 most significant.
        let mut expected = None;
        'scan: for c0 in 0..3 {
            for c1 in 0..3 {
                let poly = [c0, c1, 1];
                if (0..3).all(|x| eval(&poly, x, 3) != 0) {
                    expected = Some(poly.to_vec());
                    break 'scan;
                }
            }
        }
        assert_eq!(f.modulus(), expected.unwrap().as_slice());
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf8_modulus_has_no_root() {
        let f = FiniteField::new(2, 3).unwrap();
        assert!((0..2).all(|x| eval(f.modulus(), x, 2) != 0));
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FiniteField::new(2, 0), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(FiniteField::new(2, 25), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn deterministic() {
        let a = FiniteField::new(5, 3).unwrap();
        let b = FiniteField::new(5, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.primitive_element().code(), b.primitive_element().code());
    }

    #[test]
    fn identities_and_inverses_in_gf9() {
        let f = FiniteField::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(a.add(&f.zero()).unwrap(), a);
            assert_eq!(a.sub(&a).unwrap(), f.zero());
            if !a.is_zero() {
                assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), f.one());
            }
            for b in f.elements() {
                assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            }
        }
        assert_eq!(f.zero().inv().unwrap_err(), Error::ZeroInverse);
    }

    #[test]
    fn table_mul_matches_schoolbook() {
        let f = FiniteField::new(3, 3).unwrap();
        for a in 0..f.order {
            for b in 0..f.order {
                assert_eq!(f.mul_raw(a, b), f.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn frobenius_is_identity_after_n_steps() {
        for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = FiniteField::new(p, n).unwrap();
            for a in f.elements() {
                let mut x = a;
                for _ in 0..n {
                    x = x.pow(p);
                }
                assert_eq!(x, a, "GF({p}^{n})");
            }
        }
    }

    #[test]
    fn primitive_elements() {
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(f2.primitive_element(), f2.one());
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.primitive_element().code(), 2);
        let f9 = FiniteField::new(3, 2).unwrap();
        let g = f9.primitive_element();
        assert_eq!(g.pow(8), f9.one());
        assert_ne!(g.pow(4), f9.one());
    }

    #[test]
    fn group_is_cyclic_for_small_fields() {
        for q in crate::arith::prime_powers_in(2, 4096) {
            let (p, n) = crate::arith::prime_power(q).unwrap();
            let f = FiniteField::new(p, n).unwrap();
            assert_eq!(f.primitive_element().multiplicative_order(), q - 1);
        }
    }

    #[test]
    fn logs_round_trip_in_gf16() {
        let f = FiniteField::new(2, 4).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.discrete_log(g, f.one()).unwrap(), 0);
        assert_eq!(f.discrete_log(g, g).unwrap(), 1);
        for x in f.elements().skip(1) {
            let e = f.discrete_log(g, x).unwrap();
            assert_eq!(g.pow(e), x);
        }
        for e in 0..15 {
            assert_eq!(f.discrete_log(g, g.pow(e)).unwrap(), e);
        }
        assert_eq!(f.discrete_log(g, f.zero()).unwrap_err(), Error::ZeroArgument);
    }

    #[test]
    fn logs_to_other_primitive_bases() {
        let f = FiniteField::new(2, 4).unwrap();
        let h = f.primitive_element().pow(7);
        for x in f.elements().skip(1) {
            assert_eq!(h.pow(f.discrete_log(h, x).unwrap()), x);
        }
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = FiniteField::new(3, 2).unwrap();
        let b = FiniteField::new(3, 2).unwrap();
        assert_eq!(a.one().add(&b.one()).unwrap_err(), Error::FieldMismatch);
    }
}
