//! Table-driven arithmetic in a single finite field GF(p^d).
//!
//! Elements are stored as the integer Σ c_i p^i of their coefficient vector
//! with respect to the power basis of the defining polynomial. Multiplication
//! goes through exponent/log tables with respect to the field's primitive
//! element; addition is XOR in characteristic 2 and a Zech-logarithm lookup
//! otherwise.

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;

use super::fp_poly;
use super::FieldError;

/// Default cap on the field order: tables for up to 2^20 elements.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element newtype. The index is the base-p integer encoding of the
/// coefficient vector, so index 0 is zero and index 1 is one.
pub trait FieldElement: Copy + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    fn from_index(index: u32) -> Self;
    fn index(self) -> u32;
}

macro_rules! element_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u32);

        impl FieldElement for $name {
            #[inline]
            fn from_index(index: u32) -> Self {
                $name(index)
            }
            #[inline]
            fn index(self) -> u32 {
                self.0
            }
        }
    };
}

element_type!(
    /// Element of the quadratic extension F_{q^2}.
    FF2
);
element_type!(
    /// Element of the subfield F_q.
    FFq
);
element_type!(
    /// Element of a standalone field that is not part of a tower.
    Fe
);

/// The finite field GF(p^d) with precomputed log tables.
#[derive(Clone)]
pub struct Gf<E> {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    /// exp[i] = index of ξ^i, stored twice over so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// zech[j] = log(1 + ξ^j), or NO_LOG when 1 + ξ^j = 0. Empty for p = 2.
    zech: Vec<u32>,
    generator: u32,
    _marker: PhantomData<E>,
}

impl<E> Debug for Gf<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gf")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl<E: FieldElement> Gf<E> {
    /// Builds GF(p^degree) with the default size cap.
    pub fn new(p: u64, degree: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, degree, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u64, degree: u32, cap: u64) -> Result<Self, FieldError> {
        if !fp_poly::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if degree == 0 {
            return Err(FieldError::DegreeZero);
        }
        let order = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if order > cap as u128 || order > u32::MAX as u128 / 2 {
            return Err(FieldError::SizeCapExceeded { order, cap });
        }
        let p = p as u32;
        let order = order as u32;
        let modulus = fp_poly::smallest_irreducible(p, degree);
        let generator = find_primitive(p, degree, order, &modulus);
        Ok(Self::from_parts(p, degree, order, modulus, generator))
    }

    fn from_parts(p: u32, degree: u32, order: u32, modulus: Vec<u32>, generator: u32) -> Self {
        let n = (order - 1) as usize;
        let gen_coeffs = index_to_coeffs(generator, p, degree);
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = vec![0u32; degree as usize];
        cur[0] = 1;
        for i in 0..n {
            let idx = coeffs_to_index(&cur, p);
            exp[i] = idx;
            exp[i + n] = idx;
            log[idx as usize] = i as u32;
            cur = fp_poly::mul_mod(&cur, &gen_coeffs, &modulus, p);
        }
        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..n)
                .map(|j| {
                    let x = exp[j];
                    let d0 = x % p;
                    let y = x - d0 + (d0 + 1) % p;
                    if y == 0 {
                        NO_LOG
                    } else {
                        log[y as usize]
                    }
                })
                .collect()
        };
        Gf {
            p,
            degree,
            order,
            modulus,
            exp,
            log,
            zech,
            generator,
            _marker: PhantomData,
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    /// Extension degree over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// Order of the multiplicative group.
    #[inline]
    pub fn group_order(&self) -> u64 {
        self.order as u64 - 1
    }

    /// Defining polynomial, low-degree-first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element the log tables are built on.
    #[inline]
    pub fn generator(&self) -> E {
        E::from_index(self.generator)
    }

    #[inline]
    pub fn zero(&self) -> E {
        E::from_index(0)
    }

    #[inline]
    pub fn one(&self) -> E {
        E::from_index(1)
    }

    /// Image of the integer `k` under Z -> F_p -> this field.
    pub fn from_int(&self, k: i64) -> E {
        E::from_index(k.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = E> + '_ {
        (0..self.order).map(E::from_index)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = E> + '_ {
        (1..self.order).map(E::from_index)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<E, FieldError> {
        if coeffs.len() != self.degree as usize {
            return Err(FieldError::BadLength {
                expected: self.degree as usize,
                got: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::CoefficientOutOfRange { value: c, p: self.p });
        }
        Ok(E::from_index(coeffs_to_index(coeffs, self.p)))
    }

    pub fn coeffs(&self, x: E) -> Vec<u32> {
        index_to_coeffs(x.index(), self.p, self.degree)
    }

    /// Exponent of a nonzero element with respect to `generator()`.
    #[inline]
    pub fn log(&self, x: E) -> Option<u64> {
        match self.log[x.index() as usize] {
            NO_LOG => None,
            l => Some(l as u64),
        }
    }

    /// generator()^e.
    #[inline]
    pub fn exp(&self, e: u64) -> E {
        E::from_index(self.exp[(e % self.group_order()) as usize])
    }

    #[inline]
    pub fn is_zero(&self, x: E) -> bool {
        x.index() == 0
    }

    #[inline]
    pub fn add(&self, x: E, y: E) -> E {
        let (a, b) = (x.index(), y.index());
        if self.p == 2 {
            return E::from_index(a ^ b);
        }
        if a == 0 {
            return y;
        }
        if b == 0 {
            return x;
        }
        let n = self.order - 1;
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[d as usize] {
            NO_LOG => E::from_index(0),
            z => E::from_index(self.exp[(la + z) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, x: E) -> E {
        if self.p == 2 || x.index() == 0 {
            return x;
        }
        let n = self.order - 1;
        let l = self.log[x.index() as usize];
        E::from_index(self.exp[(l + n / 2) as usize])
    }

    #[inline]
    pub fn sub(&self, x: E, y: E) -> E {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: E, y: E) -> E {
        let (a, b) = (x.index(), y.index());
        if a == 0 || b == 0 {
            return E::from_index(0);
        }
        E::from_index(self.exp[(self.log[a as usize] + self.log[b as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, x: E) -> Option<E> {
        let a = x.index();
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(E::from_index(self.exp[(n - self.log[a as usize]) as usize]))
    }

    pub fn div(&self, x: E, y: E) -> Result<E, FieldError> {
        let yi = self.inv(y).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(x, yi))
    }

    /// x^e for e >= 0, with 0^0 = 1.
    #[inline]
    pub fn pow(&self, x: E, e: u64) -> E {
        let a = x.index();
        if a == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let n = self.group_order();
        let l = self.log[a as usize] as u64;
        let r = ((l as u128 * (e % n) as u128) % n as u128) as usize;
        E::from_index(self.exp[r])
    }

    /// x^e for signed e; negative exponents need x != 0.
    pub fn pow_signed(&self, x: E, e: i64) -> Result<E, FieldError> {
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        let xi = self.inv(x).ok_or(FieldError::ZeroToNegativePower)?;
        Ok(self.pow(xi, e.unsigned_abs()))
    }

    /// Square-and-multiply over the field operations, without the log shortcut.
    pub fn pow_slow(&self, x: E, mut e: u64) -> E {
        let mut result = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: E) -> Option<u64> {
        let l = self.log(x)?;
        let n = self.group_order();
        Some(n / gcd(l, n))
    }

    /// Smallest e >= 0 with base^e = y, or `None` when y is not in the
    /// subgroup generated by base.
    pub fn discrete_log(&self, y: E, base: E) -> Result<Option<u64>, FieldError> {
        let ly = self.log(y).ok_or(FieldError::ZeroInput)?;
        let lb = self.log(base).ok_or(FieldError::ZeroInput)?;
        let n = self.group_order();
        // solve lb * e = ly (mod n)
        let g = gcd(lb, n);
        if ly % g != 0 {
            return Ok(None);
        }
        let modulus = n / g;
        if modulus == 1 {
            return Ok(Some(0));
        }
        let inv = mod_inverse(lb / g % modulus, modulus).expect("coprime after dividing by gcd");
        Ok(Some(((ly / g) as u128 * inv as u128 % modulus as u128) as u64))
    }

    /// x^(p^i), the i-th power of the absolute Frobenius.
    pub fn frobenius_power(&self, x: E, i: u32) -> E {
        if self.is_zero(x) {
            return x;
        }
        let n = self.group_order();
        let mut e = 1 % n;
        for _ in 0..i {
            e = e * self.p as u64 % n;
        }
        self.pow(x, e)
    }
}

pub(crate) fn coeffs_to_index(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

pub(crate) fn index_to_coeffs(mut idx: u32, p: u32, degree: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(degree as usize);
    for _ in 0..degree {
        out.push(idx % p);
        idx /= p;
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Rank of a coefficient vector in lexicographic order comparing c_0 first.
/// Returns the element index at lexicographic position `rank`.
fn lex_rank_to_index(rank: u32, p: u32, degree: u32) -> u32 {
    // digits of `rank` with c_{d-1} least significant
    let mut coeffs = vec![0u32; degree as usize];
    let mut r = rank;
    for pos in (0..degree as usize).rev() {
        coeffs[pos] = r % p;
        r /= p;
    }
    coeffs_to_index(&coeffs, p)
}

fn find_primitive(p: u32, degree: u32, order: u32, modulus: &[u32]) -> u32 {
    let n = (order - 1) as u64;
    let factors = fp_poly::prime_factors(n);
    for rank in 0..order {
        let idx = lex_rank_to_index(rank, p, degree);
        if idx == 0 {
            continue;
        }
        let c = index_to_coeffs(idx, p, degree);
        let is_one = |v: &[u32]| v[0] == 1 && v[1..].iter().all(|&x| x == 0);
        if n == 1 {
            return idx;
        }
        if !is_one(&fp_poly::pow_mod(&c, n, modulus, p)) {
            continue;
        }
        if factors
            .iter()
            .all(|&l| !is_one(&fp_poly::pow_mod(&c, n / l, modulus, p)))
        {
            return idx;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Gf<Fe> {
        Gf::new(2, 2).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Gf::<Fe>::new(6, 1), Err(FieldError::NotPrime(6))));
        assert!(matches!(Gf::<Fe>::new(5, 0), Err(FieldError::DegreeZero)));
        assert!(matches!(
            Gf::<Fe>::with_cap(2, 12, 1 << 10),
            Err(FieldError::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn f4_multiplication_table() {
        let f = f4();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(t, t1), f.one());
        assert_eq!(f.pow(t, 3), f.one());
        assert_eq!(f.discrete_log(t, t1).unwrap(), Some(2));
    }

    #[test]
    fn fermat_in_prime_field() {
        let f = Gf::<Fe>::new(5, 1).unwrap();
        assert_eq!(f.pow(f.from_int(2), 4), f.one());
        assert_eq!(f.pow_signed(f.zero(), -1), Err(FieldError::ZeroToNegativePower));
        assert_eq!(f.div(f.one(), f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn generator_is_lexicographically_first_primitive() {
        for &(p, d) in &[(2u64, 4u32), (3, 2), (5, 2), (7, 2), (2, 6), (3, 4)] {
            let f = Gf::<Fe>::new(p, d).unwrap();
            let n = f.group_order();
            assert_eq!(f.element_order(f.generator()), Some(n));
            // brute-force order by repeated multiplication
            let order_of = |x: Fe| {
                let mut y = x;
                let mut k = 1;
                while y != f.one() {
                    y = f.mul(y, x);
                    k += 1;
                }
                k
            };
            let gen_rank = (0..f.order() as u32)
                .find(|&r| lex_rank_to_index(r, p as u32, d) == f.generator().index())
                .unwrap();
            for r in 0..gen_rank {
                let x = Fe::from_index(lex_rank_to_index(r, p as u32, d));
                if x.index() != 0 {
                    assert_ne!(order_of(x), n);
                }
            }
            assert_eq!(order_of(f.generator()), n);
        }
    }

    #[test]
    fn zech_addition_matches_coefficient_addition() {
        for &(p, d) in &[(3u64, 2u32), (5, 2), (7, 1), (3, 3)] {
            let f = Gf::<Fe>::new(p, d).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    let cx = f.coeffs(x);
                    let cy = f.coeffs(y);
                    let sum: Vec<u32> = cx
                        .iter()
                        .zip(&cy)
                        .map(|(a, b)| (a + b) % p as u32)
                        .collect();
                    assert_eq!(f.add(x, y), f.from_coeffs(&sum).unwrap());
                }
            }
        }
    }
}
