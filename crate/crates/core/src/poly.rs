//! Univariate polynomials over a table-driven field.

use crate::field::{FieldElement, Gf};

/// Dense polynomial, low-degree-first, with no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensePoly<E> {
    coeffs: Vec<E>,
}

impl<E: FieldElement> DensePoly<E> {
    pub fn new(mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| c.index() == 0) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    /// c · x^e.
    pub fn monomial(c: E, e: usize) -> Self {
        let mut v = vec![E::from_index(0); e + 1];
        v[e] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> E {
        self.coeffs.get(i).copied().unwrap_or(E::from_index(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> E {
        self.coeffs.last().copied().unwrap_or(E::from_index(0))
    }

    pub fn eval(&self, f: &Gf<E>, x: E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self, f: &Gf<E>) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, s: E, f: &Gf<E>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Self, f: &Gf<E>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// p(x + beta), expanded.
    pub fn shift(&self, beta: E, f: &Gf<E>) -> Self {
        // Horner in the ring: ((c_d)(x+β) + c_{d-1})(x+β) + ...
        let lin = DensePoly::new(vec![beta, f.one()]);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin, f).add(&DensePoly::new(vec![c]), f);
        }
        acc
    }

    /// Interpolates the unique polynomial of degree < #F agreeing with
    /// `values` (indexed by element index) on every element of `f`.
    pub fn interpolate_full(f: &Gf<E>, values: &[E]) -> Self {
        let big_q = f.order() as usize;
        assert_eq!(values.len(), big_q, "one value per field element");
        // F(x) = Σ_c F(c)(1 - (x - c)^{Q-1}); collecting powers gives
        // f_0 = F(0), f_i = -Σ_{c≠0} F(c) c^{-i} (0 < i < Q-1), f_{Q-1} = -Σ_c F(c)
        let mut coeffs = vec![f.zero(); big_q];
        coeffs[0] = values[0];
        if big_q == 2 {
            coeffs[1] = f.neg(f.add(values[0], values[1]));
            return Self::new(coeffs);
        }
        let n = f.group_order();
        let mut sums = vec![f.zero(); big_q];
        for c in f.nonzero_elements() {
            let fc = values[c.index() as usize];
            if f.is_zero(fc) {
                continue;
            }
            let lc = f.log(c).expect("nonzero");
            let lf = f.log(fc).expect("nonzero");
            for (i, s) in sums.iter_mut().enumerate().take(big_q - 1).skip(1) {
                // F(c) c^{-i}
                let e = (lf + n - (lc * i as u64) % n) % n;
                *s = f.add(*s, f.exp(e));
            }
        }
        for i in 1..big_q - 1 {
            coeffs[i] = f.neg(sums[i]);
        }
        let total = values.iter().fold(f.zero(), |acc, &v| f.add(acc, v));
        coeffs[big_q - 1] = f.neg(total);
        Self::new(coeffs)
    }
}

/// Sparse polynomial as (exponent, coefficient) pairs with distinct exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly<E> {
    terms: Vec<(u64, E)>,
}

impl<E: FieldElement> SparsePoly<E> {
    pub fn new(terms: impl IntoIterator<Item = (u64, E)>, f: &Gf<E>) -> Self {
        let mut merged: std::collections::BTreeMap<u64, E> = Default::default();
        for (e, c) in terms {
            let slot = merged.entry(e).or_insert(f.zero());
            *slot = f.add(*slot, c);
        }
        SparsePoly {
            terms: merged.into_iter().filter(|(_, c)| c.index() != 0).collect(),
        }
    }

    pub fn terms(&self) -> &[(u64, E)] {
        &self.terms
    }

    pub fn eval(&self, f: &Gf<E>, x: E) -> E {
        self.terms
            .iter()
            .fold(f.zero(), |acc, &(e, c)| f.add(acc, f.mul(c, f.pow(x, e))))
    }
}

impl<E: FieldElement> From<&DensePoly<E>> for SparsePoly<E> {
    fn from(p: &DensePoly<E>) -> Self {
        SparsePoly {
            terms: p
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.index() != 0)
                .map(|(i, &c)| (i as u64, c))
                .collect(),
        }
    }
}
