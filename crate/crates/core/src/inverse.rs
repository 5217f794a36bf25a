//! Compositional inverses: normalized permutations of degree <= 5,
//! linearized binomials, and f itself through the reduction.

use crate::error::{Error, Result};
use crate::field::{gcd, quad_char, FieldElement, Gf, FF2, FFq};
use crate::poly::{DensePoly, SparsePoly};
use crate::reduction::MapInstance;

/// ḡ(x) = scale · g(x + shift) + offset, monic with ḡ(0) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization<E> {
    pub scale: E,
    pub shift: E,
    pub offset: E,
    pub normalized: DensePoly<E>,
}

impl<E: FieldElement> Normalization<E> {
    /// g^{-1}(z) = ḡ^{-1}(scale·z + offset) + shift.
    pub fn denormalize(&self, f: &Gf<E>, g_bar_inv: impl Fn(E) -> E, z: E) -> E {
        f.add(g_bar_inv(f.add(f.mul(self.scale, z), self.offset)), self.shift)
    }
}

/// Brings g of degree 1..=5 into normalized form.
pub fn normalize<E: FieldElement>(f: &Gf<E>, g: &DensePoly<E>) -> Result<Normalization<E>> {
    let d = g.degree().ok_or(Error::LeadingZero)?;
    if d > 5 {
        return Err(Error::DegreeTooHigh(d));
    }
    if d == 0 {
        return Err(Error::NotInjective);
    }
    let shift = if (d as u64) % f.characteristic() != 0 {
        let denom = f.mul(f.from_int(d as i64), g.leading());
        f.neg(f.div(g.coeff(d - 1), denom)?)
    } else {
        f.zero()
    };
    Ok(normalize_at(f, g, shift))
}

fn normalize_at<E: FieldElement>(f: &Gf<E>, g: &DensePoly<E>, shift: E) -> Normalization<E> {
    let scale = f.inv(g.leading()).expect("leading coefficient is nonzero");
    let shifted = g.shift(shift, f).scale(scale, f);
    let offset = f.neg(shifted.coeff(0));
    let normalized = shifted.add(&DensePoly::new(vec![offset]), f);
    Normalization {
        scale,
        shift,
        offset,
        normalized,
    }
}

/// Normalizes g and finds its row. When p | deg g the shift is not pinned
/// down by the x^{d-1} coefficient, so every shift is tried before giving up.
pub fn normalize_and_match<E: FieldElement>(f: &Gf<E>, g: &DensePoly<E>) -> Result<(Normalization<E>, TableInverse<E>)> {
    let norm = normalize(f, g)?;
    match invert_normalized(f, &norm.normalized) {
        Ok(t) => return Ok((norm, t)),
        Err(Error::NoMatchingRow) => {}
        Err(e) => return Err(e),
    }
    let d = g.degree().expect("normalize checked the degree") as u64;
    if d % f.characteristic() != 0 {
        return Err(Error::NoMatchingRow);
    }
    for beta in f.nonzero_elements() {
        let norm = normalize_at(f, g, beta);
        match invert_normalized(f, &norm.normalized) {
            Ok(t) => return Ok((norm, t)),
            Err(Error::NoMatchingRow) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoMatchingRow)
}

/// A matched inverse-table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableInverse<E> {
    pub row: &'static str,
    pub inverse: SparsePoly<E>,
}

fn log_base(q: u64, base: u64) -> Option<u32> {
    let mut k = 0;
    let mut x = 1u64;
    while x < q {
        x *= base;
        k += 1;
    }
    (x == q).then_some(k)
}

/// C(n, k) mod p by Lucas.
fn binom_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let small = |n: u64, k: u64| -> u64 {
        if k > n {
            return 0;
        }
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![1u64; row.len() + 1];
            for j in 1..row.len() {
                next[j] = (row[j - 1] + row[j]) % p;
            }
            row = next;
        }
        row[k as usize]
    };
    let mut acc = 1;
    while k > 0 || n > 0 {
        acc = acc * small(n % p, k % p) % p;
        if acc == 0 {
            return 0;
        }
        n /= p;
        k /= p;
    }
    acc
}

/// Smallest non-negative a ≡ target (mod m) with (aq - a + 1)/m integral.
fn power_inverse_exponent(q: u64, m: u64, target: i64) -> Option<u64> {
    let a = target.rem_euclid(m as i64) as u64;
    let num = a * q - a + 1;
    (num % m == 0).then_some(num / m)
}

/// Formula of the row matching the normalized ḡ, without verification.
pub fn match_row<E: FieldElement>(f: &Gf<E>, g: &DensePoly<E>) -> Option<TableInverse<E>> {
    let d = g.degree()?;
    if d == 0 || d > 5 || g.leading() != f.one() || !f.is_zero(g.coeff(0)) {
        return None;
    }
    let q = f.order();
    let p = f.characteristic();
    let c = |i| g.coeff(i);
    let z = |i| f.is_zero(g.coeff(i));
    let row = |row, terms: Vec<(u64, E)>| {
        Some(TableInverse {
            row,
            inverse: SparsePoly::new(terms, f),
        })
    };
    let inv = |x: E, e: u64| f.pow(f.inv(x).expect("nonzero"), e);
    let is_kth_power = |x: E, k: u64| {
        let g = gcd(k, q - 1);
        f.pow(x, (q - 1) / g) == f.one()
    };
    match d {
        1 => row("x", vec![(1, f.one())]),
        2 if p == 2 && z(1) => row("x^2", vec![(q / 2, f.one())]),
        3 if z(2) && z(1) && q % 3 != 1 => {
            let e = power_inverse_exponent(q, 3, 1 - q as i64)?;
            row("x^3", vec![(e, f.one())])
        }
        3 if p == 3 && z(2) && !z(1) => {
            let a = f.neg(c(1));
            if quad_char(f, a).ok()? != -1 {
                return None;
            }
            let n = log_base(q, 3)?;
            let terms = (0..n)
                .map(|i| (3u64.pow(i), inv(a, (3u64.pow(i + 1) - 1) / 2)))
                .collect();
            row("x^3-ax", terms)
        }
        4 if z(3) && z(2) && z(1) && p == 2 && q >= 4 => row("x^4", vec![(q / 4, f.one())]),
        4 if q == 7 && z(3) && z(2) && (c(1) == f.from_int(3) || c(1) == f.from_int(-3)) => {
            // x^4 ± 3x -> ∓(x^4 - 3x)
            let sign = if c(1) == f.from_int(3) { f.from_int(-1) } else { f.one() };
            row("x^4+-3x", vec![(4, sign), (1, f.mul(sign, f.from_int(-3)))])
        }
        4 if p == 2 && z(3) && z(2) && !z(1) => {
            let n = log_base(q, 4)?;
            let a = c(1);
            if is_kth_power(a, 3) {
                return None;
            }
            let t = f.pow(a, (q - 1) / 3);
            let lead = f.div(t, f.add(f.one(), t)).ok()?;
            let terms = (0..n)
                .map(|i| (4u64.pow(i), f.mul(lead, inv(a, (4u64.pow(i + 1) - 1) / 3))))
                .collect();
            row("x^4+ax", terms)
        }
        4 if p == 2 && z(3) && !z(2) && !z(1) => {
            let (b, a) = (c(2), c(1));
            let n = log_base(q, 2)? as usize;
            // s[i + 1] holds S_i, for i = -1..=n
            let mut s = vec![f.zero(), f.one()];
            for i in 1..=n {
                let e = 1u64 << (i - 1);
                let next = f.add(f.mul(f.pow(b, e), s[i]), f.mul(f.pow(a, e), s[i - 1]));
                s.push(next);
            }
            let sn = s[n + 1];
            let snm2 = s[n - 1];
            if f.add(sn, f.mul(a, f.mul(snm2, snm2))) != f.one() {
                return None;
            }
            let terms = (0..n)
                .map(|i| {
                    let e = 1u64 << (i + 1);
                    // S_{n-2-i} sits at index n-1-i
                    let first = f.pow(s[n - 1 - i], e);
                    let second = f.mul(f.pow_signed(a, 1 - e as i64).ok()?, s[i + 1]);
                    Some((1u64 << i, f.add(first, second)))
                })
                .collect::<Option<Vec<_>>>()?;
            row("x^4+bx^2+ax", terms)
        }
        5 if z(4) && z(3) && z(2) && z(1) && q % 5 != 1 => {
            let t = (1 - q as i64).rem_euclid(5).pow(3);
            let e = power_inverse_exponent(q, 5, t)?;
            row("x^5", vec![(e, f.one())])
        }
        5 if q == 9 && z(4) && z(3) && z(2) && f.mul(c(1), c(1)) == f.from_int(2) => {
            row("x^5+ax", vec![(5, f.one()), (1, c(1))])
        }
        5 if p == 5 && z(4) && z(3) && z(2) && !z(1) => {
            let a = f.neg(c(1));
            if is_kth_power(a, 4) {
                return None;
            }
            let n = log_base(q, 5)?;
            let t = f.pow(a, (q - 1) / 4);
            let lead = f.div(t, f.sub(f.one(), t)).ok()?;
            let terms = (0..n)
                .map(|i| (5u64.pow(i), f.mul(lead, inv(a, (5u64.pow(i + 1) - 1) / 4))))
                .collect();
            row("x^5-ax", terms)
        }
        5 if q == 7 && z(4) && z(3) && z(1) && (c(2) == f.from_int(2) || c(2) == f.from_int(-2)) => {
            row("x^5+-2x^2", vec![(5, f.one()), (2, f.neg(c(2)))])
        }
        5 if q == 13 && z(4) && z(2) && !z(3) && c(1) == f.mul(f.from_int(3), f.mul(c(3), c(3))) => {
            let a = c(3);
            if quad_char(f, a).ok()? != -1 {
                return None;
            }
            let terms = vec![
                (9, f.neg(f.mul(a, a))),
                (7, f.neg(a)),
                (5, f.from_int(4)),
                (3, f.mul(f.from_int(4), f.pow(a, 5))),
                (1, f.mul(f.from_int(-5), f.pow(a, 4))),
            ];
            row("x^5+ax^3+3a^2x", terms)
        }
        5 if matches!(q % 5, 2 | 3) && z(4) && z(2) && !z(3) => {
            let a = c(3);
            let a_fifth = f.div(a, f.from_int(5)).ok()?;
            if c(1) != f.mul(a, a_fifth) {
                return None;
            }
            let k = (3 * q * q - 2) / 5;
            let base = f.pow(a_fifth, 5);
            let terms = (0..=k / 2)
                .map(|i| {
                    // k/(k-i) C(k-i, i) = C(k-i, i) + C(k-i-1, i-1)
                    let coef = if i == 0 {
                        1
                    } else {
                        (binom_mod(k - i, i, p) + binom_mod(k - i - 1, i - 1, p)) % p
                    };
                    (k - 2 * i, f.mul(f.from_int(coef as i64), f.pow(base, i)))
                })
                .collect();
            row("x^5+ax^3+a^2x/5", terms)
        }
        5 if p == 5 && z(4) && z(2) && !z(3) => {
            let a = f.div(c(3), f.from_int(-2)).ok()?;
            if c(1) != f.mul(a, a) || quad_char(f, a).ok()? != -1 {
                return None;
            }
            let n = log_base(q, 5)?;
            let mut terms = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let (pi, pj) = (5i64.pow(i), 5i64.pow(j));
                    let ea = (q as i64 - 5 * pi - 5 * pj + 1) / 4;
                    let ex = (q as i64 + pi + pj - 1) / 2;
                    terms.push((ex as u64, f.mul(f.from_int(2), f.pow_signed(a, ea).ok()?)));
                }
            }
            row("x^5-2ax^3+a^2x", terms)
        }
        5 if q == 7 && z(4) && !z(3) && (c(2) == f.one() || c(2) == f.from_int(-1)) => {
            let a = c(3);
            if c(1) != f.mul(f.from_int(3), f.mul(a, a)) || quad_char(f, a).ok()? != -1 {
                return None;
            }
            let sign = c(2);
            let two = f.from_int(2);
            let terms = vec![
                (5, f.one()),
                (4, f.mul(sign, f.mul(two, a))),
                (2, f.mul(sign, f.neg(two))),
                (3, f.mul(a, a)),
                (1, a),
            ];
            row("x^5+ax^3+-x^2+3a^2x", terms)
        }
        _ => None,
    }
}

/// Inverse of a normalized ḡ from the table, checked by composition on F_q.
pub fn invert_normalized<E: FieldElement>(f: &Gf<E>, g: &DensePoly<E>) -> Result<TableInverse<E>> {
    let found = match_row(f, g).ok_or(Error::NoMatchingRow)?;
    if f.elements().any(|x| found.inverse.eval(f, g.eval(f, x)) != x) {
        return Err(Error::RowFailedVerification(found.row));
    }
    Ok(found)
}

/// Inverse of L(x) = x^{Q^r} - ax over F_{Q^n}, Q = p^e.
pub fn invert_linearized_binomial<E: FieldElement>(f: &Gf<E>, e: u32, a: E, r: u32) -> Result<SparsePoly<E>> {
    let big_d = f.degree();
    if e == 0 || big_d % e != 0 {
        return Err(Error::PreconditionViolated(format!("e = {e} must divide {big_d}")));
    }
    let n = big_d / e;
    if r == 0 || r >= n {
        return Err(Error::PreconditionViolated(format!("need 1 <= r < {n}")));
    }
    let p = f.characteristic();
    let order = f.group_order();
    // x^{Q^j} as a map equals x^{p^{(e j) mod D}}
    let frob_exp = |j: u64| p.pow(((u64::from(e) * j) % u64::from(big_d)) as u32);
    if f.is_zero(a) {
        return Ok(SparsePoly::new([(frob_exp(u64::from(n - r)), f.one())], f));
    }
    let d = gcd(u64::from(n), u64::from(r));
    let qd_minus_1 = p.pow(e * d as u32) - 1;
    let norm = f.pow(a, (f.order() - 1) / qd_minus_1);
    if norm == f.one() {
        return Err(Error::NotAPermutation);
    }
    let lead = f.div(norm, f.sub(f.one(), norm))?;
    let mut terms = Vec::new();
    // exponent of a^{-1}: Σ_{j <= i} Q^{jr}, reduced mod |F^*|
    let mut acc = 0u64;
    for i in 0..(u64::from(n) / d) {
        acc = (acc + frob_exp(i * u64::from(r)) % order) % order;
        let coef = f.mul(lead, f.pow(f.inv(a).expect("nonzero"), acc));
        terms.push((frob_exp(i * u64::from(r)), coef));
    }
    let inv = SparsePoly::new(terms, f);
    let q_r = frob_exp(u64::from(r));
    let l = |x: E| f.sub(f.pow(x, q_r), f.mul(a, x));
    if f.elements().any(|x| inv.eval(f, l(x)) != x) {
        return Err(Error::RowFailedVerification("linearized binomial"));
    }
    Ok(inv)
}

/// Where g^{-1} came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GInverseSource {
    Table { row: &'static str, power: u64 },
    LinearizedBinomial,
    Lookup,
}

impl GInverseSource {
    pub fn describe(&self) -> String {
        match self {
            GInverseSource::Table { row, power: 1 } => format!("table:{row}"),
            GInverseSource::Table { row, power } => format!("table:{row} after x^{power}"),
            GInverseSource::LinearizedBinomial => "linearized-binomial".into(),
            GInverseSource::Lookup => "lookup".into(),
        }
    }
}

/// g^{-1} on F_q as a table indexed by element index.
#[derive(Debug, Clone)]
pub struct GInverse {
    pub source: GInverseSource,
    pub normalization: Option<Normalization<FFq>>,
    pub table: Vec<FFq>,
}

/// g^{-1} through the table when g or some g^{p^j} has degree <= 5, then
/// the linearized-binomial formula, then a lookup table.
pub fn invert_g(f: &Gf<FFq>, g_values: &[FFq]) -> Result<GInverse> {
    let q = f.order();
    let mut lookup = vec![None; q as usize];
    for x in f.elements() {
        let slot = &mut lookup[g_values[x.index() as usize].index() as usize];
        if slot.is_some() {
            return Err(Error::NotInjective);
        }
        *slot = Some(x);
    }
    let lookup: Vec<FFq> = lookup.into_iter().map(|v| v.expect("bijection")).collect();

    let p = f.characteristic();
    let n = f.degree();
    // σ = x^{p^j} permutes F_q, and (σ∘g)^{-1}(σ(z)) = g^{-1}(z)
    for j in 0..n {
        let power = p.pow(j);
        let sigma_g: Vec<FFq> = g_values.iter().map(|&v| f.pow(v, power)).collect();
        let dense = DensePoly::interpolate_full(f, &sigma_g);
        if dense.degree().is_some_and(|d| (1..=5).contains(&d)) {
            if let Ok((norm, t)) = normalize_and_match(f, &dense) {
                let table = f
                    .elements()
                    .map(|z| norm.denormalize(f, |w| t.inverse.eval(f, w), f.pow(z, power)))
                    .collect::<Vec<_>>();
                assert_eq!(table, lookup, "denormalized table inverse disagrees");
                return Ok(GInverse {
                    source: GInverseSource::Table { row: t.row, power },
                    normalization: Some(norm),
                    table,
                });
            }
        }
    }

    let dense = DensePoly::interpolate_full(f, g_values);
    if let Some(table) = linearized_inverse_table(f, &dense)? {
        assert_eq!(table, lookup, "linearized inverse disagrees");
        return Ok(GInverse {
            source: GInverseSource::LinearizedBinomial,
            normalization: None,
            table,
        });
    }
    Ok(GInverse {
        source: GInverseSource::Lookup,
        normalization: None,
        table: lookup,
    })
}

/// If g - g(0) = c_s x^{p^s} + c_t x^{p^t} (or a single such term), g^{-1} by formula.
fn linearized_inverse_table(f: &Gf<FFq>, g: &DensePoly<FFq>) -> Result<Option<Vec<FFq>>> {
    let p = f.characteristic();
    let n = f.degree();
    let mut terms = Vec::new();
    for (i, &c) in g.coeffs().iter().enumerate().skip(1) {
        if f.is_zero(c) {
            continue;
        }
        match log_base(i as u64, p) {
            Some(e) => terms.push((e, c)),
            None => return Ok(None),
        }
    }
    let g0 = g.coeff(0);
    let (s, cs, t, ct) = match terms.as_slice() {
        [(s, cs)] => (*s, *cs, 0, None),
        [(t, ct), (s, cs)] => (*s, *cs, *t, Some(*ct)),
        _ => return Ok(None),
    };
    let inner: Box<dyn Fn(FFq) -> FFq> = match ct {
        None => {
            let e = p.pow((n - s) % n);
            Box::new(move |w| f.pow(w, e))
        }
        Some(ct) => {
            // g = c_s (x^{p^{s-t}} - a x) ∘ x^{p^t} + g0 with a = -c_t/c_s
            let a = f.neg(f.div(ct, cs)?);
            let l_inv = match invert_linearized_binomial(f, 1, a, s - t) {
                Ok(l) => l,
                Err(Error::NotAPermutation) => return Err(Error::NotInjective),
                Err(e) => return Err(e),
            };
            let back = p.pow((n - t) % n);
            Box::new(move |w| f.pow(l_inv.eval(f, w), back))
        }
    };
    let cs_inv = f.inv(cs).expect("nonzero");
    Ok(Some(
        f.elements()
            .map(|z| inner(f.mul(cs_inv, f.sub(z, g0))))
            .collect(),
    ))
}

/// f^{-1} on F_{q^2} with the route taken for g^{-1}.
#[derive(Debug, Clone)]
pub struct FInverse {
    pub g_inverse: GInverse,
    /// f^{-1}(x) for x in index order.
    pub values: Vec<FF2>,
    pub verified: bool,
}

/// f^{-1}(x) = aA^{-1} H(g^{-1}(λ̄(x))) - aA^{-1} x.
pub fn invert_f(inst: &MapInstance<'_>) -> Result<FInverse> {
    let ctx = inst.ctx();
    let ms = inst.reduce_valid_ms()?;
    if !ms.contains(&1) {
        return Err(Error::NotInjective);
    }
    let f = ctx.ext();
    let g_inverse = invert_g(ctx.base(), &inst.g_values()?)?;
    let a = inst.spec().a;
    let scale = f.div(a, inst.constants().big_a)?;
    let values: Vec<FF2> = f
        .elements()
        .map(|x| {
            let y = g_inverse.table[inst.lambda_bar(x).index() as usize];
            f.mul(scale, f.sub(inst.big_h(ctx.embed(y)), x))
        })
        .collect();
    let verified = f.elements().all(|x| values[inst.eval_f(x).index() as usize] == x);
    Ok(FInverse {
        g_inverse,
        values,
        verified,
    })
}

/// f^{-1} for h = x^2 from the closed-form φ, in the two branches where it applies.
pub fn invert_f_square(inst: &MapInstance<'_>) -> Result<Vec<FF2>> {
    let ctx = inst.ctx();
    let f = ctx.ext();
    let q = ctx.q();
    let sp = inst.spec();
    let (a, b, c, u) = (sp.a, sp.b, sp.c, sp.u);
    let dc = inst.constants();
    let (ba, bb) = (dc.big_a, dc.big_b);
    let fr = |x| ctx.frobenius(x);
    let alpha = f.add(f.mul(fr(a), fr(bb)), f.mul(b, bb));
    let two = f.from_int(2);
    let beta = f.add(
        f.add(f.mul(two, f.mul(bb, c)), f.mul(two, f.mul(fr(bb), fr(c)))),
        ctx.embed(dc.gamma0),
    );
    let big_c = f.add(f.mul(ba, f.pow(c, 2 * q)), f.mul(bb, f.mul(c, c)));
    let ell = |x| f.sub(f.add(f.mul(ba, fr(x)), f.mul(bb, x)), big_c);
    let (az, bz) = (f.is_zero(alpha), f.is_zero(beta));
    let phi: Box<dyn Fn(FF2) -> FF2> = if az && !bz {
        let bi = f.inv(beta).expect("nonzero");
        Box::new(move |x| f.mul(bi, ell(x)))
    } else if !az && bz && ctx.p() == 2 {
        let k = f.inv(f.mul(b, alpha)).expect("nonzero");
        Box::new(move |x| f.mul(a, f.pow(f.mul(k, ell(x)), q / 2)))
    } else {
        return Err(Error::PreconditionViolated("no closed-form branch applies".into()));
    };
    let scale = f.div(a, ba)?;
    let au = f.div(u, a)?;
    Ok(f
        .elements()
        .map(|x| {
            let ph = phi(x);
            let pc = f.add(ph, c);
            f.mul(scale, f.sub(f.add(f.mul(pc, pc), f.mul(au, ph)), x))
        })
        .collect())
}
