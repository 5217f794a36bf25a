//! Explicit m-to-1 criteria for low-degree polynomials and linearized binomials.

use crate::error::{Error, Result};
use crate::field::{abs_trace, gcd, FieldElement, Gf};
use crate::verdict::{Clause, Verdict};

/// Clauses granting some m to ax^2 + bx + c over F_q.
pub fn classify_deg_le2<E: FieldElement>(f: &Gf<E>, a: E, b: E, _c: E) -> Vec<Clause> {
    let q = f.order();
    let even = f.characteristic() == 2;
    let (az, bz) = (f.is_zero(a), f.is_zero(b));
    let mut out = Vec::new();
    let mut fire = |cond: bool, k: u8, m: u64| {
        if cond {
            out.push(Clause::new("deg2", k, m));
        }
    };
    fire(az && !bz, 1, 1);
    fire(!az && bz && even, 2, 1);
    fire(!az && !bz && even, 3, 2);
    fire(!az && !even, 4, 2);
    fire(az && bz, 5, q);
    out
}

/// Coefficients low-degree-first: [d, c, b, a] for ax^3 + bx^2 + cx + d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicClasses {
    /// Clauses for m = 1 and m = 3.
    pub clauses: Vec<Clause>,
    /// `Some(false)` when q >= 7 (never 2-to-1); `None` below that.
    pub two_to_one: Option<bool>,
}

/// ax^3 + bx^2 + cx + d over F_q, a != 0.
pub fn classify_deg3<E: FieldElement>(f: &Gf<E>, a: E, b: E, c: E, _d: E) -> Result<CubicClasses> {
    if f.is_zero(a) {
        return Err(Error::LeadingZero);
    }
    let q = f.order();
    let p = f.characteristic();
    let mut clauses = Vec::new();
    let b2 = f.mul(b, b);
    let ac = f.mul(a, c);
    let three_ac = f.mul(f.from_int(3), ac);
    if p == 3 {
        let s = f.pow(f.neg(ac), (q - 1) / 2);
        let bz = f.is_zero(b);
        if bz && s != f.one() {
            clauses.push(Clause::new("deg3-1to1", 1, 1));
        }
        if bz && s == f.one() {
            clauses.push(Clause::new("deg3-3to1", 1, 3));
        }
    }
    if q % 3 == 2 && b2 == three_ac {
        clauses.push(Clause::new("deg3-1to1", 2, 1));
    }
    if q % 3 == 1 && b2 == three_ac {
        clauses.push(Clause::new("deg3-3to1", 2, 3));
    }
    if q == 5 {
        let lhs = f.add(b2, f.mul(f.from_int(2), ac));
        let two_a2 = f.mul(f.from_int(2), f.mul(a, a));
        if lhs == two_a2 || lhs == f.neg(two_a2) {
            clauses.push(Clause::new("deg3-3to1", 3, 3));
        }
    }
    Ok(CubicClasses {
        clauses,
        two_to_one: (q >= 7).then_some(false),
    })
}

/// Verdict of the cubic theorems for one m.
pub fn predict_deg3<E: FieldElement>(f: &Gf<E>, a: E, b: E, c: E, d: E, m: u64) -> Result<Verdict> {
    let q = f.order();
    if m == 0 || m > q {
        return Err(Error::MOutOfRange { m, max: q });
    }
    let cls = classify_deg3(f, a, b, c, d)?;
    Ok(match m {
        1 | 3 => cls
            .clauses
            .iter()
            .find(|cl| cl.m == m)
            .map(|cl| Verdict::MTo1 {
                m,
                clause: cl.label.clone(),
            })
            .unwrap_or(Verdict::NotMTo1ForAskedM),
        2 if cls.two_to_one.is_some() => Verdict::NotMTo1ForAskedM,
        2 => Verdict::OutOfTheoremScope {
            reason: "cubic 2-to-1 non-existence needs q >= 7".into(),
        },
        _ => Verdict::OutOfTheoremScope {
            reason: "cubic theorems cover m in {1, 2, 3}".into(),
        },
    })
}

/// Is x^4 + a3 x^3 + a2 x^2 + a1 x 2-to-1 on F_{2^n}? Returns the clause if so.
pub fn classify_deg4_2to1_even<E: FieldElement>(f: &Gf<E>, a3: E, a2: E, a1: E) -> Result<Option<Clause>> {
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    let n = f.degree();
    let (z3, z1) = (f.is_zero(a3), f.is_zero(a1));
    let label = |k| Some(Clause::new("deg4-2to1", k, 2));
    if z3 && z1 && !f.is_zero(a2) {
        return Ok(label(1));
    }
    if z3 && !z1 {
        let t = f.div(f.pow(a2, 3), f.mul(a1, a1))?;
        if abs_trace(f, t)? != abs_trace(f, f.one())? {
            return Ok(label(2));
        }
    }
    if !z3 && f.mul(a2, a2) == f.mul(a1, a3) && n % 2 == 1 {
        return Ok(label(3));
    }
    Ok(None)
}

/// Necessary condition a3 = 0 for a 1-to-1 quartic over F_{2^n}, n >= 3.
pub fn quartic_1to1_necessary_a3<E: FieldElement>(f: &Gf<E>, a3: E) -> Result<bool> {
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    if f.degree() < 3 {
        return Err(Error::PreconditionViolated("needs n >= 3".into()));
    }
    Ok(f.is_zero(a3))
}

/// m for L(x) = b x^{Q^s} - c x^{Q^t} over the field viewed as F_{Q^n},
/// Q = p^e. The exceptional set is always empty.
pub fn classify_linearized_binomial<E: FieldElement>(
    f: &Gf<E>,
    e: u32,
    b: E,
    c: E,
    s: u32,
    t: u32,
) -> Result<u64> {
    if f.is_zero(b) {
        return Err(Error::LeadingZero);
    }
    if e == 0 || f.degree() % e != 0 || t > s {
        return Err(Error::PreconditionViolated(format!(
            "need e | {} and t <= s",
            f.degree()
        )));
    }
    let small_q = f.characteristic().pow(e);
    let n = u64::from(f.degree() / e);
    let m = small_q.pow(gcd(u64::from(s - t), n) as u32);
    let norm = f.pow(f.div(c, b)?, (f.order() - 1) / (m - 1));
    Ok(if norm == f.one() { m } else { 1 })
}

/// Roots of ax^2 + bx + c over F_{2^n}: the count the trace criterion
/// predicts, and the roots found by scanning.
pub fn solve_quadratic_char2<E: FieldElement>(f: &Gf<E>, a: E, b: E, c: E) -> Result<(usize, Vec<E>)> {
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    if f.is_zero(a) {
        return Err(Error::LeadingZero);
    }
    let predicted = if f.is_zero(b) {
        1
    } else {
        let t = f.div(f.mul(a, c), f.mul(b, b))?;
        if abs_trace(f, t)? == 0 {
            2
        } else {
            0
        }
    };
    let roots = f
        .elements()
        .filter(|&x| f.is_zero(f.add(f.add(f.mul(a, f.mul(x, x)), f.mul(b, x)), c)))
        .collect();
    Ok((predicted, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;
    use crate::oracle::classify;

    fn gf(p: u64, n: u32) -> Gf<Fe> {
        Gf::new(p, n).unwrap()
    }

    #[test]
    fn deg2_examples() {
        let f = gf(5, 1);
        let (o, z) = (f.one(), f.zero());
        assert_eq!(classify_deg_le2(&f, o, z, z), vec![Clause::new("deg2", 4, 2)]);
        assert_eq!(classify_deg_le2(&f, z, o, z), vec![Clause::new("deg2", 1, 1)]);
        assert_eq!(classify_deg_le2(&f, z, z, o), vec![Clause::new("deg2", 5, 5)]);
        assert_eq!(Clause::new("deg2", 3, 2).label, "deg2:(3)");
    }

    #[test]
    fn cubic_examples() {
        let f5 = gf(5, 1);
        let o = f5.one();
        let z = f5.zero();
        // x^3 + x + 1
        let c = classify_deg3(&f5, o, z, o, o).unwrap();
        assert_eq!(c.clauses, vec![Clause::new("deg3-3to1", 3, 3)]);
        assert_eq!(c.two_to_one, None);
        let f8 = gf(2, 3);
        let c = classify_deg3(&f8, f8.one(), f8.zero(), f8.zero(), f8.zero()).unwrap();
        assert_eq!(c.clauses, vec![Clause::new("deg3-1to1", 2, 1)]);
        let f7 = gf(7, 1);
        let c = classify_deg3(&f7, f7.one(), f7.zero(), f7.zero(), f7.zero()).unwrap();
        assert_eq!(c.clauses, vec![Clause::new("deg3-3to1", 2, 3)]);
        assert_eq!(classify_deg3(&f7, f7.zero(), f7.one(), f7.one(), f7.one()), Err(Error::LeadingZero));
        assert!(matches!(
            predict_deg3(&f5, o, z, o, o, 2).unwrap(),
            Verdict::OutOfTheoremScope { .. }
        ));
    }

    #[test]
    fn quartic_examples() {
        let f4 = gf(2, 2);
        let (o, z) = (f4.one(), f4.zero());
        assert_eq!(classify_deg4_2to1_even(&f4, z, o, z).unwrap(), Some(Clause::new("deg4-2to1", 1, 2)));
        assert_eq!(classify_deg4_2to1_even(&f4, z, z, z).unwrap(), None);
        let f8 = gf(2, 3);
        let (o, z) = (f8.one(), f8.zero());
        assert_eq!(classify_deg4_2to1_even(&f8, o, z, o).unwrap(), None);
        let vals = |x: Fe| f8.add(f8.add(f8.pow(x, 4), f8.pow(x, 3)), x);
        assert!(!classify(f8.elements(), vals).valid_ms().contains(&2));
        assert_eq!(quartic_1to1_necessary_a3(&f8, o), Ok(false));
        assert_eq!(quartic_1to1_necessary_a3(&f8, z), Ok(true));
        assert_eq!(
            classify_deg4_2to1_even(&gf(3, 1), z, z, z),
            Err(Error::WrongCharacteristic)
        );
    }

    #[test]
    fn linearized_examples() {
        let f4 = gf(2, 2);
        // x^2 - x over F_4, Q = 2
        assert_eq!(classify_linearized_binomial(&f4, 1, f4.one(), f4.one(), 1, 0), Ok(2));
        assert_eq!(
            classify_linearized_binomial(&f4, 1, f4.zero(), f4.one(), 1, 0),
            Err(Error::LeadingZero)
        );
        let f16 = gf(2, 4);
        let a = f16.exp(5);
        let m = classify_linearized_binomial(&f16, 1, f16.one(), a, 2, 0).unwrap();
        let l = |x: Fe| f16.sub(f16.pow(x, 4), f16.mul(a, x));
        assert_eq!(classify(f16.elements(), l).valid_ms(), &[m]);
    }

    #[test]
    fn char2_quadratic() {
        let f4 = gf(2, 2);
        let (o, z, t) = (f4.one(), f4.zero(), f4.exp(1));
        assert_eq!(solve_quadratic_char2(&f4, o, o, z).unwrap(), (2, vec![z, o]));
        let tt = if abs_trace(&f4, t).unwrap() == 1 { t } else { f4.exp(2) };
        let (k, roots) = solve_quadratic_char2(&f4, o, o, tt).unwrap();
        assert_eq!((k, roots.len()), (0, 0));
        let (k, roots) = solve_quadratic_char2(&f4, o, z, t).unwrap();
        assert_eq!((k, roots.len()), (1, 1));
    }
}
