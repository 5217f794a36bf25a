use std::collections::HashMap;

use super::{FieldElement, Gf};

/// Baby-step giant-step discrete logarithm in the multiplicative group.
///
/// Uses only field multiplication, so it serves as an independent check on
/// the table lookup in [`Gf::discrete_log`]. Returns the smallest e >= 0
/// with base^e = y, or `None`.
pub fn baby_step_giant_step<E: FieldElement>(field: &Gf<E>, y: E, base: E) -> Option<u64> {
    if field.is_zero(y) || field.is_zero(base) {
        return None;
    }
    let n = field.group_order();
    let m = (n as f64).sqrt().ceil() as u64 + 1;

    // baby steps: base^j for j < m, keeping the smallest j per value
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = field.one();
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = field.mul(cur, base);
    }

    let base_inv_m = field.inv(field.pow_slow(base, m)).expect("nonzero");
    let mut gamma = y;
    let mut best: Option<u64> = None;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            let e = i * m + j;
            best = Some(best.map_or(e, |b| b.min(e)));
            // later giant steps only give larger exponents
            break;
        }
        gamma = field.mul(gamma, base_inv_m);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;

    #[test]
    fn agrees_with_table_lookup() {
        for &(p, d) in &[(2u64, 4u32), (3, 3), (5, 2), (2, 8)] {
            let f = Gf::<Fe>::new(p, d).unwrap();
            let g = f.generator();
            for base in [g, f.pow(g, 3), f.pow(g, 5), f.one()] {
                for y in f.nonzero_elements().step_by(7) {
                    assert_eq!(
                        baby_step_giant_step(&f, y, base),
                        f.discrete_log(y, base).unwrap(),
                        "F_{p}^{d}: y={y:?} base={base:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn f4_example() {
        let f = Gf::<Fe>::new(2, 2).unwrap();
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(baby_step_giant_step(&f, t, t1), Some(2));
    }
}
