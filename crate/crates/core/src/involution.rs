//! Fixed-point-free involutions swapping the two preimages of a 2-to-1 map.

use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf, FF2, FFq};
use crate::oracle::FiberCounter;
use crate::reduction::MapInstance;

/// α != 0 with g(x + α) = g(x) for all x, read off the fiber of g(0).
pub fn involution_of_g<E: FieldElement>(f: &Gf<E>, g_values: &[E]) -> Result<E> {
    let ms = FiberCounter::new(f.order() as usize).valid_ms(g_values.iter().map(|v| v.index()));
    if !ms.contains(&2) {
        return Err(Error::NotTwoToOne { valid_ms: ms });
    }
    let at = |x: E| g_values[x.index() as usize];
    let g0 = at(f.zero());
    let alpha = f
        .nonzero_elements()
        .find(|&y| at(y) == g0)
        .ok_or(Error::FibersNotTranslations)?;
    if f.elements().all(|x| at(f.add(x, alpha)) == at(x)) {
        Ok(alpha)
    } else {
        Err(Error::FibersNotTranslations)
    }
}

/// Swaps the two elements of every fiber; entry i is the partner of element i.
pub fn pair_involution(values: &[u32]) -> Result<Vec<u32>> {
    let mut first: std::collections::HashMap<u32, u32> = Default::default();
    let mut partner = vec![u32::MAX; values.len()];
    for (i, &v) in values.iter().enumerate() {
        let i = i as u32;
        match first.remove(&v) {
            Some(j) => {
                partner[i as usize] = j;
                partner[j as usize] = i;
            }
            None => {
                first.insert(v, i);
            }
        }
    }
    if !first.is_empty() || partner.contains(&u32::MAX) {
        return Err(Error::NotTwoToOne {
            valid_ms: FiberCounter::new(values.len().max(1))
                .valid_ms(values.iter().map(|&v| v % values.len().max(1) as u32)),
        });
    }
    Ok(partner)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionMethod {
    /// Closed form for h = x^r with I_g(x) = x + α.
    Power,
    /// aA^{-1}(H(I_g(λ(x))) - f(x)) with I_g(x) = x + α.
    Translation,
    /// The same general form with I_g taken from fiber pairing.
    PairTable,
}

#[derive(Debug, Clone)]
pub struct FInvolution {
    pub method: InvolutionMethod,
    pub alpha: Option<FFq>,
    /// I_f(x) for x in index order.
    pub values: Vec<FF2>,
    pub is_involution: bool,
    pub fixed_point_free: bool,
    pub preserves_f: bool,
}

impl FInvolution {
    pub fn verified(&self) -> bool {
        self.is_involution && self.fixed_point_free && self.preserves_f
    }
}

/// I_f built from I_g: the power formula when h = x^r and g has
/// translation fibers, otherwise the general form.
pub fn involution_of_f(inst: &MapInstance<'_>) -> Result<FInvolution> {
    build(inst, false)
}

/// As [`involution_of_f`] but refuses g without translation fibers.
pub fn involution_of_f_strict(inst: &MapInstance<'_>) -> Result<FInvolution> {
    build(inst, true)
}

fn build(inst: &MapInstance<'_>, strict: bool) -> Result<FInvolution> {
    let ctx = inst.ctx();
    let ms = inst.reduce_valid_ms()?;
    if !ms.contains(&2) {
        return Err(Error::NotTwoToOne { valid_ms: ms });
    }
    if ctx.p() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    let f = ctx.ext();
    let base = ctx.base();
    let g_vals = inst.g_values()?;
    let sp = inst.spec();
    let dc = inst.constants();
    let a_over_big_a = f.div(sp.a, dc.big_a)?;
    let ximk = f.inv(f.pow(ctx.xi(), dc.k)).expect("nonzero");

    // y with f(y) = f(x) and λ(y) = I_g(λ(x))
    let general = |ig: &dyn Fn(FFq) -> FFq| -> Vec<FF2> {
        f.elements()
            .map(|x| {
                let w = ctx.embed(ig(inst.lambda(x)));
                f.mul(a_over_big_a, f.sub(inst.big_h(w), inst.eval_f(x)))
            })
            .collect()
    };

    let (method, alpha, values) = match involution_of_g(base, &g_vals) {
        Ok(alpha) => {
            let ig = |s: FFq| base.add(s, alpha);
            let gen = general(&ig);
            match inst.exponent() {
                Some(r) => {
                    let shift = f.mul(ximk, ctx.embed(alpha));
                    let tail = f.mul(f.div(sp.u, dc.big_a)?, shift);
                    let power: Vec<FF2> = f
                        .elements()
                        .map(|x| {
                            let l = f.add(
                                f.add(f.mul(sp.a, ctx.frobenius(x)), f.mul(sp.b, x)),
                                sp.c,
                            );
                            let t1 = f.mul(a_over_big_a, f.pow(l, r));
                            let t2 = f.mul(a_over_big_a, f.pow(f.add(l, shift), r));
                            f.add(f.add(t1, t2), f.add(x, tail))
                        })
                        .collect();
                    assert_eq!(power, gen, "power formula and general form disagree");
                    (InvolutionMethod::Power, Some(alpha), power)
                }
                None => (InvolutionMethod::Translation, Some(alpha), gen),
            }
        }
        Err(Error::FibersNotTranslations) if strict => return Err(Error::NoTranslationInvolution),
        Err(Error::FibersNotTranslations) => {
            let idx: Vec<u32> = g_vals.iter().map(|v| v.index()).collect();
            let partner = pair_involution(&idx)?;
            let ig = |s: FFq| FFq::from_index(partner[s.index() as usize]);
            (InvolutionMethod::PairTable, None, general(&ig))
        }
        Err(e) => return Err(e),
    };

    let at = |x: FF2| values[x.index() as usize];
    let is_involution = f.elements().all(|x| at(at(x)) == x);
    let fixed_point_free = f.elements().all(|x| at(x) != x);
    let preserves_f = f.elements().all(|x| inst.eval_f(at(x)) == inst.eval_f(x));
    Ok(FInvolution {
        method,
        alpha,
        values,
        is_involution,
        fixed_point_free,
        preserves_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;

    #[test]
    fn translation_of_x2_plus_x() {
        let f4 = Gf::<Fe>::new(2, 2).unwrap();
        let vals: Vec<Fe> = f4.elements().map(|x| f4.add(f4.mul(x, x), x)).collect();
        assert_eq!(involution_of_g(&f4, &vals), Ok(f4.one()));
        let f16 = Gf::<Fe>::new(2, 4).unwrap();
        let beta = f16.exp(6);
        let gamma = f16.exp(2);
        let vals: Vec<Fe> = f16
            .elements()
            .map(|x| f16.add(f16.add(f16.mul(x, x), f16.mul(beta, x)), gamma))
            .collect();
        assert_eq!(involution_of_g(&f16, &vals), Ok(beta));
    }

    #[test]
    fn non_translation_and_non_2to1() {
        let f4 = Gf::<Fe>::new(2, 2).unwrap();
        let vals: Vec<Fe> = f4.elements().collect();
        assert!(matches!(involution_of_g(&f4, &vals), Err(Error::NotTwoToOne { .. })));
        // pairs {0,1}, {2,3} by index, then {0,2}, {1,3}: not a single translation in F_4
        let f8 = Gf::<Fe>::new(2, 3).unwrap();
        let table = [0u32, 0, 1, 2, 1, 3, 2, 3];
        let vals: Vec<Fe> = table.iter().map(|&i| Fe::from_index(i)).collect();
        assert_eq!(involution_of_g(&f8, &vals), Err(Error::FibersNotTranslations));
        let partner = pair_involution(&table).unwrap();
        assert_eq!(partner, vec![1, 0, 4, 6, 2, 7, 3, 5]);
    }
}
