use mto1::closed_form::{classify_deg3, classify_deg4_2to1_even, classify_deg_le2, classify_linearized_binomial};
use mto1::family::{family_constants, fired_clauses, predict, FamilyKind};
use mto1::field::{Fe, FieldCtx, FieldElement, Gf, FF2};
use mto1::inverse::{invert_f, invert_f_square, invert_linearized_binomial, invert_normalized};
use mto1::involution::{involution_of_f, involution_of_f_strict, InvolutionMethod};
use mto1::oracle::classify;
use mto1::poly::DensePoly;
use mto1::reduction::{HShape, MapInstance, MapSpec};
use mto1::sweep::{verify_family, Budget, SweepOptions};
use mto1::verdict::{Scope, Verdict};
use mto1::Error;

fn gf(p: u64, n: u32) -> Gf<Fe> {
    Gf::new(p, n).unwrap()
}

fn family(ctx: &FieldCtx, kind: FamilyKind, [a, b, c, u, v]: [FF2; 5]) -> MapInstance<'_> {
    MapInstance::new(ctx, MapSpec { a, b, c, u, v, h: HShape::Family(kind) }).unwrap()
}

fn f_ms(inst: &MapInstance<'_>) -> Vec<u64> {
    inst.classify_f().valid_ms().to_vec()
}

#[test]
fn r2_over_f4_identity_tuple() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let f = ctx.ext();
    let (o, z) = (f.one(), f.zero());
    let inst = family(&ctx, FamilyKind::R2, [o, o, z, z, o]);
    let dc = inst.constants();
    assert_eq!((dc.big_a, dc.big_b), (o, o));
    let k = family_constants(&inst, FamilyKind::R2);
    assert_eq!((k.alpha, k.beta), (z, o));
    assert_eq!(
        predict(&inst, FamilyKind::R2, 1).unwrap(),
        Verdict::MTo1 { m: 1, clause: "r=2:(1)".into() }
    );
    assert!(f_ms(&inst).contains(&1));
    assert!(inst.check_commute());
}

#[test]
fn h_linear_and_zero() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let f = ctx.ext();
    let (o, z) = (f.one(), f.zero());
    let lin = MapInstance::new(&ctx, MapSpec { a: o, b: o, c: z, u: z, v: o, h: HShape::Poly(DensePoly::new(vec![z, o])) }).unwrap();
    for x in f.elements() {
        assert_eq!(lin.eval_f(x), f.add(ctx.frobenius(x), f.mul(f.from_int(2), x)));
    }
    let zero = MapInstance::new(&ctx, MapSpec { a: o, b: o, c: z, u: z, v: o, h: HShape::Poly(DensePoly::zero()) }).unwrap();
    assert!(f.elements().all(|x| zero.eval_f(x) == x));
    assert!(zero.check_commute());
    // g = (u^{q+1} - v^{q+1}) x
    let g0 = zero.constants().gamma0;
    let base = ctx.base();
    for x in base.elements() {
        assert_eq!(zero.eval_g(x).unwrap(), base.mul(g0, x));
    }
    assert_eq!(zero.reduce_valid_ms().unwrap(), vec![1]);
}

#[test]
fn r2_g_is_the_stated_quadratic() {
    let ctx = FieldCtx::new(5, 1).unwrap();
    let f = ctx.ext();
    let a = f.exp(3);
    let b = f.mul(f.pow(ctx.xi(), 4 * 2), ctx.frobenius(a));
    let inst = family(&ctx, FamilyKind::R2, [a, b, f.exp(7), f.exp(11), f.exp(2)]);
    let k = family_constants(&inst, FamilyKind::R2);
    let g = inst.g_dense().unwrap();
    let xik = f.pow(ctx.xi(), inst.constants().k);
    let lead = f.div(f.div(k.alpha, xik).unwrap(), b).unwrap();
    assert_eq!(ctx.embed(g.coeff(2)), lead);
    assert_eq!(ctx.embed(g.coeff(1)), k.beta);
    assert!(g.degree() <= Some(2));
}

#[test]
fn rq_plus_1_g_leading_coefficient() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let f = ctx.ext();
    let a = f.exp(1);
    let b = f.mul(f.pow(ctx.xi(), 2), ctx.frobenius(a));
    let inst = family(&ctx, FamilyKind::RQplus1, [a, b, f.exp(5), f.exp(2), f.one()]);
    let dc = inst.constants();
    let g = inst.g_dense().unwrap();
    let xik = f.pow(ctx.xi(), dc.k);
    let lead = f.div(f.mul(f.div(ctx.frobenius(a), b).unwrap(), f.add(dc.big_a, dc.big_b)), xik).unwrap();
    assert_eq!(ctx.embed(g.coeff(2)), lead);
}

#[test]
fn corrupted_k_fails_the_diagram() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let f = ctx.ext();
    let inst = family(&ctx, FamilyKind::R2, [f.one(), f.one(), f.exp(3), f.exp(1), f.one()]);
    assert!(inst.check_commute());
    let k = inst.constants().k;
    assert!((1..=ctx.q() + 1).filter(|&j| j != k).all(|j| !inst.with_k(j).check_commute()));
}

#[test]
fn m2_never_holds_for_odd_q() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let f = ctx.ext();
    let inst = family(&ctx, FamilyKind::R2, [f.one(), f.one(), f.zero(), f.zero(), f.exp(2)]);
    assert!(!inst.reduce_classify(2).unwrap().m_to_1);
    assert_eq!(inst.reduce_classify(0), Err(Error::MOutOfRange { m: 0, max: 9 }));
    assert!(inst.reduce_classify(5).unwrap().outside_theorem_range);
}

#[test]
fn cubic_family_below_q7_is_out_of_scope() {
    let ctx = FieldCtx::new(5, 1).unwrap();
    let f = ctx.ext();
    let inst = family(&ctx, FamilyKind::R3, [f.one(), f.one(), f.zero(), f.zero(), f.one()]);
    assert!(matches!(fired_clauses(&inst, FamilyKind::R3), Scope::Out(_)));
    assert!(matches!(predict(&inst, FamilyKind::R3, 5).unwrap(), Verdict::OutOfTheoremScope { .. }));
    let rep = verify_family(&ctx, FamilyKind::R3, &SweepOptions { budget: Budget::Samples(200), ..Default::default() });
    assert!(rep.scope_note.is_some());
    assert_eq!(rep.in_scope, 0);
    assert!(rep.ok());
}

#[test]
fn exponents() {
    let r = |kind: FamilyKind, p, n| kind.exponent(&FieldCtx::new(p, n).unwrap()).unwrap();
    assert_eq!(r(FamilyKind::RhalfQ2Q, 2, 2), 10);
    assert_eq!(r(FamilyKind::R2Q2QDiv3, 3, 2), 57);
    assert_eq!(r(FamilyKind::RQ2Q2Div2, 2, 3), 37);
}

#[test]
fn sweeps_named_in_the_contract() {
    let opts = SweepOptions::default();
    let rep = verify_family(&FieldCtx::new(5, 1).unwrap(), FamilyKind::R2, &SweepOptions { budget: Budget::Samples(2000), ..opts.clone() });
    assert!(rep.ok(), "{:?}", rep.mismatches);
    let rep = verify_family(&FieldCtx::new(2, 2).unwrap(), FamilyKind::RhalfQ2Q, &opts);
    assert!(rep.exhaustive && rep.ok());
    for n in 1..=4 {
        assert!(rep.clause_tally.get(&format!("r=(q^2+q)/2:({n})")).is_some_and(|&c| c > 0), "{:?}", rep.clause_tally);
    }
    let rep = verify_family(&FieldCtx::new(3, 2).unwrap(), FamilyKind::RQT1 { t: 3 }, &SweepOptions { budget: Budget::Samples(500), ..opts });
    assert!(rep.ok(), "{:?}", rep.mismatches);
    assert!(rep.in_scope > 0);
}

#[test]
fn closed_form_examples() {
    let f5 = gf(5, 1);
    let k = |f: &Gf<Fe>, n| f.from_int(n);
    let z = f5.zero();
    let cl = classify_deg_le2(&f5, k(&f5, 1), z, z);
    assert_eq!(cl.iter().map(|c| c.m).collect::<Vec<_>>(), vec![2]);
    let cubic = classify_deg3(&f5, k(&f5, 1), z, k(&f5, 1), k(&f5, 1)).unwrap();
    assert_eq!(cubic.clauses.iter().map(|c| (c.m, c.label.as_str())).collect::<Vec<_>>(), vec![(3, "deg3-3to1:(3)")]);
    let f8 = gf(2, 3);
    let x3 = classify_deg3(&f8, f8.one(), f8.zero(), f8.zero(), f8.zero()).unwrap();
    assert_eq!(x3.clauses.iter().map(|c| c.m).collect::<Vec<_>>(), vec![1]);
    let f7 = gf(7, 1);
    let x3 = classify_deg3(&f7, f7.one(), f7.zero(), f7.zero(), f7.zero()).unwrap();
    assert_eq!(x3.clauses.iter().map(|c| c.m).collect::<Vec<_>>(), vec![3]);
    assert_eq!(x3.two_to_one, Some(false));
    let (o, z8) = (f8.one(), f8.zero());
    assert_eq!(classify_deg4_2to1_even(&gf(2, 2), gf(2, 2).zero(), gf(2, 2).one(), gf(2, 2).zero()).unwrap().map(|c| c.m), Some(2));
    assert_eq!(classify_deg4_2to1_even(&f8, o, z8, o).unwrap(), None);
    assert!(!classify(f8.elements(), |x| f8.add(f8.add(f8.pow(x, 4), f8.pow(x, 3)), x)).valid_ms().contains(&2));
    // x^4 - c x over F_16 as F_{2^4}: 4-to-1 iff c^5 = 1
    let f16 = gf(2, 4);
    for (e, want) in [(5, 1), (3, 4)] {
        let c = f16.exp(e);
        let m = classify_linearized_binomial(&f16, 1, f16.one(), c, 2, 0).unwrap();
        assert_eq!(m, want);
        let l = |x| f16.sub(f16.pow(x, 4), f16.mul(c, x));
        assert_eq!(classify(f16.elements(), l).valid_ms(), &[want]);
    }
}

#[test]
fn table_rows() {
    let f4 = gf(2, 2);
    let t = invert_normalized(&f4, &DensePoly::new(vec![f4.zero(), f4.zero(), f4.one()])).unwrap();
    assert!(f4.elements().all(|x| t.inverse.eval(&f4, f4.mul(x, x)) == x));
    let f7 = gf(7, 1);
    let g = DensePoly::new([0, 3, 0, 0, 1].map(|c| f7.from_int(c)).to_vec());
    let t = invert_normalized(&f7, &g).unwrap();
    assert!(f7.elements().all(|x| t.inverse.eval(&f7, g.eval(&f7, x)) == x));
}

#[test]
fn linearized_binomial_inverses() {
    let f16 = gf(2, 4);
    let xi = f16.exp(1);
    let inv = invert_linearized_binomial(&f16, 1, xi, 2).unwrap();
    assert!(f16.elements().all(|x| inv.eval(&f16, f16.sub(f16.pow(x, 4), f16.mul(xi, x))) == x));
    // ξ^3 has N_{16/4}(ξ^3) = ξ^15 = 1, so x^4 - ξ^3 x has a kernel
    assert_eq!(invert_linearized_binomial(&f16, 1, f16.exp(3), 2), Err(Error::NotAPermutation));
    let f9 = gf(3, 2);
    let a = f9.exp(1);
    let inv = invert_linearized_binomial(&f9, 1, a, 1).unwrap();
    assert_eq!(inv.terms().len(), 2);
    assert!(f9.elements().all(|x| inv.eval(&f9, f9.sub(f9.pow(x, 3), f9.mul(a, x))) == x));
    let frob = invert_linearized_binomial(&f9, 1, f9.zero(), 1).unwrap();
    assert_eq!(frob.terms(), &[(3, f9.one())]);
}

#[test]
fn square_inverse_branches() {
    for (p, n) in [(3, 1), (5, 1), (2, 2), (2, 3)] {
        let ctx = FieldCtx::new(p, n).unwrap();
        let f = ctx.ext();
        let q = ctx.q();
        let mut hit = [0; 2];
        for ai in 0..f.group_order() {
            let a = f.exp(ai);
            let b = f.mul(f.pow(ctx.xi(), (q - 1) * (1 + ai % (q + 1))), ctx.frobenius(a));
            let step = if q > 5 { 7 } else { 1 };
            for (u, v) in f.elements().step_by(step).flat_map(|u| f.elements().map(move |v| (u, v))) {
                let c = f.exp(2);
                if f.mul(a, v) == f.mul(b, u) {
                    continue;
                }
                let inst = family(&ctx, FamilyKind::R2, [a, b, c, u, v]);
                let Ok(vals) = invert_f_square(&inst) else { continue };
                let kc = family_constants(&inst, FamilyKind::R2);
                hit[usize::from(!f.is_zero(kc.alpha))] += 1;
                assert!(f.elements().all(|x| vals[inst.eval_f(x).index() as usize] == x));
                assert_eq!(vals, invert_f(&inst).unwrap().values);
            }
        }
        assert!(hit[0] > 0, "α = 0 branch unused over F_{q}");
        if p == 2 {
            assert!(hit[1] > 0, "β = 0 branch unused over F_{q}");
        }
    }
}

#[test]
fn involutions_over_f4() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let f = ctx.ext();
    let mut seen = 0;
    for ai in 0..f.group_order() {
        let a = f.exp(ai);
        let b = ctx.frobenius(a);
        for u in f.elements() {
            for v in f.elements().step_by(3) {
                if f.mul(a, v) == f.mul(b, u) {
                    continue;
                }
                let inst = family(&ctx, FamilyKind::RQplus1, [a, b, f.exp(2), u, v]);
                if !inst.reduce_valid_ms().unwrap().contains(&2) {
                    continue;
                }
                let inv = involution_of_f_strict(&inst).unwrap();
                assert_eq!(inv.method, InvolutionMethod::Power);
                assert!(inv.verified());
                if f.is_zero(u) {
                    // no translation term left: I_f(x) - x depends on x only through λ
                    let d: Vec<FF2> = f.elements().map(|x| f.sub(inv.values[x.index() as usize], x)).collect();
                    for x in f.elements() {
                        for y in f.elements() {
                            if inst.lambda(x) == inst.lambda(y) {
                                assert_eq!(d[x.index() as usize], d[y.index() as usize]);
                            }
                        }
                    }
                }
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn four_to_one_has_no_involution() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let f = ctx.ext();
    let els: Vec<FF2> = f.elements().collect();
    let found = els[1..].iter().flat_map(|&a| els.iter().map(move |&c| (a, c))).find_map(|(a, c)| {
        let b = ctx.frobenius(a);
        els.iter().find_map(|&u| {
            let v = f.one();
            if f.mul(a, v) == f.mul(b, u) {
                return None;
            }
            let inst = family(&ctx, FamilyKind::R4, [a, b, c, u, v]);
            (inst.reduce_valid_ms().unwrap() == [4]).then(|| involution_of_f(&inst))
        })
    });
    match found {
        Some(Err(Error::NotTwoToOne { valid_ms })) => assert_eq!(valid_ms, vec![4]),
        other => panic!("no 4-to-1 R4 instance refused: {other:?}"),
    }
}
