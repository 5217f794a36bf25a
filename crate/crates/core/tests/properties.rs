use proptest::prelude::*;

use mto1::closed_form::solve_quadratic_char2;
use mto1::family::{predict, FamilyKind};
use mto1::field::{quad_char, Fe, FieldCtx, FieldElement, Gf, FF2};
use mto1::inverse::{invert_f, normalize_and_match};
use mto1::involution::involution_of_f;
use mto1::oracle::{classify, FiberCounter};
use mto1::poly::DensePoly;
use mto1::reduction::{load_spec, HShape, MapInstance, MapSpec, MapSpecJson};
use mto1::Error;

const TOWERS: [(u64, u32); 6] = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3)];

fn tower() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(TOWERS.to_vec()).prop_map(|(p, n)| FieldCtx::new(p, n).unwrap())
}

fn el(ctx: &FieldCtx, i: u32) -> FF2 {
    FF2::from_index(i % ctx.q2() as u32)
}

/// a, b with equal norms built from a random a and k, plus raw c, u, v.
fn tuple(ctx: &FieldCtx, raw: [u32; 5]) -> Option<(FF2, FF2, FF2, FF2, FF2)> {
    let f = ctx.ext();
    let q = ctx.q();
    let a = f.exp(u64::from(raw[0]) % (ctx.q2() - 1));
    let k = 1 + u64::from(raw[1]) % (q + 1);
    let b = f.mul(f.pow(ctx.xi(), (q - 1) * k), ctx.frobenius(a));
    let (c, u, v) = (el(ctx, raw[2]), el(ctx, raw[3]), el(ctx, raw[4]));
    (f.mul(a, v) != f.mul(b, u)).then_some((a, b, c, u, v))
}

fn poly_spec(ctx: &FieldCtx, raw: [u32; 5], h: &[u32]) -> Option<MapSpec> {
    let (a, b, c, u, v) = tuple(ctx, raw)?;
    let h = DensePoly::new(h.iter().map(|&i| el(ctx, i)).collect());
    Some(MapSpec { a, b, c, u, v, h: HShape::Poly(h) })
}

fn oracle_ms_up_to_q(inst: &MapInstance<'_>) -> Vec<u64> {
    let ctx = inst.ctx();
    let vals = inst.f_values();
    FiberCounter::new(ctx.q2() as usize)
        .valid_ms(vals.iter().map(|v| v.index()))
        .into_iter()
        .filter(|&m| m <= ctx.q())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_and_norm_are_frobenius_fixed(ctx in tower(), i in any::<u32>()) {
        let x = el(&ctx, i);
        let f = ctx.ext();
        let t = f.add(x, ctx.frobenius(x));
        prop_assert!(ctx.in_subfield(t));
        prop_assert_eq!(ctx.embed(ctx.trace_q2_q(x)), t);
        prop_assert_eq!(ctx.embed(ctx.norm_q2_q(x)), f.mul(x, ctx.frobenius(x)));
        prop_assert_eq!(ctx.frobenius(ctx.frobenius(x)), x);
    }

    #[test]
    fn quad_char_is_multiplicative(n in 1u32..=3, p in prop::sample::select(vec![3u64, 5, 7]), i in any::<u32>(), j in any::<u32>()) {
        prop_assume!(p.pow(n) <= 400);
        let f = Gf::<Fe>::new(p, n).unwrap();
        let x = Fe::from_index(i % f.order() as u32);
        let y = Fe::from_index(j % f.order() as u32);
        let lhs = quad_char(&f, f.mul(x, y)).unwrap();
        prop_assert_eq!(lhs, quad_char(&f, x).unwrap() * quad_char(&f, y).unwrap());
        let is_square = f.elements().any(|z| f.mul(z, z) == x);
        prop_assert_eq!(quad_char(&f, x).unwrap() >= 0, is_square);
    }

    #[test]
    fn char2_quadratic_count_matches_scan(n in 1u32..=6, a in 1u32.., b in any::<u32>(), c in any::<u32>()) {
        let f = Gf::<Fe>::new(2, n).unwrap();
        let q = f.order() as u32;
        let a = Fe::from_index(1 + a % (q - 1));
        let (pred, roots) = solve_quadratic_char2(&f, a, Fe::from_index(b % q), Fe::from_index(c % q)).unwrap();
        prop_assert_eq!(pred, roots.len());
    }

    #[test]
    fn find_k_round_trip(ctx in tower(), i in any::<u32>(), k in any::<u64>()) {
        let f = ctx.ext();
        let q = ctx.q();
        let a = f.exp(u64::from(i) % (ctx.q2() - 1));
        let k = 1 + k % (q + 1);
        let b = f.mul(f.pow(ctx.xi(), (q - 1) * k), ctx.frobenius(a));
        prop_assert_eq!(ctx.find_k(a, b).unwrap(), k);
    }

    #[test]
    fn reduction_lemmas_on_random_h(
        ctx in tower(),
        raw in any::<[u32; 5]>(),
        h in prop::collection::vec(any::<u32>(), 0..6),
    ) {
        let Some(spec) = poly_spec(&ctx, raw, &h) else { return Ok(()) };
        let inst = MapInstance::new(&ctx, spec).unwrap();
        let f = ctx.ext();
        let (sp, dc) = (inst.spec(), inst.constants());
        let fr = |x| ctx.frobenius(x);
        // A^{q+1} = B^{q+1}, and f(x) = H(λ(x)) - a^{-1}Ax
        prop_assert_eq!(f.pow(dc.big_a, ctx.q() + 1), f.pow(dc.big_b, ctx.q() + 1));
        prop_assert_eq!(f.mul(sp.b, fr(sp.a)), f.mul(f.pow(ctx.xi(), (ctx.q() - 1) * dc.k), f.mul(fr(sp.a), fr(sp.a))));
        for x in f.elements() {
            let rhs = f.sub(inst.big_h(ctx.embed(inst.lambda(x))), f.mul(f.div(dc.big_a, sp.a).unwrap(), x));
            prop_assert_eq!(inst.eval_f(x), rhs);
        }
        prop_assert!(inst.lambda_fibers_uniform());
        prop_assert!(inst.check_commute());
        prop_assert_eq!(inst.reduce_valid_ms().unwrap(), oracle_ms_up_to_q(&inst));
    }

    #[test]
    fn wrong_k_breaks_the_diagram(ctx in tower(), raw in any::<[u32; 5]>(), shift in 1u64..) {
        let h = [0, 0, 1];
        let Some(spec) = poly_spec(&ctx, raw, &h) else { return Ok(()) };
        let inst = MapInstance::new(&ctx, spec).unwrap();
        let q = ctx.q();
        let k = inst.constants().k;
        let wrong = 1 + (k - 1 + shift % q) % (q + 1);
        prop_assume!(wrong != k);
        prop_assert!(!inst.with_k(wrong).check_commute());
    }

    #[test]
    fn spec_json_round_trip(ctx in tower(), raw in any::<[u32; 5]>(), h in prop::collection::vec(any::<u32>(), 0..4)) {
        let Some(spec) = poly_spec(&ctx, raw, &h) else { return Ok(()) };
        let text = serde_json::to_string(&spec.to_json(&ctx)).unwrap();
        let js: MapSpecJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&js, &spec.to_json(&ctx));
        let (ctx2, back) = load_spec(&text).unwrap();
        prop_assert_eq!(ctx2.spec(), ctx.spec());
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn family_verdicts_agree_with_oracle(
        ctx in tower(),
        raw in any::<[u32; 5]>(),
        kind in prop::sample::select(vec![
            FamilyKind::R2, FamilyKind::R2Q, FamilyKind::RQplus1, FamilyKind::RhalfQ2Q,
            FamilyKind::RQT1 { t: 1 }, FamilyKind::R3, FamilyKind::R4, FamilyKind::RPS1 { s: 1 },
        ]),
    ) {
        let Some((a, b, c, u, v)) = tuple(&ctx, raw) else { return Ok(()) };
        let spec = MapSpec { a, b, c, u, v, h: HShape::Family(kind) };
        let inst = match MapInstance::new(&ctx, spec) {
            Ok(inst) => inst,
            Err(Error::IndivisibleExponent(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let oracle = oracle_ms_up_to_q(&inst);
        for m in 1..=ctx.q() {
            if let Some(says) = predict(&inst, kind, m).unwrap().is_m_to_1() {
                prop_assert_eq!(says, oracle.contains(&m), "m = {}", m);
            }
        }
    }

    #[test]
    fn inverse_of_random_permutation_g(
        (p, n) in prop::sample::select(vec![(5u64, 1u32), (7, 1), (2, 3), (3, 2), (11, 1), (2, 4), (13, 1), (5, 2)]),
        coeffs in prop::collection::vec(any::<u32>(), 2..=6),
    ) {
        let f = Gf::<Fe>::new(p, n).unwrap();
        let q = f.order() as u32;
        let mut c: Vec<Fe> = coeffs.iter().map(|&i| Fe::from_index(i % q)).collect();
        let last = c.len() - 1;
        c[last] = Fe::from_index(1 + coeffs[last] % (q - 1));
        let g = DensePoly::new(c);
        prop_assume!(g.degree().unwrap() < q as usize);
        let perm = classify(f.elements(), |x| g.eval(&f, x)).valid_ms().contains(&1);
        prop_assume!(perm);
        let (norm, t) = normalize_and_match(&f, &g).unwrap();
        for x in f.elements() {
            prop_assert_eq!(norm.denormalize(&f, |w| t.inverse.eval(&f, w), g.eval(&f, x)), x);
        }
    }

    #[test]
    fn inverse_and_involution_of_f(ctx in tower(), raw in any::<[u32; 5]>(), h in prop::collection::vec(any::<u32>(), 1..5)) {
        let Some(spec) = poly_spec(&ctx, raw, &h) else { return Ok(()) };
        let inst = MapInstance::new(&ctx, spec).unwrap();
        let ms = inst.reduce_valid_ms().unwrap();
        match invert_f(&inst) {
            Ok(inv) => {
                prop_assert!(ms.contains(&1));
                prop_assert!(inv.verified);
            }
            Err(e) => {
                prop_assert!(!ms.contains(&1));
                prop_assert_eq!(e, Error::NotInjective);
            }
        }
        match involution_of_f(&inst) {
            Ok(inv) => prop_assert!(inv.verified()),
            Err(Error::NotTwoToOne { valid_ms }) => prop_assert_eq!(valid_ms, ms),
            Err(Error::WrongCharacteristic) => prop_assert!(ctx.p() != 2 && ms.contains(&2)),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

#[test]
fn trace_fibers_have_q_elements() {
    for (p, n) in TOWERS {
        let ctx = FieldCtx::new(p, n).unwrap();
        let c = classify(ctx.ext().elements(), |x| ctx.trace_q2_q(x));
        assert_eq!(c.fibers().len() as u64, ctx.q());
        assert!(c.fibers().values().all(|v| v.len() as u64 == ctx.q()));
    }
}

#[test]
fn norm_of_xi_generates_subfield_units() {
    for (p, n) in TOWERS {
        let ctx = FieldCtx::new(p, n).unwrap();
        let nx = ctx.norm_q2_q(ctx.xi());
        assert_eq!(ctx.base().element_order(nx), Some(ctx.q() - 1));
    }
}

/// Over F_2 ⊂ F_4 the m-to-1 equivalence holds for every h of degree <= 2.
#[test]
fn reduction_equivalence_exhaustive_small() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    let f = ctx.ext();
    let els: Vec<FF2> = f.elements().collect();
    let mut checked = 0;
    for &a in &els[1..] {
        for &b in &els {
            if f.pow(a, 3) != f.pow(b, 3) {
                continue;
            }
            for &u in &els {
                for &v in &els {
                    if f.mul(a, v) == f.mul(b, u) {
                        continue;
                    }
                    for &c in &els {
                        for &h1 in &els {
                            for &h2 in &els {
                                let h = HShape::Poly(DensePoly::new(vec![f.zero(), h1, h2]));
                                let inst = MapInstance::new(&ctx, MapSpec { a, b, c, u, v, h }).unwrap();
                                assert!(inst.check_commute());
                                assert_eq!(inst.reduce_valid_ms().unwrap(), oracle_ms_up_to_q(&inst));
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}
