//! Cross-checks of the family theorems against the oracle over whole
//! parameter spaces (or seeded samples of them).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::family::{family_constants, fired_clauses, verdict_from_scope, FamilyKind};
use crate::field::{FieldCtx, FieldElement, FF2};
use crate::inverse::invert_f;
use crate::involution::involution_of_f;
use crate::oracle::FiberCounter;
use crate::reduction::{HShape, MapInstance, MapSpec};
use crate::verdict::Scope;

/// Exhaustive enumeration below this many tuples when the budget is `Auto`.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0x6d74_6f31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Auto,
    Exhaustive,
    Samples(u64),
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub budget: Budget,
    pub seed: u64,
    pub check_commute: bool,
    /// Run invert_f on every 1-to-1 tuple.
    pub check_inverse: bool,
    /// Run involution_of_f on every 2-to-1 tuple (q even).
    pub check_involution: bool,
    pub max_mismatches: usize,
    pub keep_rows: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: Budget::Auto,
            seed: DEFAULT_SEED,
            check_commute: true,
            check_inverse: true,
            check_involution: true,
            max_mismatches: 20,
            keep_rows: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleRepr {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: u64,
    pub sub: u32,
    pub check: &'static str,
    pub detail: String,
    pub tuple: TupleRepr,
}

/// One line of the per-tuple CSV export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleRow {
    pub index: u64,
    pub sub: u32,
    pub a: String,
    pub b: String,
    pub c: String,
    pub u: String,
    pub v: String,
    pub k: u64,
    pub oracle_ms: String,
    pub predicted_ms: String,
    pub clauses: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub p: u64,
    pub n: u32,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    pub r: Option<u64>,
    pub field: FieldSummary,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tuples_checked: u64,
    pub in_scope: u64,
    pub out_of_scope: u64,
    pub scope_note: Option<String>,
    pub clause_tally: BTreeMap<String, u64>,
    /// Valid m <= q found by the oracle, keyed like "1" or "none".
    pub oracle_tally: BTreeMap<String, u64>,
    /// Tuples for which clauses granting two different m fired.
    pub multi_m: u64,
    pub inverses_verified: u64,
    pub g_inverse_sources: BTreeMap<String, u64>,
    pub involutions_verified: u64,
    pub involution_methods: BTreeMap<String, u64>,
    pub mismatch_count: u64,
    /// Mismatches per check: reduction, commute, predict, inverse, ...
    pub mismatch_checks: BTreeMap<String, u64>,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    pub rows: Vec<TupleRow>,
}

impl FamilyReport {
    pub fn ok(&self) -> bool {
        self.mismatch_count == 0
    }
}

#[derive(Default)]
struct Acc {
    checked: u64,
    in_scope: u64,
    out_of_scope: u64,
    clause_tally: BTreeMap<String, u64>,
    oracle_tally: BTreeMap<String, u64>,
    multi_m: u64,
    inverses: u64,
    g_sources: BTreeMap<String, u64>,
    involutions: u64,
    inv_methods: BTreeMap<String, u64>,
    mismatch_count: u64,
    mismatch_checks: BTreeMap<String, u64>,
    mismatches: Vec<Mismatch>,
    rows: Vec<TupleRow>,
}

fn merge_tally(into: &mut BTreeMap<String, u64>, from: BTreeMap<String, u64>) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

impl Acc {
    fn merge(mut self, other: Acc, cap: usize) -> Acc {
        self.checked += other.checked;
        self.in_scope += other.in_scope;
        self.out_of_scope += other.out_of_scope;
        merge_tally(&mut self.clause_tally, other.clause_tally);
        merge_tally(&mut self.oracle_tally, other.oracle_tally);
        self.multi_m += other.multi_m;
        self.inverses += other.inverses;
        merge_tally(&mut self.g_sources, other.g_sources);
        self.involutions += other.involutions;
        merge_tally(&mut self.inv_methods, other.inv_methods);
        self.mismatch_count += other.mismatch_count;
        merge_tally(&mut self.mismatch_checks, other.mismatch_checks);
        self.mismatches.extend(other.mismatches);
        self.mismatches.sort_by_key(|m| (m.index, m.sub));
        self.mismatches.truncate(cap);
        self.rows.extend(other.rows);
        self
    }
}

/// The (a, b, c, u, v) tuple with b = ξ^{(q-1)k} a^q.
#[derive(Debug, Clone, Copy)]
struct Tuple {
    a: FF2,
    b: FF2,
    c: FF2,
    u: FF2,
    v: FF2,
}

fn b_from(ctx: &FieldCtx, a: FF2, k: u64) -> FF2 {
    let f = ctx.ext();
    f.mul(f.pow(ctx.xi(), (ctx.q() - 1) * k), ctx.frobenius(a))
}

/// Exponent w in the tuple hypothesis (a^q/b)^w A = -B, if the family has one.
fn hypothesis_exponent(ctx: &FieldCtx, kind: FamilyKind) -> Option<u64> {
    match kind {
        FamilyKind::RQT1 { t } => Some(t),
        FamilyKind::RPS1 { s } => Some(ctx.p().pow(s) + 1),
        _ => None,
    }
}

/// The v != bu/a satisfying b v^q + ρ a v = ρ b u + a u^q, ρ = (a^q/b)^w.
fn hypothesis_vs(ctx: &FieldCtx, a: FF2, b: FF2, u: FF2, w: u64) -> Vec<FF2> {
    let f = ctx.ext();
    let rho = f.pow(f.div(ctx.frobenius(a), b).expect("b != 0"), w);
    let rhs = f.add(f.mul(rho, f.mul(b, u)), f.mul(a, ctx.frobenius(u)));
    let bu = f.mul(b, u);
    f.elements()
        .filter(|&v| {
            let lhs = f.add(f.mul(b, ctx.frobenius(v)), f.mul(rho, f.mul(a, v)));
            lhs == rhs && f.mul(a, v) != bu
        })
        .collect()
}

fn exhaustive_size(ctx: &FieldCtx, kind: FamilyKind) -> u64 {
    let (q, q2) = (ctx.q(), ctx.q2());
    let outer = (q2 - 1) * (q + 1);
    match hypothesis_exponent(ctx, kind) {
        // each (a, k, c, u) has q - 1 admissible v
        Some(_) => outer * q2 * q2 * (q - 1),
        None => outer * q2 * q2 * q2,
    }
}

/// Work items: exhaustive items decode to one tuple, or to every admissible
/// v when the family carries a tuple hypothesis.
fn exhaustive_items(ctx: &FieldCtx, kind: FamilyKind) -> u64 {
    let (q, q2) = (ctx.q(), ctx.q2());
    let outer = (q2 - 1) * (q + 1);
    match hypothesis_exponent(ctx, kind) {
        Some(_) => outer * q2 * q2,
        None => outer * q2 * q2 * q2,
    }
}

fn decode(ctx: &FieldCtx, kind: FamilyKind, mut idx: u64) -> Vec<Tuple> {
    let (q, q2) = (ctx.q(), ctx.q2());
    let mut take = |radix: u64| {
        let d = idx % radix;
        idx /= radix;
        d
    };
    let a = FF2::from_index(1 + take(q2 - 1) as u32);
    let k = 1 + take(q + 1);
    let c = FF2::from_index(take(q2) as u32);
    let u = FF2::from_index(take(q2) as u32);
    let b = b_from(ctx, a, k);
    match hypothesis_exponent(ctx, kind) {
        Some(w) => hypothesis_vs(ctx, a, b, u, w)
            .into_iter()
            .map(|v| Tuple { a, b, c, u, v })
            .collect(),
        None => {
            let v = FF2::from_index(take(q2) as u32);
            vec![Tuple { a, b, c, u, v }]
        }
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> Option<T> {
    (!xs.is_empty()).then(|| xs[rng.gen_range(0..xs.len())])
}

/// Zero tests on the family constants that a v- or c-stratum can aim for.
#[derive(Clone, Copy)]
enum Target {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Gamma0,
    /// a^q c = b c^q
    Conj,
}

fn target_holds(inst: &MapInstance<'_>, kind: FamilyKind, t: Target) -> bool {
    let f = inst.ctx().ext();
    let k = || family_constants(inst, kind);
    match t {
        Target::Alpha => f.is_zero(k().alpha),
        Target::Beta => f.is_zero(k().beta),
        Target::Gamma => k().gamma.is_some_and(|g| f.is_zero(g)),
        Target::Delta => k().delta.is_some_and(|d| f.is_zero(d)),
        Target::Gamma0 => inst.constants().gamma0.index() == 0,
        Target::Conj => {
            let sp = inst.spec();
            let ctx = inst.ctx();
            f.mul(ctx.frobenius(sp.a), sp.c) == f.mul(sp.b, ctx.frobenius(sp.c))
        }
    }
}

fn instance<'a>(ctx: &'a FieldCtx, kind: FamilyKind, t: &Tuple) -> Result<MapInstance<'a>, Error> {
    MapInstance::new(
        ctx,
        MapSpec {
            a: t.a,
            b: t.b,
            c: t.c,
            u: t.u,
            v: t.v,
            h: HShape::Family(kind),
        },
    )
}

/// A seeded random tuple. Half the draws re-pick v, and half re-pick c,
/// among the values that zero some family constant, so that clauses
/// needing several constants to vanish are reached.
fn sample(ctx: &FieldCtx, kind: FamilyKind, seed: u64, i: u64) -> Tuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let f = ctx.ext();
    let (q, q2) = (ctx.q(), ctx.q2());
    let el = |rng: &mut ChaCha8Rng| FF2::from_index(rng.gen_range(0..q2) as u32);
    let hyp = hypothesis_exponent(ctx, kind);
    loop {
        let a = FF2::from_index(rng.gen_range(1..q2) as u32);
        let k = rng.gen_range(1..=q + 1);
        let b = b_from(ctx, a, k);
        let u = el(&mut rng);
        let mut c = el(&mut rng);
        let vs: Vec<FF2> = match hyp {
            Some(w) => hypothesis_vs(ctx, a, b, u, w),
            None => f.elements().collect(),
        };
        let mut v = match pick(&mut rng, &vs) {
            Some(v) => v,
            None => continue,
        };
        if f.mul(a, v) == f.mul(b, u) {
            continue;
        }
        let v_targets: &[&[Target]] = &[&[Target::Alpha], &[Target::Gamma0], &[Target::Alpha, Target::Gamma0]];
        if rng.gen_bool(0.5) {
            let want = v_targets[rng.gen_range(0..v_targets.len())];
            let hits: Vec<FF2> = vs
                .iter()
                .copied()
                .filter(|&v| {
                    instance(ctx, kind, &Tuple { a, b, c, u, v })
                        .is_ok_and(|inst| want.iter().all(|&t| target_holds(&inst, kind, t)))
                })
                .collect();
            if let Some(x) = pick(&mut rng, &hits) {
                v = x;
            }
        }
        let c_targets: &[&[Target]] = &[
            &[Target::Beta],
            &[Target::Gamma],
            &[Target::Delta],
            &[Target::Conj],
            &[Target::Beta, Target::Gamma],
            &[Target::Beta, Target::Conj],
        ];
        if rng.gen_bool(0.5) {
            let want = c_targets[rng.gen_range(0..c_targets.len())];
            if let Ok(base) = instance(ctx, kind, &Tuple { a, b, c, u, v }) {
                let hits: Vec<FF2> = f
                    .elements()
                    .filter(|&c| {
                        let inst = base.with_c(c);
                        want.iter().all(|&t| target_holds(&inst, kind, t))
                    })
                    .collect();
                if let Some(x) = pick(&mut rng, &hits) {
                    c = x;
                }
            }
        }
        return Tuple { a, b, c, u, v };
    }
}

fn join_ms(ms: &[u64]) -> String {
    if ms.is_empty() {
        "none".into()
    } else {
        ms.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
    }
}

struct Checker<'a> {
    ctx: &'a FieldCtx,
    kind: FamilyKind,
    opts: &'a SweepOptions,
}

impl Checker<'_> {
    fn repr(&self, t: &Tuple) -> TupleRepr {
        let f = self.ctx.ext();
        TupleRepr {
            a: f.coeffs(t.a),
            b: f.coeffs(t.b),
            c: f.coeffs(t.c),
            u: f.coeffs(t.u),
            v: f.coeffs(t.v),
        }
    }

    fn check(&self, acc: &mut Acc, index: u64, sub: u32, t: &Tuple) {
        let ctx = self.ctx;
        let f = ctx.ext();
        let (q, q2) = (ctx.q(), ctx.q2());
        let fail = |acc: &mut Acc, check: &'static str, detail: String| {
            acc.mismatch_count += 1;
            *acc.mismatch_checks.entry(check.into()).or_default() += 1;
            if acc.mismatches.len() < self.opts.max_mismatches {
                acc.mismatches.push(Mismatch {
                    index,
                    sub,
                    check,
                    detail,
                    tuple: self.repr(t),
                });
            }
        };
        if f.mul(t.a, t.v) == f.mul(t.b, t.u) {
            return;
        }
        let inst = match instance(ctx, self.kind, t) {
            Ok(i) => i,
            Err(e) => return fail(acc, "spec", e.to_string()),
        };
        acc.checked += 1;

        let f_vals = inst.f_values();
        let oracle: Vec<u64> = FiberCounter::new(q2 as usize)
            .valid_ms(f_vals.iter().map(|v| v.index()))
            .into_iter()
            .filter(|&m| m <= q)
            .collect();
        *acc.oracle_tally.entry(join_ms(&oracle)).or_default() += 1;
        match inst.reduce_valid_ms() {
            Ok(reduced) if reduced == oracle => {}
            Ok(reduced) => fail(acc, "reduction", format!("oracle {oracle:?}, through g {reduced:?}")),
            Err(e) => fail(acc, "reduction", e.to_string()),
        }
        if self.opts.check_commute && !inst.check_commute() {
            fail(acc, "commute", "λ̄∘f != g∘λ".into());
        }

        let scope = fired_clauses(&inst, self.kind);
        let mut predicted = Vec::new();
        match &scope {
            Scope::Out(_) => acc.out_of_scope += 1,
            Scope::In(clauses) => {
                acc.in_scope += 1;
                let mut ms: Vec<u64> = clauses.iter().map(|c| c.m).collect();
                ms.dedup();
                if ms.len() > 1 {
                    acc.multi_m += 1;
                }
                for c in clauses {
                    *acc.clause_tally.entry(c.label.clone()).or_default() += 1;
                    if q % c.m != 0 {
                        fail(acc, "clause-divisibility", format!("{} grants m = {} with q = {q}", c.label, c.m));
                    }
                }
                for m in 1..=q {
                    let verdict = match verdict_from_scope(&scope, self.kind, q, m) {
                        Ok(v) => v,
                        Err(e) => {
                            fail(acc, "predict", e.to_string());
                            continue;
                        }
                    };
                    let Some(says) = verdict.is_m_to_1() else { continue };
                    if says {
                        predicted.push(m);
                    }
                    if says != oracle.contains(&m) {
                        fail(
                            acc,
                            "predict",
                            format!("m = {m}: theorem {says}, oracle {:?}, clauses {:?}", oracle, clause_labels(clauses)),
                        );
                    }
                }
            }
        }

        if self.opts.check_inverse && oracle.contains(&1) {
            match invert_f(&inst) {
                Ok(inv) if inv.verified => {
                    acc.inverses += 1;
                    *acc.g_sources.entry(inv.g_inverse.source.describe()).or_default() += 1;
                }
                Ok(_) => fail(acc, "inverse", "f^{-1}∘f != id".into()),
                Err(e) => fail(acc, "inverse", e.to_string()),
            }
        }
        if self.opts.check_involution && ctx.p() == 2 && oracle.contains(&2) {
            match involution_of_f(&inst) {
                Ok(inv) if inv.verified() => {
                    acc.involutions += 1;
                    *acc.inv_methods.entry(format!("{:?}", inv.method)).or_default() += 1;
                }
                Ok(inv) => fail(
                    acc,
                    "involution",
                    format!(
                        "involution {}, fixed-point-free {}, preserves f {}",
                        inv.is_involution, inv.fixed_point_free, inv.preserves_f
                    ),
                ),
                Err(e) => fail(acc, "involution", e.to_string()),
            }
        }

        if self.opts.keep_rows {
            let el = |x: FF2| format!("{:?}", f.coeffs(x));
            let clauses = match &scope {
                Scope::In(cl) => clause_labels(cl).join(";"),
                Scope::Out(reason) => format!("out of scope: {reason}"),
            };
            acc.rows.push(TupleRow {
                index,
                sub,
                a: el(t.a),
                b: el(t.b),
                c: el(t.c),
                u: el(t.u),
                v: el(t.v),
                k: inst.constants().k,
                oracle_ms: join_ms(&oracle),
                predicted_ms: join_ms(&predicted),
                clauses,
            });
        }
    }
}

fn clause_labels(clauses: &[crate::verdict::Clause]) -> Vec<String> {
    clauses.iter().map(|c| c.label.clone()).collect()
}

/// Checks predict, the reduction and the oracle against each other on
/// every tuple of the budget; disagreements are report content.
pub fn verify_family(ctx: &FieldCtx, kind: FamilyKind, opts: &SweepOptions) -> FamilyReport {
    let exhaustive = match opts.budget {
        Budget::Exhaustive => true,
        Budget::Samples(_) => false,
        Budget::Auto => exhaustive_size(ctx, kind) <= EXHAUSTIVE_LIMIT,
    };
    let samples = match opts.budget {
        Budget::Samples(n) => n,
        _ => DEFAULT_SAMPLES,
    };
    let r = kind.exponent(ctx);
    let mut scope_note = kind.field_scope(ctx);
    let mut acc = Acc::default();
    match &r {
        Err(e) => scope_note = Some(e.to_string()),
        Ok(_) => {
            let checker = Checker { ctx, kind, opts };
            let cap = opts.max_mismatches;
            let items = if exhaustive { exhaustive_items(ctx, kind) } else { samples };
            acc = (0..items)
                .into_par_iter()
                .fold(Acc::default, |mut acc, i| {
                    if exhaustive {
                        for (sub, t) in decode(ctx, kind, i).iter().enumerate() {
                            checker.check(&mut acc, i, sub as u32, t);
                        }
                    } else {
                        checker.check(&mut acc, i, 0, &sample(ctx, kind, opts.seed, i));
                    }
                    acc
                })
                .reduce(Acc::default, |x, y| x.merge(y, cap));
            acc.rows.sort_by_key(|r| (r.index, r.sub));
        }
    }
    FamilyReport {
        family: kind.name().into(),
        label: kind.label().into(),
        s: kind.s(),
        t: kind.t(),
        r: r.ok(),
        field: FieldSummary {
            p: ctx.p(),
            n: ctx.n(),
            q: ctx.q(),
        },
        exhaustive,
        seed: (!exhaustive).then_some(opts.seed),
        tuples_checked: acc.checked,
        in_scope: acc.in_scope,
        out_of_scope: acc.out_of_scope,
        scope_note,
        clause_tally: acc.clause_tally,
        oracle_tally: acc.oracle_tally,
        multi_m: acc.multi_m,
        inverses_verified: acc.inverses,
        g_inverse_sources: acc.g_sources,
        involutions_verified: acc.involutions,
        involution_methods: acc.inv_methods,
        mismatch_count: acc.mismatch_count,
        mismatch_checks: acc.mismatch_checks,
        mismatches: acc.mismatches,
        rows: acc.rows,
    }
}

/// (p, n) with q = p^n <= 16.
pub const SMALL_FIELDS: [(u64, u32); 10] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
];

/// Every (family instance, field) pair the full sweep visits.
pub fn sweep_plan() -> Vec<(FamilyKind, u64, u32)> {
    let mut plan = Vec::new();
    let q_of = |p: u64, n: u32| p.pow(n);
    for &(p, n) in &SMALL_FIELDS {
        let q = q_of(p, n);
        let mut kinds = vec![FamilyKind::R2, FamilyKind::R2Q, FamilyKind::RQplus1];
        if p == 2 {
            kinds.push(FamilyKind::RhalfQ2Q);
        }
        kinds.push(FamilyKind::RQT1 { t: 1 });
        kinds.push(FamilyKind::RQT1 { t: p });
        if q >= 7 {
            kinds.extend([FamilyKind::R3, FamilyKind::R3Q, FamilyKind::RQplus2, FamilyKind::R2Qplus1]);
        }
        if p == 3 && q >= 9 {
            kinds.extend([FamilyKind::R2Q2QDiv3, FamilyKind::RQ22QDiv3]);
        }
        if p == 2 && q >= 4 {
            kinds.extend([FamilyKind::R4, FamilyKind::R4Q, FamilyKind::RQ2Q2Div2]);
        }
        for s in 1..=2 {
            kinds.push(FamilyKind::RPS { s });
            kinds.push(FamilyKind::RPS1 { s });
        }
        plan.extend(kinds.into_iter().map(|k| (k, p, n)));
    }
    plan
}
