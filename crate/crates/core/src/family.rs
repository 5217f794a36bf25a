//! Clause checkers for h = x^r over the sixteen exponent families.

use crate::error::{Error, Result};
use crate::field::{gcd, FieldCtx, FieldElement, Gf, FF2};
use crate::reduction::MapInstance;
use crate::verdict::{Clause, Scope, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    R2,
    R2Q,
    RQplus1,
    RhalfQ2Q,
    /// r = q + t + 1 with t itself (a power of p).
    RQT1 { t: u64 },
    R3,
    R3Q,
    RQplus2,
    R2Qplus1,
    R2Q2QDiv3,
    RQ22QDiv3,
    R4,
    R4Q,
    RQ2Q2Div2,
    /// r = p^s
    RPS { s: u32 },
    /// r = p^s + 1
    RPS1 { s: u32 },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::R2 => "R2",
            FamilyKind::R2Q => "R2Q",
            FamilyKind::RQplus1 => "RQplus1",
            FamilyKind::RhalfQ2Q => "RhalfQ2Q",
            FamilyKind::RQT1 { .. } => "RQT1",
            FamilyKind::R3 => "R3",
            FamilyKind::R3Q => "R3Q",
            FamilyKind::RQplus2 => "RQplus2",
            FamilyKind::R2Qplus1 => "R2Qplus1",
            FamilyKind::R2Q2QDiv3 => "R2Q2Q_div3",
            FamilyKind::RQ22QDiv3 => "RQ2_2Q_div3",
            FamilyKind::R4 => "R4",
            FamilyKind::R4Q => "R4Q",
            FamilyKind::RQ2Q2Div2 => "RQ2Q2_div2",
            FamilyKind::RPS { .. } => "RPS",
            FamilyKind::RPS1 { .. } => "RPS1",
        }
    }

    /// Every tag name, in declaration order.
    pub const NAMES: [&'static str; 16] = [
        "R2",
        "R2Q",
        "RQplus1",
        "RhalfQ2Q",
        "RQT1",
        "R3",
        "R3Q",
        "RQplus2",
        "R2Qplus1",
        "R2Q2Q_div3",
        "RQ2_2Q_div3",
        "R4",
        "R4Q",
        "RQ2Q2_div2",
        "RPS",
        "RPS1",
    ];

    pub fn s(&self) -> Option<u32> {
        match *self {
            FamilyKind::RPS { s } | FamilyKind::RPS1 { s } => Some(s),
            _ => None,
        }
    }

    pub fn t(&self) -> Option<u64> {
        match *self {
            FamilyKind::RQT1 { t } => Some(t),
            _ => None,
        }
    }

    /// Parses a tag; `s` is required for RPS/RPS1 and `t` for RQT1.
    pub fn from_parts(name: &str, s: Option<u32>, t: Option<u64>) -> Result<Self> {
        let need_s = || s.ok_or_else(|| Error::InvalidSpec(format!("family {name} needs s")));
        Ok(match name {
            "R2" => FamilyKind::R2,
            "R2Q" => FamilyKind::R2Q,
            "RQplus1" => FamilyKind::RQplus1,
            "RhalfQ2Q" => FamilyKind::RhalfQ2Q,
            "RQT1" => FamilyKind::RQT1 {
                t: t.ok_or_else(|| Error::InvalidSpec("family RQT1 needs t".into()))?,
            },
            "R3" => FamilyKind::R3,
            "R3Q" => FamilyKind::R3Q,
            "RQplus2" => FamilyKind::RQplus2,
            "R2Qplus1" => FamilyKind::R2Qplus1,
            "R2Q2Q_div3" => FamilyKind::R2Q2QDiv3,
            "RQ2_2Q_div3" => FamilyKind::RQ22QDiv3,
            "R4" => FamilyKind::R4,
            "R4Q" => FamilyKind::R4Q,
            "RQ2Q2_div2" => FamilyKind::RQ2Q2Div2,
            "RPS" => FamilyKind::RPS { s: need_s()? },
            "RPS1" => FamilyKind::RPS1 { s: need_s()? },
            other => return Err(Error::InvalidSpec(format!("unknown family {other}"))),
        })
    }

    /// Short label used as the clause prefix.
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::R2 => "r=2",
            FamilyKind::R2Q => "r=2q",
            FamilyKind::RQplus1 => "r=q+1",
            FamilyKind::RhalfQ2Q => "r=(q^2+q)/2",
            FamilyKind::RQT1 { .. } => "r=q+t+1",
            FamilyKind::R3 => "r=3",
            FamilyKind::R3Q => "r=3q",
            FamilyKind::RQplus2 => "r=q+2",
            FamilyKind::R2Qplus1 => "r=2q+1",
            FamilyKind::R2Q2QDiv3 => "r=(2q^2+q)/3",
            FamilyKind::RQ22QDiv3 => "r=(q^2+2q)/3",
            FamilyKind::R4 => "r=4",
            FamilyKind::R4Q => "r=4q",
            FamilyKind::RQ2Q2Div2 => "r=(q^2+q+2)/2",
            FamilyKind::RPS { .. } => "r=p^s",
            FamilyKind::RPS1 { .. } => "r=p^s+1",
        }
    }

    /// The literal exponent r for this field.
    pub fn exponent(&self, ctx: &FieldCtx) -> Result<u64> {
        let q = ctx.q();
        let p = ctx.p();
        let q2 = q * q;
        let third = |num: u64, what: &str| {
            if num % 3 == 0 {
                Ok(num / 3)
            } else {
                Err(Error::IndivisibleExponent(format!("{what} with q = {q}")))
            }
        };
        let ps = |s: u32| {
            p.checked_pow(s)
                .ok_or_else(|| Error::PreconditionViolated(format!("p^{s} overflows")))
        };
        Ok(match *self {
            FamilyKind::R2 => 2,
            FamilyKind::R2Q => 2 * q,
            FamilyKind::RQplus1 => q + 1,
            FamilyKind::RhalfQ2Q => (q2 + q) / 2,
            FamilyKind::RQT1 { t } => {
                if t == 0 {
                    return Err(Error::PreconditionViolated("t must be positive".into()));
                }
                q + t + 1
            }
            FamilyKind::R3 => 3,
            FamilyKind::R3Q => 3 * q,
            FamilyKind::RQplus2 => q + 2,
            FamilyKind::R2Qplus1 => 2 * q + 1,
            FamilyKind::R2Q2QDiv3 => third(2 * q2 + q, "(2q^2+q)/3")?,
            FamilyKind::RQ22QDiv3 => third(q2 + 2 * q, "(q^2+2q)/3")?,
            FamilyKind::R4 => 4,
            FamilyKind::R4Q => 4 * q,
            FamilyKind::RQ2Q2Div2 => (q2 + q + 2) / 2,
            FamilyKind::RPS { s } => ps(s)?,
            FamilyKind::RPS1 { s } => ps(s)? + 1,
        })
    }

    /// Field-level hypothesis failure, if any.
    pub fn field_scope(&self, ctx: &FieldCtx) -> Option<String> {
        let (p, q) = (ctx.p(), ctx.q());
        match self {
            FamilyKind::RhalfQ2Q if p != 2 => Some("q must be even".into()),
            FamilyKind::R3 | FamilyKind::R3Q | FamilyKind::RQplus2 | FamilyKind::R2Qplus1 if q < 7 => {
                Some("theorem requires q >= 7".into())
            }
            FamilyKind::R2Q2QDiv3 | FamilyKind::RQ22QDiv3 if p != 3 || q < 9 => {
                Some("theorem requires q = 3^n >= 9".into())
            }
            FamilyKind::R4 | FamilyKind::R4Q | FamilyKind::RQ2Q2Div2 if p != 2 || q < 4 => {
                Some("theorem requires q = 2^n >= 4".into())
            }
            FamilyKind::RQT1 { t } if !is_power_of(*t, p) => Some(format!("t = {t} is not a power of p")),
            _ => None,
        }
    }
}

/// Is `t` equal to p^j for some j >= 0?
pub fn is_power_of(mut t: u64, p: u64) -> bool {
    if t == 0 {
        return false;
    }
    while t % p == 0 {
        t /= p;
    }
    t == 1
}

/// The named quantities of the active theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyConstants {
    pub alpha: FF2,
    pub beta: FF2,
    pub gamma: Option<FF2>,
    pub delta: Option<FF2>,
}

struct Ops<'a> {
    ctx: &'a FieldCtx,
    f: &'a Gf<FF2>,
}

impl Ops<'_> {
    fn fr(&self, x: FF2) -> FF2 {
        self.ctx.frobenius(x)
    }
    fn pw(&self, x: FF2, e: u64) -> FF2 {
        self.f.pow(x, e)
    }
    fn m(&self, x: FF2, y: FF2) -> FF2 {
        self.f.mul(x, y)
    }
    fn m3(&self, x: FF2, y: FF2, z: FF2) -> FF2 {
        self.f.mul(self.f.mul(x, y), z)
    }
    fn a(&self, x: FF2, y: FF2) -> FF2 {
        self.f.add(x, y)
    }
    fn s(&self, x: FF2, y: FF2) -> FF2 {
        self.f.sub(x, y)
    }
    fn k(&self, n: i64) -> FF2 {
        self.f.from_int(n)
    }
    fn div(&self, x: FF2, y: FF2) -> FF2 {
        self.f.div(x, y).expect("nonzero divisor")
    }
    fn z(&self, x: FF2) -> bool {
        self.f.is_zero(x)
    }
}

/// α, β, γ, δ of the theorem for `kind`, from the tuple of `inst`.
pub fn family_constants(inst: &MapInstance<'_>, kind: FamilyKind) -> FamilyConstants {
    let ctx = inst.ctx();
    let o = Ops { ctx, f: ctx.ext() };
    let q = ctx.q();
    let sp = inst.spec();
    let (a, b, c, u, v) = (sp.a, sp.b, sp.c, sp.u, sp.v);
    let dc = inst.constants();
    let (ba, bb) = (dc.big_a, dc.big_b);
    let g0 = ctx.embed(dc.gamma0);
    let aq = o.fr(a);
    let cq = o.fr(c);
    // a^q c - b c^q and a^q c + b c^q recur throughout
    let w_minus = o.s(o.m(aq, c), o.m(b, cq));
    let w_plus = o.a(o.m(aq, c), o.m(b, cq));
    let plain = |alpha, beta| FamilyConstants {
        alpha,
        beta,
        gamma: None,
        delta: None,
    };
    match kind {
        FamilyKind::R2 | FamilyKind::R2Q => {
            let x = if kind == FamilyKind::R2 { bb } else { ba };
            let alpha = o.a(o.m(aq, o.fr(x)), o.m(b, x));
            let two = o.k(2);
            let beta = o.a(o.a(o.m3(two, x, c), o.m3(two, o.fr(x), cq)), g0);
            plain(alpha, beta)
        }
        FamilyKind::RQplus1 => {
            let alpha = o.a(ba, bb);
            let beta = o.a(o.m(alpha, w_plus), o.m(b, g0));
            plain(alpha, beta)
        }
        FamilyKind::RhalfQ2Q => {
            let apb = o.a(ba, bb);
            let nsum = o.a(o.pw(u, q + 1), o.pw(v, q + 1));
            let alpha = o.a(o.m(aq, o.m(apb, apb)), o.m(b, o.m(nsum, nsum)));
            let beta = o.m(o.m(apb, apb), w_plus);
            plain(alpha, beta)
        }
        FamilyKind::RQT1 { t } => {
            let alpha = w_minus;
            let beta = o.a(o.m3(bb, o.pw(alpha, t), w_plus), o.m3(o.pw(aq, t), b, g0));
            plain(alpha, beta)
        }
        FamilyKind::R3 | FamilyKind::R3Q => {
            let x = if kind == FamilyKind::R3 { bb } else { ba };
            let alpha = o.a(o.m(o.pw(a, 2 * q), o.fr(x)), o.m(o.m(b, b), x));
            let beta = o.m(o.k(3), w_minus);
            let gamma = o.f.neg(g0);
            let delta = o.s(o.m3(beta, beta, x), o.m(o.pw(a, 2 * q), gamma));
            FamilyConstants {
                alpha,
                beta,
                gamma: Some(gamma),
                delta: Some(delta),
            }
        }
        FamilyKind::RQplus2 | FamilyKind::R2Qplus1 => {
            let (x, y) = if kind == FamilyKind::RQplus2 { (bb, ba) } else { (ba, bb) };
            let alpha = o.a(x, o.fr(x));
            let two = o.k(2);
            let beta = o.a(
                o.m(o.a(o.m3(two, aq, c), o.m(b, cq)), x),
                o.m(o.a(o.m(aq, c), o.m3(two, b, cq)), o.fr(x)),
            );
            let gamma = o.a(
                o.a(o.m3(two, alpha, o.pw(c, q + 1)), o.m(y, o.pw(c, 2 * q))),
                o.a(o.m(o.fr(y), o.m(c, c)), g0),
            );
            FamilyConstants {
                alpha,
                beta,
                gamma: Some(gamma),
                delta: None,
            }
        }
        FamilyKind::R2Q2QDiv3 | FamilyKind::RQ22QDiv3 => {
            let (x, y) = if kind == FamilyKind::R2Q2QDiv3 { (ba, bb) } else { (bb, ba) };
            let (x3, y3) = (o.pw(x, 3), o.pw(y, 3));
            let alpha = o.a(o.m(aq, o.a(o.m(aq, x3), o.m(b, y3))), o.m(o.m(b, b), o.pw(g0, 3)));
            let beta = o.m(w_minus, o.s(o.m(aq, x3), o.m(b, y3)));
            let gamma = o.m(w_minus, o.s(o.m(y3, c), o.m(x3, cq)));
            FamilyConstants {
                alpha,
                beta,
                gamma: Some(gamma),
                delta: None,
            }
        }
        FamilyKind::R4 | FamilyKind::R4Q => {
            let x = if kind == FamilyKind::R4 { bb } else { ba };
            let alpha = o.a(o.m(o.pw(a, 3 * q), o.fr(x)), o.m(o.pw(b, 3), x));
            let beta = o.a(o.pw(u, q + 1), o.pw(v, q + 1));
            plain(alpha, beta)
        }
        FamilyKind::RQ2Q2Div2 => {
            let alpha = o.a(bb, o.fr(bb));
            let beta = w_plus;
            let gamma = o.a(o.pw(u, q + 1), o.pw(v, q + 1));
            let acb = o.a(o.m(ba, cq), o.m(bb, c));
            let delta = o.a(
                o.a(o.m3(o.pw(c, q + 1), alpha, alpha), o.m3(o.div(aq, b), acb, acb)),
                o.m(gamma, gamma),
            );
            FamilyConstants {
                alpha,
                beta,
                gamma: Some(gamma),
                delta: Some(delta),
            }
        }
        FamilyKind::RPS { s } => {
            let r = ctx.p().pow(s);
            let alpha = o.a(o.m(o.pw(o.div(aq, b), r), ba), bb);
            plain(alpha, g0)
        }
        FamilyKind::RPS1 { s } => {
            let ps = ctx.p().pow(s);
            let e = o.s(c, o.m(o.div(b, aq), cq));
            let alpha = o.m(bb, e);
            let beta = o.a(o.m(bb, o.pw(e, ps)), g0);
            plain(alpha, beta)
        }
    }
}

/// Tuple-level hypothesis (a^q/b)^w A = -B of the two families that need it.
fn hypothesis_holds(inst: &MapInstance<'_>, w: u64) -> bool {
    let ctx = inst.ctx();
    let f = ctx.ext();
    let sp = inst.spec();
    let dc = inst.constants();
    let ratio = f.div(ctx.frobenius(sp.a), sp.b).expect("b is nonzero");
    f.mul(f.pow(ratio, w), dc.big_a) == f.neg(dc.big_b)
}

/// Every clause of the theorem for `kind` that fires on `inst`.
pub fn fired_clauses(inst: &MapInstance<'_>, kind: FamilyKind) -> Scope {
    let ctx = inst.ctx();
    if let Some(reason) = kind.field_scope(ctx) {
        return Scope::Out(reason);
    }
    let (p, q, n) = (ctx.p(), ctx.q(), ctx.n());
    match kind {
        FamilyKind::RQT1 { t } if !hypothesis_holds(inst, t) => {
            return Scope::Out("(a^q/b)^t A != -B".into());
        }
        FamilyKind::RPS1 { s } if !hypothesis_holds(inst, p.pow(s) + 1) => {
            return Scope::Out("(a^q/b)^r A != -B".into());
        }
        _ => {}
    }
    let o = Ops { ctx, f: ctx.ext() };
    let k = family_constants(inst, kind);
    let sp = inst.spec();
    let (a, b, c) = (sp.a, sp.b, sp.c);
    let dc = inst.constants();
    let g0z = dc.gamma0.index() == 0;
    let (az, bz) = (o.z(k.alpha), o.z(k.beta));
    let even = p == 2;
    let label = kind.label();
    let mut out = Vec::new();
    let mut fire = |cond: bool, number: u8, m: u64| {
        if cond {
            out.push(Clause::new(label, number, m));
        }
    };
    match kind {
        FamilyKind::R2 | FamilyKind::R2Q | FamilyKind::RQplus1 => {
            fire(az && !bz, 1, 1);
            fire(!az && bz && even, 2, 1);
            fire(!az && !bz && even, 3, 2);
            fire(az && bz, 4, q);
        }
        FamilyKind::RhalfQ2Q => {
            fire(az && !bz, 1, 1);
            fire(!az && bz, 2, 1);
            fire(!az && !bz, 3, 2);
            fire(az && bz, 4, q);
        }
        FamilyKind::RQT1 { .. } => {
            fire(az && !g0z, 1, 1);
            fire(!az && bz && even, 2, 1);
            fire(!az && !bz && even, 3, 2);
            fire(az && g0z, 4, q);
        }
        FamilyKind::R3 | FamilyKind::R3Q => {
            let gamma = k.gamma.expect("γ");
            let delta = k.delta.expect("δ");
            let x = if kind == FamilyKind::R3 { dc.big_b } else { dc.big_a };
            let gz = o.z(gamma);
            let dz = o.z(delta);
            let three_q = p == 3;
            let q2mod3 = q % 3 == 2;
            // the 3 | q tests only run for odd q, so (q-1)/2 is an integer there
            let char3_eq = three_q && o.pw(o.m(k.alpha, gamma), (q - 1) / 2) == o.div(a, b);
            let cubic_eq = o.m3(k.beta, k.beta, o.pw(x, q + 1)) == o.m3(o.k(3), k.alpha, gamma);
            fire(az && bz && !gz, 1, 1);
            fire(even && az && !bz && dz, 2, 1);
            fire(three_q && !az && !char3_eq, 3, 1);
            fire(q2mod3 && !az && cubic_eq, 4, 1);
            fire(even && az && !bz && !dz, 5, 2);
            fire(three_q && !az && char3_eq, 6, 3);
            fire(az && bz && gz, 7, q);
        }
        FamilyKind::RQplus2 | FamilyKind::R2Qplus1 => {
            let gamma = k.gamma.expect("γ");
            let gz = o.z(gamma);
            let aq = o.fr(a);
            let wz = o.m(aq, c) == o.m(b, o.fr(c));
            let three_q = p == 3;
            let q2mod3 = q % 3 == 2;
            let char3_eq = three_q && {
                let lhs = o.pw(o.f.neg(o.m(k.alpha, gamma)), (q - 1) / 2);
                let rhs = o.pw(o.div(a, o.pw(b, q)), (q + 1) / 2);
                lhs == rhs
            };
            let cubic_eq = o.m(k.beta, k.beta) == o.m3(o.m(o.k(3), aq), b, o.m(k.alpha, gamma));
            fire(az && wz && !g0z, 1, 1);
            fire(even && az && !wz && gz, 2, 1);
            fire(q2mod3 && !az && cubic_eq, 3, 1);
            fire(three_q && !az && bz && !char3_eq, 4, 1);
            fire(even && az && !wz && !gz, 5, 2);
            fire(three_q && !az && bz && char3_eq, 6, 3);
            fire(az && bz && gz, 7, q);
        }
        FamilyKind::R2Q2QDiv3 | FamilyKind::RQ22QDiv3 => {
            let gamma = k.gamma.expect("γ");
            let gz = o.z(gamma);
            let aq = o.fr(a);
            let wz = o.m(aq, c) == o.m(b, o.fr(c));
            let eq = {
                let lhs = o.pw(o.f.neg(o.m(k.alpha, gamma)), (q - 1) / 2);
                let rhs = o.m(aq, o.pw(b, (3 * q - 5) / 2));
                lhs == rhs
            };
            fire(az && bz && !wz, 1, 1);
            fire(!az && bz && !eq, 2, 1);
            fire(!az && bz && eq, 3, 3);
            fire(az && bz && gz, 4, q);
        }
        FamilyKind::R4 | FamilyKind::R4Q => {
            let n_even = n % 2 == 0;
            let both = !az && !bz;
            let eq = both && n_even && o.pw(o.div(k.beta, k.alpha), (q - 1) / 3) == o.div(b, a);
            fire(az && !bz, 1, 1);
            fire(!az && bz, 2, 1);
            fire(both && n_even && !eq, 3, 1);
            fire(both && !n_even, 4, 2);
            fire(both && n_even && eq, 5, 4);
            fire(az && bz, 6, q);
        }
        FamilyKind::RQ2Q2Div2 => {
            let gamma = k.gamma.expect("γ");
            let delta = k.delta.expect("δ");
            let (gz, dz) = (o.z(gamma), o.z(delta));
            let dc = inst.constants();
            let acb = o.a(o.m(dc.big_a, o.fr(c)), o.m(dc.big_b, c));
            let six = o.m(b, delta) == o.m3(k.alpha, k.beta, acb) && n % 2 == 1;
            fire(az && bz && !gz, 1, 1);
            fire(az && !bz && dz, 2, 1);
            fire(!az && bz && gz, 3, 1);
            fire(az && !bz && !dz, 4, 2);
            fire(!az && bz && !gz, 5, 2);
            fire(!az && !bz && six, 6, 2);
        }
        FamilyKind::RPS { s } | FamilyKind::RPS1 { s } => {
            let g = gcd(u64::from(s), u64::from(n));
            let mm = p.pow(g as u32);
            let d = mm - 1;
            let eq = !az && {
                let lhs = o.pw(o.f.neg(o.div(k.beta, k.alpha)), (q - 1) / d);
                let rhs = o.pw(o.div(o.fr(a), b), (p.pow(s) - 1) / d);
                lhs == rhs
            };
            fire(az && !bz, 1, 1);
            fire(!az && !eq, 2, 1);
            fire(!az && eq, 3, mm);
            fire(az && bz, 4, q);
        }
    }
    Scope::In(out)
}

/// Theorem prediction for one m in 1..=q.
pub fn predict(inst: &MapInstance<'_>, kind: FamilyKind, m: u64) -> Result<Verdict> {
    let q = inst.ctx().q();
    if m == 0 || m > q {
        return Err(Error::MOutOfRange { m, max: q });
    }
    verdict_from_scope(&fired_clauses(inst, kind), kind, q, m)
}

/// What [`predict`] answers for m, given the clauses already computed.
pub fn verdict_from_scope(scope: &Scope, kind: FamilyKind, q: u64, m: u64) -> Result<Verdict> {
    if m == 0 || m > q {
        return Err(Error::MOutOfRange { m, max: q });
    }
    if kind == FamilyKind::RQ2Q2Div2 && m > 2 {
        return Ok(Verdict::OutOfTheoremScope {
            reason: "theorem only covers m = 1 and m = 2".into(),
        });
    }
    Ok(match scope {
        Scope::In(clauses) => {
            // a clause granting m is only honoured when m | q
            let kept: Vec<Clause> = clauses.iter().filter(|c| q % c.m == 0).cloned().collect();
            Scope::In(kept).verdict(m)
        }
        out => out.verdict(m),
    })
}
