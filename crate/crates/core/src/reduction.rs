//! f(x) = h(ax^q + bx + c) + ux^q + vx on F_{q^2} and its reduction g on F_q.
//!
//! With λ(x) = ξ^k(ax^q + bx) and λ̄(x) = ξ^k(Ax^q + Bx) both trace-like
//! maps onto F_q, λ̄ ∘ f = g ∘ λ, and for 1 <= m <= q the map f is m-to-1
//! exactly when m | q and g is m-to-1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::FamilyKind;
use crate::field::{FieldCtx, FieldElement, FieldSpec, FF2, FFq};
use crate::oracle::{classify, Classification, FiberCounter};
use crate::poly::DensePoly;

/// Shape of the outer polynomial h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HShape {
    Poly(DensePoly<FF2>),
    Family(FamilyKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub a: FF2,
    pub b: FF2,
    pub c: FF2,
    pub u: FF2,
    pub v: FF2,
    pub h: HShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedConstants {
    /// A = bu - av
    pub big_a: FF2,
    /// B = au^q - bv^q
    pub big_b: FF2,
    /// The k in [1, q+1] with b = ξ^{(q-1)k} a^q.
    pub k: u64,
    /// u^{q+1} - v^{q+1}
    pub gamma0: FFq,
}

/// Computes A, B, k and u^{q+1} - v^{q+1}, checking the lemma identities.
pub fn derive(ctx: &FieldCtx, a: FF2, b: FF2, u: FF2, v: FF2) -> Result<DerivedConstants> {
    let f = ctx.ext();
    let q = ctx.q();
    if f.pow(a, q + 1) != f.pow(b, q + 1) {
        return Err(Error::NormMismatch);
    }
    if f.mul(a, v) == f.mul(b, u) {
        return Err(Error::DegenerateAB);
    }
    let k = ctx.find_k(a, b)?;
    let fr = |x| ctx.frobenius(x);
    let big_a = f.sub(f.mul(b, u), f.mul(a, v));
    let big_b = f.sub(f.mul(a, fr(u)), f.mul(b, fr(v)));
    let gamma0 = f.sub(f.pow(u, q + 1), f.pow(v, q + 1));
    let gamma0 = ctx.project(gamma0).expect("difference of norms lies in F_q");

    assert_eq!(f.pow(big_a, q + 1), f.pow(big_b, q + 1));
    assert_eq!(f.mul(fr(a), big_a), f.mul(b, fr(big_b)));
    assert_eq!(f.mul(fr(a), big_b), f.mul(b, fr(big_a)));
    assert!(!f.is_zero(big_a) && !f.is_zero(big_b));
    let xik = f.pow(ctx.xi(), k);
    assert_eq!(f.mul(big_a, xik), fr(f.mul(big_b, xik)));

    Ok(DerivedConstants {
        big_a,
        big_b,
        k,
        gamma0,
    })
}

/// Oracle verdict on f for one m, with m > q flagged as outside the range
/// the reduction speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReduceVerdict {
    pub m: u64,
    pub m_to_1: bool,
    pub outside_theorem_range: bool,
}

/// A validated spec with its derived constants and cached powers of ξ.
#[derive(Debug, Clone)]
pub struct MapInstance<'a> {
    ctx: &'a FieldCtx,
    spec: MapSpec,
    consts: DerivedConstants,
    r: Option<u64>,
    xik: FF2,
    ximk: FF2,
    a_xik: FF2,
    b_xik: FF2,
    gamma0: FF2,
    a_inv_u: FF2,
}

impl<'a> MapInstance<'a> {
    pub fn new(ctx: &'a FieldCtx, spec: MapSpec) -> Result<Self> {
        let consts = derive(ctx, spec.a, spec.b, spec.u, spec.v)?;
        let r = match &spec.h {
            HShape::Family(kind) => Some(kind.exponent(ctx)?),
            HShape::Poly(_) => None,
        };
        Ok(Self::assemble(ctx, spec, consts, r))
    }

    fn assemble(ctx: &'a FieldCtx, spec: MapSpec, consts: DerivedConstants, r: Option<u64>) -> Self {
        let f = ctx.ext();
        let xik = f.pow(ctx.xi(), consts.k);
        let ximk = f.inv(xik).expect("ξ^k is nonzero");
        let a_inv_u = f.mul(f.inv(spec.a).expect("a is nonzero"), spec.u);
        MapInstance {
            ctx,
            a_xik: f.mul(consts.big_a, xik),
            b_xik: f.mul(consts.big_b, xik),
            gamma0: ctx.embed(consts.gamma0),
            xik,
            ximk,
            a_inv_u,
            spec,
            consts,
            r,
        }
    }

    /// Same map with k replaced; breaks the diagram unless k is correct.
    pub fn with_k(&self, k: u64) -> Self {
        let consts = DerivedConstants { k, ..self.consts };
        Self::assemble(self.ctx, self.spec.clone(), consts, self.r)
    }

    /// Same a, b, u, v with a different c.
    pub fn with_c(&self, c: FF2) -> Self {
        let spec = MapSpec { c, ..self.spec.clone() };
        Self::assemble(self.ctx, spec, self.consts, self.r)
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.consts
    }

    /// The literal exponent r when h = x^r.
    pub fn exponent(&self) -> Option<u64> {
        self.r
    }

    pub fn family(&self) -> Option<FamilyKind> {
        match self.spec.h {
            HShape::Family(kind) => Some(kind),
            HShape::Poly(_) => None,
        }
    }

    #[inline]
    pub fn eval_h(&self, y: FF2) -> FF2 {
        let f = self.ctx.ext();
        match &self.spec.h {
            HShape::Poly(p) => p.eval(f, y),
            HShape::Family(_) => f.pow(y, self.r.expect("family exponent")),
        }
    }

    #[inline]
    pub fn eval_f(&self, x: FF2) -> FF2 {
        let f = self.ctx.ext();
        let s = &self.spec;
        let xq = self.ctx.frobenius(x);
        let inner = f.add(f.add(f.mul(s.a, xq), f.mul(s.b, x)), s.c);
        let lin = f.add(f.mul(s.u, xq), f.mul(s.v, x));
        f.add(self.eval_h(inner), lin)
    }

    /// g evaluated at any point of F_{q^2}.
    #[inline]
    pub fn g_ext(&self, x: FF2) -> FF2 {
        let f = self.ctx.ext();
        let y = f.add(f.mul(self.ximk, x), self.spec.c);
        let hy = self.eval_h(y);
        let t = f.add(f.mul(self.a_xik, self.ctx.frobenius(hy)), f.mul(self.b_xik, hy));
        f.add(t, f.mul(self.gamma0, x))
    }

    pub fn eval_g(&self, x: FFq) -> Result<FFq> {
        let value = self.g_ext(self.ctx.embed(x));
        self.ctx.project(value).ok_or(Error::ValueNotInSubfield {
            x: x.index(),
            value: value.index(),
        })
    }

    /// f on every element of F_{q^2}, in index order.
    pub fn f_values(&self) -> Vec<FF2> {
        self.ctx.ext().elements().map(|x| self.eval_f(x)).collect()
    }

    /// g on every element of F_q, in index order.
    pub fn g_values(&self) -> Result<Vec<FFq>> {
        self.ctx.base().elements().map(|x| self.eval_g(x)).collect()
    }

    /// Coefficients of g reduced modulo x^q - x.
    pub fn g_dense(&self) -> Result<DensePoly<FFq>> {
        Ok(DensePoly::interpolate_full(self.ctx.base(), &self.g_values()?))
    }

    pub fn lambda_ext(&self, x: FF2) -> FF2 {
        let f = self.ctx.ext();
        let s = &self.spec;
        f.mul(self.xik, f.add(f.mul(s.a, self.ctx.frobenius(x)), f.mul(s.b, x)))
    }

    /// λ(x) = ξ^k(ax^q + bx).
    pub fn lambda(&self, x: FF2) -> FFq {
        self.ctx.project(self.lambda_ext(x)).expect("λ lands in F_q")
    }

    pub fn lambda_bar_ext(&self, x: FF2) -> FF2 {
        let f = self.ctx.ext();
        f.add(f.mul(self.a_xik, self.ctx.frobenius(x)), f.mul(self.b_xik, x))
    }

    /// λ̄(x) = ξ^k(Ax^q + Bx).
    pub fn lambda_bar(&self, x: FF2) -> FFq {
        self.ctx.project(self.lambda_bar_ext(x)).expect("λ̄ lands in F_q")
    }

    /// H(y) = h(ξ^{-k}y + c) + a^{-1}uξ^{-k}y, so that f(x) = H(λ(x)) - a^{-1}Ax.
    pub fn big_h(&self, y: FF2) -> FF2 {
        let f = self.ctx.ext();
        let z = f.mul(self.ximk, y);
        f.add(self.eval_h(f.add(z, self.spec.c)), f.mul(self.a_inv_u, z))
    }

    /// λ̄(f(x)) = g(λ(x)) for every x in F_{q^2}, with λ(x) and both sides in F_q.
    pub fn check_commute(&self) -> bool {
        // in F_{q^2} the identity holds for any ξ^k; only the right k keeps it in F_q
        self.ctx.ext().elements().all(|x| {
            let y = self.lambda_ext(x);
            let lhs = self.lambda_bar_ext(self.eval_f(x));
            self.ctx.in_subfield(y) && self.ctx.in_subfield(lhs) && lhs == self.g_ext(y)
        })
    }

    /// Every fiber of λ has exactly q elements.
    pub fn lambda_fibers_uniform(&self) -> bool {
        let q = self.ctx.q() as usize;
        let mut counts = vec![0usize; q];
        for x in self.ctx.ext().elements() {
            match self.ctx.project(self.lambda_ext(x)) {
                Some(s) => counts[s.index() as usize] += 1,
                None => return false,
            }
        }
        counts.iter().all(|&c| c == q)
    }

    pub fn classify_f(&self) -> Classification<FF2, FF2> {
        classify(self.ctx.ext().elements(), |x| self.eval_f(x))
    }

    pub fn classify_g(&self) -> Result<Classification<FFq, FFq>> {
        let vals = self.g_values()?;
        Ok(classify(self.ctx.base().elements(), |x| vals[x.index() as usize]))
    }

    /// Every m <= q with m | q for which g is m-to-1: by the reduction, the
    /// m <= q for which f is m-to-1.
    pub fn reduce_valid_ms(&self) -> Result<Vec<u64>> {
        // every λ-fiber has size q, so the exceptional elements of g lift
        // to q·#E_g points of F_{q^2}, which matches q^2 mod m iff m | q
        assert!(self.lambda_fibers_uniform(), "λ must be q-to-1 onto F_q");
        let q = self.ctx.q();
        let vals = self.g_values()?;
        let mut counter = FiberCounter::new(q as usize);
        let g_ms = counter.valid_ms(vals.iter().map(|v| v.index()));
        Ok(g_ms.into_iter().filter(|&m| q % m == 0).collect())
    }

    /// m-to-1 verdict for f through g when m <= q; for q < m <= q^2 the
    /// oracle's answer on f, tagged as outside the theorem's range.
    pub fn reduce_classify(&self, m: u64) -> Result<ReduceVerdict> {
        let q = self.ctx.q();
        let q2 = self.ctx.q2();
        if m == 0 || m > q2 {
            return Err(Error::MOutOfRange { m, max: q2 });
        }
        if m <= q {
            let ms = self.reduce_valid_ms()?;
            return Ok(ReduceVerdict {
                m,
                m_to_1: ms.contains(&m),
                outside_theorem_range: false,
            });
        }
        Ok(ReduceVerdict {
            m,
            m_to_1: self.classify_f().is_m_to_1(m)?,
            outside_theorem_range: true,
        })
    }
}

/// Serialized map spec; field elements are coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpecJson {
    pub field: FieldSpec,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub h: HJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HJson {
    Poly {
        coeffs: Vec<Vec<u32>>,
    },
    Family {
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<u64>,
    },
}

impl MapSpec {
    pub fn from_json(ctx: &FieldCtx, js: &MapSpecJson) -> Result<Self> {
        let f = ctx.ext();
        let el = |v: &[u32]| f.from_coeffs(v).map_err(Error::from);
        let h = match &js.h {
            HJson::Poly { coeffs } => HShape::Poly(DensePoly::new(
                coeffs.iter().map(|c| el(c)).collect::<Result<Vec<_>>>()?,
            )),
            HJson::Family { kind, s, t } => HShape::Family(FamilyKind::from_parts(kind, *s, *t)?),
        };
        Ok(MapSpec {
            a: el(&js.a)?,
            b: el(&js.b)?,
            c: el(&js.c)?,
            u: el(&js.u)?,
            v: el(&js.v)?,
            h,
        })
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> MapSpecJson {
        let f = ctx.ext();
        let h = match &self.h {
            HShape::Poly(p) => HJson::Poly {
                coeffs: p.coeffs().iter().map(|&c| f.coeffs(c)).collect(),
            },
            HShape::Family(kind) => HJson::Family {
                kind: kind.name().to_string(),
                s: kind.s(),
                t: kind.t(),
            },
        };
        MapSpecJson {
            field: ctx.spec(),
            a: f.coeffs(self.a),
            b: f.coeffs(self.b),
            c: f.coeffs(self.c),
            u: f.coeffs(self.u),
            v: f.coeffs(self.v),
            h,
        }
    }
}

/// Parses a spec document and builds its field.
pub fn load_spec(text: &str) -> Result<(FieldCtx, MapSpec)> {
    let js: MapSpecJson = serde_json::from_str(text)?;
    let ctx = FieldCtx::from_spec(&js.field)?;
    let spec = MapSpec::from_json(&ctx, &js)?;
    Ok((ctx, spec))
}
