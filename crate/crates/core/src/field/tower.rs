use serde::{Deserialize, Serialize};

use super::{FieldElement, FieldError, Gf, FF2, FFq, DEFAULT_SIZE_CAP};

/// The tower F_p ⊂ F_q = F_{p^n} ⊂ F_{q^2}.
///
/// Both fields are built independently from their smallest irreducible
/// polynomials; F_q is mapped into F_{q^2} by sending the defining root of
/// `irr_q` to its smallest-index root in the extension.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    base: Gf<FFq>,
    ext: Gf<FF2>,
    embed: Vec<FF2>,
    /// project[i] = index of the F_q element embedding to FF2(i), or u32::MAX.
    project: Vec<u32>,
}

/// Serialized description of a tower; coefficients low-degree-first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr_q: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr_q2: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<u32>>,
}

impl FieldCtx {
    pub fn new(p: u64, n: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, n, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u64, n: u32, cap: u64) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::DegreeZero);
        }
        let ext = Gf::<FF2>::with_cap(p, 2 * n, cap)?;
        let base = Gf::<FFq>::with_cap(p, n, cap)?;
        let q = base.order();

        let irr = base.modulus().to_vec();
        let eval_irr = |x: FF2| {
            irr.iter()
                .rev()
                .fold(ext.zero(), |acc, &c| ext.add(ext.mul(acc, x), ext.from_int(c as i64)))
        };
        let theta = ext
            .elements()
            .find(|&x| ext.is_zero(eval_irr(x)))
            .expect("F_q embeds in F_{q^2}");

        let mut embed = Vec::with_capacity(q as usize);
        let mut project = vec![u32::MAX; ext.order() as usize];
        for y in base.elements() {
            let coeffs = base.coeffs(y);
            let img = coeffs.iter().rev().fold(ext.zero(), |acc, &c| {
                ext.add(ext.mul(acc, theta), ext.from_int(c as i64))
            });
            embed.push(img);
            project[img.index() as usize] = y.index();
        }
        Ok(FieldCtx {
            p,
            n,
            q,
            base,
            ext,
            embed,
            project,
        })
    }

    /// Builds the tower described by `spec`, checking any polynomials and
    /// primitive element it pins against the deterministic construction.
    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        let ctx = Self::new(spec.p, spec.n)?;
        let mine = ctx.spec();
        if spec.irr_q.as_ref().is_some_and(|v| Some(v) != mine.irr_q.as_ref()) {
            return Err(FieldError::SpecMismatch("irr_q".into()));
        }
        if spec.irr_q2.as_ref().is_some_and(|v| Some(v) != mine.irr_q2.as_ref()) {
            return Err(FieldError::SpecMismatch("irr_q2".into()));
        }
        if spec.xi.as_ref().is_some_and(|v| Some(v) != mine.xi.as_ref()) {
            return Err(FieldError::SpecMismatch("xi".into()));
        }
        Ok(ctx)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            n: self.n,
            irr_q: Some(self.base.modulus().to_vec()),
            irr_q2: Some(self.ext.modulus().to_vec()),
            xi: Some(self.ext.coeffs(self.xi())),
        }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// q^2, the size of the big field.
    #[inline]
    pub fn q2(&self) -> u64 {
        self.q * self.q
    }

    /// Arithmetic in F_{q^2}.
    #[inline]
    pub fn ext(&self) -> &Gf<FF2> {
        &self.ext
    }

    /// Arithmetic in F_q.
    #[inline]
    pub fn base(&self) -> &Gf<FFq> {
        &self.base
    }

    /// The primitive element ξ of F_{q^2}.
    #[inline]
    pub fn xi(&self) -> FF2 {
        self.ext.generator()
    }

    #[inline]
    pub fn embed(&self, x: FFq) -> FF2 {
        self.embed[x.index() as usize]
    }

    /// The F_q element equal to `x`, if `x` lies in the subfield.
    #[inline]
    pub fn project(&self, x: FF2) -> Option<FFq> {
        match self.project[x.index() as usize] {
            u32::MAX => None,
            i => Some(FFq::from_index(i)),
        }
    }

    #[inline]
    pub fn in_subfield(&self, x: FF2) -> bool {
        self.project[x.index() as usize] != u32::MAX
    }

    /// x^q.
    #[inline]
    pub fn frobenius(&self, x: FF2) -> FF2 {
        self.ext.pow(x, self.q)
    }

    pub fn trace_q2_q(&self, x: FF2) -> FFq {
        let t = self.ext.add(x, self.frobenius(x));
        self.project(t).expect("trace is Frobenius-fixed")
    }

    pub fn norm_q2_q(&self, x: FF2) -> FFq {
        let t = self.ext.pow(x, self.q + 1);
        self.project(t).expect("norm is Frobenius-fixed")
    }

    /// The k in [1, q+1] with b = ξ^{(q-1)k} a^q.
    pub fn find_k(&self, a: FF2, b: FF2) -> Result<u64, FieldError> {
        let f = &self.ext;
        if f.is_zero(a) {
            return Err(FieldError::PreconditionViolated("a = 0".into()));
        }
        if f.pow(a, self.q + 1) != f.pow(b, self.q + 1) {
            return Err(FieldError::PreconditionViolated(
                "a^(q+1) != b^(q+1)".into(),
            ));
        }
        let ratio = f.div(b, self.frobenius(a))?;
        let base = f.pow(self.xi(), self.q - 1);
        let k = f
            .discrete_log(ratio, base)?
            .expect("equal norms put b/a^q in the (q-1)-th powers");
        Ok(if k == 0 { self.q + 1 } else { k })
    }
}

/// Absolute trace Σ_{i<d} x^{2^i} of an element of F_{2^d}, as 0 or 1.
pub fn abs_trace<E: FieldElement>(field: &Gf<E>, x: E) -> Result<u8, FieldError> {
    if field.characteristic() != 2 {
        return Err(FieldError::WrongCharacteristic);
    }
    let mut acc = field.zero();
    let mut y = x;
    for _ in 0..field.degree() {
        acc = field.add(acc, y);
        y = field.mul(y, y);
    }
    match acc.index() {
        0 => Ok(0),
        1 => Ok(1),
        _ => unreachable!("absolute trace lies in F_2"),
    }
}

/// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
pub fn quad_char<E: FieldElement>(field: &Gf<E>, x: E) -> Result<i8, FieldError> {
    if field.characteristic() == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if field.is_zero(x) {
        return Ok(0);
    }
    let e = field.pow(x, field.group_order() / 2);
    Ok(if e == field.one() { 1 } else { -1 })
}
