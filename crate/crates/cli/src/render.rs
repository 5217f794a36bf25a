use serde_json::{json, Value};

use mto1::field::{FieldCtx, FF2, FFq};
use mto1::poly::DensePoly;

/// Coefficient vector plus ξ-exponent (null for zero).
pub fn el_ext(ctx: &FieldCtx, x: FF2) -> Value {
    let f = ctx.ext();
    json!({"coeffs": f.coeffs(x), "log": f.log(x)})
}

/// Base-field element; `log` is relative to the generator of F_q^*.
pub fn el_base(ctx: &FieldCtx, x: FFq) -> Value {
    let f = ctx.base();
    json!({"coeffs": f.coeffs(x), "log": f.log(x)})
}

/// Coefficients, low degree first, of the polynomial of degree < q^2
/// taking `values` (in element index order).
pub fn interpolate_ext(ctx: &FieldCtx, values: &[FF2]) -> Vec<Value> {
    let f = ctx.ext();
    let poly = DensePoly::interpolate_full(f, values);
    poly.coeffs().iter().map(|&c| json!(f.coeffs(c))).collect()
}
