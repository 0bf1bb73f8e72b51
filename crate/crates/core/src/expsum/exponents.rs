use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// p^{−δ/(8 log(8/δ) + 4)} for three sets.
    ThreeSet,
    /// p^{−δ/(16 ⌈0.5 log(200/δ)⌉²)} for four sets.
    FourSet,
    /// p^{−δ/(4·2^k)} with 2^k ≥ ⌈2 log(8/δ)⌉, also returning k.
    KFree,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentSpec {
    pub delta: f64,
    pub r: u32,
    pub exponent: f64,
    pub k: Option<u32>,
}

/// Saving exponents with base-2 logarithms; log(8/δ) is clamped at 0 and ceilings at 1.
pub fn bound_exponent(delta: f64, r: u32, variant: Variant) -> Result<ExponentSpec> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::OutOfRange(format!("delta must be positive, got {delta}")));
    }
    let l8 = (8.0 / delta).log2().max(0.0);
    let (exponent, k) = match variant {
        Variant::ThreeSet => (delta / (8.0 * l8 + 4.0), None),
        Variant::FourSet => {
            let c = (0.5 * (200.0 / delta).log2()).ceil().max(1.0);
            (delta / (16.0 * c * c), None)
        }
        Variant::KFree => {
            let l = (2.0 * l8).ceil().max(1.0) as u32;
            let k = l.next_power_of_two().trailing_zeros();
            (delta / (4.0 * (1u64 << k) as f64), Some(k))
        }
    };
    Ok(ExponentSpec { delta, r, exponent, k })
}
