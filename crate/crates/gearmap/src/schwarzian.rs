//! Closed-form disk-side Schwarzian derivatives and their Möbius pullbacks.
//!
//! For prevertices at ±e^{±it} the Schwarzian of the mapping is the rational
//! function ½R_{t,λ}(z) = ψ₀,t(z) − λ·ψ₁,t(z). The degenerate evaluator
//! covers the limit in which the first prevertex pair has coalesced at z = 1
//! and the image vertices have moved to infinity.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;

/// Accessory parameters (t, λ) of the symmetric four-prevertex configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub t: f64,
    pub lambda: f64,
}

impl MapParams {
    pub fn new(t: f64, lambda: f64) -> Result<Self> {
        if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidInput {
                detail: format!("prevertex angle t = {t} outside (0, π/2)"),
            });
        }
        Ok(MapParams { t, lambda })
    }
}

fn quartic(t: f64, z: Complex64) -> Complex64 {
    // z⁴ − (2cos2t)z² + 1 in the factored form (z² − 2cos t·z + 1)(z² + 2cos t·z + 1).
    let two_cos = 2.0 * t.cos();
    (z * z - two_cos * z + 1.0) * (z * z + two_cos * z + 1.0)
}

fn guard_quartic(t: f64, z: Complex64) -> Result<Complex64> {
    let q = quartic(t, z);
    if q.norm() < 1e-12 * (1.0 + z.norm().powi(4)) {
        return Err(Error::PrevertexSingularity { z });
    }
    Ok(q)
}

/// ψ₀,t(z): the λ-independent part of half the Schwarzian.
pub fn psi0(t: f64, z: Complex64) -> Result<Complex64> {
    let q = guard_quartic(t, z)?;
    let cos_t = t.cos();
    let sin_t = t.sin();
    let cos2t = (2.0 * t).cos();
    // sin²t · (z⁴ − 16cos t·z³ + (4 + 2cos2t)z² − 16cos t·z + 1) / (2Q²)
    let num = (((z - 16.0 * cos_t) * z + (4.0 + 2.0 * cos2t)) * z - 16.0 * cos_t) * z + 1.0;
    Ok(sin_t * sin_t * num / (2.0 * q * q))
}

/// ψ₁,t(z) = −8cos t / (z⁴ − (2cos2t)z² + 1).
pub fn psi1(t: f64, z: Complex64) -> Result<Complex64> {
    let q = guard_quartic(t, z)?;
    Ok(-8.0 * t.cos() / q)
}

/// R_{t,λ}(z) = 2(ψ₀,t(z) − λ·ψ₁,t(z)).
pub fn eval_r(p: &MapParams, z: Complex64) -> Result<Complex64> {
    Ok(2.0 * (psi0(p.t, z)? - p.lambda * psi1(p.t, z)?))
}

/// Degenerate Schwarzian R_{0,t₂,λ} for the configuration with prevertices
/// 1 (coalesced pair) and e^{±it₂}.
///
/// The two outer image vertices have coalesced at infinity; the double-pole
/// coefficient at z = 1 encodes the aperture of the image sector there and
/// is tied to λ by (2γ/π)² = 1 − 8λ.
pub fn eval_r_degenerate(t2: f64, lambda: f64, z: Complex64) -> Result<Complex64> {
    let c2 = t2.cos();
    let d = z * z - 2.0 * c2 * z + 1.0;
    let zm1 = z - 1.0;
    let denom_scale = 1.0 + z.norm().powi(4);
    if (zm1 * zm1 * d).norm() < 1e-12 * denom_scale {
        return Err(Error::PrevertexSingularity { z });
    }
    let gamma_sq = 1.0 - 8.0 * lambda; // (2γ/π)²
    let p = (5.0 * c2 + 7.0) * (z * z + 1.0) - (14.0 * c2 + 10.0) * z;
    Ok((c2 - 1.0) * (gamma_sq / (zm1 * zm1 * d) - p / (2.0 * zm1 * zm1 * d * d)))
}

/// A Schwarzian derivative as a first-class evaluator, so Möbius pullbacks
/// compose without symbolic algebra.
#[derive(Clone, Debug)]
pub enum Schwarzian {
    /// R_{t,λ} for the symmetric prevertex configuration.
    Disk(MapParams),
    /// R_{0,t₂,λ}, the degenerate evaluator.
    Degenerate { t2: f64, lambda: f64 },
    /// (S ∘ T)·(T′)² for a Möbius T.
    Pullback {
        base: Arc<Schwarzian>,
        map: MobiusMap,
    },
}

impl Schwarzian {
    pub fn disk(params: MapParams) -> Self {
        Schwarzian::Disk(params)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Schwarzian::Disk(p) => eval_r(p, z),
            Schwarzian::Degenerate { t2, lambda } => eval_r_degenerate(*t2, *lambda, z),
            Schwarzian::Pullback { base, map } => {
                let w = map.apply(z);
                if !w.is_finite() {
                    return Err(Error::PoleAtPoint { z });
                }
                let d = map.derivative(z);
                Ok(base.eval(w)? * d * d)
            }
        }
    }

    /// Pull back along a Möbius map: z ↦ S(T(z))·T′(z)².
    pub fn pullback(self, map: MobiusMap) -> Self {
        Schwarzian::Pullback {
            base: Arc::new(self),
            map,
        }
    }
}
