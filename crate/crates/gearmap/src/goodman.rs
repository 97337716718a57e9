//! The first Maclaurin coefficient ratio f′(0)/f(1) of centered gear maps,
//! computed two independent ways: through the renormalized-map pipeline and
//! through the classical singular integral.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geartools::renormalized_gear_map;
use crate::quad::integrate_adaptive;
use crate::schwarzian::MapParams;
use crate::solver::lambda_bounds;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Prevertex angles (t₁, t₂) of the renormalized gear map built from the
/// symmetric parameters (t, λ): the images of e^{it} and e^{i(π−t)} under
/// the recentring disk automorphism.
pub fn gear_prevertices(t: f64, lambda: f64, tol: f64) -> Result<(f64, f64)> {
    let gm = renormalized_gear_map(&MapParams::new(t, lambda)?, tol)?;
    let unshift = gm.precompose.inverse();
    let t1 = unshift.apply(c64(t.cos(), t.sin())).arg();
    let pi_minus = std::f64::consts::PI - t;
    let t2 = unshift.apply(c64(pi_minus.cos(), pi_minus.sin())).arg();
    Ok((t1, t2))
}

/// The ratio f′(0)/f(1) of the centered gear map with prevertex angles
/// (t₁, t₂), found by solving for the symmetric parameters whose
/// renormalized map has those prevertices.
///
/// A disk automorphism acts projectively on half-angle tangents of the
/// boundary circle, so matching (t₁, t₂) pins the symmetric angle t and
/// the recentring parameter q in closed form:
/// tan²(t/2) = tan(t₁/2)/tan(t₂/2) and (1−q)/(1+q) = √(tan(t₁/2)·tan(t₂/2)).
/// Only λ remains, solved as a one-dimensional root of q(t, λ) = q.
///
/// At t₁ = 0 the outer vertices have coalesced at infinity, f(1) = ∞, and
/// the ratio degenerates to 0.
pub fn goodman_ratio_jet(t1: f64, t2: f64, tol: f64) -> Result<f64> {
    if !(t1 >= 0.0 && t1 < t2 && t2 < std::f64::consts::PI) {
        return Err(Error::InvalidInput {
            detail: format!("need 0 ≤ t1 < t2 < π, got ({t1}, {t2})"),
        });
    }
    if t1 == 0.0 {
        return Ok(0.0);
    }
    let h1 = (0.5 * t1).tan();
    let h2 = (0.5 * t2).tan();
    let t = 2.0 * (h1 / h2).sqrt().atan();
    let k = (h1 * h2).sqrt();
    let q_target = (1.0 - k) / (1.0 + k);
    // Scan the admissible interval for a bracket of q(λ) = q_target, then
    // bisect. Points where the pipeline fails (near-degenerate corners)
    // are skipped.
    let delta = 1e-3;
    let (lo, hi) = lambda_bounds(t);
    let (lo, hi) = (lo + delta, hi - delta);
    let q_of = |lambda: f64| -> Result<f64> {
        Ok(renormalized_gear_map(&MapParams::new(t, lambda)?, tol)?.q)
    };
    let n = 28;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 0..=n {
        let lambda = lo + (hi - lo) * i as f64 / n as f64;
        match q_of(lambda) {
            Ok(q) => {
                let v = q - q_target;
                if let Some((pl, pv)) = prev {
                    if pv * v <= 0.0 {
                        bracket = Some((pl, pv, lambda, v));
                        break;
                    }
                }
                prev = Some((lambda, v));
            }
            Err(_) => {
                prev = None;
            }
        }
    }
    let (mut a, mut fa, mut b, _fb) = bracket.ok_or_else(|| Error::NoRoot {
        detail: format!("no λ matches the prevertex pair ({t1}, {t2})"),
    })?;
    let mut lambda = 0.5 * (a + b);
    for _ in 0..60 {
        lambda = 0.5 * (a + b);
        let fm = q_of(lambda)? - q_target;
        if fm == 0.0 || (b - a).abs() < 1e-12 {
            break;
        }
        if fa * fm < 0.0 {
            b = lambda;
        } else {
            a = lambda;
            fa = fm;
        }
    }
    let gm = renormalized_gear_map(&MapParams::new(t, lambda)?, tol)?;
    // The construction pinned t and q; λ controls the remaining prevertex
    // degree of freedom, so check the match before trusting the ratio.
    let unshift = gm.precompose.inverse();
    let got_t1 = unshift.apply(c64(t.cos(), t.sin())).arg();
    if (got_t1 - t1).abs() > 1e-6 {
        return Err(Error::InversionFailed {
            detail: format!("prevertex match residual {:.2e}", (got_t1 - t1).abs()),
        });
    }
    Ok(gm.map.jet0.d1.re / gm.outer_radius)
}

/// The singular integral
/// I = ∫₀¹ (1/x − √(1 − cos t₂·x) / (x·√(1 − cos t₁·x)·√(1 − x²))) dx.
///
/// The 1/x parts cancel analytically; near x = 1 the square-root
/// substitution x = 1 − u² regularizes the endpoint. The integrand is
/// evaluated in a cancellation-free grouping throughout.
pub fn goodman_log_integral(t1: f64, t2: f64, abs_tol: f64) -> Result<f64> {
    if !(t1 >= 0.0 && t1 < t2 && t2 < std::f64::consts::PI) {
        return Err(Error::InvalidInput {
            detail: format!("need 0 ≤ t1 < t2 < π, got ({t1}, {t2})"),
        });
    }
    let c1 = t1.cos();
    let c2 = t2.cos();
    if (1.0 - c1).abs() < 1e-12 {
        return Err(Error::QuadratureFailure {
            detail: "integral diverges at t1 = 0 (coalesced outer vertices)".into(),
        });
    }
    // After x = 1 − u²:
    //   integrand·dx = 2A(x) / ((1 − c₁x)(2 − u²)(u + B(x, u))) du
    // with A = (c₂ − c₁) − x + c₁x² and B = √((1−c₂x)/(1−c₁x))/√(2−u²).
    let g = |u: f64| -> f64 {
        let x = 1.0 - u * u;
        let a = (c2 - c1) - x + c1 * x * x;
        let b = ((1.0 - c2 * x) / (1.0 - c1 * x)).sqrt() / (2.0 - u * u).sqrt();
        2.0 * a / ((1.0 - c1 * x) * (2.0 - u * u) * (u + b))
    };
    integrate_adaptive(&g, 0.0, 1.0, abs_tol)
}

/// The ratio f′(0)/f(1) through the singular integral: the integral is the
/// logarithm of the ratio up to the constant ln 2, i.e. ratio = 2·e^I.
/// The two degenerate limits pin the constant: t₁ = t₂ gives I = −ln 2 and
/// the identity map (ratio 1), while t₁ → 0 sends I → −∞ and the ratio to 0
/// together with f(1) → ∞.
pub fn goodman_ratio_integral(t1: f64, t2: f64, abs_tol: f64) -> Result<f64> {
    Ok(2.0 * goodman_log_integral(t1, t2, abs_tol)?.exp())
}

/// The explicit map of the degenerate γ = π/2 gear (unit disk joined to a
/// right-angle half-plane sector), in the form with (1 − z + z²)^{3/2}
/// that satisfies f(0) = 0, f′(0) = 1.
pub fn goodman_explicit_map(z: Complex64) -> Complex64 {
    let w = 1.0 - z + z * z;
    let num = 2.0 * w.powf(1.5) - 2.0 + 3.0 * z + 3.0 * z * z - 2.0 * z * z * z;
    (4.0 / 27.0) * num / (z * (1.0 - z))
}

/// Schwarzian derivative by centered finite differences with Richardson
/// extrapolation: S_f = f‴/f′ − (3/2)(f″/f′)².
pub fn fd_schwarzian<F>(f: &F, z: Complex64, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let stencil = |h: f64| -> Complex64 {
        let fp = |k: f64| f(z + c64(k * h, 0.0));
        let d1 = (-fp(2.0) + 8.0 * fp(1.0) - 8.0 * fp(-1.0) + fp(-2.0)) / (12.0 * h);
        let d2 = (-fp(2.0) + 16.0 * fp(1.0) - 30.0 * fp(0.0) + 16.0 * fp(-1.0) - fp(-2.0))
            / (12.0 * h * h);
        let d3 = (-fp(3.0) + 8.0 * fp(2.0) - 13.0 * fp(1.0) + 13.0 * fp(-1.0) - 8.0 * fp(-2.0)
            + fp(-3.0))
            / (8.0 * h * h * h);
        let ratio = d2 / d1;
        d3 / d1 - 1.5 * ratio * ratio
    };
    // Two step sizes, fourth-order stencils: Richardson in h⁴.
    let s1 = stencil(h);
    let s2 = stencil(h / 2.0);
    (16.0 * s2 - s1) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_map_normalization() {
        // f(0) = 0, f′(0) = 1 for the corrected closed form.
        let h = 1e-5;
        let f0 = goodman_explicit_map(c64(h, 0.0));
        assert!((f0 / h - c64(1.0, 0.0)).norm() < 1e-4, "f(h)/h = {}", f0 / h);
        let g = goodman_explicit_map(c64(0.3, 0.2));
        assert!(g.is_finite());
    }

    #[test]
    fn reduced_integral_against_closed_form() {
        // cos t₁ = cos t₂ collapses the radicals: ∫₀¹ (1/x − 1/(x√(1−x²))) dx
        // = −ln 2 from the antiderivative ln x + artanh(√(1−x²)). The ratio
        // 2·e^I is then exactly 1: the coalesced configuration is the disk.
        let t = 0.9;
        let v = goodman_log_integral(t, t + 1e-9, 1e-11).unwrap();
        assert!(
            (v - (-(2.0_f64).ln())).abs() < 1e-7,
            "reduced integral {v} vs {}",
            -(2.0_f64).ln()
        );
        let ratio = goodman_ratio_integral(t, t + 1e-9, 1e-11).unwrap();
        assert!((ratio - 1.0).abs() < 1e-7);
    }

    #[test]
    fn integrand_finite_near_zero() {
        // Taylor cancellation of the 1/x parts: value bounded at x = 1e−8,
        // i.e. u ≈ 1.
        let (c1, c2) = (0.5_f64.cos(), 1.2_f64.cos());
        let x = 1e-8_f64;
        let u = (1.0 - x).sqrt();
        let a = (c2 - c1) - x + c1 * x * x;
        let b = ((1.0 - c2 * x) / (1.0 - c1 * x)).sqrt() / (2.0 - u * u).sqrt();
        let g = 2.0 * a / ((1.0 - c1 * x) * (2.0 - u * u) * (u + b));
        assert!(g.is_finite());
        assert!(g.abs() < 10.0);
    }

    #[test]
    fn fd_schwarzian_of_moebius_vanishes() {
        let f = |z: Complex64| (2.0 * z + 1.0) / (z + 3.0);
        let s = fd_schwarzian(&f, c64(0.3, 0.1), 0.02);
        assert!(s.norm() < 1e-9, "S of möbius = {s:e}");
    }

    #[test]
    fn fd_schwarzian_of_square() {
        // S_{z²}(z) = −3/(2z²).
        let f = |z: Complex64| z * z;
        let z = c64(0.8, 0.3);
        let s = fd_schwarzian(&f, z, 0.01);
        let expect = -1.5 / (z * z);
        assert!((s - expect).norm() < 1e-8 * (1.0 + expect.norm()), "{s} vs {expect}");
    }
}
