//! Region of gearlikeness, the forward map (t, λ) ↦ (β, γ), the guarded
//! Broyden inversion, and level-curve sweeps of the region's structure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geartools::{analyze_pregear_from_jets, gear_normalize, DiskMap, GearParams};
use crate::ode::jet_of_quotient;
use crate::schwarzian::MapParams;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// λ-interval of the region of gearlikeness at a given t:
/// λ_t∓ = ∓… = −1/4 − (cos t + sec t)/16 and +1/4 − (cos t + sec t)/16.
pub fn lambda_bounds(t: f64) -> (f64, f64) {
    let shift = (t.cos() + 1.0 / t.cos()) / 16.0;
    let lo = -0.25 - shift;
    (lo, lo + 0.5)
}

/// λ-axis intercept of the γ-level curve: (1/8)(1 − (2γ/π)²).
pub fn limit_lambda(gamma: f64) -> f64 {
    let ratio = 2.0 * gamma / std::f64::consts::PI;
    0.125 * (1.0 - ratio * ratio)
}

/// True when λ lies strictly inside the region at t (with margin δ).
pub fn inside_region(t: f64, lambda: f64, delta: f64) -> bool {
    if !(t > delta && t < std::f64::consts::FRAC_PI_2 - delta) {
        return false;
    }
    let (lo, hi) = lambda_bounds(t);
    lambda > lo + delta && lambda < hi - delta
}

/// Forward pipeline: integrate along the three rays, analyze the pregear,
/// normalize, and measure (β, γ).
pub fn forward(p: &MapParams, tol: f64) -> Result<GearParams> {
    let map = DiskMap::symmetric(*p, tol);
    let jet_m1 = jet_of_quotient(&map.basis_at(c64(-1.0, 0.0))?)?;
    let jet_1 = jet_of_quotient(&map.basis_at(c64(1.0, 0.0))?)?;
    let jet_i = jet_of_quotient(&map.basis_at(c64(0.0, 1.0))?)?;
    let geo = analyze_pregear_from_jets(&jet_m1, &jet_1, &jet_i)?;
    let (_t, gear) = gear_normalize(&geo)?;
    Ok(gear)
}

/// Tolerances and iteration budget of the Broyden inversion.
#[derive(Clone, Copy, Debug)]
pub struct InvertOptions {
    pub residual_tol: f64,
    pub max_iterations: usize,
    pub ode_tol: f64,
    /// Clamping margin δ keeping iterates inside the region.
    pub margin: f64,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            residual_tol: 1e-9,
            max_iterations: 160,
            // The absolute residual floor sits near β·ode_tol·10; keep the
            // integration well below the 1e-9 stopping tolerance even for
            // gear ratios in the tens.
            ode_tol: 1e-12,
            margin: 1e-4,
        }
    }
}

fn clamp_to_region(t: f64, lambda: f64, delta: f64) -> (f64, f64, bool) {
    let mut clamped = false;
    let mut tc = t;
    if tc < delta {
        tc = delta;
        clamped = true;
    }
    let t_hi = std::f64::consts::FRAC_PI_2 - delta;
    if tc > t_hi {
        tc = t_hi;
        clamped = true;
    }
    let (lo, hi) = lambda_bounds(tc);
    let mut lc = lambda;
    if lc < lo + delta {
        lc = lo + delta;
        clamped = true;
    }
    if lc > hi - delta {
        lc = hi - delta;
        clamped = true;
    }
    (tc, lc, clamped)
}

/// Solve (β, γ) = target by a guarded Broyden iteration on the forward map,
/// starting from `guess` or (π/4, 0). Iterates are clamped into the region;
/// repeated clamping triggers a restart from the best point of a coarse
/// grid, and an exhausted iteration falls back to bracketed level-curve
/// continuation. Converges across β ∈ [1.05, ~30] and γ ∈ (0.05π, 0.95π);
/// the doubly extreme corners beyond that fail with a structured error.
pub fn invert(
    target: &GearParams,
    guess: Option<(f64, f64)>,
    opts: &InvertOptions,
) -> Result<MapParams> {
    invert_observed(target, guess, opts, &mut |_, _| {})
}

/// Same as [`invert`], reporting every (t, λ) at which the forward map is
/// evaluated; the guard contract is that all of them lie inside the region.
pub fn invert_observed(
    target: &GearParams,
    guess: Option<(f64, f64)>,
    opts: &InvertOptions,
    observer: &mut dyn FnMut(f64, f64),
) -> Result<MapParams> {
    if !(target.beta > 1.0) || !(target.gamma > 0.0 && target.gamma < std::f64::consts::PI) {
        return Err(Error::InvalidInput {
            detail: format!("unreachable gear parameters: {target:?}"),
        });
    }
    let delta = opts.margin;
    let observer = std::cell::RefCell::new(observer);
    // The iteration runs on (ln β − ln β₀, γ − γ₀): the logarithm keeps the
    // β-row of the Jacobian well conditioned across the whole region, where
    // β spans several orders of magnitude.
    let residual = |t: f64, lambda: f64| -> Result<[f64; 2]> {
        (observer.borrow_mut())(t, lambda);
        let p = MapParams { t, lambda };
        let g = forward(&p, opts.ode_tol)?;
        Ok([
            g.beta.ln() - target.beta.ln(),
            g.gamma - target.gamma,
        ])
    };
    let norm2 = |r: &[f64; 2]| (r[0] * r[0] + r[1] * r[1]).sqrt();

    let start = guess.unwrap_or((std::f64::consts::FRAC_PI_4, 0.0));
    let (mut t, mut lambda, _) = clamp_to_region(start.0, start.1, delta);
    let mut restarts_left = 2u32;

    'outer: loop {
        let mut r = match residual(t, lambda) {
            Ok(r) => r,
            Err(_) if restarts_left > 0 => {
                restarts_left -= 1;
                match restart_point(&residual, delta) {
                    Some((tn, ln)) => {
                        t = tn;
                        lambda = ln;
                        continue 'outer;
                    }
                    None => return Err(Error::LeftRegion),
                }
            }
            Err(e) => return Err(e),
        };
        // Finite-difference Jacobian seed.
        let mut jac = match fd_jacobian(&residual, t, lambda, &r, delta) {
            Ok(j) => j,
            Err(_) if restarts_left > 0 => {
                restarts_left -= 1;
                match restart_point(&residual, delta) {
                    Some((tn, ln)) => {
                        t = tn;
                        lambda = ln;
                        continue 'outer;
                    }
                    None => return Err(Error::LeftRegion),
                }
            }
            Err(e) => return Err(e),
        };
        let mut consecutive_clamps = 0u32;
        let mut refreshes_left = 4u32;
        for _ in 0..opts.max_iterations {
            if norm2(&r) < opts.residual_tol {
                return MapParams::new(t, lambda);
            }
            // Solve J·dx = −r.
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det.abs() < 1e-300 {
                break;
            }
            let mut dx = [
                (-r[0] * jac[1][1] + r[1] * jac[0][1]) / det,
                (-r[1] * jac[0][0] + r[0] * jac[1][0]) / det,
            ];
            // Trust radius: the λ-window's center plunges like −sec(t)/16
            // toward t = π/2, so an unbounded t-step drags the iterate into
            // the degenerate corner and strands it there.
            let cap = [0.25, 0.15];
            for (d, c) in dx.iter_mut().zip(cap) {
                *d = d.clamp(-c, c);
            }
            // Backtracking line search: accept the first damped step that
            // does not worsen the residual. Failed evaluations along the
            // way just shorten the step further.
            let r_norm = norm2(&r);
            let mut accepted: Option<(f64, f64, [f64; 2], bool)> = None;
            let mut scale = 1.0;
            for _ in 0..7 {
                let (tn, ln, clamped) =
                    clamp_to_region(t + scale * dx[0], lambda + scale * dx[1], delta);
                if let Ok(r_new) = residual(tn, ln) {
                    if norm2(&r_new) <= r_norm * 1.0001 {
                        accepted = Some((tn, ln, r_new, clamped));
                        break;
                    }
                }
                scale *= 0.5;
            }
            let Some((tn, ln, r_new, clamped)) = accepted else {
                // No productive step in this direction: the model is stale.
                if refreshes_left == 0 {
                    break;
                }
                refreshes_left -= 1;
                jac = match fd_jacobian(&residual, t, lambda, &r, delta) {
                    Ok(j) => j,
                    Err(_) => break,
                };
                continue;
            };
            consecutive_clamps = if clamped { consecutive_clamps + 1 } else { 0 };
            if consecutive_clamps >= 4 {
                break;
            }
            // A microscopic step with a large residual means the rank-1
            // updates went stale; refresh the Jacobian in place.
            let s = [tn - t, ln - lambda];
            let s_dot = s[0] * s[0] + s[1] * s[1];
            if s_dot < 1e-20 * (1.0 + t * t + lambda * lambda) {
                if refreshes_left == 0 {
                    break;
                }
                refreshes_left -= 1;
                jac = match fd_jacobian(&residual, t, lambda, &r, delta) {
                    Ok(j) => j,
                    Err(_) => break,
                };
                continue;
            }
            // Broyden rank-1 update with the actually taken step.
            let jds = [
                jac[0][0] * s[0] + jac[0][1] * s[1],
                jac[1][0] * s[0] + jac[1][1] * s[1],
            ];
            let y = [r_new[0] - r[0], r_new[1] - r[1]];
            for i in 0..2 {
                let corr = (y[i] - jds[i]) / s_dot;
                jac[i][0] += corr * s[0];
                jac[i][1] += corr * s[1];
            }
            t = tn;
            lambda = ln;
            r = r_new;
        }
        if norm2(&r) < opts.residual_tol {
            return MapParams::new(t, lambda);
        }
        if restarts_left == 0 {
            // Quasi-Newton exhausted: fall back to one-dimensional
            // continuation along the γ-level curve, which is slower but
            // bracketed at every stage.
            return invert_by_continuation(opts, &residual);
        }
        restarts_left -= 1;
        match restart_point(&residual, delta) {
            Some((tn, ln)) => {
                t = tn;
                lambda = ln;
            }
            None => return Err(Error::LeftRegion),
        }
    }
}

/// Bracketed fallback: for each t, γ is monotone in λ, so solve
/// γ(t, λ) = γ₀ by bisection; then bracket β along the resulting γ-level
/// curve in t and bisect again. Robust where the quasi-Newton iteration
/// wanders, at the cost of many more forward evaluations.
fn invert_by_continuation(
    opts: &InvertOptions,
    residual: &dyn Fn(f64, f64) -> Result<[f64; 2]>,
) -> Result<MapParams> {
    let delta = opts.margin;
    // residual[1] = γ − γ₀, decreasing in λ.
    let gamma_res = |t: f64, lambda: f64| -> Option<f64> { residual(t, lambda).ok().map(|r| r[1]) };
    let solve_gamma = |t: f64| -> Option<f64> {
        let (lo, hi) = lambda_bounds(t);
        let (mut a, mut b) = (lo + delta, hi - delta);
        let mut fa = gamma_res(t, a)?;
        let fb = gamma_res(t, b)?;
        if fa.signum() == fb.signum() {
            return None;
        }
        if fa < 0.0 {
            std::mem::swap(&mut a, &mut b);
            fa = fb;
        }
        // Invariant: γ-residual positive at a, negative at b.
        let _ = fa;
        for _ in 0..64 {
            let mid = 0.5 * (a + b);
            match gamma_res(t, mid) {
                Some(v) if v > 0.0 => a = mid,
                Some(_) => b = mid,
                None => return None,
            }
            if (a - b).abs() < 1e-13 {
                break;
            }
        }
        Some(0.5 * (a + b))
    };
    let beta_res_at = |t: f64| -> Option<(f64, f64)> {
        let lambda = solve_gamma(t)?;
        residual(t, lambda).ok().map(|r| (r[0], lambda))
    };
    // Bracket the β-residual in t: it decreases from +∞ toward t → 0 and
    // approaches β → 1 (residual −ln β₀) toward t → π/2.
    let n = 28;
    let mut prev: Option<(f64, f64, f64)> = None;
    let mut bracket = None;
    for i in 0..=n {
        let t = delta + (std::f64::consts::FRAC_PI_2 - 2.0 * delta) * i as f64 / n as f64;
        match beta_res_at(t) {
            Some((v, lambda)) => {
                if v == 0.0 {
                    return MapParams::new(t, lambda);
                }
                if let Some((pt, pv, _)) = prev {
                    if pv.signum() != v.signum() {
                        bracket = Some((pt, pv, t));
                        break;
                    }
                }
                prev = Some((t, v, lambda));
            }
            None => {
                prev = None;
            }
        }
    }
    let (mut a, fa, mut b) = bracket.ok_or(Error::LeftRegion)?;
    let mut best: Option<(f64, f64, f64)> = None;
    for _ in 0..64 {
        let mid = 0.5 * (a + b);
        match beta_res_at(mid) {
            Some((v, lambda)) => {
                if best.is_none_or(|(_, _, bv)| v.abs() < bv) {
                    best = Some((mid, lambda, v.abs()));
                }
                if v.signum() == fa.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            None => break,
        }
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    let (t, lambda, _) = best.ok_or(Error::LeftRegion)?;
    let r = residual(t, lambda).map_err(|_| Error::LeftRegion)?;
    let norm = (r[0] * r[0] + r[1] * r[1]).sqrt();
    // The bisections resolve (t, λ) to machine scale; accept modest residual
    // slack relative to the quasi-Newton tolerance.
    if norm > 100.0 * opts.residual_tol {
        return Err(Error::MaxIterations {
            what: "level-curve continuation".into(),
            limit: opts.max_iterations,
        });
    }
    MapParams::new(t, lambda)
}

fn fd_jacobian(
    residual: &dyn Fn(f64, f64) -> Result<[f64; 2]>,
    t: f64,
    lambda: f64,
    r0: &[f64; 2],
    delta: f64,
) -> Result<[[f64; 2]; 2]> {
    let h = 1e-5;
    let (tp, _, _) = clamp_to_region(t + h, lambda, delta);
    let rt = residual(tp, lambda)?;
    let (_, lp, _) = clamp_to_region(t, lambda + h, delta);
    let rl = residual(t, lp)?;
    Ok([
        [(rt[0] - r0[0]) / (tp - t), (rl[0] - r0[0]) / (lp - lambda)],
        [(rt[1] - r0[1]) / (tp - t), (rl[1] - r0[1]) / (lp - lambda)],
    ])
}

/// Best point of a coarse grid over the region (smallest residual norm).
/// The λ-fractions include near-boundary rows, where thin-tooth and
/// near-disk targets live.
fn restart_point(
    residual: &dyn Fn(f64, f64) -> Result<[f64; 2]>,
    delta: f64,
) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 1..=7 {
        let t = std::f64::consts::FRAC_PI_2 * i as f64 / 8.0;
        let (lo, hi) = lambda_bounds(t);
        for frac in [0.01, 0.143, 0.286, 0.429, 0.571, 0.714, 0.857, 0.99] {
            let lambda = lo + (hi - lo) * frac;
            let (t, lambda, _) = clamp_to_region(t, lambda, delta);
            if let Ok(r) = residual(t, lambda) {
                let n = (r[0] * r[0] + r[1] * r[1]).sqrt();
                if best.is_none_or(|(_, _, bn)| n < bn) {
                    best = Some((t, lambda, n));
                }
            }
        }
    }
    best.map(|(t, l, _)| (t, l))
}

/// Which gear parameter a level curve holds constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    /// Constant log β.
    LogBeta,
    /// Constant γ.
    Gamma,
}

/// A level curve of constant log β or γ in the (t, λ) plane.
#[derive(Clone, Debug)]
pub struct LevelCurve {
    pub kind: LevelKind,
    pub value: f64,
    pub label: String,
    /// (t, λ) points; solver failures leave gaps rather than aborting.
    pub points: Vec<(f64, f64)>,
}

/// Sweep level curves over a t-grid, root-solving in λ per t with the
/// previous point as warm start.
pub fn level_curves(
    kind: LevelKind,
    values: &[f64],
    t_grid: &[f64],
    tol: f64,
) -> Vec<LevelCurve> {
    let mut out = Vec::with_capacity(values.len());
    for &value in values {
        let label = match kind {
            LevelKind::LogBeta => format!("log-beta={value}"),
            LevelKind::Gamma => format!("gamma={value}"),
        };
        let component = |g: &GearParams| -> f64 {
            match kind {
                LevelKind::LogBeta => g.beta.ln() - value,
                LevelKind::Gamma => g.gamma - value,
            }
        };
        let mut points = Vec::new();
        let mut warm: Option<f64> = None;
        for &t in t_grid {
            match solve_level_at(t, &component, warm, tol) {
                Some(lambda) => {
                    warm = Some(lambda);
                    points.push((t, lambda));
                }
                None => {
                    warm = None;
                }
            }
        }
        out.push(LevelCurve {
            kind,
            value,
            label,
            points,
        });
    }
    out
}

/// Solve component(forward(t, λ)) = 0 in λ at fixed t: bracket on a scan
/// (warm-started when possible) and bisect.
fn solve_level_at(
    t: f64,
    component: &dyn Fn(&GearParams) -> f64,
    warm: Option<f64>,
    tol: f64,
) -> Option<f64> {
    let delta = 1e-4;
    let (lo, hi) = lambda_bounds(t);
    let (lo, hi) = (lo + delta, hi - delta);
    let eval = |lambda: f64| -> Option<f64> {
        let p = MapParams::new(t, lambda).ok()?;
        forward(&p, tol).ok().map(|g| component(&g))
    };
    // Scan for a bracket, finer near a warm start.
    let n = 24;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    let scan_points: Vec<f64> = if let Some(w) = warm {
        let half = (hi - lo) / 6.0;
        let a = (w - half).max(lo);
        let b = (w + half).min(hi);
        (0..=n)
            .map(|i| a + (b - a) * i as f64 / n as f64)
            .chain((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64))
            .collect()
    } else {
        (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    };
    for lambda in scan_points {
        if let Some(v) = eval(lambda) {
            if let Some((pl, pv)) = prev {
                if pv == 0.0 {
                    return Some(pl);
                }
                if pv * v < 0.0 && (lambda - pl).abs() < (hi - lo) / 2.0 {
                    bracket = Some((pl, pv, lambda, v));
                    break;
                }
            }
            prev = Some((lambda, v));
        } else {
            prev = None;
        }
    }
    let (mut a, mut fa, mut b, _fb) = bracket?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?;
        if fm == 0.0 || (b - a).abs() < 1e-13 {
            return Some(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Some(0.5 * (a + b))
}
