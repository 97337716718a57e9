//! Spectral parameter power series: iterated integrals on the three rays,
//! λ-power-series solutions evaluated at the boundary, and the
//! λ-parametrized gear functionals β(λ), γ(λ), κ(λ).
//!
//! With a nonvanishing seed solution y∞ of the equation at λ∞, the weights
//! q₀ = 1/y∞² and q₁ = ψ₁y∞² generate two interleaved sequences of iterated
//! integrals whose power series in (λ − λ∞) solve the equation for every λ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geartools::{analyze_pregear_from_jets, arc_centers, curvature_at, gear_normalize, GearParams};
use crate::jet::{Jet1, Jet2};
use crate::ode::{integrate_with_captures, jet_of_quotient, OdeBasis, PathSpec};
use crate::schwarzian::{psi0, psi1};
use crate::solver::lambda_bounds;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Which ray from the origin the table lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    ToOne,
    ToI,
    ToMinusOne,
}

impl Ray {
    pub fn direction(&self) -> Complex64 {
        match self {
            Ray::ToOne => c64(1.0, 0.0),
            Ray::ToI => c64(0.0, 1.0),
            Ray::ToMinusOne => c64(-1.0, 0.0),
        }
    }
}

/// Construction options for the tables.
#[derive(Clone, Copy, Debug)]
pub struct SppsOptions {
    /// Series order N (number of powers kept).
    pub order: usize,
    /// Number of grid intervals (must be even).
    pub grid: usize,
    /// Tail acceptance: order-N term ≤ tail_tol · series magnitude.
    pub tail_tol: f64,
    /// Order cap for adaptive doubling.
    pub max_order: usize,
    /// Tolerance of the seed integration.
    pub ode_tol: f64,
}

impl Default for SppsOptions {
    fn default() -> Self {
        SppsOptions {
            order: 50,
            grid: 2000,
            tail_tol: 1e-14,
            max_order: 400,
            ode_tol: 1e-11,
        }
    }
}

/// Iterated-integral tables of one ray.
#[derive(Debug)]
pub struct SppsTable {
    pub direction: Complex64,
    pub lambda_inf: f64,
    grid_step: f64,
    /// Seed solution 1-jet at r = 1 (ray-parameter derivative).
    yinf_end: Jet1,
    q0: Vec<Complex64>,
    q1: Vec<Complex64>,
    /// X^{(n)}(1) for the sequence generated by (q₀, q₁), n = 0..=2N+1.
    x_at_one: Vec<Complex64>,
    /// X̃^{(n)}(1) for the sequence generated by (q₁, q₀).
    xt_at_one: Vec<Complex64>,
    x_sup: Vec<f64>,
    xt_sup: Vec<f64>,
    x_full: Vec<Complex64>,
    xt_full: Vec<Complex64>,
    tail_tol: f64,
}

/// Cumulative integral of `v` on a uniform grid (composite Simpson with a
/// three-point closed rule on the odd half-panels).
fn cumulative_integral(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    let mut out = vec![Complex64::default(); n];
    for j in 1..n {
        out[j] = if j % 2 == 0 {
            out[j - 2] + (v[j - 2] + 4.0 * v[j - 1] + v[j]) * (h / 3.0)
        } else if j + 1 < n {
            out[j - 1] + (5.0 * v[j - 1] + 8.0 * v[j] - v[j + 1]) * (h / 12.0)
        } else {
            // Final odd node (only when the grid size is odd).
            out[j - 1] + (-v[j - 2] + 8.0 * v[j - 1] + 5.0 * v[j]) * (h / 12.0)
        };
    }
    out
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Build a table for arbitrary coefficient functions of the ray parameter.
/// The equation is y″ + ψ₀y = λψ₁y with the seed solved at λ∞ from the
/// 1-jet (1, 0).
pub fn build_spps_custom(
    psi0_fn: &dyn Fn(f64) -> Result<Complex64>,
    psi1_fn: &dyn Fn(f64) -> Result<Complex64>,
    lambda_inf: f64,
    direction: Complex64,
    opts: &SppsOptions,
) -> Result<SppsTable> {
    if opts.grid < 8 || opts.grid % 2 != 0 {
        return Err(Error::InvalidInput {
            detail: "spps grid size must be even and at least 8".into(),
        });
    }
    let m = opts.grid;
    let h = 1.0 / m as f64;
    // Seed: 2η″ + 2(ψ₀ − λ∞ψ₁)η = 0 along [0, 1] in the ray parameter.
    let coeff = |z: Complex64| -> Result<Complex64> {
        let r = z.re;
        Ok(2.0 * (psi0_fn(r)? - lambda_inf * psi1_fn(r)?))
    };
    let fracs: Vec<f64> = (1..=m).map(|j| j as f64 / m as f64).collect();
    let path = PathSpec::new(c64(0.0, 0.0), c64(1.0, 0.0))?;
    let captured = integrate_with_captures(
        &coeff,
        path,
        Jet1::new(1.0, 0.0),
        Jet1::new(0.0, 1.0),
        opts.ode_tol,
        &fracs,
    )?;
    let mut yinf = Vec::with_capacity(m + 1);
    yinf.push(Jet1::new(1.0, 0.0));
    for b in captured.iter().take(m) {
        yinf.push(b.y1);
    }
    let yinf_end = yinf[m];
    let mut min_abs = f64::INFINITY;
    for j in &yinf {
        min_abs = min_abs.min(j.value.norm());
    }
    if min_abs < 1e-6 {
        return Err(Error::SeedVanishes { min_abs });
    }
    let mut q0 = Vec::with_capacity(m + 1);
    let mut q1 = Vec::with_capacity(m + 1);
    for (j, y) in yinf.iter().enumerate() {
        let y2 = y.value * y.value;
        q0.push(1.0 / y2);
        q1.push(psi1_fn(j as f64 * h)? * y2);
    }
    // Resolution gate: the iterated integrals are only as good as the grid's
    // ability to resolve the coefficient spike near r = 1. Compare a plain
    // Simpson pass of ∫q₁ on the full and half grids; the Richardson error
    // estimate, amplified by the number of nested integrations, must stay
    // within the endpoint accuracy contract.
    let simpson = |v: &[Complex64], step: f64| -> Complex64 {
        let n = v.len() - 1;
        let mut acc = v[0] + v[n];
        for (j, x) in v.iter().enumerate().take(n).skip(1) {
            acc += x * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (step / 3.0)
    };
    let full = simpson(&q1, h);
    let half: Vec<Complex64> = q1.iter().step_by(2).cloned().collect();
    let half_val = simpson(&half, 2.0 * h);
    let rel = (full - half_val).norm() / full.norm().max(1.0);
    let err_est = rel / 15.0 * (2 * opts.order) as f64;
    if err_est > 3e-8 {
        return Err(Error::ToleranceNotMet {
            detail: format!(
                "spps grid of {m} intervals cannot resolve the coefficient \
                 (estimated endpoint error {err_est:.2e}); refine the grid"
            ),
        });
    }
    let ones = vec![c64(1.0, 0.0); m + 1];
    let mut table = SppsTable {
        direction,
        lambda_inf,
        grid_step: h,
        yinf_end,
        q0,
        q1,
        x_at_one: vec![c64(1.0, 0.0)],
        xt_at_one: vec![c64(1.0, 0.0)],
        x_sup: vec![1.0],
        xt_sup: vec![1.0],
        x_full: ones.clone(),
        xt_full: ones,
        tail_tol: opts.tail_tol,
    };
    table.extend_to(opts.order)?;
    Ok(table)
}

/// Build the table for the disk equation ψ₀,t, ψ₁,t along one of the three
/// rays, in the ray parametrization (the direction factor e^{2it₀} is
/// folded into the coefficients).
pub fn build_spps(t: f64, ray: Ray, lambda_inf: f64, opts: &SppsOptions) -> Result<SppsTable> {
    let dir = ray.direction();
    let dir_sq = dir * dir;
    let p0 = move |r: f64| -> Result<Complex64> { Ok(dir_sq * psi0(t, dir * r)?) };
    let p1 = move |r: f64| -> Result<Complex64> { Ok(dir_sq * psi1(t, dir * r)?) };
    build_spps_custom(&p0, &p1, lambda_inf, dir, opts)
}

impl SppsTable {
    /// Current series order N.
    pub fn order(&self) -> usize {
        (self.x_at_one.len() - 2) / 2
    }

    /// Extend the iterated-integral recursion up to series order `n`.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        let h = self.grid_step;
        let target_len = 2 * n + 2;
        let m = self.q0.len();
        let mut x_idx = self.x_at_one.len();
        while x_idx < target_len {
            // X-sequence: q_n = q₀ for even n, q₁ for odd n.
            let q = if (x_idx - 1) % 2 == 0 { &self.q0 } else { &self.q1 };
            let mut integrand = Vec::with_capacity(m);
            for (x, qv) in self.x_full.iter().zip(q) {
                integrand.push(x * qv);
            }
            let next = cumulative_integral(&integrand, h);
            self.x_at_one.push(*next.last().unwrap());
            self.x_sup.push(sup_norm(&next));
            self.x_full = next;
            x_idx += 1;
        }
        let mut xt_idx = self.xt_at_one.len();
        while xt_idx < target_len {
            // X̃-sequence: q̃_n = q₁ for even n, q₀ for odd n.
            let q = if (xt_idx - 1) % 2 == 0 { &self.q1 } else { &self.q0 };
            let mut integrand = Vec::with_capacity(m);
            for (x, qv) in self.xt_full.iter().zip(q) {
                integrand.push(x * qv);
            }
            let next = cumulative_integral(&integrand, h);
            self.xt_at_one.push(*next.last().unwrap());
            self.xt_sup.push(sup_norm(&next));
            self.xt_full = next;
            xt_idx += 1;
        }
        Ok(())
    }

    /// Uniform-convergence proxy: the order-N terms against the series
    /// magnitude over the grid, at offset radius `delta`.
    pub fn tail_ok(&self, delta: f64) -> bool {
        let n = self.order();
        let dn = delta.powi(n as i32);
        let mut mag_x: f64 = 1.0;
        let mut mag_xt: f64 = 1.0;
        let mut dk = 1.0;
        for k in 0..n {
            mag_x = mag_x.max(dk * self.x_sup[2 * k + 1]);
            mag_xt = mag_xt.max(dk * self.xt_sup[2 * k]);
            dk *= delta;
        }
        let tail_x = dn * self.x_sup[2 * n + 1];
        let tail_xt = dn * self.xt_sup[2 * n];
        tail_x <= self.tail_tol * mag_x && tail_xt <= self.tail_tol * mag_xt
    }

    fn tail_check(&self, delta: f64) -> Result<()> {
        if self.tail_ok(delta) {
            Ok(())
        } else {
            let n = self.order();
            Err(Error::TailTooLarge {
                order: n,
                tail: delta.powi(n as i32) * self.x_sup[2 * n + 1].max(self.xt_sup[2 * n]),
                budget: self.tail_tol,
            })
        }
    }

    /// Endpoint basis of the normalized solutions (z-plane 1-jets at the
    /// ray endpoint; the quotient y₂/y₁ is the mapping with jet (0,1,0)).
    pub fn eval_solutions(&self, lambda: f64) -> Result<OdeBasis> {
        let delta = lambda - self.lambda_inf;
        self.tail_check(delta.abs())?;
        let n = self.order();
        let q0_end = *self.q0.last().unwrap();
        let mut s1 = Complex64::default();
        let mut s1d = Complex64::default();
        let mut s2 = Complex64::default();
        let mut s2d = Complex64::default();
        let mut dk = 1.0;
        for k in 0..=n {
            s1 += dk * self.xt_at_one[2 * k];
            s2 += dk * self.x_at_one[2 * k + 1];
            if k > 0 {
                s1d += dk * self.xt_at_one[2 * k - 1] * q0_end;
            }
            s2d += dk * self.x_at_one[2 * k] * q0_end;
            dk *= delta;
        }
        let yv = self.yinf_end.value;
        let yd = self.yinf_end.deriv;
        // Ray-parameter jets of the two Prop-normalized solutions.
        let raw1 = Jet1::new(yv * s1, yd * s1 + yv * s1d);
        let raw2 = Jet1::new(yv * s2, yd * s2 + yv * s2d);
        // Normalize: seed jet is (1, 0), so y₁ = raw1 directly; y₂ must have
        // z-derivative 1 at the origin, i.e. ray derivative = direction.
        let dir = self.direction;
        let y1 = Jet1::new(raw1.value, raw1.deriv / dir);
        let y2 = Jet1::new(dir * raw2.value, raw2.deriv);
        let w = y1.value * y2.deriv - y2.value * y1.deriv;
        Ok(OdeBasis {
            at: dir,
            y1,
            y2,
            wronskian: w,
            drift: (w - c64(1.0, 0.0)).norm(),
        })
    }
}

/// β(λ), γ(λ), κ(λ) as evaluable functions built from the three ray tables.
pub struct LambdaFunctional {
    pub t: f64,
    pub domain: (f64, f64),
    to_one: SppsTable,
    to_i: SppsTable,
    to_minus_one: SppsTable,
}

/// Build the three tables at the region midpoint seed, doubling the order
/// until the tail criterion covers the admissible λ-interval.
pub fn lambda_functionals(t: f64, opts: &SppsOptions) -> Result<LambdaFunctional> {
    let (lo, hi) = lambda_bounds(t);
    let lambda_inf = 0.5 * (lo + hi);
    let halfwidth = 0.5 * (hi - lo);
    let mut tables = Vec::new();
    for ray in [Ray::ToOne, Ray::ToI, Ray::ToMinusOne] {
        let mut table = build_spps(t, ray, lambda_inf, opts)?;
        let mut order = opts.order;
        while !table.tail_ok(halfwidth) && order < opts.max_order {
            order = (order * 2).min(opts.max_order);
            table.extend_to(order)?;
        }
        table.tail_check(halfwidth)?;
        tables.push(table);
    }
    let to_minus_one = tables.pop().unwrap();
    let to_i = tables.pop().unwrap();
    let to_one = tables.pop().unwrap();
    Ok(LambdaFunctional {
        t,
        domain: (lo, hi),
        to_one,
        to_i,
        to_minus_one,
    })
}

impl LambdaFunctional {
    /// Endpoint 2-jets of the map at z = 1, i, −1.
    pub fn jets(&self, lambda: f64) -> Result<(Jet2, Jet2, Jet2)> {
        let j1 = jet_of_quotient(&self.to_one.eval_solutions(lambda)?)?;
        let ji = jet_of_quotient(&self.to_i.eval_solutions(lambda)?)?;
        let jm1 = jet_of_quotient(&self.to_minus_one.eval_solutions(lambda)?)?;
        Ok((j1, ji, jm1))
    }

    /// Tooth-edge curvature of the pregear as a function of λ.
    pub fn kappa(&self, lambda: f64) -> Result<f64> {
        let ji = jet_of_quotient(&self.to_i.eval_solutions(lambda)?)?;
        curvature_at(&ji, c64(0.0, 1.0))
    }

    /// Gear parameters through the normalization pipeline on series data.
    pub fn gear(&self, lambda: f64) -> Result<GearParams> {
        let (j1, ji, jm1) = self.jets(lambda)?;
        let geo = analyze_pregear_from_jets(&jm1, &j1, &ji)?;
        let (_t, g) = gear_normalize(&geo)?;
        Ok(g)
    }

    pub fn beta(&self, lambda: f64) -> Result<f64> {
        Ok(self.gear(lambda)?.beta)
    }

    pub fn gamma(&self, lambda: f64) -> Result<f64> {
        Ok(self.gear(lambda)?.gamma)
    }

    /// Alternative gear criterion using only the real-axis rays: the gap
    /// between the centers of the two non-tooth arc circles, which vanishes
    /// exactly when the pregear is a gear.
    pub fn center_gap(&self, lambda: f64) -> Result<f64> {
        let j1 = jet_of_quotient(&self.to_one.eval_solutions(lambda)?)?;
        let jm1 = jet_of_quotient(&self.to_minus_one.eval_solutions(lambda)?)?;
        let (c_in, c_out) = arc_centers(&jm1, &j1)?;
        Ok((c_in - c_out).re)
    }
}

/// Largest root of κ(λ) = target inside the admissible interval, found by a
/// descending scan (geometrically refined toward the upper end, where the
/// largest zero accumulates as t shrinks) and bisection.
pub fn solve_kappa_value(f: &LambdaFunctional, target: f64) -> Result<f64> {
    let (lo, hi) = f.domain;
    let width = hi - lo;
    // Offsets from the top: geometric down to 1e-9·width, then uniform.
    let mut offsets = Vec::new();
    let mut o = 1e-9 * width;
    while o < 0.25 * width {
        offsets.push(o);
        o *= 1.9;
    }
    let n = 180;
    for i in 0..n {
        offsets.push(width * (0.25 + 0.75 * i as f64 / n as f64));
    }
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for ofs in offsets {
        let lambda = hi - ofs;
        if lambda <= lo + 1e-9 * width {
            break;
        }
        match f.kappa(lambda) {
            Ok(k) => {
                let v = k - target;
                if let Some((pl, pv)) = prev {
                    if pv * v < 0.0 {
                        bracket = Some((lambda, v, pl, pv));
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
    let (mut a, mut fa, mut b, _) = bracket.ok_or_else(|| Error::NoRoot {
        detail: format!("kappa(λ) = {target} has no sign change in ({lo}, {hi})"),
    })?;
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = f.kappa(mid)? - target;
        if fm == 0.0 || (b - a).abs() < 1e-13 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Largest λ with κ(λ) = 0 (straight tooth edges).
pub fn solve_kappa_zero(f: &LambdaFunctional) -> Result<f64> {
    solve_kappa_value(f, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geartools::DiskMap;
    use crate::schwarzian::MapParams;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn classical_power_series_hook() {
        // ψ₀ = 0, ψ₁ = 1, λ∞ = 0: series sum to cosh(√λ r), sinh(√λ r)/√λ.
        let opts = SppsOptions {
            order: 24,
            grid: 512,
            ..SppsOptions::default()
        };
        let table = build_spps_custom(
            &|_r| Ok(c64(0.0, 0.0)),
            &|_r| Ok(c64(1.0, 0.0)),
            0.0,
            c64(1.0, 0.0),
            &opts,
        )
        .unwrap();
        // X^{(2k+1)}(1) = 1/(2k+1)!, X̃^{(2k)}(1) = 1/(2k)!.
        let mut factorial = 1.0;
        for n in 0..=9 {
            if n > 0 {
                factorial *= n as f64;
            }
            let x = table.x_at_one[n];
            let xt = table.xt_at_one[n];
            if n % 2 == 1 {
                assert!((x - c64(1.0 / factorial, 0.0)).norm() < 1e-12, "X^{n}");
            } else {
                assert!((xt - c64(1.0 / factorial, 0.0)).norm() < 1e-12, "X̃^{n}");
            }
        }
        // At λ = 1, r = 1: y₁ = cosh 1.
        let basis = table.eval_solutions(1.0).unwrap();
        assert!((basis.y1.value - c64(1.0_f64.cosh(), 0.0)).norm() < 1e-10);
        assert!((basis.y2.value - c64(1.0_f64.sinh(), 0.0)).norm() < 1e-10);
        // At λ = λ∞ the series truncates to the seed.
        let basis0 = table.eval_solutions(0.0).unwrap();
        assert!((basis0.y1.value - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wronskian_constancy_across_lambda() {
        let opts = SppsOptions {
            order: 40,
            grid: 1024,
            ..SppsOptions::default()
        };
        let (lo, hi) = lambda_bounds(FRAC_PI_4);
        let mid = 0.5 * (lo + hi);
        let table = build_spps(FRAC_PI_4, Ray::ToI, mid, &opts).unwrap();
        for lambda in [mid, mid + 0.05, mid - 0.1] {
            let b = table.eval_solutions(lambda).unwrap();
            assert!(
                (b.wronskian - c64(1.0, 0.0)).norm() < 1e-9,
                "wronskian at λ = {lambda}: {}",
                b.wronskian
            );
        }
    }

    #[test]
    fn spps_matches_direct_integration() {
        let t = FRAC_PI_4;
        let opts = SppsOptions {
            order: 50,
            grid: 2000,
            ..SppsOptions::default()
        };
        let (lo, hi) = lambda_bounds(t);
        let mid = 0.5 * (lo + hi);
        let table = build_spps(t, Ray::ToI, mid, &opts).unwrap();
        for lambda in [0.05, mid, -0.2] {
            let spps_jet = jet_of_quotient(&table.eval_solutions(lambda).unwrap()).unwrap();
            let map = DiskMap::symmetric(MapParams::new(t, lambda).unwrap(), 1e-12);
            let ode_jet = map.jet_at(c64(0.0, 1.0)).unwrap();
            assert!(
                (spps_jet.value - ode_jet.value).norm() < 1e-8
                    && (spps_jet.d1 - ode_jet.d1).norm() < 1e-8
                    && (spps_jet.d2 - ode_jet.d2).norm() < 1e-7,
                "λ = {lambda}: spps {spps_jet:?} vs ode {ode_jet:?}"
            );
        }
    }

    #[test]
    fn vanishing_seed_rejected() {
        // y″ + π²y = 0 with jet (1, 0): the seed cos(πr) vanishes at r = ½.
        let opts = SppsOptions {
            order: 8,
            grid: 256,
            ..SppsOptions::default()
        };
        let err = build_spps_custom(
            &|_r| Ok(c64(std::f64::consts::PI.powi(2) / 2.0, 0.0) * 2.0),
            &|_r| Ok(c64(1.0, 0.0)),
            0.0,
            c64(1.0, 0.0),
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, crate::error::Error::SeedVanishes { .. }), "{err}");
    }

    #[test]
    fn far_lambda_tail_rejected() {
        // A low-order table must refuse λ far outside its validated range.
        let opts = SppsOptions {
            order: 6,
            grid: 256,
            ..SppsOptions::default()
        };
        let table = build_spps_custom(
            &|_r| Ok(c64(0.0, 0.0)),
            &|_r| Ok(c64(1.0, 0.0)),
            0.0,
            c64(1.0, 0.0),
            &opts,
        )
        .unwrap();
        assert!(table.eval_solutions(0.1).is_ok());
        let err = table.eval_solutions(40.0).unwrap_err();
        assert!(matches!(err, crate::error::Error::TailTooLarge { .. }), "{err}");
    }

    #[test]
    fn small_t_rejected_at_defaults() {
        // Below t ≈ 0.05 the default grid cannot resolve the coefficient
        // spike near r = 1; the build must fail loudly, not return wrong
        // values.
        let opts = SppsOptions::default();
        let t = 0.04;
        let (lo, hi) = lambda_bounds(t);
        let mid = 0.5 * (lo + hi);
        assert!(build_spps(t, Ray::ToOne, mid, &opts).is_err());
        let t = 0.06;
        let (lo, hi) = lambda_bounds(t);
        let mid = 0.5 * (lo + hi);
        assert!(build_spps(t, Ray::ToOne, mid, &opts).is_ok());
    }

    #[test]
    fn functionals_have_kappa_zero() {
        // Zeros of κ(λ) exist for t/π ∈ {0.1, 0.2, 0.3, 0.4}.
        for frac in [0.1, 0.2, 0.3, 0.4] {
            let t = frac * std::f64::consts::PI;
            let f = lambda_functionals(t, &SppsOptions::default()).unwrap();
            let root = solve_kappa_zero(&f).unwrap();
            let (lo, hi) = f.domain;
            assert!(root > lo && root < hi, "root {root} outside ({lo}, {hi})");
            assert!(f.kappa(root).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn center_gap_vanishes_at_kappa_zero() {
        let t = 0.7;
        let f = lambda_functionals(t, &SppsOptions::default()).unwrap();
        let root = solve_kappa_zero(&f).unwrap();
        let gap = f.center_gap(root).unwrap();
        let generic = f.center_gap(root - 0.08).unwrap();
        assert!(gap.abs() < 1e-7, "center gap at κ-zero: {gap:e}");
        assert!(generic.abs() > 1e-3, "generic gap should not vanish: {generic:e}");
    }
}
