//! Rectangle-side mapping: the Schwarzian φ_{τ,μ}, the corner-jet
//! integration scheme, the α-quadratic gear condition, mesh mapping, and
//! the exterior modulus of an annular rectangle.
//!
//! The rectangle R₀ has half-width ω₁/2 and half-height Im ω₂/2; φ has
//! double poles at its two left vertices. Everything here is computed from
//! two integrations on the real axis and vertical integrations seeded from
//! stored real-axis values.

use num_complex::Complex64;

use crate::elliptic::{lattice_from_tau, module_m, wp, PeriodLattice};
use crate::error::{Error, Result};
use crate::geartools::GearParams;
use crate::jet::{Jet1, Jet2};
use crate::ode::{integrate_basis, integrate_with_captures, OdeBasis, PathSpec};
use crate::solver::{invert, InvertOptions};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Rectangle-side accessory parameters: purely imaginary period ratio τ and
/// the real constant μ.
#[derive(Clone, Copy, Debug)]
pub struct RectParams {
    pub tau: Complex64,
    pub mu: f64,
}

impl RectParams {
    pub fn new(tau: Complex64, mu: f64) -> Result<Self> {
        if tau.re.abs() > 1e-12 || tau.im <= 0.0 {
            return Err(Error::InvalidInput {
                detail: format!("period ratio must be purely imaginary, got {tau}"),
            });
        }
        Ok(RectParams { tau, mu })
    }
}

/// μ corresponding to disk-side parameters: μ = 16λ·cos t + (3 + cos 2t)/6.
pub fn mu_from_lambda(t: f64, lambda: f64) -> f64 {
    16.0 * lambda * t.cos() + (3.0 + (2.0 * t).cos()) / 6.0
}

/// φ_{τ,μ}(ζ) = −4(℘(ζ + ω₃/2) + ℘(ζ + (ω₁ − ω₂)/2)) + 4μ.
pub fn phi(params: &RectParams, lat: &PeriodLattice, zeta: Complex64) -> Result<Complex64> {
    let a = zeta + lat.omega3 / 2.0;
    let b = zeta + (c64(lat.omega1, 0.0) - lat.omega2) / 2.0;
    let pa = wp(a, lat).map_err(|_| Error::PoleAtVertex { zeta })?;
    let pb = wp(b, lat).map_err(|_| Error::PoleAtVertex { zeta })?;
    Ok(-4.0 * (pa + pb) + 4.0 * params.mu)
}

/// The eight real scalars of the two-leg integration and the assembled
/// complex 1-jets of y₁, y₂ at the upper-right vertex ω₃/2.
#[derive(Clone, Copy, Debug)]
pub struct CornerJets {
    pub b1: f64,
    pub b1p: f64,
    pub b2: f64,
    pub b2p: f64,
    pub c1: f64,
    pub c1p: f64,
    pub c2: f64,
    pub c2p: f64,
    pub y1: Jet1,
    pub y2: Jet1,
}

impl CornerJets {
    pub fn wronskian(&self) -> Complex64 {
        self.y1.value * self.y2.deriv - self.y2.value * self.y1.deriv
    }
}

/// Integrate 2y″ + φy = 0 on [0, ω₁/2] (real arithmetic), then the
/// substituted equation 2u″ − φ(ω₁/2 + is)u = 0 up the right edge, and
/// assemble J_{y₁}, J_{y₂} at ω₃/2.
pub fn corner_jets(params: &RectParams, lat: &PeriodLattice, tol: f64) -> Result<CornerJets> {
    let p = *params;
    let l = lat.clone();
    let real_coeff = move |z: Complex64| phi(&p, &l, c64(z.re, 0.0));
    let leg1 = integrate_basis(
        &real_coeff,
        PathSpec::new(c64(0.0, 0.0), c64(lat.omega1 / 2.0, 0.0))?,
        Jet1::new(1.0, 0.0),
        Jet1::new(0.0, 1.0),
        tol,
    )?;
    let imag_tol = 1e-9;
    for v in [leg1.y1.value, leg1.y1.deriv, leg1.y2.value, leg1.y2.deriv] {
        if v.im.abs() > imag_tol * (1.0 + v.norm()) {
            return Err(Error::ToleranceNotMet {
                detail: format!("real-leg value has spurious imaginary part: {v}"),
            });
        }
    }
    let (b1, b1p) = (leg1.y1.value.re, leg1.y1.deriv.re);
    let (b2, b2p) = (leg1.y2.value.re, leg1.y2.deriv.re);

    let p = *params;
    let l = lat.clone();
    let x0 = lat.omega1 / 2.0;
    let edge_coeff = move |z: Complex64| -> Result<Complex64> {
        Ok(-phi(&p, &l, c64(x0, z.re))?)
    };
    let leg2 = integrate_basis(
        &edge_coeff,
        PathSpec::new(c64(0.0, 0.0), c64(lat.omega2_im() / 2.0, 0.0))?,
        Jet1::new(1.0, 0.0),
        Jet1::new(0.0, 1.0),
        tol,
    )?;
    for v in [leg2.y1.value, leg2.y1.deriv, leg2.y2.value, leg2.y2.deriv] {
        if v.im.abs() > imag_tol * (1.0 + v.norm()) {
            return Err(Error::ToleranceNotMet {
                detail: format!("edge-leg value has spurious imaginary part: {v}"),
            });
        }
    }
    let (c1, c1p) = (leg2.y1.value.re, leg2.y1.deriv.re);
    let (c2, c2p) = (leg2.y2.value.re, leg2.y2.deriv.re);

    // y(ω₁/2 + is) = y(ω₁/2)·u₁(s) + i·y′(ω₁/2)·u₂(s).
    let y1 = Jet1::new(
        c64(b1 * c1, b1p * c2),
        c64(b1p * c2p, -b1 * c1p),
    );
    let y2 = Jet1::new(
        c64(b2 * c1, b2p * c2),
        c64(b2p * c2p, -b2 * c1p),
    );
    Ok(CornerJets {
        b1,
        b1p,
        b2,
        b2p,
        c1,
        c1p,
        c2,
        c2p,
        y1,
        y2,
    })
}

/// Real roots of the gear condition quadratic
/// (Im y₂ȳ₂′)α² + (Im(y₁ȳ₂′ + y₂ȳ₁′))α + Im y₁ȳ₁′ = 0 at ω₃/2.
#[derive(Clone, Copy, Debug)]
pub struct AlphaRoots {
    pub roots: [f64; 2],
    pub degenerate_discriminant: bool,
}

pub fn alpha_roots(jets: &CornerJets) -> Result<AlphaRoots> {
    let y1 = jets.y1.value;
    let y1p = jets.y1.deriv;
    let y2 = jets.y2.value;
    let y2p = jets.y2.deriv;
    let a = (y2 * y2p.conj()).im;
    let b = (y1 * y2p.conj() + y2 * y1p.conj()).im;
    let c = (y1 * y1p.conj()).im;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if a.abs() < 1e-14 * scale {
        if b.abs() < 1e-14 * scale {
            return Err(Error::NoRealRoots { disc: 0.0 });
        }
        let r = -c / b;
        return Ok(AlphaRoots {
            roots: [r, r],
            degenerate_discriminant: true,
        });
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoRealRoots { disc });
    }
    if disc == 0.0 || disc < 1e-14 * b * b {
        let r = -b / (2.0 * a);
        return Ok(AlphaRoots {
            roots: [r, r],
            degenerate_discriminant: true,
        });
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = [q / a, c / q];
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(AlphaRoots {
        roots,
        degenerate_discriminant: false,
    })
}

/// The rectangle-side mapping g = y₂/(y₁ + αy₂) with g(0) = 0, g′(0) = 1.
#[derive(Clone)]
pub struct RectMap {
    pub params: RectParams,
    pub lattice: PeriodLattice,
    pub alpha: f64,
    pub tol: f64,
}

impl RectMap {
    pub fn new(params: RectParams, lattice: PeriodLattice, alpha: f64, tol: f64) -> Self {
        RectMap {
            params,
            lattice,
            alpha,
            tol,
        }
    }

    /// Half-extent of R₀: (ω₁/2, Im ω₂/2).
    pub fn half_extent(&self) -> (f64, f64) {
        (self.lattice.omega1 / 2.0, self.lattice.omega2_im() / 2.0)
    }

    /// Basis (y₁, y₂) along the real axis at the requested x ∈ [−ω₁/2, ω₁/2],
    /// derivatives in the ζ-plane.
    fn real_axis_bases(&self, xs: &[f64]) -> Result<Vec<OdeBasis>> {
        let mut out: Vec<(f64, OdeBasis)> = Vec::with_capacity(xs.len());
        let origin_basis = OdeBasis {
            at: c64(0.0, 0.0),
            y1: Jet1::new(1.0, 0.0),
            y2: Jet1::new(0.0, 1.0),
            wronskian: c64(1.0, 0.0),
            drift: 0.0,
        };
        for sign in [1.0_f64, -1.0] {
            let mut side: Vec<f64> = xs
                .iter()
                .copied()
                .filter(|&x| if sign > 0.0 { x > 0.0 } else { x < 0.0 })
                .map(|x| x.abs())
                .collect();
            side.sort_by(|a, b| a.partial_cmp(b).unwrap());
            side.dedup();
            if side.is_empty() {
                continue;
            }
            let extent = *side.last().unwrap();
            let fracs: Vec<f64> = side.iter().map(|x| x / extent).collect();
            let p = self.params;
            let l = self.lattice.clone();
            let coeff = move |z: Complex64| phi(&p, &l, c64(z.re, 0.0));
            let bases = integrate_with_captures(
                &coeff,
                PathSpec::new(c64(0.0, 0.0), c64(sign * extent, 0.0))?,
                Jet1::new(1.0, 0.0),
                Jet1::new(0.0, 1.0),
                self.tol,
                &fracs,
            )?;
            for b in bases.iter().take(side.len()) {
                out.push((b.at.re, *b));
            }
        }
        let mut res = Vec::with_capacity(xs.len());
        for &x in xs {
            if x == 0.0 {
                res.push(origin_basis);
            } else {
                let found = out
                    .iter()
                    .min_by(|a, b| {
                        ((a.0 - x).abs())
                            .partial_cmp(&(b.0 - x).abs())
                            .unwrap()
                    })
                    .expect("basis present");
                res.push(found.1);
            }
        }
        Ok(res)
    }

    /// Basis at an arbitrary point via the two-leg path 0 → Re ζ → ζ, with
    /// the vertical leg in the substituted real parameter.
    pub fn basis_at(&self, zeta: Complex64) -> Result<OdeBasis> {
        let x = zeta.re;
        let base = self.real_axis_bases(&[x])?.pop().expect("one basis");
        if zeta.im == 0.0 {
            return Ok(base);
        }
        let p = self.params;
        let l = self.lattice.clone();
        let coeff = move |z: Complex64| -> Result<Complex64> { Ok(-phi(&p, &l, c64(x, z.re))?) };
        // ζ-derivative → s-derivative: d/ds = i·d/dζ.
        let i = c64(0.0, 1.0);
        let up = integrate_basis(
            &coeff,
            PathSpec::new(c64(0.0, 0.0), c64(zeta.im, 0.0))?,
            Jet1::new(base.y1.value, i * base.y1.deriv),
            Jet1::new(base.y2.value, i * base.y2.deriv),
            self.tol,
        )?;
        Ok(OdeBasis {
            at: zeta,
            y1: Jet1::new(up.y1.value, -i * up.y1.deriv),
            y2: Jet1::new(up.y2.value, -i * up.y2.deriv),
            wronskian: base.wronskian,
            drift: base.drift.max(up.drift),
        })
    }

    /// 2-jet of g at ζ.
    pub fn jet_at(&self, zeta: Complex64) -> Result<Jet2> {
        let b = self.basis_at(zeta)?;
        self.jet_from_basis(&b)
    }

    fn jet_from_basis(&self, b: &OdeBasis) -> Result<Jet2> {
        let den = Jet1::new(
            b.y1.value + self.alpha * b.y2.value,
            b.y1.deriv + self.alpha * b.y2.deriv,
        );
        if den.value.norm() < 1e-12 {
            return Err(Error::DivisionByZeroSolution { at: b.at });
        }
        // Wronskian of (y₁ + αy₂, y₂) equals that of (y₁, y₂), which is 1.
        let w = den.value * b.y2.deriv - b.y2.value * den.deriv;
        Ok(Jet2 {
            value: b.y2.value / den.value,
            d1: w / (den.value * den.value),
            d2: -2.0 * w * den.deriv / (den.value * den.value * den.value),
        })
    }

    pub fn value_at(&self, zeta: Complex64) -> Result<Complex64> {
        Ok(self.jet_at(zeta)?.value)
    }

    /// Number of poles of g inside R₀ (zeros of y₁ + αy₂), counted by the
    /// argument principle on a slightly inset boundary loop.
    pub fn pole_count(&self) -> Result<usize> {
        let (hw, hh) = self.half_extent();
        let inset = 0.98;
        let (bw, bh) = (hw * inset, hh * inset);
        let n = 48usize;
        let mut samples: Vec<Complex64> = Vec::with_capacity(4 * n);
        // Counterclockwise inset rectangle.
        for k in 0..n {
            let s = k as f64 / n as f64;
            samples.push(c64(-bw + 2.0 * bw * s, -bh));
        }
        for k in 0..n {
            let s = k as f64 / n as f64;
            samples.push(c64(bw, -bh + 2.0 * bh * s));
        }
        for k in 0..n {
            let s = k as f64 / n as f64;
            samples.push(c64(bw - 2.0 * bw * s, bh));
        }
        for k in 0..n {
            let s = k as f64 / n as f64;
            samples.push(c64(-bw, bh - 2.0 * bh * s));
        }
        let xs: Vec<f64> = samples.iter().map(|z| z.re).collect();
        let bases = self.real_axis_bases(&xs)?;
        let i_unit = c64(0.0, 1.0);
        let mut winding = 0.0;
        let mut prev: Option<Complex64> = None;
        let mut first: Option<Complex64> = None;
        for (zeta, base) in samples.iter().zip(&bases) {
            let y1 = if zeta.im == 0.0 {
                base.y1.value + self.alpha * base.y2.value
            } else {
                let x = zeta.re;
                let p = self.params;
                let l = self.lattice.clone();
                let sign = zeta.im.signum();
                let coeff = move |z: Complex64| -> Result<Complex64> {
                    Ok(-phi(&p, &l, c64(x, sign * z.re))?)
                };
                let leg = integrate_basis(
                    &coeff,
                    PathSpec::new(c64(0.0, 0.0), c64(zeta.im.abs(), 0.0))?,
                    Jet1::new(base.y1.value, sign * i_unit * base.y1.deriv),
                    Jet1::new(base.y2.value, sign * i_unit * base.y2.deriv),
                    self.tol,
                )?;
                leg.y1.value + self.alpha * leg.y2.value
            };
            if let Some(p) = prev {
                winding += (y1 / p).arg();
            } else {
                first = Some(y1);
            }
            prev = Some(y1);
        }
        if let (Some(p), Some(f)) = (prev, first) {
            winding += (f / p).arg();
        }
        let turns = winding / (2.0 * std::f64::consts::PI);
        Ok(turns.round().max(0.0) as usize)
    }

    /// True when the image of the chosen branch is bounded: g has no pole
    /// inside R₀.
    pub fn is_bounded(&self) -> Result<bool> {
        Ok(self.pole_count()? == 0)
    }
}

/// Mesh-line images of R₀ under g.
#[derive(Clone, Debug)]
pub struct RectCurves {
    /// Images of vertical mesh lines, left to right.
    pub vertical: Vec<Vec<Complex64>>,
    /// Images of horizontal mesh lines, bottom to top.
    pub horizontal: Vec<Vec<Complex64>>,
    /// Images of the four boundary edges.
    pub tooth_upper: Vec<Complex64>,
    pub tooth_lower: Vec<Complex64>,
    pub inner_arc: Vec<Complex64>,
    pub outer_arc: Vec<Complex64>,
}

/// Image polylines of the mesh of R₀: `grid_w` vertical and `grid_h`
/// horizontal lines, plus the boundary edges. Vertical integrations are
/// seeded from stored real-axis values.
pub fn map_rectangle(map: &RectMap, grid_w: usize, grid_h: usize) -> Result<RectCurves> {
    let (hw, hh) = map.half_extent();
    let refine = 4;
    let nx = refine * (grid_w.max(2) - 1) + 1;
    let ns = refine * (grid_h.max(2) - 1) + 1;
    // Keep clear of the double poles at the left vertices; integrating much
    // closer inflates the Wronskian drift beyond its budget.
    let corner_inset = 1e-2;
    let xs: Vec<f64> = (0..nx)
        .map(|i| -hw + 2.0 * hw * i as f64 / (nx - 1) as f64)
        .collect();
    let s_top = hh;
    let ss: Vec<f64> = (0..ns)
        .map(|j| -s_top + 2.0 * s_top * j as f64 / (ns - 1) as f64)
        .collect();
    let bases = map.real_axis_bases(&xs)?;
    // field[i][j] = g(x_i + i·s_j)
    let mut field = vec![vec![Complex64::default(); ns]; nx];
    let i_unit = c64(0.0, 1.0);
    for (ix, (&x, base)) in xs.iter().zip(&bases).enumerate() {
        // Cap the vertical run short of the top/bottom poles near the left
        // corners.
        let near_left = (x + hw).abs() < corner_inset * hw;
        let cap = if near_left { s_top * (1.0 - corner_inset) } else { s_top };
        for sign in [1.0_f64, -1.0] {
            let levels: Vec<f64> = ss
                .iter()
                .copied()
                .filter(|&s| if sign > 0.0 { s > 0.0 } else { s < 0.0 })
                .map(|s| s.abs().min(cap))
                .collect();
            let mut sorted = levels.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sorted.dedup();
            if sorted.is_empty() {
                continue;
            }
            let extent = *sorted.last().unwrap();
            let fracs: Vec<f64> = sorted.iter().map(|s| s / extent).collect();
            let p = map.params;
            let l = map.lattice.clone();
            let coeff = move |z: Complex64| -> Result<Complex64> {
                Ok(-phi(&p, &l, c64(x, sign * z.re))?)
            };
            let legs = integrate_with_captures(
                &coeff,
                PathSpec::new(c64(0.0, 0.0), c64(extent, 0.0))?,
                Jet1::new(base.y1.value, sign * i_unit * base.y1.deriv),
                Jet1::new(base.y2.value, sign * i_unit * base.y2.deriv),
                map.tol,
                &fracs,
            )?;
            for (s_abs, leg) in sorted.iter().zip(legs.iter()) {
                let den = leg.y1.value + map.alpha * leg.y2.value;
                let g = leg.y2.value / den;
                for (j, &s) in ss.iter().enumerate() {
                    if (s.abs().min(cap) - s_abs).abs() < 1e-14 && s.signum() == sign {
                        field[ix][j] = g;
                    }
                }
            }
        }
        // s = 0 row.
        let den = base.y1.value + map.alpha * base.y2.value;
        let mid = base.y2.value / den;
        for (j, &s) in ss.iter().enumerate() {
            if s == 0.0 {
                field[ix][j] = mid;
            }
        }
    }
    let stride = refine;
    let vertical: Vec<Vec<Complex64>> = (0..nx)
        .step_by(stride)
        .map(|ix| field[ix].clone())
        .collect();
    let horizontal: Vec<Vec<Complex64>> = (0..ns)
        .step_by(stride)
        .map(|j| (0..nx).map(|ix| field[ix][j]).collect())
        .collect();
    let tooth_upper: Vec<Complex64> = (0..nx)
        .filter(|&ix| (xs[ix] + hw).abs() >= corner_inset * hw)
        .map(|ix| field[ix][ns - 1])
        .collect();
    let tooth_lower: Vec<Complex64> = (0..nx)
        .filter(|&ix| (xs[ix] + hw).abs() >= corner_inset * hw)
        .map(|ix| field[ix][0])
        .collect();
    let inner_arc: Vec<Complex64> = field[0].clone();
    let outer_arc: Vec<Complex64> = field[nx - 1].clone();
    Ok(RectCurves {
        vertical,
        horizontal,
        tooth_upper,
        tooth_lower,
        inner_arc,
        outer_arc,
    })
}

/// Signed curvature of a parametrized image curve x ↦ g(ζ(x)) from the jet
/// of g and the (unit-speed in ζ) parameter direction `dir`:
/// κ = Im(w″·conj(w′))/|w′|³ with w′ = g′·dir, w″ = g″·dir².
pub fn parametric_curvature(jet: &Jet2, dir: Complex64) -> Result<f64> {
    let w1 = jet.d1 * dir;
    let w2 = jet.d2 * dir * dir;
    if w1.norm() < 1e-14 {
        return Err(Error::ZeroDerivative);
    }
    Ok((w2 * w1.conj()).im / w1.norm().powi(3))
}

/// Measured gear data of the rectangle-side image: parameters, the gear
/// center, and the inner radius.
#[derive(Clone, Copy, Debug)]
pub struct RectGearMeasurement {
    pub gear: GearParams,
    pub center: Complex64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

/// Measure (β, γ) of the gear image of g, together with the center and
/// radii, from jets at the three edge midpoints.
pub fn measure_rect_gear(map: &RectMap) -> Result<RectGearMeasurement> {
    let (hw, hh) = map.half_extent();
    let j_in = map.jet_at(c64(-hw, 0.0))?;
    let j_out = map.jet_at(c64(hw, 0.0))?;
    let j_tooth = map.jet_at(c64(0.0, hh))?;
    // Left edge parametrized by s (ζ = −hw + is): direction i.
    let i_unit = c64(0.0, 1.0);
    let k_in = parametric_curvature(&j_in, i_unit)?;
    let k_out = parametric_curvature(&j_out, i_unit)?;
    let center_in = {
        let w1 = j_in.d1 * i_unit;
        j_in.value + i_unit * w1 / w1.norm() / k_in
    };
    let center_out = {
        let w1 = j_out.d1 * i_unit;
        j_out.value + i_unit * w1 / w1.norm() / k_out
    };
    let gap = (center_in - center_out).norm();
    let r_in = (j_in.value - center_in).norm();
    let r_out = (j_out.value - center_out).norm();
    if gap > 1e-5 * (r_in + r_out) {
        return Err(Error::NotAPregear {
            detail: format!("non-tooth arcs not concentric: centers {center_in} vs {center_out}"),
        });
    }
    let center = (center_in + center_out) / 2.0;
    if center.im.abs() > 1e-7 * (1.0 + center.norm()) {
        return Err(Error::NotAPregear {
            detail: format!("gear center off the real axis: {center}"),
        });
    }
    let beta = r_out / r_in;
    let gamma = (j_tooth.value - center).arg();
    if !(beta > 1.0) || !(gamma > 0.0 && gamma < std::f64::consts::PI) {
        return Err(Error::NotAPregear {
            detail: format!("measured rect-side parameters out of range: {beta}, {gamma}"),
        });
    }
    Ok(RectGearMeasurement {
        gear: GearParams { beta, gamma },
        center,
        inner_radius: r_in,
        outer_radius: r_out,
    })
}

/// Distance from a point to the boundary of the annular rectangle with
/// inner radius 1, outer radius β², and angular gap 2(π − γ) (the slot is
/// centered on the positive real axis between angles ±γ).
pub fn annular_rectangle_boundary_distance(w: Complex64, beta: f64, gamma: f64) -> f64 {
    let r = w.norm();
    let theta = w.arg();
    let b2 = beta * beta;
    let arc_dist = |radius: f64| -> f64 {
        if theta.abs() >= gamma {
            (r - radius).abs()
        } else {
            let e = Complex64::from_polar(radius, gamma);
            (w - e).norm().min((w - e.conj()).norm())
        }
    };
    let seg_dist = |angle: f64| -> f64 {
        let a = Complex64::from_polar(1.0, angle);
        let b = Complex64::from_polar(b2, angle);
        let ab = b - a;
        let s = ((w - a).re * ab.re + (w - a).im * ab.im) / ab.norm_sqr();
        let s = s.clamp(0.0, 1.0);
        (w - (a + ab * s)).norm()
    };
    arc_dist(1.0)
        .min(arc_dist(b2))
        .min(seg_dist(gamma))
        .min(seg_dist(-gamma))
}

/// Conformal module of the exterior of the annular rectangle A_{β,γ}:
/// half the module of the gear domain with the same parameters.
pub fn exterior_modulus_annular_rectangle(
    beta: f64,
    gamma: f64,
    opts: &InvertOptions,
) -> Result<f64> {
    let target = GearParams::new(beta, gamma)?;
    let params = invert(&target, None, opts)?;
    Ok(module_m(params.t)? / 2.0)
}

/// Convenience: lattice and rectangle parameters matching disk-side (t, λ).
pub fn rect_params_from_disk(t: f64, lambda: f64) -> Result<(RectParams, PeriodLattice)> {
    let m = module_m(t)?;
    let lat = lattice_from_tau(c64(0.0, m))?;
    let params = RectParams::new(c64(0.0, m), mu_from_lambda(t, lambda))?;
    Ok((params, lat))
}
