//! Geometric post-processing: curvature extraction, pregear → gear
//! normalization, gear-parameter measurement, boundary tracing, gear-center
//! repositioning and multitooth synthesis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{compose_jet2, Jet1, Jet2};
use crate::mobius::{InteriorPoint, MobiusMap};
use crate::ode::{integrate_basis, integrate_observing, integrate_with_captures, jet_of_quotient, OdeBasis, PathSpec};
use crate::schwarzian::{MapParams, Schwarzian};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gear ratio β > 1 and gear angle γ ∈ (0, π).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GearParams {
    pub beta: f64,
    pub gamma: f64,
}

impl GearParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 1.0) || !(gamma > 0.0 && gamma < std::f64::consts::PI) {
            return Err(Error::InvalidInput {
                detail: format!("gear parameters out of range: beta = {beta}, gamma = {gamma}"),
            });
        }
        Ok(GearParams { beta, gamma })
    }
}

/// Data measured at an interior point of the upper tooth edge.
#[derive(Clone, Copy, Debug)]
pub struct ToothProbe {
    /// Image point p on the tooth edge.
    pub point: Complex64,
    /// Unit normal at p pointing into the domain.
    pub inward_normal: Complex64,
    /// Signed curvature: positive when the edge circle's center lies on the
    /// inward-normal side, so the center is p + (1/κ)·normal.
    pub curvature: f64,
}

/// Tooth-circle data, or the degenerate case of already-straight edges.
#[derive(Clone, Copy, Debug)]
pub enum ToothShape {
    Curved {
        /// Common radius of the tooth-edge circles.
        rho: f64,
        /// Center of the upper tooth circle.
        center: Complex64,
        /// Half-distance between the circle intersection points.
        d: f64,
        b_minus: f64,
        b_plus: f64,
        /// Which intersection point lies inside the pregear.
        interior: InteriorPoint,
    },
    /// Tooth edges straight within tolerance: the domain is already a gear
    /// whose center is the tooth-line intercept with ℝ.
    Straight { center: f64 },
}

/// The full pregear data extracted from boundary jets.
#[derive(Clone, Copy, Debug)]
pub struct PregearGeometry {
    /// Leftmost point of the real section, the midpoint of the inner arc.
    pub p_minus1: f64,
    /// Rightmost point of the real section, the midpoint of the outer arc.
    pub p_1: f64,
    pub probe: ToothProbe,
    pub shape: ToothShape,
}

impl PregearGeometry {
    /// The point of the pregear that the normalization sends to the origin
    /// (the preimage of the gear center).
    pub fn gear_center_preimage(&self) -> f64 {
        match self.shape {
            ToothShape::Curved { b_minus, b_plus, interior, .. } => match interior {
                InteriorPoint::BMinus => b_minus,
                InteriorPoint::BPlus => b_plus,
            },
            ToothShape::Straight { center } => center,
        }
    }
}

/// Curvature threshold below which tooth edges count as straight.
pub const KAPPA_STRAIGHT: f64 = 1e-9;

/// Signed curvature of the boundary image near z₀ on the unit circle:
/// κ = Re(1 + z₀·f″/f′)/|f′|, positive when the circle center lies on the
/// side of the inward normal −z₀f′/|f′| (i.e. center = f(z₀) + (1/κ)·n).
pub fn curvature_at(jet: &Jet2, z0: Complex64) -> Result<f64> {
    if jet.d1.norm() < 1e-14 {
        return Err(Error::ZeroDerivative);
    }
    let ratio = z0 * jet.d2 / jet.d1;
    Ok((1.0 + ratio.re) / jet.d1.norm())
}

/// Centers of the circles carrying the non-tooth edges, from the jets at
/// z = −1 and z = 1: c = f(±1) + (1/κ)·inward normal. They coincide exactly
/// when the domain is a gear.
pub fn arc_centers(jet_m1: &Jet2, jet_1: &Jet2) -> Result<(Complex64, Complex64)> {
    let km1 = curvature_at(jet_m1, c64(-1.0, 0.0))?;
    let k1 = curvature_at(jet_1, c64(1.0, 0.0))?;
    // Inward normals: at z = −1 the domain lies toward +f′(−1)/|f′|, at
    // z = 1 toward −f′(1)/|f′|.
    let n_m1 = jet_m1.d1 / jet_m1.d1.norm();
    let n_1 = -jet_1.d1 / jet_1.d1.norm();
    Ok((jet_m1.value + n_m1 / km1, jet_1.value + n_1 / k1))
}

/// Extract the pregear data from boundary jets at z = −1, 1 and a probe
/// point z0 on the unit circle interior to the upper tooth edge's arc.
pub fn analyze_pregear_at(
    jet_m1: &Jet2,
    jet_1: &Jet2,
    jet_probe: &Jet2,
    z0: Complex64,
) -> Result<PregearGeometry> {
    let p_m1 = jet_m1.value;
    let p_1 = jet_1.value;
    let sym_tol = 1e-7 * (1.0 + p_1.norm() + p_m1.norm());
    if p_m1.im.abs() > sym_tol || p_1.im.abs() > sym_tol {
        return Err(Error::NotAPregear {
            detail: format!("real-axis endpoints not real: f(-1) = {p_m1}, f(1) = {p_1}"),
        });
    }
    let (p_m1, p_1) = (p_m1.re, p_1.re);
    if !(p_m1 < p_1) {
        return Err(Error::NotAPregear {
            detail: "real section is degenerate".into(),
        });
    }
    let jet_i = jet_probe;
    let kappa = curvature_at(jet_i, z0)?;
    let p = jet_i.value;
    let inward = -z0 * jet_i.d1 / jet_i.d1.norm();
    let probe = ToothProbe {
        point: p,
        inward_normal: inward,
        curvature: kappa,
    };
    let scale = p.norm().max(p_1 - p_m1);
    if kappa.abs() * scale < KAPPA_STRAIGHT {
        // Straight tooth edge: intersect its line with ℝ. The tangent at p
        // is i·z₀·f′(z₀) (direction of θ ↦ f(e^{iθ})).
        let u = c64(0.0, 1.0) * z0 * jet_i.d1;
        if u.im.abs() < 1e-12 * u.norm() {
            return Err(Error::NotAPregear {
                detail: "straight tooth edge parallel to the real axis".into(),
            });
        }
        let center = p.re - p.im * u.re / u.im;
        return Ok(PregearGeometry {
            p_minus1: p_m1,
            p_1,
            probe,
            shape: ToothShape::Straight { center },
        });
    }
    let rho = 1.0 / kappa.abs();
    let center = p + inward / kappa;
    let d_sq = rho * rho - center.im * center.im;
    if d_sq <= 0.0 {
        return Err(Error::NotAPregear {
            detail: format!("tooth circles do not intersect: rho = {rho:e}, Im c = {:e}", center.im),
        });
    }
    let d = d_sq.sqrt();
    // b± = Re c ± d via the product form b⁻·b⁺ = |c|² − ρ², which is free of
    // the cancellation that hits the direct difference as κ → 0.
    let prod = p.norm_sqr() + 2.0 * (p * inward.conj()).re / kappa;
    let (b_minus, b_plus) = if center.re >= 0.0 {
        let bp = center.re + d;
        (prod / bp, bp)
    } else {
        let bm = center.re - d;
        (bm, prod / bm)
    };
    let in_minus = p_m1 < b_minus && b_minus < p_1;
    let in_plus = p_m1 < b_plus && b_plus < p_1;
    let interior = match (in_minus, in_plus) {
        (true, false) => InteriorPoint::BMinus,
        (false, true) => InteriorPoint::BPlus,
        both => {
            return Err(Error::NotAPregear {
                detail: format!(
                    "expected exactly one of b± inside ({p_m1}, {p_1}); got b- = {b_minus}, b+ = {b_plus}, {both:?}"
                ),
            })
        }
    };
    Ok(PregearGeometry {
        p_minus1: p_m1,
        p_1,
        probe,
        shape: ToothShape::Curved {
            rho,
            center,
            d,
            b_minus,
            b_plus,
            interior,
        },
    })
}

/// [`analyze_pregear_at`] with the probe at z = i, the tooth-edge midpoint
/// of the symmetric prevertex configuration.
pub fn analyze_pregear_from_jets(
    jet_m1: &Jet2,
    jet_1: &Jet2,
    jet_i: &Jet2,
) -> Result<PregearGeometry> {
    analyze_pregear_at(jet_m1, jet_1, jet_i, c64(0.0, 1.0))
}

/// The Möbius transformation carrying the pregear onto a gear with center
/// at the origin, together with the measured gear parameters.
pub fn gear_normalize(geo: &PregearGeometry) -> Result<(MobiusMap, GearParams)> {
    let t = match geo.shape {
        ToothShape::Curved { b_minus, b_plus, interior, .. } => {
            MobiusMap::pregear_normalizer(b_minus, b_plus, interior)?
        }
        ToothShape::Straight { center } => MobiusMap::translation(c64(center, 0.0)),
    };
    let t_pm1 = t.apply(c64(geo.p_minus1, 0.0));
    let t_p1 = t.apply(c64(geo.p_1, 0.0));
    if !(t_pm1.re < 0.0 && t_p1.re > 0.0) {
        return Err(Error::NotAPregear {
            detail: format!("normalized real section does not straddle 0: {t_pm1}, {t_p1}"),
        });
    }
    let beta = t_p1.re / (-t_pm1.re);
    let gamma = t.apply(geo.probe.point).arg();
    if !(beta > 1.0) || !(gamma > 0.0 && gamma < std::f64::consts::PI) {
        return Err(Error::NotAPregear {
            detail: format!("measured parameters out of range: beta = {beta}, gamma = {gamma}"),
        });
    }
    Ok((t, GearParams { beta, gamma }))
}

/// A disk map y₂/y₁ determined by a Schwarzian evaluator and its 2-jet at 0,
/// evaluated by radial integration.
#[derive(Clone)]
pub struct DiskMap {
    pub schwarzian: Schwarzian,
    pub jet0: Jet2,
    pub tol: f64,
}

impl DiskMap {
    /// The solution of S_f = R_{t,λ} normalized by J_f(0) = (0, 1, 0).
    pub fn symmetric(params: MapParams, tol: f64) -> Self {
        DiskMap {
            schwarzian: Schwarzian::disk(params),
            jet0: Jet2::new(0.0, 1.0, 0.0),
            tol,
        }
    }

    /// Initial solution jets (y₁, y₂) at 0 reproducing `jet0` through the
    /// quotient relations with unit Wronskian.
    pub fn initial_basis(&self) -> (Jet1, Jet1) {
        let f1 = self.jet0.d1;
        let a = 1.0 / f1.sqrt();
        let y1 = Jet1::new(a, -0.5 * self.jet0.d2 * a * a * a);
        let y2 = Jet1::new(
            self.jet0.value * y1.value,
            f1 * y1.value + self.jet0.value * y1.deriv,
        );
        (y1, y2)
    }

    pub fn basis_at(&self, z: Complex64) -> Result<OdeBasis> {
        let (y1, y2) = self.initial_basis();
        let path = PathSpec::new(c64(0.0, 0.0), z)?;
        let s = self.schwarzian.clone();
        integrate_basis(&move |w| s.eval(w), path, y1, y2, self.tol)
    }

    pub fn jet_at(&self, z: Complex64) -> Result<Jet2> {
        if z.norm() == 0.0 {
            return Ok(self.jet0);
        }
        jet_of_quotient(&self.basis_at(z)?)
    }

    pub fn value_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet_at(z)?.value)
    }

    /// Map value with the argument of f tracked continuously along the
    /// radius from 0, anchored at arg f ≈ arg z near the origin (valid when
    /// f(0) = 0 and f′(0) > 0). Returns (f(z), continued arg of f(z)).
    pub fn value_with_arg(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if self.jet0.value.norm() > 1e-12 {
            return Err(Error::NotCentered {
                offset: self.jet0.value.norm(),
            });
        }
        let (y1, y2) = self.initial_basis();
        let path = PathSpec::new(c64(0.0, 0.0), z)?;
        let s = self.schwarzian.clone();
        let mut arg = z.arg();
        let mut have_prev = false;
        let mut prev = Complex64::default();
        let mut record = |_sigma: f64, _z: Complex64, f: Complex64| {
            if have_prev {
                arg += (f / prev).arg();
            }
            prev = f;
            have_prev = true;
        };
        let basis = integrate_observing(&move |w| s.eval(w), path, y1, y2, self.tol, &mut record)?;
        let value = basis.y2.value / basis.y1.value;
        Ok((value, arg))
    }
}

/// Samples of f along [−1, 1] with jets, for numerical inversion on the
/// real axis (f is real and increasing there for the symmetric family).
pub struct RealAxisTable {
    xs: Vec<f64>,
    values: Vec<f64>,
    bases: Vec<OdeBasis>,
}

impl RealAxisTable {
    pub fn build(map: &DiskMap, n_half: usize) -> Result<Self> {
        let (y1, y2) = map.initial_basis();
        let fracs: Vec<f64> = (1..=n_half).map(|i| i as f64 / n_half as f64).collect();
        let s_pos = map.schwarzian.clone();
        let pos = integrate_with_captures(
            &move |w| s_pos.eval(w),
            PathSpec::new(c64(0.0, 0.0), c64(1.0, 0.0))?,
            y1,
            y2,
            map.tol,
            &fracs,
        )?;
        let s_neg = map.schwarzian.clone();
        let neg = integrate_with_captures(
            &move |w| s_neg.eval(w),
            PathSpec::new(c64(0.0, 0.0), c64(-1.0, 0.0))?,
            y1,
            y2,
            map.tol,
            &fracs,
        )?;
        let mut xs = Vec::with_capacity(2 * n_half + 1);
        let mut values = Vec::new();
        let mut bases = Vec::new();
        // The capture list repeats the final fraction once as the endpoint;
        // drop the duplicate.
        for b in neg.iter().take(n_half).rev() {
            xs.push(b.at.re);
            values.push((b.y2.value / b.y1.value).re);
            bases.push(*b);
        }
        xs.push(0.0);
        values.push(map.jet0.value.re);
        bases.push(OdeBasis {
            at: c64(0.0, 0.0),
            y1,
            y2,
            wronskian: y1.value * y2.deriv - y2.value * y1.deriv,
            drift: 0.0,
        });
        for b in pos.iter().take(n_half) {
            xs.push(b.at.re);
            values.push((b.y2.value / b.y1.value).re);
            bases.push(*b);
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InversionFailed {
                    detail: "map not increasing on the real axis".into(),
                });
            }
        }
        Ok(RealAxisTable { xs, values, bases })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.values[0], *self.values.last().unwrap())
    }

    /// Solve f(x) = target on (−1, 1) by bracketing on the stored samples
    /// and safeguarded Newton refinement with short re-integrations
    /// (f′ = W/y₁²); steps leaving the bracket fall back to bisection.
    pub fn invert(&self, map: &DiskMap, target: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(target > lo && target < hi) {
            return Err(Error::InversionFailed {
                detail: format!("target {target} outside image interval ({lo}, {hi})"),
            });
        }
        let mut i = match self
            .values
            .binary_search_by(|v| v.partial_cmp(&target).unwrap())
        {
            Ok(k) => return Ok(self.xs[k]),
            Err(k) => k - 1,
        };
        if i + 1 >= self.xs.len() {
            i = self.xs.len() - 2;
        }
        let base = &self.bases[i];
        let s = map.schwarzian.clone();
        let eval = |x: f64| -> Result<(f64, f64)> {
            if (x - base.at.re).abs() < 1e-14 {
                let j = jet_of_quotient(base)?;
                Ok((j.value.re, j.d1.re))
            } else {
                let path = PathSpec::new(base.at, c64(x, 0.0))?;
                let sc = s.clone();
                let b = integrate_basis(&move |w| sc.eval(w), path, base.y1, base.y2, map.tol)?;
                let j = jet_of_quotient(&b)?;
                Ok((j.value.re, j.d1.re))
            }
        };
        let (mut xa, mut xb) = (self.xs[i], self.xs[i + 1]);
        let f0 = self.values[i];
        let f1 = self.values[i + 1];
        let mut x = xa + (target - f0) / (f1 - f0) * (xb - xa);
        for _ in 0..80 {
            let (fx, dfx) = eval(x)?;
            let newton_step = if dfx > 0.0 {
                (fx - target) / dfx
            } else {
                f64::NAN
            };
            // Converged: hand back the Newton-refined point itself, never a
            // bracket midpoint.
            if newton_step.is_finite() && newton_step.abs() < 1e-13 * (1.0 + x.abs()) {
                return Ok(x - newton_step);
            }
            if fx > target {
                xb = x.min(xb);
            } else {
                xa = x.max(xa);
            }
            let newton = x - newton_step;
            x = if newton.is_finite() && newton > xa && newton < xb {
                newton
            } else {
                0.5 * (xa + xb)
            };
            if (xb - xa) < 1e-14 * (1.0 + x.abs()) {
                return Ok(x);
            }
        }
        Err(Error::InversionFailed {
            detail: "newton refinement did not converge".into(),
        })
    }
}

/// Boundary edge labels of the one-tooth image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    ToothUpper,
    ToothLower,
    InnerArc,
    OuterArc,
}

impl EdgeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeLabel::ToothUpper => "tooth-upper",
            EdgeLabel::ToothLower => "tooth-lower",
            EdgeLabel::InnerArc => "inner-arc",
            EdgeLabel::OuterArc => "outer-arc",
        }
    }
}

/// One traced boundary edge.
#[derive(Clone, Debug)]
pub struct EdgeTrace {
    pub label: EdgeLabel,
    /// Boundary parameter θ of each sample (z = e^{iθ} on the base disk).
    pub thetas: Vec<f64>,
    pub points: Vec<Complex64>,
}

/// Labeled boundary polylines plus the endpoint jets at z ∈ {−1, 1, i}.
#[derive(Clone, Debug)]
pub struct BoundaryTrace {
    pub edges: Vec<EdgeTrace>,
    pub jet_m1: Jet2,
    pub jet_1: Jet2,
    pub jet_i: Jet2,
}

impl BoundaryTrace {
    pub fn edge(&self, label: EdgeLabel) -> &EdgeTrace {
        self.edges.iter().find(|e| e.label == label).expect("edge present")
    }
}

/// Trace the pregear boundary of a symmetric-configuration map with
/// prevertices at angles t and π − t.
pub fn trace_pregear(map: &DiskMap, t: f64, samples_per_edge: usize) -> Result<BoundaryTrace> {
    let pi = std::f64::consts::PI;
    let spans = [
        (EdgeLabel::OuterArc, -t, t),
        (EdgeLabel::ToothUpper, t, pi - t),
        (EdgeLabel::InnerArc, pi - t, pi + t),
        (EdgeLabel::ToothLower, pi + t, 2.0 * pi - t),
    ];
    let mut edges = Vec::with_capacity(4);
    for (label, lo, hi) in spans {
        let span = hi - lo;
        let inset = (1e-3_f64).min(0.02 * span);
        let n = samples_per_edge.max(8);
        let mut thetas = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        for k in 0..n {
            let theta = lo + inset + (span - 2.0 * inset) * k as f64 / (n - 1) as f64;
            let z = c64(theta.cos(), theta.sin());
            points.push(map.value_at(z)?);
            thetas.push(theta);
        }
        edges.push(EdgeTrace { label, thetas, points });
    }
    Ok(BoundaryTrace {
        edges,
        jet_m1: map.jet_at(c64(-1.0, 0.0))?,
        jet_1: map.jet_at(c64(1.0, 0.0))?,
        jet_i: map.jet_at(c64(0.0, 1.0))?,
    })
}

/// Extract the pregear data from a traced boundary.
pub fn analyze_pregear(trace: &BoundaryTrace) -> Result<PregearGeometry> {
    analyze_pregear_from_jets(&trace.jet_m1, &trace.jet_1, &trace.jet_i)
}

/// A renormalized gear mapping h = T ∘ f ∘ T_q with h(0) = 0 at the gear
/// center and h′(0) > 0.
#[derive(Clone)]
pub struct GearMap {
    pub params: MapParams,
    pub base: DiskMap,
    /// Precomposition parameter: q = −f⁻¹(gear-center preimage).
    pub q: f64,
    pub precompose: MobiusMap,
    pub normalizer: MobiusMap,
    /// The direct evaluator: pulled-back Schwarzian with the composed jet.
    pub map: DiskMap,
    pub gear: GearParams,
    pub geometry: PregearGeometry,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

/// Build the renormalized gear mapping for parameters (t, λ).
pub fn renormalized_gear_map(params: &MapParams, tol: f64) -> Result<GearMap> {
    let base = DiskMap::symmetric(*params, tol);
    let jet_m1 = base.jet_at(c64(-1.0, 0.0))?;
    let jet_1 = base.jet_at(c64(1.0, 0.0))?;
    let jet_i = base.jet_at(c64(0.0, 1.0))?;
    let geometry = analyze_pregear_from_jets(&jet_m1, &jet_1, &jet_i)?;
    let (normalizer, gear) = gear_normalize(&geometry)?;
    let w0 = geometry.gear_center_preimage();
    let table = RealAxisTable::build(&base, 48)?;
    let x_star = table.invert(&base, w0)?;
    let q = -x_star;
    let precompose = MobiusMap::disk_automorphism(q)?;
    // J_h(0) = J_T(w₀) ∘ J_f(−q) ∘ J_{T_q}(0).
    let jet_tq0 = precompose.jet_at(c64(0.0, 0.0))?;
    let jet_f = base.jet_at(c64(-q, 0.0))?;
    let jet_t = normalizer.jet_at(jet_f.value)?;
    let jet0 = compose_jet2(&jet_t, &compose_jet2(&jet_f, &jet_tq0));
    // The residual center offset is the real-axis inversion error magnified
    // by the normalizer derivative, so judge it against the map scale.
    if jet0.value.norm() > 1e-6 * (1.0 + jet0.d1.norm()) || jet0.d1.re <= 0.0 {
        return Err(Error::InversionFailed {
            detail: format!("renormalized jet not centered/positive: {jet0:?}"),
        });
    }
    let jet0 = Jet2::new(c64(0.0, 0.0), c64(jet0.d1.re, 0.0), jet0.d2);
    let map = DiskMap {
        schwarzian: base.schwarzian.clone().pullback(precompose),
        jet0,
        tol,
    };
    let inner_radius = -normalizer.apply(c64(geometry.p_minus1, 0.0)).re;
    let outer_radius = normalizer.apply(c64(geometry.p_1, 0.0)).re;
    Ok(GearMap {
        params: *params,
        base,
        q,
        precompose,
        normalizer,
        map,
        gear,
        geometry,
        inner_radius,
        outer_radius,
    })
}

impl GearMap {
    /// Evaluate through the pulled-back Schwarzian and the composed jet.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.map.value_at(z)
    }

    /// Evaluate by composing the three factors separately (test oracle).
    pub fn eval_via_composition(&self, z: Complex64) -> Result<Complex64> {
        let w = self.base.value_at(self.precompose.apply(z))?;
        Ok(self.normalizer.apply(w))
    }

    /// Trace the gear boundary: the normalizer applied to the pregear trace.
    pub fn trace_boundary(&self, samples_per_edge: usize) -> Result<BoundaryTrace> {
        let pre = trace_pregear(&self.base, self.params.t, samples_per_edge)?;
        let mut edges = pre.edges;
        for e in &mut edges {
            for p in &mut e.points {
                *p = self.normalizer.apply(*p);
            }
        }
        let push = |jet: &Jet2| -> Result<Jet2> {
            let tj = self.normalizer.jet_at(jet.value)?;
            Ok(compose_jet2(&tj, jet))
        };
        Ok(BoundaryTrace {
            jet_m1: push(&pre.jet_m1)?,
            jet_1: push(&pre.jet_1)?,
            jet_i: push(&pre.jet_i)?,
            edges,
        })
    }
}

/// Reposition the gear center: return shifted prevertex angles (t₁′, t₂′)
/// and the composed map F = f ∘ T_{−p} with F(0) = w₀ the gear center of
/// the image (which F shares with f).
pub fn reposition_center(
    t1: f64,
    t2: f64,
    _lambda: f64,
    map: &DiskMap,
) -> Result<(f64, f64, DiskMap)> {
    if !(t1 > 0.0 && t1 < t2 && t2 < std::f64::consts::PI) {
        return Err(Error::InvalidInput {
            detail: format!("prevertex angles out of order: ({t1}, {t2})"),
        });
    }
    let jet_m1 = map.jet_at(c64(-1.0, 0.0))?;
    let jet_1 = map.jet_at(c64(1.0, 0.0))?;
    // Probe the midpoint of the upper tooth-edge arc.
    let mid = 0.5 * (t1 + t2);
    let z_probe = c64(mid.cos(), mid.sin());
    let jet_probe = map.jet_at(z_probe)?;
    let geometry = analyze_pregear_at(&jet_m1, &jet_1, &jet_probe, z_probe)?;
    let w0 = geometry.gear_center_preimage();
    let table = RealAxisTable::build(map, 48)?;
    let p = table.invert(map, w0)?;
    let shift = MobiusMap::disk_automorphism(-p)?;
    let jet_shift0 = shift.jet_at(c64(0.0, 0.0))?;
    let jet_f_p = map.jet_at(c64(p, 0.0))?;
    let jet0 = compose_jet2(&jet_f_p, &jet_shift0);
    let composed = DiskMap {
        schwarzian: map.schwarzian.clone().pullback(shift),
        jet0,
        tol: map.tol,
    };
    let unshift = MobiusMap::disk_automorphism(p)?;
    let new_angle = |t: f64| unshift.apply(c64(t.cos(), t.sin())).arg();
    Ok((new_angle(t1), new_angle(t2), composed))
}

/// A regular n-tooth map f_n(z) = (h(zⁿ))^{1/n} built from a centered gear
/// map h, with the branch anchored by f_n(x) > 0 for small x > 0.
pub struct MultitoothMap {
    gear: GearMap,
    pub n: u32,
}

/// Construct the multitooth evaluator. The gear map must fix the gear
/// center: |h(0)| beyond tolerance is rejected.
pub fn multitooth(gear: &GearMap, n: u32) -> Result<MultitoothMap> {
    if n == 0 {
        return Err(Error::InvalidInput {
            detail: "tooth count must be positive".into(),
        });
    }
    let offset = gear.map.jet0.value.norm();
    if offset > 1e-9 {
        return Err(Error::NotCentered { offset });
    }
    Ok(MultitoothMap { gear: gear.clone(), n })
}

impl MultitoothMap {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.n == 1 {
            return self.gear.eval(z);
        }
        if z.norm() == 0.0 {
            return Ok(c64(0.0, 0.0));
        }
        let w = z.powu(self.n);
        let (value, arg) = self.gear.map.value_with_arg(w)?;
        // Continuous n-th root: the anchor n·arg(z) fixes the sheet.
        let target_arg = self.n as f64 * z.arg() + (arg - self.n as f64 * z.arg());
        Ok(Complex64::from_polar(
            value.norm().powf(1.0 / self.n as f64),
            target_arg / self.n as f64,
        ))
    }

    /// Boundary polyline of the n-tooth image: the one-tooth boundary is
    /// chained in circular order, its argument unwrapped, the n-th root
    /// taken, and the n rotated copies appended.
    pub fn boundary(&self, samples_per_edge: usize) -> Result<Vec<(String, Vec<Complex64>)>> {
        let trace = self.gear.trace_boundary(samples_per_edge)?;
        // Circular order by boundary parameter.
        let order = [
            EdgeLabel::OuterArc,
            EdgeLabel::ToothUpper,
            EdgeLabel::InnerArc,
            EdgeLabel::ToothLower,
        ];
        let mut chained: Vec<(EdgeLabel, Vec<Complex64>)> = Vec::new();
        let mut prev_arg: Option<f64> = None;
        for label in order {
            let e = trace.edge(label);
            let mut pts = Vec::with_capacity(e.points.len());
            for &w in &e.points {
                let mut a = w.arg();
                if let Some(pa) = prev_arg {
                    // Unwrap relative to the previous sample.
                    let mut delta = a - pa;
                    while delta > std::f64::consts::PI {
                        delta -= 2.0 * std::f64::consts::PI;
                        a -= 2.0 * std::f64::consts::PI;
                    }
                    while delta < -std::f64::consts::PI {
                        delta += 2.0 * std::f64::consts::PI;
                        a += 2.0 * std::f64::consts::PI;
                    }
                }
                prev_arg = Some(a);
                pts.push(Complex64::from_polar(
                    w.norm().powf(1.0 / self.n as f64),
                    a / self.n as f64,
                ));
            }
            chained.push((label, pts));
        }
        let mut out = Vec::new();
        for copy in 0..self.n {
            let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * copy as f64 / self.n as f64);
            for (label, pts) in &chained {
                out.push((
                    format!("tooth-{copy:02}-{}", label.as_str()),
                    pts.iter().map(|w| w * rot).collect(),
                ));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_of_simple_images() {
        // Identity: unit circle, κ = 1.
        let j = Jet2::new(c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0));
        assert!((curvature_at(&j, c64(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        // f(z) = 2z: radius 2.
        let j = Jet2::new(c64(2.0, 0.0), c64(2.0, 0.0), c64(0.0, 0.0));
        assert!((curvature_at(&j, c64(1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        // f(z) = z² at 1: jet (1, 2, 2) traverses the unit circle.
        let j = Jet2::new(c64(1.0, 0.0), c64(2.0, 0.0), c64(2.0, 0.0));
        assert!((curvature_at(&j, c64(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn curvature_sign_matches_center_side() {
        // f = 1/(z+2) maps the circle to the circle of center 2/3, radius 1/3;
        // the signed curvature must place the center at f(1) + (1/κ)·n.
        let z0 = c64(1.0, 0.0);
        let f = |z: Complex64| 1.0 / (z + 2.0);
        let d1 = -1.0 / ((z0 + 2.0) * (z0 + 2.0));
        let d2 = 2.0 / ((z0 + 2.0) * (z0 + 2.0) * (z0 + 2.0));
        let j = Jet2::new(f(z0), d1, d2);
        let k = curvature_at(&j, z0).unwrap();
        assert!((k - 3.0).abs() < 1e-12, "κ = {k}");
        let n = -z0 * j.d1 / j.d1.norm();
        let center = j.value + n / k;
        assert!((center - c64(2.0 / 3.0, 0.0)).norm() < 1e-12, "center {center}");
    }

    #[test]
    fn direct_pregear_formula() {
        // c = 1 + 0.5i, ρ = 1.2 → d = √1.19, b± = 1 ± √1.19.
        let rho: f64 = 1.2;
        let d = (rho * rho - 0.25).sqrt();
        assert!((d * d - 1.19).abs() < 1e-14);
        // Build a probe reproducing that circle: center c, point on circle
        // below it, inward normal pointing up toward the center.
        let center = c64(1.0, 0.5);
        let p = center - c64(0.0, rho);
        let v = c64(0.0, 1.0);
        let kappa = 1.0 / rho;
        let prod = p.norm_sqr() + 2.0 * (p * v.conj()).re / kappa;
        let bp = center.re + d;
        let bm = prod / bp;
        assert!((bp - (1.0 + 1.19_f64.sqrt())).abs() < 1e-13);
        assert!((bm - (1.0 - 1.19_f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn disjoint_tooth_circles_rejected() {
        // |Im c| > ρ: curvature 1/ρ at a probe whose center sits high up.
        let rho: f64 = 0.4;
        let center = c64(0.3, 0.8);
        let p = center - c64(0.0, rho);
        let jet_i = Jet2::new(p, c64(-0.5, 0.0), c64(0.0, 0.0));
        // Jet with curvature 1/ρ: build directly through the probe branch by
        // calling the geometry assembly with synthetic jets.
        // κ = Re(1 + i·d2/d1)/|d1| — pick d2 to get κ = 1/ρ with normal +i.
        // Simpler: drive analyze with explicit jets for the ±1 endpoints and
        // verify the error comes from d² < 0.
        let jm1 = Jet2::new(c64(-1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0));
        let j1 = Jet2::new(c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0));
        // Need jet_i with inward normal i (so d1 = −i·|d1|·…): choose
        // d1 = i so inward = −i·i/1 = 1... instead compute from κ target:
        // take d1 = -1 (then inward = −i·(−1) = i pointing up) and
        // κ = (1 + Re(i·d2/−1)) / 1 = 1 + Im(d2) = 1/ρ.
        let d2 = c64(0.0, 1.0 / rho - 1.0);
        let ji = Jet2::new(p, c64(-1.0, 0.0), d2);
        let _ = jet_i;
        let err = analyze_pregear_from_jets(&jm1, &j1, &ji).unwrap_err();
        assert!(matches!(err, Error::NotAPregear { .. }), "{err}");
    }

    #[test]
    fn real_axis_inversion_rejects_out_of_range_targets() {
        let map = DiskMap::symmetric(
            crate::schwarzian::MapParams::new(0.8, 0.0).unwrap(),
            1e-10,
        );
        let table = RealAxisTable::build(&map, 32).unwrap();
        let (lo, hi) = table.range();
        assert!(lo < 0.0 && hi > 0.0);
        let err = table.invert(&map, hi + 1.0).unwrap_err();
        assert!(matches!(err, Error::InversionFailed { .. }), "{err}");
        // And a legitimate target round-trips.
        let target = 0.37 * hi;
        let x = table.invert(&map, target).unwrap();
        assert!((map.value_at(c64(x, 0.0)).unwrap().re - target).abs() < 1e-10);
    }

    #[test]
    fn synthetic_mobius_image_of_gear_recovers_parameters() {
        // Apply M(z) = (z + 0.3)/(1 + 0.3z) to the standard gear G_{2, π/4}
        // and feed the analytically known boundary data through the
        // analysis; normalization must recover β = 2, γ = π/4.
        let m = MobiusMap::new(c64(1.0, 0.0), c64(0.3, 0.0), c64(0.3, 0.0), c64(1.0, 0.0)).unwrap();
        let beta = 2.0;
        let gamma = std::f64::consts::FRAC_PI_4;
        // Real section of G: (−1, β).
        let jm1_val = m.apply(c64(-1.0, 0.0));
        let j1_val = m.apply(c64(beta, 0.0));
        // Upper tooth edge point w₀ = 1.5·e^{iγ}, tangent e^{iγ}, inward
        // normal −ie^{iγ}; push through M.
        let e_ig = Complex64::from_polar(1.0, gamma);
        let w0 = 1.5 * e_ig;
        let mj = m.jet_at(w0).unwrap();
        let p = mj.value;
        let inward = -c64(0.0, 1.0) * e_ig;
        let normal_img = (mj.d1 * inward) / (mj.d1 * inward).norm();
        // Image of the straight edge is a circle through M(0), M(∞).
        let a_pt = m.apply(c64(0.0, 0.0));
        let b_pt = m.a / m.c;
        // Circle through a_pt, b_pt, p: center equidistant.
        let center = {
            let (z1, z2, z3) = (a_pt, b_pt, p);
            let d = 2.0
                * ((z1.re - z3.re) * (z2.im - z3.im) - (z2.re - z3.re) * (z1.im - z3.im));
            let u1 = z1.norm_sqr() - z3.norm_sqr();
            let u2 = z2.norm_sqr() - z3.norm_sqr();
            c64(
                (u1 * (z2.im - z3.im) - u2 * (z1.im - z3.im)) / d,
                (u2 * (z1.re - z3.re) - u1 * (z2.re - z3.re)) / d,
            )
        };
        let rho = (p - center).norm();
        let kappa_sign = if ((center - p) / normal_img).re > 0.0 { 1.0 } else { -1.0 };
        let kappa = kappa_sign / rho;
        // Build jets carrying exactly this geometry at the probe slot. The
        // probe direction enters through d1: inward = −i·d1/|d1| at z₀ = i,
        // so the unit d1 is i·normal_img.
        let d1 = c64(0.0, 1.0) * normal_img;
        // κ = Re(1 + i d2/d1)/|d1| with |d1| = 1: pick d2 real multiple of
        // d1/i solving the curvature equation: Re(i·d2/d1) = κ − 1.
        let d2 = (kappa - 1.0) * d1 / c64(0.0, 1.0);
        let ji = Jet2::new(p, d1, d2);
        let jm1 = Jet2::new(jm1_val, c64(1.0, 0.0), c64(0.0, 0.0));
        let j1 = Jet2::new(j1_val, c64(1.0, 0.0), c64(0.0, 0.0));
        let geo = analyze_pregear_from_jets(&jm1, &j1, &ji).unwrap();
        match geo.shape {
            ToothShape::Curved { b_minus, b_plus, .. } => {
                assert!((b_minus - 0.3).abs() < 1e-8, "b- = {b_minus}");
                assert!((b_plus - 1.0 / 0.3).abs() < 1e-8, "b+ = {b_plus}");
            }
            _ => panic!("expected curved tooth"),
        }
        let (_t, gp) = gear_normalize(&geo).unwrap();
        assert!((gp.beta - beta).abs() < 1e-8, "beta = {}", gp.beta);
        assert!((gp.gamma - gamma).abs() < 1e-8, "gamma = {}", gp.gamma);
    }
}
