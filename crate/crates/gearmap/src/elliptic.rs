//! Elliptic machinery: the branch-continuous integral E, the conformal
//! module M(t), and the normalized Weierstrass lattice.
//!
//! E(z) integrates (z⁴ − (2cos2t)z² + 1)^{-1/2} from 0 along straight
//! segments, tracking the argument of each linear factor so the square-root
//! branch stays continuous. The lattice is normalized so that e₁ − e₂ = 4,
//! which ties the half-periods to E(1) and E(i).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Distance from point `p` to the segment [a, b].
fn dist_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let s = s.clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

const BRANCH_DISTANCE_THRESHOLD: f64 = 1e-7;

struct BranchTracker {
    prevertices: [Complex64; 4],
    at: Complex64,
    args: [f64; 4],
}

impl BranchTracker {
    fn start(t: f64, origin: Complex64) -> Self {
        let e_it = c64(t.cos(), t.sin());
        let prevertices = [e_it, e_it.conj(), -e_it, -e_it.conj()];
        let mut args = [0.0; 4];
        for (k, p) in prevertices.iter().enumerate() {
            args[k] = (origin - p).arg();
        }
        BranchTracker {
            prevertices,
            at: origin,
            args,
        }
    }

    /// Move to `p`, continuing each factor argument, and return the branch
    /// of (z⁴ − (2cos2t)z² + 1)^{-1/2} there. Consecutive points must
    /// subtend less than π from every prevertex, which holds for any walk
    /// along a straight segment avoiding the prevertices.
    fn advance(&mut self, p: Complex64) -> Complex64 {
        let mut log_mod = 0.0;
        let mut arg_sum = 0.0;
        for k in 0..4 {
            let num = p - self.prevertices[k];
            let den = self.at - self.prevertices[k];
            self.args[k] += (num / den).arg();
            log_mod += num.norm().ln();
            arg_sum += self.args[k];
        }
        self.at = p;
        // Q^{-1/2} with arg(Q) continued from arg = 0 at the path origin.
        Complex64::from_polar((-0.5 * log_mod).exp(), -0.5 * arg_sum)
    }
}

struct EllipticIntegrator {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tol: f64,
}

impl EllipticIntegrator {
    fn new(tol: f64) -> Self {
        let (nodes, weights) = gauss_legendre(20);
        EllipticIntegrator {
            nodes,
            weights,
            tol,
        }
    }

    /// One Gauss pass over [s0, s1] of the segment a→b, walking the branch
    /// tracker through the nodes and on to s1.
    fn pass(
        &self,
        a: Complex64,
        b: Complex64,
        s0: f64,
        s1: f64,
        tracker: &mut BranchTracker,
    ) -> Complex64 {
        let dir = b - a;
        let h = 0.5 * (s1 - s0);
        let mid = 0.5 * (s0 + s1);
        let mut acc = Complex64::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = mid + h * x;
            let val = tracker.advance(a + dir * s);
            acc += val * *w;
        }
        tracker.advance(a + dir * s1);
        acc * h * dir
    }

    fn segment(
        &self,
        a: Complex64,
        b: Complex64,
        s0: f64,
        s1: f64,
        tracker: &mut BranchTracker,
        depth: u32,
    ) -> Result<Complex64> {
        if depth > 40 {
            return Err(Error::QuadratureFailure {
                detail: "elliptic integral panel recursion exhausted".into(),
            });
        }
        // Coarse pass on a scratch tracker, fine passes on scratch, compare.
        let mut coarse_tracker = BranchTracker {
            prevertices: tracker.prevertices,
            at: tracker.at,
            args: tracker.args,
        };
        let coarse = self.pass(a, b, s0, s1, &mut coarse_tracker);
        let mid = 0.5 * (s0 + s1);
        let mut fine_tracker = BranchTracker {
            prevertices: tracker.prevertices,
            at: tracker.at,
            args: tracker.args,
        };
        let fine =
            self.pass(a, b, s0, mid, &mut fine_tracker) + self.pass(a, b, mid, s1, &mut fine_tracker);
        if (fine - coarse).norm() <= self.tol {
            *tracker = fine_tracker;
            return Ok(fine);
        }
        let left = self.segment(a, b, s0, mid, tracker, depth + 1)?;
        let right = self.segment(a, b, mid, s1, tracker, depth + 1)?;
        Ok(left + right)
    }
}

/// E along the polyline through `waypoints`, starting from 0.
pub fn elliptic_e_path(t: f64, waypoints: &[Complex64]) -> Result<Complex64> {
    if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidInput {
            detail: format!("elliptic integral parameter t = {t} outside (0, π/2)"),
        });
    }
    let origin = c64(0.0, 0.0);
    let mut tracker = BranchTracker::start(t, origin);
    let integ = EllipticIntegrator::new(1e-13);
    let mut from = origin;
    let mut total = Complex64::default();
    for &to in waypoints {
        if (to - from).norm() == 0.0 {
            continue;
        }
        for p in tracker.prevertices {
            let d = dist_to_segment(p, from, to);
            if d < BRANCH_DISTANCE_THRESHOLD {
                return Err(Error::BranchAmbiguity { dist: d });
            }
        }
        total += integ.segment(from, to, 0.0, 1.0, &mut tracker, 0)?;
        from = to;
    }
    Ok(total)
}

/// The elliptic integral E(z) along the straight path from 0, with the
/// branch fixed by integrand value 1 at the origin.
pub fn elliptic_e(t: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Ok(Complex64::default());
    }
    elliptic_e_path(t, &[z])
}

/// Conformal module M(t) = Im E(i) / E(1) of the image rectangle.
pub fn module_m(t: f64) -> Result<f64> {
    let e1 = elliptic_e(t, c64(1.0, 0.0))?;
    let ei = elliptic_e(t, c64(0.0, 1.0))?;
    if e1.im.abs() > 1e-9 * e1.re.abs() || ei.re.abs() > 1e-9 * ei.im.abs() {
        return Err(Error::QuadratureFailure {
            detail: format!("axis integrals not real/imaginary: E(1) = {e1}, E(i) = {ei}"),
        });
    }
    Ok(ei.im / e1.re)
}

/// Normalized rectangular period lattice: half-periods ω₁ (real) and ω₂
/// (imaginary), branch values e₂ < e₃ < e₁ with e₁ − e₂ = 4.
#[derive(Clone, Debug)]
pub struct PeriodLattice {
    pub omega1: f64,
    pub omega2: Complex64,
    pub omega3: Complex64,
    pub tau: Complex64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
    laurent: Vec<f64>,
}

const LAURENT_TERMS: usize = 34;

fn laurent_coefficients(g2: f64, g3: f64) -> Vec<f64> {
    // ℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}; c₂ = g₂/20, c₃ = g₃/28,
    // c_k = 3 Σ c_m c_{k−m} / ((2k+1)(k−3)).
    let mut c = vec![0.0; LAURENT_TERMS + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=LAURENT_TERMS {
        let mut acc = 0.0;
        for m in 2..=(k - 2) {
            acc += c[m] * c[k - m];
        }
        c[k] = 3.0 * acc / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
}

/// Eisenstein series E₄, E₆ in the modular nome q² = e^{2πiτ}.
fn eisenstein(q2: f64) -> (f64, f64) {
    let mut e4 = 0.0;
    let mut e6 = 0.0;
    let mut qn = 1.0;
    for n in 1..2000 {
        qn *= q2;
        let nf = n as f64;
        let lam = qn / (1.0 - qn);
        let t4 = nf.powi(3) * lam;
        let t6 = nf.powi(5) * lam;
        e4 += t4;
        e6 += t6;
        if t4.abs() < 1e-18 && t6.abs() < 1e-18 {
            break;
        }
    }
    (1.0 + 240.0 * e4, 1.0 - 504.0 * e6)
}

/// Real roots of 4w³ − g₂w − g₃ = 0, descending.
fn branch_values(g2: f64, g3: f64) -> Result<[f64; 3]> {
    // Depressed cubic w³ + pw + q with p = −g₂/4, q = −g₃/4.
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    if p >= 0.0 {
        return Err(Error::InvalidInput {
            detail: "cubic for branch values has no three real roots".into(),
        });
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
    let theta = arg.clamp(-1.0, 1.0).acos();
    let mut roots = [
        m * (theta / 3.0).cos(),
        m * ((theta - 2.0 * std::f64::consts::PI) / 3.0).cos(),
        m * ((theta - 4.0 * std::f64::consts::PI) / 3.0).cos(),
    ];
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(roots)
}

/// Build the normalized lattice from a purely imaginary period ratio.
pub fn lattice_from_tau(tau: Complex64) -> Result<PeriodLattice> {
    if tau.re.abs() > 1e-12 || tau.im <= 0.0 {
        return Err(Error::InvalidInput {
            detail: format!("period ratio must be purely imaginary with Im > 0, got {tau}"),
        });
    }
    let tau = c64(0.0, tau.im);
    // Unnormalized lattice with ω₁ = 1.
    let q2 = (-2.0 * std::f64::consts::PI * tau.im).exp();
    let (e4, e6) = eisenstein(q2);
    let pi = std::f64::consts::PI;
    let g2_0 = pi.powi(4) * e4 / 12.0;
    let g3_0 = pi.powi(6) * e6 / 216.0;
    let [e1_0, e3_0, e2_0] = branch_values(g2_0, g3_0)?;
    // Rescale by c so that e₁ − e₂ becomes 4: ℘(cz; cΛ) = c⁻²℘(z; Λ).
    let c = ((e1_0 - e2_0) / 4.0).sqrt();
    let c2 = c * c;
    let omega1 = c;
    let omega2 = tau * c;
    let g2 = g2_0 / (c2 * c2);
    let g3 = g3_0 / (c2 * c2 * c2);
    Ok(PeriodLattice {
        omega1,
        omega2,
        omega3: omega1 + omega2,
        tau,
        e1: e1_0 / c2,
        e2: e2_0 / c2,
        e3: e3_0 / c2,
        g2,
        g3,
        laurent: laurent_coefficients(g2, g3),
    })
}

impl PeriodLattice {
    /// Imaginary part of ω₂ (the lattice is rectangular).
    pub fn omega2_im(&self) -> f64 {
        self.omega2.im
    }

    /// The same lattice scaled by `c` (drops the e₁ − e₂ = 4 normalization);
    /// used to exercise the homogeneity law in tests.
    pub fn scaled(&self, c: f64) -> PeriodLattice {
        let c2 = c * c;
        let g2 = self.g2 / (c2 * c2);
        let g3 = self.g3 / (c2 * c2 * c2);
        PeriodLattice {
            omega1: self.omega1 * c,
            omega2: self.omega2 * c,
            omega3: self.omega3 * c,
            tau: self.tau,
            e1: self.e1 / c2,
            e2: self.e2 / c2,
            e3: self.e3 / c2,
            g2,
            g3,
            laurent: laurent_coefficients(g2, g3),
        }
    }
}

/// Weierstrass ℘ for the lattice 2ω₁ℤ + 2ω₂ℤ.
///
/// Arguments are reduced modulo the periods, halved into the convergence
/// disk of the Laurent series, then pushed back out with the duplication
/// formula.
pub fn wp(z: Complex64, lat: &PeriodLattice) -> Result<Complex64> {
    let two_w1 = 2.0 * lat.omega1;
    let two_w2 = 2.0 * lat.omega2_im();
    let x = z.re - two_w1 * (z.re / two_w1).round();
    let y = z.im - two_w2 * (z.im / two_w2).round();
    let mut u = c64(x, y);
    let scale = lat.omega1.min(lat.omega2_im());
    if u.norm() < 1e-12 * scale {
        return Err(Error::LatticePointPole);
    }
    let r_conv = 2.0 * scale;
    let mut halvings = 0u32;
    while u.norm() > 0.45 * r_conv {
        u *= 0.5;
        halvings += 1;
    }
    // Laurent series at the reduced argument.
    let u2 = u * u;
    let mut p = 1.0 / u2;
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 2..=LAURENT_TERMS {
        pow *= u2;
        p += lat.laurent[k] * pow;
    }
    // Duplication: ℘(2u) = −2℘ + (6℘² − g₂/2)² / (4(4℘³ − g₂℘ − g₃)).
    for _ in 0..halvings {
        let num = 6.0 * p * p - 0.5 * lat.g2;
        let den = 4.0 * (4.0 * p * p * p - lat.g2 * p - lat.g3);
        if den.norm() < 1e-280 {
            return Err(Error::LatticePointPole);
        }
        p = -2.0 * p + num * num / den;
    }
    Ok(p)
}
