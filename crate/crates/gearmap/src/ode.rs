//! Path integration of 2y″ + Q(z)·y = 0 for a pair of solutions.
//!
//! The two solutions are propagated together as the first-order complex
//! system (y₁, y₁′, y₂, y₂′) along a straight segment, with an embedded
//! Dormand–Prince 5(4) pair and standard step-size control. The Wronskian
//! y₁y₂′ − y₂y₁′ is constant for this equation and is monitored as a global
//! error proxy; it is never re-imposed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet1, Jet2};

/// Straight integration segment in the z-plane.
#[derive(Clone, Copy, Debug)]
pub struct PathSpec {
    pub start: Complex64,
    pub end: Complex64,
}

impl PathSpec {
    pub fn new(start: Complex64, end: Complex64) -> Result<Self> {
        if (end - start).norm() == 0.0 {
            return Err(Error::InvalidInput {
                detail: "degenerate path: start == end".into(),
            });
        }
        Ok(PathSpec { start, end })
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    pub fn point(&self, sigma: f64) -> Complex64 {
        self.start + (self.end - self.start) * sigma
    }
}

/// Endpoint data of the two propagated solutions, with z-plane derivatives.
#[derive(Clone, Copy, Debug)]
pub struct OdeBasis {
    pub at: Complex64,
    pub y1: Jet1,
    pub y2: Jet1,
    pub wronskian: Complex64,
    /// Relative Wronskian drift accumulated over the integration.
    pub drift: f64,
}

/// Relative Wronskian drift budget at the default tolerance; for coarser
/// tolerances the budget scales as 10·tol.
pub const WRONSKIAN_DRIFT_BUDGET: f64 = 1e-9;

fn drift_budget(tol: f64) -> f64 {
    WRONSKIAN_DRIFT_BUDGET.max(10.0 * tol)
}

/// Default local error tolerance per unit path length.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_STEPS: usize = 2_000_000;
const COEFF_OVERFLOW: f64 = 1e14;

#[derive(Clone, Copy)]
struct State([Complex64; 4]);

fn wronskian_of(s: &State) -> Complex64 {
    s.0[0] * s.0[3] - s.0[2] * s.0[1]
}

// Dormand–Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Integrator<'a> {
    coeff: &'a dyn Fn(Complex64) -> Result<Complex64>,
    path: PathSpec,
    /// (end − start)², multiplying the coefficient in path parameter σ ∈ [0,1].
    dir_sq: Complex64,
    tol: f64,
}

impl<'a> Integrator<'a> {
    /// Right-hand side in the path parameter: y″σ = −½·dir²·Q(z(σ))·y.
    fn rhs(&self, sigma: f64, s: &State) -> Result<State> {
        let z = self.path.point(sigma);
        let q = (self.coeff)(z)?;
        if !q.is_finite() || q.norm() > COEFF_OVERFLOW {
            return Err(Error::PoleOnPath { at: z });
        }
        let m = -0.5 * self.dir_sq * q;
        Ok(State([s.0[1], m * s.0[0], s.0[3], m * s.0[2]]))
    }

    fn step(&self, sigma: f64, s: &State, h: f64, k1: &State) -> Result<(State, f64, State)> {
        let mut k = [State([Complex64::default(); 4]); 7];
        k[0] = *k1;
        for i in 1..7 {
            let mut yi = *s;
            for (j, kj) in k.iter().enumerate().take(i) {
                let w = A[i][j] * h;
                if w != 0.0 {
                    for m in 0..4 {
                        yi.0[m] += kj.0[m] * w;
                    }
                }
            }
            k[i] = self.rhs(sigma + C[i] * h, &yi)?;
        }
        let mut y5 = *s;
        let mut err = State([Complex64::default(); 4]);
        for (i, ki) in k.iter().enumerate() {
            let wb = B5[i] * h;
            let we = (B5[i] - B4[i]) * h;
            for m in 0..4 {
                y5.0[m] += ki.0[m] * wb;
                err.0[m] += ki.0[m] * we;
            }
        }
        // Weighted RMS error against atol = rtol = tol.
        let mut acc = 0.0;
        for m in 0..4 {
            let sc = self.tol * (1.0 + s.0[m].norm().max(y5.0[m].norm()));
            let e = err.0[m].norm() / sc;
            acc += e * e;
        }
        let errn = (acc / 4.0).sqrt();
        // FSAL: k7 evaluated at sigma + h is the next step's k1.
        Ok((y5, errn, k[6]))
    }
}

fn run(
    coeff: &dyn Fn(Complex64) -> Result<Complex64>,
    path: PathSpec,
    init1: Jet1,
    init2: Jet1,
    tol: f64,
    captures: &[f64],
    mut on_accept: Option<&mut dyn FnMut(f64, Complex64, Complex64)>,
) -> Result<Vec<OdeBasis>> {
    if tol <= 0.0 {
        return Err(Error::InvalidInput {
            detail: "tolerance must be positive".into(),
        });
    }
    let dir = path.end - path.start;
    let integ = Integrator {
        coeff,
        path,
        dir_sq: dir * dir,
        tol,
    };
    // Derivatives are tracked in the path parameter: dy/dσ = dir · dy/dz.
    let mut s = State([
        init1.value,
        init1.deriv * dir,
        init2.value,
        init2.deriv * dir,
    ]);
    let w0 = wronskian_of(&s);
    let mut sigma = 0.0_f64;
    let mut h = 0.05_f64;
    let mut k1 = integ.rhs(0.0, &s)?;
    let mut out = Vec::with_capacity(captures.len());
    let mut next_capture = 0usize;
    let h_min = 1e-14;

    let snapshot = |sigma: f64, s: &State, w0: Complex64| -> OdeBasis {
        let w = wronskian_of(s) / dir;
        OdeBasis {
            at: path.point(sigma),
            y1: Jet1::new(s.0[0], s.0[1] / dir),
            y2: Jet1::new(s.0[2], s.0[3] / dir),
            wronskian: w,
            drift: if w0.norm() > 0.0 {
                (wronskian_of(s) - w0).norm() / w0.norm()
            } else {
                0.0
            },
        }
    };

    for cap in captures {
        if !(0.0..=1.0).contains(cap) {
            return Err(Error::InvalidInput {
                detail: "capture fractions must lie in [0, 1]".into(),
            });
        }
    }
    // Capture at σ = 0 if requested.
    while next_capture < captures.len() && captures[next_capture] <= 0.0 {
        out.push(snapshot(0.0, &s, w0));
        next_capture += 1;
    }

    for _ in 0..MAX_STEPS {
        if sigma >= 1.0 {
            break;
        }
        let mut target = 1.0_f64;
        if next_capture < captures.len() {
            target = target.min(captures[next_capture]);
        }
        if h > target - sigma {
            h = target - sigma;
        }
        let (y_new, errn, k_last) = integ.step(sigma, &s, h, &k1)?;
        if errn <= 1.0 {
            sigma += h;
            s = y_new;
            k1 = k_last;
            if let Some(cb) = on_accept.as_deref_mut() {
                cb(sigma, path.point(sigma), s.0[2] / s.0[0]);
            }
            while next_capture < captures.len() && sigma >= captures[next_capture] - 1e-15 {
                out.push(snapshot(sigma, &s, w0));
                next_capture += 1;
            }
            let fac = (0.9 * errn.powf(-0.2)).clamp(0.2, 5.0);
            h = (h * fac).min(1.0);
            if sigma < 1.0 && h < h_min {
                return Err(Error::ToleranceNotMet {
                    detail: format!("step size underflow at sigma = {sigma}"),
                });
            }
        } else {
            let fac = (0.9 * errn.powf(-0.2)).clamp(0.1, 1.0);
            h *= fac;
            if h < h_min {
                return Err(Error::ToleranceNotMet {
                    detail: format!("step size underflow at sigma = {sigma}"),
                });
            }
            // Re-evaluate k1 not needed: state unchanged.
        }
    }
    if sigma < 1.0 {
        return Err(Error::MaxIterations {
            what: "ode integration".into(),
            limit: MAX_STEPS,
        });
    }
    let end = snapshot(1.0, &s, w0);
    if end.drift > drift_budget(tol) {
        return Err(Error::ToleranceNotMet {
            detail: format!("wronskian drift {:e} exceeded budget", end.drift),
        });
    }
    out.push(end);
    Ok(out)
}

/// Integrate 2y″ + coeff(z)·y = 0 along `path` and return the endpoint basis.
///
/// `init1`, `init2` are z-plane 1-jets of the two solutions at `path.start`.
pub fn integrate_basis(
    coeff: &dyn Fn(Complex64) -> Result<Complex64>,
    path: PathSpec,
    init1: Jet1,
    init2: Jet1,
    tol: f64,
) -> Result<OdeBasis> {
    let mut v = run(coeff, path, init1, init2, tol, &[], None)?;
    Ok(v.pop().expect("endpoint basis"))
}

/// Same as [`integrate_basis`] but also captures the basis at the given
/// fractions of the path (sorted ascending). The endpoint is appended last.
pub fn integrate_with_captures(
    coeff: &dyn Fn(Complex64) -> Result<Complex64>,
    path: PathSpec,
    init1: Jet1,
    init2: Jet1,
    tol: f64,
    captures: &[f64],
) -> Result<Vec<OdeBasis>> {
    for w in captures.windows(2) {
        if w[0] > w[1] {
            return Err(Error::InvalidInput {
                detail: "capture fractions must be sorted".into(),
            });
        }
    }
    run(coeff, path, init1, init2, tol, captures, None)
}

/// Integrate and report the quotient y₂/y₁ at every accepted step. Used for
/// branch tracking along radial rays.
pub fn integrate_observing(
    coeff: &dyn Fn(Complex64) -> Result<Complex64>,
    path: PathSpec,
    init1: Jet1,
    init2: Jet1,
    tol: f64,
    on_accept: &mut dyn FnMut(f64, Complex64, Complex64),
) -> Result<OdeBasis> {
    let mut v = run(coeff, path, init1, init2, tol, &[], Some(on_accept))?;
    Ok(v.pop().expect("endpoint basis"))
}

/// 2-jet of the quotient map f = y₂/y₁ from a basis with Wronskian W:
/// (y₂/y₁, W/y₁², −2W·y₁′/y₁³).
pub fn jet_of_quotient(basis: &OdeBasis) -> Result<Jet2> {
    let y1 = basis.y1.value;
    if y1.norm() < 1e-12 {
        return Err(Error::DivisionByZeroSolution { at: basis.at });
    }
    let w = basis.wronskian;
    Ok(Jet2 {
        value: basis.y2.value / y1,
        d1: w / (y1 * y1),
        d2: -2.0 * w * basis.y1.deriv / (y1 * y1 * y1),
    })
}
