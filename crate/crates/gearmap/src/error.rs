//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// The ODE coefficient blew up on the integration path.
    #[error("ode coefficient overflowed on the path near {at}")]
    PoleOnPath { at: Complex64 },
    /// Adaptive step control could not reach the requested local error.
    #[error("integration tolerance not met: {detail}")]
    ToleranceNotMet { detail: String },
    /// The first basis solution vanishes where a map value is requested.
    #[error("basis solution y1 vanishes at {at}; quotient map has a pole there")]
    DivisionByZeroSolution { at: Complex64 },
    /// Evaluation too close to a prevertex pole of the Schwarzian.
    #[error("schwarzian evaluated too close to a prevertex at z = {z}")]
    PrevertexSingularity { z: Complex64 },
    /// A Möbius transformation was evaluated at its pole.
    #[error("möbius transformation has a pole at z = {z}")]
    PoleAtPoint { z: Complex64 },
    /// Integration path of the elliptic integral passes too close to a branch point.
    #[error("integration path passes within {dist:e} of a branch point")]
    BranchAmbiguity { dist: f64 },
    /// Weierstrass ℘ evaluated at a lattice point.
    #[error("weierstrass function evaluated at a lattice point")]
    LatticePointPole,
    /// Curvature requested where the map derivative vanishes.
    #[error("map derivative vanishes at the requested boundary point")]
    ZeroDerivative,
    /// The boundary data does not describe a pregear.
    #[error("boundary data is not a pregear: {detail}")]
    NotAPregear { detail: String },
    /// Numerical inversion of the map on the real axis failed.
    #[error("numerical inversion failed: {detail}")]
    InversionFailed { detail: String },
    /// Multitooth construction requires a gear map fixing the gear center.
    #[error("map is not centered: |f(0)| = {offset:e}")]
    NotCentered { offset: f64 },
    /// The SPPS seed solution vanishes on the ray.
    #[error("spps seed solution vanishes on the ray (min |y| = {min_abs:e})")]
    SeedVanishes { min_abs: f64 },
    /// The SPPS series tail is too large at the requested order.
    #[error("spps tail too large at order {order}: {tail:e} vs budget {budget:e}")]
    TailTooLarge { order: usize, tail: f64, budget: f64 },
    /// A bracketed root search found no sign change.
    #[error("no root found: {detail}")]
    NoRoot { detail: String },
    /// The gear condition quadratic has no real roots.
    #[error("gear condition quadratic has no real roots (discriminant {disc:e})")]
    NoRealRoots { disc: f64 },
    /// Rectangle Schwarzian evaluated at a double-pole vertex.
    #[error("rectangle schwarzian has a pole at the left vertices; zeta = {zeta}")]
    PoleAtVertex { zeta: Complex64 },
    /// Broyden iteration left the region where the forward map is defined.
    #[error("broyden iterate left the region of gearlikeness and restarts were exhausted")]
    LeftRegion,
    /// Iteration budget exhausted.
    #[error("{what} did not converge within {limit} iterations")]
    MaxIterations { what: String, limit: usize },
    /// Adaptive quadrature failed to converge.
    #[error("quadrature failure: {detail}")]
    QuadratureFailure { detail: String },
    /// Invalid argument outside any numerical failure.
    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },
}

impl Error {
    /// Stable short name of the error variant, used by the CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::PoleOnPath { .. } => "PoleOnPath",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::DivisionByZeroSolution { .. } => "DivisionByZeroSolution",
            Error::PrevertexSingularity { .. } => "PrevertexSingularity",
            Error::PoleAtPoint { .. } => "PoleAtPoint",
            Error::BranchAmbiguity { .. } => "BranchAmbiguity",
            Error::LatticePointPole => "LatticePointPole",
            Error::ZeroDerivative => "ZeroDerivative",
            Error::NotAPregear { .. } => "NotAPregear",
            Error::InversionFailed { .. } => "InversionFailed",
            Error::NotCentered { .. } => "NotCentered",
            Error::SeedVanishes { .. } => "SeedVanishes",
            Error::TailTooLarge { .. } => "TailTooLarge",
            Error::NoRoot { .. } => "NoRoot",
            Error::NoRealRoots { .. } => "NoRealRoots",
            Error::PoleAtVertex { .. } => "PoleAtVertex",
            Error::LeftRegion => "LeftRegion",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::InvalidInput { .. } => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
