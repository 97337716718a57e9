//! Numerical conformal mapping onto one-tooth gear domains.
//!
//! A one-tooth gear domain is the union of a disk and a sector of a larger
//! concentric disk. This crate computes conformal maps from the unit disk
//! and from rectangles onto such domains through the Schwarzian-derivative
//! parametrization, measures and prescribes the gear geometry, and exports
//! the results as labeled polylines.
//!
//! The guide under `book/` walks through the machinery; its code snippets
//! are compiled as doc-tests against this crate.

pub mod curves;
pub mod elliptic;
pub mod error;
pub mod geartools;
pub mod goodman;
pub mod jet;
pub mod mobius;
pub mod ode;
pub mod quad;
pub mod rectmap;
pub mod schwarzian;
pub mod solver;
pub mod spps;

pub use curves::{Curve, CurveRole, CurveSet, Meta, RunConfig};
pub use elliptic::{elliptic_e, elliptic_e_path, lattice_from_tau, module_m, wp, PeriodLattice};
pub use error::{Error, Result};
pub use geartools::{
    analyze_pregear, analyze_pregear_at, analyze_pregear_from_jets, arc_centers, curvature_at,
    gear_normalize, multitooth, renormalized_gear_map, reposition_center, trace_pregear,
    BoundaryTrace, DiskMap, EdgeLabel, EdgeTrace, GearMap, GearParams, MultitoothMap,
    PregearGeometry, RealAxisTable, ToothProbe, ToothShape,
};
pub use jet::{compose_jet2, Jet1, Jet2};
pub use mobius::{mobius_jet, InteriorPoint, MobiusMap};
pub use ode::{integrate_basis, integrate_with_captures, jet_of_quotient, OdeBasis, PathSpec};
pub use goodman::{
    fd_schwarzian, gear_prevertices, goodman_explicit_map, goodman_log_integral,
    goodman_ratio_integral, goodman_ratio_jet,
};
pub use rectmap::{
    alpha_roots, annular_rectangle_boundary_distance, corner_jets,
    exterior_modulus_annular_rectangle, map_rectangle, measure_rect_gear, mu_from_lambda,
    parametric_curvature, phi, rect_params_from_disk, AlphaRoots, CornerJets, RectCurves, RectMap,
    RectParams,
};
pub use schwarzian::{eval_r, eval_r_degenerate, psi0, psi1, MapParams, Schwarzian};
pub use solver::{
    forward, invert, invert_observed, lambda_bounds, level_curves, limit_lambda, InvertOptions,
    LevelCurve, LevelKind,
};
pub use spps::{
    build_spps, build_spps_custom, lambda_functionals, solve_kappa_value, solve_kappa_zero,
    LambdaFunctional, Ray, SppsOptions, SppsTable,
};

// The guide's code blocks compile and run as doc-tests so the book stays
// in sync with the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/gear-domains.md")]
    pub struct GearDomains;
    #[doc = include_str!("../../../book/src/disk-maps.md")]
    pub struct DiskMaps;
    #[doc = include_str!("../../../book/src/normalization.md")]
    pub struct Normalization;
    #[doc = include_str!("../../../book/src/spps.md")]
    pub struct Spps;
    #[doc = include_str!("../../../book/src/rectangle-maps.md")]
    pub struct RectangleMaps;
    #[doc = include_str!("../../../book/src/inverse-problem.md")]
    pub struct InverseProblem;
    #[doc = include_str!("../../../book/src/applications.md")]
    pub struct Applications;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
