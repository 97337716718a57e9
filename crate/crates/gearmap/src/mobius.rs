//! Möbius transformations, normalized to determinant one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet2;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Which of the two tooth-circle intersection points lies inside the pregear.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteriorPoint {
    BMinus,
    BPlus,
}

/// The transformation z ↦ (az + b)/(cz + d) with ad − bc = 1.
#[derive(Clone, Copy, Debug)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    /// Build from raw coefficients, rescaling so the determinant is one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-300 {
            return Err(Error::InvalidInput {
                detail: "möbius coefficients are singular".into(),
            });
        }
        let s = det.sqrt();
        Ok(MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: c64(1.0, 0.0),
            b: c64(0.0, 0.0),
            c: c64(0.0, 0.0),
            d: c64(1.0, 0.0),
        }
    }

    /// The disk automorphism T_q(z) = (z − q)/(1 − qz) for real q in (−1, 1).
    pub fn disk_automorphism(q: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&q) || q.abs() >= 1.0 {
            return Err(Error::InvalidInput {
                detail: format!("disk automorphism parameter q = {q} outside (-1, 1)"),
            });
        }
        MobiusMap::new(c64(1.0, 0.0), c64(-q, 0.0), c64(-q, 0.0), c64(1.0, 0.0))
    }

    /// The translation z ↦ z − x0.
    pub fn translation(x0: Complex64) -> Self {
        MobiusMap {
            a: c64(1.0, 0.0),
            b: -x0,
            c: c64(0.0, 0.0),
            d: c64(1.0, 0.0),
        }
    }

    /// The normalizing transformation sending the interior tooth-circle
    /// intersection point to 0 and the other one to ∞:
    /// −(z − b⁻)/(z − b⁺) when b⁻ is interior, (z − b⁺)/(z − b⁻) otherwise.
    /// Either way it fixes ℝ ∪ {∞} and has positive derivative on ℝ.
    pub fn pregear_normalizer(b_minus: f64, b_plus: f64, interior: InteriorPoint) -> Result<Self> {
        if !(b_minus < b_plus) {
            return Err(Error::InvalidInput {
                detail: format!("pregear normalizer needs b- < b+, got {b_minus}, {b_plus}"),
            });
        }
        match interior {
            InteriorPoint::BMinus => MobiusMap::new(
                c64(-1.0, 0.0),
                c64(b_minus, 0.0),
                c64(1.0, 0.0),
                c64(-b_plus, 0.0),
            ),
            InteriorPoint::BPlus => MobiusMap::new(
                c64(1.0, 0.0),
                c64(-b_plus, 0.0),
                c64(1.0, 0.0),
                c64(-b_minus, 0.0),
            ),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Derivative (ad − bc)/(cz + d)² = 1/(cz + d)².
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }

    pub fn pole(&self) -> Option<Complex64> {
        if self.c.norm() < 1e-300 {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Composition self ∘ other.
    pub fn compose(&self, other: &MobiusMap) -> Self {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Exact 2-jet (T(z0), T'(z0), T''(z0)).
    pub fn jet_at(&self, z0: Complex64) -> Result<Jet2> {
        let den = self.c * z0 + self.d;
        if den.norm() < 1e-13 * (1.0 + z0.norm()) {
            return Err(Error::PoleAtPoint { z: z0 });
        }
        let det = self.a * self.d - self.b * self.c;
        let d1 = det / (den * den);
        let d2 = -2.0 * self.c * det / (den * den * den);
        Ok(Jet2 {
            value: (self.a * z0 + self.b) / den,
            d1,
            d2,
        })
    }
}

/// Exact jet of a Möbius transformation at a point (errors at the pole).
pub fn mobius_jet(map: &MobiusMap, z0: Complex64) -> Result<Jet2> {
    map.jet_at(z0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_jet() {
        let id = MobiusMap::identity();
        let z = c64(0.3, -0.7);
        let j = id.jet_at(z).unwrap();
        assert_eq!(j.value, z);
        assert_eq!(j.d1, c64(1.0, 0.0));
        assert_eq!(j.d2, c64(0.0, 0.0));
    }

    #[test]
    fn normalizer_jets_at_interior_point() {
        // With b⁻ interior the jet at b⁻ is (0, 1/(b⁺−b⁻), +2/(b⁺−b⁻)²);
        // with b⁺ interior the jet at b⁺ is (0, 1/(b⁺−b⁻), −2/(b⁺−b⁻)²).
        let (bm, bp) = (0.3_f64, 2.1_f64);
        let gap = bp - bm;

        let t = MobiusMap::pregear_normalizer(bm, bp, InteriorPoint::BMinus).unwrap();
        let j = t.jet_at(c64(bm, 0.0)).unwrap();
        assert!(j.value.norm() < 1e-15);
        assert!((j.d1 - c64(1.0 / gap, 0.0)).norm() < 1e-14);
        assert!((j.d2 - c64(2.0 / (gap * gap), 0.0)).norm() < 1e-14);

        let t = MobiusMap::pregear_normalizer(bm, bp, InteriorPoint::BPlus).unwrap();
        let j = t.jet_at(c64(bp, 0.0)).unwrap();
        assert!(j.value.norm() < 1e-15);
        assert!((j.d1 - c64(1.0 / gap, 0.0)).norm() < 1e-14);
        assert!((j.d2 - c64(-2.0 / (gap * gap), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn normalizer_sends_b_points_to_zero_and_infinity() {
        let (bm, bp) = (-0.4_f64, 1.7_f64);
        for interior in [InteriorPoint::BMinus, InteriorPoint::BPlus] {
            let t = MobiusMap::pregear_normalizer(bm, bp, interior).unwrap();
            let b_int = match interior {
                InteriorPoint::BMinus => bm,
                InteriorPoint::BPlus => bp,
            };
            let b_ext = match interior {
                InteriorPoint::BMinus => bp,
                InteriorPoint::BPlus => bm,
            };
            assert!(t.apply(c64(b_int, 0.0)).norm() < 1e-12);
            assert_eq!(t.pole().map(|p| (p - c64(b_ext, 0.0)).norm() < 1e-12), Some(true));
            // Positive derivative on the real line away from the pole.
            for x in [-0.9, 0.0, 0.9, 3.0] {
                if (x - b_ext).abs() > 1e-6 {
                    let d = t.derivative(c64(x, 0.0));
                    assert!(d.im.abs() < 1e-14 && d.re > 0.0, "T' at {x} = {d}");
                }
            }
        }
    }

    #[test]
    fn pole_detected() {
        let t = MobiusMap::pregear_normalizer(0.0, 1.0, InteriorPoint::BMinus).unwrap();
        assert!(matches!(
            t.jet_at(c64(1.0, 0.0)),
            Err(Error::PoleAtPoint { .. })
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let q = 0.37;
        let t = MobiusMap::disk_automorphism(q).unwrap();
        let inv = t.inverse();
        let z = c64(0.2, 0.5);
        assert!((inv.apply(t.apply(z)) - z).norm() < 1e-14);
        // T_q⁻¹ = T_{−q}.
        let tm = MobiusMap::disk_automorphism(-q).unwrap();
        assert!((inv.apply(z) - tm.apply(z)).norm() < 1e-14);
    }

    mod properties {
        use super::*;
        use crate::jet::compose_jet2;
        use proptest::prelude::*;

        fn arb_mobius() -> impl Strategy<Value = MobiusMap> {
            (
                -2.0f64..2.0,
                -2.0f64..2.0,
                -0.4f64..0.4,
                -0.4f64..0.4,
            )
                .prop_filter_map("nonsingular", |(a, b, c, d)| {
                    MobiusMap::new(
                        c64(1.0 + a, b),
                        c64(b * 0.5, a * 0.3),
                        c64(c, d),
                        c64(1.0 + d, c * 0.2),
                    )
                    .ok()
                })
        }

        proptest! {
            #[test]
            fn composition_agrees_with_pointwise(s in arb_mobius(), t in arb_mobius(),
                                                 re in -0.7f64..0.7, im in -0.7f64..0.7) {
                let z = c64(re, im);
                let st = s.compose(&t);
                let direct = st.apply(z);
                let nested = s.apply(t.apply(z));
                prop_assume!(direct.is_finite() && nested.is_finite());
                prop_assert!((direct - nested).norm() < 1e-10 * (1.0 + nested.norm()));
            }

            #[test]
            fn jet_chain_rule_matches_finite_differences(s in arb_mobius(), t in arb_mobius(),
                                                         re in -0.5f64..0.5, im in -0.5f64..0.5) {
                // compose_jet2 against nested finite-difference jets of s∘t.
                let z = c64(re, im);
                let inner = match t.jet_at(z) { Ok(j) => j, Err(_) => return Ok(()) };
                let outer = match s.jet_at(inner.value) { Ok(j) => j, Err(_) => return Ok(()) };
                prop_assume!(inner.is_finite() && outer.is_finite());
                prop_assume!(inner.d1.norm() > 1e-3 && outer.d1.norm() > 1e-3);
                prop_assume!(inner.value.norm() < 5.0 && outer.value.norm() < 5.0);
                // Keep the stencil away from the poles of both maps.
                let h = 1e-3;
                for pole in [s.pole().map(|p| t.inverse().apply(p)), t.pole()].into_iter().flatten() {
                    prop_assume!((pole - z).norm() > 0.1);
                }
                let composed = compose_jet2(&outer, &inner);
                let f = |w: Complex64| s.apply(t.apply(w));
                let fp = |k: f64| f(z + c64(k * h, 0.0));
                let d1 = (-fp(2.0) + 8.0 * fp(1.0) - 8.0 * fp(-1.0) + fp(-2.0)) / (12.0 * h);
                let d2 = (-fp(2.0) + 16.0 * fp(1.0) - 30.0 * fp(0.0) + 16.0 * fp(-1.0) - fp(-2.0))
                    / (12.0 * h * h);
                let scale = 1.0 + composed.d1.norm().max(composed.d2.norm());
                prop_assert!((composed.d1 - d1).norm() < 1e-6 * scale,
                             "d1 {} vs fd {}", composed.d1, d1);
                prop_assert!((composed.d2 - d2).norm() < 1e-6 * scale,
                             "d2 {} vs fd {}", composed.d2, d2);
            }
        }
    }
}
