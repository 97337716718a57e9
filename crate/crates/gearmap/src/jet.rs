//! 1-jets and 2-jets of holomorphic maps.
//!
//! A 2-jet `(f(z), f'(z), f''(z))` determines the solution of a Schwarzian
//! differential equation uniquely, so jets are the currency every other
//! module trades in.

use num_complex::Complex64;

/// Value and first derivative of a solution at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Jet1 {
    pub fn new(value: impl Into<Complex64>, deriv: impl Into<Complex64>) -> Self {
        Jet1 {
            value: value.into(),
            deriv: deriv.into(),
        }
    }
}

/// Value, first and second derivative of a map at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet2 {
    pub fn new(
        value: impl Into<Complex64>,
        d1: impl Into<Complex64>,
        d2: impl Into<Complex64>,
    ) -> Self {
        Jet2 {
            value: value.into(),
            d1: d1.into(),
            d2: d2.into(),
        }
    }

    /// Jet of the identity map at `z`.
    pub fn identity_at(z: Complex64) -> Self {
        Jet2::new(z, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

/// 2-jet of a composition `g ∘ f` from the jets of the factors.
///
/// `inner` is the jet of `f` at `z0` and `outer` the jet of `g` at `f(z0)`;
/// the result is `(b0, a1·b1, a1²·b2 + a2·b1)`.
pub fn compose_jet2(outer: &Jet2, inner: &Jet2) -> Jet2 {
    Jet2 {
        value: outer.value,
        d1: inner.d1 * outer.d1,
        d2: inner.d1 * inner.d1 * outer.d2 + inner.d2 * outer.d1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_outer_passes_inner_through() {
        let inner = Jet2::new(c(0.3, 0.1), c(1.2, -0.4), c(0.5, 0.9));
        let outer = Jet2::identity_at(inner.value);
        let j = compose_jet2(&outer, &inner);
        assert_eq!(j.value, inner.value);
        assert_eq!(j.d1, inner.d1);
        assert_eq!(j.d2, inner.d2);
    }

    #[test]
    fn identity_inner_is_neutral() {
        // T_0 is the identity, so J_{f∘T_0}(0) = J_f(0).
        let outer = Jet2::new(c(2.0, 1.0), c(0.5, 0.0), c(-1.0, 3.0));
        let inner = Jet2::identity_at(c(0.0, 0.0));
        let j = compose_jet2(&outer, &inner);
        assert_eq!(j.value, outer.value);
        assert_eq!(j.d1, outer.d1);
        assert_eq!(j.d2, outer.d2);
    }

    #[test]
    fn square_after_disk_automorphism() {
        // f(z) = z², q = 1/2: f∘T_q(z) = ((z-1/2)/(1-z/2))².
        // Expansion at 0 gives the jet (1/4, -3/4, 3/8).
        let q: f64 = 0.5;
        let tq0 = Jet2::new(c(-q, 0.0), c(1.0 - q * q, 0.0), c(2.0 * q * (1.0 - q * q), 0.0));
        let w = tq0.value;
        let f_at_w = Jet2::new(w * w, 2.0 * w, c(2.0, 0.0));
        let j = compose_jet2(&f_at_w, &tq0);
        assert!((j.value - c(0.25, 0.0)).norm() < 1e-15);
        assert!((j.d1 - c(-0.75, 0.0)).norm() < 1e-15);
        assert!((j.d2 - c(0.375, 0.0)).norm() < 1e-15);
    }
}
