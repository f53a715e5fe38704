//! Rational constants of the estimators.
//!
//! They are kept as exact fractions so tests can check the linear identities
//! between them in rational arithmetic; the estimators use [`Frac::value`].

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

impl Frac {
    pub const fn new(num: i64, den: i64) -> Self {
        Self { num, den }
    }

    pub const fn int(num: i64) -> Self {
        Self { num, den: 1 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `tau2_local = TAU_SCALE (n/k) (Delta s2)^2 - TAU_BIAS (n/k^2) s4`.
pub const TAU_SCALE: Frac = Frac::new(3, 2);
pub const TAU_BIAS: Frac = Frac::int(6);
/// `s4 = QUARTICITY_SCALE (n^2/k) sum |Delta X|^4`.
pub const QUARTICITY_SCALE: Frac = Frac::new(1, 3);

/// Limit of G3 in terms of `(sigma^8 / c^4, sigma^4 tau^2 / c^2, tau^4)`.
pub const G3_LIMIT: [Frac; 3] = [Frac::int(48), Frac::int(16), Frac::new(4, 3)];

/// Conditional variance density `alpha^2` in the same basis.
pub const ALPHA2: [Frac; 3] = [Frac::int(48), Frac::int(12), Frac::new(151, 70)];

/// `C_hat = C_G3 G3 - C_G2 (n/k^2) G2 - C_G1 (n^2/k^4) G1`.
pub const C_G3: Frac = Frac::new(453, 280);
pub const C_G2: Frac = Frac::new(486, 35);
pub const C_G1: Frac = Frac::new(1038, 35);

/// `T_hat = T_G3 G3 - T_G2 (n/k^2) G2 - T_G1 (n^2/k^4) G1`.
pub const T_G3: Frac = Frac::new(3, 4);
pub const T_G2: Frac = Frac::int(12);
pub const T_G1: Frac = Frac::int(36);

/// Eighth-power correction of the local `alpha^2` estimator.
pub const ALPHA_EIGHTH: Frac = Frac::new(346, 1225);

/// Weights `(48/c^4, 12/c^2, 151/70)` of `alpha^2` for window constant `c`.
pub fn alpha2_weights(c: f64) -> (f64, f64, f64) {
    let c2 = c * c;
    (ALPHA2[0].value() / (c2 * c2), ALPHA2[1].value() / c2, ALPHA2[2].value())
}

/// One-line listing of every constant, embedded in the CLI version string.
pub fn describe() -> String {
    format!(
        "tau2: {}*(n/k)*dS2^2 - {}*(n/k^2)*S4; S4 scale {}; C_hat: {}*G3 - {}*(n/k^2)*G2 - {}*(n^2/k^4)*G1; \
         T_hat: {}*G3 - {}*(n/k^2)*G2 - {}*(n^2/k^4)*G1; alpha2: [{}, {}, {}]; eighth-power: {}",
        TAU_SCALE,
        TAU_BIAS,
        QUARTICITY_SCALE,
        C_G3,
        C_G2,
        C_G1,
        T_G3,
        T_G2,
        T_G1,
        ALPHA2[0],
        ALPHA2[1],
        ALPHA2[2],
        ALPHA_EIGHTH
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_display() {
        assert_eq!(C_G3.value(), 453.0 / 280.0);
        assert_eq!(T_G2.to_string(), "12");
        assert_eq!(ALPHA2[2].to_string(), "151/70");
        assert!(describe().contains("453/280"));
        let (a, b, c) = alpha2_weights(2.0);
        assert_eq!((a, b, c), (3.0, 3.0, 151.0 / 70.0));
    }
}
