//! Fermatean fuzzy numbers: a membership / non-membership pair `(mu, nu)`
//! with `mu^3 + nu^3 <= 1`.

mod aggregate;
mod scale;
mod weights;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use aggregate::{ffwa, ffwg, Aggregator};
pub use scale::{from_linguistic, LinguisticScale};
pub use weights::WeightVector;

/// Absolute tolerance accepted on `mu^3 + nu^3 <= 1` at construction.
pub const CUBE_SUM_TOLERANCE: f64 = 1e-9;

/// A Fermatean fuzzy number. Immutable; always satisfies the cube-sum bound
/// exactly once constructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFfn", into = "RawFfn")]
pub struct Ffn {
    mu: f64,
    nu: f64,
}

#[derive(Serialize, Deserialize)]
struct RawFfn {
    mu: f64,
    nu: f64,
}

impl TryFrom<RawFfn> for Ffn {
    type Error = Error;
    fn try_from(raw: RawFfn) -> Result<Self> {
        Ffn::new(raw.mu, raw.nu)
    }
}

impl From<Ffn> for RawFfn {
    fn from(f: Ffn) -> Self {
        RawFfn { mu: f.mu, nu: f.nu }
    }
}

/// Score, accuracy and normalized score of an [`Ffn`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    /// `(mu^3 - nu^3) / 2`, in `[-0.5, 0.5]`.
    pub score: f64,
    /// `(mu^3 + nu^3) / 2`, in `[0, 0.5]`.
    pub accuracy: f64,
    /// `(score + 1) / 2`, in `[0.25, 0.75]`.
    pub normalized_score: f64,
}

impl Ffn {
    pub const ONE: Ffn = Ffn { mu: 1.0, nu: 0.0 };
    pub const ZERO: Ffn = Ffn { mu: 0.0, nu: 1.0 };

    /// Validating constructor. Values whose cube sum exceeds 1 by no more
    /// than [`CUBE_SUM_TOLERANCE`] are pulled back onto the boundary.
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        for (what, v) in [("mu", mu), ("nu", nu)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain {
                    what,
                    value: v,
                    domain: "[0, 1]",
                });
            }
        }
        let sum = cube(mu) + cube(nu);
        if sum > 1.0 + CUBE_SUM_TOLERANCE {
            return Err(Error::CubeSum { mu, nu, sum });
        }
        Ok(Self::repair(mu, nu))
    }

    /// Constructor for results of closed operations, where any excursion is
    /// floating-point noise.
    pub(crate) fn clamped(mu: f64, nu: f64) -> Self {
        debug_assert!(!mu.is_nan() && !nu.is_nan());
        Self::repair(mu.clamp(0.0, 1.0), nu.clamp(0.0, 1.0))
    }

    fn repair(mut mu: f64, mut nu: f64) -> Self {
        let sum = cube(mu) + cube(nu);
        if sum > 1.0 {
            let k = sum.cbrt().recip();
            mu *= k;
            nu *= k;
            while cube(mu) + cube(nu) > 1.0 {
                if mu >= nu {
                    mu = next_down(mu);
                } else {
                    nu = next_down(nu);
                }
            }
        }
        Ffn { mu, nu }
    }

    pub fn mu(self) -> f64 {
        self.mu
    }

    pub fn nu(self) -> f64 {
        self.nu
    }

    /// `h^3 = 1 - mu^3 - nu^3`, never negative.
    pub fn hesitation_cubed(self) -> f64 {
        (1.0 - cube(self.mu) - cube(self.nu)).max(0.0)
    }

    /// Hesitancy degree `h = (1 - mu^3 - nu^3)^(1/3)`.
    pub fn hesitation(self) -> f64 {
        self.hesitation_cubed().cbrt()
    }

    pub fn complement(self) -> Self {
        Ffn {
            mu: self.nu,
            nu: self.mu,
        }
    }

    /// Intersection `(min mu, max nu)` and union `(max mu, min nu)`.
    pub fn lattice(self, other: Ffn) -> (Ffn, Ffn) {
        let meet = Ffn {
            mu: self.mu.min(other.mu),
            nu: self.nu.max(other.nu),
        };
        let join = Ffn {
            mu: self.mu.max(other.mu),
            nu: self.nu.min(other.nu),
        };
        (meet, join)
    }

    pub fn meet(self, other: Ffn) -> Ffn {
        self.lattice(other).0
    }

    pub fn join(self, other: Ffn) -> Ffn {
        self.lattice(other).1
    }

    /// Algebraic sum: membership combines as a probabilistic sum of cubes,
    /// non-membership multiplies.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Ffn) -> Ffn {
        let (a, b) = (cube(self.mu), cube(other.mu));
        Ffn::clamped((a + b - a * b).cbrt(), self.nu * other.nu)
    }

    /// Algebraic product, the dual of [`Ffn::add`].
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Ffn) -> Ffn {
        let (a, b) = (cube(self.nu), cube(other.nu));
        Ffn::clamped(self.mu * other.mu, (a + b - a * b).cbrt())
    }

    /// Scalar multiple `alpha * F`.
    pub fn scale(self, alpha: f64) -> Result<Ffn> {
        check_exponent(alpha)?;
        Ok(self.scale_unchecked(alpha))
    }

    pub(crate) fn scale_unchecked(self, alpha: f64) -> Ffn {
        Ffn::clamped(cube_sum_mean([(self.mu, alpha)]), self.nu.powf(alpha))
    }

    /// Power `F^alpha`, the dual of [`Ffn::scale`].
    pub fn power(self, alpha: f64) -> Result<Ffn> {
        check_exponent(alpha)?;
        Ok(Ffn::clamped(
            self.mu.powf(alpha),
            cube_sum_mean([(self.nu, alpha)]),
        ))
    }

    pub fn score(self) -> f64 {
        (cube(self.mu) - cube(self.nu)) / 2.0
    }

    pub fn accuracy(self) -> f64 {
        (cube(self.mu) + cube(self.nu)) / 2.0
    }

    pub fn normalized_score(self) -> f64 {
        (self.score() + 1.0) / 2.0
    }

    pub fn score_triple(self) -> ScoreTriple {
        let score = self.score();
        ScoreTriple {
            score,
            accuracy: self.accuracy(),
            normalized_score: (score + 1.0) / 2.0,
        }
    }

    /// Total order used wherever a best or worst FFN is needed: normalized
    /// score, then accuracy, then `mu`, then lower `nu`.
    pub fn rank_cmp(&self, other: &Ffn) -> Ordering {
        self.normalized_score()
            .total_cmp(&other.normalized_score())
            .then_with(|| self.accuracy().total_cmp(&other.accuracy()))
            .then_with(|| self.mu.total_cmp(&other.mu))
            .then_with(|| other.nu.total_cmp(&self.nu))
    }
}

impl fmt::Display for Ffn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(2);
        write!(f, "({:.p$}, {:.p$})", self.mu, self.nu)
    }
}

/// Crisp significance values: the normalized score of each FFN.
pub fn crisp_values(items: &[Ffn]) -> Vec<f64> {
    items.iter().map(|f| f.normalized_score()).collect()
}

#[inline]
pub(crate) fn cube(x: f64) -> f64 {
    x * x * x
}

/// `(1 - prod (1 - x_i^3)^w_i)^(1/3)` via `ln_1p`/`exp_m1`, which keeps full
/// relative precision for small `x_i`.
pub(crate) fn cube_sum_mean(terms: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut log_keep = 0.0;
    for (x, w) in terms {
        if w != 0.0 {
            log_keep += w * (-cube(x)).ln_1p();
        }
    }
    (-log_keep.exp_m1()).cbrt()
}

fn next_down(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

fn check_exponent(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "alpha",
            value: alpha,
            domain: "[0, inf)",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn f(mu: f64, nu: f64) -> Ffn {
        Ffn::new(mu, nu).unwrap()
    }

    #[test]
    fn construction() {
        let vi = f(0.85, 0.25);
        assert_eq!((vi.mu(), vi.nu()), (0.85, 0.25));
        assert_eq!(f(1.0, 0.0), Ffn::ONE);
        assert!(matches!(Ffn::new(0.95, 0.95), Err(Error::CubeSum { .. })));
        assert!(matches!(
            Ffn::new(1.2, 0.0),
            Err(Error::Domain { what: "mu", .. })
        ));
        assert!(matches!(
            Ffn::new(0.1, -0.1),
            Err(Error::Domain { what: "nu", .. })
        ));
        assert!(Ffn::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn construction_tolerance_clamps_onto_boundary() {
        // cbrt(0.5) twice: cube sum is 1 up to rounding
        let c = 0.5f64.cbrt() + 1e-12;
        let g = Ffn::new(c, c).unwrap();
        assert!(cube(g.mu()) + cube(g.nu()) <= 1.0);
        assert_abs_diff_eq!(g.mu(), c, epsilon = 1e-9);

        let over = (0.5 + 1e-8f64).cbrt();
        assert!(matches!(Ffn::new(over, over), Err(Error::CubeSum { .. })));
    }

    #[test]
    fn hesitation_values() {
        assert_eq!(Ffn::ONE.hesitation(), 0.0);
        assert_eq!(f(0.0, 0.0).hesitation(), 1.0);
        // oracle: cbrt(1 - 0.343 - 0.064)
        assert_abs_diff_eq!(
            f(0.7, 0.4).hesitation(),
            0.840_139_810_439_781_9,
            epsilon = 1e-12
        );
    }

    #[test]
    fn complement_examples() {
        assert_eq!(f(0.85, 0.25).complement(), f(0.25, 0.85));
        assert_eq!(f(0.5, 0.5).complement(), f(0.5, 0.5));
        assert_eq!(Ffn::ONE.complement(), Ffn::ZERO);
    }

    #[test]
    fn add_examples() {
        let x = f(0.6, 0.3);
        assert_eq!(Ffn::ZERO.add(x), x);
        assert_eq!(Ffn::ONE.add(x), Ffn::ONE);
        let s = f(0.7, 0.4).add(f(0.5, 0.5));
        // oracle: cbrt(0.343 + 0.125 - 0.042875), 0.4 * 0.5
        assert_abs_diff_eq!(s.mu(), 0.751_921_001_396_568_3, epsilon = 1e-12);
        assert_abs_diff_eq!(s.nu(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn mul_examples() {
        let x = f(0.6, 0.3);
        assert_eq!(Ffn::ONE.mul(x), x);
        assert_eq!(Ffn::ZERO.mul(x), Ffn::ZERO);
        let p = f(0.7, 0.4).mul(f(0.5, 0.5));
        assert_abs_diff_eq!(p.mu(), 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(p.nu(), 0.565_665_282_582_291_1, epsilon = 1e-12);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(f(0.7, 0.4).scale(1.0).unwrap(), f(0.7, 0.4));
        let w = f(0.92, 0.34).scale(0.205).unwrap();
        assert_abs_diff_eq!(w.mu(), 0.643_081_950_641_608_8, epsilon = 1e-12);
        assert_abs_diff_eq!(w.nu(), 0.801_591_637_808_762_3, epsilon = 1e-12);
        let d = f(0.5, 0.5).scale(2.0).unwrap();
        assert_abs_diff_eq!(d.mu(), 0.616_553_018_582_617_5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.nu(), 0.25, epsilon = 1e-15);
        assert!(matches!(
            f(0.5, 0.5).scale(-0.1),
            Err(Error::Domain { what: "alpha", .. })
        ));
        // crisp zero is a fixed point
        assert_eq!(Ffn::ZERO.scale(0.195).unwrap(), Ffn::ZERO);
    }

    #[test]
    fn power_examples() {
        let id = f(0.7, 0.4).power(1.0).unwrap();
        assert_abs_diff_eq!(id.mu(), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(id.nu(), 0.4, epsilon = 1e-12);
        let p = f(0.92, 0.34).power(0.205).unwrap();
        let dual = f(0.34, 0.92).scale(0.205).unwrap().complement();
        assert_abs_diff_eq!(p.mu(), dual.mu(), epsilon = 1e-12);
        assert_abs_diff_eq!(p.nu(), dual.nu(), epsilon = 1e-12);
        let q = f(0.34, 0.92).power(0.205).unwrap();
        assert_abs_diff_eq!(q.mu(), 0.801_591_637_808_762_3, epsilon = 1e-12);
        assert_abs_diff_eq!(q.nu(), 0.643_081_950_641_608_8, epsilon = 1e-12);
        let q = f(0.5, 0.5).power(2.0).unwrap();
        assert_abs_diff_eq!(q.mu(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(q.nu(), 0.616_553_018_582_617_5, epsilon = 1e-12);
        assert!(f(0.5, 0.5).power(f64::NAN).is_err());
    }

    #[test]
    fn lattice_examples() {
        let a = f(0.7, 0.4);
        assert_eq!(a.lattice(a), (a, a));
        let (m, j) = f(0.9, 0.2).lattice(f(0.3, 0.8));
        assert_eq!((m, j), (f(0.3, 0.8), f(0.9, 0.2)));
        let (m, j) = f(0.9, 0.3).lattice(f(0.4, 0.1));
        assert_eq!((m.mu(), m.nu()), (0.4, 0.3));
        assert_eq!((j.mu(), j.nu()), (0.9, 0.1));
        // 0.9^3 + 0.1^3 = 0.730, 0.4^3 + 0.3^3 = 0.091
        assert!(cube(j.mu()) + cube(j.nu()) <= 1.0);
        assert!(cube(m.mu()) + cube(m.nu()) <= 1.0);
    }

    #[test]
    fn score_examples() {
        assert_eq!(Ffn::ONE.normalized_score(), 0.75);
        assert_abs_diff_eq!(
            f(0.91, 0.34).normalized_score(),
            0.678_566_75,
            epsilon = 1e-12
        );
        let t = f(0.5, 0.5).score_triple();
        assert_eq!((t.score, t.normalized_score), (0.0, 0.5));
        assert!(t.accuracy >= t.score.abs());
    }

    #[test]
    fn rank_cmp_tie_breaks() {
        // equal normalized score, higher accuracy wins
        let a = f(0.5, 0.5);
        let b = f(0.0, 0.0);
        assert_eq!(a.score(), b.score());
        assert_eq!(a.rank_cmp(&b), Ordering::Greater);
        assert_eq!(a.rank_cmp(&a), Ordering::Equal);
        assert_eq!(Ffn::ONE.rank_cmp(&a), Ordering::Greater);
    }

    #[test]
    fn display_uses_two_decimals() {
        assert_eq!(f(0.851, 0.25).to_string(), "(0.85, 0.25)");
        assert_eq!(format!("{:.3}", f(0.851, 0.25)), "(0.851, 0.250)");
    }

    #[test]
    fn serde_rejects_invalid() {
        let ok: Ffn = serde_json::from_str(r#"{"mu":0.7,"nu":0.4}"#).unwrap();
        assert_eq!(ok, f(0.7, 0.4));
        assert!(serde_json::from_str::<Ffn>(r#"{"mu":0.95,"nu":0.95}"#).is_err());
    }
}
