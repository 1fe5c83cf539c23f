//! Exact free-fall arithmetic for the falling-and-portals construction.
//!
//! Every length that would need a square root is carried squared. Landing
//! distances are compared against the target platform by squaring both
//! sides of the interval test, so nothing is ever rounded.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::instance::SubsetSumInstance;

/// Exact rational, serialized as `"numerator/denominator"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn int(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn from_u64(value: u64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn square(&self) -> Rational {
        Rational(&self.0 * &self.0)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Nearest `f64`, for drawing only.
    pub fn approx(&self) -> f64 {
        let n: f64 = self.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = self.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a rational: {0:?}")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_op!(Add, add);
forward_op!(Sub, sub);
forward_op!(Mul, mul);
forward_op!(Div, div);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KinematicsParams {
    /// Gravitational acceleration, distance per tick squared.
    pub alpha: Rational,
    /// Largest horizontal drift speed while falling.
    pub v_h: Rational,
    pub epsilon: Rational,
    /// Height of the launch portal above the target platform.
    pub launch_height: Rational,
}

impl KinematicsParams {
    /// Launch height defaults to `epsilon`.
    pub fn new(alpha: Rational, v_h: Rational, epsilon: Rational) -> Self {
        KinematicsParams { alpha, v_h, launch_height: epsilon.clone(), epsilon }
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        if !self.alpha.is_positive() {
            return Err(KinematicsError::BadParams("alpha must be positive"));
        }
        if !self.epsilon.is_positive() {
            return Err(KinematicsError::BadParams("epsilon must be positive"));
        }
        if self.v_h.is_negative() {
            return Err(KinematicsError::BadParams("v_h must be nonnegative"));
        }
        if !self.launch_height.is_positive() {
            return Err(KinematicsError::BadParams("launch height must be positive"));
        }
        Ok(())
    }
}

impl Default for KinematicsParams {
    fn default() -> Self {
        KinematicsParams::new(Rational::int(10), Rational::int(1), Rational::int(8))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinematicsError {
    #[error("fall distance {0} is negative")]
    NegativeDistance(Rational),
    #[error("well index {index} out of range for {n} wells")]
    IndexError { index: usize, n: usize },
    #[error("well index {0} chosen twice")]
    DuplicateIndex(usize),
    #[error("invalid parameters: {0}")]
    BadParams(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeFall {
    pub v_f_sq: Rational,
    pub t_fall_sq: Rational,
    /// Horizontal distance covered after leaving a wall portal at speed `v_f`
    /// and dropping `launch_height`, squared.
    pub landing_sq: Rational,
}

/// Falls `s` from rest with no terminal velocity.
pub fn free_fall(s: &Rational, params: &KinematicsParams) -> Result<FreeFall, KinematicsError> {
    if s.is_negative() {
        return Err(KinematicsError::NegativeDistance(s.clone()));
    }
    let two = Rational::int(2);
    let v_f_sq = &(&two * &params.alpha) * s;
    let t_fall_sq = &(&two * s) / &params.alpha;
    let drop_time_sq = &(&two * &params.launch_height) / &params.alpha;
    let landing_sq = &v_f_sq * &drop_time_sq;
    Ok(FreeFall { v_f_sq, t_fall_sq, landing_sq })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Well {
    pub index: usize,
    pub value: u64,
    pub depth: Rational,
    pub floor_x: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ceiling {
    pub index: usize,
    pub x: Rational,
    /// Height of the portalable ceiling tile above the well rims.
    pub y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    pub params: KinematicsParams,
    pub wells: Vec<Well>,
    pub ceilings: Vec<Ceiling>,
    /// Horizontal run of one ceiling stair.
    pub delta: Rational,
    /// Vertical rise of one ceiling stair.
    pub stair_rise: Rational,
    pub launch_height: Rational,
    pub launch_x: Rational,
    pub target_distance_sq: Rational,
    /// `2·t·n·ε`, kept for comparison with the exact placement.
    pub intended_target_distance: Rational,
    pub half_width: Rational,
    pub separation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Landing {
    Hit,
    Miss { landing_sq: Rational, target_sq: Rational },
}

impl Landing {
    pub fn is_hit(&self) -> bool {
        matches!(self, Landing::Hit)
    }
}

/// Whether a launch whose squared landing distance is `d_sq` comes down
/// within `hw` of a platform centred at distance `sqrt(target_sq)`.
pub fn within_platform(d_sq: &Rational, target_sq: &Rational, hw: &Rational) -> bool {
    let hw_sq = hw.square();
    let four = Rational::int(4);
    let bound = &(&four * &hw_sq) * target_sq;
    // d ≤ d_t + hw  ⇔  d² − d_t² − hw² ≤ 2·hw·d_t
    let upper = &(d_sq - target_sq) - &hw_sq;
    let upper_ok = !upper.is_positive() || upper.square() <= bound;
    // d ≥ d_t − hw, trivially true when d_t ≤ hw
    let lower_ok = if *target_sq <= hw_sq {
        true
    } else {
        let lower = &(target_sq + &hw_sq) - d_sq;
        !lower.is_positive() || lower.square() <= bound
    };
    upper_ok && lower_ok
}

/// Total well depth below the chosen ceilings.
pub fn total_fall(geom: &Geometry, chosen: &[usize]) -> Result<Rational, KinematicsError> {
    let mut seen = vec![false; geom.wells.len()];
    let mut total = Rational::zero();
    for &i in chosen {
        let well = geom.wells.get(i).ok_or(KinematicsError::IndexError { index: i, n: geom.wells.len() })?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(KinematicsError::DuplicateIndex(i));
        }
        total = &total + &well.depth;
    }
    Ok(total)
}

/// Lands the avatar for a fall of `s` and checks the platform.
pub fn land(s: &Rational, geom: &Geometry) -> Result<Landing, KinematicsError> {
    let fall = free_fall(s, &geom.params)?;
    if within_platform(&fall.landing_sq, &geom.target_distance_sq, &geom.half_width) {
        Ok(Landing::Hit)
    } else {
        Ok(Landing::Miss { landing_sq: fall.landing_sq, target_sq: geom.target_distance_sq.clone() })
    }
}

/// Checks whether falling through the `chosen` wells lands on the platform.
pub fn verify_selection(
    inst: &SubsetSumInstance,
    chosen: &[usize],
    params: &KinematicsParams,
    geom: &Geometry,
) -> Result<Landing, KinematicsError> {
    if let Some(&index) = chosen.iter().find(|&&i| i >= inst.n()) {
        return Err(KinematicsError::IndexError { index, n: inst.n() });
    }
    let s = total_fall(geom, chosen)?;
    let fall = free_fall(&s, params)?;
    if within_platform(&fall.landing_sq, &geom.target_distance_sq, &geom.half_width) {
        Ok(Landing::Hit)
    } else {
        Ok(Landing::Miss { landing_sq: fall.landing_sq, target_sq: geom.target_distance_sq.clone() })
    }
}

/// Worst-case horizontal drift over a fall of `s` stays strictly below `separation`.
pub fn drift_is_safe(s: &Rational, params: &KinematicsParams, separation: &Rational) -> bool {
    let t_sq = &(&Rational::int(2) * s) / &params.alpha;
    &params.v_h.square() * &t_sq < separation.square()
}
