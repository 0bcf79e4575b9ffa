//! Spider phases and H-box exponents.
//!
//! A [`Phase`] is a complex angle `α`, so that the associated amplitude is
//! `e^{iα}`. Phases built from rational multiples of π keep that exact form
//! through addition, negation and rational scaling, which is what makes exact
//! T-counting possible. Anything else falls back to a complex float.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid phase literal '{0}'")]
pub struct PhaseParseError(pub String);

/// A phase `α`, stored exactly as `r·π` (with `r ∈ [0, 2)`) when possible.
#[derive(Copy, Clone, Debug)]
pub struct Phase {
    exact: Option<Rational64>,
    approx: C64,
}

fn reduce(r: Rational64) -> Rational64 {
    let two = Rational64::from_integer(2);
    let mut m = r % two;
    if m < Rational64::zero() {
        m += two;
    }
    m
}

impl Phase {
    pub fn zero() -> Self {
        Self::from_ratio(Rational64::zero())
    }

    /// `num/den · π`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Self::from_ratio(Rational64::new(num, den))
    }

    pub fn pi() -> Self {
        Self::pi_frac(1, 1)
    }

    /// Exact phase `r·π`.
    pub fn from_ratio(r: Rational64) -> Self {
        let r = reduce(r);
        let approx = C64::new(*r.numer() as f64 / *r.denom() as f64 * PI, 0.0);
        Self { exact: Some(r), approx }
    }

    /// A real phase in radians with no exact form.
    pub fn radians(theta: f64) -> Self {
        Self { exact: None, approx: C64::new(theta, 0.0) }
    }

    /// A complex phase; `e^{iα}` is then a general nonzero complex number.
    pub fn complex(alpha: C64) -> Self {
        Self { exact: None, approx: alpha }
    }

    /// The exact multiple of π, if known.
    pub fn exact(&self) -> Option<Rational64> {
        self.exact
    }

    pub fn value(&self) -> C64 {
        self.approx
    }

    /// `e^{iα}`.
    pub fn exp_i(&self) -> C64 {
        if let Some(r) = self.exact {
            // Quarter turns are returned exactly.
            if *r.denom() <= 2 {
                return match (*r.numer(), *r.denom()) {
                    (0, _) => C64::new(1.0, 0.0),
                    (1, 2) => C64::new(0.0, 1.0),
                    (1, 1) => C64::new(-1.0, 0.0),
                    _ => C64::new(0.0, -1.0),
                };
            }
        }
        (C64::i() * self.approx).exp()
    }

    pub fn is_real(&self) -> bool {
        self.exact.is_some() || self.approx.im.abs() <= 1e-9
    }

    /// True when `e^{iα} = 1`.
    pub fn is_zero(&self) -> bool {
        match self.exact {
            Some(r) => r.is_zero(),
            None => (self.exp_i() - 1.0).norm() < EXACT_TOL,
        }
    }

    /// True when `e^{iα} = -1`.
    pub fn is_pi(&self) -> bool {
        match self.exact {
            Some(r) => r == Rational64::from_integer(1),
            None => (self.exp_i() + 1.0).norm() < EXACT_TOL,
        }
    }

    /// Multiply the angle by a rational factor.
    pub fn scale(&self, k: Rational64) -> Self {
        match self.exact {
            Some(r) => Self::from_ratio(r * k),
            None => Self::complex(self.approx * (*k.numer() as f64 / *k.denom() as f64)),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(Rational64::from_integer(k))
    }

    /// The phase whose amplitude is the complex conjugate of this one's.
    pub fn adjoint(&self) -> Self {
        match self.exact {
            Some(r) => Self::from_ratio(-r),
            None => Self::complex(-self.approx.conj()),
        }
    }

    /// Exact and an odd multiple of π/4.
    pub fn is_t_like(&self) -> bool {
        self.exact.is_some_and(|r| *r.denom() == 4)
    }

    /// Exact and a multiple of π/2.
    pub fn is_clifford(&self) -> bool {
        self.exact.is_some_and(|r| *r.denom() <= 2)
    }

    /// The angle folded into `(-π, π]` and made nonnegative, used to group
    /// rotations by magnitude.
    pub fn magnitude(&self) -> Self {
        match self.exact {
            Some(r) => {
                let one = Rational64::from_integer(1);
                let folded = if r > one { r - Rational64::from_integer(2) } else { r };
                Self::from_ratio(folded.abs())
            }
            None => {
                let mut t = self.approx.re.rem_euclid(2.0 * PI);
                if t > PI {
                    t -= 2.0 * PI;
                }
                Self::complex(C64::new(t.abs(), self.approx.im))
            }
        }
    }

    /// A real angle in radians, made exact when it lies within `tol` of
    /// `p/q · π` for some `q <= max_den`.
    pub fn snap(theta: f64, max_den: i64, tol: f64) -> Self {
        let t = theta / PI;
        for q in 1..=max_den {
            let p = (t * q as f64).round();
            if (t - p / q as f64).abs() <= tol {
                return Self::pi_frac(p as i64, q);
            }
        }
        Self::radians(theta)
    }

    /// Equality of amplitudes `e^{iα}`.
    pub fn approx_eq(&self, other: &Phase, tol: f64) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.exp_i() - other.exp_i()).norm() <= tol,
        }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.approx - other.approx).norm() < EXACT_TOL,
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        match (self.exact, rhs.exact) {
            (Some(a), Some(b)) => Phase::from_ratio(a + b),
            _ => Phase::complex(self.approx + rhs.approx),
        }
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        match self.exact {
            Some(r) => Phase::from_ratio(-r),
            None => Phase::complex(-self.approx),
        }
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) if r.is_zero() => write!(f, "0"),
            Some(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                match (n, d) {
                    (1, 1) => write!(f, "pi"),
                    (1, d) => write!(f, "pi/{d}"),
                    (n, 1) => write!(f, "{n}pi"),
                    (n, d) => write!(f, "{n}pi/{d}"),
                }
            }
            None if self.approx.im == 0.0 => write!(f, "{}", self.approx.re),
            None => write!(f, "{}{:+}i", self.approx.re, self.approx.im),
        }
    }
}

impl FromStr for Phase {
    type Err = PhaseParseError;

    /// Accepts `0`, `pi`, `-pi/4`, `3pi/4`, `3*pi/8` or a float in radians.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PhaseParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if let Some(idx) = t.find("pi") {
            let (head, tail) = (&t[..idx], &t[idx + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let num: i64 = match head {
                "" | "+" => 1,
                "-" => -1,
                h => h.parse().map_err(|_| err())?,
            };
            let den: i64 = match tail {
                "" => 1,
                t => t.strip_prefix('/').ok_or_else(err)?.parse().map_err(|_| err())?,
            };
            if den == 0 {
                return Err(err());
            }
            return Ok(Phase::pi_frac(num, den));
        }
        let v: f64 = t.parse().map_err(|_| err())?;
        if v == 0.0 {
            Ok(Phase::zero())
        } else {
            Ok(Phase::radians(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_reduces_mod_two_pi() {
        let t = Phase::pi_frac(1, 4);
        let s = t + t;
        assert_eq!(s, Phase::pi_frac(1, 2));
        assert_eq!(-t, Phase::pi_frac(7, 4));
        assert!((t + Phase::pi_frac(7, 4)).is_zero());
        assert!(Phase::pi_frac(3, 1).is_pi());
    }

    #[test]
    fn approx_matches_exact() {
        let p = Phase::pi_frac(-3, 8);
        assert!((p.value().re - 13.0 / 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        assert!(Phase::pi_frac(3, 4).is_t_like());
        assert!(!Phase::pi_frac(1, 2).is_t_like());
        assert!(Phase::pi_frac(1, 2).is_clifford());
        assert!(!Phase::pi_frac(1, 8).is_clifford());
        assert!(!Phase::radians(0.3).is_clifford());
        assert_eq!(Phase::pi_frac(-1, 8).magnitude(), Phase::pi_frac(1, 8));
    }

    #[test]
    fn parse_and_display() {
        for s in ["0", "pi", "pi/4", "3pi/4", "7pi/8"] {
            let p: Phase = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert_eq!("-pi/2".parse::<Phase>().unwrap(), Phase::pi_frac(3, 2));
        assert_eq!("3*pi/8".parse::<Phase>().unwrap(), Phase::pi_frac(3, 8));
        assert!("0.25".parse::<Phase>().unwrap().exact().is_none());
        assert!("pi/x".parse::<Phase>().is_err());
    }

    #[test]
    fn adjoint_conjugates_amplitude() {
        let p = Phase::complex(C64::new(0.4, 0.3));
        let q = p.adjoint();
        assert!((q.exp_i() - p.exp_i().conj()).norm() < 1e-12);
    }
}
