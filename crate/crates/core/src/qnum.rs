//! Deformation parameters and q-number arithmetic.
//!
//! A deformation parameter is either a positive real `q` or a pure phase
//! `q = exp(i tau)`. In both cases the q-number
//! `[x]_q = (q^x - q^-x) / (q - q^-1)` is real, and it is evaluated in real
//! arithmetic: `sinh(x ln q) / sinh(ln q)` for real `q` and
//! `sin(x tau) / sin(tau)` for a phase. The undeformed point (`q = 1`,
//! `tau = 0`) is an explicit branch returning `x`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum DeformationParameter {
    /// Real positive `q`.
    Real(f64),
    /// Pure phase `q = exp(i tau)` with `tau` in `(-pi, pi]`.
    Phase(f64),
}

impl DeformationParameter {
    pub fn real(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!("real q must be positive, got {q}")));
        }
        Ok(Self::Real(q))
    }

    pub fn phase(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > -PI && tau <= PI) {
            return Err(Error::InvalidParameter(format!("tau must lie in (-pi, pi], got {tau}")));
        }
        Ok(Self::Phase(tau))
    }

    /// The undeformed point `q = 1`.
    pub fn classical() -> Self {
        Self::Real(1.0)
    }

    pub fn is_classical(&self) -> bool {
        match *self {
            Self::Real(q) => q == 1.0,
            Self::Phase(tau) => tau == 0.0,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Self::Real(_)) || self.is_classical()
    }

    /// `q` as a complex number.
    pub fn value(&self) -> Complex64 {
        match *self {
            Self::Real(q) => Complex64::new(q, 0.0),
            Self::Phase(tau) => Complex64::from_polar(1.0, tau),
        }
    }

    /// `q^x` for real `x`.
    pub fn pow(&self, x: f64) -> Complex64 {
        match *self {
            Self::Real(q) => Complex64::new(q.powf(x), 0.0),
            Self::Phase(tau) => Complex64::from_polar(1.0, tau * x),
        }
    }

    /// `q^-1`.
    pub fn inverse(&self) -> Self {
        match *self {
            Self::Real(q) => Self::Real(1.0 / q),
            Self::Phase(tau) => Self::Phase(wrap_angle(-tau)),
        }
    }

    /// `q^d`, the parameter attached to a node with length exponent `d`.
    pub fn powi(&self, d: u32) -> Self {
        match *self {
            Self::Real(q) => Self::Real(q.powi(d as i32)),
            Self::Phase(tau) => Self::Phase(wrap_angle(tau * d as f64)),
        }
    }

    /// `ln q` for the real kind, `tau` for the phase kind.
    fn log(&self) -> f64 {
        match *self {
            Self::Real(q) => q.ln(),
            Self::Phase(tau) => tau,
        }
    }
}

impl fmt::Display for DeformationParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Real(q) => write!(f, "q={q}"),
            Self::Phase(tau) => write!(f, "tau={tau}"),
        }
    }
}

fn wrap_angle(t: f64) -> f64 {
    let mut t = t % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `[x]_q`.
pub fn q_number(x: f64, q: &DeformationParameter) -> f64 {
    if q.is_classical() {
        return x;
    }
    let l = q.log();
    match q {
        DeformationParameter::Real(_) => (x * l).sinh() / l.sinh(),
        DeformationParameter::Phase(_) => (x * l).sin() / l.sin(),
    }
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u32, q: &DeformationParameter) -> f64 {
    (1..=n).map(|k| q_number(k as f64, q)).product()
}

/// Gaussian q-binomial `[m]! / ([m-n]! [n]!)`.
pub fn q_binomial(m: i64, n: i64, q: &DeformationParameter) -> Result<f64> {
    if n < 0 || n > m {
        return Err(Error::Domain(format!("q-binomial needs 0 <= n <= m, got m={m}, n={n}")));
    }
    let (m, n) = (m as u32, n as u32);
    // Multiplicative form avoids the overflow of the factorial ratio.
    let mut acc = 1.0;
    for k in 0..n {
        acc *= q_number((m - k) as f64, q) / q_number((k + 1) as f64, q);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    pub n_max: u32,
    pub violations: Vec<u32>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::ParameterOutOfDomain { n_max: self.n_max, violations: self.violations })
        }
    }
}

/// Checks that `[n]_q` is nonzero for `1 <= n <= n_max`, and positive when
/// `q` is a phase, so that square roots of q-integers stay real.
pub fn validate_parameter(q: &DeformationParameter, n_max: u32) -> ValidityReport {
    const ZERO: f64 = 1e-12;
    let violations = (1..=n_max)
        .filter(|&n| {
            let v = q_number(n as f64, q);
            match q {
                DeformationParameter::Real(_) => v.abs() <= ZERO,
                DeformationParameter::Phase(_) => v <= ZERO,
            }
        })
        .collect();
    ValidityReport { n_max, violations }
}
