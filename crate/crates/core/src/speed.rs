//! Time-dependent propagation speed `a(t)` with certified bounds on `[0, T]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape of `a(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpeedKind<T> {
    Constant(T),
    /// `Σ c_i t^i`, coefficients in increasing degree.
    Polynomial(Vec<T>),
    /// `base + amplitude · sin(frequency · t)`.
    SinePerturbed {
        base: T,
        amplitude: T,
        frequency: T,
    },
}

impl<T: Real> SpeedKind<T> {
    pub fn value(&self, t: T) -> T {
        match self {
            SpeedKind::Constant(c) => *c,
            SpeedKind::Polynomial(coeffs) => horner(coeffs, t),
            SpeedKind::SinePerturbed {
                base,
                amplitude,
                frequency,
            } => *base + *amplitude * (*frequency * t).sin(),
        }
    }

    pub fn derivative(&self, t: T) -> T {
        match self {
            SpeedKind::Constant(_) => T::zero(),
            SpeedKind::Polynomial(coeffs) => horner(&differentiate(coeffs), t),
            SpeedKind::SinePerturbed {
                amplitude, frequency, ..
            } => *amplitude * *frequency * (*frequency * t).cos(),
        }
    }

    /// Parses `const:c`, `sine:base,amplitude,frequency` or `poly:c0,c1,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (tag, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("profile `{spec}`: expected `kind:params`")))?;
        let params = args
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(T::lit)
                    .ok_or_else(|| Error::Parse(format!("profile `{spec}`: `{s}` is not a finite number")))
            })
            .collect::<Result<Vec<T>>>()?;
        let arity = |want: usize| {
            if params.len() == want {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "profile `{spec}`: `{tag}` expects {want} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match tag.trim() {
            "const" => {
                arity(1)?;
                Ok(SpeedKind::Constant(params[0]))
            }
            "sine" => {
                arity(3)?;
                Ok(SpeedKind::SinePerturbed {
                    base: params[0],
                    amplitude: params[1],
                    frequency: params[2],
                })
            }
            "poly" => {
                if params.is_empty() {
                    return Err(Error::Parse(format!("profile `{spec}`: `poly` needs coefficients")));
                }
                Ok(SpeedKind::Polynomial(params))
            }
            other => Err(Error::Parse(format!(
                "profile `{spec}`: unknown kind `{other}` (expected const, sine or poly)"
            ))),
        }
    }
}

impl<T: Real> fmt::Display for SpeedKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeedKind::Constant(c) => write!(f, "const:{c:?}"),
            SpeedKind::SinePerturbed {
                base,
                amplitude,
                frequency,
            } => {
                write!(f, "sine:{base:?},{amplitude:?},{frequency:?}")
            }
            SpeedKind::Polynomial(coeffs) => {
                write!(f, "poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                Ok(())
            }
        }
    }
}

fn horner<T: Real>(coeffs: &[T], t: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
}

fn differentiate<T: Real>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * T::from_count(i))
        .collect()
}

/// `a0 = min a`, `a1 = max a`, `d1 = sup |a'|` over `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBounds<T> {
    pub a0: T,
    pub a1: T,
    pub d1: T,
}

/// Speed profile on a finite horizon with its certified bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedProfile<T> {
    kind: SpeedKind<T>,
    horizon: T,
    bounds: SpeedBounds<T>,
    reversed: bool,
}

impl<T: Real> SpeedProfile<T> {
    pub fn new(kind: SpeedKind<T>, horizon: T) -> Result<Self> {
        let bounds = speed_validate(&kind, horizon)?;
        Ok(Self {
            kind,
            horizon,
            bounds,
            reversed: false,
        })
    }

    pub fn constant(c: T, horizon: T) -> Result<Self> {
        Self::new(SpeedKind::Constant(c), horizon)
    }

    pub fn kind(&self) -> &SpeedKind<T> {
        &self.kind
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn bounds(&self) -> SpeedBounds<T> {
        self.bounds
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn is_constant(&self) -> bool {
        self.bounds.d1 == T::zero()
    }

    pub fn a(&self, t: T) -> T {
        if self.reversed {
            self.kind.value(self.horizon - t)
        } else {
            self.kind.value(t)
        }
    }

    pub fn da(&self, t: T) -> T {
        if self.reversed {
            -self.kind.derivative(self.horizon - t)
        } else {
            self.kind.derivative(t)
        }
    }

    /// The profile `t ↦ a(T - t)`; bounds are unchanged.
    pub fn time_reversed(&self) -> Self {
        Self {
            reversed: !self.reversed,
            ..self.clone()
        }
    }
}

impl<T: Real> fmt::Display for SpeedProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.reversed {
            write!(f, " (reversed)")?;
        }
        Ok(())
    }
}

const POLY_SAMPLES: usize = 4096;

/// Certified bounds of `a` on `[0, horizon]`. Rejects `min a ≤ 0`.
///
/// Constant and sine profiles use closed forms. Polynomials are sampled
/// densely and every sign change of the relevant derivative is refined
/// by bisection, so interior extrema are located to machine precision.
pub fn speed_validate<T: Real>(kind: &SpeedKind<T>, horizon: T) -> Result<SpeedBounds<T>> {
    if !(horizon.is_finite() && horizon > T::zero()) {
        return Err(Error::Usage(format!(
            "horizon must be positive, got {}",
            horizon.as_f64()
        )));
    }
    let bounds = match kind {
        SpeedKind::Constant(c) => SpeedBounds {
            a0: *c,
            a1: *c,
            d1: T::zero(),
        },
        SpeedKind::SinePerturbed {
            base,
            amplitude,
            frequency,
        } => sine_bounds(*base, *amplitude, *frequency, horizon),
        SpeedKind::Polynomial(coeffs) => {
            let d = differentiate(coeffs);
            let dd = differentiate(&d);
            let (a0, a1) = poly_range(coeffs, &d, horizon);
            let (dmin, dmax) = poly_range(&d, &dd, horizon);
            SpeedBounds {
                a0,
                a1,
                d1: dmin.abs().max(dmax.abs()),
            }
        }
    };
    if !(bounds.a0.is_finite() && bounds.a1.is_finite() && bounds.d1.is_finite()) {
        return Err(Error::Usage(format!(
            "profile {kind} is not finite on [0, {}]",
            horizon.as_f64()
        )));
    }
    if bounds.a0 <= T::zero() {
        return Err(Error::NotStrictlyHyperbolic {
            a0: bounds.a0.as_f64(),
            horizon: horizon.as_f64(),
        });
    }
    Ok(bounds)
}

fn sine_bounds<T: Real>(base: T, amplitude: T, frequency: T, horizon: T) -> SpeedBounds<T> {
    if amplitude == T::zero() || frequency == T::zero() {
        return SpeedBounds {
            a0: base,
            a1: base,
            d1: T::zero(),
        };
    }
    let w = frequency.abs();
    let amp = amplitude.abs();
    // Over a full period every extremum is attained.
    if w * horizon >= T::TAU() {
        return SpeedBounds {
            a0: base - amp,
            a1: base + amp,
            d1: amp * w,
        };
    }
    let a = |t: T| base + amplitude * (frequency * t).sin();
    let da = |t: T| amplitude * frequency * (frequency * t).cos();
    let half_pi = T::FRAC_PI_2();
    let pi = T::PI();
    // Phase w·t spans less than 2π: at most three critical points of each kind.
    let mut value_candidates = vec![T::zero(), horizon];
    let mut slope_candidates = vec![T::zero(), horizon];
    for k in 0..4 {
        let kf = T::from_count(k);
        let t_peak = (half_pi + kf * pi) / w;
        if t_peak <= horizon {
            value_candidates.push(t_peak);
        }
        let t_zero = kf * pi / w;
        if t_zero <= horizon {
            slope_candidates.push(t_zero);
        }
    }
    let a0 = value_candidates.iter().map(|&t| a(t)).fold(T::infinity(), T::min);
    let a1 = value_candidates.iter().map(|&t| a(t)).fold(T::neg_infinity(), T::max);
    let d1 = slope_candidates.iter().map(|&t| da(t).abs()).fold(T::zero(), T::max);
    SpeedBounds { a0, a1, d1 }
}

fn poly_range<T: Real>(p: &[T], dp: &[T], horizon: T) -> (T, T) {
    if p.is_empty() {
        return (T::zero(), T::zero());
    }
    let step = horizon / T::from_count(POLY_SAMPLES);
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    let mut visit = |t: T| {
        let v = horner(p, t);
        lo = lo.min(v);
        hi = hi.max(v);
    };
    let mut prev_t = T::zero();
    let mut prev_d = horner(dp, prev_t);
    visit(prev_t);
    for i in 1..=POLY_SAMPLES {
        let t = if i == POLY_SAMPLES {
            horizon
        } else {
            step * T::from_count(i)
        };
        let d = horner(dp, t);
        visit(t);
        if prev_d * d < T::zero() {
            visit(bisect_root(dp, prev_t, t));
        }
        prev_t = t;
        prev_d = d;
    }
    (lo, hi)
}

fn bisect_root<T: Real>(p: &[T], mut lo: T, mut hi: T) -> T {
    let mut f_lo = horner(p, lo);
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = horner(p, mid);
        if f_lo * f_mid <= T::zero() {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}
