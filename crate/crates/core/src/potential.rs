//! Periodic real potentials.
//!
//! A [`PotentialSpec`] is always stored normalized to period 1. When the
//! caller declares a period `T`, coordinates are divided by `T` and the
//! potential is multiplied by `T²`, so that internal eigenvalues relate to
//! the original ones by `λ_original = λ_internal / T²`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::solve_cyclic_tridiagonal;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    CubicPeriodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Constant,
    FourierCosine,
    PiecewiseConstant,
    Tabulated,
}

impl PotentialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PotentialKind::Constant => "constant",
            PotentialKind::FourierCosine => "fourier-cosine",
            PotentialKind::PiecewiseConstant => "piecewise-constant",
            PotentialKind::Tabulated => "tabulated",
        }
    }
}

/// Raw description of a potential in the caller's units, before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialDef {
    Constant {
        value: f64,
    },
    /// `Q(x) = a₀ + Σ_{k≥1} a_k cos(2πkx/T)`.
    FourierCosine {
        coefficients: Vec<f64>,
    },
    /// Breakpoints run from `0` to the period; one value per segment.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Samples `(x_i, q_i)` with `x_i` strictly increasing in `[0, T)`.
    Tabulated {
        samples: Vec<(f64, f64)>,
        interpolation: Interpolation,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Constant(f64),
    FourierCosine(Vec<f64>),
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Tabulated {
        xs: Vec<f64>,
        qs: Vec<f64>,
        interpolation: Interpolation,
        /// Second derivatives at the nodes (cubic spline only).
        curvature: Vec<f64>,
    },
}

/// A validated 1-periodic real potential. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    shape: Shape,
    period: f64,
}

fn finite(what: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::InvalidPotential(format!("{what}[{i}] is not finite"))),
        None => Ok(()),
    }
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl PotentialSpec {
    pub fn constant(value: f64) -> Result<Self> {
        Self::from_def(PotentialDef::Constant { value }, 1.0)
    }

    pub fn fourier_cosine(coefficients: Vec<f64>) -> Result<Self> {
        Self::from_def(PotentialDef::FourierCosine { coefficients }, 1.0)
    }

    pub fn piecewise_constant(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::from_def(PotentialDef::PiecewiseConstant { breakpoints, values }, 1.0)
    }

    pub fn tabulated(samples: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self> {
        Self::from_def(PotentialDef::Tabulated { samples, interpolation }, 1.0)
    }

    /// Validates `def` (given in units where the period is `period`) and
    /// normalizes it to period 1.
    pub fn from_def(def: PotentialDef, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "declared_period must be a positive finite number, got {period}"
            )));
        }
        let scale = period * period;
        let shape = match def {
            PotentialDef::Constant { value } => {
                finite("value", &[value])?;
                Shape::Constant(value * scale)
            }
            PotentialDef::FourierCosine { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::InvalidPotential("coefficients must not be empty".into()));
                }
                finite("coefficients", &coefficients)?;
                Shape::FourierCosine(coefficients.into_iter().map(|a| a * scale).collect())
            }
            PotentialDef::PiecewiseConstant { breakpoints, values } => {
                finite("breakpoints", &breakpoints)?;
                finite("values", &values)?;
                if breakpoints.len() < 2 {
                    return Err(Error::InvalidPotential("breakpoints need at least two entries".into()));
                }
                if breakpoints[0] != 0.0 || breakpoints[breakpoints.len() - 1] != period {
                    return Err(Error::InvalidPotential(format!(
                        "breakpoints must start at 0 and end at the period {period}"
                    )));
                }
                if !strictly_increasing(&breakpoints) {
                    return Err(Error::InvalidPotential("breakpoints must be strictly increasing".into()));
                }
                if values.len() != breakpoints.len() - 1 {
                    return Err(Error::InvalidPotential(format!(
                        "{} segments but {} values",
                        breakpoints.len() - 1,
                        values.len()
                    )));
                }
                let mut breakpoints: Vec<f64> = breakpoints.iter().map(|b| b / period).collect();
                let last = breakpoints.len() - 1;
                breakpoints[last] = 1.0;
                Shape::PiecewiseConstant { breakpoints, values: values.into_iter().map(|v| v * scale).collect() }
            }
            PotentialDef::Tabulated { samples, interpolation } => {
                if samples.len() < 4 {
                    return Err(Error::InvalidPotential(format!(
                        "tabulated potentials need at least 4 samples, got {}",
                        samples.len()
                    )));
                }
                let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
                let qs: Vec<f64> = samples.iter().map(|s| s.1 * scale).collect();
                finite("samples.x", &xs)?;
                finite("samples.q", &qs)?;
                if !strictly_increasing(&xs) || xs[0] < 0.0 || xs[xs.len() - 1] >= period {
                    return Err(Error::InvalidPotential(format!(
                        "sample abscissae must be strictly increasing in [0, {period})"
                    )));
                }
                let xs: Vec<f64> = xs.iter().map(|x| x / period).collect();
                let curvature = match interpolation {
                    Interpolation::Linear => Vec::new(),
                    Interpolation::CubicPeriodic => periodic_spline_curvature(&xs, &qs),
                };
                Shape::Tabulated { xs, qs, interpolation, curvature }
            }
        };
        Ok(PotentialSpec { shape, period })
    }

    pub fn kind(&self) -> PotentialKind {
        match self.shape {
            Shape::Constant(_) => PotentialKind::Constant,
            Shape::FourierCosine(_) => PotentialKind::FourierCosine,
            Shape::PiecewiseConstant { .. } => PotentialKind::PiecewiseConstant,
            Shape::Tabulated { .. } => PotentialKind::Tabulated,
        }
    }

    /// The period declared by the caller (1 unless rescaled).
    pub fn declared_period(&self) -> f64 {
        self.period
    }

    /// `T²`: internal eigenvalues are this factor times the original ones.
    pub fn energy_scale(&self) -> f64 {
        self.period * self.period
    }

    pub fn to_original_units(&self, lambda_internal: f64) -> f64 {
        lambda_internal / self.energy_scale()
    }

    pub fn to_internal_units(&self, lambda_original: f64) -> f64 {
        lambda_original * self.energy_scale()
    }

    /// Segments `(length, height)` in order over `[0, 1]` for piecewise-constant
    /// and constant potentials, `None` otherwise.
    pub fn segments(&self) -> Option<Vec<(f64, f64)>> {
        match &self.shape {
            Shape::Constant(v) => Some(vec![(1.0, *v)]),
            Shape::PiecewiseConstant { breakpoints, values } => {
                Some(breakpoints.windows(2).zip(values).map(|(w, &v)| (w[1] - w[0], v)).collect())
            }
            _ => None,
        }
    }

    /// Points in `(0, 1)` where `Q` or one of its low derivatives jumps.
    pub fn singular_points(&self) -> Vec<f64> {
        match &self.shape {
            Shape::PiecewiseConstant { breakpoints, .. } => breakpoints[1..breakpoints.len() - 1].to_vec(),
            Shape::Tabulated { xs, .. } => xs.iter().copied().filter(|&x| x > 0.0).collect(),
            _ => Vec::new(),
        }
    }

    /// `Q(x mod 1)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut t = x - x.floor();
        if t >= 1.0 {
            t = 0.0;
        }
        match &self.shape {
            Shape::Constant(v) => *v,
            Shape::FourierCosine(a) => cosine_series(a, TAU * t),
            Shape::PiecewiseConstant { breakpoints, values } => {
                let i = breakpoints.partition_point(|&b| b <= t);
                values[i.saturating_sub(1).min(values.len() - 1)]
            }
            Shape::Tabulated { xs, qs, interpolation, curvature } => {
                let n = xs.len();
                // Segment i runs from xs[i] to xs[i+1], the last one wraps to xs[0] + 1.
                let (i, t) = match xs.partition_point(|&xi| xi <= t) {
                    0 => (n - 1, t + 1.0),
                    k => (k - 1, t),
                };
                let j = (i + 1) % n;
                let x0 = xs[i];
                let x1 = if j == 0 { xs[0] + 1.0 } else { xs[j] };
                let h = x1 - x0;
                match interpolation {
                    Interpolation::Linear => qs[i] + (qs[j] - qs[i]) * (t - x0) / h,
                    Interpolation::CubicPeriodic => {
                        let (a, b) = (x1 - t, t - x0);
                        let (mi, mj) = (curvature[i], curvature[j]);
                        mi * a * a * a / (6.0 * h)
                            + mj * b * b * b / (6.0 * h)
                            + (qs[i] / h - mi * h / 6.0) * a
                            + (qs[j] / h - mj * h / 6.0) * b
                    }
                }
            }
        }
    }

    /// `(qmin, qmax)` with `qmin ≤ Q(x) ≤ qmax`.
    pub fn bounds(&self) -> (f64, f64) {
        match &self.shape {
            Shape::Constant(v) => (*v, *v),
            Shape::PiecewiseConstant { values, .. } => min_max(values.iter().copied()),
            Shape::Tabulated { xs, qs, interpolation, curvature } => match interpolation {
                Interpolation::Linear => min_max(qs.iter().copied()),
                Interpolation::CubicPeriodic => {
                    let n = xs.len();
                    let mut candidates: Vec<f64> = qs.clone();
                    for i in 0..n {
                        let j = (i + 1) % n;
                        let x0 = xs[i];
                        let h = if j == 0 { xs[0] + 1.0 - x0 } else { xs[j] - x0 };
                        let (mi, mj) = (curvature[i], curvature[j]);
                        // S'(x0 + s) = a s² + b s + c
                        let a = (mj - mi) / (2.0 * h);
                        let b = mi;
                        let c = (qs[j] - qs[i]) / h - (mj - mi) * h / 6.0 - mi * h / 2.0;
                        for s in quadratic_roots(a, b, c) {
                            if s > 0.0 && s < h {
                                candidates.push(self.evaluate(x0 + s));
                            }
                        }
                    }
                    min_max(candidates.into_iter())
                }
            },
            Shape::FourierCosine(a) => fourier_extrema(a),
        }
    }

    /// Complex Fourier coefficients `q̂_k = ∫₀¹ Q(x) e^{-2πikx} dx` for
    /// `k = 0..=max_k`; negative indices follow from `q̂_{-k} = conj(q̂_k)`.
    ///
    /// Exact for constant, cosine and piecewise-constant kinds; tabulated
    /// potentials use the trapezoidal rule on a fine uniform grid.
    pub fn fourier_coefficients(&self, max_k: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); max_k + 1];
        match &self.shape {
            Shape::Constant(v) => out[0] = C64::new(*v, 0.0),
            Shape::FourierCosine(a) => {
                out[0] = C64::new(a[0], 0.0);
                for (k, &ak) in a.iter().enumerate().skip(1).take(max_k) {
                    out[k] = C64::new(ak / 2.0, 0.0);
                }
            }
            Shape::PiecewiseConstant { breakpoints, values } => {
                for (w, &v) in breakpoints.windows(2).zip(values) {
                    out[0] += C64::new(v * (w[1] - w[0]), 0.0);
                    for (k, slot) in out.iter_mut().enumerate().skip(1) {
                        let kk = TAU * k as f64;
                        let e1 = C64::from_polar(1.0, -kk * w[1]);
                        let e0 = C64::from_polar(1.0, -kk * w[0]);
                        *slot += (e1 - e0) * v / C64::new(0.0, -kk);
                    }
                }
            }
            Shape::Tabulated { .. } => {
                let n = (16 * max_k).max(1 << 16);
                let samples: Vec<f64> = (0..n).map(|j| self.evaluate(j as f64 / n as f64)).collect();
                let twiddle: Vec<C64> = (0..n).map(|m| C64::from_polar(1.0, -TAU * m as f64 / n as f64)).collect();
                for (k, slot) in out.iter_mut().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, &q) in samples.iter().enumerate() {
                        acc += twiddle[(k * j) % n] * q;
                    }
                    *slot = acc / n as f64;
                }
            }
        }
        out
    }
}

fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `Σ a_k cos(kθ)` by Clenshaw's recurrence.
fn cosine_series(a: &[f64], theta: f64) -> f64 {
    if a.len() == 1 {
        return a[0];
    }
    let c = theta.cos();
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ak in a[1..].iter().rev() {
        let b0 = ak + 2.0 * c * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    a[0] + b1 * c - b2
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-300 {
        if b.abs() < 1e-300 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots
}

/// Extrema of a cosine series: dense scan followed by golden-section
/// refinement of every discrete local extremum.
fn fourier_extrema(a: &[f64]) -> (f64, f64) {
    let k = a.len();
    let n = 64 * k.max(1);
    let f = |t: f64| cosine_series(a, TAU * t);
    let vals: Vec<f64> = (0..n).map(|j| f(j as f64 / n as f64)).collect();
    let (mut lo, mut hi) = min_max(vals.iter().copied());
    let h = 1.0 / n as f64;
    for j in 0..n {
        let prev = vals[(j + n - 1) % n];
        let next = vals[(j + 1) % n];
        let t = j as f64 * h;
        if vals[j] <= prev && vals[j] <= next {
            lo = lo.min(golden(f, t - h, t + h));
        }
        if vals[j] >= prev && vals[j] >= next {
            hi = hi.max(-golden(|x| -f(x), t - h, t + h));
        }
    }
    (lo, hi)
}

/// Minimum value of a unimodal function on `[a, b]`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.min(f2);
    while b - a > 1e-13 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
        best = best.min(f1).min(f2);
    }
    best
}

fn periodic_spline_curvature(xs: &[f64], qs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h = |i: usize| {
        let j = (i + 1) % n;
        if j == 0 {
            xs[0] + 1.0 - xs[n - 1]
        } else {
            xs[j] - xs[i]
        }
    };
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        let (hm, hi) = (h(im), h(i));
        sub[i] = hm;
        diag[i] = 2.0 * (hm + hi);
        sup[i] = hi;
        rhs[i] = 6.0 * ((qs[ip] - qs[i]) / hi - (qs[i] - qs[im]) / hm);
    }
    solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs)
}

/// `n²π²`, the Dirichlet eigenvalues of the free problem on `(0, 1)`.
pub fn free_dirichlet(n: usize) -> f64 {
    let n = n as f64;
    n * n * PI * PI
}
