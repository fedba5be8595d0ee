//! The discriminant `Δ(z) = s'(1;z) + c(1;z)`, the Weyl matrix of the period
//! cell and the Herglotz functions built from them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fundamental::{integrate_fundamental, transfer_matrix_piecewise, IntegratorOptions, MonodromyData};
use crate::potential::PotentialSpec;
use crate::C64;

/// Which code path produces monodromy data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Exact segment products when the potential is piecewise constant,
    /// ODE integration otherwise.
    Auto,
    /// Always integrate the ODE.
    Integrate,
}

/// Selects `h₊ = -(Δ + 2)/s(1;·)` or `h₋ = -(Δ - 2)/s(1;·)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantValue {
    pub z: C64,
    pub delta: C64,
    pub delta_p: C64,
    pub delta_pp: C64,
    pub s1: C64,
    pub d_s1: C64,
}

impl From<&MonodromyData> for DiscriminantValue {
    fn from(d: &MonodromyData) -> Self {
        DiscriminantValue {
            z: d.lambda,
            delta: d.s1p + d.c1,
            delta_p: d.d_s1p + d.d_c1,
            delta_pp: d.dd_s1p + d.dd_c1,
            s1: d.s1,
            d_s1: d.d_s1,
        }
    }
}

/// `M(z) = (1/s(1;z)) [[-c(1;z), 1], [1, -s'(1;z)]]`, mapping boundary
/// values `(u(0), u(1))` to `(u'(0), -u'(1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylMatrix {
    pub z: C64,
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl WeylMatrix {
    pub fn from_monodromy(d: &MonodromyData) -> Result<Self> {
        check_pole(d)?;
        let inv = d.s1.inv();
        Ok(WeylMatrix { z: d.lambda, m11: -d.c1 * inv, m12: inv, m21: inv, m22: -d.s1p * inv })
    }

    /// `⟨M ξ, ξ⟩ = Σ m_ij ξ_j conj(ξ_i)`.
    pub fn quadratic_form(&self, xi: [C64; 2]) -> C64 {
        let mx0 = self.m11 * xi[0] + self.m12 * xi[1];
        let mx1 = self.m21 * xi[0] + self.m22 * xi[1];
        mx0 * xi[0].conj() + mx1 * xi[1].conj()
    }

    /// `(m11 + m22) / m12`, which equals `-Δ(z)`.
    pub fn trace_ratio(&self) -> C64 {
        (self.m11 + self.m22) / self.m12
    }
}

fn check_pole(d: &MonodromyData) -> Result<()> {
    let delta = d.s1p + d.c1;
    let s_abs = d.s1.norm();
    if s_abs < 1e-12 * (1.0 + delta.norm()) {
        return Err(Error::DirichletSingularity { re: d.lambda.re, im: d.lambda.im, s_abs });
    }
    Ok(())
}

/// `h±(z) = -(Δ(z) ± 2) / s(1;z)` from monodromy data.
pub fn h_from_monodromy(d: &MonodromyData, sign: Sign) -> Result<C64> {
    check_pole(d)?;
    Ok(-(d.s1p + d.c1 + 2.0 * sign.value()) / d.s1)
}

/// Hill operator for one potential with fixed numerical options.
#[derive(Debug, Clone)]
pub struct Hill {
    potential: PotentialSpec,
    opts: IntegratorOptions,
    route: Route,
}

impl Hill {
    pub fn new(potential: PotentialSpec) -> Self {
        Hill { potential, opts: IntegratorOptions::default(), route: Route::Auto }
    }

    pub fn with_options(mut self, opts: IntegratorOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn options(&self) -> &IntegratorOptions {
        &self.opts
    }

    /// Whether the exact segment-product path is in use.
    pub fn is_exact(&self) -> bool {
        self.route == Route::Auto && self.potential.segments().is_some()
    }

    pub fn monodromy(&self, z: C64) -> Result<MonodromyData> {
        if self.is_exact() {
            transfer_matrix_piecewise(&self.potential, z)
        } else {
            integrate_fundamental(&self.potential, z, &self.opts)
        }
    }

    pub fn discriminant(&self, z: C64) -> Result<DiscriminantValue> {
        Ok(DiscriminantValue::from(&self.monodromy(z)?))
    }

    /// `Δ(λ)` for real `λ` (imaginary round-off dropped).
    pub fn delta_real(&self, lambda: f64) -> Result<f64> {
        Ok(self.discriminant(C64::new(lambda, 0.0))?.delta.re)
    }

    pub fn h_plus_minus(&self, z: C64, sign: Sign) -> Result<C64> {
        h_from_monodromy(&self.monodromy(z)?, sign)
    }

    pub fn weyl_matrix(&self, z: C64) -> Result<WeylMatrix> {
        WeylMatrix::from_monodromy(&self.monodromy(z)?)
    }

    /// `(m, n) = (-Δ(z), -s(1;z))`.
    pub fn m_n_pair(&self, z: C64) -> Result<(C64, C64)> {
        let d = self.monodromy(z)?;
        Ok((-(d.s1p + d.c1), -d.s1))
    }

    /// `|Δ(λ)| ≤ 2`.
    pub fn in_spectrum(&self, lambda: f64) -> Result<bool> {
        Ok(self.delta_real(lambda)?.abs() <= 2.0)
    }

    /// Discriminant on `n ≥ 2` equally spaced real points of `[a, b]`.
    pub fn discriminant_grid(&self, a: f64, b: f64, n: usize) -> Result<Vec<DiscriminantValue>> {
        linspace(a, b, n).into_iter().map(|l| self.discriminant(C64::new(l, 0.0))).collect()
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
