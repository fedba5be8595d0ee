//! Dirichlet eigenvalues, band edges and closed-gap classification.
//!
//! Bands are indexed from 0: band `n ≥ 1` lies in `[μₙ, μₙ₊₁]` and band 0
//! lies below `μ₁`. Gap `n ≥ 1` separates band `n − 1` from band `n` and
//! contains `μₙ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::discriminant::{linspace, DiscriminantValue, Hill};
use crate::error::{Error, Result};
use crate::fundamental::solution_at;
use crate::roots::{bisect, newton_bisect};
use crate::C64;

/// Relative tolerance of all spectral root refinements.
const ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletEigenvalue {
    pub index: usize,
    pub mu: f64,
    /// `∂λ s(1;λ)` at `μ`.
    pub s1_derivative: f64,
    pub delta_at_mu: f64,
    pub delta_p_at_mu: f64,
    pub delta_pp_at_mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureType {
    None,
    Periodic,
    Antiperiodic,
}

impl ClosureType {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosureType::None => "none",
            ClosureType::Periodic => "periodic",
            ClosureType::Antiperiodic => "antiperiodic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub index: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    /// Gap `n` contains `μₙ`.
    pub index: usize,
    pub left: f64,
    pub right: f64,
    pub closed: bool,
    pub closure_type: ClosureType,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub bands: Vec<Band>,
    pub gaps: Vec<Gap>,
    pub dirichlet: Vec<DirichletEigenvalue>,
    pub lambda_range: (f64, f64),
    /// Gap indices whose `|Δ'(μₙ)|` lies within ten times the closing
    /// threshold, with a short note.
    pub warnings: Vec<String>,
}

/// `1e-6 · (1 + |μ|)`: `|Δ'(μ)|` at or below this counts as a closed gap.
pub fn tol_closed(mu: f64) -> f64 {
    1e-6 * (1.0 + mu.abs())
}

/// Tolerance of `|Δ(e)| = 2` at band edges.
pub fn edge_tolerance(e: f64) -> f64 {
    1e-8 * (1.0 + e.abs())
}

fn real_point(hill: &Hill, lambda: f64) -> Result<DiscriminantValue> {
    hill.discriminant(C64::new(lambda, 0.0))
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// The first `n_max` zeros of `λ ↦ s(1;λ)`.
///
/// Each `μₙ` is searched in `[qmin + n²π², qmax + n²π²]` (eigenvalue
/// comparison with constant potentials), scanning for the first sign change
/// after `μₙ₋₁`; the window is inflated by `qmax − qmin + 1` when no sign
/// change shows up.
pub fn dirichlet_eigenvalues(hill: &Hill, n_max: usize) -> Result<Vec<DirichletEigenvalue>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let (qmin, qmax) = hill.potential().bounds();
    let inflate = qmax - qmin + 1.0;
    let s_at = |l: f64| -> Result<f64> { Ok(hill.monodromy(C64::new(l, 0.0))?.s1.re) };
    let mut out: Vec<DirichletEigenvalue> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let n2pi2 = (n * n) as f64 * PI * PI;
        let prev = out.last().map(|d| d.mu);
        // s(1;λ) > 0 below μ₁ and changes sign at every μ
        let before = if n % 2 == 1 { 1 } else { -1 };
        let mut a = qmin + n2pi2;
        let mut b = qmax + n2pi2;
        let mut scan: Vec<(f64, f64)> = Vec::new();
        let mut bracket = None;
        for _attempt in 0..8 {
            let lo = match prev {
                Some(p) => a.max(p),
                None => a,
            };
            let width = b - lo;
            let pieces = 16 + 4 * (width / (PI * PI)).ceil() as usize;
            let grid = linspace(lo, b, pieces + 1);
            let mut last_x = lo;
            let mut found = false;
            let mut low_end_ok = true;
            for (i, &x) in grid.iter().enumerate() {
                if i == 0 && prev == Some(lo) {
                    continue;
                }
                let v = s_at(x)?;
                scan.push((x, v));
                let sg = sign_of(v);
                if i == 0 && sg != before {
                    // μₙ lies below the window start
                    low_end_ok = false;
                    break;
                }
                if sg == -before || sg == 0 {
                    bracket = Some((last_x, x));
                    found = true;
                    break;
                }
                last_x = x;
            }
            if found {
                break;
            }
            if !low_end_ok {
                a -= inflate;
            } else {
                b += inflate;
            }
        }
        let (l, r) = bracket.ok_or_else(|| Error::BracketFailure {
            what: format!("Dirichlet eigenvalue μ_{n}"),
            detail: format!("no sign change of s(1;λ) after μ_{}", n - 1),
            scan: scan.clone(),
        })?;
        let mu = if Some(l) == prev {
            // the bracket starts at the previous zero; step off it first
            let mut x0 = l;
            let mut step = 1e-9 * (1.0 + l.abs());
            while sign_of(s_at(x0 + step)?) != before && x0 + step < r {
                step *= 0.5;
                if step < 1e-15 * (1.0 + l.abs()) {
                    break;
                }
            }
            x0 += step;
            refine_zero(hill, x0, r)?
        } else {
            refine_zero(hill, l, r)?
        };
        let d = real_point(hill, mu)?;
        if d.d_s1.re == 0.0 {
            return Err(Error::InvariantViolation(format!("∂λ s(1;λ) vanishes at μ_{n} = {mu}")));
        }
        if let Some(p) = prev {
            if mu <= p {
                return Err(Error::InvariantViolation(format!("μ_{n} = {mu} does not exceed μ_{} = {p}", n - 1)));
            }
        }
        out.push(DirichletEigenvalue {
            index: n,
            mu,
            s1_derivative: d.d_s1.re,
            delta_at_mu: d.delta.re,
            delta_p_at_mu: d.delta_p.re,
            delta_pp_at_mu: d.delta_pp.re,
        });
    }
    Ok(out)
}

fn refine_zero(hill: &Hill, a: f64, b: f64) -> Result<f64> {
    newton_bisect(
        |l| {
            let d = hill.monodromy(C64::new(l, 0.0))?;
            Ok((d.s1.re, d.d_s1.re))
        },
        a,
        b,
        ROOT_TOL,
        200,
    )
}

/// Root of `Δ(λ) − target` on a bracket with a sign change.
fn refine_level(hill: &Hill, target: f64, a: f64, b: f64) -> Result<f64> {
    newton_bisect(
        |l| {
            let d = real_point(hill, l)?;
            Ok((d.delta.re - target, d.delta_p.re))
        },
        a,
        b,
        ROOT_TOL,
        200,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapClassification {
    pub closed: bool,
    pub closure_type: ClosureType,
    /// `|Δ'(μ)|`.
    pub delta_p_abs: f64,
    /// `|c'(1;μ)|` from a direct solve of the initial value problem.
    pub c1p_abs: f64,
    pub tol_closed: f64,
    /// `|Δ'(μ)|` within a factor 10 of the threshold.
    pub near_threshold: bool,
}

/// Decides whether the gap containing `μ` is closed, and of which type.
///
/// The primary test is `|Δ'(μ)| ≤ tol_closed(μ)`. It is cross-checked
/// against `c'(1;μ)`, obtained by integrating the `c` initial value problem:
/// when `Δ(μ) = ±2` one has `c'(1;μ) = ±Δ'(μ)/∂λ s(1;μ)`, so the same
/// threshold is applied to `|c'(1;μ)·∂λ s(1;μ)|`. Disagreement outside the
/// tenfold ambiguity band is an error.
pub fn classify_gap(hill: &Hill, mu: &DirichletEigenvalue) -> Result<GapClassification> {
    let tol = tol_closed(mu.mu);
    let delta_p_abs = mu.delta_p_at_mu.abs();
    let at_level = (mu.delta_at_mu.abs() - 2.0).abs() <= edge_tolerance(mu.mu);
    let mut out = GapClassification {
        closed: false,
        closure_type: ClosureType::None,
        delta_p_abs,
        c1p_abs: f64::NAN,
        tol_closed: tol,
        near_threshold: false,
    };
    if !at_level {
        return Ok(out);
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (_, c1p) = solution_at(hill.potential(), C64::new(mu.mu, 0.0), 1.0, one, zero, hill.options())?;
    out.c1p_abs = c1p.norm();
    let scaled_c = out.c1p_abs * mu.s1_derivative.abs();
    let by_delta = delta_p_abs <= tol;
    let by_c = scaled_c <= tol;
    out.near_threshold = delta_p_abs > tol / 10.0 && delta_p_abs <= 10.0 * tol;
    if by_delta != by_c {
        let ambiguous = |v: f64| v > tol / 10.0 && v <= 10.0 * tol;
        if !(ambiguous(delta_p_abs) || ambiguous(scaled_c)) {
            return Err(Error::InconsistentClassification { mu: mu.mu, delta_p: delta_p_abs, c1p: out.c1p_abs });
        }
    }
    if by_delta {
        out.closed = true;
        out.closure_type = if mu.delta_at_mu > 0.0 { ClosureType::Periodic } else { ClosureType::Antiperiodic };
        // Δ'' < 0 at +2 and Δ'' > 0 at -2
        if mu.delta_at_mu * mu.delta_pp_at_mu >= 0.0 {
            return Err(Error::InvariantViolation(format!(
                "closed gap at μ_{} = {} has Δ = {} and Δ'' = {} of equal sign",
                mu.index, mu.mu, mu.delta_at_mu, mu.delta_pp_at_mu
            )));
        }
    }
    Ok(out)
}

/// Bands `0..n_bands` together with gaps `1..=n_bands` and the Dirichlet
/// eigenvalues `μ₁..μ_{n_bands+1}`.
pub fn band_edges(hill: &Hill, n_bands: usize) -> Result<BandStructure> {
    if n_bands == 0 {
        return Err(Error::InvalidArgument("n_bands must be at least 1".into()));
    }
    let dirichlet = dirichlet_eigenvalues(hill, n_bands + 1)?;
    let mut warnings = Vec::new();
    let mut classes = Vec::with_capacity(n_bands + 1);
    for mu in &dirichlet {
        let c = classify_gap(hill, mu)?;
        if c.near_threshold {
            warnings.push(format!(
                "gap {} near closing threshold: |Δ'(μ)| = {:e}, tol_closed = {:e}",
                mu.index, c.delta_p_abs, c.tol_closed
            ));
        }
        classes.push(c);
    }

    // Lowest band: Δ > 2 below the spectrum, which starts at or above qmin.
    let (qmin, _) = hill.potential().bounds();
    let mut margin = 1.0;
    let mut low = qmin - margin;
    let mut tries = 0;
    while hill.delta_real(low)? <= 2.0 {
        margin *= 2.0;
        low = qmin - margin;
        tries += 1;
        if tries > 40 {
            return Err(Error::BracketFailure {
                what: "lowest band edge".into(),
                detail: "Δ stays at or below 2 far below qmin".into(),
                scan: Vec::new(),
            });
        }
    }
    // zeros of Δ inside bands 0..=n_bands
    let mut mids = Vec::with_capacity(n_bands + 1);
    mids.push(refine_level(hill, 0.0, low, dirichlet[0].mu)?);
    for n in 1..=n_bands {
        mids.push(refine_level(hill, 0.0, dirichlet[n - 1].mu, dirichlet[n].mu)?);
    }
    let alpha0 = refine_level(hill, 2.0, low, mids[0])?;

    let mut gaps = Vec::with_capacity(n_bands);
    for n in 1..=n_bands {
        let mu = &dirichlet[n - 1];
        let class = &classes[n - 1];
        let (left, right) = if class.closed { (mu.mu, mu.mu) } else { open_gap_edges(hill, mu, mids[n - 1], mids[n])? };
        gaps.push(Gap { index: n, left, right, closed: class.closed, closure_type: class.closure_type });
    }
    let bands: Vec<Band> = (0..n_bands)
        .map(|i| Band { index: i, alpha: if i == 0 { alpha0 } else { gaps[i - 1].right }, beta: gaps[i].left })
        .collect();
    let bs = BandStructure { bands, gaps, dirichlet, lambda_range: (low, mids[n_bands]), warnings };
    bs.validate_structure().map_err(Error::InvariantViolation)?;
    bs.validate_edges(hill)?;
    Ok(bs)
}

/// Edges of the open gap containing `μ`, between the band centres `a` and
/// `b` (zeros of `Δ`).
///
/// `Δ'` has a single zero `c` in `[a, b]`, where `|Δ|` peaks over the gap;
/// the edges are the roots of `Δ ∓ 2` on `[a, c]` and `[c, b]`. When `μ` is
/// itself an edge (even potentials) the root may land slightly past `μ`, since
/// `Δ'` is small at the edges of narrow gaps; such edges are clamped onto `μ`.
fn open_gap_edges(hill: &Hill, mu: &DirichletEigenvalue, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = newton_bisect(
        |l| {
            let d = real_point(hill, l)?;
            Ok((d.delta_p.re, d.delta_pp.re))
        },
        a,
        b,
        ROOT_TOL,
        200,
    )?;
    let peak = hill.delta_real(c)?;
    let target = 2.0 * mu.delta_at_mu.signum();
    if (peak - target) * target <= 0.0 {
        return Err(Error::InvariantViolation(format!(
            "gap {} classified open but |Δ| peaks at {} ≤ 2 (λ = {c}, μ = {})",
            mu.index,
            peak.abs(),
            mu.mu
        )));
    }
    let mut left = refine_level(hill, target, a, c)?;
    let mut right = refine_level(hill, target, c, b)?;
    // an edge that lands past μ is a conditioning artefact only if μ is
    // itself an edge to working accuracy
    let mu_is_edge = (mu.delta_at_mu.abs() - 2.0).abs() <= edge_tolerance(mu.mu);
    if left > mu.mu && mu_is_edge {
        left = mu.mu;
    }
    if right < mu.mu && mu_is_edge {
        right = mu.mu;
    }
    Ok((left, right))
}

impl BandStructure {
    /// Ordering invariants that need no evaluation of `Δ`.
    pub fn validate_structure(&self) -> core::result::Result<(), String> {
        for w in self.dirichlet.windows(2) {
            if !(w[0].mu < w[1].mu) {
                return Err(format!("Dirichlet eigenvalues not increasing: {} then {}", w[0].mu, w[1].mu));
            }
        }
        for b in &self.bands {
            if !(b.alpha < b.beta) {
                return Err(format!("band {}: alpha {} not below beta {}", b.index, b.alpha, b.beta));
            }
            if b.index >= 1 {
                let lo = self.dirichlet.get(b.index - 1).map(|d| d.mu);
                if let Some(lo) = lo {
                    if !(lo <= b.alpha) {
                        return Err(format!("band {}: μ = {lo} exceeds alpha = {}", b.index, b.alpha));
                    }
                }
            }
            if let Some(hi) = self.dirichlet.get(b.index).map(|d| d.mu) {
                if !(b.beta <= hi) {
                    return Err(format!("band {}: beta = {} exceeds μ = {hi}", b.index, b.beta));
                }
            }
        }
        for w in self.bands.windows(2) {
            if !(w[0].beta <= w[1].alpha) {
                return Err(format!("bands {} and {} overlap", w[0].index, w[1].index));
            }
        }
        for g in &self.gaps {
            if g.closed {
                if g.width() != 0.0 {
                    return Err(format!("closed gap {} has width {}", g.index, g.width()));
                }
                if g.closure_type == ClosureType::None {
                    return Err(format!("closed gap {} has no closure type", g.index));
                }
            } else if g.closure_type != ClosureType::None {
                return Err(format!("open gap {} carries closure type", g.index));
            } else if !(g.width() > 0.0) {
                return Err(format!("open gap {} has width {}", g.index, g.width()));
            }
            if g.width() < 0.0 {
                return Err(format!("gap {} has negative width", g.index));
            }
        }
        Ok(())
    }

    /// `|Δ(e)| = 2` within [`edge_tolerance`] at every band edge.
    pub fn validate_edges(&self, hill: &Hill) -> Result<()> {
        for b in &self.bands {
            for e in [b.alpha, b.beta] {
                let d = hill.delta_real(e)?;
                if (d.abs() - 2.0).abs() > edge_tolerance(e) {
                    return Err(Error::InvariantViolation(format!(
                        "band {} edge {e}: |Δ| = {} differs from 2 by more than {:e}",
                        b.index,
                        d.abs(),
                        edge_tolerance(e)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Width of the gap to the right of band `n`.
    pub fn gap_right_width(&self, n: usize) -> Option<f64> {
        self.gaps.get(n).map(Gap::width)
    }

    pub fn first_open_gap(&self) -> Option<&Gap> {
        self.gaps.iter().find(|g| !g.closed)
    }
}

/// One sample of the sign identity inside a band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignSample {
    pub lambda: f64,
    pub s1: f64,
    pub delta_p: f64,
}

impl SignSample {
    pub fn product(&self) -> f64 {
        self.s1 * self.delta_p
    }
}

/// `s(1;λ)` and `Δ'(λ)` on `per_band` interior points of every band.
pub fn sign_identity_samples(hill: &Hill, bs: &BandStructure, per_band: usize) -> Result<Vec<SignSample>> {
    let mut out = Vec::new();
    for b in &bs.bands {
        for k in 0..per_band {
            let t = (k as f64 + 0.5) / per_band as f64;
            let lambda = b.alpha + t * (b.beta - b.alpha);
            let d = real_point(hill, lambda)?;
            if d.delta.re.abs() < 2.0 - 1e-6 {
                out.push(SignSample { lambda, s1: d.s1.re, delta_p: d.delta_p.re });
            }
        }
    }
    Ok(out)
}

/// Checks that `Δ(μₙ)` alternates in sign with `|Δ(μₙ)| ≥ 2 − 1e-9`.
pub fn check_alternation(dirichlet: &[DirichletEigenvalue]) -> core::result::Result<(), String> {
    for d in dirichlet {
        if d.delta_at_mu.abs() < 2.0 - 1e-9 {
            return Err(format!("|Δ(μ_{})| = {} inside (-2, 2)", d.index, d.delta_at_mu.abs()));
        }
    }
    for w in dirichlet.windows(2) {
        if w[0].delta_at_mu.signum() == w[1].delta_at_mu.signum() {
            return Err(format!("Δ(μ_{}) and Δ(μ_{}) have the same sign", w[0].index, w[1].index));
        }
    }
    Ok(())
}

/// Points `λ` in `[a, b]` with `Δ'(λ) = 0` and `||Δ(λ)| − 2| ≤ level_tol(λ)`,
/// located by sign changes of `Δ'` on a grid of `grid` points and refined by
/// bisection.
pub fn double_points(hill: &Hill, a: f64, b: f64, grid: usize, level_tol: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let xs = linspace(a, b, grid);
    let mut vals = Vec::with_capacity(xs.len());
    for &x in &xs {
        vals.push(real_point(hill, x)?);
    }
    let mut out = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        let (p, q) = (vals[i].delta_p.re, vals[i + 1].delta_p.re);
        let crit = if p == 0.0 {
            xs[i]
        } else if p.signum() != q.signum() && q != 0.0 {
            bisect(|l| Ok(real_point(hill, l)?.delta_p.re), xs[i], xs[i + 1], 1e-12 * (1.0 + xs[i].abs()))?
        } else {
            continue;
        };
        let d = hill.delta_real(crit)?;
        if (d.abs() - 2.0).abs() <= level_tol(crit) {
            out.push(crit);
        }
    }
    Ok(out)
}

/// For every closed gap: `Δ(μₙ)·Δ''(μₙ)`, which must be negative.
pub fn closed_gap_curvatures(bs: &BandStructure) -> Vec<(usize, f64)> {
    bs.gaps
        .iter()
        .filter(|g| g.closed)
        .map(|g| {
            let d = &bs.dirichlet[g.index - 1];
            (g.index, d.delta_at_mu * d.delta_pp_at_mu)
        })
        .collect()
}

/// Whether `Δ` is strictly monotone on `samples` equally spaced points of
/// each band.
pub fn band_monotonicity(hill: &Hill, bs: &BandStructure, samples: usize) -> Result<Vec<(usize, bool)>> {
    let mut out = Vec::new();
    for b in &bs.bands {
        let vals: Result<Vec<f64>> =
            linspace(b.alpha, b.beta, samples).into_iter().map(|l| hill.delta_real(l)).collect();
        let vals = vals?;
        let inc = vals.windows(2).all(|w| w[1] > w[0]);
        let dec = vals.windows(2).all(|w| w[1] < w[0]);
        out.push((b.index, inc || dec));
    }
    Ok(out)
}
