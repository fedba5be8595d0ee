//! Grid certification of the Herglotz property, contour residues and the
//! oscillation property suite for pairs `(m, n)` of real-analytic functions.
//!
//! A grid verdict is a falsification test: it states the grid and the
//! tolerance it used and proves nothing beyond them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::discriminant::{linspace, Hill, Sign};
use crate::error::{Error, Result};
use crate::fundamental::IntegratorOptions;
use crate::roots::bisect;
use crate::spectrum::DirichletEigenvalue;
use crate::C64;

/// Sample points in the upper half-plane: `re_points` abscissae across
/// `[re_min, re_max]` on each height `ε·2^k < H`, plus the height `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HerglotzGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub re_points: usize,
}

impl HerglotzGrid {
    /// Picks `re_points` so that the grid holds at least `min_points` points.
    pub fn with_min_points(re_min: f64, re_max: f64, im_min: f64, im_max: f64, min_points: usize) -> Result<Self> {
        let mut g = HerglotzGrid { re_min, re_max, im_min, im_max, re_points: 2 };
        g.validate()?;
        let levels = g.im_levels().len();
        g.re_points = min_points.div_ceil(levels).max(2);
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.re_min < self.re_max
            && self.im_min > 0.0
            && self.im_min <= self.im_max
            && self.re_points >= 1
            && self.re_min.is_finite()
            && self.re_max.is_finite()
            && self.im_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid Herglotz grid {self:?}")))
        }
    }

    pub fn im_levels(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut y = self.im_min;
        while y < self.im_max {
            out.push(y);
            y *= 2.0;
        }
        out.push(self.im_max);
        out
    }

    pub fn points(&self) -> Vec<C64> {
        let xs = linspace(self.re_min, self.re_max, self.re_points);
        let mut out = Vec::with_capacity(xs.len() * 16);
        for y in self.im_levels() {
            for &x in &xs {
                out.push(C64::new(x, y));
            }
        }
        out
    }
}

/// One evaluation failure, excluded from the statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationFailure {
    pub z: C64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzReport {
    pub grid: HerglotzGrid,
    pub points: usize,
    pub min_signed_imag: f64,
    pub argmin: C64,
    pub symmetry_defect: f64,
    pub failures: Vec<EvaluationFailure>,
    pub tol: f64,
    pub pass: bool,
}

/// Maximum share of failed grid evaluations compatible with a pass.
pub const MAX_FAILURE_RATE: f64 = 0.01;

/// Builds the report from `f(z)` and `f(z̄)` for each grid point `z`.
///
/// `values[i]` is `Ok((f(z_i), f(conj z_i)))` or the evaluation error.
pub fn assess(grid: &HerglotzGrid, points: &[C64], values: &[Result<(C64, C64)>], tol: f64) -> HerglotzReport {
    let mut min_im = f64::INFINITY;
    let mut argmin = C64::new(f64::NAN, f64::NAN);
    let mut sym: f64 = 0.0;
    let mut failures = Vec::new();
    for (z, v) in points.iter().zip(values) {
        match v {
            Ok((fz, fzc)) => {
                if fz.im < min_im {
                    min_im = fz.im;
                    argmin = *z;
                }
                sym = sym.max((fzc - fz.conj()).norm());
            }
            Err(e) => failures.push(EvaluationFailure { z: *z, message: format!("{e}") }),
        }
    }
    let too_many = failures.len() as f64 > MAX_FAILURE_RATE * points.len() as f64;
    let pass = !points.is_empty() && !too_many && min_im >= -tol && sym <= tol;
    HerglotzReport {
        grid: *grid,
        points: points.len(),
        min_signed_imag: min_im,
        argmin,
        symmetry_defect: sym,
        failures,
        tol,
        pass,
    }
}

/// Samples `f` at every grid point and its conjugate.
pub fn verify_herglotz(f: impl Fn(C64) -> Result<C64>, grid: &HerglotzGrid, tol: f64) -> Result<HerglotzReport> {
    grid.validate()?;
    let points = grid.points();
    let values: Vec<Result<(C64, C64)>> = points.iter().map(|&z| Ok((f(z)?, f(z.conj())?))).collect();
    Ok(assess(grid, &points, &values, tol))
}

/// Same as [`verify_herglotz`] for `k` functions sharing one evaluation:
/// `f` returns the `k` values at a point.
pub fn verify_herglotz_many<const K: usize>(
    f: impl Fn(C64) -> Result<[C64; K]>,
    grid: &HerglotzGrid,
    tol: f64,
) -> Result<[HerglotzReport; K]> {
    grid.validate()?;
    let points = grid.points();
    let raw: Vec<Result<([C64; K], [C64; K])>> = points.iter().map(|&z| Ok((f(z)?, f(z.conj())?))).collect();
    Ok(split_many(grid, &points, &raw, tol))
}

/// Splits joint evaluations into `K` reports.
pub fn split_many<const K: usize>(
    grid: &HerglotzGrid,
    points: &[C64],
    raw: &[Result<([C64; K], [C64; K])>],
    tol: f64,
) -> [HerglotzReport; K] {
    core::array::from_fn(|k| {
        let vals: Vec<Result<(C64, C64)>> = raw
            .iter()
            .map(|r| match r {
                Ok((a, b)) => Ok((a[k], b[k])),
                Err(e) => Err(e.clone()),
            })
            .collect();
        assess(grid, points, &vals, tol)
    })
}

/// The vectors `ξ` of the certified quadratic forms `⟨M(z)ξ, ξ⟩`.
pub const XI_SET: [[f64; 2]; 5] = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0], [2.0, 1.0]];

/// `h₊`, `h₋` and `⟨M(z)ξ, ξ⟩` for every `ξ` in [`XI_SET`], from one
/// monodromy evaluation.
pub fn hill_functions(hill: &Hill, z: C64) -> Result<[C64; 7]> {
    let d = hill.monodromy(z)?;
    let w = crate::discriminant::WeylMatrix::from_monodromy(&d)?;
    let hp = crate::discriminant::h_from_monodromy(&d, Sign::Plus)?;
    let hm = crate::discriminant::h_from_monodromy(&d, Sign::Minus)?;
    let mut out =
        [hp, hm, C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    for (slot, xi) in out[2..].iter_mut().zip(XI_SET) {
        *slot = w.quadratic_form([C64::new(xi[0], 0.0), C64::new(xi[1], 0.0)]);
    }
    Ok(out)
}

pub const HILL_FUNCTION_NAMES: [&str; 7] =
    ["h+", "h-", "<M(1,0),(1,0)>", "<M(0,1),(0,1)>", "<M(1,1),(1,1)>", "<M(1,-1),(1,-1)>", "<M(2,1),(2,1)>"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueEstimate {
    pub pole: f64,
    pub residue: C64,
    pub circle_radius: f64,
    /// `|R(r) − R(r/2)|` relative to `max(|R(r/2)|, (r/2)·max|f|)`.
    pub stability_defect: f64,
    /// `r·max|f|` on the accepted circle: the size of residue the contour
    /// can resolve from zero.
    pub scale: f64,
}

pub const RESIDUE_NODES: usize = 64;
pub const RESIDUE_STABILITY: f64 = 1e-6;
/// Residues below `RESIDUE_RESOLUTION · scale` are indistinguishable from
/// zero on the contour.
pub const RESIDUE_RESOLUTION: f64 = 1e-7;

fn contour(f: &impl Fn(C64) -> Result<C64>, pole: f64, r: f64) -> Result<(C64, f64)> {
    let mut sum = C64::new(0.0, 0.0);
    let mut fmax: f64 = 0.0;
    for k in 0..RESIDUE_NODES {
        let t = 2.0 * PI * (k as f64 + 0.5) / RESIDUE_NODES as f64;
        let e = C64::new(t.cos(), t.sin()) * r;
        let v = f(C64::new(pole, 0.0) + e)?;
        fmax = fmax.max(v.norm());
        sum += v * e;
    }
    Ok((sum / RESIDUE_NODES as f64, fmax))
}

/// `(1/2πi) ∮ f` on the circle of the given radius, by the trapezoidal rule.
///
/// The estimate is accepted when it agrees with the one at half the radius;
/// otherwise the radius is halved, at most five times.
pub fn residue_at(f: impl Fn(C64) -> Result<C64>, pole: f64, radius: f64) -> Result<ResidueEstimate> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("residue radius must be positive, got {radius}")));
    }
    let mut r = radius;
    let mut last_defect = f64::INFINITY;
    for _ in 0..=5 {
        let (big, _) = contour(&f, pole, r)?;
        let (small, fmax) = contour(&f, pole, r / 2.0)?;
        let scale = small.norm().max(0.5 * r * fmax);
        let defect = if scale > 0.0 { (big - small).norm() / scale } else { 0.0 };
        if defect <= RESIDUE_STABILITY {
            return Ok(ResidueEstimate {
                pole,
                residue: small,
                circle_radius: r / 2.0,
                stability_defect: defect,
                scale: 0.5 * r * fmax,
            });
        }
        last_defect = defect;
        r /= 2.0;
    }
    Err(Error::UnstableResidue { pole, defect: last_defect })
}

/// One row of the residue table of `h±` at a Dirichlet eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueCheck {
    pub index: usize,
    pub sign: Sign,
    pub estimate: ResidueEstimate,
    /// `-(Δ(μ) ± 2) / ∂λ s(1;μ)`, with `Δ(μ) ± 2 = (s'(1;μ) ± 1)² / s'(1;μ)`
    /// (Wronskian at `s(1;μ) = 0`) to avoid cancellation.
    pub formula: f64,
    /// Uncertainty of the residue inherited from the discriminant:
    /// `|Δ(μ) − Δ̃(μ)| / |∂λ s(1;μ)|` with `Δ̃` integrated a hundred times
    /// more tightly, zero on the exact route.
    pub noise: f64,
    /// `|contour − formula|`, relative to `|formula|` at a pole and to the
    /// removability threshold at a removable singularity.
    pub defect: f64,
    /// `|formula|` within [`ResidueCheck::threshold`]: `Δ(μ) ± 2` vanishes to
    /// working accuracy and the singularity is removable (closed gap, or an
    /// edge sitting on `μ`).
    pub removable: bool,
}

impl ResidueCheck {
    /// Residues at or below this size are not resolved from zero: contour
    /// resolution plus ten times the discriminant noise.
    pub fn threshold(&self) -> f64 {
        RESIDUE_RESOLUTION * self.estimate.scale + 10.0 * self.noise
    }
}

/// Contour and closed-form residues of `h±` at the given Dirichlet
/// eigenvalues. The radius is a quarter of the distance to the nearest
/// neighbouring eigenvalue, capped at 1.
pub fn residue_table(hill: &Hill, mus: &[DirichletEigenvalue]) -> Result<Vec<ResidueCheck>> {
    let tight = if hill.is_exact() {
        None
    } else {
        let o = hill.options();
        Some(hill.clone().with_options(IntegratorOptions {
            rel_tol: o.rel_tol / 100.0,
            abs_tol: o.abs_tol / 100.0,
            ..*o
        }))
    };
    let mut out = Vec::new();
    for (i, d) in mus.iter().enumerate() {
        let mut gap = f64::INFINITY;
        if i > 0 {
            gap = gap.min(d.mu - mus[i - 1].mu);
        }
        if i + 1 < mus.len() {
            gap = gap.min(mus[i + 1].mu - d.mu);
        }
        let radius = (0.25 * gap).min(1.0);
        let at_mu = hill.monodromy(C64::new(d.mu, 0.0))?;
        let sp = at_mu.s1p.re;
        let noise = match &tight {
            Some(t) => (t.delta_real(d.mu)? - (at_mu.s1p + at_mu.c1).re).abs() / d.s1_derivative.abs(),
            None => 0.0,
        };
        for sign in [Sign::Plus, Sign::Minus] {
            let numerator = (sp + sign.value()).powi(2) / sp;
            let formula = -numerator / d.s1_derivative;
            let estimate = residue_at(|z| hill.h_plus_minus(z, sign), d.mu, radius)?;
            let mut row =
                ResidueCheck { index: d.index, sign, estimate, formula, noise, defect: 0.0, removable: false };
            row.removable = formula.abs() <= row.threshold();
            let diff = (estimate.residue - C64::new(formula, 0.0)).norm();
            row.defect = if row.removable { diff / row.threshold() } else { diff / formula.abs() };
            out.push(row);
        }
    }
    Ok(out)
}

/// Value and first two derivatives of `m`.
pub type MHandle<'a> = &'a dyn Fn(f64) -> Result<(f64, f64, f64)>;
/// Value and first derivative of `n`.
pub type NHandle<'a> = &'a dyn Fn(f64) -> Result<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct ItemReport {
    pub item: char,
    pub statement: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// First few failures.
    pub failures: Vec<String>,
}

impl ItemReport {
    fn new(item: char, statement: &'static str) -> Self {
        ItemReport { item, statement, checked: 0, failed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 8 {
                self.failures.push(msg());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn vacuous(&self) -> bool {
        self.checked == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub interval: (f64, f64),
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub items: [ItemReport; 5],
    /// Critical points of `m` found in the interval.
    pub critical_points: Vec<f64>,
}

impl OscillationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(ItemReport::passed)
    }
}

pub const SUITE_SCAN: usize = 2000;

/// Resolution of the levels in item (e): a critical value within this of a
/// level is taken to lie on it. Below the reach of integrator tolerances
/// around `1e-13`, whose discriminant errors stay near `1e-12`.
pub const LEVEL_TOL: f64 = 1e-11;

/// Oscillation properties of a pair `(m, n)` on `I` with levels `a < b`:
///
/// * (a) zeros of `n` are simple;
/// * (b) `n·m' > 0` where `m ∈ (a, b)`;
/// * (c) `m ∉ (a, b)` at zeros of `n`;
/// * (d) `m` jumps across `(a, b)` between successive zeros of `n`;
/// * (e) at critical points of `m` with `m = a` (resp. `b`) one has
///   `m'' > 0` (resp. `< 0`) and `n` vanishes.
///
/// Points within `δ = 1e-6·(b − a)` of the levels are left to item (e).
/// Item (e) treats `m = a` as holding when `|m − a| ≤ LEVEL_TOL`, which
/// assumes `m` is evaluated at least that accurately.
pub fn oscillation_suite(
    m: MHandle,
    n: NHandle,
    interval: (f64, f64),
    a: f64,
    b: f64,
    zeros_of_n: &[f64],
) -> Result<OscillationReport> {
    let (lo, hi) = interval;
    if !(a < b) || !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "need a < b and a proper interval, got a={a}, b={b}, I=({lo},{hi})"
        )));
    }
    if zeros_of_n.windows(2).any(|w| w[0] > w[1]) || zeros_of_n.iter().any(|&z| z < lo || z > hi) {
        return Err(Error::InvalidArgument("zeros of n must be sorted and inside I".into()));
    }
    let delta = 1e-6 * (b - a);
    let inside = |v: f64| v > a + delta && v < b - delta;

    let mut ia = ItemReport::new('a', "zeros of n are simple");
    for &mu in zeros_of_n {
        let (_, dn) = n(mu)?;
        ia.record(dn != 0.0 && dn.is_finite(), || format!("n'({mu}) = {dn}"));
    }

    let mut ib = ItemReport::new('b', "n(λ)·m'(λ) > 0 where m(λ) ∈ (a, b)");
    let xs = linspace(lo, hi, SUITE_SCAN);
    let mut mvals = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mv = m(x)?;
        if inside(mv.0) {
            let (nv, _) = n(x)?;
            let p = nv * mv.1;
            ib.record(p > 0.0, || format!("λ = {x}: n·m' = {p:e}"));
        }
        mvals.push(mv);
    }

    let mut ic = ItemReport::new('c', "m(μ) ∉ (a, b) at zeros μ of n");
    let mut at_zero = Vec::with_capacity(zeros_of_n.len());
    for &mu in zeros_of_n {
        let (mv, _, _) = m(mu)?;
        ic.record(!inside(mv), || format!("m({mu}) = {mv}"));
        at_zero.push(mv);
    }

    let mut id = ItemReport::new('d', "m(μ) ≤ a, m(ν) ≥ b or m(μ) ≥ b, m(ν) ≤ a for successive zeros μ < ν");
    for (i, w) in at_zero.windows(2).enumerate() {
        let up = w[0] <= a + delta && w[1] >= b - delta;
        let down = w[0] >= b - delta && w[1] <= a + delta;
        id.record(up || down, || format!("m({}) = {}, m({}) = {}", zeros_of_n[i], w[0], zeros_of_n[i + 1], w[1]));
    }

    let mut ie = ItemReport::new('e', "m' = 0 and m = a ⇒ m'' > 0, n = 0; m' = 0 and m = b ⇒ m'' < 0, n = 0");
    let mut critical_points = Vec::new();
    for i in 0..xs.len() - 1 {
        let (p, q) = (mvals[i].1, mvals[i + 1].1);
        let c = if p == 0.0 {
            xs[i]
        } else if q != 0.0 && p.signum() != q.signum() {
            bisect(|x| Ok(m(x)?.1), xs[i], xs[i + 1], 1e-10)?
        } else {
            continue;
        };
        critical_points.push(c);
        let (mv, _, mpp) = m(c)?;
        let at_a = (mv - a).abs() <= LEVEL_TOL;
        let at_b = (mv - b).abs() <= LEVEL_TOL;
        if !(at_a || at_b) {
            continue;
        }
        let curvature_ok = if at_a { mpp > 0.0 } else { mpp < 0.0 };
        let near = zeros_of_n.iter().map(|z| (z - c).abs()).fold(f64::INFINITY, f64::min);
        let vanishes = near <= 1e-6 * (1.0 + c.abs());
        ie.record(curvature_ok && vanishes, || {
            format!("critical point {c}: m = {mv}, m'' = {mpp:e}, distance to nearest zero of n = {near:e}")
        });
    }

    Ok(OscillationReport { interval, a, b, delta, items: [ia, ib, ic, id, ie], critical_points })
}

/// Runs [`oscillation_suite`] for `(m, n) = (−Δ, −s(1;·))`.
pub fn principal_suite(hill: &Hill, interval: (f64, f64), zeros: &[f64]) -> Result<OscillationReport> {
    let m = |l: f64| {
        let d = hill.discriminant(C64::new(l, 0.0))?;
        Ok((-d.delta.re, -d.delta_p.re, -d.delta_pp.re))
    };
    let n = |l: f64| {
        let d = hill.discriminant(C64::new(l, 0.0))?;
        Ok((-d.s1.re, -d.d_s1.re))
    };
    oscillation_suite(&m, &n, interval, -2.0, 2.0, zeros)
}

/// Runs [`oscillation_suite`] for `(m, n) = (Δ, −s(1;·))`, the pair for which
/// `(m ∓ 2)/n = h±` are the Herglotz functions above.
pub fn herglotz_pair_suite(hill: &Hill, interval: (f64, f64), zeros: &[f64]) -> Result<OscillationReport> {
    let m = |l: f64| {
        let d = hill.discriminant(C64::new(l, 0.0))?;
        Ok((d.delta.re, d.delta_p.re, d.delta_pp.re))
    };
    let n = |l: f64| {
        let d = hill.discriminant(C64::new(l, 0.0))?;
        Ok((-d.s1.re, -d.d_s1.re))
    };
    oscillation_suite(&m, &n, interval, -2.0, 2.0, zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;
    use crate::spectrum::dirichlet_eigenvalues;

    fn grid(re: (f64, f64), im: (f64, f64)) -> HerglotzGrid {
        HerglotzGrid::with_min_points(re.0, re.1, im.0, im.1, 400).unwrap()
    }

    #[test]
    fn grid_shape() {
        let g = HerglotzGrid::with_min_points(-5.0, 150.0, 1e-3, 10.0, 2000).unwrap();
        let levels = g.im_levels();
        assert_eq!(levels.len(), 15);
        assert_eq!(*levels.last().unwrap(), 10.0);
        assert!(g.points().len() >= 2000);
        assert!(HerglotzGrid::with_min_points(1.0, 0.0, 1e-3, 1.0, 10).is_err());
        assert!(HerglotzGrid::with_min_points(0.0, 1.0, 0.0, 1.0, 10).is_err());
    }

    #[test]
    fn identity_and_minus_inverse_pass() {
        let g = grid((-3.0, 3.0), (1e-3, 2.0));
        let r = verify_herglotz(Ok, &g, 1e-10).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_signed_imag, 1e-3);
        assert!(verify_herglotz(|z| Ok(-z.inv()), &g, 1e-10).unwrap().pass);
    }

    #[test]
    fn square_fails_on_the_left() {
        let g = grid((-2.0, -1.0), (0.01, 1.0));
        let r = verify_herglotz(|z| Ok(z * z), &g, 1e-10).unwrap();
        assert!(!r.pass && r.min_signed_imag < 0.0);
        let g = grid((1.0, 2.0), (0.01, 1.0));
        assert!(verify_herglotz(|z| Ok(z * z), &g, 1e-10).unwrap().pass);
    }

    #[test]
    fn asymmetric_function_fails() {
        let g = grid((-1.0, 1.0), (0.1, 1.0));
        let r = verify_herglotz(|z| Ok(z + C64::new(0.0, 1.0)), &g, 1e-10).unwrap();
        assert!(!r.pass && r.symmetry_defect > 1.0);
    }

    #[test]
    fn failures_are_counted() {
        let g = grid((-1.0, 1.0), (0.1, 1.0));
        let r = verify_herglotz(
            |z| if z.re.abs() < 0.2 { Err(Error::InvalidArgument("hole".into())) } else { Ok(z) },
            &g,
            1e-10,
        )
        .unwrap();
        assert!(!r.failures.is_empty());
        assert!(!r.pass);
    }

    #[test]
    fn textbook_residues() {
        let r = residue_at(|z| Ok((z - 3.0).inv()), 3.0, 0.1).unwrap();
        assert!((r.residue - C64::new(1.0, 0.0)).norm() < 1e-14);
        let r = residue_at(|z| Ok((z - 1.0) / z), 0.0, 0.1).unwrap();
        assert!((r.residue - C64::new(-1.0, 0.0)).norm() < 1e-14);
        let r = residue_at(|z| Ok(z.exp()), 0.0, 0.5).unwrap();
        assert!(r.residue.norm() < 1e-14);
    }

    #[test]
    fn double_pole_is_unstable_only_through_nearby_singularity() {
        // a pole just off the contour center makes the estimate radius dependent
        let e = residue_at(|z| Ok((z - 0.3).inv()), 0.0, 0.5);
        assert!(matches!(e, Err(Error::UnstableResidue { .. })) || e.unwrap().circle_radius < 0.3);
    }

    #[test]
    fn free_residue_matches_formula() {
        let h = Hill::new(PotentialSpec::constant(0.0).unwrap());
        let mus = dirichlet_eigenvalues(&h, 2).unwrap();
        let table = residue_table(&h, &mus).unwrap();
        for row in &table {
            if row.removable {
                assert!(row.estimate.residue.norm() < 1e-7, "{row:?}");
            } else {
                assert!(row.defect < 1e-8, "{row:?}");
                assert!(row.estimate.residue.re < 0.0);
            }
        }
        // μ₁ = π²: Δ = -2, ∂s = -1/(2π²), so Res h₋ = -(-4)/(-1/(2π²)) = -8π²
        let hm = table.iter().find(|r| r.index == 1 && r.sign == Sign::Minus).unwrap();
        assert!((hm.formula + 8.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn linear_pair_is_vacuous_where_expected() {
        let m = |l: f64| Ok((l, 1.0, 0.0));
        let n = |_l: f64| Ok((1.0, 0.0));
        let r = oscillation_suite(&m, &n, (-2.0, 2.0), -1.0, 1.0, &[]).unwrap();
        assert!(r.passed());
        assert!(r.items[1].checked > 0);
        assert!(r.items[0].vacuous() && r.items[2].vacuous() && r.items[3].vacuous());
    }

    #[test]
    fn suite_rejects_bad_input() {
        let m = |l: f64| Ok((l, 1.0, 0.0));
        let n = |_l: f64| Ok((1.0, 0.0));
        assert!(oscillation_suite(&m, &n, (-2.0, 2.0), 1.0, -1.0, &[]).is_err());
        assert!(oscillation_suite(&m, &n, (-2.0, 2.0), -1.0, 1.0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn free_potential_pairs() {
        let h = Hill::new(PotentialSpec::constant(0.0).unwrap());
        let zeros: Vec<f64> = dirichlet_eigenvalues(&h, 3).unwrap().iter().map(|d| d.mu).collect();
        let good = herglotz_pair_suite(&h, (-5.0, 100.0), &zeros).unwrap();
        assert!(good.passed(), "{good:?}");
        assert_eq!(good.items[4].checked, 3);
        let principal = principal_suite(&h, (-5.0, 100.0), &zeros).unwrap();
        // items other than (b) agree between the two sign conventions
        for k in [0, 2, 3, 4] {
            assert!(principal.items[k].passed(), "{:?}", principal.items[k]);
        }
        assert_eq!(principal.items[4].checked, 3);
    }
}
