//! Fundamental solutions `s(x;z)`, `c(x;z)` of `-u'' + Q u = z u` and their
//! first and second derivatives with respect to the spectral parameter.
//!
//! Two independent routes produce a [`MonodromyData`]:
//!
//! * [`integrate_fundamental`] integrates the solution together with its first
//!   and second variational equations (`v = ∂u/∂z`, `w = ∂²u/∂z²`)
//!   with an adaptive Dormand–Prince 5(4) scheme;
//! * [`transfer_matrix_piecewise`] multiplies closed-form segment matrices
//!   for piecewise-constant potentials and differentiates by the product rule.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::entire::cos_sinc;
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions { rel_tol: 1e-11, abs_tol: 1e-12, max_steps: 1_000_000 }
    }
}

impl IntegratorOptions {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        IntegratorOptions { rel_tol, abs_tol: rel_tol / 10.0, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) || !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_steps < 100 {
            return Err(Error::InvalidOptions(format!("max_steps must be at least 100, got {}", self.max_steps)));
        }
        Ok(())
    }
}

/// Endpoint data of the fundamental system at one spectral point.
///
/// The monodromy matrix is `[[c1, s1], [c1p, s1p]]`; the `d_*` and `dd_*`
/// fields are its first and second derivatives with respect to `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyData {
    pub lambda: C64,
    pub s1: C64,
    pub s1p: C64,
    pub c1: C64,
    pub c1p: C64,
    pub d_s1: C64,
    pub d_s1p: C64,
    pub d_c1: C64,
    pub d_c1p: C64,
    pub dd_s1: C64,
    pub dd_s1p: C64,
    pub dd_c1: C64,
    pub dd_c1p: C64,
    /// `|s c' − s' c + 1|` at `x = 1`; the Wronskian is identically `−1`.
    pub wronskian_defect: f64,
}

impl MonodromyData {
    fn from_parts(lambda: C64, m: [C64; 4], dm: [C64; 4], ddm: [C64; 4]) -> Self {
        // m = [c1, s1, c1p, s1p]
        let [c1, s1, c1p, s1p] = m;
        let wronskian_defect = (s1 * c1p - s1p * c1 + 1.0).norm();
        MonodromyData {
            lambda,
            s1,
            s1p,
            c1,
            c1p,
            d_c1: dm[0],
            d_s1: dm[1],
            d_c1p: dm[2],
            d_s1p: dm[3],
            dd_c1: ddm[0],
            dd_s1: ddm[1],
            dd_c1p: ddm[2],
            dd_s1p: ddm[3],
            wronskian_defect,
        }
    }

    /// All twelve complex fields in a fixed order, handy for entrywise checks.
    pub fn fields(&self) -> [C64; 12] {
        [
            self.s1,
            self.s1p,
            self.c1,
            self.c1p,
            self.d_s1,
            self.d_s1p,
            self.d_c1,
            self.d_c1p,
            self.dd_s1,
            self.dd_s1p,
            self.dd_c1,
            self.dd_c1p,
        ]
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let c = |v: C64| v.conj();
        MonodromyData {
            lambda: c(self.lambda),
            s1: c(self.s1),
            s1p: c(self.s1p),
            c1: c(self.c1),
            c1p: c(self.c1p),
            d_s1: c(self.d_s1),
            d_s1p: c(self.d_s1p),
            d_c1: c(self.d_c1),
            d_c1p: c(self.d_c1p),
            dd_s1: c(self.dd_s1),
            dd_s1p: c(self.dd_s1p),
            dd_c1: c(self.dd_c1),
            dd_c1p: c(self.dd_c1p),
            wronskian_defect: self.wronskian_defect,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI step-size controller (Gustafsson/Hairer constants).
const BETA: f64 = 0.04;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn combine<const N: usize>(y: &[C64; N], h: f64, terms: &[(f64, &[C64; N])]) -> [C64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (a, k) in terms {
            acc += k[i] * *a;
        }
        *o += acc * h;
    }
    out
}

fn scaled_norm<const N: usize>(v: &[C64; N], y0: &[C64; N], y1: &[C64; N], opts: &IntegratorOptions) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let sk = opts.abs_tol + opts.rel_tol * y0[i].norm().max(y1[i].norm());
        let r = v[i].norm() / sk;
        sum += r * r;
    }
    (sum / N as f64).sqrt()
}

/// Integrates `y' = f(x, y)` from `a` to `b`, stopping exactly at every
/// point of `breaks` (sorted, inside `(a, b)`) so that jumps of the
/// coefficients never fall inside a step.
fn integrate<const N: usize, F>(
    f: &F,
    y0: [C64; N],
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &IntegratorOptions,
) -> Result<[C64; N]>
where
    F: Fn(f64, &[C64; N]) -> [C64; N],
{
    let mut nodes: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    nodes.push(a);
    nodes.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    nodes.push(b);
    let mut y = y0;
    let mut steps = 0usize;
    for w in nodes.windows(2) {
        y = integrate_smooth(f, y, w[0], w[1], opts, &mut steps)?;
    }
    Ok(y)
}

fn initial_step<const N: usize, F>(
    f: &F,
    x: f64,
    y: &[C64; N],
    f0: &[C64; N],
    span: f64,
    opts: &IntegratorOptions,
) -> f64
where
    F: Fn(f64, &[C64; N]) -> [C64; N],
{
    let zero = [C64::new(0.0, 0.0); N];
    let d0 = scaled_norm(y, y, &zero, opts);
    let d1 = scaled_norm(f0, y, &zero, opts);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1 = combine(y, h0, &[(1.0, f0)]);
    let f1 = f(x + h0, &y1);
    let mut diff = [C64::new(0.0, 0.0); N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled_norm(&diff, y, &zero, opts) / h0;
    let der = d1.max(d2);
    let h1 = if der <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / der).powf(0.2) };
    (100.0 * h0).min(h1).min(span)
}

fn integrate_smooth<const N: usize, F>(
    f: &F,
    y0: [C64; N],
    a: f64,
    b: f64,
    opts: &IntegratorOptions,
    steps: &mut usize,
) -> Result<[C64; N]>
where
    F: Fn(f64, &[C64; N]) -> [C64; N],
{
    let span = b - a;
    let mut x = a;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = initial_step(f, x, &y, &k1, span, opts);
    let mut fac_old = 1e-4;
    let mut rejected = false;
    let expo = 0.2 - BETA * 0.75;
    loop {
        if *steps >= opts.max_steps {
            return Err(Error::StepLimitExceeded { max_steps: opts.max_steps, x });
        }
        *steps += 1;
        let last = x + h >= b || b - (x + h) < 1e-12 * span;
        if last {
            h = b - x;
        }
        if h <= 1e-14 * (1.0 + x.abs()) {
            return Err(Error::StepSizeUnderflow { x });
        }
        let k2 = f(x + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(x + C5 * h, &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + h, &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let x_new = if last { b } else { x + h };
        let k7 = f(x_new, &y_new);
        let mut err_vec = [C64::new(0.0, 0.0); N];
        for i in 0..N {
            err_vec[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        }
        let err = scaled_norm(&err_vec, &y, &y_new, opts);
        if !err.is_finite() && y_new.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteState { x: x_new });
        }
        let fac11 = err.powf(expo);
        if err <= 1.0 {
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if rejected {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            rejected = false;
            x = x_new;
            y = y_new;
            k1 = k7;
            if y.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::NonFiniteState { x });
            }
            if last {
                return Ok(y);
            }
            h = h_new;
        } else {
            let shrink = if err.is_finite() { (fac11 / SAFETY).min(1.0 / FAC_MIN) } else { 1.0 / FAC_MIN };
            h /= shrink;
            rejected = true;
        }
    }
}

fn hill_rhs(q: &PotentialSpec, z: C64) -> impl Fn(f64, &[C64; 12]) -> [C64; 12] + '_ {
    move |x, y| {
        let g = C64::new(q.evaluate(x), 0.0) - z;
        let mut d = [C64::new(0.0, 0.0); 12];
        for b in [0, 6] {
            d[b] = y[b + 1];
            d[b + 1] = g * y[b];
            d[b + 2] = y[b + 3];
            d[b + 3] = g * y[b + 2] - y[b];
            d[b + 4] = y[b + 5];
            d[b + 5] = g * y[b + 4] - y[b + 2] * 2.0;
        }
        d
    }
}

fn check_z(z: C64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("spectral parameter must be finite, got {z}")))
    }
}

/// Integrates the fundamental system and its first and second variational
/// equations from `x = 0` to `x = 1`.
pub fn integrate_fundamental(q: &PotentialSpec, z: C64, opts: &IntegratorOptions) -> Result<MonodromyData> {
    opts.validate()?;
    check_z(z)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut y0 = [zero; 12];
    y0[1] = one; // s'(0) = 1
    y0[6] = one; // c(0) = 1
    let y = integrate(&hill_rhs(q, z), y0, 0.0, 1.0, &q.singular_points(), opts)?;
    Ok(MonodromyData::from_parts(z, [y[6], y[0], y[7], y[1]], [y[8], y[2], y[9], y[3]], [y[10], y[4], y[11], y[5]]))
}

type Mat2 = [C64; 4];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale(a: &Mat2, s: f64) -> Mat2 {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

/// Segment propagator for `Q ≡ height` over `length`, with its first and
/// second `z`-derivatives.
fn segment_matrix(length: f64, height: f64, z: C64) -> (Mat2, Mat2, Mat2) {
    let l = length;
    let w2 = z - height; // ω²
    let e = cos_sinc(w2 * (l * l));
    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l2 * l2;
    let t = [e.c, e.s * l, -w2 * e.s * l, e.c];
    let dt = [e.dc * l2, e.ds * l3, -(e.s * l) - w2 * e.ds * l3, e.dc * l2];
    let ddt = [e.ddc * l4, e.dds * (l4 * l), -(e.ds * (2.0 * l3)) - w2 * e.dds * (l4 * l), e.ddc * l4];
    (t, dt, ddt)
}

/// Exact monodromy data for piecewise-constant (or constant) potentials as
/// the ordered product of closed-form segment matrices.
pub fn transfer_matrix_piecewise(q: &PotentialSpec, z: C64) -> Result<MonodromyData> {
    check_z(z)?;
    let segments = q.segments().ok_or(Error::WrongKind)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut m: Mat2 = [one, zero, zero, one];
    let mut dm: Mat2 = [zero; 4];
    let mut ddm: Mat2 = [zero; 4];
    for (length, height) in segments {
        let (t, dt, ddt) = segment_matrix(length, height, z);
        let new_ddm = add(&add(&mul(&ddt, &m), &scale(&mul(&dt, &dm), 2.0)), &mul(&t, &ddm));
        let new_dm = add(&mul(&dt, &m), &mul(&t, &dm));
        m = mul(&t, &m);
        dm = new_dm;
        ddm = new_ddm;
    }
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFiniteState { x: 1.0 });
    }
    Ok(MonodromyData::from_parts(z, m, dm, ddm))
}

/// `(u(x), u'(x))` for the solution with `u(0) = u0`, `u'(0) = up0`.
pub fn solution_at(
    q: &PotentialSpec,
    z: C64,
    x: f64,
    u0: C64,
    up0: C64,
    opts: &IntegratorOptions,
) -> Result<(C64, C64)> {
    opts.validate()?;
    check_z(z)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok((u0, up0));
    }
    let rhs = |t: f64, y: &[C64; 2]| [y[1], (C64::new(q.evaluate(t), 0.0) - z) * y[0]];
    let y = integrate(&rhs, [u0, up0], 0.0, x, &q.singular_points(), opts)?;
    Ok((y[0], y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn free() -> PotentialSpec {
        PotentialSpec::constant(0.0).unwrap()
    }

    fn kp() -> PotentialSpec {
        PotentialSpec::piecewise_constant(vec![0.0, 0.5, 1.0], vec![4.0, 0.0]).unwrap()
    }

    fn re(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn free_closed_forms() {
        let opts = IntegratorOptions::default();
        let d = integrate_fundamental(&free(), re(PI * PI), &opts).unwrap();
        assert!(close(d.s1, re(0.0), 1e-10));
        assert!(close(d.c1, re(-1.0), 1e-10));
        assert!(close(d.s1p, re(-1.0), 1e-10));
        assert!(close(d.c1p, re(0.0), 1e-9));

        let d = integrate_fundamental(&free(), re(0.0), &opts).unwrap();
        assert!(close(d.s1, re(1.0), 1e-12));
        assert!(close(d.c1, re(1.0), 1e-12));
        assert!(close(d.s1p, re(1.0), 1e-12));
        assert!(close(d.c1p, re(0.0), 1e-12));

        let d = integrate_fundamental(&free(), re(-1.0), &opts).unwrap();
        assert!(close(d.c1, re(1.5430806348), 1e-10));
        assert!(close(d.s1, re(1.1752011936), 1e-10));
    }

    #[test]
    fn free_derivatives_at_zero() {
        // s(1;z) = S(z), c(1;z) = C(z): S'(0) = -1/6, C'(0) = -1/2, S''(0) = 1/60, C''(0) = 1/12
        let d = integrate_fundamental(&free(), re(0.0), &IntegratorOptions::default()).unwrap();
        assert!(close(d.d_s1, re(-1.0 / 6.0), 1e-10));
        assert!(close(d.d_c1, re(-0.5), 1e-10));
        assert!(close(d.dd_s1, re(1.0 / 60.0), 1e-10));
        assert!(close(d.dd_c1, re(1.0 / 12.0), 1e-10));
        let t = transfer_matrix_piecewise(&free(), re(0.0)).unwrap();
        assert!(close(t.dd_s1, re(1.0 / 60.0), 1e-15));
    }

    #[test]
    fn piecewise_single_segment_quarter_wave() {
        let d = transfer_matrix_piecewise(&free(), re(PI * PI / 4.0)).unwrap();
        assert!(close(d.s1, re(2.0 / PI), 1e-15));
        assert!(close(d.c1, re(0.0), 1e-15));
    }

    #[test]
    fn kronig_penney_at_zero_by_hand() {
        // Segment 1: q = 4, ℓ = 1/2, ω² = -4: cosh(1), sinh(1)/2, 2 sinh(1).
        // Segment 2: q = 0, ℓ = 1/2, ω² = 0: [[1, 1/2], [0, 1]].
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let m4 = [ch, sh / 2.0, 2.0 * sh, ch];
        let m0 = [1.0, 0.5, 0.0, 1.0];
        let prod = [
            m0[0] * m4[0] + m0[1] * m4[2],
            m0[0] * m4[1] + m0[1] * m4[3],
            m0[2] * m4[0] + m0[3] * m4[2],
            m0[2] * m4[1] + m0[3] * m4[3],
        ];
        let d = transfer_matrix_piecewise(&kp(), re(0.0)).unwrap();
        assert!(close(d.c1, re(prod[0]), 1e-14));
        assert!(close(d.s1, re(prod[1]), 1e-14));
        assert!(close(d.c1p, re(prod[2]), 1e-14));
        assert!(close(d.s1p, re(prod[3]), 1e-14));
        assert!(d.wronskian_defect <= 1e-14);
    }

    #[test]
    fn piecewise_requires_piecewise_kind() {
        let m = PotentialSpec::fourier_cosine(vec![0.0, 2.0]).unwrap();
        assert_eq!(transfer_matrix_piecewise(&m, re(1.0)), Err(Error::WrongKind));
    }

    #[test]
    fn piecewise_wronskian_is_exact_to_rounding() {
        let q = PotentialSpec::piecewise_constant(vec![0.0, 0.2, 0.35, 0.8, 1.0], vec![3.0, -1.0, 7.5, 0.0]).unwrap();
        for &z in &[re(-2.0), re(0.5), re(13.0), re(80.0), C64::new(20.0, 3.0), C64::new(-1.0, -0.5)] {
            let d = transfer_matrix_piecewise(&q, z).unwrap();
            assert!(d.wronskian_defect <= 1e-14, "{z}: {}", d.wronskian_defect);
        }
    }

    #[test]
    fn solution_at_examples() {
        let opts = IntegratorOptions::default();
        let (u, up) = solution_at(&free(), re(PI * PI), 1.0, re(0.0), re(1.0), &opts).unwrap();
        assert!(close(u, re(0.0), 1e-10) && close(up, re(-1.0), 1e-10));
        let (u, up) = solution_at(&free(), re(0.0), 0.5, re(1.0), re(0.0), &opts).unwrap();
        assert!(close(u, re(1.0), 1e-14) && close(up, re(0.0), 1e-14));
        let exact = transfer_matrix_piecewise(&kp(), re(2.0)).unwrap();
        let (u, up) = solution_at(&kp(), re(2.0), 1.0, re(1.0), re(0.0), &opts).unwrap();
        assert!(close(u, exact.c1, 1e-9) && close(up, exact.c1p, 1e-9));
    }

    #[test]
    fn solution_at_is_linear_in_initial_data() {
        let q = PotentialSpec::fourier_cosine(vec![0.5, 1.0, -0.3]).unwrap();
        let opts = IntegratorOptions::default();
        let z = C64::new(12.0, 0.7);
        let d = integrate_fundamental(&q, z, &opts).unwrap();
        let (u0, up0) = (C64::new(0.3, -1.0), C64::new(2.0, 0.5));
        let (u, up) = solution_at(&q, z, 1.0, u0, up0, &opts).unwrap();
        assert!(close(u, u0 * d.c1 + up0 * d.s1, 1e-9));
        assert!(close(up, u0 * d.c1p + up0 * d.s1p, 1e-9));
    }

    #[test]
    fn rejects_bad_input() {
        let opts = IntegratorOptions { max_steps: 10, ..Default::default() };
        assert!(matches!(integrate_fundamental(&free(), re(1.0), &opts), Err(Error::InvalidOptions(_))));
        let opts = IntegratorOptions { max_steps: 100, ..Default::default() };
        assert!(matches!(integrate_fundamental(&free(), re(1e6), &opts), Err(Error::StepLimitExceeded { .. })));
        assert!(integrate_fundamental(&free(), C64::new(f64::NAN, 0.0), &IntegratorOptions::default()).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let opts = IntegratorOptions::default();
        assert!(matches!(
            integrate_fundamental(&free(), re(-1e6), &opts),
            Err(Error::NonFiniteState { .. }) | Err(Error::StepLimitExceeded { .. })
        ));
        assert!(matches!(transfer_matrix_piecewise(&free(), re(-1e7)), Err(Error::NonFiniteState { .. })));
    }
}
