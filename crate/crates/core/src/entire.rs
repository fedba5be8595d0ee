//! The entire functions `C(ζ) = cos √ζ` and `S(ζ) = sin √ζ / √ζ` together
//! with their first two ζ-derivatives. Both are even in `√ζ`, so no branch
//! of the square root is ever selected in a way that matters.

use crate::C64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct CosSinc {
    pub c: C64,
    pub dc: C64,
    pub ddc: C64,
    pub s: C64,
    pub ds: C64,
    pub dds: C64,
}

/// Below this modulus the Taylor series is used; the closed forms for the
/// derivatives divide by ζ and lose digits near the origin.
const SERIES_RADIUS: f64 = 2.0;

pub(crate) fn cos_sinc(zeta: C64) -> CosSinc {
    if zeta.norm() < SERIES_RADIUS {
        series(zeta)
    } else {
        closed_form(zeta)
    }
}

fn closed_form(zeta: C64) -> CosSinc {
    let w = zeta.sqrt();
    let c = w.cos();
    let s = w.sin() / w;
    let dc = -s * 0.5;
    let ds = (c - s) / (zeta * 2.0);
    let ddc = -ds * 0.5;
    let dds = (dc - ds * 3.0) / (zeta * 2.0);
    CosSinc { c, dc, ddc, s, ds, dds }
}

fn series(zeta: C64) -> CosSinc {
    // C = Σ (-ζ)^k / (2k)!,  S = Σ (-ζ)^k / (2k+1)!
    let zero = C64::new(0.0, 0.0);
    let (mut c, mut dc, mut ddc) = (zero, zero, zero);
    let (mut s, mut ds, mut dds) = (zero, zero, zero);
    // pw = (-ζ)^k, fc = 1/(2k)!, fs = 1/(2k+1)!
    let mut pw = C64::new(1.0, 0.0);
    let mut pw_prev = zero; // (-ζ)^(k-1)
    let mut pw_prev2 = zero; // (-ζ)^(k-2)
    let mut fc = 1.0;
    let mut fs = 1.0;
    for k in 0..40usize {
        let kf = k as f64;
        c += pw * fc;
        s += pw * fs;
        if k >= 1 {
            // d/dζ (-ζ)^k = -k (-ζ)^(k-1)
            dc -= pw_prev * (kf * fc);
            ds -= pw_prev * (kf * fs);
        }
        if k >= 2 {
            ddc += pw_prev2 * (kf * (kf - 1.0) * fc);
            dds += pw_prev2 * (kf * (kf - 1.0) * fs);
        }
        if pw.norm() * fc < 1e-18 * (1.0 + c.norm()) && k > 4 {
            break;
        }
        pw_prev2 = pw_prev;
        pw_prev = pw;
        pw *= -zeta;
        fc /= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
        fs /= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
    }
    CosSinc { c, dc, ddc, s, ds, dds }
}
