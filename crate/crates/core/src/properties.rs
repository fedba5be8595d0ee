//! Property tests for the invariants of potentials, fundamental solutions,
//! the discriminant, band structures, Herglotz functions and oracles.

use core::f64::consts::PI;

use crate::fundamental::{integrate_fundamental, transfer_matrix_piecewise};
use crate::herglotz::{hill_functions, residue_table};
use crate::oracles::{jacobi_discriminant, JacobiCell};
use crate::potential::{free_dirichlet, PotentialDef};
use crate::spectrum::{band_edges, check_alternation, classify_gap, dirichlet_eigenvalues};
use crate::{Hill, IntegratorOptions, Interpolation, PotentialSpec, Route, Sign, C64};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn fourier() -> impl Strategy<Value = PotentialSpec> {
    prop::collection::vec(-3.0..3.0f64, 1..5).prop_map(|a| PotentialSpec::fourier_cosine(a).unwrap())
}

fn piecewise() -> impl Strategy<Value = PotentialSpec> {
    (prop::collection::vec(0.05..0.95f64, 1..4), prop::collection::vec(-5.0..5.0f64, 4)).prop_filter_map(
        "distinct breakpoints",
        |(mut cuts, vals)| {
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            let mut bp = vec![0.0];
            bp.extend(cuts);
            bp.push(1.0);
            let n = bp.len() - 1;
            PotentialSpec::piecewise_constant(bp, vals[..n].to_vec()).ok()
        },
    )
}

fn tabulated() -> impl Strategy<Value = PotentialSpec> {
    (prop::collection::vec(-4.0..4.0f64, 4..10), any::<bool>()).prop_map(|(qs, cubic)| {
        let n = qs.len();
        let samples = qs.into_iter().enumerate().map(|(i, q)| (i as f64 / n as f64, q)).collect();
        let interp = if cubic { Interpolation::CubicPeriodic } else { Interpolation::Linear };
        PotentialSpec::tabulated(samples, interp).unwrap()
    })
}

fn any_potential() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![fourier(), piecewise(), tabulated(), (-5.0..5.0f64).prop_map(|c| PotentialSpec::constant(c).unwrap())]
}

fn upper_half_plane() -> impl Strategy<Value = C64> {
    (-20.0..150.0f64, 1e-3..10.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn potentials_are_periodic_and_bounded(q in any_potential(), x in -3.0..3.0f64) {
        let (lo, hi) = q.bounds();
        let (a, b) = (q.evaluate(x), q.evaluate(x + 1.0));
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!(a >= lo - 1e-12 && a <= hi + 1e-12);
    }

    #[test]
    fn rescaled_constant_bands_match(c in -3.0..3.0f64, t in 0.25..4.0f64) {
        let scaled = Hill::new(PotentialSpec::from_def(PotentialDef::Constant { value: c }, t).unwrap());
        let plain = Hill::new(PotentialSpec::constant(c * t * t).unwrap());
        let a = band_edges(&scaled, 3).unwrap();
        let b = band_edges(&plain, 3).unwrap();
        let q = scaled.potential();
        for (x, y) in a.bands.iter().zip(&b.bands) {
            for (u, v) in [(x.alpha, y.alpha), (x.beta, y.beta)] {
                let (u, v) = (q.to_original_units(u), v / (t * t));
                prop_assert!((u - v).abs() <= 1e-10 * (1.0 + v.abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn wronskian_is_conserved(q in any_potential(), l in -10.0..200.0f64) {
        let d = integrate_fundamental(&q, C64::new(l, 0.0), &IntegratorOptions::default()).unwrap();
        prop_assert!(d.wronskian_defect <= 1e-9, "defect {}", d.wronskian_defect);
    }

    #[test]
    fn real_spectral_parameter_gives_real_data(q in any_potential(), l in -10.0..200.0f64) {
        let d = Hill::new(q).discriminant(C64::new(l, 0.0)).unwrap();
        prop_assert!(d.delta.im.abs() <= 1e-11);
        prop_assert!(d.s1.im.abs() <= 1e-11);
    }

    #[test]
    fn conjugate_symmetry(q in any_potential(), z in upper_half_plane()) {
        let h = Hill::new(q);
        let a = h.monodromy(z).unwrap();
        let b = h.monodromy(z.conj()).unwrap().conj();
        for (x, y) in a.fields().iter().zip(b.fields()) {
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn exact_and_integrated_routes_agree(q in piecewise(), l in -5.0..200.0f64) {
        let z = C64::new(l, 0.0);
        let a = transfer_matrix_piecewise(&q, z).unwrap();
        let b = integrate_fundamental(&q, z, &IntegratorOptions::default()).unwrap();
        let da = a.s1p + a.c1;
        let db = b.s1p + b.c1;
        prop_assert!((da - db).norm() <= 1e-9 * (1.0 + da.norm()));
        let pa = a.d_s1p + a.d_c1;
        let pb = b.d_s1p + b.d_c1;
        prop_assert!((pa - pb).norm() <= 1e-9 * (1.0 + pa.norm()));
    }

    #[test]
    fn herglotz_functions_map_upper_half_plane_to_itself(q in any_potential(), z in upper_half_plane()) {
        let h = Hill::new(q);
        for v in hill_functions(&h, z).unwrap() {
            prop_assert!(v.im >= -1e-10, "Im = {} at z = {z}", v.im);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn band_structures_satisfy_their_invariants(q in prop_oneof![fourier(), piecewise()]) {
        let h = Hill::new(q);
        let bs = band_edges(&h, 3).unwrap();
        prop_assert!(bs.validate_structure().is_ok(), "{:?}", bs.validate_structure());
        prop_assert!(bs.validate_edges(&h).is_ok());
        prop_assert!(check_alternation(&bs.dirichlet).is_ok());
        // Δ runs between ±2 inside bands
        for b in &bs.bands {
            let mid = 0.5 * (b.alpha + b.beta);
            prop_assert!(h.delta_real(mid).unwrap().abs() <= 2.0);
        }
        // closed gaps: Δ·Δ'' < 0 at μ
        for (g, mu) in bs.gaps.iter().zip(&bs.dirichlet) {
            if g.closed {
                prop_assert!(mu.delta_at_mu * mu.delta_pp_at_mu < 0.0);
            }
        }
    }

    #[test]
    fn dirichlet_eigenvalues_obey_comparison_bounds(q in any_potential()) {
        let (lo, hi) = q.bounds();
        let mus = dirichlet_eigenvalues(&Hill::new(q), 4).unwrap();
        for m in &mus {
            let free = free_dirichlet(m.index);
            prop_assert!(m.mu >= lo + free - 1e-8 && m.mu <= hi + free + 1e-8);
        }
    }

    #[test]
    fn residues_at_open_gaps_are_negative(q in prop_oneof![fourier(), piecewise()]) {
        let h = Hill::new(q);
        let mus = dirichlet_eigenvalues(&h, 4).unwrap();
        for row in residue_table(&h, &mus).unwrap() {
            let closed = classify_gap(&h, &mus[row.index - 1]).unwrap().closed;
            if closed || row.removable {
                continue;
            }
            prop_assert!(row.estimate.residue.re < 0.0);
            prop_assert!(row.formula < 0.0);
            prop_assert!(row.defect <= 1e-6, "{row:?}");
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn constant_potentials_have_shifted_free_bands(c in -10.0..10.0f64) {
        let bs = band_edges(&Hill::new(PotentialSpec::constant(c).unwrap()), 3).unwrap();
        for (n, b) in bs.bands.iter().enumerate() {
            let lo = c + (n as f64 * PI).powi(2);
            let hi = c + ((n + 1) as f64 * PI).powi(2);
            prop_assert!((b.alpha - lo).abs() <= 1e-9 * (1.0 + lo.abs()));
            prop_assert!((b.beta - hi).abs() <= 1e-9 * (1.0 + hi.abs()));
        }
        prop_assert!(bs.gaps.iter().all(|g| g.closed));
    }

    #[test]
    fn jacobi_bands_are_the_preimage_of_the_discriminant(
        b in prop::collection::vec(-3.0..3.0f64, 1..4),
        a in prop::collection::vec(0.5..2.0f64, 4),
    ) {
        let p = b.len();
        let cell = JacobiCell::new(b, a[..p].to_vec()).unwrap();
        let d = jacobi_discriminant(&cell);
        prop_assert_eq!(d.degree(), p);
        for (lo, hi) in cell.bands() {
            for e in [lo, hi] {
                prop_assert!((d.eval(e).abs() - 2.0).abs() <= 1e-6 * (1.0 + d.eval(e).abs()), "Δ_d({e}) = {}", d.eval(e));
            }
            prop_assert!(d.eval(0.5 * (lo + hi)).abs() <= 2.0 + 1e-9);
        }
    }
}

#[test]
fn routes_are_selectable() {
    let q = PotentialSpec::piecewise_constant(vec![0.0, 0.5, 1.0], vec![4.0, 0.0]).unwrap();
    let exact = Hill::new(q.clone()).with_route(Route::Auto);
    let ode = Hill::new(q).with_route(Route::Integrate);
    let z = C64::new(20.0, 0.5);
    let (a, b) = (exact.h_plus_minus(z, Sign::Plus).unwrap(), ode.h_plus_minus(z, Sign::Plus).unwrap());
    assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
}
