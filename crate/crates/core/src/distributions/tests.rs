use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use super::*;
use crate::signals::{synth_chirp, synthesize, ComponentSpec, Signal, Timebase};
use crate::spectral::{centered_origin, Grid2D, GridKind};

fn tb256() -> Timebase {
    Timebase::centered(256, 1.0 / 32.0).unwrap()
}

fn atom(tb: &Timebase, t: f64, f: f64, s: f64) -> Signal {
    synthesize(tb, &[ComponentSpec::gabor(t, f, s, 1.0)]).unwrap()
}

/// Largest |G| inside the box `|x - cx| <= hx, |w - cw| <= hw`.
fn peak_in_box(g: &Grid2D, c: (f64, f64), h: (f64, f64)) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..g.shape()[0] {
        let x = g.coord(0, i);
        if (x - c.0).abs() > h.0 {
            continue;
        }
        for j in 0..g.shape()[1] {
            if (g.coord(1, j) - c.1).abs() <= h.1 {
                m = m.max(g.get(i, j).norm());
            }
        }
    }
    m
}

#[test]
fn gaussian_wigner_matches_closed_form() {
    let f = atom(&tb256(), 0.0, 0.0, 1.0);
    let w = wigner(&f).unwrap();
    assert_eq!(w.shape(), [256, 256]);
    assert_eq!(w.step(), [1.0 / 32.0, 1.0 / 16.0]);
    let mut err: f64 = 0.0;
    for i in 0..256 {
        for j in 0..256 {
            let (x, om) = (w.coord(0, i), w.coord(1, j));
            let exact = SQRT_2 * (-2.0 * PI * (x * x + om * om)).exp();
            err = err.max((w.get(i, j) - exact).norm());
        }
    }
    assert!(err / SQRT_2 < 1e-2, "rel err {}", err / SQRT_2);
    assert!((w.get(128, 128).re - SQRT_2).abs() < 1e-2);
}

#[test]
fn wigner_is_real_and_translation_covariant() {
    let tb = tb256();
    let a = wigner(&atom(&tb, 0.0, 1.0, 0.5)).unwrap();
    let b = wigner(&atom(&tb, 0.5, 1.0, 0.5)).unwrap();
    assert!(a.max_imag_ratio() < 1e-10);
    let shift = 16;
    let mut err: f64 = 0.0;
    for i in 32..200 {
        for j in 0..256 {
            err = err.max((b.get(i + shift, j) - a.get(i, j)).norm());
        }
    }
    assert!(err / a.max_abs() < 1e-10);
}

#[test]
fn wigner_rejects_short_signals_and_pads_odd_ones() {
    let short = Signal::new(vec![Complex64::new(1.0, 0.0); 3], 1.0, 0.0).unwrap();
    assert!(wigner(&short).is_err());
    let odd = Signal::new(vec![Complex64::new(1.0, 0.0); 7], 1.0, 0.0).unwrap();
    assert_eq!(wigner(&odd).unwrap().shape(), [8, 8]);
}

#[test]
fn cross_term_sits_at_the_midpoint_and_oscillates_in_frequency() {
    let tb = Timebase::centered(512, 1.0 / 32.0).unwrap();
    let f = synthesize(
        &tb,
        &[ComponentSpec::gabor(-3.0, 0.0, 1.0, 1.0), ComponentSpec::gabor(3.0, 0.0, 1.0, 1.0)],
    )
    .unwrap();
    let w = wigner(&f).unwrap();
    let row = w.index_of(0, 0.0).unwrap();
    let peak = peak_in_box(&w, (0.0, 0.0), (0.5, 0.5));
    assert!(peak > 0.5 * w.max_abs());
    let signs = (0..512)
        .filter(|&j| w.coord(1, j).abs() < 1.0)
        .map(|j| w.get(row, j).re.signum())
        .collect::<Vec<_>>();
    let flips = signs.windows(2).filter(|p| p[0] != p[1]).count();
    assert!(flips >= 6, "only {flips} sign changes");
}

#[test]
fn ambiguity_at_origin_is_the_energy() {
    let tb = tb256();
    let f = synthesize(
        &tb,
        &[
            ComponentSpec::gabor(-1.0, 2.0, 0.6, 1.0),
            ComponentSpec::Noise { sigma: 0.3, seed: 5 },
        ],
    )
    .unwrap();
    let a = ambiguity(&f).unwrap();
    assert_eq!(a.kind(), GridKind::DelayDoppler);
    let z = a.get(128, 128);
    assert_eq!((a.coord(0, 128), a.coord(1, 128)), (0.0, 0.0));
    assert!((z.re / f.energy() - 1.0).abs() < 1e-8);
    assert!(z.im.abs() / f.energy() < 1e-8);
}

#[test]
fn gaussian_ambiguity_matches_closed_form() {
    let a = ambiguity(&atom(&tb256(), 0.0, 0.0, 1.0)).unwrap();
    let scale = 1.0 / SQRT_2;
    for i in 64..192 {
        for j in 0..256 {
            let (z1, z2) = (a.coord(0, i), a.coord(1, j));
            let exact = scale * (-0.5 * PI * (z1 * z1 + z2 * z2)).exp();
            assert!((a.get(i, j) - exact).norm() / scale < 1e-2);
        }
    }
}

#[test]
fn ambiguity_routes_agree() {
    let tb = Timebase::centered(64, 1.0 / 8.0).unwrap();
    let f = synthesize(
        &tb,
        &[
            ComponentSpec::gabor(-1.0, 1.0, 0.8, 1.0),
            ComponentSpec::gabor(1.5, -0.5, 0.5, 0.7),
            ComponentSpec::Noise { sigma: 0.2, seed: 11 },
        ],
    )
    .unwrap();
    let a = ambiguity(&f).unwrap();
    let b = ambiguity_direct(&f).unwrap();
    assert!(a.same_lattice(&b));
    assert!(a.rel_max_diff(&b) < 1e-8, "{}", a.rel_max_diff(&b));
}

#[test]
fn wigner_kernel_reproduces_wigner() {
    let tb = tb256();
    let f = synthesize(
        &tb,
        &[ComponentSpec::gabor(-1.0, 2.0, 0.6, 1.0), ComponentSpec::gabor(1.0, -1.0, 0.9, 1.0)],
    )
    .unwrap();
    let w = wigner(&f).unwrap();
    let q = cohen(&f, &CohenKernel::Wigner).unwrap();
    assert!(q.same_lattice(&w));
    assert_eq!(q.kind(), GridKind::TimeFrequency);
    assert!(q.rel_max_diff(&w) < 1e-10);
}

#[test]
fn born_jordan_keeps_the_total_energy_and_is_real() {
    let f = atom(&tb256(), 0.3, 1.0, 0.8);
    let q = cohen(&f, &CohenKernel::BornJordan).unwrap();
    let total: f64 = q.data().iter().map(|v| v.re).sum::<f64>() * q.cell_area();
    assert!((total / f.energy() - 1.0).abs() < 1e-2);
    assert!(q.max_imag_ratio() < 1e-10);
}

#[test]
fn born_jordan_damps_oblique_cross_terms_but_not_axis_ones() {
    // separation twice the spread; wider pairs lose more of their axis peak
    // to smearing along the joining line
    let tb = Timebase::centered(256, 1.0 / 16.0).unwrap();
    let (s, h) = (1.5, 1.5);
    let half = (0.75 * s, 0.75 * s);
    let diag = [ComponentSpec::gabor(-h, -h, s, 1.0), ComponentSpec::gabor(h, h, s, 1.0)];
    let axis = [ComponentSpec::gabor(-h, 0.0, s, 1.0), ComponentSpec::gabor(h, 0.0, s, 1.0)];
    let ratio = |c: &[ComponentSpec]| {
        let f = synthesize(&tb, c).unwrap();
        let w = wigner(&f).unwrap();
        let q = cohen(&f, &CohenKernel::BornJordan).unwrap();
        peak_in_box(&w, (0.0, 0.0), half) / peak_in_box(&q, (0.0, 0.0), half)
    };
    let d = ratio(&diag);
    let a = ratio(&axis);
    assert!(d >= 5.0, "diagonal reduction {d}");
    assert!(a <= 2.0, "axis reduction {a}");
}

#[test]
fn tone_stft_has_a_flat_ridge() {
    let tb = tb256();
    let f = synth_chirp(&tb, 3.0, 3.0, Complex64::new(1.0, 0.0)).unwrap();
    let v = stft(&f, &WindowSpec::gaussian(1.0, 8)).unwrap();
    let [frames, bins] = v.shape();
    let k3 = v.index_of(1, 3.0).unwrap();
    let reference = v.get(frames / 2, k3).norm();
    // frames far enough from the edges that the window is not truncated
    for m in (0..frames).filter(|&m| v.coord(0, m).abs() <= 1.5) {
        let row = v.row(m);
        let best = (0..bins).max_by(|&a, &b| row[a].norm().total_cmp(&row[b].norm())).unwrap();
        assert_eq!(best, k3);
        assert!((row[k3].norm() / reference - 1.0).abs() < 1e-6);
    }
}

#[test]
fn gaussian_stft_matches_closed_form() {
    let (tc, fc, s, a) = (0.5, 2.0, 0.8, 0.6);
    let f = atom(&tb256(), tc, fc, s);
    let v = stft(&f, &WindowSpec::gaussian(a, 4)).unwrap();
    let q = s * s + a * a;
    let peak = s * a / q.sqrt();
    for i in 0..v.shape()[0] {
        for j in 0..v.shape()[1] {
            let (x, w) = (v.coord(0, i), v.coord(1, j));
            let exact = peak * (-PI * (x - tc).powi(2) / q).exp() * (-PI * s * s * a * a * (w - fc).powi(2) / q).exp();
            assert!((v.get(i, j).norm() - exact).abs() < 1e-6 * peak);
        }
    }
}

#[test]
fn stft_window_limits() {
    let f = atom(&tb256(), 0.0, 0.0, 1.0);
    assert!(stft(&f, &WindowSpec::gaussian(9.0, 4)).is_err());
    assert!(stft(&f, &WindowSpec::gaussian(1.0 / 64.0, 4)).is_err());
    assert!(stft(&f, &WindowSpec::gaussian(1.0, 0)).is_err());
    let hann = WindowSpec { shape: WindowShape::Hann, width: 1.0, hop: 4 };
    assert!(stft(&f, &hann).is_ok());
}

#[test]
fn chirp_stft_in_two_dimensions() {
    let n = 128;
    let h = 1.0 / 16.0;
    let o = centered_origin(n, h);
    let g = Grid2D::from_fn([n, n], [o, o], [h, h], GridKind::Generic, |a, b| {
        crate::spectral::cis_neg(-a * b)
    })
    .unwrap();
    let window = Window2D { scale: [1.0, 1.0] };
    let floor = 1e-3 / SQRT_2;
    for &(i, j) in &[(64usize, 64usize), (48, 80), (80, 40), (40, 40), (88, 88)] {
        let v = stft_2d(&g, &window, [i, j], n).unwrap();
        let u = (g.coord(0, i), g.coord(1, j));
        for p in 0..n {
            for q in 0..n {
                let (z1, z2) = (v.coord(0, p), v.coord(1, q));
                let exact = (-0.5 * PI * ((u.0 - z2).powi(2) + (u.1 - z1).powi(2))).exp() / SQRT_2;
                if exact >= floor {
                    let got = v.get(p, q).norm();
                    assert!((got / exact - 1.0).abs() < 1e-2, "u={u:?} z=({z1},{z2})");
                }
            }
        }
    }
}

#[test]
fn band_shift_is_demodulation() {
    let tb = Timebase::centered(128, 1.0 / 16.0).unwrap();
    let center = 4.0;
    let f = synthesize(&tb, &[ComponentSpec::gabor(-0.5, 3.0, 1.0, 1.0), ComponentSpec::gabor(1.0, 5.5, 0.7, 1.0)]).unwrap();
    let base: Vec<Complex64> =
        f.samples().iter().enumerate().map(|(i, v)| v * Complex64::from_polar(1.0, -2.0 * PI * center * tb.time(i))).collect();
    let base = Signal::new(base, tb.dt, tb.t0).unwrap();

    let shifted = wigner_at(&f, center).unwrap();
    let w0 = wigner(&base).unwrap();
    assert!((shifted.origin()[1] - (w0.origin()[1] + center)).abs() < 1e-12);
    assert!(shifted.with_data(w0.data().to_vec()).unwrap().rel_max_diff(&shifted) < 1e-12);

    // the Cohen class follows the shift through the physical-phase transforms
    let bj = |w: &Grid2D| cohen_from_wigner(w, |a, b| CohenKernel::BornJordan.phi(a * b)).unwrap();
    let q_shift = bj(&shifted);
    let q0 = bj(&w0);
    assert!(q_shift.same_lattice(&shifted));
    assert!(q_shift.with_data(q0.data().to_vec()).unwrap().rel_max_diff(&q_shift) < 1e-10);

    // one full period of the discrete distribution
    let period = wigner_at(&f, 1.0 / (2.0 * tb.dt)).unwrap();
    assert!(period.with_data(wigner(&f).unwrap().into_data()).unwrap().rel_max_diff(&period) < 1e-12);
}
