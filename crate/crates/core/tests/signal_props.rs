use num_complex::Complex64;
use proptest::prelude::*;

use tfq_core::distributions::{spectrogram, WindowSpec};
use tfq_core::signals::{combine, read_signal, synth_chirp, synth_gabor, synth_noise, write_signal, ComponentSpec, Signal, Timebase};

fn signal_strategy(n: usize) -> impl Strategy<Value = Signal> {
    proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), n)
        .prop_map(|v| Signal::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(), 0.125, -2.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combine_is_order_independent(a in signal_strategy(32), b in signal_strategy(32), c in signal_strategy(32)) {
        let abc = combine(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let nested = combine(&[combine(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        prop_assert_eq!(abc.samples(), nested.samples());
        let ab = combine(&[a.clone(), b.clone()]).unwrap();
        let ba = combine(&[b, a]).unwrap();
        prop_assert_eq!(ab.samples(), ba.samples());
    }

    #[test]
    fn noise_is_a_pure_function_of_its_inputs(n in 2usize..200, sigma in 0.0f64..4.0, seed in any::<u64>()) {
        let tb = Timebase::centered(n, 0.01).unwrap();
        let a = synth_noise(&tb, sigma, seed).unwrap();
        let b = synth_noise(&tb, sigma, seed).unwrap();
        prop_assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn gabor_energy_tracks_the_spread(spread in 0.5f64..3.0, amp in 0.1f64..4.0, fc in -4.0f64..4.0) {
        let tb = Timebase::centered(1024, 1.0 / 32.0).unwrap();
        let f = synth_gabor(&tb, &ComponentSpec::gabor(0.0, fc, spread, amp)).unwrap();
        let exact = amp * amp * spread / std::f64::consts::SQRT_2;
        prop_assert!((f.energy() / exact - 1.0).abs() < 0.01);
    }

    #[test]
    fn csv_round_trip_is_bit_exact(s in signal_strategy(17)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sig.csv");
        write_signal(&s, &path).unwrap();
        let back = read_signal(&path).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn different_seeds_give_different_noise() {
    let tb = Timebase::centered(64, 0.1).unwrap();
    let a = synth_noise(&tb, 1.0, 1).unwrap();
    let b = synth_noise(&tb, 1.0, 2).unwrap();
    assert_ne!(a.samples(), b.samples());
}

#[test]
fn noise_power_matches_sigma() {
    let tb = Timebase::centered(1 << 16, 1.0).unwrap();
    let f = synth_noise(&tb, 0.7, 11).unwrap();
    let p = f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
    assert!((p / 0.49 - 1.0).abs() < 0.02, "{p}");
    let re = f.samples().iter().map(|v| v.re * v.re).sum::<f64>() / f.len() as f64;
    assert!((re / 0.245 - 1.0).abs() < 0.03, "{re}");
}

#[test]
fn chirp_spectrogram_follows_the_instantaneous_frequency() {
    // 0 -> 8 Hz over 16 s: the rate is 0.5 Hz/s
    let tb = Timebase::centered(512, 1.0 / 32.0).unwrap();
    let f = synth_chirp(&tb, 0.0, 8.0, Complex64::new(1.0, 0.0)).unwrap();
    let s = spectrogram(&f, &WindowSpec::gaussian(2.0, 8)).unwrap();
    let [frames, bins] = s.shape();
    let df = s.step()[1];
    let mut checked = 0;
    for m in 0..frames {
        let x = s.coord(0, m);
        let elapsed = x - tb.t0;
        if !(2.0..=14.0).contains(&elapsed) {
            continue;
        }
        let k = (0..bins).max_by(|&a, &b| s.get(m, a).re.total_cmp(&s.get(m, b).re)).unwrap();
        let expected = 0.5 * elapsed;
        assert!((s.coord(1, k) - expected).abs() <= 2.0 * df, "frame at {x}: ridge {} vs {expected}", s.coord(1, k));
        checked += 1;
    }
    assert!(checked > 20);
}
