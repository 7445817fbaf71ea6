mod common;

use std::f64::consts::PI;

use common::naive_dft;
use phasedecode::dataio::{generate_synthetic, SynthParams};
use phasedecode::{ClassLabel, Dataset64};

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn noiseless(delta_phi: f64) -> Dataset64 {
    generate_synthetic(&SynthParams {
        n_features: 128,
        samples_per_class: 5,
        delta_phi,
        gain_min: 1.3,
        gain_max: 1.3,
        noise_sigma: 0.0,
        seed: 12,
        ..SynthParams::default()
    })
    .unwrap()
}

#[test]
fn harmonic_phases_differ_by_the_class_separation() {
    for delta in [PI / 2.0, 1.0, 2.5, PI] {
        let ds = noiseless(delta);
        let spectra: Vec<_> = ds.samples().iter().map(|s| naive_dft(s.signal.as_slice())).collect();
        let first_of = |c: ClassLabel| ds.samples().iter().position(|s| s.label == c).unwrap();
        let (a, b) = (
            &spectra[first_of(ClassLabel::Class1)],
            &spectra[first_of(ClassLabel::Class2)],
        );
        for bin in [3usize, 7, 12] {
            let d = wrap(b[bin].arg() - a[bin].arg() - delta);
            assert!(d.abs() < 1e-9, "bin {bin}: off by {d} at delta {delta}");
            // A cosine of amplitude g at bin b has |G(b)| = g N / 2.
            assert!((a[bin].norm() - 1.3 * 64.0).abs() < 1e-9);
        }
    }
}

#[test]
fn class_magnitude_spectra_match_on_average() {
    let ds: Dataset64 = generate_synthetic(&SynthParams {
        n_features: 256,
        ..SynthParams::default()
    })
    .unwrap();
    let mut mean = [vec![0.0; 256], vec![0.0; 256]];
    for s in ds.samples() {
        for (acc, z) in mean[s.label.index()].iter_mut().zip(naive_dft(s.signal.as_slice())) {
            *acc += z.norm() / 40.0;
        }
    }
    for bin in [3usize, 7, 12] {
        let (m1, m2) = (mean[0][bin], mean[1][bin]);
        assert!((m1 - m2).abs() / m1.max(m2) < 0.25, "bin {bin}: {m1} vs {m2}");
    }
}

#[test]
fn same_seed_same_data() {
    let p = SynthParams {
        n_features: 64,
        samples_per_class: 3,
        ..SynthParams::default()
    };
    let a: Dataset64 = generate_synthetic(&p).unwrap();
    let b: Dataset64 = generate_synthetic(&p).unwrap();
    assert_eq!(a, b);
    let c: Dataset64 = generate_synthetic(&SynthParams { seed: 1, ..p }).unwrap();
    assert_ne!(a, c);
}
