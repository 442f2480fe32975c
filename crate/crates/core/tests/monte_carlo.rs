use irs_af::analytic::{self, Mode};
use irs_af::params::{link_gains, SystemParams};
use irs_af::quantizer::{sinc_factor, QuantizerSpec};
use irs_af::simulate::{mc_estimate, ErrorModel, McConfig};

fn point(n: usize, k: u32) -> SystemParams {
    SystemParams::default().with_surfaces(n, n, QuantizerSpec::Bits(k), QuantizerSpec::Bits(k))
}

#[test]
fn mean_amplitudes_approach_closed_forms_as_surfaces_grow() {
    let mut prev_err = f64::INFINITY;
    for n in [16, 64, 256, 1024] {
        let p = point(n, 2);
        let g = link_gains(&p).unwrap();
        let est = mc_estimate(&p, &g, &McConfig::new(2000, 3)).unwrap();
        let a = analytic::mean_amplitude_first_hop(Mode::Pl, &p, &g);
        let rel = ((est.amp_first_pl.mean - a) / a).abs();
        assert!(rel < 0.02, "N={n}: relative error {rel}");
        // the spread of the per-trial amplitude shrinks like 1/sqrt(N)
        let cv = est.amp_first_pl.stderr * (est.trials as f64).sqrt() / est.amp_first_pl.mean;
        assert!(
            cv < prev_err,
            "N={n}: coefficient of variation {cv} did not shrink"
        );
        prev_err = cv;
    }
}

#[test]
fn grid_and_uniform_error_models_agree() {
    for k in 1..=4 {
        let p = point(256, k);
        let g = link_gains(&p).unwrap();
        let grid = mc_estimate(&p, &g, &McConfig::new(2000, 5)).unwrap();
        let uni = mc_estimate(
            &p,
            &g,
            &McConfig::new(2000, 5).with_error_model(ErrorModel::Uniform),
        )
        .unwrap();
        let se = grid
            .cos_error_first
            .stderr
            .hypot(uni.cos_error_first.stderr);
        assert!(
            (grid.cos_error_first.mean - uni.cos_error_first.mean).abs() < 4.0 * se + 1e-12,
            "k={k}"
        );
        let rel = (grid.amp_first_pl.mean - uni.amp_first_pl.mean).abs() / grid.amp_first_pl.mean;
        assert!(rel < 0.01, "k={k}: amplitudes differ by {rel}");
    }
}

#[test]
fn estimates_are_reproducible_for_a_seed() {
    let p = point(64, 3);
    let g = link_gains(&p).unwrap();
    let cfg = McConfig::new(500, 42);
    let a = mc_estimate(&p, &g, &cfg).unwrap();
    let b = mc_estimate(&p, &g, &cfg).unwrap();
    assert_eq!(a, b);
    let c = mc_estimate(&p, &g, &McConfig::new(500, 43)).unwrap();
    assert_ne!(a.loss_db, c.loss_db);
}

#[test]
fn quantized_amplitudes_and_cosine_at_two_bits() {
    let p = point(256, 2);
    let g = link_gains(&p).unwrap();
    let est = mc_estimate(&p, &g, &McConfig::new(10_000, 42)).unwrap();
    let a = analytic::mean_amplitude_first_hop(Mode::Pl, &p, &g);
    let b = analytic::mean_amplitude_second_hop(Mode::Pl, &p, &g);
    assert!((est.amp_first_pl.mean - a).abs() < 0.01 * a);
    assert!((est.amp_second_pl.mean - b).abs() < 0.01 * b);
    let sinc = sinc_factor(QuantizerSpec::Bits(2));
    assert!((est.cos_error_first.mean - sinc).abs() < 3.0 * est.cos_error_first.stderr);
    assert!((est.cos_error_second.mean - sinc).abs() < 3.0 * est.cos_error_second.stderr);
}

#[test]
fn three_bit_loss_at_512_elements() {
    let p = point(512, 3);
    let g = link_gains(&p).unwrap();
    let est = mc_estimate(&p, &g, &McConfig::new(5000, 42)).unwrap();
    let loss = analytic::snr_loss(&p, &g).loss_pl_db;
    let tol = 0.02f64.max(3.0 * est.loss_stderr_db);
    assert!(
        (est.loss_db - loss).abs() <= tol,
        "mc {} analytic {loss}",
        est.loss_db
    );
    assert!((est.mean_amplitude_loss_db - loss).abs() < 0.01);
}

#[test]
fn zero_trials_is_an_error() {
    let p = point(16, 1);
    let g = link_gains(&p).unwrap();
    assert!(mc_estimate(&p, &g, &McConfig::new(0, 1)).is_err());
}
