use repliq_core::discrimination::{DESIGNER_ALPHABETS, NOISELESS_SIGMA};
use repliq_core::{
    discriminate, generate_experiment, imperfect_regime_classifier, power_curve, ExperimentDesign, PowerConfig,
    RateCurve, RateLaw, RateSample, Regime, RenormalizationTable,
};

fn experiment(curve: impl Into<RateCurve>, repeats: usize, sigma: f64, seed: u64) -> Vec<RateSample> {
    let design = ExperimentDesign::new(curve, 1.0, DESIGNER_ALPHABETS.to_vec(), repeats, sigma);
    generate_experiment(&design, &RenormalizationTable::default(), seed).unwrap()
}

#[test]
fn common_rescaling_leaves_verdict_unchanged() {
    for seed in 0..10 {
        let law = if seed % 2 == 0 { RateLaw::Classical } else { RateLaw::Quantum };
        let samples = experiment(law, 5, 0.3, seed);
        let base = discriminate(&samples, 300, seed).unwrap();
        for k in [0.5, 3.0, 17.25] {
            let scaled: Vec<RateSample> = samples
                .iter()
                .map(|s| RateSample { observed_rate: s.observed_rate * k, ..s.clone() })
                .collect();
            let v = discriminate(&scaled, 300, seed).unwrap();
            assert_eq!(v.chosen_model, base.chosen_model);
            assert_eq!(v.p_value, base.p_value, "seed {seed} k {k}");
        }
    }
}

#[test]
fn relabelled_two_type_strand_gives_same_verdict() {
    let at = RenormalizationTable::default()
        .with_multiplier("AT", 1.3)
        .unwrap()
        .with_multiplier("CG", 1.3)
        .unwrap();
    let cg = at.clone().with_composition(2, vec![("CG".into(), 1.0)]).unwrap();
    let design = ExperimentDesign::new(RateLaw::Classical, 1.0, DESIGNER_ALPHABETS.to_vec(), 6, 0.1);
    for seed in 0..5 {
        let a = at.normalize(&generate_experiment(&design, &at, seed).unwrap());
        let b = cg.normalize(&generate_experiment(&design, &cg, seed).unwrap());
        assert_eq!(discriminate(&a, 200, seed).unwrap(), discriminate(&b, 200, seed).unwrap());
    }
}

#[test]
fn unequal_pair_rates_are_removed_by_renormalisation() {
    let renorm = RenormalizationTable::default().with_multiplier("CG", 0.6).unwrap();
    let design = ExperimentDesign::new(RateLaw::Quantum, 1.0, DESIGNER_ALPHABETS.to_vec(), 10, 0.02);
    let raw = generate_experiment(&design, &renorm, 4).unwrap();
    let v = discriminate(&renorm.normalize(&raw), 300, 4).unwrap();
    assert_eq!(v.chosen_model, RateLaw::Quantum);
    assert!((v.fitted_scale_quantum - 1.0).abs() < 0.02);
}

#[test]
fn p_value_calibration_under_true_law() {
    let trials = 100;
    let mut significant = 0;
    for seed in 0..trials {
        let v = discriminate(&experiment(RateLaw::Classical, 10, 0.05, seed), 200, seed).unwrap();
        if v.chosen_model == RateLaw::Classical && v.p_value <= 0.05 {
            significant += 1;
        }
    }
    let rate = significant as f64 / trials as f64;
    println!("p <= 0.05 against the quantum law in {rate:.3} of trials");
    assert!(rate >= 0.9);
}

#[test]
fn power_curve_behaviour() {
    let mut cfg = PowerConfig::new(RateLaw::Classical, vec![0.0, 0.05, 0.2, 5.0], 10, 60);
    cfg.bootstrap_b = 100;
    let table = power_curve(&cfg, 99).unwrap();
    for p in &table {
        println!("sigma {:>5}: correct {:.3} +- {:.3}, significant {:.3}", p.sigma_rel, p.fraction_correct, p.std_error, p.fraction_significant);
    }
    assert_eq!(table[0].fraction_correct, 1.0);
    assert!(table[1].fraction_correct >= table[2].fraction_correct - 2.0 * table[2].std_error.max(table[1].std_error));
    assert!(table[3].fraction_correct <= table[1].fraction_correct);
    assert_eq!(power_curve(&cfg, 99).unwrap(), table);
}

#[test]
fn power_saturates_rather_than_vanishing_at_huge_noise() {
    // Truncated multiplicative noise tends to sigma * |Z|, whose log-spread is
    // bounded, so power levels off above one half instead of reaching a coin flip.
    let mut cfg = PowerConfig::new(RateLaw::Classical, vec![0.05, 1.0, 50.0], 1, 200);
    cfg.bootstrap_b = 100;
    let table = power_curve(&cfg, 1).unwrap();
    for p in &table {
        println!("single repeat, sigma {:>5}: correct {:.3} +- {:.3}", p.sigma_rel, p.fraction_correct, p.std_error);
    }
    assert_eq!(table[0].fraction_correct, 1.0);
    assert!(table[1].fraction_correct < 0.9);
    assert!(table[2].fraction_correct <= table[1].fraction_correct + 2.0 * table[1].std_error);
    assert!(table[2].fraction_correct > 0.5);
}

#[test]
fn regime_classifier_on_pure_and_mixed_data() {
    let w0 = experiment(RateLaw::Quantum, 20, 0.02, 1);
    assert_eq!(imperfect_regime_classifier(&w0, 1.0, 200, 1).unwrap().regime, Regime::Quantum);
    let w1 = experiment(RateLaw::Classical, 20, 0.02, 2);
    assert_eq!(imperfect_regime_classifier(&w1, 1.0, 200, 2).unwrap().regime, Regime::Classical);

    let mut intermediate = 0;
    for seed in 0..100 {
        let data = experiment(RateCurve::Mixed { weight: 0.5 }, 20, 0.02, 1000 + seed);
        let report = imperfect_regime_classifier(&data, 1.0, 100, seed).unwrap();
        if report.regime == Regime::Intermediate {
            intermediate += 1;
        }
    }
    println!("intermediate in {intermediate}/100 trials");
    assert!(intermediate > 50);
}

#[test]
fn regime_report_carries_threshold() {
    let data = experiment(RateCurve::Mixed { weight: 0.5 }, 5, 0.05, 3);
    let report = imperfect_regime_classifier(&data, 2.0, 100, 3).unwrap();
    assert!((report.coherence_threshold - 2.0 * 0.264_160_416_786_859_36).abs() < 1e-12);
    assert!((report.weight - 0.5).abs() < 0.2);
    assert!(imperfect_regime_classifier(&data, 2.0, 50, 3).is_err());
}

#[test]
fn noiseless_datasets_always_classified() {
    for seed in 0..20 {
        for law in [RateLaw::Classical, RateLaw::Quantum] {
            let v = discriminate(&experiment(law, 3, NOISELESS_SIGMA, seed), 100, seed).unwrap();
            assert_eq!(v.chosen_model, law);
            assert!(v.p_value <= 1.0 / 100.0);
        }
    }
}
