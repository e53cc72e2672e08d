use aoi_core::analytic::SingleBuffer;
use aoi_core::sim::{empirical_vs_analytic, run, run_audited, Capacity, SimConfig, SimReport, TieRule};
use aoi_core::{AoiModel, ModelParams, SystemSize};

fn params() -> ModelParams {
    ModelParams::new(0.2, 0.5).unwrap()
}

#[test]
fn default_tie_rule_reproduces_bufferless_law() {
    let exact = SingleBuffer::new(params()).unwrap().mean();
    let base = SimConfig::new(params(), Capacity::Finite(1)).with_slots(5_000_000, 10_000);
    assert_eq!(base.tie_rule, TieRule::BlockOnFull);

    let blocked = run(&base).unwrap();
    assert!((blocked.empirical_mean - exact).abs() / exact < 0.01);
    assert!(empirical_vs_analytic(&blocked, SystemSize::One).unwrap().tv_distance < 0.01);

    // admitting after a same-slot departure gives a different law (mean 6.24)
    let accepting = run(&base.with_tie_rule(TieRule::AcceptAfterDeparture)).unwrap();
    assert!((accepting.empirical_mean - exact).abs() / exact > 0.01);
    assert!((accepting.empirical_mean - 6.24).abs() < 0.03);
}

#[test]
fn error_shrinks_with_run_length() {
    let exact = 94.0 / 15.0;
    let mean_error = |slots: u64| -> f64 {
        [11u64, 12, 13]
            .iter()
            .map(|&seed| {
                let cfg = SimConfig::new(params(), Capacity::Unbounded)
                    .with_slots(slots, 10_000)
                    .with_seed(seed);
                (run(&cfg).unwrap().empirical_mean - exact).abs()
            })
            .sum::<f64>()
            / 3.0
    };
    let lengths = [100_000u64, 1_000_000, 10_000_000];
    let errors: Vec<f64> = lengths.into_iter().map(mean_error).collect();
    // three seeds per length are too few for strict monotonicity between the
    // two longer runs; check the 1/sqrt(T) envelope from the shortest run instead
    for (len, err) in lengths.iter().zip(&errors).skip(1) {
        let envelope = errors[0] * (lengths[0] as f64 / *len as f64).sqrt();
        assert!(*err < errors[0] / 3.0, "{errors:?}");
        assert!(*err < 3.0 * envelope, "{errors:?}");
    }
}

#[test]
fn longer_runs_are_closer_in_distribution() {
    let cfg = SimConfig::new(params(), Capacity::Unbounded).with_seed(5);
    let short = run(&cfg.with_slots(100_000, 10_000)).unwrap();
    let long = run(&cfg.with_slots(10_000_000, 10_000)).unwrap();
    let tv_short = empirical_vs_analytic(&short, SystemSize::Infinite).unwrap().tv_distance;
    let tv_long = empirical_vs_analytic(&long, SystemSize::Infinite).unwrap().tv_distance;
    assert!(tv_long < tv_short);
    assert!(tv_long <= 0.01);
}

#[test]
fn finite_capacities_are_audited_and_lossy() {
    for c in [1, 2, 5] {
        let cfg = SimConfig::new(ModelParams::new(0.4, 0.5).unwrap(), Capacity::Finite(c)).with_slots(100_000, 1_000);
        let (result, audit) = run_audited(&cfg).unwrap();
        assert_eq!(audit.violations, 0);
        assert_eq!(audit.deliveries_checked, result.delivered_count);
        assert!(result.dropped_count > 0);
        assert_eq!(
            result.delivered_count + result.dropped_count + result.final_occupancy,
            result.arrival_count
        );
    }
}

#[test]
fn mean_is_between_extremes_for_intermediate_capacity() {
    let p = params();
    let run_mean = |capacity| {
        run(&SimConfig::new(p, capacity).with_slots(4_000_000, 10_000).with_seed(9))
            .unwrap()
            .empirical_mean
    };
    let (one, three, inf) = (run_mean(Capacity::Finite(1)), run_mean(Capacity::Finite(3)), run_mean(Capacity::Unbounded));
    assert!(three < one + 0.05 && three > inf - 0.05, "{one} {three} {inf}");
}

#[test]
fn report_uses_public_field_names() {
    let cfg = SimConfig::new(params(), Capacity::Unbounded).with_slots(20_000, 100).with_pmf_horizon(5);
    let report = run(&cfg).unwrap().report();
    let json = serde_json::to_value(&report).unwrap();
    let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec!["arrivals", "capacity", "deliveries", "drops", "gamma", "max_aoi", "mean", "p", "pmf", "seed", "slots", "tie_rule", "warmup"]
    );
    assert_eq!(json["capacity"], "inf");
    assert_eq!(json["tie_rule"], "block-on-full");
    assert_eq!(json["pmf"][0][0], 1);
    assert_eq!(json["pmf"].as_array().unwrap().len(), 5);
    let back: SimReport = serde_json::from_value(json).unwrap();
    assert_eq!(back, report);

    let finite = SimConfig::new(params(), Capacity::Finite(2)).with_slots(1_000, 10);
    let json = serde_json::to_value(run(&finite).unwrap().report()).unwrap();
    assert_eq!(json["capacity"], 2);
}
