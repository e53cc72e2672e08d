use aoi_core::analytic::InfiniteQueue;
use aoi_core::chain::{residual_against, stationary_distribution};
use aoi_core::{AoiModel, ModelParams};

#[test]
fn chain_matches_closed_form_away_from_clamp() {
    for (p, g) in [(0.2, 0.5), (0.1, 0.9), (0.45, 0.5)] {
        let params = ModelParams::new(p, g).unwrap();
        let solution = stationary_distribution(params, 300, 1e-13).unwrap();
        let exact = InfiniteQueue::new(params).unwrap();
        assert!((solution.total() - 1.0).abs() < 1e-12);
        assert!(solution.iter().all(|(_, _, prob)| prob >= 0.0));
        let worst = (1..=250u64)
            .flat_map(|n| (0..n).map(move |m| (n, m)))
            .map(|(n, m)| (solution.probability(n, m) - exact.pi(n, m).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "({p},{g}): {worst}");

        // clamped rows hold the closed-form tail beyond N - 2, up to the
        // residue of the uniform start left at the stopping tolerance
        assert!(
            solution.clamp_mass() <= 2.0 * exact.tail_mass_bound(298) + 1e-12,
            "({p},{g}): clamp {:e} vs bound {:e}",
            solution.clamp_mass(),
            exact.tail_mass_bound(298)
        );

        let residual = residual_against(&solution, 200);
        assert!(residual <= 1e-8, "({p},{g}) residual {residual}");
    }
}

#[test]
fn chain_marginal_matches_aoi_law() {
    let params = ModelParams::new(0.2, 0.5).unwrap();
    let solution = stationary_distribution(params, 300, 1e-13).unwrap();
    assert!((solution.probability(1, 0) - 0.075).abs() < 1e-9);
    assert!((solution.probability(2, 1) - 0.016875).abs() < 1e-9);
    let marginal = solution.aoi_marginal().unwrap();
    assert!((marginal.mass(2) - 0.114375).abs() < 1e-9);
    assert!((marginal.stored_mass() + marginal.tail_bound() - 1.0).abs() <= marginal.eps());
    assert!((marginal.mean() - 6.266_666_666_666_667).abs() < 1e-6);
}
