//! Property suites over randomized inputs: metric axioms on the torus,
//! construction-oracle equivalence, moment-path cross-checks, exact epidemic
//! identities, and design/bound inversion.

use proptest::prelude::*;

use rggspec::bound::{design_radius, lambda_max_bound};
use rggspec::moments1d::expected_moment_1d;
use rggspec::rgg::{brute_force_neighbors, build, build_with_positions, RggSpec};
use rggspec::sis;
use rggspec::spectral::{moments_by_eigenvalues, moments_by_walks};
use rggspec::torus::{sample_uniform, torus_distance, TorusPoint};

fn coord() -> impl Strategy<Value = f64> {
    (0u32..10_000).prop_map(|i| i as f64 / 10_000.0)
}

fn point(d: usize) -> impl Strategy<Value = TorusPoint> {
    prop::collection::vec(coord(), d).prop_map(|c| TorusPoint::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_symmetry_and_identity(d in 1usize..4, seed in any::<u64>()) {
        let cloud = sample_uniform(8, d, seed).unwrap();
        for a in cloud.points() {
            for b in cloud.points() {
                let ab = torus_distance(a, b).unwrap();
                let ba = torus_distance(b, a).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert!(ab >= 0.0);
                prop_assert!(ab <= (d as f64 * 0.25).sqrt() + 1e-12);
            }
            prop_assert_eq!(torus_distance(a, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn triangle_inequality(d in 1usize..4, a in point(3), b in point(3), c in point(3)) {
        // truncate to the sampled dimension
        let take = |p: &TorusPoint| TorusPoint::new(p.coords()[..d].to_vec()).unwrap();
        let (a, b, c) = (take(&a), take(&b), take(&c));
        let ab = torus_distance(&a, &b).unwrap();
        let bc = torus_distance(&b, &c).unwrap();
        let ac = torus_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12, "{} > {} + {}", ac, ab, bc);
    }

    #[test]
    fn cell_list_matches_brute_force(
        n in 1usize..500,
        d in 1usize..4,
        r_scale in 1u32..49,
        seed in any::<u64>(),
    ) {
        let r = r_scale as f64 / 100.0;
        let cloud = sample_uniform(n, d, seed).unwrap();
        let oracle = brute_force_neighbors(&cloud, r);
        let g = build_with_positions(cloud, r).unwrap();
        for i in 0..n {
            prop_assert_eq!(g.neighbors(i), &oracle[i][..], "node {}", i);
        }
    }

    #[test]
    fn walk_and_eigen_moments_agree(
        n in 2usize..150,
        r_scale in 1u32..30,
        seed in any::<u64>(),
    ) {
        let r = r_scale as f64 / 100.0;
        let g = build(&RggSpec { n, d: 1, r, seed }).unwrap();
        let walks = moments_by_walks(&g, 6).unwrap();
        let eigen = moments_by_eigenvalues(&g, 6).unwrap();
        for k in 0..6 {
            let rel = (walks[k] - eigen[k]).abs() / walks[k].abs().max(1.0);
            prop_assert!(rel <= 1e-8, "k={} walks={} eigen={}", k + 1, walks[k], eigen[k]);
        }
    }

    #[test]
    fn disease_free_state_stays_fixed(
        n in 1usize..100,
        beta in 0.0f64..1.0,
        delta in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let g = build(&RggSpec { n, d: 1, r: 0.05, seed }).unwrap();
        let (next, clamps) = sis::step(&g, &vec![0.0; n], beta, delta).unwrap();
        prop_assert!(next.iter().all(|&p| p == 0.0));
        prop_assert_eq!(clamps, 0);
    }

    #[test]
    fn zero_beta_decays_geometrically(
        n in 1usize..80,
        delta in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let g = build(&RggSpec { n, d: 1, r: 0.05, seed }).unwrap();
        let p0 = sis::seed_infection(n, 0.5, seed).unwrap();
        let params = sis::EpidemicParams {
            beta: 0.0,
            delta,
            p0: p0.clone(),
            steps: 10,
            die_out_threshold: 1e-300,
        };
        let traj = sis::simulate(&g, &params).unwrap();
        for (k, row) in traj.probabilities.iter().enumerate() {
            let factor = (1.0 - delta).powi(k as i32);
            for (i, &p) in row.iter().enumerate() {
                prop_assert!((p - factor * p0[i]).abs() <= 1e-12, "step {} node {}", k, i);
            }
        }
    }

    #[test]
    fn design_and_bound_invert(
        n in 1usize..100_000,
        d in 1usize..4,
        beta in 0.001f64..1.0,
        delta in 0.001f64..1.0,
        c in 0.5f64..5.0,
    ) {
        let res = design_radius(n, d, beta, delta, c).unwrap();
        let back = lambda_max_bound(n, res.r_max, d, c);
        let rel = (back - delta / beta).abs() / (delta / beta);
        prop_assert!(rel <= 1e-12, "round trip {} vs {}", back, delta / beta);
    }

    #[test]
    fn probabilities_stay_in_unit_interval(
        n in 1usize..60,
        beta in 0.0f64..1.0,
        delta in 0.0f64..1.0,
        level in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let g = build(&RggSpec { n, d: 1, r: 0.2, seed }).unwrap();
        let params = sis::EpidemicParams {
            beta,
            delta,
            p0: sis::seed_infection(n, level, seed).unwrap(),
            steps: 20,
            die_out_threshold: 1e-9,
        };
        let traj = sis::simulate(&g, &params).unwrap();
        for row in &traj.probabilities {
            prop_assert!(row.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }

    #[test]
    fn analytic_moments_scale_consistently(
        n in 100usize..5000,
        r_scale in 1u32..100,
    ) {
        // E[m_k] = (nr)^{k-1} Vol(H_{k-1}): doubling n doubles density
        let r = r_scale as f64 / 25_000.0;
        for k in 2..=6 {
            let base = expected_moment_1d(n, r, k).unwrap();
            let double = expected_moment_1d(2 * n, r, k).unwrap();
            let expect = base * 2f64.powi(k as i32 - 1);
            prop_assert!((double - expect).abs() <= 1e-9 * expect.abs().max(1.0));
        }
    }
}
