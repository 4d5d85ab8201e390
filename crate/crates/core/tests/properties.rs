use proptest::prelude::*;

use eprwmr_core::gaussian::SqueezeParams;
use eprwmr_core::sim::{classify_bands, read_trajectory_csv, simulate, simulate_superposition, write_trajectory_csv, SuperpositionConfig};
use eprwmr_core::{Setting, SimConfig};

fn setting() -> impl Strategy<Value = Setting> {
    prop_oneof![Just(Setting::XX), Just(Setting::PP), Just(Setting::XP)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bands_partition_every_run(x1 in 0.5f64..6.0, gap in 0.5f64..8.0, n in 1usize..200, seed in any::<u64>(), extra in 0usize..3) {
        let mut c = SuperpositionConfig::new(x1, x1 - gap, 1.0, 2.0, n, seed).unwrap();
        c.record_stride = 20;
        let e = simulate_superposition(&c).unwrap();
        let mut centers = vec![x1, x1 - gap];
        for k in 0..extra {
            centers.push(x1 + 10.0 * (k + 1) as f64);
        }
        for &t in &[0.0, 1.0, 2.0] {
            let b = classify_bands(&e, t, &centers).unwrap();
            prop_assert_eq!(b.band_assignments.len(), n);
            prop_assert_eq!(b.counts.iter().sum::<usize>(), n);
            prop_assert!((b.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(b.band_assignments.iter().all(|&a| a < centers.len()));
            prop_assert_eq!(b.predetermination_defect.is_none(), t == 2.0);
        }
    }

    #[test]
    fn trajectories_do_not_depend_on_ensemble_size(s in setting(), r in 0.0f64..3.0, seed in any::<u64>(), n in 1usize..20) {
        let mut c = SimConfig::new(SqueezeParams::new(r).unwrap(), 1.0, 1.0, n, seed, s).unwrap();
        c.record_stride = 25;
        let small = simulate(&c).unwrap();
        c.n_traj = n + 7;
        let big = simulate(&c).unwrap();
        prop_assert_eq!(&big.paths[..n], &small.paths[..]);
    }

    #[test]
    fn csv_round_trip(s in setting(), r in 0.0f64..3.0, seed in any::<u64>(), n in 1usize..6) {
        let mut c = SimConfig::new(SqueezeParams::new(r).unwrap(), 0.7, 1.4, n, seed, s).unwrap();
        c.record_stride = c.grid().unwrap().steps / 2;
        let e = simulate(&c).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&e, &mut buf).unwrap();
        let rows = read_trajectory_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(rows.len(), n * e.times.len());
        for row in rows {
            let pt = e.paths[row.run][e.time_index(row.t).unwrap()];
            for (a, b) in [(row.x_a, pt.x_a), (row.p_a, pt.p_a), (row.x_b, pt.x_b), (row.p_b, pt.p_b)] {
                prop_assert!((a - b).abs() <= 1e-8 * b.abs());
            }
        }
    }
}
