use dhk_core::conespline::sampling::GridAxis;
use dhk_core::oracle::{montecarlo_pushforward, MonteCarloConfig};
use dhk_core::rational::RatVec;
use dhk_core::verify::{chopped_quadrant, Suite};

fn table(seed: u64) -> Vec<u64> {
    let cfg = MonteCarloConfig { seed, samples: 200_000, cutoff_radius: 2.0 };
    let bins = [GridAxis { lo: 0.0, hi: 4.0, n: 4 }];
    montecarlo_pushforward(&[RatVec::from_ints(&[1])], &[0.0], &bins, &cfg)
        .unwrap()
        .bins
        .iter()
        .map(|b| b.count)
        .collect()
}

#[test]
fn montecarlo_is_deterministic_per_seed() {
    assert_eq!(table(7), table(7));
    assert_ne!(table(7), table(8));
}

#[test]
fn chopped_polygons_contain_their_vertices() {
    for seed in 0..20 {
        let p = chopped_quadrant(seed, 4);
        for pt in p.points() {
            let x: Vec<f64> = pt.image.to_f64();
            assert!(p.contains(&x), "seed {seed}: {x:?}");
        }
    }
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nope".parse::<Suite>().is_err());
}

#[test]
fn circle_suite_is_reproducible() {
    let a = Suite::ALL.iter().find(|s| s.name() == "circle").unwrap().run(3);
    let b = Suite::ALL.iter().find(|s| s.name() == "circle").unwrap().run(3);
    assert!(a.passed);
    assert_eq!(a.worst, b.worst);
}
