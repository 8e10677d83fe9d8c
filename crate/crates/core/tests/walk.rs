use rwrs_core::dynsys::{Observable, TorusMap};
use rwrs_core::real::{exact_sum, mean_and_se};
use rwrs_core::replicate::{replicate, replicate_with, Parallelism};
use rwrs_core::scenery::{generate, SceneryModel, SceneryWindow};
use rwrs_core::seed::Seed;
use rwrs_core::walk::{
    evaluate_functional, max_excursion, occupation, sample_walk, self_intersection, sum_along_path, sum_by_occupation, OccupationScratch, WalkPath,
    WindowPolicy,
};
use rwrs_core::Error;

#[test]
fn small_paths() {
    for s in 0..20 {
        let p = sample_walk(1, Seed(s)).unwrap();
        assert!(p.positions()[0].abs() == 1);
        assert_eq!(max_excursion(&p), 1);
        let occ = occupation(&p);
        assert_eq!(occ.iter().filter(|(_, c)| *c > 0).collect::<Vec<_>>(), vec![(p.positions()[0], 1)]);
        assert_eq!(self_intersection(&occ).raw, 1);
    }
    let p = WalkPath::from_steps(&[1, 1]).unwrap();
    let occ = occupation(&p);
    assert_eq!((occ.get(0), occ.get(1), occ.get(2)), (0, 1, 1));
    let mono = WalkPath::from_steps(&[-1; 50]).unwrap();
    assert_eq!(max_excursion(&mono), 50);
    let si = self_intersection(&occupation(&mono));
    assert_eq!(si.raw, 50);
    assert!((si.scaled - 50f64.powf(-0.5)).abs() < 1e-15);
    assert!(matches!(sample_walk(0, Seed(0)), Err(Error::InvalidArgument(_))));
}

#[test]
fn occupation_invariants() {
    for s in 0..200 {
        let p = sample_walk(1 + 37 * s as usize, Seed(s)).unwrap();
        let occ = occupation(&p);
        assert_eq!(occ.counts().iter().sum::<u64>(), p.n() as u64);
        let ex = max_excursion(&p) as i64;
        assert_eq!(occ.get(ex + 1), 0);
        assert_eq!(occ.get(-ex - 1), 0);
        assert_eq!(occ.k_min(), *p.positions().iter().min().unwrap());
        assert_eq!(occ.k_max(), *p.positions().iter().max().unwrap());
        assert!(p.positions().windows(2).all(|w| (w[1] - w[0]).abs() == 1));
    }
}

#[test]
fn endpoint_moments() {
    let ends: Vec<f64> = replicate(100_000, Seed(1), Parallelism::default(), |_, s| *sample_walk(100, s).unwrap().positions().last().unwrap() as f64);
    let (m, _) = mean_and_se(&ends);
    assert!(m.abs() <= 4.0 * (100.0f64 / 1e5).sqrt());
    let var = ends.iter().map(|e| e * e).sum::<f64>() / ends.len() as f64 - m * m;
    assert!((var / 100.0 - 1.0).abs() <= 0.05);
}

#[test]
fn functional_examples() {
    let cos = SceneryModel::torus_direct(TorusMap::cat(), Observable::cos_first(2)).unwrap();
    let constant = SceneryModel::gaussian(0.0).unwrap();
    let w: SceneryWindow<f64> = generate(&constant, 5, Seed(0)).unwrap();
    let p = sample_walk(40, Seed(2)).unwrap();
    assert_eq!(evaluate_functional(&w, &p, WindowPolicy::AutoExtend).unwrap().sum, 0.0);
    // n = 2, S = (1, 0): Z = xi_1 + xi_0
    let w: SceneryWindow<f64> = generate(&cos, 3, Seed(3)).unwrap();
    let p = WalkPath::from_steps(&[1, -1]).unwrap();
    let z = evaluate_functional(&w, &p, WindowPolicy::Error).unwrap();
    assert_eq!(z.sum, w.get(1).unwrap() + w.get(0).unwrap());
    assert_eq!(z.normalized, z.sum / 2f64.powf(0.75));
    let far = WalkPath::from_steps(&[1; 10]).unwrap();
    assert!(matches!(evaluate_functional(&w, &far, WindowPolicy::Error), Err(Error::WindowTooSmall { .. })));
    let auto = evaluate_functional(&w, &far, WindowPolicy::AutoExtend).unwrap();
    let wide = w.extend(10).unwrap();
    assert_eq!(auto.sum, exact_sum((1..=10).map(|k| wide.get(k).unwrap())));
}

#[test]
fn two_routes_agree_exactly() {
    let model = SceneryModel::gaussian(3.0).unwrap();
    for s in 0..1000u64 {
        let p = sample_walk(1 + (s as usize * 7919) % 3000, Seed(s)).unwrap();
        let occ = occupation(&p);
        let w: SceneryWindow<f64> = generate(&model, occ.excursion() as usize, Seed(s + 1)).unwrap();
        assert_eq!(sum_along_path(&w, &p).unwrap().to_bits(), sum_by_occupation(&w, &occ).unwrap().to_bits());
        let z = evaluate_functional(&w, &p, WindowPolicy::Error).unwrap();
        let back = z.normalized * (p.n() as f64).powf(0.75);
        assert!((back - z.sum).abs() <= 2.0 * f64::EPSILON * z.sum.abs().max(f64::MIN_POSITIVE));
    }
}

#[test]
fn scratch_profile_matches_path() {
    let mut scratch = OccupationScratch::new();
    for s in 0..50 {
        let fast = scratch.profile(999, Seed(s)).unwrap();
        assert_eq!(fast, occupation(&sample_walk(999, Seed(s)).unwrap()));
    }
}

#[test]
fn kolmogorov_excursion_bound() {
    let n = 10_000;
    let hits: Vec<bool> = replicate(100_000, Seed(4), Parallelism::default(), |_, s| {
        let p = sample_walk(n, s).unwrap();
        max_excursion(&p) as f64 >= 3.0 * (n as f64).sqrt()
    });
    let freq = hits.iter().filter(|h| **h).count() as f64 / hits.len() as f64;
    // reflection: P(max|S| >= 3 sqrt n) ~ 4 P(N > 3) = 0.0054
    assert!(9.0 * freq <= 1.0, "{freq}");
}

#[test]
fn local_time_sixth_moment_is_bounded() {
    let grid = [1usize << 8, 1 << 10, 1 << 12, 1 << 14];
    let values: Vec<f64> = grid
        .iter()
        .map(|&n| {
            let sixth: Vec<f64> = replicate_with(20_000, Seed(n as u64), Parallelism::default(), OccupationScratch::new, |s, _, rs| {
                (s.profile(n, rs).unwrap().get(0) as f64).powi(6)
            });
            (sixth.iter().sum::<f64>() / sixth.len() as f64).powf(1.0 / 6.0) / (n as f64).sqrt()
        })
        .collect();
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(max / min < 1.5, "{values:?}");
}

#[test]
fn local_time_increments_are_regular() {
    let mut values = Vec::new();
    for n in [1usize << 10, 1 << 14] {
        let profiles: Vec<Vec<u64>> = replicate_with(20_000, Seed(7 + n as u64), Parallelism::default(), OccupationScratch::new, |s, _, rs| {
            let p = s.profile(n, rs).unwrap();
            [0i64, 1, 2, 4, 8, 16].iter().map(|&k| p.get(k)).collect()
        });
        for (i, l) in [1usize, 2, 4, 8, 16].into_iter().enumerate() {
            let ms = profiles.iter().map(|c| (c[i + 1] as f64 - c[0] as f64).powi(2)).sum::<f64>() / profiles.len() as f64;
            values.push(ms.sqrt() / ((1.0 + l as f64).sqrt() * (n as f64).powf(0.25)));
        }
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(max <= 3.0 && max / min <= 3.0, "{values:?}");
}

#[test]
fn csv_exports() {
    let p = WalkPath::from_steps(&[1, -1, -1]).unwrap();
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "j,S_j\n0,0\n1,1\n2,0\n3,-1\n");
    let mut buf = Vec::new();
    occupation(&p).write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "k,N\n-1,1\n0,1\n1,1\n");
}
