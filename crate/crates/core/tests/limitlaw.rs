use rwrs_core::limitlaw::{delta_cf, expected_v, sample_delta_batch, sample_v_batch, DeltaRoute, VMethod};
use rwrs_core::real::mean_and_se;
use rwrs_core::replicate::Parallelism;
use rwrs_core::seed::Seed;
use rwrs_core::stats::ecf::{ecf, linear_grid};
use rwrs_core::stats::ks::ks_two_sample;

fn par() -> Parallelism {
    Parallelism::default()
}

fn values(method: VMethod, reps: usize, seed: u64) -> Vec<f64> {
    sample_v_batch(method, reps, Seed(seed), par()).unwrap().iter().map(|v| v.value).collect()
}

#[test]
fn walk_method_mean() {
    let v = values(VMethod::Walk { m: 10_000 }, 100_000, 1);
    assert!(v.iter().all(|x| *x > 0.0));
    let (m, _) = mean_and_se(&v);
    assert!((m / expected_v() - 1.0).abs() <= 0.02, "{m}");
}

#[test]
fn walk_and_brownian_agree() {
    let w = values(VMethod::Walk { m: 10_000 }, 20_000, 2);
    let b = values(VMethod::Brownian { m: 10_000, eps: 0.05 }, 20_000, 3);
    assert!(b.iter().all(|x| *x > 0.0));
    let d = ks_two_sample(&w, &b).unwrap().d;
    assert!(d <= 0.03, "KS {d}");
}

#[test]
fn brownian_resolution_is_stable() {
    let mut means = Vec::new();
    for eps in [0.05, 0.025, 0.0125] {
        // common seeds across resolutions
        let (m, _) = mean_and_se(&values(VMethod::Brownian { m: 10_000, eps }, 20_000, 4));
        means.push(m);
    }
    for w in means.windows(2) {
        assert!((w[1] / w[0] - 1.0).abs() < 0.02, "{means:?}");
    }
    assert!((means[2] / expected_v() - 1.0).abs() <= 0.02, "{means:?}");
}

#[test]
fn delta_moments_and_symmetry() {
    let sigma2 = 2.0;
    let d = sample_delta_batch(sigma2, VMethod::Walk { m: 10_000 }, DeltaRoute::Conditional, 100_000, Seed(5), par()).unwrap();
    let x: Vec<f64> = d.iter().map(|s| s.delta).collect();
    let (m, se) = mean_and_se(&x);
    assert!(m.abs() < 4.0 * se);
    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    let (m2, _) = mean_and_se(&sq);
    assert!((m2 / (sigma2 * expected_v()) - 1.0).abs() <= 0.03, "{m2}");
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    assert!(ks_two_sample(&x, &neg).unwrap().d <= 0.01);
    assert!(d.iter().all(|s| s.delta == sigma2.sqrt() * (s.v.sqrt() * s.g)));
}

#[test]
fn direct_integral_matches_conditional() {
    let a: Vec<f64> =
        sample_delta_batch(1.0, VMethod::Walk { m: 4096 }, DeltaRoute::Conditional, 20_000, Seed(6), par()).unwrap().iter().map(|s| s.delta).collect();
    let b: Vec<f64> =
        sample_delta_batch(1.0, VMethod::Walk { m: 4096 }, DeltaRoute::DirectIntegral, 20_000, Seed(7), par()).unwrap().iter().map(|s| s.delta).collect();
    let r = ks_two_sample(&a, &b).unwrap();
    assert!(r.d <= r.threshold, "{r:?}");
    assert!(sample_delta_batch(1.0, VMethod::Brownian { m: 10, eps: 0.1 }, DeltaRoute::DirectIntegral, 2, Seed(0), par()).is_err());
}

#[test]
fn cf_routes_agree() {
    let d = sample_delta_batch(1.0, VMethod::Walk { m: 10_000 }, DeltaRoute::Conditional, 100_000, Seed(8), par()).unwrap();
    let v: Vec<f64> = d.iter().map(|s| s.v).collect();
    let x: Vec<f64> = d.iter().map(|s| s.delta).collect();
    let u = linear_grid(-3.0, 3.0, 61);
    let cf = delta_cf(&u, &v).unwrap();
    let e = ecf(&x, &u).unwrap();
    for (i, t) in u.iter().enumerate() {
        let diff = (e.values[i].re - cf.value[i]).abs();
        let se = (e.se_norm(i).powi(2) + cf.se[i].powi(2)).sqrt();
        assert!(diff <= 3.0 * se, "u = {t}: {diff} vs 3 SE {}", 3.0 * se);
    }
    let at_one = u.iter().position(|t| *t == 1.0).unwrap();
    assert!((e.values[at_one].re - cf.value[at_one]).abs() <= 0.01);
    assert!(cf.value.iter().all(|v| *v > 0.0 && *v <= 1.0));
}

#[test]
fn scaling_is_exact_under_matched_seeds() {
    let a = sample_delta_batch(1.0, VMethod::Brownian { m: 500, eps: 0.05 }, DeltaRoute::Conditional, 500, Seed(9), par()).unwrap();
    let b = sample_delta_batch(4.0, VMethod::Brownian { m: 500, eps: 0.05 }, DeltaRoute::Conditional, 500, Seed(9), par()).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| y.delta == 2.0 * x.delta));
}
