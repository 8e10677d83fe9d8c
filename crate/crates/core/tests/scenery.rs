use rwrs_core::dynsys::{Observable, TorusMap};
use rwrs_core::real::mean_and_se;
use rwrs_core::scenery::{generate, generate_shared, generate_with_streams, SceneryModel, SceneryStreams, SceneryWindow};
use rwrs_core::seed::Seed;
use rwrs_core::stats::ks::ks_two_sample;
use std::sync::Arc;

fn models() -> Vec<(&'static str, SceneryModel)> {
    let cat = TorusMap::cat();
    let coin_f = Observable::polynomial(vec![(vec![0, 0], 0.5), (vec![1, 0], 0.5)]).unwrap();
    let f1 = Observable::polynomial(vec![(vec![0, 0], 0.25), (vec![1, 0], 0.125), (vec![1, 1], 0.125)]).unwrap();
    let f2 = Observable::polynomial(vec![(vec![0, 0], 0.5), (vec![1, 0], -0.125)]).unwrap();
    let f3 = Observable::polynomial(vec![(vec![0, 0], 0.25), (vec![1, 1], -0.125)]).unwrap();
    vec![
        ("rademacher", SceneryModel::rademacher()),
        ("gaussian", SceneryModel::gaussian(1.0).unwrap()),
        ("direct", SceneryModel::torus_direct(cat.clone(), Observable::cos_first(2)).unwrap()),
        ("coin", SceneryModel::torus_coin(cat.clone(), coin_f).unwrap()),
        ("multi", SceneryModel::torus_multi(cat, vec![2.0, 0.0, -2.0], vec![f1, f2, f3]).unwrap()),
    ]
}

fn column(windows: &[SceneryWindow<f64>], k: i64) -> Vec<f64> {
    windows.iter().map(|w| w.get(k).unwrap()).collect()
}

#[test]
fn stationarity_centering_and_bounds() {
    for (name, model) in models() {
        let shared = Arc::new(model.clone());
        let windows: Vec<SceneryWindow<f64>> = (0..100_000).map(|r| generate_shared(Arc::clone(&shared), 6, Seed(10).replicate(r)).unwrap()).collect();
        for (a, b) in [(0, 5), (1, 6)] {
            let d = ks_two_sample(&column(&windows, a), &column(&windows, b)).unwrap().d;
            assert!(d <= 0.02, "{name}: KS(xi_{a}, xi_{b}) = {d}");
        }
        let (m, se) = mean_and_se(&column(&windows, 0));
        assert!(m.abs() < 4.0 * se, "{name}: mean {m} se {se}");
        let bound = model.sup_bound();
        assert!(windows.iter().all(|w| w.values().iter().all(|v| v.abs() <= bound)), "{name}");
    }
}

#[test]
fn conditional_independence_given_omega() {
    for (name, model) in models().into_iter().filter(|(n, _)| *n == "coin" || *n == "multi") {
        let shared = Arc::new(model);
        for omega in 0..3u64 {
            let streams = SceneryStreams::from(Seed(omega));
            // conditional covariance: E[x0 x1 | omega] - E[x0 | omega] E[x1 | omega]
            let xs: Vec<(f64, f64)> = (0..50_000)
                .map(|r| {
                    let w: SceneryWindow<f64> =
                        generate_with_streams(Arc::clone(&shared), 1, Seed(omega), SceneryStreams { coins: Seed(1000 + r), ..streams }).unwrap();
                    (w.get(0).unwrap(), w.get(1).unwrap())
                })
                .collect();
            let m0 = xs.iter().map(|p| p.0).sum::<f64>() / xs.len() as f64;
            let m1 = xs.iter().map(|p| p.1).sum::<f64>() / xs.len() as f64;
            let centered: Vec<f64> = xs.iter().map(|p| (p.0 - m0) * (p.1 - m1)).collect();
            let (c, se) = mean_and_se(&centered);
            assert!(c.abs() < 4.0 * se, "{name} omega {omega}: cov {c} se {se}");
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for (_, model) in models() {
        let a: SceneryWindow<f64> = generate(&model, 300, Seed(4)).unwrap();
        let b: SceneryWindow<f64> = generate(&model, 300, Seed(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 601);
        let grown = a.extend(350).unwrap().extend(500).unwrap();
        assert_eq!(grown, a.extend(500).unwrap());
        assert_eq!(grown.restrict(300), a);
    }
}

#[test]
fn extending_keeps_statistics() {
    let w: SceneryWindow<f64> = generate(&SceneryModel::rademacher(), 1000, Seed(5)).unwrap();
    let before = mean_and_se(w.values());
    let after = w.extend(5000).unwrap();
    assert_eq!(mean_and_se(after.restrict(1000).values()), before);
}

#[test]
fn csv_export() {
    let w: SceneryWindow<f64> = generate(&SceneryModel::rademacher(), 2, Seed(6)).unwrap();
    let mut buf = Vec::new();
    w.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,xi");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("-2,"));
}
