use memwave::dbmd::{DbmdNetwork, DbmdParameters};
use memwave::models::{CharacteristicCurve, CurveModel, MultilevelParameters};
use memwave::port::{FixedPointConfig, MemristivePort};
use memwave::scenario::{
    hysteresis_area, run_scenario, run_with_source, Excitation, ModelKind, ModelSpec, TimeGrid, ValidationCircuit,
};

fn distinct(mut g: Vec<f64>) -> Vec<f64> {
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

#[test]
fn multilevel_plateaus_at_both_frequencies() {
    let spec = ModelSpec::Multilevel(MultilevelParameters::table_iv(10));
    let cfg = FixedPointConfig::default();
    // z starts at 0; at 2 Hz the upper levels are only reached once the U0
    // drift has accumulated, so both runs last 4 s
    for f in [1.0, 2.0] {
        let exc = Excitation::triangular(5.0, f).unwrap();
        let grid = TimeGrid::new(0.0, 1e-3, 4.0).unwrap();
        let tr = run_scenario(&mut spec.build(1e-3).unwrap(), &exc, &grid, &cfg).unwrap();
        assert_eq!(distinct(tr.memductance()).len(), 11, "F = {f} Hz");
    }
}

#[test]
fn binary_curve_visits_both_plateaus() {
    let spec = ModelSpec::bundled(ModelKind::Binary);
    let exc = Excitation::triangular(5.0, 1.0).unwrap();
    let grid = TimeGrid::new(0.0, 1e-3, 2.0).unwrap();
    let tr = run_scenario(
        &mut spec.build(1e-3).unwrap(),
        &exc,
        &grid,
        &FixedPointConfig::default(),
    )
    .unwrap();
    let g = distinct(tr.memductance());
    assert_eq!(g[0], 100e-6);
    assert_eq!(*g.last().unwrap(), 3.0);
}

#[test]
fn constant_curve_is_a_resistor() {
    let curve = CharacteristicCurve::new(vec![(0.0, 2.0), (1.0, 2.0)]).unwrap();
    let mut dev = ValidationCircuit::new(CurveModel::new(curve, 0.0).unwrap(), 1e-3).unwrap();
    let exc = Excitation::triangular(5.0, 3.0).unwrap();
    let grid = TimeGrid::new(0.0, 1e-3, 1.0).unwrap();
    let tr = run_scenario(&mut dev, &exc, &grid, &FixedPointConfig::default()).unwrap();
    for r in &tr.records {
        assert!((r.i - r.e * 2.0 / 1.2).abs() <= 1e-12 * (1.0 + r.i.abs()));
    }
}

#[test]
fn zero_drive_gives_zero_current() {
    let grid = TimeGrid::new(0.0, 1e-3, 1.0).unwrap();
    let cfg = FixedPointConfig::default();
    for kind in [
        ModelKind::Binary,
        ModelKind::Continuous,
        ModelKind::Hp,
        ModelKind::Multilevel,
    ] {
        let mut dev = ModelSpec::bundled(kind).build(1e-3).unwrap();
        let tr = run_with_source(&mut dev, |_| 0.0, &grid, &cfg).unwrap();
        assert!(tr.records.iter().all(|r| r.i == 0.0 && r.u == 0.0), "{}", kind.name());
    }
}

#[test]
fn dbmd_at_rest_over_many_steps() {
    let mut net = DbmdNetwork::new(DbmdParameters::table_v(), 10e-3).unwrap();
    let cfg = FixedPointConfig::new(6).unwrap();
    let mut z_prev = net.stored_state();
    for _ in 0..100_000 {
        let s = net.step(0.0, &cfg).unwrap();
        assert_eq!(s.current, 0.0);
        assert!(s.state.is_finite() && (0.0..=1.0).contains(&s.state));
        // with no bias only the U_c term acts, pushing z up
        assert!(s.state >= z_prev);
        z_prev = s.state;
    }
}

#[test]
fn dbmd_slow_drive_traverses_hysteresis() {
    let d = ModelKind::Dbmd.defaults();
    let exc = d.excitation(0.01).unwrap();
    let grid = TimeGrid::new(0.0, d.period, d.t_stop(0.01)).unwrap();
    let mut net = DbmdNetwork::new(DbmdParameters::table_v(), d.period).unwrap();
    let tr = run_scenario(&mut net, &exc, &grid, &FixedPointConfig::new(d.iterations).unwrap()).unwrap();
    let z = tr.state(0);
    let lo = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(lo > 0.0 && hi < 1.0 && hi - lo > 0.1, "z in [{lo}, {hi}]");
    assert!(hysteresis_area(&tr, 100.0).unwrap() > 0.0);
}

#[test]
fn hp_area_shrinks_with_frequency() {
    let d = ModelKind::Hp.defaults();
    let spec = ModelSpec::bundled(ModelKind::Hp);
    let area = |f: f64| {
        let grid = TimeGrid::new(0.0, 1e-3, 2.0 / f).unwrap();
        let tr = run_scenario(
            &mut spec.build(1e-3).unwrap(),
            &d.excitation(f).unwrap(),
            &grid,
            &FixedPointConfig::default(),
        )
        .unwrap();
        hysteresis_area(&tr, 1.0 / f).unwrap()
    };
    assert!(area(1.0) > area(1.5));
}

#[test]
fn six_sweeps_reach_the_converged_port_solution() {
    // slow sine on a smooth characteristic; a 60-sweep tolerance-driven run
    // is the reference
    let t = 10e-3;
    let exc = Excitation::sine(0.05, 0.01).unwrap();
    let c = ModelSpec::bundled(ModelKind::Continuous)
        .characteristic()
        .unwrap()
        .unwrap();
    let curve = || CurveModel::new(c.clone(), 0.0).unwrap();
    let mut six = MemristivePort::new(curve(), 0.1, t).unwrap();
    let mut full = MemristivePort::new(curve(), 0.1, t).unwrap();
    let cfg6 = FixedPointConfig::new(6).unwrap();
    let cfg_full = FixedPointConfig::new(60).unwrap().with_tolerance(1e-15);
    for k in 0..=10_000 {
        let a = exc.sample(k as f64 * t);
        let s6 = six.step(a, &cfg6).unwrap();
        let sf = full.step(a, &cfg_full).unwrap();
        assert!(s6.residual <= 1e-9, "k={k}: residual {}", s6.residual);
        assert!((s6.b - sf.b).abs() <= 1e-9, "k={k}: {} vs {}", s6.b, sf.b);
    }
}
