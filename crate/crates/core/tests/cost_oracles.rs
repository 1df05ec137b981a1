use qsquare::cost::{
    adder_and_polynomial, baseline_costs, cascade_and_count, measure, proposed_costs, reconcile,
    reduction_ratios, DeltaCause, Design, Metric, Parity, Percent,
};
use qsquare::layout::arrange;
use qsquare::synth::synthesize_squarer;

/// Hand-written integer forms of the proposed polynomials.
fn oracle(n: i128) -> [i128; 6] {
    if n % 2 == 0 {
        let t = 5 * n * n - 4 * n - 4;
        let q = (3 * n * n + 2 * n - 4) / 2;
        [
            t,
            t / 2,
            q,
            (24 * n * n - 23 * n - 28) / 2,
            8 * n * n - 7 * n - 10,
            q * (t / 2),
        ]
    } else {
        let t = 5 * n * n - 6 * n - 3;
        let q = (3 * n * n - 3) / 2;
        [
            t,
            t / 2,
            q,
            (24 * n * n - 35 * n - 13) / 2,
            8 * n * n - 11 * n - 5,
            q * (t / 2),
        ]
    }
}

fn values(r: &qsquare::cost::CostReport) -> [i128; 6] {
    Metric::ALL.map(|m| r.closed(m))
}

#[test]
fn proposed_hand_values() {
    assert_eq!(
        values(&proposed_costs(6).unwrap()),
        [152, 76, 58, 349, 236, 4408]
    );
    assert_eq!(
        values(&proposed_costs(5).unwrap()),
        [92, 46, 36, 206, 140, 1656]
    );
    for n in 5..=8 {
        assert_eq!(
            values(&proposed_costs(n).unwrap()),
            oracle(n as i128),
            "n={n}"
        );
    }
}

#[test]
fn baseline_hand_values() {
    let t = baseline_costs(Design::Thapliyal, 6).unwrap();
    assert_eq!(t.closed(Metric::TCount), 440);
    assert_eq!(t.closed(Metric::KqT), 5 * 1296 + 7 * 216 - 3 * 36 - 42 - 2);
    assert_eq!(t.closed(Metric::KqT), 7840);
    let g = baseline_costs(Design::NagamaniOsu, 6).unwrap();
    assert_eq!(g.closed(Metric::TCount), 22 * 36 - 24 * 6 - 12);
    assert_eq!(g.closed(Metric::TCount), 636);
    assert!(baseline_costs(Design::Thapliyal, 1).is_err());
}

#[test]
fn kq_is_qubits_times_t_depth() {
    for n in 5..=50 {
        for d in Design::ALL {
            let r = baseline_costs(d, n).unwrap();
            assert_eq!(
                r.closed(Metric::KqT),
                r.closed(Metric::Qubits) * r.closed(Metric::TDepth),
                "{d:?} n={n}"
            );
        }
    }
}

#[test]
fn parity_dispatch() {
    assert_eq!(proposed_costs(5).unwrap().parity, Parity::Odd);
    assert_eq!(proposed_costs(6).unwrap().parity, Parity::Even);
    assert!(proposed_costs(4).is_err());
}

#[test]
fn nine_reference_ratios() {
    let r = reduction_ratios();
    let expect = [
        (Metric::TCount, Design::Thapliyal, 6667),
        (Metric::TDepth, Design::Thapliyal, 5000),
        (Metric::CnotCount, Design::Thapliyal, 2941),
        (Metric::CnotDepth, Design::Thapliyal, 4286),
        (Metric::KqT, Design::Thapliyal, 2500),
        (Metric::TCount, Design::NagamaniOsu, 7727),
        (Metric::TDepth, Design::NagamaniOsu, 6875),
        (Metric::CnotCount, Design::NagamaniOsu, 5000),
        (Metric::CnotDepth, Design::NagamaniOsu, 6190),
        (Metric::KqT, Design::NagamaniOsu, 625),
    ];
    for (m, d, v) in expect {
        assert_eq!(r[&(m, d)], Percent(v), "{m:?} vs {d:?}");
    }
}

#[test]
fn adder_and_counts_match_widths() {
    // Charging m ANDs to every m-bit adder reproduces the closed form.
    for n in 5..=20 {
        let widths = arrange(n).unwrap().adder_widths();
        let total: usize = widths.iter().sum();
        assert_eq!(
            total as i128,
            adder_and_polynomial(Parity::of(n)).eval(n as u64),
            "n={n}"
        );
    }
    assert_eq!(adder_and_polynomial(Parity::Even).eval(6), 23);
}

#[test]
fn reconciliation_is_formula_exact() {
    for n in 5..=12 {
        let c = synthesize_squarer(n).unwrap();
        let m = measure(&c).unwrap();
        assert_eq!(m.t_count, 4 * m.and_macros, "n={n}");
        let r = reconcile(&m, n).unwrap();
        assert!(r.fully_explained(), "n={n}: {r:?}");
        let t = r.get(Metric::TCount);
        assert_eq!(t.delta, Some(-4 * m.carry_less_stages as i128));
        assert_eq!(m.carry_less_stages, n / 2 - 1);
        assert!(r.get(Metric::TDepth).measured <= Some(r.closed(Metric::TDepth)));
        assert!(r.get(Metric::CnotDepth).measured <= Some(r.closed(Metric::CnotDepth)));
        for (metric, v) in &r.metrics {
            if v.delta != Some(0) {
                assert!(
                    v.cause.is_some() && v.cause != Some(DeltaCause::Unexplained),
                    "n={n} {metric:?}"
                );
            }
        }
        let and = r.and_count.unwrap();
        assert_eq!(and.step1, n * (n - 1) / 2);
        let widths: Vec<usize> = c.stages.iter().map(|s| s.width).collect();
        assert_eq!(and.adders_measured, Some(cascade_and_count(&widths)));
    }
}
