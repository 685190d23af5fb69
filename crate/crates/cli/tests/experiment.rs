use frselect::{Params, RngStream};
use proptest::prelude::*;
use selectbench::experiment::{run_experiment, run_experiment_with, RunOptions, TrialReport};
use selectbench::{emit_table, generate, Family, InputSpec, KRule, TableFormat};

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

proptest! {
    #[test]
    fn generator_cardinalities(f in family(), n in 1usize..3000, seed in any::<u64>()) {
        let v = generate(f, n, &mut RngStream::from_seed(seed));
        prop_assert_eq!(v.len(), n);
        match f {
            Family::Random => {
                let mut s = v.clone();
                s.sort_unstable();
                prop_assert!(s.iter().enumerate().all(|(i, &x)| x == i as u64 + 1));
            }
            Family::Onezero => {
                prop_assert_eq!(v.iter().filter(|&&x| x == 1).count(), n.div_ceil(2));
                prop_assert!(v.iter().all(|&x| x <= 1));
            }
            Family::Sorted => prop_assert!(v.windows(2).all(|w| w[0] < w[1])),
            Family::Organpipe => {
                let rev: Vec<u64> = v.iter().rev().cloned().collect();
                prop_assert_eq!(&rev, &v);
                prop_assert_eq!(*v.iter().max().unwrap(), n.div_ceil(2) as u64);
            }
        }
    }

    #[test]
    fn reports_match_the_oracle(f in family(), n in 1usize..4000, k_seed in any::<u64>(), seed in any::<u64>()) {
        let k = 1 + (k_seed % n as u64) as usize;
        let spec = InputSpec::new(f, n).with_k(KRule::Explicit(k));
        let params = Params { n_cut: 10, ..Params::default() };
        let r = run_experiment(spec, &params, 2, seed).unwrap();
        for rec in &r.records {
            let mut v = generate(f, n, &mut RngStream::for_trial(seed, rec.trial, 0));
            v.sort_unstable();
            prop_assert_eq!(rec.value, v[k - 1]);
        }
    }
}

fn without_time(mut r: TrialReport) -> TrialReport {
    for rec in &mut r.records {
        rec.time_ms = 0.0;
    }
    r
}

#[test]
fn reports_do_not_depend_on_threads() {
    let spec = InputSpec::new(Family::Random, 50_000);
    let params = Params::default();
    let run = |threads| {
        let opts = RunOptions {
            threads: Some(threads),
            trace: true,
            ..RunOptions::new(8, 3)
        };
        without_time(run_experiment_with(spec, &params, opts).unwrap())
    };
    let serial = run(1);
    assert_eq!(serial, run(3));
    assert_eq!(serial.records.iter().map(|r| r.trial).collect::<Vec<_>>(), (0..8).collect::<Vec<_>>());
}

#[test]
fn repeated_runs_are_identical() {
    let spec = InputSpec::new(Family::Onezero, 30_000);
    let a = without_time(run_experiment(spec, &Params::default(), 4, 11).unwrap());
    let b = without_time(run_experiment(spec, &Params::default(), 4, 11).unwrap());
    assert_eq!(emit_table(std::slice::from_ref(&a), TableFormat::Csv, false), emit_table(std::slice::from_ref(&b), TableFormat::Csv, false));
    assert_eq!(a, b);
}

#[test]
fn aggregates_are_functions_of_the_records() {
    let spec = InputSpec::new(Family::Random, 20_000);
    let r = run_experiment(spec, &Params::default(), 6, 2).unwrap();
    let n = 20_000.0;
    let cs: Vec<f64> = r.records.iter().map(|t| t.metrics.comparisons as f64 / n).collect();
    let c = r.comparisons();
    assert!((c.avg - cs.iter().sum::<f64>() / 6.0).abs() < 1e-12);
    assert_eq!(c.max, cs.iter().cloned().fold(f64::MIN, f64::max));
    assert_eq!(c.min, cs.iter().cloned().fold(f64::MAX, f64::min));
    let sampled: u64 = r.records.iter().map(|t| t.metrics.sampled).sum();
    assert!((r.s_avg_pct() - 100.0 * sampled as f64 / 6.0 / n).abs() < 1e-12);
}

#[test]
fn clamp_case_skips_the_ordering_bounds() {
    let spec = InputSpec::new(Family::Random, 200_000).with_k(KRule::Explicit(1));
    let b = selectbench::validate_bounds(spec, &Params::default(), 30, 5).unwrap();
    for lv in &b.levels {
        assert_eq!(lv.inexact_u, lv.trials);
        assert_eq!(lv.single_pivot, lv.trials);
    }
    for c in &b.checks {
        if c.event == selectbench::Event::UPlusBelowU {
            assert_eq!(c.applicable, 0);
        }
    }
    assert!(b.passed());
}
