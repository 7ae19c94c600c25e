use tripartite::harness::{run_trial, Op, OpParams};
use tripartite::oracle::exhaustive_check;

fn params_for(op: Op) -> OpParams {
    let mut p = OpParams { l: 16, deterministic_carry: true, ..Default::default() };
    if op == Op::ScaledPow {
        p.public = 16;
    }
    p
}

#[test]
fn every_op_is_correct_and_keeps_views_legal() {
    for &op in Op::ALL {
        let p = params_for(op);
        for seed in 0..5 {
            let t = run_trial(op, &p, seed).unwrap();
            assert!(t.correct(), "{}", t.result.dump_line());
            assert!(t.violations.is_empty(), "{op}: {:?}", t.violations);
        }
    }
}

#[test]
fn unsafe_tangent_is_the_only_violator() {
    let p = OpParams { l: 16, unsafe_reveal: true, ..Default::default() };
    let t = run_trial(Op::Tangent, &p, 1).unwrap();
    assert!(!t.violations.is_empty());
}

#[test]
fn runs_are_reproducible_per_seed() {
    for &op in Op::ALL {
        let p = params_for(op);
        let (a, b) = (run_trial(op, &p, 77).unwrap(), run_trial(op, &p, 77).unwrap());
        assert_eq!(a.result, b.result, "{op}");
        assert_eq!(a.meter, b.meter, "{op}");
    }
}

#[test]
fn small_rings_are_exhaustively_correct() {
    let ops = [Op::Mul, Op::Pow, Op::CarryBits, Op::AddToXor, Op::XorToAdd, Op::EqualZero, Op::FaninBoth];
    for op in ops {
        let p = OpParams { l: 3, base: 2, deterministic_carry: true, ..Default::default() };
        let report = exhaustive_check(op, &p, 8, 5).unwrap();
        assert_eq!(report.pass_rate(), 1.0, "{op}: {:?}", report.failures.first().map(|f| f.dump_line()));
    }
}
