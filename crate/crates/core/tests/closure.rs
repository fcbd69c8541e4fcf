use zerohalf::closure::{
    approx_optimize, approx_optimize_presolved, enumerate_bounded_cuts, ApproxParams, ClosureError,
};
use zerohalf::gen::{ptas_instance, rng_from_seed};
use zerohalf::oracle::BruteOracle;
use zerohalf::rational::{frac, int};
use zerohalf::IlpInstance;

/// Rows `x_i + x_{i+1} <= 1` around an odd cycle of length `len`.
fn odd_cycle(len: usize) -> IlpInstance {
    let a = (0..len)
        .map(|j| {
            let mut row = vec![0; len];
            row[j] = 1;
            row[(j + 1) % len] = 1;
            row
        })
        .collect();
    IlpInstance::without_box(a, vec![1; len]).unwrap()
}

#[test]
fn long_odd_cycle_is_beyond_small_support() {
    // The cycle cut needs all seven rows (multiplier sum 7/2 > k = 2), so the
    // relaxation stays at 7/2 while the closure reaches 3.
    let inst = odd_cycle(7);
    let c = vec![1; 7];
    let closure = BruteOracle::default().closure_optimize(&inst, &c).unwrap();
    assert_eq!(closure.value, int(3));

    let loose = approx_optimize(&inst, &c, &ApproxParams::new(int(1), 2).unwrap()).unwrap();
    assert_eq!(loose.alpha, frac(7, 2));
    assert!(loose.alpha <= (int(1) + int(1)) * &closure.value);

    let tight = approx_optimize(&inst, &c, &ApproxParams::new(frac(1, 4), 2).unwrap()).unwrap();
    assert_eq!(tight.alpha, int(3));
}

#[test]
fn closure_cuts_contain_the_relaxation_cuts() {
    // Every bounded-support cut is itself a closure cut, so the closure's
    // cut family implies each of them at the closure optimum.
    let mut rng = rng_from_seed(4);
    for _ in 0..30 {
        let inst = ptas_instance(&mut rng, 5, 4);
        let c = inst.objective().unwrap().to_vec();
        let closure = BruteOracle::default().closure_optimize(&inst, &c).unwrap();
        let rel = enumerate_bounded_cuts(&inst, &ApproxParams::new(frac(1, 2), 2).unwrap()).unwrap();
        for cut in &rel.cuts {
            assert!(cut.is_satisfied_by(closure.argmax.coords()), "{cut}");
        }
    }
}

#[test]
fn presolve_feeds_approximation() {
    let inst = IlpInstance::with_full_box(
        vec![vec![1, 1, 0, 0], vec![0, 1, 1, 1], vec![0, 0, 1, 1]],
        vec![0, 2, 1],
    )
    .unwrap();
    let params = ApproxParams::new(int(1), 2).unwrap();
    assert!(matches!(
        approx_optimize(&inst, &[1, 1, 1, 1], &params),
        Err(ClosureError::NonPositiveRhs { row: 1, value: 0 })
    ));
    let (opt, pre) = approx_optimize_presolved(&inst, &[1, 1, 1, 1], &params).unwrap();
    assert_eq!(pre.fixed, vec![0, 1]);
    assert_eq!(opt.alpha, int(1));
    assert_eq!(opt.argmax.coords()[0], int(0));
    assert_eq!(opt.argmax.coords()[1], int(0));
}

#[test]
fn everything_fixed() {
    let inst = IlpInstance::with_full_box(vec![vec![1, 2]], vec![0]).unwrap();
    let params = ApproxParams::new(int(1), 3).unwrap();
    let (opt, pre) = approx_optimize_presolved(&inst, &[5, 5], &params).unwrap();
    assert!(pre.reduced.is_none());
    assert_eq!(opt.alpha, int(0));
}
