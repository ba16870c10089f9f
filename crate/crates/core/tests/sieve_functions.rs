use std::sync::OnceLock;

use sievebound::sieve_functions::{
    overlap_checks, CacheStatus, SieveDimension, SieveFunctionTable, Which, DEFAULT_STEP,
};
use sievebound::{Error, EXP_GAMMA};

fn table(dim: SieveDimension) -> &'static SieveFunctionTable {
    static SEMI: OnceLock<SieveFunctionTable> = OnceLock::new();
    static LIN: OnceLock<SieveFunctionTable> = OnceLock::new();
    let cell = match dim {
        SieveDimension::SemiLinear => &SEMI,
        SieveDimension::Linear => &LIN,
    };
    cell.get_or_init(|| SieveFunctionTable::tabulate(dim, 60.0, DEFAULT_STEP).unwrap())
}

/// Real dilogarithm for `x <= -1` via the inversion formula.
fn dilog_neg(u: f64) -> f64 {
    // Li2(-u) = -π²/6 - ln²(u)/2 - Li2(-1/u)
    let x = -1.0 / u;
    let mut sum = 0.0;
    let mut pow = x;
    for k in 1..400 {
        sum += pow / (k * k) as f64;
        pow *= x;
    }
    -std::f64::consts::PI.powi(2) / 6.0 - u.ln().powi(2) / 2.0 - sum
}

#[test]
fn linear_upper_at_three_and_a_half_matches_analytic_integral() {
    // s F₂(s) = 2e^γ + ∫₃^s 2e^γ log(t−2)/(t−1) dt
    //         = 2e^γ (1 + log u log(1+u) + Li₂(−u) + π²/12),   u = s − 2.
    let u: f64 = 1.5;
    let pi2 = std::f64::consts::PI.powi(2);
    let exact = 2.0 * EXP_GAMMA * (1.0 + u.ln() * (1.0 + u).ln() + dilog_neg(u) + pi2 / 12.0) / 3.5;
    let got = table(SieveDimension::Linear).eval(Which::Upper, 3.5).unwrap();
    assert!((got - exact).abs() < 1e-8, "{got} vs {exact}");
    assert!((got - 1.065_193_558).abs() < 1e-8);
}

#[test]
fn overlap_consistency_at_default_step() {
    for c in overlap_checks(DEFAULT_STEP).unwrap() {
        assert!(c.max_residual < 1e-6, "{c:?}");
    }
}

#[test]
fn overlap_consistency_at_coarsest_step() {
    for c in overlap_checks(1e-3).unwrap() {
        assert!(c.max_residual < 1e-6, "{c:?}");
    }
}

#[test]
fn handoff_derivatives_match_closed_forms() {
    for dim in [SieveDimension::SemiLinear, SieveDimension::Linear] {
        for c in table(dim).handoff_checks() {
            assert!(c.mismatch() < 1e-5, "{c:?}");
        }
    }
}

#[test]
fn linear_equation_without_the_one_over_s_factor_breaks_smoothness() {
    // F₂' = f₂(s−1) − F₂(s) at s = 3 disagrees with the closed-form slope −2e^γ/9.
    let t = table(SieveDimension::Linear);
    let rhs = t.eval(Which::Lower, 2.0).unwrap() - t.eval(Which::Upper, 3.0).unwrap();
    let closed = -2.0 * EXP_GAMMA / 9.0;
    assert!((rhs - closed).abs() > 0.5);
}

#[test]
fn continuation_slopes_by_finite_differences() {
    let t = table(SieveDimension::Linear);
    let h = 1e-4;
    for (which, s) in [(Which::Upper, 3.0), (Which::Lower, 4.0)] {
        let fd = (-3.0 * t.eval(which, s).unwrap() + 4.0 * t.eval(which, s + h).unwrap()
            - t.eval(which, s + 2.0 * h).unwrap())
            / (2.0 * h);
        let closed = SieveDimension::Linear.closed_form_derivative(which, s).unwrap();
        assert!((fd - closed).abs() < 1e-5, "{which:?}: {fd} vs {closed}");
    }
}

#[test]
fn bracketing_and_monotonicity_on_the_grid() {
    for dim in [SieveDimension::SemiLinear, SieveDimension::Linear] {
        let t = table(dim);
        let upper = t.values(Which::Upper);
        let lower = t.values(Which::Lower);
        for i in 0..t.len() {
            if upper[i].is_finite() {
                assert!(upper[i] > 0.0);
                if i + 1 < t.len() && upper[i].is_finite() {
                    assert!(upper[i + 1] <= upper[i] + 1e-10, "{dim:?} F at {}", t.s_at(i));
                }
            }
            if lower[i].is_finite() {
                assert!(lower[i] >= 0.0);
                if i + 1 < t.len() {
                    assert!(lower[i + 1] >= lower[i] - 1e-10, "{dim:?} f at {}", t.s_at(i));
                }
                assert!(lower[i] <= upper[i] + 1e-10, "{dim:?} f > F at {}", t.s_at(i));
            }
        }
    }
}

#[test]
fn common_limit_at_s_max() {
    for dim in [SieveDimension::SemiLinear, SieveDimension::Linear] {
        let t = table(dim);
        let big = t.eval(Which::Upper, 60.0).unwrap();
        let small = t.eval(Which::Lower, 60.0).unwrap();
        assert!((big - small).abs() < 1e-6, "{dim:?}");
        assert!((big - 1.0).abs() < 1e-6 && (small - 1.0).abs() < 1e-6, "{dim:?}: {big} {small}");
    }
    let t = table(SieveDimension::Linear);
    assert!((t.eval(Which::Upper, 50.0).unwrap() - 1.0).abs() < 1e-6);
    assert!((t.eval(Which::Lower, 50.0).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn grid_refinement_is_stable() {
    for dim in [SieveDimension::SemiLinear, SieveDimension::Linear] {
        let coarse = SieveFunctionTable::tabulate(dim, 12.0, 2e-4).unwrap();
        let fine = SieveFunctionTable::tabulate(dim, 12.0, 1e-4).unwrap();
        for which in [Which::Upper, Which::Lower] {
            let c = coarse.values(which);
            let f = fine.values(which);
            for i in 0..c.len() {
                if c[i].is_finite() {
                    assert!((c[i] - f[2 * i]).abs() < 1e-7, "{dim:?} {which:?} at {}", coarse.s_at(i));
                }
            }
        }
    }
}

#[test]
fn eval_examples() {
    let lin = table(SieveDimension::Linear);
    let semi = table(SieveDimension::SemiLinear);
    assert_eq!(lin.eval(Which::Upper, 2.0).unwrap(), EXP_GAMMA);
    assert_eq!(semi.eval(Which::Lower, 1.0).unwrap(), 0.0);
    let expect = 2.0 * EXP_GAMMA * 1.5f64.ln() / 2.5;
    assert!((lin.eval(Which::Lower, 2.5).unwrap() - expect).abs() < 1e-15);
    assert_eq!(
        lin.eval(Which::Upper, 75.0).unwrap(),
        lin.eval(Which::Upper, 60.0).unwrap()
    );
    assert!(matches!(semi.eval(Which::Upper, 0.0), Err(Error::Domain { .. })));
    assert!(matches!(lin.eval(Which::Lower, 1.5), Err(Error::Domain { .. })));
}

#[test]
fn interpolation_between_nodes_is_consistent() {
    let t = table(SieveDimension::SemiLinear);
    for s in [4.00005, 7.123_45, 15.5, 33.33] {
        let v = t.eval(Which::Upper, s).unwrap();
        let lo = t.eval(Which::Upper, s - 1e-4).unwrap();
        let hi = t.eval(Which::Upper, s + 1e-4).unwrap();
        assert!(hi <= v + 1e-15 && v <= lo + 1e-15, "{s}: {lo} {v} {hi}");
    }
}

#[test]
fn tabulation_preconditions() {
    assert!(matches!(
        SieveFunctionTable::tabulate(SieveDimension::Linear, 9.0, 1e-4),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        SieveFunctionTable::tabulate(SieveDimension::Linear, 20.0, 1e-2),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn cache_round_trip_and_header_check() {
    let dir = tempfile::tempdir().unwrap();
    let (first, status) =
        SieveFunctionTable::load_or_tabulate(Some(dir.path()), SieveDimension::Linear, 10.0, 1e-3).unwrap();
    assert_eq!(status, CacheStatus::Written);
    let (second, status) =
        SieveFunctionTable::load_or_tabulate(Some(dir.path()), SieveDimension::Linear, 10.0, 1e-3).unwrap();
    assert_eq!(status, CacheStatus::Hit);
    for which in [Which::Upper, Which::Lower] {
        let a = first.values(which);
        let b = second.values(which);
        assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
    let path = dir
        .path()
        .join(SieveFunctionTable::cache_file_name(SieveDimension::Linear, 10.0, 1e-3));
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 40 + 16 * 10_001);
    assert_eq!(f64::from_le_bytes(bytes[0..8].try_into().unwrap()), 1.0);
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 2);
    let err = SieveFunctionTable::read_cache(&path, SieveDimension::SemiLinear, 10.0, 1e-3);
    assert!(matches!(err, Err(Error::Cache(_))));
}
