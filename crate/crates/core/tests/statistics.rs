mod common;

use alttext_core::heuristic::format_number;
use alttext_core::stats;
use common::paired;
use proptest::prelude::*;

const X123: [f64; 11] = common::ANSCOMBE_X;
const X4: [f64; 11] = common::ANSCOMBE_X4;
const Y: [[f64; 11]; 4] = common::ANSCOMBE_Y;

fn fmt_fit((slope, intercept): (f64, f64)) -> String {
    format!("y={}x+{}", format_number(slope), format_number(intercept))
}

#[test]
fn anscombe_set_one_summary() {
    assert_eq!(format_number(stats::std_dev(&Y[0]).unwrap()), "1.937");
    assert_eq!(format_number(stats::mean(&Y[0]).unwrap()), "7.501");
    assert_eq!(fmt_fit(stats::linear_fit(&X123, &Y[0]).unwrap()), "y=0.5001x+3");
    assert_eq!(fmt_fit(stats::linear_fit(&X4, &Y[3]).unwrap()), "y=0.4999x+3.002");
}

#[test]
fn anscombe_box_statistics() {
    let medians: Vec<String> = Y.iter().map(|y| format_number(stats::median(y).unwrap())).collect();
    assert_eq!(medians, ["7.58", "8.14", "7.11", "7.04"]);
    let iqrs: Vec<String> = Y.iter().map(|y| format_number(stats::iqr(y).unwrap())).collect();
    assert_eq!(iqrs, ["2.255", "2.255", "1.73", "2.02"]);
    let outliers: Vec<Vec<String>> = Y
        .iter()
        .map(|y| stats::tukey_outliers(y).into_iter().map(format_number).collect())
        .collect();
    assert_eq!(
        outliers,
        [
            vec![],
            vec!["3.1".to_string()],
            vec!["12.74".into()],
            vec!["12.5".into()]
        ]
    );
}

#[test]
fn quantiles_match_brute_force_on_small_grid() {
    for series in common::all_series(&[0, 1, 3], 8) {
        common::check_quantiles(&series).unwrap();
    }
}

proptest! {
    #[test]
    fn quantiles_match_oracle_for_random_integers(series in prop::collection::vec(-20i64..20, 1..=8)) {
        common::check_quantiles(&series)?;
    }

    #[test]
    fn pearson_is_symmetric((a, b) in paired(3..30)) {
        common::check_pearson_symmetry(&a, &b)?;
    }

    #[test]
    fn pearson_follows_affine_sign((a, b) in paired(3..30), scale in prop_oneof![-50.0..-0.1f64, 0.1..50.0f64], shift in -100.0..100.0f64) {
        common::check_pearson_affine(&a, &b, scale, shift)?;
    }

    #[test]
    fn least_squares_solves_normal_equations((xs, ys) in paired(2..30)) {
        common::check_normal_equations(&xs, &ys)?;
    }

    #[test]
    fn trend_flips_when_values_are_negated(ys in prop::collection::vec(-10i32..10, 2..14)) {
        common::check_trend_negation(&ys)?;
    }
}
