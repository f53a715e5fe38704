//! Exact identities between the estimator constants.

mod common;

use num_rational::Ratio;
use volvol::coefficients::{alpha2_weights, describe, C_G1, C_G2, C_G3};

#[test]
fn identities_hold_exactly() {
    for (what, ok) in common::coefficient_identities() {
        assert!(ok, "{what}");
    }
}

#[test]
fn constants_are_in_lowest_terms() {
    for f in [C_G3, C_G2, C_G1] {
        let r = Ratio::new(f.num, f.den);
        assert_eq!((*r.numer(), *r.denom()), (f.num, f.den));
    }
}

#[test]
fn weights_at_unit_window() {
    let (a, b, c) = alpha2_weights(1.0);
    assert_eq!((a, b), (48.0, 12.0));
    assert_eq!(c, 151.0 / 70.0);
    let (a, b, _) = alpha2_weights(2.0);
    assert_eq!((a, b), (3.0, 3.0));
}

#[test]
fn description_lists_every_constant() {
    let d = describe();
    for s in ["453/280", "486/35", "1038/35", "151/70", "346/1225", "3/4"] {
        assert!(d.contains(s), "{s} missing from {d}");
    }
}
