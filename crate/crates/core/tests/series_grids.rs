use slopekit_core::suite;

#[test]
fn e_series_matches_closed_form() {
    let g = suite::grid_e(&[2, 3, 4, 9], &[1, 2], 40).unwrap();
    assert!(g.passed(), "{g:?}");
}

#[test]
fn c_valuation_bound_holds() {
    let g = suite::grid_valuation(&[2, 3, 5], 80, 4, 29).unwrap();
    assert!(g.passed(), "{g:?}");
}

#[test]
fn modular_mode_matches_exact() {
    let g = suite::grid_modular(&[2, 3, 4, 5], 40, 5, 31).unwrap();
    assert!(g.passed(), "{g:?}");
}

#[test]
fn rel_holds_for_prime_powers() {
    let g = suite::grid_rel(&[4, 5, 9], 30, 2, 37).unwrap();
    assert!(g.passed(), "{g:?}");
}
