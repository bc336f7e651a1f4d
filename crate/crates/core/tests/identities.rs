mod common;

use common::{check_identity, check_lemma_maps, printed_y2zw_quad, theorem_identities};
use quadrep::constructive::tables as tb;

const TRIALS: usize = 10_000;

#[test]
fn theorem_parametrizations_are_identities() {
    for (i, id) in theorem_identities().iter().enumerate() {
        let fails = check_identity(id, TRIALS, 0x5eed + i as u64);
        assert_eq!(fails, 0, "{} failed on {fails} of {TRIALS} assignments", id.name);
    }
}

#[test]
fn lemma_maps_are_identities() {
    for (name, fails) in check_lemma_maps(TRIALS, 17) {
        assert_eq!(fails, 0, "{name} failed on {fails} assignments");
    }
}

#[test]
fn printed_odd_rows_of_y2zw_substitution_fail() {
    let weights = [1i128, 1, 2, 3];
    for s in [-1, 1] {
        let mut bad = 0;
        for t in -3..=3 {
            for u in -3..=3 {
                let pre = tb::t12iii_y2zw_precursor(s, t, u, 0);
                let lhs = pre[0] as i128 * pre[0] as i128 + 5 * (pre[1] as i128).pow(2);
                let q = printed_y2zw_quad(s, t, u, 0);
                let rhs = 30 * (0..4).map(|i| weights[i] * (q[i] as i128).pow(2)).sum::<i128>() - 9;
                bad += usize::from(lhs != rhs);
            }
        }
        assert!(bad > 0, "printed substitution unexpectedly holds for s = {s}");
    }
}

#[test]
fn case_table_literals() {
    assert_eq!(tb::t11i_b_case(0), (33, 1, [1, -2, 2]));
    assert_eq!(tb::t11i_b_case(7), (9, 3, [3, -1, 0]));
    assert_eq!(tb::t11iii_b_case(1), (-5, [1, 0, 0]));
    assert_eq!(tb::t11iii_b_case(-3), (23, [-2, 1, 1]));
    assert_eq!(tb::t12iii_x2yw_case(0), (25, [-2, 1, 1]));
    assert_eq!(tb::t12iii_x2yw_case(1), (-7, [1, 0, 0]));
    assert_eq!(tb::t12iii_yzw_case(5), (144, [2, -2, 1]));
    assert_eq!(tb::t12iii_y2zw_case(-1), (16, [-2, 1, 1]));
    assert_eq!(tb::t12iii_y2zw_case(2), (1, [1, 0, 0]));
    assert_eq!(tb::t12ii_2yzw_case(1), (-12, [1, 0, -1]));
    assert_eq!(tb::T12iCase::FourMod14.offset(), 32);
    assert_eq!(tb::T12iCase::OneMod14.linear_value(), 1);
}

#[test]
fn lemma_map_examples() {
    assert_eq!(tb::l34_map(1, 0, 1), [-3, 4, 0]);
    assert_eq!(tb::l35_transfer(1, 1, 1), [-3, 1, 0]);
    assert_eq!(tb::l42_map(1, 2, 0), ([-3, 1, 0], "4 | 2a+b"));
    assert_eq!(tb::l42_map(2, 1, 0), ([5, 0, 0], "4 | a-2b"));
}
