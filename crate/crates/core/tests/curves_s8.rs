use klein_core::catalog::Catalog;
use klein_core::curves::{enumerate_s8, PRINTED_B2};

#[test]
fn s8_has_240_curves() {
    let s = enumerate_s8(&Catalog::paper()).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(s.count(), 240);
    assert!(s.branches.iter().all(|b| b.real_roots == 4));
    assert!(s.families.iter().all(|f| f.certified()));
}

#[test]
fn residuals_are_the_printed_quartics() {
    let s = enumerate_s8(&Catalog::paper()).unwrap();
    let want = [
        "583200000*T^4 - 2176717249713600000*T^3 + 56473225380000*T^2 + 135432000*T + 1",
        "583200000*T^4 - 1167566400000*T^3 - 4811512860000*T^2 - 66081312000*T + 1",
    ];
    for (b, w) in s.branches.iter().zip(want) {
        assert_eq!(b.q.to_string(), w);
    }
    // the printed closed form of b holds on the first branch
    assert_eq!(s.branches[0].printed_b_agrees, Some(true));
    // b²μ⁸ + 4μ⁴b + 1 = 0 is incompatible with the system
    assert!(s.guards.iter().any(|(_, g)| g != "0"));
}

#[test]
fn printed_second_b_is_not_the_common_root() {
    let cat = Catalog::paper();
    let s = enumerate_s8(&cat).unwrap();
    let b1: Vec<String> = cat.polys("s8.b1").unwrap().iter().map(|p| p.to_string()).collect();
    assert!(s.branches[0].closed_form_agrees(&b1[0], &b1[1]).unwrap());
    assert!(!s.branches[1].closed_form_agrees(&b1[0], &b1[1]).unwrap());
    assert!(!s.branches[1].closed_form_agrees(PRINTED_B2[0], PRINTED_B2[1]).unwrap());
    assert!(!s.branches[0].closed_form_agrees(PRINTED_B2[0], PRINTED_B2[1]).unwrap());
}
