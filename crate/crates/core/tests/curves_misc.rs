use klein_core::catalog::Catalog;
use klein_core::curves::{certify_s6_lines, dn_fibre_at_infinity, enumerate_an, enumerate_dn};

#[test]
fn s6_lines() {
    let s = certify_s6_lines(&Catalog::paper()).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(s.count(), 27);
    assert!(s.families.iter().all(|f| f.certified()));
}

#[test]
fn dn_components() {
    let cat = Catalog::paper();
    for n in 4..10 {
        let f = enumerate_dn(&cat, n).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(f.iter().map(|f| f.count()).sum::<usize>(), 2 * n as usize);
        assert_eq!(f[1].order, 2 * (n as usize - 1));
        let inf = dn_fibre_at_infinity(&cat, n).unwrap_or_else(|e| panic!("{e}"));
        assert!(inf.certified());
    }
    assert!(enumerate_dn(&cat, 3).is_err());
}

#[test]
fn an_components() {
    let cat = Catalog::paper();
    for n in 2..7 {
        let f = enumerate_an(&cat, n).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(f.iter().map(|f| f.count()).sum::<usize>(), 2 * n as usize);
    }
    assert!(enumerate_an(&cat, 1).is_err());
}
