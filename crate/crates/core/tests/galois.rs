use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use klein_core::catalog::Catalog;
use klein_core::curves::{Branch, FamilyLabel};
use klein_core::exec::Execution;
use klein_core::galois::*;

fn data(case: Case) -> &'static CaseData {
    static CACHE: OnceLock<Vec<CaseData>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let cat = Catalog::paper();
        let cases = [Case::E6, Case::E7, Case::E8, Case::Dn(4), Case::Dn(5), Case::Dn(6), Case::Dn(9), Case::An(3)];
        Execution::default().try_map(&cases, |&c| analyze(&cat, c)).unwrap_or_else(|e| panic!("{e}"))
    });
    all.iter().find(|d| d.case == case).expect("case not cached")
}

fn verdict(case: Case, m: u32) -> Verdict {
    rationality_verdict(data(case), BaseExtension::new(m).unwrap()).unwrap_or_else(|e| panic!("{case} m={m}: {e}"))
}

/// Orbits of j ↦ j + m on ℤ/N, the action of s ↦ ζ s on the roots ζ_N^j s^{m/N}.
fn brute_orbits(n: usize, m: u32) -> BTreeSet<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = BTreeSet::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            orbit.push(j);
            j = (j + m as usize) % n;
        }
        orbit.sort();
        out.insert(orbit);
    }
    out
}

#[test]
fn orbit_examples() {
    assert_eq!(orbit_structure(6, 1), vec![vec![0, 1, 2, 3, 4, 5]]);
    assert_eq!(orbit_structure(6, 2), vec![vec![0, 2, 4], vec![1, 3, 5]]);
    assert_eq!(orbit_structure(12, 12).len(), 12);
}

proptest! {
    #[test]
    fn orbits_partition(n in 1usize..40, m in 1u32..40) {
        let blocks = orbit_structure(n, m);
        let g = blocks.len();
        prop_assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), n);
        prop_assert!(n % g == 0 && m as usize % g == 0);
        prop_assert!(blocks.iter().all(|b| b.len() == n / g));
        prop_assert_eq!(blocks.into_iter().collect::<BTreeSet<_>>(), brute_orbits(n, m));
    }

    #[test]
    fn verdict_depends_on_divisibility_only(m in 1u32..61) {
        for case in [Case::E6, Case::E7, Case::E8, Case::Dn(5), Case::An(3)] {
            let a = data(case).a;
            let v = verdict(case, m);
            let w = verdict(case, if m % a == 0 { a } else { m.gcd_small(a) });
            prop_assert_eq!(v.rational, w.rational);
        }
    }
}

trait Gcd {
    fn gcd_small(self, b: u32) -> u32;
}
impl Gcd for u32 {
    fn gcd_small(self, b: u32) -> u32 {
        if b == 0 { self } else { b.gcd_small(self % b) }
    }
}

#[test]
fn s6_conjugate_lines() {
    let d = data(Case::E6);
    for f in &d.families {
        match f.family {
            FamilyLabel::S6L123 => {
                assert_eq!(f.differences, [1, 2].into());
                // (W:X:Y:Z) proportional to (0:1:0:0)
                let p = &f.witnesses[0].point;
                assert!(p[0] == "0" && p[1] != "0" && p[2] == "0" && p[3] == "0", "{p:?}");
            }
            FamilyLabel::S6Lmu(b) => {
                // ξ² = 1 and ξ³ = 1 always meet; with ζ₁₂ = (√3 + i)/2 fixed, the
                // order-12 differences of the − branch are the images k ↦ 5k
                // under √3 ↦ −√3
                assert!(f.differences.is_superset(&[4, 6, 8].into()));
                let plus: BTreeSet<usize> = (4..=8).collect();
                let want: BTreeSet<usize> = match b {
                    Branch::Plus => plus,
                    Branch::Minus => plus.iter().map(|k| 5 * k % 12).collect(),
                };
                assert_eq!(f.differences, want);
            }
            other => panic!("{other}"),
        }
    }
}

#[test]
fn weighted_witnesses() {
    let e7 = data(Case::E7);
    let main = e7.families.iter().find(|f| f.family == FamilyLabel::S7Main).unwrap();
    assert_eq!(main.differences, [6, 9, 12].into());
    assert_eq!(main.witnesses.len(), 2);
    let e8 = data(Case::E8);
    for f in &e8.families {
        assert_eq!(f.differences, [6, 10, 12, 15, 18, 20, 24].into());
        // ξ⁵ = 1 cuts X = 0
        let w = f.witnesses.iter().find(|w| w.xi_order == 5).unwrap();
        assert_eq!(w.point[1], "0");
    }
    let d4 = data(Case::Dn(4));
    let mu = &d4.families[1];
    assert_eq!(mu.differences, [3].into());
    // y = z = 0, x = μ²
    assert_eq!(mu.witnesses[0].point[1..], ["0".to_string(), "0".into(), "mu^2".into()]);
}

#[test]
fn minimal_models() {
    let dp = |c, m| verdict(c, m).descriptor;
    assert_eq!(dp(Case::E6, 1), MinimalModelDescriptor::DelPezzo(3));
    assert_eq!(dp(Case::E6, 3), MinimalModelDescriptor::DelPezzo(4));
    assert_eq!(dp(Case::E6, 12), MinimalModelDescriptor::DelPezzo(9));
    assert_eq!(dp(Case::E7, 2), MinimalModelDescriptor::DelPezzo(3));
    assert_eq!(dp(Case::E7, 9), MinimalModelDescriptor::DelPezzo(2));
    assert_eq!(dp(Case::E8, 15), MinimalModelDescriptor::DelPezzo(1));
    match dp(Case::Dn(4), 1) {
        MinimalModelDescriptor::ConicBundle(d) => assert!(d >= 4),
        other => panic!("{other:?}"),
    }
    assert_eq!(dp(Case::An(3), 1), MinimalModelDescriptor::ConicBundle(0));
}

#[test]
fn verdict_examples() {
    let v = verdict(Case::E7, 18);
    assert!(v.rational && v.a == 18);
    let v = verdict(Case::E8, 15);
    assert!(!v.rational && v.a == 30);
    for (n, a) in [(4, 2), (5, 8), (6, 2), (9, 16)] {
        assert_eq!(data(Case::Dn(n)).a, a);
    }
    assert!(verdict(Case::An(3), 1).rational);
    assert!(verdict(Case::An(3), 1).point.is_some());
}

#[test]
fn rational_at_degree() {
    for case in [Case::E6, Case::E7, Case::E8, Case::Dn(4), Case::Dn(5), Case::Dn(6), Case::Dn(9), Case::An(3)] {
        let a = data(case).a;
        let v = verdict(case, a);
        assert!(v.rational, "{case}");
        for o in &v.model.orbits {
            assert!(o.orbits.iter().all(|b| b.members.len() == 1 || !b.pairwise_intersecting), "{case}");
        }
    }
}

#[test]
fn grid_is_consistent() {
    let cat = Catalog::paper();
    let ms: Vec<u32> = (1..=30).collect();
    let cells = verdict_grid(&cat, &DEFAULT_GRID_CASES, &ms, Execution::default()).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(cells.len(), 150);
    assert!(cells.iter().all(|c| c.rational == c.divides));
}

#[test]
fn inputs() {
    assert!(BaseExtension::new(0).is_err());
    assert!("x7".parse::<Case>().is_err());
}
