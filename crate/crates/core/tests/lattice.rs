use proptest::prelude::*;

use klein_core::exec::Execution;
use klein_core::lattice::*;

#[test]
fn blown_up_root_systems() {
    let expect = [(3, "A1xA2", 6), (4, "A4", 5), (5, "D5", 8), (6, "E6", 12), (7, "E7", 18), (8, "E8", 30)];
    for (r, label, h) in expect {
        let rs = build_root_system(r).unwrap();
        assert_eq!(rs.label(), label);
        assert_eq!(rs.coxeter_number, h, "r = {r}");
        let form = PicardLattice::new(r).form();
        assert!(rs.simple_roots.iter().all(|a| form.dot(a, a) == -2));
    }
    assert_eq!(build_root_system(6).unwrap().show_roots()[0], "e0-e1-e2-e3");
    assert!(build_root_system(2).is_err());
    assert!(build_root_system(9).is_err());
}

#[test]
fn coxeter_numbers() {
    for (t, h) in [(Dynkin::E(6), 12), (Dynkin::E(7), 18), (Dynkin::E(8), 30), (Dynkin::D(5), 8)] {
        let c = coxeter_number(t).unwrap();
        assert_eq!((c.by_reflections, c.by_roots), (h, h), "{t}");
    }
    for n in 1..9 {
        assert_eq!(coxeter_number(Dynkin::A(n)).unwrap().by_reflections, n as u64 + 1);
    }
    for n in 4..11 {
        assert_eq!(coxeter_number(Dynkin::D(n)).unwrap().by_roots, 2 * (n as u64 - 1));
    }
}

#[test]
fn minus_one_counts() {
    let counts: Vec<usize> =
        (3..=8).map(|r| minus_one_classes(r, Execution::default()).unwrap().len()).collect();
    assert_eq!(counts, [6, 10, 16, 27, 56, 240]);
    let seq = minus_one_classes(8, Execution::Sequential).unwrap();
    assert_eq!(seq, minus_one_classes(8, Execution::Parallel).unwrap());
    // the extremal class of degree 1
    assert!(seq.contains(&vec![6, -3, -2, -2, -2, -2, -2, -2, -2]));
}

#[test]
fn boundary() {
    let v: Vec<i64> = [4, 5, 6].iter().map(|&n| dn_boundary_selfintersection(n).unwrap().self_intersection).collect();
    assert_eq!(v, [-1, -2, -3]);
    assert_eq!(dn_boundary_selfintersection(5).unwrap().c_dot_d, 0);
    assert_eq!(dn_boundary_selfintersection(6).unwrap().c_dot_d, 1);
    assert!(dn_boundary_selfintersection(3).is_err());
}

proptest! {
    #[test]
    fn boundary_both_parities(n in 4u32..200) {
        prop_assert_eq!(dn_boundary_selfintersection(n).unwrap().self_intersection, 3 - n as i64);
    }

    #[test]
    fn h_times_rank_is_root_count(n in 1usize..12, kind in 0usize..2) {
        let t = if kind == 0 { Dynkin::A(n) } else { Dynkin::D(n + 3) };
        let c = coxeter_number(t).unwrap();
        prop_assert_eq!(c.by_reflections as usize * c.rank, c.roots);
    }

    #[test]
    fn reflections_preserve_the_form(r in 3usize..9, v in prop::collection::vec(-5i64..6, 9)) {
        let rs = build_root_system(r).unwrap();
        let form = PicardLattice::new(r).form();
        let v = &v[..=r];
        for a in &rs.simple_roots {
            let w = form.reflect(a, v);
            prop_assert_eq!(form.dot(&w, &w), form.dot(v, v));
        }
    }
}
