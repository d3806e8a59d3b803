use klein_core::catalog::Catalog;
use klein_core::curves::enumerate_s7;

#[test]
fn s7_has_56_curves() {
    let s = enumerate_s7(&Catalog::paper()).unwrap();
    assert_eq!(s.count(), 56);
    assert_eq!(s.q_real_roots, 3);
    assert_eq!(s.q_vieta, ("29496".to_string(), "64".to_string()));
    assert_eq!(s.e0_system, vec!["c^2 - t".to_string()]);
    assert!(s.families.iter().all(|f| f.certified()));
}

#[test]
fn residual_is_the_printed_cubic() {
    let s = enumerate_s7(&Catalog::paper()).unwrap();
    assert_eq!(s.q.to_string(), "X^3 - 29496*X^2 + 401808*X - 64");
    // the two denominators of d, and d's denominator against Q, never vanish together
    for g in [&s.guards.d_num_den, &s.guards.d_den_q, &s.guards.q_discriminant] {
        assert_ne!(g, "0");
    }
    let names: Vec<&str> = s.trace.steps.iter().map(|t| t.name.as_str()).collect();
    assert!(names.contains(&"collapse X = e^18/t"), "{names:?}");
    assert!(names.contains(&"Res_d"));
}

#[test]
fn replay_rejects_corrupted_data() {
    let cat = Catalog::paper();
    let mut hits = 0;
    for seed in 0..600 {
        let (bad, m) = cat.mutate(seed);
        if !m.key.starts_with("s7.") && m.key != "surface.s7" {
            continue;
        }
        hits += 1;
        assert!(enumerate_s7(&bad).is_err(), "{m:?}");
    }
    assert!(hits >= 5, "{hits}");
}
