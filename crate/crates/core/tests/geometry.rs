use proptest::prelude::*;

use klein_core::catalog::Catalog;
use klein_core::exact::{q, FieldElement, MultiPoly, Tower};
use klein_core::geometry::*;

fn build(name: &str) -> SurfaceSpec {
    SurfaceSpec::build(name.parse().unwrap(), &Catalog::paper()).unwrap()
}

#[test]
fn embedding_degrees() {
    for (name, d) in [("s6prime", 4), ("s6", 3), ("s7", 4), ("s8", 6), ("klein-e6", 12), ("klein-e7", 18), ("klein-e8", 30)] {
        let s = build(name);
        assert_eq!(check_homogeneous(&s).unwrap(), d, "{name}");
        assert_eq!(s.degree, d);
    }
    for n in 4..10 {
        assert_eq!(build(&format!("dn:{n}")).degree, 2);
        assert_eq!(build(&format!("klein-dn:{n}")).degree, 2 * (n - 1));
    }
    let z = MultiPoly::zero(&Tower::rationals(), &["x", "y"]);
    assert!(weighted_degree(&z, &[1, 1]).is_err());
    let mixed = MultiPoly::parse(&Tower::rationals(), &["x", "y"], "x^2 + y").unwrap();
    assert!(matches!(weighted_degree(&mixed, &[1, 1]), Err(GeometryError::MixedDegrees(_))));
}

#[test]
fn names() {
    for n in ["s6prime", "s6", "s7", "s8", "an:3", "dn:5", "klein-e8", "klein-dn:4", "klein-an:2"] {
        assert_eq!(n.parse::<SurfaceName>().unwrap().to_string(), n);
    }
    for bad in ["s9", "dn:3", "an:x", ""] {
        assert!(bad.parse::<SurfaceName>().is_err(), "{bad}");
    }
}

fn point(s: &SurfaceSpec, coords: &[&str]) -> PointSpec {
    PointSpec::new(coords.iter().map(|c| s.base.parse(c).unwrap()).collect())
}

#[test]
fn membership() {
    let s6 = build("s6");
    assert!(on_surface(&s6, &point(&s6, &["0", "1", "0", "0"])).unwrap());
    let s7 = build("s7");
    assert!(!on_surface(&s7, &point(&s7, &["1", "0", "0", "0"])).unwrap());
    let e8 = build("klein-e8");
    assert!(on_surface(&e8, &point(&e8, &["0", "0", "0"])).unwrap());
    assert!(on_surface(&s7, &point(&s7, &["0", "0", "0", "0"])).is_err());
    assert!(on_surface(&s7, &point(&s7, &["0", "1"])).is_err());
}

#[test]
fn contraction() {
    let r = verify_contraction_s6(&Catalog::paper()).unwrap();
    assert!(r.chart1_residue.is_zero());
    assert!(r.chart2_residue.is_zero());
    assert!(r.overlap_residues.iter().all(|p| p.is_zero()));
    // W = 0, Z = iX² goes to (0:0:0:1)
    assert!(r.blown_down_to_point());
    assert!(r.ok());
}

#[test]
fn contraction_detects_corruption() {
    let mut hits = 0;
    for seed in 0..400 {
        let (cat, m) = Catalog::paper().mutate(seed);
        if !m.key.starts_with("contraction") && m.key != "surface.s6" && m.key != "surface.s6prime" {
            continue;
        }
        hits += 1;
        if let Ok(r) = verify_contraction_s6(&cat) {
            assert!(!r.ok(), "{m:?}");
        }
    }
    assert!(hits >= 5, "{hits}");
}

#[test]
fn atlases() {
    for k in 2..6 {
        for (a, b) in [(k - 1, k - 1), (k - 1, k)] {
            assert!(chart_transition_check(&AmbientSpace::ChartAtlas(Atlas::new(a, b))));
            assert!(!chart_transition_check(&AmbientSpace::ChartAtlas(Atlas::corrupted(a, b))) || a == b);
        }
    }
    assert!(!chart_transition_check(&AmbientSpace::WeightedProjective(vec![1, 1, 1, 1])));
    for n in 4..10 {
        let s = build(&format!("dn:{n}"));
        let k = chart_agreement(&s).unwrap();
        assert!(k.is_some(), "dn:{n}");
    }
}

#[test]
fn special_fibre_is_the_klein_surface() {
    let cat = Catalog::paper();
    let mut names = vec!["s6prime".to_string(), "s7".into(), "s8".into()];
    names.extend((4..10).map(|n| format!("dn:{n}")));
    names.extend((2..6).map(|n| format!("an:{n}")));
    for n in &names {
        assert!(klein_fibre_residue(&cat, n.parse().unwrap()).unwrap().is_zero(), "{n}");
    }
    assert!(klein_fibre_residue(&cat, SurfaceName::S6).is_err());
    // any change to a Klein coefficient shows up
    for seed in 0..400 {
        let (bad, m) = cat.mutate(seed);
        if m.key.starts_with("klein.") {
            let hit = names.iter().any(|n| !klein_fibre_residue(&bad, n.parse().unwrap()).unwrap().is_zero());
            assert!(hit, "{m:?}");
        }
    }
}

/// A point of `s` over an extension of its base: all coordinates but `solve`
/// are given, and `solve` is a root of the surface equation adjoined as a
/// radical (it must occur only through one pure power).
fn point_on(s: &SurfaceSpec, given: &[i64], solve: usize) -> Option<PointSpec> {
    let eq = s.equation();
    let var = &s.vars[solve];
    let parts = eq.as_univariate(var).unwrap();
    let k = parts.len() - 1;
    if parts[1..k].iter().any(|p| !p.is_zero()) || !parts[k].is_constant() {
        return None;
    }
    let vals: Vec<FieldElement> = given.iter().map(|&g| s.base.int(g)).collect();
    let mut at = Vec::new();
    let mut gi = vals.iter();
    for i in 0..s.vars.len() {
        at.push(if i == solve { s.base.zero() } else { gi.next().unwrap().clone() });
    }
    let rest = parts[0].eval(&at).unwrap();
    let c = parts[k].constant_value().unwrap();
    let radicand = -&rest.checked_div(&c).unwrap();
    let (tower, root) = if radicand.is_zero() {
        (s.base.clone(), None)
    } else {
        let tw = s.base.with_radical("r", k, &radicand).unwrap();
        let r = tw.gen("r").unwrap();
        (tw, Some(r))
    };
    let coords = at
        .iter()
        .enumerate()
        .map(|(i, v)| if i == solve { root.clone().unwrap_or_else(|| tower.zero()) } else { tower.lift(v).unwrap() })
        .collect();
    Some(PointSpec::new(coords))
}

const SOLVED: [(&str, usize); 8] = [
    ("s6prime", 3),
    ("s6", 2),
    ("s7", 3),
    ("s8", 3),
    ("klein-e6", 2),
    ("klein-e7", 2),
    ("klein-e8", 2),
    ("dn:5", 2),
];

#[test]
fn constructed_points_lie_on_surfaces() {
    for (name, solve) in SOLVED {
        let s = build(name);
        let given: Vec<i64> = (1..s.vars.len() as i64).collect();
        let p = point_on(&s, &given, solve).unwrap_or_else(|| panic!("{name}"));
        assert!(on_surface(&s, &p).unwrap(), "{name}");
    }
}

proptest! {
    #[test]
    fn membership_is_scale_invariant(
        idx in 0usize..SOLVED.len(),
        given in prop::collection::vec(-4i64..=4, 3),
        ln in 1i64..7, ld in 1i64..7, sign in any::<bool>(),
        shift in 1i64..4,
    ) {
        let (name, solve) = SOLVED[idx];
        let s = build(name);
        let given = &given[..s.vars.len() - 1];
        let p = point_on(&s, given, solve).unwrap();
        // the all-zero point is not a point
        prop_assume!(on_surface(&s, &p).is_ok());
        let tower = p.coords[0].tower().clone();
        let lambda = tower.rational(&q(if sign { ln } else { -ln }, ld));
        let w = s.ambient.weights();
        prop_assert!(on_surface(&s, &p).unwrap());
        prop_assert!(on_surface(&s, &p.rescale(&w, &lambda)).unwrap());
        // moving one given coordinate off the surface stays off after rescaling
        let mut off = p.clone();
        let j = (solve + 1) % s.vars.len();
        off.coords[j] = &off.coords[j] + &tower.int(shift);
        let before = on_surface(&s, &off).unwrap();
        prop_assert_eq!(before, on_surface(&s, &off.rescale(&w, &lambda)).unwrap());
    }
}
