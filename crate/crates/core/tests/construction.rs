use ratblow::blowdown::{h1_presentation, validate_chain, BlowdownConfig};
use ratblow::construction::centers::{enumerate_z_centers, target_templates, ChainTemplate};
use ratblow::construction::pencil::{build_y, enumerate_pencils, fiber_class, PencilIncidence, LINES, MEMBERS};
use ratblow::construction::verify::{all_solutions, canonical_document, verify_document};
use ratblow::surface::MarkedSurface;

const PENCIL_BLOWUPS: usize = 9;

fn canonical_z() -> MarkedSurface {
    canonical_document().build_surface(None).unwrap()
}

fn canonical_y() -> MarkedSurface {
    canonical_document().build_surface(Some(PENCIL_BLOWUPS)).unwrap()
}

#[test]
fn base_points_satisfy_bezout() {
    // Each plane curve meets a cubic of the pencil in 3·deg points, counted
    // through the towers.
    let doc = canonical_document();
    let on = |curve: &str| doc.blowups[..PENCIL_BLOWUPS].iter().filter(|c| c.simple_on.iter().any(|x| x == curve)).count();
    for l in LINES {
        assert_eq!(on(l), 3, "{l}");
    }
    assert_eq!(on("A"), 3);
    assert_eq!(on("B"), 6);
    let y = canonical_y();
    let f = fiber_class(&y);
    for c in LINES.iter().chain(&MEMBERS) {
        assert_eq!(y.curve(c).unwrap().class.dot(&f), 0, "{c} is a fiber component");
    }
}

#[test]
fn y_is_a_rational_elliptic_surface() {
    let y = canonical_y();
    let inv = y.invariants();
    assert_eq!((inv.euler, inv.k2, inv.blowups), (12, 0, 9));
    let f = fiber_class(&y);
    assert_eq!(f.square(), 0);
    assert_eq!(&y.canonical_class() + &f, ratblow::surface::DivisorClass::zero(9));
    for s in ["E5", "E6", "E7", "E8", "E9"] {
        assert_eq!(y.self_int(s).unwrap(), -1, "{s}");
        assert_eq!(y.curve(s).unwrap().class.dot(&f), 1, "{s}");
    }
    for n in ["F1", "F2", "F3"] {
        assert_eq!((y.self_int(n).unwrap(), y.genus_a(n).unwrap()), (0, 1), "{n}");
    }
}

#[test]
fn broken_q_tower_is_excluded() {
    let doc = canonical_document();
    let mut centers = doc.blowups[..PENCIL_BLOWUPS].to_vec();
    // The q tower leaves the conic after its first center.
    for c in centers.iter_mut().filter(|c| c.label == "E3" || c.label == "E6") {
        c.simple_on.retain(|x| x != "B");
    }
    let pi = PencilIncidence::from_centers(&centers).unwrap();
    assert!(build_y(&pi).is_err());
    assert!(!enumerate_pencils().contains(&pi));

    let mut broken = doc.clone();
    broken.blowups[..PENCIL_BLOWUPS].clone_from_slice(&centers);
    let r = verify_document(&broken);
    assert!(!r.passed);
    assert!(!r.item("fibration").unwrap().pass);
}

#[test]
fn wrong_second_chain_has_no_placement() {
    let y = canonical_y();
    let mut templates = target_templates();
    templates[1] = ChainTemplate::new("C6_1", &[Some("F2"), None, None, None, None], &[7, 2, 2, 2, 2]);
    assert!(templates[1].wahl().is_none());
    assert!(enumerate_z_centers(&y, &templates).is_empty());
}

#[test]
fn skipping_the_f1_node_breaks_the_long_chain() {
    let mut doc = canonical_document();
    doc.blowups.retain(|c| c.node_of.as_deref() != Some("F1"));
    let z = doc.build_surface(None).unwrap();
    assert_ne!(z.self_int("F1").unwrap(), -5);
    let long = doc.chain("C110_67").unwrap();
    assert!(validate_chain(&z, long).is_err());
    let r = verify_document(&doc);
    assert!(!r.passed);
    assert!(r.failing().contains(&"chain:C110_67"));
}

#[test]
fn self_intersection_drop_is_conserved() {
    let doc = canonical_document();
    let (y, z) = (canonical_y(), canonical_z());
    let y_curves: Vec<String> = y.curve_names().map(str::to_string).collect();
    let drop: i64 = y_curves.iter().map(|c| y.self_int(c).unwrap() - z.self_int(c).unwrap()).sum();
    let expected: i64 = doc.blowups[PENCIL_BLOWUPS..]
        .iter()
        .map(|c| y_curves.iter().map(|n| c.multiplicity(n).pow(2)).sum::<i64>())
        .sum();
    assert_eq!(drop, expected);
}

#[test]
fn z_curves_of_the_chains() {
    let z = canonical_z();
    assert_eq!(z.self_int("F2").unwrap(), -8);
    assert_eq!(z.self_int("E5").unwrap(), -7);
    assert_eq!(z.self_int("F1").unwrap(), -5);
    assert_eq!(z.pair("F1", "E5").unwrap(), 1);
    assert_eq!(z.pair("F1", "E7").unwrap(), 1);
    assert_eq!(z.pair("E6", "B").unwrap(), 1);
    for c in ["F1", "F2"] {
        assert_eq!(z.genus_a(c).unwrap(), 0, "{c} is a sphere after its node is blown up");
    }
}

#[test]
fn full_presentation_shape() {
    let doc = canonical_document();
    let cfg = BlowdownConfig::new(canonical_z(), doc.chains.clone(), Vec::new());
    let p = h1_presentation(&cfg).unwrap();
    assert_eq!((p.relations.rows(), p.relations.cols()), (25, 16));
    assert_eq!(p.basis_rows, 23);
    assert_eq!(p.group().to_string(), "Z/2");
}

#[test]
fn every_solution_has_the_same_outcome() {
    let (pencils, found) = all_solutions();
    assert_eq!(pencils, 2);
    assert_eq!(found.len(), 2);
    let canonical = canonical_document();
    assert!(found.iter().any(|(_, d)| *d == canonical));
    let digests: Vec<_> = found.iter().map(|(_, d)| verify_document(d).digest()).collect();
    assert!(digests.iter().all(|d| d.passed));
    assert!(digests.windows(2).all(|w| w[0] == w[1]));
}
