use qconn_core::connectivity::is_k_connected;
use qconn_core::extremal::{
    classify_membership, enumerate_eprime_orbits, make_member, ExtremalParams, FamilyClass,
};

/// Every representative of sizes `0..=bound+1` classifies back to its own size and class.
fn round_trip(n: usize, k: usize, delta: usize) {
    let p = ExtremalParams::new(n, k, delta).unwrap();
    let mut checked = 0;
    for size in 0..=p.family_bound() + 1 {
        for o in enumerate_eprime_orbits(&p, size).unwrap() {
            let m = make_member(&p, &o.edges).unwrap();
            let back = classify_membership(&m.graph, k, delta).expect("member classifies");
            assert_eq!(back.removed_edges.len(), size, "{:?}", o.edges);
            assert_eq!(back.family_class, m.family_class);
            if m.family_class == FamilyClass::A1 {
                let kc = is_k_connected(&m.graph, k);
                assert!(!kc.k_connected);
                let cut = kc.cut.unwrap();
                assert_eq!(cut.len(), k - 1);
                assert!(m.graph.is_separated_by(&cut));
            }
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn classification_round_trip_at_103_3_3() {
    round_trip(103, 3, 3);
}

#[test]
fn classification_round_trip_at_185_3_4() {
    round_trip(185, 3, 4);
}
