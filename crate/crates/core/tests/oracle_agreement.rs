use cartwheel_oracle::battery::{bound_battery, single_vertex_counts, subconfig_battery};

#[test]
fn bound_checker_agrees_with_enumeration() {
    for d in 5..=11 {
        let r = bound_battery(11, d, 60, 10).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(r.instances, 60);
        assert!(r.escalations > 0, "degree {d} never reached the reducer");
    }
}

#[test]
fn subconfiguration_search_agrees_with_enumeration() {
    let r = subconfig_battery(5, 60).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(r.pairs, 60);
    assert!(r.found > 0 && r.found < r.pairs);
}

#[test]
fn single_large_vertex_in_trivial_skeleton() {
    assert_eq!(single_vertex_counts(7, 12), (14, 14));
    assert_eq!(single_vertex_counts(7, 7), (1, 1));
}
