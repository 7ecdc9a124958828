use cartwheel_core::reduce::config::{parse_configurations, render_configuration};
use cartwheel_oracle::battery::{database_battery, random_database};

#[test]
fn generated_database_passes_ingestion_checks() {
    let text = random_database(3, 150);
    let r = database_battery(&text).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(r.configs, 150);
    assert!(r.questions >= 300);
}

#[test]
fn rendering_roundtrips() {
    let text = random_database(4, 40);
    let recs = parse_configurations(&text).unwrap();
    for r in &recs {
        let again = parse_configurations(&render_configuration(&r.name, &r.drawing)).unwrap();
        let d = &again[0].drawing;
        assert_eq!(d.ids(), r.drawing.ids());
        for v in 0..d.len() {
            assert_eq!(d.neighbours(v), r.drawing.neighbours(v));
            assert_eq!(d.gaps(v), r.drawing.gaps(v));
        }
    }
}

#[test]
fn toy_records_from_text() {
    let text = "config tri 3\nv 1 6 : 2 3\nv 2 6 : 3 1\nv 3 6 : 1 2\nend\nconfig bow 5\nv 1 6 : 2 3 | 4 5 |\nv 2 5 : 3 1 |\nv 3 5 : 1 2 |\nv 4 5 : 5 1 |\nv 5 5 : 1 4 |\nend\n";
    let r = database_battery(text).unwrap();
    assert_eq!(r.configs, 2);
}
