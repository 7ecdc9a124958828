use cartwheel_core::axle::{Axle, Bounds, Condition, Degree, CONDITION_THRESHOLDS};
use cartwheel_core::outlet::{Outlet, PositionedOutlet};
use cartwheel_oracle::InstanceGenerator;
use proptest::prelude::*;

fn instance(seed: u64, d: usize) -> (Degree, Axle, InstanceGenerator) {
    let d = Degree::new(d).unwrap();
    let mut g = InstanceGenerator::new(seed);
    let a = g.random_axle(d);
    (d, a, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn negation_compatibility_and_partition(seed in any::<u64>(), d in 5usize..=11, n in 1usize..=55, t in 0usize..8) {
        let (d, a, _) = instance(seed, d);
        let n = (n - 1) % d.positions() + 1;
        let c = Condition::new(n, CONDITION_THRESHOLDS[t], d).unwrap();
        let neg = c.negate().unwrap();
        prop_assert_eq!(neg.negate().unwrap(), c);
        prop_assert_eq!(a.compatible(c), a.compatible(neg));
        if a.compatible(c) {
            let x = a.wedge(c).unwrap();
            let y = a.wedge(neg).unwrap();
            prop_assert!(x.is_valid() && y.is_valid());
            for i in 0..=d.positions() {
                if i != n {
                    prop_assert_eq!(x.bounds(i), a.bounds(i));
                    prop_assert_eq!(y.bounds(i), a.bounds(i));
                }
            }
            // every degree in a's interval lands in exactly one side
            let (bx, by, ba) = (x.bounds(n), y.bounds(n), a.bounds(n));
            for k in 5u8..=12 {
                let inside = |b: Bounds| b.lo <= k.min(9) && k <= b.hi;
                if k <= 9 || k == 12 {
                    prop_assert_eq!(inside(ba), inside(bx) ^ inside(by), "degree {}", k);
                }
            }
        } else {
            prop_assert!(a.wedge(c).is_err());
        }
    }

    #[test]
    fn symmetries_are_periodic(seed in any::<u64>(), d in 5usize..=11) {
        let (d, a, _) = instance(seed, d);
        let mut m = a;
        for i in 2 * d.get() + 1..=d.positions() {
            m = m.with_bounds(i, Bounds::FREE);
        }
        prop_assert!(m.is_fan_free());
        let mut r = m;
        for _ in 0..d.get() {
            r = r.rotate().unwrap();
            prop_assert!(r.is_valid());
        }
        prop_assert_eq!(r, m);
        let s = m.reflect().unwrap();
        prop_assert!(s.is_valid());
        prop_assert_eq!(s.reflect().unwrap(), m);
    }

    #[test]
    fn outlet_wedge_matches_permission(seed in any::<u64>(), d in 5usize..=11, x in 1usize..=11) {
        let (d, a, mut g) = instance(seed, d);
        let x = (x - 1) % d.get() + 1;
        let t = g.random_outlet(d, 4);
        prop_assert!(t.validate(d).is_empty());
        let po = PositionedOutlet::new(&t, x);
        let w = po.wedge(&a);
        prop_assert_eq!(w.is_some(), po.permitted_by(&a));
        if po.enforced_by(&a) {
            prop_assert!(po.permitted_by(&a));
            prop_assert_eq!(w, Some(a));
        }
        if let Some(b) = w {
            prop_assert!(b.is_valid());
            prop_assert!(po.enforced_by(&b));
            // tightening keeps enforcement and can only lose permission
            let b2 = g.random_outlet(d, 3);
            let po2 = PositionedOutlet::new(&b2, x);
            if po2.enforced_by(&a) {
                prop_assert!(po2.enforced_by(&b));
            }
            if po2.permitted_by(&b) {
                prop_assert!(po2.permitted_by(&a));
            }
        }
    }

    #[test]
    fn fan_free_roundtrip(seed in any::<u64>(), d in 5usize..=11) {
        let (d, a, _) = instance(seed, d);
        let mut m = a;
        for i in 2 * d.get() + 1..=d.positions() {
            m = m.with_bounds(i, Bounds::FREE);
        }
        let t = Outlet::from_axle(&m).unwrap();
        prop_assert_eq!(t.value(), 1);
        prop_assert!(t.validate(d).is_empty());
        prop_assert_eq!(t.to_axle(d).unwrap(), m);
    }
}
