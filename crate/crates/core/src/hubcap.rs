//! Hubcap dispositions and the recursive bound checker.

use rayon::prelude::*;
use thiserror::Error;

use crate::axle::{Axle, Degree};
use crate::outlet::{Outlet, PlacedOutlet, PositionedOutlet};

/// Decides reducibility of axles on behalf of the bound checker.
///
/// Implementations must be callable from several threads at once.
pub trait Reducer: Sync {
    fn is_reducible(&self, axle: &Axle) -> bool;

    /// Like [`Reducer::is_reducible`], with a reason on failure.
    fn reduce(&self, axle: &Axle) -> Result<(), String> {
        if self.is_reducible(axle) {
            Ok(())
        } else {
            Err(format!("axle {} is not reducible", axle.digest()))
        }
    }
}

/// Treats nothing as reducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverReducible;

impl Reducer for NeverReducible {
    fn is_reducible(&self, _: &Axle) -> bool {
        false
    }
}

impl<F: Fn(&Axle) -> bool + Sync> Reducer for F {
    fn is_reducible(&self, axle: &Axle) -> bool {
        self(axle)
    }
}

/// One `(x, y, v)` triple with its inferred multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HubcapTriple {
    pub x: usize,
    pub y: usize,
    pub v: i32,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hubcap {
    pub triples: Vec<HubcapTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HubcapError {
    #[error("hubcap has no triples")]
    Empty,
    #[error("spoke {0} is outside 1..={1}")]
    SpokeOutOfRange(usize, usize),
    #[error("spoke {spoke} appears {count} times; every spoke must appear exactly twice")]
    Coverage { spoke: usize, count: usize },
}

impl Hubcap {
    /// Infers multiplicities for triples listed once and checks that every
    /// spoke is covered exactly twice.
    ///
    /// A triple starts with multiplicity 1 and is doubled when one of its
    /// spokes would otherwise be counted only once.
    pub fn new(listed: &[(usize, usize, i32)], d: Degree) -> Result<Hubcap, HubcapError> {
        let dd = d.get();
        if listed.is_empty() {
            return Err(HubcapError::Empty);
        }
        for &(x, y, _) in listed {
            for s in [x, y] {
                if !(1..=dd).contains(&s) {
                    return Err(HubcapError::SpokeOutOfRange(s, dd));
                }
            }
        }
        let mut count = vec![0usize; dd + 1];
        for &(x, y, _) in listed {
            count[x] += 1;
            count[y] += 1;
        }
        let triples: Vec<HubcapTriple> = listed
            .iter()
            .map(|&(x, y, v)| {
                let multiplicity = if count[x] == 1 || count[y] == 1 { 2 } else { 1 };
                HubcapTriple { x, y, v, multiplicity }
            })
            .collect();
        let mut total = vec![0usize; dd + 1];
        for t in &triples {
            total[t.x] += t.multiplicity as usize;
            total[t.y] += t.multiplicity as usize;
        }
        if let Some(spoke) = (1..=dd).find(|&i| total[i] != 2) {
            return Err(HubcapError::Coverage { spoke, count: total[spoke] });
        }
        Ok(Hubcap { triples })
    }

    /// `Σ v` counted with multiplicity.
    pub fn total(&self) -> i64 {
        self.triples.iter().map(|t| t.v as i64 * t.multiplicity as i64).sum()
    }
}

/// The charge inequality `10(6 - d) + ⌊Σv / 2⌋ ≤ 0`.
pub fn check_h2(h: &Hubcap, d: Degree) -> bool {
    h2_lhs(h, d) <= 0
}

pub fn h2_lhs(h: &Hubcap, d: Degree) -> i64 {
    10 * (6 - d.get() as i64) + h.total().div_euclid(2)
}

/// The positioned outlets `(T, z)` for `z ∈ {x, y}`, table order major.
pub fn positioned_list(outlets: &[Outlet], x: usize, y: usize, d: Degree) -> Vec<PlacedOutlet> {
    let mut out = Vec::with_capacity(outlets.len() * 2);
    for t in outlets {
        out.push(PlacedOutlet::new(PositionedOutlet::new(t, x), d));
        if y != x {
            out.push(PlacedOutlet::new(PositionedOutlet::new(t, y), d));
        }
    }
    out
}

/// Why a bound could not be certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundFailure {
    /// The branch axle whose enforced sum exceeds the bound.
    pub axle: Axle,
    /// Indices of the outlets added along the branch, outermost first.
    pub trail: Vec<usize>,
    /// Sum of values of the outlets enforced on the branch.
    pub enforced_sum: i64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundStats {
    pub calls: u64,
    pub reducibility_tests: u64,
}

/// Recursive certifier for `max_S Σ r ≤ v` over the positioned outlets.
pub struct BoundChecker<'a, R: Reducer + ?Sized> {
    outlets: &'a [PlacedOutlet],
    reducer: &'a R,
    v: i64,
    pub stats: BoundStats,
}

impl<'a, R: Reducer + ?Sized> BoundChecker<'a, R> {
    pub fn new(outlets: &'a [PlacedOutlet], v: i64, reducer: &'a R) -> Self {
        BoundChecker { outlets, reducer, v, stats: BoundStats::default() }
    }

    /// Runs from `p = 0` and all-zero signs.
    pub fn check(&mut self, axle: &Axle) -> Result<(), BoundFailure> {
        let mut s = vec![0i8; self.outlets.len()];
        let mut trail = Vec::new();
        self.step(0, &mut s, axle, &mut trail)
    }

    fn step(
        &mut self,
        p: usize,
        s: &mut [i8],
        axle: &Axle,
        trail: &mut Vec<usize>,
    ) -> Result<(), BoundFailure> {
        self.stats.calls += 1;
        let n = self.outlets.len();
        // (1), over every undecided index so that negative outlets below p
        // that became enforced are counted.
        for i in 0..n {
            if s[i] == 0 {
                if self.outlets[i].enforced_by(axle) {
                    s[i] = 1;
                } else if !self.outlets[i].permitted_by(axle) {
                    s[i] = -1;
                }
            }
        }
        debug_assert!((0..n).all(|i| s[i] != 1 || self.outlets[i].enforced_by(axle)));
        debug_assert!((p..n).all(|i| s[i] != -1 || !self.outlets[i].permitted_by(axle)));
        // (2)
        let value = |i: usize| self.outlets[i].value as i64;
        let f: i64 = (0..n).filter(|&i| s[i] == 1).map(value).sum();
        let mut a: i64 = (0..n).filter(|&i| s[i] == 0 && value(i) > 0).map(value).sum();
        // (3)
        if a + f <= self.v {
            return Ok(());
        }
        // (4)
        if f > self.v {
            self.stats.reducibility_tests += 1;
            if self.reducer.is_reducible(axle) {
                return Ok(());
            }
            return Err(BoundFailure { axle: *axle, trail: trail.clone(), enforced_sum: f });
        }
        // (5)
        for q in p..n {
            if s[q] != 0 || value(q) <= 0 {
                continue;
            }
            // (6)
            let child = self.outlets[q].wedge(axle).expect("undecided outlet is permitted");
            // (7)
            let pruned = (0..p).any(|i| s[i] == -1 && self.outlets[i].enforced_by(&child));
            if !pruned {
                // (8)
                let mut s2 = s.to_vec();
                s2[q] = 1;
                trail.push(q);
                let r = self.step(q, &mut s2, &child, trail);
                trail.pop();
                r?;
            }
            // (9)
            s[q] = -1;
            a -= value(q);
            // (10)
            if a + f <= self.v {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Certifies `L_d(A, x, y) ≤ v`.
pub fn check_bound<R: Reducer + ?Sized>(
    axle: &Axle,
    outlets: &[PlacedOutlet],
    v: i64,
    reducer: &R,
) -> Result<BoundStats, BoundFailure> {
    let mut checker = BoundChecker::new(outlets, v, reducer);
    checker.check(axle)?;
    Ok(checker.stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HubcapFailure {
    #[error("charge inequality fails: 10(6-d) + floor(sum/2) = {lhs} > 0")]
    H2 { lhs: i64 },
    #[error("bound {v} for spokes ({x},{y}) not certified: branch {} reaches enforced sum {}", failure.axle.digest(), failure.enforced_sum)]
    Bound { x: usize, y: usize, v: i32, failure: BoundFailure },
}

/// Checks both hubcap conditions; distinct triples run in parallel when
/// `parallel` is set. The reported failure is always the first in triple
/// order, independent of scheduling.
pub fn check_hubcap<R: Reducer + ?Sized>(
    axle: &Axle,
    hubcap: &Hubcap,
    outlets: &[Outlet],
    reducer: &R,
    parallel: bool,
) -> Result<(), HubcapFailure> {
    let d = axle.degree();
    let one = |t: &HubcapTriple| -> Result<(), HubcapFailure> {
        let list = positioned_list(outlets, t.x, t.y, d);
        check_bound(axle, &list, t.v as i64, reducer)
            .map(|_| ())
            .map_err(|failure| HubcapFailure::Bound { x: t.x, y: t.y, v: t.v, failure })
    };
    let results: Vec<Result<(), HubcapFailure>> = if parallel {
        hubcap.triples.par_iter().map(one).collect()
    } else {
        hubcap.triples.iter().map(one).collect()
    };
    results.into_iter().collect::<Result<Vec<()>, _>>()?;
    if !check_h2(hubcap, d) {
        return Err(HubcapFailure::H2 { lhs: h2_lhs(hubcap, d) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outlet::OutletEntry;

    fn d7() -> Degree {
        Degree::new(7).unwrap()
    }

    fn diagonal(v: i32) -> Vec<(usize, usize, i32)> {
        (1..=7).map(|i| (i, i, v)).collect()
    }

    #[test]
    fn multiplicity_inference() {
        let h = Hubcap::new(&diagonal(0), d7()).unwrap();
        assert!(h.triples.iter().all(|t| t.multiplicity == 1));
        let h = Hubcap::new(&[(1, 2, 5), (3, 4, 5), (5, 6, 5), (7, 7, 5)], d7()).unwrap();
        assert_eq!(h.triples.iter().map(|t| t.multiplicity).collect::<Vec<_>>(), vec![2, 2, 2, 1]);
        assert_eq!(h.total(), 35);
        let h = Hubcap::new(&[(1, 2, 5), (2, 3, 5), (3, 4, 5), (4, 5, 5), (5, 6, 5), (6, 7, 5), (7, 1, 5)], d7())
            .unwrap();
        assert!(h.triples.iter().all(|t| t.multiplicity == 1));
        assert_eq!(
            Hubcap::new(&[(1, 2, 0), (1, 3, 0)], d7()),
            Err(HubcapError::Coverage { spoke: 1, count: 4 })
        );
        assert_eq!(Hubcap::new(&[(1, 8, 0)], d7()), Err(HubcapError::SpokeOutOfRange(8, 7)));
        assert_eq!(Hubcap::new(&[], d7()), Err(HubcapError::Empty));
    }

    #[test]
    fn h2_examples() {
        let h = |total: i32| Hubcap::new(&[(1, 1, total), (2, 2, 0), (3, 3, 0), (4, 4, 0), (5, 5, 0), (6, 6, 0), (7, 7, 0)], d7()).unwrap();
        assert!(check_h2(&h(21), d7()));
        assert!(!check_h2(&h(22), d7()));
        assert!(check_h2(&h(-3), d7()));
        let d8 = Degree::new(8).unwrap();
        let h8 = Hubcap::new(&(1..=8).map(|i| (i, i, if i == 1 { 39 } else { 0 })).collect::<Vec<_>>(), d8).unwrap();
        assert!(check_h2(&h8, d8));
    }

    #[test]
    fn bound_examples() {
        let omega = Axle::trivial(d7());
        assert!(check_bound(&omega, &[], 0, &NeverReducible).is_ok());
        let o1 = Outlet::new(1, vec![OutletEntry::new(1, 5, 5)]);
        let o2 = Outlet::new(1, vec![OutletEntry::new(1, 6, 8)]);
        let list = positioned_list(&[o1.clone(), o2.clone()], 1, 1, d7());
        assert!(check_bound(&omega, &list, 1, &NeverReducible).is_ok());
        assert!(check_bound(&omega, &list, 0, &NeverReducible).is_err());
        let neg = Outlet::new(-1, vec![]);
        let list = positioned_list(&[neg, o1], 1, 1, d7());
        assert!(check_bound(&omega, &list, 0, &NeverReducible).is_ok());
        assert!(check_bound(&omega, &list, -1, &NeverReducible).is_err());
    }

    #[test]
    fn negative_outlet_below_start_is_counted() {
        let omega = Axle::trivial(d7());
        let neg = Outlet::new(-1, vec![OutletEntry::new(1, 5, 5)]);
        let pos = Outlet::new(1, vec![OutletEntry::new(1, 5, 5)]);
        let list = positioned_list(&[neg, pos], 1, 1, d7());
        assert!(check_bound(&omega, &list, 0, &NeverReducible).is_ok());
    }

    #[test]
    fn overflow_escalates_to_reducibility() {
        let omega = Axle::trivial(d7());
        let pos = Outlet::new(1, vec![OutletEntry::new(1, 5, 5)]);
        let list = positioned_list(&[pos], 1, 1, d7());
        let fixed_spoke = |a: &Axle| a.hi(1) == 5;
        let stats = check_bound(&omega, &list, 0, &fixed_spoke).unwrap();
        assert_eq!(stats.reducibility_tests, 1);
        let fail = check_bound(&omega, &list, 0, &NeverReducible).unwrap_err();
        assert_eq!(fail.trail, vec![0]);
        assert_eq!(fail.enforced_sum, 1);
    }

    #[test]
    fn hubcap_examples() {
        let omega = Axle::trivial(d7());
        let h = Hubcap::new(&diagonal(0), d7()).unwrap();
        assert!(check_hubcap(&omega, &h, &[], &NeverReducible, true).is_ok());
        let mut bad = diagonal(0);
        bad[3].2 = -1;
        let h = Hubcap::new(&bad, d7()).unwrap();
        assert!(matches!(
            check_hubcap(&omega, &h, &[], &NeverReducible, false),
            Err(HubcapFailure::Bound { x: 4, y: 4, v: -1, .. })
        ));
        let mut big = diagonal(3);
        big[0].2 = 4;
        let h = Hubcap::new(&big, d7()).unwrap();
        assert_eq!(check_hubcap(&omega, &h, &[], &NeverReducible, true), Err(HubcapFailure::H2 { lhs: 1 }));
    }
}
