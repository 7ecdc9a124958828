//! Differential batteries: engine against oracle on generated instances.

use std::collections::BTreeSet;

use cartwheel_core::axle::{Axle, Bounds, Condition, Degree, CONDITION_THRESHOLDS};
use cartwheel_core::drawing::Drawing;
use cartwheel_core::hubcap::check_bound;
use cartwheel_core::outlet::{Outlet, OutletEntry, PlacedOutlet, PositionedOutlet};
use cartwheel_core::reduce::config::{enhancements, free_completion, render_configuration};
use cartwheel_core::reduce::{
    for_each_answer, load_database, make_question, semi_reducible, skeleton_of, GoodConfiguration,
};
use rand::Rng;

use crate::{brute_force_bound, brute_force_subconfig, InstanceGenerator};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundReport {
    pub instances: usize,
    pub checks: usize,
    /// Instances certified at some `v` only after consulting the reducer.
    pub escalations: usize,
    pub max_outlets: usize,
}

/// Monotone reducer stubs: once an axle counts as reducible, so does every
/// axle with narrower bounds.
#[derive(Debug, Clone, Copy)]
pub enum Stub {
    Never,
    LowerAtLeast(usize, u8),
    UpperAtMost(usize, u8),
}

impl Stub {
    pub fn holds(self, a: &Axle) -> bool {
        match self {
            Stub::Never => false,
            Stub::LowerAtLeast(p, k) => a.lo(p) >= k,
            Stub::UpperAtMost(p, k) => a.hi(p) <= k,
        }
    }
}

impl InstanceGenerator {
    /// Outlets whose entries crowd a few positions around spokes 1..3 so
    /// that they overlap, exclude and enforce one another.
    pub fn crowded_outlet(&mut self, d: Degree) -> Outlet {
        let dd = d.get();
        let pool = [1, 2, 3, dd + 1, dd + 2];
        let want = self.rng.gen_range(1..=3);
        let mut entries: Vec<OutletEntry> = Vec::new();
        while entries.len() < want {
            let pos = pool[self.rng.gen_range(0..pool.len())];
            if entries.iter().any(|e| e.pos == pos) {
                continue;
            }
            let lo = [5u8, 5, 6, 7, 8][self.rng.gen_range(0..5)];
            let hi = [5u8, 6, 7, 8, 12][self.rng.gen_range(0..5)];
            if lo > hi || (lo == 5 && hi == 12) {
                continue;
            }
            entries.push(OutletEntry::new(pos, lo, hi));
            if pos == 1 && lo == hi && lo >= 6 && self.rng.gen_ratio(1, 3) {
                entries.push(OutletEntry::new(2 * dd + 1, 5, [5u8, 6, 8][self.rng.gen_range(0..3)]));
            }
        }
        entries.sort();
        let value = if self.rng.gen_ratio(2, 3) { self.rng.gen_range(1..=3) } else { -self.rng.gen_range(1..=2) };
        Outlet::new(value, entries)
    }

    pub fn stub(&mut self) -> Stub {
        let p = self.rng.gen_range(1..=3);
        match self.rng.gen_range(0..4) {
            0 | 1 => Stub::Never,
            2 => Stub::LowerAtLeast(p, [6, 7, 8][self.rng.gen_range(0..3)]),
            _ => Stub::UpperAtMost(p, [5, 6, 7][self.rng.gen_range(0..3)]),
        }
    }
}

/// Runs `count` random bound instances of degree `d` with up to
/// `max_outlets` positioned outlets, sweeping `v` around the oracle value.
pub fn bound_battery(seed: u64, d: usize, count: usize, max_outlets: usize) -> Result<BoundReport, String> {
    let deg = Degree::new(d).map_err(|e| e.to_string())?;
    let mut g = InstanceGenerator::new(seed ^ (d as u64) << 32);
    let mut report = BoundReport { max_outlets, ..Default::default() };
    for case in 0..count {
        let a = g.random_axle(deg);
        let n = g.rng.gen_range(0..=max_outlets);
        let list: Vec<(Outlet, usize)> = (0..n)
            .map(|_| {
                let t = if g.rng.gen_ratio(3, 4) { g.crowded_outlet(deg) } else { g.random_outlet(deg, 3) };
                (t, g.rng.gen_range(1..=2))
            })
            .collect();
        let stub = g.stub();
        let reducer = move |x: &Axle| stub.holds(x);
        let placed: Vec<PlacedOutlet> =
            list.iter().map(|(t, x)| PlacedOutlet::new(PositionedOutlet::new(t, *x), deg)).collect();
        let best = brute_force_bound(&a, &list, &reducer);
        let centre = best.unwrap_or(0);
        let mut escalated = false;
        for v in [centre - 1, centre, centre + 1] {
            let engine = check_bound(&a, &placed, v, &reducer);
            let expected = best.map_or(true, |m| m <= v);
            if let Ok(stats) = &engine {
                escalated |= stats.reducibility_tests > 0;
            }
            if engine.is_ok() != expected {
                return Err(format!(
                    "degree {d} case {case}: v={v}, oracle max {best:?}, engine {} on {a:?} with {list:?} and {stub:?}",
                    if engine.is_ok() { "certified" } else { "rejected" }
                ));
            }
            report.checks += 1;
        }
        report.escalations += escalated as usize;
        report.instances += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubconfigReport {
    pub pairs: usize,
    pub found: usize,
    pub mirrored_found: usize,
    pub cut_vertex_configs: usize,
}

fn relabelled(l: &Drawing, v: usize, gamma: u8) -> Drawing {
    let mut gammas = l.gammas().to_vec();
    gammas[v] = gamma;
    let rot = (0..l.len()).map(|u| l.neighbours(u).to_vec()).collect();
    let gap = (0..l.len()).map(|u| l.gaps(u).to_vec()).collect();
    Drawing::from_rotations(l.ids().to_vec(), gammas, rot, gap).expect("relabelled drawing")
}

/// Generates `count` accepted (configuration, skeleton) pairs on skeletons
/// of degree 6..=8 and checks that the engine's verdict and embedding agree
/// with the exhaustive search.
pub fn subconfig_battery(seed: u64, count: usize) -> Result<SubconfigReport, String> {
    let mut g = InstanceGenerator::new(seed);
    let mut report = SubconfigReport::default();
    let mut attempts = 0usize;
    while report.pairs < count {
        attempts += 1;
        if attempts > count * 200 {
            return Err(format!("generator starved after {attempts} attempts"));
        }
        let d = g.rng.gen_range(6..=8);
        let deg = Degree::new(d).unwrap();
        let a = g.random_axle(deg);
        let k = skeleton_of(&a);
        let source = if g.rng.gen_ratio(7, 10) {
            k.drawing.clone()
        } else {
            let d2 = Degree::new(g.rng.gen_range(6..=8)).unwrap();
            skeleton_of(&g.random_axle(d2)).drawing
        };
        let Some(mut l) = g.random_subdrawing(&source, 9) else { continue };
        if g.rng.gen_ratio(3, 10) {
            l = l.mirrored();
        }
        if g.rng.gen_ratio(1, 5) {
            let v = g.rng.gen_range(0..l.len());
            let delta: i16 = if g.rng.gen_bool(0.5) { 1 } else { -1 };
            let gm = (l.gamma(v) as i16 + delta).clamp(1, 11) as u8;
            l = relabelled(&l, v, gm);
        }
        let Ok(config) = GoodConfiguration::new(format!("g{attempts}"), l) else { continue };
        let n = config.drawing.len();
        let found = semi_reducible(&a, std::slice::from_ref(&config))
            .map_err(|e| format!("internal error: {e}"))?;
        let all = brute_force_subconfig(&config.drawing, &k.drawing, d);
        let expected = all.iter().any(|e| e.well_positioned);
        if found.is_some() != expected {
            return Err(format!(
                "pair {}: engine {} but oracle {} on {a:?} with config {:?}",
                report.pairs,
                if found.is_some() { "found" } else { "found none" },
                if expected { "has a well-positioned embedding" } else { "has none" },
                config.drawing
            ));
        }
        if let Some(hit) = found {
            let map = &hit.map[..n];
            if !all.iter().any(|e| e.well_positioned && e.map == map && e.mirrored == hit.mirrored) {
                return Err(format!("pair {}: engine embedding {map:?} not among the oracle's", report.pairs));
            }
            report.found += 1;
            report.mirrored_found += hit.mirrored as usize;
        }
        report.cut_vertex_configs += (!config.drawing.cut_vertices().is_empty()) as usize;
        report.pairs += 1;
    }
    Ok(report)
}

/// Images of a single vertex of label `gamma` in the skeleton of the
/// trivial axle, counted by the engine's question search and by the oracle.
pub fn single_vertex_counts(d: usize, gamma: u8) -> (usize, usize) {
    let deg = Degree::new(d).unwrap();
    let k = skeleton_of(&Axle::trivial(deg));
    let l = Drawing::from_rotations(vec![1], vec![gamma], vec![vec![]], vec![vec![]]).unwrap();
    let l0 = free_completion(&l).expect("a single vertex always completes");
    let j = enhancements(&l, &l0).expect("single vertex enhancement").remove(0);
    let q = make_question(&j, 1).expect("question");
    let mut images = BTreeSet::new();
    for_each_answer(&q, &k.drawing, |f| {
        images.insert(f[q.z0]);
        false
    });
    let oracle = brute_force_subconfig(&l, &k.drawing, d).len();
    (images.len(), oracle)
}

/// A database text of `count` configurations cut out of random skeletons.
pub fn random_database(seed: u64, count: usize) -> String {
    let mut g = InstanceGenerator::new(seed);
    let mut text = String::new();
    let mut made = 0;
    while made < count {
        let d = Degree::new(g.rng.gen_range(5..=11)).unwrap();
        let k = skeleton_of(&g.random_axle(d));
        let Some(l) = g.random_subdrawing(&k.drawing, 12) else { continue };
        if GoodConfiguration::new("probe", l.clone()).is_err() {
            continue;
        }
        text.push_str(&render_configuration(&format!("c{made}"), &l));
        made += 1;
    }
    text
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DatabaseReport {
    pub configs: usize,
    pub questions: usize,
}

/// Loads a database and re-checks every ingestion invariant independently:
/// labels at most 11, some vertex within distance two of all others (by
/// breadth-first search here), and every question well formed.
pub fn database_battery(text: &str) -> Result<DatabaseReport, String> {
    let db = load_database(text).map_err(|e| e.to_string())?;
    let mut report = DatabaseReport::default();
    for c in &db {
        let l = &c.drawing;
        if l.gammas().iter().any(|&g| g > 11) {
            return Err(format!("{}: label above 11", c.name));
        }
        let centre = (0..l.len()).any(|v| {
            let mut dist = vec![usize::MAX; l.len()];
            dist[v] = 0;
            let mut queue = std::collections::VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                for &w in l.neighbours(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist.iter().all(|&x| x <= 2)
        });
        if !centre {
            return Err(format!("{}: radius exceeds two", c.name));
        }
        for e in &c.enhancements {
            let mirror = e.drawing.mirrored();
            for (q, j) in [(&e.question, &e.drawing), (&e.reflected, &mirror)] {
                q.validate(j, l.len()).map_err(|err| format!("{}: {err}", c.name))?;
                report.questions += 1;
            }
        }
        report.configs += 1;
    }
    Ok(report)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fan_free(a: &Axle) -> Axle {
    let d = a.degree();
    (2 * d.get() + 1..=d.positions()).fold(*a, |m, i| m.with_bounds(i, Bounds::FREE))
}

/// Random (axle, condition) pairs at degree `d`: negation, compatibility of
/// both sides, the partition of every admissible degree, validity after
/// wedging, and periodicity of rotation and reflection.
pub fn axle_battery(seed: u64, d: usize, count: usize) -> Result<usize, String> {
    let deg = Degree::new(d).map_err(|e| e.to_string())?;
    let mut g = InstanceGenerator::new(seed ^ (d as u64) << 40);
    for case in 0..count {
        let a = g.random_axle(deg);
        let n = g.rng.gen_range(1..=deg.positions());
        let m = CONDITION_THRESHOLDS[g.rng.gen_range(0..CONDITION_THRESHOLDS.len())];
        let c = Condition::new(n, m, deg).map_err(|e| e.to_string())?;
        let neg = c.negate().map_err(|e| e.to_string())?;
        ensure!(neg.negate().ok() == Some(c), "case {case}: double negation of {c}");
        ensure!(a.compatible(c) == a.compatible(neg), "case {case}: {c} on {a:?}");
        if a.compatible(c) {
            let (x, y) = (a.wedge(c).map_err(|e| e.to_string())?, a.wedge(neg).map_err(|e| e.to_string())?);
            ensure!(x.is_valid() && y.is_valid(), "case {case}: wedge left the algebra");
            for i in (0..=deg.positions()).filter(|&i| i != n) {
                ensure!(x.bounds(i) == a.bounds(i) && y.bounds(i) == a.bounds(i), "case {case}: position {i} moved");
            }
            let (bx, by, ba) = (x.bounds(n), y.bounds(n), a.bounds(n));
            for k in (5u8..=9).chain([12]) {
                let inside = |b: Bounds| b.lo <= k.min(9) && k <= b.hi;
                ensure!(inside(ba) == (inside(bx) ^ inside(by)), "case {case}: degree {k} not partitioned by {c}");
            }
        } else {
            ensure!(a.wedge(c).is_err(), "case {case}: incompatible wedge succeeded");
        }
        let m = fan_free(&a);
        let mut r = m;
        for _ in 0..d {
            r = r.rotate().map_err(|e| e.to_string())?;
            ensure!(r.is_valid(), "case {case}: rotation left the algebra");
        }
        ensure!(r == m, "case {case}: rotation not of period {d}");
        let s = m.reflect().map_err(|e| e.to_string())?;
        ensure!(s.is_valid() && s.reflect().ok() == Some(m), "case {case}: reflection not an involution");
    }
    Ok(count)
}

/// Random (axle, outlet, spoke) triples at degree `d`: wedge succeeds
/// exactly when permitted, enforcement implies permission, tightening is
/// monotone, and fan-free axles round-trip through outlets.
pub fn outlet_battery(seed: u64, d: usize, count: usize) -> Result<usize, String> {
    let deg = Degree::new(d).map_err(|e| e.to_string())?;
    let mut g = InstanceGenerator::new(seed ^ (d as u64) << 44);
    for case in 0..count {
        let a = g.random_axle(deg);
        let x = g.rng.gen_range(1..=d);
        let t = g.random_outlet(deg, 4);
        ensure!(t.validate(deg).is_empty(), "case {case}: generator made an invalid outlet");
        let po = PositionedOutlet::new(&t, x);
        let w = po.wedge(&a);
        ensure!(w.is_some() == po.permitted_by(&a), "case {case}: wedge and permission disagree");
        if po.enforced_by(&a) {
            ensure!(po.permitted_by(&a) && w == Some(a), "case {case}: enforced but not absorbed");
        }
        if let Some(b) = w {
            ensure!(b.is_valid() && po.enforced_by(&b), "case {case}: wedge does not enforce");
            let t2 = g.random_outlet(deg, 3);
            let po2 = PositionedOutlet::new(&t2, x);
            ensure!(!po2.enforced_by(&a) || po2.enforced_by(&b), "case {case}: tightening lost enforcement");
            ensure!(!po2.permitted_by(&b) || po2.permitted_by(&a), "case {case}: tightening gained permission");
        }
        if case % 8 == 0 {
            let m = fan_free(&a);
            let o = Outlet::from_axle(&m).map_err(|e| e.to_string())?;
            ensure!(o.value() == 1 && o.validate(deg).is_empty(), "case {case}: bad outlet from axle");
            ensure!(o.to_axle(deg).ok() == Some(m), "case {case}: fan-free round trip");
        }
    }
    Ok(count)
}
