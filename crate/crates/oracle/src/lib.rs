//! Brute-force reference implementations.
//!
//! Everything here is written for obviousness, not speed, and recomputes
//! shifts, containment and face orientation from raw data instead of calling
//! the engine's versions.

use cartwheel_core::axle::{Axle, Bounds, Degree, LOWER_VALUES, UPPER_VALUES};
use cartwheel_core::drawing::Drawing;
use cartwheel_core::outlet::{Outlet, OutletEntry};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod battery;
pub mod toy;

pub const MAX_BOUND_OUTLETS: usize = 20;
pub const MAX_CONFIG_VERTICES: usize = 9;
pub const MAX_SKELETON_DEGREE: usize = 8;

/// `i ⊕_d x` written out by band.
fn shift(p: usize, x: usize, d: usize) -> usize {
    if p == 0 {
        return 0;
    }
    let band = (p - 1) / d;
    let offset = (p - 1) % d;
    band * d + (offset + x) % d + 1
}

/// The `(position, bounds)` pairs of `t` placed at spoke `x`.
pub fn placed(t: &Outlet, x: usize, d: usize) -> Vec<(usize, u8, u8)> {
    t.entries().iter().map(|e| (shift(e.pos, x - 1, d), e.bounds.lo, e.bounds.hi)).collect()
}

fn enforced(entries: &[(usize, u8, u8)], a: &[(u8, u8)]) -> bool {
    entries.iter().all(|&(p, lo, hi)| lo <= a[p].0 && a[p].1 <= hi)
}

fn intersect(entries: &[(usize, u8, u8)], a: &mut [(u8, u8)]) -> bool {
    for &(p, lo, hi) in entries {
        a[p].0 = a[p].0.max(lo);
        a[p].1 = a[p].1.min(hi);
        if a[p].0 > a[p].1 {
            return false;
        }
    }
    true
}

fn raw(a: &Axle) -> Vec<(u8, u8)> {
    a.entries().iter().map(|b| (b.lo, b.hi)).collect()
}

fn to_axle(d: Degree, a: &[(u8, u8)]) -> Axle {
    let bounds: Vec<Bounds> = a[1..].iter().map(|&(lo, hi)| Bounds::new(lo, hi)).collect();
    Axle::from_bounds(d, &bounds).expect("oracle wedge stays an axle")
}

/// `max Σ r` over every admissible selection, skipping selections whose
/// wedged axle the stub marks reducible. `None` means every selection was
/// reducible. Outlets are `(T, x)` pairs.
pub fn brute_force_bound(
    a: &Axle,
    positioned: &[(Outlet, usize)],
    reducible: &dyn Fn(&Axle) -> bool,
) -> Option<i64> {
    let n = positioned.len();
    assert!(n <= MAX_BOUND_OUTLETS, "oracle capped at {MAX_BOUND_OUTLETS} outlets");
    let d = a.degree().get();
    let base = raw(a);
    let items: Vec<(Vec<(usize, u8, u8)>, i64)> =
        positioned.iter().map(|(t, x)| (placed(t, *x, d), t.value() as i64)).collect();
    let mut best: Option<i64> = None;
    for mask in 0u32..(1u32 << n) {
        let mut b = base.clone();
        let mut ok = true;
        for (i, (entries, r)) in items.iter().enumerate() {
            let forced = enforced(entries, &base);
            let chosen = mask >> i & 1 == 1;
            if forced && !chosen {
                ok = false;
                break;
            }
            if chosen && !forced && *r <= 0 {
                ok = false;
                break;
            }
            if chosen && !intersect(entries, &mut b) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let axle = to_axle(a.degree(), &b);
        if reducible(&axle) {
            continue;
        }
        let sum: i64 = items.iter().filter(|(e, _)| enforced(e, &b)).map(|(_, r)| r).sum();
        best = Some(best.map_or(sum, |m| m.max(sum)));
    }
    best
}

/// `w` follows `v` clockwise around `u` across a finite corner.
fn clockwise(g: &Drawing, u: usize, v: usize, w: usize) -> bool {
    let nb = g.neighbours(u);
    let gaps = g.gaps(u);
    (0..nb.len()).any(|j| nb[j] == v && !gaps[j] && nb[(j + 1) % nb.len()] == w && nb.len() > 1)
}

fn finite_faces(g: &Drawing) -> Vec<[usize; 3]> {
    let n = g.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a < b
                    && a < c
                    && b != c
                    && clockwise(g, a, b, c)
                    && clockwise(g, b, c, a)
                    && clockwise(g, c, a, b)
                {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// For every spoke outside the image, one of its hats is outside too.
pub fn oracle_well_positioned(positions: &[usize], d: usize) -> bool {
    (1..=d).all(|i| {
        let before = if i == 1 { 2 * d } else { d + i - 1 };
        let after = d + i;
        positions.contains(&i) || !positions.contains(&before) || !positions.contains(&after)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    /// Vertex of `k` for each vertex of `l`.
    pub map: Vec<usize>,
    pub mirrored: bool,
    pub well_positioned: bool,
}

/// Every injective, adjacency-exact, label-exact map of `l` into `k` that
/// sends all finite faces of `l` to clockwise faces of `k`, or all of them to
/// counter-clockwise faces. Vertex ids of `k` are read as cartwheel
/// positions of degree `d` for the well-positioning tag.
pub fn brute_force_subconfig(l: &Drawing, k: &Drawing, d: usize) -> Vec<Embedding> {
    assert!(l.len() <= MAX_CONFIG_VERTICES, "oracle capped at {MAX_CONFIG_VERTICES} vertices");
    assert!(d <= MAX_SKELETON_DEGREE, "oracle capped at degree {MAX_SKELETON_DEGREE}");
    let faces = finite_faces(l);
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(l.len());
    extend(l, k, &mut map, &mut |m: &[usize]| {
        let positions: Vec<usize> = m.iter().map(|&v| k.id(v) as usize).collect();
        let wp = oracle_well_positioned(&positions, d);
        let cw = faces.iter().all(|&[a, b, c]| clockwise(k, m[a], m[b], m[c]));
        let ccw = faces.iter().all(|&[a, b, c]| clockwise(k, m[a], m[c], m[b]));
        if cw {
            out.push(Embedding { map: m.to_vec(), mirrored: false, well_positioned: wp });
        }
        if ccw && !(cw && faces.is_empty()) {
            out.push(Embedding { map: m.to_vec(), mirrored: true, well_positioned: wp });
        }
    });
    out
}

fn extend(l: &Drawing, k: &Drawing, map: &mut Vec<usize>, done: &mut dyn FnMut(&[usize])) {
    let i = map.len();
    if i == l.len() {
        done(map);
        return;
    }
    for w in 0..k.len() {
        if map.contains(&w) || k.gamma(w) != l.gamma(i) {
            continue;
        }
        if (0..i).all(|j| l.adjacent(i, j) == k.adjacent(w, map[j])) {
            map.push(w);
            extend(l, k, map, done);
            map.pop();
        }
    }
}

/// Seeded instance source. Equal seeds give equal streams.
pub struct InstanceGenerator {
    pub rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn pick_bounds(&mut self, free_weight: u32) -> Bounds {
        if self.rng.gen_ratio(free_weight.min(100), 100) {
            return Bounds::FREE;
        }
        loop {
            let lo = *LOWER_VALUES.choose(&mut self.rng).unwrap();
            let hi = *UPPER_VALUES.choose(&mut self.rng).unwrap();
            if lo <= hi {
                return Bounds::new(lo, hi);
            }
        }
    }

    /// A valid axle: spokes and hats random, fans only beside spokes fixed at
    /// a degree large enough to carry them.
    pub fn random_axle(&mut self, d: Degree) -> Axle {
        let dd = d.get();
        let mut b = vec![Bounds::FREE; 5 * dd];
        for i in 1..=2 * dd {
            b[i - 1] = self.pick_bounds(35);
        }
        for i in 1..=dd {
            let s = b[i - 1];
            if s.is_fixed() {
                for j in 2..=4 {
                    if s.lo as usize >= j + 4 && self.rng.gen_ratio(1, 3) {
                        b[j * dd + i - 1] = self.pick_bounds(0);
                    }
                }
            }
        }
        Axle::from_bounds(d, &b).expect("generator builds valid axles")
    }

    /// A valid reduced outlet with `1..=max_entries` entries and a nonzero
    /// value in `-3..=3`.
    pub fn random_outlet(&mut self, d: Degree, max_entries: usize) -> Outlet {
        let dd = d.get();
        let want = self.rng.gen_range(1..=max_entries.max(1));
        let mut entries: Vec<OutletEntry> = Vec::new();
        while entries.len() < want {
            let pos = self.rng.gen_range(1..=2 * dd);
            if entries.iter().any(|e| e.pos == pos) {
                continue;
            }
            let b = self.pick_bounds(0);
            if b.is_free() {
                continue;
            }
            entries.push(OutletEntry { pos, bounds: b });
            if pos <= dd && b.is_fixed() && b.lo >= 6 && self.rng.gen_ratio(1, 4) {
                let j = self.rng.gen_range(2..=(b.lo as usize - 4).min(4));
                let fb = self.pick_bounds(0);
                if !fb.is_free() {
                    entries.push(OutletEntry { pos: j * dd + pos, bounds: fb });
                }
            }
        }
        let mut value = 0;
        while value == 0 {
            value = self.rng.gen_range(-3..=3);
        }
        entries.sort();
        let t = Outlet::new(value, entries);
        debug_assert!(t.validate(d).is_empty());
        t
    }

    /// A random connected induced subdrawing of `k` with at most `max`
    /// vertices, all within distance two of the first and all labelled at
    /// most 11. `None` when the start vertex has too large a label.
    pub fn random_subdrawing(&mut self, k: &Drawing, max: usize) -> Option<Drawing> {
        let start = self.rng.gen_range(0..k.len());
        if k.gamma(start) > 11 {
            return None;
        }
        let want = self.rng.gen_range(1..=max.max(1));
        let mut dist = vec![usize::MAX; k.len()];
        dist[start] = 0;
        let mut keep = vec![start];
        while keep.len() < want {
            let frontier: Vec<usize> = keep
                .iter()
                .flat_map(|&v| k.neighbours(v).iter().map(move |&w| (v, w)))
                .filter(|&(v, w)| dist[w] == usize::MAX && dist[v] < 2 && k.gamma(w) <= 11)
                .map(|(_, w)| w)
                .collect();
            let Some(&w) = frontier.choose(&mut self.rng) else { break };
            dist[w] = k.neighbours(w).iter().map(|&u| dist[u]).min().unwrap() + 1;
            keep.push(w);
        }
        Some(k.induced(&keep))
    }

    pub fn random_outlets(&mut self, d: Degree, count: usize, max_entries: usize) -> Vec<Outlet> {
        (0..count).map(|_| self.random_outlet(d, max_entries)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cartwheel_core::cartwheel::cartwheel_drawing;

    fn d(n: usize) -> Degree {
        Degree::new(n).unwrap()
    }

    #[test]
    fn bound_examples() {
        let a = Axle::trivial(d(7));
        assert_eq!(brute_force_bound(&a, &[], &|_| false), Some(0));
        let plus = |lo, hi| Outlet::new(1, vec![OutletEntry::new(1, lo, hi)]);
        let exclusive = [(plus(5, 5), 1), (plus(6, 6), 1)];
        assert_eq!(brute_force_bound(&a, &exclusive, &|_| false), Some(1));
        let forced = a.with_bounds(1, Bounds::fixed(5));
        let minus = Outlet::new(-1, vec![OutletEntry::new(1, 5, 5)]);
        assert_eq!(brute_force_bound(&forced, &[(minus, 1)], &|_| false), Some(-1));
        assert_eq!(brute_force_bound(&a, &exclusive, &|_| true), None);
    }

    #[test]
    fn trivial_skeleton_single_vertex() {
        let k = cartwheel_drawing(d(7), &[None; 8], |p| if p == 0 { 7 } else { 12 });
        let single = Drawing::from_rotations(vec![1], vec![12], vec![vec![]], vec![vec![]]).unwrap();
        let e = brute_force_subconfig(&single, &k, 7);
        assert_eq!(e.len(), 14);
        assert!(e.iter().all(|e| !e.mirrored));
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        let mut g1 = InstanceGenerator::new(9);
        let mut g2 = InstanceGenerator::new(9);
        for n in 5..=11 {
            let a = g1.random_axle(d(n));
            assert!(a.is_valid());
            assert_eq!(a, g2.random_axle(d(n)));
            let t = g1.random_outlets(d(n), 5, 4);
            assert_eq!(t, g2.random_outlets(d(n), 5, 4));
            assert!(t.iter().all(|t| t.validate(d(n)).is_empty()));
        }
    }

    #[test]
    fn shift_matches_band_rotation() {
        assert_eq!(shift(7, 1, 7), 1);
        assert_eq!(shift(14, 1, 7), 8);
        assert_eq!(shift(15, 3, 7), 18);
    }
}
