//! The cartwheel drawing around a hub: hub, spokes, hats, and the fans of
//! spokes whose degree is pinned.

use crate::axle::Degree;
use crate::drawing::Drawing;

/// Hat between spokes `i - 1` and `i` (hat `2d` for spoke 1).
pub fn hat_before(i: usize, d: Degree) -> usize {
    if i == 1 {
        2 * d.get()
    } else {
        d.get() + i - 1
    }
}

/// Hat between spokes `i` and `i + 1`.
pub fn hat_after(i: usize, d: Degree) -> usize {
    d.get() + i
}

/// Spoke following `i` clockwise.
pub fn next_spoke(i: usize, d: Degree) -> usize {
    i % d.get() + 1
}

/// Positions of the fan vertices over spoke `i` pinned at degree `k`.
pub fn fans(i: usize, k: u8, d: Degree) -> impl Iterator<Item = usize> {
    let dd = d.get();
    (2..=(k as usize).saturating_sub(4)).map(move |j| j * dd + i)
}

/// Builds the drawing of hub, spokes, hats and fans.
///
/// `pinned[i]` (for spoke `i`, index 0 unused) is `Some(k)` with `5 ≤ k ≤ 8`
/// when spoke `i` is an interior vertex of degree `k`. Vertex ids are the
/// cartwheel positions; vertices are ordered hub, spokes, hats, then fans by
/// position. `gamma` gives the degree label of each position.
pub fn cartwheel_drawing(d: Degree, pinned: &[Option<u8>], gamma: impl Fn(usize) -> u8) -> Drawing {
    let dd = d.get();
    assert!(pinned.len() > dd);
    let mut positions: Vec<usize> = (0..=2 * dd).collect();
    for i in 1..=dd {
        if let Some(k) = pinned[i] {
            assert!((5..=8).contains(&k), "spoke pinned outside 5..=8");
            positions.extend(fans(i, k, d));
        }
    }
    positions[2 * dd + 1..].sort_unstable();
    let mut index = vec![usize::MAX; 5 * dd + 1];
    for (v, &p) in positions.iter().enumerate() {
        index[p] = v;
    }
    let mut faces = Vec::new();
    for i in 1..=dd {
        let s = index[i];
        let t = index[next_spoke(i, d)];
        faces.push([s, index[0], t]);
        faces.push([s, t, index[hat_after(i, d)]]);
        if let Some(k) = pinned[i] {
            let mut path = vec![hat_before(i, d)];
            path.extend(fans(i, k, d));
            path.push(hat_after(i, d));
            for w in path.windows(2) {
                faces.push([s, index[w[1]], index[w[0]]]);
            }
        }
    }
    let ids = positions.iter().map(|&p| p as u32).collect();
    let gammas = positions.iter().map(|&p| gamma(p)).collect();
    Drawing::from_faces(ids, gammas, &faces).expect("cartwheel faces form a near-triangulation")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d7() -> Degree {
        Degree::new(7).unwrap()
    }

    fn nbr_ids(g: &Drawing, pos: u32) -> Vec<u32> {
        let v = g.index(pos).unwrap();
        let mut out: Vec<u32> = g.neighbours(v).iter().map(|&u| g.id(u)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn bare_frame() {
        let g = cartwheel_drawing(d7(), &[None; 8], |_| 0);
        assert_eq!(g.len(), 15);
        assert!(g.is_interior(0));
        assert_eq!(g.degree(0), 7);
        assert_eq!(nbr_ids(&g, 8), vec![1, 2]);
        assert_eq!(nbr_ids(&g, 14), vec![1, 7]);
        // spoke 2 follows spoke 1 clockwise around the hub
        assert!(g.is_face(g.index(1).unwrap(), 0, g.index(2).unwrap()));
    }

    #[test]
    fn pinned_spokes() {
        let mut pinned = [None; 8];
        pinned[1] = Some(5);
        let g = cartwheel_drawing(d7(), &pinned, |_| 0);
        assert!(g.is_interior(1));
        assert_eq!(g.degree(1), 5);
        assert!(g.adjacent(g.index(14).unwrap(), g.index(8).unwrap()));
        pinned[1] = Some(7);
        let g = cartwheel_drawing(d7(), &pinned, |_| 0);
        assert_eq!(g.degree(1), 7);
        assert_eq!(nbr_ids(&g, 15), vec![1, 14, 22]);
        assert_eq!(nbr_ids(&g, 22), vec![1, 8, 15]);
        for d in 5..=11 {
            let d = Degree::new(d).unwrap();
            let pinned: Vec<_> = (0..=d.get()).map(|i| (i > 0).then_some(5 + (i % 4) as u8)).collect();
            let g = cartwheel_drawing(d, &pinned, |_| 0);
            for i in 1..=d.get() {
                let v = g.index(i as u32).unwrap();
                assert!(g.is_interior(v));
                assert_eq!(g.degree(v), 5 + i % 4);
            }
        }
    }
}
