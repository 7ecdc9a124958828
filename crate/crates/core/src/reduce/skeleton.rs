//! Skeletons: the concrete drawing searched for good configurations.

use crate::axle::{Axle, Bounds, Degree};
use crate::cartwheel::{cartwheel_drawing, hat_after, hat_before};
use crate::drawing::Drawing;

#[derive(Debug, Clone)]
pub struct Skeleton {
    /// The axle with every spoke of upper bound at most 8 pinned there.
    pub pinned: Axle,
    /// Vertex ids are cartwheel positions; labels are the pinned upper bounds.
    pub drawing: Drawing,
}

impl Skeleton {
    pub fn degree(&self) -> Degree {
        self.pinned.degree()
    }

    /// Cartwheel position of drawing vertex `v`.
    #[inline]
    pub fn position(&self, v: usize) -> usize {
        self.drawing.id(v) as usize
    }
}

pub fn pinned_axle(a: &Axle) -> Axle {
    let mut b = *a;
    for i in 1..=a.degree().get() {
        let u = a.hi(i);
        if u <= 8 {
            b = b.with_bounds(i, Bounds::fixed(u));
        }
    }
    b
}

pub fn skeleton_of(a: &Axle) -> Skeleton {
    let b = pinned_axle(a);
    let d = b.degree();
    let pinned: Vec<Option<u8>> =
        (0..=d.get()).map(|i| (i > 0 && b.bounds(i).is_fixed()).then(|| b.lo(i))).collect();
    let drawing = cartwheel_drawing(d, &pinned, |p| b.hi(p));
    debug_assert!(drawing.validate().is_ok());
    Skeleton { pinned: b, drawing }
}

/// For every spoke outside `image` (a set of positions), at least one of its
/// two hats is outside too.
pub fn well_positioned(image: &[usize], d: Degree) -> bool {
    let mut present = vec![false; 5 * d.get() + 1];
    for &p in image {
        present[p] = true;
    }
    (1..=d.get()).all(|i| present[i] || !present[hat_before(i, d)] || !present[hat_after(i, d)])
}
