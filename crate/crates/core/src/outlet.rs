//! Outlets: the degree-`d` shadow of a discharging rule at the hub.

use std::fmt;

use thiserror::Error;

use crate::axle::{pos_add, Axle, AxleError, Bounds, Degree, LOWER_VALUES, UPPER_VALUES};

/// One `(p, l, u)` triple of an outlet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutletEntry {
    pub pos: usize,
    pub bounds: Bounds,
}

impl OutletEntry {
    pub const fn new(pos: usize, lo: u8, hi: u8) -> Self {
        OutletEntry { pos, bounds: Bounds { lo, hi } }
    }
}

impl fmt::Debug for OutletEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.pos, self.bounds.lo, self.bounds.hi)
    }
}

/// A signed value together with position constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Outlet {
    value: i32,
    entries: Vec<OutletEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutletViolation {
    ZeroValue,
    /// Position outside `1..=5d`.
    T1 { pos: usize },
    /// `lo > hi`.
    T2 { pos: usize },
    /// Bound outside the admissible value sets.
    T3 { pos: usize },
    /// Fan entry without a fixed spoke entry of sufficient degree.
    T4 { pos: usize },
    /// Repeated position.
    Duplicate { pos: usize },
    /// Entry equal to `(5, 12)`.
    FreeEntry { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OutletError {
    #[error("outlet has value {0}, expected +1")]
    NotUnitValue(i32),
    #[error("invalid outlet: {0:?}")]
    Invalid(Vec<OutletViolation>),
    #[error(transparent)]
    Axle(#[from] AxleError),
}

impl Outlet {
    /// Entries are kept in the given order; use [`Outlet::validate`] to check them.
    pub fn new(value: i32, entries: Vec<OutletEntry>) -> Self {
        Outlet { value, entries }
    }

    #[inline]
    pub fn value(&self) -> i32 {
        self.value
    }

    #[inline]
    pub fn entries(&self) -> &[OutletEntry] {
        &self.entries
    }

    /// Checks the outlet clauses and reducedness.
    pub fn validate(&self, d: Degree) -> Vec<OutletViolation> {
        let dd = d.get();
        let mut out = Vec::new();
        if self.value == 0 {
            out.push(OutletViolation::ZeroValue);
        }
        for (k, e) in self.entries.iter().enumerate() {
            let pos = e.pos;
            if pos == 0 || pos > 5 * dd {
                out.push(OutletViolation::T1 { pos });
                continue;
            }
            if e.bounds.lo > e.bounds.hi {
                out.push(OutletViolation::T2 { pos });
            }
            if !LOWER_VALUES.contains(&e.bounds.lo) || !UPPER_VALUES.contains(&e.bounds.hi) {
                out.push(OutletViolation::T3 { pos });
            }
            if pos > 2 * dd {
                let j = (pos - 1) / dd;
                let spoke = (pos - 1) % dd + 1;
                let anchored = self.entries.iter().any(|t| {
                    t.pos == spoke && t.bounds.is_fixed() && t.bounds.lo as usize >= j + 4
                });
                if !anchored {
                    out.push(OutletViolation::T4 { pos });
                }
            }
            if self.entries[..k].iter().any(|t| t.pos == pos) {
                out.push(OutletViolation::Duplicate { pos });
            }
            if e.bounds.is_free() {
                out.push(OutletViolation::FreeEntry { pos });
            }
        }
        out
    }

    /// The reduced, value `+1` outlet corresponding to a fan-free axle.
    pub fn from_axle(axle: &Axle) -> Result<Outlet, OutletError> {
        if !axle.is_fan_free() {
            return Err(AxleError::NotFanFree.into());
        }
        let entries = (1..=axle.degree().positions())
            .filter(|&i| !axle.bounds(i).is_free())
            .map(|i| OutletEntry { pos: i, bounds: axle.bounds(i) })
            .collect();
        Ok(Outlet { value: 1, entries })
    }

    /// The loosest axle satisfying every entry of a value `+1` outlet.
    pub fn to_axle(&self, d: Degree) -> Result<Axle, OutletError> {
        if self.value != 1 {
            return Err(OutletError::NotUnitValue(self.value));
        }
        let violations = self.validate(d);
        if !violations.is_empty() {
            return Err(OutletError::Invalid(violations));
        }
        let mut axle = Axle::trivial(d);
        for e in &self.entries {
            axle = axle.with_bounds(e.pos, e.bounds);
        }
        let violations = axle.validate();
        if !violations.is_empty() {
            return Err(AxleError::Invalid(violations).into());
        }
        Ok(axle)
    }
}

/// An outlet placed at spoke `x`.
#[derive(Debug, Clone, Copy)]
pub struct PositionedOutlet<'a> {
    pub outlet: &'a Outlet,
    pub x: usize,
}

impl<'a> PositionedOutlet<'a> {
    pub fn new(outlet: &'a Outlet, x: usize) -> Self {
        PositionedOutlet { outlet, x }
    }

    /// Entries moved to their absolute positions `p ⊕_d (x - 1)`.
    pub fn shifted(&self, d: Degree) -> impl Iterator<Item = OutletEntry> + 'a {
        let shift = self.x - 1;
        self.outlet
            .entries
            .iter()
            .map(move |e| OutletEntry { pos: pos_add(e.pos, shift, d), bounds: e.bounds })
    }

    /// Every entry interval contains the axle's interval at the shifted position.
    pub fn enforced_by(&self, axle: &Axle) -> bool {
        self.shifted(axle.degree()).all(|e| axle.bounds(e.pos).within(e.bounds))
    }

    /// Every entry interval meets the axle's interval at the shifted position.
    pub fn permitted_by(&self, axle: &Axle) -> bool {
        self.shifted(axle.degree()).all(|e| axle.bounds(e.pos).overlaps(e.bounds))
    }

    /// `A ∧ (T, x)`, or `None` when some interval empties.
    pub fn wedge(&self, axle: &Axle) -> Option<Axle> {
        let mut out = *axle;
        for e in self.shifted(axle.degree()) {
            let cur = out.bounds(e.pos);
            let b = Bounds::new(cur.lo.max(e.bounds.lo), cur.hi.min(e.bounds.hi));
            if b.lo > b.hi {
                return None;
            }
            out = out.with_bounds(e.pos, b);
        }
        debug_assert!(out.is_valid(), "outlet wedge broke axle clauses: {out:?}");
        Some(out)
    }
}

/// An outlet with its entries already shifted to absolute positions.
///
/// This is the hot-path form used by the bound checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedOutlet {
    pub value: i32,
    pub entries: Vec<OutletEntry>,
}

impl PlacedOutlet {
    pub fn new(po: PositionedOutlet<'_>, d: Degree) -> Self {
        PlacedOutlet { value: po.outlet.value, entries: po.shifted(d).collect() }
    }

    #[inline]
    pub fn enforced_by(&self, axle: &Axle) -> bool {
        self.entries.iter().all(|e| axle.bounds(e.pos).within(e.bounds))
    }

    #[inline]
    pub fn permitted_by(&self, axle: &Axle) -> bool {
        self.entries.iter().all(|e| axle.bounds(e.pos).overlaps(e.bounds))
    }

    pub fn wedge(&self, axle: &Axle) -> Option<Axle> {
        let mut out = *axle;
        for e in &self.entries {
            let cur = out.bounds(e.pos);
            let b = Bounds::new(cur.lo.max(e.bounds.lo), cur.hi.min(e.bounds.hi));
            if b.lo > b.hi {
                return None;
            }
            out = out.with_bounds(e.pos, b);
        }
        Some(out)
    }
}
