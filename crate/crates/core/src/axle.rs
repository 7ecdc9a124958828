//! Exact interval algebra over cartwheel positions.
//!
//! Positions of a cartwheel with hub degree `d` are numbered `0..=5d`: the
//! hub is `0`, spokes are `1..=d`, hats `d+1..=2d` and the three fan bands
//! `jd+1..=(j+1)d` for `j = 2, 3, 4`. An [`Axle`] stores an interval of
//! admissible vertex degrees for every position.

use std::fmt;

use thiserror::Error;

/// Smallest hub degree an axle may have.
pub const MIN_DEGREE: usize = 5;
/// Largest hub degree an axle may have.
pub const MAX_DEGREE: usize = 11;
/// Capacity of the bound array: hub plus `5 * MAX_DEGREE` positions.
pub const MAX_POSITIONS: usize = 5 * MAX_DEGREE + 1;

/// Admissible lower bounds.
pub const LOWER_VALUES: [u8; 5] = [5, 6, 7, 8, 9];
/// Admissible upper bounds; `12` stands for "12 or more".
pub const UPPER_VALUES: [u8; 5] = [5, 6, 7, 8, 12];
/// Admissible thresholds of a non-null condition.
pub const CONDITION_THRESHOLDS: [i32; 8] = [-8, -7, -6, -5, 6, 7, 8, 9];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxleError {
    #[error("degree {0} outside {MIN_DEGREE}..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),
    #[error("position {n} outside 1..={max}")]
    PositionOutOfRange { n: usize, max: usize },
    #[error("threshold {0} is not a legal condition threshold")]
    BadThreshold(i32),
    #[error("the null condition cannot be wedged or negated")]
    NullCondition,
    #[error("condition {0} is not compatible with the axle")]
    Incompatible(Condition),
    #[error("axle is not fan-free")]
    NotFanFree,
    #[error("invalid axle: {0:?}")]
    Invalid(Vec<Violation>),
}

/// Hub degree of a cartwheel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(u8);

impl Degree {
    pub fn new(d: usize) -> Result<Self, AxleError> {
        if (MIN_DEGREE..=MAX_DEGREE).contains(&d) {
            Ok(Degree(d as u8))
        } else {
            Err(AxleError::DegreeOutOfRange(d))
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Number of non-hub positions, `5d`.
    #[inline]
    pub fn positions(self) -> usize {
        5 * self.get()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Classification of a cartwheel position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Hub,
    Spoke,
    Hat,
    /// Fan band `j` covers `jd+1..=(j+1)d`, `j` in `2..=4`.
    Fan(u8),
}

/// Band of position `n` for hub degree `d`. Panics if `n > 5d`.
pub fn band(n: usize, d: Degree) -> Band {
    let d = d.get();
    assert!(n <= 5 * d, "position {n} beyond 5d");
    match n {
        0 => Band::Hub,
        n if n <= d => Band::Spoke,
        n if n <= 2 * d => Band::Hat,
        n => Band::Fan(((n - 1) / d) as u8),
    }
}

/// The spoke a position sits over: `((n-1) mod d) + 1` for `n >= 1`.
#[inline]
pub fn spoke_of(n: usize, d: Degree) -> usize {
    (n - 1) % d.get() + 1
}

/// `i ⊕_d x`: advance `x` steps within the band of `i`, wrapping.
#[inline]
pub fn pos_add(i: usize, x: usize, d: Degree) -> usize {
    let d = d.get();
    debug_assert!(i >= 1 && x <= d);
    if x + (i - 1) % d < d {
        i + x
    } else {
        i + x - d
    }
}

/// A closed interval of vertex degrees.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bounds {
    pub lo: u8,
    pub hi: u8,
}

impl Bounds {
    /// The unconstrained interval `[5, 12]`.
    pub const FREE: Bounds = Bounds { lo: 5, hi: 12 };

    pub const fn new(lo: u8, hi: u8) -> Self {
        Bounds { lo, hi }
    }

    pub const fn fixed(k: u8) -> Self {
        Bounds { lo: k, hi: k }
    }

    #[inline]
    pub fn is_free(self) -> bool {
        self == Self::FREE
    }

    #[inline]
    pub fn is_fixed(self) -> bool {
        self.lo == self.hi
    }

    /// `self ⊆ other`.
    #[inline]
    pub fn within(self, other: Bounds) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    #[inline]
    pub fn overlaps(self, other: Bounds) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Lower and upper values drawn from the admissible sets.
    pub fn is_admissible(self) -> bool {
        self.lo <= self.hi && LOWER_VALUES.contains(&self.lo) && UPPER_VALUES.contains(&self.hi)
    }
}

impl fmt::Debug for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A violated axle clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `lo > hi` at `index`.
    A1 { index: usize },
    /// Bound outside the admissible value sets at `index`.
    A2 { index: usize },
    /// Spoke not fixed while the fan entry `index` over it is constrained.
    A3 { spoke: usize, index: usize },
}

/// A position/threshold constraint, or the null condition `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Condition {
    pub n: usize,
    pub m: i32,
}

impl Condition {
    pub const NULL: Condition = Condition { n: 0, m: 0 };

    /// Checked constructor for a non-null condition of degree `d`.
    pub fn new(n: usize, m: i32, d: Degree) -> Result<Self, AxleError> {
        if n == 0 || n > d.positions() {
            return Err(AxleError::PositionOutOfRange { n, max: d.positions() });
        }
        if !CONDITION_THRESHOLDS.contains(&m) {
            return Err(AxleError::BadThreshold(m));
        }
        Ok(Condition { n, m })
    }

    #[inline]
    pub fn is_null(self) -> bool {
        self == Self::NULL
    }

    /// `¬(n, m) = (n, 1 - m)`.
    pub fn negate(self) -> Result<Condition, AxleError> {
        if self.is_null() {
            return Err(AxleError::NullCondition);
        }
        Ok(Condition { n: self.n, m: 1 - self.m })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// Lower/upper degree bounds for every position of a cartwheel of degree `d`.
///
/// Axles are small `Copy` values; every operation returns a new axle.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Axle {
    degree: Degree,
    bounds: [Bounds; MAX_POSITIONS],
}

impl Axle {
    /// The trivial axle `Ω_d`.
    pub fn trivial(d: Degree) -> Self {
        let mut bounds = [Bounds::FREE; MAX_POSITIONS];
        bounds[0] = Bounds::fixed(d.get() as u8);
        Axle { degree: d, bounds }
    }

    /// Builds an axle from the bounds of positions `1..=5d` and validates it.
    pub fn from_bounds(d: Degree, bounds: &[Bounds]) -> Result<Self, AxleError> {
        if bounds.len() != d.positions() {
            return Err(AxleError::PositionOutOfRange { n: bounds.len(), max: d.positions() });
        }
        let mut axle = Axle::trivial(d);
        axle.bounds[1..=d.positions()].copy_from_slice(bounds);
        let violations = axle.validate();
        if violations.is_empty() {
            Ok(axle)
        } else {
            Err(AxleError::Invalid(violations))
        }
    }

    #[inline]
    pub fn degree(&self) -> Degree {
        self.degree
    }

    #[inline]
    pub fn bounds(&self, i: usize) -> Bounds {
        self.bounds[i]
    }

    #[inline]
    pub fn lo(&self, i: usize) -> u8 {
        self.bounds[i].lo
    }

    #[inline]
    pub fn hi(&self, i: usize) -> u8 {
        self.bounds[i].hi
    }

    /// Bounds of positions `0..=5d`.
    pub fn entries(&self) -> &[Bounds] {
        &self.bounds[..=self.degree.positions()]
    }

    /// Replaces one entry without validation. Callers are responsible for
    /// keeping the axle clauses; [`Axle::validate`] reports what broke.
    pub fn with_bounds(mut self, i: usize, b: Bounds) -> Self {
        assert!(i >= 1 && i <= self.degree.positions());
        self.bounds[i] = b;
        self
    }

    /// Every violated clause, in index order.
    pub fn validate(&self) -> Vec<Violation> {
        let d = self.degree.get();
        let mut out = Vec::new();
        for i in 1..=5 * d {
            let b = self.bounds[i];
            if b.lo > b.hi {
                out.push(Violation::A1 { index: i });
            }
            if !LOWER_VALUES.contains(&b.lo) || !UPPER_VALUES.contains(&b.hi) {
                out.push(Violation::A2 { index: i });
            }
        }
        for i in 1..=d {
            if !self.bounds[i].is_fixed() {
                for j in 2..=4 {
                    if !self.bounds[j * d + i].is_free() {
                        out.push(Violation::A3 { spoke: i, index: j * d + i });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Compatibility of a non-null condition.
    pub fn compatible(&self, c: Condition) -> bool {
        let d = self.degree.get();
        if c.is_null() || c.n == 0 || c.n > 5 * d {
            return false;
        }
        let b = self.bounds[c.n];
        let (lo, hi) = (b.lo as i32, b.hi as i32);
        let interval_ok = if c.m < 0 {
            lo <= -c.m && -c.m < hi
        } else {
            lo < c.m && c.m <= hi
        };
        if !interval_ok {
            return false;
        }
        if c.n <= 2 * d {
            return true;
        }
        let j = (c.n - 1) / d;
        let spoke = self.bounds[spoke_of(c.n, self.degree)];
        spoke.is_fixed() && spoke.lo as usize >= j + 4
    }

    /// `A ∧ c`.
    pub fn wedge(&self, c: Condition) -> Result<Axle, AxleError> {
        if c.is_null() {
            return Err(AxleError::NullCondition);
        }
        if !self.compatible(c) {
            return Err(AxleError::Incompatible(c));
        }
        let mut out = *self;
        if c.m > 0 {
            out.bounds[c.n].lo = c.m as u8;
        } else {
            out.bounds[c.n].hi = (-c.m) as u8;
        }
        debug_assert!(out.is_valid(), "wedge broke axle clauses");
        Ok(out)
    }

    pub fn is_fan_free(&self) -> bool {
        let d = self.degree.get();
        self.bounds[2 * d + 1..=5 * d].iter().all(|b| b.is_free())
    }

    /// `τA`: rotate spokes and hats by one unit.
    pub fn rotate(&self) -> Result<Axle, AxleError> {
        if !self.is_fan_free() {
            return Err(AxleError::NotFanFree);
        }
        let d = self.degree;
        let mut out = Axle::trivial(d);
        for i in 1..=2 * d.get() {
            out.bounds[pos_add(i, 1, d)] = self.bounds[i];
        }
        Ok(out)
    }

    /// `σA`: reflect spokes and hats.
    pub fn reflect(&self) -> Result<Axle, AxleError> {
        if !self.is_fan_free() {
            return Err(AxleError::NotFanFree);
        }
        let mut out = *self;
        for i in 1..=2 * self.degree.get() {
            out.bounds[i] = self.bounds[reflect_index(i, self.degree)];
        }
        Ok(out)
    }

    /// Non-free entries as `index:lo-hi`, comma separated; `*` for `Ω_d`.
    pub fn digest(&self) -> String {
        let parts: Vec<String> = (1..=self.degree.positions())
            .filter(|&i| !self.bounds[i].is_free())
            .map(|i| format!("{}:{}-{}", i, self.bounds[i].lo, self.bounds[i].hi))
            .collect();
        if parts.is_empty() {
            "*".to_string()
        } else {
            parts.join(",")
        }
    }
}

impl fmt::Debug for Axle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Axle(d={}; {})", self.degree, self.digest())
    }
}

/// Index permutation of `σ` on positions `0..=5d` (an involution).
pub fn reflect_index(i: usize, d: Degree) -> usize {
    let d = d.get();
    match i {
        i if (1..=d).contains(&i) => d + 1 - i,
        i if (d + 1..2 * d).contains(&i) => 3 * d - i,
        i => i,
    }
}

/// Where entry `i` of a fan-free axle `M` lands in `τ^k σ^ε M`, for
/// `i` in `0..=2d`.
pub fn symmetry_image(i: usize, k: usize, reflect: bool, d: Degree) -> usize {
    if i == 0 {
        return 0;
    }
    let j = if reflect { reflect_index(i, d) } else { i };
    pos_add(j, k % d.get(), d)
}
