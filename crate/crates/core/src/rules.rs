//! Discharging rules: parsing, the fixed vertex template, and outlet
//! derivation by embedding a rule into cartwheel coordinates.

use std::fmt;

use thiserror::Error;

use crate::axle::{Bounds, Degree};
use crate::cartwheel::cartwheel_drawing;
use crate::input::{content_lines, parse_nums, InputError};
use crate::outlet::{Outlet, OutletEntry, OutletViolation};

/// Number of template vertices `v0..v16`.
pub const TEMPLATE_SIZE: usize = 17;

/// Parents of each template vertex: `v_i = T(v_a, v_b)`, so `(v_a, v_b, v_i)`
/// is a clockwise triangle. Entries 0 and 1 are unused.
pub const TEMPLATE: [(usize, usize); TEMPLATE_SIZE] = [
    (0, 0),
    (0, 0),
    (0, 1),
    (1, 0),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 3),
    (4, 2),
    (3, 5),
    (8, 2),
    (3, 9),
    (0, 4),
    (0, 12),
    (5, 0),
    (6, 1),
    (15, 1),
];

/// One rule: degree bounds for `v0`, `v1` and any of `v2..v16`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleSpec {
    vertices: [Option<Bounds>; TEMPLATE_SIZE],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleSpecError {
    #[error("vertex {0} has bounds outside 5 <= beta <= delta <= 12")]
    BadBounds(usize),
    #[error("vertex index {0} is outside 2..=16")]
    BadIndex(usize),
    #[error("vertex {0} is listed twice")]
    Duplicate(usize),
    #[error("vertex {0} is listed without its parents {1} and {2}")]
    MissingParent(usize, usize, usize),
}

impl RuleSpec {
    /// `extra` lists `(i, beta, delta)` for template vertices `i ≥ 2`.
    pub fn new(v0: Bounds, v1: Bounds, extra: &[(usize, Bounds)]) -> Result<Self, RuleSpecError> {
        let mut vertices = [None; TEMPLATE_SIZE];
        vertices[0] = Some(v0);
        vertices[1] = Some(v1);
        for &(i, b) in extra {
            if !(2..TEMPLATE_SIZE).contains(&i) {
                return Err(RuleSpecError::BadIndex(i));
            }
            if vertices[i].is_some() {
                return Err(RuleSpecError::Duplicate(i));
            }
            vertices[i] = Some(b);
        }
        for (i, v) in vertices.iter().enumerate() {
            if let Some(b) = v {
                if !(5 <= b.lo && b.lo <= b.hi && b.hi <= 12) {
                    return Err(RuleSpecError::BadBounds(i));
                }
            }
        }
        for i in 2..TEMPLATE_SIZE {
            let (a, b) = TEMPLATE[i];
            if vertices[i].is_some() && (vertices[a].is_none() || vertices[b].is_none()) {
                return Err(RuleSpecError::MissingParent(i, a, b));
            }
        }
        Ok(RuleSpec { vertices })
    }

    pub fn bounds(&self, i: usize) -> Option<Bounds> {
        self.vertices[i]
    }

    /// Indices of the listed vertices, ascending.
    pub fn present(&self) -> impl Iterator<Item = usize> + '_ {
        (0..TEMPLATE_SIZE).filter(|&i| self.vertices[i].is_some())
    }

    pub fn graph(&self) -> RuleGraph {
        let vertices: Vec<usize> = self.present().collect();
        let mut edges = vec![(0, 1)];
        let mut triangles = Vec::new();
        for &i in &vertices[2..] {
            let (a, b) = TEMPLATE[i];
            triangles.push([a, b, i]);
            for (x, y) in [(a, b), (a, i), (b, i)] {
                let e = (x.min(y), x.max(y));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        edges.sort_unstable();
        RuleGraph { vertices, edges, triangles }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v0 = self.vertices[0].unwrap();
        let v1 = self.vertices[1].unwrap();
        write!(f, "rule {} {} {} {}", v0.lo, v0.hi, v1.lo, v1.hi)?;
        for i in 2..TEMPLATE_SIZE {
            if let Some(b) = self.vertices[i] {
                write!(f, " {} {} {}", i, b.lo, b.hi)?;
            }
        }
        Ok(())
    }
}

/// The oriented graph reconstructed from a rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleGraph {
    pub vertices: Vec<usize>,
    /// Undirected edges as `(min, max)`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Clockwise triangles `(parent_a, parent_b, child)` in template order.
    pub triangles: Vec<[usize; 3]>,
}

/// Parses a rules file: one `rule b0 d0 b1 d1 [i bi di]*` per line.
pub fn parse_rules(text: &str) -> Result<Vec<RuleSpec>, InputError> {
    let mut out = Vec::new();
    for (line, body) in content_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != "rule" {
            return Err(InputError::new(line, format!("expected `rule`, found `{}`", toks[0])));
        }
        let nums: Vec<usize> = parse_nums(&toks[1..], line, "an integer")?;
        if nums.len() < 4 || (nums.len() - 4) % 3 != 0 {
            return Err(InputError::new(line, "rule needs 4 bounds followed by index/bound triples"));
        }
        let b = |k: usize| -> Result<Bounds, InputError> {
            let (lo, hi) = (nums[k], nums[k + 1]);
            if lo > 12 || hi > 12 {
                return Err(InputError::new(line, format!("bound {lo} {hi} outside 5..12")));
            }
            Ok(Bounds::new(lo as u8, hi as u8))
        };
        let mut extra = Vec::new();
        for k in (4..nums.len()).step_by(3) {
            extra.push((nums[k], b(k + 1)?));
        }
        let spec = RuleSpec::new(b(0)?, b(2)?, &extra)
            .map_err(|e| InputError::new(line, e.to_string()))?;
        out.push(spec);
    }
    Ok(out)
}

/// Which endpoint of the rule sits at the hub.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutletKind {
    /// Hub is the receiving vertex `v1`; value `+1`.
    Target,
    /// Hub is the sending vertex `v0`; value `-1`.
    Source,
}

impl OutletKind {
    pub fn tag(self) -> &'static str {
        match self {
            OutletKind::Target => "T",
            OutletKind::Source => "T'",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("rule {rule} ({kind}): vertex {vertex} falls outside the cartwheel", kind = .kind.tag())]
    Outside { rule: usize, kind: OutletKind, vertex: usize },
    #[error("rule {rule} ({kind}): vertices {vertex} and {other} land on position {pos}", kind = .kind.tag())]
    Collision { rule: usize, kind: OutletKind, vertex: usize, other: usize, pos: usize },
    #[error("rule {rule} ({kind}): derived outlet is invalid: {violations:?}", kind = .kind.tag())]
    Invalid { rule: usize, kind: OutletKind, violations: Vec<OutletViolation> },
}

/// A derived outlet with its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    /// 1-based rule index in file order.
    pub rule: usize,
    pub kind: OutletKind,
    pub outlet: Outlet,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "outlet {} {} {}", self.rule, self.kind.tag(), self.outlet.value())?;
        for e in self.outlet.entries() {
            write!(f, " {} {} {}", e.pos, e.bounds.lo, e.bounds.hi)?;
        }
        Ok(())
    }
}

/// The outlets of every rule at one degree, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutletTable {
    pub degree: Degree,
    pub entries: Vec<TableEntry>,
}

impl OutletTable {
    pub fn outlets(&self) -> impl Iterator<Item = &Outlet> {
        self.entries.iter().map(|e| &e.outlet)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One `outlet ...` line per entry.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }
}

/// Derives `T` and `T'` for every rule at degree `d`.
pub fn derive_outlets(rules: &[RuleSpec], d: Degree) -> Result<OutletTable, DeriveError> {
    let mut entries = Vec::new();
    for (k, spec) in rules.iter().enumerate() {
        for kind in [OutletKind::Target, OutletKind::Source] {
            if let Some(outlet) = derive_one(spec, k + 1, kind, d)? {
                entries.push(TableEntry { rule: k + 1, kind, outlet });
            }
        }
    }
    Ok(OutletTable { degree: d, entries })
}

fn derive_one(
    spec: &RuleSpec,
    rule: usize,
    kind: OutletKind,
    d: Degree,
) -> Result<Option<Outlet>, DeriveError> {
    let (hub, other, value) = match kind {
        OutletKind::Target => (1, 0, 1),
        OutletKind::Source => (0, 1, -1),
    };
    let hub_bounds = spec.bounds(hub).unwrap();
    let dd = d.get() as u8;
    if !(hub_bounds.lo <= dd && dd <= hub_bounds.hi) {
        return Ok(None);
    }
    let mut pos: [Option<usize>; TEMPLATE_SIZE] = [None; TEMPLATE_SIZE];
    pos[hub] = Some(0);
    pos[other] = Some(1);
    let mut pinned = vec![None; d.get() + 1];
    let pin = |pinned: &mut Vec<Option<u8>>, p: usize, b: Bounds| {
        if (1..=d.get()).contains(&p) && b.is_fixed() && b.lo <= 8 {
            pinned[p] = Some(b.lo);
        }
    };
    pin(&mut pinned, 1, spec.bounds(other).unwrap());
    let mut frame = cartwheel_drawing(d, &pinned, |_| 0);
    for i in spec.present().skip(2) {
        let (a, b) = TEMPLATE[i];
        let ua = frame.index(pos[a].unwrap() as u32).unwrap();
        let ub = frame.index(pos[b].unwrap() as u32).unwrap();
        let w = frame
            .third(ua, ub)
            .ok_or(DeriveError::Outside { rule, kind, vertex: i })?;
        let p = frame.id(w) as usize;
        if let Some(j) = (0..i).find(|&j| pos[j] == Some(p)) {
            return Err(DeriveError::Collision { rule, kind, vertex: i, other: j, pos: p });
        }
        pos[i] = Some(p);
        let bi = spec.bounds(i).unwrap();
        if (1..=d.get()).contains(&p) && pinned[p].is_none() && bi.is_fixed() && bi.lo <= 8 {
            pin(&mut pinned, p, bi);
            frame = cartwheel_drawing(d, &pinned, |_| 0);
        }
    }
    let mut entries: Vec<OutletEntry> = spec
        .present()
        .filter(|&i| i != hub)
        .map(|i| OutletEntry { pos: pos[i].unwrap(), bounds: spec.bounds(i).unwrap() })
        .filter(|e| !e.bounds.is_free())
        .collect();
    entries.sort_unstable();
    let outlet = Outlet::new(value, entries);
    let violations = outlet.validate(d);
    if !violations.is_empty() {
        return Err(DeriveError::Invalid { rule, kind, violations });
    }
    Ok(Some(outlet))
}

/// Parses a golden outlet table.
pub fn parse_outlet_table(text: &str, d: Degree) -> Result<OutletTable, InputError> {
    let mut entries = Vec::new();
    for (line, body) in content_lines(text) {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != "outlet" || toks.len() < 4 {
            return Err(InputError::new(line, "expected `outlet <rule> <T|T'> <value> [p lo hi]*`"));
        }
        let rule = parse_nums::<usize>(&toks[1..2], line, "a rule index")?[0];
        let kind = match toks[2] {
            "T" => OutletKind::Target,
            "T'" => OutletKind::Source,
            other => return Err(InputError::new(line, format!("unknown outlet kind `{other}`"))),
        };
        let value = parse_nums::<i32>(&toks[3..4], line, "a value")?[0];
        let nums: Vec<u8> = parse_nums(&toks[4..], line, "an entry field")?;
        if nums.len() % 3 != 0 {
            return Err(InputError::new(line, "entries must be position/lo/hi triples"));
        }
        let es = nums
            .chunks(3)
            .map(|c| OutletEntry::new(c[0] as usize, c[1], c[2]))
            .collect();
        entries.push(TableEntry { rule, kind, outlet: Outlet::new(value, es) });
    }
    Ok(OutletTable { degree: d, entries })
}

/// Line-level differences between a derived and a golden table.
pub fn diff_tables(derived: &OutletTable, golden: &OutletTable) -> Vec<String> {
    let mut out = Vec::new();
    let n = derived.entries.len().max(golden.entries.len());
    for k in 0..n {
        match (derived.entries.get(k), golden.entries.get(k)) {
            (Some(a), Some(b)) if a == b => {}
            (Some(a), Some(b)) => out.push(format!("entry {}: derived `{a}`, golden `{b}`", k + 1)),
            (Some(a), None) => out.push(format!("entry {}: derived `{a}`, golden has none", k + 1)),
            (None, Some(b)) => out.push(format!("entry {}: golden `{b}`, derived has none", k + 1)),
            (None, None) => unreachable!(),
        }
    }
    out
}
