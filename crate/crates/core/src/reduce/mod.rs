//! Reducibility: good configurations, skeletons, questions and the
//! decrement-stack loop.

pub mod config;
pub mod question;
pub mod skeleton;

use std::fmt;

use thiserror::Error;

pub use config::{lint_database, load_database, parse_configurations, ConfigError, GoodConfiguration};
pub use question::{check_iso, for_each_answer, make_question, Query, Question};
pub use skeleton::{skeleton_of, well_positioned, Skeleton};

use crate::axle::{Axle, Bounds};
use crate::hubcap::Reducer;

/// A positive answer that passed well-positioning and the isomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Appearance {
    /// Index into the database.
    pub config: usize,
    /// Index into the configuration's enhancements.
    pub enhancement: usize,
    /// Whether the reflected question produced it.
    pub mirrored: bool,
    /// Skeleton vertex of each enhancement vertex.
    pub map: Vec<usize>,
    /// Cartwheel position of each configuration vertex.
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("configuration `{config}` answered a question but failed the isomorphism check on {axle:?}")]
pub struct InternalError {
    pub config: String,
    pub axle: Axle,
}

/// Searches the database in order for a well-positioned appearance in the
/// skeleton of `a`. Both the question and its reflection are tried for every
/// enhancement, and every answer is examined until one is well-positioned.
pub fn semi_reducible(a: &Axle, db: &[GoodConfiguration]) -> Result<Option<Appearance>, InternalError> {
    if db.is_empty() {
        return Ok(None);
    }
    let k = skeleton_of(a);
    let d = a.degree();
    for (ci, c) in db.iter().enumerate() {
        let n = c.drawing.len();
        for (ei, e) in c.enhancements.iter().enumerate() {
            for (mirrored, q) in [(false, &e.question), (true, &e.reflected)] {
                let mut hit: Option<Appearance> = None;
                let mut broken = false;
                for_each_answer(q, &k.drawing, |f| {
                    let positions: Vec<usize> = f[..n].iter().map(|&v| k.position(v)).collect();
                    if !well_positioned(&positions, d) {
                        return false;
                    }
                    if !check_iso(f, &c.drawing, &k.drawing, mirrored) {
                        broken = true;
                        return true;
                    }
                    hit = Some(Appearance {
                        config: ci,
                        enhancement: ei,
                        mirrored,
                        map: f.to_vec(),
                        positions,
                    });
                    true
                });
                if broken {
                    return Err(InternalError { config: c.name.clone(), axle: *a });
                }
                if hit.is_some() {
                    return Ok(hit);
                }
            }
        }
    }
    Ok(None)
}

/// One decrement: position `pos` had its upper bound lowered to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decrement {
    pub pos: usize,
    pub hi: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceEvent {
    Pop { axle: Axle, depth: usize },
    Found { config: String, positions: Vec<usize> },
    Push { pos: usize, hi: u8 },
    Fail,
}

impl fmt::Display for ReduceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceEvent::Pop { axle, depth } => write!(f, "pop {depth} {}", axle.digest()),
            ReduceEvent::Found { config, positions } => {
                write!(f, "found {config} at")?;
                for p in positions {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            ReduceEvent::Push { pos, hi } => write!(f, "push {pos} {hi}"),
            ReduceEvent::Fail => write!(f, "fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceFailure {
    #[error("axle {axle:?} is not semi-reducible")]
    NotSemiReducible { axle: Axle, trail: Vec<Decrement> },
    #[error(transparent)]
    Internal(#[from] InternalError),
}

/// Runs the decrement-stack loop. Every popped axle must be
/// semi-reducible; for each configuration vertex placed on a position whose
/// bounds are not pinned, a copy with that upper bound lowered by one is
/// pushed, in ascending position order.
pub fn reducible(
    a: &Axle,
    db: &[GoodConfiguration],
    mut trace: Option<&mut Vec<ReduceEvent>>,
) -> Result<usize, ReduceFailure> {
    let mut stack: Vec<(Axle, Vec<Decrement>)> = vec![(*a, Vec::new())];
    let mut pops = 0;
    while let Some((b, trail)) = stack.pop() {
        pops += 1;
        if let Some(t) = trace.as_deref_mut() {
            t.push(ReduceEvent::Pop { axle: b, depth: trail.len() });
        }
        let Some(hit) = semi_reducible(&b, db)? else {
            if let Some(t) = trace.as_deref_mut() {
                t.push(ReduceEvent::Fail);
            }
            return Err(ReduceFailure::NotSemiReducible { axle: b, trail });
        };
        let mut positions = hit.positions;
        positions.sort_unstable();
        if let Some(t) = trace.as_deref_mut() {
            t.push(ReduceEvent::Found { config: db[hit.config].name.clone(), positions: positions.clone() });
        }
        for p in positions {
            let bd = b.bounds(p);
            if p == 0 || bd.lo >= bd.hi {
                continue;
            }
            let hi = bd.hi - 1;
            let child = b.with_bounds(p, Bounds::new(bd.lo, hi));
            debug_assert!(child.is_valid(), "decrement left the axle algebra: {child:?}");
            debug_assert!(
                child.entries().iter().map(|e| e.hi as u32).sum::<u32>()
                    < b.entries().iter().map(|e| e.hi as u32).sum::<u32>()
            );
            if let Some(t) = trace.as_deref_mut() {
                t.push(ReduceEvent::Push { pos: p, hi });
            }
            let mut tr = trail.clone();
            tr.push(Decrement { pos: p, hi });
            stack.push((child, tr));
        }
    }
    Ok(pops)
}

/// A loaded database acting as the bound checker's reducibility oracle.
#[derive(Debug, Clone, Default)]
pub struct ConfigDatabase {
    pub configs: Vec<GoodConfiguration>,
}

impl ConfigDatabase {
    pub fn new(configs: Vec<GoodConfiguration>) -> Self {
        ConfigDatabase { configs }
    }

    pub fn parse(text: &str) -> Result<Self, crate::input::InputError> {
        Ok(ConfigDatabase { configs: load_database(text)? })
    }

    pub fn reducible(&self, a: &Axle) -> Result<usize, ReduceFailure> {
        reducible(a, &self.configs, None)
    }
}

impl Reducer for ConfigDatabase {
    /// Panics on an internal isomorphism failure, which indicates a bug
    /// rather than a property of the axle.
    fn is_reducible(&self, axle: &Axle) -> bool {
        match self.reducible(axle) {
            Ok(_) => true,
            Err(ReduceFailure::NotSemiReducible { .. }) => false,
            Err(ReduceFailure::Internal(e)) => panic!("{e}"),
        }
    }

    fn reduce(&self, axle: &Axle) -> Result<(), String> {
        match self.reducible(axle) {
            Ok(_) => Ok(()),
            Err(ReduceFailure::NotSemiReducible { axle: b, trail }) => {
                let steps: Vec<String> = trail.iter().map(|t| format!("u({})={}", t.pos, t.hi)).collect();
                Err(format!(
                    "not reducible: {} is not semi-reducible (decrements: {})",
                    b.digest(),
                    if steps.is_empty() { "none".to_string() } else { steps.join(", ") }
                ))
            }
            Err(ReduceFailure::Internal(e)) => panic!("{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axle::{Condition, Degree};

    const TRIANGLE_6: &str = "config tri 3\nv 1 6 : 2 3\nv 2 6 : 3 1\nv 3 6 : 1 2\nend\n";

    #[test]
    fn empty_database() {
        let a = Axle::trivial(Degree::new(7).unwrap());
        assert_eq!(semi_reducible(&a, &[]).unwrap(), None);
        assert!(matches!(reducible(&a, &[], None), Err(ReduceFailure::NotSemiReducible { .. })));
    }

    #[test]
    fn trivial_axle_has_no_small_labels() {
        let db = load_database(TRIANGLE_6).unwrap();
        let a = Axle::trivial(Degree::new(7).unwrap());
        assert_eq!(semi_reducible(&a, &db).unwrap(), None);
    }

    #[test]
    fn pinned_triangle_found_once() {
        let d = Degree::new(6).unwrap();
        let db = load_database(TRIANGLE_6).unwrap();
        let a = Axle::trivial(d)
            .wedge(Condition::new(1, 6, d).unwrap())
            .unwrap()
            .wedge(Condition::new(1, -6, d).unwrap())
            .unwrap()
            .wedge(Condition::new(2, 6, d).unwrap())
            .unwrap()
            .wedge(Condition::new(2, -6, d).unwrap())
            .unwrap();
        let hit = semi_reducible(&a, &db).unwrap().unwrap();
        let mut pos = hit.positions.clone();
        pos.sort();
        assert_eq!(pos, vec![0, 1, 2]);
        let mut events = Vec::new();
        assert_eq!(reducible(&a, &db, Some(&mut events)).unwrap(), 1);
        assert_eq!(events.len(), 2);
    }
}
