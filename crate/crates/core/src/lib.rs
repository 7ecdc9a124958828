//! Verification engine for cartwheel discharging certificates.
//!
//! The crate is organized bottom-up: [`axle`] holds the interval algebra,
//! [`outlet`] and [`rules`] turn discharging rules into outlets,
//! [`hubcap`] certifies charge bounds, [`reduce`] searches good
//! configurations inside skeletons, and [`presentation`] runs proof scripts.

pub mod axle;
pub mod outlet;
pub mod drawing;
pub mod hubcap;
pub mod input;
pub mod rules;
pub mod cartwheel;
pub mod reduce;
pub mod presentation;
