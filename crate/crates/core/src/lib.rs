//! Invariants of one-ended groups computed from the finite quotient graph of
//! their JSJ tree of cylinders.
//!
//! The pipeline: parse a [`model::CylinderGraph`], decorate its subdivided
//! cells ([`decorate`]), refine to stability ([`refine`], [`orient`],
//! [`localsym`]), then read off invariants or compare two inputs
//! ([`classify`]).

pub mod classify;
pub mod complex;
pub mod corpus;
pub mod decorate;
pub mod exec;
pub mod extnat;
pub mod fixtures;
pub mod localsym;
pub mod model;
pub mod oracle;
pub mod orient;
pub mod ornament;
pub mod rational;
pub mod refine;
pub mod report;
pub mod stretch;

pub use classify::{compare, orbits, CompareOptions, Verdict, Workspace};
pub use decorate::{initial_decoration, Decoration, Mode};
pub use exec::Exec;
pub use extnat::ExtNat;
pub use model::{parse_input, CylinderGraph};
pub use ornament::{OrnId, OrnamentUniverse};
pub use rational::PosRational;
