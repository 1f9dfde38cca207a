//! Safe trajectory generation in the s-l-t configuration space.
//!
//! The pipeline turns a driving scenario into a dynamically feasible
//! trajectory in two stages: a spatio-temporal semantic corridor of
//! axis-aligned collision-free cubes is grown around behavior seeds, then a
//! quadratic program over a piecewise quintic Bezier curve confines the whole
//! trajectory (and its derivatives) inside the corridor.

pub mod bezier;

/// Trajectory dimension in the lane frame: longitudinal `S` or lateral `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    S = 0,
    L = 1,
}

impl Dim {
    pub const ALL: [Dim; 2] = [Dim::S, Dim::L];
}
