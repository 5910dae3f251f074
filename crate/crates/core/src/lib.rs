//! Explicit constructions of quasi-isometric and bi-Lipschitz embeddings of
//! products of hyperbolic planes and products of regular trees into
//! higher-rank spaces, together with certification harnesses that verify
//! every constant and inequality involved, by exact arithmetic where
//! possible and by seeded Monte Carlo sampling otherwise.
//!
//! The crate is organized around six pillars:
//!
//! * [`root_systems`] — finite root systems, the dominance order, and the
//!   greedy selection of pairwise strongly commuting positive roots;
//! * [`coxeter`] — spherical Coxeter complexes, maximally distributed
//!   vertex sets, and the angle data they produce;
//! * [`hyperbolic`] — the upper half-plane, its affine subgroup, and
//!   rank-one quasi-geodesic paths;
//! * [`symmetric`] — the embedding of a product of hyperbolic planes into
//!   the space of positive definite symmetric matrices, with a
//!   quasi-isometry certificate;
//! * [`trees`] — regular trees, Busemann functions, branching geometry,
//!   and union-of-flats path constructions;
//! * [`building`] — the Bruhat–Tits building of SL₃ over the 2-adics as a
//!   finite ball of lattice classes, and the bi-Lipschitz embedding of a
//!   product of two trees into it.
//!
//! The [`runner`] module chains everything into a single
//! [`report::VerificationReport`], which the CLI serializes as JSON, CSV,
//! or text.

pub mod exact;
pub mod building;
pub mod coxeter;
pub mod hyperbolic;
pub mod report;
pub mod root_systems;
pub mod runner;
pub mod symmetric;
pub mod trees;

/// Unified error type for the whole crate.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("illegal Cartan type: {0}")]
    IllegalType(String),
    #[error("root does not belong to the given root system")]
    RootNotInSystem,
    #[error("rank too large for this operation: {0}")]
    RankTooLarge(usize),
    #[error("wrong cardinality: expected {expected}, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("search failed: {0}")]
    NotFound(String),
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("empty sample bin: {0}")]
    EmptyBin(String),
    #[error("singular basis matrix")]
    SingularBasis,
    #[error("ball radius too large: {0}")]
    RadiusTooLarge(usize),
    #[error("marked subcomplex is disconnected near {0}")]
    DisconnectedXDelta(String),
    #[error("no shared chamber contains the given points")]
    NoSharedChamber,
    #[error("bad configuration: {0}")]
    ConfigError(String),
    #[error("postcondition violated: {0}")]
    PostconditionViolated(String),
    #[error("degenerate barycenter")]
    DegenerateBarycenter,
    #[error("ends are not asymptotic")]
    NotAsymptotic,
    #[error("internal invariant broken: {0}")]
    Internal(String),
}
