//! Harmonic conjugation and harmonic closure in rank-3 incidence matroids.
//!
//! The crate models finite projective planes PG(2,q) over GF(p^m), small
//! rank-3 matroids given by their long lines, the matroidal harmonic
//! position predicate and the harmonic closure operator, together with
//! verifiers that rebuild PG(2,p) from the three-concurrent-lines
//! configuration L_p by harmonic conjugation alone.

pub mod closure;
pub mod cli;
pub mod constructions;
pub mod field;
pub mod geometry;
pub mod hp;
pub mod incfile;
pub mod incidence;
pub mod iso;
pub mod pointset;
pub mod report;
pub mod sequences;
pub mod synthesis;
pub mod verify;

pub use closure::{h_closure, h_step, Ambient, AuditedAmbient, ClosureError, ClosureTrace};
pub use constructions::{build_named, LabeledStructure, Named};
pub use field::{Field, FieldElem, FieldError};
pub use geometry::{build_pg, CoordinatePlane, GeometryError, ProjLine, ProjPoint};
pub use hp::{conjugate_search, harmonic_audit, hp_classify, hp_search, HpClass, HpWitness};
pub use incidence::{IncidenceStructure, PlaneReport, StructureError};
pub use iso::iso_find;
pub use pointset::PointSet;
pub use report::{Verdict, VerificationReport};

use thiserror::Error;

/// Union of the module error types, used at API boundaries that cross
/// several modules (CLI, FFI).
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Construction(#[from] constructions::ConstructionError),
    #[error(transparent)]
    Harmonic(#[from] hp::HarmonicError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Synthesis(#[from] synthesis::SynthesisError),
    #[error(transparent)]
    Sequence(#[from] sequences::SequenceError),
    #[error(transparent)]
    Parse(#[from] incfile::ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
