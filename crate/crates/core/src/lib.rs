//! Exact computation of the Mordell–Weil image of a divisor on an elliptic
//! surface from its intersection numbers, with the lattice machinery behind
//! it and an application to dihedral covers branched along a nodal cubic and
//! four lines.

pub mod arrangement;
pub mod config;
pub mod dihedral;
pub mod error;
pub mod exactalg;
pub mod group;
pub mod kodaira;
pub mod mwgroup;
pub mod nslattice;
pub mod scenario;

pub use arrangement::{
    classify_type, generate_arrangement, Arrangement, CubicParam, Line, ProjPoint,
};
pub use config::ConfigDocument;
pub use dihedral::{d2n_cover_exists, is_divisible, verify_ns_relation, NsVerdict};
pub use error::{Error, Result};
pub use exactalg::{QMatrix, Rational};
pub use group::{AbelianGroup, GroupElement};
pub use kodaira::{FiberKind, ReducibleFiberData};
pub use mwgroup::{abel_jacobi_image, AbelJacobiImage, DualClassTuple, MWPoint, TorsionGroup};
pub use nslattice::{
    build_table, DivisorProfile, FiberSpec, FormalClass, IntersectionTable, SectionProfile,
    SurfaceConfig, Symbol,
};
pub use scenario::ArrangementType;
