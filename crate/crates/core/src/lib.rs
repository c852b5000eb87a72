//! Counts of rational curves in CP2 and CP1 x CP1 with multibranched local
//! tangency constraints, computed exactly from blowup Gromov–Witten invariants.

pub mod engine;
pub mod error;
pub mod gw;
pub mod matrix;
pub mod partition;
pub mod records;
pub mod star;

pub use engine::{complexity, parse_constraints, ComplexityRank, Engine, EngineStats, InvariantKey, SumIdentityReport};
pub use error::{Error, Result};
pub use gw::{
    cremona_move, descendant_comparison, exceptional_status, is_exceptional, kontsevich_count, translate_p1xp1,
    vanishing_filter, CurveClass, Degree, ExceptionalStatus, GwBackend, GwKey, Space,
};
pub use matrix::{build_a, determinant_of_a, format_rational, solve_recursion_step, IndexedBasis, RationalMatrix};
pub use partition::{enumerate_ordered, Partition};
pub use star::{combination_coefficient, star, StarExpansion};
