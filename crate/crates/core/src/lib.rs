//! Combinatorial fixed-point data for 10-dimensional Hamiltonian circle
//! actions with six isolated fixed points: validation, exact cohomology, and
//! exhaustive classification search.

pub mod cohomology;
pub mod constraints;
pub mod examples;
pub mod model;
pub mod search;

pub use cohomology::{cohomology_report, ring_presentation, total_chern, CohomologyError};
pub use constraints::{check_all, compute_c1, CheckFlags, Report, Rule, Violation};
pub use examples::{builtin, orbit_gkm, project_gkm, Builtin, ExampleError};
pub use model::{
    canonicalize, derive_weight_system, isotropy_components, Configuration, MomentProfile,
    StructureError, WeightEdge, WeightSystem, POINTS,
};
pub use search::{enumerate, SearchError, SearchResult, SearchSpec};
