//! Integral circulant graphs `ICG_n(D)`: construction, exact distances, the
//! closed-form maximal-diameter theory, and an exhaustive BFS verification
//! harness.
//!
//! ```
//! use icg::{diameter, IcgInstance};
//!
//! let g = IcgInstance::new(12, &[3, 4]).unwrap();
//! assert_eq!(diameter(&g).value.finite(), Some(3));
//! ```

pub mod canonical;
pub mod distance;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod numtheory;
pub mod pst;
pub mod verify;

pub use canonical::{
    all_separation_witnesses, enumerate_connected, enumerate_separated, minimal_connected,
    separation_witness, Cardinality, SeparationWitness, WitnessPair, DEFAULT_MAX_SUBSETS,
};
pub use distance::{
    apsp_oracle, bfs_profile, diameter, distance, Diameter, DiameterResult, DistanceProfile,
    DistanceTable, DEFAULT_ORACLE_BOUND,
};
pub use error::{IcgError, Result};
pub use extremal::{
    check_untouched_prime, diameter_two_cases, extremal_check_t_eq_k, extremal_check_t_lt_k,
    lift_diameter, lift_diameter_small, predict_max_for_t, predict_overall_max, saxena_family,
    small_family_lookup, two_three_summands, worst_vertex, CaseLabel, Condition, ExtremalVerdict,
    FamilyInstance, MaxDiameterPrediction, SummandRepresentation, WorstVertexVariant,
};
pub use graph::{degree_formula, DivisorSet, IcgInstance};
pub use numtheory::{factorize, Factorization};
pub use pst::{pst_admissible, pst_never_maximal, PstDecomposition};
pub use verify::{verify_order, verify_range, verify_transitivity, VerificationRecord, VerifyOptions};
