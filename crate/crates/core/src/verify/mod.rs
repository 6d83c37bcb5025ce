//! Finite witnesses for the chaotic-set properties of the tower.

pub mod cantor;
pub mod checks;
pub mod replay;
pub mod report;

pub use cantor::{CantorApprox, Stages};
pub use checks::{
    proximality_witness, recurrence_witness, scrambled_pair_witness, stage_points, transitivity_witness,
    verify_density, verify_fixed_point_pattern, verify_invariance, verify_property1, verify_property2,
    verify_triple_cover, Sampling,
};
pub use replay::{replay, replays_exactly};
pub use report::{Claim, Cost, Verdict, WitnessReport};
