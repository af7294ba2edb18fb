pub mod abelian;
pub mod battery;
pub mod finite;
pub mod homs;
pub mod presentation;
pub mod reduction;
pub mod tietze;

pub use abelian::{abelianization, AbelianInvariants};
pub use battery::{run_battery, Battery};
pub use finite::{battery_groups, FiniteGroupTable};
pub use homs::count_homomorphisms;
pub use presentation::{
    canonical_cyclic, expected_affine, expected_projective, projectivize, Presentation, Provenance,
};
pub use tietze::tietze_simplify;
pub use reduction::{scripted_reduction, ReductionOutcome};
