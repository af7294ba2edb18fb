use serde::{Deserialize, Serialize};

use super::abelian::{abelianization, AbelianInvariants};
use super::finite::battery_groups;
use super::homs::count_homomorphisms;
use super::tietze::tietze_simplify;
use super::Presentation;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCount {
    pub group: String,
    pub count: u64,
}

/// Isomorphism invariants of a presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Battery {
    pub abelianization: AbelianInvariants,
    pub hom_counts: Vec<HomCount>,
    /// Generators left after Tietze simplification.
    pub simplified_generators: usize,
    pub simplified_length: usize,
}

impl Battery {
    /// Human-readable list of invariants on which the two batteries differ.
    pub fn differences(&self, other: &Battery) -> Vec<String> {
        let mut out = Vec::new();
        if self.abelianization != other.abelianization {
            out.push(format!(
                "abelianization {} vs {}",
                self.abelianization, other.abelianization
            ));
        }
        for (a, b) in self.hom_counts.iter().zip(&other.hom_counts) {
            if a != b {
                out.push(format!("Hom(-, {}) {} vs {}", a.group, a.count, b.count));
            }
        }
        if self.hom_counts.len() != other.hom_counts.len() {
            out.push("different target lists".into());
        }
        out
    }

    pub fn agrees_with(&self, other: &Battery) -> bool {
        self.differences(other).is_empty()
    }

    pub fn hom_count(&self, group: &str) -> Option<u64> {
        self.hom_counts.iter().find(|h| h.group == group).map(|h| h.count)
    }
}

/// Abelianization plus homomorphism counts into every battery group, taken on
/// the Tietze-simplified presentation.
pub fn run_battery(p: &Presentation) -> Result<Battery> {
    use rayon::prelude::*;
    let simplified = tietze_simplify(p);
    let abelianization = abelianization(&simplified)?;
    let hom_counts = crate::parallel::install(|| {
        battery_groups()
            .par_iter()
            .map(|g| {
                Ok(HomCount {
                    group: g.name.clone(),
                    count: count_homomorphisms(&simplified, g)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Battery {
        abelianization,
        hom_counts,
        simplified_generators: simplified.generator_count(),
        simplified_length: simplified.total_length(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{expected_affine, expected_projective};

    #[test]
    fn projective_three_two() {
        let b = run_battery(&expected_projective(3, 2)).unwrap();
        assert_eq!(b.hom_count("S3"), Some(18));
        assert_eq!(b.hom_count("Z3"), Some(9));
        assert_eq!(b.abelianization.to_string(), "Z + Z/3");
    }

    #[test]
    fn affine_and_projective_differ() {
        let a = run_battery(&expected_affine(3, 2)).unwrap();
        let p = run_battery(&expected_projective(3, 2)).unwrap();
        assert!(!a.agrees_with(&p));
        assert!(a.agrees_with(&a.clone()));
    }
}
