use serde::{Deserialize, Serialize};

use super::{derive_relations_numeric, Monodromy};
use crate::alexander::{alexander_value, AlexanderValue};
use crate::curve::SingularValue;
use crate::error::Result;
use crate::group::{run_battery, Battery, Presentation};

/// Battery plus Alexander polynomial of one presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub battery: Battery,
    pub alexander: AlexanderValue,
}

impl InvariantProfile {
    pub fn of(p: &Presentation) -> Result<Self> {
        Ok(InvariantProfile {
            battery: run_battery(p)?,
            alexander: alexander_value(p)?,
        })
    }

    pub fn differences(&self, other: &InvariantProfile) -> Vec<String> {
        let mut d = self.battery.differences(&other.battery);
        if self.alexander != other.alexander {
            d.push(format!("Alexander polynomial {} vs {}", self.alexander, other.alexander));
        }
        d
    }
}

/// Invariants after removing a set of loops, compared with the full system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub name: String,
    pub loops_kept: usize,
    pub changed: bool,
    pub differences: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlexRedundancyReport {
    pub loops_all: usize,
    /// Loops kept when the flexes `gamma_j xi^k`, `k >= 1`, are dropped.
    pub loops_reduced: usize,
    pub full: InvariantProfile,
    pub reduced: InvariantProfile,
    pub differences: Vec<String>,
    /// All invariants agree. Normal-closure equality is not decided.
    pub consistent_with_redundancy: bool,
    pub controls: Vec<ControlOutcome>,
    /// The controls that must change the invariants did change them.
    pub controls_discriminate: bool,
}

fn control(
    m: &Monodromy,
    full: &InvariantProfile,
    name: &str,
    keep: impl Fn(&SingularValue) -> bool,
) -> Result<ControlOutcome> {
    let sub = m.filtered(keep);
    let prof = InvariantProfile::of(&derive_relations_numeric(&sub).presentation())?;
    let differences = full.differences(&prof);
    Ok(ControlOutcome {
        name: name.into(),
        loops_kept: sub.braids.len(),
        changed: !differences.is_empty(),
        differences,
    })
}

/// Compares the invariants of the numeric presentation with and without the
/// flex loops at `k >= 1`.
///
/// Controls: dropping every flex loop and dropping the origin loop must both
/// be detected. Dropping the single loop around `gamma_1` is reported as well;
/// it is not detected because the remaining loops of the same component carry
/// the same relations.
pub fn flex_redundancy_report(m: &Monodromy) -> Result<FlexRedundancyReport> {
    let full = InvariantProfile::of(&derive_relations_numeric(m).presentation())?;
    let sub = m.filtered(|v| v.is_origin() || v.k == 0);
    let reduced = InvariantProfile::of(&derive_relations_numeric(&sub).presentation())?;
    let differences = full.differences(&reduced);
    let controls = vec![
        control(m, &full, "drop all flex loops", |v| v.is_origin())?,
        control(m, &full, "drop origin loop", |v| !v.is_origin())?,
        control(m, &full, "drop gamma_1 loop", |v| !(v.component == Some(0) && v.k == 0))?,
    ];
    let controls_discriminate = controls[0].changed && controls[1].changed;
    Ok(FlexRedundancyReport {
        loops_all: m.braids.len(),
        loops_reduced: sub.braids.len(),
        consistent_with_redundancy: differences.is_empty(),
        full,
        reduced,
        differences,
        controls,
        controls_discriminate,
    })
}
