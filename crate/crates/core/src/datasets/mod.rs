//! System records, file ingestion, synthetic sampling, pseudo-labels and
//! the virtual hydration benchmark.
//!
//! A [`SystemRecord`] holds up to four molecules (cation, anion, solute,
//! solvent) as canonical SMILES, an optional temperature, a category tag
//! and, for labeled data, one property value in its canonical unit.

mod benchmark;
mod io;
mod pseudo;
mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use benchmark::{build_hydration_benchmark, BENCHMARK_SYSTEMS_PER_SOLUTE};
pub use io::{format_float, CSV_COLUMNS, load_records, read_records, save_records, write_records, Format};
pub use pseudo::{build_pseudo_labels, build_pseudo_labels_batch, PseudoLabelConfig, PSEUDO_LABEL_LEN, TEMPERATURE_INDEX};
pub use synthetic::{generate_synthetic_systems, Pools, SYNTHETIC_TEMPERATURE_K};

use crate::descriptors::DescriptorError;

/// Version of the CSV column order and JSONL key names.
pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid record: {0}")]
    Invalid(String),
    #[error("requested {requested} systems but only {available} distinct combinations exist")]
    NotEnoughCombinations { requested: usize, available: usize },
    #[error("solute {solute} has only {available} novel ion pairs; {required} are needed")]
    NotEnoughNovelPairs {
        solute: String,
        available: usize,
        required: usize,
    },
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    IlSolute,
    OrganicSolute,
    #[serde(rename = "il_bulk_with_T")]
    IlBulkWithT,
    #[serde(rename = "il_bulk_no_T")]
    IlBulkNoT,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::IlSolute,
        Category::OrganicSolute,
        Category::IlBulkWithT,
        Category::IlBulkNoT,
    ];

    /// Position of the category in the one-hot encoding.
    pub fn index(self) -> usize {
        match self {
            Category::IlSolute => 0,
            Category::OrganicSolute => 1,
            Category::IlBulkWithT => 2,
            Category::IlBulkNoT => 3,
        }
    }

    pub fn one_hot(self) -> [f64; 4] {
        let mut v = [0.0; 4];
        v[self.index()] = 1.0;
        v
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::IlSolute => "il_solute",
            Category::OrganicSolute => "organic_solute",
            Category::IlBulkWithT => "il_bulk_with_T",
            Category::IlBulkNoT => "il_bulk_no_T",
        }
    }

    /// Roles that must be present; every other role must be absent.
    pub fn roles(self) -> &'static [Role] {
        match self {
            Category::IlSolute => &[Role::Cation, Role::Anion, Role::Solute],
            Category::OrganicSolute => &[Role::Solute, Role::Solvent],
            Category::IlBulkWithT | Category::IlBulkNoT => &[Role::Cation, Role::Anion],
        }
    }

    pub fn has_temperature(self) -> bool {
        self != Category::IlBulkNoT
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown category '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    SolvationDg,
    TransferDgIlWater,
    TransferDgOrgWater,
    MeltingPoint,
    ViscosityLog10,
    SurfaceTension,
    MassDensity,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::SolvationDg,
        Property::TransferDgIlWater,
        Property::TransferDgOrgWater,
        Property::MeltingPoint,
        Property::ViscosityLog10,
        Property::SurfaceTension,
        Property::MassDensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SolvationDg => "solvation_dg",
            Property::TransferDgIlWater => "transfer_dg_il_water",
            Property::TransferDgOrgWater => "transfer_dg_org_water",
            Property::MeltingPoint => "melting_point",
            Property::ViscosityLog10 => "viscosity_log10",
            Property::SurfaceTension => "surface_tension",
            Property::MassDensity => "mass_density",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Property::SolvationDg | Property::TransferDgIlWater | Property::TransferDgOrgWater => {
                "kcal/mol"
            }
            Property::MeltingPoint => "K",
            Property::ViscosityLog10 => "log10(mPa*s)",
            Property::SurfaceTension => "mN/m",
            Property::MassDensity => "g/cm3",
        }
    }

    pub fn allowed_categories(self) -> &'static [Category] {
        match self {
            Property::SolvationDg => &[Category::IlSolute, Category::OrganicSolute],
            Property::TransferDgIlWater => &[Category::IlSolute],
            Property::TransferDgOrgWater => &[Category::OrganicSolute],
            Property::MeltingPoint => &[Category::IlBulkNoT],
            Property::ViscosityLog10 | Property::SurfaceTension | Property::MassDensity => {
                &[Category::IlBulkWithT, Category::IlBulkNoT]
            }
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Cation,
    Anion,
    Solute,
    Solvent,
}

impl Role {
    /// Fixed concatenation order used by features and pseudo-labels.
    pub const ORDER: [Role; 4] = [Role::Cation, Role::Anion, Role::Solute, Role::Solvent];

    pub fn name(self) -> &'static str {
        match self {
            Role::Cation => "cation",
            Role::Anion => "anion",
            Role::Solute => "solute",
            Role::Solvent => "solvent",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub cation: Option<String>,
    pub anion: Option<String>,
    pub solute: Option<String>,
    pub solvent: Option<String>,
    /// Kelvin.
    #[serde(rename = "temperature_K")]
    pub temperature: Option<f64>,
    pub category: Category,
    pub property: Option<Property>,
    pub value: Option<f64>,
    pub source_id: String,
}

impl SystemRecord {
    /// Unlabeled record with the given roles.
    pub fn new(category: Category) -> SystemRecord {
        SystemRecord {
            cation: None,
            anion: None,
            solute: None,
            solvent: None,
            temperature: None,
            category,
            property: None,
            value: None,
            source_id: String::new(),
        }
    }

    pub fn role(&self, role: Role) -> Option<&str> {
        match role {
            Role::Cation => self.cation.as_deref(),
            Role::Anion => self.anion.as_deref(),
            Role::Solute => self.solute.as_deref(),
            Role::Solvent => self.solvent.as_deref(),
        }
    }

    pub fn set_role(&mut self, role: Role, smiles: Option<String>) {
        let slot = match role {
            Role::Cation => &mut self.cation,
            Role::Anion => &mut self.anion,
            Role::Solute => &mut self.solute,
            Role::Solvent => &mut self.solvent,
        };
        *slot = smiles;
    }

    /// The four role slots in [`Role::ORDER`].
    pub fn roles(&self) -> [Option<&str>; 4] {
        Role::ORDER.map(|r| self.role(r))
    }

    /// Checks role presence, temperature and property/category agreement.
    /// SMILES validity is checked separately on ingest.
    pub fn validate(&self) -> Result<(), String> {
        let required = self.category.roles();
        for role in Role::ORDER {
            let present = self.role(role).is_some_and(|s| !s.is_empty());
            let needed = required.contains(&role);
            if needed && !present {
                return Err(format!("category {} requires a {role}", self.category));
            }
            if !needed && present {
                return Err(format!("category {} does not allow a {role}", self.category));
            }
        }
        if let Some(p) = self.property {
            if !p.allowed_categories().contains(&self.category) {
                return Err(format!("property {p} is not valid for category {}", self.category));
            }
        }
        if self.value.is_some() && self.property.is_none() {
            return Err("value given without a property".into());
        }
        if let Some(v) = self.value {
            if !v.is_finite() {
                return Err("value is not finite".into());
            }
        }
        let wants_temperature =
            self.category.has_temperature() && self.property != Some(Property::MeltingPoint);
        match self.temperature {
            Some(t) if !(t.is_finite() && t > 0.0) => {
                Err(format!("temperature must be positive, got {t}"))
            }
            Some(_) if !wants_temperature => Err(format!(
                "temperature must be absent for category {} / property {}",
                self.category,
                self.property.map_or("none", Property::name)
            )),
            None if wants_temperature => {
                Err(format!("category {} requires a temperature", self.category))
            }
            _ => Ok(()),
        }
    }

    /// Identity used for duplicate detection: roles, category, temperature
    /// and property.
    pub(crate) fn duplicate_key(&self) -> (Vec<Option<String>>, Category, Option<String>, Option<Property>) {
        (
            self.roles().iter().map(|r| r.map(str::to_string)).collect(),
            self.category,
            self.temperature.map(format_float),
            self.property,
        )
    }
}
