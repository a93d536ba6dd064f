//! The municipality table: column names, ranges and the record type.

use serde::{Deserialize, Serialize};

use crate::error::InputError;

pub const NAME_COLUMN: &str = "NAME";

/// Data columns in canonical order. Feature matrices built from records
/// always use this order.
pub const COLUMNS: [&str; 16] = [
    "MHR",
    "POPULATION",
    "DEMOGDENSITY",
    "IDEB2005",
    "IDEB2007",
    "IDEB2009",
    "IDEB2011",
    "IDEB2013",
    "LIFEEXPECT",
    "GINI",
    "INRICHEST10",
    "EDUCLEVEL",
    "MHDI",
    "MHDIE",
    "MHDIL",
    "MHDII",
];

pub const IDEB_COLUMNS: [&str; 5] = ["IDEB2005", "IDEB2007", "IDEB2009", "IDEB2011", "IDEB2013"];

/// Name of the aggregated IDEB variable in correlation tables.
pub const IDEB: &str = "IDEB";

/// Variables of the correlation table, with the five IDEB years collapsed
/// into their row mean.
pub const CORRELATION_COLUMNS: [&str; 12] = [
    "MHR",
    "POPULATION",
    "DEMOGDENSITY",
    IDEB,
    "LIFEEXPECT",
    "GINI",
    "INRICHEST10",
    "EDUCLEVEL",
    "MHDI",
    "MHDIE",
    "MHDIL",
    "MHDII",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// Integer, at least zero.
    Count,
    /// Integer, strictly positive.
    PositiveCount,
    NonNegative,
    Positive,
    /// `[0, 1]`
    Unit,
    /// `[0, 10]`
    Ideb,
    /// `[0, 100]`
    Percent,
}

impl Constraint {
    pub fn describe(self) -> &'static str {
        match self {
            Constraint::Count => "non-negative integer",
            Constraint::PositiveCount => "positive integer",
            Constraint::NonNegative => ">= 0",
            Constraint::Positive => "> 0",
            Constraint::Unit => "[0,1]",
            Constraint::Ideb => "[0,10]",
            Constraint::Percent => "[0,100]",
        }
    }

    pub fn admits(self, v: f64) -> bool {
        let integral = v.fract() == 0.0;
        match self {
            Constraint::Count => v >= 0.0 && integral,
            Constraint::PositiveCount => v > 0.0 && integral,
            Constraint::NonNegative => v >= 0.0,
            Constraint::Positive => v > 0.0,
            Constraint::Unit => (0.0..=1.0).contains(&v),
            Constraint::Ideb => (0.0..=10.0).contains(&v),
            Constraint::Percent => (0.0..=100.0).contains(&v),
        }
    }
}

pub fn constraint(column: &str) -> Constraint {
    match column {
        "MHR" => Constraint::Count,
        "POPULATION" => Constraint::PositiveCount,
        "DEMOGDENSITY" => Constraint::NonNegative,
        "LIFEEXPECT" => Constraint::Positive,
        "GINI" | "MHDI" | "MHDIE" | "MHDIL" | "MHDII" => Constraint::Unit,
        "INRICHEST10" | "EDUCLEVEL" => Constraint::Percent,
        c if c.starts_with("IDEB") => Constraint::Ideb,
        other => unreachable!("not a table column: {other}"),
    }
}

/// One municipality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MunicipalityRecord {
    pub name: String,
    /// Homicide deaths over the study window.
    pub mhr: u64,
    pub population: u64,
    /// Inhabitants per square kilometre.
    pub demog_density: f64,
    /// IDEB for 2005, 2007, 2009, 2011 and 2013.
    pub ideb: [f64; 5],
    pub life_expect: f64,
    pub gini: f64,
    pub in_richest10: f64,
    pub educ_level: f64,
    pub mhdi: f64,
    pub mhdi_e: f64,
    pub mhdi_l: f64,
    pub mhdi_i: f64,
}

impl MunicipalityRecord {
    /// Builds a record from values in [`COLUMNS`] order, checking every range.
    /// `row` is the 1-based data row used in error messages.
    pub fn from_values(name: String, values: &[f64; 16], row: usize) -> Result<Self, InputError> {
        if name.trim().is_empty() {
            return Err(InputError::EmptyName(row));
        }
        for (column, &value) in COLUMNS.iter().zip(values) {
            let c = constraint(column);
            if !value.is_finite() || !c.admits(value) {
                return Err(InputError::OutOfRange {
                    row,
                    column: column.to_string(),
                    value,
                    constraint: c.describe(),
                });
            }
        }
        let v = values;
        Ok(Self {
            name,
            mhr: v[0] as u64,
            population: v[1] as u64,
            demog_density: v[2],
            ideb: [v[3], v[4], v[5], v[6], v[7]],
            life_expect: v[8],
            gini: v[9],
            in_richest10: v[10],
            educ_level: v[11],
            mhdi: v[12],
            mhdi_e: v[13],
            mhdi_l: v[14],
            mhdi_i: v[15],
        })
    }

    /// Values in [`COLUMNS`] order.
    pub fn values(&self) -> [f64; 16] {
        let i = &self.ideb;
        [
            self.mhr as f64,
            self.population as f64,
            self.demog_density,
            i[0],
            i[1],
            i[2],
            i[3],
            i[4],
            self.life_expect,
            self.gini,
            self.in_richest10,
            self.educ_level,
            self.mhdi,
            self.mhdi_e,
            self.mhdi_l,
            self.mhdi_i,
        ]
    }

    pub fn ideb_mean(&self) -> f64 {
        self.ideb.iter().sum::<f64>() / 5.0
    }

    /// Values in [`CORRELATION_COLUMNS`] order.
    pub fn correlation_values(&self) -> [f64; 12] {
        let v = self.values();
        [
            v[0],
            v[1],
            v[2],
            self.ideb_mean(),
            v[8],
            v[9],
            v[10],
            v[11],
            v[12],
            v[13],
            v[14],
            v[15],
        ]
    }

    /// Cell text as written to CSV; shortest decimal that parses back to the same value.
    pub fn cells(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(17);
        out.push(self.name.clone());
        out.push(self.mhr.to_string());
        out.push(self.population.to_string());
        out.extend(self.values()[2..].iter().map(|v| v.to_string()));
        out
    }
}
