//! The irreducible symmetric spaces as data: presentations, operation
//! actions, pullbacks and criterion routing, plus the full report.

mod data;
mod families;
mod plan;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use data::{
    parse_source, Catalog, CrossCheckRecord, SourceRecord, SpaceEntry, SpaceRecord, TransferRecord, CATALOG_DIR_ENV,
};
pub use families::{aii_square_table, instantiate, SpaceInstance};
pub use plan::{check, route, CheckOutcome, CrossCheckOutcome, Lift, Plan, PlanStep};
pub use report::{report, report_row, Ranges, Report, ReportRow, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown family `{0}`; valid ids: {}", FamilyId::ALL.map(|f| f.to_string()).join(", "))]
    UnknownFamily(String),
    #[error("{family}: {message}")]
    Parameter { family: FamilyId, message: String },
    #[error("catalog data {file}: {message}")]
    Data { file: String, message: String },
    #[error("{space}: {message}")]
    Computation { space: String, message: String },
}

/// Families of irreducible symmetric spaces, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    AI,
    AII,
    AIII,
    BDI,
    DIII,
    CI,
    CII,
    EI,
    EII,
    EIII,
    EIV,
    EV,
    EVI,
    EVII,
    EVIII,
    EIX,
    FI,
    FII,
    G,
}

/// Which parameters a family takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    None,
    N,
    MN,
}

impl FamilyId {
    pub const ALL: [FamilyId; 19] = [
        FamilyId::AI,
        FamilyId::AII,
        FamilyId::AIII,
        FamilyId::BDI,
        FamilyId::DIII,
        FamilyId::CI,
        FamilyId::CII,
        FamilyId::EI,
        FamilyId::EII,
        FamilyId::EIII,
        FamilyId::EIV,
        FamilyId::EV,
        FamilyId::EVI,
        FamilyId::EVII,
        FamilyId::EVIII,
        FamilyId::EIX,
        FamilyId::FI,
        FamilyId::FII,
        FamilyId::G,
    ];

    pub fn arity(&self) -> Arity {
        match self {
            FamilyId::AI | FamilyId::AII | FamilyId::DIII | FamilyId::CI => Arity::N,
            FamilyId::AIII | FamilyId::BDI | FamilyId::CII => Arity::MN,
            _ => Arity::None,
        }
    }

    pub fn is_single_instance(&self) -> bool {
        self.arity() == Arity::None
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(self, FamilyId::AIII | FamilyId::BDI | FamilyId::CI | FamilyId::DIII | FamilyId::EIII | FamilyId::EVII)
    }

    /// Smallest allowed parameter value.
    pub fn lower_bound(&self) -> u32 {
        match self {
            FamilyId::AI | FamilyId::AII | FamilyId::BDI | FamilyId::DIII | FamilyId::CI => 2,
            _ => 1,
        }
    }

    pub fn constraint(&self) -> String {
        let b = self.lower_bound();
        match self.arity() {
            Arity::None => "no parameters".into(),
            Arity::N => format!("n >= {b}"),
            Arity::MN => format!("m, n >= {b}"),
        }
    }

    /// `G/H` with the given parameters.
    pub fn homogeneous_name(&self, p: &Params) -> String {
        let m = p.m.unwrap_or(0);
        let n = p.n.unwrap_or(0);
        match self {
            FamilyId::AI => format!("SU({n})/SO({n})"),
            FamilyId::AII => format!("SU({})/Sp({n})", 2 * n),
            FamilyId::AIII => format!("U({})/U({m})×U({n})", m + n),
            FamilyId::BDI => format!("SO({})/SO({m})×SO({n})", m + n),
            FamilyId::DIII => format!("SO({})/U({n})", 2 * n),
            FamilyId::CI => format!("Sp({n})/U({n})"),
            FamilyId::CII => format!("Sp({})/Sp({m})×Sp({n})", m + n),
            FamilyId::EI => "E6/PSp(4)".into(),
            FamilyId::EII => "E6/SU(6)·SU(2)".into(),
            FamilyId::EIII => "E6/Spin(10)·S^1".into(),
            FamilyId::EIV => "E6/F4".into(),
            FamilyId::EV => "E7/(SU(8)/{±I})".into(),
            FamilyId::EVI => "E7/Spin(12)·SU(2)".into(),
            FamilyId::EVII => "E7/E6·S^1".into(),
            FamilyId::EVIII => "E8/Ss(16)".into(),
            FamilyId::EIX => "E8/E7·SU(2)".into(),
            FamilyId::FI => "F4/Sp(3)·Sp(1)".into(),
            FamilyId::FII => "F4/Spin(9)".into(),
            FamilyId::G => "G2/SO(4)".into(),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FamilyId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

/// Family parameters; one-parameter families use `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
}

impl Params {
    pub fn none() -> Self {
        Params::default()
    }

    pub fn n(n: u32) -> Self {
        Params { m: None, n: Some(n) }
    }

    pub fn mn(m: u32, n: u32) -> Self {
        Params { m: Some(m), n: Some(n) }
    }

    /// Checks the parameters against the family's bounds.
    pub fn validate(&self, family: FamilyId) -> Result<(), CatalogError> {
        let err = |message: String| Err(CatalogError::Parameter { family, message });
        let b = family.lower_bound();
        let bound = |name: &str, v: Option<u32>| -> Result<(), CatalogError> {
            match v {
                None => err(format!("missing parameter {name}; {family} requires {}", family.constraint())),
                Some(v) if v < b => err(format!("{name} = {v} violates the bound {}", family.constraint())),
                Some(_) => Ok(()),
            }
        };
        match family.arity() {
            Arity::None => {
                if self.m.is_some() || self.n.is_some() {
                    return err(format!("{family} takes no parameters"));
                }
            }
            Arity::N => {
                if self.m.is_some() {
                    return err(format!("{family} takes only n ({})", family.constraint()));
                }
                bound("n", self.n)?;
            }
            Arity::MN => {
                bound("m", self.m)?;
                bound("n", self.n)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.n) {
            (Some(m), Some(n)) => write!(f, "(m={m}, n={n})"),
            (None, Some(n)) => write!(f, "(n={n})"),
            (Some(m), None) => write!(f, "(m={m})"),
            (None, None) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_ids_parse() {
        assert_eq!("eviii".parse::<FamilyId>().unwrap(), FamilyId::EVIII);
        let e = "XYZ".parse::<FamilyId>().unwrap_err();
        assert!(e.to_string().contains("AI, AII"));
    }

    #[test]
    fn parameter_bounds() {
        assert!(Params::n(2).validate(FamilyId::AI).is_ok());
        let e = Params::n(1).validate(FamilyId::AII).unwrap_err();
        assert!(e.to_string().contains("n >= 2"));
        assert!(Params::mn(1, 1).validate(FamilyId::CII).is_ok());
        assert!(Params::mn(1, 3).validate(FamilyId::BDI).is_err());
        assert!(Params::n(3).validate(FamilyId::EI).is_err());
        assert!(Params::none().validate(FamilyId::CI).is_err());
    }
}
