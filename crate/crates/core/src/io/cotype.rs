//! The cotype table used to turn space names into descriptors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{SpaceDescriptor, SpaceKind};
use crate::{Error, Exponent, Result};

/// The table shipped with the crate.
pub const BUILTIN_TABLE: &str = include_str!("../../assets/cotype.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CotypeTable {
    pub scalar: Exponent,
    pub c0: Exponent,
    pub sequence_floor: Exponent,
    #[serde(default)]
    pub overrides: BTreeMap<String, Exponent>,
}

impl CotypeTable {
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_TABLE).expect("the bundled cotype table parses")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: CotypeTable =
            toml::from_str(text).map_err(|e| Error::Config(format!("cotype table: {e}")))?;
        for key in table.overrides.keys() {
            key.parse::<Exponent>().map_err(|e| {
                Error::Config(format!("cotype table: override key {key:?}: {e}"))
            })?;
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Cotype of `ℓ_s`.
    pub fn sequence(&self, s: Exponent) -> Exponent {
        if s.is_infinite() {
            return self.c0;
        }
        for (key, value) in &self.overrides {
            if let Ok(e) = key.parse::<Exponent>() {
                if !e.is_infinite() && (e.value() - s.value()).abs() <= 1e-12 {
                    return *value;
                }
            }
        }
        Exponent::new(s.value().max(self.sequence_floor.value())).unwrap_or(Exponent::INFINITY)
    }

    /// Descriptor for a space kind. Abstract spaces carry no entry in the
    /// table; use [`SpaceDescriptor::new`] with an explicit cotype.
    pub fn descriptor(&self, kind: SpaceKind) -> Result<SpaceDescriptor> {
        let cotype = match kind {
            SpaceKind::ScalarField => self.scalar,
            SpaceKind::C0 => self.c0,
            SpaceKind::SequenceSpace(s) => self.sequence(s),
            SpaceKind::Abstract => {
                return Err(Error::Parameter(
                    "an abstract space needs an explicit cotype".into(),
                ))
            }
        };
        SpaceDescriptor::new(kind, cotype)
    }
}

impl Default for CotypeTable {
    fn default() -> Self {
        Self::builtin()
    }
}
