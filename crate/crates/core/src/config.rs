//! JSON documents describing a surface and the divisors on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nslattice::{build_table, DivisorProfile, IntersectionTable, SurfaceConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub divisors: Vec<DivisorProfile>,
}

impl ConfigDocument {
    pub fn new(surface: SurfaceConfig, divisors: Vec<DivisorProfile>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            surface,
            divisors,
        }
    }

    /// Parses and checks the schema version. The intersection data itself is
    /// validated by [`table`](Self::table).
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ConfigDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn table(&self) -> Result<IntersectionTable> {
        build_table(&self.surface, &self.divisors)
    }

    pub fn divisor(&self, name: &str) -> Option<&DivisorProfile> {
        self.divisors.iter().find(|d| d.name == name)
    }

    pub fn divisor_mut(&mut self, name: &str) -> Option<&mut DivisorProfile> {
        self.divisors.iter_mut().find(|d| d.name == name)
    }
}
