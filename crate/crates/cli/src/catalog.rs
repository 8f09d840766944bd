use fzeta::geometry::{EntryParams, RfdDescriptor, RfdKind};
use fzeta::zetacat::{catalog_zeta, steiner_tube_zeta, tube_from_distance, ZetaHandle, ZetaKind};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Version of the catalog file layout understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../catalog.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// An `EntryParams` object, tagged by `entry`.
    pub descriptor: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped catalog parses")
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let c: Catalog = serde_json::from_str(text)?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "catalog schema version {} is not supported (expected {SCHEMA_VERSION})",
                c.schema_version
            )));
        }
        for e in &c.entries {
            serde_json::from_value::<EntryParams>(e.descriptor.clone())
                .map_err(|err| CliError::Usage(format!("catalog entry '{}': {err}", e.name)))?;
        }
        Ok(c)
    }

    /// Builtin entries followed by the entries of a user file.
    pub fn with_user_file(path: &Path) -> CliResult<Self> {
        let mut c = Self::builtin();
        let user = Self::parse(&std::fs::read_to_string(path)?)?;
        for e in user.entries {
            if c.entries.iter().any(|x| x.name == e.name) {
                return Err(CliError::Usage(format!("catalog entry '{}' is defined twice", e.name)));
            }
            c.entries.push(e);
        }
        Ok(c)
    }

    pub fn get(&self, name: &str) -> CliResult<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| {
            let names: Vec<&str> = self.entries.iter().map(|e| e.name.as_str()).collect();
            CliError::Usage(format!("unknown entry '{name}'; known: {}", names.join(", ")))
        })
    }

    /// The descriptor of an entry after applying k=v overrides.
    pub fn resolve(&self, name: &str, overrides: &[String]) -> CliResult<RfdDescriptor> {
        let mut v = self.get(name)?.descriptor.clone();
        let obj = v.as_object_mut().expect("validated descriptor is an object");
        for kv in overrides {
            let (k, raw) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--param expects k=v, got '{kv}'")))?;
            if k == "entry" || !obj.contains_key(k) {
                return Err(CliError::Usage(format!("entry '{name}' has no parameter '{k}'")));
            }
            let val = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            obj.insert(k.to_string(), val);
        }
        let params: EntryParams =
            serde_json::from_value(v).map_err(|e| CliError::Usage(format!("parameters of '{name}': {e}")))?;
        let mut d = RfdDescriptor::new(params).map_err(|e| CliError::Usage(e.to_string()))?;
        d.name = name.to_string();
        Ok(d)
    }
}

/// The zeta handle the catalog provides for a descriptor.
pub fn zeta_handle(d: &RfdDescriptor) -> CliResult<ZetaHandle> {
    let mut z = match &d.params {
        EntryParams::Steiner { c, delta } => steiner_tube_zeta(c, *delta)?,
        _ => catalog_zeta(d)?,
    };
    z.name = d.name.clone();
    Ok(z)
}

/// Handle whose tube formula gives V(t) itself.
///
/// Distance zeta functions do not see the interior of a set of positive
/// volume, so for those entries the tube zeta function is used.
pub fn tube_handle(d: &RfdDescriptor) -> CliResult<ZetaHandle> {
    let z = zeta_handle(d)?;
    if z.kind == ZetaKind::Distance && d.kind == RfdKind::SteinerSet {
        Ok(tube_from_distance(&z, d.omega_volume)?)
    } else {
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_entry_builds() {
        let c = Catalog::builtin();
        assert_eq!(c.entries.len(), 15);
        for e in &c.entries {
            let d = c.resolve(&e.name, &[]).unwrap();
            zeta_handle(&d).unwrap();
        }
    }

    #[test]
    fn overrides() {
        let c = Catalog::builtin();
        let d = c.resolve("fractal_nest", &["a=1".into()]).unwrap();
        assert_eq!(d.params, EntryParams::FractalNest { a: 1.0 });
        let d = c.resolve("spray", &["ratios=[0.5,0.5]".into()]).unwrap();
        assert!(matches!(d.params, EntryParams::Spray { ref ratios, .. } if ratios == &vec![0.5, 0.5]));
        assert!(c.resolve("gasket", &["a=1".into()]).is_err());
        assert!(c.resolve("fractal_nest", &["a=-1".into()]).is_err());
        assert!(c.resolve("nope", &[]).is_err());
    }

    #[test]
    fn schema_version_is_checked() {
        assert!(Catalog::parse(r#"{"schema_version": 2, "entries": []}"#).is_err());
        assert!(Catalog::parse(r#"{"schema_version": 1, "entries": [{"name": "x", "descriptor": {"entry": "torus"}}]}"#).is_err());
    }
}
