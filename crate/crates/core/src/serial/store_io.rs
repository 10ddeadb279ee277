//! Whole-store export to a directory and digest-checked import.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::granularity::GranulationCriterion;
use crate::gupri::Gupri;
use crate::model::Unit;
use crate::registry::Registries;
use crate::store::UnitStore;

pub const MANIFEST_FILE: &str = "store-manifest.txt";
const REGISTRIES_FILE: &str = "registries.json";
const CRITERIA_FILE: &str = "criteria.json";
const STORE_FILE: &str = "store.json";

#[derive(Serialize, Deserialize)]
struct StoreHeader {
    authority: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn pretty<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes one `<sha256>.json` file per unit plus a manifest of
/// `GUPRI<TAB>digest` lines sorted by GUPRI. Returns the paths written.
pub fn export_store(store: &UnitStore, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut write = |name: &str, bytes: &[u8]| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        written.push(path);
        Ok(())
    };
    let mut manifest = String::new();
    for unit in store.units() {
        let bytes = pretty(unit)?;
        let d = digest(&bytes);
        write(&format!("{d}.json"), &bytes)?;
        manifest.push_str(&format!("{}\t{d}\n", unit.gupri()));
    }
    write(MANIFEST_FILE, manifest.as_bytes())?;
    write(REGISTRIES_FILE, &pretty(store.registries())?)?;
    write(
        CRITERIA_FILE,
        &pretty(&store.criteria().collect::<Vec<_>>())?,
    )?;
    write(
        STORE_FILE,
        &pretty(&StoreHeader {
            authority: store.authority().to_string(),
        })?,
    )?;
    Ok(written)
}

fn corrupt(file: PathBuf, reason: impl Into<String>) -> Error {
    Error::Corruption {
        file,
        reason: reason.into(),
    }
}

/// Rebuilds a store written by [`export_store`]. Any unit file whose bytes no
/// longer hash to its manifest digest is reported as corruption.
pub fn import_store(dir: &Path) -> Result<UnitStore> {
    let read = |name: &str| fs::read(dir.join(name));
    let header: StoreHeader = serde_json::from_slice(&read(STORE_FILE)?)?;
    let registries: Registries = serde_json::from_slice(&read(REGISTRIES_FILE)?)?;
    let criteria: Vec<GranulationCriterion> = serde_json::from_slice(&read(CRITERIA_FILE)?)?;
    let mut store = UnitStore::with_authority(&header.authority, registries);
    store.set_criteria(criteria);

    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = fs::read_to_string(&manifest_path)?;
    for (n, line) in manifest.lines().enumerate() {
        let (g, d) = line.split_once('\t').ok_or_else(|| {
            corrupt(
                manifest_path.clone(),
                format!("line {} is not GUPRI<TAB>digest", n + 1),
            )
        })?;
        let g = Gupri::parse(g).map_err(|e| corrupt(manifest_path.clone(), e.to_string()))?;
        let path = dir.join(format!("{d}.json"));
        let bytes = fs::read(&path).map_err(|e| corrupt(path.clone(), e.to_string()))?;
        let actual = digest(&bytes);
        if actual != d {
            return Err(corrupt(
                path,
                format!("digest {actual} does not match manifest digest {d}"),
            ));
        }
        let unit: Unit =
            serde_json::from_slice(&bytes).map_err(|e| corrupt(path.clone(), e.to_string()))?;
        if *unit.gupri() != g {
            return Err(corrupt(
                path,
                format!("file holds {} but the manifest lists {g}", unit.gupri()),
            ));
        }
        store.insert(unit)?;
    }
    Ok(store)
}
