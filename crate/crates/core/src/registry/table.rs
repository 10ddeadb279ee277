use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gupri::Gupri;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versioned<R> {
    pub version: u32,
    pub note: String,
    pub record: R,
}

/// Append-only versioned records, remembering registration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
pub struct Table<R> {
    entries: BTreeMap<Gupri, Vec<Versioned<R>>>,
    order: Vec<Gupri>,
}

impl<R> Default for Table<R> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
            order: Vec::new(),
        }
    }
}

pub enum Upsert {
    Unchanged(u32),
    New(u32),
}

impl<R: Clone + PartialEq> Table<R> {
    /// Appends `record` as a new version unless it equals the latest one.
    /// `same` compares bodies while ignoring registry-managed fields.
    pub fn upsert(
        &mut self,
        gupri: &Gupri,
        record: R,
        note: String,
        same: impl Fn(&R, &R) -> bool,
    ) -> Upsert {
        match self.entries.get_mut(gupri) {
            Some(versions) => {
                let latest = versions.last().expect("never empty");
                if same(&latest.record, &record) {
                    return Upsert::Unchanged(latest.version);
                }
                let version = latest.version + 1;
                versions.push(Versioned {
                    version,
                    note,
                    record,
                });
                Upsert::New(version)
            }
            None => {
                self.entries.insert(
                    gupri.clone(),
                    vec![Versioned {
                        version: 1,
                        note,
                        record,
                    }],
                );
                self.order.push(gupri.clone());
                Upsert::New(1)
            }
        }
    }

    pub fn next_version(&self, gupri: &Gupri) -> u32 {
        self.entries
            .get(gupri)
            .and_then(|v| v.last())
            .map_or(1, |v| v.version + 1)
    }

    pub fn versions(&self, gupri: &Gupri) -> &[Versioned<R>] {
        self.entries.get(gupri).map_or(&[], |v| v.as_slice())
    }

    pub fn latest(&self, gupri: &Gupri) -> Option<&Versioned<R>> {
        self.entries.get(gupri).and_then(|v| v.last())
    }

    pub fn pinned(&self, gupri: &Gupri, version: u32) -> Option<&Versioned<R>> {
        self.entries
            .get(gupri)
            .and_then(|v| v.iter().find(|x| x.version == version))
    }

    pub fn get(&self, gupri: &Gupri) -> Option<&R> {
        self.latest(gupri).map(|v| &v.record)
    }

    pub fn contains(&self, gupri: &Gupri) -> bool {
        self.entries.contains_key(gupri)
    }

    /// Latest versions in registration order.
    pub fn iter(&self) -> impl Iterator<Item = &Versioned<R>> {
        self.order.iter().filter_map(|g| self.latest(g))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}
