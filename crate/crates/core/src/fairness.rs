//! FAIR facet scoring, granular complexity and granular FAIRness.
//!
//! Facets are scored with a fixed twelve-item checklist (three items per
//! facet). Granular FAIRness multiplies the aggregated score of all
//! transitive statement members by the unit's granular complexity.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{Form, StatementUnit, Unit};
use crate::par::{self, Execution};
use crate::rosetta::{self, RenderMode};
use crate::serial::{self, Format};
use crate::store::UnitStore;
use crate::views::unit_label;

pub const RUBRIC_VERSION: u32 = 1;
/// Digits after the decimal point in serialized reports.
pub const PRECISION: usize = 6;

fn decimal<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.PRECISION$}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Facet {
    F,
    A,
    I,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChecklistItem {
    pub facet: Facet,
    pub code: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetScores {
    #[serde(serialize_with = "decimal")]
    pub f: f64,
    #[serde(serialize_with = "decimal")]
    pub a: f64,
    #[serde(serialize_with = "decimal")]
    pub i: f64,
    #[serde(serialize_with = "decimal")]
    pub r: f64,
    pub rubric_version: u32,
    /// Applicable checklist items only.
    pub checklist: Vec<ChecklistItem>,
}

impl FacetScores {
    /// Arithmetic mean of the four facets.
    pub fn scalar(&self) -> f64 {
        (self.f + self.a + self.i + self.r) / 4.0
    }

    pub fn get(&self, facet: Facet) -> f64 {
        match facet {
            Facet::F => self.f,
            Facet::A => self.a,
            Facet::I => self.i,
            Facet::R => self.r,
        }
    }
}

fn crosswalkable_to_rosetta(s: &StatementUnit, store: &UnitStore) -> bool {
    rosetta::crosswalk(s, Form::Rosetta, store.registries()).is_ok()
}

fn rendering_available(unit: &Unit, store: &UnitStore) -> bool {
    match unit {
        Unit::Statement(s) => {
            rosetta::render(s, RenderMode::Label, store.registries()).is_ok()
                || s.manifestations.values().any(|m| m.as_text().is_some())
        }
        Unit::Compound(_) => !unit_label(unit, store).is_empty(),
    }
}

/// The checklist. Items bound to content (schema, rosetta crosswalk) apply
/// to statement units only.
pub fn checklist(unit: &Unit, store: &UnitStore) -> Vec<ChecklistItem> {
    let g = unit.gupri();
    let meta = unit.meta();
    let reg = store.registries();
    let item = |facet, code, passed| ChecklistItem {
        facet,
        code,
        passed,
    };
    let mut out = vec![
        item(
            Facet::F,
            "gupri-well-formed",
            Gupri::parse(g.as_str()).is_ok_and(|p| p == *g),
        ),
        item(
            Facet::F,
            "class-registered",
            reg.class(unit.class_ref()).is_some(),
        ),
        item(
            Facet::F,
            "type-declared",
            match unit {
                Unit::Statement(_) => meta.statement_typology.is_some(),
                Unit::Compound(_) => true,
            },
        ),
        item(Facet::A, "retrievable", store.get(g) == Some(unit)),
        item(
            Facet::A,
            "serializable",
            Format::ALL
                .iter()
                .any(|&f| f.accepts(unit) && serial::serialize(unit, f, store).is_ok()),
        ),
        item(
            Facet::A,
            "references-resolve",
            store.external_references(unit).is_empty(),
        ),
    ];
    if unit.is_statement() {
        out.push(item(
            Facet::I,
            "schema-resolves",
            meta.schema_ref
                .as_ref()
                .is_some_and(|sch| reg.schema(sch).is_some()),
        ));
    }
    out.push(item(
        Facet::I,
        "logical-framework-declared",
        meta.logical_framework.is_some(),
    ));
    if let Unit::Statement(s) = unit {
        out.push(item(
            Facet::I,
            "crosswalkable",
            crosswalkable_to_rosetta(s, store),
        ));
    }
    out.extend([
        item(Facet::R, "provenance", meta.creator.is_some()),
        item(Facet::R, "license", meta.license.is_some()),
        item(Facet::R, "rendering", rendering_available(unit, store)),
    ]);
    out
}

pub fn score_fair_facets(unit: &Unit, store: &UnitStore) -> FacetScores {
    let list = checklist(unit, store);
    let frac = |facet| {
        let items: Vec<&ChecklistItem> = list.iter().filter(|i| i.facet == facet).collect();
        items.iter().filter(|i| i.passed).count() as f64 / items.len() as f64
    };
    FacetScores {
        f: frac(Facet::F),
        a: frac(Facet::A),
        i: frac(Facet::I),
        r: frac(Facet::R),
        rubric_version: RUBRIC_VERSION,
        checklist: list,
    }
}

// ---- complexity ------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityWeights {
    pub richness: u64,
    pub depth: u64,
}

impl Default for ComplexityWeights {
    fn default() -> Self {
        Self {
            richness: 1,
            depth: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Complexity {
    /// Distinct classes in the transitive closure, the unit's own included.
    pub richness: u64,
    /// Longest membership chain below the unit; 0 for statement units.
    pub depth: u64,
    pub complexity: u64,
}

pub fn granular_complexity(unit: &Gupri, store: &UnitStore) -> Result<Complexity> {
    granular_complexity_weighted(unit, store, ComplexityWeights::default())
}

pub fn granular_complexity_weighted(
    unit: &Gupri,
    store: &UnitStore,
    w: ComplexityWeights,
) -> Result<Complexity> {
    let classes: HashSet<&Gupri> = store
        .closure(unit)?
        .into_iter()
        .map(Unit::class_ref)
        .collect();
    let richness = classes.len() as u64;
    let depth = store.depth(unit)? as u64;
    Ok(Complexity {
        richness,
        depth,
        complexity: w.richness * richness + w.depth * depth,
    })
}

/// Class GUPRIs of every unit reachable from `root` (itself included), with
/// the number of distinct units of each class.
pub fn inventory_classes(root: &Gupri, store: &UnitStore) -> Result<BTreeMap<Gupri, usize>> {
    let mut out = BTreeMap::new();
    for u in store.closure(root)? {
        *out.entry(u.class_ref().clone()).or_insert(0) += 1;
    }
    Ok(out)
}

// ---- aggregation -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Aggregation {
    Mean,
    /// One weight per statement member, in GUPRI order. `None` weighs all
    /// members equally.
    Weighted {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    /// Mean of the per-level means, where a member's level is its shortest
    /// membership distance from the root.
    Normalised,
}

impl Aggregation {
    pub fn token(&self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::Weighted { .. } => "weighted",
            Aggregation::Normalised => "normalised",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "mean" => Ok(Aggregation::Mean),
            "weighted" => Ok(Aggregation::Weighted { weights: None }),
            "normalised" => Ok(Aggregation::Normalised),
            other => Err(Error::NotFound(format!("aggregation method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberScore {
    pub unit: Gupri,
    pub level: usize,
    #[serde(serialize_with = "decimal")]
    pub scalar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub unit: Gupri,
    pub facets: FacetScores,
    /// The unit's own score: the mean of its facets.
    #[serde(serialize_with = "decimal")]
    pub scalar: f64,
    pub richness: u64,
    pub depth: u64,
    pub complexity: u64,
    pub members: Vec<MemberScore>,
    #[serde(serialize_with = "decimal")]
    pub mean_fairness: f64,
    #[serde(serialize_with = "decimal")]
    pub granular_fairness: f64,
    pub aggregation: Aggregation,
    pub inventory: BTreeMap<Gupri, usize>,
    pub precision: usize,
}

/// Shortest membership distance from `root` to every reachable unit.
fn levels(root: &Gupri, store: &UnitStore) -> BTreeMap<Gupri, usize> {
    let mut out = BTreeMap::from([(root.clone(), 0)]);
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(g) = queue.pop_front() {
        let d = out[&g];
        if let Some(Unit::Compound(c)) = store.get(&g) {
            for m in c.member_gupris() {
                if !out.contains_key(m) {
                    out.insert(m.clone(), d + 1);
                    queue.push_back(m.clone());
                }
            }
        }
    }
    out
}

fn aggregate(members: &[MemberScore], aggregation: &Aggregation) -> Result<f64> {
    if members.is_empty() {
        if let Aggregation::Weighted { weights: Some(w) } = aggregation {
            if !w.is_empty() {
                return Err(Error::Weight {
                    expected: 0,
                    got: w.len(),
                });
            }
        }
        return Ok(0.0);
    }
    let n = members.len() as f64;
    Ok(match aggregation {
        Aggregation::Mean => members.iter().map(|m| m.scalar).sum::<f64>() / n,
        Aggregation::Weighted { weights } => {
            let equal;
            let w = match weights {
                Some(w) => w,
                None => {
                    equal = vec![1.0; members.len()];
                    &equal
                }
            };
            if w.len() != members.len() {
                return Err(Error::Weight {
                    expected: members.len(),
                    got: w.len(),
                });
            }
            let total: f64 = w.iter().sum();
            members
                .iter()
                .zip(w)
                .map(|(m, w)| w * m.scalar)
                .sum::<f64>()
                / total
        }
        Aggregation::Normalised => {
            let mut by_level: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for m in members {
                by_level.entry(m.level).or_default().push(m.scalar);
            }
            let means: Vec<f64> = by_level
                .values()
                .map(|v| v.iter().sum::<f64>() / v.len() as f64)
                .collect();
            means.iter().sum::<f64>() / means.len() as f64
        }
    })
}

pub fn granular_fairness(
    unit: &Gupri,
    store: &UnitStore,
    aggregation: Aggregation,
) -> Result<FairnessReport> {
    granular_fairness_with(unit, store, aggregation, Execution::default())
}

pub fn granular_fairness_with(
    unit: &Gupri,
    store: &UnitStore,
    aggregation: Aggregation,
    exec: Execution,
) -> Result<FairnessReport> {
    let root = store.resolve(unit)?;
    let facets = score_fair_facets(root, store);
    let c = granular_complexity(unit, store)?;
    let lv = levels(unit, store);
    let mut statements: Vec<&StatementUnit> = store.transitive_statements(unit)?;
    statements.sort_by(|a, b| a.gupri.cmp(&b.gupri));
    let members = par::map(exec, &statements, |s| MemberScore {
        unit: s.gupri.clone(),
        level: lv[&s.gupri],
        scalar: score_fair_facets(store.resolve(&s.gupri).expect("closure member"), store).scalar(),
    });
    let mean_fairness = aggregate(&members, &aggregation)?;
    Ok(FairnessReport {
        unit: unit.clone(),
        scalar: facets.scalar(),
        facets,
        richness: c.richness,
        depth: c.depth,
        complexity: c.complexity,
        members,
        mean_fairness,
        granular_fairness: mean_fairness * c.complexity as f64,
        aggregation,
        inventory: inventory_classes(unit, store)?,
        precision: PRECISION,
    })
}
