//! Granulation criteria, partial orders, granularity trees and
//! criterion-mixing audits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{ContentManifestation, Form, Frame, Object, StatementUnit};
use crate::par::{self, Execution};
use crate::registry::Registries;
use crate::rosetta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    BonaFide,
    Fiat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalUnity {
    InternalPhysicalForces,
    PhysicalCovering,
    EngineeredAssembly,
    BearingFunction,
    CommonOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GranulationCriterion {
    pub gupri: Gupri,
    pub relation_ref: Gupri,
    pub entity_category_ref: Gupri,
    pub boundary_kind: BoundaryKind,
    pub frame: Frame,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal_unity: Option<CausalUnity>,
}

impl GranulationCriterion {
    /// Relation and entity category must be registered terms.
    pub fn check(&self, reg: &Registries) -> Result<()> {
        for (what, g) in [
            ("relation", &self.relation_ref),
            ("entity category", &self.entity_category_ref),
        ] {
            if reg.term(g).is_none() {
                return Err(Error::Rejected(format!(
                    "criterion {what} {g} is not a registered term"
                )));
            }
        }
        Ok(())
    }

    pub fn effective(&self) -> EffectiveCriterion {
        EffectiveCriterion {
            relation_ref: self.relation_ref.clone(),
            entity_category_ref: self.entity_category_ref.clone(),
            frame: self.frame,
        }
    }
}

// ---- partial orders ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Counterexample<T> {
    Antisymmetric { a: T, b: T },
    Transitive { a: T, b: T, c: T },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialOrderReport<T> {
    pub domain: Vec<T>,
    /// Always true: reflexive pairs are implied.
    pub reflexive: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
    pub counterexamples: Vec<Counterexample<T>>,
}

impl<T> PartialOrderReport<T> {
    pub fn is_partial_order(&self) -> bool {
        self.reflexive && self.antisymmetric && self.transitive
    }
}

/// Checks the three partial-order axioms over the elements mentioned in
/// `pairs`. Reflexive pairs are implied, so `a <= a` never has to be
/// stated; antisymmetry and transitivity are checked on the stated pairs
/// plus those implied ones. Counterexamples come sorted by domain order.
pub fn check_partial_order<T: Ord + Clone + Send + Sync>(
    pairs: &[(T, T)],
) -> PartialOrderReport<T> {
    check_partial_order_with(pairs, Execution::default())
}

pub fn check_partial_order_with<T: Ord + Clone + Send + Sync>(
    pairs: &[(T, T)],
    exec: Execution,
) -> PartialOrderReport<T> {
    let domain: Vec<T> = pairs
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&T, usize> = domain.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let n = domain.len();
    let mut rel = vec![vec![false; n]; n];
    for (a, b) in pairs {
        rel[index[a]][index[b]] = true;
    }
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    let succ: Vec<Vec<usize>> = rel
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| **x)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let rows: Vec<usize> = (0..n).collect();
    let mut found: Vec<(u8, usize, usize, usize)> = par::flat_map(exec, &rows, |&a| {
        let mut out = Vec::new();
        for &b in &succ[a] {
            if b > a && rel[b][a] {
                out.push((1, a, b, 0));
            }
            for &c in &succ[b] {
                if !rel[a][c] {
                    out.push((2, a, b, c));
                }
            }
        }
        out
    });
    found.sort_unstable();
    let counterexamples: Vec<Counterexample<T>> = found
        .into_iter()
        .map(|(k, a, b, c)| match k {
            1 => Counterexample::Antisymmetric {
                a: domain[a].clone(),
                b: domain[b].clone(),
            },
            _ => Counterexample::Transitive {
                a: domain[a].clone(),
                b: domain[b].clone(),
                c: domain[c].clone(),
            },
        })
        .collect();
    let antisymmetric = !counterexamples
        .iter()
        .any(|c| matches!(c, Counterexample::Antisymmetric { .. }));
    let transitive = !counterexamples
        .iter()
        .any(|c| matches!(c, Counterexample::Transitive { .. }));
    PartialOrderReport {
        domain,
        reflexive: true,
        antisymmetric,
        transitive,
        counterexamples,
    }
}

// ---- granularity trees ---------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GranularityTree {
    pub criterion: GranulationCriterion,
    pub nodes: BTreeSet<Gupri>,
    /// Child to parent; the root has no entry.
    pub parent: BTreeMap<Gupri, Gupri>,
    /// Nodes whose children are declared to exhaust them.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub exhaustive: BTreeSet<Gupri>,
    /// Declared extents: which portions of the whole each node covers.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extents: BTreeMap<Gupri, BTreeSet<String>>,
}

impl GranularityTree {
    pub fn roots(&self) -> Vec<&Gupri> {
        self.nodes
            .iter()
            .filter(|n| !self.parent.contains_key(*n))
            .collect()
    }

    pub fn children(&self, node: &Gupri) -> Vec<&Gupri> {
        self.parent
            .iter()
            .filter(|(_, p)| *p == node)
            .map(|(c, _)| c)
            .collect()
    }

    /// Depth of every node reachable from the root; empty for a non-tree.
    pub fn levels(&self) -> BTreeMap<Gupri, usize> {
        let mut out = BTreeMap::new();
        let roots = self.roots();
        let [root] = roots.as_slice() else { return out };
        let mut children: BTreeMap<&Gupri, Vec<&Gupri>> = BTreeMap::new();
        for (c, p) in &self.parent {
            children.entry(p).or_default().push(c);
        }
        let mut stack = vec![(*root, 0)];
        while let Some((n, d)) = stack.pop() {
            if out.insert(n.clone(), d).is_some() {
                continue;
            }
            for c in children.get(n).into_iter().flatten() {
                stack.push((c, d + 1));
            }
        }
        out
    }
}

/// The `(child, parent)` relation instance a statement unit expresses:
/// the child is the unit's subject, the parent the object of its triple
/// whose predicate is the criterion's relation.
pub fn relation_instance(
    unit: &StatementUnit,
    relation: &Gupri,
    reg: &Registries,
) -> Result<(Gupri, Gupri)> {
    let graph = match unit.manifestation(Form::Graph) {
        Some(ContentManifestation::Graph(g)) => g.clone(),
        _ => match rosetta::crosswalk(unit, Form::Graph, reg)?.manifestation(Form::Graph) {
            Some(ContentManifestation::Graph(g)) => g.clone(),
            _ => {
                return Err(Error::NoCrosswalk(format!(
                    "{} has no graph form",
                    unit.gupri
                )))
            }
        },
    };
    let parents: Vec<&Gupri> = graph
        .triples
        .iter()
        .filter(|t| t.predicate == *relation)
        .filter_map(|t| match &t.object {
            Object::Resource(g) => Some(g),
            Object::Literal(_) => None,
        })
        .collect();
    match parents.as_slice() {
        [p] => Ok((unit.subject_ref.clone(), (*p).clone())),
        [] => Err(Error::CriterionViolation(format!(
            "unit {} does not express relation {relation}",
            unit.gupri
        ))),
        _ => Err(Error::CriterionViolation(format!(
            "unit {} expresses relation {relation} more than once",
            unit.gupri
        ))),
    }
}

/// Assembles a tree from relation instances carried by statement units.
pub fn build_granularity_tree(
    units: &[&StatementUnit],
    criterion: &GranulationCriterion,
    reg: &Registries,
) -> Result<GranularityTree> {
    let instances = units
        .iter()
        .map(|u| relation_instance(u, &criterion.relation_ref, reg))
        .collect::<Result<Vec<_>>>()?;
    tree_from_instances(&instances, criterion)
}

/// Assembles a tree from `(child, parent)` pairs.
pub fn tree_from_instances(
    instances: &[(Gupri, Gupri)],
    criterion: &GranulationCriterion,
) -> Result<GranularityTree> {
    if instances.is_empty() {
        return Err(Error::Structural("no relation instances".into()));
    }
    let mut parent: BTreeMap<Gupri, Gupri> = BTreeMap::new();
    let mut nodes = BTreeSet::new();
    for (child, p) in instances {
        if child == p {
            return Err(Error::Structural(format!("{child} is its own parent")));
        }
        nodes.insert(child.clone());
        nodes.insert(p.clone());
        match parent.get(child) {
            Some(existing) if existing != p => {
                return Err(Error::Structural(format!(
                    "{child} has two parents: {existing} and {p}"
                )))
            }
            _ => {
                parent.insert(child.clone(), p.clone());
            }
        }
    }
    for start in parent.keys() {
        let mut seen = BTreeSet::from([start]);
        let mut cur = start;
        while let Some(p) = parent.get(cur) {
            if !seen.insert(p) {
                return Err(Error::Structural(format!("cycle through {p}")));
            }
            cur = p;
        }
    }
    let tree = GranularityTree {
        criterion: criterion.clone(),
        nodes,
        parent,
        exhaustive: BTreeSet::new(),
        extents: BTreeMap::new(),
    };
    let roots = tree.roots();
    if roots.len() != 1 {
        let names: Vec<String> = roots.iter().map(|g| g.to_string()).collect();
        return Err(Error::Structural(format!(
            "several roots: {}",
            names.join(", ")
        )));
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeIssue {
    pub code: &'static str,
    pub nodes: Vec<Gupri>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub issues: Vec<TreeIssue>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }

    fn push(&mut self, code: &'static str, nodes: Vec<Gupri>, message: String) {
        self.issues.push(TreeIssue {
            code,
            nodes,
            missing: Vec::new(),
            message,
        });
    }
}

/// Checks tree axioms, per-level disjointness of declared extents and, when
/// `whole_extent` is given, exhaustiveness of sibling sets under every node
/// flagged exhaustive.
pub fn validate_granularity_tree(
    t: &GranularityTree,
    whole_extent: Option<&BTreeMap<Gupri, BTreeSet<String>>>,
) -> TreeReport {
    let mut report = TreeReport::default();
    for (c, p) in &t.parent {
        if !t.nodes.contains(c) || !t.nodes.contains(p) {
            report.push(
                "unknown-node",
                vec![c.clone(), p.clone()],
                format!("edge {c} -> {p} leaves the node set"),
            );
        }
        if c == p {
            report.push("cycle", vec![c.clone()], format!("{c} is its own parent"));
        }
    }
    let roots = t.roots();
    if roots.len() != 1 {
        report.push(
            "root-count",
            roots.iter().map(|g| (*g).clone()).collect(),
            format!("expected one root, found {}", roots.len()),
        );
    }
    let levels = t.levels();
    let unreachable: Vec<Gupri> = t
        .nodes
        .iter()
        .filter(|n| !levels.contains_key(*n))
        .cloned()
        .collect();
    if !unreachable.is_empty() && roots.len() == 1 {
        report.push(
            "disconnected",
            unreachable,
            "nodes not reachable from the root (cycle or detached part)".into(),
        );
    }

    let mut by_level: BTreeMap<usize, Vec<&Gupri>> = BTreeMap::new();
    for (n, d) in &levels {
        by_level.entry(*d).or_default().push(n);
    }
    for nodes in by_level.values() {
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                let (Some(ea), Some(eb)) = (t.extents.get(*a), t.extents.get(*b)) else {
                    continue;
                };
                let shared: Vec<String> = ea.intersection(eb).cloned().collect();
                if !shared.is_empty() {
                    report.issues.push(TreeIssue {
                        code: "overlap",
                        nodes: vec![(*a).clone(), (*b).clone()],
                        message: format!("{a} and {b} share {} extent members", shared.len()),
                        missing: shared,
                    });
                }
            }
        }
    }

    if let Some(whole) = whole_extent {
        for node in &t.exhaustive {
            let Some(parent_extent) = whole.get(node).or_else(|| t.extents.get(node)) else {
                continue;
            };
            let covered: BTreeSet<&String> = t
                .children(node)
                .into_iter()
                .filter_map(|c| whole.get(c).or_else(|| t.extents.get(c)))
                .flatten()
                .collect();
            let missing: Vec<String> = parent_extent
                .iter()
                .filter(|m| !covered.contains(m))
                .cloned()
                .collect();
            if !missing.is_empty() {
                report.issues.push(TreeIssue {
                    code: "not-exhaustive",
                    nodes: vec![node.clone()],
                    message: format!("children of {node} miss {} extent members", missing.len()),
                    missing,
                });
            }
        }
    }
    report
}

// ---- reference perspective -----------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerspectiveLevel {
    pub label: String,
    pub categories: Vec<Gupri>,
}

/// Ordered granularity levels, coarsest first, with the entity categories
/// that belong to each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferencePerspective {
    pub gupri: Gupri,
    pub name: String,
    pub levels: Vec<PerspectiveLevel>,
    /// Categories that aggregate building blocks without forming a new one.
    #[serde(default)]
    pub aggregates: Vec<Gupri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LevelAssignment {
    Level { index: usize, label: String },
    Aggregate,
}

impl ReferencePerspective {
    /// Levels must be non-empty and no category may appear twice.
    pub fn check(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::Validation(
                "a perspective needs at least one level".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for g in self
            .levels
            .iter()
            .flat_map(|l| &l.categories)
            .chain(&self.aggregates)
        {
            if !seen.insert(g) {
                return Err(Error::Validation(format!("category {g} is assigned twice")));
            }
        }
        Ok(())
    }
}

pub fn assign_building_block_level(
    category: &Gupri,
    perspective: &ReferencePerspective,
) -> Result<LevelAssignment> {
    if perspective.aggregates.contains(category) {
        return Ok(LevelAssignment::Aggregate);
    }
    perspective
        .levels
        .iter()
        .enumerate()
        .find(|(_, l)| l.categories.contains(category))
        .map(|(index, l)| LevelAssignment::Level {
            index,
            label: l.label.clone(),
        })
        .ok_or_else(|| Error::Unclassified(category.clone()))
}

// ---- criterion audit -----------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EffectiveCriterion {
    pub relation_ref: Gupri,
    pub entity_category_ref: Gupri,
    pub frame: Frame,
}

/// One level of a hierarchy under audit, tagged with the criterion that
/// actually separates it from the level before.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDescriptor {
    pub label: String,
    pub effective: EffectiveCriterion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingFlag {
    pub from: String,
    pub to: String,
    /// Which components differ: `relation`, `entity-category`, `frame`.
    pub differs: Vec<&'static str>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub flags: Vec<MixingFlag>,
}

/// Flags each adjacent level pair whose finer level is reached under a
/// criterion other than the declared one.
pub fn audit_granulation_criterion(
    declared: &GranulationCriterion,
    levels: &[LevelDescriptor],
) -> AuditReport {
    let d = declared.effective();
    let flags = levels
        .windows(2)
        .filter_map(|w| {
            let e = &w[1].effective;
            let mut differs = Vec::new();
            if e.relation_ref != d.relation_ref {
                differs.push("relation");
            }
            if e.entity_category_ref != d.entity_category_ref {
                differs.push("entity-category");
            }
            if e.frame != d.frame {
                differs.push("frame");
            }
            (!differs.is_empty()).then(|| MixingFlag {
                from: w[0].label.clone(),
                to: w[1].label.clone(),
                differs,
            })
        })
        .collect();
    AuditReport { flags }
}

// ---- whole-file checks ---------------------------------------------------

/// A self-contained granularity check: relation instances under one
/// criterion, optionally with leaf extents and a level ladder to audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCheck {
    pub criterion: GranulationCriterion,
    /// `(part, whole)` pairs.
    pub instances: Vec<(Gupri, Gupri)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extents: Option<BTreeMap<Gupri, BTreeSet<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeCheckReport {
    /// Axioms of the ancestor order the tree induces.
    pub order: PartialOrderReport<Gupri>,
    pub tree: TreeReport,
    pub audit: AuditReport,
}

impl TreeCheckReport {
    pub fn passed(&self) -> bool {
        self.order.is_partial_order() && self.tree.passed() && self.audit.flags.is_empty()
    }
}

/// `(descendant, ancestor)` pairs of a tree, the transitive closure of its
/// parent links.
pub fn ancestor_pairs(t: &GranularityTree) -> Vec<(Gupri, Gupri)> {
    let mut out = Vec::new();
    for node in &t.nodes {
        let mut seen = BTreeSet::new();
        let mut cur = t.parent.get(node);
        while let Some(p) = cur {
            if !seen.insert(p) {
                break;
            }
            out.push((node.clone(), p.clone()));
            cur = t.parent.get(p);
        }
    }
    out
}

pub fn tree_check(input: &TreeCheck) -> Result<TreeCheckReport> {
    let tree = tree_from_instances(&input.instances, &input.criterion)?;
    Ok(TreeCheckReport {
        order: check_partial_order(&ancestor_pairs(&tree)),
        tree: validate_granularity_tree(&tree, input.extents.as_ref()),
        audit: audit_granulation_criterion(&input.criterion, &input.levels),
    })
}
