//! In-memory unit store: minting, construction, validation and traversal.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::granularity::GranulationCriterion;
use crate::gupri::{Gupri, LocalKind, MintMode, DEFAULT_AUTHORITY};
use crate::model::{
    canonicalize, compound_seed, statement_seed, ArgumentRole, CompoundKind, CompoundUnit,
    ContentManifestation, Form, Frame, GraphContent, LogicalFramework, Member, MetaRecord,
    StatementUnit, Typology, Unit,
};
use crate::par::{self, Execution};
use crate::registry::{ClassCategory, Registries};
use crate::rosetta::{self, to_rosetta};

/// Units keyed by GUPRI plus the registries they are interpreted against.
#[derive(Debug, Clone)]
pub struct UnitStore {
    authority: String,
    units: BTreeMap<Gupri, Unit>,
    criteria: BTreeMap<Gupri, GranulationCriterion>,
    registries: Registries,
    issued: HashSet<Gupri>,
}

/// Stores compare by content; the set of minted-but-unused GUPRIs is ignored.
impl PartialEq for UnitStore {
    fn eq(&self, other: &Self) -> bool {
        self.authority == other.authority
            && self.units == other.units
            && self.criteria == other.criteria
            && self.registries == other.registries
    }
}

impl Default for UnitStore {
    fn default() -> Self {
        Self::new(Registries::with_builtins())
    }
}

/// Optional compound settings that only some kinds use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompoundOptions {
    pub frame: Option<Frame>,
    pub criterion: Option<Gupri>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Violation,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub unit: Option<Gupri>,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    fn violation(&mut self, code: &'static str, message: impl Into<String>) {
        self.issues.push(Issue {
            code,
            severity: Severity::Violation,
            message: message.into(),
        });
    }

    fn warning(&mut self, code: &'static str, message: impl Into<String>) {
        self.issues.push(Issue {
            code,
            severity: Severity::Warning,
            message: message.into(),
        });
    }

    /// Violations only; warnings never make a unit invalid.
    pub fn violations(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Violation)
    }

    pub fn is_valid(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn has(&self, code: &str) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }
}

impl UnitStore {
    pub fn new(registries: Registries) -> Self {
        Self::with_authority(DEFAULT_AUTHORITY, registries)
    }

    pub fn with_authority(authority: &str, registries: Registries) -> Self {
        Self {
            authority: authority.to_string(),
            units: BTreeMap::new(),
            criteria: BTreeMap::new(),
            registries,
            issued: HashSet::new(),
        }
    }

    pub fn authority(&self) -> &str {
        &self.authority
    }

    pub fn registries(&self) -> &Registries {
        &self.registries
    }

    pub fn registries_mut(&mut self) -> &mut Registries {
        &mut self.registries
    }

    // ---- minting --------------------------------------------------------

    /// Digest-derived GUPRI of `bytes`, or a fresh random one never issued
    /// by this store before.
    pub fn mint_gupri(&mut self, mode: MintMode, bytes: Option<&[u8]>) -> Result<Gupri> {
        match mode {
            MintMode::Deterministic => {
                let bytes = bytes.ok_or(Error::MissingInput(
                    "deterministic minting needs canonical bytes",
                ))?;
                Gupri::from_content(&self.authority, bytes)
            }
            MintMode::Random => loop {
                let g = Gupri::random(&self.authority)?;
                if !self.units.contains_key(&g) && self.issued.insert(g.clone()) {
                    return Ok(g);
                }
            },
        }
    }

    // ---- access -----------------------------------------------------------

    pub fn get(&self, g: &Gupri) -> Option<&Unit> {
        self.units.get(g)
    }

    pub fn resolve(&self, g: &Gupri) -> Result<&Unit> {
        self.units
            .get(g)
            .ok_or_else(|| Error::NotFound(format!("unit {g}")))
    }

    pub fn statement(&self, g: &Gupri) -> Result<&StatementUnit> {
        self.resolve(g)?
            .as_statement()
            .ok_or_else(|| Error::Kind(format!("{g} is a compound unit")))
    }

    pub fn compound(&self, g: &Gupri) -> Result<&CompoundUnit> {
        self.resolve(g)?
            .as_compound()
            .ok_or_else(|| Error::Kind(format!("{g} is a statement unit")))
    }

    pub fn contains(&self, g: &Gupri) -> bool {
        self.units.contains_key(g)
    }

    /// Units in GUPRI order.
    pub fn units(&self) -> impl Iterator<Item = &Unit> {
        self.units.values()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn criterion(&self, g: &Gupri) -> Option<&GranulationCriterion> {
        self.criteria.get(g)
    }

    pub fn criteria(&self) -> impl Iterator<Item = &GranulationCriterion> {
        self.criteria.values()
    }

    pub fn add_criterion(&mut self, c: GranulationCriterion) -> Result<Gupri> {
        c.check(&self.registries)?;
        let g = c.gupri.clone();
        self.criteria.insert(g.clone(), c);
        Ok(g)
    }

    /// Stores a unit. Storing an identical unit again is a no-op; storing a
    /// different unit under a taken GUPRI is rejected.
    pub fn insert(&mut self, unit: impl Into<Unit>) -> Result<Gupri> {
        let unit = unit.into();
        let g = unit.gupri().clone();
        match self.units.get(&g) {
            Some(old) if *old == unit => Ok(g),
            Some(_) => Err(Error::Rejected(format!(
                "a different unit is already stored as {g}"
            ))),
            None => {
                self.units.insert(g.clone(), unit);
                Ok(g)
            }
        }
    }

    /// Replaces a statement unit with a copy that only adds manifestations.
    pub fn extend(&mut self, unit: StatementUnit) -> Result<Gupri> {
        let old = self.statement(&unit.gupri)?;
        let mut stripped = unit.clone();
        stripped.manifestations = old.manifestations.clone();
        stripped
            .meta
            .extra
            .retain(|k, _| !k.starts_with("crosswalk."));
        let mut old_meta = old.clone();
        old_meta
            .meta
            .extra
            .retain(|k, _| !k.starts_with("crosswalk."));
        let keeps = old
            .manifestations
            .iter()
            .all(|(f, m)| unit.manifestations.get(f) == Some(m));
        if stripped != old_meta || !keeps {
            return Err(Error::Rejected(format!(
                "{} may only gain manifestations; edits mint a successor unit",
                unit.gupri
            )));
        }
        let g = unit.gupri.clone();
        self.units.insert(g.clone(), Unit::Statement(unit));
        Ok(g)
    }

    /// Crosswalks a stored unit and writes the extended unit back.
    pub fn crosswalk(&mut self, g: &Gupri, target: Form) -> Result<StatementUnit> {
        let unit = rosetta::crosswalk(self.statement(g)?, target, &self.registries)?;
        self.extend(unit.clone())?;
        Ok(unit)
    }

    // ---- construction -----------------------------------------------------

    /// Builds a statement unit with a deterministic GUPRI over the class and
    /// the canonical bytes of `manifestation`.
    pub fn make_statement_unit(
        &self,
        class_ref: &Gupri,
        subject_ref: &Gupri,
        manifestation: ContentManifestation,
        mut meta: MetaRecord,
    ) -> Result<StatementUnit> {
        match self.registries.class(class_ref) {
            Some(c) if c.category == ClassCategory::Statement => {}
            _ => return Err(Error::UnknownClass(class_ref.clone())),
        }
        manifestation.check()?;
        if manifestation.form() == Form::TextSnippet {
            match meta.logical_framework {
                None => meta.logical_framework = Some(LogicalFramework::None),
                Some(LogicalFramework::None) => {}
                Some(ref other) => {
                    return Err(Error::SchemaViolation(format!(
                        "text-snippet content cannot declare logical framework {}",
                        other.token()
                    )))
                }
            }
        }
        if let Some(problem) =
            self.content_problem(&manifestation, subject_ref, meta.schema_ref.as_ref())
        {
            return Err(Error::SchemaViolation(problem));
        }
        let seed = statement_seed(class_ref, &manifestation)?;
        let form = manifestation.form();
        Ok(StatementUnit {
            gupri: Gupri::from_content(&self.authority, &seed)?,
            class_ref: class_ref.clone(),
            subject_ref: subject_ref.clone(),
            typology: meta.statement_typology.unwrap_or(Typology::Assertional),
            manifestations: BTreeMap::from([(form, manifestation)]),
            canonical_form: form,
            meta,
        })
    }

    /// Builds a compound unit of `kind`. `class_ref` defaults to the kind's
    /// built-in class.
    pub fn make_compound_unit(
        &self,
        kind: CompoundKind,
        class_ref: Option<&Gupri>,
        members: Vec<Member>,
        options: CompoundOptions,
        meta: MetaRecord,
    ) -> Result<CompoundUnit> {
        let class_ref = class_ref
            .cloned()
            .unwrap_or_else(|| crate::vocab::compound_class(kind));
        match self.registries.class(&class_ref) {
            Some(c) if c.category == ClassCategory::Compound(kind) => {}
            _ => return Err(Error::UnknownClass(class_ref)),
        }
        let seed = compound_seed(
            kind,
            &class_ref,
            &members,
            options.frame,
            options.criterion.as_ref(),
        );
        let unit = CompoundUnit {
            gupri: Gupri::from_content(&self.authority, &seed)?,
            class_ref,
            kind,
            members,
            frame: options.frame,
            criterion_ref: options.criterion,
            meta,
        };
        let mut seen = HashSet::new();
        for m in &unit.members {
            if m.gupri == unit.gupri {
                return Err(Error::Cycle(unit.gupri.clone()));
            }
            if !self.contains(&m.gupri) {
                return Err(Error::DanglingMember(m.gupri.clone()));
            }
            if !seen.insert(&m.gupri) {
                return Err(Error::Validation(format!(
                    "member {} listed twice",
                    m.gupri
                )));
            }
        }
        if let Some(problem) = self.kind_problems(&unit).into_iter().next() {
            return Err(problem);
        }
        for m in &unit.members {
            if self.reaches(&m.gupri, &unit.gupri) {
                return Err(Error::Cycle(unit.gupri.clone()));
            }
        }
        Ok(unit)
    }

    fn kind_problems(&self, c: &CompoundUnit) -> Vec<Error> {
        let mut out = Vec::new();
        match c.kind {
            CompoundKind::Item => {
                let mut subject: Option<&Gupri> = None;
                for m in &c.members {
                    match self.get(&m.gupri).and_then(Unit::as_statement) {
                        Some(s) => match subject {
                            None => subject = Some(&s.subject_ref),
                            Some(first) if *first != s.subject_ref => out
                                .push(Error::SubjectMismatch(first.clone(), s.subject_ref.clone())),
                            Some(_) => {}
                        },
                        None if self.contains(&m.gupri) => out.push(Error::Validation(format!(
                            "item members must be statement units, {} is not",
                            m.gupri
                        ))),
                        None => {}
                    }
                }
            }
            CompoundKind::LogicalArgument => {
                let premises = c
                    .members
                    .iter()
                    .filter(|m| m.role == Some(ArgumentRole::Premise))
                    .count();
                let conclusions = c
                    .members
                    .iter()
                    .filter(|m| m.role == Some(ArgumentRole::Conclusion))
                    .count();
                if premises == 0 || conclusions == 0 || premises + conclusions != c.members.len() {
                    out.push(Error::Validation(
                        "a logical argument needs role tags on every member, with at least one premise and one conclusion"
                            .into(),
                    ));
                }
            }
            CompoundKind::Context if c.frame.is_none() => out.push(Error::Validation(
                "a context unit needs a frame of reference".into(),
            )),
            CompoundKind::GranularityTree | CompoundKind::GranularItemGroup => {
                match &c.criterion_ref {
                    None => out.push(Error::Validation(format!(
                        "a {} unit needs a granulation criterion",
                        c.kind
                    ))),
                    Some(g) if !self.criteria.contains_key(g) => {
                        out.push(Error::NotFound(format!("granulation criterion {g}")))
                    }
                    Some(_) => {}
                }
            }
            _ => {}
        }
        if c.kind != CompoundKind::LogicalArgument && c.members.iter().any(|m| m.role.is_some()) {
            out.push(Error::Validation(
                "role tags are only allowed on logical-argument members".into(),
            ));
        }
        out
    }

    /// Why `m` cannot be content of a unit about `subject` under `schema`.
    fn content_problem(
        &self,
        m: &ContentManifestation,
        subject: &Gupri,
        schema: Option<&Gupri>,
    ) -> Option<String> {
        let reg = &self.registries;
        if let ContentManifestation::Rosetta(r) = m {
            let Some(mm) = reg.metamodel(&r.metamodel) else {
                return Some(format!("metamodel {} is not registered", r.metamodel));
            };
            if let Err(e) = rosetta::check_bindings(mm, &r.slots) {
                return Some(e.to_string());
            }
        }
        let Some(schema) = schema else {
            return match m {
                ContentManifestation::Rosetta(r) if r.subject != *subject => {
                    Some(format!("content subject {} is not {subject}", r.subject))
                }
                _ => None,
            };
        };
        let Some(record) = reg.schema(schema) else {
            return Some(format!("schema {schema} does not resolve"));
        };
        match (m, record.metamodel()) {
            (ContentManifestation::TextSnippet(_), _) => None,
            (_, Some(mm)) => match to_rosetta(m, mm, reg) {
                Ok(r) if r.subject == *subject => None,
                Ok(r) => Some(format!("content subject {} is not {subject}", r.subject)),
                Err(e) => Some(e.to_string()),
            },
            (ContentManifestation::Rosetta(r), None) => Some(format!(
                "rosetta content instantiates {} but the schema is {schema}",
                r.metamodel
            )),
            (ContentManifestation::Tabular(t), None) if t.schema != *schema => {
                Some(format!("row schema {} is not {schema}", t.schema))
            }
            // Fallback rows carry no subject column; the subject names the row itself.
            (ContentManifestation::Tabular(_), None)
                if *schema == *crate::vocab::ORPHAN_ROW_SCHEMA =>
            {
                None
            }
            (ContentManifestation::Tabular(t), None) => {
                (!t.cells.iter().any(|(_, v)| v == subject.as_str()))
                    .then(|| format!("no cell names subject {subject}"))
            }
            (ContentManifestation::Graph(g), None) => {
                (!g.triples.iter().any(|t| t.subject == *subject))
                    .then(|| format!("no triple has subject {subject}"))
            }
        }
    }

    // ---- validation -------------------------------------------------------

    /// Every violated invariant of `unit`, each with a machine-readable code.
    pub fn validate_unit(&self, unit: &Unit) -> ValidationReport {
        let mut report = ValidationReport {
            unit: Some(unit.gupri().clone()),
            issues: Vec::new(),
        };
        let meta = unit.meta();
        if let Some(schema) = &meta.schema_ref {
            if self.registries.schema(schema).is_none() {
                report.violation(
                    "schema-unresolved",
                    format!("schema {schema} does not resolve"),
                );
            }
        }
        match unit {
            Unit::Statement(s) => self.validate_statement(s, &mut report),
            Unit::Compound(c) => self.validate_compound(c, &mut report),
        }
        report
    }

    fn validate_statement(&self, s: &StatementUnit, report: &mut ValidationReport) {
        match self.registries.class(&s.class_ref) {
            Some(c) if c.category == ClassCategory::Statement => {}
            Some(_) => report.violation(
                "class-category",
                format!("{} is not a statement-unit class", s.class_ref),
            ),
            None => report.violation(
                "unknown-class",
                format!("class {} is not registered", s.class_ref),
            ),
        }
        if s.manifestations.is_empty() {
            report.violation(
                "no-manifestation",
                "a statement unit needs at least one manifestation",
            );
            return;
        }
        if !s.manifestations.contains_key(&s.canonical_form) {
            report.violation(
                "canonical-form-missing",
                format!("canonical form {} has no manifestation", s.canonical_form),
            );
            return;
        }
        for (form, m) in &s.manifestations {
            if m.form() != *form {
                report.violation(
                    "form-key-mismatch",
                    format!("{} content stored under {form}", m.form()),
                );
            }
            if let Err(e) = m.check() {
                report.violation("manifestation-invalid", format!("{form}: {e}"));
            } else if let Some(problem) =
                self.content_problem(m, &s.subject_ref, s.meta.schema_ref.as_ref())
            {
                report.violation("schema-violation", format!("{form}: {problem}"));
            }
        }
        if s.canonical_form == Form::TextSnippet
            && !matches!(
                s.meta.logical_framework,
                None | Some(LogicalFramework::None)
            )
        {
            report.violation(
                "logical-framework",
                "text-snippet content must declare logical framework none",
            );
        }
        if s.gupri.local_kind() == LocalKind::Digest {
            let expected = statement_seed(&s.class_ref, s.canonical())
                .and_then(|seed| Gupri::from_content(s.gupri.authority(), &seed));
            if expected.ok().as_ref() != Some(&s.gupri) {
                report.violation(
                    "gupri-digest",
                    "GUPRI is not the digest of class and canonical content",
                );
            }
        }
        self.check_consistency(s, report);
    }

    fn check_consistency(&self, s: &StatementUnit, report: &mut ValidationReport) {
        if s.manifestations.len() < 2 {
            return;
        }
        let Some(mm) = s
            .meta
            .schema_ref
            .as_ref()
            .and_then(|g| self.registries.metamodel(g))
        else {
            report.violation(
                "crosswalk-inconsistent",
                "several manifestations but no rosetta metamodel to compare them through",
            );
            return;
        };
        let pivots: Vec<(Form, Result<Vec<u8>>)> = s
            .manifestations
            .iter()
            .map(|(f, m)| {
                let bytes = to_rosetta(m, mm, &self.registries)
                    .and_then(|r| canonicalize(&ContentManifestation::Rosetta(r)));
                (*f, bytes)
            })
            .collect();
        let reference = &pivots
            .iter()
            .find(|(f, _)| *f == s.canonical_form)
            .expect("canonical present")
            .1;
        for (form, bytes) in &pivots {
            match (reference, bytes) {
                (Ok(a), Ok(b)) if a == b => {}
                (_, Err(e)) => report.violation(
                    "crosswalk-inconsistent",
                    format!("{form} does not crosswalk: {e}"),
                ),
                _ => report.violation(
                    "crosswalk-inconsistent",
                    format!("{form} and {} carry different statements", s.canonical_form),
                ),
            }
        }
    }

    fn validate_compound(&self, c: &CompoundUnit, report: &mut ValidationReport) {
        match self.registries.class(&c.class_ref) {
            Some(r) if r.category == ClassCategory::Compound(c.kind) => {}
            Some(_) => report.violation(
                "class-category",
                format!("{} is not a {} class", c.class_ref, c.kind),
            ),
            None => report.violation(
                "unknown-class",
                format!("class {} is not registered", c.class_ref),
            ),
        }
        if c.members.is_empty() {
            report.warning("empty-collection", "compound unit has no members");
        }
        let mut seen = HashSet::new();
        for m in &c.members {
            if m.gupri == c.gupri {
                report.violation("cycle", format!("{} lists itself as a member", c.gupri));
            } else if !self.contains(&m.gupri) {
                report.violation(
                    "dangling-member",
                    format!("member {} does not resolve", m.gupri),
                );
            } else if self.reaches(&m.gupri, &c.gupri) {
                report.violation("cycle", format!("membership cycle through {}", m.gupri));
            }
            if !seen.insert(&m.gupri) {
                report.violation(
                    "duplicate-member",
                    format!("member {} listed twice", m.gupri),
                );
            }
        }
        for e in self.kind_problems(c) {
            let code = match &e {
                Error::SubjectMismatch(..) => "item-subject-mismatch",
                Error::NotFound(_) => "criterion-unresolved",
                _ => match c.kind {
                    CompoundKind::Item => "item-non-statement",
                    CompoundKind::LogicalArgument => "argument-roles",
                    CompoundKind::Context => "frame-required",
                    CompoundKind::GranularityTree | CompoundKind::GranularItemGroup => {
                        "criterion-required"
                    }
                    _ => "role-tags",
                },
            };
            report.violation(code, e.to_string());
        }
    }

    // ---- traversal --------------------------------------------------------

    /// Whether `target` is reachable from `from` along membership edges.
    pub fn reaches(&self, from: &Gupri, target: &Gupri) -> bool {
        let mut stack = vec![from];
        let mut seen = HashSet::new();
        while let Some(g) = stack.pop() {
            if g == target {
                return true;
            }
            if !seen.insert(g) {
                continue;
            }
            if let Some(Unit::Compound(c)) = self.get(g) {
                stack.extend(c.member_gupris());
            }
        }
        false
    }

    /// Distinct units reachable from `root` (itself included), in depth-first
    /// pre-order following member order.
    pub fn closure(&self, root: &Gupri) -> Result<Vec<&Unit>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut on_path = HashSet::new();
        self.visit(root, &mut seen, &mut on_path, &mut out)?;
        Ok(out)
    }

    fn visit<'a>(
        &'a self,
        g: &Gupri,
        seen: &mut HashSet<Gupri>,
        on_path: &mut HashSet<Gupri>,
        out: &mut Vec<&'a Unit>,
    ) -> Result<()> {
        if on_path.contains(g) {
            return Err(Error::Cycle(g.clone()));
        }
        if !seen.insert(g.clone()) {
            return Ok(());
        }
        let unit = self
            .get(g)
            .ok_or_else(|| Error::DanglingMember(g.clone()))?;
        out.push(unit);
        if let Unit::Compound(c) = unit {
            on_path.insert(g.clone());
            for m in c.member_gupris() {
                self.visit(m, seen, on_path, out)?;
            }
            on_path.remove(g);
        }
        Ok(())
    }

    /// Distinct statement units reachable from `root`.
    pub fn transitive_statements(&self, root: &Gupri) -> Result<Vec<&StatementUnit>> {
        Ok(self
            .closure(root)?
            .into_iter()
            .filter_map(Unit::as_statement)
            .collect())
    }

    /// Length of the longest membership chain below `root`.
    pub fn depth(&self, root: &Gupri) -> Result<usize> {
        let mut memo = BTreeMap::new();
        self.depth_of(root, &mut memo, &mut HashSet::new())
    }

    fn depth_of(
        &self,
        g: &Gupri,
        memo: &mut BTreeMap<Gupri, usize>,
        on_path: &mut HashSet<Gupri>,
    ) -> Result<usize> {
        if let Some(d) = memo.get(g) {
            return Ok(*d);
        }
        if !on_path.insert(g.clone()) {
            return Err(Error::Cycle(g.clone()));
        }
        let unit = self
            .get(g)
            .ok_or_else(|| Error::DanglingMember(g.clone()))?;
        let mut d = 0;
        if let Unit::Compound(c) = unit {
            for m in c.member_gupris() {
                d = d.max(1 + self.depth_of(m, memo, on_path)?);
            }
        }
        on_path.remove(g);
        memo.insert(g.clone(), d);
        Ok(d)
    }

    /// Compound units ordered so that members come before the units that
    /// contain them. Fails on a membership cycle.
    pub fn topological_order(&self) -> Result<Vec<Gupri>> {
        let mut indegree: BTreeMap<&Gupri, usize> = BTreeMap::new();
        for u in self.units.values() {
            if let Unit::Compound(c) = u {
                indegree.entry(&c.gupri).or_insert(0);
                for m in c.member_gupris() {
                    if matches!(self.get(m), Some(Unit::Compound(_))) {
                        *indegree.entry(&c.gupri).or_insert(0) += 1;
                    }
                }
            }
        }
        let mut containers: BTreeMap<&Gupri, Vec<&Gupri>> = BTreeMap::new();
        for u in self.units.values() {
            if let Unit::Compound(c) = u {
                for m in c.member_gupris() {
                    if matches!(self.get(m), Some(Unit::Compound(_))) {
                        containers.entry(m).or_default().push(&c.gupri);
                    }
                }
            }
        }
        let mut ready: BTreeSet<&Gupri> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(g, _)| *g)
            .collect();
        let mut out = Vec::with_capacity(indegree.len());
        while let Some(g) = ready.pop_first() {
            out.push(g.clone());
            for parent in containers.get(g).into_iter().flatten() {
                let d = indegree.get_mut(parent).expect("known compound");
                *d -= 1;
                if *d == 0 {
                    ready.insert(parent);
                }
            }
        }
        match indegree.iter().find(|(g, d)| **d > 0 && !out.contains(g)) {
            Some((g, _)) => Err(Error::Cycle((*g).clone())),
            None => Ok(out),
        }
    }

    /// Union of the graph content of every transitive statement member.
    /// Members without a graph manifestation are crosswalked on the fly.
    pub fn merge_content_graphs(&self, c: &CompoundUnit) -> Result<ContentManifestation> {
        self.merge_content_graphs_with(c, Execution::default())
    }

    pub fn merge_content_graphs_with(
        &self,
        c: &CompoundUnit,
        exec: Execution,
    ) -> Result<ContentManifestation> {
        let mut members = Vec::new();
        let mut seen = HashSet::from([c.gupri.clone()]);
        for m in c.member_gupris() {
            if seen.contains(m) {
                continue;
            }
            for u in self.closure(m)? {
                if seen.insert(u.gupri().clone()) {
                    if let Unit::Statement(s) = u {
                        members.push(s);
                    }
                }
            }
        }
        let graphs = par::try_map(exec, &members, |s| self.graph_of(s))?;
        Ok(ContentManifestation::Graph(GraphContent::new(
            graphs.into_iter().flatten(),
        )))
    }

    /// Graph triples of a statement unit, crosswalking when needed.
    pub fn graph_of(&self, s: &StatementUnit) -> Result<Vec<crate::model::Triple>> {
        if let Some(ContentManifestation::Graph(g)) = s.manifestation(Form::Graph) {
            return Ok(g.triples.iter().cloned().collect());
        }
        match rosetta::crosswalk(s, Form::Graph, &self.registries) {
            Ok(u) => Ok(u
                .manifestation(Form::Graph)
                .and_then(ContentManifestation::as_graph)
                .map(|g| g.triples.iter().cloned().collect())
                .unwrap_or_default()),
            Err(_) => Err(Error::NonMergeableMember(s.gupri.clone())),
        }
    }

    /// Member GUPRIs that are referenced but not stored.
    pub fn unresolved_references(&self) -> BTreeSet<Gupri> {
        self.units
            .values()
            .filter_map(Unit::as_compound)
            .flat_map(|c| c.member_gupris())
            .filter(|g| !self.contains(g))
            .cloned()
            .collect()
    }

    /// Every GUPRI the unit's content and meta-record refer to that resolves
    /// nowhere in this store or its registries.
    pub fn external_references(&self, unit: &Unit) -> BTreeSet<Gupri> {
        let mut refs: Vec<&Gupri> = vec![unit.class_ref()];
        let meta = unit.meta();
        refs.extend(meta.schema_ref.iter());
        match unit {
            Unit::Compound(c) => {
                refs.extend(c.member_gupris());
                refs.extend(c.criterion_ref.iter());
            }
            Unit::Statement(s) => refs.extend(s.meta.source_refs.iter()),
        }
        refs.into_iter()
            .filter(|g| {
                !self.contains(g)
                    && self.registries.lookup_any(g).is_err()
                    && !self.criteria.contains_key(*g)
            })
            .cloned()
            .collect()
    }

    pub(crate) fn set_criteria(
        &mut self,
        criteria: impl IntoIterator<Item = GranulationCriterion>,
    ) {
        self.criteria = criteria.into_iter().map(|c| (c.gupri.clone(), c)).collect();
    }
}

impl From<StatementUnit> for Unit {
    fn from(s: StatementUnit) -> Self {
        Unit::Statement(s)
    }
}

impl From<CompoundUnit> for Unit {
    fn from(c: CompoundUnit) -> Self {
        Unit::Compound(c)
    }
}
