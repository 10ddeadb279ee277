//! The shipped fixture corpus.
//!
//! Vocabulary, metamodels, a populated unit store, granularity data and
//! partition inputs used by the tests, the benches, the command line and the
//! JSON files under `fixtures/`.

use std::collections::{BTreeMap, BTreeSet};

use crate::granularity::{
    BoundaryKind, CausalUnity, EffectiveCriterion, GranulationCriterion, LevelDescriptor,
    PerspectiveLevel, ReferencePerspective, TreeCheck,
};
use crate::gupri::Gupri;
use crate::model::{
    ArgumentRole, CompoundKind, ContentManifestation, Datatype, Decimal, Form, Frame, License,
    Literal, LogicalFramework, Member, MetaRecord, Object, SlotValue, TextSnippet, Timestamp,
    Triple, Typology,
};
use crate::partition::{ClassPattern, InputCollection, Record};
use crate::registry::{
    BuiltinOp, ClassCategory, ClassRecord, EntityMapping, MappingKind, OperationRecord, Registries,
    SchemaRecord, TermRecord, WorkflowRecord,
};
use crate::rosetta::{
    from_rosetta, instantiate_statement, GraphBinding, GraphSlotBinding, RosettaMetamodel, SlotDef,
    SlotKind, TabularBinding, TabularColumn,
};
use crate::store::{CompoundOptions, UnitStore};

pub const AUTHORITY: &str = "fixture";
pub const LICENSE: &str = "CC-BY-4.0";
pub const CANONICAL_SENTENCE: &str = "Parasite X has a mass of 24.76 grams.";
pub const VARIANT_SENTENCE: &str = "The mass of Parasite X is 24.76 grams";
pub const CREATED_AT: &str = "2024-05-01T12:00:00Z";

pub fn g(name: &str) -> Gupri {
    Gupri::named(AUTHORITY, "fx", name)
}

// ---- vocabulary ------------------------------------------------------------

/// `(key, label, symbol)` for every fixture term.
const TERMS: &[(&str, &str, Option<&str>)] = &[
    ("curator", "fixture curator", None),
    ("parasite-x", "Parasite X", None),
    ("mass", "mass", None),
    ("length", "length", None),
    ("width", "width", None),
    ("gram", "gram", Some("grams")),
    ("millimetre", "millimetre", Some("mm")),
    ("degree-celsius", "degree Celsius", Some("°C")),
    ("hour", "hour", Some("hours")),
    ("unit-of-measure", "unit of measure", None),
    ("temperature-unit", "temperature unit", None),
    ("time-unit", "time unit", None),
    ("sample-1", "sample", None),
    ("swan-1", "swan", None),
    ("cygnet-1", "cygnet", None),
    ("mute-swan-1", "mute swan", None),
    ("white", "white", None),
    // predicates
    ("measured-object", "measured object", None),
    ("has-quality", "has quality", None),
    ("has-value", "has value", None),
    ("has-unit", "has unit", None),
    ("incubated-entity", "incubated entity", None),
    ("incubation-temperature", "incubation temperature", None),
    ("has-temperature-unit", "has temperature unit", None),
    ("incubation-duration", "incubation duration", None),
    ("has-duration-unit", "has duration unit", None),
    ("coloured-entity", "coloured entity", None),
    ("has-colour", "has colour", None),
    ("part", "part", None),
    ("part-of", "part of", None),
    ("scale-containment", "contained at a coarser scale in", None),
    ("note", "note", None),
    // entity categories
    ("material-building-block", "material building block", None),
    ("scale-level", "scale level", None),
    ("functional-system", "functional system", None),
    (
        "multicellular-organism",
        "multicellular organism with epidermis",
        None,
    ),
    (
        "epithelial-compartment",
        "epithelially delimited compartment",
        None,
    ),
    ("eukaryotic-cell", "eukaryotic cell", None),
    ("organelle", "organelle", None),
    ("prokaryotic-cell", "prokaryotic cell", None),
    ("molecule", "molecule", None),
    ("atom", "atom", None),
    ("tissue", "tissue", None),
    ("population", "population", None),
    ("portion-of-matter", "portion of matter", None),
    // granularity tree nodes
    ("organism-1", "organism 1", None),
    ("heart-1", "heart 1", None),
    ("liver-1", "liver 1", None),
    ("cardiomyocyte-1", "cardiomyocyte 1", None),
    ("cardiomyocyte-2", "cardiomyocyte 2", None),
    ("hepatocyte-1", "hepatocyte 1", None),
    ("peroxisome-1", "peroxisome 1", None),
    ("peroxisome-2", "peroxisome 2", None),
    ("peroxisome-3", "peroxisome 3", None),
    ("catalase-1", "catalase 1", None),
    ("catalase-2", "catalase 2", None),
    ("catalase-3", "catalase 3", None),
    ("iron-1", "iron 1", None),
    ("oxygen-1", "oxygen 1", None),
    ("iron-2", "iron 2", None),
    ("iron-3", "iron 3", None),
];

pub fn terms() -> Vec<TermRecord> {
    TERMS
        .iter()
        .map(|&(key, label, symbol)| {
            let mut t = TermRecord::new(g(key), label);
            t.symbol = symbol.map(str::to_string);
            if key == "mass" {
                t.definition = "The amount of matter in a material entity.".into();
                t.mappings.push(EntityMapping {
                    target: Gupri::named("pato", "term", "mass"),
                    kind: MappingKind::Exact,
                    record: g("mapping-mass-pato"),
                });
            }
            t
        })
        .collect()
}

fn resource_slot(name: &str) -> SlotDef {
    SlotDef {
        name: name.into(),
        kind: SlotKind::Resource,
    }
}

fn quantity_slot(name: &str, category: &str) -> SlotDef {
    SlotDef {
        name: name.into(),
        kind: SlotKind::Quantity {
            unit_category: g(category),
        },
    }
}

fn bind(slot: &str, predicate: &str, unit_predicate: Option<&str>) -> GraphSlotBinding {
    GraphSlotBinding {
        slot: slot.into(),
        predicate: g(predicate),
        unit_predicate: unit_predicate.map(g),
    }
}

fn column(slot: &str, column: &str, unit_column: Option<&str>) -> TabularColumn {
    TabularColumn {
        slot: slot.into(),
        column: column.into(),
        unit_column: unit_column.map(str::to_string),
    }
}

pub fn measurement_metamodel() -> RosettaMetamodel {
    RosettaMetamodel {
        gupri: g("mm-measurement"),
        name: "measurement statement".into(),
        label_template: "{subject} has a {quality} of {value}.".into(),
        slots: vec![
            resource_slot("quality"),
            quantity_slot("value", "unit-of-measure"),
        ],
        surface_patterns: vec!["The {quality} of {subject} is {value}.".into()],
        graph_binding: GraphBinding {
            subject_predicate: g("measured-object"),
            slots: vec![
                bind("quality", "has-quality", None),
                bind("value", "has-value", Some("has-unit")),
            ],
        },
        tabular_binding: TabularBinding {
            subject_column: "object".into(),
            columns: vec![
                column("quality", "quality", None),
                column("value", "value", Some("unit")),
            ],
        },
        version: 0,
    }
}

pub fn incubation_metamodel() -> RosettaMetamodel {
    RosettaMetamodel {
        gupri: g("mm-incubation"),
        name: "incubation statement".into(),
        label_template: "This {subject} was incubated at {temperature} for {duration}.".into(),
        slots: vec![
            quantity_slot("temperature", "temperature-unit"),
            quantity_slot("duration", "time-unit"),
        ],
        surface_patterns: vec!["The {subject} was kept at {temperature} for {duration}.".into()],
        graph_binding: GraphBinding {
            subject_predicate: g("incubated-entity"),
            slots: vec![
                bind(
                    "temperature",
                    "incubation-temperature",
                    Some("has-temperature-unit"),
                ),
                bind("duration", "incubation-duration", Some("has-duration-unit")),
            ],
        },
        tabular_binding: TabularBinding {
            subject_column: "sample".into(),
            columns: vec![
                column("temperature", "temperature", Some("temperature_unit")),
                column("duration", "duration", Some("duration_unit")),
            ],
        },
        version: 0,
    }
}

pub fn colour_metamodel() -> RosettaMetamodel {
    RosettaMetamodel {
        gupri: g("mm-colour"),
        name: "colour assertion".into(),
        label_template: "This {subject} is {colour}".into(),
        slots: vec![resource_slot("colour")],
        surface_patterns: vec!["The {subject} is {colour}".into()],
        graph_binding: GraphBinding {
            subject_predicate: g("coloured-entity"),
            slots: vec![bind("colour", "has-colour", None)],
        },
        tabular_binding: TabularBinding {
            subject_column: "entity".into(),
            columns: vec![column("colour", "colour", None)],
        },
        version: 0,
    }
}

pub fn parthood_metamodel() -> RosettaMetamodel {
    RosettaMetamodel {
        gupri: g("mm-parthood"),
        name: "parthood statement".into(),
        label_template: "{subject} is part of {whole}.".into(),
        slots: vec![resource_slot("whole")],
        surface_patterns: Vec::new(),
        graph_binding: GraphBinding {
            subject_predicate: g("part"),
            slots: vec![bind("whole", "part-of", None)],
        },
        tabular_binding: TabularBinding {
            subject_column: "part".into(),
            columns: vec![column("whole", "whole", None)],
        },
        version: 0,
    }
}

pub fn metamodels() -> Vec<RosettaMetamodel> {
    vec![
        measurement_metamodel(),
        incubation_metamodel(),
        colour_metamodel(),
        parthood_metamodel(),
    ]
}

/// `(class key, label, metamodel)` for the statement classes.
pub fn statement_classes() -> Vec<(Gupri, &'static str, Gupri)> {
    vec![
        (
            g("measurement-statement-unit"),
            "measurement statement unit",
            g("mm-measurement"),
        ),
        (
            g("incubation-statement-unit"),
            "incubation statement unit",
            g("mm-incubation"),
        ),
        (
            g("colour-assertion-unit"),
            "colour assertion unit",
            g("mm-colour"),
        ),
        (
            g("parthood-statement-unit"),
            "parthood statement unit",
            g("mm-parthood"),
        ),
    ]
}

pub fn item_class() -> Gupri {
    g("material-entity-item-unit")
}

pub fn operations() -> Vec<OperationRecord> {
    let schemas: Vec<Gupri> = metamodels().into_iter().map(|m| m.gupri).collect();
    [
        ("op-normalize", "normalize", BuiltinOp::Normalize),
        (
            "op-crosswalk-graph",
            "crosswalk to graph",
            BuiltinOp::Crosswalk(Form::Graph),
        ),
        (
            "op-crosswalk-tabular",
            "crosswalk to tabular",
            BuiltinOp::Crosswalk(Form::Tabular),
        ),
        (
            "op-crosswalk-rosetta",
            "crosswalk to rosetta",
            BuiltinOp::Crosswalk(Form::Rosetta),
        ),
        (
            "op-crosswalk-text",
            "crosswalk to text",
            BuiltinOp::Crosswalk(Form::TextSnippet),
        ),
        ("op-render", "render", BuiltinOp::Render),
        ("op-score", "score", BuiltinOp::Score),
        ("op-validate", "validate", BuiltinOp::Validate),
    ]
    .into_iter()
    .map(|(key, name, op)| OperationRecord {
        gupri: g(key),
        name: name.into(),
        compatible_schemas: schemas.clone(),
        executable: op,
        description: String::new(),
    })
    .collect()
}

pub fn normalize_workflow() -> WorkflowRecord {
    WorkflowRecord {
        gupri: g("wf-normalize-graph-score"),
        name: "normalize, crosswalk to graph, score".into(),
        steps: vec![g("op-normalize"), g("op-crosswalk-graph"), g("op-score")],
        bindings: Vec::new(),
    }
}

/// Built-in registries plus every fixture record.
pub fn registries() -> Registries {
    let mut r = Registries::with_builtins();
    for t in terms() {
        r.register_term(t).expect("fixture term");
    }
    for m in metamodels() {
        r.register_schema(SchemaRecord::rosetta(m), None)
            .expect("fixture metamodel");
    }
    for (gupri, label, schema) in statement_classes() {
        r.register_class(ClassRecord {
            gupri,
            label: label.into(),
            category: ClassCategory::Statement,
            schema: Some(schema),
        })
        .expect("fixture class");
    }
    r.register_class(ClassRecord {
        gupri: item_class(),
        label: "material entity item unit".into(),
        category: ClassCategory::Compound(CompoundKind::Item),
        schema: None,
    })
    .expect("fixture class");
    for op in operations() {
        r.register_operation(op).expect("fixture operation");
    }
    r.register_workflow(normalize_workflow())
        .expect("fixture workflow");
    r
}

// ---- granularity -----------------------------------------------------------

pub fn building_block_criterion() -> GranulationCriterion {
    GranulationCriterion {
        gupri: g("criterion-building-block"),
        relation_ref: g("part-of"),
        entity_category_ref: g("material-building-block"),
        boundary_kind: BoundaryKind::BonaFide,
        frame: Frame::SpatioStructural,
        causal_unity: Some(CausalUnity::PhysicalCovering),
    }
}

/// The six building-block levels, coarsest first.
pub fn building_block_perspective() -> ReferencePerspective {
    let level = |label: &str, cats: &[&str]| PerspectiveLevel {
        label: label.into(),
        categories: cats.iter().map(|c| g(c)).collect(),
    };
    ReferencePerspective {
        gupri: g("perspective-building-blocks"),
        name: "material building blocks".into(),
        levels: vec![
            level(
                "multicellular organism with epidermis",
                &["multicellular-organism"],
            ),
            level(
                "epithelially delimited compartment",
                &["epithelial-compartment"],
            ),
            level("membrane-within-membrane entity", &["eukaryotic-cell"]),
            level("single membrane entity", &["organelle", "prokaryotic-cell"]),
            level("molecule", &["molecule"]),
            level("atom", &["atom"]),
        ],
        aggregates: ["tissue", "population", "portion-of-matter"]
            .iter()
            .map(|c| g(c))
            .collect(),
    }
}

/// `(node, category, parent)` for the building-block tree; the root has no
/// parent.
const TREE: &[(&str, &str, Option<&str>)] = &[
    ("organism-1", "multicellular-organism", None),
    ("heart-1", "epithelial-compartment", Some("organism-1")),
    ("liver-1", "epithelial-compartment", Some("organism-1")),
    ("cardiomyocyte-1", "eukaryotic-cell", Some("heart-1")),
    ("cardiomyocyte-2", "eukaryotic-cell", Some("heart-1")),
    ("hepatocyte-1", "eukaryotic-cell", Some("liver-1")),
    ("peroxisome-1", "organelle", Some("cardiomyocyte-1")),
    ("peroxisome-2", "organelle", Some("cardiomyocyte-2")),
    ("peroxisome-3", "organelle", Some("hepatocyte-1")),
    ("catalase-1", "molecule", Some("peroxisome-1")),
    ("catalase-2", "molecule", Some("peroxisome-2")),
    ("catalase-3", "molecule", Some("peroxisome-3")),
    ("iron-1", "atom", Some("catalase-1")),
    ("oxygen-1", "atom", Some("catalase-1")),
    ("iron-2", "atom", Some("catalase-2")),
    ("iron-3", "atom", Some("catalase-3")),
];

/// The fifteen `(part, whole)` instances of the building-block tree.
pub fn part_of_instances() -> Vec<(Gupri, Gupri)> {
    TREE.iter()
        .filter_map(|(n, _, p)| p.map(|p| (g(n), g(p))))
        .collect()
}

/// Entity category of every tree node.
pub fn tree_categories() -> BTreeMap<Gupri, Gupri> {
    TREE.iter().map(|(n, c, _)| (g(n), g(c))).collect()
}

/// Each node's extent: the labels of the atoms it contains.
pub fn tree_extents() -> BTreeMap<Gupri, BTreeSet<String>> {
    let parent: BTreeMap<&str, &str> = TREE
        .iter()
        .filter_map(|(n, _, p)| p.map(|p| (*n, p)))
        .collect();
    let is_leaf = |n: &str| !parent.values().any(|p| *p == n);
    let mut out: BTreeMap<Gupri, BTreeSet<String>> = TREE
        .iter()
        .map(|(n, _, _)| (g(n), BTreeSet::new()))
        .collect();
    for (leaf, _, _) in TREE.iter().filter(|(n, _, _)| is_leaf(n)) {
        let mut cur = Some(*leaf);
        while let Some(n) = cur {
            out.get_mut(&g(n))
                .expect("tree node")
                .insert(leaf.to_string());
            cur = parent.get(n).copied();
        }
    }
    out
}

fn effective(relation: &str, category: &str, frame: Frame) -> EffectiveCriterion {
    EffectiveCriterion {
        relation_ref: g(relation),
        entity_category_ref: g(category),
        frame,
    }
}

/// The building-block levels tagged with their effective criteria; every
/// level is separated by the declared criterion.
pub fn building_block_levels() -> Vec<LevelDescriptor> {
    building_block_perspective()
        .levels
        .into_iter()
        .map(|l| LevelDescriptor {
            label: l.label,
            effective: building_block_criterion().effective(),
        })
        .collect()
}

/// The classic levels-of-organisation ladder. Tissues are separated by scale
/// and organs by function, so the ladder mixes criteria.
pub fn eldredge_levels() -> Vec<LevelDescriptor> {
    let declared = || {
        effective(
            "part-of",
            "material-building-block",
            Frame::SpatioStructural,
        )
    };
    let level = |label: &str, e: EffectiveCriterion| LevelDescriptor {
        label: label.into(),
        effective: e,
    };
    vec![
        level("atoms", declared()),
        level("molecules", declared()),
        level("cells", declared()),
        level(
            "tissues",
            effective("scale-containment", "scale-level", Frame::SpatioStructural),
        ),
        level(
            "organs",
            effective("part-of", "functional-system", Frame::Functional),
        ),
        level("organisms", declared()),
    ]
}

/// The building-block tree with its extents and its own level ladder.
pub fn building_block_check() -> TreeCheck {
    TreeCheck {
        criterion: building_block_criterion(),
        instances: part_of_instances(),
        extents: Some(tree_extents()),
        levels: building_block_levels(),
    }
}

/// The same tree audited against the levels-of-organisation ladder.
pub fn eldredge_check() -> TreeCheck {
    TreeCheck {
        levels: eldredge_levels(),
        ..building_block_check()
    }
}

/// Categories of the shipped perspective, each with its expected level
/// label or `aggregate`.
pub fn category_expectations() -> Vec<(Gupri, &'static str)> {
    vec![
        (
            g("multicellular-organism"),
            "multicellular organism with epidermis",
        ),
        (
            g("epithelial-compartment"),
            "epithelially delimited compartment",
        ),
        (g("eukaryotic-cell"), "membrane-within-membrane entity"),
        (g("organelle"), "single membrane entity"),
        (g("prokaryotic-cell"), "single membrane entity"),
        (g("molecule"), "molecule"),
        (g("atom"), "atom"),
        (g("tissue"), "aggregate"),
        (g("population"), "aggregate"),
        (g("portion-of-matter"), "aggregate"),
    ]
}

// ---- units -----------------------------------------------------------------

/// GUPRIs of the named fixture units.
#[derive(Debug, Clone)]
pub struct Handles {
    pub parasite_mass: Gupri,
    pub parasite_length: Gupri,
    pub parasite_width: Gupri,
    pub parasite_item: Gupri,
    /// Free-text variant of the parasite mass sentence.
    pub parasite_variant: Gupri,
    pub incubation: Gupri,
    pub swan_row: Gupri,
    pub swan_text: Gupri,
    pub cygnet: Gupri,
    pub mute_swan: Gupri,
    pub argument: Gupri,
    pub organism_mass: Gupri,
    pub organism_length: Gupri,
    pub heart_mass: Gupri,
    pub liver_mass: Gupri,
    /// Dataset A: the organism item unit alone.
    pub dataset_a: Gupri,
    pub heart_item: Gupri,
    pub liver_item: Gupri,
    /// Dataset B: organism and organ item units grouped together.
    pub dataset_b: Gupri,
    pub parthood: Vec<Gupri>,
    pub granularity_tree: Gupri,
    pub context: Gupri,
    pub standard: Gupri,
    pub empty: Gupri,
}

pub struct Fixture {
    pub store: UnitStore,
    pub handles: Handles,
}

pub fn created_at() -> Timestamp {
    Timestamp::parse(CREATED_AT).expect("fixture timestamp")
}

/// The full meta record the fixture units carry.
pub fn meta(
    schema: Option<Gupri>,
    framework: LogicalFramework,
    typology: Option<Typology>,
) -> MetaRecord {
    let mut m =
        MetaRecord::new(g("curator"), created_at()).with_license(License::Token(LICENSE.into()));
    m.author = Some(g("curator"));
    m.schema_ref = schema;
    m.logical_framework = Some(framework);
    m.statement_typology = typology;
    m
}

fn quantity(value: &str, unit: &str) -> SlotValue {
    SlotValue::Quantity {
        value: Decimal::parse(value).expect("fixture decimal"),
        unit: g(unit),
    }
}

fn resource(key: &str) -> SlotValue {
    SlotValue::Resource { value: g(key) }
}

struct Builder {
    store: UnitStore,
}

impl Builder {
    fn statement(
        &mut self,
        class: &str,
        metamodel: &RosettaMetamodel,
        subject: &str,
        slots: Vec<SlotValue>,
        form: Form,
        typology: Typology,
    ) -> Gupri {
        let r = instantiate_statement(metamodel, g(subject), slots).expect("fixture bindings");
        let m =
            from_rosetta(&r, metamodel, form, self.store.registries()).expect("fixture crosswalk");
        self.content(class, subject, m, metamodel, typology)
    }

    fn content(
        &mut self,
        class: &str,
        subject: &str,
        m: ContentManifestation,
        metamodel: &RosettaMetamodel,
        typology: Typology,
    ) -> Gupri {
        let framework = if m.form() == Form::TextSnippet {
            LogicalFramework::None
        } else {
            LogicalFramework::DescriptionLogic
        };
        let meta = meta(Some(metamodel.gupri.clone()), framework, Some(typology));
        let unit = self
            .store
            .make_statement_unit(&g(class), &g(subject), m, meta)
            .expect("fixture statement unit");
        self.store.insert(unit).expect("fixture insert")
    }

    fn compound(
        &mut self,
        kind: CompoundKind,
        class: Option<Gupri>,
        members: Vec<Member>,
        options: CompoundOptions,
    ) -> Gupri {
        let unit = self
            .store
            .make_compound_unit(
                kind,
                class.as_ref(),
                members,
                options,
                meta(None, LogicalFramework::None, None),
            )
            .expect("fixture compound unit");
        self.store.insert(unit).expect("fixture insert")
    }
}

fn text(s: &str) -> ContentManifestation {
    ContentManifestation::TextSnippet(TextSnippet {
        text: s.into(),
        language: "en".into(),
        source: None,
        embedding: None,
    })
}

fn plain(gs: &[&Gupri]) -> Vec<Member> {
    gs.iter().map(|g| Member::plain((*g).clone())).collect()
}

/// The populated fixture store.
pub fn fixture() -> Fixture {
    let mut b = Builder {
        store: UnitStore::with_authority(AUTHORITY, registries()),
    };
    b.store
        .add_criterion(building_block_criterion())
        .expect("fixture criterion");
    let (mm, inc, col, part) = (
        measurement_metamodel(),
        incubation_metamodel(),
        colour_metamodel(),
        parthood_metamodel(),
    );
    let measurement = "measurement-statement-unit";
    let a = Typology::Assertional;

    let parasite_mass = b.statement(
        measurement,
        &mm,
        "parasite-x",
        vec![resource("mass"), quantity("24.76", "gram")],
        Form::Graph,
        a,
    );
    let parasite_length = b.statement(
        measurement,
        &mm,
        "parasite-x",
        vec![resource("length"), quantity("7.2", "millimetre")],
        Form::Rosetta,
        a,
    );
    let parasite_width = b.statement(
        measurement,
        &mm,
        "parasite-x",
        vec![resource("width"), quantity("3.1", "millimetre")],
        Form::Tabular,
        a,
    );
    let parasite_item = b.compound(
        CompoundKind::Item,
        Some(item_class()),
        plain(&[&parasite_mass, &parasite_length, &parasite_width]),
        CompoundOptions::default(),
    );

    let parasite_variant = b.content(measurement, "parasite-x", text(VARIANT_SENTENCE), &mm, a);

    let incubation = b.statement(
        "incubation-statement-unit",
        &inc,
        "sample-1",
        vec![quantity("37", "degree-celsius"), quantity("24", "hour")],
        Form::Rosetta,
        Typology::Contingent,
    );

    let colour = "colour-assertion-unit";
    let swan_row = b.statement(
        colour,
        &col,
        "swan-1",
        vec![resource("white")],
        Form::Tabular,
        a,
    );
    let swan_text = b.content(colour, "swan-1", text("This swan is white"), &col, a);
    let cygnet = b.statement(
        colour,
        &col,
        "cygnet-1",
        vec![resource("white")],
        Form::Graph,
        Typology::Contingent,
    );
    let mute_swan = b.statement(
        colour,
        &col,
        "mute-swan-1",
        vec![resource("white")],
        Form::Rosetta,
        Typology::Contingent,
    );
    let argument = b.compound(
        CompoundKind::LogicalArgument,
        None,
        vec![
            Member {
                gupri: cygnet.clone(),
                role: Some(ArgumentRole::Premise),
            },
            Member {
                gupri: mute_swan.clone(),
                role: Some(ArgumentRole::Premise),
            },
            Member {
                gupri: swan_row.clone(),
                role: Some(ArgumentRole::Conclusion),
            },
        ],
        CompoundOptions::default(),
    );

    let organism_mass = b.statement(
        measurement,
        &mm,
        "organism-1",
        vec![resource("mass"), quantity("52.3", "gram")],
        Form::Graph,
        a,
    );
    let organism_length = b.statement(
        measurement,
        &mm,
        "organism-1",
        vec![resource("length"), quantity("12.5", "millimetre")],
        Form::Graph,
        a,
    );
    let heart_mass = b.statement(
        measurement,
        &mm,
        "heart-1",
        vec![resource("mass"), quantity("0.42", "gram")],
        Form::Graph,
        a,
    );
    let liver_mass = b.statement(
        measurement,
        &mm,
        "liver-1",
        vec![resource("mass"), quantity("1.7", "gram")],
        Form::Tabular,
        a,
    );
    let item = |b: &mut Builder, ms: &[&Gupri]| {
        b.compound(
            CompoundKind::Item,
            Some(item_class()),
            plain(ms),
            CompoundOptions::default(),
        )
    };
    let dataset_a = item(&mut b, &[&organism_mass, &organism_length]);
    let heart_item = item(&mut b, &[&heart_mass]);
    let liver_item = item(&mut b, &[&liver_mass]);
    let dataset_b = b.compound(
        CompoundKind::ItemGroup,
        None,
        plain(&[&dataset_a, &heart_item, &liver_item]),
        CompoundOptions::default(),
    );

    let parthood: Vec<Gupri> = part_of_instances()
        .iter()
        .map(|(p, w)| {
            let r = instantiate_statement(
                &part,
                p.clone(),
                vec![SlotValue::Resource { value: w.clone() }],
            )
            .expect("fixture bindings");
            let m = from_rosetta(&r, &part, Form::Graph, b.store.registries())
                .expect("fixture crosswalk");
            let meta = meta(
                Some(part.gupri.clone()),
                LogicalFramework::DescriptionLogic,
                Some(Typology::Assertional),
            );
            let unit = b
                .store
                .make_statement_unit(&g("parthood-statement-unit"), p, m, meta)
                .expect("fixture parthood unit");
            b.store.insert(unit).expect("fixture insert")
        })
        .collect();
    let granularity_tree = b.compound(
        CompoundKind::GranularityTree,
        None,
        parthood.iter().cloned().map(Member::plain).collect(),
        CompoundOptions {
            frame: None,
            criterion: Some(building_block_criterion().gupri),
        },
    );
    let context = b.compound(
        CompoundKind::Context,
        None,
        plain(&[&parasite_item, &incubation]),
        CompoundOptions {
            frame: Some(Frame::SpatioStructural),
            criterion: None,
        },
    );
    let standard = b.compound(
        CompoundKind::StandardInformation,
        None,
        plain(&[&swan_row]),
        CompoundOptions::default(),
    );
    let empty = b.compound(
        CompoundKind::ItemGroup,
        None,
        Vec::new(),
        CompoundOptions::default(),
    );

    Fixture {
        store: b.store,
        handles: Handles {
            parasite_mass,
            parasite_length,
            parasite_width,
            parasite_item,
            parasite_variant,
            incubation,
            swan_row,
            swan_text,
            cygnet,
            mute_swan,
            argument,
            organism_mass,
            organism_length,
            heart_mass,
            liver_mass,
            dataset_a,
            heart_item,
            liver_item,
            dataset_b,
            parthood,
            granularity_tree,
            context,
            standard,
            empty,
        },
    }
}

// ---- partition inputs ------------------------------------------------------

/// Graph and tabular patterns for every fixture metamodel.
pub fn partition_patterns() -> Vec<ClassPattern> {
    let mut out = Vec::new();
    for (class, _, schema) in statement_classes() {
        let m = metamodels()
            .into_iter()
            .find(|m| m.gupri == schema)
            .expect("fixture metamodel");
        for form in [Form::Graph, Form::Tabular] {
            out.push(
                ClassPattern::from_metamodel(class.clone(), &m, form, 0).expect("fixture pattern"),
            );
        }
    }
    out
}

/// Graph content of every fixture statement unit plus two stray triples no
/// pattern claims.
pub fn graph_input(f: &Fixture) -> InputCollection {
    let mut triples = BTreeSet::new();
    for u in f.store.units() {
        if let Some(s) = u.as_statement() {
            if let Ok(graph) = f.store.graph_of(s) {
                triples.extend(graph);
            }
        }
    }
    triples.insert(Triple::new(
        g("parasite-x"),
        g("note"),
        Object::Literal(Literal::string("collected 2023")),
    ));
    triples.insert(Triple::new(
        g("swan-1"),
        g("note"),
        Object::Literal(Literal::string("seen at the lake")),
    ));
    InputCollection::graph(triples, Some(g("graph-input")))
}

/// A CSV table mixing measurement and colour rows, with one row no pattern
/// claims.
pub fn tabular_csv() -> String {
    let gs = |k: &str| g(k).to_string();
    let mut rows = vec!["object,quality,value,unit,entity,colour".to_string()];
    for (subject, quality, value, unit) in [
        ("parasite-x", "mass", "24.76", "gram"),
        ("parasite-x", "length", "7.2", "millimetre"),
        ("organism-1", "mass", "52.3", "gram"),
        ("heart-1", "mass", "0.42", "gram"),
    ] {
        rows.push(format!(
            "{},{},{value},{},,",
            gs(subject),
            gs(quality),
            gs(unit)
        ));
    }
    for subject in ["swan-1", "cygnet-1"] {
        rows.push(format!(",,,,{},{}", gs(subject), gs("white")));
    }
    rows.push(format!("{},,,,,{}", gs("liver-1"), "reddish brown"));
    rows.join("\n") + "\n"
}

pub fn tabular_input() -> InputCollection {
    InputCollection::from_csv(&tabular_csv(), Some(g("table-input"))).expect("fixture csv")
}

/// A synthetic graph of `statements` measurement statements, five triples
/// each, plus `strays` unclaimed triples.
pub fn large_graph_input(statements: usize, strays: usize) -> InputCollection {
    let mm = measurement_metamodel();
    let reg = registries();
    let mut triples = Vec::with_capacity(statements * 5 + strays);
    for i in 0..statements {
        let subject = Gupri::named(AUTHORITY, "specimen", &i.to_string());
        let value = format!("{}.{}", 1 + i % 97, i % 10);
        let r = instantiate_statement(
            &mm,
            subject,
            vec![resource("mass"), quantity(&value, "gram")],
        )
        .expect("bindings");
        match from_rosetta(&r, &mm, Form::Graph, &reg).expect("crosswalk") {
            ContentManifestation::Graph(gc) => triples.extend(gc.triples),
            _ => unreachable!(),
        }
    }
    for i in 0..strays {
        triples.push(Triple::new(
            Gupri::named(AUTHORITY, "specimen", &i.to_string()),
            g("note"),
            Object::Literal(Literal::new(i.to_string(), Datatype::Integer).expect("integer")),
        ));
    }
    InputCollection::graph(triples, None)
}

/// Records of a synthetic table with `rows` measurement rows.
pub fn large_tabular_input(rows: usize) -> InputCollection {
    let records = (0..rows)
        .map(|i| Record {
            row_id: format!("row-{}", i + 1),
            cells: vec![
                (
                    "object".into(),
                    Gupri::named(AUTHORITY, "specimen", &i.to_string()).to_string(),
                ),
                ("quality".into(), g("mass").to_string()),
                ("value".into(), format!("{}.{}", 1 + i % 97, i % 10)),
                ("unit".into(), g("gram").to_string()),
            ],
        })
        .collect();
    InputCollection::tabular(records, None)
}
