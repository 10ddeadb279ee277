//! The `semunit` command line.
//!
//! Every subcommand loads the store, makes one library call and prints its
//! result: a human rendering by default, the document form with
//! `--porcelain`. Exit status is 0 on success, 1 when the call fails or
//! reports a failed check, 2 on usage errors.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use semunit::facade::PartitionResponse;
use semunit::fairness::{granular_fairness, Aggregation};
use semunit::granularity::{tree_check, TreeCheck};
use semunit::model::{
    ArgumentRole, CompoundKind, Form, Frame, Member, MetaRecord, RosettaStatement, Timestamp, Unit,
};
use semunit::partition::{partition, verify_partition, ClassPattern, InputCollection, PatternSet};
use semunit::registry::{AnyRecord, RecordEntry, RecordFilter, RegistryKind};
use semunit::rosetta::{normalize_sentence, render_rosetta, RenderMode, RenderOutput};
use semunit::serial::{self, export_store, import_store, to_document, CrateTree, Document, Format};
use semunit::store::{CompoundOptions, Severity};
use semunit::{fixtures, views, vocab, Error, Gupri, Result, UnitStore};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "semunit",
    version,
    about = "Work with semantic units: partition, compose, crosswalk, serialize and score"
)]
pub struct Cli {
    /// Store directory. Without it the shipped fixture store is used and
    /// writes are discarded.
    #[arg(long, global = true, env = "SEMUNIT_STORE")]
    pub store: Option<PathBuf>,
    /// Print machine-readable documents instead of human renderings.
    #[arg(long, global = true)]
    pub porcelain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputFormat {
    Csv,
    Trig,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Item,
    ItemGroup,
    GranularityTree,
    GranularItemGroup,
    Context,
    LogicalArgument,
    StandardInformation,
}

impl From<KindArg> for CompoundKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Item => CompoundKind::Item,
            KindArg::ItemGroup => CompoundKind::ItemGroup,
            KindArg::GranularityTree => CompoundKind::GranularityTree,
            KindArg::GranularItemGroup => CompoundKind::GranularItemGroup,
            KindArg::Context => CompoundKind::Context,
            KindArg::LogicalArgument => CompoundKind::LogicalArgument,
            KindArg::StandardInformation => CompoundKind::StandardInformation,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FrameArg {
    SpatioStructural,
    Functional,
    Historical,
}

impl From<FrameArg> for Frame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::SpatioStructural => Frame::SpatioStructural,
            FrameArg::Functional => Frame::Functional,
            FrameArg::Historical => Frame::Historical,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormArg {
    TextSnippet,
    Rosetta,
    Graph,
    Tabular,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::TextSnippet => Form::TextSnippet,
            FormArg::Rosetta => Form::Rosetta,
            FormArg::Graph => Form::Graph,
            FormArg::Tabular => Form::Tabular,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Label,
    Graph,
    Table,
}

impl From<ModeArg> for RenderMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Label => RenderMode::Label,
            ModeArg::Graph => RenderMode::Graph,
            ModeArg::Table => RenderMode::Table,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Nanopub,
    NestedNanopub,
    Rocrate,
    Canonical,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Nanopub => Format::Nanopub,
            FormatArg::NestedNanopub => Format::NestedNanopub,
            FormatArg::Rocrate => Format::Rocrate,
            FormatArg::Canonical => Format::Canonical,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AggregationArg {
    Mean,
    Weighted,
    Normalised,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindOfRecord {
    Terms,
    Schemas,
    Operations,
    Workflows,
    Classes,
    Crosswalks,
    Mappings,
}

impl From<KindOfRecord> for RegistryKind {
    fn from(k: KindOfRecord) -> Self {
        match k {
            KindOfRecord::Terms => RegistryKind::Terms,
            KindOfRecord::Schemas => RegistryKind::Schemas,
            KindOfRecord::Operations => RegistryKind::Operations,
            KindOfRecord::Workflows => RegistryKind::Workflows,
            KindOfRecord::Classes => RegistryKind::Classes,
            KindOfRecord::Crosswalks => RegistryKind::Crosswalks,
            KindOfRecord::Mappings => RegistryKind::Mappings,
        }
    }
}

fn gupri_arg(s: &str) -> Result<Gupri> {
    Gupri::parse(s)
}

fn member_arg(s: &str) -> Result<Member> {
    let (role, g) = match s.split_once('=') {
        Some(("premise", g)) => (Some(ArgumentRole::Premise), g),
        Some(("conclusion", g)) => (Some(ArgumentRole::Conclusion), g),
        Some((other, _)) => {
            return Err(Error::Validation(format!("unknown member role `{other}`")))
        }
        None => (None, s),
    };
    Ok(Member {
        gupri: Gupri::parse(g)?,
        role,
    })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition a CSV, TriG or JSON input into statement units.
    Partition {
        /// Input file, or `-` for stdin.
        input: String,
        /// Pattern file: a JSON list of class patterns or `{"patterns": [...]}`.
        #[arg(long)]
        patterns: PathBuf,
        /// Input format; guessed from the file extension when omitted.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Compose a compound unit from stored members.
    Compose {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Member GUPRIs; prefix with `premise=` or `conclusion=` for arguments.
        #[arg(long, num_args = 0.., value_parser = member_arg)]
        members: Vec<Member>,
        #[arg(long, value_parser = gupri_arg)]
        class: Option<Gupri>,
        #[arg(long, value_enum)]
        frame: Option<FrameArg>,
        #[arg(long, value_parser = gupri_arg)]
        criterion: Option<Gupri>,
        #[arg(long, value_parser = gupri_arg)]
        creator: Option<Gupri>,
        /// Creation time; defaults to now.
        #[arg(long, value_parser = Timestamp::parse)]
        created: Option<Timestamp>,
    },
    /// Validate a stored unit or a unit document file.
    Validate { target: String },
    /// Add a manifestation in another form to a statement unit.
    Crosswalk {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
        #[arg(long, value_enum)]
        to: FormArg,
    },
    /// Render a unit as a dynamic label, graph or table.
    Render {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
        #[arg(long, value_enum, default_value = "label")]
        mode: ModeArg,
    },
    /// Map a sentence onto a registered metamodel.
    Normalize {
        /// The sentence, or `-` for stdin.
        sentence: String,
    },
    /// Serialize a unit as a nanopublication, nested nanopublication,
    /// RO-Crate or canonical document.
    Serialize {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
        #[arg(long, value_enum)]
        format: FormatArg,
        /// Directory to write an RO-Crate into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a serialized unit back.
    Deserialize {
        /// A file, an RO-Crate directory, or `-` for stdin.
        path: String,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Granular FAIRness of a unit.
    Score {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
        #[arg(long, value_enum, default_value = "mean")]
        aggregation: AggregationArg,
        /// Comma-separated member weights for `weighted`.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Classes instantiated under a unit.
    Inventory {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
    },
    /// Check a granularity tree file.
    TreeCheck {
        /// A JSON tree-check document, or `-` for stdin.
        file: String,
    },
    /// Look up, list and register records.
    Registry {
        #[arg(value_enum)]
        kind: KindOfRecord,
        #[command(subcommand)]
        verb: RegistryVerb,
    },
    /// Serve the store over HTTP.
    Serve {
        #[arg(long, default_value = semunit_server::DEFAULT_BIND)]
        bind: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RegistryVerb {
    List {
        #[arg(long, value_parser = gupri_arg)]
        schema: Option<Gupri>,
        /// Substring of the label or name.
        #[arg(long)]
        text: Option<String>,
    },
    Get {
        #[arg(value_parser = gupri_arg)]
        gupri: Gupri,
        #[arg(long)]
        version: Option<u32>,
    },
    /// Register a record document from a file or `-`.
    Register { file: String },
    /// Operations compatible with a schema.
    Compatible {
        #[arg(value_parser = gupri_arg)]
        schema: Gupri,
    },
}

/// Standard streams of one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Whether the command's check passed.
enum Outcome {
    Passed,
    Failed,
}

struct Ctx<'a, 'b> {
    io: &'a mut Io<'b>,
    porcelain: bool,
    store_dir: Option<PathBuf>,
}

impl Ctx<'_, '_> {
    fn out(&mut self, text: &str) -> Result<()> {
        self.io.stdout.write_all(text.as_bytes())?;
        Ok(())
    }

    fn line(&mut self, text: impl AsRef<str>) -> Result<()> {
        self.out(text.as_ref())?;
        self.out("\n")
    }

    fn doc<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        let text = to_document(value)?;
        self.out(&text)
    }

    fn read_source(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            let mut s = String::new();
            self.io.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            Ok(std::fs::read_to_string(path)?)
        }
    }

    fn load(&self) -> Result<UnitStore> {
        match &self.store_dir {
            Some(d) => import_store(d),
            None => Ok(fixtures::fixture().store),
        }
    }

    fn save(&mut self, store: &UnitStore) -> Result<()> {
        match self.store_dir.clone() {
            Some(d) => {
                export_store(store, &d)?;
                Ok(())
            }
            None => {
                self.io
                    .stderr
                    .write_all(b"note: no --store given; changes are not saved\n")?;
                Ok(())
            }
        }
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, S>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut ctx = Ctx {
        io,
        porcelain: cli.porcelain,
        store_dir: cli.store,
    };
    match execute(cli.command, &mut ctx) {
        Ok(Outcome::Passed) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(ctx.io.stderr, "error: {e}");
            1
        }
    }
}

fn execute(command: Command, ctx: &mut Ctx<'_, '_>) -> Result<Outcome> {
    match command {
        Command::Partition {
            input,
            patterns,
            format,
        } => cmd_partition(ctx, &input, &patterns, format),
        Command::Compose {
            kind,
            members,
            class,
            frame,
            criterion,
            creator,
            created,
        } => {
            let mut store = ctx.load()?;
            let meta = MetaRecord::new(
                creator.unwrap_or_else(|| vocab::SYSTEM_AGENT.clone()),
                created.unwrap_or_else(Timestamp::now),
            );
            let options = CompoundOptions {
                frame: frame.map(Frame::from),
                criterion,
            };
            let unit =
                store.make_compound_unit(kind.into(), class.as_ref(), members, options, meta)?;
            store.insert(unit.clone())?;
            ctx.save(&store)?;
            if ctx.porcelain {
                ctx.doc(&Unit::Compound(unit))?;
            } else {
                let label = views::unit_label(&Unit::Compound(unit.clone()), &store);
                ctx.line(format!("{}\t{label}", unit.gupri))?;
            }
            Ok(Outcome::Passed)
        }
        Command::Validate { target } => {
            let store = ctx.load()?;
            let unit = match Gupri::parse(&target) {
                Ok(g) => store.resolve(&g)?.clone(),
                Err(_) => {
                    let text = ctx.read_source(&target)?;
                    serde_json::from_str::<Unit>(&text)
                        .map_err(|e| Error::Validation(format!("{target}: {e}")))?
                }
            };
            let report = store.validate_unit(&unit);
            if ctx.porcelain {
                ctx.doc(&report)?;
            } else if report.issues.is_empty() {
                ctx.line(format!("{}\tvalid", unit.gupri()))?;
            } else {
                for i in &report.issues {
                    let sev = match i.severity {
                        Severity::Violation => "violation",
                        Severity::Warning => "warning",
                    };
                    ctx.line(format!("{sev}\t{}\t{}", i.code, i.message))?;
                }
            }
            Ok(if report.is_valid() {
                Outcome::Passed
            } else {
                Outcome::Failed
            })
        }
        Command::Crosswalk { gupri, to } => {
            let mut store = ctx.load()?;
            let form = Form::from(to);
            let unit = store.crosswalk(&gupri, form)?;
            ctx.save(&store)?;
            let m = unit
                .manifestation(form)
                .expect("crosswalk adds the target form");
            if !ctx.porcelain {
                ctx.line(views::unit_label(&Unit::Statement(unit.clone()), &store))?;
            }
            ctx.doc(m)?;
            Ok(Outcome::Passed)
        }
        Command::Render { gupri, mode } => {
            let store = ctx.load()?;
            let output = views::render_unit(&gupri, mode.into(), &store)?;
            if ctx.porcelain {
                ctx.doc(&output)?;
            } else {
                print_rendering(ctx, &output)?;
            }
            Ok(Outcome::Passed)
        }
        Command::Normalize { sentence } => {
            let store = ctx.load()?;
            let sentence = if sentence == "-" {
                ctx.read_source("-")?.trim().to_string()
            } else {
                sentence
            };
            let reg = store.registries();
            let metamodels: Vec<_> = reg.metamodels().collect();
            let Some((metamodel, statement)) = normalize_sentence(&sentence, &metamodels, reg)
            else {
                return Err(Error::UnparseableSentence(sentence));
            };
            if ctx.porcelain {
                ctx.doc(&Normalized {
                    metamodel,
                    statement,
                })?;
            } else {
                if let RenderOutput::Label(r) = render_rosetta(&statement, RenderMode::Label, reg)?
                {
                    ctx.line(r.text)?;
                }
                ctx.line(format!(
                    "metamodel\t{}",
                    reg.label_of(&metamodel).unwrap_or(metamodel.as_str())
                ))?;
            }
            Ok(Outcome::Passed)
        }
        Command::Serialize { gupri, format, out } => {
            let store = ctx.load()?;
            let unit = store.resolve(&gupri)?;
            match serial::serialize(unit, format.into(), &store)? {
                Document::Text(t) => ctx.out(&t)?,
                Document::Tree(tree) => match out {
                    Some(dir) => {
                        std::fs::create_dir_all(&dir)?;
                        let root = tree.write_to(&dir)?;
                        ctx.line(root.display().to_string())?;
                    }
                    None => ctx.doc(&tree.metadata()?)?,
                },
            }
            Ok(Outcome::Passed)
        }
        Command::Deserialize { path, format } => {
            let store = ctx.load()?;
            let (doc, format) = read_document(ctx, &path, format.map(Format::from))?;
            let d = serial::deserialize(&doc, format)?;
            if ctx.porcelain {
                ctx.doc(&d.unit)?;
            } else {
                ctx.line(format!(
                    "{}\t{}",
                    d.unit.gupri(),
                    views::unit_label(&d.unit, &store)
                ))?;
                let dangling: Vec<_> = d
                    .references
                    .iter()
                    .filter(|g| !resolves(&store, g))
                    .collect();
                ctx.line(format!(
                    "{} references, {} unresolved",
                    d.references.len(),
                    dangling.len()
                ))?;
                for g in dangling {
                    ctx.line(format!("unresolved\t{g}"))?;
                }
            }
            Ok(Outcome::Passed)
        }
        Command::Score {
            gupri,
            aggregation,
            weights,
        } => {
            let store = ctx.load()?;
            let agg = match aggregation {
                AggregationArg::Mean => Aggregation::Mean,
                AggregationArg::Weighted => Aggregation::Weighted { weights },
                AggregationArg::Normalised => Aggregation::Normalised,
            };
            let report = granular_fairness(&gupri, &store, agg)?;
            if ctx.porcelain {
                ctx.doc(&report)?;
            } else {
                let p = report.precision;
                ctx.line(format!(
                    "unit\t{}",
                    views::unit_label(store.resolve(&gupri)?, &store)
                ))?;
                ctx.line(format!("own score\t{:.p$}", report.scalar))?;
                ctx.line(format!(
                    "mean fairness\t{:.p$} ({})",
                    report.mean_fairness,
                    report.aggregation.token()
                ))?;
                ctx.line(format!(
                    "complexity\t{} (richness {} + depth {})",
                    report.complexity, report.richness, report.depth
                ))?;
                ctx.line(format!(
                    "granular fairness\t{:.p$}",
                    report.granular_fairness
                ))?;
            }
            Ok(Outcome::Passed)
        }
        Command::Inventory { gupri } => {
            let store = ctx.load()?;
            let inventory = views::inventory(&gupri, &store)?;
            if ctx.porcelain {
                ctx.doc(&inventory)?;
            } else {
                for e in &inventory {
                    ctx.line(format!("{}\t{}", e.count, e.label))?;
                }
            }
            Ok(Outcome::Passed)
        }
        Command::TreeCheck { file } => {
            let text = ctx.read_source(&file)?;
            let input: TreeCheck = serde_json::from_str(&text)
                .map_err(|e| Error::Validation(format!("{file}: {e}")))?;
            let report = tree_check(&input)?;
            if ctx.porcelain {
                ctx.doc(&report)?;
            } else {
                let order = if report.order.is_partial_order() {
                    "ok"
                } else {
                    "violated"
                };
                ctx.line(format!("partial order\t{order}"))?;
                ctx.line(format!("tree issues\t{}", report.tree.issues.len()))?;
                for i in &report.tree.issues {
                    ctx.line(format!("  {}\t{}", i.code, i.message))?;
                }
                ctx.line(format!("mixing flags\t{}", report.audit.flags.len()))?;
                for f in &report.audit.flags {
                    ctx.line(format!(
                        "  {} -> {}\t{}",
                        f.from,
                        f.to,
                        f.differs.join(", ")
                    ))?;
                }
            }
            Ok(if report.passed() {
                Outcome::Passed
            } else {
                Outcome::Failed
            })
        }
        Command::Registry { kind, verb } => cmd_registry(ctx, kind.into(), verb),
        Command::Serve { bind } => {
            semunit_server::run(&bind, ctx.store_dir.as_deref())
                .map_err(|e| Error::Rejected(e.to_string()))?;
            Ok(Outcome::Passed)
        }
    }
}

#[derive(Serialize)]
struct Normalized {
    metamodel: Gupri,
    statement: RosettaStatement,
}

fn resolves(store: &UnitStore, g: &Gupri) -> bool {
    store.contains(g) || store.registries().lookup_any(g).is_ok() || store.criterion(g).is_some()
}

fn print_rendering(ctx: &mut Ctx<'_, '_>, output: &RenderOutput) -> Result<()> {
    match output {
        RenderOutput::Label(r) => ctx.line(&r.text),
        RenderOutput::Graph(g) => {
            let label = |id: &str| -> String {
                g.nodes
                    .iter()
                    .find(|n| n.id == id)
                    .map_or(id, |n| n.label.as_str())
                    .to_string()
            };
            let lines: Vec<String> = g
                .edges
                .iter()
                .map(|e| format!("{} --{}--> {}", label(&e.from), e.label, label(&e.to)))
                .collect();
            for l in lines {
                ctx.line(l)?;
            }
            Ok(())
        }
        RenderOutput::Table(t) => {
            ctx.line(t.columns.join("\t"))?;
            ctx.line(t.values.join("\t"))
        }
    }
}

fn guess_input_format(path: &str) -> InputFormat {
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("trig") | Some("ttl") => InputFormat::Trig,
        Some("json") => InputFormat::Json,
        _ => InputFormat::Csv,
    }
}

fn read_patterns(path: &Path) -> Result<Vec<ClassPattern>> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Pattern(format!("{}: {e}", path.display())))?;
    let parsed = if value.is_array() {
        serde_json::from_value::<Vec<ClassPattern>>(value)
    } else {
        serde_json::from_value::<PatternSet>(value).map(|s| s.patterns)
    };
    parsed.map_err(|e| Error::Pattern(format!("{}: {e}", path.display())))
}

fn cmd_partition(
    ctx: &mut Ctx<'_, '_>,
    input: &str,
    patterns: &Path,
    format: Option<InputFormat>,
) -> Result<Outcome> {
    let mut store = ctx.load()?;
    let patterns = read_patterns(patterns)?;
    let text = ctx.read_source(input)?;
    let origin = None;
    let collection = match format.unwrap_or_else(|| guess_input_format(input)) {
        InputFormat::Csv => InputCollection::from_csv(&text, origin)?,
        InputFormat::Trig => InputCollection::from_trig(&text, origin)?,
        InputFormat::Json => {
            serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{input}: {e}")))?
        }
    };
    let result = partition(&collection, &patterns, &store)?;
    let report = verify_partition(&result, &collection);
    for u in &result.units {
        if !store.contains(&u.gupri) {
            store.insert(u.clone())?;
        }
    }
    ctx.save(&store)?;
    let passed = report.passed();
    if ctx.porcelain {
        ctx.doc(&PartitionResponse { result, report })?;
    } else {
        ctx.line(format!("{} units", result.units.len()))?;
        ctx.line(format!("{} orphans", result.orphans.len()))?;
        ctx.line(format!("{} items", collection.len()))?;
        for u in &result.units {
            let label = views::unit_label(&Unit::Statement(u.clone()), &store);
            ctx.line(format!("{}\t{label}", u.gupri))?;
        }
        if !passed {
            ctx.line(format!(
                "exact cover violated: {} counterexamples",
                report.counterexamples.len()
            ))?;
        }
    }
    Ok(if passed {
        Outcome::Passed
    } else {
        Outcome::Failed
    })
}

fn read_document(
    ctx: &mut Ctx<'_, '_>,
    path: &str,
    format: Option<Format>,
) -> Result<(Document, Format)> {
    if path != "-" && Path::new(path).is_dir() {
        return Ok((
            Document::Tree(CrateTree::read_from(Path::new(path))?),
            Format::Rocrate,
        ));
    }
    let text = ctx.read_source(path)?;
    let format = match format {
        Some(f) => f,
        None if text.trim_start().starts_with('{') => Format::Canonical,
        None => {
            let doc = serial::parse_trig(&text)?;
            let np = serial::NanopubDocument::from_trig(&doc)?;
            if np.is_nested() {
                Format::NestedNanopub
            } else {
                Format::Nanopub
            }
        }
    };
    Ok((Document::Text(text), format))
}

fn record_label(e: &RecordEntry) -> String {
    match &e.record {
        AnyRecord::Term(t) => t.label.clone(),
        AnyRecord::Schema(s) => s.label.clone(),
        AnyRecord::Operation(o) => o.name.clone(),
        AnyRecord::Workflow(w) => w.name.clone(),
        AnyRecord::Class(c) => c.label.clone(),
        AnyRecord::Crosswalk(c) => format!("{} -> {}", c.source_schema, c.target_schema),
        AnyRecord::Mapping(m) => format!("{} -> {}", m.source, m.target),
    }
}

fn cmd_registry(ctx: &mut Ctx<'_, '_>, kind: RegistryKind, verb: RegistryVerb) -> Result<Outcome> {
    match verb {
        RegistryVerb::List { schema, text } => {
            let store = ctx.load()?;
            let entries = store
                .registries()
                .list(kind, &RecordFilter { text, schema });
            if ctx.porcelain {
                ctx.doc(&entries)?;
            } else {
                for e in &entries {
                    ctx.line(format!("{}\tv{}\t{}", e.gupri, e.version, record_label(e)))?;
                }
            }
        }
        RegistryVerb::Get { gupri, version } => {
            let store = ctx.load()?;
            let entry = store.registries().lookup(kind, &gupri, version)?;
            if !ctx.porcelain {
                ctx.line(format!(
                    "{}\tv{}\t{}",
                    entry.gupri,
                    entry.version,
                    record_label(&entry)
                ))?;
            }
            ctx.doc(&entry.record)?;
        }
        RegistryVerb::Register { file } => {
            let mut store = ctx.load()?;
            let body = ctx.read_source(&file)?;
            let (gupri, registered) = store.registries_mut().register_document(kind, &body)?;
            ctx.save(&store)?;
            if ctx.porcelain {
                ctx.doc(&semunit::facade::RegisterResponse {
                    kind,
                    gupri,
                    version: registered.version,
                    created: registered.created,
                })?;
            } else {
                let state = if registered.created {
                    "registered"
                } else {
                    "unchanged"
                };
                ctx.line(format!("{gupri}\tv{}\t{state}", registered.version))?;
            }
        }
        RegistryVerb::Compatible { schema } => {
            let store = ctx.load()?;
            let ops = store.registries().compatible_operations(&schema)?;
            if ctx.porcelain {
                ctx.doc(&ops)?;
            } else {
                for g in &ops {
                    let name = store
                        .registries()
                        .operation(g)
                        .map_or("", |o| o.name.as_str());
                    ctx.line(format!("{g}\t{name}"))?;
                }
            }
        }
    }
    Ok(Outcome::Passed)
}
