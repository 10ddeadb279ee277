//! Transport-independent request handling for the HTTP facade.
//!
//! [`Facade::handle`] maps a method, a request target and a body onto
//! library calls and returns a status plus a document body. Read requests
//! share a snapshot of the store under a read lock; writes and workflow runs
//! hold the write lock for their whole duration.

use std::path::PathBuf;

use parking_lot::{RwLock, RwLockReadGuard};
use percent_encoding::percent_decode_str;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fairness::{granular_fairness, Aggregation};
use crate::gupri::Gupri;
use crate::partition::{
    partition, verify_partition, ClassPattern, InputCollection, PartitionReport, PartitionResult,
};
use crate::registry::{RecordFilter, RegistryKind};
use crate::rosetta::RenderMode;
use crate::serial::{export_store, to_document};
use crate::store::UnitStore;
use crate::views;
use crate::workflow::{run_workflow, StepTrace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: String,
}

impl Response {
    fn ok(body: String) -> Self {
        Self { status: 200, body }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [StepTrace]>,
}

#[derive(Debug, Serialize)]
struct ErrorDetail<'a> {
    code: &'a str,
    message: String,
}

/// HTTP status for a library error.
pub fn status_of(e: &Error) -> u16 {
    match e {
        Error::NotFound(_) | Error::DanglingMember(_) => 404,
        Error::MissingInput(_)
        | Error::InvalidGupri(_)
        | Error::Syntax { .. }
        | Error::Json(_)
        | Error::Csv(_) => 400,
        Error::Io(_) | Error::Corruption { .. } => 500,
        _ => 409,
    }
}

fn error_response(e: &Error, trace: Option<&[StepTrace]>) -> Response {
    let body = ErrorBody {
        error: ErrorDetail {
            code: e.code(),
            message: e.to_string(),
        },
        trace,
    };
    Response {
        status: status_of(e),
        body: to_document(&body).unwrap_or_else(|_| "{}\n".into()),
    }
}

fn not_found(what: &str) -> Error {
    Error::NotFound(what.to_string())
}

/// Where the units to partition come from.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PartitionSource {
    Input { input: InputCollection },
    Csv { csv: String },
    Trig { trig: String },
}

#[derive(Debug, Clone, Deserialize)]
pub struct PartitionRequest {
    #[serde(flatten)]
    pub source: PartitionSource,
    pub patterns: Vec<ClassPattern>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResponse {
    pub result: PartitionResult,
    pub report: PartitionReport,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RunRequest {
    pub inputs: Vec<Gupri>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegisterResponse {
    pub kind: RegistryKind,
    pub gupri: Gupri,
    pub version: u32,
    pub created: bool,
}

fn body_json<'a, T: Deserialize<'a>>(body: &'a [u8]) -> Result<T> {
    serde_json::from_slice(body).map_err(|e| Error::syntax(e.line(), e.column(), e.to_string()))
}

/// Splits a request target into decoded path segments and query pairs.
pub fn split_target(target: &str) -> (Vec<String>, Vec<(String, String)>) {
    let (path, query) = target.split_once('?').unwrap_or((target, ""));
    let segments = path
        .split('/')
        .filter(|s| !s.is_empty())
        .map(|s| percent_decode_str(s).decode_utf8_lossy().into_owned())
        .collect();
    let pairs = form_urlencoded::parse(query.as_bytes())
        .into_owned()
        .collect();
    (segments, pairs)
}

fn param<'a>(query: &'a [(String, String)], key: &str) -> Option<&'a str> {
    query
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

fn parse_aggregation(query: &[(String, String)]) -> Result<Aggregation> {
    let token = param(query, "aggregation").unwrap_or("mean");
    let agg = Aggregation::parse(token)?;
    match (agg, param(query, "weights")) {
        (Aggregation::Weighted { .. }, Some(w)) => {
            let weights = w
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Validation(format!("weights: {e}")))?;
            Ok(Aggregation::Weighted {
                weights: Some(weights),
            })
        }
        (agg, _) => Ok(agg),
    }
}

/// Library calls behind the read endpoints, each returning the document
/// the endpoint serves.
pub mod read {
    use super::*;

    pub fn unit(store: &UnitStore, g: &Gupri) -> Result<String> {
        to_document(&views::unit_view(g, store)?)
    }

    pub fn members(store: &UnitStore, g: &Gupri) -> Result<String> {
        to_document(&views::members(g, store)?)
    }

    pub fn render(store: &UnitStore, g: &Gupri, mode: RenderMode) -> Result<String> {
        to_document(&views::render_unit(g, mode, store)?)
    }

    pub fn fairness(store: &UnitStore, g: &Gupri, aggregation: Aggregation) -> Result<String> {
        to_document(&granular_fairness(g, store, aggregation)?)
    }

    pub fn inventory(store: &UnitStore, g: &Gupri) -> Result<String> {
        to_document(&views::inventory(g, store)?)
    }

    pub fn registry_list(
        store: &UnitStore,
        kind: RegistryKind,
        filter: &RecordFilter,
    ) -> Result<String> {
        let reg = store.registries();
        if let Some(s) = &filter.schema {
            if kind == RegistryKind::Operations {
                reg.compatible_operations(s)?;
            }
        }
        to_document(&reg.list(kind, filter))
    }

    pub fn registry_lookup(
        store: &UnitStore,
        kind: RegistryKind,
        g: &Gupri,
        version: Option<u32>,
    ) -> Result<String> {
        to_document(&store.registries().lookup(kind, g, version)?)
    }
}

fn gupri(segment: &str) -> Result<Gupri> {
    Gupri::parse(segment)
}

pub struct Facade {
    store: RwLock<UnitStore>,
    persist: Option<PathBuf>,
}

impl Facade {
    pub fn new(store: UnitStore) -> Self {
        Self {
            store: RwLock::new(store),
            persist: None,
        }
    }

    /// Writes the store to `dir` after every successful write request.
    pub fn with_persistence(mut self, dir: PathBuf) -> Self {
        self.persist = Some(dir);
        self
    }

    /// A consistent read-only view of the current store.
    pub fn snapshot(&self) -> RwLockReadGuard<'_, UnitStore> {
        self.store.read()
    }

    pub fn handle(&self, method: &str, target: &str, body: &[u8]) -> Response {
        let (segments, query) = split_target(target);
        let segs: Vec<&str> = segments.iter().map(String::as_str).collect();
        match method {
            "GET" | "HEAD" => {
                let store = self.store.read();
                match get(&store, &segs, &query) {
                    Ok(body) => Response::ok(body),
                    Err(e) => error_response(&e, None),
                }
            }
            "POST" => self.post(&segs, body),
            _ => Response {
                status: 405,
                body: to_document(&ErrorBody {
                    error: ErrorDetail {
                        code: "method-not-allowed",
                        message: format!("method {method} is not supported"),
                    },
                    trace: None,
                })
                .unwrap_or_default(),
            },
        }
    }

    fn post(&self, segs: &[&str], body: &[u8]) -> Response {
        let mut store = self.store.write();
        let result = match segs {
            ["partition"] => post_partition(&mut store, body).map(|b| (200, b)),
            ["registry", kind] => post_register(&mut store, kind, body),
            ["workflows", g, "run"] => {
                let parsed = gupri(g).and_then(|g| Ok((g, body_json::<RunRequest>(body)?)));
                match parsed {
                    Ok((g, req)) => match run_workflow(&g, &req.inputs, &mut store) {
                        Ok(run) => to_document(&run).map(|b| (200, b)),
                        Err(f) if f.trace.is_empty() => Err(f.error),
                        Err(f) => return error_response(&f.error, Some(&f.trace)),
                    },
                    Err(e) => Err(e),
                }
            }
            _ => Err(not_found(&format!("endpoint /{}", segs.join("/")))),
        };
        match result {
            Ok((status, body)) => {
                if let Some(dir) = &self.persist {
                    if let Err(e) = export_store(&store, dir) {
                        return error_response(&e, None);
                    }
                }
                Response { status, body }
            }
            Err(e) => error_response(&e, None),
        }
    }
}

fn get(store: &UnitStore, segs: &[&str], query: &[(String, String)]) -> Result<String> {
    match segs {
        ["units", g] => read::unit(store, &gupri(g)?),
        ["units", g, "members"] => read::members(store, &gupri(g)?),
        ["units", g, "render"] => {
            let mode = RenderMode::parse(param(query, "mode").unwrap_or("label"))?;
            read::render(store, &gupri(g)?, mode)
        }
        ["units", g, "fairness"] => read::fairness(store, &gupri(g)?, parse_aggregation(query)?),
        ["units", g, "inventory"] => read::inventory(store, &gupri(g)?),
        ["registry", kind] => {
            let filter = RecordFilter {
                text: param(query, "q").map(str::to_string),
                schema: param(query, "schema").map(Gupri::parse).transpose()?,
            };
            read::registry_list(store, RegistryKind::parse(kind)?, &filter)
        }
        ["registry", kind, g] => {
            let version = param(query, "version")
                .map(|v| {
                    v.parse::<u32>()
                        .map_err(|e| Error::Validation(format!("version: {e}")))
                })
                .transpose()?;
            read::registry_lookup(store, RegistryKind::parse(kind)?, &gupri(g)?, version)
        }
        _ => Err(not_found(&format!("endpoint /{}", segs.join("/")))),
    }
}

fn post_partition(store: &mut UnitStore, body: &[u8]) -> Result<String> {
    let req: PartitionRequest = body_json(body)?;
    let input = match req.source {
        PartitionSource::Input { input } => input,
        PartitionSource::Csv { csv } => InputCollection::from_csv(&csv, None)?,
        PartitionSource::Trig { trig } => InputCollection::from_trig(&trig, None)?,
    };
    let result = partition(&input, &req.patterns, store)?;
    let report = verify_partition(&result, &input);
    let mut next = store.clone();
    // Content-derived GUPRIs already stored denote the same statement; the
    // stored unit keeps its metadata.
    for u in result.units.iter().filter(|u| !store.contains(&u.gupri)) {
        next.insert(u.clone())?;
    }
    *store = next;
    to_document(&PartitionResponse { result, report })
}

fn post_register(store: &mut UnitStore, kind: &str, body: &[u8]) -> Result<(u16, String)> {
    let kind = RegistryKind::parse(kind)?;
    let text = std::str::from_utf8(body)
        .map_err(|e| Error::syntax(1, e.valid_up_to() + 1, "body is not UTF-8"))?;
    serde_json::from_str::<serde_json::Value>(text)
        .map_err(|e| Error::syntax(e.line(), e.column(), e.to_string()))?;
    let (gupri, registered) = store.registries_mut().register_document(kind, text)?;
    let status = if registered.created { 201 } else { 200 };
    let body = to_document(&RegisterResponse {
        kind,
        gupri,
        version: registered.version,
        created: registered.created,
    })?;
    Ok((status, body))
}
