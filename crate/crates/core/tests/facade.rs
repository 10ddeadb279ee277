use semunit::facade::{read, Facade};
use semunit::fairness::Aggregation;
use semunit::fixtures::{self, fixture, g};
use semunit::registry::{RecordFilter, RegistryKind, TermRecord};
use semunit::rosetta::RenderMode;
use semunit::serial::import_store;
use serde_json::{json, Value};

fn facade() -> (Facade, fixtures::Handles) {
    let f = fixture();
    (Facade::new(f.store), f.handles)
}

fn json_of(body: &str) -> Value {
    serde_json::from_str(body).unwrap()
}

#[test]
fn reads_return_the_library_documents() {
    let f = fixture();
    let h = &f.handles;
    let api = Facade::new(f.store.clone());
    let get = |t: &str| {
        let r = api.handle("GET", t, b"");
        assert_eq!(r.status, 200, "{t}: {}", r.body);
        r.body
    };
    let b = &h.dataset_b;
    assert_eq!(
        get(&format!("/units/{b}")),
        read::unit(&f.store, b).unwrap()
    );
    assert_eq!(
        get(&format!("/units/{b}/members")),
        read::members(&f.store, b).unwrap()
    );
    assert_eq!(
        get(&format!("/units/{b}/inventory")),
        read::inventory(&f.store, b).unwrap()
    );
    assert_eq!(
        get(&format!("/units/{b}/fairness?aggregation=normalised")),
        read::fairness(&f.store, b, Aggregation::Normalised).unwrap()
    );
    let m = &h.parasite_mass;
    assert_eq!(
        get(&format!("/units/{m}/render")),
        read::render(&f.store, m, RenderMode::Label).unwrap()
    );
    assert_eq!(
        get("/registry/operations?q=render"),
        read::registry_list(
            &f.store,
            RegistryKind::Operations,
            &RecordFilter {
                text: Some("render".into()),
                schema: None
            }
        )
        .unwrap()
    );
}

#[test]
fn errors_map_to_statuses() {
    let (api, h) = facade();
    assert_eq!(api.handle("GET", "/units/not-a-gupri", b"").status, 400);
    assert_eq!(
        api.handle("GET", &format!("/units/{}", g("nowhere")), b"")
            .status,
        404
    );
    assert_eq!(api.handle("GET", "/nothing/here", b"").status, 404);
    assert_eq!(api.handle("POST", "/nothing", b"{}").status, 404);
    let del = api.handle("DELETE", &format!("/units/{}", h.parasite_mass), b"");
    assert_eq!(del.status, 405);
    assert_eq!(json_of(&del.body)["error"]["code"], "method-not-allowed");
    assert_eq!(api.handle("POST", "/partition", b"{not json").status, 400);
    assert_eq!(api.handle("GET", "/registry/widgets", b"").status, 404);
    assert_eq!(
        api.handle(
            "GET",
            &format!("/registry/operations?schema={}", g("mm-unknown")),
            b""
        )
        .status,
        404
    );
}

#[test]
fn registering_creates_then_confirms() {
    let (api, _) = facade();
    let body = serde_json::to_vec(&TermRecord::new(g("glucose"), "glucose")).unwrap();
    let first = api.handle("POST", "/registry/terms", &body);
    assert_eq!(first.status, 201, "{}", first.body);
    let again = api.handle("POST", "/registry/terms", &body);
    assert_eq!(again.status, 200);
    assert_eq!(json_of(&again.body)["created"], false);
    let found = api.handle(
        "GET",
        &format!("/registry/terms/{}?version=1", g("glucose")),
        b"",
    );
    assert_eq!(found.status, 200);
    assert_eq!(api.handle("POST", "/registry/mappings", b"{}").status, 409);
}

#[test]
fn partitioning_csv_stores_new_units() {
    let (api, _) = facade();
    let before = api.snapshot().len();
    let body =
        json!({ "csv": fixtures::tabular_csv(), "patterns": fixtures::partition_patterns() });
    let r = api.handle("POST", "/partition", body.to_string().as_bytes());
    assert_eq!(r.status, 200, "{}", r.body);
    let doc = json_of(&r.body);
    assert_eq!(doc["result"]["units"].as_array().unwrap().len(), 7);
    assert!(api.snapshot().len() > before);
    for u in doc["result"]["units"].as_array().unwrap() {
        let g = u["gupri"].as_str().unwrap();
        assert_eq!(api.handle("GET", &format!("/units/{g}"), b"").status, 200);
    }
}

#[test]
fn workflow_runs_report_their_trace() {
    let (api, h) = facade();
    let wf = fixtures::normalize_workflow().gupri;
    let ok = api.handle(
        "POST",
        &format!("/workflows/{wf}/run"),
        json!({ "inputs": [h.parasite_variant] })
            .to_string()
            .as_bytes(),
    );
    assert_eq!(ok.status, 200, "{}", ok.body);
    assert_eq!(json_of(&ok.body)["trace"].as_array().unwrap().len(), 3);

    let before = api.snapshot().len();
    let bad = api.handle(
        "POST",
        &format!("/workflows/{wf}/run"),
        json!({ "inputs": [h.parasite_item] })
            .to_string()
            .as_bytes(),
    );
    assert_eq!(bad.status, 409);
    let doc = json_of(&bad.body);
    assert_eq!(doc["trace"].as_array().unwrap().len(), 1);
    assert_eq!(api.snapshot().len(), before);
}

#[test]
fn writes_persist_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let api = Facade::new(fixture().store).with_persistence(dir.path().to_path_buf());
    let body = serde_json::to_vec(&TermRecord::new(g("glucose"), "glucose")).unwrap();
    assert_eq!(api.handle("POST", "/registry/terms", &body).status, 201);
    let back = import_store(dir.path()).unwrap();
    assert!(back.registries().term(&g("glucose")).is_some());
    assert_eq!(back.len(), api.snapshot().len());
}
