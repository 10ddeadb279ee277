use std::sync::Arc;

use semunit::facade::{read, Facade};
use semunit::fairness::Aggregation;
use semunit::fixtures;
use semunit::rosetta::RenderMode;
use semunit_server::{open_store, serve_listener};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};

async fn start(facade: Arc<Facade>) -> std::net::SocketAddr {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve_listener(listener, facade));
    addr
}

async fn request(
    addr: std::net::SocketAddr,
    method: &str,
    target: &str,
    body: &str,
) -> (u16, String) {
    let mut s = TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "{method} {target} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    );
    s.write_all(req.as_bytes()).await.unwrap();
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).await.unwrap();
    let text = String::from_utf8(raw).unwrap();
    let (head, rest) = text.split_once("\r\n\r\n").unwrap();
    let status = head.split(' ').nth(1).unwrap().parse().unwrap();
    let chunked = head
        .to_ascii_lowercase()
        .contains("transfer-encoding: chunked");
    (
        status,
        if chunked {
            dechunk(rest)
        } else {
            rest.to_string()
        },
    )
}

fn dechunk(mut s: &str) -> String {
    let mut out = String::new();
    loop {
        let (len, rest) = s.split_once("\r\n").unwrap();
        let n = usize::from_str_radix(len.trim(), 16).unwrap();
        if n == 0 {
            return out;
        }
        out.push_str(&rest[..n]);
        s = &rest[n + 2..];
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn get_bodies_match_library_output() {
    let f = fixtures::fixture();
    let h = f.handles.clone();
    let reference = f.store.clone();
    let addr = start(Arc::new(Facade::new(f.store))).await;

    let item = h.parasite_item.to_string();
    let (status, body) = request(addr, "GET", &format!("/units/{item}"), "").await;
    assert_eq!(status, 200);
    assert_eq!(body, read::unit(&reference, &h.parasite_item).unwrap());

    let (status, body) = request(
        addr,
        "GET",
        &format!("/units/{}/render?mode=label", h.parasite_mass),
        "",
    )
    .await;
    assert_eq!(status, 200);
    assert_eq!(
        body,
        read::render(&reference, &h.parasite_mass, RenderMode::Label).unwrap()
    );
    assert!(body.contains("\"Parasite X has a mass of 24.76 grams.\""));

    let encoded = item.replace(':', "%3A");
    let (_, body) = request(addr, "GET", &format!("/units/{encoded}/members"), "").await;
    assert_eq!(body, read::members(&reference, &h.parasite_item).unwrap());

    let (_, body) = request(
        addr,
        "GET",
        &format!("/units/{}/fairness?aggregation=normalised", h.dataset_b),
        "",
    )
    .await;
    assert_eq!(
        body,
        read::fairness(&reference, &h.dataset_b, Aggregation::Normalised).unwrap()
    );
}

#[tokio::test(flavor = "multi_thread")]
async fn status_codes() {
    let addr = start(Arc::new(Facade::new(fixtures::fixture().store))).await;
    let unknown = semunit::Gupri::named("fixture", "fx", "never-stored");
    assert_eq!(
        request(addr, "GET", &format!("/units/{unknown}"), "")
            .await
            .0,
        404
    );
    assert_eq!(request(addr, "GET", "/units/not-a-gupri", "").await.0, 400);
    assert_eq!(request(addr, "POST", "/partition", "{oops").await.0, 400);
    let empty_wf = r#"{"gupri":"urn:semunit:fixture:EMPTYWORKFLOW","name":"empty","steps":[]}"#;
    assert_eq!(
        request(addr, "POST", "/registry/workflows", empty_wf)
            .await
            .0,
        409
    );
    assert_eq!(request(addr, "DELETE", "/units/x", "").await.0, 405);
}

#[tokio::test(flavor = "multi_thread")]
async fn writes_persist_to_the_store_directory() {
    let dir = tempfile::tempdir().unwrap();
    let store_dir = dir.path().join("store");
    let facade = Arc::new(semunit_server::facade_for(Some(&store_dir)).unwrap());
    let addr = start(facade).await;
    let term = semunit::registry::TermRecord::new(
        semunit::Gupri::named("fixture", "fx", "new-term"),
        "new term",
    );
    let (status, _) = request(
        addr,
        "POST",
        "/registry/terms",
        &serde_json::to_string(&term).unwrap(),
    )
    .await;
    assert_eq!(status, 201);
    let reopened = open_store(Some(&store_dir)).unwrap();
    assert!(reopened.registries().term(&term.gupri).is_some());
}
