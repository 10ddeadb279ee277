//! HTTP transport for the semantic unit facade.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{OriginalUri, State};
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Router;
use semunit::facade::Facade;
use semunit::serial::{export_store, import_store, MANIFEST_FILE};
use semunit::{fixtures, Result, UnitStore};
use tokio::net::TcpListener;

/// Environment variable naming the store directory.
pub const STORE_ENV: &str = "SEMUNIT_STORE";
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

/// Opens the store the server should serve.
///
/// With no directory the shipped fixture store is served from memory. A
/// directory holding an exported store is imported; an empty or missing
/// directory is initialised with the fixture store.
pub fn open_store(dir: Option<&Path>) -> Result<UnitStore> {
    match dir {
        None => Ok(fixtures::fixture().store),
        Some(d) if d.join(MANIFEST_FILE).exists() => import_store(d),
        Some(d) => {
            let store = fixtures::fixture().store;
            std::fs::create_dir_all(d)?;
            export_store(&store, d)?;
            Ok(store)
        }
    }
}

/// The store directory from [`STORE_ENV`], if set.
pub fn store_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(STORE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// A facade over the store at `dir`, persisting writes back to it.
pub fn facade_for(dir: Option<&Path>) -> Result<Facade> {
    let store = open_store(dir)?;
    Ok(match dir {
        Some(d) => Facade::new(store).with_persistence(d.to_path_buf()),
        None => Facade::new(store),
    })
}

async fn dispatch(
    State(facade): State<Arc<Facade>>,
    method: Method,
    OriginalUri(uri): OriginalUri,
    body: Bytes,
) -> Response {
    let target = uri
        .path_and_query()
        .map(|p| p.as_str().to_string())
        .unwrap_or_else(|| uri.path().to_string());
    let head = method == Method::HEAD;
    let handled =
        tokio::task::spawn_blocking(move || facade.handle(method.as_str(), &target, &body)).await;
    let r = match handled {
        Ok(r) => r,
        Err(e) => {
            return (
                StatusCode::INTERNAL_SERVER_ERROR,
                format!("handler failed: {e}\n"),
            )
                .into_response();
        }
    };
    let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    let body = if head { String::new() } else { r.body };
    (
        status,
        [(header::CONTENT_TYPE, "application/json; charset=utf-8")],
        body,
    )
        .into_response()
}

pub fn router(facade: Arc<Facade>) -> Router {
    Router::new().fallback(dispatch).with_state(facade)
}

/// Serves `facade` on an already bound listener until the task is dropped.
pub async fn serve_listener(listener: TcpListener, facade: Arc<Facade>) -> std::io::Result<()> {
    axum::serve(listener, router(facade)).await
}

/// Binds `addr` and serves `facade` on it.
pub async fn serve_http(facade: Arc<Facade>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    serve_listener(listener, facade).await
}

/// Blocking entry point used by the binaries.
pub fn run(
    bind: &str,
    store_dir: Option<&Path>,
) -> std::result::Result<(), Box<dyn std::error::Error>> {
    let addr: SocketAddr = bind.parse()?;
    let facade = Arc::new(facade_for(store_dir)?);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        serve_listener(listener, facade).await
    })?;
    Ok(())
}
