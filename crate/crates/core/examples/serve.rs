//! Serve a synthetic project over HTTP.
//!
//! `cargo run --example serve` then e.g.
//! `curl localhost:8047/api/v1/project`. The port honours `SURFANNOT_PORT`.

use std::net::{Ipv4Addr, SocketAddr};

use surfannot::session::http::serve;
use surfannot::session::{Project, DEFAULT_PORT, PORT_ENV};
use surfannot::synthetic::growing_patch_series;

#[tokio::main]
async fn main() -> std::io::Result<()> {
    env_logger::init();
    let port = std::env::var(PORT_ENV)
        .ok()
        .and_then(|p| p.parse().ok())
        .unwrap_or(DEFAULT_PORT);
    let (series, _) = growing_patch_series(5, 15);
    let project = Project::from_series(series, "synthetic");
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    println!("serving on http://{addr}/api/v1 (Ctrl-C to stop)");
    let web_root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../web");
    serve(project, addr, Some(web_root)).await
}
