use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Result;
use boap_session::{router, Store};
use clap::Parser;

/// Serves interactive BOAP sessions.
#[derive(Parser)]
#[command(name = "boap-session", version)]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8765")]
    addr: SocketAddr,
    /// Directory for per-session event logs. Sessions found there are
    /// replayed at startup. Without it sessions live in memory only.
    #[arg(long)]
    storage: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> Result<()> {
    tracing_subscriber::fmt::init();
    let args = Args::parse();
    let store = match &args.storage {
        Some(dir) => Store::open(dir)?,
        None => Store::in_memory(),
    };
    tracing::info!(sessions = store.list().len(), "store ready");
    let listener = tokio::net::TcpListener::bind(args.addr).await?;
    tracing::info!(addr = %args.addr, "listening");
    axum::serve(listener, router(Arc::new(store))).await?;
    Ok(())
}
