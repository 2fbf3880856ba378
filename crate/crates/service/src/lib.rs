//! Local HTTP service: dataset import with progress events, and frame,
//! mesh and metadata queries for an interactive viewer.

mod api;
mod error;
mod session;

use std::net::SocketAddr;
use std::sync::Arc;

pub use api::{router, FrameTiming, Metadata, Range, SpeciesEntry, MAX_UPLOAD_BYTES};
pub use error::ApiError;
pub use session::{ImportSource, Phase, ProgressEvent, Session, SessionStatus, SessionStore};

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(SessionStore::new()))).await
}
