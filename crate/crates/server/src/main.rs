use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use axum::http::HeaderValue;
use clap::Parser;

use utem_server::library::ScenarioLibrary;
use utem_server::{router, AppState};

#[derive(Debug, Parser)]
#[command(name = "utem-server", version, about = "HTTP API for the utem evaluation engine")]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Directory backing /api/v1/scenarios. Created if missing.
    #[arg(long, value_name = "DIR")]
    library_dir: Option<PathBuf>,
    /// Origin allowed by CORS; any origin when omitted.
    #[arg(long, value_name = "ORIGIN")]
    cors_origin: Option<HeaderValue>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let mut state = AppState::default();
    if let Some(dir) = &args.library_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::FAILURE;
        }
        state.library = Some(Arc::new(ScenarioLibrary::new(dir)));
    }
    let addr = format!("{}:{}", args.host, args.port);
    let listener = match tokio::net::TcpListener::bind(&addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot listen on {addr}: {e}");
            return ExitCode::FAILURE;
        }
    };
    eprintln!("listening on http://{addr}");
    if let Err(e) = axum::serve(listener, router(state, args.cors_origin)).await {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
