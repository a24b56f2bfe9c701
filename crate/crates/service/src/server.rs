use std::collections::HashMap;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};
use quizboard_core::bank::{load_bank, validate_bank, QuestionBank};
use thiserror::Error;
use tokio::io::{AsyncBufReadExt, AsyncWrite, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc;
use tower_http::services::ServeDir;

use crate::hub::{ConnId, Hub};

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("cannot load bank {path}: {reason}")]
    BankLoad { path: PathBuf, reason: String },
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    /// HTTP listener: WebSocket protocol at `/ws`, images under `/assets`.
    pub addr: SocketAddr,
    /// Optional raw TCP listener speaking the same line protocol.
    pub line_addr: Option<SocketAddr>,
    pub bank_path: PathBuf,
    pub asset_root: PathBuf,
}

struct Shared {
    hub: Mutex<Hub>,
    conns: Mutex<HashMap<ConnId, mpsc::UnboundedSender<String>>>,
    next_conn: AtomicU64,
}

impl Shared {
    fn connect(&self) -> (ConnId, mpsc::UnboundedReceiver<String>) {
        let id = self.next_conn.fetch_add(1, Ordering::Relaxed);
        let (tx, rx) = mpsc::unbounded_channel();
        self.conns.lock().expect("conn table poisoned").insert(id, tx);
        (id, rx)
    }

    fn disconnect(&self, conn: ConnId) {
        self.conns.lock().expect("conn table poisoned").remove(&conn);
        self.hub.lock().expect("hub poisoned").disconnect(conn);
    }

    fn dispatch(&self, conn: ConnId, line: &str) {
        // the hub lock is held while queueing so every connection sees a
        // session's events in seq order
        let mut hub = self.hub.lock().expect("hub poisoned");
        let out = hub.handle_line(conn, line);
        let conns = self.conns.lock().expect("conn table poisoned");
        for msg in out {
            if let Some(tx) = conns.get(&msg.conn) {
                let _ = tx.send(msg.line);
            }
        }
    }
}

/// Loads the bank and refuses to serve one with validation issues.
pub fn load_checked_bank(bank_path: &Path, asset_root: &Path) -> Result<QuestionBank, ServeError> {
    let fail = |reason: String| ServeError::BankLoad { path: bank_path.to_path_buf(), reason };
    let bytes = std::fs::read(bank_path).map_err(|e| fail(e.to_string()))?;
    let bank = load_bank(&bytes).map_err(|e| fail(e.to_string()))?;
    let issues = validate_bank(&bank, asset_root);
    if let Some(first) = issues.first() {
        return Err(fail(format!("{} validation issue(s), first: {first}", issues.len())));
    }
    Ok(bank)
}

pub struct Service {
    http: TcpListener,
    lines: Option<TcpListener>,
    asset_root: PathBuf,
    shared: Arc<Shared>,
}

impl Service {
    pub async fn bind(config: ServeConfig) -> Result<Self, ServeError> {
        let bank = load_checked_bank(&config.bank_path, &config.asset_root)?;
        Self::bind_with_bank(config, bank).await
    }

    pub async fn bind_with_bank(config: ServeConfig, bank: QuestionBank) -> Result<Self, ServeError> {
        let bind = |addr: SocketAddr| async move {
            TcpListener::bind(addr).await.map_err(|source| ServeError::Bind { addr, source })
        };
        let http = bind(config.addr).await?;
        let lines = match config.line_addr {
            Some(addr) => Some(bind(addr).await?),
            None => None,
        };
        Ok(Service {
            http,
            lines,
            asset_root: config.asset_root,
            shared: Arc::new(Shared {
                hub: Mutex::new(Hub::new(Arc::new(bank))),
                conns: Mutex::new(HashMap::new()),
                next_conn: AtomicU64::new(1),
            }),
        })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.http.local_addr()
    }

    pub fn line_addr(&self) -> Option<SocketAddr> {
        self.lines.as_ref().and_then(|l| l.local_addr().ok())
    }

    /// Serves until the task is dropped or the listener fails.
    pub async fn run(self) -> io::Result<()> {
        if let Some(lines) = self.lines {
            let shared = Arc::clone(&self.shared);
            tokio::spawn(async move {
                loop {
                    match lines.accept().await {
                        Ok((stream, peer)) => {
                            log::debug!("line client {peer} connected");
                            tokio::spawn(serve_tcp(Arc::clone(&shared), stream));
                        }
                        Err(e) => log::warn!("accept failed: {e}"),
                    }
                }
            });
        }
        let app = Router::new()
            .route("/ws", get(ws_upgrade))
            .nest_service("/assets", ServeDir::new(&self.asset_root))
            .with_state(Arc::clone(&self.shared));
        axum::serve(self.http, app).await
    }
}

async fn write_lines<W: AsyncWrite + Unpin>(mut writer: W, mut rx: mpsc::UnboundedReceiver<String>) {
    while let Some(mut line) = rx.recv().await {
        line.push('\n');
        if writer.write_all(line.as_bytes()).await.is_err() {
            break;
        }
    }
}

async fn serve_tcp(shared: Arc<Shared>, stream: TcpStream) {
    let (read, write) = stream.into_split();
    let (conn, rx) = shared.connect();
    let writer = tokio::spawn(write_lines(write, rx));
    let mut lines = BufReader::new(read).lines();
    loop {
        match lines.next_line().await {
            Ok(Some(line)) => shared.dispatch(conn, &line),
            Ok(None) => break,
            Err(e) => {
                // invalid UTF-8 and the like: report and keep reading
                let line = crate::protocol::encode(&crate::protocol::error("bad_message", e.to_string()), None, None);
                if let Some(tx) = shared.conns.lock().expect("conn table poisoned").get(&conn) {
                    let _ = tx.send(line);
                }
                if e.kind() != io::ErrorKind::InvalidData {
                    break;
                }
            }
        }
    }
    shared.disconnect(conn);
    writer.abort();
}

async fn ws_upgrade(ws: WebSocketUpgrade, State(shared): State<Arc<Shared>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| serve_ws(shared, socket))
}

async fn serve_ws(shared: Arc<Shared>, socket: WebSocket) {
    let (mut sink, mut stream) = socket.split();
    let (conn, mut rx) = shared.connect();
    let writer = tokio::spawn(async move {
        while let Some(line) = rx.recv().await {
            if sink.send(Message::Text(line.into())).await.is_err() {
                break;
            }
        }
    });
    while let Some(Ok(msg)) = stream.next().await {
        match msg {
            Message::Text(text) => {
                for line in text.as_str().lines() {
                    shared.dispatch(conn, line);
                }
            }
            Message::Close(_) => break,
            _ => {}
        }
    }
    shared.disconnect(conn);
    writer.abort();
}
