use std::net::SocketAddr;
use std::path::PathBuf;

use futures::{SinkExt, StreamExt};
use quizboard_core::bank::{compile_bank, parse_question_csv};
use quizboard_service::{ServeConfig, ServeError, Service};
use serde_json::Value;
use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn any_port() -> SocketAddr {
    "127.0.0.1:0".parse().unwrap()
}

async fn start(line_port: bool) -> (SocketAddr, Option<SocketAddr>) {
    let csv = std::fs::read(fixtures().join("questions.csv")).unwrap();
    let bank = parse_question_csv(&csv).unwrap();
    let config = ServeConfig {
        addr: any_port(),
        line_addr: line_port.then(any_port),
        bank_path: PathBuf::new(),
        asset_root: fixtures().join("images"),
    };
    let service = Service::bind_with_bank(config, bank).await.unwrap();
    let addrs = (service.local_addr().unwrap(), service.line_addr());
    tokio::spawn(service.run());
    addrs
}

const CREATE: &str = r#"{"cmd":"create_session","game":"goose","language":"en","seed":4,"teams":[{"name":"A","topics":["food"]},{"name":"B","topics":["sport"]}]}"#;

#[tokio::test]
async fn line_protocol_over_tcp() {
    let (_, lines) = start(true).await;
    let stream = TcpStream::connect(lines.unwrap()).await.unwrap();
    let (read, mut write) = stream.into_split();
    let mut read = BufReader::new(read).lines();
    write.write_all(format!("{CREATE}\n{{\"cmd\":\"roll\",\"session\":\"s1\"}}\n").as_bytes()).await.unwrap();
    let mut events = Vec::new();
    while events.len() < 3 {
        let line = read.next_line().await.unwrap().unwrap();
        events.push(serde_json::from_str::<Value>(&line).unwrap());
    }
    assert_eq!(events[0]["event"], "session_created");
    assert_eq!(events[1]["event"], "dice");
    assert_eq!(events[1]["locked"], true);
    assert_eq!(events[2]["event"], "question");
    assert_eq!(events[2]["seq"], 3);

    write.write_all(b"garbage\n").await.unwrap();
    let line = read.next_line().await.unwrap().unwrap();
    assert!(line.contains("\"bad_message\""));
}

#[tokio::test]
async fn websocket_clients_and_assets() {
    let (http, _) = start(false).await;
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{http}/ws")).await.unwrap();
    ws.send(Message::Text(CREATE.into())).await.unwrap();
    let msg = ws.next().await.unwrap().unwrap();
    let created: Value = serde_json::from_str(msg.to_text().unwrap()).unwrap();
    assert_eq!(created["event"], "session_created");

    // a second client attaches and both see the roll
    let (mut other, _) = tokio_tungstenite::connect_async(format!("ws://{http}/ws")).await.unwrap();
    other.send(Message::Text(r#"{"cmd":"start","session":"s1"}"#.into())).await.unwrap();
    for client in [&mut ws, &mut other] {
        let state: Value = serde_json::from_str(client.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
        assert_eq!(state["event"], "state");
        assert_eq!(state["seq"], 2);
    }
    other.send(Message::Text(r#"{"cmd":"roll","session":"s1"}"#.into())).await.unwrap();
    for client in [&mut ws, &mut other] {
        let dice: Value = serde_json::from_str(client.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
        assert_eq!(dice["event"], "dice");
        assert_eq!(dice["seq"], 3);
    }

    let mut image = TcpStream::connect(http).await.unwrap();
    image.write_all(b"GET /assets/food/apple.png HTTP/1.0\r\n\r\n").await.unwrap();
    let mut status = String::new();
    BufReader::new(image).read_line(&mut status).await.unwrap();
    assert!(status.contains("200"), "{status}");
}

#[tokio::test]
async fn unusable_banks_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let config = |bank_path: PathBuf| ServeConfig {
        addr: any_port(),
        line_addr: None,
        bank_path,
        asset_root: dir.path().to_path_buf(),
    };
    let missing = Service::bind(config(dir.path().join("absent.json"))).await;
    assert!(matches!(missing, Err(ServeError::BankLoad { .. })));

    // valid bank, but its images are not under the asset root
    let csv = std::fs::read(fixtures().join("questions.csv")).unwrap();
    let path = dir.path().join("bank.json");
    std::fs::write(&path, compile_bank(&parse_question_csv(&csv).unwrap())).unwrap();
    let err = Service::bind(config(path)).await.err().unwrap();
    assert!(err.to_string().contains("validation issue"), "{err}");
}
