//! WebSocket host for a [`Session`]: `GET /ws?role=presenter|audience`.
//!
//! Every text frame is one [`SessionMessage`] or [`RenderUpdate`] in JSON.
//! Presenter frames drive the session; audience sockets may only send view
//! requests. Updates fan out on one broadcast channel per role.

use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Query, State};
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};
use serde::Deserialize;
use tokio::sync::broadcast;

use crate::session::{Outbound, RenderUpdate, Role, Session, SessionMessage};

const CHANNEL_CAPACITY: usize = 1024;

pub struct Hub {
    session: Mutex<Session>,
    presenter: broadcast::Sender<String>,
    audience: broadcast::Sender<String>,
}

impl Hub {
    pub fn new(session: Session) -> Arc<Self> {
        let (presenter, _) = broadcast::channel(CHANNEL_CAPACITY);
        let (audience, _) = broadcast::channel(CHANNEL_CAPACITY);
        Arc::new(Self { session: Mutex::new(session), presenter, audience })
    }

    fn channel(&self, role: Role) -> &broadcast::Sender<String> {
        match role {
            Role::Presenter => &self.presenter,
            Role::Audience => &self.audience,
        }
    }

    fn publish(&self, out: &Outbound) {
        for role in [Role::Presenter, Role::Audience] {
            for update in out.for_role(role) {
                // no subscribers is fine
                let _ = self.channel(role).send(update.to_json());
            }
        }
    }

    /// Handles one frame from a socket of `role`. Returns replies meant only
    /// for that socket; everything else is broadcast.
    fn dispatch(&self, role: Role, text: &str) -> Vec<RenderUpdate> {
        let msg = match serde_json::from_str::<SessionMessage>(text) {
            Ok(m) => m,
            Err(e) => return vec![RenderUpdate::Diagnostic { text: format!("malformed message: {e}") }],
        };
        let mut session = self.session.lock().expect("session lock poisoned");
        match msg {
            SessionMessage::ViewRequest { .. } => {
                // a socket only ever sees its own role's view
                let out = session.handle_message(SessionMessage::ViewRequest { role });
                out.for_role(role).to_vec()
            }
            _ if role == Role::Audience => {
                vec![RenderUpdate::Diagnostic { text: "audience connections are read-only".into() }]
            }
            msg => {
                let out = session.handle_message(msg);
                self.publish(&out);
                Vec::new()
            }
        }
    }
}

#[derive(Deserialize)]
struct RoleQuery {
    role: Option<Role>,
}

pub fn router(hub: Arc<Hub>) -> Router {
    Router::new().route("/ws", get(upgrade)).with_state(hub)
}

async fn upgrade(ws: WebSocketUpgrade, Query(q): Query<RoleQuery>, State(hub): State<Arc<Hub>>) -> impl IntoResponse {
    let role = q.role.unwrap_or(Role::Presenter);
    ws.on_upgrade(move |socket| connection(socket, role, hub))
}

async fn connection(socket: WebSocket, role: Role, hub: Arc<Hub>) {
    log::info!("{role:?} connected");
    let (mut sink, mut stream) = socket.split();
    let mut updates = hub.channel(role).subscribe();
    let (direct_tx, mut direct_rx) = tokio::sync::mpsc::unbounded_channel::<String>();

    for update in hub.dispatch(role, r#"{"type":"view_request","role":"presenter"}"#) {
        let _ = direct_tx.send(update.to_json());
    }

    let mut send_task = tokio::spawn(async move {
        loop {
            let text = tokio::select! {
                Some(t) = direct_rx.recv() => t,
                r = updates.recv() => match r {
                    Ok(t) => t,
                    Err(broadcast::error::RecvError::Lagged(n)) => {
                        log::warn!("subscriber lagged by {n} updates");
                        continue;
                    }
                    Err(broadcast::error::RecvError::Closed) => break,
                },
                else => break,
            };
            if sink.send(Message::Text(text)).await.is_err() {
                break;
            }
        }
    });

    let recv_hub = hub.clone();
    let mut recv_task = tokio::spawn(async move {
        while let Some(Ok(msg)) = stream.next().await {
            match msg {
                Message::Text(text) => {
                    for reply in recv_hub.dispatch(role, &text) {
                        if direct_tx.send(reply.to_json()).is_err() {
                            return;
                        }
                    }
                }
                Message::Close(_) => break,
                _ => {}
            }
        }
    });

    tokio::select! {
        _ = &mut send_task => recv_task.abort(),
        _ = &mut recv_task => send_task.abort(),
    }
    log::info!("{role:?} disconnected");
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, session: Session) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Hub::new(session))).await?;
    Ok(())
}
