//! Session registry with optional on-disk event logs.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::api::{CreateSession, Phase, SessionSummary, SessionView, SubmitAnswers};
use crate::session::{Event, SessionCore, SessionError};

/// A session behind a single writer. Readers see the last published view
/// and never wait for an engine step.
pub struct SessionHandle {
    core: Mutex<SessionCore>,
    view: RwLock<SessionView>,
    events: RwLock<Vec<Event>>,
    log: Option<PathBuf>,
}

fn append_events(path: &Path, events: &[Event]) -> Result<(), SessionError> {
    let storage = |e: std::io::Error| SessionError::Storage(e.to_string());
    let mut text = String::new();
    for e in events {
        text.push_str(&serde_json::to_string(e).map_err(|e| SessionError::Storage(e.to_string()))?);
        text.push('\n');
    }
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(storage)?;
    file.write_all(text.as_bytes()).map_err(storage)?;
    file.sync_data().map_err(storage)
}

impl SessionHandle {
    fn new(core: SessionCore, log: Option<PathBuf>) -> Self {
        Self {
            view: RwLock::new(core.view()),
            events: RwLock::new(core.events().to_vec()),
            core: Mutex::new(core),
            log,
        }
    }

    pub fn view(&self) -> SessionView {
        self.view.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn events(&self) -> Vec<Event> {
        self.events.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn publish(&self, view: SessionView) {
        *self.view.write().unwrap_or_else(|e| e.into_inner()) = view;
    }

    /// Applies a submission and any engine steps it unlocks. The session
    /// is left untouched on error.
    pub fn submit(&self, req: SubmitAnswers) -> Result<SessionView, SessionError> {
        let mut core = self.core.lock().unwrap_or_else(|e| e.into_inner());
        let mut next = core.clone();
        next.apply(req)?;
        if next.phase() == Phase::Suggesting {
            self.publish(next.view());
        }
        let committed = next.advance().and_then(|()| match &self.log {
            Some(path) => append_events(path, &next.events()[core.events().len()..]),
            None => Ok(()),
        });
        if let Err(e) = committed {
            self.publish(core.view());
            return Err(e);
        }
        *core = next;
        let view = core.view();
        self.publish(view.clone());
        *self.events.write().unwrap_or_else(|e| e.into_inner()) = core.events().to_vec();
        Ok(view)
    }
}

#[derive(Default)]
pub struct Store {
    dir: Option<PathBuf>,
    sessions: RwLock<BTreeMap<String, Arc<SessionHandle>>>,
}

impl Store {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens a storage directory, replaying every `<id>.jsonl` log in it.
    pub fn open(dir: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        let mut sessions = BTreeMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "jsonl") {
                continue;
            }
            let core = load_log(&path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            sessions.insert(core.id().to_string(), Arc::new(SessionHandle::new(core, Some(path))));
        }
        Ok(Self {
            dir: Some(dir),
            sessions: RwLock::new(sessions),
        })
    }

    pub fn create(&self, req: CreateSession) -> Result<SessionView, SessionError> {
        let id = uuid::Uuid::new_v4().to_string();
        let core = SessionCore::create(id.clone(), req)?;
        let log = self.dir.as_ref().map(|d| d.join(format!("{id}.jsonl")));
        if let Some(path) = &log {
            append_events(path, core.events())?;
        }
        let handle = Arc::new(SessionHandle::new(core, log));
        let view = handle.view();
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id, handle);
        Ok(view)
    }

    pub fn get(&self, id: &str) -> Option<Arc<SessionHandle>> {
        self.sessions.read().unwrap_or_else(|e| e.into_inner()).get(id).cloned()
    }

    pub fn list(&self) -> Vec<SessionSummary> {
        let sessions = self.sessions.read().unwrap_or_else(|e| e.into_inner());
        sessions.values().map(|h| SessionSummary::from(&h.view())).collect()
    }
}

/// Parses and replays one session log.
pub fn load_log(path: &Path) -> Result<SessionCore, SessionError> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Storage(e.to_string()))?;
    let events = parse_events(&text)?;
    SessionCore::replay(&events)
}

pub fn parse_events(text: &str) -> Result<Vec<Event>, SessionError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| SessionError::Storage(format!("line {}: {e}", i + 1))))
        .collect()
}
