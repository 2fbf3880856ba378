use std::collections::HashMap;
use std::io::Cursor;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use microlab_core::dataset::{import_pair, ValidationReport, POPULATION_FILE, SUBSTANCE_FILE};
use microlab_core::demo::{DEMO_POPULATION, DEMO_SUBSTANCE};
use microlab_core::viz::FrameAssembler;
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

/// Share of the progress bar spent on reading files; validation and
/// indexing fill the rest.
const IMPORT_SHARE: f64 = 0.9;
const EVENT_CAPACITY: usize = 1024;
/// Most recent frame durations kept per session.
const FRAME_WINDOW: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Empty,
    Importing,
    Validating,
    Ready,
    Failed,
}

impl Phase {
    pub fn is_terminal(self) -> bool {
        matches!(self, Phase::Ready | Phase::Failed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Empty => "empty",
            Phase::Importing => "importing",
            Phase::Validating => "validating",
            Phase::Ready => "ready",
            Phase::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressEvent {
    pub session: String,
    pub phase: Phase,
    /// Overall fraction in `[0, 1]`, nondecreasing over one import.
    pub fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Per-file statuses and error texts, on the terminal event.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ValidationReport>,
}

/// Public view of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionStatus {
    pub id: String,
    pub phase: Phase,
    pub progress: f64,
    pub report: Option<ValidationReport>,
}

pub enum ImportSource {
    Demo,
    Upload {
        population_name: String,
        population: Vec<u8>,
        substance_name: String,
        substance: Vec<u8>,
    },
}

struct Inner {
    phase: Phase,
    progress: f64,
    report: Option<ValidationReport>,
    assembler: Option<Arc<FrameAssembler>>,
    history: Vec<ProgressEvent>,
}

pub struct Session {
    id: String,
    inner: RwLock<Inner>,
    events: broadcast::Sender<ProgressEvent>,
    frame_durations: Mutex<Vec<f64>>,
}

impl Session {
    fn new(id: String) -> Self {
        Self {
            id,
            inner: RwLock::new(Inner {
                phase: Phase::Empty,
                progress: 0.0,
                report: None,
                assembler: None,
                history: Vec::new(),
            }),
            events: broadcast::channel(EVENT_CAPACITY).0,
            frame_durations: Mutex::new(Vec::new()),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn status(&self) -> SessionStatus {
        let inner = self.inner.read().expect("session lock");
        SessionStatus {
            id: self.id.clone(),
            phase: inner.phase,
            progress: inner.progress,
            report: inner.report.clone(),
        }
    }

    /// The frame source, once the session is ready.
    pub fn assembler(&self) -> Result<Arc<FrameAssembler>, Phase> {
        let inner = self.inner.read().expect("session lock");
        inner.assembler.clone().ok_or(inner.phase)
    }

    /// Events published so far plus a receiver for the rest. No event is
    /// lost or repeated between the two.
    pub fn subscribe(&self) -> (Vec<ProgressEvent>, broadcast::Receiver<ProgressEvent>) {
        let inner = self.inner.read().expect("session lock");
        (inner.history.clone(), self.events.subscribe())
    }

    pub fn record_frame(&self, seconds: f64) {
        let mut d = self.frame_durations.lock().expect("durations lock");
        if d.len() == FRAME_WINDOW {
            d.remove(0);
        }
        d.push(seconds);
    }

    pub fn frame_durations(&self) -> Vec<f64> {
        self.frame_durations.lock().expect("durations lock").clone()
    }

    fn publish(
        &self,
        phase: Phase,
        fraction: f64,
        message: Option<String>,
        report: Option<ValidationReport>,
    ) {
        let mut inner = self.inner.write().expect("session lock");
        let fraction = fraction.clamp(inner.progress, 1.0);
        inner.phase = phase;
        inner.progress = fraction;
        if report.is_some() {
            inner.report.clone_from(&report);
        }
        let event = ProgressEvent {
            session: self.id.clone(),
            phase,
            fraction,
            message,
            report,
        };
        inner.history.push(event.clone());
        // no receivers is fine
        let _ = self.events.send(event);
    }

    /// Parses, validates and indexes the source. Blocking.
    pub fn run_import(&self, source: ImportSource) {
        let (pop_name, pop, sub_name, sub): (String, &[u8], String, &[u8]);
        let owned;
        match source {
            ImportSource::Demo => {
                pop_name = POPULATION_FILE.to_string();
                sub_name = SUBSTANCE_FILE.to_string();
                pop = DEMO_POPULATION.as_bytes();
                sub = DEMO_SUBSTANCE.as_bytes();
            }
            ImportSource::Upload {
                population_name,
                population,
                substance_name,
                substance,
            } => {
                owned = (population, substance);
                pop_name = population_name;
                sub_name = substance_name;
                pop = &owned.0;
                sub = &owned.1;
            }
        }

        let total = (pop.len() + sub.len()).max(1) as f64;
        self.publish(
            Phase::Importing,
            0.0,
            Some(format!("reading {pop_name} and {sub_name}")),
            None,
        );
        let mut last = 0.0;
        let mut validating = false;
        let outcome = import_pair(
            Cursor::new(pop),
            Cursor::new(sub),
            &pop_name,
            &sub_name,
            |bytes| {
                let share = bytes as f64 / total;
                if share >= 1.0 && !validating {
                    validating = true;
                    self.publish(Phase::Importing, IMPORT_SHARE, None, None);
                    self.publish(
                        Phase::Validating,
                        IMPORT_SHARE,
                        Some("checking consistency".into()),
                        None,
                    );
                } else if share - last >= 0.01 && !validating {
                    last = share;
                    self.publish(Phase::Importing, share * IMPORT_SHARE, None, None);
                }
            },
        );

        match outcome.pair {
            Some(pair) if outcome.report.is_ok() => {
                let assembler = Arc::new(FrameAssembler::new(Arc::new(pair)));
                {
                    let mut inner = self.inner.write().expect("session lock");
                    inner.assembler = Some(assembler);
                }
                self.publish(Phase::Ready, 1.0, None, Some(outcome.report));
            }
            _ => {
                let mut report = outcome.report;
                if report.errors.is_empty() {
                    report.errors.push("import failed".into());
                }
                let progress = self.inner.read().expect("session lock").progress;
                self.publish(Phase::Failed, progress, None, Some(report));
            }
        }
    }
}

/// In-memory sessions keyed by id.
#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    next_id: AtomicU64,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self) -> Arc<Session> {
        let n = self.next_id.fetch_add(1, Ordering::Relaxed) + 1;
        let session = Arc::new(Session::new(format!("s{n}")));
        self.sessions
            .write()
            .expect("store lock")
            .insert(session.id.clone(), session.clone());
        session
    }

    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        self.sessions.read().expect("store lock").get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_import_reaches_ready_with_monotone_progress() {
        let store = SessionStore::new();
        let s = store.create();
        s.run_import(ImportSource::Demo);
        let (history, _) = s.subscribe();
        assert_eq!(history.first().unwrap().phase, Phase::Importing);
        let last = history.last().unwrap();
        assert_eq!((last.phase, last.fraction), (Phase::Ready, 1.0));
        assert!(history.windows(2).all(|w| w[0].fraction <= w[1].fraction));
        assert!(history.iter().any(|e| e.phase == Phase::Validating));
        assert!(last.report.as_ref().unwrap().statuses.iter().all(|f| f.ok));
        assert!(s.assembler().is_ok());
    }

    #[test]
    fn bad_upload_fails_with_message() {
        let store = SessionStore::new();
        let s = store.create();
        s.run_import(ImportSource::Upload {
            population_name: "pop.csv".into(),
            population: b"Population,1,1,1,1,1,1,A_b_c,0,0,0,0,0,0,0\n".to_vec(),
            substance_name: "sub.csv".into(),
            substance: b"Substance,Glucose,1,1,1\n".to_vec(),
        });
        let st = s.status();
        assert_eq!(st.phase, Phase::Failed);
        assert_eq!(
            st.report.unwrap().errors,
            vec!["Population dataset has 15 instead of 14 columns!"]
        );
        assert_eq!(s.assembler().err(), Some(Phase::Failed));
    }

    #[test]
    fn ids_are_distinct() {
        let store = SessionStore::new();
        assert_ne!(
            store.create().id().to_string(),
            store.create().id().to_string()
        );
        assert_eq!(store.len(), 2);
    }
}
