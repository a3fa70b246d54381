//! Child-process predictor protocol.
//!
//! The child reads one JSON object per line on stdin,
//! `{"schema_version": 1, "record": {...}}`, and answers each with one line
//! `{"value": <number>}` on stdout before the next request is sent.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::datasets::SystemRecord;

use super::{Predictor, PredictorError};

pub const PROTOCOL_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Request<'a> {
    schema_version: u32,
    record: &'a SystemRecord,
}

#[derive(Deserialize)]
struct Response {
    value: f64,
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Drop for Session {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A long-lived child process answering prediction requests.
pub struct ExternalPredictor {
    session: Mutex<Session>,
    timeout: Duration,
}

impl ExternalPredictor {
    /// Launches `program` with `args`.
    pub fn spawn(program: &str, args: &[String], timeout: Duration) -> Result<Self, PredictorError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| PredictorError::ExternalSpawn(format!("{program}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalPredictor {
            session: Mutex::new(Session {
                child,
                stdin,
                lines: rx,
            }),
            timeout,
        })
    }

    /// Splits a shell-like command line on whitespace and launches it.
    pub fn from_command_line(command: &str, timeout: Duration) -> Result<Self, PredictorError> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| PredictorError::ExternalSpawn("empty command".into()))?;
        let args: Vec<String> = parts.map(str::to_string).collect();
        Self::spawn(program, &args, timeout)
    }

    fn exit_error(session: &mut Session, index: usize) -> PredictorError {
        let status = match session.child.try_wait() {
            Ok(Some(s)) => s.to_string(),
            _ => "closed its output".to_string(),
        };
        PredictorError::ExternalExit { index, status }
    }

    fn request(&self, session: &mut Session, index: usize, record: &SystemRecord) -> Result<f64, PredictorError> {
        let mut line = serde_json::to_string(&Request {
            schema_version: PROTOCOL_SCHEMA_VERSION,
            record,
        })
        .map_err(|e| PredictorError::ExternalMalformed {
            index,
            message: e.to_string(),
        })?;
        line.push('\n');
        if session
            .stdin
            .write_all(line.as_bytes())
            .and_then(|_| session.stdin.flush())
            .is_err()
        {
            return Err(Self::exit_error(session, index));
        }
        match session.lines.recv_timeout(self.timeout) {
            Ok(Ok(reply)) => {
                let parsed: Response = serde_json::from_str(&reply).map_err(|e| {
                    PredictorError::ExternalMalformed {
                        index,
                        message: format!("{e}: {reply}"),
                    }
                })?;
                if !parsed.value.is_finite() {
                    return Err(PredictorError::ExternalMalformed {
                        index,
                        message: "value is not finite".into(),
                    });
                }
                Ok(parsed.value)
            }
            Ok(Err(e)) => Err(PredictorError::ExternalMalformed {
                index,
                message: e.to_string(),
            }),
            Err(RecvTimeoutError::Timeout) => Err(PredictorError::ExternalTimeout {
                index,
                seconds: self.timeout.as_secs_f64(),
            }),
            Err(RecvTimeoutError::Disconnected) => {
                // Give the process a moment to report its exit status.
                let _ = session.child.wait();
                Err(Self::exit_error(session, index))
            }
        }
    }
}

impl Predictor for ExternalPredictor {
    fn predict_batch(&self, records: &[SystemRecord]) -> Result<Vec<f64>, PredictorError> {
        let mut session = self.session.lock().unwrap_or_else(|p| p.into_inner());
        records
            .iter()
            .enumerate()
            .map(|(i, r)| self.request(&mut session, i, r))
            .collect()
    }
}
