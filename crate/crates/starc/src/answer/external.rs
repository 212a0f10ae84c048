//! Client for out-of-process answerer backends.
//!
//! Wire protocol, one request per instance:
//!
//! ```text
//! request  {"id": "...", "passage": "..."|null, "question": "..."|null,
//!           "options": [4 strings in presented order]}
//! response {"id": "...", "scores": [4 numbers]}  or  {"id": "...", "choice": 0..3}
//! ```
//!
//! Withheld components travel as JSON `null`, never as empty strings. The
//! same records work over HTTP POST (`/answer`) or line-by-line on a child
//! process's standard streams.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::presentation::{Choice, Presentation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireRequest {
    pub id: String,
    pub passage: Option<String>,
    pub question: Option<String>,
    pub options: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireResponse {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<usize>,
}

/// Anything that can move one wire request to a backend and back.
pub trait WireBackend {
    fn call(&mut self, req: &WireRequest) -> Result<WireResponse>;
    fn describe(&self) -> String;
}

/// HTTP POST backend.
pub struct HttpBackend {
    url: String,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        HttpBackend {
            url: url.into(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }
}

impl WireBackend for HttpBackend {
    fn call(&mut self, req: &WireRequest) -> Result<WireResponse> {
        let body = serde_json::to_string(req)
            .map_err(|e| Error::BackendMalformed(format!("request encode: {e}")))?;
        let resp = self
            .agent
            .post(&self.url)
            .set("content-type", "application/json")
            .send_string(&body);
        match resp {
            Ok(r) => {
                let text = r
                    .into_string()
                    .map_err(|e| Error::BackendTransport(e.to_string()))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::BackendMalformed(format!("{e}: {text}")))
            }
            Err(ureq::Error::Status(code, _)) => Err(Error::BackendTransport(format!(
                "http status {code} from {}",
                self.url
            ))),
            Err(ureq::Error::Transport(t)) => {
                let msg = t.to_string();
                if msg.contains("timed out") || msg.contains("timeout") {
                    Err(Error::BackendTimeout(msg))
                } else {
                    Err(Error::BackendTransport(msg))
                }
            }
        }
    }

    fn describe(&self) -> String {
        format!("http {}", self.url)
    }
}

/// Line-protocol backend over a child process's standard streams.
pub struct SubprocessBackend {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    command: String,
}

impl SubprocessBackend {
    pub fn spawn(command: &str, args: &[String]) -> Result<Self> {
        let mut child = Command::new(command)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::BackendTransport(format!("spawn {command}: {e}")))?;
        let stdin = child
            .stdin
            .take()
            .ok_or_else(|| Error::BackendTransport("child stdin unavailable".into()))?;
        let stdout = child
            .stdout
            .take()
            .ok_or_else(|| Error::BackendTransport("child stdout unavailable".into()))?;
        Ok(SubprocessBackend {
            child,
            stdin,
            stdout: BufReader::new(stdout),
            command: command.to_string(),
        })
    }
}

impl WireBackend for SubprocessBackend {
    fn call(&mut self, req: &WireRequest) -> Result<WireResponse> {
        let mut line = serde_json::to_string(req)
            .map_err(|e| Error::BackendMalformed(format!("request encode: {e}")))?;
        line.push('\n');
        self.stdin
            .write_all(line.as_bytes())
            .and_then(|_| self.stdin.flush())
            .map_err(|e| Error::BackendTransport(format!("write to {}: {e}", self.command)))?;
        let mut reply = String::new();
        let n = self
            .stdout
            .read_line(&mut reply)
            .map_err(|e| Error::BackendTransport(format!("read from {}: {e}", self.command)))?;
        if n == 0 {
            return Err(Error::BackendTransport(format!(
                "{} closed its stdout",
                self.command
            )));
        }
        serde_json::from_str(reply.trim_end())
            .map_err(|e| Error::BackendMalformed(format!("{e}: {reply}")))
    }

    fn describe(&self) -> String {
        format!("subprocess {}", self.command)
    }
}

impl Drop for SubprocessBackend {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Send one presented instance to a backend and map the reply to a choice.
pub fn external_answer(backend: &mut dyn WireBackend, pres: &Presentation) -> Result<Choice> {
    let req = WireRequest {
        id: pres.instance_id.clone(),
        passage: pres.passage.clone(),
        question: pres.question.clone(),
        options: pres.options.to_vec(),
    };
    let resp = backend.call(&req)?;
    if resp.id != req.id {
        return Err(Error::BackendMalformed(format!(
            "response id {} does not match request id {}",
            resp.id, req.id
        )));
    }
    if let Some(scores) = resp.scores {
        if scores.len() != 4 {
            return Err(Error::BackendArity {
                expected: 4,
                got: scores.len(),
            });
        }
        let arr = [scores[0], scores[1], scores[2], scores[3]];
        return Ok(pres.choice_from_scores(arr));
    }
    if let Some(choice) = resp.choice {
        if choice > 3 {
            return Err(Error::BackendMalformed(format!(
                "choice {choice} outside 0..3"
            )));
        }
        return Ok(pres.choice_at(choice, None, false));
    }
    Err(Error::BackendMalformed(
        "response carries neither scores nor choice".into(),
    ))
}
