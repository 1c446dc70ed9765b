//! Statement conversion: external plugins plus a template fallback.
//!
//! A plugin is a child process speaking line-delimited JSON on
//! stdin/stdout. It announces itself with `{"protocol":"recast-plugin/1"}`
//! and then answers requests:
//!
//! ```text
//! -> {"id":1,"kind":"declarativize","question":"Which party won?","answer":"Party A"}
//! <- {"id":1,"statement":"Party A won."}
//! -> {"id":2,"kind":"paraphrase","text":"Party A won."}
//! <- {"id":2,"paraphrases":["The winner was Party A."]}
//! ```
//!
//! A crashed, slow, or garbled plugin degrades to the built-in template
//! converter with a diagnostic; a response carrying the *wrong id* is a
//! protocol violation and aborts the run. Requests are answered one at a
//! time, in order.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PROTOCOL: &str = "recast-plugin/1";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
/// Paraphrases kept per hypothesis, however many the plugin returns.
pub const MAX_PARAPHRASES: usize = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PluginRequest {
    pub id: u64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PluginResponse {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrases: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct Handshake {
    protocol: String,
}

/// What one plugin call produced: a response, or a degradation reason
/// (the caller falls back to templates and records the reason).
type CallOutcome = Option<PluginResponse>;

/// A live plugin child process.
pub struct PluginChannel {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
    next_id: u64,
    dead: bool,
}

impl PluginChannel {
    /// Spawn `command` (split on whitespace) and wait for the handshake.
    pub fn spawn(command: &str, timeout: Duration) -> Result<PluginChannel> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| Error::Usage("empty plugin command".into()))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::Usage(format!("cannot spawn plugin `{command}`: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = child.stdout.take().ok_or_else(|| {
            Error::PluginProtocol("plugin stdout unavailable".into())
        })?;
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut channel = PluginChannel {
            child,
            stdin,
            lines: rx,
            timeout,
            next_id: 0,
            dead: false,
        };
        let line = channel.read_line().ok_or_else(|| {
            Error::PluginProtocol("plugin did not send a handshake".into())
        })?;
        let shake: Handshake = serde_json::from_str(&line)
            .map_err(|e| Error::PluginProtocol(format!("bad handshake: {e}")))?;
        if shake.protocol != PROTOCOL {
            return Err(Error::PluginProtocol(format!(
                "unsupported protocol `{}` (want `{PROTOCOL}`)",
                shake.protocol
            )));
        }
        Ok(channel)
    }

    fn read_line(&mut self) -> Option<String> {
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => Some(line),
            _ => None,
        }
    }

    /// Send one request and wait for its response.
    ///
    /// `Ok(None)` means the plugin degraded (died, timed out, or answered
    /// with something unparsable); `Err` is reserved for hard protocol
    /// violations such as a response with the wrong id.
    fn call(&mut self, mut request: PluginRequest) -> Result<CallOutcome> {
        if self.dead {
            return Ok(None);
        }
        self.next_id += 1;
        request.id = self.next_id;
        let Some(stdin) = self.stdin.as_mut() else {
            self.dead = true;
            return Ok(None);
        };
        let payload = serde_json::to_string(&request)?;
        if writeln!(stdin, "{payload}").and_then(|_| stdin.flush()).is_err() {
            self.dead = true;
            return Ok(None);
        }
        let Some(line) = self.read_line() else {
            self.dead = true;
            return Ok(None);
        };
        let response: PluginResponse = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(_) => {
                self.dead = true;
                return Ok(None);
            }
        };
        if response.id != request.id {
            return Err(Error::PluginProtocol(format!(
                "response id {} does not match request id {}",
                response.id, request.id
            )));
        }
        Ok(Some(response))
    }
}

impl Drop for PluginChannel {
    fn drop(&mut self) {
        self.stdin.take();
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Turns question/answer pairs into statements and statements into
/// paraphrases, preferring a plugin and degrading to templates.
pub struct Converter {
    plugin: Option<PluginChannel>,
    diagnostics: Vec<String>,
}

/// Outcome of declarativization.
#[derive(Debug, Clone, PartialEq)]
pub enum Conversion {
    Statement { text: String, from_plugin: bool },
    /// The question shape is outside the template's reach.
    Inapplicable(String),
}

impl Converter {
    pub fn template_only() -> Converter {
        Converter {
            plugin: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_plugin(plugin: PluginChannel) -> Converter {
        Converter {
            plugin: Some(plugin),
            diagnostics: Vec::new(),
        }
    }

    pub fn has_plugin(&self) -> bool {
        self.plugin.is_some()
    }

    /// Degradation events recorded since the last call; draining resets.
    pub fn take_diagnostics(&mut self) -> Vec<String> {
        std::mem::take(&mut self.diagnostics)
    }

    /// Build a declarative statement for a question/answer pair.
    pub fn declarativize(&mut self, question: &str, answer: &str) -> Result<Conversion> {
        if let Some(plugin) = self.plugin.as_mut() {
            let outcome = plugin.call(PluginRequest {
                id: 0,
                kind: "declarativize".into(),
                question: Some(question.to_string()),
                answer: Some(answer.to_string()),
                text: None,
            })?;
            match outcome {
                Some(PluginResponse {
                    statement: Some(text),
                    ..
                }) if !text.trim().is_empty() => {
                    return Ok(Conversion::Statement {
                        text: text.trim().to_string(),
                        from_plugin: true,
                    });
                }
                Some(_) => {
                    // An explicit empty response means the plugin passes.
                }
                None => {
                    self.diagnostics
                        .push("plugin degraded; using template converter".into());
                    self.plugin = None;
                }
            }
        }
        Ok(template_declarativize(question, answer))
    }

    /// Ask the plugin for paraphrases of a statement. Without a plugin
    /// there is nothing to add — the identity paraphrase is dropped later
    /// as a duplicate anyway.
    pub fn paraphrase(&mut self, text: &str) -> Result<Vec<String>> {
        let Some(plugin) = self.plugin.as_mut() else {
            return Ok(Vec::new());
        };
        let outcome = plugin.call(PluginRequest {
            id: 0,
            kind: "paraphrase".into(),
            question: None,
            answer: None,
            text: Some(text.to_string()),
        })?;
        match outcome {
            Some(response) => Ok(response
                .paraphrases
                .unwrap_or_default()
                .into_iter()
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .take(MAX_PARAPHRASES)
                .collect()),
            None => {
                self.diagnostics
                    .push("plugin degraded; paraphrasing disabled".into());
                self.plugin = None;
                Ok(Vec::new())
            }
        }
    }
}

const AUX_WORDS: [&str; 14] = [
    "is", "are", "was", "were", "did", "does", "do", "has", "have", "had", "will", "would",
    "can", "could",
];

/// Template declarativizer for wh-questions.
///
/// `Which party won 120 seats?` + `Party B` becomes
/// `Party B won 120 seats.`: the wh-word and its noun-phrase head are
/// dropped and the answer takes their place. `who` questions and
/// questions whose second word is an auxiliary keep everything after the
/// wh-word. `How many ...` counting questions need a plugin.
pub fn template_declarativize(question: &str, answer: &str) -> Conversion {
    let answer = answer.trim();
    if answer.is_empty() {
        return Conversion::Inapplicable("empty answer".into());
    }
    let stripped = question.trim().trim_end_matches(['?', ' ']).trim();
    let tokens: Vec<&str> = stripped.split_whitespace().collect();
    if tokens.is_empty() {
        return Conversion::Inapplicable("empty question".into());
    }
    let wh = tokens[0].to_lowercase();
    if wh == "how" {
        return Conversion::Inapplicable("counting question needs a plugin".into());
    }
    if !matches!(wh.as_str(), "which" | "what" | "who") {
        return Conversion::Inapplicable(format!("unsupported question word `{wh}`"));
    }
    let rest: &[&str] = if wh == "who" {
        &tokens[1..]
    } else if tokens
        .get(1)
        .is_some_and(|t| AUX_WORDS.contains(&t.to_lowercase().as_str()))
    {
        &tokens[1..]
    } else if tokens.len() >= 2 {
        // Drop the noun-phrase head after which/what.
        &tokens[2..]
    } else {
        &[]
    };
    let mut subject: String = answer.to_string();
    let mut chars = subject.chars();
    if let Some(first) = chars.next() {
        if first.is_lowercase() {
            subject = first.to_uppercase().collect::<String>() + chars.as_str();
        }
    }
    let mut statement = if rest.is_empty() {
        subject
    } else {
        format!("{} {}", subject, rest.join(" "))
    };
    while statement.ends_with('.') {
        statement.pop();
    }
    statement.push('.');
    Conversion::Statement {
        text: statement,
        from_plugin: false,
    }
}
