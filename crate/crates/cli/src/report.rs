//! JSON-lines report with a provenance header, plus a human summary on stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Report {
    out: Box<dyn Write>,
    quiet: bool,
}

impl Report {
    pub fn open(path: Option<&Path>, quiet: bool) -> io::Result<Report> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Report { out, quiet })
    }

    /// Version and a SHA-256 of the canonical JSON of `config`. Execution
    /// settings that cannot change results are left out of `config`.
    pub fn header(&mut self, config: &impl Serialize) -> io::Result<()> {
        let config = serde_json::to_value(config).map_err(io::Error::other)?;
        let digest = Sha256::digest(config.to_string().as_bytes());
        let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.line(
            "provenance",
            json!({
                "tool": "ramsey",
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "config_hash": hash,
            }),
        )
    }

    /// Writes `body` with a leading `"type"` field.
    pub fn line(&mut self, kind: &str, body: impl Serialize) -> io::Result<()> {
        let mut obj = serde_json::Map::new();
        obj.insert("type".into(), Value::from(kind));
        match serde_json::to_value(body).map_err(io::Error::other)? {
            Value::Object(m) => obj.extend(m),
            Value::Null => {}
            other => {
                obj.insert("value".into(), other);
            }
        }
        serde_json::to_writer(&mut self.out, &Value::Object(obj)).map_err(io::Error::other)?;
        self.out.write_all(b"\n")
    }

    pub fn say(&self, text: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("{text}");
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
