//! Output plumbing: config hashing, version/hash stamping, and atomic
//! file promotion so interrupted runs never leave partial artifacts.

use std::path::Path;

use sha2::{Digest, Sha256};

/// Hex SHA-256 of the verbatim config text, truncated to 16 chars for
/// readability; embedded in every artifact.
pub fn config_hash(config_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config_text.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Comment line prepended to text/CSV artifacts.
pub fn stamp_line(config_hash: &str) -> String {
    format!("# rem {} config {config_hash}\n", rem_core::VERSION)
}

/// Write bytes to `path` atomically: a temp file in the same directory,
/// then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

/// Write a stamped text artifact (CSV or plain text).
pub fn write_stamped(path: &Path, config_hash: &str, body: &str) -> std::io::Result<()> {
    let mut out = stamp_line(config_hash);
    out.push_str(body);
    write_atomic(path, out.as_bytes())
}

/// Write a JSON artifact; `value` must already carry version/hash fields.
pub fn write_json(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let mut body = serde_json::to_string_pretty(value).expect("serializable");
    body.push('\n');
    write_atomic(path, body.as_bytes())
}
