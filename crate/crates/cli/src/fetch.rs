//! Downloads a dataset from a user-supplied URL and checks its SHA-256.

use std::io::Read;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::CliError;

const MAX_BYTES: u64 = 1 << 30;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Checks `bytes` against `expected` (hex, case-insensitive) and writes them
/// to `output` only on a match.
pub fn verify_and_write(bytes: &[u8], expected: &str, output: &Path) -> Result<String, CliError> {
    let actual = sha256_hex(bytes);
    if !actual.eq_ignore_ascii_case(expected.trim()) {
        return Err(CliError::Fetch(format!(
            "checksum mismatch: expected {expected}, got {actual}"
        )));
    }
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(output, bytes).map_err(|e| CliError::io(output, e))?;
    Ok(actual)
}

pub fn fetch(url: &str, expected_sha256: &str, output: &Path) -> Result<String, CliError> {
    let response = ureq::get(url)
        .call()
        .map_err(|e| CliError::Fetch(format!("{url}: {e}")))?;
    let mut bytes = Vec::new();
    response
        .into_body()
        .into_reader()
        .take(MAX_BYTES)
        .read_to_end(&mut bytes)
        .map_err(|e| CliError::Fetch(format!("{url}: {e}")))?;
    verify_and_write(&bytes, expected_sha256, output)
}
