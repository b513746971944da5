//! Model bundles are versioned JSON documents. Floats are written with
//! shortest round-trip formatting, so a save followed by a load
//! reproduces every parameter exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use crate::dataset::create;
use crate::error::{io_error, Error, Result};
use crate::pipeline::{ModelBundle, BUNDLE_FORMAT, BUNDLE_VERSION};

#[derive(Deserialize)]
struct Header {
    format: Option<String>,
    version: Option<serde_json::Value>,
}

pub fn bundle_to_string(bundle: &ModelBundle) -> Result<String> {
    serde_json::to_string(bundle).map_err(|e| Error::CorruptBundle(e.to_string()))
}

pub fn bundle_from_str(text: &str) -> Result<ModelBundle> {
    let header: Header = serde_json::from_str(text).map_err(|e| Error::CorruptBundle(e.to_string()))?;
    if header.format.as_deref() != Some(BUNDLE_FORMAT) {
        return Err(Error::CorruptBundle("not a clonescope model bundle".into()));
    }
    match header.version {
        Some(v) if v.as_u64() == Some(u64::from(BUNDLE_VERSION)) => {}
        Some(v) => return Err(Error::UnsupportedVersion { found: v.to_string(), supported: BUNDLE_VERSION }),
        None => return Err(Error::CorruptBundle("missing version".into())),
    }
    serde_json::from_str(text).map_err(|e| Error::CorruptBundle(e.to_string()))
}

pub fn save_bundle(bundle: &ModelBundle, path: &Path) -> Result<()> {
    let text = bundle_to_string(bundle)?;
    let mut out = create(path)?;
    out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(io_error(path))
}

pub fn load_bundle(path: &Path) -> Result<ModelBundle> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    bundle_from_str(&text)
}
