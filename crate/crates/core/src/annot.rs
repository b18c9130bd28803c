//! Reading and writing `.annot.json` files.

use std::path::Path;

use crate::region::AnnotatedImage;

#[derive(Debug, thiserror::Error)]
pub enum AnnotError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing annotation: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn from_json(text: &str) -> Result<AnnotatedImage, AnnotError> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(image: &AnnotatedImage) -> String {
    let mut s = serde_json::to_string_pretty(image).expect("annotation serializes");
    s.push('\n');
    s
}

pub fn load(path: &Path) -> Result<AnnotatedImage, AnnotError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| AnnotError::Io { path: path.display().to_string(), source })?;
    from_json(&text)
}

pub fn save(path: &Path, image: &AnnotatedImage) -> Result<(), AnnotError> {
    std::fs::write(path, to_json(image))
        .map_err(|source| AnnotError::Io { path: path.display().to_string(), source })
}
