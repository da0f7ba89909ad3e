//! `.amb` archive: a deflate zip holding `index.json` (records plus base64
//! little-endian f32 vectors) and `payload/<id>.bin` geometry blobs. Entries
//! are written in sorted order with a fixed timestamp, so identical inputs
//! give identical bytes.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::{Cursor, Read, Write};
use std::path::Path;
use thiserror::Error;
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipArchive, ZipWriter};

use super::embed::{Embedder, DIM};
use super::ModelRecord;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("bundle io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bundle archive: {0}")]
    Zip(#[from] zip::result::ZipError),
    #[error("corrupt bundle: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    records: Vec<ModelRecord>,
    vectors: Vec<Vec<f32>>,
    payloads: Vec<Vec<u8>>,
    by_id: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct IndexDoc {
    format_version: u32,
    dim: usize,
    records: Vec<IndexEntry>,
}

#[derive(Serialize, Deserialize)]
struct IndexEntry {
    #[serde(flatten)]
    record: ModelRecord,
    vector: String,
}

impl ModelBundle {
    /// Embeds every record's description; entries are ordered by id.
    pub fn new(mut entries: Vec<(ModelRecord, Vec<u8>)>, embedder: &dyn Embedder) -> Self {
        entries.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        let vectors =
            entries.iter().map(|(r, _)| embedder.embed(&r.description).iter().map(|x| *x as f32).collect()).collect();
        let (records, payloads): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        Self::assemble(records, vectors, payloads)
    }

    fn assemble(records: Vec<ModelRecord>, vectors: Vec<Vec<f32>>, payloads: Vec<Vec<u8>>) -> Self {
        let by_id = records.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        Self { records, vectors, payloads, by_id }
    }

    pub fn records(&self) -> &[ModelRecord] {
        &self.records
    }

    pub fn vectors(&self) -> &[Vec<f32>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ModelRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn payload(&self, id: &str) -> Option<&[u8]> {
        self.by_id.get(id).map(|&i| self.payloads[i].as_slice())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, BundleError> {
        let doc = IndexDoc {
            format_version: FORMAT_VERSION,
            dim: DIM,
            records: self
                .records
                .iter()
                .zip(&self.vectors)
                .map(|(r, v)| IndexEntry {
                    record: r.clone(),
                    vector: B64.encode(v.iter().flat_map(|x| x.to_le_bytes()).collect::<Vec<u8>>()),
                })
                .collect(),
        };
        let index = serde_json::to_vec(&doc).map_err(|e| BundleError::Corrupt(e.to_string()))?;
        let opts = SimpleFileOptions::default()
            .compression_method(CompressionMethod::Deflated)
            .last_modified_time(DateTime::default())
            .unix_permissions(0o644);
        let mut zw = ZipWriter::new(Cursor::new(Vec::new()));
        zw.start_file("index.json", opts)?;
        zw.write_all(&index)?;
        // records are id-sorted, so payload entries are too
        for (r, p) in self.records.iter().zip(&self.payloads) {
            zw.start_file(r.payload_ref.as_str(), opts)?;
            zw.write_all(p)?;
        }
        Ok(zw.finish()?.into_inner())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, BundleError> {
        let mut za = ZipArchive::new(Cursor::new(bytes))?;
        let mut index = Vec::new();
        za.by_name("index.json")?.read_to_end(&mut index)?;
        let doc: IndexDoc =
            serde_json::from_slice(&index).map_err(|e| BundleError::Corrupt(format!("index.json: {e}")))?;
        if doc.format_version != FORMAT_VERSION || doc.dim != DIM {
            return Err(BundleError::Corrupt(format!(
                "unsupported format {} / dimension {}",
                doc.format_version, doc.dim
            )));
        }
        let mut records = Vec::with_capacity(doc.records.len());
        let mut vectors = Vec::with_capacity(doc.records.len());
        let mut payloads = Vec::with_capacity(doc.records.len());
        for e in doc.records {
            let raw = B64
                .decode(&e.vector)
                .map_err(|err| BundleError::Corrupt(format!("vector of {}: {err}", e.record.id)))?;
            if raw.len() != DIM * 4 {
                return Err(BundleError::Corrupt(format!("vector of {} has wrong length", e.record.id)));
            }
            vectors.push(raw.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect());
            e.record.check().map_err(|m| BundleError::Corrupt(format!("{}: {m}", e.record.id)))?;
            let mut blob = Vec::new();
            za.by_name(&e.record.payload_ref)
                .map_err(|err| BundleError::Corrupt(format!("{}: {err}", e.record.payload_ref)))?
                .read_to_end(&mut blob)?;
            payloads.push(blob);
            records.push(e.record);
        }
        if records.windows(2).any(|w| w[0].id >= w[1].id) {
            return Err(BundleError::Corrupt("records not sorted by unique id".into()));
        }
        Ok(Self::assemble(records, vectors, payloads))
    }

    pub fn write(&self, path: &Path) -> Result<(), BundleError> {
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, BundleError> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    /// Hex sha256 of the archive bytes.
    pub fn digest(&self) -> Result<String, BundleError> {
        Ok(hex_digest(&self.to_bytes()?))
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::super::defaults::default_bundle;
    use super::*;

    #[test]
    fn round_trip_and_reproducible() {
        let b = default_bundle();
        let bytes = b.to_bytes().unwrap();
        assert_eq!(bytes, default_bundle().to_bytes().unwrap());
        let back = ModelBundle::from_bytes(&bytes).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(ModelBundle::from_bytes(b"not a zip").is_err());
    }
}
