use std::io::Write;
use std::path::{Path, PathBuf};

use plainalign_core::corpus::{write_document, ManifestEntry, MANIFEST_HEADER};

use crate::error::{HarvestError, Result};
use crate::extract::ExtractedDocument;

pub const FETCH_LOG_HEADER: &str = "url\tstatus\taccess_date\toutcome";
pub const UNPAIRED_HEADER: &str = "site_id\tside\turl\tdoc_id";

/// Writes `corpus/<site_id>/<doc_id>.txt` with its sidecar and
/// `corpus/<site_id>/raw/<doc_id>.html` under `out_dir`. Returns the text
/// path relative to `out_dir`, with forward slashes.
pub fn write_extracted(out_dir: &Path, site_id: &str, doc: &mut ExtractedDocument) -> Result<String> {
    let id = doc.document.doc_id.clone();
    let rel = format!("corpus/{site_id}/{id}.txt");
    write_document(&out_dir.join(&rel), &doc.document)?;
    let raw_dir = out_dir.join("corpus").join(site_id).join("raw");
    std::fs::create_dir_all(&raw_dir).map_err(|e| HarvestError::io(&raw_dir, e))?;
    let raw: PathBuf = raw_dir.join(format!("{id}.html"));
    std::fs::write(&raw, &doc.raw_html).map_err(|e| HarvestError::io(&raw, e))?;
    doc.raw_html_path = Some(raw);
    Ok(rel)
}

/// Replaces `path` in one rename so readers never see a partial file.
pub(crate) fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| HarvestError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarvestError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| HarvestError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| HarvestError::io(path, e.error))?;
    Ok(())
}

pub(crate) fn write_tsv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut out = format!("{header}\n");
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    write_atomic(path, &out)
}

/// Merges `entries` into the manifest at `path`: rows with a known pair_id
/// are replaced in place, new ones are appended. The file is replaced atomically.
pub fn update_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let mut rows = if path.exists() {
        plainalign_core::corpus::load_manifest(path)?
    } else {
        Vec::new()
    };
    for entry in entries {
        match rows.iter_mut().find(|r| r.pair_id == entry.pair_id) {
            Some(row) => *row = entry.clone(),
            None => rows.push(entry.clone()),
        }
    }
    let rendered: Vec<String> = rows.iter().map(ManifestEntry::to_row).collect();
    write_tsv(path, MANIFEST_HEADER, &rendered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use plainalign_core::corpus::DomainTag;

    fn entry(id: &str, c: &str) -> ManifestEntry {
        ManifestEntry {
            pair_id: id.into(),
            complex_path: c.into(),
            simple_path: "s.txt".into(),
            domain: DomainTag::News,
        }
    }

    #[test]
    fn manifest_rows_replaced_and_appended() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.tsv");
        update_manifest(&path, &[entry("a", "a1.txt"), entry("b", "b.txt")]).unwrap();
        update_manifest(&path, &[entry("a", "a2.txt"), entry("c", "c.txt")]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MANIFEST_HEADER);
        assert_eq!(&lines[1..], ["a\ta2.txt\ts.txt\tnews", "b\tb.txt\ts.txt\tnews", "c\tc.txt\ts.txt\tnews"]);
        let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 1);
    }
}
