//! Plain-text complex format and dataset manifests.
//!
//! A complex file starts with a header line `n d`, followed by one facet per
//! line as `d` whitespace-separated labels. Blank lines and lines starting
//! with `#` are ignored.
//!
//! A dataset directory holds complex files and a `manifest.txt` whose lines
//! read `file n facets sha256`. Comment lines in the manifest are kept as the
//! dataset's provenance note.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::complex::SimplicialComplex;
use crate::cycles::SurfaceDataset;
use crate::error::{Error, Result};

/// Environment variable naming the root of the surface datasets.
pub const DATA_ENV: &str = "VOLRIG_DATA";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let nums = parse_numbers(hl, header)?;
    let (n, d) = match nums[..] {
        [n, d] => (n, d),
        _ => return Err(parse_err(hl, "header must be `n d`")),
    };
    let mut facets = Vec::new();
    for (ln, line) in lines {
        let f = parse_numbers(ln, line)?;
        if f.len() != d {
            return Err(parse_err(
                ln,
                format!("expected {d} labels, found {}", f.len()),
            ));
        }
        facets.push(f);
    }
    if facets.is_empty() {
        return SimplicialComplex::empty(n, d);
    }
    SimplicialComplex::build(n, facets)
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("not a label: {t:?}")))
        })
        .collect()
}

pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut out = format!("{} {}\n", k.n(), k.d());
    for f in k.facets() {
        let labels: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Dataset(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Manifest line for a complex written with [`write_complex`].
pub fn manifest_line(file: &str, k: &SimplicialComplex) -> String {
    format!(
        "{file} {} {} {}",
        k.n(),
        k.num_facets(),
        sha256_hex(write_complex(k).as_bytes())
    )
}

/// Loads every complex listed in `dir/manifest.txt`, checking vertex and
/// facet counts and checksums.
pub fn load_dataset(dir: &Path) -> Result<SurfaceDataset> {
    let manifest_path = dir.join("manifest.txt");
    let manifest = fs::read_to_string(&manifest_path)
        .map_err(|e| Error::Dataset(format!("{}: {e}", manifest_path.display())))?;
    let mut provenance = Vec::new();
    let mut complexes = Vec::new();
    for (i, line) in manifest.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            provenance.push(c.trim().to_string());
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [file, n, facets, sum] = parts[..] else {
            return Err(Error::Dataset(format!(
                "manifest line {}: expected `file n facets sha256`",
                i + 1
            )));
        };
        let bytes = fs::read(dir.join(file)).map_err(|e| Error::Dataset(format!("{file}: {e}")))?;
        if sha256_hex(&bytes) != sum {
            return Err(Error::Dataset(format!("{file}: checksum mismatch")));
        }
        let k = parse_complex(&String::from_utf8_lossy(&bytes))?;
        if k.n().to_string() != n || k.num_facets().to_string() != facets {
            return Err(Error::Dataset(format!(
                "{file}: expected n={n}, facets={facets}; found n={}, facets={}",
                k.n(),
                k.num_facets()
            )));
        }
        complexes.push((file.to_string(), k));
    }
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    SurfaceDataset::new(name, complexes, provenance.join("\n"))
}

/// Writes complexes and a manifest into `dir`, creating it if needed.
pub fn write_dataset(
    dir: &Path,
    complexes: &[(String, SimplicialComplex)],
    provenance: &str,
) -> Result<()> {
    let io = |e: std::io::Error| Error::Dataset(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut manifest = String::new();
    for line in provenance.lines() {
        manifest.push_str(&format!("# {line}\n"));
    }
    for (file, k) in complexes {
        fs::write(dir.join(file), write_complex(k)).map_err(io)?;
        manifest.push_str(&manifest_line(file, k));
        manifest.push('\n');
    }
    fs::write(dir.join("manifest.txt"), manifest).map_err(io)
}

/// Dataset root from the environment, if set.
pub fn dataset_root() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV).map(PathBuf::from)
}
