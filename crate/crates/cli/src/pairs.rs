//! Directory scanning and the `<name>.cover.pgm` / `<name>.stego.pgm`
//! pairing convention.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bitmix::image::read_pgm_file;
use bitmix::StegoPair;

pub const COVER_SUFFIX: &str = ".cover.pgm";
pub const STEGO_SUFFIX: &str = ".stego.pgm";

/// Regular files in `dir` whose name ends with `suffix`, sorted by name.
pub fn files_with_suffix(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.file_type()?.is_file() && name.ends_with(suffix) {
            out.push(entry.path());
        }
    }
    out.sort();
    Ok(out)
}

pub struct NamedPair {
    pub name: String,
    pub cover_path: PathBuf,
    pub stego_path: PathBuf,
    pub pair: StegoPair,
}

/// Loads every matched pair in `dir`, sorted by name. Unpaired files and
/// unusable pairs are all reported in one error.
pub fn load_pairs(dir: &Path) -> Result<Vec<NamedPair>> {
    let mut slots: BTreeMap<String, (Option<PathBuf>, Option<PathBuf>)> = BTreeMap::new();
    for path in files_with_suffix(dir, ".pgm")? {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        if let Some(name) = file.strip_suffix(COVER_SUFFIX) {
            slots.entry(name.to_string()).or_default().0 = Some(path);
        } else if let Some(name) = file.strip_suffix(STEGO_SUFFIX) {
            slots.entry(name.to_string()).or_default().1 = Some(path);
        }
    }
    if slots.is_empty() {
        bail!(
            "no *{COVER_SUFFIX} / *{STEGO_SUFFIX} files in {}",
            dir.display()
        );
    }

    let mut problems = Vec::new();
    let mut pairs = Vec::new();
    for (name, slot) in slots {
        let (cover_path, stego_path) = match slot {
            (Some(c), Some(s)) => (c, s),
            (Some(c), None) => {
                problems.push(format!("{}: no matching stego file", c.display()));
                continue;
            }
            (None, Some(s)) => {
                problems.push(format!("{}: no matching cover file", s.display()));
                continue;
            }
            (None, None) => unreachable!(),
        };
        let loaded = read_pgm_file(&cover_path)
            .with_context(|| cover_path.display().to_string())
            .and_then(|c| {
                let s =
                    read_pgm_file(&stego_path).with_context(|| stego_path.display().to_string())?;
                StegoPair::new(c, s).with_context(|| format!("pair {name}"))
            });
        match loaded {
            Ok(pair) => pairs.push(NamedPair {
                name,
                cover_path,
                stego_path,
                pair,
            }),
            Err(e) => problems.push(format!("{e:#}")),
        }
    }
    if !problems.is_empty() {
        bail!(
            "{} unusable input(s):\n  {}",
            problems.len(),
            problems.join("\n  ")
        );
    }
    Ok(pairs)
}
