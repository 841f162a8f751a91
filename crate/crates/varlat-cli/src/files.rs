//! Loaders for the three on-disk formats: basis files (one identity per
//! line), lattice files (an `elements:` line plus `cover:` lines), and
//! Cayley tables (whitespace-separated integer matrices).

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use varlat_core::lattice::FiniteLattice;
use varlat_core::parse::parse_basis;
use varlat_core::syntax::Basis;

pub fn load_basis(path: &Path) -> Result<Basis> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read basis file {}", path.display()))?;
    let basis = parse_basis(&text)
        .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
    if basis.identities().is_empty() {
        bail!("{}: basis file contains no identities", path.display());
    }
    Ok(basis)
}

/// Reads a lattice description: first an `elements: a b c` line, then one
/// `cover: a < b` line per covering pair, with `#` comments allowed.
pub fn load_lattice(path: &Path) -> Result<FiniteLattice> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read lattice file {}", path.display()))?;
    let mut names: Option<Vec<String>> = None;
    let mut covers: Vec<(usize, usize)> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("elements:") {
            if names.is_some() {
                bail!("{}:{}: second elements line", path.display(), number + 1);
            }
            let list: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if list.is_empty() {
                bail!("{}:{}: empty elements line", path.display(), number + 1);
            }
            names = Some(list);
        } else if let Some(rest) = trimmed.strip_prefix("cover:") {
            let names = names.as_ref().with_context(|| {
                format!("{}:{}: cover before elements line", path.display(), number + 1)
            })?;
            let mut sides = rest.split('<');
            let lower = sides.next().map(str::trim).unwrap_or("");
            let upper = sides.next().map(str::trim).unwrap_or("");
            if lower.is_empty() || upper.is_empty() || sides.next().is_some() {
                bail!(
                    "{}:{}: cover lines look like `cover: a < b`",
                    path.display(),
                    number + 1
                );
            }
            let position = |name: &str| {
                names.iter().position(|n| n == name).with_context(|| {
                    format!("{}:{}: unknown element '{}'", path.display(), number + 1, name)
                })
            };
            covers.push((position(lower)?, position(upper)?));
        } else {
            bail!(
                "{}:{}: expected an elements or cover line",
                path.display(),
                number + 1
            );
        }
    }
    let names = names.with_context(|| format!("{}: no elements line", path.display()))?;
    FiniteLattice::from_covers(names, &covers)
        .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))
}

/// Reads a Cayley table: one row per line, entries are 0-based element
/// indices separated by whitespace.
pub fn load_table(path: &Path) -> Result<Vec<Vec<u32>>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read table file {}", path.display()))?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let row: Vec<u32> = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>().with_context(|| {
                    format!("{}:{}: bad table entry '{}'", path.display(), number + 1, tok)
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{}: empty table", path.display());
    }
    Ok(rows)
}
