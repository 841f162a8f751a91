//! On-disk store for computed free objects, keyed by a canonical hash of
//! the basis and the generator count. The directory is named by the
//! VARLAT_CACHE environment variable; writes go through a temporary file
//! and a rename so concurrent processes never observe partial entries.

use std::collections::{BTreeMap, BTreeSet};
use std::env;
use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use varlat_core::relfree::{FreeObject, Limits, PeriodicBase};
use varlat_core::syntax::{Basis, Identity, Letter, Word};

pub fn cache_dir() -> Option<PathBuf> {
    let value = env::var_os("VARLAT_CACHE")?;
    if value.is_empty() {
        return None;
    }
    Some(PathBuf::from(value))
}

fn rename_word(w: &Word, map: &BTreeMap<Letter, Letter>) -> Word {
    let letters: Vec<Letter> = w.letters().iter().map(|l| map[l]).collect();
    Word::new(letters).expect("renaming preserves nonemptiness")
}

fn render_under(basis: &Basis, map: &BTreeMap<Letter, Letter>) -> String {
    let mut lines: Vec<String> = basis
        .identities()
        .iter()
        .map(|id| match id {
            Identity::Equation(u, v) => {
                let a = rename_word(u, map).to_string();
                let b = rename_word(v, map).to_string();
                if a <= b {
                    format!("{} = {}", a, b)
                } else {
                    format!("{} = {}", b, a)
                }
            }
            Identity::ZeroReduced(w) => format!("{} = 0", rename_word(w, map)),
        })
        .collect();
    lines.sort();
    lines.dedup();
    lines.join("\n")
}

/// A renaming-invariant text form of the basis: identities are rendered
/// with their sides in lexicographic order, lines sorted, under whichever
/// bijective relettering gives the least text. Bases that differ only by
/// a letter bijection therefore share cache entries.
pub fn canonical_basis_text(basis: &Basis) -> String {
    let present: Vec<Letter> = basis
        .identities()
        .iter()
        .flat_map(|id| id.content())
        .collect::<BTreeSet<Letter>>()
        .into_iter()
        .collect();
    let n = present.len();
    let targets: Vec<Letter> = (1..=n as u32)
        .map(|i| Letter::new(i).expect("positive index"))
        .collect();
    if n > 6 {
        // too many letters to try every bijection; normalize positions only
        let map: BTreeMap<Letter, Letter> = present
            .iter()
            .copied()
            .zip(targets.iter().copied())
            .collect();
        return render_under(basis, &map);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<String> = None;
    permute(&mut order, 0, &mut |perm| {
        let map: BTreeMap<Letter, Letter> = present
            .iter()
            .copied()
            .zip(perm.iter().map(|&i| targets[i]))
            .collect();
        let text = render_under(basis, &map);
        if best.as_ref().map_or(true, |b| text < *b) {
            best = Some(text);
        }
    });
    best.unwrap_or_default()
}

fn permute(items: &mut Vec<usize>, from: usize, visit: &mut impl FnMut(&[usize])) {
    if from == items.len() {
        visit(items);
        return;
    }
    for i in from..items.len() {
        items.swap(from, i);
        permute(items, from + 1, visit);
        items.swap(from, i);
    }
}

pub fn cache_key(basis: &Basis, rank: u32) -> String {
    let text = format!("{}\nrank={}\n", canonical_basis_text(basis), rank);
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

#[derive(Serialize, Deserialize)]
struct StoredFreeObject {
    index: u32,
    period: u32,
    rank: u32,
    labels: Vec<u32>,
}

/// Returns the cached free object when a valid entry exists; any reading
/// or validation failure falls back to recomputation.
pub fn load(dir: &PathBuf, key: &str, rank: u32, limits: &Limits) -> Option<FreeObject> {
    let path = dir.join(format!("{}.json", key));
    let text = fs::read_to_string(path).ok()?;
    let stored: StoredFreeObject = serde_json::from_str(&text).ok()?;
    if stored.rank != rank {
        return None;
    }
    FreeObject::from_parts(
        PeriodicBase::new(stored.index, stored.period),
        stored.rank,
        stored.labels,
        limits,
    )
    .ok()
}

/// Best-effort store; failures never fail the command.
pub fn store(dir: &PathBuf, key: &str, object: &FreeObject) {
    let stored = StoredFreeObject {
        index: object.base().index,
        period: object.base().period,
        rank: object.rank(),
        labels: object.labels().to_vec(),
    };
    let Ok(text) = serde_json::to_string(&stored) else {
        return;
    };
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let temp = dir.join(format!("{}.tmp-{}", key, std::process::id()));
    if fs::write(&temp, text).is_err() {
        return;
    }
    let _ = fs::rename(&temp, dir.join(format!("{}.json", key)));
}
