//! On-disk cache of admissible sets.
//!
//! Layout (UTF-8 text): a header, one JSON object per element, the cover
//! edges, and a trailing checksum over every preceding byte.
//!
//! ```text
//! WSTRATA
//! formatVersion 1
//! g 2
//! elementCount 13
//! {"id":0,"omega":1,"word":[],"length":0}
//! ...
//! hasseEdges 20
//! 0 1
//! ...
//! checksum 1f0c...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wstrata::admissible::is_permissible;
use wstrata::{AdmSet, GroupContext, ReducedWord};

pub const MAGIC: &str = "WSTRATA";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("cache checksum mismatch")]
    Checksum,
    #[error("cache format version {0} is not {FORMAT_VERSION}")]
    Version(String),
    #[error("malformed cache: {0}")]
    Format(String),
    #[error("cache failed verification: {0}")]
    Verification(String),
}

#[derive(Serialize, Deserialize)]
struct Record {
    id: usize,
    omega: i32,
    word: Vec<usize>,
    length: u32,
}

pub fn cache_path(dir: &Path, g: usize) -> PathBuf {
    dir.join(format!("adm-g{g}.wstrata"))
}

fn checksum(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// The canonical byte stream of an admissible set.
pub fn encode(adm: &AdmSet) -> String {
    let mut s = String::new();
    writeln!(s, "{MAGIC}").unwrap();
    writeln!(s, "formatVersion {FORMAT_VERSION}").unwrap();
    writeln!(s, "g {}", adm.rank()).unwrap();
    writeln!(s, "elementCount {}", adm.len()).unwrap();
    for (id, w) in adm.words().iter().enumerate() {
        let rec = Record { id, omega: w.tau_power, word: w.letters.clone(), length: adm.length(id) };
        writeln!(s, "{}", serde_json::to_string(&rec).unwrap()).unwrap();
    }
    writeln!(s, "hasseEdges {}", adm.hasse_edges().len()).unwrap();
    for (x, y) in adm.hasse_edges() {
        writeln!(s, "{x} {y}").unwrap();
    }
    let sum = checksum(s.as_bytes());
    writeln!(s, "checksum {sum}").unwrap();
    s
}

/// Writes to a temporary sibling, then renames over `path`.
pub fn cache_store(adm: &AdmSet, path: &Path) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("cache");
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, encode(adm))?;
    fs::rename(&tmp, path)
}

fn field<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str, CacheError> {
    line.and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix(' '))
        .ok_or_else(|| CacheError::Format(format!("expected '{key}' line")))
}

fn number(text: &str) -> Result<usize, CacheError> {
    text.parse().map_err(|_| CacheError::Format(format!("bad number '{text}'")))
}

pub fn decode(ctx: &GroupContext, text: &str) -> Result<AdmSet, CacheError> {
    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or(CacheError::Checksum)?;
    let (body, tail) = text.split_at(body_end);
    let stated = tail.trim_end().strip_prefix("checksum ").ok_or(CacheError::Checksum)?;
    if stated != checksum(body.as_bytes()) {
        return Err(CacheError::Checksum);
    }

    let mut lines = body.lines();
    if lines.next() != Some(MAGIC) {
        return Err(CacheError::Format("missing magic".into()));
    }
    let version = field(lines.next(), "formatVersion")?;
    if version != FORMAT_VERSION.to_string() {
        return Err(CacheError::Version(version.to_string()));
    }
    let g = number(field(lines.next(), "g")?)?;
    if g != ctx.rank() {
        return Err(CacheError::Format(format!("file holds g = {g}, wanted {}", ctx.rank())));
    }
    let n = number(field(lines.next(), "elementCount")?)?;
    let mut words = Vec::with_capacity(n);
    for expected in 0..n {
        let line = lines.next().ok_or_else(|| CacheError::Format("truncated records".into()))?;
        let rec: Record = serde_json::from_str(line).map_err(|e| CacheError::Format(e.to_string()))?;
        if rec.id != expected || rec.word.len() != rec.length as usize {
            return Err(CacheError::Format(format!("bad record {line}")));
        }
        words.push(ReducedWord { tau_power: rec.omega, letters: rec.word });
    }
    let m = number(field(lines.next(), "hasseEdges")?)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| CacheError::Format("truncated edges".into()))?;
        let (x, y) = line.split_once(' ').ok_or_else(|| CacheError::Format(format!("bad edge '{line}'")))?;
        edges.push((number(x)?, number(y)?));
    }
    if lines.next().is_some() {
        return Err(CacheError::Format("trailing data".into()));
    }
    let adm = AdmSet::from_cached(ctx, words.clone(), edges).map_err(|e| CacheError::Format(e.to_string()))?;
    verify(&adm, &words)?;
    Ok(adm)
}

/// Independent checks before a cached set is trusted: canonical sorted words,
/// `τ` as the unique bottom, `2^g` translation maxima, permissibility.
fn verify(adm: &AdmSet, words: &[ReducedWord]) -> Result<(), CacheError> {
    let ctx = adm.context();
    let g = ctx.rank();
    let fail = |m: String| Err(CacheError::Verification(m));
    for (id, w) in words.iter().enumerate() {
        if ctx.reduced_word(adm.element(id)) != *w || adm.length(id) as usize != w.len() {
            return fail(format!("record {id} is not a canonical reduced word"));
        }
        if id > 0 && (adm.length(id - 1), &words[id - 1].letters) >= (adm.length(id), &w.letters) {
            return fail(format!("record {id} out of order"));
        }
    }
    if adm.tau_id() != Some(0) {
        return fail("t is not the first record".into());
    }
    if (1..adm.len()).any(|x| adm.length(x) == 0 || !adm.leq(0, x)) {
        return fail("t is not the unique minimum".into());
    }
    let top = (g * (g + 1) / 2) as u32;
    let maxima = adm.maximal_ids();
    if maxima.len() != 1 << g || maxima.iter().any(|&m| adm.length(m) != top) {
        return fail(format!("expected {} maxima of length {top}", 1 << g));
    }
    if let Some(x) = adm.elements().iter().find(|x| !is_permissible(ctx, x)) {
        return fail(format!("{} is not permissible", ctx.reduced_word(x)));
    }
    Ok(())
}

pub fn cache_load(ctx: &GroupContext, path: &Path) -> Result<AdmSet, CacheError> {
    let text = fs::read_to_string(path)?;
    decode(ctx, &text)
}

/// Loads from `dir` when possible, otherwise enumerates and stores.
/// Problems with an existing file are reported in `warnings`.
pub fn obtain(ctx: &GroupContext, dir: Option<&Path>, warnings: &mut Vec<String>) -> wstrata::Result<AdmSet> {
    let Some(dir) = dir else {
        return AdmSet::enumerate(ctx);
    };
    let path = cache_path(dir, ctx.rank());
    if path.exists() {
        match cache_load(ctx, &path) {
            Ok(adm) => return Ok(adm),
            Err(e) => warnings.push(format!("warning: discarding {}: {e}; recomputing", path.display())),
        }
    }
    let adm = AdmSet::enumerate(ctx)?;
    if let Err(e) = cache_store(&adm, &path) {
        warnings.push(format!("warning: could not write {}: {e}", path.display()));
    }
    Ok(adm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_in_memory() {
        for g in 1..=3 {
            let ctx = GroupContext::new(g).unwrap();
            let adm = AdmSet::enumerate(&ctx).unwrap();
            let text = encode(&adm);
            let back = decode(&ctx, &text).unwrap();
            assert_eq!(back.words(), adm.words());
            assert_eq!(back.hasse_edges(), adm.hasse_edges());
            assert_eq!(encode(&back), text);
            for x in 0..adm.len() {
                assert_eq!(back.lower_set(x), adm.lower_set(x));
            }
        }
    }

    #[test]
    fn corruption_is_detected() {
        let ctx = GroupContext::new(2).unwrap();
        let text = encode(&AdmSet::enumerate(&ctx).unwrap());
        assert!(matches!(decode(&ctx, &text[..text.len() / 2]), Err(CacheError::Checksum)));
        let flipped = text.replacen("\"length\":1", "\"length\":2", 1);
        assert!(matches!(decode(&ctx, &flipped), Err(CacheError::Checksum)));
        assert!(decode(&GroupContext::new(3).unwrap(), &text).is_err());
    }

    #[test]
    fn version_bump_is_rejected() {
        let ctx = GroupContext::new(1).unwrap();
        let text = encode(&AdmSet::enumerate(&ctx).unwrap());
        let body: String = text.lines().take_while(|l| !l.starts_with("checksum")).map(|l| format!("{l}\n")).collect();
        let bumped = body.replace("formatVersion 1", "formatVersion 2");
        let resealed = format!("{bumped}checksum {}\n", checksum(bumped.as_bytes()));
        assert!(matches!(decode(&ctx, &resealed), Err(CacheError::Version(_))));
    }

    #[test]
    fn forged_but_sealed_content_fails_verification() {
        let ctx = GroupContext::new(2).unwrap();
        let text = encode(&AdmSet::enumerate(&ctx).unwrap());
        let body: String = text.lines().take_while(|l| !l.starts_with("checksum")).map(|l| format!("{l}\n")).collect();
        // strip every cover edge: the order collapses and t is no longer below anything
        let forged: String = body
            .lines()
            .take_while(|l| !l.starts_with("hasseEdges"))
            .map(|l| format!("{l}\n"))
            .chain(std::iter::once("hasseEdges 0\n".to_string()))
            .collect();
        let resealed = format!("{forged}checksum {}\n", checksum(forged.as_bytes()));
        assert!(matches!(decode(&ctx, &resealed), Err(CacheError::Verification(_))));
    }
}
