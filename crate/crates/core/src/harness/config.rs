//! `key = value` config files, spliced in as flags ahead of the command line.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{Error, Result};

/// Parses a config file: one `key = value` per line, `#` comments, blank
/// lines ignored. Keys are flag names without the leading dashes.
pub fn parse_config(text: &str, origin: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "{}:{}: expected key = value, got {line:?}",
                origin.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::InvalidInput(format!("{}:{}: bad key {key:?}", origin.display(), lineno + 1)));
        }
        if key == "config" {
            return Err(Error::InvalidInput(format!("{}:{}: config files do not nest", origin.display(), lineno + 1)));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Finds `--config PATH` or `--config=PATH`, removes it, and inserts the
/// file's settings right after the subcommand so later flags win.
pub fn splice_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or_else(|| Error::InvalidInput("--config needs a path".into()))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let path = Path::new(&path).to_path_buf();
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    let settings = parse_config(&text, &path)?;
    // the subcommand is the first argument after the program name that is not a flag
    let at = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(rest.len());
    let injected = settings.into_iter().map(|(k, v)| OsString::from(format!("--{k}={v}")));
    rest.splice(at..at, injected);
    Ok(rest)
}
