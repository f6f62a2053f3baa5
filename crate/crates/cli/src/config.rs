//! Optional configuration file, simple `key=value` per line with `#`
//! comments. Keys are long flag names without the dashes and are appended
//! to the argument list; flags given on the command line win.

use std::ffi::OsString;
use std::fs;

/// Flags that take no value. `key=true` injects the bare flag,
/// `key=false` leaves it out.
const SWITCHES: &[&str] = &["strict", "plot-data", "schwarzschild"];

pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let path = match find_config(&argv)? {
        Some(p) => p,
        None => return Ok(argv),
    };
    let text =
        fs::read_to_string(&path).map_err(|e| format!("--config: cannot read {path}: {e}"))?;
    let mut merged = argv.clone();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("--config: line {line_no}: expected key=value, got {line:?}"))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("--config: line {line_no}: empty key"));
        }
        let flag = format!("--{key}");
        if has_flag(&argv, &flag) {
            continue;
        }
        if SWITCHES.contains(&key) {
            match value {
                "true" => merged.push(flag.into()),
                "false" => {}
                other => {
                    return Err(format!(
                        "--config: line {line_no}: {key} takes true or false, got {other:?}"
                    ))
                }
            }
        } else {
            merged.push(flag.into());
            merged.push(value.into());
        }
    }
    Ok(merged)
}

fn find_config(argv: &[OsString]) -> Result<Option<String>, String> {
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        let Some(text) = arg.to_str() else { continue };
        if text == "--config" {
            let path = iter
                .next()
                .and_then(|p| p.to_str())
                .ok_or("--config: missing path")?;
            return Ok(Some(path.to_owned()));
        }
        if let Some(path) = text.strip_prefix("--config=") {
            return Ok(Some(path.to_owned()));
        }
    }
    Ok(None)
}

fn has_flag(argv: &[OsString], flag: &str) -> bool {
    let prefixed = format!("{flag}=");
    argv.iter()
        .any(|a| a.to_str().is_some_and(|t| t == flag || t.starts_with(&prefixed)))
}
