//! `--config` files: `key=value` lines merged beneath explicit flags.

use std::fs;

use crate::Failure;

fn flag_key(arg: &str) -> Option<String> {
    let body = arg.strip_prefix("--")?;
    let key = body.split_once('=').map_or(body, |(k, _)| k);
    Some(key.replace('_', "-"))
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub(crate) fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        pairs.push((k, v.trim().to_string()));
    }
    Ok(pairs)
}

/// Appends `--key value` for every config entry whose key is not already
/// given on the command line.
pub(crate) fn merge_config(args: Vec<String>) -> Result<Vec<String>, Failure> {
    let mut path = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            path = it.next().cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| Failure { code: 2, message: format!("{path}: {e}") })?;
    let pairs = parse_config(&text).map_err(|m| Failure { code: 1, message: format!("{path}: {m}") })?;
    let present: Vec<String> = args.iter().skip(1).filter_map(|a| flag_key(a)).collect();
    let mut merged = args;
    for (k, v) in pairs {
        if k == "config" || present.contains(&k) {
            continue;
        }
        merged.push(format!("--{k}"));
        merged.push(v);
    }
    Ok(merged)
}
