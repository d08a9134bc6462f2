//! `key = value` config files. Every key is a long flag name; flags given on
//! the command line take precedence.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value, got {raw:?}", i + 1);
        };
        let key = k.trim().trim_start_matches('-').to_string();
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Inserts config entries right after the subcommand, so that the same flag
/// given later on the command line overrides them. Boolean flags take `true`
/// or `false`.
pub fn merge(args: Vec<String>, path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let entries = parse(&text)?;
    let Some(sub) = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|i| i + 1) else {
        return Ok(args);
    };
    let mut extra = Vec::new();
    for (key, value) in entries {
        let flag = if key.len() == 1 {
            format!("-{key}")
        } else {
            format!("--{key}")
        };
        match value.as_str() {
            "true" => extra.push(flag),
            "false" => {}
            _ => {
                extra.push(flag);
                extra.push(value);
            }
        }
    }
    let mut out = args[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}

/// Removes `--config PATH` (or `--config=PATH`) from the arguments.
pub fn take_config(args: &mut Vec<String>) -> Result<Option<String>> {
    if let Some(i) = args.iter().position(|a| a == "--config") {
        if i + 1 >= args.len() {
            bail!("--config needs a path");
        }
        let path = args.remove(i + 1);
        args.remove(i);
        return Ok(Some(path));
    }
    if let Some(i) = args.iter().position(|a| a.starts_with("--config=")) {
        let path = args.remove(i)["--config=".len()..].to_string();
        return Ok(Some(path));
    }
    Ok(None)
}
