//! `key=value` configuration files. Each entry becomes `--key=value` placed
//! right after the subcommand name, so options given on the command line
//! (which come later) override it. Unknown keys fail argument parsing.

use std::ffi::OsString;

use crate::{CliError, CliResult};

const SUBCOMMANDS: [&str; 6] = ["decompose", "gcd-scan", "count", "lorentz", "perturb", "stats"];

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') || k.contains(char::is_whitespace) {
            return Err(CliError::Config(format!("config line {}: bad key `{k}`", i + 1)));
        }
        if k == "config" {
            return Err(CliError::Config("config files cannot include other config files".into()));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> CliResult<Option<String>> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            let path = it.next().ok_or_else(|| CliError::Config("--config needs a file".into()))?;
            return Ok(Some(path.to_string_lossy().into_owned()));
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

pub fn merge_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let entries = parse_config(&text)?;
    let pos = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| CliError::Config("no subcommand given".into()))?;
    let mut injected = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => injected.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => injected.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let c = parse_config("# sweep\nrmax = 100\n\nring=z # inline\n").unwrap();
        assert_eq!(c, vec![("rmax".into(), "100".into()), ("ring".into(), "z".into())]);
        assert!(parse_config("rmax 100").is_err());
        assert!(parse_config("--rmax=1").is_err());
        assert!(parse_config("config=x").is_err());
    }

    #[test]
    fn injects_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        std::fs::write(&path, "rmax=5\njson=true\nquiet=false\n").unwrap();
        let args: Vec<OsString> = ["bin", "--config", path.to_str().unwrap(), "gcd-scan", "--rmax", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let merged = merge_config(args).unwrap();
        let merged: Vec<String> = merged.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(&merged[3..], ["gcd-scan", "--rmax=5", "--json", "--rmax", "9"]);
    }
}
