//! Flat `key = value` config files merged into the command line.
//!
//! Keys are flag names without the leading dashes. A file value is used only
//! when the same flag is absent from the command line; a flux given on the
//! command line in either form replaces any flux in the file.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::CliError;

const FLUX_KEYS: [&str; 2] = ["phi", "flux-wb"];

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str, origin: &Path) -> Result<Vec<Entry>, CliError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "{}:{}: expected 'key = value', found '{line}'",
                origin.display(),
                i + 1
            )));
        };
        let key = k.trim().trim_start_matches("--").to_string();
        let value = v.trim().to_string();
        if key.is_empty() {
            return Err(CliError::Config(format!("{}:{}: empty key", origin.display(), i + 1)));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            return Err(CliError::Config(format!(
                "{}:{}: key '{key}' already set on line {}",
                origin.display(),
                i + 1,
                prev.line
            )));
        }
        entries.push(Entry {
            key,
            value,
            line: i + 1,
        });
    }
    Ok(entries)
}

/// Value of `--config` if present.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
        if s == "--" {
            break;
        }
    }
    None
}

/// Flags present on the command line, by long name.
fn given(args: &[OsString]) -> BTreeSet<String> {
    args.iter()
        .filter_map(|a| {
            let s = a.to_string_lossy();
            let name = s.strip_prefix("--")?;
            Some(name.split('=').next().unwrap_or(name).to_string())
        })
        .collect()
}

/// Insert file entries into `args` right after the subcommand path.
pub fn merge(root: &Command, args: Vec<OsString>, entries: &[Entry]) -> Result<Vec<OsString>, CliError> {
    // locate the (possibly nested) subcommand
    let mut cmd = root;
    let mut insert_at = None;
    let mut path = Vec::new();
    for (i, a) in args.iter().enumerate().skip(1) {
        let s = a.to_string_lossy();
        if let Some(sub) = cmd.find_subcommand(s.as_ref()) {
            cmd = sub;
            path.push(sub.get_name().to_string());
            insert_at = Some(i + 1);
        } else if insert_at.is_some() && !s.starts_with('-') && cmd.has_subcommands() {
            break;
        }
    }
    let Some(at) = insert_at else {
        return if entries.is_empty() {
            Ok(args)
        } else {
            Err(CliError::Config("a config file needs a subcommand on the command line".into()))
        };
    };
    let present = given(&args);
    let cli_flux = FLUX_KEYS.iter().any(|k| present.contains(*k));

    let mut extra = Vec::new();
    for e in entries {
        if e.key == "config" {
            return Err(CliError::Config(format!("line {}: config files cannot nest", e.line)));
        }
        let arg = cmd
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()))
            .ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: unknown key '{}' for '{}'",
                    e.line,
                    e.key,
                    path.join(" ")
                ))
            })?;
        if present.contains(&e.key) || (cli_flux && FLUX_KEYS.contains(&e.key.as_str())) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" | "yes" | "1" => extra.push(OsString::from(format!("--{}", e.key))),
                "false" | "no" | "0" => {}
                other => {
                    return Err(CliError::Config(format!(
                        "line {}: '{}' expects true or false, found '{other}'",
                        e.line, e.key
                    )))
                }
            },
            _ => extra.push(OsString::from(format!("--{}={}", e.key, e.value))),
        }
    }
    let mut out = args;
    out.splice(at..at, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_dashes() {
        let e = parse("# defaults\n d = 2e-6\n--phi=0.25\n\n", Path::new("f")).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].key.as_str(), e[0].value.as_str()), ("d", "2e-6"));
        assert_eq!(e[1].key, "phi");
    }

    #[test]
    fn rejects_malformed_and_duplicate() {
        assert!(parse("d 2e-6", Path::new("f")).is_err());
        assert!(parse("d = 1\nd = 2", Path::new("f")).is_err());
        assert!(parse(" = 2", Path::new("f")).is_err());
    }

    #[test]
    fn finds_config_path() {
        let a: Vec<OsString> = ["abshift", "string", "--config", "x.cfg"].iter().map(OsString::from).collect();
        assert_eq!(config_path(&a), Some(OsString::from("x.cfg")));
        let b: Vec<OsString> = ["abshift", "--config=y.cfg", "string"].iter().map(OsString::from).collect();
        assert_eq!(config_path(&b), Some(OsString::from("y.cfg")));
    }
}
