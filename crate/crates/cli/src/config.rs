//! `key = value` run files spliced into the argument list.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::error::{CliError, CliResult};

const GLOBAL_VALUED: [&str; 3] = ["--config", "--outdir", "--scenario"];

pub fn parse_file(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::usage(format!("config line {}: empty key", n + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if GLOBAL_VALUED.contains(&s.as_ref()) {
            i += 2;
        } else if s.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

fn knows(cmd: &Command, key: &str) -> Option<bool> {
    cmd.get_arguments()
        .find(|a| a.get_long() == Some(key))
        .map(|a| matches!(a.get_action(), ArgAction::SetTrue | ArgAction::SetFalse))
}

/// Inserts the config entries right after the subcommand token, so that
/// later flags typed by the user override them.
pub fn splice(cmd: &Command, args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let entries = parse_file(&text)?;
    let Some(at) = subcommand_index(&args) else { return Ok(args) };
    let name = args[at].to_string_lossy().into_owned();
    let Some(sub) = cmd.find_subcommand(&name) else { return Ok(args) };

    let mut injected = Vec::new();
    for (key, value) in entries {
        if key == "scenario" || key == "outdir" {
            injected.push(OsString::from(format!("--{key}")));
            injected.push(OsString::from(value));
            continue;
        }
        match knows(sub, &key) {
            Some(true) => {
                if value
                    .parse::<bool>()
                    .map_err(|_| CliError::usage(format!("config key {key}: expected true or false")))?
                {
                    injected.push(OsString::from(format!("--{key}")));
                }
            }
            Some(false) => {
                injected.push(OsString::from(format!("--{key}")));
                injected.push(OsString::from(value));
            }
            None if cmd.get_subcommands().any(|c| knows(c, &key).is_some()) => {}
            None => return Err(CliError::usage(format!("unknown config key `{key}`"))),
        }
    }
    let mut out = args[..=at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let e = parse_file("# run\nn_meas = 200  # rule of thumb\n\nprofile=tanh\n").unwrap();
        assert_eq!(e, vec![("n-meas".into(), "200".into()), ("profile".into(), "tanh".into())]);
        assert!(parse_file("nonsense").is_err());
    }

    #[test]
    fn finds_the_subcommand_after_globals() {
        let args: Vec<OsString> =
            ["probe", "--outdir", "x", "--config", "c", "bound", "--t", "1"].iter().map(OsString::from).collect();
        assert_eq!(subcommand_index(&args), Some(5));
        assert_eq!(config_path(&args), Some(OsString::from("c")));
    }
}
