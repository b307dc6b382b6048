//! Merges a flat `key = value` file into the argument list.
//!
//! Keys are long flag names without the dashes (`t_end` and `t-end` both
//! work). A key is injected only when the flag is absent from the command
//! line, so flags take precedence over the file and the file over defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.insert(key, v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<(usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return args.get(i + 1).map(|p| (i, p.clone()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some((i, OsString::from(p)));
        }
    }
    None
}

pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some((cfg_at, path)) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let entries = parse(&text)?;
    let cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let sub_at = args.iter().enumerate().skip(1).position(|(i, a)| {
        i != cfg_at + 1 && names.iter().any(|n| a.to_string_lossy() == n.as_str())
    });
    let Some(sub_at) = sub_at.map(|p| p + 1) else {
        return Ok(args);
    };
    let sub_name = args[sub_at].to_string_lossy().to_string();
    let sub = cmd.find_subcommand(&sub_name).expect("listed subcommand");
    let given: Vec<String> = args[sub_at + 1..]
        .iter()
        .filter_map(|a| a.to_string_lossy().strip_prefix("--").map(|s| s.split('=').next().unwrap().to_string()))
        .collect();
    let mut inject = Vec::new();
    for (key, value) in &entries {
        if key == "config" {
            return Err("config files cannot include other config files".into());
        }
        let arg = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str()));
        match arg {
            Some(a) => {
                if given.iter().any(|g| g == key) {
                    continue;
                }
                if a.get_action().takes_values() {
                    inject.push(OsString::from(format!("--{key}")));
                    inject.push(OsString::from(value));
                } else {
                    match value.to_ascii_lowercase().as_str() {
                        "true" | "1" | "yes" => inject.push(OsString::from(format!("--{key}"))),
                        "false" | "0" | "no" => {}
                        _ => return Err(format!("config key {key}: expected a boolean, got '{value}'")),
                    }
                }
            }
            None => {
                let elsewhere = cmd
                    .get_subcommands()
                    .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
                if !elsewhere {
                    return Err(format!("unknown config key '{key}'"));
                }
            }
        }
    }
    let mut out = args[..=sub_at].to_vec();
    out.extend(inject);
    out.extend_from_slice(&args[sub_at + 1..]);
    Ok(out)
}
