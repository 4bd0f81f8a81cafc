//! Argument decoding shared by the subcommands.

use std::fs;
use std::io::Read;

use folner_core::rational::{self, Q};
use folner_core::{ElementCode, FreeWord, GroupDescriptor};

use crate::Failure;

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn json_arg(arg: &str) -> Result<(String, String), Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok((arg.to_string(), "<inline>".into()));
    }
    read_source(arg).map(|text| (text, arg.to_string()))
}

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

pub fn group(arg: &str) -> Result<GroupDescriptor, Failure> {
    let (text, origin) = json_arg(arg)?;
    GroupDescriptor::from_json(&text).map_err(|e| Failure::usage(format!("{origin}: {e}")))
}

/// A word such as `g0^2*g1^-1`, or `#<code>` for a raw code.
pub fn code(s: &str) -> Result<ElementCode, Failure> {
    let s = s.trim();
    if let Some(raw) = s.strip_prefix('#') {
        return raw.parse().map_err(Failure::from);
    }
    Ok(s.parse::<FreeWord>()?.encode())
}

/// Comma-separated words.
pub fn codes(s: &str) -> Result<Vec<ElementCode>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(code).collect()
}

pub fn rational(s: &str) -> Result<Q, Failure> {
    rational::parse(s).map_err(Failure::from)
}

pub fn u64_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("`{t}` is not a natural number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_raw_codes() {
        assert_eq!(code("#7").unwrap(), ElementCode::from(7));
        assert_eq!(code("1").unwrap(), ElementCode::identity());
        assert_eq!(codes("g0, g0^-1").unwrap().len(), 2);
        assert!(codes("").unwrap().is_empty());
        assert!(code("x1").is_err());
    }

    #[test]
    fn inline_group() {
        assert_eq!(group(r#"{"family":"Z"}"#).unwrap(), GroupDescriptor::Z);
        assert_eq!(group(r#"{"family":"Nope"}"#).unwrap_err().code, 64);
    }
}
