use std::io::Read;
use std::path::{Path, PathBuf};

use hered3_core::io::{self, Format, GraphDocument, ParseError};
use thiserror::Error;

use crate::{FormatArg, InputArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{source_name}: {err}")]
    Parse { source_name: String, err: ParseError },
    #[error("{0}")]
    Invalid(String),
}

pub struct Loaded {
    pub doc: GraphDocument,
    /// Path as given, or `-` for stdin.
    pub source: String,
}

fn read(path: Option<&Path>) -> Result<(String, String), CliError> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => {
            let name = p.display().to_string();
            std::fs::read_to_string(p)
                .map(|t| (t, name.clone()))
                .map_err(|source| CliError::Io { path: name, source })
        }
    }
}

fn read_stdin() -> Result<(String, String), CliError> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).map_err(|source| CliError::Io {
        path: "stdin".into(),
        source,
    })?;
    Ok((text, "-".into()))
}

/// DIMACS if the first meaningful line is a `p` or `c` line, or the file
/// ends in `.col`.
pub fn guess_format(text: &str, path: Option<&PathBuf>) -> Format {
    if path.and_then(|p| p.extension()).is_some_and(|e| e == "col") {
        return Format::DimacsCol;
    }
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.and_then(|l| l.split_whitespace().next()) {
        Some("p") | Some("c") => Format::DimacsCol,
        _ => Format::EdgeList,
    }
}

pub fn format_of(arg: FormatArg) -> Format {
    match arg {
        FormatArg::Dimacs => Format::DimacsCol,
        FormatArg::EdgeList => Format::EdgeList,
    }
}

pub fn load(args: &InputArgs) -> Result<Loaded, CliError> {
    let (text, source) = read(args.input.as_deref())?;
    let format = args.format.map(format_of).unwrap_or_else(|| guess_format(&text, args.input.as_ref()));
    let doc = io::parse(&text, format).map_err(|err| CliError::Parse {
        source_name: source.clone(),
        err,
    })?;
    Ok(Loaded { doc, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guesses() {
        assert_eq!(guess_format("c hi\np edge 1 0\n", None), Format::DimacsCol);
        assert_eq!(guess_format("# note\na b\n", None), Format::EdgeList);
        assert_eq!(guess_format("1 2\n", Some(&PathBuf::from("g.col"))), Format::DimacsCol);
    }
}
