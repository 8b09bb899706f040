use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use lnc_core::duality::ReversedNetwork;
use lnc_core::lnc::CodingAssignment;
use lnc_core::netgraph::NetworkFile;
use lnc_core::{layered_variant1, FieldMatrix, FieldSpec, LayeredNetwork, Network};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Domain(#[from] lnc_core::Error),
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Domain(lnc_core::Error::Json(_)) => 2,
            CliError::Domain(_) | CliError::Rejected(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

/// Writes `text` to `out` through a temporary file in the same directory,
/// or to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source });
    };
    let io = |source| CliError::Io { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    emit(out, &text)
}

pub fn rows(m: &FieldMatrix) -> serde_json::Value {
    serde_json::json!(m.to_rows())
}

/// A network file, layered when it carries a layer map.
pub enum Input {
    Plain(Network),
    Layered(LayeredNetwork),
}

impl Input {
    pub fn network(&self) -> &Network {
        match self {
            Input::Plain(n) => n,
            Input::Layered(l) => l.network(),
        }
    }
}

pub fn load_file(path: &Path, field: Option<&FieldSpec>) -> CliResult<NetworkFile> {
    let mut file: NetworkFile = parse(path)?;
    if let Some(f) = field {
        file.field = f.clone();
    }
    Ok(file)
}

pub fn load(path: &Path, field: Option<&FieldSpec>) -> CliResult<Input> {
    let file = load_file(path, field)?;
    Ok(if file.layers.is_some() {
        Input::Layered(LayeredNetwork::from_file(file)?)
    } else {
        Input::Plain(file.into_network()?.validated()?)
    })
}

/// Coefficients for `net` from an assignment file, or drawn from `seed`.
pub fn coefficients(net: &Network, assignment: Option<&Path>, seed: Option<u64>) -> CliResult<CodingAssignment> {
    match (assignment, seed) {
        (Some(path), _) => Ok(CodingAssignment::from_json(&read(path)?, net)?),
        (None, Some(seed)) => Ok(lnc_core::assign_random(net, seed)),
        (None, None) => Err(CliError::Usage("coefficients need --seed or --assignment".into())),
    }
}

/// The layered Variant-I form of the input with coefficients on it. The
/// assignment always refers to the input network and is carried over.
pub fn layered(
    input: &Input,
    assignment: Option<&Path>,
    seed: Option<u64>,
    convert_first: bool,
) -> CliResult<(LayeredNetwork, CodingAssignment)> {
    if let Input::Layered(l) = input {
        if l.check_variant1().is_ok() {
            return Ok((l.clone(), coefficients(l.network(), assignment, seed)?));
        }
    }
    let net = input.network();
    let asg = coefficients(net, assignment, seed)?;
    let l = layered_variant1(net, convert_first)?;
    let lasg = asg.transport(net, l.network(), l.provenance())?;
    Ok((l, lasg))
}

pub fn destination(net: &Network, selector: Option<&str>) -> CliResult<usize> {
    Ok(net.find_destination(selector.unwrap_or("1"))?)
}

pub fn describe_reversal(rev: &ReversedNetwork) -> String {
    format!(
        "reversed for {}: {} layers, {} taps, {} symbols",
        rev.destination(),
        rev.depth(),
        rev.taps(),
        rev.symbols()
    )
}
