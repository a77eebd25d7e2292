//! Command-line front end: grid scans, simulated runs, fuzzing and bound
//! tournaments. Everything here returns values or strings; `main.rs` only
//! parses arguments and writes files.

mod csv;
mod fuzz;
mod scan;
mod tournament;

use std::fmt;
use std::path::Path;

use num_complex::Complex;

use crate::error::Error;
use crate::spinhalf::pauli_triple;
use crate::{HermitianMatrix, Observable, SquareMatrix};

pub use csv::{format_float, Column};
pub use fuzz::{fuzz, CheckSummary, FuzzConfig, FuzzReport};
pub use fuzz::{CHAIN_SLACK, VALIDITY_SLACK};
pub use scan::{plot_script, scan, simulate, ScanConfig, ScanRow, ScanTable};
pub use tournament::{
    competitors, tournament, winners, KindResult, Standing, StateSpec, TournamentConfig, TournamentSummary,
    TIE_TOLERANCE,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Errors surfaced to the command line, each with its exit status.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
}

impl CliError {
    /// 1 for configuration errors, 3 for I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Which variances the plot script draws. The CSV always has every column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Product,
    Sum,
    Both,
}

impl Mode {
    pub fn parse(s: &str) -> CliResult<Mode> {
        match s {
            "product" => Ok(Mode::Product),
            "sum" => Ok(Mode::Sum),
            "both" => Ok(Mode::Both),
            other => config_err(format!("unknown mode '{other}' (product|sum|both)")),
        }
    }

    pub fn includes_product(self) -> bool {
        matches!(self, Mode::Product | Mode::Both)
    }

    pub fn includes_sum(self) -> bool {
        matches!(self, Mode::Sum | Mode::Both)
    }
}

/// The observables a command runs on.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub name: String,
    pub observables: Vec<Observable>,
}

impl ObservableSet {
    pub fn pauli3() -> Self {
        ObservableSet { name: "pauli3".into(), observables: pauli_triple() }
    }

    /// `pauli3` or `file:<path>`.
    pub fn parse(spec: &str) -> CliResult<Self> {
        if spec == "pauli3" {
            return Ok(Self::pauli3());
        }
        match spec.strip_prefix("file:") {
            Some(path) => Self::from_file(Path::new(path)),
            None => config_err(format!("unknown observable set '{spec}' (pauli3 | file:<path>)")),
        }
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut set = Self::from_json(&text)?;
        set.name = format!("file:{}", path.display());
        Ok(set)
    }

    /// JSON array of matrices, each a row-major `dim×dim` array of `[re, im]`.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let raw: Vec<Vec<Vec<[f64; 2]>>> =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("observable file: {e}")))?;
        if raw.len() < 2 {
            return config_err("observable file must list at least two matrices");
        }
        let mut observables = Vec::with_capacity(raw.len());
        for (k, rows) in raw.into_iter().enumerate() {
            let rows = rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex::new(re, im)).collect()).collect();
            let m = SquareMatrix::from_rows(rows)
                .and_then(HermitianMatrix::new)
                .map_err(|e| CliError::Config(format!("matrix {k}: {e}")))?;
            observables.push(Observable::new(m)?);
        }
        let dim = observables[0].dim();
        if let Some(o) = observables.iter().find(|o| o.dim() != dim) {
            return config_err(format!("matrices have different dimensions ({dim} and {})", o.dim()));
        }
        Ok(ObservableSet { name: "custom".into(), observables })
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn refs(&self) -> Vec<&Observable> {
        self.observables.iter().collect()
    }
}

/// Evenly spaced angles `start..=end` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, count: usize) -> CliResult<Self> {
        if count == 0 {
            return config_err("grid count must be at least 1");
        }
        if !start.is_finite() || !end.is_finite() {
            return config_err("grid bounds must be finite");
        }
        Ok(Grid { start, end, count })
    }

    pub fn fixed(value: f64) -> Self {
        Grid { start: value, end: value, count: 1 }
    }

    /// `START:END:COUNT` or a single angle; angles accept `pi` forms such as
    /// `pi/4`, `2pi/3`, `2*pi`.
    pub fn parse(spec: &str) -> CliResult<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [single] => Ok(Grid::fixed(parse_angle(single)?)),
            [a, b, n] => {
                let count = n.trim().parse().map_err(|_| CliError::Config(format!("bad grid count '{n}'")))?;
                Grid::new(parse_angle(a)?, parse_angle(b)?, count)
            }
            _ => config_err(format!("bad grid '{spec}' (START:END:COUNT)")),
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.start
        } else if i + 1 == self.count {
            self.end
        } else {
            self.start + (self.end - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

pub fn parse_angle(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let bad = || CliError::Config(format!("bad angle '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * std::f64::consts::PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(value / den)
}

/// Comma-separated integers.
pub fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| CliError::Config(format!("bad list entry '{x}'")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn grids() {
        let g = Grid::parse("0:pi:13").unwrap();
        assert_eq!(g.count, 13);
        assert_eq!(g.value(0), 0.0);
        assert_eq!(g.value(12), PI);
        assert!((g.value(3) - PI / 4.0).abs() < 1e-15);
        assert_eq!(Grid::parse("pi/4").unwrap(), Grid::fixed(PI / 4.0));
        assert!(Grid::parse("0:pi:0").is_err());
        assert!(Grid::parse("0:pi").is_err());
        assert_eq!(parse_list("2, 3,4").unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn observable_file() {
        let json = "[[[[0,0],[1,0]],[[1,0],[0,0]]], [[[1,0],[0,0]],[[0,0],[-1,0]]]]";
        let set = ObservableSet::from_json(json).unwrap();
        assert_eq!(set.observables.len(), 2);
        assert_eq!(set.dim(), 2);
        let not_hermitian = "[[[[0,0],[1,0]],[[2,0],[0,0]]], [[[1,0],[0,0]],[[0,0],[-1,0]]]]";
        assert!(matches!(ObservableSet::from_json(not_hermitian), Err(CliError::Config(_))));
        let mixed = "[[[[0,0],[1,0]],[[1,0],[0,0]]], [[[1,0]]]]";
        assert!(ObservableSet::from_json(mixed).is_err());
        assert!(ObservableSet::from_json("[[[[1,0]]]]").is_err());
        assert!(ObservableSet::from_json("nope").is_err());
        assert!(matches!(ObservableSet::parse("file:/definitely/missing.json"), Err(CliError::Io(_))));
        assert!(ObservableSet::parse("pauli4").is_err());
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
    }

    #[test]
    fn modes() {
        assert_eq!(Mode::parse("both").unwrap(), Mode::Both);
        assert!(Mode::parse("all").is_err());
        assert!(Mode::Product.includes_product() && !Mode::Product.includes_sum());
    }
}
