use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critical::{Direction, Tolerances};
use crate::poly::{parse_polynomial, ParseError, Polynomial};
use crate::series::MAX_CELLS;

pub const DEFAULT_ORACLE_N: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Markdown => "md",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub solver: Option<f64>,
    pub torus: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    numerator: String,
    denominator: String,
    vars: Option<Vec<String>>,
    direction: Vec<i64>,
    oracle_n: Option<usize>,
    emit: Option<Vec<Format>>,
    #[serde(default)]
    tolerances: ToleranceOverrides,
    #[serde(default)]
    seeds: Vec<Vec<f64>>,
}

/// A validated analysis job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub numerator: String,
    pub denominator: String,
    pub vars: Vec<String>,
    pub direction: Direction,
    pub oracle_n: usize,
    pub emit: BTreeSet<Format>,
    pub tolerances: ToleranceOverrides,
    /// Extra starting points for the positive-orthant Newton solve.
    pub seeds: Vec<Vec<f64>>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Schema(String),
    #[error("need at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("direction entries must be positive, got {0:?}")]
    NonPositiveDirection(Vec<i64>),
    #[error("direction has {direction} entries for {vars} variables")]
    DirectionLength { vars: usize, direction: usize },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("in `{field}`: {source}")]
    Expression {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("oracle_n must be at least 1")]
    ZeroOracle,
    #[error("oracle box for oracle_n = {oracle_n} has {cells} cells, above the limit of {MAX_CELLS}")]
    OracleTooLarge { oracle_n: usize, cells: u128 },
    #[error("tolerance `tolerances.{0}` must be a positive finite number")]
    BadTolerance(&'static str),
    #[error("seed {0:?} must have one positive entry per variable")]
    BadSeed(Vec<f64>),
}

/// Identifiers in `text`, in order of appearance.
fn identifiers(text: &str) -> Vec<String> {
    let word = |c: &char| c.is_ascii_alphanumeric() || *c == '_';
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_ascii_digit() {
            while chars.next_if(|c| c.is_ascii_digit()).is_some() {}
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut id = ch.to_string();
            while let Some(c) = chars.next_if(word) {
                id.push(c);
            }
            out.push(id);
        }
    }
    out
}

pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Schema(e.to_string().trim_end().to_string()))?;
    let vars = match raw.vars {
        Some(v) => v,
        None => {
            let set: BTreeSet<String> = identifiers(&raw.numerator)
                .into_iter()
                .chain(identifiers(&raw.denominator))
                .collect();
            set.into_iter().collect()
        }
    };
    let mut seen = BTreeSet::new();
    for v in &vars {
        if !seen.insert(v) {
            return Err(ConfigError::DuplicateVariable(v.clone()));
        }
    }
    if raw.direction.iter().any(|&a| a < 1) {
        return Err(ConfigError::NonPositiveDirection(raw.direction));
    }
    if vars.len() < 2 {
        return Err(ConfigError::TooFewVariables(vars.len()));
    }
    if raw.direction.len() != vars.len() {
        return Err(ConfigError::DirectionLength {
            vars: vars.len(),
            direction: raw.direction.len(),
        });
    }
    let direction = Direction::new(raw.direction.iter().map(|&a| a as u64).collect())
        .map_err(|e| ConfigError::Schema(e.to_string()))?;
    let cfg = JobConfig {
        numerator: raw.numerator,
        denominator: raw.denominator,
        vars,
        direction,
        oracle_n: raw.oracle_n.unwrap_or(DEFAULT_ORACLE_N),
        emit: raw
            .emit
            .map(|v| v.into_iter().collect())
            .unwrap_or_else(|| BTreeSet::from([Format::Json])),
        tolerances: raw.tolerances,
        seeds: raw.seeds,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl JobConfig {
    /// Re-checks the invariants; call again after applying CLI overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.polynomials()?;
        if self.oracle_n == 0 {
            return Err(ConfigError::ZeroOracle);
        }
        let cells = self.oracle_cells();
        if cells > MAX_CELLS as u128 {
            return Err(ConfigError::OracleTooLarge {
                oracle_n: self.oracle_n,
                cells,
            });
        }
        let t = &self.tolerances;
        for (name, v) in [("solver", t.solver), ("torus", t.torus), ("residual", t.residual)] {
            if v.is_some_and(|x| !(x.is_finite() && x > 0.0)) {
                return Err(ConfigError::BadTolerance(name));
            }
        }
        for s in &self.seeds {
            if s.len() != self.vars.len() || s.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
                return Err(ConfigError::BadSeed(s.clone()));
            }
        }
        Ok(())
    }

    /// Cells in the box `prod_i [0, oracle_n a_i]`.
    pub fn oracle_cells(&self) -> u128 {
        self.direction
            .as_slice()
            .iter()
            .map(|&a| (self.oracle_n as u128).saturating_mul(a as u128) + 1)
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }

    /// Parsed `(I, J)`.
    pub fn polynomials(&self) -> Result<(Polynomial, Polynomial), ConfigError> {
        let parse = |field, text: &str| {
            parse_polynomial(text, &self.vars).map_err(|source| ConfigError::Expression { field, source })
        };
        Ok((parse("numerator", &self.numerator)?, parse("denominator", &self.denominator)?))
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.tolerances.solver {
            t.solver = v;
        }
        if let Some(v) = self.tolerances.torus {
            t.torus = v;
        }
        if let Some(v) = self.tolerances.residual {
            t.residual = v;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_job_gets_defaults() {
        let cfg = parse_config(
            r#"
            numerator = "1"
            denominator = "1-x-y-x*y"
            direction = [1, 1]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.oracle_n, 40);
        assert_eq!(cfg.emit, BTreeSet::from([Format::Json]));
        assert_eq!(cfg.vars, vec!["x".to_string(), "y".to_string()]);
        assert_eq!(cfg.tolerances(), Tolerances::default());
    }

    #[test]
    fn full_job() {
        let cfg = parse_config(
            r#"
            numerator = "1 + x*y + x^2*y^2"
            denominator = "1 - x - y + x*y - x^2*y^2"
            vars = ["x", "y"]
            direction = [1, 1]
            oracle_n = 80
            emit = ["json", "csv", "markdown"]
            [tolerances]
            residual = 1e-8
            "#,
        )
        .unwrap();
        assert_eq!(cfg.oracle_n, 80);
        assert_eq!(cfg.emit.len(), 3);
        assert_eq!(cfg.tolerances().residual, 1e-8);
        assert_eq!(cfg.tolerances().solver, 1e-10);
    }

    #[test]
    fn inferred_vars_are_sorted() {
        assert_eq!(identifiers("2*x1^3 - (1/2)*b + a1b"), vec!["x1", "b", "a1b"]);
        let cfg = parse_config(
            "numerator = \"z\"\ndenominator = \"1 - y - x - z\"\ndirection = [1, 2, 3]",
        )
        .unwrap();
        assert_eq!(cfg.vars, vec!["x", "y", "z"]);
    }

    #[test]
    fn rejections() {
        let base = |dir: &str| format!("numerator = \"1\"\ndenominator = \"1 - x - y\"\ndirection = {dir}");
        assert_eq!(
            parse_config(&base("[0, 1]")),
            Err(ConfigError::NonPositiveDirection(vec![0, 1]))
        );
        assert!(parse_config(&base("[0, 1]")).unwrap_err().to_string().contains("direction entries must be positive"));
        assert!(matches!(parse_config(&base("[1, 1, 1]")), Err(ConfigError::DirectionLength { .. })));
        assert!(matches!(
            parse_config("numerator = \"1\"\ndenominator = \"1 - x\"\ndirection = [1]"),
            Err(ConfigError::TooFewVariables(1))
        ));
        assert!(matches!(
            parse_config("numerator = \"1\"\ndenominator = \"1 - x - q\"\nvars = [\"x\", \"y\"]\ndirection = [1, 1]"),
            Err(ConfigError::Expression { field: "denominator", .. })
        ));
        assert!(matches!(parse_config("denominator = \"1 - x - y\"\ndirection = [1, 1]"), Err(ConfigError::Schema(_))));
        assert!(matches!(
            parse_config(&format!("{}\ncolour = 3", base("[1, 1]"))),
            Err(ConfigError::Schema(_))
        ));
        assert!(matches!(
            parse_config(&format!("oracle_n = 4000\n{}", base("[1, 1]"))),
            Err(ConfigError::OracleTooLarge { .. })
        ));
        assert!(matches!(
            parse_config(&format!("{}\n[tolerances]\ntorus = -1.0", base("[1, 1]"))),
            Err(ConfigError::BadTolerance("torus"))
        ));
    }
}
