//! Resolving a command's parameters from a JSON file and command-line flags.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::Value;

use css_purify::sweep::FigureId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Purify,
    Amplify,
    Concat,
    Sweep,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Purify => "purify",
            Command::Amplify => "amplify",
            Command::Concat => "concat",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    fn required(&self) -> &'static [&'static str] {
        match self {
            Command::Purify => &["alpha", "phi", "p_in", "T", "k"],
            Command::Amplify => &["alpha", "phi", "p_in"],
            Command::Concat => &["alpha", "p_in"],
            Command::Sweep => &["figure_id"],
            Command::Verify => &[],
        }
    }

    fn optional(&self) -> &'static [&'static str] {
        match self {
            Command::Purify => &["eta", "eta_H", "format"],
            Command::Amplify | Command::Concat => &["format"],
            Command::Sweep => &[
                "alpha",
                "phi",
                "p_in",
                "T",
                "output",
                "reproducible",
                "format",
            ],
            Command::Verify => &["seed", "draws", "format"],
        }
    }
}

/// Every key the configuration file may contain.
pub const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "phi",
    "p_in",
    "T",
    "eta",
    "eta_H",
    "k",
    "figure_id",
    "output",
    "format",
    "reproducible",
    "seed",
    "draws",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

impl Format {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "plain" => Some(Format::Plain),
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSetting {
    Optimal,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    pub alpha: Option<f64>,
    pub phi: Option<f64>,
    pub p_in: Option<f64>,
    pub t: Option<f64>,
    pub eta: Option<f64>,
    pub eta_h: Option<f64>,
    pub k: Option<KSetting>,
    pub figure_id: Option<FigureId>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub reproducible: Option<bool>,
    pub seed: Option<u64>,
    pub draws: Option<usize>,
}

impl Params {
    fn is_set(&self, key: &str) -> bool {
        match key {
            "alpha" => self.alpha.is_some(),
            "phi" => self.phi.is_some(),
            "p_in" => self.p_in.is_some(),
            "T" => self.t.is_some(),
            "eta" => self.eta.is_some(),
            "eta_H" => self.eta_h.is_some(),
            "k" => self.k.is_some(),
            "figure_id" => self.figure_id.is_some(),
            "output" => self.output.is_some(),
            "format" => self.format.is_some(),
            "reproducible" => self.reproducible.is_some(),
            "seed" => self.seed.is_some(),
            "draws" => self.draws.is_some(),
            _ => false,
        }
    }

    /// Values set in `other` win.
    pub fn overridden_by(self, other: Params) -> Params {
        Params {
            alpha: other.alpha.or(self.alpha),
            phi: other.phi.or(self.phi),
            p_in: other.p_in.or(self.p_in),
            t: other.t.or(self.t),
            eta: other.eta.or(self.eta),
            eta_h: other.eta_h.or(self.eta_h),
            k: other.k.or(self.k),
            figure_id: other.figure_id.or(self.figure_id),
            output: other.output.or(self.output),
            format: other.format.or(self.format),
            reproducible: other.reproducible.or(self.reproducible),
            seed: other.seed.or(self.seed),
            draws: other.draws.or(self.draws),
        }
    }
}

/// A parameter validation failure; lists every offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for p in &self.problems {
            write!(f, "\n  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub params: Params,
}

impl CliConfig {
    pub fn format(&self) -> Format {
        self.params.format.unwrap_or_default()
    }
}

/// Parses an angle in radians: a number, or `pi` with an optional sign,
/// multiplier and divisor (`pi`, `-pi`, `pi/2`, `3pi/2`, `2*pi`).
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1.0, r.trim_start()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let pos = rest.find("pi")?;
    let coeff = rest[..pos].trim().trim_end_matches('*').trim();
    let coeff = if coeff.is_empty() {
        1.0
    } else {
        coeff.parse::<f64>().ok()?
    };
    let tail = rest[pos + 2..].trim();
    let divisor = if tail.is_empty() {
        1.0
    } else {
        tail.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    let v = sign * coeff * PI / divisor;
    (v.is_finite() && divisor != 0.0).then_some(v)
}

/// Collects parse problems while filling a [`Params`].
#[derive(Default)]
pub struct ParamBuilder {
    params: Params,
    problems: Vec<String>,
}

impl ParamBuilder {
    pub fn finish(self) -> Result<Params, ConfigError> {
        if self.problems.is_empty() {
            Ok(self.params)
        } else {
            Err(ConfigError {
                problems: self.problems,
            })
        }
    }

    /// Sets `key` from its textual form (flags, or string values in a file).
    pub fn set_text(&mut self, key: &str, raw: &str) {
        let bad = |what: &str| format!("{key}: cannot parse {raw:?} as {what}");
        let number = || raw.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        let result: Result<(), String> = match key {
            "alpha" => number()
                .map(|v| self.params.alpha = Some(v))
                .ok_or_else(|| bad("a number")),
            "p_in" => number()
                .map(|v| self.params.p_in = Some(v))
                .ok_or_else(|| bad("a number")),
            "T" => number()
                .map(|v| self.params.t = Some(v))
                .ok_or_else(|| bad("a number")),
            "eta" => number()
                .map(|v| self.params.eta = Some(v))
                .ok_or_else(|| bad("a number")),
            "eta_H" => number()
                .map(|v| self.params.eta_h = Some(v))
                .ok_or_else(|| bad("a number")),
            "phi" => parse_angle(raw)
                .map(|v| self.params.phi = Some(v))
                .ok_or_else(|| bad("an angle (radians, or 0, pi, pi/2, ...)")),
            "k" => {
                if raw.trim() == "optimal" {
                    self.params.k = Some(KSetting::Optimal);
                    Ok(())
                } else {
                    parse_angle(raw)
                        .map(|v| self.params.k = Some(KSetting::Value(v)))
                        .ok_or_else(|| bad("a number or \"optimal\""))
                }
            }
            "figure_id" => raw
                .parse::<FigureId>()
                .map(|f| self.params.figure_id = Some(f))
                .map_err(|_| {
                    let ids: Vec<_> = FigureId::ALL.iter().map(|f| f.as_str()).collect();
                    format!(
                        "figure_id: unknown figure {raw:?} (expected one of {})",
                        ids.join(", ")
                    )
                }),
            "output" => {
                self.params.output = Some(PathBuf::from(raw));
                Ok(())
            }
            "format" => Format::parse(raw.trim())
                .map(|f| self.params.format = Some(f))
                .ok_or_else(|| bad("one of json, csv, plain")),
            "reproducible" => raw
                .trim()
                .parse::<bool>()
                .map(|b| self.params.reproducible = Some(b))
                .map_err(|_| bad("true or false")),
            "seed" => raw
                .trim()
                .parse::<u64>()
                .map(|v| self.params.seed = Some(v))
                .map_err(|_| bad("a non-negative integer")),
            "draws" => raw
                .trim()
                .parse::<usize>()
                .map(|v| self.params.draws = Some(v))
                .map_err(|_| bad("a non-negative integer")),
            _ => Err(format!("{key}: unknown key")),
        };
        if let Err(p) = result {
            self.problems.push(p);
        }
    }

    fn set_json(&mut self, key: &str, value: &Value) {
        if !KNOWN_KEYS.contains(&key) {
            self.problems.push(format!("{key}: unknown key"));
            return;
        }
        match value {
            Value::String(s) => self.set_text(key, s),
            Value::Number(n) => self.set_text(key, &n.to_string()),
            Value::Bool(b) if key == "reproducible" => self.params.reproducible = Some(*b),
            other => self
                .problems
                .push(format!("{key}: unexpected value {other}")),
        }
    }
}

/// Reads a flat JSON object of parameters.
pub fn params_from_json(text: &str, origin: &Path) -> Result<Params, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError {
        problems: vec![format!("{}: not valid JSON: {e}", origin.display())],
    })?;
    let Value::Object(map) = value else {
        return Err(ConfigError {
            problems: vec![format!(
                "{}: expected a JSON object of parameters",
                origin.display()
            )],
        });
    };
    let mut builder = ParamBuilder::default();
    for (key, value) in &map {
        builder.set_json(key, value);
    }
    builder.finish()
}

pub fn params_from_file(path: &Path) -> Result<Params, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        problems: vec![format!("config: cannot read {}: {e}", path.display())],
    })?;
    params_from_json(&text, path)
}

/// Checks that `params` holds exactly what `command` needs.
pub fn validate(command: Command, params: Params) -> Result<CliConfig, ConfigError> {
    let mut problems = Vec::new();
    for key in command.required() {
        if !params.is_set(key) {
            problems.push(format!("{key}: required by {}", command.name()));
        }
    }
    for key in KNOWN_KEYS {
        if params.is_set(key)
            && !command.required().contains(key)
            && !command.optional().contains(key)
        {
            problems.push(format!("{key}: not used by {}", command.name()));
        }
    }
    if problems.is_empty() {
        Ok(CliConfig { command, params })
    } else {
        Err(ConfigError { problems })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0"), Some(0.0));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_angle("-pi"), Some(-PI));
        assert_eq!(parse_angle("3pi/2"), Some(3.0 * PI / 2.0));
        assert_eq!(parse_angle("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_angle("1.25"), Some(1.25));
        assert_eq!(parse_angle("pie"), None);
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("x"), None);
        assert_eq!(parse_angle("inf"), None);
    }

    #[test]
    fn json_errors_are_collected() {
        let err = params_from_json(
            r#"{"alpha": "big", "colour": 1, "phi": "pi", "k": [1]}"#,
            Path::new("c.json"),
        )
        .unwrap_err();
        assert_eq!(err.problems.len(), 3, "{err}");
        let text = err.to_string();
        assert!(text.contains("alpha") && text.contains("colour") && text.contains("k:"));
    }

    #[test]
    fn json_values_parse() {
        let p = params_from_json(
            r#"{"alpha": 1, "phi": "pi", "p_in": 0.5, "T": 0.5, "k": "optimal", "reproducible": true}"#,
            Path::new("c.json"),
        )
        .unwrap();
        assert_eq!(p.alpha, Some(1.0));
        assert_eq!(p.phi, Some(PI));
        assert_eq!(p.k, Some(KSetting::Optimal));
        assert_eq!(p.reproducible, Some(true));
    }

    #[test]
    fn overrides_take_precedence() {
        let file = Params {
            t: Some(0.5),
            alpha: Some(2.0),
            ..Params::default()
        };
        let flags = Params {
            t: Some(0.25),
            ..Params::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.t, Some(0.25));
        assert_eq!(merged.alpha, Some(2.0));
    }

    #[test]
    fn validation_lists_missing_and_extra() {
        let params = Params {
            phi: Some(0.0),
            figure_id: Some(FigureId::ConcatScan),
            ..Params::default()
        };
        let err = validate(Command::Purify, params).unwrap_err();
        // alpha, p_in, T, k missing; figure_id unused
        assert_eq!(err.problems.len(), 5, "{err}");
        assert!(err
            .problems
            .iter()
            .any(|p| p.starts_with("alpha: required")));
    }
}
