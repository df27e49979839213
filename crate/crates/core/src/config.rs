//! Flat `key = value` experiment files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys may appear once. Recognized keys:
//!
//! | key                | value                                              |
//! |--------------------|----------------------------------------------------|
//! | `family`           | bessel, coulomb, airy, weber, legendre, hermite, laguerre, spherical, gaussian, cauchy, sinc |
//! | `nu`, `l`, `alpha` | family parameter (bessel, coulomb, laguerre)       |
//! | `test_function`    | catalog id                                         |
//! | `anchor`           | anchor point (all families but spherical)          |
//! | `theta`, `phi`     | anchor angles (spherical)                          |
//! | `cutoffs`          | comma-separated, strictly increasing               |
//! | `abs_tol`, `rel_tol`, `max_subdivisions` | quadrature overrides         |
//! | `output`           | json (default) or csv                              |
//! | `seed`             | unsigned integer, default 0                        |
//! | `timing`           | true (default) or false; false reports zero times  |

use std::collections::HashMap;
use std::str::FromStr;

use thiserror::Error;

use crate::harness::{lookup, lookup_spherical};
use crate::kernels::Family;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: invalid value for '{key}': {message}")]
    Value { line: usize, key: String, message: String },
    #[error("missing key '{0}'")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigAnchor {
    Point(f64),
    Angles { theta: f64, phi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub test_function: String,
    pub anchor: ConfigAnchor,
    pub cutoffs: Vec<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub output: OutputFormat,
    pub seed: u64,
    pub timing: bool,
}

const KEYS: [&str; 15] = [
    "family",
    "nu",
    "l",
    "alpha",
    "test_function",
    "anchor",
    "theta",
    "phi",
    "cutoffs",
    "abs_tol",
    "rel_tol",
    "max_subdivisions",
    "output",
    "seed",
    "timing",
];

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn raw(&self, key: &'static str) -> Option<(usize, &'a str)> {
        self.map.get(key).copied()
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|(line, v)| {
                v.parse::<T>().map_err(|e| ConfigError::Value {
                    line,
                    key: key.into(),
                    message: e.to_string(),
                })
            })
            .transpose()
    }

    fn finite(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        match (self.get::<f64>(key)?, self.raw(key)) {
            (Some(v), Some((line, _))) if !v.is_finite() => Err(ConfigError::Value {
                line,
                key: key.into(),
                message: "must be finite".into(),
            }),
            (v, _) => Ok(v),
        }
    }

    fn positive(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        match (self.finite(key)?, self.raw(key)) {
            (Some(v), Some((line, _))) if v <= 0.0 => Err(ConfigError::Value {
                line,
                key: key.into(),
                message: "must be positive".into(),
            }),
            (v, _) => Ok(v),
        }
    }
}

/// Splits the text into key/value pairs, rejecting malformed lines, unknown
/// keys and repeats.
fn tokenize(text: &str) -> Result<Entries<'_>, ConfigError> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(ConfigError::Syntax { line, message: format!("expected 'key = value', got '{body}'") });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::Syntax { line, message: "empty key".into() });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax { line, message: format!("empty value for '{key}'") });
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.into() });
        }
        if map.insert(key, (line, value)).is_some() {
            return Err(ConfigError::Duplicate { line, key: key.into() });
        }
    }
    Ok(Entries { map })
}

/// Parses and validates an experiment file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let e = tokenize(text)?;
    let (_, name) = e.raw("family").ok_or(ConfigError::Missing("family"))?;
    let family = Family::parse(name, e.finite("nu")?, e.get::<u32>("l")?, e.finite("alpha")?)
        .map_err(|err| ConfigError::Invalid(err.to_string()))?;

    let (_, tf) = e.raw("test_function").ok_or(ConfigError::Missing("test_function"))?;
    let known = if family == Family::SphericalSeries {
        lookup_spherical(tf).is_some()
    } else {
        lookup(tf).is_some()
    };
    if !known {
        return Err(ConfigError::Invalid(format!("unknown test function '{tf}' for {}", family.name())));
    }

    let anchor = if family == Family::SphericalSeries {
        if e.raw("anchor").is_some() {
            return Err(ConfigError::Invalid("spherical experiments take theta and phi, not anchor".into()));
        }
        ConfigAnchor::Angles {
            theta: e.finite("theta")?.ok_or(ConfigError::Missing("theta"))?,
            phi: e.finite("phi")?.ok_or(ConfigError::Missing("phi"))?,
        }
    } else {
        if e.raw("theta").is_some() || e.raw("phi").is_some() {
            return Err(ConfigError::Invalid(format!("{} takes anchor, not theta/phi", family.name())));
        }
        ConfigAnchor::Point(e.finite("anchor")?.ok_or(ConfigError::Missing("anchor"))?)
    };

    let (line, list) = e.raw("cutoffs").ok_or(ConfigError::Missing("cutoffs"))?;
    let cutoffs = parse_cutoffs(list, family.is_series()).map_err(|message| ConfigError::Value {
        line,
        key: "cutoffs".into(),
        message,
    })?;

    let output = match e.raw("output") {
        None | Some((_, "json")) => OutputFormat::Json,
        Some((_, "csv")) => OutputFormat::Csv,
        Some((line, v)) => {
            return Err(ConfigError::Value { line, key: "output".into(), message: format!("expected json or csv, got '{v}'") })
        }
    };

    Ok(ExperimentConfig {
        family,
        test_function: tf.to_string(),
        anchor,
        cutoffs,
        abs_tol: e.positive("abs_tol")?,
        rel_tol: e.positive("rel_tol")?,
        max_subdivisions: e.get::<usize>("max_subdivisions")?,
        output,
        seed: e.get::<u64>("seed")?.unwrap_or(0),
        timing: e.get::<bool>("timing")?.unwrap_or(true),
    })
}

fn parse_cutoffs(list: &str, integer: bool) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim) {
        if item.is_empty() {
            continue;
        }
        let v = if integer {
            item.parse::<usize>().map_err(|e| format!("'{item}': {e}"))? as f64
        } else {
            let v = item.parse::<f64>().map_err(|e| format!("'{item}': {e}"))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("'{item}' is not a positive number"));
            }
            v
        };
        if out.last().is_some_and(|p| v <= *p) {
            return Err("cutoffs must increase strictly".into());
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err("no cutoffs given".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BESSEL: &str = "\
# Bessel experiment
family = bessel
nu = 0
test_function = exp_decay
anchor = 1
cutoffs = 25, 50, 100, 200
output = csv
";

    #[test]
    fn parses_example() {
        let c = parse_config(BESSEL).unwrap();
        assert_eq!(c.family, Family::BesselHankel { nu: 0.0 });
        assert_eq!(c.cutoffs, vec![25.0, 50.0, 100.0, 200.0]);
        assert_eq!(c.output, OutputFormat::Csv);
        assert_eq!(c.anchor, ConfigAnchor::Point(1.0));
        assert!(c.timing);
    }

    #[test]
    fn spherical_anchor() {
        let c = parse_config("family=spherical\ntest_function=sph_exp_x\ntheta=0.7\nphi=0.3\ncutoffs=4,8").unwrap();
        assert_eq!(c.anchor, ConfigAnchor::Angles { theta: 0.7, phi: 0.3 });
        assert!(parse_config("family=spherical\ntest_function=sph_exp_x\nanchor=1\ncutoffs=4").is_err());
    }

    #[test]
    fn rejections() {
        let cases = [
            ("family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = ", "empty value"),
            ("family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = ,", "no cutoffs"),
            ("family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = 50, 25", "increase"),
            ("family = bessel\ntest_function = exp_decay\nanchor = 1\ncutoffs = 5", "needs parameter nu"),
            ("family = airy\nnu = 1\ntest_function = gauss\nanchor = 1\ncutoffs = 5", "does not apply"),
            ("family = bessel\nnu = 0\ntest_function = nope\nanchor = 1\ncutoffs = 5", "unknown test function"),
            ("family = bessel\nfamily = airy", "duplicate"),
            ("colour = red", "unknown key"),
            ("just words", "expected"),
            ("family = legendre\ntest_function = sign\nanchor = 0\ncutoffs = 2.5", "cutoffs"),
            ("family = bessel\nnu = nan\ntest_function = exp_decay\nanchor = 1\ncutoffs = 5", "finite"),
        ];
        for (text, needle) in cases {
            let err = parse_config(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "  family=weber   # trailing\n\n\ttest_function = narrow_gauss\nanchor=0\ncutoffs=10,20,40\ntiming=false\nseed=7";
        let c = parse_config(text).unwrap();
        assert_eq!(c.family, Family::Weber);
        assert!(!c.timing);
        assert_eq!(c.seed, 7);
    }
}
