//! Flat `key = value` scenario files with command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use landau_wave::io::Provenance;
use landau_wave::speed::SpeedKind;
use landau_wave::{Complex64, Family, ModeIndex, SpeedProfile};

use crate::diagnostic::Diagnostic;

/// Where a setting came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    File(usize),
    Override(usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => write!(f, "default"),
            Origin::File(line) => write!(f, "line {line}"),
            Origin::Override(i) => write!(f, "override #{i}"),
        }
    }
}

/// Initial data or transform input.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Zero,
    Modes(Vec<(ModeIndex, Complex64)>),
    Gaussian { x0: f64, y0: f64, width: f64 },
}

impl DataSpec {
    pub fn parse(raw: &str) -> Result<Self, String> {
        let raw = raw.trim();
        if raw == "zero" {
            return Ok(DataSpec::Zero);
        }
        let (head, body) = raw
            .split_once(':')
            .ok_or_else(|| format!("expected `zero`, `modes:...` or `gaussian:x0,y0,width`, got `{raw}`"))?;
        match head.trim() {
            "gaussian" => {
                let v = numbers(body)?;
                if v.len() != 3 {
                    return Err(format!("gaussian expects 3 parameter(s), got {}", v.len()));
                }
                if v[2].is_nan() || v[2] <= 0.0 {
                    return Err(format!("gaussian width must be positive, got {}", v[2]));
                }
                Ok(DataSpec::Gaussian {
                    x0: v[0],
                    y0: v[1],
                    width: v[2],
                })
            }
            "modes" => {
                let mut entries = Vec::new();
                for (i, item) in body.split(';').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
                    let parts: Vec<&str> = item.split(',').map(str::trim).collect();
                    if parts.len() != 5 {
                        return Err(format!(
                            "mode entry {} expects family,xi1,xi2,re,im, got `{item}`",
                            i + 1
                        ));
                    }
                    let family = match parts[0] {
                        "F1" | "f1" | "1" => Family::F1,
                        "F2" | "f2" | "2" => Family::F2,
                        other => return Err(format!("mode entry {}: unknown family `{other}`", i + 1)),
                    };
                    let idx = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| format!("mode entry {}: `{s}` is not an index", i + 1))
                    };
                    let num = |s: &str| {
                        s.parse::<f64>()
                            .map_err(|_| format!("mode entry {}: `{s}` is not a number", i + 1))
                    };
                    let index = ModeIndex::new(family, idx(parts[1])?, idx(parts[2])?)
                        .map_err(|e| format!("mode entry {}: {e}", i + 1))?;
                    entries.push((index, Complex64::new(num(parts[3])?, num(parts[4])?)));
                }
                if entries.is_empty() {
                    return Err("modes list is empty".into());
                }
                Ok(DataSpec::Modes(entries))
            }
            other => Err(format!("unknown data kind `{other}`")),
        }
    }
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSpec::Zero => write!(f, "zero"),
            DataSpec::Gaussian { x0, y0, width } => write!(f, "gaussian:{x0:?},{y0:?},{width:?}"),
            DataSpec::Modes(entries) => {
                write!(f, "modes:")?;
                for (i, (m, c)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "F{},{},{},{:?},{:?}", m.family, m.xi1, m.xi2, c.re, c.im)?;
                }
                Ok(())
            }
        }
    }
}

fn numbers(body: &str) -> Result<Vec<f64>, String> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number")))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum OutputTimes {
    Count(usize),
    List(Vec<f64>),
}

/// Fully resolved scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub field: f64,
    pub level_cap: usize,
    pub angular_cap: usize,
    pub profile: SpeedProfile<f64>,
    pub dt: f64,
    pub s: f64,
    pub u0: DataSpec,
    pub u1: DataSpec,
    pub input: Option<DataSpec>,
    pub field_samples: Option<PathBuf>,
    pub output_times: Vec<f64>,
    pub truncations: Vec<usize>,
    pub seed: u64,
    pub points: usize,
    resolved: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "B",
    "level_cap",
    "angular_cap",
    "profile",
    "T",
    "dt",
    "s",
    "u0",
    "u1",
    "field",
    "field_samples",
    "output_times",
    "output_count",
    "truncations",
    "seed",
    "points",
];

/// Raw settings before typing, each with its origin.
#[derive(Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

impl RawConfig {
    pub fn parse_file_text(text: &str) -> Result<Self, Diagnostic> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                Diagnostic::config(
                    None,
                    Origin::File(line_no),
                    format!("expected `key = value`, got `{content}`"),
                )
            })?;
            let key = key.trim();
            check_key(key, &Origin::File(line_no))?;
            if let Some((_, Origin::File(first))) = raw.entries.get(key) {
                return Err(Diagnostic::config(
                    Some(key),
                    Origin::File(line_no),
                    format!("duplicate key, first set on line {first}"),
                ));
            }
            raw.entries
                .insert(key.to_string(), (value.trim().to_string(), Origin::File(line_no)));
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, Diagnostic> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Diagnostic::io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }

    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), Diagnostic> {
        for (i, item) in overrides.iter().enumerate() {
            let origin = Origin::Override(i + 1);
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Diagnostic::config(None, origin.clone(), format!("expected `key=value`, got `{item}`"))
            })?;
            let key = key.trim();
            check_key(key, &origin)?;
            self.entries.insert(key.to_string(), (value.trim().to_string(), origin));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<(&str, Origin)> {
        self.entries.get(key).map(|(v, o)| (v.as_str(), o.clone()))
    }
}

fn check_key(key: &str, origin: &Origin) -> Result<(), Diagnostic> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Diagnostic::config(
            Some(key),
            origin.clone(),
            format!("unknown key; expected one of {}", KEYS.join(", ")),
        ))
    }
}

struct Resolver<'a> {
    raw: &'a RawConfig,
    resolved: BTreeMap<String, String>,
}

impl Resolver<'_> {
    fn value<V>(
        &mut self,
        key: &str,
        default: Option<&str>,
        parse: impl Fn(&str) -> Result<V, String>,
    ) -> Result<Option<(V, Origin)>, Diagnostic> {
        let (text, origin) = match self.raw.get(key) {
            Some(v) => v,
            None => match default {
                Some(d) => (d, Origin::Default),
                None => return Ok(None),
            },
        };
        let v = parse(text).map_err(|msg| Diagnostic::config(Some(key), origin.clone(), msg))?;
        self.resolved.insert(key.to_string(), text.to_string());
        Ok(Some((v, origin)))
    }

    fn required<V>(
        &mut self,
        key: &str,
        default: &str,
        parse: impl Fn(&str) -> Result<V, String>,
    ) -> Result<(V, Origin), Diagnostic> {
        Ok(self.value(key, Some(default), parse)?.expect("defaulted key"))
    }
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn finite_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got {s}"))
    }
}

fn count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn count_list(s: &str) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = s.split(',').map(count).collect::<Result<_, _>>()?;
    if v.is_empty() || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err("expects a strictly increasing list of level caps".into());
    }
    Ok(v)
}

impl ScenarioConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self, Diagnostic> {
        let mut r = Resolver {
            raw,
            resolved: BTreeMap::new(),
        };
        let (field, _) = r.required("B", "1.0", positive_real)?;
        let (level_cap, _) = r.required("level_cap", "4", count)?;
        let default_k = level_cap.to_string();
        let (angular_cap, _) = r.required("angular_cap", &default_k, count)?;
        let (horizon, _) = r.required("T", "1.0", positive_real)?;
        let (dt, _) = r.required("dt", "0.001", positive_real)?;
        let (s, _) = r.required("s", "0", finite_real)?;
        let (kind, profile_origin) = r.required("profile", "const:1.0", |v| {
            SpeedKind::<f64>::parse(v).map_err(|e| e.to_string())
        })?;
        let profile = SpeedProfile::new(kind, horizon)
            .map_err(|e| Diagnostic::config(Some("profile"), profile_origin, e.to_string()))?;
        let (u0, _) = r.required("u0", "zero", DataSpec::parse)?;
        let (u1, _) = r.required("u1", "zero", DataSpec::parse)?;
        let input = r.value("field", None, DataSpec::parse)?.map(|v| v.0);
        let field_samples = r.value("field_samples", None, |v| Ok(PathBuf::from(v)))?.map(|v| v.0);
        let (truncations, _) = r.required("truncations", "4,8,16", count_list)?;
        let (seed, _) = r.required("seed", "1", |v| {
            v.trim().parse::<u64>().map_err(|_| format!("`{v}` is not a seed"))
        })?;
        let (points, _) = r.required("points", "200", count)?;

        let times = match (raw.get("output_times"), raw.get("output_count")) {
            (Some(_), Some((_, origin))) => {
                return Err(Diagnostic::config(
                    Some("output_count"),
                    origin,
                    "set either output_times or output_count, not both".into(),
                ))
            }
            (Some(_), None) => {
                let (list, origin) = r
                    .value("output_times", None, |v| {
                        v.split(',').map(finite_real).collect::<Result<Vec<_>, _>>()
                    })?
                    .expect("present key");
                OutputTimes::List(list)
                    .resolve(horizon)
                    .map_err(|m| Diagnostic::config(Some("output_times"), origin, m))?
            }
            _ => {
                let (n, origin) = r.required("output_count", "10", count)?;
                OutputTimes::Count(n)
                    .resolve(horizon)
                    .map_err(|m| Diagnostic::config(Some("output_count"), origin, m))?
            }
        };

        Ok(Self {
            field,
            level_cap,
            angular_cap,
            profile,
            dt,
            s,
            u0,
            u1,
            input,
            field_samples,
            output_times: times,
            truncations,
            seed,
            points,
            resolved: r.resolved,
        })
    }

    /// Resolved settings plus run metadata, embedded in every output.
    pub fn provenance(&self, extra: &[(&str, String)]) -> Provenance {
        let mut p: Provenance = self.resolved.clone();
        for (k, v) in extra {
            p.insert((*k).to_string(), v.clone());
        }
        p
    }
}

impl OutputTimes {
    fn resolve(self, horizon: f64) -> Result<Vec<f64>, String> {
        match self {
            OutputTimes::Count(0) => Err("output_count must be at least 1".into()),
            OutputTimes::Count(n) => Ok((0..=n)
                .map(|i| if i == n { horizon } else { horizon * i as f64 / n as f64 })
                .collect()),
            OutputTimes::List(list) => {
                if list.windows(2).any(|w| w[1] < w[0]) {
                    return Err("output times must be sorted".into());
                }
                if let Some(t) = list.iter().find(|&&t| !(0.0..=horizon).contains(&t)) {
                    return Err(format!("output time {t} outside [0, {horizon}]"));
                }
                Ok(list)
            }
        }
    }
}
