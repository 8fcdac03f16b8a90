//! Scenario files.
//!
//! A scenario is a flat `key = value` document. Keys are dotted, values are
//! SI numbers (scientific notation accepted), words, or comma-separated
//! lists. `#` starts a comment. Every key except the required ones has a
//! default; the full list is in [`KEYS`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;

use slitwave::diffraction::QuadratureSettings;
use slitwave::model::{ApertureSpec, BeamParams, Grid1D, SlitKind, Snapshot};
use slitwave::phase_space::wigner_k_limit;
use slitwave::spectral::check_nyquist;

use crate::error::ConfigError;

/// Every key a scenario may set, with its default (`None` when required
/// or optional without a default).
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("scenario.name", Some("scenario")),
    ("scenario.note", None),
    ("scenario.reconstructed", None),
    ("aperture.kind", None),
    ("aperture.delta", None),
    ("aperture.Delta", None),
    ("aperture.Delta_plus_delta", None),
    ("beam.k", None),
    ("beam.m", None),
    ("beam.hbar", Some("1.054571817e-34")),
    ("snapshots.y", None),
    ("snapshots.t", None),
    ("grid.x.lo", Some("-64e-6")),
    ("grid.x.hi", Some("64e-6")),
    ("grid.x.n", Some("8192")),
    ("grid.k.lo", Some("-2e7")),
    ("grid.k.hi", Some("2e7")),
    ("grid.k.n", Some("4097")),
    ("map.x.lo", Some("-64e-6")),
    ("map.x.hi", Some("64e-6")),
    ("map.x.n", Some("512")),
    ("map.k.lo", Some("-2e7")),
    ("map.k.hi", Some("2e7")),
    ("map.k.n", Some("513")),
    ("quadrature.oversample", Some("16")),
    ("quadrature.min_nodes", Some("64")),
    ("outputs", Some("")),
    ("output.dir", Some("out")),
    ("output.precision", Some("9")),
    ("output.delimiter", Some(",")),
];

/// Artifacts a run can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    Intensity,
    Spectrum,
    Fraunhofer,
    DeBroglie,
    Wigner,
    Reports,
}

impl Output {
    pub const ALL: [Output; 6] =
        [Output::Intensity, Output::Spectrum, Output::Fraunhofer, Output::DeBroglie, Output::Wigner, Output::Reports];

    pub fn name(self) -> &'static str {
        match self {
            Output::Intensity => "intensity",
            Output::Spectrum => "spectrum",
            Output::Fraunhofer => "fraunhofer",
            Output::DeBroglie => "debroglie",
            Output::Wigner => "wigner",
            Output::Reports => "reports",
        }
    }

    pub fn parse(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == word)
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a snapshot was requested: a distance or a flight time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnapshotRequest {
    Distance(f64),
    Time(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSpec {
    /// File-name label, e.g. `y0.12` or `t6.01e-5`.
    pub label: String,
    pub request: SnapshotRequest,
}

impl SnapshotSpec {
    pub fn resolve(&self, beam: &BeamParams) -> slitwave::Result<Snapshot> {
        match self.request {
            SnapshotRequest::Distance(y) => Snapshot::at_distance(y, beam.velocity()),
            SnapshotRequest::Time(t) => Snapshot::at_time(t, beam.velocity()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvFormat {
    /// Significant digits per value.
    pub precision: usize,
    pub delimiter: char,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self { precision: 9, delimiter: ',' }
    }
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub note: Option<String>,
    /// Keys whose values are reconstructed rather than taken from published values.
    pub reconstructed: Vec<String>,
    pub kinds: Vec<SlitKind>,
    pub delta: f64,
    pub gap: f64,
    pub beam: BeamParams,
    pub snapshots: Vec<SnapshotSpec>,
    pub xgrid: Grid1D,
    pub kgrid: Grid1D,
    pub map_x: Grid1D,
    pub map_k: Grid1D,
    pub quadrature: QuadratureSettings,
    pub outputs: BTreeSet<Output>,
    pub output_dir: PathBuf,
    pub format: CsvFormat,
    values: BTreeMap<String, String>,
}

impl ScenarioConfig {
    pub fn aperture(&self, kind: SlitKind) -> ApertureSpec {
        ApertureSpec::new(kind, self.delta, self.gap).expect("validated at load")
    }

    /// Every key with the value in effect, defaults included.
    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    /// The same scenario emitting `outputs` instead.
    pub fn with_outputs(mut self, outputs: BTreeSet<Output>) -> Result<Self, ConfigError> {
        check_map_grids(&outputs, &self.xgrid, &self.map_x, &self.map_k)
            .map_err(|(key, m)| ConfigError::key(key, &m))?;
        let names: Vec<&str> = outputs.iter().map(|o| o.name()).collect();
        self.values.insert("outputs".into(), names.join(", "));
        self.outputs = outputs;
        Ok(self)
    }

    /// The same scenario writing into `dir`.
    pub fn with_output_dir(mut self, dir: PathBuf) -> Self {
        self.values.insert("output.dir".into(), dir.display().to_string());
        self.output_dir = dir;
        self
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Document {
    entries: BTreeMap<String, Entry>,
}

impl Document {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::at(line, content, "expected `key = value`"));
            };
            let key = key.trim();
            if !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(ConfigError::at(line, key, "unknown key"));
            }
            let entry = Entry { line, value: value.trim().to_string() };
            if let Some(prev) = entries.insert(key.to_string(), entry) {
                return Err(ConfigError::at(line, key, &format!("already set on line {}", prev.line)));
            }
        }
        Ok(Self { entries })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn error(&self, key: &str, message: &str) -> ConfigError {
        match self.line(key) {
            Some(line) => ConfigError::at(line, key, message),
            None => ConfigError::key(key, message),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries
            .get(key)
            .map(|e| e.value.as_str())
            .or_else(|| KEYS.iter().find(|(k, _)| *k == key).and_then(|(_, d)| *d))
    }

    fn required(&self, key: &str) -> Result<&str, ConfigError> {
        self.raw(key).ok_or_else(|| ConfigError::key(key, "missing required key"))
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => parse_number(text).map(Some).map_err(|m| self.error(key, &m)),
        }
    }

    fn required_number(&self, key: &str) -> Result<f64, ConfigError> {
        self.required(key)?;
        Ok(self.number(key)?.expect("present"))
    }

    fn count(&self, key: &str) -> Result<usize, ConfigError> {
        let text = self.required(key)?;
        text.parse::<usize>().map_err(|_| self.error(key, &format!("expected a whole number, got `{text}`")))
    }

    fn list(&self, key: &str) -> Vec<String> {
        self.raw(key)
            .map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default()
    }

    fn grid(&self, prefix: &str) -> Result<Grid1D, ConfigError> {
        let lo = self.required_number(&format!("{prefix}.lo"))?;
        let hi = self.required_number(&format!("{prefix}.hi"))?;
        let n = self.count(&format!("{prefix}.n"))?;
        Grid1D::new(lo, hi, n).map_err(|e| self.error(&format!("{prefix}.n"), &e.to_string()))
    }
}

fn parse_number(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got `{text}`")),
    }
}

fn parse_kind(word: &str) -> Option<SlitKind> {
    match word {
        "single" | "single_lower" => Some(SlitKind::SingleLower),
        "single_upper" => Some(SlitKind::SingleUpper),
        "double" => Some(SlitKind::Double),
        _ => None,
    }
}

fn parse_delimiter(word: &str) -> Option<char> {
    match word {
        "comma" | "," => Some(','),
        "semicolon" | ";" => Some(';'),
        "tab" => Some('\t'),
        "space" => Some(' '),
        _ => None,
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc = Document::parse(text)?;

    let kinds = doc
        .list("aperture.kind")
        .iter()
        .map(|w| parse_kind(w).ok_or_else(|| doc.error("aperture.kind", &format!("unknown slit kind `{w}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        return Err(doc.error("aperture.kind", "missing required key"));
    }

    let delta = doc.required_number("aperture.delta")?;
    let gap = match (doc.number("aperture.Delta")?, doc.number("aperture.Delta_plus_delta")?) {
        (Some(gap), Some(sep)) => {
            if (gap + delta - sep).abs() > 1e-9 * sep.abs() {
                return Err(doc.error(
                    "aperture.Delta_plus_delta",
                    &format!("inconsistent with aperture.Delta + aperture.delta = {:e}", gap + delta),
                ));
            }
            gap
        }
        (Some(gap), None) => gap,
        (None, Some(sep)) => sep - delta,
        (None, None) => {
            return Err(ConfigError::key("aperture.Delta", "missing required key (or aperture.Delta_plus_delta)"))
        }
    };
    for kind in &kinds {
        ApertureSpec::new(*kind, delta, gap).map_err(|e| doc.error("aperture.delta", &e.to_string()))?;
    }

    let k = doc.required_number("beam.k")?;
    let m = doc.required_number("beam.m")?;
    let hbar = doc.required_number("beam.hbar")?;
    let beam = BeamParams::with_hbar(k, m, hbar).map_err(|e| doc.error("beam.k", &e.to_string()))?;

    let mut snapshots = Vec::new();
    for (key, prefix) in [("snapshots.y", "y"), ("snapshots.t", "t")] {
        for token in doc.list(key) {
            let v = parse_number(&token).map_err(|m| doc.error(key, &m))?;
            let request = if prefix == "y" {
                if v <= 0.0 {
                    return Err(doc.error(key, &format!("distances must be positive, got {token}")));
                }
                SnapshotRequest::Distance(v)
            } else {
                if v < 0.0 {
                    return Err(doc.error(key, &format!("times must not be negative, got {token}")));
                }
                SnapshotRequest::Time(v)
            };
            snapshots.push(SnapshotSpec { label: format!("{prefix}{token}"), request });
        }
    }
    if snapshots.is_empty() {
        return Err(ConfigError::key("snapshots.y", "at least one snapshot is required (snapshots.y or snapshots.t)"));
    }

    let xgrid = doc.grid("grid.x")?;
    let kgrid = doc.grid("grid.k")?;
    let map_x = doc.grid("map.x")?;
    let map_k = doc.grid("map.k")?;
    check_nyquist(&xgrid, &kgrid).map_err(|e| doc.error("grid.k.n", &e.to_string()))?;

    let quadrature = QuadratureSettings {
        oversample: doc.required_number("quadrature.oversample")?,
        min_nodes: doc.count("quadrature.min_nodes")?,
    };
    if quadrature.oversample.is_nan() || quadrature.oversample <= 0.0 || quadrature.min_nodes == 0 {
        return Err(doc.error("quadrature.oversample", "oversample and min_nodes must be positive"));
    }

    let outputs = doc
        .list("outputs")
        .iter()
        .map(|w| Output::parse(w).ok_or_else(|| doc.error("outputs", &format!("unknown output `{w}`"))))
        .collect::<Result<BTreeSet<_>, _>>()?;
    check_map_grids(&outputs, &xgrid, &map_x, &map_k).map_err(|(key, m)| doc.error(key, &m))?;

    let precision = doc.count("output.precision")?;
    if !(1..=17).contains(&precision) {
        return Err(doc.error("output.precision", "significant digits must be between 1 and 17"));
    }
    let delimiter_word = doc.required("output.delimiter")?;
    let delimiter = parse_delimiter(delimiter_word)
        .ok_or_else(|| doc.error("output.delimiter", "expected comma, semicolon, tab or space"))?;

    let mut values = BTreeMap::new();
    for (key, _) in KEYS {
        if let Some(v) = doc.raw(key) {
            values.insert(key.to_string(), v.to_string());
        }
    }
    if !values.contains_key("aperture.Delta") {
        values.insert("aperture.Delta".into(), format!("{gap:e}"));
    }

    Ok(ScenarioConfig {
        name: doc.required("scenario.name")?.to_string(),
        note: doc.raw("scenario.note").map(String::from),
        reconstructed: doc.list("scenario.reconstructed"),
        kinds,
        delta,
        gap,
        beam,
        snapshots,
        xgrid,
        kgrid,
        map_x,
        map_k,
        quadrature,
        outputs,
        output_dir: PathBuf::from(doc.required("output.dir")?),
        format: CsvFormat { precision, delimiter },
        values,
    })
}

/// Map grids must fit the field grid for the maps the outputs need.
/// Returns the offending key and message.
fn check_map_grids(
    outputs: &BTreeSet<Output>,
    xgrid: &Grid1D,
    map_x: &Grid1D,
    map_k: &Grid1D,
) -> Result<(), (&'static str, String)> {
    let reports = outputs.contains(&Output::Reports);
    let wigner = outputs.contains(&Output::Wigner) || reports;
    if !(wigner || outputs.contains(&Output::DeBroglie)) {
        return Ok(());
    }
    xgrid.snap(map_x).map_err(|e| ("map.x.n", e.to_string()))?;
    check_nyquist(xgrid, map_k).map_err(|e| ("map.k.n", e.to_string()))?;
    let limit = wigner_k_limit(xgrid.spacing());
    if wigner && map_k.extent() > limit * (1.0 + 1e-12) {
        return Err(("map.k.hi", format!("Wigner maps need |kx| <= pi/(2 dx) = {limit:e} 1/m on this x-grid")));
    }
    Ok(())
}
