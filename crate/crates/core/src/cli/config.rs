use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coding::{Generator, SchottkyScheme, DEFAULT_CYLINDER_CAPACITY, DEFAULT_GEODESIC_CAPACITY};
use crate::correlation::{Observable, Profile};
use crate::error::{Error, Result};
use crate::geometry::{Complex, Disk, MoebiusMap};
use crate::transfer::DIMENSION_TOL;

/// Everything a run needs. Every section is optional and unknown keys are
/// rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scheme: SchemeSpec,
    pub depth: usize,
    pub seed: u64,
    /// Cylinder table limit.
    pub capacity: u64,
    pub out: PathBuf,
    /// Worker threads, 0 for one per core.
    pub threads: usize,
    pub dimension: DimensionConfig,
    pub pressure: PressureConfig,
    pub gap: GapConfig,
    pub stability: StabilityConfig,
    pub lnic: LnicConfig,
    pub ncp: NcpConfig,
    pub correlation: CorrelationConfig,
    pub geodesics: GeodesicsConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scheme: SchemeSpec::default(),
            depth: 8,
            seed: 0,
            capacity: DEFAULT_CYLINDER_CAPACITY,
            out: PathBuf::from("out"),
            threads: 0,
            dimension: DimensionConfig::default(),
            pressure: PressureConfig::default(),
            gap: GapConfig::default(),
            stability: StabilityConfig::default(),
            lnic: LnicConfig::default(),
            ncp: NcpConfig::default(),
            correlation: CorrelationConfig::default(),
            geodesics: GeodesicsConfig::default(),
        }
    }
}

/// At most one of `fixture`, `pairings` or `matrices`; FIX-B when none is
/// given.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeSpec {
    /// `"a"` (Fuchsian) or `"b"` (non-Fuchsian).
    pub fixture: Option<String>,
    pub pairings: Vec<PairingSpec>,
    pub matrices: Vec<MatrixSpec>,
}

/// `g(z) = c₊ − r²/(z − c₋)` with `source = c₋`, `target = c₊`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub source: [f64; 2],
    pub target: [f64; 2],
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Raw entries `[[a, b], [c, d]]`, each `[re, im]`, with the disks it pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [f64; 2],
    pub source: DiskSpec,
    pub target: DiskSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DimensionConfig {
    pub tolerance: f64,
}

impl Default for DimensionConfig {
    fn default() -> Self {
        DimensionConfig { tolerance: DIMENSION_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PressureConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
}

impl Default for PressureConfig {
    fn default() -> Self {
        PressureConfig { s_min: 0.0, s_max: 1.0, points: 21 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GapConfig {
    pub b: Vec<f64>,
    pub k: Vec<i32>,
    pub iterations: usize,
    pub threshold: f64,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            b: vec![0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0],
            k: vec![0, 1, -1, 3, -3],
            iterations: 100,
            threshold: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityConfig {
    pub a: Vec<f64>,
    pub b: f64,
    pub k: i32,
    pub iterations: usize,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { a: vec![-0.05, -0.025, 0.0, 0.025, 0.05], b: 5.0, k: 1, iterations: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LnicConfig {
    pub word_length: usize,
    pub samples: usize,
    pub angles: usize,
}

impl Default for LnicConfig {
    fn default() -> Self {
        LnicConfig { word_length: 4, samples: 32, angles: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NcpConfig {
    pub points: usize,
    pub word_length: usize,
    pub bases: usize,
    pub directions: usize,
    pub radii: Vec<f64>,
}

impl Default for NcpConfig {
    fn default() -> Self {
        NcpConfig { points: 200_000, word_length: 30, bases: 16, directions: 8, radii: vec![0.1, 0.01] }
    }
}

/// `φ(u, m, t) = p(t/τ) base(u[0]) Σ_{k ∈ modes} cos(km)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservableSpec {
    pub modes: Vec<i32>,
    /// One value per first symbol; all ones when omitted.
    pub base: Option<Vec<f64>>,
    pub profile: Profile,
}

impl Default for ObservableSpec {
    fn default() -> Self {
        ObservableSpec { modes: vec![1], base: None, profile: Profile::SineSquared }
    }
}

impl ObservableSpec {
    pub fn build(&self, alphabet: usize) -> Result<Observable> {
        let base = self.base.clone().unwrap_or_else(|| vec![1.0; alphabet]);
        if base.len() != alphabet {
            return Err(Error::Config(format!("observable base has {} values, expected {alphabet}", base.len())));
        }
        let mut ks: Vec<i32> = self.modes.iter().map(|k| k.abs()).collect();
        ks.sort_unstable();
        ks.dedup();
        let mut coefficients = Vec::new();
        for k in ks {
            if k == 0 {
                coefficients.push((0, Complex::new(1.0, 0.0)));
            } else {
                coefficients.push((k, Complex::new(0.5, 0.0)));
                coefficients.push((-k, Complex::new(0.5, 0.0)));
            }
        }
        Observable::separable(alphabet, 1, self.profile, &base, &coefficients)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrelationConfig {
    pub phi: ObservableSpec,
    pub psi: ObservableSpec,
    pub t_max: f64,
    pub step: f64,
    pub stride: usize,
    /// Real point at which the Laplace series is compared with the
    /// transformed correlation.
    pub xi: f64,
    pub terms: usize,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        CorrelationConfig {
            phi: ObservableSpec::default(),
            psi: ObservableSpec::default(),
            t_max: 30.0,
            step: 0.005,
            stride: 10,
            xi: 0.5,
            terms: 30,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeodesicsConfig {
    pub t_values: Vec<f64>,
    pub capacity: u64,
}

impl Default for GeodesicsConfig {
    fn default() -> Self {
        GeodesicsConfig { t_values: vec![15.0, 25.0, 35.0, 45.0], capacity: DEFAULT_GEODESIC_CAPACITY }
    }
}

fn complex(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Rejects non-finite numbers and empty grids.
    pub fn check(&self) -> Result<()> {
        let mut values: Vec<(&str, f64)> = vec![
            ("dimension.tolerance", self.dimension.tolerance),
            ("pressure.s_min", self.pressure.s_min),
            ("pressure.s_max", self.pressure.s_max),
            ("gap.threshold", self.gap.threshold),
            ("stability.b", self.stability.b),
            ("correlation.t_max", self.correlation.t_max),
            ("correlation.step", self.correlation.step),
            ("correlation.xi", self.correlation.xi),
        ];
        values.extend(self.gap.b.iter().map(|&v| ("gap.b", v)));
        values.extend(self.stability.a.iter().map(|&v| ("stability.a", v)));
        values.extend(self.ncp.radii.iter().map(|&v| ("ncp.radii", v)));
        values.extend(self.geodesics.t_values.iter().map(|&v| ("geodesics.t_values", v)));
        for obs in [&self.correlation.phi, &self.correlation.psi] {
            values.extend(obs.base.iter().flatten().map(|&v| ("correlation base", v)));
        }
        for p in &self.scheme.pairings {
            values.extend(p.source.iter().chain(&p.target).chain([&p.radius]).map(|&v| ("scheme.pairings", v)));
        }
        for m in &self.scheme.matrices {
            let entries = m.a.iter().chain(&m.b).chain(&m.c).chain(&m.d);
            let disks = m.source.center.iter().chain(&m.target.center).chain([&m.source.radius, &m.target.radius]);
            values.extend(entries.chain(disks).map(|&v| ("scheme.matrices", v)));
        }
        if let Some((name, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Config(format!("{name} = {v} is not finite")));
        }
        if self.depth == 0 {
            return Err(Error::Config("depth must be at least 1".into()));
        }
        if self.gap.b.is_empty() || self.gap.k.is_empty() || self.stability.a.is_empty() {
            return Err(Error::Config("empty parameter grid".into()));
        }
        if self.geodesics.t_values.is_empty() || self.ncp.radii.is_empty() {
            return Err(Error::Config("empty parameter grid".into()));
        }
        if self.pressure.points < 2 {
            return Err(Error::Config("pressure curve needs at least 2 points".into()));
        }
        Ok(())
    }

    pub fn build_scheme(&self) -> Result<SchottkyScheme> {
        let given_scheme = &self.scheme;
        let given = [given_scheme.fixture.is_some(), !given_scheme.pairings.is_empty(), !given_scheme.matrices.is_empty()];
        match given.iter().filter(|&&g| g).count() {
            0 => return Ok(SchottkyScheme::fixture_b()),
            1 => {}
            _ => return Err(Error::Config("give only one of scheme.fixture, scheme.pairings, scheme.matrices".into())),
        }
        if let Some(name) = &given_scheme.fixture {
            return match name.to_ascii_lowercase().as_str() {
                "a" => Ok(SchottkyScheme::fixture_a()),
                "b" => Ok(SchottkyScheme::fixture_b()),
                other => Err(Error::Config(format!("unknown fixture {other:?}"))),
            };
        }
        if !given_scheme.pairings.is_empty() {
            let pairs: Vec<_> = given_scheme.pairings.iter().map(|p| (complex(p.source), complex(p.target), p.radius)).collect();
            return SchottkyScheme::from_pairings(&pairs);
        }
        let generators = given_scheme
            .matrices
            .iter()
            .map(|m| {
                Ok(Generator {
                    map: MoebiusMap::new(complex(m.a), complex(m.b), complex(m.c), complex(m.d))?,
                    source: Disk::new(complex(m.source.center), m.source.radius)?,
                    target: Disk::new(complex(m.target.center), m.target.radius)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SchottkyScheme::new(generators)
    }

    /// SHA-256 of the canonical JSON form, leaving out the output directory
    /// and thread count since neither affects results.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = PathBuf::new();
        canonical.threads = 0;
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
