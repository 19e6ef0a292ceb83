//! Typed experiment configurations. Every parameter struct doubles as a
//! clap argument group and a serde record, so a command line and a
//! `run --config` file describe the same experiment.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spectra_core::rootsys::Family;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct FacesParams {
    /// Restrict to one family (A–G); all families when absent.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 6)]
    pub max_rank: usize,
}

impl Default for FacesParams {
    fn default() -> Self {
        FacesParams { family: None, max_rank: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TildeParams {
    #[arg(long, default_value_t = 8)]
    pub max_rank: usize,
}

impl Default for TildeParams {
    fn default() -> Self {
        TildeParams { max_rank: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WedgeParams {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HarmGapParams {
    #[arg(long)]
    pub measure: PathBuf,
    /// Largest spin `j` (half-integers allowed).
    #[arg(long, default_value_t = 20.0)]
    #[serde(default = "default_jmax")]
    pub jmax: f64,
    #[arg(long, default_value_t = 64)]
    #[serde(default = "default_power")]
    pub n: u64,
}

fn default_jmax() -> f64 {
    20.0
}

fn default_power() -> u64 {
    64
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ParsevalParams {
    /// Number of random band-limited functions.
    #[arg(long, default_value_t = 50)]
    pub functions: usize,
    #[arg(long, default_value_t = 5.0)]
    pub jmax: f64,
    /// Random pairs for the representation homomorphism check.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
}

impl Default for ParsevalParams {
    fn default() -> Self {
        ParsevalParams { functions: 50, jmax: 5.0, pairs: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DioParams {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    #[serde(default = "default_c1")]
    pub c1: f64,
    #[arg(long, default_value_t = 5)]
    #[serde(default = "default_nmin")]
    pub nmin: usize,
    #[arg(long, default_value_t = 40)]
    #[serde(default = "default_dio_nmax")]
    pub nmax: usize,
    #[arg(long, default_value_t = 1_000_000)]
    #[serde(default = "default_dio_samples")]
    pub samples: usize,
}

fn default_c1() -> f64 {
    0.1
}

fn default_nmin() -> usize {
    5
}

fn default_dio_nmax() -> usize {
    40
}

fn default_dio_samples() -> usize {
    1_000_000
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct KestenParams {
    /// Free generators `m`.
    #[arg(long, default_value_t = 2)]
    pub generators: u32,
    #[arg(long, default_value_t = 30)]
    pub nmax: usize,
}

impl Default for KestenParams {
    fn default() -> Self {
        KestenParams { generators: 2, nmax: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FlattenParams {
    #[arg(long)]
    pub measure: PathBuf,
    /// Dyadic exponents `k` for `δ = 2^{−k}`.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8")]
    #[serde(default = "default_exponents")]
    pub exponents: Vec<i32>,
    /// Walk length `n = ⌈c·ln(1/δ)⌉`.
    #[arg(long, default_value_t = 1.5)]
    #[serde(default = "default_c")]
    pub c: f64,
    #[arg(long, default_value_t = 200_000)]
    #[serde(default = "default_flatten_samples")]
    pub samples: usize,
}

fn default_exponents() -> Vec<i32> {
    vec![4, 5, 6, 7, 8]
}

fn default_c() -> f64 {
    1.5
}

fn default_flatten_samples() -> usize {
    200_000
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EnergyParams {
    #[arg(long)]
    pub measure: PathBuf,
    /// Walk length for both sample sets.
    #[arg(long, default_value_t = 8)]
    #[serde(default = "default_energy_n")]
    pub n: usize,
    #[arg(long, default_value_t = 2000)]
    #[serde(default = "default_energy_samples")]
    pub samples: usize,
    #[arg(long, default_value_t = 0.1)]
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_energy_n() -> usize {
    8
}

fn default_energy_samples() -> usize {
    2000
}

fn default_delta() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DecayParams {
    /// Ensemble file; the Sanov pair with `v = e₁`, `W = span(e₁)` when absent.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub nmin: usize,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// Exact word enumeration up to this length.
    #[arg(long)]
    pub exact_up_to: Option<usize>,
    /// Samples for the proximality check (0 skips it).
    #[arg(long, default_value_t = 500)]
    pub proximality_samples: usize,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            ensemble: None,
            epsilon: 0.0,
            nmin: 0,
            nmax: 12,
            samples: 200_000,
            exact_up_to: None,
            proximality_samples: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CertParams {
    /// Generators and the starting subspace `L₀`.
    #[arg(long)]
    pub generators: PathBuf,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_radius")]
    pub radius: usize,
    #[arg(long, default_value_t = 1e-9)]
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Also build the height ledger up to this word length.
    #[arg(long)]
    #[serde(default)]
    pub ledger_nmax: Option<usize>,
}

fn default_radius() -> usize {
    3
}

fn default_threshold() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Face lemma over every chamber face.
    FacesVerify(FacesParams),
    /// Highest-root classification per irreducible type.
    TildeClassify(TildeParams),
    /// `𝒮_X` for every face of one type.
    WedgeBuild(WedgeParams),
    /// Spectral radii of `μ̂(j)`.
    HarmGap(HarmGapParams),
    /// Parseval and representation checks on random band-limited functions.
    Parseval(ParsevalParams),
    /// Almost-Diophantine profile of a measure.
    DioProfile(DioParams),
    /// Free-group return probabilities and spectral radius.
    Kesten(KestenParams),
    /// `L²`-flattening sweep.
    Flatten(FlattenParams),
    /// Multiplicative energy and covering numbers of walk samples.
    Energy(EnergyParams),
    /// Hyperplane hitting probabilities of matrix products.
    Decay(DecayParams),
    /// Common invariant subspace certificate.
    Cert(CertParams),
}

impl Command {
    pub const NAMES: [&'static str; 11] = [
        "faces-verify",
        "tilde-classify",
        "wedge-build",
        "harm-gap",
        "parseval",
        "dio-profile",
        "kesten",
        "flatten",
        "energy",
        "decay",
        "cert",
    ];

    pub fn name(&self) -> &'static str {
        let i = match self {
            Command::FacesVerify(_) => 0,
            Command::TildeClassify(_) => 1,
            Command::WedgeBuild(_) => 2,
            Command::HarmGap(_) => 3,
            Command::Parseval(_) => 4,
            Command::DioProfile(_) => 5,
            Command::Kesten(_) => 6,
            Command::Flatten(_) => 7,
            Command::Energy(_) => 8,
            Command::Decay(_) => 9,
            Command::Cert(_) => 10,
        };
        Self::NAMES[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}
