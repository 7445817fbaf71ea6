use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifiers::{ClassifierKind, NbParams, SvmParams};
use crate::error::{Error, Result};
use crate::sieve::default_m;
use crate::spectral::DhtMode;

/// One of the eight transform/classifier chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

/// Feature map applied to each sample before classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureStage {
    Raw,
    Sieve,
    SieveDftPhase,
    SieveDhtPhase,
}

impl FeatureStage {
    pub fn uses_sieve(self) -> bool {
        !matches!(self, FeatureStage::Raw)
    }

    pub fn describe(self) -> &'static str {
        match self {
            FeatureStage::Raw => "raw",
            FeatureStage::Sieve => "raw -> sieve",
            FeatureStage::SieveDftPhase => "raw -> sieve -> arg(DFT)",
            FeatureStage::SieveDhtPhase => "raw -> sieve -> arg(DHT)",
        }
    }
}

impl ConfigId {
    pub const ALL: [ConfigId; 8] = [
        ConfigId::C1,
        ConfigId::C2,
        ConfigId::C3,
        ConfigId::C4,
        ConfigId::C5,
        ConfigId::C6,
        ConfigId::C7,
        ConfigId::C8,
    ];

    /// 1 through 8.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Odd configurations use naive Bayes, even ones the SVM.
    pub fn classifier(self) -> ClassifierKind {
        if self.number() % 2 == 1 {
            ClassifierKind::NaiveBayes
        } else {
            ClassifierKind::Svm
        }
    }

    pub fn stage(self) -> FeatureStage {
        match self {
            ConfigId::C1 | ConfigId::C2 => FeatureStage::Raw,
            ConfigId::C3 | ConfigId::C4 => FeatureStage::Sieve,
            ConfigId::C5 | ConfigId::C6 => FeatureStage::SieveDftPhase,
            ConfigId::C7 | ConfigId::C8 => FeatureStage::SieveDhtPhase,
        }
    }

    /// The configuration with the same classifier on raw or sieved
    /// intensities, for phase-bearing ids.
    pub fn raw_counterpart(self) -> Option<ConfigId> {
        match self {
            ConfigId::C5 => Some(ConfigId::C1),
            ConfigId::C6 => Some(ConfigId::C2),
            ConfigId::C7 => Some(ConfigId::C3),
            ConfigId::C8 => Some(ConfigId::C4),
            _ => None,
        }
    }

    pub fn chain(self) -> String {
        format!("{} -> {}", self.stage().describe(), self.classifier().short_name())
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.number())
    }
}

impl FromStr for ConfigId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix(['c', 'C']).unwrap_or(t);
        match digits.parse::<usize>() {
            Ok(n @ 1..=8) => Ok(ConfigId::ALL[n - 1]),
            _ => Err(Error::InvalidParams(format!(
                "unknown configuration '{s}' (expected C1..C8)"
            ))),
        }
    }
}

/// Parses `all` or a comma-separated list such as `c1,c5,C8`. The result
/// is sorted and free of duplicates.
pub fn parse_config_list(s: &str) -> Result<Vec<ConfigId>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ConfigId::ALL.to_vec());
    }
    let mut ids = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<ConfigId>>>()?;
    if ids.is_empty() {
        return Err(Error::InvalidParams("no configuration selected".into()));
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveParams {
    pub n_total: usize,
    pub m: usize,
}

impl SieveParams {
    /// `m` defaults to half of `n_total`.
    pub fn with_default_m(n_total: usize) -> Self {
        Self {
            n_total,
            m: default_m(n_total),
        }
    }
}

/// Settings shared by every configuration of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub sieve: SieveParams,
    pub dht_mode: DhtMode,
    pub nb: NbParams,
    pub svm: SvmParams,
    pub repetitions: usize,
    /// Include each repetition's 1-based sieve positions in reports.
    pub export_masks: bool,
}

impl RunOptions {
    pub const DEFAULT_REPETITIONS: usize = 50;

    pub fn new(n_total: usize) -> Self {
        Self {
            sieve: SieveParams::with_default_m(n_total),
            dht_mode: DhtMode::default(),
            nb: NbParams::default(),
            svm: SvmParams::default(),
            repetitions: Self::DEFAULT_REPETITIONS,
            export_masks: false,
        }
    }

    pub fn pipeline(&self, id: ConfigId) -> PipelineConfig {
        PipelineConfig {
            id,
            sieve: self.sieve,
            dht_mode: self.dht_mode,
            nb: self.nb,
            svm: self.svm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub id: ConfigId,
    pub sieve: SieveParams,
    pub dht_mode: DhtMode,
    pub nb: NbParams,
    pub svm: SvmParams,
}

impl PipelineConfig {
    pub fn new(id: ConfigId, n_total: usize) -> Self {
        RunOptions::new(n_total).pipeline(id)
    }

    pub fn stage(&self) -> FeatureStage {
        self.id.stage()
    }

    pub fn classifier(&self) -> ClassifierKind {
        self.id.classifier()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sieve.n_total == 0 {
            return Err(Error::InvalidParams("sieve N must be positive".into()));
        }
        if self.sieve.m > self.sieve.n_total {
            return Err(Error::MOutOfRange {
                m: self.sieve.m,
                n_total: self.sieve.n_total,
            });
        }
        Ok(())
    }
}
