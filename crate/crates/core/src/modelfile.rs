//! Versioned JSON persistence of fitted models.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FeatureRequest, FittedModel, GlobalFeature, PhaseTimes};

pub const FORMAT: &str = "maxent-model";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("not a model file (format tag {0:?})")]
    Format(String),
    #[error("unsupported model file version {0} (this build reads version {VERSION})")]
    Version(u32),
    #[error("inconsistent model file: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub request: FeatureRequest,
    pub feature: GlobalFeature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    /// Original id of every dense node id.
    pub labels: Vec<u64>,
    pub features: Vec<FeatureRecord>,
    pub model: FittedModel,
    pub phase_times: PhaseTimes,
}

impl ModelFile {
    pub fn new(labels: Vec<u64>, features: Vec<FeatureRecord>, model: FittedModel, phase_times: PhaseTimes) -> Self {
        ModelFile { format: FORMAT.into(), version: VERSION, labels, features, model, phase_times }
    }

    pub fn to_writer<W: Write>(&self, w: W) -> Result<(), ModelFileError> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        let mut w = BufWriter::new(File::create(path)?);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }


    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        Self::check(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    fn check(value: serde_json::Value) -> Result<Self, ModelFileError> {
        // check the header before the body so unknown versions fail clearly
        let format = value.get("format").and_then(|v| v.as_str()).unwrap_or_default();
        if format != FORMAT {
            return Err(ModelFileError::Format(format.to_string()));
        }
        let version = value.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != VERSION {
            return Err(ModelFileError::Version(version));
        }
        let file: ModelFile = serde_json::from_value(value)?;
        if file.labels.len() != file.model.reduced.n {
            return Err(ModelFileError::Inconsistent(format!(
                "{} labels for {} nodes",
                file.labels.len(),
                file.model.reduced.n
            )));
        }
        Ok(file)
    }

    /// Dense id of an original node id.
    pub fn label_index(&self) -> std::collections::HashMap<u64, usize> {
        self.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect()
    }
}

impl std::str::FromStr for ModelFile {
    type Err = ModelFileError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Self::check(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;
    use crate::datasets;
    use crate::features::FeatureSpec;
    use crate::model::{self, EdgeModel, FeatureMode, Grouping, ModelSpec};
    use crate::optimizer::OptimizerOpts;
    use crate::spectral::{EigOptions, KMeansOptions};
    use rand::{Rng, SeedableRng};

    fn karate_file() -> ModelFile {
        let g = datasets::karate();
        let requests = vec![
            FeatureRequest { spec: FeatureSpec::cn(), mode: FeatureMode::Block { d: 4, k: 3 } },
            FeatureRequest { spec: FeatureSpec::pa(), mode: FeatureMode::Block { d: 1, k: 1 } },
        ];
        let (feats, times) =
            model::build_features(&g, &requests, &EigOptions::default(), &KMeansOptions::default(), 1000, 1).unwrap();
        let spec = ModelSpec { use_degrees: true, features: feats.clone(), targets: None };
        let fitted = model::fit(&g, &spec, Grouping::Reduced, &OptimizerOpts::default()).unwrap();
        let records = requests.into_iter().zip(feats).map(|(request, feature)| FeatureRecord { request, feature }).collect();
        ModelFile::new(g.labels().to_vec(), records, fitted, times)
    }

    #[test]
    fn round_trip_preserves_probabilities() {
        let file = karate_file();
        let mut buf = Vec::new();
        file.to_writer(&mut buf).unwrap();
        let back = ModelFile::from_str(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, file);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let i = rng.random_range(0..34);
            let j = (i + rng.random_range(1..34)) % 34;
            assert_eq!(back.model.probability(i, j), file.model.probability(i, j));
        }
    }

    #[test]
    fn rejects_unknown_versions_and_formats() {
        let file = karate_file();
        let mut v = serde_json::to_value(&file).unwrap();
        v["version"] = 99.into();
        assert!(matches!(ModelFile::from_str(&v.to_string()), Err(ModelFileError::Version(99))));
        v["format"] = "other".into();
        assert!(matches!(ModelFile::from_str(&v.to_string()), Err(ModelFileError::Format(_))));
        assert!(matches!(ModelFile::from_str("{"), Err(ModelFileError::Json(_))));
    }
}
