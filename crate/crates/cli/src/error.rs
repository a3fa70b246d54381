use std::fmt;

use ionscreen::chem::ParseError;
use ionscreen::datasets::DatasetError;
use ionscreen::descriptors::DescriptorError;
use ionscreen::evalharness::EvalError;
use ionscreen::featurize::FeaturizeError;
use ionscreen::fingerprints::FingerprintError;
use ionscreen::predictor::PredictorError;
use ionscreen::screening::ScreeningError;

/// A domain failure: exit status 1, reported as `CODE: message`.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> CliError {
        CliError::new("E_IO", format!("{}: {e}", path.display()))
    }

    pub fn config(message: impl Into<String>) -> CliError {
        CliError::new("E_CONFIG", message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

macro_rules! code_for {
    ($($ty:ty => $code:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                CliError::new($code, e.to_string())
            }
        })*
    };
}

code_for! {
    ParseError => "E_SMILES",
    DatasetError => "E_DATASET",
    DescriptorError => "E_DESCRIPTOR",
    FeaturizeError => "E_FEATURIZE",
    FingerprintError => "E_FINGERPRINT",
    PredictorError => "E_PREDICTOR",
    EvalError => "E_EVAL",
    ScreeningError => "E_SCREENING",
}

pub type CliResult<T> = Result<T, CliError>;
