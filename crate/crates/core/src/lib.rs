//! Code readability measurement: lexical feature extraction, a logistic
//! readability classifier with forward feature selection, and paired corpus
//! comparison statistics.

pub mod analytics;
pub mod config;
pub mod corpus;
pub mod dictionary;
pub mod features;
pub mod lexical;
pub mod model;
pub mod vectorizer;

pub use corpus::{Language, LabeledDataset, Snippet};
pub use dictionary::Dictionary;
pub use features::FeatureConfig;
pub use vectorizer::{featurize, schema, FeatureSelection, FeatureVector, Featurizer, FEATURE_COUNT, SCHEMA_VERSION};
pub use model::{ModelSettings, ReadabilityModel};
