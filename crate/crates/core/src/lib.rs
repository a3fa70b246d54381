pub mod chem;
pub mod corpus;
pub mod descriptors;
pub mod datasets;
pub mod featurize;
pub mod fingerprints;
pub mod plotdata;
pub mod predictor;
pub mod evalharness;
pub mod screening;
