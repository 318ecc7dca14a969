//! Bag-of-words headline classifiers.
//!
//! Text is lowercased, tokenized, filtered to alphabetic tokens, stripped of
//! stopwords and lemmatized through a shipped inflection table
//! ([`preprocess`]). A [`TfIdfModel`] fixes the vocabulary; multinomial naive
//! Bayes trains on raw counts and logistic regression on TF-IDF weights.
//! [`BaselineModel`] bundles a vectorizer and classifier and persists to a
//! versioned JSON file.

pub mod error;
pub mod lexicon;
pub mod logreg;
pub mod model;
pub mod nb;
pub mod preprocess;
pub mod sparse;
pub mod tfidf;

pub use error::BaselineError;
pub use lexicon::Lexicon;
pub use logreg::{gradient, loss, sigmoid, LogRegConfig, LogRegFit, LogRegModel};
pub use model::{BaselineKind, BaselineModel, Classifier, TrainOptions, MODEL_FORMAT_VERSION};
pub use nb::{NbModel, DEFAULT_ALPHA};
pub use preprocess::{preprocess, tokenize};
pub use sparse::SparseVector;
pub use tfidf::TfIdfModel;

pub type SparseVectorF64 = SparseVector<f64>;
pub type SparseVectorF32 = SparseVector<f32>;
pub type TfIdfModelF64 = TfIdfModel<f64>;
pub type TfIdfModelF32 = TfIdfModel<f32>;
pub type NbModelF64 = NbModel<f64>;
pub type NbModelF32 = NbModel<f32>;
pub type LogRegModelF64 = LogRegModel<f64>;
pub type LogRegModelF32 = LogRegModel<f32>;
pub type BaselineModelF64 = BaselineModel<f64>;
