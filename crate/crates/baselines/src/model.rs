use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use veritas_core::{BinaryLabel, Scalar};

use crate::error::BaselineError;
use crate::lexicon::Lexicon;
use crate::logreg::{LogRegConfig, LogRegModel};
use crate::nb::NbModel;
use crate::preprocess::preprocess;
use crate::tfidf::TfIdfModel;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    MultinomialNb,
    LogisticRegression,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 2] = [BaselineKind::MultinomialNb, BaselineKind::LogisticRegression];

    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::MultinomialNb => "multinomial-nb",
            BaselineKind::LogisticRegression => "logistic-regression",
        }
    }

    /// Display name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            BaselineKind::MultinomialNb => "MultinomialNB",
            BaselineKind::LogisticRegression => "Logistic Regression",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaselineKind {
    type Err = BaselineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "multinomial-nb" | "nb" | "naive-bayes" => Ok(BaselineKind::MultinomialNb),
            "logistic-regression" | "logreg" | "lr" => Ok(BaselineKind::LogisticRegression),
            other => Err(BaselineError::InvalidConfig(format!("unknown baseline {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "kebab-case")]
pub enum Classifier<T: Scalar> {
    MultinomialNb(NbModel<T>),
    LogisticRegression(LogRegModel<T>),
}

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub nb_alpha: f64,
    pub logreg: LogRegConfig,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self { nb_alpha: crate::nb::DEFAULT_ALPHA, logreg: LogRegConfig::default() }
    }
}

impl TrainOptions {
    pub fn new() -> Self {
        Self::default()
    }
}

/// A fitted vectorizer plus classifier; the unit persisted to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BaselineModel<T: Scalar> {
    format_version: u32,
    tfidf: TfIdfModel<T>,
    classifier: Classifier<T>,
}

impl<T: Scalar> BaselineModel<T> {
    /// Preprocesses `texts`, fits TF-IDF and trains the requested classifier.
    /// Naive Bayes sees raw counts, logistic regression TF-IDF weights.
    pub fn train<S: AsRef<str>>(
        kind: BaselineKind,
        texts: &[S],
        labels: &[BinaryLabel],
        lexicon: &Lexicon,
        opts: &TrainOptions,
    ) -> Result<Self, BaselineError> {
        if texts.len() != labels.len() {
            return Err(BaselineError::LengthMismatch { vectors: texts.len(), labels: labels.len() });
        }
        let docs: Vec<Vec<String>> = texts.iter().map(|t| preprocess(t.as_ref(), lexicon)).collect();
        let tfidf = TfIdfModel::fit(&docs)?;
        let classifier = match kind {
            BaselineKind::MultinomialNb => {
                let xs: Vec<_> = docs.iter().map(|d| tfidf.counts(d)).collect();
                Classifier::MultinomialNb(NbModel::train(&xs, labels, tfidf.dim(), T::lit(opts.nb_alpha))?)
            }
            BaselineKind::LogisticRegression => {
                let xs: Vec<_> = docs.iter().map(|d| tfidf.transform(d)).collect();
                Classifier::LogisticRegression(LogRegModel::train(&xs, labels, tfidf.dim(), opts.logreg)?.model)
            }
        };
        Ok(Self { format_version: MODEL_FORMAT_VERSION, tfidf, classifier })
    }

    pub fn kind(&self) -> BaselineKind {
        match self.classifier {
            Classifier::MultinomialNb(_) => BaselineKind::MultinomialNb,
            Classifier::LogisticRegression(_) => BaselineKind::LogisticRegression,
        }
    }

    pub fn tfidf(&self) -> &TfIdfModel<T> {
        &self.tfidf
    }

    pub fn classifier(&self) -> &Classifier<T> {
        &self.classifier
    }

    /// Probability the text is Reliable under the model.
    pub fn score_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> T {
        match &self.classifier {
            Classifier::MultinomialNb(m) => m.posterior_reliable(&self.tfidf.counts(tokens)),
            Classifier::LogisticRegression(m) => m.probability(&self.tfidf.transform(tokens)),
        }
    }

    pub fn predict_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> BinaryLabel {
        match &self.classifier {
            Classifier::MultinomialNb(m) => m.predict(&self.tfidf.counts(tokens)),
            Classifier::LogisticRegression(m) => m.predict(&self.tfidf.transform(tokens)),
        }
    }

    pub fn predict_text(&self, text: &str, lexicon: &Lexicon) -> BinaryLabel {
        self.predict_tokens(&preprocess(text, lexicon))
    }

    pub fn to_json(&self) -> Result<String, BaselineError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self, BaselineError> {
        let model: Self = serde_json::from_str(json)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(BaselineError::UnsupportedVersion { found: model.format_version, expected: MODEL_FORMAT_VERSION });
        }
        model.tfidf.check()?;
        match &model.classifier {
            Classifier::MultinomialNb(m) => m.check(model.tfidf.dim())?,
            Classifier::LogisticRegression(m) if m.dim() != model.tfidf.dim() => {
                return Err(BaselineError::InvalidConfig("weight vector does not match the vocabulary".into()))
            }
            Classifier::LogisticRegression(_) => {}
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), BaselineError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BaselineError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BinaryLabel::*;

    fn corpus() -> (Vec<&'static str>, Vec<BinaryLabel>) {
        (
            vec![
                "Senate approves the annual budget",
                "Governor signs education bill into law",
                "Aliens secretly control the senate",
                "Moon landing was staged in a studio",
                "City council approves new budget",
                "Secret aliens staged the election",
            ],
            vec![Reliable, Reliable, Unreliable, Unreliable, Reliable, Unreliable],
        )
    }

    #[test]
    fn both_kinds_fit_their_training_data() {
        let (texts, labels) = corpus();
        let lx = Lexicon::default();
        for kind in BaselineKind::ALL {
            let m = BaselineModel::<f64>::train(kind, &texts, &labels, &lx, &TrainOptions::new()).unwrap();
            assert_eq!(m.kind(), kind);
            let hits = texts.iter().zip(&labels).filter(|(t, y)| m.predict_text(t, &lx) == **y).count();
            assert_eq!(hits, texts.len(), "{kind}");
        }
    }

    #[test]
    fn save_and_load_round_trip() {
        let (texts, labels) = corpus();
        let lx = Lexicon::default();
        let dir = tempfile::tempdir().unwrap();
        for kind in BaselineKind::ALL {
            let m = BaselineModel::<f64>::train(kind, &texts, &labels, &lx, &TrainOptions::new()).unwrap();
            let path = dir.path().join(format!("{kind}.json"));
            m.save(&path).unwrap();
            let back = BaselineModel::<f64>::load(&path).unwrap();
            assert_eq!(back.predict_text("aliens staged the budget", &lx), m.predict_text("aliens staged the budget", &lx));
            assert_eq!(back.kind(), kind);
        }
    }

    #[test]
    fn rejects_other_format_versions() {
        let (texts, labels) = corpus();
        let m = BaselineModel::<f64>::train(BaselineKind::MultinomialNb, &texts, &labels, &Lexicon::default(), &TrainOptions::new()).unwrap();
        let json = m.to_json().unwrap().replacen("\"format_version\": 1", "\"format_version\": 9", 1);
        assert!(matches!(BaselineModel::<f64>::from_json(&json), Err(BaselineError::UnsupportedVersion { found: 9, .. })));
    }

    #[test]
    fn kind_names_parse() {
        for kind in BaselineKind::ALL {
            assert_eq!(kind.as_str().parse::<BaselineKind>().unwrap(), kind);
        }
        assert_eq!("NB".parse::<BaselineKind>().unwrap(), BaselineKind::MultinomialNb);
        assert!("svm".parse::<BaselineKind>().is_err());
    }
}
