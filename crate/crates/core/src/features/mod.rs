//! Bag-of-words features: tokenize, drop stopwords, lemmatize, fit a
//! min_df-pruned vocabulary and count terms per document.

mod lemma;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use lemma::{Lemmatizer, BUNDLED_LEMMAS};

pub const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");
pub const DEFAULT_MIN_DF: f64 = 0.01;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("cannot fit a vocabulary on an empty corpus")]
    EmptyCorpus,
    #[error("min_df must be in (0,1], got {0}")]
    InvalidMinDf(f64),
    #[error("vector has width {actual}, vocabulary has {expected} terms")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Lower-case, split on runs of non-alphanumeric characters, drop
/// all-digit tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty() && !t.chars().all(|c| c.is_numeric()))
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList(HashSet<String>);

impl StopList {
    /// One token per line; blank lines skipped, entries lower-cased.
    pub fn from_lines(text: &str) -> Self {
        StopList(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        )
    }

    pub fn bundled() -> Self {
        Self::from_lines(BUNDLED_STOPWORDS)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn remove_stopwords(tokens: Vec<String>, stoplist: &StopList) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}

/// Text to lemmas: tokenize, drop stopwords, then lemmatize.
#[derive(Debug, Clone, Default)]
pub struct Preprocessor {
    pub stoplist: StopList,
    pub lemmatizer: Lemmatizer,
}

impl Preprocessor {
    pub fn new(stoplist: StopList, lemmatizer: Lemmatizer) -> Self {
        Preprocessor { stoplist, lemmatizer }
    }

    pub fn bundled() -> Self {
        Self::new(StopList::bundled(), Lemmatizer::bundled())
    }

    pub fn process(&self, text: &str) -> Vec<String> {
        remove_stopwords(tokenize(text), &self.stoplist)
            .iter()
            .map(|t| self.lemmatizer.lemmatize(t))
            .collect()
    }
}

/// Sorted, min_df-pruned term list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    document_frequency: Vec<usize>,
    n_documents: usize,
    min_df: f64,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Keep every lemma whose document frequency satisfies `df / N >= min_df`.
    pub fn fit<D: AsRef<[String]>>(corpus: &[D], min_df: f64) -> Result<Self, FeatureError> {
        if !(min_df > 0.0 && min_df <= 1.0) {
            return Err(FeatureError::InvalidMinDf(min_df));
        }
        if corpus.is_empty() {
            return Err(FeatureError::EmptyCorpus);
        }
        let n = corpus.len();
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in corpus {
            let unique: HashSet<&str> = doc.as_ref().iter().map(String::as_str).collect();
            for term in unique {
                *df.entry(term).or_default() += 1;
            }
        }
        let (terms, document_frequency): (Vec<String>, Vec<usize>) = df
            .into_iter()
            .filter(|&(_, count)| count as f64 / n as f64 >= min_df)
            .map(|(t, c)| (t.to_string(), c))
            .unzip();
        Ok(Self::from_parts(terms, document_frequency, n, min_df))
    }

    fn from_parts(terms: Vec<String>, document_frequency: Vec<usize>, n_documents: usize, min_df: f64) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary {
            terms,
            document_frequency,
            n_documents,
            min_df,
            index,
        }
    }

    /// Rebuild the lookup index after deserialization.
    pub fn reindex(mut self) -> Self {
        self.index = self.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        self
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self) -> &[usize] {
        &self.document_frequency
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    pub fn min_df(&self) -> f64 {
        self.min_df
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Hex SHA-256 over the newline-joined term list; ties models to the
    /// feature space they were trained on.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                hasher.update(b"\n");
            }
            hasher.update(t.as_bytes());
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The `vocabulary.txt` legend: one term per line, line number = column.
    pub fn legend(&self) -> String {
        self.terms.iter().map(|t| format!("{t}\n")).collect()
    }

    /// Count vector over this vocabulary; out-of-vocabulary tokens are ignored.
    pub fn transform(&self, tokens: &[String]) -> Vec<u32> {
        let mut row = vec![0u32; self.len()];
        for t in tokens {
            if let Some(i) = self.position(t) {
                row[i] += 1;
            }
        }
        row
    }
}

pub fn fit_vocabulary<D: AsRef<[String]>>(corpus: &[D], min_df: f64) -> Result<Vocabulary, FeatureError> {
    Vocabulary::fit(corpus, min_df)
}

pub fn transform(tokens: &[String], vocabulary: &Vocabulary) -> Vec<u32> {
    vocabulary.transform(tokens)
}

/// Dense document-term counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    pub rows: Vec<Vec<u32>>,
    pub vocabulary: Vocabulary,
}

impl DocTermMatrix {
    pub fn build<D: AsRef<[String]>>(corpus: &[D], vocabulary: Vocabulary) -> Self {
        let rows = corpus.iter().map(|d| vocabulary.transform(d.as_ref())).collect();
        DocTermMatrix { rows, vocabulary }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.vocabulary.len()
    }

    /// `row,col,count` triplets for every non-zero cell, with header.
    pub fn to_triplets_csv(&self) -> String {
        let mut out = String::from("row,col,count\n");
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &count) in row.iter().enumerate().filter(|(_, &v)| v > 0) {
                out.push_str(&format!("{r},{c},{count}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &[&str]) -> Vec<String> {
        s.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn tokenizer() {
        assert_eq!(tokenize("Great camera, great battery!"), toks(&["great", "camera", "great", "battery"]));
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("iPhone 13"), toks(&["iphone"]));
        assert_eq!(tokenize("love it 😍😍"), toks(&["love", "it"]));
        assert_eq!(tokenize("s21 ultra"), toks(&["s21", "ultra"]));
    }

    #[test]
    fn stopwords() {
        let stop = StopList::bundled();
        assert_eq!(remove_stopwords(toks(&["the", "phone", "is", "good"]), &stop), toks(&["phone", "good"]));
        assert!(remove_stopwords(vec![], &stop).is_empty());
        assert_eq!(remove_stopwords(toks(&["camera", "battery"]), &stop), toks(&["camera", "battery"]));
        assert!(stop.len() > 100);
    }

    #[test]
    fn preprocess() {
        let p = Preprocessor::bundled();
        assert_eq!(p.process("The phones are better than I thought!"), toks(&["phone", "good", "think"]));
    }

    #[test]
    fn min_df_boundary() {
        let mut corpus: Vec<Vec<String>> = (0..200).map(|_| toks(&["common"])).collect();
        corpus[0].push("rare".into());
        corpus[1].push("pair".into());
        corpus[2].push("pair".into());
        let v = fit_vocabulary(&corpus, 0.01).unwrap();
        assert_eq!(v.terms(), toks(&["common", "pair"]).as_slice());
        assert_eq!(v.document_frequency(), &[200, 2]);
    }

    #[test]
    fn errors() {
        let empty: Vec<Vec<String>> = vec![];
        assert_eq!(fit_vocabulary(&empty, 0.01), Err(FeatureError::EmptyCorpus));
        assert_eq!(fit_vocabulary(&[toks(&["a"])], 1.5), Err(FeatureError::InvalidMinDf(1.5)));
        assert!(fit_vocabulary(&[toks(&["a"])], 1.0).is_ok());
    }

    #[test]
    fn transform_counts() {
        let v = fit_vocabulary(&[toks(&["good", "phone"])], 0.5).unwrap();
        assert_eq!(transform(&toks(&["good", "good", "phone"]), &v), vec![2, 1]);
        assert_eq!(transform(&toks(&["meh"]), &v), vec![0, 0]);
    }

    #[test]
    fn triplets_and_legend() {
        let corpus = vec![toks(&["b", "a", "b"]), toks(&["c"])];
        let v = fit_vocabulary(&corpus, 0.5).unwrap();
        let m = DocTermMatrix::build(&corpus, v);
        assert_eq!(m.to_triplets_csv(), "row,col,count\n0,0,1\n0,1,2\n1,2,1\n");
        assert_eq!(m.vocabulary.legend(), "a\nb\nc\n");
    }

    #[test]
    fn hash_is_stable_across_serde() {
        let v = fit_vocabulary(&[toks(&["x", "y"])], 1.0).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: Vocabulary = serde_json::from_str::<Vocabulary>(&json).unwrap().reindex();
        assert_eq!(back.hash(), v.hash());
        assert_eq!(back.position("y"), Some(1));
    }

    fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
        proptest::collection::vec(proptest::collection::vec("[a-f]{1,2}", 0..12), 1..40)
    }

    proptest! {
        #[test]
        fn row_sums_and_determinism(corpus in corpus_strategy(), min_df in 0.01f64..1.0) {
            let v = fit_vocabulary(&corpus, min_df).unwrap();
            prop_assert_eq!(&v, &fit_vocabulary(&corpus, min_df).unwrap());
            prop_assert!(v.terms().windows(2).all(|w| w[0] < w[1]));
            for doc in &corpus {
                let row = v.transform(doc);
                let in_vocab = doc.iter().filter(|t| v.position(t).is_some()).count() as u32;
                prop_assert_eq!(row.iter().sum::<u32>(), in_vocab);
            }
        }

        #[test]
        fn min_df_monotone(corpus in corpus_strategy(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let small = fit_vocabulary(&corpus, hi).unwrap();
            let large = fit_vocabulary(&corpus, lo).unwrap();
            prop_assert!(small.len() <= large.len());
            prop_assert!(small.terms().iter().all(|t| large.position(t).is_some()));
        }
    }
}
