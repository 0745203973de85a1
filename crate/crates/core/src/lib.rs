//! Bilingual lexicon induction from monolingual corpora.
//!
//! The pipeline: normalize raw text into token streams, train monolingual
//! embeddings with hierarchical softmax, fit a linear map between the two
//! embedding spaces from a small seed dictionary, then translate by mapping
//! a source vector and ranking target words by cosine. The `baselines`
//! module carries the edit-distance and co-occurrence reference systems,
//! `evaluation` the precision/coverage protocol, and `io` every on-disk
//! format.

pub mod baselines;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod mapping;
pub mod translator;
pub mod vecops;

pub use error::{Error, Result};
