//! Personalized complex word identification.
//!
//! A pool of words is clustered once, then each annotator gets a personal
//! logistic model trained through a short active learning session: every
//! answer is propagated to nearby words, the model is refit, and the most
//! uncertain word is asked next.

pub mod clustering;
pub mod dataset;
pub mod downstream;
pub mod label;
pub mod lexicon;
pub mod metrics;
pub mod model;
pub mod profile;
pub mod session;
pub mod simulation;
pub mod synthetic;

pub use label::Label;
