//! Detecting likely-fake crowdsourced images from changes in their metadata.
//!
//! A candidate record is compared with its original along three channels
//! (where, when, what), the normalized change is classified to the nearest
//! intention plane, and the intention is translated into a fakeness verdict
//! for a particular context.

pub mod attribute;
pub mod bundle;
pub mod delta;
pub mod eval;
mod error;
pub mod fakeness;
pub mod intention;
pub mod linalg;
pub mod lsa;
pub mod regression;

pub use attribute::{ImageServiceRecord, ServicePair};
pub use bundle::{ModelBundle, MODEL_VERSION};
pub use delta::{DeltaVector, NormalizedDelta};
pub use error::{Error, Result};
pub use fakeness::{ContextProfile, FakenessReport, Verdict};
pub use intention::{IntentionLevel, IntentionModel, IntentionPlane, Strategy};
pub use lsa::SemanticSpace;
