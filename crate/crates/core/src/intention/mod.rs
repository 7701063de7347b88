//! Intention estimation: regression over normalized deltas, one plane per
//! intention level, and nearest-plane classification.

mod assign;
mod kmeans;
mod level;
mod model;
mod plane;
mod theta;

pub use assign::{
    assign_points, centroid, min_pairwise_separation, nearest_plane, plane_separation, Assignment,
    ClusteredAssigner, HeuristicIndex, Strategy,
};
pub use kmeans::{default_k, kmeans, Clustering, KMeansConfig};
pub use level::{evenly_spaced, IntentionLevel};
pub use model::{
    apply_weights, estimate_intention, pair_deltas, pair_records, ChannelPolicy, ChannelSpaces, ChannelWeights, Embedding,
    IntentionEstimate, IntentionModel, TrainConfig, WeightApplication,
};
pub use plane::{fit_plane, fit_planes, plane_area, point_plane_distance, IntentionPlane, ModificationPoint, PlaneFit};
pub use theta::{fit_theta, Theta, ThetaFit, MIN_SAMPLES_PER_LEVEL};
