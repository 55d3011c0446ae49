//! Instance creation: dataset ingestion and sampling, seeded random
//! instances, and the hardness-gadget constructions.

pub mod dataset;
pub mod gadgets;
pub mod random;
pub mod rng;

pub use dataset::{
    load_dataset, load_dataset_files, sample_instance, DatasetError, SampleSpec, SimilarityDataset,
};
pub use gadgets::{
    gen_2in4_gadget, gen_mis_gadget, gen_sat_gadget, pad_min_degrees, qualifications_to_weights,
    ColoredGraph, FourSatFormula, GadgetError, ThreeSatFormula,
};
pub use random::{gen_random, RandomControls, RandomGenError};
pub use rng::{derive_seed, SplitMix64};
