//! Phonological distance and representation schemes: SOUNDEX name codes,
//! weighted feature distances with word alignment, and autosegmental tiers
//! as finite-state automata, plus a harness that scores each scheme
//! against a common list of desiderata.

pub mod alignment;
pub mod autoseg;
pub mod error;
pub mod features;
pub mod harness;
pub mod lexicon;
pub mod phoneme;
pub mod soundex;

pub use alignment::{knn, word_distance, Alignment, Neighbor, Step};
pub use autoseg::{
    compatible, intersect, intersect_with_budget, AutosegWord, Pinning, TierAutomaton,
};
pub use error::{Error, Result};
pub use features::{bundle_distance, phoneme_distance, template_distance, Feature, WeightProfile};
pub use harness::{compare_schemes, DesiderataReport, Desideratum, HarnessConfig, Verdict};
pub use lexicon::{parse_lexicon, toy_lexicon, GoldPair, LexiconEntry};
pub use phoneme::{FeatureBundle, Height, Inventory, Manner, Phoneme, PhonemeSequence, Place};
pub use soundex::{SoundexCode, SoundexTable};
