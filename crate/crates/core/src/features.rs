//! Feature-weighted phoneme distance and fixed-length template comparison.
//!
//! Two phonemes are compared feature by feature; every feature whose values
//! differ contributes its weight. Multi-valued features (place, manner,
//! height) count a full mismatch for any difference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phoneme::{FeatureBundle, Phoneme, PhonemeSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    Place,
    Manner,
    Height,
    Voicing,
    Syllabic,
    Nasal,
    Lateral,
    Rounded,
    Sibilant,
}

impl Feature {
    pub const ALL: [Feature; 9] = [
        Feature::Place,
        Feature::Manner,
        Feature::Height,
        Feature::Voicing,
        Feature::Syllabic,
        Feature::Nasal,
        Feature::Lateral,
        Feature::Rounded,
        Feature::Sibilant,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Feature::Place => "place",
            Feature::Manner => "manner",
            Feature::Height => "height",
            Feature::Voicing => "voicing",
            Feature::Syllabic => "syllabic",
            Feature::Nasal => "nasal",
            Feature::Lateral => "lateral",
            Feature::Rounded => "rounded",
            Feature::Sibilant => "sibilant",
        }
    }

    pub fn differs(self, a: &FeatureBundle, b: &FeatureBundle) -> bool {
        match self {
            Feature::Place => a.place != b.place,
            Feature::Manner => a.manner != b.manner,
            Feature::Height => a.height != b.height,
            Feature::Voicing => a.voiced != b.voiced,
            Feature::Syllabic => a.syllabic != b.syllabic,
            Feature::Nasal => a.nasal != b.nasal,
            Feature::Lateral => a.lateral != b.lateral,
            Feature::Rounded => a.rounded != b.rounded,
            Feature::Sibilant => a.sibilant != b.sibilant,
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Per-feature weights, the alignment indel cost and the positional
/// multipliers for onsets and stressed syllables.
///
/// Defaults: place 7, manner 6, height 5, voicing 4, syllabic, nasal,
/// lateral and rounded 1, sibilant 0; indel cost 8; both multipliers 1
/// (positional reweighting off).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub place: f64,
    pub manner: f64,
    pub height: f64,
    pub voicing: f64,
    pub syllabic: f64,
    pub nasal: f64,
    pub lateral: f64,
    pub rounded: f64,
    pub sibilant: f64,
    pub indel_cost: f64,
    pub onset_multiplier: f64,
    pub stress_multiplier: f64,
}

impl Default for WeightProfile {
    fn default() -> Self {
        WeightProfile {
            place: 7.0,
            manner: 6.0,
            height: 5.0,
            voicing: 4.0,
            syllabic: 1.0,
            nasal: 1.0,
            lateral: 1.0,
            rounded: 1.0,
            sibilant: 0.0,
            indel_cost: 8.0,
            onset_multiplier: 1.0,
            stress_multiplier: 1.0,
        }
    }
}

const KEYS: [&str; 12] = [
    "place",
    "manner",
    "height",
    "voicing",
    "syllabic",
    "nasal",
    "lateral",
    "rounded",
    "sibilant",
    "indel_cost",
    "onset_multiplier",
    "stress_multiplier",
];

impl WeightProfile {
    pub fn weight(&self, feature: Feature) -> f64 {
        match feature {
            Feature::Place => self.place,
            Feature::Manner => self.manner,
            Feature::Height => self.height,
            Feature::Voicing => self.voicing,
            Feature::Syllabic => self.syllabic,
            Feature::Nasal => self.nasal,
            Feature::Lateral => self.lateral,
            Feature::Rounded => self.rounded,
            Feature::Sibilant => self.sibilant,
        }
    }

    pub fn set_weight(&mut self, feature: Feature, value: f64) {
        *self
            .slot_mut(feature.key())
            .expect("feature keys are valid") = value;
    }

    fn slot_mut(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "place" => &mut self.place,
            "manner" => &mut self.manner,
            "height" => &mut self.height,
            "voicing" => &mut self.voicing,
            "syllabic" => &mut self.syllabic,
            "nasal" => &mut self.nasal,
            "lateral" => &mut self.lateral,
            "rounded" => &mut self.rounded,
            "sibilant" => &mut self.sibilant,
            "indel_cost" => &mut self.indel_cost,
            "onset_multiplier" => &mut self.onset_multiplier,
            "stress_multiplier" => &mut self.stress_multiplier,
            _ => return None,
        })
    }

    fn slot(&self, key: &str) -> f64 {
        let mut copy = *self;
        *copy.slot_mut(key).expect("known key")
    }

    pub fn validate(&self) -> Result<()> {
        for key in KEYS {
            let v = self.slot(key);
            if !v.is_finite() {
                return Err(Error::InvalidWeights(format!("{key} must be finite")));
            }
            let multiplier = key.ends_with("_multiplier");
            if multiplier && v <= 0.0 {
                return Err(Error::InvalidWeights(format!("{key} must be positive")));
            }
            if !multiplier && v < 0.0 {
                return Err(Error::InvalidWeights(format!("{key} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Parses `key=value` lines. Missing keys keep their defaults, unknown
    /// keys are errors, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut profile = WeightProfile::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected key=value"))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad number {:?}", value.trim())))?;
            let slot = profile
                .slot_mut(key)
                .ok_or_else(|| Error::UnknownWeightKey {
                    key: key.to_string(),
                    line: line_no,
                })?;
            *slot = value;
        }
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_text(&self) -> String {
        KEYS.iter()
            .map(|k| format!("{k}={}\n", self.slot(k)))
            .collect()
    }

    /// Multiplier for one position given its onset and stress flags.
    pub fn position_multiplier(&self, onset: bool, stressed: bool) -> f64 {
        let mut m = 1.0;
        if onset {
            m *= self.onset_multiplier;
        }
        if stressed {
            m *= self.stress_multiplier;
        }
        m
    }
}

pub fn bundle_distance(a: &FeatureBundle, b: &FeatureBundle, w: &WeightProfile) -> f64 {
    // Written out field by field: this sits in the alignment inner loop.
    let term = |differs: bool, weight: f64| f64::from(u8::from(differs)) * weight;
    term(a.place != b.place, w.place)
        + term(a.manner != b.manner, w.manner)
        + term(a.height != b.height, w.height)
        + term(a.voiced != b.voiced, w.voicing)
        + term(a.syllabic != b.syllabic, w.syllabic)
        + term(a.nasal != b.nasal, w.nasal)
        + term(a.lateral != b.lateral, w.lateral)
        + term(a.rounded != b.rounded, w.rounded)
        + term(a.sibilant != b.sibilant, w.sibilant)
}

/// Weighted count of differing features.
pub fn phoneme_distance(a: &Phoneme, b: &Phoneme, w: &WeightProfile) -> f64 {
    bundle_distance(&a.features, &b.features, w)
}

/// Multiplier applied when position `i` of `a` is compared with position
/// `j` of `b`: onset if either side is an onset, stress if either is
/// stressed.
pub(crate) fn pair_multiplier(
    a: &PhonemeSequence,
    i: usize,
    b: &PhonemeSequence,
    j: usize,
    w: &WeightProfile,
) -> f64 {
    let (sa, sb) = (a.segments()[i], b.segments()[j]);
    w.position_multiplier(sa.onset || sb.onset, sa.stressed || sb.stressed)
}

/// Position-by-position distance of two equal-length sequences.
pub fn template_distance(
    a: &PhonemeSequence,
    b: &PhonemeSequence,
    w: &WeightProfile,
) -> Result<f64> {
    if !a.same_inventory(b) {
        return Err(Error::MixedInventory);
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok((0..a.len())
        .map(|i| pair_multiplier(a, i, b, i, w) * bundle_distance(a.features(i), b.features(i), w))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phoneme::Inventory;

    fn d(a: &str, b: &str) -> f64 {
        let inv = Inventory::english();
        phoneme_distance(
            inv.get(a).unwrap(),
            inv.get(b).unwrap(),
            &WeightProfile::default(),
        )
    }

    fn seq(text: &str) -> PhonemeSequence {
        PhonemeSequence::parse(text, &Inventory::english()).unwrap()
    }

    #[test]
    fn published_sample_pairs() {
        assert_eq!(d("D", "G"), 7.0);
        assert_eq!(d("Z", "S"), 4.0);
        assert_eq!(d("L", "R"), 1.0);
        assert_eq!(d("N", "D"), 1.0);
        assert_eq!(d("IY", "EH"), 5.0);
    }

    #[test]
    fn lateral_versus_stop_sums_features() {
        // manner 6 + voicing 4 + lateral 1
        assert_eq!(d("L", "T"), 11.0);
    }

    #[test]
    fn sibilant_weight_is_unused() {
        // only place and sibilant differ; sibilant has weight 0
        assert_eq!(d("S", "F"), 7.0);
    }

    #[test]
    fn identity_over_inventory() {
        let inv = Inventory::english();
        for p in inv.phonemes() {
            assert_eq!(phoneme_distance(p, p, &WeightProfile::default()), 0.0);
        }
    }

    #[test]
    fn place_versus_voicing_ordering() {
        assert_eq!(d("B", "G"), 7.0);
        assert_eq!(d("B", "P"), 4.0);
    }

    #[test]
    fn template_examples() {
        let w = WeightProfile::default();
        assert_eq!(
            template_distance(&seq("B AH T"), &seq("G AH T"), &w).unwrap(),
            7.0
        );
        assert_eq!(
            template_distance(&seq("B AH T"), &seq("P AH T"), &w).unwrap(),
            4.0
        );
        assert_eq!(
            template_distance(&seq("B AH T"), &seq("B AH T"), &w).unwrap(),
            0.0
        );
        assert_eq!(
            template_distance(&seq("B EH T"), &seq("B EH T S"), &w),
            Err(Error::LengthMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn template_positional_reweighting() {
        let w = WeightProfile {
            onset_multiplier: 2.0,
            stress_multiplier: 3.0,
            ..Default::default()
        };
        // onset on either side doubles the initial comparison
        assert_eq!(
            template_distance(&seq("+B AH T"), &seq("G AH T"), &w).unwrap(),
            14.0
        );
        assert_eq!(
            template_distance(&seq("B AH T"), &seq("+G AH T"), &w).unwrap(),
            14.0
        );
        // stressed vowel: IY vs EH height 5, times 3
        assert_eq!(
            template_distance(&seq("B 'IY T"), &seq("B EH T"), &w).unwrap(),
            15.0
        );
        // unmarked positions unaffected
        assert_eq!(
            template_distance(&seq("+B AH T"), &seq("+B AH D"), &w).unwrap(),
            4.0
        );
    }

    #[test]
    fn template_rejects_mixed_inventories() {
        let other = std::sync::Arc::new(Inventory::english().subset(&["B", "AH", "T"]).unwrap());
        let a = PhonemeSequence::parse("B AH T", &other).unwrap();
        assert_eq!(
            template_distance(&a, &seq("B AH T"), &WeightProfile::default()),
            Err(Error::MixedInventory)
        );
    }

    #[test]
    fn weight_file_parsing() {
        let w = WeightProfile::parse("# weights\nplace=3\n indel_cost = 2.5 \n\n").unwrap();
        assert_eq!(w.place, 3.0);
        assert_eq!(w.indel_cost, 2.5);
        assert_eq!(w.manner, 6.0);
        assert_eq!(WeightProfile::parse(&w.to_text()).unwrap(), w);

        assert_eq!(
            WeightProfile::parse("place=1\nloudness=2\n"),
            Err(Error::UnknownWeightKey {
                key: "loudness".into(),
                line: 2
            })
        );
        assert!(matches!(
            WeightProfile::parse("place"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            WeightProfile::parse("place=-1"),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            WeightProfile::parse("onset_multiplier=0"),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            WeightProfile::parse("place=x"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn exhaustive_metric_properties() {
        let inv = Inventory::english();
        let w = WeightProfile::default();
        let ps = inv.phonemes();
        for a in ps {
            for b in ps {
                let ab = phoneme_distance(a, b, &w);
                assert_eq!(ab, phoneme_distance(b, a, &w));
                assert!(ab >= 0.0);
                assert_eq!(
                    ab == 0.0,
                    a.features == b.features,
                    "{} {}",
                    a.symbol,
                    b.symbol
                );
                for c in ps {
                    assert!(
                        phoneme_distance(a, c, &w) <= ab + phoneme_distance(b, c, &w),
                        "{} {} {}",
                        a.symbol,
                        b.symbol,
                        c.symbol
                    );
                }
            }
        }
    }

    #[test]
    fn raising_a_weight_never_lowers_a_distance() {
        let inv = Inventory::english();
        let base = WeightProfile::default();
        for f in Feature::ALL {
            let mut raised = base;
            raised.set_weight(f, base.weight(f) + 2.5);
            for a in inv.phonemes() {
                for b in inv.phonemes() {
                    assert!(phoneme_distance(a, b, &raised) >= phoneme_distance(a, b, &base));
                }
            }
        }
    }
}
