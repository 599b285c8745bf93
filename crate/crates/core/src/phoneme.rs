//! Phoneme inventories, articulatory feature bundles and the phoneme-string
//! notation used throughout the crate.
//!
//! An [`Inventory`] is loaded from a tab-separated table with one row per
//! phoneme:
//!
//! ```text
//! symbol  place  manner  height  voicing  syllabic  nasal  lateral  rounded  sibilant
//! ```
//!
//! Booleans are `0`/`1`, `-` marks an absent place (vowels) or height
//! (consonants) and `#` starts a comment line. A General American English
//! inventory ships in `data/english.tsv` and is available through
//! [`Inventory::english`].
//!
//! Sequences are written as space-separated symbols. A `'` prefix marks a
//! stressed syllabic segment, a `+` prefix an onset consonant:
//! `"+B 'EH T"`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ENGLISH_TSV: &str = include_str!("../data/english.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    Bilabial,
    Labiodental,
    Dental,
    Alveolar,
    Postalveolar,
    Palatal,
    Velar,
    Glottal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manner {
    Stop,
    Fricative,
    Affricate,
    Approximant,
    Vowel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Height {
    High,
    MidHigh,
    Mid,
    MidLow,
    Low,
}

macro_rules! keyword_enum {
    ($ty:ty { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$(<$ty>::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(<$ty>::$variant => $name),+
                }
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($name => Ok(<$ty>::$variant),)+
                    other => Err(format!(
                        "unknown {} {:?}",
                        stringify!($ty).to_lowercase(),
                        other
                    )),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Place {
    Bilabial => "bilabial",
    Labiodental => "labiodental",
    Dental => "dental",
    Alveolar => "alveolar",
    Postalveolar => "postalveolar",
    Palatal => "palatal",
    Velar => "velar",
    Glottal => "glottal",
});

keyword_enum!(Manner {
    Stop => "stop",
    Fricative => "fricative",
    Affricate => "affricate",
    Approximant => "approximant",
    Vowel => "vowel",
});

keyword_enum!(Height {
    High => "high",
    MidHigh => "mid-high",
    Mid => "mid",
    MidLow => "mid-low",
    Low => "low",
});

/// Articulatory description of one segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeatureBundle {
    /// `None` for vowels.
    pub place: Option<Place>,
    pub manner: Manner,
    /// `None` for consonants.
    pub height: Option<Height>,
    pub voiced: bool,
    pub syllabic: bool,
    pub nasal: bool,
    pub lateral: bool,
    pub rounded: bool,
    pub sibilant: bool,
}

impl FeatureBundle {
    /// Checks the consonant/vowel coherence rules. Nasality is only allowed
    /// on stops, so /n/ and /d/ differ in the nasal feature alone.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let vowel = self.manner == Manner::Vowel;
        if vowel != self.syllabic {
            return Err("manner=vowel must coincide with syllabic=1".into());
        }
        if vowel != self.height.is_some() {
            return Err(if vowel {
                "vowels need a height".into()
            } else {
                "consonants cannot have a height".into()
            });
        }
        if vowel && self.place.is_some() {
            return Err("vowels cannot have a place of articulation".into());
        }
        if !vowel && self.place.is_none() {
            return Err("consonants need a place of articulation".into());
        }
        if self.nasal && self.manner != Manner::Stop {
            return Err("nasal segments must have manner=stop".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phoneme {
    pub symbol: String,
    pub features: FeatureBundle,
}

impl Phoneme {
    pub fn is_syllabic(&self) -> bool {
        self.features.syllabic
    }
}

/// Ordered set of phonemes keyed by symbol.
#[derive(Debug, Clone)]
pub struct Inventory {
    phonemes: Vec<Phoneme>,
    index: HashMap<String, usize>,
}

impl PartialEq for Inventory {
    fn eq(&self, other: &Self) -> bool {
        self.phonemes == other.phonemes
    }
}

impl Eq for Inventory {}

impl Inventory {
    /// Builds a validated inventory.
    pub fn from_phonemes(phonemes: Vec<Phoneme>) -> Result<Self> {
        if phonemes.is_empty() {
            return Err(Error::EmptyInventory);
        }
        let mut index = HashMap::with_capacity(phonemes.len());
        for (i, p) in phonemes.iter().enumerate() {
            validate_symbol(&p.symbol).map_err(|reason| Error::InvalidFeatures {
                symbol: p.symbol.clone(),
                reason,
            })?;
            p.features
                .validate()
                .map_err(|reason| Error::InvalidFeatures {
                    symbol: p.symbol.clone(),
                    reason,
                })?;
            if index.insert(p.symbol.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol {
                    symbol: p.symbol.clone(),
                    line: i + 1,
                });
            }
        }
        Ok(Inventory { phonemes, index })
    }

    /// Parses the tab-separated inventory table.
    pub fn parse(source: &str) -> Result<Self> {
        let mut phonemes = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let phoneme = parse_row(line).map_err(|m| Error::parse(line_no, m))?;
            if seen.insert(phoneme.symbol.clone(), line_no).is_some() {
                return Err(Error::DuplicateSymbol {
                    symbol: phoneme.symbol,
                    line: line_no,
                });
            }
            phoneme
                .features
                .validate()
                .map_err(|reason| Error::InvalidFeatures {
                    symbol: phoneme.symbol.clone(),
                    reason: format!("line {line_no}: {reason}"),
                })?;
            phonemes.push(phoneme);
        }
        Self::from_phonemes(phonemes)
    }

    /// The bundled General American English inventory.
    pub fn english() -> Arc<Inventory> {
        static ENGLISH: OnceLock<Arc<Inventory>> = OnceLock::new();
        ENGLISH
            .get_or_init(|| {
                Arc::new(Inventory::parse(ENGLISH_TSV).expect("bundled inventory is valid"))
            })
            .clone()
    }

    /// Serializes back to the table format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.phonemes {
            let f = &p.features;
            let b = |v: bool| if v { "1" } else { "0" };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                p.symbol,
                f.place.map_or("-", Place::as_str),
                f.manner,
                f.height.map_or("-", Height::as_str),
                b(f.voiced),
                b(f.syllabic),
                b(f.nasal),
                b(f.lateral),
                b(f.rounded),
                b(f.sibilant),
            ));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }

    pub fn phonemes(&self) -> &[Phoneme] {
        &self.phonemes
    }

    pub fn get(&self, symbol: &str) -> Option<&Phoneme> {
        self.index.get(symbol).map(|&i| &self.phonemes[i])
    }

    pub fn position(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn phoneme(&self, index: usize) -> &Phoneme {
        &self.phonemes[index]
    }

    /// Restricts the inventory to the given symbols, in the given order.
    pub fn subset(&self, symbols: &[&str]) -> Result<Inventory> {
        let phonemes = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| {
                self.get(s).cloned().ok_or_else(|| Error::UnknownSymbol {
                    token: s.to_string(),
                    position: i + 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Inventory::from_phonemes(phonemes)
    }
}

fn validate_symbol(symbol: &str) -> std::result::Result<(), String> {
    if symbol.is_empty() {
        return Err("empty symbol".into());
    }
    if symbol.starts_with(['\'', '+', '#', '-']) || symbol.chars().any(char::is_whitespace) {
        return Err(format!(
            "symbol {symbol:?} clashes with the sequence notation"
        ));
    }
    Ok(())
}

fn parse_row(line: &str) -> std::result::Result<Phoneme, String> {
    let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
    if cols.len() != 10 {
        return Err(format!(
            "expected 10 tab-separated columns, found {}",
            cols.len()
        ));
    }
    let symbol = cols[0].to_string();
    validate_symbol(&symbol)?;
    let place = match cols[1] {
        "-" => None,
        s => Some(s.parse::<Place>()?),
    };
    let manner = cols[2].parse::<Manner>()?;
    let height = match cols[3] {
        "-" => None,
        s => Some(s.parse::<Height>()?),
    };
    let flag = |i: usize, name: &str| match cols[i] {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("{name} must be 0 or 1, found {other:?}")),
    };
    Ok(Phoneme {
        symbol,
        features: FeatureBundle {
            place,
            manner,
            height,
            voiced: flag(4, "voicing")?,
            syllabic: flag(5, "syllabic")?,
            nasal: flag(6, "nasal")?,
            lateral: flag(7, "lateral")?,
            rounded: flag(8, "rounded")?,
            sibilant: flag(9, "sibilant")?,
        },
    })
}

/// One position of a [`PhonemeSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    /// Index into the owning inventory.
    pub phoneme: usize,
    pub stressed: bool,
    pub onset: bool,
}

/// A pronunciation: phonemes from one inventory plus stress and onset marks.
#[derive(Clone)]
pub struct PhonemeSequence {
    inventory: Arc<Inventory>,
    segments: Vec<Segment>,
}

impl PhonemeSequence {
    pub fn parse(text: &str, inventory: &Arc<Inventory>) -> Result<Self> {
        let mut segments = Vec::new();
        for (i, token) in text.split_whitespace().enumerate() {
            let position = i + 1;
            let mut rest = token;
            let (mut stressed, mut onset) = (false, false);
            loop {
                if let Some(r) = rest.strip_prefix('\'') {
                    if stressed {
                        return Err(marker_error(token, position, "repeated stress mark"));
                    }
                    stressed = true;
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('+') {
                    if onset {
                        return Err(marker_error(token, position, "repeated onset mark"));
                    }
                    onset = true;
                    rest = r;
                } else {
                    break;
                }
            }
            let index = inventory
                .position(rest)
                .ok_or_else(|| Error::UnknownSymbol {
                    token: rest.to_string(),
                    position,
                })?;
            let syllabic = inventory.phoneme(index).is_syllabic();
            if stressed && !syllabic {
                return Err(marker_error(
                    token,
                    position,
                    "stress on a non-syllabic segment",
                ));
            }
            if onset && syllabic {
                return Err(marker_error(
                    token,
                    position,
                    "onset mark on a syllabic segment",
                ));
            }
            segments.push(Segment {
                phoneme: index,
                stressed,
                onset,
            });
        }
        Ok(PhonemeSequence {
            inventory: inventory.clone(),
            segments,
        })
    }

    /// Builds an unmarked sequence from inventory indices.
    pub fn from_indices(inventory: &Arc<Inventory>, indices: &[usize]) -> Self {
        let segments = indices
            .iter()
            .map(|&phoneme| {
                assert!(phoneme < inventory.len(), "phoneme index out of range");
                Segment {
                    phoneme,
                    stressed: false,
                    onset: false,
                }
            })
            .collect();
        PhonemeSequence {
            inventory: inventory.clone(),
            segments,
        }
    }

    pub fn inventory(&self) -> &Arc<Inventory> {
        &self.inventory
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn phoneme(&self, i: usize) -> &Phoneme {
        self.inventory.phoneme(self.segments[i].phoneme)
    }

    pub fn features(&self, i: usize) -> &FeatureBundle {
        &self.phoneme(i).features
    }

    pub fn symbols(&self) -> Vec<&str> {
        self.segments
            .iter()
            .map(|s| self.inventory.phoneme(s.phoneme).symbol.as_str())
            .collect()
    }

    /// Canonical token for position `i`, including markers.
    pub fn token(&self, i: usize) -> String {
        let s = &self.segments[i];
        let mut out = String::new();
        if s.onset {
            out.push('+');
        }
        if s.stressed {
            out.push('\'');
        }
        out.push_str(&self.phoneme(i).symbol);
        out
    }

    /// True when both sequences have the same length and identical feature
    /// bundles position by position.
    pub fn same_bundles(&self, other: &PhonemeSequence) -> bool {
        self.len() == other.len() && (0..self.len()).all(|i| self.features(i) == other.features(i))
    }

    pub fn same_inventory(&self, other: &PhonemeSequence) -> bool {
        Arc::ptr_eq(&self.inventory, &other.inventory) || self.inventory == other.inventory
    }
}

fn marker_error(token: &str, position: usize, reason: &str) -> Error {
    Error::InvalidMarker {
        token: token.to_string(),
        position,
        reason: reason.to_string(),
    }
}

impl PartialEq for PhonemeSequence {
    fn eq(&self, other: &Self) -> bool {
        self.segments == other.segments && self.same_inventory(other)
    }
}

impl fmt::Display for PhonemeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.token(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PhonemeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhonemeSequence({:?})", self.to_string())
    }
}
