//! Lexicon and gold-pair file formats.
//!
//! Lexicon: `word<TAB>pronunciation` per line. Gold pairs:
//! `name1<TAB>name2<TAB>same|different`. Both accept `#` comments and blank
//! lines.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phoneme::{Inventory, PhonemeSequence};

/// Fifty short English words in the bundled inventory's notation.
pub const TOY_LEXICON: &str = include_str!("../data/toy_lexicon.tsv");
/// Names from the SOUNDEX worked examples.
pub const WITNESS_NAMES: &str = include_str!("../data/names.txt");
/// Same/different judgements over [`WITNESS_NAMES`].
pub const WITNESS_GOLD_PAIRS: &str = include_str!("../data/gold_pairs.tsv");

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub word: String,
    pub pronunciation: PhonemeSequence,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

pub fn parse_lexicon(text: &str, inventory: &Arc<Inventory>) -> Result<Vec<LexiconEntry>> {
    content_lines(text)
        .map(|(line, l)| {
            let (word, pron) = l
                .split_once('\t')
                .ok_or_else(|| Error::parse(line, "expected word<TAB>pronunciation"))?;
            let word = word.trim();
            if word.is_empty() {
                return Err(Error::parse(line, "empty word"));
            }
            let pronunciation = PhonemeSequence::parse(pron, inventory)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            Ok(LexiconEntry {
                word: word.to_string(),
                pronunciation,
            })
        })
        .collect()
}

pub fn toy_lexicon() -> Vec<LexiconEntry> {
    parse_lexicon(TOY_LEXICON, &Inventory::english()).expect("bundled lexicon is valid")
}

pub fn lexicon_to_tsv(entries: &[LexiconEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("{}\t{}\n", e.word, e.pronunciation))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldPair {
    pub left: String,
    pub right: String,
    /// Whether the two names should be treated as the same name.
    pub same: bool,
}

pub fn parse_gold_pairs(text: &str) -> Result<Vec<GoldPair>> {
    content_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').map(str::trim).collect();
            let [left, right, label] = cols[..] else {
                return Err(Error::parse(
                    line,
                    "expected name1<TAB>name2<TAB>same|different",
                ));
            };
            let same = match label {
                "same" => true,
                "different" => false,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("label must be same or different, found {other:?}"),
                    ))
                }
            };
            Ok(GoldPair {
                left: left.to_string(),
                right: right.to_string(),
                same,
            })
        })
        .collect()
}
