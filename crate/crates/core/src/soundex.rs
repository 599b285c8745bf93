//! Russell/SOUNDEX name coding.
//!
//! The first letter of a name is kept; every later letter maps to a digit
//! 1-6 or is ignored. Adjacent letters with the same digit count once, and
//! this applies to the initial letter too ("Lloyd" is L300). Ignored letters
//! emit nothing but break a run, so the second S in "Sasaki" codes again.
//! The first three digits are kept and the code is padded with zeros.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letter-to-digit table. `None` entries are ignored letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundexTable {
    codes: [Option<u8>; 26],
}

impl SoundexTable {
    /// B,P,F,V=1; C,S,G,J,K,Q,X,Z=2; D,T=3; L=4; M,N=5; R=6; the rest ignored.
    pub fn russell() -> Self {
        Self::from_groups(&[
            (1, "BPFV"),
            (2, "CSGJKQXZ"),
            (3, "DT"),
            (4, "L"),
            (5, "MN"),
            (6, "R"),
        ])
        .expect("russell table is well formed")
    }

    /// Builds a table from `(digit, letters)` groups; letters not listed are
    /// ignored. Digits must be 1-6 and each letter may appear once.
    pub fn from_groups(groups: &[(u8, &str)]) -> Result<Self> {
        let mut codes = [None; 26];
        for &(digit, letters) in groups {
            if !(1..=6).contains(&digit) {
                return Err(Error::InvalidArgument(format!("digit {digit} outside 1-6")));
            }
            for ch in letters.chars() {
                let idx = letter_index(ch).ok_or_else(|| {
                    Error::InvalidArgument(format!("{ch:?} is not an ASCII letter"))
                })?;
                if codes[idx].replace(digit).is_some() {
                    return Err(Error::InvalidArgument(format!("letter {ch} coded twice")));
                }
            }
        }
        Ok(SoundexTable { codes })
    }

    pub fn digit(&self, letter: char) -> Option<u8> {
        letter_index(letter).and_then(|i| self.codes[i])
    }

    pub fn encode(&self, name: &str) -> Result<SoundexCode> {
        self.encode_counted(name).map(|(code, _)| code)
    }

    /// Encodes and also returns the number of table lookups performed.
    pub(crate) fn encode_counted(&self, name: &str) -> Result<(SoundexCode, usize)> {
        let mut letters = Vec::with_capacity(name.len());
        for ch in name.chars() {
            if ch.is_ascii_alphabetic() {
                letters.push(ch.to_ascii_uppercase());
            } else if ch.is_alphabetic() {
                return Err(Error::NonAsciiLetter {
                    name: name.to_string(),
                    letter: ch,
                });
            }
        }
        let (&initial, rest) = letters.split_first().ok_or_else(|| Error::NoLetters {
            name: name.to_string(),
        })?;

        let mut lookups = 1;
        let mut previous = self.digit(initial);
        let mut digits = [0u8; 3];
        let mut n = 0;
        for &ch in rest {
            if n == digits.len() {
                break;
            }
            lookups += 1;
            let code = self.digit(ch);
            if let Some(d) = code {
                if previous != Some(d) {
                    digits[n] = d;
                    n += 1;
                }
            }
            previous = code;
        }
        Ok((
            SoundexCode {
                initial: initial as u8,
                digits,
            },
            lookups,
        ))
    }
}

impl Default for SoundexTable {
    fn default() -> Self {
        Self::russell()
    }
}

fn letter_index(ch: char) -> Option<usize> {
    ch.is_ascii_alphabetic()
        .then(|| (ch.to_ascii_uppercase() as u8 - b'A') as usize)
}

/// A letter followed by three digits; zeros only as trailing padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SoundexCode {
    initial: u8,
    digits: [u8; 3],
}

impl SoundexCode {
    pub fn initial(&self) -> char {
        self.initial as char
    }

    pub fn digits(&self) -> [u8; 3] {
        self.digits
    }

    /// Whether `s` is a well-formed code.
    pub fn is_well_formed(s: &str) -> bool {
        s.parse::<SoundexCode>().is_ok()
    }
}

impl FromStr for SoundexCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let bad = || Error::InvalidCode(s.to_string());
        if bytes.len() != 4 || !bytes[0].is_ascii_uppercase() {
            return Err(bad());
        }
        let mut digits = [0u8; 3];
        let mut padding = false;
        for (slot, &b) in digits.iter_mut().zip(&bytes[1..]) {
            match b {
                b'0' => padding = true,
                b'1'..=b'6' if !padding => *slot = b - b'0',
                _ => return Err(bad()),
            }
        }
        Ok(SoundexCode {
            initial: bytes[0],
            digits,
        })
    }
}

impl fmt::Display for SoundexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.digits;
        write!(f, "{}{a}{b}{c}", self.initial as char)
    }
}

impl Serialize for SoundexCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SoundexCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Encodes with the Russell table.
pub fn encode(name: &str) -> Result<SoundexCode> {
    SoundexTable::russell().encode(name)
}

/// Number of distinct well-formed codes, counted by enumerating every
/// candidate string `[A-Z][0-6]{3}`.
pub fn code_space_size() -> usize {
    let mut count = 0;
    let mut buf = [0u8; 4];
    for initial in b'A'..=b'Z' {
        buf[0] = initial;
        for a in b'0'..=b'6' {
            for b in b'0'..=b'6' {
                for c in b'0'..=b'6' {
                    buf[1..].copy_from_slice(&[a, b, c]);
                    let s = std::str::from_utf8(&buf).expect("ascii");
                    if SoundexCode::is_well_formed(s) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Names sharing one code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionClass {
    pub code: SoundexCode,
    pub size: usize,
    pub members: Vec<String>,
}

/// Groups names by code, largest classes first (ties by code). Duplicate
/// names count once.
pub fn collisions<S: AsRef<str>>(lexicon: &[S]) -> Result<Vec<CollisionClass>> {
    collisions_with(&SoundexTable::russell(), lexicon)
}

pub fn collisions_with<S: AsRef<str>>(
    table: &SoundexTable,
    lexicon: &[S],
) -> Result<Vec<CollisionClass>> {
    let mut groups: BTreeMap<SoundexCode, Vec<String>> = BTreeMap::new();
    for name in lexicon {
        let name = name.as_ref();
        let code = table.encode(name)?;
        groups.entry(code).or_default().push(name.to_string());
    }
    let mut classes: Vec<CollisionClass> = groups
        .into_iter()
        .map(|(code, mut members)| {
            members.sort();
            members.dedup();
            CollisionClass {
                code,
                size: members.len(),
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| b.size.cmp(&a.size).then(a.code.cmp(&b.code)));
    Ok(classes)
}

/// Renders classes as JSON lines, one object per class.
pub fn collisions_to_jsonl(classes: &[CollisionClass]) -> String {
    classes
        .iter()
        .map(|c| serde_json::to_string(c).expect("serializable") + "\n")
        .collect()
}

/// Parses a name list: one name per line, `#` comments, blank lines skipped.
pub fn parse_name_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
