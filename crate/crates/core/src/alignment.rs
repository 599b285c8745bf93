//! Weighted edit distance between pronunciations of any length.
//!
//! Substituting position `i` of `a` for position `j` of `b` costs the
//! feature distance of the two phonemes, scaled by the same positional
//! multiplier as a template comparison. Deleting from `a` or inserting from
//! `b` costs `indel_cost`, scaled by the multiplier of the consumed
//! position. With equal lengths the all-diagonal alignment therefore costs
//! exactly the template distance.
//!
//! Among equal-cost alignments the traceback prefers a diagonal step, then a
//! deletion, then an insertion.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt::Write as _;
use std::rc::Rc;
use std::sync::{Arc, Weak};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{bundle_distance, WeightProfile};
use crate::lexicon::LexiconEntry;
use crate::phoneme::{Inventory, PhonemeSequence, Segment};

/// One alignment step. Indices are 0-based positions in `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Step {
    /// Identical feature bundles; costs nothing.
    Match {
        i: usize,
        j: usize,
    },
    Subst {
        i: usize,
        j: usize,
        cost: f64,
    },
    Insert {
        j: usize,
        cost: f64,
    },
    Delete {
        i: usize,
        cost: f64,
    },
}

impl Step {
    pub fn cost(&self) -> f64 {
        match *self {
            Step::Match { .. } => 0.0,
            Step::Subst { cost, .. } | Step::Insert { cost, .. } | Step::Delete { cost, .. } => {
                cost
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub steps: Vec<Step>,
    pub total_cost: f64,
}

impl Alignment {
    /// Two rows of aligned tokens (gaps as `-`) and a row of operation
    /// marks: `=` match, `*` substitution, `+` insertion, `-` deletion.
    pub fn render(&self, a: &PhonemeSequence, b: &PhonemeSequence) -> String {
        let mut cols: Vec<(String, String, &str)> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            cols.push(match *step {
                Step::Match { i, j } => (a.token(i), b.token(j), "="),
                Step::Subst { i, j, .. } => (a.token(i), b.token(j), "*"),
                Step::Insert { j, .. } => ("-".into(), b.token(j), "+"),
                Step::Delete { i, .. } => (a.token(i), "-".into(), "-"),
            });
        }
        let mut rows = [String::new(), String::new(), String::new()];
        for (k, (top, bottom, op)) in cols.iter().enumerate() {
            let width = top.len().max(bottom.len());
            let sep = if k == 0 { "" } else { " " };
            let _ = write!(rows[0], "{sep}{top:<width$}");
            let _ = write!(rows[1], "{sep}{bottom:<width$}");
            let _ = write!(rows[2], "{sep}{op:<width$}");
        }
        rows.iter()
            .map(|r| r.trim_end().to_string() + "\n")
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Checks that the steps walk both sequences in order and completely.
    pub fn is_complete_for(&self, a_len: usize, b_len: usize) -> bool {
        let (mut i, mut j) = (0, 0);
        for step in &self.steps {
            match *step {
                Step::Match { i: si, j: sj } | Step::Subst { i: si, j: sj, .. } => {
                    if si != i || sj != j {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
                Step::Insert { j: sj, .. } => {
                    if sj != j {
                        return false;
                    }
                    j += 1;
                }
                Step::Delete { i: si, .. } => {
                    if si != i {
                        return false;
                    }
                    i += 1;
                }
            }
        }
        i == a_len && j == b_len
    }
}

/// Feature distances between all phonemes of one inventory under one weight
/// profile, kept per thread so repeated comparisons skip the feature walk.
/// The `Weak` pins the inventory's allocation, so pointer equality cannot
/// match a different inventory.
struct DistanceCache {
    inventory: Weak<Inventory>,
    weights: WeightProfile,
    distances: Rc<[f64]>,
}

thread_local! {
    static DISTANCES: RefCell<Option<DistanceCache>> = const { RefCell::new(None) };
}

fn distance_matrix(inventory: &Arc<Inventory>, w: &WeightProfile) -> Rc<[f64]> {
    DISTANCES.with(|cell| {
        let mut cache = cell.borrow_mut();
        if let Some(c) = cache.as_ref() {
            if c.inventory.as_ptr() == Arc::as_ptr(inventory) && c.weights == *w {
                return c.distances.clone();
            }
        }
        let ps = inventory.phonemes();
        let distances: Rc<[f64]> = ps
            .iter()
            .flat_map(|p| {
                ps.iter()
                    .map(move |q| bundle_distance(&p.features, &q.features, w))
            })
            .collect();
        *cache = Some(DistanceCache {
            inventory: Arc::downgrade(inventory),
            weights: *w,
            distances: distances.clone(),
        });
        distances
    })
}

struct Scorer<'a> {
    distances: &'a [f64],
    size: usize,
    weights: &'a WeightProfile,
}

impl Scorer<'_> {
    /// Onset multiplier if either side is an onset, stress multiplier if
    /// either is stressed.
    fn substitution(&self, p: &Segment, q: &Segment) -> f64 {
        let d = self.distances[p.phoneme * self.size + q.phoneme];
        if p.onset | q.onset | p.stressed | q.stressed {
            self.weights
                .position_multiplier(p.onset || q.onset, p.stressed || q.stressed)
                * d
        } else {
            d
        }
    }

    /// Cost of deleting `p` (or inserting it from the other side).
    fn indel(&self, p: &Segment) -> f64 {
        if p.onset | p.stressed {
            self.weights.indel_cost * self.weights.position_multiplier(p.onset, p.stressed)
        } else {
            self.weights.indel_cost
        }
    }
}

/// Fills `table`, row-major with `b.len() + 1` columns.
fn fill(a: &[Segment], b: &[Segment], scorer: &Scorer, table: &mut [f64]) {
    let cols = b.len() + 1;
    table[0] = 0.0;
    for (j, q) in b.iter().enumerate() {
        table[j + 1] = table[j] + scorer.indel(q);
    }
    for (i, p) in a.iter().enumerate() {
        let (prev, row) = (i * cols, (i + 1) * cols);
        let del_cost = scorer.indel(p);
        table[row] = table[prev] + del_cost;
        for (j, q) in b.iter().enumerate() {
            let diag = table[prev + j] + scorer.substitution(p, q);
            let del = table[prev + j + 1] + del_cost;
            let ins = table[row + j] + scorer.indel(q);
            table[row + j + 1] = diag.min(del).min(ins);
        }
    }
}

/// Tables up to this many cells live on the stack.
const STACK_CELLS: usize = 64;

/// Minimum-cost alignment of two pronunciations.
pub fn word_distance(
    a: &PhonemeSequence,
    b: &PhonemeSequence,
    w: &WeightProfile,
) -> Result<(f64, Alignment)> {
    if !a.same_inventory(b) {
        return Err(Error::MixedInventory);
    }
    let (pa, pb) = (a.segments(), b.segments());
    let distances = distance_matrix(a.inventory(), w);
    let scorer = Scorer {
        distances: &distances,
        size: a.inventory().len(),
        weights: w,
    };
    let cells = table_cells(a.len(), b.len());
    let mut stack = [0.0; STACK_CELLS];
    let mut heap = Vec::new();
    let table: &mut [f64] = if cells <= STACK_CELLS {
        &mut stack[..cells]
    } else {
        heap.resize(cells, 0.0);
        &mut heap
    };
    fill(pa, pb, &scorer, table);
    let cols = b.len() + 1;
    let at = |i: usize, j: usize| table[i * cols + j];
    let total = at(a.len(), b.len());

    // Walk back through whichever predecessor produced each cell, trying
    // them in tie-break order.
    let mut steps = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 || j > 0 {
        let here = at(i, j);
        if i > 0 && j > 0 && at(i - 1, j - 1) + scorer.substitution(&pa[i - 1], &pb[j - 1]) == here
        {
            i -= 1;
            j -= 1;
            steps.push(if a.features(i) == b.features(j) {
                Step::Match { i, j }
            } else {
                Step::Subst {
                    i,
                    j,
                    cost: scorer.substitution(&pa[i], &pb[j]),
                }
            });
        } else if i > 0 && at(i - 1, j) + scorer.indel(&pa[i - 1]) == here {
            i -= 1;
            steps.push(Step::Delete {
                i,
                cost: scorer.indel(&pa[i]),
            });
        } else {
            j -= 1;
            steps.push(Step::Insert {
                j,
                cost: scorer.indel(&pb[j]),
            });
        }
    }
    steps.reverse();
    Ok((
        total,
        Alignment {
            steps,
            total_cost: total,
        },
    ))
}

/// Number of table cells evaluated for inputs of the given lengths.
pub fn table_cells(a_len: usize, b_len: usize) -> usize {
    (a_len + 1) * (b_len + 1)
}

/// Distance divided by the longer length; 0 for two empty sequences.
pub fn normalized(distance: f64, a_len: usize, b_len: usize) -> f64 {
    match a_len.max(b_len) {
        0 => 0.0,
        n => distance / n as f64,
    }
}

/// Neighbour found by [`knn`].
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor<'a> {
    pub entry: &'a LexiconEntry,
    pub distance: f64,
}

/// The `k` lexicon entries closest to `query`, ascending by distance; ties
/// are broken by the entries' phoneme symbols, then by word.
pub fn knn<'a>(
    query: &PhonemeSequence,
    lexicon: &'a [LexiconEntry],
    k: usize,
    w: &WeightProfile,
) -> Result<Vec<Neighbor<'a>>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let distances: Vec<f64> = lexicon
        .par_iter()
        .map(|e| word_distance(query, &e.pronunciation, w).map(|(d, _)| d))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..lexicon.len()).collect();
    order.sort_by(|&x, &y| {
        distances[x]
            .partial_cmp(&distances[y])
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                lexicon[x]
                    .pronunciation
                    .symbols()
                    .cmp(&lexicon[y].pronunciation.symbols())
            })
            .then_with(|| lexicon[x].word.cmp(&lexicon[y].word))
    });
    Ok(order
        .into_iter()
        .take(k)
        .map(|i| Neighbor {
            entry: &lexicon[i],
            distance: distances[i],
        })
        .collect())
}
