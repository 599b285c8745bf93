//! Evaluation of the three representation schemes against a fixed list of
//! desiderata, producing one [`DesiderataReport`] per scheme.
//!
//! Verdicts are computed from the behaviour of each scheme on the supplied
//! lexicon. Invertibility is injectivity of the encoding over the lexicon;
//! distance availability requires the scheme's pairwise comparison to take
//! more than two distinct values (an equivalence test only ever yields
//! "same" or "different"). Efficiency is reported as operation counts over
//! growing inputs and never receives a pass/fail verdict. Speaker
//! independence concerns acoustic input and cannot be checked here.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alignment::{table_cells, word_distance};
use crate::autoseg::{self, AutosegWord, ProfileConfig, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};
use crate::features::{phoneme_distance, WeightProfile};
use crate::lexicon::{parse_gold_pairs, GoldPair, LexiconEntry, WITNESS_GOLD_PAIRS, WITNESS_NAMES};
use crate::phoneme::{FeatureBundle, Inventory, PhonemeSequence};
use crate::soundex::{self, SoundexTable};

pub const SOUNDEX: &str = "soundex";
pub const FEATURE_ALIGNMENT: &str = "feature_metric+alignment";
pub const AUTOSEG: &str = "autoseg_fsa";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Desideratum {
    ContrastAccuracy,
    Reversibility,
    Efficiency,
    SpeakerIndependence,
    Modularity,
    Decomposability,
    DistanceMetric,
}

impl Desideratum {
    pub const ALL: [Desideratum; 7] = [
        Desideratum::ContrastAccuracy,
        Desideratum::Reversibility,
        Desideratum::Efficiency,
        Desideratum::SpeakerIndependence,
        Desideratum::Modularity,
        Desideratum::Decomposability,
        Desideratum::DistanceMetric,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Desideratum::ContrastAccuracy => "contrast accuracy",
            Desideratum::Reversibility => "reversibility",
            Desideratum::Efficiency => "efficiency",
            Desideratum::SpeakerIndependence => "speaker independence",
            Desideratum::Modularity => "modularity",
            Desideratum::Decomposability => "decomposability",
            Desideratum::DistanceMetric => "distance metric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub desideratum: Desideratum,
    pub verdict: Verdict,
    pub evidence: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSummary {
    pub sample_size: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub non_negativity: usize,
    pub identity: usize,
    pub symmetry: usize,
    pub triangle: usize,
    /// Fewer than three sample items.
    pub triangle_skipped: bool,
}

impl AxiomSummary {
    pub fn total_violations(&self) -> usize {
        self.non_negativity + self.identity + self.symmetry + self.triangle
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionStats {
    pub names: usize,
    pub classes: usize,
    pub largest_class: usize,
    pub largest_code: String,
    pub shared_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostPoint {
    pub size: usize,
    pub operations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostProfile {
    /// What `size` and `operations` count.
    pub unit: String,
    pub points: Vec<CostPoint>,
}

impl CostProfile {
    /// Operations at the largest size over operations at the smallest.
    pub fn growth(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(first), Some(last)) if first.operations > 0 => {
                last.operations as f64 / first.operations as f64
            }
            _ => f64::NAN,
        }
    }
}

/// Place and voicing contrasts under the active weights. Perceptual
/// confusion studies find voicing the more salient cue, so a place contrast
/// scoring above a voicing contrast is flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalienceTension {
    pub place_pair: (String, String),
    pub place_distance: f64,
    pub voicing_pair: (String, String),
    pub voicing_distance: f64,
    pub place_outweighs_voicing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesiderataReport {
    pub scheme: String,
    pub seed: u64,
    pub assessments: Vec<Assessment>,
    pub invertible: bool,
    pub distance_available: bool,
    /// Distinct values taken by the scheme's pairwise comparison.
    pub comparison_levels: usize,
    pub metric_axioms: Option<AxiomSummary>,
    pub confusion: Option<ConfusionCounts>,
    pub collisions: Option<CollisionStats>,
    pub salience_tension: Option<SalienceTension>,
    pub cost_profile: CostProfile,
    pub notes: Vec<String>,
    pub error: Option<String>,
    /// The error was the automaton state budget running out.
    pub budget_exceeded: bool,
}

impl DesiderataReport {
    pub fn verdict(&self, d: Desideratum) -> Option<Verdict> {
        self.assessments
            .iter()
            .find(|a| a.desideratum == d)
            .map(|a| a.verdict)
    }

    /// Every desideratum appears exactly once.
    pub fn is_complete(&self) -> bool {
        Desideratum::ALL.iter().all(|d| {
            self.assessments
                .iter()
                .filter(|a| a.desideratum == *d)
                .count()
                == 1
        }) && self.assessments.len() == Desideratum::ALL.len()
    }

    fn failed(scheme: &str, seed: u64, err: &Error) -> Self {
        DesiderataReport {
            scheme: scheme.to_string(),
            seed,
            assessments: Desideratum::ALL
                .iter()
                .map(|&d| Assessment {
                    desideratum: d,
                    verdict: Verdict::Fail,
                    evidence: format!("evaluation error: {err}"),
                })
                .collect(),
            invertible: false,
            distance_available: false,
            comparison_levels: 0,
            metric_axioms: None,
            confusion: None,
            collisions: None,
            salience_tension: None,
            cost_profile: CostProfile {
                unit: String::new(),
                points: Vec::new(),
            },
            notes: Vec::new(),
            error: Some(err.to_string()),
            budget_exceeded: matches!(err, Error::BudgetExceeded { .. }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub weights: WeightProfile,
    pub seed: u64,
    /// Random triples for the triangle check.
    pub trials: usize,
    /// Orthographic names for the SOUNDEX checks; gold pairs refer to them.
    pub names: Vec<String>,
    pub gold_pairs: Vec<GoldPair>,
    /// Input sizes for the efficiency profiles (name length, word length,
    /// tier count).
    pub profile_sizes: Vec<usize>,
    pub states_per_tier: usize,
    pub budget: usize,
    /// Record wall-clock times; makes the report non-reproducible.
    pub timings: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            weights: WeightProfile::default(),
            seed: 0,
            trials: 10_000,
            names: soundex::parse_name_list(WITNESS_NAMES),
            gold_pairs: parse_gold_pairs(WITNESS_GOLD_PAIRS).expect("bundled gold pairs are valid"),
            profile_sizes: vec![2, 3, 4, 5],
            states_per_tier: 8,
            budget: DEFAULT_STATE_BUDGET,
            timings: false,
        }
    }
}

fn tolerance(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

/// Counts metric-axiom violations of `distance` over `sample`.
///
/// Non-negativity, identity and symmetry are checked on every pair when the
/// sample is small enough (`n * n <= max(trials, 10_000)`) and on `trials`
/// random pairs otherwise. Identity means: zero exactly between sequences
/// with identical feature bundles. The triangle inequality is checked on
/// `trials` random triples of distinct items and skipped below three items.
pub fn check_metric_axioms<F>(
    distance: F,
    sample: &[PhonemeSequence],
    trials: usize,
    seed: u64,
) -> Result<AxiomSummary>
where
    F: Fn(&PhonemeSequence, &PhonemeSequence) -> Result<f64>,
{
    let n = sample.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache: HashMap<(usize, usize), f64> = HashMap::new();
    let mut d = |i: usize, j: usize| -> Result<f64> {
        if let Some(&v) = cache.get(&(i, j)) {
            return Ok(v);
        }
        let v = distance(&sample[i], &sample[j])?;
        cache.insert((i, j), v);
        Ok(v)
    };

    let mut summary = AxiomSummary {
        sample_size: n,
        ..Default::default()
    };
    let pairs: Vec<(usize, usize)> = if n * n <= trials.max(10_000) {
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
    } else {
        (0..trials)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    for (i, j) in pairs {
        summary.pairs_checked += 1;
        let ij = d(i, j)?;
        let ji = d(j, i)?;
        if ij.is_nan() || ij < 0.0 {
            summary.non_negativity += 1;
        }
        let indiscernible = sample[i].same_bundles(&sample[j]);
        if (ij == 0.0) != indiscernible {
            summary.identity += 1;
        }
        if (ij - ji).abs() > tolerance(ij) {
            summary.symmetry += 1;
        }
    }

    if n < 3 {
        summary.triangle_skipped = true;
        return Ok(summary);
    }
    for _ in 0..trials {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let c = loop {
            let c = rng.gen_range(0..n);
            if c != a && c != b {
                break c;
            }
        };
        let (ab, bc, ac) = (d(a, b)?, d(b, c)?, d(a, c)?);
        summary.triples_checked += 1;
        if ac > ab + bc + tolerance(ab + bc) {
            summary.triangle += 1;
        }
    }
    Ok(summary)
}

/// Confusion counts for SOUNDEX on labelled pairs; a positive is an
/// identical code.
pub fn soundex_discrimination<S: AsRef<str>>(
    lexicon: &[S],
    gold_pairs: &[GoldPair],
) -> Result<ConfusionCounts> {
    let known: BTreeSet<&str> = lexicon.iter().map(AsRef::as_ref).collect();
    let mut counts = ConfusionCounts::default();
    for pair in gold_pairs {
        for name in [&pair.left, &pair.right] {
            if !known.contains(name.as_str()) {
                return Err(Error::UnknownName(name.clone()));
            }
        }
        let positive = soundex::encode(&pair.left)? == soundex::encode(&pair.right)?;
        match (positive, pair.same) {
            (true, true) => counts.true_positives += 1,
            (true, false) => counts.false_positives += 1,
            (false, true) => counts.false_negatives += 1,
            (false, false) => counts.true_negatives += 1,
        }
    }
    Ok(counts)
}

type Evaluator = fn(&[LexiconEntry], &HarnessConfig) -> Result<DesiderataReport>;

/// Evaluates every scheme on `lexicon`. A failing scheme yields a report
/// with its error recorded; the others are still evaluated.
pub fn compare_schemes(
    lexicon: &[LexiconEntry],
    config: &HarnessConfig,
) -> Result<Vec<DesiderataReport>> {
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let evaluators: [(&str, Evaluator); 3] = [
        (SOUNDEX, evaluate_soundex),
        (FEATURE_ALIGNMENT, evaluate_feature_alignment),
        (AUTOSEG, evaluate_autoseg),
    ];
    Ok(evaluators
        .iter()
        .map(|(name, eval)| {
            eval(lexicon, config)
                .unwrap_or_else(|e| DesiderataReport::failed(name, config.seed, &e))
        })
        .collect())
}

fn assess(desideratum: Desideratum, verdict: Verdict, evidence: impl Into<String>) -> Assessment {
    Assessment {
        desideratum,
        verdict,
        evidence: evidence.into(),
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn speaker_independence() -> Assessment {
    assess(
        Desideratum::SpeakerIndependence,
        Verdict::NotApplicable,
        "not testable in this artifact: speaker variation lives in the acoustic signal, which is not modelled",
    )
}

fn efficiency(profile: &CostProfile) -> Assessment {
    let sizes: Vec<String> = profile.points.iter().map(|p| p.size.to_string()).collect();
    let ops: Vec<String> = profile
        .points
        .iter()
        .map(|p| p.operations.to_string())
        .collect();
    assess(
        Desideratum::Efficiency,
        Verdict::NotApplicable,
        format!(
            "{}: sizes [{}] -> operations [{}], growth x{:.2}",
            profile.unit,
            sizes.join(", "),
            ops.join(", "),
            profile.growth()
        ),
    )
}

const PSYCHOLINGUISTIC_NOTE: &str =
    "relation to perception/production theories: documentation only, no executable check";

/// Number of distinct values among `values`, compared bit for bit.
fn distinct_levels(values: impl IntoIterator<Item = f64>) -> usize {
    values
        .into_iter()
        .map(f64::to_bits)
        .collect::<BTreeSet<_>>()
        .len()
}

fn timed<T>(enabled: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<u128>)> {
    let started = Instant::now();
    let value = f()?;
    Ok((value, enabled.then(|| started.elapsed().as_micros())))
}

fn evaluate_soundex(lexicon: &[LexiconEntry], config: &HarnessConfig) -> Result<DesiderataReport> {
    let table = SoundexTable::russell();
    let mut population: Vec<String> = config.names.clone();
    population.extend(lexicon.iter().map(|e| e.word.clone()));

    let classes = soundex::collisions_with(&table, &population)?;
    let invertible = classes.iter().all(|c| c.size == 1);
    let largest = &classes[0];
    let collisions = CollisionStats {
        names: classes.iter().map(|c| c.size).sum(),
        classes: classes.len(),
        largest_class: largest.size,
        largest_code: largest.code.to_string(),
        shared_classes: classes.iter().filter(|c| c.size > 1).count(),
    };

    let confusion = soundex_discrimination(&config.names, &config.gold_pairs)?;

    // The only comparison SOUNDEX supports is code equality.
    let codes = population
        .iter()
        .map(|n| table.encode(n))
        .collect::<Result<Vec<_>>>()?;
    let levels = distinct_levels(codes.iter().enumerate().flat_map(|(i, a)| {
        codes[i + 1..]
            .iter()
            .map(move |b| if a == b { 0.0 } else { 1.0 })
    }));
    let distance_available = levels > 2;

    let mut points = Vec::new();
    let probe = "Kruempelstaedter";
    for &size in &config.profile_sizes {
        let name: String = probe.chars().cycle().take(size).collect();
        let ((_, lookups), elapsed) = timed(config.timings, || table.encode_counted(&name))?;
        points.push(CostPoint {
            size,
            operations: lookups as u64,
            elapsed_micros: elapsed,
        });
    }
    let cost_profile = CostProfile {
        unit: "name length / table lookups".into(),
        points,
    };

    // An alternative table must change at least one code.
    let swapped = SoundexTable::from_groups(&[
        (1, "CSGJKQXZ"),
        (2, "BPFV"),
        (3, "DT"),
        (4, "L"),
        (5, "MN"),
        (6, "R"),
    ])?;
    let table_matters = population
        .iter()
        .map(|n| Ok(swapped.encode(n)? != table.encode(n)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .any(|x| x);

    let components = 1;
    let assessments = vec![
        assess(
            Desideratum::ContrastAccuracy,
            pass_if(confusion.false_positives == 0 && confusion.false_negatives == 0),
            format!(
                "gold pairs: {} TP, {} FP, {} TN, {} FN; {} of {} classes shared, largest {} ({} names)",
                confusion.true_positives,
                confusion.false_positives,
                confusion.true_negatives,
                confusion.false_negatives,
                collisions.shared_classes,
                collisions.classes,
                collisions.largest_code,
                collisions.largest_class
            ),
        ),
        assess(
            Desideratum::Reversibility,
            pass_if(invertible),
            if invertible {
                "every code in the sample has a single name".to_string()
            } else {
                format!(
                    "non-invertible: code {} covers {}",
                    largest.code,
                    largest.members.join(", ")
                )
            },
        ),
        efficiency(&cost_profile),
        speaker_independence(),
        assess(
            Desideratum::Modularity,
            pass_if(table_matters),
            "coding table is injected; an alternative table re-codes the sample",
        ),
        assess(
            Desideratum::Decomposability,
            pass_if(components >= 2),
            format!("{components} adjustable component (the letter table); no access to stress, prosody or features"),
        ),
        assess(
            Desideratum::DistanceMetric,
            pass_if(distance_available),
            format!(
                "comparison takes {levels} distinct value(s) over {} names: codes only support equality",
                population.len()
            ),
        ),
    ];

    Ok(DesiderataReport {
        scheme: SOUNDEX.into(),
        seed: config.seed,
        assessments,
        invertible,
        distance_available,
        comparison_levels: levels,
        metric_axioms: None,
        confusion: Some(confusion),
        collisions: Some(collisions),
        salience_tension: None,
        cost_profile,
        notes: vec![PSYCHOLINGUISTIC_NOTE.into()],
        error: None,
        budget_exceeded: false,
    })
}

/// Distances for the place pair /b/-/g/ and the voicing pair /b/-/p/, when
/// the inventory has those symbols.
pub fn salience_tension(inventory: &Inventory, w: &WeightProfile) -> Option<SalienceTension> {
    let (b, g, p) = (
        inventory.get("B")?,
        inventory.get("G")?,
        inventory.get("P")?,
    );
    let place_distance = phoneme_distance(b, g, w);
    let voicing_distance = phoneme_distance(b, p, w);
    Some(SalienceTension {
        place_pair: (b.symbol.clone(), g.symbol.clone()),
        place_distance,
        voicing_pair: (b.symbol.clone(), p.symbol.clone()),
        voicing_distance,
        place_outweighs_voicing: place_distance > voicing_distance,
    })
}

fn evaluate_feature_alignment(
    lexicon: &[LexiconEntry],
    config: &HarnessConfig,
) -> Result<DesiderataReport> {
    let w = &config.weights;
    w.validate()?;
    let sample: Vec<PhonemeSequence> = lexicon.iter().map(|e| e.pronunciation.clone()).collect();
    let axioms = check_metric_axioms(
        |a, b| word_distance(a, b, w).map(|(d, _)| d),
        &sample,
        config.trials,
        config.seed,
    )?;

    let mut merged = 0;
    let mut values = Vec::new();
    for (i, a) in lexicon.iter().enumerate() {
        for b in &lexicon[i + 1..] {
            let d = word_distance(&a.pronunciation, &b.pronunciation, w)?.0;
            values.push(d);
            if d == 0.0 && a.pronunciation.symbols() != b.pronunciation.symbols() {
                merged += 1;
            }
        }
    }
    let levels = distinct_levels(values);
    let distance_available = levels > 2;

    let mut keys: BTreeMap<Vec<FeatureBundle>, Vec<&str>> = BTreeMap::new();
    for e in lexicon {
        let key = (0..e.pronunciation.len())
            .map(|i| *e.pronunciation.features(i))
            .collect::<Vec<_>>();
        keys.entry(key).or_default().push(&e.word);
    }
    let clash = keys.values().find(|words| words.len() > 1);
    let invertible = clash.is_none();

    let tension = salience_tension(lexicon[0].pronunciation.inventory(), w);

    let inv = lexicon[0].pronunciation.inventory();
    let mut points = Vec::new();
    for &size in &config.profile_sizes {
        let a_idx: Vec<usize> = (0..size).map(|i| i % inv.len()).collect();
        let b_idx: Vec<usize> = (0..size).map(|i| (i * 7 + 3) % inv.len()).collect();
        let a = PhonemeSequence::from_indices(inv, &a_idx);
        let b = PhonemeSequence::from_indices(inv, &b_idx);
        let (_, elapsed) = timed(config.timings, || word_distance(&a, &b, w))?;
        points.push(CostPoint {
            size,
            operations: table_cells(size, size) as u64,
            elapsed_micros: elapsed,
        });
    }
    let cost_profile = CostProfile {
        unit: "word length / alignment table cells".into(),
        points,
    };

    // Inventory and weights survive a trip through their file formats.
    let reloaded_inv = Inventory::parse(&inv.to_tsv())?;
    let reloaded_w = WeightProfile::parse(&w.to_text())?;
    let modular = reloaded_inv == **inv && reloaded_w == *w;

    let active_features = crate::features::Feature::ALL
        .iter()
        .filter(|f| w.weight(**f) > 0.0)
        .count();
    let components = active_features + 2;

    let mut notes = vec![PSYCHOLINGUISTIC_NOTE.to_string()];
    if let Some(t) = tension.as_ref().filter(|t| t.place_outweighs_voicing) {
        notes.push(format!(
            "salience tension: place contrast /{}/-/{}/ scores {} above voicing contrast /{}/-/{}/ at {}, while perceptual confusion data rank voicing as the more salient cue",
            t.place_pair.0.to_lowercase(),
            t.place_pair.1.to_lowercase(),
            t.place_distance,
            t.voicing_pair.0.to_lowercase(),
            t.voicing_pair.1.to_lowercase(),
            t.voicing_distance
        ));
    }

    let assessments = vec![
        assess(
            Desideratum::ContrastAccuracy,
            pass_if(merged == 0),
            format!("{merged} pairs of distinct pronunciations at distance 0"),
        ),
        assess(
            Desideratum::Reversibility,
            pass_if(invertible),
            match clash {
                None => "feature-bundle sequences identify every lexicon entry".to_string(),
                Some(words) => format!("indistinguishable entries: {}", words.join(", ")),
            },
        ),
        efficiency(&cost_profile),
        speaker_independence(),
        assess(
            Desideratum::Modularity,
            pass_if(modular),
            "inventory and weight profile load from data files and round-trip",
        ),
        assess(
            Desideratum::Decomposability,
            pass_if(components >= 2),
            format!("{active_features} weighted features plus onset and stress multipliers"),
        ),
        assess(
            Desideratum::DistanceMetric,
            pass_if(distance_available && axioms.total_violations() == 0),
            format!(
                "{levels} distinct distances; axiom violations over {} pairs and {} triples: non-negativity {}, identity {}, symmetry {}, triangle {}",
                axioms.pairs_checked,
                axioms.triples_checked,
                axioms.non_negativity,
                axioms.identity,
                axioms.symmetry,
                axioms.triangle
            ),
        ),
    ];

    Ok(DesiderataReport {
        scheme: FEATURE_ALIGNMENT.into(),
        seed: config.seed,
        assessments,
        invertible,
        distance_available,
        comparison_levels: levels,
        metric_axioms: Some(axioms),
        confusion: None,
        collisions: None,
        salience_tension: tension,
        cost_profile,
        notes,
        error: None,
        budget_exceeded: false,
    })
}

fn evaluate_autoseg(lexicon: &[LexiconEntry], config: &HarnessConfig) -> Result<DesiderataReport> {
    let words = lexicon
        .iter()
        .map(|e| AutosegWord::from_pronunciation(&e.pronunciation))
        .collect::<Result<Vec<_>>>()?;

    let mut disagreements = 0;
    let mut values = Vec::new();
    for (i, a) in words.iter().enumerate() {
        if !autoseg::compatible(a, a)? {
            disagreements += 1;
        }
        for (j, b) in words.iter().enumerate().skip(i + 1) {
            let c = autoseg::compatible(a, b)?;
            values.push(if c { 0.0 } else { 1.0 });
            let same = lexicon[i].pronunciation.symbols() == lexicon[j].pronunciation.symbols();
            if c != same {
                disagreements += 1;
            }
        }
    }
    let levels = distinct_levels(values);
    let distance_available = levels > 2;

    // Decode each word from its automaton and check the decoding is unique.
    let mut decoded: BTreeMap<Vec<Vec<String>>, Vec<&str>> = BTreeMap::new();
    let mut faithful = true;
    for (e, w) in lexicon.iter().zip(&words) {
        let strings = w.realize()?.accepted_strings(e.pronunciation.len() + 1);
        let expected: Vec<String> = e
            .pronunciation
            .symbols()
            .iter()
            .map(|s| s.to_string())
            .collect();
        faithful &= strings == vec![expected];
        decoded.entry(strings).or_default().push(&e.word);
    }
    let invertible = faithful && decoded.values().all(|v| v.len() == 1);

    let rows = autoseg::intersection_cost_profile(
        &config.profile_sizes,
        config.states_per_tier,
        &ProfileConfig {
            seed: config.seed,
            budget: config.budget,
            alphabet_size: 3,
            timings: config.timings,
        },
    )?;
    let cost_profile = CostProfile {
        unit: format!(
            "tiers of {} states / product states",
            config.states_per_tier
        ),
        points: rows
            .iter()
            .map(|r| CostPoint {
                size: r.tiers,
                operations: r.product_states as u64,
                elapsed_micros: r.elapsed_micros,
            })
            .collect(),
    };

    let round_trip = words
        .iter()
        .map(|w| Ok(AutosegWord::parse(&w.to_text())? == *w))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|x| x);
    let tiers = words.iter().map(|w| w.tiers().len()).min().unwrap_or(0);

    let assessments = vec![
        assess(
            Desideratum::ContrastAccuracy,
            pass_if(disagreements == 0),
            format!(
                "{disagreements} disagreements between compatibility and identity over {} word pairs",
                words.len() * (words.len() + 1) / 2
            ),
        ),
        assess(
            Desideratum::Reversibility,
            pass_if(invertible),
            "each word automaton accepts exactly its own pronunciation",
        ),
        efficiency(&cost_profile),
        speaker_independence(),
        assess(
            Desideratum::Modularity,
            pass_if(round_trip),
            "tiers are separate automata with a text format; words round-trip",
        ),
        assess(
            Desideratum::Decomposability,
            pass_if(tiers >= 2),
            format!("{tiers} tiers per word, joined by pinnings"),
        ),
        assess(
            Desideratum::DistanceMetric,
            pass_if(distance_available),
            format!("compatibility takes {levels} distinct value(s): a yes/no test, not a distance"),
        ),
    ];

    Ok(DesiderataReport {
        scheme: AUTOSEG.into(),
        seed: config.seed,
        assessments,
        invertible,
        distance_available,
        comparison_levels: levels,
        metric_axioms: None,
        confusion: None,
        collisions: None,
        salience_tension: None,
        cost_profile,
        notes: vec![PSYCHOLINGUISTIC_NOTE.into()],
        error: None,
        budget_exceeded: false,
    })
}

/// Human-readable table: one block per scheme.
pub fn render_reports(reports: &[DesiderataReport]) -> String {
    let mut out = String::new();
    for (k, r) in reports.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "== {} (seed {}) ==", r.scheme, r.seed);
        if let Some(e) = &r.error {
            let _ = writeln!(out, "error: {e}");
        }
        for a in &r.assessments {
            let _ = writeln!(
                out,
                "{:<22} {:<5} {}",
                a.desideratum.label(),
                a.verdict,
                a.evidence
            );
        }
        let _ = writeln!(
            out,
            "{:<22} {}",
            "invertible",
            if r.invertible { "yes" } else { "no" }
        );
        let _ = writeln!(
            out,
            "{:<22} {}",
            "distance available",
            if r.distance_available { "yes" } else { "no" }
        );
        if r.cost_profile
            .points
            .iter()
            .any(|p| p.elapsed_micros.is_some())
        {
            let times: Vec<String> = r
                .cost_profile
                .points
                .iter()
                .map(|p| format!("{}:{}us", p.size, p.elapsed_micros.unwrap_or(0)))
                .collect();
            let _ = writeln!(out, "{:<22} {}", "wall time", times.join(" "));
        }
        for n in &r.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    out
}

pub fn reports_to_json(reports: &[DesiderataReport]) -> String {
    serde_json::to_string_pretty(reports).expect("serializable")
}
