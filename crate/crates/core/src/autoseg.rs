//! Autosegmental words as parallel tier automata.
//!
//! Each tier of a word is a nondeterministic finite automaton over a shared
//! alphabet. Tiers are tied together by pinnings: pairs of state numbers
//! that must co-occur. The word itself is the product automaton accepting
//! the intersection of the tier languages, restricted to product states that
//! respect every pinning. Two words are compatible when the product of all
//! tiers of both is non-empty.
//!
//! Pinning semantics: for a pinning between automata A and B with pairs
//! `(p, q)`, a product state whose A-component is a pinned state `p` must
//! have a B-component among the partners of `p`, and symmetrically for B.
//! Product states violating this are dropped before the reachability search.
//!
//! Text format, one item per line (`#` comments allowed):
//!
//! ```text
//! tier <name> alphabet <symbol> <symbol> ...
//! state <n> [start] [accept]
//! trans <from> <symbol> <to>
//! pin <tierA>:<state> <tierB>:<state>
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phoneme::PhonemeSequence;

/// Default cap on product states built by one intersection.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierAutomaton {
    tier: String,
    /// Sorted, without duplicates.
    alphabet: Vec<String>,
    start: usize,
    accepting: BTreeSet<usize>,
    /// `delta[state][symbol]` is the sorted successor list.
    delta: Vec<Vec<Vec<usize>>>,
}

impl TierAutomaton {
    pub fn new<S: AsRef<str>>(
        tier: impl Into<String>,
        alphabet: &[S],
        num_states: usize,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: &[(usize, S, usize)],
    ) -> Result<Self> {
        let tier = tier.into();
        let alphabet: Vec<String> = alphabet
            .iter()
            .map(|s| s.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if alphabet.is_empty() {
            return Err(Error::InvalidAutomaton(format!(
                "tier {tier}: empty alphabet"
            )));
        }
        if start >= num_states {
            return Err(Error::InvalidAutomaton(format!(
                "tier {tier}: start state {start} out of range"
            )));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&bad) = accepting.iter().find(|&&s| s >= num_states) {
            return Err(Error::InvalidAutomaton(format!(
                "tier {tier}: accepting state {bad} out of range"
            )));
        }
        let mut delta = vec![vec![Vec::new(); alphabet.len()]; num_states];
        for (from, sym, to) in transitions {
            let sym = sym.as_ref();
            let k = alphabet
                .binary_search_by(|a| a.as_str().cmp(sym))
                .map_err(|_| {
                    Error::InvalidAutomaton(format!("tier {tier}: symbol {sym:?} not in alphabet"))
                })?;
            if *from >= num_states || *to >= num_states {
                return Err(Error::InvalidAutomaton(format!(
                    "tier {tier}: transition {from} {sym} {to} references a missing state"
                )));
            }
            delta[*from][k].push(*to);
        }
        for row in &mut delta {
            for succ in row {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        Ok(TierAutomaton {
            tier,
            alphabet,
            start,
            accepting,
            delta,
        })
    }

    /// Linear automaton accepting exactly `symbols`; the alphabet is the set
    /// of symbols used.
    pub fn from_sequence<S: AsRef<str>>(tier: impl Into<String>, symbols: &[S]) -> Result<Self> {
        Self::from_sequence_over(tier, symbols, symbols)
    }

    /// Like [`from_sequence`](Self::from_sequence) over a wider alphabet.
    pub fn from_sequence_over<S: AsRef<str>, A: AsRef<str>>(
        tier: impl Into<String>,
        symbols: &[S],
        alphabet: &[A],
    ) -> Result<Self> {
        let slots: Vec<Vec<&str>> = symbols.iter().map(|s| vec![s.as_ref()]).collect();
        Self::from_slots(tier, &slots, alphabet)
    }

    /// Chain automaton whose `i`-th transition accepts any symbol of
    /// `slots[i]`.
    pub fn from_slots<S: AsRef<str>, A: AsRef<str>>(
        tier: impl Into<String>,
        slots: &[Vec<S>],
        alphabet: &[A],
    ) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::EmptySequence);
        }
        let alphabet: Vec<&str> = alphabet.iter().map(AsRef::as_ref).collect();
        let transitions: Vec<(usize, &str, usize)> = slots
            .iter()
            .enumerate()
            .flat_map(|(i, slot)| slot.iter().map(move |s| (i, s.as_ref(), i + 1)))
            .collect();
        Self::new(
            tier,
            &alphabet,
            slots.len() + 1,
            0,
            [slots.len()],
            &transitions,
        )
    }

    pub fn tier(&self) -> &str {
        &self.tier
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet
            .binary_search_by(|a| a.as_str().cmp(symbol))
            .ok()
    }

    pub fn successors(&self, state: usize, symbol: usize) -> &[usize] {
        &self.delta[state][symbol]
    }

    /// All transitions as `(from, symbol, to)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &str, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(move |(from, row)| {
            row.iter().enumerate().flat_map(move |(k, succ)| {
                succ.iter()
                    .map(move |&to| (from, self.alphabet[k].as_str(), to))
            })
        })
    }

    fn step(&self, states: &BTreeSet<usize>, symbol: usize) -> BTreeSet<usize> {
        states
            .iter()
            .flat_map(|&s| self.delta[s][symbol].iter().copied())
            .collect()
    }

    pub fn accepts<S: AsRef<str>>(&self, input: &[S]) -> bool {
        let mut current = BTreeSet::from([self.start]);
        for sym in input {
            let Some(k) = self.symbol_index(sym.as_ref()) else {
                return false;
            };
            current = self.step(&current, k);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    /// Accepted strings of length at most `max_len`, in length-then-alphabet
    /// order. Only live prefixes are explored.
    pub fn accepted_strings(&self, max_len: usize) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut layer = vec![(Vec::<usize>::new(), BTreeSet::from([self.start]))];
        for len in 0..=max_len {
            for (word, states) in &layer {
                if states.iter().any(|s| self.accepting.contains(s)) {
                    out.push(word.iter().map(|&k| self.alphabet[k].clone()).collect());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (word, states) in &layer {
                for k in 0..self.alphabet.len() {
                    let succ = self.step(states, k);
                    if !succ.is_empty() {
                        let mut w = word.clone();
                        w.push(k);
                        next.push((w, succ));
                    }
                }
            }
            layer = next;
        }
        out
    }

    fn to_text_into(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "tier {} alphabet {}",
            self.tier,
            self.alphabet.join(" ")
        );
        for s in 0..self.num_states() {
            let _ = write!(out, "state {s}");
            if s == self.start {
                out.push_str(" start");
            }
            if self.accepting.contains(&s) {
                out.push_str(" accept");
            }
            out.push('\n');
        }
        for (from, sym, to) in self.transitions() {
            let _ = writeln!(out, "trans {from} {sym} {to}");
        }
    }
}

/// True iff no accepting state is reachable from the start state.
pub fn is_empty(a: &TierAutomaton) -> bool {
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([a.start]);
    seen[a.start] = true;
    while let Some(s) = queue.pop_front() {
        if a.accepting.contains(&s) {
            return false;
        }
        for succ in &a.delta[s] {
            for &t in succ {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    true
}

/// State associations between automata `a` and `b` of an intersection,
/// referenced by their position in the automaton list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pinning {
    pub a: usize,
    pub b: usize,
    pub pairs: Vec<(usize, usize)>,
}

struct PinCheck {
    a: usize,
    b: usize,
    forward: HashMap<usize, BTreeSet<usize>>,
    backward: HashMap<usize, BTreeSet<usize>>,
}

impl PinCheck {
    fn allows(&self, tuple: &[usize]) -> bool {
        let (p, q) = (tuple[self.a], tuple[self.b]);
        self.forward.get(&p).is_none_or(|qs| qs.contains(&q))
            && self.backward.get(&q).is_none_or(|ps| ps.contains(&p))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionStats {
    /// Reachable product states kept.
    pub product_states: usize,
    /// Successor tuples generated, including duplicates and pinned-out ones.
    pub successor_tuples: usize,
}

#[derive(Debug, Clone)]
pub struct Intersection {
    pub automaton: TierAutomaton,
    /// Component states of each product state.
    pub tuples: Vec<Vec<usize>>,
    pub stats: IntersectionStats,
}

/// Product automaton of `automata` under `pinnings`, with the default state
/// budget.
pub fn intersect(automata: &[TierAutomaton], pinnings: &[Pinning]) -> Result<TierAutomaton> {
    intersect_with_budget(automata, pinnings, DEFAULT_STATE_BUDGET).map(|i| i.automaton)
}

pub fn intersect_with_budget(
    automata: &[TierAutomaton],
    pinnings: &[Pinning],
    budget: usize,
) -> Result<Intersection> {
    if automata.len() < 2 {
        return Err(Error::InvalidArgument(
            "intersection needs at least two automata".into(),
        ));
    }
    let alphabet = &automata[0].alphabet;
    if let Some(other) = automata.iter().find(|a| &a.alphabet != alphabet) {
        return Err(Error::AlphabetMismatch(format!(
            "tier {} and tier {} use different alphabets",
            automata[0].tier, other.tier
        )));
    }
    let checks = pinnings
        .iter()
        .map(|p| build_check(automata, p))
        .collect::<Result<Vec<_>>>()?;
    let allowed = |t: &[usize]| checks.iter().all(|c| c.allows(t));

    let tier = automata
        .iter()
        .map(|a| a.tier.as_str())
        .collect::<Vec<_>>()
        .join("&");
    let start: Vec<usize> = automata.iter().map(|a| a.start).collect();
    let mut stats = IntersectionStats::default();
    if !allowed(&start) {
        // Empty language: a lone, non-accepting start state.
        let automaton = TierAutomaton {
            tier,
            alphabet: alphabet.clone(),
            start: 0,
            accepting: BTreeSet::new(),
            delta: vec![vec![Vec::new(); alphabet.len()]],
        };
        stats.product_states = 1;
        return Ok(Intersection {
            automaton,
            tuples: vec![start],
            stats,
        });
    }

    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut tuples = vec![start];
    let mut delta: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut next = 0;
    while next < tuples.len() {
        let current = tuples[next].clone();
        let mut row = vec![Vec::new(); alphabet.len()];
        for (k, out) in row.iter_mut().enumerate() {
            let choices: Vec<&[usize]> = automata
                .iter()
                .zip(&current)
                .map(|(a, &s)| a.successors(s, k))
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut odometer = vec![0usize; choices.len()];
            loop {
                let tuple: Vec<usize> = odometer.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                stats.successor_tuples += 1;
                if allowed(&tuple) {
                    let id = match ids.get(&tuple) {
                        Some(&id) => id,
                        None => {
                            if tuples.len() >= budget {
                                return Err(Error::BudgetExceeded { budget });
                            }
                            let id = tuples.len();
                            ids.insert(tuple.clone(), id);
                            tuples.push(tuple);
                            id
                        }
                    };
                    out.push(id);
                }
                // advance the odometer
                let mut pos = 0;
                while pos < odometer.len() {
                    odometer[pos] += 1;
                    if odometer[pos] < choices[pos].len() {
                        break;
                    }
                    odometer[pos] = 0;
                    pos += 1;
                }
                if pos == odometer.len() {
                    break;
                }
            }
            out.sort_unstable();
            out.dedup();
        }
        delta.push(row);
        next += 1;
    }

    let accepting = tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            automata
                .iter()
                .zip(t.iter())
                .all(|(a, s)| a.accepting.contains(s))
        })
        .map(|(i, _)| i)
        .collect();
    stats.product_states = tuples.len();
    Ok(Intersection {
        automaton: TierAutomaton {
            tier,
            alphabet: alphabet.clone(),
            start: 0,
            accepting,
            delta,
        },
        tuples,
        stats,
    })
}

fn build_check(automata: &[TierAutomaton], p: &Pinning) -> Result<PinCheck> {
    let n = automata.len();
    if p.a >= n || p.b >= n || p.a == p.b {
        return Err(Error::DanglingPinning(format!(
            "pinning between automata {} and {} of {n}",
            p.a, p.b
        )));
    }
    let (aa, ab) = (&automata[p.a], &automata[p.b]);
    let mut forward: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    let mut backward: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for &(x, y) in &p.pairs {
        if x >= aa.num_states() || y >= ab.num_states() {
            return Err(Error::DanglingPinning(format!(
                "{}:{x} {}:{y} references a missing state",
                aa.tier, ab.tier
            )));
        }
        forward.entry(x).or_default().insert(y);
        backward.entry(y).or_default().insert(x);
    }
    Ok(PinCheck {
        a: p.a,
        b: p.b,
        forward,
        backward,
    })
}

/// Pinning between two named tiers of one word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierPinning {
    pub tier_a: String,
    pub tier_b: String,
    pub pairs: Vec<(usize, usize)>,
}

/// Caller-supplied pinning from a tier of the first word to a tier of the
/// second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossPinning {
    pub first_tier: String,
    pub second_tier: String,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutosegWord {
    tiers: Vec<TierAutomaton>,
    pinnings: Vec<TierPinning>,
}

impl AutosegWord {
    pub fn new(tiers: Vec<TierAutomaton>, pinnings: Vec<TierPinning>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::InvalidArgument(
                "a word needs at least one tier".into(),
            ));
        }
        let mut names = BTreeSet::new();
        for t in &tiers {
            if !names.insert(t.tier.as_str()) {
                return Err(Error::TierMismatch(format!("duplicate tier {}", t.tier)));
            }
            if t.alphabet != tiers[0].alphabet {
                return Err(Error::AlphabetMismatch(format!(
                    "tier {} and tier {} use different alphabets",
                    tiers[0].tier, t.tier
                )));
            }
        }
        let word = AutosegWord { tiers, pinnings };
        for p in &word.pinnings {
            let a = word.tier_position(&p.tier_a);
            let b = word.tier_position(&p.tier_b);
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::DanglingPinning(format!(
                    "pinning {}-{} references a missing tier",
                    p.tier_a, p.tier_b
                )));
            };
            build_check(
                &word.tiers,
                &Pinning {
                    a,
                    b,
                    pairs: p.pairs.clone(),
                },
            )?;
        }
        Ok(word)
    }

    /// Two-tier word for a pronunciation: a consonant/vowel skeleton and the
    /// segmental melody, each slot pinned to its melody position.
    pub fn from_pronunciation(seq: &PhonemeSequence) -> Result<Self> {
        let inv = seq.inventory();
        let alphabet: Vec<&str> = inv.phonemes().iter().map(|p| p.symbol.as_str()).collect();
        let (vowels, consonants): (Vec<&str>, Vec<&str>) = inv
            .phonemes()
            .iter()
            .map(|p| (p.symbol.as_str(), p.is_syllabic()))
            .fold((Vec::new(), Vec::new()), |(mut v, mut c), (s, syl)| {
                if syl {
                    v.push(s)
                } else {
                    c.push(s)
                }
                (v, c)
            });
        let slots: Vec<Vec<&str>> = (0..seq.len())
            .map(|i| {
                if seq.phoneme(i).is_syllabic() {
                    vowels.clone()
                } else {
                    consonants.clone()
                }
            })
            .collect();
        let skeleton = TierAutomaton::from_slots("skeletal", &slots, &alphabet)?;
        let melody = TierAutomaton::from_sequence_over("segmental", &seq.symbols(), &alphabet)?;
        let pairs = (0..=seq.len()).map(|i| (i, i)).collect();
        AutosegWord::new(
            vec![skeleton, melody],
            vec![TierPinning {
                tier_a: "skeletal".into(),
                tier_b: "segmental".into(),
                pairs,
            }],
        )
    }

    pub fn tiers(&self) -> &[TierAutomaton] {
        &self.tiers
    }

    pub fn pinnings(&self) -> &[TierPinning] {
        &self.pinnings
    }

    pub fn tier(&self, name: &str) -> Option<&TierAutomaton> {
        self.tiers.iter().find(|t| t.tier == name)
    }

    fn tier_position(&self, name: &str) -> Option<usize> {
        self.tiers.iter().position(|t| t.tier == name)
    }

    fn indexed_pinnings(&self, offset: usize) -> Vec<Pinning> {
        self.pinnings
            .iter()
            .map(|p| Pinning {
                a: offset + self.tier_position(&p.tier_a).expect("validated"),
                b: offset + self.tier_position(&p.tier_b).expect("validated"),
                pairs: p.pairs.clone(),
            })
            .collect()
    }

    /// The word as one automaton: the pinned product of its tiers.
    pub fn realize(&self) -> Result<TierAutomaton> {
        if self.tiers.len() == 1 {
            return Ok(self.tiers[0].clone());
        }
        intersect(&self.tiers, &self.indexed_pinnings(0))
    }

    pub fn parse(text: &str) -> Result<Self> {
        struct Pending {
            name: String,
            alphabet: Vec<String>,
            states: BTreeMap<usize, (bool, bool)>,
            trans: Vec<(usize, String, usize)>,
            line: usize,
        }
        fn finish(p: Pending) -> Result<TierAutomaton> {
            let n = p.states.len();
            if p.states.keys().copied().ne(0..n) {
                return Err(Error::parse(
                    p.line,
                    format!("tier {}: states must be numbered 0..{}", p.name, n),
                ));
            }
            let starts: Vec<usize> = p
                .states
                .iter()
                .filter(|(_, f)| f.0)
                .map(|(&s, _)| s)
                .collect();
            let [start] = starts[..] else {
                return Err(Error::parse(
                    p.line,
                    format!("tier {} needs exactly one start state", p.name),
                ));
            };
            let accepting = p.states.iter().filter(|(_, f)| f.1).map(|(&s, _)| s);
            TierAutomaton::new(p.name.clone(), &p.alphabet, n, start, accepting, &p.trans)
                .map_err(|e| Error::parse(p.line, e.to_string()))
        }

        let mut tiers = Vec::new();
        let mut current: Option<Pending> = None;
        let mut pins: Vec<(String, String, usize, usize, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("bad state number {s:?}")))
            };
            match words[0] {
                "tier" => {
                    if words.len() < 4 || words[2] != "alphabet" {
                        return Err(Error::parse(
                            line_no,
                            "expected `tier <name> alphabet <symbols>`",
                        ));
                    }
                    if let Some(p) = current.take() {
                        tiers.push(finish(p)?);
                    }
                    current = Some(Pending {
                        name: words[1].to_string(),
                        alphabet: words[3..].iter().map(|s| s.to_string()).collect(),
                        states: BTreeMap::new(),
                        trans: Vec::new(),
                        line: line_no,
                    });
                }
                "state" | "trans" => {
                    let p = current
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, "state or trans before any tier"))?;
                    if words[0] == "state" {
                        if words.len() < 2 {
                            return Err(Error::parse(
                                line_no,
                                "expected `state <n> [start] [accept]`",
                            ));
                        }
                        let s = num(words[1])?;
                        let mut flags = (false, false);
                        for w in &words[2..] {
                            match *w {
                                "start" => flags.0 = true,
                                "accept" => flags.1 = true,
                                other => {
                                    return Err(Error::parse(
                                        line_no,
                                        format!("unknown flag {other:?}"),
                                    ))
                                }
                            }
                        }
                        if p.states.insert(s, flags).is_some() {
                            return Err(Error::parse(line_no, format!("state {s} declared twice")));
                        }
                    } else {
                        let [_, from, sym, to] = words[..] else {
                            return Err(Error::parse(
                                line_no,
                                "expected `trans <from> <symbol> <to>`",
                            ));
                        };
                        p.trans.push((num(from)?, sym.to_string(), num(to)?));
                    }
                }
                "pin" => {
                    let parse_ref = |s: &str| -> Result<(String, usize)> {
                        let (tier, state) = s.rsplit_once(':').ok_or_else(|| {
                            Error::parse(line_no, format!("expected tier:state, got {s:?}"))
                        })?;
                        Ok((tier.to_string(), num(state)?))
                    };
                    let [_, a, b] = words[..] else {
                        return Err(Error::parse(
                            line_no,
                            "expected `pin <tier>:<state> <tier>:<state>`",
                        ));
                    };
                    let (ta, sa) = parse_ref(a)?;
                    let (tb, sb) = parse_ref(b)?;
                    pins.push((ta, tb, sa, sb, line_no));
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown directive {other:?}"),
                    ))
                }
            }
        }
        if let Some(p) = current.take() {
            tiers.push(finish(p)?);
        }
        let mut grouped: Vec<TierPinning> = Vec::new();
        for (ta, tb, sa, sb, _) in pins {
            match grouped
                .iter_mut()
                .find(|g| g.tier_a == ta && g.tier_b == tb)
            {
                Some(g) => g.pairs.push((sa, sb)),
                None => grouped.push(TierPinning {
                    tier_a: ta,
                    tier_b: tb,
                    pairs: vec![(sa, sb)],
                }),
            }
        }
        AutosegWord::new(tiers, grouped)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tiers {
            t.to_text_into(&mut out);
        }
        for p in &self.pinnings {
            for (a, b) in &p.pairs {
                let _ = writeln!(out, "pin {}:{a} {}:{b}", p.tier_a, p.tier_b);
            }
        }
        out
    }
}

/// Whether some string satisfies every tier and pinning of both words.
pub fn compatible(first: &AutosegWord, second: &AutosegWord) -> Result<bool> {
    compatible_with(first, second, &[])
}

pub fn compatible_with(
    first: &AutosegWord,
    second: &AutosegWord,
    cross: &[CrossPinning],
) -> Result<bool> {
    compatible_with_budget(first, second, cross, DEFAULT_STATE_BUDGET)
}

/// [`compatible_with`] under an explicit product-state budget.
pub fn compatible_with_budget(
    first: &AutosegWord,
    second: &AutosegWord,
    cross: &[CrossPinning],
    budget: usize,
) -> Result<bool> {
    let names = |w: &AutosegWord| {
        w.tiers
            .iter()
            .map(|t| t.tier.clone())
            .collect::<BTreeSet<_>>()
    };
    let (n1, n2) = (names(first), names(second));
    if n1 != n2 {
        return Err(Error::TierMismatch(format!(
            "first word has tiers {:?}, second has {:?}",
            n1, n2
        )));
    }
    for t in &first.tiers {
        let other = second.tier(&t.tier).expect("same tier names");
        if other.alphabet != t.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "tier {} differs between the words",
                t.tier
            )));
        }
    }
    let offset = first.tiers.len();
    let automata: Vec<TierAutomaton> = first.tiers.iter().chain(&second.tiers).cloned().collect();
    let mut pinnings = first.indexed_pinnings(0);
    pinnings.extend(second.indexed_pinnings(offset));
    for c in cross {
        let a = first.tier_position(&c.first_tier);
        let b = second.tier_position(&c.second_tier);
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::DanglingPinning(format!(
                "cross pinning {}-{} references a missing tier",
                c.first_tier, c.second_tier
            )));
        };
        pinnings.push(Pinning {
            a,
            b: offset + b,
            pairs: c.pairs.clone(),
        });
    }
    let product = intersect_with_budget(&automata, &pinnings, budget)?.automaton;
    Ok(!is_empty(&product))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub seed: u64,
    pub budget: usize,
    pub alphabet_size: usize,
    /// Record wall-clock time per row.
    pub timings: bool,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            seed: 0,
            budget: DEFAULT_STATE_BUDGET,
            alphabet_size: 3,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRow {
    pub tiers: usize,
    pub states_per_tier: usize,
    pub product_states: usize,
    pub successor_tuples: usize,
    /// `states_per_tier ^ tiers`, saturating.
    pub bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u128>,
}

/// Random chain-like automaton: from each non-final state every symbol
/// either advances, loops, or both; the last state loops on a random subset
/// of symbols and is the only accepting state.
pub fn random_chain_automaton(
    rng: &mut impl Rng,
    tier: impl Into<String>,
    states: usize,
    alphabet: &[String],
) -> Result<TierAutomaton> {
    if states == 0 {
        return Err(Error::InvalidArgument("need at least one state".into()));
    }
    let mut trans = Vec::new();
    for s in 0..states {
        let last = s + 1 == states;
        let mut advanced = false;
        for sym in alphabet {
            if last {
                if rng.gen_bool(0.5) {
                    trans.push((s, sym.clone(), s));
                }
                continue;
            }
            match rng.gen_range(0..3) {
                0 => {
                    trans.push((s, sym.clone(), s + 1));
                    advanced = true;
                }
                1 => trans.push((s, sym.clone(), s)),
                _ => {
                    trans.push((s, sym.clone(), s));
                    trans.push((s, sym.clone(), s + 1));
                    advanced = true;
                }
            }
        }
        if !last && !advanced {
            let sym = alphabet[rng.gen_range(0..alphabet.len())].clone();
            trans.push((s, sym, s + 1));
        }
    }
    TierAutomaton::new(tier, alphabet, states, 0, [states - 1], &trans)
}

/// Intersects the first `k` of a fixed family of random chain-like automata
/// for each `k` in `tier_counts` and reports how many product states each
/// intersection built.
pub fn intersection_cost_profile(
    tier_counts: &[usize],
    states_per_tier: usize,
    config: &ProfileConfig,
) -> Result<Vec<CostRow>> {
    if tier_counts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "tier counts must be ascending".into(),
        ));
    }
    if tier_counts.first().is_some_and(|&k| k < 2) {
        return Err(Error::InvalidArgument("need at least two tiers".into()));
    }
    if config.alphabet_size == 0 {
        return Err(Error::InvalidArgument("alphabet must be non-empty".into()));
    }
    let alphabet: Vec<String> = (0..config.alphabet_size)
        .map(|i| ((b'a' + (i % 26) as u8) as char).to_string() + &"'".repeat(i / 26))
        .collect();
    let max = tier_counts.last().copied().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let family = (0..max)
        .map(|i| random_chain_automaton(&mut rng, format!("t{i}"), states_per_tier, &alphabet))
        .collect::<Result<Vec<_>>>()?;
    tier_counts
        .iter()
        .map(|&k| {
            let started = Instant::now();
            let result = intersect_with_budget(&family[..k], &[], config.budget)?;
            let elapsed = started.elapsed();
            Ok(CostRow {
                tiers: k,
                states_per_tier,
                product_states: result.stats.product_states,
                successor_tuples: result.stats.successor_tuples,
                bound: (states_per_tier as u128).saturating_pow(k as u32),
                elapsed_micros: config.timings.then_some(elapsed.as_micros()),
            })
        })
        .collect()
}
