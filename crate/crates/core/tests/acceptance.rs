//! Acceptance suite. Runs every criterion at its stated tolerance and time
//! limit, prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::panic;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phonodist::alignment::{word_distance, Step};
use phonodist::autoseg::{
    intersect, intersection_cost_profile, is_empty, ProfileConfig, TierAutomaton,
};
use phonodist::features::{phoneme_distance, WeightProfile};
use phonodist::harness::{
    check_metric_axioms, compare_schemes, Desideratum, HarnessConfig, Verdict,
};
use phonodist::lexicon::{toy_lexicon, LexiconEntry};
use phonodist::phoneme::{Inventory, PhonemeSequence};
use phonodist::soundex::{self, code_space_size};

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn(),
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "soundex worked examples",
        limit: Some(Duration::from_secs(1)),
        run: soundex_examples,
    },
    Criterion {
        id: 2,
        name: "soundex code-space cardinality",
        limit: Some(Duration::from_secs(1)),
        run: code_space,
    },
    Criterion {
        id: 3,
        name: "feature weight examples and metric over the inventory",
        limit: Some(Duration::from_secs(10)),
        run: weight_suite,
    },
    Criterion {
        id: 4,
        name: "place vs voicing salience tension",
        limit: None,
        run: salience_tension,
    },
    Criterion {
        id: 5,
        name: "alignment DP equals brute force (length <= 5, 6 phonemes)",
        limit: Some(Duration::from_secs(60)),
        run: alignment_oracle,
    },
    Criterion {
        id: 6,
        name: "metric axioms over the toy lexicon",
        limit: Some(Duration::from_secs(60)),
        run: metric_axioms,
    },
    Criterion {
        id: 7,
        name: "intersection membership and emptiness",
        limit: Some(Duration::from_secs(60)),
        run: fsa_correctness,
    },
    Criterion {
        id: 8,
        name: "intersection cost profile",
        limit: None,
        run: cost_profile,
    },
    Criterion {
        id: 9,
        name: "desiderata report triage",
        limit: None,
        run: desiderata,
    },
];

fn main() {
    panic::set_hook(Box::new(|info| {
        let location = info
            .location()
            .map(|l| format!(" at line {}", l.line()))
            .unwrap_or_default();
        let message = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("panic");
        println!("    {message}{location}");
    }));
    let mut failed = Vec::new();
    for c in CRITERIA {
        let started = Instant::now();
        let outcome = panic::catch_unwind(c.run);
        let elapsed = started.elapsed();
        let over_time = c.limit.is_some_and(|l| elapsed >= l);
        let ok = outcome.is_ok() && !over_time;
        let limit = c
            .limit
            .map(|l| format!(" limit {:.0}s", l.as_secs_f64()))
            .unwrap_or_default();
        println!(
            "[{}] {}. {} ({:.2}s{limit}){}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            if over_time { " over time limit" } else { "" }
        );
        if !ok {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn soundex_examples() {
    let expected = [
        ("Juola", "J400"),
        ("Krumplestater", "K651"),
        ("Kruempelstaedter", "K651"),
        ("Bonner", "B560"),
        ("Baymore", "B560"),
        ("Van Hoesen", "V525"),
        ("Vincenzo", "V525"),
    ];
    for (name, code) in expected {
        assert_eq!(soundex::encode(name).unwrap().to_string(), code, "{name}");
    }
}

fn code_space() {
    let n = code_space_size();
    println!(
        "    enumerated well-formed codes: {n} (fewer than 9000: {})",
        n < 9000
    );
    assert_eq!(n, 8918);
}

fn weight_suite() {
    let inv = Inventory::english();
    let w = WeightProfile::default();
    let d = |x: &str, y: &str| phoneme_distance(inv.get(x).unwrap(), inv.get(y).unwrap(), &w);
    assert_eq!(d("D", "G"), 7.0);
    assert_eq!(d("Z", "S"), 4.0);
    assert_eq!(d("L", "R"), 1.0);
    assert_eq!(d("N", "D"), 1.0);

    let ps = inv.phonemes();
    let n = ps.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = phoneme_distance(&ps[i], &ps[j], &w);
        }
    }
    for i in 0..n {
        assert_eq!(m[i * n + i], 0.0, "identity for {}", ps[i].symbol);
        for j in 0..n {
            assert!(m[i * n + j] >= 0.0);
            assert_eq!(
                m[i * n + j],
                m[j * n + i],
                "{} {}",
                ps[i].symbol,
                ps[j].symbol
            );
            for k in 0..n {
                assert!(
                    m[i * n + k] <= m[i * n + j] + m[j * n + k],
                    "triangle {} {} {}",
                    ps[i].symbol,
                    ps[j].symbol,
                    ps[k].symbol
                );
            }
        }
    }
}

fn salience_tension() {
    let inv = Inventory::english();
    let w = WeightProfile::default();
    let d = |x: &str, y: &str| phoneme_distance(inv.get(x).unwrap(), inv.get(y).unwrap(), &w);
    assert_eq!(d("B", "G"), 7.0);
    assert_eq!(d("B", "P"), 4.0);

    let reports = compare_schemes(&toy_lexicon(), &HarnessConfig::default()).unwrap();
    let metric = reports
        .iter()
        .find(|r| r.metric_axioms.is_some())
        .expect("feature report");
    let t = metric.salience_tension.as_ref().expect("tension recorded");
    assert_eq!((t.place_distance, t.voicing_distance), (7.0, 4.0));
    assert!(t.place_outweighs_voicing);
    assert!(metric.notes.iter().any(|n| n.contains("salience tension")));
}

/// Alignment costs as the oracle sees them: a substitution matrix over the
/// six phonemes and a flat indel cost.
struct Costs {
    sub: [[f64; 6]; 6],
    indel: f64,
}

/// Returns true when some alignment of `a[i..]` and `b[j..]` brings the
/// total below `bound`. Exhaustive over diagonal, delete and insert moves,
/// cutting branches that cannot get under the bound.
fn cheaper_exists(
    a: &[usize],
    b: &[usize],
    i: usize,
    j: usize,
    acc: f64,
    bound: f64,
    c: &Costs,
) -> bool {
    let rest = (a.len() - i).abs_diff(b.len() - j) as f64 * c.indel;
    if acc + rest >= bound {
        return false;
    }
    if i == a.len() && j == b.len() {
        return true;
    }
    (i < a.len()
        && j < b.len()
        && cheaper_exists(a, b, i + 1, j + 1, acc + c.sub[a[i]][b[j]], bound, c))
        || (i < a.len() && cheaper_exists(a, b, i + 1, j, acc + c.indel, bound, c))
        || (j < b.len() && cheaper_exists(a, b, i, j + 1, acc + c.indel, bound, c))
}

/// Cost of `steps` recomputed from the oracle's own tables.
fn recost(steps: &[Step], a: &[usize], b: &[usize], c: &Costs) -> f64 {
    steps
        .iter()
        .map(|s| match *s {
            Step::Match { i, j } => {
                assert_eq!(c.sub[a[i]][b[j]], 0.0);
                0.0
            }
            Step::Subst { i, j, .. } => c.sub[a[i]][b[j]],
            Step::Insert { .. } | Step::Delete { .. } => c.indel,
        })
        .sum()
}

fn alignment_oracle() {
    const STOPS: [&str; 6] = ["B", "P", "D", "T", "G", "K"];
    let inv = Arc::new(Inventory::english().subset(&STOPS).unwrap());
    let w = WeightProfile::default();
    let mut sub = [[0.0; 6]; 6];
    for (x, row) in sub.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = phoneme_distance(inv.phoneme(x), inv.phoneme(y), &w);
        }
    }
    let costs = Costs {
        sub,
        indel: w.indel_cost,
    };

    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..5 {
        frontier = frontier
            .iter()
            .flat_map(|p: &Vec<usize>| {
                (0..6).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
        words.extend(frontier.iter().cloned());
    }
    assert_eq!(words.len(), 9331);
    let seqs: Vec<PhonemeSequence> = words
        .iter()
        .map(|w| PhonemeSequence::from_indices(&inv, w))
        .collect();

    // Relabellings of the six phonemes that leave the substitution matrix
    // unchanged preserve the cost of every alignment, so the exhaustive
    // search runs once per orbit of the first sequence.
    let mut symmetries: Vec<[usize; 6]> = Vec::new();
    let mut perm = [0, 1, 2, 3, 4, 5];
    permutations(&mut perm, 0, &mut |p| {
        if (0..6).all(|x| (0..6).all(|y| sub[p[x]][p[y]] == sub[x][y])) {
            symmetries.push(*p);
        }
    });
    assert!(symmetries.len() > 1);
    let index = |w: &[usize]| {
        words
            .binary_search_by(|v| v.len().cmp(&w.len()).then(v.as_slice().cmp(w)))
            .unwrap()
    };
    // images[k][x]: index of word x relabelled by symmetry k.
    let images: Vec<Vec<usize>> = symmetries
        .iter()
        .map(|p| {
            words
                .iter()
                .map(|w| index(&w.iter().map(|&x| p[x]).collect::<Vec<_>>()))
                .collect()
        })
        .collect();

    // For each pair the DP alignment, recosted independently, certifies an
    // upper bound; the exhaustive search shows nothing is cheaper.
    let mut checked = vec![false; words.len()];
    let mut pairs = 0u64;
    let mut searches = 0u64;
    for rep in 0..words.len() {
        if checked[rep] {
            continue;
        }
        let orbit: Vec<(usize, &Vec<usize>)> = {
            let mut seen = BTreeSet::new();
            images
                .iter()
                .map(|img| (img[rep], img))
                .filter(|(x, _)| seen.insert(*x))
                .collect()
        };
        let a = &words[rep];
        for (bi, b) in words.iter().enumerate() {
            let (d, aln) = word_distance(&seqs[rep], &seqs[bi], &w).unwrap();
            assert!(
                !cheaper_exists(a, b, 0, 0, 0.0, d, &costs),
                "DP {d} is not minimal for {a:?} {b:?}"
            );
            assert!(aln.is_complete_for(a.len(), b.len()));
            assert_eq!(recost(&aln.steps, a, b, &costs), d, "{a:?} {b:?}");
            searches += 1;
            for &(x, img) in &orbit {
                let y = img[bi];
                let (dx, aln) = word_distance(&seqs[x], &seqs[y], &w).unwrap();
                assert!(aln.is_complete_for(words[x].len(), words[y].len()));
                assert_eq!(recost(&aln.steps, &words[x], &words[y], &costs), dx);
                assert_eq!(dx, d, "{:?} {:?}", words[x], words[y]);
                pairs += 1;
            }
        }
        for &(x, _) in &orbit {
            checked[x] = true;
        }
    }
    assert_eq!(pairs, 9331 * 9331);
    println!(
        "    {pairs} ordered pairs, {searches} exhaustive searches, {} symmetries",
        symmetries.len()
    );
}

fn permutations(p: &mut [usize; 6], k: usize, visit: &mut impl FnMut(&[usize; 6])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn metric_axioms() {
    let lexicon = toy_lexicon();
    assert_eq!(lexicon.len(), 50);
    let sample: Vec<PhonemeSequence> = lexicon.into_iter().map(|e| e.pronunciation).collect();
    let w = WeightProfile::default();
    let s = check_metric_axioms(
        |a, b| word_distance(a, b, &w).map(|(d, _)| d),
        &sample,
        10_000,
        0,
    )
    .unwrap();
    assert!(s.triples_checked >= 10_000);
    assert_eq!(s.pairs_checked, 50 * 51 / 2);
    assert_eq!(s.total_violations(), 0, "{s:?}");
}

/// Acceptance of every string up to `max_len`, in depth-first order with
/// symbols ascending, by direct simulation on state sets.
fn language(a: &TierAutomaton, max_len: usize) -> Vec<bool> {
    fn walk(a: &TierAutomaton, states: u64, depth: usize, max_len: usize, out: &mut Vec<bool>) {
        out.push(a.accepting().iter().any(|&s| states >> s & 1 == 1));
        if depth == max_len {
            return;
        }
        for sym in 0..a.alphabet().len() {
            let mut next = 0u64;
            for s in 0..a.num_states() {
                if states >> s & 1 == 1 {
                    for &t in a.successors(s, sym) {
                        next |= 1 << t;
                    }
                }
            }
            walk(a, next, depth + 1, max_len, out);
        }
    }
    let mut out = Vec::new();
    walk(a, 1 << a.start(), 0, max_len, &mut out);
    out
}

/// Whether the two automata share an accepted string, by breadth-first
/// search over pairs of subset-construction states.
fn share_a_string(a: &TierAutomaton, b: &TierAutomaton) -> bool {
    let step = |x: &TierAutomaton, set: u64, sym: usize| {
        (0..x.num_states())
            .filter(|s| set >> s & 1 == 1)
            .flat_map(|s| x.successors(s, sym).iter())
            .fold(0u64, |acc, &t| acc | 1 << t)
    };
    let accepts = |x: &TierAutomaton, set: u64| x.accepting().iter().any(|&s| set >> s & 1 == 1);
    let start = (1u64 << a.start(), 1u64 << b.start());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((p, q)) = queue.pop_front() {
        if accepts(a, p) && accepts(b, q) {
            return true;
        }
        for sym in 0..a.alphabet().len() {
            let next = (step(a, p, sym), step(b, q, sym));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Every automaton with `states` states, start state 0, over `alphabet`.
fn all_automata(states: usize, alphabet: &[&str]) -> Vec<TierAutomaton> {
    let triples: Vec<(usize, &str, usize)> = (0..states)
        .flat_map(|f| {
            alphabet
                .iter()
                .flat_map(move |&s| (0..states).map(move |t| (f, s, t)))
        })
        .collect();
    let mut out = Vec::new();
    for acc in 0..1u32 << states {
        let accepting: Vec<usize> = (0..states).filter(|s| acc >> s & 1 == 1).collect();
        for mask in 0..1u64 << triples.len() {
            let trans: Vec<(usize, &str, usize)> = triples
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, t)| *t)
                .collect();
            out.push(
                TierAutomaton::new("t", alphabet, states, 0, accepting.clone(), &trans).unwrap(),
            );
        }
    }
    out
}

fn random_automaton(rng: &mut ChaCha8Rng, states: usize, alphabet: &[&str]) -> TierAutomaton {
    let density = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
    let mut trans = Vec::new();
    for f in 0..states {
        for &s in alphabet {
            for t in 0..states {
                if rng.gen_bool(density) {
                    trans.push((f, s, t));
                }
            }
        }
    }
    let accepting: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    let start = rng.gen_range(0..states);
    TierAutomaton::new("t", alphabet, states, start, accepting, &trans).unwrap()
}

fn check_pair(a: &TierAutomaton, la: &[bool], b: &TierAutomaton, lb: &[bool], max_len: usize) {
    let product = intersect(&[a.clone(), b.clone()], &[]).unwrap();
    let lp = language(&product, max_len);
    for k in 0..lp.len() {
        assert_eq!(lp[k], la[k] && lb[k], "string #{k}\n{a:?}\n{b:?}");
    }
    assert_eq!(is_empty(&product), !share_a_string(a, b), "\n{a:?}\n{b:?}");
    if product.num_states() <= max_len + 1 {
        // Short strings decide emptiness for automata this small.
        assert_eq!(is_empty(&product), !lp.iter().any(|&x| x));
    }
}

fn fsa_correctness() {
    const MAX_LEN: usize = 6;
    // Exhaustive: every pair of automata with at most two states over one or
    // two symbols, and with one state over three symbols.
    let families: [(&[usize], &[&str]); 3] = [
        (&[1, 2], &["a"]),
        (&[1, 2], &["a", "b"]),
        (&[1], &["a", "b", "c"]),
    ];
    let mut exhaustive = 0u64;
    for (sizes, alphabet) in families {
        let family: Vec<TierAutomaton> = sizes
            .iter()
            .flat_map(|&n| all_automata(n, alphabet))
            .collect();
        let langs: Vec<Vec<bool>> = family.iter().map(|a| language(a, MAX_LEN)).collect();
        for (a, la) in family.iter().zip(&langs) {
            for (b, lb) in family.iter().zip(&langs) {
                check_pair(a, la, b, lb, MAX_LEN);
                exhaustive += 1;
            }
        }
    }
    assert_eq!(exhaustive, 68 * 68 + 1032 * 1032 + 16 * 16);

    // Seeded random pairs up to four states over up to three symbols.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let alphabets: [&[&str]; 3] = [&["a"], &["a", "b"], &["a", "b", "c"]];
    let mut nonempty = 0;
    for _ in 0..30_000 {
        let alphabet = alphabets[rng.gen_range(0..3)];
        let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_automaton(&mut rng, na, alphabet);
        let b = random_automaton(&mut rng, nb, alphabet);
        let (la, lb) = (language(&a, MAX_LEN), language(&b, MAX_LEN));
        check_pair(&a, &la, &b, &lb, MAX_LEN);
        if share_a_string(&a, &b) {
            nonempty += 1;
        }
    }
    // Both outcomes are well represented.
    assert!((5_000..25_000).contains(&nonempty), "{nonempty}");
}

fn cost_profile() {
    let rows = intersection_cost_profile(&[2, 3, 4, 5], 8, &ProfileConfig::default()).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.tiers).collect::<Vec<_>>(),
        [2, 3, 4, 5]
    );
    for r in &rows {
        assert_eq!(r.bound, 8u128.pow(r.tiers as u32));
        assert!(r.product_states as u128 <= r.bound, "{r:?}");
    }
    for w in rows.windows(2) {
        assert!(w[0].product_states < w[1].product_states, "{rows:?}");
    }
    println!(
        "    product states: {:?}",
        rows.iter().map(|r| r.product_states).collect::<Vec<_>>()
    );

    let reports = compare_schemes(&toy_lexicon(), &HarnessConfig::default()).unwrap();
    let fsa = reports.iter().find(|r| r.scheme == "autoseg_fsa").unwrap();
    let recorded: Vec<usize> = fsa
        .cost_profile
        .points
        .iter()
        .map(|p| p.operations as usize)
        .collect();
    assert_eq!(
        recorded,
        rows.iter().map(|r| r.product_states).collect::<Vec<_>>()
    );
    let growth = fsa.cost_profile.growth();
    assert!(growth.is_finite() && growth > 1.0);
    println!("    recorded growth x{growth:.2}");
}

fn desiderata() {
    let lexicon = toy_lexicon();
    let reports = compare_schemes(&lexicon, &HarnessConfig::default()).unwrap();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert!(r.is_complete(), "{}", r.scheme);
        assert!(r.error.is_none());
    }
    let (sx, metric, fsa) = (&reports[0], &reports[1], &reports[2]);
    assert_eq!(sx.scheme, "soundex");

    assert!(!sx.invertible);
    assert_eq!(sx.verdict(Desideratum::Reversibility), Some(Verdict::Fail));
    assert!(sx.comparison_levels <= 2);
    assert!(!sx.distance_available);
    assert_eq!(sx.verdict(Desideratum::DistanceMetric), Some(Verdict::Fail));

    // The same evaluation on collision-free data reports invertibility:
    // the verdict comes from the data.
    let inv = Inventory::english();
    let clean = vec![
        LexiconEntry {
            word: "bet".into(),
            pronunciation: PhonemeSequence::parse("B EH T", &inv).unwrap(),
        },
        LexiconEntry {
            word: "strip".into(),
            pronunciation: PhonemeSequence::parse("S T R IH P", &inv).unwrap(),
        },
    ];
    let config = HarnessConfig {
        names: vec!["Juola".into()],
        gold_pairs: vec![],
        ..Default::default()
    };
    assert!(compare_schemes(&clean, &config).unwrap()[0].invertible);

    let axioms = metric.metric_axioms.expect("axioms checked");
    assert_eq!(axioms.total_violations(), 0);
    assert!(metric.distance_available);
    assert_eq!(
        metric.verdict(Desideratum::DistanceMetric),
        Some(Verdict::Pass)
    );

    let growth = [sx, metric, fsa].map(|r| r.cost_profile.growth());
    println!(
        "    growth soundex x{:.2}, alignment x{:.2}, autoseg x{:.2}",
        growth[0], growth[1], growth[2]
    );
    assert!(growth[2] > growth[0] && growth[2] > growth[1]);

    let schemes: BTreeSet<&str> = reports.iter().map(|r| r.scheme.as_str()).collect();
    assert_eq!(schemes.len(), 3);
}
