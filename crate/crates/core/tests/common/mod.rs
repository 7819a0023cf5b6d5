//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfc_core::automata::{compile_str, Alphabet, Dfa, Word};
use sfc_core::monoid::{generate, syntactic_morphism, Morphism};

pub const CORPUS_SEED: u64 = 0x5eed_c0de;
pub const CORPUS_SIZE: usize = 220;

pub fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

pub fn re(s: &str) -> Dfa {
    compile_str(s, &ab()).unwrap()
}

pub fn unary(s: &str) -> Dfa {
    compile_str(s, &Alphabet::parse("a").unwrap()).unwrap()
}

/// Distinct minimal DFAs over `{a, b}` with at most 6 states and syntactic
/// monoids of at most 12 elements, drawn from a fixed seed.
pub fn corpus() -> &'static [Dfa] {
    static CORPUS: OnceLock<Vec<Dfa>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
        let alphabet = ab();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        while out.len() < CORPUS_SIZE {
            let n = rng.gen_range(1..=6);
            let delta: Vec<Vec<usize>> = (0..n).map(|_| (0..2).map(|_| rng.gen_range(0..n)).collect()).collect();
            let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let d = Dfa::new(alphabet.clone(), 0, &finals, delta).unwrap().minimize();
            if d.state_count() > 6 || !seen.insert((d.finals(), d.table())) {
                continue;
            }
            match syntactic_morphism(&d, 12) {
                Ok(_) => out.push(d),
                Err(e) if e.is_resource_cap() => continue,
                Err(e) => panic!("{e}"),
            }
        }
        out
    })
}

#[allow(clippy::ptr_arg)]
fn compose(p: &Vec<usize>, q: &Vec<usize>) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

/// Cayley automaton of `S3` for `a ↦ (0 1)`, `b ↦ (0 1 2)`, accepting the
/// identity.
pub fn s3_identity_fiber() -> Dfa {
    let gens = vec![vec![1, 0, 2], vec![1, 2, 0]];
    let g = generate(vec![0, 1, 2], &gens, compose, 16, "s3").unwrap();
    let delta = (0..g.elements.len()).map(|x| g.generators.iter().map(|&y| g.monoid.mul(x, y)).collect()).collect();
    Dfa::new(ab(), 0, &[0], delta).unwrap()
}

pub fn s3_morphism() -> Morphism {
    syntactic_morphism(&s3_identity_fiber(), 64).unwrap().morphism
}

/// Transformations of the minimal DFA induced by the words of each length
/// `0..=max_len`, computed by extending every word one letter at a time.
pub fn length_layers(d: &Dfa, max_len: usize) -> Vec<BTreeSet<Vec<usize>>> {
    let min = d.minimize();
    let n = min.state_count();
    let mut layers = vec![BTreeSet::from([(0..n).collect::<Vec<_>>()])];
    for _ in 0..max_len {
        let next = layers
            .last()
            .unwrap()
            .iter()
            .flat_map(|t| (0..min.alphabet().len()).map(|a| t.iter().map(|&q| min.next(q, a)).collect::<Vec<_>>()))
            .collect();
        layers.push(next);
    }
    layers
}

/// `∩_{q ≤ qmax} {s : some w with α(w) = s has every letter count ≡ 0 mod q}`.
pub fn amt_kernel_bruteforce(alpha: &Morphism, qmax: usize) -> Vec<usize> {
    let m = alpha.monoid().size();
    let k = alpha.alphabet().len();
    let mut result: BTreeSet<usize> = (0..m).collect();
    for q in 1..=qmax {
        let start = (alpha.identity(), vec![0usize; k]);
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut hits = BTreeSet::new();
        while let Some((s, c)) = queue.pop_front() {
            if c.iter().all(|&x| x == 0) {
                hits.insert(s);
            }
            for a in 0..k {
                let mut c2 = c.clone();
                c2[a] = (c2[a] + 1) % q;
                let next = (alpha.mul(s, alpha.letter(a)), c2);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        result = result.intersection(&hits).copied().collect();
    }
    result.into_iter().collect()
}

/// Membership of `w` in `K^n` (or `K⁺` when `n == None`) for a finite code.
pub fn in_power(code: &[Word], w: &[usize], n: Option<usize>) -> bool {
    // reach[i] = set of factor counts that reach position i.
    let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); w.len() + 1];
    reach[0].insert(0);
    for i in 0..w.len() {
        if reach[i].is_empty() {
            continue;
        }
        let counts: Vec<usize> = reach[i].iter().copied().collect();
        for c in code {
            if w[i..].starts_with(c) {
                for &x in &counts {
                    reach[i + c.len()].insert((x + 1).min(w.len() + 1));
                }
            }
        }
    }
    match n {
        Some(n) => reach[w.len()].contains(&n),
        None => reach[w.len()].iter().any(|&x| x >= 1),
    }
}

/// Some `(u, v, w)` with `|uvw| ≤ max_len`, `uvw ∈ K⁺`, `v ∈ K^d`,
/// `uv ∉ K⁺`, found by exhaustive enumeration.
pub fn sync_witness_bruteforce(code: &[Word], d: usize, max_len: usize) -> Option<(Word, Word, Word)> {
    for x in ab().words_up_to(max_len) {
        if !in_power(code, &x, None) {
            continue;
        }
        for i in 0..=x.len() {
            for j in i..=x.len() {
                if in_power(code, &x[i..j], Some(d)) && !in_power(code, &x[..j], None) {
                    return Some((x[..i].to_vec(), x[i..j].to_vec(), x[j..].to_vec()));
                }
            }
        }
    }
    None
}

/// Distinct random finite prefix codes over `{a, b}` with words of length
/// at most 3.
pub fn random_prefix_codes(count: usize, seed: u64) -> Vec<Vec<Word>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = ab().words_up_to(3).into_iter().filter(|w| !w.is_empty()).collect::<Vec<_>>();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let mut code: Vec<Word> = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let w = pool[rng.gen_range(0..pool.len())].clone();
            if code.iter().all(|c| !c.starts_with(&w) && !w.starts_with(c)) {
                code.push(w);
            }
        }
        code.sort();
        if seen.insert(code.clone()) {
            out.push(code);
        }
    }
    out
}
