//! Regular expressions and complete deterministic automata.
//!
//! Symbols are indices into an [`Alphabet`]; words are slices of such
//! indices. Every [`Dfa`] is complete, which keeps complementation and the
//! transition-monoid construction total.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A word, as a sequence of symbol indices.
pub type Word = Vec<usize>;

/// An ordered list of distinct single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: &[char]) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("alphabet must be nonempty"));
        }
        for (i, c) in symbols.iter().enumerate() {
            if !c.is_ascii_alphanumeric() {
                return Err(Error::invalid(format!("symbol {c:?} is not an ASCII letter or digit")));
            }
            if symbols[..i].contains(c) {
                return Err(Error::invalid(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols: symbols.to_vec() })
    }

    /// Builds an alphabet from the characters of `s`, in order.
    pub fn parse(s: &str) -> Result<Self> {
        let symbols: Vec<char> = s.chars().collect();
        Self::new(&symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> char {
        self.symbols[i]
    }

    pub fn index(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .enumerate()
            .map(|(offset, c)| self.index(c).ok_or(Error::UnknownSymbol { symbol: c, offset }))
            .collect()
    }

    pub fn render(&self, w: &[usize]) -> String {
        w.iter().map(|&a| self.symbols[a]).collect()
    }

    /// All words of length exactly `n`, in length-lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let k = self.len();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * k);
            for w in &out {
                for a in 0..k {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `n`.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|l| self.words_of_length(l)).collect()
    }
}

/// Regular expression syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(usize),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Complement(Box<Regex>),
    Intersection(Box<Regex>, Box<Regex>),
}

impl Regex {
    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Letter(_) => 1,
            Regex::Star(r) | Regex::Complement(r) => 1 + r.size(),
            Regex::Union(a, b) | Regex::Concat(a, b) | Regex::Intersection(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Renders the expression back into the concrete syntax.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            Regex::Empty => "%".into(),
            Regex::Epsilon => "_".into(),
            Regex::Letter(a) => alphabet.symbol(*a).into(),
            Regex::Union(a, b) => format!("({}+{})", a.to_text(alphabet), b.to_text(alphabet)),
            Regex::Concat(a, b) => format!("({}{})", a.to_text(alphabet), b.to_text(alphabet)),
            Regex::Intersection(a, b) => {
                format!("({}&{})", a.to_text(alphabet), b.to_text(alphabet))
            }
            Regex::Star(a) => format!("({})*", a.to_text(alphabet)),
            Regex::Complement(a) => format!("~({})", a.to_text(alphabet)),
        }
    }
}

/// Parses a regular expression over `alphabet`.
///
/// Grammar: `expr := term ('+' term)*`, `term := factor ('&' factor)*`,
/// `factor := atom*`, `atom := letter | '_' | '%' | '~' atom | atom '*' |
/// '(' expr ')'`. Spaces are ignored; `ε` and `∅` are accepted as aliases of
/// `_` and `%`. Offsets in errors count characters.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex> {
    let mut p = RegexParser { chars: text.chars().collect(), pos: 0, alphabet };
    let r = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(r),
        Some(c) => Err(p.unexpected(c)),
    }
}

struct RegexParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl RegexParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn unexpected(&self, c: char) -> Error {
        Error::Syntax { offset: self.pos, message: format!("unexpected {c:?}") }
    }

    fn expr(&mut self) -> Result<Regex> {
        let mut r = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            r = Regex::Union(Box::new(r), Box::new(self.term()?));
        }
        Ok(r)
    }

    fn term(&mut self) -> Result<Regex> {
        let mut r = self.factor()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            r = Regex::Intersection(Box::new(r), Box::new(self.factor()?));
        }
        Ok(r)
    }

    fn factor(&mut self) -> Result<Regex> {
        let mut r: Option<Regex> = None;
        while let Some(c) = self.peek() {
            if matches!(c, '+' | '&' | ')') {
                break;
            }
            let a = self.atom()?;
            r = Some(match r {
                None => a,
                Some(prev) => Regex::Concat(Box::new(prev), Box::new(a)),
            });
        }
        Ok(r.unwrap_or(Regex::Epsilon))
    }

    fn atom(&mut self) -> Result<Regex> {
        let c = match self.peek() {
            Some(c) => c,
            None => {
                return Err(Error::Syntax { offset: self.pos, message: "unexpected end of input".into() })
            }
        };
        if c == '~' {
            self.pos += 1;
            return Ok(Regex::Complement(Box::new(self.atom()?)));
        }
        let start = self.pos;
        self.pos += 1;
        let mut r = match c {
            '_' | 'ε' => Regex::Epsilon,
            '%' | '∅' => Regex::Empty,
            '(' => {
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Syntax { offset: self.pos, message: "expected ')'".into() });
                }
                self.pos += 1;
                inner
            }
            c if c.is_alphanumeric() => match self.alphabet.index(c) {
                Some(a) => Regex::Letter(a),
                None => return Err(Error::UnknownSymbol { symbol: c, offset: start }),
            },
            c => {
                self.pos = start;
                return Err(self.unexpected(c));
            }
        };
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }
}

/// Boolean combination performed by [`Dfa::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    Union,
    Intersection,
    Difference,
}

/// A complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    /// Builds a DFA from a row-per-state transition table.
    pub fn new(alphabet: Alphabet, initial: usize, finals: &[usize], delta: Vec<Vec<usize>>) -> Result<Self> {
        let states = delta.len();
        if states == 0 {
            return Err(Error::invalid("a DFA needs at least one state"));
        }
        if initial >= states {
            return Err(Error::invalid("initial state out of range"));
        }
        let k = alphabet.len();
        let mut flat = Vec::with_capacity(states * k);
        for (q, row) in delta.iter().enumerate() {
            if row.len() != k {
                return Err(Error::invalid(format!("row {q} has {} entries, expected {k}", row.len())));
            }
            for &t in row {
                if t >= states {
                    return Err(Error::invalid(format!("transition target {t} out of range")));
                }
                flat.push(t);
            }
        }
        let mut fin = vec![false; states];
        for &f in finals {
            if f >= states {
                return Err(Error::invalid(format!("final state {f} out of range")));
            }
            fin[f] = true;
        }
        Ok(Dfa { alphabet, states, initial, finals: fin, delta: flat })
    }

    fn from_parts(alphabet: Alphabet, initial: usize, finals: Vec<bool>, delta: Vec<usize>) -> Self {
        Dfa { states: finals.len(), alphabet, initial, finals, delta }
    }

    pub fn empty(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet.clone(), 0, vec![false], vec![0; k])
    }

    pub fn universal(alphabet: &Alphabet) -> Self {
        Self::empty(alphabet).complement()
    }

    pub fn epsilon(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet.clone(), 0, vec![true, false], vec![1; 2 * k])
    }

    pub fn letter(alphabet: &Alphabet, a: usize) -> Self {
        Self::word(alphabet, &[a])
    }

    /// The DFA of the singleton language `{w}`.
    pub fn word(alphabet: &Alphabet, w: &[usize]) -> Self {
        let k = alphabet.len();
        let n = w.len();
        let sink = n + 1;
        let mut delta = vec![sink; (n + 2) * k];
        for (i, &a) in w.iter().enumerate() {
            delta[i * k + a] = i + 1;
        }
        let mut finals = vec![false; n + 2];
        finals[n] = true;
        Self::from_parts(alphabet.clone(), 0, finals, delta)
    }

    /// The DFA of a finite language.
    pub fn finite(alphabet: &Alphabet, words: &[Word]) -> Self {
        let mut d = Self::empty(alphabet);
        for w in words {
            d = d.product(&Self::word(alphabet, w), ProductMode::Union).expect("same alphabet").minimize();
        }
        d
    }

    /// Words whose length is congruent to `r` modulo `m`.
    pub fn length_mod(alphabet: &Alphabet, m: usize, r: usize) -> Self {
        let k = alphabet.len();
        let m = m.max(1);
        let delta = (0..m).flat_map(|q| vec![(q + 1) % m; k]).collect();
        let mut finals = vec![false; m];
        finals[r % m] = true;
        Self::from_parts(alphabet.clone(), 0, finals, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.states).filter(|&q| self.finals[q]).collect()
    }

    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    /// Transition table, one row per state.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let k = self.alphabet.len();
        self.delta.chunks(k.max(1)).map(|r| r.to_vec()).take(self.states).collect()
    }

    pub fn run_from(&self, q: usize, w: &[usize]) -> usize {
        w.iter().fold(q, |q, &a| self.next(q, a))
    }

    pub fn run(&self, w: &[usize]) -> usize {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        self.finals[self.run(w)]
    }

    /// Like [`Dfa::accepts`] but takes the word as text.
    pub fn accepts_str(&self, w: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(w)?))
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// A shortest accepted word, least in symbol order among those.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let k = self.alphabet.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.states];
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..k {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn complement(&self) -> Self {
        let mut d = self.clone();
        for f in d.finals.iter_mut() {
            *f = !*f;
        }
        d
    }

    fn check_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    /// Reachable part of the product automaton for a Boolean combination.
    pub fn product(&self, other: &Dfa, mode: ProductMode) -> Result<Dfa> {
        self.check_alphabet(other)?;
        let k = self.alphabet.len();
        let mut index = BTreeMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0usize);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let t = (self.next(p, a), other.next(q, a));
                let next_id = pairs.len();
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    next_id
                });
                delta.push(id);
            }
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| {
                let (x, y) = (self.finals[p], other.finals[q]);
                match mode {
                    ProductMode::Union => x || y,
                    ProductMode::Intersection => x && y,
                    ProductMode::Difference => x && !y,
                }
            })
            .collect();
        Ok(Self::from_parts(self.alphabet.clone(), 0, finals, delta))
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, ProductMode::Union)
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, ProductMode::Intersection)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, ProductMode::Difference)
    }

    /// Language equality, decided by emptiness of the symmetric difference.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty() && other.difference(self)?.is_empty())
    }

    /// Minimal complete DFA with states numbered in breadth-first order from
    /// the initial state, exploring symbols in alphabet order.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        // Restrict to reachable states first.
        let reach = self.bfs_order();
        let mut pos = vec![usize::MAX; self.states];
        for (i, &q) in reach.iter().enumerate() {
            pos[q] = i;
        }
        let n = reach.len();
        let succ = |i: usize, a: usize| pos[self.next(reach[i], a)];

        // Moore refinement.
        let mut class: Vec<usize> = reach.iter().map(|&q| usize::from(self.finals[q])).collect();
        let mut count = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let mut sigs = BTreeMap::new();
            let mut next = vec![0; n];
            for i in 0..n {
                let sig: Vec<usize> =
                    core::iter::once(class[i]).chain((0..k).map(|a| class[succ(i, a)])).collect();
                let len = sigs.len();
                next[i] = *sigs.entry(sig).or_insert(len);
            }
            let new_count = sigs.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Canonical numbering: BFS on the quotient.
        let mut rep = vec![usize::MAX; count];
        for i in (0..n).rev() {
            rep[class[i]] = i;
        }
        let mut number = vec![usize::MAX; count];
        let mut order = vec![class[0]];
        number[class[0]] = 0;
        let mut j = 0;
        while j < order.len() {
            let c = order[j];
            for a in 0..k {
                let t = class[succ(rep[c], a)];
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                }
            }
            j += 1;
        }
        let mut delta = Vec::with_capacity(count * k);
        let mut finals = Vec::with_capacity(count);
        for &c in &order {
            finals.push(self.finals[reach[rep[c]]]);
            for a in 0..k {
                delta.push(number[class[succ(rep[c], a)]]);
            }
        }
        Self::from_parts(self.alphabet.clone(), 0, finals, delta)
    }

    /// Reachable states in BFS order.
    fn bfs_order(&self) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.states];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..k {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Language concatenation `L(self)·L(other)`.
    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        self.check_alphabet(other)?;
        let k = self.alphabet.len();
        let start = |p: usize| -> (usize, Vec<usize>) {
            let set = if self.finals[p] { vec![other.initial] } else { Vec::new() };
            (p, set)
        };
        let accepting = |s: &(usize, Vec<usize>)| s.1.iter().any(|&q| other.finals[q]);
        Ok(self.subset_construction(start(self.initial), k, accepting, |(p, set), a| {
            let p2 = self.next(*p, a);
            let mut t: Vec<usize> = set.iter().map(|&q| other.next(q, a)).collect();
            if self.finals[p2] {
                t.push(other.initial);
            }
            t.sort_unstable();
            t.dedup();
            (p2, t)
        }))
    }

    /// Kleene star.
    pub fn star(&self) -> Dfa {
        let k = self.alphabet.len();
        // The flag marks the fresh initial state, which accepts the empty word.
        let init = (true, vec![self.initial]);
        let accepting = |s: &(bool, Vec<usize>)| s.0 || s.1.iter().any(|&q| self.finals[q]);
        self.subset_construction(init, k, accepting, |(_, set), a| {
            let mut t: Vec<usize> = set.iter().map(|&q| self.next(q, a)).collect();
            if t.iter().any(|&q| self.finals[q]) {
                t.push(self.initial);
            }
            t.sort_unstable();
            t.dedup();
            (false, t)
        })
    }

    /// `L⁺ = L·L*`.
    pub fn plus(&self) -> Dfa {
        self.concat(&self.star()).expect("same alphabet").minimize()
    }

    /// `L^d`, with `L^0 = {ε}`.
    pub fn power(&self, d: usize) -> Dfa {
        let mut r = Dfa::epsilon(&self.alphabet);
        for _ in 0..d {
            r = r.concat(self).expect("same alphabet").minimize();
        }
        r
    }

    fn subset_construction<S: Ord + Clone>(
        &self,
        init: S,
        k: usize,
        accepting: impl Fn(&S) -> bool,
        step: impl Fn(&S, usize) -> S,
    ) -> Dfa {
        let mut index = BTreeMap::new();
        let mut states = vec![init.clone()];
        index.insert(init, 0usize);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for a in 0..k {
                let t = step(&states[i], a);
                let next_id = states.len();
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        index.insert(t.clone(), next_id);
                        states.push(t);
                        next_id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let finals = states.iter().map(accepting).collect();
        Self::from_parts(self.alphabet.clone(), 0, finals, delta).minimize()
    }

    /// Isomorphism of minimal automata, as canonical forms.
    pub fn same_minimal(&self, other: &Dfa) -> bool {
        self.minimize() == other.minimize()
    }
}

/// Compiles a regular expression into a minimal complete DFA.
pub fn compile(r: &Regex, alphabet: &Alphabet) -> Dfa {
    let d = match r {
        Regex::Empty => Dfa::empty(alphabet),
        Regex::Epsilon => Dfa::epsilon(alphabet),
        Regex::Letter(a) => Dfa::letter(alphabet, *a),
        Regex::Union(x, y) => compile(x, alphabet).union(&compile(y, alphabet)).expect("same alphabet"),
        Regex::Intersection(x, y) => {
            compile(x, alphabet).intersection(&compile(y, alphabet)).expect("same alphabet")
        }
        Regex::Concat(x, y) => compile(x, alphabet).concat(&compile(y, alphabet)).expect("same alphabet"),
        Regex::Star(x) => compile(x, alphabet).star(),
        Regex::Complement(x) => compile(x, alphabet).complement(),
    };
    d.minimize()
}

/// Parses and compiles in one step.
pub fn compile_str(text: &str, alphabet: &Alphabet) -> Result<Dfa> {
    Ok(compile(&parse_regex(text, alphabet)?, alphabet))
}

/// Direct recursive denotation check, independent of any automaton.
pub fn regex_matches(r: &Regex, w: &[usize]) -> bool {
    match r {
        Regex::Empty => false,
        Regex::Epsilon => w.is_empty(),
        Regex::Letter(a) => w == [*a],
        Regex::Union(x, y) => regex_matches(x, w) || regex_matches(y, w),
        Regex::Intersection(x, y) => regex_matches(x, w) && regex_matches(y, w),
        Regex::Complement(x) => !regex_matches(x, w),
        Regex::Concat(x, y) => (0..=w.len()).any(|i| regex_matches(x, &w[..i]) && regex_matches(y, &w[i..])),
        Regex::Star(x) => {
            // ok[i]: w[..i] is in x*.
            let mut ok = vec![false; w.len() + 1];
            ok[0] = true;
            for j in 1..=w.len() {
                ok[j] = (0..j).any(|i| ok[i] && regex_matches(x, &w[i..j]));
            }
            ok[w.len()]
        }
    }
}
