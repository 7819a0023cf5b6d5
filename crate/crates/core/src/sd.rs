//! Prefix codes, synchronization delay, and checked SD expressions.
//!
//! Every semantic side condition is decided on automata and, when it fails,
//! comes with a shortest witness.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automata::{parse_regex, Alphabet, Dfa, Regex, Word};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::oracles::{class_contains, ClassSelector};

/// Distance of a node and the edge it was first reached by.
type Visit<N> = (usize, Option<(N, Option<usize>)>);

/// Shortest path search where `None`-labelled edges are free; returns the
/// labels along the path.
fn shortest_run<N: Ord + Clone>(
    start: N,
    succ: impl Fn(&N) -> Vec<(Option<usize>, N)>,
    accept: impl Fn(&N) -> bool,
) -> Option<Vec<Option<usize>>> {
    let mut best: BTreeMap<N, Visit<N>> = BTreeMap::new();
    best.insert(start.clone(), (0, None));
    let mut queue = VecDeque::from([(0usize, start)]);
    while let Some((dist, node)) = queue.pop_front() {
        if best[&node].0 < dist {
            continue;
        }
        if accept(&node) {
            let mut labels = Vec::new();
            let mut cur = node;
            while let Some((prev, label)) = best[&cur].1.clone() {
                labels.push(label);
                cur = prev;
            }
            labels.reverse();
            return Some(labels);
        }
        for (label, next) in succ(&node) {
            let d = dist + usize::from(label.is_some());
            if best.get(&next).is_some_and(|(old, _)| *old <= d) {
                continue;
            }
            best.insert(next.clone(), (d, Some((node.clone(), label))));
            if label.is_some() {
                queue.push_back((d, next));
            } else {
                queue.push_front((d, next));
            }
        }
    }
    None
}

/// Splits a labelled path at its free edges.
fn segments(labels: &[Option<usize>]) -> Vec<Word> {
    let mut out = alloc::vec![Vec::new()];
    for l in labels {
        match l {
            Some(a) => out.last_mut().expect("nonempty").push(*a),
            None => out.push(Vec::new()),
        }
    }
    out
}

/// Why a language fails to be a prefix code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixViolation {
    ContainsEmptyWord,
    /// Both words belong to the language and `shorter` is a strict prefix
    /// of `longer`.
    Prefix { shorter: Word, longer: Word },
}

pub fn prefix_code_violation(k: &Dfa) -> Result<Option<PrefixViolation>> {
    if k.accepts(&[]) {
        return Ok(Some(PrefixViolation::ContainsEmptyWord));
    }
    let nonempty = Dfa::epsilon(k.alphabet()).complement();
    let clash = k.intersection(&k.concat(&nonempty)?)?;
    Ok(clash.shortest_accepted().map(|longer| {
        let cut = (1..longer.len()).find(|&i| k.accepts(&longer[..i])).expect("a proper prefix lies in K");
        PrefixViolation::Prefix { shorter: longer[..cut].to_vec(), longer }
    }))
}

pub fn is_prefix_code(k: &Dfa) -> Result<bool> {
    Ok(prefix_code_violation(k)?.is_none())
}

/// Words with `u·v·w ∈ K⁺`, `v ∈ K^d` and `u·v ∉ K⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncWitness {
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SyncNode {
    Left(usize),
    Middle(usize, usize),
    Right(usize),
}

/// A shortest witness that `k` lacks synchronization delay `d`.
pub fn sync_delay_witness(k: &Dfa, d: usize) -> Result<Option<SyncWitness>> {
    if d == 0 {
        return Err(Error::precondition("synchronization delay must be at least 1"));
    }
    if !is_prefix_code(k)? {
        return Err(Error::precondition("language is not a prefix code"));
    }
    let plus = k.plus();
    let block = k.power(d);
    let letters = k.alphabet().len();
    let run = shortest_run(
        SyncNode::Left(plus.initial()),
        |n| match *n {
            SyncNode::Left(p) => {
                let mut out: Vec<_> = (0..letters).map(|a| (Some(a), SyncNode::Left(plus.next(p, a)))).collect();
                out.push((None, SyncNode::Middle(p, block.initial())));
                out
            }
            SyncNode::Middle(p, q) => {
                let mut out: Vec<_> =
                    (0..letters).map(|a| (Some(a), SyncNode::Middle(plus.next(p, a), block.next(q, a)))).collect();
                if block.is_final(q) && !plus.is_final(p) {
                    out.push((None, SyncNode::Right(p)));
                }
                out
            }
            SyncNode::Right(p) => (0..letters).map(|a| (Some(a), SyncNode::Right(plus.next(p, a)))).collect(),
        },
        |n| matches!(*n, SyncNode::Right(p) if plus.is_final(p)),
    );
    Ok(run.map(|labels| {
        let mut parts = segments(&labels).into_iter();
        let (u, v, w) = (parts.next(), parts.next(), parts.next());
        SyncWitness { u: u.unwrap_or_default(), v: v.unwrap_or_default(), w: w.unwrap_or_default() }
    }))
}

pub fn has_sync_delay(k: &Dfa, d: usize) -> Result<bool> {
    Ok(sync_delay_witness(k, d)?.is_none())
}

/// Least `d ≤ dmax` such that `k` has synchronization delay `d`.
pub fn min_sync_delay(k: &Dfa, dmax: usize) -> Result<Option<usize>> {
    if !is_prefix_code(k)? {
        return Err(Error::precondition("language is not a prefix code"));
    }
    for d in 1..=dmax {
        if has_sync_delay(k, d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

pub fn are_disjoint(k: &Dfa, l: &Dfa) -> Result<bool> {
    Ok(k.intersection(l)?.is_empty())
}

/// A word with two factorizations `w[..first]·w[first..]` and
/// `w[..second]·w[second..]` in `K·L`, `first < second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub word: Word,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SplitNode {
    Before(usize),
    Between { k: usize, l: usize, moved: bool },
    After(usize, usize),
}

pub fn ambiguity_witness(k: &Dfa, l: &Dfa) -> Result<Option<SplitWitness>> {
    if k.alphabet() != l.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let letters = k.alphabet().len();
    let run = shortest_run(
        SplitNode::Before(k.initial()),
        |n| match *n {
            SplitNode::Before(p) => {
                let mut out: Vec<_> = (0..letters).map(|a| (Some(a), SplitNode::Before(k.next(p, a)))).collect();
                if k.is_final(p) {
                    out.push((None, SplitNode::Between { k: p, l: l.initial(), moved: false }));
                }
                out
            }
            SplitNode::Between { k: p, l: q, moved } => {
                let mut out: Vec<_> = (0..letters)
                    .map(|a| (Some(a), SplitNode::Between { k: k.next(p, a), l: l.next(q, a), moved: true }))
                    .collect();
                if moved && k.is_final(p) {
                    out.push((None, SplitNode::After(q, l.initial())));
                }
                out
            }
            SplitNode::After(q, r) => {
                (0..letters).map(|a| (Some(a), SplitNode::After(l.next(q, a), l.next(r, a)))).collect()
            }
        },
        |n| matches!(*n, SplitNode::After(q, r) if l.is_final(q) && l.is_final(r)),
    );
    Ok(run.map(|labels| {
        let parts = segments(&labels);
        let first = parts[0].len();
        let second = first + parts[1].len();
        SplitWitness { word: parts.concat(), first, second }
    }))
}

pub fn is_unambiguous_concat(k: &Dfa, l: &Dfa) -> Result<bool> {
    Ok(ambiguity_witness(k, l)?.is_none())
}

/// An SD expression. Side conditions are claims until
/// [`validate_sd_expression`] checks them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdExpr {
    Empty,
    Letter(usize),
    /// Intersection with a language claimed to belong to the class.
    Intersect(Box<SdExpr>, Regex),
    DisjointUnion(Box<SdExpr>, Box<SdExpr>),
    UnambiguousConcat(Box<SdExpr>, Box<SdExpr>),
    Star { child: Box<SdExpr>, delay: usize },
}

impl SdExpr {
    pub fn kind(&self) -> &'static str {
        match self {
            SdExpr::Empty => "empty",
            SdExpr::Letter(_) => "letter",
            SdExpr::Intersect(..) => "capC",
            SdExpr::DisjointUnion(..) => "dunion",
            SdExpr::UnambiguousConcat(..) => "uconcat",
            SdExpr::Star { .. } => "star",
        }
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            SdExpr::Empty => "empty".into(),
            SdExpr::Letter(a) => format!("{}", alphabet.symbol(*a)),
            SdExpr::Intersect(e, r) => format!("capC({}, \"{}\")", e.to_text(alphabet), r.to_text(alphabet)),
            SdExpr::DisjointUnion(l, r) => format!("dunion({}, {})", l.to_text(alphabet), r.to_text(alphabet)),
            SdExpr::UnambiguousConcat(l, r) => format!("uconcat({}, {})", l.to_text(alphabet), r.to_text(alphabet)),
            SdExpr::Star { child, delay } => format!("star({}, d={delay})", child.to_text(alphabet)),
        }
    }
}

/// Parses the text format:
///
/// ```text
/// E ::= empty | % | <letters> | star(E, d=<n>) | uconcat(E, E)
///     | dunion(E, E) | capC(E, "<regex>")
/// ```
///
/// A run of several letters stands for their concatenation. `#` starts a
/// comment running to the end of the line.
pub fn parse_sd(text: &str, alphabet: &Alphabet) -> Result<SdExpr> {
    let mut p = SdParser { chars: text.chars().collect(), pos: 0, alphabet };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(p.error(format!("unexpected {c:?}"))),
    }
}

struct SdParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl SdParser<'_> {
    fn peek(&mut self) -> Option<char> {
        loop {
            match self.chars.get(self.pos) {
                Some(c) if c.is_whitespace() => self.pos += 1,
                Some('#') => {
                    while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                        self.pos += 1;
                    }
                }
                other => return other.copied(),
            }
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn ident(&mut self) -> String {
        self.peek();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expr(&mut self) -> Result<SdExpr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('%') => {
                self.pos += 1;
                Ok(SdExpr::Empty)
            }
            Some(c) if c.is_ascii_alphanumeric() => {
                let start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "empty" => Ok(SdExpr::Empty),
                    "star" => {
                        self.expect('(')?;
                        let child = self.expr()?;
                        self.expect(',')?;
                        if self.ident() != "d" {
                            return Err(self.error("expected d=<delay>".into()));
                        }
                        self.expect('=')?;
                        let digits = self.ident();
                        let delay: usize = digits.parse().map_err(|_| self.error(format!("bad delay {digits:?}")))?;
                        if delay == 0 {
                            return Err(self.error("delay must be at least 1".into()));
                        }
                        self.expect(')')?;
                        Ok(SdExpr::Star { child: Box::new(child), delay })
                    }
                    "uconcat" | "dunion" => {
                        self.expect('(')?;
                        let l = Box::new(self.expr()?);
                        self.expect(',')?;
                        let r = Box::new(self.expr()?);
                        self.expect(')')?;
                        Ok(if word == "uconcat" { SdExpr::UnambiguousConcat(l, r) } else { SdExpr::DisjointUnion(l, r) })
                    }
                    "capC" => {
                        self.expect('(')?;
                        let child = self.expr()?;
                        self.expect(',')?;
                        self.expect('"')?;
                        let from = self.pos;
                        let Some(len) = self.chars[from..].iter().position(|&c| c == '"') else {
                            return Err(self.error("unterminated string".into()));
                        };
                        let text: String = self.chars[from..from + len].iter().collect();
                        let regex = parse_regex(&text, self.alphabet).map_err(|e| match e {
                            Error::Syntax { offset, message } => Error::Syntax { offset: from + offset, message },
                            Error::UnknownSymbol { symbol, offset } => Error::UnknownSymbol { symbol, offset: from + offset },
                            other => other,
                        })?;
                        self.pos = from + len + 1;
                        self.expect(')')?;
                        Ok(SdExpr::Intersect(Box::new(child), regex))
                    }
                    _ => {
                        let mut letters = Vec::new();
                        for (i, c) in word.chars().enumerate() {
                            match self.alphabet.index(c) {
                                Some(a) => letters.push(SdExpr::Letter(a)),
                                None => return Err(Error::UnknownSymbol { symbol: c, offset: start + i }),
                            }
                        }
                        let mut it = letters.into_iter();
                        let first = it.next().expect("identifier is nonempty");
                        Ok(it.fold(first, |acc, x| SdExpr::UnambiguousConcat(Box::new(acc), Box::new(x))))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdViolationKind {
    /// The `capC` language is not in the class.
    NotInClass,
    NotDisjoint { word: Word },
    Ambiguous(SplitWitness),
    NotPrefixCode(PrefixViolation),
    NoSyncDelay { delay: usize, witness: SyncWitness },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdViolation {
    /// Child indices from the root down to the offending node.
    pub path: Vec<usize>,
    pub node: &'static str,
    pub kind: SdViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdOutcome {
    Valid(Dfa),
    Invalid(Vec<SdViolation>),
}

/// Compiles `e` bottom-up and checks every side condition against the
/// class `sel`. Violations are collected from all nodes.
pub fn validate_sd_expression(e: &SdExpr, alphabet: &Alphabet, sel: &ClassSelector, cfg: &Config) -> Result<SdOutcome> {
    let mut violations = Vec::new();
    let mut path = Vec::new();
    let dfa = validate_node(e, alphabet, sel, cfg, &mut path, &mut violations)?;
    Ok(if violations.is_empty() { SdOutcome::Valid(dfa) } else { SdOutcome::Invalid(violations) })
}

fn validate_node(
    e: &SdExpr,
    alphabet: &Alphabet,
    sel: &ClassSelector,
    cfg: &Config,
    path: &mut Vec<usize>,
    out: &mut Vec<SdViolation>,
) -> Result<Dfa> {
    let mut child = |i: usize, c: &SdExpr, out: &mut Vec<SdViolation>| -> Result<Dfa> {
        path.push(i);
        let d = validate_node(c, alphabet, sel, cfg, path, out);
        path.pop();
        d
    };
    let (dfa, kind) = match e {
        SdExpr::Empty => (Dfa::empty(alphabet), None),
        SdExpr::Letter(a) => {
            if *a >= alphabet.len() {
                return Err(Error::invalid(format!("letter index {a} outside the alphabet")));
            }
            (Dfa::letter(alphabet, *a), None)
        }
        SdExpr::Intersect(c, r) => {
            let k = child(0, c, out)?;
            let l = crate::automata::compile(r, alphabet);
            let kind = (!class_contains(sel, &l, cfg)?).then_some(SdViolationKind::NotInClass);
            (k.intersection(&l)?.minimize(), kind)
        }
        SdExpr::DisjointUnion(a, b) => {
            let k = child(0, a, out)?;
            let l = child(1, b, out)?;
            let kind = k.intersection(&l)?.shortest_accepted().map(|word| SdViolationKind::NotDisjoint { word });
            (k.union(&l)?.minimize(), kind)
        }
        SdExpr::UnambiguousConcat(a, b) => {
            let k = child(0, a, out)?;
            let l = child(1, b, out)?;
            let kind = ambiguity_witness(&k, &l)?.map(SdViolationKind::Ambiguous);
            (k.concat(&l)?, kind)
        }
        SdExpr::Star { child: c, delay } => {
            let k = child(0, c, out)?;
            let kind = match prefix_code_violation(&k)? {
                Some(v) => Some(SdViolationKind::NotPrefixCode(v)),
                None => sync_delay_witness(&k, *delay)?.map(|witness| SdViolationKind::NoSyncDelay { delay: *delay, witness }),
            };
            (k.star(), kind)
        }
    };
    if let Some(kind) = kind {
        out.push(SdViolation { path: path.clone(), node: e.kind(), kind });
    }
    Ok(dfa)
}
