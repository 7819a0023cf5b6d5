//! Temporal formulas with language-parameterized until and since.
//!
//! A word `w` has positions `0..=|w|+1`; position `i` in `1..=|w|` carries
//! the letter `w[i-1]`, and the two endpoints are unlabeled. The infix
//! `w(i, j)` consists of the letters strictly between `i` and `j`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::automata::{compile, parse_regex, Alphabet, Dfa, Regex, Word};
use crate::error::{Error, Result};

/// Language parameter of a temporal modality. `regex == None` stands for
/// `A*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangParam {
    pub regex: Option<Regex>,
    pub dfa: Dfa,
}

impl LangParam {
    pub fn universal(alphabet: &Alphabet) -> Self {
        LangParam { regex: None, dfa: Dfa::universal(alphabet) }
    }

    pub fn from_regex(regex: Regex, alphabet: &Alphabet) -> Self {
        let dfa = compile(&regex, alphabet);
        LangParam { regex: Some(regex), dfa }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl {
    Top,
    Min,
    Max,
    Letter(usize),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Until(LangParam, Box<Ltl>, Box<Ltl>),
    Since(LangParam, Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }

    pub fn and(f: Ltl, g: Ltl) -> Ltl {
        Ltl::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Ltl, g: Ltl) -> Ltl {
        Ltl::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Ltl, g: Ltl) -> Ltl {
        Ltl::or(Ltl::not(f), g)
    }

    pub fn until(l: LangParam, f: Ltl, g: Ltl) -> Ltl {
        Ltl::Until(l, Box::new(f), Box::new(g))
    }

    pub fn since(l: LangParam, f: Ltl, g: Ltl) -> Ltl {
        Ltl::Since(l, Box::new(f), Box::new(g))
    }

    /// `X f = U(¬⊤, f)`.
    pub fn next(alphabet: &Alphabet, f: Ltl) -> Ltl {
        Ltl::until(LangParam::universal(alphabet), Ltl::not(Ltl::Top), f)
    }

    /// `F_L f = U_L(⊤, f)`.
    pub fn eventually(l: LangParam, f: Ltl) -> Ltl {
        Ltl::until(l, Ltl::Top, f)
    }

    pub fn is_pure_future(&self) -> bool {
        match self {
            Ltl::Top | Ltl::Min | Ltl::Max | Ltl::Letter(_) => true,
            Ltl::Not(f) => f.is_pure_future(),
            Ltl::And(f, g) | Ltl::Or(f, g) | Ltl::Until(_, f, g) => f.is_pure_future() && g.is_pure_future(),
            Ltl::Since(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Ltl::Top | Ltl::Min | Ltl::Max | Ltl::Letter(_) => 1,
            Ltl::Not(f) => 1 + f.size(),
            Ltl::And(f, g) | Ltl::Or(f, g) | Ltl::Until(_, f, g) | Ltl::Since(_, f, g) => 1 + f.size() + g.size(),
        }
    }

    /// Fully parenthesized text accepted by [`parse_ltl`].
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let param = |l: &LangParam| match &l.regex {
            None => String::new(),
            Some(r) => format!("[{}]", r.to_text(alphabet)),
        };
        match self {
            Ltl::Top => "top".into(),
            Ltl::Min => "min".into(),
            Ltl::Max => "max".into(),
            Ltl::Letter(a) => format!("{}", alphabet.symbol(*a)),
            Ltl::Not(f) => format!("!{}", f.to_text(alphabet)),
            Ltl::And(f, g) => format!("({} & {})", f.to_text(alphabet), g.to_text(alphabet)),
            Ltl::Or(f, g) => format!("({} | {})", f.to_text(alphabet), g.to_text(alphabet)),
            Ltl::Until(l, f, g) => format!("U{}({}, {})", param(l), f.to_text(alphabet), g.to_text(alphabet)),
            Ltl::Since(l, f, g) => format!("S{}({}, {})", param(l), f.to_text(alphabet), g.to_text(alphabet)),
        }
    }
}

/// Parses a formula:
///
/// ```text
/// f ::= g -> f | g            g ::= h ('|' h)*       h ::= u ('&' u)*
/// u ::= '!' u | top | min | max | <letter> | '(' f ')'
///     | U[<regex>](f, f) | S[<regex>](f, f) | U(f, f) | S(f, f)
///     | X(f) | F[<regex>](f) | F(f)
/// ```
///
/// A missing `[<regex>]` means `A*`. `X` and `F` are expanded on parsing.
pub fn parse_ltl(text: &str, alphabet: &Alphabet) -> Result<Ltl> {
    let mut p = LtlParser { chars: text.chars().collect(), pos: 0, alphabet };
    let f = p.formula()?;
    match p.peek() {
        None => Ok(f),
        Some(c) => Err(p.error(format!("unexpected {c:?}"))),
    }
}

struct LtlParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl LtlParser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.peek();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn formula(&mut self) -> Result<Ltl> {
        let f = self.disjunction()?;
        if self.eat("->") {
            Ok(Ltl::implies(f, self.formula()?))
        } else {
            Ok(f)
        }
    }

    fn disjunction(&mut self) -> Result<Ltl> {
        let mut f = self.conjunction()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            f = Ltl::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Ltl> {
        let mut f = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            f = Ltl::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn param(&mut self) -> Result<LangParam> {
        if self.peek() != Some('[') {
            return Ok(LangParam::universal(self.alphabet));
        }
        self.pos += 1;
        let from = self.pos;
        let Some(len) = self.chars[from..].iter().position(|&c| c == ']') else {
            return Err(self.error("unterminated '['".into()));
        };
        let text: String = self.chars[from..from + len].iter().collect();
        let regex = parse_regex(&text, self.alphabet).map_err(|e| match e {
            Error::Syntax { offset, message } => Error::Syntax { offset: from + offset, message },
            Error::UnknownSymbol { symbol, offset } => Error::UnknownSymbol { symbol, offset: from + offset },
            other => other,
        })?;
        self.pos = from + len + 1;
        Ok(LangParam::from_regex(regex, self.alphabet))
    }

    fn args(&mut self, n: usize) -> Result<Vec<Ltl>> {
        self.expect('(')?;
        let mut out = vec![self.formula()?];
        for _ in 1..n {
            self.expect(',')?;
            out.push(self.formula()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn unary(&mut self) -> Result<Ltl> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input".into()));
        };
        if c == '!' {
            self.pos += 1;
            return Ok(Ltl::not(self.unary()?));
        }
        if c == '(' {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(')')?;
            return Ok(f);
        }
        if !c.is_ascii_alphanumeric() {
            return Err(self.error(format!("unexpected {c:?}")));
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        let modality = matches!(self.chars.get(self.pos), Some('(' | '['));
        match (word.as_str(), modality) {
            ("top", _) => Ok(Ltl::Top),
            ("min", _) => Ok(Ltl::Min),
            ("max", _) => Ok(Ltl::Max),
            ("U" | "S", true) => {
                let l = self.param()?;
                let mut a = self.args(2)?;
                let (g, f) = (a.pop().expect("two arguments"), a.pop().expect("two arguments"));
                Ok(if word == "U" { Ltl::until(l, f, g) } else { Ltl::since(l, f, g) })
            }
            ("F", true) => {
                let l = self.param()?;
                let f = self.args(1)?.pop().expect("one argument");
                Ok(Ltl::eventually(l, f))
            }
            ("X", true) => {
                let f = self.args(1)?.pop().expect("one argument");
                Ok(Ltl::next(self.alphabet, f))
            }
            _ => {
                let mut chars = word.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => match self.alphabet.index(c) {
                        Some(a) => Ok(Ltl::Letter(a)),
                        None => Err(Error::UnknownSymbol { symbol: c, offset: start }),
                    },
                    _ => Err(Error::Syntax { offset: start, message: format!("unknown keyword {word:?}") }),
                }
            }
        }
    }
}

/// `table[j][k]` is the state reached on the infix `w(j, k)` for `j < k`.
fn infix_states(d: &Dfa, w: &[usize]) -> Vec<Vec<usize>> {
    let n = w.len() + 2;
    let mut table = vec![vec![usize::MAX; n]; n];
    for (j, row) in table.iter_mut().enumerate() {
        let mut q = d.initial();
        for k in j + 1..n {
            row[k] = q;
            if k <= w.len() {
                q = d.next(q, w[k - 1]);
            }
        }
    }
    table
}

/// Truth values of `phi` at every position of `w`.
pub fn eval_positions(phi: &Ltl, w: &[usize]) -> Vec<bool> {
    let n = w.len() + 2;
    match phi {
        Ltl::Top => vec![true; n],
        Ltl::Min => (0..n).map(|i| i == 0).collect(),
        Ltl::Max => (0..n).map(|i| i == n - 1).collect(),
        Ltl::Letter(a) => (0..n).map(|i| i >= 1 && i <= w.len() && w[i - 1] == *a).collect(),
        Ltl::Not(f) => eval_positions(f, w).into_iter().map(|x| !x).collect(),
        Ltl::And(f, g) => eval_positions(f, w).into_iter().zip(eval_positions(g, w)).map(|(x, y)| x && y).collect(),
        Ltl::Or(f, g) => eval_positions(f, w).into_iter().zip(eval_positions(g, w)).map(|(x, y)| x || y).collect(),
        Ltl::Until(l, f, g) => {
            let (sf, sg) = (eval_positions(f, w), eval_positions(g, w));
            let table = infix_states(&l.dfa, w);
            (0..n)
                .map(|i| {
                    for j in i + 1..n {
                        if sg[j] && l.dfa.is_final(table[i][j]) {
                            return true;
                        }
                        if !sf[j] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        Ltl::Since(l, f, g) => {
            let (sf, sg) = (eval_positions(f, w), eval_positions(g, w));
            let table = infix_states(&l.dfa, w);
            (0..n)
                .map(|i| {
                    for j in (0..i).rev() {
                        if sg[j] && l.dfa.is_final(table[j][i]) {
                            return true;
                        }
                        if !sf[j] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
    }
}

pub fn eval_at(phi: &Ltl, w: &[usize], i: usize) -> Result<bool> {
    if i > w.len() + 1 {
        return Err(Error::invalid(format!("position {i} outside 0..={}", w.len() + 1)));
    }
    Ok(eval_positions(phi, w)[i])
}

pub fn eval_word(phi: &Ltl, w: &[usize]) -> bool {
    eval_positions(phi, w)[0]
}

/// Words of length at most `maxlen` on which `phi` and `d` disagree, in
/// length-lexicographic order.
pub fn compare_sampled(phi: &Ltl, d: &Dfa, maxlen: usize) -> Vec<Word> {
    d.alphabet().words_up_to(maxlen).into_iter().filter(|w| eval_word(phi, w) != d.accepts(w)).collect()
}
