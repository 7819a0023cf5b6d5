//! Finite idempotent semirings and nice multiplicative rating maps.
//!
//! A nice multiplicative rating map `ρ: 2^(A*) → R` is determined by the
//! images of the letters; the image of a word is the product of its letter
//! images, and the image of a finite language is the sum over its words.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::automata::Alphabet;
use crate::error::{Error, Result};
use crate::monoid::{generate, FiniteMonoid, Morphism, RecognizedLanguage};

/// A finite idempotent semiring. The canonical order is `r ≤ s` iff
/// `r + s = s`.
pub trait Semiring {
    type Elem: Clone + Ord + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.add(x, y) == *y
    }

    fn pow(&self, x: &Self::Elem, k: usize) -> Self::Elem {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, x);
        }
        r
    }

    /// `x^ω`, the least positive power of `x` that is idempotent.
    fn omega(&self, x: &Self::Elem) -> Self::Elem {
        let mut p = x.clone();
        loop {
            let pp = self.mul(&p, &p);
            if pp == p {
                return p;
            }
            p = self.mul(&p, x);
        }
    }

    /// `x^ω + x^(ω+1)`.
    fn sf_closure(&self, x: &Self::Elem) -> Self::Elem {
        let w = self.omega(x);
        let w1 = self.mul(&w, x);
        self.add(&w, &w1)
    }
}

/// A semiring given by explicit tables over `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSemiring {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

/// First failed semiring axiom and the elements exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<usize>,
}

impl TableSemiring {
    /// Checks shapes only; see [`TableSemiring::validate`] for the axioms.
    pub fn new(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, zero: usize, one: usize) -> Result<Self> {
        let size = add.len();
        let ok = |t: &Vec<Vec<usize>>| t.len() == size && t.iter().all(|r| r.len() == size && r.iter().all(|&x| x < size));
        if size == 0 || !ok(&add) || !ok(&mul) || zero >= size || one >= size {
            return Err(Error::invalid("semiring tables must be square over 0..size"));
        }
        Ok(TableSemiring { size, add: add.concat(), mul: mul.concat(), zero, one })
    }

    /// The Boolean semiring: `+` is max, `·` is min.
    pub fn boolean() -> Self {
        Self::new(vec![vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![0, 1]], 0, 1).expect("valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add_table(&self) -> Vec<Vec<usize>> {
        self.add.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    fn a(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    fn m(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    /// Checks every axiom exhaustively and reports the first failure.
    pub fn validate(&self) -> core::result::Result<(), Violation> {
        let n = self.size;
        let fail = |axiom, witness: &[usize]| Err(Violation { axiom, witness: witness.to_vec() });
        for x in 0..n {
            if self.a(x, x) != x {
                return fail("addition idempotence", &[x, x]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.a(x, y) != self.a(y, x) {
                    return fail("addition commutativity", &[x, y]);
                }
            }
        }
        for x in 0..n {
            if self.a(self.zero, x) != x {
                return fail("additive identity", &[self.zero, x]);
            }
            if self.m(self.one, x) != x || self.m(x, self.one) != x {
                return fail("multiplicative identity", &[self.one, x]);
            }
            if self.m(self.zero, x) != self.zero || self.m(x, self.zero) != self.zero {
                return fail("zero annihilation", &[self.zero, x]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let w = [x, y, z];
                    if self.a(self.a(x, y), z) != self.a(x, self.a(y, z)) {
                        return fail("addition associativity", &w);
                    }
                    if self.m(self.m(x, y), z) != self.m(x, self.m(y, z)) {
                        return fail("multiplication associativity", &w);
                    }
                    if self.m(x, self.a(y, z)) != self.a(self.m(x, y), self.m(x, z)) {
                        return fail("left distributivity", &w);
                    }
                    if self.m(self.a(x, y), z) != self.a(self.m(x, z), self.m(y, z)) {
                        return fail("right distributivity", &w);
                    }
                }
            }
        }
        Ok(())
    }
}

impl Semiring for TableSemiring {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, x: &usize, y: &usize) -> usize {
        self.a(*x, *y)
    }
    fn mul(&self, x: &usize, y: &usize) -> usize {
        self.m(*x, *y)
    }
}

/// Largest monoid whose powerset fits in the bitset representation.
pub const POWERSET_MAX: usize = 64;

/// The powerset semiring `(2^M, ∪, ·)`, subsets stored as bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowersetSemiring {
    monoid: FiniteMonoid,
}

impl PowersetSemiring {
    pub fn new(monoid: FiniteMonoid, powerset_cap: usize) -> Result<Self> {
        let cap = powerset_cap.min(POWERSET_MAX);
        if monoid.size() > cap {
            return Err(Error::ResourceCap { what: "monoid size for powerset semiring", limit: cap });
        }
        Ok(PowersetSemiring { monoid })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn singleton(&self, s: usize) -> u64 {
        1u64 << s
    }

    /// Every element, in increasing bitset order.
    pub fn elements(&self) -> Vec<u64> {
        (0..1u64 << self.monoid.size()).collect()
    }
}

/// Indices of the set bits, in increasing order.
pub fn bits(x: u64) -> Vec<usize> {
    (0..64).filter(|&i| x >> i & 1 == 1).collect()
}

pub fn from_bits(xs: &[usize]) -> u64 {
    xs.iter().fold(0, |acc, &i| acc | 1u64 << i)
}

impl Semiring for PowersetSemiring {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1u64 << self.monoid.identity()
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        x | y
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        let mut out = 0u64;
        let mut xs = *x;
        while xs != 0 {
            let i = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            let mut ys = *y;
            while ys != 0 {
                let j = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                out |= 1u64 << self.monoid.mul(i, j);
            }
        }
        out
    }
    fn leq(&self, x: &u64, y: &u64) -> bool {
        x & !y == 0
    }
}

/// Componentwise product of semirings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSemiring<S> {
    pub parts: Vec<S>,
}

impl<S: Semiring> Semiring for ProductSemiring<S> {
    type Elem = Vec<S::Elem>;

    fn zero(&self) -> Self::Elem {
        self.parts.iter().map(|p| p.zero()).collect()
    }
    fn one(&self) -> Self::Elem {
        self.parts.iter().map(|p| p.one()).collect()
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.parts.iter().zip(x).zip(y).map(|((p, a), b)| p.add(a, b)).collect()
    }
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.parts.iter().zip(x).zip(y).map(|((p, a), b)| p.mul(a, b)).collect()
    }
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.parts.iter().zip(x).zip(y).all(|((p, a), b)| p.leq(a, b))
    }
}

/// A nice multiplicative rating map, stored as its letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMap<S: Semiring> {
    pub alphabet: Alphabet,
    pub semiring: S,
    pub letters: Vec<S::Elem>,
}

impl<S: Semiring> RatingMap<S> {
    pub fn new(alphabet: Alphabet, semiring: S, letters: Vec<S::Elem>) -> Result<Self> {
        if letters.len() != alphabet.len() {
            return Err(Error::invalid("one letter image per symbol is required"));
        }
        Ok(RatingMap { alphabet, semiring, letters })
    }

    /// `ρ(w)`.
    pub fn eval_word(&self, w: &[usize]) -> S::Elem {
        w.iter().fold(self.semiring.one(), |acc, &a| self.semiring.mul(&acc, &self.letters[a]))
    }

    /// `ρ(K)` for a finite language `K`.
    pub fn eval_language(&self, words: &[Vec<usize>]) -> S::Elem {
        words.iter().fold(self.semiring.zero(), |acc, w| self.semiring.add(&acc, &self.eval_word(w)))
    }
}

/// `ρ_α`: the letter `a` is rated `{α(a)}` in `2^M`.
pub fn rho_alpha(l: &RecognizedLanguage, powerset_cap: usize) -> Result<RatingMap<PowersetSemiring>> {
    rho_of_morphism(&l.morphism, powerset_cap)
}

pub fn rho_of_morphism(m: &Morphism, powerset_cap: usize) -> Result<RatingMap<PowersetSemiring>> {
    let semiring = PowersetSemiring::new(m.monoid().clone(), powerset_cap)?;
    let letters = m.letters().iter().map(|&s| semiring.singleton(s)).collect();
    RatingMap::new(m.alphabet().clone(), semiring, letters)
}

pub fn product_rating_map<S: Semiring + Clone>(rs: &[RatingMap<S>]) -> Result<RatingMap<ProductSemiring<S>>> {
    let alphabet = match rs.first() {
        Some(r) => r.alphabet.clone(),
        None => return Err(Error::invalid("product of an empty list of rating maps")),
    };
    if rs.iter().any(|r| r.alphabet != alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    let semiring = ProductSemiring { parts: rs.iter().map(|r| r.semiring.clone()).collect() };
    let letters = (0..alphabet.len()).map(|a| rs.iter().map(|r| r.letters[a].clone()).collect()).collect();
    RatingMap::new(alphabet, semiring, letters)
}

/// `ρ_*` restricted to its image: the multiplicative monoid generated by
/// the letter images. `elements[i]` is the semiring element behind monoid
/// element `i`.
pub struct ImageMonoid<E> {
    pub morphism: Morphism,
    pub elements: Vec<E>,
}

pub fn image_monoid<S: Semiring>(rm: &RatingMap<S>, monoid_cap: usize) -> Result<ImageMonoid<S::Elem>> {
    let s = &rm.semiring;
    let g = generate(s.one(), &rm.letters, |x, y| s.mul(x, y), monoid_cap, "rating map image monoid size")?;
    let morphism = Morphism::new(rm.alphabet.clone(), g.monoid, g.generators)?;
    Ok(ImageMonoid { morphism, elements: g.elements })
}

/// The closure of the letter images and `0`, `1` under `+` and `·`.
pub fn generated_subsemiring<S: Semiring>(rm: &RatingMap<S>, cap: usize) -> Result<Vec<S::Elem>> {
    let s = &rm.semiring;
    let mut set: BTreeSet<S::Elem> = BTreeSet::new();
    let mut frontier: Vec<S::Elem> = vec![s.zero(), s.one()];
    frontier.extend(rm.letters.iter().cloned());
    while let Some(x) = frontier.pop() {
        if !set.insert(x.clone()) {
            continue;
        }
        if set.len() > cap {
            return Err(Error::ResourceCap { what: "generated sub-semiring size", limit: cap });
        }
        for y in set.iter() {
            for z in [s.add(&x, y), s.mul(&x, y), s.mul(y, &x)] {
                if !set.contains(&z) {
                    frontier.push(z);
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// `{x ∈ universe : x ≤ y for some y ∈ set}`.
pub fn downset<S: Semiring>(s: &S, set: &[S::Elem], universe: &[S::Elem]) -> Vec<S::Elem> {
    let mut out: Vec<S::Elem> = universe.iter().filter(|x| set.iter().any(|y| s.leq(x, y))).cloned().collect();
    out.sort();
    out.dedup();
    out
}

/// A downward-closed subset of a semiring, stored as its maximal elements.
///
/// Every closure rule applied to the saturation sets is monotone in the
/// canonical order, so applying it to the maximal elements and taking the
/// downset is enough.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Antichain<E> {
    max: Vec<E>,
}

impl<E: Clone + Ord + Debug> Default for Antichain<E> {
    fn default() -> Self {
        Antichain { max: Vec::new() }
    }
}

impl<E: Clone + Ord + Debug> Antichain<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Downset of `xs`.
    pub fn from_elements<S: Semiring<Elem = E>>(s: &S, xs: impl IntoIterator<Item = E>) -> Self {
        let mut a = Self::new();
        for x in xs {
            a.insert(s, x);
        }
        a
    }

    /// Maximal elements, sorted.
    pub fn maximal(&self) -> &[E] {
        &self.max
    }

    pub fn is_empty(&self) -> bool {
        self.max.is_empty()
    }

    pub fn contains<S: Semiring<Elem = E>>(&self, s: &S, x: &E) -> bool {
        self.max.iter().any(|y| s.leq(x, y))
    }

    /// Adds `x` and everything below it. Returns whether the set grew.
    pub fn insert<S: Semiring<Elem = E>>(&mut self, s: &S, x: E) -> bool {
        if self.contains(s, &x) {
            return false;
        }
        self.max.retain(|y| !s.leq(y, &x));
        let pos = self.max.binary_search(&x).unwrap_err();
        self.max.insert(pos, x);
        true
    }

    pub fn is_subset<S: Semiring<Elem = E>>(&self, s: &S, other: &Self) -> bool {
        self.max.iter().all(|x| other.contains(s, x))
    }

    /// Explicit elements of the downset within `universe`.
    pub fn expand<S: Semiring<Elem = E>>(&self, s: &S, universe: &[E]) -> Vec<E> {
        downset(s, &self.max, universe)
    }

    /// `↓(X · Y)`.
    pub fn mul<S: Semiring<Elem = E>>(&self, s: &S, other: &Self) -> Self {
        let mut out = Self::new();
        for x in &self.max {
            for y in &other.max {
                out.insert(s, s.mul(x, y));
            }
        }
        out
    }
}
