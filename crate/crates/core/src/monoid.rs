//! Finite monoids, morphisms from `A*`, and syntactic monoids.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::automata::{Alphabet, Dfa};
use crate::error::{Error, Result};

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    mul: Vec<usize>,
}

impl FiniteMonoid {
    /// Builds a monoid from a table, checking associativity and the identity
    /// laws exhaustively.
    pub fn new(identity: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let size = table.len();
        if size == 0 || identity >= size {
            return Err(Error::invalid("monoid must be nonempty with identity in range"));
        }
        let mut mul = Vec::with_capacity(size * size);
        for row in &table {
            if row.len() != size || row.iter().any(|&x| x >= size) {
                return Err(Error::invalid("multiplication table is not square over the elements"));
            }
            mul.extend_from_slice(row);
        }
        let m = FiniteMonoid { size, identity, mul };
        for x in 0..size {
            if m.mul(identity, x) != x || m.mul(x, identity) != x {
                return Err(Error::invalid(format!("identity law fails at {x}")));
            }
        }
        for x in 0..size {
            for y in 0..size {
                let xy = m.mul(x, y);
                for z in 0..size {
                    if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::invalid(format!("associativity fails at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(m)
    }

    fn from_flat(identity: usize, size: usize, mul: Vec<usize>) -> Self {
        FiniteMonoid { size, identity, mul }
    }

    pub fn trivial() -> Self {
        Self::from_flat(0, 1, vec![0])
    }

    /// The cyclic group `Z/n`, element `i` standing for `i`.
    pub fn cyclic_group(n: usize) -> Self {
        let n = n.max(1);
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(0, n, mul)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn product_of(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn pow(&self, s: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, s))
    }

    /// `s^ω`: the power `s^k` for the least `k ≥ 1` making it idempotent.
    pub fn idempotent_power(&self, s: usize) -> usize {
        let mut p = s;
        loop {
            if self.mul(p, p) == p {
                return p;
            }
            p = self.mul(p, s);
        }
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&s| self.is_idempotent(s)).collect()
    }

    /// Whether `s^(ω+1) = s^ω`.
    pub fn is_aperiodic_element(&self, s: usize) -> bool {
        let w = self.idempotent_power(s);
        self.mul(w, s) == w
    }

    /// Whether every element of `subset` satisfies `s^(ω+1) = s^ω`.
    ///
    /// Returns the first counterexample in index order as `Ok(Some(x))`.
    pub fn aperiodicity_witness(&self, subset: &[usize]) -> Result<Option<usize>> {
        let mut member = vec![false; self.size];
        for &x in subset {
            if x >= self.size {
                return Err(Error::invalid(format!("element {x} out of range")));
            }
            member[x] = true;
        }
        for &x in subset {
            for &y in subset {
                if !member[self.mul(x, y)] {
                    return Err(Error::precondition(format!(
                        "subset is not closed under multiplication: {x}·{y}"
                    )));
                }
            }
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        Ok(sorted.into_iter().find(|&x| !self.is_aperiodic_element(x)))
    }

    pub fn is_aperiodic(&self, subset: &[usize]) -> Result<bool> {
        Ok(self.aperiodicity_witness(subset)?.is_none())
    }

    /// Whether every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        let e = self.identity;
        (0..self.size).all(|x| (0..self.size).any(|y| self.mul(x, y) == e && self.mul(y, x) == e))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Restriction of the table to a multiplication-closed subset containing
    /// the identity. Element `i` of the result is `subset[i]`.
    pub fn submonoid(&self, subset: &[usize]) -> Result<FiniteMonoid> {
        let mut pos = vec![usize::MAX; self.size];
        for (i, &x) in subset.iter().enumerate() {
            pos[x] = i;
        }
        if pos[self.identity] == usize::MAX {
            return Err(Error::precondition("submonoid must contain the identity"));
        }
        let n = subset.len();
        let mut mul = Vec::with_capacity(n * n);
        for &x in subset {
            for &y in subset {
                let p = pos[self.mul(x, y)];
                if p == usize::MAX {
                    return Err(Error::precondition("subset is not closed under multiplication"));
                }
                mul.push(p);
            }
        }
        Ok(Self::from_flat(pos[self.identity], n, mul))
    }

    /// Setwise product of two subsets, as a sorted list.
    pub fn set_product(&self, xs: &[usize], ys: &[usize]) -> Vec<usize> {
        let mut hit = vec![false; self.size];
        for &x in xs {
            for &y in ys {
                hit[self.mul(x, y)] = true;
            }
        }
        (0..self.size).filter(|&z| hit[z]).collect()
    }
}

/// The monoid generated by `generators` inside an ambient structure given by
/// `mul`, numbered in breadth-first order from `identity` (index 0).
pub struct Generated<T> {
    pub elements: Vec<T>,
    pub monoid: FiniteMonoid,
    /// Index of each generator.
    pub generators: Vec<usize>,
}

/// Closes `generators` under `mul`, failing once more than `cap` elements
/// appear.
pub fn generate<T: Ord + Clone>(
    identity: T,
    generators: &[T],
    mul: impl Fn(&T, &T) -> T,
    cap: usize,
    what: &'static str,
) -> Result<Generated<T>> {
    let g = generators.len();
    let mut index: BTreeMap<T, usize> = BTreeMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    // parent[x] = (p, a) with x = p · generators[a].
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut right: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        for (a, gen) in generators.iter().enumerate() {
            let y = mul(&elements[i], gen);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= cap {
                        return Err(Error::ResourceCap { what, limit: cap });
                    }
                    index.insert(y.clone(), id);
                    elements.push(y);
                    parent.push(Some((i, a)));
                    id
                }
            };
            right.push(id);
        }
        i += 1;
    }
    let n = elements.len();
    // x · y computed along y's defining path: x·(p·g) = (x·p)·g.
    let mut mul_table = vec![0usize; n * n];
    for x in 0..n {
        mul_table[x * n] = x;
    }
    for y in 1..n {
        let (p, a) = parent[y].expect("non-identity elements have a parent");
        for x in 0..n {
            let xp = mul_table[x * n + p];
            mul_table[x * n + y] = right[xp * g + a];
        }
    }
    let generators = generators.iter().map(|gen| index[gen]).collect();
    Ok(Generated { elements, monoid: FiniteMonoid::from_flat(0, n, mul_table), generators })
}

/// A morphism `A* → M` given by letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    monoid: FiniteMonoid,
    letters: Vec<usize>,
    image: Vec<usize>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, monoid: FiniteMonoid, letters: Vec<usize>) -> Result<Self> {
        if letters.len() != alphabet.len() {
            return Err(Error::invalid("one letter image per symbol is required"));
        }
        if letters.iter().any(|&x| x >= monoid.size()) {
            return Err(Error::invalid("letter image out of range"));
        }
        let image = closure(&monoid, &letters);
        Ok(Morphism { alphabet, monoid, letters, image })
    }

    /// The morphism into the trivial monoid.
    pub fn trivial(alphabet: &Alphabet) -> Self {
        Self::new(alphabet.clone(), FiniteMonoid::trivial(), vec![0; alphabet.len()]).expect("valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn letter(&self, a: usize) -> usize {
        self.letters[a]
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// The generated submonoid, sorted.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn identity(&self) -> usize {
        self.monoid.identity()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.monoid.mul(x, y)
    }

    pub fn eval(&self, w: &[usize]) -> usize {
        w.iter().fold(self.monoid.identity(), |acc, &a| self.monoid.mul(acc, self.letters[a]))
    }

    /// The same morphism with its codomain cut down to the image. Element `i`
    /// of the new codomain is `self.image()[i]`.
    pub fn restrict_to_image(&self) -> Morphism {
        if self.image.len() == self.monoid.size() {
            return self.clone();
        }
        let sub = self.monoid.submonoid(&self.image).expect("image is a submonoid");
        let letters = self.letters.iter().map(|x| self.image.binary_search(x).expect("in image")).collect();
        Morphism::new(self.alphabet.clone(), sub, letters).expect("valid")
    }

    pub fn is_surjective(&self) -> bool {
        self.image.len() == self.monoid.size()
    }
}

fn closure(m: &FiniteMonoid, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; m.size()];
    let mut stack = vec![m.identity()];
    seen[m.identity()] = true;
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = m.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    (0..m.size()).filter(|&x| seen[x]).collect()
}

/// A language given as `α⁻¹(accepting)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedLanguage {
    pub morphism: Morphism,
    /// Sorted, contained in the image.
    pub accepting: Vec<usize>,
}

impl RecognizedLanguage {
    pub fn accepts(&self, w: &[usize]) -> bool {
        self.accepting.binary_search(&self.morphism.eval(w)).is_ok()
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting.binary_search(&s).is_ok()
    }
}

/// Syntactic morphism of `L(d)`: the transition monoid of the minimal
/// complete DFA. Element 0 is the identity; the rest follow breadth-first
/// order over the letters.
pub fn syntactic_morphism(d: &Dfa, monoid_cap: usize) -> Result<RecognizedLanguage> {
    let min = d.minimize();
    let n = min.state_count();
    let k = min.alphabet().len();
    let identity: Vec<usize> = (0..n).collect();
    let gens: Vec<Vec<usize>> = (0..k).map(|a| (0..n).map(|q| min.next(q, a)).collect()).collect();
    let g = generate(identity, &gens, |s, t| s.iter().map(|&q| t[q]).collect(), monoid_cap, "syntactic monoid size")?;
    let accepting = g
        .elements
        .iter()
        .enumerate()
        .filter(|(_, t)| min.is_final(t[min.initial()]))
        .map(|(i, _)| i)
        .collect();
    let morphism = Morphism::new(min.alphabet().clone(), g.monoid, g.generators)?;
    Ok(RecognizedLanguage { morphism, accepting })
}

/// Product of morphisms with the codomain cut down to the generated
/// submonoid; `tuples[i]` gives the components of element `i`.
#[derive(Debug, Clone)]
pub struct ProductMorphism {
    pub morphism: Morphism,
    pub tuples: Vec<Vec<usize>>,
}

pub fn product_morphism(alphabet: &Alphabet, ms: &[&Morphism], monoid_cap: usize) -> Result<ProductMorphism> {
    if ms.iter().any(|m| m.alphabet() != alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    let identity: Vec<usize> = ms.iter().map(|m| m.identity()).collect();
    let gens: Vec<Vec<usize>> =
        (0..alphabet.len()).map(|a| ms.iter().map(|m| m.letter(a)).collect()).collect();
    let g = generate(
        identity,
        &gens,
        |x, y| x.iter().zip(y).zip(ms).map(|((&s, &t), m)| m.mul(s, t)).collect(),
        monoid_cap,
        "product monoid size",
    )?;
    let morphism = Morphism::new(alphabet.clone(), g.monoid, g.generators)?;
    Ok(ProductMorphism { morphism, tuples: g.elements })
}
