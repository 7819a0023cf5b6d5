//! Class oracles: C-pairs and C-orbits for finite prevarieties, and kernels
//! for the group prevarieties MOD, AMT and GR.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::automata::{Alphabet, Dfa};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::monoid::{syntactic_morphism, Morphism};

/// A finite prevariety, given by its canonical morphism `η: A* → N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePrevariety {
    pub eta: Morphism,
}

impl FinitePrevariety {
    pub fn new(eta: Morphism) -> Self {
        FinitePrevariety { eta }
    }

    /// `ST = {∅, A*}`, whose canonical morphism is trivial.
    pub fn st(alphabet: &Alphabet) -> Self {
        FinitePrevariety { eta: Morphism::trivial(alphabet) }
    }
}

/// Group prevarieties with a kernel oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupClass {
    /// Modulo languages: membership depends on the length modulo some `m`.
    Mod,
    /// Alphabet modulo testable: recognized by commutative groups.
    Amt,
    /// All group languages.
    Gr,
}

/// Class selector as accepted by the front end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSelector {
    St,
    Mod,
    Amt,
    Gr,
    Finite(FinitePrevariety),
}

/// How a selected class is handled by the algorithms.
pub enum ClassKind {
    Finite(FinitePrevariety),
    Group(GroupClass),
}

impl ClassSelector {
    pub fn kind(&self, alphabet: &Alphabet) -> Result<ClassKind> {
        Ok(match self {
            ClassSelector::St => ClassKind::Finite(FinitePrevariety::st(alphabet)),
            ClassSelector::Mod => ClassKind::Group(GroupClass::Mod),
            ClassSelector::Amt => ClassKind::Group(GroupClass::Amt),
            ClassSelector::Gr => ClassKind::Group(GroupClass::Gr),
            ClassSelector::Finite(c) => {
                if c.eta.alphabet() != alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                ClassKind::Finite(c.clone())
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassSelector::St => "st",
            ClassSelector::Mod => "mod",
            ClassSelector::Amt => "amt",
            ClassSelector::Gr => "gr",
            ClassSelector::Finite(_) => "finite",
        }
    }
}

/// A set of pairs over the codomain of a morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    size: usize,
    bits: Vec<bool>,
}

impl PairSet {
    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.bits[s * self.size + t]
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|s| (0..self.size).map(move |t| (s, t)))
            .filter(|&(s, t)| self.contains(s, t))
            .collect()
    }
}

/// C-pairs of `alpha`: `(s, t)` such that some `n` has both `(s, n)` and
/// `(t, n)` in the image of `alpha × eta`.
pub fn c_pairs(c: &FinitePrevariety, alpha: &Morphism) -> Result<PairSet> {
    if c.eta.alphabet() != alpha.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let m = alpha.monoid().size();
    let n = c.eta.monoid().size();
    let mut seen = vec![false; m * n];
    let start = (alpha.identity(), c.eta.identity());
    seen[start.0 * n + start.1] = true;
    let mut queue = VecDeque::from([start]);
    while let Some((s, t)) = queue.pop_front() {
        for a in 0..alpha.alphabet().len() {
            let next = (alpha.mul(s, alpha.letter(a)), c.eta.mul(t, c.eta.letter(a)));
            if !seen[next.0 * n + next.1] {
                seen[next.0 * n + next.1] = true;
                queue.push_back(next);
            }
        }
    }
    let mut bits = vec![false; m * m];
    for t in 0..n {
        let fiber: Vec<usize> = (0..m).filter(|&s| seen[s * n + t]).collect();
        for &x in &fiber {
            for &y in &fiber {
                bits[x * m + y] = true;
            }
        }
    }
    Ok(PairSet { size: m, bits })
}

/// The orbit `{e·s·e : (e, s) ∈ pairs}` of an idempotent `e`, sorted.
pub fn c_orbit(pairs: &PairSet, alpha: &Morphism, e: usize) -> Result<Vec<usize>> {
    let m = alpha.monoid();
    if e >= m.size() || !m.is_idempotent(e) {
        return Err(Error::precondition(format!("orbit base {e} is not idempotent")));
    }
    let set: BTreeSet<usize> =
        (0..m.size()).filter(|&s| pairs.contains(e, s)).map(|s| m.mul(m.mul(e, s), e)).collect();
    Ok(set.into_iter().collect())
}

/// MOD-kernel and the stability index `d` it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModKernel {
    pub kernel: Vec<usize>,
    pub index: usize,
}

/// Iteration budget for the stability index search.
const STABILITY_SEARCH_LIMIT: usize = 1 << 16;

/// `{1} ∪ α(A^d)` for the least `d ≥ 1` with `α(A^d) = α(A^(2d))`.
pub fn mod_kernel(alpha: &Morphism) -> Result<ModKernel> {
    let m = alpha.monoid();
    let letters: Vec<usize> = {
        let mut l = alpha.letters().to_vec();
        l.sort_unstable();
        l.dedup();
        l
    };
    // layers[n] = α(A^n).
    let mut layers: Vec<Vec<usize>> = vec![vec![m.identity()], letters.clone()];
    let mut d = 1;
    loop {
        while layers.len() <= 2 * d {
            if layers.len() > STABILITY_SEARCH_LIMIT {
                return Err(Error::ResourceCap { what: "stability index search", limit: STABILITY_SEARCH_LIMIT });
            }
            let next = m.set_product(layers.last().expect("nonempty"), &letters);
            layers.push(next);
        }
        if layers[d] == layers[2 * d] {
            break;
        }
        d += 1;
    }
    let mut kernel = layers[d].clone();
    kernel.push(m.identity());
    kernel.sort_unstable();
    kernel.dedup();
    Ok(ModKernel { kernel, index: d })
}

/// GR-kernel of `alpha` by saturation: the least `T ∋ 1` closed under
/// multiplication such that `s·t·s = s` implies `s·T·t ⊆ T` and `t·T·s ⊆ T`.
pub fn gr_kernel(alpha: &Morphism) -> Vec<usize> {
    let m = alpha.monoid();
    let image = alpha.image();
    let mut weak = Vec::new();
    for &s in image {
        for &t in image {
            if m.mul(m.mul(s, t), s) == s {
                weak.push((s, t));
            }
        }
    }
    let mut member = vec![false; m.size()];
    member[m.identity()] = true;
    let mut elems = vec![m.identity()];
    let mut add = |x: usize, elems: &mut Vec<usize>| {
        if member[x] {
            return false;
        }
        member[x] = true;
        elems.push(x);
        true
    };
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < elems.len() {
            let mut j = 0;
            while j < elems.len() {
                let xy = m.mul(elems[i], elems[j]);
                changed |= add(xy, &mut elems);
                j += 1;
            }
            i += 1;
        }
        let snapshot = elems.clone();
        for &(s, t) in &weak {
            for &x in &snapshot {
                changed |= add(m.mul(m.mul(s, x), t), &mut elems);
                changed |= add(m.mul(m.mul(t, x), s), &mut elems);
            }
        }
    }
    elems.sort_unstable();
    elems
}

/// AMT-kernel: the elements `s` such that for every `q ≥ 1` some word `w`
/// with `α(w) = s` has every letter count divisible by `q`.
///
/// For a vertex set `S` of the Cayley graph containing `1`, let `L_S` be
/// the lattice spanned by the Parikh vectors of the cycles of the subgraph
/// induced by `S`. A walk staying in `S` is congruent modulo `L_S` to its
/// loop-erased simple path, so only finitely many classes occur. `s` is in
/// the kernel iff for some `S` there is a walk `1 → s` visiting exactly `S`
/// whose Parikh vector lies in `L_S`: such a walk passes through every cycle
/// of `S`, so cycles can be pumped to cancel the lattice coordinates modulo
/// any `q`; conversely, for `q` a multiple of every torsion coefficient and
/// larger than every simple-path class, divisibility by `q` forces class 0.
pub fn amt_kernel(alpha: &Morphism, cfg: &Config) -> Result<Vec<usize>> {
    let k = alpha.alphabet().len();
    if k > cfg.amt_alphabet_cap {
        return Err(Error::ResourceCap { what: "alphabet size for the AMT kernel", limit: cfg.amt_alphabet_cap });
    }
    let image = alpha.image();
    let n = image.len();
    if n > cfg.amt_monoid_cap {
        return Err(Error::ResourceCap { what: "monoid size for the AMT kernel", limit: cfg.amt_monoid_cap });
    }
    let r = alpha.restrict_to_image();
    let m = r.monoid();
    let id = m.identity();
    let succ: Vec<Vec<usize>> = (0..n).map(|v| (0..k).map(|a| m.mul(v, r.letter(a))).collect()).collect();

    let mut in_kernel = vec![false; n];
    in_kernel[id] = true;
    for mask in 0u32..(1u32 << n) {
        if mask >> id & 1 == 0 {
            continue;
        }
        let inside = |v: usize| mask >> v & 1 == 1;
        if reachable_within(&succ, id, &inside) != mask {
            continue;
        }
        let lattice = cycle_lattice(&succ, k, mask);
        let start = (id, 1u32 << id, lattice.reduce(&vec![0; k]));
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some((v, visited, class)) = queue.pop_front() {
            if visited == mask && class.iter().all(|&x| x == 0) {
                in_kernel[v] = true;
            }
            for a in 0..k {
                let t = succ[v][a];
                if !inside(t) {
                    continue;
                }
                let mut c = class.clone();
                c[a] += 1;
                let next = (t, visited | 1 << t, lattice.reduce(&c));
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<usize> = (0..n).filter(|&v| in_kernel[v]).map(|v| image[v]).collect();
    out.sort_unstable();
    Ok(out)
}

fn reachable_within(succ: &[Vec<usize>], from: usize, inside: &impl Fn(usize) -> bool) -> u32 {
    let mut seen = 1u32 << from;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &t in &succ[v] {
            if inside(t) && seen >> t & 1 == 0 {
                seen |= 1 << t;
                stack.push(t);
            }
        }
    }
    seen
}

/// Lattice spanned by the cycle Parikh vectors of the subgraph on `mask`.
///
/// Within a strongly connected component with a spanning tree rooted at `r`
/// and tree potentials `pot`, the cycle vectors span the same lattice as
/// `pot(u) + e_a - pot(v)` over the edges `u -a-> v` of the component.
fn cycle_lattice(succ: &[Vec<usize>], k: usize, mask: u32) -> Lattice {
    let n = succ.len();
    let inside = |v: usize| mask >> v & 1 == 1;
    let reach: Vec<u32> = (0..n).map(|v| if inside(v) { reachable_within(succ, v, &inside) } else { 0 }).collect();
    let mut comp = vec![usize::MAX; n];
    let mut gens = Vec::new();
    for root in 0..n {
        if !inside(root) || comp[root] != usize::MAX {
            continue;
        }
        let members: Vec<usize> =
            (0..n).filter(|&v| reach[root] >> v & 1 == 1 && reach[v] >> root & 1 == 1).collect();
        for &v in &members {
            comp[v] = root;
        }
        let in_comp = |v: usize| comp[v] == root;
        let mut pot: Vec<Option<Vec<i64>>> = vec![None; n];
        pot[root] = Some(vec![0; k]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for a in 0..k {
                let v = succ[u][a];
                if in_comp(v) && pot[v].is_none() {
                    let mut p = pot[u].clone().expect("visited");
                    p[a] += 1;
                    pot[v] = Some(p);
                    queue.push_back(v);
                }
            }
        }
        for &u in &members {
            for a in 0..k {
                let v = succ[u][a];
                if in_comp(v) {
                    let pu = pot[u].as_ref().expect("component is strongly connected");
                    let pv = pot[v].as_ref().expect("component is strongly connected");
                    let mut g: Vec<i64> = pu.iter().zip(pv).map(|(x, y)| x - y).collect();
                    g[a] += 1;
                    gens.push(g);
                }
            }
        }
    }
    Lattice::span(k, &gens)
}

/// Kernel of `alpha` for a group class.
pub fn group_kernel(g: GroupClass, alpha: &Morphism, cfg: &Config) -> Result<Vec<usize>> {
    match g {
        GroupClass::Mod => Ok(mod_kernel(alpha)?.kernel),
        GroupClass::Amt => amt_kernel(alpha, cfg),
        GroupClass::Gr => Ok(gr_kernel(alpha)),
    }
}

/// Whether `L(d)` belongs to the selected class.
pub fn class_contains(sel: &ClassSelector, d: &Dfa, cfg: &Config) -> Result<bool> {
    let alphabet = d.alphabet();
    match sel.kind(alphabet)? {
        ClassKind::Finite(c) => {
            // L is a union of η-fibers iff acceptance is constant on each fiber.
            let min = d.minimize();
            let n = c.eta.monoid().size();
            let mut verdict: Vec<Option<bool>> = vec![None; n];
            let start = (c.eta.identity(), min.initial());
            let mut seen = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some((t, q)) = queue.pop_front() {
                let acc = min.is_final(q);
                match verdict[t] {
                    Some(v) if v != acc => return Ok(false),
                    _ => verdict[t] = Some(acc),
                }
                for a in 0..alphabet.len() {
                    let next = (c.eta.mul(t, c.eta.letter(a)), min.next(q, a));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            Ok(true)
        }
        ClassKind::Group(g) => {
            let l = syntactic_morphism(d, cfg.monoid_cap)?;
            let m = l.morphism.monoid();
            Ok(m.is_group()
                && match g {
                    GroupClass::Gr => true,
                    GroupClass::Amt => m.is_commutative(),
                    GroupClass::Mod => l.morphism.letters().windows(2).all(|w| w[0] == w[1]),
                })
        }
    }
}
