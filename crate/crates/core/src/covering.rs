//! Covering and separation for `SF(C)`.
//!
//! A covering instance `(L0, {L1, …, Ln})` is reduced to a nice
//! multiplicative rating map `ρ` into `2^M0 × … × 2^Mn` (one powerset per
//! syntactic monoid) and the upward-closed set `F` of tuples meeting every
//! accepting set. The instance is coverable iff the optimal imprint `Opt`
//! avoids `F`. `Opt` is computed by a least fixpoint: on `N_C × R` for a
//! finite prevariety `C`, on `R` for a group prevariety.
//!
//! All sets handled here are downward closed and every rule is monotone, so
//! they are stored as [`Antichain`]s of maximal elements. Since `F` is upward
//! closed, testing the maximal elements of `Opt` against `F` is enough.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::automata::Dfa;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::monoid::{generate, syntactic_morphism, Morphism};
use crate::oracles::{group_kernel, ClassKind, ClassSelector, GroupClass};
use crate::semiring::{
    product_rating_map, rho_alpha, Antichain, PowersetSemiring, ProductSemiring, RatingMap, Semiring,
};

/// Rating map of a covering instance and the accepting sets `Fi`.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    pub rho: RatingMap<ProductSemiring<PowersetSemiring>>,
    /// `accepting[i]` is `Fi ⊆ Mi` as a bitset.
    pub accepting: Vec<u64>,
}

impl CoverInstance {
    /// Membership in `F = {(X0, …, Xn) : Xi ∩ Fi ≠ ∅ for all i}`.
    pub fn is_bad(&self, x: &[u64]) -> bool {
        x.iter().zip(&self.accepting).all(|(a, f)| a & f != 0)
    }

    pub fn bad_set_is_empty(&self) -> bool {
        self.accepting.contains(&0)
    }
}

pub fn reduce_cover_instance(l0: &Dfa, ls: &[Dfa], cfg: &Config) -> Result<CoverInstance> {
    if ls.is_empty() {
        return Err(Error::invalid("a covering instance needs at least one language to cover with"));
    }
    let mut maps = Vec::with_capacity(ls.len() + 1);
    let mut accepting = Vec::with_capacity(ls.len() + 1);
    for d in core::iter::once(l0).chain(ls) {
        if d.alphabet() != l0.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let l = syntactic_morphism(d, cfg.monoid_cap)?;
        maps.push(rho_alpha(&l, cfg.powerset_cap)?);
        accepting.push(l.accepting.iter().fold(0u64, |acc, &s| acc | 1 << s));
    }
    Ok(CoverInstance { rho: product_rating_map(&maps)?, accepting })
}

/// The rule that produced an element of a saturation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    Trivial,
    Multiplication,
    SfClosure,
    GOperation,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Trivial => "trivial",
            Rule::Multiplication => "multiplication",
            Rule::SfClosure => "sf-closure",
            Rule::GOperation => "g-operation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry<E> {
    pub round: usize,
    pub rule: Rule,
    /// The `N_C` component, for pointed saturations.
    pub point: Option<usize>,
    pub element: E,
}

/// Least SF-saturated subset of `N × R`, one antichain per point of `N`.
#[derive(Debug, Clone)]
pub struct PointedSaturation<E> {
    pub sets: BTreeMap<usize, Antichain<E>>,
    pub rounds: usize,
    pub trace: Vec<TraceEntry<E>>,
}

impl<E: Clone + Ord + core::fmt::Debug> PointedSaturation<E> {
    pub fn contains<S: Semiring<Elem = E>>(&self, s: &S, n: usize, r: &E) -> bool {
        self.sets.get(&n).is_some_and(|a| a.contains(s, r))
    }

    /// The `R` components.
    pub fn projection<S: Semiring<Elem = E>>(&self, s: &S) -> Antichain<E> {
        Antichain::from_elements(s, self.sets.values().flat_map(|a| a.maximal().iter().cloned()))
    }

    fn maximal_pairs(&self) -> Vec<(usize, E)> {
        self.sets.iter().flat_map(|(&n, a)| a.maximal().iter().map(move |r| (n, r.clone()))).collect()
    }
}

fn check_alphabets<S: Semiring>(eta: &Morphism, rho: &RatingMap<S>) -> Result<()> {
    if eta.alphabet() != &rho.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Least subset of `N × R` that contains the trivial elements
/// `(η(w), ρ(w))` and is closed under downset on `R`, componentwise
/// multiplication, and `(e, r) ↦ (e, r^ω + r^(ω+1))` for idempotent `e`.
pub fn saturate_finite<S: Semiring>(eta: &Morphism, rho: &RatingMap<S>, cfg: &Config) -> Result<PointedSaturation<S::Elem>> {
    check_alphabets(eta, rho)?;
    let s = &rho.semiring;
    let n_mon = eta.monoid();
    let mut sat = PointedSaturation { sets: BTreeMap::new(), rounds: 0, trace: Vec::new() };
    let mut frontier = Vec::new();
    let add = |sat: &mut PointedSaturation<S::Elem>, n: usize, r: S::Elem, rule: Rule, next: &mut Vec<(usize, S::Elem)>| {
        if sat.sets.entry(n).or_default().insert(s, r.clone()) {
            if cfg.trace {
                sat.trace.push(TraceEntry { round: sat.rounds, rule, point: Some(n), element: r.clone() });
            }
            next.push((n, r));
        }
    };
    add(&mut sat, eta.identity(), s.one(), Rule::Trivial, &mut frontier);
    for a in 0..rho.alphabet.len() {
        add(&mut sat, eta.letter(a), rho.letters[a].clone(), Rule::Trivial, &mut frontier);
    }
    while !frontier.is_empty() {
        sat.rounds += 1;
        let mut next = Vec::new();
        for (n, r) in core::mem::take(&mut frontier) {
            let still_maximal = sat.sets.get(&n).is_some_and(|a| a.maximal().binary_search(&r).is_ok());
            if !still_maximal {
                continue;
            }
            if n_mon.is_idempotent(n) {
                add(&mut sat, n, s.sf_closure(&r), Rule::SfClosure, &mut next);
            }
            for (m, q) in sat.maximal_pairs() {
                add(&mut sat, n_mon.mul(n, m), s.mul(&r, &q), Rule::Multiplication, &mut next);
                add(&mut sat, n_mon.mul(m, n), s.mul(&q, &r), Rule::Multiplication, &mut next);
            }
        }
        frontier = next;
    }
    Ok(sat)
}

/// `Opt` for `SF(C)`, `C` finite with canonical morphism `eta`.
pub fn opt_finite<S: Semiring>(eta: &Morphism, rho: &RatingMap<S>, cfg: &Config) -> Result<Antichain<S::Elem>> {
    Ok(saturate_finite(eta, rho, cfg)?.projection(&rho.semiring))
}

/// Re-checks every SF-saturation rule on a computed set.
pub fn verify_pointed<S: Semiring>(eta: &Morphism, rho: &RatingMap<S>, sat: &PointedSaturation<S::Elem>) -> bool {
    let s = &rho.semiring;
    let n_mon = eta.monoid();
    if !sat.contains(s, eta.identity(), &s.one()) {
        return false;
    }
    if !(0..rho.alphabet.len()).all(|a| sat.contains(s, eta.letter(a), &rho.letters[a])) {
        return false;
    }
    let pairs = sat.maximal_pairs();
    for (n, r) in &pairs {
        if n_mon.is_idempotent(*n) && !sat.contains(s, *n, &s.sf_closure(r)) {
            return false;
        }
        for (m, q) in &pairs {
            if !sat.contains(s, n_mon.mul(*n, *m), &s.mul(r, q)) {
                return false;
            }
        }
    }
    true
}

/// Least SF-complete subset of `R`.
#[derive(Debug, Clone)]
pub struct CompleteSaturation<E> {
    pub set: Antichain<E>,
    /// Number of G-operation rounds, including the last one that added
    /// nothing.
    pub rounds: usize,
    pub trace: Vec<TraceEntry<E>>,
}

/// The auxiliary map `μ_S(a) = {s·ρ(a)·s' : s, s' ∈ S}` for a downset `S`.
///
/// Its values are taken up to downset: `X ↦ ↓X` is a monoid morphism on
/// `(2^R, ·)` and G-kernels commute with it, so the union of the kernel
/// elements is unchanged up to downset.
pub fn mu_letters<S: Semiring>(rho: &RatingMap<S>, set: &Antichain<S::Elem>) -> Vec<Antichain<S::Elem>> {
    let s = &rho.semiring;
    rho.letters
        .iter()
        .map(|ra| {
            let mut out = Antichain::new();
            for x in set.maximal() {
                let xr = s.mul(x, ra);
                for y in set.maximal() {
                    out.insert(s, s.mul(&xr, y));
                }
            }
            out
        })
        .collect()
}

/// The G-operation: the union of the G-kernel elements of the image monoid
/// of `μ_S`.
pub fn g_operation<S: Semiring>(
    g: GroupClass,
    rho: &RatingMap<S>,
    set: &Antichain<S::Elem>,
    cfg: &Config,
) -> Result<Antichain<S::Elem>> {
    let s = &rho.semiring;
    let letters = mu_letters(rho, set);
    let one = Antichain::from_elements(s, [s.one()]);
    let gen = generate(one, &letters, |x, y| x.mul(s, y), cfg.powerset2_cap, "image monoid of the G-operation map")?;
    let morphism = Morphism::new(rho.alphabet.clone(), gen.monoid, gen.generators)?;
    let kernel = group_kernel(g, &morphism, cfg)?;
    Ok(Antichain::from_elements(s, kernel.iter().flat_map(|&k| gen.elements[k].maximal().iter().cloned())))
}

/// Closes `set` under multiplication and SF-closure, starting from the
/// elements in `frontier`.
fn close_mul_sf<S: Semiring>(
    s: &S,
    set: &mut Antichain<S::Elem>,
    mut frontier: Vec<S::Elem>,
    sf: bool,
    round: usize,
    trace: &mut Option<&mut Vec<TraceEntry<S::Elem>>>,
) {
    while let Some(x) = frontier.pop() {
        if set.maximal().binary_search(&x).is_err() {
            continue;
        }
        let mut candidates = Vec::new();
        if sf {
            candidates.push((s.sf_closure(&x), Rule::SfClosure));
        }
        for y in set.maximal() {
            candidates.push((s.mul(&x, y), Rule::Multiplication));
            candidates.push((s.mul(y, &x), Rule::Multiplication));
        }
        for (z, rule) in candidates {
            if set.insert(s, z.clone()) {
                if let Some(t) = trace.as_deref_mut() {
                    t.push(TraceEntry { round, rule, point: None, element: z.clone() });
                }
                frontier.push(z);
            }
        }
    }
}

/// Least subset of `R` closed under downset, multiplication, SF-closure and
/// the G-operation.
pub fn saturate_group<S: Semiring>(g: GroupClass, rho: &RatingMap<S>, cfg: &Config) -> Result<CompleteSaturation<S::Elem>> {
    let s = &rho.semiring;
    let mut set = Antichain::new();
    let mut trace = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let found = g_operation(g, rho, &set, cfg)?;
        let mut frontier = Vec::new();
        for x in found.maximal() {
            if set.insert(s, x.clone()) {
                if cfg.trace {
                    trace.push(TraceEntry { round: rounds, rule: Rule::GOperation, point: None, element: x.clone() });
                }
                frontier.push(x.clone());
            }
        }
        if frontier.is_empty() {
            break;
        }
        let mut t = cfg.trace.then_some(&mut trace);
        close_mul_sf(s, &mut set, frontier, true, rounds, &mut t);
    }
    Ok(CompleteSaturation { set, rounds, trace })
}

/// Re-checks every SF-complete rule, running one more G-operation.
pub fn verify_complete<S: Semiring>(
    g: GroupClass,
    rho: &RatingMap<S>,
    sat: &CompleteSaturation<S::Elem>,
    cfg: &Config,
) -> Result<bool> {
    let s = &rho.semiring;
    let set = &sat.set;
    for x in set.maximal() {
        if !set.contains(s, &s.sf_closure(x)) {
            return Ok(false);
        }
        if !set.maximal().iter().all(|y| set.contains(s, &s.mul(x, y))) {
            return Ok(false);
        }
    }
    Ok(g_operation(g, rho, set, cfg)?.is_subset(s, set))
}

/// Maximal elements of `Opt` together with the saturation they came from.
pub type GroupOpt<E> = (Antichain<E>, CompleteSaturation<E>);

/// `Opt` for `SF(G)`: the least set containing the SF-complete saturation,
/// the trivial elements and `1_R`, closed under downset and multiplication.
pub fn opt_group<S: Semiring>(g: GroupClass, rho: &RatingMap<S>, cfg: &Config) -> Result<GroupOpt<S::Elem>> {
    let sat = saturate_group(g, rho, cfg)?;
    let s = &rho.semiring;
    let mut set = sat.set.clone();
    let mut frontier: Vec<S::Elem> = set.maximal().to_vec();
    for x in core::iter::once(s.one()).chain(rho.letters.iter().cloned()) {
        if set.insert(s, x.clone()) {
            frontier.push(x);
        }
    }
    close_mul_sf(s, &mut set, frontier, false, sat.rounds, &mut None);
    Ok((set, sat))
}

/// Re-checks that `opt` contains the trivial elements and is closed under
/// multiplication.
pub fn verify_opt<S: Semiring>(rho: &RatingMap<S>, opt: &Antichain<S::Elem>) -> bool {
    let s = &rho.semiring;
    opt.contains(s, &s.one())
        && rho.letters.iter().all(|r| opt.contains(s, r))
        && opt.maximal().iter().all(|x| opt.maximal().iter().all(|y| opt.contains(s, &s.mul(x, y))))
}

/// Outcome of a covering query.
#[derive(Debug, Clone)]
pub struct CoverVerdict {
    pub answer: bool,
    /// Maximal elements of `Opt`.
    pub opt: Antichain<Vec<u64>>,
    pub rounds: usize,
    pub trace: Vec<TraceEntry<Vec<u64>>>,
}

/// Whether `(l0, ls)` is `SF(C)`-coverable.
pub fn is_coverable(sel: &ClassSelector, l0: &Dfa, ls: &[Dfa], cfg: &Config) -> Result<CoverVerdict> {
    let inst = reduce_cover_instance(l0, ls, cfg)?;
    let (opt, rounds, trace) = match sel.kind(l0.alphabet())? {
        ClassKind::Finite(c) => {
            let sat = saturate_finite(&c.eta, &inst.rho, cfg)?;
            (sat.projection(&inst.rho.semiring), sat.rounds, sat.trace)
        }
        ClassKind::Group(g) => {
            let (opt, sat) = opt_group(g, &inst.rho, cfg)?;
            (opt, sat.rounds, sat.trace)
        }
    };
    let answer = !opt.maximal().iter().any(|x| inst.is_bad(x));
    Ok(CoverVerdict { answer, opt, rounds, trace })
}

/// Whether some language of `SF(C)` contains `l1` and avoids `l2`.
pub fn is_separable(sel: &ClassSelector, l1: &Dfa, l2: &Dfa, cfg: &Config) -> Result<CoverVerdict> {
    is_coverable(sel, l1, core::slice::from_ref(l2), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile_str, Alphabet};
    use crate::semiring::rho_of_morphism;
    use alloc::vec;

    fn unary(re: &str) -> Dfa {
        compile_str(re, &Alphabet::parse("a").unwrap()).unwrap()
    }

    fn even_rho() -> RatingMap<PowersetSemiring> {
        let l = syntactic_morphism(&unary("(aa)*"), 4096).unwrap();
        rho_alpha(&l, 16).unwrap()
    }

    #[test]
    fn reduction_of_parity_instance() {
        let cfg = Config::default();
        let inst = reduce_cover_instance(&unary("(aa)*"), &[unary("a(aa)*")], &cfg).unwrap();
        assert_eq!(inst.rho.letters, vec![vec![0b10, 0b10]]);
        assert_eq!(inst.accepting, vec![0b01, 0b10]);
        assert!(inst.is_bad(&[0b01, 0b10]));
        assert!(!inst.is_bad(&[0b10, 0b10]));
        let empty = reduce_cover_instance(&unary("(aa)*"), &[unary("%")], &cfg).unwrap();
        assert!(empty.bad_set_is_empty());
    }

    #[test]
    fn st_saturation_of_parity() {
        let rho = even_rho();
        let st = Morphism::trivial(&rho.alphabet);
        let sat = saturate_finite(&st, &rho, &Config::default()).unwrap();
        assert!(verify_pointed(&st, &rho, &sat));
        let opt = sat.projection(&rho.semiring);
        assert_eq!(opt.expand(&rho.semiring, &rho.semiring.elements()), vec![0, 1, 2, 3]);
    }

    #[test]
    fn st_saturation_of_contains_a() {
        let ab = Alphabet::parse("ab").unwrap();
        let l = syntactic_morphism(&compile_str("(a+b)*a(a+b)*", &ab).unwrap(), 4096).unwrap();
        let rho = rho_alpha(&l, 16).unwrap();
        let opt = opt_finite(&Morphism::trivial(&ab), &rho, &Config::default()).unwrap();
        assert_eq!(opt.expand(&rho.semiring, &rho.semiring.elements()), vec![0, 1, 2]);
    }

    #[test]
    fn mod_saturation_of_parity() {
        let rho = even_rho();
        let cfg = Config::default();
        let sat = saturate_group(GroupClass::Mod, &rho, &cfg).unwrap();
        assert_eq!(sat.set.expand(&rho.semiring, &rho.semiring.elements()), vec![0, 1]);
        assert!(verify_complete(GroupClass::Mod, &rho, &sat, &cfg).unwrap());
        let (opt, _) = opt_group(GroupClass::Mod, &rho, &cfg).unwrap();
        assert_eq!(opt.expand(&rho.semiring, &rho.semiring.elements()), vec![0, 1, 2]);
        assert!(verify_opt(&rho, &opt));
    }

    #[test]
    fn gr_saturation_over_trivial_monoid() {
        let a = Alphabet::parse("a").unwrap();
        let rho = rho_of_morphism(&Morphism::trivial(&a), 16).unwrap();
        let sat = saturate_group(GroupClass::Gr, &rho, &Config::default()).unwrap();
        assert_eq!(sat.set.expand(&rho.semiring, &rho.semiring.elements()), vec![0, 1]);
    }

    #[test]
    fn parity_separation() {
        let cfg = Config::default();
        let (even, odd) = (unary("(aa)*"), unary("a(aa)*"));
        assert!(!is_separable(&ClassSelector::St, &even, &odd, &cfg).unwrap().answer);
        assert!(is_separable(&ClassSelector::Mod, &even, &odd, &cfg).unwrap().answer);
        assert!(is_separable(&ClassSelector::St, &even, &unary("%"), &cfg).unwrap().answer);
        assert!(is_coverable(&ClassSelector::Gr, &even, &[unary("%")], &cfg).unwrap().answer);
    }
}
