//! Deciding `L ∈ SF(C)`.
//!
//! For a finite prevariety `C`, `L ∈ SF(C)` iff every C-orbit of the
//! syntactic morphism is aperiodic. For a group prevariety `G`, it is enough
//! to check the G-kernel.

use alloc::vec::Vec;

use crate::automata::Dfa;
use crate::config::Config;
use crate::error::Result;
use crate::monoid::{syntactic_morphism, RecognizedLanguage};
use crate::oracles::{c_orbit, c_pairs, group_kernel, ClassKind, ClassSelector, FinitePrevariety, GroupClass};

/// The algebraic evidence a verdict was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// `(e, orbit of e)` for every idempotent `e` of the image.
    Orbits(Vec<(usize, Vec<usize>)>),
    Kernel(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub answer: bool,
    /// On rejection, an element `x` of an orbit or of the kernel with
    /// `x^(ω+1) ≠ x^ω`.
    pub witness: Option<usize>,
    pub monoid_size: usize,
    pub evidence: Evidence,
}

pub fn sf_membership_finite(c: &FinitePrevariety, lang: &Dfa, cfg: &Config) -> Result<MembershipVerdict> {
    let l = syntactic_morphism(lang, cfg.monoid_cap)?;
    membership_finite_of(c, &l)
}

pub(crate) fn membership_finite_of(c: &FinitePrevariety, l: &RecognizedLanguage) -> Result<MembershipVerdict> {
    let alpha = &l.morphism;
    let m = alpha.monoid();
    let pairs = c_pairs(c, alpha)?;
    let mut orbits = Vec::new();
    let mut witness = None;
    for e in m.idempotents() {
        let orbit = c_orbit(&pairs, alpha, e)?;
        if witness.is_none() {
            witness = m.aperiodicity_witness(&orbit)?;
        }
        orbits.push((e, orbit));
    }
    Ok(MembershipVerdict {
        answer: witness.is_none(),
        witness,
        monoid_size: m.size(),
        evidence: Evidence::Orbits(orbits),
    })
}

pub fn sf_membership_group(g: GroupClass, lang: &Dfa, cfg: &Config) -> Result<MembershipVerdict> {
    let l = syntactic_morphism(lang, cfg.monoid_cap)?;
    let m = l.morphism.monoid();
    let kernel = group_kernel(g, &l.morphism, cfg)?;
    let witness = m.aperiodicity_witness(&kernel)?;
    Ok(MembershipVerdict { answer: witness.is_none(), witness, monoid_size: m.size(), evidence: Evidence::Kernel(kernel) })
}

pub fn sf_membership(sel: &ClassSelector, lang: &Dfa, cfg: &Config) -> Result<MembershipVerdict> {
    match sel.kind(lang.alphabet())? {
        ClassKind::Finite(c) => sf_membership_finite(&c, lang, cfg),
        ClassKind::Group(g) => sf_membership_group(g, lang, cfg),
    }
}

/// Aperiodicity of the whole syntactic monoid.
pub fn schutzenberger_check(lang: &Dfa, cfg: &Config) -> Result<bool> {
    let l = syntactic_morphism(lang, cfg.monoid_cap)?;
    let m = l.morphism.monoid();
    let all: Vec<usize> = (0..m.size()).collect();
    m.is_aperiodic(&all)
}
