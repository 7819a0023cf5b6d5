//! JSON encodings of automata, morphisms and semirings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sfc_core::automata::{Alphabet, Dfa};
use sfc_core::monoid::{FiniteMonoid, Morphism};
use sfc_core::semiring::{bits, PowersetSemiring, Semiring, TableSemiring};

use crate::{CliError, Result};

/// `{"alphabet":["a","b"],"states":3,"initial":0,"finals":[0],"delta":[[1,2],[2,0],[2,2]]}`.
/// Row `q` of `delta` lists the successors of `q` in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaJson {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

/// `{"size":2,"identity":0,"mul":[[0,1],[1,0]],"letters":{"a":1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub size: usize,
    pub identity: usize,
    pub mul: Vec<Vec<usize>>,
    pub letters: BTreeMap<String, usize>,
}

/// Tables over `0..size`. For powerset semirings, `elements[i]` is the
/// sorted list of monoid elements making up element `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiringJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<usize>>>,
}

fn symbol(s: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(CliError::input(format!("symbol {s:?} is not a single character"))),
    }
}

pub fn dfa_to_json(d: &Dfa) -> DfaJson {
    DfaJson {
        alphabet: d.alphabet().symbols().iter().map(|c| c.to_string()).collect(),
        states: d.state_count(),
        initial: d.initial(),
        finals: d.finals(),
        delta: d.table(),
    }
}

pub fn dfa_from_json(j: &DfaJson) -> Result<Dfa> {
    let symbols = j.alphabet.iter().map(|s| symbol(s)).collect::<Result<Vec<_>>>()?;
    if j.delta.len() != j.states {
        return Err(CliError::input(format!("\"states\" is {} but \"delta\" has {} rows", j.states, j.delta.len())));
    }
    Ok(Dfa::new(Alphabet::new(&symbols)?, j.initial, &j.finals, j.delta.clone())?)
}

pub fn morphism_to_json(m: &Morphism) -> MorphismJson {
    let monoid = m.monoid();
    MorphismJson {
        size: monoid.size(),
        identity: monoid.identity(),
        mul: monoid.table(),
        letters: m.alphabet().symbols().iter().zip(m.letters()).map(|(c, &s)| (c.to_string(), s)).collect(),
    }
}

/// Reads a morphism over `alphabet`, or over the sorted letter keys when no
/// alphabet is given.
pub fn morphism_from_json(j: &MorphismJson, alphabet: Option<&Alphabet>) -> Result<Morphism> {
    if j.mul.len() != j.size {
        return Err(CliError::input(format!("\"size\" is {} but \"mul\" has {} rows", j.size, j.mul.len())));
    }
    let keys = j.letters.keys().map(|s| symbol(s)).collect::<Result<Vec<_>>>()?;
    let alphabet = match alphabet {
        Some(a) => {
            let mut expected = a.symbols().to_vec();
            expected.sort_unstable();
            if expected != keys {
                return Err(CliError::input("morphism letters do not match the alphabet"));
            }
            a.clone()
        }
        None => Alphabet::new(&keys)?,
    };
    let letters = alphabet.symbols().iter().map(|c| j.letters[&c.to_string()]).collect();
    let monoid = FiniteMonoid::new(j.identity, j.mul.clone())?;
    Ok(Morphism::new(alphabet, monoid, letters)?)
}

pub fn table_semiring_to_json(s: &TableSemiring) -> SemiringJson {
    SemiringJson {
        size: s.size(),
        add: s.add_table(),
        mul: s.mul_table(),
        zero: s.zero(),
        one: s.one(),
        elements: None,
    }
}

/// Reads a semiring and checks every axiom.
pub fn table_semiring_from_json(j: &SemiringJson) -> Result<TableSemiring> {
    if j.add.len() != j.size {
        return Err(CliError::input(format!("\"size\" is {} but \"add\" has {} rows", j.size, j.add.len())));
    }
    let s = TableSemiring::new(j.add.clone(), j.mul.clone(), j.zero, j.one)?;
    s.validate().map_err(|v| CliError::input(format!("not a semiring: {} fails on {:?}", v.axiom, v.witness)))?;
    Ok(s)
}

/// Tabulates `2^M`, numbering each subset by its bitset.
pub fn powerset_semiring_to_json(s: &PowersetSemiring) -> SemiringJson {
    let all = s.elements();
    let table = |op: &dyn Fn(&u64, &u64) -> u64| -> Vec<Vec<usize>> {
        all.iter().map(|x| all.iter().map(|y| op(x, y) as usize).collect()).collect()
    };
    SemiringJson {
        size: all.len(),
        add: table(&|x, y| s.add(x, y)),
        mul: table(&|x, y| s.mul(x, y)),
        zero: s.zero() as usize,
        one: s.one() as usize,
        elements: Some(all.iter().map(|&x| bits(x)).collect()),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
