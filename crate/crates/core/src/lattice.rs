//! Integer lattices in `Z^n`, in row-echelon Hermite form.
//!
//! Two vectors are congruent modulo the lattice iff their reductions agree.
//! Reduction walks the pivots left to right and brings each pivot coordinate
//! into `[0, pivot)`; since later rows vanish on earlier pivot columns, the
//! representative is canonical.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Lattice {
    dim: usize,
    /// Echelon rows with positive pivots at strictly increasing columns.
    rows: Vec<(usize, Vec<i64>)>,
}

impl Lattice {
    /// The lattice spanned by `generators`, each of length `dim`.
    pub(crate) fn span(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut pending: Vec<Vec<i64>> = generators.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the pending rows.
            loop {
                let mut best: Option<usize> = None;
                for (i, r) in pending.iter().enumerate() {
                    if r[col] != 0 && best.is_none_or(|b| r[col].abs() < pending[b][col].abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                let pivot = pending[b].clone();
                let mut others_zero = true;
                for (i, r) in pending.iter_mut().enumerate() {
                    if i != b && r[col] != 0 {
                        let q = r[col].div_euclid(pivot[col]);
                        for (x, p) in r.iter_mut().zip(&pivot) {
                            *x -= q * p;
                        }
                        if r[col] != 0 {
                            others_zero = false;
                        }
                    }
                }
                if others_zero {
                    let mut row = pending.swap_remove(b);
                    if row[col] < 0 {
                        for x in row.iter_mut() {
                            *x = -*x;
                        }
                    }
                    rows.push((col, row));
                    pending.retain(|r| r.iter().any(|&x| x != 0));
                    break;
                }
            }
        }
        Lattice { dim, rows }
    }

    pub(crate) fn reduce(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut x = v.to_vec();
        for (col, row) in &self.rows {
            let q = x[*col].div_euclid(row[*col]);
            if q != 0 {
                for (a, b) in x.iter_mut().zip(row) {
                    *a -= q * b;
                }
            }
        }
        x
    }

    #[cfg(test)]
    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}
