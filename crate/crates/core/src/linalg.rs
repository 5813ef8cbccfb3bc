//! Gaussian elimination over `F_q`.

use crate::field::{FieldConfig, FieldElement};

/// Rank of a dense `rows x cols` matrix stored row-major. Destroys `m`.
pub fn rank_in_place(f: &FieldConfig, m: &mut [FieldElement], rows: usize, cols: usize) -> usize {
    debug_assert_eq!(m.len(), rows * cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                m.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = f.inv(m[rank * cols + col]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let lead = m[r * cols + col];
            if lead.is_zero() {
                continue;
            }
            let factor = f.neg(f.mul(lead, inv));
            for c in col..cols {
                let v = f.mul(factor, m[rank * cols + c]);
                m[r * cols + c] = f.add(m[r * cols + c], v);
            }
        }
        rank += 1;
    }
    rank
}

/// A subspace kept in reduced row echelon form. Rows are normalised (pivot
/// entry 1) and pivots strictly increase.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(f: &FieldConfig, dim: usize, vectors: impl IntoIterator<Item = Vec<FieldElement>>) -> Self {
        let mut e = Echelon::new(dim);
        for v in vectors {
            e.insert(f, v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the span. Returns the residue.
    pub fn reduce(&self, f: &FieldConfig, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if !c.is_zero() {
                f.axpy(&mut v, f.neg(c), row);
            }
        }
        v
    }

    pub fn contains(&self, f: &FieldConfig, v: &[FieldElement]) -> bool {
        self.reduce(f, v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the row basis, if `v` lies in the span.
    pub fn coordinates(&self, f: &FieldConfig, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let coords: Vec<FieldElement> = self.pivots.iter().map(|&p| v[p]).collect();
        let mut residue = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            f.axpy(&mut residue, f.neg(c), row);
        }
        residue.iter().all(|x| x.is_zero()).then_some(coords)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, f: &FieldConfig, v: Vec<FieldElement>) -> bool {
        assert_eq!(v.len(), self.dim);
        let v = self.reduce(f, v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[piv]).expect("nonzero");
        let v = f.scale(inv, &v);
        for row in &mut self.rows {
            let c = row[piv];
            if !c.is_zero() {
                f.axpy(row, f.neg(c), &v);
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }
}

/// Basis (in RREF) of `{x : A x = 0}` for `A` given by its rows.
pub fn nullspace(f: &FieldConfig, rows: &[Vec<FieldElement>], cols: usize) -> Vec<Vec<FieldElement>> {
    let ech = Echelon::span(f, cols, rows.iter().cloned());
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let basis: Vec<Vec<FieldElement>> = free
        .iter()
        .map(|&fc| {
            let mut x = vec![FieldElement::ZERO; cols];
            x[fc] = f.one();
            for (row, &piv) in ech.rows.iter().zip(&ech.pivots) {
                x[piv] = f.neg(row[fc]);
            }
            x
        })
        .collect();
    Echelon::span(f, cols, basis).rows
}
