//! Rank stratification of the commutator matrix over `F_q^b`.
//!
//! For every `y ∈ F_q^b` the skew-symmetric matrix `B(y)` has even rank `2i`.
//! [`StratumTable`] stores the half-rank `i` of every point; the stratum counts
//! `R^i`, the kernel counts `K^i(g)` (points with `g·y = 0`) and their
//! complements `V^i(g) = R^i - K^i(g)` are read off that table.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::LiePresentation;
use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElement};
use crate::linalg::rank_in_place;

/// Default cap on the number of enumerated points.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: usize = 1 << 14;

/// `B(Y)_ij = Σ_m λ_ij^m Y_m`, stored as the coefficient vector of each entry.
#[derive(Clone, Debug)]
pub struct CommutatorMatrix {
    field: FieldConfig,
    a: usize,
    b: usize,
    entries: Vec<FieldElement>,
}

pub fn build_matrix(pres: &LiePresentation) -> CommutatorMatrix {
    let (a, b) = (pres.a(), pres.b());
    let mut entries = Vec::with_capacity(a * a * b);
    for i in 0..a {
        for j in 0..a {
            entries.extend_from_slice(pres.lambda(i, j));
        }
    }
    CommutatorMatrix { field: pres.field().clone(), a, b, entries }
}

impl CommutatorMatrix {
    pub fn size(&self) -> usize {
        self.a
    }

    pub fn variables(&self) -> usize {
        self.b
    }

    /// Coefficients of the linear form in entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &[FieldElement] {
        let b = self.b;
        &self.entries[(i * self.a + j) * b..(i * self.a + j + 1) * b]
    }

    /// Writes `B(y)` row-major into `out`.
    pub fn evaluate(&self, y: &[FieldElement], out: &mut [FieldElement]) {
        debug_assert_eq!(y.len(), self.b);
        let f = &self.field;
        for (slot, form) in out.iter_mut().zip(self.entries.chunks_exact(self.b.max(1))) {
            *slot = f.dot(form, y);
        }
    }

    fn half_rank(&self, y: &[FieldElement], scratch: &mut [FieldElement]) -> usize {
        self.evaluate(y, scratch);
        rank_in_place(&self.field, scratch, self.a, self.a) / 2
    }
}

/// Rank of a skew-symmetric `a x a` matrix (row-major). Always even.
pub fn rank_skew(field: &FieldConfig, m: &[FieldElement], a: usize) -> Result<usize> {
    if m.len() != a * a {
        return Err(Error::DimensionMismatch { expected: a * a, found: m.len() });
    }
    for i in 0..a {
        if !m[i * a + i].is_zero() {
            return Err(Error::NotSkew);
        }
        for j in i + 1..a {
            if m[i * a + j] != field.neg(m[j * a + i]) {
                return Err(Error::NotSkew);
            }
        }
    }
    let mut scratch = m.to_vec();
    Ok(rank_in_place(field, &mut scratch, a, a))
}

/// Stratum counts `R[i] = #{y : rk B(y) = 2i}` for `i = 0..=a/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub counts: Vec<u64>,
}

impl RankProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `K[i] = K^i(g)` and `V[i] = V^i(g)` for one `g ∈ F_q^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KvVectors {
    pub g: Vec<FieldElement>,
    pub k: Vec<u64>,
    pub v: Vec<u64>,
}

/// Half-rank of `B(y)` for every `y ∈ F_q^b`, indexed by enumeration rank.
#[derive(Clone, Debug)]
pub struct StratumTable {
    field: FieldConfig,
    b: usize,
    strata: usize,
    half_ranks: Vec<u8>,
    profile: RankProfile,
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

fn space_size(field: &FieldConfig, dim: usize) -> u128 {
    (field.q() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

impl StratumTable {
    pub fn build(pres: &LiePresentation, budget: u64) -> Result<Self> {
        let field = pres.field().clone();
        let b = pres.b();
        let total = space_size(&field, b);
        check_budget(total, budget)?;
        let matrix = build_matrix(pres);
        let a = matrix.size();
        let strata = a / 2 + 1;
        let mut half_ranks = vec![0u8; total as usize];
        half_ranks.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let mut y = vec![FieldElement::ZERO; b];
            let mut scratch = vec![FieldElement::ZERO; a * a];
            let q = field.q();
            field.decode_vector((c * CHUNK) as u64, &mut y);
            for slot in chunk.iter_mut() {
                *slot = matrix.half_rank(&y, &mut scratch) as u8;
                for d in y.iter_mut().rev() {
                    if d.index() + 1 < q {
                        *d = field.element(d.index() + 1);
                        break;
                    }
                    *d = FieldElement::ZERO;
                }
            }
        });
        let mut counts = vec![0u64; strata];
        for &h in &half_ranks {
            counts[h as usize] += 1;
        }
        Ok(StratumTable { field, b, strata, half_ranks, profile: RankProfile { counts } })
    }

    pub fn profile(&self) -> &RankProfile {
        &self.profile
    }

    pub fn half_rank(&self, y_index: u64) -> usize {
        self.half_ranks[y_index as usize] as usize
    }

    pub fn len(&self) -> u64 {
        self.half_ranks.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.half_ranks.is_empty()
    }

    /// Kernel counts for `g`: one pass over all `y` evaluating `g·y`.
    pub fn kv(&self, g: &[FieldElement]) -> Result<KvVectors> {
        if g.len() != self.b {
            return Err(Error::DimensionMismatch { expected: self.b, found: g.len() });
        }
        let k = self.kernel_counts(g);
        let v = self.profile.counts.iter().zip(&k).map(|(r, k)| r - k).collect();
        Ok(KvVectors { g: g.to_vec(), k, v })
    }

    fn kernel_counts(&self, g: &[FieldElement]) -> Vec<u64> {
        let f = &self.field;
        let q = f.q() as usize;
        let b = self.b;
        // contrib[m][c] = g_m * c
        let contrib: Vec<Vec<FieldElement>> =
            g.iter().map(|&gm| f.elements().map(|c| f.mul(gm, c)).collect()).collect();
        let mut k = vec![0u64; self.strata];
        if b == 0 {
            k[self.half_ranks[0] as usize] += 1;
            return k;
        }
        // iterate over the leading b-1 coordinates, inner loop over the last
        let last = &contrib[b - 1];
        let outer = self.half_ranks.len() / q;
        let mut prefix = vec![0usize; b - 1];
        for o in 0..outer {
            let mut partial = FieldElement::ZERO;
            for (m, &c) in prefix.iter().enumerate() {
                partial = f.add(partial, contrib[m][c]);
            }
            let row = &self.half_ranks[o * q..(o + 1) * q];
            for (c, &h) in row.iter().enumerate() {
                if f.add(partial, last[c]).is_zero() {
                    k[h as usize] += 1;
                }
            }
            for d in prefix.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        k
    }
}

pub fn rank_profile(pres: &LiePresentation, budget: u64) -> Result<RankProfile> {
    Ok(StratumTable::build(pres, budget)?.profile)
}

pub fn kv_vectors(pres: &LiePresentation, g: &[FieldElement], budget: u64) -> Result<KvVectors> {
    if g.len() != pres.b() {
        return Err(Error::DimensionMismatch { expected: pres.b(), found: g.len() });
    }
    StratumTable::build(pres, budget)?.kv(g)
}

/// One class of nonzero `g` sharing the same `(K, V)` vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KvClass {
    pub k: Vec<u64>,
    pub v: Vec<u64>,
    pub multiplicity: u64,
    /// First member in enumeration order.
    pub representative: Vec<FieldElement>,
}

/// Partition of `F_q^b \ {0}` by `(K, V)` vectors.
#[derive(Clone, Debug)]
pub struct Classification {
    pub profile: RankProfile,
    pub classes: Vec<KvClass>,
    class_of: Vec<u32>,
}

const NO_CLASS: u32 = u32::MAX;

impl Classification {
    /// Class index of the element with enumeration rank `g_index`; `None` for 0.
    pub fn class_of(&self, g_index: u64) -> Option<usize> {
        match self.class_of[g_index as usize] {
            NO_CLASS => None,
            c => Some(c as usize),
        }
    }

    /// `(K, V)` for `g = 0`: `K = R`, `V = 0`.
    pub fn identity_kv(&self, b: usize) -> KvVectors {
        KvVectors {
            g: vec![FieldElement::ZERO; b],
            k: self.profile.counts.clone(),
            v: vec![0; self.profile.counts.len()],
        }
    }

    pub fn class_kv(&self, c: usize) -> KvVectors {
        let cls = &self.classes[c];
        KvVectors { g: cls.representative.clone(), k: cls.k.clone(), v: cls.v.clone() }
    }
}

/// Groups every nonzero `g ∈ F_q^b` by its `(K, V)` vectors. The cost is
/// `q^b` kernel passes of `q^b` points each, so the budget applies to `q^{2b}`.
pub fn classify_elements(pres: &LiePresentation, budget: u64) -> Result<Classification> {
    let total = space_size(pres.field(), pres.b());
    check_budget(total.saturating_mul(total), budget)?;
    let table = StratumTable::build(pres, budget)?;
    classify_with(&table)
}

pub fn classify_with(table: &StratumTable) -> Result<Classification> {
    let f = &table.field;
    let b = table.b;
    let total = table.len();
    let kernels: Vec<Vec<u64>> = (1..total)
        .into_par_iter()
        .map_init(
            || vec![FieldElement::ZERO; b],
            |g, idx| {
                f.decode_vector(idx, g);
                table.kernel_counts(g)
            },
        )
        .collect();
    let mut index: HashMap<&[u64], u32> = HashMap::new();
    let mut classes: Vec<KvClass> = Vec::new();
    let mut class_of = vec![NO_CLASS; total as usize];
    for (offset, k) in kernels.iter().enumerate() {
        let g_index = offset as u64 + 1;
        let c = *index.entry(k.as_slice()).or_insert_with(|| {
            let mut rep = vec![FieldElement::ZERO; b];
            f.decode_vector(g_index, &mut rep);
            classes.push(KvClass {
                k: k.clone(),
                v: table.profile.counts.iter().zip(k).map(|(r, k)| r - k).collect(),
                multiplicity: 0,
                representative: rep,
            });
            (classes.len() - 1) as u32
        });
        classes[c as usize].multiplicity += 1;
        class_of[g_index as usize] = c;
    }
    Ok(Classification { profile: table.profile.clone(), classes, class_of })
}
