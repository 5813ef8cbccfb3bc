//! Twisted zeta values and everything derived from them, in exact rationals.
//!
//! For a stratum `i` and `g ∈ G'` with kernel vectors `(K, V)`:
//!
//! ```text
//! ζ^i(s, g) = |G/G'| · q^{-i(1+s)} · (K^i(g) - V^i(g) / (q - 1))
//! ```
//!
//! The power is taken in `q`, not `p`: a point of rank `2i` over `F_q`
//! carries characters of degree `q^i`. The word `c_t` is read off at
//! `s = 2t - 1`: `N_t(g) = |G|^{2t-1} ζ(2t-1, g)` and `P_t(g) = ζ(2t-1, g) / |G|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::LiePresentation;
use crate::enumeration::{classify_with, Classification, KvVectors, RankProfile, StratumTable};
use crate::error::{Error, Result};
use crate::field::FieldElement;

fn q_of(pres: &LiePresentation) -> BigInt {
    BigInt::from(pres.field().q())
}

/// `q^e` for any integer exponent.
pub fn q_power(q: &BigInt, e: i64) -> BigRational {
    let m = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(m)
    } else {
        BigRational::new(BigInt::one(), m)
    }
}

fn as_integer(r: &BigRational, what: impl FnOnce() -> String) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{} = {}", what(), r)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaValue {
    pub s: u32,
    pub strata: Vec<BigRational>,
    pub total: BigRational,
}

/// The zeta exponent attached to the word `c_t`.
pub fn word_exponent(t: u32) -> u32 {
    2 * t - 1
}

pub fn zeta_stratum(pres: &LiePresentation, kv: &KvVectors, i: usize, s: u32) -> BigRational {
    let q = q_of(pres);
    let abelianization = q_power(&q, (pres.n() - pres.b()) as i64);
    let scale = q_power(&q, -((i as i64) * (1 + s as i64)));
    let k = BigRational::from_integer(BigInt::from(kv.k[i]));
    let v = BigRational::new(BigInt::from(kv.v[i]), &q - 1);
    abelianization * scale * (k - v)
}

pub fn zeta(pres: &LiePresentation, kv: &KvVectors, s: u32) -> ZetaValue {
    let strata: Vec<BigRational> = (0..kv.k.len()).map(|i| zeta_stratum(pres, kv, i, s)).collect();
    let total = strata.iter().fold(BigRational::zero(), |acc, z| acc + z);
    ZetaValue { s, strata, total }
}

/// `ζ(s, g)` from a prebuilt stratum table.
pub fn zeta_total(pres: &LiePresentation, table: &StratumTable, g: &[FieldElement], s: u32) -> Result<ZetaValue> {
    Ok(zeta(pres, &table.kv(g)?, s))
}

/// `k(G) = ζ(1, 1)`.
pub fn class_number(pres: &LiePresentation, profile: &RankProfile) -> Result<BigInt> {
    let kv = KvVectors {
        g: vec![FieldElement::ZERO; pres.b()],
        k: profile.counts.clone(),
        v: vec![0; profile.counts.len()],
    };
    let k = as_integer(&zeta(pres, &kv, 1).total, || "class number".into())?;
    if !k.is_positive() {
        return Err(Error::NegativeCount(format!("class number {k}")));
    }
    Ok(k)
}

/// `N_t(g) = q^{n(2t-1)} ζ(2t-1, g)`, required to be a non-negative integer.
pub fn fibre_count(pres: &LiePresentation, z: &ZetaValue) -> Result<BigInt> {
    if z.s.is_multiple_of(2) {
        return Err(Error::BadParameter(format!("ζ(s, g) with even s = {} is not a word exponent", z.s)));
    }
    let t = z.s.div_ceil(2);
    let q = q_of(pres);
    let scaled = q_power(&q, pres.n() as i64 * z.s as i64) * &z.total;
    let count = as_integer(&scaled, || format!("N_{t}"))?;
    if count.is_negative() {
        return Err(Error::NegativeCount(format!("N_{t} = {count}")));
    }
    Ok(count)
}

/// `P_t(g) = ζ(2t-1, g) / |G|`, given `z` at `s = 2t - 1`.
pub fn fibre_prob(pres: &LiePresentation, z: &ZetaValue) -> BigRational {
    &z.total * q_power(&q_of(pres), -(pres.n() as i64))
}

/// `D[i] = #Irr^i = |G/G'| q^{-2i} R[i]`.
pub fn degree_counts(pres: &LiePresentation, profile: &RankProfile) -> Result<Vec<BigInt>> {
    let q = q_of(pres);
    let abelianization = q_power(&q, (pres.n() - pres.b()) as i64);
    profile
        .counts
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let d = &abelianization * q_power(&q, -2 * i as i64) * BigInt::from(r);
            as_integer(&d, || format!("degree count D[{i}]"))
        })
        .collect()
}

/// `Σ_{i≥1} D[i] q^{-2si}`, the sum over nonlinear characters of `χ(1)^{-2s}`.
fn nonlinear_sum(pres: &LiePresentation, degrees: &[BigInt], s: u32) -> BigRational {
    let q = q_of(pres);
    degrees
        .iter()
        .enumerate()
        .skip(1)
        .fold(BigRational::zero(), |acc, (i, d)| acc + q_power(&q, -2 * (s as i64) * i as i64) * d.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityBound {
    /// `(|G'| / |G|) Σ_{χ(1) ≠ 1} χ(1)^{-2s}`.
    pub squared: BigRational,
    pub value: f64,
}

/// Square of the L1 bound for the distribution `ζ(s, ·) / |G|` on `G'`; the
/// word `c_t` uses `s = 2t - 1`.
pub fn uniformity_bound(pres: &LiePresentation, degrees: &[BigInt], s: u32) -> UniformityBound {
    let q = q_of(pres);
    let ratio = q_power(&q, pres.b() as i64 - pres.n() as i64);
    let squared = ratio * nonlinear_sum(pres, degrees, s);
    let value = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    UniformityBound { squared, value }
}

/// Right-hand side of the second-moment identity:
/// `1/|G'| + (1/|G|) Σ_{χ(1) ≠ 1} χ(1)^{-2s}`.
pub fn predicted_second_moment(pres: &LiePresentation, degrees: &[BigInt], s: u32) -> BigRational {
    let q = q_of(pres);
    q_power(&q, -(pres.b() as i64)) + q_power(&q, -(pres.n() as i64)) * nonlinear_sum(pres, degrees, s)
}

/// `P_t` over `G'` grouped by KV class: `(probability, multiplicity)` for the
/// identity followed by each class.
fn grouped_probabilities(pres: &LiePresentation, cls: &Classification, t: u32) -> Vec<(BigRational, u64)> {
    let b = pres.b();
    let s = word_exponent(t);
    std::iter::once((fibre_prob(pres, &zeta(pres, &cls.identity_kv(b), s)), 1))
        .chain(
            (0..cls.classes.len())
                .map(|c| (fibre_prob(pres, &zeta(pres, &cls.class_kv(c), s)), cls.classes[c].multiplicity)),
        )
        .collect()
}

/// `Σ_{g∈G'} |P_t(g) - 1/|G'||`.
pub fn l1_distance(pres: &LiePresentation, cls: &Classification, t: u32) -> BigRational {
    let uniform = q_power(&q_of(pres), -(pres.b() as i64));
    grouped_probabilities(pres, cls, t)
        .into_iter()
        .fold(BigRational::zero(), |acc, (pr, m)| acc + (pr - &uniform).abs() * BigInt::from(m))
}

/// `Σ_{g∈G'} P_t(g)^2`.
pub fn second_moment(pres: &LiePresentation, cls: &Classification, t: u32) -> BigRational {
    grouped_probabilities(pres, cls, t)
        .into_iter()
        .fold(BigRational::zero(), |acc, (pr, m)| acc + &pr * &pr * BigInt::from(m))
}

/// `ζ_{G1×G2}(s, (g1, g2)) = ζ_{G1}(s, g1) ζ_{G2}(s, g2)`.
pub fn direct_product(a: &ZetaValue, b: &ZetaValue) -> Result<BigRational> {
    if a.s != b.s {
        return Err(Error::MismatchedExponent(a.s, b.s));
    }
    Ok(&a.total * &b.total)
}

/// Zeta value, fibre size and probability for one element of `G'`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreRow {
    pub zeta: ZetaValue,
    pub count: BigInt,
    pub probability: BigRational,
}

impl FibreRow {
    fn new(pres: &LiePresentation, kv: &KvVectors, t: u32) -> Result<Self> {
        let zeta = zeta(pres, kv, word_exponent(t));
        Ok(FibreRow { count: fibre_count(pres, &zeta)?, probability: fibre_prob(pres, &zeta), zeta })
    }
}

/// Everything for one word length `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibresAtT {
    pub t: u32,
    /// `2t - 1`, the exponent at which `ζ` is evaluated.
    pub s: u32,
    pub identity: FibreRow,
    /// One row per KV class, in classification order.
    pub classes: Vec<FibreRow>,
    pub bound: UniformityBound,
    pub l1_distance: BigRational,
    pub second_moment: BigRational,
}

impl FibresAtT {
    /// `Σ_{g∈G'} N_t(g)`, which must equal `|G|^{2t}`.
    pub fn total_count(&self, cls: &Classification) -> BigInt {
        self.classes
            .iter()
            .zip(&cls.classes)
            .fold(self.identity.count.clone(), |acc, (row, c)| acc + &row.count * BigInt::from(c.multiplicity))
    }

    pub fn bound_holds(&self) -> bool {
        &self.l1_distance * &self.l1_distance <= self.bound.squared
    }
}

/// Theorem-side analysis of a presentation.
#[derive(Clone, Debug)]
pub struct FibreReport {
    pub q: u32,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub group_order: BigInt,
    pub abelianization_order: BigInt,
    pub derived_order: BigInt,
    pub classification: Classification,
    pub class_number: BigInt,
    pub degree_counts: Vec<BigInt>,
    pub fibres: Vec<FibresAtT>,
}

impl FibreReport {
    pub fn at(&self, t: u32) -> Option<&FibresAtT> {
        self.fibres.iter().find(|f| f.t == t)
    }

    /// `N_t(g)` for the element with enumeration rank `g_index`.
    pub fn count_for(&self, t: u32, g_index: u64) -> Option<&BigInt> {
        let ft = self.at(t)?;
        Some(match self.classification.class_of(g_index) {
            None => &ft.identity.count,
            Some(c) => &ft.classes[c].count,
        })
    }

    pub fn zeta_for(&self, t: u32, g_index: u64) -> Option<&ZetaValue> {
        let ft = self.at(t)?;
        Some(match self.classification.class_of(g_index) {
            None => &ft.identity.zeta,
            Some(c) => &ft.classes[c].zeta,
        })
    }
}

/// Runs the full theorem-side pipeline for each `t` in `ts`. The budget
/// bounds the `q^{2b}` kernel evaluations of the classification.
pub fn analyze(pres: &LiePresentation, ts: &[u32], budget: u64) -> Result<FibreReport> {
    if let Some(&t) = ts.iter().find(|&&t| t == 0) {
        return Err(Error::BadParameter(format!("word length t must be positive, got {t}")));
    }
    let q = q_of(pres);
    let total = (pres.field().q() as u128).checked_pow(pres.b() as u32).unwrap_or(u128::MAX);
    crate::enumeration::check_budget(total.saturating_mul(total), budget)?;
    let table = StratumTable::build(pres, budget)?;
    let classification = classify_with(&table)?;
    let degrees = degree_counts(pres, &classification.profile)?;
    let class_number = class_number(pres, &classification.profile)?;
    let b = pres.b();
    let mut fibres = Vec::with_capacity(ts.len());
    for &t in ts {
        let identity = FibreRow::new(pres, &classification.identity_kv(b), t)?;
        let classes = (0..classification.classes.len())
            .map(|c| FibreRow::new(pres, &classification.class_kv(c), t))
            .collect::<Result<Vec<_>>>()?;
        fibres.push(FibresAtT {
            t,
            s: word_exponent(t),
            identity,
            classes,
            bound: uniformity_bound(pres, &degrees, word_exponent(t)),
            l1_distance: l1_distance(pres, &classification, t),
            second_moment: second_moment(pres, &classification, t),
        });
    }
    Ok(FibreReport {
        q: pres.field().q(),
        n: pres.n(),
        a: pres.a(),
        b,
        group_order: num_traits::pow(q.clone(), pres.n()),
        abelianization_order: num_traits::pow(q.clone(), pres.n() - b),
        derived_order: num_traits::pow(q, b),
        classification,
        class_number,
        degree_counts: degrees,
        fibres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::enumeration::DEFAULT_BUDGET;
    use crate::field::make_field;

    fn pres(name: &str, p: u64, k: u32) -> LiePresentation {
        let f = make_field(p, k, None).unwrap();
        builtin(name, &f, Some(1)).unwrap().reduce().unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn heisenberg_strata() {
        let pr = pres("heisenberg", 3, 1);
        let table = StratumTable::build(&pr, DEFAULT_BUDGET).unwrap();
        let f = pr.field();
        for s in 1..=3u32 {
            let id = zeta_total(&pr, &table, &[f.zero()], s).unwrap();
            // q^2 and q^{1-s}(q-1)
            assert_eq!(id.strata[0], r(9, 1));
            assert_eq!(id.strata[1], q_power(&3.into(), 1 - s as i64) * BigInt::from(2));
            let g = zeta_total(&pr, &table, &[f.one()], s).unwrap();
            assert_eq!(g.strata[1], -q_power(&3.into(), 1 - s as i64));
        }
    }

    #[test]
    fn class_numbers_at_q3() {
        let k = |name| {
            let pr = pres(name, 3, 1);
            let prof = crate::enumeration::rank_profile(&pr, DEFAULT_BUDGET).unwrap();
            class_number(&pr, &prof).unwrap()
        };
        assert_eq!(k("heisenberg"), 11.into());
        assert_eq!(k("quadric7"), 171.into());
        assert_eq!(k("quadric8"), 417.into());
    }

    #[test]
    fn heisenberg_fibres_and_bound() {
        let pr = pres("heisenberg", 3, 1);
        let rep = analyze(&pr, &[1], DEFAULT_BUDGET).unwrap();
        let ft = rep.at(1).unwrap();
        assert_eq!(ft.identity.count, 297.into());
        assert_eq!(ft.classes[0].count, 216.into());
        assert_eq!(ft.total_count(&rep.classification), 729.into());
        assert_eq!(ft.bound.squared, r(2, 81));
        assert_eq!(ft.l1_distance, r(4, 27));
        assert!(ft.bound_holds());
        assert_eq!(rep.degree_counts, vec![BigInt::from(9), BigInt::from(2)]);
    }

    #[test]
    fn quadric7_degree_counts() {
        // D[i] = 3^4 · 3^{-2i} · R[i] with R = (1, 8, 18)
        let pr = pres("quadric7", 3, 1);
        let prof = crate::enumeration::rank_profile(&pr, DEFAULT_BUDGET).unwrap();
        assert_eq!(prof.counts, vec![1, 8, 18]);
        let d = degree_counts(&pr, &prof).unwrap();
        assert_eq!(d, vec![BigInt::from(81), BigInt::from(72), BigInt::from(18)]);
        let mass: BigInt = d.iter().enumerate().map(|(i, d)| d * BigInt::from(9u32.pow(i as u32))).sum();
        assert_eq!(mass, BigInt::from(3u32.pow(7)));
    }

    #[test]
    fn bound_shrinks_with_t() {
        let pr = pres("quadric8", 3, 1);
        let prof = crate::enumeration::rank_profile(&pr, DEFAULT_BUDGET).unwrap();
        let d = degree_counts(&pr, &prof).unwrap();
        let b: Vec<_> = (1..=4).map(|s| uniformity_bound(&pr, &d, s).squared).collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]));
        // the i = 1 stratum dominates, so the ratio tends to q^{-2}
        let ratio = &b[3] / &b[2];
        assert!(ratio < r(1, 8) && ratio > r(1, 10));
    }

    #[test]
    fn direct_product_checks_exponent() {
        let z1 = ZetaValue { s: 1, strata: vec![], total: r(11, 1) };
        let z2 = ZetaValue { s: 2, strata: vec![], total: r(11, 1) };
        assert_eq!(direct_product(&z1, &z1).unwrap(), r(121, 1));
        assert_eq!(direct_product(&z1, &z2).unwrap_err(), Error::MismatchedExponent(1, 2));
    }

    #[test]
    fn non_integral_counts_are_fatal() {
        let pr = pres("heisenberg", 3, 1);
        let bogus = ZetaValue { s: 1, strata: vec![], total: r(1, 81) };
        assert!(matches!(fibre_count(&pr, &bogus), Err(Error::NonIntegral(_))));
        let neg = ZetaValue { s: 1, strata: vec![], total: r(-1, 1) };
        assert!(matches!(fibre_count(&pr, &neg), Err(Error::NegativeCount(_))));
        let even = ZetaValue { s: 2, strata: vec![], total: r(1, 1) };
        assert!(matches!(fibre_count(&pr, &even), Err(Error::BadParameter(_))));
        let bad = RankProfile { counts: vec![1, 0, 1] };
        assert!(matches!(degree_counts(&pr, &bad), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn heisenberg_second_word() {
        // N_2(1) = 27^3 (9 + 2/9) and N_2(g) = 27^3 (9 - 1/9)
        let pr = pres("heisenberg", 3, 1);
        let ft = analyze(&pr, &[2], DEFAULT_BUDGET).unwrap().fibres.remove(0);
        assert_eq!(ft.s, 3);
        assert_eq!(ft.identity.count, BigInt::from(19683 / 9 * 83));
        assert_eq!(ft.classes[0].count, BigInt::from(19683 / 9 * 80));
    }

    #[test]
    fn zero_t_rejected() {
        let pr = pres("heisenberg", 3, 1);
        assert!(matches!(analyze(&pr, &[0], DEFAULT_BUDGET), Err(Error::BadParameter(_))));
    }

    #[test]
    fn identity_fibre_is_at_least_uniform() {
        // P_t(1) >= 1/|G| on every builtin, t <= 3
        for (name, p) in [("heisenberg", 3), ("heisenberg", 5), ("quadric7", 3), ("quadric8", 3), ("elliptic9", 5)] {
            let pr = pres(name, p, 1);
            let rep = analyze(&pr, &[1, 2, 3], DEFAULT_BUDGET).unwrap();
            for ft in &rep.fibres {
                assert!(ft.identity.probability >= BigRational::new(1.into(), rep.group_order.clone()), "{name}");
            }
        }
    }
}
