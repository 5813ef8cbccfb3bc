//! Brute-force ground truth via the Lazard correspondence.
//!
//! Group elements are Lie algebra coordinate vectors, multiplied with the
//! truncated Baker–Campbell–Hausdorff series (classes 2 and 3). Fibres of
//! `c_1` are counted over every pair in `G × G`; longer words are obtained by
//! convolution over `G'`. Conjugacy classes are counted by an orbit sweep.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{FullLieAlgebra, LiePresentation};
use crate::enumeration::check_budget;
use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElement};
use crate::zeta::{analyze, FibreReport};

/// Default cap on pair evaluations.
pub const DEFAULT_PAIR_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct LazardGroup {
    alg: FullLieAlgebra,
    pres: LiePresentation,
    class: usize,
    half: FieldElement,
    twelfth: Option<FieldElement>,
}

/// `N_t(g)` for every `g ∈ G'`, indexed by the enumeration rank of the
/// `f`-coordinates of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreTable {
    pub t: u32,
    pub counts: Vec<BigUint>,
}

impl FibreTable {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

impl LazardGroup {
    pub fn new(alg: &FullLieAlgebra) -> Result<Self> {
        let pres = alg.reduce()?;
        let class = pres.class();
        let p = alg.field().p();
        if !(2..=3).contains(&class) || class >= p as usize {
            return Err(Error::ClassUnsupported { class, p });
        }
        let f = alg.field();
        let half = f.inv(f.from_prime(2))?;
        let twelfth = if class == 3 { Some(f.inv(f.from_prime(12))?) } else { None };
        Ok(LazardGroup { alg: alg.clone(), pres, class, half, twelfth })
    }

    pub fn field(&self) -> &FieldConfig {
        self.alg.field()
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.pres
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// `q^n`, or `None` if it does not fit.
    pub fn order(&self) -> Option<u64> {
        self.field().space_size(self.dim())
    }

    pub fn identity(&self) -> Vec<FieldElement> {
        vec![FieldElement::ZERO; self.dim()]
    }

    pub fn inverse(&self, u: &[FieldElement]) -> Vec<FieldElement> {
        u.iter().map(|&x| self.field().neg(x)).collect()
    }

    /// BCH product `u + v + ½[u,v] (+ 1/12([u,[u,v]] + [v,[v,u]]))`.
    pub fn multiply(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field();
        let uv = self.alg.bracket(u, v);
        let mut out: Vec<FieldElement> = u.iter().zip(v).map(|(&x, &y)| f.add(x, y)).collect();
        f.axpy(&mut out, self.half, &uv);
        if let Some(c) = self.twelfth {
            let vu: Vec<FieldElement> = uv.iter().map(|&x| f.neg(x)).collect();
            f.axpy(&mut out, c, &self.alg.bracket(u, &uv));
            f.axpy(&mut out, c, &self.alg.bracket(v, &vu));
        }
        out
    }

    /// `u⁻¹ v⁻¹ u v`. In class 2 this is exactly the Lie bracket.
    pub fn commutator(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        if self.class == 2 {
            return self.alg.bracket(u, v);
        }
        self.commutator_bch(u, v)
    }

    /// `u⁻¹ v⁻¹ u v` through three BCH products, for any supported class.
    pub fn commutator_bch(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        let left = self.multiply(&self.inverse(u), &self.inverse(v));
        self.multiply(&self.multiply(&left, u), v)
    }

    /// `v⁻¹ u v`, which is `u + [u, v]` in class 2.
    pub fn conjugate(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        if self.class == 2 {
            let f = self.field();
            let mut out = u.to_vec();
            f.axpy(&mut out, f.one(), &self.alg.bracket(u, v));
            return out;
        }
        self.multiply(&self.multiply(&self.inverse(v), u), v)
    }

    pub fn power(&self, u: &[FieldElement], e: u64) -> Vec<FieldElement> {
        (0..e).fold(self.identity(), |acc, _| self.multiply(&acc, u))
    }

    fn pair_count(&self) -> u128 {
        let q = self.field().q() as u128;
        q.checked_pow(2 * self.dim() as u32).unwrap_or(u128::MAX)
    }

    /// Base-`p` digits of a coordinate vector, most significant first.
    fn digits(&self, v: &[FieldElement]) -> Vec<u32> {
        v.iter().flat_map(|&x| self.field().coords(x)).collect()
    }

    /// The `F_p`-basis element behind digit `d` of an `n`-vector.
    fn digit_basis(&self, d: usize) -> Vec<FieldElement> {
        let f = self.field();
        let k = f.k() as usize;
        let mut coords = vec![0u32; k];
        coords[d % k] = 1;
        let mut v = self.identity();
        v[d / k] = f.from_coords(&coords).expect("valid coordinates");
        v
    }

    fn derived_index(&self, w: &[FieldElement]) -> Result<u64> {
        let coords = self.pres.derived_coordinates(w).ok_or(Error::InconsistentBracket(0, 0))?;
        Ok(self.field().encode_vector(&coords))
    }

    /// `N_1(g)` by enumerating every pair `(u, v)`.
    pub fn commutator_fibres(&self, budget: u64) -> Result<FibreTable> {
        check_budget(self.pair_count(), budget)?;
        let order = self.order().expect("within budget");
        let derived_size = self.field().space_size(self.pres.b()).expect("within budget") as usize;
        let counts = (0..order)
            .into_par_iter()
            .try_fold(
                || vec![0u64; derived_size],
                |mut acc, ui| {
                    let mut u = self.identity();
                    self.field().decode_vector(ui, &mut u);
                    if self.class == 2 {
                        self.count_row_bilinear(&u, &mut acc)?;
                    } else {
                        self.count_row_bch(&u, &mut acc)?;
                    }
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(
                || vec![0u64; derived_size],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    Ok(a)
                },
            )?;
        Ok(FibreTable { t: 1, counts: counts.into_iter().map(BigUint::from).collect() })
    }

    /// All `v` for a fixed `u` in class 2. `v ↦ [u, v]` is `F_p`-linear, so
    /// stepping `v` through its base-`p` odometer adds `[u, basis_d]` for each
    /// digit `d` that moves (a wrap from `p-1` to `0` is also `+1`).
    fn count_row_bilinear(&self, u: &[FieldElement], acc: &mut [u64]) -> Result<()> {
        let f = self.field();
        let p = f.p();
        let digits = self.dim() * f.k() as usize;
        let steps: Vec<Vec<u32>> = (0..digits)
            .map(|d| {
                let w = self.alg.bracket(u, &self.digit_basis(d));
                let coords = self.pres.derived_coordinates(&w).ok_or(Error::InconsistentBracket(0, 0))?;
                Ok(self.digits(&coords))
            })
            .collect::<Result<_>>()?;
        let width = steps.first().map_or(0, Vec::len);
        let mut value = vec![0u32; width];
        let mut odometer = vec![0u32; digits];
        loop {
            let idx = value.iter().fold(0u64, |s, &c| s * p as u64 + c as u64);
            acc[idx as usize] += 1;
            let mut d = digits;
            loop {
                if d == 0 {
                    return Ok(());
                }
                d -= 1;
                for (x, &s) in value.iter_mut().zip(&steps[d]) {
                    *x += s;
                    if *x >= p {
                        *x -= p;
                    }
                }
                odometer[d] += 1;
                if odometer[d] < p {
                    break;
                }
                odometer[d] = 0;
            }
        }
    }

    fn count_row_bch(&self, u: &[FieldElement], acc: &mut [u64]) -> Result<()> {
        let order = self.order().expect("within budget");
        let mut v = self.identity();
        for vi in 0..order {
            self.field().decode_vector(vi, &mut v);
            acc[self.derived_index(&self.commutator_bch(u, &v))? as usize] += 1;
        }
        Ok(())
    }

    /// `N_t` from `N_1` by `N_t(g) = Σ_{h∈G'} N_{t-1}(h) N_1(h⁻¹ g)`.
    pub fn convolve(&self, prev: &FibreTable, base: &FibreTable) -> Result<FibreTable> {
        let f = self.field();
        let b = self.pres.b();
        let size = base.counts.len() as u64;
        let elems: Vec<Vec<FieldElement>> = (0..size)
            .map(|i| {
                let mut g = vec![FieldElement::ZERO; b];
                f.decode_vector(i, &mut g);
                self.pres.derived_element(&g)
            })
            .collect();
        let counts = (0..size as usize)
            .into_par_iter()
            .map(|gi| {
                let mut sum = BigUint::zero();
                for (hi, h) in elems.iter().enumerate() {
                    if prev.counts[hi].is_zero() {
                        continue;
                    }
                    let q = self.multiply(&self.inverse(h), &elems[gi]);
                    let qi = self.derived_index(&q)? as usize;
                    sum += &prev.counts[hi] * &base.counts[qi];
                }
                Ok(sum)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FibreTable { t: prev.t + base.t, counts })
    }

    /// Tables for `t = 1..=t_max`.
    pub fn brute_fibres_upto(&self, t_max: u32, budget: u64) -> Result<Vec<FibreTable>> {
        if t_max == 0 {
            return Ok(Vec::new());
        }
        let base = self.commutator_fibres(budget)?;
        let mut out = vec![base.clone()];
        for _ in 1..t_max {
            let next = self.convolve(out.last().unwrap(), &base)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn brute_fibres(&self, t: u32, budget: u64) -> Result<FibreTable> {
        if t == 0 {
            return Err(Error::BadParameter("word length t must be positive".into()));
        }
        Ok(self.brute_fibres_upto(t, budget)?.pop().unwrap())
    }

    /// Number of conjugacy classes, by marking the orbit of each unvisited
    /// element under conjugation.
    pub fn conjugacy_count(&self, budget: u64) -> Result<u64> {
        check_budget(self.pair_count(), budget)?;
        let f = self.field();
        let order = self.order().expect("within budget");
        let mut visited = vec![false; order as usize];
        let mut classes = 0u64;
        let mut u = self.identity();
        for ui in 0..order {
            if visited[ui as usize] {
                continue;
            }
            classes += 1;
            f.decode_vector(ui, &mut u);
            let orbit: Vec<u64> = (0..order)
                .into_par_iter()
                .map_init(
                    || self.identity(),
                    |v, vi| {
                        f.decode_vector(vi, v);
                        f.encode_vector(&self.conjugate(&u, v))
                    },
                )
                .collect();
            for w in orbit {
                visited[w as usize] = true;
            }
        }
        Ok(classes)
    }
}

/// One disagreement between the formula and the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub t: u32,
    pub g: Vec<FieldElement>,
    pub theorem: String,
    pub oracle: String,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub t_max: u32,
    pub class_number_theorem: num_bigint::BigInt,
    pub class_number_oracle: u64,
    /// Oracle tables, `t = 1..=t_max`.
    pub oracle: Vec<FibreTable>,
    pub theorem: FibreReport,
    /// Number of `(t, g)` pairs compared.
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.class_number_theorem == self.class_number_oracle.into()
    }
}

/// Runs both pipelines and compares `N_t(g)` for every `g ∈ G'` and every
/// `t ≤ t_max`, plus the class numbers.
pub fn compare(alg: &FullLieAlgebra, t_max: u32, budget: u64) -> Result<ComparisonReport> {
    let group = LazardGroup::new(alg)?;
    let pres = group.presentation().clone();
    let ts: Vec<u32> = (1..=t_max).collect();
    let theorem = analyze(&pres, &ts, budget)?;
    let oracle = group.brute_fibres_upto(t_max, budget)?;
    let class_number_oracle = group.conjugacy_count(budget)?;
    let f = pres.field();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for table in &oracle {
        for (gi, count) in table.counts.iter().enumerate() {
            checked += 1;
            let expected = theorem.count_for(table.t, gi as u64).expect("t analysed");
            if expected.to_biguint().as_ref() != Some(count) {
                let mut g = vec![FieldElement::ZERO; pres.b()];
                f.decode_vector(gi as u64, &mut g);
                mismatches.push(Mismatch { t: table.t, g, theorem: expected.to_string(), oracle: count.to_string() });
            }
        }
    }
    Ok(ComparisonReport {
        t_max,
        class_number_theorem: theorem.class_number.clone(),
        class_number_oracle,
        oracle,
        theorem,
        checked,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn group(name: &str, p: u64, k: u32) -> LazardGroup {
        let f = make_field(p, k, None).unwrap();
        LazardGroup::new(&builtin(name, &f, Some(1)).unwrap()).unwrap()
    }

    /// Filiform algebra of class 3: [x1,x2]=x3, [x1,x3]=x4.
    fn filiform(p: u64) -> FullLieAlgebra {
        let f = make_field(p, 1, None).unwrap();
        let e = |i: usize| {
            let mut v = vec![f.zero(); 4];
            v[i] = f.one();
            v
        };
        FullLieAlgebra::new(f.clone(), (1..=4).map(|i| format!("x{i}")).collect(), vec![(0, 1, e(2)), (0, 2, e(3))])
            .unwrap()
    }

    #[test]
    fn heisenberg_commutator_of_generators() {
        let g = group("heisenberg", 3, 1);
        let f = g.field().clone();
        let x1 = vec![f.one(), f.zero(), f.zero()];
        let x2 = vec![f.zero(), f.one(), f.zero()];
        assert_eq!(g.commutator(&x1, &x2), vec![f.zero(), f.zero(), f.one()]);
        assert_eq!(g.commutator_bch(&x1, &x2), vec![f.zero(), f.zero(), f.one()]);
        // x1 x2 and x2 x1 differ by the commutator
        let a = g.multiply(&x1, &x2);
        let b = g.multiply(&x2, &x1);
        assert_eq!(g.multiply(&g.inverse(&b), &a), vec![f.zero(), f.zero(), f.one()]);
    }

    #[test]
    fn class_two_conjugation_matches_bch() {
        let g = group("quadric7", 3, 1);
        let f = g.field().clone();
        let (mut u, mut v) = (g.identity(), g.identity());
        for (ui, vi) in [(5, 1000), (77, 2186), (1234, 999)] {
            f.decode_vector(ui, &mut u);
            f.decode_vector(vi, &mut v);
            let bch = g.multiply(&g.multiply(&g.inverse(&v), &u), &v);
            assert_eq!(g.conjugate(&u, &v), bch);
        }
    }

    #[test]
    fn identity_and_inverse() {
        for g in [group("quadric7", 3, 1), group("heisenberg", 3, 2)] {
            let f = g.field().clone();
            let mut u = g.identity();
            f.decode_vector(17, &mut u);
            assert_eq!(g.multiply(&u, &g.identity()), u);
            assert_eq!(g.multiply(&u, &g.inverse(&u)), g.identity());
            assert_eq!(g.commutator(&u, &u), g.identity());
        }
    }

    #[test]
    fn heisenberg_f3_fibres() {
        let g = group("heisenberg", 3, 1);
        let t1 = g.brute_fibres(1, DEFAULT_PAIR_BUDGET).unwrap();
        let c: Vec<u64> = t1.counts.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(c, vec![297, 216, 216]);
        let t2 = g.brute_fibres(2, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(t2.total(), BigUint::from(27u32).pow(4));
        assert_eq!(g.conjugacy_count(DEFAULT_PAIR_BUDGET).unwrap(), 11);
    }

    #[test]
    fn fast_path_matches_bch_path() {
        let g = group("quadric7", 3, 1);
        let f = g.field().clone();
        let fast = g.commutator_fibres(DEFAULT_PAIR_BUDGET).unwrap();
        let mut slow = vec![0u64; fast.counts.len()];
        let mut u = g.identity();
        for ui in (0..g.order().unwrap()).step_by(97) {
            f.decode_vector(ui, &mut u);
            g.count_row_bch(&u, &mut slow).unwrap();
        }
        let mut sampled = vec![0u64; fast.counts.len()];
        for ui in (0..g.order().unwrap()).step_by(97) {
            f.decode_vector(ui, &mut u);
            g.count_row_bilinear(&u, &mut sampled).unwrap();
        }
        assert_eq!(slow, sampled);
    }

    #[test]
    fn commutator_values_lie_in_derived_subalgebra() {
        let g = group("quadric8", 3, 1);
        let t1 = g.commutator_fibres(DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(t1.total(), BigUint::from(6561u32 * 6561));
    }

    #[test]
    fn bch_is_associative_exhaustive_on_order_27() {
        let g = group("heisenberg", 3, 1);
        let f = g.field().clone();
        let elems: Vec<Vec<FieldElement>> = (0..27)
            .map(|i| {
                let mut v = g.identity();
                f.decode_vector(i, &mut v);
                v
            })
            .collect();
        for a in &elems {
            for b in &elems {
                let ab = g.multiply(a, b);
                for c in &elems {
                    assert_eq!(g.multiply(&ab, c), g.multiply(a, &g.multiply(b, c)));
                }
            }
        }
    }

    #[test]
    fn exponent_p_exhaustive() {
        for g in [group("heisenberg", 3, 1), group("quadric7", 3, 1), group("heisenberg", 5, 1)] {
            let f = g.field().clone();
            let mut u = g.identity();
            for ui in 0..g.order().unwrap() {
                f.decode_vector(ui, &mut u);
                assert_eq!(g.power(&u, f.p() as u64), g.identity());
            }
        }
    }

    #[test]
    fn class_three_group() {
        let alg = filiform(5);
        let g = LazardGroup::new(&alg).unwrap();
        assert_eq!(g.class(), 3);
        // maximal class group of order p^4: k(G) = 2p^2 - 1
        assert_eq!(g.conjugacy_count(DEFAULT_PAIR_BUDGET).unwrap(), 49);
        let f = g.field().clone();
        let mut u = g.identity();
        for ui in 0..625 {
            f.decode_vector(ui, &mut u);
            assert_eq!(g.power(&u, 5), g.identity());
        }
    }

    #[test]
    fn class_three_formula_agrees_with_oracle() {
        let report = compare(&filiform(5), 2, DEFAULT_PAIR_BUDGET).unwrap();
        assert!(report.is_clean(), "{:?}", report.mismatches);
    }

    #[test]
    fn unsupported_classes() {
        // filiform over F_3 has class 3 = p
        assert!(matches!(LazardGroup::new(&filiform(3)), Err(Error::ClassTooLarge { .. })));
        // class 4 over F_7
        let f = make_field(7, 1, None).unwrap();
        let e = |i: usize| {
            let mut v = vec![f.zero(); 5];
            v[i] = f.one();
            v
        };
        let alg = FullLieAlgebra::new(
            f.clone(),
            (1..=5).map(|i| format!("x{i}")).collect(),
            vec![(0, 1, e(2)), (0, 2, e(3)), (0, 3, e(4))],
        )
        .unwrap();
        assert_eq!(LazardGroup::new(&alg).unwrap_err(), Error::ClassUnsupported { class: 4, p: 7 });
    }

    #[test]
    fn budgets() {
        let g = group("quadric7", 3, 1);
        assert!(matches!(g.commutator_fibres(1000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(g.conjugacy_count(1000), Err(Error::BudgetExceeded { .. })));
    }

    fn arb_elem(g: &LazardGroup) -> impl Strategy<Value = u64> {
        0..g.order().unwrap()
    }

    proptest! {
        #[test]
        fn bch_associative_random(seed in any::<[u64; 3]>(), which in 0usize..3) {
            let g = match which {
                0 => group("quadric8", 3, 1),
                1 => group("elliptic9", 5, 1),
                _ => LazardGroup::new(&filiform(7)).unwrap(),
            };
            let f = g.field().clone();
            let order = g.order().unwrap();
            let v: Vec<Vec<FieldElement>> = seed.iter().map(|s| {
                let mut x = g.identity();
                f.decode_vector(s % order, &mut x);
                x
            }).collect();
            let lhs = g.multiply(&g.multiply(&v[0], &v[1]), &v[2]);
            let rhs = g.multiply(&v[0], &g.multiply(&v[1], &v[2]));
            prop_assert_eq!(lhs, rhs);
            let _ = arb_elem(&g);
        }
    }
}
