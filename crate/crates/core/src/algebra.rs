//! Finite nilpotent Lie algebras over `F_q` and their commutator data.
//!
//! A [`FullLieAlgebra`] is a basis with a bracket table. [`FullLieAlgebra::reduce`]
//! picks a basis `f` of the derived subalgebra and coset representatives `e`
//! of the quotient by the centre, and records `[e_i, e_j] = Σ_m λ_ij^m f_m` as
//! a [`LiePresentation`].

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElement};
use crate::linalg::{nullspace, Echelon};

/// A Lie algebra with basis `names` and structure constants
/// `[e_i, e_j] = Σ_m c_ij^m e_m`. The table is stored fully, antisymmetric by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullLieAlgebra {
    field: FieldConfig,
    names: Vec<String>,
    table: Vec<FieldElement>,
}

/// One bracket relation `[e_i, e_j] = rhs`, zero-based indices.
pub type Relation = (usize, usize, Vec<FieldElement>);

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub class: usize,
    /// Dimensions of the lower central series, starting with the algebra itself.
    pub lower_central_dims: Vec<usize>,
    pub center: Echelon,
    pub derived: Echelon,
}

impl FullLieAlgebra {
    pub fn new(field: FieldConfig, names: Vec<String>, relations: Vec<Relation>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Malformed("no generators".into()));
        }
        let mut seen_names = HashSet::new();
        for name in &names {
            if !seen_names.insert(name.as_str()) {
                return Err(Error::Malformed(format!("duplicate generator `{name}`")));
            }
        }
        let mut table = vec![FieldElement::ZERO; n * n * n];
        let mut seen = HashSet::new();
        for (i, j, rhs) in relations {
            if i >= n || j >= n {
                return Err(Error::Malformed(format!("generator index out of range in [{i}, {j}]")));
            }
            if i == j {
                return Err(Error::Malformed(format!("self-bracket [{}, {}]", names[i], names[j])));
            }
            if rhs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Malformed(format!("duplicate bracket [{}, {}]", names[i], names[j])));
            }
            for m in 0..n {
                table[(i * n + j) * n + m] = rhs[m];
                table[(j * n + i) * n + m] = field.neg(rhs[m]);
            }
        }
        Ok(FullLieAlgebra { field, names, table })
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `[e_i, e_j]` as a coordinate vector.
    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[FieldElement] {
        let n = self.dim();
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// The nonzero relations `[e_i, e_j]` with `i < j`.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize, &[FieldElement])> + '_ {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.basis_bracket(i, j)))
            .filter(|(_, _, v)| v.iter().any(|x| !x.is_zero()))
    }

    pub fn bracket(&self, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.dim();
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; n];
        for (i, &ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                f.axpy(&mut out, f.mul(ui, vj), self.basis_bracket(i, j));
            }
        }
        out
    }

    fn bracket_basis_with(&self, i: usize, w: &[FieldElement]) -> Vec<FieldElement> {
        let n = self.dim();
        let mut out = vec![FieldElement::ZERO; n];
        for (j, &wj) in w.iter().enumerate() {
            if !wj.is_zero() && j != i {
                self.field.axpy(&mut out, wj, self.basis_bracket(i, j));
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.dim()];
        v[i] = self.field.one();
        v
    }

    /// First basis triple (1-based) violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let f = &self.field;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = self.bracket_basis_with(i, self.basis_bracket(j, k));
                    let t1 = self.bracket_basis_with(j, self.basis_bracket(k, i));
                    let t2 = self.bracket_basis_with(k, self.basis_bracket(i, j));
                    for m in 0..n {
                        s[m] = f.add(s[m], f.add(t1[m], t2[m]));
                    }
                    if s.iter().any(|x| !x.is_zero()) {
                        return Some((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        None
    }

    /// Lower central series `γ_1 ⊇ γ_2 ⊇ ...` down to zero.
    pub fn lower_central_series(&self) -> Result<Vec<Echelon>> {
        let n = self.dim();
        let f = &self.field;
        let mut series = vec![Echelon::span(f, n, (0..n).map(|i| self.unit(i)))];
        loop {
            let last = series.last().unwrap();
            if last.rank() == 0 {
                series.pop();
                return Ok(series);
            }
            let mut next = Echelon::new(n);
            for i in 0..n {
                for w in last.rows() {
                    next.insert(f, self.bracket_basis_with(i, w));
                }
            }
            if next.rank() == last.rank() {
                return Err(Error::NotNilpotent(next.rank()));
            }
            series.push(next);
        }
    }

    pub fn center(&self) -> Echelon {
        let n = self.dim();
        // u is central iff Σ_i u_i c_ij^m = 0 for all j, m
        let rows: Vec<Vec<FieldElement>> = (0..n)
            .flat_map(|j| (0..n).map(move |m| (j, m)))
            .map(|(j, m)| (0..n).map(|i| self.basis_bracket(i, j)[m]).collect())
            .collect();
        Echelon::span(&self.field, n, nullspace(&self.field, &rows, n))
    }

    /// Checks the Jacobi identity and nilpotency, computes the class, the
    /// centre and the derived subalgebra. Class `>= p` is an error.
    pub fn validate(&self) -> Result<ValidationReport> {
        if let Some((i, j, k)) = self.jacobi_violation() {
            return Err(Error::JacobiViolation(i, j, k));
        }
        let series = self.lower_central_series()?;
        let class = series.len();
        if class >= self.field.p() as usize {
            return Err(Error::ClassTooLarge { class, p: self.field.p() });
        }
        let n = self.dim();
        let derived = series.get(1).cloned().unwrap_or_else(|| Echelon::new(n));
        Ok(ValidationReport {
            class,
            lower_central_dims: series.iter().map(Echelon::rank).collect(),
            center: self.center(),
            derived,
        })
    }

    /// Reduces to commutator data. The `f` basis is the reduced echelon basis
    /// of the derived subalgebra; the `e` representatives are the earliest
    /// basis vectors independent modulo the centre.
    pub fn reduce(&self) -> Result<LiePresentation> {
        let report = self.validate()?;
        let f = &self.field;
        let n = self.dim();
        if report.derived.rank() == 0 {
            return Err(Error::Abelian);
        }
        let mut modulo_center = report.center.clone();
        let e_indices: Vec<usize> = (0..n).filter(|&i| modulo_center.insert(f, self.unit(i))).collect();
        let a = e_indices.len();
        let b = report.derived.rank();
        let mut lambda = vec![FieldElement::ZERO; a * a * b];
        for (x, &i) in e_indices.iter().enumerate() {
            for (y, &j) in e_indices.iter().enumerate().skip(x + 1) {
                let coords = report
                    .derived
                    .coordinates(f, self.basis_bracket(i, j))
                    .ok_or(Error::InconsistentBracket(i + 1, j + 1))?;
                for m in 0..b {
                    lambda[(x * a + y) * b + m] = coords[m];
                    lambda[(y * a + x) * b + m] = f.neg(coords[m]);
                }
            }
        }
        Ok(LiePresentation {
            field: f.clone(),
            n,
            a,
            b,
            class: report.class,
            lambda,
            e_names: e_indices.iter().map(|&i| self.names[i].clone()).collect(),
            derived: report.derived,
        })
    }

    /// `self ⊕ other`; the second summand's names get a `'` suffix on clashes.
    pub fn direct_sum(&self, other: &FullLieAlgebra) -> Result<FullLieAlgebra> {
        if self.field != other.field {
            return Err(Error::BadParameter("direct sum of algebras over different fields".into()));
        }
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut names = self.names.clone();
        let taken: HashSet<&str> = self.names.iter().map(String::as_str).collect();
        let clash = other.names.iter().any(|s| taken.contains(s.as_str()));
        names.extend(other.names.iter().map(|s| if clash { format!("{s}'") } else { s.clone() }));
        let mut rels = Vec::new();
        for (i, j, v) in self.relations() {
            let mut rhs = v.to_vec();
            rhs.resize(n, FieldElement::ZERO);
            rels.push((i, j, rhs));
        }
        for (i, j, v) in other.relations() {
            let mut rhs = vec![FieldElement::ZERO; n1];
            rhs.extend_from_slice(v);
            rels.push((i + n1, j + n1, rhs));
        }
        FullLieAlgebra::new(self.field.clone(), names, rels)
    }

    /// Base extension `F_p -> F_{p^k}`: same structure constants, read in the
    /// larger field. Only algebras over a prime field can be extended.
    pub fn base_extend(&self, target: &FieldConfig) -> Result<FullLieAlgebra> {
        if *target == self.field {
            return Ok(self.clone());
        }
        if self.field.k() != 1 || target.p() != self.field.p() {
            return Err(Error::BadParameter(format!(
                "cannot extend scalars from F_{}^{} to F_{}^{}",
                self.field.p(),
                self.field.k(),
                target.p(),
                target.k()
            )));
        }
        let rels = self
            .relations()
            .map(|(i, j, v)| (i, j, v.iter().map(|c| target.from_prime(c.index() as i64)).collect()))
            .collect();
        FullLieAlgebra::new(target.clone(), self.names.clone(), rels)
    }
}

/// Commutator data `(n, a, b, λ)` of a nilpotent Lie algebra.
#[derive(Clone, Debug)]
pub struct LiePresentation {
    field: FieldConfig,
    n: usize,
    a: usize,
    b: usize,
    class: usize,
    lambda: Vec<FieldElement>,
    e_names: Vec<String>,
    derived: Echelon,
}

impl LiePresentation {
    /// Builds a presentation directly from structure constants, with the
    /// derived basis taken to be the last `b` coordinates of an `n`-dimensional
    /// algebra. `pairs` lists `(i, j, λ_ij)` for `i < j < a`.
    pub fn from_structure_constants(
        field: FieldConfig,
        n: usize,
        a: usize,
        b: usize,
        class: usize,
        pairs: &[(usize, usize, Vec<FieldElement>)],
    ) -> Result<Self> {
        if b == 0 {
            return Err(Error::Abelian);
        }
        if a < 2 || a > n || b > n {
            return Err(Error::BadParameter(format!("inconsistent dimensions n={n} a={a} b={b}")));
        }
        if class >= field.p() as usize {
            return Err(Error::ClassTooLarge { class, p: field.p() });
        }
        let mut lambda = vec![FieldElement::ZERO; a * a * b];
        for (i, j, v) in pairs {
            let (i, j) = (*i, *j);
            if i >= j || j >= a || v.len() != b {
                return Err(Error::BadParameter(format!("bad structure constant entry ({i}, {j})")));
            }
            for m in 0..b {
                lambda[(i * a + j) * b + m] = v[m];
                lambda[(j * a + i) * b + m] = field.neg(v[m]);
            }
        }
        let derived = Echelon::span(
            &field,
            n,
            (n - b..n).map(|c| {
                let mut v = vec![FieldElement::ZERO; n];
                v[c] = field.one();
                v
            }),
        );
        Ok(LiePresentation {
            e_names: (1..=a).map(|i| format!("e{i}")).collect(),
            field,
            n,
            a,
            b,
            class,
            lambda,
            derived,
        })
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of `g / z`.
    pub fn a(&self) -> usize {
        self.a
    }

    /// Rank of the derived subalgebra.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// `λ_ij`, as a vector over the `f` basis (zero-based, full skew table).
    #[inline]
    pub fn lambda(&self, i: usize, j: usize) -> &[FieldElement] {
        let (a, b) = (self.a, self.b);
        &self.lambda[(i * a + j) * b..(i * a + j + 1) * b]
    }

    /// Names of the basis vectors chosen as representatives of `g / z`.
    pub fn e_names(&self) -> &[String] {
        &self.e_names
    }

    /// The `f` basis as coordinate vectors in the original algebra.
    pub fn f_basis(&self) -> &[Vec<FieldElement>] {
        self.derived.rows()
    }

    /// Coordinates over the `f` basis of an element of the derived subalgebra.
    pub fn derived_coordinates(&self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        self.derived.coordinates(&self.field, v)
    }

    /// `Σ_m g_m f_m` in the original coordinates.
    pub fn derived_element(&self, g: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.n];
        for (row, &c) in self.derived.rows().iter().zip(g) {
            self.field.axpy(&mut out, c, row);
        }
        out
    }

    /// Pivot columns of the `f` basis.
    pub fn f_pivots(&self) -> &[usize] {
        self.derived.pivots()
    }

    /// The class-2 algebra on `e ⊕ f` with `[e_i, e_j] = Σ λ_ij^m f_m`.
    pub fn implied_algebra(&self) -> Result<FullLieAlgebra> {
        let (a, b) = (self.a, self.b);
        let mut names: Vec<String> = (1..=a).map(|i| format!("e{i}")).collect();
        names.extend((1..=b).map(|m| format!("f{m}")));
        let mut rels = Vec::new();
        for i in 0..a {
            for j in i + 1..a {
                let lam = self.lambda(i, j);
                if lam.iter().any(|x| !x.is_zero()) {
                    let mut rhs = vec![FieldElement::ZERO; a];
                    rhs.extend_from_slice(lam);
                    rels.push((i, j, rhs));
                }
            }
        }
        FullLieAlgebra::new(self.field.clone(), names, rels)
    }
}

/// Builtin example algebras: name and a one-line description.
pub const BUILTINS: &[(&str, &str)] = &[
    ("heisenberg", "Heisenberg algebra, n=3: [x1,x2]=y1"),
    ("quadric7", "n=7, class 2, conic Y1^2 - Y2*Y3 in P^2: [x1,x3]=y1 [x1,x4]=y2 [x2,x3]=y3 [x2,x4]=y1"),
    ("quadric8", "n=8, class 2, quadric Y1*Y4 - Y2*Y3 in P^3: [x1,x3]=y1 [x1,x4]=y2 [x2,x3]=y3 [x2,x4]=y4"),
    ("elliptic9", "n=9, class 2, plane cubic E_alpha (prime fields only, parameter alpha in F_p^*)"),
];

/// (x index, x index, y index, coefficient), all 1-based.
type BuiltinBracket = (usize, usize, usize, i64);

/// Builds one of the builtin example algebras over `field`. `alpha` is used
/// only by `elliptic9`, where it is required.
pub fn builtin(name: &str, field: &FieldConfig, alpha: Option<i64>) -> Result<FullLieAlgebra> {
    let gens = |xs: usize, ys: usize| -> Vec<String> {
        (1..=xs).map(|i| format!("x{i}")).chain((1..=ys).map(|i| format!("y{i}"))).collect()
    };
    let (names, rels, xs): (Vec<String>, Vec<BuiltinBracket>, usize) = match name {
        "heisenberg" => (gens(2, 1), vec![(1, 2, 1, 1)], 2),
        "quadric7" => (gens(4, 3), vec![(1, 3, 1, 1), (1, 4, 2, 1), (2, 3, 3, 1), (2, 4, 1, 1)], 4),
        "quadric8" => (gens(4, 4), vec![(1, 3, 1, 1), (1, 4, 2, 1), (2, 3, 3, 1), (2, 4, 4, 1)], 4),
        "elliptic9" => {
            if field.k() != 1 {
                return Err(Error::BadParameter("elliptic9 is defined over prime fields only".into()));
            }
            let alpha = alpha.ok_or_else(|| Error::BadParameter("elliptic9 requires alpha".into()))?;
            if alpha.rem_euclid(field.p() as i64) == 0 {
                return Err(Error::BadParameter("alpha must be nonzero in F_p".into()));
            }
            let rels = vec![
                (1, 4, 1, 1),
                (1, 5, 2, 1),
                (1, 6, 3, alpha),
                (2, 4, 3, 1),
                (2, 5, 1, 1),
                (2, 6, 2, 1),
                (3, 4, 3, 1),
                (3, 6, 1, 1),
            ];
            (gens(6, 3), rels, 6)
        }
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    let n = names.len();
    let rels = rels
        .into_iter()
        .map(|(i, j, y, c)| {
            let mut rhs = vec![FieldElement::ZERO; n];
            rhs[xs + y - 1] = field.from_prime(c);
            (i - 1, j - 1, rhs)
        })
        .collect();
    FullLieAlgebra::new(field.clone(), names, rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f(p: u64, k: u32) -> FieldConfig {
        make_field(p, k, None).unwrap()
    }

    #[test]
    fn heisenberg_validates_and_reduces() {
        let fld = f(3, 1);
        let h = builtin("heisenberg", &fld, None).unwrap();
        let rep = h.validate().unwrap();
        assert_eq!(rep.class, 2);
        assert_eq!(rep.center.rank(), 1);
        assert_eq!(rep.derived.rank(), 1);
        let pres = h.reduce().unwrap();
        assert_eq!((pres.n(), pres.a(), pres.b()), (3, 2, 1));
        assert_eq!(pres.lambda(0, 1), &[fld.one()]);
        assert_eq!(pres.lambda(1, 0), &[fld.from_prime(-1)]);
    }

    #[test]
    fn quadric7_structure() {
        let fld = f(3, 1);
        let alg = builtin("quadric7", &fld, None).unwrap();
        let rep = alg.validate().unwrap();
        assert_eq!((rep.class, rep.derived.rank(), rep.center.rank()), (2, 3, 3));
        let pres = alg.reduce().unwrap();
        assert_eq!((pres.n(), pres.a(), pres.b()), (7, 4, 3));
        let y = |m: usize| {
            let mut v = vec![fld.zero(); 3];
            v[m - 1] = fld.one();
            v
        };
        assert_eq!(pres.lambda(0, 2), y(1).as_slice());
        assert_eq!(pres.lambda(0, 3), y(2).as_slice());
        assert_eq!(pres.lambda(1, 2), y(3).as_slice());
        assert_eq!(pres.lambda(1, 3), y(1).as_slice());
        assert!(pres.lambda(0, 1).iter().all(|x| x.is_zero()));
        assert!(pres.lambda(2, 3).iter().all(|x| x.is_zero()));
        assert_eq!(pres.e_names(), &["x1", "x2", "x3", "x4"]);
    }

    #[test]
    fn quadric8_and_elliptic9_dimensions() {
        let q8 = builtin("quadric8", &f(3, 1), None).unwrap().reduce().unwrap();
        assert_eq!((q8.n(), q8.a(), q8.b(), q8.class()), (8, 4, 4, 2));
        let fld = f(5, 1);
        let e9 = builtin("elliptic9", &fld, Some(2)).unwrap().reduce().unwrap();
        assert_eq!((e9.n(), e9.a(), e9.b(), e9.class()), (9, 6, 3, 2));
        // [x1, x6] = alpha y3
        assert_eq!(e9.lambda(0, 5), &[fld.zero(), fld.zero(), fld.from_prime(2)]);
    }

    #[test]
    fn builtins_satisfy_jacobi() {
        for &(p, k) in &[(3u64, 1u32), (5, 1), (3, 2)] {
            let fld = f(p, k);
            for (name, _) in BUILTINS {
                if *name == "elliptic9" && k != 1 {
                    continue;
                }
                let alg = builtin(name, &fld, Some(1)).unwrap();
                assert_eq!(alg.jacobi_violation(), None, "{name}");
            }
        }
    }

    #[test]
    fn builtin_errors() {
        let fld = f(5, 1);
        assert_eq!(builtin("nope", &fld, None).unwrap_err(), Error::UnknownBuiltin("nope".into()));
        assert!(matches!(builtin("elliptic9", &fld, Some(0)), Err(Error::BadParameter(_))));
        assert!(matches!(builtin("elliptic9", &fld, Some(5)), Err(Error::BadParameter(_))));
        assert!(matches!(builtin("elliptic9", &f(5, 2), Some(1)), Err(Error::BadParameter(_))));
    }

    #[test]
    fn not_nilpotent_detected() {
        let fld = f(3, 1);
        let alg =
            FullLieAlgebra::new(fld.clone(), vec!["x1".into(), "x2".into()], vec![(0, 1, vec![fld.one(), fld.zero()])])
                .unwrap();
        assert_eq!(alg.validate().unwrap_err(), Error::NotNilpotent(1));
    }

    #[test]
    fn jacobi_violation_detected() {
        let fld = f(5, 1);
        let e = |i: usize| {
            let mut v = vec![fld.zero(); 3];
            v[i] = fld.one();
            v
        };
        // [x1,[x2,x3]] + [x2,[x3,x1]] + [x3,[x1,x2]] = [x1,x2] = x3
        let bad = FullLieAlgebra::new(
            fld.clone(),
            (1..=3).map(|i| format!("x{i}")).collect(),
            vec![(0, 1, e(2)), (1, 2, e(1))],
        )
        .unwrap();
        assert_eq!(bad.validate().unwrap_err(), Error::JacobiViolation(1, 2, 3));
    }

    #[test]
    fn class_too_large() {
        // filiform of class 3 over F_3: class must stay below p
        let fld = f(3, 1);
        let e = |i: usize| {
            let mut v = vec![fld.zero(); 4];
            v[i] = fld.one();
            v
        };
        let alg = FullLieAlgebra::new(
            fld.clone(),
            (1..=4).map(|i| format!("x{i}")).collect(),
            vec![(0, 1, e(2)), (0, 2, e(3))],
        )
        .unwrap();
        assert_eq!(alg.validate().unwrap_err(), Error::ClassTooLarge { class: 3, p: 3 });
        let alg5 = alg.base_extend(&fld).unwrap();
        assert_eq!(alg5.lower_central_series().unwrap().len(), 3);
    }

    #[test]
    fn abelian_is_rejected_by_reduce() {
        let fld = f(3, 1);
        let alg = FullLieAlgebra::new(fld, vec!["a".into(), "b".into()], vec![]).unwrap();
        assert_eq!(alg.validate().unwrap().class, 1);
        assert_eq!(alg.reduce().unwrap_err(), Error::Abelian);
    }

    #[test]
    fn malformed_tables() {
        let fld = f(3, 1);
        let names = vec!["a".to_string(), "b".to_string()];
        let z = vec![fld.zero(); 2];
        assert!(matches!(
            FullLieAlgebra::new(fld.clone(), names.clone(), vec![(0, 0, z.clone())]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            FullLieAlgebra::new(fld.clone(), names, vec![(0, 1, z.clone()), (1, 0, z)]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn reduce_is_stable_on_implied_algebra() {
        let fld = f(3, 1);
        for name in ["heisenberg", "quadric7", "quadric8"] {
            let pres = builtin(name, &fld, None).unwrap().reduce().unwrap();
            let again = pres.implied_algebra().unwrap().reduce().unwrap();
            assert_eq!((again.a(), again.b(), again.class()), (pres.a(), pres.b(), pres.class()), "{name}");
            for i in 0..pres.a() {
                for j in 0..pres.a() {
                    assert_eq!(again.lambda(i, j), pres.lambda(i, j));
                }
            }
        }
    }

    #[test]
    fn direct_sum_concatenates_coordinates() {
        let fld = f(3, 1);
        let h = builtin("heisenberg", &fld, None).unwrap();
        let hh = h.direct_sum(&h).unwrap();
        assert_eq!(hh.names(), &["x1", "x2", "y1", "x1'", "x2'", "y1'"]);
        let pres = hh.reduce().unwrap();
        assert_eq!((pres.n(), pres.a(), pres.b()), (6, 4, 2));
        assert_eq!(pres.f_pivots(), &[2, 5]);
        assert_eq!(pres.e_names(), &["x1", "x2", "x1'", "x2'"]);
    }

    #[test]
    fn base_extension_to_f9() {
        let h3 = builtin("heisenberg", &f(3, 1), None).unwrap();
        let f9 = f(3, 2);
        let h9 = h3.base_extend(&f9).unwrap();
        assert_eq!(h9, builtin("heisenberg", &f9, None).unwrap());
        assert!(h9.base_extend(&f(5, 1)).is_err());
    }
}
