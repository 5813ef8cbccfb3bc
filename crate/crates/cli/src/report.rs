//! The report document shared by the table and json outputs.
//!
//! Every exact number is a string: integers in decimal, rationals as
//! `num/den` (denominator always present). The table rendering adds
//! six-significant-digit decimals next to the exact values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use commfib_core::{
    ComparisonReport, FibreReport, FibreRow, FieldConfig, FieldElement, FullLieAlgebra, LiePresentation,
};

use crate::format::write_algebra_file;

pub const GENERATOR: &str = concat!("commfib ", env!("CARGO_PKG_VERSION"));

pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let d: BigInt = d.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(n.parse().ok()?, d))
}

/// Six significant digits.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        return format!("{x:.5e}");
    }
    let places = (5 - exp).max(0) as usize;
    format!("{x:.places$}")
}

fn decimal_of(s: &str) -> String {
    parse_rational(s).and_then(|r| r.to_f64()).map_or_else(|| "?".into(), decimal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldEcho {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// Constant-first coefficients of the defining polynomial (`[0, 1]` for `F_p`).
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub field: FieldEcho,
    /// Canonical algebra file text.
    pub algebra: String,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub class: usize,
    /// Basis of the derived subalgebra, one coordinate vector per `f_m`.
    pub derived_basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KvClassEcho {
    /// 0 is the identity; later classes follow first occurrence in enumeration order.
    pub index: usize,
    /// `f`-coordinates of the first member.
    pub representative: Vec<String>,
    pub k: Vec<u64>,
    pub v: Vec<u64>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreRowEcho {
    pub class: usize,
    pub zeta_strata: Vec<String>,
    pub zeta: String,
    pub count: String,
    pub probability: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreBlock {
    pub t: u32,
    /// Exponent at which the zeta function is evaluated, `2t - 1`.
    pub s: u32,
    pub rows: Vec<FibreRowEcho>,
    pub total_count: String,
    pub bound_squared: String,
    pub l1_distance: String,
    pub bound_holds: bool,
    pub second_moment: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchEcho {
    pub t: u32,
    pub g: Vec<String>,
    pub theorem: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBlock {
    pub t_max: u32,
    pub checked: u64,
    pub class_number_oracle: String,
    pub mismatches: Vec<MismatchEcho>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub generator: String,
    pub input: InputEcho,
    pub group_order: String,
    pub abelianization_order: String,
    pub derived_order: String,
    /// `R[i]`: number of `y` with `rank B(y) = 2i`.
    pub rank_profile: Vec<u64>,
    /// `D[i]`: number of irreducible characters of degree `q^i`.
    pub degree_counts: Vec<String>,
    pub class_number: String,
    pub kv_classes: Vec<KvClassEcho>,
    pub fibres: Vec<FibreBlock>,
    pub oracle: Option<OracleBlock>,
}

fn elems(f: &FieldConfig, v: &[FieldElement]) -> Vec<String> {
    v.iter().map(|&x| f.format(x)).collect()
}

fn row(class: usize, r: &FibreRow) -> FibreRowEcho {
    FibreRowEcho {
        class,
        zeta_strata: r.zeta.strata.iter().map(rational).collect(),
        zeta: rational(&r.zeta.total),
        count: r.count.to_string(),
        probability: rational(&r.probability),
    }
}

impl ReportDocument {
    pub fn build(
        alg: &FullLieAlgebra,
        pres: &LiePresentation,
        rep: &FibreReport,
        oracle: Option<&ComparisonReport>,
    ) -> Self {
        let f = pres.field();
        let cls = &rep.classification;
        let kv_classes = std::iter::once(KvClassEcho {
            index: 0,
            representative: elems(f, &vec![FieldElement::ZERO; pres.b()]),
            k: cls.profile.counts.clone(),
            v: vec![0; cls.profile.counts.len()],
            multiplicity: 1,
        })
        .chain(cls.classes.iter().enumerate().map(|(c, kc)| KvClassEcho {
            index: c + 1,
            representative: elems(f, &kc.representative),
            k: kc.k.clone(),
            v: kc.v.clone(),
            multiplicity: kc.multiplicity,
        }))
        .collect();
        let fibres = rep
            .fibres
            .iter()
            .map(|ft| FibreBlock {
                t: ft.t,
                s: ft.s,
                rows: std::iter::once(row(0, &ft.identity))
                    .chain(ft.classes.iter().enumerate().map(|(c, r)| row(c + 1, r)))
                    .collect(),
                total_count: ft.total_count(cls).to_string(),
                bound_squared: rational(&ft.bound.squared),
                l1_distance: rational(&ft.l1_distance),
                bound_holds: ft.bound_holds(),
                second_moment: rational(&ft.second_moment),
            })
            .collect();
        let oracle = oracle.map(|c| OracleBlock {
            t_max: c.t_max,
            checked: c.checked,
            class_number_oracle: c.class_number_oracle.to_string(),
            mismatches: c
                .mismatches
                .iter()
                .map(|m| MismatchEcho {
                    t: m.t,
                    g: elems(f, &m.g),
                    theorem: m.theorem.clone(),
                    oracle: m.oracle.clone(),
                })
                .collect(),
            agree: c.is_clean(),
        });
        ReportDocument {
            generator: GENERATOR.to_string(),
            input: InputEcho {
                field: FieldEcho { p: f.p(), k: f.k(), q: f.q(), modulus: f.modulus().to_vec() },
                algebra: write_algebra_file(alg),
                n: pres.n(),
                a: pres.a(),
                b: pres.b(),
                class: pres.class(),
                derived_basis: pres.f_basis().iter().map(|v| elems(f, v)).collect(),
            },
            group_order: rep.group_order.to_string(),
            abelianization_order: rep.abelianization_order.to_string(),
            derived_order: rep.derived_order.to_string(),
            rank_profile: cls.profile.counts.clone(),
            degree_counts: rep.degree_counts.iter().map(BigInt::to_string).collect(),
            class_number: rep.class_number.to_string(),
            kv_classes,
            fibres,
            oracle,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(self.generator.clone());
        let inp = &self.input;
        line(format!(
            "field       F_{} (p={}, k={}, modulus {:?})",
            inp.field.q, inp.field.p, inp.field.k, inp.field.modulus
        ));
        line(format!("dimensions  n={} a={} b={} class={}", inp.n, inp.a, inp.b, inp.class));
        line("algebra".into());
        for l in inp.algebra.lines() {
            line(format!("  {l}"));
        }
        line(format!("derived basis {}", bracketed(&inp.derived_basis)));
        line(format!(
            "|G| = {}  |G/G'| = {}  |G'| = {}",
            self.group_order, self.abelianization_order, self.derived_order
        ));
        line(format!("rank profile R = {:?}", self.rank_profile));
        line(format!("degree counts D = [{}]", self.degree_counts.join(", ")));
        line(format!("k(G) = {}", self.class_number));
        line(format!("KV classes: {}", self.kv_classes.len()));
        for c in &self.kv_classes {
            line(format!(
                "  [{}] g=({}) mult={} K={:?} V={:?}",
                c.index,
                c.representative.join(","),
                c.multiplicity,
                c.k,
                c.v
            ));
        }
        for fb in &self.fibres {
            line(format!("t = {} (zeta at s = {})", fb.t, fb.s));
            for r in &fb.rows {
                line(format!(
                    "  [{}] zeta={} ({})  N_t={}  P_t={} ({})  strata=[{}]",
                    r.class,
                    r.zeta,
                    decimal_of(&r.zeta),
                    r.count,
                    r.probability,
                    decimal_of(&r.probability),
                    r.zeta_strata.join(", ")
                ));
            }
            line(format!("  sum N_t = {}", fb.total_count));
            line(format!("  second moment = {} ({})", fb.second_moment, decimal_of(&fb.second_moment)));
            line(bound_line(&fb.bound_squared, &fb.l1_distance, fb.bound_holds));
        }
        if let Some(o) = &self.oracle {
            line(format!("oracle t <= {}: checked {} values, k(G) = {}", o.t_max, o.checked, o.class_number_oracle));
            for m in &o.mismatches {
                line(format!("  MISMATCH t={} g=({}) theorem={} oracle={}", m.t, m.g.join(","), m.theorem, m.oracle));
            }
            line(format!("  {}", if o.agree { "agree" } else { "DISAGREE" }));
        }
        out
    }
}

fn bracketed(vs: &[Vec<String>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("({})", v.join(","))).collect();
    parts.join(" ")
}

pub fn bound_line(bound_squared: &str, l1: &str, holds: bool) -> String {
    let bound =
        parse_rational(bound_squared).and_then(|r| r.to_f64()).map_or_else(|| "?".into(), |x| decimal(x.sqrt()));
    format!(
        "  bound^2 = {} ({})  bound = {}  L1 = {} ({})  {}",
        bound_squared,
        decimal_of(bound_squared),
        bound,
        l1,
        decimal_of(l1),
        if holds { "holds" } else { "FAILS" }
    )
}
