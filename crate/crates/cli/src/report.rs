//! Report types shared by the text and JSON renderers. Field order in the
//! structs is the field order of the JSON output.

use efunc_core::frobenius::LogSeries;
use efunc_core::geometry::Divisor;
use efunc_core::numeric::{BigComplex, BigFloat};
use efunc_core::rational::fmt_q;
use efunc_core::Q;
use serde::Serialize;

pub fn rat(x: &Q) -> String {
    fmt_q(x)
}

pub fn rats(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_q).collect()
}

pub fn real(x: &BigFloat) -> String {
    x.to_sci(x.decimal_digits())
}

#[derive(Serialize)]
pub struct Complex {
    pub re: String,
    pub im: String,
    pub prec_bits: u32,
}

impl Complex {
    pub fn new(z: &BigComplex) -> Self {
        let digits = z.re.decimal_digits();
        let (re, im) = z.to_sci(digits);
        Complex { re, im, prec_bits: z.prec() }
    }
}

impl std::fmt::Display for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.im.strip_prefix('-') {
            Some(abs) => write!(f, "{} - {abs}i", self.re),
            None => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}

#[derive(Serialize)]
pub struct Term {
    pub a: String,
    pub b: u32,
    pub coeffs: Vec<String>,
}

pub fn terms(s: &LogSeries) -> Vec<Term> {
    s.terms()
        .map(|t| Term { a: rat(&t.start), b: t.b, coeffs: rats(&t.coeffs) })
        .collect()
}

#[derive(Serialize)]
pub struct DivisorPoint {
    pub point: Complex,
    pub exact: Option<String>,
    pub multiplicity: i64,
}

pub fn divisor(d: &Divisor) -> Vec<DivisorPoint> {
    d.entries()
        .iter()
        .map(|e| DivisorPoint {
            point: Complex::new(&e.point),
            exact: e.exact.as_ref().map(|x| x.describe()),
            multiplicity: e.multiplicity,
        })
        .collect()
}

pub fn divisor_text(d: &Divisor) -> String {
    let parts: Vec<String> = d
        .entries()
        .iter()
        .map(|e| {
            let p = match &e.exact {
                Some(x) => x.describe(),
                None => Complex::new(&e.point).to_string(),
            };
            if e.multiplicity == 1 {
                format!("[{p}]")
            } else {
                format!("{}[{p}]", e.multiplicity)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize)]
pub struct OperatorReport {
    pub input: String,
    pub result: String,
}

#[derive(Serialize)]
pub struct ThetaSlice {
    pub z_power: i64,
    pub polynomial: String,
}

#[derive(Serialize)]
pub struct ThetaReport {
    pub input: String,
    pub theta_form: String,
    pub slices: Vec<ThetaSlice>,
}

#[derive(Serialize)]
pub struct IndicialReport {
    pub input: String,
    pub z_power: i64,
    pub polynomial: String,
    pub rational_roots: Option<Vec<(String, usize)>>,
}

#[derive(Serialize)]
pub struct HypBuildReport {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub hyp: String,
    pub m: usize,
    pub e_hyp: Option<String>,
    pub singular_locus: Vec<String>,
}

#[derive(Serialize)]
pub struct HypAdjointReport {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub hyp: String,
}

#[derive(Serialize)]
pub struct KatzReport {
    pub holds: bool,
    pub sign: i32,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Serialize)]
pub struct FrobeniusReport {
    pub order: usize,
    pub basis: Vec<Vec<Term>>,
    pub leading_pairs_distinct: bool,
    pub rank: usize,
}

#[derive(Serialize)]
pub struct DivisorReport {
    pub degree: i64,
    pub entries: Vec<DivisorPoint>,
}

#[derive(Serialize)]
pub struct LaplaceReport {
    pub input: String,
    pub depth: u32,
    pub result: String,
}

#[derive(Serialize)]
pub struct RuleCheckReport {
    pub input: String,
    pub rule1_holds: bool,
    pub rule1_defect: String,
    pub rule1_degree_bound: i64,
    pub rule2_holds: bool,
    pub rule2_residual: String,
}

#[derive(Serialize)]
pub struct CriticalReport {
    pub input: String,
    pub params: Vec<String>,
    pub critical_cubic: Vec<String>,
    pub cubic: String,
    pub critical_values: Vec<Complex>,
    pub max_residual: String,
}

#[derive(Serialize)]
pub struct CertificateReport {
    pub input: String,
    pub critical_cubic: Vec<String>,
    pub distinct: bool,
    pub collinear: bool,
    pub equilateral: bool,
    pub verdict: String,
    pub reason: Option<String>,
    pub precision_bits: u32,
    pub tolerance: String,
    pub collinear_grade: String,
    pub equilateral_grade: String,
    pub critical_values: Vec<Complex>,
}

#[derive(Serialize)]
pub struct DetSample {
    pub z: String,
    pub det: Complex,
    pub normalized: Complex,
    pub normalized_power: Complex,
}

#[derive(Serialize)]
pub struct DetReport {
    pub input: String,
    pub alpha: String,
    pub samples: Vec<DetSample>,
    pub max_rel_deviation: String,
    pub max_rel_deviation_power: String,
    pub tolerance: String,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct SeriesReport {
    pub r: u32,
    pub coeffs: Vec<String>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub input: String,
    pub z: String,
    pub terms: usize,
    pub quadrature: Complex,
    pub quadrature_error: String,
    pub series: Complex,
    pub difference: String,
    pub tail_bound: String,
    pub target: String,
    pub insufficient_terms: bool,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct AuditReport {
    pub input: String,
    pub r: u32,
    pub terms: usize,
    pub inferred_c: f64,
    pub growth: f64,
    pub denominators: Vec<String>,
}
