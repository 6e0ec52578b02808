//! `efunc`: command-line front end.
//!
//! Exit codes: 0 on success (or a certified / holding check), 2 when a
//! certificate is refused or a check does not hold, 1 on errors.

mod report;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use efunc_core::efn::{denominator_audit, er_coefficients};
use efunc_core::frobenius::{frobenius_basis, independence, DEFAULT_ORDER};
use efunc_core::geometry::{certify, critical_divisor, Grade, Verdict};
use efunc_core::hypergeometric::{
    e_hyp, e_hyp_divisor, hyp, hyp_adjoint_params, katz_ft_identity_check, singular_locus, HypParams,
};
use efunc_core::laplace::{laplace_r, laplace_rule_check, minimal_depth};
use efunc_core::numeric::periods::{det_exponential_check, verify_decomposition};
use efunc_core::numeric::{BigFloat, Ctx};
use efunc_core::parse::{parse_operator, parse_polynomial, parse_r_element, parse_rational};
use efunc_core::rational::{q, qpow, qr};
use efunc_core::{Quartic, Q};
use serde::Serialize;

use report::*;

#[derive(Parser)]
#[command(name = "efunc", version, about = "Exact operator algebra, hypergeometric E-operators and quartic exponential integrals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    prec: u32,
    /// Tolerance: a rational such as 1/10^25, or `auto`.
    #[arg(long, global = true, default_value = "auto", allow_hyphen_values = true)]
    tol: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Variable name for polynomial inputs (default `t` for hyp, `x` for quartics).
    #[arg(long, global = true)]
    var: Option<char>,
}

#[derive(Subcommand)]
enum Command {
    /// Operators in z, D and T = z*D.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Hypergeometric operators Q(T) - z P(T).
    #[command(subcommand)]
    Hyp(HypCmd),
    /// Formal Laplace transform of sums of z^a log(z)^b.
    #[command(subcommand)]
    Laplace(LaplaceCmd),
    /// Critical values and certificates for monic quartics.
    #[command(subcommand)]
    Quartic(QuarticCmd),
    /// Series coefficients and period integrals of a quartic.
    #[command(subcommand)]
    Efn(EfnCmd),
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Fourier transform z -> -D, D -> z.
    Ft { op: String },
    /// Formal adjoint.
    Adjoint { op: String },
    /// Product of two operators.
    Mul { a: String, b: String },
    /// Theta form sum z^j T_j(T).
    Theta { op: String },
    /// Indicial polynomial at 0.
    Indicial { op: String },
}

#[derive(Args)]
struct HypArgs {
    #[arg(long = "P")]
    p: String,
    #[arg(long = "Q")]
    q: String,
}

#[derive(Subcommand)]
enum HypCmd {
    /// Hyp(P, Q), its Kummer pullback and singular locus.
    Build(HypArgs),
    /// Parameters of the adjoint operator.
    Adjoint(HypArgs),
    /// Fourier-transform identity for the E-operator.
    KatzCheck(HypArgs),
    /// Truncated solution basis at 0.
    Frobenius {
        #[command(flatten)]
        params: HypArgs,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Divisor of the E-operator.
    Divisor(HypArgs),
}

#[derive(Subcommand)]
enum LaplaceCmd {
    Transform { expr: String },
    /// Checks both transform rules.
    Check { expr: String },
}

#[derive(Subcommand)]
enum QuarticCmd {
    /// Cubic whose roots are the critical values.
    Critical { poly: String },
    /// Certificate: distinct, not collinear, not equilateral.
    Certify { poly: String },
    /// det F(z) e^(-z/2) across sample points.
    Detcheck {
        poly: String,
        #[arg(long = "z-list", value_delimiter = ',', default_value = "1,3/2,2")]
        z_list: Vec<String>,
    },
}

#[derive(Subcommand)]
enum EfnCmd {
    /// Coefficients e_n of E_r.
    Series {
        quartic: String,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// Print a_n = n! e_n instead.
        #[arg(long)]
        factorial_scaled: bool,
    },
    /// Quadrature of P(z) against its series decomposition.
    Verify {
        quartic: String,
        #[arg(long, default_value = "1")]
        z: String,
        #[arg(long, default_value_t = 60)]
        terms: usize,
    },
    /// Denominator and growth profile of the coefficients.
    Audit {
        quartic: String,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
}

/// Outcome of a command: printed output plus exit status.
struct Outcome {
    text: String,
    json: String,
    ok: bool,
}

fn outcome<T: Serialize>(report: &T, text: String, ok: bool) -> Result<Outcome> {
    Ok(Outcome { text, json: serde_json::to_string_pretty(report)?, ok })
}

impl Global {
    fn tolerance(&self) -> Result<Option<Q>> {
        if self.tol == "auto" {
            return Ok(None);
        }
        let t = parse_rational(&self.tol).with_context(|| format!("bad --tol {:?}", self.tol))?;
        if t <= q(0) {
            bail!("--tol must be positive");
        }
        Ok(Some(t))
    }

    fn poly(&self, text: &str, default: char) -> Result<efunc_core::Poly> {
        let var = self.var.unwrap_or(default);
        parse_polynomial(text, var).with_context(|| format!("cannot parse polynomial {text:?} in {var}"))
    }

    fn quartic(&self, text: &str) -> Result<Quartic> {
        Ok(Quartic::from_poly(&self.poly(text, 'x')?)?)
    }

    fn hyp(&self, a: &HypArgs) -> Result<HypParams> {
        Ok(HypParams::new(self.poly(&a.p, 't')?, self.poly(&a.q, 't')?)?)
    }
}

fn op(text: &str) -> Result<efunc_core::WeylOperator> {
    parse_operator(text).with_context(|| format!("cannot parse operator {text:?}"))
}

fn weyl(cmd: &WeylCmd) -> Result<Outcome> {
    let simple = |input: &str, result: String| {
        let r = OperatorReport { input: input.to_string(), result };
        let text = r.result.clone();
        outcome(&r, text, true)
    };
    match cmd {
        WeylCmd::Ft { op: s } => simple(s, op(s)?.fourier_transform()?.to_string()),
        WeylCmd::Adjoint { op: s } => simple(s, op(s)?.adjoint().to_string()),
        WeylCmd::Mul { a, b } => simple(&format!("({a})*({b})"), (op(a)? * op(b)?).to_string()),
        WeylCmd::Theta { op: s } => {
            let form = op(s)?.to_theta_form();
            let r = ThetaReport {
                input: s.clone(),
                theta_form: form.to_string(),
                slices: form
                    .slices()
                    .iter()
                    .map(|(j, p)| ThetaSlice { z_power: *j, polynomial: p.to_string_var("T") })
                    .collect(),
            };
            let text = r.theta_form.clone();
            outcome(&r, text, true)
        }
        WeylCmd::Indicial { op: s } => {
            let (shift, p) = op(s)?.indicial_polynomial_at_zero()?;
            let roots = p
                .rational_roots()
                .ok()
                .map(|rs| rs.iter().map(|(r, m)| (rat(r), *m)).collect::<Vec<_>>());
            let r = IndicialReport { input: s.clone(), z_power: shift, polynomial: p.to_string_var("T"), rational_roots: roots };
            let mut text = format!("z^{shift} slice: {}", r.polynomial);
            if let Some(rs) = &r.rational_roots {
                let list: Vec<String> = rs.iter().map(|(x, m)| if *m == 1 { x.clone() } else { format!("{x} (x{m})") }).collect();
                text += &format!("\nroots: {}", list.join(", "));
            }
            outcome(&r, text, true)
        }
    }
}

fn hyp_cmd(g: &Global, cmd: &HypCmd) -> Result<Outcome> {
    match cmd {
        HypCmd::Build(a) => {
            let params = g.hyp(a)?;
            let e = if params.m() > 0 { Some(e_hyp(&params)?.to_string()) } else { None };
            let r = HypBuildReport {
                p: params.p().to_string_var("t"),
                q: params.q().to_string_var("t"),
                hyp: hyp(&params).to_string(),
                m: params.m(),
                e_hyp: e,
                singular_locus: singular_locus(&params).iter().map(|p| p.to_string()).collect(),
            };
            let mut text = format!("Hyp = {}", r.hyp);
            if let Some(e) = &r.e_hyp {
                text += &format!("\nE-operator (m = {}) = {e}", r.m);
            }
            text += &format!("\nsingular points: {{{}}}", r.singular_locus.join(", "));
            outcome(&r, text, true)
        }
        HypCmd::Adjoint(a) => {
            let adj = hyp_adjoint_params(&g.hyp(a)?);
            let r = HypAdjointReport {
                p: adj.p().to_string_var("t"),
                q: adj.q().to_string_var("t"),
                hyp: hyp(&adj).to_string(),
            };
            let text = format!("P* = {}\nQ* = {}\nHyp* = {}", r.p, r.q, r.hyp);
            outcome(&r, text, true)
        }
        HypCmd::KatzCheck(a) => {
            let k = katz_ft_identity_check(&g.hyp(a)?)?;
            let r = KatzReport { holds: k.holds, sign: k.sign, lhs: k.lhs.to_string(), rhs: k.rhs.to_string() };
            let text = if k.holds {
                format!("holds with sign {:+}\nFT(D^m E) = {}", k.sign, r.lhs)
            } else {
                format!("does not hold\nlhs = {}\nrhs = {}", r.lhs, r.rhs)
            };
            outcome(&r, text, k.holds)
        }
        HypCmd::Frobenius { params, order } => {
            let params = g.hyp(params)?;
            let basis = frobenius_basis(&params, *order)?;
            let ind = independence(&basis);
            let r = FrobeniusReport {
                order: *order,
                basis: basis.iter().map(terms).collect(),
                leading_pairs_distinct: ind.leading_distinct,
                rank: ind.rank,
            };
            let mut text: Vec<String> = basis.iter().enumerate().map(|(i, s)| format!("s{i} = {s}")).collect();
            text.push(format!("rank {} of {}", ind.rank, basis.len()));
            outcome(&r, text.join("\n"), ind.independent())
        }
        HypCmd::Divisor(a) => {
            let d = e_hyp_divisor(&g.hyp(a)?, g.prec)?;
            let r = DivisorReport { degree: d.degree(), entries: divisor(&d) };
            outcome(&r, divisor_text(&d), true)
        }
    }
}

fn laplace_cmd(cmd: &LaplaceCmd) -> Result<Outcome> {
    let parse = |s: &str| parse_r_element(s).with_context(|| format!("cannot parse {s:?}"));
    match cmd {
        LaplaceCmd::Transform { expr } => {
            let h = parse(expr)?;
            let r = LaplaceReport { input: expr.clone(), depth: minimal_depth(&h), result: laplace_r(&h)?.to_string() };
            let text = r.result.clone();
            outcome(&r, text, true)
        }
        LaplaceCmd::Check { expr } => {
            let c = laplace_rule_check(&parse(expr)?)?;
            let r = RuleCheckReport {
                input: expr.clone(),
                rule1_holds: c.rule1_holds,
                rule1_defect: c.rule1_defect.to_string(),
                rule1_degree_bound: c.rule1_degree_bound,
                rule2_holds: c.rule2_holds,
                rule2_residual: c.rule2_residual.to_string(),
            };
            let text = format!(
                "rule 1 (L(z h) + d/dz L(h) polynomial): {} [defect {}]\nrule 2 (L(h') - z L(h) + h(0) = 0): {} [residual {}]",
                if r.rule1_holds { "holds" } else { "FAILS" },
                r.rule1_defect,
                if r.rule2_holds { "holds" } else { "FAILS" },
                r.rule2_residual
            );
            outcome(&r, text, c.rule1_holds && c.rule2_holds)
        }
    }
}

fn cubic_tail(cubic: &efunc_core::Poly) -> Vec<String> {
    (0..3).rev().map(|i| rat(&cubic.coeff(i))).collect()
}

fn quartic_cmd(g: &Global, cmd: &QuarticCmd) -> Result<Outcome> {
    let ctx = Ctx::new(g.prec);
    match cmd {
        QuarticCmd::Critical { poly } => {
            let f = g.quartic(poly)?;
            let data = critical_divisor(&f, &ctx)?;
            let values = data.roots.iter().flat_map(|r| std::iter::repeat_n(&r.value, r.multiplicity));
            let r = CriticalReport {
                input: f.to_string(),
                params: rats(&f.params()),
                critical_cubic: cubic_tail(&data.cubic),
                cubic: data.cubic.to_string_var("y"),
                critical_values: values.map(Complex::new).collect(),
                max_residual: real(&data.max_residual),
            };
            let mut text = vec![format!("critical cubic: {}", r.cubic)];
            text.extend(r.critical_values.iter().map(|v| format!("  {v}")));
            outcome(&r, text.join("\n"), true)
        }
        QuarticCmd::Certify { poly } => {
            let f = g.quartic(poly)?;
            let tol = g.tolerance()?.map(|t| BigFloat::from_q(&t, g.prec));
            let c = certify(&f, g.prec, tol)?;
            let (verdict, reason) = match c.verdict {
                Verdict::Certified => ("certified".to_string(), None),
                Verdict::Refused(why) => ("refused".to_string(), Some(why.to_string())),
            };
            let grade = |x: Grade| if x == Grade::Exact { "exact" } else { "numeric" }.to_string();
            let r = CertificateReport {
                input: f.to_string(),
                critical_cubic: cubic_tail(&c.cubic),
                distinct: c.distinct,
                collinear: c.collinear,
                equilateral: c.equilateral,
                verdict,
                reason,
                precision_bits: c.precision_bits,
                tolerance: c.tolerance.to_sci(6),
                collinear_grade: grade(c.collinear_grade),
                equilateral_grade: grade(c.equilateral_grade),
                critical_values: c.critical_values.iter().map(Complex::new).collect(),
            };
            let text = format!(
                "{}{}\ncritical cubic: {}\ndistinct: {}\ncollinear: {} ({})\nequilateral: {} ({})\nprecision: {} bits, tolerance {}",
                r.verdict,
                r.reason.as_ref().map(|x| format!(" ({x})")).unwrap_or_default(),
                c.cubic.to_string_var("y"),
                r.distinct,
                r.collinear,
                r.collinear_grade,
                r.equilateral,
                r.equilateral_grade,
                r.precision_bits,
                r.tolerance
            );
            outcome(&r, text, c.is_certified())
        }
        QuarticCmd::Detcheck { poly, z_list } => {
            let f = g.quartic(poly)?;
            let zs = z_list
                .iter()
                .map(|s| parse_rational(s).with_context(|| format!("bad z {s:?}")))
                .collect::<Result<Vec<Q>>>()?;
            let tol = g.tolerance()?.unwrap_or_else(|| qpow(&qr(1, 10), 12));
            let d = det_exponential_check(&f, &zs, &ctx)?;
            let holds = d.max_rel_deviation < BigFloat::from_q(&tol, g.prec);
            let r = DetReport {
                input: f.to_string(),
                alpha: rat(&d.alpha),
                samples: d
                    .samples
                    .iter()
                    .map(|s| DetSample {
                        z: rat(&s.z),
                        det: Complex::new(&s.det),
                        normalized: Complex::new(&s.normalized),
                        normalized_power: Complex::new(&s.normalized_power),
                    })
                    .collect(),
                max_rel_deviation: d.max_rel_deviation.to_sci(6),
                max_rel_deviation_power: d.max_rel_deviation_power.to_sci(6),
                tolerance: rat(&tol),
                holds,
            };
            let mut text: Vec<String> = r
                .samples
                .iter()
                .map(|s| format!("z = {}: det = {}, det*e^(-z/2) = {}", s.z, s.det, s.normalized))
                .collect();
            text.push(format!(
                "max relative deviation {} ({}); with z^(3/2): {}",
                r.max_rel_deviation,
                if holds { "constant" } else { "not constant" },
                r.max_rel_deviation_power
            ));
            outcome(&r, text.join("\n"), holds)
        }
    }
}

fn efn_cmd(g: &Global, cmd: &EfnCmd) -> Result<Outcome> {
    match cmd {
        EfnCmd::Series { quartic, r, terms, factorial_scaled } => {
            let e = er_coefficients(&g.quartic(quartic)?, *r, *terms)?;
            let coeffs = if *factorial_scaled { e.factorial_scaled() } else { e.coeffs.clone() };
            let rep = SeriesReport { r: *r, coeffs: rats(&coeffs) };
            let name = if *factorial_scaled { "a" } else { "e" };
            let text = rep.coeffs.iter().enumerate().map(|(n, c)| format!("{name}_{n} = {c}")).collect::<Vec<_>>();
            outcome(&rep, text.join("\n"), true)
        }
        EfnCmd::Verify { quartic, z, terms } => {
            let f = g.quartic(quartic)?;
            let zq = parse_rational(z).with_context(|| format!("bad --z {z:?}"))?;
            let ctx = Ctx::new(g.prec);
            let target = g.tolerance()?.map(|t| BigFloat::from_q(&t, g.prec));
            let d = verify_decomposition(&f, &zq, *terms, &ctx, target)?;
            let agrees = d.difference <= d.target && !d.insufficient_terms;
            let r = VerifyReport {
                input: f.to_string(),
                z: rat(&zq),
                terms: *terms,
                quadrature: Complex::new(&d.quadrature),
                quadrature_error: d.quadrature_error.to_sci(6),
                series: Complex::new(&d.series),
                difference: d.difference.to_sci(6),
                tail_bound: d.tail_bound.to_sci(6),
                target: d.target.to_sci(6),
                insufficient_terms: d.insufficient_terms,
                agrees,
            };
            let text = format!(
                "quadrature: {}\nseries:     {}\n|difference| = {} (target {}, tail bound {}){}",
                r.quadrature,
                r.series,
                r.difference,
                r.target,
                r.tail_bound,
                if d.insufficient_terms { "\ntoo few terms for the target" } else { "" }
            );
            outcome(&r, text, agrees)
        }
        EfnCmd::Audit { quartic, r, terms } => {
            let f = g.quartic(quartic)?;
            let e = er_coefficients(&f, *r, *terms)?;
            let a = denominator_audit(&e.coeffs)?;
            let rep = AuditReport {
                input: f.to_string(),
                r: *r,
                terms: *terms,
                inferred_c: a.inferred_c,
                growth: a.growth,
                denominators: a.d.iter().map(|x| x.to_string()).collect(),
            };
            let text = format!(
                "max d_n^(1/n) = {:.6}\nmax |a_n|^(1/n) = {:.6}\nd_{} = {}",
                a.inferred_c,
                a.growth,
                terms - 1,
                rep.denominators.last().cloned().unwrap_or_default()
            );
            outcome(&rep, text, true)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Weyl(c) => weyl(c),
        Command::Hyp(c) => hyp_cmd(&cli.global, c),
        Command::Laplace(c) => laplace_cmd(c),
        Command::Quartic(c) => quartic_cmd(&cli.global, c),
        Command::Efn(c) => efn_cmd(&cli.global, c),
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1; exit 2 is reserved for refusals and failed checks.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!("{}", out.json);
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
