//! Command-line front end: exact Ehrhart polynomials, volumes, lattice-point
//! counts, generating-function exports, integrals of powers of linear forms,
//! and the self-verification battery.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use serde_json::json;

use birkhoff::combinatorics::Permutation;
use birkhoff::ehrhart::{count_lattice_points, ehrhart_polynomial, volume, GenericVector};
use birkhoff::error::{Error, Result};
use birkhoff::exactmath::{rat_int, rat_to_string, Polynomial, Rational};
use birkhoff::integration::{integrate_power, LinearForm};
use birkhoff::mgf::{birkhoff_terms, face_terms, FaceWeights, TermJson, TermStream, ZeroPattern};
use birkhoff::{oracle, verify};

#[derive(Parser)]
#[command(
    name = "birkhoff-cli",
    version,
    about = "Exact computations on dilated Birkhoff polytopes and their faces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ehrhart polynomial of the polytope or of a zero-pattern face
    Ehrhart {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Normalized volume (dimension! times the leading Ehrhart coefficient)
    Volume {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Number of lattice points of the t-th dilation
    Count {
        #[command(flatten)]
        common: Common,
        /// Dilation factor
        #[arg(long)]
        t: u64,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Export the cone-term stream of the generating function
    Mgf {
        #[command(flatten)]
        common: Common,
    },
    /// Integral of <y, x>^power over the polytope or face
    Integrate {
        #[command(flatten)]
        common: Common,
        /// Exponent p of the linear form
        #[arg(long, default_value_t = 0)]
        power: usize,
        /// Path to a linear-form file: {"n": int, "y": [["p/q", ...], ...]};
        /// "-" reads standard input
        #[arg(long)]
        form: String,
        /// Force the epsilon-perturbation path even for generic forms
        #[arg(long)]
        perturb: bool,
    },
    /// Run the structural and cross-validation check battery
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Matrix size n (the polytope lives in n x n matrices)
    #[arg(long)]
    n: usize,
    /// 1-based root vertex of the arborescences
    #[arg(long, default_value_t = 1)]
    root: usize,
    /// 1-based zero positions "i,j;i,j;..."
    #[arg(long, conflicts_with_all = ["cry", "facet"])]
    zeros: Option<String>,
    /// Shorthand for the Chan-Robbins-Yuen zero pattern
    #[arg(long, conflicts_with = "facet")]
    cry: bool,
    /// Shorthand for a single zero "i,j" (one facet of the polytope)
    #[arg(long)]
    facet: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidInput(_) => 2,
                Error::EmptyFace => 3,
                Error::BudgetExceeded(_) => 4,
                _ => 1,
            })
        }
    }
}

struct Setup {
    n: usize,
    root: usize,
    pattern: ZeroPattern,
    dimension: usize,
    format: Format,
}

impl Setup {
    fn from_common(common: &Common) -> Result<Setup> {
        let n = common.n;
        if n < 2 {
            return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
        }
        if !(1..=n).contains(&common.root) {
            return Err(Error::InvalidInput(format!(
                "root {} out of range 1..={n}",
                common.root
            )));
        }
        if let Some(t) = common.threads {
            if t == 0 {
                return Err(Error::InvalidInput("threads must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        }
        let pattern = match (&common.zeros, common.cry, &common.facet) {
            (Some(text), _, _) => ZeroPattern::parse(n, text)?,
            (None, true, _) => ZeroPattern::cry(n),
            (None, false, Some(text)) => {
                let p = ZeroPattern::parse(n, text)?;
                if p.len() != 1 {
                    return Err(Error::InvalidInput(format!(
                        "--facet wants exactly one position, got {:?}",
                        text
                    )));
                }
                p
            }
            (None, false, None) => ZeroPattern::empty(),
        };
        if !pattern.face_is_nonempty(n) {
            return Err(Error::EmptyFace);
        }
        let dimension = ((n - 1) * (n - 1))
            .checked_sub(pattern.len())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{} zeros exceed the ambient dimension {}; the pattern has \
                     dependent constraints",
                    pattern.len(),
                    (n - 1) * (n - 1)
                ))
            })?;
        Ok(Setup {
            n,
            root: common.root - 1,
            pattern,
            dimension,
            format: common.format,
        })
    }

    fn terms(&self) -> Result<TermStream> {
        if self.pattern.is_empty() {
            birkhoff_terms(self.n, self.root)
        } else {
            face_terms(
                self.n,
                self.root,
                &self.pattern,
                &FaceWeights::default_for(&self.pattern),
            )
        }
    }

    fn emit(
        &self,
        command: &str,
        term_count: Option<u64>,
        result: serde_json::Value,
        text: String,
        latex: Option<String>,
        elapsed_ms: u128,
    ) -> Result<()> {
        match self.format {
            Format::Json => {
                let doc = json!({
                    "schema": 1,
                    "command": command,
                    "n": self.n,
                    "root": self.root + 1,
                    "zero_pattern": self.pattern.positions_one_based(),
                    "dimension": self.dimension,
                    "term_count": term_count,
                    "result": result,
                    "elapsed_ms": elapsed_ms,
                });
                println!("{doc}");
            }
            Format::Text => println!("{text}"),
            Format::Latex => match latex {
                Some(s) => println!("{s}"),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "no latex rendering for `{command}`"
                    )))
                }
            },
        }
        Ok(())
    }
}

/// Progress line on standard error every 10^4 terms.
fn progress_reporter(start: Instant) -> impl Fn(u64) + Sync {
    move |seen| {
        let ms = start.elapsed().as_millis().max(1);
        let rate = seen as u128 * 1000 / ms;
        eprintln!("processed {seen} terms ({rate} terms/s)");
    }
}

fn rational_latex(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        format!("{}", r.numer())
    } else if r.numer().sign() == num_bigint::Sign::Minus {
        format!("-\\frac{{{}}}{{{}}}", -r.numer(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn poly_latex(p: &Polynomial) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() && !(k == 0 && p.is_zero()) {
            continue;
        }
        let monomial = match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{{{k}}}"),
        };
        let abs = c.abs();
        let coeff = if abs.is_one() && k > 0 {
            String::new()
        } else {
            rational_latex(&abs)
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&coeff);
        if !coeff.is_empty() && !monomial.is_empty() {
            out.push(' ');
        }
        out.push_str(&monomial);
    }
    out
}

fn coeff_strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(rat_to_string).collect()
}

fn vertex_monomial_latex(sigma: &Permutation) -> String {
    (0..sigma.n())
        .map(|i| format!("z_{{{},{}}}^{{t}}", i + 1, sigma.apply(i) + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ray_monomial_latex(ray: &birkhoff::combinatorics::RayMatrix) -> String {
    let n = ray.n();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            match ray.entry(i, j) {
                1 => parts.push(format!("z_{{{},{}}}", i + 1, j + 1)),
                -1 => parts.push(format!("z_{{{},{}}}^{{-1}}", i + 1, j + 1)),
                _ => {}
            }
        }
    }
    parts.join(" ")
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ehrhart { common, method } => {
            let setup = Setup::from_common(&common)?;
            let start = Instant::now();
            let progress = progress_reporter(start);
            let (poly, lead, normalized, term_count) = match method {
                Method::Formula => {
                    let c = GenericVector::new(setup.n);
                    let r = ehrhart_polynomial(
                        setup.terms()?,
                        setup.dimension,
                        &c,
                        Some(&progress),
                    )?;
                    (
                        r.polynomial,
                        r.lead_coefficient,
                        r.normalized_volume,
                        Some(r.term_count),
                    )
                }
                Method::Oracle => {
                    let p = oracle::oracle_ehrhart(setup.n, &setup.pattern, setup.dimension)?;
                    let lead = p.leading_coefficient().clone();
                    let mut norm = lead.clone();
                    for k in 2..=setup.dimension {
                        norm *= rat_int(k as i64);
                    }
                    (p, lead, norm, None)
                }
            };
            let elapsed = start.elapsed().as_millis();
            let text = format!(
                "e(t) = {}\nlead coefficient: {}\nnormalized volume: {}\ndimension: {}",
                poly.to_text(),
                rat_to_string(&lead),
                rat_to_string(&normalized),
                setup.dimension
            );
            let latex = Some(poly_latex(&poly));
            setup.emit(
                "ehrhart",
                term_count,
                json!({
                    "coefficients": coeff_strings(&poly),
                    "lead_coefficient": rat_to_string(&lead),
                    "normalized_volume": rat_to_string(&normalized),
                }),
                text,
                latex,
                elapsed,
            )
        }
        Command::Volume { common, method } => {
            let setup = Setup::from_common(&common)?;
            let start = Instant::now();
            let progress = progress_reporter(start);
            let (normalized, term_count) = match method {
                Method::Formula => {
                    let c = GenericVector::new(setup.n);
                    let stream = setup.terms()?;
                    let count = stream.candidate_count();
                    let v = volume(stream, setup.dimension, &c, Some(&progress))?;
                    (v, Some(count))
                }
                Method::Oracle => {
                    let p = oracle::oracle_ehrhart(setup.n, &setup.pattern, setup.dimension)?;
                    let mut norm = p.leading_coefficient().clone();
                    for k in 2..=setup.dimension {
                        norm *= rat_int(k as i64);
                    }
                    (norm, None)
                }
            };
            let mut lead = normalized.clone();
            for k in 2..=setup.dimension {
                lead /= rat_int(k as i64);
            }
            let elapsed = start.elapsed().as_millis();
            let text = format!(
                "normalized volume: {}\nlead coefficient: {}\ndimension: {}",
                rat_to_string(&normalized),
                rat_to_string(&lead),
                setup.dimension
            );
            let latex = Some(rational_latex(&normalized));
            setup.emit(
                "volume",
                term_count,
                json!({
                    "normalized_volume": rat_to_string(&normalized),
                    "lead_coefficient": rat_to_string(&lead),
                }),
                text,
                latex,
                elapsed,
            )
        }
        Command::Count { common, t, method } => {
            let setup = Setup::from_common(&common)?;
            let start = Instant::now();
            let progress = progress_reporter(start);
            let (count, term_count) = match method {
                Method::Formula => {
                    let c = GenericVector::new(setup.n);
                    let stream = setup.terms()?;
                    let candidates = stream.candidate_count();
                    let v = count_lattice_points(stream, t, &c, Some(&progress))?;
                    (v.to_string(), Some(candidates))
                }
                Method::Oracle => (
                    oracle::count_semimagic(setup.n, t, &setup.pattern)?.to_string(),
                    None,
                ),
            };
            let elapsed = start.elapsed().as_millis();
            setup.emit(
                "count",
                term_count,
                json!({ "t": t, "count": count }),
                count.clone(),
                Some(count),
                elapsed,
            )
        }
        Command::Mgf { common } => {
            let setup = Setup::from_common(&common)?;
            if setup.format == Format::Latex && setup.n > 3 {
                return Err(Error::InvalidInput(
                    "latex rendering of the generating function is limited to n <= 3".into(),
                ));
            }
            let start = Instant::now();
            let terms: Vec<_> = setup.terms()?.collect();
            let elapsed = start.elapsed().as_millis();
            let json_terms: Vec<TermJson> = terms.iter().map(TermJson::from).collect();
            let text = serde_json::to_string(&json_terms)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            let latex = terms
                .iter()
                .map(|term| {
                    let numerator = vertex_monomial_latex(&term.vertex);
                    let denominator: String = term
                        .rays
                        .iter()
                        .map(|r| format!("\\left(1 - {}\\right)", ray_monomial_latex(r)))
                        .collect();
                    let sign = if term.sign < 0 { "-" } else { "" };
                    if denominator.is_empty() {
                        format!("{sign}{numerator}")
                    } else {
                        format!("{sign}\\frac{{{numerator}}}{{{denominator}}}")
                    }
                })
                .collect::<Vec<_>>()
                .join("\n+ ");
            let count = terms.len() as u64;
            setup.emit(
                "mgf",
                Some(count),
                serde_json::to_value(&json_terms)
                    .map_err(|e| Error::InvalidInput(e.to_string()))?,
                text,
                Some(latex),
                elapsed,
            )
        }
        Command::Integrate {
            common,
            power,
            form,
            perturb,
        } => {
            let setup = Setup::from_common(&common)?;
            let text = if form == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
                buf
            } else {
                std::fs::read_to_string(&form)
                    .map_err(|e| Error::InvalidInput(format!("reading {form}: {e}")))?
            };
            let y = LinearForm::from_json_str(&text)?;
            if y.n() != setup.n {
                return Err(Error::InvalidInput(format!(
                    "form is {0}x{0} but --n is {1}",
                    y.n(),
                    setup.n
                )));
            }
            let start = Instant::now();
            let progress = progress_reporter(start);
            let c = GenericVector::new(setup.n);
            let stream = setup.terms()?;
            let term_count = stream.candidate_count();
            let value = integrate_power(
                stream,
                setup.dimension,
                &y,
                power,
                &c,
                perturb,
                Some(&progress),
            )?;
            let elapsed = start.elapsed().as_millis();
            setup.emit(
                "integrate",
                Some(term_count),
                json!({ "power": power, "integral": rat_to_string(&value) }),
                format!("integral: {}", rat_to_string(&value)),
                Some(rational_latex(&value)),
                elapsed,
            )
        }
        Command::Verify { common } => {
            let setup = Setup::from_common(&common)?;
            let n = setup.n;
            let start = Instant::now();
            let corner = ZeroPattern::new(n.min(4), [(0, 0)])?;
            let mut checks = vec![
                verify::check_arborescence_counts(n.clamp(3, 6))?,
                verify::check_ray_structure(n.min(5))?,
                verify::check_duality(n.min(5))?,
                verify::check_unimodularity(n.min(4))?,
                verify::check_root_independence(n.min(4))?,
                verify::check_brion_identity(2, 1, 5, 7)?,
                verify::check_brion_identity(2, 2, 5, 7)?,
            ];
            if n >= 3 {
                checks.push(verify::check_brion_identity(3, 1, 5, 7)?);
                checks.push(verify::check_brion_identity(3, 2, 5, 7)?);
            }
            checks.push(verify::check_oracle_agreement(
                n.min(4),
                if n >= 4 { &[0, 1, 2, 3] } else { &[0, 1, 2, 3, 4] },
            )?);
            checks.push(verify::check_weight_independence(n.min(4), &corner)?);
            let elapsed = start.elapsed().as_millis();
            let all_passed = checks.iter().all(|c| c.passed);
            let text = checks
                .iter()
                .map(|c| {
                    format!(
                        "{} {} - {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let result = serde_json::to_value(
                checks
                    .iter()
                    .map(|c| {
                        json!({ "name": c.name, "passed": c.passed, "detail": c.detail })
                    })
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
            setup.emit("verify", None, result, text, None, elapsed)?;
            if all_passed {
                Ok(())
            } else {
                Err(Error::InternalInconsistency(
                    "verification battery reported failures".into(),
                ))
            }
        }
    }
}
