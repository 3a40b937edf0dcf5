//! Command-line front end. [`run`] takes the argument vector and output
//! streams so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bigmath::decimal::faithful_digits;
use crate::bigmath::{
    parse_rational, rational_string, to_decimal, to_decimal_upper, ApproxResult, ExactRat, PrecReal,
};
use crate::combinat::{
    bell_sequence, genfunc_bell_coeffs, partial_bell, partial_bell_scaling_check, shared_table,
    BellMethod, PartialBellInput,
};
use crate::error::{Error, Result};
use crate::quadrature::{
    verify_bell_integral, verify_final_identity, verify_hk_integral, verify_k0_specialization,
    QuadReport,
};
use crate::specfun::{bessel_i, kummer_1f1};
use crate::theorem::{
    alternating_genfunc_check, deriv_oracle_poly, faadibruno_poly, judge, theorem_rhs,
    verify_corrupted, verify_theorem, Corruption,
};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "bellcert",
    version,
    about = "Exact Bell and Stirling numbers and certified checks of an explicit Bell-number formula"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    StirlingSum,
    Genfunc,
    Theorem,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bell number B_n.
    Bell {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Stirling number of the second kind S(n, k).
    Stirling2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).
    Bellpoly {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Comma-separated rationals, n-k+1 of them.
        #[arg(long)]
        x: String,
    },
    /// Kummer 1F1(a; b; z) at rational parameters.
    Hyp1f1 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Modified Bessel function I_order(z) for z >= 0.
    Besseli {
        #[arg(long)]
        order: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Coefficients c_k of the n-th derivative polynomial via partial Bell polynomials.
    Faadibruno {
        #[arg(long)]
        n: u32,
    },
    /// Verification runs.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Accuracy {
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    /// The Bell-number formula for n = 1..n_max.
    Theorem {
        #[arg(long)]
        n_max: u32,
        /// Negative control: flip the sign of the k-th summand.
        #[arg(long, value_name = "K")]
        flip_sign: Option<u32>,
        #[command(flatten)]
        acc: Accuracy,
    },
    /// The integral representation of H_k(z); k = 0 also checks the Bessel form.
    Hk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        z: String,
        #[command(flatten)]
        acc: Accuracy,
    },
    /// (-1)^n e B_n as an integral.
    BellIntegral {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        acc: Accuracy,
    },
    /// The integral of I_1(2 sqrt t) t^(k-1/2) e^-t against k! 1F1(k+1; 2; 1).
    FinalIntegral {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        acc: Accuracy,
    },
    /// Generating-function Bell coefficients, plain and alternating.
    Genfunc {
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        #[command(flatten)]
        acc: Accuracy,
    },
    /// Random trials of the partial Bell scaling identity.
    Scaling {
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        #[arg(long, default_value_t = 9)]
        n_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        acc: Accuracy,
    },
}

/// One line of output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub quantity: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub value: String,
    pub error_bound: String,
    pub terms_used: Option<usize>,
    pub pass: Option<bool>,
    /// Extra plain-text fields; not part of the JSON record.
    #[serde(skip)]
    pub detail: Vec<(String, String)>,
}

impl OutputRecord {
    fn exact(quantity: &str, params: &[(&str, String)], value: String) -> Self {
        OutputRecord {
            quantity: quantity.to_string(),
            params: param_map(params),
            value,
            error_bound: "exact".into(),
            terms_used: None,
            pass: None,
            detail: Vec::new(),
        }
    }

    fn approx(quantity: &str, params: &[(&str, String)], r: &ApproxResult, precision: u32) -> Self {
        OutputRecord {
            quantity: quantity.to_string(),
            params: param_map(params),
            value: to_decimal(&r.value, faithful_digits(precision)),
            error_bound: bound_string(&r.error_bound),
            terms_used: Some(r.terms_used),
            pass: None,
            detail: Vec::new(),
        }
    }

    fn render_plain(&self) -> String {
        let is_plain_value =
            self.error_bound == "exact" && self.pass.is_none() && self.detail.is_empty();
        if is_plain_value {
            return self.value.clone();
        }
        let mut parts = vec![self.quantity.clone()];
        for (k, v) in &self.params {
            parts.push(format!(
                "{k}={}",
                v.as_str()
                    .map(str::to_string)
                    .unwrap_or_else(|| v.to_string())
            ));
        }
        parts.push(format!("value={}", self.value));
        parts.push(format!("error_bound={}", self.error_bound));
        if let Some(t) = self.terms_used {
            parts.push(format!("terms_used={t}"));
        }
        for (k, v) in &self.detail {
            parts.push(format!("{k}={v}"));
        }
        if let Some(p) = self.pass {
            parts.push(if p { "PASS" } else { "FAIL" }.to_string());
        }
        parts.join(" ")
    }
}

fn param_map(params: &[(&str, String)]) -> serde_json::Map<String, serde_json::Value> {
    params
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
        .collect()
}

fn bound_string(b: &PrecReal) -> String {
    if b.is_zero() {
        "0".into()
    } else {
        to_decimal_upper(b, 3)
    }
}

/// Runs the command line `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    2
                }
            };
        }
    };
    let records = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let written = match cli.format {
        Format::Json => serde_json::to_string_pretty(&records)
            .map_err(std::io::Error::other)
            .and_then(|s| writeln!(stdout, "{s}")),
        Format::Plain => records
            .iter()
            .try_for_each(|r| writeln!(stdout, "{}", r.render_plain())),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if records.iter().any(|r| r.pass == Some(false)) {
        1
    } else {
        0
    }
}

fn parse_list(s: &str) -> Result<Vec<ExactRat>> {
    s.split(',').map(|p| parse_rational(p.trim())).collect()
}

fn check_precision(p: u32) -> Result<u32> {
    if p < crate::bigmath::MIN_PRECISION {
        return Err(Error::Precondition(format!(
            "precision must be at least {} bits",
            crate::bigmath::MIN_PRECISION
        )));
    }
    Ok(p)
}

fn dispatch(cmd: &Command) -> Result<Vec<OutputRecord>> {
    match cmd {
        Command::Bell {
            n,
            method,
            precision,
        } => bell(*n, *method, check_precision(*precision)?),
        Command::Stirling2 { n, k } => {
            let table = shared_table(*n);
            let v = table.get(*n, *k)?;
            Ok(vec![OutputRecord::exact(
                "stirling2",
                &[("n", n.to_string()), ("k", k.to_string())],
                v.to_string(),
            )])
        }
        Command::Bellpoly { n, k, x } => {
            let xs = parse_list(x)?;
            let v = partial_bell(&PartialBellInput::new(*n, *k, xs)?);
            Ok(vec![OutputRecord::exact(
                "bellpoly",
                &[("n", n.to_string()), ("k", k.to_string()), ("x", x.clone())],
                rational_string(&v),
            )])
        }
        Command::Hyp1f1 { a, b, z, precision } => {
            let p = check_precision(*precision)?;
            let r = kummer_1f1(
                &parse_rational(a)?,
                &parse_rational(b)?,
                &parse_rational(z)?,
                p,
            )?;
            Ok(vec![OutputRecord::approx(
                "hyp1f1",
                &[
                    ("a", a.clone()),
                    ("b", b.clone()),
                    ("z", z.clone()),
                    ("precision", p.to_string()),
                ],
                &r,
                p,
            )])
        }
        Command::Besseli {
            order,
            z,
            precision,
        } => {
            let p = check_precision(*precision)?;
            // non-dyadic inputs are rounded well below the requested accuracy
            let zr = PrecReal::from_rational(&parse_rational(z)?, p + 64);
            let r = bessel_i(*order, &zr, p)?;
            Ok(vec![OutputRecord::approx(
                "besseli",
                &[
                    ("order", order.to_string()),
                    ("z", z.clone()),
                    ("precision", p.to_string()),
                ],
                &r,
                p,
            )])
        }
        Command::Faadibruno { n } => faadibruno(*n),
        Command::Verify { target } => verify(target),
    }
}

fn bell(n: u32, method: Method, precision: u32) -> Result<Vec<OutputRecord>> {
    let params = |name: &str| vec![("n", n.to_string()), ("method", name.to_string())];
    let exact_method = match method {
        Method::Exact => Some(BellMethod::Recurrence),
        Method::StirlingSum => Some(BellMethod::StirlingSum),
        Method::Genfunc => Some(BellMethod::GenFunc),
        Method::Theorem => None,
    };
    if let Some(m) = exact_method {
        let seq = bell_sequence(n, m);
        let v = seq.get(n as usize).expect("sequence covers n");
        return Ok(vec![OutputRecord::exact(
            "bell",
            &params(m.name()),
            v.to_string(),
        )]);
    }
    if n == 0 {
        return Err(Error::Precondition(
            "the formula method needs n >= 1".into(),
        ));
    }
    let rhs = theorem_rhs(n, precision)?;
    let exact = bell_sequence(n, BellMethod::Recurrence)
        .get(n as usize)
        .cloned()
        .expect("sequence covers n");
    let report = judge(n, &exact, rhs, precision);
    let mut params = params("theorem");
    params.push(("precision", precision.to_string()));
    let mut rec = OutputRecord::approx("bell", &params, &report.formula_value, precision);
    rec.error_bound = bound_string(&report.error_budget);
    rec.detail
        .push(("residual".into(), bound_string(&report.residual)));
    rec.pass = Some(report.pass);
    Ok(vec![rec])
}

fn faadibruno(n: u32) -> Result<Vec<OutputRecord>> {
    let poly = faadibruno_poly(n)?;
    let oracle = deriv_oracle_poly(n)?;
    let table = shared_table(n);
    (1..=n)
        .map(|k| {
            let c = poly.coeff(k);
            let s = table.get(n, k)?;
            let signed = if k % 2 == 0 { s } else { -s };
            let mut rec = OutputRecord::exact(
                "faadibruno",
                &[("n", n.to_string()), ("k", k.to_string())],
                c.to_string(),
            );
            rec.pass = Some(c == oracle.coeff(k) && *c == signed);
            Ok(rec)
        })
        .collect()
}

fn quad_record(r: &QuadReport, precision: u32) -> OutputRecord {
    let mut params: Vec<(&str, String)> = r.params.iter().map(|(k, v)| (*k, v.clone())).collect();
    params.push(("precision", precision.to_string()));
    if r.quadrature_bound_heuristic {
        params.push(("quadrature_bound", "heuristic".into()));
    }
    let (quad, closed) = r.sides();
    let mut rec = OutputRecord::approx(r.identity.name(), &params, quad, precision);
    rec.detail = vec![
        (
            "closed_form".into(),
            to_decimal(&closed.value, faithful_digits(precision)),
        ),
        ("residual".into(), bound_string(&r.residual)),
        ("tolerance".into(), bound_string(&r.tolerance)),
    ];
    rec.pass = Some(r.pass);
    rec
}

fn verify(target: &VerifyTarget) -> Result<Vec<OutputRecord>> {
    match target {
        VerifyTarget::Theorem {
            n_max,
            flip_sign,
            acc,
        } => {
            let p = check_precision(acc.precision)?;
            let reports = match flip_sign {
                Some(k) => verify_corrupted(*n_max, p, Corruption::FlipSign { k: *k })?,
                None => verify_theorem(*n_max, p)?,
            };
            Ok(reports
                .iter()
                .map(|r| {
                    let mut rec = OutputRecord::approx(
                        "theorem",
                        &[
                            ("n", r.n.to_string()),
                            ("precision", r.precision_used.to_string()),
                        ],
                        &r.formula_value,
                        r.precision_used,
                    );
                    rec.error_bound = bound_string(&r.error_budget);
                    rec.detail = vec![
                        ("exact".into(), r.exact_bell.to_string()),
                        ("residual".into(), bound_string(&r.residual)),
                    ];
                    rec.pass = Some(r.pass);
                    rec
                })
                .collect())
        }
        VerifyTarget::Hk { k, z, acc } => {
            let p = check_precision(acc.precision)?;
            let zq = parse_rational(z)?;
            let mut out = vec![quad_record(
                &verify_hk_integral(*k, &zq, acc.tolerance, p)?,
                p,
            )];
            if *k == 0 {
                out.push(quad_record(
                    &verify_k0_specialization(&zq, acc.tolerance, p)?,
                    p,
                ));
            }
            Ok(out)
        }
        VerifyTarget::BellIntegral { n, acc } => {
            let p = check_precision(acc.precision)?;
            Ok(vec![quad_record(
                &verify_bell_integral(*n, acc.tolerance, p)?,
                p,
            )])
        }
        VerifyTarget::FinalIntegral { k, acc } => {
            let p = check_precision(acc.precision)?;
            Ok(vec![quad_record(
                &verify_final_identity(*k, acc.tolerance, p)?,
                p,
            )])
        }
        VerifyTarget::Genfunc { n_max, .. } => {
            let genfunc = genfunc_bell_coeffs(*n_max);
            let recurrence = bell_sequence(*n_max, BellMethod::Recurrence);
            let agree = genfunc.values == recurrence.values;
            let last = recurrence
                .get(*n_max as usize)
                .expect("sequence covers n")
                .to_string();
            let mut plain = OutputRecord::exact(
                "genfunc-bell",
                &[("n_max", n_max.to_string())],
                last.clone(),
            );
            plain.pass = Some(agree);
            let mut alternating =
                OutputRecord::exact("genfunc-alternating", &[("n_max", n_max.to_string())], last);
            alternating.pass = Some(alternating_genfunc_check(*n_max));
            Ok(vec![plain, alternating])
        }
        VerifyTarget::Scaling {
            trials,
            n_max,
            seed,
            ..
        } => {
            let (passed, total) = scaling_trials(*trials, *n_max, *seed)?;
            let mut rec = OutputRecord::exact(
                "scaling",
                &[
                    ("trials", trials.to_string()),
                    ("n_max", n_max.to_string()),
                    ("seed", seed.to_string()),
                ],
                passed.to_string(),
            );
            rec.pass = Some(passed == total);
            Ok(vec![rec])
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> ExactRat {
    let num: i64 = rng.gen_range(-20..=20);
    let den: i64 = rng.gen_range(1..=12);
    ExactRat::new(BigInt::from(num), BigInt::from(den))
}

/// Runs seeded random trials of the scaling identity; returns `(passed, total)`.
pub fn scaling_trials(trials: u32, n_max: u32, seed: u64) -> Result<(u32, u32)> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for _ in 0..trials {
        let n = rng.gen_range(1..=n_max);
        let k = rng.gen_range(1..=n);
        let a = random_rational(&mut rng);
        let b = random_rational(&mut rng);
        let x: Vec<ExactRat> = (0..=(n - k)).map(|_| random_rational(&mut rng)).collect();
        if partial_bell_scaling_check(n, k, &a, &b, &x)? {
            passed += 1;
        }
    }
    Ok((passed, trials))
}
