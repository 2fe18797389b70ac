//! Command-line front end: norm measurement, membership checks, class-member
//! generation, bound tables, and the audit sweep.

mod report;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bistar::bounds::{audit, bound_profile, AuditConfig};
use bistar::grid::GridSpec;
use bistar::membership::{
    check_bi_with, min_re_functional, Direction, FunctionalKind, MembershipReport, Verdict,
    DEFAULT_PROBE_ORDER,
};
use bistar::norms::{norm_estimate, richardson_extrapolate};
use bistar::schwarz::GeneratorConfig;
use bistar::series::TruncatedSeries;

use report::{audit_csv_lines, bounds_csv_line, fmt_num, AUDIT_HEADER, BOUNDS_HEADER};
use spec::{
    generate_by_class, parse_alphas, parse_complex, parse_phi, resolve_function, GeneratedSpec,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "bistar", version, about = "Pre-Schwarzian norms and bound audits for bi-starlike function classes")]
struct Cli {
    /// key=value configuration file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// output format (default json; audit/bounds/series default csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// radial grid resolution override
    #[arg(long, global = true)]
    radii: Option<usize>,

    /// angular grid resolution override
    #[arg(long, global = true)]
    angles: Option<usize>,

    /// outer grid radius override
    #[arg(long, global = true)]
    rmax: Option<f64>,

    /// series truncation order
    #[arg(long, global = true)]
    order: Option<usize>,

    /// absolute quadrature tolerance
    #[arg(long, global = true)]
    quad_tol: Option<f64>,

    /// seed for randomized Schwarz-function draws (`--phi random`)
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Truncated power-series operations
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
    /// Estimate the weighted pre-Schwarzian norm of a function
    Norm {
        /// catalog name, `gen_koebe:<alpha>`, or a generated .json file
        #[arg(long)]
        function: String,
        /// parameter for parametrized catalog entries
        #[arg(long)]
        alpha: Option<f64>,
        /// write the per-radius profile CSV here
        #[arg(long)]
        profile: Option<PathBuf>,
        /// also report the boundary Richardson extrapolation (labeled)
        #[arg(long)]
        extrapolate: bool,
    },
    /// Test class membership
    Member {
        #[arg(long)]
        function: String,
        #[arg(long)]
        alpha: f64,
        /// starlike | v
        #[arg(long)]
        kind: String,
        /// also test the inverse condition (bi-membership)
        #[arg(long)]
        bi: bool,
    },
    /// Build a class member from a Schwarz function
    Generate {
        /// starlike | inv-starlike | v
        #[arg(long)]
        class: String,
        #[arg(long)]
        alpha: f64,
        /// `0`, `z^k`, `blaschke:a1,a2[:eta]`, `z^k*blaschke:...`, `random`
        #[arg(long)]
        phi: String,
        /// write JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit measured norms against every bound over a function/alpha sweep
    Audit {
        /// comma-separated function specs
        #[arg(long)]
        functions: String,
        /// single value, comma list, or start:stop:step
        #[arg(long)]
        alphas: String,
        /// write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// exit with status 3 if any stated bound is violated
        #[arg(long)]
        fail_on_violation: bool,
    },
    /// Tabulate the bound formulas over an alpha sweep
    Bounds {
        #[arg(long)]
        alphas: String,
    },
}

#[derive(Subcommand)]
enum SeriesOp {
    /// Compositional inverse of a series given by its coefficients
    Revert {
        /// comma-separated coefficients c0,c1,... (complex literals allowed)
        #[arg(long)]
        coeffs: String,
    },
}

/// Settings after merging defaults, the config file, and flags.
struct Settings {
    format: Option<Format>,
    radii: Option<usize>,
    angles: Option<usize>,
    rmax: Option<f64>,
    order: usize,
    quad_tol: Option<f64>,
    seed: u64,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self> {
        let mut format = None;
        let mut radii = None;
        let mut angles = None;
        let mut rmax = None;
        let mut order = bistar::DEFAULT_SERIES_ORDER;
        let mut quad_tol = None;
        let mut seed = 0u64;

        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .with_context(|| format!("config line {} is not key=value", lineno + 1))?;
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "format" => {
                        format = Some(match value {
                            "json" => Format::Json,
                            "csv" => Format::Csv,
                            other => anyhow::bail!("bad format '{other}' in config"),
                        })
                    }
                    "radii" => radii = Some(value.parse()?),
                    "angles" => angles = Some(value.parse()?),
                    "rmax" => rmax = Some(value.parse()?),
                    "order" => order = value.parse()?,
                    "quad_tol" => quad_tol = Some(value.parse()?),
                    "seed" => seed = value.parse()?,
                    other => anyhow::bail!("unknown config key '{other}'"),
                }
            }
        }

        if let Some(f) = cli.format {
            format = Some(f);
        }
        if let Some(v) = cli.radii {
            radii = Some(v);
        }
        if let Some(v) = cli.angles {
            angles = Some(v);
        }
        if let Some(v) = cli.rmax {
            rmax = Some(v);
        }
        if let Some(v) = cli.order {
            order = v;
        }
        if let Some(v) = cli.quad_tol {
            quad_tol = Some(v);
        }
        if let Some(v) = cli.seed {
            seed = v;
        }
        if order < 8 {
            anyhow::bail!("order must be at least 8");
        }
        if let Some(r) = rmax {
            if !(r > 0.0 && r < 1.0) {
                anyhow::bail!("rmax must lie in (0, 1)");
            }
        }
        if let Some(t) = quad_tol {
            if t <= 0.0 {
                anyhow::bail!("quad_tol must be positive");
            }
        }
        Ok(Self {
            format,
            radii,
            angles,
            rmax,
            order,
            quad_tol,
            seed,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn norm_grid(&self) -> GridSpec<f64> {
        let mut g = GridSpec::norms_default();
        self.apply_grid(&mut g);
        g
    }

    fn membership_grid(&self) -> GridSpec<f64> {
        let mut g = GridSpec::membership_default();
        self.apply_grid(&mut g);
        g
    }

    fn apply_grid(&self, g: &mut GridSpec<f64>) {
        if let Some(n) = self.radii {
            g.n_radii = n;
        }
        if let Some(n) = self.angles {
            g.n_angles = n;
        }
        if let Some(r) = self.rmax {
            g.r_max = r;
            g.r_inner = g.r_inner.min(r / 2.0);
        }
    }

    fn generator_config(&self) -> GeneratorConfig<f64> {
        let mut cfg = GeneratorConfig::default();
        if let Some(t) = self.quad_tol {
            cfg.quad.abs_tol = t;
        }
        cfg
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            file.write_all(text.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

fn complex_pairs(coeffs: &[num_complex::Complex<f64>]) -> Vec<[f64; 2]> {
    coeffs.iter().map(|c| [c.re, c.im]).collect()
}

fn series_csv(coeffs: &[num_complex::Complex<f64>]) -> String {
    let all_real = coeffs.iter().all(|c| c.im == 0.0);
    coeffs
        .iter()
        .map(|c| {
            if all_real {
                fmt_num(c.re)
            } else {
                format!("{}{}i", fmt_num(c.re), {
                    let im = fmt_num(c.im);
                    if im.starts_with('-') { im } else { format!("+{im}") }
                })
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn report_json(r: &MembershipReport<f64>) -> serde_json::Value {
    serde_json::to_value(r).expect("membership report serializes")
}

fn run(cli: &Cli) -> Result<i32> {
    let settings = Settings::resolve(cli)?;
    match &cli.cmd {
        Cmd::Series { op } => match op {
            SeriesOp::Revert { coeffs } => {
                let parsed = coeffs
                    .split(',')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>>>()?;
                let series = TruncatedSeries::new(parsed).map_err(anyhow::Error::from)?;
                let reverted = series.revert()?;
                match settings.format_or(Format::Csv) {
                    Format::Csv => println!("{}", series_csv(reverted.coeffs())),
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "schema_version": SCHEMA_VERSION,
                            "coefficients": complex_pairs(reverted.coeffs()),
                        }))?
                    ),
                }
                Ok(0)
            }
        },
        Cmd::Norm {
            function,
            alpha,
            profile,
            extrapolate,
        } => {
            let f = resolve_function(function, *alpha, &settings.generator_config(), settings.seed)?;
            let grid = settings.norm_grid();
            let estimate = norm_estimate(&f, &grid)?;
            if let Some(path) = profile {
                let mut text = String::from("r,max_theta_value\n");
                for (r, v) in estimate.profile.as_deref().unwrap_or(&[]) {
                    text.push_str(&format!("{},{}\n", fmt_num(*r), fmt_num(*v)));
                }
                emit(Some(path), &text)?;
            }
            let extrapolated = if *extrapolate {
                Some(richardson_extrapolate(&f, &estimate)?)
            } else {
                None
            };
            match settings.format_or(Format::Json) {
                Format::Json => {
                    let mut body = json!({
                        "schema_version": SCHEMA_VERSION,
                        "function": f.name(),
                        "value": estimate.value,
                        "argmax": [estimate.argmax.re, estimate.argmax.im],
                        "r_max": estimate.r_max,
                        "grid": [estimate.grid.0, estimate.grid.1],
                        "refined": estimate.refined,
                        "lower_bound": true,
                    });
                    if let Some(x) = extrapolated {
                        body["extrapolated"] = json!({"value": x, "extrapolated": true});
                    }
                    println!("{}", serde_json::to_string_pretty(&body)?);
                }
                Format::Csv => {
                    println!("function,value,argmax_re,argmax_im,r_max");
                    println!(
                        "{},{},{},{},{}",
                        f.name(),
                        fmt_num(estimate.value),
                        fmt_num(estimate.argmax.re),
                        fmt_num(estimate.argmax.im),
                        fmt_num(estimate.r_max)
                    );
                }
            }
            Ok(0)
        }
        Cmd::Member {
            function,
            alpha,
            kind,
            bi,
        } => {
            let f = resolve_function(function, None, &settings.generator_config(), settings.seed)?;
            let kind = match kind.as_str() {
                "starlike" => FunctionalKind::Starlike,
                "v" => FunctionalKind::V,
                other => anyhow::bail!("unknown kind '{other}' (expected starlike or v)"),
            };
            let grid = settings.membership_grid();
            let reports: Vec<MembershipReport<f64>> = if *bi {
                let (fwd, inv) =
                    check_bi_with(&f, *alpha, kind, &grid, DEFAULT_PROBE_ORDER.max(settings.order))?;
                vec![fwd, inv]
            } else {
                let (min_re, witness) = min_re_functional(&f, kind, &grid)?;
                vec![MembershipReport {
                    kind,
                    direction: Direction::Forward,
                    alpha: *alpha,
                    empirical_min_re: min_re,
                    witness,
                    grid: (grid.n_radii, grid.n_angles, grid.r_max),
                    inverse_domain_radius: None,
                    verdict: if min_re > *alpha {
                        Verdict::Member
                    } else {
                        Verdict::NonMember
                    },
                }]
            };
            match settings.format_or(Format::Json) {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "schema_version": SCHEMA_VERSION,
                        "function": f.name(),
                        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                    }))?
                ),
                Format::Csv => {
                    println!("function,kind,direction,alpha,min_re,witness_re,witness_im,rho,verdict");
                    for r in &reports {
                        println!(
                            "{},{},{},{},{},{},{},{},{}",
                            f.name(),
                            match r.kind {
                                FunctionalKind::Starlike => "starlike",
                                FunctionalKind::V => "v",
                            },
                            match r.direction {
                                Direction::Forward => "forward",
                                Direction::Inverse => "inverse",
                            },
                            fmt_num(r.alpha),
                            fmt_num(r.empirical_min_re),
                            fmt_num(r.witness.re),
                            fmt_num(r.witness.im),
                            r.inverse_domain_radius.map(fmt_num).unwrap_or_default(),
                            match r.verdict {
                                Verdict::Member => "member",
                                Verdict::NonMember => "non_member",
                                Verdict::Indeterminate => "indeterminate",
                            }
                        );
                    }
                }
            }
            Ok(0)
        }
        Cmd::Generate {
            class,
            alpha,
            phi,
            out,
        } => {
            let phi = parse_phi(phi, settings.seed)?;
            let gen_cfg = settings.generator_config();
            let f = generate_by_class(class, *alpha, &phi, &gen_cfg)?;
            let series = f.taylor(settings.order)?;
            let kind = match class.as_str() {
                "v" => FunctionalKind::V,
                _ => FunctionalKind::Starlike,
            };
            let grid = settings.membership_grid();
            // for the starlike/v classes this is the defining functional; for
            // inv-starlike it is the subordination pullback Re f/(z f') > alpha
            let (min_re, witness) = if class == "inv-starlike" {
                let q = |z: num_complex::Complex<f64>| {
                    let (v, d, _) = f.eval(z)?;
                    Ok(v / (z * d))
                };
                let rep = bistar::membership::subordination_check(q, *alpha, &grid)?;
                (rep.empirical_min_re, rep.witness)
            } else {
                min_re_functional(&f, kind, &grid)?
            };
            let spec = GeneratedSpec {
                schema_version: SCHEMA_VERSION,
                class: class.clone(),
                alpha: *alpha,
                phi: phi.to_string(),
                order: settings.order,
                coefficients: series.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            };
            match settings.format_or(Format::Json) {
                Format::Json => {
                    let mut body = serde_json::to_value(&spec)?;
                    body["validity"] = json!({
                        "functional_min_re": min_re,
                        "alpha": alpha,
                        "satisfied": min_re > *alpha,
                        "witness": [witness.re, witness.im],
                        "grid": [grid.n_radii, grid.n_angles, grid.r_max],
                    });
                    let text = format!("{}\n", serde_json::to_string_pretty(&body)?);
                    emit(out.as_ref(), &text)?;
                }
                Format::Csv => {
                    let text = format!("{}\n", series_csv(series.coeffs()));
                    emit(out.as_ref(), &text)?;
                }
            }
            Ok(0)
        }
        Cmd::Audit {
            functions,
            alphas,
            out,
            fail_on_violation,
        } => {
            let gen_cfg = settings.generator_config();
            let fns = functions
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| resolve_function(s.trim(), None, &gen_cfg, settings.seed))
                .collect::<Result<Vec<_>>>()?;
            let alphas = parse_alphas(alphas)?;
            let cfg = AuditConfig {
                membership_grid: settings.membership_grid(),
                norm_grid: settings.norm_grid(),
                probe_order: DEFAULT_PROBE_ORDER.max(settings.order),
                ..AuditConfig::default()
            };
            let rows = audit(&fns, &alphas, &cfg)?;
            let text = match settings.format_or(Format::Csv) {
                Format::Csv => {
                    let mut text = String::from(AUDIT_HEADER);
                    text.push('\n');
                    for row in &rows {
                        for line in audit_csv_lines(row) {
                            text.push_str(&line);
                            text.push('\n');
                        }
                    }
                    text
                }
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "schema_version": SCHEMA_VERSION,
                        "rows": rows,
                    }))?
                ),
            };
            emit(out.as_ref(), &text)?;
            let violated = rows.iter().any(|r| !r.violations.is_empty());
            if violated && *fail_on_violation {
                return Ok(3);
            }
            Ok(0)
        }
        Cmd::Bounds { alphas } => {
            let alphas = parse_alphas(alphas)?;
            match settings.format_or(Format::Csv) {
                Format::Csv => {
                    println!("{BOUNDS_HEADER}");
                    for &a in &alphas {
                        println!("{}", bounds_csv_line(&bound_profile(a)?));
                    }
                }
                Format::Json => {
                    let profiles = alphas
                        .iter()
                        .map(|&a| bound_profile::<f64>(a))
                        .collect::<bistar::Result<Vec<_>>>()?;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "schema_version": SCHEMA_VERSION,
                            "profiles": profiles,
                        }))?
                    );
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let usage = match e.downcast_ref::<bistar::Error>() {
                Some(bistar::Error::Argument(_)) | Some(bistar::Error::Unsupported(_)) => true,
                Some(_) => false,
                None => true, // parse/config/IO problems are usage errors
            };
            if usage {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            } else {
                eprintln!("{}", json!({ "error": format!("{e:#}") }));
                ExitCode::from(1)
            }
        }
    }
}
