use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qlattice::completeness::{build_system, gram_matrix, ls_residual, Example};
use qlattice::io::{
    fmt_num, read_grid_csv, to_json, write_grid_csv, write_matrix_csv, write_sweep_csv,
};
use qlattice::qcore::{GridFunction, GridWindow, QParams};
use qlattice::qhankel::{
    hankel_q, pw_membership, recovery_demo, roundtrip_error, sonine_pair, sonine_window,
    vanishing_demo,
};
use qlattice::series::{coeffs_for, BesselFamily, BesselSpec};
use qlattice::special::{Jackson2Variant, RealFunction};
use qlattice::uncertainty::{transform_window, UncertaintyContext};
use qlattice::zeros::zeros_of;
use qlattice::{QError, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qlattice",
    version,
    about = "q-Bessel functions, q-Hankel transforms and uncertainty bounds on q-grids"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0.5)]
    q: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.5,
        allow_negative_numbers = true
    )]
    nu: f64,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 512)]
    max_terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Classical,
    Jackson2,
    Jackson2Printed,
    Jackson3,
    Euler,
}

impl Family {
    fn bessel(self) -> BesselFamily {
        match self {
            Family::Classical => BesselFamily::Classical,
            Family::Jackson2 => BesselFamily::Jackson2(Jackson2Variant::Quadratic),
            Family::Jackson2Printed => BesselFamily::Jackson2(Jackson2Variant::AsPrinted),
            Family::Jackson3 => BesselFamily::Jackson3,
            Family::Euler => BesselFamily::EulerProduct,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExampleId {
    Ex1,
    Ex2a,
    Ex2b,
    Ex3a,
    Ex3b,
    Ex4,
}

impl From<ExampleId> for Example {
    fn from(e: ExampleId) -> Self {
        match e {
            ExampleId::Ex1 => Example::Ex1,
            ExampleId::Ex2a => Example::Ex2a,
            ExampleId::Ex2b => Example::Ex2b,
            ExampleId::Ex3a => Example::Ex3a,
            ExampleId::Ex3b => Example::Ex3b,
            ExampleId::Ex4 => Example::Ex4,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    One,
    X,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    Sonine,
}

#[derive(Args, Debug)]
struct Source {
    /// Grid-function CSV with columns k, q^k, value.
    #[arg(long, conflicts_with = "builtin")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Bessel-type function at the given points.
    Eval {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        points: Vec<f64>,
    },
    /// Estimate the order of growth from Taylor coefficients.
    Order {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Positive zeros in increasing order.
    Zeros {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        count: usize,
    },
    /// Gram matrix of an example system.
    Gram {
        #[arg(long, value_enum)]
        example: ExampleId,
        #[arg(long)]
        n: usize,
    },
    /// Least-squares distance from a target to the span of the first N elements.
    Residual {
        #[arg(long, value_enum)]
        example: ExampleId,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// q-Hankel transform of a grid function.
    Transform {
        #[command(flatten)]
        source: Source,
        #[arg(long, num_args = 2, value_names = ["K_MIN", "K_MAX"], allow_negative_numbers = true)]
        window: Option<Vec<i32>>,
    },
    /// Maximum error of applying the transform twice.
    Roundtrip {
        #[command(flatten)]
        source: Source,
        #[arg(long, num_args = 2, value_names = ["K_MIN", "K_MAX"], allow_negative_numbers = true)]
        work: Option<Vec<i32>>,
    },
    /// Transform values at q^-1, ..., q^-N.
    PwCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Finite-section diagnostics of the vanishing theorem.
    Vanishing {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, num_args = 2, value_names = ["K_MIN", "K_MAX"], allow_negative_numbers = true)]
        window: Vec<i32>,
    },
    /// Rebuild erased samples of a band-limited grid function.
    Recover {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        erased: Vec<i32>,
    },
    /// Concentration bounds for a unit-norm grid function.
    Uncertainty {
        #[command(flatten)]
        source: Source,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        sweep: Option<Vec<i32>>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n_t: i32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n_omega: i32,
    },
}

fn window(bounds: &[i32]) -> Result<GridWindow> {
    GridWindow::new(bounds[0], bounds[1])
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

fn grid_csv(f: &GridFunction<f64>) -> Result<String> {
    let mut buf = Vec::new();
    write_grid_csv(f, &mut buf)?;
    Ok(utf8(buf))
}

fn grid_json(f: &GridFunction<f64>) -> Result<String> {
    let rows: Vec<_> = f
        .window()
        .exponents()
        .rev()
        .map(|k| json!({"k": k, "x": f.point(k), "value": f.get(k)}))
        .collect();
    to_json(&json!({"q": f.q(), "samples": rows}))
}

struct Ctx {
    params: QParams<f64>,
    nu: f64,
    alpha: Option<f64>,
    format: Format,
}

impl Ctx {
    fn alpha(&self) -> Result<f64> {
        self.alpha
            .ok_or_else(|| QError::InvalidSpec("--alpha is required for this command".into()))
    }

    fn load(&self, source: &Source, normalize: bool) -> Result<GridFunction<f64>> {
        let f = match (&source.input, source.builtin) {
            (Some(path), _) => {
                let file = File::open(path)
                    .map_err(|e| QError::Input(format!("{}: {e}", path.display())))?;
                read_grid_csv(BufReader::new(file), Some(self.params.q()))?
            }
            (None, Some(Builtin::Sonine)) => sonine_pair(self.nu, self.alpha()?, &self.params)?
                .f
                .sample(sonine_window())?,
            (None, None) => {
                return Err(QError::InvalidSpec("give --input FILE or --builtin".into()))
            }
        };
        if normalize {
            f.normalized()
        } else {
            Ok(f)
        }
    }

    fn spec(&self, family: Family) -> Result<BesselSpec<f64>> {
        BesselSpec::new(family.bessel(), self.nu, self.params.q())
    }

    fn run(&self, command: &Command) -> Result<String> {
        let p = &self.params;
        let json = self.format == Format::Json;
        match command {
            Command::Eval { family, points } => {
                let f = self.spec(*family)?.function(p)?;
                let values = points
                    .iter()
                    .map(|&x| f.eval(x))
                    .collect::<Result<Vec<_>>>()?;
                if json {
                    return to_json(&json!({"points": points, "values": values}));
                }
                Ok(csv_table(
                    &["x", "value"],
                    points
                        .iter()
                        .zip(&values)
                        .map(|(&x, &v)| vec![fmt_num(x), fmt_num(v)]),
                ))
            }
            Command::Order { family, n } => {
                let series = coeffs_for(&self.spec(*family)?)?;
                let rho = series.estimate_order(*n)?;
                if json {
                    return to_json(&json!({"family": series.label, "n": n, "order": rho}));
                }
                Ok(csv_table(
                    &["n", "order"],
                    [vec![n.to_string(), fmt_num(rho)]],
                ))
            }
            Command::Zeros { family, count } => {
                let z = zeros_of(&self.spec(*family)?, *count, p)?;
                if json {
                    return to_json(&json!({"source": z.source, "zeros": z.values}));
                }
                Ok(csv_table(
                    &["n", "zero"],
                    z.values
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| vec![(i + 1).to_string(), fmt_num(v)]),
                ))
            }
            Command::Gram { example, n } => {
                let s = build_system((*example).into(), self.nu, self.alpha.unwrap_or(0.0), *n, p)?;
                let g = gram_matrix(&s, *n, p)?;
                if json {
                    let rows: Vec<Vec<f64>> = (0..g.rows()).map(|i| g.row(i).to_vec()).collect();
                    return to_json(
                        &json!({"system": s.label, "multipliers": s.multipliers.values, "gram": rows}),
                    );
                }
                let mut buf = Vec::new();
                write_matrix_csv(&g, &s.multipliers.values, &mut buf)?;
                Ok(utf8(buf))
            }
            Command::Residual { example, target, n } => {
                let count = n.iter().copied().max().unwrap_or(0);
                let s = build_system(
                    (*example).into(),
                    self.nu,
                    self.alpha.unwrap_or(0.0),
                    count,
                    p,
                )?;
                let t: fn(f64) -> f64 = match target {
                    Target::One => |_| 1.0,
                    Target::X => |x| x,
                };
                let rows = n
                    .iter()
                    .map(|&k| Ok((k, ls_residual(&t, &s, k, p)?)))
                    .collect::<Result<Vec<_>>>()?;
                if json {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|(k, r)| json!({"n": k, "residual": r.residual, "rank": r.rank, "ill_conditioned": r.ill_conditioned}))
                        .collect();
                    return to_json(&json!({"system": s.label, "rows": rows}));
                }
                Ok(csv_table(
                    &["n", "residual", "rank", "ill_conditioned"],
                    rows.iter().map(|(k, r)| {
                        vec![
                            k.to_string(),
                            fmt_num(r.residual),
                            r.rank.to_string(),
                            r.ill_conditioned.to_string(),
                        ]
                    }),
                ))
            }
            Command::Transform { source, window: w } => {
                let f = self.load(source, false)?;
                let out = match w {
                    Some(b) => window(b)?,
                    None => transform_window(&f, self.nu, p)?,
                };
                let g = hankel_q(&f, self.nu, out, p)?;
                if json {
                    grid_json(&g)
                } else {
                    grid_csv(&g)
                }
            }
            Command::Roundtrip { source, work } => {
                let f = self.load(source, false)?;
                let work = match work {
                    Some(b) => window(b)?,
                    None => transform_window(&f, self.nu, p)?.union(&f.window()),
                };
                let e = roundtrip_error(&f, self.nu, work, p)?;
                if json {
                    return to_json(&json!({"max_error": e}));
                }
                Ok(csv_table(&["max_error"], [vec![fmt_num(e)]]))
            }
            Command::PwCheck { source, n } => {
                let f = self.load(source, false)?;
                let r = pw_membership(&f, self.nu, *n, p)?;
                if json {
                    return to_json(
                        &json!({"values": r.values, "max_abs": r.max_abs, "norm": f.norm()}),
                    );
                }
                Ok(csv_table(
                    &["n", "value"],
                    r.values
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| vec![(i + 1).to_string(), fmt_num(v)]),
                ))
            }
            Command::Vanishing { n, window: w } => {
                let win = window(w)?;
                let reports = n
                    .iter()
                    .map(|&k| vanishing_demo(self.nu, k, win, p))
                    .collect::<Result<Vec<_>>>()?;
                if json {
                    return to_json(&reports);
                }
                Ok(csv_table(
                    &[
                        "n",
                        "constraints",
                        "unknowns",
                        "rank",
                        "sigma_min",
                        "witness_norm_positive_part",
                    ],
                    reports.iter().map(|r| {
                        vec![
                            r.n.to_string(),
                            r.constraints.to_string(),
                            r.unknowns.to_string(),
                            r.rank.to_string(),
                            fmt_num(r.sigma_min),
                            fmt_num(r.witness_norm_positive_part),
                        ]
                    }),
                ))
            }
            Command::Recover { source, erased } => {
                let f = self.load(source, false)?;
                let r = recovery_demo(&f, erased, self.nu, p)?;
                if json {
                    return to_json(&json!({
                        "erased": r.erased,
                        "constraints": r.constraints,
                        "rank": r.rank,
                        "max_error": r.max_error,
                        "recovered": r.erased.iter().map(|&k| json!({"k": k, "value": r.recovered.get(k)})).collect::<Vec<_>>(),
                    }));
                }
                grid_csv(&r.recovered)
            }
            Command::Uncertainty {
                source,
                sweep,
                n_t,
                n_omega,
            } => {
                let f = self.load(source, true)?;
                let mut ctx = UncertaintyContext::new(&f, self.nu, p)?;
                let reports = match sweep {
                    Some(r) => ctx.sweep(r[0], r[1])?,
                    None => vec![ctx.report(*n_t, *n_omega)?],
                };
                if json {
                    return if sweep.is_some() {
                        to_json(&reports)
                    } else {
                        to_json(&reports[0])
                    };
                }
                let mut buf = Vec::new();
                write_sweep_csv(&reports, &mut buf)?;
                Ok(utf8(buf))
            }
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    let io = |e: std::io::Error| QError::Input(e.to_string());
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = QParams::new(cli.q, cli.tol, cli.max_terms).and_then(|params| {
        let ctx = Ctx {
            params,
            nu: cli.nu,
            alpha: cli.alpha,
            format: cli.format,
        };
        let text = ctx.run(&cli.command)?;
        emit(&text, cli.out.as_ref())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
