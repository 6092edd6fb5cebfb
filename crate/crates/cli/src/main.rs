use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cluster_dt::bruhat::{self, TriDiag};
use cluster_dt::dtmap::{self, DtMap, FriezeKind};
use cluster_dt::fixpoint::{self, FixedPointData};
use cluster_dt::report::{sig12, Check, Report};
use cluster_dt::roots::{self, CartanSpec, CartanType};
use cluster_dt::spectrum;
use cluster_dt::suite::{self, SuiteOptions};

#[derive(Parser, Debug)]
#[command(
    name = "cluster-dt",
    version,
    about = "DT transformations of finite-type cluster ensembles"
)]
struct Cli {
    /// Scale factor applied to every default tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the checks as CSV rows.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed points a, b, kappa and u, with the tabulated closed form.
    FixedPoint { kind: CartanType },
    /// Characteristic polynomial P of the linearization and the degree polynomial D.
    CharPoly { kind: CartanType },
    /// Cluster exponents against the Weyl group degrees.
    Exponents { kind: CartanType },
    /// Periodicity of dt_A and dt_X on random positive points.
    Periodicity {
        kind: CartanType,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Also check the half period (h+2)/2 when w0 = -1.
        #[arg(long)]
        half: bool,
    },
    /// Rows m = 0..R of an x- or Y-frieze.
    Frieze {
        kind: CartanType,
        #[arg(long = "kind", value_enum, default_value = "x")]
        frieze: FriezeArg,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        /// Seed row as comma-separated positive values; all ones if omitted.
        #[arg(long, value_parser = parse_start)]
        start: Option<SeedRow>,
    },
    /// The height factorization of ((x^{h+2}-1)/(x-1))^n.
    HeightIdentity { kind: CartanType },
    /// Exponents of the Coxeter element M_1 with respect to h.
    Coxeter { kind: CartanType },
    /// The type A_n tridiagonal model.
    TwistAn {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        n: u32,
        #[arg(value_enum)]
        what: TwistWhat,
    },
    /// The full verification suite for one type or all of them.
    Verify {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        kind: Option<CartanType>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FriezeArg {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TwistWhat {
    Orbit,
    Spectrum,
    Tnn,
    Period,
}

/// One comma-separated value; a bare `Vec` would make clap expect many.
#[derive(Debug, Clone)]
struct SeedRow(Vec<f64>);

fn parse_start(s: &str) -> Result<SeedRow, String> {
    dtmap::parse_point_list(s)
        .map(SeedRow)
        .map_err(|e| e.to_string())
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| sig12(*x)).collect();
    format!("({})", parts.join(", "))
}

fn load(kind: CartanType) -> cluster_dt::Result<(CartanSpec, FixedPointData)> {
    let spec = roots::cartan_matrix(kind)?;
    let fp = FixedPointData::compute(&spec)?;
    Ok((spec, fp))
}

/// Human-readable output and the report for one command.
fn run(cli: &Cli) -> cluster_dt::Result<(String, Report)> {
    let opts = SuiteOptions {
        tol_scale: cli.tol,
        trials: 100,
        seed: cli.seed,
    };
    let tol = |base: f64| base * cli.tol;
    let mut out = String::new();
    let report = match &cli.command {
        Command::FixedPoint { kind } => {
            let (spec, fp) = load(*kind)?;
            let closed = fixpoint::closed_form_a(&spec);
            out += &format!("a       = {}\n", fmt_vec(&fp.a));
            out += &format!("closed  = {}\n", fmt_vec(&closed));
            out += &format!("b       = {}\n", fmt_vec(&fp.b));
            out += &format!("kappa   = {}\n", fmt_vec(&fp.kappa));
            out += &format!("u       = {}\n", fmt_vec(&fp.u));
            let mut r = Report::new("fixed-point", kind.to_string(), cli.seed);
            r.push(Check::within(
                "solve_a = closed form",
                dtmap::max_rel_diff(&fp.a, &closed),
                tol(1e-9),
            ));
            r.push(Check::within(
                "A-equation residual",
                fixpoint::residual_a(&spec, &fp.a),
                tol(1e-10),
            ));
            r.push(Check::within(
                "X-equation residual",
                fixpoint::residual_b(&spec, &fp.b),
                tol(1e-10),
            ));
            r.push(Check::within(
                "u-equation residual",
                fixpoint::residual_u(&spec, &fp.u),
                tol(1e-10),
            ));
            r
        }
        Command::CharPoly { kind } => {
            let (spec, fp) = load(*kind)?;
            let p = spectrum::p_phi(&spec, &fp)?;
            let d = spectrum::d_poly(&spec)?;
            out += &format!("P = {}\n", fmt_vec(&p.real_coeffs()));
            out += &format!("D = {}\n", fmt_vec(&d.real_coeffs()));
            out += "(coefficients from degree 0 upward)\n";
            let mut r = Report::new("char-poly", kind.to_string(), cli.seed);
            r.push(Check::within("P = D", p.max_abs_diff(&d), tol(1e-8)));
            r
        }
        Command::Exponents { kind } => {
            let (spec, fp) = load(*kind)?;
            let p = spectrum::p_phi(&spec, &fp)?;
            let m = spectrum::exponents(&p, spec.coxeter_number + 2)?;
            out += &format!("exponents = {m:?}\ndegrees   = {:?}\n", spec.degrees);
            let mut r = Report::new("exponents", kind.to_string(), cli.seed);
            r.push(Check::exact("exponents = degrees", m == spec.degrees));
            r
        }
        Command::Periodicity { kind, trials, half } => {
            let spec = roots::cartan_matrix(*kind)?;
            let mut r = Report::new("periodicity", kind.to_string(), cli.seed);
            for (map, label) in [(DtMap::A, "dt_A"), (DtMap::X, "dt_X")] {
                let p = dtmap::check_periodicity(&spec, map, *trials, cli.seed);
                r.push(Check::within(
                    format!("{label} period {}", p.period),
                    p.max_deviation,
                    tol(1e-8),
                ));
                match (half, p.half) {
                    (true, Some((h, dev))) => {
                        r.push(Check::within(format!("{label} period {h}"), dev, tol(1e-8)))
                    }
                    (true, None) => out += &format!("{label}: w0 != -1, no half period\n"),
                    _ => {}
                }
            }
            r
        }
        Command::Frieze {
            kind,
            frieze,
            rows,
            start,
        } => {
            let spec = roots::cartan_matrix(*kind)?;
            let seed = start
                .clone()
                .map_or_else(|| vec![1.0; spec.rank()], |r| r.0);
            let fk = match frieze {
                FriezeArg::X => FriezeKind::X,
                FriezeArg::Y => FriezeKind::Y,
            };
            let last = (*rows).max(1) as i64 - 1;
            let table = dtmap::frieze(&spec, fk, &seed, 0..=last)?;
            for (m, row) in table.rows.iter().enumerate() {
                out += &format!("m={m:<3} {}\n", fmt_vec(row));
            }
            let mut r = Report::new("frieze", kind.to_string(), cli.seed);
            r.push(Check::within(
                "recurrence residual",
                table.recurrence_residual(&spec),
                tol(1e-10),
            ));
            r
        }
        Command::HeightIdentity { kind } => {
            let spec = roots::cartan_matrix(*kind)?;
            let rs = roots::enumerate_positive_roots(&spec);
            let mut r = Report::new("height-identity", kind.to_string(), cli.seed);
            r.push(Check::within(
                "height identity",
                spectrum::height_identity(&spec, &rs),
                tol(1e-7),
            ));
            r
        }
        Command::Coxeter { kind } => {
            let spec = roots::cartan_matrix(*kind)?;
            let m = spectrum::coxeter_spectrum(&spec)?;
            let expected: Vec<u32> = spec.degrees.iter().map(|d| d - 1).collect();
            out += &format!("exponents of M_1 = {m:?}\ndegrees - 1      = {expected:?}\n");
            let mut r = Report::new("coxeter", kind.to_string(), cli.seed);
            r.push(Check::exact(
                "coxeter exponents = degrees - 1",
                m == expected,
            ));
            r
        }
        Command::TwistAn { n, what } => twist(*n as usize, *what, cli, &mut out)?,
        Command::Verify { kind, all } => {
            if *all {
                suite::verify_all(&opts)
            } else {
                let kind = kind.expect("clap enforces a type without --all");
                suite::verify_type(kind, &opts)
            }
        }
    };
    Ok((out, report))
}

fn twist(n: usize, what: TwistWhat, cli: &Cli, out: &mut String) -> cluster_dt::Result<Report> {
    let tol = |base: f64| base * cli.tol;
    let spec = format!("A{n}");
    let q_star = 2.0 * (std::f64::consts::PI / (n as f64 + 3.0)).cos();
    Ok(match what {
        TwistWhat::Orbit => {
            let start = TriDiag::on_q_slice(&vec![1.5; n])?;
            let orbit = bruhat::twist_q_orbit(&start.q, n + 3)?;
            for (k, q) in orbit.iter().enumerate() {
                *out += &format!("step {k:<2} q = {}\n", fmt_vec(q));
            }
            let mut r = Report::new("twist-an orbit", spec, cli.seed);
            r.push(Check::within(
                "period n+3",
                dtmap::max_rel_diff(&orbit[n + 3], &start.q),
                tol(1e-7),
            ));
            r
        }
        TwistWhat::Spectrum => {
            let s = bruhat::twist_spectrum(n)?;
            *out += &format!("char poly = {}\n", fmt_vec(&s.jacobian_poly.real_coeffs()));
            *out += &format!("P_A * P_c = {}\n", fmt_vec(&s.target.real_coeffs()));
            let mut r = Report::new("twist-an spectrum", spec, cli.seed);
            r.push(Check::within(
                "twist spectrum = P_A P_c",
                s.residual,
                tol(1e-5),
            ));
            r.push(Check::within(
                "twist_Q spectrum = P_A",
                s.q_residual,
                tol(1e-5),
            ));
            r.push(Check::within("char(E) = P_c", s.frozen_residual, tol(1e-9)));
            r
        }
        TwistWhat::Tnn => {
            let mut r = Report::new("twist-an tnn", spec, cli.seed);
            let mut tnn = Vec::new();
            for q in bruhat::vieta_fixed_candidates(n) {
                let ok = bruhat::tnn_check(&TriDiag::constant(n, q))?;
                *out += &format!("q = {:>16}  TNN = {ok}\n", sig12(q));
                if ok {
                    tnn.push(q);
                }
            }
            r.push(Check::exact(
                "unique TNN candidate is 2cos(pi/(n+3))",
                tnn.len() == 1 && (tnn[0] - q_star).abs() <= 1e-10,
            ));
            r
        }
        TwistWhat::Period => {
            let p = bruhat::period_check_full(n, 20, cli.seed)?;
            let mut r = Report::new("twist-an period", spec, cli.seed);
            r.push(Check::within(
                "full twist period n+3 on p = 1",
                p.slice_deviation,
                tol(1e-7),
            ));
            r.push(Check::within(
                "frozen part period n+1",
                p.frozen_deviation,
                tol(1e-9),
            ));
            r.push(Check::within("det drift", p.det_drift, tol(1e-9)));
            r
        }
    })
}

fn write_outputs(cli: &Cli, report: &Report) -> cluster_dt::Result<()> {
    if let Some(path) = &cli.json {
        std::fs::write(path, report.to_json()? + "\n")?;
    }
    if let Some(path) = &cli.csv {
        report.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        eprintln!("error: --tol must be a positive finite number");
        return ExitCode::from(2);
    }
    let (text, report) = match run(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    print!("{text}");
    print!("{}", report.render_table());
    if let Err(e) = write_outputs(&cli, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
