use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use qmf_core::eisenstein::{eisenstein, eisenstein_e, parse_poly, EisensteinBasis};
use qmf_core::elliptic::{inverse_roundtrip, periods_with_diagnostics, EllipticParameters, LEGENDRE_GATE};
use qmf_core::group::{g0_membership, gamma_membership};
use qmf_core::hodge::{
    check_p1, check_p2, check_p3, connection_matrix, f_ode_residual, g_ode_residual, transversality_check, ConnectionOptions,
    FrameJson, HodgeFrame, LatticePoint, MatrixJson, PeriodMatrix,
};
use qmf_core::mirror::{
    instanton_numbers, tau1_series, verify_tau_curve, verify_tau_matrix, verify_transversality_odes, yukawa,
    DISPLAYED_CONNECTION_TOLERANCE,
};
use qmf_core::paths::{builtin_path, parse_complex_list};
use qmf_core::rational::format_rational;
use qmf_core::report::Report;
use qmf_core::siegel::{riemann_check, siegel_point_check, to_siegel, SiegelBlocksJson, RELATION_TOLERANCE, SYMMETRY_TOLERANCE};
use qmf_core::Error;

use crate::{Cli, Command, EllipticCommand, GroupArgs, GroupCommand, HodgeCommand, MqCommand, QmCommand, SiegelCommand};

/// Residual bound for the F and G ODEs along a path.
const ODE_TOLERANCE: f64 = 1e-5;
/// j mismatch allowed by the elliptic round trip.
const ROUNDTRIP_TOLERANCE: f64 = 1e-6;
/// Point on the τ0-curve used by `mq verify-tau`.
const CURVE_POINT: Complex64 = Complex64::new(0.1, 2.0);

const SCHEMAS: &str = "\
schemas:
  matrix.json  {\"rows\": r, \"cols\": c, \"entries\": [re | [re, im], ...]}  (row-major)
  frame.json   {\"m\": m, \"hodge_numbers\": [..], \"psi0\": [[int]], \"phi0\": [[re | [re, im]]]}
  blocks.json  {\"x1\": matrix, \"x2\": matrix, \"x3\": matrix, \"x4\": matrix}
  complex      2, -1.5e-3, i, -2.5i, 0.1+2i, 3-i  (lists are comma-separated)";

#[derive(Debug, thiserror::Error)]
enum CommandError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

type Outcome = Result<Report, CommandError>;

fn read(path: &Path) -> Result<String, CommandError> {
    fs::read_to_string(path).map_err(|source| CommandError::Io { path: path.display().to_string(), source })
}

fn command_name(cli: &Cli) -> &'static str {
    match &cli.command {
        Command::Eisenstein { .. } => "eisenstein",
        Command::Qm(QmCommand::Derive { .. }) => "qm derive",
        Command::Hodge(HodgeCommand::Check { .. }) => "hodge check",
        Command::Hodge(HodgeCommand::Connection { .. }) => "hodge connection",
        Command::Group(GroupCommand::Gamma(_)) => "group gamma",
        Command::Group(GroupCommand::G0(_)) => "group g0",
        Command::Elliptic(EllipticCommand::Periods { .. }) => "elliptic periods",
        Command::Elliptic(EllipticCommand::Roundtrip { .. }) => "elliptic roundtrip",
        Command::Siegel(SiegelCommand::Check { .. }) => "siegel check",
        Command::Siegel(SiegelCommand::Map { .. }) => "siegel map",
        Command::Mq(MqCommand::Instantons { .. }) => "mq instantons",
        Command::Mq(MqCommand::Yukawa { .. }) => "mq yukawa",
        Command::Mq(MqCommand::Tau1 { .. }) => "mq tau1",
        Command::Mq(MqCommand::VerifyTau { .. }) => "mq verify-tau",
    }
}

/// Runs the command, prints its report and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let name = command_name(cli);
    match dispatch(cli, name) {
        Ok(report) => {
            emit(&report);
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(CommandError::Core(err @ Error::Parse(_))) => {
            emit(&Report::failure(name, &err));
            eprintln!("{err}\n{SCHEMAS}");
            2
        }
        Err(err @ CommandError::Io { .. }) => {
            eprintln!("{err}");
            2
        }
        Err(CommandError::Core(err)) => {
            emit(&Report::failure(name, &err));
            1
        }
    }
}

fn dispatch(cli: &Cli, name: &str) -> Outcome {
    match &cli.command {
        Command::Eisenstein { k, terms, graded } => {
            let series = if *graded { eisenstein(*k, *terms)? } else { eisenstein_e(*k, *terms)? };
            Ok(Report::info(name, serde_json::to_value(series.to_json()).expect("series serializes")))
        }
        Command::Qm(QmCommand::Derive { poly, check_terms }) => qm_derive(name, poly, *check_terms),
        Command::Hodge(HodgeCommand::Check { frame, lattice, period }) => hodge_check(name, frame, lattice, *period),
        Command::Hodge(HodgeCommand::Connection { path, t, v }) => hodge_connection(name, path, t, v),
        Command::Group(GroupCommand::Gamma(args)) => {
            let a = MatrixJson::parse_integer(&read(&args.matrix)?)?;
            let frame = group_frame(args, a.nrows())?;
            Ok(Report::info(name, json!({ "dim": a.nrows() })).check("member", gamma_membership(&frame, &a)?))
        }
        Command::Group(GroupCommand::G0(args)) => {
            let g = MatrixJson::parse(&read(&args.matrix)?)?;
            let frame = group_frame(args, g.nrows())?;
            Ok(Report::info(name, json!({ "dim": g.nrows() })).check("member", g0_membership(&frame, &g)?))
        }
        Command::Elliptic(EllipticCommand::Periods { t1, t2, t3 }) => {
            let t = EllipticParameters::new(complex_arg(t1), complex_arg(t2), complex_arg(t3));
            let (per, diag) = periods_with_diagnostics(&t)?;
            let payload = json!({ "period_matrix": MatrixJson::from_matrix(per.matrix()), "diagnostics": diag });
            Ok(Report::info(name, payload).residual("legendre", diag.legendre_residual, LEGENDRE_GATE))
        }
        Command::Elliptic(EllipticCommand::Roundtrip { tau_re, tau_im, terms }) => {
            let r = inverse_roundtrip(Complex64::new(*tau_re, *tau_im), *terms)?;
            let err = r.j_relative_error;
            Ok(Report::info(name, to_value(&r)).residual("j_relative_error", err, ROUNDTRIP_TOLERANCE))
        }
        Command::Siegel(SiegelCommand::Check { file }) => {
            let b = SiegelBlocksJson::parse(&read(file)?)?;
            let r = riemann_check(&b);
            Ok(Report::info(name, to_value(&r))
                .residual("symmetry", r.symmetry_residual, RELATION_TOLERANCE)
                .residual("unimodular", r.unimodular_residual, RELATION_TOLERANCE)
                .check("positive", r.min_eigenvalue > 0.0)
                .check("pass", r.pass))
        }
        Command::Siegel(SiegelCommand::Map { file }) => {
            let b = SiegelBlocksJson::parse(&read(file)?)?;
            let x = to_siegel(&b)?;
            let r = siegel_point_check(&x);
            Ok(Report::info(name, json!({ "x": MatrixJson::from_matrix(&x), "check": r }))
                .residual("symmetry", r.symmetry_residual, SYMMETRY_TOLERANCE)
                .check("imaginary_part_positive", r.pass))
        }
        Command::Mq(MqCommand::Instantons { degree }) => {
            let y = yukawa(*degree)?;
            let n = instanton_numbers(&y, *degree)?;
            Ok(Report::info(name, json!({ "n": n.iter().map(|x| x.to_string()).collect::<Vec<_>>() })))
        }
        Command::Mq(MqCommand::Yukawa { terms }) => {
            Ok(Report::info(name, serde_json::to_value(yukawa(*terms)?.to_json()).expect("series serializes")))
        }
        Command::Mq(MqCommand::Tau1 { terms }) => {
            let y = yukawa(*terms)?;
            let t = tau1_series(&instanton_numbers(&y, *terms)?, *terms)?;
            let payload = json!({
                "q_part": t.q_part.to_json(),
                "polynomial": t.polynomial.iter().map(format_rational).collect::<Vec<_>>(),
                "polynomial_text": t.polynomial_string(),
            });
            Ok(Report::info(name, payload))
        }
        Command::Mq(MqCommand::VerifyTau { terms }) => {
            let matrix = verify_tau_matrix(cli.seed, cli.trials)?;
            let odes = verify_transversality_odes(*terms)?;
            let curve = verify_tau_curve(*terms, CURVE_POINT)?;
            let tol = DISPLAYED_CONNECTION_TOLERANCE;
            Ok(Report::info(name, json!({ "matrix": matrix, "odes": odes, "curve": curve }))
                .check("polarization_base_point", matrix.polarization_base_point)
                .check("polarization_random", matrix.polarization_exact == matrix.trials)
                .residual("connection", matrix.connection_error, tol)
                .residual("griffiths", matrix.griffiths_violation, tol)
                .check("yukawa_identity", odes.yukawa_matches)
                .check("tau2_ode", odes.tau2_matches)
                .residual("curve_p1", curve.p1_residual, 1e-9)
                .residual("curve_transversality", curve.transversality.max_violation, tol))
        }
    }
}

/// Writes the report to stdout; a closed pipe is not an error.
fn emit(report: &Report) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", report.to_json());
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn complex_arg(v: &[f64]) -> Complex64 {
    Complex64::new(v[0], v.get(1).copied().unwrap_or(0.0))
}

fn group_frame(args: &GroupArgs, n: usize) -> Result<HodgeFrame, CommandError> {
    match &args.frame {
        Some(path) => Ok(FrameJson::parse(&read(path)?)?),
        None if n > 0 && n.is_multiple_of(2) => Ok(HodgeFrame::weight_one(n / 2)),
        None => Err(Error::Parse(format!("no default frame for a {n}x{n} matrix; pass --frame")).into()),
    }
}

fn qm_derive(name: &str, poly: &str, check_terms: Option<usize>) -> Outcome {
    let p = parse_poly(poly)?;
    let d = p.ramanujan_derive();
    let payload = json!({
        "input": p.to_string(),
        "derivative": d.to_string(),
        "input_weight": p.weight(),
        "derivative_weight": d.weight(),
        "depth": d.depth(),
    });
    let report = Report::info(name, payload);
    Ok(match check_terms {
        Some(n) => {
            let basis = EisensteinBasis::new(n);
            let lhs = d.expand(&basis);
            let rhs = p.expand(&basis).theta_derivative().with_grade(0);
            report.check(format!("q d/dq through q^{n}"), lhs == rhs)
        }
        None => report,
    })
}

fn hodge_check(name: &str, frame: &Path, lattice: &Path, period: bool) -> Outcome {
    let frame = FrameJson::parse(&read(frame)?)?;
    let m = MatrixJson::parse(&read(lattice)?)?;
    let x = if period { PeriodMatrix::new(frame, m)?.lattice_point()? } else { LatticePoint::new(frame, m)? };
    let p1 = check_p1(&x);
    let p2 = check_p2(&x)?;
    let p3 = check_p3(&x)?;
    let payload = json!({ "p1": p1, "p2": p2, "p3": p3, "rcond": x.rcond() });
    Ok(Report::info(name, payload).residual("p1", p1.residual, p1.tolerance).check("p2", p2.pass).check("p3", p3.pass))
}

fn hodge_connection(name: &str, path: &str, t: &str, v: &str) -> Outcome {
    let path = builtin_path(path)?;
    let t = parse_complex_list(t)?;
    let v = parse_complex_list(v)?;
    let opts = ConnectionOptions::default();
    let a = connection_matrix(path.as_ref(), &t, &v, opts)?;
    let tr = transversality_check(path.as_ref(), &t, &v, opts)?;
    let f = f_ode_residual(path.as_ref(), &t, &v, opts)?;
    let g = g_ode_residual(path.as_ref(), &t, &v, opts)?;
    let payload = json!({ "connection": MatrixJson::from_matrix(&a), "transversality": tr });
    Ok(Report::info(name, payload)
        .residual("transversality", tr.max_violation, tr.tolerance)
        .residual("f_ode", f, ODE_TOLERANCE)
        .residual("g_ode", g, ODE_TOLERANCE))
}
