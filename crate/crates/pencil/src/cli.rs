//! Command-line front end.
//!
//! Every subcommand reads JSON pencil files (see [`crate::io`]), prints a
//! [`Report`] as text or JSON, and exits with `0` (success, all verdicts
//! pass), `2` (object constructed but verification failed) or `1` (error).

use crate::bounds::{check_all_bounds, BoundsReport};
use crate::feedback::place_feedback;
use crate::io::PencilFile;
use crate::placement::{self, PlacementResult, PlacementSpec};
use crate::rank_one::{self, RankOnePencil};
use crate::report::Report;
use crate::restricted;
use crate::scalar::{parse_complex, Tol};
use crate::spectral::{eig_structure, weierstrass};
use crate::{CVec, Error, Result};
use clap::{Parser, Subcommand};
use ndarray::Array1;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "pencil",
    version,
    about = "Spectral analysis of regular matrix pencils and rank-one eigenvalue placement"
)]
struct Cli {
    /// Relative SVD threshold for rank decisions.
    #[arg(long, global = true, default_value_t = Tol::default().rank)]
    tol_rank: f64,
    /// Clustering tolerance for grouping computed eigenvalues.
    #[arg(long, global = true, default_value_t = Tol::default().cluster)]
    tol_cluster: f64,
    /// Work over the reals: real canonical forms and real output vectors
    /// (requires real input data and conjugate-symmetric targets).
    #[arg(long, global = true)]
    real: bool,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized verification sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues, chain structure and canonical-form summary of a pencil.
    Analyze { pencil: PathBuf },
    /// Emit the canonical form: transformations S, T and blocks J, N.
    Wcf { pencil: PathBuf },
    /// Factor a rank-one pencil file into its structured form.
    Decompose { pencil: PathBuf },
    /// Construct a rank-one perturbation placing the target multiset.
    Place {
        pencil: PathBuf,
        /// Targets as `value:multiplicity` pairs, e.g. `1:1,-2+3i:2,inf:1`.
        #[arg(long)]
        targets: String,
    },
    /// Placement with fixed direction vectors u and v; only w is solved for.
    PlaceRestricted {
        pencil: PathBuf,
        /// Comma-separated complex entries of u.
        #[arg(long)]
        u: String,
        /// Comma-separated complex entries of v.
        #[arg(long)]
        v: String,
        #[arg(long)]
        targets: String,
    },
    /// State feedback for the descriptor system in the file (needs `b`).
    Feedback {
        system: PathBuf,
        #[arg(long)]
        targets: String,
    },
    /// Build a pencil and perturbation realizing a spectrum transition.
    Inverse {
        /// Spectrum of the base pencil, `value:multiplicity` pairs.
        #[arg(long)]
        before: String,
        /// Spectrum of the perturbed pencil, same total size.
        #[arg(long)]
        after: String,
    },
    /// Check the dimension inequalities for a pencil / rank-one pair.
    VerifyBounds { pencil: PathBuf, rank1: PathBuf },
}

/// Parse `--u`/`--v` style vectors: comma-separated complex literals.
fn parse_cvec(text: &str, n: usize, name: &str) -> Result<CVec> {
    let entries: Vec<_> = text.split(',').map(str::trim).collect();
    if entries.len() != n {
        return Err(Error::Parse(format!(
            "{name} has {} entries, pencil size is {n}",
            entries.len()
        )));
    }
    let mut v: CVec = Array1::zeros(n);
    for (i, s) in entries.iter().enumerate() {
        v[i] = parse_complex(s)
            .ok_or_else(|| Error::Parse(format!("{name}[{i}]: cannot parse {s:?}")))?;
    }
    Ok(v)
}

fn describe_placement(report: &mut Report, result: &PlacementResult) {
    match &result.perturbation {
        RankOnePencil::LeftVector { u, v, w } => {
            report.push_note("perturbation form: left, P(s) = (s u + v) w^*");
            report.push_vector("u", u);
            report.push_vector("v", v);
            report.push_vector("w", w);
        }
        RankOnePencil::RightVector { w, u, v } => {
            report.push_note("perturbation form: right, P(s) = w (s u + v)^*");
            report.push_vector("w", w);
            report.push_vector("u", u);
            report.push_vector("v", v);
        }
        RankOnePencil::Degenerate { alpha, beta, u, w } => {
            report.push_note("perturbation form: degenerate, P(s) = (alpha s - beta) u w^*");
            report.push_scalar("alpha", *alpha);
            report.push_scalar("beta", *beta);
            report.push_vector("u", u);
            report.push_vector("w", w);
        }
    }
    let (f, g) = result.perturbation.matrices();
    report.push_matrix("F", &f);
    report.push_matrix("G", &g);
    if let Some(alpha) = result.alpha {
        report.push_scalar("alpha", alpha);
    }
    if let Some(beta) = result.beta {
        report.push_scalar("beta", beta);
    }
    report.push_scalar("gamma", result.gamma);
    report.set_spectrum(&result.achieved);
    report.push_residual("det-identity", result.det_residual);
}

/// Fold a placement outcome into the report: verification failures become a
/// failing verdict (exit 2), everything else stays an error (exit 1).
fn fold_placement(
    report: &mut Report,
    outcome: Result<PlacementResult>,
) -> Result<Option<PlacementResult>> {
    match outcome {
        Ok(result) => {
            describe_placement(report, &result);
            report.push_verdict("placement", true, "");
            Ok(Some(result))
        }
        Err(Error::VerificationFailed { detail, result }) => {
            describe_placement(report, &result);
            report.push_verdict("placement", false, detail);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn bounds_to_report(report: &mut Report, bounds: &BoundsReport) {
    for rec in &bounds.records {
        let name = match rec.lambda {
            Some(l) => format!("{} at {l}", rec.what),
            None => rec.what.clone(),
        };
        let detail = format!(
            "before {}, after {}, slack {}",
            rec.before, rec.after, rec.slack
        );
        report.push_verdict(&name, rec.satisfied, detail);
    }
}

fn execute(cli: &Cli, tol: &Tol, echo: String) -> Result<Report> {
    let mut report = Report::new(echo, tol);
    match &cli.command {
        Command::Analyze { pencil } => {
            let p = PencilFile::load(pencil)?.pencil()?;
            let sd = eig_structure(&p, tol)?;
            report.set_spectrum(&sd);
            report.push_note(format!(
                "minimal polynomial degree {}",
                sd.min_poly.degree()
            ));
            let wf = weierstrass(&p, cli.real, tol)?;
            report.push_note(format!(
                "canonical form: finite block size {} of {}, cond estimate {:.3e}",
                wf.r,
                p.n(),
                wf.cond
            ));
            report.push_residual("canonical-form", wf.residual);
        }
        Command::Wcf { pencil } => {
            let p = PencilFile::load(pencil)?.pencil()?;
            let wf = weierstrass(&p, cli.real, tol)?;
            report.push_matrix("S", &wf.s_mat);
            report.push_matrix("T", &wf.t_mat);
            report.push_matrix("J", &wf.j_mat);
            report.push_matrix("N", &wf.n_mat);
            report.push_note(format!("finite block size r = {}", wf.r));
            report.push_residual("canonical-form", wf.residual);
            report.push_verdict(
                "canonical-form residual",
                wf.residual <= 1e-8 * (1.0 + wf.cond),
                format!("residual {:.3e}, cond {:.3e}", wf.residual, wf.cond),
            );
        }
        Command::Decompose { pencil } => {
            let file = PencilFile::load(pencil)?;
            let p = file.pencil()?;
            let p1 = rank_one::decompose(&p.e, &p.a)?;
            let m = p1.materialize();
            let scale = p
                .e
                .iter()
                .chain(p.a.iter())
                .map(|z| z.norm())
                .fold(0.0, f64::max)
                .max(1.0);
            let res = p
                .e
                .iter()
                .zip(m.e.iter())
                .chain(p.a.iter().zip(m.a.iter()))
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
                / scale;
            match &p1 {
                RankOnePencil::LeftVector { u, v, w } => {
                    report.push_note("form: left, P(s) = (s u + v) w^*");
                    report.push_vector("u", u);
                    report.push_vector("v", v);
                    report.push_vector("w", w);
                }
                RankOnePencil::RightVector { w, u, v } => {
                    report.push_note("form: right, P(s) = w (s u + v)^*");
                    report.push_vector("w", w);
                    report.push_vector("u", u);
                    report.push_vector("v", v);
                }
                RankOnePencil::Degenerate { alpha, beta, u, w } => {
                    report.push_note("form: degenerate, P(s) = (alpha s - beta) u w^*");
                    report.push_scalar("alpha", *alpha);
                    report.push_scalar("beta", *beta);
                    report.push_vector("u", u);
                    report.push_vector("w", w);
                }
            }
            report.push_residual("factorization", res);
            report.push_verdict(
                "factorization",
                res <= 1e-12,
                format!("relative reconstruction error {res:.3e}"),
            );
        }
        Command::Place { pencil, targets } => {
            let p = PencilFile::load(pencil)?.pencil()?;
            let spec = PlacementSpec::parse(targets)?;
            fold_placement(&mut report, placement::place(&p, &spec, cli.real, tol))?;
        }
        Command::PlaceRestricted {
            pencil,
            u,
            v,
            targets,
        } => {
            let p = PencilFile::load(pencil)?.pencil()?;
            let uv = parse_cvec(u, p.n(), "u")?;
            let vv = parse_cvec(v, p.n(), "v")?;
            let spec = PlacementSpec::parse(targets)?;
            let profile = restricted::pole_profile(&p, &uv, &vv, tol)?;
            report.push_note(format!(
                "restricted capacity M(A, u, v) = {}",
                profile.total
            ));
            fold_placement(
                &mut report,
                restricted::solve_w(&p, &uv, &vv, &spec, cli.real, tol),
            )?;
        }
        Command::Feedback { system, targets } => {
            let sys = PencilFile::load(system)?.system(tol)?;
            let spec = PlacementSpec::parse(targets)?;
            let outcome = place_feedback(&sys, &spec, tol);
            match outcome {
                Ok((f, result)) => {
                    report.push_vector("f", &f);
                    describe_placement(&mut report, &result);
                    report.push_verdict("placement", true, "");
                }
                Err(Error::VerificationFailed { detail, result }) => {
                    if let RankOnePencil::LeftVector { w, .. } = &result.perturbation {
                        report.push_vector("f", w);
                    }
                    describe_placement(&mut report, &result);
                    report.push_verdict("placement", false, detail);
                }
                Err(e) => return Err(e),
            }
        }
        Command::Inverse { before, after } => {
            let spec_before = PlacementSpec::parse(before)?;
            let spec_after = PlacementSpec::parse(after)?;
            let (a, p1) = placement::inverse_construct(&spec_before, &spec_after, tol)?;
            report.push_matrix("E", &a.e);
            report.push_matrix("A", &a.a);
            let (f, g) = p1.matrices();
            report.push_matrix("F", &f);
            report.push_matrix("G", &g);
            let sum = p1.add_to(&a);
            let sd_before = eig_structure(&a, tol)?;
            let sd_after = eig_structure(&sum, tol)?;
            report.set_spectrum(&sd_after);
            let ok_before = placement::spectrum_matches(
                spec_before.targets(),
                &sd_before,
                placement::MATCH_TOL,
            );
            let ok_after = placement::spectrum_matches(
                spec_after.targets(),
                &sd_after,
                placement::MATCH_TOL,
            );
            report.push_verdict(
                "base spectrum",
                ok_before.is_ok(),
                ok_before.err().unwrap_or_default(),
            );
            report.push_verdict(
                "perturbed spectrum",
                ok_after.is_ok(),
                ok_after.err().unwrap_or_default(),
            );
        }
        Command::VerifyBounds { pencil, rank1 } => {
            let a = PencilFile::load(pencil)?.pencil()?;
            let pf = PencilFile::load(rank1)?.pencil()?;
            let p1 = rank_one::decompose(&pf.e, &pf.a)?;
            let bounds = check_all_bounds(&a, &p1, tol)?;
            bounds_to_report(&mut report, &bounds);
        }
    }
    Ok(report)
}

/// Run the CLI, returning the exit code and the full output text.
pub fn run_captured<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    let tol = Tol {
        rank: cli.tol_rank,
        cluster: cli.tol_cluster,
        seed: cli.seed,
        ..Tol::default()
    };
    let echo = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli, &tol, echo) {
        Ok(report) => {
            let text = if cli.json {
                report.to_json()
            } else {
                report.render()
            };
            let code = match report.overall_pass() {
                Some(false) => 2,
                _ => 0,
            };
            (code, text)
        }
        Err(e) => (1, format!("error: {e}")),
    }
}

/// Entry point used by the binary: prints the report and returns the code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let (code, text) = run_captured(argv);
    println!("{text}");
    code
}
