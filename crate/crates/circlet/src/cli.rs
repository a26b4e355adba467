//! Command-line front end. Every subcommand prints line-oriented,
//! machine-parseable output that is byte-identical across runs for fixed
//! inputs and seed.
//!
//! Exit codes: 0 all checks pass / no violation; 1 violation or invalid
//! certificate; 2 usage or parse error; 3 budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::base::{project_weights, FractionalPoint, Instance, LengthProfile};
use crate::caps::Caps;
use crate::contraction::{contract_and_report, detect_structures};
use crate::error::{Error, Result};
use crate::facet::certify_facet;
use crate::ineq::{
    check_circlet, circlet_strength, crown_strength, separate, tt_coeffs, CircletCoefficients,
    SeparationMode,
};
use crate::io::{format_rational, parse_input, parse_rational, Parsed};
use crate::oracle::{
    buratti_condition, edge_length_feasible, el_points, min_tour_cost, visit_tours, LengthMultiset,
    PathKind,
};
use crate::subtour::{eulerian_counterexample, gap_ratio, lambda_point, subtour_feasible, Witness};
use crate::Rational;

#[derive(Parser)]
#[command(
    name = "circlet",
    version,
    about = "Exact checks for circlet inequalities on circulant TSP instances"
)]
struct Cli {
    /// Cap on worker threads for parallel scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    #[default]
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, PartialEq, Eq)]
enum KindArg {
    #[default]
    Path,
    Cycle,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the circlet and tight-triangular coefficient vectors.
    Coeffs { n: usize },
    /// Check the circlet inequality for a tour or point file.
    Check { file: PathBuf },
    /// Verify validity with the Held-Karp oracle (exhaustively under the cap).
    Verify { n: usize },
    /// Certify the facet rank of the tight-tour family.
    Facet { n: usize },
    /// Compare circlet and crown strengths.
    Strength { n: usize },
    /// Detect window structures in a tour and contract each one.
    Contract {
        file: PathBuf,
        /// Also print the per-edge cost table of each contraction.
        #[arg(long)]
        verbose: bool,
    },
    /// Search vertex labelings for a violated circlet inequality.
    Separate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Random restarts in heuristic mode.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate the edge-length profiles of all tours.
    El { n: usize },
    /// Check the Buratti divisor condition and brute-force feasibility.
    Buratti {
        n: usize,
        lengths: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        kind: KindArg,
    },
    /// Build a lambda point and test subtour feasibility and the inequality.
    Subtour {
        n: usize,
        /// Weight on length-1 edges, as p/q; defaults to 1/2.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Report the integrality-gap datum for a power-of-two instance.
    Gap { n: usize },
}

/// Runs the CLI on the given arguments, returning the exit code and the full
/// textual report.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.to_string());
        }
    };
    let caps = Caps::from_env();
    match dispatch(cli, &caps) {
        Ok((code, out)) => (code, out),
        Err(e) => {
            let code = match e {
                Error::Parse { .. } => 2,
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            };
            (code, format!("error: {e}\n"))
        }
    }
}

fn read_file(path: &PathBuf) -> Result<Parsed> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_input(&text)
}

fn profile_of(parsed: &Parsed) -> Result<(Instance, LengthProfile)> {
    match parsed {
        Parsed::Tour(inst, t) => Ok((*inst, crate::base::length_profile(inst, t)?)),
        Parsed::Point(inst, p) => Ok((*inst, project_weights(inst, p)?)),
        Parsed::Instance(_) => Err(Error::Domain(
            "file contains no tour or point to check".into(),
        )),
    }
}

fn point_of(parsed: Parsed) -> Result<(Instance, FractionalPoint)> {
    match parsed {
        Parsed::Point(inst, p) => Ok((inst, p)),
        Parsed::Tour(inst, t) => Ok((inst, FractionalPoint::tour_indicator(&inst, &t)?)),
        Parsed::Instance(_) => Err(Error::Domain(
            "file contains no tour or point to separate".into(),
        )),
    }
}

fn join_i64(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch(cli: Cli, caps: &Caps) -> Result<(i32, String)> {
    let threads = cli.threads.max(1);
    let mut out = String::new();
    match cli.cmd {
        Cmd::Coeffs { n } => {
            let inst = Instance::new(n)?;
            let c = CircletCoefficients::new(&inst)?;
            let f = tt_coeffs(&inst)?;
            writeln!(out, "c: {}", join_i64(c.values())).unwrap();
            writeln!(out, "rhs: {}", c.rhs()).unwrap();
            writeln!(out, "f: {}", join_i64(f.values())).unwrap();
            writeln!(out, "tt_rhs: {}", f.rhs()).unwrap();
            Ok((0, out))
        }
        Cmd::Check { file } => {
            let parsed = read_file(&file)?;
            let (inst, profile) = profile_of(&parsed)?;
            let coeffs = CircletCoefficients::new(&inst)?;
            let value = coeffs.evaluate(&profile)?;
            let chk = check_circlet(&inst, &profile)?;
            writeln!(
                out,
                "check value={} rhs={} satisfied={} slack={}",
                format_rational(&value),
                coeffs.rhs(),
                chk.satisfied,
                format_rational(&chk.slack)
            )
            .unwrap();
            Ok((if chk.satisfied { 0 } else { 1 }, out))
        }
        Cmd::Verify { n } => {
            let inst = Instance::new(n)?;
            let coeffs = CircletCoefficients::new(&inst)?;
            let costs: Vec<Rational> = coeffs
                .values()
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect();
            let min = min_tour_cost(&inst, &costs, caps)?;
            let rhs = coeffs.rhs();
            let valid = min >= Rational::from_integer(rhs.into());
            writeln!(
                out,
                "min={} rhs={} valid={}",
                format_rational(&min),
                rhs,
                valid
            )
            .unwrap();
            if n <= caps.enumeration {
                let mut ex_min = i64::MAX;
                let mut tight = 0u64;
                visit_tours(&inst, caps, |order| {
                    let mut counts = vec![0u64; n / 2];
                    for i in 0..n {
                        let (u, v) = (order[i], order[(i + 1) % n]);
                        let diff = u.abs_diff(v);
                        counts[diff.min(n - diff) - 1] += 1;
                    }
                    let val = coeffs.evaluate_counts(&counts);
                    if val < ex_min {
                        ex_min = val;
                    }
                    if val == rhs {
                        tight += 1;
                    }
                })?;
                writeln!(out, "exhaustive_min={ex_min} tight_tours={tight}").unwrap();
            }
            Ok((if valid { 0 } else { 1 }, out))
        }
        Cmd::Facet { n } => {
            let inst = Instance::new(n)?;
            let cert = certify_facet(&inst, caps)?;
            writeln!(out, "{cert}").unwrap();
            Ok((if cert.valid { 0 } else { 1 }, out))
        }
        Cmd::Strength { n } => {
            let inst = Instance::new(n)?;
            let circlet = circlet_strength(&inst)?;
            write!(out, "strength n={n} circlet={}", format_rational(&circlet)).unwrap();
            if n >= 8 {
                let crown = crown_strength(&inst)?;
                write!(out, " crown={}", format_rational(&crown)).unwrap();
            }
            out.push('\n');
            Ok((0, out))
        }
        Cmd::Contract { file, verbose } => {
            let parsed = read_file(&file)?;
            let Parsed::Tour(_, tour) = parsed else {
                return Err(Error::Domain("contract needs a tour file".into()));
            };
            let hits = detect_structures(&tour)?;
            if hits.is_empty() {
                writeln!(out, "no structures").unwrap();
                return Ok((0, out));
            }
            let mut all_ok = true;
            for hit in hits {
                match contract_and_report(&tour, &hit) {
                    Ok(report) => {
                        writeln!(out, "{}", report.summary_line()).unwrap();
                        if verbose {
                            for (e, old, new) in &report.per_edge {
                                writeln!(out, "  edge {e} old={old} new={new}").unwrap();
                            }
                        }
                        if report.aggregate < 4 {
                            all_ok = false;
                        }
                    }
                    Err(Error::NotContractible(_)) => {
                        writeln!(
                            out,
                            "contract {} u={} j={} k={} non-contractible",
                            hit.kind, hit.u, hit.j, hit.k
                        )
                        .unwrap();
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((if all_ok { 0 } else { 1 }, out))
        }
        Cmd::Separate {
            file,
            mode,
            budget,
            seed,
        } => {
            let (inst, point) = point_of(read_file(&file)?)?;
            let mode = match mode {
                ModeArg::Exhaustive => SeparationMode::Exhaustive,
                ModeArg::Heuristic => SeparationMode::Heuristic,
            };
            let res = separate(&inst, &point, mode, budget, seed, threads, caps)?;
            let rhs = CircletCoefficients::new(&inst)?.rhs();
            let mode_name = match res.mode {
                SeparationMode::Exhaustive => "exhaustive",
                SeparationMode::Heuristic => "heuristic",
            };
            writeln!(
                out,
                "separate mode={mode_name} value={} rhs={} violation={}",
                format_rational(&res.value),
                rhs,
                format_rational(&res.violation)
            )
            .unwrap();
            let labels: Vec<String> = res.labeling.iter().map(|v| v.to_string()).collect();
            writeln!(out, "labeling: {}", labels.join(" ")).unwrap();
            let violated = res.violation > Rational::from_integer(0.into());
            Ok((if violated { 1 } else { 0 }, out))
        }
        Cmd::El { n } => {
            let inst = Instance::new(n)?;
            let points = el_points(&inst, caps)?;
            writeln!(out, "el n={n} count={}", points.len()).unwrap();
            for p in points {
                let vals: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                writeln!(out, "t: {}", vals.join(" ")).unwrap();
            }
            Ok((0, out))
        }
        Cmd::Buratti { n, lengths, kind } => {
            let inst = Instance::new(n)?;
            let multiset = LengthMultiset::new(&inst, &lengths)?;
            let mut ok = true;
            match kind {
                KindArg::Path => {
                    let cond = buratti_condition(&inst, &multiset)?;
                    match cond.violated_q {
                        Some(q) => {
                            writeln!(out, "buratti n={n} condition=false violated_q={q}").unwrap()
                        }
                        None => writeln!(out, "buratti n={n} condition=true").unwrap(),
                    }
                    ok &= cond.holds;
                    if n <= caps.edge_length {
                        let feasible =
                            edge_length_feasible(&inst, &multiset, PathKind::Path, caps)?;
                        writeln!(out, "feasible={feasible}").unwrap();
                        ok &= feasible;
                    }
                }
                KindArg::Cycle => {
                    let feasible = edge_length_feasible(&inst, &multiset, PathKind::Cycle, caps)?;
                    writeln!(out, "buratti n={n} kind=cycle feasible={feasible}").unwrap();
                    ok &= feasible;
                }
            }
            Ok((if ok { 0 } else { 1 }, out))
        }
        Cmd::Subtour { n, lambda } => {
            let inst = Instance::new(n)?;
            let lam = match &lambda {
                None => Rational::new(1.into(), 2.into()),
                Some(s) => parse_rational(s)
                    .ok_or_else(|| Error::Domain(format!("`{s}` is not a rational p/q")))?,
            };
            let lp = lambda_point(&inst, &lam)?;
            let chk = subtour_feasible(&inst, &lp.point, caps)?;
            writeln!(
                out,
                "subtour n={n} lambda={} box={} feasible={}",
                format_rational(&lam),
                lp.box_feasible,
                chk.feasible
            )
            .unwrap();
            if let Some(w) = &chk.witness {
                match w {
                    Witness::Box { edge, weight } => writeln!(
                        out,
                        "witness: box edge={edge} weight={}",
                        format_rational(weight)
                    )
                    .unwrap(),
                    Witness::Degree { vertex, degree } => writeln!(
                        out,
                        "witness: degree vertex={vertex} degree={}",
                        format_rational(degree)
                    )
                    .unwrap(),
                    Witness::Cut { side, weight } => {
                        let side: Vec<String> = side.iter().map(|v| v.to_string()).collect();
                        writeln!(
                            out,
                            "witness: cut side={} weight={}",
                            side.join(","),
                            format_rational(weight)
                        )
                        .unwrap()
                    }
                }
            }
            let profile = project_weights(&inst, &lp.point)?;
            let coeffs = CircletCoefficients::new(&inst)?;
            let value = coeffs.evaluate(&profile)?;
            let circ = check_circlet(&inst, &profile)?;
            writeln!(
                out,
                "circlet value={} rhs={} satisfied={} slack={}",
                format_rational(&value),
                coeffs.rhs(),
                circ.satisfied,
                format_rational(&circ.slack)
            )
            .unwrap();
            let ok = chk.feasible && circ.satisfied;
            Ok((if ok { 0 } else { 1 }, out))
        }
        Cmd::Gap { n } => {
            let inst = Instance::new(n)?;
            let g = gap_ratio(&inst, caps)?;
            writeln!(
                out,
                "gap n={n} tour_opt={} lp_value={} ratio={}",
                format_rational(&g.tour_opt),
                format_rational(&g.lp_value),
                format_rational(&g.ratio)
            )
            .unwrap();
            let e = eulerian_counterexample(&inst)?;
            let cost = e.cost(&crate::subtour::gap_instance(&inst)?.costs)?;
            writeln!(
                out,
                "euler cost={} degrees_even={} connected={}",
                format_rational(&cost),
                e.all_degrees_even(),
                e.is_connected()
            )
            .unwrap();
            Ok((0, out))
        }
    }
}
