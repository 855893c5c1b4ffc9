//! Command-line front end. `run` returns the process exit code: 0 when every
//! check passes, 1 when a check fails, 2 on usage errors.

use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::burnside::Variant;
use crate::checks::{self, CheckResult};
use crate::dl_classify::enumerate_structures;
use crate::ghm::{self, build_complex, e2_page, postnikov_chart, ChartOptions, CoKoszulComplex};
use crate::steenrod::Convention;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
    Grid,
}

/// Stem and filtration window `a..bxc..d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub stems: (i32, i32),
    pub filtrations: (u32, u32),
}

impl FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("window {s:?} is not of the form a..bxc..d");
        let (st, fi) = s.split_once('x').ok_or_else(bad)?;
        let (a, b) = st.split_once("..").ok_or_else(bad)?;
        let (c, d) = fi.split_once("..").ok_or_else(bad)?;
        let w = Window {
            stems: (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            filtrations: (c.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        };
        if w.stems.0 > w.stems.1 || w.filtrations.0 > w.filtrations.1 {
            return Err(format!("window {s:?} is empty"));
        }
        Ok(w)
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("range {s:?} is not of the form a..b");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let r = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if r.0 > r.1 {
        return Err(format!("range {s:?} is empty"));
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum VariantArg {
    M,
    L,
    Both,
}

#[derive(Parser, Debug)]
#[command(name = "gmcalc", version, about = "Strict units, Dyer-Lashof structures and unit complexes, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ChartArgs {
    /// Work in F2[u]/u^{m+1}.
    #[arg(long, default_value_t = 5)]
    pub truncation: u32,
    /// Stem and filtration window, `a..bxc..d` (default -1..2m x 0..2).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Extra room in the |I| < 2n + slack rule.
    #[arg(long, default_value_t = 0)]
    pub slack: u32,
}

#[derive(Args, Debug, Clone)]
pub struct PrimeArgs {
    /// Restrict to one prime.
    #[arg(long)]
    pub prime: Option<u64>,
    /// p-adic precision N (computations are mod p^N).
    #[arg(long, default_value_t = 10)]
    pub precision: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// E1 page of the co-Koszul complex for F2[u]/u^{m+1}.
    Chart(ChartArgs),
    /// Postnikov-regraded chart for g_1/u^m (m a power of two).
    Postnikov {
        #[arg(long, default_value_t = 8)]
        truncation: u32,
    },
    /// Dimensions of pi_* of strict units, n = 1..n-max.
    Table {
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long, default_value_t = 0)]
        slack: u32,
    },
    /// ker Sq^{8k+1} = im Sq^{4k+1} up to degree 8k+1, and the Sq^{4i,2i,i} classes.
    Conjecture {
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[arg(long, default_value_t = 8)]
        i_max: u32,
    },
    /// Homology of ker Sq^{2n+1}/im Sq^{n+1} at the listed classes.
    Probe,
    /// All Dyer-Lashof structures on F2[u] up to a cutoff.
    ClassifyDl {
        #[arg(long, default_value_t = 64)]
        cutoff: u64,
        /// Write the eliminated candidates as JSON here.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
    /// Binomial parity identities.
    Identity {
        #[arg(long, default_value_t = 40)]
        n_max: i64,
    },
    /// Homology of the complexes of Burnside-ring units.
    BurnsideCheck {
        #[command(flatten)]
        primes: PrimeArgs,
        /// Precision used at p = 2.
        #[arg(long, default_value_t = 8)]
        precision_two: u32,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantArg,
    },
    /// Representation-ring K-theory complexes.
    KtheoryCheck {
        #[command(flatten)]
        primes: PrimeArgs,
    },
    /// j-theory of the Steinberg summands.
    JtheoryCheck {
        #[command(flatten)]
        primes: PrimeArgs,
        /// Loop degrees `a..b`.
        #[arg(long, value_parser = parse_range, default_value = "0..50")]
        i_range: (u64, u64),
    },
    /// Every property suite and check; the CI entry point.
    Selftest {
        /// Random cases per prime for the Burnside suites.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

fn primes_or(arg: Option<u64>, default: &[u64]) -> Result<Vec<u64>, String> {
    match arg {
        None => Ok(default.to_vec()),
        Some(p) if default.contains(&p) => Ok(vec![p]),
        Some(p) => Err(format!("prime {p} not supported here (choose from {default:?})")),
    }
}

fn header(out: &mut dyn Write, cmd: &str, config: &serde_json::Value) -> std::io::Result<()> {
    writeln!(out, "# gmcalc {} {cmd}", env!("CARGO_PKG_VERSION"))?;
    if let Some(obj) = config.as_object() {
        let kv: Vec<String> = obj.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", kv.join(" "))?;
    }
    Ok(())
}

fn with_format(mut config: serde_json::Value, format: Format) -> serde_json::Value {
    if let Some(obj) = config.as_object_mut() {
        obj.entry("format").or_insert(json!(format));
    }
    config
}

fn emit(out: &mut dyn Write, format: Format, cmd: &str, config: serde_json::Value, results: &[CheckResult], extra: Option<serde_json::Value>) -> std::io::Result<i32> {
    let config = with_format(config, format);
    let pass = results.iter().all(|r| r.pass);
    match format {
        Format::Json => {
            let mut v = json!({ "command": cmd, "config": config, "pass": pass, "checks": results });
            if let Some(e) = extra {
                v["data"] = e;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
        }
        _ => {
            header(out, cmd, &config)?;
            for r in results {
                write!(out, "{r}")?;
            }
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn chart_rows(c: &CoKoszulComplex) -> Vec<(i32, u32, String, String)> {
    c.window_classes().into_iter().map(|i| (c.classes[i].stem, c.classes[i].filtration, c.classes[i].to_string(), c.d1_text(i))).collect()
}

fn write_chart(out: &mut dyn Write, format: Format, cmd: &str, config: serde_json::Value, c: &CoKoszulComplex, checks: &[CheckResult]) -> std::io::Result<i32> {
    let rows = chart_rows(c);
    let page = e2_page(c).ok();
    let config = with_format(config, format);
    match format {
        Format::Tsv => {
            header(out, cmd, &config)?;
            writeln!(out, "stem\tfiltration\tclass\td1_target")?;
            for (s, f, cl, d) in &rows {
                writeln!(out, "{s}\t{f}\t{cl}\t{d}")?;
            }
            for r in checks {
                for line in r.to_string().lines() {
                    writeln!(out, "# {line}")?;
                }
            }
            Ok(if checks.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Format::Json => {
            let classes: Vec<_> = rows.iter().map(|(s, f, cl, d)| json!({ "stem": s, "filtration": f, "class": cl, "d1_target": d })).collect();
            let e2: Vec<_> = page.iter().flatten().filter(|e| e.dim > 0).collect();
            emit(out, format, cmd, config, checks, Some(json!({ "classes": classes, "e2": e2 })))
        }
        Format::Grid => {
            header(out, cmd, &config)?;
            let o = &c.options;
            let cells = |s: i32, f: u32| -> Vec<&str> { rows.iter().filter(|r| r.0 == s && r.1 == f).map(|r| r.2.as_str()).collect() };
            let width = rows.iter().map(|r| r.2.len()).max().unwrap_or(1).max(3);
            for f in (o.filtration_min..=o.filtration_max).rev() {
                let height = (o.stem_min..=o.stem_max).map(|s| cells(s, f).len()).max().unwrap_or(0).max(1);
                for line in 0..height {
                    if line == 0 {
                        write!(out, "{f:>3} |")?;
                    } else {
                        write!(out, "    |")?;
                    }
                    for s in o.stem_min..=o.stem_max {
                        let c = cells(s, f);
                        let x = c.get(line).copied().unwrap_or(if line == 0 { "." } else { "" });
                        write!(out, " {x:<width$}")?;
                    }
                    writeln!(out)?;
                }
                writeln!(out, "    |")?;
            }
            write!(out, "    +")?;
            for s in o.stem_min..=o.stem_max {
                write!(out, " {s:<width$}")?;
            }
            writeln!(out)?;
            for r in checks {
                write!(out, "{r}")?;
            }
            Ok(if checks.iter().all(|r| r.pass) { 0 } else { 1 })
        }
    }
}

fn range(r: (u64, u64)) -> RangeInclusive<u64> {
    r.0..=r.1
}

fn failure(out: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(out, "error: {msg}");
    2
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::io::Result<i32> {
    let fmt = cli.format;
    let seed = cli.seed;
    match cli.command {
        Command::Chart(a) => {
            let w = a.window.unwrap_or(Window { stems: (-1, 2 * a.truncation as i32), filtrations: (0, 2) });
            let opts = ChartOptions::truncated(a.truncation).window(w.stems, w.filtrations).slack(a.slack);
            let config = json!({ "truncation": a.truncation, "window": format!("{}..{}x{}..{}", w.stems.0, w.stems.1, w.filtrations.0, w.filtrations.1), "slack": a.slack, "format": fmt });
            let c = match build_complex(&opts) {
                Ok(c) => c,
                Err(e) => return Ok(failure(out, e)),
            };
            // Only the default m = 5 window is compared with the published picture.
            let compare = a.truncation == 5 && a.slack == 0 && w == Window { stems: (-1, 10), filtrations: (0, 2) };
            let check = checks::chart_check(&opts, compare).expect("complex already built");
            write_chart(out, fmt, "chart", config, &c, &[check])
        }
        Command::Postnikov { truncation } => {
            let c = match postnikov_chart(truncation, -1, Convention::Sq0IsOne) {
                Ok(c) => c,
                Err(e) => return Ok(failure(out, e)),
            };
            let check = CheckResult::new("postnikov", "d1 squares to zero", vec![checks::Item::flag("d1^2 = 0", c.check_d1_squared().is_ok())]);
            write_chart(out, fmt, "postnikov", json!({ "truncation": truncation, "format": fmt }), &c, &[check])
        }
        Command::Table { n_max, slack } => {
            if n_max == 0 {
                return Ok(failure(out, "--n-max must be positive"));
            }
            let t = match ghm::homotopy_table(n_max, &ChartOptions::truncated(1).slack(slack)) {
                Ok(t) => t,
                Err(e) => return Ok(failure(out, e)),
            };
            let check = checks::table_check(n_max, slack).expect("table already built");
            let config = json!({ "n_max": n_max, "slack": slack, "format": fmt });
            match fmt {
                Format::Json => emit(out, fmt, "table", config, &[check], Some(serde_json::to_value(&t).expect("serializable"))),
                _ => {
                    header(out, "table", &config)?;
                    writeln!(out, "n\tstem\tdim")?;
                    for col in &t {
                        for (i, d) in col.dims.iter().enumerate() {
                            writeln!(out, "{}\t{i}\t{d}", col.n)?;
                        }
                    }
                    write!(out, "{check}")?;
                    Ok(if check.pass { 0 } else { 1 })
                }
            }
        }
        Command::Conjecture { k_max, i_max } => {
            let r = [checks::conjecture_check(k_max), checks::sq4i_check(i_max)];
            emit(out, fmt, "conjecture", json!({ "k_max": k_max, "i_max": i_max }), &r, None)
        }
        Command::Probe => match checks::probe_check() {
            Ok(r) => emit(out, fmt, "probe", json!({}), &[r], None),
            Err(e) => Ok(failure(out, e)),
        },
        Command::ClassifyDl { cutoff, report } => {
            if cutoff < 4 {
                return Ok(failure(out, "--cutoff must be at least 4"));
            }
            let rep = enumerate_structures(cutoff);
            if let Some(path) = report {
                let body = serde_json::to_string_pretty(&json!({ "cutoff": cutoff, "eliminations": rep.eliminations, "survivor_constraints": rep.survivor_constraints })).expect("serializable");
                if let Err(e) = std::fs::write(&path, body) {
                    return Ok(failure(out, format!("cannot write {}: {e}", path.display())));
                }
            }
            let mut cutoffs: Vec<u64> = [8, 16, 32, 64].into_iter().filter(|&c| c < cutoff).collect();
            cutoffs.push(cutoff);
            let check = checks::classify_check(&cutoffs);
            let config = json!({ "cutoff": cutoff, "lookahead": rep.lookahead });
            match fmt {
                Format::Json => emit(out, fmt, "classify-dl", config, &[check], Some(json!({ "survivors": rep.survivors, "patterns": rep.patterns, "instances_checked": rep.instances_checked, "instances_skipped": rep.instances_skipped }))),
                _ => {
                    header(out, "classify-dl", &config)?;
                    writeln!(out, "pattern\tconstants")?;
                    for (s, p) in rep.survivors.iter().zip(&rep.patterns) {
                        writeln!(out, "{}\t{s}", p.unwrap_or("unnamed"))?;
                    }
                    write!(out, "{check}")?;
                    Ok(if check.pass { 0 } else { 1 })
                }
            }
        }
        Command::Identity { n_max } => {
            let r = checks::identity_check(n_max, n_max, 5 * n_max);
            emit(out, fmt, "identity", json!({ "n_max": n_max, "q_max": n_max, "q_binom_max": 5 * n_max }), &[r], None)
        }
        Command::BurnsideCheck { primes, precision_two, variant } => {
            let ps = match primes_or(primes.prime, &[2, 3, 5, 7]) {
                Ok(p) => p,
                Err(e) => return Ok(failure(out, e)),
            };
            let vs = match variant {
                VariantArg::M => vec![Variant::M],
                VariantArg::L => vec![Variant::L],
                VariantArg::Both => vec![Variant::M, Variant::L],
            };
            let config = json!({ "primes": ps, "precision": primes.precision, "precision_two": precision_two, "variant": variant, "seed": seed });
            match checks::burnside_check(&ps, primes.precision, precision_two, &vs, seed) {
                Ok(r) => emit(out, fmt, "burnside-check", config, &[r], None),
                Err(e) => Ok(failure(out, e)),
            }
        }
        Command::KtheoryCheck { primes } => {
            let ps = match primes_or(primes.prime, &[3, 5, 7]) {
                Ok(p) => p,
                Err(e) => return Ok(failure(out, e)),
            };
            let r = checks::ktheory_check(&ps, primes.precision);
            emit(out, fmt, "ktheory-check", json!({ "primes": ps, "precision": primes.precision }), &[r], None)
        }
        Command::JtheoryCheck { primes, i_range } => {
            let ps = match primes_or(primes.prime, &[3, 5]) {
                Ok(p) => p,
                Err(e) => return Ok(failure(out, e)),
            };
            let config = json!({ "primes": ps, "precision": primes.precision, "i_range": format!("{}..{}", i_range.0, i_range.1) });
            match checks::jtheory_check(&ps, primes.precision, range(i_range)) {
                Ok(r) => emit(out, fmt, "jtheory-check", config, &[r], None),
                Err(e) => Ok(failure(out, e)),
            }
        }
        Command::Selftest { cases } => {
            let r = vec![checks::selftest(seed, cases)];
            emit(out, fmt, "selftest", json!({ "seed": seed, "cases": cases }), &r, None)
        }
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
