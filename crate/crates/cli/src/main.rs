use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode as ProcessExit;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use hfcosmetic_core::pipeline::prepare;
use hfcosmetic_core::report::{fmt_rational, to_json, BatchReport, FunnelRecord, InvariantsRecord, KnotReport, SurgeryRecord};
use hfcosmetic_core::{
    analyze, batch_funnel, candidate_q, curve_profile, d_invariant, d_invariants, graded_surgery, parse_complex,
    render_curves, validate, BatchError, DiagramSpec, ExitCode, Overlay, SlopePair, UVZeroComplex,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hfcosmetic", version, about = "Cosmetic surgery obstructions from UV=0 knot Floer complexes")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check gradings and d^2 = 0.
    Validate { file: PathBuf },
    /// Classical invariants and the curve profile.
    Invariants { file: PathBuf },
    /// Graded comparison of +P/Q and -P/Q surgery.
    Surgery {
        file: PathBuf,
        #[arg(long)]
        slope: SlopePair,
    },
    /// Run every obstruction and report a verdict.
    Check { file: PathBuf },
    /// Check every top-level .cfk file in a directory.
    Batch { dir: PathBuf },
    /// Correction terms d(L(P,Q), I).
    #[command(allow_negative_numbers = true)]
    Lens { p: i64, q: i64, i: Option<i64> },
    /// Draw the curve invariant as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        slope: Option<SlopePair>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code: code as u8, message: message.into() }
    }

    fn from<E: ExitCode + std::fmt::Display>(e: E) -> Self {
        Failure::new(e.exit_code(), e.to_string())
    }
}

type Output = Result<String, Failure>;

fn load(path: &Path) -> Result<UVZeroComplex, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    parse_complex(&text).map_err(|e| Failure::new(e.exit_code(), format!("{}: {e}", path.display())))
}

fn cmd_validate(file: &Path, json: bool) -> Output {
    let c = load(file)?;
    let violations: Vec<String> = validate(&c).iter().map(ToString::to_string).collect();
    let text = if json {
        to_json(&json!({ "name": c.name, "valid": violations.is_empty(), "violations": violations }))
    } else if violations.is_empty() {
        format!("{}: valid ({} generators, {} arrows)\n", c.name, c.generators.len(), c.arrows.len())
    } else {
        violations.iter().map(|v| format!("{}: {v}\n", c.name)).collect()
    };
    if violations.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::new(2, format!("{}: {} violation(s)", file.display(), violations.len())))
    }
}

fn invariants_record(c: &UVZeroComplex) -> Result<InvariantsRecord, Failure> {
    let (reduced, decomp, inv) = prepare(c).map_err(Failure::from)?;
    let profile = curve_profile(&decomp, &inv, &reduced).map_err(Failure::from)?;
    let q_star = candidate_q(&profile).ok();
    Ok(InvariantsRecord::new(&inv, Some(&profile), q_star.as_ref()))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_invariants(file: &Path, json: bool) -> Output {
    let c = load(file)?;
    let r = invariants_record(&c)?;
    if json {
        return Ok(to_json(&json!({ "name": c.name, "invariants": r })));
    }
    let mut out = String::new();
    writeln!(out, "name: {}", c.name).unwrap();
    writeln!(out, "genus: {}\nthickness: {}\ntau: {}\nepsilon: {}\nm: {}", r.genus, r.thickness, r.tau, r.epsilon, r.m)
        .unwrap();
    writeln!(out, "alexander: {}", join(&r.alexander)).unwrap();
    writeln!(out, "alexander''(1): {}", r.alex_dd1).unwrap();
    match &r.n {
        Some(n) => writeln!(out, "n: {}", join(n.iter().map(|(s, c)| format!("{s}:{c}")))).unwrap(),
        None => writeln!(out, "n: unavailable (epsilon != 0)").unwrap(),
    }
    match &r.e {
        Some(e) => writeln!(out, "e: {}", join(e.0.iter().map(|((s, d), c)| format!("({s},{d}):{c}")))).unwrap(),
        None => writeln!(out, "e: unavailable").unwrap(),
    }
    writeln!(out, "q*: {}", r.q_star.as_deref().unwrap_or("undefined")).unwrap();
    Ok(out)
}

fn cmd_surgery(file: &Path, slope: SlopePair, json: bool) -> Output {
    let c = load(file)?;
    let (reduced, decomp, inv) = prepare(&c).map_err(Failure::from)?;
    let profile = curve_profile(&decomp, &inv, &reduced).map_err(Failure::from)?;
    let g = graded_surgery(&profile, slope).map_err(|e| Failure::new(e.exit_code(), format!("{}: {e}", file.display())))?;
    let record = SurgeryRecord::new(&c.name, &g);
    if json {
        return Ok(to_json(&record));
    }
    let mut out = String::new();
    let verdict = match &record.sigma {
        Some(s) => format!("match, sigma {s:?}"),
        None => "no match".into(),
    };
    writeln!(out, "{} at +-{slope}: total rank {}, {verdict}", c.name, record.total_rank).unwrap();
    for s in &record.spin_c {
        writeln!(out, "spin^c {}: d+ = {}, d- = {}", s.index, s.d_plus, s.d_minus).unwrap();
        writeln!(out, "  +: {}", join(&s.multiset_plus)).unwrap();
        writeln!(out, "  -: {}", join(&s.multiset_minus)).unwrap();
    }
    Ok(out)
}

fn pairs_text(pairs: &[[i64; 2]]) -> String {
    pairs.iter().map(|[p, q]| format!("+-{p}/{q}")).collect::<Vec<_>>().join(", ")
}

fn cmd_check(file: &Path, json: bool) -> Output {
    let c = load(file)?;
    let a = analyze(&c).map_err(Failure::from)?;
    let r = KnotReport::from_analysis(&a);
    if json {
        return Ok(to_json(&r));
    }
    let mut out = format!("{}: {}\n", r.name, r.verdict);
    for g in &r.gates {
        writeln!(out, "  {:<20} {}  {}", g.name, if g.passed { "pass" } else { "FAIL" }, g.detail).unwrap();
    }
    if !r.surviving_pairs.is_empty() {
        writeln!(out, "surviving pairs: {}", pairs_text(&r.surviving_pairs)).unwrap();
    }
    Ok(out)
}

fn cmd_batch(dir: &Path, json: bool) -> Output {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "cfk"))
        .collect();
    files.sort();
    let inputs = files
        .iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(p).map_err(|e| BatchError { name: name.clone(), message: e.to_string() })?;
            parse_complex(&text).map_err(|e| BatchError { name, message: e.to_string() })
        })
        .collect();
    let (analyses, funnel) = batch_funnel(inputs);
    let report = BatchReport { reports: analyses.iter().map(KnotReport::from_analysis).collect(), funnel: FunnelRecord::from(&funnel) };
    if json {
        return Ok(to_json(&report));
    }
    let mut out = String::new();
    for r in &report.reports {
        let pairs = if r.surviving_pairs.is_empty() { String::new() } else { format!(" [{}]", pairs_text(&r.surviving_pairs)) };
        let stop = r.gates.iter().find(|g| !g.passed).map(|g| format!(" at {}", g.name)).unwrap_or_default();
        writeln!(out, "{}: {}{stop}{pairs}", r.name, r.verdict).unwrap();
    }
    for e in &report.funnel.errors {
        writeln!(out, "{}: error: {}", e.name, e.message).unwrap();
    }
    let f = &report.funnel;
    writeln!(
        out,
        "funnel: {} knots, {} pass epsilon, {} pass genus, {} pass Boyer-Lines, {} with candidates",
        f.total, f.pass_epsilon, f.pass_genus, f.pass_boyer_lines, f.with_candidates
    )
    .unwrap();
    writeln!(out, "indistinguishable: {}", f.hf_indistinguishable.join(" ")).unwrap();
    writeln!(out, "inconclusive: {}", f.inconclusive.join(" ")).unwrap();
    writeln!(out, "errors: {}", f.errors.len()).unwrap();
    Ok(out)
}

fn cmd_lens(p: i64, q: i64, i: Option<i64>, json: bool) -> Output {
    let values: Vec<(i64, String)> = match i {
        Some(i) => vec![(i, fmt_rational(&d_invariant(p, q, i).map_err(Failure::from)?))],
        None => d_invariants(p, q).map_err(Failure::from)?.iter().enumerate().map(|(i, d)| (i as i64, fmt_rational(d))).collect(),
    };
    if json {
        let d: Vec<_> = values.iter().map(|(i, v)| json!({ "i": i, "d": v })).collect();
        return Ok(to_json(&json!({ "p": p, "q": q, "values": d })));
    }
    Ok(values.iter().map(|(_, v)| format!("{v}\n")).collect())
}

fn cmd_render(file: &Path, slope: Option<SlopePair>, output: &Path, json: bool) -> Output {
    let c = load(file)?;
    let (reduced, decomp, inv) = prepare(&c).map_err(Failure::from)?;
    let profile = curve_profile(&decomp, &inv, &reduced).map_err(Failure::from)?;
    let overlay = slope.map(|slope| Overlay { slope, negative: false });
    let svg = render_curves(&DiagramSpec { profile, overlay }).map_err(|e| Failure::new(e.exit_code(), format!("{}: {e}", file.display())))?;
    std::fs::write(output, svg).map_err(|e| Failure::new(1, format!("cannot write {}: {e}", output.display())))?;
    if json {
        return Ok(to_json(&json!({ "name": c.name, "output": output.display().to_string() })));
    }
    Ok(format!("wrote {}\n", output.display()))
}

fn main() -> ProcessExit {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ProcessExit::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("usage error"));
            return ProcessExit::from(1);
        }
    };
    let json = cli.json;
    let result = match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(file, json),
        Cmd::Invariants { file } => cmd_invariants(file, json),
        Cmd::Surgery { file, slope } => cmd_surgery(file, *slope, json),
        Cmd::Check { file } => cmd_check(file, json),
        Cmd::Batch { dir } => cmd_batch(dir, json),
        Cmd::Lens { p, q, i } => cmd_lens(*p, *q, *i, json),
        Cmd::Render { file, slope, output } => cmd_render(file, *slope, output, json),
    };
    match result {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ProcessExit::from(3);
            }
            ProcessExit::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message.replace('\n', " "));
            ProcessExit::from(f.code)
        }
    }
}
