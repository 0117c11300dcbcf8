use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gmpres::complex::{minimal_resolution, BettiTable, FreeComplex};
use gmpres::document::{IdealDocument, InstanceDocument};
use gmpres::families::{
    lex_segment_stable, path_ideal_complete_multipartite, path_ideal_instance, power_of_maximal, random_instance,
    squarefree_veronese, veronese_type, RandomBounds,
};
use gmpres::gmpi::{gmpi_projdim, resolve, GmpiInstance};
use gmpres::monomial::MonomialIdeal;
use gmpres::verify::{
    check_d_squared, check_euler, check_taylor_permutations, run_suite, verify_instance, CheckReport, InstanceReport,
    Status, VerifyOptions, SUITE_SEEDS,
};

#[derive(Parser)]
#[command(name = "gmpres", version, about = "Minimal free resolutions of generalized mixed product ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Clone)]
struct Flags {
    /// Run the checks and exit with status 1 if any fails
    #[arg(long, global = true)]
    check: bool,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest ideal resolved through its Taylor complex
    #[arg(long, global = true)]
    max_taylor: Option<usize>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal resolution and Betti table of a monomial ideal
    Resolve { path: PathBuf },
    /// Build L and Tot(D) for an instance document
    Gmpi { path: PathBuf },
    /// Emit a family ideal or an instance document
    Family(FamilyArgs),
    /// Run the pinned suite of random instances
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyTag {
    PathIdeal,
    SquarefreeVeronese,
    PowerOfMaximal,
    VeroneseType,
    LexSegment,
    RandomInstance,
}

#[derive(Args)]
struct FamilyArgs {
    tag: FamilyTag,
    /// Part sizes of the complete multipartite graph
    #[arg(long, value_delimiter = ',')]
    parts: Vec<usize>,
    /// Number of vertices on a path, or the degree of a Veronese-type ideal
    #[arg(long)]
    t: Option<usize>,
    /// Number of variables
    #[arg(long)]
    m: Option<usize>,
    /// Degree
    #[arg(long)]
    d: Option<u32>,
    /// Exponent caps of a Veronese-type ideal
    #[arg(long, value_delimiter = ',')]
    caps: Vec<u32>,
    /// Length of a lex segment
    #[arg(long)]
    count: Option<usize>,
    /// Emit the instance document that produces the path ideal
    #[arg(long)]
    instance: bool,
}

enum Failure {
    Check,
    Input(String),
}

impl From<gmpres::Error> for Failure {
    fn from(e: gmpres::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match &cli.command {
        Command::Resolve { path } => cmd_resolve(path, &cli.flags, &mut out),
        Command::Gmpi { path } => cmd_gmpi(path, &cli.flags, &mut out),
        Command::Family(args) => cmd_family(args, &cli.flags, &mut out),
        Command::Verify => cmd_verify(&cli.flags, &mut out),
    };
    if let Err(e) = emit(&cli.flags, &out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(flags: &Flags, out: &str) -> std::io::Result<()> {
    match &flags.out {
        Some(path) => fs::write(path, out),
        None => std::io::stdout().write_all(out.as_bytes()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn options(flags: &Flags, doc_cap: Option<usize>) -> VerifyOptions {
    let mut opts = VerifyOptions {
        seed: flags.seed.unwrap_or(0),
        ..VerifyOptions::default()
    };
    if let Some(cap) = flags.max_taylor.or(doc_cap) {
        opts.max_taylor = cap;
    }
    opts
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn verdict(checks: &[CheckReport]) -> Result<(), Failure> {
    if checks.iter().any(CheckReport::failed) {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn overall(checks: &[CheckReport]) -> &'static str {
    if checks.iter().any(CheckReport::failed) {
        "FAIL"
    } else {
        "PASS"
    }
}

fn gens_text(ideal: &MonomialIdeal) -> Vec<String> {
    ideal.gens().iter().map(|g| ideal.context().format_monomial(g)).collect()
}

fn cmd_resolve(path: &Path, flags: &Flags, out: &mut String) -> Result<(), Failure> {
    let ideal = IdealDocument::from_json(&read(path)?)?.to_ideal()?;
    let opts = options(flags, None);
    let res = minimal_resolution(&ideal, opts.max_taylor)?;
    let table = BettiTable::from_complex(&res)?;
    let checks = if flags.check {
        resolve_checks(&ideal, &res, &opts)?
    } else {
        Vec::new()
    };
    if flags.json {
        out.push_str(&pretty(&json!({
            "ideal": gens_text(&ideal),
            "ranks": res.ranks(),
            "betti": table,
            "regularity": table.regularity(true),
            "projective_dimension": table.projective_dimension(),
            "checks": checks,
        })));
    } else {
        out.push_str(&format!("I = {}\n", ideal.format()));
        out.push_str(&format!("ranks {:?}\n", res.ranks()));
        out.push_str(&table.format_triangle());
        out.push_str(&format!(
            "reg I = {}\npd S/I = {}\n",
            table.regularity(true).unwrap_or(0),
            table.projective_dimension()
        ));
        for c in &checks {
            out.push_str(&format!("{c}\n"));
        }
        if flags.check {
            out.push_str(&format!("{}\n", overall(&checks)));
        }
    }
    verdict(&checks)
}

fn resolve_checks(ideal: &MonomialIdeal, res: &FreeComplex, opts: &VerifyOptions) -> Result<Vec<CheckReport>, Failure> {
    let exact = gmpres::complex::exactness_check(res, ideal)?;
    Ok(vec![
        CheckReport::new(
            "exactness",
            if exact.is_exact() { Status::Pass } else { Status::Fail },
            match exact.witness() {
                None => "resolves S/I".to_string(),
                Some(w) => format!("homology at position {}, degree {}", w.position, w.degree),
            },
            json!(exact),
        ),
        check_d_squared(&[("resolution", res)]),
        check_taylor_permutations(ideal, opts.permutations, opts.seed, opts.max_taylor)?,
        check_euler(&[("resolution", res)], ideal, opts.euler_samples, opts.seed),
    ])
}

fn load_instance(path: &Path, flags: &Flags) -> Result<(GmpiInstance, Option<usize>), Failure> {
    let mut doc = InstanceDocument::from_json(&read(path)?)?;
    let doc_cap = doc.options.max_taylor;
    if let Some(cap) = flags.max_taylor {
        doc.options.max_taylor = Some(cap);
    }
    Ok((doc.to_instance()?, doc_cap))
}

fn cmd_gmpi(path: &Path, flags: &Flags, out: &mut String) -> Result<(), Failure> {
    let (inst, doc_cap) = load_instance(path, flags)?;
    let opts = options(flags, doc_cap);
    let res = resolve(&inst)?;
    let table = res.betti()?;
    let pd = gmpi_projdim(&res)?;
    let report = if flags.check {
        Some(verify_instance(&inst, &opts)?)
    } else {
        None
    };
    let checks = report.as_ref().map_or(&[][..], |r| r.checks.as_slice());
    let reg = table.regularity(true).unwrap_or(0);
    if flags.json {
        out.push_str(&pretty(&json!({
            "ideal": gens_text(inst.ideal()),
            "ranks": res.total().ranks(),
            "betti": table,
            "regularity": reg,
            "projective_dimension": table.projective_dimension(),
            "projective_dimension_formula": pd.formula,
            "hypothesis": res.hypothesis_holds(),
            "checks": checks,
            "status": report.as_ref().map(|r| if r.passed() { "PASS" } else { "FAIL" }),
        })));
    } else {
        out.push_str(&format!("I = {}\n", inst.inducing().format()));
        out.push_str(&format!("L = {}\n", inst.ideal().format()));
        out.push_str(&format!("{} generators, Tot(D) ranks {:?}\n", inst.ideal().len(), res.total().ranks()));
        out.push_str(&table.format_triangle());
        out.push_str(&format!("reg L = {reg}\n"));
        out.push_str(&format!("pd T/L = {} (formula {})\n", table.projective_dimension(), pd.formula));
        if !res.hypothesis_holds() {
            let blocks: Vec<String> = res
                .blocks()
                .non_linear()
                .iter()
                .map(|&(l, d)| format!("{}:{d}", inst.context().block_name(l)))
                .collect();
            out.push_str(&format!("non-linear substitutions: {}\n", blocks.join(", ")));
        }
        for c in checks {
            out.push_str(&format!("{c}\n"));
        }
        if flags.check {
            out.push_str(&format!("{}\n", overall(checks)));
        }
    }
    verdict(checks)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--{flag} is required for this family")))
}

fn cmd_family(args: &FamilyArgs, flags: &Flags, out: &mut String) -> Result<(), Failure> {
    let instance: Option<GmpiInstance> = match args.tag {
        FamilyTag::RandomInstance => Some(random_instance(flags.seed.unwrap_or(0), &RandomBounds::default())?),
        FamilyTag::PathIdeal if args.instance => Some(path_ideal_instance(&args.parts, need(args.t, "t")?)?),
        _ => None,
    };
    if let Some(inst) = instance {
        let doc = InstanceDocument::from_instance(&inst);
        out.push_str(&doc.to_json()?);
        out.push('\n');
        return Ok(());
    }
    let ideal = match args.tag {
        FamilyTag::PathIdeal => path_ideal_complete_multipartite(&args.parts, need(args.t, "t")?)?,
        FamilyTag::SquarefreeVeronese => squarefree_veronese(need(args.m, "m")?, need(args.d, "d")?)?,
        FamilyTag::PowerOfMaximal => power_of_maximal(need(args.m, "m")?, need(args.d, "d")?)?,
        FamilyTag::VeroneseType => {
            if args.caps.is_empty() {
                return Err(Failure::Input("--caps is required for this family".into()));
            }
            veronese_type(need(args.t, "t")? as u32, &args.caps)?
        }
        FamilyTag::LexSegment => lex_segment_stable(need(args.m, "m")?, need(args.d, "d")?, need(args.count, "count")?)?,
        FamilyTag::RandomInstance => unreachable!("handled above"),
    };
    if flags.json {
        out.push_str(&IdealDocument::from_ideal(&ideal).to_json()?);
        out.push('\n');
    } else {
        out.push_str(&format!("{} generators\n", ideal.len()));
        for g in gens_text(&ideal) {
            out.push_str(&g);
            out.push('\n');
        }
    }
    Ok(())
}

fn cmd_verify(flags: &Flags, out: &mut String) -> Result<(), Failure> {
    let opts = options(flags, None);
    let seeds: Vec<u64> = match flags.seed {
        Some(s) => vec![s],
        None => SUITE_SEEDS.to_vec(),
    };
    let reports: Vec<InstanceReport> = run_suite(&seeds, &RandomBounds::default(), &opts)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if flags.json {
        out.push_str(&pretty(&json!(reports)));
    } else {
        for r in &reports {
            let seed = r.seed.unwrap_or_default();
            let status = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("seed {seed}: {status}, |G(L)| = {}\n", r.generators));
            for c in r.checks.iter().filter(|c| c.failed() || flags.check) {
                out.push_str(&format!("  {c}\n"));
            }
        }
        out.push_str(&format!("{}/{} instances pass\n", reports.len() - failed, reports.len()));
    }
    if failed > 0 {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}
