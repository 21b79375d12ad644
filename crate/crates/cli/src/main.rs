use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stone_pairing::fo::{
    count_satisfying_with, stone_pairing_classical_with, stone_pairing_gamma_with, type_table, FinStructure,
    Formula, FormulaFile, Signature,
};
use stone_pairing::gamma::{gamma, GammaValue, Grid, UnitRational};
use stone_pairing::limits::{ladder, sequence_report, Generator, ReportOptions, DEFAULT_THRESHOLD};
use stone_pairing::measure::{check_gamma, lift_gamma, lift_iota, pushforward, MeasureFile};
use stone_pairing::plogic::{
    check_soundness, default_grid, entails, filter_from_measure, measure_family, measure_from_filter_on,
    p_satisfies, parse_pformula, Axiom, Entailment, PFormula,
};
use stone_pairing::{ClassicalMeasure, FinDistLattice, GammaMeasure, LatticeError, LatticeHom, Verdict};

/// Exact flavored-value arithmetic, lattices, measures, Stone pairings and
/// threshold logic.
#[derive(Parser)]
#[command(name = "stonepair", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flavored values.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Finite distributive lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Measures on lattices.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Stone pairings of formulas against structures.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Convergence of pairing sequences.
    #[command(subcommand)]
    Limits(LimitsCmd),
    /// Threshold logic over a lattice.
    #[command(subcommand)]
    Plogic(PlogicCmd),
}

#[derive(Subcommand)]
enum GammaCmd {
    /// Evaluate `x - y`, `x + y` or a single value, e.g. "3/4^o - 1/2^o".
    Calc {
        expr: String,
        /// Use the dual minus for `-`.
        #[arg(long)]
        dual: bool,
    },
    /// List the grid I_n.
    Grid {
        n: u64,
        /// Include the minus points.
        #[arg(long)]
        flavored: bool,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Elements, covers and join-irreducibles.
    Show { file: PathBuf },
    /// Prime filters, one per join-irreducible generator.
    Primes { file: PathBuf },
    /// Validate the order as a bounded distributive lattice.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Validate a flavored measure file.
    Check { file: PathBuf },
    /// Collapse flavors, or with `--iota` embed a classical table.
    Lift {
        file: PathBuf,
        #[arg(long)]
        iota: bool,
    },
    /// Restrict along the inclusion of the sublattice generated by
    /// `--generators`, or along the map in `--hom`.
    Push {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with = "hom")]
        generators: Vec<String>,
        /// JSON `{"source": <lattice>, "map": {"<source elem>": "<target elem>"}}`.
        #[arg(long)]
        hom: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FormulaArgs {
    /// File of formulas, one per line; `name: formula` defines a name.
    #[arg(long)]
    formulas: Option<PathBuf>,
    /// Formula text; may use names from `--formulas`.
    #[arg(long)]
    formula: Vec<String>,
    /// Number of free variable slots.
    #[arg(long, default_value_t = 1)]
    vars: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum PairCmd {
    /// Pairing of each formula with the structure.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        #[command(flatten)]
        f: FormulaArgs,
    },
    /// Types of the formula list: pattern, count and mass.
    Table {
        #[arg(long)]
        structure: PathBuf,
        #[command(flatten)]
        f: FormulaArgs,
    },
}

#[derive(Subcommand)]
enum LimitsCmd {
    /// CSV of pairings along a generated sequence with both verdicts.
    Report {
        /// `ladder`, `chain` or `file:a.json,b.json,...`.
        #[arg(long)]
        generator: String,
        /// `first..last`, inclusive.
        #[arg(long)]
        range: String,
        #[command(flatten)]
        f: FormulaArgs,
        #[arg(long, default_value_t = 20)]
        window: usize,
        /// Defaults to 1/window.
        #[arg(long)]
        eps: Option<UnitRational>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    lattice: PathBuf,
    /// Threshold grid denominator; defaults to the lcm of the formulas'.
    #[arg(long)]
    grid: Option<u64>,
    /// Extra random measures beyond the exhaustive grid ones.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum PlogicCmd {
    /// Whether a measure satisfies a formula.
    Sat {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Check axiom instances against a measure family.
    Sound {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Restrict to one axiom, e.g. L4.
        #[arg(long)]
        axiom: Option<Axiom>,
    },
    /// Entailment relative to a measure family.
    Entail {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
    },
    /// Encode a measure as a threshold filter and decode it back.
    Roundtrip {
        #[arg(long)]
        measure: PathBuf,
    },
}

/// Failure with its exit status: 1 for domain errors, 2 for usage and input
/// errors.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

type Res<T> = Result<T, Failure>;

fn domain(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, err: err.into() }
}

fn input(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: err.into() }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)
}

fn json(path: &Path) -> Res<serde_json::Value> {
    serde_json::from_str(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(input)
}

fn lattice_from_value(v: &serde_json::Value, base: &Path) -> Res<Arc<FinDistLattice>> {
    match v {
        serde_json::Value::String(p) => load_lattice(&base.join(p)),
        other => lattice_from_text(&other.to_string()),
    }
}

fn lattice_from_text(text: &str) -> Res<Arc<FinDistLattice>> {
    match FinDistLattice::from_json(text) {
        Ok(d) => Ok(Arc::new(d)),
        Err(e @ LatticeError::Format(_)) => Err(input(e)),
        Err(e) => Err(domain(e)),
    }
}

fn load_lattice(path: &Path) -> Res<Arc<FinDistLattice>> {
    json(path)?;
    lattice_from_text(&read(path)?).map_err(|f| Failure {
        err: f.err.context(format!("in {}", path.display())),
        ..f
    })
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn load_measure_file(path: &Path) -> Res<(Arc<FinDistLattice>, MeasureFile)> {
    let file: MeasureFile = serde_json::from_value(json(path)?)
        .with_context(|| format!("measure file {}", path.display()))
        .map_err(input)?;
    let d = lattice_from_value(&file.lattice, &dir_of(path))?;
    Ok((d, file))
}

fn parse_values(d: &FinDistLattice, file: &MeasureFile) -> Res<Vec<GammaValue>> {
    for k in file.values.keys() {
        d.element(k).map_err(input)?;
    }
    d.labels()
        .iter()
        .map(|l| {
            let text = file.values.get(l).ok_or_else(|| input(anyhow!("no value for `{l}`")))?;
            text.parse::<GammaValue>()
                .with_context(|| format!("value for `{l}`"))
                .map_err(input)
        })
        .collect()
}

fn load_measure(path: &Path) -> Res<GammaMeasure> {
    let (d, file) = load_measure_file(path)?;
    let values = parse_values(&d, &file)?;
    GammaMeasure::new(d, values).map_err(domain)
}

fn measure_json(mu: &GammaMeasure) -> String {
    let file = MeasureFile {
        lattice: serde_json::to_value(mu.lattice().to_spec()).expect("plain data"),
        values: mu.to_named(),
    };
    serde_json::to_string_pretty(&file).expect("plain data") + "\n"
}

fn load_structure(path: &Path) -> Res<FinStructure> {
    json(path)?;
    FinStructure::from_json(&read(path)?)
        .with_context(|| format!("structure {}", path.display()))
        .map_err(input)
}

/// Labelled formulas: every `--formula`, or else every line of the file.
fn formulas(args: &FormulaArgs, sig: &Signature) -> Res<Vec<(String, Formula)>> {
    let file = match &args.formulas {
        Some(p) => FormulaFile::parse(&read(p)?, sig)
            .with_context(|| format!("formula file {}", p.display()))
            .map_err(input)?,
        None => FormulaFile::default(),
    };
    let out: Vec<(String, Formula)> = if args.formula.is_empty() {
        file.entries
            .iter()
            .map(|(name, text, f)| (name.clone().unwrap_or_else(|| text.clone()), f.clone()))
            .collect()
    } else {
        args.formula
            .iter()
            .map(|t| {
                let f = file.lookup(t, sig).with_context(|| format!("formula `{t}`")).map_err(input)?;
                Ok((t.clone(), f))
            })
            .collect::<Res<_>>()?
    };
    if out.is_empty() {
        return Err(input(anyhow!("no formulas given; use --formula or --formulas")));
    }
    Ok(out)
}

fn gamma_calc(expr: &str, dual: bool) -> Res<String> {
    let parse = |s: &str| s.trim().parse::<GammaValue>().with_context(|| format!("value `{}`", s.trim())).map_err(input);
    // Split at a binary operator: one surrounded by spaces, or the last one
    // not part of a `^-` flavor tag.
    let op = expr
        .char_indices()
        .rfind(|&(i, c)| (c == '-' || c == '+') && i > 0 && !expr[..i].ends_with('^'));
    let out = match op {
        None => parse(expr)?,
        Some((i, c)) => {
            let (x, y) = (parse(&expr[..i])?, parse(&expr[i + 1..])?);
            match (c, dual) {
                ('+', _) => x.plus(&y),
                ('-', false) => x.mip(&y),
                _ => x.miss(&y),
            }
            .map_err(domain)?
        }
    };
    Ok(format!("{out}\n"))
}

fn lattice_show(d: &FinDistLattice) -> String {
    let ji: Vec<&str> = d.join_irreducible_ids().into_iter().map(|j| d.label(j)).collect();
    format!("{d}\njoin-irreducibles: {}\n", ji.join(", "))
}

fn lattice_primes(d: &FinDistLattice) -> Res<String> {
    let mut out = String::new();
    for p in d.prime_filters().map_err(domain)? {
        let members: Vec<&str> = p.members().ones().map(|a| d.label(a)).collect();
        writeln!(out, "up {}: {{{}}}", d.label(p.generator()), members.join(", ")).unwrap();
    }
    Ok(out)
}

fn measure_table(d: &FinDistLattice, values: impl Fn(usize) -> String) -> String {
    d.elements().map(|a| format!("{}\t{}\n", d.label(a), values(a))).collect()
}

fn measure_push(path: &Path, generators: &[String], hom: Option<&Path>) -> Res<String> {
    let mu = load_measure(path)?;
    let d = mu.lattice().clone();
    let h = match hom {
        Some(hp) => {
            let v = json(hp)?;
            let src = v.get("source").ok_or_else(|| input(anyhow!("hom file lacks `source`")))?;
            let source = lattice_from_value(src, &dir_of(hp))?;
            let map: std::collections::BTreeMap<String, String> =
                serde_json::from_value(v.get("map").cloned().unwrap_or_default())
                    .context("hom file `map`")
                    .map_err(input)?;
            let ids = source
                .labels()
                .iter()
                .map(|l| {
                    let t = map.get(l).ok_or_else(|| input(anyhow!("hom map lacks `{l}`")))?;
                    d.element(t).map_err(input)
                })
                .collect::<Res<Vec<_>>>()?;
            LatticeHom::new_checked(source, d.clone(), ids).map_err(domain)?
        }
        None => {
            let ids = generators.iter().map(|g| d.element(g).map_err(input)).collect::<Res<Vec<_>>>()?;
            d.sublattice_closure(&ids).1
        }
    };
    let r = pushforward(&h, &mu).map_err(domain)?;
    Ok(measure_json(&r))
}

fn pair_eval(structure: &Path, f: &FormulaArgs) -> Res<String> {
    let a = load_structure(structure)?;
    let mut out = String::new();
    writeln!(out, "# structure size={} vars={}", a.size(), f.vars).unwrap();
    for (label, phi) in formulas(f, a.signature())? {
        let count = count_satisfying_with(&a, &phi, f.vars, f.workers).map_err(domain)?;
        let c = stone_pairing_classical_with(&a, &phi, f.vars, f.workers).map_err(domain)?;
        let g = stone_pairing_gamma_with(&a, &phi, f.vars, f.workers).map_err(domain)?;
        writeln!(out, "{label}\tcount {count}\tclassical {c}\tgamma {g}").unwrap();
    }
    Ok(out)
}

fn pair_table(structure: &Path, f: &FormulaArgs) -> Res<String> {
    let a = load_structure(structure)?;
    let fs = formulas(f, a.signature())?;
    let list: Vec<Formula> = fs.iter().map(|(_, phi)| phi.clone()).collect();
    let t = type_table(&a, &list, f.vars).map_err(domain)?;
    let mut out = String::new();
    for (i, (label, _)) in fs.iter().enumerate() {
        writeln!(out, "# column {i}: {label}").unwrap();
    }
    writeln!(out, "# assignments {}", t.total).unwrap();
    for c in &t.classes {
        writeln!(out, "{}\t{}\t{}", c.pattern_string(), c.count, c.mass).unwrap();
    }
    Ok(out)
}

fn parse_range(text: &str) -> Res<(usize, usize)> {
    let bad = || input(anyhow!("range must look like 1..40, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn generator(text: &str) -> Res<Generator> {
    match text {
        "ladder" => Ok(Generator::Ladder),
        "chain" => Ok(Generator::Chain),
        _ => match text.strip_prefix("file:") {
            Some(list) => Ok(Generator::Files(
                list.split(',').map(|p| load_structure(Path::new(p.trim()))).collect::<Res<_>>()?,
            )),
            None => Err(input(anyhow!("unknown generator `{text}`; use ladder, chain or file:<paths>"))),
        },
    }
}

fn limits_report(
    gen: &str,
    range: &str,
    f: &FormulaArgs,
    window: usize,
    eps: Option<UnitRational>,
    threshold: usize,
) -> Res<String> {
    let (first, last) = parse_range(range)?;
    let g = generator(gen)?;
    let sig = match &g {
        Generator::Files(v) => v.first().map(|a| a.signature().clone()).unwrap_or_default(),
        _ => ladder(1).expect("ladder(1) exists").signature().clone(),
    };
    let fs = formulas(f, &sig)?;
    let opts = ReportOptions {
        window,
        eps,
        threshold,
        workers: f.workers,
    };
    let rep = sequence_report(&g, first, last, &fs, f.vars, &opts).map_err(domain)?;
    rep.to_csv_string().map_err(domain)
}

fn family(fam: &FamilyArgs, fs: &[&PFormula]) -> Res<(Arc<FinDistLattice>, Grid, Vec<GammaMeasure>)> {
    let d = load_lattice(&fam.lattice)?;
    let grid = match fam.grid {
        Some(n) => Grid::new(n).map_err(input)?,
        None => default_grid(fs.iter().copied()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(fam.seed);
    let members = measure_family(&d, &grid, fam.random, &[2, 3, 4], &mut rng).map_err(domain)?;
    Ok((d, grid, members))
}

fn plogic_sound(fam: &FamilyArgs, axiom: Option<Axiom>) -> Res<(String, bool)> {
    let grid_n = fam.grid.unwrap_or(4);
    let fam = FamilyArgs {
        grid: Some(grid_n),
        lattice: fam.lattice.clone(),
        ..*fam
    };
    let (d, grid, members) = family(&fam, &[])?;
    let mut out = String::new();
    writeln!(
        out,
        "# grid=I_{} family={} (exhaustive grid measures plus {} random, seed {})",
        grid.denominator(),
        members.len(),
        fam.random,
        fam.seed
    )
    .unwrap();
    let axioms: Vec<Axiom> = axiom.map_or(Axiom::ALL.to_vec(), |a| vec![a]);
    let mut clean = true;
    for ax in axioms {
        let bad = check_soundness(ax, &d, &members, &grid).map_err(domain)?;
        writeln!(out, "{ax}\tviolations {}", bad.len()).unwrap();
        for v in bad.iter().take(10) {
            writeln!(out, "  measure {}: {}", v.measure, v.text).unwrap();
        }
        clean &= bad.is_empty();
    }
    Ok((out, clean))
}

fn plogic_entail(fam: &FamilyArgs, phi: &str, psi: &str) -> Res<String> {
    let d = load_lattice(&fam.lattice)?;
    let phi = parse_pformula(phi, &d).map_err(input)?;
    let psi = parse_pformula(psi, &d).map_err(input)?;
    let (_, grid, members) = family(fam, &[&phi, &psi])?;
    let mut out = format!("# grid=I_{} family={}\n", grid.denominator(), members.len());
    match entails(&phi, &psi, &members).map_err(domain)? {
        Entailment::HoldsOnFamily { family_size } => {
            writeln!(out, "holds on all {family_size} measures of the family").unwrap();
        }
        Entailment::Countermodel { index, measure } => {
            writeln!(out, "countermodel: family member {index}").unwrap();
            out.push_str(&measure_json(&measure));
        }
    }
    Ok(out)
}

fn plogic_roundtrip(path: &Path) -> Res<(String, bool)> {
    let mu = load_measure(path)?;
    let den = mu
        .values()
        .iter()
        .map(|v| v.value().denom_u64().unwrap_or(1))
        .fold(1u64, num_integer::lcm);
    let carrier = Grid::new(den).map_err(domain)?;
    let fine = Grid::new(2 * den).map_err(domain)?;
    let f = filter_from_measure(&mu, &fine);
    let back = measure_from_filter_on(&f, &carrier).map_err(domain)?;
    let same = back == mu;
    let mut out = format!("# carrier=I_{den} thresholds=I_{}\n", 2 * den);
    writeln!(out, "filter atoms {}", f.members().len()).unwrap();
    let d = mu.lattice();
    out.push_str(&measure_table(d, |a| format!("{} -> {}", mu.value(a), back.value(a))));
    writeln!(out, "identity {}", if same { "yes" } else { "no" }).unwrap();
    Ok((out, same))
}

/// Output text and whether the check it reports passed.
fn run(cmd: &Command) -> Res<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cmd {
        Command::Gamma(GammaCmd::Calc { expr, dual }) => ok(gamma_calc(expr, *dual)?),
        Command::Gamma(GammaCmd::Grid { n, flavored }) => {
            let g = Grid::new(*n).map_err(input)?;
            let vals = if *flavored { g.flavored() } else { g.elements() };
            ok(vals.iter().map(|v| format!("{v}\n")).collect())
        }
        Command::Lattice(LatticeCmd::Show { file }) => ok(lattice_show(load_lattice(file)?.as_ref())),
        Command::Lattice(LatticeCmd::Primes { file }) => ok(lattice_primes(load_lattice(file)?.as_ref())?),
        Command::Lattice(LatticeCmd::Check { file }) => {
            let d = load_lattice(file)?;
            if d.is_degenerate() {
                return Ok(("degenerate: bottom equals top\n".into(), false));
            }
            ok(format!(
                "distributive lattice, {} elements, {} join-irreducibles\n",
                d.len(),
                d.join_irreducible_ids().len()
            ))
        }
        Command::Measure(MeasureCmd::Check { file }) => {
            let (d, mf) = load_measure_file(file)?;
            let values = parse_values(&d, &mf)?;
            match check_gamma(&d, &values).map_err(domain)? {
                Verdict::Ok => ok("ok\n".into()),
                Verdict::Violation(v) => Ok((format!("violation: {v}\n"), false)),
            }
        }
        Command::Measure(MeasureCmd::Lift { file, iota: false }) => {
            let m = lift_gamma(&load_measure(file)?).map_err(domain)?;
            ok(measure_table(m.lattice(), |a| m.value(a).to_string()))
        }
        Command::Measure(MeasureCmd::Lift { file, iota: true }) => {
            let (d, mf) = load_measure_file(file)?;
            let values = parse_values(&d, &mf)?;
            if let Some(v) = values.iter().find(|v| !v.is_circ()) {
                return Err(input(anyhow!("classical tables take plain rationals, got {v}")));
            }
            let m = ClassicalMeasure::new(d, values.iter().map(gamma).collect()).map_err(domain)?;
            let mu = lift_iota(&m).map_err(domain)?;
            ok(measure_json(&mu))
        }
        Command::Measure(MeasureCmd::Push { file, generators, hom }) => {
            ok(measure_push(file, generators, hom.as_deref())?)
        }
        Command::Pair(PairCmd::Eval { structure, f }) => ok(pair_eval(structure, f)?),
        Command::Pair(PairCmd::Table { structure, f }) => ok(pair_table(structure, f)?),
        Command::Limits(LimitsCmd::Report {
            generator,
            range,
            f,
            window,
            eps,
            threshold,
        }) => ok(limits_report(generator, range, f, *window, eps.clone(), *threshold)?),
        Command::Plogic(PlogicCmd::Sat { measure, formula }) => {
            let mu = load_measure(measure)?;
            let f = parse_pformula(formula, mu.lattice()).map_err(input)?;
            ok(format!("{}\n", p_satisfies(&mu, &f).map_err(domain)?))
        }
        Command::Plogic(PlogicCmd::Sound { fam, axiom }) => plogic_sound(fam, *axiom),
        Command::Plogic(PlogicCmd::Entail { fam, phi, psi }) => ok(plogic_entail(fam, phi, psi)?),
        Command::Plogic(PlogicCmd::Roundtrip { measure }) => plogic_roundtrip(measure),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (text, passed) = match run(&cli.command) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            return ExitCode::from(f.code);
        }
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: writing {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calc_splits_at_the_operator() {
        assert_eq!(gamma_calc("3/4^o - 1/2^o", false).ok().unwrap(), "1/4^o\n");
        assert_eq!(gamma_calc("3/4^o - 1/2^o", true).ok().unwrap(), "1/4^-\n");
        assert_eq!(gamma_calc("1/2^- - 1/4", false).ok().unwrap(), "1/4^-\n");
        assert_eq!(gamma_calc("1/4+1/2^-", false).ok().unwrap(), "3/4^-\n");
        assert_eq!(gamma_calc("2/4^-", false).ok().unwrap(), "1/2^-\n");
        assert_eq!(gamma_calc("1/4 - 1/2", false).err().unwrap().code, 1);
        assert_eq!(gamma_calc("x - 1/2", false).err().unwrap().code, 2);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..40").ok(), Some((1, 40)));
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("1-3").is_err());
    }
}
