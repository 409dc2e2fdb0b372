use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use quiverlab::approx::{
    approximation_growth_scan, is_approximation, naive_approximation, right_minimize, FiniteCategory,
};
use quiverlab::criteria::{criterion10_check, criterion1_check, Criterion1Options, ZipperSpec};
use quiverlab::fixtures;
use quiverlab::format::{parse_algebra_with, parse_modules, write_algebra, write_explicit, write_presented, NamedModule};
use quiverlab::phantom::{build_nn, phantom_tower, verify_nn_syzygy_split, TowerOptions, TowerStatus};
use quiverlab::rep::{hom_dimension, pdim, syzygy_chain};
use quiverlab::{Algebra, Field, Representation};

/// Exit status for verdicts that are inconclusive by design.
const INCONCLUSIVE: u8 = 10;

#[derive(Parser)]
#[command(name = "quiverlab", version, about = "Modules over path algebras with relations")]
struct Cli {
    /// emit JSON lines instead of text
    #[arg(long, global = true)]
    json: bool,
    /// field used when an algebra file has no `field` line (`Q` or `F<p>`)
    #[arg(long, global = true, env = "QUIVERLAB_FIELD", default_value = "Q")]
    field: String,
    /// seed for randomized steps
    #[arg(long, global = true, env = "QUIVERLAB_SEED", default_value_t = quiverlab::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgArg {
    /// algebra file, or the id of a built-in example (ex2, ex3, ex4, ex12, ex13)
    #[arg(long = "alg")]
    alg: String,
}

#[derive(Args)]
struct ModArgs {
    #[command(flatten)]
    alg: AlgArg,
    /// module file with `presented` / `explicit` stanzas
    #[arg(long = "modules")]
    modules: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra-level information
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Module-level computations; modules are named stanzas, `S:<v>` or `P:<v>`
    Module {
        #[command(subcommand)]
        cmd: ModuleCmd,
    },
    /// Relative approximation of a target by a finite family
    Approx {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long)]
        target: String,
        /// comma separated module names
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        #[arg(long)]
        minimize: bool,
    },
    /// Minimal approximations relative to a growing family F_1, ..., F_n
    ApproxScan {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long)]
        target: String,
        /// `nn:p=<elt>,q=<elt>` or `modules:<name with {n}>`
        #[arg(long)]
        gen: String,
        /// range `A..B` (inclusive)
        #[arg(long)]
        n: String,
        /// fixed extra family members, comma separated
        #[arg(long, value_delimiter = ',')]
        ambient: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Checks the syzygy splitting of N_n = (⊕ Λb_i)/(p b_i - q b_{i+1})
    NnVerify {
        #[command(flatten)]
        alg: AlgArg,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
    },
    /// First non-finiteness criterion for parallel paths p, q
    Criterion1 {
        #[command(flatten)]
        alg: AlgArg,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// module file whose first stanza (or `FILE:NAME`) is tested against the top condition
        #[arg(long)]
        counterexample: Option<String>,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
    },
    /// Second criterion for a zipper specification (`step <v> | <p> | <q>` lines)
    Criterion10 {
        #[command(flatten)]
        alg: AlgArg,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
    },
    /// Tower of alternating minimal approximations driven by the modules of a file
    Tower {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long)]
        target: String,
        /// module file listing D_1, D_2, ... in order
        #[arg(long)]
        dfile: PathBuf,
        #[arg(long, default_value_t = 3)]
        budget: usize,
        #[arg(long, value_delimiter = ',')]
        ambient: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// print the tower as a graphviz digraph
        #[arg(long)]
        dot: bool,
    },
    /// Built-in example bundles
    Fixture {
        #[command(subcommand)]
        cmd: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Info { file: String },
}

#[derive(Subcommand)]
enum ModuleCmd {
    Show {
        #[command(flatten)]
        m: ModArgs,
        name: String,
    },
    Pdim {
        #[command(flatten)]
        m: ModArgs,
        name: String,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
    },
    Syzygy {
        #[command(flatten)]
        m: ModArgs,
        name: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    Hom {
        #[command(flatten)]
        m: ModArgs,
        source: String,
        target: String,
    },
    Top {
        #[command(flatten)]
        m: ModArgs,
        name: String,
    },
    Socle {
        #[command(flatten)]
        m: ModArgs,
        name: String,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    List,
    /// Replays the expected-value table
    Run { id: String },
    /// Writes the algebra and module files of a bundle into a directory
    Export { id: String, dir: PathBuf },
}

fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix('F')
        .ok_or_else(|| anyhow!("field must be `Q` or `F<p>`, got `{s}`"))?
        .trim();
    Ok(Field::prime(p.parse().context("bad characteristic")?)?)
}

struct Ctx {
    json: bool,
    field: Field,
    seed: u64,
}

impl Ctx {
    fn load_algebra(&self, spec: &str) -> Result<Arc<Algebra>> {
        if !Path::new(spec).exists() {
            if let Some(text) = fixtures::algebra_text(spec) {
                return Ok(Arc::new(parse_algebra_with(text, self.field)?));
            }
        }
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        Ok(Arc::new(parse_algebra_with(&text, self.field).with_context(|| format!("parsing {spec}"))?))
    }

    fn load_modules(&self, alg: &Arc<Algebra>, path: Option<&Path>) -> Result<Vec<NamedModule>> {
        match path {
            None => Ok(Vec::new()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(parse_modules(alg, &text).with_context(|| format!("parsing {}", p.display()))?)
            }
        }
    }

    fn emit(&self, value: serde_json::Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{value}");
        } else {
            print!("{}", text());
        }
    }
}

fn resolve(alg: &Arc<Algebra>, mods: &[NamedModule], name: &str) -> Result<Representation> {
    if let Some(v) = name.strip_prefix("S:") {
        return Ok(Representation::simple(alg, alg.quiver().vertex(v)?)?);
    }
    if let Some(v) = name.strip_prefix("P:") {
        return Ok(Representation::projective(alg, alg.quiver().vertex(v)?)?);
    }
    mods.iter()
        .find(|m| m.name == name)
        .map(|m| m.module.clone())
        .ok_or_else(|| anyhow!("no module named `{name}`"))
}

fn family(alg: &Arc<Algebra>, mods: &[NamedModule], names: &[String]) -> Result<FiniteCategory> {
    let mut fam = FiniteCategory::new("cli");
    for n in names.iter().filter(|n| !n.is_empty()) {
        fam.push(n, resolve(alg, mods, n)?);
    }
    Ok(fam)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("range must look like A..B"))?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a == 0 || a > b {
        bail!("empty or invalid range {s}");
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx {
        json: cli.json,
        field: parse_field(&cli.field)?,
        seed: cli.seed,
    };
    match cli.command {
        Command::Algebra { cmd: AlgebraCmd::Info { file } } => {
            let alg = ctx.load_algebra(&file)?;
            let q = alg.quiver();
            ctx.emit(
                json!({
                    "dim": alg.dim(),
                    "field": alg.field().to_string(),
                    "vertices": q.num_vertices(),
                    "arrows": q.num_arrows(),
                    "degree_sizes": alg.degree_sizes(),
                    "monomial": alg.is_monomial(),
                    "loewy_length": alg.loewy_length(),
                    "projective_dims": (0..q.num_vertices()).map(|v| alg.basis_from(v).len()).collect::<Vec<_>>(),
                }),
                || {
                    format!(
                        "dim {}\nfield {}\nvertices {}\narrows {}\nbasis per degree {:?}\nmonomial {}\nLoewy length {}\n",
                        alg.dim(),
                        alg.field(),
                        q.num_vertices(),
                        q.num_arrows(),
                        alg.degree_sizes(),
                        alg.is_monomial(),
                        alg.loewy_length()
                    )
                },
            );
            Ok(0)
        }
        Command::Module { cmd } => module_cmd(&ctx, cmd),
        Command::Approx { m, target, family: names, minimize } => {
            let alg = ctx.load_algebra(&m.alg.alg)?;
            let mods = ctx.load_modules(&alg, m.modules.as_deref())?;
            let x = resolve(&alg, &mods, &target)?;
            let fam = family(&alg, &mods, &names)?;
            let mut cert = naive_approximation(&fam, &x)?;
            if minimize {
                cert = right_minimize(&cert, ctx.seed)?;
            }
            let verified = cert.verify() && is_approximation(&cert.map, &fam)?.holds;
            ctx.emit(
                json!({
                    "source_dims": cert.source.dims(),
                    "source_dim": cert.source_dim(),
                    "right_minimal": cert.right_minimal,
                    "verified": verified,
                    "seed": ctx.seed,
                }),
                || {
                    format!(
                        "source dims {:?} (total {})\nright minimal {}\nwitnesses verified {}\nseed {}\n",
                        cert.source.dims(),
                        cert.source_dim(),
                        cert.right_minimal,
                        verified,
                        ctx.seed
                    )
                },
            );
            Ok(if verified { 0 } else { 1 })
        }
        Command::ApproxScan { m, target, gen, n, ambient, k } => {
            let alg = ctx.load_algebra(&m.alg.alg)?;
            let mods = ctx.load_modules(&alg, m.modules.as_deref())?;
            let x = resolve(&alg, &mods, &target)?;
            let (lo, hi) = parse_range(&n)?;
            let amb = family(&alg, &mods, &ambient)?;
            let generator = make_generator(&alg, &mods, &gen)?;
            let shifted = |i: usize| generator(i + lo - 1);
            let report = approximation_growth_scan(
                &shifted,
                &x,
                hi - lo + 1,
                (!amb.is_empty()).then_some(&amb),
                k,
                ctx.seed,
            )?;
            let mut ok = true;
            for row in &report.rows {
                let n = row.n + lo - 1;
                ok &= row.minimized && row.witnesses_verified;
                ctx.emit(
                    json!({ "n": n, "source_dim": row.source_dim, "right_minimal": row.minimized, "verified": row.witnesses_verified }),
                    || format!("n = {n:<3} dim {:<5} minimal {} verified {}\n", row.source_dim, row.minimized, row.witnesses_verified),
                );
            }
            ctx.emit(json!({ "growth": report.growth, "k": k, "seed": ctx.seed }), || {
                format!("growth over last {k} steps: {}\nseed {}\n", report.growth, ctx.seed)
            });
            Ok(if ok { 0 } else { 1 })
        }
        Command::NnVerify { alg, p, q, n, cutoff } => {
            let alg = ctx.load_algebra(&alg.alg)?;
            let (p, q) = (alg.parse_element(&p)?, alg.parse_element(&q)?);
            let mut ok = true;
            for i in 1..=n {
                let r = verify_nn_syzygy_split(&alg, &p, &q, i, cutoff)?;
                let dims = build_nn(&alg, &p, &q, i)?.module.dims().to_vec();
                ok &= r.holds();
                ctx.emit(
                    json!({ "n": i, "dims": dims, "report": r, "holds": r.holds() }),
                    || {
                        format!(
                            "N_{i}: dims {dims:?}, Λp∩Λq=0 {}, kernel splits {}, summands ≅ Λ(p,q) {}, pdim Λ(p,q) {}, pdim N_{i} {}\n",
                            r.intersection_zero, r.kernel_split, r.summands_iso, r.pdim_pq, r.pdim_nn
                        )
                    },
                );
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Criterion1 { alg, p, q, counterexample, cutoff } => {
            let alg = ctx.load_algebra(&alg.alg)?;
            let (p, q) = (alg.quiver().parse_path(&p)?, alg.quiver().parse_path(&q)?);
            let counterexample = match counterexample {
                None => None,
                Some(spec) => {
                    let (file, name) = match spec.rsplit_once(':') {
                        Some((f, n)) if !Path::new(&spec).exists() => (f.to_string(), Some(n.to_string())),
                        _ => (spec.clone(), None),
                    };
                    let mods = ctx.load_modules(&alg, Some(Path::new(&file)))?;
                    let m = match name {
                        Some(n) => resolve(&alg, &mods, &n)?,
                        None => mods.first().ok_or_else(|| anyhow!("{file} holds no module"))?.module.clone(),
                    };
                    Some(m)
                }
            };
            let rep = criterion1_check(&alg, &p, &q, &Criterion1Options { cutoff, counterexample })?;
            report_out(&ctx, &rep, &alg, cutoff)
        }
        Command::Criterion10 { alg, spec, n_max, cutoff } => {
            let alg = ctx.load_algebra(&alg.alg)?;
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec = ZipperSpec::parse(&alg, &text)?;
            let rep = criterion10_check(&alg, &spec, n_max, cutoff)?;
            report_out(&ctx, &rep, &alg, cutoff)
        }
        Command::Tower { m, target, dfile, budget, ambient, k, dot } => {
            let alg = ctx.load_algebra(&m.alg.alg)?;
            let mods = ctx.load_modules(&alg, m.modules.as_deref())?;
            let x = resolve(&alg, &mods, &target)?;
            let ds = ctx.load_modules(&alg, Some(&dfile))?;
            if ds.len() < budget {
                bail!("{} lists {} modules but the budget is {budget}", dfile.display(), ds.len());
            }
            let amb = family(&alg, &mods, &ambient)?;
            let gen = |n: usize| -> quiverlab::Result<(String, Representation)> {
                let d = &ds[n - 1];
                Ok((d.name.clone(), d.module.clone()))
            };
            let opts = TowerOptions {
                budget,
                ambient: (!amb.is_empty()).then_some(amb),
                seed: ctx.seed,
                k,
                ..TowerOptions::default()
            };
            let tower = phantom_tower(&x, &gen, &opts)?;
            if dot {
                print!("{}", tower.dot());
            } else if ctx.json {
                for line in tower.json_lines() {
                    println!("{line}");
                }
            } else {
                for s in &tower.stages {
                    println!(
                        "A{:<3} dims {:?} family {{{}}} minimal {} verified {}",
                        s.index,
                        s.cert.source.dims(),
                        s.family.join(", "),
                        s.cert.right_minimal,
                        s.verified
                    );
                }
                for (i, d) in &tower.u_dims {
                    println!("U{i:<3} dim {d}");
                }
                println!("growth evidence (last {k}): {}", tower.growth_evidence());
                println!("seed {}", ctx.seed);
            }
            if !tower.all_verified() {
                return Ok(1);
            }
            Ok(if tower.status == TowerStatus::BudgetExhausted { INCONCLUSIVE } else { 0 })
        }
        Command::Fixture { cmd } => match cmd {
            FixtureCmd::List => {
                for id in fixtures::FIXTURE_IDS {
                    println!("{id}");
                }
                Ok(0)
            }
            FixtureCmd::Run { id } => {
                let report = fixtures::run_fixture(&id)?;
                if ctx.json {
                    for r in &report.rows {
                        println!("{}", serde_json::to_string(r)?);
                    }
                } else {
                    print!("{}", report.table());
                }
                Ok(if report.passed() { 0 } else { 1 })
            }
            FixtureCmd::Export { id, dir } => {
                export_fixture(&ctx, &id, &dir)?;
                Ok(0)
            }
        },
    }
}

fn report_out(ctx: &Ctx, rep: &quiverlab::criteria::CriterionReport, alg: &Arc<Algebra>, cutoff: usize) -> Result<u8> {
    if ctx.json {
        for line in rep.json_lines() {
            println!("{line}");
        }
    } else {
        print!("{}", rep.text());
    }
    if !rep.replay(alg, cutoff) {
        eprintln!("evidence replay failed");
        return Ok(1);
    }
    Ok(rep.exit_code() as u8)
}

type Gen<'a> = Box<dyn Fn(usize) -> quiverlab::Result<(String, Representation)> + 'a>;

fn make_generator<'a>(alg: &'a Arc<Algebra>, mods: &'a [NamedModule], spec: &str) -> Result<Gen<'a>> {
    if let Some(rest) = spec.strip_prefix("nn:") {
        let mut p = None;
        let mut q = None;
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("p", v)) => p = Some(alg.parse_element(v)?),
                Some(("q", v)) => q = Some(alg.parse_element(v)?),
                _ => bail!("expected `nn:p=<elt>,q=<elt>`"),
            }
        }
        let (p, q) = (p.ok_or_else(|| anyhow!("missing p"))?, q.ok_or_else(|| anyhow!("missing q"))?);
        return Ok(Box::new(move |n| Ok((format!("N{n}"), build_nn(alg, &p, &q, n)?.module))));
    }
    if let Some(pattern) = spec.strip_prefix("modules:") {
        if !pattern.contains("{n}") {
            bail!("module pattern must contain {{n}}");
        }
        let pattern = pattern.to_string();
        return Ok(Box::new(move |n| {
            let name = pattern.replace("{n}", &n.to_string());
            mods.iter()
                .find(|m| m.name == name)
                .map(|m| (name.clone(), m.module.clone()))
                .ok_or_else(|| quiverlab::Error::Invalid(format!("no module named `{name}`")))
        }));
    }
    bail!("unknown generator `{spec}`")
}

fn module_cmd(ctx: &Ctx, cmd: ModuleCmd) -> Result<u8> {
    let (m, names) = match &cmd {
        ModuleCmd::Show { m, name }
        | ModuleCmd::Pdim { m, name, .. }
        | ModuleCmd::Syzygy { m, name, .. }
        | ModuleCmd::Top { m, name }
        | ModuleCmd::Socle { m, name } => (m, vec![name.clone()]),
        ModuleCmd::Hom { m, source, target } => (m, vec![source.clone(), target.clone()]),
    };
    let alg = ctx.load_algebra(&m.alg.alg)?;
    let mods = ctx.load_modules(&alg, m.modules.as_deref())?;
    let x = resolve(&alg, &mods, &names[0])?;
    match cmd {
        ModuleCmd::Show { name, .. } => {
            ctx.emit(json!({ "name": name, "dims": x.dims(), "dim": x.dim() }), || write_explicit(&name, &x));
        }
        ModuleCmd::Pdim { cutoff, .. } => {
            let v = pdim(&x, cutoff, true);
            ctx.emit(json!({ "pdim": v.label(), "finite": v.finite() }), || format!("pdim {v}\n"));
            if matches!(v, quiverlab::PdimVerdict::Unknown(_)) {
                return Ok(INCONCLUSIVE);
            }
        }
        ModuleCmd::Syzygy { k, .. } => {
            let chain = syzygy_chain(&x, k);
            for (i, s) in chain.iter().enumerate().skip(1) {
                ctx.emit(json!({ "k": i, "dims": s.dims() }), || format!("Ω^{i}: dims {:?}\n", s.dims()));
            }
        }
        ModuleCmd::Hom { .. } => {
            let y = resolve(&alg, &mods, &names[1])?;
            let d = hom_dimension(&x, &y)?;
            ctx.emit(json!({ "hom_dim": d }), || format!("dim Hom = {d}\n"));
        }
        ModuleCmd::Top { .. } => {
            let t = x.top();
            ctx.emit(json!({ "top": t }), || format!("top {t:?}\n"));
        }
        ModuleCmd::Socle { .. } => {
            let s: Vec<usize> = x.socle_subspace().iter().map(|m| m.cols()).collect();
            ctx.emit(json!({ "socle": s }), || format!("socle {s:?}\n"));
        }
    }
    Ok(0)
}

fn export_fixture(ctx: &Ctx, id: &str, dir: &Path) -> Result<()> {
    let text = fixtures::algebra_text(id).ok_or_else(|| anyhow!("unknown fixture `{id}`"))?;
    let alg = Arc::new(parse_algebra_with(text, ctx.field)?);
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{id}.alg")), write_algebra(&alg))?;
    let mut modules = String::new();
    let mut push = |name: &str, pm: quiverlab::rep::PresentedModule| {
        let gens: Vec<String> = (1..=pm.gens.len()).map(|i| format!("g{i}")).collect();
        modules.push_str(&write_presented(name, &pm, &gens));
        modules.push('\n');
    };
    match id {
        "ex2" => {
            for n in 1..=5 {
                push(&format!("M{n}"), fixtures::zipper_m(&alg, n)?);
            }
        }
        "ex3" => {
            push("A1", fixtures::ex3_a1(&alg)?);
            for n in 1..=5 {
                push(&format!("M{n}"), fixtures::zipper_m(&alg, n)?);
            }
        }
        "ex4" => {
            push("M", fixtures::ex4_m(&alg)?);
            for n in 1..=4 {
                push(&format!("E{n}"), fixtures::ex4_e(&alg, n)?);
            }
        }
        "ex12" => push("A1", fixtures::ex12_a1(&alg)?),
        "ex13" => {
            for n in 1..=4 {
                push(&format!("C{n}"), fixtures::ex13_c(&alg, n)?);
            }
        }
        _ => unreachable!(),
    }
    std::fs::write(dir.join(format!("{id}.mod")), modules)?;
    if ctx.json {
        println!("{}", json!({ "written": [format!("{id}.alg"), format!("{id}.mod")] }));
    } else {
        println!("wrote {id}.alg and {id}.mod to {}", dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
