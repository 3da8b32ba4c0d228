use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rackoh_core::cochain::{CoeffModule, ModuleSpec};
use rackoh_core::cohomology::{
    cohomology, h2_via_group, invariant_cohomology, nonabelian_h2, rack_invariants, AbelianCoeff, AbelianGroup,
    CohomologyReport, InvariantReport,
};
use rackoh_core::corpus::{parse_rack_spec, raw_table, run_corpus, CorpusConfig, CorpusReport};
use rackoh_core::linalg::{parse_rat, Ring};
use rackoh_core::perm::{inner_group, FiniteGroup};
use rackoh_core::rack::{is_quandle, orbits, verify_rack, verify_yang_baxter, RackTable};
use rackoh_core::{Budget, Error};
use serde_json::json;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "rackoh", version, about = "Exact cohomology of finite racks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Memory ceiling for one matrix, in MB (default: $RACKOH_BUDGET_MB or 2048).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    matrix_mb: Option<u64>,
    /// Bit-size cap on Smith normal form entries.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    snf_bits: Option<u64>,
    /// Element cap for group closures.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    closure_cap: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::from_env();
        if let Some(mb) = self.matrix_mb {
            b.matrix_mb = mb as usize;
        }
        if let Some(bits) = self.snf_bits {
            b.snf_bits = bits;
        }
        if let Some(cap) = self.closure_cap {
            b.closure_cap = cap as usize;
            b.action_cap = b.action_cap.min(cap as usize);
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the rack axioms, the quandle axiom and the Yang-Baxter equation.
    Verify {
        #[arg(long)]
        rack: String,
        #[arg(long)]
        json: bool,
    },
    /// Cohomology groups with theorem checks.
    Cohomology(CohomologyArgs),
    /// Second cohomology with trivial coefficients, directly and via the structure group.
    H2 {
        #[arg(long)]
        rack: String,
        /// Abelian coefficients: Z, Q, Z<q> or Z/<q>.
        #[arg(long, conflicts_with = "nonabelian", required_unless_present = "nonabelian")]
        coeff: Option<String>,
        /// Nonabelian coefficient group: S<n>, Z<n> or D<n>.
        #[arg(long)]
        nonabelian: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Inner group order and orbits.
    Group {
        #[arg(long)]
        rack: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the theorem checks over the built-in corpus.
    Corpus {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        integral_degree: usize,
        /// Worker threads (default: available parallelism, at most 8).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
        /// Replace the corpus with these rack specs.
        #[arg(long = "rack")]
        racks: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long)]
    rack: String,
    /// Coefficient ring for trivial coefficients of rank one.
    #[arg(long, default_value = "Q", value_parser = ["Q", "Z", "Fp"])]
    ring: String,
    /// The prime for --ring Fp.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// Module file (JSON); overrides --ring.
    #[arg(long, conflicts_with = "twisted")]
    module: Option<String>,
    /// Rational Jordan-block coefficients, e.g. `t=2,k=1`.
    #[arg(long)]
    twisted: Option<String>,
    /// Also compute the invariant subcomplex and the map into cohomology.
    #[arg(long)]
    invariant: bool,
    #[arg(long)]
    json: bool,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Input(_) | Error::Precondition(_) => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.budget();
    match run(cli.command, &budget) {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { EXIT_CHECK_FAILED })
        }
        Err(e) => {
            eprintln!("rackoh: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Output text and whether every check passed.
type Outcome = rackoh_core::Result<(String, bool)>;

fn run(command: Command, budget: &Budget) -> Outcome {
    match command {
        Command::Verify { rack, json } => cmd_verify(&rack, json),
        Command::Cohomology(args) => cmd_cohomology(&args, budget),
        Command::H2 {
            rack,
            coeff,
            nonabelian,
            json,
        } => cmd_h2(&rack, coeff.as_deref(), nonabelian.as_deref(), json, budget),
        Command::Group { rack, json } => cmd_group(&rack, json, budget),
        Command::Corpus {
            max_degree,
            integral_degree,
            workers,
            racks,
            json,
        } => {
            let mut config = CorpusConfig {
                max_degree,
                integral_degree,
                ..CorpusConfig::default()
            };
            if let Some(w) = workers {
                config.workers = w as usize;
            }
            if !racks.is_empty() {
                config.racks = racks;
            }
            cmd_corpus(&config, json, budget)
        }
    }
}

fn to_json_line(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

fn cmd_verify(spec: &str, json: bool) -> Outcome {
    let table = raw_table(spec)?;
    let report = verify_rack(&table)?;
    let (quandle, yang_baxter) = match RackTable::new(table) {
        Ok(rack) => (Some(is_quandle(&rack)), Some(verify_yang_baxter(&rack))),
        Err(_) => (None, None),
    };
    if json {
        let out = json!({
            "rack": spec,
            "valid": report.valid,
            "violations": report.violations,
            "quandle": quandle,
            "yang_baxter": yang_baxter,
        });
        return Ok((to_json_line(&out), report.valid));
    }
    let mut s = String::new();
    writeln!(s, "rack: {spec}").unwrap();
    writeln!(s, "valid: {}", report.valid).unwrap();
    for v in &report.violations {
        writeln!(s, "violation: {}", serde_json::to_string(v).expect("serializable")).unwrap();
    }
    if let (Some(q), Some(yb)) = (quandle, yang_baxter) {
        writeln!(s, "quandle: {q}").unwrap();
        writeln!(s, "yang-baxter: {yb}").unwrap();
    }
    Ok((s, report.valid))
}

fn parse_twisted(arg: &str) -> rackoh_core::Result<(rackoh_core::linalg::Rat, usize)> {
    let mut t = None;
    let mut k = 1;
    for part in arg.split(',') {
        match part.trim().split_once('=') {
            Some(("t", v)) => t = Some(parse_rat(v)?),
            Some(("k", v)) => {
                k = v.parse().map_err(|_| Error::Input(format!("bad Jordan size {v:?}")))?;
            }
            _ => {
                return Err(Error::Input(format!(
                    "bad --twisted part {part:?}; expected t=<rational>,k=<size>"
                )))
            }
        }
    }
    let t = t.ok_or_else(|| Error::Input("--twisted needs t=<rational>".into()))?;
    Ok((t, k))
}

fn build_module(args: &CohomologyArgs, rack: &RackTable) -> rackoh_core::Result<CoeffModule> {
    if let Some(path) = &args.module {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read module file {path:?}: {e}")))?;
        return ModuleSpec::parse(&text)?.build(rack);
    }
    if let Some(tw) = &args.twisted {
        let (t, k) = parse_twisted(tw)?;
        return CoeffModule::jordan(Ring::Rationals, rack.size(), &t, k);
    }
    let ring = match (args.ring.as_str(), args.p) {
        ("Q", None) => Ring::Rationals,
        ("Z", None) => Ring::Integers,
        ("Fp", Some(p)) => Ring::prime_field(p)?,
        ("Fp", None) => return Err(Error::Input("--ring Fp needs --p <prime>".into())),
        (_, Some(_)) => return Err(Error::Input("--p only applies to --ring Fp".into())),
        (r, None) => return Err(Error::Input(format!("unknown ring {r}"))),
    };
    CoeffModule::trivial(ring, 1, rack.size())
}

fn describe_module(report: &CohomologyReport) -> String {
    let m = &report.module;
    let ring = match m.p {
        Some(p) => format!("F_{p}"),
        None => m.ring.clone(),
    };
    format!("{ring}^{} ({} action)", m.dim, m.action.kind)
}

fn human_report(spec: &str, report: &CohomologyReport, xi: Option<&InvariantReport>) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "rack: {spec}  (size {}, m = {}, N = {})",
        report.rack.size, report.orbit_count, report.inner_group_order
    )
    .unwrap();
    writeln!(s, "coefficients: {}", describe_module(report)).unwrap();
    let integral = report.module.ring == "Z";
    write!(s, "{:>3}  {:>8}  {:>8}", "n", "betti", "m^n").unwrap();
    if integral {
        write!(s, "  torsion").unwrap();
    }
    writeln!(s).unwrap();
    for d in &report.degrees {
        let predicted = report.orbit_count.pow(d.n as u32);
        write!(s, "{:>3}  {:>8}  {:>8}", d.n, d.betti, predicted).unwrap();
        if integral {
            let t: Vec<String> = d.torsion.iter().map(|t| format!("Z/{t}")).collect();
            write!(s, "  {}", if t.is_empty() { "-".to_string() } else { t.join(" + ") }).unwrap();
        }
        writeln!(s).unwrap();
    }
    if let Some(x) = xi {
        writeln!(s, "invariant subcomplex ({}):", route_name(x)).unwrap();
        writeln!(s, "{:>3}  {:>8}  {:>8}  {:>8}", "n", "inv", "full", "xi rank").unwrap();
        for e in &x.xi {
            writeln!(
                s,
                "{:>3}  {:>8}  {:>8}  {:>8}",
                e.n, e.invariant_betti, e.betti, e.xi_rank
            )
            .unwrap();
        }
    }
    let checks = report
        .checks
        .iter()
        .chain(xi.into_iter().flat_map(|x| x.report.checks.iter()));
    writeln!(s, "checks:").unwrap();
    for c in checks {
        let verdict = if c.pass { "pass" } else { "FAIL" };
        match &c.detail {
            Some(d) if !c.pass => writeln!(s, "  {:<40} {verdict}  {d}", c.name).unwrap(),
            _ => writeln!(s, "  {:<40} {verdict}", c.name).unwrap(),
        }
    }
    for note in report
        .notes
        .iter()
        .chain(xi.into_iter().flat_map(|x| x.report.notes.iter()))
    {
        writeln!(s, "note: {note}").unwrap();
    }
    s
}

fn route_name(x: &InvariantReport) -> String {
    match x.route {
        rackoh_core::cohomology::InvariantRoute::Projector { group_order } => {
            format!("averaging projector, |G| = {group_order}")
        }
        rackoh_core::cohomology::InvariantRoute::FixedSpace => "fixed space".to_string(),
    }
}

fn cmd_cohomology(args: &CohomologyArgs, budget: &Budget) -> Outcome {
    let rack = parse_rack_spec(&args.rack)?;
    let module = build_module(args, &rack)?;
    let report = cohomology(&rack, &module, args.max_degree, budget)?;
    let xi = if args.invariant {
        Some(invariant_cohomology(&rack, &module, args.max_degree, budget)?)
    } else {
        None
    };
    let ok = report.all_pass() && xi.as_ref().is_none_or(|x| x.report.all_pass());
    let text = if args.json {
        match &xi {
            None => to_json_line(&report),
            Some(x) => to_json_line(&json!({ "cohomology": report, "invariant": x })),
        }
    } else {
        human_report(&args.rack, &report, xi.as_ref())
    };
    Ok((text, ok))
}

fn show_group(g: &AbelianGroup, coeff: AbelianCoeff) -> String {
    let mut parts = Vec::new();
    if g.free_rank > 0 {
        let base = if coeff == AbelianCoeff::Rationals { "Q" } else { "Z" };
        parts.push(if g.free_rank == 1 {
            base.to_string()
        } else {
            format!("{base}^{}", g.free_rank)
        });
    }
    parts.extend(g.invariant_factors.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn cmd_h2(spec: &str, coeff: Option<&str>, nonabelian: Option<&str>, json: bool, budget: &Budget) -> Outcome {
    let rack = parse_rack_spec(spec)?;
    if let Some(name) = nonabelian {
        let group = FiniteGroup::by_name(name)?;
        let h = nonabelian_h2(&rack, &group, budget)?;
        if json {
            return Ok((to_json_line(&h), true));
        }
        let mut s = String::new();
        writeln!(s, "rack: {spec}  coefficients: {}", h.group).unwrap();
        writeln!(s, "cocycles: {}", h.cocycle_count).unwrap();
        writeln!(s, "classes: {}", h.class_count()).unwrap();
        for c in &h.classes {
            writeln!(s, "  size {:>4}  representative {:?}", c.size, c.representative).unwrap();
        }
        return Ok((s, true));
    }
    let coeff: AbelianCoeff = coeff.expect("clap requires --coeff without --nonabelian").parse()?;
    let c = h2_via_group(&rack, coeff, budget)?;
    if json {
        return Ok((to_json_line(&c), c.matches));
    }
    let mut s = String::new();
    writeln!(s, "rack: {spec}  coefficients: {coeff}").unwrap();
    writeln!(
        s,
        "H^2(X, A) from the rack complex:     {}",
        show_group(&c.direct, coeff)
    )
    .unwrap();
    writeln!(
        s,
        "H^1(G_X, Fun(X, A)) from relations:  {}",
        show_group(&c.via_group, coeff)
    )
    .unwrap();
    writeln!(s, "match: {}", if c.matches { "yes" } else { "NO" }).unwrap();
    Ok((s, c.matches))
}

fn cmd_group(spec: &str, json: bool, budget: &Budget) -> Outcome {
    let rack = parse_rack_spec(spec)?;
    let group = inner_group(&rack, budget.closure_cap)?;
    let orb = orbits(&rack);
    let members: Vec<Vec<usize>> = (0..orb.orbit_count).map(|o| orb.members(o)).collect();
    // Orbits from the closed group must match the union-find partition.
    let agree = members.iter().all(|m| {
        group
            .point_orbit(m[0])
            .map(|o| o.into_iter().eq(m.iter().copied()))
            .unwrap_or(false)
    });
    let inv = rack_invariants(&rack, budget)?;
    if json {
        let out = json!({
            "rack": spec,
            "inner_group_order": inv.inner_order,
            "orbit_count": inv.orbit_count,
            "orbits": members,
            "orbit_methods_agree": agree,
        });
        return Ok((to_json_line(&out), agree));
    }
    let mut s = String::new();
    writeln!(s, "rack: {spec}  (size {})", rack.size()).unwrap();
    writeln!(s, "inner group order N: {}", inv.inner_order).unwrap();
    writeln!(s, "orbits m: {}", inv.orbit_count).unwrap();
    for (i, m) in members.iter().enumerate() {
        writeln!(s, "  orbit {i}: {m:?}").unwrap();
    }
    writeln!(s, "orbit methods agree: {agree}").unwrap();
    Ok((s, agree))
}

fn cmd_corpus(config: &CorpusConfig, json: bool, budget: &Budget) -> Outcome {
    let report: CorpusReport = run_corpus(config, budget)?;
    if report.resource_exhausted {
        return Err(Error::Resource(report.errors.join("; ")));
    }
    if json {
        return Ok((to_json_line(&report), report.all_pass()));
    }
    let mut s = String::new();
    writeln!(s, "{:<28} {:>4} {:>3} {:>5}  rational betti", "rack", "size", "m", "N").unwrap();
    for r in &report.racks {
        let betti: Vec<String> = r
            .jobs
            .iter()
            .find(|j| j.job == "rational")
            .map(|j| j.degrees.iter().map(|d| d.betti.to_string()).collect())
            .unwrap_or_default();
        writeln!(
            s,
            "{:<28} {:>4} {:>3} {:>5}  ({})",
            r.rack,
            r.size,
            r.orbit_count,
            r.inner_group_order,
            betti.join(", ")
        )
        .unwrap();
    }
    writeln!(s, "checks:").unwrap();
    for t in &report.summary {
        writeln!(s, "  {:<40} {:>4} pass {:>4} fail", t.name, t.passed, t.failed).unwrap();
    }
    for f in &report.failures {
        writeln!(s, "FAIL {f}").unwrap();
    }
    for e in &report.errors {
        writeln!(s, "ERROR {e}").unwrap();
    }
    Ok((s, report.all_pass()))
}
