use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fusionkit::alperin;
use fusionkit::biset;
use fusionkit::thompson::{self, TlInstance};
use fusionkit::{catalog, io, perm, ElemId, Error, FiniteGroup, FusionSystem, Injection, Subgroup};

const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 64;
const EXIT_SIZE: u8 = 65;

#[derive(Parser)]
#[command(name = "fusionkit", version, about = "Fusion systems of finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Sylow, focal and hyperfocal subgroups and essential subgroups.
    Report(Common),
    /// Check the transfer theorem hypotheses for one instance (T, u).
    TlCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "T")]
        t: String,
        #[arg(long = "u")]
        u: String,
    },
    /// Transfer of every element of S into S/T.
    Transfer {
        #[command(flatten)]
        common: Common,
        #[arg(long = "T")]
        t: String,
    },
    /// Up/down decomposition of conjugation by --witness on the subgroup --from.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Generators of P, separated by ';'.
        #[arg(long)]
        from: String,
        #[arg(long)]
        witness: String,
    },
    /// Members of the essential conjugation family.
    Essentials(Common),
    /// Check the characteristic biset properties of copies of G.
    VerifyBiset {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Fixture name or path to a group JSON file.
    group: String,
    #[arg(short = 'p', long = "prime", default_value_t = 2)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Size(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => Failure::Size(e.to_string()),
            Error::InvalidPermutation(_)
            | Error::DegreeMismatch { .. }
            | Error::NotMember(_)
            | Error::Precondition(_)
            | Error::UnknownFixture(_)
            | Error::GroupFile(_) => Failure::Usage(e.to_string()),
            Error::FamilyNotGenerating(_) | Error::Internal(_) | Error::TheoremViolation(_) => Failure::Other(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok((out, ok)) => {
            println!("{out}");
            ExitCode::from(if ok { 0 } else { EXIT_HYPOTHESIS })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Size(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_SIZE)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::Report(c) => report(&c),
        Verb::TlCheck { common, t, u } => tl_check(&common, &t, &u),
        Verb::Transfer { common, t } => transfer(&common, &t),
        Verb::Decompose { common, from, witness } => decompose(&common, &from, &witness),
        Verb::Essentials(c) => essentials(&c),
        Verb::VerifyBiset { common, copies } => verify_biset(&common, copies),
    }
}

fn load(c: &Common) -> Result<FusionSystem, Failure> {
    let g = if c.group.ends_with(".json") || Path::new(&c.group).is_file() {
        io::load_group(Path::new(&c.group))?
    } else {
        catalog::build(&c.group)?
    };
    if g.order() as u64 % c.prime != 0 {
        return Err(Failure::Usage(format!("{} does not divide |G| = {}", c.prime, g.order())));
    }
    Ok(FusionSystem::new(g, c.prime)?)
}

fn render<T: Serialize>(c: &Common, value: &T, text: impl FnOnce() -> String) -> Result<String, Failure> {
    match c.format {
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| Failure::Other(e.to_string())),
        Format::Text => Ok(text()),
    }
}

fn element(g: &FiniteGroup, s: &str) -> Result<ElemId, Failure> {
    Ok(g.require(&perm::parse_permutation(s.trim(), g.degree())?)?)
}

fn elements(g: &FiniteGroup, list: &str) -> Result<Vec<ElemId>, Failure> {
    list.split(';').filter(|s| !s.trim().is_empty()).map(|s| element(g, s)).collect()
}

/// `center`, `derived`, `trivial`, `maximal:<i>` or generators separated by ';'.
fn kernel(f: &FusionSystem, spec: &str) -> Result<Subgroup, Failure> {
    let g = f.group();
    let s = f.sylow();
    Ok(match spec.trim() {
        "center" => g.center(s),
        "derived" => g.commutator_subgroup(s),
        "trivial" => g.trivial(),
        other => {
            if let Some(i) = other.strip_prefix("maximal:") {
                let i: usize = i.parse().map_err(|_| Failure::Usage(format!("bad maximal index {i:?}")))?;
                let maximal: Vec<Subgroup> = thompson::abelian_quotient_kernels(f)?
                    .into_iter()
                    .filter(|t| t.order() as u64 * f.prime() == s.order() as u64)
                    .collect();
                maximal
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Failure::Usage(format!("S has {} maximal subgroups", maximal.len())))?
            } else {
                let gens = elements(g, other)?;
                if !gens.iter().all(|&x| s.contains(x)) {
                    return Err(Failure::Usage("T must lie in S".into()));
                }
                g.closure(&gens)
            }
        }
    })
}

/// A permutation, `order:<n>` (least element of `S − T` of that order) or
/// `least-order` (least element of least order in `S − T`).
fn pick_u(f: &FusionSystem, t: &Subgroup, spec: &str) -> Result<ElemId, Failure> {
    let g = f.group();
    let outside: Vec<ElemId> = f.sylow().elements().iter().copied().filter(|&x| !t.contains(x)).collect();
    let spec = spec.trim();
    if spec == "least-order" {
        let least = outside.iter().map(|&x| g.element_order(x)).min();
        return outside
            .iter()
            .copied()
            .find(|&x| Some(g.element_order(x)) == least)
            .ok_or_else(|| Failure::Usage("S - T is empty".into()));
    }
    if let Some(n) = spec.strip_prefix("order:") {
        let n: u32 = n.parse().map_err(|_| Failure::Usage(format!("bad order {n:?}")))?;
        return outside
            .iter()
            .copied()
            .find(|&x| g.element_order(x) == n)
            .ok_or_else(|| Failure::Usage(format!("no element of order {n} in S - T")));
    }
    element(g, spec)
}

#[derive(Serialize)]
struct Summary {
    group: String,
    order: usize,
    prime: u64,
    sylow: String,
    sylow_order: usize,
    focal_order: usize,
    hyperfocal_order: usize,
    op_closed: bool,
    essentials: Vec<String>,
}

fn report(c: &Common) -> Outcome {
    let f = load(c)?;
    let g = f.group();
    let summary = Summary {
        group: g.name().to_string(),
        order: g.order(),
        prime: f.prime(),
        sylow: g.subgroup_label(f.sylow()),
        sylow_order: f.sylow().order(),
        focal_order: f.focal_subgroup().order(),
        hyperfocal_order: f.hyperfocal_subgroup().order(),
        op_closed: f.is_op_closed(),
        essentials: f.essential_subgroups()?.iter().map(|e| g.subgroup_label(e)).collect(),
    };
    let out = render(c, &summary, || {
        format!(
            "group {} of order {} at p = {}\nS = {} of order {}\nfocal subgroup order {}\nhyperfocal subgroup order {}\nF = O^p(F): {}\nessential subgroups: {}",
            summary.group,
            summary.order,
            summary.prime,
            summary.sylow,
            summary.sylow_order,
            summary.focal_order,
            summary.hyperfocal_order,
            summary.op_closed,
            if summary.essentials.is_empty() { "none".to_string() } else { summary.essentials.join(" ") }
        )
    })?;
    Ok((out, true))
}

fn tl_check(c: &Common, t: &str, u: &str) -> Outcome {
    let f = load(c)?;
    let t = kernel(&f, t)?;
    let u = pick_u(&f, &t, u)?;
    let inst = TlInstance::new(&f, &t, u)?;
    let report = thompson::tl_verify(&inst)?;
    let json = report.to_json(&inst);
    let out = render(c, &json, || {
        format!(
            "u = {} with |T| = {}\nconditions (1) {} (2) {} (3) {}\nI T = {{{}}}\nwitness in T: {}\n|𝒯| = {}, k = {:?}, transfer {}",
            json.u,
            json.t_order,
            json.conditions[0],
            json.conditions[1],
            json.conditions[2],
            json.i_cosets.join(", "),
            json.witness.as_deref().unwrap_or("none"),
            json.trace.t_size,
            json.trace.k,
            json.trace.value
        )
    })?;
    Ok((out, report.hypotheses_hold()))
}

#[derive(Serialize)]
struct TransferOutput {
    convention: &'static str,
    #[serde(flatten)]
    table: biset::TransferTable,
}

fn transfer(c: &Common, t: &str) -> Outcome {
    let f = load(c)?;
    let t = kernel(&f, t)?;
    let section = fusionkit::AbelianSection::new(f.group(), f.sylow(), &t)?;
    let omega = biset::characteristic_biset(&f);
    let table = biset::transfer_table(&f, &omega, &section)?;
    let out = TransferOutput { convention: biset::CONVENTION_NOTE, table };
    let text = || {
        let mut lines = vec![format!("S/T of order {}, kernel of order {}", out.table.section_order, out.table.kernel_order)];
        lines.extend(out.table.values.iter().map(|(u, v)| format!("{u} -> {v}")));
        lines.join("\n")
    };
    Ok((render(c, &out, text)?, true))
}

fn decompose(c: &Common, from: &str, witness: &str) -> Outcome {
    let f = load(c)?;
    let g = f.group();
    let gens = elements(g, from)?;
    let p = g.closure(&gens);
    if !p.is_subset(f.sylow()) {
        return Err(Failure::Usage("--from must generate a subgroup of S".into()));
    }
    let w = element(g, witness)?;
    let phi = Injection::conjugation(g, &p, w);
    if !phi.image(g).is_subset(f.sylow()) {
        return Err(Failure::Usage("the witness does not conjugate P into S".into()));
    }
    let family = alperin::essential_family(&f)?;
    let ud = alperin::updown_decompose(&f, &family, &phi)?;
    if !ud.decomposition.realizes(&f, &phi) {
        return Err(Failure::Other("decomposition does not compose to the input".into()));
    }
    let json = ud.decomposition.to_json(g, Some(ud.peak));
    let out = render(c, &json, || {
        let mut lines = vec![format!("P = {}", json.source)];
        lines.extend(json.steps.iter().enumerate().map(|(i, s)| format!("{}: Q = {} alpha = {}", i + 1, s.q, s.alpha_witness)));
        lines.push(format!("profile {:?} peak {}", json.profile, ud.peak));
        lines.join("\n")
    })?;
    Ok((out, true))
}

fn essentials(c: &Common) -> Outcome {
    let f = load(c)?;
    let g = f.group();
    let family = alperin::essential_family(&f)?;
    let members: BTreeMap<String, Vec<String>> = BTreeMap::from([(
        "members".to_string(),
        family.members().iter().map(|q| g.subgroup_label(q)).collect(),
    )]);
    let out = render(c, &members, || members["members"].join("\n"))?;
    Ok((out, true))
}

fn verify_biset(c: &Common, copies: usize) -> Outcome {
    if copies == 0 {
        return Err(Failure::Usage("--copies must be positive".into()));
    }
    let f = load(c)?;
    let omega = biset::characteristic_biset(&f).disjoint_copies(copies);
    let report = biset::verify_characteristic(&f, &omega)?;
    let out = render(c, &report, || {
        let line = |name: &str, p: &biset::PropertyCheck| {
            let mut s = format!("({name}) {} [{} checked]", if p.passed { "pass" } else { "FAIL" }, p.checked);
            for v in &p.violations {
                s.push_str(&format!("\n    {v}"));
            }
            s
        };
        format!(
            "|Omega| = {}, |Omega|/|S| = {}\n{}\n{}\n{}\n{}",
            report.size,
            report.orbit_count,
            line("a", &report.stabilizers_in_fusion),
            line("b", &report.fusion_invariance),
            line("c", &report.prime_to_p),
            report.convention
        )
    })?;
    Ok((out, report.passed()))
}
