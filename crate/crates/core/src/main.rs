use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use g2gt::algebra_g2::{build_split_octonions, derivation_algebra, format_matrix, invariant_tensor, CasimirKind};
use g2gt::indexsets::{IndexSet, INDICES};
use g2gt::lattice::{Flavor, GtLattice, USign};
use g2gt::linalg::{fmt_q, QMatrix};
use g2gt::polyengine::ExponentVector;
use g2gt::relations::{all_relations, certify, o8_control_element, sample_g2_elements};
use g2gt::representation::{
    adjointness_failures, assemble, block_orthogonal, casimir_oracle, check_highest_vector, dimension_report,
    eigen_blocks, format_build, gt_basis, highest_vector, invariance_failures, scalar_of, sl3_branching, G2Context,
    GeneratorMatrices, IrrepBuild, RepSpace, Span,
};
use g2gt::series::{operators, residual_failures, Convention, SeriesEngine, SeriesOptions, System};
use g2gt::verify::{criterion_1, verify_all, Fault, VerifyConfig};

const OUT_DIR_VAR: &str = "G2GT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "g2gt", version, about = "Exact A-GKZ realizations and Gelfand-Tsetlin bases for g2")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Report file. Without it the report goes to $G2GT_OUT_DIR/<command>.txt, or stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Octonion model and derivation algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Relation lattice for a flavor.
    Lattice {
        #[command(subcommand)]
        action: LatticeCmd,
    },
    /// Hypergeometric series for one exponent vector.
    Series {
        #[command(subcommand)]
        action: SeriesCmd,
    },
    /// Certify the relation set on sampled group elements.
    Relations {
        #[command(subcommand)]
        action: RelationsCmd,
    },
    /// Build an irreducible representation.
    Rep {
        #[command(subcommand)]
        action: RepCmd,
    },
    /// Run the acceptance matrix.
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    Check,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    Emit {
        #[arg(long, value_enum, default_value_t = FlavorArg::G2)]
        flavor: FlavorArg,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    Build {
        /// File holding the exponent vector, e.g. `{[-4]:1, [-4,-3]:2}`.
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, value_enum, default_value_t = FlavorArg::G2)]
        flavor: FlavorArg,
        /// Gamma-series (plain GKZ) or the A-GKZ series.
        #[arg(long, value_enum, default_value_t = SystemArg::Agkz)]
        system: SystemArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Binomial)]
        convention: ConventionArg,
    },
}

#[derive(Subcommand, Debug)]
enum RelationsCmd {
    Certify {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum RepCmd {
    Build(RepArgs),
}

#[derive(Args, Debug)]
struct RepArgs {
    #[arg(long)]
    alpha: u32,
    #[arg(long)]
    beta: u32,
    /// Orthogonalize into the GT basis and tabulate eigenvalues.
    #[arg(long)]
    gt: bool,
    /// Casimir matrices and their scalars.
    #[arg(long)]
    casimirs: bool,
    /// Generator matrices to print: H1, H2, Eab (sl3 units), or Di_j (e.g. D-4_-3).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    matrices: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    All {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Gl8,
    O8,
    G2,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Gl8 => Flavor::Gl8,
            FlavorArg::O8 => Flavor::O8,
            FlavorArg::G2 => Flavor::G2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemArg {
    Gamma,
    Agkz,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Binomial,
    Printed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    Omega,
}

/// Machine-readable verification lines appended to every report.
#[derive(Default)]
struct Checks(Vec<(String, bool, String)>);

impl Checks {
    fn add(&mut self, name: &str, ok: bool, witness: impl Into<String>) {
        self.0.push((name.to_string(), ok, witness.into()));
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|c| c.1)
    }

    fn render(&self, s: &mut String) {
        let _ = writeln!(s, "[verification]");
        for (name, ok, w) in &self.0 {
            let status = if *ok { "pass" } else { "fail" };
            if w.is_empty() {
                let _ = writeln!(s, "{name} {status}");
            } else {
                let _ = writeln!(s, "{name} {status} {w}");
            }
        }
        let _ = writeln!(s, "status {}", if self.passed() { "pass" } else { "fail" });
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build_global() {
        eprintln!("thread pool: {e}");
        return ExitCode::from(1);
    }
    let (name, result) = match &cli.cmd {
        Cmd::Algebra { action: AlgebraCmd::Check } => ("algebra-check", algebra_check()),
        Cmd::Lattice { action: LatticeCmd::Emit { flavor } } => ("lattice-emit", lattice_emit(*flavor)),
        Cmd::Series { action: SeriesCmd::Build { gamma, flavor, system, convention } } => {
            ("series-build", series_build(gamma, *flavor, *system, *convention))
        }
        Cmd::Relations { action: RelationsCmd::Certify { samples, seed } } => ("relations-certify", relations_certify(*samples, *seed)),
        Cmd::Rep { action: RepCmd::Build(args) } => ("rep-build", rep_build(args)),
        Cmd::Verify { action: VerifyCmd::All { samples, seed, inject_fault } } => {
            let cfg = VerifyConfig {
                samples: *samples,
                seed: *seed,
                fault: inject_fault.map(|FaultArg::Omega| Fault::Omega),
            };
            let (crit, report) = verify_all(&cfg);
            ("verify-all", Ok((report, crit.iter().all(|c| c.passed))))
        }
    };
    let (report, ok) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let target = cli.out.clone().or_else(|| std::env::var_os(OUT_DIR_VAR).map(|d| PathBuf::from(d).join(format!("{name}.txt"))));
    match target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(dir) {
                    eprintln!("error: {}: {e}", dir.display());
                    return ExitCode::from(1);
                }
            }
            if let Err(e) = std::fs::write(&path, &report) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
            println!("{name}: {} -> {}", if ok { "pass" } else { "fail" }, path.display());
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(report.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: stdout: {e}");
                    return ExitCode::from(1);
                }
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

type Outcome = Result<(String, bool), String>;

fn algebra_check() -> Outcome {
    let model = build_split_octonions().map_err(|e| e.to_string())?;
    let alg = derivation_algebra(&model).map_err(|e| e.to_string())?;
    let mut s = String::from("algebra check\n[structure_constants]\n");
    for i in INDICES {
        for j in INDICES {
            let p = model.product(i, j);
            let terms: Vec<String> = INDICES
                .iter()
                .filter(|&&k| !num_traits::Zero::is_zero(p.coord(k)))
                .map(|&k| format!("{}*e{k}", fmt_q(p.coord(k))))
                .collect();
            if !terms.is_empty() {
                let _ = writeln!(s, "e{i} e{j} = {}", terms.join(" + "));
            }
        }
    }
    let _ = writeln!(s, "[basis] {}", alg.basis.len());
    for (n, b) in alg.basis.iter().enumerate() {
        let _ = writeln!(s, "basis {n}");
        s.push_str(&format_matrix(b));
    }
    let _ = writeln!(s, "[roots]");
    for r in &alg.roots {
        let _ = writeln!(s, "root {:?} positive {}", r.weight, r.positive);
    }
    for k in 3..=7 {
        let w = invariant_tensor(&model, k);
        let _ = writeln!(s, "[omega_{k}] {} entries", w.entries.len());
        for (x, v) in &w.entries {
            let _ = writeln!(s, "{x} {v}");
        }
    }
    let c = criterion_1();
    let mut checks = Checks::default();
    checks.add("model_self_check", model.self_check().is_ok(), "octonion identities");
    for d in &c.detail {
        checks.add("algebra", d.starts_with("[ok]"), d.clone());
    }
    checks.render(&mut s);
    Ok((s, checks.passed()))
}

fn lattice_emit(flavor: FlavorArg) -> Outcome {
    let model = build_split_octonions().map_err(|e| e.to_string())?;
    let lat = GtLattice::build(flavor.into(), Some(&model), USign::Jacobi).map_err(|e| e.to_string())?;
    let mut s = String::from("lattice emit\n");
    s.push_str(&lat.report());
    let mut checks = Checks::default();
    let missing = lat.all_generators().filter(|g| !lat.contains(&g.vec)).count();
    checks.add("generators_in_lattice", missing == 0, format!("{missing} outside"));
    checks.render(&mut s);
    Ok((s, checks.passed()))
}

/// Parses `[i,j,...]:e` entries separated by commas or whitespace, optionally braced.
fn parse_gamma(text: &str) -> Result<ExponentVector, String> {
    let mut pairs = Vec::new();
    let mut rest = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let open = rest.strip_prefix('[').ok_or_else(|| format!("expected '[' at {rest:?}"))?;
        let close = open.find(']').ok_or("unclosed '['")?;
        let idx = open[..close]
            .split(',')
            .map(|t| t.trim().parse::<i8>().map_err(|e| format!("index {t:?}: {e}")))
            .collect::<Result<Vec<i8>, String>>()?;
        let set = IndexSet::new(&idx).map_err(|e| e.to_string())?;
        let after = open[close + 1..].trim_start().strip_prefix(':').ok_or("expected ':' after set")?.trim_start();
        let end = after.find(|c: char| c == ',' || c.is_whitespace()).unwrap_or(after.len());
        let e: i64 = after[..end].parse().map_err(|e| format!("exponent {:?}: {e}", &after[..end]))?;
        pairs.push((set, e));
        rest = &after[end..];
    }
    Ok(ExponentVector::from_pairs(pairs))
}

fn series_build(path: &PathBuf, flavor: FlavorArg, system: SystemArg, convention: ConventionArg) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let gamma = parse_gamma(&text)?;
    let model = build_split_octonions().map_err(|e| e.to_string())?;
    let lat = GtLattice::build(flavor.into(), Some(&model), USign::Jacobi).map_err(|e| e.to_string())?;
    let opts = SeriesOptions {
        convention: match convention {
            ConventionArg::Binomial => Convention::Binomial,
            ConventionArg::Printed => Convention::Printed,
        },
        ..SeriesOptions::default()
    };
    let engine = SeriesEngine::new(&lat, opts);
    let (out, sys) = match system {
        SystemArg::Gamma => (engine.gamma_series(&gamma), System::Gkz),
        SystemArg::Agkz => (engine.agkz_series(&gamma), System::Agkz),
    };
    let out = out.map_err(|e| e.to_string())?;
    let mut s = String::new();
    let _ = writeln!(s, "series build gamma {gamma} flavor {flavor:?} system {system:?} convention {convention:?}");
    let _ = writeln!(s, "terms {} truncated {} t3_terms {} shifts {}", out.poly.len(), out.truncated, out.t3_terms, out.shifts.len());
    let _ = writeln!(s, "certificate {}", out.certificate);
    let _ = writeln!(s, "[polynomial]");
    s.push_str(&out.poly.serialize());
    let mut checks = Checks::default();
    let bad = residual_failures(&out.poly, &operators(&lat, sys));
    checks.add("solves_system", bad.is_empty(), format!("{} failing operators {}", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join(" ")));
    checks.add("nonzero", !out.poly.is_zero(), format!("{} terms", out.poly.len()));
    checks.render(&mut s);
    Ok((s, checks.passed()))
}

fn relations_certify(samples: usize, seed: u64) -> Outcome {
    let model = build_split_octonions().map_err(|e| e.to_string())?;
    let alg = derivation_algebra(&model).map_err(|e| e.to_string())?;
    let rels = all_relations(&model);
    let elems = sample_g2_elements(&alg, samples, seed);
    let control = o8_control_element(&alg, seed);
    let cert = certify(&rels, &elems, &control);
    let mut s = String::new();
    let _ = writeln!(s, "relations certify samples {samples} seed {seed}");
    let mut checks = Checks::default();
    for (kind, n) in &cert.counts {
        let fails: Vec<&(String, usize, usize)> = cert.failures.iter().filter(|f| f.0 == *kind || (kind == "pluecker" && f.0.starts_with("pluecker"))).collect();
        let _ = writeln!(s, "{kind} relations {n} nonzero {}", fails.len());
        for (k, r, e) in fails.iter().take(10) {
            let _ = writeln!(s, "  counterexample {k} relation #{r} on sample #{e}");
            let _ = writeln!(s, "{}", rels[*r].poly.serialize().trim_end());
        }
        checks.add(kind, fails.is_empty(), format!("{n} relations x {} samples", elems.len()));
    }
    checks.add(
        "control_detects",
        !cert.control_violations.is_empty(),
        format!("{}: {}", cert.control_label, cert.control_violations.join(" ")),
    );
    checks.render(&mut s);
    Ok((s, checks.passed()))
}

fn named_matrix(mats: &GeneratorMatrices, ctx: &G2Context, space: &RepSpace, name: &str) -> Result<QMatrix, String> {
    if let Some((_, z)) = ctx.named_elements().into_iter().find(|(n, _)| n == name) {
        return space.matrix_of(name, |f| g2gt::representation::act_matrix(&z, f)).map_err(|e| e.to_string());
    }
    if let Some(ab) = name.strip_prefix('E') {
        let d: Vec<u8> = ab.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        if d.len() == 2 && d.iter().all(|x| (1..=3).contains(x)) {
            return Ok(mats.sl3[&(d[0], d[1])].clone());
        }
    }
    if let Some((i, j)) = name.strip_prefix('D').and_then(|r| r.split_once('_')) {
        if let (Ok(i), Ok(j)) = (i.parse::<i8>(), j.parse::<i8>()) {
            if let Some(m) = mats.d.get(&(i, j)) {
                return Ok(m.clone());
            }
        }
    }
    Err(format!("unknown matrix {name:?}"))
}

fn rep_build(args: &RepArgs) -> Outcome {
    let ctx = G2Context::new().map_err(|e| e.to_string())?;
    let (a, b) = (args.alpha, args.beta);
    let mut build: IrrepBuild = assemble(&ctx, a, b).map_err(|e| e.to_string())?;
    let mut checks = Checks::default();
    let n = build.diagrams.len() as u64;
    checks.add("dimension", n == build.weyl_dim, format!("{n} diagrams, Weyl {}", build.weyl_dim));
    if n != build.weyl_dim {
        if let Ok(r) = dimension_report(&ctx, &build) {
            checks.add("dimension_report", false, r.to_string().replace('\n', "; "));
        }
    }
    let bad: Vec<usize> = (0..build.basis.len()).filter(|&k| !residual_failures(&build.basis[k], &ctx.ops_agkz).is_empty()).collect();
    checks.add("solution_property", bad.is_empty(), format!("{} of {} with nonzero residual {bad:?}", bad.len(), build.basis.len()));
    let span = Span::of(&build.basis);
    checks.add("independent", span.dim() == build.basis.len(), format!("rank {} of {}", span.dim(), build.basis.len()));
    let hv = check_highest_vector(&ctx, a, b);
    checks.add("highest_vector", hv.passed() && span.contains(&highest_vector(a, b)), format!("weight {:?}, in span {}", hv.weight.as_ref().map(|(x, y)| (fmt_q(x), fmt_q(y))), span.contains(&highest_vector(a, b))));
    let inv = invariance_failures(&ctx, &build.basis);
    checks.add("invariance", inv.is_empty(), inv.iter().take(3).cloned().collect::<Vec<_>>().join("; "));
    let adj = adjointness_failures(&build.basis);
    checks.add("adjointness", adj.is_empty(), format!("{} failing pairs", adj.len()));

    let mut extra = String::new();
    if args.gt || args.casimirs || !args.matrices.is_empty() {
        match gt_basis(&ctx, &mut build) {
            Err(e) => checks.add("gt_basis", false, e.to_string()),
            Ok(mats) => {
                if args.gt {
                    let eig = build.eigen_table.iter().all(|r| r.c2_sl3.is_some() && r.c3_sl3.is_some() && r.c2_g2.is_some());
                    checks.add("gt_eigenvectors", eig, format!("{} GT vectors", build.gt_basis.len()));
                    let c2: Vec<_> = build.eigen_table.iter().map(|r| r.c2_g2.clone()).collect();
                    checks.add("c2_constant", c2.windows(2).all(|w| w[0] == w[1]), "");
                    let blocks = eigen_blocks(&build.eigen_table);
                    let oracle = sl3_branching(a, b);
                    checks.add("sl3_blocks", blocks.as_ref() == Some(&oracle), format!("{blocks:?} oracle {oracle:?}"));
                    checks.add("block_orthogonal", eig && block_orthogonal(&build), "");
                }
                if args.casimirs {
                    let _ = writeln!(extra, "[casimirs]");
                    for (label, m) in [
                        ("C2_g2", mats.casimir(CasimirKind::C2G2)),
                        ("C6_g2", mats.c6_block_trace()),
                        ("C2_sl3", mats.casimir(CasimirKind::C2Sl3)),
                        ("C3_sl3", mats.casimir(CasimirKind::C3Sl3)),
                    ] {
                        let _ = writeln!(extra, "{label} scalar {}", scalar_of(&m).map(|x| fmt_q(&x)).unwrap_or_else(|| "none".into()));
                        extra.push_str(&format_matrix(&m));
                    }
                    let c2 = scalar_of(&mats.casimir(CasimirKind::C2G2));
                    checks.add("c2_scalar", c2.is_some(), format!("{} (quadratic-form oracle {})", c2.map(|x| fmt_q(&x)).unwrap_or_else(|| "none".into()), casimir_oracle(a, b)));
                }
                if !args.matrices.is_empty() {
                    let space = RepSpace::new(build.basis.clone()).map_err(|e| e.to_string())?;
                    let _ = writeln!(extra, "[matrices]");
                    for name in &args.matrices {
                        match named_matrix(&mats, &ctx, &space, name) {
                            Ok(m) => {
                                let _ = writeln!(extra, "matrix {name}");
                                extra.push_str(&format_matrix(&m));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    let mut s = format_build(&build);
    if args.gt && !build.gt_basis.is_empty() {
        let _ = writeln!(s, "[gt_basis]");
        for (k, v) in build.gt_basis.iter().enumerate() {
            let _ = writeln!(s, "gt {k} diagram {}", build.eigen_table.get(k).map(|r| r.diagram.as_str()).unwrap_or("?"));
            s.push_str(&v.serialize());
        }
    }
    s.push_str(&extra);
    checks.render(&mut s);
    Ok((s, checks.passed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_file_formats() {
        let g = parse_gamma("{[-4]:1, [-4,-3]:2}\n").unwrap();
        assert_eq!(g.to_string(), "{[-4]:1, [-4,-3]:2}");
        assert_eq!(parse_gamma("[1]:3\n[2, 3]:-1").unwrap().total_degree(), 2);
        assert!(parse_gamma("[5]:1").is_err());
        assert!(parse_gamma("[1]").is_err());
    }
}
