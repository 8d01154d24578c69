//! The acceptance matrix as library code, shared by `verify all` and the test suite.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra_g2::{build_split_octonions, derivation_algebra, f_unit, CasimirKind};
use crate::lattice::{Flavor, GtLattice, USign};
use crate::linalg::fmt_q;
use crate::polyengine::{ExponentVector, SparsePolynomial};
use crate::relations::{all_relations, certify, minor_span_ranks, o8_control_element, sample_g2_elements, Relation, RelationKind};
use crate::representation::{
    act_matrix, adjointness_failures, assemble, check_highest_vector, cyclic_module, dimension_report, eigen_blocks,
    gt_basis, highest_vector, sl3_branching, weyl_dimension, G2Context, GeneratorMatrices, IrrepBuild, RepError, RepSpace, Span,
};
use crate::series::{differentiate, residual_failures, ud_decomposition, SeriesEngine, SeriesOptions};

/// The four representations the acceptance matrix is run on.
pub const BUILDS: [(u32, u32); 4] = [(1, 0), (0, 1), (2, 0), (1, 1)];

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Vec<String>,
}

impl Criterion {
    fn new(id: u8, name: &'static str) -> Criterion {
        Criterion { id, name, passed: true, detail: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.detail.push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.detail.push(format!("[..] {line}"));
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturb one coefficient of the first omega relation.
    Omega,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 20, seed: 7, fault: None }
    }
}

/// Shared state: the g2 context and the four assembled builds.
pub struct Workspace {
    pub ctx: G2Context,
    pub builds: BTreeMap<(u32, u32), IrrepBuild>,
}

impl Workspace {
    pub fn new() -> Result<Workspace, RepError> {
        let ctx = G2Context::new()?;
        let mut builds = BTreeMap::new();
        for (a, b) in BUILDS {
            builds.insert((a, b), assemble(&ctx, a, b)?);
        }
        Ok(Workspace { ctx, builds })
    }
}

pub fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "algebra construction");
    let model = match build_split_octonions() {
        Ok(m) => m,
        Err(e) => {
            c.check(false, format!("octonion model: {e}"));
            return c;
        }
    };
    match derivation_algebra(&model) {
        Ok(alg) => {
            c.check(alg.basis.len() == 14, format!("dim Der(O) in o8 = {}", alg.basis.len()));
            for (name, h) in [("H_a1", &alg.cartan[0]), ("H_a2", &alg.cartan[1])] {
                c.check(alg.contains(h), format!("{name} in g2"));
            }
            for (i, j) in [(-3, -2), (-4, 2)] {
                c.check(alg.contains(&f_unit(i, j)), format!("F[{i},{j}] in g2"));
            }
            c.check(alg.basis.iter().all(|d| alg.derivation_annihilates(&model, d)), "every basis element is a derivation".into());
        }
        Err(e) => c.check(false, format!("derivation algebra: {e}")),
    }
    c
}

fn corrupt(relations: &mut [Relation]) {
    if let Some(r) = relations.iter_mut().find(|r| matches!(r.kind, RelationKind::Specific(_))) {
        let (m, coef) = r.poly.terms().next().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero relation");
        r.poly.add_term(m, coef);
    }
}

pub fn criterion_2(ctx: &G2Context, cfg: &VerifyConfig) -> Criterion {
    let mut c = Criterion::new(2, "relation certification");
    let mut rels = all_relations(&ctx.model);
    if cfg.fault == Some(Fault::Omega) {
        corrupt(&mut rels);
        c.note("fault injected: first omega relation perturbed".into());
    }
    let elems = sample_g2_elements(&ctx.alg, cfg.samples, cfg.seed);
    let control = o8_control_element(&ctx.alg, cfg.seed);
    let cert = certify(&rels, &elems, &control);
    for (kind, n) in &cert.counts {
        let bad = cert.failures.iter().filter(|f| kind_group(&f.0) == *kind).count();
        c.check(bad == 0, format!("{kind}: {n} relations x {} samples, {bad} nonzero", elems.len()));
    }
    c.check(
        !cert.control_violations.is_empty(),
        format!("control {}: violated {}", cert.control_label, cert.control_violations.join(" ")),
    );
    c
}

fn kind_group(label: &str) -> String {
    if label.starts_with("pluecker") {
        "pluecker".into()
    } else {
        label.to_string()
    }
}

pub fn criterion_3(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(3, "solution property");
    for ((a, b), build) in &ws.builds {
        let bad32: Vec<usize> = (0..build.basis.len())
            .filter(|&n| !residual_failures(&build.basis[n], &ws.ctx.ops_agkz).is_empty())
            .collect();
        let bad29: Vec<usize> = (0..build.gamma_series.len())
            .filter(|&n| !residual_failures(&build.gamma_series[n], &ws.ctx.ops_gkz).is_empty())
            .collect();
        c.check(bad32.is_empty(), format!("V({a},{b}) A-GKZ series: {} of {} with nonzero residual {:?}", bad32.len(), build.basis.len(), bad32));
        c.check(bad29.is_empty(), format!("V({a},{b}) Gamma-series: {} of {} with nonzero residual {:?}", bad29.len(), build.basis.len(), bad29));
        if build.truncated {
            c.note(format!("V({a},{b}) series are box-truncated partial sums"));
        }
        c.note(format!("V({a},{b}) surviving terms with a nonzero d-coordinate: {}", build.t3_terms));
    }
    c
}

pub fn criterion_4(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(4, "dimension identities");
    for (a, b) in BUILDS {
        let oracle = weyl_dimension(a, b);
        let build = &ws.builds[&(a, b)];
        c.check(build.diagrams.len() as u64 == oracle, format!("V({a},{b}): {} diagrams, Weyl oracle {oracle}", build.diagrams.len()));
        if build.diagrams.len() as u64 != oracle {
            if let Ok(r) = dimension_report(&ws.ctx, build) {
                c.note(r.to_string());
            }
        }
    }
    if !c.passed {
        let ranks = minor_span_ranks(&ws.ctx.alg, 60, 3);
        let s: Vec<String> = ranks.iter().map(|(k, n, r)| format!("k={k}: {r}/{n}")).collect();
        c.note(format!("rank of k-minors restricted to G2 samples: {}", s.join(", ")));
    }
    c
}

pub fn criterion_5(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(5, "highest vectors");
    for ((a, b), build) in &ws.builds {
        let r = check_highest_vector(&ws.ctx, *a, *b);
        c.check(r.not_annihilated.is_empty(), format!("V({a},{b}) annihilated by positive root vectors ({} terms)", r.terms));
        let w = r.weight.as_ref().map(|(x, y)| format!("({},{})", fmt_q(x), fmt_q(y))).unwrap_or_else(|| "none".into());
        c.check(r.weight == Some((crate::linalg::q(*a as i64), crate::linalg::q(*b as i64))), format!("V({a},{b}) weight {w}"));
        c.check(r.residual_failures.is_empty(), format!("V({a},{b}) solves the A-GKZ system ({} failing operators)", r.residual_failures.len()));
        let span = Span::of(&build.basis);
        c.check(span.contains(&highest_vector(*a, *b)), format!("V({a},{b}) in span of the constructed basis (rank {})", span.dim()));
    }
    c
}

pub fn criterion_6(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(6, "invariance and adjointness");
    let elems = ws.ctx.named_elements();
    for ((a, b), build) in &ws.builds {
        let span = Span::of(&build.basis);
        let mut resid = 0;
        let mut outside = 0;
        for (_, z) in &elems {
            for f in &build.basis {
                let g = act_matrix(z, f);
                if !residual_failures(&g, &ws.ctx.ops_agkz).is_empty() {
                    resid += 1;
                }
                if !span.contains(&g) {
                    outside += 1;
                }
            }
        }
        let total = elems.len() * build.basis.len();
        c.check(resid == 0, format!("V({a},{b}) images solving the A-GKZ system: {} of {total}", total - resid));
        c.check(outside == 0, format!("V({a},{b}) images inside the constructed span: {} of {total}", total - outside));
        let adj = adjointness_failures(&build.basis);
        c.check(adj.is_empty(), format!("V({a},{b}) adjointness on {} basis pairs x 64 units: {} failures", build.basis.len().pow(2), adj.len()));
    }
    c
}

pub fn criterion_7(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(7, "Gelfand-Tsetlin basis");
    for (a, b) in [(1u32, 0u32), (0, 1)] {
        let oracle = sl3_branching(a, b);
        let mut build = ws.builds[&(a, b)].clone();
        match gt_basis(&ws.ctx, &mut build) {
            Err(e) => c.check(false, format!("V({a},{b}) orthogonalization in the order: {e}")),
            Ok(_) => {
                let all_eigen = build.eigen_table.iter().all(|r| r.c2_sl3.is_some() && r.c3_sl3.is_some() && r.c2_g2.is_some());
                c.check(all_eigen, format!("V({a},{b}) every GT vector is a joint Casimir eigenvector"));
                let c2: Vec<_> = build.eigen_table.iter().map(|r| r.c2_g2.clone()).collect();
                c.check(c2.windows(2).all(|w| w[0] == w[1]), format!("V({a},{b}) C2(g2) constant"));
                let blocks = eigen_blocks(&build.eigen_table);
                c.check(blocks.as_ref() == Some(&oracle), format!("V({a},{b}) sl3 blocks {blocks:?}, branching oracle {oracle:?}"));
            }
        }
    }
    c
}

pub fn criterion_8(ws: &Workspace) -> Criterion {
    let mut c = Criterion::new(8, "C6 fast path");
    let build = &ws.builds[&(1, 0)];
    let space = match RepSpace::new(build.basis.clone()).and_then(|s| GeneratorMatrices::new(&ws.ctx.alg, &s).map(|g| (s, g))) {
        Ok((s, g)) => {
            c.note("V(1,0) realized on the constructed basis".into());
            Ok((s, g))
        }
        Err(e) => {
            c.note(format!("constructed V(1,0) basis unusable ({e}); using the module generated by the highest vector"));
            cyclic_module(&ws.ctx.alg, &highest_vector(1, 0)).and_then(|s| GeneratorMatrices::new(&ws.ctx.alg, &s).map(|g| (s, g)))
        }
    };
    match space {
        Err(e) => c.check(false, format!("no V(1,0) realization: {e}")),
        Ok((s, g)) => {
            c.check(s.dim() == 7, format!("dimension {}", s.dim()));
            let fast = g.c6_block_trace();
            match g.c6_literal() {
                Ok(lit) => c.check(lit == fast, "block trace of the sixth power equals the 8^6-term sum".into()),
                Err(e) => c.check(false, format!("literal sum: {e}")),
            }
            let c2 = g.casimir(CasimirKind::C2G2);
            if let Some(x) = crate::representation::scalar_of(&fast) {
                c.note(format!("C6 = {} * id, C2 = {}", fmt_q(&x), crate::representation::scalar_of(&c2).map(|y| fmt_q(&y)).unwrap_or_default()));
            }
        }
    }
    c
}

pub fn criterion_9(ws: &Workspace, seed: u64) -> Criterion {
    let mut c = Criterion::new(9, "series identities");
    let engine = SeriesEngine::new(&ws.ctx.lattice, SeriesOptions::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<ExponentVector> = ws.builds.values().flat_map(|b| b.diagrams.iter().map(|d| d.witness.clone())).filter(|g| !g.is_zero()).collect();
    let mut bad = Vec::new();
    for _ in 0..10 {
        let gamma = pool.choose(&mut rng).expect("nonempty").clone();
        let support: Vec<_> = gamma.iter().map(|(x, _)| x).collect();
        let x = *support.choose(&mut rng).expect("nonzero gamma");
        let lower = gamma.combine(&ExponentVector::unit(x), -1);
        let (Ok(f), Ok(g)) = (engine.agkz_series(&gamma), engine.agkz_series(&lower)) else {
            bad.push(format!("{gamma}/{x}: series error"));
            continue;
        };
        if differentiate(&f.poly, x) != g.poly {
            bad.push(format!("{gamma} d/dA{x}"));
        }
    }
    c.check(bad.is_empty(), format!("shift rule on 10 seeded (gamma, X): {} failures {}", bad.len(), bad.join("; ")));
    // signed gl8-flavor pieces
    match GtLattice::build(Flavor::Gl8, None, USign::Jacobi) {
        Err(e) => c.check(false, format!("gl8 lattice: {e}")),
        Ok(gl) => {
            let gl_engine = SeriesEngine::new(&gl, SeriesOptions::default());
            for d in &ws.builds[&(1, 0)].diagrams {
                let lhs = match engine.agkz_series(&d.witness) {
                    Ok(f) => f.poly,
                    Err(e) => {
                        c.check(false, format!("{}: {e}", d.witness));
                        continue;
                    }
                };
                let pieces = match ud_decomposition(&engine, &d.witness) {
                    Ok(p) => p,
                    Err(e) => {
                        c.check(false, format!("{}: {e}", d.witness));
                        continue;
                    }
                };
                let mut rhs = SparsePolynomial::zero();
                let mut err = None;
                for (w, sign) in &pieces {
                    match gl_engine.agkz_series(&(&d.witness + w)) {
                        Ok(f) => rhs = &rhs + &f.poly.scale(&crate::linalg::q(*sign)),
                        Err(e) => err = Some(e),
                    }
                }
                match err {
                    Some(e) => c.check(false, format!("{}: gl8 piece failed: {e}", d.witness)),
                    None => c.check(lhs == rhs, format!("decomposition of F at {} into {} signed gl8 series", d.witness, pieces.len())),
                }
            }
        }
    }
    c
}

/// Criteria 1-9 with the configuration; criterion 10 compares two renderings.
pub fn run_matrix(cfg: &VerifyConfig) -> Vec<Criterion> {
    let mut out = vec![criterion_1()];
    match Workspace::new() {
        Err(e) => {
            for (id, name) in [(2u8, "relation certification"), (3, "solution property"), (4, "dimension identities"), (5, "highest vectors"), (6, "invariance and adjointness"), (7, "Gelfand-Tsetlin basis"), (8, "C6 fast path"), (9, "series identities")] {
                let mut c = Criterion::new(id, name);
                c.check(false, format!("setup failed: {e}"));
                out.push(c);
            }
        }
        Ok(ws) => {
            out.push(criterion_2(&ws.ctx, cfg));
            out.push(criterion_3(&ws));
            out.push(criterion_4(&ws));
            out.push(criterion_5(&ws));
            out.push(criterion_6(&ws));
            out.push(criterion_7(&ws));
            out.push(criterion_8(&ws));
            out.push(criterion_9(&ws, cfg.seed));
        }
    }
    out
}

pub fn render(criteria: &[Criterion]) -> String {
    let mut s = String::new();
    for c in criteria {
        let _ = writeln!(s, "criterion {:>2} {} {}", c.id, c.status(), c.name);
        for d in &c.detail {
            let _ = writeln!(s, "    {d}");
        }
    }
    s
}

/// Runs the matrix twice and adds the determinism criterion.
pub fn verify_all(cfg: &VerifyConfig) -> (Vec<Criterion>, String) {
    let first = run_matrix(cfg);
    let second = run_matrix(cfg);
    let (r1, r2) = (render(&first), render(&second));
    let mut c10 = Criterion::new(10, "determinism");
    c10.check(r1 == r2, format!("two in-process runs render {} and {} bytes, identical: {}", r1.len(), r2.len(), r1 == r2));
    let mut all = first;
    all.push(c10);
    let mut report = String::from("verify all\n");
    let _ = writeln!(report, "config samples {} seed {} fault {:?}", cfg.samples, cfg.seed, cfg.fault);
    report.push_str(&render(&all));
    let passed = all.iter().filter(|c| c.passed).count();
    let _ = writeln!(report, "summary {passed}/{} criteria pass", all.len());
    (all, report)
}
