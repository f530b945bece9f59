//! The eight release criteria. Runs without the libtest harness so every criterion
//! prints one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;

use cwkit::classify::{classify_named, classify_pair, equivalent};
use cwkit::decomp::{canonical_totally_decompose, check_three_part_conditions, expression_from_tree, total_three_decompose, KPartition};
use cwkit::gen::{
    enumerate_small_unlabelled, random_free, rng_for, synthesize_basic, synthesize_ten_set, synthesize_totally_decomposable, GenError,
    GenMode, GenSpec,
};
use cwkit::graph::Graph;
use cwkit::kexpr::{
    chromatic_oracle, chromatic_via_expression, clique_expr, distinct_label_expr, edgeless_expr, exact_cliquewidth, expr_for_max_degree_2,
    star_forest_expr, KExpr,
};
use cwkit::patterns::{self, parse_pattern, Pattern};
use cwkit::pipelines::{
    basic_expression, chromatic_via_certificate, diamond_reduce, reassemble_expression, recognize_basic, reduce_k3_c5_s123,
    ten_set_reduce, triangle_free_reduce, verify_certificate_detailed, Certificate, PipelineError, TriangleFreeCase,
};

const SEED: u64 = 20_160_404;

static EMITTED: AtomicUsize = AtomicUsize::new(0);
static REJECTED: AtomicUsize = AtomicUsize::new(0);
static CLAIMS: AtomicUsize = AtomicUsize::new(0);
static ERRORS: AtomicUsize = AtomicUsize::new(0);

struct Report {
    pass: bool,
    detail: String,
}

fn report(pass: bool, detail: impl Into<String>) -> Report {
    Report { pass, detail: detail.into() }
}

/// Runs a pipeline on an input that meets its hypotheses and tallies the outcome for criterion 8.
fn certify(g: &Graph, result: Result<Certificate, PipelineError>) -> Option<Certificate> {
    match result {
        Ok(c) => {
            EMITTED.fetch_add(1, Ordering::Relaxed);
            match verify_certificate_detailed(g, &c) {
                Ok(()) => Some(c),
                Err(f) => {
                    REJECTED.fetch_add(1, Ordering::Relaxed);
                    eprintln!("certificate rejected: {f}\n{}", g.to_text());
                    None
                }
            }
        }
        Err(e) => {
            let counter = if e.is_claim_violation() { &CLAIMS } else { &ERRORS };
            counter.fetch_add(1, Ordering::Relaxed);
            eprintln!("pipeline failed: {e}\n{}", g.to_text());
            None
        }
    }
}

fn named(names: &[&str]) -> Vec<Pattern> {
    names.iter().map(|s| Pattern::named(s).unwrap()).collect()
}

fn free(g: &Graph, names: &[&str]) -> bool {
    patterns::is_free(g, &named(names)).is_free()
}

fn census(max_n: usize, names: &[&str]) -> Vec<Graph> {
    let pats = named(names);
    (1..=max_n).flat_map(|n| enumerate_small_unlabelled(n, &pats).unwrap()).collect()
}

/// Every proper 2-colouring, one per choice of side for each component.
fn bipartitions(g: &Graph) -> Vec<Vec<usize>> {
    let Some(base) = g.bipartition() else { return Vec::new() };
    let comps = g.components();
    (0u32..1 << comps.len())
        .map(|mask| {
            let mut side: Vec<usize> = base.iter().map(|&c| c as usize).collect();
            for (i, c) in comps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for v in c.iter() {
                        side[v] ^= 1;
                    }
                }
            }
            side
        })
        .collect()
}

fn bipartite_census() -> Report {
    let mut checked = 0;
    let mut positive = 0;
    let mut wrong = Vec::new();
    for g in census(7, &[]).into_iter().filter(Graph::is_bipartite) {
        let expected = free(&g, &["P7", "S123"]);
        for side in bipartitions(&g) {
            let p = KPartition::from_assignment(&g, &side, 2).unwrap();
            let got = canonical_totally_decompose(&g, &p).unwrap().is_some();
            checked += 1;
            positive += usize::from(got);
            if got != expected {
                wrong.push(g.to_graph6());
            }
        }
    }
    report(wrong.is_empty(), format!("{checked} graph/bipartition pairs, {positive} decomposable, {} exceptions {:?}", wrong.len(), wrong))
}

fn three_part_bound() -> Report {
    let mut bad = Vec::new();
    let check = |g: &Graph, p: &KPartition| -> Result<(), String> {
        check_three_part_conditions(g, p).map_err(|e| format!("conditions: {e}"))?;
        let t = total_three_decompose(g, p).map_err(|e| e.to_string())?;
        let e = expression_from_tree(&t, 3).map_err(|e| e.to_string())?;
        if e.width() > 6 || !e.validate_against(g) {
            return Err(format!("width {} valid {}", e.width(), e.validate_against(g)));
        }
        Ok(())
    };
    for i in 0..1000u64 {
        let spec = GenSpec { seed: SEED, stream: i, mode: GenMode::TotallyKDecomposable { k: 3, n: 1 + (i as usize * 7) % 40 } };
        let (g, p, _) = synthesize_totally_decomposable(&spec).unwrap();
        if let Err(e) = check(&g, &p) {
            bad.push(format!("stream {i}: {e}"));
        }
    }
    let mut exhaustive = 0;
    for g in census(6, &[]) {
        let n = g.n();
        for code in 0..3usize.pow(n as u32) {
            let assignment: Vec<usize> = (0..n).map(|v| code / 3usize.pow(v as u32) % 3).collect();
            let Ok(p) = KPartition::from_assignment(&g, &assignment, 3) else { continue };
            if check_three_part_conditions(&g, &p).is_err() {
                continue;
            }
            exhaustive += 1;
            if let Err(e) = check(&g, &p) {
                bad.push(format!("{} {assignment:?}: {e}", g.to_graph6()));
            }
        }
    }
    report(bad.is_empty(), format!("1000 generated + {exhaustive} exhaustive instances, {} failures {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn basic_bound() -> Report {
    let mut rng = rng_for(SEED, 1);
    let (mut built, mut infeasible, mut attempts, mut max_width, mut max_n) = (0, 0, 0, 0, 0);
    let mut bad = Vec::new();
    while built < 500 && attempts < 5000 {
        attempts += 1;
        let p = rng.gen_range(1..=6);
        let w_sizes: Vec<[usize; 3]> = (0..p).map(|_| std::array::from_fn(|_| rng.gen_range(0..=3))).collect();
        let u_sizes: Vec<usize> = (0..p).map(|_| if rng.gen_bool(0.25) { rng.gen_range(1..=2) } else { 0 }).collect();
        let w_density = [0.0, 0.5, 1.0][rng.gen_range(0..3)];
        let spec = GenSpec { seed: SEED, stream: attempts, mode: GenMode::Basic { p, w_sizes, u_sizes, w_density } };
        if spec.n() > 60 {
            continue;
        }
        let (g, b) = match synthesize_basic(&spec) {
            Ok(x) => x,
            Err(GenError::Infeasible(_)) => {
                infeasible += 1;
                continue;
            }
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        built += 1;
        max_n = max_n.max(g.n());
        match basic_expression(&g, &b) {
            Ok(e) if e.width() <= 9 && e.validate_against(&g) => max_width = max_width.max(e.width()),
            Ok(e) => bad.push(format!("width {} on\n{}", e.width(), spec.to_text())),
            Err(e) => bad.push(format!("{e} on\n{}", spec.to_text())),
        }
    }
    report(
        built == 500 && bad.is_empty(),
        format!("{built} instances (n <= {max_n}, {infeasible} infeasible specs redrawn), max width {max_width}, {} failures {:?}", bad.len(), bad.first()),
    )
}

/// Odd cycles with false twins of cycle vertices added. Twins of two adjacent cycle
/// vertices induce S123, so a twin's anchor is redrawn until the graph stays in the class.
fn planted_cycles() -> Vec<Graph> {
    let mut out = Vec::new();
    for len in (7..=13).step_by(2) {
        for variant in 0..8u64 {
            let mut rng = rng_for(SEED, 100 + len as u64 * 8 + variant);
            let twins = variant as usize % 4;
            let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
            for t in 0..twins {
                let w = len + t;
                for _ in 0..32 {
                    let v = rng.gen_range(0..len);
                    let mut trial = edges.clone();
                    trial.extend([((v + len - 1) % len, w), ((v + 1) % len, w)]);
                    if free(&Graph::new(w + 1, &trial).unwrap(), &["K3", "C5", "S123"]) {
                        edges = trial;
                        break;
                    }
                }
            }
            out.push(Graph::new(len + twins, &edges).unwrap());
        }
    }
    out
}

fn odd_cycle_pipeline() -> Report {
    let class = ["K3", "C5", "S123"];
    let mut inputs = census(7, &class);
    let from_census = inputs.len();
    let planted = planted_cycles();
    let planted_in_class = planted.iter().filter(|g| free(g, &class)).count();
    inputs.extend(planted.into_iter().filter(|g| free(g, &class)));
    let mut bad = 0;
    let mut max_width = 0;
    for g in &inputs {
        match certify(g, reduce_k3_c5_s123(g)) {
            Some(c) => {
                let w = c.base_widths().into_iter().max().unwrap_or(0);
                max_width = max_width.max(w);
                bad += usize::from(w > 4);
            }
            None => bad += 1,
        }
    }
    report(
        bad == 0 && planted_in_class == 32,
        format!("{from_census} census graphs + {planted_in_class}/32 planted cycles, max base width {max_width}, {bad} failures"),
    )
}

fn diamond_colouring() -> Report {
    let mut bad = Vec::new();
    let mut via_expression = 0;
    for i in 0..200u64 {
        let n = 5 + i as usize % 10;
        let density = [0.3, 0.5, 0.7, 0.9][i as usize / 10 % 4];
        let spec = GenSpec {
            seed: SEED,
            stream: 1000 + i,
            mode: GenMode::RandomFree { n, patterns: vec!["diamond".into(), "P1+2P2".into()], density },
        };
        let g = random_free(&spec).unwrap();
        let Some(c) = certify(&g, diamond_reduce(&g)) else {
            bad.push(format!("stream {}", spec.stream));
            continue;
        };
        let got = chromatic_via_certificate(&g, &c).unwrap();
        via_expression += usize::from(got.root_expression);
        let want = chromatic_oracle(&g).unwrap();
        if got.chromatic != want {
            bad.push(format!("stream {}: {} vs oracle {want}", spec.stream, got.chromatic));
        }
    }
    report(bad.is_empty(), format!("200 graphs (n <= 14), {via_expression} coloured through one expression, {} disagreements {:?}", bad.len(), bad))
}

fn classifier() -> Report {
    let mut notes = Vec::new();
    let new_results = [("K3", "P1+2P2"), ("K3", "P1+P2+P3"), ("K3", "P1+P5"), ("K3", "S122"), ("diamond", "P1+2P2")];
    for (a, b) in new_results {
        let v = classify_named(a, b).unwrap();
        if v.name() != "bounded" {
            notes.push(format!("({a}, {b}) is {v}"));
        }
    }
    let open = [
        ("3P1", "co-(P1+S113)"),
        ("3P1", "co-(P2+P4)"),
        ("3P1", "co-S123"),
        ("2P1+P2", "co-(P1+P2+P3)"),
        ("2P1+P2", "co-(P1+P5)"),
        ("P1+P4", "co-(P1+2P2)"),
        ("P1+P4", "co-(P2+P3)"),
        ("2P1+P3", "co-(2P1+P3)"),
    ];
    let pairs: Vec<(Graph, Graph)> = open.iter().map(|(a, b)| (parse_pattern(a).unwrap(), parse_pattern(b).unwrap())).collect();
    for ((a, b), (ga, gb)) in open.iter().zip(&pairs) {
        let v = classify_pair(ga, gb).unwrap();
        if !v.is_open() {
            notes.push(format!("({a}, {b}) is {v}"));
        }
    }
    let mut classes: Vec<&(Graph, Graph)> = Vec::new();
    for p in &pairs {
        if !classes.iter().any(|q| equivalent((&p.0, &p.1), (&q.0, &q.1))) {
            classes.push(p);
        }
    }
    if classes.len() != 8 {
        notes.push(format!("{} open classes", classes.len()));
    }
    let small = census(4, &[]);
    let mut scanned = 0;
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            scanned += 1;
            if classify_pair(a, b).unwrap().is_open() {
                notes.push(format!("open on ({}, {})", a.to_graph6(), b.to_graph6()));
            }
        }
    }
    report(notes.is_empty(), format!("5 new results bounded, {} open classes, {scanned} small pairs scanned; {notes:?}", classes.len()))
}

fn constructions(g: &Graph) -> Vec<(&'static str, KExpr)> {
    let ids: Vec<usize> = (0..g.n()).collect();
    let mut out = Vec::new();
    out.extend(distinct_label_expr(g).map(|e| ("distinct", e)));
    out.extend(star_forest_expr(g).map(|e| ("star-forest", e)));
    if let Ok(e) = expr_for_max_degree_2(g) {
        out.push(("max-degree-2", e));
    }
    if g.m() == 0 {
        out.extend(edgeless_expr(&ids).map(|e| ("edgeless", e)));
    }
    if 2 * g.m() == g.n() * (g.n() - 1) {
        out.extend(clique_expr(&ids).map(|e| ("clique", e)));
    }
    for side in bipartitions(g) {
        let p = KPartition::from_assignment(g, &side, 2).unwrap();
        if let Some(t) = canonical_totally_decompose(g, &p).unwrap() {
            out.push(("canonical", expression_from_tree(&t, 2).unwrap()));
        }
    }
    if let Ok(b) = recognize_basic(g) {
        out.push(("basic", basic_expression(g, &b).unwrap()));
    }
    let mut certs = Vec::new();
    if free(g, &["diamond", "P1+2P2"]) {
        certs.extend(certify(g, diamond_reduce(g)));
    }
    if free(g, &["K3", "C5", "S123"]) {
        certs.extend(certify(g, reduce_k3_c5_s123(g)));
    }
    for case in TriangleFreeCase::ALL {
        if free(g, &["K3", case.name()]) {
            certs.extend(certify(g, triangle_free_reduce(g, case)));
        }
    }
    for c in certs {
        if let Some(e) = reassemble_expression(g, &c).unwrap() {
            out.push(("certificate", e));
        }
    }
    out
}

fn oracle_consistency() -> Report {
    let mut bad = Vec::new();
    let (mut graphs, mut built) = (0, 0);
    for g in census(6, &[]) {
        graphs += 1;
        let (cw, witness) = exact_cliquewidth(&g, 6).unwrap().expect("clique-width of a 6-vertex graph is at most 6");
        if witness.width() != cw || !witness.validate_against(&g) {
            bad.push(format!("{}: bad witness", g.to_graph6()));
        }
        if chromatic_via_expression(&witness).unwrap() != chromatic_oracle(&g).unwrap() {
            bad.push(format!("{}: chromatic number", g.to_graph6()));
        }
        for (name, e) in constructions(&g) {
            built += 1;
            if !e.validate_against(&g) || e.width() < cw {
                bad.push(format!("{}: {name} width {} vs exact {cw}", g.to_graph6(), e.width()));
            }
        }
    }
    report(bad.is_empty(), format!("{graphs} graphs, {built} constructions, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn certificate_integrity() -> Report {
    for g in census(7, &["diamond", "P1+2P2"]) {
        certify(&g, diamond_reduce(&g));
    }
    for case in TriangleFreeCase::ALL {
        for g in census(7, &["K3", case.name()]) {
            certify(&g, triangle_free_reduce(&g, case));
        }
        for i in 0..60u64 {
            let spec = GenSpec {
                seed: SEED,
                stream: 2000 + i,
                mode: GenMode::RandomFree { n: 8 + i as usize % 10, patterns: vec!["K3".into(), case.name().into()], density: 0.8 },
            };
            let g = random_free(&spec).unwrap();
            certify(&g, triangle_free_reduce(&g, case));
        }
    }
    let mut ten_sets = 0;
    for i in 0..100u64 {
        let mut rng = rng_for(SEED, 3000 + i);
        let v_sizes = std::array::from_fn(|_| rng.gen_range(0..=2));
        let w_sizes = std::array::from_fn(|_| rng.gen_range(0..=2));
        let spec = GenSpec { seed: SEED, stream: 3000 + i, mode: GenMode::TenSet { v_sizes, w_sizes, density: 0.5 } };
        if let Ok((g, p)) = synthesize_ten_set(&spec) {
            ten_sets += 1;
            if let Some(c) = certify(&g, ten_set_reduce(&g, &p)) {
                if c.base_widths().iter().any(|&w| w > 6) {
                    REJECTED.fetch_add(1, Ordering::Relaxed);
                }
            }
        }
    }
    let emitted = EMITTED.load(Ordering::Relaxed);
    let rejected = REJECTED.load(Ordering::Relaxed);
    let claims = CLAIMS.load(Ordering::Relaxed);
    let errors = ERRORS.load(Ordering::Relaxed);
    report(
        rejected == 0 && claims == 0 && errors == 0 && ten_sets > 0,
        format!("{emitted} certificates across all suites ({ten_sets} ten-set), {rejected} rejected, {claims} claim violations, {errors} other errors"),
    )
}

type Criterion = (&'static str, fn() -> Report, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("bipartite census", bipartite_census, Duration::from_secs(600)),
        ("three-part bound", three_part_bound, Duration::from_secs(300)),
        ("basic bound", basic_bound, Duration::from_secs(300)),
        ("odd-cycle pipeline", odd_cycle_pipeline, Duration::MAX),
        ("diamond colouring", diamond_colouring, Duration::from_secs(600)),
        ("classifier", classifier, Duration::MAX),
        ("oracle consistency", oracle_consistency, Duration::MAX),
        ("certificate integrity", certificate_integrity, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = run();
        let took = start.elapsed();
        let pass = r.pass && took <= *limit;
        failed += usize::from(!pass);
        println!("criterion {} {name}: {} ({}; {:.1}s)", i + 1, if pass { "PASS" } else { "FAIL" }, r.detail, took.as_secs_f64());
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
