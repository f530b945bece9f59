use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;

use cwkit::classify::{classify_named, classify_pair, colouring_status, ClassificationVerdict, ClassifyError};
use cwkit::decomp::{
    canonical_totally_decompose, check_three_part_conditions, expression_from_tree, total_three_decompose, totally_k_decompose,
    KPartition,
};
use cwkit::gen::{enumerate_small, enumerate_small_unlabelled, generate, GenError, GenSpec, Generated, ENUMERATE_MAX_N};
use cwkit::graph::Graph;
use cwkit::kexpr::{
    chromatic_oracle, chromatic_via_expression, distinct_label_expr, exact_cliquewidth, expr_for_max_degree_2, star_forest_expr, KExpr,
    EXACT_CW_MAX_N,
};
use cwkit::patterns::{self, FreeVerdict, Pattern};
use cwkit::pipelines::{
    chromatic_via_certificate, diamond_reduce, reduce_k3_c5_s123, ten_set_reduce, triangle_free_reduce, verify_certificate_detailed,
    Certificate, PipelineError, TenSetPartition, TriangleFreeCase,
};

use crate::{BuildMethod, ColourMethod, Cmd, DecomposeMode, ExprOp, Format};

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const CLAIM: u8 = 3;

/// A run that ends with a message on stderr.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    pub fn code(&self) -> u8 {
        self.code
    }

    fn usage(msg: impl fmt::Display) -> Failure {
        Failure { code: USAGE, msg: msg.to_string() }
    }

    fn negative(msg: impl fmt::Display) -> Failure {
        Failure { code: NEGATIVE, msg: msg.to_string() }
    }

    fn claim(msg: impl fmt::Display) -> Failure {
        Failure { code: CLAIM, msg: msg.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::usage(e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Failure {
        match e {
            PipelineError::Claim { .. } => Failure::claim(e),
            _ => Failure::negative(e),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        match e {
            ClassifyError::Contradiction { .. } => Failure::claim(e),
            _ => Failure::usage(e),
        }
    }
}

type Out<'a> = &'a mut dyn Write;

pub fn run(cmd: &Cmd, out: Out) -> Result<u8, Failure> {
    match cmd {
        Cmd::Check { free, cap, graph } => check(out, free, *cap, graph),
        Cmd::Decompose { mode, parts, expr, graph } => decompose(out, *mode, parts.as_deref(), *expr, graph),
        Cmd::Expr { op } => expr(out, op),
        Cmd::Colour { method, expr, graph } => colour(out, *method, expr.as_deref(), graph),
        Cmd::Reduce { diamond, odd_cycle, triangle_free, ten_set, emit_cert, graph } => {
            let pipeline = if *diamond {
                Pipeline::Diamond
            } else if *odd_cycle {
                Pipeline::OddCycle
            } else if let Some(h) = triangle_free {
                Pipeline::TriangleFree(TriangleFreeCase::parse(h).ok_or_else(|| {
                    Failure::usage(format!("unknown case {h:?}; expected one of P1+2P2, P1+P2+P3, P1+P5, S122"))
                })?)
            } else {
                Pipeline::TenSet(ten_set.clone().unwrap_or_default())
            };
            reduce(out, &pipeline, emit_cert.as_deref(), graph)
        }
        Cmd::Verify { cert, graph } => verify(out, cert, graph),
        Cmd::Classify { pair, colouring, scan } => classify(out, pair.as_deref(), colouring.as_deref(), *scan),
        Cmd::Census { n, free, labelled, list } => census(out, *n, free, *labelled, *list),
        Cmd::Gen { spec, count, format, pairs } => gen(out, spec.as_deref(), *count, *format, pairs),
    }
}

fn echo(out: Out, cmd: &str, items: &[(&str, String)]) -> io::Result<()> {
    writeln!(out, "# cwkit {cmd}")?;
    for (k, v) in items {
        writeln!(out, "# {k}={v}")?;
    }
    Ok(())
}

fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("{arg}: {e}")))
}

fn read_path(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Edge-list text, graph6, or `pattern:NAME`. Lines starting with `#` are skipped.
pub fn load_graph(arg: &str) -> Result<Graph, Failure> {
    if let Some(name) = arg.strip_prefix("pattern:") {
        return patterns::parse_pattern(name).map_err(Failure::usage);
    }
    let text = read_source(arg)?;
    let body: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let Some(first) = body.first() else {
        return Err(Failure::usage(format!("{arg}: no graph found")));
    };
    let is_text = first.split_whitespace().count() == 2 && first.split_whitespace().all(|t| t.parse::<usize>().is_ok());
    let g = if is_text { Graph::parse_text(&body.join("\n")) } else { Graph::from_graph6(first) };
    g.map_err(|e| Failure::usage(format!("{arg}: {e}")))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

fn check(out: Out, free: &[String], cap: usize, graph: &str) -> Result<u8, Failure> {
    echo(out, "check", &[("free", join(free)), ("cap", cap.to_string()), ("graph", graph.into())])?;
    let pats = free.iter().map(|s| Pattern::named(s)).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?;
    if let Some(p) = pats.iter().find(|p| p.graph.n() > cap) {
        return Err(Failure::usage(format!("pattern {} has {} vertices, cap is {cap}", p.name, p.graph.n())));
    }
    let g = load_graph(graph)?;
    match patterns::is_free(&g, &pats) {
        FreeVerdict::Free => {
            writeln!(out, "free")?;
            Ok(OK)
        }
        FreeVerdict::Contains(v) => {
            writeln!(out, "contains {} at {}", v.pattern, join(&v.embedding))?;
            Ok(NEGATIVE)
        }
    }
}

fn decompose(out: Out, mode: DecomposeMode, parts: Option<&[usize]>, with_expr: bool, graph: &str) -> Result<u8, Failure> {
    let mode_name = match mode {
        DecomposeMode::Canonical => "canonical",
        DecomposeMode::K => "k",
        DecomposeMode::Three => "three",
    };
    echo(
        out,
        "decompose",
        &[("mode", mode_name.into()), ("parts", parts.map_or("auto".into(), join)), ("expr", with_expr.to_string()), ("graph", graph.into())],
    )?;
    let g = load_graph(graph)?;
    let p = match (parts, mode) {
        (Some(a), DecomposeMode::Canonical) => KPartition::from_assignment(&g, a, 2).map_err(Failure::usage)?,
        (Some(a), DecomposeMode::Three) => KPartition::from_assignment(&g, a, 3).map_err(Failure::usage)?,
        (Some(a), DecomposeMode::K) => {
            let k = a.iter().max().map_or(1, |m| m + 1);
            KPartition::from_assignment(&g, a, k).map_err(Failure::usage)?
        }
        (None, DecomposeMode::Canonical) => {
            KPartition::bipartition(&g).ok_or_else(|| Failure::usage("graph is not bipartite; pass --parts"))?
        }
        (None, _) => return Err(Failure::usage("this mode needs --parts")),
    };
    let tree = match mode {
        DecomposeMode::Canonical => canonical_totally_decompose(&g, &p).map_err(Failure::usage)?,
        DecomposeMode::K => totally_k_decompose(&g, &p).map_err(Failure::usage)?,
        DecomposeMode::Three => {
            if let Err(e) = check_three_part_conditions(&g, &p) {
                writeln!(out, "conditions fail: {e}")?;
                return Ok(NEGATIVE);
            }
            Some(total_three_decompose(&g, &p).map_err(Failure::claim)?)
        }
    };
    let Some(t) = tree else {
        writeln!(out, "not totally decomposable")?;
        return Ok(NEGATIVE);
    };
    writeln!(out, "decomposable")?;
    writeln!(out, "{t}")?;
    if with_expr {
        let e = expression_from_tree(&t, p.k()).map_err(Failure::claim)?;
        if !e.validate_against(&g) {
            return Err(Failure::claim("expression read off the tree does not build the graph"));
        }
        writeln!(out, "width {}", e.width())?;
        writeln!(out, "{e}")?;
    }
    Ok(OK)
}

fn load_expr(path: &Path) -> Result<KExpr, Failure> {
    KExpr::parse(&read_path(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn expr(out: Out, op: &ExprOp) -> Result<u8, Failure> {
    match op {
        ExprOp::Build { method, max_k, graph } => {
            let name = match method {
                BuildMethod::Exact => "exact",
                BuildMethod::Distinct => "distinct",
                BuildMethod::MaxDegree2 => "max-degree-2",
                BuildMethod::StarForest => "star-forest",
            };
            echo(out, "expr build", &[("method", name.into()), ("max-k", max_k.to_string()), ("graph", graph.into())])?;
            let g = load_graph(graph)?;
            let e = match method {
                BuildMethod::Exact => match exact_cliquewidth(&g, *max_k).map_err(Failure::usage)? {
                    Some((_, e)) => Some(e),
                    None => {
                        writeln!(out, "no expression of width at most {max_k}")?;
                        return Ok(NEGATIVE);
                    }
                },
                BuildMethod::Distinct => distinct_label_expr(&g),
                BuildMethod::MaxDegree2 => Some(expr_for_max_degree_2(&g).map_err(Failure::negative)?),
                BuildMethod::StarForest => match star_forest_expr(&g) {
                    Some(e) => Some(e),
                    None => {
                        writeln!(out, "not a star forest")?;
                        return Ok(NEGATIVE);
                    }
                },
            };
            let e = e.ok_or_else(|| Failure::usage("the empty graph has no expression"))?;
            writeln!(out, "width {}", e.width())?;
            writeln!(out, "{e}")?;
            Ok(OK)
        }
        ExprOp::Eval { expr } => {
            echo(out, "expr eval", &[("expr", expr.display().to_string())])?;
            let lg = load_expr(expr)?.evaluate().map_err(Failure::usage)?;
            writeln!(out, "width {}", lg.width)?;
            writeln!(out, "ids {}", join(&lg.ids))?;
            write!(out, "{}", lg.graph.to_text())?;
            Ok(OK)
        }
        ExprOp::Validate { expr, graph } => {
            echo(out, "expr validate", &[("expr", expr.display().to_string()), ("graph", graph.into())])?;
            let e = load_expr(expr)?;
            let g = load_graph(graph)?;
            if e.validate_against(&g) {
                writeln!(out, "valid width {}", e.width())?;
                Ok(OK)
            } else {
                writeln!(out, "invalid")?;
                Ok(NEGATIVE)
            }
        }
    }
}

fn colour(out: Out, method: ColourMethod, expr_path: Option<&Path>, graph: &str) -> Result<u8, Failure> {
    let name = match method {
        ColourMethod::Oracle => "oracle",
        ColourMethod::Expression => "expression",
        ColourMethod::Certificate => "certificate",
    };
    let expr_name = expr_path.map_or("-".into(), |p| p.display().to_string());
    echo(out, "colour", &[("method", name.into()), ("expr", expr_name), ("graph", graph.into())])?;
    let g = load_graph(graph)?;
    match method {
        ColourMethod::Oracle => {
            writeln!(out, "chromatic {}", chromatic_oracle(&g).map_err(Failure::usage)?)?;
        }
        ColourMethod::Expression => {
            let e = match expr_path {
                Some(p) => {
                    let e = load_expr(p)?;
                    if !e.validate_against(&g) {
                        return Err(Failure::usage("expression does not build the graph"));
                    }
                    e
                }
                None => {
                    if g.n() > EXACT_CW_MAX_N {
                        return Err(Failure::usage(format!("exact search takes at most {EXACT_CW_MAX_N} vertices; pass --expr")));
                    }
                    exact_cliquewidth(&g, EXACT_CW_MAX_N).map_err(Failure::usage)?.expect("width never exceeds n").1
                }
            };
            writeln!(out, "width {}", e.width())?;
            writeln!(out, "chromatic {}", chromatic_via_expression(&e).map_err(Failure::usage)?)?;
        }
        ColourMethod::Certificate => {
            let c = diamond_reduce(&g)?;
            let col = chromatic_via_certificate(&g, &c)?;
            writeln!(out, "root-expression {}", col.root_expression)?;
            writeln!(out, "oracle-nodes {}", col.oracle_nodes)?;
            writeln!(out, "chromatic {}", col.chromatic)?;
        }
    }
    Ok(OK)
}

enum Pipeline {
    Diamond,
    OddCycle,
    TriangleFree(TriangleFreeCase),
    TenSet(Vec<usize>),
}

fn reduce(out: Out, pipeline: &Pipeline, emit: Option<&Path>, graph: &str) -> Result<u8, Failure> {
    let name = match pipeline {
        Pipeline::Diamond => "diamond".to_string(),
        Pipeline::OddCycle => "odd-cycle".to_string(),
        Pipeline::TriangleFree(case) => format!("triangle-free {}", case.name()),
        Pipeline::TenSet(classes) => format!("ten-set {}", join(classes)),
    };
    let emit_name = emit.map_or("stdout".into(), |p| p.display().to_string());
    echo(out, "reduce", &[("pipeline", name), ("emit-cert", emit_name), ("graph", graph.into())])?;
    let g = load_graph(graph)?;
    let cert = match pipeline {
        Pipeline::Diamond => diamond_reduce(&g)?,
        Pipeline::OddCycle => reduce_k3_c5_s123(&g)?,
        Pipeline::TriangleFree(case) => triangle_free_reduce(&g, *case)?,
        Pipeline::TenSet(classes) => {
            if classes.len() != g.n() || classes.iter().any(|&c| c >= 10) {
                return Err(Failure::usage(format!("need one class in 0..10 per vertex, got {} for {} vertices", classes.len(), g.n())));
            }
            ten_set_reduce(&g, &TenSetPartition::from_classes(g.n(), classes))?
        }
    };
    if let Err(f) = verify_certificate_detailed(&g, &cert) {
        return Err(Failure::claim(format!("emitted certificate does not verify: {f}")));
    }
    writeln!(out, "nodes {}", cert.step_count())?;
    writeln!(out, "max-base-width {}", cert.base_widths().into_iter().max().map_or("-".into(), |w| w.to_string()))?;
    writeln!(out, "cited {}", join(cert.cited_sources().iter().map(|s| s.name())))?;
    match emit {
        Some(path) => {
            std::fs::write(path, cert.to_text())?;
            writeln!(out, "certificate {}", path.display())?;
        }
        None => write!(out, "{}", cert.to_text())?,
    }
    Ok(OK)
}

fn verify(out: Out, cert: &Path, graph: &str) -> Result<u8, Failure> {
    echo(out, "verify", &[("cert", cert.display().to_string()), ("graph", graph.into())])?;
    let c = Certificate::parse(&read_path(cert)?).map_err(Failure::usage)?;
    let g = load_graph(graph)?;
    match verify_certificate_detailed(&g, &c) {
        Ok(()) => {
            writeln!(out, "verified {} nodes", c.step_count())?;
            Ok(OK)
        }
        Err(f) => {
            writeln!(out, "rejected {f}")?;
            Ok(NEGATIVE)
        }
    }
}

const SCAN_MAX_N: usize = 5;

fn classify(out: Out, pair: Option<&[String]>, colouring: Option<&str>, scan: Option<usize>) -> Result<u8, Failure> {
    if let Some([a, b]) = pair {
        echo(out, "classify", &[("pair", format!("{a} {b}"))])?;
        writeln!(out, "{}", classify_named(a, b)?)?;
    } else if let Some(h) = colouring {
        echo(out, "classify", &[("colouring", h.into())])?;
        let g = patterns::parse_pattern(h).map_err(Failure::usage)?;
        writeln!(out, "{}", colouring_status(&g)?.name())?;
    } else if let Some(n) = scan {
        echo(out, "classify", &[("scan", n.to_string())])?;
        if n > SCAN_MAX_N {
            return Err(Failure::usage(format!("scan takes at most {SCAN_MAX_N} vertices")));
        }
        let graphs: Vec<Graph> =
            (1..=n).map(|k| enumerate_small_unlabelled(k, &[])).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?.concat();
        let mut counts = [0usize; 3];
        let mut open = Vec::new();
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs[i..] {
                let v = classify_pair(a, b)?;
                counts[match v {
                    ClassificationVerdict::Bounded(_) => 0,
                    ClassificationVerdict::Unbounded(_) => 1,
                    ClassificationVerdict::Open => 2,
                }] += 1;
                if v.is_open() {
                    open.push((a.to_graph6(), b.to_graph6()));
                }
            }
        }
        writeln!(out, "pairs {} bounded {} unbounded {} open {}", counts.iter().sum::<usize>(), counts[0], counts[1], counts[2])?;
        for (a, b) in open {
            writeln!(out, "open {a} {b}")?;
        }
    } else {
        return Err(Failure::usage("pass --pair, --colouring or --scan"));
    }
    Ok(OK)
}

fn census(out: Out, n: usize, free: &[String], labelled: bool, list: bool) -> Result<u8, Failure> {
    echo(
        out,
        "census",
        &[("n", n.to_string()), ("free", join(free)), ("labelled", labelled.to_string()), ("list", list.to_string())],
    )?;
    if n > ENUMERATE_MAX_N {
        return Err(Failure::usage(format!("census takes at most {ENUMERATE_MAX_N} vertices")));
    }
    let pats = free.iter().map(|s| Pattern::named(s)).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?;
    for size in 0..=n {
        let graphs: Vec<Graph> = if labelled {
            enumerate_small(size, &pats).map_err(Failure::usage)?.collect()
        } else {
            enumerate_small_unlabelled(size, &pats).map_err(Failure::usage)?
        };
        writeln!(out, "n={size} count={}", graphs.len())?;
        if list {
            for g in &graphs {
                writeln!(out, "{}", g.to_graph6())?;
            }
        }
    }
    Ok(OK)
}

fn gen(out: Out, spec_path: Option<&Path>, count: u64, format: Format, pairs: &[String]) -> Result<u8, Failure> {
    let mut text = match spec_path {
        Some(p) => read_path(p)?,
        None => String::new(),
    };
    for kv in pairs {
        text.push('\n');
        text.push_str(kv);
    }
    let spec = GenSpec::parse(&text).map_err(Failure::usage)?;
    let format_name = match format {
        Format::Text => "text",
        Format::Graph6 => "graph6",
    };
    let mut items: Vec<(&str, String)> = vec![("count", count.to_string()), ("format", format_name.into())];
    let spec_text = spec.to_text();
    items.extend(spec_text.lines().filter_map(|l| l.split_once('=')).map(|(k, v)| (k, v.to_string())));
    echo(out, "gen", &items)?;
    for i in 0..count {
        let item = generate(&spec.with_stream(spec.stream + i)).map_err(|e| match e {
            GenError::Infeasible(_) => Failure::negative(e),
            _ => Failure::usage(e),
        })?;
        let g = item.graph();
        if count > 1 {
            writeln!(out, "# item {i}")?;
        }
        match &item {
            Generated::Plain(_) => {}
            Generated::Basic(_, b) => {
                let part: Vec<usize> = (0..g.n()).map(|x| (0..3).find(|&k| b.v[k].contains(x)).unwrap_or(3)).collect();
                writeln!(out, "# triangles {}", b.triangles.iter().map(join).collect::<Vec<_>>().join(" "))?;
                writeln!(out, "# parts {}", join(part))?;
            }
            Generated::TenSet(_, p) => {
                let classes = p.classes(g.n()).map_err(|x| Failure::claim(format!("vertex {x} has no class")))?;
                writeln!(out, "# classes {}", join(classes))?;
            }
            Generated::Decomposable(_, p, _) => {
                writeln!(out, "# parts {}", join((0..g.n()).map(|v| p.part_of(v))))?;
            }
        }
        match format {
            Format::Text => write!(out, "{}", g.to_text())?,
            Format::Graph6 => writeln!(out, "{}", g.to_graph6())?,
        }
    }
    Ok(OK)
}
