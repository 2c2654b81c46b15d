use std::fmt::Write as _;

use latcoh_core::chain_ops::{check_identities, IdentityConfig};
use latcoh_core::series::{
    self, counting_identity_check, default_coefficient_count, default_periods, e_coordinate, h_series_direct,
    periodic_constant, periodic_identity_check,
};
use latcoh_core::surgery::{self, make_triple, surgery_report, vanishing_check, ClassSummary};
use latcoh_core::zu_module::{self, GradedZUModule};
use latcoh_core::{
    CharElement, Error, Lattice, Normalization, PlumbingGraph, Rational, RelativeContext, Stabilization, TowerOptions,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::{CharClassArgs, Command, DualClassArgs, NormalizationArg, TowerArgs};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit status 2.
    Usage(String),
    /// The computation could not be carried out: exit status 1.
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::DuplicateVertex(_)
            | Error::UnknownVertex(_)
            | Error::SelfLoop(_)
            | Error::DimensionMismatch { .. }
            | Error::NotCharacteristic
            | Error::Io(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A finished report. `passed` is false when a check ran but failed.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

struct Loaded {
    graph: PlumbingGraph,
    meta: Value,
}

fn load(path: &std::path::Path) -> CliResult<Loaded> {
    let graph = PlumbingGraph::load(path)?;
    let digest = Sha256::digest(graph.serialize().as_bytes());
    let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let meta = json!({
        "sha256": hash,
        "vertices": graph.ids(),
        "decorations": graph.decorations(),
    });
    Ok(Loaded { graph, meta })
}

fn parse_vector(text: &str, len: usize, what: &str) -> CliResult<Vec<i64>> {
    let v: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what}: expected comma-separated integers, got `{text}`")))?;
    if v.len() != len {
        return Err(CliError::Usage(format!("{what}: expected {len} entries, got {}", v.len())));
    }
    Ok(v)
}

fn vertex(g: &PlumbingGraph, name: &str) -> CliResult<usize> {
    if let Ok(j) = g.index_of(name) {
        return Ok(j);
    }
    match name.parse::<usize>() {
        Ok(j) if j < g.len() => Ok(j),
        _ => Err(CliError::Usage(format!("unknown vertex `{name}`"))),
    }
}

fn tower_options(t: &TowerArgs) -> TowerOptions {
    TowerOptions {
        normalization: match t.normalization {
            NormalizationArg::Absolute => Normalization::Absolute,
            NormalizationArg::Canonical => Normalization::Canonical,
        },
        levels: t.levels,
        max_level: t.max_level,
        max_points: t.max_points,
        box_radius: t.box_radius,
        ..TowerOptions::default()
    }
}

fn char_classes(lat: &Lattice, sel: &CharClassArgs) -> CliResult<Vec<usize>> {
    if let Some(c) = sel.class {
        if c >= lat.num_classes() {
            return Err(CliError::Usage(format!("class {c} out of range (0..{})", lat.num_classes())));
        }
        return Ok(vec![c]);
    }
    if let Some(rep) = &sel.rep {
        let k = CharElement::new(parse_vector(rep, lat.s(), "--rep")?);
        return Ok(vec![lat.class_id(&k)?]);
    }
    Ok((0..lat.num_classes()).collect())
}

fn dual_class(lat: &Lattice, sel: &DualClassArgs) -> CliResult<usize> {
    if let Some(c) = sel.class {
        if c >= lat.num_classes() {
            return Err(CliError::Usage(format!("class {c} out of range (0..{})", lat.num_classes())));
        }
        return Ok(c);
    }
    let x = match &sel.lprime {
        Some(t) => parse_vector(t, lat.s(), "--lprime")?,
        None => vec![0; lat.s()],
    };
    Ok(lat.dual_class_id(&x))
}

fn q(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn status_text(s: &Stabilization) -> String {
    match s {
        Stabilization::Heuristic { stable_levels } => format!("heuristic ({stable_levels} clean levels)"),
        Stabilization::Override { levels } => format!("fixed top level {levels}"),
        Stabilization::BoxStabilized { radius } => format!("box stabilised at radius {radius}"),
        Stabilization::FixedBox { radius } => format!("fixed box radius {radius}"),
        Stabilization::Bounded { top } => format!("bounded by level {top}"),
        Stabilization::NotStabilized { reason } => format!("NOT STABILISED: {reason}"),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

/// Modules of the selected classes, computed in parallel and kept in class order.
fn modules(lat: &Lattice, ids: &[usize], opts: &TowerOptions) -> CliResult<Vec<GradedZUModule>> {
    use rayon::prelude::*;
    ids.par_iter()
        .map(|&c| zu_module::module(lat, c, opts))
        .collect::<latcoh_core::Result<Vec<_>>>()
        .map_err(CliError::from)
}

fn module_json(m: &GradedZUModule) -> Value {
    let eu = zu_module::euler_characteristic(m).ok();
    let levels: Vec<Value> = m
        .parts
        .iter()
        .flat_map(|p| {
            p.entries.iter().map(move |e| {
                json!({
                    "q": p.q,
                    "level": e.level,
                    "degree": e.degree,
                    "rank": e.rank,
                    "torsion": e.torsion,
                    "reduced_rank": e.reduced_rank,
                })
            })
        })
        .collect();
    json!({
        "class_id": m.class_id,
        "representative": m.representative.a,
        "normalization": m.normalization,
        "mode": m.mode,
        "d": m.d,
        "tower_starts": m.parts.iter().map(|p| p.tower_start).collect::<Vec<_>>(),
        "tails": m.parts.iter().map(|p| &p.tail).collect::<Vec<_>>(),
        "levels": levels,
        "reduced_ranks": m.parts.iter().map(|p| p.reduced_rank).collect::<Vec<_>>(),
        "eu": eu,
        "status": m.status,
    })
}

fn module_text(out: &mut String, m: &GradedZUModule) {
    let _ = writeln!(out, "class {}  rep {:?}", m.class_id, m.representative.a);
    let _ = writeln!(out, "  status: {}", status_text(&m.status));
    match m.d {
        Some(d) => {
            let _ = writeln!(out, "  d = {}", q(&d));
        }
        None => {
            let _ = writeln!(out, "  d undefined");
        }
    }
    for p in &m.parts {
        if let Some(s) = p.tower_start {
            let _ = writeln!(out, "  H^{}: T+ from degree {}", p.q, q(&s));
        }
        for e in p.entries.iter().filter(|e| e.reduced_rank > 0) {
            let _ = writeln!(out, "  H^{}_red: Z^{} in degree {}", p.q, e.reduced_rank, q(&e.degree));
        }
        for e in p.entries.iter().filter(|e| !e.torsion.is_empty()) {
            let _ = writeln!(out, "  H^{} torsion {:?} at level {}", p.q, e.torsion, e.level);
        }
    }
    if let Ok(eu) = zu_module::euler_characteristic(m) {
        let _ = writeln!(out, "  eu = {}", q(&eu));
    }
}

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Info(g) => info(&load(&g.graph)?),
        Command::Cohomology { graph, class, tower } => cohomology(&load(&graph.graph)?, class, tower),
        Command::Surgery { graph, vertex: v, tower } => {
            let l = load(&graph.graph)?;
            let j = vertex(&l.graph, &v.vertex)?;
            surgery_cmd(&l, j, tower)
        }
        Command::Relative {
            graph,
            vertex: v,
            kbar,
            check,
            tower,
        } => {
            let l = load(&graph.graph)?;
            let j = vertex(&l.graph, &v.vertex)?;
            let k = CharElement::new(parse_vector(kbar, l.graph.len(), "--kbar")?);
            relative(&l, j, &k, *check, tower)
        }
        Command::Vanishing { graph, tower } => vanishing(&load(&graph.graph)?, tower),
        Command::Series {
            graph,
            vertex: v,
            class,
            coeffs,
        } => {
            let l = load(&graph.graph)?;
            let j = vertex(&l.graph, &v.vertex)?;
            series_cmd(&l, j, class, *coeffs)
        }
        Command::Pc {
            graph,
            vertex: v,
            class,
            periods,
            coeffs,
        } => {
            let l = load(&graph.graph)?;
            let j = vertex(&l.graph, &v.vertex)?;
            pc(&l, j, class, periods.as_deref(), *coeffs)
        }
        Command::Sw { graph, class, tower } => sw(&load(&graph.graph)?, class, tower),
        Command::CheckIdentities {
            seed,
            cases,
            max_vertices,
            window,
            u_cutoff,
        } => identities(IdentityConfig {
            seed: *seed,
            cases: *cases,
            max_vertices: *max_vertices,
            window: *window,
            u_cutoff: *u_cutoff,
        }),
        Command::IdentityCheck {
            graph,
            vertex: v,
            lprime,
            threshold,
            tower,
        } => {
            let l = load(&graph.graph)?;
            let j = vertex(&l.graph, &v.vertex)?;
            let a = parse_vector(lprime, l.graph.len(), "--lprime")?;
            identity_check(&l, j, &a, *threshold, tower)
        }
    }
}

fn info(l: &Loaded) -> CliResult<Report> {
    let g = &l.graph;
    let form = g.intersection_form();
    let definiteness = form.classify();
    let mut text = String::new();
    let _ = writeln!(text, "vertices: {}", g.len());
    let _ = writeln!(text, "det: {}", form.determinant());
    let _ = writeln!(text, "definiteness: {definiteness:?}");
    let mut result = json!({
        "determinant": form.determinant(),
        "definiteness": definiteness,
        "connected": g.is_connected(),
    });
    if !form.is_degenerate() {
        let lat = Lattice::new(g)?;
        let classes: Vec<Value> = lat
            .classes()
            .iter()
            .map(|c| json!({"class_id": c.id, "representative": c.rep.a}))
            .collect();
        let k = lat.canonical();
        result["num_classes"] = json!(lat.num_classes());
        result["classes"] = Value::Array(classes);
        result["canonical"] = json!(k.a);
        result["canonical_square"] = json!(lat.form().dual_square(&k.a));
        let _ = writeln!(text, "classes: {}", lat.num_classes());
        let _ = writeln!(text, "K (E*-coefficients): {:?}", k.a);
    }
    Ok(Report {
        json: envelope("info", Some(l), json!({}), result),
        text,
        passed: true,
    })
}

fn envelope(command: &str, l: Option<&Loaded>, parameters: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "graph": l.map(|l| l.meta.clone()),
        "parameters": parameters,
        "result": result,
    })
}

fn cohomology(l: &Loaded, sel: &CharClassArgs, t: &TowerArgs) -> CliResult<Report> {
    let lat = Lattice::new(&l.graph)?;
    let opts = tower_options(t);
    let ids = char_classes(&lat, sel)?;
    let ms = modules(&lat, &ids, &opts)?;
    let mut text = String::new();
    for m in &ms {
        module_text(&mut text, m);
    }
    let result = Value::Array(ms.iter().map(module_json).collect());
    Ok(Report {
        json: envelope("cohomology", Some(l), to_value(&opts), result),
        text,
        passed: ms.iter().all(|m| m.status.is_stable()),
    })
}

fn sw(l: &Loaded, sel: &CharClassArgs, t: &TowerArgs) -> CliResult<Report> {
    let lat = Lattice::new(&l.graph)?;
    lat.form().require_negative_definite()?;
    let opts = tower_options(t);
    let ids = char_classes(&lat, sel)?;
    let ms = modules(&lat, &ids, &opts)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for m in &ms {
        let sw = zu_module::euler_characteristic(m)?;
        let _ = writeln!(text, "class {:>3}  rep {:?}  sw = {}", m.class_id, m.representative.a, q(&sw));
        rows.push(json!({
            "class_id": m.class_id,
            "representative": m.representative.a,
            "sw": sw,
            "d": m.d,
            "status": m.status,
        }));
    }
    Ok(Report {
        json: envelope("sw", Some(l), to_value(&opts), Value::Array(rows)),
        text,
        passed: ms.iter().all(|m| m.status.is_stable()),
    })
}

fn surgery_cmd(l: &Loaded, j: usize, t: &TowerArgs) -> CliResult<Report> {
    let opts = tower_options(t);
    let triple = make_triple(&l.graph, j)?;
    let rep = surgery_report(&triple, &opts);
    let mut text = String::new();
    let _ = writeln!(text, "vertex {} ({})", j, l.graph.ids()[j]);
    for m in &rep.members {
        let _ = writeln!(
            text,
            "{:<12} det {:>6}  {:?}{}",
            m.role.to_string(),
            m.determinant,
            m.definiteness,
            m.note.as_ref().map(|n| format!("  ({n})")).unwrap_or_default()
        );
        for c in &m.classes {
            let _ = writeln!(text, "  {}", class_summary_text(c));
        }
    }
    for f in &rep.findings {
        let _ = writeln!(text, "[{:?}] {}", f.level, f.message);
    }
    Ok(Report {
        json: envelope("surgery", Some(l), json!({"vertex": j, "tower": to_value(&opts)}), to_value(&rep)),
        text,
        passed: !rep.failed(),
    })
}

fn class_summary_text(c: &ClassSummary) -> String {
    format!(
        "class {:>3}  d = {}  reduced {:?}  eu = {}",
        c.class_id,
        c.d.map(|d| q(&d)).unwrap_or_else(|| "-".into()),
        c.reduced,
        c.eu.map(|e| q(&e)).unwrap_or_else(|| "-".into()),
    )
}

fn relative(l: &Loaded, j: usize, k: &CharElement, check: bool, t: &TowerArgs) -> CliResult<Report> {
    let opts = tower_options(t);
    let ctx = RelativeContext::new(&l.graph, j, &opts)?;
    let params = json!({"vertex": j, "kbar": k.a, "tower": to_value(&opts)});
    let mut text = String::new();
    if check {
        let rep = ctx.eu_rel_check(k)?;
        relative_text(&mut text, &rep.relative);
        let _ = writeln!(
            text,
            "eu(Γ) = {}, eu(Γ∖j0) = {}, correction = {}",
            q(&rep.eu_gamma),
            q(&rep.eu_minus),
            q(&rep.correction)
        );
        let _ = writeln!(text, "n bookkeeping: {} = {}", q(&rep.n_lhs), q(&rep.n_rhs));
        let _ = writeln!(text, "identities: {}", if rep.passed { "PASS" } else { "FAIL" });
        return Ok(Report {
            json: envelope("relative", Some(l), params, to_value(&rep)),
            text,
            passed: rep.passed,
        });
    }
    let (euler, direct) = ctx.both(k)?;
    match &direct {
        Some(rel) => relative_text(&mut text, rel),
        None => {
            let _ = writeln!(
                text,
                "pair complex too large; eu(H_rel) = {} from the absolute towers (n = {}, top level {})",
                euler.eu, euler.n, euler.top
            );
        }
    }
    Ok(Report {
        json: envelope(
            "relative",
            Some(l),
            params,
            json!({"euler": to_value(&euler), "cohomology": direct.as_ref().map(to_value)}),
        ),
        text,
        passed: euler.status.is_stable(),
    })
}

fn relative_text(out: &mut String, r: &surgery::RelativeCohomology) {
    let _ = writeln!(out, "kbar {:?}  r0 = {}  n = {}", r.kbar.a, q(&r.r0), r.n);
    let _ = writeln!(out, "status: {}", status_text(&r.status));
    for d in &r.degrees {
        for e in &d.entries {
            let _ = writeln!(
                out,
                "  H^{}_rel: Z^{}{} at level {} (degree {})",
                d.q,
                e.rank,
                if e.torsion.is_empty() { String::new() } else { format!(" + torsion {:?}", e.torsion) },
                e.level,
                q(&e.degree)
            );
        }
    }
    let ranks: Vec<usize> = r.degrees.iter().map(|d| d.rank).collect();
    let _ = writeln!(out, "ranks {:?}, eu = {}", ranks, r.eu);
}

fn vanishing(l: &Loaded, t: &TowerArgs) -> CliResult<Report> {
    let opts = tower_options(t);
    let rep = vanishing_check(&l.graph, &opts)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "bad vertices: {} {:?} (decrement {}, {})",
        rep.bad.n,
        rep.bad.witness,
        rep.bad.decrement,
        if rep.bad.stable { "stable" } else { "unstable" }
    );
    for c in &rep.classes {
        let _ = writeln!(text, "  {}", class_summary_text(c));
    }
    let _ = writeln!(text, "vanishing: {}", if rep.passed { "PASS" } else { "FAIL" });
    Ok(Report {
        json: envelope("vanishing", Some(l), to_value(&opts), to_value(&rep)),
        text,
        passed: rep.passed && rep.all_stable,
    })
}

fn series_cmd(l: &Loaded, j: usize, sel: &DualClassArgs, n: usize) -> CliResult<Report> {
    let lat = Lattice::new(&l.graph)?;
    let class = dual_class(&lat, sel)?;
    let h = h_series_direct(&l.graph, class, j, n)?;
    let mut text = String::new();
    let _ = writeln!(text, "{:>6} {:>12}", "i", "c_i");
    for (i, c) in h.coeffs.iter().enumerate() {
        let _ = writeln!(text, "{i:>6} {c:>12}");
    }
    Ok(Report {
        json: envelope(
            "series",
            Some(l),
            json!({"vertex": j, "class_id": class, "representative": lat.dual_class_rep(class), "coeffs": n}),
            to_value(&h),
        ),
        text,
        passed: true,
    })
}

fn pc(l: &Loaded, j: usize, sel: &DualClassArgs, periods: Option<&str>, n: Option<usize>) -> CliResult<Report> {
    let lat = Lattice::new(&l.graph)?;
    let class = dual_class(&lat, sel)?;
    let n = match n {
        Some(n) => n,
        None => default_coefficient_count(&l.graph, j)?,
    };
    let h = h_series_direct(&l.graph, class, j, n)?;
    let periods: Vec<i64> = match periods {
        Some(p) => p
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("--periods: expected comma-separated integers, got `{p}`")))?,
        None => default_periods(&h),
    };
    let fit = periodic_constant(&h, &periods)?;
    let mut text = String::new();
    for f in &fit.fits {
        let poly: Vec<String> = f.coefficients.iter().map(q).collect();
        let _ = writeln!(text, "period {:>4}: coefficients {:?}, points {:?}", f.p, poly, f.window);
    }
    let _ = writeln!(text, "pc = {}", q(&fit.constant));
    Ok(Report {
        json: envelope(
            "pc",
            Some(l),
            json!({"vertex": j, "class_id": class, "representative": lat.dual_class_rep(class),
                   "coeffs": n, "periods": periods}),
            to_value(&fit),
        ),
        text,
        passed: true,
    })
}

fn identities(config: IdentityConfig) -> CliResult<Report> {
    let rep = check_identities(&config);
    let mut text = String::new();
    for o in &rep.outcomes {
        let _ = writeln!(
            text,
            "{:<22} {:>5} cases  {:>3} failures{}",
            o.name,
            o.cases,
            o.failures,
            o.counterexample.as_ref().map(|c| format!("  e.g. {c}")).unwrap_or_default()
        );
    }
    Ok(Report {
        json: envelope("check-identities", None, to_value(&config), to_value(&rep)),
        text,
        passed: rep.all_passed(),
    })
}

fn identity_check(l: &Loaded, j: usize, a: &[i64], threshold: Option<i64>, t: &TowerArgs) -> CliResult<Report> {
    let opts = tower_options(t);
    let x = e_coordinate(&l.graph, a, j);
    let params = json!({"vertex": j, "lprime": a, "threshold": threshold, "tower": to_value(&opts)});
    let mut text = String::new();
    if x >= Rational::from(0) && x < Rational::from(1) {
        let rep = periodic_identity_check(&l.graph, j, a, &opts)?;
        let _ = writeln!(text, "l'_j0 = {} in [0, 1): periodic identity", q(&x));
        let _ = writeln!(text, "pc = {}, eu(H_rel) = {}", q(&rep.fit.constant), rep.eu_rel);
        let _ = writeln!(text, "{}", if rep.passed { "PASS" } else { "FAIL" });
        return Ok(Report {
            json: envelope("identity-check", Some(l), params, json!({"periodic": to_value(&rep)})),
            text,
            passed: rep.passed,
        });
    }
    let rep = counting_identity_check(&l.graph, j, a, threshold, &opts)?;
    let _ = writeln!(text, "counting identity, threshold {}", rep.threshold);
    for c in &rep.cases {
        let _ = writeln!(
            text,
            "  l' {:?}: sum of c_i for i < {} = {}, eu(H_rel) = {}",
            c.lprime, c.cutoff, c.coefficient_sum, c.eu_rel
        );
    }
    let _ = writeln!(text, "{:?}", rep.verdict);
    Ok(Report {
        json: envelope("identity-check", Some(l), params, json!({"counting": to_value(&rep)})),
        text,
        passed: rep.verdict == series::Verdict::Pass,
    })
}
