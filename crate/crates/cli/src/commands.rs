//! One function per command; each returns the artifact text.

use crate::output::{csv, header, json_doc, num, nums, real, Output};
use crate::schema::{parse_json, FunctionJson, SetJson};
use crate::{verify, Cli, CliError, Command, QuantityArg};
use inner_entropy_core::entropy::{
    good_lambda_from_profiles, lp_norm, profile_from_entries, profile_point, BoundaryProfile, Quantity,
};
use inner_entropy_core::innerfn::{evaluate, g_quotient, hyperbolic_derivative, mobius_distortion};
use inner_entropy_core::measures::{
    classify_bc, heavy_light_decompose, sublevel_integral, BcSeries, DyadicArc, HeavyArc, LightArc, UnresolvedArc,
    UnresolvedReason, CLASSIFY_DEPTH, DEFAULT_SHELL_DEPTH,
};
use inner_entropy_core::{DiskPoint, InnerFunctionSpec, QuadratureConfig};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

/// Tolerance on `|f(0)|` for commands that need `f(0) = 0`.
const ORIGIN_TOL: f64 = 1e-12;
/// Default dyadic depth of `decompose`.
const DEFAULT_DECOMPOSE_DEPTH: u32 = 24;

pub fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let cfg = config(cli)?;
    match cli.command {
        Command::Eval => eval(cli, &cfg).map(Output::ok),
        Command::Profile => profile(cli, &cfg).map(Output::ok),
        Command::Entropy => entropy(cli, &cfg).map(Output::ok),
        Command::Goodlambda => goodlambda(cli, &cfg).map(Output::ok),
        Command::Bcset => bcset(cli, &cfg).map(Output::ok),
        Command::Decompose => decompose(cli, &cfg).map(Output::ok),
        Command::Sublevel => sublevel(cli, &cfg).map(Output::ok),
        Command::Verify => verify::run(&read_function(cli)?.function()?, cli, &cfg),
    }
}

fn config(cli: &Cli) -> Result<QuadratureConfig, CliError> {
    let cfg = QuadratureConfig {
        t_max: cli.tmax,
        abs_tol: cli.tol,
        ..QuadratureConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_input(cli: &Cli) -> Result<String, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::Schema("--input is required".into()))?;
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_function(cli: &Cli) -> Result<FunctionJson, CliError> {
    parse_json(&read_input(cli)?)
}

fn require(value: Option<f64>, flag: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Schema(format!("{flag} is required for this command")))
}

fn quantity(cli: &Cli) -> Quantity {
    match cli.quantity {
        QuantityArg::A => Quantity::A,
        QuantityArg::LogFp => Quantity::LogFp,
        QuantityArg::BAlpha => Quantity::BAlpha { alpha: cli.alpha },
        QuantityArg::AQ => Quantity::AQ { level: cli.level },
    }
}

fn check_grid(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(CliError::Precondition("grid size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Profile over `k/n`, evaluated in parallel and collected in grid order.
pub fn parallel_profile(
    f: &InnerFunctionSpec,
    n: usize,
    q: Quantity,
    cfg: &QuadratureConfig,
) -> Result<BoundaryProfile, CliError> {
    check_grid(n)?;
    let entries = (0..n)
        .into_par_iter()
        .map(|k| profile_point(f, k as f64 / n as f64, q, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(profile_from_entries(q, &entries))
}

fn require_origin_zero(f: &InnerFunctionSpec) -> Result<(), CliError> {
    let v = evaluate(f, DiskPoint::ORIGIN)?.value.norm();
    if v > ORIGIN_TOL {
        return Err(CliError::Precondition(format!("f(0) = 0 is required, |f(0)| = {v:e}")));
    }
    Ok(())
}

fn eval(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let spec = read_function(cli)?;
    let f = spec.function()?;
    let points = spec
        .points
        .as_ref()
        .ok_or_else(|| CliError::Schema("eval needs a \"points\" array in the input".into()))?;
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let z = DiskPoint::new(p.re, p.im);
        let e = evaluate(&f, z)?;
        rows.push(vec![
            real(p.re),
            real(p.im),
            real(e.value.re),
            real(e.value.im),
            real(e.log_modulus),
            real(hyperbolic_derivative(&f, z)?),
            real(mobius_distortion(&f, z)?),
            real(g_quotient(&f, z)?),
        ]);
    }
    Ok(csv(
        &header("eval", Some(points.len()), cfg),
        &["re", "im", "f_re", "f_im", "log_abs_f", "dh", "mobius_distortion", "G"],
        &rows,
    ))
}

fn profile(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let f = read_function(cli)?.function()?;
    let q = quantity(cli);
    let prof = parallel_profile(&f, cli.n, q, cfg)?;
    let mut h = header(q.name(), Some(cli.n), cfg);
    match q {
        Quantity::BAlpha { alpha } => h.push(("alpha", real(alpha))),
        Quantity::AQ { level } => h.push(("level", level.to_string())),
        Quantity::A | Quantity::LogFp => {}
    }
    let rows: Vec<Vec<String>> = (0..prof.len())
        .map(|k| {
            vec![
                real(prof.points[k]),
                real(prof.values[k]),
                prof.status[k].as_str().to_string(),
            ]
        })
        .collect();
    Ok(csv(&h, &["angle", "value", "status"], &rows))
}

fn profile_summary(prof: &BoundaryProfile, p: f64) -> Result<Value, CliError> {
    let norm = lp_norm(prof, p)?;
    let count = |s: &str| prof.status.iter().filter(|x| x.as_str() == s).count();
    Ok(json!({
        "lp_norm": num(norm.norm),
        "diverged_fraction": num(norm.diverged_fraction),
        "at_angle_zero": { "value": num(prof.values[0]), "status": prof.status[0].as_str() },
        "finite": count("finite"),
        "truncated": count("truncated"),
        "diverged": count("diverged"),
        "budget_exhausted": prof.budget_exhausted.iter().filter(|b| **b).count(),
    }))
}

fn entropy(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let f = read_function(cli)?.function()?;
    let a = parallel_profile(&f, cli.n, Quantity::A, cfg)?;
    let l = parallel_profile(&f, cli.n, Quantity::LogFp, cfg)?;
    let sa = profile_summary(&a, cli.p)?;
    let sl = profile_summary(&l, cli.p)?;
    let ratio = match (sa["lp_norm"].as_f64(), sl["lp_norm"].as_f64()) {
        (Some(x), Some(y)) if x > 0.0 => num(y / x),
        _ => Value::Null,
    };
    let mut body = Map::new();
    body.insert("p".into(), num(cli.p));
    body.insert("A".into(), sa);
    body.insert("logfp".into(), sl);
    body.insert("logfp_over_A".into(), ratio);
    Ok(json_doc(&header("entropy", Some(cli.n), cfg), body))
}

fn goodlambda(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let f = read_function(cli)?.function()?;
    let m = require(cli.m, "--M")?;
    require_origin_zero(&f)?;
    let a = parallel_profile(&f, cli.n, Quantity::A, cfg)?;
    let l = parallel_profile(&f, cli.n, Quantity::LogFp, cfg)?;
    let t = good_lambda_from_profiles(&a, &l, m, cli.eta, &cli.lambdas, &cli.epsilons)?;
    let mut body = Map::new();
    body.insert("M".into(), num(t.m));
    body.insert("eta".into(), num(t.eta));
    body.insert("lambdas".into(), nums(&t.lambdas));
    body.insert("epsilons".into(), nums(&t.epsilons));
    body.insert("denominator".into(), nums(&t.denominator));
    body.insert(
        "numerator".into(),
        Value::Array(t.numerator.iter().map(|r| nums(r)).collect()),
    );
    body.insert("ratio".into(), Value::Array(t.ratio.iter().map(|r| nums(r)).collect()));
    body.insert(
        "best_epsilon".into(),
        Value::Array(t.best_epsilon.iter().map(|e| e.map_or(Value::Null, num)).collect()),
    );
    Ok(json_doc(&header("goodlambda", Some(cli.n), cfg), body))
}

fn series(s: &BcSeries) -> Value {
    json!({
        "verdict": s.verdict.as_str(),
        "terms": nums(&s.terms),
        "partial_sums": nums(&s.partial_sums),
    })
}

fn bcset(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let set = parse_json::<SetJson>(&read_input(cli)?)?.set()?;
    let depth = cli.depth.unwrap_or(CLASSIFY_DEPTH);
    if let Some(levels) = set.levels() {
        // Dyadic counts past the last generated level see a fat set.
        if levels < depth {
            return Err(CliError::Precondition(format!(
                "Cantor levels ({levels}) must be at least the depth ({depth})"
            )));
        }
    }
    let c = classify_bc(&set, cli.p, depth)?;
    let mut body = Map::new();
    body.insert("p".into(), num(cli.p));
    body.insert("depth".into(), json!(depth));
    body.insert("null".into(), json!(set.is_null()));
    body.insert("total_gap_length".into(), num(set.total_gap_length()));
    body.insert("integral".into(), series(&c.integral));
    body.insert("complementary".into(), series(&c.complementary));
    body.insert("dyadic".into(), series(&c.dyadic));
    body.insert("unanimous".into(), json!(!c.is_disagreement()));
    body.insert(
        "verdict".into(),
        c.unanimous
            .map_or(Value::String("disagreement".into()), |v| json!(v.as_str())),
    );
    Ok(json_doc(&header("bcset", None, cfg), body))
}

fn arc(a: DyadicArc, mass: &BigRational) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("level".into(), json!(a.level));
    m.insert("index".into(), json!(a.index));
    m.insert("mass".into(), json!(mass.to_string()));
    m
}

fn unresolved(u: &UnresolvedArc) -> Value {
    let mut m = arc(u.arc, &u.mass);
    let reason = match u.reason {
        UnresolvedReason::DepthExhausted => "depth_exhausted",
        UnresolvedReason::UniformDensity => "uniform_density",
    };
    m.insert("reason".into(), json!(reason));
    Value::Object(m)
}

fn heavy_json(h: &HeavyArc) -> Value {
    let mut m = arc(h.arc, &h.mass);
    m.insert("tie".into(), json!(h.tie));
    m.insert("light".into(), Value::Array(h.light.iter().map(light_json).collect()));
    m.insert(
        "unresolved".into(),
        Value::Array(h.unresolved.iter().map(unresolved).collect()),
    );
    Value::Object(m)
}

fn light_json(l: &LightArc) -> Value {
    let mut m = arc(l.arc, &l.mass);
    m.insert("tie".into(), json!(l.tie));
    m.insert("heavy".into(), Value::Array(l.heavy.iter().map(heavy_json).collect()));
    m.insert(
        "unresolved".into(),
        Value::Array(l.unresolved.iter().map(unresolved).collect()),
    );
    Value::Object(m)
}

fn decompose(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let mu = read_function(cli)?.measure()?;
    let m = require(cli.m, "--M")?;
    let depth = cli.depth.unwrap_or(DEFAULT_DECOMPOSE_DEPTH);
    let forest = heavy_light_decompose(&mu, m, depth)?;
    let report = forest.verify();
    let generations: Vec<Value> = forest
        .generations()
        .iter()
        .map(|g| json!({ "heavy": g.heavy.len(), "light": g.light.len() }))
        .collect();
    let mut body = Map::new();
    body.insert("M".into(), json!(forest.threshold.to_string()));
    body.insert("max_depth".into(), json!(forest.max_depth));
    body.insert(
        "heavy".into(),
        Value::Array(forest.heavy.iter().map(heavy_json).collect()),
    );
    body.insert(
        "unresolved".into(),
        Value::Array(forest.unresolved.iter().map(unresolved).collect()),
    );
    body.insert("generations".into(), Value::Array(generations));
    body.insert(
        "residual_support".into(),
        Value::Array(forest.residual_support().iter().map(|q| json!(q.to_string())).collect()),
    );
    body.insert(
        "report".into(),
        json!({
            "containment": report.containment,
            "property1": report.property1,
            "property2": report.property2,
            "property3": report.property3,
            "heavy_count": report.heavy_count,
            "light_count": report.light_count,
            "unresolved_count": report.unresolved_count,
            "ties": report.ties,
            "passed": report.passed(),
        }),
    );
    Ok(json_doc(&header("decompose", None, cfg), body))
}

fn sublevel(cli: &Cli, cfg: &QuadratureConfig) -> Result<String, CliError> {
    let mu = read_function(cli)?.measure()?;
    let c = require(cli.c, "--c")?;
    let depth = cli.depth.unwrap_or(DEFAULT_SHELL_DEPTH);
    let r = sublevel_integral(&mu, c, cli.p, depth)?;
    let mut body = Map::new();
    body.insert("c".into(), num(c));
    body.insert("p".into(), num(cli.p));
    body.insert("depth".into(), json!(depth));
    body.insert("shells".into(), nums(&r.shells));
    body.insert("partial_integrals".into(), nums(&r.partial_integrals));
    body.insert("verdict".into(), json!(r.verdict.as_str()));
    Ok(json_doc(&header("sublevel", None, cfg), body))
}
