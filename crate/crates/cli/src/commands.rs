use std::path::{Path, PathBuf};

use hypertile_core::absorb::{closed_partition, closeness_graph, run_absorption_pipeline, PipelineConfig, Step1Strategy};
use hypertile_core::constructions::{self, ConstructionSpec};
use hypertile_core::design::{contains_b_lambda, is_partial_design, random_greedy_design};
use hypertile_core::factor::local_search::{almost_factor_local_search, LocalSearchConfig};
use hypertile_core::factor::{verify_tiling, FactorOracle};
use hypertile_core::independence::independence_number;
use hypertile_core::io::{format_hypergraph, read_hypergraph};
use hypertile_core::params::{threshold_table, TRule};
use hypertile_core::random::random_min_codegree;
use hypertile_core::{Caps, Hypergraph, Pattern};
use serde_json::{json, Value};

use crate::report::{CliError, CliResult, Outcome, RunReport};
use crate::{ClosenessArgs, ConstructKind, DesignCmd, FactorArgs, GenerateKind, Mode, ThresholdArgs};

fn read_input(report: &mut RunReport, path: &Path) -> CliResult<Hypergraph> {
    report.digest_input(path)?;
    Ok(read_hypergraph(path)?)
}

fn resolve_pattern(report: &mut RunReport, spec: &str) -> CliResult<Pattern> {
    match spec.strip_prefix("F:") {
        Some(file) => {
            let g = read_input(report, Path::new(file))?;
            Ok(Pattern::explicit(g)?)
        }
        None => Ok(Pattern::parse(spec)?),
    }
}

fn params<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

pub fn construct(kind: ConstructKind, caps: &Caps) -> CliResult<Outcome> {
    let mut report = RunReport::new("construct", params(&kind), None);
    let (spec, out, default_name) = match &kind {
        ConstructKind::Parity { k, n, out } => (ConstructionSpec::Parity { k: *k, n: *n }, out, format!("parity_k{k}_n{n}")),
        ConstructKind::SpaceBarrier { k, t, n, out } => (
            ConstructionSpec::SpaceBarrier { k: *k, t: *t, n: *n },
            out,
            format!("space_barrier_k{k}_t{t}_n{n}"),
        ),
        ConstructKind::Pikhurko { t, n, lambda, h0, fano, out } => {
            let h0 = match (h0, fano) {
                (_, true) => constructions::fano_plane(),
                (Some(path), false) => read_input(&mut report, path)?,
                (None, false) => return Err(CliError::Params("either --h0 or --fano is required".into())),
            };
            let spec = ConstructionSpec::Pikhurko {
                t: *t,
                n: *n,
                lambda: *lambda,
                h0_order: h0.n(),
                h0_edges: h0.edges().to_vec(),
            };
            (spec, out, format!("pikhurko_t{t}_n{n}_l{lambda}"))
        }
        ConstructKind::Multipartite { t, n, balanced, out } => {
            let tag = if *balanced { "_balanced" } else { "" };
            (
                ConstructionSpec::MultipartiteGraph { t: *t, n: *n, balanced: *balanced },
                out,
                format!("multipartite_t{t}_n{n}{tag}"),
            )
        }
    };
    let (h, cert) = constructions::build(&spec, caps)?;
    let name = out.name.clone().unwrap_or(default_name);
    report.write_output(&out.out_dir.join(format!("{name}.hg")), &format_hypergraph(&h))?;
    let cert_json = serde_json::to_value(&cert)?;
    report.write_output(&out.out_dir.join(format!("{name}.cert.json")), &format!("{:#}\n", cert_json))?;
    report.result = cert_json;
    Ok(Outcome::positive(report))
}

pub fn generate(kind: GenerateKind, caps: &Caps) -> CliResult<Outcome> {
    let GenerateKind::Random { n, k, min_codegree, seed, ref out } = kind;
    let mut report = RunReport::new("generate random", params(&kind), Some(seed));
    let h = random_min_codegree(n, k, min_codegree, seed, caps)?;
    report.write_output(out, &format_hypergraph(&h))?;
    report.result = json!({
        "n": h.n(),
        "k": h.k(),
        "edges": h.edge_count(),
        "min_codegree": h.min_l_degree(k - 1)?,
    });
    Ok(Outcome::positive(report))
}

fn parse_fraction(s: &str) -> CliResult<(u64, u64)> {
    let bad = || CliError::Params(format!("expected a fraction p/q, got {s:?}"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let (p, q): (u64, u64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
    if q == 0 {
        return Err(bad());
    }
    Ok((p, q))
}

pub fn factor(args: FactorArgs, caps: &Caps) -> CliResult<Outcome> {
    let mut report = RunReport::new("factor", params(&args), Some(args.seed));
    let host = read_input(&mut report, &args.file)?;
    let pattern = resolve_pattern(&mut report, &args.pattern)?;
    if pattern.uniformity() != host.k() {
        return Err(hypertile_core::Error::UniformityMismatch { pattern_k: pattern.uniformity(), host_k: host.k() }.into());
    }
    if host.n() % pattern.order() != 0 {
        return Err(CliError::Params(format!(
            "no perfect tiling can exist: the pattern has {} vertices, which does not divide n = {}",
            pattern.order(),
            host.n()
        )));
    }
    let mut negative = false;
    report.result = match args.mode {
        Mode::Exact => {
            let oracle = FactorOracle::new(&host, &pattern, caps)?;
            let tiling = oracle.exact_factor()?;
            negative = tiling.is_none();
            let verification = tiling.as_ref().map(|t| verify_tiling(&host, t));
            json!({
                "mode": "exact",
                "has_factor": tiling.is_some(),
                "verdict": if tiling.is_some() { "factor" } else { "no factor" },
                "copies_enumerated": oracle.copy_count(),
                "tiling": tiling,
                "verification": verification,
            })
        }
        Mode::LocalSearch => {
            let t = match pattern.clique_order() {
                Some(t) => t,
                None => return Err(CliError::Params(format!("local search needs a complete pattern K:t:k, got {pattern}"))),
            };
            let config = LocalSearchConfig { restarts: args.restarts.max(1), ..LocalSearchConfig::default() };
            let outcome = almost_factor_local_search(&host, t, args.seed, &config, caps)?;
            let verification = verify_tiling(&host, &outcome.best.tiling);
            json!({
                "mode": "local-search",
                "perfect": outcome.best.tiling.is_perfect(),
                "leftover": outcome.best.tiling.leftover.len(),
                "tiling": outcome.best.tiling,
                "verification": verification,
                "partition_weight": outcome.best.partition.total_weight.to_string(),
                "best_seed": outcome.best.seed,
                "restarts": outcome.restarts,
                "trace": outcome.best.trace,
            })
        }
        Mode::Pipeline => {
            let step1 = match &args.alpha_good {
                Some(s) => {
                    let (alpha_num, alpha_den) = parse_fraction(s)?;
                    Step1Strategy::AlphaGood { alpha_num, alpha_den }
                }
                None => Step1Strategy::None,
            };
            let config = PipelineConfig {
                step1,
                level: args.level,
                seed: args.seed,
                restarts: args.restarts.max(1),
                ..PipelineConfig::default()
            };
            let r = run_absorption_pipeline(&host, &pattern, &config, caps)?;
            json!({ "mode": "pipeline", "config": config, "report": r })
        }
    };
    Ok(Outcome { report, negative })
}

pub fn thresholds(args: ThresholdArgs) -> CliResult<Outcome> {
    let mut report = RunReport::new("thresholds", params(&args), None);
    let rule = args.t.map_or(TRule::KPlusOne, TRule::Fixed);
    let rows = threshold_table(args.k_max, rule)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "t", "l0", "beta_num", "beta_den", "d_num", "d_den", "coefficient_num", "coefficient_den"])
        .map_err(|e| CliError::Io(e.to_string()))?;
    for r in &rows {
        w.write_record([
            r.k.to_string(),
            r.t.to_string(),
            r.l0.to_string(),
            r.beta.numer().to_string(),
            r.beta.denom().to_string(),
            r.d.numer().to_string(),
            r.d.denom().to_string(),
            r.coefficient.numer().to_string(),
            r.coefficient.denom().to_string(),
        ])
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let csv_bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let csv_text = String::from_utf8(csv_bytes).expect("csv output is UTF-8");

    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "t": r.t,
                "l0": r.l0,
                "l0_literal": r.l0_literal,
                "beta": r.beta.to_string(),
                "d": r.d.to_string(),
                "codegree_coefficient": r.codegree_coefficient.to_string(),
                "theorem13_coefficient": r.theorem13_coefficient.as_ref().map(|c| c.to_string()),
                "coefficient": r.coefficient.to_string(),
            })
        })
        .collect();
    report.write_output(&args.out_dir.join("thresholds.csv"), &csv_text)?;
    report.write_output(&args.out_dir.join("thresholds.json"), &format!("{:#}\n", Value::from(json_rows.clone())))?;
    report.result = json!({ "rows": json_rows });
    Ok(Outcome::positive(report))
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

pub fn design(cmd: DesignCmd, caps: &Caps) -> CliResult<Outcome> {
    match cmd {
        DesignCmd::Gen { n, k, t, lambda, seed, ref out } => {
            let mut report = RunReport::new("design gen", params(&cmd), Some(seed));
            let state = random_greedy_design(n, k, t, lambda, seed, caps)?;
            let small = Caps { design: caps.design.min(100_000), ..*caps };
            let (maximal, verified) = match state.maximality_violation(&small) {
                Ok(v) => (v.is_none(), true),
                Err(hypertile_core::Error::CapExceeded { .. }) => (true, false),
                Err(e) => return Err(e.into()),
            };
            let sidecar = json!({
                "t": t,
                "lambda": lambda,
                "seed": seed,
                "blocks": state.blocks,
                "maximal": maximal,
                "maximal_verified": verified,
            });
            report.write_output(out, &format_hypergraph(&state.to_hypergraph()?))?;
            report.write_output(&sidecar_path(out), &format!("{sidecar:#}\n"))?;
            let verdict = is_partial_design(&state.blocks, n, k, t, lambda)?;
            report.result = json!({
                "n": n,
                "k": k,
                "blocks": state.blocks.len(),
                "maximal": maximal,
                "maximal_verified": verified,
                "valid": verdict.passed(),
            });
            Ok(Outcome::positive(report))
        }
        DesignCmd::Check { ref file, t, lambda } => {
            let mut report = RunReport::new("design check", params(&cmd), None);
            let h = read_input(&mut report, file)?;
            let verdict = is_partial_design(h.edges(), h.n(), h.k(), t, lambda)?;
            let mut result = json!({ "n": h.n(), "k": h.k(), "blocks": h.edge_count(), "verdict": verdict });
            if h.k() == 3 && t == 2 {
                result["max_codegree"] = json!(h.max_l_degree(2)?);
                result["b_lambda"] = json!(contains_b_lambda(&h, lambda)?);
            }
            report.result = result;
            Ok(Outcome { report, negative: !verdict.passed() })
        }
        DesignCmd::Alpha { ref file, lambda } => {
            let mut report = RunReport::new("design alpha", params(&cmd), None);
            let h = read_input(&mut report, file)?;
            let alpha = independence_number(&h, caps);
            let mut result = json!({ "n": h.n(), "k": h.k(), "independence": alpha });
            if let Some(l) = lambda {
                result["b_lambda"] = json!(contains_b_lambda(&h, l)?);
            }
            report.result = result;
            Ok(Outcome::positive(report))
        }
    }
}

pub fn closeness(args: ClosenessArgs, caps: &Caps) -> CliResult<Outcome> {
    let mut report = RunReport::new("closeness", params(&args), None);
    let host = read_input(&mut report, &args.file)?;
    let pattern = resolve_pattern(&mut report, &args.pattern)?;
    let oracle = FactorOracle::new(&host, &pattern, caps)?;
    let g = closeness_graph(&oracle, host.n(), args.i, args.tau, caps)?;
    let partition = closed_partition(&g);
    let (min_count, max_count) = g.count_range();
    report.result = json!({
        "n": host.n(),
        "i": args.i,
        "tau": args.tau,
        "edges": g.edge_count(),
        "min_degree": g.min_degree(),
        "min_pair_count": min_count,
        "max_pair_count": max_count,
        "components": partition.classes.len(),
        "classes": partition.classes,
        "all_cliques": partition.all_cliques,
        "diameter": g.diameter(),
        "counts": g.counts,
    });
    Ok(Outcome::positive(report))
}
