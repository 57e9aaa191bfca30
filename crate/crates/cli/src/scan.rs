//! Config-driven grid scans, ratio tables and the parameter pipeline.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use treeshade::decay::{rho_symbolic, rho_window, MonomialSeq, TauSpec};
use treeshade::exact::format_rational;
use treeshade::extremal::{ratio_table_m0, ratio_table_n1, RatioRow, RatioSource};
use treeshade::oracle::{conjecture_check_m0, OracleConfig, OracleQuery, Verdict};
use treeshade::pipeline::{build_pipeline, PipelineRow};
use treeshade::trees::{lemma5_check, FiniteTree};

use crate::args::{branching, parse_range, rational};
use crate::oracle::{result_json, solve};
use crate::output::{cells, csv_field, table, write_atomic, Report};
use crate::Ctx;

#[derive(Args)]
pub struct ScanArgs {
    /// TOML scan description.
    config: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    M,
    M0,
    Cross,
    N0,
    N1,
    ConjectureM0,
    RatioM0,
    RatioN1,
    Pipeline,
    Trees,
    Decay,
}

/// An inclusive integer range: `[lo, hi]` or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Span {
    One(u64),
    Range([u64; 2]),
}

impl Span {
    fn bounds(self) -> Result<(u64, u64)> {
        let (lo, hi) = match self {
            Span::One(v) => (v, v),
            Span::Range([a, b]) => (a, b),
        };
        if lo > hi {
            bail!("empty range [{lo}, {hi}]");
        }
        Ok((lo, hi))
    }

    fn values(self) -> Result<Vec<u32>> {
        let (lo, hi) = self.bounds()?;
        if hi > u32::MAX as u64 {
            bail!("range bound {hi} too large");
        }
        Ok((lo as u32..=hi as u32).collect())
    }
}

/// One flat scan description; keys that the target does not use are rejected.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub target: Target,
    pub n: Option<Span>,
    pub m: Option<Span>,
    pub k: Option<Span>,
    pub l: Option<Span>,
    pub t: Option<Span>,
    pub mk: Option<Span>,
    pub ml: Option<Span>,
    pub clique_cap: Option<u64>,
    pub closure_cap: Option<u64>,
    pub compression_seed: Option<bool>,
    /// Allow caps above the built-in defaults.
    #[serde(default)]
    pub override_caps: bool,
    /// `.json` for a JSON document, anything else for CSV.
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub k_fn: Option<String>,
    pub t_fn: Option<String>,
    pub source: Option<String>,
    pub f: Option<Vec<u32>>,
    pub k_seq: Option<Vec<u64>>,
    pub beta: Option<String>,
    pub n_max: Option<usize>,
    pub depth: Option<usize>,
    pub keep: Option<f64>,
    pub count: Option<u64>,
    pub g: Option<String>,
    pub h: Option<String>,
    pub tau: Option<String>,
    pub window: Option<Span>,
}

const COMMON: &[&str] = &["target", "output", "clique_cap", "closure_cap", "compression_seed", "override_caps"];

fn target_keys(t: Target) -> &'static [&'static str] {
    match t {
        Target::M => &["n", "k", "t"],
        Target::M0 | Target::ConjectureM0 => &["n", "m", "k", "t"],
        Target::Cross => &["n", "k", "l", "t"],
        Target::N0 => &["n", "mk", "ml", "k", "l", "t"],
        Target::N1 => &["n", "m", "k", "t"],
        Target::RatioM0 => &["k_fn", "t_fn", "m", "source"],
        Target::RatioN1 => &["k_fn", "t_fn", "m"],
        Target::Pipeline => &["f", "k_seq", "beta", "n_max"],
        Target::Trees => &["f", "depth", "keep", "count", "seed"],
        Target::Decay => &["g", "h", "tau", "window"],
    }
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).context("scan config is not valid TOML")?;
        let cfg: ScanConfig = toml::from_str(text).context("invalid scan config")?;
        let allowed = target_keys(cfg.target);
        for key in table.keys() {
            if !COMMON.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                bail!("key `{key}` is not used by target {:?} (expected {allowed:?})", cfg.target);
            }
        }
        Ok(cfg)
    }

    /// Caps from the config on top of `base`; raising one above the
    /// default needs `override_caps`.
    pub fn oracle_config(&self, base: &OracleConfig) -> Result<OracleConfig> {
        let defaults = OracleConfig::default();
        let mut cfg = base.clone();
        if let Some(c) = self.clique_cap {
            if c > defaults.clique_cap && !self.override_caps {
                bail!("clique_cap = {c} exceeds the default {} (set override_caps = true)", defaults.clique_cap);
            }
            cfg.clique_cap = c;
        }
        if let Some(c) = self.closure_cap {
            if c > defaults.closure_cap && !self.override_caps {
                bail!("closure_cap = {c} exceeds the default {} (set override_caps = true)", defaults.closure_cap);
            }
            cfg.closure_cap = c;
        }
        if let Some(s) = self.compression_seed {
            cfg.compression_seed = s;
        }
        Ok(cfg)
    }

    fn span(&self, name: &str, v: Option<Span>) -> Result<Vec<u32>> {
        v.with_context(|| format!("target {:?} needs `{name}`", self.target))?.values()
    }

    fn need<T: Clone>(&self, name: &str, v: &Option<T>) -> Result<T> {
        v.clone().with_context(|| format!("target {:?} needs `{name}`", self.target))
    }

    /// Oracle cells satisfying the ordering constraints of the target.
    pub fn queries(&self) -> Result<Vec<OracleQuery>> {
        let mut out = Vec::new();
        match self.target {
            Target::M => {
                for n in self.span("n", self.n)? {
                    for k in self.span("k", self.k)? {
                        for t in self.span("t", self.t)? {
                            if 1 <= t && t <= k && k <= n {
                                out.push(OracleQuery::M { n, k, t });
                            }
                        }
                    }
                }
            }
            Target::M0 => {
                for (n, m, k, t) in self.m0_cells()? {
                    out.push(OracleQuery::M0 { n, m, k, t });
                }
            }
            Target::Cross => {
                for n in self.span("n", self.n)? {
                    for k in self.span("k", self.k)? {
                        for l in self.span("l", self.l)? {
                            for t in self.span("t", self.t)? {
                                if 1 <= t && t <= k.min(l) && k.max(l) <= n {
                                    out.push(OracleQuery::Cross { n, k, l, t });
                                }
                            }
                        }
                    }
                }
            }
            Target::N0 => {
                for n in self.span("n", self.n)? {
                    for mk in self.span("mk", self.mk)? {
                        for ml in self.span("ml", self.ml)? {
                            for k in self.span("k", self.k)? {
                                for l in self.span("l", self.l)? {
                                    for t in self.span("t", self.t)? {
                                        if 1 <= t && t <= k.min(l) && k <= mk && l <= ml && mk.max(ml) <= n {
                                            out.push(OracleQuery::N0 { n, mk, ml, k, l, t });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Target::N1 => {
                for m in self.span("m", self.m)? {
                    let ns = match self.n {
                        Some(s) => s.values()?,
                        None => vec![2 * m],
                    };
                    for n in ns {
                        for k in self.span("k", self.k)? {
                            for t in self.span("t", self.t)? {
                                if 1 <= t && t <= k && k <= m && m <= n {
                                    out.push(OracleQuery::N1 { n, m, k, t });
                                }
                            }
                        }
                    }
                }
            }
            other => bail!("target {other:?} is not an oracle grid"),
        }
        Ok(out)
    }

    fn m0_cells(&self) -> Result<Vec<(u32, u32, u32, u32)>> {
        let mut out = Vec::new();
        for n in self.span("n", self.n)? {
            for m in self.span("m", self.m)? {
                for k in self.span("k", self.k)? {
                    for t in self.span("t", self.t)? {
                        if 1 <= t && t <= k && k <= m && m <= n {
                            out.push((n, m, k, t));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Table rows with a header, rendered both for humans and as CSV.
struct Rows {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Rows {
    fn from_csv(header: &'static str, lines: &[String]) -> Self {
        Rows {
            header: header.split(',').collect(),
            rows: lines.iter().map(|l| cells(l)).collect(),
        }
    }

    fn report(self, command: &str, prefix: String, json: Value) -> Report {
        let text = prefix + &table(&self.header, &self.rows);
        let lines = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))
            .collect();
        Report::new(command, text, json).with_csv(&self.header.join(","), lines)
    }
}

pub fn scan(a: ScanArgs, ctx: &Ctx) -> Result<Report> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let cfg = ScanConfig::parse(&text).with_context(|| format!("in {}", a.config.display()))?;
    let report = run_scan(&cfg, ctx)?;
    if let Some(out) = &cfg.output {
        write_output(out, &report)?;
    }
    Ok(report)
}

fn write_output(path: &Path, report: &Report) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        let mut text = serde_json::to_string_pretty(&report.document())?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    } else {
        write_atomic(path, report.csv_text().unwrap_or_default().as_bytes())
    }
}

pub fn run_scan(cfg: &ScanConfig, ctx: &Ctx) -> Result<Report> {
    let ocfg = cfg.oracle_config(&ctx.cfg)?;
    let label = format!("scan {}", serde_json::to_value(cfg.target)?.as_str().unwrap_or_default());
    match cfg.target {
        Target::M | Target::M0 | Target::Cross | Target::N0 | Target::N1 => {
            let queries = cfg.queries()?;
            log::info!("{label}: {} cells", queries.len());
            let cell_ctx = Ctx {
                cfg: ocfg,
                cache: ctx.cache_path.clone().map(treeshade::oracle::OracleCache::new),
                cache_path: ctx.cache_path.clone(),
            };
            let results: Vec<_> = queries.par_iter().map(|q| (q, solve(q, &cell_ctx))).collect();
            let mut rows = Vec::new();
            let mut docs = Vec::new();
            let mut skipped = 0;
            for (q, r) in &results {
                match r {
                    Ok(r) => {
                        r.revalidate()?;
                        rows.push(vec![
                            r.cache_key.clone(),
                            r.value.to_string(),
                            r.explored.to_string(),
                            format!("{:.3}", r.elapsed.as_secs_f64() * 1e3),
                            String::new(),
                        ]);
                        docs.push(result_json(r));
                    }
                    Err(e @ treeshade::Error::WitnessInvalid(_)) => return Err(e.clone().into()),
                    Err(e) => {
                        skipped += 1;
                        rows.push(vec![q.key(), String::new(), String::new(), String::new(), e.to_string()]);
                        docs.push(json!({ "query": q.key(), "skipped": e.to_string() }));
                    }
                }
            }
            let prefix = format!("{} cells, {} skipped\n", results.len(), skipped);
            Ok(Rows {
                header: vec!["query", "value", "explored", "elapsed_ms", "skipped"],
                rows,
            }
            .report(&label, prefix, json!({ "cells": docs })))
        }
        Target::ConjectureM0 => {
            let grid = cfg.m0_cells()?;
            let cells = conjecture_check_m0(&grid, &ocfg);
            let mut tally: BTreeMap<String, usize> = BTreeMap::new();
            let mut rows = Vec::new();
            for c in &cells {
                let (verdict, reason) = match &c.verdict {
                    Verdict::Match => ("match", String::new()),
                    Verdict::ConjectureLow => ("conjecture_low", String::new()),
                    Verdict::ConjectureNotTight => ("conjecture_not_tight", String::new()),
                    Verdict::Skipped(why) => ("skipped", why.clone()),
                };
                *tally.entry(verdict.to_string()).or_default() += 1;
                rows.push(vec![
                    c.n.to_string(),
                    c.m.to_string(),
                    c.k.to_string(),
                    c.t.to_string(),
                    c.oracle.map(|v| v.to_string()).unwrap_or_default(),
                    c.conjectured.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                    verdict.to_string(),
                    reason,
                ]);
            }
            let mut prefix: String = tally.iter().map(|(v, c)| format!("{v}: {c}\n")).collect();
            for c in cells.iter().filter(|c| c.verdict == Verdict::ConjectureLow) {
                prefix.push_str(&format!(
                    "counterexample: M0({},{},{},{}) = {} > {}\n",
                    c.n,
                    c.m,
                    c.k,
                    c.t,
                    c.oracle.unwrap_or_default(),
                    c.conjectured.as_ref().map(|v| v.to_string()).unwrap_or_default()
                ));
            }
            Ok(Rows {
                header: vec!["n", "m", "k", "t", "oracle", "conjectured", "verdict", "reason"],
                rows,
            }
            .report(&label, prefix, json!({ "cells": cells, "tally": tally })))
        }
        Target::RatioM0 | Target::RatioN1 => {
            let k_fn: MonomialSeq = cfg.need("k_fn", &cfg.k_fn)?.parse()?;
            let t_fn: MonomialSeq = cfg.need("t_fn", &cfg.t_fn)?.parse()?;
            let ms: Vec<u64> = cfg.span("m", cfg.m)?.into_iter().map(u64::from).collect();
            let rows = if cfg.target == Target::RatioM0 {
                let source: RatioSource = cfg.source.as_deref().unwrap_or("conjectured").parse()?;
                ratio_table_m0(&k_fn, &t_fn, &ms, source, &ocfg)
            } else {
                ratio_table_n1(&k_fn, &t_fn, &ms, &ocfg)
            };
            Ok(ratio_report(&label, &rows))
        }
        Target::Pipeline => {
            let f = cfg.need("f", &cfg.f)?;
            let n_max = cfg.need("n_max", &cfg.n_max)?;
            let k_seq = cfg.need("k_seq", &cfg.k_seq)?;
            let beta = rational(&cfg.need("beta", &cfg.beta)?)?;
            pipeline_report(&label, &f, &k_seq, &beta, n_max, &ocfg)
        }
        Target::Trees => {
            let f = cfg.need("f", &cfg.f)?;
            let depth = cfg.need("depth", &cfg.depth)?;
            let keep = cfg.need("keep", &cfg.keep)?;
            let Some(seed) = cfg.seed else {
                bail!("target trees is randomized and needs an explicit `seed`");
            };
            let count = cfg.count.unwrap_or(1);
            let spec = branching(&f, depth)?;
            let rows = (0..count)
                .into_par_iter()
                .map(|i| -> Result<Vec<String>> {
                    let s = seed.wrapping_add(i);
                    let tree = FiniteTree::random(spec.clone(), keep, s)?;
                    let r = lemma5_check(&tree)?;
                    Ok(vec![
                        s.to_string(),
                        tree.node_count().to_string(),
                        format_rational(&tree.density(tree.depth())?),
                        r.homogeneous_levels.len().to_string(),
                        r.vacuous.to_string(),
                        r.holds.to_string(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            let failures = rows.iter().filter(|r| r[5] != "true").count();
            let prefix = format!("{count} trees, {failures} violating the density bound\n");
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "seed": r[0], "nodes": r[1], "density": r[2], "homogeneous": r[3], "vacuous": r[4] == "true", "holds": r[5] == "true" }))
                .collect();
            Ok(Rows {
                header: vec!["seed", "nodes", "density", "homogeneous", "vacuous", "holds"],
                rows,
            }
            .report(&label, prefix, json!({ "trees": json_rows })))
        }
        Target::Decay => {
            let g: MonomialSeq = cfg.need("g", &cfg.g)?.parse()?;
            let h: MonomialSeq = cfg.need("h", &cfg.h)?.parse()?;
            let tau: TauSpec = cfg.tau.as_deref().unwrap_or("id").parse()?;
            let (a, b) = cfg.need("window", &cfg.window)?.bounds()?;
            if a == 0 {
                bail!("window must start at n >= 1");
            }
            let rho = rho_symbolic(&g, &h, &tau);
            let gs: Vec<_> = (0..=b).map(|n| g.ceil_at(n)).collect();
            let hs: Vec<_> = (0..=b).map(|n| h.ceil_at(n)).collect();
            let w = rho_window(&gs, &hs, &tau, (a as usize, b as usize))?;
            let class = serde_json::to_value(w.classify())?;
            let row = vec![
                g.to_string(),
                h.to_string(),
                format_rational(tau.alpha()),
                rho.to_string(),
                format_rational(&w.value.lo),
                format_rational(&w.value.hi),
                w.argmin.to_string(),
                class.as_str().unwrap_or_default().to_string(),
            ];
            Ok(Rows {
                header: vec!["g", "h", "alpha", "rho", "window_lo", "window_hi", "argmin", "class"],
                rows: vec![row],
            }
            .report(&label, String::new(), json!({ "rho": rho.to_string(), "window_lo": format_rational(&w.value.lo), "window_hi": format_rational(&w.value.hi), "argmin": w.argmin, "class": class })))
        }
    }
}

fn ratio_report(label: &str, rows: &[RatioRow]) -> Report {
    let lines: Vec<String> = rows.iter().map(RatioRow::csv_line).collect();
    let flags = rows.first().map(|r| r.hypothesis_flags.to_string()).unwrap_or_default();
    Rows::from_csv(RatioRow::CSV_HEADER, &lines).report(label, format!("hypotheses: {flags}\n"), json!({ "rows": rows }))
}

fn pipeline_report(label: &str, f: &[u32], k_seq: &[u64], beta: &num_rational::BigRational, n_max: usize, cfg: &OracleConfig) -> Result<Report> {
    let spec = branching(f, n_max)?;
    let mut k_seq = k_seq.to_vec();
    if let Some(&last) = k_seq.last() {
        k_seq.resize(k_seq.len().max(n_max + 1), last);
    }
    let rows = build_pipeline(&spec, &k_seq, beta, n_max, cfg)?;
    let lines: Vec<String> = rows.iter().map(PipelineRow::csv_line).collect();
    Ok(Rows::from_csv(PipelineRow::CSV_HEADER, &lines).report(label, String::new(), json!({ "rows": rows })))
}

#[derive(Subcommand)]
pub enum RatioCmd {
    /// M0(2m, m, k(m), t(m)) / C(2m, m).
    M0 {
        #[command(flatten)]
        curve: Curve,
        /// `conjectured` or `oracle`.
        #[arg(long, default_value = "conjectured")]
        source: RatioSource,
    },
    /// sqrt(N1(2m, m, k(m), t(m))) / C(2m, m), from the oracle.
    N1 {
        #[command(flatten)]
        curve: Curve,
    },
}

#[derive(Args)]
pub struct Curve {
    /// k as a monomial in m, e.g. `m^1/2`.
    #[arg(long = "k")]
    k_fn: MonomialSeq,
    /// t as a monomial in m.
    #[arg(long = "t")]
    t_fn: MonomialSeq,
    /// Inclusive range of m, e.g. `1..6`.
    #[arg(long = "m", default_value = "1..6")]
    m: String,
}

pub fn ratio(cmd: RatioCmd, ctx: &Ctx) -> Result<Report> {
    let (curve, source) = match &cmd {
        RatioCmd::M0 { curve, source } => (curve, Some(*source)),
        RatioCmd::N1 { curve } => (curve, None),
    };
    let (lo, hi) = parse_range(&curve.m)?;
    let ms: Vec<u64> = (lo..=hi).collect();
    Ok(match source {
        Some(s) => ratio_report("ratio m0", &ratio_table_m0(&curve.k_fn, &curve.t_fn, &ms, s, &ctx.cfg)),
        None => ratio_report("ratio n1", &ratio_table_n1(&curve.k_fn, &curve.t_fn, &ms, &ctx.cfg)),
    })
}

#[derive(Args)]
pub struct PipelineArgs {
    /// Branching bounds; the last one repeats out to --n-max.
    #[arg(long, value_delimiter = ',', required = true)]
    f: Vec<u32>,
    /// k(0), k(1), ...; the last one repeats.
    #[arg(long = "k", value_delimiter = ',', required = true)]
    k_seq: Vec<u64>,
    /// Exponent in (1/2, 1) with t = ceil(k^beta).
    #[arg(long, default_value = "3/4")]
    beta: String,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
}

pub fn pipeline(a: PipelineArgs, ctx: &Ctx) -> Result<Report> {
    pipeline_report("pipeline", &a.f, &a.k_seq, &rational(&a.beta)?, a.n_max, &ctx.cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_config() {
        let c = ScanConfig::parse("target = \"m0\"\nn = [2, 5]\nm = [1, 5]\nk = [1, 3]\nt = 1\n").unwrap();
        assert_eq!(c.target, Target::M0);
        assert_eq!(c.queries().unwrap().len(), c.m0_cells().unwrap().len());
        assert!(ScanConfig::parse("target = \"m0\"\nbogus = 1\n").is_err());
        assert!(ScanConfig::parse("target = \"m\"\nn = 4\nk = 2\nt = 1\nbeta = \"3/4\"\n").is_err());
        let caps = ScanConfig::parse("target = \"m\"\nclique_cap = 500\n").unwrap();
        assert!(caps.oracle_config(&OracleConfig::default()).is_err());
        let caps = ScanConfig::parse("target = \"m\"\nclique_cap = 500\noverride_caps = true\n").unwrap();
        assert_eq!(caps.oracle_config(&OracleConfig::default()).unwrap().clique_cap, 500);
    }

    #[test]
    fn grid_respects_orderings() {
        let c = ScanConfig::parse("target = \"cross\"\nn = 4\nk = [1, 5]\nl = [1, 5]\nt = [1, 2]\n").unwrap();
        for q in c.queries().unwrap() {
            let OracleQuery::Cross { n, k, l, t } = q else { panic!() };
            assert!(t <= k.min(l) && k.max(l) <= n);
        }
        let c = ScanConfig::parse("target = \"n1\"\nm = [1, 3]\nk = [1, 3]\nt = 1\n").unwrap();
        assert!(c.queries().unwrap().iter().all(|q| matches!(q, OracleQuery::N1 { n, m, .. } if *n == 2 * m)));
    }
}
