//! Exhaustive oracles and the result cache.

use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use serde_json::{json, Value};
use treeshade::oracle::{OracleCache, OracleQuery, OracleResult};

use crate::output::{csv_field, table, Report};
use crate::Ctx;

const DEFAULT_CACHE: &str = "treeshade-cache.jsonl";

#[derive(Subcommand)]
pub enum OracleCmd {
    /// Largest t-intersecting family of k-subsets of [n].
    M { n: u32, k: u32, t: u32 },
    /// Largest m-shade of a t-intersecting family of k-subsets.
    M0 { n: u32, m: u32, k: u32, t: u32 },
    /// Largest |A||B| over cross-t-intersecting A (k-sets), B (l-sets).
    Cross { n: u32, k: u32, l: u32, t: u32 },
    /// Largest product of the mk- and ml-shades of a cross-t-intersecting pair.
    N0 { n: u32, mk: u32, ml: u32, k: u32, l: u32, t: u32 },
    /// N0 with mk = ml = m and k = l.
    N1 { n: u32, m: u32, k: u32, t: u32 },
}

#[derive(Subcommand)]
pub enum CacheCmd {
    /// Revalidate every stored witness; exits 3 on any failure.
    Verify,
    /// Delete the cache file.
    Clear,
}

/// Some cached witness failed revalidation.
#[derive(Debug)]
pub struct VerifyFailed(pub usize);

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} cached witness(es) failed revalidation", self.0)
    }
}

impl std::error::Error for VerifyFailed {}

impl OracleCmd {
    fn query(&self) -> OracleQuery {
        match *self {
            OracleCmd::M { n, k, t } => OracleQuery::M { n, k, t },
            OracleCmd::M0 { n, m, k, t } => OracleQuery::M0 { n, m, k, t },
            OracleCmd::Cross { n, k, l, t } => OracleQuery::Cross { n, k, l, t },
            OracleCmd::N0 { n, mk, ml, k, l, t } => OracleQuery::N0 { n, mk, ml, k, l, t },
            OracleCmd::N1 { n, m, k, t } => OracleQuery::N1 { n, m, k, t },
        }
    }
}

/// Runs through the cache when one is configured.
pub fn solve(q: &OracleQuery, ctx: &Ctx) -> treeshade::Result<OracleResult> {
    match &ctx.cache {
        Some(c) => c.run(q, &ctx.cfg),
        None => q.run(&ctx.cfg),
    }
}

pub fn result_json(r: &OracleResult) -> Value {
    json!({
        "query": r.cache_key,
        "kind": r.query.kind(),
        "value": r.value,
        "witness": r.witness,
        "explored": r.explored,
        "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
    })
}

pub fn run(cmd: OracleCmd, ctx: &Ctx) -> Result<Report> {
    let q = cmd.query();
    let r = solve(&q, ctx)?;
    r.revalidate()?;
    let text = format!(
        "{}\nwitness: {}\nquery: {}  explored: {}  elapsed: {:.3} ms\n",
        r.value,
        r.witness,
        r.cache_key,
        r.explored,
        r.elapsed.as_secs_f64() * 1e3
    );
    Ok(Report::new(format!("oracle {}", q.kind()), text, result_json(&r)))
}

pub fn cache(cmd: CacheCmd, ctx: &Ctx) -> Result<Report> {
    let path = ctx.cache_path.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE));
    let cache = OracleCache::new(&path);
    match cmd {
        CacheCmd::Verify => {
            let rep = cache.verify()?;
            let mut text = format!(
                "{}: {} record(s) checked, {} corrupt line(s), {} failure(s)\n",
                path.display(),
                rep.checked,
                rep.corrupt_lines,
                rep.failures.len()
            );
            if !rep.failures.is_empty() {
                let rows: Vec<Vec<String>> = rep.failures.iter().map(|(k, why)| vec![k.clone(), why.clone()]).collect();
                text.push_str(&table(&["key", "reason"], &rows));
            }
            let mut report = Report::new("cache verify", text, json!({ "path": path, "report": rep, "ok": rep.is_ok() }))
                .with_csv(
                    "key,reason",
                    rep.failures
                        .iter()
                        .map(|(k, why)| format!("{},{}", csv_field(k), csv_field(why)))
                        .collect(),
                );
            if !rep.is_ok() {
                report.failure = Some(VerifyFailed(rep.failures.len()).into());
            }
            Ok(report)
        }
        CacheCmd::Clear => {
            cache.clear()?;
            Ok(Report::new(
                "cache clear",
                format!("cleared {}\n", path.display()),
                json!({ "path": path }),
            ))
        }
    }
}
