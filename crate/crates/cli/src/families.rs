//! Set-family predicates and closed-form extremal values.

use anyhow::Result;
use clap::Args;
use serde_json::json;
use treeshade::extremal::{ak_max_with_index, conjectured_m0, frankl_family, frankl_size, mt_cross_max, FranklParams};
use treeshade::setfam::{is_cross_t_intersecting, is_t_intersecting, m_shade, shade as shade_of};

use crate::args::{parse_family, parse_set};
use crate::output::Report;

#[derive(Args)]
pub struct ShadeArgs {
    #[arg(long)]
    n: u32,
    /// Elements, e.g. `1,3`.
    set: String,
}

#[derive(Args)]
pub struct MshadeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    /// Members separated by `;`, e.g. `1,2;1,3;2,3`.
    family: String,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    t: u32,
    family: String,
    /// Second family: test the pair for cross-t-intersection instead.
    #[arg(long)]
    cross: Option<String>,
}

#[derive(Args)]
pub struct FranklArgs {
    n: u32,
    k: u32,
    t: u32,
    i: u32,
    /// Print the members, not just the size.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
pub struct AkArgs {
    n: u32,
    k: u32,
    t: u32,
}

#[derive(Args)]
pub struct MtArgs {
    n: u32,
    k: u32,
    l: u32,
}

#[derive(Args)]
pub struct ConjArgs {
    n: u32,
    m: u32,
    k: u32,
    t: u32,
}

pub fn shade(a: ShadeArgs) -> Result<Report> {
    let x = parse_set(a.n, &a.set)?;
    let s = shade_of(x);
    let text = format!("{}\n{s}\n", s.len());
    Ok(Report::new("shade", text, json!({ "set": x, "size": s.len(), "shade": s })))
}

pub fn mshade(a: MshadeArgs) -> Result<Report> {
    let f = parse_family(a.n, &a.family)?;
    let s = m_shade(&f, a.m)?;
    let text = format!("{}\n{s}\n", s.len());
    Ok(Report::new("mshade", text, json!({ "family": f, "m": a.m, "size": s.len(), "shade": s })))
}

pub fn check(a: CheckArgs) -> Result<Report> {
    let f = parse_family(a.n, &a.family)?;
    let (holds, second) = match &a.cross {
        Some(other) => {
            let g = parse_family(a.n, other)?;
            (is_cross_t_intersecting(&f, &g, a.t)?, Some(g))
        }
        None => (is_t_intersecting(&f, a.t)?, None),
    };
    Ok(Report::new(
        "check-intersecting",
        holds.to_string(),
        json!({ "family": f, "cross": second, "t": a.t, "holds": holds }),
    ))
}

pub fn frankl(a: FranklArgs) -> Result<Report> {
    let p = FranklParams::new(a.n, a.k, a.t, a.i)?;
    let size = frankl_size(p);
    let mut text = format!("{size}\n");
    let members = if a.list {
        let f = frankl_family(p)?;
        text.push_str(&format!("{f}\n"));
        Some(f)
    } else {
        None
    };
    Ok(Report::new(
        "frankl",
        text,
        json!({ "n": a.n, "k": a.k, "t": a.t, "i": a.i, "size": size.to_string(), "family": members }),
    ))
}

pub fn ak_max(a: AkArgs) -> Result<Report> {
    let (v, i) = ak_max_with_index(a.n, a.k, a.t)?;
    Ok(Report::new(
        "ak-max",
        format!("{v}\nattained by F_{i}\n"),
        json!({ "n": a.n, "k": a.k, "t": a.t, "value": v.to_string(), "index": i }),
    ))
}

pub fn mt_cross(a: MtArgs) -> Result<Report> {
    let v = mt_cross_max(a.n, a.k, a.l)?;
    Ok(Report::new(
        "mt-cross",
        v.to_string(),
        json!({ "n": a.n, "k": a.k, "l": a.l, "value": v.to_string() }),
    ))
}

pub fn conj_m0(a: ConjArgs) -> Result<Report> {
    let v = conjectured_m0(a.n, a.m, a.k, a.t)?;
    Ok(Report::new(
        "conj-m0",
        v.to_string(),
        json!({ "n": a.n, "m": a.m, "k": a.k, "t": a.t, "value": v.to_string() }),
    ))
}
