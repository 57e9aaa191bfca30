//! Closed forms: Frankl families, the Ahlswede–Khachatrian maximum, the
//! conjectured `M₀`, the Matsumoto–Tokushige cross maximum, and ratio tables
//! along monomial parameter curves.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binom_big, KSubsets};
use crate::decay::MonomialSeq;
use crate::exact::{decimal, ratio};
use crate::oracle::{oracle_m0, oracle_n1, OracleConfig};
use crate::setfam::{Family, MAX_GROUND};
use crate::{Error, Result};

/// Parameters of `F_i(n, k, t)`: `1 <= t <= k <= n`, `i <= (n - t) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FranklParams {
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub i: u32,
}

impl FranklParams {
    pub fn new(n: u32, k: u32, t: u32, i: u32) -> Result<Self> {
        check_ntk(n, k, t)?;
        if i > (n - t) / 2 {
            return Err(Error::params(format!("need i <= (n-t)/2, got n={n}, t={t}, i={i}")));
        }
        Ok(FranklParams { n, k, t, i })
    }

    /// Size of the kernel `[t + 2i]`.
    fn core(&self) -> u32 {
        self.t + 2 * self.i
    }
}

fn check_ntk(n: u32, k: u32, t: u32) -> Result<()> {
    if !(1 <= t && t <= k && k <= n) {
        return Err(Error::params(format!("need 1 <= t <= k <= n, got n={n}, k={k}, t={t}")));
    }
    Ok(())
}

/// `k`-subsets of `[n]` meeting `[t + 2i]` in at least `t + i` points.
pub fn frankl_family(p: FranklParams) -> Result<Family> {
    if p.n > MAX_GROUND {
        return Err(Error::GroundTooLarge { n: p.n, max: MAX_GROUND });
    }
    let core = crate::setfam::full_mask(p.core());
    let need = p.t + p.i;
    Ok(Family::from_sorted_raw(
        p.n,
        p.k,
        KSubsets::new(p.n, p.k).filter(|x| (x & core).count_ones() >= need),
    ))
}

/// `|F_i(n, k, t)| = Σ_{j = t+i}^{min(k, t+2i)} C(t+2i, j)·C(n-t-2i, k-j)`.
pub fn frankl_size(p: FranklParams) -> BigUint {
    let core = p.core() as u64;
    let rest = p.n as u64 - core;
    let k = p.k as u64;
    ((p.t + p.i) as u64..=k.min(core))
        .map(|j| binom_big(core, j) * binom_big(rest, k - j))
        .sum()
}

/// `max_i |F_i(n, k, t)|` over `0 <= i <= (n - t) / 2`, with the first
/// maximizing `i`.
pub fn ak_max_with_index(n: u32, k: u32, t: u32) -> Result<(BigUint, u32)> {
    check_ntk(n, k, t)?;
    best_frankl(n, k, t, (n - t) / 2)
}

fn best_frankl(n: u32, level: u32, t: u32, imax: u32) -> Result<(BigUint, u32)> {
    let mut best = (BigUint::zero(), 0);
    for i in 0..=imax {
        let s = frankl_size(FranklParams::new(n, level, t, i)?);
        if s > best.0 {
            best = (s, i);
        }
    }
    Ok(best)
}

/// `M(n, k, t)` by the Ahlswede–Khachatrian theorem.
pub fn ak_max(n: u32, k: u32, t: u32) -> Result<BigUint> {
    ak_max_with_index(n, k, t).map(|(v, _)| v)
}

/// `(C(4m, 2m) - C(2m, m)²) / 2`, the maximum of `2`-intersecting
/// `2m`-subsets of `[4m]`.
pub fn four_m_value(m: u32) -> BigUint {
    let m = m as u64;
    (binom_big(4 * m, 2 * m) - binom_big(2 * m, m).pow(2)) / 2u32
}

/// `max_{0 <= i <= min(k - t, (n - t)/2)} |F_i(n, m, t)|`.
pub fn conjectured_m0(n: u32, m: u32, k: u32, t: u32) -> Result<BigUint> {
    check_ntk(n, k, t)?;
    if !(k <= m && m <= n) {
        return Err(Error::params(format!("need k <= m <= n, got n={n}, m={m}, k={k}")));
    }
    best_frankl(n, m, t, (k - t).min((n - t) / 2)).map(|(v, _)| v)
}

/// `C(n-1, k-1)·C(n-1, l-1)`, valid when `2k, 2l <= n`.
pub fn mt_cross_max(n: u32, k: u32, l: u32) -> Result<BigUint> {
    if k == 0 || l == 0 || 2 * k > n || 2 * l > n {
        return Err(Error::params(format!(
            "cross maximum formula needs 1 <= k, l and 2k, 2l <= n, got n={n}, k={k}, l={l}"
        )));
    }
    let n1 = n as u64 - 1;
    Ok(binom_big(n1, k as u64 - 1) * binom_big(n1, l as u64 - 1))
}

/// Where a ratio table takes its values from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSource {
    Conjectured,
    Oracle,
}

impl fmt::Display for RatioSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioSource::Conjectured => "conjectured",
            RatioSource::Oracle => "oracle",
        })
    }
}

impl FromStr for RatioSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conjectured" => Ok(RatioSource::Conjectured),
            "oracle" => Ok(RatioSource::Oracle),
            _ => Err(Error::Parse(format!("unknown source {s:?} (conjectured|oracle)"))),
        }
    }
}

/// Asymptotic hypotheses on `k(m)`, `t(m)` decided from the monomial
/// exponents: `k = o(m)`, `k → ∞`, and `t / √k → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisFlags {
    pub k_little_o_m: bool,
    pub k_unbounded: bool,
    pub t_over_sqrt_k_unbounded: bool,
}

impl HypothesisFlags {
    pub fn of(k_fn: &MonomialSeq, t_fn: &MonomialSeq) -> Self {
        let one = BigRational::from_integer(1.into());
        let half = BigRational::new(1.into(), 2.into());
        HypothesisFlags {
            k_little_o_m: *k_fn.exponent() < one,
            k_unbounded: k_fn.is_unbounded(),
            t_over_sqrt_k_unbounded: *t_fn.exponent() > k_fn.exponent() * &half,
        }
    }

    pub fn all(&self) -> bool {
        self.k_little_o_m && self.k_unbounded && self.t_over_sqrt_k_unbounded
    }
}

impl fmt::Display for HypothesisFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        write!(
            f,
            "k=o(m):{};k->inf:{};t/sqrt(k)->inf:{}",
            yn(self.k_little_o_m),
            yn(self.k_unbounded),
            yn(self.t_over_sqrt_k_unbounded)
        )
    }
}

/// One row of a ratio table. `ratio_num / ratio_den` is exact; for the `N₁`
/// table the numerator is `√N₁`, written as `sqrt(N)` when irrational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub m: u64,
    pub k: u64,
    pub t: u64,
    pub value: Option<BigUint>,
    pub ratio_num: Option<String>,
    pub ratio_den: Option<String>,
    pub ratio_decimal: Option<String>,
    pub source: RatioSource,
    pub hypothesis_flags: HypothesisFlags,
    /// Reason the row has no value.
    pub skipped: Option<String>,
}

impl RatioRow {
    pub const CSV_HEADER: &'static str =
        "m,k,t,value,ratio_num,ratio_den,ratio_decimal,source,hypothesis_flags,skipped";

    pub fn csv_line(&self) -> String {
        let o = |s: &Option<String>| s.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.k,
            self.t,
            self.value.as_ref().map(|v| v.to_string()).unwrap_or_default(),
            o(&self.ratio_num),
            o(&self.ratio_den),
            o(&self.ratio_decimal),
            self.source,
            self.hypothesis_flags,
            o(&self.skipped).replace(',', ";"),
        )
    }
}

/// `k(m)`, `t(m)` as ceilings, or the reason they are unusable.
fn curve_point(k_fn: &MonomialSeq, t_fn: &MonomialSeq, m: u64) -> (u64, u64, Option<String>) {
    let k = k_fn.ceil_at(m).to_u64().unwrap_or(u64::MAX);
    let t = t_fn.ceil_at(m).to_u64().unwrap_or(u64::MAX);
    let why = if t == 0 {
        Some("t(m) = 0".to_string())
    } else if !(t <= k && k <= m) {
        Some(format!("need t <= k <= m, got k={k}, t={t}"))
    } else if 2 * m > MAX_GROUND as u64 {
        Some(format!("2m = {} exceeds the ground-set limit {MAX_GROUND}", 2 * m))
    } else {
        None
    };
    (k, t, why)
}

fn skipped_row(m: u64, k: u64, t: u64, source: RatioSource, flags: HypothesisFlags, why: String) -> RatioRow {
    RatioRow {
        m,
        k,
        t,
        value: None,
        ratio_num: None,
        ratio_den: None,
        ratio_decimal: None,
        source,
        hypothesis_flags: flags,
        skipped: Some(why),
    }
}

/// `M₀(2m, m, k(m), t(m)) / C(2m, m)` for each `m`, sorted by `m`.
pub fn ratio_table_m0(
    k_fn: &MonomialSeq,
    t_fn: &MonomialSeq,
    m_values: &[u64],
    source: RatioSource,
    cfg: &OracleConfig,
) -> Vec<RatioRow> {
    let flags = HypothesisFlags::of(k_fn, t_fn);
    let mut ms = m_values.to_vec();
    ms.sort_unstable();
    ms.dedup();
    ms.par_iter()
        .map(|&m| {
            let (k, t, why) = curve_point(k_fn, t_fn, m);
            if let Some(why) = why {
                return skipped_row(m, k, t, source, flags, why);
            }
            let (n, mm, kk, tt) = (2 * m as u32, m as u32, k as u32, t as u32);
            let value = match source {
                RatioSource::Conjectured => conjectured_m0(n, mm, kk, tt),
                RatioSource::Oracle => oracle_m0(n, mm, kk, tt, cfg).map(|r| BigUint::from(r.value)),
            };
            match value {
                Err(e) => skipped_row(m, k, t, source, flags, e.to_string()),
                Ok(v) => {
                    let r = ratio(&v, &binom_big(2 * m, m));
                    RatioRow {
                        m,
                        k,
                        t,
                        ratio_num: Some(r.numer().to_string()),
                        ratio_den: Some(r.denom().to_string()),
                        ratio_decimal: Some(decimal(&r)),
                        value: Some(v),
                        source,
                        hypothesis_flags: flags,
                        skipped: None,
                    }
                }
            }
        })
        .collect()
}

/// `√N₁(2m, m, k(m), t(m)) / C(2m, m)` from the oracle, sorted by `m`.
pub fn ratio_table_n1(k_fn: &MonomialSeq, t_fn: &MonomialSeq, m_values: &[u64], cfg: &OracleConfig) -> Vec<RatioRow> {
    let flags = HypothesisFlags::of(k_fn, t_fn);
    let source = RatioSource::Oracle;
    let mut ms = m_values.to_vec();
    ms.sort_unstable();
    ms.dedup();
    ms.par_iter()
        .map(|&m| {
            let (k, t, why) = curve_point(k_fn, t_fn, m);
            if let Some(why) = why {
                return skipped_row(m, k, t, source, flags, why);
            }
            match oracle_n1(2 * m as u32, m as u32, k as u32, t as u32, cfg) {
                Err(e) => skipped_row(m, k, t, source, flags, e.to_string()),
                Ok(r) => {
                    let n1 = BigUint::from(r.value);
                    let den = binom_big(2 * m, m);
                    let root = n1.sqrt();
                    let (num, den_s) = if &root * &root == n1 {
                        let q = ratio(&root, &den);
                        (q.numer().to_string(), q.denom().to_string())
                    } else {
                        (format!("sqrt({n1})"), den.to_string())
                    };
                    let approx = (r.value as f64).sqrt() / den.to_f64().unwrap_or(f64::INFINITY);
                    let approx = BigRational::from_float(approx).unwrap_or_default();
                    RatioRow {
                        m,
                        k,
                        t,
                        value: Some(n1),
                        ratio_num: Some(num),
                        ratio_den: Some(den_s),
                        ratio_decimal: Some(decimal(&approx)),
                        source,
                        hypothesis_flags: flags,
                        skipped: None,
                    }
                }
            }
        })
        .collect()
}
