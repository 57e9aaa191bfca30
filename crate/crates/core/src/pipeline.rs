//! The finite parameter chain `m(n)`, `|F(n)|`, `g(n)` built over a branching
//! function, and the arithmetic behind the shade lower bound on a level.
//!
//! `m(n) = (Π_{i<n} f(i)) / 2` with the empty product taken as zero, so
//! `m(0) = 0`; the standard convention would give `1/2`, which rows at
//! `n = 0` carry alongside.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binom_big, KSubsets};
use crate::exact::{ceil_pow, ceil_sqrt, format_rational, ratio};
use crate::oracle::{oracle_n1, OracleConfig};
use crate::setfam::{count_homogeneous_colourings, m_shade, Family};
use crate::trees::BranchingSpec;
use crate::{Error, Result};

/// Largest `m(n)` for which `C(2m, m)` is materialized.
pub const MAX_COLOURING_M: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineRow {
    pub n: usize,
    /// `m(n)` with the empty product read as zero.
    pub m: BigUint,
    /// `m(0)` under the empty-product-is-one reading; only at `n = 0`.
    pub m_standard: Option<String>,
    /// `|F(n)| = C(2m, m)`, absent when too large to materialize.
    pub colouring_count: Option<BigUint>,
    pub k: u64,
    pub t: Option<u64>,
    pub n1: Option<u64>,
    pub g: Option<u64>,
    /// `g(n) / |F(n)|`.
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Option<BigRational>,
    pub skipped: Option<String>,
}

fn ser_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

impl PipelineRow {
    pub const CSV_HEADER: &'static str = "n,m,m_standard,colouring_count,k,t,n1,g,ratio,skipped";

    pub fn csv_line(&self) -> String {
        let o = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            o(self.m_standard.clone()),
            o(self.colouring_count.as_ref().map(|c| c.to_string())),
            self.k,
            o(self.t.map(|v| v.to_string())),
            o(self.n1.map(|v| v.to_string())),
            o(self.g.map(|v| v.to_string())),
            o(self.ratio.as_ref().map(format_rational)),
            o(self.skipped.clone()).replace(',', ";"),
        )
    }
}

/// `m(n)` for `n = 0..=n_max`.
pub fn m_values(spec: &BranchingSpec, n_max: usize) -> Result<Vec<BigUint>> {
    if !spec.bound(0).is_multiple_of(2) {
        return Err(Error::params(format!("f(0) = {} must be even", spec.bound(0))));
    }
    if n_max > spec.depth() {
        return Err(Error::params(format!("n_max = {n_max} beyond branching depth {}", spec.depth())));
    }
    let mut out = vec![BigUint::zero()];
    let mut prod = BigUint::one();
    for n in 1..=n_max {
        prod *= spec.bound(n - 1);
        out.push(&prod / 2u32);
    }
    Ok(out)
}

/// Rows `n = 0..=n_max`. `k_seq[n]` is `k(n)`; `t(n) = ⌈k(n)^β⌉` and `N₁`
/// comes from the oracle where it is feasible, otherwise the row is skipped.
pub fn build_pipeline(
    spec: &BranchingSpec,
    k_seq: &[u64],
    beta: &BigRational,
    n_max: usize,
    cfg: &OracleConfig,
) -> Result<Vec<PipelineRow>> {
    let half = BigRational::new(1.into(), 2.into());
    if !(*beta > half && *beta < BigRational::one()) {
        return Err(Error::params(format!("beta = {} not in (1/2, 1)", format_rational(beta))));
    }
    if k_seq.len() <= n_max {
        return Err(Error::params(format!(
            "k sequence has {} terms, need {}",
            k_seq.len(),
            n_max + 1
        )));
    }
    let ms = m_values(spec, n_max)?;
    for (n, m) in ms.iter().enumerate().skip(1) {
        if BigUint::from(k_seq[n]) > m * 2u32 {
            return Err(Error::params(format!("k({n}) = {} exceeds 2m({n}) = {}", k_seq[n], m * 2u32)));
        }
    }
    Ok(ms
        .into_par_iter()
        .enumerate()
        .map(|(n, m)| pipeline_row(n, m, k_seq[n], beta, cfg))
        .collect())
}

fn pipeline_row(n: usize, m: BigUint, k: u64, beta: &BigRational, cfg: &OracleConfig) -> PipelineRow {
    let m_small = m.to_u64().filter(|&v| v <= MAX_COLOURING_M);
    let colouring_count = m_small.map(|v| binom_big(2 * v, v));
    let mut row = PipelineRow {
        n,
        m: m.clone(),
        m_standard: (n == 0).then(|| "1/2".to_string()),
        colouring_count,
        k,
        t: None,
        n1: None,
        g: None,
        ratio: None,
        skipped: None,
    };
    if k == 0 {
        row.skipped = Some("k = 0".into());
        return row;
    }
    let t = ceil_pow(&BigUint::from(k), beta)
        .ok()
        .and_then(|t| t.to_u64())
        .expect("k^beta <= k fits");
    row.t = Some(t);
    let Some(mv) = m_small else {
        row.skipped = Some(format!("m = {m} too large"));
        return row;
    };
    if mv == 0 {
        row.skipped = Some("m = 0".into());
        return row;
    }
    if k > mv {
        row.skipped = Some(format!("k = {k} exceeds m = {mv}"));
        return row;
    }
    if 2 * mv > u32::MAX as u64 {
        row.skipped = Some(format!("m = {mv} too large"));
        return row;
    }
    match oracle_n1(2 * mv as u32, mv as u32, k as u32, t as u32, cfg) {
        Err(e) => row.skipped = Some(e.to_string()),
        Ok(r) => {
            let g = ceil_sqrt(r.value);
            row.n1 = Some(r.value);
            row.g = Some(g);
            row.ratio = row
                .colouring_count
                .as_ref()
                .map(|c| ratio(&BigUint::from(g), c));
        }
    }
    row
}

/// Outcome of the implication `B > 2√N₁ ∧ B <= 2s ⇒ s > √N₁` on one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C5Verdict {
    /// `B <= 2√N₁`: nothing to check.
    Vacuous,
    /// `B > 2s`: the counting premise does not hold for this pair.
    PremiseFails,
    Holds,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct C5Check {
    pub b: u64,
    pub s: u64,
    pub verdict: C5Verdict,
}

/// Checks each `(B, s)` against `N₁`, comparing squares so no root is taken.
pub fn claim_c5_bound_check(pairs: &[(u64, u64)], n1: u64) -> Vec<C5Check> {
    pairs
        .iter()
        .map(|&(b, s)| {
            let (b2, s2, n1) = (b as u128 * b as u128, s as u128 * s as u128, n1 as u128);
            let verdict = if b2 <= 4 * n1 {
                C5Verdict::Vacuous
            } else if b > 2 * s {
                C5Verdict::PremiseFails
            } else if s2 > n1 {
                C5Verdict::Holds
            } else {
                C5Verdict::Violated
            };
            C5Check { b, s, verdict }
        })
        .collect()
}

/// Summary of the exhaustive sweep over families on `[2m]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct C5Sweep {
    pub families: u64,
    pub vacuous: u64,
    pub premise_fails: u64,
    pub holds: u64,
    pub violated: u64,
}

/// Every family of `k`-subsets of `[2m]` for `k = 1..=m`, every `t <= k`:
/// `B` is the number of colourings with a homogeneous member, `s` the size
/// of the `m`-shade, `N₁ = N₁(2m, m, k, t)`.
pub fn claim_c5_sweep(m: u32, cfg: &OracleConfig) -> Result<C5Sweep> {
    let n = 2 * m;
    let mut out = C5Sweep::default();
    for k in 1..=m {
        let level: Vec<u32> = KSubsets::new(n, k).collect();
        if level.len() > 20 {
            return Err(Error::Infeasible {
                what: format!("2^C({n},{k}) families"),
                size: level.len() as u64,
                cap: 20,
            });
        }
        let n1s: Vec<u64> = (1..=k)
            .map(|t| oracle_n1(n, m, k, t, cfg).map(|r| r.value))
            .collect::<Result<_>>()?;
        let pairs: Vec<(u64, u64)> = (0u32..1 << level.len())
            .into_par_iter()
            .map(|sel| {
                let fam = Family::from_sorted_raw(
                    n,
                    k,
                    (0..level.len()).filter(|i| sel >> i & 1 == 1).map(|i| level[i]),
                );
                let b = count_homogeneous_colourings(&fam, m).expect("balanced ground set");
                let s = m_shade(&fam, m).expect("m <= n").len() as u64;
                (b, s)
            })
            .collect();
        out.families += pairs.len() as u64;
        for n1 in n1s {
            for c in claim_c5_bound_check(&pairs, n1) {
                match c.verdict {
                    C5Verdict::Vacuous => out.vacuous += 1,
                    C5Verdict::PremiseFails => out.premise_fails += 1,
                    C5Verdict::Holds => out.holds += 1,
                    C5Verdict::Violated => out.violated += 1,
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn m_sequence() {
        let spec = BranchingSpec::binary(6);
        let ms = m_values(&spec, 3).unwrap();
        assert_eq!(ms, vec![0u32, 1, 2, 4].into_iter().map(BigUint::from).collect::<Vec<_>>());
        let odd = BranchingSpec::new(vec![3, 2]).unwrap();
        assert!(m_values(&odd, 1).is_err());
        let mixed = BranchingSpec::new(vec![4, 3, 5]).unwrap();
        assert_eq!(m_values(&mixed, 3).unwrap()[3], BigUint::from(30u32));
    }

    #[test]
    fn binary_rows() {
        let spec = BranchingSpec::binary(6);
        let rows = build_pipeline(&spec, &[0, 1, 2, 2], &q("3/4"), 3, &OracleConfig::default()).unwrap();
        let r0 = &rows[0];
        assert_eq!((r0.m.clone(), r0.m_standard.as_deref()), (BigUint::zero(), Some("1/2")));
        assert_eq!(r0.colouring_count, Some(BigUint::one()));
        assert!(r0.skipped.is_some());

        let r2 = &rows[2];
        assert_eq!(r2.m, BigUint::from(2u32));
        assert_eq!(r2.colouring_count, Some(BigUint::from(6u32)));
        assert_eq!((r2.t, r2.n1, r2.g), (Some(2), Some(1), Some(1)));
        assert_eq!(r2.ratio, Some(q("1/6")));

        let r1 = &rows[1];
        assert_eq!((r1.t, r1.n1, r1.g), (Some(1), Some(1), Some(1)));
        assert_eq!(r1.ratio, Some(q("1/2")));

        for r in rows.iter().filter(|r| r.n1.is_some()) {
            let (g, n1) = (r.g.unwrap(), r.n1.unwrap());
            assert!(g * g >= n1 && (g - 1) * (g - 1) < n1.max(1));
        }
    }

    #[test]
    fn pipeline_errors() {
        let spec = BranchingSpec::binary(4);
        let cfg = OracleConfig::default();
        assert!(build_pipeline(&spec, &[0, 1, 2], &q("1/2"), 2, &cfg).is_err());
        assert!(build_pipeline(&spec, &[0, 1, 2], &q("1"), 2, &cfg).is_err());
        assert!(build_pipeline(&spec, &[0, 1], &q("3/4"), 2, &cfg).is_err());
        assert!(build_pipeline(&spec, &[0, 3, 2], &q("3/4"), 2, &cfg).is_err());
    }

    #[test]
    fn c5_examples() {
        let v = claim_c5_bound_check(&[(3, 2), (2, 5), (5, 2)], 1);
        assert_eq!(v[0].verdict, C5Verdict::Holds);
        assert_eq!(v[1].verdict, C5Verdict::Vacuous);
        assert_eq!(v[2].verdict, C5Verdict::PremiseFails);
    }

    #[test]
    fn c5_sweep_on_four_points() {
        let s = claim_c5_sweep(2, &OracleConfig::default()).unwrap();
        assert_eq!(s.families, 16 + 64);
        assert_eq!(s.violated, 0);
        assert_eq!(s.premise_fails, 0);
        assert!(s.holds > 0);
    }
}
