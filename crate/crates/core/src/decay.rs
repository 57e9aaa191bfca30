//! Branching-decay comparisons `ρ_τ(g, h) = liminf h(n) / τ(g(n))` for
//! power transforms `τ(x) = x^α`.
//!
//! Two regimes:
//! - symbolic, on monomial sequences `a·n^b`, where the liminf is decided
//!   exactly from the exponents;
//! - windowed, on explicit integer data, where the liminf is replaced by a
//!   minimum over a finite window and reported as a rational enclosure.
//!   This is an approximation of the limit, not an identity.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{exact_rational_pow, format_rational, parse_rational, pow_enclosure, to_f64, Enclosure};
use crate::trees::{full_level_sizes, FiniteTree};
use crate::{Error, Result};

/// Lower classification threshold for windowed values: `2^-20`.
pub fn window_epsilon() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 20)
}

/// Upper classification threshold for windowed values: `2^20`.
pub fn window_ceiling() -> BigRational {
    BigRational::from_integer(BigInt::one() << 20)
}

/// The sequence `n ↦ coeff · n^exponent` with `coeff > 0`, `exponent >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialSeq {
    coeff: BigRational,
    exponent: BigRational,
}

impl MonomialSeq {
    pub fn new(coeff: BigRational, exponent: BigRational) -> Result<Self> {
        if !coeff.is_positive() {
            return Err(Error::params("monomial coefficient must be positive"));
        }
        if exponent.is_negative() {
            return Err(Error::params("monomial exponent must be nonnegative"));
        }
        Ok(MonomialSeq { coeff, exponent })
    }

    /// `n^exponent`.
    pub fn power(exponent: BigRational) -> Result<Self> {
        Self::new(BigRational::one(), exponent)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exponent(&self) -> &BigRational {
        &self.exponent
    }

    /// `ceil(coeff · n^exponent)`.
    pub fn ceil_at(&self, n: u64) -> BigUint {
        crate::exact::ceil_scaled_pow(&self.coeff, &BigUint::from(n), &self.exponent)
            .expect("monomial invariants guarantee a valid power")
    }

    /// Tends to infinity.
    pub fn is_unbounded(&self) -> bool {
        self.exponent.is_positive()
    }
}

impl fmt::Display for MonomialSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*n^{}",
            format_rational(&self.coeff),
            format_rational(&self.exponent)
        )
    }
}

/// Accepts `a*n^b`, `n^b`, `a*n`, `n`, or a bare constant `a`.
impl FromStr for MonomialSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a monomial a*n^b: {s:?}"));
        let (coeff, rest) = match compact.split_once('*') {
            Some((c, r)) => (parse_rational(c)?, r.to_string()),
            None if compact.starts_with(['n', 'm']) => (BigRational::one(), compact.clone()),
            None => return MonomialSeq::new(parse_rational(&compact)?, BigRational::zero()),
        };
        let exponent = match rest.as_str() {
            "n" | "m" => BigRational::one(),
            r => {
                let e = r
                    .strip_prefix("n^")
                    .or_else(|| r.strip_prefix("m^"))
                    .ok_or_else(bad)?;
                parse_rational(e.trim_start_matches('(').trim_end_matches(')'))?
            }
        };
        MonomialSeq::new(coeff, exponent)
    }
}

impl Serialize for MonomialSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MonomialSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The transform `x ↦ x^alpha` with `0 < alpha <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TauSpec {
    alpha: BigRational,
}

impl TauSpec {
    pub fn new(alpha: BigRational) -> Result<Self> {
        if !alpha.is_positive() || alpha > BigRational::one() {
            return Err(Error::params(format!(
                "transform exponent {} not in (0, 1]",
                format_rational(&alpha)
            )));
        }
        Ok(TauSpec { alpha })
    }

    pub fn identity() -> Self {
        TauSpec {
            alpha: BigRational::one(),
        }
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// The transform `σ` with `σ∘σ = τ`, when its exponent is rational.
    pub fn square_root(&self) -> Option<TauSpec> {
        exact_rational_pow(&self.alpha, &half()).map(|alpha| TauSpec { alpha })
    }

    /// Encloses `τ(x)` for an integer `x >= 1`.
    pub fn apply(&self, x: &BigUint) -> Result<Enclosure> {
        pow_enclosure(x, &self.alpha)
    }
}

impl FromStr for TauSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "id" => Ok(TauSpec::identity()),
            other => TauSpec::new(parse_rational(other)?),
        }
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// A family of transforms for the relation `≤_H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauFamily {
    /// `{id}`
    Identity,
    /// `{x^α : 0 < α < 1}`
    PowersBelowOne,
}

impl FromStr for TauFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id" | "identity" => Ok(TauFamily::Identity),
            "pow" | "x^<1" | "powers" => Ok(TauFamily::PowersBelowOne),
            _ => Err(Error::Parse(format!("unknown transform family {s:?} (use id or pow)"))),
        }
    }
}

/// Structural suitability report for a transform family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suitability {
    pub linear_bound: bool,
    pub unbounded: bool,
    pub concave: bool,
    pub root_closed: bool,
}

impl Suitability {
    pub fn is_suitable(&self) -> bool {
        self.linear_bound && self.unbounded && self.concave && self.root_closed
    }
}

impl TauFamily {
    /// Every member is `x^α` with `0 < α <= 1`, which is `O(x)`, unbounded and
    /// concave. Root closure: `id∘id = id`, and `α ↦ √α` maps `(0, 1)` into
    /// itself.
    pub fn suitability(self) -> Suitability {
        Suitability {
            linear_bound: true,
            unbounded: true,
            concave: true,
            root_closed: true,
        }
    }

    pub fn contains(self, tau: &TauSpec) -> bool {
        match self {
            TauFamily::Identity => tau.alpha.is_one(),
            TauFamily::PowersBelowOne => tau.alpha < BigRational::one(),
        }
    }
}

/// Exact value of `ρ_τ(g, h)` for monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rho {
    Zero,
    /// `coeff_h / coeff_g^alpha`, possibly irrational.
    Finite {
        coeff_h: BigRational,
        coeff_g: BigRational,
        alpha: BigRational,
    },
    Infinite,
}

impl Rho {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Rho::Zero)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rho::Infinite)
    }

    /// The finite value when it is rational.
    pub fn exact(&self) -> Option<BigRational> {
        match self {
            Rho::Finite { coeff_h, coeff_g, alpha } => {
                exact_rational_pow(coeff_g, alpha).map(|d| coeff_h / d)
            }
            _ => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Rho::Zero => 0.0,
            Rho::Infinite => f64::INFINITY,
            Rho::Finite { coeff_h, coeff_g, alpha } => {
                to_f64(coeff_h) / to_f64(coeff_g).powf(to_f64(alpha))
            }
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Zero => write!(f, "0"),
            Rho::Infinite => write!(f, "inf"),
            Rho::Finite { .. } => match self.exact() {
                Some(v) => write!(f, "{}", format_rational(&v)),
                None => write!(f, "~{}", self.approx()),
            },
        }
    }
}

/// `liminf h(n) / τ(g(n))` for monomial `g`, `h`: compares `b_h` with `α·b_g`.
pub fn rho_symbolic(g: &MonomialSeq, h: &MonomialSeq, tau: &TauSpec) -> Rho {
    let scaled = &tau.alpha * &g.exponent;
    match h.exponent.cmp(&scaled) {
        std::cmp::Ordering::Greater => Rho::Infinite,
        std::cmp::Ordering::Less => Rho::Zero,
        std::cmp::Ordering::Equal => Rho::Finite {
            coeff_h: h.coeff.clone(),
            coeff_g: g.coeff.clone(),
            alpha: tau.alpha.clone(),
        },
    }
}

/// `g ≤_τ h` iff `ρ_τ(g, h) > 0`.
pub fn le_tau(g: &MonomialSeq, h: &MonomialSeq, tau: &TauSpec) -> bool {
    rho_symbolic(g, h, tau).is_positive()
}

/// `g ≤_H h`: `g ≤_τ h` for every `τ` in the family.
///
/// For monomials both families reduce to `b_g <= b_h`: with `id` the equal
/// exponent case has a positive finite ratio, and for the powers below one,
/// `b_h >= α·b_g` for all `α < 1` exactly when `b_h >= b_g`.
pub fn le_h(g: &MonomialSeq, h: &MonomialSeq, family: TauFamily) -> bool {
    match family {
        TauFamily::Identity => le_tau(g, h, &TauSpec::identity()),
        TauFamily::PowersBelowOne => g.exponent <= h.exponent,
    }
}

/// Whether `(g0 ≤_H g1 ∧ g1 ≤_H g2) ⇒ g0 ≤_H g2` held for this triple.
pub fn transitivity_check(g0: &MonomialSeq, g1: &MonomialSeq, g2: &MonomialSeq, family: TauFamily) -> bool {
    !(le_h(g0, g1, family) && le_h(g1, g2, family)) || le_h(g0, g2, family)
}

/// Minimum over a window of `h(n) / τ(g(n))`, enclosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRho {
    pub value: Enclosure,
    /// Index at which the upper end of the enclosure was attained.
    pub argmin: usize,
}

/// Classification of a windowed value against `ε = 2^-20`, `M = 2^20`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowClass {
    BelowEpsilon,
    Finite,
    AboveCeiling,
}

impl WindowRho {
    pub fn classify(&self) -> WindowClass {
        if self.value.hi < window_epsilon() {
            WindowClass::BelowEpsilon
        } else if self.value.lo > window_ceiling() {
            WindowClass::AboveCeiling
        } else {
            WindowClass::Finite
        }
    }
}

/// `min_{n ∈ [start, end]} h(n) / τ(g(n))` over explicit sequences indexed
/// from 0. `g` must be positive on the window.
///
/// `τ` is evaluated exactly when the power is rational and otherwise with
/// `ENCLOSURE_BITS` fractional bits and outward rounding, so the returned
/// enclosure always contains the true minimum.
pub fn rho_window(g: &[BigUint], h: &[BigUint], tau: &TauSpec, window: (usize, usize)) -> Result<WindowRho> {
    let (start, end) = window;
    if start > end {
        return Err(Error::EmptyWindow);
    }
    if end >= g.len() || end >= h.len() {
        return Err(Error::params(format!(
            "window end {end} beyond sequence lengths ({}, {})",
            g.len(),
            h.len()
        )));
    }
    let mut best: Option<WindowRho> = None;
    let mut best_lo: Option<BigRational> = None;
    for n in start..=end {
        if g[n].is_zero() {
            return Err(Error::params(format!("g({n}) = 0 inside the window")));
        }
        let t = tau.apply(&g[n])?;
        let hn = BigRational::from_integer(BigInt::from(h[n].clone()));
        let lo = &hn / &t.hi;
        let hi = &hn / &t.lo;
        if best_lo.as_ref().is_none_or(|b| lo < *b) {
            best_lo = Some(lo);
        }
        if best.as_ref().is_none_or(|b| hi < b.value.hi) {
            best = Some(WindowRho {
                value: Enclosure { lo: hi.clone(), hi },
                argmin: n,
            });
        }
    }
    let mut out = best.expect("window is nonempty");
    out.value.lo = best_lo.expect("window is nonempty");
    Ok(out)
}

/// `ρ_id(h_⟨f⟩, h_T)` on the window `[1, limit]`. For a pruned tree the
/// minimum sits at `limit` and equals `density(T, limit)`.
pub fn rho_id_tree(tree: &FiniteTree, limit: usize) -> Result<BigRational> {
    if !tree.is_pruned() {
        return tree.measure_estimate();
    }
    if limit == 0 {
        return Err(Error::EmptyWindow);
    }
    if limit > tree.depth() {
        return Err(Error::params(format!("window end {limit} beyond tree depth {}", tree.depth())));
    }
    let g = full_level_sizes(tree.spec());
    let h = tree.level_sizes_big();
    let w = rho_window(&g, &h, &TauSpec::identity(), (1, limit))?;
    Ok(w.value.exact().cloned().expect("identity transform is exact"))
}

/// One row of a decay diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayRow {
    pub subtree: usize,
    pub alpha: BigRational,
    /// Enclosure of `min_n h_S(n) / h_T(n)^α` over levels where `T` is nonempty.
    pub min_ratio: Enclosure,
    pub argmin: usize,
    /// The minimum is (possibly) below the threshold.
    pub flagged: bool,
}

/// For each subtree `S` and exponent `α`, the windowed minimum over levels
/// `n ∈ [start, depth]` of `h_S(n) / h_T(n)^α`: a finite-horizon indicator
/// that `liminf |S(n)| / h_T(n)^α` may fail to diverge.
pub fn decay_diagnostic(
    tree: &FiniteTree,
    subtrees: &[FiniteTree],
    alphas: &[BigRational],
    threshold: &BigRational,
    start: usize,
) -> Result<Vec<DecayRow>> {
    let taus = alphas
        .iter()
        .map(|a| TauSpec::new(a.clone()))
        .collect::<Result<Vec<_>>>()?;
    let h_t = tree.level_sizes_big();
    let last = h_t.iter().rposition(|v| !v.is_zero());
    let end = match last {
        Some(e) if e >= start => e,
        _ => return Err(Error::EmptyWindow),
    };
    let mut rows = Vec::new();
    for (i, s) in subtrees.iter().enumerate() {
        if s.spec() != tree.spec() || !s.is_subtree_of(tree) {
            return Err(Error::params(format!("subtree #{i} is not contained in the ambient tree")));
        }
        let h_s = s.level_sizes_big();
        for tau in &taus {
            let w = rho_window(&h_t, &h_s, tau, (start, end))?;
            rows.push(DecayRow {
                subtree: i,
                alpha: tau.alpha.clone(),
                flagged: w.value.lo < *threshold,
                min_ratio: w.value,
                argmin: w.argmin,
            });
        }
    }
    Ok(rows)
}
