use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use treeshade::combin::KSubsets;
use treeshade::decay::{rho_symbolic, rho_window, MonomialSeq, Rho, TauSpec, WindowClass};
use treeshade::exact::{int, to_f64};
use treeshade::extremal::{ak_max, conjectured_m0, frankl_family, frankl_size, FranklParams};
use treeshade::oracle::{oracle_cross, oracle_m0, oracle_max_intersecting, oracle_n0, OracleConfig};
use treeshade::pipeline::m_values;
use treeshade::setfam::{is_t_intersecting, m_shade, Family, SubsetMask};
use treeshade::trees::{lemma5_check, BranchingSpec, FiniteTree};

/// A random family of `k`-subsets of `[n]`.
fn family() -> impl Strategy<Value = Family> {
    (1u32..=7)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, k)| {
            let level: Vec<u32> = KSubsets::new(n, k).collect();
            let len = level.len();
            (Just(n), Just(k), proptest::collection::vec(any::<bool>(), len), Just(level))
        })
        .prop_map(|(n, k, picks, level)| {
            let members = level
                .into_iter()
                .zip(picks)
                .filter(|(_, p)| *p)
                .map(|(b, _)| SubsetMask::new(n, b).unwrap());
            Family::new(n, k, members).unwrap()
        })
}

fn oracle_cell() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (2u32..=7)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| (Just(n), k..=n, Just(k), 1..=k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shade_is_monotone_and_composes(f in family(), a in 0u32..8, b in 0u32..8) {
        let n = f.ground();
        let (lo, hi) = (a.min(b).min(n), a.max(b).min(n));
        let s_hi = m_shade(&f, hi).unwrap();
        if lo >= f.uniformity() {
            let s_lo = m_shade(&f, lo).unwrap();
            prop_assert_eq!(m_shade(&s_lo, hi).unwrap(), s_hi.clone());
        }
        let sub = Family::new(n, f.uniformity(), f.iter().step_by(2)).unwrap();
        prop_assert!(m_shade(&sub, hi).unwrap().is_subfamily_of(&s_hi));
    }

    #[test]
    fn families_round_trip_through_json(f in family()) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Family>(&text).unwrap(), f);
    }

    #[test]
    fn subfamilies_stay_intersecting(f in family(), t in 1u32..4) {
        if is_t_intersecting(&f, t).unwrap() {
            let sub = Family::new(f.ground(), f.uniformity(), f.iter().skip(1)).unwrap();
            prop_assert!(is_t_intersecting(&sub, t).unwrap());
        }
    }

    #[test]
    fn m0_oracle_is_bracketed((n, m, k, t) in oracle_cell()) {
        let cfg = OracleConfig::default();
        let r = oracle_m0(n, m, k, t, &cfg).unwrap();
        r.revalidate().unwrap();
        let v = BigUint::from(r.value);
        prop_assert!(v <= ak_max(n, m, t).unwrap());
        for i in 0..=(k - t).min((n - t) / 2) {
            let fi = frankl_family(FranklParams::new(n, k, t, i).unwrap()).unwrap();
            prop_assert!(r.value >= m_shade(&fi, m).unwrap().len() as u64);
        }
        if m == k {
            prop_assert_eq!(r.value, oracle_max_intersecting(n, k, t, &cfg).unwrap().value);
            prop_assert_eq!(v, conjectured_m0(n, m, k, t).unwrap());
        }
    }

    #[test]
    fn n0_is_bounded_by_cross((n, m, k, t) in oracle_cell(), extra in 0u32..3) {
        let cfg = OracleConfig::default();
        let ml = (k + extra).min(n);
        if let (Ok(n0), Ok(cross)) = (oracle_n0(n, m, ml, k, k, t, &cfg), oracle_cross(n, m, ml, t, &cfg)) {
            n0.revalidate().unwrap();
            prop_assert!(n0.value <= cross.value);
        }
    }

    #[test]
    fn frankl_sizes_count_members(
        (n, k, t, i) in (1u32..=12)
            .prop_flat_map(|n| (Just(n), 1..=n))
            .prop_flat_map(|(n, k)| (Just(n), Just(k), 1..=k))
            .prop_flat_map(|(n, k, t)| (Just(n), Just(k), Just(t), 0..=(n - t) / 2))
    ) {
        let p = FranklParams::new(n, k, t, i).unwrap();
        let f = frankl_family(p).unwrap();
        prop_assert_eq!(frankl_size(p), BigUint::from(f.len() as u64));
        prop_assert!(is_t_intersecting(&f, t).unwrap());
    }

    #[test]
    fn pruned_density_decreases(f in proptest::collection::vec(2u32..5, 1..7), keep in 0.3f64..1.0, seed: u64) {
        let spec = BranchingSpec::new(f).unwrap();
        let t = FiniteTree::random(spec, keep, seed).unwrap();
        prop_assert!(t.is_pruned());
        for n in 1..=t.depth() {
            prop_assert!(t.density(n).unwrap() <= t.density(n - 1).unwrap());
        }
        let r = lemma5_check(&t).unwrap();
        prop_assert!(r.holds);
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<FiniteTree>(&text).unwrap(), t);
    }

    #[test]
    fn m_telescopes(f in proptest::collection::vec(2u32..6, 2..8)) {
        let mut f = f;
        f[0] += f[0] % 2;
        let spec = BranchingSpec::new(f.clone()).unwrap();
        let ms = m_values(&spec, spec.depth()).unwrap();
        for n in 1..spec.depth() {
            prop_assert_eq!(&ms[n + 1], &(&ms[n] * f[n]));
        }
    }

    #[test]
    fn pointwise_domination_gives_ratio_at_least_one(g in proptest::collection::vec(1u64..1000, 1..40), bump in proptest::collection::vec(0u64..50, 40)) {
        let h: Vec<BigUint> = g.iter().zip(&bump).map(|(a, b)| BigUint::from(a + b)).collect();
        let g: Vec<BigUint> = g.into_iter().map(BigUint::from).collect();
        let w = rho_window(&g, &h, &TauSpec::identity(), (0, g.len() - 1)).unwrap();
        prop_assert!(w.value.lo >= int(1));
    }
}

fn coeff() -> impl Strategy<Value = BigRational> {
    (1i64..=4, 1i64..=2).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn monomial() -> impl Strategy<Value = MonomialSeq> {
    (coeff(), 1i64..=3).prop_map(|(c, e)| MonomialSeq::new(c, BigRational::from_integer(e.into())).unwrap())
}

fn alpha() -> impl Strategy<Value = TauSpec> {
    prop_oneof![Just(1i64), Just(2), Just(4)].prop_map(|d| TauSpec::new(BigRational::new(1.into(), d.into())).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Monomials sampled on `[100, 10^4]`; the exponent gap is either zero or
    /// at least 4, so the windowed minimum lands in the symbolic class.
    #[test]
    fn windowed_matches_symbolic(g in monomial(), h in monomial(), tau in alpha()) {
        let gap = h.exponent() - tau.alpha() * g.exponent();
        let four = BigRational::from_integer(4.into());
        let zero = BigRational::from_integer(0.into());
        prop_assume!(gap == zero || gap >= four || gap <= -four.clone());
        let end = 10_000usize;
        let gv: Vec<BigUint> = (0..=end as u64).map(|n| g.ceil_at(n.max(1))).collect();
        let hv: Vec<BigUint> = (0..=end as u64).map(|n| h.ceil_at(n.max(1))).collect();
        let w = rho_window(&gv, &hv, &tau, (100, end)).unwrap();
        match rho_symbolic(&g, &h, &tau) {
            Rho::Zero => prop_assert_eq!(w.classify(), WindowClass::BelowEpsilon),
            Rho::Infinite => prop_assert_eq!(w.classify(), WindowClass::AboveCeiling),
            finite => {
                prop_assert_eq!(w.classify(), WindowClass::Finite);
                let (got, want) = (to_f64(&w.value.midpoint()), finite.approx());
                prop_assert!((got - want).abs() <= 0.05 * want, "{got} vs {want}");
            }
        }
    }
}

#[test]
fn oracle_is_deterministic_across_thread_counts() {
    let cfg = OracleConfig::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let grid = treeshade::oracle::m0_grid(6);
            treeshade::oracle::conjecture_check_m0(&grid, &cfg)
        })
    };
    assert_eq!(run(1), run(4));
    let a = oracle_m0(7, 4, 3, 1, &cfg).unwrap();
    let b = oracle_m0(7, 4, 3, 1, &cfg).unwrap();
    assert_eq!((a.value, a.witness), (b.value, b.witness));
}

/// The Fano plane's lines pairwise meet in a point and no 4-set holds two of
/// them, so its 4-shade has 7 * 4 = 28 members, beyond the best Frankl shade.
#[test]
fn fano_plane_beats_frankl_shades() {
    let lines: [u32; 7] = [0b0000111, 0b0011001, 0b0101010, 0b1001100, 0b0110100, 0b1010010, 0b1100001];
    for a in lines {
        for b in lines {
            assert!((a & b).count_ones() >= 1);
        }
    }
    let shade = (0u32..1 << 7)
        .filter(|s| s.count_ones() == 4 && lines.iter().any(|l| l & s == *l))
        .count();
    assert_eq!(shade, 28);
    assert_eq!(conjectured_m0(7, 4, 3, 1).unwrap(), BigUint::from(25u32));
    let r = oracle_m0(7, 4, 3, 1, &OracleConfig::default()).unwrap();
    assert_eq!(r.value, 28);
}
