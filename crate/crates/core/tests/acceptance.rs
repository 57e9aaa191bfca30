//! Acceptance sweeps. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treeshade::combin::{binom, binom_big, KSubsets};
use treeshade::decay::{le_h, rho_id_tree, rho_symbolic, transitivity_check, MonomialSeq, Rho, TauFamily, TauSpec};
use treeshade::exact::parse_rational;
use treeshade::extremal::{ak_max, four_m_value, mt_cross_max};
use treeshade::oracle::{conjecture_check_m0, m0_grid, oracle_cross, oracle_max_intersecting, OracleConfig, Verdict};
use treeshade::pipeline::{build_pipeline, claim_c5_sweep};
use treeshade::setfam::{count_homogeneous_colourings, is_homogeneous, m_shade, m_shade_of, Colouring, Family, SubsetMask};
use treeshade::trees::{lemma5_check, splitting_trace, BranchingSpec, FiniteTree, NodeColouring};
use treeshade::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64, ok: Outcome) -> Outcome {
    if ok.pass && elapsed > Duration::from_secs(limit_secs) {
        fail(format!("{} but took {elapsed:.1?} (limit {limit_secs}s)", ok.detail))
    } else {
        ok
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn c1_ak_agreement() -> Outcome {
    let cfg = OracleConfig::default();
    let start = Instant::now();
    let mut cells = 0;
    for n in 1..=8 {
        for k in 1..=n {
            for t in 1..=k {
                let r = match oracle_max_intersecting(n, k, t, &cfg) {
                    Ok(r) => r,
                    Err(e) => return fail(format!("M({n},{k},{t}): {e}")),
                };
                let ak = ak_max(n, k, t).unwrap();
                if big(r.value) != ak {
                    return fail(format!("M({n},{k},{t}): oracle {} vs closed form {ak}", r.value));
                }
                cells += 1;
            }
        }
    }
    let el = start.elapsed();
    within(el, 600, pass(format!("{cells} cells equal, {el:.1?}")))
}

fn c2_four_m() -> Outcome {
    let a = ak_max(4, 2, 2).unwrap();
    let b = ak_max(8, 4, 2).unwrap();
    if a == big(1) && b == big(17) && four_m_value(1) == a && four_m_value(2) == b {
        pass("M(4,2,2) = 1, M(8,4,2) = 17")
    } else {
        fail(format!("M(4,2,2) = {a}, M(8,4,2) = {b}"))
    }
}

fn c3_cross() -> Outcome {
    let cfg = OracleConfig::default();
    let start = Instant::now();
    let (mut checked, mut over_cap) = (0, 0);
    for n in 2..=8u32 {
        for k in 1..=n / 2 {
            for l in 1..=n / 2 {
                match oracle_cross(n, k, l, 1, &cfg) {
                    Ok(r) => {
                        let mt = mt_cross_max(n, k, l).unwrap();
                        if big(r.value) != mt {
                            return fail(format!("N({n},{k},{l},1): oracle {} vs {mt}", r.value));
                        }
                        checked += 1;
                    }
                    Err(Error::Infeasible { .. }) => over_cap += 1,
                    Err(e) => return fail(format!("N({n},{k},{l},1): {e}")),
                }
            }
        }
    }
    let el = start.elapsed();
    within(
        el,
        900,
        pass(format!("{checked} cells equal, {over_cap} beyond the closure cap, {el:.1?}")),
    )
}

fn c4_conjecture_scan() -> Outcome {
    let start = Instant::now();
    let grid = m0_grid(8);
    let cells = conjecture_check_m0(&grid, &OracleConfig::default());
    let mut counts = [0usize; 4];
    let mut problems = Vec::new();
    for c in &cells {
        let slot = match &c.verdict {
            Verdict::Match => 0,
            Verdict::ConjectureLow => 1,
            Verdict::ConjectureNotTight => 2,
            Verdict::Skipped(_) => 3,
        };
        counts[slot] += 1;
        match &c.verdict {
            Verdict::ConjectureLow => println!(
                "    counterexample: M0({},{},{},{}) oracle {} > conjectured {}",
                c.n,
                c.m,
                c.k,
                c.t,
                c.oracle.unwrap(),
                c.conjectured.as_ref().unwrap()
            ),
            Verdict::ConjectureNotTight => problems.push(format!("not tight at {:?}", (c.n, c.m, c.k, c.t))),
            _ => {}
        }
        if c.m == c.k && c.verdict != Verdict::Match {
            problems.push(format!("m = k cell {:?} is {:?}", (c.n, c.m, c.k, c.t), c.verdict));
        }
    }
    let detail = format!(
        "{} cells: {} match, {} conjecture_low, {} conjecture_not_tight, {} skipped, {:.1?}",
        cells.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        start.elapsed()
    );
    if problems.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail}; {}", problems.join("; ")))
    }
}

fn c5_lemma_l2_and_equivalence() -> Outcome {
    let m = 2;
    let n = 2 * m;
    let mut families = 0;
    for k in 1..=2 {
        let level: Vec<SubsetMask> = KSubsets::new(n, k).map(|b| SubsetMask::new(n, b).unwrap()).collect();
        for sel in 0u32..1 << level.len() {
            let fam = Family::new(n, k, (0..level.len()).filter(|i| sel >> i & 1 == 1).map(|i| level[i])).unwrap();
            let count = count_homogeneous_colourings(&fam, m).unwrap();
            let shade = m_shade(&fam, m).unwrap().len() as u64;
            if count > 2 * shade {
                return fail(format!("{fam}: {count} homogeneous colourings > 2·{shade}"));
            }
            families += 1;
        }
    }
    let mut pairs = 0u64;
    for n in 1..=6u32 {
        for xb in 0u32..1 << n {
            let x = SubsetMask::new(n, xb).unwrap();
            for cm in 0..=n {
                for c in Colouring::all_with_class_size(n, cm).unwrap() {
                    let lhs = is_homogeneous(x, &c);
                    let in_zero = m_shade_of(x, cm).unwrap().contains(c.zero_class());
                    let in_one = m_shade_of(x, n - cm).unwrap().contains(c.one_class());
                    if lhs != (in_zero || in_one) {
                        return fail(format!("equivalence fails at x = {x}, 0-class {}", c.zero_class()));
                    }
                    pairs += 1;
                }
            }
        }
    }
    pass(format!("{families} families on [4], {pairs} (x, c) pairs with n <= 6"))
}

fn c6_shade_identity() -> Outcome {
    let mut cases = 0;
    for n in 0..=10u32 {
        for xb in 0u32..1 << n {
            let x = SubsetMask::new(n, xb).unwrap();
            for m in x.len()..=n {
                let got = m_shade_of(x, m).unwrap().len() as u64;
                let want = binom((n - x.len()) as u64, (m - x.len()) as u64).unwrap();
                if got != want {
                    return fail(format!("|∇^{m}({x})| = {got}, expected {want}"));
                }
                cases += 1;
            }
        }
    }
    pass(format!("{cases} cases"))
}

fn random_trees() -> Vec<FiniteTree> {
    let spec = BranchingSpec::binary(12);
    (0..500u64)
        .map(|seed| {
            let keep = 0.55 + 0.4 * (seed % 9) as f64 / 8.0;
            FiniteTree::random(spec.clone(), keep, seed).unwrap()
        })
        .collect()
}

fn c7_lemma_l5(trees: &[FiniteTree]) -> Outcome {
    let (mut nonvacuous, mut nonempty) = (0, 0);
    for (seed, t) in trees.iter().enumerate() {
        if !t.is_pruned() {
            return fail(format!("seed {seed}: generated tree is not pruned"));
        }
        let r = lemma5_check(t).unwrap();
        if !(r.density <= r.product_bound && r.product_bound <= r.geometric_bound && r.holds) {
            return fail(format!(
                "seed {seed}: density {} / product {} / (2/3)^|F| {}",
                r.density, r.product_bound, r.geometric_bound
            ));
        }
        nonvacuous += usize::from(!r.vacuous);
        nonempty += usize::from(!t.is_empty());
    }
    pass(format!("{} trees ({nonempty} nonempty, {nonvacuous} with a homogeneous level)", trees.len()))
}

fn c8_trace() -> Outcome {
    let depth = 10;
    let spec = BranchingSpec::binary(depth);
    let c = NodeColouring::canonical(spec);
    for bits in 0u32..1 << depth {
        let branch: Vec<u32> = (0..depth).map(|i| bits >> i & 1).collect();
        let trace = splitting_trace(&c, &branch, depth + 1).unwrap();
        let shift: std::collections::BTreeSet<usize> = (1..=depth).filter(|&n| branch[n - 1] == 1).collect();
        if trace != shift {
            return fail(format!("branch {branch:?}: trace {trace:?} vs shift {shift:?}"));
        }
    }
    pass(format!("{} branches", 1u32 << depth))
}

fn random_mono(rng: &mut ChaCha8Rng) -> MonomialSeq {
    let coeff = BigRational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=4).into());
    let exp = BigRational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=6).into());
    MonomialSeq::new(coeff, exp).unwrap()
}

fn c9_decay(trees: &[FiniteTree]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdeca7);
    let alphas: Vec<TauSpec> = (1..32).map(|k| TauSpec::new(BigRational::new(k.into(), 32.into())).unwrap()).collect();
    let id = TauSpec::identity();
    let triples = 10_000;
    for i in 0..triples {
        let (g0, g1, g2) = (random_mono(&mut rng), random_mono(&mut rng), random_mono(&mut rng));
        for fam in [TauFamily::Identity, TauFamily::PowersBelowOne] {
            if !le_h(&g0, &g0, fam) || !transitivity_check(&g0, &g1, &g2, fam) {
                return fail(format!("triple #{i} ({g0}, {g1}, {g2}) breaks the quasi-order for {fam:?}"));
            }
        }
        let a = TauSpec::new(BigRational::new(rng.gen_range(1..1000).into(), 1000.into())).unwrap();
        for (g, h) in [(&g0, &g1), (&g1, &g2), (&g0, &g2)] {
            let p7 = rho_symbolic(g, h, &id).is_positive();
            let p8 = le_h(g, h, TauFamily::PowersBelowOne);
            for tau in alphas.iter().chain([&a]) {
                let infinite = rho_symbolic(g, h, tau) == Rho::Infinite;
                if (p7 || p8) && !infinite {
                    return fail(format!("({g}, {h}) at alpha {}: positive id-ratio without divergence", tau.alpha()));
                }
            }
        }
    }
    for (seed, t) in trees.iter().enumerate() {
        for n in 1..=t.depth() {
            if rho_id_tree(t, n).unwrap() != t.density(n).unwrap() {
                return fail(format!("seed {seed}: windowed id-ratio differs from density at level {n}"));
            }
        }
    }
    pass(format!("{triples} monomial triples, {} trees", trees.len()))
}

fn c10_pipeline() -> Outcome {
    let cfg = OracleConfig::default();
    let spec = BranchingSpec::binary(4);
    let rows = build_pipeline(&spec, &[0, 1, 2, 2], &q("3/4"), 3, &cfg).unwrap();
    let r = &rows[2];
    let row_ok = r.m == big(2)
        && r.colouring_count == Some(binom_big(4, 2))
        && r.colouring_count == Some(big(6))
        && r.n1 == Some(1)
        && r.g == Some(1)
        && r.ratio == Some(q("1/6"));
    if !row_ok {
        return fail(format!("row n=2: {r:?}"));
    }
    let sweep = claim_c5_sweep(2, &cfg).unwrap();
    if sweep.violated != 0 || sweep.premise_fails != 0 {
        return fail(format!("shade implication sweep: {sweep:?}"));
    }
    pass(format!(
        "row n=2: m=2 |F|=6 N1=1 g=1 ratio 1/6; {} families, {} implications hold, {} vacuous",
        sweep.families, sweep.holds, sweep.vacuous
    ))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let trees = random_trees();
    let criteria: Vec<Criterion> = vec![
        ("1 AK agreement (n <= 8)", Box::new(c1_ak_agreement)),
        ("2 4m-values", Box::new(c2_four_m)),
        ("3 cross maximum (t = 1, n <= 8)", Box::new(c3_cross)),
        ("4 conjectured M0 scan (n <= 8)", Box::new(c4_conjecture_scan)),
        ("5 homogeneous-colouring bound and equivalence", Box::new(c5_lemma_l2_and_equivalence)),
        ("6 shade identity (n <= 10)", Box::new(c6_shade_identity)),
        ("7 homogeneous-level density bound", Box::new(|| c7_lemma_l5(&trees))),
        ("8 splitting trace (depth 10)", Box::new(c8_trace)),
        ("9 decay propositions", Box::new(|| c9_decay(&trees))),
        ("10 pipeline and shade implication", Box::new(c10_pipeline)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let out = run();
        println!("[{}] criterion {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        failed += usize::from(!out.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
