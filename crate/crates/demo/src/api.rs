//! JSON-in/JSON-out operations behind the browser page. Plain Rust so they
//! can be tested natively; `lib.rs` wraps them for wasm-bindgen.

use num_bigint::BigUint;
use serde::Serialize;
use treeshade::decay::{rho_symbolic, rho_window, MonomialSeq, TauSpec};
use treeshade::exact::{decimal, format_rational, ratio, to_f64};
use treeshade::extremal::{ak_max_with_index, conjectured_m0, frankl_family, frankl_size, FranklParams};
use treeshade::oracle::{oracle_m0, OracleConfig};
use treeshade::setfam::m_shade;
use treeshade::trees::{lemma5_check, level_homogeneity, BranchingSpec, FiniteTree, LevelClass, NodeColouring};

/// Trees with more nodes than this are summarized without a node list.
pub const MAX_DRAWN_NODES: usize = 2000;
/// Largest ground set the Frankl table enumerates for shade sizes.
pub const MAX_TABLE_GROUND: u32 = 20;
/// Largest ground set on which the page runs the exact search; keeps the
/// page responsive.
pub const MAX_ORACLE_GROUND: u32 = 8;
/// Largest window length for a decay curve.
pub const MAX_CURVE_POINTS: u64 = 5000;

type Out = Result<String, String>;

fn to_json<T: Serialize>(v: &T) -> Out {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct LevelView {
    level: usize,
    size: usize,
    density: String,
    density_f64: f64,
    class: LevelClass,
}

#[derive(Serialize)]
struct NodeView {
    path: Vec<u32>,
    colour: u8,
}

#[derive(Serialize)]
struct TreeView {
    f: Vec<u32>,
    depth: usize,
    node_count: usize,
    levels: Vec<LevelView>,
    /// Per level, in lexicographic order; empty when the tree is too large.
    nodes: Vec<Vec<NodeView>>,
    lemma5_holds: bool,
    lemma5_vacuous: bool,
    homogeneous_levels: Vec<usize>,
    density_at_bound: String,
    product_bound: String,
    geometric_bound: String,
}

/// A random pruned tree with constant branching `f` and its level colouring.
pub fn tree_explorer(f: u32, depth: u32, keep: f64, seed: u64) -> Out {
    if depth > 16 {
        return Err(format!("depth {depth} too large for the demo (max 16)"));
    }
    let spec = BranchingSpec::constant(f, depth as usize).map_err(err)?;
    let tree = FiniteTree::random(spec.clone(), keep, seed).map_err(err)?;
    let c = NodeColouring::canonical(spec.clone());
    let mut levels = Vec::new();
    for n in 0..=tree.depth() {
        let d = tree.density(n).map_err(err)?;
        levels.push(LevelView {
            level: n,
            size: tree.level_size(n).map_err(err)?,
            density: format_rational(&d),
            density_f64: to_f64(&d),
            class: level_homogeneity(&tree, n, &c).map_err(err)?,
        });
    }
    let nodes = if tree.node_count() <= MAX_DRAWN_NODES {
        (0..=tree.depth())
            .map(|n| {
                tree.level(n)
                    .map(|lv| {
                        lv.iter()
                            .map(|s| NodeView {
                                path: s.clone(),
                                colour: c.colour(s),
                            })
                            .collect()
                    })
                    .map_err(err)
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let r = lemma5_check(&tree).map_err(err)?;
    to_json(&TreeView {
        f: spec.bounds().to_vec(),
        depth: tree.depth(),
        node_count: tree.node_count(),
        levels,
        nodes,
        lemma5_holds: r.holds,
        lemma5_vacuous: r.vacuous,
        homogeneous_levels: r.homogeneous_levels,
        density_at_bound: format_rational(&r.density),
        product_bound: format_rational(&r.product_bound),
        geometric_bound: format_rational(&r.geometric_bound),
    })
}

#[derive(Serialize)]
struct FranklRow {
    i: u32,
    size: String,
    shade_size: Option<usize>,
}

#[derive(Serialize)]
struct FranklTable {
    n: u32,
    m: u32,
    k: u32,
    t: u32,
    rows: Vec<FranklRow>,
    ak_max: String,
    ak_index: u32,
    conjectured_m0: Option<String>,
    oracle_m0: Option<u64>,
    oracle_note: Option<String>,
}

/// Sizes of `F_i(n, k, t)` and of their `m`-shades for every admissible `i`,
/// next to the closed-form maxima and, when small enough, the exact `M₀`.
pub fn frankl_table(n: u32, m: u32, k: u32, t: u32) -> Out {
    let (ak, ak_index) = ak_max_with_index(n, k, t).map_err(err)?;
    if !(k <= m && m <= n) {
        return Err(format!("need k <= m <= n, got n={n}, m={m}, k={k}"));
    }
    let mut rows = Vec::new();
    for i in 0..=(n - t) / 2 {
        let p = FranklParams::new(n, k, t, i).map_err(err)?;
        let shade_size = if n <= MAX_TABLE_GROUND {
            let fam = frankl_family(p).map_err(err)?;
            Some(m_shade(&fam, m).map_err(err)?.len())
        } else {
            None
        };
        rows.push(FranklRow {
            i,
            size: frankl_size(p).to_string(),
            shade_size,
        });
    }
    let conjectured = conjectured_m0(n, m, k, t).ok().map(|v| v.to_string());
    let (oracle, note) = if n > MAX_ORACLE_GROUND {
        (None, Some(format!("exact search runs only for n <= {MAX_ORACLE_GROUND}")))
    } else {
        match oracle_m0(n, m, k, t, &OracleConfig::default()) {
            Ok(r) => (Some(r.value), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    to_json(&FranklTable {
        n,
        m,
        k,
        t,
        rows,
        ak_max: ak.to_string(),
        ak_index,
        conjectured_m0: conjectured,
        oracle_m0: oracle,
        oracle_note: note,
    })
}

#[derive(Serialize)]
struct CurvePoint {
    n: u64,
    ratio: f64,
}

#[derive(Serialize)]
struct DecayCurve {
    g: String,
    h: String,
    alpha: String,
    rho: String,
    window_lo: String,
    window_hi: String,
    argmin: usize,
    class: treeshade::decay::WindowClass,
    points: Vec<CurvePoint>,
}

/// `h(n) / τ(g(n))` for `n = 1..=n_max`, with the symbolic limit inferior
/// and the enclosed windowed minimum.
pub fn decay_curve(g: &str, h: &str, tau: &str, n_max: u64) -> Out {
    if !(1..=MAX_CURVE_POINTS).contains(&n_max) {
        return Err(format!("n_max must be in [1, {MAX_CURVE_POINTS}]"));
    }
    let g: MonomialSeq = g.parse().map_err(err)?;
    let h: MonomialSeq = h.parse().map_err(err)?;
    let tau: TauSpec = tau.parse().map_err(err)?;
    let gs: Vec<_> = (0..=n_max).map(|n| g.ceil_at(n)).collect();
    let hs: Vec<_> = (0..=n_max).map(|n| h.ceil_at(n)).collect();
    let w = rho_window(&gs, &hs, &tau, (1, n_max as usize)).map_err(err)?;
    let alpha = to_f64(tau.alpha());
    let one = BigUint::from(1u32);
    let points = (1..=n_max)
        .map(|n| {
            let gv = to_f64(&ratio(&gs[n as usize], &one));
            let hv = to_f64(&ratio(&hs[n as usize], &one));
            CurvePoint {
                n,
                ratio: hv / gv.powf(alpha),
            }
        })
        .collect();
    to_json(&DecayCurve {
        rho: rho_symbolic(&g, &h, &tau).to_string(),
        g: g.to_string(),
        h: h.to_string(),
        alpha: format_rational(tau.alpha()),
        window_lo: decimal(&w.value.lo),
        window_hi: decimal(&w.value.hi),
        argmin: w.argmin,
        class: w.classify(),
        points,
    })
}
