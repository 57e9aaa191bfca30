//! Tree colourings and decay comparisons.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;
use treeshade::decay::{
    decay_diagnostic, le_h, le_tau, rho_symbolic, rho_window, MonomialSeq, TauFamily, TauSpec,
};
use treeshade::exact::{decimal, format_rational, Enclosure};
use treeshade::trees::{
    lemma5_check, level_homogeneity, split_witness, splitting_trace, FiniteTree, NodeColouring, TreeNode,
};

use crate::args::{branching, parse_list, parse_range, rational};
use crate::output::{csv_field, table, Report};

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Full,
    /// Keep the lower half (rounded up) of every branching.
    Even,
    /// Each successor kept with probability --keep; needs --seed.
    Random,
    /// A single branch given by --branch.
    Branch,
}

/// Where the tree comes from: a JSON file or a generator.
#[derive(Args)]
pub struct TreeArgs {
    /// JSON tree: `{"f": [...], "levels": [[[]], [[0], [1]], ...]}`.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Branching bounds; the last one repeats out to --depth.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    f: Vec<u32>,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, value_enum, default_value = "full")]
    shape: Shape,
    #[arg(long, default_value_t = 0.7)]
    keep: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    branch: Vec<u32>,
}

impl TreeArgs {
    fn build(&self) -> Result<FiniteTree> {
        if let Some(p) = &self.tree {
            return load_tree(p);
        }
        let spec = branching(&self.f, self.depth)?;
        Ok(match self.shape {
            Shape::Full => FiniteTree::full(spec),
            Shape::Even => FiniteTree::even_split(spec),
            Shape::Random => {
                let Some(seed) = self.seed else {
                    bail!("--shape random needs an explicit --seed");
                };
                FiniteTree::random(spec, self.keep, seed)?
            }
            Shape::Branch => FiniteTree::single_branch(spec, &self.branch)?,
        })
    }
}

fn load_tree(p: &PathBuf) -> Result<FiniteTree> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing tree {}", p.display()))
}

/// Nodes separated by `;`, coordinates by `,`.
fn parse_nodes(s: &Option<String>) -> Result<Vec<TreeNode>> {
    let Some(s) = s else { return Ok(Vec::new()) };
    s.split(';').filter(|x| !x.trim().is_empty()).map(parse_list).collect()
}

#[derive(Subcommand)]
pub enum TreeCmd {
    /// |T(n)| / h(n) per level.
    Density {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Density at full depth (finite estimate of the measure).
    Measure {
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Level colour classes under the canonical colouring.
    Colour {
        #[command(flatten)]
        tree: TreeArgs,
        /// Colour of a single node, e.g. `0,1`.
        #[arg(long)]
        node: Option<String>,
        /// Nodes whose canonical colour is flipped, e.g. `0;1,1`.
        #[arg(long)]
        exceptions: Option<String>,
    },
    /// Density bound forced by homogeneous levels.
    Lemma5 {
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Levels n < N at which the branch prefix has colour 1.
    Trace {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        f: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        branch: Vec<u32>,
        #[arg(long = "N")]
        limit: usize,
        #[arg(long)]
        exceptions: Option<String>,
    },
    /// First listed level that meets both colours, with one node of each.
    Splitwitness {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        exceptions: Option<String>,
    },
}

pub fn tree(cmd: TreeCmd) -> Result<Report> {
    match cmd {
        TreeCmd::Density { tree, level } => {
            let t = tree.build()?;
            let levels: Vec<usize> = match level {
                Some(n) => vec![n],
                None => (0..=t.depth()).collect(),
            };
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for n in levels {
                let d = t.density(n)?;
                let row = vec![
                    n.to_string(),
                    t.level_size(n)?.to_string(),
                    t.spec().full_level_size(n).to_string(),
                    format_rational(&d),
                    decimal(&d),
                ];
                out.push(json!({ "level": n, "size": t.level_size(n)?, "density": format_rational(&d) }));
                rows.push(row);
            }
            let header = ["level", "size", "full", "density", "decimal"];
            let csv = rows.iter().map(|r| r.join(",")).collect();
            Ok(Report::new("tree density", table(&header, &rows), json!({ "tree": t, "levels": out }))
                .with_csv(&header.join(","), csv))
        }
        TreeCmd::Measure { tree } => {
            let t = tree.build()?;
            let m = t.measure_estimate()?;
            Ok(Report::new(
                "tree measure",
                format!("{} ({})\n", format_rational(&m), decimal(&m)),
                json!({ "depth": t.depth(), "measure": format_rational(&m) }),
            ))
        }
        TreeCmd::Colour { tree, node, exceptions } => {
            let t = tree.build()?;
            let c = NodeColouring::with_exceptions(t.spec().clone(), parse_nodes(&exceptions)?)?;
            if let Some(node) = node {
                let node: TreeNode = parse_list(&node)?;
                if !t.spec().admits(&node) {
                    bail!("node {node:?} is not in the full tree of f = {:?}", t.spec().bounds());
                }
                let colour = c.colour(&node);
                return Ok(Report::new(
                    "tree colour",
                    colour.to_string(),
                    json!({ "node": node, "colour": colour }),
                ));
            }
            let mut rows = Vec::new();
            let mut out = Vec::new();
            for n in 0..=t.depth() {
                let class = level_homogeneity(&t, n, &c)?;
                let level = t.level(n)?;
                let ones = level.iter().filter(|s| c.colour(s) == 1).count();
                let name = serde_json::to_value(class)?.as_str().unwrap_or_default().to_string();
                rows.push(vec![n.to_string(), (level.len() - ones).to_string(), ones.to_string(), name]);
                out.push(json!({ "level": n, "zeros": level.len() - ones, "ones": ones, "class": class }));
            }
            let header = ["level", "zeros", "ones", "class"];
            let csv = rows.iter().map(|r| r.join(",")).collect();
            Ok(Report::new("tree colour", table(&header, &rows), json!({ "levels": out }))
                .with_csv(&header.join(","), csv))
        }
        TreeCmd::Lemma5 { tree } => {
            let t = tree.build()?;
            let r = lemma5_check(&t)?;
            let text = format!(
                "holds: {}{}\nhomogeneous levels: {:?}\ndensity at level {}: {}\nproduct bound: {}\ngeometric bound: {}\n",
                r.holds,
                if r.vacuous { " (vacuous)" } else { "" },
                r.homogeneous_levels,
                r.eval_level,
                format_rational(&r.density),
                format_rational(&r.product_bound),
                format_rational(&r.geometric_bound),
            );
            Ok(Report::new("tree lemma5", text, json!({
                "homogeneous_levels": r.homogeneous_levels,
                "bound_levels": r.bound_levels,
                "eval_level": r.eval_level,
                "density": format_rational(&r.density),
                "product_bound": format_rational(&r.product_bound),
                "geometric_bound": format_rational(&r.geometric_bound),
                "vacuous": r.vacuous,
                "holds": r.holds,
            })))
        }
        TreeCmd::Trace { f, branch, limit, exceptions } => {
            let spec = branching(&f, branch.len().max(limit).max(1))?;
            let c = NodeColouring::with_exceptions(spec, parse_nodes(&exceptions)?)?;
            let trace = splitting_trace(&c, &branch, limit)?;
            let shown: Vec<String> = trace.iter().map(usize::to_string).collect();
            Ok(Report::new(
                "tree trace",
                format!("{{{}}}\n", shown.join(",")),
                json!({ "branch": branch, "limit": limit, "trace": trace }),
            ))
        }
        TreeCmd::Splitwitness { tree, levels, exceptions } => {
            let t = tree.build()?;
            let c = NodeColouring::with_exceptions(t.spec().clone(), parse_nodes(&exceptions)?)?;
            let w = split_witness(&t, &c, &levels)?;
            let text = match &w {
                Some(w) => format!("level {}: colour 0 at {:?}, colour 1 at {:?}\n", w.level, w.zero_node, w.one_node),
                None => "every listed level is homogeneous\n".to_string(),
            };
            Ok(Report::new("tree splitwitness", text, json!({ "witness": w })))
        }
    }
}

#[derive(Subcommand)]
pub enum DecayCmd {
    /// liminf h(n) / tau(g(n)) for monomials, optionally also over a window.
    Rho {
        /// Monomial such as `2*n^3/2` or `n`.
        #[arg(long)]
        g: MonomialSeq,
        #[arg(long)]
        h: MonomialSeq,
        /// `id` or an exponent in (0, 1].
        #[arg(long, default_value = "id")]
        tau: TauSpec,
        /// Inclusive window `a..b` with a >= 1.
        #[arg(long)]
        window: Option<String>,
    },
    /// Whether g decays no faster than h, for one transform or a family.
    Le {
        #[arg(long)]
        g: MonomialSeq,
        #[arg(long)]
        h: MonomialSeq,
        #[arg(long, conflicts_with = "family")]
        tau: Option<TauSpec>,
        /// `id` or `pow` (all x^a with 0 < a < 1).
        #[arg(long)]
        family: Option<TauFamily>,
    },
    /// Windowed min of |S(n)| / |T(n)|^a for subtrees S of T.
    Diagnostic {
        #[command(flatten)]
        tree: TreeArgs,
        /// Subtree JSON files; defaults to T itself.
        #[arg(long)]
        subtree: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<String>,
        #[arg(long, default_value = "1")]
        threshold: String,
        #[arg(long, default_value_t = 1)]
        start: usize,
    },
}

fn enclosure_text(e: &Enclosure) -> String {
    match e.exact() {
        Some(v) => format_rational(v),
        None => format!("[{}, {}]", decimal(&e.lo), decimal(&e.hi)),
    }
}

pub fn decay(cmd: DecayCmd) -> Result<Report> {
    match cmd {
        DecayCmd::Rho { g, h, tau, window } => {
            let rho = rho_symbolic(&g, &h, &tau);
            let mut text = format!("rho = {rho}\n");
            let mut windowed = None;
            if let Some(w) = window {
                let (a, b) = parse_range(&w)?;
                if a == 0 {
                    bail!("window must start at n >= 1");
                }
                let gs: Vec<_> = (0..=b).map(|n| g.ceil_at(n)).collect();
                let hs: Vec<_> = (0..=b).map(|n| h.ceil_at(n)).collect();
                let r = rho_window(&gs, &hs, &tau, (a as usize, b as usize))?;
                let class = r.classify();
                text.push_str(&format!(
                    "window [{a}, {b}]: {} at n = {} ({})\n",
                    enclosure_text(&r.value),
                    r.argmin,
                    serde_json::to_value(class)?.as_str().unwrap_or_default()
                ));
                windowed = Some(json!({
                    "lo": format_rational(&r.value.lo),
                    "hi": format_rational(&r.value.hi),
                    "argmin": r.argmin,
                    "class": class,
                }));
            }
            Ok(Report::new("decay rho", text, json!({
                "g": g, "h": h, "alpha": format_rational(tau.alpha()),
                "rho": rho.to_string(), "positive": rho.is_positive(), "window": windowed,
            })))
        }
        DecayCmd::Le { g, h, tau, family } => {
            let (holds, detail) = match (tau, family) {
                (Some(tau), _) => (le_tau(&g, &h, &tau), json!({ "alpha": format_rational(tau.alpha()) })),
                (None, Some(fam)) => (le_h(&g, &h, fam), json!({ "family": format!("{fam:?}"), "suitability": fam.suitability() })),
                (None, None) => (le_tau(&g, &h, &TauSpec::identity()), json!({ "alpha": "1" })),
            };
            Ok(Report::new("decay le", holds.to_string(), json!({ "g": g, "h": h, "holds": holds, "transform": detail })))
        }
        DecayCmd::Diagnostic { tree, subtree, alpha, threshold, start } => {
            let t = tree.build()?;
            let subs = if subtree.is_empty() {
                vec![t.clone()]
            } else {
                subtree.iter().map(load_tree).collect::<Result<Vec<_>>>()?
            };
            let alphas = alpha.iter().map(|a| rational(a)).collect::<Result<Vec<BigRational>>>()?;
            let rows = decay_diagnostic(&t, &subs, &alphas, &rational(&threshold)?, start)?;
            let header = ["subtree", "alpha", "min_lo", "min_hi", "argmin", "flagged"];
            let table_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.subtree.to_string(),
                        format_rational(&r.alpha),
                        decimal(&r.min_ratio.lo),
                        decimal(&r.min_ratio.hi),
                        r.argmin.to_string(),
                        r.flagged.to_string(),
                    ]
                })
                .collect();
            let doc: Vec<_> = rows
                .iter()
                .map(|r| json!({
                    "subtree": r.subtree,
                    "alpha": format_rational(&r.alpha),
                    "min_lo": format_rational(&r.min_ratio.lo),
                    "min_hi": format_rational(&r.min_ratio.hi),
                    "argmin": r.argmin,
                    "flagged": r.flagged,
                }))
                .collect();
            let csv = table_rows.iter().map(|r| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",")).collect();
            Ok(Report::new("decay diagnostic", table(&header, &table_rows), json!({ "rows": doc }))
                .with_csv(&header.join(","), csv))
        }
    }
}
