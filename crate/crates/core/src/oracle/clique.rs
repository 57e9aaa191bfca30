//! Clique search on compatibility graphs of at most 256 vertices.
//!
//! Vertices are numbered in the canonical order of the sets they stand for,
//! so a clique listed in ascending vertex order is a family listed in
//! ascending member order. Searching ascending extensions depth first then
//! visits families in lexicographic order, which is how the least optimal
//! witness is found once the optimum value is known.

use super::bitset::{VSet, CAPACITY};

/// Simple undirected graph without loops.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<VSet>,
}

impl Graph {
    /// Builds the graph on `0..n` with an edge `{u, v}` (u ≠ v) iff `edge(u, v)`.
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Graph {
        assert!(n <= CAPACITY, "graph exceeds bitset capacity");
        let mut adj = vec![VSet::EMPTY; n];
        for u in 0..n {
            for v in u + 1..n {
                if edge(u, v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Graph { adj }
    }

    #[cfg(test)]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn all(&self) -> VSet {
        VSet::prefix(self.adj.len())
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VSet {
        &self.adj[v]
    }

    /// Greedy partition of `p` into independent sets, lowest vertex first.
    pub fn colour_classes(&self, p: &VSet) -> Vec<VSet> {
        let mut rest = *p;
        let mut classes = Vec::new();
        while !rest.is_empty() {
            let mut open = rest;
            let mut class = VSet::EMPTY;
            while let Some(v) = open.first() {
                class.insert(v);
                open.remove(v);
                open = open.and_not(&self.adj[v]);
            }
            rest = rest.and_not(&class);
            classes.push(class);
        }
        classes
    }

    /// Vertices of `p` in increasing colour, with the colour number of each.
    fn colour_sort(&self, p: &VSet) -> (Vec<usize>, Vec<u32>) {
        let mut order = Vec::with_capacity(p.len() as usize);
        let mut colours = Vec::with_capacity(order.capacity());
        for (c, class) in self.colour_classes(p).into_iter().enumerate() {
            for v in class.iter() {
                order.push(v);
                colours.push(c as u32 + 1);
            }
        }
        (order, colours)
    }
}

/// A monotone objective over cliques, evaluated incrementally.
pub trait Objective {
    type State: Clone;

    fn root(&self) -> Self::State;
    fn push(&self, s: &Self::State, v: usize) -> Self::State;
    fn value(&self, s: &Self::State) -> u64;
    /// Upper bound on `value` over every clique `R ∪ Q` with `Q ⊆ p`.
    fn bound(&self, g: &Graph, s: &Self::State, p: &VSet) -> u64;
}

/// `|R|`, bounded by the number of colour classes.
pub struct CliqueSize;

impl Objective for CliqueSize {
    type State = u64;

    fn root(&self) -> u64 {
        0
    }

    fn push(&self, s: &u64, _v: usize) -> u64 {
        s + 1
    }

    fn value(&self, s: &u64) -> u64 {
        *s
    }

    fn bound(&self, g: &Graph, s: &u64, p: &VSet) -> u64 {
        s + g.colour_classes(p).len() as u64
    }
}

/// Size of the union of per-vertex sets (the upper shade of the clique).
pub struct UnionSize {
    pub sets: Vec<VSet>,
}

impl Objective for UnionSize {
    type State = VSet;

    fn root(&self) -> VSet {
        VSet::EMPTY
    }

    fn push(&self, s: &VSet, v: usize) -> VSet {
        s.or(&self.sets[v])
    }

    fn value(&self, s: &VSet) -> u64 {
        s.len() as u64
    }

    fn bound(&self, g: &Graph, s: &VSet, p: &VSet) -> u64 {
        let base = s.len() as u64;
        let union = p.iter().fold(*s, |acc, v| acc.or(&self.sets[v]));
        let mut by_class = base;
        for class in g.colour_classes(p) {
            by_class += class
                .iter()
                .map(|v| self.sets[v].and_not(s).len() as u64)
                .max()
                .unwrap_or(0);
        }
        by_class.min(union.len() as u64)
    }
}

/// Search statistics.
#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub explored: u64,
}

/// Clique number (or `floor`, if larger), by branch and bound with greedy
/// colouring bounds.
pub fn max_clique_size(g: &Graph, floor: u64, stats: &mut Stats) -> u64 {
    fn expand(g: &Graph, size: u64, mut p: VSet, best: &mut u64, stats: &mut Stats) {
        stats.explored += 1;
        let (order, colours) = g.colour_sort(&p);
        for i in (0..order.len()).rev() {
            if size + colours[i] as u64 <= *best {
                return;
            }
            let v = order[i];
            let next = p.and(g.neighbours(v));
            if next.is_empty() {
                *best = (*best).max(size + 1);
            } else {
                expand(g, size + 1, next, best, stats);
            }
            p.remove(v);
        }
    }
    let mut best = floor;
    expand(g, 0, g.all(), &mut best, stats);
    best
}

/// Largest value of a monotone objective over all cliques, by Bron–Kerbosch
/// enumeration of maximal cliques with pivoting and bound pruning. Starts from
/// the lower bound `floor` and stops early once `ceiling` is reached.
pub fn max_over_maximal_cliques<O: Objective>(g: &Graph, obj: &O, floor: u64, ceiling: u64, stats: &mut Stats) -> u64 {
    struct Ctx<'a, O: Objective> {
        g: &'a Graph,
        obj: &'a O,
        ceiling: u64,
        best: u64,
        stats: &'a mut Stats,
    }

    fn bk<O: Objective>(cx: &mut Ctx<'_, O>, s: O::State, mut p: VSet, mut x: VSet) {
        cx.stats.explored += 1;
        if cx.best >= cx.ceiling {
            return;
        }
        if p.is_empty() {
            if x.is_empty() {
                cx.best = cx.best.max(cx.obj.value(&s));
            }
            return;
        }
        if cx.obj.bound(cx.g, &s, &p) <= cx.best {
            return;
        }
        let pivot = p
            .or(&x)
            .iter()
            .max_by_key(|&u| (p.and(cx.g.neighbours(u)).len(), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let branch = p.and_not(cx.g.neighbours(pivot));
        for v in branch.iter() {
            let nv = cx.g.neighbours(v);
            let child = cx.obj.push(&s, v);
            bk(cx, child, p.and(nv), x.and(nv));
            p.remove(v);
            x.insert(v);
        }
    }

    let mut cx = Ctx {
        g,
        obj,
        ceiling,
        best: floor,
        stats,
    };
    let root = obj.root();
    bk(&mut cx, root, g.all(), VSet::EMPTY);
    cx.best
}

/// The lexicographically least clique (as an ascending vertex list) whose
/// objective reaches `target`, or `None` if there is none.
pub fn least_clique_reaching<O: Objective>(g: &Graph, obj: &O, target: u64, stats: &mut Stats) -> Option<Vec<usize>> {
    fn dfs<O: Objective>(
        g: &Graph,
        obj: &O,
        target: u64,
        r: &mut Vec<usize>,
        s: &O::State,
        p: VSet,
        stats: &mut Stats,
    ) -> bool {
        stats.explored += 1;
        if obj.value(s) >= target {
            return true;
        }
        if p.is_empty() || obj.bound(g, s, &p) < target {
            return false;
        }
        for v in p.iter() {
            r.push(v);
            let child = obj.push(s, v);
            let next = p.above(v).and(g.neighbours(v));
            if dfs(g, obj, target, r, &child, next, stats) {
                return true;
            }
            r.pop();
        }
        false
    }

    let mut r = Vec::new();
    let root = obj.root();
    dfs(g, obj, target, &mut r, &root, g.all(), stats).then_some(r)
}
