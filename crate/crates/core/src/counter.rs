//! The counting recursion over perturbations, its materialized tree, Poincaré
//! prefixes and the structural audit of the tree.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Axis, LocusElement, SeparatedCurve, Shape, SingularLocus};
use crate::error::{Error, Result};
use crate::fpcount::{curve_points, fp_point_count};
use crate::modarith::derive_seed;
use crate::unipoly::{RootFinder, RootMethod};

/// Tuning and resource limits for [`count_points`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountConfig {
    pub method: RootMethod,
    /// Maximum number of tree nodes before giving up.
    pub node_budget: usize,
    /// Maximum number of curve points enumerated at a degenerate node.
    pub fallback_budget: usize,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            method: RootMethod::Auto,
            node_budget: 1_000_000,
            fallback_budget: 1_000_000,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Squarefree,
    LineX1,
    LineX2,
    DegenerateFallback,
    Zero,
    Constant,
}

impl Branch {
    fn of_shape(shape: Shape) -> Branch {
        match shape {
            Shape::Zero => Branch::Zero,
            Shape::Constant => Branch::Constant,
            Shape::Squarefree => Branch::Squarefree,
            Shape::Line(Axis::X1) => Branch::LineX1,
            Shape::Line(Axis::X2) => Branch::LineX2,
            Shape::Degenerate => Branch::DegenerateFallback,
        }
    }

    pub fn is_line(self) -> bool {
        matches!(self, Branch::LineX1 | Branch::LineX2)
    }
}

/// Label on the edge into a non-root node: the contribution is `p^weight_exp`
/// times the child's count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeLabel {
    pub locus: LocusElement,
    pub s: u32,
    pub weight_exp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Pre-order index.
    pub id: usize,
    pub depth: u32,
    pub k: u32,
    pub curve: SeparatedCurve,
    pub branch: Branch,
    /// True for `k = 1` nodes counted directly over `F_p`.
    pub base_case: bool,
    pub edge_in: Option<EdgeLabel>,
    pub children: Vec<TreeNode>,
    /// Locus elements whose valuation reached `k`, each contributing `p^exp`.
    pub saturated: Vec<(LocusElement, u32)>,
    /// The node's own term is `base_coeff * p^base_exp`.
    pub base_coeff: BigUint,
    pub base_exp: u32,
}

impl TreeNode {
    fn fold(&self, p: &BigUint) -> BigUint {
        let mut total = &self.base_coeff * p.pow(self.base_exp);
        for (_, e) in &self.saturated {
            total += p.pow(*e);
        }
        for child in &self.children {
            let w = child.edge_in.map_or(0, |e| e.weight_exp);
            total += p.pow(w) * child.fold(p);
        }
        total
    }

    fn visit<'a>(&'a self, out: &mut Vec<&'a TreeNode>) {
        out.push(self);
        for c in &self.children {
            c.visit(out);
        }
    }

    fn assign_ids(&mut self, next: &mut usize) {
        self.id = *next;
        *next += 1;
        for c in &mut self.children {
            c.assign_ids(next);
        }
    }
}

/// The recursion tree, plus the factor `p^prefactor_exp` pulled out of the
/// input's content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTree {
    pub p: u64,
    pub k: u32,
    pub prefactor_exp: u32,
    pub root: TreeNode,
}

impl CountTree {
    /// Evaluates the count from the tree's labels alone.
    pub fn fold(&self) -> BigUint {
        let p = BigUint::from(self.p);
        p.pow(self.prefactor_exp) * self.root.fold(&p)
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.visit(&mut out);
        out
    }

    pub fn depth(&self) -> u32 {
        self.nodes().iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn export(&self) -> TreeExport {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for n in self.nodes() {
            nodes.push(NodeExport {
                id: n.id,
                depth: n.depth,
                k: n.k,
                branch: n.branch,
                base_case: n.base_case,
                polynomial: n.curve.to_string(),
                g: n.curve.g().coeffs().iter().map(|c| c.to_string()).collect(),
                h: n.curve.h().coeffs().iter().map(|c| c.to_string()).collect(),
                reduced_degree: n.curve.reduced_degree(),
                base_coeff: n.base_coeff.to_string(),
                base_exp: n.base_exp,
                saturated: n
                    .saturated
                    .iter()
                    .map(|&(locus, exp)| SaturatedExport { locus, exp })
                    .collect(),
            });
            for c in &n.children {
                let e = c.edge_in.expect("non-root node carries an edge label");
                edges.push(EdgeExport {
                    from: n.id,
                    to: c.id,
                    s: e.s,
                    weight_exp: e.weight_exp,
                    locus: e.locus,
                });
            }
        }
        TreeExport {
            p: self.p,
            k: self.k,
            prefactor_exp: self.prefactor_exp,
            nodes,
            edges,
        }
    }

    /// Graphviz rendering: nodes show `deg f~, k`, edges show `s` and the weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph recursion_tree {\n  node [shape=box];\n");
        for n in self.nodes() {
            let _ = writeln!(
                out,
                "  n{} [label=\"deg {}, k={}\\n{:?}\"];",
                n.id,
                n.curve.reduced_degree(),
                n.k,
                n.branch
            );
        }
        for n in self.nodes() {
            for c in &n.children {
                if let Some(e) = c.edge_in {
                    let _ = writeln!(
                        out,
                        "  n{} -> n{} [label=\"s={}, w=p^{}\\n{}\"];",
                        n.id, c.id, e.s, e.weight_exp, e.locus
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeExport {
    pub p: u64,
    pub k: u32,
    pub prefactor_exp: u32,
    pub nodes: Vec<NodeExport>,
    pub edges: Vec<EdgeExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeExport {
    pub id: usize,
    pub depth: u32,
    pub k: u32,
    pub branch: Branch,
    pub base_case: bool,
    pub polynomial: String,
    pub g: Vec<String>,
    pub h: Vec<String>,
    pub reduced_degree: usize,
    pub base_coeff: String,
    pub base_exp: u32,
    pub saturated: Vec<SaturatedExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturatedExport {
    pub locus: LocusElement,
    pub exp: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeExport {
    pub from: usize,
    pub to: usize,
    pub s: u32,
    pub weight_exp: u32,
    pub locus: LocusElement,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CountStats {
    pub nodes: usize,
    pub fp_count_calls: u64,
    pub root_retries: u64,
    pub max_depth: u32,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct CountResult {
    pub n: BigUint,
    pub tree: CountTree,
    pub stats: CountStats,
    pub seed: u64,
}

struct Traversal<'a> {
    config: &'a CountConfig,
    seed: u64,
    nodes: AtomicUsize,
    fp_calls: AtomicU64,
    retries: AtomicU64,
}

struct ChildSpec {
    locus: LocusElement,
    s: u32,
    weight_exp: u32,
    child: SeparatedCurve,
}

impl Traversal<'_> {
    fn enter(&self) -> Result<()> {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.config.node_budget {
            return Err(Error::NodeBudgetExceeded(self.config.node_budget));
        }
        Ok(())
    }

    fn fp_count(&self, curve: &SeparatedCurve) -> Result<u64> {
        self.fp_calls.fetch_add(1, Ordering::Relaxed);
        fp_point_count(curve)
    }

    /// Returns the direct count of `curve` mod `p^k` and its subtree.
    fn node(
        &self,
        curve: SeparatedCurve,
        depth: u32,
        path: &[u32],
        edge_in: Option<EdgeLabel>,
    ) -> Result<(BigUint, TreeNode)> {
        self.enter()?;
        let k = curve.k();
        let p = curve.p();
        let pb = BigUint::from(p);
        let mut node = TreeNode {
            id: 0,
            depth,
            k,
            curve,
            branch: Branch::Zero,
            base_case: false,
            edge_in,
            children: Vec::new(),
            saturated: Vec::new(),
            base_coeff: BigUint::zero(),
            base_exp: 0,
        };
        let v = node.curve.content_valuation(k);
        if v >= k {
            node.base_coeff = BigUint::one();
            node.base_exp = 2 * k;
            return Ok((pb.pow(2 * k), node));
        }
        if v > 0 {
            return Err(Error::Internal(format!(
                "perturbed curve at depth {depth} has content p^{v}"
            )));
        }
        let shape = node.curve.shape();
        node.branch = Branch::of_shape(shape);
        if shape == Shape::Constant {
            return Ok((BigUint::zero(), node));
        }
        if k == 1 {
            node.base_case = true;
            node.base_coeff = BigUint::from(self.fp_count(&node.curve)?);
            return Ok((node.base_coeff.clone(), node));
        }

        let mut rf = RootFinder::new(self.config.method, derive_seed(self.seed, path));
        let (locus, profile) = node.curve.locus_with_profile(&mut rf)?;
        let mut specs = Vec::new();
        match (&locus, shape) {
            (SingularLocus::VerticalLines(roots) | SingularLocus::HorizontalLines(roots), Shape::Line(axis)) => {
                let profile = profile.expect("line branch yields a root profile");
                node.base_coeff = BigUint::from(profile.simple_count());
                node.base_exp = k;
                for &z in roots {
                    let locus = match axis {
                        Axis::X1 => LocusElement::VerticalLine { a: z },
                        Axis::X2 => LocusElement::HorizontalLine { b: z },
                    };
                    let s = node.curve.line_valuation(axis, z, k)?;
                    if s >= k {
                        node.saturated.push((locus, 2 * k - 1));
                    } else {
                        let pert = node.curve.perturb_line(axis, z)?;
                        specs.push(ChildSpec {
                            locus,
                            s,
                            weight_exp: 2 * s - 1,
                            child: pert.child,
                        });
                    }
                }
            }
            (SingularLocus::IsolatedPoints(points), Shape::Squarefree) => {
                let total = self.fp_count(&node.curve)?;
                node.base_coeff = BigUint::from(total - points.len() as u64);
                node.base_exp = k - 1;
                self.point_children(&mut node, points, &mut specs)?;
            }
            (SingularLocus::AllCurvePoints, Shape::Degenerate) => {
                let points = curve_points(&node.curve, self.config.fallback_budget)?;
                node.base_exp = k - 1;
                self.point_children(&mut node, &points, &mut specs)?;
            }
            _ => return Err(Error::Internal("singular locus disagrees with branch".into())),
        }
        self.retries.fetch_add(rf.retries(), Ordering::Relaxed);

        let recurse = |(i, spec): (usize, ChildSpec)| {
            let mut child_path = path.to_vec();
            child_path.push(i as u32);
            let label = EdgeLabel {
                locus: spec.locus,
                s: spec.s,
                weight_exp: spec.weight_exp,
            };
            self.node(spec.child, depth + 1, &child_path, Some(label))
        };
        let results: Vec<(BigUint, TreeNode)> = if self.config.threads == Some(1) || specs.len() < 2 {
            specs.into_iter().enumerate().map(recurse).collect::<Result<_>>()?
        } else {
            specs.into_par_iter().enumerate().map(recurse).collect::<Result<_>>()?
        };

        let mut n = &node.base_coeff * pb.pow(node.base_exp);
        for (_, e) in &node.saturated {
            n += pb.pow(*e);
        }
        for (child_n, child) in results {
            let w = child.edge_in.map_or(0, |e| e.weight_exp);
            n += pb.pow(w) * child_n;
            node.children.push(child);
        }
        Ok((n, node))
    }

    /// Per-point split for the squarefree and degenerate branches.
    fn point_children(
        &self,
        node: &mut TreeNode,
        points: &[(u64, u64)],
        specs: &mut Vec<ChildSpec>,
    ) -> Result<()> {
        let k = node.k;
        for &(a, b) in points {
            let locus = LocusElement::Point { a, b };
            let s = node.curve.point_valuation(a, b, k);
            if s >= k {
                node.saturated.push((locus, 2 * (k - 1)));
            } else if s >= 2 {
                let pert = node.curve.perturb_point(a, b)?;
                specs.push(ChildSpec {
                    locus,
                    s,
                    weight_exp: 2 * (s - 1),
                    child: pert.child,
                });
            }
            // s = 1: the point has no lift to a root mod p^2
        }
        Ok(())
    }
}

fn run_in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Exact number of roots of `curve` in `(Z/p^k)^2`, together with the
/// recursion tree that produced it.
pub fn count_points(curve: &SeparatedCurve, config: &CountConfig, seed: u64) -> Result<CountResult> {
    let start = Instant::now();
    let traversal = Traversal {
        config,
        seed,
        nodes: AtomicUsize::new(0),
        fp_calls: AtomicU64::new(0),
        retries: AtomicU64::new(0),
    };
    let k = curve.k();
    let p = curve.p();
    let v = curve.content_valuation(k);
    let (prefactor_exp, root_curve) = if v >= 1 && v < k {
        (2 * v, curve.divide_content(v)?)
    } else {
        (0, curve.clone())
    };
    let (n_root, mut root) =
        run_in_pool(config.threads, || traversal.node(root_curve, 0, &[], None))??;
    root.assign_ids(&mut 0);
    let tree = CountTree {
        p,
        k,
        prefactor_exp,
        root,
    };
    let n = BigUint::from(p).pow(prefactor_exp) * n_root;
    let stats = CountStats {
        nodes: traversal.nodes.load(Ordering::Relaxed),
        fp_count_calls: traversal.fp_calls.load(Ordering::Relaxed),
        root_retries: traversal.retries.load(Ordering::Relaxed),
        max_depth: tree.depth(),
        elapsed: start.elapsed(),
    };
    Ok(CountResult {
        n,
        tree,
        stats,
        seed,
    })
}

/// The recursion tree alone.
pub fn build_tree(curve: &SeparatedCurve, config: &CountConfig, seed: u64) -> Result<CountTree> {
    Ok(count_points(curve, config, seed)?.tree)
}

/// `N_{p,j} / p^{2j}` for `j = 0..=kmax`, with `N_{p,0} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePrefix {
    pub terms: Vec<BigRational>,
}

impl PoincarePrefix {
    pub fn term_strings(&self) -> Vec<String> {
        self.terms.iter().map(|t| t.to_string()).collect()
    }
}

/// Poincaré prefix up to `kmax`; the curve must be given to precision at least `kmax`.
pub fn poincare_prefix(
    curve: &SeparatedCurve,
    kmax: u32,
    config: &CountConfig,
    seed: u64,
) -> Result<PoincarePrefix> {
    if kmax > curve.k() {
        return Err(Error::PrecisionExceeded {
            needed: kmax,
            available: curve.k(),
        });
    }
    let p = BigInt::from(curve.p());
    let mut terms = vec![BigRational::one()];
    for j in 1..=kmax {
        let ctx = curve.ctx().with_exponent(j)?;
        let n = count_points(&curve.reduce_to(&ctx), config, seed)?.n;
        terms.push(BigRational::new(BigInt::from(n), p.pow(2 * j)));
    }
    Ok(PoincarePrefix { terms })
}

/// Outcome of [`tree_audit`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// The tree contains a degenerate-fallback node, so the global bounds do not apply.
    pub exempt: bool,
    pub depth: u32,
    pub total_nodes: usize,
    pub nodes_per_level: Vec<usize>,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn choose2(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

/// Checks the structural bounds on the recursion tree of a degree-`d` curve.
pub fn tree_audit(tree: &CountTree, d: usize) -> AuditReport {
    let nodes = tree.nodes();
    let depth = tree.depth();
    let mut per_level = vec![0usize; depth as usize + 1];
    for n in &nodes {
        per_level[n.depth as usize] += 1;
    }
    let mut report = AuditReport {
        exempt: nodes.iter().any(|n| n.branch == Branch::DegenerateFallback),
        depth,
        total_nodes: nodes.len(),
        nodes_per_level: per_level.clone(),
        violations: Vec::new(),
    };
    let c2 = choose2(d);
    let k = tree.k;
    let v = &mut report.violations;
    if depth > k {
        v.push(format!("depth {depth} exceeds k = {k}"));
    }
    if !report.exempt {
        if tree.root.children.len() > c2 {
            v.push(format!("root has {} children, bound C(d,2) = {c2}", tree.root.children.len()));
        }
        for (level, &count) in per_level.iter().enumerate().skip(1) {
            if count > c2 {
                v.push(format!("level {level} has {count} nodes, bound {c2}"));
            }
        }
        let bound = 1 + (k as usize).saturating_sub(1) * c2;
        if nodes.len() > bound {
            v.push(format!("{} nodes, bound 1+(k-1)C(d,2) = {bound}", nodes.len()));
        }
        let root_sum: usize = tree.root.children.iter().map(|c| c.curve.reduced_degree()).sum();
        if root_sum > d * d.saturating_sub(1) {
            v.push(format!("root children degrees sum to {root_sum}, bound d(d-1)"));
        }
    }
    for n in &nodes {
        if n.branch == Branch::DegenerateFallback {
            continue;
        }
        let dp = n.curve.reduced_degree();
        let mut sibling_sum = 0usize;
        for c in &n.children {
            let Some(e) = c.edge_in else { continue };
            let dc = c.curve.reduced_degree();
            sibling_sum += dc * dc.saturating_sub(1);
            if dc as u32 > e.s {
                v.push(format!("node {} ({:?} edge): deg {dc} exceeds edge s = {}", c.id, n.branch, e.s));
            }
            if e.s + 1 > n.k {
                v.push(format!("node {}: edge s = {} not below parent k = {}", c.id, e.s, n.k));
            }
            if c.k + e.s != n.k {
                v.push(format!("node {}: k = {} but parent k - s = {}", c.id, c.k, n.k - e.s));
            }
            let expected_w = if n.branch.is_line() { 2 * e.s - 1 } else { 2 * (e.s - 1) };
            if e.weight_exp != expected_w {
                v.push(format!("node {}: weight p^{} should be p^{expected_w}", c.id, e.weight_exp));
            }
        }
        if sibling_sum > dp * dp.saturating_sub(1) {
            v.push(format!(
                "children of node {} ({:?}) have sum deg(deg-1) = {sibling_sum} > {}",
                n.id,
                n.branch,
                dp * dp.saturating_sub(1)
            ));
        }
    }
    report
}
