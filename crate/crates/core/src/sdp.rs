//! Level-indexed relaxation with vector (Gram) constraints.
//!
//! A hierarchy is encoded by `x[i][j][t] = 1` when `i` and `j` are in different
//! clusters of the level-`t` partition (maximal clusters of size at most `t`),
//! for `t = 1..n-1`, with `x^0 = 1`. Constraints per level: bounds `0 <= x <= 1`,
//! refinement `x^t <= x^{t-1}`, triangle inequalities, spreading
//! `sum_j x_ij^t >= n - t`, and, when Gram matrices `G^t` are supplied,
//! `G^t_ii = 1`, `x_ij^t = 1 - G^t_ij` and `G^t` positive semidefinite.
//!
//! There is no SDP solver here. Instances can be exported for an external
//! solver, supplied points are validated, and a linear relaxation (vector
//! constraints dropped) gives a lower bound.

use std::fmt::{self, Write as _};
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cost::CostFunction;
use crate::error::{HcError, Result};
use crate::graph::Graph;
use crate::lp::{Cmp, CuttingPlaneLp};
use crate::rounding::{ball_split, split_recursively, Seed};
use crate::spreading::{num_pairs, pair_index, triangle_violations, VIOLATION_TOL};
use crate::tree::ClusterTree;

/// Tolerance for fractional points (LP output, external solver output).
pub const FRACTIONAL_TOL: f64 = 1e-6;
pub const DEFAULT_SDP_CAP: usize = 30;
const EXPORT_MAGIC: &str = "sdp-hc 1";

#[derive(Debug, Clone, PartialEq)]
pub struct SdpInstance {
    graph: Graph,
    f: CostFunction,
    /// `g(t) = f(t + 1) - f(t)` at index `t - 1`.
    multipliers: Vec<f64>,
}

pub fn build_instance(g: &Graph, f: Option<&CostFunction>) -> Result<SdpInstance> {
    let n = g.n();
    if n < 2 {
        return Err(HcError::TooSmall(format!("relaxation needs n >= 2, got {n}")));
    }
    let f = f.cloned().unwrap_or(CostFunction::Identity);
    f.check(n)?;
    let multipliers: Vec<f64> = (1..n).map(|t| f.increment(t)).collect();
    if let Some(t) = multipliers.iter().position(|&m| !(m > 0.0)) {
        return Err(HcError::InvalidCostFunction(format!("g({}) is not positive", t + 1)));
    }
    Ok(SdpInstance { graph: g.clone(), f, multipliers })
}

impl SdpInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn levels(&self) -> usize {
        self.n() - 1
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cost_function(&self) -> &CostFunction {
        &self.f
    }

    /// `g(t)` for `t` in `1..=levels`.
    pub fn multiplier(&self, t: usize) -> f64 {
        self.multipliers[t - 1]
    }

    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    pub fn spreading_rhs(&self, t: usize) -> f64 {
        (self.n() - t) as f64
    }

    /// `sum_t g(t) sum_{ij in E} w_ij x_ij^t`; every edge entry must be present.
    pub fn objective(&self, a: &SdpAssignment) -> f64 {
        let mut total = 0.0;
        for t in 1..=self.levels() {
            let level: f64 = self.graph.edges().iter().map(|e| e.w * a.value(e.u, e.v, t)).sum();
            total += self.multiplier(t) * level;
        }
        total
    }
}

/// Values `x_ij^t` for `i < j` and `t = 1..n-1`, with optional Gram matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpAssignment {
    n: usize,
    /// Level-major: index `(t - 1) * pairs + pair`.
    x: Vec<Option<f64>>,
    gram: Option<Vec<DMatrix<f64>>>,
}

impl SdpAssignment {
    pub fn new(n: usize) -> Self {
        SdpAssignment { n, x: vec![None; n.saturating_sub(1) * num_pairs(n)], gram: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.n.saturating_sub(1)
    }

    fn slot(&self, i: usize, j: usize, t: usize) -> Result<usize> {
        if i >= self.n || j >= self.n || i == j {
            return Err(HcError::InvalidGraph(format!("pair ({i}, {j}) is not valid for n = {}", self.n)));
        }
        if t == 0 || t > self.levels() {
            return Err(HcError::LevelOutOfRange { t, max: self.levels() });
        }
        Ok((t - 1) * num_pairs(self.n) + pair_index(self.n, i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, t: usize, value: f64) -> Result<()> {
        let k = self.slot(i, j, t)?;
        self.x[k] = Some(value);
        Ok(())
    }

    /// `x_ij^t`, with `x^0 = 1` and `x_ii = 0`; `None` when out of range or unset.
    pub fn get(&self, i: usize, j: usize, t: usize) -> Option<f64> {
        if i == j && i < self.n {
            return Some(0.0);
        }
        if t == 0 && i < self.n && j < self.n {
            return Some(1.0);
        }
        self.slot(i, j, t).ok().and_then(|k| self.x[k])
    }

    /// Like [`get`](Self::get) but panics on a missing entry.
    pub(crate) fn value(&self, i: usize, j: usize, t: usize) -> f64 {
        self.get(i, j, t).expect("complete assignment")
    }

    pub fn missing(&self) -> usize {
        self.x.iter().filter(|v| v.is_none()).count()
    }

    pub fn gram(&self) -> Option<&[DMatrix<f64>]> {
        self.gram.as_deref()
    }

    /// One `n x n` matrix per level.
    pub fn set_gram(&mut self, gram: Vec<DMatrix<f64>>) -> Result<()> {
        if gram.len() != self.levels() || gram.iter().any(|m| m.nrows() != self.n || m.ncols() != self.n) {
            return Err(HcError::InvalidGraph(format!(
                "expected {} Gram matrices of size {}x{}",
                self.levels(),
                self.n,
                self.n
            )));
        }
        self.gram = Some(gram);
        Ok(())
    }

    /// Attach `G^t = 1 - x^t` (ones on the diagonal).
    pub fn with_gram_from_x(mut self) -> Result<Self> {
        let missing = self.missing();
        if missing > 0 {
            return Err(HcError::MissingEntries(missing));
        }
        let n = self.n;
        let gram = (1..=self.levels()).map(|t| DMatrix::from_fn(n, n, |i, j| 1.0 - self.value(i, j, t))).collect();
        self.set_gram(gram)?;
        Ok(self)
    }

    /// Lines `i j t value` (and `gram t i j value`); `#` starts a comment.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut a = SdpAssignment::new(n);
        let mut gram: Option<Vec<DMatrix<f64>>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| HcError::Parse { line: lineno + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let (is_gram, nums) = match toks.first() {
                Some(&"gram") => (true, &toks[1..]),
                _ => (false, &toks[..]),
            };
            if nums.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", nums.len())));
            }
            let idx = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad index '{s}'")));
            let value: f64 = nums[3].parse().map_err(|_| err(format!("bad value '{}'", nums[3])))?;
            if !value.is_finite() {
                return Err(err(format!("value '{}' is not finite", nums[3])));
            }
            if is_gram {
                let (t, i, j) = (idx(nums[0])?, idx(nums[1])?, idx(nums[2])?);
                if t == 0 || t > a.levels() || i >= n || j >= n {
                    return Err(err(format!("gram entry ({t}, {i}, {j}) out of range")));
                }
                let g = gram.get_or_insert_with(|| vec![DMatrix::identity(n, n); a.levels()]);
                g[t - 1][(i, j)] = value;
                g[t - 1][(j, i)] = value;
            } else {
                let (i, j, t) = (idx(nums[0])?, idx(nums[1])?, idx(nums[2])?);
                let k = a.slot(i, j, t).map_err(|e| err(e.to_string()))?;
                if a.x[k].replace(value).is_some() {
                    return Err(err(format!("duplicate entry for ({i}, {j}, {t})")));
                }
            }
        }
        if let Some(g) = gram {
            a.set_gram(g)?;
        }
        Ok(a)
    }

    /// Inverse of [`parse`](Self::parse): levels ascending, pairs lexicographic.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in 1..=self.levels() {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if let Some(v) = self.get(i, j, t) {
                        let _ = writeln!(out, "{i} {j} {t} {v}");
                    }
                }
            }
        }
        if let Some(gram) = &self.gram {
            for (k, m) in gram.iter().enumerate() {
                for i in 0..self.n {
                    for j in i..self.n {
                        let _ = writeln!(out, "gram {} {i} {j} {}", k + 1, m[(i, j)]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bounds,
    Refinement,
    Triangle,
    Spreading,
    UnitAnchor,
    Psd,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Bounds, Family::Refinement, Family::Triangle, Family::Spreading, Family::UnitAnchor, Family::Psd];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bounds => "bounds",
            Family::Refinement => "refinement",
            Family::Triangle => "triangle",
            Family::Spreading => "spreading",
            Family::UnitAnchor => "unit-anchor",
            Family::Psd => "psd",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    /// Largest violation found (0 when none is positive).
    pub worst: f64,
    /// Number of rows violated by more than the tolerance.
    pub count: usize,
    /// Where `worst` was attained; the first such row wins ties.
    pub witness: Option<String>,
}

impl FamilyReport {
    fn new(family: Family) -> Self {
        FamilyReport { family, worst: 0.0, count: 0, witness: None }
    }

    fn see(&mut self, violation: f64, tol: f64, witness: impl FnOnce() -> String) {
        if violation > tol {
            self.count += 1;
        }
        if violation > self.worst {
            self.worst = violation;
            self.witness = Some(witness());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub families: Vec<FamilyReport>,
    pub objective: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ValidationReport {
    pub fn family(&self, f: Family) -> &FamilyReport {
        self.families.iter().find(|r| r.family == f).expect("every family is reported")
    }

    pub fn failing(&self) -> Vec<Family> {
        self.families.iter().filter(|r| r.worst > self.tol).map(|r| r.family).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status {}", if self.pass { "pass" } else { "fail" })?;
        writeln!(f, "objective {}", self.objective)?;
        for r in &self.families {
            write!(f, "{} worst {} count {}", r.family, r.worst, r.count)?;
            if let Some(w) = &r.witness {
                write!(f, " at {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Check every constraint family. Fails only on missing entries; violations
/// are reported, not raised.
pub fn validate(inst: &SdpInstance, a: &SdpAssignment, tol: f64) -> Result<ValidationReport> {
    let n = inst.n();
    if a.n() != n {
        return Err(HcError::InvalidGraph(format!("assignment has n = {}, instance has n = {n}", a.n())));
    }
    let missing = a.missing();
    if missing > 0 {
        return Err(HcError::MissingEntries(missing));
    }
    let mut bounds = FamilyReport::new(Family::Bounds);
    let mut refine = FamilyReport::new(Family::Refinement);
    let mut tri = FamilyReport::new(Family::Triangle);
    let mut spread = FamilyReport::new(Family::Spreading);
    let mut anchor = FamilyReport::new(Family::UnitAnchor);
    let mut psd = FamilyReport::new(Family::Psd);
    for t in 1..=inst.levels() {
        let x = |i: usize, j: usize| a.value(i, j, t);
        for i in 0..n {
            for j in i + 1..n {
                let v = x(i, j);
                bounds.see((-v).max(v - 1.0), tol, || format!("x({i},{j},{t}) = {v}"));
                if t > 1 {
                    let prev = a.value(i, j, t - 1);
                    refine.see(v - prev, tol, || format!("x({i},{j},{t}) = {v} > x({i},{j},{}) = {prev}", t - 1));
                }
                for k in j + 1..n {
                    let (ij, ik, jk) = (v, x(i, k), x(j, k));
                    tri.see(ij - ik - jk, tol, || format!("x({i},{j},{t}) > x({i},{k},{t}) + x({j},{k},{t})"));
                    tri.see(ik - ij - jk, tol, || format!("x({i},{k},{t}) > x({i},{j},{t}) + x({j},{k},{t})"));
                    tri.see(jk - ij - ik, tol, || format!("x({j},{k},{t}) > x({i},{j},{t}) + x({i},{k},{t})"));
                }
            }
        }
        for i in 0..n {
            let sum: f64 = (0..n).filter(|&j| j != i).map(|j| x(i, j)).sum();
            let rhs = inst.spreading_rhs(t);
            spread.see(rhs - sum, tol, || format!("vertex {i} level {t}: {sum} < {rhs}"));
        }
        if let Some(gram) = a.gram() {
            let m = &gram[t - 1];
            for i in 0..n {
                let gii = m[(i, i)];
                anchor.see((gii - 1.0).abs(), tol, || format!("G({i},{i},{t}) = {gii}"));
                for j in i + 1..n {
                    let gij = m[(i, j)];
                    anchor.see((gij - m[(j, i)]).abs(), tol, || format!("G({i},{j},{t}) is not symmetric"));
                    anchor.see((x(i, j) - (1.0 - gij)).abs(), tol, || format!("x({i},{j},{t}) != 1 - G({i},{j},{t})"));
                }
            }
            let sym = (m + m.transpose()) * 0.5;
            let min_eig = SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            psd.see(-min_eig, tol, || format!("level {t}: smallest eigenvalue {min_eig}"));
        }
    }
    let families = vec![bounds, refine, tri, spread, anchor, psd];
    let pass = families.iter().all(|r| r.worst <= tol);
    Ok(ValidationReport { families, objective: inst.objective(a), tol, pass })
}

/// Integer point of a tree: `x_ij^t = 1` iff `t < |leaves(lca(i, j))|`.
/// Its objective equals `cost_general(G, T, f) - f(1) * w(E)`.
pub fn induce_from_tree(inst: &SdpInstance, tree: &ClusterTree) -> Result<SdpAssignment> {
    let n = inst.n();
    tree.check_leaves(n)?;
    let mut a = SdpAssignment::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = tree.size(tree.lca(i, j));
            for t in 1..n {
                a.set(i, j, t, if t < c { 1.0 } else { 0.0 })?;
            }
        }
    }
    Ok(a)
}

/// Text form of an instance. Layout:
///
/// ```text
/// sdp-hc 1
/// n <n>
/// levels <n-1>
/// f <cost function>
/// edges <m>
/// e <u> <v> <w>            one per edge, lexicographic
/// level <t> g <g(t)>       then, for this level:
/// obj <i> <j> <g(t)*w_ij>  one per edge
/// bounds 0 1
/// refine prev              x^t <= x^(t-1) for every pair
/// spread <i> <n-t>         one per vertex
/// triangle all
/// anchor all
/// psd
/// end
/// ```
pub fn export_string(inst: &SdpInstance) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    let _ = writeln!(out, "{EXPORT_MAGIC}");
    let _ = writeln!(out, "n {}", inst.n());
    let _ = writeln!(out, "levels {}", inst.levels());
    let _ = writeln!(out, "f {}", inst.f);
    let _ = writeln!(out, "edges {}", g.m());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.w);
    }
    for t in 1..=inst.levels() {
        let gt = inst.multiplier(t);
        let _ = writeln!(out, "level {t} g {gt}");
        for e in g.edges() {
            let _ = writeln!(out, "obj {} {} {}", e.u, e.v, gt * e.w);
        }
        let _ = writeln!(out, "bounds 0 1");
        let _ = writeln!(out, "refine prev");
        for i in 0..inst.n() {
            let _ = writeln!(out, "spread {i} {}", inst.spreading_rhs(t));
        }
        let _ = writeln!(out, "triangle all");
        let _ = writeln!(out, "anchor all");
        let _ = writeln!(out, "psd");
    }
    let _ = writeln!(out, "end");
    out
}

pub fn export(inst: &SdpInstance, path: &Path) -> Result<()> {
    std::fs::write(path, export_string(inst))?;
    Ok(())
}

/// Parse an exported instance. The header and edge list define the instance;
/// the level blocks must match what those imply exactly.
pub fn import_str(text: &str) -> Result<SdpInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let mut pos = 0;
    let mut next = |key: &str| -> Result<(usize, &str)> {
        let line = lines.get(pos).copied().unwrap_or("");
        pos += 1;
        let rest = if key.is_empty() { (line == EXPORT_MAGIC).then_some("") } else { line.strip_prefix(key) };
        rest.map(|r| (pos, r.trim())).ok_or_else(|| HcError::Parse {
            line: pos,
            msg: format!("expected '{}', found '{line}'", if key.is_empty() { EXPORT_MAGIC } else { key }),
        })
    };
    let num = |(line, s): (usize, &str)| {
        s.parse::<usize>().map_err(|_| HcError::Parse { line, msg: format!("bad count '{s}'") })
    };
    next("")?;
    let n = num(next("n ")?)?;
    let _levels = num(next("levels ")?)?;
    let (fline, fs) = next("f ")?;
    let f: CostFunction = fs.parse().map_err(|e: HcError| HcError::Parse { line: fline, msg: e.to_string() })?;
    let m = num(next("edges ")?)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, rest) = next("e ")?;
        let bad = || HcError::Parse { line, msg: format!("bad edge '{rest}'") };
        let t: Vec<&str> = rest.split_whitespace().collect();
        if t.len() != 3 {
            return Err(bad());
        }
        edges.push((
            t[0].parse().map_err(|_| bad())?,
            t[1].parse().map_err(|_| bad())?,
            t[2].parse().map_err(|_| bad())?,
        ));
    }
    let g = Graph::new(n, edges)?;
    let inst = build_instance(&g, Some(&f))?;
    let expected = export_string(&inst);
    for (k, (want, got)) in expected.lines().zip(text.lines()).enumerate() {
        if want != got {
            return Err(HcError::Parse { line: k + 1, msg: format!("expected '{want}', found '{got}'") });
        }
    }
    let (ne, nt) = (expected.lines().count(), text.lines().count());
    if ne != nt {
        return Err(HcError::Parse { line: ne.min(nt) + 1, msg: format!("expected {ne} lines, found {nt}") });
    }
    Ok(inst)
}

pub fn import(path: &Path) -> Result<SdpInstance> {
    import_str(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone)]
pub struct SdpLpBound {
    /// Optimal value of the linear relaxation.
    pub lp_value: f64,
    /// `lp_value + f(1) * w(E)`, comparable with tree costs.
    pub bound: f64,
    pub assignment: SdpAssignment,
}

#[derive(Debug, Clone)]
pub struct SdpLpOptions {
    pub cap: usize,
    /// Round limit; `None` means `10 n^2`.
    pub max_rounds: Option<usize>,
}

impl Default for SdpLpOptions {
    fn default() -> Self {
        SdpLpOptions { cap: DEFAULT_SDP_CAP, max_rounds: None }
    }
}

pub fn sdp_lower_bound_lp(g: &Graph, f: Option<&CostFunction>) -> Result<SdpLpBound> {
    sdp_lower_bound_lp_with(g, f, &SdpLpOptions::default())
}

/// The relaxation with the vector constraints dropped. Bounds are variable
/// bounds, refinement and spreading rows are explicit, triangles are lazy.
pub fn sdp_lower_bound_lp_with(g: &Graph, f: Option<&CostFunction>, opts: &SdpLpOptions) -> Result<SdpLpBound> {
    let n = g.n();
    if n > opts.cap {
        return Err(HcError::OverCap { what: "level LP", n, cap: opts.cap });
    }
    if n == 1 {
        return Ok(SdpLpBound { lp_value: 0.0, bound: 0.0, assignment: SdpAssignment::new(1) });
    }
    let inst = build_instance(g, f)?;
    let pairs = num_pairs(n);
    let levels = inst.levels();
    let var = |t: usize, p: usize| (t - 1) * pairs + p;

    let mut obj = vec![0.0; levels * pairs];
    for t in 1..=levels {
        for e in g.edges() {
            obj[var(t, pair_index(n, e.u, e.v))] = inst.multiplier(t) * e.w;
        }
    }
    let mut lp = CuttingPlaneLp::minimize(obj.into_iter().map(|c| (c, (0.0, 1.0))));
    for t in 2..=levels {
        for p in 0..pairs {
            lp.add_row(&[(var(t, p), 1.0), (var(t - 1, p), -1.0)], Cmp::Le, 0.0);
        }
    }
    for t in 1..=levels {
        for i in 0..n {
            let terms: Vec<(usize, f64)> =
                (0..n).filter(|&j| j != i).map(|j| (var(t, pair_index(n, i, j)), 1.0)).collect();
            lp.add_row(&terms, Cmp::Ge, inst.spreading_rhs(t));
        }
    }
    let max_rounds = opts.max_rounds.unwrap_or(10 * n * n);
    let batch = n * n;
    let mut rounds = 0;
    loop {
        lp.solve()?;
        let x = lp.values();
        let mut added = 0;
        for t in 1..=levels {
            let level = &x[var(t, 0)..var(t, 0) + pairs];
            for v in triangle_violations(n, level, VIOLATION_TOL, batch) {
                lp.add_row(
                    &[
                        (var(t, pair_index(n, v.a, v.c)), 1.0),
                        (var(t, pair_index(n, v.a, v.b)), -1.0),
                        (var(t, pair_index(n, v.b, v.c)), -1.0),
                    ],
                    Cmp::Le,
                    0.0,
                );
                added += 1;
            }
        }
        if added == 0 {
            let mut assignment = SdpAssignment::new(n);
            for t in 1..=levels {
                for i in 0..n {
                    for j in i + 1..n {
                        assignment.set(i, j, t, x[var(t, pair_index(n, i, j))])?;
                    }
                }
            }
            let lp_value = inst.objective(&assignment);
            let bound = lp_value + inst.f.eval(1) * g.total_weight();
            return Ok(SdpLpBound { lp_value, bound, assignment });
        }
        rounds += 1;
        if rounds >= max_rounds {
            return Err(HcError::IterationLimit(max_rounds));
        }
    }
}

/// Top-down rounding: a cluster of size `r` is cut by a ball in the metric
/// `x^{max(r/4, 1)}` restricted to it, with per-cluster seed volume.
pub fn round_levelwise(g: &Graph, a: &SdpAssignment) -> Result<ClusterTree> {
    let n = g.n();
    if n >= 2 {
        let inst = build_instance(g, None)?;
        let report = validate(&inst, a, FRACTIONAL_TOL)?;
        if !report.pass {
            let names: Vec<&str> = report.failing().into_iter().map(Family::name).collect();
            return Err(HcError::Infeasible(format!("violated families: {}", names.join(", "))));
        }
    }
    split_recursively(n, |vs| {
        let t = (vs.len() / 4).max(1);
        ball_split(g, vs, |u, v| a.value(u, v, t).max(0.0), Seed::PerCluster)
    })
}
