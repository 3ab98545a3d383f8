//! Uniform sparsest cut: exact enumeration, spectral sweep and local search.
//!
//! Sparsity of a side `S` is `w(S, V \ S) / (|S| * |V \ S|)`. A [`Cut`] always
//! stores its smaller side; when both sides have equal size it stores the one
//! containing the smallest vertex id. Ties between cuts of equal sparsity are
//! broken by smaller side size, then by the lexicographically smaller side.

use std::cmp::Ordering;

use crate::eigen::fiedler_pair;
use crate::error::{HcError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    /// Sorted vertex ids of the stored side.
    pub side: Vec<usize>,
    pub cross_weight: f64,
    pub sparsity: f64,
    n: usize,
}

impl Cut {
    /// Build a cut from a membership mask, orienting it canonically.
    pub fn from_mask(g: &Graph, in_side: &[bool]) -> Result<Cut> {
        let n = g.n();
        let s = in_side.iter().filter(|&&b| b).count();
        if in_side.len() != n || s == 0 || s == n {
            return Err(HcError::InvalidCut("side must be a nonempty proper subset".into()));
        }
        let cross = g.cut_weight(in_side);
        let keep = match (2 * s).cmp(&n) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => in_side[0],
        };
        let side = (0..n).filter(|&v| in_side[v] == keep).collect::<Vec<_>>();
        let k = side.len();
        Ok(Cut { side, cross_weight: cross, sparsity: cross / (k * (n - k)) as f64, n })
    }

    pub fn from_side(g: &Graph, side: &[usize]) -> Result<Cut> {
        let mut mask = vec![false; g.n()];
        for &v in side {
            if v >= g.n() || mask[v] {
                return Err(HcError::InvalidCut(format!("bad or repeated vertex {v}")));
            }
            mask[v] = true;
        }
        Cut::from_mask(g, &mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in &self.side {
            m[v] = true;
        }
        m
    }

    pub fn other_side(&self) -> Vec<usize> {
        let m = self.mask();
        (0..self.n).filter(|&v| !m[v]).collect()
    }

    /// Total order used for tie-breaking: sparsity, then side size, then side.
    pub fn compare(&self, other: &Cut) -> Ordering {
        cmp_ratio(self.cross_weight, self.side.len(), other.cross_weight, other.side.len(), self.n)
            .then(self.side.len().cmp(&other.side.len()))
            .then_with(|| self.side.cmp(&other.side))
    }
}

/// Compare `a / (sa (n - sa))` with `b / (sb (n - sb))` without dividing.
fn cmp_ratio(a: f64, sa: usize, b: f64, sb: usize, n: usize) -> Ordering {
    let da = (sa * (n - sa)) as f64;
    let db = (sb * (n - sb)) as f64;
    (a * db).total_cmp(&(b * da))
}

/// `w(S, V \ S) / (|S| |V \ S|)` for a nonempty proper subset `S`.
pub fn sparsity(g: &Graph, side: &[usize]) -> Result<f64> {
    let mut mask = vec![false; g.n()];
    for &v in side {
        if v >= g.n() {
            return Err(HcError::InvalidCut(format!("vertex {v} out of range")));
        }
        mask[v] = true;
    }
    let s = mask.iter().filter(|&&b| b).count();
    if s == 0 || s == g.n() {
        return Err(HcError::InvalidCut("side must be a nonempty proper subset".into()));
    }
    Ok(g.cut_weight(&mask) / (s * (g.n() - s)) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Exact,
    SpectralSweep,
    SpectralPlusLocal,
}

impl std::str::FromStr for OracleKind {
    type Err = HcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(OracleKind::Exact),
            "spectral" | "spectral_sweep" => Ok(OracleKind::SpectralSweep),
            "spectral_plus_local" | "spectral+local" => Ok(OracleKind::SpectralPlusLocal),
            other => Err(HcError::InvalidCut(format!("unknown oracle kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleKind::Exact => "exact",
            OracleKind::SpectralSweep => "spectral_sweep",
            OracleKind::SpectralPlusLocal => "spectral_plus_local",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub kind: OracleKind,
    /// Largest `n` accepted by exhaustive enumeration.
    pub exact_cap: usize,
    pub eig_tol: f64,
    pub eig_max_iter: usize,
    /// Move budget for local search; `None` means `2n`.
    pub local_max_passes: Option<usize>,
}

impl OracleSpec {
    pub fn new(kind: OracleKind) -> Self {
        OracleSpec { kind, exact_cap: 20, eig_tol: 1e-8, eig_max_iter: 10_000, local_max_passes: None }
    }

    pub fn exact() -> Self {
        Self::new(OracleKind::Exact)
    }

    pub fn spectral() -> Self {
        Self::new(OracleKind::SpectralSweep)
    }

    /// Run the configured oracle on `g` (n >= 2).
    pub fn find_cut(&self, g: &Graph) -> Result<Cut> {
        match self.kind {
            OracleKind::Exact => exact_sparsest_cut(g, self.exact_cap),
            OracleKind::SpectralSweep => spectral_sweep_cut(g, self.eig_tol, self.eig_max_iter),
            OracleKind::SpectralPlusLocal => {
                let c = spectral_sweep_cut(g, self.eig_tol, self.eig_max_iter)?;
                Ok(local_search_improve(g, &c, self.local_max_passes.unwrap_or(2 * g.n())))
            }
        }
    }
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self::exact()
    }
}

/// Minimum-sparsity cut over all `2^(n-1) - 1` bipartitions.
pub fn exact_sparsest_cut(g: &Graph, cap: usize) -> Result<Cut> {
    let n = g.n();
    if n < 2 {
        return Err(HcError::TooSmall("sparsest cut needs n >= 2".into()));
    }
    if n > cap.min(63) {
        return Err(HcError::OverCap { what: "exact sparsest cut", n, cap });
    }
    let full: u64 = (1u64 << n) - 1;
    let edges: Vec<(u64, u64, f64)> = g.edges().iter().map(|e| (1u64 << e.u, 1u64 << e.v, e.w)).collect();
    // best = (cross weight, side mask, side size)
    let mut best: Option<(f64, u64, usize)> = None;
    // Masks without the top vertex enumerate each bipartition once.
    for mask in 1..(1u64 << (n - 1)) {
        let cross: f64 = edges
            .iter()
            .filter(|&&(a, b, _)| (mask & a == 0) != (mask & b == 0))
            .map(|&(_, _, w)| w)
            .sum();
        let s = mask.count_ones() as usize;
        let side = match (2 * s).cmp(&n) {
            Ordering::Less => mask,
            Ordering::Greater => full & !mask,
            Ordering::Equal if mask & 1 == 1 => mask,
            Ordering::Equal => full & !mask,
        };
        let size = side.count_ones() as usize;
        let better = match best {
            None => true,
            Some((bc, bm, bs)) => match cmp_ratio(cross, size, bc, bs, n) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => size < bs || (size == bs && lex_less(side, bm)),
            },
        };
        if better {
            best = Some((cross, side, size));
        }
    }
    let (_, side, _) = best.expect("n >= 2 has a bipartition");
    let mask: Vec<bool> = (0..n).map(|v| side >> v & 1 == 1).collect();
    Cut::from_mask(g, &mask)
}

/// Lexicographic order of equal-size vertex sets given as bitmasks.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Zero-weight cut separating the largest component (smallest id wins ties).
pub fn component_cut(g: &Graph) -> Option<Cut> {
    let comps = g.components();
    if comps.len() < 2 {
        return None;
    }
    let largest = comps.iter().enumerate().max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))?.1;
    Some(Cut::from_side(g, largest).expect("component is a proper subset"))
}

/// Sweep over the Fiedler ordering; disconnected graphs get a component cut.
pub fn spectral_sweep_cut(g: &Graph, eig_tol: f64, eig_max_iter: usize) -> Result<Cut> {
    let n = g.n();
    if n < 2 {
        return Err(HcError::TooSmall("sparsest cut needs n >= 2".into()));
    }
    if let Some(c) = component_cut(g) {
        return Ok(c);
    }
    let (_, mut x) = fiedler_pair(g, eig_tol, eig_max_iter)?;
    // Fix the sign so the output does not depend on the solver's choice.
    if let Some(&pivot) = x.iter().max_by(|a, b| a.abs().total_cmp(&b.abs())) {
        if pivot < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));

    let mut in_side = vec![false; n];
    let mut cross = 0.0;
    let mut best: Option<(f64, usize)> = None;
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        for &(u, w) in g.neighbors(v) {
            if in_side[u] {
                cross -= w;
            } else {
                cross += w;
            }
        }
        in_side[v] = true;
        let size = k + 1;
        let better = match best {
            None => true,
            Some((bc, bk)) => cmp_ratio(cross, size, bc, bk + 1, n) == Ordering::Less,
        };
        if better {
            best = Some((cross, k));
        }
    }
    let (_, k) = best.expect("n >= 2");
    let mut mask = vec![false; n];
    for &v in &order[..=k] {
        mask[v] = true;
    }
    Cut::from_mask(g, &mask)
}

/// Greedy single-vertex moves, each strictly reducing sparsity, at most `max_moves` of them.
pub fn local_search_improve(g: &Graph, cut: &Cut, max_moves: usize) -> Cut {
    let n = g.n();
    let mut mask = cut.mask();
    let mut size = cut.side.len();
    let mut cross = g.cut_weight(&mask);
    for _ in 0..max_moves {
        let mut best: Option<(f64, usize, usize)> = None;
        for v in 0..n {
            let new_size = if mask[v] { size - 1 } else { size + 1 };
            if new_size == 0 || new_size == n {
                continue;
            }
            let (mut same, mut other) = (0.0, 0.0);
            for &(u, w) in g.neighbors(v) {
                if mask[u] == mask[v] {
                    same += w;
                } else {
                    other += w;
                }
            }
            let new_cross = cross - other + same;
            if cmp_ratio(new_cross, new_size, cross, size, n) != Ordering::Less {
                continue;
            }
            let better = match best {
                None => true,
                Some((bc, bs, _)) => cmp_ratio(new_cross, new_size, bc, bs, n) == Ordering::Less,
            };
            if better {
                best = Some((new_cross, new_size, v));
            }
        }
        let Some((c, s, v)) = best else { break };
        mask[v] = !mask[v];
        cross = c;
        size = s;
    }
    Cut::from_mask(g, &mask).expect("moves never empty a side")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    fn clique(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, 1.0));
            }
        }
        Graph::new(n, e).unwrap()
    }

    fn star4() -> Graph {
        Graph::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap()
    }

    fn two_k2() -> Graph {
        Graph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap()
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(sparsity(&path(2), &[0]).unwrap(), 1.0);
        assert_eq!(sparsity(&path(4), &[0, 1]).unwrap(), 0.25);
        assert_eq!(sparsity(&star4(), &[1]).unwrap(), 1.0 / 3.0);
        assert!(sparsity(&path(3), &[]).is_err());
        assert!(sparsity(&path(3), &[0, 1, 2]).is_err());
    }

    #[test]
    fn exact_examples() {
        let c = exact_sparsest_cut(&path(4), 20).unwrap();
        assert_eq!((c.side.clone(), c.sparsity), (vec![0, 1], 0.25));
        let c = exact_sparsest_cut(&star4(), 20).unwrap();
        assert_eq!((c.side.clone(), c.sparsity), (vec![1], 1.0 / 3.0));
        let c = exact_sparsest_cut(&two_k2(), 20).unwrap();
        assert_eq!(c.sparsity, 0.0);
        assert_eq!(c.side, vec![0, 1]);
        let c = exact_sparsest_cut(&path(3), 20).unwrap();
        assert_eq!(c.side, vec![0]);
        assert!(matches!(exact_sparsest_cut(&path(5), 4), Err(HcError::OverCap { .. })));
        assert!(exact_sparsest_cut(&Graph::empty(1), 4).is_err());
    }

    #[test]
    fn spectral_examples() {
        let c = spectral_sweep_cut(&path(4), 1e-8, 10_000).unwrap();
        assert_eq!(c.sparsity, 0.25);
        let c = spectral_sweep_cut(&clique(4), 1e-8, 10_000).unwrap();
        assert_eq!(c.sparsity, 1.0);
        let c = spectral_sweep_cut(&two_k2(), 1e-8, 10_000).unwrap();
        assert_eq!(c.sparsity, 0.0);
    }

    #[test]
    fn local_search_examples() {
        let start = Cut::from_side(&path(4), &[0]).unwrap();
        assert!((start.sparsity - 1.0 / 3.0).abs() < 1e-15);
        let improved = local_search_improve(&path(4), &start, 8);
        assert_eq!(improved.side, vec![0, 1]);
        assert_eq!(improved.sparsity, 0.25);
        // fixed point
        assert_eq!(local_search_improve(&path(4), &improved, 8), improved);
        let k4 = clique(4);
        for side in [vec![0], vec![1, 2], vec![3]] {
            let c = Cut::from_side(&k4, &side).unwrap();
            assert_eq!(local_search_improve(&k4, &c, 8), c);
        }
    }

    #[test]
    fn orientation() {
        let g = path(4);
        assert_eq!(Cut::from_side(&g, &[1, 2, 3]).unwrap().side, vec![0]);
        assert_eq!(Cut::from_side(&g, &[2, 3]).unwrap().side, vec![0, 1]);
        assert_eq!(Cut::from_side(&g, &[1, 3]).unwrap().other_side(), vec![1, 3]);
    }

    #[test]
    fn oracle_kind_parsing() {
        assert_eq!("exact".parse::<OracleKind>().unwrap(), OracleKind::Exact);
        assert_eq!("spectral".parse::<OracleKind>().unwrap(), OracleKind::SpectralSweep);
        assert!("nope".parse::<OracleKind>().is_err());
    }
}
