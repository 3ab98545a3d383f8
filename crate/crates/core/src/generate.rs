//! Deterministic instance generators.
//!
//! All randomness comes from ChaCha8 seeded with the 64-bit spec seed, so a
//! `(spec, seed)` pair yields the same edge list on every platform. Random
//! families visit pairs `(i, j)`, `i < j`, in lexicographic order and draw one
//! uniform `f64` per pair, followed by one weight draw per kept edge when
//! integer weights are requested.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HcError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Clique { n: usize },
    Path { n: usize },
    /// Vertex 0 is the centre, joined to `1..n`.
    Star { n: usize },
    Cycle { n: usize },
    DisjointCliques { k: usize, s: usize },
    /// `k` blocks of `s` consecutive vertices.
    PlantedPartition { k: usize, s: usize, p_in: f64, p_out: f64 },
    ErdosRenyi { n: usize, p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weights {
    Unit,
    /// Uniform integer weights in `1..=max`.
    Integer { max: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub weights: Weights,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorSpec { family, weights: Weights::Unit, seed }
    }

    pub fn with_weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    pub fn num_vertices(&self) -> usize {
        match self.family {
            Family::Clique { n }
            | Family::Path { n }
            | Family::Star { n }
            | Family::Cycle { n }
            | Family::ErdosRenyi { n, .. } => n,
            Family::DisjointCliques { k, s } | Family::PlantedPartition { k, s, .. } => k * s,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HcError::InvalidGenerator(msg));
        let prob = |p: f64, name: &str| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(HcError::InvalidGenerator(format!("{name} = {p} not in [0, 1]")))
            }
        };
        match self.family {
            Family::Clique { n } | Family::Path { n } | Family::Star { n } if n == 0 => {
                return bad("n must be >= 1".into())
            }
            Family::Cycle { n } if n < 3 => return bad("cycle needs n >= 3".into()),
            Family::DisjointCliques { k, s } | Family::PlantedPartition { k, s, .. }
                if k == 0 || s == 0 =>
            {
                return bad("k and s must be >= 1".into())
            }
            Family::PlantedPartition { p_in, p_out, .. } => {
                prob(p_in, "p_in")?;
                prob(p_out, "p_out")?;
            }
            Family::ErdosRenyi { n, p } => {
                if n == 0 {
                    return bad("n must be >= 1".into());
                }
                prob(p, "p")?;
            }
            _ => {}
        }
        if let Weights::Integer { max: 0 } = self.weights {
            return bad("integer weight max must be >= 1".into());
        }
        Ok(())
    }
}

/// Build the graph described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.num_vertices();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match spec.family {
        Family::Clique { n } => {
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((i, j));
                }
            }
        }
        Family::Path { n } => pairs.extend((1..n).map(|i| (i - 1, i))),
        Family::Star { n } => pairs.extend((1..n).map(|i| (0, i))),
        Family::Cycle { n } => {
            pairs.extend((1..n).map(|i| (i - 1, i)));
            pairs.push((0, n - 1));
        }
        Family::DisjointCliques { k, s } => {
            for b in 0..k {
                for i in 0..s {
                    for j in i + 1..s {
                        pairs.push((b * s + i, b * s + j));
                    }
                }
            }
        }
        Family::PlantedPartition { s, p_in, p_out, .. } => {
            for i in 0..n {
                for j in i + 1..n {
                    let p = if i / s == j / s { p_in } else { p_out };
                    if rng.random::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
        }
        Family::ErdosRenyi { p, .. } => {
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, v)| {
            let w = match spec.weights {
                Weights::Unit => 1.0,
                Weights::Integer { max } => f64::from(rng.random_range(1..=max)),
            };
            (u, v, w)
        })
        .collect();
    Graph::new(n, edges)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Clique { n } => write!(f, "clique:n={n}"),
            Family::Path { n } => write!(f, "path:n={n}"),
            Family::Star { n } => write!(f, "star:n={n}"),
            Family::Cycle { n } => write!(f, "cycle:n={n}"),
            Family::DisjointCliques { k, s } => write!(f, "disjoint_cliques:k={k},s={s}"),
            Family::PlantedPartition { k, s, p_in, p_out } => {
                write!(f, "planted_partition:k={k},s={s},p_in={p_in},p_out={p_out}")
            }
            Family::ErdosRenyi { n, p } => write!(f, "erdos_renyi:n={n},p={p}"),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if let Weights::Integer { max } = self.weights {
            write!(f, ",w={max}")?;
        }
        write!(f, ",seed={}", self.seed)
    }
}

/// Parsed form of `family:key=value,...`. Missing `n` may be supplied later
/// through [`FamilyTemplate::instantiate`].
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTemplate {
    pub name: String,
    params: Vec<(String, String)>,
}

impl FamilyTemplate {
    pub fn needs_size(&self) -> bool {
        matches!(self.name.as_str(), "clique" | "path" | "star" | "cycle" | "erdos_renyi")
            && !self.params.iter().any(|(k, _)| k == "n")
    }

    /// Resolve the template into a concrete spec, using `size` for a missing `n`.
    pub fn instantiate(&self, size: Option<usize>, seed: u64) -> Result<GeneratorSpec> {
        let bad = |msg: String| HcError::InvalidGenerator(msg);
        let get = |key: &str| self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let int = |key: &str| -> Result<usize> {
            match get(key) {
                Some(v) => v.parse().map_err(|_| bad(format!("{key} = {v:?} is not an integer"))),
                None if key == "n" => size.ok_or_else(|| bad(format!("{}: missing n", self.name))),
                None => Err(bad(format!("{}: missing {key}", self.name))),
            }
        };
        let real = |key: &str| -> Result<f64> {
            let v = get(key).ok_or_else(|| bad(format!("{}: missing {key}", self.name)))?;
            v.parse().map_err(|_| bad(format!("{key} = {v:?} is not a number")))
        };
        let allowed: &[&str] = match self.name.as_str() {
            "clique" | "path" | "star" | "cycle" => &["n", "w"],
            "disjoint_cliques" => &["k", "s", "w"],
            "planted_partition" => &["k", "s", "p_in", "p_out", "w"],
            "erdos_renyi" => &["n", "p", "w"],
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        if let Some((k, _)) = self.params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(bad(format!("{}: unknown parameter {k:?}", self.name)));
        }
        let family = match self.name.as_str() {
            "clique" => Family::Clique { n: int("n")? },
            "path" => Family::Path { n: int("n")? },
            "star" => Family::Star { n: int("n")? },
            "cycle" => Family::Cycle { n: int("n")? },
            "disjoint_cliques" => Family::DisjointCliques { k: int("k")?, s: int("s")? },
            "planted_partition" => Family::PlantedPartition {
                k: int("k")?,
                s: int("s")?,
                p_in: real("p_in")?,
                p_out: real("p_out")?,
            },
            "erdos_renyi" => Family::ErdosRenyi { n: int("n")?, p: real("p")? },
            _ => unreachable!(),
        };
        let weights = match get("w") {
            None => Weights::Unit,
            Some(v) => Weights::Integer {
                max: v.parse().map_err(|_| bad(format!("w = {v:?} is not an integer")))?,
            },
        };
        let spec = GeneratorSpec { family, weights, seed };
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for FamilyTemplate {
    type Err = HcError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| HcError::InvalidGenerator(format!("expected key=value, got {item:?}")))?;
            params.push((k.trim().to_string(), v.trim().to_string()));
        }
        if name.is_empty() {
            return Err(HcError::InvalidGenerator("empty family name".into()));
        }
        Ok(FamilyTemplate { name: name.to_string(), params })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().iter().map(|e| (e.u, e.v)).collect()
    }

    #[test]
    fn clique_three() {
        let g = generate(&GeneratorSpec::new(Family::Clique { n: 3 }, 0)).unwrap();
        assert_eq!(pairs(&g), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn path_four() {
        let g = generate(&GeneratorSpec::new(Family::Path { n: 4 }, 9)).unwrap();
        assert_eq!(pairs(&g), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn planted_degenerate_is_two_k4() {
        for seed in [0, 1, 77, u64::MAX] {
            let fam = Family::PlantedPartition { k: 2, s: 4, p_in: 1.0, p_out: 0.0 };
            let g = generate(&GeneratorSpec::new(fam, seed)).unwrap();
            let k4 = generate(&GeneratorSpec::new(Family::DisjointCliques { k: 2, s: 4 }, 0)).unwrap();
            assert_eq!(g, k4);
        }
    }

    #[test]
    fn seeded_families_are_reproducible() {
        let spec = GeneratorSpec::new(Family::ErdosRenyi { n: 12, p: 0.4 }, 42)
            .with_weights(Weights::Integer { max: 5 });
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GeneratorSpec { seed: 43, ..spec.clone() };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn invalid_params() {
        assert!(generate(&GeneratorSpec::new(Family::Path { n: 0 }, 0)).is_err());
        assert!(generate(&GeneratorSpec::new(Family::Cycle { n: 2 }, 0)).is_err());
        assert!(generate(&GeneratorSpec::new(Family::ErdosRenyi { n: 3, p: 1.5 }, 0)).is_err());
        let fam = Family::PlantedPartition { k: 2, s: 2, p_in: -0.1, p_out: 0.0 };
        assert!(generate(&GeneratorSpec::new(fam, 0)).is_err());
    }

    #[test]
    fn template_round_trip() {
        let t: FamilyTemplate = "planted_partition:k=4,s=4,p_in=1,p_out=0.05".parse().unwrap();
        assert!(!t.needs_size());
        let spec = t.instantiate(None, 3).unwrap();
        assert_eq!(spec.family, Family::PlantedPartition { k: 4, s: 4, p_in: 1.0, p_out: 0.05 });
        let again: FamilyTemplate = spec.family.to_string().parse().unwrap();
        assert_eq!(again.instantiate(None, 3).unwrap(), spec);

        let t: FamilyTemplate = "cycle".parse().unwrap();
        assert!(t.needs_size());
        assert_eq!(t.instantiate(Some(5), 0).unwrap().family, Family::Cycle { n: 5 });
        assert!("bogus:n=3".parse::<FamilyTemplate>().unwrap().instantiate(None, 0).is_err());
        assert!("path:n=3,q=1".parse::<FamilyTemplate>().unwrap().instantiate(None, 0).is_err());
    }
}
