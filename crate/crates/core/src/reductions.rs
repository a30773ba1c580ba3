//! Densest k-Subgraph as an IQP, parameterized by a vertex cover `C`.
//!
//! Vertices outside `C` form an independent set and are grouped by their
//! neighbourhood in `C`. The variables are `z_v ∈ {0, 1}` for `v ∈ C` and a
//! count `n_t ∈ [0, m_t]` per type, with `Σz + Σn = κ`. The objective matrix
//! is `Q′ = −[[A_C, B], [Bᵀ, 0]]`, twice the natural one, so an optimal value
//! `v` means `−v / 2` induced edges.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::IqpInstance;
use crate::linalg::det::Combinations;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    /// Sorted pairs `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Loops are rejected; repeated edges collapse.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInstance(format!("edge {u}-{v} out of range 0..{vertices}")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            vertices,
            edges: set.into_iter().collect(),
        })
    }

    /// Seeded `G(n, p)` with edge probability `percent / 100`.
    pub fn random(seed: u64, vertices: usize, percent: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..vertices {
            for v in u + 1..vertices {
                if rng.gen_range(0..100) < percent {
                    edges.push((u, v));
                }
            }
        }
        Graph { vertices, edges }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Edges with both endpoints in `s`.
    pub fn induced_edges(&self, s: &[usize]) -> usize {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        self.edges
            .iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    /// Header `p <n> <m>` followed by `m` lines `u v`, 0-indexed. Blank lines
    /// and lines starting with `c` or `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'));
        let bad = |line: usize, msg: &str| Error::Parse(format!("line {line}: {msg}"));
        let (hl, header) = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match h.as_slice() {
            ["p", n, m] => (
                n.parse::<usize>().map_err(|_| bad(hl, "bad vertex count"))?,
                m.parse::<usize>().map_err(|_| bad(hl, "bad edge count"))?,
            ),
            _ => return Err(bad(hl, "expected `p <n> <m>`")),
        };
        let mut edges = Vec::with_capacity(m);
        for (ln, l) in lines {
            let e: Vec<&str> = l.split_whitespace().collect();
            let [u, v] = e.as_slice() else {
                return Err(bad(ln, "expected `u v`"));
            };
            let u = u.parse::<usize>().map_err(|_| bad(ln, "bad vertex"))?;
            let v = v.parse::<usize>().map_err(|_| bad(ln, "bad vertex"))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.vertices, self.edges.len());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    fn check_cover(&self, cover: &[usize]) -> Result<BTreeSet<usize>> {
        let set: BTreeSet<usize> = cover.iter().copied().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= self.vertices) {
            return Err(Error::InvalidInstance(format!("cover vertex {v} out of range")));
        }
        match self.edges.iter().find(|(u, v)| !set.contains(u) && !set.contains(v)) {
            Some(&(u, v)) => Err(Error::NotAVertexCover(u, v)),
            None => Ok(set),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodType {
    /// `N(v) ∩ C`, sorted.
    pub signature: Vec<usize>,
    /// Members in increasing order.
    pub members: Vec<usize>,
}

impl NeighbourhoodType {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypePartition {
    /// Sorted and without repetitions.
    pub cover: Vec<usize>,
    /// Sorted by signature.
    pub types: Vec<NeighbourhoodType>,
}

impl TypePartition {
    /// Variables of the reduction: one per cover vertex, then one per type.
    pub fn variables(&self) -> usize {
        self.cover.len() + self.types.len()
    }
}

pub fn neighbourhood_types(g: &Graph, cover: &[usize]) -> Result<TypePartition> {
    let set = g.check_cover(cover)?;
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in (0..g.vertices).filter(|v| !set.contains(v)) {
        let sig = set.iter().copied().filter(|&c| g.has_edge(v, c)).collect();
        groups.entry(sig).or_default().push(v);
    }
    Ok(TypePartition {
        cover: set.into_iter().collect(),
        types: groups
            .into_iter()
            .map(|(signature, members)| NeighbourhoodType { signature, members })
            .collect(),
    })
}

/// The IQP for `κ`-vertex subgraphs, with the doubled objective `Q′`.
pub fn densest_k_subgraph_to_iqp(g: &Graph, cover: &[usize], kappa: usize) -> Result<(IqpInstance, TypePartition)> {
    let part = neighbourhood_types(g, cover)?;
    if kappa > g.vertices {
        return Err(Error::KappaOutOfRange {
            kappa,
            vertices: g.vertices,
        });
    }
    let k = part.cover.len();
    let n = part.variables();
    let mut q = IntMatrix::zeros(n, n);
    for (i, &u) in part.cover.iter().enumerate() {
        for (j, &v) in part.cover.iter().enumerate() {
            if g.has_edge(u, v) {
                q.set(i, j, -BigInt::one());
            }
        }
        for (t, ty) in part.types.iter().enumerate() {
            if ty.signature.contains(&u) {
                q.set(i, k + t, -BigInt::one());
                q.set(k + t, i, -BigInt::one());
            }
        }
    }
    let mut a = IntMatrix::empty(n);
    let mut b = Vec::new();
    let mut unit = |i: usize, sign: i64, rhs: BigInt| {
        let mut row = vec![BigInt::zero(); n];
        row[i] = BigInt::from(sign);
        a.push_row(&row);
        b.push(rhs);
    };
    for i in 0..n {
        let upper = if i < k { 1 } else { part.types[i - k].count() };
        unit(i, 1, BigInt::from(upper));
        unit(i, -1, BigInt::zero());
    }
    a.push_row(&vec![BigInt::one(); n]);
    b.push(BigInt::from(kappa));
    a.push_row(&vec![-BigInt::one(); n]);
    b.push(-BigInt::from(kappa));
    let inst = IqpInstance::new(q, vec![BigInt::zero(); n], a, b)?;
    Ok((inst, part))
}

/// Induced edge count for an optimal value of the doubled objective.
pub fn edges_from_value(value: &BigInt) -> BigInt {
    -value / 2
}

/// Cover vertices with `z_v = 1` and the first `n_t` members of each type,
/// sorted.
pub fn decode_subgraph(witness: &[BigInt], part: &TypePartition) -> Result<Vec<usize>> {
    if witness.len() != part.variables() {
        return Err(Error::DimensionMismatch(format!(
            "witness has {} entries, the reduction has {} variables",
            witness.len(),
            part.variables()
        )));
    }
    let k = part.cover.len();
    let mut s: Vec<usize> = part
        .cover
        .iter()
        .zip(witness)
        .filter(|(_, z)| z.is_one())
        .map(|(&v, _)| v)
        .collect();
    for (ty, count) in part.types.iter().zip(&witness[k..]) {
        let c = count
            .to_usize()
            .filter(|&c| c <= ty.count())
            .ok_or_else(|| Error::InvalidInstance(format!("type count {count} out of range")))?;
        s.extend_from_slice(&ty.members[..c]);
    }
    s.sort_unstable();
    Ok(s)
}

/// Largest induced edge count over all `κ`-subsets.
pub fn densest_subgraph_brute(g: &Graph, kappa: usize) -> Result<usize> {
    if kappa > g.vertices {
        return Err(Error::KappaOutOfRange {
            kappa,
            vertices: g.vertices,
        });
    }
    if kappa == 0 {
        return Ok(0);
    }
    Ok(Combinations::new(g.vertices, kappa)
        .map(|s| g.induced_edges(&s))
        .max()
        .unwrap_or(0))
}

/// A minimum vertex cover by exhaustive search, smallest first and then
/// lexicographically first. Intended for graphs with at most 20 vertices.
pub fn minimum_vertex_cover(g: &Graph) -> Result<Vec<usize>> {
    if g.vertices > 20 {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive vertex cover limited to 20 vertices, got {}",
            g.vertices
        )));
    }
    for k in 0..=g.vertices {
        let found = if k == 0 {
            g.edges.is_empty().then(Vec::new)
        } else {
            Combinations::new(g.vertices, k).find(|s| g.check_cover(s).is_ok())
        };
        if let Some(c) = found {
            return Ok(c);
        }
    }
    unreachable!("the full vertex set is a cover")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_batch, SolveOptions};

    fn path() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn types() {
        let p = neighbourhood_types(&path(), &[1]).unwrap();
        assert_eq!(p.types.len(), 1);
        assert_eq!((p.types[0].signature.clone(), p.types[0].count()), (vec![1], 2));

        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = neighbourhood_types(&star, &[0]).unwrap();
        assert_eq!(p.types.len(), 1);
        assert_eq!(p.types[0].count(), 3);

        let p = neighbourhood_types(&triangle(), &[0, 1]).unwrap();
        assert_eq!(p.types[0].signature, vec![0, 1]);
        assert_eq!(p.types[0].members, vec![2]);

        assert_eq!(neighbourhood_types(&path(), &[0]), Err(Error::NotAVertexCover(1, 2)));
    }

    fn solve_dks(g: &Graph, cover: &[usize], kappa: usize) -> (BigInt, Vec<usize>) {
        let (inst, part) = densest_k_subgraph_to_iqp(g, cover, kappa).unwrap();
        let r = solve_batch(&inst, &SolveOptions::default()).unwrap();
        let s = decode_subgraph(&r.witness.unwrap(), &part).unwrap();
        (edges_from_value(&r.value.unwrap()), s)
    }

    #[test]
    fn reduction_examples() {
        let (e, s) = solve_dks(&triangle(), &[1, 2], 2);
        assert_eq!(e, BigInt::one());
        assert_eq!((s.len(), triangle().induced_edges(&s)), (2, 1));

        let (e, s) = solve_dks(&path(), &[1], 2);
        assert_eq!(e, BigInt::one());
        assert!(s.contains(&1) && s.len() == 2);

        let (e, s) = solve_dks(&triangle(), &[0, 1], 0);
        assert_eq!((e, s), (BigInt::zero(), vec![]));

        let (_, s) = solve_dks(&triangle(), &[0, 1], 3);
        assert_eq!(s, vec![0, 1, 2]);

        assert_eq!(
            densest_k_subgraph_to_iqp(&path(), &[1], 4).unwrap_err(),
            Error::KappaOutOfRange { kappa: 4, vertices: 3 }
        );
    }

    #[test]
    fn decode_all_cover() {
        let (_, part) = densest_k_subgraph_to_iqp(&triangle(), &[0, 1], 2).unwrap();
        let one = BigInt::one();
        assert_eq!(decode_subgraph(&[one.clone(), one, BigInt::zero()], &part).unwrap(), vec![0, 1]);
    }

    #[test]
    fn parse_round_trip() {
        let g = Graph::parse("p 4 2\n0 1\n# comment\n2 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (2, 3)]);
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("p 2 1\n0 2\n").is_err());
        assert!(Graph::parse("p 2 2\n0 1\n").is_err());
        assert!(Graph::parse("0 1\n").is_err());
    }

    #[test]
    fn brute_helpers() {
        assert_eq!(minimum_vertex_cover(&path()).unwrap(), vec![1]);
        assert_eq!(minimum_vertex_cover(&triangle()).unwrap(), vec![0, 1]);
        assert_eq!(densest_subgraph_brute(&triangle(), 3).unwrap(), 3);
        assert_eq!(densest_subgraph_brute(&path(), 2).unwrap(), 1);
    }
}
