//! Simply-laced Cartan data, weights as coset representative plus root-lattice
//! offset, and the sl_n ↔ gl_n weight correspondence.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("repeated edge {0}-{1}")]
    MultiEdge(u32, u32),
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("repeated vertex {0}")]
    RepeatedVertex(u32),
    #[error("orientation must cover each edge exactly once: {0}")]
    Orientation(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("Cartan matrix is singular; pairing vectors do not determine weights")]
    Singular,
    #[error("no coset representative matches pairing {0:?}")]
    NoCoset(Vec<i64>),
    #[error("gl_n requires n >= 2")]
    GlRank,
}

/// A finite simple graph with optional edge orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplyLacedGraph {
    pub vertices: Vec<u32>,
    #[serde(default)]
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<[u32; 2]>>,
}

impl SimplyLacedGraph {
    /// Type A_n path `1 - 2 - ... - n`, oriented `i → i+1`.
    pub fn path(n: u32) -> SimplyLacedGraph {
        let vertices: Vec<u32> = (1..=n).collect();
        let edges: Vec<[u32; 2]> = (1..n).map(|i| [i, i + 1]).collect();
        SimplyLacedGraph { vertices, orientation: Some(edges.clone()), edges }
    }

    pub fn from_json(s: &str) -> Result<SimplyLacedGraph, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A simply-laced Cartan datum. Vertices are addressed by dense index `0..rank`;
/// user-facing labels are kept for I/O.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    pub graph: SimplyLacedGraph,
    labels: Vec<u32>,
    index: HashMap<u32, usize>,
    matrix: Arc<Vec<Vec<i64>>>,
    arrows: BTreeSet<(usize, usize)>,
}

pub fn build_cartan(graph: SimplyLacedGraph) -> Result<CartanDatum, CartanError> {
    let labels = graph.vertices.clone();
    let mut index = HashMap::new();
    for (k, &v) in labels.iter().enumerate() {
        if index.insert(v, k).is_some() {
            return Err(CartanError::RepeatedVertex(v));
        }
    }
    let n = labels.len();
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut seen = BTreeSet::new();
    for &[u, v] in &graph.edges {
        if u == v {
            return Err(CartanError::Loop(u));
        }
        let iu = *index.get(&u).ok_or(CartanError::UnknownVertex(u))?;
        let iv = *index.get(&v).ok_or(CartanError::UnknownVertex(v))?;
        if !seen.insert((iu.min(iv), iu.max(iv))) {
            return Err(CartanError::MultiEdge(u, v));
        }
        a[iu][iv] = -1;
        a[iv][iu] = -1;
    }
    let mut arrows = BTreeSet::new();
    if let Some(or) = &graph.orientation {
        let mut covered = BTreeSet::new();
        for &[u, v] in or {
            let iu = *index.get(&u).ok_or(CartanError::UnknownVertex(u))?;
            let iv = *index.get(&v).ok_or(CartanError::UnknownVertex(v))?;
            let key = (iu.min(iv), iu.max(iv));
            if !seen.contains(&key) {
                return Err(CartanError::Orientation(format!("{u}->{v} is not an edge")));
            }
            if !covered.insert(key) {
                return Err(CartanError::Orientation(format!("edge {u}-{v} oriented twice")));
            }
            arrows.insert((iu, iv));
        }
        if covered.len() != seen.len() {
            return Err(CartanError::Orientation("some edge has no orientation".into()));
        }
    }
    Ok(CartanDatum { graph, labels, index, matrix: Arc::new(a), arrows })
}

impl CartanDatum {
    pub fn type_a(n: u32) -> CartanDatum {
        build_cartan(SimplyLacedGraph::path(n)).expect("path graph is valid")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn index_of(&self, label: u32) -> Result<usize, CartanError> {
        self.index.get(&label).copied().ok_or(CartanError::UnknownVertex(label))
    }

    /// a_ij = ⟨h_i, α_j⟩ = i·j.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.matrix
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.matrix[i][j] == -1
    }

    /// Oriented edge `i → j`.
    pub fn arrow(&self, i: usize, j: usize) -> bool {
        self.arrows.contains(&(i, j))
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn is_tree(&self) -> bool {
        let n = self.rank();
        if n == 0 {
            return false;
        }
        let edges: usize = (0..n).map(|i| self.neighbours(i).len()).sum::<usize>() / 2;
        if edges + 1 != n {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Distance from `root` along the tree; used to order vertices by level.
    pub fn levels(&self, root: usize) -> Result<Vec<usize>, CartanError> {
        if !self.is_tree() {
            return Err(CartanError::NotATree);
        }
        let mut lvl = vec![usize::MAX; self.rank()];
        lvl[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if lvl[w] == usize::MAX {
                    lvl[w] = lvl[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(lvl)
    }

    /// The zero weight in the root-lattice coset of 0.
    pub fn zero_weight(&self) -> Weight {
        Weight::at_base(Arc::new(Coset {
            label: "0".into(),
            pairing: vec![0; self.rank()],
            cartan: self.matrix.clone(),
            gl: None,
        }))
    }

    /// The fundamental weight Λ_i, as a coset base.
    pub fn fundamental(&self, i: usize) -> Weight {
        let mut p = vec![0; self.rank()];
        p[i] = 1;
        Weight::at_base(Arc::new(Coset {
            label: format!("L{}", self.labels[i]),
            pairing: p,
            cartan: self.matrix.clone(),
            gl: None,
        }))
    }

    /// A base weight with arbitrary label and pairing vector.
    pub fn base_weight(&self, label: &str, pairing: Vec<i64>) -> Weight {
        assert_eq!(pairing.len(), self.rank());
        Weight::at_base(Arc::new(Coset {
            label: label.to_string(),
            pairing,
            cartan: self.matrix.clone(),
            gl: None,
        }))
    }

    fn inverse(&self) -> Result<Vec<Vec<Ratio<i64>>>, CartanError> {
        let n = self.rank();
        let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> =
                    self.matrix[i].iter().map(|&x| Ratio::from_integer(x)).collect();
                row.extend((0..n).map(|j| Ratio::from_integer(i64::from(i == j))));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r][col] != Ratio::from_integer(0)).ok_or(CartanError::Singular)?;
            m.swap(col, piv);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = m[r][col];
                    if f != Ratio::from_integer(0) {
                        for c in 0..2 * n {
                            let v = m[col][c];
                            m[r][c] -= f * v;
                        }
                    }
                }
            }
        }
        Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Canonical coset representatives of X / Q for finite type: sums of
    /// fundamental weights in increasing size, one per coset.
    pub fn coset_bases(&self) -> Result<Vec<Weight>, CartanError> {
        let inv = self.inverse()?;
        let n = self.rank();
        let det = determinant(&self.matrix).unsigned_abs() as usize;
        let mut reps: Vec<Vec<i64>> = Vec::new();
        let same = |a: &[i64], b: &[i64]| {
            (0..n).all(|r| {
                let s: Ratio<i64> = (0..n).map(|c| inv[r][c] * Ratio::from_integer(a[c] - b[c])).sum();
                s.is_integer()
            })
        };
        let mut bound = 1;
        while reps.len() < det {
            let mut cands: Vec<Vec<i64>> = Vec::new();
            let mut v = vec![0i64; n];
            loop {
                cands.push(v.clone());
                let mut k = 0;
                while k < n {
                    v[k] += 1;
                    if v[k] <= bound {
                        break;
                    }
                    v[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
            cands.sort_by_key(|c| (c.iter().sum::<i64>(), c.iter().rev().cloned().collect::<Vec<_>>()));
            for c in cands {
                if reps.len() == det {
                    break;
                }
                if !reps.iter().any(|r| same(r, &c)) {
                    reps.push(c);
                }
            }
            bound += 1;
        }
        Ok(reps
            .into_iter()
            .map(|p| {
                let label = if p.iter().all(|&x| x == 0) {
                    "0".to_string()
                } else {
                    p.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| {
                            if x == 1 {
                                format!("L{}", self.labels[i])
                            } else {
                                format!("{x}L{}", self.labels[i])
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("+")
                };
                self.base_weight(&label, p)
            })
            .collect())
    }

    /// Weight with the given pairing vector, expressed over one of `bases`.
    pub fn weight_from_pairing(&self, bases: &[Weight], pairing: &[i64]) -> Result<Weight, CartanError> {
        let inv = self.inverse()?;
        let n = self.rank();
        for b in bases {
            let diff: Vec<i64> = (0..n).map(|i| pairing[i] - b.coset.pairing[i]).collect();
            let k: Vec<Ratio<i64>> = (0..n)
                .map(|r| (0..n).map(|c| inv[r][c] * Ratio::from_integer(diff[c])).sum())
                .collect();
            if k.iter().all(|x| x.is_integer()) {
                let offset: Vec<i64> = k.iter().map(|x| x.to_integer()).collect();
                return Ok(Weight::new(b.coset.clone(), offset));
            }
        }
        Err(CartanError::NoCoset(pairing.to_vec()))
    }

    /// All weights whose pairings all lie in `[lo, hi]` (finite type only).
    pub fn weight_window(&self, lo: i64, hi: i64) -> Result<Vec<Weight>, CartanError> {
        let bases = self.coset_bases()?;
        let n = self.rank();
        let mut out = Vec::new();
        let mut p = vec![lo; n];
        if n == 0 {
            return Ok(out);
        }
        loop {
            out.push(self.weight_from_pairing(&bases, &p)?);
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                p[k] += 1;
                if p[k] <= hi {
                    break;
                }
                p[k] = lo;
            }
        }
    }

    /// Datum of gl_n: the A_{n−1} path.
    pub fn gl(n: u32) -> Result<CartanDatum, CartanError> {
        if n < 2 {
            return Err(CartanError::GlRank);
        }
        Ok(CartanDatum::type_a(n - 1))
    }

    /// The gl_n weight `λ` expressed over the coset of weights with coordinate sum `d`.
    pub fn gl_weight(&self, lam: &GlWeight) -> Weight {
        let n = lam.entries.len();
        assert_eq!(n, self.rank() + 1, "gl weight length");
        let d: i64 = lam.entries.iter().sum();
        let mut base = vec![0i64; n];
        base[0] = d;
        let mut pairing = vec![0i64; n - 1];
        pairing[0] = d;
        let coset = Arc::new(Coset { label: format!("d{d}"), pairing, cartan: self.matrix.clone(), gl: Some(base) });
        let mut offset = vec![0i64; n - 1];
        let mut acc = 0;
        for j in 0..n - 1 {
            acc += lam.entries[j];
            offset[j] = acc - d;
        }
        Weight::new(coset, offset)
    }

    /// All gl_n weights with entries in `[lo, hi]`.
    pub fn gl_window(&self, lo: i64, hi: i64) -> Vec<Weight> {
        let n = self.rank() + 1;
        let mut out = Vec::new();
        let mut v = vec![lo; n];
        loop {
            out.push(self.gl_weight(&GlWeight { entries: v.clone() }));
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                v[k] += 1;
                if v[k] <= hi {
                    break;
                }
                v[k] = lo;
            }
        }
    }
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
    let mut det = Ratio::from_integer(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != Ratio::from_integer(0)) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    det.to_integer()
}

/// A coset of the root lattice, named by a chosen representative.
#[derive(Debug, Clone)]
pub struct Coset {
    pub label: String,
    /// ⟨h_i, base⟩ for every vertex.
    pub pairing: Vec<i64>,
    cartan: Arc<Vec<Vec<i64>>>,
    /// gl_n coordinates of the base when the coset lives in ℤⁿ.
    pub gl: Option<Vec<i64>>,
}

/// λ = base + Σ offset_i α_i.
#[derive(Debug, Clone)]
pub struct Weight {
    pub coset: Arc<Coset>,
    pub offset: Vec<i64>,
    pairing: Vec<i64>,
}

impl Weight {
    pub fn new(coset: Arc<Coset>, offset: Vec<i64>) -> Weight {
        let n = coset.pairing.len();
        assert_eq!(offset.len(), n);
        let pairing = (0..n)
            .map(|i| coset.pairing[i] + (0..n).map(|j| coset.cartan[i][j] * offset[j]).sum::<i64>())
            .collect();
        Weight { coset, offset, pairing }
    }

    fn at_base(coset: Arc<Coset>) -> Weight {
        let n = coset.pairing.len();
        Weight::new(coset, vec![0; n])
    }

    /// λ_i = ⟨h_i, λ⟩.
    pub fn pairing(&self, i: usize) -> i64 {
        self.pairing[i]
    }

    pub fn pairings(&self) -> &[i64] {
        &self.pairing
    }

    /// λ + kα_i.
    pub fn shift(&self, i: usize, k: i64) -> Weight {
        if k == 0 {
            return self.clone();
        }
        let mut offset = self.offset.clone();
        offset[i] += k;
        let pairing = (0..self.pairing.len()).map(|j| self.pairing[j] + k * self.coset.cartan[j][i]).collect();
        Weight { coset: self.coset.clone(), offset, pairing }
    }

    /// The same coset position at another base (used when rebasing tables).
    pub fn base(&self) -> Weight {
        Weight::at_base(self.coset.clone())
    }

    pub fn label(&self) -> &str {
        &self.coset.label
    }

    /// gl_n coordinates, for weights built from gl tuples.
    pub fn gl_entries(&self) -> Option<Vec<i64>> {
        let base = self.coset.gl.as_ref()?;
        let mut v = base.clone();
        for (i, &k) in self.offset.iter().enumerate() {
            v[i] += k;
            v[i + 1] -= k;
        }
        Some(v)
    }

    /// Membership in X⁺ (λ_i ≥ 0 for all i). Exposed as a predicate only.
    pub fn is_dominant(&self) -> bool {
        self.pairing.iter().all(|&x| x >= 0)
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.coset.label == other.coset.label && self.offset == other.offset
    }
}

impl Eq for Weight {}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coset.label.hash(state);
        self.offset.hash(state);
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.coset.label, &self.offset).cmp(&(&other.coset.label, &other.offset))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.gl_entries() {
            let s: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            return write!(f, "({})", s.join(","));
        }
        let s: Vec<String> = self.pairing.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// A gl_n weight (λ_1, …, λ_n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlWeight {
    pub entries: Vec<i64>,
}

impl fmt::Display for GlWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// φ_{n,d}(μ): the gl_n weight with λ_i − λ_{i+1} = μ_i and Σλ_i = d, if integral.
pub fn gl_from_sl(n: usize, d: i64, mu: &[i64]) -> Option<GlWeight> {
    assert!(n >= 2 && mu.len() == n - 1, "gl_from_sl needs n >= 2 and |mu| = n-1");
    // λ_k = λ_n + Σ_{m ≥ k} μ_m, so Σλ = n·λ_n + Σ_m m·μ_m
    let weighted: i64 = mu.iter().enumerate().map(|(m, &x)| (m as i64 + 1) * x).sum();
    let rest = d - weighted;
    if rest.rem_euclid(n as i64) != 0 {
        return None;
    }
    let last = rest / n as i64;
    let mut entries = vec![0; n];
    entries[n - 1] = last;
    for k in (0..n - 1).rev() {
        entries[k] = entries[k + 1] + mu[k];
    }
    Some(GlWeight { entries })
}

/// The residue of `d` mod n for which φ_{n,d}(μ) exists: Σ_m m·μ_m mod n.
pub fn congruence_target(n: usize, mu: &[i64]) -> i64 {
    let weighted: i64 = mu.iter().enumerate().map(|(m, &x)| (m as i64 + 1) * x).sum();
    weighted.rem_euclid(n as i64)
}

/// λ̄_k = λ_k − λ_{k+1}.
pub fn sl_from_gl(lam: &GlWeight) -> Vec<i64> {
    lam.entries.windows(2).map(|w| w[0] - w[1]).collect()
}

/// Parse a datum from the graph JSON format.
pub fn datum_from_json(s: &str) -> Result<CartanDatum, String> {
    let g = SimplyLacedGraph::from_json(s).map_err(|e| e.to_string())?;
    build_cartan(g).map_err(|e| e.to_string())
}

/// Matrix as a label-keyed map, for reports.
pub fn matrix_by_label(d: &CartanDatum) -> BTreeMap<(u32, u32), i64> {
    let mut m = BTreeMap::new();
    for i in 0..d.rank() {
        for j in 0..d.rank() {
            m.insert((d.label(i), d.label(j)), d.a(i, j));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_matrix() {
        let d = CartanDatum::type_a(2);
        assert_eq!(d.matrix(), &vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn single_vertex() {
        let d = build_cartan(SimplyLacedGraph { vertices: vec![1], edges: vec![], orientation: None }).unwrap();
        assert_eq!(d.matrix(), &vec![vec![2]]);
        assert!(d.is_tree());
    }

    #[test]
    fn a3_nonadjacent() {
        let d = CartanDatum::type_a(3);
        assert_eq!((d.a(0, 2), d.a(0, 1), d.a(1, 2)), (0, -1, -1));
    }

    #[test]
    fn rejects_bad_graphs() {
        let lp = SimplyLacedGraph { vertices: vec![1], edges: vec![[1, 1]], orientation: None };
        assert_eq!(build_cartan(lp), Err(CartanError::Loop(1)));
        let me = SimplyLacedGraph { vertices: vec![1, 2], edges: vec![[1, 2], [2, 1]], orientation: None };
        assert_eq!(build_cartan(me), Err(CartanError::MultiEdge(2, 1)));
        let or = SimplyLacedGraph { vertices: vec![1, 2, 3], edges: vec![[1, 2], [2, 3]], orientation: Some(vec![[1, 2]]) };
        assert!(matches!(build_cartan(or), Err(CartanError::Orientation(_))));
    }

    #[test]
    fn pairing_of_fundamental_weights() {
        let d = CartanDatum::type_a(2);
        let l1 = d.fundamental(0);
        assert_eq!(l1.pairing(0), 1);
        assert_eq!(l1.pairing(1), 0);
        assert_eq!(l1.shift(0, 1).pairing(0), 3);
    }

    #[test]
    fn shift_properties() {
        let d = CartanDatum::type_a(3);
        let l = d.fundamental(1);
        assert_eq!(l.shift(0, 0), l);
        assert_eq!(l.shift(0, 1).pairing(0), l.pairing(0) + 2);
        assert_eq!(l.shift(0, 1).pairing(1), l.pairing(1) - 1);
        assert_eq!(l.shift(0, 1).shift(0, -1), l);
    }

    #[test]
    fn coset_counts_match_determinant() {
        assert_eq!(CartanDatum::type_a(2).coset_bases().unwrap().len(), 3);
        assert_eq!(CartanDatum::type_a(3).coset_bases().unwrap().len(), 4);
        let d4 = build_cartan(SimplyLacedGraph {
            vertices: vec![1, 2, 3, 4],
            edges: vec![[1, 2], [2, 3], [2, 4]],
            orientation: None,
        })
        .unwrap();
        assert_eq!(d4.coset_bases().unwrap().len(), 4);
    }

    #[test]
    fn window_covers_all_pairings() {
        let d = CartanDatum::type_a(2);
        let w = d.weight_window(-2, 2).unwrap();
        assert_eq!(w.len(), 25);
        let mut ps: Vec<Vec<i64>> = w.iter().map(|x| x.pairings().to_vec()).collect();
        ps.sort();
        ps.dedup();
        assert_eq!(ps.len(), 25);
    }

    #[test]
    fn gl_examples() {
        assert_eq!(gl_from_sl(2, 1, &[1]), Some(GlWeight { entries: vec![1, 0] }));
        assert_eq!(gl_from_sl(2, 0, &[1]), None);
        assert_eq!(gl_from_sl(3, 0, &[1, 1]), Some(GlWeight { entries: vec![1, 0, -1] }));
        assert_eq!(congruence_target(2, &[1]), 1);
        assert_eq!(congruence_target(3, &[1, 1]), 0);
        assert_eq!(congruence_target(2, &[0]), 0);
        assert_eq!(sl_from_gl(&GlWeight { entries: vec![1, 0] }), vec![1]);
        assert_eq!(sl_from_gl(&GlWeight { entries: vec![1, 0, -1] }), vec![1, 1]);
    }

    #[test]
    fn congruence_matches_brute_force_for_n3() {
        // direct search over small λ instead of the closed formula
        for mu in [[1i64, 0], [1, 1], [-2, 3], [0, -1]] {
            for d in -6..=6 {
                let mut found = false;
                for l3 in -20..=20 {
                    let l2 = l3 + mu[1];
                    let l1 = l2 + mu[0];
                    if l1 + l2 + l3 == d {
                        found = true;
                    }
                }
                assert_eq!(found, gl_from_sl(3, d, &mu).is_some(), "mu={mu:?} d={d}");
                assert_eq!(found, d.rem_euclid(3) == congruence_target(3, &mu));
            }
        }
    }

    #[test]
    fn gl_weight_coordinates_roundtrip() {
        let d = CartanDatum::gl(3).unwrap();
        for w in d.gl_window(-2, 2) {
            let g = w.gl_entries().unwrap();
            assert_eq!(w.pairings(), sl_from_gl(&GlWeight { entries: g.clone() }).as_slice());
            assert_eq!(d.gl_weight(&GlWeight { entries: g }), w);
        }
    }

    #[test]
    fn gl_shift_moves_one_box() {
        let d = CartanDatum::gl(3).unwrap();
        let w = d.gl_weight(&GlWeight { entries: vec![1, 0, 2] });
        assert_eq!(w.shift(1, 1).gl_entries().unwrap(), vec![1, 1, 1]);
    }
}
