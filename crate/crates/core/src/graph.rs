//! Undirected weighted graphs, Laplacian spectral analysis, and the graph
//! Fourier transform.
//!
//! A [`Graph`] is validated on construction (symmetry, nonnegative weights,
//! zero diagonal, and connectivity when it plays the communication role).
//! A [`SpectralBasis`] holds the orthonormal Laplacian eigenvectors in
//! ascending eigenvalue order with a deterministic sign convention, so
//! downstream selection and fixtures are reproducible across runs.
//! A [`FrequencySupport`] restricts the basis to a set of frequency indices
//! and exposes the per-node regression rows used by the adaptive recursion.

use nalgebra::{DMatrix, DVector};
use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Which task a graph topology serves. The same topology may be used for
/// both; the communication role additionally requires connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphRole {
    Processing,
    Communication,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("adjacency matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("adjacency matrix is not symmetric at ({i},{j})")]
    NonSymmetric { i: usize, j: usize },
    #[error("negative weight {weight} at ({i},{j})")]
    NegativeWeight { i: usize, j: usize, weight: f64 },
    #[error("non-finite weight at ({i},{j})")]
    NonFinite { i: usize, j: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("node index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigendecomposition failure: {0}")]
    EigendecompositionFailure(String),
    #[error("frequency support is empty")]
    EmptySupport,
    #[error("duplicate frequency index {0}")]
    DuplicateIndex(usize),
    #[error("edge list parse error at line {line}: {reason}")]
    EdgeListParse { line: usize, reason: String },
    #[error("duplicate edge ({i},{j}) in edge list")]
    DuplicateEdge { i: usize, j: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected weighted graph, immutable after construction.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: DMatrix<f64>,
    role: GraphRole,
    neighbors: Vec<Vec<usize>>,
    connected: bool,
}

impl Graph {
    /// Validate an adjacency matrix and build a graph.
    ///
    /// Symmetry is required, not repaired: an asymmetric input is rejected.
    /// A communication graph must additionally be connected.
    pub fn from_adjacency(adjacency: DMatrix<f64>, role: GraphRole) -> Result<Self, GraphError> {
        let (rows, cols) = adjacency.shape();
        if rows != cols {
            return Err(GraphError::NonSquare { rows, cols });
        }
        let n = rows;
        for i in 0..n {
            if adjacency[(i, i)] != 0.0 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in 0..n {
                let w = adjacency[(i, j)];
                if !w.is_finite() {
                    return Err(GraphError::NonFinite { i, j });
                }
                if w < 0.0 {
                    return Err(GraphError::NegativeWeight { i, j, weight: w });
                }
                if adjacency[(i, j)] != adjacency[(j, i)] {
                    return Err(GraphError::NonSymmetric { i, j });
                }
            }
        }
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && adjacency[(i, j)] > 0.0).collect())
            .collect();
        let connected = is_connected(&neighbors);
        if role == GraphRole::Communication && !connected {
            return Err(GraphError::Disconnected);
        }
        Ok(Self { adjacency, role, neighbors, connected })
    }

    /// Re-validate this topology under a different role.
    pub fn with_role(&self, role: GraphRole) -> Result<Self, GraphError> {
        Graph::from_adjacency(self.adjacency.clone(), role)
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn role(&self) -> GraphRole {
        self.role
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    /// Neighbors of `i` (ascending, excluding `i` itself).
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Number of neighbors of `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Weighted degree k_i = sum_j a_ij.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency.row(i).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Laplacian L = K - A with K the diagonal weighted-degree matrix.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n_nodes();
        let mut l = -self.adjacency.clone();
        for i in 0..n {
            l[(i, i)] = self.weighted_degree(i);
        }
        l
    }

    /// Hop counts from `node` to every vertex by BFS; `usize::MAX` marks
    /// unreachable vertices.
    fn hop_distances(&self, node: usize) -> Vec<usize> {
        let n = self.n_nodes();
        let mut dist = vec![usize::MAX; n];
        dist[node] = 0;
        let mut queue = VecDeque::from([node]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Max hop count from `node` to any other vertex.
    pub fn eccentricity(&self, node: usize) -> Result<usize, GraphError> {
        let n = self.n_nodes();
        if node >= n {
            return Err(GraphError::IndexOutOfRange { index: node, n });
        }
        if !self.connected {
            return Err(GraphError::Disconnected);
        }
        Ok(*self.hop_distances(node).iter().max().unwrap())
    }

    /// Unweighted hop-count diameter.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        if !self.connected {
            return Err(GraphError::Disconnected);
        }
        (0..self.n_nodes())
            .map(|i| self.eccentricity(i))
            .try_fold(0, |acc, e| e.map(|e| acc.max(e)))
    }

    /// Parse an edge-list: one `i j weight` triple per line, 0-based indices,
    /// `#` comments and blank lines ignored. Each undirected edge must appear
    /// exactly once; the loader mirrors it.
    pub fn from_edge_list_str(text: &str, role: GraphRole) -> Result<Self, GraphError> {
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        let mut max_node = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse = |tok: Option<&str>, what: &str| -> Result<String, GraphError> {
                tok.map(str::to_owned).ok_or_else(|| GraphError::EdgeListParse {
                    line: lineno + 1,
                    reason: format!("missing {what}"),
                })
            };
            let mut it = line.split_whitespace();
            let i: usize = parse(it.next(), "source index")?
                .parse()
                .map_err(|e| GraphError::EdgeListParse { line: lineno + 1, reason: format!("bad source index: {e}") })?;
            let j: usize = parse(it.next(), "target index")?
                .parse()
                .map_err(|e| GraphError::EdgeListParse { line: lineno + 1, reason: format!("bad target index: {e}") })?;
            let w: f64 = parse(it.next(), "weight")?
                .parse()
                .map_err(|e| GraphError::EdgeListParse { line: lineno + 1, reason: format!("bad weight: {e}") })?;
            if it.next().is_some() {
                return Err(GraphError::EdgeListParse { line: lineno + 1, reason: "trailing tokens".into() });
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(GraphError::EdgeListParse {
                    line: lineno + 1,
                    reason: format!("weight must be finite and positive, got {w}"),
                });
            }
            max_node = max_node.max(i).max(j);
            edges.push((i, j, w));
        }
        let n = max_node + 1;
        let mut adj = DMatrix::zeros(n, n);
        for (i, j, w) in edges {
            if adj[(i, j)] != 0.0 {
                return Err(GraphError::DuplicateEdge { i, j });
            }
            adj[(i, j)] = w;
            adj[(j, i)] = w;
        }
        Graph::from_adjacency(adj, role)
    }

    pub fn from_edge_list_path(path: impl AsRef<Path>, role: GraphRole) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path)?;
        Graph::from_edge_list_str(&text, role)
    }

    /// Render the upper triangle as an edge list (inverse of the loader).
    pub fn to_edge_list_string(&self) -> String {
        let n = self.n_nodes();
        let mut out = String::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.adjacency[(i, j)];
                if w > 0.0 {
                    writeln!(out, "{i} {j} {w}").unwrap();
                }
            }
        }
        out
    }
}

fn is_connected(neighbors: &[Vec<usize>]) -> bool {
    let n = neighbors.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &neighbors[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Orthonormal Laplacian eigenvectors with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    laplacian: DMatrix<f64>,
}

impl SpectralBasis {
    /// Eigendecompose the Laplacian of `g`.
    ///
    /// Eigenvalues are sorted ascending and clamped to zero when within
    /// -1e-10 of it. Each eigenvector is oriented so its entry of largest
    /// magnitude is positive (ties broken by lowest index).
    pub fn new(g: &Graph) -> Result<Self, GraphError> {
        let laplacian = g.laplacian();
        let n = g.n_nodes();
        let eigen = nalgebra::SymmetricEigen::try_new(laplacian.clone(), f64::EPSILON, 100_000)
            .ok_or_else(|| GraphError::EigendecompositionFailure("solver did not converge".into()))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));

        let mut eigenvalues = DVector::zeros(n);
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (k, &src) in order.iter().enumerate() {
            let mut lambda = eigen.eigenvalues[src];
            if lambda < 0.0 && lambda >= -1e-10 {
                lambda = 0.0;
            }
            eigenvalues[k] = lambda;
            let mut col = eigen.eigenvectors.column(src).clone_owned();
            orient(&mut col);
            eigenvectors.set_column(k, &col);
        }

        let basis = Self { eigenvalues, eigenvectors, laplacian };
        basis.validate()?;
        Ok(basis)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.eigenvalues.len();
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let ortho_dev = (gram - DMatrix::identity(n, n)).abs().max();
        if ortho_dev > 1e-10 {
            return Err(GraphError::EigendecompositionFailure(format!(
                "eigenvectors not orthonormal (max deviation {ortho_dev:.3e})"
            )));
        }
        let resid = (&self.laplacian * &self.eigenvectors
            - &self.eigenvectors * DMatrix::from_diagonal(&self.eigenvalues))
            .abs()
            .max();
        if resid > 1e-8 {
            return Err(GraphError::EigendecompositionFailure(format!(
                "eigenpair residual too large ({resid:.3e})"
            )));
        }
        if self.eigenvalues[0].abs() > 1e-10 || self.eigenvalues.iter().any(|&l| l < 0.0) {
            return Err(GraphError::EigendecompositionFailure(
                "Laplacian spectrum not nonnegative with a zero eigenvalue".into(),
            ));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues of L.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors, one per column, matching `eigenvalues`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    /// The second-smallest Laplacian eigenvalue; `None` for a single node.
    pub fn algebraic_connectivity(&self) -> Option<f64> {
        (self.n_nodes() >= 2).then(|| self.eigenvalues[1])
    }

    /// Graph Fourier transform s = U^T x.
    pub fn gft(&self, x: &DVector<f64>) -> Result<DVector<f64>, GraphError> {
        if x.len() != self.n_nodes() {
            return Err(GraphError::DimensionMismatch { expected: self.n_nodes(), got: x.len() });
        }
        Ok(self.eigenvectors.transpose() * x)
    }

    /// Inverse transform x = U s over the full spectrum.
    pub fn igft(&self, s: &DVector<f64>) -> Result<DVector<f64>, GraphError> {
        if s.len() != self.n_nodes() {
            return Err(GraphError::DimensionMismatch { expected: self.n_nodes(), got: s.len() });
        }
        Ok(&self.eigenvectors * s)
    }
}

/// Orient an eigenvector: the entry of largest magnitude is made positive,
/// ties broken by lowest index.
fn orient(col: &mut DVector<f64>) {
    let mut best = 0usize;
    for k in 1..col.len() {
        if col[k].abs() > col[best].abs() {
            best = k;
        }
    }
    if col[best] < 0.0 {
        *col = -&*col;
    }
}

/// A set of frequency indices F together with the selected basis columns U_F.
#[derive(Debug, Clone)]
pub struct FrequencySupport {
    indices: Vec<usize>,
    columns: DMatrix<f64>,
}

impl FrequencySupport {
    /// Select the given frequency indices (deduplicated order-insensitively;
    /// stored ascending).
    pub fn new(basis: &SpectralBasis, indices: &[usize]) -> Result<Self, GraphError> {
        if indices.is_empty() {
            return Err(GraphError::EmptySupport);
        }
        let n = basis.n_nodes();
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateIndex(pair[0]));
            }
        }
        if let Some(&bad) = sorted.iter().find(|&&f| f >= n) {
            return Err(GraphError::IndexOutOfRange { index: bad, n });
        }
        let mut columns = DMatrix::zeros(n, sorted.len());
        for (k, &f) in sorted.iter().enumerate() {
            columns.set_column(k, &basis.eigenvectors().column(f));
        }
        Ok(Self { indices: sorted, columns })
    }

    /// The `bandwidth` lowest frequencies {0, ..., bandwidth-1}.
    pub fn lowest(basis: &SpectralBasis, bandwidth: usize) -> Result<Self, GraphError> {
        let indices: Vec<usize> = (0..bandwidth).collect();
        Self::new(basis, &indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// |F|, the signal bandwidth.
    pub fn bandwidth(&self) -> usize {
        self.indices.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.columns.nrows()
    }

    /// U_F, the selected eigenvector columns (n x |F|).
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    /// Regression row c_i of node `i` (the i-th row of U_F, as a column).
    pub fn row(&self, node: usize) -> DVector<f64> {
        self.columns.row(node).transpose()
    }

    /// Synthesize the bandlimited signal x = U_F s.
    pub fn synthesize(&self, s: &DVector<f64>) -> Result<DVector<f64>, GraphError> {
        if s.len() != self.bandwidth() {
            return Err(GraphError::DimensionMismatch { expected: self.bandwidth(), got: s.len() });
        }
        Ok(&self.columns * s)
    }

    /// Analyze a vertex signal onto the support: U_F^T x.
    pub fn analyze(&self, x: &DVector<f64>) -> Result<DVector<f64>, GraphError> {
        if x.len() != self.n_nodes() {
            return Err(GraphError::DimensionMismatch { expected: self.n_nodes(), got: x.len() });
        }
        Ok(self.columns.transpose() * x)
    }
}

/// Vertex-limiting operator D_S = diag(1_S).
pub fn vertex_limit(set: &[usize], n: usize) -> Result<DMatrix<f64>, GraphError> {
    let mut d = DMatrix::zeros(n, n);
    for &i in set {
        if i >= n {
            return Err(GraphError::IndexOutOfRange { index: i, n });
        }
        d[(i, i)] = 1.0;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node_edge() -> Graph {
        let adj = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        Graph::from_adjacency(adj, GraphRole::Processing).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let adj = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
        Graph::from_adjacency(adj, GraphRole::Communication).unwrap()
    }

    fn path(n: usize) -> Graph {
        let adj = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        Graph::from_adjacency(adj, GraphRole::Communication).unwrap()
    }

    #[test]
    fn two_node_graph_has_unit_degrees() {
        let g = two_node_edge();
        assert_eq!(g.weighted_degree(0), 1.0);
        assert_eq!(g.weighted_degree(1), 1.0);
        assert_eq!(g.degree(0), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn asymmetric_adjacency_rejected() {
        let adj = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let err = Graph::from_adjacency(adj, GraphRole::Processing).unwrap_err();
        assert!(matches!(err, GraphError::NonSymmetric { .. }));
    }

    #[test]
    fn disconnected_communication_graph_rejected() {
        // two disjoint edges: 0-1, 2-3
        let mut adj = DMatrix::zeros(4, 4);
        adj[(0, 1)] = 1.0;
        adj[(1, 0)] = 1.0;
        adj[(2, 3)] = 1.0;
        adj[(3, 2)] = 1.0;
        let err = Graph::from_adjacency(adj.clone(), GraphRole::Communication).unwrap_err();
        assert!(matches!(err, GraphError::Disconnected));
        // same topology is fine for processing, connectivity recorded
        let g = Graph::from_adjacency(adj, GraphRole::Processing).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn negative_weight_rejected() {
        let adj = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let err = Graph::from_adjacency(adj, GraphRole::Processing).unwrap_err();
        assert!(matches!(err, GraphError::NegativeWeight { .. }));
    }

    #[test]
    fn path2_spectrum() {
        let basis = SpectralBasis::new(&two_node_edge()).unwrap();
        let inv = 1.0 / 2.0_f64.sqrt();
        assert!(basis.eigenvalues()[0].abs() < 1e-12);
        assert!((basis.eigenvalues()[1] - 2.0).abs() < 1e-12);
        let u = basis.eigenvectors();
        assert!((u[(0, 0)] - inv).abs() < 1e-12 && (u[(1, 0)] - inv).abs() < 1e-12);
        assert!((u[(0, 1)] - inv).abs() < 1e-12 && (u[(1, 1)] + inv).abs() < 1e-12);
        assert_eq!(basis.algebraic_connectivity(), Some(basis.eigenvalues()[1]));
    }

    #[test]
    fn complete3_eigenvalues() {
        // det(L - x I) for L of K3 gives roots {0, 3, 3}
        let basis = SpectralBasis::new(&complete(3)).unwrap();
        let ev = basis.eigenvalues();
        assert!(ev[0].abs() < 1e-10);
        assert!((ev[1] - 3.0).abs() < 1e-10);
        assert!((ev[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gft_of_eigenvector_is_canonical() {
        let g = path(5);
        let basis = SpectralBasis::new(&g).unwrap();
        for k in 0..5 {
            let x = basis.eigenvectors().column(k).clone_owned();
            let s = basis.gft(&x).unwrap();
            for j in 0..5 {
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((s[j] - expect).abs() < 1e-10, "k={k} j={j}");
            }
        }
        let zero = DVector::zeros(5);
        assert_eq!(basis.gft(&zero).unwrap(), zero);
    }

    #[test]
    fn gft_roundtrip_full_support() {
        let g = path(6);
        let basis = SpectralBasis::new(&g).unwrap();
        let full = FrequencySupport::lowest(&basis, 6).unwrap();
        let x = DVector::from_fn(6, |i, _| (i as f64 * 0.7).sin() + 0.3);
        let back = full.synthesize(&basis.gft(&x).unwrap()).unwrap();
        assert!((back - &x).abs().max() < 1e-10);
    }

    #[test]
    fn synthesize_examples() {
        let basis = SpectralBasis::new(&path(4)).unwrap();
        let support = FrequencySupport::new(&basis, &[2]).unwrap();
        let x = support.synthesize(&DVector::from_element(1, 1.0)).unwrap();
        assert!((x - basis.eigenvectors().column(2)).abs().max() < 1e-12);

        let zero = support.synthesize(&DVector::zeros(1)).unwrap();
        assert_eq!(zero, DVector::zeros(4));

        let support = FrequencySupport::lowest(&basis, 3).unwrap();
        let s = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let x = support.synthesize(&s).unwrap();
        assert!((x.norm() - s.norm()).abs() < 1e-10);
        assert!(support.synthesize(&DVector::zeros(2)).is_err());
    }

    #[test]
    fn support_columns_orthonormal() {
        let basis = SpectralBasis::new(&complete(5)).unwrap();
        let support = FrequencySupport::new(&basis, &[4, 0, 2]).unwrap();
        assert_eq!(support.indices(), &[0, 2, 4]);
        let gram = support.columns().transpose() * support.columns();
        assert!((gram - DMatrix::identity(3, 3)).abs().max() < 1e-10);
    }

    #[test]
    fn vertex_limit_examples() {
        let all = vertex_limit(&[0, 1, 2], 3).unwrap();
        assert_eq!(all, DMatrix::identity(3, 3));
        let none = vertex_limit(&[], 3).unwrap();
        assert_eq!(none, DMatrix::zeros(3, 3));
        let s = vertex_limit(&[0, 2], 4).unwrap();
        let sc = vertex_limit(&[1, 3], 4).unwrap();
        assert_eq!(s.clone() + sc, DMatrix::identity(4, 4));
        // projection idempotence, exactly
        assert_eq!(&s * &s, s);
        assert!(matches!(vertex_limit(&[4], 4), Err(GraphError::IndexOutOfRange { .. })));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(complete(3).diameter().unwrap(), 1);
        assert_eq!(path(4).diameter().unwrap(), 3);
        let single = Graph::from_adjacency(DMatrix::zeros(1, 1), GraphRole::Communication).unwrap();
        assert_eq!(single.diameter().unwrap(), 0);
        assert_eq!(path(5).eccentricity(2).unwrap(), 2);
    }

    #[test]
    fn edge_list_roundtrip_and_validation() {
        let text = "# demo graph\n0 1 1.0\n1 2 0.5\n\n2 3 2.0 # inline comment\n";
        let g = Graph::from_edge_list_str(text, GraphRole::Communication).unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.adjacency()[(1, 2)], 0.5);
        assert_eq!(g.adjacency()[(2, 1)], 0.5);

        let again = Graph::from_edge_list_str(&g.to_edge_list_string(), GraphRole::Communication).unwrap();
        assert_eq!(again.adjacency(), g.adjacency());

        let dup = "0 1 1.0\n1 0 2.0\n";
        assert!(matches!(
            Graph::from_edge_list_str(dup, GraphRole::Processing),
            Err(GraphError::DuplicateEdge { .. })
        ));
        let bad = "0 1\n";
        assert!(matches!(
            Graph::from_edge_list_str(bad, GraphRole::Processing),
            Err(GraphError::EdgeListParse { line: 1, .. })
        ));
    }
}
