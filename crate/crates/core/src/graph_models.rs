//! Ground-truth network generators. All return binary adjacency matrices.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Directedness {
    Directed,
    Undirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Kautz,
    Lattice,
    Tree,
    FullBipartite,
    PreferentialAttachment,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Kautz,
        ModelKind::Lattice,
        ModelKind::Tree,
        ModelKind::FullBipartite,
        ModelKind::PreferentialAttachment,
    ];

    /// Canonical token used on the command line and in result files.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Kautz => "kautz",
            ModelKind::Lattice => "lattice",
            ModelKind::Tree => "tree",
            ModelKind::FullBipartite => "bipartite",
            ModelKind::PreferentialAttachment => "pa",
        }
    }

    pub fn directedness(self) -> Directedness {
        match self {
            ModelKind::Kautz => Directedness::Directed,
            _ => Directedness::Undirected,
        }
    }

    /// Whether the generator draws random numbers.
    pub fn is_stochastic(self) -> bool {
        self == ModelKind::PreferentialAttachment
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown model `{s}`")))
    }
}

/// One ground-truth model with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// `m` is the out-degree (alphabet of `m + 1` symbols), `n` the label
    /// exponent (labels have `n + 1` symbols).
    Kautz { m: usize, n: usize },
    Lattice { rows: usize, cols: usize },
    Tree { n: usize, children: usize },
    FullBipartite { n1: usize, n2: usize },
    PreferentialAttachment { n: usize, power: f64, zero_appeal: f64, seed: u64 },
}

impl ModelSpec {
    /// The configuration used in the reference experiments.
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Kautz => ModelSpec::Kautz { m: 3, n: 3 },
            ModelKind::Lattice => ModelSpec::Lattice { rows: 10, cols: 10 },
            ModelKind::Tree => ModelSpec::Tree { n: 108, children: 3 },
            ModelKind::FullBipartite => ModelSpec::FullBipartite { n1: 54, n2: 54 },
            ModelKind::PreferentialAttachment => ModelSpec::PreferentialAttachment {
                n: 108,
                power: 1.0,
                zero_appeal: 1.0,
                seed: 0,
            },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Kautz { .. } => ModelKind::Kautz,
            ModelSpec::Lattice { .. } => ModelKind::Lattice,
            ModelSpec::Tree { .. } => ModelKind::Tree,
            ModelSpec::FullBipartite { .. } => ModelKind::FullBipartite,
            ModelSpec::PreferentialAttachment { .. } => ModelKind::PreferentialAttachment,
        }
    }

    pub fn directedness(&self) -> Directedness {
        self.kind().directedness()
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            ModelSpec::Kautz { m, n } => (m + 1) * m.pow(n as u32),
            ModelSpec::Lattice { rows, cols } => rows * cols,
            ModelSpec::Tree { n, .. } | ModelSpec::PreferentialAttachment { n, .. } => n,
            ModelSpec::FullBipartite { n1, n2 } => n1 + n2,
        }
    }

    /// Replace the random seed of a stochastic model; other models are
    /// returned unchanged.
    pub fn with_seed(&self, new_seed: u64) -> Self {
        match *self {
            ModelSpec::PreferentialAttachment { n, power, zero_appeal, .. } => {
                ModelSpec::PreferentialAttachment { n, power, zero_appeal, seed: new_seed }
            }
            ref other => other.clone(),
        }
    }

    pub fn build(&self) -> Result<AdjacencyMatrix> {
        match *self {
            ModelSpec::Kautz { m, n } => kautz(m, n),
            ModelSpec::Lattice { rows, cols } => {
                check_positive("lattice rows", rows)?;
                check_positive("lattice cols", cols)?;
                Ok(lattice(rows, cols))
            }
            ModelSpec::Tree { n, children } => {
                check_positive("tree vertices", n)?;
                check_positive("tree children", children)?;
                Ok(tree(n, children))
            }
            ModelSpec::FullBipartite { n1, n2 } => {
                check_positive("bipartite n1", n1)?;
                check_positive("bipartite n2", n2)?;
                Ok(full_bipartite(n1, n2))
            }
            ModelSpec::PreferentialAttachment { n, power, zero_appeal, seed } => {
                preferential_attachment(n, power, zero_appeal, seed)
            }
        }
    }
}

fn check_positive(what: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::invalid(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn connect(a: &mut AdjacencyMatrix, i: usize, j: usize) {
    a.set(i, j, 1.0);
    a.set(j, i, 1.0);
}

/// Kautz graph K(m, n): vertices are the strings of length `n + 1` over
/// `m + 1` symbols with no two equal consecutive symbols, in lexicographic
/// order; `s1..s(n+1) -> s2..s(n+1)x` for every `x != s(n+1)`.
pub fn kautz(m: usize, n: usize) -> Result<AdjacencyMatrix> {
    if m == 0 && n >= 1 {
        return Err(Error::invalid("Kautz graph with a one-symbol alphabet needs label exponent 0"));
    }
    let symbols = m + 1;
    let len = n + 1;

    let mut labels: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..symbols).rev().map(|s| vec![s]).collect();
    while let Some(prefix) = stack.pop() {
        if prefix.len() == len {
            labels.push(prefix);
            continue;
        }
        let last = *prefix.last().unwrap();
        for s in (0..symbols).rev().filter(|&s| s != last) {
            let mut next = prefix.clone();
            next.push(s);
            stack.push(next);
        }
    }

    let index: HashMap<&[usize], usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_slice(), i)).collect();
    let mut a = AdjacencyMatrix::zeros(labels.len());
    let mut successor = vec![0; len];
    for (i, label) in labels.iter().enumerate() {
        let last = label[len - 1];
        successor[..len - 1].copy_from_slice(&label[1..]);
        for x in (0..symbols).filter(|&x| x != last) {
            successor[len - 1] = x;
            a.set(i, index[successor.as_slice()], 1.0);
        }
    }
    Ok(a)
}

/// Non-periodic `rows x cols` grid, vertices in row-major order.
pub fn lattice(rows: usize, cols: usize) -> AdjacencyMatrix {
    let mut a = AdjacencyMatrix::zeros(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                connect(&mut a, v, v + 1);
            }
            if r + 1 < rows {
                connect(&mut a, v, v + cols);
            }
        }
    }
    a
}

/// Breadth-first tree: vertex `i` has children `children*i + 1 ..= children*i + children`
/// that are below `n`.
pub fn tree(n: usize, children: usize) -> AdjacencyMatrix {
    let mut a = AdjacencyMatrix::zeros(n);
    for child in 1..n {
        connect(&mut a, (child - 1) / children, child);
    }
    a
}

/// Complete bipartite graph with parts `0..n1` and `n1..n1+n2`.
pub fn full_bipartite(n1: usize, n2: usize) -> AdjacencyMatrix {
    let mut a = AdjacencyMatrix::zeros(n1 + n2);
    for i in 0..n1 {
        for j in n1..n1 + n2 {
            connect(&mut a, i, j);
        }
    }
    a
}

/// Barabási–Albert growth with one edge per new vertex. Each arrival links
/// to an existing vertex drawn with probability proportional to
/// `degree^power + zero_appeal`. Draws come from a ChaCha8 stream seeded
/// with `seed`.
pub fn preferential_attachment(
    n: usize,
    power: f64,
    zero_appeal: f64,
    seed: u64,
) -> Result<AdjacencyMatrix> {
    check_positive("preferential attachment vertices", n)?;
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::invalid(format!("attachment power {power} must be >= 0")));
    }
    if !(zero_appeal > 0.0 && zero_appeal.is_finite()) {
        return Err(Error::invalid(format!("zero appeal {zero_appeal} must be > 0")));
    }
    let mut rng = seed::rng(seed);
    let mut a = AdjacencyMatrix::zeros(n);
    let mut degree = vec![0usize; n];
    let mut weights = Vec::with_capacity(n);
    for new in 1..n {
        weights.clear();
        weights.extend(degree[..new].iter().map(|&d| (d as f64).powf(power) + zero_appeal));
        let total: f64 = weights.iter().sum();
        let mut target = rng.random::<f64>() * total;
        let mut chosen = new - 1;
        for (v, w) in weights.iter().enumerate() {
            if target < *w {
                chosen = v;
                break;
            }
            target -= w;
        }
        connect(&mut a, new, chosen);
        degree[new] += 1;
        degree[chosen] += 1;
    }
    Ok(a)
}
