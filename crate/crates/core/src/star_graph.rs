//! The (n,k)-star graph: node labels are k-permutations of `1..=n`, star
//! edges swap the head with an arm position, clique edges replace the head
//! with an unused symbol. Dense lexicographic ranking gives flat array
//! indices for the verification sweeps.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::permutation::{arm_split, Permutation};

/// Validated `(n, k)` pair with `1 <= k < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphParams {
    n: usize,
    k: usize,
}

impl GraphParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k < n, got n = {n}, k = {k}"
            )));
        }
        Ok(GraphParams { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Orientation and routing additionally need `k >= 3` and `n - k >= 2`.
    pub fn check_routable(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::InvalidParams(format!(
                "orientation needs k >= 3, got k = {}",
                self.k
            )));
        }
        if self.n - self.k < 2 {
            return Err(Error::InvalidParams(format!(
                "orientation needs n - k >= 2, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    /// Number of nodes, `n! / (n-k)!`.
    pub fn node_count(&self) -> Result<usize> {
        let mut count = 1usize;
        for f in (self.n - self.k + 1)..=self.n {
            count = count
                .checked_mul(f)
                .ok_or_else(|| Error::TooLarge(format!("node count of S_{{{},{}}}", self.n, self.k)))?;
        }
        Ok(count)
    }

    pub fn clique_size(&self) -> usize {
        self.n - self.k + 1
    }

    /// Falling factorials `fact[i] = (n-1-i)(n-2-i)...(n-k+1)`, the place
    /// values of the mixed-radix rank.
    fn place_values(&self) -> Vec<usize> {
        let mut fact = vec![1usize; self.k];
        for i in (0..self.k - 1).rev() {
            fact[i] = fact[i + 1] * (self.n - 1 - i);
        }
        fact
    }

    /// Lexicographic rank of a label among all k-permutations of `1..=n`.
    pub fn rank(&self, label: &NodeLabel) -> NodeId {
        debug_assert_eq!(label.symbols.len(), self.k);
        let fact = self.place_values();
        let mut used = vec![false; self.n + 1];
        let mut rank = 0usize;
        for (i, &s) in label.symbols.iter().enumerate() {
            let smaller = (1..s).filter(|&v| !used[v]).count();
            rank += smaller * fact[i];
            used[s] = true;
        }
        NodeId(rank)
    }

    /// Inverse of [`GraphParams::rank`].
    pub fn unrank(&self, id: NodeId) -> Result<NodeLabel> {
        let count = self.node_count()?;
        if id.0 >= count {
            return Err(Error::RankOutOfRange {
                rank: id.0,
                count,
            });
        }
        let fact = self.place_values();
        let mut rest = id.0;
        let mut used = vec![false; self.n + 1];
        let mut symbols = Vec::with_capacity(self.k);
        for f in fact {
            let digit = rest / f;
            rest %= f;
            let s = (1..=self.n)
                .filter(|&v| !used[v])
                .nth(digit)
                .expect("digit within radix");
            used[s] = true;
            symbols.push(s);
        }
        Ok(NodeLabel { symbols })
    }
}

/// Dense node index in `0..n!/(n-k)!`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// A node of the (n,k)-star graph: `k` distinct symbols from `1..=n`.
/// Position 1 is the head, positions `2..=k` the arm.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeLabel {
    symbols: Vec<usize>,
}

impl fmt::Debug for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.symbols {
            if !first {
                write!(f, "-")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl NodeLabel {
    pub fn new(symbols: Vec<usize>, params: &GraphParams) -> Result<Self> {
        if symbols.len() != params.k {
            return Err(Error::InvalidLabel(format!(
                "expected {} symbols, got {}",
                params.k,
                symbols.len()
            )));
        }
        let mut seen = vec![false; params.n + 1];
        for &s in &symbols {
            if s == 0 || s > params.n {
                return Err(Error::InvalidLabel(format!(
                    "symbol {s} out of range 1..={}",
                    params.n
                )));
            }
            if seen[s] {
                return Err(Error::InvalidLabel(format!("duplicate symbol {s}")));
            }
            seen[s] = true;
        }
        Ok(NodeLabel { symbols })
    }

    /// Parses a dash-separated label, e.g. `7-2-3-4-5`.
    pub fn parse(text: &str, params: &GraphParams) -> Result<Self> {
        let symbols = text
            .split('-')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::LabelParse(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        NodeLabel::new(symbols, params)
    }

    pub fn head(&self) -> usize {
        self.symbols[0]
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Arm values, positions `2..=k`.
    pub fn arm(&self) -> &[usize] {
        &self.symbols[1..]
    }

    /// Values at the left-half arm positions.
    pub fn left_half(&self) -> &[usize] {
        &self.symbols[1..arm_split(self.symbols.len())]
    }

    /// Values at the right-half arm positions.
    pub fn right_half(&self) -> &[usize] {
        &self.symbols[arm_split(self.symbols.len())..]
    }

    /// Tail-end values (the unused symbols) in ascending order.
    pub fn tail(&self, params: &GraphParams) -> Vec<usize> {
        let mut used = vec![false; params.n + 1];
        for &s in &self.symbols {
            used[s] = true;
        }
        (1..=params.n).filter(|&v| !used[v]).collect()
    }

    /// Extended permutation label: the k-permutation completed with the tail
    /// in ascending order (the class leader).
    pub fn extended(&self, params: &GraphParams) -> Permutation {
        let mut images = self.symbols.clone();
        images.extend(self.tail(params));
        Permutation::from_images(images).expect("label symbols are distinct")
    }

    /// Label given by the first `k` positions of an extended permutation.
    pub fn from_extended(p: &Permutation, k: usize) -> Self {
        NodeLabel {
            symbols: p.images()[..k].to_vec(),
        }
    }

    /// Star neighbour along edge `i`: head and position `i` exchanged.
    pub fn star_neighbor(&self, i: usize) -> Result<Self> {
        let k = self.symbols.len();
        if i < 2 || i > k {
            return Err(Error::PositionOutOfRange { position: i, n: k });
        }
        let mut symbols = self.symbols.clone();
        symbols.swap(0, i - 1);
        Ok(NodeLabel { symbols })
    }

    /// All `k-1` star neighbours, keyed by edge label.
    pub fn star_neighbors(&self) -> Vec<(usize, NodeLabel)> {
        (2..=self.symbols.len())
            .map(|i| (i, self.star_neighbor(i).expect("i in range")))
            .collect()
    }

    /// All `n-k` clique neighbours: head replaced by each unused symbol,
    /// in ascending head order.
    pub fn clique_neighbors(&self, params: &GraphParams) -> Vec<NodeLabel> {
        self.tail(params)
            .into_iter()
            .map(|x| {
                let mut symbols = self.symbols.clone();
                symbols[0] = x;
                NodeLabel { symbols }
            })
            .collect()
    }
}

/// Closed-form undirected diameter of the (n,k)-star graph.
pub fn undirected_diameter_formula(params: &GraphParams) -> usize {
    let (n, k) = (params.n, params.k);
    if 2 * k <= n {
        2 * k - 1
    } else {
        k + (n - 1) / 2
    }
}

/// Writes the undirected edge list: `<label> <label> <type>` per edge, the
/// lexicographically smaller endpoint first, sorted by (from, to) rank.
pub fn write_edge_list<W: Write>(params: &GraphParams, mut w: W) -> Result<()> {
    let count = params.node_count()?;
    for id in 0..count {
        let u = params.unrank(NodeId(id))?;
        let mut edges: Vec<(usize, NodeLabel, &str)> = Vec::new();
        for (_, v) in u.star_neighbors() {
            let r = params.rank(&v).0;
            if r > id {
                edges.push((r, v, "star"));
            }
        }
        for v in u.clique_neighbors(params) {
            let r = params.rank(&v).0;
            if r > id {
                edges.push((r, v, "clique"));
            }
        }
        edges.sort_by_key(|(r, _, _)| *r);
        for (_, v, kind) in edges {
            writeln!(w, "{u} {v} {kind}")?;
        }
    }
    Ok(())
}
