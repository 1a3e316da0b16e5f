//! Information-efficient fingerprints: the file is written into the adjacency
//! matrix of a graph state.
//!
//! Bit `k` of an `N`-bit file sets the edge at position `k` of the strict lower
//! triangle in row-major order: `(1,0), (2,0), (2,1), (3,0), …`. The position
//! of a bit does not depend on the vertex count, so growing a file only adds
//! vertices.

mod graph;

pub use graph::{gf2_kernel, gf2_rank, BitMatrix, Graph};

use crate::bits::FileBits;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Smallest `n` with `n(n-1)/2 ≥ N`, i.e. `⌈(√(8N+1)+1)/2⌉`.
pub fn qubits_for_file(n_bits: usize) -> Result<usize> {
    if n_bits == 0 {
        return Err(Error::config("an empty file has no graph encoding"));
    }
    let guess = (((8.0 * n_bits as f64 + 1.0).sqrt() + 1.0) / 2.0).ceil() as usize;
    // correct any rounding in the square root
    let mut n = guess.saturating_sub(2).max(2);
    while capacity(n) < n_bits {
        n += 1;
    }
    Ok(n)
}

/// `n(n-1)/2`, the number of edge slots of an `n`-vertex graph.
pub fn capacity(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Edge slot of file bit `k`.
pub fn bit_position(k: usize) -> (usize, usize) {
    let mut row = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as usize;
    while capacity(row) > k {
        row -= 1;
    }
    while capacity(row + 1) <= k {
        row += 1;
    }
    (row, k - capacity(row))
}

/// File bit stored at edge slot `(i, j)`, `i > j`.
pub fn bit_index(i: usize, j: usize) -> usize {
    debug_assert!(i > j);
    capacity(i) + j
}

/// Graph with one potential edge per file bit; unused slots stay empty.
pub fn file_to_graph(file: &FileBits) -> Result<Graph> {
    let mut g = Graph::empty(qubits_for_file(file.len())?);
    for (k, bit) in file.iter().enumerate() {
        if bit {
            let (i, j) = bit_position(k);
            g.set_edge(i, j, true);
        }
    }
    Ok(g)
}

/// Reads the first `n_bits` edge slots back into a file.
pub fn graph_to_file(graph: &Graph, n_bits: usize) -> Result<FileBits> {
    if n_bits > capacity(graph.n()) {
        return Err(Error::Capacity {
            what: "file bits in the graph",
            requested: n_bits,
            limit: capacity(graph.n()),
        });
    }
    let bits: Vec<bool> = (0..n_bits)
        .map(|k| {
            let (i, j) = bit_position(k);
            graph.has_edge(i, j)
        })
        .collect();
    Ok(FileBits::from_bools(&bits))
}

/// `H` on every vertex, then one `CZ(i, j)` per edge in row-major order.
pub fn graph_state_circuit(graph: &Graph) -> Circuit {
    let mut c = Circuit::new(graph.n().max(1));
    for q in 0..graph.n() {
        c.push(Gate::H(q)).expect("vertex indices are in range");
    }
    for (i, j) in graph.edges() {
        c.push(Gate::Cz(i, j)).expect("vertex indices are in range");
    }
    c
}

/// `log2 |⟨G1|G2⟩|²`, or `None` when the states are orthogonal.
///
/// With `D = A1 ⊕ A2` and `q(x) = Σ_{i>j} D_ij x_i x_j`, the overlap is
/// `2^-n Σ_x (-1)^q(x)`. Its square is `2^-rank(D)` when `q` vanishes on the
/// kernel of `D` and zero otherwise; `q` is linear on the kernel, so checking
/// a basis suffices.
pub fn graph_fidelity_log2(g1: &Graph, g2: &Graph) -> Result<Option<f64>> {
    if g1.n() != g2.n() {
        return Err(Error::dimension(format!(
            "graphs on {} and {} vertices; resize the smaller one first",
            g1.n(),
            g2.n()
        )));
    }
    let d = g1.adjacency().xor(g2.adjacency())?;
    let q = |v: &[bool]| {
        let mut parity = false;
        for (i, _) in v.iter().enumerate().filter(|(_, &x)| x) {
            for (j, &y) in v[..i].iter().enumerate() {
                parity ^= y && d.get(i, j);
            }
        }
        parity
    };
    if gf2_kernel(&d).iter().any(|v| q(v)) {
        return Ok(None);
    }
    Ok(Some(-(gf2_rank(&d) as f64)))
}

/// `|⟨G1|G2⟩|²`, either `2^-rank(A1 ⊕ A2)` or `0`.
pub fn graph_fidelity(g1: &Graph, g2: &Graph) -> Result<f64> {
    Ok(graph_fidelity_log2(g1, g2)?.map_or(0.0, f64::exp2))
}

/// A graph-state fingerprint with the recorded file length.
///
/// Edits touch only the edge slots of the bits they change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFingerprint {
    graph: Graph,
    file_length: usize,
}

impl GraphFingerprint {
    pub fn encode(file: &FileBits) -> Result<Self> {
        Ok(Self {
            graph: file_to_graph(file)?,
            file_length: file.len(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn file_length(&self) -> usize {
        self.file_length
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn decode(&self) -> FileBits {
        graph_to_file(&self.graph, self.file_length).expect("file length fits the graph")
    }

    fn check(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.file_length {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.file_length,
            });
        }
        Ok(bit_position(index))
    }

    pub fn bit(&self, index: usize) -> Result<bool> {
        let (i, j) = self.check(index)?;
        Ok(self.graph.has_edge(i, j))
    }

    /// Toggles the single edge slot of bit `index`, i.e. one `CZ`, and
    /// returns it.
    pub fn flip_bit(&mut self, index: usize) -> Result<(usize, usize)> {
        let (i, j) = self.check(index)?;
        self.graph.toggle_edge(i, j);
        Ok((i, j))
    }

    /// Flips bit `index` only if it differs from `value`; returns the toggled
    /// slot, if any.
    pub fn write_bit(&mut self, index: usize, value: bool) -> Result<Option<(usize, usize)>> {
        if self.bit(index)? == value {
            return Ok(None);
        }
        self.flip_bit(index).map(Some)
    }

    /// Extends the file with zero bits, adding vertices as needed.
    pub fn resize(&mut self, new_length: usize) -> Result<()> {
        if new_length < self.file_length {
            return Err(Error::config(format!(
                "cannot shrink a {}-bit fingerprint to {new_length} bits",
                self.file_length
            )));
        }
        self.graph.grow(qubits_for_file(new_length)?);
        self.file_length = new_length;
        Ok(())
    }

    /// Fidelity with another fingerprint, `0` when the recorded lengths differ.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.file_length != other.file_length {
            return Ok(0.0);
        }
        graph_fidelity(&self.graph, &other.graph)
    }
}
