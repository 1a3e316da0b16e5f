//! Bit matrices over GF(2) and simple undirected graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Dense `rows × cols` matrix over GF(2), each row packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged bit matrix");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b != 0);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.words + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.words + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.words + j / WORD] ^= 1u64 << (j % WORD);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Elementwise sum over GF(2).
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dimension(format!(
                "xor of {}×{} and {}×{} bit matrices",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(Self {
            data,
            ..self.clone()
        })
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Copy into a larger zero matrix, keeping entries in the top-left block.
    pub fn embed(&self, rows: usize, cols: usize) -> Self {
        assert!(rows >= self.rows && cols >= self.cols);
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            out.data[i * out.words..i * out.words + self.words].copy_from_slice(self.row_words(i));
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}×{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Rank over GF(2) by Gaussian elimination on packed rows.
pub fn gf2_rank(m: &BitMatrix) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..m.rows).map(|i| m.row_words(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, mask) = (col / WORD, 1u64 << (col % WORD));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = std::mem::take(&mut rows[rank]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & mask != 0 {
                for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *a ^= b;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of the right null space `{x : Mx = 0}` over GF(2), one vector per
/// free column.
pub fn gf2_kernel(m: &BitMatrix) -> Vec<Vec<bool>> {
    let mut rows: Vec<Vec<u64>> = (0..m.rows).map(|i| m.row_words(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, mask) = (col / WORD, 1u64 << (col % WORD));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = std::mem::take(&mut rows[rank]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & mask != 0 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rows[rank] = pivot;
        pivots.push(col);
        rank += 1;
    }
    let bit = |r: usize, c: usize| (rows[r][c / WORD] >> (c % WORD)) & 1 == 1;
    (0..m.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![false; m.cols];
            v[free] = true;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = bit(r, free);
            }
            v
        })
        .collect()
}

/// Simple undirected graph on `n` vertices stored as its adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: BitMatrix,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: BitMatrix::zeros(n, n),
        }
    }

    /// Builds a graph from an edge list; self-loops and out-of-range vertices
    /// are rejected, repeated edges are idempotent.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            if i == j {
                return Err(Error::config(format!("self-loop on vertex {i}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    /// Checks symmetry and the zero diagonal.
    pub fn from_adjacency(adjacency: BitMatrix) -> Result<Self> {
        let n = adjacency.rows();
        if adjacency.cols() != n {
            return Err(Error::dimension("adjacency matrices are square".to_string()));
        }
        for i in 0..n {
            if adjacency.get(i, i) {
                return Err(Error::Invariant(format!("self-loop on vertex {i}")));
            }
            for j in 0..i {
                if adjacency.get(i, j) != adjacency.get(j, i) {
                    return Err(Error::Invariant(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(Self { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        self.adjacency.set(i, j, present);
        self.adjacency.set(j, i, present);
    }

    /// Toggles the entry `(i, j)` and its mirror.
    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.adjacency.toggle(i, j);
        self.adjacency.toggle(j, i);
    }

    /// Edges `(i, j)` with `i > j`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..self.n() {
            for j in 0..i {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.count_ones() / 2
    }

    /// Adds isolated vertices up to `n`.
    pub fn grow(&mut self, n: usize) {
        if n > self.n() {
            self.adjacency = self.adjacency.embed(n, n);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphRecord {
            n: self.n(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        })
        .expect("graph records serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: GraphRecord = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        let edges: Vec<_> = r.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(r.n, &edges)
    }

    /// The strict lower triangle, row-major, packed MSB first into bytes.
    pub fn to_packed(&self) -> Vec<u8> {
        let n = self.n();
        let mut out = vec![0u8; (n * n.saturating_sub(1) / 2).div_ceil(8)];
        let mut k = 0;
        for i in 1..n {
            for j in 0..i {
                if self.has_edge(i, j) {
                    out[k / 8] |= 0x80 >> (k % 8);
                }
                k += 1;
            }
        }
        out
    }

    pub fn from_packed(n: usize, bytes: &[u8]) -> Result<Self> {
        let slots = n * n.saturating_sub(1) / 2;
        if bytes.len() != slots.div_ceil(8) {
            return Err(Error::config(format!(
                "{} bytes do not hold the {slots} lower-triangle bits of a {n}-vertex graph",
                bytes.len()
            )));
        }
        let mut g = Self::empty(n);
        let mut k = 0;
        for i in 1..n {
            for j in 0..i {
                if bytes[k / 8] & (0x80 >> (k % 8)) != 0 {
                    g.set_edge(i, j, true);
                }
                k += 1;
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&BitMatrix::identity(3)), 3);
        assert_eq!(gf2_rank(&BitMatrix::zeros(4, 4)), 0);
        assert_eq!(gf2_rank(&BitMatrix::from_rows(&[&[0, 1], &[1, 0]])), 2);
        assert_eq!(gf2_rank(&BitMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])), 2);
        assert_eq!(gf2_rank(&BitMatrix::from_rows(&[&[1, 1, 1, 1]])), 1);
        assert_eq!(gf2_rank(&BitMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = BitMatrix::from_rows(&[&[0, 1, 1, 0], &[1, 0, 1, 0], &[1, 1, 0, 0], &[0, 0, 0, 0]]);
        let ker = gf2_kernel(&m);
        assert_eq!(ker.len(), 4 - gf2_rank(&m));
        for v in &ker {
            for i in 0..4 {
                let dot = (0..4).filter(|&j| m.get(i, j) && v[j]).count();
                assert_eq!(dot % 2, 0);
            }
        }
        assert!(gf2_kernel(&BitMatrix::identity(5)).is_empty());
    }

    #[test]
    fn rank_across_word_boundaries() {
        let n = 130;
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, (i * 7 + 3) % n, true);
            m.set(i, (i * 7 + 4) % n, true);
        }
        // each row is e_k + e_{k+1} on a cycle: rank n - 1
        assert_eq!(gf2_rank(&m), n - 1);
    }

    #[test]
    fn edges_and_symmetry() {
        let mut g = Graph::from_edges(4, &[(0, 1), (3, 2)]).unwrap();
        assert_eq!(g.edges(), vec![(1, 0), (3, 2)]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        g.toggle_edge(1, 0);
        assert_eq!(g.edges(), vec![(3, 2)]);
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 3)]).is_err());
        assert!(Graph::from_adjacency(BitMatrix::from_rows(&[&[0, 1], &[0, 0]])).is_err());
    }

    #[test]
    fn serialisation_round_trips() {
        let g = Graph::from_edges(6, &[(1, 0), (2, 1), (5, 3), (4, 0)]).unwrap();
        assert_eq!(g.to_json(), r#"{"n":6,"edges":[[1,0],[2,1],[4,0],[5,3]]}"#);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert_eq!(Graph::from_packed(6, &g.to_packed()).unwrap(), g);
        assert!(Graph::from_json(r#"{"n":2,"edges":[],"x":1}"#).is_err());
        assert!(Graph::from_packed(6, &[0]).is_err());
    }

    #[test]
    fn grow_keeps_edges() {
        let mut g = Graph::from_edges(3, &[(2, 0)]).unwrap();
        g.grow(70);
        assert_eq!(g.n(), 70);
        assert_eq!(g.edges(), vec![(2, 0)]);
        g.set_edge(69, 68, true);
        assert_eq!(g.edge_count(), 2);
    }
}
