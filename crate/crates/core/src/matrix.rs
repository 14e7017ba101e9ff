//! The branch-vertex incidence matrix of a normalized pair, its block normal
//! form, the entry-sum bound, and the associated bipartite graph.
//!
//! For a normalized pair (3-regular, no extremal vertices in `Γ_H`, `Γ_K` or
//! `Γ_{H∩K}`), rows are the `2h − 2` branch vertices of `Γ_H`, columns the
//! `2k − 2` branch vertices of `Γ_K`, and entry `(x, y)` is 1 exactly when
//! `(x, y)` is a branch vertex of `Γ_{H∩K}`.

use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::graph::LabeledGraph;
use crate::product::{CoreMap, StarClasses};
use crate::subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("input pair is not normalized: {0}")]
    Unnormalized(String),
    #[error("star classes do not match the matrix: {0}")]
    Inconsistent(String),
    #[error("entry-sum bound precondition fails: {0}")]
    BoundPrecondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
    /// Branch vertices of `Γ_H`, in vertex order.
    pub row_vertices: Vec<usize>,
    /// Branch vertices of `Γ_K`, in vertex order.
    pub col_vertices: Vec<usize>,
}

impl IncidenceMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<bool>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IncidenceMatrix { rows, cols, entries, row_vertices: (0..rows).collect(), col_vertices: (0..cols).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.cols + j]
    }

    pub fn entry_sum(&self) -> usize {
        self.entries.iter().filter(|&&x| x).count()
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| !self.get(i, j))
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| !self.get(i, j))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<&str> = (0..self.cols).map(|j| if self.get(i, j) { "1" } else { "0" }).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

fn check_normalized(name: &str, graph: &LabeledGraph) -> Result<(), MatrixError> {
    let stats = graph.stats();
    if stats.extremal_count > 0 {
        return Err(MatrixError::Unnormalized(format!("{name} has {} extremal vertices", stats.extremal_count)));
    }
    if stats.max_valence > 3 {
        return Err(MatrixError::Unnormalized(format!("{name} has a vertex of valence {}", stats.max_valence)));
    }
    Ok(())
}

/// Builds `M` from a normalized pair and the based core of their fiber
/// product.
pub fn incidence_matrix(h: &Subgroup, k: &Subgroup, meet: &CoreMap) -> Result<IncidenceMatrix, MatrixError> {
    check_normalized("Γ_H", h.graph())?;
    check_normalized("Γ_K", k.graph())?;
    if meet.graph.edge_count() == 0 {
        return Err(MatrixError::Unnormalized("the intersection is trivial".into()));
    }
    check_normalized("Γ_{H∩K}", &meet.graph)?;
    let row_vertices = h.graph().branch_vertices();
    let col_vertices = k.graph().branch_vertices();
    debug_assert_eq!(row_vertices.len(), 2 * h.rank() - 2);
    let (rows, cols) = (row_vertices.len(), col_vertices.len());
    let mut row_of = vec![usize::MAX; h.graph().vertex_count()];
    for (i, &x) in row_vertices.iter().enumerate() {
        row_of[x] = i;
    }
    let mut col_of = vec![usize::MAX; k.graph().vertex_count()];
    for (j, &y) in col_vertices.iter().enumerate() {
        col_of[y] = j;
    }
    let mut entries = vec![false; rows * cols];
    for v in meet.graph.branch_vertices() {
        let (i, j) = (row_of[meet.vertex_to_h[v]], col_of[meet.vertex_to_k[v]]);
        entries[i * cols + j] = true;
    }
    Ok(IncidenceMatrix { rows, cols, entries, row_vertices, col_vertices })
}

/// Rows and columns grouped by the class of their star. Classes with both
/// rows and columns give the blocks; rows (columns) whose class has no
/// column (row) go to the bottom (right).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    /// `(rows, cols)` of each block `M_1 .. M_ℓ`.
    pub blocks: Vec<(usize, usize)>,
    pub p: usize,
    pub q: usize,
    /// Row of `M` placed at each position.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    /// Star class of each block, then of each trailing row, then column.
    pub block_classes: Vec<usize>,
}

impl NormalForm {
    pub fn ell(&self) -> usize {
        self.blocks.len()
    }

    /// Entry-sum after filling every block with ones.
    pub fn filled_block_sum(&self) -> usize {
        self.blocks.iter().map(|(r, c)| r * c).sum()
    }

    /// Every way the permuted matrix can fail to have the block shape: ones
    /// outside the blocks, block rows or columns without a one, nonzero
    /// trailing rows or columns.
    pub fn shape_violations(&self, m: &IncidenceMatrix) -> Vec<String> {
        let mut out = Vec::new();
        let block_rows: usize = self.blocks.iter().map(|b| b.0).sum();
        let block_cols: usize = self.blocks.iter().map(|b| b.1).sum();
        let mut row_block = vec![usize::MAX; m.rows];
        let mut col_block = vec![usize::MAX; m.cols];
        let (mut r0, mut c0) = (0, 0);
        for (b, &(r, c)) in self.blocks.iter().enumerate() {
            for pos in r0..r0 + r {
                row_block[self.row_perm[pos]] = b;
            }
            for pos in c0..c0 + c {
                col_block[self.col_perm[pos]] = b;
            }
            r0 += r;
            c0 += c;
        }
        for (i, &rb) in row_block.iter().enumerate() {
            for (j, &cb) in col_block.iter().enumerate() {
                if m.get(i, j) && (rb == usize::MAX || rb != cb) {
                    out.push(format!("entry ({i}, {j}) lies outside the blocks"));
                }
            }
        }
        for &i in &self.row_perm[..block_rows] {
            if m.row_is_zero(i) {
                out.push(format!("block row {i} is zero"));
            }
        }
        for &j in &self.col_perm[..block_cols] {
            if m.col_is_zero(j) {
                out.push(format!("block column {j} is zero"));
            }
        }
        out
    }

    /// The matrix with rows and columns permuted, blocks separated by rules.
    pub fn render(&self, m: &IncidenceMatrix) -> String {
        let mut row_cuts = Vec::new();
        let mut col_cuts = Vec::new();
        let (mut r, mut c) = (0, 0);
        for &(br, bc) in &self.blocks {
            r += br;
            c += bc;
            row_cuts.push(r);
            col_cuts.push(c);
        }
        let interior = col_cuts.iter().filter(|&&c| c > 0 && c < m.cols).count();
        let width = (2 * m.cols + 2 * interior).saturating_sub(1);
        let mut out = String::new();
        for (pos, &i) in self.row_perm.iter().enumerate() {
            let mut line = String::new();
            for (cpos, &j) in self.col_perm.iter().enumerate() {
                if cpos > 0 && col_cuts.contains(&cpos) {
                    line.push_str("| ");
                }
                line.push_str(if m.get(i, j) { "1 " } else { "0 " });
            }
            writeln!(out, "{}", line.trim_end()).unwrap();
            if pos + 1 < m.rows && row_cuts.contains(&(pos + 1)) {
                writeln!(out, "{}", "-".repeat(width)).unwrap();
            }
        }
        out
    }
}

pub fn normal_form(m: &IncidenceMatrix, stars: &StarClasses) -> Result<NormalForm, MatrixError> {
    let class_of = |side: &[Option<usize>], v: usize, what: &str| {
        side.get(v)
            .copied()
            .flatten()
            .ok_or_else(|| MatrixError::Inconsistent(format!("{what} vertex {v} has no 3-valent star class")))
    };
    let row_class: Vec<usize> =
        m.row_vertices.iter().map(|&x| class_of(&stars.h, x, "row")).collect::<Result<_, _>>()?;
    let col_class: Vec<usize> =
        m.col_vertices.iter().map(|&y| class_of(&stars.k, y, "column")).collect::<Result<_, _>>()?;
    let classes = stars.count();
    let mut rows_in = vec![Vec::new(); classes];
    let mut cols_in = vec![Vec::new(); classes];
    for (i, &c) in row_class.iter().enumerate() {
        rows_in[c].push(i);
    }
    for (j, &c) in col_class.iter().enumerate() {
        cols_in[c].push(j);
    }
    let mut nf = NormalForm {
        blocks: Vec::new(),
        p: 0,
        q: 0,
        row_perm: Vec::with_capacity(m.rows),
        col_perm: Vec::with_capacity(m.cols),
        block_classes: Vec::new(),
    };
    for c in 0..classes {
        if !rows_in[c].is_empty() && !cols_in[c].is_empty() {
            nf.blocks.push((rows_in[c].len(), cols_in[c].len()));
            nf.row_perm.extend(&rows_in[c]);
            nf.col_perm.extend(&cols_in[c]);
            nf.block_classes.push(c);
        }
    }
    for c in 0..classes {
        if cols_in[c].is_empty() && !rows_in[c].is_empty() {
            nf.p += rows_in[c].len();
            nf.row_perm.extend(&rows_in[c]);
        }
    }
    for c in 0..classes {
        if rows_in[c].is_empty() && !cols_in[c].is_empty() {
            nf.q += cols_in[c].len();
            nf.col_perm.extend(&cols_in[c]);
        }
    }
    Ok(nf)
}

/// `(ℓ − 1) + (2h − 2 − p − (ℓ − 1)) · (2k − 2 − q − (ℓ − 1))`: the
/// entry-sum of one `m × n` block of ones, `ℓ − 1` single ones, and the
/// `p × q` zero corner.
pub fn entry_sum_bound(h: usize, k: usize, ell: usize, p: usize, q: usize) -> Result<usize, MatrixError> {
    if ell < 1 {
        return Err(MatrixError::BoundPrecondition("ℓ must be at least 1".into()));
    }
    if h < 1 || k < 1 {
        return Err(MatrixError::BoundPrecondition("ranks must be positive".into()));
    }
    let (rows, cols) = (2 * h - 2, 2 * k - 2);
    if rows < p + ell {
        return Err(MatrixError::BoundPrecondition(format!("2h − 2 = {rows} ≤ p + ℓ − 1 = {}", p + ell - 1)));
    }
    if cols < q + ell {
        return Err(MatrixError::BoundPrecondition(format!("2k − 2 = {cols} ≤ q + ℓ − 1 = {}", q + ell - 1)));
    }
    Ok((ell - 1) + (rows - p - (ell - 1)) * (cols - q - (ell - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BipartiteSummary {
    pub black_count: usize,
    pub white_count: usize,
    pub edge_count: usize,
    pub component_count: usize,
}

impl BipartiteSummary {
    /// `c = ℓ + p + q` and one edge per entry of `M`.
    pub fn agrees_with(&self, nf: &NormalForm, m: &IncidenceMatrix) -> bool {
        self.component_count == nf.ell() + nf.p + nf.q && self.edge_count == m.entry_sum()
    }
}

/// Black vertices for rows, white for columns, an edge per nonzero entry.
pub fn bipartite_delta(m: &IncidenceMatrix) -> BipartiteSummary {
    let mut sets = DisjointSets::new(m.rows + m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            if m.get(i, j) {
                sets.union(i, m.rows + j);
            }
        }
    }
    BipartiteSummary {
        black_count: m.rows,
        white_count: m.cols,
        edge_count: m.entry_sum(),
        component_count: sets.classes().0,
    }
}

/// Machine-readable summary of the matrix analysis of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    pub h: usize,
    pub k: usize,
    pub ell: usize,
    pub p: usize,
    pub q: usize,
    pub entry_sum: usize,
    pub bound: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{based_fiber_product, topological_pushout};
    use crate::word::Alphabet;

    fn sub(gens: &[&str]) -> Subgroup {
        Subgroup::parse(Alphabet::rank_two(), gens).unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(entry_sum_bound(2, 2, 1, 0, 0), Ok(4));
        assert_eq!(entry_sum_bound(3, 2, 2, 1, 0), Ok(3));
        assert!(matches!(entry_sum_bound(2, 2, 0, 0, 0), Err(MatrixError::BoundPrecondition(_))));
        assert!(matches!(entry_sum_bound(2, 2, 1, 2, 0), Err(MatrixError::BoundPrecondition(_))));
    }

    #[test]
    fn delta_examples() {
        let zero = IncidenceMatrix::from_entries(4, 2, vec![false; 8]);
        let d = bipartite_delta(&zero);
        assert_eq!((d.component_count, d.edge_count), (6, 0));
        let ones = IncidenceMatrix::from_entries(2, 2, vec![true; 4]);
        let d = bipartite_delta(&ones);
        assert_eq!((d.component_count, d.edge_count), (1, 4));
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let h = sub(&["a", "b"]);
        let meet = based_fiber_product(&h, &h).unwrap().based_core();
        assert!(matches!(incidence_matrix(&h, &h, &meet), Err(MatrixError::Unnormalized(_))));
        let (h, k) = (sub(&["a"]), sub(&["b"]));
        let meet = based_fiber_product(&h, &k).unwrap().based_core();
        assert!(matches!(incidence_matrix(&h, &k, &meet), Err(MatrixError::Unnormalized(_))));
    }

    #[test]
    fn cyclic_intersection_gives_the_zero_matrix() {
        let h = sub(&["a", "bab"]).three_regularize().unwrap();
        let k = sub(&["b", "aa"]).three_regularize().unwrap();
        let pair = crate::subgroup::normalize_nonextremal(&h, &k).unwrap();
        let fp = based_fiber_product(&pair.h, &pair.k).unwrap();
        let meet = fp.based_core();
        let m = incidence_matrix(&pair.h, &pair.k, &meet).unwrap();
        assert_eq!((m.rows(), m.cols(), m.entry_sum()), (2, 2, 0));
        let t = topological_pushout(&pair.h, &pair.k, &[meet]).unwrap();
        let nf = normal_form(&m, &t.star_classes(pair.h.graph(), pair.k.graph())).unwrap();
        assert_eq!((nf.ell(), nf.p, nf.q), (0, 2, 2));
    }

    #[test]
    fn self_pair_is_diagonal() {
        let h = sub(&["aab", "bAb", "ab"]).three_regularize().unwrap();
        let pair = crate::subgroup::normalize_nonextremal(&h, &h).unwrap();
        let meet = based_fiber_product(&pair.h, &pair.k).unwrap().based_core();
        let m = incidence_matrix(&pair.h, &pair.k, &meet).unwrap();
        let b = pair.h.graph().branch_vertices().len();
        assert_eq!(m.entry_sum(), b);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                assert_eq!(m.get(i, j), i == j);
            }
        }
        let t = topological_pushout(&pair.h, &pair.k, &[meet]).unwrap();
        let nf = normal_form(&m, &t.star_classes(pair.h.graph(), pair.k.graph())).unwrap();
        assert_eq!((nf.ell(), nf.p, nf.q), (b, 0, 0));
        assert!(nf.shape_violations(&m).is_empty());
        assert!(bipartite_delta(&m).agrees_with(&nf, &m));
    }

    #[test]
    fn render_shows_block_rules() {
        let m = IncidenceMatrix::from_entries(2, 2, vec![true, false, false, true]);
        let nf = NormalForm {
            blocks: vec![(1, 1), (1, 1)],
            p: 0,
            q: 0,
            row_perm: vec![0, 1],
            col_perm: vec![0, 1],
            block_classes: vec![0, 1],
        };
        assert_eq!(nf.render(&m), "1 | 0\n-----\n0 | 1\n");
        assert_eq!(m.render(), "1 0\n0 1\n");
        assert!(nf.shape_violations(&m).is_empty());
        let bad = IncidenceMatrix::from_entries(2, 2, vec![true, true, false, true]);
        assert_eq!(nf.shape_violations(&bad).len(), 1);
    }
}
