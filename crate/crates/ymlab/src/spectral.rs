//! Truncated Fourier operator algebra on the circle.
//!
//! Functions on S¹ with values in a fiber (the Lie algebra, or a form slot
//! tensored with it) are represented by their Fourier coefficients on modes
//! n ∈ {−N, …, N}; operators are dense complex matrices over mode⊗fiber
//! indices, grouped into labelled fiber blocks. The mode index is the slow
//! one: index = mode_index·fiber_dim + fiber_index inside each block.
//!
//! The buffer width M insulates interior modes |n| ≤ N−M from truncation:
//! products of band-limited coefficient data stay exact there, and the
//! smoothing diagnostic [`order_norm`] measures operators on interior modes
//! only.

use crate::linalg::{self, c64, dagger};
use crate::{C64, CMat, CVec, Error, Result};
use ndarray::Array1;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Mode cutoff and interior buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeSpace {
    /// Modes run over n ∈ {−n_max, …, n_max}.
    pub n_max: usize,
    /// Interior modes are |n| ≤ n_max − buffer.
    pub buffer: usize,
}

impl ModeSpace {
    pub fn new(n_max: usize, buffer: usize) -> Result<Self> {
        if n_max < 4 {
            return Err(Error::Config(format!("mode cutoff N = {n_max} < 4")));
        }
        if buffer < 1 || buffer >= n_max {
            return Err(Error::Config(format!(
                "buffer M = {buffer} outside 1 ≤ M < N = {n_max}"
            )));
        }
        Ok(ModeSpace { n_max, buffer })
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn mode_at(&self, idx: usize) -> i64 {
        idx as i64 - self.n_max as i64
    }

    pub fn index_of(&self, n: i64) -> usize {
        (n + self.n_max as i64) as usize
    }

    pub fn is_interior(&self, n: i64) -> bool {
        n.unsigned_abs() as usize <= self.n_max - self.buffer
    }
}

/// One labelled fiber block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub fiber_dim: usize,
}

/// An ordered stack of fiber blocks over a common mode space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub modes: ModeSpace,
    pub blocks: Vec<Block>,
}

impl Space {
    pub fn new(modes: ModeSpace, blocks: Vec<(&str, usize)>) -> Self {
        Space {
            modes,
            blocks: blocks
                .into_iter()
                .map(|(label, fiber_dim)| Block { label: label.into(), fiber_dim })
                .collect(),
        }
    }

    pub fn single(modes: ModeSpace, label: &str, fiber_dim: usize) -> Self {
        Self::new(modes, vec![(label, fiber_dim)])
    }

    pub fn dim(&self) -> usize {
        self.modes.n_modes() * self.blocks.iter().map(|b| b.fiber_dim).sum::<usize>()
    }

    pub fn block_dim(&self, b: usize) -> usize {
        self.modes.n_modes() * self.blocks[b].fiber_dim
    }

    pub fn block_offset(&self, b: usize) -> usize {
        (0..b).map(|i| self.block_dim(i)).sum()
    }

    pub fn block_index(&self, label: &str) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| b.label == label)
            .ok_or_else(|| Error::Config(format!("unknown block label '{label}'")))
    }

    /// Flat index of (block, mode, fiber component).
    pub fn idx(&self, block: usize, n: i64, fiber: usize) -> usize {
        self.block_offset(block)
            + self.modes.index_of(n) * self.blocks[block].fiber_dim
            + fiber
    }

    /// Stack two spaces over the same mode grid.
    pub fn stacked(&self, other: &Space) -> Space {
        assert_eq!(self.modes, other.modes);
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        Space { modes: self.modes, blocks }
    }

    /// Sobolev weights (1+n²)^{s/2} per index.
    pub fn sobolev_weights(&self, s: f64) -> Array1<f64> {
        let mut w = Array1::zeros(self.dim());
        for (b, blk) in self.blocks.iter().enumerate() {
            for mi in 0..self.modes.n_modes() {
                let n = self.modes.mode_at(mi) as f64;
                let val = (1.0 + n * n).powf(s / 2.0);
                for f in 0..blk.fiber_dim {
                    w[self.block_offset(b) + mi * blk.fiber_dim + f] = val;
                }
            }
        }
        w
    }

    /// 1 on interior-mode indices, 0 on the truncation buffer.
    pub fn interior_mask(&self) -> Array1<f64> {
        let mut w = Array1::zeros(self.dim());
        for (b, blk) in self.blocks.iter().enumerate() {
            for mi in 0..self.modes.n_modes() {
                let val = if self.modes.is_interior(self.modes.mode_at(mi)) { 1.0 } else { 0.0 };
                for f in 0..blk.fiber_dim {
                    w[self.block_offset(b) + mi * blk.fiber_dim + f] = val;
                }
            }
        }
        w
    }
}

/// Dense operator between two block spaces.
#[derive(Debug, Clone)]
pub struct Op {
    pub rows: Space,
    pub cols: Space,
    pub m: CMat,
}

impl Op {
    pub fn zeros(rows: &Space, cols: &Space) -> Op {
        Op { rows: rows.clone(), cols: cols.clone(), m: CMat::zeros((rows.dim(), cols.dim())) }
    }

    pub fn identity(space: &Space) -> Op {
        Op { rows: space.clone(), cols: space.clone(), m: linalg::eye(space.dim()) }
    }

    pub fn from_matrix(rows: &Space, cols: &Space, m: CMat) -> Op {
        assert_eq!(m.dim(), (rows.dim(), cols.dim()), "matrix shape does not match spaces");
        Op { rows: rows.clone(), cols: cols.clone(), m }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Owned copy of the (bi, bj) fiber-block submatrix.
    pub fn block(&self, bi: usize, bj: usize) -> CMat {
        let (ro, rd) = (self.rows.block_offset(bi), self.rows.block_dim(bi));
        let (co, cd) = (self.cols.block_offset(bj), self.cols.block_dim(bj));
        self.m.slice(ndarray::s![ro..ro + rd, co..co + cd]).to_owned()
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, sub: &CMat) {
        let (ro, rd) = (self.rows.block_offset(bi), self.rows.block_dim(bi));
        let (co, cd) = (self.cols.block_offset(bj), self.cols.block_dim(bj));
        assert_eq!(sub.dim(), (rd, cd), "block shape mismatch at ({bi},{bj})");
        self.m.slice_mut(ndarray::s![ro..ro + rd, co..co + cd]).assign(sub);
    }

    pub fn mul(&self, other: &Op) -> Op {
        assert_eq!(self.cols, other.rows, "composition shape mismatch");
        Op { rows: self.rows.clone(), cols: other.cols.clone(), m: self.m.dot(&other.m) }
    }

    pub fn add(&self, other: &Op) -> Op {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Op { rows: self.rows.clone(), cols: self.cols.clone(), m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &Op) -> Op {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Op { rows: self.rows.clone(), cols: self.cols.clone(), m: &self.m - &other.m }
    }

    pub fn scale(&self, z: C64) -> Op {
        Op { rows: self.rows.clone(), cols: self.cols.clone(), m: self.m.mapv(|x| x * z) }
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        self.m.dot(v)
    }

    pub fn norm(&self) -> f64 {
        linalg::two_norm(&self.m)
    }
}

/// Hermitian positive weight per fiber block, extended diagonally over
/// modes. `None` is the flat (identity) product, which is also what the
/// orthonormalized su(2) setup produces on every block.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    pub fiber_weights: Option<Vec<CMat>>,
}

impl InnerProduct {
    pub fn flat() -> Self {
        InnerProduct { fiber_weights: None }
    }

    pub fn with_weights(weights: Vec<CMat>) -> Self {
        InnerProduct { fiber_weights: Some(weights) }
    }

    pub fn is_flat(&self) -> bool {
        self.fiber_weights.is_none()
    }

    /// The full weight matrix on `space`.
    pub fn full(&self, space: &Space) -> CMat {
        match &self.fiber_weights {
            None => linalg::eye(space.dim()),
            Some(ws) => {
                assert_eq!(ws.len(), space.blocks.len(), "one fiber weight per block");
                let mut w = CMat::zeros((space.dim(), space.dim()));
                for (b, blk) in space.blocks.iter().enumerate() {
                    let fw = &ws[b];
                    assert_eq!(fw.dim(), (blk.fiber_dim, blk.fiber_dim));
                    for mi in 0..space.modes.n_modes() {
                        let o = space.block_offset(b) + mi * blk.fiber_dim;
                        for a in 0..blk.fiber_dim {
                            for c in 0..blk.fiber_dim {
                                w[[o + a, o + c]] = fw[[a, c]];
                            }
                        }
                    }
                }
                w
            }
        }
    }
}

/// d/dx on one fiber block: diag(i·n) over modes, identity on the fiber.
pub fn derivative_op(space: &Space, block_label: &str) -> Result<Op> {
    let b = space.block_index(block_label)?;
    let sub = Space::single(space.modes, block_label, space.blocks[b].fiber_dim);
    let mut op = Op::zeros(&sub, &sub);
    let fd = space.blocks[b].fiber_dim;
    for mi in 0..space.modes.n_modes() {
        let n = space.modes.mode_at(mi) as f64;
        for f in 0..fd {
            op.m[[mi * fd + f, mi * fd + f]] = c64(0.0, n);
        }
    }
    Ok(op)
}

/// Band-limited fiber-matrix-valued multiplier given by Fourier
/// coefficients f̂_m: entry block (n, n−m) = f̂_m. Exact convolution; the
/// precondition band ≤ buffer keeps interior products alias-free.
pub fn multiplication_op(
    rows: &Space,
    cols: &Space,
    coeffs: &[(i64, CMat)],
) -> Result<Op> {
    assert_eq!(rows.blocks.len(), 1, "multiplication_op acts between single blocks");
    assert_eq!(cols.blocks.len(), 1, "multiplication_op acts between single blocks");
    assert_eq!(rows.modes, cols.modes);
    let band = coeffs.iter().map(|(m, _)| m.unsigned_abs() as usize).max().unwrap_or(0);
    if band > rows.modes.buffer {
        return Err(Error::Config(format!(
            "multiplier band {band} exceeds interior buffer {}",
            rows.modes.buffer
        )));
    }
    let (rd, cd) = (rows.blocks[0].fiber_dim, cols.blocks[0].fiber_dim);
    let mut op = Op::zeros(rows, cols);
    for (m, f) in coeffs {
        assert_eq!(f.dim(), (rd, cd), "fiber coefficient shape mismatch");
        for ci in 0..cols.modes.n_modes() {
            let n_src = cols.modes.mode_at(ci);
            let n_dst = n_src + m;
            if n_dst.unsigned_abs() as usize > rows.modes.n_max {
                continue;
            }
            let ri = rows.modes.index_of(n_dst);
            for a in 0..rd {
                for c in 0..cd {
                    op.m[[ri * rd + a, ci * cd + c]] += f[[a, c]];
                }
            }
        }
    }
    Ok(op)
}

/// Adjoint with respect to weighted products: (Au|v)_out = (u|A*v)_in, i.e.
/// A* = W_in⁻¹ A^H W_out.
pub fn adjoint(a: &Op, ip_in: &InnerProduct, ip_out: &InnerProduct) -> Result<Op> {
    let ah = dagger(&a.m);
    let m = if ip_in.is_flat() && ip_out.is_flat() {
        ah
    } else {
        let w_out = ip_out.full(&a.rows);
        let w_in_inv = linalg::inv(&ip_in.full(&a.cols))?;
        w_in_inv.dot(&ah).dot(&w_out)
    };
    Ok(Op { rows: a.cols.clone(), cols: a.rows.clone(), m })
}

/// Hermitian functional calculus with respect to the supplied product.
///
/// Non-flat products are reduced to the flat case by the congruence
/// Â = W^{1/2} A W^{−1/2}; degenerate eigenvalue clusters are handled per
/// [`linalg::cluster_apply`]. Inputs whose hermiticity residual (after the
/// congruence) exceeds the contract tolerance are rejected.
pub fn funcalc(a: &Op, ip: &InnerProduct, f: impl Fn(f64) -> f64) -> Result<Op> {
    assert!(a.is_square(), "funcalc needs a square operator");
    let m = if ip.is_flat() {
        linalg::herm_fn(&a.m, f)?
    } else {
        let w = ip.full(&a.rows);
        let s = linalg::herm_fn(&w, f64::sqrt)?;
        let s_inv = linalg::herm_fn(&w, |x| 1.0 / x.sqrt())?;
        let congruent = s.dot(&a.m).dot(&s_inv);
        let fa = linalg::herm_fn(&congruent, f)?;
        s_inv.dot(&fa).dot(&s)
    };
    Ok(Op { rows: a.rows.clone(), cols: a.cols.clone(), m })
}

/// Eigendecomposition of a hermitian operator w.r.t. the flat product.
pub fn eigh_op(a: &Op) -> Result<(Array1<f64>, CMat)> {
    linalg::eigh_checked(&a.m)
}

/// Smoothing-order diagnostic: ‖E^s Π_int A Π_int E^s‖₂ with
/// E = diag((1+n²)^{1/2}) and Π_int the interior-mode compression.
///
/// Monotone in s ≥ 0; a family whose order_norm stays small for s up to the
/// configured s_max is the discrete stand-in for a smoothing operator.
pub fn order_norm(a: &Op, s: f64) -> f64 {
    let wr = a.rows.sobolev_weights(s);
    let wc = a.cols.sobolev_weights(s);
    let mr = a.rows.interior_mask();
    let mc = a.cols.interior_mask();
    let mut scaled = a.m.clone();
    for ((i, j), v) in scaled.indexed_iter_mut() {
        *v *= wr[i] * mr[i] * wc[j] * mc[j];
    }
    linalg::two_norm(&scaled)
}

/// Orthonormal basis (w.r.t. `ip`) of the span of singular vectors of A with
/// singular value below `tol`.
pub fn kernel_basis(a: &Op, tol: f64, ip: &InnerProduct) -> Result<CMat> {
    assert!(tol > 0.0, "kernel_basis needs tol > 0");
    let ns = linalg::nullspace(&a.m, tol)?;
    if ip.is_flat() || ns.dim().1 == 0 {
        return Ok(ns);
    }
    // Gram-based re-orthonormalization in the weighted product.
    let w = ip.full(&a.cols);
    let gram = dagger(&ns).dot(&w).dot(&ns);
    let inv_root = linalg::herm_fn(&gram, |x| 1.0 / x.sqrt())?;
    Ok(ns.dot(&inv_root))
}

/// Smooth partition pair χ_< + χ_> = 1 with supp χ_> ⊂ {|x| ≥ 1} and
/// χ_> = 1 on {|x| ≥ 2}. The polynomial profile is config-visible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffProfile {
    Cubic,
    Quintic,
}

impl CutoffProfile {
    fn step(self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            CutoffProfile::Cubic => u * u * (3.0 - 2.0 * u),
            CutoffProfile::Quintic => u * u * u * (10.0 - 15.0 * u + 6.0 * u * u),
        }
    }

    /// χ_>: vanishes on [−1, 1], equals 1 outside [−2, 2].
    pub fn hi(self, x: f64) -> f64 {
        self.step(x.abs() - 1.0)
    }

    /// χ_< = 1 − χ_>: supported in [−2, 2].
    pub fn lo(self, x: f64) -> f64 {
        1.0 - self.hi(x)
    }
}

#[derive(Serialize)]
struct ExportHeader<'a> {
    schema: u32,
    n_max: usize,
    buffer: usize,
    row_blocks: &'a [Block],
    col_blocks: &'a [Block],
    nrows: usize,
    ncols: usize,
}

/// Export an operator as a CSV of (row, col, re, im) entries plus a JSON
/// header describing the mode space and block layout. Zero entries are
/// skipped; row-major order keeps the output deterministic.
pub fn export_operator(op: &Op, dir: &std::path::Path, name: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let header = ExportHeader {
        schema: 1,
        n_max: op.rows.modes.n_max,
        buffer: op.rows.modes.buffer,
        row_blocks: &op.rows.blocks,
        col_blocks: &op.cols.blocks,
        nrows: op.rows.dim(),
        ncols: op.cols.dim(),
    };
    let mut jf = std::fs::File::create(dir.join(format!("{name}.json")))?;
    jf.write_all(serde_json::to_string_pretty(&header)?.as_bytes())?;
    jf.write_all(b"\n")?;

    let mut wtr = csv::Writer::from_path(dir.join(format!("{name}.csv"))).map_err(csv_err)?;
    wtr.write_record(["row", "col", "re", "im"]).map_err(csv_err)?;
    for ((i, j), v) in op.m.indexed_iter() {
        if v.re != 0.0 || v.im != 0.0 {
            wtr.write_record([
                i.to_string(),
                j.to_string(),
                format!("{:.17e}", v.re),
                format!("{:.17e}", v.im),
            ])
            .map_err(csv_err)?;
        }
    }
    wtr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_cmat, rel_diff, two_norm};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_space(n: usize, fiber: usize) -> Space {
        Space::single(ModeSpace::new(n.max(4), 1).unwrap(), "w", fiber)
    }

    #[test]
    fn derivative_is_mode_diagonal() {
        // N=4 scalar fiber: diag(i·n); the three lowest entries reproduce
        // diag(-i, 0, i) around n = 0.
        let sp = small_space(4, 1);
        let d = derivative_op(&sp, "w").unwrap();
        for n in -4i64..=4 {
            let i = sp.idx(0, n, 0);
            assert_eq!(d.m[[i, i]], c64(0.0, n as f64));
        }
    }

    #[test]
    fn derivative_is_anti_hermitian_flat() {
        let sp = small_space(5, 2);
        let d = derivative_op(&sp, "w").unwrap();
        let ds = adjoint(&d, &InnerProduct::flat(), &InnerProduct::flat()).unwrap();
        assert!(two_norm(&(&ds.m + &d.m)) < 1e-15);
    }

    #[test]
    fn derivative_squared_is_minus_n_squared() {
        let sp = small_space(6, 1);
        let d = derivative_op(&sp, "w").unwrap();
        let dd = d.mul(&d);
        for n in -6i64..=6 {
            let i = sp.idx(0, n, 0);
            assert_eq!(dd.m[[i, i]], c64(-((n * n) as f64), 0.0));
        }
    }

    #[test]
    fn constant_multiplier_is_identity() {
        let sp = small_space(5, 3);
        let op = multiplication_op(&sp, &sp, &[(0, linalg::eye(3))]).unwrap();
        assert!(rel_diff(&op.m, &linalg::eye(sp.dim()), 1.0) < 1e-16);
    }

    #[test]
    fn two_cos_x_fills_adjacent_mode_diagonals() {
        // 2cos(x) = e^{ix} + e^{-ix}
        let sp = small_space(5, 1);
        let op = multiplication_op(
            &sp,
            &sp,
            &[(1, linalg::eye(1)), (-1, linalg::eye(1))],
        )
        .unwrap();
        for n in -5i64..=4 {
            assert_eq!(op.m[[sp.idx(0, n + 1, 0), sp.idx(0, n, 0)]], c64(1.0, 0.0));
            assert_eq!(op.m[[sp.idx(0, n, 0), sp.idx(0, n + 1, 0)]], c64(1.0, 0.0));
        }
        assert_eq!(op.m[[sp.idx(0, 0, 0), sp.idx(0, 0, 0)]], c64(0.0, 0.0));
    }

    #[test]
    fn multiplier_adjoint_matches_conjugated_coefficients() {
        // (f·)* = (f*)· with (f*)̂_m = (f̂_{−m})^H, checked against the dense
        // adjoint.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sp = small_space(6, 2);
        let f1 = random_cmat(&mut rng, 2, 2);
        let f0 = random_cmat(&mut rng, 2, 2);
        let coeffs = vec![(0i64, f0.clone()), (1i64, f1.clone()), (-1i64, dagger(&f1))];
        let op = multiplication_op(&sp, &sp, &coeffs).unwrap();
        let conj_coeffs: Vec<(i64, CMat)> =
            coeffs.iter().map(|(m, f)| (-m, dagger(f))).collect();
        let op_star_direct = multiplication_op(&sp, &sp, &conj_coeffs).unwrap();
        let op_star = adjoint(&op, &InnerProduct::flat(), &InnerProduct::flat()).unwrap();
        assert!(rel_diff(&op_star.m, &op_star_direct.m, two_norm(&op.m)) < 1e-15);
    }

    #[test]
    fn multiplier_band_beyond_buffer_is_a_config_error() {
        let sp = small_space(5, 1); // buffer 1
        let err = multiplication_op(&sp, &sp, &[(2, linalg::eye(1))]);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn adjoint_respects_weighted_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sp = small_space(4, 2);
        let w_in = {
            let r = random_cmat(&mut rng, 2, 2);
            &dagger(&r).dot(&r) + &linalg::eye(2).mapv(|z| z * 3.0)
        };
        let w_out = {
            let r = random_cmat(&mut rng, 2, 2);
            &dagger(&r).dot(&r) + &linalg::eye(2).mapv(|z| z * 2.0)
        };
        let ip_in = InnerProduct::with_weights(vec![w_in.clone()]);
        let ip_out = InnerProduct::with_weights(vec![w_out.clone()]);
        let a = Op::from_matrix(&sp, &sp, random_cmat(&mut rng, sp.dim(), sp.dim()));
        let astar = adjoint(&a, &ip_in, &ip_out).unwrap();
        // (Au|v)_out − (u|A*v)_in on random vectors
        let wfull_in = ip_in.full(&sp);
        let wfull_out = ip_out.full(&sp);
        for _ in 0..10 {
            let u = crate::linalg::random_cvec(&mut rng, sp.dim());
            let v = crate::linalg::random_cvec(&mut rng, sp.dim());
            let lhs = crate::linalg::inner(&a.m.dot(&u), &wfull_out.dot(&v));
            let rhs = crate::linalg::inner(&u, &wfull_in.dot(&astar.m.dot(&v)));
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
        let aback = adjoint(&astar, &ip_out, &ip_in).unwrap();
        assert!(rel_diff(&aback.m, &a.m, two_norm(&a.m)) < crate::tol::ADJOINT_INVOLUTION);
    }

    #[test]
    fn funcalc_on_diagonal_matrix() {
        let sp = small_space(4, 1).to_owned();
        let mut a = Op::zeros(&sp, &sp);
        // place 0, 1, 4 on three diagonal slots, rest zero
        a.m[[0, 0]] = c64(0.0, 0.0);
        a.m[[1, 1]] = c64(1.0, 0.0);
        a.m[[2, 2]] = c64(4.0, 0.0);
        let f = funcalc(&a, &InnerProduct::flat(), |x| (x + 4.0).sqrt()).unwrap();
        assert!((f.m[[0, 0]].re - 2.0).abs() < 1e-14);
        assert!((f.m[[1, 1]].re - 5.0f64.sqrt()).abs() < 1e-14);
        assert!((f.m[[2, 2]].re - 8.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cutoff_support_conditions() {
        for profile in [CutoffProfile::Cubic, CutoffProfile::Quintic] {
            assert_eq!(profile.hi(0.5), 0.0);
            assert_eq!(profile.hi(-1.0), 0.0);
            assert_eq!(profile.hi(2.0), 1.0);
            assert_eq!(profile.hi(-3.0), 1.0);
            for x in [-2.5f64, -1.3, 0.0, 0.7, 1.9, 4.0] {
                assert!((profile.hi(x) + profile.lo(x) - 1.0).abs() < 1e-15);
            }
        }
        // χ_>(diag(0, 0.5, 3)) = diag(0, 0, 1)
        let sp = small_space(4, 1);
        let mut a = Op::zeros(&sp, &sp);
        a.m[[1, 1]] = c64(0.5, 0.0);
        a.m[[2, 2]] = c64(3.0, 0.0);
        let chi = funcalc(&a, &InnerProduct::flat(), |x| CutoffProfile::Quintic.hi(x)).unwrap();
        assert!(chi.m[[0, 0]].norm() < 1e-15);
        assert!(chi.m[[1, 1]].norm() < 1e-15);
        assert!((chi.m[[2, 2]].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn funcalc_pseudo_inverse_matches_dense_pinv() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let sp = small_space(4, 2);
        // hermitian PSD with a genuine kernel: B^H B with B rank-deficient
        let mut b = random_cmat(&mut rng, sp.dim(), sp.dim());
        for j in 0..3 {
            for i in 0..sp.dim() {
                b[[i, j]] = c64(0.0, 0.0);
            }
        }
        let h = Op::from_matrix(&sp, &sp, dagger(&b).dot(&b));
        let scale = two_norm(&h.m);
        let cut = 1e-10 * scale;
        let pinv_fc =
            funcalc(&h, &InnerProduct::flat(), |x| if x > cut { 1.0 / x } else { 0.0 }).unwrap();
        let pinv_dense = linalg::pinv(&h.m, 1e-10).unwrap();
        assert!(rel_diff(&pinv_fc.m, &pinv_dense, two_norm(&pinv_dense)) < 1e-9);
    }

    #[test]
    fn funcalc_rejects_non_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sp = small_space(4, 1);
        let a = Op::from_matrix(&sp, &sp, random_cmat(&mut rng, sp.dim(), sp.dim()));
        assert!(matches!(
            funcalc(&a, &InnerProduct::flat(), |x| x),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn order_norm_basics() {
        let sp = small_space(8, 3);
        let zero = Op::zeros(&sp, &sp);
        assert_eq!(order_norm(&zero, 2.0), 0.0);
        let id = Op::identity(&sp);
        assert!((order_norm(&id, 0.0) - 1.0).abs() < 1e-12);
        // single coupling at the interior edge n = m = N − M
        let edge = (sp.modes.n_max - sp.modes.buffer) as i64;
        let mut a = Op::zeros(&sp, &sp);
        a.m[[sp.idx(0, edge, 0), sp.idx(0, edge, 0)]] = c64(1.0, 0.0);
        for s in [0.0f64, 1.0, 2.0] {
            let expect = (1.0 + (edge * edge) as f64).powf(s);
            assert!((order_norm(&a, s) - expect).abs() < 1e-9 * expect);
        }
    }

    #[test]
    fn kernel_basis_of_identity_is_empty() {
        let sp = small_space(4, 2);
        let id = Op::identity(&sp);
        let k = kernel_basis(&id, 1e-8, &InnerProduct::flat()).unwrap();
        assert_eq!(k.dim().1, 0);
    }

    #[test]
    fn export_writes_golden_format() {
        let sp = small_space(4, 1);
        let d = derivative_op(&sp, "w").unwrap();
        let dir = std::env::temp_dir().join("ymlab_export_test");
        export_operator(&d, &dir, "derivative").unwrap();
        let csv_text = std::fs::read_to_string(dir.join("derivative.csv")).unwrap();
        let mut lines = csv_text.lines();
        assert_eq!(lines.next().unwrap(), "row,col,re,im");
        // first nonzero entry is mode n = −4: value −4i
        let first = lines.next().unwrap();
        assert!(first.starts_with("0,0,"), "unexpected first row: {first}");
        let header: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("derivative.json")).unwrap())
                .unwrap();
        assert_eq!(header["n_max"], 4);
        assert_eq!(header["row_blocks"][0]["label"], "w");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn adjoint_reverses_composition(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = small_space(4, 2);
            let ip = InnerProduct::flat();
            let a = Op::from_matrix(&sp, &sp, random_cmat(&mut rng, sp.dim(), sp.dim()));
            let b = Op::from_matrix(&sp, &sp, random_cmat(&mut rng, sp.dim(), sp.dim()));
            let lhs = adjoint(&a.mul(&b), &ip, &ip).unwrap();
            let rhs = adjoint(&b, &ip, &ip).unwrap().mul(&adjoint(&a, &ip, &ip).unwrap());
            let scale = two_norm(&lhs.m).max(1.0);
            prop_assert!(rel_diff(&lhs.m, &rhs.m, scale) < crate::tol::ADJOINT_COMPOSITION);
        }

        #[test]
        fn funcalc_is_a_homomorphism_on_commuting_arguments(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = small_space(4, 1);
            let h = Op::from_matrix(&sp, &sp, crate::linalg::random_herm(&mut rng, sp.dim()));
            let ip = InnerProduct::flat();
            let f = funcalc(&h, &ip, |x| x.cos()).unwrap();
            let g = funcalc(&h, &ip, |x| 1.0 / (1.0 + x * x)).unwrap();
            let fg = funcalc(&h, &ip, |x| x.cos() / (1.0 + x * x)).unwrap();
            let scale = two_norm(&fg.m).max(1.0);
            prop_assert!(rel_diff(&f.mul(&g).m, &fg.m, scale) < crate::tol::FUNCALC_HOM);
        }

        #[test]
        fn convolution_is_exact_on_interior_modes(seed in 0u64..500, n_src in -3i64..=3) {
            // acting on a single interior mode e^{inx}⊗v reproduces
            // Σ_m f̂_m e^{i(n+m)x} (f̂_m v) with zero error
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = Space::single(ModeSpace::new(6, 2).unwrap(), "w", 2);
            let f1 = random_cmat(&mut rng, 2, 2);
            let f2 = random_cmat(&mut rng, 2, 2);
            let coeffs = vec![(1i64, f1.clone()), (-2i64, f2.clone())];
            let op = multiplication_op(&sp, &sp, &coeffs).unwrap();
            let v = crate::linalg::random_cvec(&mut rng, 2);
            let mut input = CVec::zeros(sp.dim());
            for a in 0..2 { input[sp.idx(0, n_src, a)] = v[a]; }
            let out = op.apply(&input);
            let mut expect = CVec::zeros(sp.dim());
            for (m, f) in &coeffs {
                let dst = n_src + m;
                if dst.unsigned_abs() as usize <= sp.modes.n_max {
                    let fv = f.dot(&v);
                    for a in 0..2 { expect[sp.idx(0, dst, a)] += fv[a]; }
                }
            }
            prop_assert!(crate::linalg::vec_norm(&(&out - &expect)) == 0.0);
        }

        #[test]
        fn order_norm_is_monotone_in_s(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sp = small_space(5, 2);
            let a = Op::from_matrix(&sp, &sp, random_cmat(&mut rng, sp.dim(), sp.dim()));
            let mut prev = 0.0;
            for s in [0.0f64, 0.5, 1.0, 2.0, 4.0] {
                let v = order_norm(&a, s);
                prop_assert!(v + 1e-12 >= prev);
                prev = v;
            }
        }
    }
}
