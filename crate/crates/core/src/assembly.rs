//! Two-particle Hamiltonian in the exchange-symmetric pair basis.
//!
//! The confinement is even, so the Hamiltonian also commutes with total
//! parity `(x1, x2) -> (-x1, -x2)`. Pair states `|ab>` with `a + b` even and
//! odd never couple; the matrix is stored as those two diagonal blocks.

use std::path::Path;
use std::sync::Arc;

use faer::Mat;

use crate::basis::{basis_values, kinetic_matrix, BasisSpec, QuadratureGrid};
use crate::cache;
use crate::confinement::{Confinement, PotentialParams};
use crate::error::{Error, Result};
use crate::interactions::{InteractionKind, TwoBodyFactorization};

/// Largest symmetric-subspace dimension accepted by default.
pub const MAX_SUBSPACE_DIM: usize = 5000;

const ONE_BODY_DOUBLING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Bijection between unordered pairs `a <= b` and dense indices.
///
/// Even-parity pairs come first, each block in lexicographic order. A
/// subspace vector `v` maps to the symmetric coefficient matrix through
/// `A_ab = A_ba = v_ab · c_ab` with `c = 1` on the diagonal and `1/√2` off it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSubspaceMap {
    n_basis: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
    even_dim: usize,
}

impl SymmetricSubspaceMap {
    pub fn new(n_basis: usize) -> Self {
        let mut pairs = Vec::with_capacity(n_basis * (n_basis + 1) / 2);
        for parity in [0, 1] {
            for a in 0..n_basis {
                for b in a..n_basis {
                    if (a + b) % 2 == parity {
                        pairs.push((a, b));
                    }
                }
            }
        }
        let even_dim = pairs.iter().filter(|(a, b)| (a + b) % 2 == 0).count();
        let mut index = vec![0; n_basis * n_basis];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            index[a * n_basis + b] = i;
            index[b * n_basis + a] = i;
        }
        SymmetricSubspaceMap { n_basis, pairs, index, even_dim }
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    pub fn odd_dim(&self) -> usize {
        self.pairs.len() - self.even_dim
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of(&self, a: usize, b: usize) -> usize {
        self.index[a * self.n_basis + b]
    }

    /// Pairs of one parity block, in block order.
    pub fn block_pairs(&self, parity: Parity) -> &[(usize, usize)] {
        match parity {
            Parity::Even => &self.pairs[..self.even_dim],
            Parity::Odd => &self.pairs[self.even_dim..],
        }
    }

    pub fn block_offset(&self, parity: Parity) -> usize {
        match parity {
            Parity::Even => 0,
            Parity::Odd => self.even_dim,
        }
    }

    pub fn normalization(a: usize, b: usize) -> f64 {
        if a == b {
            1.0
        } else {
            std::f64::consts::FRAC_1_SQRT_2
        }
    }

    /// Symmetric coefficient matrix from a block vector.
    pub fn unpack(&self, parity: Parity, v: &[f64]) -> Mat<f64> {
        let n = self.n_basis;
        let mut a = Mat::zeros(n, n);
        for (&(i, j), &x) in self.block_pairs(parity).iter().zip(v) {
            let val = x * Self::normalization(i, j);
            a[(i, j)] = val;
            a[(j, i)] = val;
        }
        a
    }

    /// Inverse of [`unpack`](Self::unpack) over the full subspace, reading the
    /// upper triangle.
    pub fn pack(&self, coeffs: &Mat<f64>) -> Vec<f64> {
        self.pairs.iter().map(|&(a, b)| coeffs[(a, b)] / Self::normalization(a, b)).collect()
    }

    /// Product-space components `(t, coefficient)` of the pair state.
    fn terms(a: usize, b: usize) -> ([(usize, usize); 2], [f64; 2], usize) {
        if a == b {
            ([(a, a), (a, a)], [1.0, 0.0], 1)
        } else {
            let c = std::f64::consts::FRAC_1_SQRT_2;
            ([(a, b), (b, a)], [c, c], 2)
        }
    }

    /// `<S_ab| O |S_cd>` for an operator given by its product-space elements.
    pub fn project(&self, ab: (usize, usize), cd: (usize, usize), op: impl Fn((usize, usize), (usize, usize)) -> f64) -> f64 {
        let (lt, lc, ln) = Self::terms(ab.0, ab.1);
        let (rt, rc, rn) = Self::terms(cd.0, cd.1);
        let mut total = 0.0;
        for i in 0..ln {
            for j in 0..rn {
                total += lc[i] * rc[j] * op(lt[i], rt[j]);
            }
        }
        total
    }
}

/// Potential-independent two-body blocks in the symmetric subspace.
#[derive(Debug, Clone)]
pub struct InteractionBlocks {
    pub kind: InteractionKind,
    pub even: Mat<f64>,
    pub odd: Mat<f64>,
}

impl InteractionBlocks {
    pub fn build(factor: &TwoBodyFactorization, map: &SymmetricSubspaceMap) -> Self {
        let even = interaction_block(factor, map, Parity::Even);
        let odd = interaction_block(factor, map, Parity::Odd);
        InteractionBlocks { kind: factor.kind(), even, odd }
    }

    pub fn block(&self, parity: Parity) -> &Mat<f64> {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

fn interaction_block(factor: &TwoBodyFactorization, map: &SymmetricSubspaceMap, parity: Parity) -> Mat<f64> {
    let pairs = map.block_pairs(parity);
    match factor {
        TwoBodyFactorization::Contact(c) => {
            // Fully symmetric kernel: <S_ab|U|S_cd> = s_ab s_cd U_abcd with s = 1 or √2.
            let b = &c.node_values;
            let p = Mat::<f64>::from_fn(b.nrows(), pairs.len(), |q, i| {
                let (x, y) = pairs[i];
                let s = if x == y { 1.0 } else { std::f64::consts::SQRT_2 };
                s * b[(q, x)] * b[(q, y)]
            });
            p.transpose() * &p
        }
        TwoBodyFactorization::SoftCoulomb(_) => {
            let dim = pairs.len();
            let mut m = Mat::zeros(dim, dim);
            for i in 0..dim {
                for j in i..dim {
                    let v = map.project(pairs[i], pairs[j], |(a, b), (c, d)| factor.element(a, b, c, d));
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            m
        }
    }
}

/// `h = T + V` over the single-particle basis.
///
/// The potential matrix is integrated on panels broken at the potential's
/// feature points and re-integrated with doubled nodes; a relative change
/// above `1e-9` of `|h|_F` is a convergence error. Entries with `m + n` odd
/// vanish by parity and are set to zero.
pub fn one_body_matrix(spec: &BasisSpec, confinement: &Confinement) -> Result<Mat<f64>> {
    spec.validate()?;
    if let Some(p) = confinement.params() {
        p.validate()?;
    }
    let points = confinement.feature_points();
    let grid = spec.quadrature.grid_with(&points)?;
    let fine = spec.quadrature.doubled().grid_with(&points)?;
    let v = potential_matrix(spec, confinement, &grid);
    let v_fine = potential_matrix(spec, confinement, &fine);
    let mut h = kinetic_matrix(spec);
    h += &v;
    let change = (&v - &v_fine).norm_l2() / h.norm_l2().max(f64::MIN_POSITIVE);
    if change > ONE_BODY_DOUBLING_TOLERANCE {
        return Err(Error::Convergence {
            what: "one-body potential matrix",
            relative_change: change,
            tolerance: ONE_BODY_DOUBLING_TOLERANCE,
        });
    }
    Ok(h)
}

fn potential_matrix(spec: &BasisSpec, confinement: &Confinement, grid: &QuadratureGrid) -> Mat<f64> {
    let n = spec.n_basis;
    let b = basis_values(n, spec.omega, &grid.nodes);
    let weighted = Mat::<f64>::from_fn(b.nrows(), n, |q, j| {
        grid.weights[q] * confinement.value(grid.nodes[q]) * b[(q, j)]
    });
    let mut v = b.transpose() * &weighted;
    for m in 0..n {
        for k in 0..n {
            if (m + k) % 2 == 1 {
                v[(m, k)] = 0.0;
            } else if k > m {
                let avg = 0.5 * (v[(m, k)] + v[(k, m)]);
                v[(m, k)] = avg;
                v[(k, m)] = avg;
            }
        }
    }
    v
}

/// Two-particle Hamiltonian restricted to the exchange-symmetric subspace,
/// stored as its even- and odd-parity blocks.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub map: Arc<SymmetricSubspaceMap>,
    pub even: Mat<f64>,
    pub odd: Mat<f64>,
    pub basis: BasisSpec,
    pub confinement: Confinement,
    pub kind: InteractionKind,
    pub interaction_strength: f64,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn block(&self, parity: Parity) -> &Mat<f64> {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// Dense `D x D` matrix in subspace-map order (block diagonal).
    pub fn dense(&self) -> Mat<f64> {
        let d = self.dim();
        let e = self.map.even_dim();
        Mat::from_fn(d, d, |i, j| match (i < e, j < e) {
            (true, true) => self.even[(i, j)],
            (false, false) => self.odd[(i - e, j - e)],
            _ => 0.0,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.even.squared_norm_l2() + self.odd.squared_norm_l2()).sqrt()
    }
}

/// Reusable assembly context for one basis and interaction.
///
/// Holds the potential-independent pieces (pair map, kinetic matrix,
/// two-body blocks) so parameter sweeps only rebuild the one-body part.
#[derive(Debug, Clone)]
pub struct Assembler {
    basis: BasisSpec,
    kind: InteractionKind,
    map: Arc<SymmetricSubspaceMap>,
    factor: Arc<TwoBodyFactorization>,
    blocks: Arc<InteractionBlocks>,
}

impl Assembler {
    pub fn new(basis: &BasisSpec, kind: InteractionKind) -> Result<Self> {
        Self::with_cache(basis, kind, None)
    }

    /// As [`new`](Self::new), loading and storing the two-body blocks in
    /// `cache_dir` when given. Cache failures fall back to recomputation.
    pub fn with_cache(basis: &BasisSpec, kind: InteractionKind, cache_dir: Option<&Path>) -> Result<Self> {
        basis.validate()?;
        let dim = basis.symmetric_dim();
        if dim > MAX_SUBSPACE_DIM {
            return Err(Error::DimensionTooLarge { dim, limit: MAX_SUBSPACE_DIM });
        }
        let map = Arc::new(SymmetricSubspaceMap::new(basis.n_basis));
        let factor = TwoBodyFactorization::build(basis, kind)?;
        let key = cache::interaction_key(basis, kind);
        let cached = cache_dir.and_then(|dir| match cache::load_blocks(dir, &key, map.even_dim(), map.odd_dim()) {
            Ok(found) => found.map(|(even, odd)| InteractionBlocks { kind, even, odd }),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry: {e}");
                None
            }
        });
        let blocks = match cached {
            Some(b) => b,
            None => {
                let b = InteractionBlocks::build(&factor, &map);
                if let Some(dir) = cache_dir {
                    if let Err(e) = cache::store_blocks(dir, &key, &b.even, &b.odd) {
                        log::warn!("could not write cache entry: {e}");
                    }
                }
                b
            }
        };
        Ok(Assembler { basis: basis.clone(), kind, map, factor: Arc::new(factor), blocks: Arc::new(blocks) })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    pub fn map(&self) -> &Arc<SymmetricSubspaceMap> {
        &self.map
    }

    pub fn factorization(&self) -> &TwoBodyFactorization {
        &self.factor
    }

    pub fn interaction_blocks(&self) -> &InteractionBlocks {
        &self.blocks
    }

    pub fn assemble(&self, params: &PotentialParams) -> Result<HamiltonianMatrix> {
        self.assemble_with(&Confinement::PowerExponential(*params), 1.0)
    }

    /// General assembly; `interaction_strength` scales the two-body term.
    pub fn assemble_with(&self, confinement: &Confinement, interaction_strength: f64) -> Result<HamiltonianMatrix> {
        let h = one_body_matrix(&self.basis, confinement)?;
        let even = self.block(&h, Parity::Even, interaction_strength);
        let odd = self.block(&h, Parity::Odd, interaction_strength);
        let ham = HamiltonianMatrix {
            map: self.map.clone(),
            even,
            odd,
            basis: self.basis.clone(),
            confinement: *confinement,
            kind: self.kind,
            interaction_strength,
        };
        if !(ham.even.norm_l2().is_finite() && ham.odd.norm_l2().is_finite()) {
            return Err(Error::Eigensolver("non-finite Hamiltonian entries".into()));
        }
        Ok(ham)
    }

    fn block(&self, h: &Mat<f64>, parity: Parity, strength: f64) -> Mat<f64> {
        let pairs = self.map.block_pairs(parity);
        let two = self.blocks.block(parity);
        let dim = pairs.len();
        let mut m = Mat::zeros(dim, dim);
        let one_body = |(a, b): (usize, usize), (c, d): (usize, usize)| {
            let mut v = 0.0;
            if b == d {
                v += h[(a, c)];
            }
            if a == c {
                v += h[(b, d)];
            }
            v
        };
        for i in 0..dim {
            for j in i..dim {
                let v = self.map.project(pairs[i], pairs[j], one_body) + strength * two[(i, j)];
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }
}

/// One-shot assembly for the power-exponential confinement.
pub fn assemble(spec: &BasisSpec, params: &PotentialParams, kind: InteractionKind) -> Result<HamiltonianMatrix> {
    Assembler::new(spec, kind)?.assemble(params)
}

/// Full `N² x N²` product-space Hamiltonian, `|ab>` at index `a·N + b`.
/// Validation only.
pub fn assemble_full_product(
    spec: &BasisSpec,
    confinement: &Confinement,
    factor: &TwoBodyFactorization,
    interaction_strength: f64,
) -> Result<Mat<f64>> {
    let h = one_body_matrix(spec, confinement)?;
    let n = spec.n_basis;
    Ok(Mat::from_fn(n * n, n * n, |r, c| {
        let (a, b) = (r / n, r % n);
        let (x, y) = (c / n, c % n);
        let mut v = interaction_strength * factor.element(a, b, x, y);
        if b == y {
            v += h[(a, x)];
        }
        if a == x {
            v += h[(b, y)];
        }
        v
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_map_round_trip() {
        for n in [1, 2, 5, 50] {
            let map = SymmetricSubspaceMap::new(n);
            assert_eq!(map.dim(), n * (n + 1) / 2);
            for i in 0..map.dim() {
                let (a, b) = map.pair(i);
                assert!(a <= b);
                assert_eq!(map.index_of(a, b), i);
                assert_eq!(map.index_of(b, a), i);
                let parity_even = (a + b) % 2 == 0;
                assert_eq!(parity_even, i < map.even_dim());
            }
        }
        assert_eq!(SymmetricSubspaceMap::new(50).dim(), 1275);
    }

    #[test]
    fn pack_unpack_preserves_norm() {
        let map = SymmetricSubspaceMap::new(6);
        let v: Vec<f64> = (0..map.even_dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = map.unpack(Parity::Even, &v);
        let norm_v: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((a.norm_l2() - norm_v).abs() < 1e-14);
        let back = map.pack(&a);
        // off-diagonal entries pass through a sqrt(2) scaling and back
        assert!(back[..map.even_dim()].iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(back[map.even_dim()..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_potential_gives_kinetic() {
        let spec = BasisSpec::new(12, 0.25, 8.0).unwrap();
        let h = one_body_matrix(&spec, &Confinement::Free).unwrap();
        let t = kinetic_matrix(&spec);
        assert_eq!((&h - &t).norm_l2(), 0.0);
    }

    #[test]
    fn one_body_parity_selection() {
        let spec = BasisSpec::new(20, 0.25, 8.0).unwrap();
        let p = PotentialParams::with_shape(8.35, 200.0).unwrap();
        let h = one_body_matrix(&spec, &p.into()).unwrap();
        for m in 0..20 {
            for n in 0..20 {
                if (m + n) % 2 == 1 {
                    assert_eq!(h[(m, n)], 0.0);
                }
                assert_eq!(h[(m, n)], h[(n, m)]);
            }
        }
    }

    #[test]
    fn dimension_guard() {
        let spec = BasisSpec::new(100, 0.25, 8.0).unwrap();
        assert!(matches!(
            Assembler::new(&spec, InteractionKind::Contact),
            Err(Error::DimensionTooLarge { dim: 5050, .. })
        ));
    }

    #[test]
    fn blocks_match_full_product_projection() {
        // Project the full product-space matrix onto symmetric pair states.
        let spec = BasisSpec::new(7, 0.25, 8.0).unwrap();
        let conf: Confinement = PotentialParams::with_shape(5.0, 7.0).unwrap().into();
        for kind in [InteractionKind::Contact, InteractionKind::SoftCoulomb] {
            let asm = Assembler::new(&spec, kind).unwrap();
            let ham = asm.assemble_with(&conf, 1.0).unwrap();
            let full = assemble_full_product(&spec, &conf, asm.factorization(), 1.0).unwrap();
            let dense = ham.dense();
            let map = &ham.map;
            let n = 7;
            let state = |i: usize| {
                let (a, b) = map.pair(i);
                let mut v = vec![0.0; n * n];
                if a == b {
                    v[a * n + a] = 1.0;
                } else {
                    v[a * n + b] = std::f64::consts::FRAC_1_SQRT_2;
                    v[b * n + a] = std::f64::consts::FRAC_1_SQRT_2;
                }
                v
            };
            for i in 0..map.dim() {
                let si = state(i);
                for j in 0..map.dim() {
                    let sj = state(j);
                    let mut v = 0.0;
                    for r in 0..n * n {
                        for c in 0..n * n {
                            v += si[r] * full[(r, c)] * sj[c];
                        }
                    }
                    assert!((v - dense[(i, j)]).abs() < 1e-12, "{kind} {i},{j}");
                }
            }
        }
    }

    #[test]
    fn contact_block_is_positive_semidefinite() {
        let spec = BasisSpec::new(10, 0.25, 8.0).unwrap();
        let asm = Assembler::new(&spec, InteractionKind::Contact).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let vals = asm.interaction_blocks().block(parity).self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
            assert!(vals[0] >= -1e-10, "{:?}", vals[0]);
        }
    }
}
