//! Exterior shifting with respect to the componentwise order `<=_p` and the
//! lexicographic order.
//!
//! A generic basis `f_1, ..., f_n` of the vertex space (with `f_1` all ones)
//! is fixed. For a face `s`, the wedge `f_s` has coordinate
//! `det A[t, s]` on `e_t`; projecting to the faces of `K` gives the compound
//! vector of `s`. A face is in the shifted family when its compound vector is
//! outside the span of the compound vectors of its predecessors.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{det_in_place, trial_rng, EchelonBasis, Field, Matrix};
use crate::rigidity::{Genericity, Placement};

const MAX_BASIS_ATTEMPTS: usize = 64;

/// Which order supplies the predecessors of a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    /// Componentwise order on same-size sorted faces.
    Partial,
    Lex,
}

/// `s <=_p t`: same size and `s_i <= t_i` for every position.
pub fn leq_p(s: &Face, t: &Face) -> bool {
    s.len() == t.len() && s.vertices().iter().zip(t.vertices()).all(|(a, b)| a <= b)
}

fn precedes(order: Order, t: &Face, s: &Face) -> bool {
    t != s
        && match order {
            Order::Partial => leq_p(t, s),
            Order::Lex => t.len() == s.len() && t < s,
        }
}

/// `{1, 3, 4, ..., d, n}`.
pub fn sigma0(d: usize, n: usize) -> Result<Face> {
    if d < 3 || n < d + 1 {
        return Err(Error::BadParameters(format!(
            "sigma0 needs d >= 3 and n >= d + 1, got d={d}, n={n}"
        )));
    }
    Ok(Face::from_sorted(
        std::iter::once(1)
            .chain(3..=d)
            .chain(std::iter::once(n))
            .collect(),
    ))
}

/// All `t <=_p sigma0(d, n)` of size `d`: `[d]` and `[d] - {i} + {v}` for
/// `2 <= i <= d < v <= n`, in lex order.
pub fn prefix_b(d: usize, n: usize) -> Result<Vec<Face>> {
    sigma0(d, n)?;
    let base = Face::from_sorted((1..=d).collect());
    let mut out = vec![base.clone()];
    for i in 2..=d {
        for v in d + 1..=n {
            out.push(base.without(i).with(v));
        }
    }
    out.sort();
    Ok(out)
}

/// An `n x n` basis matrix whose first column is all ones.
#[derive(Clone, Debug)]
pub struct GenericBasis<F: Field> {
    matrix: Matrix<F>,
    seed: u64,
}

impl<F: Field> GenericBasis<F> {
    /// Random nonsingular basis; resamples deterministically on the rare
    /// singular draw.
    pub fn sample(field: &F, n: usize, seed: u64) -> Result<Self> {
        let mut rng = trial_rng(seed, 0);
        for _ in 0..MAX_BASIS_ATTEMPTS {
            let mut m = Matrix::random(field.clone(), n, n, &mut rng);
            for r in 0..n {
                m.set(r, 0, field.one());
            }
            if m.rank() == n {
                return Ok(GenericBasis { matrix: m, seed });
            }
        }
        Err(Error::SingularBasis(MAX_BASIS_ATTEMPTS))
    }

    /// Basis whose columns `2..=d` carry the placement coordinates,
    /// `(f_i)_v = p(v)_{i-1}`; the remaining columns are random.
    pub fn from_placement(field: &F, p: &Placement<F>, n: usize, seed: u64) -> Result<Self> {
        let d = p.d();
        if d > n {
            return Err(Error::BadParameters(format!(
                "placement dimension d={d} exceeds n={n}"
            )));
        }
        let mut rng = trial_rng(seed, 1);
        for _ in 0..MAX_BASIS_ATTEMPTS {
            let mut m = Matrix::random(field.clone(), n, n, &mut rng);
            for v in 1..=n {
                m.set(v - 1, 0, field.one());
                for (i, x) in p.coord(v)?.iter().enumerate() {
                    m.set(v - 1, i + 1, x.clone());
                }
            }
            if m.rank() == n {
                return Ok(GenericBasis { matrix: m, seed });
            }
            if d == n {
                // no free columns to resample
                break;
            }
        }
        Err(Error::SingularBasis(MAX_BASIS_ATTEMPTS))
    }

    /// Wraps an explicit matrix after checking the ones column and rank.
    pub fn from_matrix(matrix: Matrix<F>) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n {
            return Err(Error::DimensionMismatch(
                "basis matrix must be square".into(),
            ));
        }
        let f = matrix.field().clone();
        if (0..n).any(|r| *matrix.get(r, 0) != f.one()) {
            return Err(Error::BadParameters(
                "first basis vector must be all ones".into(),
            ));
        }
        if matrix.rank() != n {
            return Err(Error::SingularBasis(1));
        }
        Ok(GenericBasis { matrix, seed: 0 })
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn field(&self) -> &F {
        self.matrix.field()
    }

    /// Coefficient of `e_rows` in `f_cols`: `det A[rows, cols]`.
    pub fn minor(&self, rows: &Face, cols: &Face) -> F::Elem {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        let mut buf = Vec::with_capacity(k * k);
        for &r in rows.vertices() {
            for &c in cols.vertices() {
                buf.push(self.matrix.get(r - 1, c - 1).clone());
            }
        }
        det_in_place(self.field(), k, &mut buf)
    }
}

/// Coordinates of `q(f_sigma)` on the faces of `k` of the same size, in lex order.
pub fn compound_vector<F: Field>(
    basis: &GenericBasis<F>,
    sigma: &Face,
    k: &SimplicialComplex,
) -> Result<Vec<F::Elem>> {
    if sigma.len() > k.d() {
        return Err(Error::SizeExceedsDimension {
            size: sigma.len(),
            d: k.d(),
        });
    }
    check_basis(basis, k)?;
    Ok(k.faces_of_size(sigma.len())
        .iter()
        .map(|t| basis.minor(t, sigma))
        .collect())
}

fn check_basis<F: Field>(basis: &GenericBasis<F>, k: &SimplicialComplex) -> Result<()> {
    if basis.n() != k.n() {
        return Err(Error::DimensionMismatch(format!(
            "basis on {} vertices, complex on {}",
            basis.n(),
            k.n()
        )));
    }
    Ok(())
}

/// Compound vectors of one size, memoized per face.
pub struct CompoundCache<'a, F: Field> {
    basis: &'a GenericBasis<F>,
    rows: Vec<Face>,
    memo: Mutex<HashMap<Face, Vec<F::Elem>>>,
}

impl<'a, F: Field> CompoundCache<'a, F> {
    pub fn new(basis: &'a GenericBasis<F>, k: &SimplicialComplex, size: usize) -> Result<Self> {
        if size > k.d() {
            return Err(Error::SizeExceedsDimension { size, d: k.d() });
        }
        check_basis(basis, k)?;
        Ok(CompoundCache {
            basis,
            rows: k.faces_of_size(size),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn row_faces(&self) -> &[Face] {
        &self.rows
    }

    pub fn vector(&self, sigma: &Face) -> Vec<F::Elem> {
        if let Some(v) = self.memo.lock().unwrap().get(sigma) {
            return v.clone();
        }
        let v: Vec<F::Elem> = self
            .rows
            .iter()
            .map(|t| self.basis.minor(t, sigma))
            .collect();
        self.memo.lock().unwrap().insert(sigma.clone(), v.clone());
        v
    }

    /// True iff `sigma`'s vector is outside the span of its predecessors.
    pub fn is_shifted_face(&self, sigma: &Face, order: Order, n: usize) -> bool {
        let field = self.basis.field().clone();
        let mut span = EchelonBasis::new(field, self.rows.len());
        for t in (1..=n).combinations(sigma.len()).map(Face::from_sorted) {
            if precedes(order, &t, sigma) {
                span.insert(&self.vector(&t));
                if span.dim() == self.rows.len() {
                    return false;
                }
            }
        }
        !span.contains(&self.vector(sigma))
    }
}

/// Membership of `sigma` in the shifted family for `order`.
pub fn in_delta<F: Field>(
    k: &SimplicialComplex,
    sigma: &Face,
    order: Order,
    basis: &GenericBasis<F>,
) -> Result<bool> {
    if sigma.is_empty() {
        return Ok(true);
    }
    if let Some(v) = sigma.max_vertex().filter(|&v| v > k.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: k.n(),
        });
    }
    let cache = CompoundCache::new(basis, k, sigma.len())?;
    Ok(cache.is_shifted_face(sigma, order, k.n()))
}

/// All size-`size` faces of the shifted complex, in lex order.
pub fn delta_level<F: Field>(
    k: &SimplicialComplex,
    size: usize,
    order: Order,
    basis: &GenericBasis<F>,
) -> Result<Vec<Face>> {
    if size == 0 || size > k.d() {
        return Err(Error::BadParameters(format!(
            "level must be in 1..={}, got {size}",
            k.d()
        )));
    }
    let cache = CompoundCache::new(basis, k, size)?;
    let candidates: Vec<Face> = (1..=k.n())
        .combinations(size)
        .map(Face::from_sorted)
        .collect();
    match order {
        Order::Lex => {
            let mut span = EchelonBasis::new(basis.field().clone(), cache.row_faces().len());
            Ok(candidates
                .into_iter()
                .filter(|s| span.insert(&cache.vector(s)))
                .collect())
        }
        Order::Partial => {
            let keep: Vec<bool> = candidates
                .par_iter()
                .map(|s| cache.is_shifted_face(s, order, k.n()))
                .collect();
            Ok(candidates
                .into_iter()
                .zip(keep)
                .filter_map(|(s, b)| b.then_some(s))
                .collect())
        }
    }
}

/// Union over the trial bases of [`delta_level`]. A degenerate basis can
/// only drop faces, never add them.
pub fn shifted_level(
    k: &SimplicialComplex,
    size: usize,
    order: Order,
    g: &Genericity,
) -> Result<Vec<Face>> {
    g.check()?;
    let mut all = BTreeSet::new();
    for t in 0..g.trials as u64 {
        let basis = GenericBasis::sample(&g.field, k.n(), trial_seed(g.seed, t))?;
        all.extend(delta_level(k, size, order, &basis)?);
    }
    Ok(all.into_iter().collect())
}

pub(crate) fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(trial.wrapping_mul(0xD1B5_4A32_D192_ED03))
        ^ trial
}

/// The linear map `(m_2, ..., m_d) -> sum_i f_{[d]-{i}} ^ m_i` as a
/// `C(n, d) x (d - 1) n` matrix. Column `(i - 2) n + (v - 1)` is the image
/// of `e_v` placed in block `i`.
pub fn psi_matrix<F: Field>(basis: &GenericBasis<F>, d: usize) -> Result<Matrix<F>> {
    let n = basis.n();
    if d < 2 || d > n {
        return Err(Error::BadParameters(format!(
            "psi needs 2 <= d <= n, got d={d}, n={n}"
        )));
    }
    let rows: Vec<Face> = (1..=n).combinations(d).map(Face::from_sorted).collect();
    psi_rows(basis, d, &rows)
}

/// Rows of [`psi_matrix`] for the facets of `k` only, i.e. the matrix of
/// `q . psi`.
pub fn psi_matrix_restricted<F: Field>(
    basis: &GenericBasis<F>,
    k: &SimplicialComplex,
) -> Result<Matrix<F>> {
    check_basis(basis, k)?;
    if k.d() < 2 {
        return Err(Error::BadParameters("psi needs d >= 2".into()));
    }
    psi_rows(basis, k.d(), k.facets())
}

fn psi_rows<F: Field>(basis: &GenericBasis<F>, d: usize, rows: &[Face]) -> Result<Matrix<F>> {
    let n = basis.n();
    let f = basis.field().clone();
    let a = basis.matrix();
    let mut out = Matrix::zeros(f.clone(), rows.len(), (d - 1) * n);
    for (r, tau) in rows.iter().enumerate() {
        for i in 2..=d {
            let cols: Vec<usize> = (1..=d).filter(|&j| j != i).collect();
            for &v in tau.vertices() {
                // det of [f_{[d]-{i}} | e_v] on rows tau
                let mut buf = Vec::with_capacity(d * d);
                for &t in tau.vertices() {
                    for &c in &cols {
                        buf.push(a.get(t - 1, c - 1).clone());
                    }
                    buf.push(if t == v { f.one() } else { f.zero() });
                }
                out.set(r, (i - 2) * n + (v - 1), det_in_place(&f, d, &mut buf));
            }
        }
    }
    Ok(out)
}

/// The `d^2 - d - 1` kernel vectors of psi named in its rank argument: block
/// `i` set to `f_j` for `j in [d] - {i}`, then `m_i = a_i f_i` with
/// alternating-sum-zero coefficients `a_2 = 1, a_k = (-1)^(k+1)`.
pub fn psi_kernel_vectors<F: Field>(
    basis: &GenericBasis<F>,
    d: usize,
) -> Result<Vec<Vec<F::Elem>>> {
    let n = basis.n();
    if d < 2 || d > n {
        return Err(Error::BadParameters(format!(
            "psi needs 2 <= d <= n, got d={d}, n={n}"
        )));
    }
    let f = basis.field().clone();
    let a = basis.matrix();
    let mut out = Vec::new();
    let put = |z: &mut Vec<F::Elem>, i: usize, j: usize, scale: &F::Elem| {
        for v in 0..n {
            let idx = (i - 2) * n + v;
            z[idx] = f.add(&z[idx], &f.mul(scale, a.get(v, j - 1)));
        }
    };
    for i in 2..=d {
        for j in (1..=d).filter(|&j| j != i) {
            let mut z = vec![f.zero(); (d - 1) * n];
            put(&mut z, i, j, &f.one());
            out.push(z);
        }
    }
    for k in 3..=d {
        let mut z = vec![f.zero(); (d - 1) * n];
        put(&mut z, 2, 2, &f.one());
        put(&mut z, k, k, &f.sign(k + 1));
        out.push(z);
    }
    Ok(out)
}

/// Whether `{1, 3, ..., d, n}` is in the `<=_p` shift, OR-ed over trials.
pub fn sigma0_membership(k: &SimplicialComplex, g: &Genericity) -> Result<bool> {
    g.check()?;
    let s0 = sigma0(k.d(), k.n())?;
    for t in 0..g.trials as u64 {
        let basis = GenericBasis::sample(&g.field, k.n(), trial_seed(g.seed, t))?;
        if in_delta(k, &s0, Order::Partial, &basis)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::rigidity::{cofactor, rigidity_matrix, simplex_matrix};

    fn face(v: &[usize]) -> Face {
        Face::new(v.iter().copied()).unwrap()
    }

    fn basis(n: usize, seed: u64) -> GenericBasis<PrimeField> {
        GenericBasis::sample(&PrimeField::default(), n, seed).unwrap()
    }

    #[test]
    fn leq_p_examples() {
        assert!(leq_p(&face(&[1, 3, 5]), &face(&[2, 3, 6])));
        assert!(!leq_p(&face(&[1, 4]), &face(&[2, 3])));
        assert!(!leq_p(&face(&[1, 2]), &face(&[1, 2, 3])));
    }

    #[test]
    fn sigma0_examples() {
        assert_eq!(sigma0(3, 6).unwrap(), face(&[1, 3, 6]));
        assert_eq!(sigma0(4, 9).unwrap(), face(&[1, 3, 4, 9]));
        assert_eq!(sigma0(3, 4).unwrap(), face(&[1, 3, 4]));
        assert!(sigma0(3, 3).is_err());
        assert!(sigma0(2, 5).is_err());
    }

    #[test]
    fn prefix_b_examples() {
        assert_eq!(prefix_b(3, 6).unwrap().len(), 7);
        assert_eq!(
            prefix_b(3, 4).unwrap(),
            vec![face(&[1, 2, 3]), face(&[1, 2, 4]), face(&[1, 3, 4])]
        );
        for (d, n) in [(3, 7), (4, 8), (5, 8)] {
            let b = prefix_b(d, n).unwrap();
            assert_eq!(b.len(), 1 + (n - d) * (d - 1));
            let s0 = sigma0(d, n).unwrap();
            // exactly the <=_p down-set of sigma0
            let brute: Vec<Face> = (1..=n)
                .combinations(d)
                .map(Face::from_sorted)
                .filter(|t| leq_p(t, &s0))
                .collect();
            assert_eq!(b, brute);
        }
    }

    #[test]
    fn compound_vector_examples() {
        let k = SimplicialComplex::build(5, [[1, 2, 3], [2, 4, 5]]).unwrap();
        let b = basis(5, 1);
        let v = compound_vector(&b, &face(&[1]), &k).unwrap();
        assert_eq!(v, vec![1; 5]);
        // edges {1,4} etc. are not faces, so they are absent from the index set
        let e = compound_vector(&b, &face(&[1, 2]), &k).unwrap();
        assert_eq!(e.len(), k.faces_of_size(2).len());
        let full = SimplicialComplex::complete(4, 4).unwrap();
        let b4 = basis(4, 2);
        let top = compound_vector(&b4, &face(&[1, 2, 3, 4]), &full).unwrap();
        assert_eq!(top, vec![b4.matrix().det().unwrap()]);
        assert_ne!(top[0], 0);
        assert!(matches!(
            compound_vector(&b, &face(&[1, 2, 3, 4]), &k),
            Err(Error::SizeExceedsDimension { .. })
        ));
    }

    #[test]
    fn shifted_complex_is_fixed() {
        let k = SimplicialComplex::build(3, [[1, 2], [1, 3]]).unwrap();
        let b = basis(3, 4);
        for s in (1..=3).combinations(2).map(Face::from_sorted) {
            assert_eq!(
                in_delta(&k, &s, Order::Partial, &b).unwrap(),
                k.contains_facet(&s),
                "{s}"
            );
        }
        assert!(in_delta(&k, &face(&[1]), Order::Partial, &b).unwrap());
    }

    #[test]
    fn k33_lex_contains_34() {
        let mut edges = Vec::new();
        for a in 1..=3 {
            for c in 4..=6 {
                edges.push([a, c]);
            }
        }
        let k33 = SimplicialComplex::build(6, edges).unwrap();
        let b = basis(6, 0);
        assert!(in_delta(&k33, &face(&[3, 4]), Order::Lex, &b).unwrap());
        let lex = delta_level(&k33, 2, Order::Lex, &b).unwrap();
        assert_eq!(lex.len(), 9);
        let part = delta_level(&k33, 2, Order::Partial, &b).unwrap();
        assert!(lex.iter().all(|s| part.contains(s)));
    }

    #[test]
    fn psi_rank_and_kernel() {
        let f = PrimeField::default();
        for (d, n) in [(3, 5), (3, 4), (4, 6)] {
            let b = basis(n, 7);
            let m = psi_matrix(&b, d).unwrap();
            assert_eq!(m.rank(), 1 + (n - d) * (d - 1));
            assert_eq!(m.cols() - m.rank(), d * d - d - 1);
            let ker = psi_kernel_vectors(&b, d).unwrap();
            assert_eq!(ker.len(), d * d - d - 1);
            for z in &ker {
                assert!(m.mul_vec(z).unwrap().iter().all(|&x| x == 0));
            }
            assert_eq!(Matrix::from_rows(f, m.cols(), ker).rank(), d * d - d - 1);
        }
    }

    #[test]
    fn psi_entries_are_signed_cofactors() {
        let f = PrimeField::default();
        for n in [4, 5] {
            let d = 3;
            let mut rng = trial_rng(n as u64, 3);
            let p = Placement::random(&f, d, n, &mut rng);
            let b = GenericBasis::from_placement(&f, &p, n, 9).unwrap();
            let m = psi_matrix(&b, d).unwrap();
            let rows: Vec<Face> = (1..=n).combinations(d).map(Face::from_sorted).collect();
            for (r, s) in rows.iter().enumerate() {
                let ms = simplex_matrix(&f, &p, s).unwrap();
                for i in 2..=d {
                    for v in 1..=n {
                        let entry = *m.get(r, (i - 2) * n + v - 1);
                        match s.position(v) {
                            None => assert_eq!(entry, 0),
                            Some(j) => {
                                let c = cofactor(&f, &ms, i - 2, j);
                                assert_eq!(
                                    entry,
                                    f.mul(&f.sign(i - 1), &c),
                                    "sigma {s} i {i} v {v}"
                                );
                            }
                        }
                    }
                }
            }
            let k = SimplicialComplex::complete(n, d).unwrap();
            assert_eq!(
                psi_matrix_restricted(&b, &k).unwrap().rank(),
                rigidity_matrix(&f, &k, &p).unwrap().rank()
            );
        }
    }
}
