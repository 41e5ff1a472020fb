//! The volume-rigidity matrix, its trivial left kernel, and generic rank.
//!
//! Rows come in vertex-major blocks of `d - 1` coordinate rows; columns follow
//! the complex's facet order. The entry for coordinate `i` of the `j`-th
//! vertex of a facet is the cofactor `C_{i,j}` of the lifted simplex matrix,
//! i.e. the derivative of the signed volume with respect to that coordinate.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{det_in_place, trial_rng, Field, Matrix, PrimeField, Rationals};

/// Largest `(d - 1) n` for which the rational cross-check is attempted.
pub const EXACT_CHECK_LIMIT: usize = 24;

/// Trial count, seed and field used for randomized genericity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
}

impl Default for Genericity {
    fn default() -> Self {
        Genericity {
            field: PrimeField::default(),
            trials: 3,
            seed: 0,
        }
    }
}

impl Genericity {
    pub fn new(field: PrimeField, trials: usize, seed: u64) -> Self {
        Genericity {
            field,
            trials,
            seed,
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::BadParameters("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Positions of the vertices `1..=n` in `(d - 1)`-space.
#[derive(Clone, Debug, PartialEq)]
pub struct Placement<F: Field> {
    d: usize,
    coords: Vec<Vec<F::Elem>>,
}

impl<F: Field> Placement<F> {
    /// `coords[v - 1]` holds the `d - 1` coordinates of vertex `v`.
    pub fn new(d: usize, coords: Vec<Vec<F::Elem>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadParameters(format!(
                "placement needs d >= 2, got {d}"
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.len() != d - 1) {
            return Err(Error::DimensionMismatch(format!(
                "vertex with {} coordinates, expected {}",
                c.len(),
                d - 1
            )));
        }
        Ok(Placement { d, coords })
    }

    /// Independent uniform coordinates for `n` vertices.
    pub fn random<R: Rng + ?Sized>(field: &F, d: usize, n: usize, rng: &mut R) -> Self {
        assert!(d >= 2);
        let coords = (0..n)
            .map(|_| (0..d - 1).map(|_| field.sample(rng)).collect())
            .collect();
        Placement { d, coords }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, v: usize) -> Result<&[F::Elem]> {
        if v == 0 {
            return Err(Error::MissingVertexCoordinates(v));
        }
        self.coords
            .get(v - 1)
            .map(Vec::as_slice)
            .ok_or(Error::MissingVertexCoordinates(v))
    }

    /// Same placement with vertex `w` moved onto vertex `u`.
    pub fn identify(&self, u: usize, w: usize) -> Result<Self> {
        let target = self.coord(u)?.to_vec();
        self.coord(w)?;
        let mut coords = self.coords.clone();
        coords[w - 1] = target;
        Ok(Placement { d: self.d, coords })
    }
}

/// `d x d` matrix with column `j` equal to `(p(v_j); 1)`.
pub fn simplex_matrix<F: Field>(field: &F, p: &Placement<F>, sigma: &Face) -> Result<Matrix<F>> {
    let d = p.d;
    if sigma.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "face of size {} for d = {d}",
            sigma.len()
        )));
    }
    let mut m = Matrix::zeros(field.clone(), d, d);
    for (j, &v) in sigma.vertices().iter().enumerate() {
        for (i, x) in p.coord(v)?.iter().enumerate() {
            m.set(i, j, x.clone());
        }
        m.set(d - 1, j, field.one());
    }
    Ok(m)
}

/// Signed cofactor `(-1)^(i+j) det(M without row i, column j)`, zero-based indices.
pub(crate) fn cofactor<F: Field>(field: &F, m: &Matrix<F>, i: usize, j: usize) -> F::Elem {
    let n = m.rows();
    let mut buf = Vec::with_capacity((n - 1) * (n - 1));
    for r in (0..n).filter(|&r| r != i) {
        for c in (0..n).filter(|&c| c != j) {
            buf.push(m.get(r, c).clone());
        }
    }
    let minor = det_in_place(field, n - 1, &mut buf);
    if (i + j).is_multiple_of(2) {
        minor
    } else {
        field.neg(&minor)
    }
}

/// The `(d - 1) n x f_{d-1}(K)` volume-rigidity matrix.
pub fn rigidity_matrix<F: Field>(
    field: &F,
    k: &SimplicialComplex,
    p: &Placement<F>,
) -> Result<Matrix<F>> {
    let d = k.d();
    if p.d != d {
        return Err(Error::DimensionMismatch(format!(
            "placement for d = {} but complex has d = {d}",
            p.d
        )));
    }
    if d < 2 {
        return Err(Error::DimensionMismatch(
            "volume rigidity needs d >= 2".into(),
        ));
    }
    let dim = d - 1;
    let mut out = Matrix::zeros(field.clone(), dim * k.n(), k.num_facets());
    for (col, sigma) in k.facets().iter().enumerate() {
        let m = simplex_matrix(field, p, sigma)?;
        for (j, &v) in sigma.vertices().iter().enumerate() {
            for i in 0..dim {
                out.set((v - 1) * dim + i, col, cofactor(field, &m, i, j));
            }
        }
    }
    Ok(out)
}

/// Rows `z` with `z_v = A p(v) + u`, `trace(A) = 0`: first the off-diagonal
/// units `E_ab`, then `E_aa - E_{a+1,a+1}`, then the translations.
pub fn trivial_motion_basis<F: Field>(field: &F, p: &Placement<F>, n: usize) -> Result<Matrix<F>> {
    let dim = p.d - 1;
    let coords: Vec<&[F::Elem]> = (1..=n).map(|v| p.coord(v)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let motion = |a_entries: &[(usize, usize, bool)], u: Option<usize>| {
        let mut z = vec![field.zero(); dim * n];
        for (v, c) in coords.iter().enumerate() {
            for &(a, b, negate) in a_entries {
                let x = if negate {
                    field.neg(&c[b])
                } else {
                    c[b].clone()
                };
                z[v * dim + a] = field.add(&z[v * dim + a], &x);
            }
            if let Some(a) = u {
                z[v * dim + a] = field.add(&z[v * dim + a], &field.one());
            }
        }
        z
    };
    for a in 0..dim {
        for b in 0..dim {
            if a != b {
                rows.push(motion(&[(a, b, false)], None));
            }
        }
    }
    for a in 0..dim.saturating_sub(1) {
        rows.push(motion(&[(a, a, false), (a + 1, a + 1, true)], None));
    }
    for a in 0..dim {
        rows.push(motion(&[], Some(a)));
    }
    Ok(Matrix::from_rows(field.clone(), dim * n, rows))
}

/// `(d - 1) n - (d^2 - d - 1)`, the rank of a volume-rigid complex.
pub fn target_rank(n: usize, d: usize) -> usize {
    ((d - 1) * n).saturating_sub(d * d - d - 1)
}

/// Outcome of a randomized generic-rank computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub generic_rank: usize,
    pub target_rank: usize,
    pub trials: usize,
    pub is_rigid: bool,
    pub corank: usize,
    /// Rank observed in each trial.
    pub trial_ranks: Vec<usize>,
    /// False when the trials disagreed, which signals a degenerate sample.
    pub stable: bool,
    pub field: String,
}

impl RigidityReport {
    fn from_ranks(k: &SimplicialComplex, ranks: Vec<usize>, field: String) -> Self {
        let generic_rank = ranks.iter().copied().max().unwrap_or(0);
        let target = target_rank(k.n(), k.d());
        RigidityReport {
            generic_rank,
            target_rank: target,
            trials: ranks.len(),
            is_rigid: generic_rank == target,
            corank: target.saturating_sub(generic_rank),
            stable: ranks.iter().all(|&r| r == generic_rank),
            trial_ranks: ranks,
            field,
        }
    }
}

/// Max rank of the rigidity matrix over `trials` random placements.
///
/// A random placement can only lose rank, so the maximum is a lower bound
/// that is exact except with probability `deg / p` per trial.
pub fn generic_rank(k: &SimplicialComplex, g: &Genericity) -> Result<RigidityReport> {
    g.check()?;
    if k.d() < 2 {
        return Err(Error::BadParameters("volume rigidity needs d >= 2".into()));
    }
    let ranks = (0..g.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(g.seed, t);
            let p = Placement::random(&g.field, k.d(), k.n(), &mut rng);
            rigidity_matrix(&g.field, k, &p).map(|m| m.rank())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RigidityReport::from_ranks(k, ranks, g.field.describe()))
}

pub fn is_volume_rigid(k: &SimplicialComplex, g: &Genericity) -> Result<bool> {
    Ok(generic_rank(k, g)?.is_rigid)
}

/// Rank over the rationals at a random integer placement. Only for
/// `(d - 1) n <= EXACT_CHECK_LIMIT`.
pub fn exact_rank(k: &SimplicialComplex, seed: u64) -> Result<usize> {
    let size = (k.d() - 1) * k.n();
    if size > EXACT_CHECK_LIMIT {
        return Err(Error::InstanceTooLarge {
            n: size,
            cap: EXACT_CHECK_LIMIT,
        });
    }
    let q = Rationals;
    let mut rng = trial_rng(seed, u64::MAX);
    let p = Placement::random(&q, k.d(), k.n(), &mut rng);
    Ok(rigidity_matrix(&q, k, &p)?.rank())
}

/// Whether the given facets index independent columns of the rigidity
/// matrix of the complete complex on `k`'s vertices.
pub fn columns_independent(k: &SimplicialComplex, subset: &[Face], g: &Genericity) -> Result<bool> {
    for f in subset {
        if f.len() != k.d() {
            return Err(Error::MixedDimension {
                expected: k.d(),
                found: f.len(),
            });
        }
        if let Some(v) = f.max_vertex().filter(|&v| v > k.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: k.n(),
            });
        }
    }
    let sub = SimplicialComplex::empty(k.n(), k.d())?.with_facets(subset.iter().cloned())?;
    if sub.num_facets() != subset.len() {
        // repeated columns
        return Ok(false);
    }
    Ok(generic_rank(&sub, g)?.generic_rank == subset.len())
}
