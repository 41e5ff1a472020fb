//! `(a, b)`-sparsity of `d`-uniform hypergraphs by subset enumeration.

use itertools::Itertools;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};

/// Largest vertex count accepted by the brute-force checks.
pub const BRUTE_FORCE_CAP: usize = 22;

/// Every vertex set `A` with `|A| >= d` spans at most `a |A| - b` facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityParams {
    pub a: usize,
    pub b: usize,
    pub d: usize,
}

impl SparsityParams {
    pub fn new(a: usize, b: usize, d: usize) -> Result<Self> {
        if a == 0 || d == 0 {
            return Err(Error::BadParameters(format!(
                "sparsity needs a >= 1 and d >= 1, got a={a}, d={d}"
            )));
        }
        Ok(SparsityParams { a, b, d })
    }

    /// `(d - 1, d^2 - d - 1)`, the counts matching volume rigidity.
    pub fn volume(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadParameters(format!(
                "volume sparsity needs d >= 2, got {d}"
            )));
        }
        Self::new(d - 1, d * d - d - 1, d)
    }

    /// `a |A| - b`, possibly negative.
    pub fn bound(&self, size: usize) -> i64 {
        (self.a * size) as i64 - self.b as i64
    }
}

/// Result of a sparsity check; `witness` is the first smallest violator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityVerdict {
    pub sparse: bool,
    pub witness: Option<Face>,
}

fn check_size(k: &SimplicialComplex, params: &SparsityParams) -> Result<()> {
    if k.n() > BRUTE_FORCE_CAP {
        return Err(Error::InstanceTooLarge {
            n: k.n(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    if params.d != k.d() {
        return Err(Error::DimensionMismatch(format!(
            "params for d={} on a complex with d={}",
            params.d,
            k.d()
        )));
    }
    Ok(())
}

fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | (1u64 << (v - 1)))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of facets contained in the vertex set `a`.
pub fn spanned_count(k: &SimplicialComplex, a: &[usize]) -> usize {
    let m = mask_of(a);
    k.facets().iter().filter(|f| f.mask() & !m == 0).count()
}

pub fn is_sparse(k: &SimplicialComplex, params: &SparsityParams) -> Result<SparsityVerdict> {
    check_size(k, params)?;
    let masks: Vec<u64> = k.facets().iter().map(Face::mask).collect();
    let n = k.n();
    for size in params.d..=n {
        let bound = params.bound(size);
        // no set of this size can span more than C(size, d) facets
        if bound >= 0 && binomial(size, params.d) <= bound as u128 {
            continue;
        }
        for a in (1..=n).combinations(size) {
            let m = mask_of(&a);
            let count = masks.iter().filter(|&&f| f & !m == 0).count() as i64;
            if count > bound {
                return Ok(SparsityVerdict {
                    sparse: false,
                    witness: Some(Face::from_sorted(a)),
                });
            }
        }
    }
    Ok(SparsityVerdict {
        sparse: true,
        witness: None,
    })
}

/// Sparse with exactly `a n - b` facets.
pub fn is_tight(k: &SimplicialComplex, params: &SparsityParams) -> Result<bool> {
    let sparse = is_sparse(k, params)?.sparse;
    Ok(sparse && k.num_facets() as i64 == params.bound(k.n()))
}

/// Output of greedy completion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub complex: SimplicialComplex,
    /// Facets added by the greedy pass, in the order they were added.
    pub added: Vec<Face>,
}

/// Adds `d`-subsets in lex order while sparsity holds, until `a n - b`
/// facets are reached or no candidate is left.
pub fn complete_to_sparse_basis(
    k: &SimplicialComplex,
    params: &SparsityParams,
) -> Result<Completion> {
    let verdict = is_sparse(k, params)?;
    if !verdict.sparse {
        return Err(Error::BadParameters(format!(
            "input is not sparse; violated by {}",
            verdict.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let n = k.n();
    let target = params.bound(n);
    let mut masks: Vec<u64> = k.facets().iter().map(Face::mask).collect();
    let mut added = Vec::new();
    for cand in (1..=n).combinations(params.d).map(Face::from_sorted) {
        if masks.len() as i64 >= target {
            break;
        }
        if k.contains_facet(&cand) || added.contains(&cand) {
            continue;
        }
        let cm = cand.mask();
        let rest: Vec<usize> = (1..=n).filter(|v| !cand.contains(*v)).collect();
        // only supersets of the candidate gain a facet
        let ok = (0u64..1 << rest.len()).all(|bits| {
            let extra = rest
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0u64, |m, (_, &v)| m | 1 << (v - 1));
            let a = cm | extra;
            let size = a.count_ones() as usize;
            let count = 1 + masks.iter().filter(|&&f| f & !a == 0).count() as i64;
            count <= params.bound(size)
        });
        if ok {
            masks.push(cm);
            added.push(cand);
        }
    }
    let complex = k.with_facets(added.iter().cloned())?;
    Ok(Completion { complex, added })
}

/// The cone over `K_{3,3}` iterated `d - 2` times, with the sparsity
/// completion applied to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub d: usize,
    pub cone: SimplicialComplex,
    pub completion: Completion,
}

/// `K_{3,3}` on parts `{1,2,3}` and `{4,5,6}`.
pub fn k33() -> SimplicialComplex {
    let edges = (1..=3).cartesian_product(4..=6).map(|(a, b)| [a, b]);
    SimplicialComplex::build(6, edges).expect("K33 is a valid graph")
}

pub fn build_counterexample(d: usize) -> Result<Counterexample> {
    if d < 3 {
        return Err(Error::BadParameters(format!(
            "counterexample needs d >= 3, got {d}"
        )));
    }
    let mut cone = k33();
    for _ in 0..d - 2 {
        cone = cone.cone(cone.n() + 1)?;
    }
    let completion = complete_to_sparse_basis(&cone, &SparsityParams::volume(d)?)?;
    Ok(Counterexample {
        d,
        cone,
        completion,
    })
}
