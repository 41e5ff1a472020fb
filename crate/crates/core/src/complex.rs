//! Pure simplicial complexes stored as a canonical sorted facet list.
//!
//! Vertex labels are `1..=n`. Every operation returns a new complex; nothing
//! is mutated after construction.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// A face: a strictly increasing list of positive vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    /// Sorts the labels and rejects repeats and zero.
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self> {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        if let Some(&first) = v.first() {
            if first == 0 {
                return Err(Error::VertexOutOfRange { vertex: 0, n: 0 });
            }
        }
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(w[0]));
        }
        Ok(Face(v))
    }

    /// Caller guarantees the labels are strictly increasing and positive.
    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(v.first().is_none_or(|&x| x >= 1));
        Face(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Zero-based position of `v` in the face.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn without(&self, v: usize) -> Face {
        Face(self.0.iter().copied().filter(|&x| x != v).collect())
    }

    pub fn with(&self, v: usize) -> Face {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Face(out)
    }

    /// Adds `k` to every label.
    pub fn shifted(&self, k: usize) -> Face {
        Face(self.0.iter().map(|v| v + k).collect())
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Bit `v-1` set for every vertex `v`. Labels must be at most 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| m | (1u64 << (v - 1)))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A pure complex on vertices `1..=n` whose facets all have `d` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimplicialComplex {
    n: usize,
    d: usize,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds the canonical complex from raw facet tuples.
    ///
    /// Tuples equal after sorting are merged; a tuple repeating a vertex is an error.
    pub fn build<I, T>(n: usize, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut d = None;
        let mut set = BTreeSet::new();
        for raw in facets {
            let raw = raw.as_ref();
            if let Some(&v) = raw.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let face = Face::new(raw.iter().copied())?;
            match d {
                None => d = Some(face.len()),
                Some(expected) if expected != face.len() => {
                    return Err(Error::MixedDimension {
                        expected,
                        found: face.len(),
                    })
                }
                _ => {}
            }
            set.insert(face);
        }
        let d = d.ok_or(Error::EmptyFacetList)?;
        if d == 0 {
            return Err(Error::MixedDimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(SimplicialComplex {
            n,
            d,
            facets: set.into_iter().collect(),
        })
    }

    /// Complex with no facets; only useful as a seed for greedy completion.
    pub fn empty(n: usize, d: usize) -> Result<Self> {
        if d == 0 || n < d {
            return Err(Error::BadParameters(format!(
                "empty complex needs 1 <= d <= n, got n={n}, d={d}"
            )));
        }
        Ok(SimplicialComplex {
            n,
            d,
            facets: Vec::new(),
        })
    }

    /// Builds from faces already validated against `n` and `d`.
    pub(crate) fn from_faces(n: usize, d: usize, faces: impl IntoIterator<Item = Face>) -> Self {
        let set: BTreeSet<Face> = faces.into_iter().collect();
        debug_assert!(set
            .iter()
            .all(|f| f.len() == d && f.max_vertex().unwrap_or(0) <= n));
        SimplicialComplex {
            n,
            d,
            facets: set.into_iter().collect(),
        }
    }

    /// The complete `d`-uniform complex on `n` vertices.
    pub fn complete(n: usize, d: usize) -> Result<Self> {
        if d == 0 || n < d {
            return Err(Error::BadParameters(format!(
                "complete complex needs 1 <= d <= n, got n={n}, d={d}"
            )));
        }
        Ok(Self::from_faces(
            n,
            d,
            (1..=n).combinations(d).map(Face::from_sorted),
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Facet cardinality; the complex has dimension `d - 1`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facet_index(&self, f: &Face) -> Option<usize> {
        self.facets.binary_search(f).ok()
    }

    pub fn contains_facet(&self, f: &Face) -> bool {
        self.facet_index(f).is_some()
    }

    /// True if the face (of any size up to `d`) lies in some facet.
    pub fn contains_face(&self, f: &Face) -> bool {
        f.len() <= self.d && self.facets.iter().any(|s| f.is_subset_of(s))
    }

    /// Faces with `k + 1` vertices, in lex order.
    pub fn k_faces(&self, k: usize) -> Result<Vec<Face>> {
        if k >= self.d {
            return Err(Error::KOutOfRange { k, d: self.d });
        }
        Ok(self.faces_of_size(k + 1))
    }

    /// Faces with exactly `size` vertices, in lex order. Empty if `size > d`.
    pub fn faces_of_size(&self, size: usize) -> Vec<Face> {
        if size > self.d {
            return Vec::new();
        }
        if size == self.d {
            return self.facets.clone();
        }
        let set: BTreeSet<Face> = self
            .facets
            .iter()
            .flat_map(|s| {
                s.vertices()
                    .iter()
                    .copied()
                    .combinations(size)
                    .map(Face::from_sorted)
            })
            .collect();
        set.into_iter().collect()
    }

    /// `f_k` for `k = 0..d`.
    pub fn f_vector(&self) -> Vec<usize> {
        (1..=self.d).map(|s| self.faces_of_size(s).len()).collect()
    }

    /// Vertices that lie in at least one facet.
    pub fn used_vertices(&self) -> BTreeSet<usize> {
        self.facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect()
    }

    /// Cone with a new vertex `apex = n + 1` added to every facet.
    pub fn cone(&self, apex: usize) -> Result<Self> {
        if apex <= self.n {
            return Err(Error::ApexCollision { apex, n: self.n });
        }
        if apex != self.n + 1 {
            return Err(Error::BadParameters(format!(
                "apex must be n+1 = {}, got {apex}",
                self.n + 1
            )));
        }
        Ok(Self::from_faces(
            apex,
            self.d + 1,
            self.facets.iter().map(|f| f.with(apex)),
        ))
    }

    /// Union of facet sets. Labels are assumed to be aligned already.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::MixedDimension {
                expected: self.d,
                found: other.d,
            });
        }
        let n = self.n.max(other.n);
        Ok(Self::from_faces(
            n,
            self.d,
            self.facets.iter().chain(other.facets.iter()).cloned(),
        ))
    }

    /// Adds facets, ignoring ones already present.
    pub fn with_facets<I: IntoIterator<Item = Face>>(&self, extra: I) -> Result<Self> {
        let mut all = self.facets.clone();
        for f in extra {
            self.check_face(&f)?;
            if f.len() != self.d {
                return Err(Error::MixedDimension {
                    expected: self.d,
                    found: f.len(),
                });
            }
            all.push(f);
        }
        Ok(Self::from_faces(self.n, self.d, all))
    }

    /// The complex with one facet removed; may be empty.
    pub fn remove_facet(&self, f: &Face) -> Result<Self> {
        let idx = self
            .facet_index(f)
            .ok_or_else(|| Error::FacetNotPresent(f.to_string()))?;
        let mut facets = self.facets.clone();
        facets.remove(idx);
        Ok(SimplicialComplex {
            n: self.n,
            d: self.d,
            facets,
        })
    }

    /// Subcomplex spanned by the given facet indices.
    pub fn sub_complex(&self, indices: &[usize]) -> Self {
        Self::from_faces(
            self.n,
            self.d,
            indices.iter().map(|&i| self.facets[i].clone()),
        )
    }

    pub fn is_edge(&self, u: usize, w: usize) -> bool {
        u != w && self.facets.iter().any(|f| f.contains(u) && f.contains(w))
    }

    /// Identifies the larger endpoint with the smaller one, drops collapsed
    /// facets and duplicates, and closes the gap in the labels.
    pub fn contract_edge(&self, u: usize, w: usize) -> Result<Self> {
        let (keep, gone) = if u < w { (u, w) } else { (w, u) };
        if self.d < 2 || !self.is_edge(keep, gone) {
            return Err(Error::NotAnEdge { u, w });
        }
        let relabel = |v: usize| match v.cmp(&gone) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => v - 1,
        };
        let faces: Vec<Face> = self
            .facets
            .iter()
            .filter(|f| !(f.contains(keep) && f.contains(gone)))
            .map(|f| {
                let mut v: Vec<usize> = f.vertices().iter().map(|&x| relabel(x)).collect();
                v.sort_unstable();
                Face::from_sorted(v)
            })
            .collect();
        if faces.is_empty() {
            return Err(Error::ContractionAnnihilates { u, w });
        }
        Ok(Self::from_faces(self.n - 1, self.d, faces))
    }

    /// Facets containing `f`.
    pub fn facets_containing(&self, f: &Face) -> Result<Vec<Face>> {
        if f.len() > self.d {
            return Err(Error::FaceTooLarge {
                size: f.len(),
                d: self.d,
            });
        }
        Ok(self
            .facets
            .iter()
            .filter(|s| f.is_subset_of(s))
            .cloned()
            .collect())
    }

    /// Applies a permutation of `1..=n`; `map[v - 1]` is the new label of `v`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "relabeling has {} entries for {} vertices",
                map.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &t in map {
            if t == 0 || t > self.n || std::mem::replace(&mut seen[t - 1], true) {
                return Err(Error::BadParameters(
                    "relabeling is not a permutation of 1..=n".into(),
                ));
            }
        }
        let faces = self.facets.iter().map(|f| {
            let mut v: Vec<usize> = f.vertices().iter().map(|&x| map[x - 1]).collect();
            v.sort_unstable();
            Face::from_sorted(v)
        });
        Ok(Self::from_faces(self.n, self.d, faces))
    }

    fn check_face(&self, f: &Face) -> Result<()> {
        match f.max_vertex() {
            Some(v) if v > self.n => Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} d={} [{}]",
            self.n,
            self.d,
            self.facets.iter().join(" ")
        )
    }
}
