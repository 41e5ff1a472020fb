#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use volrig_core::shifting::leq_p;
use volrig_core::{Face, SimplicialComplex};

/// `m` distinct `d`-subsets of `[n]` chosen uniformly.
pub fn random_complex<R: Rng>(n: usize, d: usize, m: usize, rng: &mut R) -> SimplicialComplex {
    let mut all: Vec<Vec<usize>> = (1..=n).combinations(d).collect();
    all.shuffle(rng);
    all.truncate(m.max(1));
    SimplicialComplex::build(n, all).unwrap()
}

/// Down-closure under the componentwise order of a few random `d`-sets.
pub fn random_shifted<R: Rng>(n: usize, d: usize, rng: &mut R) -> SimplicialComplex {
    let all: Vec<Face> = (1..=n)
        .combinations(d)
        .map(|v| Face::new(v).unwrap())
        .collect();
    let gens: Vec<&Face> = (0..rng.gen_range(1..=3))
        .map(|_| &all[rng.gen_range(0..all.len())])
        .collect();
    let facets: Vec<Vec<usize>> = all
        .iter()
        .filter(|s| gens.iter().any(|g| leq_p(s, g)))
        .map(|s| s.vertices().to_vec())
        .collect();
    SimplicialComplex::build(n, facets).unwrap()
}

/// `1 * (L + 1)`: shift every label up by one and cone from vertex 1.
pub fn cone_at_one(l: &SimplicialComplex) -> SimplicialComplex {
    let n = l.n();
    let c = l.cone(n + 1).unwrap();
    let mut map: Vec<usize> = (2..=n + 1).collect();
    map.push(1);
    c.relabel(&map).unwrap()
}
