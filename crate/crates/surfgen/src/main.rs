//! Builds the irreducible triangulation datasets for the projective plane,
//! the torus and the Klein bottle.
//!
//! Each sample starts from a small seed triangulation, grows it with random
//! triangle and edge subdivisions, mixes it with edge flips, then contracts
//! random edges satisfying the link condition until none is left. The fixed
//! points are collected up to isomorphism.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use clap::Parser;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use volrig_core::cycles::{contraction_reduce, default_admissible, link_condition};
use volrig_core::io::write_dataset;
use volrig_core::surfaces::{
    self, canonical_form, euler_characteristic, is_closed_surface, is_orientable,
};
use volrig_core::{Face, SimplicialComplex};

#[derive(Parser)]
#[command(
    name = "surfgen",
    about = "Generate irreducible surface triangulation datasets"
)]
struct Args {
    /// Output root; one subdirectory per surface is written.
    #[arg(long, default_value = "data/surfaces")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Stop once this many consecutive samples found nothing new.
    #[arg(long, default_value_t = 4000)]
    patience: usize,
    /// Largest triangulation grown before reduction.
    #[arg(long, default_value_t = 24)]
    max_vertices: usize,
    /// Only generate this surface (projective_plane, torus, klein_bottle).
    #[arg(long)]
    surface: Option<String>,
}

type Tri = [usize; 3];

fn sorted(mut t: Tri) -> Tri {
    t.sort_unstable();
    t
}

fn third(t: &Tri, u: usize, w: usize) -> usize {
    *t.iter()
        .find(|&&x| x != u && x != w)
        .expect("triangle has a third vertex")
}

struct Surface {
    n: usize,
    tris: BTreeSet<Tri>,
}

impl Surface {
    fn from_complex(k: &SimplicialComplex) -> Self {
        let tris = k
            .facets()
            .iter()
            .map(|f| [f.vertices()[0], f.vertices()[1], f.vertices()[2]])
            .collect();
        Surface { n: k.n(), tris }
    }

    fn to_complex(&self) -> SimplicialComplex {
        SimplicialComplex::build(self.n, self.tris.iter().copied())
            .expect("moves keep the complex valid")
    }

    fn on_edge(&self, u: usize, w: usize) -> Vec<Tri> {
        self.tris
            .iter()
            .filter(|t| t.contains(&u) && t.contains(&w))
            .copied()
            .collect()
    }

    fn is_edge(&self, u: usize, w: usize) -> bool {
        self.tris.iter().any(|t| t.contains(&u) && t.contains(&w))
    }

    fn split_triangle<R: Rng>(&mut self, rng: &mut R) {
        let t = *self
            .tris
            .iter()
            .nth(rng.gen_range(0..self.tris.len()))
            .expect("nonempty");
        self.n += 1;
        let v = self.n;
        self.tris.remove(&t);
        for i in 0..3 {
            let mut s = t;
            s[i] = v;
            self.tris.insert(sorted(s));
        }
    }

    fn random_edge<R: Rng>(&self, rng: &mut R) -> (usize, usize) {
        let t = self
            .tris
            .iter()
            .nth(rng.gen_range(0..self.tris.len()))
            .expect("nonempty");
        let i = rng.gen_range(0..3);
        (t[i], t[(i + 1) % 3])
    }

    fn split_edge<R: Rng>(&mut self, rng: &mut R) {
        let (u, w) = self.random_edge(rng);
        self.n += 1;
        let v = self.n;
        for t in self.on_edge(u, w) {
            let x = third(&t, u, w);
            self.tris.remove(&t);
            self.tris.insert(sorted([u, v, x]));
            self.tris.insert(sorted([w, v, x]));
        }
    }

    fn flip<R: Rng>(&mut self, rng: &mut R) {
        let (u, w) = self.random_edge(rng);
        let pair = self.on_edge(u, w);
        let (x, y) = (third(&pair[0], u, w), third(&pair[1], u, w));
        if x == y || self.is_edge(x, y) {
            return;
        }
        for t in &pair {
            self.tris.remove(t);
        }
        self.tris.insert(sorted([u, x, y]));
        self.tris.insert(sorted([w, x, y]));
    }
}

/// Contracts random link-condition edges until the triangulation is irreducible.
fn reduce<R: Rng>(mut k: SimplicialComplex, rng: &mut R) -> SimplicialComplex {
    loop {
        let mut edges: Vec<Face> = k.faces_of_size(2);
        edges.shuffle(rng);
        let next = edges.iter().find_map(|e| {
            let (u, w) = (e.vertices()[0], e.vertices()[1]);
            if link_condition(&k, u, w) {
                k.contract_edge(u, w).ok()
            } else {
                None
            }
        });
        match next {
            Some(c) => k = c,
            None => return k,
        }
    }
}

fn sample<R: Rng>(seed: &SimplicialComplex, max_vertices: usize, rng: &mut R) -> SimplicialComplex {
    let mut s = Surface::from_complex(seed);
    let target = rng.gen_range(seed.n() + 1..=max_vertices);
    while s.n < target {
        if rng.gen_bool(0.5) {
            s.split_triangle(rng);
        } else {
            s.split_edge(rng);
        }
    }
    for _ in 0..4 * s.tris.len() {
        s.flip(rng);
    }
    reduce(s.to_complex(), rng)
}

fn collect(
    name: &str,
    seed: &SimplicialComplex,
    args: &Args,
    rng: &mut ChaCha8Rng,
) -> Vec<SimplicialComplex> {
    let (chi, orientable) = (euler_characteristic(seed), is_orientable(seed));
    let mut found: BTreeMap<(usize, Vec<Face>), SimplicialComplex> = BTreeMap::new();
    let (mut idle, mut total) = (0, 0);
    while idle < args.patience {
        total += 1;
        let k = canonical_form(&sample(seed, args.max_vertices, rng));
        assert!(
            is_closed_surface(&k)
                && euler_characteristic(&k) == chi
                && is_orientable(&k) == orientable
        );
        // no admissible edge left
        assert!(contraction_reduce(&k, default_admissible).1.is_empty());
        let key = (k.n(), k.facets().to_vec());
        if let std::collections::btree_map::Entry::Vacant(e) = found.entry(key) {
            e.insert(k);
            idle = 0;
        } else {
            idle += 1;
        }
    }
    eprintln!(
        "{name}: {} irreducible triangulations after {total} samples",
        found.len()
    );
    found.into_values().collect()
}

fn main() {
    let args = Args::parse();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let seeds = [
        ("projective_plane", "rp2", surfaces::projective_plane_6()),
        ("torus", "torus", surfaces::grid_torus(3, 3)),
        ("klein_bottle", "klein", surfaces::grid_klein_bottle(3, 4)),
    ];
    for (dir, prefix, seed) in seeds {
        if args.surface.as_deref().is_some_and(|s| s != dir) {
            continue;
        }
        let found = collect(dir, &seed, &args, &mut rng);
        let mut per_n: BTreeMap<usize, usize> = BTreeMap::new();
        let items: Vec<(String, SimplicialComplex)> = found
            .into_iter()
            .map(|k| {
                let c = per_n.entry(k.n()).or_default();
                *c += 1;
                (format!("{prefix}_{:02}_{:02}.cx", k.n(), c), k)
            })
            .collect();
        let provenance = format!(
            "Irreducible triangulations of the {} found by volrig-surfgen.\nRandom subdivisions and flips of a seed triangulation, then random link-condition contractions.\nseed {} patience {} max-vertices {}; complexes listed in canonical labelling.",
            dir.replace('_', " "),
            args.seed,
            args.patience,
            args.max_vertices
        );
        write_dataset(&args.out.join(dir), &items, &provenance).unwrap_or_else(|e| panic!("{e}"));
    }
}
