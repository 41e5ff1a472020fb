mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use volrig_core::cycles::{
    contraction_reduce, default_admissible, is_minimal_cycle, is_minimal_cycle_over,
};
use volrig_core::io::load_dataset;
use volrig_core::linalg::{trial_rng, EchelonBasis, PrimeField};
use volrig_core::rigidity::{columns_independent, exact_rank};
use volrig_core::shifting::{delta_level, leq_p, CompoundCache, GenericBasis, Order};
use volrig_core::sparsity::{is_sparse, k33, SparsityParams};
use volrig_core::surfaces::{self, canonical_form};
use volrig_core::{generic_rank, is_volume_rigid, Face, Genericity, SimplicialComplex};

use common::random_complex;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/surfaces")
        .join(name)
}

fn small_corpus(seed: u64, count: usize) -> Vec<SimplicialComplex> {
    let mut rng = trial_rng(seed, 0);
    (0..count)
        .map(|i| {
            let d = 3 + i % 2;
            let n = rng.gen_range(d + 1..=7);
            let t = (d - 1) * n - (d * d - d - 1);
            let m = rng.gen_range(t.saturating_sub(3).max(1)..=t + 3);
            random_complex(n, d, m, &mut rng)
        })
        .collect()
}

fn relabel_into(k: &SimplicialComplex, map: &[usize], n: usize) -> SimplicialComplex {
    let facets = k
        .facets()
        .iter()
        .map(|f| f.vertices().iter().map(|&v| map[v - 1]).collect::<Vec<_>>());
    SimplicialComplex::build(n, facets).unwrap()
}

#[test]
fn shifted_levels_are_down_closed() {
    let f = PrimeField::default();
    for (i, k) in small_corpus(1, 30).iter().enumerate() {
        let basis = GenericBasis::sample(&f, k.n(), i as u64).unwrap();
        let level: BTreeSet<Face> = delta_level(k, k.d(), Order::Partial, &basis)
            .unwrap()
            .into_iter()
            .collect();
        assert!(level.len() >= k.num_facets());
        for s in &level {
            for t in (1..=k.n())
                .combinations(k.d())
                .map(|v| Face::new(v).unwrap())
            {
                if leq_p(&t, s) {
                    assert!(level.contains(&t), "{t} below {s} missing for {k}");
                }
            }
        }
    }
}

#[test]
fn shifting_is_monotone_under_subcomplexes() {
    let f = PrimeField::default();
    let mut rng = trial_rng(3, 0);
    for (i, k) in small_corpus(3, 20).iter().enumerate() {
        let keep: Vec<Face> = k
            .facets()
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .cloned()
            .collect();
        if keep.is_empty() {
            continue;
        }
        let sub = SimplicialComplex::empty(k.n(), k.d())
            .unwrap()
            .with_facets(keep)
            .unwrap();
        let basis = GenericBasis::sample(&f, k.n(), i as u64).unwrap();
        for order in [Order::Partial, Order::Lex] {
            let big: BTreeSet<Face> = delta_level(k, k.d(), order, &basis)
                .unwrap()
                .into_iter()
                .collect();
            for s in delta_level(&sub, k.d(), order, &basis).unwrap() {
                assert!(big.contains(&s));
            }
        }
    }
}

/// Random topological order of the componentwise partial order.
fn random_extension<R: Rng>(n: usize, d: usize, rng: &mut R) -> Vec<Face> {
    let mut rest: Vec<Face> = (1..=n)
        .combinations(d)
        .map(|v| Face::new(v).unwrap())
        .collect();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let minimal: Vec<usize> = (0..rest.len())
            .filter(|&i| !rest.iter().any(|t| t != &rest[i] && leq_p(t, &rest[i])))
            .collect();
        let pick = *minimal.choose(rng).unwrap();
        out.push(rest.remove(pick));
    }
    out
}

#[test]
fn linear_extension_shifts_lie_in_partial_shift() {
    let f = PrimeField::default();
    let mut rng = trial_rng(4, 0);
    for (i, k) in small_corpus(4, 12).iter().enumerate() {
        let basis = GenericBasis::sample(&f, k.n(), i as u64).unwrap();
        let partial: BTreeSet<Face> = delta_level(k, k.d(), Order::Partial, &basis)
            .unwrap()
            .into_iter()
            .collect();
        let cache = CompoundCache::new(&basis, k, k.d()).unwrap();
        let mut union = BTreeSet::new();
        for _ in 0..4 {
            let order = random_extension(k.n(), k.d(), &mut rng);
            let mut span = EchelonBasis::new(f, cache.row_faces().len());
            let shifted: Vec<Face> = order
                .into_iter()
                .filter(|s| span.insert(&cache.vector(s)))
                .collect();
            assert_eq!(shifted.len(), k.num_facets());
            union.extend(shifted);
        }
        assert!(union.is_subset(&partial), "{k}");
        let lex: BTreeSet<Face> = delta_level(k, k.d(), Order::Lex, &basis)
            .unwrap()
            .into_iter()
            .collect();
        assert!(lex.is_subset(&partial));
    }
}

#[test]
fn generic_rank_is_stable_across_seeds() {
    for k in small_corpus(5, 30) {
        let ranks: Vec<usize> = (0..3)
            .map(|s| {
                let r =
                    generic_rank(&k, &Genericity::new(PrimeField::default(), 3, 17 * s)).unwrap();
                assert!(r.stable, "{k}");
                r.generic_rank
            })
            .collect();
        assert!(ranks.iter().all(|&r| r == ranks[0]));
        assert!(ranks[0] <= k.num_facets().min(volrig_core::target_rank(k.n(), k.d())));
    }
}

#[test]
fn prime_rank_matches_rational_rank() {
    for (i, k) in small_corpus(6, 20)
        .into_iter()
        .filter(|k| (k.d() - 1) * k.n() <= 24)
        .enumerate()
    {
        let r = generic_rank(&k, &Genericity::default())
            .unwrap()
            .generic_rank;
        assert_eq!(exact_rank(&k, i as u64).unwrap(), r, "{k}");
    }
}

#[test]
fn cone_preserves_volume_sparsity() {
    assert!(
        is_sparse(&k33(), &SparsityParams::new(2, 3, 2).unwrap())
            .unwrap()
            .sparse
    );
    assert!(
        is_sparse(&k33().cone(7).unwrap(), &SparsityParams::volume(3).unwrap())
            .unwrap()
            .sparse
    );
    let mut rng = trial_rng(7, 0);
    let mut tested = 0;
    while tested < 15 {
        let n = rng.gen_range(4..=7);
        let k = random_complex(n, 3, rng.gen_range(1..=2 * n - 4), &mut rng);
        if !is_sparse(&k, &SparsityParams::volume(3).unwrap())
            .unwrap()
            .sparse
        {
            continue;
        }
        tested += 1;
        let c = k.cone(n + 1).unwrap();
        assert!(
            is_sparse(&c, &SparsityParams::volume(4).unwrap())
                .unwrap()
                .sparse,
            "{k}"
        );
    }
}

#[test]
fn independent_facet_sets_are_sparse() {
    let g = Genericity::default();
    let mut rng = trial_rng(8, 0);
    let mut independent = 0;
    for i in 0..40 {
        let d = 3 + i % 2;
        let n = rng.gen_range(d + 1..=7);
        let t = (d - 1) * n - (d * d - d - 1);
        let k = random_complex(n, d, rng.gen_range(1..=t + 2), &mut rng);
        if columns_independent(&k, k.facets(), &g).unwrap() {
            independent += 1;
            assert!(
                is_sparse(&k, &SparsityParams::volume(d).unwrap())
                    .unwrap()
                    .sparse,
                "{k}"
            );
        }
    }
    assert!(independent >= 10);
}

#[test]
fn facet_removal_keeps_rank_on_rational_minimal_cycles() {
    let g = Genericity::default();
    let mut cycles = vec![
        surfaces::tetrahedron(),
        surfaces::octahedron(),
        surfaces::icosahedron(),
        surfaces::stacked_sphere(8, 3),
        surfaces::grid_torus(3, 3),
    ];
    cycles.push(SimplicialComplex::complete(5, 4).unwrap());
    cycles.push(surfaces::stacked_sphere(7, 4));
    if let Ok(ds) = load_dataset(&data("torus")) {
        cycles.extend(ds.complexes.into_iter().map(|(_, k)| k).take(5));
    }
    for k in cycles {
        assert!(is_minimal_cycle(&k).unwrap(), "{k}");
        let r = generic_rank(&k, &g).unwrap();
        assert!(r.is_rigid, "{k}");
        assert!(k.num_facets() > r.generic_rank);
        for s in k.facets() {
            assert_eq!(
                generic_rank(&k.remove_facet(s).unwrap(), &g)
                    .unwrap()
                    .generic_rank,
                r.generic_rank
            );
        }
    }
}

/// Non-orientable surfaces are minimal cycles over F2 only; facet removal is
/// reported for them but not asserted.
#[test]
fn f2_only_cycles_are_recorded() {
    let g = Genericity::default();
    for k in [
        surfaces::projective_plane_6(),
        surfaces::grid_klein_bottle(3, 4),
    ] {
        assert!(!is_minimal_cycle(&k).unwrap());
        assert!(is_minimal_cycle_over(&PrimeField::new(2), &k).unwrap());
        let full = generic_rank(&k, &g).unwrap().generic_rank;
        let kept = k
            .facets()
            .iter()
            .filter(|s| {
                generic_rank(&k.remove_facet(s).unwrap(), &g)
                    .unwrap()
                    .generic_rank
                    == full
            })
            .count();
        println!(
            "{} facets, rank {full}, {kept} deletions keep the rank",
            k.num_facets()
        );
    }
}

#[test]
fn gluing_rigid_spheres() {
    let g = Genericity::default();
    let mut rng = trial_rng(9, 0);
    let spheres = [
        surfaces::tetrahedron(),
        surfaces::octahedron(),
        surfaces::stacked_sphere(7, 3),
    ];
    for _ in 0..12 {
        let a = spheres.choose(&mut rng).unwrap();
        let b = spheres.choose(&mut rng).unwrap();
        let overlap = rng.gen_range(3..=a.n().min(b.n()));
        let n = a.n() + b.n() - overlap;
        let mut map: Vec<usize> = (1..=n).collect();
        map.shuffle(&mut rng);
        let a2 = relabel_into(a, &(1..=a.n()).collect::<Vec<_>>(), n);
        let mut bmap: Vec<usize> = (1..=overlap).collect();
        bmap.extend(a.n() + 1..=n);
        bmap.shuffle(&mut rng);
        let b2 = relabel_into(b, &bmap, n);
        let union = a2.union(&b2).unwrap();
        assert!(is_volume_rigid(&union, &g).unwrap(), "{union}");
        let completed = SimplicialComplex::complete(a.n(), 3)
            .unwrap()
            .facets()
            .iter()
            .map(|f| f.vertices().to_vec())
            .chain(b2.facets().iter().map(|f| f.vertices().to_vec()))
            .collect::<Vec<_>>();
        assert!(is_volume_rigid(&SimplicialComplex::build(n, completed).unwrap(), &g).unwrap());
    }
}

#[test]
fn coning_a_subset_keeps_rigidity() {
    let g = Genericity::default();
    for k in [
        surfaces::tetrahedron(),
        surfaces::octahedron(),
        SimplicialComplex::complete(5, 4).unwrap(),
    ] {
        assert!(is_volume_rigid(&k, &g).unwrap());
        let d = k.d();
        let v = k.n() + 1;
        for size in d..=k.n() {
            for s in (1..=k.n()).combinations(size).take(6) {
                let extra = s.iter().copied().combinations(d - 1).map(|mut f| {
                    f.push(v);
                    Face::new(f).unwrap()
                });
                let grown = SimplicialComplex::empty(v, d)
                    .unwrap()
                    .with_facets(k.facets().iter().cloned().chain(extra))
                    .unwrap();
                assert!(is_volume_rigid(&grown, &g).unwrap(), "{grown}");
            }
        }
    }
}

#[test]
fn torus_reduces_to_a_listed_irreducible() {
    let Ok(ds) = load_dataset(&data("torus")) else {
        return;
    };
    let listed: Vec<SimplicialComplex> = ds
        .complexes
        .iter()
        .map(|(_, k)| canonical_form(k))
        .collect();
    for k in [
        surfaces::grid_torus(4, 4),
        surfaces::grid_torus(3, 5),
        surfaces::grid_torus(5, 6),
    ] {
        let (r, _) = contraction_reduce(&k, default_admissible);
        assert!(listed.contains(&canonical_form(&r)), "{r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rigidity_is_label_invariant(seed in 0u64..1000, n in 5usize..=7, m in 3usize..=12) {
        let mut rng = trial_rng(seed, 1);
        let k = random_complex(n, 3, m, &mut rng);
        let mut map: Vec<usize> = (1..=n).collect();
        map.shuffle(&mut rng);
        let g = Genericity::default();
        prop_assert_eq!(generic_rank(&k, &g).unwrap().generic_rank, generic_rank(&k.relabel(&map).unwrap(), &g).unwrap().generic_rank);
    }
}
