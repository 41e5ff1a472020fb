//! Small named triangulations and closed-surface checks.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Face, SimplicialComplex};

pub fn tetrahedron() -> SimplicialComplex {
    SimplicialComplex::complete(4, 3).expect("valid")
}

pub fn octahedron() -> SimplicialComplex {
    // antipodal pairs (1,2), (3,4), (5,6)
    let mut facets = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                facets.push([a, b, c]);
            }
        }
    }
    SimplicialComplex::build(6, facets).expect("valid")
}

pub fn icosahedron() -> SimplicialComplex {
    let up = |i: usize| 2 + i % 5;
    let lo = |i: usize| 7 + i % 5;
    let mut facets = Vec::new();
    for i in 0..5 {
        facets.push([1, up(i), up(i + 1)]);
        facets.push([12, lo(i), lo(i + 1)]);
        facets.push([up(i), up(i + 1), lo(i)]);
        facets.push([up(i + 1), lo(i), lo(i + 1)]);
    }
    SimplicialComplex::build(12, facets).expect("valid")
}

/// Boundary of the `d`-vertex simplex, then repeated stellar subdivision of
/// the lex-last facet until there are `n` vertices.
pub fn stacked_sphere(n: usize, d: usize) -> SimplicialComplex {
    assert!(d >= 2 && n > d, "stacked sphere needs d >= 2 and n > d");
    let mut facets: BTreeSet<Face> = SimplicialComplex::complete(d + 1, d)
        .expect("valid")
        .facets()
        .iter()
        .cloned()
        .collect();
    for v in d + 2..=n {
        let s = facets.iter().next_back().cloned().expect("nonempty");
        facets.remove(&s);
        for &x in s.vertices() {
            facets.insert(s.without(x).with(v));
        }
    }
    SimplicialComplex::build(n, facets.into_iter().map(|f| f.vertices().to_vec())).expect("valid")
}

fn grid(a: usize, b: usize, label: impl Fn(usize, usize) -> usize) -> Vec<[usize; 3]> {
    let mut facets = Vec::new();
    for i in 0..a {
        for j in 0..b {
            let (p, q, r, s) = (
                label(i, j),
                label(i + 1, j),
                label(i + 1, j + 1),
                label(i, j + 1),
            );
            facets.push([p, q, r]);
            facets.push([p, r, s]);
        }
    }
    facets
}

/// `a x b` square grid with opposite sides glued, each square split along a
/// diagonal. Simplicial for `a, b >= 3`.
pub fn grid_torus(a: usize, b: usize) -> SimplicialComplex {
    SimplicialComplex::build(a * b, grid(a, b, |i, j| (i % a) * b + (j % b) + 1)).expect("valid")
}

/// Like [`grid_torus`] but one pair of sides is glued with a reflection.
pub fn grid_klein_bottle(a: usize, b: usize) -> SimplicialComplex {
    let label = |i: usize, j: usize| {
        let j = j % b;
        if i >= a {
            (i - a) * b + (b - j) % b + 1
        } else {
            i * b + j + 1
        }
    };
    SimplicialComplex::build(a * b, grid(a, b, label)).expect("valid")
}

/// The 6-vertex real projective plane.
pub fn projective_plane_6() -> SimplicialComplex {
    SimplicialComplex::build(
        6,
        [
            [1, 2, 3],
            [1, 3, 4],
            [1, 4, 5],
            [1, 5, 6],
            [1, 2, 6],
            [2, 3, 5],
            [3, 4, 6],
            [2, 4, 5],
            [3, 5, 6],
            [2, 4, 6],
        ],
    )
    .expect("valid")
}

/// Every edge lies in two triangles, every vertex link is one cycle, every
/// label is used and the complex is connected.
pub fn is_closed_surface(k: &SimplicialComplex) -> bool {
    if k.d() != 3 || k.is_empty() || k.used_vertices().len() != k.n() {
        return false;
    }
    for e in k.faces_of_size(2) {
        if k.facets().iter().filter(|f| e.is_subset_of(f)).count() != 2 {
            return false;
        }
    }
    for v in 1..=k.n() {
        let link: Vec<Face> = k
            .facets()
            .iter()
            .filter(|f| f.contains(v))
            .map(|f| f.without(v))
            .collect();
        if !single_cycle(&link) {
            return false;
        }
    }
    connected(k)
}

fn single_cycle(edges: &[Face]) -> bool {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in edges {
        let (x, y) = (e.vertices()[0], e.vertices()[1]);
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    if adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = match adj.keys().next() {
        Some(&s) => s,
        None => return false,
    };
    let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
    while cur != start {
        let next = if adj[&cur][0] == prev {
            adj[&cur][1]
        } else {
            adj[&cur][0]
        };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == adj.len()
}

fn connected(k: &SimplicialComplex) -> bool {
    let mut seen = BTreeSet::from([1usize]);
    let mut stack = vec![1usize];
    while let Some(v) = stack.pop() {
        for f in k.facets().iter().filter(|f| f.contains(v)) {
            for &u in f.vertices() {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
    }
    seen.len() == k.n()
}

pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    k.f_vector()
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Whether the facets of a closed surface admit coherent orientations.
pub fn is_orientable(k: &SimplicialComplex) -> bool {
    // orientation of each facet relative to its sorted order: +1 or -1
    let mut orient: Vec<i8> = vec![0; k.num_facets()];
    let mut by_edge: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
    for (i, f) in k.facets().iter().enumerate() {
        for &v in f.vertices() {
            by_edge.entry(f.without(v)).or_default().push(i);
        }
    }
    // sorted triangle (a,b,c) induces a->b, b->c, c->a; edge sign vs sorted pair
    let induced = |f: &Face, e: &Face| -> i8 {
        let x = f.vertices();
        let missing = x
            .iter()
            .position(|v| !e.contains(*v))
            .expect("edge in face");
        if missing == 1 {
            -1
        } else {
            1
        }
    };
    for start in 0..k.num_facets() {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let f = &k.facets()[i];
            for &v in f.vertices() {
                let e = f.without(v);
                for &j in &by_edge[&e] {
                    if j == i {
                        continue;
                    }
                    let want = -orient[i] * induced(f, &e) * induced(&k.facets()[j], &e);
                    if orient[j] == 0 {
                        orient[j] = want;
                        stack.push(j);
                    } else if orient[j] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Canonical relabelling of a connected closed surface: the lex-least facet
/// list over all breadth-first traversals started from an ordered facet.
/// Two surfaces are isomorphic iff their canonical forms are equal.
pub fn canonical_form(k: &SimplicialComplex) -> SimplicialComplex {
    let mut by_edge: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
    for (i, f) in k.facets().iter().enumerate() {
        for &v in f.vertices() {
            by_edge.entry(f.without(v)).or_default().push(i);
        }
    }
    let mut best: Option<Vec<Face>> = None;
    for f in k.facets() {
        let x = f.vertices();
        for (a, b, c) in [
            (0, 1, 2),
            (0, 2, 1),
            (1, 0, 2),
            (1, 2, 0),
            (2, 0, 1),
            (2, 1, 0),
        ] {
            let cand = traverse(k, &by_edge, [x[a], x[b], x[c]]);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    match best {
        Some(f) => SimplicialComplex::build(k.n(), f.into_iter().map(|f| f.vertices().to_vec()))
            .expect("relabelling is valid"),
        None => k.clone(),
    }
}

fn traverse(
    k: &SimplicialComplex,
    by_edge: &BTreeMap<Face, Vec<usize>>,
    start: [usize; 3],
) -> Vec<Face> {
    let mut label = vec![0usize; k.n() + 1];
    let mut next = 1;
    for v in start {
        label[v] = next;
        next += 1;
    }
    let first = k
        .facet_index(&Face::from_sorted({
            let mut s = start.to_vec();
            s.sort_unstable();
            s
        }))
        .expect("start is a facet");
    let mut seen = vec![false; k.num_facets()];
    seen[first] = true;
    let mut queue = std::collections::VecDeque::from([first]);
    while let Some(t) = queue.pop_front() {
        let f = &k.facets()[t];
        let mut edges: Vec<(usize, usize, Face)> = f
            .vertices()
            .iter()
            .map(|&v| {
                let e = f.without(v);
                let (p, q) = (label[e.vertices()[0]], label[e.vertices()[1]]);
                (p.min(q), p.max(q), e)
            })
            .collect();
        edges.sort();
        for (_, _, e) in edges {
            for &u in &by_edge[&e] {
                if seen[u] {
                    continue;
                }
                seen[u] = true;
                for &w in k.facets()[u].vertices() {
                    if label[w] == 0 {
                        label[w] = next;
                        next += 1;
                    }
                }
                queue.push_back(u);
            }
        }
    }
    let mut out: Vec<Face> = k
        .facets()
        .iter()
        .map(|f| {
            let mut v: Vec<usize> = f.vertices().iter().map(|&x| label[x]).collect();
            v.sort_unstable();
            Face::from_sorted(v)
        })
        .collect();
    out.sort();
    out
}
