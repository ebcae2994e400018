//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every corpus is seeded, so a failure reproduces exactly.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use ultrametric::chains::{chain_from_ultrametric, realize_spectrum, ultrametric_from_chain, validate_chain};
use ultrametric::dendro::{dendrogram_from_ultrametric, to_newick, ultrametric_from_dendrogram};
use ultrametric::diamfn::{check_axioms, check_ball_dichotomy, synthesize_ultrametric, tau_from_space, ScanMode};
use ultrametric::dipgraph::{
    apex_decomposition, default_inner, default_outer, dip_graph, dip_report, insert_apex, is_complete_multipartite,
    multipartite_edge_bound, ultrametric_from_partition,
};
use ultrametric::oracle::{
    all_partitions, brute_dip_pairs, brute_multipartite_search, random_chain, random_dendrogram, random_partition,
    random_ultrametric, rng_from,
};
use ultrametric::{
    certify_ultrametric, DistanceMatrix, GraphChain, Partition, Scalar, SimpleGraph, SubsetId, UltrametricSpace,
};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn plus(a: &Scalar, b: &Scalar) -> Scalar {
    Scalar::new(a.as_rational() + b.as_rational()).expect("sum of nonnegatives")
}

fn small_step(rng: &mut impl Rng) -> Scalar {
    Scalar::ratio(rng.random_range(1..=4), [1, 2, 3][rng.random_range(0..3)])
}

/// 100 spaces with 1 ≤ n ≤ 6.
fn axiom_corpus() -> Vec<UltrametricSpace> {
    (0..100u64).map(|s| random_ultrametric(1 + s as usize % 6, 1 + (s as usize / 6) % 4, 1_000 + s)).collect()
}

/// 200 spaces with 2 ≤ n ≤ 12.
fn dip_corpus() -> Vec<UltrametricSpace> {
    (0..200u64).map(|s| random_ultrametric(2 + s as usize % 11, 1 + s as usize % 5, 3_000 + s)).collect()
}

/// 200 partitions with at least two parts, 2 ≤ n ≤ 12.
fn partition_corpus() -> Vec<Partition> {
    (0..200u64)
        .map(|s| {
            let n = 2 + s as usize % 11;
            random_partition(n, n, 2, &mut rng_from(3_500 + s))
        })
        .collect()
}

/// Every partition of 2..=8 points with at least two parts.
fn multipartite_corpus() -> Vec<Partition> {
    (2..=8).flat_map(all_partitions).filter(|p| p.k() >= 2).collect()
}

/// Apex extensions with the apex inserted at a random position; returns the
/// space with its base, level and apex index.
fn apex_corpus() -> Vec<(UltrametricSpace, UltrametricSpace, Scalar, usize)> {
    (0..50u64)
        .map(|s| {
            let mut rng = rng_from(4_000 + s);
            let n = 1 + s as usize % 10;
            let base = random_ultrametric(n, 1 + s as usize % 4, 4_100 + s);
            let t = plus(&base.diameter(), &small_step(&mut rng));
            let position = rng.random_range(0..=n);
            (insert_apex(&base, &t, position, None).unwrap(), base, t, position)
        })
        .collect()
}

/// Spaces whose top level splits into three or more clusters, or into two
/// clusters of at least two points each, with points shuffled.
fn non_star_corpus() -> Vec<UltrametricSpace> {
    (0..150u64)
        .map(|s| {
            let mut rng = rng_from(4_500 + s);
            let k = rng.random_range(2..=4);
            let min_size = if k == 2 { 2 } else { 1 };
            let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(min_size..=3)).collect();
            let blocks: Vec<UltrametricSpace> = sizes
                .iter()
                .enumerate()
                .map(|(i, &m)| random_ultrametric(m, rng.random_range(1..=3), 4_600 + 8 * s + i as u64))
                .collect();
            let top = blocks.iter().map(UltrametricSpace::diameter).max().unwrap();
            let top = plus(&top, &small_step(&mut rng));
            let mut points: Vec<(usize, usize)> =
                sizes.iter().enumerate().flat_map(|(b, &m)| (0..m).map(move |i| (b, i))).collect();
            points.shuffle(&mut rng);
            let m = DistanceMatrix::from_fn(points.len(), |x, y| {
                let ((bx, ix), (by, iy)) = (points[x], points[y]);
                if bx == by {
                    blocks[bx].d(ix, iy).clone()
                } else {
                    top.clone()
                }
            })
            .unwrap();
            certify_ultrametric(m).unwrap()
        })
        .collect()
}

fn hand_chains() -> Vec<GraphChain> {
    let g = |n: usize, edges: &[(usize, usize)]| SimpleGraph::from_edges(n, edges).unwrap();
    let int = Scalar::from_integer;
    vec![
        GraphChain { n_vertices: 2, levels: vec![int(1)], graphs: vec![SimpleGraph::complete(2)] },
        GraphChain { n_vertices: 3, levels: vec![int(1)], graphs: vec![SimpleGraph::complete(3)] },
        GraphChain {
            n_vertices: 3,
            levels: vec![int(1), int(2)],
            graphs: vec![SimpleGraph::complete(3), g(3, &[(0, 2), (1, 2)])],
        },
        GraphChain {
            n_vertices: 4,
            levels: vec![Scalar::ratio(1, 3), Scalar::ratio(1, 2), int(7)],
            graphs: vec![
                SimpleGraph::complete(4),
                g(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]),
                g(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
            ],
        },
        GraphChain {
            n_vertices: 5,
            levels: vec![int(1), int(3)],
            graphs: vec![SimpleGraph::complete(5), g(5, &[(0, 4), (1, 4), (2, 4), (3, 4)])],
        },
    ]
}

fn criterion_1(corpus: &[UltrametricSpace]) -> Check {
    let mut triples = 0;
    for (i, s) in corpus.iter().enumerate() {
        let report = check_axioms(&tau_from_space(s).unwrap()).unwrap();
        ensure!(report.scan == ScanMode::Exhaustive, "space {i}: scan was {:?}", report.scan);
        let full = ((1u64 << s.n()) - 1).pow(3);
        ensure!(report.triples_checked == full, "space {i}: {} of {full} triples", report.triples_checked);
        ensure!(report.ok(), "space {i}: {report}");
        triples += report.triples_checked;
    }
    Ok(format!("{} spaces, {triples} triples", corpus.len()))
}

fn criterion_2(corpus: &[UltrametricSpace]) -> Check {
    let mut subsets = 0;
    for (i, s) in corpus.iter().enumerate() {
        let t = tau_from_space(s).unwrap();
        let back = synthesize_ultrametric(&t).map_err(|e| format!("space {i}: {e}"))?;
        ensure!(&back == s, "space {i}: synthesized matrix differs");
        for a in SubsetId::all(s.n()) {
            ensure!(t.value(a) == back.diam(&a.indices()).unwrap(), "space {i}: tau{a} differs from diam");
            subsets += 1;
        }
    }
    Ok(format!("{} spaces, {subsets} subsets", corpus.len()))
}

fn criterion_3(spaces: &[UltrametricSpace], partitions: &[Partition]) -> Check {
    for (i, s) in spaces.iter().enumerate() {
        let parts = is_complete_multipartite(&dip_graph(s).unwrap()).map_err(|w| format!("space {i}: {w}"))?;
        ensure!(parts.k() >= 2, "space {i}: one part");
        ensure!(parts == s.equiv_partition().unwrap(), "space {i}: parts differ from diameter classes");
    }
    for (i, p) in partitions.iter().enumerate() {
        let s = ultrametric_from_partition(p, &default_inner(), &default_outer()).unwrap();
        ensure!(dip_graph(&s).unwrap() == SimpleGraph::complete_multipartite(p), "partition {i}: dip graph differs");
    }
    Ok(format!("{} spaces, {} partitions", spaces.len(), partitions.len()))
}

fn criterion_4(
    apex: &[(UltrametricSpace, UltrametricSpace, Scalar, usize)],
    non_star: &[UltrametricSpace],
    others: &[UltrametricSpace],
) -> Check {
    let bound_holds = |s: &UltrametricSpace| {
        let n = s.n();
        let brute = brute_dip_pairs(s).unwrap().len();
        let r = dip_report(s).unwrap();
        (brute == r.dip_count && brute >= 2 * (n - 1)).then_some(r)
    };
    for (i, (s, base, t, position)) in apex.iter().enumerate() {
        let r = bound_holds(s).ok_or(format!("apex {i}: bound or count mismatch"))?;
        ensure!(r.equality, "apex {i}: no equality");
        ensure!(r.center == Some(*position) || s.n() == 2, "apex {i}: center {:?} != {position}", r.center);
        let dec = apex_decomposition(s).unwrap().ok_or(format!("apex {i}: no decomposition"))?;
        ensure!(&dec.level == t, "apex {i}: level {} != {t}", dec.level);
        ensure!(s.n() == 2 || &dec.base == base, "apex {i}: base differs");
        ensure!(&dec.rebuild() == s, "apex {i}: rebuild differs");
    }
    for (i, s) in non_star.iter().enumerate() {
        let r = bound_holds(s).ok_or(format!("non-star {i}: bound or count mismatch"))?;
        ensure!(!r.equality, "non-star {i}: equality holds");
        ensure!(apex_decomposition(s).unwrap().is_none(), "non-star {i}: decomposed");
    }
    let mut extra = 0;
    for (i, s) in others.iter().enumerate() {
        let r = bound_holds(s).ok_or(format!("space {i}: bound or count mismatch"))?;
        if r.equality {
            let dec = apex_decomposition(s).unwrap().ok_or(format!("space {i}: equality without decomposition"))?;
            ensure!(&dec.rebuild() == s, "space {i}: rebuild differs");
            extra += 1;
        }
    }
    Ok(format!(
        "{} apex, {} non-star, {} other spaces ({extra} equality cases rebuilt)",
        apex.len(),
        non_star.len(),
        others.len()
    ))
}

fn criterion_5() -> Check {
    for n in 1..=10usize {
        let base = random_ultrametric(n, 3, 5_000 + n as u64);
        let t = plus(&base.diameter(), &Scalar::one());
        let s = insert_apex(&base, &t, n, None).unwrap();
        let r = dip_report(&s).unwrap();
        ensure!(r.dip_count == 2 * n, "card X = {n}: dip count {}", r.dip_count);
        ensure!(brute_dip_pairs(&s).unwrap().len() == 2 * n, "card X = {n}: brute count differs");
    }
    Ok("card X = 1..10".into())
}

fn criterion_6(corpus: &[Partition]) -> Check {
    let mut stars = 0;
    for p in corpus {
        let g = SimpleGraph::complete_multipartite(p);
        ensure!(brute_multipartite_search(&g).unwrap().as_ref() == Some(p), "{p:?}: search fixture differs");
        let n = g.n();
        let r = multipartite_edge_bound(&g, p).unwrap();
        ensure!(g.edge_count() >= n - 1, "{p:?}: {} edges", g.edge_count());
        let star = p.k() == 2 && p.parts().iter().any(|part| part.len() == 1);
        ensure!((g.edge_count() == n - 1) == star, "{p:?}: equality disagrees with star");
        ensure!(r.equality == star && r.star == star, "{p:?}: report {r:?}");
        stars += usize::from(star);
    }
    Ok(format!("{} graphs, {stars} stars", corpus.len()))
}

fn criterion_7() -> Check {
    for s in 0..100u64 {
        let space = random_ultrametric(2 + s as usize % 11, 1 + s as usize % 5, 7_000 + s);
        let c = chain_from_ultrametric(&space).unwrap();
        ensure!(ultrametric_from_chain(&c).unwrap() == space, "space {s}: round trip differs");
    }
    let mut chains = hand_chains();
    chains.extend((0..45u64).map(|s| random_chain(2 + s as usize % 11, 7_500 + s)));
    for (i, c) in chains.iter().enumerate() {
        validate_chain(c).map_err(|e| format!("chain {i}: {e}"))?;
        let s = ultrametric_from_chain(c).unwrap();
        for (k, (g, a)) in c.graphs.iter().zip(&c.levels).enumerate() {
            for x in 0..c.n_vertices {
                for y in x + 1..c.n_vertices {
                    ensure!(g.has_edge(x, y) == (s.d(x, y) >= a), "chain {i}: G{} at ({x},{y})", k + 1);
                }
            }
        }
        let mut expected = vec![Scalar::zero()];
        expected.extend(c.levels.iter().cloned());
        ensure!(s.spectrum() == expected, "chain {i}: spectrum differs");
        ensure!(&chain_from_ultrametric(&s).unwrap() == c, "chain {i}: round trip differs");
    }
    Ok(format!("100 spaces, {} chains", chains.len()))
}

fn criterion_8() -> Check {
    for s in 0..50u64 {
        let mut rng = rng_from(8_000 + s);
        let size = 1 + s as usize % 12;
        let mut set = BTreeSet::from([Scalar::zero()]);
        while set.len() < size {
            set.insert(Scalar::ratio(rng.random_range(1..=60), rng.random_range(1..=7)));
        }
        let values: Vec<Scalar> = set.into_iter().collect();
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut rng);
        ensure!(realize_spectrum(&shuffled).unwrap().spectrum() == values, "set {s}: spectrum differs");
    }
    Ok("50 sets, sizes 1..12".into())
}

fn criterion_9(corpus: &[UltrametricSpace]) -> Check {
    let mut count = 0;
    let mut pairs = 0;
    for (i, s) in corpus.iter().enumerate().filter(|(_, s)| s.n() <= 5) {
        let report = check_ball_dichotomy(&tau_from_space(s).unwrap()).unwrap();
        ensure!(report.ok(), "space {i}: {:?}", report.counterexample);
        count += 1;
        pairs += report.pairs_checked;
    }
    Ok(format!("{count} diameter functions, {pairs} ball pairs"))
}

fn criterion_10() -> Check {
    let corpus = |s: u64| random_ultrametric(1 + s as usize % 12, 1 + s as usize % 5, 10_000 + s);
    for s in 0..200u64 {
        let space = corpus(s);
        let d = dendrogram_from_ultrametric(&space);
        ensure!(ultrametric_from_dendrogram(&d).unwrap() == space, "space {s}: space round trip differs");
        let tree = random_dendrogram(1 + s as usize % 12, 1 + s as usize % 5, 10_500 + s);
        let back = dendrogram_from_ultrametric(&ultrametric_from_dendrogram(&tree).unwrap());
        ensure!(back == tree, "tree {s}: dendrogram round trip differs");
        for lengths in [false, true] {
            let first = to_newick(&d, None, lengths);
            let again = to_newick(&dendrogram_from_ultrametric(&corpus(s)), None, lengths);
            ensure!(first == again, "space {s}: Newick output changed between runs");
        }
    }
    Ok("200 spaces, 200 trees".into())
}

fn criterion_11(spaces: &[UltrametricSpace], partitions: &[Partition], multipartite: &[Partition]) -> Check {
    for (i, s) in spaces.iter().enumerate() {
        let brute: BTreeSet<(usize, usize)> = brute_dip_pairs(s).unwrap().into_iter().filter(|(x, y)| x < y).collect();
        let edges: BTreeSet<(usize, usize)> = dip_graph(s).unwrap().edges().into_iter().collect();
        ensure!(brute == edges, "space {i}: dip pairs differ");
    }
    let mut graphs: Vec<SimpleGraph> = spaces.iter().map(|s| dip_graph(s).unwrap()).collect();
    graphs.extend(partitions.iter().chain(multipartite).map(SimpleGraph::complete_multipartite));
    // A one-pair flip of each small graph gives near misses alongside the hits.
    let flipped: Vec<SimpleGraph> = multipartite
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let g = SimpleGraph::complete_multipartite(p);
            let n = g.n();
            let (u, v) = (i % n, (i / n + 1 + i % n) % n);
            let (u, v) = if u == v { (0, 1) } else { (u.min(v), u.max(v)) };
            let mut edges = g.edges();
            match edges.iter().position(|&e| e == (u, v)) {
                Some(k) => {
                    edges.remove(k);
                }
                None => edges.push((u, v)),
            }
            SimpleGraph::from_edges(n, &edges).unwrap()
        })
        .collect();
    graphs.extend(flipped);
    let mut rejected = 0;
    for (i, g) in graphs.iter().enumerate() {
        let fast = is_complete_multipartite(g).ok();
        ensure!(fast == brute_multipartite_search(g).unwrap(), "graph {i}: recognition disagrees with search");
        rejected += usize::from(fast.is_none());
    }
    Ok(format!("{} spaces, {} graphs ({rejected} not multipartite)", spaces.len(), graphs.len()))
}

fn main() -> ExitCode {
    let axiom = axiom_corpus();
    let dip = dip_corpus();
    let partitions = partition_corpus();
    let multipartite = multipartite_corpus();
    let apex = apex_corpus();
    let non_star = non_star_corpus();

    let criteria: Vec<Criterion> = vec![
        ("diameter functions of random spaces satisfy both axioms", Some(Duration::from_secs(30)), Box::new(|| criterion_1(&axiom))),
        ("synthesis recovers each space and tau equals diam", None, Box::new(|| criterion_2(&axiom))),
        ("dip graphs are complete multipartite on the diameter classes", Some(Duration::from_secs(10)), Box::new(|| criterion_3(&dip, &partitions))),
        ("dip count bound with equality exactly on apex extensions", None, Box::new(|| criterion_4(&apex, &non_star, &dip))),
        ("apex extension has 2 card X diametrical pairs", None, Box::new(criterion_5)),
        ("multipartite edge bound with equality exactly for stars", None, Box::new(|| criterion_6(&multipartite))),
        ("graph chain round trips", None, Box::new(criterion_7)),
        ("spectrum realization", None, Box::new(criterion_8)),
        ("ball dichotomy and recentering", Some(Duration::from_secs(60)), Box::new(|| criterion_9(&axiom))),
        ("dendrogram round trips and stable Newick", None, Box::new(criterion_10)),
        ("fast checks agree with brute-force oracles", None, Box::new(|| criterion_11(&dip, &partitions, &multipartite))),
    ];

    let mut failed = 0;
    for (i, (title, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > *b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {title}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {title}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
