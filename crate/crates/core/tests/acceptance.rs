//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any of them fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surfcover::covers::{
    cotree_edges, cover_add_triangle_edge, cover_contract_edge, cover_delete_edge, cover_delete_vertex, derived_cover,
    orientation_double_cover, verify_cover, CoverMap, VoltageAssignment,
};
use surfcover::embedding::{
    enumerate_embeddings, is_planar_fast, min_euler_genus, Dart, EmbeddedGraph, GenusOptions, DEFAULT_TRACE_BUDGET,
};
use surfcover::families::{generate, reduce_to_k5_form, Family, FamilyInstance, FamilySpec};
use surfcover::graph::named::{complete, complete_bipartite, cycle};
use surfcover::graph::{is_connected, is_isomorphic, EdgeId, MultiGraph, VertexId};
use surfcover::minors::{tree_path_or_subtree, verify_yminor_certificate, TreeOutcome};
use surfcover::search::{decide_toy, exists_planar_cover, run_search, Filter, PlanarCoverSearch, SearchOptions, SearchSpec};
use surfcover::theorems::{embedding_genus, euler_edge_bound, normalize_facial_triangles, ply_bound, BoundFamily};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn member(family: Family, k: usize) -> FamilyInstance {
    generate(&FamilySpec::new(family, k)).unwrap()
}

fn euler_bounds() -> Check {
    for n in 3..60 {
        for g in 0..12 {
            ensure(euler_edge_bound(n, g, false) == Ok(3 * n - 6 + 3 * g), format!("general bound n={n} g={g}"))?;
            ensure(euler_edge_bound(n, g, true) == Ok(2 * n - 4 + 2 * g), format!("bipartite bound n={n} g={g}"))?;
        }
    }
    let k4 = complete(4);
    let (n, m) = (4i64, 6i64);
    let mut bad = None;
    let mut genera = BTreeSet::new();
    let count = enumerate_embeddings(&k4, false, u64::MAX, |eg| {
        let f = eg.trace_faces().count() as i64;
        let g = eg.euler_genus().unwrap() as i64;
        genera.insert(g);
        if n - m + f != 2 - g || m > 3 * n - 6 + 3 * g {
            bad.get_or_insert((f, g));
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some((f, g)) = bad {
        return Err(format!("K4 embedding with f={f} g={g} violates the identity"));
    }
    Ok(format!("{count} embeddings of K4, genera {genera:?}"))
}

/// Smallest `g` with `m <= bound(n, g)`.
fn euler_lower_bound(g: &MultiGraph, bipartite: bool) -> usize {
    (0..).find(|&x| euler_edge_bound(g.vertex_count(), x, bipartite).unwrap() >= g.edge_count()).unwrap()
}

fn exhaustive_genus(g: &MultiGraph) -> usize {
    let mut best = usize::MAX;
    enumerate_embeddings(g, false, u64::MAX, |eg| best = best.min(eg.euler_genus().unwrap())).unwrap();
    best
}

fn genus_oracle() -> Check {
    let mut out = Vec::new();
    for (name, g, bip, want) in
        [("K4", complete(4), false, 0), ("K5", complete(5), false, 1), ("K3,3", complete_bipartite(3, 3), true, 1)]
    {
        let oracle = exhaustive_genus(&g);
        let r = min_euler_genus(&g, DEFAULT_TRACE_BUDGET).map_err(|e| e.to_string())?;
        let lower = euler_lower_bound(&g, bip);
        ensure(oracle == want, format!("{name}: enumeration gives {oracle}"))?;
        ensure(r.genus == oracle && r.exact, format!("{name}: search gives {} (exact={})", r.genus, r.exact))?;
        ensure(r.lower_bound == lower, format!("{name}: lower bound {} vs {lower}", r.lower_bound))?;
        out.push(format!("{name}={}", r.genus));
    }
    Ok(out.join(" "))
}

fn bound_table() -> Check {
    let rows = [
        (BoundFamily::K3k, 7, Ratio::new(2, 1), 9),
        (BoundFamily::Omega1, 32, Ratio::new(1, 1), 33),
        (BoundFamily::Theta1, 36, Ratio::new(1, 1), 37),
        (BoundFamily::Pi1, 52, Ratio::new(1, 1), 53),
    ];
    for (family, k, value, beyond) in rows {
        let b = ply_bound(family, k, 1);
        ensure(b.value == Some(value), format!("{family:?} k={k}: {b}"))?;
        for k in beyond..beyond + 40 {
            let b = ply_bound(family, k, 1);
            ensure(b.floor() == Some(0) && b.excludes_all_covers(), format!("{family:?} k={k}: {b}"))?;
        }
        let at = ply_bound(family, beyond - 1, 1);
        ensure(!at.excludes_all_covers(), format!("{family:?} k={}: {at}", beyond - 1))?;
    }
    Ok("four rows and their thresholds".into())
}

fn no_planar_double_covers() -> Check {
    let mut out = Vec::new();
    for family in [Family::Omega1, Family::Theta1] {
        let inst = member(family, 2);
        match exists_planar_cover(&inst.graph, 2, &SearchOptions::default()).map_err(|e| e.to_string())? {
            PlanarCoverSearch::Exhausted { checked: 4096 } => out.push(format!("{}: 4096 checked, 0 hits", inst.spec)),
            other => return Err(format!("{}: {other:?}", inst.spec)),
        }
    }
    Ok(out.join("; "))
}

fn projective_double_covers() -> Check {
    for n in [5, 6] {
        let r = min_euler_genus(&complete(n), DEFAULT_TRACE_BUDGET).map_err(|e| e.to_string())?;
        ensure(r.genus == 1 && r.exact, format!("K{n}: genus {}", r.genus))?;
        ensure(!r.witness.is_orientable(), format!("K{n}: witness is orientable"))?;
        let dc = orientation_double_cover(&r.witness).map_err(|e| e.to_string())?;
        ensure(verify_cover(&dc.map) == Ok(2), format!("K{n}: double cover rejected"))?;
        ensure(is_planar_fast(&dc.map.cover), format!("K{n}: double cover not planar"))?;
        ensure(embedding_genus(&dc.embedding) == 0, format!("K{n}: lifted embedding not spherical"))?;
    }
    Ok("K5 and K6".into())
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for i in 1..n as u32 {
        g.add_edge(VertexId(rng.gen_range(0..i)), VertexId(i)).unwrap();
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
        if a != b && !g.has_edge(VertexId(a), VertexId(b)) {
            g.add_edge(VertexId(a), VertexId(b)).unwrap();
        }
    }
    g
}

fn random_cover(rng: &mut ChaCha8Rng, base: &MultiGraph, p: usize) -> CoverMap {
    let mut va = VoltageAssignment::identity(base.clone(), p);
    for e in cotree_edges(base) {
        let mut perm: Vec<u32> = (0..p as u32).collect();
        perm.shuffle(rng);
        va.set(e, perm).unwrap();
    }
    derived_cover(&va)
}

fn lift_closure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ops = 0usize;
    for case in 0..500 {
        let n = rng.gen_range(2..=8);
        let extra = rng.gen_range(0..=2 * n);
        let base = random_connected(&mut rng, n, extra);
        let p = rng.gen_range(1..=3);
        let c = random_cover(&mut rng, &base, p);
        ensure(verify_cover(&c) == Ok(p), format!("case {case}: derived cover rejected"))?;
        let mut results = Vec::new();
        for e in base.edge_ids() {
            results.push(("delete-edge", cover_delete_edge(&c, e)));
            results.push(("contract", cover_contract_edge(&c, e)));
        }
        for v in base.vertices() {
            results.push(("delete-vertex", cover_delete_vertex(&c, v)));
            let nb: Vec<VertexId> = base.neighbors(v);
            if base.degree(v) == 3 && nb.iter().collect::<BTreeSet<_>>().len() == 3 && !nb.contains(&v) {
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    if base.has_edge(nb[i], nb[j]) {
                        continue;
                    }
                    results.push(("add-edge", cover_add_triangle_edge(&c, v, nb[i], nb[j])));
                }
            }
        }
        for (op, r) in results {
            let lifted = r.map_err(|e| format!("case {case}: {op} failed: {e}"))?;
            ensure(verify_cover(&lifted) == Ok(p), format!("case {case}: {op} broke the cover"))?;
            ops += 1;
        }
    }
    Ok(format!("500 cases, {ops} operations"))
}

fn reductions() -> Check {
    let cases = [
        (Family::Omega2, 2, member(Family::Omega1, 2).graph),
        (Family::Theta2, 1, complete(5)),
        (Family::Theta3, 1, complete(5)),
        (Family::Pi2, 2, member(Family::Pi1, 2).graph),
        (Family::Pi3, 2, member(Family::Pi1, 2).graph),
    ];
    for (family, k, target) in cases {
        let inst = member(family, k);
        let red = reduce_to_k5_form(&inst).map_err(|e| format!("{}: {e}", inst.spec))?;
        let iso = is_isomorphic(&red.reduced.graph, &target).map_err(|e| e.to_string())?;
        ensure(iso.is_some(), format!("{}: reduced graph has the wrong shape", inst.spec))?;
        verify_yminor_certificate(&inst.graph, &red.certificate, &target)
            .map_err(|e| format!("{}: certificate rejected: {e}", inst.spec))?;
    }
    Ok("omega2:2 theta2:1 theta3:1 pi2:2 pi3:2".into())
}

fn recount(tree: &MultiGraph, marked: &BTreeSet<VertexId>, k: usize, out: &TreeOutcome) -> Result<(), String> {
    match out {
        TreeOutcome::Path(path) => {
            let distinct: BTreeSet<VertexId> = path.iter().copied().collect();
            ensure(distinct.len() == path.len(), "path repeats a vertex")?;
            ensure(path.windows(2).all(|w| tree.has_edge(w[0], w[1])), "path uses a non-edge")?;
            let hits = path.iter().filter(|v| marked.contains(v)).count();
            ensure(hits >= k, format!("path meets {hits} marked vertices"))
        }
        TreeOutcome::Subtree { vertices, leaves } => {
            let set: BTreeSet<VertexId> = vertices.iter().copied().collect();
            let sub = tree.induced(&set);
            ensure(is_connected(&sub) && sub.edge_count() + 1 == set.len(), "subtree is not a tree")?;
            let real: BTreeSet<VertexId> = sub.vertices().filter(|&v| sub.degree(v) <= 1).collect();
            ensure(real == leaves.iter().copied().collect(), "reported leaves differ from the actual ones")?;
            ensure(real.iter().all(|v| marked.contains(v)), "an unmarked leaf")?;
            ensure(real.len() >= k, format!("only {} leaves", real.len()))
        }
    }
}

/// Mostly a path, with the odd branch.
fn stringy_tree(rng: &mut ChaCha8Rng, n: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for i in 1..n as u32 {
        let parent = if rng.gen_bool(0.97) { i - 1 } else { rng.gen_range(0..i) };
        g.add_edge(VertexId(parent), VertexId(i)).unwrap();
    }
    g
}

fn tree_lemma() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut paths, mut subtrees) = (0, 0);
    for case in 0..1000 {
        let k = rng.gen_range(2..=5);
        let n = rng.gen_range(k * k..=200);
        let tree = if case % 2 == 0 { random_connected(&mut rng, n, 0) } else { stringy_tree(&mut rng, n) };
        let marked: BTreeSet<VertexId> = tree.vertices().choose_multiple(&mut rng, k * k).into_iter().collect();
        let out = tree_path_or_subtree(&tree, &marked, k).map_err(|e| format!("case {case}: {e}"))?;
        recount(&tree, &marked, k, &out).map_err(|e| format!("case {case} (n={n}, k={k}): {e}"))?;
        match out {
            TreeOutcome::Path(_) => paths += 1,
            TreeOutcome::Subtree { .. } => subtrees += 1,
        }
    }
    Ok(format!("1000 trees, {paths} paths, {subtrees} subtrees"))
}

/// Walks the cycle over `tri` from its smallest vertex.
fn hexagon_order(c: &CoverMap, tri: &BTreeSet<VertexId>) -> Vec<VertexId> {
    let on = |w: VertexId| c.image(w).is_some_and(|x| tri.contains(&x));
    let start = c.cover.vertices().find(|&w| on(w)).unwrap();
    let mut order = vec![start];
    let mut prev = None;
    let mut at = start;
    loop {
        let next = c.cover.neighbors(at).into_iter().filter(|&w| on(w) && Some(w) != prev).min().unwrap();
        if next == start {
            return order;
        }
        order.push(next);
        prev = Some(at);
        at = next;
    }
}

fn triangle_faces(eg: &EmbeddedGraph, over: &BTreeSet<EdgeId>, c: &CoverMap) -> usize {
    let faces = eg.trace_faces();
    faces
        .faces
        .iter()
        .filter(|f| f.len() == 3 && f.edges().iter().all(|&e| c.edge_image(e).is_some_and(|b| over.contains(&b))))
        .count()
}

fn facial_normalization() -> Check {
    let inst = member(Family::Theta1, 2);
    let tri: BTreeSet<VertexId> = inst.hanging[0].iter().copied().collect();
    let tri_edges: BTreeSet<EdgeId> =
        inst.graph.edges().filter(|(_, a, b)| tri.contains(a) && tri.contains(b)).map(|(e, _, _)| e).collect();
    let mut va = VoltageAssignment::identity(inst.graph.clone(), 2);
    va.set(*tri_edges.iter().next().unwrap(), vec![1, 0]).unwrap();
    let c = derived_cover(&va);
    let hex = hexagon_order(&c, &tri);
    ensure(hex.len() == 6, format!("lifted triangle is a {}-cycle", hex.len()))?;
    let mut eg = EmbeddedGraph::from_incidence_order(c.cover.clone());
    for (i, &y) in hex.iter().enumerate() {
        let (pred, succ) = (hex[(i + 5) % 6], hex[(i + 1) % 6]);
        let toward = |z: VertexId| {
            let rot = eg.rotation(y);
            *rot.iter().find(|d| c.cover.opposite(d.edge, y) == Some(z)).unwrap()
        };
        let (dp, ds) = (toward(pred), toward(succ));
        let rest: Vec<Dart> = eg.rotation(y).iter().copied().filter(|&d| d != dp && d != ds).collect();
        eg.set_rotation(y, [dp, ds].into_iter().chain(rest).collect()).map_err(|e| e.to_string())?;
    }
    let hex_facial = eg.trace_faces().faces.iter().any(|f| {
        f.len() == 6 && f.edges().iter().all(|&e| c.edge_image(e).is_some_and(|b| tri_edges.contains(&b)))
    });
    ensure(hex_facial, "constructed hexagon is not a face")?;

    let rw = normalize_facial_triangles(&c, &eg, &inst).map_err(|e| e.to_string())?;
    let (g0, g1) = (embedding_genus(&eg), embedding_genus(&rw.embedding));
    let (t0, t1) = (triangle_faces(&eg, &tri_edges, &c), triangle_faces(&rw.embedding, &tri_edges, &rw.cover));
    let detail = format!(
        "faces {}->{}, genus {g0}->{g1}, lifted triangles facial {t0}->{t1}",
        rw.faces_before, rw.faces_after
    );
    ensure(rw.rewired == 1 && t1 == t0 + 2, format!("expected two new facial triangles; {detail}"))?;
    ensure(verify_cover(&rw.cover) == Ok(2), format!("ply changed; {detail}"))?;
    ensure(g0 == g1, format!("genus changed; {detail}"))?;
    ensure(rw.faces_after == rw.faces_before + 1, format!("face count did not grow by one; {detail}"))?;
    Ok(detail)
}

fn toy_decisions() -> Check {
    let opts = GenusOptions::default();
    let r = decide_toy(0, &[cycle(3)], 6, &opts).map_err(|e| e.to_string())?;
    ensure(r.hits.len() == 2, format!("{} hits for C3", r.hits.len()))?;
    for want in [cycle(3), cycle(6)] {
        let found = r.hits.iter().any(|h| is_isomorphic(&h.graph, &want).unwrap().is_some());
        ensure(found, format!("C{} missing", want.vertex_count()))?;
    }
    let r = decide_toy(0, &[complete(5), complete_bipartite(3, 3)], 6, &opts).map_err(|e| e.to_string())?;
    ensure(r.hits.is_empty(), format!("{} hits for K5/K3,3", r.hits.len()))?;
    Ok(format!("{} graphs, {} planar", r.graphs, r.embeddable))
}

fn resume() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("omega12.ckpt");
    let spec = SearchSpec::new(member(Family::Omega1, 2).graph, 2, Filter::Planar).map_err(|e| e.to_string())?;
    let full = run_search(&spec, &SearchOptions::default()).map_err(|e| e.to_string())?;
    let opts = SearchOptions { checkpoint: Some(path.clone()), ..SearchOptions::default() };
    let first = run_search(&spec, &SearchOptions { stop_after: Some(spec.size() / 2), ..opts.clone() })
        .map_err(|e| e.to_string())?;
    ensure(!first.complete && first.checked == spec.size() / 2, format!("interrupted run checked {}", first.checked))?;
    let rest = run_search(&spec, &opts).map_err(|e| e.to_string())?;
    ensure(rest.complete && rest.checked == full.checked, format!("resumed run checked {}", rest.checked))?;
    ensure(rest.hits == full.hits, "hit sets differ")?;
    Ok(format!("checked {} in two halves, {} hits", rest.checked, rest.hits.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("euler bounds and K4 embeddings", Duration::from_secs(10), euler_bounds),
        ("genus of K4, K5, K3,3", Duration::from_secs(120), genus_oracle),
        ("ply-bound table", Duration::from_secs(1), bound_table),
        ("no planar double cover of omega1:2, theta1:2", Duration::from_secs(600), no_planar_double_covers),
        ("projective plane and double covers of K5, K6", Duration::from_secs(300), projective_double_covers),
        ("lift operations keep the cover", Duration::from_secs(60), lift_closure),
        ("reduction to the K5 form", Duration::from_secs(5), reductions),
        ("tree lemma", Duration::from_secs(30), tree_lemma),
        ("facial normalization", Duration::from_secs(10), facial_normalization),
        ("toy decision", Duration::from_secs(300), toy_decisions),
        ("checkpoint resume", Duration::from_secs(600), resume),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let took = t.elapsed();
        let result = match result {
            Ok(d) if took > limit => Err(format!("{d}; took {took:.1?}, limit {limit:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
