//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lnc_core::analysis::{mincut_report, rank_mincut_estimate};
use lnc_core::duality::{backward_matrix, backward_valid, reverse, simulate_backward, square_reduce};
use lnc_core::gen::{random_dag, random_layered, DagParams, LayeredParams, Taps, VariantMix};
use lnc_core::lnc::{
    assign_random, individual_matrix, interlayer_matrix, overall_matrix, simulate, simulate_timed, simulated_matrix,
    CoeffKey, CodingAssignment,
};
use lnc_core::rng::Prng;
use lnc_core::{layered_variant1, to_variant1, Error, FieldMatrix, FieldSpec, LayeredNetwork, Network, NetworkBuilder, Variant};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn fig2() -> Network {
    Network::from_json(include_str!("../data/fig2.json")).expect("bundled network parses")
}

fn gf(p: u32, m: u32) -> FieldSpec {
    FieldSpec::new(p, m).expect("supported field")
}

fn two_layer_example() -> Outcome {
    let f = gf(11, 1);
    let wiring: [(&str, &str, u32); 8] =
        [("A", "1", 2), ("A", "2", 3), ("B", "1", 4), ("B", "2", 5), ("B", "3", 6), ("C", "2", 7), ("C", "3", 8), ("D", "3", 9)];
    let mut b = NetworkBuilder::new(&f).source("S");
    for id in ["1", "2", "3", "A", "B", "C", "D"] {
        b = b.node(id, Variant::Variant1);
    }
    b = b.destination("T");
    for id in ["1", "2", "3"] {
        b = b.edge("S", id);
    }
    for (to, from, _) in wiring {
        b = b.edge(from, to);
    }
    for id in ["A", "B", "C", "D"] {
        b = b.edge(id, "T");
    }
    let net = b.build().map_err(err)?;
    let layers: BTreeMap<String, usize> =
        [("1", 1), ("2", 1), ("3", 1), ("A", 2), ("B", 2), ("C", 2), ("D", 2)].map(|(k, v)| (k.to_string(), v)).into();
    let l = LayeredNetwork::from_parts(net, &layers, Vec::new()).map_err(err)?;
    let mut asg = CodingAssignment::new(&f);
    for (to, from, c) in wiring {
        asg.insert(CoeffKey::new(to, &format!("{from}->{to}"), None), c).map_err(err)?;
    }
    let expected = FieldMatrix::from_rows(&f, &[[2, 3, 0], [4, 5, 6], [0, 7, 8], [0, 0, 9]]).map_err(|e| e.to_string())?;
    let forward = interlayer_matrix(&l, &asg, 1).map_err(err)?;
    check(forward == expected, || format!("forward matrix\n{forward}"))?;
    let rev = reverse(&l, &asg, 0).map_err(err)?;
    let backward = rev.interlayer_matrix(1).map_err(err)?;
    check(backward == expected.transpose(), || format!("backward matrix\n{backward}"))?;
    let whole = backward_matrix(&rev).map_err(err)?.matrix;
    check(whole == overall_matrix(&l, &asg).map_err(err)?.matrix.transpose(), || "overall transpose".into())?;
    Ok("4x3 pattern matches, reversed matrix is its transpose".into())
}

fn fig2_layering() -> Outcome {
    let net = fig2();
    let spectrum = net.path_length_spectrum("D1").map_err(err)?;
    check(spectrum.is_superset(&BTreeSet::from([3, 5])), || format!("spectrum {spectrum:?}"))?;
    let l = layered_variant1(&net, false).map_err(err)?;
    check(l.depth() == 4, || format!("L = {}", l.depth()))?;
    let asg = assign_random(l.network(), 1);
    let mut dims = Vec::new();
    for i in 1..l.depth() {
        let m = interlayer_matrix(&l, &asg, i).map_err(err)?;
        dims.push((m.rows(), m.cols()));
    }
    check(dims == [(2, 2), (4, 2), (3, 4)], || format!("dims {dims:?}"))?;
    Ok(format!("spectrum {spectrum:?}, L = 4, dims {dims:?}"))
}

/// The 200 layered instances shared by criteria 3 and 4.
fn layered_instances() -> Vec<(LayeredNetwork, CodingAssignment)> {
    let mut rng = Prng::from_seed(3);
    (0..200u64)
        .map(|i| {
            let field = if i % 2 == 0 { gf(7, 1) } else { gf(2, 8) };
            let p = LayeredParams {
                symbols: 1 + rng.below(6) as usize,
                layers: 1 + rng.below(8) as usize,
                max_width: 1 + rng.below(10) as usize,
                edge_prob: 0.1 + 0.6 * (rng.below(100) as f64 / 100.0),
                taps: Taps::Random(1 + rng.below(3) as usize),
            };
            let l = random_layered(&field, &p, 1000 + i);
            let asg = assign_random(l.network(), 2000 + i);
            (l, asg)
        })
        .collect()
}

fn factorization(instances: &[(LayeredNetwork, CodingAssignment)]) -> Outcome {
    for (i, (l, asg)) in instances.iter().enumerate() {
        let net = l.network();
        let n = net.source_symbols();
        let a = overall_matrix(l, asg).map_err(err)?.matrix;
        let last = l.layer(l.depth());
        let mut assembled = FieldMatrix::zeros(net.field(), last.len(), n);
        for j in 0..n {
            let mut x = vec![0; n];
            x[j] = 1;
            let sim = simulate(net, asg, &x).map_err(err)?;
            for (r, &v) in last.iter().enumerate() {
                assembled.set(r, j, sim.nodes[v][0]);
            }
        }
        check(a == assembled, || format!("instance {i}: overall matrix differs"))?;
        for k in 0..net.destinations().len() {
            let ak = individual_matrix(l, asg, k).map_err(err)?.matrix;
            check(ak == simulated_matrix(net, asg, k).map_err(err)?, || format!("instance {i}: A_{k} differs"))?;
        }
    }
    Ok(format!("{} instances exact", instances.len()))
}

fn transpose_duality(instances: &[(LayeredNetwork, CodingAssignment)]) -> Outcome {
    let mut checked = 0;
    for (i, (l, asg)) in instances.iter().enumerate() {
        let a = overall_matrix(l, asg).map_err(err)?.matrix;
        for k in 0..l.network().destinations().len() {
            let rev = reverse(l, asg, k).map_err(err)?;
            check(backward_matrix(&rev).map_err(err)?.matrix == a.transpose(), || format!("instance {i}, destination {k}"))?;
            checked += 1;
        }
    }
    Ok(format!("{} instances, {checked} reversals exact", instances.len()))
}

fn validity_duality() -> Outcome {
    let mut rng = Prng::from_seed(5);
    let (mut direct, mut reduced, mut skipped) = (0, 0, 0);
    let mut seed = 0u64;
    while direct + reduced < 500 {
        seed += 1;
        let field = if seed.is_multiple_of(2) { gf(7, 1) } else { gf(2, 8) };
        let n = 1 + rng.below(5) as usize;
        let surplus = seed % 4 >= 2;
        let p = LayeredParams {
            symbols: n,
            layers: 1 + rng.below(6) as usize,
            max_width: 2 + rng.below(8) as usize,
            edge_prob: 0.5,
            taps: Taps::Exact(if surplus { n + 2 } else { n }),
        };
        let l = random_layered(&field, &p, seed);
        let asg = assign_random(l.network(), seed);
        let l = if surplus {
            match square_reduce(&l, &asg, 0) {
                Ok((_, r)) => r,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            }
        } else {
            l
        };
        // a single layer is widened to the tap count, so n is read back
        let n = l.network().source_symbols();
        let ak = individual_matrix(&l, &asg, 0).map_err(err)?.matrix;
        check(ak.rows() == n && ak.cols() == n, || format!("seed {seed}: A_k is {}x{}", ak.rows(), ak.cols()))?;
        if ak.rank() < n {
            skipped += 1;
            continue;
        }
        if surplus {
            reduced += 1
        } else {
            direct += 1
        }
        check(backward_valid(&l, &asg, 0).map_err(err)?, || format!("seed {seed}: backward invalid"))?;
        let x: Vec<u32> = (0..n).map(|_| rng.below(field.order() as u64) as u32).collect();
        let y = simulate(l.network(), &asg, &x).map_err(err)?.received.swap_remove(0);
        check(ak.solve_vec(&y).map_err(|e| e.to_string())? == x, || format!("seed {seed}: forward decode"))?;
        let rev = reverse(&l, &asg, 0).map_err(err)?;
        let yb = simulate_backward(&rev, &x).map_err(err)?;
        check(ak.transpose().solve_vec(&yb).map_err(|e| e.to_string())? == x, || format!("seed {seed}: backward decode"))?;
    }
    Ok(format!("{} instances ({direct} square as drawn, {reduced} reduced), 100% valid both ways; {skipped} singular draws skipped", direct + reduced))
}

fn mincut_bracketing() -> Outcome {
    let f = gf(257, 1);
    let mut rng = Prng::from_seed(9);
    let (mut cases, mut equal) = (0usize, 0usize);
    for seed in 0..500u64 {
        let destinations = 1 + rng.below(3) as usize;
        let p = DagParams {
            intermediates: rng.below((14 - destinations) as u64 + 1) as usize,
            destinations,
            edge_prob: 0.15 + 0.4 * (rng.below(100) as f64 / 100.0),
            variants: VariantMix::Variant2,
        };
        let net = random_dag(&f, &p, seed);
        check(net.nodes().len() <= 15, || format!("seed {seed}: {} nodes", net.nodes().len()))?;
        for k in 0..destinations {
            let r = mincut_report(&net, k, 32, seed, false).map_err(err)?;
            check(r.estimate <= r.upper_bound, || format!("seed {seed}, dest {k}: {} > bound {}", r.estimate, r.upper_bound))?;
            cases += 1;
            equal += usize::from(r.estimate == r.max_flow);
        }
    }

    // q <= K is refused
    let small = random_dag(&gf(2, 1), &DagParams { intermediates: 3, destinations: 2, edge_prob: 0.5, variants: VariantMix::Variant1 }, 1);
    let l = layered_variant1(&small, false).map_err(err)?;
    check(matches!(rank_mincut_estimate(&l, 0, 4, 1), Err(Error::FieldTooSmall { .. })), || "GF(2) with 2 destinations accepted".into())?;

    let rate = equal as f64 / cases as f64;
    check(rate >= 0.99, || format!("estimate = max-flow in {equal}/{cases} ({:.2}%)", 100.0 * rate))?;
    Ok(format!("500 DAGs, {cases} destinations: estimate <= bound 100%, = max-flow {:.2}%, q <= K refused", 100.0 * rate))
}

fn variant_equivalence() -> Outcome {
    let mut count = 0;
    for seed in 0..240u64 {
        let field = if seed % 2 == 0 { gf(7, 1) } else { gf(2, 8) };
        let variants = if seed % 6 == 5 { VariantMix::Mixed } else { VariantMix::Variant2 };
        let p = DagParams { intermediates: 2 + (seed % 9) as usize, destinations: 1 + (seed % 3) as usize, edge_prob: 0.35, variants };
        let net = random_dag(&field, &p, seed);
        let asg = assign_random(&net, seed ^ 0xabc);
        let (conv, map) = to_variant1(&net).map_err(err)?;
        let casg = asg.transport(&net, &conv, &map.provenance()).map_err(err)?;
        for k in 0..net.destinations().len() {
            let before = simulated_matrix(&net, &asg, k).map_err(err)?;
            let after = simulated_matrix(&conv, &casg, k).map_err(err)?;
            check(before == after, || format!("seed {seed}, destination {k}"))?;
        }
        count += 1;
    }
    Ok(format!("{count} networks, individual matrices identical"))
}

fn synchronization() -> Outcome {
    let mut rng = Prng::from_seed(11);
    for seed in 0..200u64 {
        let field = if seed % 2 == 0 { gf(7, 1) } else { gf(2, 8) };
        let p = LayeredParams {
            symbols: 1 + rng.below(5) as usize,
            layers: 1 + rng.below(8) as usize,
            max_width: 1 + rng.below(10) as usize,
            edge_prob: 0.4,
            taps: Taps::Random(2),
        };
        let l = random_layered(&field, &p, seed);
        let asg = assign_random(l.network(), seed);
        let t = simulate_timed(l.network(), &asg, &vec![1; p.symbols]).map_err(err)?;
        check(t.synchronized(), || format!("seed {seed}: arrivals {:?}", t.arrivals))?;
    }
    let net = fig2();
    let asg = assign_random(&net, 1);
    let t = simulate_timed(&net, &asg, &[1, 2]).map_err(err)?;
    let n2 = net.node_idx("N2").ok_or("N2 missing")?;
    check(t.buffer_depth(n2) == 1, || format!("N2 buffer depth {}", t.buffer_depth(n2)))?;
    Ok("200 layered instances synchronized, N2 buffers 1 tick".into())
}

fn field_axioms() -> Outcome {
    let mut rng = Prng::from_seed(13);
    for f in [gf(7, 1), gf(2, 1), gf(2, 8)] {
        let q = f.order() as u64;
        for _ in 0..10_000 {
            let (a, b, c) = (rng.below(q) as u32, rng.below(q) as u32, rng.below(q) as u32);
            let ok = f.add(a, b) == f.add(b, a)
                && f.mul(a, b) == f.mul(b, a)
                && f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                && f.add(a, 0) == a
                && f.mul(a, 1) == a
                && f.add(a, f.neg(a)) == 0
                && (a == 0 || f.mul(a, f.inv(a).unwrap()) == 1);
            check(ok, || format!("GF({q}) fails on ({a}, {b}, {c})"))?;
        }
    }
    let f = gf(2, 8);
    for a in 1..256 {
        let inv = f.inv(a).map_err(|e| e.to_string())?;
        check(f.mul(a, inv) == 1 && f.mul(inv, a) == 1, || format!("inverse of {a}"))?;
    }
    check(f.inv(0).is_err(), || "zero has an inverse".into())?;
    Ok("3 x 10^4 triples hold, all 255 GF(256) inverses verified".into())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut run = |id: usize, name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}; over time limit")),
            o => o,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} [{id}] {name}: {msg} ({:.3}s, limit {}s)", took.as_secs_f64(), limit.as_secs());
        if outcome.is_err() {
            failed += 1;
        }
    };
    let secs = Duration::from_secs;

    run(1, "two-layer transpose example", secs(1), &mut two_layer_example);
    run(2, "fig2 layering", secs(1), &mut fig2_layering);
    // criteria 3 and 4 share their instances; generation is charged to 3
    let mut instances = Vec::new();
    run(3, "factorization equivalence", secs(30), &mut || {
        instances = layered_instances();
        factorization(&instances)
    });
    run(4, "transpose duality", secs(30), &mut || transpose_duality(&instances));
    run(5, "validity duality", secs(60), &mut validity_duality);
    run(6, "mincut bracketing", secs(120), &mut mincut_bracketing);
    run(7, "variant equivalence", secs(30), &mut variant_equivalence);
    run(8, "synchronization", secs(30), &mut synchronization);
    run(9, "field axioms", secs(5), &mut field_axioms);

    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
