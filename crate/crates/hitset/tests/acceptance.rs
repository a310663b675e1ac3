//! Acceptance gate: one test per release criterion, each printing a single
//! `PASS criterion-k` line on success (an assertion failure marks the
//! criterion failed). Tolerances and scaling constants are frozen here and
//! in `bbd` (DEPTH_SLOPE, DEPTH_OFFSET, NODE_FACTOR); loosening them
//! requires revisiting the measurements recorded next to each constant.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use common::*;
use hitset::bbd::{validate, BbdTree};
use hitset::crossing::crossed_nodes;
use hitset::extremal::{ext, ext_cell};
use hitset::generators::{generate, GenKind, GenSpec};
use hitset::geometry::{AxisRect, Homothet, Point, SimplePolygon, Vec2};
use hitset::homothet::{decompose, MultiHitterState};
use hitset::offline::{reduce_rects, solve_min_hitting_set};
use hitset::online::{hits, HitterState};

/// Measured over the criterion-5 instance set: ratio / (rho * (log2 n + 1))
/// peaks near 1.4 on one-point-nest inputs (OPT = 1) and stays below 0.35
/// on uniform inputs. Frozen with margin.
const RATIO_FACTOR: f64 = 2.5;

/// Measured nest hitting-set sizes: 12 at n = 256, scaling like
/// 1.5 * log2 n. Frozen with margin.
const NEST_ALG_FACTOR: f64 = 3.0;

fn uniform_spec(seed: u64, n: usize, m: usize, rho: f64) -> GenSpec {
    GenSpec { kind: GenKind::UniformSquares, seed, n, m, rho, polygon: None }
}

fn nest_spec(seed: u64, n: usize, m: usize) -> GenSpec {
    GenSpec { kind: GenKind::OnePointNest, seed, n, m, rho: 1.0, polygon: None }
}

/// Criterion 1: the tree validator passes on uniform instances for
/// n in {16, ..., 16384}, 20 seeds each, every build-plus-validation run
/// finishing within 5 seconds.
#[test]
fn criterion_1_tree_validation_sweep() {
    for n in [16usize, 64, 256, 1024, 4096, 16384] {
        for seed in 0..20u64 {
            let inst = generate(&uniform_spec(seed, n, 1, 1.0)).unwrap();
            let start = Instant::now();
            let tree = BbdTree::build(&inst.points()).unwrap();
            let report = validate(&tree);
            assert!(report.all_pass(), "n={n} seed={seed}:\n{report}");
            let elapsed = start.elapsed();
            assert!(
                elapsed < Duration::from_secs(5),
                "n={n} seed={seed} took {elapsed:?}"
            );
        }
    }
    println!("PASS criterion-1: tree validation sweep (6 sizes x 20 seeds, < 5 s each)");
}

#[derive(Clone, Copy)]
enum HalfPlane {
    XLe(f64),
    XGe(f64),
    YLe(f64),
    YGe(f64),
}

impl HalfPlane {
    fn contains(&self, p: Point) -> bool {
        match *self {
            HalfPlane::XLe(c) => p.x <= c,
            HalfPlane::XGe(c) => p.x >= c,
            HalfPlane::YLe(c) => p.y <= c,
            HalfPlane::YGe(c) => p.y >= c,
        }
    }
}

fn random_half_plane(r: &mut rand_chacha::ChaCha8Rng, b: &AxisRect) -> HalfPlane {
    let cx = b.x_lo + dyadic(r, 8) * b.width();
    let cy = b.y_lo + dyadic(r, 8) * b.height();
    match r.random_range(0..4u32) {
        0 => HalfPlane::XLe(cx),
        1 => HalfPlane::XGe(cx),
        2 => HalfPlane::YLe(cy),
        _ => HalfPlane::YGe(cy),
    }
}

fn random_cell_points(r: &mut rand_chacha::ChaCha8Rng, b: &AxisRect, n: usize) -> Vec<Point> {
    (0..n)
        .map(|_| {
            pt(
                b.x_lo + dyadic(r, 8) * b.width(),
                b.y_lo + dyadic(r, 8) * b.height(),
            )
        })
        .collect()
}

/// Points of the cell under the cell-local half-open rule used by its
/// extremal subdivision.
fn assigned_ids(c: &hitset::bbd::Cell, subrects: &[AxisRect], pts: &[Point]) -> Vec<u32> {
    let ro = &c.r_out;
    let ho = |s: &AxisRect, p: Point| {
        p.x >= s.x_lo
            && p.y >= s.y_lo
            && (p.x < s.x_hi || s.x_hi == ro.x_hi)
            && (p.y < s.y_hi || s.y_hi == ro.y_hi)
    };
    (0..pts.len() as u32)
        .filter(|&i| subrects.iter().any(|s| ho(s, pts[i as usize])))
        .collect()
}

/// Criterion 2: the extremal-set guarantees hold on 10^4 random trials
/// each (half-planes against rectangles, then half-planes, corner strips
/// and inner-corner quadrants against annulus cells), and the number of
/// interior-disjoint cells a rectangle of aspect at most rho can cross is
/// at most 15 * ceil(rho).
#[test]
fn criterion_2_extremal_and_crossing_bounds() {
    // (a) Half-planes vs. plain rectangles.
    let mut r = rng(0x2a);
    for trial in 0..10_000 {
        let b = random_rect_rho(&mut r, 8.0);
        let count = r.random_range(1..30usize);
        let pts = random_cell_points(&mut r, &b, count);
        let hp = random_half_plane(&mut r, &b);
        let e = ext(&b, &pts);
        let witness = pts.iter().any(|&p| b.contains(p) && hp.contains(p));
        if witness {
            assert!(
                e.iter().any(|&i| hp.contains(pts[i as usize])),
                "half-plane/rect trial {trial}"
            );
        }
    }

    // (b) Half-planes vs. annulus cells.
    let mut r = rng(0x2b);
    for trial in 0..10_000 {
        let c = random_annulus_cell(&mut r);
        let count = r.random_range(1..30usize);
        let pts = random_cell_points(&mut r, &c.r_out, count);
        let ids: Vec<u32> = (0..pts.len() as u32).collect();
        let e = ext_cell(&c, &pts, &ids).unwrap();
        let members = assigned_ids(&c, &e.subrectangles, &pts);
        let hp = random_half_plane(&mut r, &c.r_out);
        if members.iter().any(|&i| hp.contains(pts[i as usize])) {
            assert!(
                e.point_ids.iter().any(|&i| hp.contains(pts[i as usize])),
                "half-plane/cell trial {trial}"
            );
        }
    }

    // (c) Strips containing a corner of the inner box.
    let mut r = rng(0x2c);
    for trial in 0..10_000 {
        let c = random_annulus_cell(&mut r);
        let ri = c.r_in.unwrap();
        let count = r.random_range(1..30usize);
        let pts = random_cell_points(&mut r, &c.r_out, count);
        let ids: Vec<u32> = (0..pts.len() as u32).collect();
        let e = ext_cell(&c, &pts, &ids).unwrap();
        let members = assigned_ids(&c, &e.subrectangles, &pts);
        let span = c.r_out.width().max(c.r_out.height());
        let vertical = r.random_range(0..2u32) == 0;
        let corner = if r.random_range(0..2u32) == 0 {
            pt(ri.x_lo, ri.y_lo)
        } else {
            pt(ri.x_hi, ri.y_hi)
        };
        let (lo, hi) = if vertical {
            (corner.x - dyadic(&mut r, 6) * span, corner.x + dyadic(&mut r, 6) * span)
        } else {
            (corner.y - dyadic(&mut r, 6) * span, corner.y + dyadic(&mut r, 6) * span)
        };
        let in_strip =
            |p: Point| if vertical { lo <= p.x && p.x <= hi } else { lo <= p.y && p.y <= hi };
        if members.iter().any(|&i| in_strip(pts[i as usize])) {
            assert!(
                e.point_ids.iter().any(|&i| in_strip(pts[i as usize])),
                "strip trial {trial}"
            );
        }
    }

    // (d) Quadrants with apex inside the inner box.
    let mut r = rng(0x2d);
    for trial in 0..10_000 {
        let c = random_annulus_cell(&mut r);
        let ri = c.r_in.unwrap();
        let count = r.random_range(1..30usize);
        let pts = random_cell_points(&mut r, &c.r_out, count);
        let ids: Vec<u32> = (0..pts.len() as u32).collect();
        let e = ext_cell(&c, &pts, &ids).unwrap();
        let members = assigned_ids(&c, &e.subrectangles, &pts);
        let apex = pt(
            ri.x_lo + dyadic(&mut r, 6) * ri.width(),
            ri.y_lo + dyadic(&mut r, 6) * ri.height(),
        );
        let (sx, sy) = (r.random_range(0..2u32) == 0, r.random_range(0..2u32) == 0);
        let in_quad = |p: Point| {
            (if sx { p.x >= apex.x } else { p.x <= apex.x })
                && (if sy { p.y >= apex.y } else { p.y <= apex.y })
        };
        if members.iter().any(|&i| in_quad(pts[i as usize])) {
            assert!(
                e.point_ids.iter().any(|&i| in_quad(pts[i as usize])),
                "quadrant trial {trial}"
            );
        }
    }

    // (e) Crossing antichain bound: a rectangle of aspect <= rho crosses
    // at most 15 * ceil(rho) pairwise interior-disjoint cells.
    let mut measured_max = 0usize;
    for (ri, rho) in [1.0f64, 2.0, 4.0, 8.0].into_iter().enumerate() {
        let bound = 15 * rho.ceil() as usize;
        let mut r = rng(0x2e00 + ri as u64);
        for t in 0..25 {
            let pts = random_points(&mut r, 64);
            let tree = BbdTree::build(&pts).unwrap();
            for _ in 0..100 {
                let s = random_rect_rho(&mut r, rho);
                let crossed = crossed_nodes(&tree, &s);
                let width = max_antichain(&tree, &crossed);
                assert!(width <= bound, "rho={rho} tree {t}: antichain {width} > {bound}");
                measured_max = measured_max.max(width);
            }
        }
    }
    println!(
        "PASS criterion-2: extremal guarantees (4 x 10^4 trials) and crossing \
         antichain <= 15*ceil(rho) (max seen {measured_max})"
    );
}

/// Criterion 3: after every round the processed object is hit, and the
/// full state invariants (active-set closure, sibling pairing, extremal
/// points in H, monotonicity, early-exit purity) hold.
#[test]
fn criterion_3_online_round_correctness() {
    for (seed, rho) in [(11u64, 1.0), (12, 2.0), (13, 4.0), (14, 8.0)] {
        let inst = generate(&uniform_spec(seed, 120, 100, rho)).unwrap();
        let pts = inst.points();
        let tree = Arc::new(BbdTree::build(&pts).unwrap());
        let mut st = HitterState::init(tree);
        let mut last = 0usize;
        for s in inst.rect_objects().unwrap() {
            let report = st.process(s).unwrap();
            assert!(hits(st.hitting_set(), &pts, &s), "object unhit after its round");
            assert!(st.hitting_set().len() >= last, "hitting set shrank");
            last = st.hitting_set().len();
            if report.already_hit {
                assert!(report.added_points.is_empty() && report.activated_nodes.is_empty());
            }
            st.check_invariants().unwrap();
        }
    }
    println!("PASS criterion-3: per-round correctness and state invariants (4 runs x 100 rounds)");
}

/// Criterion 4: no point is the newly charged hitter of more than
/// depth + 1 unhit rounds, including on adversarial one-point-nest
/// instances up to n = m = 4096.
#[test]
fn criterion_4_unhit_round_bound() {
    let mut cases: Vec<GenSpec> = vec![
        nest_spec(1, 64, 64),
        nest_spec(1, 1024, 1024),
        nest_spec(1, 4096, 4096),
        uniform_spec(21, 256, 512, 4.0),
        uniform_spec(22, 512, 512, 1.0),
    ];
    for spec in cases.drain(..) {
        let inst = generate(&spec).unwrap();
        let pts = inst.points();
        let tree = Arc::new(BbdTree::build(&pts).unwrap());
        let depth = tree.depth();
        let mut st = HitterState::init(tree);
        for s in inst.rect_objects().unwrap() {
            st.process(s).unwrap();
        }
        let max_unhit = st.unhit_round_counts().into_iter().max().unwrap();
        assert!(
            max_unhit <= depth + 1,
            "{} n={} m={}: max unhit {max_unhit} > depth {depth} + 1",
            spec.kind.name(),
            spec.n,
            spec.m
        );
        st.check_invariants().unwrap();
    }
    println!("PASS criterion-4: unhit-round bound <= depth+1 (incl. nest n=m=4096)");
}

/// Criterion 5: on instances whose optimum certifies within 10 seconds,
/// |H| <= max_points_per_round * (depth + 1) * |OPT| exactly, and the
/// normalized ratio ratio / (rho * (log2 n + 1)) stays below RATIO_FACTOR.
#[test]
fn criterion_5_certified_competitive_ratio() {
    let cases = vec![
        uniform_spec(1, 64, 256, 1.0),
        uniform_spec(2, 128, 512, 2.0),
        uniform_spec(3, 256, 1024, 4.0),
        uniform_spec(4, 512, 2048, 1.0),
        uniform_spec(5, 512, 2048, 8.0),
        nest_spec(7, 256, 256),
        nest_spec(8, 1024, 1024),
    ];
    let mut max_normalized = 0.0f64;
    for spec in &cases {
        let inst = generate(spec).unwrap();
        let pts = inst.points();
        let objects = inst.rect_objects().unwrap();
        let tree = Arc::new(BbdTree::build(&pts).unwrap());
        let depth = tree.depth();
        let mut st = HitterState::init(tree);
        for s in &objects {
            st.process(*s).unwrap();
        }
        let alg = st.hitting_set().len();

        let reduced = reduce_rects(&objects, &pts).unwrap();
        let outcome = solve_min_hitting_set(&reduced, Some(Duration::from_secs(10))).unwrap();
        assert!(
            outcome.is_proven(),
            "{} seed={} did not certify within 10 s",
            spec.kind.name(),
            spec.seed
        );
        let opt = outcome.set().len();
        assert!(is_hitting_set(&reduced, outcome.set()), "reported OPT set is not hitting");

        let budget = st.max_points_per_round() * (depth + 1) * opt;
        assert!(alg <= budget, "alg {alg} > per-round budget {budget}");

        let normalized =
            (alg as f64 / opt as f64) / (spec.rho * ((spec.n as f64).log2() + 1.0));
        assert!(
            normalized <= RATIO_FACTOR,
            "{} seed={}: normalized ratio {normalized:.3} > {RATIO_FACTOR}",
            spec.kind.name(),
            spec.seed
        );
        max_normalized = max_normalized.max(normalized);
    }
    println!(
        "PASS criterion-5: certified ratio bounds on {} instances \
         (max normalized ratio {max_normalized:.3} <= {RATIO_FACTOR})",
        cases.len()
    );
}

/// Criterion 6: one-point-nest instances certify OPT = 1 while the online
/// algorithm pays at least 2 points for n >= 64 and at most
/// NEST_ALG_FACTOR * log2 n.
#[test]
fn criterion_6_nest_separation() {
    let mut sizes = Vec::new();
    for n in [64usize, 256, 1024, 4096] {
        let inst = generate(&nest_spec(1, n, n)).unwrap();
        let pts = inst.points();
        let objects = inst.rect_objects().unwrap();
        let tree = Arc::new(BbdTree::build(&pts).unwrap());
        let mut st = HitterState::init(tree);
        for s in &objects {
            st.process(*s).unwrap();
        }
        let alg = st.hitting_set().len();

        let reduced = reduce_rects(&objects, &pts).unwrap();
        let outcome = solve_min_hitting_set(&reduced, Some(Duration::from_secs(10))).unwrap();
        assert!(outcome.is_proven(), "nest n={n} OPT not certified");
        assert_eq!(outcome.set().len(), 1, "nest n={n} OPT != 1");

        assert!(alg >= 2, "nest n={n}: alg {alg} < 2");
        let cap = NEST_ALG_FACTOR * (n as f64).log2();
        assert!(alg as f64 <= cap, "nest n={n}: alg {alg} > {cap}");
        sizes.push((n, alg));
    }
    println!("PASS criterion-6: nest OPT=1 with 2 <= alg <= 3*log2(n); sizes {sizes:?}");
}

/// Criterion 7: the homothet reduction is sound — the parallelogram pieces
/// tile each polygon (10^4 membership samples both ways), every transformed
/// piece maps to an axis-aligned square of side `scale` within 1e-9, the
/// piece count is exactly 3(k-2), and the per-piece hitters keep their own
/// invariants on a full run.
#[test]
fn criterion_7_homothet_reduction() {
    // Piece counts.
    for k in [3usize, 5, 7, 9] {
        let d = decompose(&star_polygon(k)).unwrap();
        assert_eq!(d.parallelograms.len(), 3 * (k - 2), "k={k}");
        assert_eq!(d.maps.len(), 3 * (k - 2));
    }

    // Coverage both ways, 5 * 10^3 samples each.
    let mut r = rng(0x77);
    for poly in [star_polygon(3), star_polygon(7)] {
        let d = decompose(&poly).unwrap();
        let bbox = poly.bounding_box();
        let mut inside = 0usize;
        while inside < 5_000 {
            let p = pt(
                bbox.x_lo + r.random_range(0.0..1.0) * bbox.width(),
                bbox.y_lo + r.random_range(0.0..1.0) * bbox.height(),
            );
            if !poly.contains(p) {
                continue;
            }
            inside += 1;
            let covered = d.maps.iter().any(|m| {
                let q = m.apply(p);
                (-1e-9..=1.0 + 1e-9).contains(&q.x) && (-1e-9..=1.0 + 1e-9).contains(&q.y)
            });
            assert!(covered, "polygon point {p:?} outside every piece");
        }
        for _ in 0..5_000 {
            let j = r.random_range(0..d.parallelograms.len());
            let m = &d.parallelograms[j];
            let (a, b) = (r.random_range(0.01..0.99), r.random_range(0.01..0.99));
            let p = m.origin + m.u * a + m.v * b;
            assert!(poly.contains(p), "piece {j} point {p:?} outside the polygon");
        }
    }

    // Square images of transformed pieces.
    let mut r = rng(0x78);
    let d = decompose(&star_polygon(5)).unwrap();
    for _ in 0..2_000 {
        let scale = 2f64.powf(r.random_range(-6.0..3.0));
        let h = Homothet::new(
            scale,
            Vec2::new(r.random_range(-4.0..4.0), r.random_range(-4.0..4.0)),
        )
        .unwrap();
        for (m, map) in d.parallelograms.iter().zip(&d.maps) {
            let [a, b, c, e] = m.vertices();
            let q: Vec<Point> = [a, b, c, e].iter().map(|&v| map.apply(h.apply(v))).collect();
            let tol = 1e-9 * (1.0 + scale);
            let close = |p: Point, x: f64, y: f64| (p.x - x).abs() <= tol && (p.y - y).abs() <= tol;
            let (x0, y0) = (q[0].x, q[0].y);
            assert!(close(q[1], x0 + scale, y0), "image not a square");
            assert!(close(q[2], x0 + scale, y0 + scale), "image not a square");
            assert!(close(q[3], x0, y0 + scale), "image not a square");
        }
    }

    // Full multi-hitter runs.
    let tri = SimplePolygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)]).unwrap();
    for (seed, poly, k) in [(31u64, tri, 3usize), (32, star_polygon(5), 5)] {
        let spec = GenSpec {
            kind: GenKind::HomothetRandom,
            seed,
            n: 80,
            m: 60,
            rho: 1.0,
            polygon: Some(poly.clone()),
        };
        let inst = generate(&spec).unwrap();
        let pts = inst.points();
        let mut st = MultiHitterState::init(&pts, &poly, false).unwrap();
        assert_eq!(st.sub_states().len(), 3 * (k - 2));
        for h in inst.homothet_objects().unwrap() {
            st.process_homothet(h).unwrap();
        }
        st.check_invariants().unwrap();
        for (j, sub) in st.sub_states().iter().enumerate() {
            let bound = sub.tree().depth() + 1;
            let max = sub.unhit_round_counts().into_iter().max().unwrap();
            assert!(max <= bound, "piece {j}: {max} > {bound}");
        }
    }
    println!(
        "PASS criterion-7: homothet reduction (tiling 10^4 samples, square images 1e-9, \
         3(k-2) pieces, per-piece invariants)"
    );
}

/// Criterion 8: the branch-and-bound optimum equals exhaustive subset
/// enumeration on 200 random instances (n <= 20, m <= 30), and every
/// reported optimum is certified and is itself a hitting set.
#[test]
fn criterion_8_offline_opt_exactness() {
    let mut r = rng(0x88);
    for trial in 0..200 {
        let n = r.random_range(5..=20usize);
        let m = r.random_range(5..=30usize);
        let pts = random_points(&mut r, n);
        let mut objects = Vec::with_capacity(m);
        while objects.len() < m {
            let mut s = random_rect_rho(&mut r, 8.0);
            if !pts.iter().any(|&p| s.contains(p)) {
                // Snap onto a random point to stay feasible.
                let p = pts[r.random_range(0..n)];
                let (w, h) = (s.width(), s.height());
                s = rect(p.x - w / 2.0, p.y - h / 2.0, p.x + w / 2.0, p.y + h / 2.0);
            }
            objects.push(s);
        }
        let reduced = reduce_rects(&objects, &pts).unwrap();
        let outcome = solve_min_hitting_set(&reduced, None).unwrap();
        assert!(outcome.is_proven(), "trial {trial}: no certificate");
        assert!(is_hitting_set(&reduced, outcome.set()), "trial {trial}: not hitting");
        let oracle = exhaustive_min_hitting_set(&reduced);
        assert!(is_hitting_set(&reduced, &oracle), "trial {trial}: oracle broken");
        assert_eq!(outcome.set().len(), oracle.len(), "trial {trial}: size mismatch");
    }
    println!("PASS criterion-8: exact OPT matches exhaustive enumeration on 200 instances");
}

/// Criterion 9: the gen -> run -> ratio pipeline is deterministic — two
/// fresh executions produce byte-identical instances, round logs and CSV
/// rows (the wall-time field, which is not part of the contract, is
/// masked).
#[test]
fn criterion_9_pipeline_determinism() {
    let bin = env!("CARGO_BIN_EXE_hitset");
    let run_pipeline = |dir: &std::path::Path| -> (Vec<u8>, Vec<u8>, String, String) {
        let inst = dir.join("instance.json");
        let report = dir.join("report.json");
        let log = dir.join("rounds.jsonl");
        let ok = |st: std::process::Output, what: &str| {
            assert!(
                st.status.success(),
                "{what} failed: {}",
                String::from_utf8_lossy(&st.stderr)
            );
            st
        };
        ok(
            Command::new(bin)
                .args(["gen", "--kind", "uniform-squares", "--seed", "99", "--n", "60"])
                .args(["--m", "40", "--rho", "2", "--output"])
                .arg(&inst)
                .output()
                .unwrap(),
            "gen",
        );
        ok(
            Command::new(bin)
                .args(["run", "--input"])
                .arg(&inst)
                .args(["--output"])
                .arg(&report)
                .args(["--log"])
                .arg(&log)
                .output()
                .unwrap(),
            "run",
        );
        let ratio = ok(
            Command::new(bin).args(["ratio", "--input"]).arg(&inst).output().unwrap(),
            "ratio",
        );

        // Mask the wall-clock fields, the one part that may legitimately vary.
        let mut rep: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
        rep["wall_time_ms"] = 0.into();
        rep["round_log_path"] = "".into();
        let csv: String = String::from_utf8(ratio.stdout)
            .unwrap()
            .lines()
            .map(|l| {
                let (head, _ms) = l.rsplit_once(',').unwrap();
                format!("{head}\n")
            })
            .collect();
        (
            std::fs::read(&inst).unwrap(),
            std::fs::read(&log).unwrap(),
            rep.to_string(),
            csv,
        )
    };

    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let a = run_pipeline(d1.path());
    let b = run_pipeline(d2.path());
    assert_eq!(a.0, b.0, "instance bytes differ");
    assert_eq!(a.1, b.1, "round logs differ");
    assert_eq!(a.2, b.2, "run reports differ");
    assert_eq!(a.3, b.3, "ratio CSV differs");
    println!("PASS criterion-9: gen -> run -> ratio pipeline is byte-deterministic");
}
