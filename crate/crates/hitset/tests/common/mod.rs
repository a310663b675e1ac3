//! Shared helpers and independent oracles for the integration suites.
//!
//! Everything here recomputes results from first principles (exhaustive
//! scans, subset enumeration) so the library is checked against code that
//! shares none of its logic.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hitset::bbd::{halve, BbdTree, Cell, NodeId};
use hitset::crossing::crosses;
use hitset::geometry::{AxisRect, Point, SimplePolygon};
use hitset::offline::HittingInstance;

pub fn pt(x: f64, y: f64) -> Point {
    Point { x, y }
}

pub fn rect(x_lo: f64, y_lo: f64, x_hi: f64, y_hi: f64) -> AxisRect {
    AxisRect { x_lo, y_lo, x_hi, y_hi }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random dyadic coordinate k / 2^bits in [0, 1].
pub fn dyadic(rng: &mut ChaCha8Rng, bits: u32) -> f64 {
    rng.random_range(0..=1u64 << bits) as f64 / (1u64 << bits) as f64
}

/// n distinct dyadic points in the unit square.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut seen = std::collections::HashSet::new();
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = pt(dyadic(rng, 16), dyadic(rng, 16));
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            pts.push(p);
        }
    }
    pts
}

/// Random dyadic rectangle inside the unit square with aspect ratio at
/// most `rho`.
pub fn random_rect_rho(rng: &mut ChaCha8Rng, rho: f64) -> AxisRect {
    let scale = (1u64 << 10) as f64;
    let (kw, kh) = loop {
        let kw = rng.random_range(4..=512u64);
        let kh = rng.random_range(4..=512u64);
        let (a, b) = (kw.max(kh) as f64, kw.min(kh) as f64);
        if a <= rho * b {
            break (kw, kh);
        }
    };
    let (w, h) = (kw as f64 / scale, kh as f64 / scale);
    let x_lo = dyadic(rng, 10) * (1.0 - w);
    let y_lo = dyadic(rng, 10) * (1.0 - h);
    rect(x_lo, y_lo, x_lo + w, y_lo + h)
}

/// Random grid box of the unit square: `extra` successive longer-side
/// halvings applied to `from` (random low/high choice each step).
pub fn descend_grid(rng: &mut ChaCha8Rng, from: &AxisRect, extra: usize) -> AxisRect {
    let mut b = *from;
    for _ in 0..extra {
        let (_, _, lo, hi) = halve(&b);
        b = if rng.random_range(0..2u32) == 0 { lo } else { hi };
    }
    b
}

/// Random proper annulus cell with a grid inner box (resampled until
/// normalization does not collapse it to a plain half).
pub fn random_annulus_cell(rng: &mut ChaCha8Rng) -> Cell {
    loop {
        let outer_steps = rng.random_range(0..4usize);
        let r_out = descend_grid(rng, &rect(0.0, 0.0, 1.0, 1.0), outer_steps);
        let inner_steps = rng.random_range(2..7usize);
        let r_in = descend_grid(rng, &r_out, inner_steps);
        let c = Cell::normalized(r_out, Some(r_in));
        if c.r_in.is_some() {
            return c;
        }
    }
}

/// Leaf-scan point location: the unique leaf whose cell half-open-contains
/// the point. Panics unless exactly one leaf matches.
pub fn leaf_scan_locate(tree: &BbdTree, p: Point) -> NodeId {
    let hits: Vec<NodeId> = (0..tree.node_count())
        .filter(|&v| tree.node(v).is_leaf() && tree.ho_cell_contains(&tree.node(v).cell, p))
        .collect();
    assert_eq!(hits.len(), 1, "point {p:?} matched leaves {hits:?}");
    hits[0]
}

/// Full-scan crossing oracle: every node whose cell the rectangle crosses,
/// in id (pre-)order, with no pruning.
pub fn full_scan_crossed(tree: &BbdTree, r: &AxisRect) -> Vec<NodeId> {
    (0..tree.node_count())
        .filter(|&v| crosses(r, &tree.node(v).cell))
        .collect()
}

/// Exhaustive minimum hitting set by subset enumeration over the points
/// that occur in some object set. Only for instances with at most ~20
/// occurring points.
pub fn exhaustive_min_hitting_set(inst: &HittingInstance) -> Vec<u32> {
    let mut occurring: Vec<u32> = inst.object_point_sets.iter().flatten().copied().collect();
    occurring.sort_unstable();
    occurring.dedup();
    assert!(occurring.len() <= 22, "oracle is exponential in occurring points");
    let masks: Vec<u64> = inst
        .object_point_sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|i| 1u64 << occurring.binary_search(i).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    if masks.is_empty() {
        return Vec::new();
    }
    for k in 1..=occurring.len() {
        let mut best: Option<u64> = None;
        let mut subset = (1u64 << k) - 1;
        let limit = 1u64 << occurring.len();
        while subset < limit {
            if masks.iter().all(|&m| m & subset != 0) {
                best = Some(subset);
                break;
            }
            // Next k-subset in colexicographic order (Gosper's hack).
            let c = subset & subset.wrapping_neg();
            let r = subset + c;
            subset = (((r ^ subset) >> 2) / c) | r;
        }
        if let Some(s) = best {
            return occurring
                .iter()
                .enumerate()
                .filter(|&(j, _)| s & (1 << j) != 0)
                .map(|(_, &i)| i)
                .collect();
        }
    }
    unreachable!("taking every occurring point is always a hitting set");
}

/// Whether `set` hits every object set of the instance.
pub fn is_hitting_set(inst: &HittingInstance, set: &[u32]) -> bool {
    inst.object_point_sets
        .iter()
        .all(|s| s.iter().any(|i| set.contains(i)))
}

/// Size of the largest antichain (pairwise non-ancestor node set) inside
/// `chosen`, by bottom-up dynamic programming over the tree.
pub fn max_antichain(tree: &BbdTree, chosen: &[NodeId]) -> usize {
    let mut in_chosen = vec![false; tree.node_count()];
    for &v in chosen {
        in_chosen[v] = true;
    }
    // Node ids are pre-order, so children have larger ids than parents.
    let mut f = vec![0usize; tree.node_count()];
    for v in (0..tree.node_count()).rev() {
        let below = match tree.node(v).children {
            Some((a, b)) => f[a] + f[b],
            None => 0,
        };
        f[v] = below.max(usize::from(in_chosen[v]));
    }
    f[0]
}

/// Concave star-shaped test polygon with k vertices, alternating radii.
pub fn star_polygon(k: usize) -> SimplePolygon {
    let verts: Vec<Point> = (0..k)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let r = if i % 2 == 0 { 1.0 } else { 0.55 };
            pt(r * a.cos(), r * a.sin())
        })
        .collect();
    SimplePolygon::new(verts).unwrap()
}
