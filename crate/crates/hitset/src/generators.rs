//! Seeded instance generators. All emitted coordinates are dyadic
//! rationals so the midpoint arithmetic downstream stays exact; every
//! object is feasible by construction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{point_in_homothet_of_polygon, Homothet, Point, SimplePolygon, Vec2};
use crate::homothet::triangulate;
use crate::instance::{Instance, Meta, Mode, ObjectRecord, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    UniformSquares,
    OnePointNest,
    HomothetRandom,
}

impl GenKind {
    pub fn name(&self) -> &'static str {
        match self {
            GenKind::UniformSquares => "uniform-squares",
            GenKind::OnePointNest => "one-point-nest",
            GenKind::HomothetRandom => "homothet-random",
        }
    }

    pub fn parse(s: &str) -> Option<GenKind> {
        match s {
            "uniform-squares" => Some(GenKind::UniformSquares),
            "one-point-nest" => Some(GenKind::OnePointNest),
            "homothet-random" => Some(GenKind::HomothetRandom),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub kind: GenKind,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub rho: f64,
    pub polygon: Option<SimplePolygon>,
}

impl GenSpec {
    fn check(&self) -> Result<()> {
        if self.n < 1 || self.m < 1 || self.rho < 1.0 {
            return Err(Error::Construction(
                "generator sizes must satisfy n >= 1, m >= 1, rho >= 1".into(),
            ));
        }
        Ok(())
    }

    fn meta(&self) -> Meta {
        Meta {
            kind: self.kind.name().into(),
            seed: self.seed,
            n: self.n,
            m: self.m,
            rho: self.rho,
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    match spec.kind {
        GenKind::UniformSquares => gen_uniform(spec),
        GenKind::OnePointNest => gen_one_point_nest(spec),
        GenKind::HomothetRandom => gen_homothet_random(spec),
    }
}

/// Dyadic coordinate k / 2^20 in [0, 1].
fn dyadic_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0..=1u64 << 20) as f64 / (1u64 << 20) as f64
}

fn distinct_unit_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 2]> {
    let mut seen = std::collections::HashSet::new();
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = [dyadic_unit(rng), dyadic_unit(rng)];
        if seen.insert((p[0].to_bits(), p[1].to_bits())) {
            pts.push(p);
        }
    }
    pts
}

/// Uniform dyadic points in the unit square; axis-aligned rectangles with
/// dyadic corners and aspect ratio at most rho, each containing at least
/// one point (re-sampled, then snapped to a random point if still empty).
pub fn gen_uniform(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pts = distinct_unit_points(&mut rng, spec.n);
    let points: Vec<Point> = pts.iter().map(|&[x, y]| Point::new(x, y)).collect();

    let scale = (1u64 << 10) as f64;
    let mut objects = Vec::with_capacity(spec.m);
    while objects.len() < spec.m {
        // Side lengths in units of 2^-10, rejected until the aspect fits.
        let (kw, kh) = loop {
            let kw = rng.random_range(8..=512u64);
            let kh = rng.random_range(8..=512u64);
            let (a, b) = (kw.max(kh) as f64, kw.min(kh) as f64);
            if a <= spec.rho * b {
                break (kw, kh);
            }
        };
        let (w, h) = (kw as f64 / scale, kh as f64 / scale);
        let mut rect = None;
        for attempt in 0..32 {
            let (x_lo, y_lo) = if attempt < 24 {
                (dyadic_unit(&mut rng) - w / 2.0, dyadic_unit(&mut rng) - h / 2.0)
            } else {
                // Snap onto a random point.
                let p = points[rng.random_range(0..points.len())];
                let fx = rng.random_range(0..=16u64) as f64 / 16.0;
                let fy = rng.random_range(0..=16u64) as f64 / 16.0;
                (p.x - fx * w, p.y - fy * h)
            };
            let cand = ObjectRecord::Rect { x_lo, y_lo, x_hi: x_lo + w, y_hi: y_lo + h };
            let feasible = points
                .iter()
                .any(|p| x_lo <= p.x && p.x <= x_lo + w && y_lo <= p.y && p.y <= y_lo + h);
            if feasible {
                rect = Some(cand);
                break;
            }
        }
        objects.push(rect.expect("snapped rectangle contains its anchor point"));
    }

    Ok(Instance {
        format: FORMAT_VERSION,
        mode: Mode::Rects,
        meta: spec.meta(),
        points: pts,
        objects,
        polygon: None,
    })
}

/// Side of the i-th nested square (i starting at 1): halves each round
/// while representable, then decreases linearly so coordinates stay exact
/// for m up to 4096.
fn nest_side(i: usize) -> f64 {
    if i <= 800 {
        2f64.powi(-(i as i32))
    } else {
        ((1u64 << 12) - (i as u64 - 800)) as f64 * 2f64.powi(-812)
    }
}

/// A target point at the origin surrounded by geometrically shrinking
/// rings of decoys, with m nested squares all containing the target, so
/// the certified optimum is a single point.
pub fn gen_one_point_nest(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    let mut pts: Vec<[f64; 2]> = vec![[0.0, 0.0]];
    let mut ring = 1i32;
    'fill: loop {
        let d = 2f64.powi(-ring);
        for (dx, dy) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ] {
            if pts.len() >= spec.n {
                break 'fill;
            }
            pts.push([dx * d, dy * d]);
        }
        ring += 1;
    }
    let objects: Vec<ObjectRecord> = (1..=spec.m)
        .map(|i| {
            let s = nest_side(i);
            ObjectRecord::Rect { x_lo: -s, y_lo: -s, x_hi: s, y_hi: s }
        })
        .collect();
    Ok(Instance {
        format: FORMAT_VERSION,
        mode: Mode::Rects,
        meta: spec.meta(),
        points: pts,
        objects,
        polygon: None,
    })
}

/// Random points inside the polygon plus random positive homothets
/// (dyadic scales in [2^-8, 2^3]), each containing at least one point.
pub fn gen_homothet_random(spec: &GenSpec) -> Result<Instance> {
    spec.check()?;
    let poly = spec
        .polygon
        .clone()
        .ok_or_else(|| Error::InvalidPolygon("homothet generator requires a polygon".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bbox = poly.bounding_box();

    let mut seen = std::collections::HashSet::new();
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(spec.n);
    while pts.len() < spec.n {
        let x = bbox.x_lo + dyadic_unit(&mut rng) * bbox.width();
        let y = bbox.y_lo + dyadic_unit(&mut rng) * bbox.height();
        if poly.contains(Point::new(x, y)) && seen.insert((x.to_bits(), y.to_bits())) {
            pts.push([x, y]);
        }
    }
    let points: Vec<Point> = pts.iter().map(|&[x, y]| Point::new(x, y)).collect();

    // An interior anchor of the polygon: the centroid of its first
    // triangle. Used to force feasibility when random placement fails.
    let t0 = triangulate(&poly)?[0];
    let anchor = Point::new(
        (t0[0].x + t0[1].x + t0[2].x) / 3.0,
        (t0[0].y + t0[1].y + t0[2].y) / 3.0,
    );

    let mut objects = Vec::with_capacity(spec.m);
    while objects.len() < spec.m {
        let scale = rng.random_range(1..=1u64 << 11) as f64 / (1u64 << 8) as f64;
        let mut obj = None;
        for attempt in 0..32 {
            let h = if attempt < 24 {
                let tx = bbox.x_lo + (dyadic_unit(&mut rng) * 2.0 - 0.5) * bbox.width()
                    - scale * bbox.x_lo;
                let ty = bbox.y_lo + (dyadic_unit(&mut rng) * 2.0 - 0.5) * bbox.height()
                    - scale * bbox.y_lo;
                Homothet::new(scale, Vec2::new(tx, ty))?
            } else {
                // Place the anchor's image on a random point.
                let p = points[rng.random_range(0..points.len())];
                Homothet::new(
                    scale,
                    Vec2::new(p.x - scale * anchor.x, p.y - scale * anchor.y),
                )?
            };
            if points
                .iter()
                .any(|&p| point_in_homothet_of_polygon(p, &poly, &h))
            {
                obj = Some(ObjectRecord::Homothet {
                    scale: h.scale,
                    tx: h.translation.x,
                    ty: h.translation.y,
                });
                break;
            }
        }
        objects.push(obj.expect("anchored homothet contains its point"));
    }

    Ok(Instance {
        format: FORMAT_VERSION,
        mode: Mode::Homothets,
        meta: spec.meta(),
        points: pts,
        objects,
        polygon: Some(poly.vertices().iter().map(|p| [p.x, p.y]).collect()),
    })
}
