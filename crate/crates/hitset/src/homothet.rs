//! Online hitting set for positive homothets of a simple polygon.
//!
//! The polygon is triangulated (k-2 triangles by ear clipping); each
//! triangle splits along its edge midpoints into three parallelograms, so
//! the polygon is the union of 3(k-2) parallelograms. An affine map sends
//! each parallelogram to the unit square, turning each piece of an
//! incoming homothet into an axis-aligned square handled by a dedicated
//! rectangle hitter over the transformed point set. The global hitting set
//! is the union of the per-piece sets.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bbd::BbdTree;
use crate::error::{Error, Result};
use crate::geometry::{
    parallelogram_to_unit_square, point_in_homothet_of_polygon, AffineMap, AxisRect, Homothet,
    Parallelogram, Point, SimplePolygon,
};
use crate::online::HitterState;

pub type Triangle = [Point; 3];

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn point_in_triangle(t: &Triangle, p: Point) -> bool {
    let d0 = orient(t[0], t[1], p);
    let d1 = orient(t[1], t[2], p);
    let d2 = orient(t[2], t[0], p);
    d0 >= 0.0 && d1 >= 0.0 && d2 >= 0.0
}

/// Ear-clipping triangulation: k-2 interior-disjoint triangles whose union
/// is the polygon.
pub fn triangulate(poly: &SimplePolygon) -> Result<Vec<Triangle>> {
    let mut verts: Vec<Point> = poly.vertices().to_vec();
    let mut out = Vec::with_capacity(verts.len() - 2);
    let mut guard = 0usize;
    while verts.len() > 3 {
        guard += 1;
        if guard > poly.len() * poly.len() + 16 {
            return Err(Error::InvalidPolygon("no ear found".into()));
        }
        let k = verts.len();
        let mut clipped = false;
        for i in 0..k {
            let (a, b, c) = (verts[(i + k - 1) % k], verts[i], verts[(i + 1) % k]);
            if orient(a, b, c) <= 0.0 {
                continue;
            }
            let ear = [a, b, c];
            let blocked = verts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != (i + k - 1) % k && j != i && j != (i + 1) % k)
                .any(|(_, &p)| point_in_triangle(&ear, p));
            if blocked {
                continue;
            }
            out.push(ear);
            verts.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::InvalidPolygon("no ear found".into()));
        }
    }
    out.push([verts[0], verts[1], verts[2]]);
    Ok(out)
}

/// Splits a triangle along its edge midpoints into four congruent
/// subtriangles and returns the three parallelograms formed by the central
/// subtriangle together with each corner subtriangle. The parallelogram at
/// corner X has origin X and edge vectors half of the two incident edges.
pub fn triangle_to_parallelograms(t: &Triangle) -> Result<[Parallelogram; 3]> {
    let make = |x: Point, y: Point, z: Point| {
        Parallelogram::new(x, (y - x) * 0.5, (z - x) * 0.5)
    };
    Ok([
        make(t[0], t[1], t[2])?,
        make(t[1], t[2], t[0])?,
        make(t[2], t[0], t[1])?,
    ])
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub polygon: SimplePolygon,
    pub triangles: Vec<Triangle>,
    pub parallelograms: Vec<Parallelogram>,
    pub maps: Vec<AffineMap>,
}

/// Triangulates the polygon and splits each triangle, attaching the
/// unit-square map of every parallelogram. Yields 3(k-2) pieces.
pub fn decompose(poly: &SimplePolygon) -> Result<Decomposition> {
    let triangles = triangulate(poly)?;
    let mut parallelograms = Vec::with_capacity(3 * triangles.len());
    for t in &triangles {
        parallelograms.extend(triangle_to_parallelograms(t)?);
    }
    let maps = parallelograms
        .iter()
        .map(parallelogram_to_unit_square)
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        polygon: poly.clone(),
        triangles,
        parallelograms,
        maps,
    })
}

/// Single-piece decomposition for a polygon that is itself a
/// parallelogram (direct reduction; no triangulation).
pub fn decompose_direct(poly: &SimplePolygon) -> Result<Decomposition> {
    let m = poly
        .as_parallelogram()
        .ok_or_else(|| Error::InvalidPolygon("not a parallelogram".into()))?;
    Ok(Decomposition {
        polygon: poly.clone(),
        triangles: Vec::new(),
        maps: vec![parallelogram_to_unit_square(&m)?],
        parallelograms: vec![m],
    })
}

/// Audit record of one processed homothet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomothetRoundReport {
    pub round: usize,
    pub object: Homothet,
    pub already_hit: bool,
    /// Piece indices that received a square this round.
    pub pieces_fed: Vec<usize>,
    pub added_points: Vec<u32>,
    pub fallback_point_used: bool,
}

#[derive(Debug, Clone)]
pub struct MultiHitterState {
    decomposition: Decomposition,
    points: Vec<Point>,
    sub: Vec<HitterState>,
    /// Union of the sub-hitters' sets, in insertion order.
    global: Vec<u32>,
    in_global: Vec<bool>,
    round: usize,
    log: Vec<HomothetRoundReport>,
}

impl MultiHitterState {
    /// Builds one tree and hitter per parallelogram over the transformed
    /// point set. With `direct_parallelogram` set, a polygon that is
    /// itself a parallelogram uses a single piece.
    pub fn init(
        points: &[Point],
        poly: &SimplePolygon,
        direct_parallelogram: bool,
    ) -> Result<MultiHitterState> {
        let decomposition = if direct_parallelogram && poly.as_parallelogram().is_some() {
            decompose_direct(poly)?
        } else {
            decompose(poly)?
        };
        let mut sub = Vec::with_capacity(decomposition.maps.len());
        for map in &decomposition.maps {
            let transformed: Vec<Point> = points.iter().map(|&p| map.apply(p)).collect();
            let tree = Arc::new(BbdTree::build(&transformed)?);
            sub.push(HitterState::init(tree));
        }
        Ok(MultiHitterState {
            decomposition,
            points: points.to_vec(),
            sub,
            global: Vec::new(),
            in_global: vec![false; points.len()],
            round: 0,
            log: Vec::new(),
        })
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn sub_states(&self) -> &[HitterState] {
        &self.sub
    }

    pub fn global_hitting_set(&self) -> &[u32] {
        &self.global
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn log(&self) -> &[HomothetRoundReport] {
        &self.log
    }

    fn object_contains(&self, h: &Homothet, i: u32) -> bool {
        point_in_homothet_of_polygon(self.points[i as usize], &self.decomposition.polygon, h)
    }

    fn is_hit(&self, h: &Homothet) -> bool {
        self.global.iter().any(|&i| self.object_contains(h, i))
    }

    fn absorb(&mut self, ids: &[u32], added: &mut Vec<u32>) {
        for &i in ids {
            if !self.in_global[i as usize] {
                self.in_global[i as usize] = true;
                self.global.push(i);
                added.push(i);
            }
        }
    }

    /// Processes one positive homothet of the polygon; afterwards it is
    /// hit by the global set.
    pub fn process_homothet(&mut self, h: Homothet) -> Result<HomothetRoundReport> {
        if !(0..self.points.len() as u32).any(|i| self.object_contains(&h, i)) {
            return Err(Error::InfeasibleObject(None));
        }
        self.round += 1;
        let round = self.round;

        if self.is_hit(&h) {
            let report = HomothetRoundReport {
                round,
                object: h,
                already_hit: true,
                pieces_fed: Vec::new(),
                added_points: Vec::new(),
                fallback_point_used: false,
            };
            self.log.push(report.clone());
            return Ok(report);
        }

        let mut pieces_fed = Vec::new();
        let mut added = Vec::new();
        for j in 0..self.decomposition.maps.len() {
            let m = &self.decomposition.parallelograms[j];
            let map = &self.decomposition.maps[j];
            // Image of the piece a*M_j + b under L_j: the axis-aligned
            // square spanned by the images of two opposite corners.
            let q0 = map.apply(h.apply(m.origin));
            let q1 = map.apply(h.apply(m.origin + m.u + m.v));
            let square = AxisRect::new(
                q0.x.min(q1.x),
                q0.y.min(q1.y),
                q0.x.max(q1.x),
                q0.y.max(q1.y),
            )?;
            match self.sub[j].process(square) {
                Ok(report) => {
                    pieces_fed.push(j);
                    let ids = report.added_points.clone();
                    self.absorb(&ids, &mut added);
                }
                Err(Error::InfeasibleObject(_)) => {}
                Err(e) => return Err(e),
            }
        }

        // Guard against boundary disagreements between the transformed
        // squares and the polygon-membership test.
        let mut fallback = false;
        if !self.is_hit(&h) {
            let i = (0..self.points.len() as u32)
                .find(|&i| self.object_contains(&h, i))
                .unwrap();
            self.absorb(&[i], &mut added);
            fallback = true;
        }
        debug_assert!(self.is_hit(&h));

        let report = HomothetRoundReport {
            round,
            object: h,
            already_hit: false,
            pieces_fed,
            added_points: added,
            fallback_point_used: fallback,
        };
        self.log.push(report.clone());
        Ok(report)
    }

    /// Structural checks: the global set is the union of the sub-sets, all
    /// logged objects are hit, and each sub-hitter upholds its own
    /// invariants (including the per-piece unhit-round bound).
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut union: Vec<u32> = self.sub.iter().flat_map(|s| s.hitting_set().to_vec()).collect();
        union.sort_unstable();
        union.dedup();
        let mut global = self.global.clone();
        global.sort_unstable();
        let extra_fallbacks = global.iter().filter(|i| union.binary_search(i).is_err()).count();
        let fallback_rounds = self.log.iter().filter(|r| r.fallback_point_used).count();
        if extra_fallbacks > fallback_rounds {
            return Err("global set is not the union of sub-hitter sets".into());
        }
        for (j, s) in self.sub.iter().enumerate() {
            s.check_invariants().map_err(|e| format!("piece {j}: {e}"))?;
        }
        for r in &self.log {
            if !self.is_hit(&r.object) {
                return Err(format!("round {} homothet is unhit", r.round));
            }
        }
        Ok(())
    }
}
