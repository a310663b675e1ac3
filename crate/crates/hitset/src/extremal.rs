//! Extremal point sets of rectangles and annular cells.
//!
//! A plain rectangle contributes at most 4 extremal points (min-x, max-x,
//! min-y, max-y of the points inside it). An annular cell is cut by the
//! lines through the four sides of its inner box into at most 8
//! subrectangles, each contributing its own extrema, for at most 36 ids
//! after deduplication.

use crate::bbd::Cell;
use crate::error::{Error, Result};
use crate::geometry::{AxisRect, Point};

#[derive(Debug, Clone, Default)]
pub struct ExtremalSet {
    /// Sorted, deduplicated indices into the tree's point list.
    pub point_ids: Vec<u32>,
    /// The subdivision used; empty when the cell has no inner box.
    pub subrectangles: Vec<AxisRect>,
}

/// Min-x, max-x, min-y, max-y points of `P ∩ r` (closed containment),
/// deduplicated; ties broken by smallest point index.
pub fn ext(r: &AxisRect, points: &[Point]) -> Vec<u32> {
    let ids: Vec<u32> = (0..points.len() as u32).collect();
    ext_among(r, points, &ids, |_, _| true)
}

fn ext_among(
    r: &AxisRect,
    points: &[Point],
    candidates: &[u32],
    extra: impl Fn(&AxisRect, Point) -> bool,
) -> Vec<u32> {
    let mut min_x: Option<u32> = None;
    let mut max_x: Option<u32> = None;
    let mut min_y: Option<u32> = None;
    let mut max_y: Option<u32> = None;
    let mut sorted: Vec<u32> = candidates.to_vec();
    sorted.sort_unstable();
    for &i in &sorted {
        let p = points[i as usize];
        if !r.contains(p) || !extra(r, p) {
            continue;
        }
        if min_x.is_none_or(|j| p.x < points[j as usize].x) {
            min_x = Some(i);
        }
        if max_x.is_none_or(|j| p.x > points[j as usize].x) {
            max_x = Some(i);
        }
        if min_y.is_none_or(|j| p.y < points[j as usize].y) {
            min_y = Some(i);
        }
        if max_y.is_none_or(|j| p.y > points[j as usize].y) {
            max_y = Some(i);
        }
    }
    let mut out: Vec<u32> = [min_x, max_x, min_y, max_y].into_iter().flatten().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The nonempty rectangles among the regions of `r_out \ r_in` cut by the
/// lines through the four sides of `r_in` (the 3x3 grid minus the center),
/// enumerated bottom-to-top, left-to-right.
pub fn subdivide_cell(c: &Cell) -> Result<Vec<AxisRect>> {
    let ri = c.r_in.as_ref().ok_or(Error::NothingToSubdivide)?;
    let ro = &c.r_out;
    let xs = [ro.x_lo, ri.x_lo, ri.x_hi, ro.x_hi];
    let ys = [ro.y_lo, ri.y_lo, ri.y_hi, ro.y_hi];
    let mut out = Vec::new();
    for j in 0..3 {
        for i in 0..3 {
            if i == 1 && j == 1 {
                continue;
            }
            let r = AxisRect {
                x_lo: xs[i],
                x_hi: xs[i + 1],
                y_lo: ys[j],
                y_hi: ys[j + 1],
            };
            if r.x_hi > r.x_lo && r.y_hi > r.y_lo {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Half-open membership local to a cell: low sides closed, high sides open
/// unless flush with the cell's outer box.
fn ho_in_subrect(r: &AxisRect, r_out: &AxisRect, p: Point) -> bool {
    p.x >= r.x_lo
        && p.y >= r.y_lo
        && (p.x < r.x_hi || r.x_hi == r_out.x_hi)
        && (p.y < r.y_hi || r.y_hi == r_out.y_hi)
}

/// Extremal set of a cell: `ext` of the outer box when there is no inner
/// box, otherwise the union of `ext` over the subdivision, with each
/// candidate point assigned to the first subrectangle containing it under
/// the half-open convention.
pub fn ext_cell(c: &Cell, points: &[Point], candidates: &[u32]) -> Result<ExtremalSet> {
    match &c.r_in {
        None => Ok(ExtremalSet {
            point_ids: ext_among(&c.r_out, points, candidates, |_, _| true),
            subrectangles: Vec::new(),
        }),
        Some(_) => {
            let subrects = subdivide_cell(c)?;
            let mut per_rect: Vec<Vec<u32>> = vec![Vec::new(); subrects.len()];
            for &i in candidates {
                let p = points[i as usize];
                if let Some(k) = subrects
                    .iter()
                    .position(|r| ho_in_subrect(r, &c.r_out, p))
                {
                    per_rect[k].push(i);
                }
            }
            let mut ids = Vec::new();
            for (r, cand) in subrects.iter().zip(&per_rect) {
                ids.extend(ext_among(r, points, cand, |_, _| true));
            }
            ids.sort_unstable();
            ids.dedup();
            Ok(ExtremalSet {
                point_ids: ids,
                subrectangles: subrects,
            })
        }
    }
}
